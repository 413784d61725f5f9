//! Towers of representations A₁ → A₂ → ... → Aₙ, where each algebra acts on
//! the next. Levels are numbered from 1 in the public API.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::omega::builders::{point_translation, scalar_action};
use crate::omega::{
    check_morphism, closure_core, Actor, ClosureResult, Coordinates, Evaluator, FiniteOmegaAlgebra, Level,
    OmegaError, RepKind, Representation, Word,
};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("a tower needs at least one representation")]
    Empty,
    #[error("representation {0} does not act on the acting algebra of the next one")]
    ChainMismatch(usize),
    #[error("level {0} is out of range")]
    BadLevel(usize),
    #[error("expected {expected} entries, found {found}")]
    LevelCount { expected: usize, found: usize },
    #[error("element {0} does not act as the identity")]
    NoIdentityPreimage(usize),
    #[error("tuple does not generate the tower")]
    NotGenerating,
    #[error("coordinates do not share generators")]
    GeneratorMismatch,
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

/// Representations f_{k,k+1} with matching carriers between neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    reps: Vec<Representation>,
}

pub fn build_tower(reps: Vec<Representation>) -> Result<Tower, TowerError> {
    if reps.is_empty() {
        return Err(TowerError::Empty);
    }
    for (k, w) in reps.windows(2).enumerate() {
        if w[0].acted() != w[1].acting() {
            return Err(TowerError::ChainMismatch(k + 1));
        }
    }
    Ok(Tower { reps })
}

/// 𝔽_p acting on 𝔽_p^d by scalars, which acts on p^d points by translation.
pub fn toy_affine(p: usize, d: usize) -> Tower {
    build_tower(vec![scalar_action(p, d), point_translation(p, d)]).expect("carriers agree")
}

impl Tower {
    /// Number of algebras.
    pub fn height(&self) -> usize {
        self.reps.len() + 1
    }

    /// A_i, i in 1..=height.
    pub fn algebra(&self, i: usize) -> &Arc<FiniteOmegaAlgebra> {
        if i == 1 {
            self.reps[0].acting()
        } else {
            self.reps[i - 2].acted()
        }
    }

    /// f_{k,k+1}, k in 1..height.
    pub fn rep(&self, k: usize) -> &Representation {
        &self.reps[k - 1]
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    fn check_level(&self, i: usize) -> Result<(), TowerError> {
        if i == 0 || i > self.height() {
            return Err(TowerError::BadLevel(i));
        }
        Ok(())
    }
}

/// Literal two-level extension: f′(a)(x) = f_{i+1,i+2}(f_{i,i+1}(a)(a₀))(x).
pub fn induced_two_level(t: &Tower, i: usize, a0: usize) -> Result<Representation, TowerError> {
    let (lower, upper) = two_levels(t, i)?;
    if a0 >= upper.acting().size() || !is_identity(upper.transformation(a0)) {
        return Err(TowerError::NoIdentityPreimage(a0));
    }
    let action = (0..lower.acting().size())
        .map(|a| upper.transformation(lower.act(a, a0)).to_vec())
        .collect();
    Ok(Representation::new(lower.acting().clone(), upper.acted().clone(), action, RepKind::Raw, lower.hand())?)
}

/// Extension anchored at a point x₀ of A_{i+2}: f′(a)(x) = f(a)(x₀x) applied
/// to x₀, where x₀x is the unique b ∈ A_{i+1} with f_{i+1,i+2}(b)(x₀) = x.
pub fn induced_anchored(t: &Tower, i: usize, x0: usize) -> Result<Representation, TowerError> {
    let (lower, upper) = two_levels(t, i)?;
    if !upper.classify().unique_connecting {
        return Err(OmegaError::NotSingleTransitive.into());
    }
    let m = upper.acted().size();
    if x0 >= m {
        return Err(OmegaError::Invalid(format!("point {x0} out of range")).into());
    }
    let vec_to: Vec<usize> = (0..m)
        .map(|x| (0..upper.acting().size()).find(|&b| upper.act(b, x0) == x).expect("transitive"))
        .collect();
    let action = (0..lower.acting().size())
        .map(|a| (0..m).map(|x| upper.act(lower.act(a, vec_to[x]), x0)).collect())
        .collect();
    Ok(Representation::new(lower.acting().clone(), upper.acted().clone(), action, RepKind::Raw, lower.hand())?)
}

fn two_levels(t: &Tower, i: usize) -> Result<(&Representation, &Representation), TowerError> {
    if i == 0 || i + 2 > t.height() {
        return Err(TowerError::BadLevel(i));
    }
    Ok((t.rep(i), t.rep(i + 1)))
}

fn is_identity(map: &[usize]) -> bool {
    map.iter().enumerate().all(|(k, &v)| k == v)
}

/// (h₁..hₙ) is a morphism of towers when every neighbouring pair is a
/// morphism of the representations between them.
pub fn check_tower_morphism(h: &[Vec<usize>], s: &Tower, t: &Tower) -> bool {
    s.height() == t.height()
        && h.len() == s.height()
        && (1..s.height()).all(|k| {
            h[k - 1].len() == s.algebra(k).size()
                && h[k].len() == s.algebra(k + 1).size()
                && check_morphism(&h[k - 1], &h[k], s.rep(k), t.rep(k))
        })
}

/// Stable tuple (Y₁..Yₙ) generated by (X₂..Xₙ), Y₁ = A₁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerClosure {
    /// Closures of levels 2..n, in order.
    pub levels: Vec<ClosureResult>,
    pub level1_size: usize,
}

impl TowerClosure {
    /// Members of Y_i.
    pub fn members(&self, i: usize) -> Vec<usize> {
        if i == 1 {
            (0..self.level1_size).collect()
        } else {
            self.levels[i - 2].members.clone()
        }
    }

    /// Closure result of level i ≥ 2.
    pub fn level(&self, i: usize) -> &ClosureResult {
        &self.levels[i - 2]
    }

    pub fn is_full(&self, t: &Tower) -> bool {
        (2..=t.height()).all(|i| self.level(i).is_full(t.algebra(i).size()))
    }
}

/// Level 2 is closed under the whole of A₁; each higher level under the
/// words of the members one level down.
pub fn tower_closure(t: &Tower, gens: &[Vec<usize>]) -> Result<TowerClosure, TowerError> {
    let n = t.height();
    if gens.len() != n - 1 {
        return Err(TowerError::LevelCount { expected: n - 1, found: gens.len() });
    }
    let mut levels: Vec<ClosureResult> = Vec::with_capacity(n - 1);
    for i in 2..=n {
        let alg = t.algebra(i);
        if let Some(&x) = gens[i - 2].iter().find(|&&x| x >= alg.size()) {
            return Err(OmegaError::Invalid(format!("generator {x} out of range at level {i}")).into());
        }
        let actors: Vec<(usize, Actor)> = match levels.last() {
            None => (0..t.algebra(1).size()).map(|a| (a, Actor::Element(a))).collect(),
            Some(prev) => prev.members.iter().map(|&b| (b, Actor::Word(prev.word_of[&b].clone()))).collect(),
        };
        levels.push(closure_core(alg, t.rep(i - 1).action(), &actors, &gens[i - 2]));
    }
    Ok(TowerClosure { levels, level1_size: t.algebra(1).size() })
}

/// Evaluate a level-i word with the given per-level generator assignments
/// (`assign[k]` is for level k + 2).
pub fn eval_tower_word(t: &Tower, i: usize, w: &Arc<Word>, assign: &[Vec<Option<usize>>]) -> Result<usize, TowerError> {
    t.check_level(i)?;
    if i < 2 || assign.len() < i - 1 {
        return Err(TowerError::BadLevel(i));
    }
    let levels: Vec<Level<'_>> = (2..=i)
        .rev()
        .map(|k| Level {
            alg: t.algebra(k),
            action: Some(t.rep(k - 1).action()),
            actor_labels: Some(t.algebra(k - 1).labels()),
            assign: &assign[k - 2],
        })
        .collect();
    Ok(Evaluator::new(levels).eval(w)?)
}

/// Render a level-i word with labels.
pub fn render_tower_word(t: &Tower, i: usize, w: &Word) -> String {
    let empty: Vec<Option<usize>> = Vec::new();
    let levels: Vec<Level<'_>> = (2..=i)
        .rev()
        .map(|k| Level {
            alg: t.algebra(k),
            action: Some(t.rep(k - 1).action()),
            actor_labels: Some(t.algebra(k - 1).labels()),
            assign: &empty,
        })
        .collect();
    w.render(&levels, t.rep(i - 1).hand())
}

fn identity_assignments(t: &Tower, gens: &[Vec<usize>]) -> Vec<Vec<Option<usize>>> {
    (2..=t.height())
        .map(|i| {
            let mut a = vec![None; t.algebra(i).size()];
            for &x in &gens[i - 2] {
                a[x] = Some(x);
            }
            a
        })
        .collect()
}

/// Coordinates of a tower endomorphism (id, h₂..hₙ): per level, the word of
/// h_i(x) for each generator x.
pub type TowerCoordinates = Vec<Coordinates>;

/// (id, h₂..hₙ) given as the maps h₂..hₙ.
pub fn is_tower_endomorphism(t: &Tower, h: &[Vec<usize>]) -> bool {
    if h.len() != t.height() - 1 {
        return false;
    }
    let mut full: Vec<Vec<usize>> = vec![(0..t.algebra(1).size()).collect()];
    full.extend(h.iter().cloned());
    check_tower_morphism(&full, t, t)
}

pub fn tower_coordinates(t: &Tower, gens: &[Vec<usize>], h: &[Vec<usize>]) -> Result<TowerCoordinates, TowerError> {
    let cl = tower_closure(t, gens)?;
    if !cl.is_full(t) {
        return Err(TowerError::NotGenerating);
    }
    if !is_tower_endomorphism(t, h) {
        return Err(OmegaError::NotRepEndomorphism.into());
    }
    Ok((2..=t.height())
        .map(|i| {
            let lv = cl.level(i);
            lv.generators.iter().map(|&x| (x, lv.word_of[&h[i - 2][x]].clone())).collect()
        })
        .collect())
}

/// Level-wise substitution: generators of level i are replaced by the words
/// of `w_r` at level i, generators inside actor words by those one level down.
pub fn tower_superpose(w_y: &TowerCoordinates, w_r: &TowerCoordinates) -> Result<TowerCoordinates, TowerError> {
    if w_y.len() != w_r.len() {
        return Err(TowerError::GeneratorMismatch);
    }
    w_y.iter()
        .enumerate()
        .map(|(k, level)| {
            let maps: Vec<&Coordinates> = (0..=k).rev().map(|j| &w_r[j]).collect();
            level
                .iter()
                .map(|(x, w)| match Word::substitute(w, &maps) {
                    Ok(s) => Ok((*x, s)),
                    Err(OmegaError::GeneratorMismatch(_)) => Err(TowerError::GeneratorMismatch),
                    Err(e) => Err(e.into()),
                })
                .collect()
        })
        .collect()
}

/// Evaluate tower coordinates under per-level assignments.
pub fn eval_tower_coordinates(
    t: &Tower,
    coords: &TowerCoordinates,
    assign: &[Vec<Option<usize>>],
) -> Result<Vec<BTreeMap<usize, usize>>, TowerError> {
    coords
        .iter()
        .enumerate()
        .map(|(k, level)| level.iter().map(|(x, w)| Ok((*x, eval_tower_word(t, k + 2, w, assign)?))).collect())
        .collect()
}

/// Evaluate tower coordinates at the identity assignment of the generators.
pub fn eval_tower_coordinates_at_identity(
    t: &Tower,
    gens: &[Vec<usize>],
    coords: &TowerCoordinates,
) -> Result<Vec<BTreeMap<usize, usize>>, TowerError> {
    eval_tower_coordinates(t, coords, &identity_assignments(t, gens))
}

/// All tower endomorphisms (id, h₂..hₙ), returned as h₂..hₙ. Candidates come
/// from sending generators anywhere and extending along closure words.
pub fn enumerate_tower_endomorphisms(t: &Tower, gens: &[Vec<usize>], exec: Exec) -> Result<Vec<Vec<Vec<usize>>>, TowerError> {
    let cl = tower_closure(t, gens)?;
    if !cl.is_full(t) {
        return Err(TowerError::NotGenerating);
    }
    let slots: Vec<(usize, usize)> =
        (2..=t.height()).flat_map(|i| cl.level(i).generators.iter().map(move |&x| (i, x))).collect();
    let mut total: usize = 1;
    for &(i, _) in &slots {
        total = total
            .checked_mul(t.algebra(i).size())
            .ok_or_else(|| OmegaError::Invalid("too many candidates".into()))?;
    }
    let candidates = par::map_range(exec, total, |mut code| {
        let mut assign: Vec<Vec<Option<usize>>> = (2..=t.height()).map(|i| vec![None; t.algebra(i).size()]).collect();
        for &(i, x) in &slots {
            let size = t.algebra(i).size();
            assign[i - 2][x] = Some(code % size);
            code /= size;
        }
        let h: Vec<Vec<usize>> = (2..=t.height())
            .map(|i| {
                (0..t.algebra(i).size())
                    .map(|m| eval_tower_word(t, i, &cl.level(i).word_of[&m], &assign).expect("generators assigned"))
                    .collect()
            })
            .collect();
        is_tower_endomorphism(t, &h).then_some(h)
    });
    let mut out: Vec<Vec<Vec<usize>>> = candidates.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Minimal generating tuple, built from the lowest level up: within a level,
/// generators are dropped from the largest index down while the whole tower
/// is still generated.
pub fn tower_basis(t: &Tower, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, TowerError> {
    let mut current: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g.dedup();
            g
        })
        .collect();
    let generates = |c: &[Vec<usize>]| -> Result<bool, TowerError> { Ok(tower_closure(t, c)?.is_full(t)) };
    if !generates(&current)? {
        return Err(TowerError::NotGenerating);
    }
    for k in 0..current.len() {
        for x in current[k].clone().into_iter().rev() {
            let mut trial = current.clone();
            trial[k].retain(|&y| y != x);
            if generates(&trial)? {
                current = trial;
            }
        }
    }
    Ok(current)
}

/// Whether A_i acts effectively on the transformations of A_{i+k} that arise
/// from A_{i+1} through the chain f_{i+1,i+2}, ..., f_{i+k−1,i+k}. Each
/// b ∈ A_{i+1} is identified with the table of its chained action
/// (c_{i+2}, ..., c_{i+k−1}, x) ↦ f(..f(f(b)(c_{i+2}))(c_{i+3})..)(x); a acts
/// on these tables through f_{i,i+1}. An action that is not well defined on
/// the tables counts as not effective. For k = 1 this is effectiveness of
/// f_{i,i+1}.
pub fn effectiveness_chain(t: &Tower, i: usize, k: usize) -> Result<bool, TowerError> {
    if i == 0 || k == 0 || i + k > t.height() {
        return Err(TowerError::BadLevel(i + k));
    }
    let lower = t.rep(i);
    if k == 1 {
        return Ok(lower.classify().effective);
    }
    let nb = t.algebra(i + 1).size();
    let tables: Vec<Vec<usize>> = (0..nb).map(|b| chained_table(t, i + 1, k - 1, b)).collect();
    let mut class_of: Vec<usize> = Vec::with_capacity(nb);
    let mut reps: Vec<&Vec<usize>> = Vec::new();
    for tb in &tables {
        match reps.iter().position(|r| *r == tb) {
            Some(c) => class_of.push(c),
            None => {
                reps.push(tb);
                class_of.push(reps.len() - 1);
            }
        }
    }
    let mut induced: Vec<Vec<Option<usize>>> = vec![vec![None; reps.len()]; lower.acting().size()];
    for (a, row) in induced.iter_mut().enumerate() {
        for b in 0..nb {
            let img = class_of[lower.act(a, b)];
            match row[class_of[b]] {
                None => row[class_of[b]] = Some(img),
                Some(v) if v != img => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok((0..induced.len()).all(|a| (0..a).all(|c| induced[a] != induced[c])))
}

/// Table of b ∈ A_j acting through `steps` representations f_{j,j+1}, ...
fn chained_table(t: &Tower, j: usize, steps: usize, b: usize) -> Vec<usize> {
    if steps == 1 {
        return t.rep(j).transformation(b).to_vec();
    }
    let next = t.algebra(j + 1).size();
    (0..next)
        .flat_map(|c| chained_table(t, j + 1, steps - 1, t.rep(j).act(b, c)))
        .collect()
}

/// Per-level classification and the effectiveness of every composed chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerClass {
    pub levels: Vec<crate::omega::RepClass>,
    /// (i, k, effective) for every admissible i, k ≥ 2.
    pub chains: Vec<(usize, usize, bool)>,
}

pub fn classify_tower(t: &Tower) -> TowerClass {
    let levels = t.reps.iter().map(Representation::classify).collect();
    let mut chains = Vec::new();
    for i in 1..t.height() {
        for k in 2..=(t.height() - i) {
            chains.push((i, k, effectiveness_chain(t, i, k).expect("indices in range")));
        }
    }
    TowerClass { levels, chains }
}
