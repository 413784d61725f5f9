use std::collections::BTreeMap;
use std::sync::Arc;

use super::word::identity_assignment;
use super::{Actor, Evaluator, FiniteOmegaAlgebra, Level, OmegaError, Representation, Tuples, Word};
use crate::par::{self, Exec};

/// Smallest stable subalgebra containing the generators, with a first
/// derivation and its level for every member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    /// Members in carrier order.
    pub members: Vec<usize>,
    pub word_of: BTreeMap<usize, Arc<Word>>,
    pub level: BTreeMap<usize, usize>,
    pub generators: Vec<usize>,
}

impl ClosureResult {
    pub fn contains(&self, m: usize) -> bool {
        self.word_of.contains_key(&m)
    }

    pub fn is_full(&self, size: usize) -> bool {
        self.members.len() == size
    }
}

/// Breadth-first closure. Level 0 is the generators in carrier order. Each
/// later level applies the operations in signature order to argument tuples
/// (lexicographic, over the members known at the start of the level) that
/// involve at least one element of the previous level, then the actors in
/// the given order to those elements. The first derivation found is kept.
pub fn closure_core(
    alg: &FiniteOmegaAlgebra,
    action: &[Vec<usize>],
    actors: &[(usize, Actor)],
    gens: &[usize],
) -> ClosureResult {
    let n = alg.size();
    let mut word_of: BTreeMap<usize, Arc<Word>> = BTreeMap::new();
    let mut level: BTreeMap<usize, usize> = BTreeMap::new();
    let mut generators: Vec<usize> = gens.to_vec();
    generators.sort_unstable();
    generators.dedup();
    for &x in &generators {
        word_of.insert(x, Word::gen(x));
        level.insert(x, 0);
    }
    let mut k = 0;
    loop {
        let snapshot: Vec<usize> = word_of.keys().copied().collect();
        let fresh = |x: usize, level: &BTreeMap<usize, usize>| level[&x] == k;
        let mut found: Vec<(usize, Arc<Word>)> = Vec::new();
        let mut seen = vec![false; n];
        for &m in &snapshot {
            seen[m] = true;
        }
        for (op, o) in alg.signature().ops().iter().enumerate() {
            if o.arity == 0 && k > 0 {
                continue;
            }
            for t in Tuples::new(snapshot.len(), o.arity) {
                let args: Vec<usize> = t.iter().map(|&i| snapshot[i]).collect();
                if o.arity > 0 && !args.iter().any(|&a| fresh(a, &level)) {
                    continue;
                }
                let v = alg.apply(op, &args);
                if !seen[v] {
                    seen[v] = true;
                    let args = args.iter().map(|a| word_of[a].clone()).collect();
                    found.push((v, Arc::new(Word::Op { op, args })));
                }
            }
        }
        for (a, actor) in actors {
            for &m in &snapshot {
                if !fresh(m, &level) {
                    continue;
                }
                let v = action[*a][m];
                if !seen[v] {
                    seen[v] = true;
                    found.push((v, Arc::new(Word::Act { actor: actor.clone(), arg: word_of[&m].clone() })));
                }
            }
        }
        if found.is_empty() {
            break;
        }
        k += 1;
        for (v, w) in found {
            word_of.insert(v, w);
            level.insert(v, k);
        }
    }
    ClosureResult { members: word_of.keys().copied().collect(), word_of, level, generators }
}

fn element_actors(rep: &Representation) -> Vec<(usize, Actor)> {
    (0..rep.acting().size()).map(|a| (a, Actor::Element(a))).collect()
}

pub fn closure(rep: &Representation, gens: &[usize]) -> ClosureResult {
    closure_core(rep.acted(), rep.action(), &element_actors(rep), gens)
}

fn generates(rep: &Representation, gens: &[usize]) -> bool {
    closure(rep, gens).is_full(rep.acted().size())
}

/// Drop generators while the rest still generates, scanning from the largest
/// carrier index down.
pub fn extract_basis(rep: &Representation, gens: &[usize]) -> Result<Vec<usize>, OmegaError> {
    let mut current: Vec<usize> = gens.to_vec();
    current.sort_unstable();
    current.dedup();
    if !generates(rep, &current) {
        return Err(OmegaError::NotGenerating);
    }
    for x in current.clone().into_iter().rev() {
        let without: Vec<usize> = current.iter().copied().filter(|&y| y != x).collect();
        if generates(rep, &without) {
            current = without;
        }
    }
    Ok(current)
}

/// Words over a generating set, keyed by the element they describe (for an
/// endomorphism R: keyed by the generator x, describing R(x)).
pub type Coordinates = BTreeMap<usize, Arc<Word>>;

/// x ↦ word of R(x) relative to the generating set.
pub fn endo_coordinates(rep: &Representation, gens: &[usize], r: &[usize]) -> Result<Coordinates, OmegaError> {
    let cl = closure(rep, gens);
    if !cl.is_full(rep.acted().size()) {
        return Err(OmegaError::NotGenerating);
    }
    if r.len() != rep.acted().size() || !rep.is_endomorphism(r) {
        return Err(OmegaError::NotRepEndomorphism);
    }
    Ok(cl.generators.iter().map(|&x| (x, cl.word_of[&r[x]].clone())).collect())
}

/// Substitute the words of `w_r` for the generators inside `w_y`.
pub fn superpose(w_y: &Coordinates, w_r: &Coordinates) -> Result<Coordinates, OmegaError> {
    w_y.iter()
        .map(|(k, w)| Ok((*k, Word::substitute(w, &[w_r])?)))
        .collect()
}

/// Evaluate every word under the assignment x ↦ images[x].
pub fn eval_coordinates(
    rep: &Representation,
    coords: &Coordinates,
    images: &[Option<usize>],
) -> Result<BTreeMap<usize, usize>, OmegaError> {
    let lv = Level { alg: rep.acted(), action: Some(rep.action()), actor_labels: None, assign: images };
    let mut ev = Evaluator::new(vec![lv]);
    coords.iter().map(|(k, w)| Ok((*k, ev.eval(w)?))).collect()
}

/// The image of the generating set under R still generates.
pub fn is_regular(rep: &Representation, gens: &[usize], r: &[usize]) -> Result<bool, OmegaError> {
    if !generates(rep, gens) {
        return Err(OmegaError::NotGenerating);
    }
    let image: Vec<usize> = gens.iter().map(|&x| r[x]).collect();
    Ok(generates(rep, &image))
}

/// All endomorphisms of the representation (identity on the acting algebra),
/// found by sending the generators anywhere, extending along the closure
/// words and keeping the maps that pass the endomorphism check.
pub fn enumerate_endomorphisms(rep: &Representation, gens: &[usize], exec: Exec) -> Result<Vec<Vec<usize>>, OmegaError> {
    let n = rep.acted().size();
    let cl = closure(rep, gens);
    if !cl.is_full(n) {
        return Err(OmegaError::NotGenerating);
    }
    let g = cl.generators.clone();
    let total = n.checked_pow(g.len() as u32).ok_or(OmegaError::Invalid("too many candidates".into()))?;
    let candidates = par::map_range(exec, total, |mut code| {
        let mut assign = vec![None; n];
        for &x in &g {
            assign[x] = Some(code % n);
            code /= n;
        }
        let lv = Level { alg: rep.acted(), action: Some(rep.action()), actor_labels: None, assign: &assign };
        let mut ev = Evaluator::new(vec![lv]);
        let r: Vec<usize> = (0..n).map(|m| ev.eval(&cl.word_of[&m]).expect("generators assigned")).collect();
        rep.is_endomorphism(&r).then_some(r)
    });
    let mut out: Vec<Vec<usize>> = candidates.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Identity assignment on a set of generators.
pub fn identity_on(size: usize, gens: &[usize]) -> Vec<Option<usize>> {
    identity_assignment(size, gens)
}
