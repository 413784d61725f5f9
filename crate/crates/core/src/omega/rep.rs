use std::sync::Arc;

use super::{FiniteOmegaAlgebra, OmegaError};
use crate::par::{self, Exec};

/// Which side the acting element is written on: `a v` (left) or `v a` (right).
/// For monoid and ring laws this decides whether f(ab) is f(a)∘f(b) or f(b)∘f(a).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hand {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// First binary operation of the acting algebra is a monoid product.
    MonoidAction,
    /// Acting algebra has `+`, `*` as its first two binary operations and the
    /// acted algebra has `+` as its first binary operation.
    RingOnAbelianGroup,
    /// Only the endomorphism property is checked.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepClass {
    pub effective: bool,
    pub transitive: bool,
    /// Transitive and effective.
    pub single_transitive: bool,
    /// For every m, m' exactly one a with f(a)(m) = m'.
    pub unique_connecting: bool,
}

/// A finite representation f: A → *M given by its table `action[a][m] = f(a)(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    acting: Arc<FiniteOmegaAlgebra>,
    acted: Arc<FiniteOmegaAlgebra>,
    action: Vec<Vec<usize>>,
    kind: RepKind,
    hand: Hand,
}

impl Representation {
    pub fn new(
        acting: Arc<FiniteOmegaAlgebra>,
        acted: Arc<FiniteOmegaAlgebra>,
        action: Vec<Vec<usize>>,
        kind: RepKind,
        hand: Hand,
    ) -> Result<Representation, OmegaError> {
        Self::new_with(acting, acted, action, kind, hand, Exec::default())
    }

    pub fn new_with(
        acting: Arc<FiniteOmegaAlgebra>,
        acted: Arc<FiniteOmegaAlgebra>,
        action: Vec<Vec<usize>>,
        kind: RepKind,
        hand: Hand,
        exec: Exec,
    ) -> Result<Representation, OmegaError> {
        if action.len() != acting.size() || action.iter().any(|r| r.len() != acted.size() || r.iter().any(|&x| x >= acted.size())) {
            return Err(OmegaError::Invalid("action table must be |A| x |M| with values in M".into()));
        }
        let rep = Representation { acting, acted, action, kind, hand };
        rep.check_endomorphisms(exec)?;
        match kind {
            RepKind::MonoidAction => rep.check_monoid(exec)?,
            RepKind::RingOnAbelianGroup => rep.check_ring(exec)?,
            RepKind::Raw => {}
        }
        Ok(rep)
    }

    pub fn acting(&self) -> &Arc<FiniteOmegaAlgebra> {
        &self.acting
    }

    pub fn acted(&self) -> &Arc<FiniteOmegaAlgebra> {
        &self.acted
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn hand(&self) -> Hand {
        self.hand
    }

    /// Same tables, different notation side.
    pub fn with_hand(&self, hand: Hand) -> Result<Representation, OmegaError> {
        Representation::new(self.acting.clone(), self.acted.clone(), self.action.clone(), self.kind, hand)
    }

    pub fn act(&self, a: usize, m: usize) -> usize {
        self.action[a][m]
    }

    pub fn transformation(&self, a: usize) -> &[usize] {
        &self.action[a]
    }

    fn check_endomorphisms(&self, exec: Exec) -> Result<(), OmegaError> {
        let m = &*self.acted;
        let bad = par::find_first(exec, self.acting.size(), |a| {
            let f = &self.action[a];
            m.homomorphism_failure(f, m).map(|(op, args)| (a, op, args))
        });
        match bad {
            Some((a, op, args)) => Err(OmegaError::NotEndomorphism { a, op: m.signature().ops()[op].name.clone(), args }),
            None => Ok(()),
        }
    }

    /// f(x) then f(y) in the order dictated by the hand: the transformation
    /// of the product x·y applied to m.
    fn composed(&self, x: usize, y: usize, m: usize) -> usize {
        match self.hand {
            Hand::Left => self.action[x][self.action[y][m]],
            Hand::Right => self.action[y][self.action[x][m]],
        }
    }

    fn check_product_law(&self, op: usize, exec: Exec) -> Result<(), OmegaError> {
        let a = &*self.acting;
        let n = a.size();
        let bad = par::find_first(exec, n, |x| {
            for y in 0..n {
                let xy = a.apply(op, &[x, y]);
                for m in 0..self.acted.size() {
                    if self.action[xy][m] != self.composed(x, y, m) {
                        return Some((x, y, m));
                    }
                }
            }
            None
        });
        match bad {
            Some((x, y, m)) => Err(OmegaError::LawViolation {
                law: format!("multiplicativity ({:?} hand)", self.hand),
                witness: format!("a={}, b={}, m={}", a.label(x), a.label(y), self.acted.label(m)),
            }),
            None => Ok(()),
        }
    }

    fn check_monoid(&self, exec: Exec) -> Result<(), OmegaError> {
        let op = *self.acting.signature().binary().first().ok_or_else(|| OmegaError::LawViolation {
            law: "monoid action".into(),
            witness: "acting algebra has no binary operation".into(),
        })?;
        let e = self.acting.identity_of(op).ok_or_else(|| OmegaError::LawViolation {
            law: "monoid identity".into(),
            witness: "acting algebra has no identity element".into(),
        })?;
        if let Some(m) = (0..self.acted.size()).find(|&m| self.action[e][m] != m) {
            return Err(OmegaError::LawViolation {
                law: "identity acts trivially".into(),
                witness: format!("m={}", self.acted.label(m)),
            });
        }
        self.check_product_law(op, exec)
    }

    fn check_ring(&self, exec: Exec) -> Result<(), OmegaError> {
        let bin = self.acting.signature().binary();
        let mbin = self.acted.signature().binary();
        if bin.len() < 2 || mbin.is_empty() {
            return Err(OmegaError::LawViolation {
                law: "ring on abelian group".into(),
                witness: "need + and * on the acting algebra and + on the acted algebra".into(),
            });
        }
        let (add, mul, madd) = (bin[0], bin[1], mbin[0]);
        let a = &*self.acting;
        let m = &*self.acted;
        let bad = par::find_first(exec, a.size(), |x| {
            for y in 0..a.size() {
                let s = a.apply(add, &[x, y]);
                for v in 0..m.size() {
                    if self.action[s][v] != m.apply(madd, &[self.action[x][v], self.action[y][v]]) {
                        return Some((x, y, v));
                    }
                }
            }
            None
        });
        if let Some((x, y, v)) = bad {
            return Err(OmegaError::LawViolation {
                law: "additivity in the acting element".into(),
                witness: format!("a={}, b={}, m={}", a.label(x), a.label(y), m.label(v)),
            });
        }
        // additivity in the acted element is part of the endomorphism check
        self.check_product_law(mul, exec)
    }

    pub fn classify(&self) -> RepClass {
        let na = self.acting.size();
        let nm = self.acted.size();
        let effective = (0..na).all(|a| (0..a).all(|b| self.action[a] != self.action[b]));
        let mut counts = vec![0usize; nm * nm];
        for row in &self.action {
            for (m, &v) in row.iter().enumerate() {
                counts[m * nm + v] += 1;
            }
        }
        let transitive = counts.iter().all(|&c| c >= 1);
        let unique_connecting = counts.iter().all(|&c| c == 1);
        RepClass { effective, transitive, single_transitive: effective && transitive, unique_connecting }
    }

    /// R is an Ω₂-endomorphism of M commuting with every f(a).
    pub fn is_endomorphism(&self, r: &[usize]) -> bool {
        self.acted.is_homomorphism(r, &self.acted)
            && (0..self.acting.size()).all(|a| (0..self.acted.size()).all(|m| r[self.action[a][m]] == self.action[a][r[m]]))
    }
}

#[cfg(test)]
mod tests {
    use super::super::builders::*;
    use super::super::Signature;
    use super::*;

    #[test]
    fn constant_action_is_rejected_unless_zero() {
        let c6 = Arc::new(cyclic(6, None));
        let constant = |k: usize| vec![vec![k; 6]; 6];
        let err = Representation::new(c6.clone(), c6.clone(), constant(2), RepKind::Raw, Hand::Left);
        assert!(matches!(err, Err(OmegaError::NotEndomorphism { .. })));
        assert!(Representation::new(c6.clone(), c6, constant(0), RepKind::Raw, Hand::Left).is_ok());
    }

    #[test]
    fn handedness_matters_for_noncommutative_monoids() {
        // S3 acting on three points; left and right conventions need opposite tables
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let compose = |p: [usize; 3], q: [usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let table = (0..36).map(|k| idx(compose(perms[k / 6], perms[k % 6]))).collect();
        let sig = Signature::new(vec![("*".into(), 2)]).unwrap();
        let s3 = Arc::new(FiniteOmegaAlgebra::new((0..6).map(|i| format!("s{i}")).collect(), sig, vec![table]).unwrap());
        let pts = Arc::new(FiniteOmegaAlgebra::bare(vec!["x".into(), "y".into(), "z".into()]).unwrap());
        let action: Vec<Vec<usize>> = perms.iter().map(|p| p.to_vec()).collect();
        let left = Representation::new(s3.clone(), pts.clone(), action.clone(), RepKind::MonoidAction, Hand::Left).unwrap();
        assert!(Representation::new(s3, pts, action, RepKind::MonoidAction, Hand::Right).is_err());
        let c = left.classify();
        assert!(c.single_transitive);
        assert!(!c.unique_connecting);
    }

    #[test]
    fn classification_examples() {
        let c6 = translation(cyclic(6, None), Hand::Left).unwrap();
        let c = c6.classify();
        assert!(c.single_transitive && c.unique_connecting);

        let c3pts = Arc::new(FiniteOmegaAlgebra::bare((0..3).map(|i| i.to_string()).collect()).unwrap());
        let action = (0..6).map(|a| (0..3).map(|m| (a + m) % 3).collect()).collect();
        let mod3 = Representation::new(Arc::new(cyclic(6, None)), c3pts, action, RepKind::MonoidAction, Hand::Left).unwrap();
        let c = mod3.classify();
        assert!(c.transitive && !c.effective);

        let two = Arc::new(FiniteOmegaAlgebra::bare(vec!["u".into(), "v".into()]).unwrap());
        let trivial = Representation::new(Arc::new(cyclic(6, None)), two, vec![vec![0, 1]; 6], RepKind::MonoidAction, Hand::Left).unwrap();
        let c = trivial.classify();
        assert!(!c.effective && !c.transitive);
    }

    #[test]
    fn module_action_is_valid() {
        let r = scalar_action(3, 2);
        assert_eq!(r.kind(), RepKind::RingOnAbelianGroup);
        let bad_action: Vec<Vec<usize>> = (0..3).map(|_| (0..9).collect()).collect();
        let f3 = r.acting().clone();
        let v = r.acted().clone();
        assert!(Representation::new(f3, v, bad_action, RepKind::RingOnAbelianGroup, Hand::Left).is_err());
    }
}
