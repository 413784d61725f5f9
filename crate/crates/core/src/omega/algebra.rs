use super::OmegaError;

pub const DEFAULT_CARRIER_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Op {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<Op>,
}

impl Signature {
    pub fn new(ops: Vec<(String, usize)>) -> Result<Signature, OmegaError> {
        let ops: Vec<Op> = ops.into_iter().map(|(name, arity)| Op { name, arity }).collect();
        for (i, a) in ops.iter().enumerate() {
            if ops[..i].iter().any(|b| b.name == a.name) {
                return Err(OmegaError::Invalid(format!("duplicate operation {}", a.name)));
            }
        }
        Ok(Signature { ops })
    }

    pub fn empty() -> Signature {
        Signature::default()
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Indices of the binary operations, in signature order.
    pub fn binary(&self) -> Vec<usize> {
        (0..self.ops.len()).filter(|&i| self.ops[i].arity == 2).collect()
    }
}

/// Lexicographic enumeration of carrier^arity, first argument most significant.
#[derive(Clone, Debug)]
pub struct Tuples {
    size: usize,
    cur: Option<Vec<usize>>,
}

impl Tuples {
    pub fn new(size: usize, arity: usize) -> Tuples {
        let cur = if size == 0 && arity > 0 { None } else { Some(vec![0; arity]) };
        Tuples { size, cur }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.size {
                self.cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// A finite carrier with total operation tables. Elements are carrier indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteOmegaAlgebra {
    labels: Vec<String>,
    sig: Signature,
    tables: Vec<Vec<usize>>,
}

impl FiniteOmegaAlgebra {
    pub fn new(labels: Vec<String>, sig: Signature, tables: Vec<Vec<usize>>) -> Result<Self, OmegaError> {
        Self::with_bound(labels, sig, tables, DEFAULT_CARRIER_BOUND)
    }

    pub fn with_bound(
        labels: Vec<String>,
        sig: Signature,
        tables: Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<Self, OmegaError> {
        let n = labels.len();
        if n > bound {
            return Err(OmegaError::CarrierTooLarge { size: n, bound });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(OmegaError::Invalid(format!("duplicate label {l}")));
            }
        }
        if tables.len() != sig.len() {
            return Err(OmegaError::Invalid("one table per operation required".into()));
        }
        for (op, t) in sig.ops().iter().zip(&tables) {
            let expected = n.checked_pow(op.arity as u32).unwrap_or(usize::MAX);
            if t.len() != expected {
                return Err(OmegaError::Invalid(format!(
                    "table of {} has {} entries, expected {expected}",
                    op.name,
                    t.len()
                )));
            }
            if t.iter().any(|&v| v >= n) {
                return Err(OmegaError::Invalid(format!("table of {} leaves the carrier", op.name)));
            }
        }
        Ok(FiniteOmegaAlgebra { labels, sig, tables })
    }

    /// A set without operations.
    pub fn bare(labels: Vec<String>) -> Result<Self, OmegaError> {
        Self::new(labels, Signature::empty(), vec![])
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, OmegaError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| OmegaError::UnknownLabel(label.to_string()))
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.sig.ops().iter().position(|o| o.name == name)
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.sig.ops()[op].arity);
        let n = self.size();
        let idx = args.iter().fold(0, |acc, &a| acc * n + a);
        self.tables[op][idx]
    }

    pub fn tuples(&self, arity: usize) -> Tuples {
        Tuples::new(self.size(), arity)
    }

    /// First operation/argument tuple where `h` fails to be a homomorphism into `target`.
    pub fn homomorphism_failure(&self, h: &[usize], target: &FiniteOmegaAlgebra) -> Option<(usize, Vec<usize>)> {
        if h.len() != self.size() || h.iter().any(|&x| x >= target.size()) || self.sig != target.sig {
            return Some((usize::MAX, vec![]));
        }
        for (op, o) in self.sig.ops().iter().enumerate() {
            for args in self.tuples(o.arity) {
                let lhs = h[self.apply(op, &args)];
                let mapped: Vec<usize> = args.iter().map(|&a| h[a]).collect();
                if lhs != target.apply(op, &mapped) {
                    return Some((op, args));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self, h: &[usize], target: &FiniteOmegaAlgebra) -> bool {
        self.homomorphism_failure(h, target).is_none()
    }

    /// True when `members` is closed under every operation.
    pub fn is_subalgebra(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.size()];
        for &m in members {
            inside[m] = true;
        }
        self.sig.ops().iter().enumerate().all(|(op, o)| {
            Tuples::new(members.len(), o.arity).all(|t| {
                let args: Vec<usize> = t.iter().map(|&i| members[i]).collect();
                inside[self.apply(op, &args)]
            })
        })
    }

    /// The subalgebra on `members` (sorted, closed), with element k of the
    /// result being `members[k]`.
    pub fn restrict(&self, members: &[usize]) -> Result<FiniteOmegaAlgebra, OmegaError> {
        let pos = |x: usize| members.iter().position(|&m| m == x);
        let labels = members.iter().map(|&m| self.labels[m].clone()).collect();
        let mut tables = Vec::new();
        for (op, o) in self.sig.ops().iter().enumerate() {
            let mut t = Vec::new();
            for tup in Tuples::new(members.len(), o.arity) {
                let args: Vec<usize> = tup.iter().map(|&i| members[i]).collect();
                let v = pos(self.apply(op, &args))
                    .ok_or_else(|| OmegaError::Invalid("members are not closed".into()))?;
                t.push(v);
            }
            tables.push(t);
        }
        FiniteOmegaAlgebra::with_bound(labels, self.sig.clone(), tables, usize::MAX)
    }

    /// Quotient by the partition `class_of` (class ids 0..k in order of first
    /// appearance). Fails when the partition is not a congruence.
    pub fn quotient(&self, class_of: &[usize]) -> Result<FiniteOmegaAlgebra, OmegaError> {
        let k = class_of.iter().max().map_or(0, |m| m + 1);
        let rep: Vec<usize> = (0..k)
            .map(|c| class_of.iter().position(|&x| x == c).expect("class ids are dense"))
            .collect();
        let labels = rep.iter().map(|&r| format!("[{}]", self.labels[r])).collect();
        let mut tables = Vec::new();
        for (op, o) in self.sig.ops().iter().enumerate() {
            let mut t = Vec::new();
            for tup in Tuples::new(k, o.arity) {
                let args: Vec<usize> = tup.iter().map(|&c| rep[c]).collect();
                t.push(class_of[self.apply(op, &args)]);
            }
            tables.push(t);
            // congruence: every choice of representatives agrees
            for tup in self.tuples(o.arity) {
                let classes: Vec<usize> = tup.iter().map(|&a| class_of[a]).collect();
                let via_rep: Vec<usize> = classes.iter().map(|&c| rep[c]).collect();
                if class_of[self.apply(op, &tup)] != class_of[self.apply(op, &via_rep)] {
                    return Err(OmegaError::Invalid(format!("partition is not compatible with {}", o.name)));
                }
            }
        }
        FiniteOmegaAlgebra::with_bound(labels, self.sig.clone(), tables, usize::MAX)
    }

    /// Identity element of binary operation `op`, if any.
    pub fn identity_of(&self, op: usize) -> Option<usize> {
        (0..self.size()).find(|&e| (0..self.size()).all(|x| self.apply(op, &[e, x]) == x && self.apply(op, &[x, e]) == x))
    }
}
