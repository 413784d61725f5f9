use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{FiniteOmegaAlgebra, Hand, OmegaError};

/// What acts in an action node: a bare element of the acting algebra, or (in
/// a tower) a word one level down.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Actor {
    Element(usize),
    Word(Arc<Word>),
}

/// A derivation of an element from generators. Shared subwords make it a DAG.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Gen(usize),
    Op { op: usize, args: Vec<Arc<Word>> },
    Act { actor: Actor, arg: Arc<Word> },
}

impl Word {
    pub fn gen(x: usize) -> Arc<Word> {
        Arc::new(Word::Gen(x))
    }

    /// Generators occurring at this word's own level.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_gens(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_gens(&self, out: &mut Vec<usize>) {
        match self {
            Word::Gen(x) => out.push(*x),
            Word::Op { args, .. } => args.iter().for_each(|a| a.collect_gens(out)),
            Word::Act { arg, .. } => arg.collect_gens(out),
        }
    }

    /// Replace generators: level 0 uses `maps[0]`, words inside actors use
    /// `maps[1]`, and so on downwards.
    pub fn substitute(w: &Arc<Word>, maps: &[&BTreeMap<usize, Arc<Word>>]) -> Result<Arc<Word>, OmegaError> {
        let mut memo = vec![HashMap::new(); maps.len()];
        subst(w, maps, 0, &mut memo)
    }

    /// Text rendering. `levels[0]` describes this word's level, `levels[1]`
    /// the level of actor words, and so on.
    pub fn render(&self, levels: &[Level<'_>], hand: Hand) -> String {
        self.render_at(levels, 0, hand)
    }

    fn render_at(&self, levels: &[Level<'_>], depth: usize, hand: Hand) -> String {
        let lv = &levels[depth];
        match self {
            Word::Gen(x) => lv.alg.label(*x).to_string(),
            Word::Op { op, args } => {
                let name = &lv.alg.signature().ops()[*op].name;
                let parts: Vec<String> = args.iter().map(|a| a.render_at(levels, depth, hand)).collect();
                if parts.len() == 2 && !name.chars().any(char::is_alphanumeric) {
                    format!("({} {} {})", parts[0], name, parts[1])
                } else {
                    format!("{}({})", name, parts.join(", "))
                }
            }
            Word::Act { actor, arg } => {
                let a = match actor {
                    Actor::Element(a) => lv.actor_labels.map_or_else(|| a.to_string(), |l| l[*a].clone()),
                    Actor::Word(w) => format!("<{}>", w.render_at(levels, depth + 1, hand)),
                };
                let inner = arg.render_at(levels, depth, hand);
                match hand {
                    Hand::Left => format!("{a}.{inner}"),
                    Hand::Right => format!("{inner}.{a}"),
                }
            }
        }
    }
}

type Memo = HashMap<*const Word, (Arc<Word>, Arc<Word>)>;

fn subst(
    w: &Arc<Word>,
    maps: &[&BTreeMap<usize, Arc<Word>>],
    depth: usize,
    memo: &mut Vec<Memo>,
) -> Result<Arc<Word>, OmegaError> {
    let key = Arc::as_ptr(w);
    if let Some((_, out)) = memo[depth].get(&key) {
        return Ok(out.clone());
    }
    let out = match &**w {
        Word::Gen(x) => maps[depth].get(x).cloned().ok_or(OmegaError::GeneratorMismatch(*x))?,
        Word::Op { op, args } => {
            let args = args.iter().map(|a| subst(a, maps, depth, memo)).collect::<Result<_, _>>()?;
            Arc::new(Word::Op { op: *op, args })
        }
        Word::Act { actor, arg } => {
            let actor = match actor {
                Actor::Element(a) => Actor::Element(*a),
                Actor::Word(aw) => {
                    if depth + 1 >= maps.len() {
                        Actor::Word(aw.clone())
                    } else {
                        Actor::Word(subst(aw, maps, depth + 1, memo)?)
                    }
                }
            };
            Arc::new(Word::Act { actor, arg: subst(arg, maps, depth, memo)? })
        }
    };
    memo[depth].insert(key, (w.clone(), out.clone()));
    Ok(out)
}

/// One level of an evaluation context: the algebra words live in, the table
/// of the action on it (if any), and the value of each generator.
#[derive(Clone, Copy)]
pub struct Level<'a> {
    pub alg: &'a FiniteOmegaAlgebra,
    pub action: Option<&'a [Vec<usize>]>,
    pub actor_labels: Option<&'a [String]>,
    pub assign: &'a [Option<usize>],
}

/// Evaluates words with memoization on shared nodes. Level 0 is the level of
/// the words passed to `eval`; actor words are evaluated one level further.
pub struct Evaluator<'a> {
    levels: Vec<Level<'a>>,
    memo: Vec<HashMap<*const Word, (Arc<Word>, usize)>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(levels: Vec<Level<'a>>) -> Evaluator<'a> {
        let memo = vec![HashMap::new(); levels.len()];
        Evaluator { levels, memo }
    }

    pub fn eval(&mut self, w: &Arc<Word>) -> Result<usize, OmegaError> {
        self.eval_at(w, 0)
    }

    fn eval_at(&mut self, w: &Arc<Word>, depth: usize) -> Result<usize, OmegaError> {
        let key = Arc::as_ptr(w);
        if let Some((_, v)) = self.memo[depth].get(&key) {
            return Ok(*v);
        }
        let lv = self.levels[depth];
        let v = match &**w {
            Word::Gen(x) => lv.assign.get(*x).copied().flatten().ok_or(OmegaError::MissingGenerator(*x))?,
            Word::Op { op, args } => {
                let vals = args.iter().map(|a| self.eval_at(a, depth)).collect::<Result<Vec<_>, _>>()?;
                lv.alg.apply(*op, &vals)
            }
            Word::Act { actor, arg } => {
                let a = match actor {
                    Actor::Element(a) => *a,
                    Actor::Word(aw) => {
                        if depth + 1 >= self.levels.len() {
                            return Err(OmegaError::Invalid("actor word without a lower level".into()));
                        }
                        self.eval_at(aw, depth + 1)?
                    }
                };
                let m = self.eval_at(arg, depth)?;
                let table = lv.action.ok_or_else(|| OmegaError::Invalid("no action at this level".into()))?;
                table[a][m]
            }
        };
        self.memo[depth].insert(key, (w.clone(), v));
        Ok(v)
    }
}

/// Assignment sending every generator x in `xs` to itself.
pub(crate) fn identity_assignment(size: usize, xs: &[usize]) -> Vec<Option<usize>> {
    let mut a = vec![None; size];
    for &x in xs {
        a[x] = Some(x);
    }
    a
}
