//! Acceptance run: one line per criterion with its time budget.

#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use divring::affine::{shift, vec_between, AffineMap, AffineError, Plane};
use divring::algebra::{change_basis, transform_vector, Algebra, AlgebraError, BasisChange, Element};
use divring::calculus::{
    chart_connection, geodesic_residual, parallel_residual, pushforward_vector, Chart, Connection, InverseCheck,
    NCPoly, SignConvention,
};
use divring::forms::{diagonalize, solve_axxa, AxxaSolution, FormError, QuadraticMatrix};
use divring::omega::builders::{cyclic, cyclic_powers, point_translation, scalar_action, translation, trivial_over};
use divring::omega::{
    closure, decompose_morphism, endo_coordinates, enumerate_endomorphisms, eval_coordinates, extract_basis,
    superpose, FiniteOmegaAlgebra, Hand, RepKind, Representation, Signature,
};
use divring::par::Exec;
use divring::rational::{int, rat, Rational};
use divring::tower::{
    enumerate_tower_endomorphisms, eval_tower_coordinates, toy_affine, tower_coordinates,
    tower_superpose, Tower,
};
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

/// (number, name, time limit in seconds, check)
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "quaternion constants pass the associativity check, corruption is caught", 1, criterion_1),
        (2, "division-ring laws on random quaternions", 5, criterion_2),
        (3, "tensor laws under random basis changes", 10, criterion_3),
        (4, "a x + x a = b against a rank oracle", 5, criterion_4),
        (5, "diagonalization re-evaluates exactly", 30, criterion_5),
        (6, "closure matches naive saturation", 10, criterion_6),
        (7, "superposition laws for representations and towers", 10, criterion_7),
        (8, "C6 to C3 reduction decomposes", 2, criterion_8),
        (9, "affine group laws and parallelogram axiom", 10, criterion_9),
        (10, "plane membership via noncommutative rank", 5, criterion_10),
        (11, "linear chart round trip and vector rule", 5, criterion_11),
        (12, "connection coefficients, parallel fields, geodesics", 10, criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let res = panic::catch_unwind(f);
        let took = start.elapsed();
        let res = match res {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let res = res.and_then(|_| {
            if took <= Duration::from_secs(limit) {
                Ok(())
            } else {
                Err(format!("over the {limit} s limit"))
            }
        });
        match res {
            Ok(()) => println!("[PASS] criterion {n}: {name} ({} ms, limit {limit} s)", took.as_millis()),
            Err(e) => {
                failed += 1;
                println!("[FAIL] criterion {n}: {name} ({} ms, limit {limit} s): {e}", took.as_millis());
            }
        }
    }
    let _ = panic::take_hook();
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}

fn criterion_1() -> Outcome {
    let h = Algebra::quaternion();
    ensure!(associative_oracle(4, |i, j, k| h.c(i, j, k).clone()), "oracle rejects the built-in table");
    ensure!(h.check_associative(Exec::Sequential).is_ok(), "library rejects the built-in table");
    ensure!(h.check_associative(Exec::Parallel).is_ok(), "parallel check rejects the built-in table");
    // bump each product constant not fixed by the unit, one at a time
    for i in 1..4 {
        for j in 1..4 {
            for k in 0..4 {
                let mut c = h.constants();
                c[i][j][k] += Rational::one();
                ensure!(
                    !associative_oracle(4, |a, b, d| c[a][b][d].clone()),
                    "oracle misses corruption at ({i},{j},{k})"
                );
                let got = Algebra::new(c, 0);
                ensure!(
                    matches!(got, Err(AlgebraError::AssociativityViolation { .. })),
                    "corruption at ({i},{j},{k}) not detected: {got:?}"
                );
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let h = Algebra::quaternion();
    let one = h.one();
    for _ in 0..1000 {
        let a = rand_nonzero_quat(&mut r);
        let inv = a.inverse().map_err(|e| e.to_string())?;
        ensure!(inv == hinv(&a), "inverse of {a} differs from conjugate over norm");
        ensure!(&a * &inv == one && &inv * &a == one, "a a⁻¹ ≠ 1 for {a}");
    }
    for _ in 0..500 {
        let (a, b, c) = (rand_quat(&mut r), rand_quat(&mut r), rand_quat(&mut r));
        let lhs = &(&a * &b) * &c;
        ensure!(lhs == &a * &(&b * &c), "associativity fails for {a}, {b}, {c}");
        ensure!(lhs == hq(&hq(&a, &b), &c), "product differs from Hamilton oracle");
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let h = Algebra::quaternion();
    for _ in 0..50 {
        let change = BasisChange::new(rand_invertible(&mut r, 4)).map_err(|e| e.to_string())?;
        let new = change_basis(&h, &change).map_err(|e| e.to_string())?;
        ensure!(associative_oracle(4, |i, j, k| new.c(i, j, k).clone()), "new constants fail the oracle");
        for _ in 0..50 {
            let (a, b) = (rand_quat(&mut r), rand_quat(&mut r));
            let an = new.element(transform_vector(&a, &change).unwrap()).unwrap();
            let bn = new.element(transform_vector(&b, &change).unwrap()).unwrap();
            let expected = transform_vector(&hq(&a, &b), &change).unwrap();
            ensure!((&an * &bn).coords() == expected.as_slice(), "products disagree across bases");
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut seen = BTreeSet::new();
    for n in 0..500 {
        let a = if n % 2 == 0 { rand_sparse_quat(&mut r) } else { rand_quat(&mut r) };
        let b = rand_sparse_quat(&mut r);
        let got = solve_axxa(&a, &b);
        let class = match &got {
            AxxaSolution::Unique(_) => SolveClass::Unique,
            AxxaSolution::Infinite { .. } => SolveClass::Infinite,
            AxxaSolution::None => SolveClass::None,
        };
        ensure!(class == axxa_oracle(&a, &b), "class mismatch for a={a}, b={b}: {got:?}");
        seen.insert(format!("{class:?}"));
        if let Some(x) = got.witness() {
            ensure!(hsum(&hq(&a, x), &hq(x, &a)) == b, "witness {x} fails for a={a}, b={b}");
        }
    }
    ensure!(seen.len() == 3, "random pairs missed a class: {seen:?}");
    let h = Algebra::quaternion();
    let i = h.basis(1);
    let b = quat(&[int(2), int(1), int(0), int(3)]);
    ensure!(solve_axxa(&h.one(), &b) == AxxaSolution::Unique(b.scale(&rat(1, 2))), "a = 1 example");
    ensure!(
        matches!(solve_axxa(&i, &i.scale(&int(2))), AxxaSolution::Infinite { .. }),
        "a = i, b = 2i example"
    );
    ensure!(solve_axxa(&i, &h.basis(2)) == AxxaSolution::None, "a = i, b = j example");
    Ok(())
}

/// Σ f_ij a^i a^j computed with the Hamilton oracle.
fn quadratic_oracle(f: &[Vec<Element>], a: &[Rational]) -> Element {
    let mut acc = quat(&[int(0), int(0), int(0), int(0)]);
    for i in 0..a.len() {
        for j in 0..a.len() {
            acc = hsum(&acc, &f[i][j].scale(&(&a[i] * &a[j])));
        }
    }
    acc
}

fn linear_oracle(cov: &[Element], a: &[Rational]) -> Element {
    let mut acc = quat(&[int(0), int(0), int(0), int(0)]);
    for (l, x) in cov.iter().zip(a) {
        acc = hsum(&acc, &l.scale(x));
    }
    acc
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let h = Algebra::quaternion();
    let (mut done, mut skipped, mut attempts) = (0, 0, 0);
    while done < 100 {
        attempts += 1;
        ensure!(attempts < 10_000, "too few admissible forms ({done} after {attempts})");
        let m = r.gen_range(1..=4);
        let mut f = vec![vec![h.zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                let e = rand_sparse_quat(&mut r);
                f[i][j] = e.clone();
                f[j][i] = e;
            }
        }
        let q = QuadraticMatrix::new(&h, f.clone()).map_err(|e| e.to_string())?;
        let d = match diagonalize(&q) {
            Ok(d) => d,
            Err(FormError::PivotConditionFailed { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("unexpected error {e}")),
        };
        ensure!(d.terms.len() == d.residual_rank, "term count differs from residual rank");
        for _ in 0..50 {
            let a = rand_coords(&mut r, m);
            let mut sum = quat(&[int(0), int(0), int(0), int(0)]);
            for t in &d.terms {
                let l = linear_oracle(&t.covector, &a);
                sum = hsum(&sum, &hq(&hq(&t.coefficient, &l), &l));
            }
            ensure!(sum == quadratic_oracle(&f, &a), "diagonal form differs at {a:?}");
            ensure!(d.eval(&h, &a) == q.eval(&a).unwrap(), "library evaluations differ");
        }
        done += 1;
    }
    ensure!(skipped < attempts, "every form was skipped");

    // completion with ₁₂f = i
    let i = h.basis(1);
    let f = QuadraticMatrix::new(&h, vec![vec![h.one(), i.clone()], vec![i.clone(), h.zero()]]).unwrap();
    let d = diagonalize(&f).map_err(|e| e.to_string())?;
    ensure!(d.diagonal() == vec![h.one(), h.one()], "case 1 diagonal {:?}", d.diagonal());
    ensure!(d.covectors()[0] == vec![h.one(), i.clone()], "case 1 substitution");
    // pair substitution: 2 a¹a² = 2(b¹)² − 2(b²)² with a¹ = b¹ − b², a² = b¹ + b²
    let f = QuadraticMatrix::new(&h, vec![vec![h.zero(), h.one()], vec![h.one(), h.zero()]]).unwrap();
    let d = diagonalize(&f).map_err(|e| e.to_string())?;
    ensure!(d.extra_linear.len() == 1 && d.terms.len() == 2, "case 2 shape");
    for _ in 0..20 {
        let a = rand_coords(&mut r, 2);
        let b1 = (&a[0] + &a[1]) * rat(1, 2);
        let b2 = (&a[1] - &a[0]) * rat(1, 2);
        ensure!(d.terms[0].eval(&a) == h.scalar(&b1 * &b1 * int(2)), "first square is not 2(b¹)²");
        ensure!(d.terms[1].eval(&a) == h.scalar(-(&b2 * &b2 * int(2))), "second square is not −2(b²)²");
    }
    Ok(())
}

/// Monoid of all transformations generated by `maps`, with composition
/// table, acting on a bare set.
fn transformation_monoid(m: usize, maps: &[Vec<usize>]) -> Representation {
    let mut elems: Vec<Vec<usize>> = vec![(0..m).collect()];
    let mut k = 0;
    while k < elems.len() {
        for g in maps {
            let next: Vec<usize> = (0..m).map(|x| g[elems[k][x]]).collect();
            if !elems.contains(&next) {
                elems.push(next);
            }
        }
        k += 1;
    }
    let n = elems.len();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let ab: Vec<usize> = (0..m).map(|x| elems[a][elems[b][x]]).collect();
            table[a * n + b] = elems.iter().position(|e| *e == ab).unwrap();
        }
    }
    let sig = Signature::new(vec![("*".into(), 2)]).unwrap();
    let monoid =
        FiniteOmegaAlgebra::with_bound((0..n).map(|a| format!("t{a}")).collect(), sig, vec![table], usize::MAX).unwrap();
    let set = FiniteOmegaAlgebra::bare((0..m).map(|x| format!("m{x}")).collect()).unwrap();
    Representation::new(Arc::new(monoid), Arc::new(set), elems, RepKind::MonoidAction, Hand::Left).unwrap()
}

/// ℤ/m under `*` acting on the group ℤ/m by multiplication.
fn multiplicative(m: usize) -> Representation {
    let sig = Signature::new(vec![("*".into(), 2)]).unwrap();
    let table = (0..m * m).map(|k| (k / m) * (k % m) % m).collect();
    let monoid = FiniteOmegaAlgebra::with_bound((0..m).map(|a| a.to_string()).collect(), sig, vec![table], usize::MAX)
        .unwrap();
    let action = (0..m).map(|a| (0..m).map(|x| a * x % m).collect()).collect();
    Representation::new(Arc::new(monoid), Arc::new(cyclic(m, None)), action, RepKind::MonoidAction, Hand::Left)
        .unwrap()
}

fn closure_corpus(r: &mut ChaCha8Rng) -> Vec<(String, Representation)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push((format!("C{n}"), trivial_over(cyclic(n, None))));
    }
    for hand in [Hand::Left, Hand::Right] {
        out.push((format!("C6 translations {hand:?}"), translation(cyclic(6, None), hand).unwrap()));
    }
    for d in 1..=3 {
        out.push((format!("F3 scalars on F3^{d}"), scalar_action(3, d)));
    }
    for d in 1..=2 {
        out.push((format!("F3^{d} on points"), point_translation(3, d)));
    }
    for m in 2..=12 {
        out.push((format!("multiplicative Z/{m}"), multiplicative(m)));
    }
    for s in 0..20 {
        let m = r.gen_range(2..=7);
        let gens = r.gen_range(1..=2);
        let maps: Vec<Vec<usize>> = (0..gens).map(|_| (0..m).map(|_| r.gen_range(0..m)).collect()).collect();
        let rep = transformation_monoid(m, &maps);
        if rep.acting().size() * m <= 576 {
            out.push((format!("random monoid {s}"), rep));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    for (name, rep) in closure_corpus(&mut r) {
        let m = rep.acted().size();
        ensure!(rep.acting().size() * m <= 576, "{name} is too large for the corpus");
        let mut sets: Vec<Vec<usize>> = vec![vec![]];
        for x in 0..m {
            sets.push(vec![x]);
            for y in x + 1..m {
                sets.push(vec![x, y]);
            }
        }
        for g in sets {
            let got: BTreeSet<usize> = closure(&rep, &g).members.into_iter().collect();
            ensure!(got == naive_closure(&rep, &g), "{name}: closure of {g:?} differs");
        }
    }
    let c6 = trivial_over(cyclic_powers(6, "a"));
    let idx = |l: &str| c6.acted().index_of(l).unwrap();
    let (a, a2, a3) = (idx("a"), idx("a2"), idx("a3"));
    let full = |g: &[usize]| closure(&c6, g).is_full(6);
    ensure!(full(&[a]) && extract_basis(&c6, &[a]).unwrap() == vec![a], "{{a}} is not a basis");
    ensure!(full(&[a2, a3]) && !full(&[a2]) && !full(&[a3]), "{{a2, a3}} is not minimal");
    ensure!(extract_basis(&c6, &[a2, a3]).unwrap() == vec![a2, a3], "extraction shrinks {{a2, a3}}");
    ensure!(extract_basis(&c6, &[a3]).is_err(), "{{a3}} generates");
    Ok(())
}

fn compose(r: &[usize], s: &[usize]) -> Vec<usize> {
    s.iter().map(|&x| r[x]).collect()
}

fn check_rep_superposition(rep: &Representation, gens: &[usize]) -> Outcome {
    let n = rep.acted().size();
    let ends = enumerate_endomorphisms(rep, gens, Exec::default()).map_err(|e| e.to_string())?;
    let coords: Vec<_> = ends.iter().map(|e| endo_coordinates(rep, gens, e).unwrap()).collect();
    let at = |t: &[usize]| {
        let mut a = vec![None; n];
        for &x in gens {
            a[x] = Some(t[x]);
        }
        a
    };
    for (ri, rr) in ends.iter().enumerate() {
        for (si, ss) in ends.iter().enumerate() {
            let rs = compose(rr, ss);
            let sup = superpose(&coords[si], &coords[ri]).map_err(|e| e.to_string())?;
            let direct = endo_coordinates(rep, gens, &rs).map_err(|e| e.to_string())?;
            // W(S∘X)∘W(R∘X) evaluated at X gives R∘S∘X
            let vals = eval_coordinates(rep, &sup, &at(&(0..n).collect::<Vec<_>>())).unwrap();
            for &x in gens {
                ensure!(vals[&x] == rs[x], "superposition differs from R∘S at generator {x}");
            }
            // W[R]⋆W[S] = W[R∘S] at every endomorphic image T∘X
            for tt in &ends {
                let a = at(tt);
                ensure!(
                    eval_coordinates(rep, &sup, &a).unwrap() == eval_coordinates(rep, &direct, &a).unwrap(),
                    "composition law fails"
                );
            }
        }
    }
    Ok(())
}

fn tower_assign(t: &Tower, gens: &[Vec<usize>], h: &[Vec<usize>]) -> Vec<Vec<Option<usize>>> {
    (2..=t.height())
        .map(|i| {
            let mut a = vec![None; t.algebra(i).size()];
            for &x in &gens[i - 2] {
                a[x] = Some(h[i - 2][x]);
            }
            a
        })
        .collect()
}

fn check_tower_superposition(t: &Tower, gens: &[Vec<usize>]) -> Outcome {
    let ends = enumerate_tower_endomorphisms(t, gens, Exec::default()).map_err(|e| e.to_string())?;
    ensure!(!ends.is_empty(), "no tower endomorphisms");
    let coords: Vec<_> = ends.iter().map(|e| tower_coordinates(t, gens, e).unwrap()).collect();
    let id: Vec<Vec<usize>> = (2..=t.height()).map(|i| (0..t.algebra(i).size()).collect()).collect();
    for (ri, rr) in ends.iter().enumerate() {
        for (si, ss) in ends.iter().enumerate() {
            let rs: Vec<Vec<usize>> = rr.iter().zip(ss).map(|(r, s)| compose(r, s)).collect();
            let sup = tower_superpose(&coords[si], &coords[ri]).map_err(|e| e.to_string())?;
            let direct = tower_coordinates(t, gens, &rs).map_err(|e| e.to_string())?;
            let vals = eval_tower_coordinates(t, &sup, &tower_assign(t, gens, &id)).map_err(|e| e.to_string())?;
            for (k, level) in vals.iter().enumerate() {
                for (x, v) in level {
                    ensure!(*v == rs[k][*x], "tower superposition differs at level {} generator {x}", k + 2);
                }
            }
            for tt in &ends {
                let a = tower_assign(t, gens, tt);
                ensure!(
                    eval_tower_coordinates(t, &sup, &a).unwrap() == eval_tower_coordinates(t, &direct, &a).unwrap(),
                    "tower composition law fails"
                );
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let c6 = trivial_over(cyclic(6, None));
    check_rep_superposition(&c6, &[1])?;
    check_rep_superposition(&c6, &[2, 3])?;
    check_tower_superposition(&toy_affine(3, 1), &[vec![1], vec![0]])?;
    check_tower_superposition(&toy_affine(2, 2), &[vec![1, 2], vec![0]])?;
    Ok(())
}

fn criterion_8() -> Outcome {
    let f = translation(cyclic(6, None), Hand::Left).unwrap();
    let g = translation(cyclic(3, None), Hand::Left).unwrap();
    let r: Vec<usize> = (0..6).map(|x| x % 3).collect();
    let d = decompose_morphism(&r, &r, &f, &g).map_err(|e| e.to_string())?;
    // the two factor representations and the four factor morphisms
    let factor_checks: Vec<&(&str, bool)> =
        d.checks.iter().filter(|(name, _)| name.contains("is a representation") || name.contains("morphism from")).collect();
    ensure!(factor_checks.len() == 6, "expected six factor checks, got {}", factor_checks.len());
    ensure!(d.all_checks_pass(), "failed checks: {:?}", d.checks.iter().filter(|c| !c.1).collect::<Vec<_>>());
    ensure!(d.j == vec![0, 1, 2, 0, 1, 2], "quotient map {:?}", d.j);
    ensure!(d.image_a == vec![0, 1, 2] && d.image_m == vec![0, 1, 2], "images");
    // factorisation R = I ∘ T ∘ J, checked element by element
    for x in 0..6 {
        ensure!(d.i()[d.t[d.j[x]]] == r[x], "acting factorisation fails at {x}");
        ensure!(d.big_i()[d.big_t[d.big_j[x]]] == r[x], "acted factorisation fails at {x}");
    }
    Ok(())
}

/// xP + R (right) or Px + R (left) with the Hamilton oracle.
fn apply_oracle(m: &AffineMap, x: &[Element]) -> Vec<Element> {
    (0..x.len())
        .map(|i| {
            let mut acc = m.r[i].clone();
            for j in 0..x.len() {
                let t = match m.hand {
                    Hand::Right => hq(&x[j], &m.p[j][i]),
                    Hand::Left => hq(&m.p[j][i], &x[j]),
                };
                acc = hsum(&acc, &t);
            }
            acc
        })
        .collect()
}

fn rand_affine(r: &mut ChaCha8Rng, n: usize, hand: Hand) -> AffineMap {
    loop {
        let p: Vec<Vec<Element>> = (0..n).map(|_| rand_vector(r, n)).collect();
        match AffineMap::new(p, rand_vector(r, n), hand) {
            Ok(m) => return m,
            Err(AffineError::SingularLinearPart) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let h = Algebra::quaternion();
    for hand in [Hand::Right, Hand::Left] {
        for n in 1..=3 {
            for _ in 0..4 {
                let (m1, m2, m3) = (rand_affine(&mut r, n, hand), rand_affine(&mut r, n, hand), rand_affine(&mut r, n, hand));
                let c = m1.compose(&m2).unwrap();
                for _ in 0..100 {
                    let x = rand_vector(&mut r, n);
                    ensure!(c.apply(&x).unwrap() == apply_oracle(&m2, &apply_oracle(&m1, &x)), "composite differs");
                }
                let left = m1.compose(&m2).unwrap().compose(&m3).unwrap();
                let right = m1.compose(&m2.compose(&m3).unwrap()).unwrap();
                ensure!(left == right, "composition is not associative");
                let id = AffineMap::identity(&h, n, hand);
                ensure!(m1.compose(&id).unwrap() == m1 && id.compose(&m1).unwrap() == m1, "identity law");
                let inv = m1.inverse().unwrap();
                ensure!(m1.compose(&inv).unwrap() == id && inv.compose(&m1).unwrap() == id, "inverse law");
            }
        }
    }
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let (a, b, c) = (rand_vector(&mut r, n), rand_vector(&mut r, n), rand_vector(&mut r, n));
        let d = shift(&c, &vec_between(&a, &b).unwrap()).unwrap();
        ensure!(vec_between(&a, &c).unwrap() == vec_between(&b, &d).unwrap(), "parallelogram fails");
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    for (hand, planes) in [(Hand::Right, 2), (Hand::Left, 1)] {
        for k in 1..=2 {
            for _ in 0..planes {
                let anchor = rand_vector(&mut r, 3);
                let (span, plane) = loop {
                    let span: Vec<Vec<Element>> = (0..k).map(|_| rand_vector(&mut r, 3)).collect();
                    if let Ok(p) = Plane::new(anchor.clone(), span.clone(), hand) {
                        break (span, p);
                    }
                };
                let oracle = PlaneOracle::new(&anchor, &span, hand);
                let inside = |r: &mut ChaCha8Rng| -> Vec<Element> {
                    let cs: Vec<Element> = (0..k).map(|_| rand_quat(r)).collect();
                    (0..3)
                        .map(|row| {
                            let terms: Vec<(Element, Element)> =
                                (0..k).map(|t| (span[t][row].clone(), cs[t].clone())).collect();
                            hsum(&anchor[row], &combine(&terms, hand))
                        })
                        .collect()
                };
                for n in 0..100 {
                    let b = inside(&mut r);
                    ensure!(plane.contains(&b).unwrap(), "in-plane point rejected");
                    if n < 10 {
                        ensure!(oracle.contains(&b), "oracle rejects in-plane point");
                    }
                }
                let mut outside = 0;
                while outside < 100 {
                    let b: Vec<Element> =
                        inside(&mut r).iter().map(|x| hsum(x, &rand_sparse_quat(&mut r))).collect();
                    if oracle.contains(&b) {
                        continue;
                    }
                    ensure!(!plane.contains(&b).unwrap(), "perturbed point accepted");
                    outside += 1;
                }
            }
        }
    }
    Ok(())
}

fn var(n: usize, i: usize) -> NCPoly {
    NCPoly::var(&Algebra::quaternion(), n, i)
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let h = Algebra::quaternion();
    let mut checked = 0;
    while checked < 10 {
        let (a, b, c) = (rand_nonzero_quat(&mut r), rand_quat(&mut r), rand_quat(&mut r));
        if c == b {
            continue;
        }
        checked += 1;
        let (x1, x2) = (var(2, 0), var(2, 1));
        // x′¹ = a x¹ b + a x² c, x′² = x¹ + x²
        let fwd = vec![x1.left_mul(&a).right_mul(&b).add(&x2.left_mul(&a).right_mul(&c)), x1.add(&x2)];
        let ai = hinv(&a);
        let cb = hinv(&hsum(&c, &-&b));
        // x¹ = −a⁻¹x′¹(c−b)⁻¹ + x′²(1 + b(c−b)⁻¹), x² = a⁻¹x′¹(c−b)⁻¹ − x′²b(c−b)⁻¹
        let inv = vec![
            x1.left_mul(&ai).right_mul(&cb).neg().add(&x2.right_mul(&hsum(&h.one(), &hq(&b, &cb)))),
            x1.left_mul(&ai).right_mul(&cb).sub(&x2.right_mul(&hq(&b, &cb))),
        ];
        let solved = Chart::new(fwd.clone()).map_err(|e| e.to_string())?;
        ensure!(solved.inverse_check() == Some(InverseCheck::Solved), "linear chart not inverted");
        ensure!(solved.inverse().unwrap() == inv.as_slice(), "solved inverse differs from the closed form");
        let given = Chart::with_inverse(fwd, inv.clone()).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let x = rand_vector(&mut r, 2);
            // forward by hand, inverse through the closed form
            let xn = vec![
                hsum(&hq(&hq(&a, &x[0]), &b), &hq(&hq(&a, &x[1]), &c)),
                hsum(&x[0], &x[1]),
            ];
            ensure!(given.apply(&x).unwrap() == xn, "forward map differs");
            let back: Vec<Element> = inv.iter().map(|p| p.eval(&xn)).collect();
            ensure!(back == x, "round trip fails");
            ensure!(solved.apply_inverse(&xn).unwrap() == x, "library round trip fails");
            // v¹ = −a⁻¹v′¹(c−b)⁻¹ + v′²(1 + b(c−b)⁻¹), v² = a⁻¹v′¹(c−b)⁻¹ − v′²b(c−b)⁻¹
            let vn = rand_vector(&mut r, 2);
            let t = hq(&hq(&ai, &vn[0]), &cb);
            let expected = vec![
                hsum(&-&t, &hq(&vn[1], &hsum(&h.one(), &hq(&b, &cb)))),
                hsum(&t, &-&hq(&hq(&vn[1], &b), &cb)),
            ];
            ensure!(pushforward_vector(&solved, &xn, &vn).unwrap() == expected, "vector rule differs");
        }
    }
    // the worked values a = i, b = 1, c = j
    let (i, j) = (h.basis(1), h.basis(2));
    ensure!(hinv(&hsum(&j, &-&h.one())) == quat(&[rat(-1, 2), int(0), rat(-1, 2), int(0)]), "(j − 1)⁻¹");
    let g = Chart::new(vec![
        var(2, 0).left_mul(&i).add(&var(2, 1).left_mul(&i).right_mul(&j)),
        var(2, 0).add(&var(2, 1)),
    ])
    .map_err(|e| e.to_string())?;
    let x = vec![quat(&[int(1), int(0), int(0), int(1)]), j.clone()];
    let xn = g.apply(&x).unwrap();
    ensure!(g.apply_inverse(&xn).unwrap() == x, "worked example round trip");
    Ok(())
}

fn criterion_12() -> Outcome {
    let mut r = rng(12);
    let h = Algebra::quaternion();
    let (x1, x2) = (var(2, 0), var(2, 1));
    // linear charts are flat
    for _ in 0..10 {
        let (a, b, c) = (rand_nonzero_quat(&mut r), rand_quat(&mut r), rand_quat(&mut r));
        let Ok(g) = Chart::new(vec![x1.left_mul(&a).right_mul(&b).add(&x2.left_mul(&a).right_mul(&c)), x1.add(&x2)])
        else {
            continue;
        };
        let conn = chart_connection(&g).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let (x, v, w) = (rand_vector(&mut r, 2), rand_vector(&mut r, 2), rand_vector(&mut r, 2));
            ensure!(conn.gamma(&x, &v, &w).iter().all(Element::is_zero), "Γ′ ≠ 0 for a linear chart");
        }
    }
    // x′¹ = x¹, x′² = x² + x¹x¹
    let quadratic = Chart::with_inverse(vec![x1.clone(), x2.add(&x1.mul(&x1))], vec![x1.clone(), x2.sub(&x1.mul(&x1))])
        .map_err(|e| e.to_string())?;
    let conn = chart_connection(&quadratic).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let (x, v, a) = (rand_vector(&mut r, 2), rand_vector(&mut r, 2), rand_vector(&mut r, 2));
        let g = conn.gamma(&x, &v, &a);
        ensure!(g == conn.gamma(&x, &a, &v), "Γ′ is not symmetric");
        // by hand: Γ′¹ = 0, Γ′² = −(v¹a¹ + a¹v¹)
        let by_hand = vec![h.zero(), -&hsum(&hq(&v[0], &a[0]), &hq(&a[0], &v[0]))];
        ensure!(g == by_hand, "Γ′ differs from the hand computation");
        // constant flat field w carried into primed coordinates
        let w = rand_vector(&mut r, 2);
        let field = vec![
            NCPoly::constant(&w[0], 2),
            x1.right_mul(&w[0]).add(&x1.left_mul(&w[0])).add(&NCPoly::constant(&w[1], 2)),
        ];
        let res = parallel_residual(&conn, &field, &x, &a, SignConvention::Transfer).map_err(|e| e.to_string())?;
        ensure!(res.iter().all(Element::is_zero), "transported field is not parallel");
        // image of a straight line p + t q
        let (p, q) = (rand_vector(&mut r, 2), rand_vector(&mut r, 2));
        let t = var(1, 0);
        let line: Vec<NCPoly> = (0..2).map(|k| NCPoly::constant(&p[k], 1).add(&t.right_mul(&q[k]))).collect();
        let image: Vec<NCPoly> = quadratic.forward().iter().map(|f| f.compose(&line)).collect();
        let (t0, dt) = (rand_quat(&mut r), rand_quat(&mut r));
        let res = geodesic_residual(&conn, &image, &t0, &dt, SignConvention::Transfer).map_err(|e| e.to_string())?;
        ensure!(res.iter().all(Element::is_zero), "image of a line is not a geodesic");
    }
    Ok(())
}
