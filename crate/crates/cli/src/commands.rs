//! One function per verb; each returns the text to print.

use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use divring::affine::{nc_rank_with, AffineMap, Plane};
use divring::algebra::Algebra;
use divring::calculus::{
    chart_connection, geodesic_residual, parallel_residual, Chart, Connection, InverseCheck, NCPoly, PolyConnection,
};
use divring::forms::{classify_metric, diagonalize_with, solve_axxa, AxxaSolution, DiagonalizeOptions, MetricClass, QuadraticMatrix};
use divring::omega::{closure, extract_basis, Hand, Level, RepClass, Representation};
use divring::text::{format_element, format_poly, parse_poly};
use divring::tower::{self, render_tower_word, Tower};

use crate::files::*;
use crate::{CliError, Options};

type Result<T> = std::result::Result<T, CliError>;

const RIGHT: Hand = Hand::Right;

fn algebra_arg(s: &str) -> Result<Arc<Algebra>> {
    resolve_algebra(&AlgebraRef::Name(s.to_string()), Path::new(""))
}

pub fn algebra_check(s: &str) -> Result<String> {
    let alg = algebra_arg(s)?;
    Ok(format!("ok: associative, unital, dim {}\n", alg.dim()))
}

fn load_form(file: &Path) -> Result<QuadraticMatrix> {
    let (f, base) = read_json::<MatrixFile>(file)?;
    let alg = resolve_algebra(&f.algebra, &base)?;
    Ok(QuadraticMatrix::new(&alg, grid(&f.matrix, &alg)?)?)
}

fn bracket(v: &[divring::Element]) -> String {
    format!("[{}]", format_list(v))
}

pub fn form_diagonalize(file: &Path, opts: &Options) -> Result<String> {
    let f = load_form(file)?;
    let d = diagonalize_with(&f, DiagonalizeOptions { try_all_pivots: opts.try_all_pivots })?;
    let mut out = String::new();
    for (k, t) in d.terms.iter().enumerate() {
        writeln!(
            out,
            "term {}: coefficient {}; pivot {}; covector {}",
            k + 1,
            format_element(&t.coefficient),
            format_element(&t.pivot),
            bracket(&t.covector)
        )
        .unwrap();
    }
    for s in &d.extra_linear {
        writeln!(out, "pair substitution at step {}: variables {}, {}", s.step + 1, s.i + 1, s.j + 1).unwrap();
    }
    writeln!(out, "rank: {}", d.residual_rank).unwrap();
    Ok(out)
}

pub fn form_classify(file: &Path) -> Result<String> {
    let class = match classify_metric(&load_form(file)?)? {
        MetricClass::Euclidean => "euclidean",
        MetricClass::PseudoEuclidean => "pseudo-euclidean",
        MetricClass::NotRealValued => "not real valued",
    };
    Ok(format!("{class}\n"))
}

pub fn form_solve_axxa(algebra: &str, a: &str, b: &str) -> Result<String> {
    let alg = algebra_arg(algebra)?;
    let (a, b) = (element(a, &alg)?, element(b, &alg)?);
    Ok(match solve_axxa(&a, &b) {
        AxxaSolution::None => "none\n".to_string(),
        AxxaSolution::Unique(x) => format!("unique: {}\n", format_element(&x)),
        AxxaSolution::Infinite { witness, nullspace_dim } => {
            format!("infinite: {} + kernel of dimension {nullspace_dim}\n", format_element(&witness))
        }
    })
}

fn load_rep(file: &Path, opts: &Options) -> Result<Representation> {
    let (f, _) = read_json::<RepFile>(file)?;
    let rep = build_rep(&f, opts.max_carrier)?;
    Ok(match opts.hand {
        Some(h) => rep.with_hand(h)?,
        None => rep,
    })
}

fn labels(alg: &divring::omega::FiniteOmegaAlgebra, idx: &[usize]) -> String {
    idx.iter().map(|&x| alg.label(x)).collect::<Vec<_>>().join(",")
}

fn parse_labels(alg: &divring::omega::FiniteOmegaAlgebra, s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| alg.index_of(l).map_err(|_| CliError::Parse(format!("unknown label {l:?}"))))
        .collect()
}

pub fn rep_closure(file: &Path, gens: &str, opts: &Options) -> Result<String> {
    let rep = load_rep(file, opts)?;
    let g = parse_labels(rep.acted(), gens)?;
    let c = closure(&rep, &g);
    let level = Level {
        alg: rep.acted(),
        action: Some(rep.action()),
        actor_labels: Some(rep.acting().labels()),
        assign: &[],
    };
    let mut out = format!("members: {}\n", labels(rep.acted(), &c.members));
    for m in &c.members {
        writeln!(out, "  {} = {}", rep.acted().label(*m), c.word_of[m].render(&[level], rep.hand())).unwrap();
    }
    Ok(out)
}

pub fn rep_basis(file: &Path, gens: &str, opts: &Options) -> Result<String> {
    let rep = load_rep(file, opts)?;
    let g = parse_labels(rep.acted(), gens)?;
    let b = extract_basis(&rep, &g)?;
    Ok(format!("basis: {}\n", labels(rep.acted(), &b)))
}

fn class_line(c: &RepClass) -> String {
    format!(
        "effective {}, transitive {}, single transitive {}, unique connecting {}",
        c.effective, c.transitive, c.single_transitive, c.unique_connecting
    )
}

pub fn rep_classify(file: &Path, opts: &Options) -> Result<String> {
    Ok(format!("{}\n", class_line(&load_rep(file, opts)?.classify())))
}

fn load_tower(file: &Path, opts: &Options) -> Result<Tower> {
    let t = crate::files::load_tower(file, opts.max_carrier, opts.max_product)?;
    match opts.hand {
        None => Ok(t),
        Some(h) => Ok(tower::build_tower(t.reps().iter().map(|r| r.with_hand(h)).collect::<std::result::Result<_, _>>()?)?),
    }
}

/// `2:a,b;3:p` into generator lists for levels 2..n.
fn parse_tower_gens(t: &Tower, s: &str) -> Result<Vec<Vec<usize>>> {
    let mut gens = vec![Vec::new(); t.height() - 1];
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (lv, list) = part.split_once(':').ok_or_else(|| CliError::Parse(format!("expected level:labels, got {part:?}")))?;
        let i: usize = lv.trim().parse().map_err(|_| CliError::Parse(format!("bad level {lv:?}")))?;
        if i < 2 || i > t.height() {
            return Err(CliError::Parse(format!("level {i} is not in 2..{}", t.height())));
        }
        gens[i - 2].extend(parse_labels(t.algebra(i), list)?);
    }
    Ok(gens)
}

fn format_tower_gens(t: &Tower, gens: &[Vec<usize>]) -> String {
    gens.iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(k, g)| format!("{}:{}", k + 2, labels(t.algebra(k + 2), g)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn tower_closure(file: &Path, gens: &str, opts: &Options) -> Result<String> {
    let t = load_tower(file, opts)?;
    let g = parse_tower_gens(&t, gens)?;
    let c = tower::tower_closure(&t, &g)?;
    let mut out = format!("level 1: {}\n", t.algebra(1).labels().join(","));
    for i in 2..=t.height() {
        let lv = c.level(i);
        writeln!(out, "level {i}: {}", labels(t.algebra(i), &lv.members)).unwrap();
        for m in &lv.members {
            writeln!(out, "  {} = {}", t.algebra(i).label(*m), render_tower_word(&t, i, &lv.word_of[m])).unwrap();
        }
    }
    Ok(out)
}

pub fn tower_basis(file: &Path, gens: &str, opts: &Options) -> Result<String> {
    let t = load_tower(file, opts)?;
    let g = parse_tower_gens(&t, gens)?;
    let b = tower::tower_basis(&t, &g)?;
    Ok(format!("basis: {}\n", format_tower_gens(&t, &b)))
}

pub fn tower_classify(file: &Path, opts: &Options) -> Result<String> {
    let t = load_tower(file, opts)?;
    let c = tower::classify_tower(&t);
    let mut out = String::new();
    for (k, l) in c.levels.iter().enumerate() {
        writeln!(out, "level {} on {}: {}", k + 1, k + 2, class_line(l)).unwrap();
    }
    for (i, k, eff) in &c.chains {
        writeln!(out, "chain {} on {}: effective {eff}", i, i + k).unwrap();
    }
    Ok(out)
}

fn load_map(file: &Path, hand: Hand) -> Result<AffineMap> {
    let (f, base) = read_json::<MapFile>(file)?;
    let alg = resolve_algebra(&f.algebra, &base)?;
    Ok(AffineMap::new(grid(&f.p, &alg)?, elements(&f.r, &alg)?, hand)?)
}

pub fn affine_compose(m1: &Path, m2: &Path, opts: &Options) -> Result<String> {
    let hand = opts.hand.unwrap_or(RIGHT);
    let (a, b) = (load_map(m1, hand)?, load_map(m2, hand)?);
    let c = a.compose(&b)?;
    let alg = c.r.first().or(c.p.first().and_then(|r| r.first())).map(|e| e.algebra().clone());
    let alg = alg.ok_or_else(|| CliError::Domain("maps of dimension 0".into()))?;
    let out = MapFile {
        algebra: algebra_ref(&alg),
        p: c.p.iter().map(|r| r.iter().map(format_element).collect()).collect(),
        r: c.r.iter().map(format_element).collect(),
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&out).expect("serializable")))
}

pub fn affine_plane_contains(file: &Path, point: &str, opts: &Options) -> Result<String> {
    let (f, base) = read_json::<PlaneFile>(file)?;
    let alg = resolve_algebra(&f.algebra, &base)?;
    let plane = Plane::new(elements(&f.anchor, &alg)?, grid(&f.span, &alg)?, opts.hand.unwrap_or(RIGHT))?;
    Ok(format!("{}\n", plane.contains(&element_list(point, &alg)?)?))
}

pub fn affine_rank(file: &Path, opts: &Options) -> Result<String> {
    let (f, base) = read_json::<MatrixFile>(file)?;
    let alg = resolve_algebra(&f.algebra, &base)?;
    let m = grid(&f.matrix, &alg)?;
    if m.iter().any(|r| r.len() != m[0].len()) {
        return Err(CliError::Parse("matrix rows differ in length".into()));
    }
    Ok(format!("rank: {}\n", nc_rank_with(&m, opts.hand.unwrap_or(RIGHT))?))
}

/// A chart, or explicit coefficients, loaded from a chart file.
enum Geometry {
    Chart(Chart),
    Gamma(PolyConnection),
}

struct ChartInput {
    alg: Arc<Algebra>,
    vars: Vec<String>,
    geometry: Geometry,
}

/// vars, then v1..vn, then a1..an.
fn gamma_names(vars: &[String]) -> Result<Vec<String>> {
    let n = vars.len();
    let mut names = vars.to_vec();
    names.extend((1..=n).map(|k| format!("v{k}")));
    names.extend((1..=n).map(|k| format!("a{k}")));
    if (0..names.len()).any(|i| names[..i].contains(&names[i])) {
        return Err(CliError::Parse("chart variables may not be named v1.. or a1..".into()));
    }
    Ok(names)
}

fn polys(items: &[String], alg: &Arc<Algebra>, names: &[String]) -> Result<Vec<NCPoly>> {
    items.iter().map(|s| Ok(parse_poly(s, alg, names)?)).collect()
}

fn load_chart(file: &Path) -> Result<ChartInput> {
    let (f, base) = read_json::<ChartFile>(file)?;
    let alg = resolve_algebra(&f.algebra, &base)?;
    let geometry = match (&f.forward, &f.inverse, &f.gamma) {
        (Some(fw), inv, None) => {
            let fw = polys(fw, &alg, &f.vars)?;
            Geometry::Chart(match inv {
                Some(inv) => Chart::with_inverse(fw, polys(inv, &alg, &f.vars)?)?,
                None => Chart::new(fw)?,
            })
        }
        (None, None, Some(g)) => Geometry::Gamma(PolyConnection::new(polys(g, &alg, &gamma_names(&f.vars)?)?)?),
        _ => return Err(CliError::Parse("a chart file needs either forward (and inverse) or gamma".into())),
    };
    Ok(ChartInput { alg, vars: f.vars, geometry })
}

fn connection(input: &ChartInput) -> Result<Box<dyn Connection>> {
    Ok(match &input.geometry {
        Geometry::Chart(c) => Box::new(chart_connection(c)?),
        Geometry::Gamma(g) => Box::new(g.clone()),
    })
}

fn points(s: &str, input: &ChartInput) -> Result<Vec<divring::Element>> {
    let v = element_list(s, &input.alg)?;
    if v.len() != input.vars.len() {
        return Err(CliError::Parse(format!("expected {} coordinates, got {}", input.vars.len(), v.len())));
    }
    Ok(v)
}

pub fn calc_pushforward(file: &Path, at: &str, vector: &str) -> Result<String> {
    let input = load_chart(file)?;
    let Geometry::Chart(chart) = &input.geometry else {
        return Err(CliError::Parse("pushforward needs a chart".into()));
    };
    let (x, v) = (points(at, &input)?, points(vector, &input)?);
    let y = chart.apply(&x)?;
    let w: Vec<_> = chart.forward().iter().map(|p| p.gateaux(&x, &v)).collect();
    Ok(format!("point: {}\nvector: {}\n", format_list(&y), format_list(&w)))
}

pub fn calc_connection(file: &Path, eval: Option<((String, String), String)>) -> Result<String> {
    let input = load_chart(file)?;
    let names = gamma_names(&input.vars)?;
    let mut out = String::new();
    match &input.geometry {
        Geometry::Chart(c) => {
            let check = match c.inverse_check() {
                Some(InverseCheck::Symbolic) => "symbolic",
                Some(InverseCheck::Sampled) => "sampled",
                Some(InverseCheck::Solved) => "solved",
                None => "none",
            };
            writeln!(out, "inverse: {check}").unwrap();
            for (k, p) in chart_connection(c)?.symbolic().iter().enumerate() {
                writeln!(out, "gamma{}: {}", k + 1, format_poly(p, &names)).unwrap();
            }
        }
        Geometry::Gamma(g) => {
            for (k, p) in g.polys().iter().enumerate() {
                writeln!(out, "gamma{}: {}", k + 1, format_poly(p, &names)).unwrap();
            }
        }
    }
    if let Some(((x, v), a)) = eval {
        let conn = connection(&input)?;
        let value = conn.gamma(&points(&x, &input)?, &points(&v, &input)?, &points(&a, &input)?);
        writeln!(out, "value: {}", format_list(&value)).unwrap();
    }
    Ok(out)
}

fn residual_report(name: &str, r: &[divring::Element]) -> String {
    format!("residual: {}\n{name}: {}\n", format_list(r), r.iter().all(|e| e.is_zero()))
}

pub fn calc_parallel(file: &Path, field: &str, at: &str, direction: &str, opts: &Options) -> Result<String> {
    let input = load_chart(file)?;
    let field: Vec<NCPoly> = field.split(';').map(|s| Ok(parse_poly(s.trim(), &input.alg, &input.vars)?)).collect::<Result<_>>()?;
    let conn = connection(&input)?;
    let r = parallel_residual(conn.as_ref(), &field, &points(at, &input)?, &points(direction, &input)?, opts.sign)?;
    Ok(residual_report("parallel", &r))
}

pub fn calc_geodesic(file: &Path, path: &str, t0: &str, dt: &str, opts: &Options) -> Result<String> {
    let input = load_chart(file)?;
    let t = ["t".to_string()];
    let path: Vec<NCPoly> = path.split(';').map(|s| Ok(parse_poly(s.trim(), &input.alg, &t)?)).collect::<Result<_>>()?;
    let conn = connection(&input)?;
    let r = geodesic_residual(conn.as_ref(), &path, &element(t0, &input.alg)?, &element(dt, &input.alg)?, opts.sign)?;
    Ok(residual_report("geodesic", &r))
}
