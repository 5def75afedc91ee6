//! Exact point, line and singular-point counts of cubic threefolds over `F_{p^k}`.
//!
//! Points are counted chart by chart. Chart `i` is the stratum of `P^4` with
//! `x_1 = .. = x_{i} = 0` and `x_{i+1} = 1`; on it the form becomes an
//! inhomogeneous cubic in the `4 - i` remaining coordinates. All but the last
//! of those are enumerated and the roots of the resulting univariate cubic in
//! the last coordinate are counted in one shot. The dominant chart therefore
//! costs `q^3` root counts rather than `q^4` evaluations.

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::CountCache;
use crate::cubic::{CubicForm, Exponent, FieldForm, NVARS};
use crate::field::{
    cubic_root_count, Fe, FieldConfig, FieldError, FieldOps, FiniteField, RootCount, RootTable,
};

pub const ENGINE_VERSION: &str = "chart-fiber-1";

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("line search over F_{q} refused: point-pair enumeration is limited to q <= {max}")]
    LineGuard { q: u64, max: u64 },
    #[error("extension degree {r} exceeds the configured tower limit {max}")]
    TowerLimit { r: u32, max: u32 },
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Clone, Debug)]
pub struct CountConfig {
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub field: FieldConfig,
    /// Root-count lookup tables are built only when they fit in this many bytes.
    pub root_table_max_bytes: usize,
    pub max_tower: u32,
    pub line_max_q: u64,
    pub singular_max_r: u32,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            threads: None,
            field: FieldConfig::default(),
            root_table_max_bytes: 64 << 20,
            max_tower: 5,
            line_max_q: 81,
            singular_max_r: 3,
        }
    }
}

impl CountConfig {
    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T, CountError> {
        match self.threads {
            None => Ok(job()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CountError::Threads(e.to_string()))?;
                Ok(pool.install(job))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub cubic_hash: String,
    pub p: u32,
    pub k: u32,
    pub n_points: u64,
    pub n_lines: Option<u64>,
    pub wall_time: f64,
    pub engine_version: String,
}

/// `#P^n(F_q)`.
pub fn projective_size(n: u32, q: u64) -> u64 {
    (0..=n).map(|i| q.pow(i)).sum()
}

/// Monomials of degree <= 3 in `m` variables, ordered so that the
/// one-variable layout is `[1, t, t^2, t^3]`.
struct Layout {
    exps: Vec<Vec<u8>>,
    /// For each monomial: (exponent of the first variable, index of the rest
    /// in the layout with one variable fewer).
    split: Vec<(u8, usize)>,
}

fn monomials(m: usize, max_deg: u8) -> Vec<Vec<u8>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for e in 0..=max_deg {
        for rest in monomials(m - 1, max_deg - e) {
            let mut v = vec![e];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

struct Layouts {
    by_vars: Vec<Layout>,
}

impl Layouts {
    fn new() -> Self {
        let exps: Vec<Vec<Vec<u8>>> = (0..=4).map(|m| monomials(m, 3)).collect();
        let by_vars = (0..=4)
            .map(|m| {
                let split = if m == 0 {
                    Vec::new()
                } else {
                    exps[m]
                        .iter()
                        .map(|e| {
                            let rest = &e[1..];
                            let idx = exps[m - 1].iter().position(|r| r == rest).unwrap();
                            (e[0], idx)
                        })
                        .collect()
                };
                Layout {
                    exps: exps[m].clone(),
                    split,
                }
            })
            .collect();
        Layouts { by_vars }
    }

    fn index_of(&self, m: usize, e: &[u8]) -> usize {
        self.by_vars[m].exps.iter().position(|x| x == e).unwrap()
    }
}

const MAX_TERMS: usize = 35;

enum RootCounter {
    Table(RootTable),
    Gcd,
}

impl RootCounter {
    fn new<F: FieldOps>(f: &F, cfg: &CountConfig) -> Self {
        if RootTable::bytes_for(f.q()) <= cfg.root_table_max_bytes {
            RootCounter::Table(RootTable::build(f))
        } else {
            RootCounter::Gcd
        }
    }

    #[inline]
    fn count<F: FieldOps>(&self, f: &F, c: [Fe; 4]) -> RootCount {
        match self {
            RootCounter::Table(t) => t.count(f, c),
            RootCounter::Gcd => cubic_root_count(f, c),
        }
    }
}

struct ChartCounter<'a, F: FieldOps> {
    field: &'a F,
    layouts: &'a Layouts,
    roots: &'a RootCounter,
    /// `powers[v][e] = v^e`.
    powers: Vec<[Fe; 4]>,
}

impl<'a, F: FieldOps> ChartCounter<'a, F> {
    #[inline]
    fn substitute(&self, poly: &[Fe], m: usize, v: Fe, out: &mut [Fe; MAX_TERMS]) {
        let f = self.field;
        let lower = self.layouts.by_vars[m - 1].exps.len();
        out[..lower].fill(Fe::ZERO);
        let pw = &self.powers[v.index()];
        for (c, &(e, idx)) in poly.iter().zip(&self.layouts.by_vars[m].split) {
            if c.is_zero() {
                continue;
            }
            let t = if e == 0 { *c } else { f.mul(*c, pw[e as usize]) };
            out[idx] = f.add(out[idx], t);
        }
    }

    fn count(&self, poly: &[Fe], m: usize) -> u64 {
        let f = self.field;
        match m {
            0 => u64::from(poly[0].is_zero()),
            1 => self.roots.count(f, [poly[3], poly[2], poly[1], poly[0]]).affine(f.q()),
            _ => {
                let mut buf = [Fe::ZERO; MAX_TERMS];
                let lower = self.layouts.by_vars[m - 1].exps.len();
                f.elements()
                    .map(|v| {
                        self.substitute(poly, m, v, &mut buf);
                        self.count(&buf[..lower], m - 1)
                    })
                    .sum()
            }
        }
    }

    fn count_parallel(&self, poly: &[Fe], m: usize) -> u64 {
        if m < 2 {
            return self.count(poly, m);
        }
        let lower = self.layouts.by_vars[m - 1].exps.len();
        (0..self.field.q() as u32)
            .into_par_iter()
            .map(|v| {
                let mut buf = [Fe::ZERO; MAX_TERMS];
                self.substitute(poly, m, Fe(v), &mut buf);
                self.count(&buf[..lower], m - 1)
            })
            .sum()
    }
}

/// Restriction of the form to chart `i`, as a dense polynomial in the
/// `4 - i` free coordinates.
fn chart_poly<F: FieldOps>(f: &F, form: &FieldForm, layouts: &Layouts, chart: usize) -> Vec<Fe> {
    let m = NVARS - 1 - chart;
    let mut poly = vec![Fe::ZERO; layouts.by_vars[m].exps.len()];
    for (e, c) in &form.terms {
        if e[..chart].iter().any(|&x| x > 0) {
            continue;
        }
        let idx = layouts.index_of(m, &e[chart + 1..]);
        poly[idx] = f.add(poly[idx], *c);
    }
    poly
}

fn chart_counts_in<F: FieldOps>(f: &F, form: &FieldForm, cfg: &CountConfig) -> [u64; NVARS] {
    let layouts = Layouts::new();
    let roots = RootCounter::new(f, cfg);
    let powers = f
        .elements()
        .map(|v| {
            let v2 = f.mul(v, v);
            [Fe::ONE, v, v2, f.mul(v2, v)]
        })
        .collect();
    let counter = ChartCounter {
        field: f,
        layouts: &layouts,
        roots: &roots,
        powers,
    };
    let mut out = [0u64; NVARS];
    for (chart, slot) in out.iter_mut().enumerate() {
        let poly = chart_poly(f, form, &layouts, chart);
        *slot = counter.count_parallel(&poly, NVARS - 1 - chart);
    }
    out
}

/// Per-chart point counts over `F_{p^k}`; chart `i` has leading coordinate `x_{i+1}`.
pub fn chart_counts(x: &CubicForm, p: u64, k: u32, cfg: &CountConfig) -> Result<[u64; NVARS], CountError> {
    let field = FiniteField::with_config(p, k, &cfg.field)?;
    cfg.run(|| match &field {
        FiniteField::Zech(f) => chart_counts_in(f, &x.reduce(f), cfg),
        FiniteField::Poly(f) => chart_counts_in(f, &x.reduce(f), cfg),
    })
}

/// Number of projective `F_{p^k}`-points of `{X = 0}`.
pub fn count_points(x: &CubicForm, p: u64, k: u32, cfg: &CountConfig) -> Result<CountRecord, CountError> {
    let start = Instant::now();
    let charts = chart_counts(x, p, k, cfg)?;
    let n_points: u64 = charts.iter().sum();
    debug_assert!(n_points <= projective_size(4, (p as u64).pow(k)));
    Ok(CountRecord {
        cubic_hash: x.canonical_hash(),
        p: p as u32,
        k,
        n_points,
        n_lines: None,
        wall_time: start.elapsed().as_secs_f64(),
        engine_version: ENGINE_VERSION.to_string(),
    })
}

/// Counts over `F_{p^k}` for `k = 1..=r_max`, reusing and filling the cache.
pub fn count_tower(
    x: &CubicForm,
    p: u64,
    r_max: u32,
    cfg: &CountConfig,
    cache: Option<&CountCache>,
) -> Result<Vec<CountRecord>, CountError> {
    if r_max > cfg.max_tower {
        return Err(CountError::TowerLimit {
            r: r_max,
            max: cfg.max_tower,
        });
    }
    let hash = x.canonical_hash();
    let mut out = Vec::with_capacity(r_max as usize);
    for k in 1..=r_max {
        if let Some(hit) = cache.and_then(|c| c.lookup(&hash, p as u32, k, ENGINE_VERSION)) {
            out.push(hit);
            continue;
        }
        let rec = count_points(x, p, k, cfg)?;
        log::info!("N_{k} over F_{}^{k} = {} ({:.2}s)", p, rec.n_points, rec.wall_time);
        if let Some(c) = cache {
            c.append(&rec);
        }
        out.push(rec);
    }
    Ok(out)
}

/// Calls `visit` on every point of `P^4(F_q)`, normalized so that the first
/// nonzero coordinate is one.
pub fn for_each_projective_point<F: FieldOps + ?Sized>(f: &F, mut visit: impl FnMut(&[Fe; NVARS])) {
    let q = f.q() as u32;
    for lead in 0..NVARS {
        let free = NVARS - 1 - lead;
        let mut pt = [Fe::ZERO; NVARS];
        pt[lead] = Fe::ONE;
        let total = (q as u64).pow(free as u32);
        for mut idx in 0..total {
            for slot in pt[lead + 1..].iter_mut() {
                *slot = Fe((idx % q as u64) as u32);
                idx /= q as u64;
            }
            visit(&pt);
        }
    }
}

/// A projective line, stored as the reduced row echelon basis of its 2x5 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub basis: [[Fe; NVARS]; 2],
}

impl Line {
    /// Canonical line through two distinct normalized points.
    pub fn through<F: FieldOps + ?Sized>(f: &F, a: &[Fe; NVARS], b: &[Fe; NVARS]) -> Option<Line> {
        let lead = |x: &[Fe; NVARS]| x.iter().position(|c| !c.is_zero());
        let (a, b) = if lead(b)? < lead(a)? { (b, a) } else { (a, b) };
        let pa = lead(a)?;
        let inv = f.inv(a[pa])?;
        let mut u = a.map(|c| f.mul(c, inv));
        let mut v = *b;
        let t = v[pa];
        for i in 0..NVARS {
            v[i] = f.sub(v[i], f.mul(t, u[i]));
        }
        let pb = v.iter().position(|c| !c.is_zero())?;
        let inv = f.inv(v[pb])?;
        v = v.map(|c| f.mul(c, inv));
        let t = u[pb];
        for i in 0..NVARS {
            u[i] = f.sub(u[i], f.mul(t, v[i]));
        }
        Some(Line { basis: [u, v] })
    }

    /// All `q + 1` points, normalized.
    pub fn points<F: FieldOps + ?Sized>(&self, f: &F) -> Vec<[Fe; NVARS]> {
        let [u, v] = self.basis;
        let mut out = vec![v];
        for t in f.elements() {
            let mut pt = [Fe::ZERO; NVARS];
            for i in 0..NVARS {
                pt[i] = f.add(u[i], f.mul(t, v[i]));
            }
            out.push(pt);
        }
        out
    }
}

fn lines_in<F: FieldOps>(f: &F, form: &FieldForm) -> Vec<Line> {
    let mut pts = Vec::new();
    for_each_projective_point(f, |pt| {
        if form.eval(f, pt).is_zero() {
            pts.push(*pt);
        }
    });
    let mut found: HashSet<Line> = HashSet::new();
    let mut lines = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let line = Line::through(f, &pts[i], &pts[j]).expect("distinct projective points");
            if found.contains(&line) {
                continue;
            }
            let [u, v] = line.basis;
            let contained = f.elements().all(|t| {
                let mut pt = [Fe::ZERO; NVARS];
                for c in 0..NVARS {
                    pt[c] = f.add(u[c], f.mul(t, v[c]));
                }
                form.eval(f, &pt).is_zero()
            }) && form.eval(f, &v).is_zero();
            if contained {
                found.insert(line);
                lines.push(line);
            }
        }
    }
    lines
}

/// Lines of `P^4` defined over `F_{p^k}` all of whose `q + 1` rational points lie on `X`.
pub fn find_lines(x: &CubicForm, p: u64, k: u32, cfg: &CountConfig) -> Result<(FiniteField, Vec<Line>), CountError> {
    let field = FiniteField::with_config(p, k, &cfg.field)?;
    let q = field.q();
    if q > cfg.line_max_q {
        return Err(CountError::LineGuard {
            q,
            max: cfg.line_max_q,
        });
    }
    let lines = match &field {
        FiniteField::Zech(f) => lines_in(f, &x.reduce(f)),
        FiniteField::Poly(f) => lines_in(f, &x.reduce(f)),
    };
    Ok((field, lines))
}

pub fn count_lines(x: &CubicForm, p: u64, k: u32, cfg: &CountConfig) -> Result<u64, CountError> {
    Ok(find_lines(x, p, k, cfg)?.1.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    /// The point was found over `F_{p^r}`.
    pub r: u32,
    /// Polynomial-basis coordinates of each projective coordinate.
    pub coords: Vec<Vec<u32>>,
}

/// Result of a bounded search for singular points. An empty list is
/// evidence of smoothness over the searched fields only, never a proof.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingularSearch {
    pub p: u32,
    pub degrees_searched: Vec<u32>,
    pub points: Vec<SingularPoint>,
    pub evidence_only: bool,
    pub note: String,
}

pub fn find_singular_points(x: &CubicForm, p: u64, r_max: u32, cfg: &CountConfig) -> Result<SingularSearch, CountError> {
    if r_max > cfg.singular_max_r {
        return Err(CountError::TowerLimit {
            r: r_max,
            max: cfg.singular_max_r,
        });
    }
    let partials: Vec<Vec<(Exponent, num_bigint::BigInt)>> =
        (0..NVARS).map(|i| x.partial_derivative(i)).collect();
    let mut points = Vec::new();
    for r in 1..=r_max {
        let field = FiniteField::with_config(p, r, &cfg.field)?;
        let form = x.reduce(&field);
        let grads: Vec<FieldForm> = partials
            .iter()
            .map(|t| FieldForm::from_terms(&field, t.iter().cloned()))
            .collect();
        for_each_projective_point(&field, |pt| {
            if form.eval(&field, pt).is_zero() && grads.iter().all(|g| g.eval(&field, pt).is_zero()) {
                points.push(SingularPoint {
                    r,
                    coords: pt.iter().map(|&c| field.to_coeffs(c)).collect(),
                });
            }
        });
    }
    Ok(SingularSearch {
        p: p as u32,
        degrees_searched: (1..=r_max).collect(),
        points,
        evidence_only: true,
        note: "bounded search over the listed fields; an empty result is evidence, not a proof, of smoothness"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    #[test]
    fn layout_shapes() {
        let l = Layouts::new();
        let sizes: Vec<usize> = l.by_vars.iter().map(|x| x.exps.len()).collect();
        assert_eq!(sizes, vec![1, 4, 10, 20, 35]);
        assert_eq!(l.by_vars[1].exps, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn paper_x_over_f3() {
        let rec = count_points(&CubicForm::paper_x(), 3, 1, &cfg()).unwrap();
        assert_eq!(rec.n_points, 22);
        assert_eq!(rec.engine_version, ENGINE_VERSION);
    }

    #[test]
    fn fermat_over_f2() {
        assert_eq!(count_points(&CubicForm::fermat(), 2, 1, &cfg()).unwrap().n_points, 15);
    }

    #[test]
    fn triple_hyperplane() {
        let x = CubicForm::new([([3, 0, 0, 0, 0], BigInt::from(1))]).unwrap();
        assert_eq!(count_points(&x, 3, 1, &cfg()).unwrap().n_points, 40);
        assert_eq!(count_lines(&x, 3, 1, &cfg()).unwrap(), 130);
    }

    #[test]
    fn gcd_and_table_agree() {
        let x = CubicForm::paper_x();
        let no_table = CountConfig {
            root_table_max_bytes: 0,
            ..cfg()
        };
        for k in 1..=3 {
            assert_eq!(
                count_points(&x, 3, k, &cfg()).unwrap().n_points,
                count_points(&x, 3, k, &no_table).unwrap().n_points
            );
        }
    }

    #[test]
    fn tower_limits() {
        let x = CubicForm::fermat();
        assert!(count_tower(&x, 2, 0, &cfg(), None).unwrap().is_empty());
        assert!(matches!(
            count_tower(&x, 2, 6, &cfg(), None),
            Err(CountError::TowerLimit { r: 6, max: 5 })
        ));
    }

    #[test]
    fn lines_examples() {
        assert_eq!(count_lines(&CubicForm::paper_x(), 3, 1, &cfg()).unwrap(), 1);
        assert_eq!(count_lines(&CubicForm::fermat(), 2, 1, &cfg()).unwrap(), 35);
        assert!(matches!(
            count_lines(&CubicForm::fermat(), 2, 7, &cfg()),
            Err(CountError::LineGuard { q: 128, max: 81 })
        ));
    }

    #[test]
    fn cone_vertex_is_singular() {
        let x = CubicForm::new((0..4).map(|i| {
            let mut e = [0u8; 5];
            e[i] = 3;
            (e, BigInt::from(1))
        }))
        .unwrap();
        let s = find_singular_points(&x, 5, 1, &cfg()).unwrap();
        assert!(s.points.contains(&SingularPoint {
            r: 1,
            coords: vec![vec![0], vec![0], vec![0], vec![0], vec![1]],
        }));
        assert!(s.evidence_only);
    }

    #[test]
    fn line_through_is_canonical() {
        let f = crate::field::make_field(3, 1).unwrap();
        let a = [Fe(1), Fe(0), Fe(2), Fe(0), Fe(0)];
        let b = [Fe(0), Fe(1), Fe(1), Fe(0), Fe(0)];
        let l = Line::through(&f, &a, &b).unwrap();
        let pts = l.points(&f);
        assert_eq!(pts.len(), 4);
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                if i != j {
                    let n = |p: &[Fe; 5]| {
                        let lead = p.iter().position(|c| !c.is_zero()).unwrap();
                        let inv = f.inv(p[lead]).unwrap();
                        p.map(|c| f.mul(c, inv))
                    };
                    assert_eq!(Line::through(&f, &n(&pts[i]), &n(&pts[j])).unwrap(), l);
                }
            }
        }
    }
}
