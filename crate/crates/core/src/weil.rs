//! Weil polynomials: reconstruction from point counts, base extension and
//! exact verification of the Riemann hypothesis for the roots.
//!
//! Convention: `Q(T) = prod (T - w_i)` with `|w_i| = sqrt(q)`. For a cubic
//! threefold the normalized counts `M_r = (N_r - (1+q^r+q^2r+q^3r)) / q^r`
//! satisfy `M_r = -sum w_i^r`, so the `M_r` are minus the power sums of `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::IntPoly;
use crate::sturm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("coefficients violate the functional equation at T^{index}")]
    NotSymmetric { index: usize },
    #[error("q must be at least 2")]
    BadOrder,
}

/// A monic even-degree integer polynomial together with the field size `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilData {
    #[serde(with = "crate::json::big")]
    pub q: BigInt,
    pub poly: IntPoly,
    pub g: usize,
}

impl WeilData {
    pub fn new(q: impl Into<BigInt>, poly: IntPoly) -> Result<Self, WeilError> {
        let q = q.into();
        if q < BigInt::from(2) {
            return Err(WeilError::BadOrder);
        }
        let deg = poly.degree().ok_or(WeilError::NotMonic)?;
        if !poly.is_monic() {
            return Err(WeilError::NotMonic);
        }
        if deg % 2 == 1 {
            return Err(WeilError::OddDegree(deg));
        }
        Ok(WeilData { q, poly, g: deg / 2 })
    }

    pub fn degree(&self) -> usize {
        2 * self.g
    }

    /// First index `i <= g` where `a_i != q^(g-i) a_(2g-i)`.
    pub fn symmetry_defect(&self) -> Option<usize> {
        let g = self.g;
        (0..=g).find(|&i| {
            self.poly.coeff(i) != num_traits::pow(self.q.clone(), g - i) * self.poly.coeff(2 * g - i)
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect().is_none()
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }
}

/// `M_r = (N_r - (1 + q^r + q^2r + q^3r)) / q^r` for `r = 1..`.
pub fn m_values_from_counts(q: &BigInt, counts: &[BigInt]) -> Result<Vec<BigInt>, WeilError> {
    counts
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let r = i + 1;
            if n.is_negative() {
                return Err(WeilError::InvalidCounts(format!("N_{r} = {n} is negative")));
            }
            let qr = num_traits::pow(q.clone(), r);
            let base = BigInt::one() + &qr + &qr * &qr + &qr * &qr * &qr;
            let (m, rem) = (n - base).div_rem(&qr);
            if !rem.is_zero() {
                return Err(WeilError::InvalidCounts(format!(
                    "N_{r} = {n} does not give an integral M_{r}"
                )));
            }
            Ok(m)
        })
        .collect()
}

/// Power sums `s_1..s_rmax` of the roots of a monic polynomial (Newton's identities).
pub fn power_sums_of(poly: &IntPoly, r_max: usize) -> Vec<BigInt> {
    assert!(poly.is_monic(), "power sums need a monic polynomial");
    let n = poly.degree().unwrap();
    // e_k = (-1)^k a_(n-k)
    let e: Vec<BigInt> = (0..=n)
        .map(|k| {
            let a = poly.coeff(n - k);
            if k % 2 == 1 {
                -a
            } else {
                a
            }
        })
        .collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(r_max + 1);
    s.push(BigInt::from(n));
    for k in 1..=r_max {
        let mut acc = BigInt::zero();
        for i in 1..k.min(n + 1) {
            let term = &e[i] * &s[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= n {
            let term = &e[k] * BigInt::from(k);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s.remove(0);
    s
}

/// Elementary symmetric functions `e_1..e_n` from power sums `s_1..s_n`;
/// `None` when some `e_k` is not an integer.
pub fn elementary_from_power_sums(s: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = s.len();
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return None;
        }
        e.push(quot);
    }
    e.remove(0);
    Some(e)
}

/// Monic polynomial of degree `s.len()` with the given power sums.
pub fn poly_from_power_sums(s: &[BigInt]) -> Option<IntPoly> {
    let e = elementary_from_power_sums(s)?;
    let n = e.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    for (k, ek) in e.iter().enumerate() {
        let k = k + 1;
        coeffs[n - k] = if k % 2 == 1 { -ek } else { ek.clone() };
    }
    Some(IntPoly::new(coeffs))
}

/// Degree-`2g` Weil polynomial over `F_q` whose first `g` power sums are `s`;
/// the lower half comes from the functional equation.
pub fn weil_from_power_sums(q: &BigInt, s: &[BigInt]) -> Result<WeilData, WeilError> {
    let g = s.len();
    if g == 0 {
        return Err(WeilError::InvalidCounts("no power sums given".into()));
    }
    let e = elementary_from_power_sums(s)
        .ok_or_else(|| WeilError::InvalidCounts("Newton recursion gives a non-integral coefficient".into()))?;
    let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
    coeffs[2 * g] = BigInt::one();
    for (k, ek) in e.iter().enumerate() {
        let k = k + 1;
        coeffs[2 * g - k] = if k % 2 == 1 { -ek } else { ek.clone() };
    }
    for i in 0..g {
        coeffs[i] = num_traits::pow(q.clone(), g - i) * &coeffs[2 * g - i];
    }
    WeilData::new(q.clone(), IntPoly::new(coeffs))
}

/// Reconstructs `Q_1` from `M_1..M_g` (`g = M.len()`, 5 for cubic threefolds).
pub fn weil_from_m_values(q: &BigInt, m: &[BigInt]) -> Result<WeilData, WeilError> {
    let s: Vec<BigInt> = m.iter().map(|x| -x).collect();
    weil_from_power_sums(q, &s)
}

pub fn power_sums(w: &WeilData, r_max: usize) -> Vec<BigInt> {
    power_sums_of(&w.poly, r_max)
}

/// Weil polynomial of the base change to `F_{q^r}`: roots `w_i^r`.
pub fn extend_weil(w: &WeilData, r: u32) -> WeilData {
    assert!(r >= 1, "extension degree must be positive");
    if r == 1 {
        return w.clone();
    }
    let r = r as usize;
    let n = w.degree();
    let qr = num_traits::pow(w.q.clone(), r);
    if w.is_symmetric() {
        let s = power_sums(w, r * w.g);
        let sr: Vec<BigInt> = (1..=w.g).map(|t| s[r * t - 1].clone()).collect();
        let out = weil_from_power_sums(&qr, &sr).expect("power sums of algebraic integers are integral");
        debug_assert!(out.is_symmetric());
        out
    } else {
        let s = power_sums(w, r * n);
        let sr: Vec<BigInt> = (1..=n).map(|t| s[r * t - 1].clone()).collect();
        let poly = poly_from_power_sums(&sr).expect("power sums of algebraic integers are integral");
        WeilData::new(qr, poly).expect("monic of even degree")
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester-matrix resultant of two integer polynomials.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(x), Some(y)) => (x, y),
        _ => return BigInt::zero(),
    };
    let n = da + db;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.coeffs().iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.coeffs().iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

/// `Res_Z(P(Z), T - Z^r)` as a polynomial in `T`, by evaluating integer
/// resultants at `deg P + 1` points and interpolating.
pub fn extend_weil_resultant(w: &WeilData, r: u32) -> WeilData {
    let n = w.degree();
    let r = r as usize;
    let xs: Vec<BigInt> = (0..=n).map(|i| BigInt::from(i as i64)).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|t| {
            // t - Z^r
            let mut c = vec![BigInt::zero(); r + 1];
            c[0] = t.clone();
            c[r] = -BigInt::one();
            resultant(&w.poly, &IntPoly::new(c))
        })
        .collect();
    let poly = interpolate(&xs, &ys);
    WeilData::new(num_traits::pow(w.q.clone(), r), poly).expect("resultant of monic P is monic in T")
}

/// Lagrange interpolation; the result must have integer coefficients.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> IntPoly {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, b) in basis.iter().enumerate() {
            acc[k] += b * &scale;
        }
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolated coefficient is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Real Weil polynomial `h` with `Q(T) = T^g h(T + q/T)`.
pub fn real_weil_poly(w: &WeilData) -> Result<IntPoly, WeilError> {
    if let Some(index) = w.symmetry_defect() {
        return Err(WeilError::NotSymmetric { index });
    }
    let g = w.g;
    // (T^2 + q)
    let base = IntPoly::new(vec![w.q.clone(), BigInt::zero(), BigInt::one()]);
    let mut rest = w.poly.clone();
    let mut h = vec![BigInt::zero(); g + 1];
    for k in (0..=g).rev() {
        let b = rest.coeff(g + k);
        if b.is_zero() {
            continue;
        }
        // T^(g-k) (T^2 + q)^k
        let term = &IntPoly::monomial(BigInt::one(), g - k) * &base.pow(k as u32);
        rest = &rest - &term.scale(&b);
        h[k] = b;
    }
    if !rest.is_zero() {
        return Err(WeilError::NotSymmetric { index: 0 });
    }
    Ok(IntPoly::new(h))
}

/// `T^g h(T + q/T)`, the inverse of [`real_weil_poly`].
pub fn expand_real_weil_poly(h: &IntPoly, q: &BigInt) -> IntPoly {
    let g = h.degree().unwrap_or(0);
    let base = IntPoly::new(vec![q.clone(), BigInt::zero(), BigInt::one()]);
    let mut out = IntPoly::zero();
    for (k, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &IntPoly::monomial(BigInt::one(), g - k) * &base.pow(k as u32);
        out = &out + &term.scale(c);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeilViolation {
    /// `a_i != q^(g-i) a_(2g-i)`.
    Asymmetric {
        index: usize,
        #[serde(with = "crate::json::big")]
        expected: BigInt,
        #[serde(with = "crate::json::big")]
        found: BigInt,
    },
    /// The real Weil polynomial has non-real roots.
    NonRealTraces { real_roots: usize, degree: usize },
    /// Some real root `b` of `h` has `b^2 > 4q`.
    TraceOutOfRange { count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilVerdict {
    pub holds: bool,
    pub violation: Option<WeilViolation>,
    /// Integer roots `w` of `Q` with `w^2 != q`, when the constant term is
    /// small enough to enumerate its divisors.
    #[serde(with = "crate::json::big_vec")]
    pub off_circle_integer_roots: Vec<BigInt>,
}

fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![BigInt::zero()]);
    }
    if n > BigInt::from(limit) {
        return None;
    }
    let n: u64 = n.try_into().ok()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

fn off_circle_integer_roots(w: &WeilData) -> Vec<BigInt> {
    let Some(divs) = divisors(&w.poly.coeff(0), 1 << 40) else {
        return Vec::new();
    };
    let mut roots: Vec<BigInt> = divs
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .filter(|x| w.poly.eval(x).is_zero() && x * x != w.q)
        .collect();
    roots.sort_by(|a, b| a.abs().cmp(&b.abs()).then(a.cmp(b)));
    roots.dedup();
    roots
}

/// `m(u) = prod (u - (4q - b_i^2))` over the roots `b_i` of `h`.
pub fn interval_poly(h: &IntPoly, q: &BigInt) -> IntPoly {
    let g = h.degree().unwrap_or(0);
    let hs = power_sums_of(h, 2 * g);
    let four_q = BigInt::from(4) * q;
    let binom = |n: usize, k: usize| -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    };
    // sum_i (4q - b_i^2)^k = sum_j C(k,j) (4q)^(k-j) (-1)^j p_2j
    let us: Vec<BigInt> = (1..=g)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    let p2j = if j == 0 { BigInt::from(g) } else { hs[2 * j - 1].clone() };
                    let t = binom(k, j) * num_traits::pow(four_q.clone(), k - j) * p2j;
                    if j % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum()
        })
        .collect();
    poly_from_power_sums(&us).expect("power sums of algebraic integers are integral")
}

/// Decides exactly whether every root of `Q` has absolute value `sqrt(q)`.
pub fn verify_weil_bounds(w: &WeilData) -> WeilVerdict {
    let fail = |v: WeilViolation| WeilVerdict {
        holds: false,
        violation: Some(v),
        off_circle_integer_roots: off_circle_integer_roots(w),
    };
    if let Some(index) = w.symmetry_defect() {
        return fail(WeilViolation::Asymmetric {
            index,
            expected: num_traits::pow(w.q.clone(), w.g - index) * w.poly.coeff(2 * w.g - index),
            found: w.poly.coeff(index),
        });
    }
    let h = real_weil_poly(w).expect("symmetry checked");
    let real = sturm::real_roots_with_multiplicity(&h);
    if real != w.g {
        return fail(WeilViolation::NonRealTraces {
            real_roots: real,
            degree: w.g,
        });
    }
    let m = interval_poly(&h, &w.q);
    let negative = sturm::count_negative_roots(&m);
    if negative > 0 {
        return fail(WeilViolation::TraceOutOfRange { count: negative });
    }
    WeilVerdict {
        holds: true,
        violation: None,
        off_circle_integer_roots: Vec::new(),
    }
}

/// `#A(F_q) = Q(1)`.
pub fn num_points_abelian(w: &WeilData) -> BigInt {
    w.poly.eval(&BigInt::one())
}
