//! Upper bounds for point counts of Prym varieties and the special Weil
//! polynomials of the Fermat and Klein cubic threefolds.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::IntPoly;
use crate::modp::{is_prime, pow_mod};
use crate::weil::{num_points_abelian, power_sums, verify_weil_bounds, WeilData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrymError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not 1 mod 3")]
    NotOneModThree(u64),
    #[error("the Fermat cubic has bad reduction at 3")]
    BadReduction,
    #[error("Weil polynomial fails the Riemann hypothesis check")]
    NotWeil,
    #[error("Weil polynomial has dimension {dim}, expected genus - 1 = {expected}")]
    DimensionMismatch { dim: usize, expected: usize },
}

/// `(q + 1 + M_1 / (g-1))^(g-1)`.
pub fn perret_bound(q: &BigInt, g: usize, m1: &BigInt) -> Result<BigRational, PrymError> {
    if g < 2 {
        return Err(PrymError::GenusTooSmall(g));
    }
    let base = BigRational::from_integer(q + 1) + BigRational::new(m1.clone(), BigInt::from(g - 1));
    Ok(num_traits::pow(base, g - 1))
}

/// `(q + 1 + floor(2 sqrt q))^(g-1)`.
pub fn weil_upper(q: &BigInt, g: usize) -> Result<BigInt, PrymError> {
    if g < 2 {
        return Err(PrymError::GenusTooSmall(g));
    }
    let two_sqrt: BigInt = (BigInt::from(4) * q).sqrt();
    Ok(num_traits::pow(q + 1 + two_sqrt, g - 1))
}

/// The pair `(a, b)` with `4p = a^2 + 27 b^2`, `a = 1 mod 3`, `b > 0`, by exhaustive search.
pub fn cornacchia_27(p: u64) -> Result<(i64, i64), PrymError> {
    if !is_prime(p) {
        return Err(PrymError::NotPrime(p));
    }
    if p % 3 != 1 {
        return Err(PrymError::NotOneModThree(p));
    }
    let four_p = 4 * p as i64;
    let hits: Vec<(i64, i64)> = (1..)
        .take_while(|b| 27 * b * b <= four_p)
        .filter_map(|b| {
            let rest = four_p - 27 * b * b;
            let a = rest.sqrt();
            (a * a == rest).then_some((a, b))
        })
        .flat_map(|(a, b)| [(a, b), (-a, b)])
        .filter(|(a, _)| a.rem_euclid(3) == 1)
        .collect();
    assert_eq!(hits.len(), 1, "4p = a^2 + 27 b^2 has a unique normalized solution");
    Ok(hits[0])
}

/// Weil polynomial of the intermediate Jacobian of the Fermat cubic over `F_p`.
pub fn fermat_weil_poly(p: u64) -> Result<WeilData, PrymError> {
    if !is_prime(p) {
        return Err(PrymError::NotPrime(p));
    }
    if p == 3 {
        return Err(PrymError::BadReduction);
    }
    let a = if p % 3 == 1 { cornacchia_27(p)?.0 } else { 0 };
    let quad = IntPoly::from_i64(&[p as i64, a, 1]);
    Ok(WeilData::new(p, quad.pow(5)).expect("monic of degree 10"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KleinCase {
    SupersingularCase,
    OtherCase,
    BadReduction,
}

pub const KLEIN_RESIDUE_LIST: [u64; 5] = [1, 3, 4, 5, 9];

/// Both readings of the Klein cubic condition at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinClassification {
    pub p: u64,
    /// `p mod 11` in {1, 3, 4, 5, 9}.
    pub residue_list: KleinCase,
    /// `-11` not a square modulo `p` (Kronecker symbol `(-11/p) = -1`).
    pub quadratic_character: KleinCase,
    /// `(-11/p)`, which equals `(p/11)`.
    pub kronecker: i8,
    pub agree: bool,
}

/// Kronecker symbol `(-11/p)` for a prime `p != 11`.
pub fn kronecker_minus_11(p: u64) -> i8 {
    if p == 2 {
        // -11 = 5 mod 8
        return -1;
    }
    let a = (p as i64 - 11).rem_euclid(p as i64) as u64;
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

pub fn klein_case_test(p: u64) -> Result<KleinClassification, PrymError> {
    if !is_prime(p) {
        return Err(PrymError::NotPrime(p));
    }
    if p == 11 {
        return Ok(KleinClassification {
            p,
            residue_list: KleinCase::BadReduction,
            quadratic_character: KleinCase::BadReduction,
            kronecker: 0,
            agree: true,
        });
    }
    let pick = |ss: bool| if ss { KleinCase::SupersingularCase } else { KleinCase::OtherCase };
    let residue_list = pick(KLEIN_RESIDUE_LIST.contains(&(p % 11)));
    let kronecker = kronecker_minus_11(p);
    let quadratic_character = pick(kronecker == -1);
    Ok(KleinClassification {
        p,
        residue_list,
        quadratic_character,
        kronecker,
        agree: residue_list == quadratic_character,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "crate::json::big")]
    pub q: BigInt,
    pub g: usize,
    #[serde(with = "crate::json::big")]
    pub n_points: BigInt,
    #[serde(with = "crate::json::rational")]
    pub perret_bound: BigRational,
    #[serde(with = "crate::json::big")]
    pub weil_bound: BigInt,
    pub attains_weil: bool,
    pub attains_perret: bool,
}

/// Compares `#A(F_q)` for a Prym candidate of dimension `g - 1` with both bounds.
pub fn attainment_report(w: &WeilData, g: usize) -> Result<BoundReport, PrymError> {
    if g < 2 {
        return Err(PrymError::GenusTooSmall(g));
    }
    if w.g + 1 != g {
        return Err(PrymError::DimensionMismatch {
            dim: w.g,
            expected: g - 1,
        });
    }
    if !verify_weil_bounds(w).holds {
        return Err(PrymError::NotWeil);
    }
    let n_points = num_points_abelian(w);
    let m1 = -power_sums(w, 1).remove(0);
    let perret = perret_bound(&w.q, g, &m1)?;
    let weil = weil_upper(&w.q, g)?;
    Ok(BoundReport {
        q: w.q.clone(),
        g,
        attains_weil: n_points == weil,
        attains_perret: BigRational::from_integer(n_points.clone()) == perret,
        n_points,
        perret_bound: perret,
        weil_bound: weil,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::extend_weil;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn perret_examples() {
        let r = |x: i64| BigRational::from_integer(b(x));
        assert_eq!(perret_bound(&b(4), 6, &b(20)).unwrap(), r(59049));
        assert_eq!(perret_bound(&b(3), 6, &b(0)).unwrap(), r(1024));
        assert_eq!(perret_bound(&b(9), 6, &b(30)).unwrap(), r(1048576));
        assert_eq!(perret_bound(&b(3), 3, &b(1)).unwrap(), BigRational::new(b(81), b(4)));
        assert_eq!(perret_bound(&b(3), 1, &b(0)), Err(PrymError::GenusTooSmall(1)));
    }

    #[test]
    fn weil_upper_examples() {
        assert_eq!(weil_upper(&b(4), 6).unwrap(), b(59049));
        assert_eq!(weil_upper(&b(9), 6).unwrap(), b(1048576));
        assert_eq!(weil_upper(&b(3), 6).unwrap(), b(16807));
    }

    #[test]
    fn cornacchia_examples() {
        assert_eq!(cornacchia_27(7).unwrap(), (1, 1));
        assert_eq!(cornacchia_27(13).unwrap(), (-5, 1));
        assert_eq!(cornacchia_27(31).unwrap(), (4, 2));
        assert_eq!(cornacchia_27(5), Err(PrymError::NotOneModThree(5)));
        assert_eq!(cornacchia_27(9), Err(PrymError::NotPrime(9)));
    }

    #[test]
    fn fermat_examples() {
        let quint = |c: &[i64]| IntPoly::from_i64(c).pow(5);
        assert_eq!(fermat_weil_poly(2).unwrap().poly, quint(&[2, 0, 1]));
        assert_eq!(fermat_weil_poly(5).unwrap().poly, quint(&[5, 0, 1]));
        assert_eq!(fermat_weil_poly(7).unwrap().poly, quint(&[7, 1, 1]));
        assert_eq!(fermat_weil_poly(13).unwrap().poly, quint(&[13, -5, 1]));
        assert_eq!(fermat_weil_poly(3), Err(PrymError::BadReduction));
    }

    #[test]
    fn klein_examples() {
        assert_eq!(klein_case_test(11).unwrap().residue_list, KleinCase::BadReduction);
        let k3 = klein_case_test(3).unwrap();
        assert_eq!(k3.residue_list, KleinCase::SupersingularCase);
        assert_eq!(k3.kronecker, 1);
        assert_eq!(k3.quadratic_character, KleinCase::OtherCase);
        assert!(!k3.agree);
        let k2 = klein_case_test(2).unwrap();
        assert_eq!(k2.residue_list, KleinCase::OtherCase);
        assert_eq!(k2.kronecker, -1);
        // (-11/p) = (p/11) for odd p
        for p in [3u64, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let k = klein_case_test(p).unwrap();
            let square_mod_11 = KLEIN_RESIDUE_LIST.contains(&(p % 11));
            assert_eq!(k.kronecker == 1, square_mod_11, "p = {p}");
            assert!(!k.agree);
        }
    }

    #[test]
    fn attainment_examples() {
        let w = extend_weil(&fermat_weil_poly(2).unwrap(), 2);
        let rep = attainment_report(&w, 6).unwrap();
        assert_eq!(rep.n_points, b(59049));
        assert!(rep.attains_weil && rep.attains_perret);

        let q1 = WeilData::new(3, IntPoly::from_i64(&[243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1])).unwrap();
        let rep = attainment_report(&q1, 6).unwrap();
        assert_eq!(rep.n_points, b(33));
        assert!(!rep.attains_weil);

        let ss = extend_weil(&WeilData::new(3, IntPoly::from_i64(&[3, 0, 1]).pow(5)).unwrap(), 2);
        let rep = attainment_report(&ss, 6).unwrap();
        assert_eq!(rep.n_points, b(1048576));
        assert!(rep.attains_weil);

        assert!(matches!(attainment_report(&q1, 4), Err(PrymError::DimensionMismatch { .. })));
    }
}
