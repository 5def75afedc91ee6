//! Absolute simplicity of an abelian variety from its Weil polynomial.
//!
//! If `Q(A/F_{q^r})` is irreducible and not a polynomial in `T^k` for any
//! `k >= 2`, for every `r` with `phi(r) | 2g`, then `A` is absolutely simple.
//! The test is sufficient only.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::factor;
use crate::intpoly::IntPoly;
use crate::weil::{extend_weil, WeilData};

/// Largest `k` with `P` in `Z[T^k]`; 1 for constants.
pub fn max_subring_exponent(p: &IntPoly) -> usize {
    let k = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .fold(0usize, |acc, (i, _)| acc.gcd(&i));
    k.max(1)
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// All `r >= 2` with `phi(r) | 2g`. Since `phi(r) >= sqrt(r/2)`, searching
/// `r <= 2 (2g)^2` is complete.
pub fn hz_extension_set(g: usize) -> Vec<u32> {
    assert!(g >= 1, "dimension must be positive");
    let two_g = 2 * g as u64;
    (2..=2 * two_g * two_g)
        .filter(|&r| two_g % euler_phi(r) == 0)
        .map(|r| r as u32)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplicityVerdict {
    AbsolutelySimple,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCheck {
    pub r: u32,
    pub irreducible: bool,
    pub max_subring_exponent: usize,
}

impl ExtensionCheck {
    pub fn passes(&self) -> bool {
        self.irreducible && self.max_subring_exponent == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityReport {
    #[serde(with = "crate::json::big")]
    pub q: BigInt,
    pub g: usize,
    pub r_set: Vec<u32>,
    pub per_r: Vec<ExtensionCheck>,
    pub verdict: SimplicityVerdict,
}

impl SimplicityReport {
    pub fn is_absolutely_simple(&self) -> bool {
        self.verdict == SimplicityVerdict::AbsolutelySimple
    }

    /// First extension degree at which the criterion fails.
    pub fn first_failure(&self) -> Option<&ExtensionCheck> {
        self.per_r.iter().find(|c| !c.passes())
    }
}

pub fn check_extension(w: &WeilData, r: u32) -> ExtensionCheck {
    let e = extend_weil(w, r);
    ExtensionCheck {
        r,
        irreducible: factor::is_irreducible(&e.poly),
        max_subring_exponent: max_subring_exponent(&e.poly),
    }
}

/// Runs the criterion at `r = 1` and every `r` of [`hz_extension_set`].
/// The per-`r` checks run in parallel; the report is ordered by `r`.
pub fn check_absolutely_simple(w: &WeilData) -> SimplicityReport {
    let mut r_set = vec![1];
    r_set.extend(hz_extension_set(w.g));
    let per_r: Vec<ExtensionCheck> = r_set.par_iter().map(|&r| check_extension(w, r)).collect();
    let verdict = if per_r.iter().all(ExtensionCheck::passes) {
        SimplicityVerdict::AbsolutelySimple
    } else {
        SimplicityVerdict::Inconclusive
    };
    SimplicityReport {
        q: w.q.clone(),
        g: w.g,
        r_set,
        per_r,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn subring_exponent() {
        assert_eq!(max_subring_exponent(&p(&[3, 0, 1]).pow(5)), 2);
        assert_eq!(max_subring_exponent(&p(&[5, 0, 0, 2, 0, 0, 1])), 3);
        assert_eq!(max_subring_exponent(&p(&[243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1])), 1);
        assert_eq!(max_subring_exponent(&p(&[4])), 1);
        assert_eq!(max_subring_exponent(&p(&[243, 0, 0, 0, 0, 31, 0, 0, 0, 0, 1])), 5);
    }

    #[test]
    fn extension_sets() {
        assert_eq!(hz_extension_set(5), vec![2, 3, 4, 6, 11, 22]);
        assert_eq!(hz_extension_set(1), vec![2, 3, 4, 6]);
        assert_eq!(hz_extension_set(2), vec![2, 3, 4, 5, 6, 8, 10, 12]);
    }

    #[test]
    fn totient() {
        let phi: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn simple_examples() {
        let q1 = WeilData::new(3, p(&[243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1])).unwrap();
        let rep = check_absolutely_simple(&q1);
        assert!(rep.is_absolutely_simple());
        assert_eq!(rep.r_set, vec![1, 2, 3, 4, 6, 11, 22]);
        assert_eq!(rep.per_r.iter().map(|c| c.r).collect::<Vec<_>>(), rep.r_set);

        let pow5 = WeilData::new(3, p(&[3, 0, 1]).pow(5)).unwrap();
        let rep = check_absolutely_simple(&pow5);
        assert_eq!(rep.verdict, SimplicityVerdict::Inconclusive);
        assert!(!rep.per_r[0].irreducible);

        let ell = WeilData::new(3, p(&[3, 0, 1])).unwrap();
        let rep = check_absolutely_simple(&ell);
        assert_eq!(rep.verdict, SimplicityVerdict::Inconclusive);
        assert_eq!(rep.first_failure().unwrap().r, 1);
        assert!(rep.per_r[0].irreducible);
        assert!(!rep.per_r[1].irreducible);
    }
}
