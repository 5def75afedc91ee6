//! Factorization of integer polynomials (Zassenhaus: factor modulo a
//! prime, Hensel lift, recombine).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::intpoly::IntPoly;
use crate::modp::{is_prime, PolyModP};

/// `f = unit_content * prod factor^mult` with primitive factors of positive
/// leading coefficient, sorted by degree then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit_content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::constant(self.unit_content.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    /// True when the input was a single irreducible of multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

const SEED: u64 = 0x7a55_e4ba_u64;
const FAST_PATH_PRIMES: usize = 40;

fn reduce(f: &IntPoly, p: u64) -> PolyModP {
    let pb = BigInt::from(p);
    PolyModP::new(
        p,
        f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect(),
    )
}

fn lift_to_int(f: &PolyModP) -> IntPoly {
    IntPoly::new(f.coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

fn mod_poly(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half: BigInt = m >> 1;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Primes `p` (ascending, from 3) with `f mod p` of full degree and squarefree.
fn good_primes(f: &IntPoly) -> impl Iterator<Item = u64> + '_ {
    let n = f.degree().unwrap();
    (3u64..)
        .filter(|&p| is_prime(p))
        .filter(move |&p| {
            let fp = reduce(f, p);
            fp.degree() == Some(n) && fp.is_squarefree()
        })
}

/// Degrees of the irreducible factors of a squarefree `f` modulo `p`.
fn factor_degrees_mod(f: &IntPoly, p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (d, part) in reduce(f, p).distinct_degree() {
        let k = part.degree().unwrap() / d;
        out.extend(std::iter::repeat(d).take(k));
    }
    out
}

fn subset_sums(degrees: &[usize], n: usize) -> BTreeSet<usize> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    (0..=n).filter(|&s| reach[s]).collect()
}

/// Sufficient irreducibility test for a squarefree polynomial: intersect
/// the sets of possible factor degrees over several good primes.
/// `Some(true)` means proven irreducible; `None` means undecided.
pub fn irreducible_by_degrees(f: &IntPoly, primes: usize) -> Option<bool> {
    let n = f.degree()?;
    if n <= 1 {
        return Some(n == 1);
    }
    let mut possible: BTreeSet<usize> = (0..=n).collect();
    for p in good_primes(f).take(primes) {
        let sums = subset_sums(&factor_degrees_mod(f, p), n);
        possible = possible.intersection(&sums).copied().collect();
        if possible.len() == 2 {
            return Some(true);
        }
    }
    None
}

/// Lifts `f = g h mod p^k` with `g`, `h` monic and `s g + t h = 1 mod p`
/// up to modulus `pa`.
fn hensel_pair(f: &IntPoly, g0: &PolyModP, h0: &PolyModP, p: u64, pa: &BigInt) -> (IntPoly, IntPoly) {
    let (one, s, t) = g0.ext_gcd(h0);
    debug_assert_eq!(one, PolyModP::one(p));
    let pb = BigInt::from(p);
    let mut g = lift_to_int(g0);
    let mut h = lift_to_int(h0);
    let mut pk = pb.clone();
    while &pk < pa {
        let diff = f - &(&g * &h);
        let e_int = IntPoly::new(diff.coeffs().iter().map(|c| c / &pk).collect());
        let e = reduce(&e_int, p);
        let (q, r) = t.mul(&e).div_rem(g0);
        // g dh = e - h r has degree below deg f, so deg dh < deg h
        let dh = s.mul(&e).add(&q.mul(h0));
        g = &g + &lift_to_int(&r).scale(&pk);
        h = &h + &lift_to_int(&dh).scale(&pk);
        pk *= &pb;
        g = mod_poly(&g, &pk);
        h = mod_poly(&h, &pk);
    }
    (g, h)
}

fn hensel_all(f: &IntPoly, us: &[PolyModP], p: u64, pa: &BigInt) -> Vec<IntPoly> {
    if us.len() == 1 {
        return vec![mod_poly(f, pa)];
    }
    let mid = us.len() / 2;
    let prod = |xs: &[PolyModP]| xs.iter().fold(PolyModP::one(p), |acc, u| acc.mul(u));
    let (g0, h0) = (prod(&us[..mid]), prod(&us[mid..]));
    let (g, h) = hensel_pair(f, &g0, &h0, p, pa);
    let mut out = hensel_all(&g, &us[..mid], p, pa);
    out.extend(hensel_all(&h, &us[mid..], p, pa));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Factors a monic squarefree polynomial of degree at least 2.
fn factor_monic_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    // pick the good prime with the fewest modular factors among a few
    let mut best: Option<(u64, Vec<PolyModP>)> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for p in good_primes(f).take(5) {
        let us = reduce(f, p).factor_squarefree(&mut rng);
        if us.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| us.len() < b.len()) {
            best = Some((p, us));
        }
    }
    let (p, us) = best.expect("a good prime exists");
    // factors of f have coefficients below 2^n |f|_2; the modulus must exceed twice that
    let bound_sq = BigInt::from(16u32) * (BigInt::one() << (2 * n)) * f.norm2_squared();
    let pb = BigInt::from(p);
    let mut pa = pb.clone();
    while &pa * &pa <= bound_sq {
        pa *= &pb;
    }
    let mut lifted = hensel_all(f, &us, p, &pa);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut hit = None;
        for combo in combinations(lifted.len(), k) {
            let prod = combo
                .iter()
                .fold(IntPoly::one(), |acc, &i| mod_poly(&(&acc * &lifted[i]), &pa));
            let cand = symmetric(&prod, &pa);
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                rest = q;
                for &i in combo.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => k += 1,
        }
    }
    found.push(rest);
    found
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
fn factor_primitive_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.lead();
    if lc.is_one() {
        return factor_monic_squarefree(f);
    }
    // F(x) = lc^(n-1) f(x / lc) is monic
    let monic = IntPoly::new(
        (0..=n)
            .map(|i| if i == n { BigInt::one() } else { f.coeff(i) * num_traits::pow(lc.clone(), n - 1 - i) })
            .collect(),
    );
    factor_monic_squarefree(&monic)
        .into_iter()
        .map(|h| {
            let scaled: Vec<BigInt> = h
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(lc.clone(), i))
                .collect();
            IntPoly::new(scaled).primitive_part()
        })
        .collect()
}

/// Complete factorization over the integers.
pub fn factor_int_poly(f: &IntPoly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut unit_content = f.content();
    if f.lead().is_negative() {
        unit_content = -unit_content;
    }
    let mut factors: Vec<(IntPoly, u32)> = f
        .squarefree_decomposition()
        .into_iter()
        .flat_map(|(g, m)| factor_primitive_squarefree(&g).into_iter().map(move |h| (h, m)))
        .collect();
    factors.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
    Factorization { unit_content, factors }
}

/// Irreducibility over Q of a primitive-or-not polynomial of positive degree.
/// Tries the modular degree test first and factors only if that is inconclusive.
pub fn is_irreducible(f: &IntPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let pp = f.primitive_part();
    if pp.gcd(&pp.derivative()).degree() != Some(0) {
        return false;
    }
    if irreducible_by_degrees(&pp, FAST_PATH_PRIMES) == Some(true) {
        return true;
    }
    factor_int_poly(&pp).is_irreducible()
}

/// Smallest prime above `n`; used by callers that need their own moduli.
pub fn next_prime(n: u64) -> u64 {
    (n + 1..).find(|&p| is_prime(p)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn small_examples() {
        let f = factor_int_poly(&p(&[-1, 0, 1]));
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        let f = factor_int_poly(&p(&[3, 0, 1]).pow(5));
        assert_eq!(f.factors, vec![(p(&[3, 0, 1]), 5)]);
        let q1 = p(&[243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1]);
        assert!(factor_int_poly(&q1).is_irreducible());
        assert!(is_irreducible(&q1));
    }

    #[test]
    fn content_and_sign() {
        let f = p(&[6, 0, -6]);
        let fact = factor_int_poly(&f);
        assert_eq!(fact.unit_content, BigInt::from(-6));
        assert_eq!(fact.expand(), f);
        let c = factor_int_poly(&p(&[7]));
        assert!(c.factors.is_empty());
        assert_eq!(c.expand(), p(&[7]));
    }

    #[test]
    fn needs_recombination() {
        // splits into factors of degree <= 2 modulo every prime
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(irreducible_by_degrees(&f, 20), None);
        assert!(factor_int_poly(&f).is_irreducible());
        let g = &f * &p(&[-2, 0, 1]);
        let fact = factor_int_poly(&g);
        assert_eq!(fact.factors.len(), 2);
        assert_eq!(fact.expand(), g);
    }

    #[test]
    fn non_monic() {
        let f = &p(&[1, 2]) * &(&p(&[-3, 0, 5]) * &p(&[1, 1, 3]));
        let fact = factor_int_poly(&f);
        assert_eq!(fact.factors.len(), 3);
        assert_eq!(fact.expand(), f);
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
