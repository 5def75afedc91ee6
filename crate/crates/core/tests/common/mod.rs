//! Slow, independent reference implementations used as test oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use threefold::cubic::CubicForm;

/// `F_{p^k}` as base-`p` digit vectors modulo a brute-force irreducible,
/// with full addition and multiplication tables.
pub struct NaiveField {
    pub p: u64,
    pub k: usize,
    pub q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

fn digits(mut x: usize, p: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = (x as u64) % p;
            x /= p as usize;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> usize {
    d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// Product of two polynomials over `F_p` (ascending coefficients).
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Monic degree-`k` irreducible over `F_p`: not a product of two monic
/// polynomials of positive degree, checked by enumerating all such products.
fn find_irreducible(p: u64, k: usize) -> Vec<u64> {
    let monic = |d: usize, idx: usize| {
        let mut c = digits(idx, p, d);
        c.push(1);
        c
    };
    let count = |d: usize| (p as usize).pow(d as u32);
    let mut reducible = std::collections::HashSet::new();
    for d in 1..=k / 2 {
        for i in 0..count(d) {
            for j in 0..count(k - d) {
                reducible.insert(poly_mul(&monic(d, i), &monic(k - d, j), p));
            }
        }
    }
    (0..count(k))
        .map(|i| monic(k, i))
        .find(|f| !reducible.contains(f))
        .expect("irreducible polynomials exist")
}

impl NaiveField {
    pub fn new(p: u64, k: usize) -> Self {
        let q = (p as usize).pow(k as u32);
        let modulus = find_irreducible(p, k);
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as u32;
                let mut prod = poly_mul(&da, &db, p);
                for i in (k..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    for (j, m) in modulus.iter().enumerate() {
                        prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
                    }
                }
                prod.truncate(k);
                mul[a * q + b] = undigits(&prod, p) as u32;
            }
        }
        NaiveField { p, k, q, add, mul }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    /// An integer as an element of the prime field.
    pub fn int(&self, c: &BigInt) -> u32 {
        c.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }

    pub fn squares(&self) -> Vec<u32> {
        let mut roots = vec![0u32; self.q];
        for x in 0..self.q as u32 {
            roots[self.mul(x, x) as usize] += 1;
        }
        roots
    }
}

/// `#X(F_{p^k})` by evaluating every monomial at every point of `P^4`.
pub fn naive_count(x: &CubicForm, p: u64, k: usize) -> u64 {
    let f = NaiveField::new(p, k);
    let q = f.q as u32;
    let terms: Vec<([u8; 5], u32)> = x.terms().map(|(e, c)| (*e, f.int(c))).collect();
    let mut n = 0;
    let mut pt = [0u32; 5];
    for lead in 0..5 {
        let free = 4 - lead;
        for idx in 0..(q as u64).pow(free as u32) {
            pt.iter_mut().for_each(|c| *c = 0);
            pt[lead] = 1;
            let mut rest = idx;
            for c in pt.iter_mut().skip(lead + 1) {
                *c = (rest % q as u64) as u32;
                rest /= q as u64;
            }
            let mut acc = 0;
            for (e, c) in &terms {
                let mut t = *c;
                for i in 0..5 {
                    for _ in 0..e[i] {
                        t = f.mul(t, pt[i]);
                    }
                }
                acc = f.add(acc, t);
            }
            if acc == 0 {
                n += 1;
            }
        }
    }
    n
}

/// Points of the smooth projective model of `y^2 = f(x)` with `deg f` odd,
/// over `F_{p^k}`; `f` has coefficients in `F_p`, ascending.
pub fn hyperelliptic_count(f: &[u64], p: u64, k: usize) -> u64 {
    assert!(f.len() % 2 == 0, "odd degree");
    let field = NaiveField::new(p, k);
    let sq = field.squares();
    let coeffs: Vec<u32> = f.iter().map(|&c| c as u32).collect();
    let mut n = 1;
    for x in 0..field.q as u32 {
        let v = coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c));
        n += sq[v as usize] as u64;
    }
    n
}

pub fn random_cubic<R: Rng>(rng: &mut R, terms: usize) -> CubicForm {
    let mut out = Vec::new();
    while out.len() < terms {
        let mut e = [0u8; 5];
        for _ in 0..3 {
            e[rng.gen_range(0..5)] += 1;
        }
        out.push((e, BigInt::from(rng.gen_range(-4i64..=4))));
    }
    CubicForm::new(out).unwrap_or_else(|_| CubicForm::fermat())
}
