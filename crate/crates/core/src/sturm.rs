//! Sturm sequences over the integers.
//!
//! Each remainder is a pseudo-remainder rescaled by a positive constant
//! (sign fixed up for the pseudo-division multiplier, then divided by its
//! content), so sign variations are exactly those of the classical
//! rational Sturm chain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::intpoly::IntPoly;

/// Points at which sign variations are evaluated.
#[derive(Clone, Debug)]
pub enum Point {
    NegInfinity,
    PosInfinity,
    Integer(BigInt),
}

pub struct SturmChain {
    chain: Vec<IntPoly>,
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl SturmChain {
    pub fn new(f: &IntPoly) -> Self {
        let mut chain = Vec::new();
        if f.is_zero() {
            return SturmChain { chain };
        }
        let f0 = f.primitive_part_keep_sign();
        let f1 = f.derivative().primitive_part_keep_sign();
        chain.push(f0);
        if !f1.is_zero() {
            chain.push(f1);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree() == Some(0) {
                break;
            }
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(da-db+1) * rem; flip if that multiplier is negative
            let negative_mult = b.lead().is_negative() && (da - db + 1).is_odd();
            let next = if negative_mult { r } else { -&r };
            chain.push(next.primitive_part_keep_sign());
        }
        SturmChain { chain }
    }

    fn signs_at(&self, at: &Point) -> Vec<i8> {
        self.chain
            .iter()
            .map(|p| match at {
                Point::PosInfinity => sign(&p.lead()),
                Point::NegInfinity => {
                    let s = sign(&p.lead());
                    if p.degree().unwrap_or(0) % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                }
                Point::Integer(x) => sign(&p.eval(x)),
            })
            .collect()
    }

    pub fn variations(&self, at: &Point) -> usize {
        let signs: Vec<i8> = self.signs_at(at).into_iter().filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_between(&self, a: &Point, b: &Point) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Distinct real roots.
    pub fn count_real(&self) -> usize {
        self.count_between(&Point::NegInfinity, &Point::PosInfinity)
    }
}

impl IntPoly {
    /// Content removed, sign of the leading coefficient preserved.
    pub fn primitive_part_keep_sign(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        IntPoly::new(self.coeffs().iter().map(|a| a / &c).collect())
    }
}

/// Real roots counted with multiplicity, via square-free decomposition.
pub fn real_roots_with_multiplicity(f: &IntPoly) -> usize {
    f.squarefree_decomposition()
        .iter()
        .map(|(g, m)| SturmChain::new(g).count_real() * *m as usize)
        .sum()
}

/// Number of distinct real roots strictly below zero.
pub fn count_negative_roots(f: &IntPoly) -> usize {
    if f.is_zero() {
        return 0;
    }
    // strip roots at zero so that the endpoint is not a root
    let shift = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let g = IntPoly::new(f.coeffs()[shift..].to_vec());
    SturmChain::new(&g).count_between(&Point::NegInfinity, &Point::Integer(BigInt::zero()))
}
