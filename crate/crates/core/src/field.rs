//! Arithmetic in `F_{p^k}` for small `p` and `k <= 12`.
//!
//! Two interchangeable back ends implement [`FieldOps`]:
//!
//! * [`ZechField`]: every nonzero element is stored as `1 + log_g(x)` for a
//!   fixed primitive element `g`; multiplication is an addition of logs and
//!   addition goes through a Zech logarithm table. Used for `q <= 2^20`.
//! * [`PolyField`]: elements are coefficient vectors in the polynomial basis
//!   `F_p[T]/(m(T))`, packed as base-`p` integers. Fallback for larger `q`.
//!
//! In both back ends the handle `Fe(0)` is zero, `Fe(1)` is one and the
//! handles `Fe(0)..Fe(q)` enumerate the field exactly once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modp::{self, PolyModP};

pub const MAX_DEGREE: u32 = 12;
pub const DEFAULT_ZECH_MAX_Q: u64 = 1 << 20;
pub const DEFAULT_MEMORY_BUDGET: usize = 512 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} out of range 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("field order {0} exceeds the supported range (q < 2^32)")]
    OrderTooLarge(u128),
    #[error("field tables need {needed} bytes, budget is {budget}")]
    MemoryBudget { needed: usize, budget: usize },
    #[error("elements belong to different fields ({0} vs {1})")]
    MixedFields(FieldId, FieldId),
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// Raw element handle. Meaningful only together with the field that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    ZechLog,
    PolynomialBasis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldId {
    pub p: u32,
    pub k: u32,
    pub representation: Representation,
}

impl std::fmt::Display for FieldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}^{} ({:?})", self.p, self.k, self.representation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub k: u32,
    pub q: u64,
    /// Monic irreducible modulus, ascending coefficients, length `k + 1`.
    pub modulus: Vec<u32>,
    pub representation: Representation,
}

#[derive(Clone, Copy, Debug)]
pub struct FieldConfig {
    /// Largest `q` for which Zech tables are built.
    pub zech_max_q: u64,
    /// Upper bound on bytes spent on lookup tables.
    pub memory_budget: usize,
    /// Force a representation instead of choosing by `q`.
    pub force: Option<Representation>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            zech_max_q: DEFAULT_ZECH_MAX_Q,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            force: None,
        }
    }
}

/// The operations the counting engine needs, on raw handles.
///
/// Implementations never check that handles belong to them; use
/// [`FiniteField`] and [`FieldElement`] for the checked interface.
pub trait FieldOps: Send + Sync {
    fn params(&self) -> &FieldParams;
    fn add(&self, a: Fe, b: Fe) -> Fe;
    fn neg(&self, a: Fe) -> Fe;
    fn mul(&self, a: Fe, b: Fe) -> Fe;
    fn inv(&self, a: Fe) -> Option<Fe>;
    /// Image of `c` under `Z -> F_p`, with `0 <= c < p`.
    fn from_residue(&self, c: u32) -> Fe;
    /// Polynomial-basis coordinates, ascending, length `k`.
    fn to_coeffs(&self, a: Fe) -> Vec<u32>;
    fn from_coeffs(&self, coeffs: &[u32]) -> Fe;

    #[inline]
    fn q(&self) -> u64 {
        self.params().q
    }

    #[inline]
    fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn from_i64(&self, c: i64) -> Fe {
        let p = self.params().p as i64;
        self.from_residue(c.rem_euclid(p) as u32)
    }

    fn from_bigint(&self, c: &BigInt) -> Fe {
        let p = BigInt::from(self.params().p);
        let r = c.mod_floor(&p).to_u32().expect("residue fits u32");
        self.from_residue(r)
    }

    /// All `q` elements, each exactly once.
    fn elements(&self) -> std::iter::Map<std::ops::Range<u32>, fn(u32) -> Fe> {
        (0..self.q() as u32).map(Fe as fn(u32) -> Fe)
    }
}

/// Packed polynomial-basis arithmetic modulo a monic irreducible of degree `k`.
#[derive(Clone, Debug)]
struct PolyBasis {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

impl PolyBasis {
    fn decode(&self, mut enc: u64, out: &mut [u64]) {
        for d in out.iter_mut().take(self.k) {
            *d = enc % self.p;
            enc /= self.p;
        }
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits[..self.k]
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let mut da = [0u64; MAX_DEGREE as usize];
        let mut db = [0u64; MAX_DEGREE as usize];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        for i in 0..self.k {
            da[i] = (da[i] + db[i]) % self.p;
        }
        self.encode(&da)
    }

    fn neg(&self, a: u64) -> u64 {
        let mut da = [0u64; MAX_DEGREE as usize];
        self.decode(a, &mut da);
        for d in da.iter_mut().take(self.k) {
            *d = (self.p - *d) % self.p;
        }
        self.encode(&da)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let k = self.k;
        let p = self.p;
        let mut da = [0u64; MAX_DEGREE as usize];
        let mut db = [0u64; MAX_DEGREE as usize];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE as usize];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + modp::mul_mod(da[i], db[j], p)) % p;
            }
        }
        for i in (k..2 * k).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let t = modp::mul_mod(c, self.modulus[j], p);
                prod[i - k + j] = (prod[i - k + j] + p - t) % p;
            }
        }
        self.encode(&prod)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn validate(p: u64, k: u32) -> Result<u64, FieldError> {
    if !modp::is_prime(p) || p > u32::MAX as u64 {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 || k > MAX_DEGREE {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    let q = (p as u128).pow(k);
    if q >= 1u128 << 32 {
        return Err(FieldError::OrderTooLarge(q));
    }
    Ok(q as u64)
}

/// Lexicographically smallest monic irreducible of degree `k` over `F_p`,
/// ordering candidates by the packed integer `sum c_i p^i` of their lower
/// coefficients (so the top coefficient below the leading one is most
/// significant). For `k = 1` this is `T`.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = p64.pow(k);
    for enc in 0..count {
        let mut coeffs: Vec<u64> = Vec::with_capacity(k as usize + 1);
        let mut e = enc;
        for _ in 0..k {
            coeffs.push(e % p64);
            e /= p64;
        }
        coeffs.push(1);
        if PolyModP::new(p64, coeffs.clone()).is_irreducible() {
            return coeffs.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[derive(Clone, Debug)]
pub struct ZechField {
    params: FieldParams,
    order: u32,
    /// `-1 = g^neg_one_log` (0 in characteristic 2).
    neg_one_log: u32,
    /// `zech[n]` = handle of `1 + g^n`.
    zech: Vec<u32>,
    /// `exp[n]` = packed coefficients of `g^n`.
    exp: Vec<u32>,
    /// packed coefficients -> handle.
    log: Vec<u32>,
}

impl ZechField {
    pub fn table_bytes(q: u64) -> usize {
        3 * q as usize * std::mem::size_of::<u32>()
    }

    fn build(params: FieldParams) -> Self {
        let basis = PolyBasis {
            p: params.p as u64,
            k: params.k as usize,
            modulus: params.modulus.iter().map(|&c| c as u64).collect(),
        };
        let q = params.q;
        let order = (q - 1) as u32;
        let factors = modp::prime_divisors(order as u64);
        let generator = (1..q)
            .find(|&cand| {
                factors
                    .iter()
                    .all(|&l| basis.pow(cand, order as u64 / l) != 1)
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for (n, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            log[cur as usize] = n as u32 + 1;
            cur = basis.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        let zech = exp
            .iter()
            .map(|&enc| log[basis.add(enc as u64, 1) as usize])
            .collect();
        let neg_one_log = if params.p == 2 { 0 } else { order / 2 };

        ZechField {
            params,
            order,
            neg_one_log,
            zech,
            exp,
            log,
        }
    }

    #[inline]
    fn add_log(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }
}

impl FieldOps for ZechField {
    fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = a.0 - 1;
        let lb = b.0 - 1;
        // a + b = a * (1 + g^(lb - la))
        let n = if lb >= la { lb - la } else { lb + self.order - la };
        let z = self.zech[n as usize];
        if z == 0 {
            Fe::ZERO
        } else {
            Fe(self.add_log(la, z - 1) + 1)
        }
    }

    #[inline]
    fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe(self.add_log(a.0 - 1, self.neg_one_log) + 1)
        }
    }

    #[inline]
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            Fe::ZERO
        } else {
            Fe(self.add_log(a.0 - 1, b.0 - 1) + 1)
        }
    }

    #[inline]
    fn inv(&self, a: Fe) -> Option<Fe> {
        match a.0 {
            0 => None,
            1 => Some(Fe::ONE),
            h => Some(Fe(self.order - (h - 1) + 1)),
        }
    }

    fn pow(&self, a: Fe, e: u64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let l = ((a.0 - 1) as u64 * (e % self.order as u64)) % self.order as u64;
        Fe(l as u32 + 1)
    }

    #[inline]
    fn from_residue(&self, c: u32) -> Fe {
        Fe(self.log[c as usize])
    }

    fn to_coeffs(&self, a: Fe) -> Vec<u32> {
        let enc = if a.0 == 0 { 0 } else { self.exp[(a.0 - 1) as usize] };
        unpack(enc as u64, self.params.p, self.params.k)
    }

    fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        Fe(self.log[pack(coeffs, self.params.p) as usize])
    }
}

fn unpack(mut enc: u64, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = (enc % p as u64) as u32;
            enc /= p as u64;
            d
        })
        .collect()
}

fn pack(coeffs: &[u32], p: u32) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &d| acc * p as u64 + (d % p) as u64)
}

#[derive(Clone, Debug)]
pub struct PolyField {
    params: FieldParams,
    basis: PolyBasis,
}

impl PolyField {
    fn build(params: FieldParams) -> Self {
        let basis = PolyBasis {
            p: params.p as u64,
            k: params.k as usize,
            modulus: params.modulus.iter().map(|&c| c as u64).collect(),
        };
        PolyField { params, basis }
    }
}

impl FieldOps for PolyField {
    fn params(&self) -> &FieldParams {
        &self.params
    }

    fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.basis.add(a.0 as u64, b.0 as u64) as u32)
    }

    fn neg(&self, a: Fe) -> Fe {
        Fe(self.basis.neg(a.0 as u64) as u32)
    }

    fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.basis.mul(a.0 as u64, b.0 as u64) as u32)
    }

    fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            None
        } else {
            Some(Fe(self.basis.pow(a.0 as u64, self.params.q - 2) as u32))
        }
    }

    fn from_residue(&self, c: u32) -> Fe {
        Fe(c % self.params.p)
    }

    fn to_coeffs(&self, a: Fe) -> Vec<u32> {
        unpack(a.0 as u64, self.params.p, self.params.k)
    }

    fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        Fe(pack(coeffs, self.params.p) as u32)
    }
}

/// A constructed finite field, dispatching to one of the two back ends.
#[derive(Clone, Debug)]
pub enum FiniteField {
    Zech(ZechField),
    Poly(PolyField),
}

/// Element tagged with the identity of its field; the checked counterpart of [`Fe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub field: FieldId,
    pub handle: Fe,
}

/// Builds `F_{p^k}` with the default configuration.
pub fn make_field(p: u64, k: u32) -> Result<FiniteField, FieldError> {
    FiniteField::with_config(p, k, &FieldConfig::default())
}

impl FiniteField {
    pub fn with_config(p: u64, k: u32, config: &FieldConfig) -> Result<Self, FieldError> {
        let q = validate(p, k)?;
        let representation = match config.force {
            Some(r) => r,
            None if q <= config.zech_max_q => Representation::ZechLog,
            None => Representation::PolynomialBasis,
        };
        if representation == Representation::ZechLog {
            let needed = ZechField::table_bytes(q);
            if needed > config.memory_budget {
                return Err(FieldError::MemoryBudget {
                    needed,
                    budget: config.memory_budget,
                });
            }
        }
        let params = FieldParams {
            p: p as u32,
            k,
            q,
            modulus: smallest_irreducible(p as u32, k),
            representation,
        };
        Ok(match representation {
            Representation::ZechLog => FiniteField::Zech(ZechField::build(params)),
            Representation::PolynomialBasis => FiniteField::Poly(PolyField::build(params)),
        })
    }

    pub fn id(&self) -> FieldId {
        let p = self.params();
        FieldId {
            p: p.p,
            k: p.k,
            representation: p.representation,
        }
    }

    pub fn wrap(&self, handle: Fe) -> FieldElement {
        FieldElement {
            field: self.id(),
            handle,
        }
    }

    fn check(&self, x: &FieldElement) -> Result<Fe, FieldError> {
        let id = self.id();
        if x.field != id {
            return Err(FieldError::MixedFields(x.field, id));
        }
        Ok(x.handle)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(Fe::ZERO)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(Fe::ONE)
    }

    pub fn element_from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        self.wrap(self.from_coeffs(coeffs))
    }

    pub fn fe_add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.add(self.check(x)?, self.check(y)?)))
    }

    pub fn fe_sub(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.sub(self.check(x)?, self.check(y)?)))
    }

    pub fn fe_mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.mul(self.check(x)?, self.check(y)?)))
    }

    pub fn fe_inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let h = self.check(x)?;
        self.inv(h).map(|i| self.wrap(i)).ok_or(FieldError::ZeroInverse)
    }

    pub fn fe_pow(&self, x: &FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.pow(self.check(x)?, e)))
    }

    pub fn reduce_integer(&self, c: &BigInt) -> FieldElement {
        self.wrap(self.from_bigint(c))
    }

    /// Distinct roots in `F_q` of `c3 T^3 + c2 T^2 + c1 T + c0`.
    pub fn cubic_root_count(
        &self,
        c3: &FieldElement,
        c2: &FieldElement,
        c1: &FieldElement,
        c0: &FieldElement,
    ) -> Result<RootCount, FieldError> {
        let cs = [self.check(c3)?, self.check(c2)?, self.check(c1)?, self.check(c0)?];
        Ok(match self {
            FiniteField::Zech(f) => cubic_root_count(f, cs),
            FiniteField::Poly(f) => cubic_root_count(f, cs),
        })
    }
}

macro_rules! dispatch {
    ($self:ident, $f:ident => $body:expr) => {
        match $self {
            FiniteField::Zech($f) => $body,
            FiniteField::Poly($f) => $body,
        }
    };
}

impl FieldOps for FiniteField {
    fn params(&self) -> &FieldParams {
        dispatch!(self, f => f.params())
    }
    fn add(&self, a: Fe, b: Fe) -> Fe {
        dispatch!(self, f => f.add(a, b))
    }
    fn neg(&self, a: Fe) -> Fe {
        dispatch!(self, f => f.neg(a))
    }
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        dispatch!(self, f => f.mul(a, b))
    }
    fn inv(&self, a: Fe) -> Option<Fe> {
        dispatch!(self, f => f.inv(a))
    }
    fn pow(&self, a: Fe, e: u64) -> Fe {
        dispatch!(self, f => f.pow(a, e))
    }
    fn from_residue(&self, c: u32) -> Fe {
        dispatch!(self, f => f.from_residue(c))
    }
    fn to_coeffs(&self, a: Fe) -> Vec<u32> {
        dispatch!(self, f => f.to_coeffs(a))
    }
    fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        dispatch!(self, f => f.from_coeffs(coeffs))
    }
}

/// Root count of a univariate cubic over `F_q`. `All` marks the degenerate
/// fiber where every coefficient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootCount {
    Finite(u8),
    All,
}

impl RootCount {
    /// Number of affine solutions in `F_q`.
    pub fn affine(self, q: u64) -> u64 {
        match self {
            RootCount::Finite(n) => n as u64,
            RootCount::All => q,
        }
    }
}

/// Residue class modulo a monic polynomial of degree at most 3.
type Residue = [Fe; 3];

#[inline]
fn mul_residue<F: FieldOps + ?Sized>(f: &F, modulus: &[Fe; 4], deg: usize, a: &Residue, b: &Residue) -> Residue {
    let mut prod = [Fe::ZERO; 5];
    for i in 0..deg {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..deg {
            prod[i + j] = f.add(prod[i + j], f.mul(a[i], b[j]));
        }
    }
    for i in (deg..2 * deg - 1).rev() {
        let c = prod[i];
        if c.is_zero() {
            continue;
        }
        prod[i] = Fe::ZERO;
        for j in 0..deg {
            prod[i - deg + j] = f.sub(prod[i - deg + j], f.mul(c, modulus[j]));
        }
    }
    [prod[0], prod[1], prod[2]]
}

/// Degree of the gcd of two polynomials given by coefficient slices (ascending).
fn gcd_degree<F: FieldOps + ?Sized>(f: &F, a: &[Fe], b: &[Fe]) -> usize {
    let mut a: Vec<Fe> = a.to_vec();
    let mut b: Vec<Fe> = b.to_vec();
    let trim = |v: &mut Vec<Fe>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = f.inv(b[db]).expect("leading coefficient is nonzero");
        while a.len() > db {
            let top = a.len() - 1;
            let c = f.mul(a[top], inv);
            for j in 0..=db {
                a[top - db + j] = f.sub(a[top - db + j], f.mul(c, b[j]));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Number of distinct roots in `F_q` of `c[0] T^3 + c[1] T^2 + c[2] T + c[3]`,
/// computed as `deg gcd(f, T^q - T)` with `T^q mod f` by square-and-multiply.
pub fn cubic_root_count<F: FieldOps + ?Sized>(f: &F, c: [Fe; 4]) -> RootCount {
    let [c3, c2, c1, c0] = c;
    let coeffs = [c0, c1, c2, c3];
    let deg = match coeffs.iter().rposition(|x| !x.is_zero()) {
        None => return RootCount::All,
        Some(d) => d,
    };
    match deg {
        0 => return RootCount::Finite(0),
        1 => return RootCount::Finite(1),
        _ => {}
    }
    let lead_inv = f.inv(coeffs[deg]).expect("nonzero");
    let mut modulus = [Fe::ZERO; 4];
    for i in 0..=deg {
        modulus[i] = f.mul(coeffs[i], lead_inv);
    }
    // T^q mod f
    let mut acc: Residue = [Fe::ONE, Fe::ZERO, Fe::ZERO];
    let mut base: Residue = [Fe::ZERO, Fe::ONE, Fe::ZERO];
    let mut e = f.q();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_residue(f, &modulus, deg, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_residue(f, &modulus, deg, &base, &base);
        }
    }
    acc[1] = f.sub(acc[1], Fe::ONE);
    RootCount::Finite(gcd_degree(f, &modulus[..=deg], &acc[..deg]) as u8)
}

/// Lookup tables of distinct-root counts for every monic quadratic and
/// cubic over a small field. Filled by marking, for every `r` in `F_q`,
/// the polynomials that vanish at `r`.
pub struct RootTable {
    q: usize,
    quadratic: Vec<u8>,
    cubic: Vec<u8>,
}

impl RootTable {
    pub fn bytes_for(q: u64) -> usize {
        let q = q as usize;
        q * q * q + q * q
    }

    pub fn build<F: FieldOps + ?Sized>(f: &F) -> Self {
        let q = f.q() as usize;
        let mut quadratic = vec![0u8; q * q];
        let mut cubic = vec![0u8; q * q * q];
        for r in f.elements() {
            let r2 = f.mul(r, r);
            let r3 = f.mul(r2, r);
            for a in f.elements() {
                let ar = f.mul(a, r);
                // T^2 + aT + b: b = -(r^2 + a r)
                let b = f.neg(f.add(r2, ar));
                quadratic[a.index() * q + b.index()] += 1;
                let ar2 = f.mul(a, r2);
                let base = f.add(r3, ar2);
                for b in f.elements() {
                    let c = f.neg(f.add(base, f.mul(b, r)));
                    cubic[(a.index() * q + b.index()) * q + c.index()] += 1;
                }
            }
        }
        RootTable { q, quadratic, cubic }
    }

    /// Same contract as [`cubic_root_count`].
    #[inline]
    pub fn count<F: FieldOps + ?Sized>(&self, f: &F, c: [Fe; 4]) -> RootCount {
        let [c3, c2, c1, c0] = c;
        if !c3.is_zero() {
            let inv = f.inv(c3).unwrap();
            let a = f.mul(c2, inv).index();
            let b = f.mul(c1, inv).index();
            let d = f.mul(c0, inv).index();
            RootCount::Finite(self.cubic[(a * self.q + b) * self.q + d])
        } else if !c2.is_zero() {
            let inv = f.inv(c2).unwrap();
            let a = f.mul(c1, inv).index();
            let b = f.mul(c0, inv).index();
            RootCount::Finite(self.quadratic[a * self.q + b])
        } else if !c1.is_zero() {
            RootCount::Finite(1)
        } else if !c0.is_zero() {
            RootCount::Finite(0)
        } else {
            RootCount::All
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_roots<F: FieldOps>(f: &F, c: [Fe; 4]) -> RootCount {
        if c.iter().all(|x| x.is_zero()) {
            return RootCount::All;
        }
        let n = f
            .elements()
            .filter(|&t| {
                let v = f.add(f.mul(f.add(f.mul(f.add(f.mul(c[0], t), c[1]), t), c[2]), t), c[3]);
                v.is_zero()
            })
            .count();
        RootCount::Finite(n as u8)
    }

    #[test]
    fn construction_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.params().modulus, vec![0, 1]);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.params().modulus, vec![1, 0, 1]);
        let f243 = make_field(3, 5).unwrap();
        assert_eq!(f243.q(), 243);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(9, 1).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(make_field(3, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
        assert_eq!(make_field(3, 13).unwrap_err(), FieldError::DegreeOutOfRange(13));
        let tight = FieldConfig {
            memory_budget: 1000,
            ..FieldConfig::default()
        };
        assert!(matches!(
            FiniteField::with_config(3, 7, &tight),
            Err(FieldError::MemoryBudget { .. })
        ));
    }

    #[test]
    fn small_examples() {
        let f3 = make_field(3, 1).unwrap();
        let two = f3.reduce_integer(&BigInt::from(2));
        assert_eq!(f3.fe_add(&two, &two).unwrap(), f3.reduce_integer(&BigInt::from(1)));
        assert_eq!(f3.reduce_integer(&BigInt::from(5)), two);
        assert_eq!(f3.reduce_integer(&BigInt::from(-1)), two);
        let f243 = make_field(3, 5).unwrap();
        assert_eq!(f243.reduce_integer(&BigInt::from(3)), f243.zero());

        let f9 = make_field(3, 2).unwrap();
        for g in f9.elements().skip(1) {
            assert_eq!(f9.fe_pow(&f9.wrap(g), 8).unwrap(), f9.one());
        }
    }

    #[test]
    fn inverse_exhaustive_f243() {
        let f = make_field(3, 5).unwrap();
        for x in f.elements().skip(1) {
            let x = f.wrap(x);
            assert_eq!(f.fe_mul(&x, &f.fe_inv(&x).unwrap()).unwrap(), f.one());
        }
        assert_eq!(f.fe_inv(&f.zero()), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(
            f3.fe_add(&f3.one(), &f9.one()),
            Err(FieldError::MixedFields(..))
        ));
    }

    fn axioms_exhaustive<F: FieldOps>(f: &F) {
        let p = f.params().p as u64;
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.pow(f.add(x, y), p), f.add(f.pow(x, p), f.pow(y, p)));
                assert_eq!(f.pow(f.mul(x, y), p), f.mul(f.pow(x, p), f.pow(y, p)));
                for z in f.elements() {
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                }
            }
            assert_eq!(f.add(x, f.neg(x)), Fe::ZERO);
            if !x.is_zero() {
                assert_eq!(f.pow(x, f.q() - 1), Fe::ONE);
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, k) in [(2, 1), (2, 3), (3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4)] {
            axioms_exhaustive(&make_field(p, k).unwrap());
            let poly = FieldConfig {
                force: Some(Representation::PolynomialBasis),
                ..FieldConfig::default()
            };
            axioms_exhaustive(&FiniteField::with_config(p, k, &poly).unwrap());
        }
    }

    #[test]
    fn representations_agree() {
        let zech = make_field(3, 4).unwrap();
        let poly = FiniteField::with_config(
            3,
            4,
            &FieldConfig {
                force: Some(Representation::PolynomialBasis),
                ..FieldConfig::default()
            },
        )
        .unwrap();
        for x in zech.elements() {
            for y in zech.elements() {
                let cx = zech.to_coeffs(x);
                let cy = zech.to_coeffs(y);
                let (px, py) = (poly.from_coeffs(&cx), poly.from_coeffs(&cy));
                assert_eq!(zech.to_coeffs(zech.mul(x, y)), poly.to_coeffs(poly.mul(px, py)));
                assert_eq!(zech.to_coeffs(zech.add(x, y)), poly.to_coeffs(poly.add(px, py)));
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = make_field(3, 3).unwrap();
        let b = make_field(3, 3).unwrap();
        assert_eq!(a.params(), b.params());
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.to_coeffs(a.mul(x, y)), b.to_coeffs(b.mul(x, y)));
            }
        }
    }

    #[test]
    fn cubic_root_examples() {
        let f3 = make_field(3, 1).unwrap();
        let e = |c: i64| f3.wrap(f3.from_i64(c));
        assert_eq!(f3.cubic_root_count(&e(1), &e(0), &e(0), &e(0)).unwrap(), RootCount::Finite(1));
        assert_eq!(f3.cubic_root_count(&e(1), &e(0), &e(-1), &e(0)).unwrap(), RootCount::Finite(3));
        assert_eq!(f3.cubic_root_count(&e(0), &e(0), &e(0), &e(0)).unwrap(), RootCount::All);
        let f9 = make_field(3, 2).unwrap();
        let e9 = |c: i64| f9.wrap(f9.from_i64(c));
        assert_eq!(f9.cubic_root_count(&e9(1), &e9(0), &e9(0), &e9(1)).unwrap(), RootCount::Finite(1));
    }

    #[test]
    fn cubic_roots_match_brute_force_exhaustive() {
        for (p, k) in [(3, 1), (3, 2), (2, 2), (5, 1)] {
            let f = make_field(p, k).unwrap();
            let table = RootTable::build(&f);
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        for lead in [Fe::ONE, Fe::ZERO] {
                            let cs = [lead, a, b, c];
                            let expect = brute_roots(&f, cs);
                            assert_eq!(cubic_root_count(&f, cs), expect);
                            assert_eq!(table.count(&f, cs), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_roots_match_brute_force_random_f243() {
        let f = make_field(3, 5).unwrap();
        let table = RootTable::build(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(243);
        for _ in 0..10_000 {
            let cs = [
                Fe(rng.gen_range(0..243)),
                Fe(rng.gen_range(0..243)),
                Fe(rng.gen_range(0..243)),
                Fe(rng.gen_range(0..243)),
            ];
            let expect = brute_roots(&f, cs);
            assert_eq!(cubic_root_count(&f, cs), expect);
            assert_eq!(table.count(&f, cs), expect);
        }
    }

    #[test]
    fn poly_basis_large_field() {
        let f = make_field(3, 13).unwrap_err();
        assert_eq!(f, FieldError::DegreeOutOfRange(13));
        let big = make_field(3, 13 - 1).unwrap();
        // 3^12 = 531441 <= 2^20 still uses Zech tables
        assert_eq!(big.params().representation, Representation::ZechLog);
        let poly = make_field(7, 8).unwrap();
        assert_eq!(poly.params().representation, Representation::PolynomialBasis);
        let x = poly.from_coeffs(&[1, 2, 3, 4, 5, 6, 0, 1]);
        let y = poly.inv(x).unwrap();
        assert_eq!(poly.mul(x, y), Fe::ONE);
        assert_eq!(poly.pow(x, poly.q() - 1), Fe::ONE);
    }
}
