//! Refuting that a principally polarized abelian variety is a Jacobian.
//!
//! If `A` were `J(C)` (or a quadratic twist of one) then the curve `C` would
//! have `N_r = q^r + 1 - s_r` points over `F_{q^r}`, where `s_r` are the power
//! sums of the Frobenius roots. Those hypothetical counts must look like the
//! counts of a real curve; when they do not, no such curve exists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::simplicity::{check_absolutely_simple, SimplicityReport};
use crate::weil::{power_sums, WeilData};

pub const DEFAULT_R_MAX: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCountProfile {
    #[serde(with = "crate::json::big")]
    pub q: BigInt,
    pub genus: usize,
    /// `N_1..N_R`.
    #[serde(with = "crate::json::big_vec")]
    pub counts: Vec<BigInt>,
    /// Closed points of degree `r`: `(1/r) sum_{d|r} mu(r/d) N_d`.
    #[serde(with = "crate::json::rational_vec")]
    pub place_counts: Vec<BigRational>,
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            out = -out;
        }
        d += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

impl CurveCountProfile {
    pub fn new(q: BigInt, genus: usize, counts: Vec<BigInt>) -> Self {
        let place_counts = (1..=counts.len())
            .map(|r| {
                let sum: BigInt = (1..=r)
                    .filter(|d| r % d == 0)
                    .map(|d| BigInt::from(mobius((r / d) as u64)) * &counts[d - 1])
                    .sum();
                BigRational::new(sum, BigInt::from(r))
            })
            .collect();
        CurveCountProfile {
            q,
            genus,
            counts,
            place_counts,
        }
    }
}

/// `N_r = q^r + 1 - s_r` for `r = 1..r_max`.
pub fn hypothetical_curve_counts(w: &WeilData, r_max: usize) -> CurveCountProfile {
    let s = power_sums(w, r_max);
    let counts = s
        .iter()
        .enumerate()
        .map(|(i, sr)| num_traits::pow(w.q.clone(), i + 1) + 1 - sr)
        .collect();
    CurveCountProfile::new(w.q.clone(), w.g, counts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "kebab-case")]
pub enum CountViolation {
    /// `N_r < 0`.
    NegativeCount {
        r: usize,
        #[serde(with = "crate::json::big")]
        n: BigInt,
    },
    /// `N_d > N_r` although `d | r`.
    NotMonotone {
        d: usize,
        r: usize,
        #[serde(with = "crate::json::big")]
        n_d: BigInt,
        #[serde(with = "crate::json::big")]
        n_r: BigInt,
    },
    /// Fewer than zero (or a fractional number of) closed points of degree `r`.
    InvalidPlaceCount {
        r: usize,
        #[serde(with = "crate::json::rational")]
        places: BigRational,
    },
    /// `(N_r - q^r - 1)^2 > 4 g^2 q^r`.
    WeilInterval {
        r: usize,
        #[serde(with = "crate::json::big")]
        n: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plausibility {
    pub pass: bool,
    pub failure: Option<CountViolation>,
}

/// Checks the counts degree by degree; at each `r` the constraints are
/// tried in the order sign, monotonicity, place counts, Weil interval.
pub fn plausibility_check(prof: &CurveCountProfile) -> Plausibility {
    let q = &prof.q;
    let g = BigInt::from(prof.genus);
    for (i, n) in prof.counts.iter().enumerate() {
        let r = i + 1;
        let fail = |v| Plausibility {
            pass: false,
            failure: Some(v),
        };
        if n.is_negative() {
            return fail(CountViolation::NegativeCount { r, n: n.clone() });
        }
        if let Some(d) = (1..r).find(|&d| r % d == 0 && &prof.counts[d - 1] > n) {
            return fail(CountViolation::NotMonotone {
                d,
                r,
                n_d: prof.counts[d - 1].clone(),
                n_r: n.clone(),
            });
        }
        let a = &prof.place_counts[i];
        if a.is_negative() || !a.is_integer() {
            return fail(CountViolation::InvalidPlaceCount { r, places: a.clone() });
        }
        let qr = num_traits::pow(q.clone(), r);
        let dev = n - &qr - 1;
        if &dev * &dev > BigInt::from(4) * &g * &g * &qr {
            return fail(CountViolation::WeilInterval { r, n: n.clone() });
        }
    }
    Plausibility {
        pass: true,
        failure: None,
    }
}

/// `Q(-T)`: Frobenius roots negated.
pub fn quadratic_twist(w: &WeilData) -> WeilData {
    WeilData::new(w.q.clone(), w.poly.negate_variable()).expect("even degree is preserved")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// No curve over any finite extension of `F_q` has Jacobian isomorphic to `A`.
    NotIsomorphicOverAnyFiniteExtension,
    /// No Jacobian of a curve over `F_q` or `F_{q^2}` is isogenous to `A`.
    NotIsogenousOverListedFields,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseWitness {
    /// Hypothetical curve counts `N_1..N_R`.
    #[serde(with = "crate::json::big_vec")]
    pub counts: Vec<BigInt>,
    pub violation: CountViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonJacobianCertificate {
    #[serde(with = "crate::json::big")]
    pub q: BigInt,
    #[serde(with = "crate::json::big_vec")]
    pub weil_poly: Vec<BigInt>,
    pub simplicity: SimplicityReport,
    pub case_a: CaseWitness,
    pub case_b: CaseWitness,
    pub scope: Vec<Scope>,
    pub checked_fields: Vec<String>,
    /// Filled in by callers that compare against reference values.
    pub paper_consistent: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    NotProvenAbsolutelySimple,
    CurveCountsPlausible,
    TwistCountsPlausible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconclusive {
    pub reason: InconclusiveReason,
    pub simplicity: SimplicityReport,
    pub case_a: Option<Plausibility>,
    pub case_b: Option<Plausibility>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Certification {
    Certificate(NonJacobianCertificate),
    Inconclusive(Inconclusive),
}

impl Certification {
    pub fn certificate(&self) -> Option<&NonJacobianCertificate> {
        match self {
            Certification::Certificate(c) => Some(c),
            Certification::Inconclusive(_) => None,
        }
    }
}

fn field_name(q: &BigInt, r: u32) -> String {
    if r == 1 {
        format!("F_{q}")
    } else {
        format!("F_{}", num_traits::pow(q.clone(), r as usize))
    }
}

pub fn certify_not_jacobian(w: &WeilData) -> Certification {
    certify_not_jacobian_with(w, DEFAULT_R_MAX)
}

/// Emits a certificate only when `A` is proven absolutely simple and the
/// hypothetical counts of both a curve and its twist are impossible.
pub fn certify_not_jacobian_with(w: &WeilData, r_max: usize) -> Certification {
    let simplicity = check_absolutely_simple(w);
    if !simplicity.is_absolutely_simple() {
        return Certification::Inconclusive(Inconclusive {
            reason: InconclusiveReason::NotProvenAbsolutelySimple,
            simplicity,
            case_a: None,
            case_b: None,
        });
    }
    let prof_a = hypothetical_curve_counts(w, r_max);
    let prof_b = hypothetical_curve_counts(&quadratic_twist(w), r_max);
    let (pa, pb) = (plausibility_check(&prof_a), plausibility_check(&prof_b));
    let reason = match (&pa.failure, &pb.failure) {
        (Some(va), Some(vb)) => {
            return Certification::Certificate(NonJacobianCertificate {
                q: w.q.clone(),
                weil_poly: w.poly.coeffs().to_vec(),
                simplicity,
                case_a: CaseWitness {
                    counts: prof_a.counts,
                    violation: va.clone(),
                },
                case_b: CaseWitness {
                    counts: prof_b.counts,
                    violation: vb.clone(),
                },
                scope: vec![Scope::NotIsomorphicOverAnyFiniteExtension, Scope::NotIsogenousOverListedFields],
                checked_fields: vec![field_name(&w.q, 1), field_name(&w.q, 2)],
                paper_consistent: None,
            })
        }
        (None, _) => InconclusiveReason::CurveCountsPlausible,
        (_, None) => InconclusiveReason::TwistCountsPlausible,
    };
    Certification::Inconclusive(Inconclusive {
        reason,
        simplicity,
        case_a: Some(pa),
        case_b: Some(pb),
    })
}
