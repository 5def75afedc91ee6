use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use threefold::factor::{factor_int_poly, irreducible_by_degrees};
use threefold::intpoly::IntPoly;
use threefold::simplicity::{euler_phi, hz_extension_set};
use threefold::weil::{
    extend_weil, extend_weil_resultant, poly_from_power_sums, power_sums_of, verify_weil_bounds, weil_from_power_sums,
    WeilData, WeilViolation,
};

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn paper_q1() -> WeilData {
    WeilData::new(3, p(&[243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1])).unwrap()
}

/// `prod (T^2 - b_i T + q)` with `|b_i| <= 2 sqrt q`: a genuine Weil polynomial.
fn from_traces(q: i64, traces: &[i64]) -> WeilData {
    let poly = traces.iter().fold(IntPoly::one(), |acc, &b| &acc * &p(&[q, -b, 1]));
    WeilData::new(q, poly).unwrap()
}

fn isqrt(n: i64) -> i64 {
    (0..).take_while(|x| x * x <= n).last().unwrap()
}

proptest! {
    #[test]
    fn newton_round_trip(coeffs in prop::collection::vec(-50i64..50, 1..=10)) {
        let mut c = coeffs.clone();
        c.push(1);
        let f = p(&c);
        let n = f.degree().unwrap();
        let s = power_sums_of(&f, n);
        prop_assert_eq!(poly_from_power_sums(&s).unwrap(), f);
    }

    #[test]
    fn genuine_weil_polynomials_pass(q in 2i64..30, seeds in prop::collection::vec(0u32..1000, 1..=5)) {
        let bound = isqrt(4 * q);
        let traces: Vec<i64> = seeds.iter().map(|s| (*s as i64 % (2 * bound + 1)) - bound).collect();
        let w = from_traces(q, &traces);
        prop_assert!(verify_weil_bounds(&w).holds);
        // reconstruction from the first g power sums is the identity
        let s = power_sums_of(&w.poly, w.g);
        prop_assert_eq!(weil_from_power_sums(&w.q, &s).unwrap(), w.clone());
        for r in 2..=3 {
            prop_assert_eq!(extend_weil(&w, r), extend_weil_resultant(&w, r));
            prop_assert!(verify_weil_bounds(&extend_weil(&w, r)).holds);
        }
    }
}

#[test]
fn extension_is_multiplicative_and_matches_resultants() {
    let q1 = paper_q1();
    for a in 1..=4 {
        for b in 1..=4 {
            assert_eq!(extend_weil(&extend_weil(&q1, a), b), extend_weil(&q1, a * b));
        }
    }
    let ss = WeilData::new(2, p(&[2, 0, 1]).pow(5)).unwrap();
    let klein = WeilData::new(3, p(&[243, 0, 0, 0, 0, 31, 0, 0, 0, 0, 1])).unwrap();
    for w in [q1, ss, klein] {
        for r in [2, 3, 4, 5, 6] {
            assert_eq!(extend_weil(&w, r), extend_weil_resultant(&w, r));
        }
    }
}

#[test]
fn constructed_violators_are_rejected() {
    let t2_3 = p(&[3, 0, 1]);
    let violators = [
        // root 1 and root 3 off the circle |w| = sqrt 3
        (&(&p(&[-1, 1]) * &p(&[-3, 1])) * &t2_3.pow(4), "trace-out-of-range"),
        // coefficient symmetry broken
        (&p(&[4, 0, 1]) * &t2_3.pow(4), "asymmetric"),
        // h = s^2 - 13 has real roots beyond 2 sqrt 3
        (p(&[9, 0, -7, 0, 1]), "trace-out-of-range"),
        // h = s^2 + 1 has no real roots
        (&p(&[9, 0, 7, 0, 1]) * &t2_3.pow(3), "non-real"),
        // trace 4 > 2 sqrt 3
        (&p(&[3, -4, 1]) * &t2_3.pow(4), "trace-out-of-range"),
    ];
    for (poly, kind) in violators {
        let w = WeilData::new(3, poly.clone()).unwrap();
        let v = verify_weil_bounds(&w);
        assert!(!v.holds, "{poly} accepted");
        let got = match v.violation.unwrap() {
            WeilViolation::Asymmetric { .. } => "asymmetric",
            WeilViolation::NonRealTraces { .. } => "non-real",
            WeilViolation::TraceOutOfRange { .. } => "trace-out-of-range",
        };
        assert_eq!(got, kind, "{poly}");
    }
    let v = verify_weil_bounds(&WeilData::new(3, &(&p(&[-1, 1]) * &p(&[-3, 1])) * &t2_3.pow(4)).unwrap());
    assert_eq!(v.off_circle_integer_roots, vec![BigInt::from(1), BigInt::from(3)]);
}

fn random_irreducible<R: Rng>(rng: &mut R) -> IntPoly {
    loop {
        let deg = rng.gen_range(1..=5);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-9..=9)).collect();
        c.push(rng.gen_range(1..=3));
        let f = p(&c);
        if f.content() != BigInt::from(1) {
            continue;
        }
        let fact = factor_int_poly(&f);
        if fact.is_irreducible() {
            return fact.factors[0].0.clone();
        }
    }
}

#[test]
fn factorization_of_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let mut parts: Vec<IntPoly> = (0..k).map(|_| random_irreducible(&mut rng)).collect();
        let f = parts.iter().fold(IntPoly::one(), |acc, g| &acc * g);
        let fact = factor_int_poly(&f);
        assert_eq!(fact.expand(), f);
        let mut got: Vec<IntPoly> = fact
            .factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat(g.clone()).take(*m as usize))
            .collect();
        let key = |g: &IntPoly| (g.degree(), g.coeffs().to_vec());
        got.sort_by_key(key);
        parts.sort_by_key(key);
        assert_eq!(got, parts, "{f}");
    }
}

#[test]
fn irreducible_factors_have_consistent_modular_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let g = random_irreducible(&mut rng);
        // an irreducible factor is never certified reducible by degree data
        assert_ne!(irreducible_by_degrees(&g, 3), Some(false));
    }
    // and the test has teeth on reducible inputs
    assert_eq!(irreducible_by_degrees(&p(&[-2, 0, 0, 1]), 3), Some(true));
    assert_eq!(irreducible_by_degrees(&(&p(&[1, 1]) * &p(&[1, 0, 1])), 20), None);
}

#[test]
fn extension_set_matches_brute_force() {
    for g in 1..=10usize {
        let brute: Vec<u32> = (2..=2000u64).filter(|&r| (2 * g as u64) % euler_phi(r) == 0).map(|r| r as u32).collect();
        assert_eq!(hz_extension_set(g), brute, "g = {g}");
    }
}
