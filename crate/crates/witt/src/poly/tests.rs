use num_bigint::BigUint;
use proptest::prelude::*;

use super::parse::parse_poly;
use super::*;
use crate::fq::FqField;
use crate::gr::GaloisRing;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn fq(p: u64, d: usize) -> FqField {
    FqField::new(big(p), d).unwrap()
}

fn gr(p: u64, d: usize, n: u32) -> GaloisRing {
    GaloisRing::new(fq(p, d), n).unwrap()
}

#[test]
fn pow_basics() {
    let k = fq(2, 1);
    let x = Poly::variable(k.clone(), 1, 0);
    let xp1 = x.add(&Poly::one(k.clone(), 1));
    assert_eq!(xp1.pow(0), Poly::one(k.clone(), 1));
    assert!(xp1.mul(&Poly::zero(k.clone(), 1)).is_zero());
    // Freshman's dream in characteristic 2: (X+1)^2 = X^2 + 1.
    let sq = xp1.pow(2);
    let expected = parse_poly("X1^2 + 1", k.clone(), 1).unwrap();
    assert_eq!(sq, expected);
    assert_eq!(xp1.frobenius(1), expected);
    assert_eq!(xp1.frobenius(0), xp1);
}

#[test]
fn inv_frobenius_examples() {
    let k = fq(2, 1);
    let p = parse_poly("X1^2 + 1", k.clone(), 1).unwrap();
    let q = p.inv_frobenius(1).unwrap();
    assert_eq!(q, parse_poly("X1 + 1", k.clone(), 1).unwrap());
    assert_eq!(p.inv_frobenius(0).unwrap(), p);
    let odd = parse_poly("X1^3", k.clone(), 1).unwrap();
    assert!(matches!(
        odd.inv_frobenius(1),
        Err(crate::error::Error::NotAPthPower { .. })
    ));
}

#[test]
fn lift_project_examples() {
    let r = gr(2, 1, 2);
    let k = r.residue_field().clone();
    // Over GR(4,1): 2X + 3 projects to the constant 1.
    let p = parse_poly("2*X1 + 3", r.clone(), 1).unwrap();
    assert_eq!(
        project_poly(&p),
        parse_poly("1", k.clone(), 1).unwrap()
    );
    let f = parse_poly("X1^3 + X1 + 1", k.clone(), 1).unwrap();
    assert_eq!(project_poly(&lift_poly(&f, &r)), f);
    assert!(lift_poly(&Poly::zero(k, 1), &r).is_zero());
}

#[test]
fn evaluate_examples() {
    let k = fq(2, 1);
    // P = X_1 (projection).
    let proj = Poly::variable(k.clone(), 2, 0);
    let g = parse_poly("X1^2 + X1", k.clone(), 1).unwrap();
    let h = parse_poly("X1 + 1", k.clone(), 1).unwrap();
    assert_eq!(proj.evaluate(&[g.clone(), h.clone()]).unwrap(), g);
    // Constant stays constant.
    let c = Poly::one(k.clone(), 2);
    assert_eq!(c.evaluate(&[g.clone(), h.clone()]).unwrap(), Poly::one(k.clone(), 1));
    // P = X_1 * X_2 at (X, X+1) over F_2 gives X^2 + X.
    let prod = proj.mul(&Poly::variable(k.clone(), 2, 1));
    let x = Poly::variable(k.clone(), 1, 0);
    assert_eq!(
        prod.evaluate(&[x.clone(), h]).unwrap(),
        parse_poly("X1^2 + X1", k.clone(), 1).unwrap()
    );
    assert!(matches!(
        prod.evaluate(&[x]),
        Err(crate::error::Error::ArityMismatch { .. })
    ));
}

#[test]
fn valuation_examples() {
    // Cap n-1 with n=3: the all-zero monomial hits the cap.
    assert_eq!(monomial_p_valuation(&[0, 0], &big(2), 2), 2);
    assert_eq!(monomial_p_valuation(&[4, 2], &big(2), 2), 1);
    assert_eq!(monomial_p_valuation(&[9], &big(3), 3), 2);
    assert_eq!(monomial_p_valuation(&[], &big(5), 1), 1);
}

#[test]
fn print_parse_canonical() {
    let k = fq(3, 2);
    let src = "2*t*X1^2*X2 + X2^3 + t^1 + 2";
    let p = parse_poly(src, k.clone(), 2).unwrap();
    let printed = p.to_string();
    let back = parse_poly(&printed, k.clone(), 2).unwrap();
    assert_eq!(p, back);
    // Graded-lex descending, canonical coefficients.
    assert_eq!(printed, "2*t*X1^2*X2 + X2^3 + t + 2");
}

#[test]
fn parse_errors_have_positions() {
    let k = fq(2, 1);
    match parse_poly("X1 + %", k.clone(), 1) {
        Err(crate::error::Error::Parse { line, column, .. }) => {
            assert_eq!(line, 1);
            assert_eq!(column, 6);
        }
        other => panic!("expected parse error, got {:?}", other),
    }
    assert!(parse_poly("X9 + 1", k.clone(), 1).is_err());
    assert!(parse_poly("", k.clone(), 1).is_err());
    assert!(parse_poly("2^3", k, 1).is_err());
}

#[test]
fn dense_and_sparse_kernel_agree_with_generic() {
    // Deterministic cross-check at a size where the dense path triggers.
    let r = gr(3, 2, 2);
    let a = parse_poly("2*t*X1^3 + 7*X1*X2 + t + 5", r.clone(), 2).unwrap();
    let b = parse_poly("X1^2*X2^4 + 8*t*X2 + 3", r.clone(), 2).unwrap();
    let fast = a.mul(&b);
    let slow = a.mul_generic(&b);
    assert_eq!(fast, slow);
}

fn arb_poly(p: u64, d: usize, nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly<FqField>> {
    let field = fq(p, d);
    let term = (
        proptest::collection::vec(0..=max_deg, nvars),
        proptest::collection::vec(0u64..p, d),
    );
    proptest::collection::vec(term, 0..8).prop_map(move |terms| {
        Poly::from_terms(
            field.clone(),
            nvars,
            terms.into_iter().map(|(exps, digits)| {
                let coeffs: Vec<BigUint> = digits.into_iter().map(BigUint::from).collect();
                (exps, field.from_coeffs(&coeffs))
            }),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frobenius_is_ring_homomorphism(
        a in arb_poly(3, 2, 2, 4),
        b in arb_poly(3, 2, 2, 4),
    ) {
        prop_assert_eq!(a.add(&b).frobenius(1), a.frobenius(1).add(&b.frobenius(1)));
        prop_assert_eq!(a.mul(&b).frobenius(1), a.frobenius(1).mul(&b.frobenius(1)));
    }

    #[test]
    fn pow_p_equals_frobenius(a in arb_poly(3, 1, 2, 4)) {
        prop_assert_eq!(a.pow(3), a.frobenius(1));
        prop_assert_eq!(a.pow_char(9), a.pow(9));
    }

    #[test]
    fn frobenius_termwise_matches_binary_pow(
        a in arb_poly(2, 2, 1, 4),
        r in 0u32..3,
    ) {
        let e = 2u64.pow(r);
        prop_assert_eq!(a.frobenius(r), a.pow(e));
        prop_assert_eq!(a.frobenius(r).inv_frobenius(r).unwrap(), a);
    }

    #[test]
    fn sparse_invariant_and_additive_inverse(a in arb_poly(5, 1, 2, 5)) {
        for (_, c) in a.terms() {
            prop_assert!(!CoeffRing::is_zero(a.ring(), c));
        }
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn kernel_matches_generic_mul(
        a in arb_poly(5, 2, 2, 6),
        b in arb_poly(5, 2, 2, 6),
    ) {
        prop_assert_eq!(a.mul(&b), a.mul_generic(&b));
    }

    #[test]
    fn roundtrip_text(a in arb_poly(3, 2, 3, 5)) {
        let s = a.to_string();
        let back = parse_poly(&s, a.ring().clone(), 3).unwrap();
        prop_assert_eq!(a, back);
    }
}
