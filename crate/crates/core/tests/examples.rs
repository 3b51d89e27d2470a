//! The documented input/output examples of every module, end to end.

use std::sync::Arc;

use bolzano_core::expr::{BinOp, Exponent, Formula};
use bolzano_core::poly::Polynomial;
use bolzano_core::presets;
use bolzano_core::sequence::audit;
use bolzano_core::theorems::{
    between_sets, bc_limit, greatest_boundary, intermediate_value, neighbour_realization, BetweenResult, LessThan,
    MeasurableSequence, PolynomialBelow,
};
use bolzano_core::topology::{pu41, dyadic_unit_interval, unit_interval, Carrier, Piece, PointKind, PointSet1D, Verdict};
use bolzano_core::{
    certify, classify, compare, eq, evaluate_partial, order, parse, Classification, Expression, MeasurableNumber,
    Rational,
};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn num(s: &str) -> MeasurableNumber {
    MeasurableNumber::from_expression(&parse(s).unwrap()).unwrap()
}

const BUDGET: u64 = 1 << 20;

#[test]
fn rational_arithmetic() {
    assert_eq!(&r("1/2") + &r("1/3"), r("5/6"));
    let z = &r("1/2") - &r("1/2");
    assert!(z.is_zero());
    assert_eq!(z.denom().to_string(), "1");
    let p = &r("2/4") * &r("3/6");
    assert_eq!((p.numer().to_string(), p.denom().to_string()), ("1".into(), "4".into()));
    assert_eq!(r("1/3").cmp(&r("2/6")), std::cmp::Ordering::Equal);
    assert!(r("-1/2") < Rational::zero());
    assert!(r("7/5") > r("4/3"));
    assert_eq!(r("7/2").nearest_integer(), 4.into());
    assert_eq!(r("5/2").nearest_integer(), 2.into());
    assert_eq!(r("10/3").nearest_integer(), 3.into());
    assert_eq!(r("-5/4").nearest_integer(), (-1).into());
}

#[test]
fn zero_denominator_is_rejected() {
    assert!("1/0".parse::<Rational>().is_err());
    assert!(Rational::new(1, 0).is_err());
    assert!(Rational::one().checked_div(&Rational::zero()).is_err());
}

#[test]
fn parsing_and_printing() {
    assert_eq!(parse("sum(n, n)").unwrap(), Expression::SeriesInf(Formula::Index));
    let b = parse("sum(n, (-1)^(n+1) / 2^n)").unwrap();
    let Expression::SeriesInf(t) = &b else { panic!("{b:?}") };
    let terms: Vec<_> = (1..=3).map(|n| t.eval(n).unwrap()).collect();
    assert_eq!(terms, vec![r("1/2"), r("-1/4"), r("1/8")]);
    assert_eq!(
        parse("3 + 5/sum(n, 1)").unwrap(),
        Expression::binop(
            BinOp::Add,
            Expression::Literal(r("3")),
            Expression::binop(BinOp::Div, Expression::Literal(r("5")), Expression::SeriesInf(Formula::Const(r("1"))))
        )
    );
    assert_eq!(Expression::SeriesInf(Formula::Const(r("1"))).pretty(), "sum(n, 1)");
    assert_eq!(Expression::Literal(r("-2/3")).pretty(), "-2/3");
    let c = Expression::ProductInf(Formula::Sub(
        Box::new(Formula::Const(r("1"))),
        Box::new(Formula::Div(
            Box::new(Formula::Const(r("1"))),
            Box::new(Formula::Pow(Box::new(Formula::Const(r("2"))), Exponent::Index(0))),
        )),
    ));
    assert_eq!(c.pretty(), "prod(n, 1 - 1/2^n)");
    assert_eq!(parse(&c.pretty()).unwrap(), c);
    assert!(parse("sum(n, ").is_err());
    assert!(parse("sum(k, n)").is_err());
}

#[test]
fn partial_results() {
    let at = |name: &str, n| evaluate_partial(&parse(presets::expression(name).unwrap()).unwrap(), n).unwrap();
    assert_eq!(at("A", 4), r("10"));
    assert_eq!(at("B", 2), r("1/4"));
    assert_eq!(at("C", 3), r("21/64"));
}

#[test]
fn certificates() {
    let a = certify(&parse("sum(n, n)").unwrap());
    assert_eq!(a.certificate.kind(), "DivergesAbove");
    let b = certify(&parse("sum(n, (-1)^(n+1)/2^n)").unwrap());
    assert_eq!(b.certificate.kind(), "CauchyModulus");
    let m = b.certificate.modulus().unwrap();
    for q in [1u64, 2, 3, 8, 1000, 1 << 20] {
        let log = 64 - (q - 1).leading_zeros() as u64;
        assert_eq!(m.at(q), log + 1, "q = {q}");
    }
    let v = certify(&parse("1/sum(n, 1)").unwrap());
    assert_eq!(v.certificate.kind(), "VanishesModulus");
    assert_eq!(v.certificate.modulus().unwrap().at(37), 37);
    for cs in [&a, &b, &v] {
        assert!(audit(cs, &[1, 10, 1000]).is_ok());
    }
}

#[test]
fn measuring_fractions() {
    let b = num("sum(n, (-1)^(n+1)/2^n)");
    let mf = b.measure(3).unwrap();
    assert_eq!(mf.p, 1.into());
    assert_eq!((mf.lower(), mf.upper()), (Rational::zero(), r("2/3")));
    let d = num("3 + 5/sum(n, 1)");
    for q in [1u64, 2, 7, 100, 12345] {
        assert_eq!(d.measure(q).unwrap().p, (3 * q).into());
    }
    assert_eq!(MeasurableNumber::integer(0).measure(7).unwrap().p, 0.into());
}

#[test]
fn classifications() {
    let c = |s: &str| classify(&certify(&parse(s).unwrap()), 10_000);
    assert_eq!(c("sum(n, n)"), Classification::InfinitelyGreatPositive);
    assert_eq!(c("5/sum(n,1)"), Classification::InfinitelySmallPositive);
    assert_eq!(c("prod(n, 1 - 1/2^n)"), Classification::Measurable);
    let cv = num("prod(n, 1 - 1/2^n)");
    assert!(compare(&cv, &MeasurableNumber::rational(r("1/4")), BUDGET).is_greater());
}

#[test]
fn equality_and_order() {
    assert!(eq(&num("1/sum(n,1)"), &num("1/sum(n,3)"), BUDGET).is_equal());
    assert!(eq(&num("3 + 5/sum(n,1)"), &num("3"), BUDGET).is_equal());
    assert!(eq(&num("sum(n, (-1)^(n+1)/2^n)"), &num("1/3"), BUDGET).is_equal());
    let v = order(&num("1/3"), &num("1/2"), BUDGET);
    assert!(v.is_less());
    assert_eq!(v.witness_q(), Some(6));
    assert!(order(&num("sum(n, (-1)^(n+1)/2^n)"), &num("1/2"), BUDGET).is_less());
    let x = num("prod(n, 1 - 1/2^n)");
    let self_cmp = compare(&x, &x, BUDGET);
    assert!(!self_cmp.is_less() && !self_cmp.is_greater());
}

#[test]
fn arithmetic_on_measurables() {
    let b = num("sum(n, (-1)^(n+1)/2^n)");
    assert!(eq(&b.add(&b).unwrap(), &num("2/3"), BUDGET).is_equal());
    let j = num("1/sum(n,1)");
    let prod = j.mul(&num("1/2")).unwrap();
    assert!(eq(&prod, &num("0"), BUDGET).is_equal());
    let c = num("prod(n, 1 - 1/2^n)");
    assert!(eq(&c.add(&num("0")).unwrap(), &c, BUDGET).is_equal());
    // infinitely small times measurable stays infinitely small
    assert!(eq(&j.mul(&c).unwrap(), &num("0"), BUDGET).is_equal());
    assert!(num("1").div(&num("1/sum(n,1)"), BUDGET).is_err());
}

#[test]
fn bc_limits() {
    let geometric = certify(&parse("sum(n, 1/2^n)").unwrap());
    let xs = MeasurableSequence::from_partial_results(&geometric).unwrap();
    assert!(eq(&bc_limit(&xs), &num("1"), BUDGET).is_equal());
    let c = num("7/9");
    assert!(eq(&bc_limit(&MeasurableSequence::constant(c.clone())), &c, BUDGET).is_equal());
    let a = certify(&parse("sum(n, n)").unwrap());
    assert!(MeasurableSequence::from_partial_results(&a).is_err());
}

#[test]
fn greatest_boundaries() {
    let q = 1_000_000;
    let g = Polynomial::from_descending(&[r("1"), r("0"), r("-2")]);
    let run = greatest_boundary(Arc::new(PolynomialBelow::new(g, r("1"), r("2")).unwrap()), q).unwrap();
    let a = run.value.measure(q).unwrap().center();
    let err = (&(&a * &a) - &r("2")).abs();
    assert!(err <= Rational::new(4, q).unwrap(), "{err}");
    assert!((a.to_f64() - 2f64.sqrt()).abs() < 2e-6);

    let below = LessThan::new(num("3/4"), r("0"), r("1")).unwrap();
    let run = greatest_boundary(Arc::new(below), q).unwrap();
    assert!(eq(&run.value, &num("3/4"), BUDGET).is_equal());

    let g = Polynomial::from_descending(&[r("1"), r("0"), r("-4")]);
    let run = greatest_boundary(Arc::new(PolynomialBelow::new(g, r("1"), r("3")).unwrap()), q).unwrap();
    assert!(eq(&run.value, &num("2"), BUDGET).is_equal());
}

#[test]
fn intermediate_values() {
    let q = 1_000_000;
    let zero = Arc::new(Polynomial::new(vec![]));
    let f = Arc::new(Polynomial::parse("x^2 - 2", "x").unwrap());
    let run = intermediate_value(f.clone(), zero.clone(), &r("1"), &r("2"), q).unwrap();
    let x = run.root.measure(q).unwrap().center();
    assert!(f.eval(&x).abs() <= Rational::new(2, q).unwrap());

    let id = Arc::new(Polynomial::parse("x", "x").unwrap());
    let run = intermediate_value(id, zero.clone(), &r("-1"), &r("1"), q).unwrap();
    assert!(eq(&run.root, &num("0"), BUDGET).is_equal());

    let cubic = Arc::new(Polynomial::parse("x^3 - x - 1", "x").unwrap());
    let run = intermediate_value(cubic, zero.clone(), &r("1"), &r("2"), q).unwrap();
    // plain f64 bisection, sixty steps
    let (mut lo, mut hi) = (1f64, 2f64);
    for _ in 0..60 {
        let m = (lo + hi) / 2.0;
        if m * m * m - m - 1.0 < 0.0 {
            lo = m
        } else {
            hi = m
        }
    }
    assert!((run.root.measure(q).unwrap().center().to_f64() - lo).abs() < 2e-6);

    let bad = Arc::new(Polynomial::parse("x^2 + 1", "x").unwrap());
    assert!(intermediate_value(bad, zero, &r("0"), &r("1"), q).is_err());
}

#[test]
fn between_two_quantities() {
    let budget = 1 << 16;
    match between_sets(&presets::pair("bounded").unwrap(), budget).unwrap() {
        BetweenResult::InfinitelyMany { a, a_prime, witnesses } => {
            assert!(witnesses.len() >= 2);
            assert!(!eq(&a, &a_prime, budget).is_equal());
            for h in ["1/2", "1/4"] {
                // any rational strictly inside (0, 1) is a witness too
                assert!(compare(&num("0"), &num(h), budget).is_less());
                assert!(compare(&num(h), &num("1"), budget).is_less());
            }
        }
        other => panic!("{}", other.name()),
    }
    match between_sets(&presets::pair("vanishing").unwrap(), budget).unwrap() {
        BetweenResult::ExactlyOne { a } => assert!(eq(&a, &num("1/3"), budget).is_equal()),
        other => panic!("{}", other.name()),
    }
    match between_sets(&presets::pair("attained").unwrap(), budget).unwrap() {
        BetweenResult::None { extremum, .. } => assert!(eq(&extremum, &num("1/3"), budget).is_equal()),
        other => panic!("{}", other.name()),
    }
    match neighbour_realization(&num("1/3"), false, budget).unwrap() {
        BetweenResult::ExactlyOne { a } => assert!(eq(&a, &num("1/3"), budget).is_equal()),
        other => panic!("{}", other.name()),
    }
    match neighbour_realization(&num("1/3"), true, budget).unwrap() {
        BetweenResult::None { extremum, .. } => assert!(eq(&extremum, &num("1/3"), budget).is_equal()),
        other => panic!("{}", other.name()),
    }
}

#[test]
fn point_sets() {
    let unit = unit_interval();
    assert!(unit.contains(&r("1/2")));
    assert!(!dyadic_unit_interval().contains(&r("1/3")));
    let holes = pu41(r("0"), r("1"), true);
    assert!(!holes.contains(&r("3/4")));

    assert!(unit.has_neighbour_at(&r("0"), &r("1/2")).unwrap());
    assert!(!dyadic_unit_interval().has_neighbour_at(&r("1/2"), &r("1/3")).unwrap());
    let with_end = pu41(r("0"), r("1"), true);
    for n in 1..=10 {
        let h = Rational::new(1, 1u64 << n).unwrap();
        assert!(!with_end.has_neighbour_at(&r("1"), &h).unwrap(), "n = {n}");
    }

    assert_eq!(unit.classify_point(&r("1/2")).unwrap(), PointKind::Interior);
    assert_eq!(unit.classify_point(&r("0")).unwrap(), PointKind::Boundary);
    let with_two = PointSet1D::new(vec![Piece::closed(r("0"), r("1"), Carrier::Continuum)], vec![r("2")], vec![]).unwrap();
    assert_eq!(with_two.classify_point(&r("2")).unwrap(), PointKind::Isolated);

    assert_eq!(pu41(r("0"), r("1"), false).bolzano_complete(), Verdict::Complete);
    match with_end.bolzano_complete() {
        Verdict::FailsAt { point, samples, .. } => {
            assert_eq!(point, r("1"));
            let expected: Vec<_> = (1..=10).map(|n| Rational::new(1, 1u64 << n).unwrap()).collect();
            assert_eq!(&samples[..10], &expected[..]);
        }
        v => panic!("{}", v.name()),
    }
    match dyadic_unit_interval().bolzano_complete() {
        Verdict::FailsAt { point, samples, .. } => {
            assert_eq!(point, r("0"));
            assert!(samples.len() >= 3);
            assert_eq!(&samples[..3], &[r("1/3"), r("1/5"), r("1/7")]);
        }
        v => panic!("{}", v.name()),
    }
    assert_eq!(unit.bolzano_complete(), Verdict::Complete);
}
