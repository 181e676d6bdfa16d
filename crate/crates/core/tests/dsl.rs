use kappa_calculus::chi::genus_chi;
use kappa_calculus::dsl::{corolla_json, corolla_latex, corolla_text, parse, parse_vector, to_dsl, ChiMode};
use kappa_calculus::graph::{Flavor, LegName};
use kappa_calculus::rewrite::reduce;
use kappa_calculus::{corolla_basis, Error};

const THETA: &str = "lam(1,5) lam(2,6) lam(3,4) (kbar(1,2,3) * kbar(4,5,6))";

#[test]
fn theta_expression_reduces() {
    let v = parse_vector(THETA, 1, Flavor::Closed).unwrap();
    let r = reduce(&v);
    assert_eq!(corolla_text(&r, &ChiMode::Symbolic).unwrap(), "-(x-3)/x * kappa_{e^2}");
    assert_eq!(corolla_latex(&r, &ChiMode::Symbolic).unwrap(), "-\\frac{\\chi-3}{\\chi}\\,\\kappa_{e^2}");
    let g2 = ChiMode::Value(genus_chi(1, 2).unwrap());
    assert_eq!(corolla_text(&r, &g2).unwrap(), "-5/2 * kappa_{e^2}");
    let j = corolla_json(&r, &ChiMode::Symbolic).unwrap();
    assert_eq!(j["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn labels_and_vanishing() {
    let v = parse_vector("kbar(;e^2)", 1, Flavor::Closed).unwrap();
    assert_eq!(reduce(&v).terms.len(), 1);
    let w = parse_vector("kbar(1; e)", 1, Flavor::Closed).unwrap();
    assert!(reduce(&w).is_zero());
    let s = parse_vector("x^2 - 7*x + 12", 1, Flavor::Closed).unwrap();
    assert_eq!(corolla_text(&reduce(&s), &ChiMode::Symbolic).unwrap(), "x^2-7*x+12");
}

#[test]
fn parse_errors_carry_positions() {
    match parse("k(1,2", 1) {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
        other => panic!("{other:?}"),
    }
    match parse("kbar(;p1)", 1) {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("k(1) $", 1), Err(Error::Parse { pos: 5, .. })));
    assert!(parse("kbar(;p1^2*e)", 3).is_ok());
}

#[test]
fn flavor_of_generator_is_checked() {
    assert!(matches!(parse_vector("k(1,2,3)", 1, Flavor::Closed), Err(Error::FlavorMismatch(_))));
    assert!(matches!(parse_vector("kbar(1,2,3)", 1, Flavor::Disc), Err(Error::FlavorMismatch(_))));
    assert!(matches!(parse_vector("k(1,2) * k(2,3)", 1, Flavor::Disc), Err(Error::LegMismatch(_))));
    assert!(parse_vector("k(1,2) + k(3,4)", 1, Flavor::Disc).is_err());
}

#[test]
fn printed_basis_round_trips() {
    for (flavor, n) in [(Flavor::Closed, 1), (Flavor::Closed, 2), (Flavor::Disc, 1), (Flavor::Theta, 3)] {
        let legs: Vec<LegName> = (1..=3).map(LegName::Num).collect();
        for d in 0..=3 {
            for p in corolla_basis(&legs, flavor, n, d) {
                let mut single = kappa_calculus::CorollaVector::zero(n, flavor, legs.clone());
                single.add(p.clone(), &kappa_calculus::ChiScalar::from_int(-3));
                let text = to_dsl(&single).unwrap();
                let back = reduce(&parse_vector(&text, n, flavor).unwrap());
                assert_eq!(back, single, "{text}");
            }
        }
    }
}
