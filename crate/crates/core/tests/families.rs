mod common;

use std::collections::BTreeMap;

use common::*;
use num_traits::Signed;
use vee_core::catalog::{self, find_subsystems_of_type, CoxeterType, Family, FamilySpec};
use vee_core::linalg::{int, rat, Rational};
use vee_core::{check_vee, find_equivalence, make_family, named_restriction, Configuration, Error};

fn equivalent(a: &Configuration, b: &Configuration) -> bool {
    find_equivalence(a, b).unwrap().is_some_and(|w| w.verify(a, b))
}

fn d3(t: &Rational, s: &Rational) -> Configuration {
    catalog::d3(t, s).unwrap()
}

fn a3(c: [Rational; 4]) -> Configuration {
    catalog::a_family(3, &c).unwrap()
}

fn samples() -> Vec<Rational> {
    vec![int(2), int(3), rat(1, 2), rat(5, 3), rat(-3, 2), int(7)]
}

#[test]
fn diagonal_d3_chain() {
    for t in samples() {
        let one = int(1);
        let inv = one.clone() / &t;
        let base = d3(&t, &t);
        assert!(equivalent(&base, &d3(&inv, &one)), "D3({t},{t}) ~ D3(1/t,1)");
        assert!(equivalent(&base, &d3(&one, &inv)), "D3({t},{t}) ~ D3(1,1/t)");
        let b = catalog::b_gamma_family(3, &int(-1), &[int(1), int(1), int(2) * &t]).unwrap();
        assert!(equivalent(&base, &b), "D3({t},{t}) ~ B3(-1;1,1,2t)");
    }
}

#[test]
fn d3_lines_to_a3() {
    for t in samples() {
        let one = int(1);
        let plus = d3(&t, &(&t + &one));
        assert!(equivalent(&plus, &a3([t.clone(), t.clone(), one.clone(), one.clone()])));
        if t != one {
            let minus = d3(&t, &(&t - &one));
            let c = &t - &one;
            assert!(equivalent(&minus, &a3([c.clone(), c, one.clone(), one.clone()])));
            let flip = d3(&t, &(&one - &t));
            let c = (&one - &t) / &t;
            assert!(equivalent(&flip, &a3([c.clone(), c, one.clone(), one.clone()])));
        }
    }
}

#[test]
fn generic_d3_is_not_a3_or_b3() {
    let lone = d3(&int(2), &int(5));
    for s in samples() {
        let Ok(b) = catalog::b_gamma_family(3, &int(-1), &[int(1), int(1), s.clone()]) else {
            continue;
        };
        assert!(!equivalent(&lone, &b));
        assert!(!equivalent(&lone, &a3([s.clone(), s.clone(), int(1), int(1)])));
    }
}

#[test]
fn ab4_first_limit_is_b3_sqrt2() {
    let limit = catalog::ab4_a1_first_limit().unwrap();
    let b3 = coxeter(CoxeterType::B { t2: int(2) }, 3);
    assert!(equivalent(&limit, &b3));
    // each limit weight is the t² coefficient of the corresponding weight
    let big = int(1_000_000);
    let far = catalog::ab4_a1_first(&big).unwrap();
    let t2 = &big * &big;
    for wc in limit.covectors() {
        let i = far.index_of(wc.direction()).unwrap();
        let ratio = far.weight(i) / &t2;
        let err = (ratio - wc.weight()).abs();
        assert!(err < rat(1, 1_000_000), "{:?}", wc.direction());
    }
    // e1 ± e2 carry weight 2 and vanish after division by t²
    assert_eq!(far.len(), limit.len() + 2);
}

#[test]
fn ab4_second_limit_is_b3_point() {
    let limit = catalog::ab4_a1_second_limit().unwrap();
    let b = catalog::b_gamma_family(3, &int(-1), &[int(1), int(1), int(2)]).unwrap();
    assert!(equivalent(&limit, &b));
    let big = int(1_000_000);
    let far = catalog::ab4_a1_second(&big).unwrap();
    for wc in limit.covectors() {
        let i = far.index_of(wc.direction()).unwrap();
        assert!((far.weight(i) - wc.weight()).abs() < rat(1, 1_000_000));
    }
    assert_eq!(far.len(), limit.len() + 3);
}

#[test]
fn named_b3_chain_member() {
    let params = BTreeMap::from([("s".to_string(), int(4))]);
    let classes = named_restriction("B3(-1;1,1,s)", &params).unwrap();
    assert_eq!(classes.len(), 1);
    assert!(equivalent(&classes[0], &d3(&int(2), &int(2))));
    assert!(matches!(
        named_restriction("B3(-1;1,1,s)", &BTreeMap::new()),
        Err(Error::ParameterDomain(_))
    ));
    assert!(matches!(named_restriction("(E9,A1)", &BTreeMap::new()), Err(Error::UnknownType(_))));
}

#[test]
fn small_named_restrictions() {
    let e6 = named_restriction("(E6,A1^3)", &BTreeMap::new()).unwrap();
    assert!(e6.iter().all(|r| r.dimension() == 3 && check_vee(r).is_vee_system));
    assert!(e6.iter().any(|r| equivalent(r, &catalog::g3(&rat(1, 2)).unwrap())));
    assert!(matches!(
        named_restriction("(D4,A4)", &BTreeMap::new()),
        Err(Error::SubsystemNotFound(_))
    ));
}

#[test]
fn e7_contains_a2_squared() {
    let e7 = coxeter(CoxeterType::E7, 7);
    let found = find_subsystems_of_type(&e7, &"A2^2".parse().unwrap()).unwrap();
    assert!(!found.is_empty());
    assert!(found.iter().any(|f| f.exact));
}

#[test]
fn family_spec_parsing() {
    let spec = FamilySpec::parse("g3", [("t", int(3))]).unwrap();
    assert_eq!(spec.family, Family::G3);
    assert_eq!(make_family(&spec).unwrap().len(), 13);
    let a = FamilySpec::parse("A_n", [("n", int(3)), ("c2", int(2))]).unwrap();
    let c = make_family(&a).unwrap();
    assert_eq!(c.dimension(), 3);
    assert_eq!(c.len(), 6);
    assert!(make_family(&FamilySpec::parse("D3", [("t", int(0)), ("s", int(1))]).unwrap()).is_err());
    assert!(make_family(&FamilySpec::parse("E8", [("n", int(3))]).unwrap()).is_err());
    assert!(make_family(&FamilySpec::parse("A_n", [("n", int(2)), ("c7", int(1))]).unwrap()).is_err());
}
