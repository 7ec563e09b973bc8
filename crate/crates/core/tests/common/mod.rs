#![allow(dead_code)]

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vee_core::catalog::{self, CoxeterType};
use vee_core::linalg::{int, rat, Matrix, Rational, Vector};
use vee_core::transform::SubsystemSpec;
use vee_core::Configuration;

/// A nonzero rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 9`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-9..=9);
        if p != 0 {
            return rat(p, rng.gen_range(1..=9));
        }
    }
}

pub fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// A random invertible integer matrix with entries in `[-3, 3]`.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| int(rng.gen_range(-3..=3)));
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    (0..n).map(|_| int(rng.gen_range(-9..=9))).collect()
}

pub fn nonsingular(c: &Configuration) -> bool {
    !c.canonical_form().determinant().unwrap().is_zero()
}

/// Draws parameters until the constructor succeeds with a nonsingular form.
pub fn draw_nonsingular(
    rng: &mut ChaCha8Rng,
    mut make: impl FnMut(&mut ChaCha8Rng) -> vee_core::Result<Configuration>,
) -> Configuration {
    loop {
        if let Ok(c) = make(rng) {
            if nonsingular(&c) {
                return c;
            }
        }
    }
}

pub fn random_a(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    draw_nonsingular(rng, |r| {
        let c: Vec<Rational> = (0..=n).map(|_| random_rational(r)).collect();
        catalog::a_family(n, &c)
    })
}

pub fn random_b_gamma(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    draw_nonsingular(rng, |r| {
        let gamma = random_rational(r);
        let c: Vec<Rational> = (0..n).map(|_| random_rational(r)).collect();
        catalog::b_gamma_family(n, &gamma, &c)
    })
}

pub fn random_d3(rng: &mut ChaCha8Rng) -> Configuration {
    draw_nonsingular(rng, |r| {
        let t = random_rational(r);
        let s = random_rational(r);
        catalog::d3(&t, &s)
    })
}

pub fn coxeter(ty: CoxeterType, rank: usize) -> Configuration {
    catalog::coxeter_roots(&ty, rank).unwrap()
}

/// Small ∨-systems of dimension at most 3, at most 13 covectors.
pub fn small_catalog(rng: &mut ChaCha8Rng) -> Vec<Configuration> {
    let mut out = vec![
        coxeter(CoxeterType::A, 2),
        coxeter(CoxeterType::B { t2: int(2) }, 2),
        coxeter(CoxeterType::A, 3),
        coxeter(CoxeterType::B { t2: int(1) }, 3),
        coxeter(CoxeterType::B { t2: int(2) }, 3),
        catalog::g3(&int(1)).unwrap(),
        catalog::g3(&rat(3, 4)).unwrap(),
        catalog::g3(&rat(1, 2)).unwrap(),
        catalog::g3(&int(3)).unwrap(),
        catalog::g3(&int(-2)).unwrap(),
        catalog::d3(&int(2), &int(3)).unwrap(),
        catalog::ab4_a1_first(&int(2)).unwrap(),
        catalog::ab4_a1_second(&rat(1, 3)).unwrap(),
    ];
    out.push(random_a(rng, 3));
    out.push(random_b_gamma(rng, 3));
    out.push(random_d3(rng));
    out
}

/// Four-dimensional ∨-systems used as restriction sources.
pub fn rank4_catalog(rng: &mut ChaCha8Rng) -> Vec<Configuration> {
    vec![
        coxeter(CoxeterType::F4, 4),
        coxeter(CoxeterType::D, 4),
        random_a(rng, 4),
        random_b_gamma(rng, 4),
    ]
}

/// Every proper subspace spanned by covectors, once each, as closed subsystems.
pub fn proper_spans(c: &Configuration) -> Vec<SubsystemSpec> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in 1..c.dimension() {
        for idx in (0..c.len()).combinations(k) {
            let spec = SubsystemSpec::new(c, &idx).unwrap();
            if spec.dimension() == k && seen.insert(spec.span.clone()) {
                out.push(spec);
            }
        }
    }
    out
}

/// Rebuilds `c` with the weight of covector `i` replaced.
pub fn with_weight(c: &Configuration, i: usize, w: Rational) -> Configuration {
    let raw = c
        .covectors()
        .iter()
        .enumerate()
        .map(|(k, wc)| (wc.direction().to_vec(), if k == i { w.clone() } else { wc.weight().clone() }));
    Configuration::build(c.dimension(), raw, None)
        .unwrap()
        .with_label(format!("{}~w{i}", c.label()))
}

pub fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}
