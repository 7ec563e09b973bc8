//! Generalized WDVV identities for the logarithmic prepotential
//! `F = Σ m·a(x)² log a(x)²`, checked exactly at rational sample points.
//!
//! Third derivatives: `F_ijk = Σ 4·m·a_i a_j a_k / a(x)`. Contracting with `x`
//! gives `Σ_k F_ijk x^k = 4·G_ij`, so `η = x/4` turns the WDVV system into
//! `F_i G⁻¹ F_j = F_j G⁻¹ F_i` with the constant metric `G`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{in_row_space, Configuration, DualFrame};
use crate::error::{Error, Result};
use crate::linalg::{dot, int, is_zero_vector, Matrix, Rational, Vector};

/// A point off every hyperplane `a(x) = 0` of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    coords: Vector,
}

impl SamplePoint {
    pub fn new(c: &Configuration, coords: Vector) -> Result<Self> {
        check_off_hyperplanes(c, &coords)?;
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

const SAMPLE_RANGE: i64 = 9;

/// `count` reproducible sample points with integer coordinates in `[-9, 9]`,
/// redrawn while they hit a hyperplane. Configurations with many hyperplanes
/// can make the box too crowded; after every 10 000 rejected draws the box
/// doubles.
pub fn sample_points(c: &Configuration, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = SAMPLE_RANGE;
    let mut rejected = 0u32;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coords: Vector = (0..c.dimension()).map(|_| int(rng.gen_range(-range..=range))).collect();
        match SamplePoint::new(c, coords) {
            Ok(p) => out.push(p),
            Err(_) => {
                rejected += 1;
                if rejected % 10_000 == 0 {
                    range *= 2;
                }
            }
        }
    }
    out
}

fn check_off_hyperplanes(c: &Configuration, x: &[Rational]) -> Result<()> {
    if x.len() != c.dimension() {
        return Err(Error::DimensionMismatch {
            expected: c.dimension(),
            found: x.len(),
        });
    }
    for i in 0..c.len() {
        if dot(c.direction(i), x).is_zero() {
            return Err(Error::OnHyperplane(i));
        }
    }
    Ok(())
}

fn check_len(c: &Configuration, v: &[Rational]) -> Result<()> {
    if v.len() != c.dimension() {
        return Err(Error::DimensionMismatch {
            expected: c.dimension(),
            found: v.len(),
        });
    }
    Ok(())
}

/// `(F_axis)_{jk} = Σ 4·m·a_axis a_j a_k / a(x)`.
pub fn third_derivative_matrix(c: &Configuration, axis: usize, x: &[Rational]) -> Result<Matrix> {
    check_off_hyperplanes(c, x)?;
    if axis >= c.dimension() {
        return Err(Error::IndexOutOfRange {
            index: axis,
            len: c.dimension(),
        });
    }
    Ok(third_derivatives(c, x).swap_remove(axis))
}

/// All `F_i` at `x`; the caller guarantees `x` is off the hyperplanes.
fn third_derivatives(c: &Configuration, x: &[Rational]) -> Vec<Matrix> {
    let n = c.dimension();
    let mut out = vec![Matrix::zeros(n, n); n];
    for wc in c.covectors() {
        let a = wc.direction();
        let f = wc.weight() * int(4) / dot(a, x);
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                out[i].add_outer(&(&f * ai), a, a);
            }
        }
    }
    out
}

/// `Σ_k (F_i)_{jk} x^k` as a matrix in `(i, j)`.
pub fn euler_contraction(c: &Configuration, x: &[Rational]) -> Result<Matrix> {
    check_off_hyperplanes(c, x)?;
    let fs = third_derivatives(c, x);
    let n = c.dimension();
    Ok(Matrix::from_fn(n, n, |i, j| dot(fs[i].row(j), x)))
}

/// `F_i G⁻¹ F_j = F_j G⁻¹ F_i` for every pair of axes at every point.
pub fn check_wdvv(c: &Configuration, points: &[SamplePoint]) -> Result<bool> {
    let ginv = c.canonical_form().invert().map_err(|_| Error::DegenerateForm)?;
    for p in points {
        check_off_hyperplanes(c, p.coords())?;
        let fs = third_derivatives(c, p.coords());
        let left: Vec<Matrix> = fs.iter().map(|f| f * &ginv).collect();
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                if &left[i] * &fs[j] != &left[j] * &fs[i] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn product_with(
    c: &Configuration,
    frame: &DualFrame,
    terms: impl Iterator<Item = usize>,
    x: &[Rational],
    u: &[Rational],
    v: &[Rational],
) -> Vector {
    let mut out = vec![Rational::zero(); c.dimension()];
    for i in terms {
        let a = c.direction(i);
        let num = dot(a, u) * dot(a, v);
        if num.is_zero() {
            continue;
        }
        let f = c.weight(i) * num / dot(a, x);
        for (o, d) in out.iter_mut().zip(&frame.duals[i]) {
            *o += &f * d;
        }
    }
    out
}

/// `u ∗ v = Σ m·a(u)a(v)/a(x) · G⁻¹a`.
pub fn frobenius_product(c: &Configuration, x: &[Rational], u: &[Rational], v: &[Rational]) -> Result<Vector> {
    let frame = c.dual_frame()?;
    frobenius_product_with(c, &frame, x, u, v)
}

pub fn frobenius_product_with(
    c: &Configuration,
    frame: &DualFrame,
    x: &[Rational],
    u: &[Rational],
    v: &[Rational],
) -> Result<Vector> {
    check_off_hyperplanes(c, x)?;
    check_len(c, u)?;
    check_len(c, v)?;
    Ok(product_with(c, frame, 0..c.len(), x, u, v))
}

/// Limit of `u ∗ v` at a point of `W_B = ∩_{β∈B} ker β`: the sum over the
/// covectors outside the closure of `B`. Returns whether the result is tangent
/// to `W_B`.
pub fn check_tangency_limit(
    c: &Configuration,
    b_indices: &[usize],
    x: &[Rational],
    u: &[Rational],
    v: &[Rational],
) -> Result<bool> {
    Ok(tangency_limit_product(c, b_indices, x, u, v)?.1)
}

/// The limit product together with its tangency verdict.
pub fn tangency_limit_product(
    c: &Configuration,
    b_indices: &[usize],
    x: &[Rational],
    u: &[Rational],
    v: &[Rational],
) -> Result<(Vector, bool)> {
    let frame = c.dual_frame()?;
    for w in [x, u, v] {
        check_len(c, w)?;
    }
    let (basis, closure) = c.span_closure(b_indices)?;
    let pivots: Vec<usize> = basis.rref_with_pivots().1;
    let outside: Vec<usize> = (0..c.len()).filter(|i| !closure.contains(i)).collect();
    for &beta in &closure {
        let d = c.direction(beta);
        if !dot(d, x).is_zero() {
            return Err(Error::PointNotOnSubspace);
        }
        if !dot(d, u).is_zero() || !dot(d, v).is_zero() {
            return Err(Error::NotTangent);
        }
    }
    for &i in &outside {
        if dot(c.direction(i), x).is_zero() {
            return Err(Error::OnHyperplane(i));
        }
    }
    debug_assert!(outside.iter().all(|&i| !in_row_space(&basis, &pivots, c.direction(i))));
    let product = product_with(c, &frame, outside.into_iter(), x, u, v);
    let tangent = closure.iter().all(|&beta| dot(c.direction(beta), &product).is_zero());
    Ok((product, tangent))
}

/// `Σ_k F_ijk x^k = 0` for all `i, j`, which happens exactly when `G = 0`.
pub fn check_degenerate_kernel(c: &Configuration, x: &[Rational]) -> Result<bool> {
    Ok(euler_contraction(c, x)?.is_zero())
}

/// Whether `u ∗ (v ∗ w) = (u ∗ v) ∗ w` at `x`.
pub fn check_associativity(
    c: &Configuration,
    x: &[Rational],
    u: &[Rational],
    v: &[Rational],
    w: &[Rational],
) -> Result<bool> {
    let frame = c.dual_frame()?;
    let uv = frobenius_product_with(c, &frame, x, u, v)?;
    let vw = frobenius_product_with(c, &frame, x, v, w)?;
    let left = frobenius_product_with(c, &frame, x, &uv, w)?;
    let right = frobenius_product_with(c, &frame, x, u, &vw)?;
    Ok(is_zero_vector(
        &left.iter().zip(&right).map(|(a, b)| a - b).collect::<Vector>(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn b3() -> Configuration {
        let raw = [
            [1, 1, 0],
            [1, -1, 0],
            [1, 0, 1],
            [1, 0, -1],
            [0, 1, 1],
            [0, 1, -1],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
        ]
        .iter()
        .map(|d| (v(d), int(1)))
        .collect::<Vec<_>>();
        Configuration::build(3, raw, None).unwrap()
    }

    #[test]
    fn one_dimensional_third_derivative() {
        let c = Configuration::build(1, vec![(v(&[1]), int(1))], None).unwrap();
        assert_eq!(third_derivative_matrix(&c, 0, &v(&[2])).unwrap(), Matrix::from_i64(&[&[2]]));
    }

    #[test]
    fn contraction_is_four_times_the_form() {
        let c = b3();
        let x = v(&[3, -7, 2]);
        assert_eq!(euler_contraction(&c, &x).unwrap(), c.canonical_form().scale(&int(4)));
    }

    #[test]
    fn third_derivatives_fully_symmetric() {
        let c = b3();
        let x = v(&[5, 2, -3]);
        let fs: Vec<_> = (0..3).map(|i| third_derivative_matrix(&c, i, &x).unwrap()).collect();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(fs[i][(j, k)], fs[j][(i, k)]);
                    assert_eq!(fs[i][(j, k)], fs[k][(j, i)]);
                }
            }
        }
    }

    #[test]
    fn hyperplane_points_rejected() {
        let c = b3();
        assert_eq!(third_derivative_matrix(&c, 0, &v(&[1, 1, 0])), Err(Error::OnHyperplane(1)));
    }

    #[test]
    fn b3_satisfies_wdvv() {
        let c = b3();
        let pts = sample_points(&c, 3, 11);
        assert!(check_wdvv(&c, &pts).unwrap());
    }

    #[test]
    fn sample_points_are_reproducible() {
        let c = b3();
        assert_eq!(sample_points(&c, 4, 5), sample_points(&c, 4, 5));
        assert_ne!(sample_points(&c, 4, 5), sample_points(&c, 4, 6));
    }

    #[test]
    fn one_dimensional_product() {
        let c = Configuration::build(1, vec![(v(&[1]), int(1))], None).unwrap();
        let p = frobenius_product(&c, &v(&[3]), &v(&[2]), &v(&[5])).unwrap();
        assert_eq!(p, vec![rat(10, 3)]);
    }

    #[test]
    fn tangency_in_b3() {
        let c = b3();
        let e3 = c.index_of(&v(&[0, 0, 1])).unwrap();
        let (prod, tangent) = tangency_limit_product(&c, &[e3], &v(&[1, 2, 0]), &v(&[1, 0, 0]), &v(&[1, 0, 0])).unwrap();
        assert!(tangent);
        assert!(prod[2].is_zero());
        assert_eq!(
            check_tangency_limit(&c, &[e3], &v(&[1, 2, 0]), &v(&[0, 0, 1]), &v(&[1, 0, 0])),
            Err(Error::NotTangent)
        );
        assert_eq!(
            check_tangency_limit(&c, &[e3], &v(&[1, 2, 1]), &v(&[1, 0, 0]), &v(&[1, 0, 0])),
            Err(Error::PointNotOnSubspace)
        );
    }

    #[test]
    fn empty_exclusion_is_the_full_product() {
        let c = b3();
        let x = v(&[2, 5, -3]);
        let (u, w) = (v(&[1, 2, 3]), v(&[0, -1, 4]));
        let (limit, _) = tangency_limit_product(&c, &[], &x, &u, &w).unwrap();
        assert_eq!(limit, frobenius_product(&c, &x, &u, &w).unwrap());
    }

    #[test]
    fn degenerate_kernel_only_for_zero_form() {
        let c = b3();
        assert!(!check_degenerate_kernel(&c, &v(&[3, 5, 7])).unwrap());
    }
}
