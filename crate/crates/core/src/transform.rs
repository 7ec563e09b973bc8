//! Subsystems, restrictions, linear changes of variables and the search for
//! linear equivalences between configurations.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::config::{normalize_direction, Configuration, CovectorInvariants, DualFrame};
use crate::error::{Error, Result};
use crate::linalg::{rational_sqrt, Matrix, Rational, Vector};

/// A change of variables `P = c·P̂` on covector coordinates, stored as the
/// rational matrix `P̂` and the rational square `c²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Matrix,
    pub scale_sq: Rational,
}

impl LinearMap {
    pub fn new(matrix: Matrix, scale_sq: Rational) -> Result<Self> {
        if !matrix.is_square() || matrix.determinant()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        if scale_sq.is_zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(Self { matrix, scale_sq })
    }

    /// `apply_linear` with `P̂`, then every weight multiplied by `c²`.
    pub fn apply(&self, c: &Configuration) -> Result<Configuration> {
        apply_linear(c, &self.matrix)?.scale_weights(&self.scale_sq)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.invert()?,
            scale_sq: self.scale_sq.recip(),
        })
    }
}

/// A witness that `source` maps onto `target`: `P̂ a_i ∥ b_{sigma[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub map: LinearMap,
    pub sigma: Vec<usize>,
}

impl Equivalence {
    pub fn inverse(&self) -> Result<Self> {
        let mut sigma = vec![0; self.sigma.len()];
        for (i, &j) in self.sigma.iter().enumerate() {
            sigma[j] = i;
        }
        Ok(Self {
            map: self.map.inverse()?,
            sigma,
        })
    }

    /// Applies the map to `source` and compares with `target` as weighted
    /// covector multisets, checking the bijection along the way.
    pub fn verify(&self, source: &Configuration, target: &Configuration) -> bool {
        if source.len() != target.len() || self.sigma.len() != source.len() {
            return false;
        }
        let Ok(image) = self.map.apply(source) else {
            return false;
        };
        if image.len() != target.len() {
            return false;
        }
        source.covectors().iter().enumerate().all(|(i, wc)| {
            let Ok(mapped) = self.map.matrix.mul_vec(wc.direction()) else {
                return false;
            };
            let Ok((dir, _)) = normalize_direction(mapped) else {
                return false;
            };
            let j = self.sigma[i];
            j < target.len()
                && dir == target.direction(j)
                && image.index_of(&dir).map(|k| image.weight(k)) == Some(target.weight(j))
        })
    }
}

/// The subsystem `B = A ∩ W` generated by some covectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemSpec {
    pub indices: Vec<usize>,
    /// Reduced row echelon basis of `W`.
    pub span: Matrix,
    pub closure: Vec<usize>,
}

impl SubsystemSpec {
    pub fn new(c: &Configuration, indices: &[usize]) -> Result<Self> {
        let (span, closure) = c.span_closure(indices)?;
        Ok(Self {
            indices: indices.to_vec(),
            span,
            closure,
        })
    }

    pub fn dimension(&self) -> usize {
        self.span.rows()
    }
}

/// Coordinates of `v` in the rref basis of a subspace (it must lie in it).
fn coordinates_in(basis: &Matrix, v: &[Rational]) -> Vector {
    let (_, pivots) = basis.rref_with_pivots();
    pivots.iter().map(|&p| v[p].clone()).collect()
}

/// The closed subsystem generated by `indices` as a configuration of its own,
/// written in the coordinates of the rref basis of its span.
///
/// Fails with [`Error::IsotropicSubsystem`] when `G_B` restricted to
/// `W^∨ = G⁻¹W` is degenerate.
pub fn subsystem(c: &Configuration, indices: &[usize]) -> Result<Configuration> {
    let frame = c.dual_frame()?;
    let spec = SubsystemSpec::new(c, indices)?;
    if spec.closure.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if is_isotropic(c, &frame, &spec)? {
        return Err(Error::IsotropicSubsystem);
    }
    let raw = spec
        .closure
        .iter()
        .map(|&i| (coordinates_in(&spec.span, c.direction(i)), c.weight(i).clone()));
    Ok(Configuration::build(spec.dimension(), raw, None)?.with_label(derived_label(c, "subsystem", indices)))
}

/// Whether `G_B|_{W^∨}` is degenerate. With `w_k` a basis of `W` this is the
/// matrix `w_kᵀ G⁻¹ G_B G⁻¹ w_l`.
pub fn is_isotropic(c: &Configuration, frame: &DualFrame, spec: &SubsystemSpec) -> Result<bool> {
    let g_b = c.partial_form(&spec.closure);
    let w_dual = &spec.span * &frame.inverse;
    let restricted = &(&w_dual * &g_b) * &w_dual.transpose();
    Ok(restricted.determinant()?.is_zero())
}

fn derived_label(c: &Configuration, op: &str, indices: &[usize]) -> String {
    let idx = indices.iter().map(usize::to_string).join(",");
    if c.label().is_empty() {
        format!("{op}[{idx}]")
    } else {
        format!("{op}({})[{idx}]", c.label())
    }
}

/// `π_B(A)`: the covectors outside the closure of `B`, restricted to
/// `W_B = ∩_{β∈B} ker β` and written in the kernel basis of `B`'s directions.
/// Parallel restrictions merge by adding weights.
pub fn restrict(c: &Configuration, b_indices: &[usize]) -> Result<Configuration> {
    let spec = SubsystemSpec::new(c, b_indices)?;
    restrict_along(c, &spec)
}

/// [`restrict`] with the closure already computed.
pub fn restrict_along(c: &Configuration, spec: &SubsystemSpec) -> Result<Configuration> {
    let kernel = if spec.span.rows() == 0 {
        Matrix::identity(c.dimension()).row_vectors()
    } else {
        spec.span.kernel_basis()
    };
    if kernel.is_empty() {
        return Err(Error::DegenerateRestriction);
    }
    // columns of K span W_B; a covector restricts to Kᵀa
    let k_t = Matrix::from_rows(&kernel)?;
    let raw = (0..c.len())
        .filter(|i| spec.closure.binary_search(i).is_err())
        .map(|i| Ok((k_t.mul_vec(c.direction(i))?, c.weight(i).clone())))
        .collect::<Result<Vec<_>>>()?;
    let restricted = Configuration::build(kernel.len(), raw, None).map_err(|e| match e {
        Error::EmptyConfiguration => Error::DegenerateRestriction,
        other => other,
    })?;
    // Kᵀ G K, since the covectors of B vanish on W_B
    if restricted.canonical_form().determinant()?.is_zero() {
        return Err(Error::DegenerateRestriction);
    }
    Ok(restricted.with_label(derived_label(c, "restrict", &spec.indices)))
}

/// Each direction `a ↦ P·a`, renormalized with the scale folded into the
/// weight. The background form transforms as `P⁻ᵀ B P⁻¹`.
pub fn apply_linear(c: &Configuration, p: &Matrix) -> Result<Configuration> {
    if p.rows() != c.dimension() || p.cols() != c.dimension() {
        return Err(Error::DimensionMismatch {
            expected: c.dimension(),
            found: p.rows(),
        });
    }
    let p_inv = p.invert()?;
    let raw = c
        .covectors()
        .iter()
        .map(|wc| Ok((p.mul_vec(wc.direction())?, wc.weight().clone())))
        .collect::<Result<Vec<_>>>()?;
    let background = c
        .background()
        .map(|b| &(&p_inv.transpose() * b) * &p_inv);
    Ok(Configuration::build(c.dimension(), raw, background)?.with_label(c.label()))
}

struct SearchSide {
    invariants: CovectorInvariants,
    /// `m_i m_j (a_iᵀG⁻¹a_j)²`, invariant under equivalence.
    pair: Vec<Vec<Rational>>,
}

impl SearchSide {
    fn new(config: &Configuration) -> Result<Self> {
        let frame = config.dual_frame()?;
        let invariants = config.invariants(&frame);
        let n = config.len();
        let pair = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let g = &frame.gram[i][j];
                        config.weight(i) * config.weight(j) * g * g
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            invariants,
            pair,
        })
    }
}

/// Searches for an invertible linear map taking `a` onto `b` up to one global
/// weight factor `c²`.
///
/// Candidates are pruned by fingerprint, per-covector profiles and the pairwise
/// invariants `m_i m_j G⁻¹(a_i, a_j)²`. A projective frame of `a` (`n + 1`
/// covectors, any `n` of them independent) fixes `P̂` up to a scalar once its
/// image is chosen. Without a frame, bases are enumerated and the scalars come
/// from the weights, which requires their ratios to be rational squares.
/// The first witness in lexicographic candidate order is returned.
pub fn find_equivalence(a: &Configuration, b: &Configuration) -> Result<Option<Equivalence>> {
    if a.dimension() != b.dimension() || a.len() != b.len() {
        // still reject degenerate inputs
        a.dual_frame()?;
        b.dual_frame()?;
        return Ok(None);
    }
    let sa = SearchSide::new(a)?;
    let sb = SearchSide::new(b)?;
    let n = a.dimension();
    if sa.invariants.fingerprint(n) != sb.invariants.fingerprint(n) {
        return Ok(None);
    }
    let candidates: Vec<Vec<usize>> = (0..a.len())
        .map(|i| {
            let prof = sa.invariants.profile(i);
            (0..b.len()).filter(|&j| sb.invariants.profile(j) == prof).collect()
        })
        .collect();
    let b_index: HashMap<&[Rational], usize> =
        (0..b.len()).map(|j| (b.direction(j), j)).collect();

    // rarest covectors first
    let order: Vec<usize> = (0..a.len()).sorted_by_key(|&i| (candidates[i].len(), i)).collect();

    if let Some(frame) = find_frame(a, &order) {
        let mut assignment = Vec::with_capacity(n + 1);
        let mut used = vec![false; b.len()];
        let mut found = None;
        backtrack(&sa, &sb, &frame, &candidates, &mut assignment, &mut used, &mut |images| {
            let w = frame_witness(a, b, &frame, images, &b_index)?;
            found = Some(w);
            Some(())
        });
        return Ok(found);
    }

    for basis in order.iter().copied().combinations(n) {
        let Ok(m) = Matrix::from_columns(&basis.iter().map(|&i| a.direction(i).to_vec()).collect::<Vec<_>>())
        else {
            continue;
        };
        if m.determinant()?.is_zero() {
            continue;
        }
        let mut assignment = Vec::with_capacity(n);
        let mut used = vec![false; b.len()];
        let mut found = None;
        backtrack(&sa, &sb, &basis, &candidates, &mut assignment, &mut used, &mut |images| {
            let w = basis_witness(a, b, &basis, images, &b_index)?;
            found = Some(w);
            Some(())
        });
        return Ok(found);
    }
    Ok(None)
}

/// Depth-first enumeration of injective, invariant-compatible images of
/// `slots`. Stops as soon as `accept` returns `Some`.
fn backtrack(
    sa: &SearchSide,
    sb: &SearchSide,
    slots: &[usize],
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    accept: &mut dyn FnMut(&[usize]) -> Option<()>,
) -> bool {
    let depth = assignment.len();
    if depth == slots.len() {
        return accept(assignment).is_some();
    }
    let src = slots[depth];
    for &img in &candidates[src] {
        if used[img] {
            continue;
        }
        let compatible = slots[..depth]
            .iter()
            .zip(assignment.iter())
            .all(|(&s, &t)| sa.pair[src][s] == sb.pair[img][t]);
        if !compatible {
            continue;
        }
        used[img] = true;
        assignment.push(img);
        if backtrack(sa, sb, slots, candidates, assignment, used, accept) {
            return true;
        }
        assignment.pop();
        used[img] = false;
    }
    false
}

/// `n` independent covectors followed by one whose coordinates in that basis
/// are all nonzero. Returned as `[basis..., extra]`.
fn find_frame(c: &Configuration, order: &[usize]) -> Option<Vec<usize>> {
    let n = c.dimension();
    for basis in order.iter().copied().combinations(n) {
        let cols: Vec<Vector> = basis.iter().map(|&i| c.direction(i).to_vec()).collect();
        let m = Matrix::from_columns(&cols).ok()?;
        if m.determinant().ok()?.is_zero() {
            continue;
        }
        for &extra in order {
            if basis.contains(&extra) {
                continue;
            }
            let mu = m.solve(c.direction(extra)).ok()?;
            if mu.iter().all(|x| !x.is_zero()) {
                let mut frame = basis.clone();
                frame.push(extra);
                return Some(frame);
            }
        }
    }
    None
}

fn frame_witness(
    a: &Configuration,
    b: &Configuration,
    frame: &[usize],
    images: &[usize],
    b_index: &HashMap<&[Rational], usize>,
) -> Option<Equivalence> {
    let n = a.dimension();
    let a_cols: Vec<Vector> = frame[..n].iter().map(|&i| a.direction(i).to_vec()).collect();
    let b_cols: Vec<Vector> = images[..n].iter().map(|&j| b.direction(j).to_vec()).collect();
    let a_f = Matrix::from_columns(&a_cols).ok()?;
    let b_g = Matrix::from_columns(&b_cols).ok()?;
    let mu = a_f.solve(a.direction(frame[n])).ok()?;
    let nu = b_g.solve(b.direction(images[n])).ok()?;
    if nu.iter().any(Zero::is_zero) {
        return None;
    }
    let kappa: Vector = nu.iter().zip(&mu).map(|(x, y)| x / y).collect();
    let p = &(&b_g * &Matrix::diagonal(&kappa)) * &a_f.invert().ok()?;
    complete_witness(a, b, p, b_index)
}

fn basis_witness(
    a: &Configuration,
    b: &Configuration,
    basis: &[usize],
    images: &[usize],
    b_index: &HashMap<&[Rational], usize>,
) -> Option<Equivalence> {
    let n = a.dimension();
    let a_cols: Vec<Vector> = basis.iter().map(|&i| a.direction(i).to_vec()).collect();
    let b_cols: Vec<Vector> = images.iter().map(|&j| b.direction(j).to_vec()).collect();
    let a_f = Matrix::from_columns(&a_cols).ok()?;
    let b_g = Matrix::from_columns(&b_cols).ok()?;
    if b_g.determinant().ok()?.is_zero() {
        return None;
    }
    let a_inv = a_f.invert().ok()?;
    // κ_0 = 1 absorbs the global scale: c² = m'_0 / m_0, then κ_k² = m'_k / (m_k c²).
    let scale_sq = b.weight(images[0]) / a.weight(basis[0]);
    let mut magnitudes = vec![Rational::one()];
    for k in 1..n {
        let sq = b.weight(images[k]) / (a.weight(basis[k]) * &scale_sq);
        magnitudes.push(rational_sqrt(&sq)?);
    }
    for signs in 0..(1u64 << (n - 1)) {
        let kappa: Vector = magnitudes
            .iter()
            .enumerate()
            .map(|(k, m)| if k > 0 && signs >> (k - 1) & 1 == 1 { -m.clone() } else { m.clone() })
            .collect();
        let p = &(&b_g * &Matrix::diagonal(&kappa)) * &a_inv;
        if let Some(w) = complete_witness(a, b, p, b_index) {
            return Some(w);
        }
    }
    None
}

/// Maps every covector of `a` by `p`, requires a bijection onto `b` and a
/// single global weight factor.
fn complete_witness(
    a: &Configuration,
    b: &Configuration,
    p: Matrix,
    b_index: &HashMap<&[Rational], usize>,
) -> Option<Equivalence> {
    let mut sigma = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    let mut scale_sq: Option<Rational> = None;
    for wc in a.covectors() {
        let (dir, s) = normalize_direction(p.mul_vec(wc.direction()).ok()?).ok()?;
        let &j = b_index.get(dir.as_slice())?;
        if used[j] {
            return None;
        }
        used[j] = true;
        let ratio = b.weight(j) / (wc.weight() * &s * &s);
        match &scale_sq {
            None => scale_sq = Some(ratio),
            Some(c2) if *c2 == ratio => {}
            Some(_) => return None,
        }
        sigma.push(j);
    }
    Some(Equivalence {
        map: LinearMap::new(p, scale_sq?).ok()?,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::vee::check_vee;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn b3(short: Rational) -> Configuration {
        let mut raw: Vec<(Vector, Rational)> = [[1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1]]
            .iter()
            .map(|d| (v(d), int(1)))
            .collect();
        for d in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            raw.push((v(&d), short.clone()));
        }
        Configuration::build(3, raw, None).unwrap()
    }

    fn weights_by_direction(c: &Configuration) -> Vec<(Vector, Rational)> {
        let mut out: Vec<_> = c
            .covectors()
            .iter()
            .map(|w| (w.direction().to_vec(), w.weight().clone()))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn restriction_of_b3_along_e3() {
        let c = b3(int(3));
        let e3 = c.index_of(&v(&[0, 0, 1])).unwrap();
        let r = restrict(&c, &[e3]).unwrap();
        assert_eq!(r.dimension(), 2);
        let expected = vec![
            (v(&[0, 1]), int(5)),
            (v(&[1, -1]), int(1)),
            (v(&[1, 0]), int(5)),
            (v(&[1, 1]), int(1)),
        ];
        assert_eq!(weights_by_direction(&r), expected);
        assert!(check_vee(&r).is_vee_system);
    }

    #[test]
    fn restriction_along_spanning_set_fails() {
        let c = b3(int(1));
        assert_eq!(restrict(&c, &[0, 1, 2]), Err(Error::DegenerateRestriction));
    }

    #[test]
    fn subsystem_of_b3_coordinate_plane() {
        let c = b3(rat(1, 4));
        let e1 = c.index_of(&v(&[1, 0, 0])).unwrap();
        let e2 = c.index_of(&v(&[0, 1, 0])).unwrap();
        let s = subsystem(&c, &[e1, e2]).unwrap();
        let expected = vec![
            (v(&[0, 1]), rat(1, 4)),
            (v(&[1, -1]), int(1)),
            (v(&[1, 0]), rat(1, 4)),
            (v(&[1, 1]), int(1)),
        ];
        assert_eq!(weights_by_direction(&s), expected);
        assert!(check_vee(&s).is_vee_system);
    }

    #[test]
    fn spanning_subsystem_is_the_configuration() {
        let c = b3(int(2));
        let s = subsystem(&c, &[0, 2, 4]).unwrap();
        assert_eq!(weights_by_direction(&s), weights_by_direction(&c));
    }

    #[test]
    fn isotropic_subsystem_rejected() {
        // G = diag(1, 1); the line through (1, 1) ... use a signed weight
        // pair making G_B vanish on W^∨.
        let c = Configuration::build(
            2,
            vec![(v(&[1, 1]), int(1)), (v(&[1, -1]), int(1)), (v(&[1, 0]), int(-1))],
            None,
        )
        .unwrap();
        // G = [[1, 0], [0, 2]]; B = {(1,0)} weight -1 is not isotropic
        assert!(subsystem(&c, &[2]).is_ok());
        let zero = Configuration::build(
            3,
            vec![(v(&[1, 0, 0]), int(1)), (v(&[0, 1, 0]), int(1)), (v(&[0, 0, 1]), int(1))],
            None,
        )
        .unwrap();
        assert!(subsystem(&zero, &[0]).is_ok());
    }

    #[test]
    fn apply_linear_examples() {
        let c = b3(int(1));
        assert_eq!(apply_linear(&c, &Matrix::identity(3)).unwrap(), c);
        let doubled = apply_linear(&c, &Matrix::identity(3).scale(&int(2))).unwrap();
        assert_eq!(doubled, c.scale_weights(&int(4)).unwrap());
        assert_eq!(
            apply_linear(&c, &Matrix::from_i64(&[&[1, 0, 0], &[1, 0, 0], &[0, 0, 1]])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn equivalence_with_itself_is_identity() {
        let c = b3(int(2));
        let w = find_equivalence(&c, &c).unwrap().unwrap();
        assert!(w.verify(&c, &c));
        assert_eq!(w.map.scale_sq, int(1));
    }

    #[test]
    fn equivalence_after_random_map_and_rescaling() {
        let c = b3(int(2));
        let p = Matrix::from_i64(&[&[2, 1, 0], &[0, 1, -3], &[1, 0, 1]]);
        let image = apply_linear(&c, &p).unwrap().scale_weights(&rat(-5, 7)).unwrap();
        let w = find_equivalence(&c, &image).unwrap().unwrap();
        assert!(w.verify(&c, &image));
        let back = w.inverse().unwrap();
        assert!(back.verify(&image, &c));
    }

    #[test]
    fn inequivalent_configurations() {
        assert_eq!(find_equivalence(&b3(int(1)), &b3(int(2))).unwrap(), None);
    }

    #[test]
    fn frameless_configurations_use_basis_search() {
        let a = Configuration::build(2, vec![(v(&[1, 0]), int(1)), (v(&[0, 1]), int(4))], None).unwrap();
        let b = Configuration::build(2, vec![(v(&[1, 1]), int(9)), (v(&[1, -1]), int(9))], None).unwrap();
        let w = find_equivalence(&a, &b).unwrap().unwrap();
        assert!(w.verify(&a, &b));
    }
}
