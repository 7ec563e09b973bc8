//! Plane-by-plane verification of the ∨-conditions, the subsystem form of the
//! same conditions in any dimension, and the complex Euclidean variant where
//! the canonical form may vanish.
//!
//! With covectors stored as `(a, m)`, the ∨-condition for `α` in a plane
//! subsystem `Π` reads `Σ_{β∈Π} m_β (b·G⁻¹a) G⁻¹b = λ G⁻¹a`; the common factor
//! `√m_α` cancels, so `λ` stays rational.

use num_traits::Zero;

use crate::config::{Configuration, DualFrame, Plane};
use crate::error::{Error, Result};
use crate::linalg::{dot, vector_ratio, Matrix, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneStatus {
    /// The subsystem splits into two nonempty mutually orthogonal parts.
    Reducible,
    /// The subsystem's form is `λ` times the ambient one on the dual subspace.
    Proportional(Rational),
    /// Covector index whose eigen-condition fails.
    Violated(usize),
}

impl PlaneStatus {
    pub fn passes(&self) -> bool {
        !matches!(self, PlaneStatus::Violated(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneVerdict {
    pub plane: Plane,
    pub status: PlaneStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeeReport {
    pub is_vee_system: bool,
    pub degenerate_form: bool,
    /// Proportionality constant to the background form; set by [`euclidean_check`] only.
    pub well_distributed: Option<Rational>,
    pub verdicts: Vec<PlaneVerdict>,
}

impl VeeReport {
    pub fn violations(&self) -> impl Iterator<Item = &PlaneVerdict> {
        self.verdicts.iter().filter(|v| !v.status.passes())
    }
}

/// `Σ_{β∈members} m_β (b·G⁻¹a_α) G⁻¹b`.
fn eigen_image(c: &Configuration, frame: &DualFrame, members: &[usize], alpha: usize) -> Vector {
    let mut s = vec![Rational::zero(); c.dimension()];
    for &beta in members {
        let coeff = &frame.gram[alpha][beta];
        if coeff.is_zero() {
            continue;
        }
        let f = c.weight(beta) * coeff;
        for (x, y) in s.iter_mut().zip(&frame.duals[beta]) {
            *x += &f * y;
        }
    }
    s
}

/// Whether the orthogonality graph (edges where `pairing` is nonzero) on
/// `members` is disconnected.
fn is_reducible(members: &[usize], pairing: impl Fn(usize, usize) -> bool) -> bool {
    if members.len() < 2 {
        return false;
    }
    let mut seen = vec![false; members.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..members.len() {
            if !seen[j] && pairing(members[i], members[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().any(|s| !s)
}

fn plane_status(c: &Configuration, frame: &DualFrame, members: &[usize]) -> PlaneStatus {
    let mut common: Option<Rational> = None;
    let mut uniform = true;
    let mut failing = None;
    for &alpha in members {
        let s = eigen_image(c, frame, members, alpha);
        match vector_ratio(&s, &frame.duals[alpha]) {
            Some(lambda) => match &common {
                None => common = Some(lambda),
                Some(l) if *l == lambda => {}
                Some(_) => uniform = false,
            },
            None => {
                failing.get_or_insert(alpha);
            }
        }
    }
    if failing.is_none() && uniform {
        if let Some(lambda) = common {
            return PlaneStatus::Proportional(lambda);
        }
    }
    if is_reducible(members, |a, b| !frame.gram[a][b].is_zero()) {
        return PlaneStatus::Reducible;
    }
    PlaneStatus::Violated(failing.unwrap_or(members[0]))
}

pub fn check_plane(c: &Configuration, plane: &Plane) -> Result<PlaneVerdict> {
    let frame = c.dual_frame()?;
    Ok(check_plane_with(c, &frame, plane))
}

pub fn check_plane_with(c: &Configuration, frame: &DualFrame, plane: &Plane) -> PlaneVerdict {
    PlaneVerdict {
        plane: plane.clone(),
        status: plane_status(c, frame, plane.members()),
    }
}

/// Nondegeneracy of `G` followed by the ∨-condition on every plane.
pub fn check_vee(c: &Configuration) -> VeeReport {
    let Ok(frame) = c.dual_frame() else {
        return VeeReport {
            is_vee_system: false,
            degenerate_form: true,
            well_distributed: None,
            verdicts: Vec::new(),
        };
    };
    let verdicts: Vec<PlaneVerdict> = c
        .enumerate_planes()
        .iter()
        .map(|p| check_plane_with(c, &frame, p))
        .collect();
    VeeReport {
        is_vee_system: verdicts.iter().all(|v| v.status.passes()),
        degenerate_form: false,
        well_distributed: None,
        verdicts,
    }
}

/// For the subsystem `B = A ∩ W` with `W` spanned by the given covectors:
/// `G_B` and `G_A` proportional on `W^∨ × V`, or `B` reducible.
pub fn check_subsystem_property(c: &Configuration, generators: &[usize]) -> Result<PlaneStatus> {
    let frame = c.dual_frame()?;
    let (basis, closure) = c.span_closure(generators)?;
    if closure.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let g_b = c.partial_form(&closure);
    // G_B(G⁻¹w, ·) = λ G_A(G⁻¹w, ·) = λ w for every w in the basis of W.
    let mut common: Option<Rational> = None;
    let mut proportional = true;
    for r in 0..basis.rows() {
        let w = basis.row(r);
        let image = g_b.mul_vec(&frame.inverse.mul_vec(w)?)?;
        match (vector_ratio(&image, w), &common) {
            (Some(l), None) => common = Some(l),
            (Some(l), Some(c0)) if l == *c0 => {}
            _ => {
                proportional = false;
                break;
            }
        }
    }
    if proportional {
        if let Some(lambda) = common {
            return Ok(PlaneStatus::Proportional(lambda));
        }
    }
    if is_reducible(&closure, |a, b| !frame.gram[a][b].is_zero()) {
        return Ok(PlaneStatus::Reducible);
    }
    let witness = closure
        .iter()
        .copied()
        .find(|&a| vector_ratio(&g_b.mul_vec(&frame.duals[a]).expect("square"), c.direction(a)).is_none())
        .unwrap_or(closure[0]);
    Ok(PlaneStatus::Violated(witness))
}

/// `Σ_{β∈Π} G(α^∨, β^∨)(α(a)β(b) − α(b)β(a)) = 0`, evaluated in weighted form
/// with the common factor `m_α` removed.
pub fn check_identity_pi(
    c: &Configuration,
    alpha: usize,
    plane: &Plane,
    a: &[Rational],
    b: &[Rational],
) -> Result<bool> {
    let frame = c.dual_frame()?;
    identity_pi_with(c, &frame, alpha, plane, a, b)
}

pub fn identity_pi_with(
    c: &Configuration,
    frame: &DualFrame,
    alpha: usize,
    plane: &Plane,
    a: &[Rational],
    b: &[Rational],
) -> Result<bool> {
    c.check_index(alpha)?;
    if !plane.members().contains(&alpha) {
        return Err(Error::NotAPlaneMember(alpha));
    }
    for x in [a, b] {
        if x.len() != c.dimension() {
            return Err(Error::DimensionMismatch {
                expected: c.dimension(),
                found: x.len(),
            });
        }
    }
    let da = c.direction(alpha);
    let (alpha_a, alpha_b) = (dot(da, a), dot(da, b));
    let mut total = Rational::zero();
    for &beta in plane.members() {
        let db = c.direction(beta);
        let bracket = &alpha_a * dot(db, b) - &alpha_b * dot(db, a);
        if bracket.is_zero() {
            continue;
        }
        total += c.weight(beta) * &frame.gram[alpha][beta] * bracket;
    }
    Ok(total.is_zero())
}

/// `Σ_{α} m (aᵀBx)(aᵀBy)` as a matrix, the canonical form of the covectors
/// regarded as vectors via the background form `B`.
fn euclidean_form(c: &Configuration, b: &Matrix, members: &[usize]) -> Matrix {
    let m = c.partial_form(members);
    &(b * &m) * b
}

/// `λ` with the (sub)system's canonical form equal to `λ·B`, restricted to
/// the plane when one is given (only the plane's members contribute then).
///
/// The directions are regarded as vectors and `B` as the bilinear form on
/// their space, so the canonical form is `x, y ↦ Σ m (aᵀBx)(aᵀBy)`.
pub fn well_distributed(c: &Configuration, b: &Matrix, subspace: Option<&Plane>) -> Option<Rational> {
    if b.rows() != c.dimension() || b.cols() != c.dimension() {
        return None;
    }
    match subspace {
        None => {
            let all: Vec<usize> = (0..c.len()).collect();
            euclidean_form(c, b, &all).ratio_to(b)
        }
        Some(p) => {
            let g = euclidean_form(c, b, p.members());
            let key = p.key();
            let kt = key.transpose();
            let g_r = &(key * &g) * &kt;
            let b_r = &(key * b) * &kt;
            g_r.ratio_to(&b_r)
        }
    }
}

/// Well-distributedness of the whole set, then each plane subsystem either
/// well-distributed in its plane or reducible with respect to `B`.
pub fn euclidean_check(c: &Configuration, b: &Matrix) -> VeeReport {
    let degenerate_form = c.canonical_form().determinant().map_or(true, |d| d.is_zero());
    let global = well_distributed(c, b, None);
    let verdicts: Vec<PlaneVerdict> = c
        .enumerate_planes()
        .into_iter()
        .map(|plane| {
            let status = match well_distributed(c, b, Some(&plane)) {
                Some(lambda) => PlaneStatus::Proportional(lambda),
                None => {
                    let bdir: Vec<Vector> = (0..c.len())
                        .map(|i| b.mul_vec(c.direction(i)).expect("square background"))
                        .collect();
                    if is_reducible(plane.members(), |x, y| !dot(c.direction(x), &bdir[y]).is_zero()) {
                        PlaneStatus::Reducible
                    } else {
                        PlaneStatus::Violated(plane.members()[0])
                    }
                }
            };
            PlaneVerdict { plane, status }
        })
        .collect();
    VeeReport {
        is_vee_system: global.is_some() && verdicts.iter().all(|v| v.status.passes()),
        degenerate_form,
        well_distributed: global,
        verdicts,
    }
}
