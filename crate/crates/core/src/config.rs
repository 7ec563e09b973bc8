//! Weighted covector configurations.
//!
//! A covector `√m · a` is stored as the pair `(a, m)`: a normalized rational
//! direction `a` (first nonzero coordinate equal to one) and a nonzero rational
//! weight `m`. Everything downstream depends on the covectors only through
//! `m · a ⊗ a`, so square roots never have to be taken, and an imaginary factor
//! `i` turns into a negative weight. One representative is kept per `±` pair.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vector, Matrix, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedCovector {
    direction: Vector,
    weight: Rational,
}

impl WeightedCovector {
    /// Rescales `direction` so its first nonzero coordinate is one and folds
    /// the square of the removed scalar into the weight.
    pub fn normalize(direction: Vector, weight: Rational) -> Result<Self> {
        if weight.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let (direction, scale) = normalize_direction(direction)?;
        let weight = weight * &scale * &scale;
        Ok(Self { direction, weight })
    }

    pub fn direction(&self) -> &[Rational] {
        &self.direction
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }
}

/// Splits `v` as `scale · d` with `d` normalized. Returns `(d, scale)`.
pub fn normalize_direction(mut v: Vector) -> Result<(Vector, Rational)> {
    let scale = v.iter().find(|x| !x.is_zero()).cloned().ok_or(Error::ZeroDirection)?;
    if !scale.is_one() {
        let inv = scale.recip();
        for x in &mut v {
            *x *= &inv;
        }
    }
    Ok((v, scale))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dimension: usize,
    covectors: Vec<WeightedCovector>,
    background: Option<Matrix>,
    label: String,
}

impl Configuration {
    /// Normalizes every entry, merges parallel directions by summing their
    /// weights and drops directions whose merged weight vanishes. Surviving
    /// directions keep the order of their first appearance.
    pub fn build(
        dimension: usize,
        raw: impl IntoIterator<Item = (Vector, Rational)>,
        background: Option<Matrix>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::EmptyConfiguration);
        }
        let mut order: Vec<Vector> = Vec::new();
        let mut weights: HashMap<Vector, Rational> = HashMap::new();
        for (direction, weight) in raw {
            if direction.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: direction.len(),
                });
            }
            let wc = WeightedCovector::normalize(direction, weight)?;
            match weights.get_mut(&wc.direction) {
                Some(w) => *w += wc.weight,
                None => {
                    order.push(wc.direction.clone());
                    weights.insert(wc.direction, wc.weight);
                }
            }
        }
        let covectors: Vec<WeightedCovector> = order
            .into_iter()
            .filter_map(|direction| {
                let weight = weights.remove(&direction)?;
                (!weight.is_zero()).then_some(WeightedCovector { direction, weight })
            })
            .collect();
        if covectors.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        if let Some(b) = &background {
            validate_background(b, dimension)?;
        }
        Ok(Self {
            dimension,
            covectors,
            background,
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_background(mut self, background: Option<Matrix>) -> Result<Self> {
        if let Some(b) = &background {
            validate_background(b, self.dimension)?;
        }
        self.background = background;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn covectors(&self) -> &[WeightedCovector] {
        &self.covectors
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn direction(&self, i: usize) -> &[Rational] {
        &self.covectors[i].direction
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.covectors[i].weight
    }

    pub fn background(&self) -> Option<&Matrix> {
        self.background.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { index, len: self.len() });
        }
        Ok(())
    }

    /// Index of the covector with the given direction (any nonzero multiple).
    pub fn index_of(&self, direction: &[Rational]) -> Option<usize> {
        let (d, _) = normalize_direction(direction.to_vec()).ok()?;
        self.covectors.iter().position(|c| c.direction == d)
    }

    /// Every weight multiplied by `rho`.
    pub fn scale_weights(&self, rho: &Rational) -> Result<Self> {
        if rho.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let mut out = self.clone();
        for c in &mut out.covectors {
            c.weight *= rho;
        }
        Ok(out)
    }

    /// `G = Σ m · a ⊗ a`.
    pub fn canonical_form(&self) -> Matrix {
        form_of(self, 0..self.len())
    }

    /// `Σ m · a ⊗ a` over a subset of the covectors.
    pub fn partial_form(&self, indices: &[usize]) -> Matrix {
        form_of(self, indices.iter().copied())
    }

    /// The dual vector `v` with `G · v = a_index`.
    pub fn dual(&self, index: usize) -> Result<Vector> {
        self.check_index(index)?;
        self.canonical_form()
            .solve(self.direction(index))
            .map_err(|_| Error::DegenerateForm)
    }

    /// Inverse canonical form plus all duals and pairings, computed once.
    pub fn dual_frame(&self) -> Result<DualFrame> {
        let inverse = self.canonical_form().invert().map_err(|_| Error::DegenerateForm)?;
        let duals: Vec<Vector> = self
            .covectors
            .iter()
            .map(|c| inverse.mul_vec(&c.direction).expect("square form"))
            .collect();
        let gram = self
            .covectors
            .iter()
            .map(|c| duals.iter().map(|d| dot(&c.direction, d)).collect())
            .collect();
        Ok(DualFrame { inverse, duals, gram })
    }

    /// All 2-dimensional subspaces spanned by pairs of covector directions,
    /// each listed once with its complete member list, sorted by key.
    pub fn enumerate_planes(&self) -> Vec<Plane> {
        let n = self.len();
        let mut covered = vec![false; n * n];
        let mut planes = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if covered[i * n + j] {
                    continue;
                }
                let span = Matrix::from_rows(&[self.direction(i).to_vec(), self.direction(j).to_vec()])
                    .expect("equal lengths");
                let (key, pivots) = span.rref_with_pivots();
                debug_assert_eq!(pivots.len(), 2, "stored directions are pairwise non-parallel");
                let members: Vec<usize> =
                    (0..n).filter(|&k| in_row_space(&key, &pivots, self.direction(k))).collect();
                for &a in &members {
                    for &b in &members {
                        covered[a * n + b] = true;
                    }
                }
                planes.push(Plane { key, members });
            }
        }
        planes.sort_by(|a, b| a.key.cmp(&b.key));
        planes
    }

    /// Indices of the covectors lying in the span of the given ones, and the
    /// reduced basis of that span.
    pub fn span_closure(&self, indices: &[usize]) -> Result<(Matrix, Vec<usize>)> {
        for &i in indices {
            self.check_index(i)?;
        }
        let rows: Vec<Vector> = indices.iter().map(|&i| self.direction(i).to_vec()).collect();
        if rows.is_empty() {
            return Ok((Matrix::zeros(0, self.dimension), Vec::new()));
        }
        let (red, pivots) = Matrix::from_rows(&rows)?.rref_with_pivots();
        let basis = Matrix::from_fn(pivots.len(), self.dimension, |r, c| red[(r, c)].clone());
        let closure = (0..self.len())
            .filter(|&k| in_row_space(&basis, &pivots, self.direction(k)))
            .collect();
        Ok((basis, closure))
    }

    pub fn fingerprint(&self) -> Result<Fingerprint> {
        let frame = self.dual_frame()?;
        Ok(self.invariants(&frame).fingerprint(self.dimension))
    }

    /// Per-covector equivalence invariants.
    pub fn invariants(&self, frame: &DualFrame) -> CovectorInvariants {
        let planes = self.enumerate_planes();
        let mut incidence = vec![Vec::new(); self.len()];
        for p in &planes {
            for &m in &p.members {
                incidence[m].push(p.members.len());
            }
        }
        for inc in &mut incidence {
            inc.sort_unstable();
        }
        let lengths = (0..self.len()).map(|i| frame.length_squared(self, i)).collect();
        CovectorInvariants {
            lengths,
            incidence,
            plane_sizes: planes.iter().map(|p| p.members.len()).collect(),
        }
    }
}

fn form_of(c: &Configuration, indices: impl Iterator<Item = usize>) -> Matrix {
    let mut g = Matrix::zeros(c.dimension, c.dimension);
    for i in indices {
        let wc = &c.covectors[i];
        g.add_outer(&wc.weight, &wc.direction, &wc.direction);
    }
    g
}

fn validate_background(b: &Matrix, dimension: usize) -> Result<()> {
    if b.rows() != dimension || b.cols() != dimension {
        return Err(Error::InvalidBackground(format!(
            "expected {dimension}x{dimension}, found {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if !b.is_symmetric() {
        return Err(Error::InvalidBackground("not symmetric".into()));
    }
    if b.determinant()?.is_zero() {
        return Err(Error::InvalidBackground("singular".into()));
    }
    Ok(())
}

/// Whether `v` lies in the row space of a matrix already in rref with the given pivots.
pub(crate) fn in_row_space(rref: &Matrix, pivots: &[usize], v: &[Rational]) -> bool {
    let mut residual = v.to_vec();
    for (r, &p) in pivots.iter().enumerate() {
        let coeff = residual[p].clone();
        if coeff.is_zero() {
            continue;
        }
        for (x, y) in residual.iter_mut().zip(rref.row(r)) {
            if !y.is_zero() {
                *x -= &coeff * y;
            }
        }
    }
    is_zero_vector(&residual)
}

/// Precomputed inverse canonical form of a configuration with nondegenerate
/// `G`: `duals[i] = G⁻¹ a_i` and `gram[i][j] = a_iᵀ G⁻¹ a_j`.
#[derive(Clone, Debug)]
pub struct DualFrame {
    pub inverse: Matrix,
    pub duals: Vec<Vector>,
    pub gram: Vec<Vec<Rational>>,
}

impl DualFrame {
    /// Squared length `G⁻¹(α, α)` of covector `i`, measured against the
    /// canonical form of the full `±` symmetric set (which is `2G`, since only
    /// one representative of each pair is stored). Invariant under linear
    /// changes of variables and under global weight rescaling.
    pub fn length_squared(&self, c: &Configuration, i: usize) -> Rational {
        c.weight(i) * &self.gram[i][i] / Rational::from_integer(2.into())
    }
}

/// A two-dimensional subspace of covector space and the covectors it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    key: Matrix,
    members: Vec<usize>,
}

impl Plane {
    /// The plane spanned by two non-parallel covectors of `c`.
    pub fn spanned_by(c: &Configuration, i: usize, j: usize) -> Result<Self> {
        c.check_index(i)?;
        c.check_index(j)?;
        let (key, members) = c.span_closure(&[i, j])?;
        if key.rows() != 2 {
            return Err(Error::ShapeMismatch("covectors are parallel".into()));
        }
        Ok(Self { key, members })
    }

    /// 2×n reduced row echelon basis.
    pub fn key(&self) -> &Matrix {
        &self.key
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

#[derive(Clone, Debug)]
pub struct CovectorInvariants {
    pub lengths: Vec<Rational>,
    pub incidence: Vec<Vec<usize>>,
    pub plane_sizes: Vec<usize>,
}

impl CovectorInvariants {
    pub fn profile(&self, i: usize) -> (Rational, Vec<usize>) {
        (self.lengths[i].clone(), self.incidence[i].clone())
    }

    pub fn fingerprint(&self, dimension: usize) -> Fingerprint {
        let mut lengths = self.lengths.clone();
        lengths.sort();
        let mut plane_profile = self.plane_sizes.clone();
        plane_profile.sort_unstable();
        let mut covector_profiles: Vec<_> = (0..self.lengths.len()).map(|i| self.profile(i)).collect();
        covector_profiles.sort();
        Fingerprint {
            dimension,
            count: self.lengths.len(),
            lengths,
            plane_profile,
            covector_profiles,
        }
    }
}

/// Linear-equivalence invariants of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dimension: usize,
    pub count: usize,
    pub lengths: Vec<Rational>,
    pub plane_profile: Vec<usize>,
    pub covector_profiles: Vec<(Rational, Vec<usize>)>,
}
