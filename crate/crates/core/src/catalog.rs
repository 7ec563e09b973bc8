//! Explicit configuration families, Coxeter root systems, search for
//! subsystems of a given `A`-product type and the named Coxeter restrictions.
//!
//! Square roots in the covectors are folded into rational weights. Coxeter
//! root systems use the even-coordinate construction: `E8` is all `e_i ± e_j`
//! together with `½(±1, …, ±1)` with an even number of minus signs; `E7` is
//! the part of `E8` with `x7 = x8`, written in the coordinates `x1..x7`; `E6`
//! is the part with `x6 = x7 = x8`, written in `x1..x6`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::io::format_rational;
use crate::linalg::{int, rat, Matrix, Rational, Vector};
use crate::transform::{restrict_along, SubsystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    BGamma,
    BT,
    D,
    E6,
    E7,
    E8,
    F4,
    G3,
    D3,
    AB4A1First,
    AB4A1Second,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::A,
        Family::BGamma,
        Family::BT,
        Family::D,
        Family::E6,
        Family::E7,
        Family::E8,
        Family::F4,
        Family::G3,
        Family::D3,
        Family::AB4A1First,
        Family::AB4A1Second,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A_n",
            Family::BGamma => "B_n_gamma",
            Family::BT => "B_n_t",
            Family::D => "D_n",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G3 => "G3",
            Family::D3 => "D3",
            Family::AB4A1First => "AB4_A1_1",
            Family::AB4A1Second => "AB4_A1_2",
        }
    }

    fn has_rank(self) -> bool {
        matches!(self, Family::A | Family::BGamma | Family::BT | Family::D)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownType(s.to_string()))
    }
}

/// A family name, a rank where the family has one, and named parameters.
///
/// Parameters: `c1, c2, …` (default 1) for `A_n` and `B_n_gamma`; `gamma` for
/// `B_n_gamma`; `t` or `t2` (the square `t²`) for `B_n_t`; `t` for `G3` and
/// the `AB4` restrictions; `t, s` for `D3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub rank: Option<usize>,
    pub params: BTreeMap<String, Rational>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            rank: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_param(mut self, name: &str, value: Rational) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Parses a family name with `key=value` parameters; `n` (or `rank`) sets
    /// the rank.
    pub fn parse<'a>(name: &str, params: impl IntoIterator<Item = (&'a str, Rational)>) -> Result<Self> {
        let mut spec = Self::new(name.parse()?);
        for (key, value) in params {
            if key == "n" || key == "rank" {
                let r = value
                    .is_integer()
                    .then(|| value.to_integer().to_usize())
                    .flatten()
                    .filter(|&r| r > 0)
                    .ok_or_else(|| Error::ParameterDomain(format!("rank must be a positive integer, got {value}")))?;
                spec.rank = Some(r);
            } else {
                spec.params.insert(key.to_string(), value);
            }
        }
        Ok(spec)
    }

    fn rank(&self) -> Result<usize> {
        self.rank
            .ok_or_else(|| Error::ParameterDomain(format!("{} needs a rank n", self.family)))
    }

    fn param(&self, key: &str) -> Result<Rational> {
        self.params
            .get(key)
            .cloned()
            .ok_or_else(|| Error::ParameterDomain(format!("{} needs parameter {key}", self.family)))
    }

    fn c_params(&self, count: usize) -> Result<Vec<Rational>> {
        (1..=count)
            .map(|i| {
                let c = self.params.get(&format!("c{i}")).cloned().unwrap_or_else(Rational::one);
                if c.is_zero() {
                    Err(Error::ParameterDomain(format!("c{i} must be nonzero")))
                } else {
                    Ok(c)
                }
            })
            .collect()
    }

    fn check_known_params(&self, allowed: &[&str], c_count: usize) -> Result<()> {
        for key in self.params.keys() {
            let is_c = key
                .strip_prefix('c')
                .and_then(|i| i.parse::<usize>().ok())
                .is_some_and(|i| (1..=c_count).contains(&i));
            if !is_c && !allowed.contains(&key.as_str()) {
                return Err(Error::ParameterDomain(format!("{} has no parameter {key}", self.family)));
            }
        }
        if !self.family.has_rank() && self.rank.is_some() {
            return Err(Error::ParameterDomain(format!("{} has a fixed rank", self.family)));
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n).map(|k| if k == i { int(1) } else { int(0) }).collect()
}

fn vec_i(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}

fn combine(a: &[Rational], b: &[Rational], sign: i64) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y * int(sign)).collect()
}

fn build(dimension: usize, raw: Vec<(Vector, Rational)>, label: String) -> Result<Configuration> {
    let raw: Vec<_> = raw.into_iter().filter(|(_, w)| !w.is_zero()).collect();
    let c = Configuration::build(dimension, raw, None)
        .map_err(|e| match e {
            Error::EmptyConfiguration => Error::ParameterDomain(format!("{label} has no covectors")),
            other => other,
        })?
        .with_label(label.clone());
    let dirs: Vec<Vector> = c.covectors().iter().map(|w| w.direction().to_vec()).collect();
    if Matrix::from_rows(&dirs)?.rank() < dimension {
        return Err(Error::ParameterDomain(format!("covectors of {label} do not span")));
    }
    Ok(c)
}

fn list(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).join(",")
}

/// Builds a family member in its weighted representation.
pub fn make_family(spec: &FamilySpec) -> Result<Configuration> {
    match spec.family {
        Family::A => {
            spec.check_known_params(&[], spec.rank()? + 1)?;
            let n = spec.rank()?;
            a_family(n, &spec.c_params(n + 1)?)
        }
        Family::BGamma => {
            let n = spec.rank()?;
            spec.check_known_params(&["gamma"], n)?;
            b_gamma_family(n, &spec.param("gamma")?, &spec.c_params(n)?)
        }
        Family::BT => {
            spec.check_known_params(&["t", "t2"], 0)?;
            let t2 = match (spec.params.get("t"), spec.params.get("t2")) {
                (Some(_), Some(_)) => {
                    return Err(Error::ParameterDomain("give either t or t2, not both".into()))
                }
                (Some(t), None) => t * t,
                (None, Some(t2)) => t2.clone(),
                (None, None) => return Err(Error::ParameterDomain("B_n_t needs parameter t or t2".into())),
            };
            coxeter_roots(&CoxeterType::B { t2 }, spec.rank()?)
        }
        Family::D => {
            spec.check_known_params(&[], 0)?;
            coxeter_roots(&CoxeterType::D, spec.rank()?)
        }
        Family::E6 | Family::E7 | Family::E8 | Family::F4 => {
            spec.check_known_params(&[], 0)?;
            let (ty, rank) = match spec.family {
                Family::E6 => (CoxeterType::E6, 6),
                Family::E7 => (CoxeterType::E7, 7),
                Family::E8 => (CoxeterType::E8, 8),
                _ => (CoxeterType::F4, 4),
            };
            coxeter_roots(&ty, rank)
        }
        Family::G3 => {
            spec.check_known_params(&["t"], 0)?;
            g3(&spec.param("t")?)
        }
        Family::D3 => {
            spec.check_known_params(&["t", "s"], 0)?;
            d3(&spec.param("t")?, &spec.param("s")?)
        }
        Family::AB4A1First => {
            spec.check_known_params(&["t"], 0)?;
            ab4_a1_first(&spec.param("t")?)
        }
        Family::AB4A1Second => {
            spec.check_known_params(&["t"], 0)?;
            ab4_a1_second(&spec.param("t")?)
        }
    }
}

/// `√(c_i c_j)(e_i − e_j)`, written in the `n` coordinates of
/// `f_k = e_k − e_{n+1}`.
pub fn a_family(n: usize, c: &[Rational]) -> Result<Configuration> {
    if n == 0 || c.len() != n + 1 {
        return Err(Error::ParameterDomain(format!("A_{n} needs {} parameters", n + 1)));
    }
    let mut raw = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let dir = if j == n { unit(n, i) } else { combine(&unit(n, i), &unit(n, j), -1) };
            raw.push((dir, &c[i] * &c[j]));
        }
    }
    build(n, raw, format!("A{n}({})", list(c)))
}

/// `√(c_i c_j)(e_i ± e_j)` and `√(2c_i(c_i + γ)) e_i`.
pub fn b_gamma_family(n: usize, gamma: &Rational, c: &[Rational]) -> Result<Configuration> {
    if n == 0 || c.len() != n {
        return Err(Error::ParameterDomain(format!("B_{n} needs {n} parameters c")));
    }
    let mut raw = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1, -1] {
                raw.push((combine(&unit(n, i), &unit(n, j), sign), &c[i] * &c[j]));
            }
        }
    }
    for i in 0..n {
        raw.push((unit(n, i), int(2) * &c[i] * (&c[i] + gamma)));
    }
    build(n, raw, format!("B{n}({};{})", format_rational(gamma), list(c)))
}

pub fn g3(t: &Rational) -> Result<Configuration> {
    if t.is_zero() {
        return Err(Error::ParameterDomain("G3 needs t != 0".into()));
    }
    let long = int(2) * t + int(1);
    let mid = (int(2) * t - int(1)) / int(3);
    let mut raw = vec![
        (vec_i(&[1, 0, 0]), long.clone()),
        (vec_i(&[0, 1, 0]), long.clone()),
        (vec_i(&[1, 1, 0]), long),
        (vec_i(&[1, -1, 0]), mid.clone()),
        (vec_i(&[2, 1, 0]), mid.clone()),
        (vec_i(&[1, 2, 0]), mid),
        (vec_i(&[0, 0, 1]), int(3) / t),
    ];
    for d in [[1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1], [1, 1, 1], [1, 1, -1]] {
        raw.push((vec_i(&d), int(1)));
    }
    build(3, raw, format!("G3({})", format_rational(t)))
}

pub fn d3(t: &Rational, s: &Rational) -> Result<Configuration> {
    if t.is_zero() || s.is_zero() {
        return Err(Error::ParameterDomain("D3 needs t*s != 0".into()));
    }
    let one = Rational::one();
    let two = int(2);
    let mut raw: Vec<(Vector, Rational)> = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]]
        .iter()
        .map(|d| (vec_i(d), one.clone()))
        .collect();
    raw.push((vec_i(&[1, 0, 0]), &two * (t + s - &one)));
    raw.push((vec_i(&[0, 1, 0]), &two * (s - t + &one) / t));
    raw.push((vec_i(&[0, 0, 1]), &two * (t - s + &one) / s));
    build(3, raw, format!("D3({},{})", format_rational(t), format_rational(s)))
}

pub fn ab4_a1_first(t: &Rational) -> Result<Configuration> {
    let t2 = t * t;
    let one = Rational::one();
    let two = int(2);
    let mut raw = vec![
        (vec_i(&[1, 0, 0]), &two * (&two * &t2 + &one)),
        (vec_i(&[0, 1, 0]), int(8) * (&t2 + &one)),
        (vec_i(&[0, 0, 1]), &two * &t2 * (&two * &t2 - &one) / (&t2 + &one)),
        (vec_i(&[1, 1, 0]), two.clone()),
        (vec_i(&[1, -1, 0]), two.clone()),
        (vec_i(&[1, 0, 1]), &two * &t2),
        (vec_i(&[1, 0, -1]), &two * &t2),
    ];
    for d in [[1, 2, 1], [1, 2, -1], [1, -2, 1], [1, -2, -1]] {
        raw.push((vec_i(&d), t2.clone()));
    }
    build(3, raw, format!("AB4_A1_1({})", format_rational(t)))
}

pub fn ab4_a1_second(t: &Rational) -> Result<Configuration> {
    let t2 = t * t;
    let one = Rational::one();
    let mut raw: Vec<(Vector, Rational)> = [[1, 1, 0], [1, 0, 1], [0, 1, 1]]
        .iter()
        .map(|d| (vec_i(d), one.clone()))
        .collect();
    for i in 0..3 {
        raw.push((unit(3, i), int(2)));
    }
    raw.push((vec_i(&[1, 1, 1]), int(2) * &t2 / (&t2 + &one)));
    let small = one.clone() / (int(4) * &t2 + &one);
    for d in [[1, -1, 0], [1, 0, -1], [0, 1, -1]] {
        raw.push((vec_i(&d), small.clone()));
    }
    build(3, raw, format!("AB4_A1_2({})", format_rational(t)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoxeterType {
    A,
    /// `e_i ± e_j` with weight 1 and `e_i` with weight `t²`.
    B { t2: Rational },
    D,
    E6,
    E7,
    E8,
    F4,
}

impl FromStr for CoxeterType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" => CoxeterType::A,
            "B" => CoxeterType::B { t2: int(1) },
            "D" => CoxeterType::D,
            "E6" => CoxeterType::E6,
            "E7" => CoxeterType::E7,
            "E8" => CoxeterType::E8,
            "F4" => CoxeterType::F4,
            _ => return Err(Error::UnknownType(s.to_string())),
        })
    }
}

fn e8_roots() -> Vec<Vector> {
    let mut roots = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for sign in [1, -1] {
                roots.push(combine(&unit(8, i), &unit(8, j), sign));
            }
        }
    }
    // ½(1, ±1, …, ±1), one representative per ± pair
    for mask in 0u32..128 {
        if mask.count_ones() % 2 == 0 {
            let mut v = vec![rat(1, 2)];
            v.extend((0..7).map(|k| if mask >> k & 1 == 1 { rat(-1, 2) } else { rat(1, 2) }));
            roots.push(v);
        }
    }
    roots
}

/// Positive roots with weight 1 (`B` short roots get weight `t²`).
pub fn coxeter_roots(ty: &CoxeterType, rank: usize) -> Result<Configuration> {
    let one = Rational::one();
    let fixed = |expected: usize| {
        if rank == expected {
            Ok(())
        } else {
            Err(Error::ParameterDomain(format!("{ty:?} has rank {expected}, got {rank}")))
        }
    };
    match ty {
        CoxeterType::A => {
            let c = a_family(rank, &vec![one; rank + 1])?;
            Ok(c.with_label(format!("A{rank}")))
        }
        CoxeterType::B { t2 } => {
            if rank == 0 || t2.is_zero() {
                return Err(Error::ParameterDomain("B_n needs n >= 1 and t != 0".into()));
            }
            let mut raw = Vec::new();
            for i in 0..rank {
                for j in i + 1..rank {
                    for sign in [1, -1] {
                        raw.push((combine(&unit(rank, i), &unit(rank, j), sign), one.clone()));
                    }
                }
                raw.push((unit(rank, i), t2.clone()));
            }
            build(rank, raw, format!("B{rank}(t^2={})", format_rational(t2)))
        }
        CoxeterType::D => {
            if rank < 2 {
                return Err(Error::ParameterDomain("D_n needs n >= 2".into()));
            }
            let mut raw = Vec::new();
            for i in 0..rank {
                for j in i + 1..rank {
                    for sign in [1, -1] {
                        raw.push((combine(&unit(rank, i), &unit(rank, j), sign), one.clone()));
                    }
                }
            }
            build(rank, raw, format!("D{rank}"))
        }
        CoxeterType::E8 => {
            fixed(8)?;
            build(8, e8_roots().into_iter().map(|r| (r, one.clone())).collect(), "E8".into())
        }
        CoxeterType::E7 => {
            fixed(7)?;
            let raw = e8_roots()
                .into_iter()
                .filter(|r| r[6] == r[7])
                .map(|r| (r[..7].to_vec(), one.clone()))
                .collect();
            build(7, raw, "E7".into())
        }
        CoxeterType::E6 => {
            fixed(6)?;
            let raw = e8_roots()
                .into_iter()
                .filter(|r| r[5] == r[6] && r[6] == r[7])
                .map(|r| (r[..6].to_vec(), one.clone()))
                .collect();
            build(6, raw, "E6".into())
        }
        CoxeterType::F4 => {
            fixed(4)?;
            let mut raw = Vec::new();
            for i in 0..4 {
                raw.push((unit(4, i), one.clone()));
                for j in i + 1..4 {
                    for sign in [1, -1] {
                        raw.push((combine(&unit(4, i), &unit(4, j), sign), one.clone()));
                    }
                }
            }
            for mask in 0u32..8 {
                let mut v = vec![rat(1, 2)];
                v.extend((0..3).map(|k| if mask >> k & 1 == 1 { rat(-1, 2) } else { rat(1, 2) }));
                raw.push((v, one.clone()));
            }
            build(4, raw, "F4".into())
        }
    }
}

/// A product of type-`A` components, e.g. `A2^2`, `A5`, `A1^2xA2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemType {
    /// Component ranks, largest first.
    pub components: Vec<usize>,
}

impl SubsystemType {
    pub fn rank(&self) -> usize {
        self.components.iter().sum()
    }

    /// Number of positive roots.
    pub fn root_count(&self) -> usize {
        self.components.iter().map(|k| k * (k + 1) / 2).sum()
    }
}

impl FromStr for SubsystemType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownType(s.to_string());
        let mut components = Vec::new();
        for factor in s.split(['x', '*', '×']) {
            let factor = factor.trim();
            let body = factor.strip_prefix(['A', 'a']).ok_or_else(bad)?;
            let (rank, power) = match body.split_once('^') {
                Some((r, p)) => (r, p.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let rank: usize = rank.parse().map_err(|_| bad())?;
            if rank == 0 || power == 0 {
                return Err(bad());
            }
            components.extend(std::iter::repeat_n(rank, power));
        }
        components.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { components })
    }
}

impl fmt::Display for SubsystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .components
            .iter()
            .chunk_by(|&&k| k)
            .into_iter()
            .map(|(k, group)| match group.count() {
                1 => format!("A{k}"),
                p => format!("A{k}^{p}"),
            })
            .join("x");
        f.write_str(&parts)
    }
}

/// A subsystem found by [`find_subsystems_of_type`]: a simple system (as
/// chains, component after component) and the closure of its span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundSubsystem {
    pub simple: Vec<usize>,
    pub spec: SubsystemSpec,
    /// The closure has exactly as many covectors as the type has positive roots.
    pub exact: bool,
}

struct ChainSearch<'a> {
    c: &'a Configuration,
    ty: &'a SubsystemType,
    anchor: Option<usize>,
    adjacent: Vec<Vec<usize>>,
    orthogonal: Vec<Vec<bool>>,
    usable: Vec<bool>,
    /// Directions as integer rows, when they all fit.
    integer_rows: Option<Vec<Vec<i128>>>,
    /// Spans already seen, as reduced echelon rows scaled to primitive integers.
    seen: HashSet<Vec<BigInt>>,
    found: Vec<FoundSubsystem>,
}

impl ChainSearch<'_> {
    /// `starts[k]` is the position in `chosen` where component `k` begins.
    fn extend(&mut self, chosen: &mut Vec<usize>, starts: &mut Vec<usize>) -> Result<()> {
        let comp = starts.len() - 1;
        let pos = chosen.len() - starts[comp];
        let comp_rank = self.ty.components[comp];
        if pos == comp_rank {
            if comp + 1 == self.ty.components.len() {
                return self.record(chosen);
            }
            starts.push(chosen.len());
            let r = self.extend(chosen, starts);
            starts.pop();
            return r;
        }
        let anchored = comp == 0 && self.anchor.is_some();
        let candidates: Vec<usize> = if pos == 0 {
            if anchored {
                self.anchor.into_iter().collect()
            } else {
                (0..self.c.len()).collect()
            }
        } else {
            self.adjacent[*chosen.last().expect("nonempty chain")].clone()
        };
        for x in candidates {
            if !self.usable[x] || chosen.contains(&x) {
                continue;
            }
            let prev = (pos > 0).then(|| chosen[chosen.len() - 1]);
            let orthogonal_to_rest = chosen
                .iter()
                .filter(|&&y| Some(y) != prev)
                .all(|&y| self.orthogonal[x][y]);
            if !orthogonal_to_rest {
                continue;
            }
            if pos == 0 && comp > 0 {
                let same_rank = self.ty.components[comp - 1] == comp_rank;
                let prev_anchored = comp - 1 == 0 && self.anchor.is_some();
                if same_rank && !prev_anchored && x < chosen[starts[comp - 1]] {
                    continue;
                }
            }
            // a chain and its reverse are the same simple system
            if comp_rank > 1 && pos == comp_rank - 1 && !anchored && x < chosen[starts[comp]] {
                continue;
            }
            chosen.push(x);
            self.extend(chosen, starts)?;
            chosen.pop();
        }
        Ok(())
    }

    fn span_key(&self, chosen: &[usize]) -> Result<Vec<BigInt>> {
        if let Some(rows) = &self.integer_rows {
            let picked: Vec<&[i128]> = chosen.iter().map(|&i| rows[i].as_slice()).collect();
            if let Some(key) = integer_rref(&picked, self.c.dimension()) {
                return Ok(key.into_iter().map(BigInt::from).collect());
            }
        }
        let rows: Vec<Vector> = chosen.iter().map(|&i| self.c.direction(i).to_vec()).collect();
        let basis = Matrix::from_rows(&rows)?.row_space_basis();
        Ok(basis.row_vectors().iter().flat_map(|r| primitive_row(r)).collect())
    }

    fn record(&mut self, chosen: &[usize]) -> Result<()> {
        let key = self.span_key(chosen)?;
        if !self.seen.insert(key) {
            return Ok(());
        }
        let spec = SubsystemSpec::new(self.c, chosen)?;
        let exact = spec.closure.len() == self.ty.root_count();
        self.found.push(FoundSubsystem {
            simple: chosen.to_vec(),
            spec,
            exact,
        });
        Ok(())
    }
}

/// A rational row scaled to coprime integers with its first nonzero entry positive.
fn primitive_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Reduced echelon form of integer rows, each row scaled to coprime integers
/// with positive pivot; `None` on overflow. Zero rows are dropped, so this
/// matches [`primitive_row`] applied to the rows of the rational form.
fn integer_rref(rows: &[&[i128]], cols: usize) -> Option<Vec<i128>> {
    fn normalize(row: &mut [i128]) {
        let g = row.iter().fold(0i128, |acc, &x| acc.gcd(&x));
        if g != 0 {
            let sign = if row.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
            for x in row.iter_mut() {
                *x /= g * sign;
            }
        }
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        normalize(&mut m[rank]);
        let pivot_row = m[rank].clone();
        let pv = pivot_row[col];
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = x.checked_mul(pv)?.checked_sub(f.checked_mul(y)?)?;
            }
            normalize(row);
        }
        rank += 1;
    }
    m.truncate(rank);
    Some(m.into_iter().flatten().collect())
}

/// Closed subsystems whose simple systems have the Gram matrix shape of the
/// requested type, deduplicated by span.
///
/// With `L_i = m_i G⁻¹(a_i, a_i)` and `q_ij = m_i m_j G⁻¹(a_i, a_j)²`, a chain
/// needs equal nonzero `L` along each component, `q = L²/4` between
/// neighbours and `G⁻¹(a_i, a_j) = 0` otherwise; components are mutually
/// orthogonal. Subsystems of full rank are kept; callers that restrict must
/// skip them.
pub fn find_subsystems_of_type(c: &Configuration, ty: &SubsystemType) -> Result<Vec<FoundSubsystem>> {
    search(c, ty, None)
}

/// Like [`find_subsystems_of_type`], but the first component must have
/// covector `anchor` at one end. When the symmetry group of `c` is transitive
/// on covectors (as for `E6`, `E7`, `E8` under their Weyl groups) this finds
/// every subsystem up to that symmetry.
pub fn find_subsystems_anchored(
    c: &Configuration,
    ty: &SubsystemType,
    anchor: usize,
) -> Result<Vec<FoundSubsystem>> {
    c.check_index(anchor)?;
    search(c, ty, Some(anchor))
}

fn search(c: &Configuration, ty: &SubsystemType, anchor: Option<usize>) -> Result<Vec<FoundSubsystem>> {
    let frame = c.dual_frame()?;
    let n = c.len();
    let lengths: Vec<Rational> = (0..n).map(|i| c.weight(i) * &frame.gram[i][i]).collect();
    let orthogonal: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| frame.gram[i][j].is_zero()).collect())
        .collect();
    let adjacent: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    if j == i || lengths[i] != lengths[j] {
                        return false;
                    }
                    let g = &frame.gram[i][j];
                    let q = c.weight(i) * c.weight(j) * g * g;
                    q * int(4) == &lengths[i] * &lengths[i]
                })
                .collect()
        })
        .collect();
    let usable = lengths.iter().map(|l| !l.is_zero()).collect();
    let mut s = ChainSearch {
        c,
        ty,
        anchor,
        adjacent,
        orthogonal,
        usable,
        integer_rows: (0..c.len())
            .map(|i| {
                primitive_row(c.direction(i))
                    .iter()
                    .map(|x| x.to_i64().map(i128::from))
                    .collect::<Option<Vec<_>>>()
            })
            .collect(),
        seen: HashSet::new(),
        found: Vec::new(),
    };
    if ty.components.is_empty() {
        return Ok(Vec::new());
    }
    s.extend(&mut Vec::new(), &mut vec![0])?;
    Ok(s.found)
}

/// A parsed `"(E7,A2^2)"`-style name.
fn parse_coxeter_pair(name: &str) -> Option<(CoxeterType, usize, SubsystemType)> {
    let inner = name.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (source, sub) = inner.split_once(',')?;
    let source = source.trim();
    let (ty, rank) = match source.to_ascii_uppercase().as_str() {
        "E6" => (CoxeterType::E6, 6),
        "E7" => (CoxeterType::E7, 7),
        "E8" => (CoxeterType::E8, 8),
        "F4" => (CoxeterType::F4, 4),
        other => {
            let (letter, r) = other.split_at(1);
            let r: usize = r.parse().ok()?;
            (letter.parse().ok()?, r)
        }
    };
    Some((ty, rank, sub.trim().parse().ok()?))
}

/// Builds a named Coxeter restriction and returns one configuration per
/// fingerprint class of embeddings.
///
/// Names: `"(E7,A2^2)"`, `"(E8,A5)"`, `"(E6,A1^3)"` and in general
/// `"(X,T)"` for a Coxeter source and an `A`-product type; also
/// `"B3(-1;1,1,s)"`, which reads the parameter `s`. `E` sources are searched
/// anchored at their first root.
pub fn named_restriction(name: &str, params: &BTreeMap<String, Rational>) -> Result<Vec<Configuration>> {
    if name.trim() == "B3(-1;1,1,s)" {
        let s = params
            .get("s")
            .ok_or_else(|| Error::ParameterDomain("B3(-1;1,1,s) needs parameter s".into()))?;
        let c = b_gamma_family(3, &int(-1), &[int(1), int(1), s.clone()])?;
        return Ok(vec![c]);
    }
    let (ty, rank, sub) = parse_coxeter_pair(name).ok_or_else(|| Error::UnknownType(name.to_string()))?;
    let source = coxeter_roots(&ty, rank)?;
    let transitive = matches!(ty, CoxeterType::E6 | CoxeterType::E7 | CoxeterType::E8);
    let found = if transitive {
        find_subsystems_anchored(&source, &sub, 0)?
    } else {
        find_subsystems_of_type(&source, &sub)?
    };
    let label = format!("({},{})", source.label(), sub);
    let mut classes = Vec::new();
    let mut prints = Vec::new();
    for f in found.iter().filter(|f| f.exact && f.spec.dimension() < rank) {
        let r = restrict_along(&source, &f.spec)?.with_label(label.clone());
        let print = r.fingerprint()?;
        if !prints.contains(&print) {
            prints.push(print);
            classes.push(r);
        }
    }
    if classes.is_empty() {
        return Err(Error::SubsystemNotFound(name.to_string()));
    }
    Ok(classes)
}

/// `AB4_A1_1` as `t → ∞` after dividing all weights by `t²`: each weight is
/// replaced by its `t²` coefficient and vanishing ones are dropped.
pub fn ab4_a1_first_limit() -> Result<Configuration> {
    let raw = vec![
        (vec_i(&[1, 0, 0]), int(4)),
        (vec_i(&[0, 1, 0]), int(8)),
        (vec_i(&[0, 0, 1]), int(4)),
        (vec_i(&[1, 0, 1]), int(2)),
        (vec_i(&[1, 0, -1]), int(2)),
        (vec_i(&[1, 2, 1]), int(1)),
        (vec_i(&[1, 2, -1]), int(1)),
        (vec_i(&[1, -2, 1]), int(1)),
        (vec_i(&[1, -2, -1]), int(1)),
    ];
    build(3, raw, "AB4_A1_1(inf)".into())
}

/// `AB4_A1_2` as `t → ∞`: the weights are bounded, so each is replaced by its
/// limit and the three `1/(4t²+1)` weights drop out.
pub fn ab4_a1_second_limit() -> Result<Configuration> {
    let mut raw: Vec<(Vector, Rational)> = [[1, 1, 0], [1, 0, 1], [0, 1, 1]]
        .iter()
        .map(|d| (vec_i(d), int(1)))
        .collect();
    for i in 0..3 {
        raw.push((unit(3, i), int(2)));
    }
    raw.push((vec_i(&[1, 1, 1]), int(2)));
    build(3, raw, "AB4_A1_2(inf)".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vee::check_vee;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("Z9".parse::<Family>().is_err());
    }

    #[test]
    fn g3_counts() {
        assert_eq!(g3(&int(1)).unwrap().len(), 13);
        assert_eq!(g3(&rat(1, 2)).unwrap().len(), 10);
        assert!(g3(&int(0)).is_err());
    }

    #[test]
    fn d3_on_locus_has_zero_form() {
        let c = d3(&int(1), &int(-2)).unwrap();
        assert!(c.canonical_form().is_zero());
        for i in 4..7 {
            assert_eq!(c.weight(i), &int(-4));
        }
    }

    #[test]
    fn root_counts() {
        assert_eq!(coxeter_roots(&CoxeterType::E8, 8).unwrap().len(), 120);
        assert_eq!(coxeter_roots(&CoxeterType::E7, 7).unwrap().len(), 63);
        assert_eq!(coxeter_roots(&CoxeterType::E6, 6).unwrap().len(), 36);
        assert_eq!(coxeter_roots(&CoxeterType::F4, 4).unwrap().len(), 24);
        assert_eq!(coxeter_roots(&CoxeterType::A, 4).unwrap().len(), 10);
        assert_eq!(coxeter_roots(&CoxeterType::D, 4).unwrap().len(), 12);
        assert_eq!(coxeter_roots(&CoxeterType::B { t2: int(2) }, 3).unwrap().len(), 9);
        assert!(coxeter_roots(&CoxeterType::E8, 7).is_err());
        assert!("H3".parse::<CoxeterType>().is_err());
    }

    #[test]
    fn e8_gram_is_scalar() {
        let c = coxeter_roots(&CoxeterType::E8, 8).unwrap();
        assert_eq!(c.canonical_form(), Matrix::identity(8).scale(&int(30)));
    }

    #[test]
    fn coxeter_b3_with_folded_sqrt2() {
        let spec = FamilySpec::parse("B_n_t", [("n", int(3)), ("t2", int(2))]).unwrap();
        assert!(check_vee(&make_family(&spec).unwrap()).is_vee_system);
    }

    #[test]
    fn unknown_parameters_rejected() {
        assert!(FamilySpec::parse("G3", [("q", int(1))]).and_then(|s| make_family(&s)).is_err());
        assert!(FamilySpec::parse("G3", []).and_then(|s| make_family(&s)).is_err());
        assert!(FamilySpec::parse("A_n", [("n", rat(1, 2))]).is_err());
    }

    #[test]
    fn subsystem_type_parsing() {
        let t: SubsystemType = "A1^2xA2".parse().unwrap();
        assert_eq!(t.components, vec![2, 1, 1]);
        assert_eq!(t.root_count(), 5);
        assert_eq!(t.to_string(), "A2xA1^2");
        assert!("B2".parse::<SubsystemType>().is_err());
    }

    #[test]
    fn b3_contains_orthogonal_coordinate_triple() {
        let c = coxeter_roots(&CoxeterType::B { t2: int(1) }, 3).unwrap();
        let found = find_subsystems_of_type(&c, &"A1^3".parse().unwrap()).unwrap();
        let coords: Vec<usize> = (0..3).map(|i| c.index_of(&unit(3, i)).unwrap()).collect();
        // {e1, e2, e3} spans everything, so it shares its span with every
        // other full-rank triple and is represented by the whole closure
        assert!(found.iter().any(|f| coords.iter().all(|i| f.spec.closure.contains(i))));
        assert!(found.iter().all(|f| f.spec.dimension() == 3 && !f.exact));
    }

    #[test]
    fn integer_and_rational_span_keys_agree() {
        let rows: Vec<Vec<i64>> = vec![vec![2, -4, 6, 0], vec![1, 1, 0, 3], vec![3, -3, 6, 3], vec![0, 5, -2, 1]];
        for k in 1..=rows.len() {
            let ints: Vec<Vec<i128>> = rows[..k].iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let refs: Vec<&[i128]> = ints.iter().map(|r| r.as_slice()).collect();
            let fast: Vec<BigInt> = integer_rref(&refs, 4).unwrap().into_iter().map(BigInt::from).collect();
            let rat_rows: Vec<Vector> = rows[..k].iter().map(|r| vec_i(r)).collect();
            let basis = Matrix::from_rows(&rat_rows).unwrap().row_space_basis();
            let slow: Vec<BigInt> = basis.row_vectors().iter().flat_map(|r| primitive_row(r)).collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn a2_in_a3_is_exact() {
        let c = coxeter_roots(&CoxeterType::A, 3).unwrap();
        let found = find_subsystems_of_type(&c, &"A2".parse().unwrap()).unwrap();
        assert_eq!(found.len(), 4);
        assert!(found.iter().all(|f| f.exact && f.spec.closure.len() == 3));
    }

}
