//! Integer bound vectors over the threshold distances, the edge bounds of a
//! matrix, upper/lower-bound-walks and the prefix-sum order on bounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::feasibility::ThresholdVector;
use crate::matrix::RobinsonMatrix;
use crate::rational::Rational;

/// Coefficients `(a_1, ..., a_k)` of the linear form `a . d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundVector(Vec<i32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("bound vectors have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("edge bounds need two distinct vertices, got {} twice", .0 + 1)]
    SameVertex(usize),
    #[error("{kind} walk crosses null-edge {}->{} at step {step}", .from + 1, .to + 1)]
    IllegalStep {
        kind: WalkKind,
        step: usize,
        from: usize,
        to: usize,
    },
    #[error("walk repeats vertex {} at step {step}", .vertex + 1)]
    Repeated { step: usize, vertex: usize },
    #[error("walk has no steps")]
    EmptyWalk,
    #[error("vertex {} is outside the matrix", .0 + 1)]
    VertexOutOfRange(usize),
    #[error("chain decomposition is only defined for k = 2, got k = {0}")]
    NotTwoLevels(usize),
}

impl BoundVector {
    pub fn new(coeffs: Vec<i32>) -> Self {
        BoundVector(coeffs)
    }

    pub fn zero(k: usize) -> Self {
        BoundVector(vec![0; k])
    }

    /// Unit vector for level `t` (1-based).
    pub fn unit(k: usize, t: u32) -> Self {
        let mut v = vec![0; k];
        v[t as usize - 1] = 1;
        BoundVector(v)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `sum |a_i|`; at most `n` for bounds of paths and cycles of an n-vertex matrix.
    pub fn norm(&self) -> u32 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn dot(&self, d: &ThresholdVector) -> Rational {
        debug_assert_eq!(self.k(), d.k());
        self.0
            .iter()
            .zip(d.values())
            .filter(|(&c, _)| c != 0)
            .fold(Rational::zero(), |acc, (&c, x)| {
                acc + x * Rational::from_integer(c.into())
            })
    }

    pub fn add_assign(&mut self, other: &BoundVector) {
        debug_assert_eq!(self.k(), other.k());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    /// Prefix-sum order: `self ⪯ other` iff every prefix sum of `self` is at
    /// most the matching prefix sum of `other`.
    pub fn precedes(&self, other: &BoundVector) -> Result<bool, BoundError> {
        if self.k() != other.k() {
            return Err(BoundError::LengthMismatch(self.k(), other.k()));
        }
        Ok(self.precedes_unchecked(other))
    }

    #[inline]
    pub(crate) fn precedes_unchecked(&self, other: &BoundVector) -> bool {
        let mut diff = 0i64;
        for (a, b) in self.0.iter().zip(&other.0) {
            diff += i64::from(*b) - i64::from(*a);
            if diff < 0 {
                return false;
            }
        }
        true
    }

    /// Partial comparison under the prefix-sum order.
    pub fn compare(&self, other: &BoundVector) -> Option<Ordering> {
        match (
            self.precedes_unchecked(other),
            other.precedes_unchecked(self),
        ) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for BoundVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Add for &BoundVector {
    type Output = BoundVector;
    fn add(self, rhs: &BoundVector) -> BoundVector {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &BoundVector {
    type Output = BoundVector;
    fn sub(self, rhs: &BoundVector) -> BoundVector {
        self + &(-rhs)
    }
}

impl Neg for &BoundVector {
    type Output = BoundVector;
    fn neg(self) -> BoundVector {
        BoundVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for BoundVector {
    type Output = BoundVector;
    fn neg(self) -> BoundVector {
        -&self
    }
}

/// Keeps the ⪯-minimal elements of `items`, first occurrence winning among
/// equal bounds. Output order follows the input order.
pub fn minimal_elements<T>(items: Vec<T>, bound: impl Fn(&T) -> &BoundVector) -> Vec<T> {
    let keep: Vec<bool> = items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let bx = bound(x);
            !items.iter().enumerate().any(|(j, y)| {
                let by = bound(y);
                j != i && by.precedes_unchecked(bx) && (by != bx || j < i)
            })
        })
        .collect();
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(x, k)| k.then_some(x))
        .collect()
}

/// Upper bound of the single step `u -> v`, or `None` for a null-edge taken
/// upwards.
pub fn edge_upper_bound(
    m: &RobinsonMatrix,
    u: usize,
    v: usize,
) -> Result<Option<BoundVector>, BoundError> {
    check_pair(m, u, v)?;
    Ok(upper_step(m, u, v))
}

/// Lower bound of the single step `u -> v`, or `None` for a null-edge taken
/// downwards.
pub fn edge_lower_bound(
    m: &RobinsonMatrix,
    u: usize,
    v: usize,
) -> Result<Option<BoundVector>, BoundError> {
    check_pair(m, u, v)?;
    Ok(lower_step(m, u, v))
}

fn check_pair(m: &RobinsonMatrix, u: usize, v: usize) -> Result<(), BoundError> {
    for x in [u, v] {
        if x >= m.n() {
            return Err(BoundError::VertexOutOfRange(x));
        }
    }
    if u == v {
        return Err(BoundError::SameVertex(u));
    }
    Ok(())
}

pub(crate) fn upper_step(m: &RobinsonMatrix, u: usize, v: usize) -> Option<BoundVector> {
    let k = m.k() as usize;
    let t = m.get(u, v);
    if u < v {
        (t > 0).then(|| BoundVector::unit(k, t))
    } else {
        Some(-forward_lower(m.k(), t))
    }
}

pub(crate) fn lower_step(m: &RobinsonMatrix, u: usize, v: usize) -> Option<BoundVector> {
    let t = m.get(u, v);
    if u < v {
        Some(forward_lower(m.k(), t))
    } else {
        (t > 0).then(|| -BoundVector::unit(m.k() as usize, t))
    }
}

/// Lower bound of a forward step at similarity level `t`.
fn forward_lower(k: u32, t: u32) -> BoundVector {
    if t == k {
        BoundVector::zero(k as usize)
    } else {
        BoundVector::unit(k as usize, t + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Upper,
    Lower,
}

impl WalkKind {
    pub fn flip(self) -> Self {
        match self {
            WalkKind::Upper => WalkKind::Lower,
            WalkKind::Lower => WalkKind::Upper,
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Upper => "upper-bound",
            WalkKind::Lower => "lower-bound",
        })
    }
}

/// A walk `<w_0, ..., w_p>` read as an upper- or lower-bound-walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundWalk {
    pub vertices: Vec<usize>,
    pub kind: WalkKind,
}

impl BoundWalk {
    pub fn upper(vertices: Vec<usize>) -> Self {
        BoundWalk {
            vertices,
            kind: WalkKind::Upper,
        }
    }

    pub fn lower(vertices: Vec<usize>) -> Self {
        BoundWalk {
            vertices,
            kind: WalkKind::Lower,
        }
    }

    pub fn reverse(&self) -> Self {
        reverse_walk(self)
    }

    /// Concatenation `self + other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &BoundWalk) -> Option<BoundWalk> {
        if self.kind != other.kind || self.vertices.last() != other.vertices.first() {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Some(BoundWalk {
            vertices,
            kind: self.kind,
        })
    }

    /// True when no vertex repeats, except that a closed walk may return to
    /// its start.
    pub fn is_simple(&self) -> bool {
        let vs = &self.vertices;
        let body = if vs.len() > 1 && vs.first() == vs.last() {
            &vs[..vs.len() - 1]
        } else {
            &vs[..]
        };
        let mut seen = std::collections::HashSet::with_capacity(body.len());
        body.iter().all(|v| seen.insert(*v))
    }
}

impl fmt::Display for BoundWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vertices(f, &self.vertices)
    }
}

pub(crate) fn fmt_vertices(f: &mut fmt::Formatter<'_>, vs: &[usize]) -> fmt::Result {
    f.write_str("⟨")?;
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", v + 1)?;
    }
    f.write_str("⟩")
}

/// Sum of the per-step bounds of `walk` (β⁺ for upper walks, β⁻ for lower).
pub fn walk_bound(m: &RobinsonMatrix, walk: &BoundWalk) -> Result<BoundVector, BoundError> {
    if walk.vertices.len() < 2 {
        return Err(BoundError::EmptyWalk);
    }
    if let Some(&bad) = walk.vertices.iter().find(|&&v| v >= m.n()) {
        return Err(BoundError::VertexOutOfRange(bad));
    }
    let mut total = BoundVector::zero(m.k() as usize);
    for (i, pair) in walk.vertices.windows(2).enumerate() {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            return Err(BoundError::SameVertex(u));
        }
        let step = match walk.kind {
            WalkKind::Upper => upper_step(m, u, v),
            WalkKind::Lower => lower_step(m, u, v),
        };
        match step {
            Some(b) => total.add_assign(&b),
            None => {
                return Err(BoundError::IllegalStep {
                    kind: walk.kind,
                    step: i + 1,
                    from: u,
                    to: v,
                })
            }
        }
    }
    Ok(total)
}

/// Reverses the vertex order and swaps upper/lower; the bound negates.
pub fn reverse_walk(walk: &BoundWalk) -> BoundWalk {
    BoundWalk {
        vertices: walk.vertices.iter().rev().copied().collect(),
        kind: walk.kind.flip(),
    }
}

/// Which of the two chains of norm-`t` vectors a `k = 2` bound belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainLabel {
    Zero,
    Chain { t: u32, index: u8 },
}

/// Places a `k = 2` vector in its chain. The first chain of norm `t` is
/// `{(i-t, i) : 0 <= i <= t} ∪ {(i, t-i) : 1 <= i < t}` and the second is
/// `{(i-t, -i) : 1 <= i <= t} ∪ {(i, i-t) : 1 <= i <= t}`.
pub fn chain_id(a: &BoundVector) -> Result<ChainLabel, BoundError> {
    if a.k() != 2 {
        return Err(BoundError::NotTwoLevels(a.k()));
    }
    let (a1, a2) = (a.0[0], a.0[1]);
    if a1 == 0 && a2 == 0 {
        return Ok(ChainLabel::Zero);
    }
    let t = a.norm() as i32;
    let first = (a1 - a2 == -t && (0..=t).contains(&a2)) || (a1 + a2 == t && (1..t).contains(&a1));
    let second =
        (a1 == -t - a2 && (1..=t).contains(&-a2)) || (a2 == a1 - t && (1..=t).contains(&a1));
    let label = |index| Ok(ChainLabel::Chain { t: t as u32, index });
    match (first, second) {
        (true, false) => label(1),
        (false, true) => label(2),
        _ => unreachable!("{a} lies in neither or both chains of norm {t}"),
    }
}
