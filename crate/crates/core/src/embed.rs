//! Building a uniform embedding from feasible thresholds and checking any
//! embedding against the strict inequality system.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bounds::BoundVector;
use crate::feasibility::ThresholdVector;
use crate::matrix::RobinsonMatrix;
use crate::pathgen::{BoundTable, CycleRecord};
use crate::rational::{format_rational, Rational};

/// Positions `Pi(1), ..., Pi(n)` on the line, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding(Vec<Rational>);

impl Embedding {
    pub fn new(values: Vec<Rational>) -> Self {
        Embedding(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.to_strings().join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Gap not above `d_{t+1}` (or not positive at level `k`).
    TooClose,
    /// Gap not below `d_t`.
    TooFar,
}

/// First pair `u < v` whose gap breaks `d_{t+1} < Pi(v) - Pi(u) < d_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub level: u32,
    pub gap: Rational,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::TooClose => "not above the lower threshold",
            ViolationKind::TooFar => "not below the upper threshold",
        };
        write!(
            f,
            "pair ({}, {}) at level {} has gap {}, {}",
            self.u + 1,
            self.v + 1,
            self.level,
            format_rational(&self.gap),
            what
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("embedding has {found} positions, matrix has {expected} vertices")]
    Length { expected: usize, found: usize },
    #[error("threshold vector has {found} levels, matrix has {expected}")]
    Levels { expected: usize, found: usize },
    #[error("embedding violates the uniform system: {0}")]
    Verification(Violation),
    #[error("thresholds violate cycle {0}: bound times d is not positive")]
    CycleViolated(CycleRecord),
    #[error(
        "thresholds leave no room for vertex {}: lower bound via vertex {} is not below upper bound via vertex {}",
        .v + 1, .lower_from + 1, .upper_from + 1
    )]
    EmptyInterval {
        v: usize,
        lower_from: usize,
        upper_from: usize,
    },
}

/// Checks `a[u][v] = t  =>  d_{t+1} < Pi(v) - Pi(u) < d_t` for all `u < v`
/// with `d_{k+1} = 0` and `d_0 = infinity`. Reports the first violation in
/// lexicographic pair order.
pub fn verify_embedding(
    m: &RobinsonMatrix,
    d: &ThresholdVector,
    pi: &Embedding,
) -> Result<(), Violation> {
    assert_eq!(pi.len(), m.n(), "embedding length must match the matrix");
    assert_eq!(
        d.k(),
        m.k() as usize,
        "threshold levels must match the matrix"
    );
    let pi = pi.values();
    for u in 0..m.n() {
        for v in u + 1..m.n() {
            let t = m.get(u, v);
            let gap = &pi[v] - &pi[u];
            let kind = if gap <= d.lower(t) {
                Some(ViolationKind::TooClose)
            } else if d.upper(t).is_some_and(|up| gap >= *up) {
                Some(ViolationKind::TooFar)
            } else {
                None
            };
            if let Some(kind) = kind {
                return Err(Violation {
                    u,
                    v,
                    level: t,
                    gap,
                    kind,
                });
            }
        }
    }
    Ok(())
}

/// Like [`verify_embedding`] but returns size mismatches as errors instead
/// of panicking; used on user-supplied files.
pub fn check_embedding(
    m: &RobinsonMatrix,
    d: &ThresholdVector,
    pi: &Embedding,
) -> Result<(), EmbedError> {
    if pi.len() != m.n() {
        return Err(EmbedError::Length {
            expected: m.n(),
            found: pi.len(),
        });
    }
    if d.k() != m.k() as usize {
        return Err(EmbedError::Levels {
            expected: m.k() as usize,
            found: d.k(),
        });
    }
    verify_embedding(m, d, pi).map_err(EmbedError::Verification)
}

/// Places vertices left to right: `Pi(1) = 0` and
/// `Pi(v) = (ub_v + lb_v) / 2` where
/// `ub_v = min_{i<v} Pi(i) + min{ b.d : b in UB(i, v) }` and
/// `lb_v = max_{i<v} Pi(i) + max{ a.d : a in LB(i, v) }`.
/// If no `UB(i, v)` is populated, `Pi(v) = lb_v + d_1`.
pub fn construct_embedding(
    m: &RobinsonMatrix,
    d: &ThresholdVector,
    table: &BoundTable,
) -> Result<Embedding, EmbedError> {
    if d.k() != m.k() as usize {
        return Err(EmbedError::Levels {
            expected: m.k() as usize,
            found: d.k(),
        });
    }
    for c in table.extract_cycles() {
        if !c.bound.dot(d).is_positive_strict() {
            return Err(EmbedError::CycleViolated(c));
        }
    }

    let n = m.n();
    let mut pi: Vec<Rational> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(Embedding(pi));
    }
    pi.push(Rational::zero());
    let two = Rational::from_integer(2.into());
    let scaled = ScaledThresholds::new(d);
    for v in 1..n {
        let mut ub: Option<(Rational, usize)> = None;
        let mut lb: Option<(Rational, usize)> = None;
        for (i, base) in pi.iter().enumerate() {
            if let Some(best) = scaled.min_dot(table.upper_bounds(i, v)) {
                let cand = base + best;
                if ub.as_ref().is_none_or(|(x, _)| cand < *x) {
                    ub = Some((cand, i));
                }
            }
            if let Some(best) = scaled.min_dot(table.upper_bounds(v, i)) {
                // max over LB(i, v) = -min over UB(v, i)
                let cand = base - best;
                if lb.as_ref().is_none_or(|(x, _)| cand > *x) {
                    lb = Some((cand, i));
                }
            }
        }
        let (lb, lower_from) = lb.expect("backward steps always give a lower bound");
        let value = match ub {
            Some((ub, upper_from)) => {
                if lb >= ub {
                    return Err(EmbedError::EmptyInterval {
                        v,
                        lower_from,
                        upper_from,
                    });
                }
                (lb + ub) / &two
            }
            None => lb + d.get(1),
        };
        pi.push(value);
    }
    Ok(Embedding(pi))
}

/// `d` over a common denominator, so dot products stay in integers.
struct ScaledThresholds {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl ScaledThresholds {
    fn new(d: &ThresholdVector) -> Self {
        let denominator = d
            .values()
            .iter()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let numerators = d
            .values()
            .iter()
            .map(|x| x.numer() * (&denominator / x.denom()))
            .collect();
        ScaledThresholds {
            numerators,
            denominator,
        }
    }

    fn min_dot<'a>(&self, bounds: impl Iterator<Item = &'a BoundVector>) -> Option<Rational> {
        bounds
            .map(|b| {
                b.coeffs()
                    .iter()
                    .zip(&self.numerators)
                    .fold(BigInt::zero(), |acc, (&c, x)| acc + x * c)
            })
            .min()
            .map(|m| Rational::new(m, self.denominator.clone()))
    }
}

trait StrictSign {
    fn is_positive_strict(&self) -> bool;
}

impl StrictSign for Rational {
    fn is_positive_strict(&self) -> bool {
        *self > Rational::zero()
    }
}
