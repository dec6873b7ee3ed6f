//! Deciding whether some threshold vector `d_1 > ... > d_k > 0` satisfies
//! `β⁺(C) . d > 0` for every upper-bound-cycle `C`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::bounds::{minimal_elements, BoundVector};
use crate::elimination::{solve_strict, StrictOutcome};
use crate::pathgen::CycleRecord;
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeasibilityError {
    #[error("the ratio method needs k = 2, got k = {0}")]
    NotTwoLevels(usize),
    #[error("cycle bound {bound} has {found} levels, expected {expected}")]
    LevelMismatch {
        bound: BoundVector,
        found: usize,
        expected: usize,
    },
    #[error("threshold vector must have at least one component")]
    EmptyThreshold,
    #[error("threshold vector must satisfy d_1 > ... > d_k > 0, violated at component {0}")]
    NotDecreasing(usize),
}

/// Threshold distances `d_1 > d_2 > ... > d_k > 0`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdVector(Vec<Rational>);

impl ThresholdVector {
    pub fn new(values: Vec<Rational>) -> Result<Self, FeasibilityError> {
        if values.is_empty() {
            return Err(FeasibilityError::EmptyThreshold);
        }
        for (i, pair) in values.windows(2).enumerate() {
            if pair[0] <= pair[1] {
                return Err(FeasibilityError::NotDecreasing(i + 2));
            }
        }
        if !values.last().is_some_and(Signed::is_positive) {
            return Err(FeasibilityError::NotDecreasing(values.len()));
        }
        Ok(ThresholdVector(values))
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, FeasibilityError> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// `d_t` for 1-based `t`.
    pub fn get(&self, t: usize) -> &Rational {
        &self.0[t - 1]
    }

    pub fn last(&self) -> &Rational {
        self.0.last().expect("non-empty by construction")
    }

    /// Strict upper limit on the gap of a pair at level `t`: `d_t`, or
    /// `None` (infinity) for `t = 0`.
    pub fn upper(&self, t: u32) -> Option<&Rational> {
        (t > 0).then(|| self.get(t as usize))
    }

    /// Strict lower limit on the gap of a pair at level `t`: `d_{t+1}`, or 0
    /// for `t = k`.
    pub fn lower(&self, t: u32) -> Rational {
        if t as usize >= self.k() {
            Rational::zero()
        } else {
            self.get(t as usize + 1).clone()
        }
    }

    /// Smallest of the gaps `d_i - d_{i+1}` and `d_k`.
    pub fn min_gap(&self) -> Rational {
        let mut gap = self.last().clone();
        for w in self.0.windows(2) {
            let g = &w[0] - &w[1];
            if g < gap {
                gap = g;
            }
        }
        gap
    }

    pub fn scaled(&self, factor: &Rational) -> ThresholdVector {
        ThresholdVector(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for ThresholdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// Why a certificate's cycles admit no threshold vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conflict {
    /// One cycle with `a_2 = 0` and `a_1 <= 0`: `a . d > 0` fails for all `d`.
    DegenerateCycle,
    /// The largest lower bound on `d_2 / d_1` is not below the smallest upper
    /// bound. The ordering `0 < d_2 / d_1 < 1` supplies the defaults.
    RatioBounds { lower: Rational, upper: Rational },
    /// Elimination derives `0 > 0` from these cycles and `d_1 > ... > d_k > 0`.
    Elimination,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::DegenerateCycle => f.write_str("a single cycle bound is never positive"),
            Conflict::RatioBounds { lower, upper } => write!(
                f,
                "largest lower bound {} on d2/d1 is not below smallest upper bound {}",
                format_rational(lower),
                format_rational(upper)
            ),
            Conflict::Elimination => {
                f.write_str("eliminating d derives 0 > 0 from these cycle inequalities")
            }
        }
    }
}

/// One or two cycles whose inequalities `β⁺(C) . d > 0` are jointly
/// unsatisfiable over decreasing positive `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub cycles: Vec<CycleRecord>,
    pub conflict: Conflict,
}

impl InfeasibilityCertificate {
    /// Re-derives infeasibility from the cited cycles alone.
    pub fn recheck(&self, k: usize) -> bool {
        matches!(
            solve_general_k(&self.cycles, k),
            Ok(Feasibility::Infeasible(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(ThresholdVector),
    Infeasible(InfeasibilityCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Open window for `d_2 / d_1` implied by a set of `k = 2` cycles, with the
/// cycles that attain each end (`None` when the end comes from the ordering
/// constraint `0 < d_2 / d_1 < 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioWindow {
    pub lower: Rational,
    pub lower_cycle: Option<usize>,
    pub upper: Rational,
    pub upper_cycle: Option<usize>,
    /// First cycle with `a_2 = 0` and `a_1 <= 0`, if any.
    pub degenerate: Option<usize>,
}

impl RatioWindow {
    pub fn is_open(&self) -> bool {
        self.degenerate.is_none() && self.lower < self.upper
    }
}

fn check_levels(cycles: &[CycleRecord], k: usize) -> Result<(), FeasibilityError> {
    match cycles.iter().find(|c| c.bound.k() != k) {
        Some(c) => Err(FeasibilityError::LevelMismatch {
            bound: c.bound.clone(),
            found: c.bound.k(),
            expected: k,
        }),
        None => Ok(()),
    }
}

/// Intersects the ratio constraints: `a_2 > 0` gives `d_2/d_1 > -a_1/a_2`,
/// `a_2 < 0` gives `d_2/d_1 < -a_1/a_2`. First attaining cycle wins ties.
pub fn ratio_window(cycles: &[CycleRecord]) -> Result<RatioWindow, FeasibilityError> {
    if let Some(c) = cycles.iter().find(|c| c.bound.k() != 2) {
        return Err(FeasibilityError::NotTwoLevels(c.bound.k()));
    }
    let mut window = RatioWindow {
        lower: Rational::zero(),
        lower_cycle: None,
        upper: Rational::one(),
        upper_cycle: None,
        degenerate: None,
    };
    for (idx, c) in cycles.iter().enumerate() {
        let (a1, a2) = (
            i64::from(c.bound.coeffs()[0]),
            i64::from(c.bound.coeffs()[1]),
        );
        if a2 == 0 {
            if a1 <= 0 && window.degenerate.is_none() {
                window.degenerate = Some(idx);
            }
            continue;
        }
        let limit = Rational::new((-a1).into(), a2.into());
        if a2 > 0 {
            if limit > window.lower {
                window.lower = limit;
                window.lower_cycle = Some(idx);
            }
        } else if limit < window.upper {
            window.upper = limit;
            window.upper_cycle = Some(idx);
        }
    }
    Ok(window)
}

/// Combinatorial decision for `k = 2`: feasible iff the ratio window is open,
/// in which case `d = (1, midpoint)`.
pub fn solve_ratio_k2(cycles: &[CycleRecord]) -> Result<Feasibility, FeasibilityError> {
    let window = ratio_window(cycles)?;
    if let Some(idx) = window.degenerate {
        return Ok(Feasibility::Infeasible(InfeasibilityCertificate {
            cycles: vec![cycles[idx].clone()],
            conflict: Conflict::DegenerateCycle,
        }));
    }
    if window.lower < window.upper {
        let mid = (&window.lower + &window.upper) / int(2);
        let d = ThresholdVector::new(vec![Rational::one(), mid]).expect("midpoint lies in (0, 1)");
        return Ok(Feasibility::Feasible(d));
    }
    let cited: Vec<CycleRecord> = [window.lower_cycle, window.upper_cycle]
        .into_iter()
        .flatten()
        .map(|i| cycles[i].clone())
        .collect();
    Ok(Feasibility::Infeasible(InfeasibilityCertificate {
        cycles: cited,
        conflict: Conflict::RatioBounds {
            lower: window.lower,
            upper: window.upper,
        },
    }))
}

/// Rows of the strict system: cycles first, then `d_i - d_{i+1} > 0` and
/// `d_k > 0`.
fn system_rows(bounds: &[&BoundVector], k: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = bounds
        .iter()
        .map(|b| b.coeffs().iter().map(|&c| i64::from(c)).collect())
        .collect();
    for i in 0..k {
        let mut row = vec![0i64; k];
        row[i] = 1;
        if i + 1 < k {
            row[i + 1] = -1;
        }
        rows.push(row);
    }
    rows
}

fn eliminate(bounds: &[&BoundVector], k: usize) -> StrictOutcome {
    let order: Vec<usize> = (0..k).collect();
    solve_strict(&system_rows(bounds, k), k, &order)
}

/// Exact Fourier–Motzkin decision for any `k >= 1`.
///
/// Dominated cycle bounds are dropped first. A feasible answer is scaled so
/// its smallest gap (`d_i - d_{i+1}` or `d_k`) is exactly 1. An infeasible
/// answer cites the cycles traced from the contradiction, greedily thinned
/// while infeasibility persists.
pub fn solve_general_k(cycles: &[CycleRecord], k: usize) -> Result<Feasibility, FeasibilityError> {
    check_levels(cycles, k)?;
    if k == 0 {
        return Err(FeasibilityError::EmptyThreshold);
    }
    let mut seen = std::collections::HashSet::new();
    let candidates: Vec<&CycleRecord> = minimal_elements(cycles.iter().collect(), |c| &c.bound)
        .into_iter()
        .filter(|c| seen.insert(c.bound.clone()))
        .collect();
    let bounds: Vec<&BoundVector> = candidates.iter().map(|c| &c.bound).collect();

    match eliminate(&bounds, k) {
        StrictOutcome::Feasible(point) => {
            let d = ThresholdVector::new(point).expect("ordering rows force a decreasing point");
            let gap = d.min_gap();
            Ok(Feasibility::Feasible(d.scaled(&(Rational::one() / gap))))
        }
        StrictOutcome::Infeasible(sources) => {
            let mut keep: Vec<usize> = sources.into_iter().filter(|&s| s < bounds.len()).collect();
            let mut i = 0;
            while i < keep.len() {
                let trial: Vec<&BoundVector> = keep
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &s)| bounds[s])
                    .collect();
                if matches!(eliminate(&trial, k), StrictOutcome::Infeasible(_)) {
                    keep.remove(i);
                } else {
                    i += 1;
                }
            }
            Ok(Feasibility::Infeasible(InfeasibilityCertificate {
                cycles: keep.into_iter().map(|s| candidates[s].clone()).collect(),
                conflict: Conflict::Elimination,
            }))
        }
    }
}

/// True when `β⁺(C) . d > 0` for every cycle.
pub fn satisfies_cycles(cycles: &[CycleRecord], d: &ThresholdVector) -> bool {
    cycles.iter().all(|c| c.bound.dot(d).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn cyc(a: &[i32]) -> CycleRecord {
        CycleRecord {
            bound: BoundVector::new(a.to_vec()),
            vertices: vec![0, 1, 0],
        }
    }

    #[test]
    fn threshold_vector_invariants() {
        assert!(ThresholdVector::from_integers(&[8, 6]).is_ok());
        assert_eq!(
            ThresholdVector::from_integers(&[6, 6]).unwrap_err(),
            FeasibilityError::NotDecreasing(2)
        );
        assert_eq!(
            ThresholdVector::from_integers(&[3, 0]).unwrap_err(),
            FeasibilityError::NotDecreasing(2)
        );
        assert!(ThresholdVector::new(vec![]).is_err());
        let d = ThresholdVector::from_integers(&[8, 6]).unwrap();
        assert_eq!(d.upper(0), None);
        assert_eq!(d.upper(1), Some(&int(8)));
        assert_eq!(d.lower(2), int(0));
        assert_eq!(d.lower(0), int(8));
        assert_eq!(d.min_gap(), int(2));
    }

    #[test]
    fn empty_cycle_list() {
        assert_eq!(
            solve_ratio_k2(&[]).unwrap(),
            Feasibility::Feasible(ThresholdVector::new(vec![int(1), ratio(1, 2)]).unwrap())
        );
        assert_eq!(
            solve_general_k(&[], 1).unwrap(),
            Feasibility::Feasible(ThresholdVector::from_integers(&[1]).unwrap())
        );
    }

    #[test]
    fn ratio_window_examples() {
        let cycles = [cyc(&[-1, 3]), cyc(&[1, -1]), cyc(&[2, 0])];
        let w = ratio_window(&cycles).unwrap();
        assert_eq!((w.lower.clone(), w.upper.clone()), (ratio(1, 3), int(1)));
        assert_eq!(w.lower_cycle, Some(0));
        assert_eq!(w.upper_cycle, None);
        assert_eq!(
            solve_ratio_k2(&cycles).unwrap(),
            Feasibility::Feasible(ThresholdVector::new(vec![int(1), ratio(2, 3)]).unwrap())
        );
    }

    #[test]
    fn degenerate_cycle_certificate() {
        let cycles = [cyc(&[1, 1]), cyc(&[0, 0])];
        let Feasibility::Infeasible(cert) = solve_ratio_k2(&cycles).unwrap() else {
            panic!()
        };
        assert_eq!(cert.conflict, Conflict::DegenerateCycle);
        assert_eq!(cert.cycles, vec![cyc(&[0, 0])]);
        assert!(cert.recheck(2));
    }

    #[test]
    fn crossing_ratio_bounds() {
        // d2/d1 > 2/3 and d2/d1 < 1/2.
        let cycles = [cyc(&[-2, 3]), cyc(&[1, -2])];
        let Feasibility::Infeasible(cert) = solve_ratio_k2(&cycles).unwrap() else {
            panic!()
        };
        assert_eq!(cert.cycles.len(), 2);
        assert_eq!(
            cert.conflict,
            Conflict::RatioBounds {
                lower: ratio(2, 3),
                upper: ratio(1, 2)
            }
        );
        assert!(cert.recheck(2));
        let Feasibility::Infeasible(general) = solve_general_k(&cycles, 2).unwrap() else {
            panic!()
        };
        assert_eq!(general.cycles.len(), 2);
    }

    #[test]
    fn single_cycle_against_ordering() {
        // -a1/a2 = 1: needs d2 > d1.
        let cycles = [cyc(&[-1, 1])];
        let Feasibility::Infeasible(cert) = solve_ratio_k2(&cycles).unwrap() else {
            panic!()
        };
        assert_eq!(cert.cycles, vec![cyc(&[-1, 1])]);
        assert!(cert.recheck(2));
    }

    #[test]
    fn general_k_feasible_point_is_sound_and_scaled() {
        let cycles = [cyc(&[-1, 3, 0]), cyc(&[0, -1, 3]), cyc(&[1, -2, 0])];
        let Feasibility::Feasible(d) = solve_general_k(&cycles, 3).unwrap() else {
            panic!()
        };
        assert!(satisfies_cycles(&cycles, &d));
        assert_eq!(d.min_gap(), int(1));
    }

    #[test]
    fn k1_requires_positive_coefficient() {
        assert!(solve_general_k(&[cyc(&[2])], 1).unwrap().is_feasible());
        assert!(!solve_general_k(&[cyc(&[0])], 1).unwrap().is_feasible());
        assert!(!solve_general_k(&[cyc(&[-1])], 1).unwrap().is_feasible());
    }

    #[test]
    fn rejects_wrong_level_count() {
        assert_eq!(
            solve_ratio_k2(&[cyc(&[1, 0, 0])]).unwrap_err(),
            FeasibilityError::NotTwoLevels(3)
        );
        assert!(matches!(
            solve_general_k(&[cyc(&[1, 0])], 3).unwrap_err(),
            FeasibilityError::LevelMismatch {
                found: 2,
                expected: 3,
                ..
            }
        ));
    }
}
