//! The end-to-end pipeline: collapse repeated rows, generate bounds, extract
//! cycles, decide thresholds, construct, expand and verify.

use crate::embed::{construct_embedding, verify_embedding, EmbedError, Embedding, Violation};
use crate::feasibility::{
    solve_general_k, solve_ratio_k2, Feasibility, FeasibilityError, InfeasibilityCertificate,
    ThresholdVector,
};
use crate::matrix::{expand_embedding, reduce_repeated_rows, ReductionError, RobinsonMatrix};
use crate::pathgen::{generate_bound_tables, CycleRecord};

/// Which decision procedure handles the cycle system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Ratio window for `k = 2`, elimination otherwise.
    #[default]
    Auto,
    Ratio,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub d: ThresholdVector,
    pub pi: Embedding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible(Solution),
    /// Certificate cycles use the vertices of the input matrix.
    Infeasible(InfeasibilityCertificate),
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible(_))
    }
}

/// Errors from the pipeline. Everything except [`SolveError::Method`] is a
/// broken internal invariant.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Method(FeasibilityError),
    #[error("internal: {0}")]
    Reduction(#[from] ReductionError),
    #[error("internal: construction failed for thresholds accepted by the solver: {0}")]
    Construction(EmbedError),
    #[error("internal: constructed embedding fails verification: {0}")]
    Verification(Violation),
}

/// Decides the cycle system with `method`.
pub fn decide(
    cycles: &[CycleRecord],
    k: u32,
    method: Method,
) -> Result<Feasibility, FeasibilityError> {
    let ratio = match method {
        Method::Auto => k == 2,
        Method::Ratio => true,
        Method::General => false,
    };
    if ratio {
        if k != 2 {
            return Err(FeasibilityError::NotTwoLevels(k as usize));
        }
        solve_ratio_k2(cycles)
    } else {
        solve_general_k(cycles, k as usize)
    }
}

pub fn solve(m: &RobinsonMatrix, method: Method) -> Result<SolveOutcome, SolveError> {
    let reduction = reduce_repeated_rows(m)?;
    let reduced = &reduction.reduced;
    let table = generate_bound_tables(reduced);
    let cycles = table.extract_cycles();
    let d = match decide(&cycles, m.k(), method).map_err(SolveError::Method)? {
        Feasibility::Feasible(d) => d,
        Feasibility::Infeasible(cert) => {
            let cycles = cert
                .cycles
                .iter()
                .map(|c| c.relabel(|v| reduction.representatives[v]))
                .collect();
            return Ok(SolveOutcome::Infeasible(InfeasibilityCertificate {
                cycles,
                conflict: cert.conflict,
            }));
        }
    };
    let reduced_pi = construct_embedding(reduced, &d, &table).map_err(SolveError::Construction)?;
    let pi = expand_embedding(&reduction, &reduced_pi, &d).map_err(SolveError::Construction)?;
    verify_embedding(m, &d, &pi).map_err(SolveError::Verification)?;
    Ok(SolveOutcome::Feasible(Solution { d, pi }))
}

/// Constructs an embedding for user-supplied thresholds through the same
/// reduce, construct and expand steps as [`solve`].
pub fn embed_with_thresholds(
    m: &RobinsonMatrix,
    d: &ThresholdVector,
) -> Result<Embedding, SolveError> {
    if d.k() != m.k() as usize {
        return Err(SolveError::Construction(EmbedError::Levels {
            expected: m.k() as usize,
            found: d.k(),
        }));
    }
    let reduction = reduce_repeated_rows(m)?;
    let table = generate_bound_tables(&reduction.reduced);
    let reduced_pi =
        construct_embedding(&reduction.reduced, d, &table).map_err(SolveError::Construction)?;
    let pi = expand_embedding(&reduction, &reduced_pi, d).map_err(SolveError::Construction)?;
    verify_embedding(m, d, &pi).map_err(SolveError::Verification)?;
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::fixtures::{a, b};
    use crate::matrix::parse_matrix;
    use crate::rational::{int, ratio};

    #[test]
    fn matrix_a_is_feasible_both_ways() {
        let a = a();
        for method in [Method::Auto, Method::Ratio, Method::General] {
            match solve(&a, method).unwrap() {
                SolveOutcome::Feasible(s) => {
                    assert_eq!(verify_embedding(&a, &s.d, &s.pi), Ok(()));
                    let r = s.d.get(2) / s.d.get(1);
                    assert!(r > ratio(1, 3) && r < int(1));
                }
                other => panic!("{method:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn matrix_b_certificate_rechecks() {
        let b = b();
        for method in [Method::Auto, Method::General] {
            match solve(&b, method).unwrap() {
                SolveOutcome::Infeasible(cert) => assert!(cert.recheck(2), "{cert:?}"),
                other => panic!("{other:?}"),
            }
        }
        let SolveOutcome::Infeasible(cert) = solve(&b, Method::Ratio).unwrap() else {
            panic!("B is infeasible")
        };
        assert!(cert.cycles.iter().any(|c| c.bound.is_zero()));
    }

    #[test]
    fn single_vertex() {
        let m = parse_matrix("1 2\n2\n").unwrap();
        let SolveOutcome::Feasible(s) = solve(&m, Method::Auto).unwrap() else {
            panic!("one vertex always embeds")
        };
        assert_eq!(s.pi.values(), &[int(0)]);
    }

    #[test]
    fn ratio_needs_two_levels() {
        let m = parse_matrix("2 3\n3 1\n1 3\n").unwrap();
        assert_eq!(
            solve(&m, Method::Ratio),
            Err(SolveError::Method(FeasibilityError::NotTwoLevels(3)))
        );
    }

    #[test]
    fn user_thresholds_embed_or_report_the_cycle() {
        let a = a();
        let d = ThresholdVector::from_integers(&[8, 6]).unwrap();
        let pi = embed_with_thresholds(&a, &d).unwrap();
        assert_eq!(verify_embedding(&a, &d, &pi), Ok(()));
        let bad = ThresholdVector::from_integers(&[8, 2]).unwrap();
        assert!(matches!(
            embed_with_thresholds(&a, &bad),
            Err(SolveError::Construction(EmbedError::CycleViolated(_)))
        ));
    }

    #[test]
    fn duplicated_rows_expand() {
        let m = parse_matrix("4 2\n2 2 2 1\n2 2 2 1\n2 2 2 2\n1 1 2 2\n").unwrap();
        let SolveOutcome::Feasible(s) = solve(&m, Method::Auto).unwrap() else {
            panic!("planted-style matrix embeds")
        };
        assert_eq!(s.pi.len(), 4);
        assert!(s.pi.is_strictly_increasing());
    }
}
