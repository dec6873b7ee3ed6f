//! Fourier–Motzkin elimination for homogeneous systems of strict
//! inequalities `c . x > 0` with integer coefficients.
//!
//! Every derived row remembers which input rows it came from, which gives
//! both Chernikov pruning (a row built from more than `e + 1` inputs after
//! `e` eliminations is redundant) and the trace for infeasibility
//! certificates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    coeffs: Vec<BigInt>,
    sources: Vec<u64>,
}

impl Row {
    fn source_count(&self) -> u32 {
        self.sources.iter().map(|w| w.count_ones()).sum()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn normalize(&mut self) {
        let g = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
        }
    }
}

/// Result of [`solve_strict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictOutcome {
    /// A point satisfying every inequality strictly.
    Feasible(Vec<BigRational>),
    /// Indices of input rows whose positive combination is `0 > 0`.
    Infeasible(Vec<usize>),
}

/// Decides `{ rows[r] . x > 0 }` over `vars` unknowns, eliminating variables
/// in `order` (which must list every variable once). On success the point is
/// built by back-substitution: each variable takes the midpoint of its open
/// interval, `lower + 1` if unbounded above, `upper - 1` if unbounded below.
pub fn solve_strict(rows: &[Vec<i64>], vars: usize, order: &[usize]) -> StrictOutcome {
    assert_eq!(
        order.len(),
        vars,
        "elimination order must cover all variables"
    );
    let words = rows.len().div_ceil(64).max(1);
    let mut current: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(r, c)| {
            assert_eq!(c.len(), vars);
            let mut sources = vec![0u64; words];
            sources[r / 64] |= 1 << (r % 64);
            let mut row = Row {
                coeffs: c.iter().map(|&x| BigInt::from(x)).collect(),
                sources,
            };
            row.normalize();
            row
        })
        .collect();
    current = dedup(current);

    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(vars);
    for (eliminated, &var) in order.iter().enumerate() {
        if let Some(bad) = current.iter().find(|r| r.is_zero()) {
            return StrictOutcome::Infeasible(source_list(&bad.sources));
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in &current {
            match row.coeffs[var].sign() {
                num_bigint::Sign::Plus => pos.push(row),
                num_bigint::Sign::Minus => neg.push(row),
                num_bigint::Sign::NoSign => rest.push(row.clone()),
            }
        }
        let limit = eliminated as u32 + 2;
        for p in &pos {
            for q in &neg {
                let mut sources = p.sources.clone();
                for (s, t) in sources.iter_mut().zip(&q.sources) {
                    *s |= t;
                }
                let count: u32 = sources.iter().map(|w| w.count_ones()).sum();
                if count > limit {
                    continue;
                }
                let (a, b) = (&p.coeffs[var], -&q.coeffs[var]);
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &b + y * a)
                    .collect();
                let mut row = Row { coeffs, sources };
                row.coeffs[var] = BigInt::zero();
                row.normalize();
                rest.push(row);
            }
        }
        stages.push(std::mem::replace(&mut current, dedup(rest)));
    }
    if let Some(bad) = current.iter().find(|r| r.is_zero()) {
        return StrictOutcome::Infeasible(source_list(&bad.sources));
    }

    let mut point: Vec<Option<BigRational>> = vec![None; vars];
    for (stage, &var) in stages.iter().zip(order).rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for row in stage {
            let c = &row.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let rest = row
                .coeffs
                .iter()
                .enumerate()
                .filter(|(j, x)| *j != var && !x.is_zero())
                .fold(BigRational::zero(), |acc, (j, x)| {
                    let value = point[j].clone().unwrap_or_else(BigRational::zero);
                    acc + value * BigRational::from_integer(x.clone())
                });
            let limit = -rest / BigRational::from_integer(c.clone());
            if c.is_positive() {
                if lower.as_ref().is_none_or(|l| limit > *l) {
                    lower = Some(limit);
                }
            } else if upper.as_ref().is_none_or(|u| limit < *u) {
                upper = Some(limit);
            }
        }
        let one = BigRational::one();
        let value = match (lower, upper) {
            (Some(l), Some(u)) => {
                debug_assert!(l < u, "empty interval after successful elimination");
                (l + u) / BigRational::from_integer(2.into())
            }
            (Some(l), None) => l + one,
            (None, Some(u)) => u - one,
            (None, None) => BigRational::zero(),
        };
        point[var] = Some(value);
    }
    StrictOutcome::Feasible(point.into_iter().map(Option::unwrap_or_default).collect())
}

/// Drops duplicate rows (same normalized coefficients), keeping the one
/// with the fewest sources.
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<BigInt>, usize> = HashMap::with_capacity(rows.len());
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for row in rows {
        match best.get(&row.coeffs) {
            Some(&at) => {
                if row.source_count() < out[at].source_count() {
                    out[at] = row;
                }
            }
            None => {
                best.insert(row.coeffs.clone(), out.len());
                out.push(row);
            }
        }
    }
    out
}

fn source_list(sources: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &bits) in sources.iter().enumerate() {
        for b in 0..64 {
            if bits >> b & 1 == 1 {
                out.push(w * 64 + b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn satisfies(rows: &[Vec<i64>], x: &[BigRational]) -> bool {
        rows.iter().all(|r| {
            r.iter().zip(x).fold(BigRational::zero(), |acc, (&c, v)| {
                acc + v * BigRational::from_integer(c.into())
            }) > BigRational::zero()
        })
    }

    #[test]
    fn single_variable() {
        assert_eq!(
            solve_strict(&[vec![1]], 1, &[0]),
            StrictOutcome::Feasible(vec![ratio(1, 1)])
        );
        assert_eq!(
            solve_strict(&[vec![1], vec![-2]], 1, &[0]),
            StrictOutcome::Infeasible(vec![0, 1])
        );
        assert_eq!(
            solve_strict(&[vec![0]], 1, &[0]),
            StrictOutcome::Infeasible(vec![0])
        );
    }

    #[test]
    fn ratio_window() {
        // x0 > x1 > 0 and -x0 + 3 x1 > 0, so x1 / x0 in (1/3, 1).
        let rows = vec![vec![1, -1], vec![0, 1], vec![-1, 3]];
        let StrictOutcome::Feasible(x) = solve_strict(&rows, 2, &[0, 1]) else {
            panic!("expected feasible")
        };
        assert!(satisfies(&rows, &x));
        assert_eq!(x, vec![ratio(2, 1), ratio(1, 1)]);
    }

    #[test]
    fn traces_minimal_contradiction() {
        // x0 > x1 > 0 with x1 - x0 > 0 is contradictory; the extra row is not involved.
        let rows = vec![vec![1, -1], vec![0, 1], vec![1, 1], vec![-1, 1]];
        match solve_strict(&rows, 2, &[0, 1]) {
            StrictOutcome::Infeasible(src) => assert_eq!(src, vec![0, 3]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_variables_feasible_point_checks() {
        let rows = vec![
            vec![1, -1, 0],
            vec![0, 1, -1],
            vec![0, 0, 1],
            vec![-1, 1, 1],
            vec![-1, 2, -1],
        ];
        match solve_strict(&rows, 3, &[0, 1, 2]) {
            StrictOutcome::Feasible(x) => assert!(satisfies(&rows, &x)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
