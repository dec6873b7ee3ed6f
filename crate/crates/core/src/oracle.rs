//! Brute-force references for small instances, and the constructive
//! procedures behind the equivalence of `⪯` with dominance over all
//! threshold vectors.
//!
//! Nothing here is meant to scale. Size guards are hard errors.

use num_traits::Zero;

use crate::bounds::{lower_step, minimal_elements, upper_step, BoundError, BoundVector, WalkKind};
use crate::elimination::{solve_strict, StrictOutcome};
use crate::embed::Embedding;
use crate::feasibility::ThresholdVector;
use crate::matrix::RobinsonMatrix;
use crate::pathgen::{BoundPath, CycleRecord};
use crate::rational::{int, Rational};

pub const PATH_GUARD_N: usize = 10;
pub const DIRECT_GUARD_N: usize = 7;
pub const DIRECT_GUARD_K: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("brute force is limited to n <= {limit}, got n = {n}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("direct feasibility is limited to k <= {limit}, got k = {k}")]
    TooManyLevels { k: u32, limit: u32 },
    #[error("path enumeration needs distinct endpoints, got {} twice; use cycle enumeration", .0 + 1)]
    SameEndpoints(usize),
    #[error("vertex {} is outside the matrix", .0 + 1)]
    VertexOutOfRange(usize),
    #[error("{a} ⪯ {b}, so no threshold vector separates them")]
    NotSeparable { a: BoundVector, b: BoundVector },
    #[error("{a} ⪯ {b} does not hold, so no buffer vector exists")]
    NotOrdered { a: BoundVector, b: BoundVector },
    #[error(transparent)]
    Bound(#[from] BoundError),
}

fn guard_n(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        return Err(OracleError::TooManyVertices { n, limit });
    }
    Ok(())
}

fn step(m: &RobinsonMatrix, kind: WalkKind, u: usize, v: usize) -> Option<BoundVector> {
    match kind {
        WalkKind::Upper => upper_step(m, u, v),
        WalkKind::Lower => lower_step(m, u, v),
    }
}

/// Depth-first search over simple legal paths that stay inside `allowed`,
/// recording each one that reaches `target`.
#[allow(clippy::too_many_arguments)]
fn dfs(
    m: &RobinsonMatrix,
    kind: WalkKind,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    bound: &BoundVector,
    allowed: &dyn Fn(usize) -> bool,
    target: usize,
    out: &mut Vec<BoundPath>,
) {
    let u = *path.last().expect("non-empty path");
    for v in 0..m.n() {
        if v == u || (on_path[v] && v != target) || !allowed(v) {
            continue;
        }
        let Some(b) = step(m, kind, u, v) else {
            continue;
        };
        let next = bound + &b;
        path.push(v);
        if v == target {
            out.push(BoundPath {
                bound: next,
                vertices: path.clone(),
            });
        } else {
            on_path[v] = true;
            dfs(m, kind, path, on_path, &next, allowed, target, out);
            on_path[v] = false;
        }
        path.pop();
    }
}

/// Every simple legal path from `u` to `v`, unfiltered, sorted by bound and
/// then by vertex sequence.
pub fn all_paths_bruteforce(
    m: &RobinsonMatrix,
    u: usize,
    v: usize,
    kind: WalkKind,
) -> Result<Vec<BoundPath>, OracleError> {
    guard_n(m.n(), PATH_GUARD_N)?;
    for x in [u, v] {
        if x >= m.n() {
            return Err(OracleError::VertexOutOfRange(x));
        }
    }
    if u == v {
        return Err(OracleError::SameEndpoints(u));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; m.n()];
    on_path[u] = true;
    let mut path = vec![u];
    let zero = BoundVector::zero(m.k() as usize);
    dfs(
        m,
        kind,
        &mut path,
        &mut on_path,
        &zero,
        &|_| true,
        v,
        &mut out,
    );
    out.sort();
    Ok(out)
}

/// The extremal bounds over all simple legal paths from `u` to `v`: the
/// ⪯-minimal ones for upper-bound-paths and the ⪯-maximal ones for
/// lower-bound-paths. Each bound keeps its lexicographically smallest path.
pub fn enumerate_paths_bruteforce(
    m: &RobinsonMatrix,
    u: usize,
    v: usize,
    kind: WalkKind,
) -> Result<Vec<BoundPath>, OracleError> {
    let all = all_paths_bruteforce(m, u, v, kind)?;
    Ok(match kind {
        WalkKind::Upper => minimal_elements(all, |p| &p.bound),
        WalkKind::Lower => {
            let negated: Vec<(BoundVector, BoundPath)> =
                all.into_iter().map(|p| (-&p.bound, p)).collect();
            let mut out: Vec<BoundPath> = minimal_elements(negated, |(nb, _)| nb)
                .into_iter()
                .map(|(_, p)| p)
                .collect();
            out.sort();
            out
        }
    })
}

/// Every simple upper-bound-cycle, each listed once from its smallest vertex,
/// sorted.
pub fn enumerate_cycles_bruteforce(m: &RobinsonMatrix) -> Result<Vec<CycleRecord>, OracleError> {
    guard_n(m.n(), PATH_GUARD_N)?;
    let zero = BoundVector::zero(m.k() as usize);
    let mut found = Vec::new();
    for s in 0..m.n() {
        let mut on_path = vec![false; m.n()];
        on_path[s] = true;
        let mut path = vec![s];
        let mut out = Vec::new();
        dfs(
            m,
            WalkKind::Upper,
            &mut path,
            &mut on_path,
            &zero,
            &|v| v >= s,
            s,
            &mut out,
        );
        found.extend(out.into_iter().map(|p| CycleRecord {
            bound: p.bound,
            vertices: p.vertices,
        }));
    }
    found.sort();
    Ok(found)
}

/// The ⪯-minimal cycles among [`enumerate_cycles_bruteforce`].
pub fn minimal_cycles_bruteforce(m: &RobinsonMatrix) -> Result<Vec<CycleRecord>, OracleError> {
    Ok(minimal_elements(enumerate_cycles_bruteforce(m)?, |c| {
        &c.bound
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectOutcome {
    Feasible { d: ThresholdVector, pi: Embedding },
    Infeasible,
}

impl DirectOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, DirectOutcome::Feasible { .. })
    }
}

/// Decides the full strict system over the unknowns `Pi(2..n)` and `d`:
/// `d_{t+1} < Pi(v) - Pi(u) < d_t` for every `u < v` at level `t`, plus
/// `d_1 > ... > d_k > 0`, with `Pi(1) = 0`.
pub fn direct_feasibility(m: &RobinsonMatrix) -> Result<DirectOutcome, OracleError> {
    guard_n(m.n(), DIRECT_GUARD_N)?;
    if m.k() > DIRECT_GUARD_K {
        return Err(OracleError::TooManyLevels {
            k: m.k(),
            limit: DIRECT_GUARD_K,
        });
    }
    let n = m.n();
    let k = m.k() as usize;
    // Columns 0..n-1 hold Pi(2..n); column n-1+t-1 holds d_t.
    let vars = n - 1 + k;
    let pi_col = |v: usize| (v > 0).then(|| v - 1);
    let d_col = |t: usize| n + t - 2;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let t = m.get(u, v) as usize;
            let mut gap = vec![0i64; vars];
            gap[pi_col(v).expect("v > 0")] += 1;
            if let Some(c) = pi_col(u) {
                gap[c] -= 1;
            }
            let mut above = gap.clone();
            if t < k {
                above[d_col(t + 1)] -= 1;
            }
            rows.push(above);
            if t > 0 {
                let mut below: Vec<i64> = gap.iter().map(|x| -x).collect();
                below[d_col(t)] += 1;
                rows.push(below);
            }
        }
    }
    for t in 1..=k {
        let mut row = vec![0i64; vars];
        row[d_col(t)] = 1;
        if t < k {
            row[d_col(t + 1)] = -1;
        }
        rows.push(row);
    }
    let order: Vec<usize> = (0..vars).collect();
    Ok(match solve_strict(&rows, vars, &order) {
        StrictOutcome::Infeasible(_) => DirectOutcome::Infeasible,
        StrictOutcome::Feasible(x) => {
            let d = ThresholdVector::new(x[n - 1..].to_vec()).expect("ordering rows hold strictly");
            let mut pi = vec![Rational::zero()];
            pi.extend_from_slice(&x[..n - 1]);
            DirectOutcome::Feasible {
                d,
                pi: Embedding::new(pi),
            }
        }
    })
}

fn prefix_sums(a: &BoundVector) -> Vec<i64> {
    a.coeffs()
        .iter()
        .scan(0i64, |acc, &x| {
            *acc += i64::from(x);
            Some(*acc)
        })
        .collect()
}

/// A threshold vector `d` with `a . d > b . d`, given that `a ⪯ b` fails.
///
/// Writes `d_i = λ_i + ... + λ_k` with every `λ_j > 0`, so that
/// `(a - b) . d = Σ_j λ_j (P_j(a) - P_j(b))` over prefix sums `P_j`. At the
/// first index `t` where `P_t(a) > P_t(b)`, `λ_t` outweighs the total
/// deficit of the other prefixes, and every other `λ_j` is 1.
pub fn separating_threshold(
    a: &BoundVector,
    b: &BoundVector,
) -> Result<ThresholdVector, OracleError> {
    if a.precedes(b)? {
        return Err(OracleError::NotSeparable {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let (pa, pb) = (prefix_sums(a), prefix_sums(b));
    let t = (0..pa.len())
        .find(|&j| pa[j] > pb[j])
        .expect("a prefix sum of a exceeds b's");
    let deficit: i64 = (0..pa.len())
        .filter(|&j| j != t)
        .map(|j| (pb[j] - pa[j]).max(0))
        .sum();
    let lambda: Vec<i64> = (0..pa.len())
        .map(|j| if j == t { deficit + 1 } else { 1 })
        .collect();
    let d: Vec<Rational> = (0..lambda.len())
        .map(|i| int(lambda[i..].iter().sum()))
        .collect();
    Ok(ThresholdVector::new(d).expect("positive increments give a decreasing vector"))
}

/// The buffer vector `c` with `a . d <= c . d <= b . d` for every threshold
/// vector, built by moving each excess `a_t - b_t` onto earlier components
/// up to their room `b_i - c_i`, leftmost first.
pub fn buffer_vector(a: &BoundVector, b: &BoundVector) -> Result<BoundVector, OracleError> {
    if !a.precedes(b)? {
        return Err(OracleError::NotOrdered {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let (a, b) = (a.coeffs(), b.coeffs());
    let mut c: Vec<i32> = Vec::with_capacity(a.len());
    for t in 0..a.len() {
        let excess = (a[t] - b[t]).max(0);
        let mut f = excess;
        for i in 0..t {
            let e = f.min(b[i] - c[i]);
            f -= e;
            c[i] += e;
        }
        debug_assert_eq!(f, 0, "a ⪯ b leaves no excess unplaced");
        c.push(a[t] - excess);
    }
    Ok(BoundVector::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::verify_embedding;
    use crate::matrix::fixtures::{a, b};
    use crate::matrix::parse_matrix;

    fn bv(c: &[i32]) -> BoundVector {
        BoundVector::new(c.to_vec())
    }

    fn bounds(paths: &[BoundPath]) -> Vec<BoundVector> {
        paths.iter().map(|p| p.bound.clone()).collect()
    }

    #[test]
    fn paths_of_a() {
        let a = a();
        let p15 = enumerate_paths_bruteforce(&a, 0, 4, WalkKind::Upper).unwrap();
        assert_eq!(bounds(&p15), vec![bv(&[0, 4]), bv(&[1, 1])]);
        let p12 = enumerate_paths_bruteforce(&a, 0, 1, WalkKind::Upper).unwrap();
        assert_eq!(bounds(&p12), vec![bv(&[0, 1])]);
        assert_eq!(p12[0].vertices, vec![0, 1]);
    }

    #[test]
    fn lower_paths_are_reversed_upper_paths() {
        let a = a();
        for u in 0..5 {
            for v in 0..5 {
                if u == v {
                    continue;
                }
                let lower = enumerate_paths_bruteforce(&a, u, v, WalkKind::Lower).unwrap();
                let upper = enumerate_paths_bruteforce(&a, v, u, WalkKind::Upper).unwrap();
                let mut negated: Vec<BoundVector> = upper.iter().map(|p| -&p.bound).collect();
                negated.sort();
                assert_eq!(bounds(&lower), negated);
            }
        }
    }

    #[test]
    fn degenerate_and_oversized_requests() {
        let a = a();
        assert_eq!(
            enumerate_paths_bruteforce(&a, 2, 2, WalkKind::Upper),
            Err(OracleError::SameEndpoints(2))
        );
        let big = parse_matrix(&format!("11 1\n{}", "1 1 1 1 1 1 1 1 1 1 1\n".repeat(11))).unwrap();
        assert!(matches!(
            enumerate_paths_bruteforce(&big, 0, 1, WalkKind::Upper),
            Err(OracleError::TooManyVertices { n: 11, .. })
        ));
        assert!(matches!(
            direct_feasibility(&big),
            Err(OracleError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn cycles_of_b_include_zero_bound() {
        let cycles = enumerate_cycles_bruteforce(&b()).unwrap();
        let zero = cycles
            .iter()
            .find(|c| c.vertices == vec![0, 1, 5, 3, 0])
            .expect("cycle 1-2-6-4-1");
        assert!(zero.bound.is_zero());
    }

    #[test]
    fn direct_on_examples() {
        let a = a();
        match direct_feasibility(&a).unwrap() {
            DirectOutcome::Feasible { d, pi } => assert_eq!(verify_embedding(&a, &d, &pi), Ok(())),
            DirectOutcome::Infeasible => panic!("A has an embedding"),
        }
        assert_eq!(direct_feasibility(&b()).unwrap(), DirectOutcome::Infeasible);
        let twin = parse_matrix("2 3\n3 3\n3 3\n").unwrap();
        match direct_feasibility(&twin).unwrap() {
            DirectOutcome::Feasible { d, pi } => {
                assert!(pi.values()[1] > Rational::zero() && pi.values()[1] < *d.last());
            }
            DirectOutcome::Infeasible => panic!("two equal rows always embed"),
        }
        let single = parse_matrix("1 2\n2\n").unwrap();
        assert!(direct_feasibility(&single).unwrap().is_feasible());
    }

    #[test]
    fn separating_examples() {
        let d = separating_threshold(&bv(&[2, 0]), &bv(&[1, 1])).unwrap();
        assert_eq!(d, ThresholdVector::from_integers(&[2, 1]).unwrap());
        let (a, b) = (bv(&[0, 2]), bv(&[1, 0]));
        let d = separating_threshold(&a, &b).unwrap();
        assert!(a.dot(&d) > b.dot(&d));
        // d = (4, 3) from the ratio interval (1/2, 1) separates as well.
        let d43 = ThresholdVector::new(vec![int(4), int(3)]).unwrap();
        assert_eq!((a.dot(&d43), b.dot(&d43)), (int(6), int(4)));
        assert!(matches!(
            separating_threshold(&bv(&[1, 1]), &bv(&[1, 1])),
            Err(OracleError::NotSeparable { .. })
        ));
    }

    #[test]
    fn separating_when_first_coordinate_is_behind() {
        let (a, b) = (bv(&[-2, 2, 1]), bv(&[0, 0, 0]));
        let d = separating_threshold(&a, &b).unwrap();
        assert!(a.dot(&d) > b.dot(&d), "d = {d}");
    }

    #[test]
    fn buffer_examples() {
        assert_eq!(
            buffer_vector(&bv(&[3, 1, 1, 5]), &bv(&[4, 2, 3, 2])).unwrap(),
            bv(&[4, 2, 2, 2])
        );
        assert_eq!(
            buffer_vector(&bv(&[0, 2]), &bv(&[1, 1])).unwrap(),
            bv(&[1, 1])
        );
        assert_eq!(
            buffer_vector(&bv(&[2, -1, 3]), &bv(&[2, -1, 3])).unwrap(),
            bv(&[2, -1, 3])
        );
        assert!(matches!(
            buffer_vector(&bv(&[2, 0]), &bv(&[1, 1])),
            Err(OracleError::NotOrdered { .. })
        ));
    }
}
