//! Random Robinson matrices for tests and the `gen` subcommand.
//!
//! Feasible instances come from quantizing a random embedding: thresholds
//! are odd integers and positions even, so no gap ever equals a threshold.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::embed::Embedding;
use crate::feasibility::ThresholdVector;
use crate::matrix::{validate_robinson, RobinsonMatrix};
use crate::rational::int;

/// Odd integers `d_1 > ... > d_k >= 1`.
pub fn random_thresholds<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<i64> {
    let mut d = vec![0i64; k];
    let mut x = 2 * rng.gen_range(0..4) + 1;
    for slot in d.iter_mut().rev() {
        *slot = x;
        x += 2 * rng.gen_range(1..=5);
    }
    d
}

/// Even, strictly increasing positions starting at 0.
pub fn random_positions<R: Rng + ?Sized>(n: usize, d1: i64, rng: &mut R) -> Vec<i64> {
    let widest = (d1 + 1) / 2;
    let mut x = 0;
    (0..n)
        .map(|i| {
            if i > 0 {
                x += 2 * rng.gen_range(1..=widest.max(1));
            }
            x
        })
        .collect()
}

/// Similarity levels induced by integer positions and thresholds:
/// `a[u][v] = t` exactly when `d_{t+1} < |pi_v - pi_u| < d_t`. Ties are
/// resolved towards the lower level.
pub fn quantize(pi: &[i64], d: &[i64]) -> Vec<Vec<i64>> {
    let n = pi.len();
    let mut rows = vec![vec![0i64; n]; n];
    for u in 0..n {
        for v in 0..n {
            let gap = (pi[v] - pi[u]).abs();
            rows[u][v] = d.iter().take_while(|&&dt| gap < dt).count() as i64;
        }
    }
    rows
}

/// A matrix with a known embedding.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub matrix: RobinsonMatrix,
    pub d: ThresholdVector,
    pub pi: Embedding,
}

pub fn planted<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> PlantedInstance {
    assert!(n >= 1 && k >= 1, "need at least one vertex and one level");
    let d = random_thresholds(k, rng);
    let pi = random_positions(n, d[0], rng);
    let rows = quantize(&pi, &d);
    PlantedInstance {
        matrix: RobinsonMatrix::from_rows(k as u32, &rows)
            .expect("quantized positions give a Robinson matrix"),
        d: ThresholdVector::from_integers(&d).expect("thresholds are decreasing"),
        pi: Embedding::new(pi.into_iter().map(int).collect()),
    }
}

/// Changes one off-diagonal entry pair by one level while keeping the
/// matrix Robinson. Returns `None` if `tries` random proposals all fail.
pub fn perturb_once<R: Rng + ?Sized>(
    m: &RobinsonMatrix,
    tries: usize,
    rng: &mut R,
) -> Option<RobinsonMatrix> {
    let n = m.n();
    if n < 2 {
        return None;
    }
    let k = i64::from(m.k());
    let mut rows = m.rows();
    for _ in 0..tries {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let old = rows[u][v];
        let new = if rng.gen_bool(0.5) { old + 1 } else { old - 1 };
        if !(0..=k).contains(&new) {
            continue;
        }
        rows[u][v] = new;
        rows[v][u] = new;
        if validate_robinson(&rows, m.k()).is_ok() {
            return Some(RobinsonMatrix::from_rows(m.k(), &rows).expect("checked above"));
        }
        rows[u][v] = old;
        rows[v][u] = old;
    }
    None
}

/// Applies up to `count` Robinson-preserving single-entry perturbations.
pub fn perturb<R: Rng + ?Sized>(m: &RobinsonMatrix, count: usize, rng: &mut R) -> RobinsonMatrix {
    let mut out = m.clone();
    for _ in 0..count {
        if let Some(next) = perturb_once(&out, 64, rng) {
            out = next;
        }
    }
    out
}

/// Inserts `count` copies of randomly chosen rows directly after the
/// original row. Copies sit at level `k` to their source.
pub fn duplicate_rows<R: Rng + ?Sized>(
    m: &RobinsonMatrix,
    count: usize,
    rng: &mut R,
) -> RobinsonMatrix {
    let mut order: Vec<usize> = (0..m.n()).collect();
    for _ in 0..count {
        let at = rng.gen_range(0..order.len());
        order.insert(at, order[at]);
    }
    let rows: Vec<Vec<i64>> = order
        .iter()
        .map(|&u| order.iter().map(|&v| i64::from(m.get(u, v))).collect())
        .collect();
    RobinsonMatrix::from_rows(m.k(), &rows).expect("repeating a row keeps the matrix Robinson")
}

/// Perturbs `m` one entry at a time, up to `attempts` times, until
/// `is_feasible` rejects the result. Returns the last matrix produced.
pub fn perturb_until_infeasible<R: Rng + ?Sized>(
    m: &RobinsonMatrix,
    attempts: usize,
    rng: &mut R,
    mut is_feasible: impl FnMut(&RobinsonMatrix) -> bool,
) -> RobinsonMatrix {
    let mut out = m.clone();
    for _ in 0..attempts {
        if let Some(next) = perturb_once(&out, 64, rng) {
            out = next;
            if !is_feasible(&out) {
                break;
            }
        }
    }
    out
}

/// A random matrix for equivalence tests: planted, then perturbed with
/// probability one half, then given a duplicate row with probability one
/// quarter.
pub fn mixed_instance<R: Rng + ?Sized>(max_n: usize, max_k: usize, rng: &mut R) -> RobinsonMatrix {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let mut m = planted(n, k, rng).matrix;
    if rng.gen_bool(0.5) {
        let count = *[2usize, 4, 8, 16].choose(rng).expect("non-empty");
        m = perturb(&m, count, rng);
    }
    if m.n() < max_n && rng.gen_bool(0.25) {
        m = duplicate_rows(&m, 1, rng);
    }
    m
}
