//! Robinson similarity matrices: parsing, validation, level graphs and the
//! reduction of repeated rows.
//!
//! Vertices are 0-based internally. Every user-facing rendering (errors,
//! reports, JSON) shifts them to 1-based.

use std::fmt;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::embed::{verify_embedding, EmbedError, Embedding};
use crate::feasibility::ThresholdVector;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("matrix must have at least one vertex")]
    Empty,
    #[error("level count k must be at least 1")]
    NoLevels,
    #[error("expected {expected} rows of {expected} entries, row {row} has {found}")]
    Shape {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("entry ({}, {}) = {value} is outside [0, {k}]", .u + 1, .v + 1)]
    OutOfRange {
        u: usize,
        v: usize,
        value: i64,
        k: u32,
    },
    #[error("matrix is not symmetric at ({}, {})", .u + 1, .v + 1)]
    Symmetry { u: usize, v: usize },
    #[error("diagonal entry ({0}, {0}) must equal k", .u + 1)]
    Diagonal { u: usize },
    #[error("Robinson condition violated by {0}")]
    Robinson(RobinsonWitness),
    #[error("level {t} is outside [1, {k}]")]
    LevelOutOfRange { t: u32, k: u32 },
}

/// A triple `u < v < w` with `a[u][w] > a[u][v]` or `a[u][w] > a[v][w]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RobinsonWitness {
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

impl fmt::Display for RobinsonWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u + 1, self.v + 1, self.w + 1)
    }
}

/// A validated Robinson matrix with entries in `{0, ..., k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RobinsonMatrix {
    n: usize,
    k: u32,
    entries: Vec<u32>,
}

impl RobinsonMatrix {
    /// Builds and validates a matrix from rows. Checks shape, range,
    /// symmetry, the diagonal and the Robinson condition, in that order.
    pub fn from_rows(k: u32, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if k == 0 {
            return Err(MatrixError::NoLevels);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Shape {
                    expected: n,
                    row: u + 1,
                    found: row.len(),
                });
            }
            for (v, &value) in row.iter().enumerate() {
                if value < 0 || value > i64::from(k) {
                    return Err(MatrixError::OutOfRange { u, v, value, k });
                }
                entries.push(value as u32);
            }
        }
        let m = RobinsonMatrix { n, k, entries };
        for u in 0..n {
            for v in u + 1..n {
                if m.get(u, v) != m.get(v, u) {
                    return Err(MatrixError::Symmetry { u, v });
                }
            }
        }
        if let Some(u) = (0..n).find(|&u| m.get(u, u) != k) {
            return Err(MatrixError::Diagonal { u });
        }
        if let Some(w) = robinson_witness(n, |u, v| m.get(u, v)) {
            return Err(MatrixError::Robinson(w));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|u| self.row(u).iter().map(|&x| i64::from(x)).collect())
            .collect()
    }

    /// Principal submatrix on `keep` (which must be increasing).
    pub fn submatrix(&self, keep: &[usize]) -> RobinsonMatrix {
        let mut entries = Vec::with_capacity(keep.len() * keep.len());
        for &u in keep {
            for &v in keep {
                entries.push(self.get(u, v));
            }
        }
        RobinsonMatrix {
            n: keep.len(),
            k: self.k,
            entries,
        }
    }

    /// Canonical text form: header `n k`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for u in 0..self.n {
            let row: Vec<String> = self.row(u).iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Adjacency of `G^(t)` plus the diagonal: `a[u][v] >= t`.
    pub fn level_graph(&self, t: u32) -> Result<LevelGraph, MatrixError> {
        if t == 0 || t > self.k {
            return Err(MatrixError::LevelOutOfRange { t, k: self.k });
        }
        Ok(LevelGraph {
            n: self.n,
            adjacency: self.entries.iter().map(|&a| a >= t).collect(),
        })
    }
}

impl fmt::Display for RobinsonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Binary level matrix `A^(t)`; off-diagonal ones are the edges of an
/// indifference graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph {
    n: usize,
    adjacency: Vec<bool>,
}

impl LevelGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    /// Edges `u < v`, excluding the diagonal.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.contains(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| u8::from(self.contains(u, v))).collect())
            .collect()
    }
}

fn robinson_witness(n: usize, a: impl Fn(usize, usize) -> u32) -> Option<RobinsonWitness> {
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let far = a(u, w);
                if far > a(u, v) || far > a(v, w) {
                    return Some(RobinsonWitness { u, v, w });
                }
            }
        }
    }
    None
}

/// Checks the Robinson condition on a symmetric matrix with entries in
/// `[0, k]`. Returns the lexicographically smallest violating triple.
pub fn validate_robinson(rows: &[Vec<i64>], k: u32) -> Result<(), RobinsonWitness> {
    debug_assert!(rows
        .iter()
        .flatten()
        .all(|&x| (0..=i64::from(k)).contains(&x)));
    match robinson_witness(rows.len(), |u, v| rows[u][v] as u32) {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Parses the text matrix format. `#` starts a comment line; the first
/// remaining line is `n k`, followed by `n` rows of `n` integers.
pub fn parse_matrix(text: &str) -> Result<RobinsonMatrix, MatrixError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_line, header) = lines.next().ok_or(MatrixError::Syntax {
        line: 1,
        column: 1,
        message: "missing header line \"n k\"".into(),
    })?;
    let header_tokens = tokens(header);
    if header_tokens.len() != 2 {
        return Err(MatrixError::Syntax {
            line: header_line,
            column: 1,
            message: format!(
                "header must be \"n k\", found {} fields",
                header_tokens.len()
            ),
        });
    }
    let n = parse_number(header_line, header_tokens[0])?;
    let k = parse_number(header_line, header_tokens[1])?;
    if n <= 0 {
        return Err(MatrixError::Empty);
    }
    if k <= 0 {
        return Err(MatrixError::NoLevels);
    }
    let k = u32::try_from(k).map_err(|_| MatrixError::Syntax {
        line: header_line,
        column: header_tokens[1].0,
        message: "k is too large".into(),
    })?;
    let n = n as usize;

    let mut rows = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        if rows.len() == n {
            return Err(MatrixError::Syntax {
                line: line_no,
                column: 1,
                message: format!("unexpected extra row, expected {n} rows"),
            });
        }
        let toks = tokens(line);
        if toks.len() != n {
            let column = toks.get(n).map_or(line.len() + 1, |t| t.0);
            return Err(MatrixError::Syntax {
                line: line_no,
                column,
                message: format!("expected {n} entries, found {}", toks.len()),
            });
        }
        let row = toks
            .iter()
            .map(|&tok| parse_number(line_no, tok))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
        last_line = line_no;
    }
    if rows.len() != n {
        return Err(MatrixError::Syntax {
            line: last_line + 1,
            column: 1,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    RobinsonMatrix::from_rows(k, &rows)
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_number(line: usize, (column, tok): (usize, &str)) -> Result<i64, MatrixError> {
    tok.parse::<i64>().map_err(|_| MatrixError::Syntax {
        line,
        column,
        message: format!("expected an integer, found {tok:?}"),
    })
}

/// A matrix with repeated rows collapsed onto their first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    pub reduced: RobinsonMatrix,
    /// Original vertex of each reduced vertex.
    pub representatives: Vec<usize>,
    /// Reduced vertex representing each original vertex.
    pub index_map: Vec<usize>,
    /// Number of duplicates collapsed into each reduced vertex.
    pub run_lengths: Vec<usize>,
}

impl RowReduction {
    pub fn is_identity(&self) -> bool {
        self.run_lengths.iter().all(|&r| r == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("rows {} and {} are equal but separated by a different row", .first + 1, .second + 1)]
    NonContiguous { first: usize, second: usize },
}

/// Collapses every run of identical rows onto its first row.
///
/// Equal rows of a Robinson matrix are always contiguous; a violation is
/// reported as an error since it means the input bypassed validation.
pub fn reduce_repeated_rows(m: &RobinsonMatrix) -> Result<RowReduction, ReductionError> {
    let n = m.n();
    let mut representatives = Vec::new();
    let mut index_map = Vec::with_capacity(n);
    let mut run_lengths: Vec<usize> = Vec::new();
    for u in 0..n {
        match representatives.last() {
            Some(&rep) if m.row(rep) == m.row(u) => {
                *run_lengths.last_mut().expect("run for representative") += 1;
            }
            _ => {
                if let Some(pos) = representatives.iter().position(|&r| m.row(r) == m.row(u)) {
                    return Err(ReductionError::NonContiguous {
                        first: representatives[pos],
                        second: u,
                    });
                }
                representatives.push(u);
                run_lengths.push(0);
            }
        }
        index_map.push(representatives.len() - 1);
    }
    Ok(RowReduction {
        reduced: m.submatrix(&representatives),
        representatives,
        index_map,
        run_lengths,
    })
}

/// Lifts an embedding of the reduced matrix back to the original one.
///
/// Each duplicate `j` of representative `i` lands at
/// `Pi(i) + (j / r_i) * eps_i`, where `2 eps_i` is the smallest slack of
/// `Pi` at `i`, capped by `d_k` so duplicates stay within level `k` of
/// each other.
pub fn expand_embedding(
    reduction: &RowReduction,
    reduced_pi: &Embedding,
    d: &ThresholdVector,
) -> Result<Embedding, EmbedError> {
    let m = &reduction.reduced;
    verify_embedding(m, d, reduced_pi).map_err(EmbedError::Verification)?;
    if reduction.is_identity() {
        return Ok(reduced_pi.clone());
    }
    let pi = reduced_pi.values();
    let two = int(2);
    let mut values = Vec::with_capacity(reduction.index_map.len());
    for (i, &r) in reduction.run_lengths.iter().enumerate() {
        values.push(pi[i].clone());
        if r == 0 {
            continue;
        }
        let mut slack = d.last().clone();
        for j in 0..m.n() {
            let t = m.get(i, j);
            let s = if j < i {
                match d.upper(t) {
                    Some(upper) => upper - (&pi[i] - &pi[j]),
                    None => continue,
                }
            } else if j > i {
                (&pi[j] - &pi[i]) - d.lower(t)
            } else {
                continue;
            };
            if s < slack {
                slack = s;
            }
        }
        debug_assert!(slack > Rational::zero());
        let eps = slack / &two;
        let runs = Rational::from_integer(r.into());
        for step in 1..=r {
            let offset = &eps * Rational::from_integer(step.into()) / &runs;
            values.push(&pi[i] + offset);
        }
    }
    Ok(Embedding::new(values))
}


/// Writes `rows` in the canonical file format without validating them.
pub fn rows_to_text(k: u32, rows: &[Vec<i64>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", rows.len(), k);
    for row in rows {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}
