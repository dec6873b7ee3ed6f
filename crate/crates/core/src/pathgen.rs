//! All-pairs generation of ⪯-minimal upper-bound-paths.
//!
//! A Floyd–Warshall style sweep over pivots merges `(i, s)` and `(s, j)`
//! paths. Only simple paths are formed; when `i == j` the merge closes an
//! upper-bound-cycle which is stored in the diagonal cell of `i`.
//! Lower bounds are never stored: `LB(u, v) = -UB(v, u)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bounds::{fmt_vertices, minimal_elements, upper_step, BoundVector, ChainLabel};
use crate::matrix::RobinsonMatrix;

/// How a cell decides whether to accept a new bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellPolicy {
    /// Keep exactly the ⪯-minimal bounds.
    Pareto,
    /// `k = 2` only: keep the minimum of each chain `S_t^i`. The cell is then
    /// a superset of the minimal set with at most `2n` entries.
    ChainMinima,
    /// Keep every bound not dominated by an entry that is both ⪯ and uses a
    /// subset of its vertices. Exact for simple paths; may grow large.
    Exact,
}

impl CellPolicy {
    pub fn default_for(k: u32) -> Self {
        if k == 2 {
            CellPolicy::ChainMinima
        } else {
            CellPolicy::Pareto
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellEntry<P> {
    pub bound: BoundVector,
    pub path: P,
}

/// Inserts `candidate` unless an existing entry already precedes it.
/// Entries dominated by an inserted candidate are evicted. Under
/// [`CellPolicy::ChainMinima`] only the entry of the candidate's own chain
/// is compared.
pub fn minimal_insert<P>(
    cell: &mut Vec<CellEntry<P>>,
    candidate: CellEntry<P>,
    policy: CellPolicy,
) -> bool {
    match admit(cell, candidate.bound.coeffs(), policy) {
        Admit::Reject => false,
        Admit::Replace(slot) => {
            cell[slot] = candidate;
            true
        }
        Admit::Insert => {
            if policy == CellPolicy::Pareto {
                cell.retain(|e| !candidate.bound.precedes_unchecked(&e.bound));
            }
            cell.push(candidate);
            true
        }
    }
}

enum Admit {
    Reject,
    Replace(usize),
    Insert,
}

fn precedes(a: &[i32], b: &[i32]) -> bool {
    let mut diff = 0i64;
    for (x, y) in a.iter().zip(b) {
        diff += i64::from(*y) - i64::from(*x);
        if diff < 0 {
            return false;
        }
    }
    true
}

fn label2(a: &[i32]) -> ChainLabel {
    let (a1, a2) = (a[0], a[1]);
    if a1 == 0 && a2 == 0 {
        ChainLabel::Zero
    } else {
        let t = a1.unsigned_abs() + a2.unsigned_abs();
        let first = a2 > 0 || (a2 == 0 && a1 < 0);
        ChainLabel::Chain {
            t,
            index: if first { 1 } else { 2 },
        }
    }
}

fn admit<P>(cell: &[CellEntry<P>], cand: &[i32], policy: CellPolicy) -> Admit {
    match policy {
        CellPolicy::Pareto | CellPolicy::Exact => {
            if cell.iter().any(|e| precedes(e.bound.coeffs(), cand)) {
                Admit::Reject
            } else {
                Admit::Insert
            }
        }
        CellPolicy::ChainMinima => {
            let label = label2(cand);
            match cell.iter().position(|e| label2(e.bound.coeffs()) == label) {
                None => Admit::Insert,
                Some(slot) => {
                    let cur = cell[slot].bound.coeffs();
                    if cur != cand && precedes(cand, cur) {
                        Admit::Replace(slot)
                    } else {
                        Admit::Reject
                    }
                }
            }
        }
    }
}

pub type PathId = u32;

#[derive(Debug, Clone, Copy)]
enum Node {
    Edge(u32, u32),
    Concat(PathId, PathId),
}

/// Append-only store of paths built by concatenation, each with a vertex
/// bitmask for the simplicity test.
#[derive(Debug, Clone)]
struct PathArena {
    words: usize,
    nodes: Vec<Node>,
    masks: Vec<u64>,
}

impl PathArena {
    fn new(n: usize) -> Self {
        PathArena {
            words: n.div_ceil(64).max(1),
            nodes: Vec::new(),
            masks: Vec::new(),
        }
    }

    fn mask(&self, id: PathId) -> &[u64] {
        let at = id as usize * self.words;
        &self.masks[at..at + self.words]
    }

    fn edge(&mut self, u: usize, v: usize) -> PathId {
        let id = self.nodes.len() as PathId;
        self.nodes.push(Node::Edge(u as u32, v as u32));
        let start = self.masks.len();
        self.masks.resize(start + self.words, 0);
        self.masks[start + u / 64] |= 1 << (u % 64);
        self.masks[start + v / 64] |= 1 << (v % 64);
        id
    }

    fn concat(&mut self, a: PathId, b: PathId) -> PathId {
        let id = self.nodes.len() as PathId;
        self.nodes.push(Node::Concat(a, b));
        for w in 0..self.words {
            let m = self.mask(a)[w] | self.mask(b)[w];
            self.masks.push(m);
        }
        id
    }

    /// True when `a` and `b` share exactly the vertices in `allowed`.
    fn meets_only_at(&self, a: PathId, b: PathId, allowed: &[u64]) -> bool {
        let (ma, mb) = (self.mask(a), self.mask(b));
        (0..self.words).all(|w| ma[w] & mb[w] == allowed[w])
    }

    fn is_subset(&self, a: PathId, of: &[u64]) -> bool {
        self.mask(a).iter().zip(of).all(|(x, y)| x & !y == 0)
    }

    fn is_superset(&self, a: PathId, of: &[u64]) -> bool {
        self.mask(a).iter().zip(of).all(|(x, y)| y & !x == 0)
    }

    fn vertices(&self, id: PathId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(top) = stack.pop() {
            match self.nodes[top as usize] {
                Node::Edge(u, v) => {
                    if out.is_empty() {
                        out.push(u as usize);
                    }
                    out.push(v as usize);
                }
                Node::Concat(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }
}

/// Bound table for one matrix: minimal upper-bound-paths for every ordered
/// pair and discovered upper-bound-cycles on the diagonal.
#[derive(Debug, Clone)]
pub struct BoundTable {
    n: usize,
    k: u32,
    policy: CellPolicy,
    cells: Vec<Vec<CellEntry<PathId>>>,
    arena: PathArena,
}

/// A path or cycle materialised from the table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundPath {
    pub bound: BoundVector,
    pub vertices: Vec<usize>,
}

/// A closed upper-bound-walk with no other repeated vertex, rotated to start
/// at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleRecord {
    pub bound: BoundVector,
    pub vertices: Vec<usize>,
}

impl CycleRecord {
    /// Rotates a closed vertex sequence so it starts (and ends) at its
    /// smallest vertex.
    pub fn canonical(bound: BoundVector, closed: &[usize]) -> Self {
        debug_assert!(closed.len() >= 3 && closed.first() == closed.last());
        let open = &closed[..closed.len() - 1];
        let start = open
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut vertices: Vec<usize> = open[start..]
            .iter()
            .chain(&open[..start])
            .copied()
            .collect();
        vertices.push(vertices[0]);
        CycleRecord { bound, vertices }
    }

    /// Map vertices through `f`, e.g. from a reduced matrix to the original.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        let closed: Vec<usize> = self.vertices.iter().map(|&v| f(v)).collect();
        CycleRecord::canonical(self.bound.clone(), &closed)
    }
}

impl fmt::Display for CycleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vertices(f, &self.vertices)?;
        write!(f, " {}", self.bound)
    }
}

impl BoundTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn policy(&self) -> CellPolicy {
        self.policy
    }

    fn cell(&self, i: usize, j: usize) -> &[CellEntry<PathId>] {
        &self.cells[i * self.n + j]
    }

    /// Raw cell contents, including entries the chain policy keeps although
    /// another chain dominates them.
    pub fn stored(&self, i: usize, j: usize) -> Vec<BoundPath> {
        self.cell(i, j)
            .iter()
            .map(|e| BoundPath {
                bound: e.bound.clone(),
                vertices: self.arena.vertices(e.path),
            })
            .collect()
    }

    pub fn cell_len(&self, i: usize, j: usize) -> usize {
        self.cell(i, j).len()
    }

    pub fn max_cell_len(&self) -> usize {
        self.cells.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Stored upper bounds `UB(i, j)`.
    pub fn upper_bounds(&self, i: usize, j: usize) -> impl Iterator<Item = &BoundVector> {
        self.cell(i, j).iter().map(|e| &e.bound)
    }

    /// Lower bounds `LB(i, j) = { -b : b in UB(j, i) }`.
    pub fn lower_bounds(&self, i: usize, j: usize) -> impl Iterator<Item = BoundVector> + '_ {
        self.cell(j, i).iter().map(|e| -&e.bound)
    }

    /// The ⪯-minimal upper-bound-paths from `i` to `j` (`i != j`), sorted by bound.
    pub fn minimal_paths(&self, i: usize, j: usize) -> Vec<BoundPath> {
        let mut out = minimal_elements(self.stored(i, j), |p| &p.bound);
        out.sort();
        out
    }

    /// Every upper-bound-cycle in the diagonal cells, deduplicated by
    /// rotation, reduced to the ⪯-minimal bounds and sorted.
    pub fn extract_cycles(&self) -> Vec<CycleRecord> {
        let mut unique: BTreeMap<Vec<usize>, BoundVector> = BTreeMap::new();
        for v in 0..self.n {
            for e in self.cell(v, v) {
                let rec = CycleRecord::canonical(e.bound.clone(), &self.arena.vertices(e.path));
                unique.entry(rec.vertices).or_insert(rec.bound);
            }
        }
        let mut all: Vec<CycleRecord> = unique
            .into_iter()
            .map(|(vertices, bound)| CycleRecord { bound, vertices })
            .collect();
        all.sort();
        minimal_elements(all, |c| &c.bound)
    }
}

const NO_SLOT: u32 = u32::MAX;

/// Index of a `k = 2` chain by norm: the zero vector takes slot
/// 0, chain `i` of norm `t` takes slot `2t + i - 2`.
fn chain_slot(a: &[i32]) -> usize {
    match label2(a) {
        ChainLabel::Zero => 0,
        ChainLabel::Chain { t, index } => 2 * t as usize + index as usize - 2,
    }
}

/// One `(i, s, j)` merge step under [`CellPolicy::ChainMinima`]. `slots`
/// maps chain slots to positions in `target` and is all `NO_SLOT` on entry
/// and exit.
fn merge_chain_minima(
    table: &mut BoundTable,
    target: &mut Vec<CellEntry<PathId>>,
    (i, s, j): (usize, usize, usize),
    allowed: &[u64],
    slots: &mut [u32],
) {
    let n = table.n;
    for (at, e) in target.iter().enumerate() {
        slots[chain_slot(e.bound.coeffs())] = at as u32;
    }
    for a in 0..table.cells[i * n + s].len() {
        for b in 0..table.cells[s * n + j].len() {
            let left = &table.cells[i * n + s][a];
            let right = &table.cells[s * n + j][b];
            let (l, r) = (left.bound.coeffs(), right.bound.coeffs());
            let sum = [l[0] + r[0], l[1] + r[1]];
            let slot = chain_slot(&sum);
            let held = slots[slot];
            if held != NO_SLOT {
                let cur = target[held as usize].bound.coeffs();
                if cur == sum || !precedes(&sum, cur) {
                    continue;
                }
            }
            if !table.arena.meets_only_at(left.path, right.path, allowed) {
                continue;
            }
            let (lp, rp) = (left.path, right.path);
            let entry = CellEntry {
                bound: BoundVector::new(sum.to_vec()),
                path: table.arena.concat(lp, rp),
            };
            if held == NO_SLOT {
                slots[slot] = target.len() as u32;
                target.push(entry);
            } else {
                target[held as usize] = entry;
            }
        }
    }
    for e in target.iter() {
        slots[chain_slot(e.bound.coeffs())] = NO_SLOT;
    }
}

/// Runs bound generation with the default cell policy for `m.k()`.
pub fn generate_bound_tables(m: &RobinsonMatrix) -> BoundTable {
    generate_bound_tables_with(m, CellPolicy::default_for(m.k()))
}

pub fn generate_bound_tables_with(m: &RobinsonMatrix, policy: CellPolicy) -> BoundTable {
    let n = m.n();
    let policy = match policy {
        CellPolicy::ChainMinima if m.k() != 2 => CellPolicy::Pareto,
        other => other,
    };
    let mut table = BoundTable {
        n,
        k: m.k(),
        policy,
        cells: vec![Vec::new(); n * n],
        arena: PathArena::new(n),
    };

    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(bound) = upper_step(m, i, j) {
                let path = table.arena.edge(i, j);
                table.cells[i * n + j].push(CellEntry { bound, path });
            }
        }
    }

    let words = table.arena.words;
    let mut allowed = vec![0u64; words];
    let mut scratch = vec![0i32; m.k() as usize];
    let mut cand_mask = vec![0u64; words];
    // Candidate norms reach 2n - 2 before the simplicity test.
    let mut slots = vec![NO_SLOT; 4 * n + 2];
    for s in 0..n {
        for i in 0..n {
            if i == s || table.cells[i * n + s].is_empty() {
                continue;
            }
            for j in 0..n {
                if j == s || table.cells[s * n + j].is_empty() {
                    continue;
                }
                allowed.iter_mut().for_each(|w| *w = 0);
                allowed[s / 64] |= 1 << (s % 64);
                allowed[i / 64] |= u64::from(i == j) << (i % 64);

                let mut target = std::mem::take(&mut table.cells[i * n + j]);
                if policy == CellPolicy::ChainMinima {
                    merge_chain_minima(&mut table, &mut target, (i, s, j), &allowed, &mut slots);
                    table.cells[i * n + j] = target;
                    continue;
                }
                let left_len = table.cells[i * n + s].len();
                let right_len = table.cells[s * n + j].len();
                for a in 0..left_len {
                    for b in 0..right_len {
                        let left = &table.cells[i * n + s][a];
                        let right = &table.cells[s * n + j][b];
                        if !table.arena.meets_only_at(left.path, right.path, &allowed) {
                            continue;
                        }
                        for (x, (p, q)) in scratch
                            .iter_mut()
                            .zip(left.bound.coeffs().iter().zip(right.bound.coeffs()))
                        {
                            *x = p + q;
                        }
                        let arena = &table.arena;
                        if policy == CellPolicy::Exact {
                            for (w, slot) in cand_mask.iter_mut().enumerate() {
                                *slot = arena.mask(left.path)[w] | arena.mask(right.path)[w];
                            }
                            if target.iter().any(|e| {
                                precedes(e.bound.coeffs(), &scratch)
                                    && arena.is_subset(e.path, &cand_mask)
                            }) {
                                continue;
                            }
                            target.retain(|e| {
                                !(precedes(&scratch, e.bound.coeffs())
                                    && arena.is_superset(e.path, &cand_mask))
                            });
                        } else {
                            if target.iter().any(|e| precedes(e.bound.coeffs(), &scratch)) {
                                continue;
                            }
                            target.retain(|e| !precedes(&scratch, e.bound.coeffs()));
                        }
                        let (lp, rp) = (left.path, right.path);
                        let path = table.arena.concat(lp, rp);
                        target.push(CellEntry {
                            bound: BoundVector::new(scratch.clone()),
                            path,
                        });
                    }
                }
                table.cells[i * n + j] = target;
            }
        }
    }

    for cell in &mut table.cells {
        cell.sort_by(|x, y| x.bound.cmp(&y.bound));
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{walk_bound, BoundWalk};
    use crate::matrix::fixtures::{a, b};
    use crate::matrix::parse_matrix;

    fn v(xs: &[i32]) -> BoundVector {
        BoundVector::new(xs.to_vec())
    }

    fn entry(xs: &[i32], tag: char) -> CellEntry<char> {
        CellEntry {
            bound: v(xs),
            path: tag,
        }
    }

    #[test]
    fn pareto_insert_evicts_dominated() {
        let mut cell = Vec::new();
        assert!(minimal_insert(
            &mut cell,
            entry(&[1, 0], 'a'),
            CellPolicy::Pareto
        ));
        assert!(minimal_insert(
            &mut cell,
            entry(&[0, 4], 'b'),
            CellPolicy::Pareto
        ));
        assert!(!minimal_insert(
            &mut cell,
            entry(&[1, 1], 'c'),
            CellPolicy::Pareto
        ));
        assert!(minimal_insert(
            &mut cell,
            entry(&[0, 1], 'd'),
            CellPolicy::Pareto
        ));
        let tags: Vec<char> = cell.iter().map(|e| e.path).collect();
        assert_eq!(tags, vec!['d']);
        assert!(!minimal_insert(
            &mut cell,
            entry(&[0, 1], 'e'),
            CellPolicy::Pareto
        ));
    }

    #[test]
    fn chain_insert_compares_within_chain_only() {
        let mut cell = Vec::new();
        assert!(minimal_insert(
            &mut cell,
            entry(&[0, 2], 'a'),
            CellPolicy::ChainMinima
        ));
        // (1,-1) is in the other chain of norm 2; both are kept.
        assert!(minimal_insert(
            &mut cell,
            entry(&[1, -1], 'b'),
            CellPolicy::ChainMinima
        ));
        assert!(minimal_insert(
            &mut cell,
            entry(&[-1, 1], 'c'),
            CellPolicy::ChainMinima
        ));
        assert!(!minimal_insert(
            &mut cell,
            entry(&[1, 1], 'd'),
            CellPolicy::ChainMinima
        ));
        let tags: Vec<char> = cell.iter().map(|e| e.path).collect();
        assert_eq!(tags, vec!['c', 'b']);
    }

    #[test]
    fn matrix_a_cells() {
        let t = generate_bound_tables(&a());
        let bounds = |i, j| -> Vec<BoundVector> {
            t.minimal_paths(i, j).into_iter().map(|p| p.bound).collect()
        };
        assert_eq!(bounds(0, 4), vec![v(&[0, 4]), v(&[1, 1])]);
        assert_eq!(bounds(0, 1), vec![v(&[0, 1])]);
        let lower: Vec<BoundVector> = t.lower_bounds(4, 0).collect();
        assert!(lower.contains(&v(&[-1, -1])));
    }

    #[test]
    fn matrix_b_has_a_zero_cycle() {
        let cycles = generate_bound_tables(&b()).extract_cycles();
        assert!(cycles.contains(&CycleRecord {
            bound: v(&[0, 0]),
            vertices: vec![0, 1, 5, 3, 0],
        }));
    }

    #[test]
    fn all_top_level_matrix_has_only_two_cycles() {
        let m = parse_matrix("3 2\n2 2 2\n2 2 2\n2 2 2\n").unwrap();
        for policy in [
            CellPolicy::Pareto,
            CellPolicy::ChainMinima,
            CellPolicy::Exact,
        ] {
            let cycles = generate_bound_tables_with(&m, policy).extract_cycles();
            assert!(!cycles.is_empty());
            assert!(
                cycles.iter().all(|c| c.bound == v(&[0, 1])),
                "{policy:?}: {cycles:?}"
            );
        }
    }

    #[test]
    fn stored_paths_are_simple_and_match_their_bounds() {
        for m in [a(), b()] {
            for policy in [
                CellPolicy::Pareto,
                CellPolicy::ChainMinima,
                CellPolicy::Exact,
            ] {
                let t = generate_bound_tables_with(&m, policy);
                assert!(t.max_cell_len() <= 2 * m.n());
                for i in 0..m.n() {
                    for j in 0..m.n() {
                        for p in t.stored(i, j) {
                            assert_eq!(p.vertices.first(), Some(&i));
                            assert_eq!(p.vertices.last(), Some(&j));
                            let walk = BoundWalk::upper(p.vertices.clone());
                            assert!(walk.is_simple(), "{walk}");
                            assert_eq!(walk_bound(&m, &walk).as_ref(), Ok(&p.bound));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chain_policy_falls_back_for_other_k() {
        let m = parse_matrix("2 3\n3 1\n1 3\n").unwrap();
        assert_eq!(
            generate_bound_tables_with(&m, CellPolicy::ChainMinima).policy(),
            CellPolicy::Pareto
        );
    }

    #[test]
    fn cycles_rotate_to_smallest_vertex() {
        let c = CycleRecord::canonical(v(&[0, 0]), &[3, 0, 1, 5, 3]);
        assert_eq!(c.vertices, vec![0, 1, 5, 3, 0]);
        assert_eq!(c.to_string(), "⟨1,2,6,4,1⟩ (0,0)");
    }
}
