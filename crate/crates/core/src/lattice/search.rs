//! Backtracking enumeration of lattice embeddings `(Z^k, Q) -> (Z^n, -Id)`,
//! one representative per orbit of the signed permutation group acting on
//! the `n` coordinates.
//!
//! Columns are placed in vertex order. Before column `j` is chosen, the
//! coordinates are split into classes of identical rows (the columns
//! already placed are fixed exactly by permutations inside a class), plus
//! the class of untouched coordinates, on which sign changes act too. The
//! canonical representative of the new column under that stabilizer has
//! non-increasing entries inside each touched class, and its entries on
//! untouched coordinates are positive, non-increasing and packed onto the
//! lowest fresh indices. Choosing only canonical columns yields every orbit
//! exactly once without any post-hoc deduplication.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use num_traits::ToPrimitive;

use super::surjective::rows_span_unit_lattice;
use super::Embedding;
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Gram data of the lattice being embedded, in machine integers.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    k: usize,
    /// `norms[j] = -Q[j][j]`.
    norms: Vec<i64>,
    /// `targets[j][i] = -Q[i][j]` for `i < j`.
    targets: Vec<Vec<i64>>,
    /// `capacity[j] = norms[j] + ... + norms[k-1]`: the most fresh
    /// coordinates columns `j..k` can still touch.
    capacity: Vec<i64>,
}

impl Problem {
    pub(crate) fn new(q: &IntegerMatrix) -> Result<Self> {
        if !q.is_symmetric() || !q.is_negative_definite() {
            return Err(Error::precondition(
                "embedding search needs a symmetric negative definite form",
            ));
        }
        let k = q.rows();
        let entry = |i: usize, j: usize| -> Result<i64> {
            q.get(i, j)
                .to_i64()
                .filter(|x| x.checked_neg().is_some())
                .ok_or_else(|| Error::domain("form entry exceeds 64 bits"))
        };
        let mut norms = Vec::with_capacity(k);
        let mut targets = Vec::with_capacity(k);
        for j in 0..k {
            norms.push(-entry(j, j)?);
            targets.push((0..j).map(|i| entry(i, j).map(|x| -x)).collect::<Result<Vec<_>>>()?);
        }
        let mut capacity = vec![0i64; k + 1];
        for j in (0..k).rev() {
            capacity[j] = capacity[j + 1].saturating_add(norms[j]);
        }
        Ok(Problem {
            k,
            norms,
            targets,
            capacity,
        })
    }

    pub(crate) fn k(&self) -> usize {
        self.k
    }

    /// Largest `n` for which a zero-row-free embedding can exist.
    pub(crate) fn max_coordinates(&self) -> usize {
        self.capacity[0].max(0) as usize
    }
}

/// A partial embedding: the first `cols.len()` columns, each of length `n`,
/// touching coordinates `0..used`.
#[derive(Clone, Debug)]
struct Node {
    cols: Vec<Vec<i64>>,
    used: usize,
}

/// Canonical extensions of a partial embedding by one column.
fn extensions(problem: &Problem, n: usize, node: &Node) -> Vec<Node> {
    let j = node.cols.len();
    let used = node.used;
    let norm = problem.norms[j];
    let targets = &problem.targets[j];

    // previous coordinate with an identical row, if any
    let mut last_seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut class_prev = vec![None; used];
    for (c, prev) in class_prev.iter_mut().enumerate() {
        let row: Vec<i64> = node.cols.iter().map(|col| col[c]).collect();
        *prev = last_seen.insert(row, c);
    }

    // tails[i][c] = squared norm of column i on coordinates c..used
    let tails: Vec<Vec<i64>> = node
        .cols
        .iter()
        .map(|col| {
            let mut t = vec![0i64; used + 1];
            for c in (0..used).rev() {
                t[c] = t[c + 1] + col[c] * col[c];
            }
            t
        })
        .collect();

    let mut out = Vec::new();
    let mut ctx = ColumnSearch {
        problem,
        n,
        node,
        targets,
        class_prev: &class_prev,
        tails: &tails,
        value: vec![0i64; n],
        dots: vec![0i64; j],
        out: &mut out,
    };
    ctx.touched(0, norm);
    out
}

struct ColumnSearch<'a> {
    problem: &'a Problem,
    n: usize,
    node: &'a Node,
    targets: &'a [i64],
    class_prev: &'a [Option<usize>],
    tails: &'a [Vec<i64>],
    value: Vec<i64>,
    dots: Vec<i64>,
    out: &'a mut Vec<Node>,
}

impl ColumnSearch<'_> {
    /// Assigns coordinate `c` among the already touched ones.
    fn touched(&mut self, c: usize, rem: i64) {
        let used = self.node.used;
        if c == used {
            if self.dots.iter().zip(self.targets).all(|(d, t)| d == t) {
                self.fresh(used, rem, isqrt(rem));
            }
            return;
        }
        let mut hi = isqrt(rem);
        if let Some(p) = self.class_prev[c] {
            hi = hi.min(self.value[p]);
        }
        let lo = -isqrt(rem);
        let mut v = hi;
        while v >= lo {
            let rem2 = rem - v * v;
            let mut feasible = true;
            for (i, col) in self.node.cols.iter().enumerate() {
                self.dots[i] += v * col[c];
                let gap = self.targets[i] - self.dots[i];
                if gap * gap > rem2 * self.tails[i][c + 1] {
                    feasible = false;
                }
            }
            if feasible {
                self.value[c] = v;
                self.touched(c + 1, rem2);
            }
            for (i, col) in self.node.cols.iter().enumerate() {
                self.dots[i] -= v * col[c];
            }
            v -= 1;
        }
        self.value[c] = 0;
    }

    /// Splits the remaining norm over fresh coordinates `c..` as positive
    /// non-increasing entries, each at most `cap`.
    fn fresh(&mut self, c: usize, rem: i64, cap: i64) {
        if rem == 0 {
            self.emit(c);
            return;
        }
        if c == self.n {
            return;
        }
        let mut v = cap.min(isqrt(rem));
        while v >= 1 {
            self.value[c] = v;
            self.fresh(c + 1, rem - v * v, v);
            v -= 1;
        }
        self.value[c] = 0;
    }

    fn emit(&mut self, used: usize) {
        let j = self.node.cols.len();
        let k = self.problem.k;
        let reachable = used as i64 + self.problem.capacity[j + 1];
        let complete = if j + 1 == k {
            used == self.n
        } else {
            reachable >= self.n as i64
        };
        if !complete {
            return;
        }
        let mut cols = self.node.cols.clone();
        cols.push(self.value.clone());
        self.out.push(Node { cols, used });
    }
}

fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        0
    } else {
        x.isqrt()
    }
}

/// Lazy depth-first stream of canonical embeddings into exactly `n`
/// coordinates, every coordinate touched.
pub struct Embeddings {
    problem: Problem,
    n: usize,
    stack: Vec<(Vec<Node>, usize)>,
    depth_offset: usize,
    started: bool,
    root: Node,
}

impl Embeddings {
    pub(crate) fn new(problem: Problem, n: usize) -> Self {
        let root = Node {
            cols: vec![],
            used: 0,
        };
        Self::from_node(problem, n, root)
    }

    fn from_node(problem: Problem, n: usize, root: Node) -> Self {
        Embeddings {
            problem,
            n,
            stack: Vec::new(),
            depth_offset: root.cols.len(),
            started: false,
            root,
        }
    }

    fn feasible(&self) -> bool {
        let k = self.problem.k;
        k > 0 && self.n >= k && self.problem.capacity[0] >= self.n as i64
    }
}

impl Iterator for Embeddings {
    type Item = Embedding;

    fn next(&mut self) -> Option<Embedding> {
        if !self.started {
            self.started = true;
            if !self.feasible() {
                return None;
            }
            if self.root.cols.len() == self.problem.k {
                return Some(to_embedding(&self.root));
            }
            let first = extensions(&self.problem, self.n, &self.root);
            self.stack.push((first, 0));
        }
        while let Some((cands, next)) = self.stack.last_mut() {
            if *next == cands.len() {
                self.stack.pop();
                continue;
            }
            let node = std::mem::replace(
                &mut cands[*next],
                Node {
                    cols: vec![],
                    used: 0,
                },
            );
            *next += 1;
            if node.cols.len() == self.problem.k {
                return Some(to_embedding(&node));
            }
            debug_assert_eq!(node.cols.len(), self.depth_offset + self.stack.len());
            let children = extensions(&self.problem, self.n, &node);
            self.stack.push((children, 0));
        }
        None
    }
}

fn to_embedding(node: &Node) -> Embedding {
    let matrix = IntegerMatrix::from_columns(&node.cols).expect("columns share a length");
    Embedding::from_search(matrix, node.cols.clone())
}

/// All partial embeddings at `depth` columns (or complete ones if the tree
/// is shallower), in canonical order.
fn frontier(problem: &Problem, n: usize, depth: usize) -> Vec<Node> {
    let mut level = vec![Node {
        cols: vec![],
        used: 0,
    }];
    for _ in 0..depth.min(problem.k) {
        level = level
            .iter()
            .flat_map(|node| extensions(problem, n, node))
            .collect();
    }
    level
}

/// Options shared by the obstruction and the `embed` front end.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Largest `n` searched; defaults to the sum of absolute weights.
    pub n_max: Option<usize>,
    /// Split the search tree over the current rayon pool.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            n_max: None,
            parallel: true,
        }
    }
}

const SPLIT_DEPTH: usize = 2;

/// Number of canonical embeddings into exactly `n` coordinates.
pub(crate) fn count_embeddings(problem: &Problem, n: usize, parallel: bool) -> u64 {
    if !parallel {
        return Embeddings::new(problem.clone(), n).count() as u64;
    }
    let probe = Embeddings::new(problem.clone(), n);
    if !probe.feasible() {
        return 0;
    }
    frontier(problem, n, SPLIT_DEPTH)
        .into_par_iter()
        .map(|node| Embeddings::from_node(problem.clone(), n, node).count() as u64)
        .sum()
}

/// First embedding into exactly `n` coordinates, in canonical order, whose
/// transpose is surjective; also returns how many embeddings were looked at
/// when the whole level was exhausted.
pub(crate) fn first_surjective(
    problem: &Problem,
    n: usize,
    parallel: bool,
) -> (Option<Embedding>, Option<u64>) {
    let probe = Embeddings::new(problem.clone(), n);
    if !probe.feasible() {
        return (None, Some(0));
    }
    if !parallel {
        let mut seen = 0u64;
        for e in probe {
            seen += 1;
            if e.surjective_fast() {
                return (Some(e), None);
            }
        }
        return (None, Some(seen));
    }
    let nodes = frontier(problem, n, SPLIT_DEPTH);
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<(Option<Embedding>, u64)> = nodes
        .into_par_iter()
        .enumerate()
        .map(|(idx, node)| {
            let mut seen = 0u64;
            for e in Embeddings::from_node(problem.clone(), n, node) {
                if best.load(Ordering::Relaxed) < idx {
                    break;
                }
                seen += 1;
                if e.surjective_fast() {
                    best.fetch_min(idx, Ordering::Relaxed);
                    return (Some(e), seen);
                }
            }
            (None, seen)
        })
        .collect();
    let total: u64 = results.iter().map(|(_, s)| s).sum();
    match results.into_iter().find_map(|(e, _)| e) {
        Some(e) => (Some(e), None),
        None => (None, Some(total)),
    }
}

impl Embedding {
    pub(crate) fn surjective_fast(&self) -> bool {
        let cols = self.small_columns();
        let k = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        let rows = (0..n).map(|r| cols.iter().map(|c| c[r]).collect::<Vec<i64>>());
        match rows_span_unit_lattice(rows, k) {
            Some(answer) => answer,
            None => super::transpose_surjective(self),
        }
    }
}
