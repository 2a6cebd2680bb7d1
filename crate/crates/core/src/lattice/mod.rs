//! Embeddings of plumbing lattices into the negative diagonal lattice
//! `(Z^n, -Id)` and the obstructions built on them.
//!
//! An embedding is recorded as an `n x k` integer matrix `A` whose column
//! `i` is the image of vertex `i`, so that `-A^T A = Q`. If a definite
//! filling with torsion-free first homology exists, some embedding has a
//! surjective transpose; [`qa_lattice_obstruction`] searches for one.

mod search;
mod surjective;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{prefix_r, ContinuedFraction, Rational};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::plumbing::PlumbingGraph;

pub use search::{Embeddings, SearchOptions};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    matrix: IntegerMatrix,
    cols: Vec<Vec<i64>>,
}

impl Embedding {
    /// Checks `-A^T A = Q` and that no row of `A` is zero.
    pub fn new(matrix: IntegerMatrix, q: &IntegerMatrix) -> Result<Self> {
        if q.rows() != matrix.cols() || !q.is_square() {
            return Err(Error::domain("embedding and form have different ranks"));
        }
        let cols = (0..matrix.cols())
            .map(|j| {
                matrix
                    .column(j)
                    .iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::domain("entry exceeds 64 bits")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let e = Embedding { matrix, cols };
        if &e.gram() != q {
            return Err(Error::domain("columns do not realize the form: -A^T A != Q"));
        }
        if (0..e.n()).any(|r| e.matrix.row(r).iter().all(Zero::is_zero)) {
            return Err(Error::domain("embedding has a zero row"));
        }
        Ok(e)
    }

    pub(crate) fn from_search(matrix: IntegerMatrix, cols: Vec<Vec<i64>>) -> Self {
        Embedding { matrix, cols }
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    /// Dimension of the diagonal lattice.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Rank of the embedded lattice.
    pub fn k(&self) -> usize {
        self.matrix.cols()
    }

    pub fn column(&self, j: usize) -> &[i64] {
        &self.cols[j]
    }

    /// `-A^T A`, the form realized by the columns.
    pub fn gram(&self) -> IntegerMatrix {
        self.matrix
            .transpose()
            .mul(&self.matrix)
            .expect("shapes agree")
            .neg()
    }

    pub(crate) fn small_columns(&self) -> &[Vec<i64>] {
        &self.cols
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding(columns {:?})", self.cols)
    }
}

/// One line per coordinate of `Z^n`, one entry per vertex.
impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// Coordinates `e_i` of `Z^n` (0-based) touched by a set of vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SupportSet(pub BTreeSet<usize>);

impl SupportSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, coordinate: usize) -> bool {
        self.0.contains(&coordinate)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

/// Streams the canonical embeddings of `q` into exactly `n` coordinates.
pub fn enumerate_embeddings(q: &IntegerMatrix, n: usize) -> Result<Embeddings> {
    let problem = search::Problem::new(q)?;
    Ok(Embeddings::new(problem, n))
}

/// Whether `A^T : Z^n -> Z^k` is onto, via the invariant factors of `A`.
pub fn transpose_surjective(e: &Embedding) -> bool {
    let factors = e.matrix.invariant_factors();
    factors.len() == e.k() && factors.iter().all(|d| d == &BigInt::from(1))
}

/// Determinant of the square minor on `cols` and the rows supporting them.
/// Fails unless those columns are supported on exactly `cols.len()` rows.
pub fn minor_check(e: &Embedding, cols: &[usize]) -> Result<BigInt> {
    if cols.iter().any(|&c| c >= e.k()) {
        return Err(Error::domain("column index out of range"));
    }
    let rows: Vec<usize> = support_set(e, cols).iter().collect();
    if rows.len() != cols.len() {
        return Err(Error::domain(format!(
            "{} columns are supported on {} rows, not a square minor",
            cols.len(),
            rows.len()
        )));
    }
    e.matrix.submatrix(&rows, cols).determinant()
}

/// `U_S`: the coordinates on which some vertex of `vertices` is nonzero.
pub fn support_set(e: &Embedding, vertices: &[usize]) -> SupportSet {
    SupportSet(
        vertices
            .iter()
            .flat_map(|&v| {
                e.cols[v]
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(i, _)| i)
            })
            .collect(),
    )
}

/// Shortest prefixes `(n0, m0)`, in lexicographic order, with
/// `r0 + s0 = 1` where `-1/r0 = [a1..a_n0]` and `-1/s0 = [b1..b_m0]`.
/// Requires `r + s >= 1` for the full fractions.
pub fn truncate_legs(cf1: &ContinuedFraction, cf2: &ContinuedFraction) -> Result<(usize, usize)> {
    let rs: Vec<Rational> = (1..=cf1.len()).map(|l| prefix_r(cf1, l)).collect::<Result<_>>()?;
    let ss: Vec<Rational> = (1..=cf2.len()).map(|l| prefix_r(cf2, l)).collect::<Result<_>>()?;
    let full = rs.last().expect("nonempty") + ss.last().expect("nonempty");
    if full < Rational::one() {
        return Err(Error::domain(format!(
            "legs {cf1:?} and {cf2:?} have r + s = {full} < 1"
        )));
    }
    for (a, r) in rs.iter().enumerate() {
        for (b, s) in ss.iter().enumerate() {
            if r + s == Rational::one() {
                return Ok((a + 1, b + 1));
            }
        }
    }
    Err(Error::LemmaViolation(format!(
        "no prefixes of {cf1:?} and {cf2:?} have r0 + s0 = 1"
    )))
}

/// Checks the rigidity statement for two linear chains `psi1`, `psi2`
/// (vertex indices, first vertex first) whose fractions satisfy
/// `r + s = 1` and whose first vertices share a coordinate: on the
/// restriction to `U_psi`, `U_psi1 = U_psi2` and `|U_psi| = |psi1| + |psi2|`.
pub fn rigidity_check(e: &Embedding, psi1: &[usize], psi2: &[usize]) -> Result<bool> {
    if psi1.is_empty() || psi2.is_empty() {
        return Err(Error::domain("both components must be nonempty"));
    }
    let all: Vec<usize> = psi1.iter().chain(psi2).copied().collect();
    if all.iter().any(|&v| v >= e.k()) {
        return Err(Error::domain("vertex index out of range"));
    }
    if all.iter().collect::<BTreeSet<_>>().len() != all.len() {
        return Err(Error::domain("components must be disjoint and repetition-free"));
    }
    let gram = e.gram();
    let entry = |a: usize, b: usize| gram.get(a, b).to_i64().unwrap_or(i64::MIN);
    let linear = |chain: &[usize]| {
        chain.iter().enumerate().all(|(x, &a)| {
            chain.iter().enumerate().all(|(y, &b)| {
                x == y || entry(a, b) == i64::from(x.abs_diff(y) == 1)
            })
        })
    };
    if !linear(psi1) || !linear(psi2) {
        return Err(Error::domain("components must be linear chains"));
    }
    if psi1.iter().any(|&a| psi2.iter().any(|&b| entry(a, b) != 0)) {
        return Err(Error::domain("components must not be joined by an edge"));
    }
    let cf = |chain: &[usize]| ContinuedFraction::new(chain.iter().map(|&v| entry(v, v)).collect());
    let (cf1, cf2) = (cf(psi1)?, cf(psi2)?);
    let r = prefix_r(&cf1, cf1.len())?;
    let s = prefix_r(&cf2, cf2.len())?;
    if r.clone() + s.clone() != Rational::one() {
        return Err(Error::domain(format!("r + s = {} is not 1", r + s)));
    }
    let u_first1 = support_set(e, &psi1[..1]);
    let u_first2 = support_set(e, &psi2[..1]);
    if u_first1.0.is_disjoint(&u_first2.0) {
        return Err(Error::domain("first vertices share no coordinate"));
    }
    let u1 = support_set(e, psi1);
    let u2 = support_set(e, psi2);
    let touched = support_set(e, &all);
    Ok(u1 == u2 && touched.len() == all.len())
}

/// Per-`n` count of embeddings examined when that level was exhausted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SearchStats {
    pub exhausted_levels: Vec<(usize, u64)>,
}

impl SearchStats {
    pub fn embeddings_examined(&self) -> u64 {
        self.exhausted_levels.iter().map(|(_, c)| c).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Obstruction {
    /// No embedding with `n` up to the bound has a surjective transpose.
    Obstructed { n_max: usize, stats: SearchStats },
    /// The first surjective-transpose embedding at the smallest `n`.
    NotObstructed { witness: Embedding, stats: SearchStats },
}

impl Obstruction {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Obstruction::Obstructed { .. })
    }

    pub fn witness(&self) -> Option<&Embedding> {
        match self {
            Obstruction::NotObstructed { witness, .. } => Some(witness),
            Obstruction::Obstructed { .. } => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            Obstruction::Obstructed { stats, .. } | Obstruction::NotObstructed { stats, .. } => stats,
        }
    }
}

/// Searches `n = k, k+1, ..., n_max` for an embedding of the plumbing
/// lattice whose transpose is surjective.
///
/// The default `n_max` is the sum of absolute weights: zero rows can be
/// deleted without changing the Gram matrix or the image of `A^T`, and a
/// zero-row-free embedding has at most `|w(v)|` nonzero entries in the
/// column of `v`.
pub fn qa_lattice_obstruction(g: &PlumbingGraph, options: &SearchOptions) -> Result<Obstruction> {
    if !g.is_negative_definite() {
        return Err(Error::precondition("plumbing is not negative definite"));
    }
    let problem = search::Problem::new(&g.adjacency_matrix())?;
    let k = problem.k();
    let bound = usize::try_from(g.total_weight()).unwrap_or(usize::MAX);
    debug_assert_eq!(bound, problem.max_coordinates());
    let n_max = options.n_max.unwrap_or(bound);
    let mut stats = SearchStats::default();
    for n in k..=n_max {
        let (found, seen) = search::first_surjective(&problem, n, options.parallel);
        if let Some(witness) = found {
            return Ok(Obstruction::NotObstructed { witness, stats });
        }
        stats
            .exhausted_levels
            .push((n, seen.expect("exhausted level reports its count")));
    }
    Ok(Obstruction::Obstructed { n_max, stats })
}

/// Number of canonical embeddings into exactly `n` coordinates.
pub fn count_embeddings(q: &IntegerMatrix, n: usize, parallel: bool) -> Result<u64> {
    let problem = search::Problem::new(q)?;
    Ok(search::count_embeddings(&problem, n, parallel))
}

/// `|det|` of every square minor cut out by a support-condition column
/// subset; used to audit the unit-minor consequence of surjectivity.
pub fn supported_minors(e: &Embedding) -> Vec<(Vec<usize>, BigInt)> {
    let k = e.k();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << k) {
        let cols: Vec<usize> = (0..k).filter(|c| mask >> c & 1 == 1).collect();
        if let Ok(d) = minor_check(e, &cols) {
            out.push((cols, d.abs()));
        }
    }
    out
}
