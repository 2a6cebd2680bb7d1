//! Star-shaped plumbing graphs and their intersection forms.
//!
//! Vertex order is fixed: the central vertex is index 0, then each leg in
//! input order, each leg listed from the vertex adjacent to the centre
//! outwards.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::{cf_expand, ContinuedFraction, Rational};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::montesinos::MontesinosLink;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlumbingGraph {
    central: i64,
    legs: Vec<Vec<i64>>,
}

/// Outcome of the two independent negative-definiteness tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Definiteness {
    /// Sylvester's criterion on `Q`.
    pub by_minors: bool,
    /// `e - sum(1/t_i) < 0` with `t_i` the leg values; `None` when some
    /// leg weight is `> -2`, where the criterion does not apply.
    pub by_sign_test: Option<bool>,
}

impl PlumbingGraph {
    pub fn new(central: i64, legs: Vec<Vec<i64>>) -> Result<Self> {
        if legs.iter().any(Vec::is_empty) {
            return Err(Error::domain("plumbing legs must be nonempty"));
        }
        Ok(PlumbingGraph { central, legs })
    }

    pub fn central_weight(&self) -> i64 {
        self.central
    }

    pub fn legs(&self) -> &[Vec<i64>] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.legs.iter().map(Vec::len).sum::<usize>()
    }

    /// Vertex indices of leg `i`, adjacent-to-centre first.
    pub fn leg_vertices(&self, i: usize) -> Range<usize> {
        let start = 1 + self.legs[..i].iter().map(Vec::len).sum::<usize>();
        start..start + self.legs[i].len()
    }

    pub fn weights(&self) -> Vec<i64> {
        std::iter::once(self.central)
            .chain(self.legs.iter().flatten().copied())
            .collect()
    }

    /// Sum of `|w(v)|` over all vertices.
    pub fn total_weight(&self) -> u64 {
        self.weights().iter().map(|w| w.unsigned_abs()).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 0..self.legs.len() {
            let mut prev = 0;
            for v in self.leg_vertices(i) {
                edges.push((prev, v));
                prev = v;
            }
        }
        edges
    }

    pub fn adjacency_matrix(&self) -> IntegerMatrix {
        let k = self.vertex_count();
        let mut q = IntegerMatrix::zeros(k, k);
        for (v, w) in self.weights().into_iter().enumerate() {
            q.set(v, v, BigInt::from(w));
        }
        for (a, b) in self.edges() {
            q.set(a, b, BigInt::one());
            q.set(b, a, BigInt::one());
        }
        q
    }

    pub fn definiteness(&self) -> Definiteness {
        let by_minors = self.adjacency_matrix().is_negative_definite();
        let by_sign_test = self.leg_fractions().ok().map(|fractions| {
            let sum: Rational = fractions
                .iter()
                .map(|t| t.recip().expect("leg values are < -1"))
                .sum();
            (Rational::from(self.central) - sum).is_negative()
        });
        Definiteness {
            by_minors,
            by_sign_test,
        }
    }

    pub fn is_negative_definite(&self) -> bool {
        let d = self.definiteness();
        debug_assert!(
            d.by_sign_test.is_none_or(|s| s == d.by_minors),
            "definiteness tests disagree on {self:?}"
        );
        d.by_minors
    }

    /// Values `[a1, ..., ah]` of the legs; fails if a weight is `> -2`.
    pub fn leg_fractions(&self) -> Result<Vec<Rational>> {
        self.legs
            .iter()
            .map(|leg| Ok(ContinuedFraction::new(leg.clone())?.value()))
            .collect()
    }

    /// `|det Q|`, the order of the first homology of the boundary
    /// (0 when infinite).
    pub fn h1_order(&self) -> BigInt {
        self.adjacency_matrix()
            .determinant()
            .expect("adjacency matrix is square")
            .abs()
    }
}

/// Star-shaped plumbing for a link whose tangles are all `< -1`.
pub fn build_graph(negative_form: &MontesinosLink) -> Result<PlumbingGraph> {
    let central = negative_form
        .e()
        .to_i64()
        .ok_or_else(|| Error::domain("central weight exceeds 64 bits"))?;
    let legs = negative_form
        .tangles()
        .iter()
        .map(|t| cf_expand(t).map(|cf| cf.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    PlumbingGraph::new(central, legs)
}

/// Text format: `central: <w>` then one `leg: <a1> <a2> ...` line per leg.
/// Blank lines and `#` comments are ignored.
impl FromStr for PlumbingGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut central = None;
        let mut legs = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line, "expected `central:` or `leg:`"))?;
            let ints = value
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::parse(tok, "expected an integer weight"))
                })
                .collect::<Result<Vec<_>>>()?;
            match key.trim() {
                "central" => {
                    if central.is_some() {
                        return Err(Error::parse(line, "duplicate `central:` line"));
                    }
                    match ints.as_slice() {
                        [w] => central = Some(*w),
                        _ => return Err(Error::parse(value.trim(), "expected one central weight")),
                    }
                }
                "leg" => {
                    if central.is_none() {
                        return Err(Error::parse(line, "`central:` must come first"));
                    }
                    if ints.is_empty() {
                        return Err(Error::parse(line, "empty leg"));
                    }
                    legs.push(ints);
                }
                other => return Err(Error::parse(other, "unknown key")),
            }
        }
        let central = central.ok_or_else(|| Error::parse("<eof>", "missing `central:` line"))?;
        PlumbingGraph::new(central, legs)
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "central: {}", self.central)?;
        for leg in &self.legs {
            let ws: Vec<String> = leg.iter().map(i64::to_string).collect();
            writeln!(f, "leg: {}", ws.join(" "))?;
        }
        Ok(())
    }
}
