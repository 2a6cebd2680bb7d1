//! Laufer's algorithm deciding whether a negative definite plumbing is a
//! rational surface singularity.
//!
//! Start from the all-ones cycle `K0`. At each step compute the pairings
//! `Q * K`. A pairing `>= 2` stops with "not rational"; otherwise if some
//! pairing equals 1 that vertex is added to `K`; otherwise every pairing
//! is `<= 0` and the singularity is rational with fundamental cycle `K`.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::montesinos::MontesinosLink;
use crate::plumbing::{build_graph, PlumbingGraph};

pub const DEFAULT_STEP_GUARD: u64 = 1_000_000;

/// Which vertex to increment when several pairings equal 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SelectionPolicy {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Uniform choice from a ChaCha8 stream with the given seed.
    Random(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LauferConfig {
    pub policy: SelectionPolicy,
    pub step_guard: u64,
}

impl Default for LauferConfig {
    fn default() -> Self {
        LauferConfig {
            policy: SelectionPolicy::LowestIndex,
            step_guard: DEFAULT_STEP_GUARD,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LauferVerdict {
    Rational,
    NotRational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LauferResult {
    pub verdict: LauferVerdict,
    /// Number of increments performed.
    pub steps: u64,
    /// `K` at termination.
    pub cycle: Vec<BigInt>,
    /// `Q * cycle` at termination.
    pub pairings: Vec<BigInt>,
    /// Lowest vertex whose pairing reached 2; present iff `NotRational`.
    pub witness: Option<usize>,
}

impl LauferResult {
    pub fn is_rational(&self) -> bool {
        self.verdict == LauferVerdict::Rational
    }

    pub fn witness_pairing(&self) -> Option<&BigInt> {
        self.witness.map(|j| &self.pairings[j])
    }
}

pub fn laufer_run(q: &IntegerMatrix, policy: SelectionPolicy) -> Result<LauferResult> {
    laufer_run_with(
        q,
        &LauferConfig {
            policy,
            ..LauferConfig::default()
        },
    )
}

pub fn laufer_run_with(q: &IntegerMatrix, config: &LauferConfig) -> Result<LauferResult> {
    if !q.is_symmetric() || !q.is_negative_definite() {
        return Err(Error::precondition(
            "Laufer's algorithm needs a symmetric negative definite form",
        ));
    }
    let k = q.rows();
    let two = BigInt::from(2);
    let one = BigInt::one();
    let mut rng = match config.policy {
        SelectionPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cycle = vec![BigInt::one(); k];
    let mut pairings = q.mul_vec(&cycle);
    let mut steps = 0u64;
    loop {
        if let Some(j) = pairings.iter().position(|x| *x >= two) {
            return Ok(LauferResult {
                verdict: LauferVerdict::NotRational,
                steps,
                cycle,
                pairings,
                witness: Some(j),
            });
        }
        let eligible: Vec<usize> = (0..k).filter(|&j| pairings[j] == one).collect();
        let chosen = match (config.policy, eligible.as_slice()) {
            (_, []) => {
                return Ok(LauferResult {
                    verdict: LauferVerdict::Rational,
                    steps,
                    cycle,
                    pairings,
                    witness: None,
                })
            }
            (SelectionPolicy::LowestIndex, e) => e[0],
            (SelectionPolicy::HighestIndex, e) => e[e.len() - 1],
            (SelectionPolicy::Random(_), e) => {
                let rng = rng.as_mut().expect("seeded for the random policy");
                e[rng.random_range(0..e.len())]
            }
        };
        if steps >= config.step_guard {
            return Err(Error::StepGuard(steps));
        }
        cycle[chosen] += 1;
        // update Q * K by the chosen column
        for (i, p) in pairings.iter_mut().enumerate() {
            *p += q.get(i, chosen);
        }
        steps += 1;
    }
}

/// The negative definite plumbing of the link or of its mirror, whichever
/// has `epsilon < 0`, together with the Laufer run on it.
#[derive(Clone, Debug)]
pub struct LspaceCheck {
    pub reflected: bool,
    pub graph: PlumbingGraph,
    pub laufer: LauferResult,
}

pub fn lspace_check(link: &MontesinosLink, config: &LauferConfig) -> Result<LspaceCheck> {
    let standard = link.canonical_form();
    if standard.epsilon().is_zero() {
        return Err(Error::domain(format!(
            "{link} has determinant 0; its double branched cover is not a rational homology sphere"
        )));
    }
    let reflected = !standard.epsilon().is_negative();
    let oriented = if reflected {
        standard.reflect().canonical_form()
    } else {
        standard
    };
    let graph = build_graph(&oriented.to_negative_form())?;
    if !graph.is_negative_definite() {
        return Err(Error::precondition(format!(
            "plumbing for {oriented} is not negative definite"
        )));
    }
    let laufer = laufer_run_with(&graph.adjacency_matrix(), config)?;
    Ok(LspaceCheck {
        reflected,
        graph,
        laufer,
    })
}

/// Whether the double branched cover is an L-space, decided by Laufer's
/// algorithm on the star-shaped negative definite plumbing.
pub fn is_lspace(link: &MontesinosLink) -> Result<bool> {
    Ok(lspace_check(link, &LauferConfig::default())?.laufer.is_rational())
}
