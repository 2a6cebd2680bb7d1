//! The arithmetic classification of quasi-alternating Montesinos links and
//! the independent re-derivation of each verdict from the obstructions.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::laufer::{lspace_check, LauferConfig, LauferResult};
use crate::lattice::{qa_lattice_obstruction, Obstruction, SearchOptions};
use crate::montesinos::{MontesinosLink, StandardForm};
use crate::plumbing::PlumbingGraph;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Status {
    QA,
    NotQA,
}

/// Why a verdict was reached.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Condition {
    /// `e < 1`.
    Condition1,
    /// `e = 1` and `alpha_i/(alpha_i - beta_i) > alpha_j/beta_j` for some `i != j`.
    Condition2,
    /// `e > p - 1`.
    Condition3,
    /// `e = p - 1` and `alpha_i/(alpha_i - beta_i) < alpha_j/beta_j` for some `i != j`.
    Condition4,
    DetZero,
    NoConditionHolds,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::QA => "QA",
            Status::NotQA => "NotQA",
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub status: Status,
    pub reason: Condition,
    /// `(i, j)` into the tangles of `normalized`, for conditions 2 and 4.
    pub witness_pair: Option<(usize, usize)>,
    /// Canonical standard form.
    pub normalized: StandardForm,
    pub epsilon: Rational,
    pub det: BigInt,
}

/// `alpha/(alpha - beta)` for the tangle `alpha/beta > 1`.
fn mirror(t: &Rational) -> Rational {
    t * &(t - &Rational::one()).recip().expect("tangle > 1")
}

fn find_pair(sf: &StandardForm, holds: impl Fn(&Rational, &Rational) -> bool) -> Option<(usize, usize)> {
    let ts = sf.tangles();
    let mirrors: Vec<Rational> = ts.iter().map(mirror).collect();
    (0..ts.len())
        .flat_map(|i| (0..ts.len()).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && holds(&mirrors[i], &ts[j]))
}

pub fn classify(link: &MontesinosLink) -> Verdict {
    let normalized = link.canonical_form();
    let epsilon = normalized.epsilon();
    let det = normalized.determinant();
    let e = normalized.e().clone();
    let p = BigInt::from(normalized.p());
    let one = BigInt::one();

    let (reason, witness_pair) = if det.is_zero() {
        (Condition::DetZero, None)
    } else if e < one {
        (Condition::Condition1, None)
    } else if e > &p - 1 {
        (Condition::Condition3, None)
    } else if let Some(pair) = (e == one)
        .then(|| find_pair(&normalized, |m, t| m > t))
        .flatten()
    {
        (Condition::Condition2, Some(pair))
    } else if let Some(pair) = (e == &p - 1)
        .then(|| find_pair(&normalized, |m, t| m < t))
        .flatten()
    {
        (Condition::Condition4, Some(pair))
    } else {
        (Condition::NoConditionHolds, None)
    };
    let status = match reason {
        Condition::DetZero | Condition::NoConditionHolds => Status::NotQA,
        _ => Status::QA,
    };
    Verdict {
        status,
        reason,
        witness_pair,
        normalized,
        epsilon,
        det,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Branch {
    LauferNotLSpace,
    LatticeObstructed,
    DetZero,
    PositiveCheck,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct Evidence {
    pub branch: Branch,
    /// Whether the mirror image was used to reach `epsilon < 0`.
    pub reflected: bool,
    /// The negative definite plumbing; absent when `det = 0`.
    pub graph: Option<PlumbingGraph>,
    pub laufer: Option<LauferResult>,
    pub obstruction: Option<Obstruction>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub laufer: LauferConfig,
    pub search: SearchOptions,
}

pub fn verify(link: &MontesinosLink) -> Result<Evidence> {
    verify_with(link, &VerifyOptions::default())
}

/// Re-derives the verdict on `link`: the determinant, then Laufer's
/// algorithm on the negative definite plumbing, then the embedding search.
pub fn verify_with(link: &MontesinosLink, options: &VerifyOptions) -> Result<Evidence> {
    if link.determinant().is_zero() {
        return Ok(Evidence {
            branch: Branch::DetZero,
            reflected: false,
            graph: None,
            laufer: None,
            obstruction: None,
        });
    }
    let check = lspace_check(link, &options.laufer)?;
    if !check.laufer.is_rational() {
        return Ok(Evidence {
            branch: Branch::LauferNotLSpace,
            reflected: check.reflected,
            graph: Some(check.graph),
            laufer: Some(check.laufer),
            obstruction: None,
        });
    }
    let obstruction = qa_lattice_obstruction(&check.graph, &options.search)?;
    let branch = if obstruction.is_obstructed() {
        Branch::LatticeObstructed
    } else {
        Branch::PositiveCheck
    };
    Ok(Evidence {
        branch,
        reflected: check.reflected,
        graph: Some(check.graph),
        laufer: Some(check.laufer),
        obstruction: Some(obstruction),
    })
}

/// Canonical links with `1 <= p <= p_max`, `2 <= alpha_i <= alpha_max` and
/// `e_min <= e <= e_max`, ordered by `p`, then `e`, then tangle multiset.
pub fn enumerate_family(p_max: usize, alpha_max: u32, e_min: i64, e_max: i64) -> Result<Family> {
    if p_max == 0 {
        return Err(Error::domain("p_max must be at least 1"));
    }
    Family::new(1, p_max, alpha_max, e_min, e_max)
}

/// As [`enumerate_family`] with exactly `p` tangles.
pub fn enumerate_family_with_arity(p: usize, alpha_max: u32, e_min: i64, e_max: i64) -> Result<Family> {
    if p == 0 {
        return Err(Error::domain("p must be at least 1"));
    }
    Family::new(p, p, alpha_max, e_min, e_max)
}

/// Lazily generated family; see [`enumerate_family`].
#[derive(Clone, Debug)]
pub struct Family {
    /// Every admissible tangle, largest first.
    tangles: Vec<Rational>,
    p: usize,
    p_max: usize,
    e: i64,
    e_min: i64,
    e_max: i64,
    /// Non-decreasing indices into `tangles`; `None` when exhausted.
    current: Option<Vec<usize>>,
}

impl Family {
    fn new(p_min: usize, p_max: usize, alpha_max: u32, e_min: i64, e_max: i64) -> Result<Self> {
        if alpha_max < 2 {
            return Err(Error::domain("alpha_max must be at least 2"));
        }
        if e_min > e_max {
            return Err(Error::domain(format!("empty range e_min = {e_min} > e_max = {e_max}")));
        }
        let mut tangles: Vec<Rational> = (2..=i64::from(alpha_max))
            .flat_map(|a| {
                (1..a)
                    .filter(move |b| num_integer::gcd(a, *b) == 1)
                    .map(move |b| Rational::new(a, b).expect("nonzero"))
            })
            .collect();
        tangles.sort_by(|x, y| y.cmp(x));
        Ok(Family {
            tangles,
            p: p_min,
            p_max,
            e: e_min,
            e_min,
            e_max,
            current: Some(vec![0; p_min]),
        })
    }

    fn advance(&mut self) {
        let Some(idx) = self.current.as_mut() else { return };
        let top = self.tangles.len() - 1;
        if let Some(pos) = idx.iter().rposition(|&i| i < top) {
            let v = idx[pos] + 1;
            idx[pos..].iter_mut().for_each(|i| *i = v);
            return;
        }
        if self.e < self.e_max {
            self.e += 1;
            idx.iter_mut().for_each(|i| *i = 0);
        } else if self.p < self.p_max {
            self.p += 1;
            self.e = self.e_min;
            self.current = Some(vec![0; self.p]);
        } else {
            self.current = None;
        }
    }
}

impl Iterator for Family {
    type Item = StandardForm;

    fn next(&mut self) -> Option<StandardForm> {
        let idx = self.current.as_ref()?;
        let tangles = idx.iter().map(|&i| self.tangles[i].clone()).collect();
        let out = StandardForm::from_parts_unchecked(BigInt::from(self.e), tangles);
        self.advance();
        Some(out)
    }
}

/// A human-readable trace of a classification.
#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub evidence: Option<Evidence>,
    lines: Vec<String>,
}

impl Report {
    pub fn lines(&self) -> &[String] {
        &self.lines
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn signed(x: &BigInt) -> String {
    if x.is_negative() {
        format!("\u{2212}{}", x.abs())
    } else {
        x.to_string()
    }
}

fn frac(x: &Rational) -> String {
    if x.is_integer() {
        signed(x.numer())
    } else {
        format!("{}/{}", signed(x.numer()), x.denom())
    }
}

/// `|a1...ap(e - b1/a1 - ... - bp/ap)| = det`, with the tangles in `sf` order.
fn det_line(sf: &StandardForm) -> String {
    let mut product = BigInt::one();
    let mut terms = signed(sf.e());
    for i in 0..sf.p() {
        let (a, b) = sf.alpha_beta(i);
        product *= &a;
        let _ = write!(terms, " \u{2212} {b}/{a}");
    }
    format!("|{product}({terms})| = {}", sf.determinant())
}

fn pair_lines(sf: &StandardForm, op: &str, holds: impl Fn(&Rational, &Rational) -> bool) -> Vec<String> {
    let ts = sf.tangles();
    let mut out = Vec::new();
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            if i == j {
                continue;
            }
            let m = mirror(&ts[i]);
            out.push(format!(
                "    i = {}, j = {}: {} {op} {}  {}",
                i + 1,
                j + 1,
                frac(&m),
                frac(&ts[j]),
                holds(&m, &ts[j])
            ));
        }
    }
    out
}

/// Normalization, `epsilon`, `det`, every condition instantiated, and
/// (when the conditions do not already settle it) the obstruction trace.
pub fn explain(link: &MontesinosLink) -> Result<Report> {
    explain_with(link, &VerifyOptions::default())
}

pub fn explain_with(link: &MontesinosLink, options: &VerifyOptions) -> Result<Report> {
    let verdict = classify(link);
    let standard = link.to_standard_form();
    let canonical = &verdict.normalized;
    let e = canonical.e();
    let p = canonical.p();
    let mut lines = vec![
        format!("input: {link}"),
        format!("standard form: {standard}"),
        format!("canonical form: {canonical}"),
        format!("epsilon = {}", verdict.epsilon),
        format!("det = {}", det_line(&standard)),
    ];

    let one = BigInt::one();
    let pm1 = BigInt::from(p) - 1;
    lines.push(format!("condition (1) e < 1: {} < 1  {}", signed(e), *e < one));
    lines.push(format!(
        "condition (3) e > p \u{2212} 1: {} > {}  {}",
        signed(e),
        signed(&pm1),
        *e > pm1
    ));
    let c2 = *e == one && find_pair(canonical, |m, t| m > t).is_some();
    lines.push(format!(
        "condition (2) e = 1 and a/(a \u{2212} b) > a/b for some i \u{2260} j: {c2}"
    ));
    lines.push(format!("  e = 1: {} = 1  {}", signed(e), *e == one));
    if *e == one {
        lines.extend(pair_lines(canonical, ">", |m, t| m > t));
    }
    let c4 = *e == pm1 && find_pair(canonical, |m, t| m < t).is_some();
    lines.push(format!(
        "condition (4) e = p \u{2212} 1 and a/(a \u{2212} b) < a/b for some i \u{2260} j: {c4}"
    ));
    lines.push(format!("  e = p \u{2212} 1: {} = {}  {}", signed(e), signed(&pm1), *e == pm1));
    if *e == pm1 {
        lines.extend(pair_lines(canonical, "<", |m, t| m < t));
    }
    let pair = verdict
        .witness_pair
        .map(|(i, j)| format!(" (i = {}, j = {})", i + 1, j + 1))
        .unwrap_or_default();
    lines.push(format!("verdict: {} by {}{pair}", verdict.status, verdict.reason));

    let evidence = match verdict.reason {
        Condition::DetZero => {
            lines.push("det = 0: the double branched cover has infinite first homology".into());
            None
        }
        Condition::NoConditionHolds => {
            let ev = verify_with(link, options)?;
            trace_evidence(&ev, &mut lines);
            Some(ev)
        }
        _ => {
            lines.push(format!("{} satisfied; no obstruction run needed", verdict.reason));
            None
        }
    };
    Ok(Report {
        verdict,
        evidence,
        lines,
    })
}

fn trace_evidence(ev: &Evidence, lines: &mut Vec<String>) {
    lines.push(format!(
        "orientation: {}",
        if ev.reflected {
            "epsilon > 0, using the mirror image"
        } else {
            "epsilon < 0, using the link itself"
        }
    ));
    if let Some(g) = &ev.graph {
        lines.push(format!("plumbing ({} vertices):", g.vertex_count()));
        lines.extend(g.to_string().lines().map(|l| format!("  {l}")));
    }
    if let Some(l) = &ev.laufer {
        let witness = match (l.witness, l.witness_pairing()) {
            (Some(j), Some(v)) => format!(", vertex {j} has pairing {v}"),
            _ => String::new(),
        };
        lines.push(format!("laufer: {:?} after {} steps{witness}", l.verdict, l.steps));
    }
    if let Some(o) = &ev.obstruction {
        for (n, count) in &o.stats().exhausted_levels {
            lines.push(format!("embedding search n = {n}: {count} embeddings, none surjective"));
        }
        match o {
            Obstruction::Obstructed { n_max, .. } => {
                lines.push(format!("no surjective-transpose embedding for n <= {n_max}"))
            }
            Obstruction::NotObstructed { witness, .. } => lines.push(format!(
                "surjective-transpose embedding into Z^{}",
                witness.n()
            )),
        }
    }
    lines.push(format!("branch: {}", ev.branch));
}

impl Verdict {
    /// `e` of the canonical form, when it fits in 64 bits.
    pub fn e(&self) -> Option<i64> {
        self.normalized.e().to_i64()
    }
}
