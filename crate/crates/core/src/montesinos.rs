//! Montesinos link parameters `M(e; t1, ..., tp)`.
//!
//! A tangle `t` is stored as a reduced rational and read as `alpha/beta`
//! with `alpha > 0`, so the sign lives on `beta`. Slide moves trade a full
//! twist between a tangle and `e`:
//! `(e, alpha/beta) <-> (e + 1, alpha/(beta + alpha))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MontesinosLink {
    e: BigInt,
    tangles: Vec<Rational>,
}

impl MontesinosLink {
    pub fn new(e: impl Into<BigInt>, tangles: Vec<Rational>) -> Result<Self> {
        if tangles.is_empty() {
            return Err(Error::domain("a Montesinos link needs at least one tangle"));
        }
        for t in &tangles {
            if t.numer().abs() < BigInt::from(2) {
                return Err(Error::domain(format!(
                    "tangle {t} has numerator of absolute value < 2; \
                     Montesinos tangles need alpha >= 2"
                )));
            }
        }
        Ok(MontesinosLink {
            e: e.into(),
            tangles,
        })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_pairs(e: i64, tangles: &[(i64, i64)]) -> Result<Self> {
        let ts = tangles
            .iter()
            .map(|&(a, b)| Rational::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        MontesinosLink::new(e, ts)
    }

    pub fn e(&self) -> &BigInt {
        &self.e
    }

    pub fn tangles(&self) -> &[Rational] {
        &self.tangles
    }

    pub fn p(&self) -> usize {
        self.tangles.len()
    }

    pub fn alpha(&self, i: usize) -> BigInt {
        self.tangles[i].numer().abs()
    }

    pub fn beta(&self, i: usize) -> BigInt {
        let t = &self.tangles[i];
        if t.numer().is_negative() {
            -t.denom()
        } else {
            t.denom().clone()
        }
    }

    /// `e - sum(beta_i / alpha_i)`; controls the sign of the plumbing form.
    pub fn epsilon(&self) -> Rational {
        let sum: Rational = self
            .tangles
            .iter()
            .map(|t| t.recip().expect("tangles are nonzero"))
            .sum();
        Rational::from(self.e.clone()) - sum
    }

    /// `|alpha_1 ... alpha_p * epsilon|`.
    pub fn determinant(&self) -> BigInt {
        let alphas: BigInt = (0..self.p()).map(|i| self.alpha(i)).product();
        let value = Rational::from(alphas) * self.epsilon();
        debug_assert!(value.is_integer());
        value.numer().abs()
    }

    /// One slide move on tangle `i`: `twists > 0` applies
    /// `(e, alpha/beta) -> (e + 1, alpha/(beta + alpha))` that many times,
    /// negative values the inverse.
    pub fn slide(&self, i: usize, twists: i64) -> Result<Self> {
        if i >= self.p() {
            return Err(Error::domain(format!("tangle index {i} out of range")));
        }
        let alpha = self.alpha(i);
        let beta = self.beta(i) + &alpha * twists;
        if beta.is_zero() {
            return Err(Error::domain("slide would produce an infinite tangle"));
        }
        let mut tangles = self.tangles.clone();
        tangles[i] = Rational::new(alpha, beta)?;
        Ok(MontesinosLink {
            e: &self.e + twists,
            tangles,
        })
    }

    /// Replaces each `beta_i` by `beta_i mod alpha_i`, moving the twists into `e`.
    pub fn to_standard_form(&self) -> StandardForm {
        let mut e = self.e.clone();
        let tangles = (0..self.p())
            .map(|i| {
                let alpha = self.alpha(i);
                let beta = self.beta(i);
                let reduced = beta.mod_floor(&alpha);
                e += (&reduced - &beta) / &alpha;
                Rational::new(alpha, reduced).expect("nonzero residue")
            })
            .collect();
        StandardForm(MontesinosLink { e, tangles })
    }

    /// Standard form with tangles sorted in non-increasing order.
    pub fn canonical_form(&self) -> StandardForm {
        let mut sf = self.to_standard_form();
        sf.0.tangles.sort_by(|a, b| b.cmp(a));
        sf
    }
}

impl fmt::Display for MontesinosLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts: Vec<String> = self.tangles.iter().map(Rational::to_string).collect();
        write!(f, "M({}; {})", self.e, ts.join(", "))
    }
}

/// Grammar: `M(e; a1/b1, a2/b2, ...)`, whitespace optional, integer
/// tangles allowed.
impl FromStr for MontesinosLink {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('M')
            .ok_or_else(|| Error::parse(first_token(body), "expected `M(`"))?
            .trim_start();
        let body = body
            .strip_prefix('(')
            .ok_or_else(|| Error::parse(first_token(body), "expected `(` after `M`"))?;
        let body = body
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(s.trim(), "missing closing `)`"))?;
        let (e_text, rest) = body
            .split_once(';')
            .ok_or_else(|| Error::parse(body.trim(), "expected `;` after the twist count"))?;
        let e_text = e_text.trim();
        let e: BigInt = parse_integer(e_text)?;
        let tangles = rest
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(Error::parse(rest.trim(), "empty tangle entry"));
                }
                tok.parse::<Rational>()
            })
            .collect::<Result<Vec<_>>>()?;
        MontesinosLink::new(e, tangles)
    }
}

fn parse_integer(tok: &str) -> Result<BigInt> {
    let digits = tok.strip_prefix(['+', '-']).unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(tok, "expected an integer"));
    }
    tok.parse().map_err(|_| Error::parse(tok, "expected an integer"))
}

fn first_token(s: &str) -> &str {
    let end = s
        .char_indices()
        .nth(1)
        .map_or(s.len(), |(i, _)| i);
    if s.is_empty() {
        "<empty>"
    } else {
        &s[..end]
    }
}

/// A link with every tangle `> 1`, i.e. `0 < beta_i < alpha_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardForm(MontesinosLink);

impl StandardForm {
    pub fn new(link: MontesinosLink) -> Result<Self> {
        if link.tangles.iter().any(|t| t.cmp_integer(1).is_le()) {
            return Err(Error::domain(format!("{link} is not in standard form")));
        }
        Ok(StandardForm(link))
    }

    pub fn link(&self) -> &MontesinosLink {
        &self.0
    }

    pub fn into_link(self) -> MontesinosLink {
        self.0
    }

    pub fn e(&self) -> &BigInt {
        &self.0.e
    }

    pub fn p(&self) -> usize {
        self.0.p()
    }

    pub fn tangles(&self) -> &[Rational] {
        &self.0.tangles
    }

    pub fn epsilon(&self) -> Rational {
        self.0.epsilon()
    }

    pub fn determinant(&self) -> BigInt {
        self.0.determinant()
    }

    /// The mirror image `M(p - e; alpha_i/(alpha_i - beta_i))`.
    pub fn reflect(&self) -> StandardForm {
        let l = &self.0;
        let tangles = (0..l.p())
            .map(|i| {
                let alpha = l.alpha(i);
                let beta = l.beta(i);
                Rational::new(alpha.clone(), alpha - beta).expect("beta < alpha")
            })
            .collect();
        let e = BigInt::from(l.p()) - &l.e;
        StandardForm(MontesinosLink { e, tangles })
    }

    /// `M(e - p; alpha_i/(beta_i - alpha_i))`, every tangle `< -1`; the
    /// input to the plumbing construction.
    pub fn to_negative_form(&self) -> MontesinosLink {
        let l = &self.0;
        let tangles = (0..l.p())
            .map(|i| {
                let alpha = l.alpha(i);
                let beta = l.beta(i);
                Rational::new(alpha.clone(), beta - alpha).expect("beta < alpha")
            })
            .collect();
        let e = &l.e - BigInt::from(l.p());
        MontesinosLink { e, tangles }
    }

    pub fn canonical_form(&self) -> StandardForm {
        self.0.canonical_form()
    }

    /// `e` as a machine integer; used where it is compared with `p`.
    pub fn e_i64(&self) -> Option<i64> {
        self.0.e.to_i64()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.tangles.windows(2).all(|w| w[0] >= w[1])
    }

    pub(crate) fn alpha_beta(&self, i: usize) -> (BigInt, BigInt) {
        (self.0.alpha(i), self.0.beta(i))
    }

    pub(crate) fn from_parts_unchecked(e: BigInt, tangles: Vec<Rational>) -> Self {
        debug_assert!(tangles.iter().all(|t| t.cmp_integer(1).is_gt()));
        StandardForm(MontesinosLink { e, tangles })
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
