//! Coefficients in the rationalized Lazard ring, written in the basis of
//! logarithm coefficients `m_1, m_2, ...` (so `deg m_k = -k`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Pow, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = malachite_q::Rational;

/// The handful of rational helpers the crate relies on.
pub trait QExt: Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn recip(&self) -> Self;
    fn abs(&self) -> Self;
    fn powu(&self, e: u64) -> Self;
}

impl QExt for Q {
    fn zero() -> Self {
        Q::ZERO
    }

    fn one() -> Self {
        Q::ONE
    }

    fn is_zero(&self) -> bool {
        *self == Q::ZERO
    }

    fn is_one(&self) -> bool {
        *self == Q::ONE
    }

    fn is_negative(&self) -> bool {
        *self < Q::ZERO
    }

    fn recip(&self) -> Self {
        Reciprocal::reciprocal(self)
    }

    fn abs(&self) -> Self {
        Abs::abs(self)
    }

    fn powu(&self, e: u64) -> Self {
        Pow::pow(self, e)
    }
}

pub fn q(n: i64) -> Q {
    Q::from(n)
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::from_signeds(n, d)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    Q::from_str(t).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

/// Exponent vector of a monomial in the `m_k`; entry `k-1` holds the
/// exponent of `m_k`. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MMono(Vec<u8>);

impl MMono {
    pub fn one() -> Self {
        MMono(Vec::new())
    }

    /// `m_k^e`
    pub fn var(k: usize, e: u8) -> Self {
        assert!(k >= 1, "m_0 does not exist");
        let mut v = vec![0; k];
        v[k - 1] = e;
        MMono::from_vec(v)
    }

    pub fn from_vec(mut v: Vec<u8>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        MMono(v)
    }

    /// Sparse `(k, e)` pairs with `e > 0`.
    pub fn pairs(&self) -> Vec<(usize, u8)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (i + 1, *e))
            .collect()
    }

    pub fn from_pairs(pairs: &[(usize, u8)]) -> Self {
        let len = pairs.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut v = vec![0u8; len];
        for &(k, e) in pairs {
            assert!(k >= 1, "m_0 does not exist");
            v[k - 1] += e;
        }
        MMono::from_vec(v)
    }

    /// `Σ k·e_k`; the cohomological degree is the negative of this.
    pub fn weight(&self) -> usize {
        self.0.iter().enumerate().map(|(i, e)| (i + 1) * *e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &MMono) -> MMono {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut v = long.clone();
        for (i, e) in short.iter().enumerate() {
            v[i] += e;
        }
        MMono(v)
    }
}

/// A polynomial in `m_1, m_2, ...` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct LazardCoefficient {
    terms: BTreeMap<MMono, Q>,
}

impl LazardCoefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(MMono::one(), c)
    }

    /// The generator `m_k`.
    pub fn m(k: usize) -> Self {
        Self::monomial(MMono::var(k, 1), Q::one())
    }

    pub fn monomial(m: MMono, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LazardCoefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MMono, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MMono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The rational value if no `m_k` occurs.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&MMono::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// `Some(w)` if every monomial has weight `w`.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(MMono::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn add_term(&mut self, m: &MMono, c: &Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &LazardCoefficient) {
        for (m, c) in &other.terms {
            self.add_term(m, c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &LazardCoefficient) {
        for (m, c) in &other.terms {
            self.add_term(m, &-c);
        }
    }

    /// `self += a * b`
    pub fn add_product(&mut self, a: &LazardCoefficient, b: &LazardCoefficient) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(&ma.mul(mb), &(ca * cb));
            }
        }
    }

    pub fn scale(&self, c: &Q) -> LazardCoefficient {
        if c.is_zero() {
            return Self::zero();
        }
        LazardCoefficient {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> LazardCoefficient {
        LazardCoefficient {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), -v)).collect(),
        }
    }

    pub fn add(&self, other: &LazardCoefficient) -> LazardCoefficient {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }

    pub fn sub(&self, other: &LazardCoefficient) -> LazardCoefficient {
        let mut r = self.clone();
        r.sub_assign_ref(other);
        r
    }

    pub fn mul(&self, other: &LazardCoefficient) -> LazardCoefficient {
        let mut r = LazardCoefficient::zero();
        r.add_product(self, other);
        r
    }

    /// Substitutes rational values for the `m_k`. Every generator occurring
    /// must be assigned.
    pub fn evaluate(&self, values: &BTreeMap<usize, Q>) -> Result<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, e) in m.pairs() {
                let x = values.get(&k).ok_or(Error::IncompleteAssignment(k))?;
                v *= x.powu(e as u64);
            }
            total += v;
        }
        Ok(total)
    }

    /// Like [`evaluate`](Self::evaluate) but only substitutes the assigned
    /// generators.
    pub fn partially_evaluate(&self, values: &BTreeMap<usize, Q>) -> LazardCoefficient {
        let mut r = LazardCoefficient::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            let mut rest = Vec::new();
            for (k, e) in m.pairs() {
                match values.get(&k) {
                    Some(x) => v *= x.powu(e as u64),
                    None => rest.push((k, e)),
                }
            }
            r.add_term(&MMono::from_pairs(&rest), &v);
        }
        r
    }
}

fn fmt_mmono(m: &MMono) -> String {
    m.pairs()
        .iter()
        .map(|&(k, e)| if e == 1 { format!("m{k}") } else { format!("m{k}^{e}") })
        .collect::<Vec<_>>()
        .join(" ")
}

impl LazardCoefficient {
    /// Terms in display order: lexicographically largest exponent vector first.
    pub(crate) fn display_terms(&self) -> impl Iterator<Item = (&MMono, &Q)> {
        self.terms.iter().rev()
    }

    /// Renders `c·m` pieces with signs split off: `(negative, body)`.
    pub(crate) fn signed_pieces(&self) -> Vec<(bool, String)> {
        self.display_terms()
            .map(|(m, c)| {
                let neg = c.is_negative();
                let a = Abs::abs(c);
                let body = if m.is_one() {
                    a.to_string()
                } else if a.is_one() {
                    fmt_mmono(m)
                } else {
                    format!("{a} {}", fmt_mmono(m))
                };
                (neg, body)
            })
            .collect()
    }
}

pub(crate) fn join_signed(pieces: &[(bool, String)]) -> String {
    let mut s = String::new();
    for (i, (neg, body)) in pieces.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for LazardCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", join_signed(&self.signed_pieces()))
    }
}
