//! Power series in `t_1..t_r` with Lazard coefficients, truncated at total
//! `t`-degree `D`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lazard::{join_signed, parse_q, q, LazardCoefficient, MMono, QExt, Q};

/// Exponent vector in the torus variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TMono(Vec<u8>);

impl TMono {
    pub fn zero(nvars: usize) -> Self {
        TMono(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        TMono(v)
    }

    pub fn new(exps: Vec<u8>) -> Self {
        TMono(exps)
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|e| *e as usize).sum()
    }

    fn mul(&self, other: &TMono) -> TMono {
        TMono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn with(&self, i: usize, e: u8) -> TMono {
        let mut v = self.0.clone();
        v[i] = e;
        TMono(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    nvars: usize,
    terms: BTreeMap<TMono, LazardCoefficient>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: usize) -> Self {
        TruncatedSeries { order, nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::constant(LazardCoefficient::one(), nvars, order)
    }

    pub fn constant(c: LazardCoefficient, nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(&TMono::zero(nvars), &c);
        s
    }

    pub fn rational(c: Q, nvars: usize, order: usize) -> Self {
        Self::constant(LazardCoefficient::constant(c), nvars, order)
    }

    /// The variable `t_{i+1}` (0-based index `i`).
    pub fn var(i: usize, nvars: usize, order: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(TMono::unit(nvars, i), LazardCoefficient::one(), order)
    }

    pub fn monomial(t: TMono, c: LazardCoefficient, order: usize) -> Self {
        let mut s = Self::zero(t.0.len(), order);
        s.add_term(&t, &c);
        s
    }

    /// Builds a univariate series from coefficients of `u^0, u^1, ...`.
    pub fn univariate(coeffs: Vec<LazardCoefficient>, order: usize) -> Self {
        let mut s = Self::zero(1, order);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(&TMono(vec![k as u8]), c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMono, &LazardCoefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u8]) -> LazardCoefficient {
        self.terms.get(&TMono(exps.to_vec())).cloned().unwrap_or_default()
    }

    /// Coefficient of `u^k` for a univariate series.
    pub fn coeff1(&self, k: usize) -> LazardCoefficient {
        assert_eq!(self.nvars, 1);
        self.coeff(&[k as u8])
    }

    pub fn constant_term(&self) -> LazardCoefficient {
        self.coeff(&vec![0; self.nvars])
    }

    /// Lowest total degree present, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(TMono::degree).min()
    }

    /// Adds `c·t` if `deg t ≤ D`; higher terms are dropped.
    pub fn add_term(&mut self, t: &TMono, c: &LazardCoefficient) {
        assert_eq!(t.0.len(), self.nvars, "monomial has wrong variable count");
        if c.is_zero() || t.degree() > self.order {
            return;
        }
        match self.terms.get_mut(t) {
            Some(v) => {
                v.add_assign_ref(c);
                if v.is_zero() {
                    self.terms.remove(t);
                }
            }
            None => {
                self.terms.insert(t.clone(), c.clone());
            }
        }
    }

    /// Drops everything above `order` (which must not exceed the current order).
    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() <= order)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets an exactly known polynomial at a higher order. The caller
    /// asserts that no terms above the current order were lost.
    pub fn assume_exact_to(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries { order, nvars: self.nvars, terms: self.terms.clone() }
    }

    pub fn homogeneous_part(&self, d: usize) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() == d)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Checks that every term has cohomological degree `deg`, where `t_i`
    /// has degree 1 and `m_k` degree `-k`.
    pub fn is_homogeneous(&self, deg: i64) -> bool {
        self.terms.iter().all(|(t, c)| {
            c.terms().all(|(m, _)| t.degree() as i64 - m.weight() as i64 == deg)
        })
    }

    /// Equality of the parts of degree `≤ d`.
    pub fn eq_through(&self, other: &TruncatedSeries, d: usize) -> bool {
        self.nvars == other.nvars && self.truncate(d).terms == other.truncate(d).terms
    }

    fn check_vars(&self, other: &TruncatedSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_vars(other)?;
        let mut r = self.truncate(other.order);
        for (t, c) in &other.terms {
            r.add_term(t, c);
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_vars(other)?;
        Ok(self.mul_trunc(other, self.order.min(other.order)))
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.checked_add(other).expect("series variable counts differ")
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.checked_sub(other).expect("series variable counts differ")
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.checked_mul(other).expect("series variable counts differ")
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> TruncatedSeries {
        let mut r = Self::zero(self.nvars, self.order);
        if c.is_zero() {
            return r;
        }
        for (t, v) in &self.terms {
            r.terms.insert(t.clone(), v.scale(c));
        }
        r
    }

    pub fn scale_lazard(&self, c: &LazardCoefficient) -> TruncatedSeries {
        let mut r = Self::zero(self.nvars, self.order);
        for (t, v) in &self.terms {
            r.add_term(t, &v.mul(c));
        }
        r
    }

    pub fn pow(&self, k: usize) -> TruncatedSeries {
        let mut r = Self::one(self.nvars, self.order);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    fn by_degree(&self) -> Vec<Vec<(&TMono, &LazardCoefficient)>> {
        let mut buckets = vec![Vec::new(); self.order + 1];
        for (t, c) in &self.terms {
            buckets[t.degree()].push((t, c));
        }
        buckets
    }

    /// Product truncated at `order`. The caller is responsible for `order`
    /// not exceeding what the factors determine.
    fn mul_trunc(&self, other: &TruncatedSeries, order: usize) -> TruncatedSeries {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<TMono, LazardCoefficient> = BTreeMap::new();
        let ob = other.by_degree();
        for (ta, ca) in &self.terms {
            let da = ta.degree();
            if da > order {
                continue;
            }
            for bucket in ob.iter().take(order - da + 1) {
                for (tb, cb) in bucket {
                    acc.entry(ta.mul(tb)).or_default().add_product(ca, cb);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries { order, nvars: self.nvars, terms: acc }
    }

    /// Evaluates `m_k ↦ values[k]` where assigned.
    pub fn specialize(&self, values: &BTreeMap<usize, Q>) -> TruncatedSeries {
        let mut r = Self::zero(self.nvars, self.order);
        for (t, c) in &self.terms {
            r.add_term(t, &c.partially_evaluate(values));
        }
        r
    }

    /// `f(g)` for univariate `f`; `g` must have zero constant term.
    pub fn compose_univariate(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.nvars != 1 {
            return Err(Error::VariableCountMismatch(f.nvars, 1));
        }
        if !g.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = f.order.min(g.order);
        let top = f.terms.keys().map(|t| t.0[0] as usize).max().unwrap_or(0).min(order);
        let n = g.nvars;
        let zero = TMono::zero(n);
        // Horner; the accumulator at depth k only matters through order - k.
        let mut acc = TruncatedSeries::constant(f.coeff1(top), n, order - top);
        for k in (0..top).rev() {
            acc = acc.mul_trunc(g, order - k);
            acc.order = order - k;
            acc.add_term(&zero, &f.coeff1(k));
        }
        acc.order = order;
        Ok(acc)
    }

    /// The series `e` with `f(e(t)) = t` (hence also `e(f(u)) = u`).
    pub fn compositional_inverse(f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.nvars != 1 {
            return Err(Error::VariableCountMismatch(f.nvars, 1));
        }
        if !f.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let a1 = f.coeff1(1).as_constant().filter(|c| !c.is_zero()).ok_or(Error::NonInvertibleLinearTerm)?;
        let inv = a1.recip();
        let order = f.order;
        let mut e = TruncatedSeries::zero(1, order);
        e.add_term(&TMono(vec![1]), &LazardCoefficient::constant(inv.clone()));
        for n in 2..=order {
            let comp = Self::compose_univariate(&f.truncate(n), &e.truncate(n))?;
            let c = comp.coeff1(n);
            e.add_term(&TMono(vec![n as u8]), &c.scale(&-&inv));
        }
        Ok(e)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        let c0 = self.constant_term().as_constant().filter(|c| !c.is_zero()).ok_or(Error::NotAUnit)?;
        let c0inv = c0.recip();
        let h = self.scale(&c0inv).sub(&TruncatedSeries::one(self.nvars, self.order));
        let geo = TruncatedSeries::univariate(
            (0..=self.order)
                .map(|k| LazardCoefficient::constant(if k % 2 == 0 { Q::one() } else { -Q::one() }))
                .collect(),
            self.order,
        );
        Ok(Self::compose_univariate(&geo, &h)?.scale(&c0inv))
    }

    pub fn partial_derivative(&self, j: usize) -> TruncatedSeries {
        let mut r = Self::zero(self.nvars, self.order.saturating_sub(1));
        for (t, c) in &self.terms {
            let e = t.0[j];
            if e > 0 {
                r.add_term(&t.with(j, e - 1), &c.scale(&q(e as i64)));
            }
        }
        r
    }

    /// Replaces `t_j` by `phi` (which must have zero constant term).
    pub fn substitute_var(&self, j: usize, phi: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_vars(phi)?;
        if !phi.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.min(phi.order);
        let mut slices: BTreeMap<u8, TruncatedSeries> = BTreeMap::new();
        for (t, c) in &self.terms {
            slices
                .entry(t.0[j])
                .or_insert_with(|| TruncatedSeries::zero(self.nvars, order))
                .add_term(&t.with(j, 0), c);
        }
        let top = match slices.keys().next_back() {
            Some(k) => *k as usize,
            None => return Ok(TruncatedSeries::zero(self.nvars, order)),
        };
        let empty = TruncatedSeries::zero(self.nvars, order);
        let mut acc = slices.get(&(top as u8)).unwrap_or(&empty).truncate(order.saturating_sub(top));
        for k in (0..top).rev() {
            let prec = order - k.min(order);
            acc = acc.mul_trunc(phi, prec);
            acc.order = prec;
            if let Some(s) = slices.get(&(k as u8)) {
                for (t, c) in &s.terms {
                    acc.add_term(t, c);
                }
            }
        }
        acc.order = order;
        Ok(acc)
    }

    /// Simultaneous substitution `t_i ↦ images[i]`; images have zero
    /// constant term and share a variable count.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if images.len() != self.nvars {
            return Err(Error::VariableCountMismatch(images.len(), self.nvars));
        }
        let n = images.first().map(|g| g.nvars).unwrap_or(0);
        let mut order = self.order;
        for g in images {
            if g.nvars != n {
                return Err(Error::VariableCountMismatch(g.nvars, n));
            }
            if !g.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            order = order.min(g.order);
        }
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|g| vec![TruncatedSeries::one(n, order), g.truncate(order)])
            .collect();
        let mut r = TruncatedSeries::zero(n, order);
        for (t, c) in &self.terms {
            if t.degree() > order {
                continue;
            }
            let mut prod = TruncatedSeries::constant(c.clone(), n, order);
            for (i, &e) in t.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_trunc(&images[i], order);
                    powers[i].push(next);
                }
                if e > 0 {
                    prod = prod.mul_trunc(&powers[i][e as usize], order);
                }
            }
            for (tt, cc) in &prod.terms {
                r.add_term(tt, cc);
            }
        }
        Ok(r)
    }

    /// Linear part as rationals, if all linear coefficients are rational.
    pub fn rational_linear_part(&self) -> Option<Vec<Q>> {
        (0..self.nvars)
            .map(|i| self.coeff(TMono::unit(self.nvars, i).exps()).as_constant())
            .collect()
    }

    /// Exact quotient `self / d`, where `d` has zero constant term and a
    /// rational linear part. The quotient is known through order `D - 1`.
    /// Fails with the first degree whose remainder is nonzero.
    pub fn divide_exact(&self, d: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_vars(d)?;
        if !d.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let lin = d.rational_linear_part().ok_or(Error::NonInvertibleLinearTerm)?;
        let j = lin.iter().position(|c| !c.is_zero()).ok_or(Error::NoPivot)?;
        let order = self.order.min(d.order);
        let n = self.nvars;
        let fb = self.truncate(order);
        let db = d.by_degree();
        // quotient components by degree
        let mut qparts: Vec<BTreeMap<TMono, LazardCoefficient>> = Vec::new();
        for deg in 0..=order {
            let mut resid: BTreeMap<TMono, LazardCoefficient> =
                fb.terms.iter().filter(|(t, _)| t.degree() == deg).map(|(t, c)| (t.clone(), c.clone())).collect();
            for k in 2..=deg {
                let qp = &qparts[deg - k];
                for (tq, cq) in qp {
                    for (td, cd) in &db[k] {
                        let e = resid.entry(tq.mul(td)).or_default();
                        e.sub_assign_ref(&cq.mul(cd));
                    }
                }
            }
            resid.retain(|_, c| !c.is_zero());
            let (quot, rem) = divide_linear(resid, &lin, j);
            if !rem.is_empty() {
                return Err(Error::NotDivisible { degree: deg });
            }
            if deg >= 1 {
                qparts.push(quot);
            } else {
                debug_assert!(quot.is_empty());
            }
        }
        let mut q = TruncatedSeries::zero(n, order.saturating_sub(1));
        for part in qparts {
            for (t, c) in part {
                q.add_term(&t, &c);
            }
        }
        Ok(q)
    }
}

/// Long division of a homogeneous polynomial by `Σ lin_i t_i` in the pivot
/// variable `t_j`. Returns quotient and remainder (free of `t_j`).
fn divide_linear(
    mut r: BTreeMap<TMono, LazardCoefficient>,
    lin: &[Q],
    j: usize,
) -> (BTreeMap<TMono, LazardCoefficient>, BTreeMap<TMono, LazardCoefficient>) {
    let mut quot = BTreeMap::new();
    let inv = lin[j].recip();
    loop {
        let key = r.keys().filter(|t| t.0[j] > 0).max_by_key(|t| (t.0[j], (*t).clone())).cloned();
        let Some(t) = key else { break };
        let c = r.remove(&t).unwrap();
        let qc = c.scale(&inv);
        let qt = t.with(j, t.0[j] - 1);
        for (i, a) in lin.iter().enumerate() {
            if i == j || a.is_zero() {
                continue;
            }
            let mut tt = qt.clone();
            tt.0[i] += 1;
            let e = r.entry(tt.clone()).or_default();
            e.sub_assign_ref(&qc.scale(a));
            if e.is_zero() {
                r.remove(&tt);
            }
        }
        let e: &mut LazardCoefficient = quot.entry(qt.clone()).or_default();
        e.add_assign_ref(&qc);
        if e.is_zero() {
            quot.remove(&qt);
        }
    }
    (quot, r)
}

// ---------------------------------------------------------------------------
// text rendering

fn var_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["u".to_string()]
    } else {
        (1..=nvars).map(|i| format!("t{i}")).collect()
    }
}

impl TruncatedSeries {
    /// Human-readable form, e.g. `2 u - 2 m1 u^2 + (8 m1^2 - 6 m2) u^3`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&TMono> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.cmp(a)));
        let mut pieces = Vec::new();
        for t in keys {
            let c = &self.terms[t];
            let mono: Vec<String> = t
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let mono = mono.join(" ");
            let cp = c.signed_pieces();
            if cp.len() == 1 {
                let (neg, body) = &cp[0];
                let body = if mono.is_empty() {
                    body.clone()
                } else if body == "1" {
                    mono
                } else {
                    format!("{body} {mono}")
                };
                pieces.push((*neg, body));
            } else {
                let inner = join_signed(&cp);
                let body = if mono.is_empty() { format!("({inner})") } else { format!("({inner}) {mono}") };
                pieces.push((false, body));
            }
        }
        join_signed(&pieces)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&var_names(self.nvars)))
    }
}

// ---------------------------------------------------------------------------
// canonical JSON form

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub t_exponents: Vec<u32>,
    pub m_exponents: Vec<(u32, u32)>,
    pub coeff: String,
}

impl TruncatedSeries {
    /// Terms sorted by `t`-exponents, then `m`-exponents.
    pub fn to_terms(&self) -> Vec<SeriesTerm> {
        let mut out = Vec::new();
        for (t, c) in &self.terms {
            for (m, v) in c.terms() {
                out.push(SeriesTerm {
                    t_exponents: t.0.iter().map(|e| *e as u32).collect(),
                    m_exponents: m.pairs().iter().map(|&(k, e)| (k as u32, e as u32)).collect(),
                    coeff: v.to_string(),
                });
            }
        }
        out
    }

    pub fn from_terms(terms: &[SeriesTerm], nvars: usize, order: usize) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::zero(nvars, order);
        for term in terms {
            if term.t_exponents.len() != nvars {
                return Err(Error::VariableCountMismatch(term.t_exponents.len(), nvars));
            }
            let exps: Vec<u8> = term
                .t_exponents
                .iter()
                .map(|e| u8::try_from(*e).map_err(|_| Error::Parse("exponent too large".into())))
                .collect::<Result<_>>()?;
            let mut pairs = Vec::new();
            for &(k, e) in &term.m_exponents {
                if k == 0 {
                    return Err(Error::Parse("m_0 does not exist".into()));
                }
                pairs.push((k as usize, u8::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?));
            }
            let c = parse_q(&term.coeff)?;
            s.add_term(&TMono(exps), &LazardCoefficient::monomial(MMono::from_pairs(&pairs), c));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_terms()).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value, nvars: usize, order: usize) -> Result<TruncatedSeries> {
        let terms: Vec<SeriesTerm> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_terms(&terms, nvars, order)
    }
}
