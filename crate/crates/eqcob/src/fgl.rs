//! The universal formal group law over the rationalized Lazard ring, and its
//! specializations, presented through its logarithm
//! `l(u) = u + Σ m_k u^{k+1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lazard::{parse_q, q, qf, LazardCoefficient, QExt, Q};
use crate::series::TruncatedSeries;
use crate::torus::Character;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialization {
    Universal,
    /// all `m_k = 0`, so `F(u,v) = u + v`
    Additive,
    /// `m_k = β^k/(k+1)`, so `F(u,v) = u + v - βuv`
    Multiplicative(Q),
    Assignment(BTreeMap<usize, Q>),
}

impl Specialization {
    /// Parses `universal`, `additive` or `multiplicative:β`.
    pub fn parse(s: &str) -> Result<Specialization> {
        match s {
            "universal" => Ok(Specialization::Universal),
            "additive" => Ok(Specialization::Additive),
            _ => match s.strip_prefix("multiplicative:") {
                Some(b) => Ok(Specialization::Multiplicative(parse_q(b)?)),
                None => Err(Error::Parse(format!("unknown law {s:?}"))),
            },
        }
    }

    /// Value of `m_k`, or `None` when it stays a free generator.
    fn value(&self, k: usize) -> Result<Option<Q>> {
        Ok(match self {
            Specialization::Universal => None,
            Specialization::Additive => Some(Q::zero()),
            Specialization::Multiplicative(b) => {
                Some(b.powu(k as u64) / q(k as i64 + 1))
            }
            Specialization::Assignment(vals) => Some(vals.get(&k).cloned().ok_or(Error::IncompleteAssignment(k))?),
        })
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Specialization::Universal => write!(f, "universal"),
            Specialization::Additive => write!(f, "additive"),
            Specialization::Multiplicative(b) => write!(f, "multiplicative:{b}"),
            Specialization::Assignment(_) => write!(f, "assignment"),
        }
    }
}

/// Log and exp are stored one order beyond `D` so that `ρ`, which divides
/// by `u`, is still exact through order `D`.
#[derive(Debug)]
pub struct FormalGroupLaw {
    order: usize,
    spec: Specialization,
    log: TruncatedSeries,
    exp: TruncatedSeries,
    sum_table: OnceLock<TruncatedSeries>,
    pub(crate) memo: Mutex<Memo>,
}

/// Memoized Chern classes and pivot solutions; purely a cache.
#[derive(Debug, Default, Clone)]
pub(crate) struct Memo {
    pub(crate) chern: HashMap<Character, TruncatedSeries>,
    pub(crate) pivot: HashMap<(Character, usize), TruncatedSeries>,
}

impl Clone for FormalGroupLaw {
    fn clone(&self) -> Self {
        FormalGroupLaw {
            order: self.order,
            spec: self.spec.clone(),
            log: self.log.clone(),
            exp: self.exp.clone(),
            sum_table: self.sum_table.clone(),
            memo: Mutex::new(self.memo.lock().expect("memo poisoned").clone()),
        }
    }
}

impl FormalGroupLaw {
    pub fn new(order: usize, spec: Specialization) -> Result<FormalGroupLaw> {
        if order == 0 {
            return Err(Error::OutOfRange("truncation order must be positive".into()));
        }
        let inner = order + 1;
        let mut coeffs = vec![LazardCoefficient::zero(), LazardCoefficient::one()];
        for k in 1..inner {
            coeffs.push(match spec.value(k)? {
                Some(v) => LazardCoefficient::constant(v),
                None => LazardCoefficient::m(k),
            });
        }
        let log = TruncatedSeries::univariate(coeffs, inner);
        let exp = TruncatedSeries::compositional_inverse(&log)?;
        Ok(FormalGroupLaw { order, spec, log, exp, sum_table: OnceLock::new(), memo: Mutex::default() })
    }

    pub fn universal(order: usize) -> FormalGroupLaw {
        Self::new(order, Specialization::Universal).expect("valid order")
    }

    pub fn additive(order: usize) -> FormalGroupLaw {
        Self::new(order, Specialization::Additive).expect("valid order")
    }

    pub fn multiplicative(beta: Q, order: usize) -> FormalGroupLaw {
        Self::new(order, Specialization::Multiplicative(beta)).expect("valid order")
    }

    /// The same law at another truncation order.
    pub fn with_order(&self, order: usize) -> FormalGroupLaw {
        Self::new(order, self.spec.clone()).expect("specialization already validated")
    }

    /// The same truncation order under another specialization.
    pub fn specialize(&self, spec: Specialization) -> Result<FormalGroupLaw> {
        Self::new(self.order, spec)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn specialization(&self) -> &Specialization {
        &self.spec
    }

    /// `l(u)` through order `D`.
    pub fn log(&self) -> TruncatedSeries {
        self.log.truncate(self.order)
    }

    /// `e(u) = l^{-1}(u)` through order `D`.
    pub fn exp(&self) -> TruncatedSeries {
        self.exp.truncate(self.order)
    }

    pub fn apply_log(&self, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::compose_univariate(&self.log, u)?.truncate(self.order))
    }

    pub fn apply_exp(&self, w: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::compose_univariate(&self.exp, w)?.truncate(self.order))
    }

    /// `F(u, v) = e(l(u) + l(v))`
    pub fn fgl_sum(&self, u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries> {
        let w = self.apply_log(u)?.checked_add(&self.apply_log(v)?)?;
        self.apply_exp(&w)
    }

    /// `χ(u) = [-1]u`
    pub fn fgl_inverse(&self, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.apply_exp(&self.apply_log(u)?.neg())
    }

    /// `[n]u = e(n·l(u))`
    pub fn fgl_multiple(&self, n: i64, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.rational_multiple(&q(n), u)
    }

    /// `[1/m]u = e(l(u)/m)`
    pub fn fgl_divide(&self, m: i64, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        if m <= 0 {
            return Err(Error::OutOfRange(format!("divisor must be positive, got {m}")));
        }
        self.rational_multiple(&qf(1, m), u)
    }

    /// `e(a·l(u))` for rational `a`; equals `[n]([1/m]u)` for `a = n/m`.
    pub fn rational_multiple(&self, a: &Q, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.apply_exp(&self.apply_log(u)?.scale(a))
    }

    /// Univariate `ρ_{n/m}(x) = [n]([1/m]x)/x` through order `D`.
    pub fn rho_series(&self, n: i64, m: i64) -> Result<TruncatedSeries> {
        if n == 0 {
            return Err(Error::OutOfRange("rho needs n ≠ 0".into()));
        }
        if m <= 0 {
            return Err(Error::OutOfRange(format!("divisor must be positive, got {m}")));
        }
        let a = qf(n, m);
        let x = TruncatedSeries::var(0, 1, self.order + 1);
        let lx = TruncatedSeries::compose_univariate(&self.log, &x)?;
        let num = TruncatedSeries::compose_univariate(&self.exp, &lx.scale(&a))?;
        if !num.coeff1(0).is_zero() {
            return Err(Error::NotDivisible { degree: 0 });
        }
        let coeffs = (1..=self.order + 1).map(|k| num.coeff1(k)).collect();
        Ok(TruncatedSeries::univariate(coeffs, self.order))
    }

    /// `ρ_{n/m}(u)`; `u` must have exact t-order 1 (zero constant term and a
    /// nonzero linear part).
    pub fn rho(&self, n: i64, m: i64, u: &TruncatedSeries) -> Result<TruncatedSeries> {
        if !u.constant_term().is_zero() {
            return Err(Error::NotOrderOne);
        }
        let lin_zero = (0..u.nvars()).all(|i| {
            let mut e = vec![0u8; u.nvars()];
            e[i] = 1;
            u.coeff(&e).is_zero()
        });
        if lin_zero {
            return Err(Error::NotOrderOne);
        }
        let r = self.rho_series(n, m)?;
        Ok(TruncatedSeries::compose_univariate(&r, u)?.truncate(self.order))
    }

    /// `F(u, χ(v))`, the class relating the two divisors of a section.
    pub fn divisor_combination(&self, z0: &TruncatedSeries, zinf: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.fgl_sum(z0, &self.fgl_inverse(zinf)?)
    }

    /// `F(u, v)` as a two-variable series through order `D`.
    pub fn sum_series(&self) -> &TruncatedSeries {
        self.sum_table.get_or_init(|| {
            let u = TruncatedSeries::var(0, 2, self.order);
            let v = TruncatedSeries::var(1, 2, self.order);
            self.fgl_sum(&u, &v).expect("variables have zero constant term")
        })
    }

    /// Coefficient `a_ij` of `u^i v^j` in `F(u, v)`.
    pub fn a_coefficient(&self, i: usize, j: usize) -> Result<LazardCoefficient> {
        if i + j > self.order {
            return Err(Error::OutOfRange(format!("a_{{{i}{j}}} needs order ≥ {}", i + j)));
        }
        Ok(self.sum_series().coeff(&[i as u8, j as u8]))
    }

    /// The table of all `a_ij` with `1 ≤ i, j` and `i + j ≤ degree`.
    pub fn a_table(&self, degree: usize) -> Result<Vec<(usize, usize, LazardCoefficient)>> {
        let mut out = Vec::new();
        for d in 2..=degree {
            for i in 1..d {
                out.push((i, d - i, self.a_coefficient(i, d - i)?));
            }
        }
        Ok(out)
    }
}

/// `n/m` in lowest terms with `m > 0`, as machine integers.
pub fn ratio_parts(a: &Q) -> Result<(i64, i64)> {
    let too_large = || Error::OutOfRange(format!("ratio {a} too large"));
    let n = i64::try_from(a.numerator_ref()).map_err(|_| too_large())?;
    let m = i64::try_from(a.denominator_ref()).map_err(|_| too_large())?;
    Ok((if a.is_negative() { -n } else { n }, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazard::{q, qf};

    fn u(d: usize) -> TruncatedSeries {
        TruncatedSeries::var(0, 1, d)
    }

    fn m(k: usize) -> LazardCoefficient {
        LazardCoefficient::m(k)
    }

    #[test]
    fn low_degree_coefficients() {
        let f = FormalGroupLaw::universal(5);
        assert_eq!(f.a_coefficient(1, 0).unwrap(), LazardCoefficient::one());
        assert!(f.a_coefficient(2, 0).unwrap().is_zero());
        assert_eq!(f.a_coefficient(1, 1).unwrap(), m(1).scale(&q(-2)));
        let a21 = m(1).mul(&m(1)).scale(&q(4)).sub(&m(2).scale(&q(3)));
        assert_eq!(f.a_coefficient(2, 1).unwrap(), a21);
        assert_eq!(f.a_coefficient(1, 2).unwrap(), a21);
        assert!(f.a_coefficient(3, 3).is_err());
    }

    #[test]
    fn multiples_and_divisions() {
        let f = FormalGroupLaw::universal(3);
        let two = f.fgl_multiple(2, &u(3)).unwrap();
        assert_eq!(two.coeff1(1), LazardCoefficient::constant(q(2)));
        assert_eq!(two.coeff1(2), m(1).scale(&q(-2)));
        assert_eq!(two.coeff1(3), m(1).mul(&m(1)).scale(&q(8)).sub(&m(2).scale(&q(6))));
        let half = f.fgl_divide(2, &u(3)).unwrap();
        assert_eq!(half.coeff1(1), LazardCoefficient::constant(qf(1, 2)));
        assert_eq!(half.coeff1(2), m(1).scale(&qf(1, 4)));
        assert_eq!(half.coeff1(3), m(2).scale(&qf(3, 8)).sub(&m(1).mul(&m(1)).scale(&qf(1, 4))));
        assert!(f.fgl_divide(0, &u(3)).is_err());
        let inv = f.fgl_inverse(&u(3)).unwrap();
        assert_eq!(inv.coeff1(2), m(1).scale(&q(-2)));
        assert_eq!(inv.coeff1(3), m(1).mul(&m(1)).scale(&q(-4)));
    }

    #[test]
    fn rho_half() {
        let f = FormalGroupLaw::universal(4);
        let r = f.rho(1, 2, &u(4)).unwrap();
        assert_eq!(r.coeff1(0), LazardCoefficient::constant(qf(1, 2)));
        assert_eq!(r.coeff1(1), m(1).scale(&qf(1, 4)));
        assert_eq!(r.coeff1(2), m(2).scale(&qf(3, 8)).sub(&m(1).mul(&m(1)).scale(&qf(1, 4))));
        assert_eq!(r.order(), 4);
        assert_eq!(f.rho(1, 2, &u(4).pow(2)), Err(Error::NotOrderOne));
        assert_eq!(f.rho(1, 2, &TruncatedSeries::one(1, 4)), Err(Error::NotOrderOne));
    }

    #[test]
    fn specializations() {
        let add = FormalGroupLaw::additive(6);
        let uv = TruncatedSeries::var(0, 2, 6).add(&TruncatedSeries::var(1, 2, 6));
        assert_eq!(add.sum_series(), &uv);
        assert_eq!(add.rho(1, 2, &u(6)).unwrap(), TruncatedSeries::rational(qf(1, 2), 1, 6));
        let b = qf(3, 2);
        let mul = FormalGroupLaw::multiplicative(b.clone(), 6);
        let x = TruncatedSeries::var(0, 2, 6);
        let y = TruncatedSeries::var(1, 2, 6);
        assert_eq!(mul.sum_series(), &uv.sub(&x.mul(&y).scale(&b)));
        let mut vals = BTreeMap::new();
        vals.insert(1, q(0));
        assert_eq!(FormalGroupLaw::new(3, Specialization::Assignment(vals)).unwrap_err(), Error::IncompleteAssignment(2));
    }

    #[test]
    fn parse_law() {
        assert_eq!(Specialization::parse("multiplicative:1/2").unwrap(), Specialization::Multiplicative(qf(1, 2)));
        assert!(Specialization::parse("formal").is_err());
    }
}
