//! The coefficient ring `S(T)` as truncated series in `t_1..t_r`, Chern
//! classes of characters, divisibility modulo Chern classes and their
//! squares, and fractions with Chern-class denominators.

use std::fmt;

use malachite_base::num::arithmetic::traits::{Gcd, Lcm};
use malachite_nz::natural::Natural;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgl::{ratio_parts, FormalGroupLaw};
use crate::lazard::{parse_q, q, LazardCoefficient, QExt, Q};
use crate::series::{SeriesTerm, TruncatedSeries};

/// A character of the torus in coordinates of a fixed lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(Vec<Q>);

impl Character {
    pub fn new(coords: Vec<Q>) -> Self {
        Character(coords)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Character(v.iter().map(|x| q(*x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Character(vec![Q::zero(); rank])
    }

    /// The `i`-th basis character (0-based).
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Q::one();
        c
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(QExt::is_zero)
    }

    pub fn scale(&self, a: &Q) -> Character {
        Character(self.0.iter().map(|x| x * a).collect())
    }

    pub fn add(&self, o: &Character) -> Character {
        assert_eq!(self.rank(), o.rank());
        Character(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Character) -> Character {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Character {
        Character(self.0.iter().map(|x| -x).collect())
    }

    pub fn dot(&self, covector: &[Q]) -> Q {
        self.0.iter().zip(covector).map(|(a, b)| a * b).sum()
    }

    /// `(a, v)` with `self = a·v`, `v` integral and primitive with positive
    /// leading coordinate. Fails on the zero character.
    pub fn primitive(&self) -> Result<(Q, Character)> {
        if self.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        let l = self.0.iter().fold(Natural::from(1u32), |acc, x| acc.lcm(x.denominator_ref()));
        let lq = Q::from(&l);
        let g = self.0.iter().fold(Natural::from(0u32), |acc, x| acc.gcd((x * &lq).numerator_ref()));
        let mut a = Q::from(&g) / lq;
        if self.0.iter().find(|x| !x.is_zero()).expect("nonzero").is_negative() {
            a = -a;
        }
        let v = Character(self.0.iter().map(|x| x / &a).collect());
        Ok((a, v))
    }

    /// `a` with `self = a·other`, if the two are proportional.
    pub fn ratio_to(&self, other: &Character) -> Option<Q> {
        let i = other.0.iter().position(|x| !x.is_zero())?;
        let a = &self.0[i] / &other.0[i];
        (other.scale(&a) == *self).then_some(a)
    }

    pub fn parse(items: &[String]) -> Result<Character> {
        Ok(Character(items.iter().map(|s| parse_q(s)).collect::<Result<_>>()?))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(","))
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        let items: Vec<String> = v
            .into_iter()
            .map(|x| match x {
                serde_json::Value::String(s) => Ok(s),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => Err(serde::de::Error::custom(format!("bad character entry {other}"))),
            })
            .collect::<std::result::Result<_, _>>()?;
        Character::parse(&items).map_err(serde::de::Error::custom)
    }
}

impl FormalGroupLaw {
    /// `c(L_χ) = e(Σ χ_i l(t_i))`; the zero character gives 0.
    pub fn chern(&self, chi: &Character) -> TruncatedSeries {
        if let Some(s) = self.memo.lock().expect("memo poisoned").chern.get(chi) {
            return s.clone();
        }
        let r = chi.rank();
        let d = self.order();
        let mut w = TruncatedSeries::zero(r, d);
        for (i, a) in chi.coords().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let li = self.apply_log(&TruncatedSeries::var(i, r, d)).expect("variable has no constant term");
            w = w.add(&li.scale(a));
        }
        let c = self.apply_exp(&w).expect("log has no constant term");
        self.memo.lock().expect("memo poisoned").chern.insert(chi.clone(), c.clone());
        c
    }

    /// `∏ c(L_χ)` over a list of characters.
    pub fn chern_product(&self, chars: &[Character], rank: usize) -> TruncatedSeries {
        let mut p = TruncatedSeries::one(rank, self.order());
        for c in chars {
            p = p.mul(&self.chern(c));
        }
        p
    }

    /// `ρ_a(c(L_v))` for rational `a ≠ 0`; equals `c(L_{av})/c(L_v)`.
    pub fn chern_ratio(&self, a: &Q, v: &Character) -> Result<TruncatedSeries> {
        let (n, m) = ratio_parts(a)?;
        self.rho(n, m, &self.chern(v))
    }

    /// `φ` with `c(L_χ)(t_j = φ) = 0`, by fixed-point iteration on
    /// `t_j = -(c - a·t_j)/a`; each step fixes one more degree.
    pub fn pivot_solution(&self, chi: &Character, j: usize) -> Result<TruncatedSeries> {
        let key = (chi.clone(), j);
        if let Some(s) = self.memo.lock().expect("memo poisoned").pivot.get(&key) {
            return Ok(s.clone());
        }
        let a = chi.coords()[j].clone();
        if a.is_zero() {
            return Err(Error::NoPivot);
        }
        let r = chi.rank();
        let c = self.chern(chi);
        let tj = TruncatedSeries::var(j, r, self.order());
        let rest = c.sub(&tj.scale(&a));
        let inv = -a.recip();
        let mut phi = TruncatedSeries::zero(r, self.order());
        for _ in 0..self.order() {
            let next = rest.substitute_var(j, &phi)?.scale(&inv);
            if next == phi {
                break;
            }
            phi = next;
        }
        self.memo.lock().expect("memo poisoned").pivot.insert(key, phi.clone());
        Ok(phi)
    }
}

/// Outcome of [`reduce_mod`]: the value of `f` (and for squares its pivot
/// derivative) on the zero locus `t_j = φ`, truncated to the certified order.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub pivot: usize,
    pub power: u8,
    pub value: TruncatedSeries,
    pub derivative: Option<TruncatedSeries>,
    pub certified_order: usize,
}

impl Reduction {
    pub fn vanishes(&self) -> bool {
        self.value.is_zero() && self.derivative.as_ref().map_or(true, TruncatedSeries::is_zero)
    }
}

/// Decides `f ∈ (c(L_χ)^power)` for `power ∈ {1, 2}`, valid through order
/// `D - power`.
pub fn reduce_mod(law: &FormalGroupLaw, f: &TruncatedSeries, chi: &Character, power: u8) -> Result<Reduction> {
    if chi.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    if !(1..=2).contains(&power) {
        return Err(Error::OutOfRange(format!("power must be 1 or 2, got {power}")));
    }
    if f.nvars() != chi.rank() {
        return Err(Error::VariableCountMismatch(f.nvars(), chi.rank()));
    }
    let j = chi.coords().iter().position(|x| !x.is_zero()).ok_or(Error::NoPivot)?;
    let phi = law.pivot_solution(chi, j)?;
    let certified = f.order().min(law.order()).saturating_sub(power as usize);
    let value = f.substitute_var(j, &phi)?.truncate(certified);
    let derivative = if power == 2 {
        Some(f.partial_derivative(j).substitute_var(j, &phi)?.truncate(certified))
    } else {
        None
    };
    Ok(Reduction { pivot: j, power, value, derivative, certified_order: certified })
}

/// Exact quotient `f / c(L_χ)`, losing one order.
pub fn divide_by_chern(law: &FormalGroupLaw, f: &TruncatedSeries, chi: &Character) -> Result<TruncatedSeries> {
    if chi.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    f.divide_exact(&law.chern(chi))
}

/// `augment(f)`: the constant term, i.e. the image under `t_i ↦ 0`.
pub fn augment(f: &TruncatedSeries) -> LazardCoefficient {
    f.constant_term()
}

/// Substitutes `t_i ↦ [a_i] t_i`, the change of basis `χ_i ↦ a_i χ_i`.
pub fn rescale_characters(law: &FormalGroupLaw, f: &TruncatedSeries, a: &[i64]) -> Result<TruncatedSeries> {
    rescale_by(law, f, a, false)
}

/// Inverse of [`rescale_characters`]: `t_i ↦ [1/a_i] t_i`.
pub fn unrescale_characters(law: &FormalGroupLaw, f: &TruncatedSeries, a: &[i64]) -> Result<TruncatedSeries> {
    rescale_by(law, f, a, true)
}

fn rescale_by(law: &FormalGroupLaw, f: &TruncatedSeries, a: &[i64], invert: bool) -> Result<TruncatedSeries> {
    let r = f.nvars();
    if a.len() != r {
        return Err(Error::VariableCountMismatch(a.len(), r));
    }
    let mut images = Vec::with_capacity(r);
    for (i, &ai) in a.iter().enumerate() {
        if ai <= 0 {
            return Err(Error::OutOfRange(format!("rescaling factors must be positive, got {ai}")));
        }
        let t = TruncatedSeries::var(i, r, f.order());
        images.push(if invert { law.fgl_divide(ai, &t)? } else { law.fgl_multiple(ai, &t)? });
    }
    f.substitute(&images)
}

/// `num / ∏ c(L_χ)` over the denominator multiset.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedElement {
    num: TruncatedSeries,
    den: Vec<Character>,
}

/// Why [`LocalizedElement::clear_denominators`] stopped.
#[derive(Clone, Debug, PartialEq)]
pub struct ClearFailure {
    pub factor: Character,
    pub cleared: usize,
    pub degree: usize,
}

impl fmt::Display for ClearFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "numerator not divisible by c({}) (remainder in degree {}, after {} factors)",
            self.factor, self.degree, self.cleared
        )
    }
}

impl LocalizedElement {
    pub fn new(num: TruncatedSeries, mut den: Vec<Character>) -> Result<Self> {
        for d in &den {
            if d.is_zero() {
                return Err(Error::ZeroCharacter);
            }
            if d.rank() != num.nvars() {
                return Err(Error::VariableCountMismatch(d.rank(), num.nvars()));
            }
        }
        den.sort();
        Ok(LocalizedElement { num, den })
    }

    pub fn from_series(num: TruncatedSeries) -> Self {
        LocalizedElement { num, den: Vec::new() }
    }

    pub fn numerator(&self) -> &TruncatedSeries {
        &self.num
    }

    pub fn denominator(&self) -> &[Character] {
        &self.den
    }

    pub fn order(&self) -> usize {
        self.num.order()
    }

    /// Rewrites every denominator `c(L_{av})` as `c(L_v)` with `v`
    /// primitive, moving the unit `ρ_a(c(L_v))^{-1}` into the numerator.
    /// No precision is lost.
    pub fn normalize(&self, law: &FormalGroupLaw) -> Result<LocalizedElement> {
        let mut num = self.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for d in &self.den {
            let (a, v) = d.primitive()?;
            if !a.is_one() {
                num = num.mul(&law.chern_ratio(&a, &v)?.inverse()?);
            }
            den.push(v);
        }
        LocalizedElement::new(num, den)
    }

    /// Multiplies by `∏ c(L_χ)`, cancelling against the denominator where a
    /// factor is proportional to a stored one.
    pub fn mul_chern_factors(&self, law: &FormalGroupLaw, chars: &[Character]) -> Result<LocalizedElement> {
        let mut cur = self.normalize(law)?;
        for c in chars {
            if c.is_zero() {
                return Ok(LocalizedElement::from_series(TruncatedSeries::zero(cur.num.nvars(), cur.num.order())));
            }
            let (a, v) = c.primitive()?;
            if let Some(pos) = cur.den.iter().position(|d| *d == v) {
                cur.den.remove(pos);
                if !a.is_one() {
                    cur.num = cur.num.mul(&law.chern_ratio(&a, &v)?);
                }
            } else {
                cur.num = cur.num.mul(&law.chern(c));
            }
        }
        Ok(cur)
    }

    fn over(&self, law: &FormalGroupLaw, common: &[Character]) -> TruncatedSeries {
        let mut rest = common.to_vec();
        for d in &self.den {
            let pos = rest.iter().position(|x| x == d).expect("common multiple");
            rest.remove(pos);
        }
        self.num.mul(&law.chern_product(&rest, self.num.nvars()))
    }

    /// Normalized forms of `a` and `b` with their numerators over the least
    /// common multiple of the denominators.
    fn common(law: &FormalGroupLaw, a: &Self, b: &Self) -> Result<(TruncatedSeries, TruncatedSeries, Vec<Character>)> {
        if a.num.nvars() != b.num.nvars() {
            return Err(Error::VariableCountMismatch(a.num.nvars(), b.num.nvars()));
        }
        let a = a.normalize(law)?;
        let b = b.normalize(law)?;
        let mut lcm = a.den.clone();
        let mut pool = a.den.clone();
        for d in &b.den {
            if let Some(pos) = pool.iter().position(|x| x == d) {
                pool.remove(pos);
            } else {
                lcm.push(d.clone());
            }
        }
        lcm.sort();
        Ok((a.over(law, &lcm), b.over(law, &lcm), lcm))
    }

    pub fn add(&self, law: &FormalGroupLaw, other: &Self) -> Result<LocalizedElement> {
        let (x, y, den) = Self::common(law, self, other)?;
        LocalizedElement::new(x.add(&y), den)
    }

    pub fn neg(&self) -> LocalizedElement {
        LocalizedElement { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<LocalizedElement> {
        let num = self.num.checked_mul(&other.num)?;
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        LocalizedElement::new(num, den)
    }

    /// Equality of fractions, exact through the common numerator order.
    pub fn loc_eq(&self, law: &FormalGroupLaw, other: &Self) -> Result<bool> {
        let (x, y, _) = Self::common(law, self, other)?;
        Ok(x == y)
    }

    /// Divides the numerator by each denominator factor in turn; each
    /// division costs one order.
    pub fn clear_denominators(&self, law: &FormalGroupLaw) -> std::result::Result<TruncatedSeries, ClearFailure> {
        let mut num = self.num.clone();
        for (k, d) in self.den.iter().enumerate() {
            match divide_by_chern(law, &num, d) {
                Ok(q) => num = q,
                Err(Error::NotDivisible { degree }) => {
                    return Err(ClearFailure { factor: d.clone(), cleared: k, degree });
                }
                Err(_) => return Err(ClearFailure { factor: d.clone(), cleared: k, degree: 0 }),
            }
        }
        Ok(num)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "num": self.num.to_json(), "den": self.den })
    }

    pub fn from_json(v: &serde_json::Value, nvars: usize, order: usize) -> Result<LocalizedElement> {
        #[derive(Deserialize)]
        struct Raw {
            num: Vec<SeriesTerm>,
            den: Vec<Character>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        LocalizedElement::new(TruncatedSeries::from_terms(&raw.num, nvars, order)?, raw.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazard::{q, qf};

    fn chi(v: &[i64]) -> Character {
        Character::from_ints(v)
    }

    #[test]
    fn chern_basics() {
        let law = FormalGroupLaw::universal(6);
        assert!(law.chern(&chi(&[0, 0])).is_zero());
        assert_eq!(law.chern(&chi(&[1, 0])), TruncatedSeries::var(0, 2, 6));
        let t1 = TruncatedSeries::var(0, 2, 6);
        assert_eq!(law.chern(&chi(&[3, 0])), law.fgl_multiple(3, &t1).unwrap());
        // c(χ1 - χ2) = (t1 - t2)(1 + 2 m1 t2 + ...)
        let t2 = TruncatedSeries::var(1, 2, 6);
        let qt = law.chern(&chi(&[1, -1])).divide_exact(&t1.sub(&t2)).unwrap();
        assert_eq!(qt.truncate(1), TruncatedSeries::one(2, 1).add(&t2.truncate(1).scale_lazard(&LazardCoefficient::m(1).scale(&q(2)))));
    }

    #[test]
    fn reductions() {
        let law = FormalGroupLaw::universal(6);
        let t1 = TruncatedSeries::var(0, 2, 6);
        let t2 = TruncatedSeries::var(1, 2, 6);
        assert!(reduce_mod(&law, &t1.sub(&t2), &chi(&[1, -1]), 1).unwrap().vanishes());
        let one = TruncatedSeries::one(2, 6);
        let r = reduce_mod(&law, &one, &chi(&[1, 0]), 1).unwrap();
        assert_eq!(r.value, one.truncate(5));
        let r = reduce_mod(&law, &t1, &chi(&[1, 0]), 2).unwrap();
        assert!(r.value.is_zero());
        assert_eq!(r.derivative.unwrap(), one.truncate(4));
        let half = law.fgl_divide(2, &t1).unwrap();
        assert!(reduce_mod(&law, &half, &chi(&[1, 0]), 1).unwrap().vanishes());
        assert!(!reduce_mod(&law, &half, &chi(&[1, 0]), 2).unwrap().vanishes());
        assert_eq!(reduce_mod(&law, &t1, &chi(&[0, 0]), 1), Err(Error::ZeroCharacter));
    }

    #[test]
    fn pivot_matches_closed_form() {
        // c(χ) = 0 ⟺ t_j = e(-Σ_{i≠j} (χ_i/χ_j) l(t_i))
        let law = FormalGroupLaw::universal(6);
        let c = Character::new(vec![qf(1, 2), q(-3), q(2)]);
        let phi = law.pivot_solution(&c, 0).unwrap();
        let closed = law.chern(&Character::new(vec![q(0), q(6), q(-4)]));
        assert_eq!(phi, closed);
    }

    #[test]
    fn primitive_form() {
        let (a, v) = Character::new(vec![q(-2), q(4)]).primitive().unwrap();
        assert_eq!((a, v), (q(-2), chi(&[1, -2])));
        let (a, v) = Character::new(vec![qf(1, 2), qf(1, 2)]).primitive().unwrap();
        assert_eq!((a, v), (qf(1, 2), chi(&[1, 1])));
        assert!(Character::zero(2).primitive().is_err());
    }

    #[test]
    fn localized_basics() {
        let law = FormalGroupLaw::universal(6);
        let t1 = TruncatedSeries::var(0, 2, 6);
        let x = t1.add(&TruncatedSeries::var(1, 2, 6).pow(2));
        let u = chi(&[1, 1]);
        let v = chi(&[2, -1]);
        let a = LocalizedElement::new(x.clone(), vec![u.clone()]).unwrap();
        let s = a.add(&law, &a.neg()).unwrap();
        assert!(s.numerator().is_zero());
        let b = LocalizedElement::new(x.mul(&law.chern(&v)), vec![u.clone(), v.clone()]).unwrap();
        assert!(a.loc_eq(&law, &b).unwrap());
        let c = LocalizedElement::new(TruncatedSeries::one(2, 6), vec![u.clone()]).unwrap();
        let one = c.mul_chern_factors(&law, &[u.clone()]).unwrap();
        assert_eq!(one.numerator(), &TruncatedSeries::one(2, 6));
        assert!(one.denominator().is_empty());
        assert!(LocalizedElement::new(x, vec![Character::zero(2)]).is_err());
    }

    #[test]
    fn clearing() {
        let law = FormalGroupLaw::universal(6);
        let t1 = TruncatedSeries::var(0, 2, 6);
        let ok = LocalizedElement::new(t1.pow(2), vec![chi(&[1, 0])]).unwrap();
        let q1 = ok.clear_denominators(&law).unwrap();
        assert_eq!(q1, t1.truncate(5));
        let bad = LocalizedElement::new(TruncatedSeries::one(2, 6), vec![chi(&[1, 0])]).unwrap();
        let err = bad.clear_denominators(&law).unwrap_err();
        assert_eq!(err.factor, chi(&[1, 0]));
    }

    #[test]
    fn rescale_round_trip() {
        let law = FormalGroupLaw::universal(5);
        let t1 = TruncatedSeries::var(0, 2, 5);
        let t2 = TruncatedSeries::var(1, 2, 5);
        let f = t1.mul(&t2).add(&t2).add(&TruncatedSeries::one(2, 5));
        assert_eq!(rescale_characters(&law, &f, &[1, 1]).unwrap(), f);
        let g = rescale_characters(&law, &f, &[2, 3]).unwrap();
        assert_eq!(unrescale_characters(&law, &g, &[2, 3]).unwrap(), f);
        assert!(rescale_characters(&law, &f, &[0, 1]).is_err());
    }

    #[test]
    fn augmentation() {
        let t1 = TruncatedSeries::var(0, 2, 4);
        let t2 = TruncatedSeries::var(1, 2, 4);
        assert_eq!(augment(&TruncatedSeries::one(2, 4).add(&t1)), LazardCoefficient::one());
        let f = TruncatedSeries::constant(LazardCoefficient::m(1), 2, 4).add(&t2.scale_lazard(&LazardCoefficient::m(2)));
        assert_eq!(augment(&f), LazardCoefficient::m(1));
    }
}
