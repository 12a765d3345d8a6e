//! Equivariant multiplicities at nondegenerate fixed points, and the
//! classes they produce in the fixed-point ring.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::gkm::CobordismTuple;
use crate::series::TruncatedSeries;
use crate::torus::{Character, ClearFailure, LocalizedElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightTag {
    Tangent,
    Normal,
    Fiber,
}

impl fmt::Display for WeightTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightTag::Tangent => "tangent",
            WeightTag::Normal => "normal",
            WeightTag::Fiber => "fiber",
        })
    }
}

/// Weight multisets at fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentData {
    pub tag: WeightTag,
    pub rank: usize,
    /// declared dimension (tangent, fiber) or dimension of the subvariety
    /// (normal); checked when present
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub weights: BTreeMap<String, Vec<Character>>,
}

impl TangentData {
    pub fn new(tag: WeightTag, rank: usize, weights: BTreeMap<String, Vec<Character>>) -> Result<TangentData> {
        let d = TangentData { tag, rank, dimension: None, weights };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let sizes: Vec<usize> = self.weights.values().map(Vec::len).collect();
        for (p, ws) in &self.weights {
            for w in ws {
                if w.rank() != self.rank {
                    return Err(Error::VariableCountMismatch(w.rank(), self.rank));
                }
                if w.is_zero() {
                    return Err(Error::InvalidParameters(format!("zero weight at {p}, the point is degenerate")));
                }
            }
        }
        if let (Some(d), WeightTag::Tangent | WeightTag::Fiber) = (self.dimension, self.tag) {
            if let Some((p, ws)) = self.weights.iter().find(|(_, ws)| ws.len() != d) {
                return Err(Error::InvalidParameters(format!("{p} has {} weights, dimension is {d}", ws.len())));
            }
        }
        if self.tag == WeightTag::Normal && sizes.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidParameters("normal weight counts differ between points".into()));
        }
        Ok(())
    }

    /// Accepts the object itself; a `source` key is ignored.
    pub fn from_json(v: &serde_json::Value) -> Result<TangentData> {
        let mut v = v.clone();
        if let Some(o) = v.as_object_mut() {
            o.remove("source");
        }
        let d: TangentData = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn from_json_str(s: &str) -> Result<TangentData> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn at(&self, p: &str) -> Result<&[Character]> {
        self.weights.get(p).map(Vec::as_slice).ok_or_else(|| Error::UnknownPoint(p.to_string()))
    }

    pub fn points(&self) -> impl Iterator<Item = &String> {
        self.weights.keys()
    }

    /// Ambient weights minus the subvariety's tangent weights, as normal
    /// data. Fails if a tangent weight is not an ambient weight.
    pub fn normal_to(&self, sub_tangent: &TangentData) -> Result<TangentData> {
        let mut out = BTreeMap::new();
        for (p, ws) in &sub_tangent.weights {
            let mut rest = self.at(p)?.to_vec();
            for w in ws {
                let pos = rest.iter().position(|x| x == w).ok_or_else(|| {
                    Error::InvalidParameters(format!("{w} at {p} is not an ambient tangent weight"))
                })?;
                rest.remove(pos);
            }
            out.insert(p.clone(), rest);
        }
        let mut d = TangentData::new(WeightTag::Normal, self.rank, out)?;
        d.dimension = sub_tangent.weights.values().next().map(Vec::len);
        Ok(d)
    }
}

fn negated(ws: &[Character]) -> Vec<Character> {
    ws.iter().map(Character::neg).collect()
}

/// `1 / ∏ c(L_{-χ})`.
pub fn smooth_multiplicity(law: &FormalGroupLaw, weights: &[Character], rank: usize) -> Result<LocalizedElement> {
    for w in weights {
        if w.is_zero() {
            return Err(Error::ZeroCharacter);
        }
    }
    LocalizedElement::new(TruncatedSeries::one(rank, law.order()), negated(weights))
}

/// `∏ c(L_{-χ})` over the weights at `x`, and 0 at the other points.
pub fn point_class(law: &FormalGroupLaw, x: &str, ambient: &TangentData) -> Result<CobordismTuple> {
    let ws = ambient.at(x)?;
    let mut f = CobordismTuple::new();
    for p in ambient.points() {
        let v = if p == x {
            law.chern_product(&negated(ws), ambient.rank)
        } else {
            TruncatedSeries::zero(ambient.rank, law.order())
        };
        f.insert(p, v);
    }
    Ok(f)
}

/// `∏ c(L_{-χ})` over the normal weights at each point of the subvariety,
/// 0 at the remaining `points`.
pub fn subvariety_class(law: &FormalGroupLaw, normal: &TangentData, points: &[String]) -> Result<CobordismTuple> {
    normal.validate()?;
    if let Some(p) = normal.points().find(|p| !points.contains(p)) {
        return Err(Error::UnknownPoint(p.clone()));
    }
    let mut f = CobordismTuple::new();
    for p in points {
        let v = match normal.weights.get(p) {
            Some(ws) => law.chern_product(&negated(ws), normal.rank),
            None => TruncatedSeries::zero(normal.rank, law.order()),
        };
        f.insert(p, v);
    }
    Ok(f)
}

/// `Σ_y 1 / ∏ c(L_{-χ})` over the fiber points `y`, kept as one fraction.
pub fn fiber_multiplicity(law: &FormalGroupLaw, fiber: &TangentData) -> Result<LocalizedElement> {
    fiber.validate()?;
    let mut acc = LocalizedElement::from_series(TruncatedSeries::zero(fiber.rank, law.order()));
    for ws in fiber.weights.values() {
        acc = acc.add(law, &smooth_multiplicity(law, ws, fiber.rank)?)?;
    }
    Ok(acc)
}

/// Number of Chern factors in the common denominator of the fiber sum,
/// which is how many orders clearing it can cost.
pub fn fiber_denominator_bound(fiber: &TangentData) -> Result<usize> {
    let mut need: BTreeMap<Character, usize> = BTreeMap::new();
    for ws in fiber.weights.values() {
        let mut here: BTreeMap<Character, usize> = BTreeMap::new();
        for w in ws {
            *here.entry(w.primitive()?.1).or_default() += 1;
        }
        for (v, k) in here {
            let e = need.entry(v).or_default();
            *e = (*e).max(k);
        }
    }
    Ok(need.values().sum())
}

#[derive(Clone, Debug)]
pub struct Pullback {
    pub value: LocalizedElement,
    pub cleared: std::result::Result<TruncatedSeries, ClearFailure>,
}

/// Fiber multiplicity at `x` times the point class at `x`.
pub fn singular_class_pullback(
    law: &FormalGroupLaw,
    x: &str,
    ambient: &TangentData,
    fiber: &TangentData,
) -> Result<Pullback> {
    let e = fiber_multiplicity(law, fiber)?;
    let value = e.mul_chern_factors(law, &negated(ambient.at(x)?))?;
    let cleared = value.clear_denominators(law);
    Ok(Pullback { value, cleared })
}

/// `∏ num c(L_χ) / ∏ den c(L_χ)`.
pub fn chern_fraction(
    law: &FormalGroupLaw,
    num: &[Character],
    den: &[Character],
    rank: usize,
) -> Result<LocalizedElement> {
    LocalizedElement::new(TruncatedSeries::one(rank, law.order()), den.to_vec())?.mul_chern_factors(law, num)
}
