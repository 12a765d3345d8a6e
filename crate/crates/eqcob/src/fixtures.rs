//! Built-in IG(2,5) datasets, embedded from the workspace `fixtures/` tree.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::mult::TangentData;
use crate::torus::Character;

pub const IG25_TANGENT: &str = include_str!("../../../fixtures/ig25/tangent.json");
pub const IG25_NORMALS: &str = include_str!("../../../fixtures/ig25/normals.json");
pub const IG25_FIBER_X4: &str = include_str!("../../../fixtures/ig25/fiber_x4.json");
pub const IG25_FIBER_X4_STAR: &str = include_str!("../../../fixtures/ig25/fiber_x4_star.json");
pub const IG25_POINT_CLASSES: &str = include_str!("../../../fixtures/ig25/point_classes.json");
pub const IG25_SUBVARIETY_CLASSES: &str = include_str!("../../../fixtures/ig25/subvariety_classes.json");
pub const IG25_X4_SUM: &str = include_str!("../../../fixtures/ig25/x4_sum.json");
pub const IG25_CONGRUENCES: &str = include_str!("../../../fixtures/ig25/congruences.txt");
pub const IG25_DATUM: &str = include_str!("../../../fixtures/ig25/datum.json");

fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn ig25_tangent() -> Result<TangentData> {
    TangentData::from_json_str(IG25_TANGENT)
}

pub fn ig25_fiber_x4() -> Result<TangentData> {
    TangentData::from_json_str(IG25_FIBER_X4)
}

pub fn ig25_fiber_x4_star() -> Result<TangentData> {
    TangentData::from_json_str(IG25_FIBER_X4_STAR)
}

/// Normal data by subvariety name.
pub fn ig25_normals() -> Result<BTreeMap<String, TangentData>> {
    #[derive(Deserialize)]
    struct Raw {
        subvarieties: BTreeMap<String, serde_json::Value>,
    }
    let raw: Raw = parse(IG25_NORMALS)?;
    raw.subvarieties.into_iter().map(|(k, v)| Ok((k, TangentData::from_json(&v)?))).collect()
}

/// Reference point classes as lists of factor characters.
pub fn ig25_point_classes() -> Result<BTreeMap<String, Vec<Character>>> {
    #[derive(Deserialize)]
    struct Raw {
        classes: BTreeMap<String, Vec<Character>>,
    }
    Ok(parse::<Raw>(IG25_POINT_CLASSES)?.classes)
}

/// Reference subvariety classes: name → point → factor characters.
pub fn ig25_subvariety_classes() -> Result<BTreeMap<String, BTreeMap<String, Vec<Character>>>> {
    #[derive(Deserialize)]
    struct Raw {
        classes: BTreeMap<String, BTreeMap<String, Vec<Character>>>,
    }
    Ok(parse::<Raw>(IG25_SUBVARIETY_CLASSES)?.classes)
}

#[derive(Clone, Debug, Deserialize)]
pub struct FractionTerm {
    pub num: Vec<Character>,
    pub den: Vec<Character>,
}

/// The reference sum for the resolution of X4 at x12.
pub fn ig25_x4_sum() -> Result<Vec<FractionTerm>> {
    #[derive(Deserialize)]
    struct Raw {
        terms: Vec<FractionTerm>,
    }
    Ok(parse::<Raw>(IG25_X4_SUM)?.terms)
}

/// Congruence lines of the reference table, comments dropped.
pub fn ig25_congruence_lines() -> Vec<String> {
    IG25_CONGRUENCES
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}
