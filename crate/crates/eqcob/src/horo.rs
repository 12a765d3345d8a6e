//! Horospherical varieties of Picard number one from a Pasquier triple
//! `(G, P(ω_Y), P(ω_Z))`: the difference `χ = ω_Y - ω_Z`, the surface scan
//! and the assembled GKM datum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::gkm::{Edge, GkmDatum, P2Model, SurfaceComponent, SurfaceKind};
use crate::lazard::{q, QExt, Q};
use crate::roots::{dot, fmt_vector, pairing, CartanType, RootSystem, Vector};
use crate::torus::Character;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PasquierTriple {
    pub family: u8,
    pub n: usize,
    pub m: usize,
}

impl PasquierTriple {
    /// Families 2, 4 and 5 ignore `n` and `m`.
    pub fn new(family: u8, n: Option<usize>, m: Option<usize>) -> Result<PasquierTriple> {
        let bad = |s: &str| Err(Error::InvalidParameters(s.to_string()));
        match family {
            1 => {
                let n = n.ok_or_else(|| Error::InvalidParameters("family 1 needs --n".into()))?;
                if !(3..=5).contains(&n) {
                    return bad("family 1 needs 3 <= n <= 5");
                }
                Ok(PasquierTriple { family, n, m: 0 })
            }
            3 => {
                let (Some(n), Some(m)) = (n, m) else {
                    return bad("family 3 needs --n and --m");
                };
                if !(2..=5).contains(&n) || m < 2 || m > n {
                    return bad("family 3 needs 2 <= m <= n <= 5");
                }
                Ok(PasquierTriple { family, n, m })
            }
            2 => Ok(PasquierTriple { family, n: 3, m: 0 }),
            4 => Ok(PasquierTriple { family, n: 4, m: 0 }),
            5 => Ok(PasquierTriple { family, n: 2, m: 0 }),
            _ => bad("family must be 1..=5"),
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        match self.family {
            1 => CartanType::B(self.n),
            2 => CartanType::B(3),
            3 => CartanType::C(self.n),
            4 => CartanType::F4,
            _ => CartanType::G2,
        }
    }

    /// Indices of `ω_Y` and `ω_Z`.
    pub fn weights(&self) -> (usize, usize) {
        match self.family {
            1 => (self.n - 1, self.n),
            2 => (1, 3),
            3 => (self.m, self.m - 1),
            4 => (2, 3),
            _ => (1, 2),
        }
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.cartan_type()).expect("validated triple")
    }
}

impl fmt::Display for PasquierTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (y, z) = self.weights();
        write!(f, "({}, w{y}, w{z})", self.cartan_type())
    }
}

/// `ω_Y - ω_Z` in ε-coordinates.
pub fn chi(t: &PasquierTriple) -> Vector {
    let rs = t.root_system();
    let (y, z) = t.weights();
    let wy = rs.fundamental_weight(y).expect("index");
    let wz = rs.fundamental_weight(z).expect("index");
    wy.iter().zip(wz).map(|(a, b)| a - b).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanKind {
    NoSurface,
    Resolved(SurfaceKind),
    /// four fixed points, but no rule for the Hirzebruch index
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceScan {
    pub chi: Vector,
    pub alpha: Option<Vector>,
    pub pairings: Option<(Q, Q)>,
    pub fixed_points: Option<usize>,
    pub kind: ScanKind,
}

impl SurfaceScan {
    pub fn to_json(&self) -> serde_json::Value {
        let v = |x: &Vector| serde_json::json!(x.iter().map(|c| c.to_string()).collect::<Vec<_>>());
        let kind = match &self.kind {
            ScanKind::NoSurface => "none".to_string(),
            ScanKind::Resolved(k) => k.to_string(),
            ScanKind::Unresolved => "unresolved".to_string(),
        };
        serde_json::json!({
            "chi": v(&self.chi),
            "alpha": self.alpha.as_ref().map(v),
            "pairings": self.pairings.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
            "fixed_points": self.fixed_points,
            "kind": kind,
        })
    }
}

impl fmt::Display for SurfaceScan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chi {}", fmt_vector(&self.chi))?;
        match (&self.alpha, &self.pairings, self.fixed_points) {
            (Some(a), Some((x, y)), Some(c)) => {
                writeln!(f, "alpha {}", fmt_vector(a))?;
                writeln!(f, "pairings {x} {y}")?;
                writeln!(f, "fixed points {c}")?;
            }
            _ => writeln!(f, "alpha none")?,
        }
        match &self.kind {
            ScanKind::NoSurface => writeln!(f, "kind none"),
            ScanKind::Resolved(k) => writeln!(f, "kind {k}"),
            ScanKind::Unresolved => writeln!(f, "kind unresolved"),
        }
    }
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    // a ∥ b iff (a·b)² = (a·a)(b·b)
    let ab = dot(a, b);
    !ab.is_zero() && &ab * &ab == dot(a, a) * dot(b, b)
}

pub fn surface_scan(t: &PasquierTriple) -> SurfaceScan {
    let rs = t.root_system();
    let c = chi(t);
    let (y, z) = t.weights();
    let Some(alpha) = rs.positive_roots().iter().find(|r| proportional(r, &c)).cloned() else {
        return SurfaceScan { chi: c, alpha: None, pairings: None, fixed_points: None, kind: ScanKind::NoSurface };
    };
    let a = pairing(&alpha, rs.fundamental_weight(y).expect("index")).expect("root");
    let b = pairing(&alpha, rs.fundamental_weight(z).expect("index")).expect("root");
    let count = if a.is_zero() { 1 } else { 2 } + if b.is_zero() { 1 } else { 2 };
    let kind = match count {
        3 => {
            let model = if a.abs().is_one() || b.abs().is_one() { P2Model::V0V1 } else { P2Model::V2 };
            ScanKind::Resolved(SurfaceKind::P2(model))
        }
        4 if t.family == 5 => ScanKind::Resolved(SurfaceKind::Fn(3)),
        4 => ScanKind::Unresolved,
        _ => ScanKind::NoSurface,
    };
    SurfaceScan { chi: c, alpha: Some(alpha), pairings: Some((a, b)), fixed_points: Some(count), kind }
}

#[derive(Clone, Debug)]
pub struct HoroBuild {
    pub datum: GkmDatum,
    pub scan: SurfaceScan,
    /// set when surface components were left out for lack of a kind
    pub unresolved: Option<String>,
}

fn family3_name(n: usize, weight: &[Q], closed_z: bool) -> String {
    let mut idx: Vec<usize> = Vec::new();
    for (i, c) in weight.iter().enumerate() {
        if c.is_one() {
            idx.push(i + 1);
        } else if c.is_negative() {
            idx.push(2 * n + 1 - i);
        }
    }
    if closed_z {
        idx.push(n + 1);
    }
    idx.sort_unstable();
    let sep = if 2 * n + 1 > 9 { "_" } else { "" };
    "x".to_string() + &idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

/// Points, edges and surface components of the horospherical variety of
/// the triple. `force_kind` supplies the kind when the scan cannot.
pub fn build_gkm(t: &PasquierTriple, force_kind: Option<SurfaceKind>) -> Result<HoroBuild> {
    let rs = t.root_system();
    let (yi, zi) = t.weights();
    let wy = rs.fundamental_weight(yi)?.clone();
    let wz = rs.fundamental_weight(zi)?.clone();
    let lambda = rs.torus_covector(&rs.rho());
    let tc = |v: &[Q]| rs.torus_character(v);

    let iy: BTreeSet<usize> = (1..=rs.rank()).filter(|i| *i != yi).collect();
    let iz: BTreeSet<usize> = (1..=rs.rank()).filter(|i| *i != zi).collect();
    let (ypts, ycurves) = rs.curves(&iy)?;
    let (zpts, zcurves) = rs.curves(&iz)?;

    let name = |p: &crate::roots::OrbitPoint, closed_z: bool| {
        if t.family == 3 {
            family3_name(t.n, &p.vector, closed_z)
        } else {
            format!("{}({})", if closed_z { "z" } else { "y" }, p.word_name())
        }
    };
    let yname: BTreeMap<Vector, String> = ypts.iter().map(|p| (p.vector.clone(), name(p, false))).collect();
    let zname: BTreeMap<Vector, String> = zpts.iter().map(|p| (p.vector.clone(), name(p, true))).collect();

    let mut weights: BTreeMap<String, Character> = BTreeMap::new();
    for (v, n) in yname.iter().chain(zname.iter()) {
        if weights.insert(n.clone(), tc(v)).is_some() {
            return Err(Error::InvalidDatum(format!("point name {n} is not unique")));
        }
    }

    let mut edges: BTreeMap<(String, String), Character> = BTreeMap::new();
    let mut add_edge = |a: &str, b: &str, w: Character| {
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        edges.entry(key).or_insert(w);
    };
    for (pts, curves, names) in [(&ypts, &ycurves, &yname), (&zpts, &zcurves, &zname)] {
        for c in curves {
            add_edge(&names[&pts[c.u].vector], &names[&pts[c.v].vector], tc(&c.weight));
        }
    }
    let joint: Vector = wy.iter().zip(&wz).map(|(a, b)| a + b).collect();
    for p in rs.orbit(&joint) {
        let y = rs.act(&p.word, &wy);
        let z = rs.act(&p.word, &wz);
        let w: Vector = y.iter().zip(&z).map(|(a, b)| a - b).collect();
        add_edge(&yname[&y], &zname[&z], tc(&w));
    }

    let scan = surface_scan(t);
    let mut unresolved = None;
    let kind = match (&scan.kind, force_kind) {
        (ScanKind::NoSurface, _) => None,
        (_, Some(k)) => Some(k),
        (ScanKind::Resolved(k), None) => Some(*k),
        (ScanKind::Unresolved, None) => {
            let (a, b) = scan.pairings.clone().expect("pairings");
            unresolved = Some(format!(
                "{t}: surface with pairings ({a}, {b}) has 4 fixed points but no rule fixes its Hirzebruch index; \
                 rerun with --force-kind"
            ));
            None
        }
    };

    let mut surfaces: BTreeMap<Vec<String>, SurfaceComponent> = BTreeMap::new();
    if let (Some(kind), Some(alpha)) = (kind, &scan.alpha) {
        let sy = crate::roots::reflect(alpha, &wy);
        let sz = crate::roots::reflect(alpha, &wz);
        for p in rs.orbit(&rs.rho()) {
            let beta = rs.act(&p.word, alpha);
            let lb = tc(&beta).dot(&lambda);
            if lb.is_zero() {
                return Err(Error::InvalidDatum(format!("lambda vanishes on the root {}", fmt_vector(&beta))));
            }
            if lb.is_negative() {
                continue;
            }
            let mut pts: Vec<String> = Vec::new();
            for v in [rs.act(&p.word, &wy), rs.act(&p.word, &sy)] {
                pts.push(yname[&v].clone());
            }
            for v in [rs.act(&p.word, &wz), rs.act(&p.word, &sz)] {
                pts.push(zname[&v].clone());
            }
            pts.sort();
            pts.dedup();
            if pts.len() != kind.num_points() {
                return Err(Error::InvalidDatum(format!(
                    "surface kind {kind} needs {} points, the orbit gives {}",
                    kind.num_points(),
                    pts.len()
                )));
            }
            let val = |n: &String| weights[n].dot(&lambda);
            pts.sort_by(|a, b| val(b).cmp(&val(a)));
            if pts.windows(2).any(|w| val(&w[0]) == val(&w[1])) {
                return Err(Error::InvalidDatum(format!("lambda ties inside the surface {}", pts.join(" "))));
            }
            let kind = match kind {
                SurfaceKind::P2(_) => {
                    let top = weights[&pts[0]].sub(&weights[&pts[2]]);
                    match top.ratio_to(&tc(&beta)) {
                        Some(r) if r == q(1) => SurfaceKind::P2(P2Model::V0V1),
                        Some(r) if r == q(2) => SurfaceKind::P2(P2Model::V2),
                        _ => {
                            return Err(Error::InvalidDatum(format!(
                                "plane {} is not spaced along its root",
                                pts.join(" ")
                            )))
                        }
                    }
                }
                k => k,
            };
            let mut key = pts.clone();
            key.sort();
            surfaces.entry(key).or_insert(SurfaceComponent { kind, points: pts, alpha: tc(&beta) });
        }
    }

    let mut points: Vec<String> = weights.keys().cloned().collect();
    points.sort();
    let datum = GkmDatum {
        rank: rs.torus_rank(),
        points,
        edges: edges.into_iter().map(|((a, b), weight)| Edge { a, b, weight }).collect(),
        surfaces: surfaces.into_values().collect(),
        lambda: Some(lambda),
        point_weights: Some(weights),
    };
    datum.validate()?;
    Ok(HoroBuild { datum, scan, unresolved })
}
