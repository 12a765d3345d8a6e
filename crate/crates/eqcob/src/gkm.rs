//! GKM data: fixed points, weighted curves and two-dimensional fixed
//! components, the congruence system they impose, membership checks, and the
//! generator tables of the surface models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgl::{ratio_parts, FormalGroupLaw};
use crate::lazard::{parse_q, q, qf, QExt, Q};
use crate::series::TruncatedSeries;
use crate::torus::{reduce_mod, Character, LocalizedElement};

/// Which three-dimensional representation a projective plane comes from:
/// weights `α/2, 0, -α/2` or `α, 0, -α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P2Model {
    V0V1,
    V2,
}

impl P2Model {
    pub fn parse(s: &str) -> Result<P2Model> {
        match s {
            "V0+V1" | "V0V1" => Ok(P2Model::V0V1),
            "V2" => Ok(P2Model::V2),
            _ => Err(Error::Parse(format!("unknown plane model {s:?}"))),
        }
    }
}

impl fmt::Display for P2Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            P2Model::V0V1 => "V0+V1",
            P2Model::V2 => "V2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceKind {
    P2(P2Model),
    F0,
    /// Hirzebruch surface `F_n`, `n ≥ 1`
    Fn(u32),
}

impl SurfaceKind {
    pub fn num_points(&self) -> usize {
        match self {
            SurfaceKind::P2(_) => 3,
            _ => 4,
        }
    }
}

impl SurfaceKind {
    /// Parses `P2`, `P2(V0+V1)`, `P2(V2)`, `F0` or `F<n>`.
    pub fn parse(s: &str) -> Result<SurfaceKind> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("P2") {
            return match rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                Some(m) => Ok(SurfaceKind::P2(P2Model::parse(m)?)),
                None if rest.is_empty() => Ok(SurfaceKind::P2(P2Model::V2)),
                None => Err(Error::Parse(format!("unknown surface kind {s:?}"))),
            };
        }
        match s.strip_prefix('F').map(str::parse::<u32>) {
            Some(Ok(0)) => Ok(SurfaceKind::F0),
            Some(Ok(n)) => Ok(SurfaceKind::Fn(n)),
            _ => Err(Error::Parse(format!("unknown surface kind {s:?}"))),
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::P2(m) => write!(f, "P2({m})"),
            SurfaceKind::F0 => write!(f, "F0"),
            SurfaceKind::Fn(n) => write!(f, "F{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub weight: Character,
}

/// A two-dimensional fixed component of `Ker(α)⁰`. Points are stored in
/// decreasing weight order: `x, y, z` for a plane, `w, x, y, z` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub kind: SurfaceKind,
    pub points: Vec<String>,
    pub alpha: Character,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmDatum {
    pub rank: usize,
    pub points: Vec<String>,
    pub edges: Vec<Edge>,
    pub surfaces: Vec<SurfaceComponent>,
    /// covector used to order points by weight
    pub lambda: Option<Vec<Q>>,
    /// weight of the line (or point) at each fixed point, when known
    pub point_weights: Option<BTreeMap<String, Character>>,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    a: String,
    b: String,
    weight: Character,
}

#[derive(Serialize, Deserialize)]
struct RawSurface {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    model: Option<String>,
    points: Vec<String>,
    alpha: Character,
}

#[derive(Serialize, Deserialize)]
struct RawDatum {
    rank: usize,
    points: Vec<String>,
    edges: Vec<RawEdge>,
    #[serde(default)]
    surfaces: Vec<RawSurface>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lambda: Option<Character>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    point_weights: Option<BTreeMap<String, Character>>,
}

impl GkmDatum {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidDatum(s));
        let names: BTreeSet<&String> = self.points.iter().collect();
        if names.len() != self.points.len() {
            return bad("duplicate point names".into());
        }
        let known = |p: &String| -> Result<()> {
            if names.contains(p) {
                Ok(())
            } else {
                Err(Error::UnknownPoint(p.clone()))
            }
        };
        for e in &self.edges {
            known(&e.a)?;
            known(&e.b)?;
            if e.a == e.b {
                return bad(format!("edge {} {} has equal endpoints", e.a, e.b));
            }
            if e.weight.rank() != self.rank {
                return bad(format!("edge {} {} weight has rank {}", e.a, e.b, e.weight.rank()));
            }
            if e.weight.is_zero() {
                return bad(format!("edge {} {} has zero weight", e.a, e.b));
            }
        }
        if let Some(l) = &self.lambda {
            if l.len() != self.rank {
                return bad("lambda has the wrong length".into());
            }
        }
        if let Some(pw) = &self.point_weights {
            for (p, w) in pw {
                known(p)?;
                if w.rank() != self.rank {
                    return bad(format!("weight of {p} has the wrong rank"));
                }
            }
        }
        for s in &self.surfaces {
            for p in &s.points {
                known(p)?;
            }
            if s.points.len() != s.kind.num_points() {
                return bad(format!("{} component needs {} points", s.kind, s.kind.num_points()));
            }
            if s.points.iter().collect::<BTreeSet<_>>().len() != s.points.len() {
                return bad("repeated point in a surface component".into());
            }
            if s.alpha.rank() != self.rank || s.alpha.is_zero() {
                return bad(format!("surface root {} is zero or has the wrong rank", s.alpha));
            }
            if s.kind == SurfaceKind::Fn(0) {
                return bad("F_n needs n >= 1, use F0".into());
            }
            self.check_order(s)?;
        }
        Ok(())
    }

    fn check_order(&self, s: &SurfaceComponent) -> Result<()> {
        let (Some(l), Some(pw)) = (&self.lambda, &self.point_weights) else {
            return Ok(());
        };
        let mut vals = Vec::new();
        for p in &s.points {
            match pw.get(p) {
                Some(w) => vals.push(w.dot(l)),
                None => return Ok(()),
            }
        }
        let ok = match s.kind {
            SurfaceKind::F0 => vals[0] > vals[1] && vals[0] > vals[2] && vals[1] > vals[3] && vals[2] > vals[3],
            _ => vals.windows(2).all(|w| w[0] > w[1]),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDatum(format!(
                "points {} are not strictly decreasing under lambda",
                s.points.join(" ")
            )))
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GkmDatum> {
        let raw: RawDatum = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut surfaces = Vec::new();
        for s in raw.surfaces {
            let kind = match s.kind.as_str() {
                "P2" => SurfaceKind::P2(match &s.model {
                    Some(m) => P2Model::parse(m)?,
                    None => P2Model::V2,
                }),
                "F0" => SurfaceKind::F0,
                "Fn" => SurfaceKind::Fn(s.n.ok_or_else(|| Error::InvalidDatum("Fn component without n".into()))?),
                k => return Err(Error::InvalidDatum(format!("unknown surface kind {k:?}"))),
            };
            surfaces.push(SurfaceComponent { kind, points: s.points, alpha: s.alpha });
        }
        let d = GkmDatum {
            rank: raw.rank,
            points: raw.points,
            edges: raw.edges.into_iter().map(|e| Edge { a: e.a, b: e.b, weight: e.weight }).collect(),
            surfaces,
            lambda: raw.lambda.map(|c| c.coords().to_vec()),
            point_weights: raw.point_weights,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json_str(s: &str) -> Result<GkmDatum> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawDatum {
            rank: self.rank,
            points: self.points.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge { a: e.a.clone(), b: e.b.clone(), weight: e.weight.clone() })
                .collect(),
            surfaces: self
                .surfaces
                .iter()
                .map(|s| {
                    let (kind, n, model) = match s.kind {
                        SurfaceKind::P2(m) => ("P2", None, Some(m.to_string())),
                        SurfaceKind::F0 => ("F0", None, None),
                        SurfaceKind::Fn(n) => ("Fn", Some(n), None),
                    };
                    RawSurface { kind: kind.into(), n, model, points: s.points.clone(), alpha: s.alpha.clone() }
                })
                .collect(),
            lambda: self.lambda.clone().map(Character::new),
            point_weights: self.point_weights.clone(),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }

    /// The component alone, with an edge of weight `α` between any two of
    /// its points.
    pub fn from_component(rank: usize, s: &SurfaceComponent) -> Result<GkmDatum> {
        let mut edges = Vec::new();
        for (i, a) in s.points.iter().enumerate() {
            for b in &s.points[i + 1..] {
                edges.push(Edge { a: a.clone(), b: b.clone(), weight: s.alpha.clone() });
            }
        }
        let d = GkmDatum {
            rank,
            points: s.points.clone(),
            edges,
            surfaces: vec![s.clone()],
            lambda: None,
            point_weights: None,
        };
        d.validate()?;
        Ok(d)
    }
}

/// Values at the fixed points.
#[derive(Clone, Debug, PartialEq)]
pub struct CobordismTuple(pub BTreeMap<String, TruncatedSeries>);

impl CobordismTuple {
    pub fn new() -> Self {
        CobordismTuple(BTreeMap::new())
    }

    pub fn constant(datum: &GkmDatum, c: &TruncatedSeries) -> Self {
        CobordismTuple(datum.points.iter().map(|p| (p.clone(), c.clone())).collect())
    }

    /// Zero everywhere except the listed points.
    pub fn supported(datum: &GkmDatum, values: BTreeMap<String, TruncatedSeries>, order: usize) -> Result<Self> {
        let mut t = CobordismTuple::constant(datum, &TruncatedSeries::zero(datum.rank, order));
        for (p, v) in values {
            if !datum.points.contains(&p) {
                return Err(Error::UnknownPoint(p));
            }
            t.0.insert(p, v);
        }
        Ok(t)
    }

    pub fn get(&self, p: &str) -> Result<&TruncatedSeries> {
        self.0.get(p).ok_or_else(|| Error::MissingPoint(p.to_string()))
    }

    pub fn insert(&mut self, p: &str, v: TruncatedSeries) {
        self.0.insert(p.to_string(), v);
    }

    /// Multiplies every value by `g`.
    pub fn scale_by(&self, g: &TruncatedSeries) -> Result<Self> {
        Ok(CobordismTuple(
            self.0.iter().map(|(p, v)| Ok((p.clone(), v.checked_mul(g)?))).collect::<Result<_>>()?,
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.0.iter().map(|(p, v)| (p.clone(), v.to_json())).collect())
    }

    pub fn from_json(v: &serde_json::Value, nvars: usize, order: usize) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("tuple must be a JSON object".into()))?;
        let mut m = BTreeMap::new();
        for (p, s) in obj {
            // a bare string is a rational constant
            let v = match s.as_str() {
                Some(c) => TruncatedSeries::rational(parse_q(c)?, nvars, order),
                None => TruncatedSeries::from_json(s, nvars, order)?,
            };
            m.insert(p.clone(), v);
        }
        Ok(CobordismTuple(m))
    }
}

impl Default for CobordismTuple {
    fn default() -> Self {
        Self::new()
    }
}

/// Symbolic form of a congruence's left-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Point(String),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `ρ_{n/m}(c(L_α))`
    Rho { n: i64, m: i64, of: Character },
    Chern(Character),
}

impl Expr {
    pub fn point(p: &str) -> Expr {
        Expr::Point(p.to_string())
    }

    /// `f_a - f_b`
    pub fn diff(a: &str, b: &str) -> Expr {
        Expr::Sum(vec![Expr::point(a), Expr::Neg(Box::new(Expr::point(b)))])
    }

    pub fn times(self, other: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(other))
    }

    pub fn points(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_points(&mut out);
        out
    }

    fn collect_points(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Point(p) => {
                out.insert(p.clone());
            }
            Expr::Neg(e) => e.collect_points(out),
            Expr::Sum(es) => es.iter().for_each(|e| e.collect_points(out)),
            Expr::Mul(a, b) => {
                a.collect_points(out);
                b.collect_points(out);
            }
            Expr::Rho { .. } | Expr::Chern(_) => {}
        }
    }

    pub fn eval(&self, law: &FormalGroupLaw, f: &CobordismTuple, rank: usize) -> Result<TruncatedSeries> {
        Ok(match self {
            Expr::Point(p) => f.get(p)?.clone(),
            Expr::Neg(e) => e.eval(law, f, rank)?.neg(),
            Expr::Sum(es) => {
                let mut acc = TruncatedSeries::zero(rank, law.order());
                for e in es {
                    acc = acc.checked_add(&e.eval(law, f, rank)?)?;
                }
                acc
            }
            Expr::Mul(a, b) => a.eval(law, f, rank)?.checked_mul(&b.eval(law, f, rank)?)?,
            Expr::Rho { n, m, of } => law.rho(*n, *m, &law.chern(of))?,
            Expr::Chern(c) => law.chern(c),
        })
    }

    /// If every operator factor evaluates to a rational constant under
    /// `law`, the expression is a rational linear form in the point values;
    /// returns its coefficients.
    pub fn linear_coefficients(&self, law: &FormalGroupLaw) -> Result<Option<BTreeMap<String, Q>>> {
        let mut out = BTreeMap::new();
        if !self.linear_into(law, &Q::one(), &mut out)? {
            return Ok(None);
        }
        out.retain(|_, v: &mut Q| !v.is_zero());
        Ok(Some(out))
    }

    fn constant_value(&self, law: &FormalGroupLaw) -> Result<Option<Q>> {
        let s = match self {
            Expr::Rho { n, m, of } => law.rho(*n, *m, &law.chern(of))?,
            Expr::Chern(c) => law.chern(c),
            _ => return Ok(None),
        };
        match s.valuation() {
            None => Ok(Some(Q::zero())),
            Some(0) if s.num_terms() == 1 => Ok(s.constant_term().as_constant()),
            _ => Ok(None),
        }
    }

    fn linear_into(&self, law: &FormalGroupLaw, scale: &Q, out: &mut BTreeMap<String, Q>) -> Result<bool> {
        match self {
            Expr::Point(p) => {
                *out.entry(p.clone()).or_insert_with(Q::zero) += scale;
                Ok(true)
            }
            Expr::Neg(e) => e.linear_into(law, &-scale, out),
            Expr::Sum(es) => {
                for e in es {
                    if !e.linear_into(law, scale, out)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Expr::Mul(a, b) => {
                if let Some(c) = a.constant_value(law)? {
                    b.linear_into(law, &(scale * c), out)
                } else if let Some(c) = b.constant_value(law)? {
                    a.linear_into(law, &(scale * c), out)
                } else {
                    Ok(false)
                }
            }
            Expr::Rho { .. } | Expr::Chern(_) => Ok(false),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Point(p) => write!(f, "f[{p}]"),
            Expr::Neg(e) => write!(f, "-{e}"),
            Expr::Sum(es) => {
                write!(f, "(")?;
                for (i, e) in es.iter().enumerate() {
                    match (i, e) {
                        (0, _) => write!(f, "{e}")?,
                        (_, Expr::Neg(inner)) => write!(f, " - {inner}")?,
                        _ => write!(f, " + {e}")?,
                    }
                }
                write!(f, ")")
            }
            Expr::Mul(a, b) => write!(f, "{a} * {b}"),
            Expr::Rho { n, m, of } => write!(f, "rho[{n}/{m}](c{of})"),
            Expr::Chern(c) => write!(f, "c{c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintKind {
    Edge,
    P2,
    F0,
    Fn(u32),
}

/// `expr ≡ 0 mod c(L_character)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceConstraint {
    pub kind: ConstraintKind,
    pub points: Vec<String>,
    pub character: Character,
    pub power: u8,
    pub expr: Expr,
}

impl CongruenceConstraint {
    /// `f_a ≡ f_b mod c(L_χ)`, with `χ` replaced by its primitive direction.
    pub fn edge(a: &str, b: &str, chi: &Character) -> Result<Self> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let (_, v) = chi.primitive()?;
        Ok(CongruenceConstraint {
            kind: ConstraintKind::Edge,
            points: vec![a.to_string(), b.to_string()],
            character: v,
            power: 1,
            expr: Expr::diff(a, b),
        })
    }

    /// The mod-`c(L_α)²` condition of a surface component.
    pub fn surface(s: &SurfaceComponent) -> Self {
        let p = &s.points;
        let rho = |n: i64, m: i64| Expr::Rho { n, m, of: s.alpha.clone() };
        let (kind, expr) = match s.kind {
            // (f_x - f_y) + ρ_{1/2}(f_z - f_x)
            SurfaceKind::P2(_) => (
                ConstraintKind::P2,
                Expr::Sum(vec![Expr::diff(&p[0], &p[1]), rho(1, 2).times(Expr::diff(&p[2], &p[0]))]),
            ),
            // f_w - f_x - f_y + f_z
            SurfaceKind::F0 => (
                ConstraintKind::F0,
                Expr::Sum(vec![
                    Expr::point(&p[0]),
                    Expr::Neg(Box::new(Expr::point(&p[1]))),
                    Expr::Neg(Box::new(Expr::point(&p[2]))),
                    Expr::point(&p[3]),
                ]),
            ),
            // ρ_{n/2}(f_y - f_z) + ρ_{-n/2}(f_w - f_x)
            SurfaceKind::Fn(n) => {
                let (a, b) = reduced(n as i64, 2);
                (
                    ConstraintKind::Fn(n),
                    Expr::Sum(vec![
                        rho(a, b).times(Expr::diff(&p[2], &p[3])),
                        rho(-a, b).times(Expr::diff(&p[0], &p[1])),
                    ]),
                )
            }
        };
        CongruenceConstraint { kind, points: p.clone(), character: s.alpha.clone(), power: 2, expr }
    }

    /// One-line canonical form, used for ordering and golden comparisons.
    pub fn canonical_line(&self) -> String {
        let pts = self.points.join(" ");
        match self.kind {
            ConstraintKind::Edge => format!("edge {pts} mod {}", self.character),
            ConstraintKind::P2 => format!("p2 {pts} alpha {}", self.character),
            ConstraintKind::F0 => format!("f0 {pts} alpha {}", self.character),
            ConstraintKind::Fn(n) => format!("fn {n} {pts} alpha {}", self.character),
        }
    }
}

fn reduced(n: i64, m: i64) -> (i64, i64) {
    ratio_parts(&qf(n, m)).expect("small ratio")
}

/// Mod-`c(L_α)` congruences along the boundary of a component.
fn boundary_chain(s: &SurfaceComponent) -> Vec<(usize, usize)> {
    match s.kind {
        SurfaceKind::P2(_) => vec![(0, 1), (1, 2)],
        SurfaceKind::F0 => vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        SurfaceKind::Fn(_) => vec![(0, 1), (1, 2), (2, 3), (0, 3)],
    }
}

/// All constraints of one component, boundary congruences first.
pub fn component_constraints(s: &SurfaceComponent) -> Result<Vec<CongruenceConstraint>> {
    let mut out = Vec::new();
    for (i, j) in boundary_chain(s) {
        out.push(CongruenceConstraint::edge(&s.points[i], &s.points[j], &s.alpha)?);
    }
    out.push(CongruenceConstraint::surface(s));
    Ok(out)
}

/// The full system: an edge congruence for every curve not lying in a
/// surface component, plus each component's constraints; deduplicated and
/// sorted by canonical line.
pub fn congruence_system(datum: &GkmDatum) -> Result<Vec<CongruenceConstraint>> {
    datum.validate()?;
    let mut out = Vec::new();
    for e in &datum.edges {
        let inside = datum.surfaces.iter().any(|s| s.points.contains(&e.a) && s.points.contains(&e.b));
        if !inside {
            out.push(CongruenceConstraint::edge(&e.a, &e.b, &e.weight)?);
        }
    }
    for s in &datum.surfaces {
        out.extend(component_constraints(s)?);
    }
    out.sort_by_cached_key(CongruenceConstraint::canonical_line);
    out.dedup_by(|a, b| a.canonical_line() == b.canonical_line());
    Ok(out)
}

pub fn render_system(system: &[CongruenceConstraint]) -> String {
    system.iter().map(|c| c.canonical_line() + "\n").collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintResult {
    pub id: usize,
    pub line: String,
    pub passed: bool,
    pub remainder: TruncatedSeries,
    pub derivative: Option<TruncatedSeries>,
    pub certified_order: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub law: String,
    pub order: usize,
    pub results: Vec<ConstraintResult>,
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let results: Vec<serde_json::Value> = self
            .results
            .iter()
            .map(|r| {
                let mut o = serde_json::json!({
                    "id": r.id,
                    "constraint": r.line,
                    "status": if r.passed { "pass" } else { "fail" },
                    "certified_order": r.certified_order,
                    "remainder": r.remainder.to_json(),
                });
                if let Some(d) = &r.derivative {
                    o["derivative_remainder"] = d.to_json();
                }
                o
            })
            .collect();
        serde_json::json!({
            "law": self.law,
            "order": self.order,
            "member": self.is_member(),
            "results": results,
        })
    }
}

/// Evaluates each constraint on `f` and reduces it modulo its Chern power.
pub fn check_constraints(
    law: &FormalGroupLaw,
    rank: usize,
    system: &[CongruenceConstraint],
    f: &CobordismTuple,
) -> Result<Certificate> {
    let mut results = Vec::with_capacity(system.len());
    for (id, c) in system.iter().enumerate() {
        let v = c.expr.eval(law, f, rank)?;
        let r = reduce_mod(law, &v, &c.character, c.power)?;
        results.push(ConstraintResult {
            id,
            line: c.canonical_line(),
            passed: r.vanishes(),
            remainder: r.value,
            derivative: r.derivative,
            certified_order: r.certified_order,
        });
    }
    Ok(Certificate { law: law.specialization().to_string(), order: law.order(), results })
}

pub fn check_membership(law: &FormalGroupLaw, datum: &GkmDatum, f: &CobordismTuple) -> Result<Certificate> {
    for p in &datum.points {
        f.get(p)?;
    }
    if let Some(p) = f.0.keys().find(|p| !datum.points.contains(p)) {
        return Err(Error::UnknownPoint(p.clone()));
    }
    check_constraints(law, datum.rank, &congruence_system(datum)?, f)
}

/// The classes `(1, ..)`, the two curve classes (or one for a plane) and
/// the point class, as value lists in the component's point order.
///
/// Plane: unit, `(0, A, B)`, `(0, 0, AB)` with `(A, B) = (c(α/2), c(α))`
/// or `(c(α), c(2α))`. `F0`: unit, `(C, C, 0, 0)`, `(C, 0, C, 0)`,
/// `(C², 0, 0, 0)` with `C = c(-α)`. `F_n`: unit, `(C, C, 0, 0)`,
/// `(0, c(nα/2), c(-nα/2), 0)`, `(C·c(-nα/2), 0, 0, 0)`.
pub fn surface_generators(law: &FormalGroupLaw, kind: SurfaceKind, alpha: &Character) -> Vec<Vec<TruncatedSeries>> {
    let r = alpha.rank();
    let d = law.order();
    let one = TruncatedSeries::one(r, d);
    let zero = TruncatedSeries::zero(r, d);
    let c = |a: &Q| law.chern(&alpha.scale(a));
    match kind {
        SurfaceKind::P2(model) => {
            let (a, b) = plane_factors(model);
            let (ca, cb) = (c(&a), c(&b));
            vec![
                vec![one.clone(), one.clone(), one],
                vec![zero.clone(), ca.clone(), cb.clone()],
                vec![zero.clone(), zero, ca.mul(&cb)],
            ]
        }
        SurfaceKind::F0 => {
            let cm = c(&q(-1));
            vec![
                vec![one.clone(); 4],
                vec![cm.clone(), cm.clone(), zero.clone(), zero.clone()],
                vec![cm.clone(), zero.clone(), cm.clone(), zero.clone()],
                vec![cm.mul(&cm), zero.clone(), zero.clone(), zero],
            ]
        }
        SurfaceKind::Fn(n) => {
            let cm = c(&q(-1));
            let h = qf(n as i64, 2);
            let (cp, cn) = (c(&h), c(&-h.clone()));
            vec![
                vec![one.clone(); 4],
                vec![cm.clone(), cm.clone(), zero.clone(), zero.clone()],
                vec![zero.clone(), cp, cn.clone(), zero.clone()],
                vec![cm.mul(&cn), zero.clone(), zero.clone(), zero],
            ]
        }
    }
}

/// Multiples of `α` used by the plane generators `(0, A, B)`.
fn plane_factors(model: P2Model) -> (Q, Q) {
    match model {
        P2Model::V0V1 => (qf(1, 2), q(1)),
        P2Model::V2 => (q(1), q(2)),
    }
}

/// Coefficients of `values` in the basis of [`surface_generators`].
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub coefficients: Vec<TruncatedSeries>,
    /// every coefficient is exact through this order
    pub certified_order: usize,
}

/// Expresses a member tuple of the component as an `S(T)`-combination of
/// the generators, using the closed-form quotients of the surface models.
pub fn surface_decompose(
    law: &FormalGroupLaw,
    component: &SurfaceComponent,
    values: &[TruncatedSeries],
) -> Result<Decomposition> {
    let s = component;
    if values.len() != s.kind.num_points() {
        return Err(Error::InvalidDatum(format!("{} needs {} values", s.kind, s.kind.num_points())));
    }
    let tuple = CobordismTuple(s.points.iter().cloned().zip(values.iter().cloned()).collect());
    let cert = check_constraints(law, s.alpha.rank(), &component_constraints(s)?, &tuple)?;
    if let Some(bad) = cert.failures().next() {
        return Err(Error::CongruenceFailure(bad.line.clone()));
    }
    let alpha = &s.alpha;
    let c = |a: &Q| law.chern(&alpha.scale(a));
    let ch = |a: &Q| alpha.scale(a);
    let f = values;
    let quotient = |num: TruncatedSeries, den: Vec<Character>| -> Result<TruncatedSeries> {
        LocalizedElement::new(num, den)?
            .normalize(law)?
            .clear_denominators(law)
            .map_err(|e| Error::NotDivisible { degree: e.degree })
    };
    let coefficients = match s.kind {
        SurfaceKind::P2(model) => {
            let (a, b) = plane_factors(model);
            let (ca, cb) = (c(&a), c(&b));
            let c1 = quotient(f[1].sub(&f[0]), vec![ch(&a)])?;
            // ((f_x - f_y)B + A(f_z - f_x)) / (A² B)
            let num = f[0].sub(&f[1]).mul(&cb).add(&ca.mul(&f[2].sub(&f[0])));
            let c2 = quotient(num, vec![ch(&a), ch(&a), ch(&b)])?;
            vec![f[0].clone(), c1, c2]
        }
        SurfaceKind::F0 => {
            let m = ch(&q(-1));
            let cwx = quotient(f[1].sub(&f[3]), vec![m.clone()])?;
            let cwy = quotient(f[2].sub(&f[3]), vec![m.clone()])?;
            let num = f[0].sub(&f[1]).sub(&f[2]).add(&f[3]);
            let cw = quotient(num, vec![m.clone(), m])?;
            vec![f[3].clone(), cwx, cwy, cw]
        }
        SurfaceKind::Fn(n) => {
            let h = qf(n as i64, 2);
            let (cp, cn) = (c(&h), c(&-h.clone()));
            let m = ch(&q(-1));
            let nh = ch(&-h);
            let cxy = quotient(f[2].sub(&f[3]), vec![nh.clone()])?;
            // ((f_z - f_y)c(nα/2) + (f_x - f_z)c(-nα/2)) / (c(-nα/2) c(-α))
            let num = f[3].sub(&f[2]).mul(&cp).add(&f[1].sub(&f[3]).mul(&cn));
            let cwx = quotient(num, vec![nh.clone(), m.clone()])?;
            // ((f_y - f_z)c(nα/2) + c(-nα/2)(f_w - f_x)) / (c(-nα/2)² c(-α))
            let num = f[2].sub(&f[3]).mul(&cp).add(&cn.mul(&f[0].sub(&f[1])));
            let cw = quotient(num, vec![nh.clone(), nh, m])?;
            vec![f[3].clone(), cwx, cxy, cw]
        }
    };
    let certified_order = coefficients.iter().map(TruncatedSeries::order).min().unwrap_or(law.order());
    Ok(Decomposition { coefficients, certified_order })
}

/// `Σ coeff_i · generator_i`.
pub fn surface_combine(
    law: &FormalGroupLaw,
    kind: SurfaceKind,
    alpha: &Character,
    coefficients: &[TruncatedSeries],
) -> Result<Vec<TruncatedSeries>> {
    let gens = surface_generators(law, kind, alpha);
    if coefficients.len() != gens.len() {
        return Err(Error::InvalidDatum(format!("{kind} has {} generators", gens.len())));
    }
    let order = coefficients.iter().map(TruncatedSeries::order).min().unwrap_or(law.order()).min(law.order());
    let mut out = vec![TruncatedSeries::zero(alpha.rank(), order); kind.num_points()];
    for (cf, g) in coefficients.iter().zip(&gens) {
        for (slot, gv) in out.iter_mut().zip(g) {
            *slot = slot.checked_add(&cf.checked_mul(gv)?)?;
        }
    }
    Ok(out)
}
