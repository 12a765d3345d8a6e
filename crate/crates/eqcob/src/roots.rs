//! Root systems of types A, B, C, F4 and G2 in Bourbaki ε-coordinates,
//! Weyl group orbits, parabolic cosets and the T-stable curves of `G/P_I`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::lazard::{q, qf, QExt, Q};
use crate::torus::Character;

pub type Vector = Vec<Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    F4,
    G2,
}

impl CartanType {
    /// Parses names like `G2`, `C3`, `B3`, `A2`, `F4`.
    pub fn parse(s: &str) -> Result<CartanType> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown Cartan type {s:?}"));
        match s {
            "G2" | "g2" => return Ok(CartanType::G2),
            "F4" | "f4" => return Ok(CartanType::F4),
            _ => {}
        }
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let ty = match head {
            "A" | "a" => CartanType::A(n),
            "B" | "b" => CartanType::B(n),
            "C" | "c" => CartanType::C(n),
            _ => return Err(bad()),
        };
        ty.check()?;
        Ok(ty)
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            CartanType::A(n) => (1..=6).contains(&n),
            CartanType::B(n) => (2..=5).contains(&n),
            CartanType::C(n) => (2..=5).contains(&n),
            CartanType::F4 | CartanType::G2 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("unsupported rank for {self}")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⟨λ, α^∨⟩ = 2(α, λ)/(α, α)`
pub fn pairing(alpha: &[Q], lambda: &[Q]) -> Result<Q> {
    let aa = dot(alpha, alpha);
    if aa.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    Ok(q(2) * dot(alpha, lambda) / aa)
}

/// `s_α(λ) = λ - ⟨λ, α^∨⟩α`
pub fn reflect(alpha: &[Q], lambda: &[Q]) -> Vector {
    let k = pairing(alpha, lambda).expect("nonzero root");
    lambda.iter().zip(alpha).map(|(l, a)| l - &k * a).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[Q], k: &Q) -> Vector {
    a.iter().map(|x| x * k).collect()
}

fn ints(v: &[i64]) -> Vector {
    v.iter().map(|x| q(*x)).collect()
}

/// An element of an orbit `W·λ`, reached by the reduced word `word`
/// (letters are simple-reflection indices, 1-based, read as a product from
/// left to right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub word: Vec<usize>,
    pub vector: Vector,
}

impl OrbitPoint {
    /// `1` for the identity, otherwise e.g. `s2s1`.
    pub fn word_name(&self) -> String {
        if self.word.is_empty() {
            "1".to_string()
        } else {
            self.word.iter().map(|i| format!("s{i}")).collect()
        }
    }
}

/// A T-stable curve of `G/P_I` between fixed points `u` and `v` (indices
/// into the coset list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub u: usize,
    pub v: usize,
    pub root: Vector,
    pub weight: Vector,
    /// coefficients of `σ(s_β)` for `β ∉ I`
    pub degree: BTreeMap<usize, Q>,
}

impl Curve {
    pub fn total_degree(&self) -> Q {
        self.degree.values().sum()
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CartanType,
    simple: Vec<Vector>,
    fundamental: Vec<Vector>,
    positive: Vec<Vector>,
}

impl RootSystem {
    pub fn new(ty: CartanType) -> Result<RootSystem> {
        ty.check()?;
        let (simple, fundamental) = match ty {
            CartanType::A(n) => {
                let d = n + 1;
                let simple = (0..n)
                    .map(|i| {
                        let mut v = vec![q(0); d];
                        v[i] = q(1);
                        v[i + 1] = q(-1);
                        v
                    })
                    .collect();
                let fund = (1..=n)
                    .map(|i| (0..d).map(|k| if k < i { q(1) } else { q(0) } - qf(i as i64, d as i64)).collect())
                    .collect();
                (simple, fund)
            }
            CartanType::B(n) | CartanType::C(n) => {
                let long_last = matches!(ty, CartanType::C(_));
                let mut simple: Vec<Vector> = (0..n - 1)
                    .map(|i| {
                        let mut v = vec![q(0); n];
                        v[i] = q(1);
                        v[i + 1] = q(-1);
                        v
                    })
                    .collect();
                let mut last = vec![q(0); n];
                last[n - 1] = if long_last { q(2) } else { q(1) };
                simple.push(last);
                let mut fund: Vec<Vector> =
                    (1..=n).map(|i| (0..n).map(|k| if k < i { q(1) } else { q(0) }).collect()).collect();
                if !long_last {
                    fund[n - 1] = vec![qf(1, 2); n];
                }
                (simple, fund)
            }
            CartanType::F4 => {
                let h = qf(1, 2);
                let simple = vec![ints(&[0, 1, -1, 0]), ints(&[0, 0, 1, -1]), ints(&[0, 0, 0, 1]), vec![
                    h.clone(),
                    -h.clone(),
                    -h.clone(),
                    -h.clone(),
                ]];
                let fund = vec![
                    ints(&[1, 1, 0, 0]),
                    ints(&[2, 1, 1, 0]),
                    vec![qf(3, 2), h.clone(), h.clone(), h],
                    ints(&[1, 0, 0, 0]),
                ];
                (simple, fund)
            }
            CartanType::G2 => (
                vec![ints(&[1, -1, 0]), ints(&[-2, 1, 1])],
                vec![ints(&[0, -1, 1]), ints(&[-1, -1, 2])],
            ),
        };
        let mut rs = RootSystem { ty, simple, fundamental, positive: Vec::new() };
        rs.positive = rs.generate_positive();
        Ok(rs)
    }

    fn generate_positive(&self) -> Vec<Vector> {
        let mut seen: BTreeSet<Vector> = self.simple.iter().cloned().collect();
        let mut queue: VecDeque<Vector> = self.simple.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for a in &self.simple {
                let s = reflect(a, &r);
                if !seen.contains(&s) {
                    seen.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
        let mut pos: Vec<Vector> = seen.into_iter().filter(|r| self.is_positive(r)).collect();
        pos.sort_by_key(|r| (self.height(r), self.simple_coords(r)));
        pos
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// Length of ε-coordinate vectors.
    pub fn dim(&self) -> usize {
        self.simple[0].len()
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple
    }

    /// `ω_i` for `i = 1..=rank`.
    pub fn fundamental_weight(&self, i: usize) -> Result<&Vector> {
        self.fundamental
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidParameters(format!("{} has no fundamental weight {i}", self.ty)))
    }

    pub fn fundamental_weights(&self) -> &[Vector] {
        &self.fundamental
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive
    }

    /// Coordinates in the basis of simple roots.
    pub fn simple_coords(&self, v: &[Q]) -> Vec<Q> {
        self.simple
            .iter()
            .zip(&self.fundamental)
            .map(|(a, w)| q(2) * dot(v, w) / dot(a, a))
            .collect()
    }

    fn height(&self, v: &[Q]) -> Q {
        self.simple_coords(v).into_iter().sum()
    }

    pub fn is_positive(&self, v: &[Q]) -> bool {
        let c = self.simple_coords(v);
        c.iter().all(|x| !x.is_negative()) && c.iter().any(|x| !x.is_zero())
    }

    pub fn is_root(&self, v: &[Q]) -> bool {
        let neg: Vector = v.iter().map(|x| -x).collect();
        self.positive.iter().any(|r| r.as_slice() == v || *r == neg)
    }

    /// `a_ij = ⟨α_j, α_i^∨⟩`
    pub fn cartan_matrix(&self) -> Vec<Vec<Q>> {
        self.simple
            .iter()
            .map(|ai| self.simple.iter().map(|aj| pairing(ai, aj).expect("nonzero")).collect())
            .collect()
    }

    /// `Σ ω_i`
    pub fn rho(&self) -> Vector {
        let mut r = vec![q(0); self.dim()];
        for w in &self.fundamental {
            r = r.iter().zip(w).map(|(a, b)| a + b).collect();
        }
        r
    }

    /// Breadth-first orbit of `λ`; each point carries a reduced word of a
    /// shortest element moving `λ` there.
    pub fn orbit(&self, lambda: &[Q]) -> Vec<OrbitPoint> {
        let start = OrbitPoint { word: Vec::new(), vector: lambda.to_vec() };
        let mut seen: BTreeSet<Vector> = BTreeSet::new();
        seen.insert(start.vector.clone());
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i].clone();
            for (k, a) in self.simple.iter().enumerate() {
                let v = reflect(a, &cur.vector);
                if !seen.contains(&v) {
                    seen.insert(v.clone());
                    let mut word = vec![k + 1];
                    word.extend(&cur.word);
                    out.push(OrbitPoint { word, vector: v });
                }
            }
            i += 1;
        }
        out
    }

    pub fn weyl_order(&self) -> usize {
        self.orbit(&self.rho()).len()
    }

    /// Applies the word's reflections, rightmost letter first.
    pub fn act(&self, word: &[usize], v: &[Q]) -> Vector {
        let mut r = v.to_vec();
        for &k in word.iter().rev() {
            r = reflect(&self.simple[k - 1], &r);
        }
        r
    }

    /// Applies the inverse of the word.
    pub fn act_inverse(&self, word: &[usize], v: &[Q]) -> Vector {
        let mut r = v.to_vec();
        for &k in word {
            r = reflect(&self.simple[k - 1], &r);
        }
        r
    }

    fn check_subset(&self, parabolic: &BTreeSet<usize>) -> Result<()> {
        if let Some(i) = parabolic.iter().find(|i| **i == 0 || **i > self.rank()) {
            return Err(Error::InvalidParameters(format!("{} has no simple root a{i}", self.ty)));
        }
        Ok(())
    }

    /// A dominant weight whose stabilizer is exactly `W_I`.
    pub fn parabolic_weight(&self, parabolic: &BTreeSet<usize>) -> Result<Vector> {
        self.check_subset(parabolic)?;
        let mut r = vec![q(0); self.dim()];
        for (i, w) in self.fundamental.iter().enumerate() {
            if !parabolic.contains(&(i + 1)) {
                r = r.iter().zip(w).map(|(a, b)| a + b).collect();
            }
        }
        Ok(r)
    }

    /// Minimal-length representatives of `W/W_I`, as the orbit of the
    /// parabolic weight.
    pub fn cosets(&self, parabolic: &BTreeSet<usize>) -> Result<Vec<OrbitPoint>> {
        Ok(self.orbit(&self.parabolic_weight(parabolic)?))
    }

    /// `d(α) = Σ_{β ∉ I} n_{αβ} (β,β)/(α,α) σ(s_β)` for a positive root `α`
    /// outside `R⁺_{P_I}`.
    pub fn curve_degree(&self, alpha: &[Q], parabolic: &BTreeSet<usize>) -> Result<BTreeMap<usize, Q>> {
        self.check_subset(parabolic)?;
        if !self.is_positive(alpha) || !self.is_root(alpha) {
            return Err(Error::InvalidParameters("curve degree needs a positive root".into()));
        }
        let n = self.simple_coords(alpha);
        let aa = dot(alpha, alpha);
        let mut d = BTreeMap::new();
        for (i, b) in self.simple.iter().enumerate() {
            if !parabolic.contains(&(i + 1)) {
                d.insert(i + 1, &n[i] * dot(b, b) / &aa);
            }
        }
        if d.values().all(|x| x.is_zero()) {
            return Err(Error::InvalidParameters("root lies in the Levi of P_I".into()));
        }
        Ok(d)
    }

    /// All T-stable curves of `G/P_I`: pairs `{μ, s_γ μ}` of coset weights
    /// with `⟨μ, γ^∨⟩ ≠ 0`, weight `μ_u - μ_v` and degree `d(u⁻¹γ)`.
    pub fn curves(&self, parabolic: &BTreeSet<usize>) -> Result<(Vec<OrbitPoint>, Vec<Curve>)> {
        let pts = self.cosets(parabolic)?;
        let index: BTreeMap<&Vector, usize> = pts.iter().enumerate().map(|(i, p)| (&p.vector, i)).collect();
        let mut curves = Vec::new();
        for (u, p) in pts.iter().enumerate() {
            for g in &self.positive {
                let k = pairing(g, &p.vector)?;
                if k.is_zero() {
                    continue;
                }
                let target = sub(&p.vector, &scale(g, &k));
                let v = index[&target];
                if v < u {
                    continue;
                }
                let mut delta = self.act_inverse(&p.word, g);
                if !self.is_positive(&delta) {
                    delta = delta.iter().map(|x| -x).collect();
                }
                curves.push(Curve {
                    u,
                    v,
                    root: g.clone(),
                    weight: scale(g, &k),
                    degree: self.curve_degree(&delta, parabolic)?,
                });
            }
        }
        curves.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)));
        Ok((pts, curves))
    }

    /// Torus-lattice coordinates of an ε-vector: the ε-coordinates for B, C
    /// and F4; for A and G2 (which live in the sum-zero hyperplane) the
    /// coefficients on `ε_i - ε_last`.
    pub fn torus_character(&self, v: &[Q]) -> Character {
        match self.ty {
            CartanType::A(_) | CartanType::G2 => Character::new(v[..v.len() - 1].to_vec()),
            _ => Character::new(v.to_vec()),
        }
    }

    /// The covector on torus coordinates that agrees with pairing against
    /// `λ` in ε-coordinates.
    pub fn torus_covector(&self, lambda: &[Q]) -> Vec<Q> {
        match self.ty {
            CartanType::A(_) | CartanType::G2 => {
                let last = lambda.last().expect("nonempty").clone();
                lambda[..lambda.len() - 1].iter().map(|x| x - &last).collect()
            }
            _ => lambda.to_vec(),
        }
    }

    pub fn torus_rank(&self) -> usize {
        match self.ty {
            CartanType::A(_) | CartanType::G2 => self.dim() - 1,
            _ => self.dim(),
        }
    }
}

/// Parses a parabolic subset like `a1,a3` (or `1,3`); empty for the Borel.
pub fn parse_parabolic(s: &str) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let digits = part.strip_prefix('a').or_else(|| part.strip_prefix('α')).unwrap_or(part);
        let i: usize = digits.parse().map_err(|_| Error::Parse(format!("bad simple root label {part:?}")))?;
        out.insert(i);
    }
    Ok(out)
}

pub fn fmt_vector(v: &[Q]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn counts() {
        let cases = [
            (CartanType::A(2), 3, 6),
            (CartanType::B(3), 9, 48),
            (CartanType::C(2), 4, 8),
            (CartanType::C(3), 9, 48),
            (CartanType::G2, 6, 12),
            (CartanType::F4, 24, 1152),
        ];
        for (ty, npos, w) in cases {
            let rs = RootSystem::new(ty).unwrap();
            assert_eq!(rs.positive_roots().len(), npos, "{ty}");
            assert_eq!(rs.weyl_order(), w, "{ty}");
        }
    }

    #[test]
    fn duality_and_cartan() {
        for ty in [CartanType::A(3), CartanType::B(4), CartanType::C(4), CartanType::F4, CartanType::G2] {
            let rs = RootSystem::new(ty).unwrap();
            for (i, a) in rs.simple_roots().iter().enumerate() {
                for (j, w) in rs.fundamental_weights().iter().enumerate() {
                    assert_eq!(pairing(a, w).unwrap(), q((i == j) as i64), "{ty}");
                }
            }
        }
        let g2 = RootSystem::new(CartanType::G2).unwrap().cartan_matrix();
        assert_eq!(g2, vec![vec![q(2), q(-3)], vec![q(-1), q(2)]]);
        let b3 = RootSystem::new(CartanType::B(3)).unwrap().cartan_matrix();
        assert_eq!(b3[2], vec![q(0), q(-2), q(2)]);
        let f4 = RootSystem::new(CartanType::F4).unwrap().cartan_matrix();
        let expected = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]];
        for (row, e) in f4.iter().zip(expected) {
            assert_eq!(*row, ints(&e));
        }
    }

    #[test]
    fn pairings() {
        let c3 = RootSystem::new(CartanType::C(3)).unwrap();
        let a = ints(&[0, 4, 0]).iter().map(|x| x / q(2)).collect::<Vec<_>>();
        assert_eq!(pairing(&a, c3.fundamental_weight(2).unwrap()).unwrap(), q(1));
        let g2 = RootSystem::new(CartanType::G2).unwrap();
        assert_eq!(pairing(&ints(&[-1, 0, 1]), g2.fundamental_weight(2).unwrap()).unwrap(), q(3));
        assert!(pairing(&ints(&[0, 0, 0]), &ints(&[1, 0, 0])).is_err());
    }

    #[test]
    fn g2_curves() {
        let rs = RootSystem::new(CartanType::G2).unwrap();
        let (pts, curves) = rs.curves(&set(&[1])).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(curves.len(), 15);
        let mut degs: BTreeMap<Q, usize> = BTreeMap::new();
        for c in &curves {
            *degs.entry(c.total_degree()).or_default() += 1;
        }
        assert_eq!(degs, [(q(1), 6), (q(2), 3), (q(3), 6)].into_iter().collect());
    }

    #[test]
    fn coset_counts() {
        let c2 = RootSystem::new(CartanType::C(2)).unwrap();
        assert_eq!(c2.cosets(&set(&[1])).unwrap().len(), 4);
        assert_eq!(c2.cosets(&set(&[1, 2])).unwrap().len(), 1);
        let a1 = RootSystem::new(CartanType::A(1)).unwrap();
        let (pts, curves) = a1.curves(&set(&[])).unwrap();
        assert_eq!((pts.len(), curves.len()), (2, 1));
    }

    #[test]
    fn words_reach_their_points() {
        let rs = RootSystem::new(CartanType::B(3)).unwrap();
        let rho = rs.rho();
        for p in rs.orbit(&rho) {
            assert_eq!(rs.act(&p.word, &rho), p.vector);
            assert_eq!(rs.act_inverse(&p.word, &p.vector), rho);
        }
    }

    #[test]
    fn parse_labels() {
        assert_eq!(parse_parabolic("a1, a3").unwrap(), set(&[1, 3]));
        assert_eq!(parse_parabolic("").unwrap(), set(&[]));
        assert!(parse_parabolic("b1").is_err());
        assert_eq!(CartanType::parse("C3").unwrap(), CartanType::C(3));
        assert!(CartanType::parse("D4").is_err());
        assert!(CartanType::parse("C9").is_err());
    }
}
