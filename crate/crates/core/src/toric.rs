//! Monomial ideals of `C{x, y}` and their toric resolutions.
//!
//! Everything about an m-primary monomial ideal `I` is read off lattice
//! data: the Newton polygon gives `m_v(I)` at a ray, the monomial module
//! `Ω²_I` of 2-forms gives `ν_v(I)`, and the minimal regular fan refining
//! both Newton polygons is a good resolution factoring through the blow-up
//! of `I` and the principalization of `Ω²_I`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dualgraph::{DecoratedTriple, DualGraph, GraphError, VertexId};
use crate::exactalg::{rat, Rat};
use crate::ratecalc::{RateError, RateProfile};

/// Exponent pair `(a, b)` of the monomial `x^a y^b`.
pub type Exponent = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("ideal is not m-primary: {0}")]
    NotPrimary(String),
    #[error("cannot parse ideal: {0}")]
    Parse(String),
    #[error("ray {0} is a boundary ray")]
    BoundaryRay(Ray),
    #[error("invalid ray ({0}, {1})")]
    InvalidRay(i64, i64),
    #[error("fan chain is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rate(#[from] RateError),
}

fn divides(a: Exponent, b: Exponent) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

/// Minimal elements under divisibility, sorted by decreasing `x`-exponent.
pub fn minimalize(points: impl IntoIterator<Item = Exponent>) -> Vec<Exponent> {
    let set: BTreeSet<Exponent> = points.into_iter().collect();
    // Ascending x; keep a point iff its y is below every y seen so far.
    let mut out: Vec<Exponent> = Vec::new();
    let mut best_y = u32::MAX;
    for &(a, b) in &set {
        if b < best_y {
            out.push((a, b));
            best_y = b;
        }
    }
    out.reverse();
    out
}

fn monomial_text(e: Exponent) -> String {
    let var = |name: &str, k: u32| match k {
        0 => None,
        1 => Some(name.to_string()),
        k => Some(format!("{name}^{k}")),
    };
    let parts: Vec<String> = [var("x", e.0), var("y", e.1)]
        .into_iter()
        .flatten()
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// An m-primary monomial ideal, stored by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIdeal {
    gens: Vec<Exponent>,
}

#[derive(Deserialize)]
struct IdealJson {
    gens: Vec<[u32; 2]>,
}

impl MonomialIdeal {
    pub fn new(gens: impl IntoIterator<Item = Exponent>) -> Result<Self, ToricError> {
        let gens = minimalize(gens);
        if gens.is_empty() {
            return Err(ToricError::NotPrimary("no generators".into()));
        }
        if gens.contains(&(0, 0)) {
            return Err(ToricError::NotPrimary("unit ideal".into()));
        }
        if !gens.iter().any(|&(_, b)| b == 0) {
            return Err(ToricError::NotPrimary("no pure power of x".into()));
        }
        if !gens.iter().any(|&(a, _)| a == 0) {
            return Err(ToricError::NotPrimary("no pure power of y".into()));
        }
        Ok(MonomialIdeal { gens })
    }

    /// `I_n = (x^k y^(n-k), 0 <= k <= n)`, the n-th power of the maximal ideal.
    pub fn power_of_maximal(n: u32) -> Self {
        assert!(n >= 1, "power_of_maximal needs n >= 1");
        MonomialIdeal::new((0..=n).map(|k| (k, n - k))).expect("I_n is m-primary")
    }

    /// Parses `"x^2, x*y^3, y^4"` or `{"gens": [[2,0],[1,3],[0,4]]}`.
    pub fn parse(s: &str) -> Result<Self, ToricError> {
        let s = s.trim();
        if s.starts_with('{') {
            let doc: IdealJson =
                serde_json::from_str(s).map_err(|e| ToricError::Parse(e.to_string()))?;
            return MonomialIdeal::new(doc.gens.into_iter().map(|[a, b]| (a, b)));
        }
        let gens = s
            .split(',')
            .map(parse_monomial)
            .collect::<Result<Vec<_>, _>>()?;
        MonomialIdeal::new(gens)
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn contains(&self, e: Exponent) -> bool {
        self.gens.iter().any(|&g| divides(g, e))
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|&g| other.contains(g))
    }

    /// Exponent of the pure power of `x` in `I`.
    pub fn x_power(&self) -> u32 {
        self.gens.iter().find(|g| g.1 == 0).map(|g| g.0).unwrap()
    }

    /// Exponent of the pure power of `y` in `I`.
    pub fn y_power(&self) -> u32 {
        self.gens.iter().find(|g| g.0 == 0).map(|g| g.1).unwrap()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "gens": self.gens.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>() })
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|&e| monomial_text(e)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn parse_monomial(text: &str) -> Result<Exponent, ToricError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ToricError::Parse("empty monomial".into()));
    }
    if t == "1" {
        return Ok((0, 0));
    }
    let mut exp = (0u32, 0u32);
    let mut chars = t.chars().peekable();
    while let Some(c) = chars.next() {
        let slot = match c {
            ' ' | '*' => continue,
            'x' => &mut exp.0,
            'y' => &mut exp.1,
            other => {
                return Err(ToricError::Parse(format!(
                    "unexpected '{other}' in monomial '{t}'"
                )))
            }
        };
        let mut power = 1u32;
        if chars.peek() == Some(&'^') {
            chars.next();
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            power = digits
                .parse()
                .map_err(|_| ToricError::Parse(format!("bad exponent in '{t}'")))?;
        }
        *slot = slot
            .checked_add(power)
            .ok_or_else(|| ToricError::Parse(format!("exponent overflow in '{t}'")))?;
    }
    Ok(exp)
}

/// Primitive weight vector `(p, q)`; the monomial valuation sends
/// `x^a y^b` to `pa + qb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ray {
    pub p: i64,
    pub q: i64,
}

impl Ray {
    pub const X_AXIS: Ray = Ray { p: 1, q: 0 };
    pub const Y_AXIS: Ray = Ray { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Result<Self, ToricError> {
        if p < 0 || q < 0 || (p == 0 && q == 0) || p.gcd(&q) != 1 {
            return Err(ToricError::InvalidRay(p, q));
        }
        Ok(Ray { p, q })
    }

    pub fn is_interior(&self) -> bool {
        self.p > 0 && self.q > 0
    }

    /// `p·a + q·b`.
    pub fn weight(&self, e: Exponent) -> i64 {
        self.p * i64::from(e.0) + self.q * i64::from(e.1)
    }

    /// Order along the divisor of `x^e y^f dx∧dy`: `p(e+1) + q(f+1) - 1`.
    pub fn two_form_order(&self, e: Exponent) -> i64 {
        self.p * (i64::from(e.0) + 1) + self.q * (i64::from(e.1) + 1) - 1
    }

    /// `p·q' - q·p'`; positive when `other` comes after `self` going from
    /// `(1,0)` to `(0,1)`.
    pub fn det(&self, other: &Ray) -> i64 {
        self.p * other.q - self.q * other.p
    }

    /// Primitive sum `self + other` (the mediant).
    pub fn mediant(&self, other: &Ray) -> Ray {
        let (p, q) = (self.p + other.p, self.q + other.q);
        let g = p.gcd(&q);
        Ray { p: p / g, q: q / g }
    }

    /// Compares by position between `(1,0)` and `(0,1)`.
    pub fn angle_cmp(&self, other: &Ray) -> Ordering {
        0.cmp(&self.det(other))
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Unimodular sequence of rays from `(1,0)` to `(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanChain(Vec<Ray>);

impl FanChain {
    pub fn new(rays: Vec<Ray>) -> Result<Self, ToricError> {
        if rays.first() != Some(&Ray::X_AXIS) || rays.last() != Some(&Ray::Y_AXIS) {
            return Err(ToricError::NotUnimodular(
                "chain must run from (1,0) to (0,1)".into(),
            ));
        }
        for w in rays.windows(2) {
            if w[0].det(&w[1]) != 1 {
                return Err(ToricError::NotUnimodular(format!(
                    "det({}, {}) = {}",
                    w[0],
                    w[1],
                    w[0].det(&w[1])
                )));
            }
        }
        Ok(FanChain(rays))
    }

    pub fn rays(&self) -> &[Ray] {
        &self.0
    }

    pub fn interior(&self) -> &[Ray] {
        &self.0[1..self.0.len() - 1]
    }

    /// `c_i` with `u_(i-1) + u_(i+1) = c_i u_i`, for each interior ray;
    /// `E_i^2 = -c_i`.
    pub fn self_intersection_numbers(&self) -> Vec<i64> {
        self.0
            .windows(3)
            .map(|w| {
                let (a, b, c) = (w[0], w[1], w[2]);
                if b.p != 0 {
                    (a.p + c.p) / b.p
                } else {
                    (a.q + c.q) / b.q
                }
            })
            .collect()
    }

    /// The dual graph: a genus-zero chain, vertex `i` for interior ray `i`.
    pub fn dual_graph(&self) -> Result<DualGraph, GraphError> {
        let c = self.self_intersection_numbers();
        let self_ints: Vec<i64> = c.into_iter().map(|ci| -ci).collect();
        DualGraph::chain(&self_ints)
    }
}

impl fmt::Display for FanChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Ray::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Compact part of a Newton polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Vertices in decreasing `x`-exponent order.
    pub vertices: Vec<Exponent>,
    /// Primitive inner normal of each compact face, in the same order.
    pub normals: Vec<Ray>,
}

/// Lower-left convex hull of `points + R²_{≥0}`.
pub fn newton_polygon_of(points: &[Exponent]) -> NewtonPolygon {
    let mut stair = minimalize(points.iter().copied());
    // Ascending x, descending y.
    stair.reverse();
    let cross = |o: Exponent, a: Exponent, b: Exponent| -> i64 {
        let (ox, oy) = (i64::from(o.0), i64::from(o.1));
        (i64::from(a.0) - ox) * (i64::from(b.1) - oy)
            - (i64::from(a.1) - oy) * (i64::from(b.0) - ox)
    };
    let mut hull: Vec<Exponent> = Vec::new();
    for &pt in &stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    hull.reverse();
    let normals = hull
        .windows(2)
        .map(|w| {
            let dx = i64::from(w[0].0 - w[1].0);
            let dy = i64::from(w[1].1 - w[0].1);
            let g = dx.gcd(&dy);
            Ray {
                p: dy / g,
                q: dx / g,
            }
        })
        .collect();
    NewtonPolygon {
        vertices: hull,
        normals,
    }
}

pub fn newton_polygon(i: &MonomialIdeal) -> NewtonPolygon {
    newton_polygon_of(i.gens())
}

/// Minimum of `weight` over `points`.
fn support(points: &[Exponent], r: &Ray) -> i64 {
    points
        .iter()
        .map(|&e| r.weight(e))
        .min()
        .expect("non-empty point set")
}

/// Monomials on or above the Newton polygon, minimally generated.
pub fn integral_closure(i: &MonomialIdeal) -> MonomialIdeal {
    let np = newton_polygon(i);
    let bounds: Vec<(Ray, i64)> = np
        .normals
        .iter()
        .map(|n| (*n, support(&np.vertices, n)))
        .collect();
    let pts = (0..=i.x_power()).flat_map(|a| (0..=i.y_power()).map(move |b| (a, b)));
    let inside = pts.filter(|&e| bounds.iter().all(|(n, m)| n.weight(e) >= *m));
    MonomialIdeal::new(inside.collect::<Vec<_>>()).expect("closure of an m-primary ideal")
}

/// Monomial submodule of `Ω²` generated by `x^e y^f dx∧dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialModule2 {
    gens: Vec<Exponent>,
}

impl MonomialModule2 {
    pub fn new(gens: impl IntoIterator<Item = Exponent>) -> Self {
        MonomialModule2 {
            gens: minimalize(gens),
        }
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn contains(&self, e: Exponent) -> bool {
        self.gens.iter().any(|&g| divides(g, e))
    }

    pub fn contains_module(&self, other: &MonomialModule2) -> bool {
        other.gens.iter().all(|&g| self.contains(g))
    }
}

/// Monomial generators of `d(x^a y^b) ∧ d(x^c y^d)`, or `None` when the
/// wedge vanishes.
pub fn wedge_monomial(f: Exponent, g: Exponent) -> Option<Exponent> {
    let det = i64::from(f.0) * i64::from(g.1) - i64::from(f.1) * i64::from(g.0);
    (det != 0).then(|| (f.0 + g.0 - 1, f.1 + g.1 - 1))
}

/// `Ω²_I`, generated by `dg ∧ dh` for `g, h ∈ I`.
///
/// Over a monomial generating set, `g = Σ g_i f_i` and `h = Σ h_j f_j`
/// expand into `g_i h_j df_i∧df_j`, `g_i f_j df_i∧dh_j`, `f_i h_j dg_i∧df_j`
/// and `f_i f_j dg_i∧dh_j`. The last family is dominated; the first three
/// contribute `df_i∧df_j`, `f_j ∂_y f_i` and `f_j ∂_x f_i`.
pub fn omega2_module(i: &MonomialIdeal) -> MonomialModule2 {
    let mut out = Vec::new();
    for &(a, b) in i.gens() {
        for &(c, d) in i.gens() {
            if let Some(w) = wedge_monomial((a, b), (c, d)) {
                out.push(w);
            }
            if b > 0 {
                out.push((a + c, b + d - 1));
            }
            if a > 0 {
                out.push((a + c - 1, b + d));
            }
        }
    }
    MonomialModule2::new(out)
}

/// Whether the pairwise wedges `df_i ∧ df_j` of `gens` generate `Ω²_I`.
pub fn is_precomplete(gens: &[Exponent]) -> Result<bool, ToricError> {
    let ideal = MonomialIdeal::new(gens.iter().copied())?;
    let wedges = MonomialModule2::new(
        gens.iter()
            .flat_map(|&f| gens.iter().filter_map(move |&g| wedge_monomial(f, g))),
    );
    Ok(wedges.contains_module(&omega2_module(&ideal)))
}

/// Minimal generators together with `x·g` and `y·g` for each of them.
/// Products are kept even when redundant; the enlarged system is complete.
pub fn complete_system(i: &MonomialIdeal) -> Vec<Exponent> {
    let mut out: Vec<Exponent> = i.gens().to_vec();
    for &(a, b) in i.gens() {
        for e in [(a + 1, b), (a, b + 1)] {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayInvariants {
    pub ray: Ray,
    /// `m_v(I)`.
    pub m: i64,
    /// `ν_v(I)`.
    pub nu: i64,
    /// `q_v^I = (ν - m + 1) / m`.
    pub q: Rat,
}

/// `m`, `ν` and the inner rate of `I` along the divisor of an interior ray.
pub fn invariants_at_ray(i: &MonomialIdeal, r: Ray) -> Result<RayInvariants, ToricError> {
    if !r.is_interior() {
        return Err(ToricError::BoundaryRay(r));
    }
    let m = support(i.gens(), &r);
    let nu = omega2_module(i)
        .gens()
        .iter()
        .map(|&e| r.two_form_order(e))
        .min()
        .expect("Ω² of an m-primary ideal is non-zero");
    Ok(RayInvariants {
        ray: r,
        m,
        nu,
        q: rat(nu - m + 1, m),
    })
}

/// Inserts the Hirzebruch-Jung rays between `u` and `v` (exclusive).
fn hj_fill(u: Ray, v: Ray, out: &mut Vec<Ray>) {
    let d = u.det(&v);
    debug_assert!(d >= 1);
    if d == 1 {
        return;
    }
    let k = (1..d)
        .find(|k| (k * u.p + v.p) % d == 0 && (k * u.q + v.q) % d == 0)
        .expect("a primitive cone has a unique first Hirzebruch-Jung ray");
    let w = Ray {
        p: (k * u.p + v.p) / d,
        q: (k * u.q + v.q) / d,
    };
    out.push(w);
    hj_fill(w, v, out);
}

/// Minimal unimodular chain from `(1,0)` to `(0,1)` through `required`.
pub fn resolution_chain(required: &[Ray]) -> FanChain {
    let mut req: Vec<Ray> = required.iter().copied().filter(Ray::is_interior).collect();
    req.sort_by(Ray::angle_cmp);
    req.dedup();
    let mut skeleton = vec![Ray::X_AXIS];
    skeleton.extend(req);
    skeleton.push(Ray::Y_AXIS);
    let mut rays = vec![Ray::X_AXIS];
    for w in skeleton.windows(2) {
        hj_fill(w[0], w[1], &mut rays);
        rays.push(w[1]);
    }
    FanChain::new(rays).expect("Hirzebruch-Jung completion is unimodular")
}

/// Compact-face normals of the Newton polygons of `I` and of `Ω²_I`.
pub fn required_rays(i: &MonomialIdeal) -> Vec<Ray> {
    let mut rays = newton_polygon(i).normals;
    rays.extend(newton_polygon_of(omega2_module(i).gens()).normals);
    rays.sort_by(Ray::angle_cmp);
    rays.dedup();
    rays
}

/// The minimal toric good resolution factoring through the blow-up of `I`
/// and the principalization of `Ω²_I`.
pub fn minimal_resolution_chain(i: &MonomialIdeal) -> FanChain {
    resolution_chain(&required_rays(i))
}

/// Everything the engine derives from one ideal.
#[derive(Debug, Clone)]
pub struct IdealResolution {
    pub ideal: MonomialIdeal,
    pub chain: FanChain,
    /// One row per vertex, in vertex order.
    pub rows: Vec<RayInvariants>,
    pub triple: DecoratedTriple,
    pub profile: RateProfile,
}

impl IdealResolution {
    pub fn ray_of(&self, v: VertexId) -> Option<Ray> {
        self.rows.get(v.0 as usize).map(|r| r.ray)
    }

    pub fn vertex_of(&self, r: Ray) -> Option<VertexId> {
        self.rows
            .iter()
            .position(|row| row.ray == r)
            .map(|i| VertexId(i as u32))
    }
}

fn nonneg_u64(v: &BigInt, what: &str, ray: Ray) -> Result<u64, ToricError> {
    if v.is_negative() {
        return Err(ToricError::InconsistentInvariants(format!(
            "{what} = {v} at ray {ray}"
        )));
    }
    u64::try_from(v).map_err(|_| {
        ToricError::InconsistentInvariants(format!("{what} = {v} overflows at ray {ray}"))
    })
}

/// Resolution graph, `L = -M·m` and `P = K + L - M·a` of the germ attached
/// to `I`, with `a_v = ν_v - m_v + 1`.
pub fn triple_of_ideal(i: &MonomialIdeal) -> Result<IdealResolution, ToricError> {
    let chain = minimal_resolution_chain(i);
    let graph = chain.dual_graph()?;
    let rows = chain
        .interior()
        .iter()
        .map(|&r| invariants_at_ray(i, r))
        .collect::<Result<Vec<_>, _>>()?;
    let m: Vec<BigInt> = rows.iter().map(|r| BigInt::from(r.m)).collect();
    let a: Vec<BigInt> = rows.iter().map(|r| BigInt::from(r.nu - r.m + 1)).collect();
    let mat = graph.intersection_matrix();
    let mm = mat.mul_int(&m).map_err(RateError::from)?;
    let ma = mat.mul_int(&a).map_err(RateError::from)?;
    let mut l = Vec::with_capacity(rows.len());
    let mut p = Vec::with_capacity(rows.len());
    for (idx, row) in rows.iter().enumerate() {
        let id = VertexId(idx as u32);
        let lv = -&mm[idx];
        let k = BigInt::from(graph.valency(id) as i64 - 2);
        let pv = k + &lv - &ma[idx];
        l.push(nonneg_u64(&lv, "L", row.ray)?);
        p.push(nonneg_u64(&pv, "P", row.ray)?);
    }
    let q = rows.iter().map(|r| r.q.clone()).collect();
    let profile = RateProfile::new(graph.clone(), m, q)?;
    let triple = DecoratedTriple::new(graph, l, p)?;
    Ok(IdealResolution {
        ideal: i.clone(),
        chain,
        rows,
        triple,
        profile,
    })
}

/// The named ideals used throughout the tests: `(x^2, y^2)`, its closure,
/// its precomplete extension, `(x^3, xy, y^2)` and `I_1 .. I_6`.
pub fn named_ideals() -> Vec<MonomialIdeal> {
    let mut out: Vec<MonomialIdeal> = [
        "x^2, y^2",
        "x^2, x*y, y^2",
        "x^2, y^2, x*y^2, x^2*y",
        "x^3, x*y, y^2",
    ]
    .iter()
    .map(|s| MonomialIdeal::parse(s).expect("fixed ideal"))
    .collect();
    out.extend((1..=6).map(MonomialIdeal::power_of_maximal));
    out
}

/// A pseudo-random m-primary monomial ideal with exponents at most
/// `max_exp`, reproducible from `seed`.
pub fn random_ideal(seed: u64, max_exp: u32) -> MonomialIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = max_exp.max(1);
    let a = rng.gen_range(1..=max);
    let b = rng.gen_range(1..=max);
    let extra = rng.gen_range(0..=3);
    let mut gens = vec![(a, 0), (0, b)];
    for _ in 0..extra {
        gens.push((rng.gen_range(0..=a), rng.gen_range(0..=b)));
    }
    // (0,0) would be the unit ideal.
    gens.retain(|&e| e != (0, 0));
    MonomialIdeal::new(gens).expect("pure powers present")
}

/// `count` distinct pseudo-random ideals, deterministic in `seed`.
pub fn random_corpus(count: usize, max_exp: u32, seed: u64) -> Vec<MonomialIdeal> {
    let mut out: Vec<MonomialIdeal> = Vec::new();
    let mut s = seed;
    while out.len() < count {
        let i = random_ideal(s, max_exp);
        s = s.wrapping_add(1);
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat_int;

    fn ideal(s: &str) -> MonomialIdeal {
        MonomialIdeal::parse(s).unwrap()
    }

    fn ray(p: i64, q: i64) -> Ray {
        Ray::new(p, q).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(ideal("x^2, x*y^3, y^4").gens(), &[(2, 0), (1, 3), (0, 4)]);
        assert_eq!(ideal("xy, x^3,y^2").gens(), &[(3, 0), (1, 1), (0, 2)]);
        assert_eq!(ideal("x y^2, x^2, y^3").gens(), &[(2, 0), (1, 2), (0, 3)]);
        assert_eq!(
            ideal(r#"{"gens": [[2,0],[1,3],[0,4]]}"#),
            ideal("x^2, x*y^3, y^4")
        );
        // Non-minimal input is minimalized.
        assert_eq!(ideal("x, y, x^2, x*y").gens(), &[(1, 0), (0, 1)]);
        assert!(matches!(
            MonomialIdeal::parse("x^2"),
            Err(ToricError::NotPrimary(_))
        ));
        assert!(matches!(
            MonomialIdeal::parse("x, 1"),
            Err(ToricError::NotPrimary(_))
        ));
        assert!(matches!(
            MonomialIdeal::parse("x^2, z"),
            Err(ToricError::Parse(_))
        ));
        assert!(matches!(
            MonomialIdeal::parse("x^, y"),
            Err(ToricError::Parse(_))
        ));
        assert!(matches!(
            MonomialIdeal::parse("x,,y"),
            Err(ToricError::Parse(_))
        ));
        assert_eq!(ideal("x^2,x*y,y^2").to_string(), "(x^2, x*y, y^2)");
    }

    #[test]
    fn rays() {
        assert!(Ray::new(2, 4).is_err());
        assert!(Ray::new(-1, 2).is_err());
        assert!(Ray::new(0, 0).is_err());
        assert_eq!(ray(2, 1).mediant(&ray(1, 1)), ray(3, 2));
        assert_eq!(ray(1, 1).mediant(&ray(1, 1)), ray(1, 1));
        assert_eq!(ray(2, 1).det(&ray(1, 1)), 1);
        assert_eq!(ray(2, 1).angle_cmp(&ray(1, 2)), Ordering::Less);
    }

    #[test]
    fn newton_polygon_examples() {
        let np = newton_polygon(&ideal("x^2, y^2"));
        assert_eq!(np.vertices, vec![(2, 0), (0, 2)]);
        assert_eq!(np.normals, vec![ray(1, 1)]);

        for n in 1..6 {
            let np = newton_polygon(&MonomialIdeal::power_of_maximal(n));
            assert_eq!(np.vertices, vec![(n, 0), (0, n)]);
            assert_eq!(np.normals, vec![ray(1, 1)]);
        }

        let np = newton_polygon(&ideal("x^3, x*y, y^2"));
        assert_eq!(np.vertices, vec![(3, 0), (1, 1), (0, 2)]);
        assert_eq!(np.normals, vec![ray(1, 2), ray(1, 1)]);
    }

    #[test]
    fn newton_polygon_skips_points_above_the_hull() {
        // (2,2) lies above the segment (4,0)-(0,4).
        let np = newton_polygon(&ideal("x^4, x^2*y^2, y^4"));
        assert_eq!(np.vertices, vec![(4, 0), (0, 4)]);
        // (1,1) is below it and becomes a vertex.
        let np = newton_polygon(&ideal("x^4, x*y, y^4"));
        assert_eq!(np.vertices, vec![(4, 0), (1, 1), (0, 4)]);
        assert_eq!(np.normals, vec![ray(1, 3), ray(3, 1)]);
    }

    #[test]
    fn integral_closure_examples() {
        assert_eq!(integral_closure(&ideal("x^2, y^2")), ideal("x^2, x*y, y^2"));
        assert_eq!(integral_closure(&ideal("x, y")), ideal("x, y"));
        for n in 1..7 {
            let i = MonomialIdeal::power_of_maximal(n);
            assert_eq!(integral_closure(&i), i);
        }
        assert_eq!(
            integral_closure(&ideal("x^4, y^2")),
            ideal("x^4, x^2*y, y^2")
        );
    }

    #[test]
    fn omega2_examples() {
        assert_eq!(
            omega2_module(&ideal("x^2, y^2")).gens(),
            &[(3, 0), (1, 1), (0, 3)]
        );
        assert_eq!(omega2_module(&ideal("x, y")).gens(), &[(0, 0)]);
        assert_eq!(
            omega2_module(&ideal("x^2, x*y, y^2")).gens(),
            &[(2, 0), (1, 1), (0, 2)]
        );
    }

    #[test]
    fn precompleteness_examples() {
        assert!(!is_precomplete(&[(2, 0), (0, 2)]).unwrap());
        assert!(is_precomplete(&[(2, 0), (0, 2), (1, 2), (2, 1)]).unwrap());
        assert!(is_precomplete(&[(1, 0), (0, 1)]).unwrap());
        assert!(matches!(
            is_precomplete(&[(2, 0), (1, 1)]),
            Err(ToricError::NotPrimary(_))
        ));
    }

    #[test]
    fn complete_system_examples() {
        let sys = complete_system(&ideal("x^2, y^2"));
        assert_eq!(sys, vec![(2, 0), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]);

        let sys = complete_system(&ideal("x, y"));
        assert_eq!(sys, vec![(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);

        // Contains the enlarged system (y^(n+1), I_n generators, x^(n+1)).
        for n in 1..6 {
            let sys = complete_system(&MonomialIdeal::power_of_maximal(n));
            assert!(sys.contains(&(n + 1, 0)) && sys.contains(&(0, n + 1)));
            assert!((0..=n).all(|k| sys.contains(&(k, n - k))));
            assert_eq!(sys.len() as u32, (n + 1) + (n + 2));
        }
    }

    #[test]
    fn complete_systems_are_precomplete() {
        for s in 0..30 {
            let i = random_ideal(s, 6);
            assert!(is_precomplete(&complete_system(&i)).unwrap(), "{i}");
        }
    }

    #[test]
    fn invariants_examples() {
        let r = invariants_at_ray(&ideal("x^2, y^2"), ray(2, 1)).unwrap();
        assert_eq!((r.m, r.nu, r.q), (2, 5, rat_int(2)));
        let r = invariants_at_ray(&ideal("x^2, x*y, y^2"), ray(2, 1)).unwrap();
        assert_eq!((r.m, r.nu, r.q), (2, 4, rat(3, 2)));
        let r = invariants_at_ray(&ideal("x^2, y^2"), ray(1, 1)).unwrap();
        assert_eq!((r.m, r.nu, r.q), (2, 3, rat_int(1)));
        assert_eq!(
            invariants_at_ray(&ideal("x, y"), Ray::X_AXIS),
            Err(ToricError::BoundaryRay(Ray::X_AXIS))
        );
    }

    #[test]
    fn family_rates_at_21() {
        for n in 1..10i64 {
            let r =
                invariants_at_ray(&MonomialIdeal::power_of_maximal(n as u32), ray(2, 1)).unwrap();
            assert_eq!(r.q, rat(n + 1, n));
        }
    }

    #[test]
    fn chain_examples() {
        let c = minimal_resolution_chain(&ideal("x^2, y^2"));
        assert_eq!(
            c.rays(),
            &[Ray::X_AXIS, ray(2, 1), ray(1, 1), ray(1, 2), Ray::Y_AXIS]
        );
        assert_eq!(c.self_intersection_numbers(), vec![1, 3, 1]);

        for n in 1..6 {
            let c = minimal_resolution_chain(&MonomialIdeal::power_of_maximal(n));
            assert_eq!(c.rays(), &[Ray::X_AXIS, ray(1, 1), Ray::Y_AXIS]);
        }
    }

    #[test]
    fn hirzebruch_jung_completion() {
        // Cone (1,0)-(1,5): c = [5] -> rays (1,1),(1,2),...,(1,4) with c_i = 2.
        let c = resolution_chain(&[ray(1, 5)]);
        assert_eq!(
            c.rays(),
            &[
                Ray::X_AXIS,
                ray(1, 1),
                ray(1, 2),
                ray(1, 3),
                ray(1, 4),
                ray(1, 5),
                Ray::Y_AXIS
            ]
        );
        assert_eq!(c.self_intersection_numbers(), vec![2, 2, 2, 2, 1]);
        // Cone (1,0)-(3,2) with det 2: one ray (2,1).
        let c = resolution_chain(&[ray(3, 2)]);
        assert_eq!(c.interior(), &[ray(2, 1), ray(3, 2), ray(1, 1)]);
        assert!(FanChain::new(vec![Ray::X_AXIS, ray(1, 2), Ray::Y_AXIS]).is_err());
    }

    #[test]
    fn triple_examples() {
        let res = triple_of_ideal(&ideal("x^2, y^2")).unwrap();
        let g = &res.triple.graph;
        assert_eq!(
            g.vertices().iter().map(|v| v.self_int).collect::<Vec<_>>(),
            vec![-1, -3, -1]
        );
        assert_eq!(res.triple.l, vec![0, 2, 0]);
        assert_eq!(res.triple.p, vec![1, 0, 1]);
        assert_eq!(res.profile.q, vec![rat_int(2), rat_int(1), rat_int(2)]);

        for n in 1..8u32 {
            let res = triple_of_ideal(&MonomialIdeal::power_of_maximal(n)).unwrap();
            assert_eq!(res.triple.graph.len(), 1);
            assert_eq!(res.triple.graph.vertices()[0].self_int, -1);
            assert_eq!(res.triple.l, vec![u64::from(n)]);
            assert_eq!(res.triple.p, vec![2 * u64::from(n) - 2]);
            assert_eq!(res.profile.q, vec![rat_int(1)]);
        }
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(20, 6, 7);
        let b = random_corpus(20, 6, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|i| i.x_power() <= 6 && i.y_power() <= 6));
        let set: BTreeSet<_> = a.iter().cloned().collect();
        assert_eq!(set.len(), 20);
    }
}
