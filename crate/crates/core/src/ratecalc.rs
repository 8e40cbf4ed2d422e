//! Inner rates on a dual graph.
//!
//! With `M` the intersection matrix, `K` the canonical vector
//! `val(v) + 2g_v - 2`, `F` the hyperplane-section vector, `P` the polar
//! vector and `a_v = m_v q_v`, the inner rates satisfy
//!
//! ```text
//! M · a = K + F - P,        M · m = -F.
//! ```
//!
//! This module solves that system in both directions, extends a profile
//! through point blow-ups, and evaluates the skeletal metric
//! (edge length `1 / (m_v m_v')`) and the inner-rate function, which is
//! affine along each edge.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dualgraph::{DecoratedTriple, DualGraph, GraphError, VertexId};
use crate::exactalg::{fmt_rat, rat_int, solve_exact, LinAlgError, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("multiplicity at vertex {vertex} is {value}, not a positive integer")]
    NonIntegralMultiplicity { vertex: VertexId, value: String },
    #[error("vector has length {got}, graph has {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("point parameter {0} outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("point at vertex {0} must have t = 0")]
    DegeneratePoint(VertexId),
    #[error("no path between the two points")]
    DisconnectedPoint,
    #[error("rate profile invariant violated at {0}")]
    Invariant(String),
}

/// Multiplicities `m_v(I)` and inner rates `q_v^I` on a dual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateProfile {
    pub graph: DualGraph,
    pub m: Vec<BigInt>,
    pub q: Vec<Rat>,
}

impl RateProfile {
    pub fn new(graph: DualGraph, m: Vec<BigInt>, q: Vec<Rat>) -> Result<Self, RateError> {
        check_len(&graph, m.len())?;
        check_len(&graph, q.len())?;
        for (id, mv) in graph.ids().zip(&m) {
            if !mv.is_positive() {
                return Err(RateError::NonIntegralMultiplicity {
                    vertex: id,
                    value: mv.to_string(),
                });
            }
        }
        Ok(RateProfile { graph, m, q })
    }

    pub fn m_at(&self, v: VertexId) -> Result<&BigInt, RateError> {
        Ok(&self.m[self.graph.index_of(v)?])
    }

    pub fn q_at(&self, v: VertexId) -> Result<&Rat, RateError> {
        Ok(&self.q[self.graph.index_of(v)?])
    }

    /// `a_v = m_v q_v`.
    pub fn a_vector(&self) -> RatVec {
        self.m
            .iter()
            .zip(&self.q)
            .map(|(m, q)| Rat::from_integer(m.clone()) * q)
            .collect()
    }

    /// `ν_v = m_v (q_v + 1) - 1`.
    pub fn nu_vector(&self) -> RatVec {
        self.m
            .iter()
            .zip(&self.q)
            .map(|(m, q)| Rat::from_integer(m.clone()) * (q + Rat::one()) - Rat::one())
            .collect()
    }

    /// `m_v m_v' (q_v' - q_v)` along the edge `v -> v'`.
    pub fn edge_slope(&self, v: VertexId, w: VertexId) -> Result<Rat, RateError> {
        let i = self.graph.index_of(v)?;
        let j = self.graph.index_of(w)?;
        Ok(Rat::from_integer(&self.m[i] * &self.m[j]) * (&self.q[j] - &self.q[i]))
    }

    /// Checks that every `ν_v` is a non-negative integer and every edge
    /// slope is an integer.
    pub fn check_invariants(&self) -> Result<(), RateError> {
        for (id, nu) in self.graph.ids().zip(self.nu_vector()) {
            if !nu.is_integer() || nu.is_negative() {
                return Err(RateError::Invariant(format!(
                    "vertex {id}: nu = {}",
                    fmt_rat(&nu)
                )));
            }
        }
        for &(a, b) in self.graph.edges() {
            let s = self.edge_slope(a, b)?;
            if !s.is_integer() {
                return Err(RateError::Invariant(format!(
                    "edge {a}-{b}: slope {}",
                    fmt_rat(&s)
                )));
            }
        }
        Ok(())
    }

    /// Skeletal length `1 / (m_v m_v')` of the edge `v - v'`.
    pub fn edge_length(&self, v: VertexId, w: VertexId) -> Result<Rat, RateError> {
        Ok(Rat::new(BigInt::one(), self.m_at(v)? * self.m_at(w)?))
    }
}

fn check_len(g: &DualGraph, len: usize) -> Result<(), RateError> {
    if len != g.len() {
        return Err(RateError::Length {
            expected: g.len(),
            got: len,
        });
    }
    Ok(())
}

/// A point on an edge `from -> to` at parameter `t`; `t = 0` is `from`.
/// A vertex is written with `from == to` and `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPoint {
    pub from: VertexId,
    pub to: VertexId,
    pub t: Rat,
}

impl GraphPoint {
    pub fn vertex(v: VertexId) -> Self {
        GraphPoint {
            from: v,
            to: v,
            t: Rat::zero(),
        }
    }

    pub fn on_edge(from: VertexId, to: VertexId, t: Rat) -> Self {
        GraphPoint { from, to, t }
    }

    fn validate(&self, g: &DualGraph) -> Result<(), RateError> {
        g.index_of(self.from)?;
        g.index_of(self.to)?;
        if self.t.is_negative() || self.t > Rat::one() {
            return Err(RateError::ParameterOutOfRange(fmt_rat(&self.t)));
        }
        if self.from == self.to {
            if !self.t.is_zero() {
                return Err(RateError::DegeneratePoint(self.from));
            }
        } else if g.edge_multiplicity(self.from, self.to) == 0 {
            return Err(GraphError::UnknownEdge(self.from, self.to).into());
        }
        Ok(())
    }
}

/// Solves `M · m = -L`; every entry must be a positive integer.
pub fn multiplicities_from_l(g: &DualGraph, l: &[Rat]) -> Result<Vec<BigInt>, RateError> {
    check_len(g, l.len())?;
    let rhs: RatVec = l.iter().map(|x| -x).collect();
    let m = solve_exact(&g.intersection_matrix(), &rhs)?;
    g.ids()
        .zip(m)
        .map(|(id, mv)| {
            if mv.is_integer() && mv.is_positive() {
                Ok(mv.to_integer())
            } else {
                Err(RateError::NonIntegralMultiplicity {
                    vertex: id,
                    value: fmt_rat(&mv),
                })
            }
        })
        .collect()
}

/// Inner rates from a triple, taking the hyperplane section as the
/// generic function (so `F = L`).
pub fn rates_from_triple(t: &DecoratedTriple) -> Result<RateProfile, RateError> {
    let g = &t.graph;
    let l = t.l_vector();
    let m = multiplicities_from_l(g, &l)?;
    let rhs: RatVec = g
        .k_vector()
        .into_iter()
        .zip(&l)
        .zip(t.p_vector())
        .map(|((k, f), p)| k + f - p)
        .collect();
    let a = solve_exact(&g.intersection_matrix(), &rhs)?;
    let q = a
        .into_iter()
        .zip(&m)
        .map(|(av, mv)| av / Rat::from_integer(mv.clone()))
        .collect();
    RateProfile::new(g.clone(), m, q)
}

/// `P = K + F - M·a` with `F = -M·m` and `a_v = m_v q_v`.
pub fn polar_from_rates(g: &DualGraph, m: &[BigInt], q: &[Rat]) -> Result<RatVec, RateError> {
    check_len(g, m.len())?;
    check_len(g, q.len())?;
    let mat = g.intersection_matrix();
    let f = mat.mul_int(m)?;
    let a: RatVec = m
        .iter()
        .zip(q)
        .map(|(mv, qv)| Rat::from_integer(mv.clone()) * qv)
        .collect();
    let ma = mat.mul_rat(&a)?;
    Ok(g.k_vector()
        .into_iter()
        .zip(f)
        .zip(ma)
        .map(|((k, fv), mav)| k - Rat::from_integer(fv) - mav)
        .collect())
}

/// Hyperplane-section vector `F = -M·m`.
pub fn hyperplane_from_multiplicities(
    g: &DualGraph,
    m: &[BigInt],
) -> Result<Vec<BigInt>, RateError> {
    check_len(g, m.len())?;
    Ok(g.intersection_matrix()
        .mul_int(m)?
        .into_iter()
        .map(|x| -x)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blowup {
    /// A smooth point of `E_v`.
    Smooth(VertexId),
    /// An intersection point of `E_v` and `E_v'`.
    Double(VertexId, VertexId),
}

/// Blows up a point of the exceptional divisor and assigns the new curve
/// its multiplicity and inner rate:
///
/// * smooth point of `E_v`: `m_w = m_v`, `q_w = q_v + 1/m_v`;
/// * double point of `E_v ∩ E_v'`: `m_w = m_v + m_v'`,
///   `q_w = (m_v q_v + m_v' q_v') / (m_v + m_v')`.
pub fn recurrence_extend(
    p: &RateProfile,
    blowup: Blowup,
) -> Result<(RateProfile, VertexId), RateError> {
    let (graph, w, mw, qw) = match blowup {
        Blowup::Smooth(v) => {
            let (graph, w) = p.graph.blowup_smooth(v)?;
            let mv = p.m_at(v)?.clone();
            let qw = p.q_at(v)? + Rat::new(BigInt::one(), mv.clone());
            (graph, w, mv, qw)
        }
        Blowup::Double(v, v2) => {
            let (graph, w) = p.graph.blowup_double(v, v2)?;
            let (m1, m2) = (p.m_at(v)?, p.m_at(v2)?);
            let mw = m1 + m2;
            let weighted = Rat::from_integer(m1.clone()) * p.q_at(v)?
                + Rat::from_integer(m2.clone()) * p.q_at(v2)?;
            let qw = weighted / Rat::from_integer(mw.clone());
            (graph, w, mw, qw)
        }
    };
    let mut m = p.m.clone();
    let mut q = p.q.clone();
    m.push(mw);
    q.push(qw);
    Ok((RateProfile::new(graph, m, q)?, w))
}

/// Distances from `point` to the endpoints of its edge.
fn anchors(p: &RateProfile, x: &GraphPoint) -> Result<Vec<(usize, Rat)>, RateError> {
    let i = p.graph.index_of(x.from)?;
    if x.from == x.to {
        return Ok(vec![(i, Rat::zero())]);
    }
    let j = p.graph.index_of(x.to)?;
    let len = p.edge_length(x.from, x.to)?;
    Ok(vec![(i, &x.t * &len), (j, (Rat::one() - &x.t) * len)])
}

/// Shortest-path distance for the skeletal metric with edge lengths
/// `1 / (m_v m_v')`; interior points of an edge are placed linearly in `t`.
pub fn skeletal_distance(
    p: &RateProfile,
    a: &GraphPoint,
    b: &GraphPoint,
) -> Result<Rat, RateError> {
    a.validate(&p.graph)?;
    b.validate(&p.graph)?;
    let n = p.graph.len();

    // Dijkstra from the anchors of `a`.
    let mut dist: Vec<Option<Rat>> = vec![None; n];
    for (i, d) in anchors(p, a)? {
        if dist[i].as_ref().is_none_or(|cur| d < *cur) {
            dist[i] = Some(d);
        }
    }
    let mut done = vec![false; n];
    let ids: Vec<VertexId> = p.graph.ids().collect();
    loop {
        let next = (0..n)
            .filter(|&i| !done[i])
            .filter_map(|i| dist[i].as_ref().map(|d| (i, d.clone())))
            .min_by(|x, y| x.1.cmp(&y.1));
        let Some((i, di)) = next else { break };
        done[i] = true;
        for w in p.graph.neighbors(ids[i]) {
            let j = p.graph.index_of(w)?;
            let cand = &di + p.edge_length(ids[i], w)?;
            if dist[j].as_ref().is_none_or(|cur| cand < *cur) {
                dist[j] = Some(cand);
            }
        }
    }

    let mut best: Option<Rat> = None;
    for (j, d) in anchors(p, b)? {
        if let Some(dj) = &dist[j] {
            let cand = dj + d;
            if best.as_ref().is_none_or(|cur| cand < *cur) {
                best = Some(cand);
            }
        }
    }
    // Both points interior to the same edge.
    if a.from != a.to && b.from != b.to {
        let same = (a.from, a.to) == (b.from, b.to);
        let flipped = (a.from, a.to) == (b.to, b.from);
        if same || flipped {
            let tb = if same { b.t.clone() } else { Rat::one() - &b.t };
            let direct = (&a.t - tb).abs() * p.edge_length(a.from, a.to)?;
            if best.as_ref().is_none_or(|cur| direct < *cur) {
                best = Some(direct);
            }
        }
    }
    best.ok_or(RateError::DisconnectedPoint)
}

/// The inner-rate function at a graph point: `(1 - t) q_v + t q_v'`.
pub fn rate_at(p: &RateProfile, x: &GraphPoint) -> Result<Rat, RateError> {
    x.validate(&p.graph)?;
    let qv = p.q_at(x.from)?;
    let qw = p.q_at(x.to)?;
    Ok((Rat::one() - &x.t) * qv + &x.t * qw)
}

/// Parameter `t` of the vertex created by subdividing the edge `v -> v'`,
/// measured along the original edge in the skeletal metric:
/// `m_v' / (m_v + m_v')`.
pub fn subdivision_parameter(p: &RateProfile, v: VertexId, w: VertexId) -> Result<Rat, RateError> {
    let (mv, mw) = (p.m_at(v)?, p.m_at(w)?);
    Ok(Rat::new(mw.clone(), mv + mw))
}

/// `ν_v` as integers; fails if any entry is not integral.
pub fn nu_integers(p: &RateProfile) -> Result<Vec<BigInt>, RateError> {
    p.check_invariants()?;
    Ok(p.nu_vector().into_iter().map(|x| x.to_integer()).collect())
}

/// Integer vector as exact rationals.
pub fn to_rats(v: &[BigInt]) -> RatVec {
    v.iter().cloned().map(rat_int).collect()
}
