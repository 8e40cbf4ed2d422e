//! Decorated dual graphs of good resolutions.
//!
//! A [`DualGraph`] has one vertex per exceptional curve `E_v`, carrying its
//! genus and self-intersection, and one edge per intersection point. Strict
//! transforms are not vertices; their incidence lives in the `L` and `P`
//! vectors of a [`DecoratedTriple`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{self, rat_int, IntMat, RatVec};

/// Largest graph accepted by [`canonical_key`].
pub const MAX_CANONICAL_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge between {0} and {1}")]
    UnknownEdge(VertexId, VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("decoration vector has length {got}, graph has {expected} vertices")]
    DecorationLength { expected: usize, got: usize },
    #[error("graph has {0} vertices; canonical keys support at most {MAX_CANONICAL_VERTICES}")]
    TooLarge(usize),
    #[error("malformed triple JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub genus: u32,
    pub self_int: i64,
}

impl Vertex {
    pub fn rational(id: u32, self_int: i64) -> Self {
        Vertex {
            id: VertexId(id),
            genus: 0,
            self_int,
        }
    }
}

/// Connected dual graph. Loops are forbidden; parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    // Each edge stored with the smaller id first.
    edges: Vec<(VertexId, VertexId)>,
}

fn norm_edge(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DualGraph {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.id) {
                return Err(GraphError::DuplicateVertex(v.id));
            }
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Loop(a));
            }
            for end in [a, b] {
                if !seen.contains(&end) {
                    return Err(GraphError::UnknownVertex(end));
                }
            }
            normalized.push(norm_edge(a, b));
        }
        let g = DualGraph {
            vertices,
            edges: normalized,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Genus-zero chain with ids `0..n` and the given self-intersections.
    pub fn chain(self_ints: &[i64]) -> Result<Self, GraphError> {
        let vertices = self_ints
            .iter()
            .enumerate()
            .map(|(i, &s)| Vertex::rational(i as u32, s))
            .collect();
        let edges = (1..self_ints.len())
            .map(|i| (VertexId(i as u32 - 1), VertexId(i as u32)))
            .collect();
        DualGraph::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|v| v.id)
    }

    pub fn index_of(&self, id: VertexId) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or(GraphError::UnknownVertex(id))
    }

    pub fn vertex(&self, id: VertexId) -> Result<&Vertex, GraphError> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    /// Number of edge endpoints at `id`.
    pub fn valency(&self, id: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == id) + usize::from(b == id))
            .sum()
    }

    pub fn edge_multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        let e = norm_edge(a, b);
        self.edges.iter().filter(|&&f| f == e).count()
    }

    /// Distinct neighbours of `id`.
    pub fn neighbors(&self, id: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == id, b == id) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    fn is_connected(&self) -> bool {
        let mut reached = BTreeSet::new();
        let mut stack = vec![self.vertices[0].id];
        while let Some(v) = stack.pop() {
            if reached.insert(v) {
                stack.extend(
                    self.neighbors(v)
                        .into_iter()
                        .filter(|w| !reached.contains(w)),
                );
            }
        }
        reached.len() == self.vertices.len()
    }

    /// Vertex ids from one end to the other if the graph is a simple path.
    pub fn path_order(&self) -> Option<Vec<VertexId>> {
        if self.edges.len() + 1 != self.len() {
            return None;
        }
        if self.len() == 1 {
            return Some(vec![self.vertices[0].id]);
        }
        let start = self.ids().find(|&v| self.valency(v) == 1)?;
        if self.ids().any(|v| self.valency(v) > 2) {
            return None;
        }
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        while let Some(next) = self.neighbors(cur).into_iter().find(|&w| Some(w) != prev) {
            order.push(next);
            prev = Some(cur);
            cur = next;
        }
        Some(order)
    }

    /// `E_i · E_j` in vertex-list order.
    pub fn intersection_matrix(&self) -> IntMat {
        let n = self.len();
        let mut m = IntMat::zeros(n, n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, v.self_int);
        }
        for &(a, b) in &self.edges {
            // Endpoints were validated at construction.
            let i = self.index_of(a).unwrap();
            let j = self.index_of(b).unwrap();
            m.add_to(i, j, 1);
            m.add_to(j, i, 1);
        }
        m
    }

    /// `val(v) + 2 g_v - 2` per vertex.
    pub fn k_vector(&self) -> RatVec {
        self.vertices
            .iter()
            .map(|v| rat_int(self.valency(v.id) as i64 + 2 * i64::from(v.genus) - 2))
            .collect()
    }

    pub fn is_negative_definite(&self) -> bool {
        // The intersection matrix is symmetric by construction.
        exactalg::is_negative_definite(&self.intersection_matrix()).unwrap_or(false)
    }

    fn fresh_id(&self) -> VertexId {
        VertexId(
            self.vertices
                .iter()
                .map(|v| v.id.0)
                .max()
                .map_or(0, |m| m + 1),
        )
    }

    /// Blow-up of a smooth point of `E_v`. Returns the new graph and the id
    /// of the new (-1)-curve.
    pub fn blowup_smooth(&self, v: VertexId) -> Result<(DualGraph, VertexId), GraphError> {
        let i = self.index_of(v)?;
        let w = self.fresh_id();
        let mut g = self.clone();
        g.vertices[i].self_int -= 1;
        g.vertices.push(Vertex {
            id: w,
            genus: 0,
            self_int: -1,
        });
        g.edges.push(norm_edge(v, w));
        Ok((g, w))
    }

    /// Blow-up of one intersection point of `E_a` and `E_b`. One copy of the
    /// edge is replaced by a new (-1)-curve adjacent to both.
    pub fn blowup_double(
        &self,
        a: VertexId,
        b: VertexId,
    ) -> Result<(DualGraph, VertexId), GraphError> {
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        let e = norm_edge(a, b);
        let pos = self
            .edges
            .iter()
            .position(|&f| f == e)
            .ok_or(GraphError::UnknownEdge(a, b))?;
        let w = self.fresh_id();
        let mut g = self.clone();
        g.edges.remove(pos);
        g.vertices[ia].self_int -= 1;
        g.vertices[ib].self_int -= 1;
        g.vertices.push(Vertex {
            id: w,
            genus: 0,
            self_int: -1,
        });
        g.edges.push(norm_edge(a, w));
        g.edges.push(norm_edge(b, w));
        Ok((g, w))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "  {} [label=\"{} [E²={}, g={}]\"];",
                v.id, v.id, v.self_int, v.genus
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }
}

/// A dual graph with hyperplane-section incidences `L` and polar
/// incidences `P`, both indexed in vertex-list order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedTriple {
    pub graph: DualGraph,
    pub l: Vec<u64>,
    pub p: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    vertices: Vec<Vertex>,
    edges: Vec<[VertexId; 2]>,
    #[serde(rename = "L")]
    l: BTreeMap<VertexId, u64>,
    #[serde(rename = "P")]
    p: BTreeMap<VertexId, u64>,
}

impl DecoratedTriple {
    pub fn new(graph: DualGraph, l: Vec<u64>, p: Vec<u64>) -> Result<Self, GraphError> {
        for len in [l.len(), p.len()] {
            if len != graph.len() {
                return Err(GraphError::DecorationLength {
                    expected: graph.len(),
                    got: len,
                });
            }
        }
        Ok(DecoratedTriple { graph, l, p })
    }

    pub fn l_vector(&self) -> RatVec {
        self.l.iter().map(|&x| rat_int(x)).collect()
    }

    pub fn p_vector(&self) -> RatVec {
        self.p.iter().map(|&x| rat_int(x)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ids = || self.graph.ids();
        let doc = TripleJson {
            vertices: self.graph.vertices().to_vec(),
            edges: self.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            l: ids().zip(self.l.iter().copied()).collect(),
            p: ids().zip(self.p.iter().copied()).collect(),
        };
        serde_json::to_value(doc).expect("triple serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, GraphError> {
        let doc: TripleJson =
            serde_json::from_value(value.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
        let graph = DualGraph::new(
            doc.vertices,
            doc.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        )?;
        let lookup = |map: &BTreeMap<VertexId, u64>, what: &str| -> Result<Vec<u64>, GraphError> {
            if map.len() != graph.len() {
                return Err(GraphError::Json(format!(
                    "{what} has {} entries for {} vertices",
                    map.len(),
                    graph.len()
                )));
            }
            graph
                .ids()
                .map(|id| {
                    map.get(&id)
                        .copied()
                        .ok_or_else(|| GraphError::Json(format!("{what} missing vertex {id}")))
                })
                .collect()
        };
        let l = lookup(&doc.l, "L")?;
        let p = lookup(&doc.p, "P")?;
        DecoratedTriple::new(graph, l, p)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph triple {\n");
        for (i, v) in self.graph.vertices().iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} [label=\"{} [E²={}, g={}, L={}, P={}]\"];",
                v.id, v.id, v.self_int, v.genus, self.l[i], self.p[i]
            );
        }
        for &(a, b) in self.graph.edges() {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Canonical byte key of a decorated triple: equal keys iff there is a
/// graph isomorphism preserving genus, self-intersection, `L` and `P`.
///
/// Colour refinement followed by individualisation search; the key is the
/// lexicographically smallest encoding over all leaves of the search tree.
pub fn canonical_key(t: &DecoratedTriple) -> Result<Vec<u8>, GraphError> {
    let n = t.graph.len();
    if n > MAX_CANONICAL_VERTICES {
        return Err(GraphError::TooLarge(n));
    }
    let deco: Vec<(u32, i64, u64, u64)> = t
        .graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.genus, v.self_int, t.l[i], t.p[i]))
        .collect();
    let mut adj = vec![vec![0u32; n]; n];
    for &(a, b) in t.graph.edges() {
        let i = t.graph.index_of(a)?;
        let j = t.graph.index_of(b)?;
        adj[i][j] += 1;
        adj[j][i] += 1;
    }
    let search = Search { deco, adj };
    let colors = search.refine(rank(&search.deco));
    let mut best = None;
    search.explore(colors, &mut best);
    Ok(best.expect("search reaches at least one leaf"))
}

/// Dense ranks of `items` under their natural order.
fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let sorted: BTreeSet<T> = items.iter().cloned().collect();
    let index: BTreeMap<&T, usize> = sorted.iter().enumerate().map(|(i, x)| (x, i)).collect();
    items.iter().map(|x| index[x]).collect()
}

struct Search {
    deco: Vec<(u32, i64, u64, u64)>,
    adj: Vec<Vec<u32>>,
}

impl Search {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let n = colors.len();
        loop {
            let count = colors.iter().collect::<BTreeSet<_>>().len();
            let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, u32)> = (0..n)
                        .filter(|&w| self.adj[v][w] > 0)
                        .map(|w| (colors[w], self.adj[v][w]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_count = next.iter().collect::<BTreeSet<_>>().len();
            colors = next;
            if next_count == count {
                return colors;
            }
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        (0..self.adj.len())
            .filter(|&w| w != u && w != v)
            .all(|w| self.adj[u][w] == self.adj[v][w])
    }

    fn explore(&self, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
        let n = colors.len();
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let Some((&target, cell)) = cells.iter().find(|(_, members)| members.len() > 1) else {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| colors[v]);
            let key = self.encode(&order);
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        };
        let mut reps: Vec<usize> = Vec::new();
        for &v in cell {
            // Swapping twins is an automorphism fixing the partition.
            if reps.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            reps.push(v);
            let split: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| match c.cmp(&target) {
                    std::cmp::Ordering::Less => c,
                    std::cmp::Ordering::Equal if w == v => c,
                    _ => c + 1,
                })
                .collect();
            self.explore(self.refine(split), best);
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut out = Vec::with_capacity(4 + n * 28 + n * n * 2);
        out.extend((n as u32).to_be_bytes());
        for &v in order {
            let (g, s, l, p) = self.deco[v];
            out.extend(g.to_be_bytes());
            out.extend(((s as u64) ^ (1 << 63)).to_be_bytes());
            out.extend(l.to_be_bytes());
            out.extend(p.to_be_bytes());
        }
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                out.extend(self.adj[a][b].to_be_bytes());
            }
        }
        out
    }
}

/// Convenience for tests and reports: the intersection matrix as nested
/// machine integers.
pub fn matrix_rows(g: &DualGraph) -> Vec<Vec<BigInt>> {
    let m = g.intersection_matrix();
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}
