//! Finite simple undirected graphs with integer vertex ids.
//!
//! A [`Graph`] is an adjacency map from vertex id to the sorted set of its
//! neighbors. Ids are arbitrary non-negative integers and are never renumbered.
//! Graph values are treated as immutable by the public API: every operation
//! that changes the graph returns a new value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub type Vertex = u32;

/// An undirected edge, always stored with the smaller id first.
pub type Edge = (Vertex, Vertex);

pub fn edge(a: Vertex, b: Vertex) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

/// Ordered shape of a unit sphere in a 2-dimensional graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkShape {
    /// Cyclic order starting at the smallest vertex, continuing towards its
    /// smaller neighbor.
    Cycle(Vec<Vertex>),
    /// Path order starting at the smaller endpoint.
    Path(Vec<Vertex>),
}

impl Graph {
    /// Builds a graph from a vertex list and an edge list. Edges are
    /// symmetrized and deduplicated.
    pub fn build(vertices: &[Vertex], edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> =
            vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for &(a, b) in edges {
            if a == b {
                return Err(CoreError::SelfLoop(a));
            }
            for v in [a, b] {
                if !adj.contains_key(&v) {
                    return Err(CoreError::DanglingEndpoint(v));
                }
            }
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(Graph { adj })
    }

    /// Builds a graph whose vertex set is exactly the set of edge endpoints.
    pub fn from_edges(edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let vertices: BTreeSet<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        let vertices: Vec<Vertex> = vertices.into_iter().collect();
        Graph::build(&vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn neighbors(&self, v: Vertex) -> Result<&BTreeSet<Vertex>> {
        self.adj.get(&v).ok_or(CoreError::UnknownVertex(v))
    }

    /// Neighbors of a vertex known to be present.
    pub(crate) fn nbrs(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[&v]
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.neighbors(v).map(BTreeSet::len)
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    /// Next unused id: `max + 1`, or 0 for the empty graph.
    pub fn fresh_vertex(&self) -> Vertex {
        self.max_vertex().map_or(0, |m| m + 1)
    }

    /// All edges, each once with the smaller id first, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, n)| n.range(a + 1..).map(move |&b| (a, b)))
    }

    /// All triangles as ascending vertex triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[Vertex; 3]> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            for &c in self.adj[&b].range(b + 1..) {
                if self.adj[&a].contains(&c) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles().len()
    }

    /// `|V| - |E| + |F|` with `F` the triangles.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    /// Common neighbors `S(a) ∩ S(b)`.
    pub fn common_neighbors(&self, a: Vertex, b: Vertex) -> BTreeSet<Vertex> {
        match (self.adj.get(&a), self.adj.get(&b)) {
            (Some(na), Some(nb)) => na.intersection(nb).copied().collect(),
            _ => BTreeSet::new(),
        }
    }

    /// Induced subgraph on a vertex subset; unknown ids are ignored.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let adj = keep
            .iter()
            .filter_map(|&v| {
                self.adj
                    .get(&v)
                    .map(|n| (v, n.intersection(keep).copied().collect()))
            })
            .collect();
        Graph { adj }
    }

    /// The unit sphere `S(v)`: the subgraph induced by the neighbors of `v`.
    pub fn unit_sphere(&self, v: Vertex) -> Result<Graph> {
        Ok(self.induced(self.neighbors(v)?))
    }

    /// Vertices of odd degree.
    pub fn odd_vertices(&self) -> BTreeSet<Vertex> {
        self.adj
            .iter()
            .filter(|(_, n)| n.len() % 2 == 1)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_eulerian(&self) -> bool {
        self.adj.values().all(|n| n.len() % 2 == 0)
    }

    /// Breadth-first hop distances from `source` to every reachable vertex.
    pub fn distances_from(&self, source: Vertex) -> Result<BTreeMap<Vertex, usize>> {
        self.neighbors(source)?;
        let mut dist = BTreeMap::from([(source, 0usize)]);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for &w in &self.adj[&u] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.keys().next() {
            None => true,
            Some(&v) => self.distances_from(v).map(|d| d.len()) == Ok(self.vertex_count()),
        }
    }

    /// Recognizes cycles (connected, all degrees 2, at least 3 vertices) and
    /// paths (connected, two degree-1 ends, the rest degree 2).
    pub fn link_shape(&self) -> Option<LinkShape> {
        let n = self.vertex_count();
        if n < 2 || !self.is_connected() {
            return None;
        }
        let ends: Vec<Vertex> = self
            .adj
            .iter()
            .filter(|(_, nb)| nb.len() == 1)
            .map(|(&v, _)| v)
            .collect();
        let all_le_two = self.adj.values().all(|nb| (1..=2).contains(&nb.len()));
        if !all_le_two {
            return None;
        }
        if ends.is_empty() {
            if n < 3 {
                return None;
            }
            let start = *self.adj.keys().next().unwrap();
            let second = *self.adj[&start].iter().next().unwrap();
            Some(LinkShape::Cycle(self.walk(start, second, n)))
        } else if ends.len() == 2 {
            let start = ends[0];
            let second = *self.adj[&start].iter().next().unwrap();
            Some(LinkShape::Path(self.walk(start, second, n)))
        } else {
            None
        }
    }

    fn walk(&self, start: Vertex, second: Vertex, n: usize) -> Vec<Vertex> {
        let mut order = Vec::with_capacity(n);
        order.push(start);
        let (mut prev, mut cur) = (start, second);
        while order.len() < n {
            order.push(cur);
            let next = self.adj[&cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        order
    }

    pub(crate) fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    pub(crate) fn add_edge(&mut self, a: Vertex, b: Vertex) {
        debug_assert!(a != b);
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub(crate) fn remove_edge(&mut self, a: Vertex, b: Vertex) {
        if let Some(n) = self.adj.get_mut(&a) {
            n.remove(&b);
        }
        if let Some(n) = self.adj.get_mut(&b) {
            n.remove(&a);
        }
    }

    pub(crate) fn remove_vertex(&mut self, v: Vertex) {
        if let Some(n) = self.adj.remove(&v) {
            for w in n {
                self.adj.get_mut(&w).unwrap().remove(&v);
            }
        }
    }

    pub(crate) fn require_edge(&self, a: Vertex, b: Vertex) -> Result<()> {
        if self.has_edge(a, b) {
            Ok(())
        } else {
            Err(CoreError::NotAnEdge(edge(a, b)))
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices().collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph json is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(s).map_err(|e| CoreError::Json(e.to_string()))?;
        Graph::try_from(raw)
    }
}

/// Wire format: `{"vertices":[...],"edges":[[a,b],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = CoreError;

    fn try_from(raw: GraphJson) -> Result<Graph> {
        let edges: Vec<(Vertex, Vertex)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::build(&raw.vertices, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::try_from(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::from_edges(&edges).unwrap()
    }

    #[test]
    fn build_symmetrizes_and_dedups() {
        let g = Graph::build(&[1, 2], &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(2, 1));
    }

    #[test]
    fn build_single_vertex() {
        let g = Graph::build(&[1], &[]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn build_rejects_self_loop_and_dangling() {
        assert_eq!(Graph::build(&[1], &[(1, 1)]), Err(CoreError::SelfLoop(1)));
        assert_eq!(
            Graph::build(&[1], &[(1, 7)]),
            Err(CoreError::DanglingEndpoint(7))
        );
    }

    #[test]
    fn link_shape_recognition() {
        assert_eq!(
            cycle(5).link_shape(),
            Some(LinkShape::Cycle(vec![1, 2, 3, 4, 5]))
        );
        let p = Graph::from_edges(&[(3, 1), (1, 2)]).unwrap();
        assert_eq!(p.link_shape(), Some(LinkShape::Path(vec![2, 1, 3])));
        let star = Graph::from_edges(&[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.link_shape(), None);
        let two_cycles = Graph::from_edges(&[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert_eq!(two_cycles.link_shape(), None);
    }

    #[test]
    fn json_accepts_any_edge_order() {
        let g = Graph::from_json_str(r#"{"vertices":[3,1,2],"edges":[[2,1],[3,2]]}"#).unwrap();
        assert_eq!(
            g.to_json_string(),
            r#"{"vertices":[1,2,3],"edges":[[1,2],[2,3]]}"#
        );
    }

    #[test]
    fn triangles_of_k4() {
        let g = Graph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(g.triangle_count(), 4);
        assert_eq!(g.euler_characteristic(), 2);
    }
}
