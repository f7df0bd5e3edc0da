//! Edge refinement and its relatives.
//!
//! Refining an edge `(a, b)` inserts a vertex `c` on it and joins `c` to every
//! vertex of `S(a) ∩ S(b)`. On a surface this flips the degree parity of the
//! two (or one, on a boundary edge) common neighbors and of nothing else.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{edge, Edge, Graph, Vertex};
use crate::surface::classify_surface;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinementMove {
    pub refined_edge: Edge,
    pub new_vertex: Vertex,
    pub linked_neighbors: BTreeSet<Vertex>,
}

/// In-place refinement used by the search loops; allocates `c = max + 1`.
pub(crate) fn refine_in_place(g: &mut Graph, (a, b): Edge) -> Result<RefinementMove> {
    g.require_edge(a, b)?;
    let linked = g.common_neighbors(a, b);
    let c = g.fresh_vertex();
    g.remove_edge(a, b);
    g.add_vertex(c);
    g.add_edge(a, c);
    g.add_edge(c, b);
    for &x in &linked {
        g.add_edge(c, x);
    }
    Ok(RefinementMove {
        refined_edge: edge(a, b),
        new_vertex: c,
        linked_neighbors: linked,
    })
}

pub fn edge_refine(g: &Graph, e: Edge) -> Result<(Graph, RefinementMove)> {
    let mut h = g.clone();
    let mv = refine_in_place(&mut h, e)?;
    Ok((h, mv))
}

/// Replaces `(a, b)` by the path `a - u - v - b`, joining `u` and `v` to each
/// other and to every vertex of the original `S(a) ∩ S(b)`. Returns the two new
/// vertices in path order.
pub(crate) fn double_refine_in_place(g: &mut Graph, (a, b): Edge) -> Result<(Vertex, Vertex)> {
    g.require_edge(a, b)?;
    let linked = g.common_neighbors(a, b);
    let u = g.fresh_vertex();
    let v = u + 1;
    g.remove_edge(a, b);
    g.add_edge(a, u);
    g.add_edge(u, v);
    g.add_edge(v, b);
    for &x in &linked {
        g.add_edge(u, x);
        g.add_edge(v, x);
    }
    Ok((u, v))
}

pub fn double_edge_refine(g: &Graph, e: Edge) -> Result<Graph> {
    let mut h = g.clone();
    double_refine_in_place(&mut h, e)?;
    Ok(h)
}

/// Contracts `(b, c)`: the edge disappears, the endpoints merge into the
/// smaller id, and parallel edges collapse.
pub fn edge_contract(g: &Graph, (b, c): Edge) -> Result<Graph> {
    g.require_edge(b, c)?;
    let (keep, drop) = (b.min(c), b.max(c));
    let mut h = g.clone();
    let moved: Vec<Vertex> = h.nbrs(drop).iter().copied().filter(|&x| x != keep).collect();
    h.remove_vertex(drop);
    for x in moved {
        h.add_edge(keep, x);
    }
    Ok(h)
}

/// Barycentric refinement of a surface.
pub fn barycentric_refine(g: &Graph) -> Result<Graph> {
    if !classify_surface(g).is_surface() {
        return Err(CoreError::NotASurface);
    }
    Ok(barycentric_complex(g))
}

/// Graph of the simplices (vertices, edges, triangles) of any graph, with
/// adjacency by strict containment. Original vertices keep their ids; edges
/// and then triangles receive consecutive ids after the largest original id.
pub fn barycentric_complex(g: &Graph) -> Graph {
    let mut next = g.fresh_vertex();
    let mut h = Graph::default();
    for v in g.vertices() {
        h.add_vertex(v);
    }
    let mut edge_id = BTreeMap::new();
    for (a, b) in g.edges() {
        let id = next;
        next += 1;
        edge_id.insert((a, b), id);
        h.add_edge(id, a);
        h.add_edge(id, b);
    }
    for [a, b, c] in g.triangles() {
        let id = next;
        next += 1;
        for v in [a, b, c] {
            h.add_edge(id, v);
        }
        for e in [(a, b), (a, c), (b, c)] {
            h.add_edge(id, edge_id[&e]);
        }
    }
    h
}

/// An edge is interior unless both endpoints lie on the boundary.
pub fn is_interior_edge(boundary: &BTreeSet<Vertex>, (a, b): Edge) -> bool {
    !(boundary.contains(&a) && boundary.contains(&b))
}
