//! Classification of graphs as discrete surfaces.
//!
//! A vertex is interior when its unit sphere is a cycle of length at least 4
//! and on the boundary when it is a path with at least 3 vertices. A graph
//! whose vertices are all interior is a closed 2-graph; a graph with no
//! invalid vertex and at least one boundary vertex is a 2-graph with boundary.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{Edge, Graph, LinkShape, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    Interior,
    Boundary,
    Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VertexClass {
    pub kind: VertexKind,
    pub sphere_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceType {
    Closed2Graph,
    #[serde(rename = "2GraphWithBoundary")]
    TwoGraphWithBoundary,
    NotASurface,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SurfaceReport {
    pub classes: BTreeMap<Vertex, VertexClass>,
    pub surface_type: SurfaceType,
    pub boundary_cycles: Vec<Vec<Vertex>>,
    pub euler_characteristic: i64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
}

impl SurfaceReport {
    pub fn boundary_vertices(&self) -> BTreeSet<Vertex> {
        self.classes
            .iter()
            .filter(|(_, c)| c.kind == VertexKind::Boundary)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_surface(&self) -> bool {
        self.surface_type != SurfaceType::NotASurface
    }

    /// Boundary lengths in the order of `boundary_cycles`.
    pub fn boundary_lengths(&self) -> Vec<usize> {
        self.boundary_cycles.iter().map(Vec::len).collect()
    }
}

pub fn classify_vertex(g: &Graph, v: Vertex) -> Result<VertexClass> {
    let sphere = g.unit_sphere(v)?;
    let n = sphere.vertex_count();
    let kind = match sphere.link_shape() {
        Some(LinkShape::Cycle(_)) if n >= 4 => VertexKind::Interior,
        Some(LinkShape::Path(_)) if n >= 3 => VertexKind::Boundary,
        _ => VertexKind::Invalid,
    };
    Ok(VertexClass {
        kind,
        sphere_size: n,
    })
}

pub fn classify_surface(g: &Graph) -> SurfaceReport {
    let classes: BTreeMap<Vertex, VertexClass> = g
        .vertices()
        .map(|v| (v, classify_vertex(g, v).expect("vertex comes from the graph")))
        .collect();
    let any_invalid = classes.values().any(|c| c.kind == VertexKind::Invalid);
    let any_boundary = classes.values().any(|c| c.kind == VertexKind::Boundary);
    let surface_type = if any_invalid || classes.is_empty() {
        SurfaceType::NotASurface
    } else if any_boundary {
        SurfaceType::TwoGraphWithBoundary
    } else {
        SurfaceType::Closed2Graph
    };
    let boundary_cycles = if surface_type == SurfaceType::TwoGraphWithBoundary {
        trace_boundary_cycles(g, &classes)
    } else {
        Vec::new()
    };
    SurfaceReport {
        classes,
        surface_type,
        boundary_cycles,
        euler_characteristic: g.euler_characteristic(),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        triangle_count: g.triangle_count(),
    }
}

/// Boundary neighbors of a boundary vertex: the two ends of its link path.
fn boundary_neighbors(g: &Graph, v: Vertex) -> Option<(Vertex, Vertex)> {
    match g.unit_sphere(v).ok()?.link_shape()? {
        LinkShape::Path(p) => Some((p[0], *p.last().unwrap())),
        LinkShape::Cycle(_) => None,
    }
}

fn trace_boundary_cycles(g: &Graph, classes: &BTreeMap<Vertex, VertexClass>) -> Vec<Vec<Vertex>> {
    let ends: BTreeMap<Vertex, (Vertex, Vertex)> = classes
        .iter()
        .filter(|(_, c)| c.kind == VertexKind::Boundary)
        .filter_map(|(&v, _)| boundary_neighbors(g, v).map(|e| (v, e)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in ends.keys() {
        if seen.contains(&start) {
            continue;
        }
        let (p, q) = ends[&start];
        let mut cycle = vec![start];
        seen.insert(start);
        let (mut prev, mut cur) = (start, p.min(q));
        while cur != start && seen.insert(cur) {
            cycle.push(cur);
            let Some(&(x, y)) = ends.get(&cur) else { break };
            let next = if x == prev { y } else { x };
            prev = cur;
            cur = next;
        }
        cycles.push(cycle);
    }
    cycles
}

/// `S(a) ∩ S(b)` for an edge `(a, b)`: two vertices for an interior edge of a
/// surface, one for a boundary edge.
pub fn dual_sphere(g: &Graph, (a, b): Edge) -> Result<BTreeSet<Vertex>> {
    g.require_edge(a, b)?;
    Ok(g.common_neighbors(a, b))
}

/// Vertices of `sphere` at maximal distance from `x`. The sphere must be a
/// cycle or a path.
pub fn antipodal(sphere: &Graph, x: Vertex) -> Result<Vec<Vertex>> {
    if !sphere.contains(x) {
        return Err(CoreError::UnknownVertex(x));
    }
    if sphere.link_shape().is_none() {
        return Err(CoreError::NotCycleOrPath);
    }
    let dist = sphere.distances_from(x)?;
    let max = dist.values().copied().max().unwrap_or(0);
    Ok(dist
        .into_iter()
        .filter(|&(_, d)| d == max)
        .map(|(v, _)| v)
        .collect())
}

pub type Rational = Ratio<i64>;

/// Per-vertex discrete curvature; the total equals the Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureLedger {
    pub per_vertex: BTreeMap<Vertex, Rational>,
    pub total: Rational,
    /// `1 - d/3` at boundary vertices, reported for comparison only; it does
    /// not enter `total`.
    pub boundary_curvature_alt: BTreeMap<Vertex, Rational>,
}

/// Interior vertices carry `1 - d/6`, boundary vertices `(4 - d)/6`.
pub fn curvature_ledger(g: &Graph, report: &SurfaceReport) -> Result<CurvatureLedger> {
    if !report.is_surface() {
        return Err(CoreError::NotASurface);
    }
    let mut per_vertex = BTreeMap::new();
    let mut alt = BTreeMap::new();
    for (&v, class) in &report.classes {
        let d = g.degree(v)? as i64;
        let k = match class.kind {
            VertexKind::Interior => Ratio::new(6 - d, 6),
            VertexKind::Boundary => {
                alt.insert(v, Ratio::new(3 - d, 3));
                Ratio::new(4 - d, 6)
            }
            VertexKind::Invalid => return Err(CoreError::NotASurface),
        };
        per_vertex.insert(v, k);
    }
    let total = per_vertex.values().copied().sum();
    Ok(CurvatureLedger {
        per_vertex,
        total,
        boundary_curvature_alt: alt,
    })
}

impl Serialize for CurvatureLedger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Wire {
            per_vertex: BTreeMap<Vertex, String>,
            total: String,
            boundary_curvature_alt: BTreeMap<Vertex, String>,
        }
        let fmt = |m: &BTreeMap<Vertex, Rational>| m.iter().map(|(&v, r)| (v, r.to_string())).collect();
        Wire {
            per_vertex: fmt(&self.per_vertex),
            total: self.total.to_string(),
            boundary_curvature_alt: fmt(&self.boundary_curvature_alt),
        }
        .serialize(s)
    }
}
