//! 3-colorings of Eulerian discs and spheres by propagation across triangles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{edge, Edge, Graph, Vertex};
use crate::surface::{classify_surface, SurfaceType};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    pub colors: BTreeMap<Vertex, u8>,
}

impl Coloring {
    pub fn get(&self, v: Vertex) -> Option<u8> {
        self.colors.get(&v).copied()
    }

    /// Proper on every edge and rainbow on every triangle.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let col = |v| self.colors.get(&v);
        g.vertices().all(|v| col(v).is_some_and(|&c| c < 3))
            && g.edges().all(|(a, b)| col(a) != col(b))
            && g.triangles().iter().all(|&[a, b, c]| {
                let s: BTreeSet<_> = [col(a), col(b), col(c)].into();
                s.len() == 3
            })
    }
}

/// Colors the triangle containing `seed` (or the lexicographically least
/// triangle) with 0, 1, 2 in ascending vertex order and forces the rest.
/// Triangle-disconnected pieces are seeded in turn from their least triangle.
pub fn color3(g: &Graph, seed: Option<[Vertex; 3]>) -> Result<Coloring> {
    let triangles = g.triangles();
    let first = match seed {
        Some(mut t) => {
            t.sort_unstable();
            if !triangles.contains(&t) {
                return Err(CoreError::PreconditionViolated(format!("{t:?} is not a triangle")));
            }
            Some(t)
        }
        None => triangles.first().copied(),
    };
    let mut colors: BTreeMap<Vertex, u8> = BTreeMap::new();
    let mut visited: BTreeSet<[Vertex; 3]> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let seeds = first.into_iter().chain(triangles.iter().copied());
    for t in seeds {
        if t.iter().any(|v| colors.contains_key(v)) {
            continue;
        }
        for (i, &v) in t.iter().enumerate() {
            colors.insert(v, i as u8);
        }
        visited.insert(t);
        queue.push_back(t);
        while let Some([a, b, c]) = queue.pop_front() {
            for (p, q) in [(a, b), (a, c), (b, c)] {
                let want = 3 - colors[&p] - colors[&q];
                for x in g.common_neighbors(p, q) {
                    match colors.get(&x) {
                        Some(&have) if have != want => return Err(CoreError::ColoringConflict(x)),
                        Some(_) => {}
                        None => {
                            colors.insert(x, want);
                        }
                    }
                    let mut t = [p, q, x];
                    t.sort_unstable();
                    if visited.insert(t) {
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    if let Some(v) = g.vertices().find(|v| !colors.contains_key(v)) {
        return Err(CoreError::PreconditionViolated(format!("vertex {v} lies in no triangle")));
    }
    let coloring = Coloring { colors };
    if let Some((a, _)) = g.edges().find(|&(a, b)| coloring.get(a) == coloring.get(b)) {
        return Err(CoreError::ColoringConflict(a));
    }
    Ok(coloring)
}

/// Boundary of a disc as the edges lying in exactly one triangle, chained
/// into a single cycle starting at its least vertex.
pub fn boundary_cycle(g: &Graph) -> Result<Vec<Vertex>> {
    let edges: Vec<Edge> = g.edges().filter(|&(a, b)| g.common_neighbors(a, b).len() == 1).collect();
    let not_a_ball = || CoreError::NotABall("boundary is not a single cycle".into());
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.is_empty() || adj.values().any(|n| n.len() != 2) {
        return Err(not_a_ball());
    }
    let start = *adj.keys().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0].min(adj[&start][1]);
    while cur != start {
        cycle.push(cur);
        let n = &adj[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != adj.len() {
        return Err(not_a_ball());
    }
    Ok(cycle)
}

/// Least cyclic period of the colors read along the boundary cycle.
pub fn boundary_period(g: &Graph, c: &Coloring) -> Result<usize> {
    let cycle = boundary_cycle(g)?;
    let seq: Vec<u8> = cycle
        .iter()
        .map(|&v| c.get(v).ok_or(CoreError::UnknownVertex(v)))
        .collect::<Result<_>>()?;
    let n = seq.len();
    Ok((1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| seq[i] == seq[(i + p) % n]))
        .unwrap_or(n))
}

/// False exactly when the graph has two odd vertices and they are adjacent.
pub fn fisk_adjacency_check(g: &Graph) -> Result<bool> {
    if classify_surface(g).surface_type != SurfaceType::Closed2Graph {
        return Err(CoreError::NotClosed2Graph);
    }
    let odd: Vec<Vertex> = g.odd_vertices().into_iter().collect();
    Ok(!(odd.len() == 2 && g.has_edge(odd[0], odd[1])))
}

/// Edges of the coloring that join equal colors; empty for a proper coloring.
pub fn monochromatic_edges(g: &Graph, c: &Coloring) -> Vec<Edge> {
    g.edges()
        .filter(|&(a, b)| c.get(a) == c.get(b))
        .map(|(a, b)| edge(a, b))
        .collect()
}
