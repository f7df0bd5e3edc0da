//! Geodesic flow and billiards on surfaces whose interior vertices have even
//! degree.
//!
//! The phase space is the set of directed edges. A ray `(x, y)` arriving at an
//! interior vertex `y` leaves towards the antipode of `x` on the even cycle
//! `S(y)`. At a boundary vertex, `S(y)` is a path `p_1 .. p_m` and the ray
//! coming from `p_i` is mirrored to `p_{m+1-i}`; a perpendicular hit (`m` odd,
//! `i` the middle index) sends the ray straight back.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{edge, Edge, Graph, LinkShape, Vertex};
use crate::surface::classify_surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Vertex; 2]", into = "[Vertex; 2]")]
pub struct DirectedEdge {
    pub from: Vertex,
    pub to: Vertex,
}

impl DirectedEdge {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        DirectedEdge { from, to }
    }

    pub fn reversed(self) -> Self {
        DirectedEdge::new(self.to, self.from)
    }

    pub fn undirected(self) -> Edge {
        edge(self.from, self.to)
    }
}

impl From<[Vertex; 2]> for DirectedEdge {
    fn from([from, to]: [Vertex; 2]) -> Self {
        DirectedEdge::new(from, to)
    }
}

impl From<DirectedEdge> for [Vertex; 2] {
    fn from(d: DirectedEdge) -> Self {
        [d.from, d.to]
    }
}

#[derive(Clone, Debug)]
enum Reflector {
    /// Even cycle; a ray entering from `order[i]` leaves to `order[i + len/2]`.
    Antipodal(Vec<Vertex>),
    /// Path; a ray entering from `order[i]` leaves to `order[len - 1 - i]`.
    Mirror(Vec<Vertex>),
    OddInterior,
    Invalid,
}

impl Reflector {
    fn of(g: &Graph, y: Vertex) -> Result<Reflector> {
        let sphere = g.unit_sphere(y)?;
        Ok(match sphere.link_shape() {
            Some(LinkShape::Cycle(c)) if c.len() >= 4 && c.len() % 2 == 0 => Reflector::Antipodal(c),
            Some(LinkShape::Cycle(c)) if c.len() >= 4 => Reflector::OddInterior,
            Some(LinkShape::Path(p)) if p.len() >= 3 => Reflector::Mirror(p),
            _ => Reflector::Invalid,
        })
    }

    fn reflect(&self, y: Vertex, x: Vertex) -> Result<Vertex> {
        let (order, out): (_, fn(usize, usize) -> usize) = match self {
            Reflector::Antipodal(c) => (c, |i: usize, n: usize| (i + n / 2) % n),
            Reflector::Mirror(p) => (p, |i: usize, n: usize| n - 1 - i),
            Reflector::OddInterior => return Err(CoreError::OddInteriorVertex(y)),
            Reflector::Invalid => return Err(CoreError::NotASurface),
        };
        let i = order
            .iter()
            .position(|&v| v == x)
            .ok_or(CoreError::NotAnEdge(edge(x, y)))?;
        Ok(order[out(i, order.len())])
    }
}

/// One step of the flow from the directed edge `de`.
pub fn geodesic_step(g: &Graph, de: DirectedEdge) -> Result<DirectedEdge> {
    g.require_edge(de.from, de.to)?;
    let z = Reflector::of(g, de.to)?.reflect(de.to, de.from)?;
    Ok(DirectedEdge::new(de.to, z))
}

/// The flow map of a whole graph, with every vertex's reflection rule
/// precomputed. Construction fails if the flow is not defined everywhere.
#[derive(Clone, Debug)]
pub struct Flow<'g> {
    graph: &'g Graph,
    rules: HashMap<Vertex, Reflector>,
}

impl<'g> Flow<'g> {
    pub fn new(graph: &'g Graph) -> Result<Flow<'g>> {
        let mut rules = HashMap::new();
        for v in graph.vertices() {
            let r = Reflector::of(graph, v)?;
            match r {
                Reflector::OddInterior => return Err(CoreError::OddInteriorVertex(v)),
                Reflector::Invalid => return Err(CoreError::NotASurface),
                _ => {}
            }
            rules.insert(v, r);
        }
        Ok(Flow { graph, rules })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn step(&self, de: DirectedEdge) -> Result<DirectedEdge> {
        let rule = self.rules.get(&de.to).ok_or(CoreError::UnknownVertex(de.to))?;
        Ok(DirectedEdge::new(de.to, rule.reflect(de.to, de.from)?))
    }

    /// Orbit of `start` up to closure, without the repeated start state.
    pub fn orbit(&self, start: DirectedEdge) -> Result<Vec<DirectedEdge>> {
        self.graph.require_edge(start.from, start.to)?;
        let mut states = vec![start];
        let mut cur = self.step(start)?;
        while cur != start {
            states.push(cur);
            cur = self.step(cur)?;
        }
        Ok(states)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<DirectedEdge>,
    pub closed: bool,
}

/// Iterates the flow from `start` until the start state recurs or
/// `max_steps` steps have been taken.
pub fn trajectory(g: &Graph, start: DirectedEdge, max_steps: usize) -> Result<Trajectory> {
    g.require_edge(start.from, start.to)?;
    let flow = Flow::new(g)?;
    let mut states = vec![start];
    let mut cur = start;
    for _ in 0..max_steps {
        let next = flow.step(cur)?;
        if next == start {
            return Ok(Trajectory { states, closed: true });
        }
        states.push(next);
        cur = next;
    }
    Ok(Trajectory { states, closed: false })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "edges")]
    pub undirected_edges: BTreeSet<Edge>,
    #[serde(rename = "boundary")]
    pub is_boundary_cycle: bool,
    #[serde(rename = "undirected")]
    pub is_undirected_orbit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErgodicDecomposition {
    pub components: Vec<Component>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErgodicMode {
    ClosedSurface,
    Billiard,
}

/// Partitions the edge set into flow orbits. Seeds are taken in ascending
/// edge order and oriented from the smaller id.
pub fn ergodic_components(g: &Graph) -> Result<ErgodicDecomposition> {
    let flow = Flow::new(g)?;
    let report = classify_surface(g);
    let boundary_cycles: Vec<BTreeSet<Edge>> = report
        .boundary_cycles
        .iter()
        .map(|c| (0..c.len()).map(|i| edge(c[i], c[(i + 1) % c.len()])).collect())
        .collect();
    let mut pool: BTreeSet<Edge> = g.edges().collect();
    let mut components = Vec::new();
    while let Some(&(a, b)) = pool.iter().next() {
        let orbit = flow.orbit(DirectedEdge::new(a, b))?;
        let directed: BTreeSet<DirectedEdge> = orbit.iter().copied().collect();
        let undirected: BTreeSet<Edge> = orbit.iter().map(|d| d.undirected()).collect();
        let is_undirected_orbit = orbit.iter().any(|d| directed.contains(&d.reversed()));
        let is_boundary_cycle = boundary_cycles.contains(&undirected);
        for e in &undirected {
            pool.remove(e);
        }
        components.push(Component {
            undirected_edges: undirected,
            is_boundary_cycle,
            is_undirected_orbit,
        });
    }
    Ok(ErgodicDecomposition { components })
}

pub fn is_ergodic(g: &Graph, mode: ErgodicMode) -> Result<bool> {
    let d = ergodic_components(g)?;
    Ok(match mode {
        ErgodicMode::ClosedSurface => d.components.len() == 1,
        ErgodicMode::Billiard => d.components.iter().filter(|c| !c.is_boundary_cycle).count() == 1,
    })
}

/// Number of orbits that traverse some edge in both directions.
pub fn undirected_orbit_count(g: &Graph) -> Result<usize> {
    Ok(ergodic_components(g)?
        .components
        .iter()
        .filter(|c| c.is_undirected_orbit)
        .count())
}

/// Fewest flow steps needed to reach every vertex from `x`, starting on any
/// directed edge out of `x`. Unreachable vertices are absent.
pub fn geodesic_distances_from(g: &Graph, x: Vertex) -> Result<BTreeMap<Vertex, usize>> {
    let flow = Flow::new(g)?;
    let mut dist = BTreeMap::from([(x, 0usize)]);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &n in g.neighbors(x)? {
        let d = DirectedEdge::new(x, n);
        seen.insert(d);
        queue.push_back((d, 1usize));
    }
    while let Some((state, steps)) = queue.pop_front() {
        dist.entry(state.to).or_insert(steps);
        let next = flow.step(state)?;
        if seen.insert(next) {
            queue.push_back((next, steps + 1));
        }
    }
    Ok(dist)
}

pub fn geodesic_distance(g: &Graph, x: Vertex, y: Vertex) -> Result<Option<usize>> {
    g.neighbors(y)?;
    Ok(geodesic_distances_from(g, x)?.get(&y).copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Fixture};
    use crate::refine::edge_refine;

    fn oct() -> Graph {
        generate(&Fixture::Octahedron).unwrap()
    }

    #[test]
    fn octahedron_step_goes_to_antipode() {
        // S(2) = 1-3-6-4-1, so the antipode of 1 is 6.
        assert_eq!(
            geodesic_step(&oct(), DirectedEdge::new(1, 2)).unwrap(),
            DirectedEdge::new(2, 6)
        );
    }

    #[test]
    fn step_errors() {
        let ico = generate(&Fixture::Icosahedron).unwrap();
        assert_eq!(
            geodesic_step(&ico, DirectedEdge::new(1, 2)),
            Err(CoreError::OddInteriorVertex(2))
        );
        assert_eq!(
            geodesic_step(&oct(), DirectedEdge::new(1, 6)),
            Err(CoreError::NotAnEdge((1, 6)))
        );
    }

    #[test]
    fn boundary_edge_reflects_along_boundary() {
        let b = generate(&Fixture::BunimovichPaper).unwrap();
        let report = classify_surface(&b);
        let cycle = &report.boundary_cycles[0];
        let n = cycle.len();
        for i in 0..n {
            let d = DirectedEdge::new(cycle[i], cycle[(i + 1) % n]);
            let next = geodesic_step(&b, d).unwrap();
            assert_eq!(next, DirectedEdge::new(cycle[(i + 1) % n], cycle[(i + 2) % n]));
        }
    }

    #[test]
    fn perpendicular_hit_backtracks() {
        // W_6 rim vertices have S = P_3; the hub is the middle of the path.
        let w = generate(&Fixture::Wheel(6)).unwrap();
        let next = geodesic_step(&w, DirectedEdge::new(0, 1)).unwrap();
        assert_eq!(next, DirectedEdge::new(1, 0));
    }

    #[test]
    fn octahedron_trajectory() {
        let t = trajectory(&oct(), DirectedEdge::new(1, 2), 100).unwrap();
        assert!(t.closed);
        assert_eq!(t.states.len(), 4);
        let t0 = trajectory(&oct(), DirectedEdge::new(1, 2), 0).unwrap();
        assert_eq!(t0, Trajectory { states: vec![DirectedEdge::new(1, 2)], closed: false });
    }

    #[test]
    fn octahedron_components() {
        let d = ergodic_components(&oct()).unwrap();
        assert_eq!(d.components.len(), 3);
        assert!(d.components.iter().all(|c| c.undirected_edges.len() == 4));
        assert!(!is_ergodic(&oct(), ErgodicMode::ClosedSurface).unwrap());
        assert_eq!(undirected_orbit_count(&oct()).unwrap(), 0);
    }

    #[test]
    fn octahedron_distances() {
        assert_eq!(geodesic_distance(&oct(), 1, 2).unwrap(), Some(1));
        assert_eq!(geodesic_distance(&oct(), 1, 6).unwrap(), Some(2));
        assert_eq!(geodesic_distance(&oct(), 1, 1).unwrap(), Some(0));
    }

    #[test]
    fn flow_undefined_on_odd_interior() {
        let ico = generate(&Fixture::Icosahedron).unwrap();
        assert_eq!(ergodic_components(&ico), Err(CoreError::OddInteriorVertex(1)));
        let (h, _) = edge_refine(&oct(), (1, 2)).unwrap();
        assert!(matches!(is_ergodic(&h, ErgodicMode::ClosedSurface), Err(CoreError::OddInteriorVertex(_))));
    }

    #[test]
    fn decomposition_json_shape() {
        let d = ergodic_components(&oct()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        let c0 = &v["components"][0];
        assert_eq!(c0["edges"].as_array().unwrap().len(), 4);
        assert_eq!(c0["boundary"], false);
        assert_eq!(c0["undirected"], false);
    }
}
