//! Bounded search for short refinement sequences with a prescribed parity
//! effect.
//!
//! Iterative deepening over sequences of allowed refinements inside a vertex
//! region (new vertices always belong to it). A refinement changes the number
//! of mismatched parities by -2, 0 or +2, so half the mismatch count is an
//! admissible bound on the moves still needed. Consecutive independent moves
//! are only tried in increasing edge order.

use std::collections::BTreeSet;

use crate::graph::{edge, Edge, Graph, Vertex};
use crate::refine::{refine_in_place, RefinementMove};

use super::{allowed, apexes, unrefine_in_place, RefinementLog};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum SearchOutcome {
    Found(Vec<RefinementMove>),
    /// Every sequence up to the depth bound was examined.
    Exhausted,
    NodeLimit,
}

#[derive(Clone, Debug)]
pub(crate) struct ParitySearch<'a> {
    pub boundary: &'a BTreeSet<Vertex>,
    pub region: BTreeSet<Vertex>,
    pub target_odd: BTreeSet<Vertex>,
    /// Edges that must not be refined.
    pub forbidden: BTreeSet<Edge>,
    pub max_depth: usize,
    pub node_limit: usize,
}

struct Dfs<'a> {
    boundary: &'a BTreeSet<Vertex>,
    region: &'a BTreeSet<Vertex>,
    forbidden: &'a BTreeSet<Edge>,
    base_max: Vertex,
    nodes: usize,
    node_limit: usize,
    path: Vec<RefinementMove>,
}

enum Step {
    Found,
    Failed,
    Limit,
}

impl<'a> Dfs<'a> {
    fn in_region(&self, v: Vertex) -> bool {
        v > self.base_max || self.region.contains(&v)
    }

    fn usable(&self, e: Edge) -> bool {
        allowed(self.boundary, e)
            && self.in_region(e.0)
            && self.in_region(e.1)
            && !self.forbidden.contains(&e)
    }

    /// Moves whose apexes include a mismatched vertex, annihilations first,
    /// followed by every other usable edge when `with_creations` is set.
    fn candidates(&self, g: &Graph, mismatch: &BTreeSet<Vertex>, with_creations: bool) -> Vec<Edge> {
        let mut annihilate = BTreeSet::new();
        let mut shift = BTreeSet::new();
        for &m in mismatch {
            let Ok(nbrs) = g.neighbors(m) else { continue };
            for &z1 in nbrs {
                for &z2 in nbrs.range(z1 + 1..) {
                    let e = edge(z1, z2);
                    if !g.has_edge(z1, z2) || !self.usable(e) {
                        continue;
                    }
                    if let Some((y, o)) = apexes(g, e) {
                        let other = if y == m { o } else { y };
                        if mismatch.contains(&other) {
                            annihilate.insert(e);
                        } else {
                            shift.insert(e);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Edge> = annihilate.iter().copied().collect();
        out.extend(shift.iter().copied());
        if with_creations {
            let seen: BTreeSet<Edge> = annihilate.union(&shift).copied().collect();
            out.extend(
                g.edges()
                    .filter(|&e| self.usable(e) && !seen.contains(&e) && apexes(g, e).is_some()),
            );
        }
        out
    }

    fn independent(g: &Graph, last: &RefinementMove, e: Edge) -> bool {
        let c = last.new_vertex;
        if e.0 == c || e.1 == c || e == last.refined_edge {
            return false;
        }
        let mut touched: BTreeSet<Vertex> = last.linked_neighbors.clone();
        touched.extend([last.refined_edge.0, last.refined_edge.1]);
        if touched.contains(&e.0) && touched.contains(&e.1) {
            return false;
        }
        let mut other: BTreeSet<Vertex> = g.common_neighbors(e.0, e.1);
        other.remove(&c);
        other.extend([e.0, e.1]);
        !(other.contains(&last.refined_edge.0) && other.contains(&last.refined_edge.1))
    }

    fn run(&mut self, g: &mut Graph, mismatch: &mut BTreeSet<Vertex>, depth_left: usize) -> Step {
        if mismatch.is_empty() {
            return Step::Found;
        }
        if mismatch.len() / 2 > depth_left {
            return Step::Failed;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Step::Limit;
        }
        let slack = depth_left - mismatch.len() / 2;
        let moves = self.candidates(g, mismatch, slack >= 2);
        let mut limited = false;
        for e in moves {
            if let Some(last) = self.path.last() {
                if e < last.refined_edge && Self::independent(g, last, e) {
                    continue;
                }
            }
            let (y, o) = apexes(g, e).expect("candidates have two apexes");
            let flips = [y, o];
            let gain: i64 = flips.iter().map(|v| if mismatch.contains(v) { -1 } else { 1 }).sum();
            let after = (mismatch.len() as i64 + gain) as usize;
            if after / 2 > depth_left - 1 {
                continue;
            }
            let mv = refine_in_place(g, e).expect("candidate is an edge");
            for v in flips {
                if !mismatch.remove(&v) {
                    mismatch.insert(v);
                }
            }
            self.path.push(mv);
            match self.run(g, mismatch, depth_left - 1) {
                Step::Found => return Step::Found,
                Step::Limit => limited = true,
                Step::Failed => {}
            }
            let mv = self.path.pop().unwrap();
            for v in flips {
                if !mismatch.remove(&v) {
                    mismatch.insert(v);
                }
            }
            unrefine_in_place(g, &mv);
            if limited {
                return Step::Limit;
            }
        }
        Step::Failed
    }
}

impl ParitySearch<'_> {
    pub fn run(&self, g: &Graph) -> SearchOutcome {
        let odd = g.odd_vertices();
        let mismatch: BTreeSet<Vertex> = odd.symmetric_difference(&self.target_odd).copied().collect();
        let mut dfs = Dfs {
            boundary: self.boundary,
            region: &self.region,
            forbidden: &self.forbidden,
            base_max: g.max_vertex().unwrap_or(0),
            nodes: 0,
            node_limit: self.node_limit,
            path: Vec::new(),
        };
        for depth in 0..=self.max_depth {
            let mut work = g.clone();
            let mut m = mismatch.clone();
            match dfs.run(&mut work, &mut m, depth) {
                Step::Found => return SearchOutcome::Found(dfs.path),
                Step::Limit => return SearchOutcome::NodeLimit,
                Step::Failed => {}
            }
        }
        SearchOutcome::Exhausted
    }
}

/// Vertices within graph distance `radius` of any vertex in `centers`.
pub(crate) fn neighborhood(g: &Graph, centers: &[Vertex], radius: usize) -> BTreeSet<Vertex> {
    let mut out = BTreeSet::new();
    for &c in centers {
        if let Ok(d) = g.distances_from(c) {
            out.extend(d.into_iter().filter(|&(_, k)| k <= radius).map(|(v, _)| v));
        }
    }
    out
}

pub(crate) const DEFAULT_NODE_LIMIT: usize = 2_000_000;

/// Searches for at most `depth` interior-edge refinements near `p` and `q`
/// that clear both, when they are the only odd vertices of a disc.
pub fn local_finisher(g: &Graph, p: Vertex, q: Vertex, depth: usize) -> Option<(Graph, RefinementLog)> {
    let report = crate::surface::classify_surface(g);
    let odd = g.odd_vertices();
    if odd.is_empty() {
        return Some((g.clone(), RefinementLog::default()));
    }
    if p == q || odd != BTreeSet::from([p, q]) {
        return None;
    }
    let boundary = report.boundary_vertices();
    let search = ParitySearch {
        boundary: &boundary,
        region: neighborhood(g, &[p, q], 2),
        target_odd: BTreeSet::new(),
        forbidden: BTreeSet::new(),
        max_depth: depth,
        node_limit: DEFAULT_NODE_LIMIT,
    };
    match search.run(g) {
        SearchOutcome::Found(moves) => {
            let log = RefinementLog { moves };
            let out = log.replay(g).ok()?;
            out.is_eulerian().then_some((out, log))
        }
        _ => None,
    }
}
