//! Interior-edge eulerization of discs.
//!
//! Particles (odd vertices) are paired along shortest routes in the jump
//! graph and annihilated jump by jump. A route is re-planned as soon as one of
//! its witness edges has been changed by an earlier jump. When no two
//! particles are connected in the jump graph, a bounded local search clears
//! the closest pair; if that fails the neighborhood is widened with double
//! refinements, which keep every parity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{edge, Edge, Graph, Vertex};
use crate::refine::refine_in_place;
use crate::surface::{classify_surface, SurfaceType};

use super::local::{neighborhood, ParitySearch, SearchOutcome, DEFAULT_NODE_LIMIT};
use super::{allowed, jump_graph, Jump, RefinementLog};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all_fields = "camelCase")]
pub enum BallEulerizeResult {
    Success {
        graph: Graph,
        log: RefinementLog,
    },
    RefusedBoundaryNotMod3 {
        boundary_length: usize,
    },
    BudgetExhausted {
        best_graph: Graph,
        log: RefinementLog,
        remaining_odd_count: usize,
    },
}

impl BallEulerizeResult {
    pub fn is_success(&self) -> bool {
        matches!(self, BallEulerizeResult::Success { .. })
    }
}

/// `10·|E|²` for the input graph.
pub fn default_ball_budget(g: &Graph) -> usize {
    10 * g.edge_count().pow(2)
}

/// Boundary cycle of a disc, or `NotABall`.
fn disc_boundary(g: &Graph) -> Result<Vec<Vertex>> {
    let report = classify_surface(g);
    if report.surface_type != SurfaceType::TwoGraphWithBoundary {
        return Err(CoreError::NotABall(format!("surface type is {:?}", report.surface_type)));
    }
    if report.boundary_cycles.len() != 1 {
        return Err(CoreError::NotABall(format!(
            "{} boundary cycles",
            report.boundary_cycles.len()
        )));
    }
    if report.euler_characteristic != 1 || !g.is_connected() {
        return Err(CoreError::NotABall("not a disc".into()));
    }
    Ok(report.boundary_cycles[0].clone())
}

struct Solver {
    g: Graph,
    boundary: BTreeSet<Vertex>,
    log: RefinementLog,
    budget: usize,
    rng: ChaCha8Rng,
}

impl Solver {
    fn refine(&mut self, e: Edge) -> Result<()> {
        debug_assert!(allowed(&self.boundary, e));
        let mv = refine_in_place(&mut self.g, e)?;
        self.log.moves.push(mv);
        Ok(())
    }

    fn exhausted(&self) -> bool {
        self.log.len() >= self.budget
    }

    fn shuffled_odd(&mut self) -> Vec<Vertex> {
        let mut odd: Vec<Vertex> = self.g.odd_vertices().into_iter().collect();
        odd.shuffle(&mut self.rng);
        odd
    }

    /// Shortest jump route between two distinct particles.
    fn closest_route(&mut self) -> Option<Vec<Jump>> {
        let odd = self.shuffled_odd();
        let oddset: BTreeSet<Vertex> = odd.iter().copied().collect();
        let jumps = jump_graph(&self.g, &self.boundary);
        let mut best: Option<Vec<Jump>> = None;
        for &p in &odd {
            let limit = best.as_ref().map_or(usize::MAX, |b| b.len());
            if let Some(route) = bfs_route(&jumps, p, |v| v != p && oddset.contains(&v), limit) {
                if best.as_ref().is_none_or(|b| route.len() < b.len()) {
                    best = Some(route);
                }
            }
        }
        best
    }

    /// Executes jumps while their witnesses are intact. Returns whether the
    /// whole route ran.
    fn follow(&mut self, route: &[Jump]) -> Result<bool> {
        for jump in route {
            if self.exhausted() || !jump.is_valid(&self.g) {
                return Ok(false);
            }
            self.refine(jump.edge)?;
        }
        Ok(true)
    }

    /// Local search for the pairs of particles in order of graph distance.
    fn finish_locally(&mut self, radius: usize, depth: usize) -> Result<bool> {
        let odd = self.shuffled_odd();
        let mut pairs = Vec::new();
        for (i, &p) in odd.iter().enumerate() {
            let dist = self.g.distances_from(p)?;
            for &q in &odd[i + 1..] {
                if let Some(&d) = dist.get(&q) {
                    pairs.push((d, pairs.len(), p, q));
                }
            }
        }
        pairs.sort_unstable();
        let current = self.g.odd_vertices();
        for (_, _, p, q) in pairs {
            let mut target = current.clone();
            target.remove(&p);
            target.remove(&q);
            let search = ParitySearch {
                boundary: &self.boundary,
                region: neighborhood(&self.g, &[p, q], radius),
                target_odd: target.clone(),
                forbidden: BTreeSet::new(),
                max_depth: depth.min(self.budget - self.log.len()),
                node_limit: DEFAULT_NODE_LIMIT / 4,
            };
            if let SearchOutcome::Found(moves) = search.run(&self.g) {
                for mv in moves {
                    self.refine(mv.refined_edge)?;
                }
                debug_assert_eq!(self.g.odd_vertices(), target);
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Double refinement of every allowed edge at the particles, as two
    /// elementary refinements each.
    fn widen(&mut self) -> Result<bool> {
        let odd = self.g.odd_vertices();
        let mut widened = false;
        for p in odd {
            let spokes: Vec<Edge> = self
                .g
                .neighbors(p)?
                .iter()
                .map(|&x| edge(p, x))
                .filter(|&e| allowed(&self.boundary, e))
                .collect();
            for (a, b) in spokes {
                if self.log.len() + 2 > self.budget {
                    return Ok(widened);
                }
                if !self.g.has_edge(a, b) || super::apexes(&self.g, (a, b)).is_none() {
                    continue;
                }
                let c = self.g.fresh_vertex();
                self.refine((a, b))?;
                self.refine(edge(c, b))?;
                widened = true;
            }
        }
        Ok(widened)
    }

    fn solve(&mut self) -> Result<()> {
        let mut widenings = 0;
        while !self.g.is_eulerian() && !self.exhausted() {
            if let Some(route) = self.closest_route() {
                self.follow(&route)?;
                continue;
            }
            if self.finish_locally(2, 6)? {
                continue;
            }
            if widenings >= 3 || !self.widen()? {
                break;
            }
            widenings += 1;
        }
        Ok(())
    }
}

/// Breadth-first search in the jump graph from `start` to the first vertex
/// satisfying `goal`, with at most `limit` jumps.
fn bfs_route(
    jumps: &BTreeMap<Vertex, Vec<(Vertex, Edge)>>,
    start: Vertex,
    goal: impl Fn(Vertex) -> bool,
    limit: usize,
) -> Option<Vec<Jump>> {
    let mut parent: BTreeMap<Vertex, Jump> = BTreeMap::new();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if v != start && goal(v) {
            let mut route = Vec::new();
            let mut cur = v;
            while cur != start {
                let j = parent[&cur];
                route.push(j);
                cur = j.from;
            }
            route.reverse();
            return Some(route);
        }
        if d >= limit {
            continue;
        }
        for &(w, e) in jumps.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                parent.insert(w, Jump { from: v, to: w, edge: e });
                queue.push_back((w, d + 1));
            }
        }
    }
    None
}

/// Makes a disc Eulerian with refinements of interior edges only, or refuses
/// when the boundary length is not a multiple of 3.
pub fn eulerize_ball(g: &Graph, seed: u64, budget: usize) -> Result<BallEulerizeResult> {
    let cycle = disc_boundary(g)?;
    if cycle.len() % 3 != 0 {
        return Ok(BallEulerizeResult::RefusedBoundaryNotMod3 { boundary_length: cycle.len() });
    }
    let mut solver = Solver {
        g: g.clone(),
        boundary: cycle.iter().copied().collect(),
        log: RefinementLog::default(),
        budget,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    solver.solve()?;
    let Solver { g: out, log, .. } = solver;
    if out.is_eulerian() {
        Ok(BallEulerizeResult::Success { graph: out, log })
    } else {
        let remaining_odd_count = out.odd_vertices().len();
        Ok(BallEulerizeResult::BudgetExhausted { best_graph: out, log, remaining_odd_count })
    }
}

/// Jump route from `route_from` to `route_to` inside the closed disc around
/// `center`, kept only if it produces exactly `target`.
fn local_route(
    g: &Graph,
    boundary: &BTreeSet<Vertex>,
    center: Vertex,
    route_from: Vertex,
    route_to: Vertex,
    target: &BTreeSet<Vertex>,
) -> Result<Option<(Graph, RefinementLog)>> {
    let region = neighborhood(g, &[center], 1);
    // Direct route inside the disc around the center.
    let local_jumps: BTreeMap<Vertex, Vec<(Vertex, Edge)>> = jump_graph(g, boundary)
        .into_iter()
        .filter(|(v, _)| region.contains(v))
        .map(|(v, js)| {
            let js = js
                .into_iter()
                .filter(|&(w, (a, b))| region.contains(&w) && region.contains(&a) && region.contains(&b))
                .collect();
            (v, js)
        })
        .collect();
    if let Some(route) = bfs_route(&local_jumps, route_from, |v| v == route_to, usize::MAX) {
        let mut h = g.clone();
        let mut log = RefinementLog::default();
        let mut ok = true;
        for j in &route {
            if !j.is_valid(&h) {
                ok = false;
                break;
            }
            log.moves.push(refine_in_place(&mut h, j.edge)?);
        }
        if ok && &h.odd_vertices() == target {
            return Ok(Some((h, log)));
        }
    }
    Ok(None)
}

/// Bounded parity search in growing discs around `center`.
fn local_search(
    g: &Graph,
    boundary: &BTreeSet<Vertex>,
    center: Vertex,
    target: &BTreeSet<Vertex>,
) -> Result<(Graph, RefinementLog)> {
    for radius in [1, 2] {
        let search = ParitySearch {
            boundary,
            region: neighborhood(g, &[center], radius),
            target_odd: target.clone(),
            forbidden: BTreeSet::new(),
            max_depth: 6,
            node_limit: DEFAULT_NODE_LIMIT,
        };
        if let SearchOutcome::Found(moves) = search.run(g) {
            let log = RefinementLog { moves };
            let h = log.replay(g)?;
            if &h.odd_vertices() == target {
                return Ok((h, log));
            }
        }
    }
    Err(CoreError::LocalGeometryTooNarrow(center))
}

fn require_ball(g: &Graph) -> Result<BTreeSet<Vertex>> {
    let report = classify_surface(g);
    if report.surface_type != SurfaceType::TwoGraphWithBoundary {
        return Err(CoreError::PreconditionViolated("not a surface with boundary".into()));
    }
    Ok(report.boundary_vertices())
}

fn is_odd(g: &Graph, v: Vertex) -> Result<bool> {
    Ok(g.degree(v)? % 2 == 1)
}

/// Jumps across the spokes at `b`.
fn spoke_jumps(g: &Graph, b: Vertex) -> Result<BTreeMap<Vertex, Vec<(Vertex, Edge)>>> {
    let mut jumps: BTreeMap<Vertex, Vec<(Vertex, Edge)>> = BTreeMap::new();
    for &x in g.neighbors(b)? {
        if let Some((y, o)) = super::apexes(g, edge(b, x)) {
            jumps.entry(y).or_default().push((o, edge(b, x)));
            jumps.entry(o).or_default().push((y, edge(b, x)));
        }
    }
    Ok(jumps)
}

/// The wheel construction. With `S(b) = x_0 .. x_{2k-1}` and `a = x_0`,
/// refining the spokes `(b, x_2), (b, x_4), .., (b, x_{2k-2})` flips exactly
/// `x_1` and `x_{2k-1}`, the common neighbors of `a` and `b`. Refining
/// `(a, b)` into `c` flips them back, and refining `(x_1, c)` flips `a` and
/// `b`. Spokes at odd positions are left intact.
fn switch_by_wheel(g: &Graph, a: Vertex, b: Vertex) -> Result<Option<(Graph, RefinementLog)>> {
    let Some((p, q)) = super::apexes(g, edge(a, b)) else { return Ok(None) };
    let mut h = g.clone();
    let mut log = RefinementLog::default();
    let mut jumps = spoke_jumps(g, b)?;
    for js in jumps.values_mut() {
        js.retain(|&(_, e)| e != edge(a, b));
    }
    let Some(route) = bfs_route(&jumps, p, |v| v == q, usize::MAX) else { return Ok(None) };
    for j in route {
        if !j.is_valid(&h) {
            return Ok(None);
        }
        log.moves.push(refine_in_place(&mut h, j.edge)?);
    }
    let mv = refine_in_place(&mut h, edge(a, b))?;
    let c = mv.new_vertex;
    log.moves.push(mv);
    log.moves.push(refine_in_place(&mut h, edge(p, c))?);
    Ok(Some((h, log)))
}

/// Moves the oddness of `a` to its even interior neighbor `b`, cutting only
/// in the wheel around `b`.
pub fn switch_parity(g: &Graph, a: Vertex, b: Vertex) -> Result<(Graph, RefinementLog)> {
    let boundary = require_ball(g)?;
    if !g.has_edge(a, b) {
        return Err(CoreError::PreconditionViolated(format!("{a} and {b} are not adjacent")));
    }
    if !is_odd(g, a)? || is_odd(g, b)? || boundary.contains(&b) {
        return Err(CoreError::PreconditionViolated(
            "needs an odd vertex and an even interior neighbor".into(),
        ));
    }
    let mut target = g.odd_vertices();
    target.remove(&a);
    target.insert(b);
    if let Some((h, log)) = switch_by_wheel(g, a, b)? {
        if h.odd_vertices() == target {
            return Ok((h, log));
        }
    }
    local_search(g, &boundary, b, &target)
}

/// Clears the odd neighbors `a` and `b` of the odd vertex `c`, cutting only
/// inside the disc around `c`.
pub fn reduce_triplet(g: &Graph, c: Vertex, a: Vertex, b: Vertex) -> Result<(Graph, RefinementLog)> {
    let boundary = require_ball(g)?;
    if a == b || !g.has_edge(c, a) || !g.has_edge(c, b) {
        return Err(CoreError::PreconditionViolated("a and b must be distinct neighbors of c".into()));
    }
    for v in [a, b, c] {
        if !is_odd(g, v)? {
            return Err(CoreError::PreconditionViolated(format!("vertex {v} is even")));
        }
    }
    let mut target = g.odd_vertices();
    target.remove(&a);
    target.remove(&b);
    if let Some(done) = local_route(g, &boundary, c, a, b, &target)? {
        return Ok(done);
    }
    local_search(g, &boundary, c, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Fixture};

    fn ball(n: u32) -> Graph {
        generate(&Fixture::Wheel(n)).unwrap()
    }

    #[test]
    fn refuses_bad_boundary() {
        for n in [10, 11] {
            let r = eulerize_ball(&ball(n), 0, 1000).unwrap();
            assert_eq!(r, BallEulerizeResult::RefusedBoundaryNotMod3 { boundary_length: n as usize });
        }
    }

    #[test]
    fn rejects_non_discs() {
        let a = generate(&Fixture::Annulus(6)).unwrap();
        assert!(matches!(eulerize_ball(&a, 0, 10), Err(CoreError::NotABall(_))));
        let o = generate(&Fixture::Octahedron).unwrap();
        assert!(matches!(eulerize_ball(&o, 0, 10), Err(CoreError::NotABall(_))));
    }

    #[test]
    fn wheels_succeed() {
        for n in [6, 9, 12, 15] {
            let w = ball(n);
            let r = eulerize_ball(&w, 0, default_ball_budget(&w)).unwrap();
            let BallEulerizeResult::Success { graph, log } = r else { panic!("W_{n}: {r:?}") };
            assert!(graph.is_eulerian());
            assert_eq!(log.replay(&w).unwrap(), graph);
        }
    }

    fn assert_parity_effect(before: &Graph, after: &Graph, flipped: &[Vertex]) {
        let mut want = before.odd_vertices();
        for v in flipped {
            if !want.remove(v) {
                want.insert(*v);
            }
        }
        assert_eq!(after.odd_vertices(), want);
    }

    fn interior_cuts_only(g: &Graph, log: &RefinementLog) {
        let boundary = classify_surface(g).boundary_vertices();
        let mut h = g.clone();
        for mv in &log.moves {
            assert!(allowed(&boundary, mv.refined_edge), "{:?}", mv.refined_edge);
            refine_in_place(&mut h, mv.refined_edge).unwrap();
        }
    }

    #[test]
    fn switch_rim_to_hub() {
        let (w, _) = crate::refine::edge_refine(&ball(8), (0, 1)).unwrap();
        assert_eq!(w.odd_vertices(), BTreeSet::from([1, 3, 4, 5, 6, 7]));
        let (h, log) = switch_parity(&w, 3, 0).unwrap();
        assert_parity_effect(&w, &h, &[3, 0]);
        interior_cuts_only(&w, &log);
        assert_eq!(classify_surface(&h).boundary_cycles, classify_surface(&w).boundary_cycles);
    }

    #[test]
    fn switch_preconditions() {
        let w = ball(8);
        assert!(!matches!(switch_parity(&w, 1, 0), Err(CoreError::PreconditionViolated(_))));
        assert!(matches!(switch_parity(&w, 1, 3), Err(CoreError::PreconditionViolated(_))));
        assert!(matches!(switch_parity(&w, 1, 2), Err(CoreError::PreconditionViolated(_))));
        assert!(matches!(switch_parity(&w, 0, 1), Err(CoreError::PreconditionViolated(_))));
    }

    fn hex_center(g: &Graph) -> Vertex {
        let boundary = classify_surface(g).boundary_vertices();
        g.vertices()
            .max_by_key(|&v| {
                let d = g.distances_from(v).unwrap();
                boundary.iter().map(|b| d[b]).min().unwrap()
            })
            .unwrap()
    }

    /// Vertices at odd positions from `a` in the link cycle of `b`. These
    /// spokes survive `switch_parity(a, b)`.
    fn odd_positions(g: &Graph, b: Vertex, a: Vertex) -> Vec<Vertex> {
        let Some(crate::graph::LinkShape::Cycle(c)) = g.unit_sphere(b).unwrap().link_shape() else {
            panic!("{b} is not interior")
        };
        let i = c.iter().position(|&v| v == a).unwrap();
        (0..c.len()).filter(|k| k % 2 == 1).map(|k| c[(i + k) % c.len()]).collect()
    }

    #[test]
    fn switch_walks_particle_along_path() {
        // Carry the oddness of a boundary corner through seven interior
        // vertices, each step continuing to a spoke the last switch kept.
        let g = generate(&Fixture::HexDisc(3)).unwrap();
        let boundary = classify_surface(&g).boundary_vertices();
        let center = hex_center(&g);
        let d = g.distances_from(center).unwrap();
        let corner = *g.odd_vertices().iter().find(|v| d[v] == 3).unwrap();
        let mut h = g.clone();
        let mut path = vec![corner, *g.neighbors(corner).unwrap().iter().find(|v| d[v] == 2).unwrap()];
        while path.len() < 8 {
            let [a, b] = path[path.len() - 2..] else { unreachable!() };
            let step = odd_positions(&h, b, a)
                .into_iter()
                .filter(|v| d.contains_key(v) && !boundary.contains(v) && !path.contains(v))
                .min_by_key(|v| (d[v], *v))
                .unwrap();
            let (next, log) = switch_parity(&h, a, b).unwrap();
            interior_cuts_only(&h, &log);
            assert_parity_effect(&h, &next, &[a, b]);
            h = next;
            path.push(step);
        }
        let [a, b] = path[path.len() - 2..] else { unreachable!() };
        h = switch_parity(&h, a, b).unwrap().0;
        assert_parity_effect(&g, &h, &[corner, b]);
        assert_eq!(classify_surface(&h).boundary_cycles, classify_surface(&g).boundary_cycles);
    }

    /// Hex disc with odd center `c`, two odd neighbors of `c` and one more
    /// odd vertex further out.
    fn triplet_disc() -> (Graph, Vertex, Vertex, Vertex) {
        let g = generate(&Fixture::HexDisc(3)).unwrap();
        let c = hex_center(&g);
        let link = match g.unit_sphere(c).unwrap().link_shape() {
            Some(crate::graph::LinkShape::Cycle(l)) => l,
            other => panic!("{other:?}"),
        };
        let (g, _) = crate::refine::edge_refine(&g, (c, link[1])).unwrap();
        let (g, _) = crate::refine::edge_refine(&g, edge(link[3], link[4])).unwrap();
        (g, c, link[0], link[2])
    }

    #[test]
    fn triplet_reduces_by_two() {
        let (g, c, a, b) = triplet_disc();
        for v in [c, a, b] {
            assert_eq!(g.degree(v).unwrap() % 2, 1);
        }
        let hex_odd = generate(&Fixture::HexDisc(3)).unwrap().odd_vertices().len();
        assert_eq!(g.odd_vertices().len(), hex_odd + 4);
        let (h, log) = reduce_triplet(&g, c, a, b).unwrap();
        assert_eq!(h.odd_vertices().len(), g.odd_vertices().len() - 2);
        assert_parity_effect(&g, &h, &[a, b]);
        interior_cuts_only(&g, &log);
    }

    #[test]
    fn triplet_preconditions() {
        let (g, c, a, _) = triplet_disc();
        let even = *g.neighbors(c).unwrap().iter().find(|&&v| g.degree(v).unwrap() % 2 == 0).unwrap();
        assert!(matches!(reduce_triplet(&g, c, a, even), Err(CoreError::PreconditionViolated(_))));
        assert!(matches!(reduce_triplet(&g, c, a, a), Err(CoreError::PreconditionViolated(_))));
    }

    #[test]
    fn wheel_nine_boundary_degrees() {
        let w = ball(9);
        let BallEulerizeResult::Success { graph, log } = eulerize_ball(&w, 1, default_ball_budget(&w)).unwrap() else {
            panic!()
        };
        interior_cuts_only(&w, &log);
        let report = classify_surface(&graph);
        assert_eq!(report.boundary_cycles, classify_surface(&w).boundary_cycles);
        for v in report.boundary_vertices() {
            let d = graph.degree(v).unwrap();
            assert!(d >= 4 && d % 2 == 0);
        }
    }

    #[test]
    fn local_fallback_clears_last_pair() {
        let (w, _) = crate::refine::edge_refine(&ball(6), (0, 1)).unwrap();
        let (w, _) = crate::refine::edge_refine(&w, (0, 4)).unwrap();
        let mut solver = Solver {
            g: w.clone(),
            boundary: (1..=6).collect(),
            log: RefinementLog::default(),
            budget: 100,
            rng: ChaCha8Rng::seed_from_u64(0),
        };
        assert!(solver.finish_locally(2, 4).unwrap());
        assert!(solver.g.is_eulerian());
        assert!(!solver.widen().unwrap());
    }
}
