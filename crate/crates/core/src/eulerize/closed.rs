//! Self-healing geodesics on closed surfaces.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::DirectedEdge;
use crate::error::{CoreError, Result};
use crate::graph::{edge, Edge, Graph, Vertex};
use crate::refine::refine_in_place;
use crate::surface::{antipodal, classify_surface, SurfaceType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HealStep {
    pub head: DirectedEdge,
    pub cut_edge: Option<Edge>,
    pub created_vertex: Option<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HealLog {
    pub steps: Vec<HealStep>,
    pub annihilated_pairs: Vec<(Vertex, Vertex)>,
    pub seed: u64,
}

impl HealLog {
    pub fn cut_count(&self) -> usize {
        self.steps.iter().filter(|s| s.cut_edge.is_some()).count()
    }

    /// Re-applies the logged cuts to `g`.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut h = g.clone();
        for step in &self.steps {
            if let Some(e) = step.cut_edge {
                let mv = refine_in_place(&mut h, e)?;
                if Some(mv.new_vertex) != step.created_vertex {
                    return Err(CoreError::PreconditionViolated("replay diverged".into()));
                }
            }
        }
        Ok(h)
    }
}

/// `|E|²` for the input graph.
pub fn default_max_cuts(g: &Graph) -> usize {
    g.edge_count().pow(2)
}

/// One healing step at head `(x, y)`. An even `S(y)` gives a unique antipode
/// `z` and the head moves to `(y, z)`. On an odd `S(y)` the two antipodes are
/// adjacent; their edge is refined and the head moves onto the new vertex.
fn heal_step(g: &mut Graph, (x, y): (Vertex, Vertex)) -> Result<((Vertex, Vertex), Option<(Edge, Vertex)>)> {
    let sphere = g.unit_sphere(y)?;
    match antipodal(&sphere, x)?.as_slice() {
        [z] => Ok(((y, *z), None)),
        [a, b] => {
            let mv = refine_in_place(g, edge(*a, *b))?;
            Ok(((y, mv.new_vertex), Some((mv.refined_edge, mv.new_vertex))))
        }
        _ => Err(CoreError::NotClosed2Graph),
    }
}

/// One healing run: the odd vertex it starts from, the vertex where it
/// stopped and the steps taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HealSegment {
    pub start: Vertex,
    pub end: Vertex,
    pub steps: Vec<HealStep>,
}

/// Runs from a random odd vertex towards a random neighbor until the head
/// reaches a vertex that was odd when the run started. `None` when `t` is
/// Eulerian. `cuts` counts refinements across runs.
fn heal_run(t: &mut Graph, rng: &mut ChaCha8Rng, cuts: &mut usize, max_cuts: usize) -> Result<Option<HealSegment>> {
    let odd: BTreeSet<Vertex> = t.odd_vertices();
    let odd_list: Vec<Vertex> = odd.iter().copied().collect();
    let Some(&y0) = odd_list.choose(rng) else { return Ok(None) };
    let nbrs: Vec<Vertex> = t.neighbors(y0)?.iter().copied().collect();
    let x0 = *nbrs.choose(rng).expect("surface vertices have neighbors");
    let mut head = (x0, y0);
    let mut steps = Vec::new();
    loop {
        let (next, cut) = heal_step(t, head)?;
        steps.push(HealStep {
            head: DirectedEdge::new(head.0, head.1),
            cut_edge: cut.map(|c| c.0),
            created_vertex: cut.map(|c| c.1),
        });
        if cut.is_some() {
            *cuts += 1;
            if *cuts > max_cuts {
                return Err(CoreError::CutBudgetExceeded(max_cuts));
            }
        }
        head = next;
        if odd.contains(&head.1) {
            break;
        }
    }
    Ok(Some(HealSegment { start: y0, end: head.1, steps }))
}

/// The first healing run `eulerize_closed` would make with `seed`, applied to
/// a copy of `g`.
pub fn heal_segment(g: &Graph, seed: u64, max_cuts: usize) -> Result<Option<(Graph, HealSegment)>> {
    if classify_surface(g).surface_type != SurfaceType::Closed2Graph {
        return Err(CoreError::NotClosed2Graph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = g.clone();
    Ok(heal_run(&mut t, &mut rng, &mut 0, max_cuts)?.map(|s| (t, s)))
}

/// Makes a closed 2-graph Eulerian by healing runs until no odd vertex is
/// left. A run whose end became even annihilated a pair.
pub fn eulerize_closed(g: &Graph, seed: u64, max_cuts: usize) -> Result<(Graph, HealLog)> {
    if classify_surface(g).surface_type != SurfaceType::Closed2Graph {
        return Err(CoreError::NotClosed2Graph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = g.clone();
    let mut log = HealLog { steps: Vec::new(), annihilated_pairs: Vec::new(), seed };
    let mut cuts = 0usize;
    while let Some(run) = heal_run(&mut t, &mut rng, &mut cuts, max_cuts)? {
        if run.end != run.start && t.degree(run.end)? % 2 == 0 {
            log.annihilated_pairs.push((run.start, run.end));
        }
        log.steps.extend(run.steps);
    }
    Ok((t, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Fixture};

    #[test]
    fn octahedron_is_untouched() {
        let oct = generate(&Fixture::Octahedron).unwrap();
        let (h, log) = eulerize_closed(&oct, 3, 144).unwrap();
        assert_eq!(h, oct);
        assert!(log.steps.is_empty());
    }

    #[test]
    fn icosahedron_heals() {
        let ico = generate(&Fixture::Icosahedron).unwrap();
        for seed in 0..5 {
            let (h, log) = eulerize_closed(&ico, seed, default_max_cuts(&ico)).unwrap();
            assert!(h.is_eulerian());
            assert_eq!(h.euler_characteristic(), 2);
            assert_eq!(log.replay(&ico).unwrap(), h);
            assert_eq!(log.annihilated_pairs.len(), 6);
        }
    }

    #[test]
    fn torus_pair_annihilates_once() {
        let t = generate(&Fixture::Torus(5, 5)).unwrap();
        for (i, e) in t.edges().enumerate().step_by(7) {
            let (g, _) = crate::refine::edge_refine(&t, e).unwrap();
            assert_eq!(g.odd_vertices().len(), 2);
            let (h, log) = eulerize_closed(&g, i as u64, default_max_cuts(&g)).unwrap();
            assert!(h.is_eulerian());
            assert_eq!(h.euler_characteristic(), 0);
            assert_eq!(log.annihilated_pairs.len(), 1);
        }
    }

    #[test]
    fn first_cut_hits_the_antipodal_edge() {
        // Every vertex of the icosahedron is odd, so the first step cuts.
        let ico = generate(&Fixture::Icosahedron).unwrap();
        let (_, log) = eulerize_closed(&ico, 0, 900).unwrap();
        let first = &log.steps[0];
        let (x, y) = (first.head.from, first.head.to);
        let sphere = ico.unit_sphere(y).unwrap();
        let ab = antipodal(&sphere, x).unwrap();
        assert_eq!(first.cut_edge, Some(edge(ab[0], ab[1])));
        assert_eq!(first.created_vertex, Some(13));
    }

    #[test]
    fn rejects_discs() {
        let w = generate(&Fixture::Wheel(6)).unwrap();
        assert_eq!(eulerize_closed(&w, 0, 10), Err(CoreError::NotClosed2Graph));
    }

    #[test]
    fn segment_matches_first_run() {
        let ico = generate(&Fixture::Icosahedron).unwrap();
        let (_, log) = eulerize_closed(&ico, 4, 900).unwrap();
        let (h, seg) = heal_segment(&ico, 4, 900).unwrap().unwrap();
        assert_eq!(seg.steps, log.steps[..seg.steps.len()]);
        assert_eq!(seg.start, seg.steps[0].head.to);
        assert!(ico.odd_vertices().contains(&seg.end));
        assert_eq!(h.vertex_count(), 12 + seg.steps.iter().filter(|s| s.cut_edge.is_some()).count());
        let oct = generate(&Fixture::Octahedron).unwrap();
        assert_eq!(heal_segment(&oct, 0, 10).unwrap(), None);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let ico = generate(&Fixture::Icosahedron).unwrap();
        assert_eq!(eulerize_closed(&ico, 0, 1), Err(CoreError::CutBudgetExceeded(1)));
    }
}
