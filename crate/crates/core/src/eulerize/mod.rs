//! Rendering surfaces Eulerian by edge refinements.
//!
//! Closed surfaces are healed by letting a geodesic cut its own way from one
//! odd vertex to the next ([`eulerize_closed`]). Discs are only allowed to
//! refine edges with at least one interior endpoint, which keeps the boundary
//! cycle fixed; they can be made Eulerian exactly when the boundary length is
//! a multiple of 3 ([`eulerize_ball`]).
//!
//! Refining an edge `(a, b)` whose common neighbors are `y` and `o` flips the
//! parity of `y` and `o`. Reading this as a particle at `y` jumping to `o`
//! gives the jump graph used by the disc solver.

mod ball;
mod closed;
mod local;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::refine::{refine_in_place, RefinementMove};

pub use ball::{
    default_ball_budget, eulerize_ball, reduce_triplet, switch_parity, BallEulerizeResult,
};
pub use closed::{default_max_cuts, eulerize_closed, heal_segment, HealLog, HealSegment, HealStep};
pub use local::local_finisher;

/// Ordered record of elementary edge refinements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementLog {
    pub moves: Vec<RefinementMove>,
}

impl RefinementLog {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn refined_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.moves.iter().map(|m| m.refined_edge)
    }

    /// Applies the log to `g`, checking every recorded vertex and link set.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        replay_moves(g, &self.moves)
    }
}

pub(crate) fn replay_moves(g: &Graph, moves: &[RefinementMove]) -> Result<Graph> {
    let mut h = g.clone();
    for (i, recorded) in moves.iter().enumerate() {
        let mv = refine_in_place(&mut h, recorded.refined_edge)?;
        if &mv != recorded {
            return Err(CoreError::PreconditionViolated(format!("replay diverged at move {i}")));
        }
    }
    Ok(h)
}

/// Undoes a refinement made by `refine_in_place` on the same graph.
pub(crate) fn unrefine_in_place(g: &mut Graph, mv: &RefinementMove) {
    g.remove_vertex(mv.new_vertex);
    g.add_edge(mv.refined_edge.0, mv.refined_edge.1);
}

/// One particle jump: refining `edge` flips `from` and `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Jump {
    pub from: Vertex,
    pub to: Vertex,
    pub edge: Edge,
}

impl Jump {
    /// Whether `edge` still exists with exactly `from` and `to` as apexes.
    pub fn is_valid(&self, g: &Graph) -> bool {
        g.has_edge(self.edge.0, self.edge.1)
            && g.common_neighbors(self.edge.0, self.edge.1) == BTreeSet::from([self.from, self.to])
    }
}

pub(crate) fn allowed(boundary: &BTreeSet<Vertex>, (a, b): Edge) -> bool {
    !(boundary.contains(&a) && boundary.contains(&b))
}

/// Apex pair of an edge lying in exactly two triangles.
pub(crate) fn apexes(g: &Graph, (a, b): Edge) -> Option<(Vertex, Vertex)> {
    let cn = g.common_neighbors(a, b);
    let mut it = cn.iter();
    match (it.next(), it.next(), it.next()) {
        (Some(&y), Some(&o), None) => Some((y, o)),
        _ => None,
    }
}

/// Jump graph over all allowed edges: `y -> (o, edge)` for every allowed edge
/// with apexes `y`, `o`.
pub(crate) fn jump_graph(g: &Graph, boundary: &BTreeSet<Vertex>) -> BTreeMap<Vertex, Vec<(Vertex, Edge)>> {
    let mut jumps: BTreeMap<Vertex, Vec<(Vertex, Edge)>> = BTreeMap::new();
    for e in g.edges().filter(|&e| allowed(boundary, e)) {
        if let Some((y, o)) = apexes(g, e) {
            jumps.entry(y).or_default().push((o, e));
            jumps.entry(o).or_default().push((y, e));
        }
    }
    jumps
}
