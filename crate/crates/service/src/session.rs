//! A puzzle session: a graph, the moves applied to it and the rules of the
//! chosen mode.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use euler_core::dynamics::{ergodic_components, ErgodicDecomposition};
use euler_core::eulerize::{default_ball_budget, default_max_cuts, eulerize_ball, heal_segment, BallEulerizeResult};
use euler_core::refine::{edge_contract, edge_refine, is_interior_edge, RefinementMove};
use euler_core::surface::{classify_surface, curvature_ledger, CurvatureLedger, SurfaceType};
use euler_core::{edge, Edge, Graph, Vertex};

use crate::error::ServiceError;

/// Seed used for hint planning.
const HINT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(alias = "Closed")]
    Closed,
    #[serde(alias = "Ball")]
    Ball,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub mode: Mode,
    pub initial: Graph,
    pub current: Graph,
    pub history: Vec<RefinementMove>,
    /// Boundary vertices in ball mode.
    #[serde(default)]
    pub boundary: BTreeSet<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct State {
    pub id: String,
    pub mode: Mode,
    pub graph: Graph,
    pub odd_vertices: BTreeSet<Vertex>,
    pub legal_edges: Vec<Edge>,
    pub legal_edge_count: usize,
    pub move_count: usize,
    pub won: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_mod3: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Delta {
    pub refined_edge: Edge,
    pub new_vertex: Vertex,
    /// Pre-existing vertices whose parity changed.
    pub flipped: BTreeSet<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Hint {
    pub edge: Edge,
    /// Odd vertex the planned cut works on.
    pub target: Vertex,
    pub rationale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub surface_type: SurfaceType,
    pub euler_characteristic: i64,
    pub odd_vertices: BTreeSet<Vertex>,
    /// Absent when the flow is undefined.
    pub components: Option<ErgodicDecomposition>,
    pub curvature: Option<CurvatureLedger>,
}

/// Boundary vertices of a disc, or the reason it is not one.
fn ball_boundary(g: &Graph) -> Result<BTreeSet<Vertex>, String> {
    let report = classify_surface(g);
    if report.surface_type != SurfaceType::TwoGraphWithBoundary {
        return Err(format!("graph is {:?}", report.surface_type));
    }
    if report.boundary_cycles.len() != 1 || report.euler_characteristic != 1 || !g.is_connected() {
        return Err("graph is not a disc".into());
    }
    Ok(report.boundary_vertices())
}

impl Session {
    pub fn new(id: String, graph: Graph, mode: Mode) -> Result<Session, ServiceError> {
        let boundary = match mode {
            Mode::Closed => BTreeSet::new(),
            Mode::Ball => ball_boundary(&graph).map_err(ServiceError::Unprocessable)?,
        };
        Ok(Session { id, mode, initial: graph.clone(), current: graph, history: Vec::new(), boundary })
    }

    pub fn won(&self) -> bool {
        self.current.is_eulerian()
    }

    fn legal(&self, e: Edge) -> bool {
        self.mode == Mode::Closed || is_interior_edge(&self.boundary, e)
    }

    pub fn state(&self) -> State {
        let legal_edges: Vec<Edge> = self.current.edges().filter(|&e| self.legal(e)).collect();
        State {
            id: self.id.clone(),
            mode: self.mode,
            graph: self.current.clone(),
            odd_vertices: self.current.odd_vertices(),
            legal_edge_count: legal_edges.len(),
            legal_edges,
            move_count: self.history.len(),
            won: self.won(),
            boundary_mod3: (self.mode == Mode::Ball).then_some(self.boundary.len() % 3),
        }
    }

    pub fn apply_move(&mut self, (a, b): (Vertex, Vertex)) -> Result<Delta, ServiceError> {
        if self.won() {
            return Err(ServiceError::Conflict("puzzle is solved".into()));
        }
        let e = edge(a, b);
        if !self.current.has_edge(a, b) {
            return Err(if self.history.iter().any(|m| m.refined_edge == e) {
                ServiceError::Gone(format!("edge ({}, {}) was refined", e.0, e.1))
            } else {
                ServiceError::BadRequest(format!("({}, {}) is not an edge", e.0, e.1))
            });
        }
        if !self.legal(e) {
            return Err(ServiceError::Conflict(format!("({}, {}) joins two boundary vertices", e.0, e.1)));
        }
        let (next, mv) = edge_refine(&self.current, e)?;
        let flipped = self
            .current
            .vertices()
            .filter(|&v| self.current.degree(v).ok().map(|d| d % 2) != next.degree(v).ok().map(|d| d % 2))
            .collect();
        let delta = Delta { refined_edge: mv.refined_edge, new_vertex: mv.new_vertex, flipped };
        self.current = next;
        self.history.push(mv);
        Ok(delta)
    }

    /// Reverts the last move by contracting the new vertex into an endpoint
    /// of the refined edge.
    pub fn undo(&mut self) -> Result<RefinementMove, ServiceError> {
        if self.won() && !self.history.is_empty() {
            return Err(ServiceError::Conflict("puzzle is solved".into()));
        }
        let mv = self.history.pop().ok_or_else(|| ServiceError::Conflict("no move to undo".into()))?;
        self.current = edge_contract(&self.current, (mv.refined_edge.1, mv.new_vertex))?;
        Ok(mv)
    }

    /// Whether replaying the history on the initial graph gives the current
    /// graph.
    pub fn consistent(&self) -> bool {
        let mut g = self.initial.clone();
        for mv in &self.history {
            match edge_refine(&g, mv.refined_edge) {
                Ok((h, m)) if &m == mv => g = h,
                _ => return false,
            }
        }
        g == self.current
    }
}

/// Plans the next cut on a copy of `g`.
pub fn hint(g: &Graph, mode: Mode, boundary: &BTreeSet<Vertex>) -> Result<Hint, ServiceError> {
    if g.is_eulerian() {
        return Err(ServiceError::Conflict("puzzle is solved".into()));
    }
    match mode {
        Mode::Closed => {
            let (_, seg) = heal_segment(g, HINT_SEED, default_max_cuts(g))
                .map_err(|e| ServiceError::Unprocessable(e.to_string()))?
                .expect("graph has odd vertices");
            let first = &seg.steps[0];
            let edge = first.cut_edge.expect("a run starts at an odd vertex and cuts");
            Ok(Hint {
                edge,
                target: seg.start,
                rationale: format!("geodesic from {} heading to {}", seg.start, seg.end),
            })
        }
        Mode::Ball => {
            if !boundary.len().is_multiple_of(3) {
                return Err(ServiceError::Unprocessable(format!(
                    "unwinnable: boundary length {} is not a multiple of 3",
                    boundary.len()
                )));
            }
            let out = eulerize_ball(g, HINT_SEED, default_ball_budget(g))?;
            let log = match out {
                BallEulerizeResult::Success { log, .. } | BallEulerizeResult::BudgetExhausted { log, .. } => log,
                BallEulerizeResult::RefusedBoundaryNotMod3 { boundary_length } => {
                    return Err(ServiceError::Unprocessable(format!("unwinnable: boundary length {boundary_length}")))
                }
            };
            let first = log.moves.first().ok_or_else(|| ServiceError::Conflict("no move planned".into()))?;
            let odd = g.odd_vertices();
            let target = *first
                .linked_neighbors
                .iter()
                .find(|v| odd.contains(v))
                .unwrap_or(&first.refined_edge.0);
            Ok(Hint {
                edge: first.refined_edge,
                target,
                rationale: format!("{} of {} planned interior cuts", 1, log.len()),
            })
        }
    }
}

pub fn analysis(g: &Graph) -> Analysis {
    let report = classify_surface(g);
    Analysis {
        surface_type: report.surface_type,
        euler_characteristic: report.euler_characteristic,
        odd_vertices: g.odd_vertices(),
        components: ergodic_components(g).ok(),
        curvature: curvature_ledger(g, &report).ok(),
    }
}
