//! Named fixtures and parametric surface families.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::graph::{Graph, Vertex};
use crate::refine::{is_interior_edge, refine_in_place};
use crate::surface::{classify_surface, SurfaceType};

const OCTAHEDRON: [(Vertex, Vertex); 12] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4),
    (2, 6), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6),
];

const ICOSAHEDRON: [(Vertex, Vertex); 30] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 5), (2, 6), (2, 9), (2, 10), (3, 4),
    (3, 5), (3, 8), (3, 11), (4, 6), (4, 8), (4, 12), (5, 9), (5, 11), (6, 10), (6, 12),
    (7, 8), (7, 9), (7, 10), (7, 11), (7, 12), (8, 11), (8, 12), (9, 10), (9, 11), (10, 12),
];

/// Bunimovich-type billiard table, 18 vertices.
pub const BUNIMOVICH_JSON: &str = include_str!("../data/bunimovich.json");
/// Torus with a single ergodic geodesic component, 89 vertices.
pub const ERGODIC_TORUS_JSON: &str = include_str!("../data/ergodic_torus.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    Octahedron,
    Icosahedron,
    /// Hub `0` joined to the rim cycle `1..=n`.
    Wheel(u32),
    /// Fan of `n` triangles: hub `0` joined to the rim path `1..=n+1`. The two
    /// rim ends have degree 2, so the fan alone is not a surface; it is the
    /// shape of the closed star of a boundary vertex.
    HalfWheel(u32),
    /// `m × n` grid on the torus with diagonals `(i, j) - (i+1, j+1)`.
    Torus(u32, u32),
    /// `2n` triangles glued in a ring; two boundary cycles of length `n`.
    Annulus(u32),
    /// Hexagonal patch of the triangular lattice with `r` rings around a center.
    HexDisc(u32),
    BunimovichPaper,
    ErgodicTorusPaper,
    /// `k` seeded random edge refinements of `base`. Surfaces with boundary
    /// only receive interior-edge refinements, so their boundary is kept.
    RandomRefined { base: Box<Fixture>, k: u32, seed: u64 },
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Octahedron => write!(f, "octahedron"),
            Fixture::Icosahedron => write!(f, "icosahedron"),
            Fixture::Wheel(n) => write!(f, "wheel({n})"),
            Fixture::HalfWheel(n) => write!(f, "half_wheel({n})"),
            Fixture::Torus(m, n) => write!(f, "torus({m},{n})"),
            Fixture::Annulus(n) => write!(f, "annulus({n})"),
            Fixture::HexDisc(r) => write!(f, "hex_disc({r})"),
            Fixture::BunimovichPaper => write!(f, "bunimovich"),
            Fixture::ErgodicTorusPaper => write!(f, "ergodic_torus"),
            Fixture::RandomRefined { base, k, seed } => {
                write!(f, "random_refined({base},{k},{seed})")
            }
        }
    }
}

impl Fixture {
    /// Parses a whitespace-separated command form such as `wheel 12`,
    /// `torus 5 5` or `random_refined icosahedron 10 7`.
    pub fn parse(tokens: &[&str]) -> Result<Fixture> {
        let (fixture, rest) = Self::parse_prefix(tokens)?;
        if !rest.is_empty() {
            return Err(CoreError::BadParams(format!("unexpected arguments {rest:?}")));
        }
        Ok(fixture)
    }

    fn parse_prefix<'a, 'b>(tokens: &'a [&'b str]) -> Result<(Fixture, &'a [&'b str])> {
        let num = |s: Option<&&str>| -> Result<u64> {
            s.ok_or_else(|| CoreError::BadParams("missing parameter".into()))?
                .parse()
                .map_err(|e| CoreError::BadParams(format!("{e}")))
        };
        let small = |x: u64| -> Result<u32> {
            u32::try_from(x).map_err(|_| CoreError::BadParams(format!("{x} is too large")))
        };
        let (name, rest) = tokens
            .split_first()
            .ok_or_else(|| CoreError::BadParams("missing fixture name".into()))?;
        Ok(match *name {
            "octahedron" => (Fixture::Octahedron, rest),
            "icosahedron" => (Fixture::Icosahedron, rest),
            "bunimovich" | "bunimovich_paper" => (Fixture::BunimovichPaper, rest),
            "ergodic_torus" | "ergodic_torus_paper" => (Fixture::ErgodicTorusPaper, rest),
            "wheel" => (Fixture::Wheel(small(num(rest.first())?)?), &rest[1..]),
            "half_wheel" => (Fixture::HalfWheel(small(num(rest.first())?)?), &rest[1..]),
            "annulus" => (Fixture::Annulus(small(num(rest.first())?)?), &rest[1..]),
            "hex_disc" => (Fixture::HexDisc(small(num(rest.first())?)?), &rest[1..]),
            "torus" => {
                let m = small(num(rest.first())?)?;
                let n = small(num(rest.get(1))?)?;
                (Fixture::Torus(m, n), &rest[2..])
            }
            "random_refined" => {
                let (base, rest) = Self::parse_prefix(rest)?;
                let k = small(num(rest.first())?)?;
                let seed = num(rest.get(1))?;
                let fixture = Fixture::RandomRefined { base: Box::new(base), k, seed };
                (fixture, &rest[2..])
            }
            other => return Err(CoreError::BadParams(format!("unknown fixture {other}"))),
        })
    }
}

pub fn generate(fixture: &Fixture) -> Result<Graph> {
    match fixture {
        Fixture::Octahedron => Graph::from_edges(&OCTAHEDRON),
        Fixture::Icosahedron => Graph::from_edges(&ICOSAHEDRON),
        Fixture::Wheel(n) => wheel(*n),
        Fixture::HalfWheel(n) => half_wheel(*n),
        Fixture::Torus(m, n) => torus(*m, *n),
        Fixture::Annulus(n) => annulus(*n),
        Fixture::HexDisc(r) => hex_disc(*r),
        Fixture::BunimovichPaper => Graph::from_json_str(BUNIMOVICH_JSON),
        Fixture::ErgodicTorusPaper => Graph::from_json_str(ERGODIC_TORUS_JSON),
        Fixture::RandomRefined { base, k, seed } => {
            random_refined(&generate(base)?, *k as usize, *seed)
        }
    }
}

fn wheel(n: u32) -> Result<Graph> {
    if n < 4 {
        return Err(CoreError::BadParams(format!("wheel needs n >= 4, got {n}")));
    }
    let mut edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    edges.extend((1..=n).map(|i| (i, i % n + 1)));
    Graph::from_edges(&edges)
}

fn half_wheel(n: u32) -> Result<Graph> {
    if n < 2 {
        return Err(CoreError::BadParams(format!("half wheel needs n >= 2, got {n}")));
    }
    let mut edges: Vec<_> = (1..=n + 1).map(|i| (0, i)).collect();
    edges.extend((1..=n).map(|i| (i, i + 1)));
    Graph::from_edges(&edges)
}

fn torus(m: u32, n: u32) -> Result<Graph> {
    if m < 4 || n < 4 {
        return Err(CoreError::BadParams(format!("torus needs m, n >= 4, got {m}x{n}")));
    }
    let id = |i: u32, j: u32| (i % m) * n + (j % n);
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            edges.push((id(i, j), id(i + 1, j)));
            edges.push((id(i, j), id(i, j + 1)));
            edges.push((id(i, j), id(i + 1, j + 1)));
        }
    }
    Graph::from_edges(&edges)
}

fn annulus(n: u32) -> Result<Graph> {
    if n < 4 {
        return Err(CoreError::BadParams(format!("annulus needs n >= 4, got {n}")));
    }
    let outer = |i: u32| i % n;
    let inner = |i: u32| n + i % n;
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((outer(i), outer(i + 1)));
        edges.push((inner(i), inner(i + 1)));
        edges.push((outer(i), inner(i)));
        edges.push((outer(i), inner(i + 1)));
    }
    Graph::from_edges(&edges)
}

fn hex_disc(r: u32) -> Result<Graph> {
    if r < 1 {
        return Err(CoreError::BadParams("hex disc needs r >= 1".into()));
    }
    let r = r as i64;
    let cells: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|q| (-r..=r).map(move |s| (q, s)))
        .filter(|&(q, s)| (q + s).abs() <= r)
        .collect();
    let id = |c: (i64, i64)| cells.binary_search(&c).ok().map(|i| i as Vertex);
    let mut edges = Vec::new();
    for &(q, s) in &cells {
        for (dq, ds) in [(1, 0), (0, 1), (1, -1)] {
            if let Some(b) = id((q + dq, s + ds)) {
                edges.push((id((q, s)).unwrap(), b));
            }
        }
    }
    Graph::from_edges(&edges)
}

fn random_refined(base: &Graph, k: usize, seed: u64) -> Result<Graph> {
    let report = classify_surface(base);
    let boundary = report.boundary_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = base.clone();
    for _ in 0..k {
        let candidates: Vec<_> = g
            .edges()
            .filter(|&e| is_interior_edge(&boundary, e))
            .collect();
        let Some(&e) = candidates.choose(&mut rng) else {
            return Err(CoreError::BadParams("no refinable edge".into()));
        };
        refine_in_place(&mut g, e)?;
    }
    Ok(g)
}

/// Expected classification of a fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureExpectation {
    pub surface_type: SurfaceType,
    pub euler_characteristic: i64,
    pub boundary_lengths: Vec<usize>,
    pub odd_count: usize,
}

fn expect(surface_type: SurfaceType, chi: i64, boundary: Vec<usize>, odd: usize) -> FixtureExpectation {
    FixtureExpectation {
        surface_type,
        euler_characteristic: chi,
        boundary_lengths: boundary,
        odd_count: odd,
    }
}

/// Fixtures with their expected surface summaries.
pub fn fixture_catalog() -> Vec<(Fixture, FixtureExpectation)> {
    use SurfaceType::*;
    let mut out = vec![
        (Fixture::Octahedron, expect(Closed2Graph, 2, vec![], 0)),
        (Fixture::Icosahedron, expect(Closed2Graph, 2, vec![], 12)),
        (Fixture::Torus(5, 5), expect(Closed2Graph, 0, vec![], 0)),
        (Fixture::Torus(4, 6), expect(Closed2Graph, 0, vec![], 0)),
        (Fixture::HalfWheel(4), expect(NotASurface, 1, vec![], 4)),
        (Fixture::BunimovichPaper, expect(TwoGraphWithBoundary, 1, vec![9], 0)),
        (Fixture::ErgodicTorusPaper, expect(Closed2Graph, 0, vec![], 0)),
        (Fixture::HexDisc(2), expect(TwoGraphWithBoundary, 1, vec![12], 6)),
        (Fixture::HexDisc(3), expect(TwoGraphWithBoundary, 1, vec![18], 6)),
    ];
    for n in 4..=15 {
        let odd = n as usize + (n % 2) as usize;
        out.push((Fixture::Wheel(n), expect(TwoGraphWithBoundary, 1, vec![n as usize], odd)));
    }
    for n in 4..=12 {
        let len = n as usize;
        out.push((Fixture::Annulus(n), expect(TwoGraphWithBoundary, 0, vec![len, len], 0)));
    }
    out
}
