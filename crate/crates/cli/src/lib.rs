//! `eulerizer`: JSON-lines front end to the graph tools.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use euler_core::coloring::{boundary_cycle, boundary_period, color3};
use euler_core::dynamics::{ergodic_components, geodesic_distance, is_ergodic, ErgodicMode};
use euler_core::eulerize::{default_ball_budget, default_max_cuts, eulerize_ball, eulerize_closed, BallEulerizeResult};
use euler_core::generators::{generate, Fixture};
use euler_core::refine::edge_refine;
use euler_core::surface::{classify_surface, curvature_ledger, SurfaceType};
use euler_core::{CoreError, Graph, Vertex};
use euler_service::AppState;

#[derive(Parser, Debug)]
#[command(name = "eulerizer", version, about = "Edge refinement tools for discrete surfaces")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a graph as a closed surface, a surface with boundary or neither.
    Validate { graph: PathBuf },
    /// Print a fixture, e.g. `gen wheel 12` or `gen random_refined torus 5 5 10 3`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        fixture: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Refine one edge.
    Refine {
        graph: PathBuf,
        #[arg(long, value_parser = parse_edge)]
        edge: (Vertex, Vertex),
    },
    /// Make a surface Eulerian: healing geodesics on closed surfaces, interior
    /// cuts on discs with `--ball`.
    Eulerize {
        graph: PathBuf,
        #[arg(long, env = "EULERIZER_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ball: bool,
    },
    /// Ergodic decomposition of the geodesic flow.
    Components { graph: PathBuf },
    Ergodic {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Forced 3-coloring of an Eulerian disc or sphere.
    Color3 { graph: PathBuf },
    /// Fewest geodesic flow steps from one vertex to another.
    Distance {
        graph: PathBuf,
        #[arg(long)]
        from: Vertex,
        #[arg(long)]
        to: Vertex,
    },
    /// Curvature per vertex and its total.
    GaussBonnet { graph: PathBuf },
    /// Run the puzzle HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory for session snapshots.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Closed,
    Billiard,
}

fn parse_edge(s: &str) -> Result<(Vertex, Vertex), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let num = |t: &str| t.trim().parse::<Vertex>().map_err(|e| e.to_string());
    Ok((num(a)?, num(b)?))
}

enum Failure {
    Core(CoreError),
    Other { kind: &'static str, message: String },
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

fn fail(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure::Other { kind, message: message.into() }
}

fn read_graph(path: &PathBuf, stdin: &mut dyn Read) -> Result<Graph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| fail("Io", e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| fail("Io", format!("{}: {e}", path.display())))?
    };
    Ok(Graph::from_json_str(text.trim())?)
}

/// Runs one command. Returns the process exit code: 0 on success, 1 with a
/// JSON error line on a failed operation, 2 on usage errors.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, stdin) {
        Ok(lines) => {
            for line in lines {
                let _ = writeln!(stdout, "{line}");
            }
            0
        }
        Err(f) => {
            let (kind, message) = match f {
                Failure::Core(e) => (e.kind(), e.to_string()),
                Failure::Other { kind, message } => (kind, message),
            };
            let _ = writeln!(stdout, "{}", json!({ "error": kind, "message": message }));
            1
        }
    }
}

fn execute(cmd: Command, stdin: &mut dyn Read) -> Result<Vec<Value>, Failure> {
    let one = |v: Value| Ok(vec![v]);
    match cmd {
        Command::Validate { graph } => {
            let g = read_graph(&graph, stdin)?;
            one(json!(classify_surface(&g)))
        }
        Command::Gen { fixture, output } => {
            let tokens: Vec<&str> = fixture.iter().map(String::as_str).collect();
            let g = generate(&Fixture::parse(&tokens)?)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, g.to_json_string() + "\n")
                        .map_err(|e| fail("Io", format!("{}: {e}", path.display())))?;
                    one(json!({ "written": path, "vertices": g.vertex_count(), "edges": g.edge_count() }))
                }
                None => one(json!(g)),
            }
        }
        Command::Refine { graph, edge } => {
            let g = read_graph(&graph, stdin)?;
            let (h, mv) = edge_refine(&g, edge)?;
            one(json!({ "graph": h, "move": mv }))
        }
        Command::Eulerize { graph, seed, ball } => {
            let g = read_graph(&graph, stdin)?;
            let before = classify_surface(&g).surface_type;
            let (h, log) = if ball {
                match eulerize_ball(&g, seed, default_ball_budget(&g))? {
                    BallEulerizeResult::Success { graph, log } => (graph, json!(log)),
                    BallEulerizeResult::RefusedBoundaryNotMod3 { boundary_length } => {
                        return Err(fail(
                            "RefusedBoundaryNotMod3",
                            format!("boundary length {boundary_length} is not a multiple of 3"),
                        ))
                    }
                    BallEulerizeResult::BudgetExhausted { remaining_odd_count, .. } => {
                        return Err(fail("BudgetExhausted", format!("{remaining_odd_count} odd vertices left")))
                    }
                }
            } else {
                let (h, log) = eulerize_closed(&g, seed, default_max_cuts(&g))?;
                (h, json!(log))
            };
            if !h.is_eulerian() || classify_surface(&h).surface_type != before {
                return Err(fail("InternalCheckFailed", "output failed re-validation"));
            }
            one(json!({ "graph": h, "log": log, "seed": seed }))
        }
        Command::Components { graph } => {
            let g = read_graph(&graph, stdin)?;
            one(json!(ergodic_components(&g)?))
        }
        Command::Ergodic { graph, mode } => {
            let g = read_graph(&graph, stdin)?;
            let (m, name) = match mode {
                ModeArg::Closed => (ErgodicMode::ClosedSurface, "closed"),
                ModeArg::Billiard => (ErgodicMode::Billiard, "billiard"),
            };
            one(json!({ "mode": name, "ergodic": is_ergodic(&g, m)? }))
        }
        Command::Color3 { graph } => {
            let g = read_graph(&graph, stdin)?;
            let c = color3(&g, None)?;
            let period = if classify_surface(&g).surface_type == SurfaceType::TwoGraphWithBoundary {
                boundary_cycle(&g).ok().and_then(|_| boundary_period(&g, &c).ok())
            } else {
                None
            };
            one(json!({ "colors": c, "boundaryPeriod": period }))
        }
        Command::Distance { graph, from, to } => {
            let g = read_graph(&graph, stdin)?;
            one(json!({ "from": from, "to": to, "distance": geodesic_distance(&g, from, to)? }))
        }
        Command::GaussBonnet { graph } => {
            let g = read_graph(&graph, stdin)?;
            let report = classify_surface(&g);
            let ledger = curvature_ledger(&g, &report)?;
            one(json!({
                "curvature": ledger,
                "eulerCharacteristic": report.euler_characteristic,
                "holds": ledger.total == report.euler_characteristic.into(),
            }))
        }
        Command::Serve { port, host, snapshots } => {
            let app = match snapshots {
                Some(dir) => AppState::with_snapshots(&dir).map_err(|e| fail("Io", e.to_string()))?,
                None => AppState::new(),
            };
            let rt = tokio::runtime::Runtime::new().map_err(|e| fail("Io", e.to_string()))?;
            rt.block_on(euler_service::serve(SocketAddr::new(host, port), app))
                .map_err(|e| fail("Io", e.to_string()))?;
            Ok(vec![])
        }
    }
}
