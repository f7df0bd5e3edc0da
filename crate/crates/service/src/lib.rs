//! HTTP session API for the edge refinement puzzle.
//!
//! Routes, all with JSON bodies:
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/api/session` | `{graph, mode}` to `{id, state}` |
//! | GET | `/api/session/{id}` | state |
//! | POST | `/api/session/{id}/move` | `{edge: [a, b]}` to `{state, delta}` |
//! | POST | `/api/session/{id}/undo` | `{state, undone}` |
//! | GET | `/api/session/{id}/hint` | next planned cut |
//! | GET | `/api/session/{id}/analysis` | odd vertices, flow components, curvature |
//! | GET | `/api/session/{id}/consistency` | replay check |

mod error;
mod session;
mod store;

pub use error::ServiceError;
pub use session::{analysis, hint, Analysis, Delta, Hint, Mode, Session, State};
pub use store::{router, serve, AppState};
