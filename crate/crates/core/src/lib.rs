//! Graph parameters built from the matrix family `A_α = αD + (1−α)A`:
//! the positive-semidefiniteness threshold α₀, the Lovász theta number, a
//! weighted threshold, max-cut quantities and clique-based copositive
//! bounds, together with explicit certificates for the inequalities that
//! relate them.

use thiserror::Error;

pub mod formulations;
pub mod graph;
pub mod linalg;
pub mod parameters;
pub mod sdp;
pub mod verify;

pub use graph::{Graph, GraphError};
pub use linalg::{LinalgError, SymMatrix};
pub use sdp::{SdpError, SolveStatus, SolverOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error("graph has no edges (m = 0)")]
    Edgeless,
    #[error("graph is not regular")]
    NotRegular,
    #[error("{what} requires n <= {cap}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what}: {a} and {b} disagree beyond {tol}")]
    CrossCheck { what: &'static str, a: f64, b: f64, tol: f64 },
    #[error("solver did not converge for {program}: status {status:?}")]
    Solver { program: &'static str, status: SolveStatus },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn public_types_are_thread_safe() {
        assert_send_sync::<Graph>();
        assert_send_sync::<graph::GraphMatrices>();
        assert_send_sync::<SymMatrix>();
        assert_send_sync::<sdp::SdpProblem>();
        assert_send_sync::<sdp::SdpSolution>();
        assert_send_sync::<formulations::Formulation>();
        assert_send_sync::<verify::DualCertificate>();
        assert_send_sync::<verify::TheoremReport>();
        assert_send_sync::<Error>();
    }
}
