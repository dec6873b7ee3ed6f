//! Uniform embeddings of Robinson similarity matrices.
//!
//! Given a Robinson matrix with entries in `{0, ..., k}`, the solver either
//! finds thresholds `d_1 > ... > d_k > 0` and strictly increasing positions
//! `Pi` with `a[u][v] = t  <=>  d_{t+1} < |Pi(v) - Pi(u)| < d_t`, or returns
//! upper-bound-cycles whose inequalities no threshold vector satisfies.
//!
//! ```
//! use robinson_embed::{parse_matrix, solve, Method, SolveOutcome};
//!
//! let m = parse_matrix("3 2\n2 1 0\n1 2 1\n0 1 2\n").unwrap();
//! assert!(matches!(solve(&m, Method::Auto).unwrap(), SolveOutcome::Feasible(_)));
//! ```

pub mod bounds;
pub mod cli;
pub mod elimination;
pub mod embed;
pub mod feasibility;
pub mod generate;
pub mod matrix;
pub mod oracle;
pub mod pathgen;
pub mod rational;
pub mod report;
pub mod solve;

pub use bounds::{walk_bound, BoundError, BoundVector, BoundWalk, WalkKind};
pub use embed::{
    check_embedding, construct_embedding, verify_embedding, EmbedError, Embedding, Violation,
};
pub use feasibility::{
    ratio_window, solve_general_k, solve_ratio_k2, Feasibility, FeasibilityError,
    InfeasibilityCertificate, ThresholdVector,
};
pub use matrix::{parse_matrix, reduce_repeated_rows, MatrixError, RobinsonMatrix};
pub use pathgen::{generate_bound_tables, BoundTable, CycleRecord};
pub use rational::Rational;
pub use solve::{solve, Method, Solution, SolveError, SolveOutcome};
