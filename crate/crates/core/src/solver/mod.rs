//! The main engine: instances, search strategies, certificates, the verifier
//! and the brute-force test oracle.

pub mod certificate;
pub mod instance;
pub mod oracle;
pub mod search;

pub use certificate::{verify, Certificate, VerifyMode, VerifyReport};
pub use instance::{all_covering_splits, Bipartition, Instance, SetSplit};
pub use oracle::{brute_oracle, OracleResult};
pub use search::{
    objective_radon_trace, solve, solve_detailed, FailureReport, RadonTraceEval, Solved,
    SolverConfig, Strategy,
};
