//! Continuous-time MILP formulations for the multi-mode resource-constrained
//! project scheduling problem.

pub mod formulations;
pub mod generate;
pub mod bench;
pub mod io;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod solve;

pub use formulations::{build, decode, FormulationOptions, ModeConsistency, ModelKind};
pub use model::{validate_schedule, Activity, Instance, Mode, Schedule, ValidationReport, DEFAULT_TOL};
pub use preprocess::Preprocessed;
