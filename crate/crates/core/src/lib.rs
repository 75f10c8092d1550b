//! Massage-robot simulator: adaptive admittance control against a nonlinear
//! skin model, four massage techniques and force-trace characterization.
//!
//! A single simulation is sequential and deterministic. Batches of runs and
//! trace statistics fan out over rayon when the `parallel` feature is on.

pub mod admittance;
pub mod analysis;
pub mod config;
pub mod contact;
pub mod io;
pub mod par;
pub mod sim;
pub mod sweep;
pub mod techniques;
pub mod types;

pub use admittance::{
    AdmittanceController, AdmittanceError, AdmittanceParams, AdmittanceState, ReferenceKinematics,
};
pub use analysis::{
    compare_to_reference, summarize, trace_stats, AnalysisError, ComparisonReport, Reference,
    Tolerance, Tolerances, TraceStats,
};
pub use config::{ConfigError, RunConfig};
pub use contact::{contact_force, SkinModel};
pub use io::{export_trace, read_trace, write_trace, TraceIoError};
pub use par::Execution;
pub use sim::{run_constant_force, run_simulation, RunSummary, SimConfig, SimError, SimResult};
pub use techniques::{Technique, TechniqueKind};
pub use types::{validate_trace, ForceSample, ForceTrace, Pose, TraceViolation};
