//! Experiment orchestration: configuration, deterministic seeding, sweeps,
//! the empirical sequence-selection bound and CSV output.

mod bound;
mod config;
mod output;
mod point;
mod seeds;
mod selftest;
mod sweep;

pub use bound::{selection_penalty, ss_bound_estimate, BOUND_SCHEME, MIN_KEPT};
pub use config::{
    BoundSection, ExperimentConfig, Scale, Scheme, SelectionSection, ShapingSection, SweepSection,
};
pub use output::{
    emit_csv, parse_csv, read_csv, sidecar_path, write_csv, PointMeta, ResultRow, RunMetadata,
    CSV_HEADER,
};
pub use point::{
    build_metric, ci95, evaluate, run_point, transmit, Evaluation, LinkOutput, PointOutcome,
    Transmitter, TxBlock,
};
pub use seeds::{Purpose, SeedTree};
pub use selftest::{selftest, tiny_config, SelftestCase};
pub use sweep::{
    bound_sweep, optimal_rows, resolved_defaults, standard_notes, sweep, sweep_points,
    with_workers, write_outputs, SweepReport,
};
