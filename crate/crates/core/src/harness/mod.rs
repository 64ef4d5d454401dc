//! Configuration files, run orchestration and persisted results.

mod checkpoint;
mod config;
mod report;
mod run;
mod sweep;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, persist_checkpoint, Checkpoint, MAGIC,
};
pub use config::{
    field_digest, InitialDataSection, OscillationSection, OutputSection, RunConfig, TimeSection,
};
pub use report::collect_summaries;
pub use run::{
    execute, write_run, write_trace_csv, Execution, RunSummary, CHECKPOINT_FILE, CONFIG_FILE,
    SUMMARY_FILE, TRACE_FILE,
};
pub use sweep::{
    run_dir_name, run_sweep, write_summary_csv, SweepPlan, SWEEP_SUMMARY_FILE, THREADS_ENV,
};
