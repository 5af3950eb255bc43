//! Statistical evaluation of keystreams and encrypted signals.

pub mod nist;
pub mod report;
pub mod sensitivity;
pub mod special;
pub mod stats;

pub use report::{run_battery, AnalysisReport, BatteryConfig, Outcome, TestEntry, Verdict};
pub use sensitivity::{
    sensitivity_sweep, sensitivity_sweep_with_step, Perturbation, SensitivityRow,
};
pub use stats::{autocorrelation, histogram, max_offpeak, percent_difference, prd};
