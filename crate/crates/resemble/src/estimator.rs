//! Placeholder while the pipeline modules are assembled.
pub struct EstimationConfig;
pub struct EstimationReport;
pub struct ModeEstimate;
pub struct Provenance;
pub fn run_resemble() {}
