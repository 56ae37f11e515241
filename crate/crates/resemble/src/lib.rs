//! Joint estimation of rectangular-room geometry and low-frequency modal
//! parameters from a small set of room impulse response measurements.
//!
//! The estimation pipeline works on multi-microphone impulse responses and
//! proceeds in two frequency bands. In the low band the resonant frequency,
//! damping and wave-vector group of each room mode are found by a structured
//! simultaneous matching pursuit over a damped-exponential dictionary and a
//! sphere of candidate wave-vector groups. The basic axial modes recovered
//! there encode the room side lengths. In the high band the wave-vector grid
//! implied by the recovered geometry supplies resonant frequencies and wave
//! vectors directly, so only the damping is searched. A final joint least
//! squares refit produces the expansion coefficients of the modal model.
//!
//! The crate also ships a synthetic modal simulator ([`synthesis`]) used as
//! the ground-truth oracle for validation, quantitative evaluation metrics
//! ([`eval`]), and file formats plus a CLI (`resemble`) for driving the whole
//! workflow ([`io`]).

pub mod dict;
pub mod estimator;
pub mod eval;
pub mod io;
pub mod modal;
pub mod synthesis;
pub mod vec3;

pub(crate) mod linalg;
pub(crate) mod signal;

pub use estimator::{run_resemble, EstimationConfig, EstimationReport, ModeEstimate, Provenance};
pub use modal::{ModeIndex, RoomGeometry, Topology, TopologyClass, WaveNumber, WaveVectorGroup};
pub use synthesis::{MeasurementSet, ModalModel};
pub use vec3::Vec3;

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;

/// One complex pressure block, stored as one column per microphone.
pub type ComplexBlock = Vec<Vec<C64>>;
