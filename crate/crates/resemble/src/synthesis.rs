//! Synthetic modal room impulse responses.
//!
//! Generates ground-truth measurement sets from closed-form rigid-wall modal
//! models: the oracle behind every end-to-end test of the estimator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modal::{
    enumerate_modes_below, spatial_step_bound, wave_vector_group, ModalError, ModeIndex,
    RoomGeometry, WaveNumber, WaveVectorGroup,
};
use crate::signal;
use crate::vec3::Vec3;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("microphone cube (side {side} m at {center:?}) does not fit inside the room")]
    CubeOutsideRoom { side: f64, center: Vec3 },
    #[error("coefficient count {got} does not match group size {expect}")]
    CoefficientMismatch { got: usize, expect: usize },
    #[error("mode damping must be negative, got {0}")]
    NonNegativeDamping(f64),
    #[error(transparent)]
    Modal(#[from] ModalError),
    #[error("sampling rate and duration must be strictly positive")]
    InvalidSampling,
}

/// One mode of a modal model: wave number, wave-vector group and one complex
/// expansion coefficient per group vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMode {
    pub wavenumber: WaveNumber,
    pub group: WaveVectorGroup,
    pub coefficients: Vec<Complex64>,
    /// Lattice index, when the mode came from a rigid-wall lattice.
    pub index: Option<ModeIndex>,
}

/// A sum-of-damped-plane-wave-groups room model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalModel {
    pub modes: Vec<ModelMode>,
    /// Speed of sound in m/s.
    pub c: f64,
}

impl ModalModel {
    pub fn new(modes: Vec<ModelMode>, c: f64) -> Result<Self, SynthesisError> {
        for m in &modes {
            if m.coefficients.len() != m.group.len() {
                return Err(SynthesisError::CoefficientMismatch {
                    got: m.coefficients.len(),
                    expect: m.group.len(),
                });
            }
            if m.wavenumber.xi >= 0.0 {
                return Err(SynthesisError::NonNegativeDamping(m.wavenumber.xi));
            }
        }
        Ok(ModalModel { modes, c })
    }

    /// Highest resonant frequency in Hz (0 for an empty model).
    pub fn max_frequency_hz(&self) -> f64 {
        self.modes.iter().map(|m| m.wavenumber.frequency_hz()).fold(0.0, f64::max)
    }

    /// Multiply every damping by `1 + u`, `u` uniform in `±frac`.
    pub fn jitter_dampings(&mut self, frac: f64, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in &mut self.modes {
            let u: f64 = rng.random_range(-frac..frac);
            m.wavenumber.xi *= 1.0 + u;
        }
    }
}

/// How `make_rigid_wall_model` assigns per-mode expansion coefficients.
/// Within a mode the group shares one coefficient, which reproduces the
/// rigid-wall cosine-product mode shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AmplitudeRule {
    /// Every mode gets coefficient 1.
    Unit,
    /// Magnitude uniform in `[min, max]`, phase uniform over the circle.
    Random { min: f64, max: f64, seed: u64 },
    /// Coefficient proportional to the mode shape at the source position,
    /// with a small uniform random phase in `±phase_jitter` radians. A source
    /// on a nodal plane of a mode yields an exactly zero coefficient.
    SourceCoupled { source: Vec3, phase_jitter: f64, seed: u64 },
}

/// Multi-microphone measurement block: real pressure series per microphone.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    /// Microphone coordinates in meters.
    pub positions: Vec<Vec3>,
    /// Source coordinates in meters (metadata only).
    pub source_position: Vec3,
    /// Sampling rate in Hz.
    pub fs: f64,
    /// Samples per microphone.
    pub sample_count: usize,
    /// One column per microphone, each of length `sample_count`.
    pub samples: Vec<Vec<f64>>,
    /// Optional cached analytic (one-sided-spectrum) form of `samples`.
    pub analytic: Option<Vec<Vec<Complex64>>>,
}

impl MeasurementSet {
    pub fn new(
        positions: Vec<Vec3>,
        source_position: Vec3,
        fs: f64,
        sample_count: usize,
        samples: Vec<Vec<f64>>,
    ) -> Result<Self, SynthesisError> {
        if fs <= 0.0 || sample_count == 0 {
            return Err(SynthesisError::InvalidSampling);
        }
        if positions.len() != samples.len() || samples.iter().any(|c| c.len() != sample_count) {
            return Err(SynthesisError::CoefficientMismatch {
                got: samples.len(),
                expect: positions.len(),
            });
        }
        Ok(MeasurementSet { positions, source_position, fs, sample_count, samples, analytic: None })
    }

    pub fn microphone_count(&self) -> usize {
        self.positions.len()
    }

    pub fn duration(&self) -> f64 {
        self.sample_count as f64 / self.fs
    }

    /// Analytic form of the block, cached on first use.
    pub fn analytic_block(&self) -> Vec<Vec<Complex64>> {
        match &self.analytic {
            Some(a) => a.clone(),
            None => signal::analytic_block(&self.samples, self.fs),
        }
    }

    /// Fill the cached analytic form.
    pub fn with_analytic(mut self) -> Self {
        if self.analytic.is_none() {
            self.analytic = Some(signal::analytic_block(&self.samples, self.fs));
        }
        self
    }
}

/// Sample the room impulse response of `model` at one position.
///
/// Evaluates the real part of the complex mode sum at `t_i = i / fs` for
/// `round(duration * fs)` samples.
pub fn synthesize_rir(model: &ModalModel, position: &Vec3, fs: f64, duration: f64) -> Vec<f64> {
    let t_len = (duration * fs).round() as usize;
    let mut out = vec![0.0; t_len];
    let dt = 1.0 / fs;
    for mode in &model.modes {
        // Spatial factor is constant per position; one complex weight per mode.
        let mut weight = Complex64::new(0.0, 0.0);
        for (k, coef) in mode.group.vectors.iter().zip(mode.coefficients.iter()) {
            weight += coef * Complex64::from_polar(1.0, k.dot(position));
        }
        if weight.norm_sqr() == 0.0 {
            continue;
        }
        let step = Complex64::from_polar((mode.wavenumber.xi * dt).exp(), mode.wavenumber.omega * dt);
        let mut phasor = weight;
        for sample in out.iter_mut() {
            *sample += phasor.re;
            phasor *= step;
        }
    }
    out
}

/// `cos(pi * r)` with exact zeros at half-odd-integer `r`, so that a source
/// placed exactly on a nodal plane produces an exactly zero coefficient.
fn cos_pi(r: f64) -> f64 {
    let doubled = 2.0 * r;
    if doubled == doubled.round() && (doubled.round() as i64).rem_euclid(2) == 1 {
        0.0
    } else {
        (std::f64::consts::PI * r).cos()
    }
}

/// Rigid-wall lattice model of a room up to `fc` Hz with uniform damping
/// prior `xi0 = -3 ln(10) / rt60` and amplitudes per `rule`.
pub fn make_rigid_wall_model(
    room: &RoomGeometry,
    fc: f64,
    c: f64,
    rt60: f64,
    rule: &AmplitudeRule,
) -> Result<ModalModel, SynthesisError> {
    let xi0 = crate::dict::damping_prior(rt60);
    let lattice = enumerate_modes_below(fc, room, c)?;
    let mut rng = match rule {
        AmplitudeRule::Random { seed, .. } | AmplitudeRule::SourceCoupled { seed, .. } => {
            Some(ChaCha8Rng::seed_from_u64(*seed))
        }
        AmplitudeRule::Unit => None,
    };
    let mut modes = Vec::with_capacity(lattice.len());
    for (n, omega) in lattice {
        let group = wave_vector_group(&n, room)?;
        let alpha = match rule {
            AmplitudeRule::Unit => Complex64::new(1.0, 0.0),
            AmplitudeRule::Random { min, max, .. } => {
                let rng = rng.as_mut().unwrap();
                let mag: f64 = rng.random_range(*min..*max);
                let phase: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                Complex64::from_polar(mag, phase)
            }
            AmplitudeRule::SourceCoupled { source, phase_jitter, .. } => {
                let rng = rng.as_mut().unwrap();
                let shape = cos_pi(n.nx as f64 * source.x / room.lx)
                    * cos_pi(n.ny as f64 * source.y / room.ly)
                    * cos_pi(n.nz as f64 * source.z / room.lz);
                let phase: f64 = if *phase_jitter > 0.0 {
                    rng.random_range(-phase_jitter..*phase_jitter)
                } else {
                    0.0
                };
                shape * Complex64::from_polar(1.0, phase)
            }
        };
        let coefficients = vec![alpha; group.len()];
        modes.push(ModelMode { wavenumber: WaveNumber::new(omega, xi0), group, coefficients, index: Some(n) });
    }
    ModalModel::new(modes, c)
}

/// Reproducible uniform microphone positions inside a cube that must fit in
/// the room.
pub fn sample_microphones(
    room: &RoomGeometry,
    count: usize,
    cube_center: &Vec3,
    cube_side: f64,
    seed: u64,
) -> Result<Vec<Vec3>, SynthesisError> {
    let half = cube_side / 2.0;
    for axis in 0..3 {
        let c = cube_center.component(axis);
        if c - half < 0.0 || c + half > room.side(axis) {
            return Err(SynthesisError::CubeOutsideRoom { side: cube_side, center: *cube_center });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let dx: f64 = rng.random_range(-half..=half);
            let dy: f64 = rng.random_range(-half..=half);
            let dz: f64 = rng.random_range(-half..=half);
            cube_center.add(&Vec3::new(dx, dy, dz))
        })
        .collect())
}

/// Additive white noise request for [`build_measurement_set`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Block signal-to-noise ratio in dB.
    pub snr_db: f64,
    pub seed: u64,
}

/// Largest nearest-neighbor spacing of the microphone set, `None` for fewer
/// than two microphones.
pub fn max_nearest_neighbor_spacing(positions: &[Vec3]) -> Option<f64> {
    if positions.len() < 2 {
        return None;
    }
    let mut worst = 0.0f64;
    for (i, p) in positions.iter().enumerate() {
        let mut nearest = f64::INFINITY;
        for (j, q) in positions.iter().enumerate() {
            if i != j {
                nearest = nearest.min(p.sub(q).norm());
            }
        }
        worst = worst.max(nearest);
    }
    Some(worst)
}

/// Message when the microphone spacing violates the spatial sampling bound
/// for content up to `fc`, else `None`.
pub fn spatial_aliasing_warning(positions: &[Vec3], fc: f64, c: f64) -> Option<String> {
    let spacing = max_nearest_neighbor_spacing(positions)?;
    let bound = spatial_step_bound(fc, c);
    (spacing > bound).then(|| {
        format!(
            "nearest-neighbor microphone spacing {spacing:.3} m exceeds the spatial \
             sampling bound {bound:.3} m for content up to {fc} Hz"
        )
    })
}

/// Stack per-microphone impulse responses into a measurement set, optionally
/// adding white noise calibrated to a block SNR.
pub fn build_measurement_set(
    model: &ModalModel,
    positions: &[Vec3],
    source_position: &Vec3,
    fs: f64,
    duration: f64,
    noise: Option<NoiseSpec>,
) -> Result<MeasurementSet, SynthesisError> {
    if fs <= 0.0 || duration <= 0.0 {
        return Err(SynthesisError::InvalidSampling);
    }
    let t_len = (duration * fs).round() as usize;
    let mut samples: Vec<Vec<f64>> =
        positions.iter().map(|p| synthesize_rir(model, p, fs, duration)).collect();

    if let Some(warning) = spatial_aliasing_warning(positions, model.max_frequency_hz(), model.c) {
        log::warn!("{warning}");
    }

    if let Some(noise) = noise {
        let signal_energy: f64 = samples.iter().flatten().map(|x| x * x).sum();
        let total = (t_len * positions.len().max(1)) as f64;
        let sigma = (signal_energy / total / 10f64.powf(noise.snr_db / 10.0)).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        for col in &mut samples {
            for x in col.iter_mut() {
                // Box-Muller from two uniforms.
                let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.random_range(0.0..1.0);
                *x += sigma
                    * (-2.0 * u1.ln()).sqrt()
                    * (2.0 * std::f64::consts::PI * u2).cos();
            }
        }
    }

    MeasurementSet::new(positions.to_vec(), *source_position, fs, t_len, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = 343.0;

    fn paper_room() -> RoomGeometry {
        RoomGeometry::new(3.0, 5.6, 3.53).unwrap()
    }

    fn single_axial_model(room: &RoomGeometry) -> ModalModel {
        let n = ModeIndex::new(1, 0, 0).unwrap();
        let omega = crate::modal::eigenfrequency(&n, room, C).unwrap();
        let group = wave_vector_group(&n, room).unwrap();
        let len = group.len();
        ModalModel::new(
            vec![ModelMode {
                wavenumber: WaveNumber::new(omega, crate::dict::damping_prior(1.0)),
                group,
                coefficients: vec![Complex64::new(1.0, 0.0); len],
                index: Some(n),
            }],
            C,
        )
        .unwrap()
    }

    #[test]
    fn empty_model_synthesizes_zeros() {
        let model = ModalModel::new(vec![], C).unwrap();
        let rir = synthesize_rir(&model, &Vec3::new(1.0, 1.0, 1.0), 500.0, 0.5);
        assert_eq!(rir.len(), 250);
        assert!(rir.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn axial_mode_vanishes_at_pressure_node() {
        let room = paper_room();
        let model = single_axial_model(&room);
        let node = Vec3::new(room.lx / 2.0, 1.0, 1.0);
        let rir = synthesize_rir(&model, &node, 500.0, 0.3);
        let peak = rir.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        assert!(peak < 1e-12, "peak {peak}");
    }

    #[test]
    fn envelope_log_slope_matches_damping() {
        let room = paper_room();
        let model = single_axial_model(&room);
        let fs = 500.0;
        let rir = synthesize_rir(&model, &Vec3::new(0.3, 1.0, 1.0), fs, 1.0);
        let analytic = signal::analytic_block(&[rir], fs).remove(0);
        // Least-squares slope of ln|a(t)| over an interior window.
        let lo = 50;
        let hi = 400;
        let n = (hi - lo) as f64;
        let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
        for i in lo..hi {
            let t = i as f64 / fs;
            let y = analytic[i].norm().ln();
            st += t;
            sy += y;
            stt += t * t;
            sty += t * y;
        }
        let slope = (n * sty - st * sy) / (n * stt - st * st);
        let xi = model.modes[0].wavenumber.xi;
        assert!((slope - xi).abs() / xi.abs() < 0.01, "slope {slope} vs xi {xi}");
    }

    #[test]
    fn linearity_of_mode_sum() {
        let room = paper_room();
        let full = make_rigid_wall_model(&room, 60.0, C, 1.0, &AmplitudeRule::Unit).unwrap();
        assert!(full.modes.len() >= 2);
        let p = Vec3::new(0.4, 1.3, 0.9);
        let fs = 500.0;
        let total = synthesize_rir(&full, &p, fs, 0.4);
        let mut acc = vec![0.0; total.len()];
        for mode in &full.modes {
            let single = ModalModel::new(vec![mode.clone()], C).unwrap();
            for (a, b) in acc.iter_mut().zip(synthesize_rir(&single, &p, fs, 0.4)) {
                *a += b;
            }
        }
        let scale = total.iter().map(|x| x.abs()).fold(0.0, f64::max);
        for (a, b) in acc.iter().zip(total.iter()) {
            assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn rigid_wall_model_basics() {
        let room = paper_room();
        let model = make_rigid_wall_model(&room, 200.0, C, 1.0, &AmplitudeRule::Unit).unwrap();
        let expect = enumerate_modes_below(200.0, &room, C).unwrap().len();
        assert_eq!(model.modes.len(), expect);
        for m in &model.modes {
            assert!((m.wavenumber.xi + 6.907755278982138).abs() < 1e-12);
            assert_eq!(m.coefficients.len(), m.group.len());
        }
        // Below the lowest fundamental: no modes at all.
        let empty = make_rigid_wall_model(&room, 30.0, C, 1.0, &AmplitudeRule::Unit).unwrap();
        assert!(empty.modes.is_empty());
    }

    #[test]
    fn source_on_node_gets_exactly_zero_amplitude() {
        let room = paper_room();
        let source = Vec3::new(room.lx / 2.0, 1.1, 0.8);
        let rule = AmplitudeRule::SourceCoupled { source, phase_jitter: 0.2, seed: 5 };
        let model = make_rigid_wall_model(&room, 120.0, C, 1.0, &rule).unwrap();
        let mut saw_odd_x = false;
        for m in &model.modes {
            let n = m.index.unwrap();
            if n.nx % 2 == 1 {
                saw_odd_x = true;
                assert_eq!(m.coefficients[0], Complex64::new(0.0, 0.0), "mode {n}");
            }
        }
        assert!(saw_odd_x);
    }

    #[test]
    fn damping_jitter_stays_in_range() {
        let room = paper_room();
        let mut model = make_rigid_wall_model(&room, 150.0, C, 1.0, &AmplitudeRule::Unit).unwrap();
        let xi0 = crate::dict::damping_prior(1.0);
        model.jitter_dampings(0.2, 11);
        let mut moved = false;
        for m in &model.modes {
            let ratio = m.wavenumber.xi / xi0;
            assert!((0.8..=1.2).contains(&ratio));
            if (ratio - 1.0).abs() > 1e-6 {
                moved = true;
            }
        }
        assert!(moved);
    }

    #[test]
    fn microphone_sampling_is_deterministic_and_bounded() {
        let room = paper_room();
        let center = Vec3::new(0.8, 1.4, 1.0);
        let a = sample_microphones(&room, 20, &center, 1.0, 42).unwrap();
        let b = sample_microphones(&room, 20, &center, 1.0, 42).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!((p.x - center.x).abs() <= 0.5 + 1e-12);
            assert!((p.y - center.y).abs() <= 0.5 + 1e-12);
            assert!((p.z - center.z).abs() <= 0.5 + 1e-12);
        }
        assert!(sample_microphones(&room, 4, &center, 1.0, 1).unwrap().len() == 4);
        assert!(sample_microphones(&room, 0, &center, 1.0, 1).unwrap().is_empty());
        // Cube poking out of the room is rejected.
        let bad = sample_microphones(&room, 3, &Vec3::new(0.3, 1.0, 1.0), 1.0, 1);
        assert!(matches!(bad, Err(SynthesisError::CubeOutsideRoom { .. })));
    }

    #[test]
    fn measurement_set_shape_and_noise() {
        let room = paper_room();
        let model = make_rigid_wall_model(&room, 120.0, C, 1.0, &AmplitudeRule::Unit).unwrap();
        let mics = sample_microphones(&room, 20, &Vec3::new(0.8, 1.4, 1.0), 1.0, 7).unwrap();
        let src = Vec3::new(2.2, 4.5, 1.3);
        let fs = 500.0;

        let clean = build_measurement_set(&model, &mics, &src, fs, 0.8, None).unwrap();
        assert_eq!(clean.samples.len(), 20);
        assert_eq!(clean.sample_count, 400);
        // Noiseless output must be bit-identical to stacked synthesize_rir.
        for (col, p) in clean.samples.iter().zip(mics.iter()) {
            assert_eq!(col, &synthesize_rir(&model, p, fs, 0.8));
        }

        let noisy =
            build_measurement_set(&model, &mics, &src, fs, 0.8, Some(NoiseSpec { snr_db: 40.0, seed: 3 }))
                .unwrap();
        let sig: f64 = clean.samples.iter().flatten().map(|x| x * x).sum();
        let err: f64 = noisy
            .samples
            .iter()
            .zip(clean.samples.iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let snr = 10.0 * (sig / err).log10();
        assert!((snr - 40.0).abs() < 0.5, "snr {snr}");
    }

    #[test]
    fn aliasing_guard_triggers_on_sparse_arrays() {
        let sparse = vec![Vec3::ZERO, Vec3::new(2.0, 0.0, 0.0)];
        assert!(spatial_aliasing_warning(&sparse, 200.0, C).is_some());
        let dense = vec![Vec3::ZERO, Vec3::new(0.4, 0.0, 0.0)];
        assert!(spatial_aliasing_warning(&dense, 200.0, C).is_none());
        assert!(spatial_aliasing_warning(&[Vec3::ZERO], 200.0, C).is_none());
    }
}
