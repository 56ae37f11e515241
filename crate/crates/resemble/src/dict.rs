//! Dictionaries for the matching-pursuit searches: the (omega, xi) grid of
//! damped complex exponentials and the quasi-uniform sphere of candidate
//! wave-vector groups.

use num_complex::Complex64;
use thiserror::Error;

use crate::modal::{TopologyClass, WaveNumber, WaveVectorGroup};
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum DictError {
    #[error("requested band ({0}, {1}) Hz does not intersect (0, fs/2)")]
    EmptyBand(f64, f64),
    #[error("grid sizes must be at least 1")]
    EmptyGrid,
    #[error("sphere sampling needs at least 8 points, got {0}")]
    TooFewSpherePoints(usize),
    #[error("rt60 must be strictly positive, got {0}")]
    InvalidRt60(f64),
}

/// Unit-norm dictionary of damped complex exponentials over an
/// (omega, xi) grid.
///
/// Atoms are `e^{xi t} e^{j omega t}` sampled at `t_i = i / fs` and scaled to
/// unit Euclidean norm. Storage is factored into per-`xi` envelopes and
/// per-`omega` oscillators (an atom's norm depends only on `xi`); [`Self::atom`]
/// materializes any grid point on demand.
#[derive(Debug, Clone)]
pub struct TemporalDictionary {
    pub fs: f64,
    pub t_len: usize,
    /// Angular frequencies in rad/s, linear spacing, ascending.
    pub omegas: Vec<f64>,
    /// Damping factors in 1/s, log-magnitude spacing from `10 xi0` to `0.1 xi0`.
    pub xis: Vec<f64>,
    /// Damping prior the grid was centered on.
    pub xi0: f64,
    pub(crate) envelopes: Vec<Vec<f64>>,
    pub(crate) env_norms: Vec<f64>,
    pub(crate) osc_re: Vec<Vec<f64>>,
    pub(crate) osc_im: Vec<Vec<f64>>,
}

impl TemporalDictionary {
    pub fn grid_len(&self) -> usize {
        self.omegas.len() * self.xis.len()
    }

    /// Materialize the unit-norm atom at grid point (`omega_idx`, `xi_idx`).
    pub fn atom(&self, omega_idx: usize, xi_idx: usize) -> Vec<Complex64> {
        let env = &self.envelopes[xi_idx];
        let scale = 1.0 / self.env_norms[xi_idx];
        let (or, oi) = (&self.osc_re[omega_idx], &self.osc_im[omega_idx]);
        (0..self.t_len)
            .map(|t| Complex64::new(env[t] * or[t] * scale, env[t] * oi[t] * scale))
            .collect()
    }

    /// Spacing of the omega grid in rad/s (0 for a single-point grid).
    pub fn omega_step(&self) -> f64 {
        if self.omegas.len() < 2 {
            0.0
        } else {
            self.omegas[1] - self.omegas[0]
        }
    }

    /// Spacing of the xi grid in log10 magnitude (0 for a single-point grid).
    pub fn xi_log_step(&self) -> f64 {
        if self.xis.len() < 2 {
            0.0
        } else {
            (self.xis[1] / self.xis[0]).abs().log10().abs()
        }
    }

    /// Multiplicative half-step bound of the xi grid: the true damping is
    /// within this factor of the nearest grid point.
    pub fn xi_step_factor(&self) -> f64 {
        10f64.powf(self.xi_log_step())
    }
}

/// Damping prior from a reverberation time: `xi0 = -3 ln(10) / rt60`.
pub fn damping_prior(rt60: f64) -> f64 {
    -3.0 * 10f64.ln() / rt60
}

/// Build the temporal dictionary for one analysis band.
///
/// `omega_count` points span `band` intersected with the representable range
/// `[0, fs/2]` Hz; `xi_count` points span `[10 xi0, 0.1 xi0]` with logarithmic
/// magnitude spacing (a single point sits at `xi0`).
pub fn build_temporal_dictionary(
    fs: f64,
    t_len: usize,
    rt60: f64,
    omega_count: usize,
    xi_count: usize,
    band: (f64, f64),
) -> Result<TemporalDictionary, DictError> {
    if omega_count == 0 || xi_count == 0 || t_len == 0 {
        return Err(DictError::EmptyGrid);
    }
    if rt60 <= 0.0 {
        return Err(DictError::InvalidRt60(rt60));
    }
    let f_lo = band.0.max(0.0);
    let f_hi = band.1.min(fs / 2.0);
    if !(f_lo < f_hi) {
        return Err(DictError::EmptyBand(band.0, band.1));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let omegas: Vec<f64> = if omega_count == 1 {
        vec![two_pi * 0.5 * (f_lo + f_hi)]
    } else {
        (0..omega_count)
            .map(|i| two_pi * (f_lo + (f_hi - f_lo) * i as f64 / (omega_count - 1) as f64))
            .collect()
    };
    let xi0 = damping_prior(rt60);
    let xis: Vec<f64> = if xi_count == 1 {
        vec![xi0]
    } else {
        (0..xi_count)
            .map(|j| {
                let expo = 1.0 - 2.0 * j as f64 / (xi_count - 1) as f64;
                xi0 * 10f64.powf(expo)
            })
            .collect()
    };

    let dt = 1.0 / fs;
    let envelopes: Vec<Vec<f64>> = xis
        .iter()
        .map(|&xi| (0..t_len).map(|i| (xi * i as f64 * dt).exp()).collect())
        .collect();
    let env_norms: Vec<f64> = envelopes
        .iter()
        .map(|env: &Vec<f64>| env.iter().map(|e| e * e).sum::<f64>().sqrt())
        .collect();
    let mut osc_re = Vec::with_capacity(omega_count);
    let mut osc_im = Vec::with_capacity(omega_count);
    for &omega in &omegas {
        let mut re = Vec::with_capacity(t_len);
        let mut im = Vec::with_capacity(t_len);
        for i in 0..t_len {
            let (s, c) = (omega * i as f64 * dt).sin_cos();
            re.push(c);
            im.push(s);
        }
        osc_re.push(re);
        osc_im.push(im);
    }

    Ok(TemporalDictionary { fs, t_len, omegas, xis, xi0, envelopes, env_norms, osc_re, osc_im })
}

/// Quasi-uniform directions on a sphere of a given radius (Fibonacci lattice).
#[derive(Debug, Clone)]
pub struct SphereDictionary {
    /// Unit direction per sample point.
    pub directions: Vec<Vec3>,
    /// Sphere radius in rad/m.
    pub radius: f64,
    /// Indices of directions with all components strictly positive; these are
    /// the base directions of the oblique candidate groups.
    pub octant: Vec<usize>,
    /// Mean nearest-neighbor geodesic gap in radians.
    pub mean_gap: f64,
    /// Maximum nearest-neighbor geodesic gap in radians; reported as the
    /// angular search resolution.
    pub max_gap: f64,
}

impl SphereDictionary {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Deterministic quasi-uniform sphere sampling via the Fibonacci lattice.
pub fn sample_sphere(radius: f64, point_count: usize) -> Result<SphereDictionary, DictError> {
    if point_count < 8 {
        return Err(DictError::TooFewSpherePoints(point_count));
    }
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let n = point_count as f64;
    let mut directions = Vec::with_capacity(point_count);
    for i in 0..point_count {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / golden;
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n;
        let r = (1.0 - z * z).max(0.0).sqrt();
        directions.push(Vec3::new(r * theta.cos(), r * theta.sin(), z));
    }

    // Nearest-neighbor geodesic gaps; quadratic but cheap at the densities
    // used here (a few thousand points).
    let mut mean_gap = 0.0;
    let mut max_gap: f64 = 0.0;
    for (i, d) in directions.iter().enumerate() {
        let mut best = -1.0f64;
        for (j, e) in directions.iter().enumerate() {
            if i != j {
                best = best.max(d.dot(e));
            }
        }
        let gap = best.clamp(-1.0, 1.0).acos();
        mean_gap += gap;
        max_gap = max_gap.max(gap);
    }
    mean_gap /= point_count as f64;

    let octant = directions
        .iter()
        .enumerate()
        .filter(|(_, d)| d.x > 0.0 && d.y > 0.0 && d.z > 0.0)
        .map(|(i, _)| i)
        .collect();

    Ok(SphereDictionary { directions, radius, octant, mean_gap, max_gap })
}

/// Expand a sphere into candidate wave-vector groups for the requested
/// topology classes.
///
/// Axial candidates are the three exact axis pairs; tangential candidates
/// sample the quarter of each great circle at the sphere's mean angular gap;
/// oblique candidates are the strictly-positive-octant sample directions.
/// Every candidate is snapped to the sphere radius.
pub fn build_group_candidates(
    sphere: &SphereDictionary,
    classes: &[TopologyClass],
) -> Vec<WaveVectorGroup> {
    let r = sphere.radius;
    let mut out = Vec::new();
    for class in classes {
        match class {
            TopologyClass::Axial => {
                for axis in 0..3 {
                    let mut base = Vec3::ZERO;
                    base.set_component(axis, r);
                    out.push(WaveVectorGroup::from_base(base));
                }
            }
            TopologyClass::Tangential => {
                let quarter = std::f64::consts::FRAC_PI_2;
                let n_tan = (quarter / sphere.mean_gap).ceil().max(1.0) as usize;
                for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
                    for k in 0..n_tan {
                        let phi = (k as f64 + 0.5) * quarter / n_tan as f64;
                        let mut base = Vec3::ZERO;
                        base.set_component(a, r * phi.cos());
                        base.set_component(b, r * phi.sin());
                        out.push(WaveVectorGroup::from_base(base));
                    }
                }
            }
            TopologyClass::Oblique => {
                for &i in &sphere.octant {
                    out.push(WaveVectorGroup::from_base(sphere.directions[i].scale(r)));
                }
            }
        }
    }
    out
}

/// Spatio-temporal atom: shared temporal factor `e^{xi t} e^{j omega t}` times
/// the plane-wave phase `e^{j k · X_m}` per microphone. Not unit norm.
pub fn spatio_temporal_atom(
    wavenumber: &WaveNumber,
    k: &Vec3,
    positions: &[Vec3],
    fs: f64,
    t_len: usize,
) -> Vec<Vec<Complex64>> {
    let dt = 1.0 / fs;
    let temporal: Vec<Complex64> = (0..t_len)
        .map(|i| {
            let t = i as f64 * dt;
            Complex64::from_polar((wavenumber.xi * t).exp(), wavenumber.omega * t)
        })
        .collect();
    positions
        .iter()
        .map(|x| {
            let phase = Complex64::from_polar(1.0, k.dot(x));
            temporal.iter().map(|&z| z * phase).collect()
        })
        .collect()
}
