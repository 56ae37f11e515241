//! Closed-form rectangular-room modal physics.
//!
//! Rigid-wall eigenfrequency lattice, mode counting, wave-vector group
//! construction and the temporal/spatial sampling bounds. Everything here is
//! a pure function of its inputs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum ModalError {
    #[error("room side lengths must be strictly positive and finite, got ({0}, {1}, {2})")]
    InvalidRoom(f64, f64, f64),
    #[error("mode index (0, 0, 0) is excluded")]
    ZeroModeIndex,
    #[error("frequency must be strictly positive, got {0}")]
    InvalidFrequency(f64),
    #[error("speed of sound must be strictly positive, got {0}")]
    InvalidSpeed(f64),
    #[error("band edges must satisfy 0 < f_lo < f_hi, got ({0}, {1})")]
    InvalidBand(f64, f64),
}

/// Side lengths of a rectangular room in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomGeometry {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl RoomGeometry {
    pub fn new(lx: f64, ly: f64, lz: f64) -> Result<Self, ModalError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(lx) && ok(ly) && ok(lz) {
            Ok(RoomGeometry { lx, ly, lz })
        } else {
            Err(ModalError::InvalidRoom(lx, ly, lz))
        }
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    pub fn side(&self, axis: usize) -> f64 {
        match axis {
            0 => self.lx,
            1 => self.ly,
            _ => self.lz,
        }
    }

    /// True when `p` lies inside the room (walls included).
    pub fn contains(&self, p: &Vec3) -> bool {
        (0.0..=self.lx).contains(&p.x)
            && (0.0..=self.ly).contains(&p.y)
            && (0.0..=self.lz).contains(&p.z)
    }
}

/// Lattice index of one room mode; (0, 0, 0) is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub nx: u32,
    pub ny: u32,
    pub nz: u32,
}

impl ModeIndex {
    pub fn new(nx: u32, ny: u32, nz: u32) -> Result<Self, ModalError> {
        if nx == 0 && ny == 0 && nz == 0 {
            Err(ModalError::ZeroModeIndex)
        } else {
            Ok(ModeIndex { nx, ny, nz })
        }
    }

    pub fn component(&self, axis: usize) -> u32 {
        match axis {
            0 => self.nx,
            1 => self.ny,
            _ => self.nz,
        }
    }

    fn nonzero_axes(&self) -> Vec<usize> {
        (0..3).filter(|&a| self.component(a) > 0).collect()
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.nx, self.ny, self.nz)
    }
}

/// Complex wave number of one mode: resonant frequency and damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveNumber {
    /// Angular resonant frequency in rad/s; strictly positive.
    pub omega: f64,
    /// Damping factor in 1/s; strictly negative for a decaying mode.
    pub xi: f64,
}

impl WaveNumber {
    pub fn new(omega: f64, xi: f64) -> Self {
        debug_assert!(omega > 0.0 && xi < 0.0, "wave number ({omega}, {xi}) out of domain");
        WaveNumber { omega, xi }
    }

    pub fn frequency_hz(&self) -> f64 {
        self.omega / (2.0 * std::f64::consts::PI)
    }
}

/// Mode classification by the number and position of zero index components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    AxialX,
    AxialY,
    AxialZ,
    TangentialXy,
    TangentialXz,
    TangentialYz,
    Oblique,
}

/// Coarse class of a [`Topology`], used when scanning candidate groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyClass {
    Axial,
    Tangential,
    Oblique,
}

impl Topology {
    pub fn class(&self) -> TopologyClass {
        match self {
            Topology::AxialX | Topology::AxialY | Topology::AxialZ => TopologyClass::Axial,
            Topology::TangentialXy | Topology::TangentialXz | Topology::TangentialYz => {
                TopologyClass::Tangential
            }
            Topology::Oblique => TopologyClass::Oblique,
        }
    }

    /// Classify from the set of axes that carry a nonzero component.
    pub fn from_nonzero_axes(axes: &[usize]) -> Topology {
        match axes {
            [0] => Topology::AxialX,
            [1] => Topology::AxialY,
            [2] => Topology::AxialZ,
            [0, 1] => Topology::TangentialXy,
            [0, 2] => Topology::TangentialXz,
            [1, 2] => Topology::TangentialYz,
            _ => Topology::Oblique,
        }
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Topology::AxialX => "axial-x",
            Topology::AxialY => "axial-y",
            Topology::AxialZ => "axial-z",
            Topology::TangentialXy => "tangential-xy",
            Topology::TangentialXz => "tangential-xz",
            Topology::TangentialYz => "tangential-yz",
            Topology::Oblique => "oblique",
        };
        write!(f, "{name}")
    }
}

/// Sign-symmetric set of wave vectors belonging to one mode.
///
/// Oblique modes carry 8 vectors, tangential 4, axial 2. The set is closed
/// under sign flips of the nonzero components and every member has the same
/// Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveVectorGroup {
    pub vectors: Vec<Vec3>,
    pub topology: Topology,
}

impl WaveVectorGroup {
    /// Build the group from a base vector with non-negative components.
    ///
    /// The group is every sign combination over the strictly positive
    /// components, in binary order of flips, so the base vector comes first.
    pub fn from_base(base: Vec3) -> WaveVectorGroup {
        let axes: Vec<usize> = (0..3).filter(|&a| base.component(a) != 0.0).collect();
        let mut vectors = Vec::with_capacity(1 << axes.len());
        for mask in 0u32..(1 << axes.len()) {
            let mut v = base;
            for (bit, &axis) in axes.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v.set_component(axis, -v.component(axis));
                }
            }
            vectors.push(v);
        }
        WaveVectorGroup { vectors, topology: Topology::from_nonzero_axes(&axes) }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Representative direction: componentwise absolute value of the first
    /// member, normalized. All members map to the same representative.
    pub fn direction(&self) -> Vec3 {
        self.vectors[0].abs().normalized()
    }

    /// Common Euclidean norm of the members.
    pub fn radius(&self) -> f64 {
        self.vectors[0].norm()
    }
}

/// Temporal and spatial sampling description of a measurement grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    /// Temporal sampling rate in Hz.
    pub fs: f64,
    /// Temporal step in seconds; always `1 / fs`.
    pub dt: f64,
    /// Per-axis spatial step in meters, when the grid is regular.
    pub spatial_steps: Option<[f64; 3]>,
}

impl SamplingSpec {
    pub fn from_rate(fs: f64) -> Self {
        SamplingSpec { fs, dt: 1.0 / fs, spatial_steps: None }
    }

    pub fn with_spatial_steps(mut self, steps: [f64; 3]) -> Self {
        self.spatial_steps = Some(steps);
        self
    }

    /// Check the temporal and spatial sampling conditions against a cutoff.
    /// Returns a human-readable violation per failed condition.
    pub fn violations_for_cutoff(&self, fc: f64, c: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.fs <= 2.0 * fc {
            out.push(format!("temporal: fs = {} Hz is not above the Nyquist rate 2·fc = {} Hz", self.fs, 2.0 * fc));
        }
        if let Some(steps) = self.spatial_steps {
            let bound = spatial_step_bound(fc, c);
            for (axis, step) in steps.iter().enumerate() {
                if *step >= bound {
                    out.push(format!("spatial: step {} = {} m exceeds the bound {} m", ["x", "y", "z"][axis], step, bound));
                }
            }
        }
        out
    }
}

/// Angular eigenfrequency of mode `n` in rad/s:
/// `omega = pi·c·sqrt((nx/Lx)^2 + (ny/Ly)^2 + (nz/Lz)^2)`.
pub fn eigenfrequency(n: &ModeIndex, room: &RoomGeometry, c: f64) -> Result<f64, ModalError> {
    if n.nx == 0 && n.ny == 0 && n.nz == 0 {
        return Err(ModalError::ZeroModeIndex);
    }
    if c <= 0.0 {
        return Err(ModalError::InvalidSpeed(c));
    }
    let sx = n.nx as f64 / room.lx;
    let sy = n.ny as f64 / room.ly;
    let sz = n.nz as f64 / room.lz;
    Ok(std::f64::consts::PI * c * (sx * sx + sy * sy + sz * sz).sqrt())
}

/// Exhaustive list of all mode indices with eigenfrequency at most `2·pi·fc`,
/// sorted ascending by frequency (ties by index). Per-axis index bounds come
/// from `n_i <= ceil(2·fc·L_i / c)`, which over-enumerates and then filters.
pub fn enumerate_modes_below(
    fc: f64,
    room: &RoomGeometry,
    c: f64,
) -> Result<Vec<(ModeIndex, f64)>, ModalError> {
    if fc <= 0.0 {
        return Err(ModalError::InvalidFrequency(fc));
    }
    if c <= 0.0 {
        return Err(ModalError::InvalidSpeed(c));
    }
    let omega_max = 2.0 * std::f64::consts::PI * fc;
    let bound = |l: f64| (2.0 * fc * l / c).ceil() as u32;
    let (bx, by, bz) = (bound(room.lx), bound(room.ly), bound(room.lz));
    let mut out = Vec::new();
    for nx in 0..=bx {
        for ny in 0..=by {
            for nz in 0..=bz {
                if nx == 0 && ny == 0 && nz == 0 {
                    continue;
                }
                let n = ModeIndex { nx, ny, nz };
                let omega = eigenfrequency(&n, room, c)?;
                if omega <= omega_max {
                    out.push((n, omega));
                }
            }
        }
    }
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(out)
}

/// Asymptotic mode count up to `fc`: `(4·pi/3)·V·(fc/c)^3`.
pub fn mode_count_estimate(fc: f64, room: &RoomGeometry, c: f64) -> f64 {
    let r = fc / c;
    4.0 * std::f64::consts::PI / 3.0 * room.volume() * r * r * r
}

/// Wave-vector group of mode `n`: base vector `(pi·nx/Lx, pi·ny/Ly, pi·nz/Lz)`
/// expanded over all sign combinations of its nonzero components.
pub fn wave_vector_group(n: &ModeIndex, room: &RoomGeometry) -> Result<WaveVectorGroup, ModalError> {
    if n.nx == 0 && n.ny == 0 && n.nz == 0 {
        return Err(ModalError::ZeroModeIndex);
    }
    let pi = std::f64::consts::PI;
    let base = Vec3::new(
        pi * n.nx as f64 / room.lx,
        pi * n.ny as f64 / room.ly,
        pi * n.nz as f64 / room.lz,
    );
    Ok(WaveVectorGroup::from_base(base))
}

/// Largest admissible spatial sampling step for content up to `fc`: `c / (2·fc)`.
pub fn spatial_step_bound(fc: f64, c: f64) -> f64 {
    c / (2.0 * fc)
}

/// Side-length range whose axial fundamentals fall inside `[f_lo, f_hi]`:
/// `(c/(2·f_hi), c/(2·f_lo))`.
pub fn band_to_room_range(f_lo: f64, f_hi: f64, c: f64) -> Result<(f64, f64), ModalError> {
    if !(f_lo > 0.0 && f_lo < f_hi) {
        return Err(ModalError::InvalidBand(f_lo, f_hi));
    }
    Ok((c / (2.0 * f_hi), c / (2.0 * f_lo)))
}
