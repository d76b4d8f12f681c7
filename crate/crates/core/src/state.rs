//! Rays in `CP^(2j)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_rep::{Spin, SpinRep};
use crate::{CMatrix, CVector, C64};

/// Amplitudes below this modulus are skipped when choosing the phase anchor.
const PHASE_ANCHOR_FLOOR: f64 = 1e-14;

/// Unit-norm, phase-canonical representative of a ray, in the `|j, m>` basis
/// with `m` descending.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    spin: Spin,
    amps: CVector,
}

impl PureState {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn j(&self) -> f64 {
        self.spin.value()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// `U |psi>`, re-canonicalized.
    pub fn transformed(&self, u: &CMatrix) -> PureState {
        let v = u * &self.amps;
        canonical_from_vector(self.spin, v).expect("unitary image of a ray is nonzero")
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            j: self.j(),
            amplitudes: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// On-disk state: `{"j": 1.5, "amplitudes": [[re, im], ...]}`, `m` descending.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub j: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state file serializes")
    }

    pub fn into_state(self) -> Result<PureState> {
        let raw: Vec<C64> = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        canonicalize(&raw, self.j)
    }
}

/// Normalizes `raw` and rotates its phase so that the first nonzero
/// amplitude is real and non-negative.
pub fn canonicalize(raw: &[C64], j: f64) -> Result<PureState> {
    let spin = Spin::from_f64(j)?;
    if raw.len() != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), got: raw.len() });
    }
    canonical_from_vector(spin, CVector::from_column_slice(raw))
}

pub(crate) fn canonical_from_vector(spin: Spin, v: CVector) -> Result<PureState> {
    if v.len() != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), got: v.len() });
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite amplitude".into()));
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut amps = v.unscale(norm);
    let anchor = amps
        .iter()
        .find(|z| z.norm() > PHASE_ANCHOR_FLOOR)
        .copied()
        .expect("a unit vector has an amplitude above the anchor floor");
    let phase = anchor.conj() / anchor.norm();
    amps *= phase;
    // the anchor is real by construction; drop the rounding residue
    if let Some(z) = amps.iter_mut().find(|z| z.norm() > PHASE_ANCHOR_FLOOR) {
        *z = C64::new(z.norm(), 0.0);
    }
    Ok(PureState { spin, amps })
}

/// `sqrt(1 - |<a|b>|^2)`, evaluated as the norm of the component of `b`
/// orthogonal to `a`, which keeps full absolute accuracy near zero.
pub fn ray_distance(a: &PureState, b: &PureState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(vector_ray_distance(&a.amps, &b.amps))
}

/// Ray distance between two unit vectors.
pub(crate) fn vector_ray_distance(a: &CVector, b: &CVector) -> f64 {
    let overlap = a.dotc(b);
    let residual = b - a * overlap;
    residual.norm().clamp(0.0, 1.0)
}

/// The basis state `|j, m>`.
pub fn eigenstate(rep: &SpinRep, m: f64) -> Result<PureState> {
    let spin = rep.spin();
    let index = spin.index_of(m)?;
    Ok(basis_state(spin, index))
}

pub(crate) fn basis_state(spin: Spin, index: usize) -> PureState {
    let mut amps = CVector::zeros(spin.dim());
    amps[index] = C64::new(1.0, 0.0);
    PureState { spin, amps }
}

/// Unitarily invariant random ray: a complex standard Gaussian vector,
/// canonicalized.
pub fn random_state<R: Rng + ?Sized>(spin: Spin, rng: &mut R) -> PureState {
    loop {
        let v = CVector::from_iterator(
            spin.dim(),
            (0..spin.dim()).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))),
        );
        if let Ok(s) = canonical_from_vector(spin, v) {
            return s;
        }
    }
}

/// Moduli and relative phases of the homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OctantCoords {
    pub moduli: Vec<f64>,
    /// Phases of the non-reference amplitudes relative to the reference
    /// (largest-modulus) amplitude, in basis order, in `[0, 2 pi)`.
    pub rel_phases: Vec<f64>,
    pub reference: usize,
}

pub fn octant_coords(state: &PureState) -> OctantCoords {
    let moduli: Vec<f64> = state.amps.iter().map(|z| z.norm()).collect();
    let mut reference = 0;
    for (k, &m) in moduli.iter().enumerate() {
        if m > moduli[reference] {
            reference = k;
        }
    }
    let ref_arg = state.amps[reference].arg();
    let rel_phases = state
        .amps
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != reference)
        .map(|(_, z)| {
            if *z == C64::new(0.0, 0.0) {
                0.0
            } else {
                (z.arg() - ref_arg).rem_euclid(2.0 * std::f64::consts::PI)
            }
        })
        .map(|p| if p >= 2.0 * std::f64::consts::PI { 0.0 } else { p })
        .collect();
    OctantCoords { moduli, rel_phases, reference }
}

/// Vertical projection of the `CP^2` octant onto the `(|Z_1|, |Z_2|)`
/// quadrant, with `Z_1`, `Z_2` the amplitudes of `|1>` and `|-1>`, plus the
/// rotated coordinates `u` along and `v` across the bisectrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OctantProjection {
    pub abs_z1: f64,
    pub abs_z2: f64,
    pub u: f64,
    pub v: f64,
}

pub fn octant_projection_j1(state: &PureState) -> Result<OctantProjection> {
    if state.spin().twice() != 2 {
        return Err(Error::RequiresSpinOne(state.j()));
    }
    let abs_z1 = state.amps[0].norm();
    let abs_z2 = state.amps[2].norm();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(OctantProjection { abs_z1, abs_z2, u: s * (abs_z1 + abs_z2), v: s * (abs_z1 - abs_z2) })
}
