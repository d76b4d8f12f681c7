//! Spin-`j` irreducible representations of su(2) and their exponentiation.
//!
//! Basis vectors are ordered by descending magnetic quantum number,
//! `m = j, j-1, ..., -j`, so that `J_z` is `diag(j, ..., -j)`.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, exp_i_hermitian};
use crate::{CMatrix, C64};

/// A positive half-integer spin label, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Spin { twice })
    }

    /// Parses a decimal spin label such as `0.5`, `1` or `1.5`.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j <= 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        Spin::from_twice(twice.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// Magnetic quantum number of basis position `index`.
    pub fn m_at(self, index: usize) -> f64 {
        self.value() - index as f64
    }

    /// Basis position of magnetic quantum number `m`.
    pub fn index_of(self, m: f64) -> Result<usize> {
        let offset = self.value() - m;
        let twice_offset = 2.0 * offset;
        let ok = (offset - offset.round()).abs() < 1e-9
            && offset.round() >= 0.0
            && offset.round() <= self.twice as f64
            && (twice_offset - twice_offset.round()).abs() < 1e-9;
        if !ok {
            return Err(Error::InvalidMagnetic { j: self.value(), m });
        }
        Ok(offset.round() as usize)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Matrices of the spin-`j` representation.
#[derive(Clone, Debug)]
pub struct SpinRep {
    spin: Spin,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
}

impl SpinRep {
    pub fn new(spin: Spin) -> Self {
        let dim = spin.dim();
        let j = spin.value();
        let mut jplus = CMatrix::zeros(dim, dim);
        let mut jz = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            let m = spin.m_at(k);
            jz[(k, k)] = c(m, 0.0);
            // <m+1| J_+ |m> sits one row above the diagonal.
            if k > 0 {
                jplus[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
            }
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus) * c(0.5, 0.0);
        let jy = (&jplus - &jminus) * c(0.0, -0.5);
        SpinRep { spin, jx, jy, jz, jplus, jminus }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn j(&self) -> f64 {
        self.spin.value()
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn generators(&self) -> [&CMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// `r · J`.
    pub fn dot(&self, r: [f64; 3]) -> CMatrix {
        &self.jx * c(r[0], 0.0) + &self.jy * c(r[1], 0.0) + &self.jz * c(r[2], 0.0)
    }

    /// `J_x J_x + J_y J_y + J_z J_z`.
    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

/// Builds the spin-`j` representation; `j` must be a positive half-integer.
pub fn build_rep(j: f64) -> Result<SpinRep> {
    Ok(SpinRep::new(Spin::from_f64(j)?))
}

/// Canonical group coordinates: `U(r) = exp(i r·J)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalCoords(pub [f64; 3]);

impl CanonicalCoords {
    pub const ZERO: CanonicalCoords = CanonicalCoords([0.0; 3]);

    pub fn angle(&self) -> f64 {
        let [x, y, z] = self.0;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn neg(&self) -> CanonicalCoords {
        let [x, y, z] = self.0;
        CanonicalCoords([-x, -y, -z])
    }

    /// Unit quaternion `(w, v)` of the spin-1/2 image `w + i v·σ`.
    pub fn quaternion(&self) -> [f64; 4] {
        let theta = self.angle();
        if theta == 0.0 {
            return [1.0, 0.0, 0.0, 0.0];
        }
        let s = (0.5 * theta).sin() / theta;
        let [x, y, z] = self.0;
        [(0.5 * theta).cos(), s * x, s * y, s * z]
    }

    /// The rotation `R` with `<U psi| J |U psi> = R <psi| J |psi>` and
    /// `U (n·J) U† = (R n)·J`.
    ///
    /// Since `U = exp(i r·J)`, this is the rotation by `-|r|` about `r/|r|`.
    pub fn adjoint_rotation(&self) -> [[f64; 3]; 3] {
        let [w, x, y, z] = self.quaternion();
        // quaternion (w, -v) rotates actively by -|r|
        let (x, y, z) = (-x, -y, -z);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }
}

/// `exp(i r·J)` by spectral decomposition of the Hermitian matrix `r·J`.
pub fn exp_su2(rep: &SpinRep, r: CanonicalCoords) -> CMatrix {
    exp_i_hermitian(&rep.dot(r.0), 1.0)
}

pub fn rotation_about(axis: [f64; 3], angle: f64) -> Result<CanonicalCoords> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(CanonicalCoords([angle * axis[0], angle * axis[1], angle * axis[2]]))
}

/// Haar-uniform SU(2) element in canonical coordinates.
///
/// A normalized 4-component Gaussian is a uniform unit quaternion `(w, v)`;
/// it maps to `r = 2 atan2(|v|, w) v/|v|`.
pub fn sample_haar<R: Rng + ?Sized>(rng: &mut R) -> CanonicalCoords {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|a| a * a).sum::<f64>().sqrt();
    let w = q[0] / norm;
    let v = [q[1] / norm, q[2] / norm, q[3] / norm];
    let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if vn == 0.0 {
        return CanonicalCoords::ZERO;
    }
    let scale = 2.0 * vn.atan2(w) / vn;
    CanonicalCoords([scale * v[0], scale * v[1], scale * v[2]])
}

/// Euler-angle group element `exp(i a J_z) exp(i b J_y) exp(i g J_z)`.
pub fn euler_zyz(rep: &SpinRep, alpha: f64, beta: f64, gamma: f64) -> CMatrix {
    let rz = |t: f64| {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            rep.dim(),
            (0..rep.dim()).map(|k| C64::from_polar(1.0, t * rep.spin().m_at(k))),
        ))
    };
    rz(alpha) * exp_i_hermitian(&rep.jy, beta) * rz(gamma)
}
