//! SU(2) coherent-state families, resolutions of identity and the spin
//! uncertainty functional.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::linalg::{c, exp_i_hermitian, exp_nilpotent};
use crate::quadrature::{gauss_legendre, periodic_trapezoid};
use crate::spin_rep::{Spin, SpinRep};
use crate::state::{canonical_from_vector, canonicalize, ray_distance, PureState};
use crate::{CMatrix, CVector, C64};

/// A family `{U(z) |j, m>}` labelled by the fiducial weight `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentFamilySpec {
    pub spin: Spin,
    pub fiducial_m: f64,
}

impl CoherentFamilySpec {
    pub fn new(spin: Spin, fiducial_m: f64) -> Result<Self> {
        spin.index_of(fiducial_m)?;
        Ok(CoherentFamilySpec { spin, fiducial_m })
    }

    pub fn member(&self, rep: &SpinRep, z: C64) -> Result<PureState> {
        spin_coherent_general(rep, self.fiducial_m, z)
    }
}

/// `e^(z J_-) |j>`, normalized.
pub fn spin_coherent_highest(rep: &SpinRep, z: C64) -> PureState {
    let mut top = CVector::zeros(rep.dim());
    top[0] = c(1.0, 0.0);
    let v = exp_nilpotent(&(&rep.jminus * z)) * top;
    canonical_from_vector(rep.spin(), v).expect("coherent state is nonzero")
}

/// `e^(z J_-) (1 + |z|^2)^(-J_z) e^(-z* J_+) |m>`.
///
/// This is the disentangled form of the unitary `exp(xi J_- - xi* J_+)` with
/// `xi = atan|z| e^(i arg z)`, so every member lies on the orbit of `|m>`.
/// On `|j>` the middle and right factors only rescale, which recovers
/// [`spin_coherent_highest`].
pub fn spin_coherent_general(rep: &SpinRep, m: f64, z: C64) -> Result<PureState> {
    let spin = rep.spin();
    let index = spin.index_of(m)?;
    let mut v = CVector::zeros(rep.dim());
    v[index] = c(1.0, 0.0);
    let v = exp_nilpotent(&(&rep.jplus * -z.conj())) * v;
    let scale = 1.0 + z.norm_sqr();
    let v = CVector::from_fn(rep.dim(), |k, _| v[k] * scale.powf(-spin.m_at(k)));
    let v = exp_nilpotent(&(&rep.jminus * z)) * v;
    canonical_from_vector(spin, v)
}

/// `exp(xi J_- - xi* J_+)` computed spectrally.
pub fn su2_displacement(rep: &SpinRep, xi: C64) -> CMatrix {
    // xi J_- - xi* J_+ = i H with H Hermitian
    let h = (&rep.jminus * xi - &rep.jplus * xi.conj()) * c(0.0, -1.0);
    exp_i_hermitian(&h, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Orbit of `|1>`, isomorphic to the two-sphere.
    S2,
    /// Orbit of `|0>`, isomorphic to the real projective plane.
    RP2,
}

/// The two families of `j = 1` rays that are eigenvectors of a spin
/// component, with the amplitudes exactly as printed in the source
/// parametrization.
pub fn j1_orbit_family(kind: FamilyKind, alpha: f64, beta: f64) -> PureState {
    let e = |s: f64| C64::from_polar(1.0, s * beta);
    let (s2, c2) = (2.0 * alpha).sin_cos();
    let amps = match kind {
        FamilyKind::S2 => [
            e(-1.0) * alpha.cos().powi(2),
            c(s2 * FRAC_1_SQRT_2, 0.0),
            e(1.0) * alpha.sin().powi(2),
        ],
        FamilyKind::RP2 => [e(-1.0) * (-s2 * FRAC_1_SQRT_2), c(c2, 0.0), e(1.0) * (s2 * FRAC_1_SQRT_2)],
    };
    canonicalize(&amps, 1.0).expect("family member is a unit vector")
}

/// `(sin 2a cos b, sin 2a sin b, cos 2a)`, the direction whose spin component
/// the family member diagonalizes.
pub fn direction(alpha: f64, beta: f64) -> [f64; 3] {
    let (s2, c2) = (2.0 * alpha).sin_cos();
    [s2 * beta.cos(), s2 * beta.sin(), c2]
}

/// The nearest member of the `RP2` family to a `j = 1` ray, together with its
/// parameters and ray distance.
///
/// The `RP2` members are exactly the rays with a real representative in the
/// Cartesian basis `e_x = (-|1> + |-1>)/sqrt2`, `e_y = i(|1> + |-1>)/sqrt2`,
/// `e_z = |0>`. For Cartesian components `a + i b` the best overlap with a
/// real unit vector `n` is the top eigenvalue of `a a^T + b b^T`.
pub fn nearest_rp2_member(state: &PureState) -> Result<(f64, f64, f64)> {
    if state.spin().twice() != 2 {
        return Err(Error::RequiresSpinOne(state.j()));
    }
    let z = state.amplitudes();
    let s = FRAC_1_SQRT_2;
    let cart = [(z[2] - z[0]) * s, (z[0] + z[2]) * c(0.0, -s), z[1]];
    let a = nalgebra::Vector3::new(cart[0].re, cart[1].re, cart[2].re);
    let b = nalgebra::Vector3::new(cart[0].im, cart[1].im, cart[2].im);
    let m: Matrix3<f64> = a * a.transpose() + b * b.transpose();
    let eig = m.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let mut n = eig.eigenvectors.column(top).into_owned();
    if n[2] < 0.0 {
        n = -n;
    }
    let alpha = 0.5 * n[2].clamp(-1.0, 1.0).acos();
    let beta = n[1].atan2(n[0]).rem_euclid(2.0 * std::f64::consts::PI);
    let d = ray_distance(state, &j1_orbit_family(FamilyKind::RP2, alpha, beta))?;
    Ok((alpha, beta, d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    /// `|| dim * integral - I ||_F`
    pub defect: f64,
    /// Quadrature estimate of `int |<phi|U(g)|phi>|^2 dg`, which is
    /// `1/dim` when the rule is exact.
    pub d_prime: f64,
    pub quadrature_orders: [usize; 3],
}

/// `(4j+2, 2j+2, 4j+2)`: exact for the degree-`4j` trigonometric
/// polynomials in the Euler angles that the projector integrand contains.
pub fn default_identity_orders(spin: Spin) -> [usize; 3] {
    let t = spin.twice() as usize;
    [2 * t + 2, t + 2, 2 * t + 2]
}

/// Quadrature approximation of `int U(g)|phi><phi|U(g)^† dg` over normalized
/// Haar measure, with `U = e^(i a J_z) e^(i b J_y) e^(i g J_z)`, trapezoid
/// rules in `a` and `g` and Gauss–Legendre in `cos b`.
pub fn identity_defect(
    rep: &SpinRep,
    fiducial: &PureState,
    n_alpha: usize,
    n_beta: usize,
    n_gamma: usize,
) -> Result<IdentityCheck> {
    if n_alpha == 0 || n_beta == 0 || n_gamma == 0 {
        return Err(Error::InvalidArgument("quadrature orders must be positive".into()));
    }
    if fiducial.dim() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), got: fiducial.dim() });
    }
    let dim = rep.dim();
    let spin = rep.spin();
    let phi = fiducial.amplitudes();
    let rz = |t: f64, v: &CVector| CVector::from_fn(dim, |k, _| v[k] * C64::from_polar(1.0, t * spin.m_at(k)));
    let alphas = periodic_trapezoid(n_alpha);
    let gammas = periodic_trapezoid(n_gamma);
    let (xs, ws) = gauss_legendre(n_beta);
    let mut integral = CMatrix::zeros(dim, dim);
    let mut d_prime = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        let dy = exp_i_hermitian(&rep.jy, x.clamp(-1.0, 1.0).acos());
        let weight = 0.5 * w / (n_alpha * n_gamma) as f64;
        for &g in &gammas {
            let inner = &dy * rz(g, phi);
            for &a in &alphas {
                let v = rz(a, &inner);
                integral += &v * v.adjoint() * c(weight, 0.0);
                d_prime += weight * phi.dotc(&v).norm_sqr();
            }
        }
    }
    let deviation = integral * c(dim as f64, 0.0) - CMatrix::identity(dim, dim);
    Ok(IdentityCheck { defect: deviation.norm(), d_prime, quadrature_orders: [n_alpha, n_beta, n_gamma] })
}

/// `Var(J_x) Var(J_y) - <J_z>^2 / 4`, non-negative for every state.
pub fn uncertainty_gap(rep: &SpinRep, state: &PureState) -> f64 {
    let psi = state.amplitudes();
    let mean = |op: &CMatrix| psi.dotc(&(op * psi)).re;
    let var = |op: &CMatrix| {
        let v = op * psi;
        v.norm_squared() - mean(op).powi(2)
    };
    var(&rep.jx) * var(&rep.jy) - 0.25 * mean(&rep.jz).powi(2)
}
