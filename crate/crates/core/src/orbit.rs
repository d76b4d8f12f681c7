//! Little algebras, orbit classification, orbit sampling and orbit-space scans.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{invariants_f, InvariantVector};
use crate::linalg::{expectation, singular_values_desc};
use crate::spin_rep::{exp_su2, rotation_about, sample_haar, SpinRep};
use crate::state::{basis_state, random_state, ray_distance, PureState};

/// Default relative singular-value threshold for the little-algebra rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// `f1` at or below this is treated as a vanishing mean spin.
pub const F1_TOLERANCE: f64 = 1e-9;

/// Ray distance below which a π-rotation counts as fixing the state.
pub const PI_FLIP_TOLERANCE: f64 = 1e-9;

/// Result of the little-algebra rank test.
#[derive(Clone, Debug, PartialEq)]
pub struct LittleAlgebra {
    pub dim: usize,
    /// Singular values of the realified eigen-equation map, descending.
    pub singular_values: Vec<f64>,
    /// False when the smallest retained singular value is within a factor 10
    /// of the rank threshold.
    pub well_conditioned: bool,
}

/// Solves `(r·J - T)|psi> = 0` for real `(r, T)` by SVD of the realified
/// `2(2j+1) x 4` matrix with columns `J_x psi`, `J_y psi`, `J_z psi`, `-psi`.
pub fn little_algebra(rep: &SpinRep, state: &PureState, tol: f64) -> Result<LittleAlgebra> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidArgument(format!("rank tolerance {tol} outside (0, 1e-3]")));
    }
    if rep.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), got: state.dim() });
    }
    let psi = state.amplitudes();
    let n = psi.len();
    let columns = [rep.jx.clone() * psi, rep.jy.clone() * psi, rep.jz.clone() * psi, -psi.clone()];
    let m = DMatrix::from_fn(2 * n, 4, |row, col| {
        let z = columns[col][row % n];
        if row < n {
            z.re
        } else {
            z.im
        }
    });
    let singular_values = singular_values_desc(&m);
    let smax = singular_values[0];
    let dim = singular_values.iter().filter(|&&s| s < tol * smax).count();
    let rank = singular_values.len() - dim;
    let well_conditioned = singular_values[rank - 1] > 10.0 * tol * smax;
    Ok(LittleAlgebra { dim, singular_values, well_conditioned })
}

/// Projective little-algebra dimension of the ray.
pub fn little_algebra_dim(rep: &SpinRep, state: &PureState, tol: f64) -> Result<usize> {
    Ok(little_algebra(rep, state, tol)?.dim)
}

pub fn mean_spin(rep: &SpinRep, state: &PureState) -> [f64; 3] {
    let psi = state.amplitudes();
    let g = rep.generators();
    std::array::from_fn(|i| {
        let v = expectation(g[i], psi);
        debug_assert!(v.im.abs() < 1e-12 * v.re.abs().max(1.0));
        v.re
    })
}

/// Whether the rotation by π about the mean-spin axis fixes the ray.
pub fn pi_flip_fixes(rep: &SpinRep, state: &PureState) -> Result<bool> {
    let m = mean_spin(rep, state);
    let f1 = m.iter().map(|x| x * x).sum::<f64>();
    if f1 <= F1_TOLERANCE {
        return Err(Error::UndefinedAxis(f1));
    }
    let len = f1.sqrt();
    let axis = [m[0] / len, m[1] / len, m[2] / len];
    // renormalize so the unit-axis check cannot trip on rounding
    let an = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    let axis = [axis[0] / an, axis[1] / an, axis[2] / an];
    let u = exp_su2(rep, rotation_about(axis, PI)?);
    Ok(ray_distance(&state.transformed(&u), state)? < PI_FLIP_TOLERANCE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitType {
    TwoSphere,
    RealProjectivePlane,
    ThreeDim,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub little_algebra_dim: usize,
    pub orbit_dim: usize,
    pub orbit_type: OrbitType,
    pub mean_spin: [f64; 3],
    pub f1: f64,
    /// `None` when the mean spin vanishes and no axis is defined.
    pub pi_flip_fixed: Option<bool>,
    pub well_conditioned: bool,
}

pub fn classify_orbit(rep: &SpinRep, state: &PureState) -> Result<OrbitReport> {
    let la = little_algebra(rep, state, RANK_TOLERANCE)?;
    if la.dim > 1 {
        // excluded for SU(2): an eigenvector of n·J is an eigenvector of no other direction
        return Err(Error::InvalidArgument(format!(
            "little algebra of dimension {} found; rank test is ill-conditioned",
            la.dim
        )));
    }
    let ms = mean_spin(rep, state);
    let f1 = ms.iter().map(|x| x * x).sum::<f64>();
    let orbit_type = match (la.dim, f1 > F1_TOLERANCE) {
        (1, true) => OrbitType::TwoSphere,
        (1, false) => OrbitType::RealProjectivePlane,
        _ => OrbitType::ThreeDim,
    };
    let pi_flip_fixed = if f1 > F1_TOLERANCE { Some(pi_flip_fixes(rep, state)?) } else { None };
    Ok(OrbitReport {
        little_algebra_dim: la.dim,
        orbit_dim: 3 - la.dim,
        orbit_type,
        mean_spin: ms,
        f1,
        pi_flip_fixed,
        well_conditioned: la.well_conditioned,
    })
}

/// `n` Haar-random points `U(g_k)|fiducial>` of the orbit.
pub fn orbit_sample<R: Rng + ?Sized>(rep: &SpinRep, fiducial: &PureState, n: usize, rng: &mut R) -> Vec<PureState> {
    (0..n).map(|_| fiducial.transformed(&exp_su2(rep, sample_haar(rng)))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeedKind {
    Eigen,
    Random,
}

impl SeedKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeedKind::Eigen => "eigen",
            SeedKind::Random => "random",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub invariants: InvariantVector,
    pub orbit_dim: usize,
    pub seed_kind: SeedKind,
}

/// Random states are drawn in chunks of this size; chunk `c` uses stream `c`
/// of the seeded generator, so output does not depend on the thread count.
pub const SCAN_CHUNK: usize = 256;

/// Orbit-space scan: the eigenstates `|m>`, `m = j, j-1, ..., (0 or 1/2)`,
/// followed by `n_random` unitarily-invariant random states.
pub fn scan_orbit_space(rep: &SpinRep, n_random: usize, seed: u64) -> Result<Vec<ScanRow>> {
    let spin = rep.spin();
    let n_eigen = spin.twice() as usize / 2 + 1;
    let row = |state: &PureState, kind: SeedKind| -> Result<ScanRow> {
        Ok(ScanRow {
            invariants: invariants_f(rep, state)?,
            orbit_dim: classify_orbit(rep, state)?.orbit_dim,
            seed_kind: kind,
        })
    };
    let mut rows = (0..n_eigen)
        .map(|k| row(&basis_state(spin, k), SeedKind::Eigen))
        .collect::<Result<Vec<_>>>()?;
    let chunks = n_random.div_ceil(SCAN_CHUNK);
    let random: Vec<Vec<ScanRow>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = SCAN_CHUNK.min(n_random - chunk * SCAN_CHUNK);
            (0..count).map(|_| row(&random_state(spin, &mut rng), SeedKind::Random)).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(random.into_iter().flatten());
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_rep::Spin;
    use crate::state::{canonicalize, eigenstate};
    use crate::{build_rep, C64};

    fn theta_state(theta: f64) -> PureState {
        canonicalize(&[C64::new(theta.cos(), 0.0), C64::new(0.0, 0.0), C64::new(theta.sin(), 0.0)], 1.0).unwrap()
    }

    #[test]
    fn little_algebra_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let half = build_rep(0.5).unwrap();
        for _ in 0..100 {
            let s = random_state(half.spin(), &mut rng);
            assert_eq!(little_algebra_dim(&half, &s, RANK_TOLERANCE).unwrap(), 1);
        }
        let one = build_rep(1.0).unwrap();
        assert_eq!(little_algebra_dim(&one, &eigenstate(&one, 1.0).unwrap(), RANK_TOLERANCE).unwrap(), 1);
        let la = little_algebra(&one, &theta_state(PI / 8.0), RANK_TOLERANCE).unwrap();
        assert_eq!(la.dim, 0);
        assert!(la.well_conditioned);
        assert!(little_algebra(&one, &theta_state(0.1), 0.0).is_err());
        assert!(little_algebra(&one, &theta_state(0.1), 1e-2).is_err());
    }

    #[test]
    fn spin_three_halves_random_states_are_principal() {
        let rep = build_rep(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let la = little_algebra(&rep, &random_state(rep.spin(), &mut rng), RANK_TOLERANCE).unwrap();
            assert_eq!(la.dim, 0);
        }
    }

    #[test]
    fn classification_examples() {
        let rep = build_rep(1.0).unwrap();
        let up = classify_orbit(&rep, &eigenstate(&rep, 1.0).unwrap()).unwrap();
        assert_eq!(up.orbit_type, OrbitType::TwoSphere);
        assert!((up.f1 - 1.0).abs() < 1e-14);
        assert_eq!(up.pi_flip_fixed, Some(true));
        let zero = classify_orbit(&rep, &eigenstate(&rep, 0.0).unwrap()).unwrap();
        assert_eq!(zero.orbit_type, OrbitType::RealProjectivePlane);
        assert_eq!(zero.orbit_dim, 2);
        assert_eq!(zero.f1, 0.0);
        assert_eq!(zero.pi_flip_fixed, None);
        let theta = classify_orbit(&rep, &theta_state(PI / 8.0)).unwrap();
        assert_eq!(theta.orbit_type, OrbitType::ThreeDim);
        assert_eq!(theta.orbit_dim, 3);
        assert_eq!(theta.pi_flip_fixed, Some(true));
    }

    #[test]
    fn mean_spin_examples() {
        let rep = build_rep(1.0).unwrap();
        assert_eq!(mean_spin(&rep, &eigenstate(&rep, 1.0).unwrap()), [0.0, 0.0, 1.0]);
        assert_eq!(mean_spin(&rep, &eigenstate(&rep, 0.0).unwrap()), [0.0, 0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for twice in 1..=6 {
            let rep = SpinRep::new(Spin::from_twice(twice).unwrap());
            for _ in 0..20 {
                let s = random_state(rep.spin(), &mut rng);
                let r = sample_haar(&mut rng);
                let moved = mean_spin(&rep, &s.transformed(&exp_su2(&rep, r)));
                let rot = r.adjoint_rotation();
                let m = mean_spin(&rep, &s);
                for i in 0..3 {
                    let expected: f64 = (0..3).map(|k| rot[i][k] * m[k]).sum();
                    assert!((moved[i] - expected).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pi_flip_examples() {
        let rep = build_rep(1.0).unwrap();
        assert!(pi_flip_fixes(&rep, &theta_state(PI / 8.0)).unwrap());
        assert!(pi_flip_fixes(&rep, &eigenstate(&rep, 1.0).unwrap()).unwrap());
        assert!(matches!(pi_flip_fixes(&rep, &eigenstate(&rep, 0.0).unwrap()), Err(Error::UndefinedAxis(_))));

        let rep = build_rep(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut tested = 0;
        while tested < 1000 {
            let s = random_state(rep.spin(), &mut rng);
            if crate::invariants_f(&rep, &s).unwrap().f(1) > 0.01 {
                assert!(!pi_flip_fixes(&rep, &s).unwrap());
                tested += 1;
            }
        }
    }

    #[test]
    fn orbit_samples_share_invariants_and_type() {
        let rep = build_rep(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fiducial = random_state(rep.spin(), &mut rng);
        let f0 = invariants_f(&rep, &fiducial).unwrap();
        let c0 = classify_orbit(&rep, &fiducial).unwrap();
        for s in orbit_sample(&rep, &fiducial, 50, &mut rng) {
            assert!(invariants_f(&rep, &s).unwrap().max_abs_diff(&f0) < 1e-9);
            let c = classify_orbit(&rep, &s).unwrap();
            assert_eq!((c.orbit_type, c.orbit_dim, c.pi_flip_fixed), (c0.orbit_type, c0.orbit_dim, c0.pi_flip_fixed));
            assert!((c.f1 - c0.f1).abs() < 1e-10);
        }
        for m in [1.5, 0.5, -0.5] {
            let e = eigenstate(&rep, m).unwrap();
            for s in orbit_sample(&rep, &e, 30, &mut rng) {
                assert_eq!(little_algebra_dim(&rep, &s, RANK_TOLERANCE).unwrap(), 1);
            }
        }
    }

    #[test]
    fn orbit_sample_is_seeded() {
        let rep = build_rep(1.0).unwrap();
        let f = theta_state(0.3);
        let a = orbit_sample(&rep, &f, 10, &mut ChaCha8Rng::seed_from_u64(8));
        let b = orbit_sample(&rep, &f, 10, &mut ChaCha8Rng::seed_from_u64(8));
        assert_eq!(a, b);
    }

    #[test]
    fn little_algebra_never_exceeds_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for twice in 1..=6 {
            let rep = SpinRep::new(Spin::from_twice(twice).unwrap());
            for _ in 0..200 {
                let la = little_algebra(&rep, &random_state(rep.spin(), &mut rng), RANK_TOLERANCE).unwrap();
                assert!(la.dim <= 1);
                assert!(la.well_conditioned);
            }
            for k in 0..rep.dim() {
                let la = little_algebra(&rep, &basis_state(rep.spin(), k), RANK_TOLERANCE).unwrap();
                assert_eq!(la.dim, 1);
                assert!(la.well_conditioned);
            }
        }
    }

    #[test]
    fn projective_plane_seed_only_for_integer_spin() {
        for twice in 1..=8 {
            let rep = SpinRep::new(Spin::from_twice(twice).unwrap());
            let rows: Vec<OrbitType> = (0..=twice as usize / 2)
                .map(|k| classify_orbit(&rep, &basis_state(rep.spin(), k)).unwrap().orbit_type)
                .collect();
            let rp2 = rows.iter().filter(|t| **t == OrbitType::RealProjectivePlane).count();
            assert_eq!(rp2, usize::from(twice % 2 == 0), "2j = {twice}");
        }
    }

    #[test]
    fn scan_rows() {
        let rep = build_rep(1.5).unwrap();
        let rows = scan_orbit_space(&rep, 0, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.seed_kind == SeedKind::Eigen && r.orbit_dim == 2));
        let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.invariants.f(1), r.invariants.f(2))).collect();
        assert!(pairs.iter().any(|&(a, b)| (a - 0.25).abs() < 1e-12 && (b - 0.0625).abs() < 1e-12));
        assert!(pairs.iter().any(|&(a, b)| (a - 2.25).abs() < 1e-12 && (b - 5.0625).abs() < 1e-12));

        let rep = build_rep(1.0).unwrap();
        let rows = scan_orbit_space(&rep, 600, 99).unwrap();
        assert_eq!(rows.len(), 602);
        for r in rows.iter().filter(|r| r.seed_kind == SeedKind::Random) {
            let f = r.invariants.0;
            let f1 = f[0];
            let expected = [f1, f1, 2.0, f1, 2.0, f1 * f1, f1, 2.0 + f1];
            for k in 0..8 {
                assert!((f[k] - expected[k]).abs() < 1e-9);
            }
            assert_eq!(r.orbit_dim, 3);
        }
        assert_eq!(rows, scan_orbit_space(&rep, 600, 99).unwrap());
        assert_ne!(rows, scan_orbit_space(&rep, 600, 100).unwrap());
    }
}
