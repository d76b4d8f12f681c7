//! Realified Hilbert space: invariant gradients and the strata of the
//! orbit space of the linear representation for `j = 1`.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin_rep::SpinRep;
use crate::{CMatrix, CVector, C64};

/// `(Re Z_0, ..., Re Z_N, Im Z_0, ..., Im Z_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealifiedVector(pub DVector<f64>);

pub fn realify(amps: &CVector) -> RealifiedVector {
    let n = amps.len();
    RealifiedVector(DVector::from_fn(2 * n, |k, _| if k < n { amps[k].re } else { amps[k - n].im }))
}

pub fn derealify(x: &RealifiedVector) -> CVector {
    let n = x.0.len() / 2;
    CVector::from_fn(n, |k, _| C64::new(x.0[k], x.0[k + n]))
}

/// Real symmetric `[[R, -S], [S, R]]` for `H = R + iS`, so that
/// `x^T A x = <psi|H|psi>` for Hermitian `H`.
pub fn realify_operator(h: &CMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// `f0 = <psi|psi>`
    Norm,
    /// `f1 = sum_i <psi|J_i|psi>^2`, homogeneous of degree 4
    MeanSpinSquared,
}

pub fn invariant_value(which: Invariant, rep: &SpinRep, x: &RealifiedVector) -> f64 {
    match which {
        Invariant::Norm => x.0.norm_squared(),
        Invariant::MeanSpinSquared => rep
            .generators()
            .iter()
            .map(|g| x.0.dot(&(realify_operator(g) * &x.0)).powi(2))
            .sum(),
    }
}

/// Analytic Euclidean gradient of an invariant at the (unnormalized) point `x`.
pub fn grad_invariant(which: Invariant, rep: &SpinRep, x: &RealifiedVector) -> RealifiedVector {
    match which {
        Invariant::Norm => RealifiedVector(&x.0 * 2.0),
        Invariant::MeanSpinSquared => {
            // grad (x^T A x)^2 = 4 (x^T A x) A x
            let mut g = DVector::zeros(x.0.len());
            for gen in rep.generators() {
                let a = realify_operator(gen);
                let ax = &a * &x.0;
                g += &ax * (4.0 * x.0.dot(&ax));
            }
            RealifiedVector(g)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    Principal,
    Boundary,
    Origin,
    Outside,
}

impl Stratum {
    pub fn as_str(self) -> &'static str {
        match self {
            Stratum::Principal => "Principal",
            Stratum::Boundary => "Boundary",
            Stratum::Origin => "Origin",
            Stratum::Outside => "Outside",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PMatrix {
    pub entries: Matrix2<f64>,
    pub rank: usize,
    pub psd: bool,
}

/// Relative agreement required between the gradient-built matrix and
/// `[[4 f0, 8 f1], [8 f1, 16 f0 f1]]`.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-8;

/// Relative eigenvalue threshold used for rank and definiteness.
pub const RANK_TOLERANCE: f64 = 1e-9;

pub fn p_matrix_closed_form(f0: f64, f1: f64) -> Matrix2<f64> {
    Matrix2::new(4.0 * f0, 8.0 * f1, 8.0 * f1, 16.0 * f0 * f1)
}

/// Gram matrix of the gradients of `f0` and `f1`, checked against the
/// closed form.
pub fn p_matrix(rep: &SpinRep, x: &RealifiedVector) -> Result<PMatrix> {
    if rep.spin().twice() != 2 {
        return Err(Error::RequiresSpinOne(rep.j()));
    }
    if x.0.len() != 2 * rep.dim() {
        return Err(Error::DimensionMismatch { expected: 2 * rep.dim(), got: x.0.len() });
    }
    let g0 = grad_invariant(Invariant::Norm, rep, x).0;
    let g1 = grad_invariant(Invariant::MeanSpinSquared, rep, x).0;
    let entries = Matrix2::new(g0.dot(&g0), g0.dot(&g1), g1.dot(&g0), g1.dot(&g1));
    let closed = p_matrix_closed_form(
        invariant_value(Invariant::Norm, rep, x),
        invariant_value(Invariant::MeanSpinSquared, rep, x),
    );
    let scale = entries.amax().max(closed.amax());
    let deviation = (entries - closed).amax() / if scale > 0.0 { scale } else { 1.0 };
    if deviation > CLOSED_FORM_TOLERANCE {
        return Err(Error::ClosedFormMismatch(deviation));
    }
    let (rank, psd) = rank_and_psd(&entries);
    Ok(PMatrix { entries, rank, psd })
}

fn rank_and_psd(m: &Matrix2<f64>) -> (usize, bool) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let scale = eig.amax();
    if scale == 0.0 {
        return (0, true);
    }
    let tol = RANK_TOLERANCE * scale;
    let rank = eig.iter().filter(|l| l.abs() > tol).count();
    let psd = eig.iter().all(|&l| l >= -tol);
    (rank, psd)
}

/// Locates `(f0, f1)` relative to the region `f0 >= 0, 0 <= f1 <= f0^2`
/// where the closed-form matrix is positive semi-definite.
pub fn psd_classify(f0: f64, f1: f64) -> (Stratum, usize) {
    let (rank, psd) = rank_and_psd(&p_matrix_closed_form(f0, f1));
    let stratum = match (psd, rank) {
        (false, _) => Stratum::Outside,
        (true, 2) => Stratum::Principal,
        (true, 1) => Stratum::Boundary,
        (true, _) => Stratum::Origin,
    };
    (stratum, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{little_algebra_dim, RANK_TOLERANCE as ORBIT_RANK};
    use crate::spin_rep::{exp_su2, sample_haar, Spin};
    use crate::state::{canonicalize, eigenstate, random_state};
    use crate::build_rep;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> RealifiedVector {
        RealifiedVector(DVector::from_fn(n, |_, _| rng.sample(StandardNormal)))
    }

    #[test]
    fn realify_convention_and_round_trip() {
        let v = CVector::from_vec(vec![c(1.0, 2.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let x = realify(&v);
        assert_eq!(x.0.as_slice(), &[1.0, 0.0, -1.0, 2.0, 0.0, 0.0]);
        assert_eq!(derealify(&x), v);
        assert!((x.0.norm() - v.norm()).abs() < 1e-15);
    }

    #[test]
    fn unitary_action_is_orthogonal() {
        let rep = build_rep(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let u = exp_su2(&rep, sample_haar(&mut rng));
            let a = derealify(&random_point(&mut rng, 6));
            let b = derealify(&random_point(&mut rng, 6));
            let before = realify(&a).0.dot(&realify(&b).0);
            let after = realify(&(&u * &a)).0.dot(&realify(&(&u * &b)).0);
            assert!((before - after).abs() < 1e-12);
            // the realified operator of U is orthogonal
            let ru = DMatrix::from_fn(6, 6, |r, col| {
                let z = u[(r % 3, col % 3)];
                match (r < 3, col < 3) {
                    (true, true) | (false, false) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                }
            });
            assert!((ru.transpose() * &ru - DMatrix::<f64>::identity(6, 6)).amax() < 1e-12);
        }
    }

    #[test]
    fn realified_quadratic_form_is_expectation() {
        let rep = build_rep(1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_point(&mut rng, 8);
        let psi = derealify(&x);
        for g in rep.generators() {
            let direct = psi.dotc(&(g * &psi));
            assert!((x.0.dot(&(realify_operator(g) * &x.0)) - direct.re).abs() < 1e-12);
        }
    }

    #[test]
    fn euler_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for twice in 1..=4 {
            let rep = SpinRep::new(Spin::from_twice(twice).unwrap());
            for _ in 0..20 {
                let x = random_point(&mut rng, 2 * rep.dim());
                let f0 = invariant_value(Invariant::Norm, &rep, &x);
                let f1 = invariant_value(Invariant::MeanSpinSquared, &rep, &x);
                let e0 = x.0.dot(&grad_invariant(Invariant::Norm, &rep, &x).0);
                let e1 = x.0.dot(&grad_invariant(Invariant::MeanSpinSquared, &rep, &x).0);
                assert!((e0 - 2.0 * f0).abs() < 1e-10 * f0.max(1.0));
                assert!((e1 - 4.0 * f1).abs() < 1e-10 * f1.max(1.0));
            }
        }
    }

    #[test]
    fn gradients_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 1e-5;
        for twice in 1..=3 {
            let rep = SpinRep::new(Spin::from_twice(twice).unwrap());
            for _ in 0..10 {
                let x = random_point(&mut rng, 2 * rep.dim());
                for which in [Invariant::Norm, Invariant::MeanSpinSquared] {
                    let g = grad_invariant(which, &rep, &x).0;
                    let fd = DVector::from_fn(x.0.len(), |k, _| {
                        let mut up = x.clone();
                        let mut dn = x.clone();
                        up.0[k] += h;
                        dn.0[k] -= h;
                        (invariant_value(which, &rep, &up) - invariant_value(which, &rep, &dn)) / (2.0 * h)
                    });
                    assert!((&g - &fd).amax() <= 1e-6 * g.amax().max(1.0));
                }
            }
        }
    }

    #[test]
    fn p_matrix_examples() {
        let rep = build_rep(1.0).unwrap();
        let up = realify(eigenstate(&rep, 1.0).unwrap().amplitudes());
        let p = p_matrix(&rep, &up).unwrap();
        assert!((p.entries - Matrix2::new(4.0, 8.0, 8.0, 16.0)).amax() < 1e-12);
        assert_eq!(p.rank, 1);
        assert!(p.psd);
        let zero = realify(eigenstate(&rep, 0.0).unwrap().amplitudes());
        let p = p_matrix(&rep, &zero).unwrap();
        assert!((p.entries - Matrix2::new(4.0, 0.0, 0.0, 0.0)).amax() < 1e-12);
        assert_eq!(p.rank, 1);

        let half = build_rep(0.5).unwrap();
        let x = realify(eigenstate(&half, 0.5).unwrap().amplitudes());
        assert!(matches!(p_matrix(&half, &x), Err(Error::RequiresSpinOne(_))));
    }

    #[test]
    fn p_matrix_closed_form_on_unnormalized_points() {
        let rep = build_rep(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let scale = rng.random_range(0.1..3.0);
            let x = RealifiedVector(random_point(&mut rng, 6).0 * scale);
            let p = p_matrix(&rep, &x).unwrap();
            assert!(p.psd);
        }
    }

    #[test]
    fn rank_tracks_orbit_dimension() {
        let rep = build_rep(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut states: Vec<_> = (0..500).map(|_| random_state(rep.spin(), &mut rng)).collect();
        states.push(eigenstate(&rep, 1.0).unwrap());
        states.push(eigenstate(&rep, 0.0).unwrap());
        let rp2 = canonicalize(&[c(-0.5, 0.0), c(0.5f64.sqrt(), 0.0), c(0.5, 0.0)], 1.0).unwrap();
        states.push(rp2);
        for s in &states {
            let rank = p_matrix(&rep, &realify(s.amplitudes())).unwrap().rank;
            let la = little_algebra_dim(&rep, s, ORBIT_RANK).unwrap();
            assert_eq!(rank == 2, la == 0);
            assert_eq!(rank == 1, la == 1);
            let f1 = invariant_value(Invariant::MeanSpinSquared, &rep, &realify(s.amplitudes()));
            assert!((-1e-12..=1.0 + 1e-12).contains(&f1));
        }
    }

    #[test]
    fn psd_strata() {
        assert_eq!(psd_classify(1.0, 0.5), (Stratum::Principal, 2));
        assert_eq!(psd_classify(1.0, 1.0).0, Stratum::Boundary);
        assert_eq!(psd_classify(1.0, 0.0).0, Stratum::Boundary);
        assert_eq!(psd_classify(0.0, 0.0), (Stratum::Origin, 0));
        assert_eq!(psd_classify(1.0, 1.5).0, Stratum::Outside);
        assert_eq!(psd_classify(-1.0, 0.0).0, Stratum::Outside);
        assert_eq!(psd_classify(1.0, -0.1).0, Stratum::Outside);
        assert_eq!(psd_classify(2.0, 3.9).0, Stratum::Principal);
    }
}
