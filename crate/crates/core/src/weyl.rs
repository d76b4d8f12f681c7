//! Heisenberg–Weyl group on a truncated Fock space: displacements, Glauber
//! states and the centered moment invariants `M^mn`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, exp_i_hermitian};
use crate::state::vector_ray_distance;
use crate::{CMatrix, CVector, C64};

/// Largest admissible Poisson tail mass beyond the truncation.
pub const GLAUBER_TAIL_LIMIT: f64 = 1e-12;

/// Largest `m + n` accepted by [`moment`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// Largest `|q|` and `|p|` accepted by [`weyl_orbit_invariance`].
pub const MAX_DISPLACEMENT: f64 = 2.0;

const SUPPORT_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct FockRep {
    n_trunc: usize,
    hbar: f64,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    pub q: CMatrix,
    pub p: CMatrix,
}

impl FockRep {
    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Ladder and quadrature operators on `span{|0>, ..., |n_trunc - 1>}`.
///
/// `[Q, P] = i hbar` holds except in the last diagonal entry.
pub fn build_fock(n_trunc: usize, hbar: f64) -> Result<FockRep> {
    if n_trunc < 4 {
        return Err(Error::Truncation(format!("n_trunc = {n_trunc} is below the minimum of 4")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    let mut a = CMatrix::zeros(n_trunc, n_trunc);
    for n in 1..n_trunc {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let s = (hbar / 2.0).sqrt();
    let q = (&a + &a_dag) * c(s, 0.0);
    let p = (&a - &a_dag) * c(0.0, -s);
    Ok(FockRep { n_trunc, hbar, a, a_dag, q, p })
}

/// Normalized Fock-space vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState(CVector);

impl FockState {
    pub fn from_amplitudes(fock: &FockRep, raw: &[C64]) -> Result<FockState> {
        if raw.len() > fock.n_trunc {
            return Err(Error::DimensionMismatch { expected: fock.n_trunc, got: raw.len() });
        }
        let mut v = CVector::zeros(fock.n_trunc);
        for (k, z) in raw.iter().enumerate() {
            v[k] = *z;
        }
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(FockState(v / c(norm, 0.0)))
    }

    pub fn number(fock: &FockRep, n: usize) -> Result<FockState> {
        let mut raw = vec![c(0.0, 0.0); n + 1];
        raw[n] = c(1.0, 0.0);
        FockState::from_amplitudes(fock, &raw)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    pub fn transformed(&self, u: &CMatrix) -> FockState {
        let v = u * &self.0;
        let norm = v.norm();
        FockState(v / c(norm, 0.0))
    }

    /// Highest occupied level.
    pub fn support(&self) -> usize {
        self.0.iter().rposition(|z| z.norm() > SUPPORT_FLOOR).unwrap_or(0)
    }
}

/// On-disk Fock state: `{"amplitudes": [[re, im], ...]}` from `|0>` upward;
/// missing levels are zero.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FockStateFile {
    pub amplitudes: Vec<[f64; 2]>,
}

impl FockStateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn into_state(self, fock: &FockRep) -> Result<FockState> {
        let raw: Vec<C64> = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        FockState::from_amplitudes(fock, &raw)
    }
}

pub fn fock_ray_distance(a: &FockState, b: &FockState) -> f64 {
    vector_ray_distance(&a.0, &b.0)
}

/// `exp(i (p Q - q P) / hbar)`.
pub fn displacement(fock: &FockRep, q: f64, p: f64) -> CMatrix {
    let h = (&fock.q * c(p, 0.0) - &fock.p * c(q, 0.0)) * c(1.0 / fock.hbar, 0.0);
    exp_i_hermitian(&h, 1.0)
}

/// `z = (q + i p) / sqrt(2 hbar)`.
pub fn glauber_parameter(fock: &FockRep, q: f64, p: f64) -> C64 {
    c(q, p) / (2.0 * fock.hbar).sqrt()
}

/// Poisson mass `e^(-|z|^2) sum_{n >= N} |z|^(2n) / n!` lost to truncation.
pub fn glauber_tail(n_trunc: usize, z: C64) -> f64 {
    let x = z.norm_sqr();
    if x == 0.0 {
        return 0.0;
    }
    let lx = x.ln();
    let mut log_term = -x;
    for n in 1..=n_trunc {
        log_term += lx - (n as f64).ln();
    }
    let mut tail = 0.0;
    let mut n = n_trunc;
    loop {
        let term = log_term.exp();
        tail += term;
        if (n as f64) > x && term < tail * 1e-18 + 1e-300 {
            break;
        }
        n += 1;
        log_term += lx - (n as f64).ln();
    }
    tail
}

/// `e^(-|z|^2/2) z^n / sqrt(n!)`, renormalized after truncation.
pub fn glauber(fock: &FockRep, z: C64) -> Result<FockState> {
    let tail = glauber_tail(fock.n_trunc, z);
    if tail >= GLAUBER_TAIL_LIMIT {
        return Err(Error::Truncation(format!(
            "Glauber tail {tail:.3e} beyond level {} exceeds {GLAUBER_TAIL_LIMIT:e}",
            fock.n_trunc
        )));
    }
    let mut amps = Vec::with_capacity(fock.n_trunc);
    let mut term = c((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 0..fock.n_trunc {
        if n > 0 {
            term = term * z / (n as f64).sqrt();
        }
        amps.push(term);
    }
    FockState::from_amplitudes(fock, &amps)
}

/// `<psi| S |psi>` with `S = (A^m B^n + B^n A^m) / 2`, `A = Q - <Q>`,
/// `B = P - <P>`.
pub fn moment(fock: &FockRep, state: &FockState, m: usize, n: usize) -> Result<f64> {
    if m + n > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!("moment order {} exceeds {MAX_MOMENT_ORDER}", m + n)));
    }
    let (qbar, pbar) = means(fock, state);
    Ok(centered_moment(fock, state, qbar, pbar, m, n))
}

fn means(fock: &FockRep, state: &FockState) -> (f64, f64) {
    let psi = &state.0;
    (psi.dotc(&(&fock.q * psi)).re, psi.dotc(&(&fock.p * psi)).re)
}

fn centered_moment(fock: &FockRep, state: &FockState, qbar: f64, pbar: f64, m: usize, n: usize) -> f64 {
    let psi = &state.0;
    let shift = |op: &CMatrix, mean: f64, v: &CVector| op * v - v * c(mean, 0.0);
    let mut u = psi.clone();
    for _ in 0..m {
        u = shift(&fock.q, qbar, &u);
    }
    let mut w = psi.clone();
    for _ in 0..n {
        w = shift(&fock.p, pbar, &w);
    }
    // A and B are Hermitian, so <psi|A^m B^n|psi> = <A^m psi|B^n psi> and the
    // symmetrized expectation is its real part.
    u.dotc(&w).re
}

/// `M^mn` for all `m + n <= max_order`; `entries[m][n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    pub max_order: usize,
    pub qbar: f64,
    pub pbar: f64,
    pub entries: Vec<Vec<f64>>,
}

impl MomentTable {
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m][n]
    }

    pub fn max_abs_diff(&self, other: &MomentTable) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn moment_table(fock: &FockRep, state: &FockState, max_order: usize) -> Result<MomentTable> {
    if max_order > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!("moment order {max_order} exceeds {MAX_MOMENT_ORDER}")));
    }
    let (qbar, pbar) = means(fock, state);
    let entries = (0..=max_order)
        .map(|m| (0..=max_order - m).map(|n| centered_moment(fock, state, qbar, pbar, m, n)).collect())
        .collect();
    Ok(MomentTable { max_order, qbar, pbar, entries })
}

/// Largest change of any `M^mn`, `m + n <= max_order`, between the fiducial
/// and its displaced copies.
pub fn weyl_orbit_invariance(
    fock: &FockRep,
    fiducial: &FockState,
    displacements: &[(f64, f64)],
    max_order: usize,
) -> Result<f64> {
    if fiducial.support() > fock.n_trunc / 4 {
        return Err(Error::Truncation(format!(
            "fiducial occupies level {} above n_trunc/4 = {}",
            fiducial.support(),
            fock.n_trunc / 4
        )));
    }
    if let Some(&(q, p)) = displacements.iter().find(|(q, p)| q.abs() > MAX_DISPLACEMENT || p.abs() > MAX_DISPLACEMENT) {
        return Err(Error::Truncation(format!("displacement ({q}, {p}) exceeds {MAX_DISPLACEMENT}")));
    }
    let reference = moment_table(fock, fiducial, max_order)?;
    let mut deviation: f64 = 0.0;
    for &(q, p) in displacements {
        let moved = fiducial.transformed(&displacement(fock, q, p));
        deviation = deviation.max(moment_table(fock, &moved, max_order)?.max_abs_diff(&reference));
    }
    Ok(deviation)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobertsonReport {
    pub m20: f64,
    pub m02: f64,
    pub m11: f64,
    /// `M20 M02`
    pub lhs: f64,
    /// `M11^2 + hbar^2 / 4`
    pub rhs_standard: f64,
    /// `((2 M11)^2 - hbar^2) / 4`, the right-hand side as printed in the
    /// source with its minus sign.
    pub rhs_paper: f64,
    pub holds_standard: bool,
}

/// Slack allowed when testing `lhs >= rhs_standard`.
pub const ROBERTSON_TOLERANCE: f64 = 1e-10;

pub fn robertson_check(fock: &FockRep, state: &FockState) -> RobertsonReport {
    let (qbar, pbar) = means(fock, state);
    let m20 = centered_moment(fock, state, qbar, pbar, 2, 0);
    let m02 = centered_moment(fock, state, qbar, pbar, 0, 2);
    let m11 = centered_moment(fock, state, qbar, pbar, 1, 1);
    let h2 = fock.hbar * fock.hbar;
    let lhs = m20 * m02;
    let rhs_standard = m11 * m11 + h2 / 4.0;
    let rhs_paper = 0.25 * ((2.0 * m11).powi(2) - h2);
    RobertsonReport {
        m20,
        m02,
        m11,
        lhs,
        rhs_standard,
        rhs_paper,
        holds_standard: lhs >= rhs_standard - ROBERTSON_TOLERANCE * rhs_standard.max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, hermiticity_defect, max_abs_diff, unitarity_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn fock(n: usize) -> FockRep {
        build_fock(n, 1.0).unwrap()
    }

    fn superposition(f: &FockRep, levels: &[usize]) -> FockState {
        let top = *levels.iter().max().unwrap();
        let mut raw = vec![c(0.0, 0.0); top + 1];
        for &l in levels {
            raw[l] = c(1.0, 0.0);
        }
        FockState::from_amplitudes(f, &raw).unwrap()
    }

    #[test]
    fn ladder_structure() {
        let f = fock(10);
        let number = &f.a_dag * &f.a;
        for n in 0..10 {
            assert!((number[(n, n)] - c(n as f64, 0.0)).norm() < 1e-14);
        }
        assert!(hermiticity_defect(&f.q) < 1e-14);
        assert!(hermiticity_defect(&f.p) < 1e-14);
        assert!(build_fock(3, 1.0).is_err());
        assert!(build_fock(8, 0.0).is_err());
    }

    #[test]
    fn canonical_commutator_below_the_top_level() {
        for hbar in [1.0, 0.5, 2.0] {
            let f = build_fock(12, hbar).unwrap();
            let k = commutator(&f.q, &f.p);
            for r in 0..11 {
                for col in 0..11 {
                    let expected = if r == col { c(0.0, hbar) } else { c(0.0, 0.0) };
                    assert!((k[(r, col)] - expected).norm() < 1e-12);
                }
            }
            // truncation shows up in the last diagonal entry only
            assert!((k[(11, 11)] - c(0.0, hbar)).norm() > 1.0);
            let vac = FockState::number(&f, 0).unwrap();
            assert!((moment(&f, &vac, 2, 0).unwrap() - hbar / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn displacement_basics() {
        let f = fock(32);
        assert!(max_abs_diff(&displacement(&f, 0.0, 0.0), &CMatrix::identity(32, 32)) < 1e-13);
        assert!(unitarity_defect(&displacement(&f, 0.7, -1.1)) < 1e-12);
    }

    #[test]
    fn group_law_on_low_levels() {
        let f = fock(64);
        let (q1, p1, q2, p2) = (0.3, -0.4, -0.2, 0.5);
        let lhs = displacement(&f, q2, p2) * displacement(&f, q1, p1);
        let phase = C64::from_polar(1.0, (q1 * p2 - p1 * q2) / 2.0);
        let rhs = displacement(&f, q1 + q2, p1 + p2) * phase;
        for col in 0..8 {
            for r in 0..64 {
                assert!((lhs[(r, col)] - rhs[(r, col)]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn displaced_vacuum_is_glauber() {
        let f = fock(64);
        let vac = FockState::number(&f, 0).unwrap();
        for (q, p) in [(0.5, 0.2), (-1.0, 1.5), (2.0, -0.3)] {
            let moved = vac.transformed(&displacement(&f, q, p));
            let g = glauber(&f, glauber_parameter(&f, q, p)).unwrap();
            assert!(fock_ray_distance(&moved, &g) < 1e-8);
        }
    }

    #[test]
    fn glauber_examples() {
        let f = fock(64);
        assert_eq!(glauber(&f, c(0.0, 0.0)).unwrap(), FockState::number(&f, 0).unwrap());
        assert!(glauber_tail(64, c(2.0, 0.0)) < 1e-12);
        assert!(glauber(&fock(8), c(2.0, 0.0)).is_err());
        for hbar in [1.0, 0.3] {
            let f = build_fock(64, hbar).unwrap();
            let z = c(0.8, -1.3);
            let g = glauber(&f, z).unwrap();
            let t = moment_table(&f, &g, 1).unwrap();
            assert!((t.qbar - (2.0 * hbar).sqrt() * z.re).abs() < 1e-10);
            assert!((t.pbar - (2.0 * hbar).sqrt() * z.im).abs() < 1e-10);
        }
    }

    #[test]
    fn tail_matches_complement_of_truncated_sum() {
        // for moderate |z| the complement 1 - partial sum is accurate enough
        for (n, x) in [(10usize, 2.0f64), (20, 5.0), (30, 9.0)] {
            let mut partial = 0.0;
            let mut term = (-x).exp();
            for k in 0..n {
                if k > 0 {
                    term *= x / k as f64;
                }
                partial += term;
            }
            let tail = glauber_tail(n, c(x.sqrt(), 0.0));
            assert!((tail - (1.0 - partial)).abs() < 1e-13);
        }
    }

    #[test]
    fn glauber_moments_are_constant() {
        let f = fock(64);
        let vac = moment_table(&f, &FockState::number(&f, 0).unwrap(), 6).unwrap();
        for z in [c(0.5, 0.5), c(-1.2, 0.3), c(2.0, 0.0), c(0.0, -2.0), c(1.4, 1.4)] {
            let t = moment_table(&f, &glauber(&f, z).unwrap(), 6).unwrap();
            assert!((t.get(2, 0) - 0.5).abs() < 1e-8);
            assert!((t.get(0, 2) - 0.5).abs() < 1e-8);
            assert!(t.get(1, 1).abs() < 1e-8);
            assert!(t.max_abs_diff(&vac) < 1e-8);
        }
    }

    #[test]
    fn moment_table_invariants() {
        let f = fock(32);
        let s = superposition(&f, &[0, 1, 4]);
        let t = moment_table(&f, &s, 8).unwrap();
        assert!((t.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(t.get(1, 0).abs() < 1e-12 && t.get(0, 1).abs() < 1e-12);
        for m in (0..=8).step_by(2) {
            for n in (0..=8 - m).step_by(2) {
                assert!(t.get(m, n) >= -1e-12);
            }
        }
        assert!(moment(&f, &s, 5, 4).is_err());
    }

    #[test]
    fn number_state_moments() {
        let f = fock(16);
        let one = FockState::number(&f, 1).unwrap();
        assert!((moment(&f, &one, 2, 0).unwrap() - 1.5).abs() < 1e-14);
        let vac = FockState::number(&f, 0).unwrap();
        assert!(moment(&f, &vac, 1, 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn finite_combinations_are_orbit_invariant() {
        let f = fock(128);
        let fid = superposition(&f, &[0, 3]);
        let d = weyl_orbit_invariance(&f, &fid, &[(0.3, -0.2), (-0.5, 0.1)], 4).unwrap();
        assert!(d < 1e-6);
        let vac = FockState::number(&f, 0).unwrap();
        let d = weyl_orbit_invariance(&f, &vac, &[(1.0, 1.0), (-2.0, 0.5)], 4).unwrap();
        assert!(d < 1e-8);
        assert_eq!(weyl_orbit_invariance(&f, &fid, &[], 4).unwrap(), 0.0);
    }

    #[test]
    fn orbit_invariance_guards() {
        let f = fock(16);
        let high = FockState::number(&f, 5).unwrap();
        assert!(weyl_orbit_invariance(&f, &high, &[(0.1, 0.1)], 2).is_err());
        let low = FockState::number(&f, 1).unwrap();
        assert!(weyl_orbit_invariance(&f, &low, &[(2.5, 0.0)], 2).is_err());
    }

    #[test]
    fn moments_stabilize_under_doubling() {
        let small = fock(32);
        let large = fock(64);
        let a = moment_table(&small, &superposition(&small, &[0, 2, 5]), 6).unwrap();
        let b = moment_table(&large, &superposition(&large, &[0, 2, 5]), 6).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-8);
    }

    #[test]
    fn robertson_examples() {
        let f = fock(64);
        let g = robertson_check(&f, &glauber(&f, c(0.7, -0.4)).unwrap());
        assert!((g.lhs - 0.25).abs() < 1e-8 && (g.rhs_standard - 0.25).abs() < 1e-8);
        assert!((g.rhs_paper + 0.25).abs() < 1e-8);
        let one = robertson_check(&f, &FockState::number(&f, 1).unwrap());
        assert!((one.lhs - 2.25).abs() < 1e-12 && (one.rhs_standard - 0.25).abs() < 1e-12);
        assert!(one.holds_standard);
        let r = robertson_check(&f, &superposition(&f, &[0, 2]));
        assert!(r.lhs >= r.rhs_standard - 1e-10);
    }

    #[test]
    fn robertson_holds_on_random_finite_combinations() {
        let f = fock(48);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let len = rng.random_range(1..=12);
            let raw: Vec<C64> = (0..len).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
            let s = FockState::from_amplitudes(&f, &raw).unwrap();
            assert!(robertson_check(&f, &s).holds_standard);
        }
    }
}
