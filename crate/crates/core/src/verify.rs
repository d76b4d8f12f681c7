//! Reproduction checks for the published closed forms and numerical claims.
//!
//! Each criterion is a named block of checks. A check records what was
//! expected, what was observed and the tolerance that decides it.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coherent::{
    default_identity_orders, identity_defect, j1_orbit_family, nearest_rp2_member, spin_coherent_general,
    spin_coherent_highest, uncertainty_gap, FamilyKind,
};
use crate::error::{Error, Result};
use crate::invariants::invariants_f;
use crate::linalg::{c, commutator, hermiticity_defect, max_abs_diff};
use crate::orbit::{little_algebra_dim, mean_spin, orbit_sample, pi_flip_fixes, scan_orbit_space, RANK_TOLERANCE};
use crate::realified::{
    grad_invariant, invariant_value, p_matrix_closed_form, psd_classify, Invariant, RealifiedVector, Stratum,
};
use crate::spin_rep::{exp_su2, sample_haar, CanonicalCoords, Spin, SpinRep};
use crate::state::{basis_state, canonicalize, octant_projection_j1, random_state, ray_distance, PureState};
use crate::weyl::{
    build_fock, displacement, glauber, moment_table, weyl_orbit_invariance, FockState,
};
use crate::{CMatrix, C64};

pub const CRITERIA: [&str; 14] = [
    "generators",
    "exp_closed_form",
    "invariance",
    "las",
    "f1_values",
    "popu",
    "orbit_dims",
    "pi_flip",
    "p_matrix",
    "identity",
    "coherent_families",
    "uncertainty",
    "weyl",
    "octant",
];

/// Deliberate corruption used to show that the suite detects errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturbs the `(0, 1)` entry of every `J_x`.
    CorruptSigmaX,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub only: Option<String>,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub name: &'static str,
    pub rows: Vec<CheckRow>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.passed)
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "  {:<4} {:<18} {:<44} expected {:<24} observed {:<24} tol {}",
                if r.passed { "ok" } else { "FAIL" },
                self.name,
                r.check,
                r.expected,
                r.observed,
                r.tolerance
            )?;
        }
        write!(f, "{} {}", if self.passed() { "PASS" } else { "FAIL" }, self.name)
    }
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

/// `observed < tol`, for deviations whose ideal value is zero.
fn below(check: impl Into<String>, observed: f64, tol: f64) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: "0".into(),
        observed: sci(observed),
        tolerance: format!("< {tol:e}"),
        passed: observed < tol,
    }
}

fn above(check: impl Into<String>, observed: f64, bound: f64) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: format!("> {bound:e}"),
        observed: sci(observed),
        tolerance: "-".into(),
        passed: observed > bound,
    }
}

fn close(check: impl Into<String>, expected: f64, observed: f64, tol: f64) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: sci(expected),
        observed: sci(observed),
        tolerance: format!("<= {tol:e}"),
        passed: (observed - expected).abs() <= tol,
    }
}

fn violations(check: impl Into<String>, bad: usize, total: usize) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: format!("0 of {total}"),
        observed: format!("{bad} of {total}"),
        tolerance: "exact".into(),
        passed: bad == 0,
    }
}

fn label(check: impl Into<String>, expected: &str, observed: &str) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: expected.into(),
        observed: observed.into(),
        tolerance: "exact".into(),
        passed: expected == observed,
    }
}

struct Context {
    fault: Option<Fault>,
}

impl Context {
    fn rep(&self, twice: u32) -> SpinRep {
        let mut rep = SpinRep::new(Spin::from_twice(twice).expect("positive spin"));
        if let Some(Fault::CorruptSigmaX) = self.fault {
            rep.jx[(0, 1)] += c(0.25, 0.0);
        }
        rep
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

/// Runs the selected criteria in order.
pub fn run_verify(options: &VerifyOptions) -> Result<Vec<CriterionReport>> {
    let names: Vec<&'static str> = match &options.only {
        None => CRITERIA.to_vec(),
        Some(name) => vec![CRITERIA
            .iter()
            .copied()
            .find(|c| c == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {name:?}")))?],
    };
    Ok(names.into_iter().map(|n| run_criterion(n, options)).collect())
}

/// Runs one criterion; internal errors become failing rows.
pub fn run_criterion(name: &'static str, options: &VerifyOptions) -> CriterionReport {
    let ctx = Context { fault: options.fault };
    let result = match name {
        "generators" => generators(&ctx),
        "exp_closed_form" => exp_closed_form(&ctx),
        "invariance" => invariance(&ctx),
        "las" => las(&ctx),
        "f1_values" => f1_values(&ctx),
        "popu" => popu(&ctx),
        "orbit_dims" => orbit_dims(&ctx),
        "pi_flip" => pi_flip(&ctx),
        "p_matrix" => p_matrix_check(&ctx),
        "identity" => identity(&ctx),
        "coherent_families" => coherent_families(&ctx),
        "uncertainty" => uncertainty(&ctx),
        "weyl" => weyl(),
        "octant" => octant(),
        other => Err(Error::InvalidArgument(format!("unknown check {other:?}"))),
    };
    let rows = result.unwrap_or_else(|e| {
        vec![CheckRow {
            check: "evaluation".into(),
            expected: "no error".into(),
            observed: e.to_string(),
            tolerance: "-".into(),
            passed: false,
        }]
    });
    CriterionReport { name, rows }
}

fn generators(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for twice in 1..=6 {
        let rep = ctx.rep(twice);
        let [jx, jy, jz] = rep.generators();
        let i = c(0.0, 1.0);
        let comm = max_abs_diff(&commutator(jx, jy), &(jz * i))
            .max(max_abs_diff(&commutator(jy, jz), &(jx * i)))
            .max(max_abs_diff(&commutator(jz, jx), &(jy * i)));
        let herm = rep.generators().iter().map(|g| hermiticity_defect(g)).fold(0.0, f64::max);
        let j = rep.j();
        let n = rep.dim();
        let cas = max_abs_diff(&rep.casimir(), &(CMatrix::identity(n, n) * c(j * (j + 1.0), 0.0)));
        let tag = Spin::from_twice(twice)?;
        rows.push(below(format!("j={tag} commutators"), comm, 1e-12));
        rows.push(below(format!("j={tag} hermiticity"), herm, 1e-12));
        rows.push(below(format!("j={tag} casimir"), cas, 1e-12));
    }
    let rep = ctx.rep(2);
    let s = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let sx = CMatrix::from_row_slice(3, 3, &[z, c(s, 0.0), z, c(s, 0.0), z, c(s, 0.0), z, c(s, 0.0), z]);
    let sy = CMatrix::from_row_slice(3, 3, &[z, c(0.0, -s), z, c(0.0, s), z, c(0.0, -s), z, c(0.0, s), z]);
    let sz = CMatrix::from_row_slice(3, 3, &[c(1.0, 0.0), z, z, z, z, z, z, z, c(-1.0, 0.0)]);
    for (name, printed, built) in [("sigma_x", sx, &rep.jx), ("sigma_y", sy, &rep.jy), ("sigma_z", sz, &rep.jz)] {
        let d = max_abs_diff(&printed, built);
        rows.push(CheckRow {
            check: format!("j=1 printed {name}"),
            expected: "bitwise equal".into(),
            observed: sci(d),
            tolerance: "exact".into(),
            passed: d == 0.0,
        });
    }
    Ok(rows)
}

/// The printed `j = 1` exponential
/// `1 + i sin(r)/r A + (cos r - 1)/r^2 A^2`, `A = r·J`, entered entrywise.
fn j1_closed_form(r: [f64; 3]) -> CMatrix {
    let [x, y, zc] = r;
    let len = (x * x + y * y + zc * zc).sqrt();
    let cp = c(x, y) * FRAC_1_SQRT_2;
    let cm = cp.conj();
    let z = c(zc, 0.0);
    let zero = c(0.0, 0.0);
    let a = CMatrix::from_row_slice(3, 3, &[z, cm, zero, cp, zero, cm, zero, cp, -z]);
    let n2 = c(cp.norm_sqr(), 0.0);
    let a2 = CMatrix::from_row_slice(
        3,
        3,
        &[z * z + n2, z * cm, cm * cm, z * cp, n2 * 2.0, -z * cm, cp * cp, -z * cp, z * z + n2],
    );
    let (s1, s2) = if len == 0.0 { (1.0, -0.5) } else { (len.sin() / len, (len.cos() - 1.0) / (len * len)) };
    CMatrix::identity(3, 3) + a * c(0.0, s1) + a2 * c(s2, 0.0)
}

fn exp_closed_form(ctx: &Context) -> Result<Vec<CheckRow>> {
    let rep = ctx.rep(2);
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(-4.0..4.0));
        worst = worst.max(max_abs_diff(&exp_su2(&rep, CanonicalCoords(r)), &j1_closed_form(r)));
    }
    Ok(vec![below("100 random r, max entry deviation", worst, 1e-12)])
}

fn invariance(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut rng = rng(3);
    for twice in 1..=4 {
        let rep = ctx.rep(twice);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let s = random_state(rep.spin(), &mut rng);
            let moved = s.transformed(&exp_su2(&rep, sample_haar(&mut rng)));
            worst = worst.max(invariants_f(&rep, &s)?.max_abs_diff(&invariants_f(&rep, &moved)?));
        }
        rows.push(below(format!("j={} f1..f8 along 200 orbit pairs", rep.spin()), worst, 1e-9));
    }
    Ok(rows)
}

fn las(ctx: &Context) -> Result<Vec<CheckRow>> {
    let rep = ctx.rep(2);
    let mut rng = rng(4);
    let mut worst = [0.0f64; 7];
    for _ in 0..1000 {
        let f = invariants_f(&rep, &random_state(rep.spin(), &mut rng))?;
        let f1 = f.f(1);
        let expected = [f1, 2.0, f1, 2.0, f1 * f1, f1, 2.0 + f1];
        for (k, e) in expected.iter().enumerate() {
            worst[k] = worst[k].max((f.f(k + 2) - e).abs());
        }
    }
    let names = ["f2 = f1", "f3 = 2", "f4 = f1", "f5 = 2", "f6 = f1^2", "f7 = f1", "f8 = 2 + f1"];
    Ok(names.iter().zip(worst).map(|(n, w)| below(format!("j=1 {n}, 1000 states"), w, 1e-10)).collect())
}

fn theta_state(theta: f64) -> PureState {
    canonicalize(&[c(theta.cos(), 0.0), c(0.0, 0.0), c(theta.sin(), 0.0)], 1.0).expect("unit vector")
}

fn f1_values(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut worst: f64 = 0.0;
    for twice in 1..=8 {
        let rep = ctx.rep(twice);
        for k in 0..rep.dim() {
            let m = rep.spin().m_at(k);
            let f1 = invariants_f(&rep, &basis_state(rep.spin(), k))?.f(1);
            worst = worst.max((f1 - m * m).abs());
        }
    }
    let rep = ctx.rep(2);
    let mut theta_worst: f64 = 0.0;
    let mut squared_worst: f64 = 0.0;
    for k in 0..=100 {
        let theta = FRAC_PI_4 * k as f64 / 100.0;
        let f1 = invariants_f(&rep, &theta_state(theta))?.f(1);
        theta_worst = theta_worst.max((f1 - (2.0 * theta).cos()).abs());
        squared_worst = squared_worst.max((f1 - (2.0 * theta).cos().powi(2)).abs());
    }
    Ok(vec![
        below("f1(|m>) - m^2, all m, j <= 4", worst, 1e-12),
        below("j=1 f1(|theta>) - cos 2theta, 101 theta in [0, pi/4]", theta_worst, 1e-12),
        below("j=1 f1(|theta>) - cos^2 2theta, same grid", squared_worst, 1e-12),
    ])
}

fn popu(ctx: &Context) -> Result<Vec<CheckRow>> {
    let rep = ctx.rep(3);
    let rows = scan_orbit_space(&rep, 0, 0)?;
    let expected = [(1.5, [9.0 / 4.0, 81.0 / 16.0, 729.0 / 64.0]), (0.5, [1.0 / 4.0, 1.0 / 16.0, 1.0 / 64.0])];
    let mut out = Vec::new();
    for (row, (m, values)) in rows.iter().zip(expected) {
        for (k, e) in [1usize, 2, 8].iter().zip(values) {
            out.push(close(format!("j=3/2 |{}> f{k}", Spin::from_f64(m).map(|s| s.to_string()).unwrap_or_default()), e, row.invariants.f(*k), 1e-12));
        }
    }
    Ok(out)
}

fn orbit_dims(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut rng = rng(7);
    let mut max_dim = 0;
    for (twice, expected) in [(1u32, 1usize), (2, 0), (3, 0)] {
        let rep = ctx.rep(twice);
        let mut bad = 0;
        for _ in 0..1000 {
            let d = little_algebra_dim(&rep, &random_state(rep.spin(), &mut rng), RANK_TOLERANCE)?;
            max_dim = max_dim.max(d);
            bad += usize::from(d != expected);
        }
        rows.push(violations(format!("j={} random states with dim != {expected}", rep.spin()), bad, 1000));
    }
    let mut bad = 0;
    let mut total = 0;
    for twice in 1..=3 {
        let rep = ctx.rep(twice);
        for k in 0..rep.dim() {
            let d = little_algebra_dim(&rep, &basis_state(rep.spin(), k), RANK_TOLERANCE)?;
            max_dim = max_dim.max(d);
            bad += usize::from(d != 1);
            total += 1;
        }
    }
    rows.push(violations("eigenstates with dim != 1", bad, total));
    rows.push(label("largest little-algebra dimension", "1", &max_dim.to_string()));
    Ok(rows)
}

fn pi_flip(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rng = rng(8);
    let mut sample = |twice: u32, f1_min: f64, want: bool| -> Result<usize> {
        let rep = ctx.rep(twice);
        let mut bad = 0;
        let mut done = 0;
        while done < 1000 {
            let s = random_state(rep.spin(), &mut rng);
            let m = mean_spin(&rep, &s);
            if m.iter().map(|x| x * x).sum::<f64>() <= f1_min {
                continue;
            }
            done += 1;
            bad += usize::from(pi_flip_fixes(&rep, &s)? != want);
        }
        Ok(bad)
    };
    let one = sample(2, 1e-6, true)?;
    let three_halves = sample(3, 0.01, false)?;
    Ok(vec![
        violations("j=1, f1 > 1e-6: pi flip not fixing", one, 1000),
        violations("j=3/2, f1 > 0.01: pi flip fixing", three_halves, 1000),
    ])
}

fn p_matrix_check(ctx: &Context) -> Result<Vec<CheckRow>> {
    let rep = ctx.rep(2);
    let mut rng = rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let scale = rng.random_range(0.1..3.0);
        let x = RealifiedVector(DVector::from_fn(6, |_, _| scale * rng.sample::<f64, _>(StandardNormal)));
        let g0 = grad_invariant(Invariant::Norm, &rep, &x).0;
        let g1 = grad_invariant(Invariant::MeanSpinSquared, &rep, &x).0;
        let built = Matrix2::new(g0.dot(&g0), g0.dot(&g1), g1.dot(&g0), g1.dot(&g1));
        let closed = p_matrix_closed_form(
            invariant_value(Invariant::Norm, &rep, &x),
            invariant_value(Invariant::MeanSpinSquared, &rep, &x),
        );
        worst = worst.max((built - closed).amax() / closed.amax());
    }
    let mut rows = vec![below("500 points, relative deviation from closed form", worst, 1e-8)];
    for ((f0, f1), want) in [
        ((1.0, 0.5), Stratum::Principal),
        ((1.0, 1.0), Stratum::Boundary),
        ((1.0, 0.0), Stratum::Boundary),
        ((0.0, 0.0), Stratum::Origin),
        ((1.0, 1.5), Stratum::Outside),
    ] {
        let (got, rank) = psd_classify(f0, f1);
        rows.push(label(format!("stratum at ({f0}, {f1}), rank {rank}"), want.as_str(), got.as_str()));
    }
    Ok(rows)
}

fn identity(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut rng = rng(10);
    for twice in 1..=6 {
        let rep = ctx.rep(twice);
        let [a, b, g] = default_identity_orders(rep.spin());
        let mut worst: f64 = 0.0;
        let mut fiducials: Vec<PureState> = (0..rep.dim()).map(|k| basis_state(rep.spin(), k)).collect();
        fiducials.push(random_state(rep.spin(), &mut rng));
        for phi in &fiducials {
            worst = worst.max(identity_defect(&rep, phi, a, b, g)?.defect);
        }
        rows.push(below(format!("j={} defect, orders ({a},{b},{g})", rep.spin()), worst, 1e-10));
    }
    let rep = ctx.rep(2);
    let control = identity_defect(&rep, &basis_state(rep.spin(), 0), 2, 1, 2)?.defect;
    rows.push(above("j=1 |1>, orders (2,1,2) positive control", control, 0.05));
    Ok(rows)
}

fn coherent_families(ctx: &Context) -> Result<Vec<CheckRow>> {
    let rep = ctx.rep(2);
    let n = 50;
    let mut s2: f64 = 0.0;
    for ia in 0..n {
        let alpha = FRAC_PI_2 * (ia as f64 + 0.5) / n as f64;
        for ib in 0..n {
            let beta = 2.0 * PI * ib as f64 / n as f64;
            let z = C64::from_polar(alpha.tan(), beta);
            let d = ray_distance(&spin_coherent_highest(&rep, z), &j1_orbit_family(FamilyKind::S2, alpha, beta))?;
            s2 = s2.max(d);
        }
    }
    let mut family = Vec::with_capacity(n * n);
    let mut forward: f64 = 0.0;
    for ia in 0..n {
        let alpha = FRAC_PI_4 * (ia as f64 + 0.5) / n as f64;
        let modulus = alpha.sin() / (2.0 * (2.0 * alpha).cos()).sqrt();
        for ib in 0..n {
            let beta = 2.0 * PI * ib as f64 / n as f64;
            let s = spin_coherent_general(&rep, 0.0, C64::from_polar(modulus, beta))?;
            forward = forward.max(nearest_rp2_member(&s)?.2);
            family.push(s);
        }
    }
    // every RP2 member within grid resolution of some family member
    let mut coverage: f64 = 0.0;
    for ia in 0..20 {
        let alpha = FRAC_PI_4 * (ia as f64 + 0.5) / 20.0;
        for ib in 0..20 {
            let target = j1_orbit_family(FamilyKind::RP2, alpha, 2.0 * PI * ib as f64 / 20.0);
            let mut best = f64::INFINITY;
            for s in &family {
                best = best.min(ray_distance(&target, s)?);
            }
            coverage = coverage.max(best);
        }
    }
    Ok(vec![
        below("S2 family vs e^(zJ-)|1>, z = tan(a) e^(ib), 50x50", s2, 1e-10),
        below("m=0 family to nearest RP2 member, 50x50", forward, 1e-6),
        below("RP2 members to nearest m=0 family member (grid resolution)", coverage, 0.15),
    ])
}

fn uncertainty(ctx: &Context) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut rng = rng(12);
    for twice in 1..=6 {
        let rep = ctx.rep(twice);
        let mut lowest = f64::INFINITY;
        for _ in 0..10_000 {
            lowest = lowest.min(uncertainty_gap(&rep, &random_state(rep.spin(), &mut rng)));
        }
        rows.push(CheckRow {
            check: format!("j={} smallest gap over 10^4 states", rep.spin()),
            expected: ">= -1e-12".into(),
            observed: sci(lowest),
            tolerance: "-".into(),
            passed: lowest >= -1e-12,
        });
        rows.push(below(format!("j={} |gap| at |j,j>", rep.spin()), uncertainty_gap(&rep, &basis_state(rep.spin(), 0)).abs(), 1e-12));
    }
    Ok(rows)
}

/// Deviations at or below this level count as converged when checking that
/// the truncation error halves under doubling.
pub const TRUNCATION_FLOOR: f64 = 1e-12;

fn weyl() -> Result<Vec<CheckRow>> {
    let fock = build_fock(64, 1.0)?;
    let mut glauber_worst: f64 = 0.0;
    for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for k in 0..8 {
            let z = C64::from_polar(r, 2.0 * PI * k as f64 / 8.0);
            let t = moment_table(&fock, &glauber(&fock, z)?, 2)?;
            glauber_worst = glauber_worst.max((t.get(2, 0) - 0.5).abs()).max((t.get(0, 2) - 0.5).abs()).max(t.get(1, 1).abs());
        }
    }
    let displacements = [(0.3, -0.2), (-0.5, 0.1)];
    let deviation = |n: usize| -> Result<f64> {
        let f = build_fock(n, 1.0)?;
        let fid = FockState::from_amplitudes(&f, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])?;
        weyl_orbit_invariance(&f, &fid, &displacements, 4)
    };
    let d128 = deviation(128)?;
    let d256 = deviation(256)?;
    let (q1, p1, q2, p2) = (0.3, -0.4, -0.2, 0.5);
    let lhs = displacement(&fock, q2, p2) * displacement(&fock, q1, p1);
    let rhs = displacement(&fock, q1 + q2, p1 + p2) * C64::from_polar(1.0, (q1 * p2 - p1 * q2) / 2.0);
    let low = 8;
    let law = DMatrix::from_fn(64, low, |r, col| (lhs[(r, col)] - rhs[(r, col)]).norm()).amax();
    Ok(vec![
        below("Glauber |z| <= 2, n=64: max |M20-1/2|, |M02-1/2|, |M11|", glauber_worst, 1e-8),
        below("(|0>+|3>)/sqrt2 moment deviation, n=128", d128, 1e-6),
        CheckRow {
            check: "same at n=256, halved or at floor".into(),
            expected: format!("<= max({}, {TRUNCATION_FLOOR:e})", sci(d128 / 2.0)),
            observed: sci(d256),
            tolerance: "-".into(),
            passed: d256 <= (d128 / 2.0).max(TRUNCATION_FLOOR),
        },
        below("group-law phase, n=64, levels 0..7", law, 1e-8),
    ])
}

/// `theta` of the `|theta>` orbit whose projection is tested for filling its
/// bounding box.
pub const OCTANT_THETA: f64 = PI / 8.0;
const OCTANT_BINS: usize = 20;

/// Fraction of an `n x n` grid over the bounding box of `points` that
/// contains at least one point.
pub fn bounding_box_fill(points: &[(f64, f64)], n: usize) -> f64 {
    let (mut u0, mut u1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(u, v) in points {
        u0 = u0.min(u);
        u1 = u1.max(u);
        v0 = v0.min(v);
        v1 = v1.max(v);
    }
    let mut hit = vec![false; n * n];
    let bin = |x: f64, lo: f64, hi: f64| {
        if hi > lo {
            (((x - lo) / (hi - lo)) * n as f64).floor().clamp(0.0, (n - 1) as f64) as usize
        } else {
            0
        }
    };
    for &(u, v) in points {
        hit[bin(u, u0, u1) * n + bin(v, v0, v1)] = true;
    }
    hit.iter().filter(|&&h| h).count() as f64 / (n * n) as f64
}

fn octant() -> Result<Vec<CheckRow>> {
    let n = 50;
    let mut v_worst: f64 = 0.0;
    let mut sum_worst: f64 = 0.0;
    for ia in 0..=n {
        let alpha = FRAC_PI_2 * ia as f64 / n as f64;
        for ib in 0..n {
            let beta = 2.0 * PI * ib as f64 / n as f64;
            v_worst = v_worst.max(octant_projection_j1(&j1_orbit_family(FamilyKind::RP2, alpha, beta))?.v.abs());
            let p = octant_projection_j1(&j1_orbit_family(FamilyKind::S2, alpha, beta))?;
            sum_worst = sum_worst.max((p.abs_z1 + p.abs_z2 - 1.0).abs());
        }
    }
    let rep = SpinRep::new(Spin::from_twice(2)?);
    let mut rng = rng(14);
    let points: Vec<(f64, f64)> = orbit_sample(&rep, &theta_state(OCTANT_THETA), 100_000, &mut rng)
        .iter()
        .map(|s| octant_projection_j1(s).map(|p| (p.u, p.v)))
        .collect::<Result<_>>()?;
    let fill = bounding_box_fill(&points, OCTANT_BINS);
    Ok(vec![
        below("RP2 family |v|", v_worst, 1e-12),
        below("S2 family |absZ1 + absZ2 - 1|", sum_worst, 1e-12),
        CheckRow {
            check: format!("|theta={OCTANT_THETA:.4}> orbit, 10^5 samples, {OCTANT_BINS}x{OCTANT_BINS} box fill"),
            expected: ">= 0.95".into(),
            observed: format!("{fill:.4}"),
            tolerance: "-".into(),
            passed: fill >= 0.95,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_oracle_is_unitary_and_periodic() {
        let u = j1_closed_form([0.0, 0.0, 2.0 * PI]);
        assert!(max_abs_diff(&u, &CMatrix::identity(3, 3)) < 1e-12);
        assert!(max_abs_diff(&j1_closed_form([0.0; 3]), &CMatrix::identity(3, 3)) == 0.0);
        let u = j1_closed_form([0.3, -1.1, 0.7]);
        assert!(crate::linalg::unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn unknown_check_is_rejected() {
        let opts = VerifyOptions { only: Some("nope".into()), fault: None };
        assert!(run_verify(&opts).is_err());
    }

    #[test]
    fn fault_is_detected_by_generators() {
        let opts = VerifyOptions { only: None, fault: Some(Fault::CorruptSigmaX) };
        let report = run_criterion("generators", &opts);
        assert!(!report.passed());
        assert!(report.failing().any(|r| r.check.contains("hermiticity")));
    }

    #[test]
    fn box_fill_of_a_filled_square() {
        let pts: Vec<(f64, f64)> =
            (0..100).flat_map(|i| (0..100).map(move |k| (i as f64 / 99.0, k as f64 / 99.0))).collect();
        assert_eq!(bounding_box_fill(&pts, 10), 1.0);
        let diagonal: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, i as f64)).collect();
        assert!((bounding_box_fill(&diagonal, 10) - 0.1).abs() < 1e-12);
    }
}
