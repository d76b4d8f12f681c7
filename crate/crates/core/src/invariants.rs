//! Orbit invariants built from mean values of generator products.
//!
//! Means are contracted with the Euclidean metric `delta_ab` (plain repeated
//! indices) rather than the Killing form; this fixes the overall constants of
//! the chain invariants and nothing else.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::expectation;
use crate::spin_rep::SpinRep;
use crate::state::PureState;
use crate::{CMatrix, C64};

/// Imaginary residues must stay below this, relative to `max(1, |value|)`.
pub const IMAGINARY_TOLERANCE: f64 = 1e-11;

/// Largest chain length accepted by [`chain_invariant`] (cost grows as `9^n`).
pub const MAX_CHAIN_LENGTH: usize = 8;

fn check_state(rep: &SpinRep, state: &PureState) -> Result<()> {
    if rep.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), got: state.dim() });
    }
    Ok(())
}

/// `<psi| J_a1 ... J_ap |psi>` with 1-based axis indices.
pub fn mean_chain(rep: &SpinRep, state: &PureState, axes: &[usize]) -> Result<C64> {
    check_state(rep, state)?;
    if axes.is_empty() {
        return Err(Error::InvalidArgument("empty axis list".into()));
    }
    let g = rep.generators();
    let mut v = state.amplitudes().clone();
    for &a in axes.iter().rev() {
        if !(1..=3).contains(&a) {
            return Err(Error::BadAxis(a));
        }
        v = g[a - 1] * v;
    }
    Ok(state.amplitudes().dotc(&v))
}

/// The eight invariants `f1 .. f8`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantVector(pub [f64; 8]);

impl InvariantVector {
    pub fn f(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn max_abs_diff(&self, other: &InvariantVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// First, second and third generator moments of a state.
struct Moments {
    one: [C64; 3],
    two: [[C64; 3]; 3],
    three: [[[C64; 3]; 3]; 3],
}

impl Moments {
    fn new(rep: &SpinRep, state: &PureState) -> Moments {
        let g = rep.generators();
        let psi = state.amplitudes();
        let single: Vec<_> = g.iter().map(|m| *m * psi).collect();
        let double: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|k| g[i] * &single[k]).collect()).collect();
        let one = std::array::from_fn(|i| psi.dotc(&single[i]));
        let two = std::array::from_fn(|i| std::array::from_fn(|k| psi.dotc(&double[i][k])));
        // J_i J_k J_l psi; the bra side is J_i psi.
        let three = std::array::from_fn(|i| {
            std::array::from_fn(|k| std::array::from_fn(|l| single[i].dotc(&double[k][l])))
        });
        Moments { one, two, three }
    }
}

fn real_part(value: C64, what: &str) -> Result<f64> {
    let scale = value.re.abs().max(1.0);
    if value.im.abs() > IMAGINARY_TOLERANCE * scale {
        return Err(Error::ImaginaryResidue { what: what.to_string(), residue: value.im.abs() });
    }
    Ok(value.re)
}

pub fn invariants_f(rep: &SpinRep, state: &PureState) -> Result<InvariantVector> {
    check_state(rep, state)?;
    let Moments { one: a, two: b, three: c } = Moments::new(rep, state);
    let zero = C64::new(0.0, 0.0);
    let mut f = [zero; 8];
    for i in 0..3 {
        f[0] += a[i] * a[i];
        for j in 0..3 {
            f[1] += a[i] * a[j] * b[i][j];
            f[2] += b[i][j] * b[j][i];
            for k in 0..3 {
                f[3] += a[i] * a[j] * b[i][k] * b[k][j];
                f[4] += b[i][j] * b[j][k] * b[k][i];
                f[5] += a[i] * a[j] * a[k] * c[i][j][k];
                f[6] += a[i] * b[j][k] * c[j][i][k];
                f[7] += c[i][j][k] * c[k][j][i];
            }
        }
    }
    let mut out = [0.0; 8];
    for (k, v) in f.iter().enumerate() {
        out[k] = real_part(*v, &format!("f{}", k + 1))?;
    }
    Ok(InvariantVector(out))
}

/// Structure constants `c_ab^c` of a Lie algebra together with the matrices
/// representing its basis.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub structure: Vec<Vec<Vec<C64>>>,
    pub generators: Vec<CMatrix>,
}

impl LieAlgebraData {
    /// su(2): `c_ab^c = i eps_abc` with the spin-`j` generators.
    pub fn su2(rep: &SpinRep) -> LieAlgebraData {
        let mut structure = vec![vec![vec![C64::new(0.0, 0.0); 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    structure[a][b][c] = C64::new(0.0, levi_civita(a, b, c));
                }
            }
        }
        LieAlgebraData { structure, generators: rep.generators().iter().map(|m| (*m).clone()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }
}

pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Chain length and the contiguous blocks of slots averaged together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl ChainSpec {
    /// `blocks` lists 1-based slot positions; together they must partition
    /// `1..=n` into nonempty runs of consecutive slots, in order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<ChainSpec> {
        if n == 0 {
            return Err(Error::InvalidChain("chain length must be positive".into()));
        }
        let mut next = 1;
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidChain("empty block".into()));
            }
            for &slot in block {
                if slot != next {
                    return Err(Error::InvalidChain(format!(
                        "blocks must cover 1..={n} contiguously; found slot {slot} where {next} was expected"
                    )));
                }
                next += 1;
            }
        }
        if next != n + 1 {
            return Err(Error::InvalidChain(format!("blocks cover {} of {n} slots", next - 1)));
        }
        Ok(ChainSpec { n, blocks })
    }

    /// Block sizes, e.g. `[1, 1, 2]` for `{1}, {2}, {3, 4}`.
    pub fn from_sizes(sizes: &[usize]) -> Result<ChainSpec> {
        let mut blocks = Vec::new();
        let mut slot = 1;
        for &s in sizes {
            blocks.push((slot..slot + s).collect());
            slot += s;
        }
        ChainSpec::new(slot - 1, blocks)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

/// Sum over slot labels `a_k` and chain labels `b_k` of
/// `prod_k c_{a_k b_k}^{b_(k+1)}` times the product of block means.
pub fn chain_invariant(rep: &SpinRep, state: &PureState, spec: &ChainSpec) -> Result<C64> {
    chain_invariant_with(&LieAlgebraData::su2(rep), state, spec)
}

/// [`chain_invariant`] for arbitrary structure constants.
///
/// Every assignment of the slot labels is enumerated; for each one the sum
/// over chain labels is the trace of the product of the matrices
/// `(M_a)_{b b'} = c_{a b}^{b'}`.
pub fn chain_invariant_with(algebra: &LieAlgebraData, state: &PureState, spec: &ChainSpec) -> Result<C64> {
    let n = spec.len();
    if n > MAX_CHAIN_LENGTH {
        return Err(Error::InvalidChain(format!("chain length {n} exceeds {MAX_CHAIN_LENGTH}")));
    }
    let d = algebra.dim();
    if let Some(g) = algebra.generators.first() {
        if g.nrows() != state.dim() {
            return Err(Error::DimensionMismatch { expected: g.nrows(), got: state.dim() });
        }
    }
    let psi = state.amplitudes();
    let adjoint: Vec<CMatrix> = (0..d)
        .map(|a| CMatrix::from_fn(d, d, |b, c| algebra.structure[a][b][c]))
        .collect();

    let mut block_means: HashMap<Vec<usize>, C64> = HashMap::new();
    let mut labels = vec![0usize; n];
    let mut total = C64::new(0.0, 0.0);
    loop {
        let mut product = CMatrix::identity(d, d);
        for &a in &labels {
            product *= &adjoint[a];
        }
        let trace = product.trace();
        if trace != C64::new(0.0, 0.0) {
            let mut weight = trace;
            for block in spec.blocks() {
                let key: Vec<usize> = block.iter().map(|&slot| labels[slot - 1]).collect();
                let mean = *block_means.entry(key.clone()).or_insert_with(|| {
                    let op = key.iter().fold(CMatrix::identity(psi.len(), psi.len()), |acc, &a| {
                        acc * &algebra.generators[a]
                    });
                    expectation(&op, psi)
                });
                weight *= mean;
            }
            total += weight;
        }
        // odometer over {0..d}^n
        let mut k = 0;
        loop {
            if k == n {
                return Ok(total);
            }
            labels[k] += 1;
            if labels[k] < d {
                break;
            }
            labels[k] = 0;
            k += 1;
        }
    }
}
