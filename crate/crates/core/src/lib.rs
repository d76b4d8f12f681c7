//! Group orbits of SU(2) in complex projective space.
//!
//! The state space of a spin-`j` system is the projective space `CP^(2j)`.
//! The group acts on it through the spin-`j` irreducible representation and
//! splits it into orbits, each of which is a set of generalized coherent
//! states. This crate builds the representation, evaluates the polynomial
//! orbit invariants, classifies orbits by dimension and type, constructs the
//! SU(2) coherent-state families and reproduces the analogous moment
//! invariants of the Heisenberg–Weyl group on a truncated Fock space.
//!
//! `hbar = 1` throughout the SU(2) modules; the Fock-space module keeps it as
//! a parameter.

pub mod coherent;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod orbit;
pub mod quadrature;
pub mod realified;
pub mod spin_rep;
pub mod state;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use invariants::{chain_invariant, invariants_f, mean_chain, ChainSpec, InvariantVector};
pub use orbit::{classify_orbit, little_algebra_dim, mean_spin, OrbitReport, OrbitType};
pub use spin_rep::{build_rep, exp_su2, rotation_about, sample_haar, CanonicalCoords, Spin, SpinRep};
pub use state::{canonicalize, eigenstate, ray_distance, PureState};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;
