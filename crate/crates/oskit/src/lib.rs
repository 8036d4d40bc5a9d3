//! Numerical workbench for reflection-positive structures.
//!
//! The crate is organized around finite-dimensional models in which every
//! positivity claim reduces to a positive-semidefiniteness verdict on a
//! concrete hermitian matrix:
//!
//! * [`rphs`] — reflection-positive Hilbert spaces, OS quantization, the
//!   induced transform on operators, and the Markov condition.
//! * [`kernel`] — a catalog of closed-form kernels with their reflection
//!   geometries, Gram assembly, and PSD certification.
//! * [`dilation`] — hermitian contraction semigroups, their minimal unitary
//!   dilation model, and Hardy-space/residue cross-checks.
//! * [`kms`] — KMS positive-definite functions, standard subspaces, and the
//!   reflection-positive extension to the doubled circle.
//! * [`sphere`] — Gauss hypergeometric evaluation, conformal sphere geometry,
//!   and the sphere/ball kernel family with its positivity window.
//! * [`freefield`] — euclidean projections of Lorentz-invariant measures,
//!   Schwinger-type two-point functions, and half-space positivity.
//! * [`ospaths`] — Gaussian processes, Markov chains, heat and oscillator
//!   semigroups, and Monte-Carlo cross-checks.
//!
//! Shared numerics live in [`report`] (eigenvalue-based PSD verdicts) and
//! [`quad`] (Gauss–Legendre quadrature).

pub mod dilation;
pub mod freefield;
pub mod kernel;
pub mod kms;
pub mod ospaths;
pub mod quad;
pub mod report;
pub mod rphs;
pub mod sphere;

pub use report::{GramReport, Verdict};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix used throughout.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVec = nalgebra::DVector<C64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
/// Dense real vector.
pub type RVec = nalgebra::DVector<f64>;
