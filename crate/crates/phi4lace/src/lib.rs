//! Numerical toolkit for the lattice φ⁴ model in high dimensions.
//!
//! The crate cross-validates several constructions that connect the φ⁴
//! two-point function to random-walk Green functions:
//!
//! * [`lattice`] — coupling functions on Z^d, their moments, and torus geometry;
//! * [`green`] — random-walk Green functions S_p (FFT on a torus, Bessel
//!   integral in free space) and n-step convolution bounds;
//! * [`gs`] — the Griffiths-Simon approximation of a φ⁴ spin by a block of
//!   N Ising spins, with exact finite-N convergence diagnostics;
//! * [`exact`] — exhaustive spin/random-current sums on small graphs: the
//!   two-point function two ways, the double-connection coefficient π⁽⁰⁾,
//!   the lace identity residual and correlation inequalities;
//! * [`mc`] — Metropolis sampling of the φ⁴ model on a torus, Schwinger-Dyson
//!   residuals and critical-point scans;
//! * [`deconv`] — the deconvolution algebra: F from Π, the susceptibility
//!   identity, the (q, r) moment matching, the error kernel E and the
//!   effective linear Schwinger-Dyson walk with its decay amplitude.

pub mod bessel;
pub mod cli;
pub mod config;
pub mod deconv;
pub mod exact;
pub mod fft;
pub mod green;
pub mod gs;
pub mod lattice;
pub mod mc;
pub mod stats;

pub use lattice::{Coupling, CouplingKind, StepDistribution, TorusGeometry};
