//! Spectra of large Jordan blocks under small random perturbations.
//!
//! The model is A0 + delta Q with A0 the nilpotent Jordan block and Q either
//! a Ginibre draw or the exactly solvable rank-one corner matrix. Most
//! eigenvalues of the perturbed operator settle near the circle of radius
//! delta^(1/n), while the stragglers inside the disc follow the hyperbolic
//! volume density 2/(pi (1-|z|^2)^2) in the appropriate coupling regime.
//!
//! Crate layout:
//! - [`linalg`]: dense complex matrices, LU with partial pivoting, a shifted
//!   QR eigensolver, and the seeded Gaussian sampler.
//! - [`jordan`]: the perturbation model, acceptance event, and regime flags.
//! - [`grushin`]: the bordered (Grushin) operator calculus, the effective
//!   scalar whose zeros are the eigenvalues, its Neumann and first-order
//!   approximations, and winding-number zero counts.
//! - [`asymptotics`]: partial geometric sums, envelope equivalences, and the
//!   finite-to-limit density bridge fit.
//! - [`density`]: limiting and finite-n radial densities, histograms with
//!   Poisson error bars, the sector uniformity test, and annulus checks.
//! - [`experiment`]: seeded, deterministic experiment commands writing CSV
//!   and JSON artifacts; the CLI is a thin wrapper around this module.

pub mod asymptotics;
pub mod density;
pub mod experiment;
pub mod grushin;
pub mod jordan;
pub mod linalg;

pub use linalg::C64;
