//! Desk-scale simulation of non-Abelian gauge-field (NAGF) measurement in a
//! double-Λ four-level system.
//!
//! The crate models the full measurement chain: the four-level Hamiltonian
//! and its degenerate dark/bright eigensystem ([`atom`]), the Berry
//! connection, field strengths and Wilson lines on the dark subspace
//! ([`gauge`]), time-dependent Schrödinger evolution along control schedules
//! with holonomy extraction ([`evolve`]), the measurement protocols —
//! multi-loop amplification, minimal-area scans, two-triangle field
//! extraction, loop-order non-commutativity, and pseudospin tomography
//! ([`protocols`]) — and control-error injection with shot-noise statistics
//! ([`noise`]).
//!
//! Conventions used throughout:
//!
//! * bare basis order |1⟩, |2⟩, |3⟩, |4⟩; ħ = 1; the Hamiltonian carries an
//!   explicit 1/2 prefactor so the spectrum is ±Ω0/2;
//! * pseudospin basis (|2⟩, |4⟩) with σz = |2⟩⟨2| − |4⟩⟨4|;
//! * connection A_μ = ⟨D_j|∂_μ D_k⟩ (anti-Hermitian), transport
//!   U = P exp(−∮A), curvature F = ∂A − ∂A + [A, A];
//! * all public results are deterministic given their inputs and seeds.

pub mod atom;
pub mod evolve;
pub mod gauge;
pub mod mat;
pub mod noise;
pub mod protocols;
pub mod schedule;
pub mod su2;

pub use atom::{ControlPoint, Couplings, EigenSystem};
pub use mat::{C64, Mat2, Mat4, State2, State4};
pub use schedule::ParameterSchedule;
pub use su2::{RotationAxisForm, Tolerances, Unitary2};
