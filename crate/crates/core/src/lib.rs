//! Finite-dimensional verification laboratory for bracket-based quantization.
//!
//! The crate is organized in layers:
//!
//! * [`operator`]: dense complex matrices with commutator/anti-commutator
//!   products, matrix exponentials and deterministic random Hermitian
//!   generation,
//! * [`eigen`]: a self-contained Hermitian Jacobi eigensolver,
//! * [`symbolic`]: an exact-coefficient noncommutative polynomial algebra
//!   over `q`, `p` with a formal `hbar`, including Weyl ordering and the
//!   quantization-discrepancy computation,
//! * [`reps`]: finite-dimensional canonical representations (truncated
//!   ladder, clock-shift, Pauli pair, Jordan-Wigner fermions),
//! * [`identity`]: numerical bracket-identity suites and the
//!   finite-dimension infeasibility certificates,
//! * [`heisenberg`]: the 1925 matrix-mechanics reconstruction on the
//!   (an)harmonic oscillator,
//! * [`constraint`]: constrained dynamics with total Hamiltonians, ghosts
//!   and Hamilton-equation residuals,
//! * [`field`]: lattice realizations of the boson/fermion field rules,
//! * [`suites`]: deterministic batch suites feeding the CLI report writer.

pub mod constants;
pub mod constraint;
pub mod eigen;
pub mod error;
pub mod field;
pub mod heisenberg;
pub mod identity;
pub mod operator;
pub mod report;
pub mod reps;
pub mod rng;
pub mod suites;
pub mod symbolic;

pub use constants::QuantizationConstants;
pub use error::LabError;
pub use operator::Operator;
pub use report::ResidualReport;
