//! # vecmk
//!
//! Norms of Hilbert-space-valued measures on finite metric spaces, with
//! certified solver output.
//!
//! A discrete vector measure assigns one vector atom per point of a finite
//! metric space. Four norms are computed, together with the metrics they
//! induce on the underlying space:
//!
//! | Norm | Definition | Finite on |
//! |------|------------|-----------|
//! | variation | sum of atom norms | all measures |
//! | `mk` | sup of the integral over the bounded-Lipschitz unit ball | all measures |
//! | `mkstar` | sup of the integral over the Lipschitz unit ball | balanced measures |
//! | `hanin` | inf-convolution extension of `mkstar` | all measures |
//!
//! Every iterative computation returns a [`solvers::NormCertificate`]: a
//! bracket `[lower, upper]` with a feasible primal witness attaining the
//! lower bound and a dual flow decomposition attaining the upper bound, so
//! results can be re-verified externally.
//!
//! Start with the runnable examples (`cargo run --example <name>`), or the
//! `vecmk` binary for file-driven use.

pub mod functions;
pub mod linalg;
pub mod measures;
pub mod norms;
pub mod oracle;
pub mod solvers;
pub mod space;
