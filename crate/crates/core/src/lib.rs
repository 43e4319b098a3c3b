//! Idempotent semirings, functional semimodules and kernel representations of
//! b-linear operators, with an executable check suite for the accompanying
//! structure theory.

pub mod apps;
pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod semimodule;
pub mod semiring;

pub use error::{Error, Result};
pub use semimodule::{FiniteFunction, FunctionalSemimodule, PointSet};
pub use semiring::{Semiring, SemiringOps, Value};
