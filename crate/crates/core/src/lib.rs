//! Exact computations in additive regular categories realized inside
//! categories of finitely generated modules.

pub mod abcat;
pub mod complexes;
pub mod error;
pub mod exec;
pub mod freyd;
pub mod heart;
pub mod intlin;
pub mod monloc;
pub mod regular;
pub mod report;
pub mod scenario;
pub mod sample;

pub use error::{Error, Result};
pub use exec::Execution;
pub use report::{Outcome, Report};
