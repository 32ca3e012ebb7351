//! Decision-diagram representation of quantum states and operators with
//! exact, global-phase and relative-phase equivalence checks.

pub mod circuit;
pub mod dd;
pub mod equiv;
mod error;
pub mod linalg;
pub mod oracle;
pub mod scaling;

pub use error::{Error, Result};
