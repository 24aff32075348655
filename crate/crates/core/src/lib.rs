//! Asymptotic iteration method for a hydrogen-like atom confined in a hard
//! spherical cavity, with exact-solution and shooting oracles.

pub mod aim;
pub mod error;
pub mod golden;
pub mod hydrogen;
pub mod jet;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};
