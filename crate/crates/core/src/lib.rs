pub mod asymptotics;
pub mod bishop;
pub mod circle;
pub mod cli;
pub mod disc_family;
pub mod error;
pub mod profiles;
pub mod propagation;
pub mod quad;

pub use error::{Error, Result};
