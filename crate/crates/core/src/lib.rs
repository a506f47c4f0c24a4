//! Flat wall search: walls, minors of K_t, crosses over cycles and flat
//! separations.

pub mod config;
pub mod cross;
pub mod dispersed;
pub mod error;
pub mod flatwall;
mod flow;
pub mod graph;
pub mod instances;
pub mod minor;
pub mod wall;

pub use config::{Config, Profile};
pub use error::{Error, Result};
