pub mod data;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod model;
pub mod scenario;
pub mod temporal;

pub use error::{GridcapError, Result, ValidationError};
