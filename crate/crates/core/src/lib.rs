pub mod classify;
pub mod conservation;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod quadrature;
pub mod suite;
pub mod variation;

pub use error::{Error, Result};
pub use model::{PolarState, PowerParams, Sample};
