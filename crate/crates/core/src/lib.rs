pub mod budget;
pub mod classify;
pub mod cli;
pub mod error;
pub mod export;
pub mod geom;
pub mod manifold;
pub mod map;
pub mod numeric;
pub mod trap;

pub use error::{LabError, Result};
