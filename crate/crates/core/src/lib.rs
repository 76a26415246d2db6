pub mod classical;
pub mod cli;
pub mod error;
pub mod game;
pub mod group;
pub mod lightcone;
pub mod linalg;
pub mod mps;
pub mod stabilizer;

pub use error::{Result, SptoError};
