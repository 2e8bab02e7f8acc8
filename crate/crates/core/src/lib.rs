mod cache;
pub mod chain;
pub mod dfunctor;
pub mod error;
pub mod exactlin;
pub mod perm;
pub mod spectra;
pub mod symseq;
pub mod verify;

pub use error::{Error, Result};
