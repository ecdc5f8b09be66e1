pub mod error;
pub mod io;
pub mod koszul;
pub mod lab;
pub mod lie;
pub mod numeric;
pub mod representation;
pub mod spectra;

pub use error::{Error, Result};
