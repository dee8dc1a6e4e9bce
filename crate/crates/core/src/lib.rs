pub mod catalog;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod expalg;
pub mod linalg;
pub mod normality;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use expalg::{c, Cplx, ExpPoly};
