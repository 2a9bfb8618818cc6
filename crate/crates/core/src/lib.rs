//! Exact-arithmetic verification of q-WZ irrationality schemes.

pub mod certificate;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod numerics;
pub mod poly;
pub mod qobjects;
pub mod ratfunc;
pub mod scheme;
pub mod sequence;
pub mod serial;
pub mod verify;

pub use cyclo::{CycloDen, CycloRat};
pub use error::{ArithError, Error, Result};
pub use poly::QPoly;
pub use ratfunc::QRat;
