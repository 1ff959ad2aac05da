//! Exact symbolic verification of Frobenius manifold structures on the orbit
//! spaces of the dicyclic groups.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod dicyclic;
pub mod diffgeo;
pub mod exactnum;
pub mod frobenius;
pub mod numcheck;
pub mod radconst;
pub mod report;
pub mod real;
pub mod symexpr;

pub use error::{Error, Result};
