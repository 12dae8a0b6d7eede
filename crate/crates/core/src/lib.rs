//! Convex hull pricing for unit commitment.
//!
//! Each generator is modelled by an extended formulation whose LP relaxation
//! is integral; coupling the blocks through load-balance rows gives a system
//! LP whose balance duals are the convex hull prices. A dynamic program,
//! brute-force enumeration and a branch-and-bound MIP solver cross-check it.

#![allow(clippy::needless_range_loop)]

pub mod cases;
pub mod cli;
pub mod dp;
pub mod error;
pub mod formulations;
pub mod fuzz;
pub mod lp;
pub mod mip;
pub mod model;
pub mod pricing;

pub use error::{Error, Result};
