//! Exact wedge products of polytopes, the regular polyhedral surfaces in
//! their 2-skeleta, and certified realizations of those surfaces in R^4
//! and R^3.

pub mod error;
pub mod exact;
pub mod polytope;
pub mod wpcombin;
pub mod complex;
pub mod surface;
pub mod projection;
pub mod moduli;
pub mod export;

pub use error::{Error, Result};
