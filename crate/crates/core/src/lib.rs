//! Exact computations with tropical cycles in block-decomposed spaces
//! `R^{m_1} × … × R^{m_k}`: stable intersections, multidegrees, projection
//! ranks and the polymatroids they cut out.

pub mod cli;
pub mod cycles;
pub mod error;
pub mod fixtures;
pub mod kernel;
pub mod multidegree;
pub mod ops;

pub use error::{Error, Result};
