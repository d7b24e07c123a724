//! Enumeration and classification of small covers over the right-angled 120-cell.

pub mod error;
pub mod classify;
pub mod coloring;
pub mod exactnum;
pub mod par;
pub mod polytopes;
pub mod search;
pub mod symmetries;
pub mod topology;

pub use error::{Error, Result};
pub use par::Execution;
