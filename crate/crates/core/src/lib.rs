//! Exact dynamics of finitely generated pseudogroups of partial maps on
//! finite metric spaces and on the full two-sided binary shift.

pub mod cli;
pub mod clique;
pub mod dynamics;
pub mod equicont;
pub mod error;
pub mod measure;
pub mod morphism;
pub mod probes;
pub mod pseudogroup;
pub mod random;
pub mod rational;
pub mod shift;
pub mod space;

pub use error::{Error, Result};
