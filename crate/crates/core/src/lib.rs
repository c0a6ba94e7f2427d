pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod standard_form;

pub use error::{Error, Result};
pub mod divergences;
pub mod ext;
pub mod report;
pub mod bounds;
pub mod lightray;
pub mod wedge;
pub mod suites;
