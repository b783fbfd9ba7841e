pub mod characters;
pub mod closed_form;
pub mod dynamics;
pub mod quadrature;
pub mod special;
pub mod error;
pub mod experiments;

pub use error::{Error, Result};
