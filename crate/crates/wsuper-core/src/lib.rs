//! Exact computations with basic classical Lie superalgebras, their nilpotent
//! data and finite W-superalgebras over the rationals and over prime fields.

pub mod algebra_data;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod modular;
pub mod mpoly;
pub mod nilpotent_frame;
pub mod pbw_engine;
pub mod scalar;
pub mod superstructure;
pub mod upoly;
pub mod walgebra;

pub use error::{Error, Result};
pub use exec::Exec;
pub use scalar::Scalar;
