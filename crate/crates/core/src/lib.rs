//! Hodge and Newton invariants of `bσ` for matrices over `F_q((π))`, with
//! exact arithmetic throughout.

pub mod cochar;
pub mod coeffs;
pub mod error;
pub mod invariants;
pub mod laurent;
pub mod matl;
pub mod resgroups;
pub mod sample;

pub mod cli;
pub mod render;
pub mod wire;

pub use cochar::{Cocharacter, NewtonPolygon, SuperbasicBlock};
pub use coeffs::{FFElem, FieldCtx};
pub use error::{Error, Result};
pub use laurent::LaurentSeries;
pub use matl::{CharPoly, MatL, SmithResult};
