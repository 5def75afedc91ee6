//! Arithmetic of cubic threefolds over finite fields.

pub mod cache;
pub mod counting;
pub mod cubic;
pub mod factor;
pub mod field;
pub mod intpoly;
pub mod jacobian;
pub mod json;
pub mod modp;
pub mod prym;
pub mod simplicity;
pub mod sturm;
pub mod weil;
