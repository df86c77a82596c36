//! Polynomials in the equivariant parameters `a_1..a_r` over big integers, and
//! fractions whose denominators are products of linear forms.

mod linfrac;
mod poly;

pub use linfrac::{LinForm, LinFrac};
pub use poly::Poly;
