//! Exact rational and polynomial arithmetic.

mod basis;
mod poly;
mod rat;

pub use basis::{to_power_basis, Parity, PowerBasisPoly};
pub use poly::{Degree, Poly};
pub use rat::{format_rat, is_integer, parse_int, parse_rat, rat, rat_serde, Rat};
