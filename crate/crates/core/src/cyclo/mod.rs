//! Exact arithmetic: cyclotomic numbers, polynomials and rational functions in
//! `q` over them, and congruence guards on `q`.

mod guard;
mod number;
mod parse;
mod poly;
mod value;

pub use guard::CongruenceGuard;
pub use number::{cyclotomic_polynomial, totient, CycNum, Rat};
pub use parse::parse_genvalue;
pub use poly::Poly;
pub use value::{identity_equal, identity_equal_under, GenValue};
