//! Finite fields GF(p^k), the quadratic character, and symplectic line
//! systems in GF(q²).

mod field;
mod lines;
pub mod poly;

pub use field::{is_odd_prime_power, is_prime, make_field, prime_factors, prime_power, FieldElement, GaloisField};
pub use lines::{build_line_system, LineVariant, SymplecticLineSystem};
