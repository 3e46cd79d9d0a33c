//! Exact coefficient arithmetic: big integers, Laurent monomials and
//! polynomials, factored field elements, and the instance symbol table.

mod int;
mod intern;
mod mono;
mod poly;
mod scalar;
mod vars;

pub use int::{Int, Rat};
pub use intern::{interned_count, FactorId};
pub use mono::Mono;
pub use poly::Poly;
pub use scalar::{ArithError, Scalar, TRules};
pub use vars::{Spectral, VariableTable, D, Q};
