//! Explicit descent on cyclic covers `y^p = f(x)`.

pub mod arith;
pub mod basefield;
pub mod checks;
pub mod curve;
pub mod descent;
pub mod error;
pub mod etale;
pub mod gamma;
pub mod jacobian2;
pub mod oracle_ff;
pub mod poly;
pub mod suites;
pub mod textio;

pub use basefield::{FieldElem, FieldSpec};
pub use curve::{Curve, DivisorComponent, FunctionRep, GoodDivisor};
pub use error::{Error, Result};
pub use etale::{EtaleAlgebra, EtaleElem, PthPower};
pub use gamma::{
    ClassVerdict, FakeClass, FakeVerdict, GammaClass, GammaElem, Membership, Modulus, Rejection,
};
pub use poly::Poly;
