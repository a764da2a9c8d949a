//! Arithmetic in residue rings of monogenic orders `Z[x]/(f)` and the
//! closed-form product of all units of `o/a`.

pub mod error;
pub mod fp_poly;
pub mod intmath;
pub mod lattice;
pub mod order;
pub mod prime;
pub mod residue;
pub mod wilson;

pub use error::{Error, Result};
pub use order::{NumberFieldOrder, OrderElement};
pub use prime::{FactoredIdeal, PrimeIdealData, Valuation};
pub use residue::{Census, ResidueElement, ResidueRing, DEFAULT_CAP, MAX_CAP};
pub use wilson::{D2Class, LocalTorsion, WilsonClass, WilsonProduct};
