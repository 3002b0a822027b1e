//! Exact algorithms for K-stability of quasimaps from ℙ¹.

pub mod binform;
pub mod cmdeg;
pub mod divisor;
pub mod dvrred;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod poly;
pub mod qmap;

pub use binform::{BinaryForm, MobiusMatrix, MultiPoly, RationalPoint};
pub use divisor::{Cluster, QDivisor};
pub use error::{Error, Result};
pub use field::{Field, Rat, RatFunc};
pub use poly::Poly;
pub use qmap::{make_quasimap, ConeTarget, Quasimap, Stability, StabilityClass};
