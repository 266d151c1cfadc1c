//! Exact arithmetic in F_q and F_q[x].

mod factor;
mod field;
mod poly;
mod text;

pub use factor::{Factorization, MonicIter};
pub use field::{FieldElem, FieldSpec, MAX_CHARACTERISTIC, MAX_EXTENSION_ORDER};
pub use poly::Poly;
