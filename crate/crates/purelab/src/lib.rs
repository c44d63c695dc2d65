//! Decision procedures for finite presheaves: validation of finite
//! categories and multi-sorted unary algebras, pushouts and pullbacks of
//! monomorphisms, connectivity outside a subpresheaf, purity of
//! monomorphisms via retraction search, pure-effective squares, solution
//! amalgamation, and the order-property chain construction.

pub mod connectivity;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod limits;
pub mod oracle;
pub mod presheaf;
pub mod purity;
pub mod suite;
pub mod witness;

pub use error::{Error, Result};
