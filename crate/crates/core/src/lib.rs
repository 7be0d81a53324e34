pub mod congruence;
pub mod error;
pub mod ideals;
pub mod iso;
pub mod k0;
pub mod lattice;
pub mod module;
pub mod quantale;
pub mod saturation;
pub mod transforms;

pub use error::{Error, Result};
pub use lattice::{Elem, FiniteSupLattice};
pub use module::QModule;
pub use quantale::Quantale;
