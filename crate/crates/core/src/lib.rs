pub mod analysis;
pub mod basis;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod io;
mod layout;
pub mod model;
pub mod ops;
pub mod solver;

pub use basis::{basis_for, enumerate_basis, merged_basis, PolymerBasis};
pub use error::{Result, TbnError};
pub use model::{Configuration, MonomerType, Polymer, SiteType, Tbn};
pub use ops::{config_distance, feed_forward_order, splits_to};
