//! Rough approximations over up-directed relational systems and their groupoids.

pub mod acp;
pub mod audit;
pub mod cluster;
pub mod cud;
pub mod error;
pub mod fixture;
pub mod gen;
pub mod granule;
pub mod grpd;
pub mod piappr;
pub mod regions;
pub mod relsys;
pub mod set;
pub mod verdict;

pub use error::{Error, Result};
pub use granule::GranuleFamily;
pub use grpd::Groupoid;
pub use relsys::RelationalSystem;
pub use set::{ElementId, ElementSet};

pub type Dataset64 = cluster::Dataset<f64>;
pub type Dataset32 = cluster::Dataset<f32>;
