//! Planted cliques in random graphs: generation under random and adversarial
//! planting, recovery through the Lovász theta function, clique enumeration
//! and degree statistics, a spectral dual certificate for the theta bound, and
//! the independent-set reduction machinery behind the hardness side.

pub mod bundle;
pub mod certificate;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod linalg;
pub mod oracle;
pub mod randgen;
pub mod recovery;
pub mod rng;
pub mod theta;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
