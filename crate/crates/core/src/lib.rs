pub mod builtin;
pub mod census;
pub mod classify;
pub mod diamond;
pub mod enumeration;
pub mod error;
pub mod io;
pub mod lattice;
pub mod lifting;
pub mod oracle;
pub mod poly;
pub mod regularity;
pub mod render;
pub mod scheme;
pub mod sign;
pub mod symmetry;
pub mod triangulation;
pub mod union_find;

pub use error::{Error, Result};
pub use lattice::{harnack_bound, lattice_points, num_points, LatticePoint};
pub use lifting::{from_lifting, Lifting};
pub use sign::SignDistribution;
pub use symmetry::SymmetryElement;
pub use triangulation::{apply_symmetry, validate_triangulation, Triangulation};
