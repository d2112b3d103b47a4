//! Detection of hexahedra, prisms and pyramids that can be formed by
//! combining tetrahedra of a tetrahedral mesh.

pub mod baseline;
pub mod cell;
pub mod cli;
pub mod detect;
pub mod fixtures;
pub mod format;
pub mod geom;
pub mod mesh;
pub mod quality;
pub mod select;
