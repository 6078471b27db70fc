//! Geometry of the unit ball: points, Möbius automorphisms, the Bergman
//! metric and its geodesics, and `r`-lattices.

mod lattice;
mod metric;
mod mobius;
mod point;
pub mod sampling;

pub use lattice::{build_lattice, check_covering, covering_multiplicity, CoveringReport, Lattice};
pub use metric::{bergman_distance, distance_from_origin, geodesic_point, Geodesic};
pub use mobius::{mobius_apply, MoebiusMap};
pub use point::{Point, BOUNDARY_GUARD, MAX_DIM};
