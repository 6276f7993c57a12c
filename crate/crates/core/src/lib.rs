//! Exact intersection theory of the Igusa and second Voronoi toroidal
//! compactifications of the moduli space of principally polarized abelian
//! fourfolds.

pub mod cones;
pub mod exact;
pub mod fan;
pub mod intersection;
pub mod proportionality;
pub mod tables;
pub mod oracles;
pub mod commands;
pub mod report;
pub mod verify;
