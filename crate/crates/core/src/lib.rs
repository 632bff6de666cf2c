//! Obstacle-avoiding edge routing and semantic-zoom tile pyramids for
//! laid-out graphs.

pub mod cdt;
mod dot;
pub mod geometry;
pub mod graph;
pub mod router;
pub mod oracle;
pub mod testgen;
pub mod ranking;
pub mod tiler;
