//! Exact closed-orbit decisions for matrix group actions.

pub mod cochar;
pub mod field;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod module;
pub mod orbit;
pub mod poly;
pub mod torus;
pub mod zoo;
