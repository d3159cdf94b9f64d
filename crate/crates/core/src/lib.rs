//! Connections, curvature and algebraic Ricci solitons on the seven families
//! of three-dimensional Lorentzian Lie groups, computed in exact arithmetic.

pub mod algebra;
pub mod connections;
pub mod model;
pub mod curvature;
pub mod soliton;
pub mod fixtures;
pub mod cli;
