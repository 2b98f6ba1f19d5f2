//! Folding polyominoes onto the unit cube.

pub mod cube;
pub mod grid;
pub mod layers;
pub mod topology;
pub mod solve;
pub mod enumerate;
pub mod classify;
pub mod render;
