pub mod cobip;
pub mod game;
pub mod gen;
pub mod graph;
pub mod reduction;
