pub mod geometry;
pub mod criteria;
pub mod qcp;
pub mod special;
pub mod mesh;
pub mod io;
pub mod cli;
pub mod fixtures;
