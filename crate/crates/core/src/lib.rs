pub mod chi_bridge;
pub mod clifford;
pub mod domain;
pub mod exactnum;
pub mod geometry;
pub mod io;
pub mod quat;
pub mod vahlen;
