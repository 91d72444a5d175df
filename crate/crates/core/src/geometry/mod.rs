pub mod halfspace;
pub mod lp;
pub mod region;
