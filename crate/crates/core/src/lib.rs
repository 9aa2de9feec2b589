pub mod cli;
pub mod interp;
pub mod json;
pub mod kernels;
pub mod lifting;
pub mod linalg;
pub mod quotient;
pub mod tpoly;
