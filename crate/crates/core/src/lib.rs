pub mod arith;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod quotient;
pub mod resolution;
pub mod filtration;
pub mod koszul;
pub mod corpus;
pub mod cli;
