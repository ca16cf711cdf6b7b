pub mod arith;
pub mod chars;
pub mod cli;
pub mod constants;
pub mod gon;
pub mod linalg;
pub mod picard;
pub mod quad;
pub mod report;
pub mod repro;
pub mod surfaces;
pub mod torsor;
