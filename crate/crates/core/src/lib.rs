pub mod appendix;
pub mod arcsearch;
pub mod canon;
pub mod codes;
pub mod geometry;
pub mod prop7;
pub mod report;
pub mod table1;
pub mod ring;

pub use num_bigint::BigUint;
