pub mod ball;
pub mod field;
pub mod gen;
pub mod grid;
pub mod lattice;
pub mod pregeometry;
pub mod suites;
pub mod valuation;
