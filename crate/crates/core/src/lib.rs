pub mod lattice;
pub mod algebra;
pub mod syntax;
pub mod kernel;
pub mod model;
pub mod search;
pub mod gen;
