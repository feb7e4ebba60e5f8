pub mod certificates;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod funcrep;
pub mod lp_search;
pub mod poisson_torus;
pub mod signtools;
pub mod transforms;
