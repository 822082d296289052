pub mod cliques;
pub mod constructions;
pub mod graph;
pub mod patterns;
pub mod search;
pub mod suites;
