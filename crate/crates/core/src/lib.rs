pub mod cli;
pub mod equivalence;
pub mod graph;
pub mod group;
pub mod models;
pub mod oracle;
pub mod pauli;
pub mod perm;
pub mod solver;
