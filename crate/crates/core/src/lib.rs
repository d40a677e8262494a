pub mod builtins;
pub mod coalgebra;
pub mod complex;
pub mod contraction;
pub mod error;
pub mod exec;
pub mod io;
pub mod map;
pub mod perm;
pub mod perturbation;
pub mod random;
pub mod scalar;
pub mod space;
pub mod subspace;
pub mod symmetric;
pub mod vector;
pub mod words;
