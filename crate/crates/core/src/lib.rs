pub mod algebra_cat;
pub mod ayd;
pub mod complexes;
pub mod fixtures;
pub mod galois;
pub mod groupoid_alg;
pub mod groupoid_homology;
pub mod qlinalg;
pub mod report;
pub mod transposition;
