//! Inputs shared by the benchmarks.

use cychom::ayd::GradedBModule;
use cychom::fixtures::fixture;
use cychom::galois::StronglyGradedAlgebra;

/// `(label, module)` pairs: the adjoint module of each benchmarked fixture.
pub fn adjoint_inputs() -> Vec<(&'static str, GradedBModule)> {
    ["c2", "i2", "s3"]
        .into_iter()
        .map(|n| (n, fixture(n).expect("known fixture").adjoint()))
        .collect()
}

pub fn regular_graded(name: &str) -> StronglyGradedAlgebra {
    fixture(name).expect("known fixture").graded()
}
