//! Fixtures shared by the benchmarks in `benches/`.

use vlab_core::monomial::monomials_of_degree;
use vlab_core::{LieAlgebra, LinComb, PbwElement, PrimeField, Ring};

/// Sum of all degree-`d` PBW monomials with coefficient 1, reversed letters
/// included, so that multiplying two of them forces real straightening.
pub fn dense_element(field: &PrimeField, dim: usize, d: u32) -> PbwElement<u64> {
    LinComb::from_terms(field, monomials_of_degree(dim, d).into_iter().map(|m| (m, field.one())))
}

pub fn bench_algebras() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("heisenberg", LieAlgebra::heisenberg()),
        ("sl2", LieAlgebra::sl(2).expect("sl2")),
        ("sl3", LieAlgebra::sl(3).expect("sl3")),
    ]
}
