//! Shared input builders for the criterion benches.

use hochbar_core::algebra::{drinfeld_double, group_algebra, FinAlgebra, FinGroup};
use hochbar_core::matrix::Matrix;
use hochbar_core::verlinde::GradedVectCategory;
use hochbar_core::ScalarField;

pub fn q_s3() -> FinAlgebra {
    group_algebra(ScalarField::Q, &FinGroup::symmetric3())
}

pub fn double_s3() -> FinAlgebra {
    drinfeld_double(ScalarField::Q, &FinGroup::symmetric3())
}

pub fn semion() -> GradedVectCategory {
    let q = ScalarField::Q;
    let z2 = FinGroup::cyclic(2);
    let mut beta = vec![vec![q.one(); 2]; 2];
    beta[1][1] = q.one().neg();
    GradedVectCategory::new(q, z2, Some(beta), None, false).unwrap()
}

/// A pseudo-random sparse matrix over the chosen field, deterministic in
/// the seed.
pub fn random_sparse(field: ScalarField, rows: usize, cols: usize, per_col: usize, seed: u64) -> Matrix {
    // A small xorshift keeps the bench free of extra dependencies here.
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut m = Matrix::zero(field, rows, cols);
    for c in 0..cols {
        for _ in 0..per_col {
            let r = (next() as usize) % rows;
            let v = ((next() % 9) as i64) - 4;
            let _ = m.add_entry(r, c, &field.from_int(v));
        }
    }
    m
}
