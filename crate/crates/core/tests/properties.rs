//! Property tests for the linear-algebra substrate and the chain layer.

use hochbar_core::chains::{tensor_complex, ChainComplex};
use hochbar_core::matrix::{self, Matrix};
use hochbar_core::schema::MatrixSchema;
use hochbar_core::{Scalar, ScalarField};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = ScalarField> {
    prop_oneof![
        Just(ScalarField::Q),
        Just(ScalarField::Fp(2)),
        Just(ScalarField::Fp(5)),
        Just(ScalarField::Fp(7)),
    ]
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (field_strategy(), 1usize..6, 1usize..6).prop_flat_map(|(field, rows, cols)| {
        proptest::collection::vec((0..rows, 0..cols, -4i64..=4), 0..12).prop_map(
            move |triplets| {
                Matrix::from_triplets(
                    field,
                    rows,
                    cols,
                    triplets
                        .into_iter()
                        .map(|(r, c, v)| (r, c, field.from_int(v))),
                )
                .unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant_and_nullity_adds_up(m in matrix_strategy()) {
        let d = matrix::rank_kernel_image(&m);
        prop_assert_eq!(d.rank, matrix::rank(&m.transpose()));
        prop_assert_eq!(d.rank + d.kernel.len(), m.cols());
        prop_assert_eq!(d.image.len(), d.rank);
        // Kernel vectors are killed by the matrix.
        for k in &d.kernel {
            prop_assert!(m.apply(k).is_empty());
        }
    }

    #[test]
    fn quotient_projection_kills_generators(m in matrix_strategy()) {
        let gens: Vec<_> = (0..m.cols()).map(|c| m.col(c).clone()).collect();
        let q = matrix::quotient_basis(m.field(), m.rows(), &gens).unwrap();
        for g in &gens {
            prop_assert!(q.projection.apply(g).is_empty());
        }
        let pl = q.projection.mul(&q.lift).unwrap();
        prop_assert_eq!(pl, Matrix::identity(m.field(), q.dim));
    }

    #[test]
    fn solve_linear_solutions_check_out(m in matrix_strategy(), pick in 0usize..6) {
        // Solve against a column in the image: must come back consistent.
        let b = m.col(pick % m.cols()).clone();
        let x = matrix::solve_linear(&m, &b).unwrap();
        let x = x.expect("a column of m is always solvable");
        prop_assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn matrix_schema_roundtrip(m in matrix_strategy()) {
        let schema = MatrixSchema::from_matrix(&m);
        let text = serde_json::to_string(&schema).unwrap();
        let parsed: MatrixSchema = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed.to_matrix(m.field()).unwrap(), m);
    }

    #[test]
    fn tensor_of_valid_complexes_differentiates_to_zero(
        a in matrix_strategy(),
        b in matrix_strategy(),
    ) {
        // Build three-level complexes (coker, mid, ker) from each matrix:
        // d_1 = the matrix, d_2 = its kernel inclusion; tensor them.
        prop_assume!(a.field() == b.field());
        let make = |m: &Matrix| -> ChainComplex {
            let dec = matrix::rank_kernel_image(m);
            let mut d2 = Matrix::zero(m.field(), m.cols(), dec.kernel.len());
            for (i, k) in dec.kernel.iter().enumerate() {
                d2.set_col(i, k.clone());
            }
            let levels = vec![m.rows(), m.cols(), dec.kernel.len()];
            let labels = levels
                .iter()
                .map(|d| (0..*d).map(|i| format!("e{i}")).collect())
                .collect();
            let diffs = vec![Matrix::zero(m.field(), 0, m.rows()), m.clone(), d2];
            let c = ChainComplex::new(m.field(), levels, labels, diffs);
            c.validate().unwrap();
            c
        };
        let t = tensor_complex(&make(&a), &make(&b)).unwrap();
        prop_assert!(t.validate().is_ok());
    }

    #[test]
    fn scalar_field_arithmetic_is_a_field(x in -9i64..=9, y in -9i64..=9) {
        for field in [ScalarField::Q, ScalarField::Fp(7)] {
            let a = field.from_int(x);
            let b = field.from_int(y);
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            if !b.is_zero() {
                let q: Scalar = a.div(&b);
                prop_assert_eq!(q.mul(&b), a);
            }
        }
    }
}
