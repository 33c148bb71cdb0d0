//! Regenerates the JSON fixtures under `fixtures/` from the core
//! constructors. Run explicitly after changing a schema:
//!
//! ```text
//! cargo test -p hochbar-cli --test fixture_gen -- --ignored
//! ```

use std::fs;
use std::path::PathBuf;

use hochbar_core::algebra::{group_algebra, FinGroup};
use hochbar_core::gpd::conjugation_groupoid;
use hochbar_core::hca::{power_cocycle, IntCocycle2};
use hochbar_core::schema::*;
use hochbar_core::ScalarField;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("fixtures")
}

fn write(name: &str, value: &impl serde::Serialize) {
    let dir = fixtures_dir();
    fs::create_dir_all(&dir).unwrap();
    let text = serde_json::to_string_pretty(value).unwrap();
    fs::write(dir.join(name), text + "\n").unwrap();
}

#[test]
#[ignore = "regenerates committed fixtures"]
fn regenerate() {
    let q = ScalarField::Q;
    let f2 = ScalarField::Fp(2);

    // Groups.
    for (name, g) in [
        ("z2.json", FinGroup::cyclic(2)),
        ("z3.json", FinGroup::cyclic(3)),
        ("z4.json", FinGroup::cyclic(4)),
        ("s3.json", FinGroup::symmetric3()),
    ] {
        write(name, &GroupSchema::from_group(&g));
    }

    // Algebras.
    write(
        "q_s3_algebra.json",
        &AlgebraSchema::from_algebra(&group_algebra(q, &FinGroup::symmetric3())),
    );
    write(
        "f2_z2_algebra.json",
        &AlgebraSchema::from_algebra(&group_algebra(f2, &FinGroup::cyclic(2))),
    );
    write(
        "q_z2_algebra.json",
        &AlgebraSchema::from_algebra(&group_algebra(q, &FinGroup::cyclic(2))),
    );

    // Projectives over F2[Z/2]: the free rank-1 module and its square.
    write(
        "f2_z2_projectives.json",
        &ProjectivesSchema {
            projectives: vec![
                ProjectiveSchema {
                    name: "A".into(),
                    rank: 1,
                    entries: vec![(0, 0, 0, "1".into())],
                },
                ProjectiveSchema {
                    name: "A+A".into(),
                    rank: 2,
                    entries: vec![(0, 0, 0, "1".into()), (1, 1, 0, "1".into())],
                },
            ],
        },
    );

    // The one-object category of Q[Z/2] as a category fixture.
    let c = hochbar_core::lincat::one_object_category(&group_algebra(q, &FinGroup::cyclic(2)));
    write("q_z2_category.json", &CategorySchema::from_category(&c));

    // Groupoids.
    write(
        "z3z3_groupoid.json",
        &GroupoidSchema::from_groupoid(&conjugation_groupoid(&FinGroup::cyclic(3))),
    );

    // Graded desk categories.
    write(
        "z2_semion_category.json",
        &GradedCategorySchema {
            field: "q".into(),
            group: GroupSchema::from_group(&FinGroup::cyclic(2)),
            braiding: Some(vec![
                vec!["1".into(), "1".into()],
                vec!["1".into(), "-1".into()],
            ]),
            twist: None,
            crossed: false,
        },
    );
    write(
        "s3_crossed_category.json",
        &GradedCategorySchema {
            field: "q".into(),
            group: GroupSchema::from_group(&FinGroup::symmetric3()),
            braiding: None,
            twist: None,
            crossed: true,
        },
    );

    // The Z/3-graded ribbon category over F7 and its twist task.
    let beta: Vec<Vec<String>> = (0..3)
        .map(|g: i64| {
            (0..3)
                .map(|h: i64| {
                    ScalarField::Fp(7)
                        .from_int(2)
                        .pow(g * h)
                        .to_text()
                })
                .collect()
        })
        .collect();
    let theta: Vec<String> = (0..3)
        .map(|g: i64| ScalarField::Fp(7).from_int(2).pow(g * g).to_text())
        .collect();
    write(
        "z3_f7_twist_task.json",
        &TwistTaskSchema {
            category: GradedCategorySchema {
                field: "fp:7".into(),
                group: GroupSchema::from_group(&FinGroup::cyclic(3)),
                braiding: Some(beta),
                twist: Some(theta),
                crossed: false,
            },
            objects: vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]],
            target: 3,
            unit_object: 0,
        },
    );

    // The rank-one extension Z --x4--> Z -> Z/4 with the scalar action
    // rho(s j) = 2^j, rho(tau) = 16 (so xi is trivial), L = 15 on the
    // two-term contractible complex k --1--> k.
    let z4 = FinGroup::cyclic(4);
    let alpha_values: Vec<Vec<i64>> = (0..4)
        .map(|a| (0..4).map(|b| ((a + b) / 4) as i64).collect())
        .collect();
    let alpha = IntCocycle2::new(z4.clone(), alpha_values.clone()).unwrap();
    let xi = power_cocycle(&alpha, &q.one()).unwrap();
    write(
        "ext_z4.json",
        &ExtensionSchema {
            field: "q".into(),
            quotient: GroupSchema::from_group(&z4),
            alpha: alpha_values,
            xi: xi
                .values
                .iter()
                .map(|row| row.iter().map(|v| v.to_text()).collect())
                .collect(),
        },
    );
    let scalar_mats = |v: i64| -> Vec<MatrixSchema> {
        // Components on levels [1, 1, 0, 0].
        vec![
            MatrixSchema {
                rows: 1,
                cols: 1,
                entries: vec![(0, 0, v.to_string())],
            },
            MatrixSchema {
                rows: 1,
                cols: 1,
                entries: vec![(0, 0, v.to_string())],
            },
            MatrixSchema {
                rows: 0,
                cols: 0,
                entries: vec![],
            },
            MatrixSchema {
                rows: 0,
                cols: 0,
                entries: vec![],
            },
        ]
    };
    write(
        "act_z4.json",
        &ActionSchema {
            levels: vec![1, 1, 0, 0],
            diffs: vec![
                MatrixSchema {
                    rows: 0,
                    cols: 1,
                    entries: vec![],
                },
                MatrixSchema {
                    rows: 1,
                    cols: 1,
                    entries: vec![(0, 0, "1".into())],
                },
                MatrixSchema {
                    rows: 1,
                    cols: 0,
                    entries: vec![],
                },
                MatrixSchema {
                    rows: 0,
                    cols: 0,
                    entries: vec![],
                },
            ],
            rho: (0..4).map(|j| scalar_mats(2i64.pow(j))).collect(),
            rho_tau: scalar_mats(16),
            ell: vec![
                MatrixSchema {
                    rows: 1,
                    cols: 1,
                    entries: vec![(0, 0, "15".into())],
                },
                MatrixSchema {
                    rows: 0,
                    cols: 1,
                    entries: vec![],
                },
                MatrixSchema {
                    rows: 0,
                    cols: 0,
                    entries: vec![],
                },
            ],
        },
    );
}
