//! JSON schemas for every object the CLI reads or writes. Scalars travel
//! as text (`num/den` over the rationals, least residues over a prime
//! field), so files are bit-exact across runs.

use serde::{Deserialize, Serialize};

use crate::algebra::{Cocycle2, FinAlgebra, FinGroup};
use crate::chains::{ChainComplex, ChainHomotopy, ChainMap};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::gpd::{FinGroupoid, GpdMor};
use crate::hca::{CentralExtensionData, IntCocycle2, ProjectiveActionData};
use crate::lincat::ProjectivePresentation;
use crate::matrix::{Matrix, SparseVec};
use crate::verlinde::GradedVectCategory;

/// `{"field": "q"|"fp:<p>", "dim": n, "basis": [..], "unit": [..],
/// "mult": [[i, j, k, coeff], ..]}` with coefficients as text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraSchema {
    pub field: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    pub mult: Vec<(usize, usize, usize, String)>,
}

impl AlgebraSchema {
    pub fn to_algebra(&self) -> Result<FinAlgebra> {
        let field = ScalarField::parse(&self.field)?;
        if self.basis.len() != self.dim || self.unit.len() != self.dim {
            return Err(Error::InvalidInput(
                "basis or unit length does not match dim".into(),
            ));
        }
        let unit = self
            .unit
            .iter()
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        let mut mult = vec![vec![SparseVec::new(); self.dim]; self.dim];
        for (i, j, k, c) in &self.mult {
            if *i >= self.dim || *j >= self.dim || *k >= self.dim {
                return Err(Error::InvalidInput(format!(
                    "mult entry ({i},{j},{k}) out of range"
                )));
            }
            let s = field.parse_scalar(c)?;
            if !s.is_zero() {
                mult[*i][*j].push((*k, s));
            }
        }
        for row in &mut mult {
            for cell in row.iter_mut() {
                cell.sort_by_key(|(k, _)| *k);
            }
        }
        FinAlgebra::new(field, self.basis.clone(), unit, mult)
    }

    pub fn from_algebra(a: &FinAlgebra) -> AlgebraSchema {
        let mut mult = Vec::new();
        for i in 0..a.dim {
            for j in 0..a.dim {
                for (k, c) in &a.mult[i][j] {
                    mult.push((i, j, *k, c.to_text()));
                }
            }
        }
        AlgebraSchema {
            field: a.field.to_string(),
            dim: a.dim,
            basis: a.basis.clone(),
            unit: a.unit.iter().map(|c| c.to_text()).collect(),
            mult,
        }
    }
}

/// `{"elements": [labels], "table": [[indices]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupSchema {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupSchema {
    pub fn to_group(&self) -> Result<FinGroup> {
        FinGroup::new(self.elements.clone(), self.table.clone())
    }

    pub fn from_group(g: &FinGroup) -> GroupSchema {
        GroupSchema {
            elements: g.labels.clone(),
            table: g.table.clone(),
        }
    }
}

/// `{"objects": [..], "morphisms": [{"src","tgt","label"}],
/// "compose": [[g, f, gf], ..]}` listing `g . f = gf` for composable pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupoidSchema {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorSchema>,
    pub compose: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorSchema {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

impl GroupoidSchema {
    pub fn to_groupoid(&self) -> Result<FinGroupoid> {
        let nm = self.morphisms.len();
        let mut table = vec![vec![None; nm]; nm];
        for (g, f, gf) in &self.compose {
            if *g >= nm || *f >= nm || *gf >= nm {
                return Err(Error::InvalidInput("compose entry out of range".into()));
            }
            table[*g][*f] = Some(*gf);
        }
        FinGroupoid::new(
            self.objects.clone(),
            self.morphisms
                .iter()
                .map(|m| GpdMor {
                    src: m.src,
                    tgt: m.tgt,
                    label: m.label.clone(),
                })
                .collect(),
            table,
        )
    }

    pub fn from_groupoid(g: &FinGroupoid) -> GroupoidSchema {
        let mut compose = Vec::new();
        for a in 0..g.morphisms.len() {
            for b in 0..g.morphisms.len() {
                if let Some(ab) = g.compose[a][b] {
                    compose.push((a, b, ab));
                }
            }
        }
        GroupoidSchema {
            objects: g.objects.clone(),
            morphisms: g
                .morphisms
                .iter()
                .map(|m| MorSchema {
                    src: m.src,
                    tgt: m.tgt,
                    label: m.label.clone(),
                })
                .collect(),
            compose,
        }
    }
}

/// A finite linear category mirroring the algebra schema with
/// per-object-pair hom blocks: composition entries are
/// `[x, y, z, g, f, k, coeff]` meaning `g . f` (f: x->y applied first)
/// contains `coeff` times basis element `k` of hom(x, z).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CategorySchema {
    pub field: String,
    pub objects: Vec<String>,
    /// `homs[x][y]`: basis labels of hom(x, y).
    pub homs: Vec<Vec<Vec<String>>>,
    pub compose: Vec<(usize, usize, usize, usize, usize, usize, String)>,
    /// `identities`: entries `[x, i, coeff]` of the identity of `x`.
    pub identities: Vec<(usize, usize, String)>,
}

impl CategorySchema {
    pub fn to_category(&self) -> Result<crate::lincat::LinearCategory> {
        let field = ScalarField::parse(&self.field)?;
        let n = self.objects.len();
        if self.homs.len() != n || self.homs.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("hom table has wrong shape".into()));
        }
        let dim = |x: usize, y: usize| self.homs[x][y].len();
        let mut compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        (0..n)
                            .map(|z| vec![vec![SparseVec::new(); dim(x, y)]; dim(y, z)])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for (x, y, z, g, f, k, c) in &self.compose {
            if *x >= n || *y >= n || *z >= n || *g >= dim(*y, *z) || *f >= dim(*x, *y) || *k >= dim(*x, *z) {
                return Err(Error::InvalidInput("compose entry out of range".into()));
            }
            let v = field.parse_scalar(c)?;
            if !v.is_zero() {
                compose[*x][*y][*z][*g][*f].push((*k, v));
            }
        }
        for x in compose.iter_mut() {
            for y in x.iter_mut() {
                for z in y.iter_mut() {
                    for g in z.iter_mut() {
                        for f in g.iter_mut() {
                            f.sort_by_key(|(k, _)| *k);
                        }
                    }
                }
            }
        }
        let mut identities = vec![SparseVec::new(); n];
        for (x, i, c) in &self.identities {
            if *x >= n || *i >= dim(*x, *x) {
                return Err(Error::InvalidInput("identity entry out of range".into()));
            }
            let v = field.parse_scalar(c)?;
            if !v.is_zero() {
                identities[*x].push((*i, v));
            }
        }
        for id in identities.iter_mut() {
            id.sort_by_key(|(i, _)| *i);
        }
        crate::lincat::LinearCategory::new(
            field,
            self.objects.clone(),
            self.homs.clone(),
            compose,
            identities,
        )
    }

    pub fn from_category(c: &crate::lincat::LinearCategory) -> CategorySchema {
        let n = c.n_objects();
        let mut compose = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for g in 0..c.hom_dim(y, z) {
                        for f in 0..c.hom_dim(x, y) {
                            for (k, v) in c.comp(x, y, z, g, f) {
                                compose.push((x, y, z, g, f, *k, v.to_text()));
                            }
                        }
                    }
                }
            }
        }
        let mut identities = Vec::new();
        for x in 0..n {
            for (i, v) in &c.identities[x] {
                identities.push((x, *i, v.to_text()));
            }
        }
        CategorySchema {
            field: c.field.to_string(),
            objects: c.objects.clone(),
            homs: c.hom_labels.clone(),
            compose,
            identities,
        }
    }
}

/// A sparse matrix with text coefficients.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixSchema {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixSchema {
    pub fn to_matrix(&self, field: ScalarField) -> Result<Matrix> {
        Matrix::from_triplets(
            field,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|(r, c, s)| Ok((*r, *c, field.parse_scalar(s)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn from_matrix(m: &Matrix) -> MatrixSchema {
        let mut entries = Vec::new();
        for c in 0..m.cols() {
            for (r, s) in m.col(c) {
                entries.push((*r, c, s.to_text()));
            }
        }
        entries.sort();
        MatrixSchema {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }
}

/// A scalar-valued cocycle table over an inline group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CocycleSchema {
    pub field: String,
    pub group: GroupSchema,
    pub values: Vec<Vec<String>>,
}

impl CocycleSchema {
    pub fn to_cocycle(&self) -> Result<Cocycle2> {
        let field = ScalarField::parse(&self.field)?;
        let group = self.group.to_group()?;
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Cocycle2::new(group, values)
    }
}

/// The desk category descriptor:
/// `{"field", "group", "braiding"?: [[..]], "twist"?: [..], "crossed": bool}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GradedCategorySchema {
    pub field: String,
    pub group: GroupSchema,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braiding: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
    #[serde(default)]
    pub crossed: bool,
}

impl GradedCategorySchema {
    pub fn to_category(&self) -> Result<GradedVectCategory> {
        let field = ScalarField::parse(&self.field)?;
        let group = self.group.to_group()?;
        let braiding = self
            .braiding
            .as_ref()
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()
            })
            .transpose()?;
        let twist = self
            .twist
            .as_ref()
            .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>())
            .transpose()?;
        GradedVectCategory::new(field, group, braiding, twist, self.crossed)
    }
}

/// Idempotent presentations of projective modules over an algebra: entries
/// are `(row, col, basis index, coeff)` of the idempotent matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProjectivesSchema {
    pub projectives: Vec<ProjectiveSchema>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProjectiveSchema {
    pub name: String,
    pub rank: usize,
    pub entries: Vec<(usize, usize, usize, String)>,
}

impl ProjectivesSchema {
    pub fn to_presentations(&self, a: &FinAlgebra) -> Result<Vec<ProjectivePresentation>> {
        self.projectives
            .iter()
            .map(|p| {
                let mut idempotent = vec![vec![SparseVec::new(); p.rank]; p.rank];
                for (r, c, t, s) in &p.entries {
                    if *r >= p.rank || *c >= p.rank || *t >= a.dim {
                        return Err(Error::InvalidInput(format!(
                            "idempotent entry out of range in {}",
                            p.name
                        )));
                    }
                    let v = a.field.parse_scalar(s)?;
                    if !v.is_zero() {
                        idempotent[*r][*c].push((*t, v));
                    }
                }
                for row in &mut idempotent {
                    for cell in row.iter_mut() {
                        cell.sort_by_key(|(t, _)| *t);
                    }
                }
                Ok(ProjectivePresentation {
                    name: p.name.clone(),
                    rank: p.rank,
                    idempotent,
                })
            })
            .collect()
    }
}

/// A rank-one central extension with its projectivity cocycle.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExtensionSchema {
    pub field: String,
    pub quotient: GroupSchema,
    pub alpha: Vec<Vec<i64>>,
    pub xi: Vec<Vec<String>>,
}

impl ExtensionSchema {
    pub fn to_extension(&self) -> Result<CentralExtensionData> {
        let field = ScalarField::parse(&self.field)?;
        let quotient = self.quotient.to_group()?;
        let alpha = IntCocycle2::new(quotient.clone(), self.alpha.clone())?;
        let xi_values = self
            .xi
            .iter()
            .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let xi = Cocycle2::new(quotient.clone(), xi_values)?;
        CentralExtensionData::new(quotient, alpha, xi)
    }
}

/// The lift data of a projective action on a truncated complex: the
/// complex levels and differentials, one chain map per quotient element,
/// the lift of `tau`, and the homotopy `L`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ActionSchema {
    pub levels: Vec<usize>,
    pub diffs: Vec<MatrixSchema>,
    pub rho: Vec<Vec<MatrixSchema>>,
    pub rho_tau: Vec<MatrixSchema>,
    pub ell: Vec<MatrixSchema>,
}

impl ActionSchema {
    pub fn to_action(&self, field: ScalarField) -> Result<ProjectiveActionData> {
        let window = self.levels.len() - 1;
        if self.diffs.len() != window + 1 {
            return Err(Error::InvalidInput(
                "one differential per positive degree is required".into(),
            ));
        }
        let labels = self
            .levels
            .iter()
            .map(|d| (0..*d).map(|i| format!("e{i}")).collect())
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|m| m.to_matrix(field))
            .collect::<Result<Vec<_>>>()?;
        let complex = ChainComplex::new(field, self.levels.clone(), labels, diffs);
        complex.validate()?;
        let to_map = |mats: &[MatrixSchema]| -> Result<ChainMap> {
            Ok(ChainMap {
                components: mats
                    .iter()
                    .map(|m| m.to_matrix(field))
                    .collect::<Result<_>>()?,
            })
        };
        let rho = self
            .rho
            .iter()
            .map(|mats| to_map(mats))
            .collect::<Result<Vec<_>>>()?;
        let rho_tau = to_map(&self.rho_tau)?;
        let ell = ChainHomotopy {
            components: self
                .ell
                .iter()
                .map(|m| m.to_matrix(field))
                .collect::<Result<_>>()?,
        };
        ProjectiveActionData::new(complex, rho, rho_tau, ell)
    }
}

/// Inputs of the twist-homotopy harness: a desk category, a finite object
/// list (tuples of group-element indices), the target object, and the unit.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TwistTaskSchema {
    pub category: GradedCategorySchema,
    pub objects: Vec<Vec<usize>>,
    pub target: usize,
    pub unit_object: usize,
}

/// One homology row of a report: degree, dimension and the window note.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HomologyRow {
    pub degree: usize,
    pub dim: usize,
    pub window: String,
}

pub fn homology_rows(dims: &[usize], valid_to: usize) -> Vec<HomologyRow> {
    dims.iter()
        .enumerate()
        .map(|(degree, dim)| HomologyRow {
            degree,
            dim: *dim,
            window: format!("valid <= {valid_to}"),
        })
        .collect()
}

/// Parses a scalar-entry helper used by hand-written inputs.
pub fn scalar_from_text(field: ScalarField, s: &str) -> Result<Scalar> {
    field.parse_scalar(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group_algebra;

    #[test]
    fn algebra_roundtrip_is_identity() {
        let a = group_algebra(ScalarField::Q, &FinGroup::symmetric3());
        let schema = AlgebraSchema::from_algebra(&a);
        let text = serde_json::to_string_pretty(&schema).unwrap();
        let parsed: AlgebraSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(schema, parsed);
        let b = parsed.to_algebra().unwrap();
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.unit, b.unit);
        for i in 0..a.dim {
            for j in 0..a.dim {
                assert_eq!(a.mult[i][j], b.mult[i][j]);
            }
        }
    }

    #[test]
    fn group_roundtrip_and_validation() {
        let g = FinGroup::cyclic(4);
        let schema = GroupSchema::from_group(&g);
        let text = serde_json::to_string(&schema).unwrap();
        let parsed: GroupSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_group().unwrap(), g);
        // A broken table is rejected with the violated axiom named.
        let mut bad = schema.clone();
        bad.table[1][1] = 1;
        let err = bad.to_group().unwrap_err();
        assert!(err.to_string().contains("associativity") || err.to_string().contains("identity"));
    }

    #[test]
    fn groupoid_roundtrip() {
        let g = crate::gpd::conjugation_groupoid(&FinGroup::cyclic(2));
        let schema = GroupoidSchema::from_groupoid(&g);
        let text = serde_json::to_string(&schema).unwrap();
        let parsed: GroupoidSchema = serde_json::from_str(&text).unwrap();
        let g2 = parsed.to_groupoid().unwrap();
        assert_eq!(g.objects, g2.objects);
        assert_eq!(g.compose, g2.compose);
    }

    #[test]
    fn matrix_roundtrip_rationals() {
        let f = ScalarField::Q;
        let m = Matrix::from_triplets(
            f,
            2,
            3,
            vec![
                (0, 0, f.parse_scalar("3/4").unwrap()),
                (1, 2, f.parse_scalar("-7/2").unwrap()),
            ],
        )
        .unwrap();
        let schema = MatrixSchema::from_matrix(&m);
        let back = schema.to_matrix(f).unwrap();
        assert_eq!(m, back);
        assert!(serde_json::to_string(&schema).unwrap().contains("3/4"));
    }

    #[test]
    fn category_roundtrip() {
        let a = group_algebra(ScalarField::Q, &FinGroup::cyclic(2));
        let c = crate::lincat::one_object_category(&a);
        let schema = CategorySchema::from_category(&c);
        let text = serde_json::to_string(&schema).unwrap();
        let parsed: CategorySchema = serde_json::from_str(&text).unwrap();
        let c2 = parsed.to_category().unwrap();
        assert_eq!(c.hom_labels, c2.hom_labels);
        assert_eq!(c.identities, c2.identities);
    }

    #[test]
    fn input_schemas_roundtrip_through_serde() {
        // The parse-only schemas: serialize -> parse is the identity.
        let ext = ExtensionSchema {
            field: "q".into(),
            quotient: GroupSchema::from_group(&FinGroup::cyclic(4)),
            alpha: (0..4)
                .map(|a| (0..4).map(|b| ((a + b) / 4) as i64).collect())
                .collect(),
            xi: vec![vec!["1".into(); 4]; 4],
        };
        let text = serde_json::to_string(&ext).unwrap();
        let back: ExtensionSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(ext, back);
        back.to_extension().unwrap();

        let m = MatrixSchema {
            rows: 1,
            cols: 1,
            entries: vec![(0, 0, "2".into())],
        };
        let act = ActionSchema {
            levels: vec![1, 1],
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
            ],
            rho: vec![vec![m.clone(), m.clone()]],
            rho_tau: vec![m.clone(), m.clone()],
            ell: vec![MatrixSchema {
                rows: 1,
                cols: 1,
                entries: vec![(0, 0, "1".into())],
            }],
        };
        let text = serde_json::to_string(&act).unwrap();
        let back: ActionSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(act, back);

        let cocycle = CocycleSchema {
            field: "q".into(),
            group: GroupSchema::from_group(&FinGroup::cyclic(2)),
            values: vec![vec!["1".into(); 2]; 2],
        };
        let text = serde_json::to_string(&cocycle).unwrap();
        let back: CocycleSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(cocycle, back);
        back.to_cocycle().unwrap();

        let graded = GradedCategorySchema {
            field: "q".into(),
            group: GroupSchema::from_group(&FinGroup::cyclic(2)),
            braiding: Some(vec![
                vec!["1".into(), "1".into()],
                vec!["1".into(), "-1".into()],
            ]),
            twist: None,
            crossed: true,
        };
        let text = serde_json::to_string(&graded).unwrap();
        let back: GradedCategorySchema = serde_json::from_str(&text).unwrap();
        assert_eq!(graded, back);
        back.to_category().unwrap();

        let projs = ProjectivesSchema {
            projectives: vec![ProjectiveSchema {
                name: "A".into(),
                rank: 1,
                entries: vec![(0, 0, 0, "1".into())],
            }],
        };
        let text = serde_json::to_string(&projs).unwrap();
        let back: ProjectivesSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(projs, back);

        let task = TwistTaskSchema {
            category: graded,
            objects: vec![vec![0], vec![1]],
            target: 0,
            unit_object: 0,
        };
        let text = serde_json::to_string(&task).unwrap();
        let back: TwistTaskSchema = serde_json::from_str(&text).unwrap();
        assert_eq!(task, back);
    }

    #[test]
    fn algebra_with_wrong_unit_rejected() {
        let a = group_algebra(ScalarField::Q, &FinGroup::cyclic(2));
        let mut schema = AlgebraSchema::from_algebra(&a);
        schema.unit = vec!["0".into(), "1".into()];
        let err = schema.to_algebra().unwrap_err();
        assert!(err.to_string().contains("unit law"));
    }

    #[test]
    fn broken_associativity_names_triple() {
        // A 2-dimensional "algebra" with a bad product.
        let schema = AlgebraSchema {
            field: "q".into(),
            dim: 2,
            basis: vec!["1".into(), "x".into()],
            unit: vec!["1".into(), "0".into()],
            mult: vec![
                (0, 0, 0, "1".into()),
                (0, 1, 1, "1".into()),
                (1, 0, 1, "1".into()),
                (1, 1, 0, "1".into()),
                (1, 1, 1, "1".into()),
            ],
        };
        // x^2 = 1 + x is actually associative; corrupt a unit law instead:
        let mut bad = schema.clone();
        bad.mult[1] = (0, 1, 1, "2".into());
        let err = bad.to_algebra().unwrap_err();
        assert!(err.to_string().contains("unit law"));
    }
}
