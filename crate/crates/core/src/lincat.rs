//! Finite linear categories, category bimodules, the Hochschild-Mitchell
//! bar complex, reversal, the agreement map onto a finite category of
//! projectives, and the Yoneda/Fubini verification harnesses.

use crate::algebra::{hochschild_complex, Bimodule, FinAlgebra, HochschildComplex};
use crate::chains::{
    mapping_cone, normalized_chains, verify_chain_map, ChainMap, NormalizedChains, SimplicialVS,
    VerifyReport,
};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::gpd::FinGroupoid;
use crate::matrix::{self, sparse_axpy, Matrix, SparseVec};

/// A finite linear category: labeled hom bases per object pair with
/// structure-constant composition.
#[derive(Clone, Debug)]
pub struct LinearCategory {
    pub field: ScalarField,
    pub objects: Vec<String>,
    /// `hom_labels[x][y]`: basis labels of hom(x, y).
    pub hom_labels: Vec<Vec<Vec<String>>>,
    /// `compose[x][y][z][g][f]` expands `g . f` (f: x->y first, g: y->z) in
    /// the basis of hom(x, z).
    pub compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>>,
    /// `identities[x]`: the identity of `x` in the basis of hom(x, x).
    pub identities: Vec<SparseVec>,
}

impl LinearCategory {
    pub fn new(
        field: ScalarField,
        objects: Vec<String>,
        hom_labels: Vec<Vec<Vec<String>>>,
        compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>>,
        identities: Vec<SparseVec>,
    ) -> Result<LinearCategory> {
        let c = LinearCategory {
            field,
            objects,
            hom_labels,
            compose,
            identities,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom_labels[x][y].len()
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    /// `g . f` on basis indices (f: x -> y applied first, g: y -> z).
    pub fn comp(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> &SparseVec {
        &self.compose[x][y][z][g][f]
    }

    /// `g . f` on sparse morphism vectors.
    pub fn comp_vec(&self, x: usize, y: usize, z: usize, g: &SparseVec, f: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (gi, gc) in g {
            for (fi, fc) in f {
                let c = gc.mul(fc);
                sparse_axpy(&mut acc, &c, self.comp(x, y, z, *gi, *fi));
            }
        }
        acc
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_objects();
        // Identity laws on all hom bases.
        for x in 0..n {
            for y in 0..n {
                for f in 0..self.hom_dim(x, y) {
                    let fv: SparseVec = vec![(f, self.field.one())];
                    let left = self.comp_vec(x, y, y, &self.identities[y], &fv);
                    let right = self.comp_vec(x, x, y, &fv, &self.identities[x]);
                    if left != fv || right != fv {
                        return Err(Error::axiom(
                            "identity law",
                            format!("morphism {} of hom({x},{y})", self.hom_labels[x][y][f]),
                        ));
                    }
                }
            }
        }
        // Associativity on composable basis triples.
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for f in 0..self.hom_dim(x, y) {
                            let fv: SparseVec = vec![(f, self.field.one())];
                            for g in 0..self.hom_dim(y, z) {
                                let gv: SparseVec = vec![(g, self.field.one())];
                                for h in 0..self.hom_dim(z, w) {
                                    let hv: SparseVec = vec![(h, self.field.one())];
                                    let gf = self.comp_vec(x, y, z, &gv, &fv);
                                    let lhs = self.comp_vec(x, z, w, &hv, &gf);
                                    let hg = self.comp_vec(y, z, w, &hv, &gv);
                                    let rhs = self.comp_vec(x, y, w, &hg, &fv);
                                    if lhs != rhs {
                                        return Err(Error::axiom(
                                            "associativity",
                                            format!("triple in hom chains at objects ({x},{y},{z},{w})"),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The one-object category with endomorphisms a given algebra; composition
/// is the multiplication.
pub fn one_object_category(a: &FinAlgebra) -> LinearCategory {
    let compose = vec![vec![vec![(0..a.dim)
        .map(|g| (0..a.dim).map(|f| a.mult[g][f].clone()).collect())
        .collect()]]];
    LinearCategory::new(
        a.field,
        vec!["*".into()],
        vec![vec![a.basis.clone()]],
        compose,
        vec![a.unit_vec()],
    )
    .expect("one-object category of a validated algebra")
}

/// The free linear category on a finite groupoid: hom(x, y) is free on the
/// morphism set, composition is linearized.
pub fn free_linear_category(field: ScalarField, gpd: &FinGroupoid) -> LinearCategory {
    let n = gpd.objects.len();
    // Per-pair morphism lists, remembering global ids.
    let mors: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| (0..n).map(|y| gpd.hom(x, y)).collect())
        .collect();
    let hom_labels: Vec<Vec<Vec<String>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    mors[x][y]
                        .iter()
                        .map(|m| gpd.morphisms[*m].label.clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    let local_index = |x: usize, y: usize, m: usize| -> usize {
        mors[x][y].iter().position(|&k| k == m).unwrap()
    };
    let compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    (0..n)
                        .map(|z| {
                            mors[y][z]
                                .iter()
                                .map(|g| {
                                    mors[x][y]
                                        .iter()
                                        .map(|f| {
                                            let gf = gpd.comp(*g, *f).expect("composable");
                                            vec![(local_index(x, z, gf), field.one())]
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let identities = (0..n)
        .map(|x| vec![(local_index(x, x, gpd.identities[x]), field.one())])
        .collect();
    LinearCategory::new(field, gpd.objects.clone(), hom_labels, compose, identities)
        .expect("free linear category of a groupoid")
}

/// A bimodule over a linear category: a carrier per object pair,
/// contravariant in the first slot and covariant in the second.
#[derive(Clone, Debug)]
pub struct CatBimodule {
    /// `labels[x][y]`: basis labels of F(x, y).
    pub labels: Vec<Vec<Vec<String>>>,
    /// `contra[xp][x][y][f]`: F(x, y) -> F(xp, y) for f in hom(xp, x).
    pub contra: Vec<Vec<Vec<Vec<Matrix>>>>,
    /// `co[x][y][yp][g]`: F(x, y) -> F(x, yp) for g in hom(y, yp).
    pub co: Vec<Vec<Vec<Vec<Matrix>>>>,
}

impl CatBimodule {
    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.labels[x][y].len()
    }

    fn contra_vec(
        &self,
        c: &LinearCategory,
        xp: usize,
        x: usize,
        y: usize,
        f: &SparseVec,
    ) -> Matrix {
        let mut m = Matrix::zero(c.field, self.dim(xp, y), self.dim(x, y));
        for (fi, fc) in f {
            m = m.add(&self.contra[xp][x][y][*fi].scale(fc)).unwrap();
        }
        m
    }

    fn co_vec(&self, c: &LinearCategory, x: usize, y: usize, yp: usize, g: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(c.field, self.dim(x, yp), self.dim(x, y));
        for (gi, gc) in g {
            m = m.add(&self.co[x][y][yp][*gi].scale(gc)).unwrap();
        }
        m
    }

    /// Functoriality in both slots and commutation of the two actions.
    pub fn validate(&self, c: &LinearCategory) -> Result<()> {
        let n = c.n_objects();
        for x in 0..n {
            for y in 0..n {
                let idm = Matrix::identity(c.field, self.dim(x, y));
                if self.contra_vec(c, x, x, y, &c.identities[x]) != idm {
                    return Err(Error::axiom(
                        "bimodule contravariant unit",
                        format!("F(id, -) != id at ({x},{y})"),
                    ));
                }
                if self.co_vec(c, x, y, y, &c.identities[y]) != idm {
                    return Err(Error::axiom(
                        "bimodule covariant unit",
                        format!("F(-, id) != id at ({x},{y})"),
                    ));
                }
            }
        }
        // F(f1 . f2, -) = F(f2, -) F(f1, -) for f2: x2 -> x1, f1: x1 -> x.
        for x2 in 0..n {
            for x1 in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for f1 in 0..c.hom_dim(x1, x) {
                            for f2 in 0..c.hom_dim(x2, x1) {
                                let f1v: SparseVec = vec![(f1, c.field.one())];
                                let f2v: SparseVec = vec![(f2, c.field.one())];
                                let comp = c.comp_vec(x2, x1, x, &f1v, &f2v);
                                let lhs = self.contra_vec(c, x2, x, y, &comp);
                                let rhs = self.contra[x2][x1][y][f2]
                                    .mul(&self.contra[x1][x][y][f1])?;
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule contravariant functoriality",
                                        format!("objects ({x2},{x1},{x}) target {y}"),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        // F(-, g2 . g1) = F(-, g2) F(-, g1).
        for x in 0..n {
            for y in 0..n {
                for y1 in 0..n {
                    for y2 in 0..n {
                        for g1 in 0..c.hom_dim(y, y1) {
                            for g2 in 0..c.hom_dim(y1, y2) {
                                let g1v: SparseVec = vec![(g1, c.field.one())];
                                let g2v: SparseVec = vec![(g2, c.field.one())];
                                let comp = c.comp_vec(y, y1, y2, &g2v, &g1v);
                                let lhs = self.co_vec(c, x, y, y2, &comp);
                                let rhs =
                                    self.co[x][y1][y2][g2].mul(&self.co[x][y][y1][g1])?;
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule covariant functoriality",
                                        format!("objects ({y},{y1},{y2}) source {x}"),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        // Actions commute.
        for xp in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for yp in 0..n {
                        for f in 0..c.hom_dim(xp, x) {
                            for g in 0..c.hom_dim(y, yp) {
                                let lhs =
                                    self.co[xp][y][yp][g].mul(&self.contra[xp][x][y][f])?;
                                let rhs =
                                    self.contra[xp][x][yp][f].mul(&self.co[x][y][yp][g])?;
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule actions commute",
                                        format!("f in hom({xp},{x}), g in hom({y},{yp})"),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The hom bimodule of a category: `F(x, y) = hom(x, y)` with actions by
/// pre- and postcomposition.
pub fn hom_bimodule(c: &LinearCategory) -> CatBimodule {
    let n = c.n_objects();
    let labels = c.hom_labels.clone();
    let contra = (0..n)
        .map(|xp| {
            (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| {
                            (0..c.hom_dim(xp, x))
                                .map(|f| {
                                    let mut m =
                                        Matrix::zero(c.field, c.hom_dim(xp, y), c.hom_dim(x, y));
                                    for v in 0..c.hom_dim(x, y) {
                                        m.set_col(v, c.comp(xp, x, y, v, f).clone());
                                    }
                                    m
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let co = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    (0..n)
                        .map(|yp| {
                            (0..c.hom_dim(y, yp))
                                .map(|g| {
                                    let mut m =
                                        Matrix::zero(c.field, c.hom_dim(x, yp), c.hom_dim(x, y));
                                    for v in 0..c.hom_dim(x, y) {
                                        m.set_col(v, c.comp(x, y, yp, g, v).clone());
                                    }
                                    m
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    CatBimodule { labels, contra, co }
}

/// Level bookkeeping for a Hochschild-Mitchell level: the object tuples
/// with their block offsets inside the level.
#[derive(Clone, Debug)]
pub struct HmLevel {
    pub tuples: Vec<Vec<usize>>,
    pub offsets: Vec<usize>,
    /// Per-tuple slot dimensions: n morphism slots then the bimodule slot.
    pub slot_dims: Vec<Vec<usize>>,
    pub dim: usize,
}

impl HmLevel {
    pub fn block(&self, tuple: &[usize]) -> Option<(usize, usize)> {
        self.tuples
            .iter()
            .position(|t| t == tuple)
            .map(|i| (i, self.offsets[i]))
    }
}

/// The truncated Hochschild-Mitchell complex of a category bimodule: level
/// `n` sums `C(X1,X0) (x) .. (x) C(Xn,Xn-1) (x) F(X0,Xn)` over object
/// tuples, normalized by the identity-insertion degeneracies.
pub struct HmComplex {
    pub simplicial: SimplicialVS,
    pub normalized: NormalizedChains,
    pub levels: Vec<HmLevel>,
}

impl HmComplex {
    pub fn complex(&self) -> &crate::chains::ChainComplex {
        &self.normalized.complex
    }
}

fn tuple_list(n_objects: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for x in 0..n_objects {
                let mut tt = t.clone();
                tt.push(x);
                next.push(tt);
            }
        }
        out = next;
    }
    out
}

/// Per-tuple slot dimensions: n morphism slots then the bimodule slot.
pub(crate) fn slot_dims(c: &LinearCategory, f: &CatBimodule, tuple: &[usize]) -> Vec<usize> {
    let n = tuple.len() - 1;
    let mut dims = Vec::with_capacity(n + 1);
    for j in 0..n {
        // slot j+1 holds C(X_{j+1}, X_j).
        dims.push(c.hom_dim(tuple[j + 1], tuple[j]));
    }
    dims.push(f.dim(tuple[0], tuple[n]));
    dims
}

pub(crate) fn mixed_radix_split(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut parts = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        parts[i] = idx % dims[i];
        idx /= dims[i];
    }
    parts
}

pub(crate) fn mixed_radix_join(dims: &[usize], parts: &[usize]) -> usize {
    let mut idx = 0usize;
    for (d, p) in dims.iter().zip(parts) {
        idx = idx * d + p;
    }
    idx
}

pub fn hm_complex(
    c: &LinearCategory,
    f: &CatBimodule,
    window: usize,
    budget: usize,
) -> Result<HmComplex> {
    if window < 2 {
        return Err(Error::InvalidInput("window must be at least 2".into()));
    }
    f.validate(c)?;
    let field = c.field;
    let mut levels: Vec<HmLevel> = Vec::new();
    for n in 0..=window {
        let mut tuples = Vec::new();
        let mut offsets = Vec::new();
        let mut dims_here = Vec::new();
        let mut dim = 0usize;
        for t in tuple_list(c.n_objects(), n + 1) {
            let sd = slot_dims(c, f, &t);
            let block: usize = sd.iter().product();
            if block == 0 {
                continue;
            }
            tuples.push(t);
            offsets.push(dim);
            dims_here.push(sd);
            dim += block;
        }
        if dim > budget {
            return Err(Error::BudgetExceeded {
                level: n,
                size: dim,
                budget,
            });
        }
        levels.push(HmLevel {
            tuples,
            offsets,
            slot_dims: dims_here,
            dim,
        });
    }
    let labels: Vec<Vec<String>> = levels
        .iter()
        .enumerate()
        .map(|(n, lvl)| {
            let mut lab = Vec::with_capacity(lvl.dim);
            for (ti, t) in lvl.tuples.iter().enumerate() {
                let dims = slot_dims(c, f, t);
                let block: usize = dims.iter().product();
                for k in 0..block {
                    let parts = mixed_radix_split(&dims, k);
                    let mut s = String::new();
                    for j in 0..n {
                        s.push_str(&c.hom_labels[t[j + 1]][t[j]][parts[j]]);
                        s.push('|');
                    }
                    s.push_str(&format!("[{}]", f.labels[t[0]][t[n]][parts[n]]));
                    lab.push(s);
                }
                let _ = ti;
            }
            lab
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=window {
        let lvl = &levels[n];
        let prev = &levels[n - 1];
        let mut fs = Vec::new();
        for j in 0..=n {
            let mut mat = Matrix::zero(field, prev.dim, lvl.dim);
            for (ti, t) in lvl.tuples.iter().enumerate() {
                let dims = slot_dims(c, f, t);
                let block: usize = dims.iter().product();
                let base = lvl.offsets[ti];
                // Target tuple: X_j removed.
                let mut tt = t.clone();
                tt.remove(j);
                let Some((_, toff)) = prev.block(&tt) else {
                    continue;
                };
                let tdims = slot_dims(c, f, &tt);
                for k in 0..block {
                    let parts = mixed_radix_split(&dims, k);
                    let col = base + k;
                    if j == 0 {
                        // Contravariant action of m_1 on the F slot.
                        let act = &f.contra[t[1]][t[0]][t[n]][parts[0]];
                        for (w, cc) in act.col(parts[n]) {
                            let mut np = parts[1..n].to_vec();
                            np.push(*w);
                            mat.add_entry(toff + mixed_radix_join(&tdims, &np), col, cc)?;
                        }
                    } else if j < n {
                        // Compose m_j . m_{j+1} over X_j.
                        let comp =
                            c.comp(t[j + 1], t[j], t[j - 1], parts[j - 1], parts[j]);
                        for (w, cc) in comp {
                            let mut np = Vec::with_capacity(n);
                            np.extend_from_slice(&parts[..j - 1]);
                            np.push(*w);
                            np.extend_from_slice(&parts[j + 1..]);
                            mat.add_entry(toff + mixed_radix_join(&tdims, &np), col, cc)?;
                        }
                    } else {
                        // Covariant action of m_n on the F slot.
                        let act = &f.co[t[0]][t[n]][t[n - 1]][parts[n - 1]];
                        for (w, cc) in act.col(parts[n]) {
                            let mut np = parts[..n - 1].to_vec();
                            np.push(*w);
                            mat.add_entry(toff + mixed_radix_join(&tdims, &np), col, cc)?;
                        }
                    }
                }
            }
            fs.push(mat);
        }
        faces.push(fs);
    }
    let mut degens = Vec::new();
    for n in 0..window {
        let lvl = &levels[n];
        let next = &levels[n + 1];
        let mut ds = Vec::new();
        for j in 0..=n {
            let mut mat = Matrix::zero(field, next.dim, lvl.dim);
            for (ti, t) in lvl.tuples.iter().enumerate() {
                let dims = slot_dims(c, f, t);
                let block: usize = dims.iter().product();
                let base = lvl.offsets[ti];
                let mut tt = t.clone();
                tt.insert(j, t[j]);
                let Some((_, toff)) = next.block(&tt) else {
                    continue;
                };
                let tdims = slot_dims(c, f, &tt);
                for k in 0..block {
                    let parts = mixed_radix_split(&dims, k);
                    let col = base + k;
                    // Insert id_{X_j} into the new slot j (0-based slots).
                    for (w, cc) in &c.identities[t[j]] {
                        let mut np = Vec::with_capacity(n + 2);
                        np.extend_from_slice(&parts[..j]);
                        np.push(*w);
                        np.extend_from_slice(&parts[j..]);
                        mat.add_entry(toff + mixed_radix_join(&tdims, &np), col, cc)?;
                    }
                }
            }
            ds.push(mat);
        }
        degens.push(ds);
    }
    let simplicial = SimplicialVS {
        field,
        levels: levels.iter().map(|l| l.dim).collect(),
        labels,
        faces,
        degens,
        window,
    };
    let normalized = normalized_chains(&simplicial)?;
    Ok(HmComplex {
        simplicial,
        normalized,
        levels,
    })
}

/// The opposite category.
pub fn opposite_category(c: &LinearCategory) -> LinearCategory {
    let n = c.n_objects();
    let hom_labels: Vec<Vec<Vec<String>>> = (0..n)
        .map(|x| (0..n).map(|y| c.hom_labels[y][x].clone()).collect())
        .collect();
    // compose_op[x][y][z][g][f] for f in hom_op(x,y) = hom(y,x),
    // g in hom_op(y,z) = hom(z,y): result f ._C g in hom(z,x) = hom_op(x,z).
    let compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    (0..n)
                        .map(|z| {
                            (0..c.hom_dim(z, y))
                                .map(|g| {
                                    (0..c.hom_dim(y, x))
                                        .map(|f| {
                                            let fv: SparseVec = vec![(f, c.field.one())];
                                            let gv: SparseVec = vec![(g, c.field.one())];
                                            c.comp_vec(z, y, x, &fv, &gv)
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    LinearCategory::new(
        c.field,
        c.objects.clone(),
        hom_labels,
        compose,
        c.identities.clone(),
    )
    .expect("opposite category")
}

/// The opposite bimodule `F^op(x, y) = F(y, x)` over the opposite category.
pub fn opposite_bimodule(c: &LinearCategory, f: &CatBimodule) -> CatBimodule {
    let n = c.n_objects();
    let labels: Vec<Vec<Vec<String>>> = (0..n)
        .map(|x| (0..n).map(|y| f.labels[y][x].clone()).collect())
        .collect();
    // contra_op[xp][x][y][m] for m in hom_op(xp,x) = hom(x,xp):
    // F^op(x,y) = F(y,x) -> F^op(xp,y) = F(y,xp): the covariant action of m.
    let contra = (0..n)
        .map(|xp| {
            (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| f.co[y][x][xp].clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    // co_op[x][y][yp][m] for m in hom_op(y,yp) = hom(yp,y):
    // F(y,x) -> F(yp,x): the contravariant action of m.
    let co = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    (0..n)
                        .map(|yp| f.contra[yp][y][x].clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    CatBimodule { labels, contra, co }
}

/// The reversal isomorphism between the bar complex of `(C, F)` and the bar
/// complex of `(C^op, F^op)`: object families read backwards, with the sign
/// `(-1)^(n(n+1)/2)` making it commute with the differentials.
pub struct ReversalData {
    pub forward: HmComplex,
    pub backward: HmComplex,
    /// Normalized components of the reversal map.
    pub map: ChainMap,
    pub report: VerifyReport,
}

pub fn reversal(
    c: &LinearCategory,
    f: &CatBimodule,
    window: usize,
    budget: usize,
) -> Result<ReversalData> {
    let cop = opposite_category(c);
    let fop = opposite_bimodule(c, f);
    let forward = hm_complex(c, f, window, budget)?;
    let backward = hm_complex(&cop, &fop, window, budget)?;
    let field = c.field;
    let mut raw = Vec::new();
    for n in 0..=window {
        let mut m = Matrix::zero(
            field,
            backward.simplicial.levels[n],
            forward.simplicial.levels[n],
        );
        let sign = if (n * (n + 1) / 2) % 2 == 0 {
            field.one()
        } else {
            field.one().neg()
        };
        for (ti, t) in forward.levels[n].tuples.iter().enumerate() {
            let dims = slot_dims(c, f, t);
            let block: usize = dims.iter().product();
            let base = forward.levels[n].offsets[ti];
            let rt: Vec<usize> = t.iter().rev().cloned().collect();
            let (_, toff) = backward.levels[n]
                .block(&rt)
                .ok_or_else(|| Error::InvalidInput("reversed tuple missing".into()))?;
            let tdims = slot_dims(&cop, &fop, &rt);
            for k in 0..block {
                let parts = mixed_radix_split(&dims, k);
                // Morphism slots reverse; the F slot stays (same basis).
                let mut np: Vec<usize> = parts[..n].iter().rev().cloned().collect();
                np.push(parts[n]);
                m.add_entry(toff + mixed_radix_join(&tdims, &np), base + k, &sign)?;
            }
        }
        raw.push(m);
    }
    // Normalized components.
    let components: Vec<Matrix> = (0..=window)
        .map(|n| {
            backward.normalized.proj[n]
                .mul(&raw[n])
                .and_then(|m| m.mul(&forward.normalized.lift[n]))
        })
        .collect::<Result<_>>()?;
    let map = ChainMap { components };
    let mut report = verify_chain_map(forward.complex(), backward.complex(), &map);
    // Level-wise isomorphism.
    for n in 0..=window {
        if matrix::rank(&map.components[n]) != forward.complex().levels[n]
            || forward.complex().levels[n] != backward.complex().levels[n]
        {
            report.record(n, "reversal level bijection", Matrix::identity(field, 1));
        }
    }
    Ok(ReversalData {
        forward,
        backward,
        map,
        report,
    })
}

/// A projective module presented as an idempotent on a free module: the
/// summand of `A^rank` cut out by `e` with `e^2 = e`.
#[derive(Clone, Debug)]
pub struct ProjectivePresentation {
    pub name: String,
    pub rank: usize,
    /// `rank x rank` matrix over the algebra: `idempotent[a][b]` in `A`.
    pub idempotent: Vec<Vec<SparseVec>>,
}

impl ProjectivePresentation {
    /// The free module of the given rank.
    pub fn free(a: &FinAlgebra, rank: usize) -> ProjectivePresentation {
        let mut idempotent = vec![vec![SparseVec::new(); rank]; rank];
        for i in 0..rank {
            idempotent[i][i] = a.unit_vec();
        }
        ProjectivePresentation {
            name: format!("A^{rank}"),
            rank,
            idempotent,
        }
    }
}

/// Matrix-over-algebra product: `x` is `n x k`, `y` is `k x m`.
fn amul(
    a: &FinAlgebra,
    x: &[Vec<SparseVec>],
    y: &[Vec<SparseVec>],
) -> Vec<Vec<SparseVec>> {
    let n = x.len();
    let k = y.len();
    let m = if k > 0 { y[0].len() } else { 0 };
    let mut out = vec![vec![SparseVec::new(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = SparseVec::new();
            for l in 0..k {
                let prod = a.mul_vec(&x[i][l], &y[l][j]);
                sparse_axpy(&mut acc, &a.field.one(), &prod);
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Flattens an `n x m` matrix over `A` into a coordinate vector with index
/// `(row * m + col) * dim A + t`.
fn aflat(a: &FinAlgebra, x: &[Vec<SparseVec>]) -> SparseVec {
    let m = if x.is_empty() { 0 } else { x[0].len() };
    let mut out = SparseVec::new();
    for (i, row) in x.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (t, c) in entry {
                out.push(((i * m + j) * a.dim + t, c.clone()));
            }
        }
    }
    out.sort_by_key(|(i, _)| *i);
    out
}

fn aunflat(a: &FinAlgebra, n: usize, m: usize, v: &SparseVec) -> Vec<Vec<SparseVec>> {
    let mut out = vec![vec![SparseVec::new(); m]; n];
    for (idx, c) in v {
        let t = idx % a.dim;
        let rc = idx / a.dim;
        out[rc / m][rc % m].push((t, c.clone()));
    }
    out
}

/// The finite linear category of the listed projectives. A morphism
/// `P_e -> P_f` is a matrix `x` over `A` with `x = e x f`; composition is
/// the matrix product of the first map by the second (row-vector modules),
/// so the endomorphisms of the free rank-1 module are `A^op`.
pub struct ProjectiveCategory {
    pub category: LinearCategory,
    pub presentations: Vec<ProjectivePresentation>,
    /// Hom-space bases as flattened matrices over `A`: `basis[x][y]`.
    pub hom_bases: Vec<Vec<Vec<SparseVec>>>,
    /// Index of the free rank-1 module in the object list.
    pub free_index: usize,
}

pub fn projective_category(
    a: &FinAlgebra,
    projectives: &[ProjectivePresentation],
) -> Result<ProjectiveCategory> {
    // Validate idempotents.
    for p in projectives {
        if p.idempotent.len() != p.rank || p.idempotent.iter().any(|r| r.len() != p.rank) {
            return Err(Error::InvalidInput(format!(
                "presentation {} has a non-square idempotent",
                p.name
            )));
        }
        let sq = amul(a, &p.idempotent, &p.idempotent);
        if aflat(a, &sq) != aflat(a, &p.idempotent) {
            return Err(Error::axiom(
                "projectivity (e^2 = e)",
                format!("presentation {}", p.name),
            ));
        }
    }
    let free_index = projectives
        .iter()
        .position(|p| {
            p.rank == 1 && aflat(a, &p.idempotent) == aflat(a, &[vec![a.unit_vec()]])
        })
        .ok_or_else(|| {
            Error::InvalidInput("the projective list must include the free rank-1 module".into())
        })?;
    let nobj = projectives.len();
    // Hom bases: span of e . E_(r,s)(basis) . f inside M_(rank_x x rank_y)(A).
    let mut hom_bases: Vec<Vec<Vec<SparseVec>>> = vec![vec![Vec::new(); nobj]; nobj];
    for x in 0..nobj {
        for y in 0..nobj {
            let (nx, ny) = (projectives[x].rank, projectives[y].rank);
            let mut ech = matrix::Echelon::new(nx * ny * a.dim);
            for r in 0..nx {
                for s in 0..ny {
                    for t in 0..a.dim {
                        let mut gen = vec![vec![SparseVec::new(); ny]; nx];
                        gen[r][s] = vec![(t, a.field.one())];
                        let proj = amul(
                            a,
                            &amul(a, &projectives[x].idempotent, &gen),
                            &projectives[y].idempotent,
                        );
                        ech.insert(aflat(a, &proj));
                    }
                }
            }
            // The reduced basis in pivot order, for determinism.
            hom_bases[x][y] = ech.rows().into_iter().map(|(_, r)| r).collect();
        }
    }
    let hom_labels: Vec<Vec<Vec<String>>> = (0..nobj)
        .map(|x| {
            (0..nobj)
                .map(|y| {
                    (0..hom_bases[x][y].len())
                        .map(|i| format!("{}>{}#{}", projectives[x].name, projectives[y].name, i))
                        .collect()
                })
                .collect()
        })
        .collect();
    // Express a flattened matrix in a hom basis.
    let express = |x: usize, y: usize, flat: &SparseVec| -> Result<SparseVec> {
        let (nx, ny) = (projectives[x].rank, projectives[y].rank);
        let mut mat = Matrix::zero(a.field, nx * ny * a.dim, hom_bases[x][y].len());
        for (i, b) in hom_bases[x][y].iter().enumerate() {
            mat.set_col(i, b.clone());
        }
        matrix::solve_linear(&mat, flat)?
            .ok_or_else(|| Error::InvalidInput("composite not in hom span".into()))
    };
    let mut compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>> = vec![Vec::new(); nobj];
    for x in 0..nobj {
        compose[x] = vec![Vec::new(); nobj];
        for y in 0..nobj {
            compose[x][y] = vec![Vec::new(); nobj];
            for z in 0..nobj {
                let mut table = Vec::new();
                for g in 0..hom_bases[y][z].len() {
                    let gm = aunflat(
                        a,
                        projectives[y].rank,
                        projectives[z].rank,
                        &hom_bases[y][z][g],
                    );
                    let mut row = Vec::new();
                    for fm in hom_bases[x][y].iter().map(|fb| {
                        aunflat(a, projectives[x].rank, projectives[y].rank, fb)
                    }) {
                        // g . f corresponds to the matrix product f * g.
                        let prod = amul(a, &fm, &gm);
                        row.push(express(x, z, &aflat(a, &prod))?);
                    }
                    table.push(row);
                }
                compose[x][y][z] = table;
            }
        }
    }
    let identities: Vec<SparseVec> = (0..nobj)
        .map(|x| express(x, x, &aflat(a, &projectives[x].idempotent)))
        .collect::<Result<_>>()?;
    let category = LinearCategory::new(
        a.field,
        projectives.iter().map(|p| p.name.clone()).collect(),
        hom_labels,
        compose,
        identities,
    )?;
    Ok(ProjectiveCategory {
        category,
        presentations: projectives.to_vec(),
        hom_bases,
        free_index,
    })
}

/// The agreement map from the Hochschild complex of `A` into the
/// Hochschild-Mitchell complex of a finite category of projectives, built
/// as the reversal isomorphism followed by the embedding onto the free
/// rank-1 object, then verified as a quasi-isomorphism through the mapping
/// cone.
pub struct AgreementData {
    pub hochschild: HochschildComplex,
    pub projectives: ProjectiveCategory,
    pub hm: HmComplex,
    pub map: ChainMap,
    pub chain_map_report: VerifyReport,
    /// Cone homology dimensions in degrees `0..=window-1`.
    pub cone_dims: Vec<usize>,
    pub hochschild_dims: Vec<usize>,
    pub hm_dims: Vec<usize>,
}

impl AgreementData {
    pub fn quasi_iso(&self) -> bool {
        self.chain_map_report.verified() && self.cone_dims.iter().all(|&d| d == 0)
    }
}

pub fn agreement_map(
    a: &FinAlgebra,
    projectives: &[ProjectivePresentation],
    degree_bound: usize,
    budget: usize,
) -> Result<AgreementData> {
    if degree_bound < 3 {
        return Err(Error::InvalidInput(
            "agreement needs a degree bound of at least 3".into(),
        ));
    }
    let window = degree_bound - 1;
    let m = Bimodule::regular(a);
    let hochschild = hochschild_complex(a, &m, window, budget)?;
    let projectives = projective_category(a, projectives)?;
    let hm = hm_complex(
        &projectives.category,
        &hom_bimodule(&projectives.category),
        window,
        budget,
    )?;
    // Embed A into the endomorphisms of the free rank-1 module. With the
    // row-vector convention those endomorphisms are A^op, so the object
    // families are read backwards first: (a_1..a_n, m) goes to
    // (-1)^(n(n+1)/2) (emb a_n, .., emb a_1, emb m).
    let emb: Vec<SparseVec> = (0..a.dim)
        .map(|i| {
            let flat = aflat(a, &[vec![vec![(i, a.field.one())]]]);
            let fi = projectives.free_index;
            let mut mat = Matrix::zero(
                a.field,
                a.dim,
                projectives.hom_bases[fi][fi].len(),
            );
            for (k, b) in projectives.hom_bases[fi][fi].iter().enumerate() {
                mat.set_col(k, b.clone());
            }
            matrix::solve_linear(&mat, &flat)?
                .ok_or_else(|| Error::InvalidInput("algebra element not in End(A)".into()))
        })
        .collect::<Result<_>>()?;
    let field = a.field;
    let da = a.dim;
    let fi = projectives.free_index;
    let mut raw = Vec::new();
    for n in 0..=window {
        let src_dim = hochschild.simplicial.levels[n];
        let mut mat = Matrix::zero(field, hm.simplicial.levels[n], src_dim);
        let sign = if (n * (n + 1) / 2) % 2 == 0 {
            field.one()
        } else {
            field.one().neg()
        };
        let tuple = vec![fi; n + 1];
        let (_, toff) = hm.levels[n]
            .block(&tuple)
            .ok_or_else(|| Error::InvalidInput("free-tuple block missing".into()))?;
        let tdims = slot_dims(&projectives.category, &hom_bimodule(&projectives.category), &tuple);
        for col in 0..src_dim {
            // Decode (a_1..a_n, m) with a_1 major and m minor.
            let mut idx = col;
            let mm = idx % da;
            idx /= da;
            let mut parts = vec![0usize; n];
            for i in (0..n).rev() {
                parts[i] = idx % da;
                idx /= da;
            }
            // Reverse the letters, embed slotwise, expand products of the
            // embedding coordinates.
            let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), sign.clone())];
            for slot in 0..=n {
                let coords = if slot < n {
                    &emb[parts[n - 1 - slot]]
                } else {
                    &emb[mm]
                };
                let mut next = Vec::new();
                for (prefix, coeff) in &terms {
                    for (w, cc) in coords {
                        let mut p = prefix.clone();
                        p.push(*w);
                        next.push((p, coeff.mul(cc)));
                    }
                }
                terms = next;
            }
            for (p, coeff) in terms {
                mat.add_entry(toff + mixed_radix_join(&tdims, &p), col, &coeff)?;
            }
        }
        raw.push(mat);
    }
    let components: Vec<Matrix> = (0..=window)
        .map(|n| {
            hm.normalized.proj[n]
                .mul(&raw[n])
                .and_then(|m2| m2.mul(&hochschild.normalized.lift[n]))
        })
        .collect::<Result<_>>()?;
    let map = ChainMap { components };
    let chain_map_report = verify_chain_map(hochschild.complex(), hm.complex(), &map);
    let cone = mapping_cone(hochschild.complex(), hm.complex(), &map)?;
    cone.validate()?;
    let cone_dims = (0..window)
        .map(|nn| cone.homology_dim(nn))
        .collect::<Result<Vec<_>>>()?;
    let hochschild_dims = hochschild.complex().homology_dims()?;
    let hm_dims = hm.complex().homology_dims()?;
    Ok(AgreementData {
        hochschild,
        projectives,
        hm,
        map,
        chain_map_report,
        cone_dims,
        hochschild_dims,
        hm_dims,
    })
}

/// A covariant module over a linear category.
#[derive(Clone, Debug)]
pub struct CatModule {
    /// `labels[y]`: basis labels of H(y).
    pub labels: Vec<Vec<String>>,
    /// `act[y][yp][g]`: H(y) -> H(yp) for g in hom(y, yp).
    pub act: Vec<Vec<Vec<Matrix>>>,
}

impl CatModule {
    pub fn dim(&self, y: usize) -> usize {
        self.labels[y].len()
    }

    /// The regular covariant module `H(y) = hom(Y0, y)` of a chosen object.
    pub fn regular(c: &LinearCategory, y0: usize) -> CatModule {
        let n = c.n_objects();
        let labels = (0..n).map(|y| c.hom_labels[y0][y].clone()).collect();
        let act = (0..n)
            .map(|y| {
                (0..n)
                    .map(|yp| {
                        (0..c.hom_dim(y, yp))
                            .map(|g| {
                                let mut m = Matrix::zero(
                                    c.field,
                                    c.hom_dim(y0, yp),
                                    c.hom_dim(y0, y),
                                );
                                for v in 0..c.hom_dim(y0, y) {
                                    m.set_col(v, c.comp(y0, y, yp, g, v).clone());
                                }
                                m
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CatModule { labels, act }
    }

    pub fn validate(&self, c: &LinearCategory) -> Result<()> {
        let n = c.n_objects();
        for y in 0..n {
            let mut id = Matrix::zero(c.field, self.dim(y), self.dim(y));
            for (gi, gc) in &c.identities[y] {
                id = id.add(&self.act[y][y][*gi].scale(gc))?;
            }
            if id != Matrix::identity(c.field, self.dim(y)) {
                return Err(Error::axiom("module unit", format!("object {y}")));
            }
        }
        for y in 0..n {
            for y1 in 0..n {
                for y2 in 0..n {
                    for g1 in 0..c.hom_dim(y, y1) {
                        for g2 in 0..c.hom_dim(y1, y2) {
                            let g1v: SparseVec = vec![(g1, c.field.one())];
                            let g2v: SparseVec = vec![(g2, c.field.one())];
                            let compv = c.comp_vec(y, y1, y2, &g2v, &g1v);
                            let mut lhs = Matrix::zero(c.field, self.dim(y2), self.dim(y));
                            for (w, cc) in &compv {
                                lhs = lhs.add(&self.act[y][y2][*w].scale(cc))?;
                            }
                            let rhs = self.act[y1][y2][g2].mul(&self.act[y][y1][g1])?;
                            if lhs != rhs {
                                return Err(Error::axiom(
                                    "module functoriality",
                                    format!("objects ({y},{y1},{y2})"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Yoneda harness: the augmented bar complex of `C(-, Y) (x) H` with
/// its extra degeneracy, the extra-degeneracy identities, and the resulting
/// acyclicity within the window.
pub struct YonedaData {
    pub hm: HmComplex,
    pub report: VerifyReport,
    /// Homology of the bar complex in degrees `0..window`.
    pub homology_dims: Vec<usize>,
    /// dim H(Y), which `H_0` must match through the augmentation.
    pub target_dim: usize,
}

impl YonedaData {
    pub fn verified(&self) -> bool {
        self.report.verified()
            && self.homology_dims[0] == self.target_dim
            && self.homology_dims[1..].iter().all(|&d| d == 0)
    }
}

pub fn yoneda_check(
    c: &LinearCategory,
    h: &CatModule,
    y0: usize,
    window: usize,
    budget: usize,
) -> Result<YonedaData> {
    h.validate(c)?;
    let nobj = c.n_objects();
    // Bimodule F(x, xn) = C(x, Y0) (x) H(xn).
    let labels: Vec<Vec<Vec<String>>> = (0..nobj)
        .map(|x| {
            (0..nobj)
                .map(|xn| {
                    let mut lab = Vec::new();
                    for lf in &c.hom_labels[x][y0] {
                        for lh in &h.labels[xn] {
                            lab.push(format!("{lf}*{lh}"));
                        }
                    }
                    lab
                })
                .collect()
        })
        .collect();
    let contra = (0..nobj)
        .map(|xp| {
            (0..nobj)
                .map(|x| {
                    (0..nobj)
                        .map(|xn| {
                            (0..c.hom_dim(xp, x))
                                .map(|f| {
                                    // Precompose the C(x, Y0) factor.
                                    let mut pre = Matrix::zero(
                                        c.field,
                                        c.hom_dim(xp, y0),
                                        c.hom_dim(x, y0),
                                    );
                                    for v in 0..c.hom_dim(x, y0) {
                                        pre.set_col(v, c.comp(xp, x, y0, v, f).clone());
                                    }
                                    pre.kron(&Matrix::identity(c.field, h.dim(xn)))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let co = (0..nobj)
        .map(|x| {
            (0..nobj)
                .map(|xn| {
                    (0..nobj)
                        .map(|xnp| {
                            (0..c.hom_dim(xn, xnp))
                                .map(|g| {
                                    Matrix::identity(c.field, c.hom_dim(x, y0))
                                        .kron(&h.act[xn][xnp][g])
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let f = CatBimodule { labels, contra, co };
    let hm = hm_complex(c, &f, window, budget)?;
    let field = c.field;
    let mut report = VerifyReport::default();
    // The extra degeneracy s_{-1}: level n -> level n+1, summand
    // (X_0..X_n) to (Y0, X_0..X_n): the C(X_0, Y0) factor moves into the
    // first morphism slot, the new F slot is id_{Y0} (x) H part.
    let s_extra: Vec<Matrix> = (0..window)
        .map(|n| {
            let mut m = Matrix::zero(field, hm.simplicial.levels[n + 1], hm.simplicial.levels[n]);
            for (ti, t) in hm.levels[n].tuples.iter().enumerate() {
                let dims = slot_dims(c, &f, t);
                let block: usize = dims.iter().product();
                let base = hm.levels[n].offsets[ti];
                let mut tt = vec![y0];
                tt.extend_from_slice(t);
                let Some((_, toff)) = hm.levels[n + 1].block(&tt) else {
                    continue;
                };
                let tdims = slot_dims(c, &f, &tt);
                let fdim_h = h.dim(t[n]);
                for k in 0..block {
                    let parts = mixed_radix_split(&dims, k);
                    // F-part index = fpart = fidx * dim H + hidx.
                    let fpart = parts[n];
                    let fidx = fpart / fdim_h;
                    let hidx = fpart % fdim_h;
                    // New slots: slot 0 := fidx (now in C(X_0, Y0)); then
                    // old morphisms; new F slot = (id_Y0 coordinates) (x) hidx.
                    for (w, cc) in &c.identities[y0] {
                        let mut np = Vec::with_capacity(n + 2);
                        np.push(fidx);
                        np.extend_from_slice(&parts[..n]);
                        np.push(*w * fdim_h + hidx);
                        m.add_entry(toff + mixed_radix_join(&tdims, &np), base + k, cc)
                            .unwrap();
                    }
                }
            }
            m
        })
        .collect();
    // Augmentation to H(Y0): f (x) v -> H(f)(v).
    let target_dim = h.dim(y0);
    let mut aug = Matrix::zero(field, target_dim, hm.simplicial.levels[0]);
    for (ti, t) in hm.levels[0].tuples.iter().enumerate() {
        let x = t[0];
        let base = hm.levels[0].offsets[ti];
        let fdim_h = h.dim(x);
        for fidx in 0..c.hom_dim(x, y0) {
            for hidx in 0..fdim_h {
                let col = base + fidx * fdim_h + hidx;
                for (w, cc) in h.act[x][y0][fidx].col(hidx) {
                    aug.add_entry(*w, col, cc).unwrap();
                }
            }
        }
    }
    // Identities: d_0 s_{-1} = id on every level.
    for n in 0..window {
        let lhs = hm.simplicial.face(n + 1, 0).mul(&s_extra[n]).unwrap();
        let id = Matrix::identity(field, hm.simplicial.levels[n]);
        report.record(n, "d_0 s_{-1} = id", lhs.sub(&id).unwrap());
    }
    // d_{j+1} s_{-1} = s_{-1} d_j.
    for n in 1..window {
        for j in 0..=n {
            let lhs = hm.simplicial.face(n + 1, j + 1).mul(&s_extra[n]).unwrap();
            let rhs = s_extra[n - 1].mul(hm.simplicial.face(n, j)).unwrap();
            report.record(
                n,
                format!("d_{} s_{{-1}} = s_{{-1}} d_{j}", j + 1),
                lhs.sub(&rhs).unwrap(),
            );
        }
    }
    // s_{j+1} s_{-1} = s_{-1} s_j.
    for n in 0..window.saturating_sub(1) {
        for j in 0..=n {
            let lhs = hm.simplicial.degen(n + 1, j + 1).mul(&s_extra[n]).unwrap();
            let rhs = s_extra[n + 1].mul(hm.simplicial.degen(n, j)).unwrap();
            report.record(
                n,
                format!("s_{} s_{{-1}} = s_{{-1}} s_{j}", j + 1),
                lhs.sub(&rhs).unwrap(),
            );
        }
    }
    // The augmentation coequalizes the two level-1 faces.
    let lhs = aug.mul(hm.simplicial.face(1, 0)).unwrap();
    let rhs = aug.mul(hm.simplicial.face(1, 1)).unwrap();
    report.record(1, "aug d_0 = aug d_1", lhs.sub(&rhs).unwrap());
    let homology_dims = hm.complex().homology_dims()?;
    Ok(YonedaData {
        hm,
        report,
        homology_dims,
        target_dim,
    })
}

/// An unnormalized chains view of a simplicial object (alternating face
/// sums, no degeneracy quotient).
pub fn unnormalized_complex(s: &SimplicialVS) -> crate::chains::ChainComplex {
    let diffs = (0..=s.window)
        .map(|n| s.unnormalized_differential(n))
        .collect();
    crate::chains::ChainComplex::new(s.field, s.levels.clone(), s.labels.clone(), diffs)
}

/// The Fubini harness for an outer-tensor bimodule: the two iterated bar
/// constructions totalize to the two tensor orders of the unnormalized
/// complexes, and the summand reindexing with the Koszul sign
/// `(-1)^(mn)` is a levelwise isomorphism commuting with differentials.
pub struct FubiniData {
    pub tot_cd: crate::chains::ChainComplex,
    pub tot_dc: crate::chains::ChainComplex,
    pub swap: ChainMap,
    pub swap_back: ChainMap,
    pub report: VerifyReport,
}

impl FubiniData {
    pub fn verified(&self) -> bool {
        self.report.verified()
    }
}

pub fn fubini_iso(
    c: &LinearCategory,
    d: &LinearCategory,
    fc: &CatBimodule,
    fd: &CatBimodule,
    window: usize,
    budget: usize,
) -> Result<FubiniData> {
    if c.field != d.field {
        return Err(Error::FieldMismatch {
            expected: c.field,
            found: d.field,
        });
    }
    let hmc = hm_complex(c, fc, window, budget)?;
    let hmd = hm_complex(d, fd, window, budget)?;
    let uc = unnormalized_complex(&hmc.simplicial);
    let ud = unnormalized_complex(&hmd.simplicial);
    let tot_cd = crate::chains::tensor_complex(&uc, &ud)?;
    let tot_dc = crate::chains::tensor_complex(&ud, &uc)?;
    for n in 0..=window {
        if tot_cd.levels[n] > budget {
            return Err(Error::BudgetExceeded {
                level: n,
                size: tot_cd.levels[n],
                budget,
            });
        }
    }
    let field = c.field;
    let block_offsets = |a: &crate::chains::ChainComplex,
                         b: &crate::chains::ChainComplex,
                         n: usize|
     -> Vec<usize> {
        let mut off = Vec::with_capacity(n + 2);
        let mut acc = 0;
        for p in 0..=n {
            off.push(acc);
            acc += a.level_dim(p) * b.level_dim(n - p);
        }
        off.push(acc);
        off
    };
    let build_swap = |from_a: &crate::chains::ChainComplex,
                      from_b: &crate::chains::ChainComplex,
                      tot_from: &crate::chains::ChainComplex,
                      tot_to: &crate::chains::ChainComplex|
     -> Result<ChainMap> {
        let mut components = Vec::new();
        for n in 0..=window {
            let mut m = Matrix::zero(field, tot_to.levels[n], tot_from.levels[n]);
            let off_from = block_offsets(from_a, from_b, n);
            let off_to = block_offsets(from_b, from_a, n);
            for p in 0..=n {
                let q = n - p;
                let (da, db) = (from_a.level_dim(p), from_b.level_dim(q));
                if da * db == 0 {
                    continue;
                }
                let sign = if (p * q) % 2 == 0 {
                    field.one()
                } else {
                    field.one().neg()
                };
                for i in 0..da {
                    for j in 0..db {
                        // Block (p,q), index i (x) j goes to block (q,p),
                        // index j (x) i.
                        m.add_entry(off_to[q] + j * da + i, off_from[p] + i * db + j, &sign)?;
                    }
                }
            }
            components.push(m);
        }
        Ok(ChainMap { components })
    };
    let swap = build_swap(&uc, &ud, &tot_cd, &tot_dc)?;
    let swap_back = build_swap(&ud, &uc, &tot_dc, &tot_cd)?;
    let mut report = verify_chain_map(&tot_cd, &tot_dc, &swap);
    report.merge(verify_chain_map(&tot_dc, &tot_cd, &swap_back));
    // Swap twice is the identity.
    for n in 0..=window {
        let round = swap_back.components[n].mul(&swap.components[n])?;
        let id = Matrix::identity(field, tot_cd.levels[n]);
        report.record(n, "swap . swap = id", round.sub(&id)?);
    }
    Ok(FubiniData {
        tot_cd,
        tot_dc,
        swap,
        swap_back,
        report,
    })
}
