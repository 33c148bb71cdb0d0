//! Desk-scale graded tensor categories and the multiplicative structure on
//! their Hochschild complexes: the loop operator, the nerve-level braid
//! action, the shuffle product, degree-zero product tables, and equivariant
//! twisted sectors with their crossed product.
//!
//! Objects are formal direct sums of one simple per group element, so every
//! hom space has a canonical matching-pair basis and all chain-level
//! operations stay symbolic: a loop is a data structure, faces rewrite it,
//! and products tensor it. Homology happens on materialized levels over a
//! finite object list.

use std::collections::BTreeMap;

use crate::algebra::FinGroup;
use crate::chains::{normalized_chains, NormalizedChains, Shuffle, SimplicialVS};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::lincat::LinearCategory;
use crate::matrix::{self, Matrix, SparseVec};

/// A formal direct sum of simples, one per listed group element.
pub type ObjTuple = Vec<usize>;

/// A strict graded desk category: one simple per group element, optional
/// braiding bicharacter, optional twist scalars, optional crossed structure
/// by conjugation.
#[derive(Clone, Debug)]
pub struct GradedVectCategory {
    pub field: ScalarField,
    pub group: FinGroup,
    /// Braiding scalars `beta(g, h)`; requires an abelian group.
    pub braiding: Option<Vec<Vec<Scalar>>>,
    /// Twist scalars `theta(g)`.
    pub twist: Option<Vec<Scalar>>,
    /// Whether the conjugation G-action is part of the structure.
    pub crossed: bool,
}

impl GradedVectCategory {
    pub fn new(
        field: ScalarField,
        group: FinGroup,
        braiding: Option<Vec<Vec<Scalar>>>,
        twist: Option<Vec<Scalar>>,
        crossed: bool,
    ) -> Result<GradedVectCategory> {
        let c = GradedVectCategory {
            field,
            group,
            braiding,
            twist,
            crossed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        if let Some(beta) = &self.braiding {
            for a in 0..n {
                for b in 0..n {
                    if self.group.mul(a, b) != self.group.mul(b, a) {
                        return Err(Error::axiom(
                            "braiding requires an abelian grading group",
                            format!(
                                "witness pair ({}, {})",
                                self.group.labels[a], self.group.labels[b]
                            ),
                        ));
                    }
                }
            }
            if beta.len() != n || beta.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidInput("braiding table has wrong shape".into()));
            }
            for g in 0..n {
                for h in 0..n {
                    if beta[g][h].is_zero() {
                        return Err(Error::axiom(
                            "braiding values in k^x",
                            format!(
                                "beta({}, {}) = 0",
                                self.group.labels[g], self.group.labels[h]
                            ),
                        ));
                    }
                    for gp in 0..n {
                        // beta(g gp, h) = beta(g, h) beta(gp, h)
                        let lhs = &beta[self.group.mul(g, gp)][h];
                        let rhs = beta[g][h].mul(&beta[gp][h]);
                        if *lhs != rhs {
                            return Err(Error::axiom(
                                "bicharacter in the first slot",
                                format!(
                                    "witness ({}, {}, {})",
                                    self.group.labels[g],
                                    self.group.labels[gp],
                                    self.group.labels[h]
                                ),
                            ));
                        }
                        let lhs = &beta[h][self.group.mul(g, gp)];
                        let rhs = beta[h][g].mul(&beta[h][gp]);
                        if *lhs != rhs {
                            return Err(Error::axiom(
                                "bicharacter in the second slot",
                                format!(
                                    "witness ({}, {}, {})",
                                    self.group.labels[h],
                                    self.group.labels[g],
                                    self.group.labels[gp]
                                ),
                            ));
                        }
                    }
                }
            }
        }
        if let Some(theta) = &self.twist {
            if theta.len() != n {
                return Err(Error::InvalidInput("twist table has wrong length".into()));
            }
            if theta.iter().any(|t| t.is_zero()) {
                return Err(Error::axiom("twist values in k^x", "some theta(g) = 0"));
            }
            if !theta[self.group.identity].is_one() {
                return Err(Error::axiom("twist on the unit", "theta(e) != 1"));
            }
            if let Some(beta) = &self.braiding {
                for g in 0..n {
                    for h in 0..n {
                        // theta(gh) = beta(g,h) beta(h,g) theta(g) theta(h)
                        let lhs = &theta[self.group.mul(g, h)];
                        let rhs = beta[g][h]
                            .mul(&beta[h][g])
                            .mul(&theta[g])
                            .mul(&theta[h]);
                        if *lhs != rhs {
                            return Err(Error::axiom(
                                "twist compatibility",
                                format!(
                                    "witness pair ({}, {})",
                                    self.group.labels[g], self.group.labels[h]
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn beta(&self, g: usize, h: usize) -> &Scalar {
        &self
            .braiding
            .as_ref()
            .expect("braiding data is present")[g][h]
    }

    /// The monoidal product of object tuples (first factor major).
    pub fn tensor_obj(&self, x: &ObjTuple, y: &ObjTuple) -> ObjTuple {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for a in x {
            for b in y {
                out.push(self.group.mul(*a, *b));
            }
        }
        out
    }

    /// The conjugation action on objects: `h . delta_g = delta_{h g h^-1}`.
    pub fn act_obj(&self, h: usize, x: &ObjTuple) -> ObjTuple {
        x.iter().map(|g| self.group.conjugate(h, *g)).collect()
    }

    /// Matching-pair basis of hom(x, y): pairs `(i, j)` with `y_i = x_j`.
    pub fn hom_basis(&self, x: &ObjTuple, y: &ObjTuple) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, yi) in y.iter().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                if yi == xj {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The underlying linear category on a finite object list.
    pub fn linear_category(&self, objects: &[ObjTuple]) -> Result<LinearCategory> {
        let n = objects.len();
        let hom: Vec<Vec<Vec<(usize, usize)>>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.hom_basis(&objects[x], &objects[y]))
                    .collect()
            })
            .collect();
        let hom_labels: Vec<Vec<Vec<String>>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        hom[x][y]
                            .iter()
                            .map(|(i, j)| format!("E{i}{j}"))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let compose: Vec<Vec<Vec<Vec<Vec<SparseVec>>>>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        (0..n)
                            .map(|z| {
                                hom[y][z]
                                    .iter()
                                    .map(|g| {
                                        hom[x][y]
                                            .iter()
                                            .map(|f| {
                                                // E_{g} . E_{f}
                                                if g.1 == f.0 {
                                                    let target = (g.0, f.1);
                                                    let k = hom[x][z]
                                                        .iter()
                                                        .position(|m| *m == target)
                                                        .expect("matching pair exists");
                                                    vec![(k, self.field.one())]
                                                } else {
                                                    Vec::new()
                                                }
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
        let identities: Vec<SparseVec> = (0..n)
            .map(|x| {
                hom[x][x]
                    .iter()
                    .enumerate()
                    .filter(|(_, (i, j))| i == j)
                    .map(|(k, _)| (k, self.field.one()))
                    .collect()
            })
            .collect();
        LinearCategory::new(
            self.field,
            objects
                .iter()
                .map(|t| {
                    format!(
                        "({})",
                        t.iter()
                            .map(|g| self.group.labels[*g].clone())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect(),
            hom_labels,
            compose,
            identities,
        )
    }

    /// The twist automorphism of a tuple object as a hom-basis vector.
    pub fn twist_of(&self, x: &ObjTuple) -> Result<SparseVec> {
        let theta = self
            .twist
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no twist data".into()))?;
        let basis = self.hom_basis(x, x);
        let mut out = SparseVec::new();
        for (k, (i, j)) in basis.iter().enumerate() {
            if i == j {
                out.push((k, theta[x[*i]].clone()));
            }
        }
        Ok(out)
    }
}

/// A basis loop of morphisms through `degree + 1` objects: elementary
/// arrows `arrows[k]: X_{k+1} -> X_k` and a closing `X_0 -> X_n` (through
/// `z.X_0` in the twisted case; central twists act strictly, so the data
/// is the matching pair itself).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Loop {
    pub objects: Vec<ObjTuple>,
    pub arrows: Vec<(usize, usize)>,
    pub closing: (usize, usize),
}

impl Loop {
    pub fn degree(&self) -> usize {
        self.objects.len() - 1
    }

    /// The identity loop of degree 0 at a simple.
    pub fn identity_at(g: usize) -> Loop {
        Loop {
            objects: vec![vec![g]],
            arrows: Vec::new(),
            closing: (0, 0),
        }
    }
}

/// A formal sum of loops of one degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoopChain {
    pub terms: BTreeMap<Loop, Scalar>,
}

impl LoopChain {
    pub fn zero() -> LoopChain {
        LoopChain {
            terms: BTreeMap::new(),
        }
    }

    pub fn single(l: Loop, c: Scalar) -> LoopChain {
        let mut ch = LoopChain::zero();
        ch.add(l, c);
        ch
    }

    pub fn add(&mut self, l: Loop, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&l) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&l);
                }
            }
            None => {
                self.terms.insert(l, c);
            }
        }
    }

    pub fn add_chain(&mut self, other: &LoopChain, scale: &Scalar) {
        for (l, c) in &other.terms {
            self.add(l.clone(), c.mul(scale));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn comp_elem(g: (usize, usize), f: (usize, usize)) -> Option<(usize, usize)> {
    // g . f with f applied first: matching inner indices.
    if g.1 == f.0 {
        Some((g.0, f.1))
    } else {
        None
    }
}

/// The `j`-th face of a basis loop; `None` when the elementary composition
/// vanishes.
pub fn loop_face(l: &Loop, j: usize) -> Option<Loop> {
    let n = l.degree();
    assert!(n >= 1 && j <= n);
    if j == 0 {
        let closing = comp_elem(l.closing, l.arrows[0])?;
        Some(Loop {
            objects: l.objects[1..].to_vec(),
            arrows: l.arrows[1..].to_vec(),
            closing,
        })
    } else if j == n {
        let closing = comp_elem(l.arrows[n - 1], l.closing)?;
        Some(Loop {
            objects: l.objects[..n].to_vec(),
            arrows: l.arrows[..n - 1].to_vec(),
            closing,
        })
    } else {
        let merged = comp_elem(l.arrows[j - 1], l.arrows[j])?;
        let mut objects = l.objects.clone();
        objects.remove(j);
        let mut arrows = Vec::with_capacity(n - 1);
        arrows.extend_from_slice(&l.arrows[..j - 1]);
        arrows.push(merged);
        arrows.extend_from_slice(&l.arrows[j + 1..]);
        Some(Loop {
            objects,
            arrows,
            closing: l.closing,
        })
    }
}

/// The `j`-th degeneracy: duplicates `X_j` and inserts its identity, which
/// expands into one loop per component of `X_j`.
pub fn loop_degeneracy(l: &Loop, j: usize) -> Vec<Loop> {
    let mut out = Vec::new();
    for comp in 0..l.objects[j].len() {
        let mut objects = l.objects.clone();
        objects.insert(j, l.objects[j].clone());
        let mut arrows = Vec::with_capacity(l.arrows.len() + 1);
        arrows.extend_from_slice(&l.arrows[..j]);
        arrows.push((comp, comp));
        arrows.extend_from_slice(&l.arrows[j..]);
        out.push(Loop {
            objects,
            arrows,
            closing: l.closing,
        });
    }
    out
}

/// The simplicial differential (alternating face sum) on a loop chain.
pub fn loop_differential(field: ScalarField, chain: &LoopChain) -> LoopChain {
    let mut out = LoopChain::zero();
    for (l, c) in &chain.terms {
        let n = l.degree();
        if n == 0 {
            continue;
        }
        let mut sign = field.one();
        for j in 0..=n {
            if let Some(f) = loop_face(l, j) {
                out.add(f, c.mul(&sign));
            }
            sign = sign.neg();
        }
    }
    out
}

/// The monoidal product of two basis loops of the same degree.
pub fn loop_tensor(cat: &GradedVectCategory, a: &Loop, b: &Loop) -> Loop {
    let n = a.degree();
    assert_eq!(n, b.degree());
    let objects: Vec<ObjTuple> = (0..=n)
        .map(|k| cat.tensor_obj(&a.objects[k], &b.objects[k]))
        .collect();
    let pair = |ma: (usize, usize),
                mb: (usize, usize),
                tgt_b_len: usize,
                src_b_len: usize| {
        (ma.0 * tgt_b_len + mb.0, ma.1 * src_b_len + mb.1)
    };
    let arrows = (0..n)
        .map(|k| {
            pair(
                a.arrows[k],
                b.arrows[k],
                b.objects[k].len(),
                b.objects[k + 1].len(),
            )
        })
        .collect();
    let closing = pair(
        a.closing,
        b.closing,
        b.objects[n].len(),
        b.objects[0].len(),
    );
    Loop {
        objects,
        arrows,
        closing,
    }
}

/// An iterated degeneracy `s_{k_m - 1} .. s_{k_1 - 1}` on a chain.
fn apply_degeneracies(field: ScalarField, chain: &LoopChain, ks: &[usize]) -> LoopChain {
    let mut cur = chain.clone();
    for k in ks {
        let mut next = LoopChain::zero();
        for (l, c) in &cur.terms {
            for s in loop_degeneracy(l, *k - 1) {
                next.add(s, c.clone());
            }
        }
        cur = next;
    }
    let _ = field;
    cur
}

/// The shuffle product of chains of degrees `p` and `q`: the signed sum
/// over `(p,q)`-shuffles of `s_nu(f) (x) s_mu(g)` with the loops tensored
/// by the monoidal product.
pub fn shuffle_product(
    cat: &GradedVectCategory,
    f: &LoopChain,
    p: usize,
    g: &LoopChain,
    q: usize,
) -> LoopChain {
    let field = cat.field;
    let mut out = LoopChain::zero();
    for sh in Shuffle::enumerate(p, q) {
        let sf = apply_degeneracies(field, f, &sh.nu);
        let sg = apply_degeneracies(field, g, &sh.mu);
        let sign = field.from_int(sh.sign as i64);
        for (lf, cf) in &sf.terms {
            for (lg, cg) in &sg.terms {
                out.add(loop_tensor(cat, lf, lg), sign.mul(cf).mul(cg));
            }
        }
    }
    out
}

/// The conjugation action of a group element on a loop (strict: indices
/// unchanged, objects conjugated).
pub fn act_on_loop(cat: &GradedVectCategory, h: usize, l: &Loop) -> Loop {
    Loop {
        objects: l.objects.iter().map(|t| cat.act_obj(h, t)).collect(),
        arrows: l.arrows.clone(),
        closing: l.closing,
    }
}

/// A materialized loop space over a finite object list: the simplicial
/// vector space of loops, its basis enumeration, and (optionally) the
/// sector/twist it belongs to.
pub struct LoopSpace {
    pub objects: Vec<ObjTuple>,
    pub sector: Option<(usize, usize)>,
    pub bases: Vec<Vec<Loop>>,
    pub simplicial: SimplicialVS,
    pub window: usize,
}

impl LoopSpace {
    pub fn index_of(&self, degree: usize, l: &Loop) -> Option<usize> {
        self.bases[degree].binary_search(l).ok()
    }

    /// A loop chain as a sparse vector in the enumerated level basis.
    pub fn chain_to_vec(&self, degree: usize, chain: &LoopChain) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (l, c) in &chain.terms {
            let i = self.index_of(degree, l).ok_or_else(|| {
                Error::InvalidInput("loop outside the materialized object list".into())
            })?;
            out.push((i, c.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }
}

/// Enumerates all basis loops through the object list and materializes the
/// simplicial vector space. The loop operator of the category restricted to
/// the list.
pub fn loop_operator(
    cat: &GradedVectCategory,
    objects: &[ObjTuple],
    window: usize,
    budget: usize,
) -> Result<LoopSpace> {
    if objects.is_empty() {
        return Err(Error::InvalidInput("the object list must be nonempty".into()));
    }
    let field = cat.field;
    let mut bases: Vec<Vec<Loop>> = Vec::new();
    for n in 0..=window {
        let mut level = Vec::new();
        // Enumerate object tuples (X_0, .., X_n) and matching index chains.
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..=n {
            let mut next = Vec::new();
            for t in &tuples {
                for x in 0..objects.len() {
                    let mut tt = t.clone();
                    tt.push(x);
                    next.push(tt);
                }
            }
            tuples = next;
        }
        for t in tuples {
            let objs: Vec<ObjTuple> = t.iter().map(|i| objects[*i].clone()).collect();
            // arrows[k]: X_{k+1} -> X_k, closing: X_0 -> X_n.
            let mut arrow_choices: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
            for k in 0..n {
                let basis = cat.hom_basis(&objs[k + 1], &objs[k]);
                let mut next = Vec::new();
                for choice in &arrow_choices {
                    for b in &basis {
                        let mut cc = choice.clone();
                        cc.push(*b);
                        next.push(cc);
                    }
                }
                arrow_choices = next;
            }
            let closings = cat.hom_basis(&objs[0], &objs[n]);
            for arrows in &arrow_choices {
                for closing in &closings {
                    level.push(Loop {
                        objects: objs.clone(),
                        arrows: arrows.clone(),
                        closing: *closing,
                    });
                }
            }
        }
        if level.len() > budget {
            return Err(Error::BudgetExceeded {
                level: n,
                size: level.len(),
                budget,
            });
        }
        level.sort();
        level.dedup();
        bases.push(level);
    }
    let index: Vec<BTreeMap<&Loop, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, l)| (l, i)).collect())
        .collect();
    let levels: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let labels: Vec<Vec<String>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .map(|l| {
                    let objs: Vec<String> = l
                        .objects
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|g| cat.group.labels[*g].clone())
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect();
                    format!(
                        "loop[{};a{:?};c{:?}]",
                        objs.join("|"),
                        l.arrows,
                        l.closing
                    )
                })
                .collect()
        })
        .collect();
    let one = field.one();
    let mut faces = vec![Vec::new()];
    for n in 1..=window {
        let mut fs = Vec::new();
        for j in 0..=n {
            let mut m = Matrix::zero(field, levels[n - 1], levels[n]);
            for (col, l) in bases[n].iter().enumerate() {
                if let Some(fl) = loop_face(l, j) {
                    let row = *index[n - 1].get(&fl).expect("face stays in the list");
                    m.add_entry(row, col, &one)?;
                }
            }
            fs.push(m);
        }
        faces.push(fs);
    }
    let mut degens = Vec::new();
    for n in 0..window {
        let mut ds = Vec::new();
        for j in 0..=n {
            let mut m = Matrix::zero(field, levels[n + 1], levels[n]);
            for (col, l) in bases[n].iter().enumerate() {
                for sl in loop_degeneracy(l, j) {
                    let row = *index[n + 1].get(&sl).expect("degeneracy stays in the list");
                    m.add_entry(row, col, &one)?;
                }
            }
            ds.push(m);
        }
        degens.push(ds);
    }
    let simplicial = SimplicialVS {
        field,
        levels,
        labels,
        faces,
        degens,
        window,
    };
    Ok(LoopSpace {
        objects: objects.to_vec(),
        sector: None,
        bases,
        simplicial,
        window,
    })
}

/// The z-twisted sector complex of the `g`-graded component: loop levels
/// close through `z.X_0`, which for a central `z` acting strictly is the
/// plain loop space of the sector objects. Returns the loop space and its
/// normalized chains.
pub fn sector_complex(
    cat: &GradedVectCategory,
    g: usize,
    z: usize,
    objects: &[ObjTuple],
    window: usize,
    budget: usize,
) -> Result<(LoopSpace, NormalizedChains)> {
    if !cat.crossed {
        return Err(Error::InvalidInput(
            "sector complexes need a crossed structure".into(),
        ));
    }
    let n = cat.group.order();
    for a in 0..n {
        if cat.group.mul(z, a) != cat.group.mul(a, z) {
            return Err(Error::axiom(
                "central twist element",
                format!("z does not commute with {}", cat.group.labels[a]),
            ));
        }
    }
    for t in objects {
        for x in t {
            if *x != g {
                return Err(Error::InvalidInput(format!(
                    "object outside the {} sector",
                    cat.group.labels[g]
                )));
            }
        }
    }
    if objects.is_empty() {
        return Err(Error::InvalidInput("sector object list is empty".into()));
    }
    let mut ls = loop_operator(cat, objects, window, budget)?;
    ls.sector = Some((g, z));
    let normalized = normalized_chains(&ls.simplicial)?;
    Ok((ls, normalized))
}

/// Degree-zero computation of the z-twisted sector with an explicit scalar
/// for the action of `z` on the sector's simple: the coinvariants of the
/// twisted hom space. A nontrivial scalar is only consistent as a two-term
/// truncation, so only `H_0` is produced.
pub fn twisted_sector_h0(
    cat: &GradedVectCategory,
    g: usize,
    z: usize,
    z_scalar: &Scalar,
) -> Result<usize> {
    let n = cat.group.order();
    for a in 0..n {
        if cat.group.mul(z, a) != cat.group.mul(a, z) {
            return Err(Error::axiom(
                "central twist element",
                format!("z does not commute with {}", cat.group.labels[a]),
            ));
        }
    }
    // Level 0: C(z.delta_g, delta_g) = k. Level 1 relation:
    // d(m (x) c) = c . (z_scalar m) - m . c = (z_scalar - 1) mc.
    let _ = g;
    let defect = z_scalar.sub(&cat.field.one());
    Ok(if defect.is_zero() { 1 } else { 0 })
}

/// The product of twisted sector chains: the shuffle product of the loops,
/// landing in the product sector. The centrality isomorphism
/// `z.(X (x) Y) = (z.X) (x) (z.Y)` is the identity in the strict model.
pub fn sector_product(
    cat: &GradedVectCategory,
    x: &LoopChain,
    p: usize,
    sector_x: usize,
    y: &LoopChain,
    q: usize,
    sector_y: usize,
    z_x: usize,
    z_y: usize,
) -> Result<(LoopChain, usize)> {
    if z_x != z_y {
        return Err(Error::InvalidInput(
            "sector factors carry different twist elements".into(),
        ));
    }
    let prod = shuffle_product(cat, x, p, y, q);
    let target = cat.group.mul(sector_x, sector_y);
    // Grading: every object of every term lies in the product sector.
    for (l, _) in &prod.terms {
        for t in &l.objects {
            for comp in t {
                if *comp != target {
                    return Err(Error::axiom(
                        "sector grading",
                        format!(
                            "component {} outside sector {}",
                            cat.group.labels[*comp], cat.group.labels[target]
                        ),
                    ));
                }
            }
        }
    }
    Ok((prod, target))
}

/// Degree-zero homology data of a loop space: representatives and the
/// expression of level-0 chains in the homology basis.
pub struct H0Data {
    pub dim: usize,
    pub reps: Vec<SparseVec>,
    pub rep_loops: Vec<LoopChain>,
    solve_matrix: Matrix,
}

pub fn h0_data(ls: &LoopSpace, field: ScalarField) -> Result<H0Data> {
    let d1 = ls.simplicial.unnormalized_differential(1);
    let level0 = ls.simplicial.levels[0];
    let decomp = matrix::rank_kernel_image(&d1);
    let mut ech = matrix::Echelon::new(level0);
    for b in &decomp.image {
        ech.insert(b.clone());
    }
    let mut reps = Vec::new();
    for i in 0..level0 {
        let v: SparseVec = vec![(i, field.one())];
        if ech.insert(v.clone()) {
            reps.push(v);
        }
    }
    // [reps | image basis of d1]: solving against it expresses a level-0
    // chain as homology coefficients plus a boundary.
    let mut solve_matrix = Matrix::zero(field, level0, reps.len() + decomp.image.len());
    for (k, r) in reps.iter().enumerate() {
        solve_matrix.set_col(k, r.clone());
    }
    for (k, b) in decomp.image.iter().enumerate() {
        solve_matrix.set_col(reps.len() + k, b.clone());
    }
    let rep_loops = reps
        .iter()
        .map(|r| {
            let mut ch = LoopChain::zero();
            for (i, c) in r {
                ch.add(ls.bases[0][*i].clone(), c.clone());
            }
            ch
        })
        .collect();
    Ok(H0Data {
        dim: reps.len(),
        reps,
        rep_loops,
        solve_matrix,
    })
}

impl H0Data {
    /// Coefficients of a level-0 chain in the homology basis (reduction
    /// modulo boundaries by solving).
    pub fn express(&self, ls: &LoopSpace, chain: &LoopChain) -> Result<SparseVec> {
        let v = ls.chain_to_vec(0, chain)?;
        let sol = matrix::solve_linear(&self.solve_matrix, &v)?.ok_or_else(|| {
            Error::InvalidInput("chain is not a cycle representative".into())
        })?;
        Ok(sol
            .into_iter()
            .filter(|(i, _)| *i < self.dim)
            .collect())
    }
}

/// The degree-zero multiplication table of the derived Verlinde algebra on
/// the `H_0` basis.
pub struct H0ProductTable {
    pub dim: usize,
    pub labels: Vec<String>,
    /// `table[i][j]`: coefficients of `u_i * u_j` in the basis.
    pub table: Vec<Vec<SparseVec>>,
}

pub fn h0_product_table(
    cat: &GradedVectCategory,
    ls: &LoopSpace,
) -> Result<H0ProductTable> {
    let h0 = h0_data(ls, cat.field)?;
    let mut table = Vec::new();
    for i in 0..h0.dim {
        let mut row = Vec::new();
        for j in 0..h0.dim {
            let prod = shuffle_product(cat, &h0.rep_loops[i], 0, &h0.rep_loops[j], 0);
            row.push(h0.express(ls, &prod)?);
        }
        table.push(row);
    }
    let labels = h0
        .reps
        .iter()
        .map(|r| {
            let i = r[0].0;
            let l = &ls.bases[0][i];
            // Identity loops at simples get the class-function name.
            if r.len() == 1 && l.objects[0].len() == 1 && l.closing == (0, 0) {
                format!("u[{}]", cat.group.labels[l.objects[0][0]])
            } else {
                ls.simplicial.labels[0][i].clone()
            }
        })
        .collect();
    Ok(H0ProductTable {
        dim: h0.dim,
        labels,
        table,
    })
}

/// An arrangement of operad inputs: `arr[pos]` is the input occupying that
/// position.
pub type Arrangement = Vec<usize>;

/// One braid letter: the strands at `pos` and `pos + 1` cross (positive:
/// the left strand passes over).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidGen {
    pub pos: usize,
    pub inverse: bool,
}

pub type BraidWord = Vec<BraidGen>;

fn apply_word_to_arrangement(arr: &Arrangement, word: &BraidWord) -> Arrangement {
    let mut a = arr.clone();
    for g in word {
        a.swap(g.pos, g.pos + 1);
    }
    a
}

/// A nerve simplex of the braid-action groupoid in one arity: a string of
/// arrangements connected by braid words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveSimplexE2 {
    pub arity: usize,
    pub perms: Vec<Arrangement>,
    pub braids: Vec<BraidWord>,
}

impl NerveSimplexE2 {
    pub fn new(
        arity: usize,
        perms: Vec<Arrangement>,
        braids: Vec<BraidWord>,
    ) -> Result<NerveSimplexE2> {
        if perms.is_empty() || braids.len() + 1 != perms.len() {
            return Err(Error::InvalidInput(
                "a degree-p simplex needs p+1 arrangements and p words".into(),
            ));
        }
        for p in &perms {
            let mut sorted = p.clone();
            sorted.sort();
            if sorted != (0..arity).collect::<Vec<_>>() {
                return Err(Error::InvalidInput("not an arrangement of the inputs".into()));
            }
        }
        for (j, w) in braids.iter().enumerate() {
            if w.iter().any(|g| g.pos + 1 >= arity) {
                return Err(Error::InvalidInput("braid letter out of range".into()));
            }
            if apply_word_to_arrangement(&perms[j], w) != perms[j + 1] {
                return Err(Error::axiom(
                    "braid word projects to the permutation step",
                    format!("step {j}"),
                ));
            }
        }
        Ok(NerveSimplexE2 {
            arity,
            perms,
            braids,
        })
    }

    pub fn degree(&self) -> usize {
        self.braids.len()
    }

    /// The identity-arrangement vertex (degree 0, pure tensor product).
    pub fn tensor_vertex(arity: usize) -> NerveSimplexE2 {
        NerveSimplexE2 {
            arity,
            perms: vec![(0..arity).collect()],
            braids: Vec::new(),
        }
    }

    pub fn face(&self, j: usize) -> NerveSimplexE2 {
        let p = self.degree();
        assert!(p >= 1 && j <= p);
        if j == 0 {
            NerveSimplexE2 {
                arity: self.arity,
                perms: self.perms[1..].to_vec(),
                braids: self.braids[1..].to_vec(),
            }
        } else if j == p {
            NerveSimplexE2 {
                arity: self.arity,
                perms: self.perms[..p].to_vec(),
                braids: self.braids[..p - 1].to_vec(),
            }
        } else {
            let mut perms = self.perms.clone();
            perms.remove(j);
            let mut braids: Vec<BraidWord> = Vec::with_capacity(p - 1);
            braids.extend_from_slice(&self.braids[..j - 1]);
            let mut merged = self.braids[j - 1].clone();
            merged.extend_from_slice(&self.braids[j]);
            braids.push(merged);
            braids.extend_from_slice(&self.braids[j + 1..]);
            NerveSimplexE2 {
                arity: self.arity,
                perms,
                braids,
            }
        }
    }
}

/// A monomial map between product objects: per source component, the target
/// component and a scalar.
type MonomialMap = Vec<(usize, Scalar)>;

/// The product object of the inputs in a given arrangement.
fn arranged_object(cat: &GradedVectCategory, arr: &Arrangement, tuples: &[ObjTuple]) -> ObjTuple {
    let mut acc: ObjTuple = vec![cat.group.identity];
    for pos in arr {
        acc = cat.tensor_obj(&acc, &tuples[*pos]);
    }
    acc
}

/// Decomposes a component index of the arranged product into per-position
/// component choices.
fn split_component(arr_sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut parts = vec![0usize; arr_sizes.len()];
    for i in (0..arr_sizes.len()).rev() {
        parts[i] = idx % arr_sizes[i];
        idx /= arr_sizes[i];
    }
    parts
}

fn join_component(arr_sizes: &[usize], parts: &[usize]) -> usize {
    let mut idx = 0usize;
    for (s, p) in arr_sizes.iter().zip(parts) {
        idx = idx * s + p;
    }
    idx
}

/// Evaluates a braid word as a monomial natural-isomorphism component at
/// the given input tuples, starting from `start` and returning the final
/// arrangement with the component map.
fn eval_braid_word(
    cat: &GradedVectCategory,
    word: &BraidWord,
    start: &Arrangement,
    tuples: &[ObjTuple],
) -> Result<(Arrangement, MonomialMap)> {
    let mut arr = start.clone();
    let sizes = |arr: &Arrangement| -> Vec<usize> {
        arr.iter().map(|i| tuples[*i].len()).collect()
    };
    let total: usize = sizes(&arr).iter().product();
    let mut map: MonomialMap = (0..total).map(|i| (i, cat.field.one())).collect();
    for g in word {
        let sz = sizes(&arr);
        let block_a = &tuples[arr[g.pos]];
        let block_b = &tuples[arr[g.pos + 1]];
        let mut new_arr = arr.clone();
        new_arr.swap(g.pos, g.pos + 1);
        let new_sz = sizes(&new_arr);
        for entry in map.iter_mut() {
            let parts = split_component(&sz, entry.0);
            let (u, v) = (parts[g.pos], parts[g.pos + 1]);
            let scalar = if g.inverse {
                // The inverse crossing of B over A.
                cat.beta(block_b[v], block_a[u]).inv()
            } else {
                cat.beta(block_a[u], block_b[v]).clone()
            };
            let mut np = parts.clone();
            np.swap(g.pos, g.pos + 1);
            entry.0 = join_component(&new_sz, &np);
            entry.1 = entry.1.mul(&scalar);
        }
        arr = new_arr;
    }
    Ok((arr, map))
}

/// The permuted tensor functor applied to a family of elementary arrows:
/// `phi(f_1 (x) .. (x) f_n)` on the arranged products.
fn arranged_elem(
    arr: &Arrangement,
    sources: &[ObjTuple],
    targets: &[ObjTuple],
    elems: &[(usize, usize)],
) -> (usize, usize) {
    let src_sizes: Vec<usize> = arr.iter().map(|i| sources[*i].len()).collect();
    let tgt_sizes: Vec<usize> = arr.iter().map(|i| targets[*i].len()).collect();
    let rows: Vec<usize> = arr.iter().map(|i| elems[*i].0).collect();
    let cols: Vec<usize> = arr.iter().map(|i| elems[*i].1).collect();
    (
        join_component(&tgt_sizes, &rows),
        join_component(&src_sizes, &cols),
    )
}

/// The braid-nerve action on loops: a degree-p nerve simplex acts on p
/// matching-degree loops, permuting objects with the arrangement functors
/// and inserting braiding isomorphisms along the string; the closing wraps
/// through the composite of all the words.
pub fn e2_act(
    cat: &GradedVectCategory,
    g: &NerveSimplexE2,
    loops: &[&Loop],
) -> Result<(Loop, Scalar)> {
    if cat.braiding.is_none() {
        return Err(Error::InvalidInput(
            "the braid action needs braiding data".into(),
        ));
    }
    let p = g.degree();
    if loops.len() != g.arity {
        return Err(Error::DimensionMismatch {
            context: "operad arity".into(),
            expected: g.arity,
            found: loops.len(),
        });
    }
    for l in loops {
        if l.degree() != p {
            return Err(Error::DimensionMismatch {
                context: "loop degree must match the simplex degree".into(),
                expected: p,
                found: l.degree(),
            });
        }
    }
    // Level-j object families.
    let objs_at = |j: usize| -> Vec<ObjTuple> {
        loops.iter().map(|l| l.objects[j].clone()).collect()
    };
    let objects: Vec<ObjTuple> = (0..=p)
        .map(|j| arranged_object(cat, &g.perms[j], &objs_at(j)))
        .collect();
    let mut scalar = cat.field.one();
    // Arrows: Y_j -> Y_{j-1} is c_{j-1}^{-1} phi_j(f_j), where f_j is the
    // family of j-th arrows (X_j -> X_{j-1} componentwise).
    let mut arrows = Vec::with_capacity(p);
    for j in 1..=p {
        let sources = objs_at(j);
        let targets = objs_at(j - 1);
        let elems: Vec<(usize, usize)> = loops.iter().map(|l| l.arrows[j - 1]).collect();
        let (row, col) = arranged_elem(&g.perms[j], &sources, &targets, &elems);
        // c_{j-1}^{-1}: from the perms[j-1]-arrangement... the word braids[j-1]
        // carries perms[j-1] to perms[j]; its inverse carries the target of
        // phi_j(f_j) (arranged by perms[j]) back to perms[j-1].
        let inv_word: BraidWord = g.braids[j - 1]
            .iter()
            .rev()
            .map(|b| BraidGen {
                pos: b.pos,
                inverse: !b.inverse,
            })
            .collect();
        let (end, mono) = eval_braid_word(cat, &inv_word, &g.perms[j], &targets)?;
        debug_assert_eq!(end, g.perms[j - 1]);
        let (new_row, s) = mono[row].clone();
        scalar = scalar.mul(&s);
        arrows.push((new_row, col));
    }
    // Closing: c_p phi_0(f_0) with c_p = braids[p-1] .. braids[0].
    let sources = objs_at(0);
    let targets = objs_at(p);
    let elems: Vec<(usize, usize)> = loops.iter().map(|l| l.closing).collect();
    let (row, col) = arranged_elem(&g.perms[0], &sources, &targets, &elems);
    let mut full: BraidWord = Vec::new();
    for w in &g.braids {
        full.extend_from_slice(w);
    }
    let (end, mono) = eval_braid_word(cat, &full, &g.perms[0], &targets)?;
    debug_assert_eq!(end, g.perms[p]);
    let (new_row, s) = mono[row].clone();
    scalar = scalar.mul(&s);
    let closing = (new_row, col);
    Ok((
        Loop {
            objects,
            arrows,
            closing,
        },
        scalar,
    ))
}

/// Emits the braid word that carries the block at `pos` (width `u`) over
/// the block at `pos + 1` (width `v`), strandwise.
fn block_cross(offset: usize, u: usize, v: usize, inverse: bool) -> BraidWord {
    // Same strand motion either way; the sign only flips the crossings.
    let mut word = Vec::new();
    for i in (0..u).rev() {
        for k in 0..v {
            word.push(BraidGen {
                pos: offset + i + k,
                inverse,
            });
        }
    }
    word
}

/// Operadic composition of nerve simplices of one common degree: the outer
/// simplex on `m` inputs grafts the inner simplices, with the outer words
/// cabled along the current block widths.
pub fn compose_nerve(
    outer: &NerveSimplexE2,
    inners: &[NerveSimplexE2],
) -> Result<NerveSimplexE2> {
    let p = outer.degree();
    if inners.len() != outer.arity {
        return Err(Error::DimensionMismatch {
            context: "operadic composition arity".into(),
            expected: outer.arity,
            found: inners.len(),
        });
    }
    for g in inners {
        if g.degree() != p {
            return Err(Error::InvalidInput(
                "inner simplices must share the outer degree".into(),
            ));
        }
    }
    let widths: Vec<usize> = inners.iter().map(|g| g.arity).collect();
    let offsets: Vec<usize> = {
        let mut acc = 0;
        let mut out = Vec::new();
        for w in &widths {
            out.push(acc);
            acc += w;
        }
        out
    };
    let total: usize = widths.iter().sum();
    // Composed arrangements.
    let perms: Vec<Arrangement> = (0..=p)
        .map(|j| {
            let mut arr = Vec::with_capacity(total);
            for block in &outer.perms[j] {
                for inner_pos in &inners[*block].perms[j] {
                    arr.push(offsets[*block] + inner_pos);
                }
            }
            arr
        })
        .collect();
    // Composed words: inner words embedded at their block offsets (in the
    // step-j arrangement), then the outer word cabled with running widths.
    let mut braids = Vec::with_capacity(p);
    for j in 0..p {
        let mut word: BraidWord = Vec::new();
        // Strand offset of each outer block in the perms-of-step-j order.
        let mut strand_offset = vec![0usize; outer.arity];
        {
            let mut acc = 0;
            for b in &outer.perms[j] {
                strand_offset[*b] = acc;
                acc += widths[*b];
            }
        }
        for (block, inner) in inners.iter().enumerate() {
            for g in &inner.braids[j] {
                word.push(BraidGen {
                    pos: strand_offset[block] + g.pos,
                    inverse: g.inverse,
                });
            }
        }
        // Cable the outer word, tracking the block arrangement.
        let mut arr = outer.perms[j].clone();
        for g in &outer.braids[j] {
            let off: usize = arr[..g.pos].iter().map(|b| widths[*b]).sum();
            let u = widths[arr[g.pos]];
            let v = widths[arr[g.pos + 1]];
            word.extend(block_cross(off, u, v, g.inverse));
            arr.swap(g.pos, g.pos + 1);
        }
        braids.push(word);
    }
    NerveSimplexE2::new(total, perms, braids)
}
