//! Chain complexes, simplicial vector spaces, normalized chains,
//! Eilenberg-Zilber shuffle maps, and identity verification.
//!
//! All complexes are truncations of a priori unbounded complexes. The
//! `window` of a complex is the largest degree whose level and incoming
//! differential are authoritative; homology is then authoritative in degrees
//! `<= window - 1` because it also needs the next differential.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::matrix::{self, Matrix, SparseVec};

/// A bounded-below chain complex, authoritative up to its window.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub field: ScalarField,
    /// Level dimensions for degrees `0..=window`.
    pub levels: Vec<usize>,
    /// Basis labels per level, parallel to `levels`.
    pub labels: Vec<Vec<String>>,
    /// `diffs[n]` maps level `n` to level `n-1`; `diffs[0]` is the zero map
    /// out of level 0.
    pub diffs: Vec<Matrix>,
    pub window: usize,
}

/// One homology group of a truncated complex, with its window attached.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: usize,
    pub dim: usize,
    /// Echelon-canonical representing cycles in level coordinates.
    pub cycle_reps: Vec<SparseVec>,
    pub window: usize,
}

impl ChainComplex {
    pub fn new(
        field: ScalarField,
        levels: Vec<usize>,
        labels: Vec<Vec<String>>,
        diffs: Vec<Matrix>,
    ) -> ChainComplex {
        let window = levels.len() - 1;
        assert_eq!(labels.len(), levels.len());
        assert_eq!(diffs.len(), levels.len());
        ChainComplex {
            field,
            levels,
            labels,
            diffs,
            window,
        }
    }

    /// A complex with `dim` copies of the unit in degree `at`, zero elsewhere.
    pub fn concentrated(field: ScalarField, dim: usize, at: usize, window: usize) -> ChainComplex {
        let mut levels = vec![0usize; window + 1];
        if at <= window {
            levels[at] = dim;
        }
        let labels = levels
            .iter()
            .map(|d| (0..*d).map(|i| format!("e{i}")).collect())
            .collect();
        let diffs = (0..=window)
            .map(|n| {
                let rows = if n == 0 { 0 } else { levels[n - 1] };
                Matrix::zero(field, rows, levels[n])
            })
            .collect();
        ChainComplex::new(field, levels, labels, diffs)
    }

    pub fn level_dim(&self, n: usize) -> usize {
        if n <= self.window {
            self.levels[n]
        } else {
            0
        }
    }

    /// Checks `d_n . d_{n+1} = 0` for all degrees inside the window.
    pub fn validate(&self) -> Result<()> {
        for n in 1..self.window {
            let dd = self.diffs[n].mul(&self.diffs[n + 1])?;
            if !dd.is_zero_matrix() {
                return Err(Error::axiom(
                    "d^2 = 0",
                    format!("nonzero composite at degrees {} -> {}", n + 1, n - 1),
                ));
            }
        }
        Ok(())
    }

    /// Homology in degree `n`; requires `n + 1 <= window` so both adjacent
    /// differentials are known.
    pub fn homology(&self, n: usize) -> Result<Homology> {
        if n + 1 > self.window {
            return Err(Error::WindowExceeded {
                degree: n,
                window: self.window,
            });
        }
        let kernel: Vec<SparseVec> = if n == 0 {
            // d_0 = 0: the kernel is all of level 0.
            let one = self.field.one();
            (0..self.levels[0])
                .map(|i| vec![(i, one.clone())])
                .collect()
        } else {
            matrix::rank_kernel_image(&self.diffs[n]).kernel
        };
        let image = matrix::rank_kernel_image(&self.diffs[n + 1]).image;
        // Extend the image echelon by kernel vectors; the ones that increase
        // rank represent a homology basis.
        let mut ech = matrix::Echelon::new(self.levels[n]);
        for b in &image {
            ech.insert(b.clone());
        }
        let mut reps = Vec::new();
        for k in &kernel {
            if ech.insert(k.clone()) {
                reps.push(k.clone());
            }
        }
        Ok(Homology {
            degree: n,
            dim: reps.len(),
            cycle_reps: reps,
            window: self.window,
        })
    }

    /// Homology dimension only, degree `n`: two ranks, no bases.
    pub fn homology_dim(&self, n: usize) -> Result<usize> {
        if n + 1 > self.window {
            return Err(Error::WindowExceeded {
                degree: n,
                window: self.window,
            });
        }
        let nullity = if n == 0 {
            self.levels[0]
        } else {
            self.levels[n] - matrix::rank(&self.diffs[n])
        };
        Ok(nullity - matrix::rank(&self.diffs[n + 1]))
    }

    /// All authoritative homology dimensions, degrees `0..=window-1`.
    pub fn homology_dims(&self) -> Result<Vec<usize>> {
        (0..self.window).map(|n| self.homology_dim(n)).collect()
    }
}

/// Tensor product of complexes with the Koszul sign `(-1)^p` on `id (x) d`.
pub fn tensor_complex(c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex> {
    if c.field != d.field {
        return Err(Error::FieldMismatch {
            expected: c.field,
            found: d.field,
        });
    }
    let window = c.window.min(d.window);
    let field = c.field;
    let offsets = |n: usize| -> Vec<usize> {
        // Offset of block (p, n-p) for p = 0..=n, plus the total.
        let mut off = Vec::with_capacity(n + 2);
        let mut acc = 0;
        for p in 0..=n {
            off.push(acc);
            acc += c.level_dim(p) * d.level_dim(n - p);
        }
        off.push(acc);
        off
    };
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    for n in 0..=window {
        let off = offsets(n);
        levels.push(*off.last().unwrap());
        let mut lab = Vec::with_capacity(*off.last().unwrap());
        for p in 0..=n {
            let q = n - p;
            for i in 0..c.level_dim(p) {
                for j in 0..d.level_dim(q) {
                    lab.push(format!("{}(x){}", c.labels[p][i], d.labels[q][j]));
                }
            }
        }
        labels.push(lab);
    }
    let mut diffs = vec![Matrix::zero(field, 0, levels[0])];
    for n in 1..=window {
        let off_n = offsets(n);
        let off_m = offsets(n - 1);
        let mut m = Matrix::zero(field, levels[n - 1], levels[n]);
        for p in 0..=n {
            let q = n - p;
            let dim_cp = c.level_dim(p);
            let dim_dq = d.level_dim(q);
            if dim_cp * dim_dq == 0 {
                continue;
            }
            for i in 0..dim_cp {
                for j in 0..dim_dq {
                    let col = off_n[p] + i * dim_dq + j;
                    // d_c (x) id lands in block (p-1, q).
                    if p >= 1 {
                        for (r, s) in c.diffs[p].col(i) {
                            m.add_entry(off_m[p - 1] + r * dim_dq + j, col, s)?;
                        }
                    }
                    // (-1)^p id (x) d_d lands in block (p, q-1).
                    if q >= 1 {
                        let dq1 = d.level_dim(q - 1);
                        let sign = if p % 2 == 0 {
                            field.one()
                        } else {
                            field.one().neg()
                        };
                        for (r, s) in d.diffs[q].col(j) {
                            m.add_entry(off_m[p] + i * dq1 + r, col, &sign.mul(s))?;
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    Ok(ChainComplex::new(field, levels, labels, diffs))
}

/// A truncated simplicial vector space with labeled level bases.
#[derive(Clone, Debug)]
pub struct SimplicialVS {
    pub field: ScalarField,
    /// Level dimensions for simplicial degrees `0..=window`.
    pub levels: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    /// `faces[n][j]` maps level `n` to level `n-1` (for `1 <= n <= window`).
    pub faces: Vec<Vec<Matrix>>,
    /// `degens[n][j]` maps level `n` to level `n+1` (for `n < window`).
    pub degens: Vec<Vec<Matrix>>,
    pub window: usize,
}

/// One failed identity: which relation, at which degree, and the residual.
#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub degree: usize,
    pub identity: String,
    pub residual: Matrix,
}

/// Outcome of an identity check; empty failure list means verified.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, degree: usize, identity: impl Into<String>, residual: Matrix) {
        if !residual.is_zero_matrix() {
            self.failures.push(VerifyFailure {
                degree,
                identity: identity.into(),
                residual,
            });
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.failures.extend(other.failures);
    }
}

impl SimplicialVS {
    pub fn face(&self, n: usize, j: usize) -> &Matrix {
        &self.faces[n][j]
    }

    pub fn degen(&self, n: usize, j: usize) -> &Matrix {
        &self.degens[n][j]
    }

    /// Free simplicial vector space on a (truncated) simplicial set: bases
    /// are given per level, faces and degeneracies act on basis elements.
    pub fn from_basis_maps<T, F, G>(
        field: ScalarField,
        window: usize,
        bases: Vec<Vec<T>>,
        label: impl Fn(&T) -> String,
        face: F,
        degen: G,
    ) -> SimplicialVS
    where
        T: Clone + Ord,
        F: Fn(usize, usize, &T) -> T,
        G: Fn(usize, usize, &T) -> T,
    {
        assert_eq!(bases.len(), window + 1);
        let index: Vec<BTreeMap<T, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let levels: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let labels = bases
            .iter()
            .map(|b| b.iter().map(&label).collect())
            .collect();
        let one = field.one();
        let mut faces = vec![Vec::new()];
        for n in 1..=window {
            let mut fs = Vec::new();
            for j in 0..=n {
                let mut m = Matrix::zero(field, levels[n - 1], levels[n]);
                for (col, t) in bases[n].iter().enumerate() {
                    let ft = face(n, j, t);
                    let row = *index[n - 1]
                        .get(&ft)
                        .expect("face image not in level basis");
                    m.add_entry(row, col, &one).unwrap();
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
                for (col, t) in bases[n].iter().enumerate() {
                    let st = degen(n, j, t);
                    let row = *index[n + 1]
                        .get(&st)
                        .expect("degeneracy image not in level basis");
                    m.add_entry(row, col, &one).unwrap();
                }
                ds.push(m);
            }
            degens.push(ds);
        }
        SimplicialVS {
            field,
            levels,
            labels,
            faces,
            degens,
            window,
        }
    }

    /// Checks every simplicial identity expressible inside the window.
    pub fn verify_identities(&self) -> VerifyReport {
        let mut report = VerifyReport::default();
        // d_i d_j = d_{j-1} d_i  (i < j), on levels n >= 2.
        for n in 2..=self.window {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.faces[n - 1][i].mul(&self.faces[n][j]).unwrap();
                    let rhs = self.faces[n - 1][j - 1].mul(&self.faces[n][i]).unwrap();
                    report.record(
                        n,
                        format!("d_{i} d_{j} = d_{} d_{i}", j - 1),
                        lhs.sub(&rhs).unwrap(),
                    );
                }
            }
        }
        // s_i s_j = s_{j+1} s_i  (i <= j), landing two levels up.
        if self.window >= 2 {
            for n in 0..=self.window - 2 {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degens[n + 1][i].mul(&self.degens[n][j]).unwrap();
                        let rhs = self.degens[n + 1][j + 1].mul(&self.degens[n][i]).unwrap();
                        report.record(
                            n,
                            format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                            lhs.sub(&rhs).unwrap(),
                        );
                    }
                }
            }
        }
        // Mixed relations d_i s_j on every level with a degeneracy.
        for n in 0..self.window {
            let id = Matrix::identity(self.field, self.levels[n]);
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let comp = self.faces[n + 1][i].mul(&self.degens[n][j]).unwrap();
                    if i == j || i == j + 1 {
                        report.record(n, format!("d_{i} s_{j} = id"), comp.sub(&id).unwrap());
                    } else if i < j {
                        if n == 0 {
                            continue;
                        }
                        let rhs = self.degens[n - 1][j - 1].mul(&self.faces[n][i]).unwrap();
                        report.record(
                            n,
                            format!("d_{i} s_{j} = s_{} d_{i}", j - 1),
                            comp.sub(&rhs).unwrap(),
                        );
                    } else {
                        if n == 0 {
                            continue;
                        }
                        let rhs = self.degens[n - 1][j].mul(&self.faces[n][i - 1]).unwrap();
                        report.record(
                            n,
                            format!("d_{i} s_{j} = s_{j} d_{}", i - 1),
                            comp.sub(&rhs).unwrap(),
                        );
                    }
                }
            }
        }
        report
    }

    /// The alternating-sum differential on unnormalized chains.
    pub fn unnormalized_differential(&self, n: usize) -> Matrix {
        if n == 0 {
            return Matrix::zero(self.field, 0, self.levels[0]);
        }
        let mut d = Matrix::zero(self.field, self.levels[n - 1], self.levels[n]);
        let mut sign = self.field.one();
        for j in 0..=n {
            d = d.add(&self.faces[n][j].scale(&sign)).unwrap();
            sign = sign.neg();
        }
        d
    }

    /// Composite degeneracy `s_{k_m - 1} . ... . s_{k_1 - 1}` applied from
    /// level `start`, for a strictly increasing index list `k`.
    pub fn degeneracy_composite(&self, start: usize, k: &[usize]) -> Matrix {
        let mut m = Matrix::identity(self.field, self.levels[start]);
        let mut lvl = start;
        for kk in k {
            m = self.degens[lvl][kk - 1].mul(&m).unwrap();
            lvl += 1;
        }
        m
    }
}

/// Levelwise tensor product of simplicial vector spaces (diagonal simplicial
/// structure): faces and degeneracies act factorwise.
pub fn product_simplicial(a: &SimplicialVS, b: &SimplicialVS) -> Result<SimplicialVS> {
    if a.field != b.field {
        return Err(Error::FieldMismatch {
            expected: a.field,
            found: b.field,
        });
    }
    let window = a.window.min(b.window);
    let levels: Vec<usize> = (0..=window).map(|n| a.levels[n] * b.levels[n]).collect();
    let labels: Vec<Vec<String>> = (0..=window)
        .map(|n| {
            let mut lab = Vec::with_capacity(levels[n]);
            for la in &a.labels[n] {
                for lb in &b.labels[n] {
                    lab.push(format!("({la},{lb})"));
                }
            }
            lab
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=window {
        faces.push(
            (0..=n)
                .map(|j| a.faces[n][j].kron(&b.faces[n][j]))
                .collect(),
        );
    }
    let mut degens = Vec::new();
    for n in 0..window {
        degens.push(
            (0..=n)
                .map(|j| a.degens[n][j].kron(&b.degens[n][j]))
                .collect(),
        );
    }
    Ok(SimplicialVS {
        field: a.field,
        levels,
        labels,
        faces,
        degens,
        window,
    })
}

/// Normalized chains plus the projection/section data identifying the
/// quotient basis inside each level.
#[derive(Clone, Debug)]
pub struct NormalizedChains {
    pub complex: ChainComplex,
    /// `proj[n]`: level n of the simplicial object onto normalized level n.
    pub proj: Vec<Matrix>,
    /// `lift[n]`: normalized level n back into the simplicial level.
    pub lift: Vec<Matrix>,
}

/// Quotient of each level by the span of all degeneracy images, with the
/// alternating-sum differential induced on the quotient.
pub fn normalized_chains(s: &SimplicialVS) -> Result<NormalizedChains> {
    let field = s.field;
    let mut proj = Vec::new();
    let mut lift = Vec::new();
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    for n in 0..=s.window {
        let mut degenerate: Vec<SparseVec> = Vec::new();
        if n >= 1 {
            for sj in &s.degens[n - 1] {
                for c in 0..sj.cols() {
                    degenerate.push(sj.col(c).clone());
                }
            }
        }
        let q = matrix::quotient_basis(field, s.levels[n], &degenerate)?;
        levels.push(q.dim);
        labels.push(q.kept.iter().map(|i| s.labels[n][*i].clone()).collect());
        proj.push(q.projection);
        lift.push(q.lift);
    }
    let mut diffs = vec![Matrix::zero(field, 0, levels[0])];
    for n in 1..=s.window {
        let d = s.unnormalized_differential(n);
        // Lift first: the section columns are sparse, so this order keeps
        // the intermediate small.
        let m = proj[n - 1].mul(&d.mul(&lift[n])?)?;
        diffs.push(m);
    }
    let complex = ChainComplex::new(field, levels, labels, diffs);
    Ok(NormalizedChains {
        complex,
        proj,
        lift,
    })
}

/// A degree-0 map of complexes, one component per degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    /// `components[n]`: source level n -> target level n.
    pub components: Vec<Matrix>,
}

impl ChainMap {
    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap {
            components: (0..=c.window)
                .map(|n| Matrix::identity(c.field, c.levels[n]))
                .collect(),
        }
    }

    pub fn zero(src: &ChainComplex, tgt: &ChainComplex) -> ChainMap {
        let w = src.window.min(tgt.window);
        ChainMap {
            components: (0..=w)
                .map(|n| Matrix::zero(src.field, tgt.levels[n], src.levels[n]))
                .collect(),
        }
    }

    /// Composite `self . other` (apply `other` first).
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        let w = self.components.len().min(other.components.len());
        let components = (0..w)
            .map(|n| self.components[n].mul(&other.components[n]))
            .collect::<Result<_>>()?;
        Ok(ChainMap { components })
    }

    pub fn scale(&self, c: &crate::field::Scalar) -> ChainMap {
        ChainMap {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        let w = self.components.len().min(other.components.len());
        let components = (0..w)
            .map(|n| self.components[n].add(&other.components[n]))
            .collect::<Result<_>>()?;
        Ok(ChainMap { components })
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        let w = self.components.len().min(other.components.len());
        let components = (0..w)
            .map(|n| self.components[n].sub(&other.components[n]))
            .collect::<Result<_>>()?;
        Ok(ChainMap { components })
    }
}

/// A degree-(+1) map: `components[n]` maps source level `n` to target level
/// `n+1`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub components: Vec<Matrix>,
}

impl ChainHomotopy {
    pub fn zero(src: &ChainComplex, tgt: &ChainComplex) -> ChainHomotopy {
        let w = src.window.min(tgt.window);
        ChainHomotopy {
            components: (0..w)
                .map(|n| Matrix::zero(src.field, tgt.levels[n + 1], src.levels[n]))
                .collect(),
        }
    }

    pub fn scale(&self, c: &crate::field::Scalar) -> ChainHomotopy {
        ChainHomotopy {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &ChainHomotopy) -> Result<ChainHomotopy> {
        let w = self.components.len().min(other.components.len());
        let components = (0..w)
            .map(|n| self.components[n].add(&other.components[n]))
            .collect::<Result<_>>()?;
        Ok(ChainHomotopy { components })
    }

    /// Postcomposition with a chain map: `f . h`.
    pub fn post(&self, f: &ChainMap) -> Result<ChainHomotopy> {
        let components = self
            .components
            .iter()
            .enumerate()
            .filter(|(n, _)| n + 1 < f.components.len())
            .map(|(n, h)| f.components[n + 1].mul(h))
            .collect::<Result<_>>()?;
        Ok(ChainHomotopy { components })
    }

    /// Precomposition with a chain map: `h . f`.
    pub fn pre(&self, f: &ChainMap) -> Result<ChainHomotopy> {
        let w = self.components.len().min(f.components.len());
        let components = (0..w)
            .map(|n| self.components[n].mul(&f.components[n]))
            .collect::<Result<_>>()?;
        Ok(ChainHomotopy { components })
    }
}

/// Checks `f d = d f` in every degree of the common window.
pub fn verify_chain_map(src: &ChainComplex, tgt: &ChainComplex, f: &ChainMap) -> VerifyReport {
    let mut report = VerifyReport::default();
    let window = src.window.min(tgt.window).min(f.components.len() - 1);
    for n in 1..=window {
        let lhs = f.components[n - 1].mul(&src.diffs[n]).unwrap();
        let rhs = tgt.diffs[n].mul(&f.components[n]).unwrap();
        report.record(n, "f d = d f", lhs.sub(&rhs).unwrap());
    }
    report
}

/// Checks `f - g = d h + h d` in every degree expressible in the window.
pub fn verify_homotopy(
    src: &ChainComplex,
    tgt: &ChainComplex,
    f: &ChainMap,
    g: &ChainMap,
    h: &ChainHomotopy,
) -> VerifyReport {
    let mut report = VerifyReport::default();
    if h.components.is_empty() {
        return report;
    }
    // The identity at degree n needs h_n, so the top truncation degree is
    // only checkable when the homotopy reaches it.
    let window = src
        .window
        .min(tgt.window)
        .min(f.components.len() - 1)
        .min(g.components.len() - 1)
        .min(h.components.len() - 1);
    for n in 0..=window {
        let mut rhs = tgt.diffs[n + 1].mul(&h.components[n]).unwrap();
        if n >= 1 {
            rhs = rhs
                .add(&h.components[n - 1].mul(&src.diffs[n]).unwrap())
                .unwrap();
        }
        let lhs = f.components[n].sub(&g.components[n]).unwrap();
        report.record(n, "f - g = d h + h d", lhs.sub(&rhs).unwrap());
    }
    report
}

/// The mapping cone of `f`: level `n` is `src_{n-1} (+) tgt_n`, with
/// differential `(x, y) -> (-d x, d y - f x)`.
pub fn mapping_cone(src: &ChainComplex, tgt: &ChainComplex, f: &ChainMap) -> Result<ChainComplex> {
    let field = src.field;
    let window = tgt.window.min(src.window + 1);
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    for n in 0..=window {
        let sdim = if n >= 1 { src.level_dim(n - 1) } else { 0 };
        levels.push(sdim + tgt.level_dim(n));
        let mut lab: Vec<String> = Vec::new();
        if n >= 1 {
            lab.extend(src.labels[n - 1].iter().map(|l| format!("c[{l}]")));
        }
        lab.extend(tgt.labels[n].iter().cloned());
        labels.push(lab);
    }
    let mut diffs = vec![Matrix::zero(field, 0, levels[0])];
    for n in 1..=window {
        let sdim_hi = src.level_dim(n - 1);
        let sdim_lo = if n >= 2 { src.level_dim(n - 2) } else { 0 };
        let mut m = Matrix::zero(field, levels[n - 1], levels[n]);
        // -d_src on the shifted block.
        if n >= 2 {
            for c in 0..src.diffs[n - 1].cols() {
                for (r, s) in src.diffs[n - 1].col(c) {
                    m.add_entry(*r, c, &s.neg())?;
                }
            }
        }
        // -f_(n-1) from the shifted block into the target block.
        if n - 1 < f.components.len() {
            for c in 0..f.components[n - 1].cols() {
                for (r, s) in f.components[n - 1].col(c) {
                    m.add_entry(sdim_lo + r, c, &s.neg())?;
                }
            }
        }
        // d_tgt on the target block.
        for c in 0..tgt.diffs[n].cols() {
            for (r, s) in tgt.diffs[n].col(c) {
                m.add_entry(sdim_lo + r, sdim_hi + c, s)?;
            }
        }
        diffs.push(m);
    }
    Ok(ChainComplex::new(field, levels, labels, diffs))
}

/// A `(p,q)`-shuffle: the partition of `{1, .., p+q}` into increasing
/// sequences `mu` (length p) and `nu` (length q), with its permutation sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub p: usize,
    pub q: usize,
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub sign: i32,
}

impl Shuffle {
    pub fn new(p: usize, q: usize, mu: Vec<usize>) -> Result<Shuffle> {
        if mu.len() != p || mu.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "mu must be strictly increasing of length p".into(),
            ));
        }
        if mu.iter().any(|&m| m < 1 || m > p + q) {
            return Err(Error::InvalidInput("mu entries out of range".into()));
        }
        let nu: Vec<usize> = (1..=p + q).filter(|i| !mu.contains(i)).collect();
        // sign = parity of the number of inversions between mu and nu.
        let mut inv = 0usize;
        for m in &mu {
            for n in &nu {
                if m > n {
                    inv += 1;
                }
            }
        }
        let sign = if inv % 2 == 0 { 1 } else { -1 };
        Ok(Shuffle { p, q, mu, nu, sign })
    }

    pub fn enumerate(p: usize, q: usize) -> Vec<Shuffle> {
        fn subsets(from: usize, to: usize, len: usize) -> Vec<Vec<usize>> {
            if len == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            if to + 1 < from + len {
                return out;
            }
            for first in from..=(to + 1 - len) {
                for rest in subsets(first + 1, to, len - 1) {
                    let mut v = vec![first];
                    v.extend(rest);
                    out.push(v);
                }
            }
            out
        }
        subsets(1, p + q, p)
            .into_iter()
            .map(|mu| Shuffle::new(p, q, mu).unwrap())
            .collect()
    }
}

/// The Eilenberg-Zilber shuffle map `N(a) (x) N(b) -> N(a x b)` with the
/// product simplicial object and the three normalizations it connects.
pub struct ShuffleMapData {
    pub product: SimplicialVS,
    pub na: NormalizedChains,
    pub nb: NormalizedChains,
    pub nprod: NormalizedChains,
    pub tensor: ChainComplex,
    pub map: ChainMap,
}

/// On `x (x) y` with `x` of simplicial degree p and `y` of degree q, the map
/// is the signed sum over `(p,q)`-shuffles of `s_nu(x) (x) s_mu(y)`.
pub fn shuffle_map(a: &SimplicialVS, b: &SimplicialVS) -> Result<ShuffleMapData> {
    let product = product_simplicial(a, b)?;
    let na = normalized_chains(a)?;
    let nb = normalized_chains(b)?;
    let nprod = normalized_chains(&product)?;
    let tensor = tensor_complex(&na.complex, &nb.complex)?;
    let window = tensor.window;
    let field = a.field;
    let mut components = Vec::new();
    for n in 0..=window {
        let mut m = Matrix::zero(field, nprod.complex.levels[n], tensor.levels[n]);
        let mut offset = 0usize;
        for p in 0..=n {
            let q = n - p;
            let dim_p = na.complex.levels[p];
            let dim_q = nb.complex.levels[q];
            if dim_p * dim_q == 0 {
                continue;
            }
            // Block map: proj . (signed sum of degeneracy pairs) . (lift (x) lift).
            let mut block = Matrix::zero(field, product.levels[n], a.levels[p] * b.levels[q]);
            for sh in Shuffle::enumerate(p, q) {
                let s_nu = a.degeneracy_composite(p, &sh.nu);
                let s_mu = b.degeneracy_composite(q, &sh.mu);
                let term = s_nu.kron(&s_mu);
                let sign = field.from_int(sh.sign as i64);
                block = block.add(&term.scale(&sign))?;
            }
            let lifted = na.lift[p].kron(&nb.lift[q]);
            let full = nprod.proj[n].mul(&block)?.mul(&lifted)?;
            for c in 0..full.cols() {
                for (r, s) in full.col(c) {
                    m.add_entry(*r, offset + c, s)?;
                }
            }
            offset += dim_p * dim_q;
        }
        components.push(m);
    }
    Ok(ShuffleMapData {
        product,
        na,
        nb,
        nprod,
        tensor,
        map: ChainMap { components },
    })
}

/// A constant simplicial vector space: every level the same space, all faces
/// and degeneracies the identity.
pub fn constant_simplicial(field: ScalarField, dim: usize, window: usize) -> SimplicialVS {
    let levels = vec![dim; window + 1];
    let labels: Vec<Vec<String>> = (0..=window)
        .map(|_| (0..dim).map(|i| format!("e{i}")).collect())
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=window {
        faces.push((0..=n).map(|_| Matrix::identity(field, dim)).collect());
    }
    let mut degens = Vec::new();
    for n in 0..window {
        degens.push((0..=n).map(|_| Matrix::identity(field, dim)).collect());
    }
    SimplicialVS {
        field,
        levels,
        labels,
        faces,
        degens,
        window,
    }
}
