//! Finite groups and finite-dimensional algebras: group, function and
//! twisted group algebras, Drinfeld doubles, bimodules, Hochschild chain
//! complexes, and symbolic bar-resolution simplices.

use std::collections::BTreeMap;

use crate::chains::{normalized_chains, NormalizedChains, SimplicialVS};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::matrix::{self, sparse_axpy, Matrix, SparseVec};

/// A finite group given by its multiplication table. `table[i][j]` is the
/// product `g_i g_j` (apply `g_j` first when elements are maps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FinGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<FinGroup> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(
                "multiplication table is not square".into(),
            ));
        }
        if table.iter().any(|r| r.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
            .ok_or_else(|| Error::axiom("identity law", "no two-sided identity element"))?;
        let g = FinGroup {
            labels,
            table,
            identity,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.order();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.mul(self.mul(i, j), k) != self.mul(i, self.mul(j, k)) {
                        return Err(Error::axiom(
                            "associativity",
                            format!(
                                "triple ({}, {}, {})",
                                self.labels[i], self.labels[j], self.labels[k]
                            ),
                        ));
                    }
                }
            }
            if self.try_inverse(i).is_none() {
                return Err(Error::axiom(
                    "inverses",
                    format!("{} has no inverse", self.labels[i]),
                ));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    fn try_inverse(&self, i: usize) -> Option<usize> {
        (0..self.order())
            .find(|&j| self.mul(i, j) == self.identity && self.mul(j, i) == self.identity)
    }

    pub fn inv(&self, i: usize) -> usize {
        self.try_inverse(i)
            .expect("validated group element has an inverse")
    }

    /// `k g k^-1`.
    pub fn conjugate(&self, k: usize, g: usize) -> usize {
        self.mul(self.mul(k, g), self.inv(k))
    }

    /// The cyclic group of order `n` with labels `0..n`.
    pub fn cyclic(n: usize) -> FinGroup {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FinGroup::new(labels, table).expect("cyclic group is a group")
    }

    /// Direct product with pair labels `a x b`.
    pub fn product(a: &FinGroup, b: &FinGroup) -> FinGroup {
        let mut labels = Vec::new();
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(format!("{la}x{lb}"));
            }
        }
        let nb = b.order();
        let n = a.order() * nb;
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (ia, ib) = (i / nb, i % nb);
                let (ja, jb) = (j / nb, j % nb);
                table[i][j] = a.mul(ia, ja) * nb + b.mul(ib, jb);
            }
        }
        FinGroup::new(labels, table).expect("product of groups is a group")
    }

    /// The symmetric group on three letters, labeled in cycle notation.
    pub fn symmetric3() -> FinGroup {
        // Permutations of {1,2,3} listed as images (p(1), p(2), p(3)).
        let perms: Vec<[usize; 3]> = vec![
            [1, 2, 3],
            [2, 1, 3],
            [3, 2, 1],
            [1, 3, 2],
            [2, 3, 1],
            [3, 1, 2],
        ];
        let labels = vec![
            "id".into(),
            "(12)".into(),
            "(13)".into(),
            "(23)".into(),
            "(123)".into(),
            "(132)".into(),
        ];
        let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
            // (p q)(x) = p(q(x)).
            [p[q[0] - 1], p[q[1] - 1], p[q[2] - 1]]
        };
        let n = perms.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = compose(&perms[i], &perms[j]);
                table[i][j] = perms.iter().position(|p| *p == c).unwrap();
            }
        }
        FinGroup::new(labels, table).expect("S3 is a group")
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A normalized 2-cocycle on a finite group with values in `k^x`.
#[derive(Clone, Debug)]
pub struct Cocycle2 {
    pub group: FinGroup,
    pub values: Vec<Vec<Scalar>>,
}

impl Cocycle2 {
    pub fn new(group: FinGroup, values: Vec<Vec<Scalar>>) -> Result<Cocycle2> {
        let c = Cocycle2 { group, values };
        c.validate()?;
        Ok(c)
    }

    pub fn trivial(group: FinGroup, field: ScalarField) -> Cocycle2 {
        let n = group.order();
        Cocycle2 {
            group,
            values: vec![vec![field.one(); n]; n],
        }
    }

    pub fn get(&self, g: usize, h: usize) -> &Scalar {
        &self.values[g][h]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let e = self.group.identity;
        for g in 0..n {
            for h in 0..n {
                if self.values[g][h].is_zero() {
                    return Err(Error::axiom(
                        "cocycle values in k^x",
                        format!(
                            "xi({}, {}) = 0",
                            self.group.labels[g], self.group.labels[h]
                        ),
                    ));
                }
            }
        }
        for g in 0..n {
            if !self.values[e][g].is_one() || !self.values[g][e].is_one() {
                return Err(Error::axiom(
                    "cocycle normalization",
                    format!("xi(e, {0}) or xi({0}, e) != 1", self.group.labels[g]),
                ));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for l in 0..n {
                    // xi(g,h) xi(gh,l) = xi(h,l) xi(g,hl)
                    let lhs = self.values[g][h].mul(&self.values[self.group.mul(g, h)][l]);
                    let rhs = self.values[h][l].mul(&self.values[g][self.group.mul(h, l)]);
                    if lhs != rhs {
                        return Err(Error::axiom(
                            "cocycle identity",
                            format!(
                                "triple ({}, {}, {})",
                                self.group.labels[g], self.group.labels[h], self.group.labels[l]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The multi-element value with `<h_1>..<h_n> = xi(h_1,..,h_n) <h_1..h_n>`;
    /// empty and singleton lists give 1.
    pub fn multi(&self, elements: &[usize]) -> Scalar {
        let field = self.values[0][0].field();
        let mut acc = field.one();
        if elements.len() < 2 {
            return acc;
        }
        let mut prod = elements[0];
        for h in &elements[1..] {
            acc = acc.mul(&self.values[prod][*h]);
            prod = self.group.mul(prod, *h);
        }
        acc
    }
}

/// A finite-dimensional associative unital algebra with structure constants
/// over a fixed basis.
#[derive(Clone, Debug)]
pub struct FinAlgebra {
    pub field: ScalarField,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<Scalar>,
    /// `mult[i][j]` is the sparse expansion of `e_i e_j`.
    pub mult: Vec<Vec<SparseVec>>,
}

impl FinAlgebra {
    pub fn new(
        field: ScalarField,
        basis: Vec<String>,
        unit: Vec<Scalar>,
        mult: Vec<Vec<SparseVec>>,
    ) -> Result<FinAlgebra> {
        let dim = basis.len();
        if unit.len() != dim || mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(
                "algebra data sizes do not match the basis".into(),
            ));
        }
        let a = FinAlgebra {
            field,
            dim,
            basis,
            unit,
            mult,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let u = self.unit_vec();
        for i in 0..self.dim {
            let ei: SparseVec = vec![(i, self.field.one())];
            if self.mul_vec(&u, &ei) != ei || self.mul_vec(&ei, &u) != ei {
                return Err(Error::axiom(
                    "unit law",
                    format!("1 * {0} or {0} * 1 != {0}", self.basis[i]),
                ));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let eij = self.mult[i][j].clone();
                for k in 0..self.dim {
                    let ek: SparseVec = vec![(k, self.field.one())];
                    let lhs = self.mul_vec(&eij, &ek);
                    let rhs = self.mul_vec(&vec![(i, self.field.one())], &self.mult[j][k]);
                    if lhs != rhs {
                        return Err(Error::axiom(
                            "associativity",
                            format!(
                                "triple ({}, {}, {})",
                                self.basis[i], self.basis[j], self.basis[k]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn unit_vec(&self) -> SparseVec {
        self.unit
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(i, s)| (i, s.clone()))
            .collect()
    }

    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let c = a.mul(b);
                sparse_axpy(&mut acc, &c, &self.mult[*i][*j]);
            }
        }
        acc
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_mult(&self, x: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            m.set_col(j, self.mul_vec(x, &vec![(j, self.field.one())]));
        }
        m
    }

    /// Matrix of right multiplication by `x`.
    pub fn right_mult(&self, x: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            m.set_col(j, self.mul_vec(&vec![(j, self.field.one())], x));
        }
        m
    }

    /// The opposite algebra (reversed multiplication).
    pub fn opposite(&self) -> FinAlgebra {
        let mut mult = vec![vec![Vec::new(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                mult[i][j] = self.mult[j][i].clone();
            }
        }
        FinAlgebra {
            field: self.field,
            dim: self.dim,
            basis: self.basis.clone(),
            unit: self.unit.clone(),
            mult,
        }
    }

    /// The full matrix algebra `M_n(k)` with basis `E_{ij}`.
    pub fn matrix_algebra(field: ScalarField, n: usize) -> FinAlgebra {
        let dim = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let basis = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
            .collect();
        let mut unit = vec![field.zero(); dim];
        for i in 0..n {
            unit[idx(i, i)] = field.one();
        }
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    mult[idx(i, j)][idx(j, l)] = vec![(idx(i, l), field.one())];
                }
            }
        }
        FinAlgebra::new(field, basis, unit, mult).expect("matrix algebra is associative")
    }
}

/// The group algebra `k[G]`.
pub fn group_algebra(field: ScalarField, g: &FinGroup) -> FinAlgebra {
    let n = g.order();
    let mut unit = vec![field.zero(); n];
    unit[g.identity] = field.one();
    let mult = (0..n)
        .map(|i| (0..n).map(|j| vec![(g.mul(i, j), field.one())]).collect())
        .collect();
    FinAlgebra::new(field, g.labels.clone(), unit, mult).expect("group algebra is associative")
}

/// The commutative algebra `k(G)` of functions on `G`, on the idempotent
/// basis of delta functions.
pub fn function_algebra(field: ScalarField, g: &FinGroup) -> FinAlgebra {
    let n = g.order();
    let basis = g.labels.iter().map(|l| format!("d_{l}")).collect();
    let unit = vec![field.one(); n];
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![(i, field.one())]
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    FinAlgebra::new(field, basis, unit, mult).expect("function algebra is associative")
}

/// The twisted group algebra `k_xi[G]` with `<g><h> = xi(g,h) <gh>`.
pub fn twisted_group_algebra(field: ScalarField, xi: &Cocycle2) -> Result<FinAlgebra> {
    xi.validate()?;
    let g = &xi.group;
    let n = g.order();
    let mut unit = vec![field.zero(); n];
    unit[g.identity] = field.one();
    let basis = g.labels.iter().map(|l| format!("<{l}>")).collect();
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| vec![(g.mul(i, j), xi.get(i, j).clone())])
                .collect()
        })
        .collect();
    FinAlgebra::new(field, basis, unit, mult)
}

/// The Drinfeld double `D(G)` on the basis `d_a (x) b` with product
/// `(d_a (x) b)(d_c (x) d) = [a = b c b^-1] d_a (x) bd`.
pub fn drinfeld_double(field: ScalarField, g: &FinGroup) -> FinAlgebra {
    let n = g.order();
    let dim = n * n;
    let idx = |a: usize, b: usize| a * n + b;
    let basis: Vec<String> = (0..dim)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            format!("d_{}(x){}", g.labels[a], g.labels[b])
        })
        .collect();
    // Unit = sum_a d_a (x) e.
    let mut unit = vec![field.zero(); dim];
    for a in 0..n {
        unit[idx(a, g.identity)] = field.one();
    }
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == g.conjugate(b, c) {
                        mult[idx(a, b)][idx(c, d)] = vec![(idx(a, g.mul(b, d)), field.one())];
                    }
                }
            }
        }
    }
    FinAlgebra::new(field, basis, unit, mult).expect("Drinfeld double is associative")
}

/// A bimodule over a [`FinAlgebra`], given by commuting left and right
/// action matrices per algebra basis element.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    pub labels: Vec<String>,
    /// `left[i]`: action of basis element `e_i` on the left.
    pub left: Vec<Matrix>,
    /// `right[i]`: action of basis element `e_i` on the right.
    pub right: Vec<Matrix>,
}

impl Bimodule {
    /// The regular bimodule: the algebra acting on itself.
    pub fn regular(a: &FinAlgebra) -> Bimodule {
        let left = (0..a.dim)
            .map(|i| a.left_mult(&vec![(i, a.field.one())]))
            .collect();
        let right = (0..a.dim)
            .map(|i| a.right_mult(&vec![(i, a.field.one())]))
            .collect();
        Bimodule {
            dim: a.dim,
            labels: a.basis.clone(),
            left,
            right,
        }
    }

    fn act(mats: &[Matrix], x: &SparseVec, field: ScalarField, dim: usize) -> Matrix {
        let mut m = Matrix::zero(field, dim, dim);
        for (i, c) in x {
            m = m.add(&mats[*i].scale(c)).unwrap();
        }
        m
    }

    pub fn left_act(&self, a: &FinAlgebra, x: &SparseVec) -> Matrix {
        Bimodule::act(&self.left, x, a.field, self.dim)
    }

    pub fn right_act(&self, a: &FinAlgebra, x: &SparseVec) -> Matrix {
        Bimodule::act(&self.right, x, a.field, self.dim)
    }

    /// Validates the bimodule axioms eagerly: unital actions, the left
    /// action multiplicative, the right action antimultiplicative as a map,
    /// actions commuting.
    pub fn validate(&self, a: &FinAlgebra) -> Result<()> {
        if self.left.len() != a.dim || self.right.len() != a.dim {
            return Err(Error::InvalidInput(
                "bimodule action tables do not match the algebra basis".into(),
            ));
        }
        let id = Matrix::identity(a.field, self.dim);
        let u = a.unit_vec();
        if self.left_act(a, &u) != id || self.right_act(a, &u) != id {
            return Err(Error::axiom(
                "bimodule unit law",
                "1 does not act as identity",
            ));
        }
        for i in 0..a.dim {
            for j in 0..a.dim {
                let lhs = self.left[i].mul(&self.left[j])?;
                let rhs = self.left_act(a, &a.mult[i][j]);
                if lhs != rhs {
                    return Err(Error::axiom(
                        "left action multiplicativity",
                        format!("pair ({}, {})", a.basis[i], a.basis[j]),
                    ));
                }
                // (m . e_i) . e_j = m . (e_i e_j)
                let lhs = self.right[j].mul(&self.right[i])?;
                let rhs = self.right_act(a, &a.mult[i][j]);
                if lhs != rhs {
                    return Err(Error::axiom(
                        "right action multiplicativity",
                        format!("pair ({}, {})", a.basis[i], a.basis[j]),
                    ));
                }
                let lr = self.left[i].mul(&self.right[j])?;
                let rl = self.right[j].mul(&self.left[i])?;
                if lr != rl {
                    return Err(Error::axiom(
                        "bimodule actions commute",
                        format!("pair ({}, {})", a.basis[i], a.basis[j]),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The truncated Hochschild complex of `A` with coefficients in `M`,
/// normalized by the unit-insertion degeneracies. The simplicial object is
/// kept alongside the normalized complex.
#[derive(Debug)]
pub struct HochschildComplex {
    pub simplicial: SimplicialVS,
    pub normalized: NormalizedChains,
}

impl HochschildComplex {
    pub fn complex(&self) -> &crate::chains::ChainComplex {
        &self.normalized.complex
    }
}

/// Builds the simplicial object with level `n` equal to `A^(x n) (x) M`,
/// face maps by the right action, internal multiplications and the left
/// action, and degeneracies inserting the unit.
pub fn hochschild_complex(
    a: &FinAlgebra,
    m: &Bimodule,
    window: usize,
    budget: usize,
) -> Result<HochschildComplex> {
    if window < 2 {
        return Err(Error::InvalidInput("window must be at least 2".into()));
    }
    m.validate(a)?;
    let field = a.field;
    let da = a.dim;
    let dm = m.dim;
    // Level dims da^n * dm; indices mixed-radix, a_1 major and m minor.
    let mut levels = Vec::new();
    for n in 0..=window {
        let mut dim = dm;
        for _ in 0..n {
            dim = dim.checked_mul(da).ok_or(Error::BudgetExceeded {
                level: n,
                size: usize::MAX,
                budget,
            })?;
        }
        if dim > budget {
            return Err(Error::BudgetExceeded {
                level: n,
                size: dim,
                budget,
            });
        }
        levels.push(dim);
    }
    let split = |n: usize, mut idx: usize| -> (Vec<usize>, usize) {
        let mm = idx % dm;
        idx /= dm;
        let mut parts = vec![0usize; n];
        for i in (0..n).rev() {
            parts[i] = idx % da;
            idx /= da;
        }
        (parts, mm)
    };
    let join = |parts: &[usize], mm: usize| -> usize {
        let mut idx = 0usize;
        for p in parts {
            idx = idx * da + p;
        }
        idx * dm + mm
    };
    let labels: Vec<Vec<String>> = (0..=window)
        .map(|n| {
            (0..levels[n])
                .map(|idx| {
                    let (parts, mm) = split(n, idx);
                    let mut s = String::new();
                    for p in parts {
                        s.push_str(&a.basis[p]);
                        s.push('|');
                    }
                    s.push_str(&format!("[{}]", m.labels[mm]));
                    s
                })
                .collect()
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=window {
        let mut fs = Vec::new();
        for j in 0..=n {
            let mut mat = Matrix::zero(field, levels[n - 1], levels[n]);
            for col in 0..levels[n] {
                let (parts, mm) = split(n, col);
                if j == 0 {
                    // Right action of a_1 on m.
                    let rest = &parts[1..];
                    for (k, c) in m.right[parts[0]].col(mm) {
                        mat.add_entry(join(rest, *k), col, c)?;
                    }
                } else if j < n {
                    // Multiply a_j a_{j+1}.
                    for (k, c) in &a.mult[parts[j - 1]][parts[j]] {
                        let mut np = Vec::with_capacity(n - 1);
                        np.extend_from_slice(&parts[..j - 1]);
                        np.push(*k);
                        np.extend_from_slice(&parts[j + 1..]);
                        mat.add_entry(join(&np, mm), col, c)?;
                    }
                } else {
                    // Left action of a_n on m.
                    let rest = &parts[..n - 1];
                    for (k, c) in m.left[parts[n - 1]].col(mm) {
                        mat.add_entry(join(rest, *k), col, c)?;
                    }
                }
            }
            fs.push(mat);
        }
        faces.push(fs);
    }
    let mut degens = Vec::new();
    for n in 0..window {
        let mut ds = Vec::new();
        for j in 0..=n {
            let mut mat = Matrix::zero(field, levels[n + 1], levels[n]);
            for col in 0..levels[n] {
                let (parts, mm) = split(n, col);
                // Insert the unit vector at tensor slot j.
                for (k, c) in a.unit.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut np = Vec::with_capacity(n + 1);
                    np.extend_from_slice(&parts[..j]);
                    np.push(k);
                    np.extend_from_slice(&parts[j..]);
                    mat.add_entry(join(&np, mm), col, c)?;
                }
            }
            ds.push(mat);
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
    let normalized = normalized_chains(&simplicial)?;
    Ok(HochschildComplex {
        simplicial,
        normalized,
    })
}

/// Dimension and basis of `A / [A, A]`, an independent oracle for `H_0` of
/// the Hochschild complex with regular coefficients.
pub struct CommutatorQuotient {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub projection: Matrix,
}

pub fn commutator_quotient(a: &FinAlgebra) -> Result<CommutatorQuotient> {
    let mut gens: Vec<SparseVec> = Vec::new();
    for i in 0..a.dim {
        for j in 0..a.dim {
            let mut v = a.mult[i][j].clone();
            let minus_one = a.field.one().neg();
            sparse_axpy(&mut v, &minus_one, &a.mult[j][i]);
            if !v.is_empty() {
                gens.push(v);
            }
        }
    }
    let q = matrix::quotient_basis(a.field, a.dim, &gens)?;
    Ok(CommutatorQuotient {
        dim: q.dim,
        basis_labels: q.kept.iter().map(|i| a.basis[*i].clone()).collect(),
        projection: q.projection,
    })
}

/// A node of a nested-bracket word: a leaf is an algebra basis element, a
/// group is one bracket pair around a product of equal-depth nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BarNode {
    Leaf(usize),
    Group(Vec<BarNode>),
}

impl BarNode {
    fn depth(&self) -> Option<usize> {
        match self {
            BarNode::Leaf(_) => Some(0),
            BarNode::Group(children) => {
                if children.is_empty() {
                    return None;
                }
                let d = children[0].depth()?;
                for c in &children[1..] {
                    if c.depth()? != d {
                        return None;
                    }
                }
                Some(d + 1)
            }
        }
    }

    fn render(&self, basis: &[String]) -> String {
        match self {
            BarNode::Leaf(i) => basis[*i].clone(),
            BarNode::Group(children) => {
                let inner: String = children.iter().map(|c| c.render(basis)).collect();
                format!("({inner})")
            }
        }
    }
}

/// A basis simplex of the bar resolution: a product of depth-`p` bracket
/// words whose leaves are algebra basis elements. The tensor algebra is
/// never materialized; faces and degeneracies rewrite the words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BarSimplex {
    pub depth: usize,
    pub factors: Vec<BarNode>,
}

/// A formal linear combination of bar simplices.
pub type BarChain = Vec<(BarSimplex, Scalar)>;

pub fn bar_chain_add(acc: &mut BarChain, simplex: BarSimplex, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    match acc.iter_mut().find(|(s, _)| *s == simplex) {
        Some((_, c)) => {
            *c = c.add(&coeff);
            if c.is_zero() {
                acc.retain(|(_, c)| !c.is_zero());
            }
        }
        None => acc.push((simplex, coeff)),
    }
}

impl BarSimplex {
    pub fn new(depth: usize, factors: Vec<BarNode>) -> Result<BarSimplex> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("empty bar word".into()));
        }
        for f in &factors {
            match f.depth() {
                Some(d) if d == depth => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "factor is not a well-formed depth-{depth} word"
                    )))
                }
            }
        }
        Ok(BarSimplex { depth, factors })
    }

    /// The depth-0 word `(a_1)(a_2)...(a_k)`.
    pub fn letters(indices: &[usize]) -> BarSimplex {
        BarSimplex {
            depth: 0,
            factors: indices.iter().map(|i| BarNode::Leaf(*i)).collect(),
        }
    }

    pub fn render(&self, basis: &[String]) -> String {
        self.factors
            .iter()
            .map(|f| match f {
                BarNode::Leaf(i) => format!("({})", basis[*i]),
                g => g.render(basis),
            })
            .collect()
    }
}

fn dissolve_at(node: &BarNode, layer: usize) -> Vec<BarNode> {
    // Removes the bracket layer `layer` levels below this node.
    match node {
        BarNode::Leaf(_) => unreachable!("dissolve below a leaf"),
        BarNode::Group(children) => {
            if layer == 0 {
                children.clone()
            } else {
                vec![BarNode::Group(
                    children
                        .iter()
                        .flat_map(|c| dissolve_at(c, layer - 1))
                        .collect(),
                )]
            }
        }
    }
}

fn multiply_innermost(a: &FinAlgebra, node: &BarNode) -> Vec<(BarNode, Scalar)> {
    // Replaces each innermost group (a_1)..(a_k) by the leaf a_1 .. a_k.
    match node {
        BarNode::Leaf(_) => unreachable!("multiply below a leaf"),
        BarNode::Group(children) => {
            if children.iter().all(|c| matches!(c, BarNode::Leaf(_))) {
                let mut prod: SparseVec = a.unit_vec();
                for c in children {
                    if let BarNode::Leaf(i) = c {
                        prod = a.mul_vec(&prod, &vec![(*i, a.field.one())]);
                    }
                }
                prod.into_iter()
                    .map(|(k, c)| (BarNode::Leaf(k), c))
                    .collect()
            } else {
                let mut acc: Vec<(Vec<BarNode>, Scalar)> = vec![(Vec::new(), a.field.one())];
                for c in children {
                    let expanded = multiply_innermost(a, c);
                    let mut next = Vec::new();
                    for (prefix, coeff) in &acc {
                        for (node, c2) in &expanded {
                            let mut p = prefix.clone();
                            p.push(node.clone());
                            next.push((p, coeff.mul(c2)));
                        }
                    }
                    acc = next;
                }
                acc.into_iter()
                    .map(|(children, c)| (BarNode::Group(children), c))
                    .collect()
            }
        }
    }
}

/// The `j`-th face deletes the `j`-th bracket layer, counted from outside to
/// inside; the innermost face multiplies in the algebra and may return a
/// formal sum.
pub fn bar_face(a: &FinAlgebra, b: &BarSimplex, j: usize) -> Result<BarChain> {
    if b.depth == 0 || j > b.depth {
        return Err(Error::InvalidInput(format!(
            "face index {j} out of range for depth {}",
            b.depth
        )));
    }
    if j < b.depth {
        let factors: Vec<BarNode> = b.factors.iter().flat_map(|f| dissolve_at(f, j)).collect();
        let s = BarSimplex::new(b.depth - 1, factors)?;
        Ok(vec![(s, a.field.one())])
    } else {
        let mut acc: Vec<(Vec<BarNode>, Scalar)> = vec![(Vec::new(), a.field.one())];
        for f in &b.factors {
            let expanded = multiply_innermost(a, f);
            let mut next = Vec::new();
            for (prefix, coeff) in &acc {
                for (node, c2) in &expanded {
                    let mut p = prefix.clone();
                    p.push(node.clone());
                    next.push((p, coeff.mul(c2)));
                }
            }
            acc = next;
        }
        let mut out: BarChain = Vec::new();
        for (factors, c) in acc {
            bar_chain_add(&mut out, BarSimplex::new(b.depth - 1, factors)?, c);
        }
        Ok(out)
    }
}

fn wrap_at(node: &BarNode, layer: usize) -> BarNode {
    if layer == 0 {
        BarNode::Group(vec![node.clone()])
    } else {
        match node {
            BarNode::Leaf(_) => unreachable!("wrap below a leaf"),
            BarNode::Group(children) => {
                BarNode::Group(children.iter().map(|c| wrap_at(c, layer - 1)).collect())
            }
        }
    }
}

/// The `j`-th degeneracy inserts a bracket layer at depth `j`.
pub fn bar_degeneracy(b: &BarSimplex, j: usize) -> Result<BarSimplex> {
    if j > b.depth {
        return Err(Error::InvalidInput(format!(
            "degeneracy index {j} out of range for depth {}",
            b.depth
        )));
    }
    let factors = b.factors.iter().map(|f| wrap_at(f, j)).collect();
    BarSimplex::new(b.depth + 1, factors)
}

/// Applies a face to a formal chain.
pub fn bar_face_chain(a: &FinAlgebra, chain: &BarChain, j: usize) -> Result<BarChain> {
    let mut out: BarChain = Vec::new();
    for (s, c) in chain {
        for (t, c2) in bar_face(a, s, j)? {
            bar_chain_add(&mut out, t, c.mul(&c2));
        }
    }
    Ok(out)
}

/// Checks that `f` (given on basis elements) is an algebra isomorphism:
/// invertible, unital, multiplicative.
pub fn verify_algebra_isomorphism(a: &FinAlgebra, b: &FinAlgebra, f: &Matrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            context: "algebra isomorphism".into(),
            expected: a.dim,
            found: b.dim,
        });
    }
    if matrix::rank(f) != a.dim {
        return Err(Error::axiom("isomorphism invertibility", "map is singular"));
    }
    let fu = f.apply(&a.unit_vec());
    if fu != b.unit_vec() {
        return Err(Error::axiom("isomorphism unit", "f(1) != 1"));
    }
    for i in 0..a.dim {
        for j in 0..a.dim {
            let lhs = f.apply(&a.mult[i][j]);
            let rhs = b.mul_vec(
                &f.apply(&vec![(i, a.field.one())]),
                &f.apply(&vec![(j, a.field.one())]),
            );
            if lhs != rhs {
                return Err(Error::axiom(
                    "isomorphism multiplicativity",
                    format!("pair ({}, {})", a.basis[i], a.basis[j]),
                ));
            }
        }
    }
    Ok(())
}

/// Conjugacy class count by orbit enumeration, used as an oracle.
pub fn conjugacy_class_count(g: &FinGroup) -> usize {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if seen[x] {
            continue;
        }
        classes += 1;
        for k in 0..n {
            seen[g.conjugate(k, x)] = true;
        }
    }
    classes
}

/// Index map from labels, shared by the schema validators.
pub fn label_index(labels: &[String]) -> BTreeMap<&str, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect()
}
