//! Homotopy coherent projective actions: central-extension data with
//! multi-element cocycle calculus, lift normalization along a surjection,
//! the descent evaluator on bar simplices of a twisted group algebra, and
//! the twist-insertion simplicial homotopy.

use crate::algebra::{Cocycle2, FinGroup};
use crate::chains::{
    verify_homotopy, ChainComplex, ChainHomotopy, ChainMap, VerifyReport,
};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lincat::{hm_complex, CatBimodule, HmComplex, LinearCategory};
use crate::matrix::{self, Matrix, SparseVec};

/// A normalized integer-valued 2-cocycle, the classifying cocycle of a
/// rank-one central extension with respect to a set-theoretic section.
#[derive(Clone, Debug)]
pub struct IntCocycle2 {
    pub group: FinGroup,
    pub values: Vec<Vec<i64>>,
}

impl IntCocycle2 {
    pub fn new(group: FinGroup, values: Vec<Vec<i64>>) -> Result<IntCocycle2> {
        let c = IntCocycle2 { group, values };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let e = self.group.identity;
        for g in 0..n {
            if self.values[e][g] != 0 || self.values[g][e] != 0 {
                return Err(Error::axiom(
                    "integer cocycle normalization",
                    format!("alpha(e, {0}) or alpha({0}, e) != 0", self.group.labels[g]),
                ));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for l in 0..n {
                    let lhs = self.values[g][h] + self.values[self.group.mul(g, h)][l];
                    let rhs = self.values[h][l] + self.values[g][self.group.mul(h, l)];
                    if lhs != rhs {
                        return Err(Error::axiom(
                            "integer cocycle identity",
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

    pub fn get(&self, g: usize, h: usize) -> i64 {
        self.values[g][h]
    }

    /// The multi-element value: `s(h_1)..s(h_n) = tau^alpha(h_1,..,h_n)
    /// s(h_1..h_n)`, computed by the left-nested recursion
    /// `alpha(h_1, h_2) + alpha(h_1 h_2, h_3, .., h_n)`.
    pub fn multi(&self, elements: &[usize]) -> i64 {
        if elements.len() < 2 {
            return 0;
        }
        let mut acc = 0i64;
        let mut prod = elements[0];
        for h in &elements[1..] {
            acc += self.values[prod][*h];
            prod = self.group.mul(prod, *h);
        }
        acc
    }

    /// Right-nested evaluation `alpha(h_1, h_2 .. h_n) + alpha(h_2,..,h_n)`,
    /// used as an independent route for the bracketing-independence check.
    pub fn multi_right_nested(&self, elements: &[usize]) -> i64 {
        if elements.len() < 2 {
            return 0;
        }
        let tail = &elements[1..];
        let mut prod = tail[0];
        for h in &tail[1..] {
            prod = self.group.mul(prod, *h);
        }
        self.values[elements[0]][prod] + self.multi_right_nested(tail)
    }
}

/// The cocycle `xi(a, b) = base^alpha(a, b)` for an integer cocycle.
pub fn power_cocycle(alpha: &IntCocycle2, base: &Scalar) -> Result<Cocycle2> {
    let n = alpha.group.order();
    let values = (0..n)
        .map(|a| (0..n).map(|b| base.pow(alpha.get(a, b))).collect())
        .collect();
    Cocycle2::new(alpha.group.clone(), values)
}

/// Data of a rank-one central extension `0 -> Z -> G -> H -> 0`: the
/// quotient, the classifying cocycle of a fixed section with `s(e) = e`,
/// and the projectivity cocycle over the quotient. `G` is never
/// materialized; its elements are the pairs `tau^k s(h)`.
#[derive(Clone, Debug)]
pub struct CentralExtensionData {
    pub quotient: FinGroup,
    pub alpha: IntCocycle2,
    pub xi: Cocycle2,
}

/// An element `tau^k s(h)` of the middle group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub tau_power: i64,
    pub h: usize,
}

impl CentralExtensionData {
    pub fn new(quotient: FinGroup, alpha: IntCocycle2, xi: Cocycle2) -> Result<CentralExtensionData> {
        alpha.validate()?;
        xi.validate()?;
        if alpha.group != quotient || xi.group != quotient {
            return Err(Error::InvalidInput(
                "cocycles must live on the quotient group".into(),
            ));
        }
        Ok(CentralExtensionData {
            quotient,
            alpha,
            xi,
        })
    }

    /// The extension `0 -> Z --x m--> Z -> Z/m -> 0` with section
    /// `s(j) = j` on representatives `{0, .., m-1}`: the classifying
    /// cocycle is `alpha(a, b) = floor((a + b) / m)`.
    pub fn cyclic_mod(m: usize, xi: Cocycle2) -> Result<CentralExtensionData> {
        let h = FinGroup::cyclic(m);
        let values = (0..m)
            .map(|a| (0..m).map(|b| ((a + b) / m) as i64).collect())
            .collect();
        let alpha = IntCocycle2::new(h.clone(), values)?;
        CentralExtensionData::new(h, alpha, xi)
    }

    pub fn section(&self, h: usize) -> ExtElement {
        ExtElement { tau_power: 0, h }
    }

    pub fn tau(&self) -> ExtElement {
        ExtElement {
            tau_power: 1,
            h: self.quotient.identity,
        }
    }

    pub fn mul(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        ExtElement {
            tau_power: a.tau_power + b.tau_power + self.alpha.get(a.h, b.h),
            h: self.quotient.mul(a.h, b.h),
        }
    }
}

/// A projective action descending along a rank-one central extension: lift
/// chain maps for the section values and for `tau`, plus the homotopy `L`
/// from `rho(tau)` to the identity, commuting with every lift.
#[derive(Clone, Debug)]
pub struct ProjectiveActionData {
    pub complex: ChainComplex,
    /// `rho[h]`: the lift of the section value `s(h)`.
    pub rho: Vec<ChainMap>,
    pub rho_tau: ChainMap,
    pub rho_tau_inv: ChainMap,
    pub ell: ChainHomotopy,
}

impl ProjectiveActionData {
    pub fn new(
        complex: ChainComplex,
        rho: Vec<ChainMap>,
        rho_tau: ChainMap,
        ell: ChainHomotopy,
    ) -> Result<ProjectiveActionData> {
        let rho_tau_inv = ChainMap {
            components: rho_tau
                .components
                .iter()
                .map(|m| {
                    matrix::inverse(m).ok_or_else(|| {
                        Error::axiom("lift invertibility", "rho(tau) is singular")
                    })
                })
                .collect::<Result<_>>()?,
        };
        Ok(ProjectiveActionData {
            complex,
            rho,
            rho_tau,
            rho_tau_inv,
            ell,
        })
    }

    pub fn rho_tau_power(&self, k: i64) -> ChainMap {
        let base = if k >= 0 {
            &self.rho_tau
        } else {
            &self.rho_tau_inv
        };
        let mut acc = ChainMap::identity(&self.complex);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(base).unwrap();
        }
        acc
    }

    /// The power `L^(k)` with `rho(tau)^k - id = d L^(k) + L^(k) d`:
    /// `(1 + rho(tau) + .. + rho(tau)^(k-1)) . L` for `k >= 0`, and the
    /// matching negative-power telescope otherwise.
    pub fn ell_power(&self, k: i64) -> ChainHomotopy {
        let zero = ChainHomotopy::zero(&self.complex, &self.complex);
        let mut acc = zero;
        if k >= 0 {
            for i in 0..k {
                let term = self.ell.post(&self.rho_tau_power(i)).unwrap();
                acc = acc.add(&term).unwrap();
            }
        } else {
            for i in 1..=(-k) {
                let term = self.ell.post(&self.rho_tau_power(-i)).unwrap();
                acc = acc.add(&term.scale(&self.complex.field.one().neg())).unwrap();
            }
        }
        acc
    }

    /// Checks the commutation hypothesis, invertibility, the homotopy
    /// equation for `L`, and the `pi^* xi`-projectivity of the lifts.
    pub fn validate(&self, ext: &CentralExtensionData) -> Result<()> {
        let h_order = ext.quotient.order();
        if self.rho.len() != h_order {
            return Err(Error::InvalidInput(
                "one lift per quotient element is required".into(),
            ));
        }
        for (h, r) in self.rho.iter().enumerate() {
            for (n, comp) in r.components.iter().enumerate() {
                if matrix::inverse(comp).is_none() {
                    return Err(Error::axiom(
                        "lift invertibility",
                        format!("rho(s {}) degree {n}", ext.quotient.labels[h]),
                    ));
                }
            }
            let rep = crate::chains::verify_chain_map(&self.complex, &self.complex, r);
            if !rep.verified() {
                return Err(Error::axiom(
                    "lift is a chain map",
                    format!("rho(s {})", ext.quotient.labels[h]),
                ));
            }
        }
        // L: rho(tau) - id = dL + Ld.
        let id = ChainMap::identity(&self.complex);
        let rep = verify_homotopy(&self.complex, &self.complex, &self.rho_tau, &id, &self.ell);
        if !rep.verified() {
            return Err(Error::axiom(
                "homotopy rho(tau) ~ id",
                "L fails the homotopy equation",
            ));
        }
        // L commutes with every lift (and with rho(tau)).
        let mut all: Vec<(&ChainMap, String)> = self
            .rho
            .iter()
            .enumerate()
            .map(|(h, r)| (r, format!("rho(s {})", ext.quotient.labels[h])))
            .collect();
        all.push((&self.rho_tau, "rho(tau)".into()));
        for (r, name) in all {
            let lhs = self.ell.pre(r)?;
            let rhs = self.ell.post(r)?;
            for n in 0..lhs.components.len().min(rhs.components.len()) {
                if lhs.components[n] != rhs.components[n] {
                    return Err(Error::axiom(
                        "L rho(g) = rho(g) L",
                        format!("{name} at degree {n}"),
                    ));
                }
            }
        }
        // Projectivity: rho(s h1) rho(s h2) = xi(h1,h2) rho(tau)^alpha(h1,h2)
        // rho(s(h1 h2)).
        for h1 in 0..h_order {
            for h2 in 0..h_order {
                let lhs = self.rho[h1].compose(&self.rho[h2])?;
                let k = ext.alpha.get(h1, h2);
                let rhs = self
                    .rho_tau_power(k)
                    .compose(&self.rho[ext.quotient.mul(h1, h2)])?
                    .scale(ext.xi.get(h1, h2));
                for n in 0..lhs.components.len().min(rhs.components.len()) {
                    if lhs.components[n] != rhs.components[n] {
                        return Err(Error::axiom(
                            "pi^* xi projectivity",
                            format!(
                                "pair ({}, {}) at degree {n}",
                                ext.quotient.labels[h1], ext.quotient.labels[h2]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The two endpoints of a depth-1 evaluation and the homotopy connecting
/// them.
#[derive(Clone, Debug)]
pub struct Homotopy1 {
    pub from: ChainMap,
    pub to: ChainMap,
    pub homotopy: ChainHomotopy,
}

/// A certificate for one depth-2 evaluation: either an exactly commuting
/// triangle (the assigned 2-homotopy is the identity), or simplices above
/// depth 2, which are identities by construction.
#[derive(Clone, Debug)]
pub struct DescentCertificate {
    pub simplex: String,
    pub check: String,
    pub status: bool,
    /// True when the triangle residual is exactly zero in every degree.
    pub residual_is_zero: bool,
}

/// The descent evaluator of a projective action along a rank-one central
/// extension. Depth-0 words evaluate to chain maps, depth-1 words to
/// homotopies (powers of `L`), depth-2 words to triangle certificates;
/// everything above is an identity by construction.
pub struct DescentEvaluator<'a> {
    pub ext: &'a CentralExtensionData,
    pub act: &'a ProjectiveActionData,
}

impl<'a> DescentEvaluator<'a> {
    pub fn new(
        ext: &'a CentralExtensionData,
        act: &'a ProjectiveActionData,
    ) -> Result<DescentEvaluator<'a>> {
        act.validate(ext)?;
        Ok(DescentEvaluator { ext, act })
    }

    /// Depth 0: `(h_1)(h_2)..(h_k)` maps to `rho(s h_1) . .. . rho(s h_k)`.
    pub fn eval_depth0(&self, letters: &[usize]) -> ChainMap {
        let mut acc = ChainMap::identity(&self.act.complex);
        for h in letters {
            acc = acc.compose(&self.act.rho[*h]).unwrap();
        }
        acc
    }

    /// Depth 1, single block `((h_1)..(h_k))`: the homotopy
    /// `xi(h_1,..,h_k) L^(alpha(h_1,..,h_k)) . rho(s(h_1..h_k))` from the
    /// product of the lifts to the lift of the product.
    pub fn eval_depth1_block(&self, letters: &[usize]) -> Homotopy1 {
        let from = self.eval_depth0(letters);
        let mut prod = self.ext.quotient.identity;
        for h in letters {
            prod = self.ext.quotient.mul(prod, *h);
        }
        let xi = self.ext.xi.multi(letters);
        let alpha = self.ext.alpha.multi(letters);
        let to = self.act.rho[prod].scale(&xi);
        let homotopy = self
            .act
            .ell_power(alpha)
            .pre(&self.act.rho[prod])
            .unwrap()
            .scale(&xi);
        Homotopy1 { from, to, homotopy }
    }

    /// Depth 1, a product of blocks: homotopies multiply by
    /// `H = H_1 . f_2 + g_1 . H_2`.
    pub fn eval_depth1(&self, blocks: &[Vec<usize>]) -> Homotopy1 {
        let mut acc: Option<Homotopy1> = None;
        for b in blocks {
            let h = self.eval_depth1_block(b);
            acc = Some(match acc {
                None => h,
                Some(prev) => {
                    let homotopy = prev
                        .homotopy
                        .pre(&h.from)
                        .unwrap()
                        .add(&h.homotopy.post(&prev.to).unwrap())
                        .unwrap();
                    Homotopy1 {
                        from: prev.from.compose(&h.from).unwrap(),
                        to: prev.to.compose(&h.to).unwrap(),
                        homotopy,
                    }
                }
            });
        }
        acc.unwrap_or_else(|| Homotopy1 {
            from: ChainMap::identity(&self.act.complex),
            to: ChainMap::identity(&self.act.complex),
            homotopy: ChainHomotopy::zero(&self.act.complex, &self.act.complex),
        })
    }

    /// Verifies a depth-1 evaluation as a genuine chain homotopy.
    pub fn verify_depth1(&self, blocks: &[Vec<usize>]) -> VerifyReport {
        let h = self.eval_depth1(blocks);
        verify_homotopy(
            &self.act.complex,
            &self.act.complex,
            &h.from,
            &h.to,
            &h.homotopy,
        )
    }

    /// Depth 2, one fully nested factor `((B_1)..(B_k))`: the triangle of
    /// the three face homotopies must commute strictly, which pins the
    /// assigned 2-simplex to the identity.
    pub fn depth2_certificate(&self, blocks: &[Vec<usize>]) -> DescentCertificate {
        let simplex = format!(
            "(({}))",
            blocks
                .iter()
                .map(|b| {
                    format!(
                        "({})",
                        b.iter()
                            .map(|h| self.ext.quotient.labels[*h].clone())
                            .collect::<Vec<_>>()
                            .join(")(")
                    )
                })
                .collect::<Vec<_>>()
                .join("")
        );
        // d_0: the product of the block homotopies.
        let h0 = self.eval_depth1(&blocks.iter().cloned().collect::<Vec<_>>());
        // d_1: the single block of all letters.
        let all: Vec<usize> = blocks.iter().flatten().cloned().collect();
        let h1 = self.eval_depth1_block(&all);
        // d_2: the inner brackets multiply in the twisted group algebra:
        // scalar prod_i xi(B_i) on the word of block products.
        let mut scalar = self.act.complex.field.one();
        let mut prods = Vec::new();
        for b in blocks {
            scalar = scalar.mul(&self.ext.xi.multi(b));
            let mut p = self.ext.quotient.identity;
            for h in b {
                p = self.ext.quotient.mul(p, *h);
            }
            prods.push(p);
        }
        let h2 = self.eval_depth1_block(&prods);
        let h2_scaled = h2.homotopy.scale(&scalar);
        // Strict triangle: H(d_1) = H(d_0) + H(d_2).
        let mut ok = true;
        for n in 0..h1.homotopy.components.len() {
            let sum = h0.homotopy.components[n]
                .add(&h2_scaled.components[n])
                .unwrap();
            if h1.homotopy.components[n] != sum {
                ok = false;
            }
        }
        DescentCertificate {
            simplex,
            check: "strict triangle H(d1) = H(d0) + H(d2)".into(),
            status: ok,
            residual_is_zero: ok,
        }
    }

    /// Above depth 2 the construction assigns identities; the certificate
    /// records that nothing is represented.
    pub fn high_depth_certificate(&self, depth: usize) -> DescentCertificate {
        DescentCertificate {
            simplex: format!("depth {depth} word"),
            check: "identity by construction".into(),
            status: depth > 2,
            residual_is_zero: depth > 2,
        }
    }
}

/// Lifts of a projective representation of a finite group, together with
/// the induced maps on a chosen nonzero hom space.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub group: FinGroup,
    /// Invertible matrices on the underlying space, one per group element.
    pub lifts: Vec<Matrix>,
    /// Induced invertible maps on the hom space, one per group element.
    pub hom_maps: Vec<Matrix>,
}

/// A surjective group homomorphism.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub src: FinGroup,
    pub tgt: FinGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(src: FinGroup, tgt: FinGroup, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != src.order() {
            return Err(Error::InvalidInput("homomorphism table has wrong length".into()));
        }
        for a in 0..src.order() {
            for b in 0..src.order() {
                if tgt.mul(map[a], map[b]) != map[src.mul(a, b)] {
                    return Err(Error::axiom(
                        "homomorphism law",
                        format!("pair ({}, {})", src.labels[a], src.labels[b]),
                    ));
                }
            }
        }
        for h in 0..tgt.order() {
            if !map.contains(&h) {
                return Err(Error::axiom(
                    "surjectivity",
                    format!("{} has no preimage", tgt.labels[h]),
                ));
            }
        }
        Ok(GroupHom { src, tgt, map })
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.src.order())
            .filter(|&g| self.map[g] == self.tgt.identity)
            .collect()
    }
}

/// Output of lift normalization: rescaled lifts whose projectivity cocycle
/// is the pullback of a cocycle on the quotient.
pub struct NormalizedLifts {
    pub adjusted: Vec<Matrix>,
    /// `nu[g][gp]` with `adj(g) adj(gp) = nu(g, gp) adj(g gp)`.
    pub nu: Vec<Vec<Scalar>>,
    pub xi: Cocycle2,
}

fn scalar_multiple(of: &Matrix, target: &Matrix) -> Option<Scalar> {
    // target = c * of, both nonzero.
    let mut c: Option<Scalar> = None;
    for col in 0..of.cols() {
        if !of.col(col).is_empty() {
            let (r, s) = &of.col(col)[0];
            let t = target.get(*r, col);
            if s.is_zero() {
                return None;
            }
            c = Some(t.div(s));
            break;
        }
    }
    let c = c?;
    if target == &of.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// Rescales arbitrary lifts of a projective representation so that the
/// resulting cocycle is pulled back from the quotient. The hom-space maps
/// must act on the kernel by scalars that the normalization cancels.
pub fn normalize_lifts(pi: &GroupHom, data: &LiftData) -> Result<NormalizedLifts> {
    let g_order = pi.src.order();
    if data.lifts.len() != g_order || data.hom_maps.len() != g_order {
        return Err(Error::InvalidInput("one lift per group element is required".into()));
    }
    if data.hom_maps[pi.src.identity].rows() == 0 {
        return Err(Error::InvalidInput("the hom space must be nonzero".into()));
    }
    for (g, m) in data.lifts.iter().enumerate() {
        if matrix::inverse(m).is_none() {
            return Err(Error::axiom(
                "lift invertibility",
                format!("lift of {}", pi.src.labels[g]),
            ));
        }
    }
    // Consistency: the multiplication defects agree upstairs and downstairs.
    for a in 0..g_order {
        for b in 0..g_order {
            let ab = pi.src.mul(a, b);
            let up = data.lifts[a].mul(&data.lifts[b])?;
            let dn = data.hom_maps[a].mul(&data.hom_maps[b])?;
            let cu = scalar_multiple(&data.lifts[ab], &up).ok_or_else(|| {
                Error::axiom(
                    "projectivity",
                    format!("lifts at ({}, {})", pi.src.labels[a], pi.src.labels[b]),
                )
            })?;
            let cd = scalar_multiple(&data.hom_maps[ab], &dn).ok_or_else(|| {
                Error::axiom(
                    "projectivity",
                    format!("hom maps at ({}, {})", pi.src.labels[a], pi.src.labels[b]),
                )
            })?;
            if cu != cd {
                return Err(Error::axiom(
                    "functor compatibility",
                    format!(
                        "defect scalars differ at ({}, {})",
                        pi.src.labels[a], pi.src.labels[b]
                    ),
                ));
            }
        }
    }
    // Reference lifts on the hom space: identity at e, the first preimage's
    // map for every other quotient element.
    let h_order = pi.tgt.order();
    let mut reference: Vec<Option<Matrix>> = vec![None; h_order];
    reference[pi.tgt.identity] = Some(Matrix::identity(
        data.hom_maps[0].field(),
        data.hom_maps[0].rows(),
    ));
    for g in 0..g_order {
        let h = pi.map[g];
        if reference[h].is_none() {
            reference[h] = Some(data.hom_maps[g].clone());
        }
    }
    // c_g: hom_map(g) = c_g * reference(pi g). Failure means the projective
    // action on the hom space is not trivial on the kernel.
    let mut c = Vec::with_capacity(g_order);
    for g in 0..g_order {
        let r = reference[pi.map[g]].as_ref().unwrap();
        let cg = scalar_multiple(r, &data.hom_maps[g]).ok_or_else(|| {
            Error::axiom(
                "kernel acts trivially on the hom space",
                format!("witness: {}", pi.src.labels[g]),
            )
        })?;
        c.push(cg);
    }
    let adjusted: Vec<Matrix> = (0..g_order)
        .map(|g| data.lifts[g].scale(&c[g].inv()))
        .collect();
    let mut nu = vec![vec![data.hom_maps[0].field().one(); g_order]; g_order];
    for a in 0..g_order {
        for b in 0..g_order {
            let ab = pi.src.mul(a, b);
            let prod = adjusted[a].mul(&adjusted[b])?;
            nu[a][b] = scalar_multiple(&adjusted[ab], &prod).ok_or_else(|| {
                Error::axiom("projectivity", "adjusted lifts are not projective")
            })?;
        }
    }
    // nu must vanish on kernel slots.
    for k in pi.kernel() {
        for g in 0..g_order {
            if !nu[g][k].is_one() || !nu[k][g].is_one() {
                return Err(Error::axiom(
                    "nu trivial on kernel slots",
                    format!(
                        "witness: ({}, {})",
                        pi.src.labels[g], pi.src.labels[k]
                    ),
                ));
            }
        }
    }
    // xi(h, h') = nu(s h, s h') along the first-preimage section; verify the
    // pullback property pi^* xi = nu on all pairs.
    let section: Vec<usize> = (0..h_order)
        .map(|h| (0..g_order).find(|&g| pi.map[g] == h).unwrap())
        .collect();
    let xi_values: Vec<Vec<Scalar>> = (0..h_order)
        .map(|h1| {
            (0..h_order)
                .map(|h2| nu[section[h1]][section[h2]].clone())
                .collect()
        })
        .collect();
    let xi = Cocycle2::new(pi.tgt.clone(), xi_values)?;
    for a in 0..g_order {
        for b in 0..g_order {
            if nu[a][b] != *xi.get(pi.map[a], pi.map[b]) {
                return Err(Error::axiom(
                    "pullback property pi^* xi = nu",
                    format!("pair ({}, {})", pi.src.labels[a], pi.src.labels[b]),
                ));
            }
        }
    }
    Ok(NormalizedLifts { adjusted, nu, xi })
}

/// Per-object twist automorphisms on a linear category, natural in every
/// basis morphism and the identity on a designated unit object.
#[derive(Clone, Debug)]
pub struct TwistData {
    /// `theta[x]`: an automorphism of `x` as a vector in hom(x, x).
    pub theta: Vec<SparseVec>,
    pub unit_object: usize,
}

impl TwistData {
    pub fn validate(&self, c: &LinearCategory) -> Result<()> {
        let n = c.n_objects();
        if self.theta.len() != n {
            return Err(Error::InvalidInput("one twist per object is required".into()));
        }
        if self.theta[self.unit_object] != c.identities[self.unit_object] {
            return Err(Error::axiom("twist on the unit", "theta_I != id"));
        }
        for x in 0..n {
            for y in 0..n {
                for f in 0..c.hom_dim(x, y) {
                    let fv: SparseVec = vec![(f, c.field.one())];
                    let lhs = c.comp_vec(x, y, y, &self.theta[y], &fv);
                    let rhs = c.comp_vec(x, x, y, &fv, &self.theta[x]);
                    if lhs != rhs {
                        return Err(Error::axiom(
                            "twist naturality",
                            format!(
                                "witness morphism {} in hom({x},{y})",
                                c.hom_labels[x][y][f]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The twist-insertion homotopy on the complex of based loops into `X`
/// (strings `I -> P_n -> .. -> P_0 -> X`): `h_j` doubles `P_j` with the
/// twist of `P_j`, and the family is a simplicial homotopy between
/// postcomposition by `theta_X` and the identity.
pub struct TwistHomotopyData {
    pub hm: HmComplex,
    /// `h[n][j]`: level n -> level n+1.
    pub h: Vec<Vec<Matrix>>,
    pub report: VerifyReport,
    /// The induced chain homotopy on normalized chains.
    pub chain_homotopy: ChainHomotopy,
    pub theta_star: ChainMap,
}

pub fn twist_homotopy(
    c: &LinearCategory,
    twist: &TwistData,
    x: usize,
    window: usize,
    budget: usize,
) -> Result<TwistHomotopyData> {
    twist.validate(c)?;
    let nobj = c.n_objects();
    let i0 = twist.unit_object;
    let field = c.field;
    // Bimodule F(P0, Pn) = C(P0, X) (x) C(I, Pn).
    let labels: Vec<Vec<Vec<String>>> = (0..nobj)
        .map(|p0| {
            (0..nobj)
                .map(|pn| {
                    let mut lab = Vec::new();
                    for lf in &c.hom_labels[p0][x] {
                        for lg in &c.hom_labels[i0][pn] {
                            lab.push(format!("{lf}*{lg}"));
                        }
                    }
                    lab
                })
                .collect()
        })
        .collect();
    let contra = (0..nobj)
        .map(|pp| {
            (0..nobj)
                .map(|p0| {
                    (0..nobj)
                        .map(|pn| {
                            (0..c.hom_dim(pp, p0))
                                .map(|f| {
                                    let mut pre =
                                        Matrix::zero(field, c.hom_dim(pp, x), c.hom_dim(p0, x));
                                    for v in 0..c.hom_dim(p0, x) {
                                        pre.set_col(v, c.comp(pp, p0, x, v, f).clone());
                                    }
                                    pre.kron(&Matrix::identity(field, c.hom_dim(i0, pn)))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let co = (0..nobj)
        .map(|p0| {
            (0..nobj)
                .map(|pn| {
                    (0..nobj)
                        .map(|pnp| {
                            (0..c.hom_dim(pn, pnp))
                                .map(|g| {
                                    let mut post =
                                        Matrix::zero(field, c.hom_dim(i0, pnp), c.hom_dim(i0, pn));
                                    for v in 0..c.hom_dim(i0, pn) {
                                        post.set_col(v, c.comp(i0, pn, pnp, g, v).clone());
                                    }
                                    Matrix::identity(field, c.hom_dim(p0, x)).kron(&post)
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
    // theta_* : postcompose the C(P0, X) factor with theta_X, levelwise.
    let theta_post = {
        let mut by_p0: Vec<Matrix> = Vec::new();
        for p0 in 0..nobj {
            let mut m = Matrix::zero(field, c.hom_dim(p0, x), c.hom_dim(p0, x));
            for v in 0..c.hom_dim(p0, x) {
                let fv: SparseVec = vec![(v, field.one())];
                m.set_col(v, c.comp_vec(p0, x, x, &twist.theta[x], &fv));
            }
            by_p0.push(m);
        }
        by_p0
    };
    let mut theta_levels = Vec::new();
    for n in 0..=window {
        let mut m = Matrix::zero(field, hm.simplicial.levels[n], hm.simplicial.levels[n]);
        for (ti, t) in hm.levels[n].tuples.iter().enumerate() {
            let dims = hm.levels[n].slot_dims[ti].clone();
            let block: usize = dims.iter().product();
            let base = hm.levels[n].offsets[ti];
            let hdim = c.hom_dim(i0, t[n]);
            for k in 0..block {
                let parts = crate::lincat::mixed_radix_split(&dims, k);
                let fidx = parts[n] / hdim;
                let gidx = parts[n] % hdim;
                for (w, cc) in theta_post[t[0]].col(fidx) {
                    let mut np = parts.clone();
                    np[n] = *w * hdim + gidx;
                    m.add_entry(base + crate::lincat::mixed_radix_join(&dims, &np), base + k, cc)?;
                }
            }
        }
        theta_levels.push(m);
    }
    // h_j: double P_j and insert theta_{P_j} in the new slot j+1.
    let mut h: Vec<Vec<Matrix>> = Vec::new();
    for n in 0..window {
        let mut hj = Vec::new();
        for j in 0..=n {
            let mut m = Matrix::zero(field, hm.simplicial.levels[n + 1], hm.simplicial.levels[n]);
            for (ti, t) in hm.levels[n].tuples.iter().enumerate() {
                let dims = hm.levels[n].slot_dims[ti].clone();
                let block: usize = dims.iter().product();
                let base = hm.levels[n].offsets[ti];
                let mut tt = t.clone();
                tt.insert(j, t[j]);
                let Some((_, toff)) = hm.levels[n + 1].block(&tt) else {
                    continue;
                };
                let tdims = crate::lincat::slot_dims(c, &f, &tt);
                for k in 0..block {
                    let parts = crate::lincat::mixed_radix_split(&dims, k);
                    for (w, cc) in &twist.theta[t[j]] {
                        let mut np = Vec::with_capacity(n + 2);
                        np.extend_from_slice(&parts[..j]);
                        np.push(*w);
                        np.extend_from_slice(&parts[j..]);
                        m.add_entry(toff + crate::lincat::mixed_radix_join(&tdims, &np), base + k, cc)?;
                    }
                }
            }
            hj.push(m);
        }
        h.push(hj);
    }
    // Simplicial homotopy identities.
    let mut report = VerifyReport::default();
    for n in 0..window {
        let s = &hm.simplicial;
        report.record(
            n,
            "d_0 h_0 = theta_*",
            s.face(n + 1, 0).mul(&h[n][0])?.sub(&theta_levels[n])?,
        );
        let id = Matrix::identity(field, s.levels[n]);
        report.record(
            n,
            "d_{n+1} h_n = id",
            s.face(n + 1, n + 1).mul(&h[n][n])?.sub(&id)?,
        );
        for j in 0..=n {
            for i in 0..=n + 1 {
                if i < j {
                    let lhs = s.face(n + 1, i).mul(&h[n][j])?;
                    let rhs = if n >= 1 {
                        h[n - 1][j - 1].mul(s.face(n, i))?
                    } else {
                        continue;
                    };
                    report.record(n, format!("d_{i} h_{j} = h_{} d_{i}", j - 1), lhs.sub(&rhs)?);
                } else if i == j && j > 0 {
                    let lhs = s.face(n + 1, j).mul(&h[n][j])?;
                    let rhs = s.face(n + 1, j).mul(&h[n][j - 1])?;
                    report.record(n, format!("d_{j} h_{j} = d_{j} h_{}", j - 1), lhs.sub(&rhs)?);
                } else if i > j + 1 {
                    let lhs = s.face(n + 1, i).mul(&h[n][j])?;
                    let rhs = if n >= 1 {
                        h[n - 1][j].mul(s.face(n, i - 1))?
                    } else {
                        continue;
                    };
                    report.record(n, format!("d_{i} h_{j} = h_{j} d_{}", i - 1), lhs.sub(&rhs)?);
                }
            }
        }
        if n + 1 < window {
            for j in 0..=n {
                for i in 0..=n {
                    let lhs = hm.simplicial.degen(n + 1, i).mul(&h[n][j])?;
                    let rhs = if i <= j {
                        h[n + 1][j + 1].mul(hm.simplicial.degen(n, i))?
                    } else {
                        h[n + 1][j].mul(hm.simplicial.degen(n, i - 1))?
                    };
                    report.record(n, format!("s_{i} h_{j} relation"), lhs.sub(&rhs)?);
                }
            }
        }
    }
    // Induced chain homotopy on normalized chains: sum of (-1)^j h_j.
    let chain_homotopy = ChainHomotopy {
        components: (0..window)
            .map(|n| {
                let mut alt = Matrix::zero(field, hm.simplicial.levels[n + 1], hm.simplicial.levels[n]);
                let mut sign = field.one();
                for j in 0..=n {
                    alt = alt.add(&h[n][j].scale(&sign))?;
                    sign = sign.neg();
                }
                hm.normalized.proj[n + 1]
                    .mul(&alt.mul(&hm.normalized.lift[n])?)
            })
            .collect::<Result<_>>()?,
    };
    let theta_star = ChainMap {
        components: (0..=window)
            .map(|n| {
                hm.normalized.proj[n]
                    .mul(&theta_levels[n].mul(&hm.normalized.lift[n])?)
            })
            .collect::<Result<_>>()?,
    };
    let id = ChainMap::identity(hm.complex());
    report.merge(verify_homotopy(
        hm.complex(),
        hm.complex(),
        &theta_star,
        &id,
        &chain_homotopy,
    ));
    Ok(TwistHomotopyData {
        hm,
        h,
        report,
        chain_homotopy,
        theta_star,
    })
}

/// Postcomposition by an endomorphism `f` of `X` on the based-loop complex,
/// levelwise on the simplicial object. Used to check `f_* h = h f_*`.
pub fn endo_post_levels(
    c: &LinearCategory,
    data: &TwistHomotopyData,
    x: usize,
    i0: usize,
    f: &SparseVec,
) -> Result<Vec<Matrix>> {
    let field = c.field;
    let nobj = c.n_objects();
    let mut post_by_p0: Vec<Matrix> = Vec::new();
    for p0 in 0..nobj {
        let mut m = Matrix::zero(field, c.hom_dim(p0, x), c.hom_dim(p0, x));
        for v in 0..c.hom_dim(p0, x) {
            let fv: SparseVec = vec![(v, field.one())];
            m.set_col(v, c.comp_vec(p0, x, x, f, &fv));
        }
        post_by_p0.push(m);
    }
    let hm = &data.hm;
    let mut out = Vec::new();
    for n in 0..=hm.simplicial.window {
        let mut m = Matrix::zero(field, hm.simplicial.levels[n], hm.simplicial.levels[n]);
        for (ti, t) in hm.levels[n].tuples.iter().enumerate() {
            let dims = hm.levels[n].slot_dims[ti].clone();
            let block: usize = dims.iter().product();
            let base = hm.levels[n].offsets[ti];
            let hdim = c.hom_dim(i0, t[n]);
            for k in 0..block {
                let parts = crate::lincat::mixed_radix_split(&dims, k);
                let fidx = parts[n] / hdim;
                let gidx = parts[n] % hdim;
                for (w, cc) in post_by_p0[t[0]].col(fidx) {
                    let mut np = parts.clone();
                    np[n] = *w * hdim + gidx;
                    m.add_entry(base + crate::lincat::mixed_radix_join(&dims, &np), base + k, cc)?;
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;

    fn q() -> ScalarField {
        ScalarField::Q
    }

    fn z4_alpha() -> IntCocycle2 {
        let h = FinGroup::cyclic(4);
        let values = (0..4)
            .map(|a| (0..4).map(|b| ((a + b) / 4) as i64).collect())
            .collect();
        IntCocycle2::new(h, values).unwrap()
    }

    #[test]
    fn multi_cocycle_recursion_and_bracketing() {
        let alpha = z4_alpha();
        // alpha(h1, h2, h3) = alpha(h1, h2) + alpha(h1 h2, h3).
        for h1 in 0..4 {
            for h2 in 0..4 {
                for h3 in 0..4 {
                    let lhs = alpha.multi(&[h1, h2, h3]);
                    let rhs = alpha.get(h1, h2) + alpha.get((h1 + h2) % 4, h3);
                    assert_eq!(lhs, rhs);
                    // Left- and right-nested evaluations agree.
                    assert_eq!(lhs, alpha.multi_right_nested(&[h1, h2, h3]));
                }
            }
        }
        // alpha = 0 gives 0.
        let zero = IntCocycle2::new(FinGroup::cyclic(3), vec![vec![0; 3]; 3]).unwrap();
        assert_eq!(zero.multi(&[1, 2, 2, 1]), 0);
        // The concrete values the section s(j) = j produces.
        assert_eq!(alpha.multi(&[1, 1]), 0);
        assert_eq!(alpha.multi(&[3, 3]), 1);
    }

    /// The two-term complex k --1--> k with scalar action data:
    /// rho(tau) = t, L = t - 1, rho(s j) = base^j, and the projectivity
    /// cocycle xi = xb^alpha; consistency needs base^4 = xb * t.
    fn scalar_action(t: i64, base: i64, xb: i64) -> (CentralExtensionData, ProjectiveActionData) {
        let field = q();
        assert_eq!(base.pow(4), xb * t);
        let alpha = z4_alpha();
        let xi = power_cocycle(&alpha, &field.from_int(xb)).unwrap();
        let ext = CentralExtensionData::cyclic_mod(4, xi).unwrap();
        let levels = vec![1usize, 1, 0, 0];
        let labels = levels
            .iter()
            .map(|d| (0..*d).map(|i| format!("e{i}")).collect())
            .collect();
        let diffs = vec![
            Matrix::zero(field, 0, 1),
            Matrix::identity(field, 1),
            Matrix::zero(field, 1, 0),
            Matrix::zero(field, 0, 0),
        ];
        let complex = ChainComplex::new(field, levels, labels, diffs);
        let scalar_map = |v: i64| ChainMap {
            components: (0..=3)
                .map(|n| Matrix::identity(field, complex.level_dim(n)).scale(&field.from_int(v)))
                .collect(),
        };
        let rho: Vec<ChainMap> = (0..4).map(|j| scalar_map(base.pow(j as u32))).collect();
        let rho_tau = scalar_map(t);
        // L: C_0 -> C_1 with the scalar t - 1 (d = 1 in both slots).
        let mut ell_mats = Vec::new();
        for n in 0..3 {
            let m = if n == 0 {
                Matrix::identity(field, 1).scale(&field.from_int(t - 1))
            } else {
                Matrix::zero(field, complex.level_dim(n + 1), complex.level_dim(n))
            };
            ell_mats.push(m);
        }
        let ell = ChainHomotopy { components: ell_mats };
        let act = ProjectiveActionData::new(complex, rho, rho_tau, ell).unwrap();
        (ext, act)
    }

    #[test]
    fn exponent_additivity_over_block_groupings() {
        // alpha(all letters) = alpha(block products) + sum of alpha within
        // each block, for random words and groupings.
        use rand::Rng;
        use rand::SeedableRng;
        let alpha = z4_alpha();
        let g = &alpha.group;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let len = rng.gen_range(1..=6usize);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            // Random grouping into blocks.
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            let mut cur = Vec::new();
            for l in &word {
                cur.push(*l);
                if rng.gen_bool(0.5) {
                    blocks.push(std::mem::take(&mut cur));
                }
            }
            if !cur.is_empty() {
                blocks.push(cur);
            }
            let total = alpha.multi(&word);
            let prods: Vec<usize> = blocks
                .iter()
                .map(|b| b.iter().fold(g.identity, |acc, h| g.mul(acc, *h)))
                .collect();
            let grouped: i64 = alpha.multi(&prods)
                + blocks.iter().map(|b| alpha.multi(b)).sum::<i64>();
            assert_eq!(total, grouped, "word {word:?} blocks {blocks:?}");
        }
    }

    #[test]
    fn scalar_action_validates() {
        // base^4 = tau: base = 2, tau = 16.
        let (ext, act) = scalar_action(16, 2, 1);
        act.validate(&ext).unwrap();
        // A variant with a nontrivial projectivity cocycle.
        let (ext, act) = scalar_action(4, 2, 4);
        act.validate(&ext).unwrap();
    }

    #[test]
    fn depth0_and_depth1_evaluations() {
        let (ext, act) = scalar_action(16, 2, 1);
        let ev = DescentEvaluator::new(&ext, &act).unwrap();
        // (e) at any depth: identity map / zero homotopy.
        let e = ext.quotient.identity;
        let id = ev.eval_depth0(&[e]);
        assert_eq!(id.components[0], Matrix::identity(q(), 1));
        let h = ev.eval_depth1_block(&[e]);
        assert!(h.homotopy.components[0].is_zero_matrix());
        // ((1)(1)): alpha(1,1) = 0, zero homotopy between equal maps.
        let h = ev.eval_depth1_block(&[1, 1]);
        assert!(h.homotopy.components[0].is_zero_matrix());
        assert!(ev.verify_depth1(&[vec![1, 1]]).verified());
        // ((3)(3)): alpha(3,3) = 1, the homotopy is nontrivial.
        let h = ev.eval_depth1_block(&[3, 3]);
        assert!(!h.homotopy.components[0].is_zero_matrix());
        assert!(ev.verify_depth1(&[vec![3, 3]]).verified());
    }

    #[test]
    fn depth1_products_and_depth2_triangles_exhaustive() {
        for (t, base, xb) in [(16, 2, 1), (4, 2, 4), (81, 3, 1)] {
            let (ext, act) = scalar_action(t, base, xb);
            let ev = DescentEvaluator::new(&ext, &act).unwrap();
            run_exhaustive(&ev);
        }
    }

    fn run_exhaustive(ev: &DescentEvaluator) {
        // All words with letters in Z/4 and total length <= 3, in all block
        // structures.
        let mut words: Vec<Vec<usize>> = Vec::new();
        for a in 0..4usize {
            words.push(vec![a]);
            for b in 0..4usize {
                words.push(vec![a, b]);
                for c in 0..4usize {
                    words.push(vec![a, b, c]);
                }
            }
        }
        fn splits(word: &[usize]) -> Vec<Vec<Vec<usize>>> {
            if word.is_empty() {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for cut in 1..=word.len() {
                for rest in splits(&word[cut..]) {
                    let mut v = vec![word[..cut].to_vec()];
                    v.extend(rest);
                    out.push(v);
                }
            }
            out
        }
        for word in &words {
            for blocks in splits(word) {
                assert!(
                    ev.verify_depth1(&blocks).verified(),
                    "depth-1 homotopy fails on {blocks:?}"
                );
                let cert = ev.depth2_certificate(&blocks);
                assert!(cert.status, "triangle fails on {}", cert.simplex);
            }
        }
        assert!(ev.high_depth_certificate(3).status);
    }

    #[test]
    fn descent_with_rotation_lifts() {
        // rho(s j) = R^j for R = 2 * (90-degree rotation): R^4 = 16, so
        // rho(tau) = 16 and xi is trivial, but the lifts are genuinely
        // non-diagonal matrices.
        let field = q();
        let alpha = z4_alpha();
        let xi = power_cocycle(&alpha, &field.one()).unwrap();
        let ext = CentralExtensionData::cyclic_mod(4, xi).unwrap();
        let levels = vec![2usize, 2, 0, 0];
        let labels = levels
            .iter()
            .map(|d| (0..*d).map(|i| format!("e{i}")).collect())
            .collect();
        let diffs = vec![
            Matrix::zero(field, 0, 2),
            Matrix::identity(field, 2),
            Matrix::zero(field, 2, 0),
            Matrix::zero(field, 0, 0),
        ];
        let complex = ChainComplex::new(field, levels, labels, diffs);
        let rot = Matrix::from_triplets(
            field,
            2,
            2,
            vec![
                (0usize, 1usize, field.from_int(-2)),
                (1, 0, field.from_int(2)),
            ],
        )
        .unwrap();
        let mat_map = |m: &Matrix| ChainMap {
            components: vec![
                m.clone(),
                m.clone(),
                Matrix::zero(field, 0, 0),
                Matrix::zero(field, 0, 0),
            ],
        };
        let mut rho = Vec::new();
        let mut acc = Matrix::identity(field, 2);
        for _ in 0..4 {
            rho.push(mat_map(&acc));
            acc = acc.mul(&rot).unwrap();
        }
        let rho_tau = mat_map(&Matrix::identity(field, 2).scale(&field.from_int(16)));
        let ell_mat = Matrix::identity(field, 2).scale(&field.from_int(15));
        let ell = ChainHomotopy {
            components: vec![
                ell_mat,
                Matrix::zero(field, 0, 2),
                Matrix::zero(field, 0, 0),
            ],
        };
        let act = ProjectiveActionData::new(complex, rho, rho_tau, ell).unwrap();
        let ev = DescentEvaluator::new(&ext, &act).unwrap();
        run_exhaustive(&ev);
    }

    #[test]
    fn normalize_lifts_examples() {
        // Linear (non-projective) input: xi is trivial.
        let z2 = FinGroup::cyclic(2);
        let pi = GroupHom::new(z2.clone(), z2.clone(), vec![0, 1]).unwrap();
        let lifts = vec![
            Matrix::identity(q(), 1),
            Matrix::identity(q(), 1).scale(&q().from_int(-1)),
        ];
        let data = LiftData {
            group: z2.clone(),
            lifts: lifts.clone(),
            hom_maps: lifts.clone(),
        };
        let out = normalize_lifts(&pi, &data).unwrap();
        assert!(out.xi.values.iter().all(|r| r.iter().all(|v| v.is_one())));

        // pi = id with scrambled lifts: the hom-space normalization fixes
        // the scalars and recovers the cocycle of the normalized lifts.
        let scr = vec![
            Matrix::identity(q(), 1).scale(&q().from_int(1)),
            Matrix::identity(q(), 1).scale(&q().from_int(5)),
        ];
        let data = LiftData {
            group: z2.clone(),
            lifts: scr.clone(),
            hom_maps: scr.clone(),
        };
        let out = normalize_lifts(&pi, &data).unwrap();
        // Adjusted lifts are rescaled so the hom maps match the reference.
        assert_eq!(out.adjusted[0], Matrix::identity(q(), 1));
        out.xi.validate().unwrap();

        // Z/4 -> Z/2 with the kernel acting by -1 on X but +1 on the hom
        // space: nu vanishes on kernel slots.
        let z4 = FinGroup::cyclic(4);
        let pi = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let rot = Matrix::from_triplets(
            q(),
            2,
            2,
            vec![
                (0usize, 1usize, q().from_int(-1)),
                (1, 0, q().from_int(1)),
            ],
        )
        .unwrap();
        let mut lifts = vec![Matrix::identity(q(), 2)];
        for _ in 1..4 {
            lifts.push(lifts.last().unwrap().mul(&rot).unwrap());
        }
        // The kernel {0, 2} acts by +-1 on X; on the hom space by +1.
        let hom_maps = vec![
            Matrix::identity(q(), 1),
            Matrix::identity(q(), 1).scale(&q().from_int(-1)),
            Matrix::identity(q(), 1),
            Matrix::identity(q(), 1).scale(&q().from_int(-1)),
        ];
        let data = LiftData {
            group: z4.clone(),
            lifts,
            hom_maps,
        };
        let out = normalize_lifts(&pi, &data).unwrap();
        for k in [0usize, 2] {
            for g in 0..4 {
                assert!(out.nu[g][k].is_one());
                assert!(out.nu[k][g].is_one());
            }
        }
    }

    #[test]
    fn twist_homotopy_on_z3_graded_category_over_f7() {
        use crate::verlinde::GradedVectCategory;
        let f7 = crate::field::ScalarField::Fp(7);
        let z3 = FinGroup::cyclic(3);
        // beta(g, h) = 2^(gh) and theta(g) = 2^(g^2) with 2 a cube root of
        // unity in F7; the twist law theta(g+h) = beta(g,h) beta(h,g)
        // theta(g) theta(h) holds on the nose.
        let beta: Vec<Vec<_>> = (0..3)
            .map(|g| (0..3).map(|h| f7.from_int(2).pow((g * h) as i64)).collect())
            .collect();
        let theta: Vec<_> = (0..3)
            .map(|g: i64| f7.from_int(2).pow(g * g))
            .collect();
        let cat = GradedVectCategory::new(f7, z3.clone(), Some(beta), Some(theta), false).unwrap();
        let objects: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]];
        let lin = cat.linear_category(&objects).unwrap();
        let twist = TwistData {
            theta: objects
                .iter()
                .map(|t| cat.twist_of(t).unwrap())
                .collect(),
            unit_object: 0,
        };
        // X = delta_0 (+) delta_1, a nontrivial diagonal twist.
        let x = 3usize;
        let data = twist_homotopy(&lin, &twist, x, 3, 200_000).unwrap();
        assert!(data.report.verified(), "{:#?}", data.report.failures.iter().map(|f| (f.degree, f.identity.clone())).collect::<Vec<_>>());
        // theta_* is not the identity on this complex.
        let id = ChainMap::identity(data.hm.complex());
        assert!(data
            .theta_star
            .components
            .iter()
            .zip(&id.components)
            .any(|(a, b)| a != b));
        // f_* h = h f_* for endomorphisms f of X.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let hom_xx = lin.hom_dim(x, x);
        for _ in 0..10 {
            let f: SparseVec = (0..hom_xx)
                .map(|i| (i, f7.from_int(rng.gen_range(0..7i64))))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let post = endo_post_levels(&lin, &data, x, 0, &f).unwrap();
            for n in 0..data.h.len() {
                for j in 0..data.h[n].len() {
                    let lhs = post[n + 1].mul(&data.h[n][j]).unwrap();
                    let rhs = data.h[n][j].mul(&post[n]).unwrap();
                    assert_eq!(lhs, rhs, "f_* h_{j} != h_{j} f_* at level {n}");
                }
            }
        }
    }

    #[test]
    fn twist_identity_gives_degeneracies() {
        // theta = id: h_j equals the degeneracy s_j, a homotopy from the
        // identity to itself.
        use crate::verlinde::GradedVectCategory;
        let z2 = FinGroup::cyclic(2);
        let cat = GradedVectCategory::new(
            q(),
            z2,
            None,
            Some(vec![q().one(), q().one()]),
            false,
        )
        .unwrap();
        let objects: Vec<Vec<usize>> = vec![vec![0], vec![1]];
        let lin = cat.linear_category(&objects).unwrap();
        let twist = TwistData {
            theta: objects.iter().map(|t| cat.twist_of(t).unwrap()).collect(),
            unit_object: 0,
        };
        let data = twist_homotopy(&lin, &twist, 1, 3, 100_000).unwrap();
        assert!(data.report.verified());
        for n in 0..data.h.len() {
            for j in 0..data.h[n].len() {
                assert_eq!(&data.h[n][j], data.hm.simplicial.degen(n, j));
            }
        }
    }

    #[test]
    fn twist_rejects_non_natural_theta() {
        use crate::verlinde::GradedVectCategory;
        let z2 = FinGroup::cyclic(2);
        let cat = GradedVectCategory::new(q(), z2, None, None, false).unwrap();
        let objects: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![0, 0]];
        let lin = cat.linear_category(&objects).unwrap();
        // A twist scaling only one of the two isomorphic components of
        // delta_0 (+) delta_0 fails naturality against the cross morphisms.
        let mut theta: Vec<SparseVec> = objects
            .iter()
            .enumerate()
            .map(|(x, _)| lin.identities[x].clone())
            .collect();
        let basis = cat.hom_basis(&objects[2], &objects[2]);
        theta[2] = basis
            .iter()
            .enumerate()
            .filter(|(_, (i, j))| i == j)
            .map(|(k, (i, _))| {
                let c = if *i == 0 {
                    q().one()
                } else {
                    q().from_int(5)
                };
                (k, c)
            })
            .collect();
        let twist = TwistData {
            theta,
            unit_object: 0,
        };
        let err = twist_homotopy(&lin, &twist, 0, 2, 10_000);
        assert!(err.is_err());
    }

    #[test]
    fn normalize_lifts_rejects_kernel_action_on_hom() {
        // Kernel element acting by a non-scalar-compatible map downstairs.
        let z2 = FinGroup::cyclic(2);
        let one = FinGroup::cyclic(1);
        let pi = GroupHom::new(z2.clone(), one, vec![0, 0]).unwrap();
        let lifts = vec![Matrix::identity(q(), 2), {
            let mut m = Matrix::zero(q(), 2, 2);
            m.add_entry(0, 1, &q().one()).unwrap();
            m.add_entry(1, 0, &q().one()).unwrap();
            m
        }];
        let hom_maps = lifts.clone();
        let data = LiftData {
            group: z2,
            lifts,
            hom_maps,
        };
        assert!(normalize_lifts(&pi, &data).is_err());
    }
}
