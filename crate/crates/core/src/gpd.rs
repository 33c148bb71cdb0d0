//! Finite groupoids: action groupoids, loop groupoids, nerve chains, the
//! explicit loop-to-bar isomorphism, commuting-pair groupoids, and the
//! SL(2,Z) action on commuting pairs.

use std::collections::BTreeMap;

use crate::algebra::FinGroup;
use crate::chains::{SimplicialVS, VerifyReport};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::matrix::Matrix;

/// A morphism of a finite groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpdMor {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

/// A finite groupoid: object and morphism lists with a composition table.
#[derive(Clone, Debug)]
pub struct FinGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<GpdMor>,
    /// `compose[g][f] = Some(g . f)` when `tgt(f) = src(g)` (apply f first).
    pub compose: Vec<Vec<Option<usize>>>,
    /// Identity morphism per object.
    pub identities: Vec<usize>,
    /// Inverse per morphism.
    pub inverses: Vec<usize>,
}

impl FinGroupoid {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<GpdMor>,
        compose: Vec<Vec<Option<usize>>>,
    ) -> Result<FinGroupoid> {
        let nm = morphisms.len();
        if compose.len() != nm || compose.iter().any(|r| r.len() != nm) {
            return Err(Error::InvalidInput("composition table is not square".into()));
        }
        // Identities: for each object, a morphism acting neutrally.
        let mut identities = vec![usize::MAX; objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            if m.src != m.tgt {
                continue;
            }
            let neutral = (0..nm).all(|f| {
                let ok_left = if morphisms[f].tgt == m.src {
                    compose[i][f] == Some(f)
                } else {
                    true
                };
                let ok_right = if morphisms[f].src == m.src {
                    compose[f][i] == Some(f)
                } else {
                    true
                };
                ok_left && ok_right
            });
            if neutral {
                identities[m.src] = i;
            }
        }
        if identities.iter().any(|&i| i == usize::MAX) {
            return Err(Error::axiom("identity law", "an object has no identity"));
        }
        let mut inverses = vec![usize::MAX; nm];
        for f in 0..nm {
            for g in 0..nm {
                if compose[g][f] == Some(identities[morphisms[f].src])
                    && compose[f][g] == Some(identities[morphisms[f].tgt])
                {
                    inverses[f] = g;
                }
            }
            if inverses[f] == usize::MAX {
                return Err(Error::axiom(
                    "invertibility",
                    format!("morphism {} has no inverse", morphisms[f].label),
                ));
            }
        }
        let gpd = FinGroupoid {
            objects,
            morphisms,
            compose,
            identities,
            inverses,
        };
        gpd.validate()?;
        Ok(gpd)
    }

    fn validate(&self) -> Result<()> {
        let nm = self.morphisms.len();
        for f in 0..nm {
            for g in 0..nm {
                let composable = self.morphisms[f].tgt == self.morphisms[g].src;
                match self.compose[g][f] {
                    Some(gf) => {
                        if !composable {
                            return Err(Error::axiom(
                                "composition typing",
                                format!(
                                    "{} . {} defined but not composable",
                                    self.morphisms[g].label, self.morphisms[f].label
                                ),
                            ));
                        }
                        if self.morphisms[gf].src != self.morphisms[f].src
                            || self.morphisms[gf].tgt != self.morphisms[g].tgt
                        {
                            return Err(Error::axiom(
                                "composition typing",
                                format!(
                                    "{} . {} has wrong endpoints",
                                    self.morphisms[g].label, self.morphisms[f].label
                                ),
                            ));
                        }
                    }
                    None => {
                        if composable {
                            return Err(Error::axiom(
                                "composition totality",
                                format!(
                                    "{} . {} missing",
                                    self.morphisms[g].label, self.morphisms[f].label
                                ),
                            ));
                        }
                    }
                }
            }
        }
        // Associativity on composable triples.
        for f in 0..nm {
            for g in 0..nm {
                let Some(gf) = self.compose[g][f] else { continue };
                for h in 0..nm {
                    let Some(hg) = self.compose[h][g] else { continue };
                    if self.compose[h][gf] != self.compose[hg][f] {
                        return Err(Error::axiom(
                            "associativity",
                            format!(
                                "triple ({}, {}, {})",
                                self.morphisms[h].label,
                                self.morphisms[g].label,
                                self.morphisms[f].label
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].src == x && self.morphisms[m].tgt == y)
            .collect()
    }

    /// The one-object groupoid of a group.
    pub fn from_group(g: &FinGroup) -> FinGroupoid {
        let objects = vec!["*".to_string()];
        let morphisms = g
            .labels
            .iter()
            .map(|l| GpdMor {
                src: 0,
                tgt: 0,
                label: l.clone(),
            })
            .collect();
        let n = g.order();
        let compose = (0..n)
            .map(|a| (0..n).map(|b| Some(g.mul(a, b))).collect())
            .collect();
        FinGroupoid::new(objects, morphisms, compose).expect("BG is a groupoid")
    }

    /// The discrete groupoid on `n` objects.
    pub fn discrete(n: usize) -> FinGroupoid {
        let objects = (0..n).map(|i| format!("x{i}")).collect();
        let morphisms = (0..n)
            .map(|i| GpdMor {
                src: i,
                tgt: i,
                label: format!("id{i}"),
            })
            .collect();
        let compose = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Some(i) } else { None }).collect())
            .collect();
        FinGroupoid::new(objects, morphisms, compose).expect("discrete groupoid")
    }
}

/// The action groupoid `X // G`: objects are the points of `X`, morphisms
/// `(g, x): x -> g.x`.
pub fn action_groupoid(g: &FinGroup, points: &[String], action: &[Vec<usize>]) -> Result<FinGroupoid> {
    let nx = points.len();
    let ng = g.order();
    if action.len() != ng || action.iter().any(|r| r.len() != nx) {
        return Err(Error::InvalidInput("action table has wrong shape".into()));
    }
    for x in 0..nx {
        if action[g.identity][x] != x {
            return Err(Error::axiom(
                "action identity law",
                format!("e . {} != {}", points[x], points[x]),
            ));
        }
        for a in 0..ng {
            for b in 0..ng {
                if action[a][action[b][x]] != action[g.mul(a, b)][x] {
                    return Err(Error::axiom(
                        "action compatibility",
                        format!(
                            "({} {}) . {} mismatch",
                            g.labels[a], g.labels[b], points[x]
                        ),
                    ));
                }
            }
        }
    }
    let morphisms: Vec<GpdMor> = (0..ng)
        .flat_map(|a| {
            (0..nx).map(move |x| (a, x))
        })
        .map(|(a, x)| GpdMor {
            src: x,
            tgt: action[a][x],
            label: format!("{}@{}", g.labels[a], points[x]),
        })
        .collect();
    let idx = |a: usize, x: usize| a * nx + x;
    let nm = morphisms.len();
    let mut compose = vec![vec![None; nm]; nm];
    for a in 0..ng {
        for x in 0..nx {
            for b in 0..ng {
                for y in 0..nx {
                    // second . first where first = (b, y): y -> b.y,
                    // second = (a, x): x -> a.x; composable iff x = b.y.
                    if x == action[b][y] {
                        compose[idx(a, x)][idx(b, y)] = Some(idx(g.mul(a, b), y));
                    }
                }
            }
        }
    }
    FinGroupoid::new(points.to_vec(), morphisms, compose)
}

/// `G // G`: the group acting on itself by conjugation.
pub fn conjugation_groupoid(g: &FinGroup) -> FinGroupoid {
    let n = g.order();
    let action: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..n).map(|x| g.conjugate(k, x)).collect())
        .collect();
    action_groupoid(g, &g.labels, &action).expect("conjugation is an action")
}

/// The loop groupoid with bookkeeping back to the underlying groupoid:
/// objects are pairs `(x, a)` with `a` an automorphism of `x`, morphisms
/// `f: (x, a) -> (y, b)` are `f: x -> y` with `f a = b f`.
#[derive(Clone, Debug)]
pub struct LoopGroupoid {
    pub groupoid: FinGroupoid,
    /// For each loop-groupoid object: `(object of the base, automorphism)`.
    pub object_data: Vec<(usize, usize)>,
    /// For each loop-groupoid morphism: `(source object index, underlying f)`.
    pub morphism_data: Vec<(usize, usize)>,
}

pub fn loop_groupoid(base: &FinGroupoid) -> LoopGroupoid {
    let mut object_data = Vec::new();
    for x in 0..base.objects.len() {
        for a in base.hom(x, x) {
            object_data.push((x, a));
        }
    }
    let objects: Vec<String> = object_data
        .iter()
        .map(|(x, a)| format!("({},{})", base.objects[*x], base.morphisms[*a].label))
        .collect();
    let mut morphism_data = Vec::new();
    let mut morphisms = Vec::new();
    for (oi, (x, a)) in object_data.iter().enumerate() {
        for (oj, (y, b)) in object_data.iter().enumerate() {
            for f in base.hom(*x, *y) {
                // f a = b f
                if base.comp(f, *a) == base.comp(*b, f) {
                    morphisms.push(GpdMor {
                        src: oi,
                        tgt: oj,
                        label: format!("{}:{}", base.morphisms[f].label, objects[oi]),
                    });
                    morphism_data.push((oi, f));
                }
            }
        }
    }
    let nm = morphisms.len();
    let mut compose = vec![vec![None; nm]; nm];
    for i in 0..nm {
        for j in 0..nm {
            // i after j.
            if morphisms[j].tgt == morphisms[i].src {
                let under = base
                    .comp(morphism_data[i].1, morphism_data[j].1)
                    .expect("composable underlying morphisms");
                let src = morphisms[j].src;
                let tgt = morphisms[i].tgt;
                let k = (0..nm)
                    .find(|&k| {
                        morphisms[k].src == src
                            && morphisms[k].tgt == tgt
                            && morphism_data[k].1 == under
                    })
                    .expect("composite is a loop-groupoid morphism");
                compose[i][j] = Some(k);
            }
        }
    }
    let groupoid =
        FinGroupoid::new(objects, morphisms, compose).expect("loop groupoid is a groupoid");
    LoopGroupoid {
        groupoid,
        object_data,
        morphism_data,
    }
}

/// A nerve simplex: a composable string of `n` morphisms starting at
/// `start`; level 0 simplices are bare objects.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NerveSimplex {
    pub start: usize,
    pub mors: Vec<usize>,
}

/// The nerve of a groupoid as a free simplicial vector space, truncated at
/// `window`, with a per-level size budget.
pub fn nerve_simplicial(
    gpd: &FinGroupoid,
    field: ScalarField,
    window: usize,
    budget: usize,
) -> Result<SimplicialVS> {
    let mut bases: Vec<Vec<NerveSimplex>> = Vec::new();
    let level0: Vec<NerveSimplex> = (0..gpd.objects.len())
        .map(|x| NerveSimplex {
            start: x,
            mors: Vec::new(),
        })
        .collect();
    bases.push(level0);
    for n in 1..=window {
        let mut level = Vec::new();
        for s in &bases[n - 1] {
            let end = if s.mors.is_empty() {
                s.start
            } else {
                gpd.morphisms[*s.mors.last().unwrap()].tgt
            };
            for m in 0..gpd.morphisms.len() {
                if gpd.morphisms[m].src == end {
                    let mut mors = s.mors.clone();
                    mors.push(m);
                    level.push(NerveSimplex {
                        start: s.start,
                        mors,
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
        bases.push(level);
    }
    let label = |s: &NerveSimplex| -> String {
        if s.mors.is_empty() {
            format!("[{}]", gpd.objects[s.start])
        } else {
            let parts: Vec<String> = s
                .mors
                .iter()
                .map(|m| gpd.morphisms[*m].label.clone())
                .collect();
            format!("[{}]", parts.join(">"))
        }
    };
    let face = |n: usize, j: usize, s: &NerveSimplex| -> NerveSimplex {
        if j == 0 {
            let start = gpd.morphisms[s.mors[0]].tgt;
            NerveSimplex {
                start,
                mors: s.mors[1..].to_vec(),
            }
        } else if j == n {
            NerveSimplex {
                start: s.start,
                mors: s.mors[..n - 1].to_vec(),
            }
        } else {
            let mut mors = Vec::with_capacity(n - 1);
            mors.extend_from_slice(&s.mors[..j - 1]);
            mors.push(
                gpd.comp(s.mors[j], s.mors[j - 1])
                    .expect("nerve string is composable"),
            );
            mors.extend_from_slice(&s.mors[j + 1..]);
            NerveSimplex {
                start: s.start,
                mors,
            }
        }
    };
    let degen = |_n: usize, j: usize, s: &NerveSimplex| -> NerveSimplex {
        let obj = if j == 0 {
            s.start
        } else {
            gpd.morphisms[s.mors[j - 1]].tgt
        };
        let mut mors = Vec::with_capacity(s.mors.len() + 1);
        mors.extend_from_slice(&s.mors[..j]);
        mors.push(gpd.identities[obj]);
        mors.extend_from_slice(&s.mors[j..]);
        NerveSimplex {
            start: s.start,
            mors,
        }
    };
    Ok(SimplicialVS::from_basis_maps(
        field, window, bases, label, face, degen,
    ))
}

/// A loop string over a groupoid: a composable chain `p_0, .., p_{n-1}`
/// through objects `x_0, .., x_n` plus a closing morphism `x_n -> x_0`.
/// These are the bar simplices of the hom bimodule read with the object
/// families reversed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LoopString {
    pub mors: Vec<usize>,
    pub closing: usize,
}

/// The simplicial vector space of loop strings, truncated at `window`.
pub fn loop_strings_simplicial(
    gpd: &FinGroupoid,
    field: ScalarField,
    window: usize,
    budget: usize,
) -> Result<SimplicialVS> {
    let mut bases: Vec<Vec<LoopString>> = Vec::new();
    let level0: Vec<LoopString> = (0..gpd.morphisms.len())
        .filter(|&m| gpd.morphisms[m].src == gpd.morphisms[m].tgt)
        .map(|m| LoopString {
            mors: Vec::new(),
            closing: m,
        })
        .collect();
    bases.push(level0);
    for n in 1..=window {
        let mut level = Vec::new();
        // Extend each (n-1)-string by one more object: strings
        // (p_0,..,p_{n-2}; c) become (p_0,..,p_{n-2}, p'; c') with
        // c = c' . p' factored through a new x_n. Enumerate directly
        // instead: all composable chains plus a compatible closing.
        let mut chains: Vec<Vec<usize>> = gpd
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, _)| vec![i])
            .collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for c in &chains {
                let end = gpd.morphisms[*c.last().unwrap()].tgt;
                for m in 0..gpd.morphisms.len() {
                    if gpd.morphisms[m].src == end {
                        let mut cc = c.clone();
                        cc.push(m);
                        next.push(cc);
                    }
                }
            }
            chains = next;
        }
        for c in chains {
            let x0 = gpd.morphisms[c[0]].src;
            let xn = gpd.morphisms[*c.last().unwrap()].tgt;
            for m in 0..gpd.morphisms.len() {
                if gpd.morphisms[m].src == xn && gpd.morphisms[m].tgt == x0 {
                    level.push(LoopString {
                        mors: c.clone(),
                        closing: m,
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
        bases.push(level);
    }
    let label = |s: &LoopString| -> String {
        let parts: Vec<String> = s
            .mors
            .iter()
            .map(|m| gpd.morphisms[*m].label.clone())
            .collect();
        format!(
            "loop[{};{}]",
            parts.join(">"),
            gpd.morphisms[s.closing].label
        )
    };
    let face = |n: usize, j: usize, s: &LoopString| -> LoopString {
        if j == 0 {
            // Drop x_0: the first arrow wraps into the closing morphism.
            LoopString {
                mors: s.mors[1..].to_vec(),
                closing: gpd.comp(s.mors[0], s.closing).expect("closing composable"),
            }
        } else if j == n {
            // Drop x_n: the last arrow feeds the closing morphism.
            LoopString {
                mors: s.mors[..n - 1].to_vec(),
                closing: gpd
                    .comp(s.closing, s.mors[n - 1])
                    .expect("closing composable"),
            }
        } else {
            let mut mors = Vec::with_capacity(n - 1);
            mors.extend_from_slice(&s.mors[..j - 1]);
            mors.push(
                gpd.comp(s.mors[j], s.mors[j - 1])
                    .expect("loop string is composable"),
            );
            mors.extend_from_slice(&s.mors[j + 1..]);
            LoopString {
                mors,
                closing: s.closing,
            }
        }
    };
    let degen = |n: usize, j: usize, s: &LoopString| -> LoopString {
        let obj = if j == 0 {
            if s.mors.is_empty() {
                gpd.morphisms[s.closing].tgt
            } else {
                gpd.morphisms[s.mors[0]].src
            }
        } else if j == n {
            gpd.morphisms[s.closing].src
        } else {
            gpd.morphisms[s.mors[j - 1]].tgt
        };
        let mut mors = Vec::with_capacity(s.mors.len() + 1);
        mors.extend_from_slice(&s.mors[..j]);
        mors.push(gpd.identities[obj]);
        mors.extend_from_slice(&s.mors[j..]);
        LoopString {
            mors,
            closing: s.closing,
        }
    };
    Ok(SimplicialVS::from_basis_maps(
        field, window, bases, label, face, degen,
    ))
}

/// The explicit simplicial isomorphism from the free simplicial vector
/// space on the nerve of the loop groupoid to the loop strings of the base:
/// a string over `(p_0, .., p_{n-1}; a_n)` maps to the loop closing with
/// `(p_{n-1} .. p_0)^-1 a_n`.
pub struct LoopBarIso {
    pub nerve: SimplicialVS,
    pub loops: SimplicialVS,
    /// One matrix per level, a basis bijection.
    pub components: Vec<Matrix>,
    pub report: VerifyReport,
}

pub fn loop_bar_iso(
    base: &FinGroupoid,
    field: ScalarField,
    window: usize,
    budget: usize,
) -> Result<LoopBarIso> {
    let lg = loop_groupoid(base);
    let nerve = nerve_simplicial(&lg.groupoid, field, window, budget)?;
    let loops = loop_strings_simplicial(base, field, window, budget)?;
    // Rebuild the nerve bases to map them (same enumeration as
    // nerve_simplicial, recomputed from labels would be brittle; recompute
    // the simplex lists directly).
    let nerve_bases = nerve_bases(&lg.groupoid, window);
    let loop_bases = loop_bases(base, window);
    let loop_index: Vec<BTreeMap<LoopString, usize>> = loop_bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let mut components = Vec::new();
    let one = field.one();
    for n in 0..=window {
        let mut m = Matrix::zero(field, loops.levels[n], nerve.levels[n]);
        for (col, s) in nerve_bases[n].iter().enumerate() {
            // Underlying morphisms of the string and the final automorphism.
            let mors: Vec<usize> = s.mors.iter().map(|f| lg.morphism_data[*f].1).collect();
            let end_obj = if s.mors.is_empty() {
                s.start
            } else {
                lg.groupoid.morphisms[*s.mors.last().unwrap()].tgt
            };
            let (_, alpha_n) = lg.object_data[end_obj];
            // closing = (p_{n-1} ... p_0)^{-1} . alpha_n
            let mut comp: Option<usize> = None;
            for p in &mors {
                comp = Some(match comp {
                    None => *p,
                    Some(c) => base.comp(*p, c).expect("composable string"),
                });
            }
            let closing = match comp {
                None => alpha_n,
                Some(c) => base
                    .comp(base.inverses[c], alpha_n)
                    .expect("closing is composable"),
            };
            let target = LoopString { mors, closing };
            let row = *loop_index[n]
                .get(&target)
                .ok_or_else(|| Error::InvalidInput("loop image missing from basis".into()))?;
            m.add_entry(row, col, &one)?;
        }
        components.push(m);
    }
    // Verify: bijective on bases and commuting with all operators.
    let mut report = VerifyReport::default();
    for n in 0..=window {
        if crate::matrix::rank(&components[n]) != nerve.levels[n]
            || nerve.levels[n] != loops.levels[n]
        {
            report.record(
                n,
                "level bijection",
                Matrix::identity(field, 1),
            );
        }
    }
    for n in 1..=window {
        for j in 0..=n {
            let lhs = components[n - 1].mul(nerve.face(n, j))?;
            let rhs = loops.face(n, j).mul(&components[n])?;
            report.record(n, format!("theta d_{j} = d_{j} theta"), lhs.sub(&rhs)?);
        }
    }
    for n in 0..window {
        for j in 0..=n {
            let lhs = components[n + 1].mul(nerve.degen(n, j))?;
            let rhs = loops.degen(n, j).mul(&components[n])?;
            report.record(n, format!("theta s_{j} = s_{j} theta"), lhs.sub(&rhs)?);
        }
    }
    Ok(LoopBarIso {
        nerve,
        loops,
        components,
        report,
    })
}

fn nerve_bases(gpd: &FinGroupoid, window: usize) -> Vec<Vec<NerveSimplex>> {
    let mut bases: Vec<Vec<NerveSimplex>> = vec![(0..gpd.objects.len())
        .map(|x| NerveSimplex {
            start: x,
            mors: Vec::new(),
        })
        .collect()];
    for n in 1..=window {
        let mut level = Vec::new();
        for s in &bases[n - 1] {
            let end = if s.mors.is_empty() {
                s.start
            } else {
                gpd.morphisms[*s.mors.last().unwrap()].tgt
            };
            for m in 0..gpd.morphisms.len() {
                if gpd.morphisms[m].src == end {
                    let mut mors = s.mors.clone();
                    mors.push(m);
                    level.push(NerveSimplex {
                        start: s.start,
                        mors,
                    });
                }
            }
        }
        level.sort();
        bases.push(level);
    }
    bases
}

fn loop_bases(gpd: &FinGroupoid, window: usize) -> Vec<Vec<LoopString>> {
    let mut bases: Vec<Vec<LoopString>> = Vec::new();
    let mut level0: Vec<LoopString> = (0..gpd.morphisms.len())
        .filter(|&m| gpd.morphisms[m].src == gpd.morphisms[m].tgt)
        .map(|m| LoopString {
            mors: Vec::new(),
            closing: m,
        })
        .collect();
    level0.sort();
    bases.push(level0);
    for n in 1..=window {
        let mut chains: Vec<Vec<usize>> = (0..gpd.morphisms.len()).map(|i| vec![i]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for c in &chains {
                let end = gpd.morphisms[*c.last().unwrap()].tgt;
                for m in 0..gpd.morphisms.len() {
                    if gpd.morphisms[m].src == end {
                        let mut cc = c.clone();
                        cc.push(m);
                        next.push(cc);
                    }
                }
            }
            chains = next;
        }
        let mut level = Vec::new();
        for c in chains {
            let x0 = gpd.morphisms[c[0]].src;
            let xn = gpd.morphisms[*c.last().unwrap()].tgt;
            for m in 0..gpd.morphisms.len() {
                if gpd.morphisms[m].src == xn && gpd.morphisms[m].tgt == x0 {
                    level.push(LoopString {
                        mors: c.clone(),
                        closing: m,
                    });
                }
            }
        }
        level.sort();
        bases.push(level);
    }
    bases
}

/// A commuting pair of group elements, the holonomy data of a torus bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CommutingPair {
    pub g: usize,
    pub h: usize,
}

/// All commuting pairs of `G`, sorted.
pub fn commuting_pairs_set(g: &FinGroup) -> Vec<CommutingPair> {
    let n = g.order();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if g.mul(a, b) == g.mul(b, a) {
                out.push(CommutingPair { g: a, h: b });
            }
        }
    }
    out
}

/// The commuting-pairs groupoid: `G` acting on commuting pairs by
/// simultaneous conjugation.
pub fn commuting_pairs_groupoid(g: &FinGroup) -> FinGroupoid {
    let pairs = commuting_pairs_set(g);
    let labels: Vec<String> = pairs
        .iter()
        .map(|p| format!("({},{})", g.labels[p.g], g.labels[p.h]))
        .collect();
    let index: BTreeMap<CommutingPair, usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, i))
        .collect();
    let action: Vec<Vec<usize>> = (0..g.order())
        .map(|k| {
            pairs
                .iter()
                .map(|p| {
                    index[&CommutingPair {
                        g: g.conjugate(k, p.g),
                        h: g.conjugate(k, p.h),
                    }]
                })
                .collect()
        })
        .collect();
    action_groupoid(g, &labels, &action).expect("simultaneous conjugation is an action")
}

/// Isomorphism classes of commuting pairs (simultaneous-conjugation orbits)
/// with lexicographically least representatives.
pub fn iso_classes(g: &FinGroup) -> Vec<Vec<CommutingPair>> {
    let pairs = commuting_pairs_set(g);
    let mut seen: BTreeMap<CommutingPair, bool> = pairs.iter().map(|p| (*p, false)).collect();
    let mut classes = Vec::new();
    for p in &pairs {
        if seen[p] {
            continue;
        }
        let mut orbit: Vec<CommutingPair> = (0..g.order())
            .map(|k| CommutingPair {
                g: g.conjugate(k, p.g),
                h: g.conjugate(k, p.h),
            })
            .collect();
        orbit.sort();
        orbit.dedup();
        for q in &orbit {
            *seen.get_mut(q).unwrap() = true;
        }
        classes.push(orbit);
    }
    classes
}

/// Generators of SL(2,Z) as mapping classes of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2zGen {
    S,
    T,
    SInv,
    TInv,
}

/// A word in the generators, acting on commuting pairs; letters apply
/// right-to-left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2zWord {
    pub letters: Vec<Sl2zGen>,
}

impl Sl2zWord {
    pub fn new(letters: Vec<Sl2zGen>) -> Sl2zWord {
        Sl2zWord { letters }
    }

    pub fn parse(s: &str) -> Result<Sl2zWord> {
        let mut letters = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let inv = chars.peek() == Some(&'\'');
            if inv {
                chars.next();
            }
            match (c, inv) {
                ('S' | 's', false) => letters.push(Sl2zGen::S),
                ('S' | 's', true) => letters.push(Sl2zGen::SInv),
                ('T' | 't', false) => letters.push(Sl2zGen::T),
                ('T' | 't', true) => letters.push(Sl2zGen::TInv),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "bad SL(2,Z) letter {c:?}; expected S, T, S', T'"
                    )))
                }
            }
        }
        Ok(Sl2zWord { letters })
    }

    /// The integer matrix of the word; always has determinant 1.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| -> [[i64; 2]; 2] {
            [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ]
        };
        let mat = |g: Sl2zGen| -> [[i64; 2]; 2] {
            match g {
                Sl2zGen::S => [[0, -1], [1, 0]],
                Sl2zGen::SInv => [[0, 1], [-1, 0]],
                Sl2zGen::T => [[1, 1], [0, 1]],
                Sl2zGen::TInv => [[1, -1], [0, 1]],
            }
        };
        let mut acc = [[1, 0], [0, 1]];
        for l in &self.letters {
            acc = mul(acc, mat(*l));
        }
        acc
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// The action of one generator: `S: (g,h) -> (h, g^-1)`,
/// `T: (g,h) -> (g, hg)`.
pub fn sl2z_gen_act(group: &FinGroup, gen: Sl2zGen, p: CommutingPair) -> CommutingPair {
    match gen {
        Sl2zGen::S => CommutingPair {
            g: p.h,
            h: group.inv(p.g),
        },
        Sl2zGen::SInv => CommutingPair {
            g: group.inv(p.h),
            h: p.g,
        },
        Sl2zGen::T => CommutingPair {
            g: p.g,
            h: group.mul(p.h, p.g),
        },
        Sl2zGen::TInv => CommutingPair {
            g: p.g,
            h: group.mul(p.h, group.inv(p.g)),
        },
    }
}

/// Applies a word (letters right-to-left); the output is again commuting.
pub fn sl2z_act(group: &FinGroup, w: &Sl2zWord, p: CommutingPair) -> CommutingPair {
    let mut cur = p;
    for l in w.letters.iter().rev() {
        cur = sl2z_gen_act(group, *l, cur);
    }
    debug_assert_eq!(group.mul(cur.g, cur.h), group.mul(cur.h, cur.g));
    cur
}

/// One SL(2,Z) orbit of conjugation classes.
#[derive(Clone, Debug)]
pub struct Sl2zOrbit {
    /// Indices into the class list of `iso_classes`.
    pub class_indices: Vec<usize>,
    pub representative: CommutingPair,
}

/// Orbits of the induced SL(2,Z)-action on simultaneous-conjugation classes,
/// generated by S and T, breadth-first with canonical representatives.
pub fn sl2z_orbits(group: &FinGroup) -> Vec<Sl2zOrbit> {
    let classes = iso_classes(group);
    let class_of = |p: CommutingPair| -> usize {
        classes
            .iter()
            .position(|c| c.contains(&p))
            .expect("every commuting pair lies in a class")
    };
    let mut assigned = vec![false; classes.len()];
    let mut orbits = Vec::new();
    for start in 0..classes.len() {
        if assigned[start] {
            continue;
        }
        let mut frontier = vec![start];
        let mut members = vec![start];
        assigned[start] = true;
        while let Some(c) = frontier.pop() {
            let rep = classes[c][0];
            for gen in [Sl2zGen::S, Sl2zGen::T, Sl2zGen::SInv, Sl2zGen::TInv] {
                let next = class_of(sl2z_gen_act(group, gen, rep));
                if !assigned[next] {
                    assigned[next] = true;
                    members.push(next);
                    frontier.push(next);
                }
            }
        }
        members.sort();
        orbits.push(Sl2zOrbit {
            representative: classes[members[0]][0],
            class_indices: members,
        });
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{drinfeld_double, Bimodule};
    use crate::chains::normalized_chains;

    fn q() -> ScalarField {
        ScalarField::Q
    }

    #[test]
    fn conjugation_groupoid_shapes() {
        // Z/2 acting on itself by conjugation: trivial action, 2 objects
        // each with 2 automorphisms.
        let z2 = FinGroup::cyclic(2);
        let gg = conjugation_groupoid(&z2);
        assert_eq!(gg.objects.len(), 2);
        assert_eq!(gg.morphisms.len(), 4);
        assert_eq!(gg.hom(0, 0).len(), 2);
        assert_eq!(gg.hom(0, 1).len(), 0);
        // S3 // S3: 6 objects, 36 morphisms.
        let s3 = FinGroup::symmetric3();
        let gg = conjugation_groupoid(&s3);
        assert_eq!(gg.objects.len(), 6);
        assert_eq!(gg.morphisms.len(), 36);
        // Trivial group: discrete.
        let e = FinGroup::cyclic(1);
        let gg = conjugation_groupoid(&e);
        assert_eq!(gg.morphisms.len(), 1);
    }

    #[test]
    fn invalid_action_rejected() {
        let z2 = FinGroup::cyclic(2);
        // "Action" where the identity moves a point.
        let bad = vec![vec![1usize, 0], vec![0, 1]];
        assert!(action_groupoid(&z2, &["a".into(), "b".into()], &bad).is_err());
    }

    #[test]
    fn loop_groupoid_of_bz2() {
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let lg = loop_groupoid(&bg);
        // Two objects (one per automorphism), each with Z/2 automorphisms.
        assert_eq!(lg.groupoid.objects.len(), 2);
        assert_eq!(lg.groupoid.morphisms.len(), 4);
        assert_eq!(lg.groupoid.hom(0, 1).len(), 0);
    }

    #[test]
    fn loop_of_discrete_is_discrete() {
        let d = FinGroupoid::discrete(3);
        let lg = loop_groupoid(&d);
        assert_eq!(lg.groupoid.objects.len(), 3);
        assert_eq!(lg.groupoid.morphisms.len(), 3);
    }

    #[test]
    fn loop_of_conjugation_groupoid_is_commuting_pairs() {
        let s3 = FinGroup::symmetric3();
        let lg = loop_groupoid(&conjugation_groupoid(&s3));
        assert_eq!(lg.groupoid.objects.len(), commuting_pairs_set(&s3).len());
        assert_eq!(lg.groupoid.objects.len(), 18);
    }

    #[test]
    fn nerve_homology_of_bz2() {
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let s = nerve_simplicial(&bg, q(), 3, 10_000).unwrap();
        assert!(s.verify_identities().verified());
        let n = normalized_chains(&s).unwrap();
        // Nondegenerate strings avoid the identity: dims 1, 1, 1, 1.
        assert_eq!(n.complex.levels, vec![1, 1, 1, 1]);
        assert_eq!(n.complex.homology(0).unwrap().dim, 1);
        assert_eq!(n.complex.homology(1).unwrap().dim, 0);
    }

    #[test]
    fn nerve_homology_of_loop_bz2() {
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let lg = loop_groupoid(&bg);
        // Over Q: two components, higher homology vanishes.
        let s = nerve_simplicial(&lg.groupoid, q(), 3, 10_000).unwrap();
        let n = normalized_chains(&s).unwrap();
        assert_eq!(n.complex.homology(0).unwrap().dim, 2);
        assert_eq!(n.complex.homology(1).unwrap().dim, 0);
        assert_eq!(n.complex.homology(2).unwrap().dim, 0);
        // Over F2: H_n has dimension 2 in every window degree.
        let f2 = ScalarField::Fp(2);
        let s = nerve_simplicial(&lg.groupoid, f2, 4, 10_000).unwrap();
        let n = normalized_chains(&s).unwrap();
        for deg in 0..4 {
            assert_eq!(n.complex.homology(deg).unwrap().dim, 2, "degree {deg}");
        }
    }

    #[test]
    fn loop_bar_iso_bz2() {
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let iso = loop_bar_iso(&bg, q(), 4, 100_000).unwrap();
        assert!(iso.report.verified());
        // Level dims match on both sides.
        assert_eq!(iso.nerve.levels, iso.loops.levels);
    }

    #[test]
    fn loop_bar_iso_base_case_sends_object_to_its_loop() {
        // n = 0: the object (x, a) maps to the closing loop a at x.
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let lg = loop_groupoid(&bg);
        let iso = loop_bar_iso(&bg, q(), 2, 10_000).unwrap();
        let lbases = loop_bases(&bg, 0);
        for (oi, (x, a)) in lg.object_data.iter().enumerate() {
            let col = iso.components[0].col(oi);
            assert_eq!(col.len(), 1);
            let row = col[0].0;
            assert_eq!(lbases[0][row].closing, *a);
            assert_eq!(bg.morphisms[lbases[0][row].closing].src, *x);
        }
    }

    #[test]
    fn loop_bar_iso_degree_one_value() {
        // For BZ/2, the commuting square over phi_0 = s with alpha_1 = s
        // maps to the loop (s; e): closing = (phi_0)^-1 alpha_1.
        let z2 = FinGroup::cyclic(2);
        let bg = FinGroupoid::from_group(&z2);
        let lg = loop_groupoid(&bg);
        let iso = loop_bar_iso(&bg, q(), 2, 10_000).unwrap();
        let nbases = nerve_bases(&lg.groupoid, 2);
        let lbases = loop_bases(&bg, 2);
        // Locate the degree-1 nerve string whose underlying morphism is s
        // and whose endpoint automorphism is s.
        let col = nbases[1]
            .iter()
            .position(|s1| {
                let (_, f) = lg.morphism_data[s1.mors[0]];
                let end = lg.groupoid.morphisms[s1.mors[0]].tgt;
                let (_, alpha) = lg.object_data[end];
                f == 1 && alpha == 1
            })
            .unwrap();
        let image = iso.components[1].col(col);
        assert_eq!(image.len(), 1);
        let target = &lbases[1][image[0].0];
        assert_eq!(target.mors, vec![1]);
        assert_eq!(target.closing, 0);
    }

    #[test]
    fn loop_bar_iso_z3_conjugation() {
        // Exhaustive check for Z/3 // Z/3 at window 4.
        let z3 = FinGroup::cyclic(3);
        let gg = conjugation_groupoid(&z3);
        let iso = loop_bar_iso(&gg, q(), 4, 100_000).unwrap();
        assert!(iso.report.verified());
    }

    #[test]
    fn nerve_budget_error_names_level() {
        let s3 = FinGroup::symmetric3();
        let gg = conjugation_groupoid(&s3);
        let err = nerve_simplicial(&gg, q(), 3, 100).unwrap_err();
        match err {
            crate::error::Error::BudgetExceeded { level, size, .. } => {
                // Level 2 holds the 36 * 6 composable pairs.
                assert_eq!(level, 2);
                assert_eq!(size, 216);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn loop_strings_satisfy_simplicial_identities() {
        let z3 = FinGroup::cyclic(3);
        let gg = conjugation_groupoid(&z3);
        let s = loop_strings_simplicial(&gg, q(), 3, 100_000).unwrap();
        assert!(s.verify_identities().verified());
        let s3 = FinGroup::symmetric3();
        let bg = FinGroupoid::from_group(&s3);
        let s = loop_strings_simplicial(&bg, q(), 2, 100_000).unwrap();
        assert!(s.verify_identities().verified());
    }

    #[test]
    fn loop_bar_iso_with_cross_object_morphisms() {
        // S3 // S3 has morphisms between distinct objects, unlike the
        // abelian conjugation groupoids.
        let s3 = FinGroup::symmetric3();
        let gg = conjugation_groupoid(&s3);
        assert!((0..6).any(|x| (0..6).any(|y| x != y && !gg.hom(x, y).is_empty())));
        let iso = loop_bar_iso(&gg, q(), 2, 1_000_000).unwrap();
        assert!(iso.report.verified());
        assert_eq!(iso.nerve.levels, iso.loops.levels);
    }

    #[test]
    fn commuting_pairs_and_classes() {
        let z2 = FinGroup::cyclic(2);
        assert_eq!(commuting_pairs_set(&z2).len(), 4);
        assert_eq!(iso_classes(&z2).len(), 4);
        let s3 = FinGroup::symmetric3();
        assert_eq!(commuting_pairs_set(&s3).len(), 18);
        // Brute-force class count is 8.
        assert_eq!(iso_classes(&s3).len(), 8);
        let e = FinGroup::cyclic(1);
        assert_eq!(iso_classes(&e).len(), 1);
    }

    #[test]
    fn loop_of_conjugation_matches_double_h0() {
        // dim H_0 of nerve chains on Lambda(G // G) equals the class count
        // and the Hochschild H_0 of the Drinfeld double.
        let z2 = FinGroup::cyclic(2);
        let lg = loop_groupoid(&conjugation_groupoid(&z2));
        let s = nerve_simplicial(&lg.groupoid, q(), 1, 10_000).unwrap();
        let n = normalized_chains(&s).unwrap();
        let h0 = n.complex.homology(0).unwrap().dim;
        assert_eq!(h0, iso_classes(&z2).len());
        let d = drinfeld_double(q(), &z2);
        let m = Bimodule::regular(&d);
        let h = crate::algebra::hochschild_complex(&d, &m, 2, 1000).unwrap();
        assert_eq!(h.complex().homology(0).unwrap().dim, h0);
    }

    #[test]
    fn sl2z_relations() {
        // S^4 = id and (ST)^3 = S^2 as permutations of commuting pairs.
        use Sl2zGen::*;
        for group in [FinGroup::cyclic(2), FinGroup::cyclic(4), FinGroup::symmetric3()] {
            let s4 = Sl2zWord::new(vec![S, S, S, S]);
            let st3 = Sl2zWord::new(vec![S, T, S, T, S, T]);
            let s2 = Sl2zWord::new(vec![S, S]);
            for p in commuting_pairs_set(&group) {
                assert_eq!(sl2z_act(&group, &s4, p), p);
                assert_eq!(sl2z_act(&group, &st3, p), sl2z_act(&group, &s2, p));
            }
        }
    }

    #[test]
    fn sl2z_matrices() {
        use Sl2zGen::*;
        let st3 = Sl2zWord::new(vec![S, T, S, T, S, T]);
        assert_eq!(st3.matrix(), [[-1, 0], [0, -1]]);
        assert_eq!(st3.determinant(), 1);
        let s = Sl2zWord::new(vec![S]);
        assert_eq!(s.matrix(), [[0, -1], [1, 0]]);
        let w = Sl2zWord::parse("ST'S'T").unwrap();
        assert_eq!(w.determinant(), 1);
    }

    #[test]
    fn t_sends_g_e_to_g_g() {
        let s3 = FinGroup::symmetric3();
        let t = Sl2zWord::new(vec![Sl2zGen::T]);
        for g in 0..6 {
            let p = CommutingPair {
                g,
                h: s3.identity,
            };
            assert_eq!(sl2z_act(&s3, &t, p), CommutingPair { g, h: g });
        }
    }

    #[test]
    fn sl2z_action_commutes_with_conjugation() {
        let s3 = FinGroup::symmetric3();
        use Sl2zGen::*;
        let words = [
            Sl2zWord::new(vec![S]),
            Sl2zWord::new(vec![T]),
            Sl2zWord::new(vec![S, T, SInv]),
            Sl2zWord::new(vec![T, T, S]),
        ];
        for w in &words {
            for p in commuting_pairs_set(&s3) {
                for k in 0..6 {
                    let conj = CommutingPair {
                        g: s3.conjugate(k, p.g),
                        h: s3.conjugate(k, p.h),
                    };
                    let lhs = sl2z_act(&s3, w, conj);
                    let rhs = sl2z_act(&s3, w, p);
                    let rhs = CommutingPair {
                        g: s3.conjugate(k, rhs.g),
                        h: s3.conjugate(k, rhs.h),
                    };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sl2z_orbits_examples() {
        // Z/2: {(e,e)} and the three nontrivial pairs.
        let z2 = FinGroup::cyclic(2);
        let orbits = sl2z_orbits(&z2);
        assert_eq!(orbits.len(), 2);
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.class_indices.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
        assert_eq!(
            orbits[0].representative,
            CommutingPair { g: 0, h: 0 }
        );
        // Trivial group: one orbit.
        assert_eq!(sl2z_orbits(&FinGroup::cyclic(1)).len(), 1);
        // S3: orbit sizes sum to the 8 classes.
        let s3 = FinGroup::symmetric3();
        let orbits = sl2z_orbits(&s3);
        let total: usize = orbits.iter().map(|o| o.class_indices.len()).sum();
        assert_eq!(total, 8);
    }
}
