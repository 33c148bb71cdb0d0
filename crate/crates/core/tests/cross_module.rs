//! Integration checks that route one quantity through two independent
//! module paths.

use hochbar_core::algebra::{
    commutator_quotient, drinfeld_double, group_algebra, hochschild_complex, Bimodule, FinGroup,
};
use hochbar_core::chains::{normalized_chains, shuffle_map, verify_chain_map, SimplicialVS};
use hochbar_core::gpd::{
    conjugation_groupoid, iso_classes, loop_groupoid, nerve_simplicial, FinGroupoid,
};
use hochbar_core::ScalarField;

fn q() -> ScalarField {
    ScalarField::Q
}

#[test]
fn double_h0_equals_bundle_count_for_small_groups() {
    // dim H_0 CH(D(G)) = |iso classes of commuting pairs| = dim H_0 of the
    // nerve chains on the loop groupoid of G // G.
    for group in [FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::symmetric3()] {
        let d = drinfeld_double(q(), &group);
        let m = Bimodule::regular(&d);
        let h = hochschild_complex(&d, &m, 2, 50_000).unwrap();
        let h0 = h.complex().homology_dim(0).unwrap();
        assert_eq!(h0, iso_classes(&group).len());
        assert_eq!(h0, commutator_quotient(&d).unwrap().dim);

        let lg = loop_groupoid(&conjugation_groupoid(&group));
        let nerve = nerve_simplicial(&lg.groupoid, q(), 1, 100_000).unwrap();
        let n = normalized_chains(&nerve).unwrap();
        assert_eq!(n.complex.homology_dim(0).unwrap(), h0);
    }
}

#[test]
fn double_of_z2_matches_loop_nerve_in_all_degrees_over_f2() {
    // Over F2 both sides have nontrivial homology in every degree: the
    // double of Z/2 splits as two copies of F2[x]/x^2, and the loop
    // groupoid of Z/2 // Z/2 is four copies of BZ/2.
    let f2 = ScalarField::Fp(2);
    let z2 = FinGroup::cyclic(2);
    let d = drinfeld_double(f2, &z2);
    let m = Bimodule::regular(&d);
    let h = hochschild_complex(&d, &m, 4, 100_000).unwrap();
    let algebra_dims = h.complex().homology_dims().unwrap();
    let lg = loop_groupoid(&conjugation_groupoid(&z2));
    let nerve = nerve_simplicial(&lg.groupoid, f2, 4, 100_000).unwrap();
    let n = normalized_chains(&nerve).unwrap();
    let nerve_dims = n.complex.homology_dims().unwrap();
    assert_eq!(algebra_dims, vec![4, 4, 4, 4]);
    assert_eq!(algebra_dims, nerve_dims);
}

#[test]
fn indiscrete_groupoid_nerve_is_contractible() {
    // One morphism between any two objects: the nerve is contractible,
    // and normalization sees that in every field.
    use hochbar_core::gpd::GpdMor;
    let n_obj = 3usize;
    let objects: Vec<String> = (0..n_obj).map(|i| format!("x{i}")).collect();
    let mut morphisms = Vec::new();
    for x in 0..n_obj {
        for y in 0..n_obj {
            morphisms.push(GpdMor {
                src: x,
                tgt: y,
                label: format!("({x}->{y})"),
            });
        }
    }
    let idx = |x: usize, y: usize| x * n_obj + y;
    let nm = morphisms.len();
    let mut compose = vec![vec![None; nm]; nm];
    for x in 0..n_obj {
        for y in 0..n_obj {
            for z in 0..n_obj {
                compose[idx(y, z)][idx(x, y)] = Some(idx(x, z));
            }
        }
    }
    let gpd = FinGroupoid::new(objects, morphisms, compose).unwrap();
    for field in [q(), ScalarField::Fp(2)] {
        let nerve = nerve_simplicial(&gpd, field, 4, 100_000).unwrap();
        let n = normalized_chains(&nerve).unwrap();
        assert_eq!(n.complex.homology_dims().unwrap(), vec![1, 0, 0, 0]);
    }
}

fn nerve_of_group(g: &FinGroup, window: usize) -> SimplicialVS {
    nerve_simplicial(&FinGroupoid::from_group(g), q(), window, 100_000).unwrap()
}

#[test]
fn shuffle_map_is_a_chain_map_on_nerves() {
    // d . nabla = nabla . d for the Eilenberg-Zilber map on the nerves of
    // BZ/2 and BZ/3, degrees <= 3.
    let a = nerve_of_group(&FinGroup::cyclic(2), 3);
    let b = nerve_of_group(&FinGroup::cyclic(3), 3);
    let data = shuffle_map(&a, &b).unwrap();
    assert!(verify_chain_map(&data.tensor, &data.nprod.complex, &data.map).verified());
}

#[test]
fn shuffle_map_degree_one_expansion() {
    // On x (x) y with p = q = 1 the map is (s_1 x, s_0 y) - (s_0 x, s_1 y).
    let a = nerve_of_group(&FinGroup::cyclic(2), 3);
    let data = shuffle_map(&a, &a).unwrap();
    // Both normalized level-1 bases are one-dimensional (the nonidentity
    // string), so the block at (1,1) is a single column.
    let na = &data.na;
    assert_eq!(na.complex.levels[1], 1);
    let x_lift = na.lift[1].col(0).clone();
    let s1x = a.degen(1, 1).apply(&x_lift);
    let s0x = a.degen(1, 0).apply(&x_lift);
    let s1y = s1x.clone();
    let s0y = s0x.clone();
    // Expected vector in (a x a)_2 coordinates, then normalized.
    let dim2 = a.levels[2];
    let mut expected = vec![q().zero(); dim2 * dim2];
    for (i, ci) in &s1x {
        for (j, cj) in &s0y {
            expected[i * dim2 + j] = expected[i * dim2 + j].add(&ci.mul(cj));
        }
    }
    for (i, ci) in &s0x {
        for (j, cj) in &s1y {
            expected[i * dim2 + j] = expected[i * dim2 + j].sub(&ci.mul(cj));
        }
    }
    let expected_vec: Vec<(usize, _)> = expected
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let projected = data.nprod.proj[2].apply(&expected_vec);
    // The tensor level 2 of N(a) (x) N(a) has blocks (0,2), (1,1), (2,0),
    // each one-dimensional; the (1,1) block is the middle column.
    let got = data.map.components[2].col(1).clone();
    assert_eq!(got, projected);
}

#[test]
fn shuffle_map_is_associative_up_to_degree_three() {
    // nabla . (nabla (x) id) = nabla . (id (x) nabla) as maps into
    // N(a x b x c), compared on all basis columns of total degree <= 3.
    let a = nerve_of_group(&FinGroup::cyclic(2), 3);
    let b = nerve_of_group(&FinGroup::cyclic(3), 3);
    let c = nerve_of_group(&FinGroup::cyclic(2), 3);
    let ab = shuffle_map(&a, &b).unwrap();
    let bc = shuffle_map(&b, &c).unwrap();
    let ab_c = shuffle_map(&ab.product, &c).unwrap();
    let a_bc = shuffle_map(&a, &bc.product).unwrap();
    // The two product simplicial objects (a x b) x c and a x (b x c) have
    // identical operator matrices by Kronecker associativity.
    for n in 1..=3usize {
        for j in 0..=n {
            assert_eq!(ab_c.product.face(n, j), a_bc.product.face(n, j));
        }
    }
    let na = &ab.na.complex.levels;
    let nb = &ab.nb.complex.levels;
    let nc = &bc.nb.complex.levels;
    // A basis column of N(a)_p (x) N(b)_q (x) N(c)_r maps both ways; the
    // iterated tensor complexes locate it at different offsets.
    for n in 0..=3usize {
        for p in 0..=n {
            for qd in 0..=n - p {
                let r = n - p - qd;
                for i in 0..na[p] {
                    for j in 0..nb[qd] {
                        for l in 0..nc[r] {
                            // Left route: column of (N a (x) N b) (x) N c.
                            // The (ab)-tensor offset at degree p + q:
                            let s_deg = p + qd;
                            let mut ab_off = 0usize;
                            for pp in 0..p {
                                ab_off += na[pp] * nb[s_deg - pp];
                            }
                            let ab_index = ab_off + i * nb[qd] + j;
                            let mut col_l = 0usize;
                            for ss in 0..s_deg {
                                col_l += ab.tensor.levels[ss] * nc[n - ss];
                            }
                            col_l += ab_index * nc[r] + l;
                            // Apply nabla_ab (x) id, then nabla_(ab)c.
                            let v1 = ab.map.components[s_deg].col(ab_index);
                            let mut lhs = Vec::new();
                            for (row_ab, s1) in v1 {
                                // Position of (row_ab, l) inside the
                                // ((ab) x c)-tensor at degree n.
                                let mut off = 0usize;
                                for ss in 0..s_deg {
                                    off += ab.nprod.complex.levels[ss] * nc[n - ss];
                                }
                                let idx = off + row_ab * nc[r] + l;
                                for (row_final, s2) in ab_c.map.components[n].col(idx) {
                                    lhs.push((*row_final, s1.mul(s2)));
                                }
                            }
                            lhs.sort_by_key(|(i2, _)| *i2);
                            // Right route: a (x) (b x c).
                            let t_deg = qd + r;
                            let mut bc_off = 0usize;
                            for qq in 0..qd {
                                bc_off += nb[qq] * nc[t_deg - qq];
                            }
                            let bc_index = bc_off + j * nc[r] + l;
                            let v2 = bc.map.components[t_deg].col(bc_index);
                            let mut rhs = Vec::new();
                            for (row_bc, s1) in v2 {
                                let mut off = 0usize;
                                for pp in 0..p {
                                    off += na[pp] * bc.nprod.complex.levels[n - pp];
                                }
                                let idx = off + i * bc.nprod.complex.levels[t_deg] + row_bc;
                                for (row_final, s2) in a_bc.map.components[n].col(idx) {
                                    rhs.push((*row_final, s1.mul(s2)));
                                }
                            }
                            rhs.sort_by_key(|(i2, _)| *i2);
                            let _ = col_l;
                            assert_eq!(
                                lhs, rhs,
                                "associativity fails at (p,q,r)=({p},{qd},{r}), (i,j,l)=({i},{j},{l})"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn semisimple_group_algebra_h0_matches_class_count() {
    let s3 = FinGroup::symmetric3();
    let a = group_algebra(q(), &s3);
    let m = Bimodule::regular(&a);
    let h = hochschild_complex(&a, &m, 4, 100_000).unwrap();
    let dims: Vec<usize> = h.complex().homology_dims().unwrap();
    assert_eq!(dims, vec![3, 0, 0, 0]);
    assert_eq!(commutator_quotient(&a).unwrap().dim, 3);
}

#[test]
fn loops_of_one_object_category_match_hochschild_levels() {
    // The loop space of the one-object category of A has levels
    // A^(x (n+1)); after normalization it is the Hochschild complex.
    let a = group_algebra(q(), &FinGroup::cyclic(2));
    let c = hochbar_core::lincat::one_object_category(&a);
    let f = hochbar_core::lincat::hom_bimodule(&c);
    let hm = hochbar_core::lincat::hm_complex(&c, &f, 3, 10_000).unwrap();
    for n in 0..=3usize {
        assert_eq!(hm.simplicial.levels[n], a.dim.pow(n as u32 + 1));
    }
    let m = Bimodule::regular(&a);
    let hh = hochschild_complex(&a, &m, 3, 10_000).unwrap();
    assert_eq!(hm.complex().levels, hh.complex().levels);
}
