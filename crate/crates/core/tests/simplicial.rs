use std::sync::Arc;

use kanfib::group::cyclic;
use kanfib::groupoid::{nerve, FiniteGroupoid};
use kanfib::hom::enumerate_maps;
use kanfib::iso::are_isomorphic;
use kanfib::map::{fiber_product, SimplicialMap};
use kanfib::simplicial::{product, skeleton, standard_complex, StandardKind};
use kanfib::{Error, SimplicialSet};

/// Nerve tables of Z/2 written out by hand: level n is the set of n-tuples
/// of elements, encoded as binary numbers with the first arrow most
/// significant.
fn c2_nerve_oracle(top: usize) -> (Vec<usize>, Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>) {
    let decode = |n: usize, x: usize| -> Vec<usize> { (0..n).map(|k| (x >> (n - 1 - k)) & 1).collect() };
    let encode = |s: &[usize]| s.iter().fold(0, |acc, &b| acc * 2 + b);
    let counts: Vec<usize> = (0..=top).map(|n| 1 << n).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    for n in 1..=top {
        for i in 0..=n {
            let table = (0..counts[n])
                .map(|x| {
                    let s = decode(n, x);
                    let t: Vec<usize> = if n == 1 {
                        vec![]
                    } else if i == 0 {
                        s[1..].to_vec()
                    } else if i == n {
                        s[..n - 1].to_vec()
                    } else {
                        let mut t = s[..i - 1].to_vec();
                        t.push(s[i - 1] ^ s[i]);
                        t.extend_from_slice(&s[i + 1..]);
                        t
                    };
                    encode(&t)
                })
                .collect();
            faces[n].push(table);
        }
    }
    for n in 0..top {
        for i in 0..=n {
            let table = (0..counts[n])
                .map(|x| {
                    let mut s = decode(n, x);
                    s.insert(i, 0);
                    encode(&s)
                })
                .collect();
            degens[n].push(table);
        }
    }
    (counts, faces, degens)
}

#[test]
fn point_complex_is_valid() {
    let p = SimplicialSet::point(4);
    assert_eq!(p.counts(), &[1, 1, 1, 1, 1]);
}

#[test]
fn c2_nerve_tables_validate_and_match_the_nerve() {
    let (counts, faces, degens) = c2_nerve_oracle(3);
    let built = SimplicialSet::build(3, counts, faces, degens).unwrap();
    assert_eq!(built.counts(), &[1, 2, 4, 8]);
    let n = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3);
    assert_eq!(n.set.counts(), &[1, 2, 4, 8]);
    assert_eq!(n.set.as_ref().clone().without_labels(), built);
}

#[test]
fn corrupted_face_is_an_identity_violation() {
    let (counts, mut faces, degens) = c2_nerve_oracle(3);
    // d0 of the 2-cell (1,1) should be 1; pointing it at 0 breaks d0d1 = d0d0
    // on the 3-cells having (1,1) as a face.
    faces[2][0][3] ^= 1;
    match SimplicialSet::build(3, counts, faces, degens) {
        Err(Error::IdentityViolation { identity, .. }) if identity == "d0d1 = d0d0" => {}
        other => panic!("expected identity violation, got {other:?}"),
    }
}

#[test]
fn missing_table_is_reported() {
    let (counts, mut faces, degens) = c2_nerve_oracle(2);
    faces[2].pop();
    assert!(matches!(
        SimplicialSet::build(2, counts, faces, degens),
        Err(Error::MissingTableEntry(_))
    ));
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn standard_simplex_counts() {
    let d2 = standard_complex(StandardKind::Simplex, 2, 2).unwrap();
    assert_eq!(d2.set.counts(), &[3, 6, 10]);
    for m in 0..4 {
        let d = standard_complex(StandardKind::Simplex, m, 4).unwrap();
        for n in 0..=4 {
            // non-decreasing sequences of length n+1 in [m]
            assert_eq!(d.set.count(n), binomial(m + n + 1, n + 1));
        }
    }
}

#[test]
fn horn_has_only_the_spine_edges() {
    let h = standard_complex(StandardKind::Horn { j: 1 }, 2, 2).unwrap();
    let census = h.set.census();
    assert_eq!(census, vec![3, 2, 0]);
    let edges: Vec<&str> = h.set.nondegenerate(1).iter().map(|&e| h.set.label(1, e).unwrap()).collect();
    assert_eq!(edges, vec!["01", "12"]);
}

#[test]
fn boundary_of_an_edge_is_two_points() {
    let b = standard_complex(StandardKind::Boundary, 1, 1).unwrap();
    assert_eq!(b.set.counts(), &[2, 2]);
    assert_eq!(b.set.census(), vec![2, 0]);
}

#[test]
fn horn_index_out_of_range() {
    assert!(matches!(
        standard_complex(StandardKind::Horn { j: 3 }, 2, 2),
        Err(Error::InvalidIndex(_))
    ));
}

#[test]
fn product_census() {
    let d1 = standard_complex(StandardKind::Simplex, 1, 3).unwrap().set;
    let d2 = standard_complex(StandardKind::Simplex, 2, 3).unwrap().set;
    let sq = product(&d1.truncate(2).unwrap(), &d1.truncate(2).unwrap()).unwrap();
    assert_eq!(sq.census(), vec![4, 5, 2]);
    let prism = product(&d1, &d2).unwrap();
    assert_eq!(prism.census()[3], 3);
}

#[test]
fn product_with_point_is_the_factor() {
    let d2 = Arc::new(standard_complex(StandardKind::Simplex, 2, 3).unwrap().set);
    let p = product(&d2, &SimplicialSet::point(3)).unwrap();
    assert!(are_isomorphic(&d2, &Arc::new(p)));
}

#[test]
fn product_truncation_mismatch() {
    assert!(matches!(
        product(&SimplicialSet::point(2), &SimplicialSet::point(3)),
        Err(Error::TruncationMismatch(_))
    ));
}

#[test]
fn product_is_associative_up_to_relabeling() {
    let d1 = standard_complex(StandardKind::Simplex, 1, 3).unwrap().set;
    let c2 = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3).set;
    let pair = nerve(&FiniteGroupoid::pair(2), 3).set;
    let left = product(&product(&d1, &c2).unwrap(), &pair).unwrap();
    let right = product(&d1, &product(&c2, &pair).unwrap()).unwrap();
    assert!(are_isomorphic(&Arc::new(left), &Arc::new(right)));
}

#[test]
fn skeleton_of_simplex_is_boundary() {
    let d2 = standard_complex(StandardKind::Simplex, 2, 3).unwrap().set;
    let b2 = standard_complex(StandardKind::Boundary, 2, 3).unwrap().set;
    assert_eq!(skeleton(&d2, 1).unwrap(), b2);
}

#[test]
fn top_skeleton_is_identity() {
    let x = nerve(&FiniteGroupoid::pair(2), 3).set;
    assert_eq!(&skeleton(&x, 3).unwrap(), x.as_ref());
}

#[test]
fn zero_skeleton_of_c2_nerve() {
    let x = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3).set;
    let s = skeleton(&x, 0).unwrap();
    assert_eq!(s.counts(), &[1, 1, 1, 1]);
}

#[test]
fn degeneracy_test() {
    let d1 = standard_complex(StandardKind::Simplex, 1, 2).unwrap();
    let e00 = d1.id_of(&[0, 0]).unwrap();
    assert_eq!(d1.set.is_degenerate(1, e00), Some((0, d1.id_of(&[0]).unwrap())));
    let d2 = standard_complex(StandardKind::Simplex, 2, 2).unwrap();
    assert_eq!(d2.set.is_degenerate(2, d2.id_of(&[0, 1, 2]).unwrap()), None);
    // In the C2 nerve, (g, e) is s_1 g.
    let n = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3);
    for g in 0..2 {
        let c = n.cell_of(&[g, 0]).unwrap();
        let (i, y) = n.set.is_degenerate(2, c).unwrap();
        if g == 1 {
            assert_eq!((i, y), (1, n.cell_of(&[1]).unwrap()));
        }
    }
}

#[test]
fn apply_operator_matches_sequences() {
    let d3 = standard_complex(StandardKind::Simplex, 3, 4).unwrap();
    let top = d3.id_of(&[0, 1, 2, 3]).unwrap();
    for seq in [vec![0, 2], vec![1, 1, 3], vec![0, 0, 2, 2, 3], vec![3]] {
        let c = d3.set.apply_operator(3, top, &seq).unwrap();
        assert_eq!(d3.seq(seq.len() - 1, c), seq.as_slice());
    }
    assert!(d3.set.apply_operator(3, top, &[2, 1]).is_err());
}

#[test]
fn fiber_product_over_point_is_product() {
    let pt = Arc::new(SimplicialSet::point(3));
    let a = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3).set;
    let b = nerve(&FiniteGroupoid::pair(2), 3).set;
    let fa = SimplicialMap::constant(a.clone(), pt.clone(), 0).unwrap();
    let fb = SimplicialMap::constant(b.clone(), pt.clone(), 0).unwrap();
    let fp = fiber_product(&fa, &fb).unwrap();
    assert_eq!(fp.set.as_ref(), &product(&a, &b).unwrap().without_labels());
}

#[test]
fn pullback_along_identity_of_point() {
    let pt = Arc::new(SimplicialSet::point(3));
    let x = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3).set;
    let f = SimplicialMap::constant(x.clone(), pt.clone(), 0).unwrap();
    let fp = fiber_product(&f, &SimplicialMap::identity(pt)).unwrap();
    assert!(are_isomorphic(&fp.set, &x));
    assert!(fp.left.is_bijective());
}

#[test]
fn fiber_product_target_mismatch() {
    let x = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3).set;
    let y = nerve(&FiniteGroupoid::pair(2), 3).set;
    assert!(matches!(
        fiber_product(&SimplicialMap::identity(x), &SimplicialMap::identity(y)),
        Err(Error::TargetMismatch)
    ));
}

/// Every cone `W → A, W → B` over `C` factors through the fiber product in
/// exactly one way.
#[test]
fn fiber_product_universal_property() {
    let c2 = FiniteGroupoid::from_group(&cyclic(2));
    let pair = FiniteGroupoid::pair(2);
    let a = nerve(&pair, 2).set;
    let c = nerve(&c2, 2).set;
    let w = Arc::new(standard_complex(StandardKind::Simplex, 1, 2).unwrap().set);
    let maps_ac = enumerate_maps(&a, &c).unwrap();
    let f = &maps_ac[maps_ac.len() - 1];
    let g = &maps_ac[0];
    let fp = fiber_product(f, g).unwrap();
    let into_p = enumerate_maps(&w, &fp.set).unwrap();
    let wa = enumerate_maps(&w, &a).unwrap();
    let mut cones = 0;
    for u in &wa {
        for v in &wa {
            if u.then(f).unwrap().tables() != v.then(g).unwrap().tables() {
                continue;
            }
            cones += 1;
            let factors = into_p
                .iter()
                .filter(|h| {
                    h.then(&fp.left).unwrap().tables() == u.tables()
                        && h.then(&fp.right).unwrap().tables() == v.tables()
                })
                .count();
            assert_eq!(factors, 1);
        }
    }
    assert_eq!(cones, into_p.len());
}
