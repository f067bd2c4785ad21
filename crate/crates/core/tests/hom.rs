use std::sync::Arc;

use kanfib::group::cyclic;
use kanfib::groupoid::{nerve, FiniteGroupoid};
use kanfib::hom::{
    boundary_restriction, count_maps, cylinder, enumerate_maps, find_natural_transformations,
    horn_restriction,
};
use kanfib::iso::are_isomorphic;
use kanfib::simplicial::{standard_complex, StandardKind};
use kanfib::{Error, SimplicialMap, SimplicialSet};

fn c2(top: usize) -> Arc<SimplicialSet> {
    nerve(&FiniteGroupoid::from_group(&cyclic(2)), top).set
}

fn pair2(top: usize) -> Arc<SimplicialSet> {
    nerve(&FiniteGroupoid::pair(2), top).set
}

fn simplex(m: usize, top: usize) -> Arc<SimplicialSet> {
    Arc::new(standard_complex(StandardKind::Simplex, m, top).unwrap().set)
}

#[test]
fn maps_from_simplices_count_cells() {
    for x in [c2(3), pair2(3)] {
        for n in 0..=3 {
            let maps = enumerate_maps(&simplex(n, n), &x).unwrap();
            assert_eq!(maps.len(), x.count(n));
        }
    }
}

#[test]
fn maps_from_horn_into_pair_groupoid() {
    let horn = Arc::new(standard_complex(StandardKind::Horn { j: 1 }, 2, 2).unwrap().set);
    let x = pair2(2);
    // Oracle: composable pairs of arrows in the pair groupoid on two objects.
    let oracle = (0..2).flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| (a, b, c)))).count();
    assert_eq!(enumerate_maps(&horn, &x).unwrap().len(), oracle);
    assert_eq!(oracle, 8);
}

#[test]
fn maps_from_boundary_of_edge_are_vertex_pairs() {
    let b = Arc::new(standard_complex(StandardKind::Boundary, 1, 2).unwrap().set);
    for x in [c2(2), pair2(2)] {
        assert_eq!(count_maps(&b, &x).unwrap(), x.count(0) * x.count(0));
    }
}

#[test]
fn enumerated_maps_are_distinct_and_valid() {
    let maps = enumerate_maps(&pair2(3), &pair2(3)).unwrap();
    for (i, m) in maps.iter().enumerate() {
        SimplicialMap::new(m.source().clone(), m.target().clone(), m.tables().to_vec(), m.kind())
            .unwrap();
        for other in &maps[..i] {
            assert_ne!(other.tables(), m.tables());
        }
    }
    // Functors Pair2 → Pair2 are the maps on objects.
    assert_eq!(maps.len(), 4);
}

#[test]
fn truncation_mismatch_for_short_targets() {
    assert!(matches!(
        enumerate_maps(&simplex(1, 3), &c2(2)),
        Err(Error::TruncationMismatch(_))
    ));
}

#[test]
fn horn_restriction_on_c2() {
    let hr = horn_restriction(&c2(3), 2, 1).unwrap();
    assert_eq!(hr.horns.len(), 4);
    let mut seen = hr.lambda_star.clone();
    seen.sort();
    assert_eq!(seen, vec![0, 1, 2, 3]);
}

#[test]
fn horn_restriction_on_point() {
    let hr = horn_restriction(&SimplicialSet::point(3), 3, 2).unwrap();
    assert_eq!(hr.horns.len(), 1);
    assert_eq!(hr.lambda_star, vec![0]);
}

#[test]
fn boundary_restriction_on_c2_is_injective() {
    let br = boundary_restriction(&c2(3), 2).unwrap();
    let mut seen = br.partial_star.clone();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 4);
}

#[test]
fn boundary_of_level_one_is_vertex_pairs() {
    let x = pair2(2);
    assert_eq!(boundary_restriction(&x, 1).unwrap().boundaries.len(), 4);
}

/// Restricting a map Δ[m] → X to Λ[m,j] gives the horn of its top cell.
#[test]
fn lambda_star_agrees_with_restriction() {
    let x = c2(3);
    for m in 1..=3 {
        let d = standard_complex(StandardKind::Simplex, m, m).unwrap();
        let top: Vec<usize> = (0..=m).collect();
        let top_cell = d.id_of(&top).unwrap();
        let maps = enumerate_maps(&Arc::new(d.set.clone()), &x).unwrap();
        for j in 0..=m {
            let hr = horn_restriction(&x, m, j).unwrap();
            for f in &maps {
                let image = f.apply(m, top_cell);
                let faces: Vec<usize> = (0..=m)
                    .filter(|&i| i != j)
                    .map(|i| {
                        let mut s = top.clone();
                        s.remove(i);
                        f.apply(m - 1, d.id_of(&s).unwrap())
                    })
                    .collect();
                assert_eq!(hr.horns[hr.lambda_star[image]].faces, faces);
            }
        }
    }
}

#[test]
fn cylinder_of_c2() {
    let cyl = cylinder(&c2(3), 1, 2).unwrap();
    assert_eq!(cyl.set.count(0), 2);
    // Oracle: a square in the C2 nerve is two composable pairs with equal
    // composites: a·b = c·d, giving 2^3 choices.
    assert_eq!(cyl.set.count(1), 8);
}

#[test]
fn cylinder_with_zero_width_is_the_set() {
    let x = pair2(3);
    let cyl = cylinder(&x, 0, 3).unwrap();
    assert!(are_isomorphic(&cyl.set, &x));
}

#[test]
fn cylinder_of_point() {
    let cyl = cylinder(&Arc::new(SimplicialSet::point(4)), 1, 3).unwrap();
    assert_eq!(cyl.set.counts(), &[1, 1, 1, 1]);
}

#[test]
fn cylinder_depth_is_bounded_by_truncation() {
    assert!(matches!(
        cylinder(&c2(3), 1, 3),
        Err(Error::DepthExceedsTruncation { .. })
    ));
}

#[test]
fn cylinder_endpoints_split_the_constant_map() {
    let x = pair2(3);
    let cyl = cylinder(&x, 1, 2).unwrap();
    let s = cyl.constant_map().unwrap();
    for v in 0..=1 {
        let d = cyl.end_map(v).unwrap();
        let round = s.then(&d).unwrap();
        assert_eq!(round.tables(), SimplicialMap::identity(x.clone()).tables()[..=2].to_vec());
    }
}

#[test]
fn transformations_of_identity_on_c2_are_central_elements() {
    let x = c2(3);
    let id = SimplicialMap::identity(x.clone());
    let t = find_natural_transformations(&id, &id).unwrap();
    assert_eq!(t.maps.len(), 2);
}

#[test]
fn transformations_between_points_of_pair_groupoid() {
    let pt = Arc::new(SimplicialSet::point(3));
    let x = pair2(3);
    let f = SimplicialMap::constant(pt.clone(), x.clone(), 0).unwrap();
    let g = SimplicialMap::constant(pt.clone(), x.clone(), 1).unwrap();
    assert_eq!(find_natural_transformations(&f, &g).unwrap().maps.len(), 1);
}

#[test]
fn transformations_of_point() {
    let pt = Arc::new(SimplicialSet::point(3));
    let id = SimplicialMap::identity(pt);
    assert_eq!(find_natural_transformations(&id, &id).unwrap().maps.len(), 1);
}
