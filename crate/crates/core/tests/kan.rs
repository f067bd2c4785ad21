use std::sync::Arc;

use kanfib::group::{cyclic, trivial};
use kanfib::groupoid::{nerve, FiniteGroupoid};
use kanfib::hom::horn_restriction;
use kanfib::kan::{check_equivalence, check_fibration, check_hypercover, check_kan, classify_n_groupoid, fill_horn, KanMode};
use kanfib::simplicial::{standard_complex, StandardKind};
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike};
use kanfib::{CrossedModule, Error, HornTuple, SimplicialMap, SimplicialSet, Verdict};

fn nerve_of(g: &FiniteGroupoid, top: usize) -> Arc<SimplicialSet> {
    nerve(g, top).set
}

fn c2() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&cyclic(2))
}

fn point(top: usize) -> Arc<SimplicialSet> {
    nerve_of(&FiniteGroupoid::from_group(&trivial()), top)
}

fn b2(xm: &CrossedModule, top: usize) -> Arc<SimplicialSet> {
    classifying_2group(&crossed_module_to_grouplike(xm), top).unwrap().set
}

#[test]
fn kan_conditions_on_fixtures() {
    let n = nerve_of(&c2(), 3);
    assert!(check_kan(&n, 2, 1, KanMode::Unique).unwrap().holds());

    let bd = standard_complex(StandardKind::Boundary, 2, 2).unwrap();
    let r = check_kan(&bd.set, 2, 1, KanMode::Fill).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    let horn = vec![bd.id_of(&[1, 2]).unwrap(), bd.id_of(&[0, 1]).unwrap()];
    assert!(r.witnesses.iter().any(|w| w.cells == horn));

    let z = b2(&CrossedModule::xm0(), 3);
    assert_eq!(check_kan(&z, 2, 1, KanMode::Unique).unwrap().verdict, Verdict::Fails);
    assert!(check_kan(&z, 2, 1, KanMode::Fill).unwrap().holds());
}

#[test]
fn kan_index_errors_and_partial_levels() {
    let n = nerve_of(&c2(), 2);
    assert!(matches!(check_kan(&n, 2, 3, KanMode::Fill), Err(Error::InvalidIndex(_))));
    assert_eq!(check_kan(&n, 3, 1, KanMode::Fill).unwrap().verdict, Verdict::Partial);
}

#[test]
fn classification_of_fixtures() {
    let z = b2(&CrossedModule::xm0(), 4);
    assert!(classify_n_groupoid(&z, 2).holds());
    assert_eq!(classify_n_groupoid(&z, 1).verdict, Verdict::Fails);
    let p = SimplicialSet::point(2);
    assert!(classify_n_groupoid(&p, 0).holds());
    // A nerve at level 2 cannot show Kan!(3).
    assert_eq!(classify_n_groupoid(&nerve_of(&c2(), 2), 1).verdict, Verdict::Partial);
}

#[test]
fn horn_filling_in_c2() {
    let nv = nerve(&c2(), 3);
    let g = nv.cell_of(&[1]).unwrap();
    let f = fill_horn(
        &nv.set,
        &HornTuple {
            m: 2,
            j: 1,
            faces: vec![g, g],
        },
    )
    .unwrap();
    assert!(f.unique);
    assert_eq!(nv.set.face(2, 1, f.cell), nv.cell_of(&[0]).unwrap());
}

#[test]
fn degenerate_cells_fill_their_own_horns() {
    for x in [nerve_of(&FiniteGroupoid::pair(2), 3), nerve_of(&FiniteGroupoid::transitive(2, &cyclic(3)), 3)] {
        for e in 0..x.count(1) {
            for i in 0..2 {
                let s = x.degen(1, i, e);
                for j in 0..3 {
                    let faces = (0..3).filter(|&k| k != j).map(|k| x.face(2, k, s)).collect();
                    let f = fill_horn(&x, &HornTuple { m: 2, j, faces }).unwrap();
                    assert!(f.unique);
                    assert_eq!(f.cell, s);
                }
            }
        }
    }
}

#[test]
fn boundary_of_a_triangle_has_no_filler() {
    let bd = standard_complex(StandardKind::Boundary, 2, 2).unwrap();
    let horn = HornTuple {
        m: 2,
        j: 0,
        faces: vec![bd.id_of(&[0, 2]).unwrap(), bd.id_of(&[0, 1]).unwrap()],
    };
    assert!(matches!(fill_horn(&bd.set, &horn), Err(Error::NoFiller { m: 2, j: 0 })));
}

#[test]
fn filling_then_restricting_returns_the_horn() {
    for x in [nerve_of(&FiniteGroupoid::transitive(2, &cyclic(2)), 3), b2(&CrossedModule::xm0(), 3)] {
        for m in 1..=3 {
            for j in 0..=m {
                let hr = horn_restriction(&x, m, j).unwrap();
                for (h, horn) in hr.horns.iter().enumerate() {
                    let f = fill_horn(&x, horn).unwrap();
                    assert_eq!(hr.lambda_star[f.cell], h);
                }
            }
        }
    }
}

#[test]
fn fibration_checks() {
    let x = nerve_of(&FiniteGroupoid::pair(2), 3);
    for n in 0..3 {
        assert!(check_fibration(&SimplicialMap::identity(x.clone()), n).holds());
    }
    let squash = SimplicialMap::constant(x.clone(), point(3), 0).unwrap();
    let r = check_fibration(&squash, 0);
    assert_eq!(r.verdict, Verdict::Fails);
    // Two edges leave each vertex, so lifts of edges are not unique.
    assert_eq!(check_fibration(&squash, 1).verdict, Verdict::Fails);
    assert!(check_fibration(&squash, 2).holds());
}

#[test]
fn hypercover_checks() {
    let x = nerve_of(&FiniteGroupoid::pair(2), 3);
    let squash = SimplicialMap::constant(x.clone(), point(3), 0).unwrap();
    assert!(check_hypercover(&squash, 1).holds());
    assert_eq!(check_hypercover(&squash, 0).verdict, Verdict::Fails);
    assert!(check_hypercover(&SimplicialMap::identity(x), 0).holds());
}

#[test]
fn equivalence_checks() {
    let pair = nerve_of(&FiniteGroupoid::pair(2), 3);
    let one = SimplicialMap::constant(point(3), pair.clone(), 0).unwrap();
    assert!(check_equivalence(&one, 1).unwrap().holds());
    assert!(check_equivalence(&SimplicialMap::identity(pair), 1).unwrap().holds());

    let two = nerve_of(&FiniteGroupoid::disjoint_union(&c2(), &c2()), 3);
    let first = SimplicialMap::constant(point(3), two, 0).unwrap();
    assert_eq!(check_equivalence(&first, 1).unwrap().verdict, Verdict::Fails);
    // An inclusion of a component with its group is fully faithful but
    // misses the other component.
    let c2c2 = FiniteGroupoid::disjoint_union(&c2(), &c2());
    let incl = kanfib::groupoid::functor_to_map(
        &kanfib::Functor {
            objects: vec![0],
            arrows: vec![0, 1],
        },
        &c2(),
        &c2c2,
        3,
    )
    .unwrap();
    assert_eq!(check_equivalence(&incl, 1).unwrap().verdict, Verdict::Fails);
}

#[test]
fn hypercovers_are_equivalences() {
    let cases = [
        SimplicialMap::constant(nerve_of(&FiniteGroupoid::pair(3), 3), point(3), 0).unwrap(),
        SimplicialMap::identity(nerve_of(&c2(), 3)),
        kanfib::reduction::reduce_to_1(&b2(&CrossedModule::xm2(), 3)).unwrap().map,
    ];
    for f in cases {
        assert!(check_hypercover(&f, 2).holds());
        assert!(check_equivalence(&f, 2).unwrap().holds());
    }
}

#[test]
fn equivalence_needs_a_level_one_target() {
    let f = SimplicialMap::identity(Arc::new(SimplicialSet::point(0)));
    assert!(matches!(check_equivalence(&f, 1), Err(Error::DepthExceedsTruncation { .. })));
}
