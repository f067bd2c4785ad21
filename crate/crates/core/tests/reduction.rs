use std::sync::Arc;

use kanfib::group::{cyclic, dihedral, direct_product};
use kanfib::groupoid::{find_groupoid_isomorphism, nerve, FiniteGroupoid};
use kanfib::kan::classify_n_groupoid;
use kanfib::reduction::{check_isotropy_consequences, is_2_isotropy_free, reduce_to_1, two_isotropy_set};
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike, enumerate_crossed_modules};
use kanfib::{CrossedModule, Error, SimplicialSet, Verdict};

fn b2(xm: &CrossedModule, top: usize) -> Arc<SimplicialSet> {
    classifying_2group(&crossed_module_to_grouplike(xm), top).unwrap().set
}

fn corpus() -> Vec<FiniteGroupoid> {
    vec![
        FiniteGroupoid::from_group(&cyclic(2)),
        FiniteGroupoid::from_group(&dihedral(3)),
        FiniteGroupoid::pair(3),
        FiniteGroupoid::discrete(2),
        FiniteGroupoid::transitive(2, &cyclic(2)),
        FiniteGroupoid::disjoint_union(&FiniteGroupoid::pair(2), &FiniteGroupoid::from_group(&cyclic(3))),
    ]
}

#[test]
fn isotropy_sets_of_fixtures() {
    let c2 = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 3);
    assert_eq!(two_isotropy_set(&c2.set, 0), vec![c2.cell_of(&[0, 0]).unwrap()]);
    assert_eq!(two_isotropy_set(&b2(&CrossedModule::xm0(), 3), 0).len(), 2);
    assert_eq!(two_isotropy_set(&b2(&CrossedModule::xm2(), 3), 0).len(), 1);
}

#[test]
fn nerves_are_2_isotropy_free() {
    for g in corpus() {
        assert!(is_2_isotropy_free(&nerve(&g, 3).set).holds());
    }
}

#[test]
fn isotropy_freeness_of_fixtures() {
    let r0 = is_2_isotropy_free(&b2(&CrossedModule::xm0(), 3));
    assert_eq!(r0.verdict, Verdict::Fails);
    assert_eq!(r0.witnesses[0].cells, vec![0]);
    assert!(is_2_isotropy_free(&b2(&CrossedModule::xm2(), 3)).holds());
}

/// `B𝒢` is 2-isotropy free exactly when `bnd` is injective.
#[test]
fn isotropy_freeness_tracks_the_kernel() {
    let c2 = cyclic(2);
    let pairs = [
        (c2.clone(), cyclic(4)),
        (c2.clone(), direct_product(&c2, &c2)),
        (cyclic(3), dihedral(3)),
        (cyclic(4), cyclic(4)),
    ];
    for (h, g) in pairs {
        for xm in enumerate_crossed_modules(&h, &g) {
            let z = b2(&xm, 3);
            assert_eq!(is_2_isotropy_free(&z).holds(), xm.is_bnd_injective());
            let c = check_isotropy_consequences(&z);
            assert_eq!(c.verdict, Verdict::Holds);
            if xm.is_bnd_injective() {
                assert!(c.parts.iter().all(|p| p.holds()));
            }
        }
    }
}

#[test]
fn consequences_on_fixtures() {
    let c2 = check_isotropy_consequences(&b2(&CrossedModule::xm2(), 3));
    assert!(c2.parts[2].holds());
    let c0 = check_isotropy_consequences(&b2(&CrossedModule::xm0(), 3));
    assert_eq!(c0.parts[2].verdict, Verdict::Fails);
    assert_eq!(c0.verdict, Verdict::Holds);
    for g in corpus() {
        let c = check_isotropy_consequences(&nerve(&g, 3).set);
        assert!(c.parts.iter().all(|p| p.holds()));
    }
}

#[test]
fn reduction_of_a_nerve_is_an_isomorphism() {
    for g in corpus() {
        let r = reduce_to_1(&nerve(&g, 3).set).unwrap();
        assert!(find_groupoid_isomorphism(&r.groupoid, &g).is_some());
        assert!(r.map.is_bijective());
        assert!(r.certificate.holds());
    }
}

#[test]
fn reduction_of_xm2_is_c2() {
    let xm = CrossedModule::xm2();
    let z = b2(&xm, 4);
    let r = reduce_to_1(&z).unwrap();
    // Oracle: cosets of the image of bnd in G.
    let mut cosets: Vec<Vec<usize>> = xm
        .g()
        .elements()
        .map(|a| {
            let mut c: Vec<usize> = xm.h().elements().map(|x| xm.g().mul(a, xm.bnd(x))).collect();
            c.sort();
            c
        })
        .collect();
    cosets.sort();
    cosets.dedup();
    assert_eq!(r.groupoid.arrow_count(), cosets.len());
    assert!(find_groupoid_isomorphism(&r.groupoid, &FiniteGroupoid::from_group(&cyclic(2))).is_some());
    assert!(r.certificate.holds(), "{}", r.certificate.summary());
    assert!(classify_n_groupoid(&r.nerve.set, 1).holds());
}

#[test]
fn reduction_multiplication_is_well_defined() {
    let z = b2(&CrossedModule::xm2(), 4);
    let r = reduce_to_1(&z).unwrap();
    let cls = |e: usize| r.classes[e];
    for w in 0..z.count(2) {
        for v in 0..z.count(2) {
            if cls(z.face(2, 2, w)) == cls(z.face(2, 2, v)) && cls(z.face(2, 0, w)) == cls(z.face(2, 0, v)) {
                assert_eq!(cls(z.face(2, 1, w)), cls(z.face(2, 1, v)));
            }
        }
    }
}

#[test]
fn reduction_refuses_isotropy() {
    assert!(matches!(
        reduce_to_1(&b2(&CrossedModule::xm0(), 4)),
        Err(Error::Not2IsotropyFree { vertex: 0, count: 2 })
    ));
}

#[test]
fn reduction_refuses_non_groupoids() {
    // The boundary of Δ[2] has no filler for its 2-horns.
    let b = kanfib::simplicial::standard_complex(kanfib::simplicial::StandardKind::Boundary, 2, 3).unwrap();
    assert!(matches!(reduce_to_1(&Arc::new(b.set)), Err(Error::NotA2Groupoid(_))));
}
