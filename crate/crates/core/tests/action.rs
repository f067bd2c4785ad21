use std::sync::Arc;

use kanfib::action::{
    action2_edge, action_arrow, free_quotient, strict_2group_action_groupoid, strict_action_groupoid, strictify,
};
use kanfib::bundle::{find_bundle_isomorphism, invariant_objects, pullback, pushforward, FibrationBundle};
use kanfib::group::{cyclic, trivial};
use kanfib::groupoid::{find_groupoid_isomorphism, nerve, FiniteGroupoid, Functor};
use kanfib::iso::find_isomorphism;
use kanfib::lambda::lambda_extract;
use kanfib::map::SimplicialMap;
use kanfib::reduction::reduce_to_1;
use kanfib::sample::groupoid_automorphisms;
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike};
use kanfib::{CrossedModule, Error, SimplicialSet, StrictAction};

fn nerve_set(g: &FiniteGroupoid, top: usize) -> Arc<SimplicialSet> {
    nerve(g, top).set
}

/// Counts lifts of every relative horn `Λ[m, j]` at levels 1 and 2 by
/// brute force over pairs of edges and over triangles. Returns
/// `(fewest, most)` lifts seen.
fn horn_lift_range(b: &FibrationBundle, m: usize) -> (usize, usize) {
    let (k, g, pi) = (&b.k, &b.base, &b.pi);
    let (mut lo, mut hi) = (usize::MAX, 0);
    let mut tally = |n: usize| {
        lo = lo.min(n);
        hi = hi.max(n);
    };
    match m {
        1 => {
            for e in 0..g.count(1) {
                for j in 0..2 {
                    // The horn is the vertex opposite face j.
                    for x in (0..k.count(0)).filter(|&x| pi.apply(0, x) == g.face(1, j, e)) {
                        let lifts = (0..k.count(1))
                            .filter(|&y| pi.apply(1, y) == e && k.face(1, j, y) == x)
                            .count();
                        tally(lifts);
                    }
                }
            }
        }
        2 => {
            for c in 0..g.count(2) {
                for j in 0..3 {
                    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
                    let (i0, i1) = (others[0], others[1]);
                    let over = |i: usize| (0..k.count(1)).filter(move |&y| pi.apply(1, y) == g.face(2, i, c));
                    for y0 in over(i0) {
                        for y1 in over(i1) {
                            // d_i d_j = d_{j-1} d_i for i < j.
                            if k.face(1, i0, y1) != k.face(1, i1 - 1, y0) {
                                continue;
                            }
                            let lifts = (0..k.count(2))
                                .filter(|&w| {
                                    pi.apply(2, w) == c && k.face(2, i0, w) == y0 && k.face(2, i1, w) == y1
                                })
                                .count();
                            tally(lifts);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    (lo, hi)
}

fn xm0_on_c2() -> StrictAction {
    let x = FiniteGroupoid::from_group(&cyclic(2));
    StrictAction::of_crossed_module(
        x.clone(),
        CrossedModule::xm0(),
        vec![Functor::identity(&x)],
        vec![vec![0], vec![1]],
    )
    .unwrap()
}

fn swap_on_discrete3() -> StrictAction {
    let x = FiniteGroupoid::discrete(3);
    let flip = Functor {
        objects: vec![1, 0, 2],
        arrows: vec![1, 0, 2],
    };
    StrictAction::of_group(x.clone(), cyclic(2), vec![Functor::identity(&x), flip]).unwrap()
}

fn swap_on_pair2() -> StrictAction {
    let x = FiniteGroupoid::pair(2);
    let flip = groupoid_automorphisms(&x)
        .into_iter()
        .find(|f| f.objects == [1, 0])
        .unwrap();
    StrictAction::of_group(x.clone(), cyclic(2), vec![Functor::identity(&x), flip]).unwrap()
}

#[test]
fn swap_bundle_sizes_and_lifts() {
    let b = strict_action_groupoid(&StrictAction::swap(), 3).unwrap();
    assert_eq!((b.k.count(0), b.k.count(1)), (2, 4));
    assert_eq!(b.n, 1);
    assert!(b.certificate.holds(), "{}", b.certificate.summary());
    assert_eq!(horn_lift_range(&b, 1), (1, 1));
    assert_eq!(horn_lift_range(&b, 2), (1, 1));
    let fib = b.fiber().clone();
    assert!(find_isomorphism(&fib, &nerve_set(&FiniteGroupoid::discrete(2), 3)).is_some());
}

#[test]
fn trivial_action_on_a_point_is_the_base() {
    let a = StrictAction::trivial(FiniteGroupoid::discrete(1), cyclic(3));
    let b = strict_action_groupoid(&a, 3).unwrap();
    assert!(b.pi.is_bijective());
    assert_eq!(b.fiber().counts(), &[1, 1, 1, 1]);
}

#[test]
fn trivial_action_on_pair2() {
    let a = StrictAction::trivial(FiniteGroupoid::pair(2), cyclic(2));
    let b = strict_action_groupoid(&a, 3).unwrap();
    assert_eq!(b.k.count(1), 8);
    assert_eq!(b.n, 2);
    assert!(b.certificate.holds());
    // Edges over g from a vertex: one per arrow out of it.
    assert_eq!(horn_lift_range(&b, 1), (2, 2));
    assert_eq!(horn_lift_range(&b, 2), (1, 1));
    assert!(find_isomorphism(b.fiber(), &nerve_set(&FiniteGroupoid::pair(2), 3)).is_some());
}

#[test]
fn action_groupoid_arrows_follow_the_action() {
    let a = swap_on_pair2();
    let x = a.groupoid();
    let b = strict_action_groupoid(&a, 2).unwrap();
    let nv = nerve(&kanfib::action::action_groupoid(&a).unwrap(), 2);
    let base = nerve(&FiniteGroupoid::from_group(&cyclic(2)), 2);
    for g in 0..2 {
        for al in 0..x.arrow_count() {
            let cell = nv.cell_of(&[action_arrow(&a, al, g)]).unwrap();
            assert_eq!(b.k.face(1, 1, cell), x.src(al));
            assert_eq!(b.k.face(1, 0, cell), a.phi(g).objects[x.tgt(al)]);
            assert_eq!(b.pi.apply(1, cell), base.cell_of(&[g]).unwrap());
        }
    }
}

#[test]
fn invalid_actions_are_rejected() {
    let x = FiniteGroupoid::discrete(2);
    let flip = Functor {
        objects: vec![1, 0],
        arrows: vec![1, 0],
    };
    // The flip squared is not the identity's image under C3.
    let r = StrictAction::of_group(x.clone(), cyclic(3), vec![Functor::identity(&x), flip.clone(), flip]);
    assert!(matches!(r, Err(Error::NotAStrictAction(_))));
    let c2 = FiniteGroupoid::from_group(&cyclic(2));
    let r = StrictAction::of_crossed_module(
        c2.clone(),
        CrossedModule::xm0(),
        vec![Functor::identity(&c2)],
        vec![vec![1], vec![0]],
    );
    assert!(matches!(r, Err(Error::NotAStrictAction(_))));
}

#[test]
fn xm0_on_c2_census_matches_brute_force() {
    let a = xm0_on_c2();
    let b = strict_2group_action_groupoid(&a, 3).unwrap();
    assert!(b.certificate.holds(), "{}", b.certificate.summary());
    // Oracle: tuples (h, b01, b12, b02) in C2 with h + b02 = b01 + b12.
    let mut oracle = 0;
    for h in 0..2 {
        for b01 in 0..2 {
            for b12 in 0..2 {
                for b02 in 0..2 {
                    if (h + b02) % 2 == (b01 + b12) % 2 {
                        oracle += 1;
                    }
                }
            }
        }
    }
    assert_eq!(&b.k.counts()[..3], &[1, 2, oracle]);
    // Over the nontrivial 2-cell, the triangle with unit legs has the
    // nontrivial arrow as its long edge.
    let tg = classifying_2group(&crossed_module_to_grouplike(&CrossedModule::xm0()), 3).unwrap();
    let hot = tg.two_cell_of(0, 0, 1).unwrap();
    let unit_edge = action2_edge(&a, 0, 0);
    let w = (0..b.k.count(2))
        .find(|&w| b.pi.apply(2, w) == hot && b.k.face(2, 0, w) == unit_edge && b.k.face(2, 2, w) == unit_edge)
        .unwrap();
    assert_eq!(b.k.face(2, 1, w), action2_edge(&a, 0, 1));
    assert!(find_isomorphism(b.fiber(), &nerve_set(a.groupoid(), 3)).is_some());
}

#[test]
fn regular_xm0_action_is_the_c2_fixture() {
    let r = StrictAction::regular(CrossedModule::xm0());
    let a = xm0_on_c2();
    assert_eq!(r.phis(), a.phis());
    assert_eq!(r.thetas(), a.thetas());
}

#[test]
fn trivial_fiber_bundles_are_the_base() {
    let b1 = strict_2group_action_groupoid(
        &StrictAction::trivial_2group(FiniteGroupoid::discrete(1), CrossedModule::xm1()),
        4,
    )
    .unwrap();
    assert!(b1.pi.is_bijective());
    let b2 = strict_2group_action_groupoid(
        &StrictAction::trivial_2group(FiniteGroupoid::discrete(1), CrossedModule::xm2()),
        4,
    )
    .unwrap();
    assert!(b2.pi.is_bijective());
    assert!(b2.certificate.holds());
}

#[test]
fn regular_actions_are_fibrations() {
    for xm in [CrossedModule::xm1(), CrossedModule::xm2()] {
        let a = StrictAction::regular(xm);
        let b = strict_2group_action_groupoid(&a, 3).unwrap();
        assert!(b.certificate.holds(), "{}", b.certificate.summary());
        assert_eq!(horn_lift_range(&b, 2).0, 1);
        assert!(find_isomorphism(b.fiber(), &nerve_set(a.groupoid(), 3)).is_some());
    }
}

#[test]
fn lifts_in_a_2group_bundle() {
    let b = strict_2group_action_groupoid(&xm0_on_c2(), 3).unwrap();
    // Horns of triangles lift uniquely: the fiber is a 1-groupoid.
    assert_eq!(horn_lift_range(&b, 2), (1, 1));
    assert_eq!(horn_lift_range(&b, 1), (2, 2));
}

#[test]
fn fibers_of_strict_bundles() {
    let b = strict_action_groupoid(&swap_on_discrete3(), 2).unwrap();
    let fib = b.fiber();
    assert_eq!(fib.counts(), &[3, 3, 3]);
    for v in 0..3 {
        assert_eq!(b.pi.apply(0, b.incl.apply(0, v)), 0);
    }
}

#[test]
fn invariant_objects_of_fixtures() {
    let swap = strict_action_groupoid(&StrictAction::swap(), 2).unwrap();
    assert!(invariant_objects(&swap).unwrap().is_empty());
    let triv = strict_action_groupoid(&StrictAction::trivial(FiniteGroupoid::pair(2), cyclic(3)), 2).unwrap();
    assert_eq!(invariant_objects(&triv).unwrap(), vec![0, 1]);
    let b = strict_action_groupoid(&swap_on_discrete3(), 2).unwrap();
    let inv = invariant_objects(&b).unwrap();
    assert_eq!(inv.len(), 1);
    assert_eq!(b.incl.apply(0, inv[0]), 2);
}

/// Orbit counts by brute force over the group.
fn orbit_count(n: usize, act: impl Fn(usize, usize) -> usize, order: usize) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for y in 0..n {
        if !seen[y] {
            count += 1;
            for g in 0..order {
                seen[act(g, y)] = true;
            }
        }
    }
    count
}

#[test]
fn free_quotients() {
    let q = free_quotient(&StrictAction::swap(), 2).unwrap();
    assert_eq!((q.groupoid.object_count(), q.groupoid.arrow_count()), (1, 1));
    assert!(q.certificate.holds());

    let a = swap_on_pair2();
    let q = free_quotient(&a, 3).unwrap();
    let x = a.groupoid();
    assert_eq!(q.groupoid.object_count(), orbit_count(2, |g, y| a.phi(g).objects[y], 2));
    assert_eq!(
        q.groupoid.arrow_count(),
        orbit_count(x.arrow_count(), |g, y| a.phi(g).arrows[y], 2)
    );
    assert!(find_groupoid_isomorphism(&q.groupoid, &FiniteGroupoid::from_group(&cyclic(2))).is_some());
    assert!(q.certificate.holds(), "{}", q.certificate.summary());

    let t = StrictAction::trivial(FiniteGroupoid::pair(3), trivial());
    let q = free_quotient(&t, 2).unwrap();
    assert!(find_groupoid_isomorphism(&q.groupoid, &FiniteGroupoid::pair(3)).is_some());

    let fixed = StrictAction::trivial(FiniteGroupoid::discrete(2), cyclic(2));
    assert!(matches!(
        free_quotient(&fixed, 2),
        Err(Error::ActionNotFree { object: 0, element: 1 })
    ));
}

#[test]
fn pullback_along_identity_and_a_point() {
    let b = strict_action_groupoid(&StrictAction::swap(), 3).unwrap();
    let id = SimplicialMap::identity(b.base.clone());
    let p = pullback(&b, &id).unwrap();
    assert!(find_bundle_isomorphism(&p, &b).is_some());

    let point = nerve_set(&FiniteGroupoid::from_group(&trivial()), 3);
    let at = SimplicialMap::constant(point, b.base.clone(), 0).unwrap();
    let p = pullback(&b, &at).unwrap();
    assert_eq!(p.k.counts(), b.fiber().counts());
    assert!(find_isomorphism(&p.k, &nerve_set(&FiniteGroupoid::discrete(2), 3)).is_some());

    let b1 = strict_2group_action_groupoid(
        &StrictAction::trivial_2group(FiniteGroupoid::from_group(&cyclic(2)), CrossedModule::xm1()),
        3,
    )
    .unwrap();
    let p1 = pullback(&b1, &SimplicialMap::identity(b1.base.clone())).unwrap();
    assert!(find_bundle_isomorphism(&p1, &b1).is_some());
}

#[test]
fn pushforward_along_identity() {
    let b = strict_action_groupoid(&StrictAction::swap(), 3).unwrap();
    let f = pushforward(&b, &SimplicialMap::identity(b.base.clone())).unwrap();
    assert_eq!(f.k.top(), 2);
    assert!(find_bundle_isomorphism(&f, &b.truncate(2).unwrap()).is_some());
}

#[test]
fn pushforward_along_the_xm2_reduction() {
    let e = strict_2group_action_groupoid(
        &StrictAction::trivial_2group(FiniteGroupoid::from_group(&cyclic(2)), CrossedModule::xm2()),
        3,
    )
    .unwrap();
    let red = reduce_to_1(&e.base).unwrap();
    let f = pushforward(&e, &red.map).unwrap();
    // Oracle: the product of nerve(C2) with the fiber nerve(C2).
    let sizes: Vec<usize> = (0..=2).map(|n| 2usize.pow(n) * 2usize.pow(n)).collect();
    assert_eq!(f.k.counts(), sizes.as_slice());
    let back = pullback(&f, &red.map.truncate(2).unwrap()).unwrap();
    assert!(find_bundle_isomorphism(&back, &e.truncate(2).unwrap()).is_some());
}

#[test]
fn pushforward_preconditions() {
    let b = strict_action_groupoid(&StrictAction::swap(), 2).unwrap();
    let other = nerve_set(&FiniteGroupoid::from_group(&cyclic(3)), 2);
    let wrong = SimplicialMap::identity(other);
    assert!(matches!(pushforward(&b, &wrong), Err(Error::TargetMismatch)));
    let point = nerve_set(&FiniteGroupoid::from_group(&trivial()), 2);
    let squash = SimplicialMap::constant(b.base.clone(), point, 0).unwrap();
    assert!(matches!(pushforward(&b, &squash), Err(Error::NotAHypercover(_))));
}

#[test]
fn strictify_swap() {
    let b = strict_action_groupoid(&StrictAction::swap(), 3).unwrap();
    let s = strictify(&b).unwrap();
    assert_eq!(s.groupoid.object_count(), 4);
    assert!(s.certificate.holds(), "{}", s.certificate.summary());
    assert!(s.action.fixed_points().is_empty());
    let q = free_quotient(&s.action, 3).unwrap();
    assert!(find_isomorphism(&nerve_set(&q.groupoid, 3), &b.k).is_some());
    let again = strict_action_groupoid(&s.action, 3).unwrap();
    assert!(find_isomorphism(again.fiber(), &nerve_set(&s.groupoid, 3)).is_some());
}

#[test]
fn strictify_a_point() {
    let b = strict_action_groupoid(&StrictAction::trivial(FiniteGroupoid::discrete(1), cyclic(2)), 2).unwrap();
    let s = strictify(&b).unwrap();
    assert!(find_groupoid_isomorphism(&s.groupoid, &FiniteGroupoid::pair(2)).is_some());
    assert!(s.action.fixed_points().is_empty());
    assert!(s.certificate.holds());
}

#[test]
fn strictify_needs_a_1group_base() {
    let b = strict_2group_action_groupoid(&xm0_on_c2(), 2).unwrap();
    assert!(matches!(strictify(&b), Err(Error::BaseNotA1Group(_))));
}

#[test]
fn lambda_of_swap() {
    let a = StrictAction::swap();
    let b = strict_action_groupoid(&a, 2).unwrap();
    let d = lambda_extract(&b).unwrap();
    let g = 1;
    let span = &d.spans[g];
    assert_eq!(span.objects.len(), 2);
    for (i, &y) in span.objects.iter().enumerate() {
        let x = b.k.face(1, 1, y);
        assert_eq!(d.fiber_cells[0][span.left.objects[i]], x);
        assert_eq!(d.fiber_cells[0][span.right.objects[i]], a.phi(g).objects[x]);
    }
}

/// Over the unit, each object of `Y_e` is a fiber arrow from its left leg
/// to its right leg, naturally in `Y_e`; on degenerate edges the legs agree.
#[test]
fn lambda_over_the_unit_is_the_unit_span() {
    for a in [StrictAction::swap(), swap_on_pair2(), StrictAction::trivial(FiniteGroupoid::pair(2), cyclic(3))] {
        let b = strict_action_groupoid(&a, 2).unwrap();
        let d = lambda_extract(&b).unwrap();
        let span = &d.spans[b.base.degen(0, 0, 0)];
        let fib = &d.fiber;
        let alpha = |i: usize| d.fiber_arrow(span.objects[i]).unwrap();
        for i in 0..span.objects.len() {
            assert_eq!(fib.src(alpha(i)), span.left.objects[i]);
            assert_eq!(fib.tgt(alpha(i)), span.right.objects[i]);
        }
        for f in 0..span.groupoid.arrow_count() {
            let (p, q) = (span.groupoid.src(f), span.groupoid.tgt(f));
            assert_eq!(
                fib.compose(span.left.arrows[f], alpha(q)),
                fib.compose(alpha(p), span.right.arrows[f])
            );
        }
        for x in 0..b.k.count(0) {
            let i = span.object_of(b.k.degen(0, 0, x)).unwrap();
            assert_eq!(span.left.objects[i], span.right.objects[i]);
        }
    }
}

#[test]
fn lambda_recovers_the_action() {
    for a in [StrictAction::swap(), swap_on_pair2(), swap_on_discrete3()] {
        let x = a.groupoid();
        let b = strict_action_groupoid(&a, 2).unwrap();
        let nv = nerve(&kanfib::action::action_groupoid(&a).unwrap(), 2);
        let edge = |al: usize, g: usize| nv.cell_of(&[action_arrow(&a, al, g)]).unwrap();
        let d = lambda_extract(&b).unwrap();
        for g in a.group().elements() {
            let span = d.spans.iter().find(|s| s.g == b.pi.apply(1, edge(0, g))).unwrap();
            for al in 0..x.arrow_count() {
                let (s, t) = (x.src(al), x.tgt(al));
                let from = span.object_of(edge(x.unit(s), g)).unwrap();
                let to = span.object_of(edge(x.unit(t), g)).unwrap();
                let left = d.fiber_arrow(edge(al, 0)).unwrap();
                let arrow = span.arrow_over(from, to, left).unwrap();
                let moved = d.fiber_arrow(edge(a.phi(g).arrows[al], 0)).unwrap();
                assert_eq!(span.right.arrows[arrow], moved);
                assert_eq!(d.fiber_cells[0][span.right.objects[from]], a.phi(g).objects[s]);
            }
        }
    }
}

#[test]
fn lambda_transport_of_xm0() {
    let a = xm0_on_c2();
    let b = strict_2group_action_groupoid(&a, 2).unwrap();
    let d = lambda_extract(&b).unwrap();
    let tg = classifying_2group(&crossed_module_to_grouplike(&CrossedModule::xm0()), 2).unwrap();
    let edge = |v: usize| action2_edge(&a, 0, v);
    for t in &d.transports {
        let (_, _, gamma) = tg.two_cell(t.cell);
        let h = gamma % 2;
        assert_eq!(t.entries.len(), 8);
        for e in &t.entries {
            let v = |c: usize| (0..2).find(|&v| edge(v) == c).unwrap();
            // φ = y′₀₂ − y₀₁ − y₁₂ + h in C2.
            let expected = (v(e.y02p) + v(e.y01) + v(e.y12) + h) % 2;
            assert_eq!(d.fiber_cells[1][e.phi], edge(expected));
        }
    }
}

#[test]
fn lambda_needs_depth_two() {
    let b = strict_action_groupoid(&StrictAction::swap(), 1).unwrap();
    assert!(matches!(lambda_extract(&b), Err(Error::DepthExceedsTruncation { .. })));
}
