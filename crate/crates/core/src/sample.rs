//! Seeded random fixtures: groupoids, crossed modules and strict actions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::StrictAction;
use crate::group::{catalog, homomorphisms, FiniteGroup};
use crate::groupoid::{nerve, FiniteGroupoid, Functor};
use crate::hom::collect_maps;
use crate::search::Constraints;
use crate::two_group::{enumerate_crossed_modules, CrossedModule};

/// Largest level-4 census `|G|⁴|H|⁶` of a sampled crossed module.
pub const LEVEL4_BUDGET: usize = 1 << 18;

/// A disjoint union of transitive groupoids with shuffled ids, within the
/// given object and arrow budgets.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> FiniteGroupoid {
    assert!(max_objects >= 1 && max_arrows >= 1);
    let groups = catalog();
    let n = rng.gen_range(1..=max_objects.min(max_arrows));
    let mut left = (n, max_arrows);
    let mut out: Option<FiniteGroupoid> = None;
    while left.0 > 0 {
        let (objs, arrows) = left;
        let k = rng.gen_range(1..=objs);
        // Every later object needs at least its unit.
        let room = arrows - (objs - k);
        let fits: Vec<&FiniteGroup> = groups
            .iter()
            .map(|(_, g)| g)
            .filter(|g| k * k * g.order() <= room)
            .collect();
        let Some(g) = fits.choose(rng) else {
            continue;
        };
        let part = FiniteGroupoid::transitive(k, g);
        left = (objs - k, arrows - part.arrow_count());
        out = Some(match out {
            None => part,
            Some(acc) => FiniteGroupoid::disjoint_union(&acc, &part),
        });
    }
    let g = out.expect("at least one component");
    let mut objects: Vec<usize> = (0..g.object_count()).collect();
    let mut arrows: Vec<usize> = (0..g.arrow_count()).collect();
    objects.shuffle(rng);
    arrows.shuffle(rng);
    g.permuted(&objects, &arrows).expect("a permutation of ids")
}

/// A crossed module with `|G|, |H| ≤ max_order` and level-4 census within
/// [`LEVEL4_BUDGET`].
pub fn random_crossed_module<R: Rng>(rng: &mut R, max_order: usize) -> CrossedModule {
    let groups: Vec<FiniteGroup> = catalog()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.order() <= max_order)
        .collect();
    loop {
        let h = groups.choose(rng).expect("nonempty catalog");
        let g = groups.choose(rng).expect("nonempty catalog");
        let census = g.order().pow(4) * h.order().pow(6);
        if census > LEVEL4_BUDGET {
            continue;
        }
        if let Some(xm) = enumerate_crossed_modules(h, g).choose(rng) {
            return xm.clone();
        }
    }
}

/// Automorphisms of a groupoid, found as injective self-maps of its nerve.
pub fn groupoid_automorphisms(x: &FiniteGroupoid) -> Vec<Functor> {
    let nv = nerve(x, 2);
    let arrow_of: Vec<usize> = (0..nv.set.count(1)).map(|c| nv.string(1, c)[0]).collect();
    let cons = Constraints {
        injective: true,
        ..Constraints::default()
    };
    collect_maps(&nv.set, &nv.set, 2, cons, None)
        .into_iter()
        .map(|t| {
            let mut arrows = vec![0; x.arrow_count()];
            for (c, &img) in t[1].iter().enumerate() {
                arrows[arrow_of[c]] = arrow_of[img];
            }
            Functor {
                objects: t[0].clone(),
                arrows,
            }
        })
        .collect()
}

/// A strict action of a random group of order `≤ max_order` on `x`, by a
/// random homomorphism into the automorphism group of `x`.
pub fn random_strict_action<R: Rng>(rng: &mut R, x: &FiniteGroupoid, max_order: usize) -> StrictAction {
    let auts = groupoid_automorphisms(x);
    let gens: Vec<Vec<usize>> = auts.iter().map(|f| f.arrows.clone()).collect();
    let (aut, perms) = FiniteGroup::from_permutations(&gens, x.arrow_count()).expect("automorphism group");
    let groups: Vec<FiniteGroup> = catalog()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.order() <= max_order)
        .collect();
    let g = groups.choose(rng).expect("nonempty catalog").clone();
    let homs = homomorphisms(&g, &aut);
    let rho = homs.choose(rng).expect("the trivial homomorphism");
    // Φ(a) = ρ(a⁻¹) turns the left action of permutations into a right one.
    let phi = g
        .elements()
        .map(|a| {
            let p = &perms[rho[g.inv(a)]];
            Functor {
                objects: (0..x.object_count()).map(|y| x.tgt(p[x.unit(y)])).collect(),
                arrows: p.clone(),
            }
        })
        .collect();
    StrictAction::of_group(x.clone(), g, phi).expect("a homomorphism into automorphisms")
}
