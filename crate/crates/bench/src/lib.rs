//! Inputs shared by the benchmarks.

use std::sync::Arc;

use kanfib::group::{cyclic, dihedral};
use kanfib::groupoid::{nerve, FiniteGroupoid};
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike};
use kanfib::{CrossedModule, SimplicialSet};

/// Nerve of the groupoid with `objects` objects, each pair of objects joined
/// by a copy of the dihedral group of order 6.
pub fn transitive_nerve(objects: usize, top: usize) -> Arc<SimplicialSet> {
    nerve(&FiniteGroupoid::transitive(objects, &dihedral(3)), top).set
}

/// Classifying 2-group of the crossed module C2 -> C4.
pub fn xm2_classifying(top: usize) -> Arc<SimplicialSet> {
    classifying_2group(&crossed_module_to_grouplike(&CrossedModule::xm2()), top)
        .expect("XM2 is a crossed module")
        .set
}

pub fn c2() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&cyclic(2))
}
