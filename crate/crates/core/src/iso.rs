//! Isomorphism search between truncated simplicial sets.

use std::sync::Arc;

use crate::map::SimplicialMap;
use crate::search::{search_maps, AllowFn, BoundaryIndex, Constraints, SourcePlan};
use crate::simplicial::{CellId, SimplicialSet};

/// An isomorphism `a → b` preserving all structure maps, if one exists.
/// Labels are ignored.
pub fn find_isomorphism(a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>) -> Option<SimplicialMap> {
    find_isomorphism_with(a, b, None)
}

pub fn are_isomorphic(a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>) -> bool {
    find_isomorphism(a, b).is_some()
}

/// As [`find_isomorphism`], with an extra filter on candidate images.
pub fn find_isomorphism_with(
    a: &Arc<SimplicialSet>,
    b: &Arc<SimplicialSet>,
    allow: Option<&AllowFn<'_>>,
) -> Option<SimplicialMap> {
    if a.top() != b.top() || a.counts() != b.counts() || a.census() != b.census() {
        return None;
    }
    let top = a.top();
    // Vertex signature: numbers of outgoing and incoming edges and loops.
    let signature = |x: &SimplicialSet, v: CellId| {
        if top == 0 {
            return (0, 0, 0);
        }
        let mut s = (0, 0, 0);
        for e in 0..x.count(1) {
            let (t, o) = (x.face(1, 0, e), x.face(1, 1, e));
            if o == v && t == v {
                s.2 += 1;
            } else if o == v {
                s.0 += 1;
            } else if t == v {
                s.1 += 1;
            }
        }
        s
    };
    let sa: Vec<_> = (0..a.count(0)).map(|v| signature(a, v)).collect();
    let sb: Vec<_> = (0..b.count(0)).map(|v| signature(b, v)).collect();
    let combined = |n: usize, c: CellId, v: CellId| {
        (n != 0 || sa[c] == sb[v]) && allow.is_none_or(|f| f(n, c, v))
    };
    let plan = SourcePlan::new(a, top);
    let index = BoundaryIndex::new(b, top);
    let cons = Constraints {
        pin: None,
        allow: Some(&combined),
        injective: true,
    };
    let mut found = None;
    search_maps(&plan, a, b, &index, cons, &mut |t| {
        found = Some(t.to_vec());
        false
    });
    found.map(|t| SimplicialMap::trusted(a.clone(), b.clone(), t))
}
