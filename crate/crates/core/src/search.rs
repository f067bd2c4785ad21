//! Backtracking engines shared by every enumeration in the crate.

use std::collections::HashMap;

use crate::simplicial::{CellId, SimplicialSet};

const UNSET: CellId = CellId::MAX;

/// Per-source data for map search: a visiting order in which every cell
/// comes after all of its faces, and the degeneracy preimages of each cell.
pub(crate) struct SourcePlan {
    top: usize,
    order: Vec<(usize, CellId)>,
    deg: Vec<Vec<Vec<(usize, CellId)>>>,
}

impl SourcePlan {
    pub fn new(x: &SimplicialSet, top: usize) -> Self {
        let mut deg: Vec<Vec<Vec<(usize, CellId)>>> =
            (0..=top).map(|n| vec![Vec::new(); x.count(n)]).collect();
        for n in 0..top {
            for c in 0..x.count(n) {
                for i in 0..=n {
                    deg[n + 1][x.degen(n, i, c)].push((i, c));
                }
            }
        }
        let mut remaining: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        let mut cofaces: Vec<Vec<Vec<CellId>>> =
            (0..=top).map(|n| vec![Vec::new(); x.count(n)]).collect();
        remaining[0] = vec![0; x.count(0)];
        for n in 1..=top {
            let mut rem = Vec::with_capacity(x.count(n));
            for c in 0..x.count(n) {
                let mut fs = x.faces_of(n, c).to_vec();
                fs.sort_unstable();
                fs.dedup();
                for &f in &fs {
                    cofaces[n - 1][f].push(c);
                }
                rem.push(fs.len());
            }
            remaining[n] = rem;
        }
        let mut order = Vec::new();
        fn visit(
            n: usize,
            c: CellId,
            top: usize,
            order: &mut Vec<(usize, CellId)>,
            remaining: &mut [Vec<usize>],
            cofaces: &[Vec<Vec<CellId>>],
        ) {
            order.push((n, c));
            if n == top {
                return;
            }
            for &d in &cofaces[n][c] {
                remaining[n + 1][d] -= 1;
                if remaining[n + 1][d] == 0 {
                    visit(n + 1, d, top, order, remaining, cofaces);
                }
            }
        }
        for v in 0..x.count(0) {
            visit(0, v, top, &mut order, &mut remaining, &cofaces);
        }
        Self { top, order, deg }
    }
}

/// Cells of each level of a target grouped by boundary tuple.
pub(crate) struct BoundaryIndex {
    by_boundary: Vec<HashMap<Vec<CellId>, Vec<CellId>>>,
}

impl BoundaryIndex {
    pub fn new(x: &SimplicialSet, top: usize) -> Self {
        let mut by_boundary = vec![HashMap::new()];
        for n in 1..=top {
            let mut m: HashMap<Vec<CellId>, Vec<CellId>> = HashMap::new();
            for c in 0..x.count(n) {
                m.entry(x.faces_of(n, c).to_vec()).or_default().push(c);
            }
            by_boundary.push(m);
        }
        Self { by_boundary }
    }

    pub fn cells_with(&self, n: usize, boundary: &[CellId]) -> &[CellId] {
        self.by_boundary[n].get(boundary).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub(crate) type PinFn<'a> = dyn Fn(usize, CellId) -> Option<CellId> + 'a;
pub(crate) type AllowFn<'a> = dyn Fn(usize, CellId, CellId) -> bool + 'a;

#[derive(Default, Clone, Copy)]
pub(crate) struct Constraints<'a> {
    /// Forces the image of a source cell.
    pub pin: Option<&'a PinFn<'a>>,
    /// Rejects candidate images.
    pub allow: Option<&'a AllowFn<'a>>,
    pub injective: bool,
}

/// Enumerates full simplicial maps on levels `0..=plan.top`, calling `visit`
/// with the level tables of each; `visit` returns `false` to stop.
pub(crate) fn search_maps(
    plan: &SourcePlan,
    source: &SimplicialSet,
    target: &SimplicialSet,
    index: &BoundaryIndex,
    cons: Constraints<'_>,
    visit: &mut dyn FnMut(&[Vec<CellId>]) -> bool,
) {
    let top = plan.top;
    let mut assign: Vec<Vec<CellId>> = (0..=top).map(|n| vec![UNSET; source.count(n)]).collect();
    let mut used: Vec<Vec<bool>> = if cons.injective {
        (0..=top).map(|n| vec![false; target.count(n)]).collect()
    } else {
        Vec::new()
    };
    let len = plan.order.len();
    if len == 0 {
        visit(&assign);
        return;
    }
    let mut cands: Vec<Vec<CellId>> = vec![Vec::new(); len];
    let mut ptr = vec![0usize; len];
    let mut pos = 0;
    cands[0] = candidates(plan, source, target, index, &cons, &assign, 0);
    loop {
        let (n, c) = plan.order[pos];
        let prev = assign[n][c];
        if prev != UNSET {
            if cons.injective {
                used[n][prev] = false;
            }
            assign[n][c] = UNSET;
        }
        if ptr[pos] < cands[pos].len() {
            let v = cands[pos][ptr[pos]];
            ptr[pos] += 1;
            if cons.injective {
                if used[n][v] {
                    continue;
                }
                used[n][v] = true;
            }
            assign[n][c] = v;
            if pos + 1 == len {
                if !visit(&assign) {
                    return;
                }
            } else {
                pos += 1;
                cands[pos] = candidates(plan, source, target, index, &cons, &assign, pos);
                ptr[pos] = 0;
            }
        } else {
            if pos == 0 {
                return;
            }
            pos -= 1;
        }
    }
}

fn candidates(
    plan: &SourcePlan,
    source: &SimplicialSet,
    target: &SimplicialSet,
    index: &BoundaryIndex,
    cons: &Constraints<'_>,
    assign: &[Vec<CellId>],
    pos: usize,
) -> Vec<CellId> {
    let (n, c) = plan.order[pos];
    let image: Vec<CellId> = if n > 0 {
        source.faces_of(n, c).iter().map(|&f| assign[n - 1][f]).collect()
    } else {
        Vec::new()
    };
    let fits = |v: CellId| n == 0 || target.faces_of(n, v) == image.as_slice();
    let pinned = cons.pin.and_then(|p| p(n, c));
    let mut out: Vec<CellId> = if let Some(&(i, pre)) = plan.deg[n][c].first() {
        let v = target.degen(n - 1, i, assign[n - 1][pre]);
        let consistent = plan.deg[n][c][1..]
            .iter()
            .all(|&(k, q)| target.degen(n - 1, k, assign[n - 1][q]) == v);
        if consistent && fits(v) && pinned.is_none_or(|p| p == v) {
            vec![v]
        } else {
            Vec::new()
        }
    } else if let Some(v) = pinned {
        if v < target.count(n) && fits(v) {
            vec![v]
        } else {
            Vec::new()
        }
    } else if n == 0 {
        (0..target.count(0)).collect()
    } else {
        index.cells_with(n, &image).to_vec()
    };
    if let Some(allow) = cons.allow {
        out.retain(|&v| allow(n, c, v));
    }
    out
}

/// Cells of one level grouped by the value of each face.
pub(crate) struct FaceIndex {
    by_face: Vec<HashMap<CellId, Vec<CellId>>>,
}

impl FaceIndex {
    pub fn new(x: &SimplicialSet, level: usize) -> Self {
        let mut by_face = vec![HashMap::new(); level + 1];
        if level > 0 {
            for c in 0..x.count(level) {
                for (k, &f) in x.faces_of(level, c).iter().enumerate() {
                    by_face[k].entry(f).or_insert_with(Vec::new).push(c);
                }
            }
        }
        Self { by_face }
    }
}

/// Enumerates tuples `(y_p)` of `level`-cells indexed by the face positions
/// `positions` of a hypothetical `(level+1)`-cell, subject to
/// `d_a y_b = d_{b-1} y_a` for `a < b`. With `candidates`, position `t` only
/// ranges over `candidates[t]`; otherwise over all cells, via `index`.
/// Tuples are produced in lexicographic order of the candidate orders.
pub(crate) fn compatible_tuples(
    x: &SimplicialSet,
    level: usize,
    positions: &[usize],
    candidates: Option<&[Vec<CellId>]>,
    index: Option<&FaceIndex>,
    visit: &mut dyn FnMut(&[CellId]),
) {
    let len = positions.len();
    if len == 0 {
        visit(&[]);
        return;
    }
    let all: Vec<CellId>;
    let first: &[CellId] = match candidates {
        Some(c) => &c[0],
        None => {
            all = (0..x.count(level)).collect();
            &all
        }
    };
    let mut tuple = vec![UNSET; len];
    let compatible = |tuple: &[CellId], t: usize, y: CellId| {
        if level == 0 {
            return true;
        }
        let b = positions[t];
        (0..t).all(|s| {
            let a = positions[s];
            x.face(level, a, y) == x.face(level, b - 1, tuple[s])
        })
    };
    // Explicit stack of candidate lists to keep deep levels allocation-light.
    let mut lists: Vec<Vec<CellId>> = vec![Vec::new(); len];
    let mut ptr = vec![0usize; len];
    lists[0] = first.to_vec();
    let mut t = 0;
    loop {
        if ptr[t] < lists[t].len() {
            let y = lists[t][ptr[t]];
            ptr[t] += 1;
            if t > 0 && !compatible(&tuple, t, y) {
                continue;
            }
            tuple[t] = y;
            if t + 1 == len {
                visit(&tuple);
            } else {
                t += 1;
                ptr[t] = 0;
                lists[t] = match (candidates, index) {
                    (Some(c), _) => c[t].clone(),
                    (None, Some(idx)) if level > 0 => {
                        let (a, b) = (positions[0], positions[t]);
                        let want = x.face(level, b - 1, tuple[0]);
                        idx.by_face[a].get(&want).cloned().unwrap_or_default()
                    }
                    _ => (0..x.count(level)).collect(),
                };
            }
        } else {
            if t == 0 {
                return;
            }
            t -= 1;
        }
    }
}
