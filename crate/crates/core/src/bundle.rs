//! Kan fibrations with their fiber: fibers, pullback, pushforward along
//! hypercovers, invariant objects and isomorphisms over a fixed base.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::Prism;
use crate::iso::find_isomorphism_with;
use crate::kan::{check_fibration, check_hypercover};
use crate::map::{fiber_product, same_set, MapKind, SimplicialMap};
use crate::partition::Partition;
use crate::report::CheckReport;
use crate::search::{search_maps, BoundaryIndex, Constraints, SourcePlan};
use crate::simplicial::{CellId, SimplicialSet};

/// `π: K → G` with the inclusion of the fiber over vertex 0.
#[derive(Clone, Debug)]
pub struct FibrationBundle {
    pub k: Arc<SimplicialSet>,
    pub base: Arc<SimplicialSet>,
    pub pi: SimplicialMap,
    /// Fiber over vertex 0 of the base, included into `K`.
    pub incl: SimplicialMap,
    /// Level from which relative horn maps are bijective.
    pub n: usize,
    pub certificate: CheckReport,
}

impl FibrationBundle {
    /// Computes the fiber and the certificate `check_fibration(pi, n)`;
    /// errors with `NotAFibration` when the certificate fails.
    pub fn new(pi: SimplicialMap, n: usize) -> Result<Self> {
        let certificate = check_fibration(&pi, n);
        if certificate.fails() {
            return Err(Error::NotAFibration(Box::new(certificate)));
        }
        Self::unchecked(pi, n, certificate)
    }

    fn unchecked(pi: SimplicialMap, n: usize, certificate: CheckReport) -> Result<Self> {
        let incl = fiber(&pi, 0)?;
        Ok(Self {
            k: pi.source().clone(),
            base: pi.target().clone(),
            pi,
            incl,
            n,
            certificate,
        })
    }

    pub fn fiber(&self) -> &Arc<SimplicialSet> {
        self.incl.source()
    }

    /// Total space and base both truncated at `top`.
    pub fn truncate(&self, top: usize) -> Result<Self> {
        let k = Arc::new(self.k.truncate(top)?);
        let base = Arc::new(self.base.truncate(top)?);
        let pi = SimplicialMap::new(k, base, self.pi.tables()[..=top].to_vec(), MapKind::Full)?;
        Self::new(pi, self.n)
    }
}

/// The fiber `Δ[0] ×_{y₀, G} K` over the vertex `y0`, as its inclusion
/// into `K`. Fiber cells are numbered in the order of their images.
pub fn fiber(pi: &SimplicialMap, y0: CellId) -> Result<SimplicialMap> {
    let base = pi.target();
    if y0 >= base.count(0) {
        return Err(Error::InvalidIndex(format!("vertex {y0}")));
    }
    let point = Arc::new(SimplicialSet::point(pi.top()));
    let at = SimplicialMap::constant(point, base.clone(), y0)?;
    Ok(fiber_product(pi, &at)?.left)
}

/// `φ*K` over `H` for `φ: H → G`.
pub fn pullback(bundle: &FibrationBundle, phi: &SimplicialMap) -> Result<FibrationBundle> {
    let fp = fiber_product(phi, &bundle.pi)?;
    FibrationBundle::new(fp.left, bundle.n)
}

/// An isomorphism of total spaces commuting with the projections, when
/// both bundles have the same base.
pub fn find_bundle_isomorphism(a: &FibrationBundle, b: &FibrationBundle) -> Option<SimplicialMap> {
    if !same_set(&a.base, &b.base) {
        return None;
    }
    let allow = |n: usize, c: CellId, v: CellId| a.pi.apply(n, c) == b.pi.apply(n, v);
    find_isomorphism_with(&a.k, &b.k, Some(&allow))
}

/// Fiber 0-cells `x` such that the loops of `K` at `x` cover every loop of
/// the base at vertex 0. Errors with `Internal` if the set is not closed
/// under fiber arrows.
pub fn invariant_objects(bundle: &FibrationBundle) -> Result<Vec<CellId>> {
    let (k, g, incl) = (&bundle.k, &bundle.base, &bundle.incl);
    if k.top() < 1 {
        return Ok((0..incl.source().count(0)).collect());
    }
    let loops: Vec<CellId> = (0..g.count(1)).filter(|&e| g.face(1, 0, e) == 0 && g.face(1, 1, e) == 0).collect();
    let invariant: Vec<bool> = (0..incl.source().count(0))
        .map(|v| {
            let x = incl.apply(0, v);
            let mut hit = vec![false; g.count(1)];
            for y in (0..k.count(1)).filter(|&y| k.face(1, 0, y) == x && k.face(1, 1, y) == x) {
                hit[bundle.pi.apply(1, y)] = true;
            }
            loops.iter().all(|&e| hit[e])
        })
        .collect();
    let fiber = incl.source();
    for a in 0..fiber.count(1) {
        let (s, t) = (fiber.face(1, 1, a), fiber.face(1, 0, a));
        if invariant[s] != invariant[t] {
            return Err(Error::Internal(format!(
                "fiber arrow {a} joins objects {s} and {t} of which one is invariant"
            )));
        }
    }
    Ok((0..invariant.len()).filter(|&v| invariant[v]).collect())
}

/// Pushes a bundle over `X` forward along a hypercover `f: X → Y` that is
/// bijective on vertices. Level `n` of the result is `E_n` modulo the
/// cylinders in `E` with degenerate vertical edges whose image in `Y` is
/// constant; it needs `E` up to level `n + 1`, so the result is truncated
/// one level below `E`, as is its base.
pub fn pushforward(bundle: &FibrationBundle, f: &SimplicialMap) -> Result<FibrationBundle> {
    if !same_set(f.source(), &bundle.base) {
        return Err(Error::TargetMismatch);
    }
    let hyper = check_hypercover(f, 2);
    if hyper.fails() {
        return Err(Error::NotAHypercover(Box::new(hyper)));
    }
    let y = f.target();
    let mut seen = vec![false; y.count(0)];
    for &v in f.table(0) {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::BaseVertexMapNotBijective(format!("vertex {v} of the target is hit twice")));
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::BaseVertexMapNotBijective(format!("vertex {v} of the target is missed")));
    }
    let e = &bundle.k;
    if e.top() < 1 {
        return Err(Error::DepthExceedsTruncation {
            depth: 1,
            truncation: e.top(),
        });
    }
    if y.top() < e.top() {
        return Err(Error::TruncationMismatch(format!(
            "target truncated at {} below the total space at {}",
            y.top(),
            e.top()
        )));
    }
    let top = e.top() - 1;
    let pi = &bundle.pi;
    let down = |n: usize, c: CellId| f.apply(n, pi.apply(n, c));
    let mut classes = Vec::with_capacity(top + 1);
    let mut reps = Vec::with_capacity(top + 1);
    let index = BoundaryIndex::new(e, e.top());
    for n in 0..=top {
        let mut part = Partition::new(e.count(n));
        if n > 0 {
            let prism = Prism::new(1, n, n + 1)?;
            let plan = SourcePlan::new(&prism.set, n + 1);
            let upper = prism.cell(&vec![1; n + 1], &(0..=n).collect::<Vec<_>>());
            for c in 0..e.count(n) {
                let beta = down(n, c);
                let pin = |lv: usize, p: CellId| {
                    let (a, b) = prism.coords(lv, p);
                    a.iter().all(|&v| v == 0).then(|| e.operate(n, c, b))
                };
                let allow = |lv: usize, p: CellId, v: CellId| {
                    let (a, b) = prism.coords(lv, p);
                    if lv == 1 && a == [0, 1] && b[0] == b[1] && v != e.degen(0, 0, e.face(1, 0, v)) {
                        return false;
                    }
                    down(lv, v) == y.operate(n, beta, b)
                };
                let cons = Constraints {
                    pin: Some(&pin),
                    allow: Some(&allow),
                    injective: false,
                };
                let mut tops = Vec::new();
                search_maps(&plan, &prism.set, e, &index, cons, &mut |t| {
                    tops.push(t[n][upper]);
                    true
                });
                for t in tops {
                    part.union(c, t);
                }
            }
        }
        let (cls, rp) = part.classes();
        classes.push(cls);
        reps.push(rp);
    }
    let counts: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    let mut tables = vec![Vec::new(); top + 1];
    let ill = |what: String| Error::WellDefinednessFailure(what);
    for n in 0..=top {
        let mut face_of: Vec<Option<Vec<CellId>>> = vec![None; counts[n]];
        let mut degen_of: Vec<Option<Vec<CellId>>> = vec![None; counts[n]];
        let mut image: Vec<Option<CellId>> = vec![None; counts[n]];
        for c in 0..e.count(n) {
            let k = classes[n][c];
            let fs: Vec<CellId> = if n == 0 {
                Vec::new()
            } else {
                (0..=n).map(|i| classes[n - 1][e.face(n, i, c)]).collect()
            };
            let ds: Vec<CellId> = if n == top {
                Vec::new()
            } else {
                (0..=n).map(|i| classes[n + 1][e.degen(n, i, c)]).collect()
            };
            let im = down(n, c);
            match &face_of[k] {
                Some(prev) if *prev != fs => return Err(ill(format!("faces of class {k} at level {n}"))),
                _ => face_of[k] = Some(fs),
            }
            match &degen_of[k] {
                Some(prev) if *prev != ds => return Err(ill(format!("degeneracies of class {k} at level {n}"))),
                _ => degen_of[k] = Some(ds),
            }
            match image[k] {
                Some(prev) if prev != im => return Err(ill(format!("image of class {k} at level {n}"))),
                _ => image[k] = Some(im),
            }
        }
        faces[n] = face_of.into_iter().flatten().flatten().collect();
        degens[n] = degen_of.into_iter().flatten().flatten().collect();
        tables[n] = image.into_iter().flatten().collect();
    }
    let set = Arc::new(SimplicialSet::from_flat(top, counts, faces, degens)?);
    let pi_f = SimplicialMap::new(set, Arc::new(y.truncate(top)?), tables, MapKind::Full)?;
    FibrationBundle::new(pi_f, bundle.n)
}
