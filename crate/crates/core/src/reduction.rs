//! 2-isotropy, its consequences for 2-cells, and the reduction of a
//! 2-isotropy free 2-groupoid to a groupoid.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{nerve, FiniteGroupoid, Nerve};
use crate::kan::{check_hypercover, classify_n_groupoid};
use crate::map::{MapKind, SimplicialMap};
use crate::partition::Partition;
use crate::report::{CheckReport, Verdict, Witness, WitnessSink};
use crate::simplicial::{CellId, SimplicialSet};

/// 2-cells all of whose faces are the degenerate edge at `z`.
pub fn two_isotropy_set(x: &SimplicialSet, z: CellId) -> Vec<CellId> {
    if x.top() < 2 {
        return Vec::new();
    }
    let e = x.degen(0, 0, z);
    (0..x.count(2)).filter(|&c| x.faces_of(2, c).iter().all(|&f| f == e)).collect()
}

/// Fails at every vertex whose 2-isotropy set is not a singleton.
pub fn is_2_isotropy_free(x: &SimplicialSet) -> CheckReport {
    let mut report = CheckReport::new("simplicial set", "2-isotropy free", x.top());
    if x.top() < 2 {
        report.partial("no 2-cells below truncation 2");
        return report;
    }
    let mut sink = WitnessSink::default();
    for z in 0..x.count(0) {
        let n = two_isotropy_set(x, z).len();
        if n != 1 {
            sink.push(Witness::new(0, vec![z], format!("{n} 2-cells with all faces degenerate")));
        }
    }
    sink.into_report(&mut report);
    report
}

fn boundary_classes(x: &SimplicialSet) -> HashMap<&[CellId], Vec<CellId>> {
    let mut by: HashMap<&[CellId], Vec<CellId>> = HashMap::new();
    for c in 0..x.count(2) {
        by.entry(x.faces_of(2, c)).or_default().push(c);
    }
    by
}

/// Checks that 2-cells with the boundary of a degenerate 2-cell are
/// degenerate, and that 2-cells are determined by their boundary; the
/// verdict is that of "2-isotropy free implies both".
pub fn check_isotropy_consequences(x: &SimplicialSet) -> CheckReport {
    let mut report = CheckReport::new("simplicial set", "2-isotropy consequences", x.top());
    if x.top() < 2 {
        report.partial("no 2-cells below truncation 2");
        return report;
    }
    let free = is_2_isotropy_free(x);
    let by = boundary_classes(x);
    let mut degenerate = CheckReport::new("simplicial set", "degenerate boundary forces degenerate cell", 2);
    let mut sink = WitnessSink::default();
    for g in 0..x.count(1) {
        for j in 0..=1 {
            let s = x.degen(1, j, g);
            let same = &by[x.faces_of(2, s)];
            if same.len() > 1 {
                sink.push(Witness::new(2, same.clone(), format!("share the boundary of s{j} of edge {g}")));
            }
        }
    }
    sink.into_report(&mut degenerate);
    let mut injective = CheckReport::new("simplicial set", "boundary map at level 2 injective", 2);
    let mut sink = WitnessSink::default();
    let mut groups: Vec<&Vec<CellId>> = by.values().filter(|v| v.len() > 1).collect();
    groups.sort();
    for cells in groups {
        sink.push(Witness::new(2, cells.clone(), "2-cells with one boundary"));
    }
    sink.into_report(&mut injective);
    let consequences_hold = degenerate.holds() && injective.holds();
    if free.holds() && !consequences_hold {
        report.fail(Witness::new(0, Vec::new(), "2-isotropy free but a consequence fails"));
    }
    report.note(format!(
        "2-isotropy free: {}; degenerate rigidity: {}; injectivity: {}",
        free.verdict, degenerate.verdict, injective.verdict
    ));
    report.parts.push(free);
    report.parts.push(degenerate);
    report.parts.push(injective);
    report
}

/// A groupoid with a hypercover from the reduced 2-groupoid.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub groupoid: FiniteGroupoid,
    pub nerve: Nerve,
    pub map: SimplicialMap,
    /// Arrow of the groupoid for each 1-cell.
    pub classes: Vec<usize>,
    pub certificate: CheckReport,
}

pub fn reduce_to_1(z: &Arc<SimplicialSet>) -> Result<Reduction> {
    if z.top() < 2 {
        return Err(Error::NotA2Groupoid(format!("truncation {} is below 2", z.top())));
    }
    let kan = classify_n_groupoid(z, 2);
    if kan.fails() {
        return Err(Error::NotA2Groupoid(kan.summary()));
    }
    for v in 0..z.count(0) {
        let count = two_isotropy_set(z, v).len();
        if count != 1 {
            return Err(Error::Not2IsotropyFree { vertex: v, count });
        }
    }
    let degenerate_edge = |e: CellId| e == z.degen(0, 0, z.face(1, 0, e));
    let mut part = Partition::new(z.count(1));
    for w in 0..z.count(2) {
        if degenerate_edge(z.face(2, 0, w)) {
            part.union(z.face(2, 2, w), z.face(2, 1, w));
        }
    }
    let (classes, reps) = part.classes();
    let mut product: HashMap<(usize, usize), usize> = HashMap::new();
    for w in 0..z.count(2) {
        let key = (classes[z.face(2, 2, w)], classes[z.face(2, 0, w)]);
        let c = classes[z.face(2, 1, w)];
        if let Some(&prev) = product.get(&key) {
            if prev != c {
                return Err(Error::WellDefinednessFailure(format!(
                    "classes {key:?} compose to both {prev} and {c}"
                )));
            }
        } else {
            product.insert(key, c);
        }
    }
    let src: Vec<usize> = reps.iter().map(|&e| z.face(1, 1, e)).collect();
    let tgt: Vec<usize> = reps.iter().map(|&e| z.face(1, 0, e)).collect();
    for a in 0..reps.len() {
        for b in (0..reps.len()).filter(|&b| src[b] == tgt[a]) {
            if !product.contains_key(&(a, b)) {
                return Err(Error::WellDefinednessFailure(format!("no composite of classes {a} and {b}")));
            }
        }
    }
    let objects: Vec<String> = (0..z.count(0))
        .map(|v| z.label(0, v).map_or_else(|| v.to_string(), str::to_string))
        .collect();
    let arrows: Vec<String> = reps
        .iter()
        .map(|&e| z.label(1, e).map_or_else(|| format!("[{e}]"), |l| format!("[{l}]")))
        .collect();
    let groupoid = FiniteGroupoid::from_compose(objects.len(), src, tgt, |a, b| product[&(a, b)])
        .and_then(|g| g.with_names(objects, arrows))
        .map_err(|e| Error::WellDefinednessFailure(e.to_string()))?;
    let top = z.top();
    let nv = nerve(&groupoid, top);
    let mut tables = vec![(0..z.count(0)).collect::<Vec<_>>()];
    for n in 1..=top {
        let mut level = Vec::with_capacity(z.count(n));
        for c in 0..z.count(n) {
            let string: Vec<usize> = (0..n).map(|k| classes[z.edge(n, c, k, k + 1)]).collect();
            level.push(nv.cell_of(&string).ok_or_else(|| {
                Error::WellDefinednessFailure(format!("spine of cell {c} at level {n} is not composable"))
            })?);
        }
        tables.push(level);
    }
    let map = SimplicialMap::new(z.clone(), nv.set.clone(), tables, MapKind::Full)
        .map_err(|e| Error::WellDefinednessFailure(e.to_string()))?;
    let mut certificate = check_hypercover(&map, 2);
    certificate.note("the reduced groupoid and the projection are étale, vacuously for finite sets");
    if certificate.verdict == Verdict::Fails {
        return Err(Error::NotAHypercover(Box::new(certificate)));
    }
    Ok(Reduction {
        groupoid,
        nerve: nv,
        map,
        classes,
        certificate,
    })
}
