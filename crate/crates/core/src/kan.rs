//! Kan conditions, n-groupoids, fibrations, hypercovers and equivalences.
//!
//! Finite sets carry the discrete topology, so "surjective submersion" is
//! checked as surjectivity and "diffeomorphism" as bijectivity. Kan!!(m,j)
//! and properness hold vacuously and are noted as such in reports.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::{cylinder, horn_positions, horn_restriction, HornTuple};
use crate::map::{fiber_product, SimplicialMap};
use crate::report::{CheckReport, Verdict, Witness, WitnessSink};
use crate::search::compatible_tuples;
use crate::simplicial::{CellId, SimplicialSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KanMode {
    /// Every horn has a filler.
    Fill,
    /// Every horn has exactly one filler.
    Unique,
}

const VACUOUS: &str = "Kan!! and properness hold vacuously since every level is a finite discrete set";

fn kan_name(m: usize, j: usize, mode: KanMode) -> String {
    match mode {
        KanMode::Fill => format!("Kan({m},{j})"),
        KanMode::Unique => format!("Kan!({m},{j})"),
    }
}

pub fn check_kan(x: &SimplicialSet, m: usize, j: usize, mode: KanMode) -> Result<CheckReport> {
    if m == 0 || j > m {
        return Err(Error::InvalidIndex(format!("Kan condition ({m},{j})")));
    }
    let mut report = CheckReport::new("simplicial set", kan_name(m, j, mode), x.top());
    if m > x.top() {
        report.partial(format!("level {m} lies above truncation {}", x.top()));
        return Ok(report);
    }
    let hr = horn_restriction(x, m, j)?;
    let mut fillers = vec![Vec::new(); hr.horns.len()];
    for (c, &h) in hr.lambda_star.iter().enumerate() {
        fillers[h].push(c);
    }
    let mut sink = WitnessSink::default();
    for (h, fs) in fillers.iter().enumerate() {
        if fs.is_empty() {
            sink.push(Witness::new(m - 1, hr.horns[h].faces.clone(), "unfillable horn"));
        } else if mode == KanMode::Unique && fs.len() > 1 {
            sink.push(Witness::new(m, fs.clone(), "several fillers of one horn"));
        }
    }
    sink.into_report(&mut report);
    Ok(report)
}

/// Kan(m) for `1 ≤ m ≤ n` and Kan!(m) for `n < m ≤ N`, over all horns.
pub fn classify_n_groupoid(x: &SimplicialSet, n: usize) -> CheckReport {
    let mut report = CheckReport::new("simplicial set", format!("{n}-groupoid"), x.top());
    for m in 1..=x.top() {
        let mode = if m <= n { KanMode::Fill } else { KanMode::Unique };
        for j in 0..=m {
            report.push_part(check_kan(x, m, j, mode).expect("valid horn index"));
        }
    }
    if x.top() < n + 2 {
        report.partial(format!(
            "unique filling above level {} not checkable below truncation {}",
            x.top(),
            n + 2
        ));
    }
    report.note(VACUOUS);
    report
}

/// A horn filler; the least one when several exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Filler {
    pub cell: CellId,
    pub unique: bool,
}

pub fn fill_horn(x: &SimplicialSet, horn: &HornTuple) -> Result<Filler> {
    let (m, j) = (horn.m, horn.j);
    if m == 0 || m > x.top() || j > m || horn.faces.len() != m {
        return Err(Error::InvalidIndex(format!("horn ({m},{j})")));
    }
    let positions = horn_positions(m, j);
    let mut found = (0..x.count(m))
        .filter(|&c| positions.iter().zip(&horn.faces).all(|(&i, &f)| x.face(m, i, c) == f));
    let cell = found.next().ok_or(Error::NoFiller { m, j })?;
    Ok(Filler {
        cell,
        unique: found.next().is_none(),
    })
}

fn preimages(f: &SimplicialMap, n: usize) -> Vec<Vec<CellId>> {
    let mut over = vec![Vec::new(); f.target().count(n)];
    for (x, &y) in f.table(n).iter().enumerate() {
        over[y].push(x);
    }
    over
}

/// For each base `m`-cell `g`, compares the `m`-cells of the source over
/// `g` with the compatible tuples (at `positions`) of source `(m-1)`-cells
/// lying over the corresponding faces of `g`. Returns witnesses of missing
/// lifts and, when `bijective`, of multiple lifts.
fn relative_lifts(
    f: &SimplicialMap,
    m: usize,
    positions: &[usize],
    bijective: bool,
    sink: &mut WitnessSink,
) {
    let (k, g) = (f.source(), f.target());
    let below = preimages(f, m - 1);
    let above = preimages(f, m);
    for base in 0..g.count(m) {
        let mut counts: HashMap<Vec<CellId>, usize> = HashMap::new();
        for &c in &above[base] {
            let key: Vec<CellId> = positions.iter().map(|&i| k.face(m, i, c)).collect();
            *counts.entry(key).or_default() += 1;
        }
        let cands: Vec<Vec<CellId>> = positions
            .iter()
            .map(|&i| below[g.face(m, i, base)].clone())
            .collect();
        compatible_tuples(k, m - 1, positions, Some(&cands), None, &mut |t| {
            match counts.get(t).copied().unwrap_or(0) {
                0 => {
                    let mut cells = vec![base];
                    cells.extend_from_slice(t);
                    sink.push(Witness::new(m, cells, "no lift of base cell with these faces"));
                }
                1 => {}
                many if bijective => {
                    let mut cells = vec![base];
                    cells.extend_from_slice(t);
                    sink.push(Witness::new(m, cells, format!("{many} lifts")));
                }
                _ => {}
            }
        });
    }
}

fn vertex_map_check(f: &SimplicialMap, bijective: bool, sink: &mut WitnessSink) {
    let over = preimages(f, 0);
    for (y, xs) in over.iter().enumerate() {
        if xs.is_empty() {
            sink.push(Witness::new(0, vec![y], "vertex not in the image"));
        } else if bijective && xs.len() > 1 {
            sink.push(Witness::new(0, xs.clone(), "vertices with a common image"));
        }
    }
}

/// The relative horn maps `τ_{m,j}` are surjective for `m < n` and bijective
/// for `n ≤ m ≤ depth`; `τ_{0,0} = f_0`.
pub fn check_fibration(f: &SimplicialMap, n: usize) -> CheckReport {
    let depth = f.top();
    let mut report = CheckReport::new("map", format!("Kan fibration (n={n})"), depth);
    for m in 0..=depth {
        let bijective = m >= n;
        let word = if bijective { "bijective" } else { "surjective" };
        if m == 0 {
            let mut part = CheckReport::new("map", format!("tau(0,0) {word}"), depth);
            let mut sink = WitnessSink::default();
            vertex_map_check(f, bijective, &mut sink);
            sink.into_report(&mut part);
            report.push_part(part);
            continue;
        }
        for j in 0..=m {
            let mut part = CheckReport::new("map", format!("tau({m},{j}) {word}"), depth);
            let mut sink = WitnessSink::default();
            relative_lifts(f, m, &horn_positions(m, j), bijective, &mut sink);
            sink.into_report(&mut part);
            report.push_part(part);
        }
    }
    if depth < n {
        report.partial(format!("bijectivity at level {n} lies above truncation {depth}"));
    }
    report.note(VACUOUS);
    report
}

/// The relative boundary maps `τ_m` are surjective for `m < n` and bijective
/// for `n ≤ m ≤ depth`; `τ_0 = f_0`.
pub fn check_hypercover(f: &SimplicialMap, n: usize) -> CheckReport {
    let depth = f.top();
    let mut report = CheckReport::new("map", format!("hypercover (n={n})"), depth);
    for m in 0..=depth {
        let bijective = m >= n;
        let word = if bijective { "bijective" } else { "surjective" };
        let mut part = CheckReport::new("map", format!("tau({m}) {word}"), depth);
        let mut sink = WitnessSink::default();
        if m == 0 {
            vertex_map_check(f, bijective, &mut sink);
        } else {
            let positions: Vec<usize> = (0..=m).collect();
            relative_lifts(f, m, &positions, bijective, &mut sink);
        }
        sink.into_report(&mut part);
        report.push_part(part);
    }
    if depth < n {
        report.partial(format!("bijectivity at level {n} lies above truncation {depth}"));
    }
    report.note(VACUOUS);
    report
}

/// `f: Y → X` is an equivalence when `d¹₀ ∘ pr₂: Y ×_{f,X,d¹₁} X^[1] → X`
/// is a hypercover at level `n`. Cylinders are built to depth
/// `min(Y.N, X.N − 1)`.
pub fn check_equivalence(f: &SimplicialMap, n: usize) -> Result<CheckReport> {
    let x = f.target();
    if x.top() < 1 {
        return Err(Error::DepthExceedsTruncation {
            depth: 1,
            truncation: x.top(),
        });
    }
    let depth = f.source().top().min(x.top() - 1);
    let cyl = cylinder(x, 1, depth)?;
    let d1 = cyl.end_map(0)?;
    let d0 = cyl.end_map(1)?;
    let f_cut = restrict_source(f, depth)?;
    let fp = fiber_product(&f_cut, &d1)?;
    let q = fp.right.then(&d0)?;
    let hyper = check_hypercover(&q, n);
    let mut report = CheckReport::new("map", format!("equivalence (n={n})"), depth);
    report.note(format!("verified to depth {depth}"));
    report.push_part(hyper);
    if depth < f.source().top() {
        report.note(format!(
            "source levels above {depth} are not covered by the cylinder"
        ));
    }
    Ok(report)
}

/// The map with its source truncated at `n`.
pub(crate) fn restrict_source(f: &SimplicialMap, n: usize) -> Result<SimplicialMap> {
    if n >= f.source().top() {
        return Ok(f.clone());
    }
    let s = Arc::new(f.source().truncate(n)?);
    f.restrict_to(s)
}

pub fn verdict_of(reports: &[CheckReport]) -> Verdict {
    reports.iter().fold(Verdict::Holds, |v, r| v.and(r.verdict))
}
