//! Action data read off a Kan fibration over a 2-group: a span of
//! groupoids `𝒳 ← Y_g → 𝒳` for every 1-cell `g` of the base and a
//! transport table for every 2-cell.

use std::cell::Cell;
use std::collections::HashMap;

use crate::bundle::FibrationBundle;
use crate::error::{Error, Result};
use crate::groupoid::{to_groupoid, FiniteGroupoid, Functor};
use crate::hom::{collect_maps, Prism};
use crate::search::Constraints;
use crate::simplicial::CellId;

/// The span over one 1-cell `g`. Objects of `groupoid` are the 1-cells of
/// `K` over `g`; an arrow is a square of `K` over the constant square on
/// `g`, from its lower to its upper edge. The legs read off the vertical
/// edges at the two ends.
#[derive(Clone, Debug)]
pub struct Span {
    pub g: CellId,
    pub objects: Vec<CellId>,
    pub groupoid: FiniteGroupoid,
    pub left: Functor,
    pub right: Functor,
}

impl Span {
    /// Object index of a 1-cell of `K` over `g`.
    pub fn object_of(&self, y: CellId) -> Option<usize> {
        self.objects.binary_search(&y).ok()
    }

    /// The arrow `from → to` whose left leg is the fiber arrow `left`.
    pub fn arrow_over(&self, from: usize, to: usize, left: usize) -> Option<usize> {
        self.groupoid
            .arrows_between(from, to)
            .find(|&a| self.left.arrows[a] == left)
    }
}

/// `φ(y′₀₂, y₀₁, y₁₂)` for one triple, with the `y` as 1-cells of `K` and
/// `φ` an arrow of the fiber groupoid from `d₀y₀₂` to `d₀y′₀₂`, where
/// `y₀₂` is the third face of the lift of `(y₀₁, y₁₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransportEntry {
    pub y02p: CellId,
    pub y01: CellId,
    pub y12: CellId,
    pub y02: CellId,
    pub phi: usize,
}

#[derive(Clone, Debug)]
pub struct Transport {
    pub cell: CellId,
    pub entries: Vec<TransportEntry>,
}

#[derive(Clone, Debug)]
pub struct ActionSpanData {
    /// The fiber over the base vertex as a groupoid; its objects and arrows
    /// are the fiber's 0- and 1-cells.
    pub fiber: FiniteGroupoid,
    /// 0- and 1-cells of `K` for the fiber's objects and arrows.
    pub fiber_cells: [Vec<CellId>; 2],
    pub spans: Vec<Span>,
    pub transports: Vec<Transport>,
}

impl ActionSpanData {
    /// Fiber object of a 0-cell of `K`.
    pub fn fiber_object(&self, k0: CellId) -> Option<usize> {
        self.fiber_cells[0].iter().position(|&c| c == k0)
    }

    /// Fiber arrow of a 1-cell of `K` over the unit.
    pub fn fiber_arrow(&self, k1: CellId) -> Option<usize> {
        self.fiber_cells[1].iter().position(|&c| c == k1)
    }
}

type HornIndex = HashMap<(CellId, CellId, CellId), CellId>;

pub fn lambda_extract(bundle: &FibrationBundle) -> Result<ActionSpanData> {
    let (k, base, pi) = (&bundle.k, &bundle.base, &bundle.pi);
    let depth = k.top().min(base.top());
    if depth < 2 {
        return Err(Error::DepthExceedsTruncation { depth: 2, truncation: depth });
    }
    if base.count(0) != 1 {
        return Err(Error::NotA2Groupoid(format!("the base has {} vertices, not 1", base.count(0))));
    }
    let incl = &bundle.incl;
    let fiber = to_groupoid(incl.source())?;
    let cells0 = incl.table(0).to_vec();
    let cells1 = incl.table(1).to_vec();
    let obj_of: HashMap<CellId, usize> = cells0.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let arr_of: HashMap<CellId, usize> = cells1.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let coherence = |s: String| Error::CoherenceFailure(s);

    let square = Prism::new(1, 1, 2)?;
    let lower = square.cell(&[0, 0], &[0, 1]);
    let upper = square.cell(&[1, 1], &[0, 1]);
    let left_edge = square.cell(&[0, 1], &[0, 0]);
    let right_edge = square.cell(&[0, 1], &[1, 1]);
    let mut spans = Vec::with_capacity(base.count(1));
    for g in 0..base.count(1) {
        let objects: Vec<CellId> = (0..k.count(1)).filter(|&y| pi.apply(1, y) == g).collect();
        let index_of: HashMap<CellId, usize> = objects.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let allow = |lv: usize, c: CellId, v: CellId| pi.apply(lv, v) == base.operate(1, g, square.coords(lv, c).1);
        let cons = Constraints {
            allow: Some(&allow),
            ..Constraints::default()
        };
        let mut arrows: Vec<(usize, usize, usize, usize)> = collect_maps(&square.set, k, 2, cons, None)
            .into_iter()
            .map(|t| {
                let fa = |c: CellId| arr_of[&t[1][c]];
                (index_of[&t[1][lower]], index_of[&t[1][upper]], fa(left_edge), fa(right_edge))
            })
            .collect();
        arrows.sort_unstable();
        let by_left: HashMap<(usize, usize, usize), usize> =
            arrows.iter().enumerate().map(|(i, a)| ((a.0, a.1, a.2), i)).collect();
        if by_left.len() != arrows.len() {
            return Err(coherence(format!("two squares over {g} share their lower, upper and left edges")));
        }
        let src = arrows.iter().map(|a| a.0).collect();
        let tgt = arrows.iter().map(|a| a.1).collect();
        let missing = Cell::new(None);
        let groupoid = FiniteGroupoid::from_compose(objects.len(), src, tgt, |p, q| {
            let (a, b) = (arrows[p], arrows[q]);
            let l = fiber.compose(a.2, b.2).expect("legs compose");
            by_left.get(&(a.0, b.1, l)).copied().unwrap_or_else(|| {
                missing.set(Some((p, q)));
                0
            })
        });
        if let Some((p, q)) = missing.get() {
            return Err(coherence(format!("squares {p} and {q} over {g} have no composite")));
        }
        let groupoid = groupoid.map_err(|e| coherence(format!("squares over {g}: {e}")))?;
        let leg = |face: usize, pick: fn(&(usize, usize, usize, usize)) -> usize| Functor {
            objects: objects.iter().map(|&y| obj_of[&k.face(1, face, y)]).collect(),
            arrows: arrows.iter().map(pick).collect(),
        };
        let left = leg(1, |a| a.2);
        let right = leg(0, |a| a.3);
        groupoid.check_functor(&fiber, &left)?;
        groupoid.check_functor(&fiber, &right)?;
        spans.push(Span {
            g,
            objects,
            groupoid,
            left,
            right,
        });
    }

    // Triangles keyed by (base cell, d0, d2) and by (base cell, d1, d2).
    let mut horn1 = HornIndex::new();
    let mut horn0 = HornIndex::new();
    for w in 0..k.count(2) {
        let b = pi.apply(2, w);
        let (d0, d1, d2) = (k.face(2, 0, w), k.face(2, 1, w), k.face(2, 2, w));
        for (index, key) in [(&mut horn1, (b, d0, d2)), (&mut horn0, (b, d1, d2))] {
            if index.insert(key, w).is_some() {
                return Err(coherence(format!("a horn of triangle {w} has two lifts")));
            }
        }
    }
    let mut transports = Vec::with_capacity(base.count(2));
    for cell in 0..base.count(2) {
        let (g12, g02, g01) = (base.face(2, 0, cell), base.face(2, 1, cell), base.face(2, 2, cell));
        let flat = base.degen(1, 1, g02);
        let mut entries = Vec::new();
        for &y01 in &spans[g01].objects {
            for &y12 in spans[g12].objects.iter().filter(|&&y| k.face(1, 1, y) == k.face(1, 0, y01)) {
                let y012 = *horn1
                    .get(&(cell, y12, y01))
                    .ok_or_else(|| coherence(format!("no lift of ({y01}, {y12}) over {cell}")))?;
                let y02 = k.face(2, 1, y012);
                for &y02p in spans[g02].objects.iter().filter(|&&y| k.face(1, 1, y) == k.face(1, 1, y01)) {
                    let z = *horn0
                        .get(&(flat, y02p, y02))
                        .ok_or_else(|| coherence(format!("no lift of ({y02}, {y02p}) over {flat}")))?;
                    let phi = *arr_of
                        .get(&k.face(2, 0, z))
                        .ok_or_else(|| coherence(format!("transport edge of triangle {z} is not in the fiber")))?;
                    entries.push(TransportEntry {
                        y02p,
                        y01,
                        y12,
                        y02,
                        phi,
                    });
                }
            }
        }
        transports.push(Transport { cell, entries });
    }
    Ok(ActionSpanData {
        fiber,
        fiber_cells: [cells0, cells1],
        spans,
        transports,
    })
}
