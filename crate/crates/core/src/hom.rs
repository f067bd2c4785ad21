//! Hom-sets, horn and boundary restriction, cylinders and transformations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::map::{same_set, SimplicialMap};
use crate::search::{
    compatible_tuples, search_maps, BoundaryIndex, Constraints, FaceIndex, SourcePlan,
};
use crate::simplicial::{product, standard_complex, CellId, SimplicialSet, Standard, StandardKind};

/// Level tables of every map `source → target` on levels `0..=top`.
pub(crate) fn collect_maps(
    source: &SimplicialSet,
    target: &SimplicialSet,
    top: usize,
    cons: Constraints<'_>,
    limit: Option<usize>,
) -> Vec<Vec<Vec<CellId>>> {
    let plan = SourcePlan::new(source, top);
    let index = BoundaryIndex::new(target, top);
    let mut out = Vec::new();
    search_maps(&plan, source, target, &index, cons, &mut |a| {
        out.push(a.to_vec());
        limit.is_none_or(|l| out.len() < l)
    });
    out
}

/// All full simplicial maps `a → x`, in search order.
pub fn enumerate_maps(a: &Arc<SimplicialSet>, x: &Arc<SimplicialSet>) -> Result<Vec<SimplicialMap>> {
    if x.top() < a.top() {
        return Err(Error::TruncationMismatch(format!(
            "target truncated at {} below source level {}",
            x.top(),
            a.top()
        )));
    }
    Ok(collect_maps(a, x, a.top(), Constraints::default(), None)
        .into_iter()
        .map(|t| SimplicialMap::trusted(a.clone(), x.clone(), t))
        .collect())
}

pub fn count_maps(a: &SimplicialSet, x: &SimplicialSet) -> Result<usize> {
    if x.top() < a.top() {
        return Err(Error::TruncationMismatch("target below source".into()));
    }
    let plan = SourcePlan::new(a, a.top());
    let index = BoundaryIndex::new(x, a.top());
    let mut count = 0;
    search_maps(&plan, a, x, &index, Constraints::default(), &mut |_| {
        count += 1;
        true
    });
    Ok(count)
}

/// A compatible tuple of the faces `d_i`, `i ≠ j`, of a would-be `m`-cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornTuple {
    pub m: usize,
    pub j: usize,
    pub faces: Vec<CellId>,
}

#[derive(Clone, Debug)]
pub struct HornRestriction {
    pub horns: Vec<HornTuple>,
    /// Index into `horns` of the horn of each `m`-cell.
    pub lambda_star: Vec<usize>,
}

pub(crate) fn horn_positions(m: usize, j: usize) -> Vec<usize> {
    (0..=m).filter(|&i| i != j).collect()
}

pub fn horn_restriction(x: &SimplicialSet, m: usize, j: usize) -> Result<HornRestriction> {
    if m == 0 || m > x.top() || j > m {
        return Err(Error::InvalidIndex(format!("horn ({m},{j}) on level {}", x.top())));
    }
    let positions = horn_positions(m, j);
    let index = FaceIndex::new(x, m - 1);
    let mut horns = Vec::new();
    compatible_tuples(x, m - 1, &positions, None, Some(&index), &mut |t| {
        horns.push(HornTuple {
            m,
            j,
            faces: t.to_vec(),
        })
    });
    let lookup: HashMap<&[CellId], usize> =
        horns.iter().enumerate().map(|(i, h)| (h.faces.as_slice(), i)).collect();
    let mut lambda_star = Vec::with_capacity(x.count(m));
    for c in 0..x.count(m) {
        let fs: Vec<CellId> = positions.iter().map(|&i| x.face(m, i, c)).collect();
        lambda_star.push(*lookup.get(fs.as_slice()).ok_or_else(|| {
            Error::Internal("horn of a cell is not a compatible tuple".into())
        })?);
    }
    Ok(HornRestriction { horns, lambda_star })
}

#[derive(Clone, Debug)]
pub struct BoundaryRestriction {
    /// Compatible `(m+1)`-tuples of `(m-1)`-cells.
    pub boundaries: Vec<Vec<CellId>>,
    pub partial_star: Vec<usize>,
}

pub fn boundary_restriction(x: &SimplicialSet, m: usize) -> Result<BoundaryRestriction> {
    if m == 0 || m > x.top() {
        return Err(Error::InvalidIndex(format!("boundary at {m} on level {}", x.top())));
    }
    let positions: Vec<usize> = (0..=m).collect();
    let index = FaceIndex::new(x, m - 1);
    let mut boundaries = Vec::new();
    compatible_tuples(x, m - 1, &positions, None, Some(&index), &mut |t| {
        boundaries.push(t.to_vec())
    });
    let lookup: HashMap<&[CellId], usize> =
        boundaries.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let partial_star = (0..x.count(m))
        .map(|c| lookup[x.faces_of(m, c)])
        .collect();
    Ok(BoundaryRestriction {
        boundaries,
        partial_star,
    })
}

/// `Δ[k] × Δ[n]` truncated at `top`, with coordinate lookups.
#[derive(Clone, Debug)]
pub struct Prism {
    pub k: usize,
    pub n: usize,
    pub set: Arc<SimplicialSet>,
    left: Standard,
    right: Standard,
}

impl Prism {
    pub fn new(k: usize, n: usize, top: usize) -> Result<Self> {
        let left = standard_complex(StandardKind::Simplex, k, top)?;
        let right = standard_complex(StandardKind::Simplex, n, top)?;
        let set = Arc::new(product(&left.set, &right.set)?);
        Ok(Self {
            k,
            n,
            set,
            left,
            right,
        })
    }

    pub fn top(&self) -> usize {
        self.set.top()
    }

    /// The cell with coordinates `(a, b)`; both sequences have equal length.
    pub fn cell(&self, a: &[usize], b: &[usize]) -> CellId {
        let level = a.len() - 1;
        let ia = self.left.id_of(a).expect("monotone sequence in [k]");
        let ib = self.right.id_of(b).expect("monotone sequence in [n]");
        ia * self.right.set.count(level) + ib
    }

    pub fn coords(&self, level: usize, c: CellId) -> (&[usize], &[usize]) {
        let w = self.right.set.count(level);
        (self.left.seq(level, c / w), self.right.seq(level, c % w))
    }
}

/// `X^[k]` truncated at `depth`: level `n` lists the maps `Δ[k] × Δ[n] → X`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub k: usize,
    pub depth: usize,
    pub base: Arc<SimplicialSet>,
    pub set: Arc<SimplicialSet>,
    prisms: Vec<Prism>,
    cells: Vec<Vec<Vec<Vec<CellId>>>>,
}

impl Cylinder {
    pub fn prism(&self, n: usize) -> &Prism {
        &self.prisms[n]
    }

    /// The map `Δ[k] × Δ[n] → X` of a cylinder `n`-cell, as level tables.
    pub fn tables(&self, n: usize, c: CellId) -> &[Vec<CellId>] {
        &self.cells[n][c]
    }

    pub fn evaluate(&self, n: usize, c: CellId, a: &[usize], b: &[usize]) -> CellId {
        let level = a.len() - 1;
        self.cells[n][c][level][self.prisms[n].cell(a, b)]
    }

    /// Restriction to the vertex `v` of `Δ[k]`. For `k = 1`, `end_map(0)` is
    /// `d¹₁` and `end_map(1)` is `d¹₀`.
    pub fn end_map(&self, v: usize) -> Result<SimplicialMap> {
        if v > self.k {
            return Err(Error::InvalidIndex(format!("vertex {v} of Δ[{}]", self.k)));
        }
        let tables = (0..=self.depth)
            .map(|n| {
                let a = vec![v; n + 1];
                let b: Vec<usize> = (0..=n).collect();
                (0..self.set.count(n)).map(|c| self.evaluate(n, c, &a, &b)).collect()
            })
            .collect();
        SimplicialMap::new(self.set.clone(), self.base.clone(), tables, crate::map::MapKind::Full)
    }

    /// `X → X^[k]`, sending a cell to its constant cylinder (`s⁰₀` for `k = 1`).
    pub fn constant_map(&self) -> Result<SimplicialMap> {
        let lookups = self.lookups();
        let mut tables = Vec::new();
        for n in 0..=self.depth {
            let p = &self.prisms[n];
            let mut level = Vec::with_capacity(self.base.count(n));
            for x in 0..self.base.count(n) {
                let key = constant_key(&self.base, p, n, x);
                level.push(*lookups[n].get(&key).ok_or_else(|| {
                    Error::Internal("constant cylinder missing".into())
                })?);
            }
            tables.push(level);
        }
        SimplicialMap::new(self.base.clone(), self.set.clone(), tables, crate::map::MapKind::Full)
    }

    /// The id of the constant cylinder on an `n`-cell of the base.
    pub fn constant_of(&self, n: usize, x: CellId) -> Option<CellId> {
        let key = constant_key(&self.base, &self.prisms[n], n, x);
        (0..self.set.count(n)).find(|&c| flatten(&self.cells[n][c]) == key)
    }

    fn lookups(&self) -> Vec<HashMap<Vec<CellId>, CellId>> {
        self.cells
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, t)| (flatten(t), i)).collect())
            .collect()
    }
}

fn constant_key(x: &SimplicialSet, p: &Prism, n: usize, c: CellId) -> Vec<CellId> {
    let mut key = Vec::new();
    for level in 0..=p.top() {
        for pc in 0..p.set.count(level) {
            let (_, b) = p.coords(level, pc);
            key.push(x.operate(n, c, b));
        }
    }
    key
}

fn flatten(tables: &[Vec<CellId>]) -> Vec<CellId> {
    tables.iter().flatten().copied().collect()
}

fn shift_up(b: &[usize], i: usize) -> Vec<usize> {
    b.iter().map(|&v| if v >= i { v + 1 } else { v }).collect()
}

fn shift_down(b: &[usize], i: usize) -> Vec<usize> {
    b.iter().map(|&v| if v > i { v - 1 } else { v }).collect()
}

pub fn cylinder(x: &Arc<SimplicialSet>, k: usize, depth: usize) -> Result<Cylinder> {
    if k + depth > x.top() {
        return Err(Error::DepthExceedsTruncation {
            depth,
            truncation: x.top(),
        });
    }
    let top = k + depth;
    let prisms: Vec<Prism> = (0..=depth).map(|n| Prism::new(k, n, top)).collect::<Result<_>>()?;
    let cells: Vec<Vec<Vec<Vec<CellId>>>> = prisms
        .iter()
        .map(|p| collect_maps(&p.set, x, top, Constraints::default(), None))
        .collect();
    let lookups: Vec<HashMap<Vec<CellId>, CellId>> = cells
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, t)| (flatten(t), i)).collect())
        .collect();
    let counts: Vec<usize> = cells.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); depth + 1];
    let mut degens = vec![Vec::new(); depth + 1];
    for n in 0..=depth {
        for u in &cells[n] {
            if n > 0 {
                let (from, to) = (&prisms[n], &prisms[n - 1]);
                for i in 0..=n {
                    let key = precompose(u, from, to, |b| shift_up(b, i));
                    faces[n].push(lookups[n - 1][&key]);
                }
            }
            if n < depth {
                let (from, to) = (&prisms[n], &prisms[n + 1]);
                for i in 0..=n {
                    let key = precompose(u, from, to, |b| shift_down(b, i));
                    degens[n].push(lookups[n + 1][&key]);
                }
            }
        }
    }
    let set = Arc::new(SimplicialSet::from_flat(depth, counts, faces, degens)?);
    Ok(Cylinder {
        k,
        depth,
        base: x.clone(),
        set,
        prisms,
        cells,
    })
}

/// Flattened tables of `u ∘ (id × θ)` where `u` lives on `from` and the
/// result on `to`; `theta` acts on the second coordinate.
fn precompose(
    u: &[Vec<CellId>],
    from: &Prism,
    to: &Prism,
    theta: impl Fn(&[usize]) -> Vec<usize>,
) -> Vec<CellId> {
    let mut key = Vec::new();
    for level in 0..=to.top() {
        for c in 0..to.set.count(level) {
            let (a, b) = to.coords(level, c);
            key.push(u[level][from.cell(a, &theta(b))]);
        }
    }
    key
}

/// Transformations `h: X → Y^[1]` from `f` to `g`, computed on `X`
/// truncated at `depth = min(X.N, Y.N − 1)`.
#[derive(Clone, Debug)]
pub struct Transformations {
    pub cylinder: Cylinder,
    pub maps: Vec<SimplicialMap>,
    pub depth: usize,
    /// True when `depth < X.N`, so higher levels of `X` were not checked.
    pub partial: bool,
}

pub fn find_natural_transformations(f: &SimplicialMap, g: &SimplicialMap) -> Result<Transformations> {
    if !same_set(f.source(), g.source()) || !same_set(f.target(), g.target()) {
        return Err(Error::TargetMismatch);
    }
    let (x, y) = (f.source(), f.target());
    if y.top() < 2 {
        return Err(Error::DepthExceedsTruncation {
            depth: 1,
            truncation: y.top(),
        });
    }
    let depth = x.top().min(y.top() - 1);
    let cyl = cylinder(y, 1, depth)?;
    let d1 = cyl.end_map(0)?;
    let d0 = cyl.end_map(1)?;
    let source = Arc::new(x.truncate(depth)?);
    let allow = |n: usize, c: CellId, v: CellId| {
        d1.apply(n, v) == f.apply(n, c) && d0.apply(n, v) == g.apply(n, c)
    };
    let cons = Constraints {
        allow: Some(&allow),
        ..Constraints::default()
    };
    let maps = collect_maps(&source, &cyl.set, depth, cons, None)
        .into_iter()
        .map(|t| SimplicialMap::trusted(source.clone(), cyl.set.clone(), t))
        .collect();
    Ok(Transformations {
        partial: depth < x.top(),
        cylinder: cyl,
        maps,
        depth,
    })
}
