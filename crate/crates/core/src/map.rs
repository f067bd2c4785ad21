use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplicial::{CellId, SimplicialSet};

/// Whether a map commutes with degeneracies as well as faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Full,
    FaceOnly,
}

/// A level-wise map `source → target` on levels `0..=min(N_source, N_target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    tables: Vec<Vec<CellId>>,
    kind: MapKind,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        tables: Vec<Vec<CellId>>,
        kind: MapKind,
    ) -> Result<Self> {
        let map = Self {
            source,
            target,
            tables,
            kind,
        };
        map.check()?;
        Ok(map)
    }

    /// Skips validation; for tables produced by the search engine.
    pub(crate) fn trusted(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        tables: Vec<Vec<CellId>>,
    ) -> Self {
        debug_assert_eq!(tables.len(), source.top().min(target.top()) + 1);
        Self {
            source,
            target,
            tables,
            kind: MapKind::Full,
        }
    }

    pub fn identity(x: Arc<SimplicialSet>) -> Self {
        let tables = (0..=x.top()).map(|n| (0..x.count(n)).collect()).collect();
        Self {
            source: x.clone(),
            target: x,
            tables,
            kind: MapKind::Full,
        }
    }

    /// The constant map onto a vertex.
    pub fn constant(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, v: CellId) -> Result<Self> {
        let top = source.top().min(target.top());
        let tables = (0..=top)
            .map(|n| vec![target.degenerate_on(v, n); source.count(n)])
            .collect();
        Self::new(source, target, tables, MapKind::Full)
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    /// Highest level on which the map is defined.
    pub fn top(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn apply(&self, n: usize, x: CellId) -> CellId {
        self.tables[n][x]
    }

    pub fn table(&self, n: usize) -> &[CellId] {
        &self.tables[n]
    }

    pub fn tables(&self) -> &[Vec<CellId>] {
        &self.tables
    }

    /// `other ∘ self`. When the middle set is truncated lower than both
    /// ends, the source of the composite is truncated to match.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if !same_set(&self.target, &other.source) {
            return Err(Error::TargetMismatch);
        }
        let top = self.top().min(other.top());
        let source = if top < self.source.top().min(other.target.top()) {
            Arc::new(self.source.truncate(top)?)
        } else {
            self.source.clone()
        };
        let tables = (0..=top)
            .map(|n| self.tables[n].iter().map(|&x| other.tables[n][x]).collect())
            .collect();
        let kind = if self.kind == MapKind::Full && other.kind == MapKind::Full {
            MapKind::Full
        } else {
            MapKind::FaceOnly
        };
        Ok(SimplicialMap {
            source,
            target: other.target.clone(),
            tables,
            kind,
        })
    }

    /// The same map restricted to levels `0..=n` of a truncated source.
    pub fn restrict_to(&self, source: Arc<SimplicialSet>) -> Result<SimplicialMap> {
        let n = source.top();
        if n > self.top() || source.counts() != &self.source.counts()[..=n] {
            return Err(Error::TruncationMismatch("restriction source".into()));
        }
        Self::new(source, self.target.clone(), self.tables[..=n].to_vec(), self.kind)
    }

    /// Source and target both truncated at `top`.
    pub fn truncate(&self, top: usize) -> Result<SimplicialMap> {
        if top > self.top() {
            return Err(Error::TruncationMismatch(format!("{top} is above the map's top {}", self.top())));
        }
        Self::new(
            Arc::new(self.source.truncate(top)?),
            Arc::new(self.target.truncate(top)?),
            self.tables[..=top].to_vec(),
            self.kind,
        )
    }

    pub fn is_bijective(&self) -> bool {
        (0..=self.top()).all(|n| {
            self.source.count(n) == self.target.count(n) && {
                let mut seen = vec![false; self.target.count(n)];
                self.tables[n].iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            }
        })
    }

    fn check(&self) -> Result<()> {
        let top = self.source.top().min(self.target.top());
        if self.tables.len() != top + 1 {
            return Err(Error::MissingTableEntry(format!("map needs {} levels", top + 1)));
        }
        let bad = |level, cell, detail: String| Err(Error::InvalidMap { level, cell, detail });
        for n in 0..=top {
            if self.tables[n].len() != self.source.count(n) {
                return Err(Error::MissingTableEntry(format!("map table at level {n}")));
            }
            for (x, &y) in self.tables[n].iter().enumerate() {
                if y >= self.target.count(n) {
                    return bad(n, x, format!("image {y} out of range"));
                }
                if n > 0 {
                    for i in 0..=n {
                        if self.tables[n - 1][self.source.face(n, i, x)] != self.target.face(n, i, y) {
                            return bad(n, x, format!("does not commute with d{i}"));
                        }
                    }
                }
                if n < top && self.kind == MapKind::Full {
                    for i in 0..=n {
                        if self.tables[n + 1][self.source.degen(n, i, x)] != self.target.degen(n, i, y) {
                            return bad(n, x, format!("does not commute with s{i}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn same_set(a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `A ×_C B` with its projections, truncated where both maps are defined.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub set: Arc<SimplicialSet>,
    pub left: SimplicialMap,
    pub right: SimplicialMap,
    index: Vec<HashMap<(CellId, CellId), CellId>>,
}

impl FiberProduct {
    pub fn cell_of(&self, n: usize, a: CellId, b: CellId) -> Option<CellId> {
        self.index.get(n)?.get(&(a, b)).copied()
    }
}

pub fn fiber_product(f: &SimplicialMap, g: &SimplicialMap) -> Result<FiberProduct> {
    if !same_set(&f.target, &g.target) {
        return Err(Error::TargetMismatch);
    }
    let top = f.top().min(g.top());
    let (a, b) = (&f.source, &g.source);
    let mut pairs: Vec<Vec<(CellId, CellId)>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut over: HashMap<CellId, Vec<CellId>> = HashMap::new();
        for (y, &c) in g.tables[n].iter().enumerate() {
            over.entry(c).or_default().push(y);
        }
        let mut level = Vec::new();
        for (x, &c) in f.tables[n].iter().enumerate() {
            if let Some(ys) = over.get(&c) {
                level.extend(ys.iter().map(|&y| (x, y)));
            }
        }
        pairs.push(level);
    }
    let index: Vec<HashMap<(CellId, CellId), CellId>> = pairs
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &p)| (p, i)).collect())
        .collect();
    let counts = pairs.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    for n in 0..=top {
        for &(x, y) in &pairs[n] {
            if n > 0 {
                for i in 0..=n {
                    faces[n].push(index[n - 1][&(a.face(n, i, x), b.face(n, i, y))]);
                }
            }
            if n < top {
                for i in 0..=n {
                    degens[n].push(index[n + 1][&(a.degen(n, i, x), b.degen(n, i, y))]);
                }
            }
        }
    }
    let set = Arc::new(SimplicialSet::from_flat(top, counts, faces, degens)?);
    let left = SimplicialMap::trusted(
        set.clone(),
        a.clone(),
        pairs.iter().map(|l| l.iter().map(|p| p.0).collect()).collect(),
    );
    let right = SimplicialMap::trusted(
        set.clone(),
        b.clone(),
        pairs.iter().map(|l| l.iter().map(|p| p.1).collect()).collect(),
    );
    Ok(FiberProduct {
        set,
        left,
        right,
        index,
    })
}
