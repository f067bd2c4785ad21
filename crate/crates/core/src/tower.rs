//! Level-by-level construction of truncated sets whose upper levels are
//! lists of boundary tuples, with degeneracies read off the identities.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::search::{compatible_tuples, FaceIndex};
use crate::simplicial::{CellId, SimplicialSet};

pub(crate) struct Tower {
    counts: Vec<usize>,
    faces: Vec<Vec<CellId>>,
    degens: Vec<Vec<CellId>>,
    index: Vec<Option<HashMap<Vec<CellId>, CellId>>>,
}

impl Tower {
    pub fn new(vertices: usize) -> Self {
        Self {
            counts: vec![vertices],
            faces: vec![Vec::new()],
            degens: vec![Vec::new()],
            index: vec![None],
        }
    }

    pub fn top(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn face(&self, n: usize, i: usize, x: CellId) -> CellId {
        self.faces[n][x * (n + 1) + i]
    }

    pub fn degen(&self, n: usize, i: usize, x: CellId) -> CellId {
        self.degens[n][x * (n + 1) + i]
    }

    /// Appends a level from cell-major face tables.
    pub fn push_level(&mut self, count: usize, faces: Vec<CellId>) {
        self.counts.push(count);
        self.faces.push(faces);
        self.degens.push(Vec::new());
        self.index.push(None);
    }

    /// Appends a level whose cells are the given distinct boundary tuples.
    pub fn push_tuples(&mut self, tuples: Vec<Vec<CellId>>) {
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let count = tuples.len();
        self.push_level(count, tuples.concat());
        *self.index.last_mut().expect("level") = Some(index);
    }

    pub fn lookup(&self, n: usize, boundary: &[CellId]) -> Option<CellId> {
        self.index[n].as_ref()?.get(boundary).copied()
    }

    pub fn set_degens(&mut self, n: usize, flat: Vec<CellId>) {
        self.degens[n] = flat;
    }

    /// The boundary of `s_j x` for `x` at level `n`, which the identities
    /// determine once the degeneracies below level `n` are known.
    pub fn degenerate_boundary(&self, n: usize, j: usize, x: CellId) -> Vec<CellId> {
        (0..=n + 1)
            .map(|i| {
                if i < j {
                    self.degen(n - 1, j - 1, self.face(n, i, x))
                } else if i == j || i == j + 1 {
                    x
                } else {
                    self.degen(n - 1, j, self.face(n, i - 1, x))
                }
            })
            .collect()
    }

    /// Fills the degeneracies out of level `n` by boundary lookup in the
    /// indexed level `n + 1`.
    pub fn derive_degens(&mut self, n: usize) -> Result<()> {
        let mut flat = Vec::with_capacity(self.counts[n] * (n + 1));
        for x in 0..self.counts[n] {
            for j in 0..=n {
                let b = self.degenerate_boundary(n, j, x);
                let y = self.lookup(n + 1, &b).ok_or_else(|| {
                    Error::CoherenceFailure(format!(
                        "s{j} of cell {x} at level {n} has boundary {b:?}, which is not a cell"
                    ))
                })?;
                flat.push(y);
            }
        }
        self.degens[n] = flat;
        Ok(())
    }

    /// The levels built so far, as a set with no degeneracies out of the top.
    pub fn snapshot(&self) -> Result<SimplicialSet> {
        let mut degens = self.degens.clone();
        degens.last_mut().expect("level").clear();
        SimplicialSet::from_flat(self.top(), self.counts.clone(), self.faces.clone(), degens)
    }

    /// All compatible `(n+2)`-tuples of top cells accepted by `keep`.
    pub fn boundary_candidates(&self, keep: impl Fn(&[CellId]) -> bool) -> Result<Vec<Vec<CellId>>> {
        let x = self.snapshot()?;
        let level = self.top();
        let positions: Vec<usize> = (0..=level + 1).collect();
        let index = FaceIndex::new(&x, level);
        let mut out = Vec::new();
        compatible_tuples(&x, level, &positions, None, Some(&index), &mut |t| {
            if keep(t) {
                out.push(t.to_vec());
            }
        });
        Ok(out)
    }

    pub fn finish(self) -> Result<SimplicialSet> {
        let top = self.top();
        SimplicialSet::from_flat(top, self.counts, self.faces, self.degens)
    }
}
