//! Finite simplicial sets truncated at a level `N`.
//!
//! Cells at each level are the integers `0..count(n)`. Face and degeneracy
//! maps are stored cell-major: the faces of `x ∈ X_n` occupy one contiguous
//! slice of length `n + 1`, which doubles as the boundary tuple of `x`.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type CellId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    top: usize,
    counts: Vec<usize>,
    faces: Vec<Vec<CellId>>,
    degens: Vec<Vec<CellId>>,
    labels: Vec<Vec<String>>,
}

impl SimplicialSet {
    /// Builds a set from per-operator tables: `face_tables[n][i][x] = d_i x`
    /// for `1 ≤ n ≤ top`, and `degen_tables[n][i][x] = s_i x` for `n < top`.
    /// Missing outer entries (for example `face_tables[0]`) may be empty.
    pub fn build(
        top: usize,
        counts: Vec<usize>,
        face_tables: Vec<Vec<Vec<CellId>>>,
        degen_tables: Vec<Vec<Vec<CellId>>>,
    ) -> Result<Self> {
        if counts.len() != top + 1 {
            return Err(Error::MissingTableEntry(format!(
                "expected {} levels of cells, got {}",
                top + 1,
                counts.len()
            )));
        }
        let mut faces = vec![Vec::new(); top + 1];
        let mut degens = vec![Vec::new(); top + 1];
        for n in 1..=top {
            let tables = face_tables.get(n).ok_or_else(|| {
                Error::MissingTableEntry(format!("face tables for level {n}"))
            })?;
            faces[n] = interleave(tables, n + 1, counts[n], "face", n)?;
        }
        for n in 0..top {
            let tables = degen_tables.get(n).ok_or_else(|| {
                Error::MissingTableEntry(format!("degeneracy tables for level {n}"))
            })?;
            degens[n] = interleave(tables, n + 1, counts[n], "degeneracy", n)?;
        }
        Self::from_flat(top, counts, faces, degens)
    }

    /// Builds a set from cell-major tables: `faces[n][x * (n+1) + i] = d_i x`
    /// and `degens[n][x * (n+1) + i] = s_i x`.
    pub fn from_flat(
        top: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<CellId>>,
        degens: Vec<Vec<CellId>>,
    ) -> Result<Self> {
        let set = Self {
            top,
            labels: vec![Vec::new(); counts.len()],
            counts,
            faces,
            degens,
        };
        set.validate()?;
        Ok(set)
    }

    /// Attaches labels; each level gets either no labels or one per cell.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.top + 1 {
            return Err(Error::MissingTableEntry("labels per level".into()));
        }
        for (n, l) in labels.iter().enumerate() {
            if !l.is_empty() && l.len() != self.counts[n] {
                return Err(Error::MissingTableEntry(format!("labels at level {n}")));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = vec![Vec::new(); self.top + 1];
        self
    }

    /// The one-cell-per-level set.
    pub fn point(top: usize) -> Self {
        let counts = vec![1; top + 1];
        let faces = (0..=top).map(|n| if n == 0 { vec![] } else { vec![0; n + 1] }).collect();
        let degens = (0..=top).map(|n| if n == top { vec![] } else { vec![0; n + 1] }).collect();
        Self::from_flat(top, counts, faces, degens).expect("point is simplicial")
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn face(&self, n: usize, i: usize, x: CellId) -> CellId {
        self.faces[n][x * (n + 1) + i]
    }

    /// `(d_0 x, …, d_n x)`.
    pub fn faces_of(&self, n: usize, x: CellId) -> &[CellId] {
        &self.faces[n][x * (n + 1)..(x + 1) * (n + 1)]
    }

    pub fn degen(&self, n: usize, i: usize, x: CellId) -> CellId {
        self.degens[n][x * (n + 1) + i]
    }

    pub fn label(&self, n: usize, x: CellId) -> Option<&str> {
        self.labels[n].get(x).map(String::as_str)
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub(crate) fn flat_faces(&self, n: usize) -> &[CellId] {
        &self.faces[n]
    }

    /// Returns `(i, y)` with `x = s_i y`, testing `x = s_i(d_{i+1} x)`.
    pub fn is_degenerate(&self, n: usize, x: CellId) -> Option<(usize, CellId)> {
        if n == 0 {
            return None;
        }
        (0..n).find_map(|i| {
            let y = self.face(n, i + 1, x);
            (self.degen(n - 1, i, y) == x).then_some((i, y))
        })
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<CellId> {
        (0..self.counts[n])
            .filter(|&x| self.is_degenerate(n, x).is_none())
            .collect()
    }

    /// Number of nondegenerate cells per level.
    pub fn census(&self) -> Vec<usize> {
        (0..=self.top).map(|n| self.nondegenerate(n).len()).collect()
    }

    /// Applies the operator of a monotone sequence `seq: [m] → [n]`, giving
    /// the `m`-cell `X(seq)(x)`.
    pub fn apply_operator(&self, n: usize, x: CellId, seq: &[usize]) -> Result<CellId> {
        if seq.is_empty() || seq.len() - 1 > self.top || n > self.top || x >= self.counts[n] {
            return Err(Error::InvalidIndex(format!("operator {seq:?} on level {n}")));
        }
        if seq.windows(2).any(|w| w[0] > w[1]) || seq.iter().any(|&v| v > n) {
            return Err(Error::InvalidIndex(format!("{seq:?} is not monotone into [{n}]")));
        }
        Ok(self.operate(n, x, seq))
    }

    /// Unchecked form of [`Self::apply_operator`].
    pub(crate) fn operate(&self, n: usize, x: CellId, seq: &[usize]) -> CellId {
        // Restrict to the image (faces, largest index first), then repeat
        // vertices (degeneracies, left to right).
        let mut cell = x;
        let mut level = n;
        for v in (0..=n).rev() {
            if !seq.contains(&v) {
                cell = self.face(level, v, cell);
                level -= 1;
            }
        }
        for p in 0..seq.len() - 1 {
            if seq[p] == seq[p + 1] {
                cell = self.degen(level, p, cell);
                level += 1;
            }
        }
        cell
    }

    pub fn vertex(&self, n: usize, x: CellId, v: usize) -> CellId {
        self.operate(n, x, &[v])
    }

    pub fn edge(&self, n: usize, x: CellId, a: usize, b: usize) -> CellId {
        self.operate(n, x, &[a, b])
    }

    /// `s_0 … s_0 v`, the totally degenerate `n`-cell on a vertex.
    pub fn degenerate_on(&self, v: CellId, n: usize) -> CellId {
        (0..n).fold(v, |c, k| self.degen(k, 0, c))
    }

    /// Levels `0..=n` only.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.top {
            return Err(Error::TruncationMismatch(format!(
                "cannot truncate level {} set at {n}",
                self.top
            )));
        }
        let mut degens = self.degens[..=n].to_vec();
        degens[n].clear();
        Ok(Self {
            top: n,
            counts: self.counts[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            degens,
            labels: self.labels[..=n].to_vec(),
        })
    }

    fn validate(&self) -> Result<()> {
        let top = self.top;
        if self.counts.len() != top + 1 || self.faces.len() != top + 1 || self.degens.len() != top + 1
        {
            return Err(Error::MissingTableEntry(format!("expected {} levels", top + 1)));
        }
        for n in 0..=top {
            let fl = if n == 0 { 0 } else { self.counts[n] * (n + 1) };
            if self.faces[n].len() != fl {
                return Err(Error::MissingTableEntry(format!("face tables at level {n}")));
            }
            let dl = if n == top { 0 } else { self.counts[n] * (n + 1) };
            if self.degens[n].len() != dl {
                return Err(Error::MissingTableEntry(format!("degeneracy tables at level {n}")));
            }
            if n > 0 {
                if let Some(&bad) = self.faces[n].iter().find(|&&y| y >= self.counts[n - 1]) {
                    return Err(Error::InvalidIndex(format!(
                        "face at level {n} points to missing cell {bad}"
                    )));
                }
            }
            if n < top {
                if let Some(&bad) = self.degens[n].iter().find(|&&y| y >= self.counts[n + 1]) {
                    return Err(Error::InvalidIndex(format!(
                        "degeneracy at level {n} points to missing cell {bad}"
                    )));
                }
            }
        }
        let violation = |level, identity: String, simplex| {
            Err(Error::IdentityViolation {
                level,
                identity,
                simplex,
            })
        };
        for n in 2..=top {
            for x in 0..self.counts[n] {
                for j in 1..=n {
                    for i in 0..j {
                        let l = self.face(n - 1, i, self.face(n, j, x));
                        let r = self.face(n - 1, j - 1, self.face(n, i, x));
                        if l != r {
                            return violation(n, format!("d{i}d{j} = d{}d{i}", j - 1), x);
                        }
                    }
                }
            }
        }
        for n in 0..top {
            for x in 0..self.counts[n] {
                for j in 0..=n {
                    let y = self.degen(n, j, x);
                    for i in 0..=n + 1 {
                        let l = self.face(n + 1, i, y);
                        let (r, name) = if i < j {
                            (
                                self.degen(n - 1, j - 1, self.face(n, i, x)),
                                format!("d{i}s{j} = s{}d{i}", j - 1),
                            )
                        } else if i == j || i == j + 1 {
                            (x, format!("d{i}s{j} = id"))
                        } else {
                            (
                                self.degen(n - 1, j, self.face(n, i - 1, x)),
                                format!("d{i}s{j} = s{j}d{}", i - 1),
                            )
                        };
                        if l != r {
                            return violation(n, name, x);
                        }
                    }
                }
                if n + 2 <= top {
                    for j in 0..=n {
                        for i in 0..=j {
                            let l = self.degen(n + 1, i, self.degen(n, j, x));
                            let r = self.degen(n + 1, j + 1, self.degen(n, i, x));
                            if l != r {
                                return violation(n, format!("s{i}s{j} = s{}s{i}", j + 1), x);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn interleave(
    tables: &[Vec<CellId>],
    arity: usize,
    count: usize,
    what: &str,
    n: usize,
) -> Result<Vec<CellId>> {
    if tables.len() != arity || tables.iter().any(|t| t.len() != count) {
        return Err(Error::MissingTableEntry(format!("{what} tables at level {n}")));
    }
    let mut flat = Vec::with_capacity(arity * count);
    for x in 0..count {
        flat.extend(tables.iter().map(|t| t[x]));
    }
    Ok(flat)
}

/// Which subcomplex of `Δ[m]` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Simplex,
    Boundary,
    Horn { j: usize },
}

/// `Δ[m]`, `∂Δ[m]` or `Λ[m,j]`, with the monotone sequence of every cell.
#[derive(Clone, Debug)]
pub struct Standard {
    pub m: usize,
    pub kind: StandardKind,
    pub set: SimplicialSet,
    seqs: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, CellId>>,
}

impl Standard {
    pub fn seq(&self, n: usize, x: CellId) -> &[usize] {
        &self.seqs[n][x]
    }

    pub fn id_of(&self, seq: &[usize]) -> Option<CellId> {
        self.index.get(seq.len().checked_sub(1)?)?.get(seq).copied()
    }
}

pub fn standard_complex(kind: StandardKind, m: usize, top: usize) -> Result<Standard> {
    if let StandardKind::Horn { j } = kind {
        if j > m {
            return Err(Error::InvalidIndex(format!("horn index {j} exceeds {m}")));
        }
    }
    if top < m {
        return Err(Error::InvalidIndex(format!("truncation {top} below dimension {m}")));
    }
    let keep = |seq: &[usize]| {
        let mut hit = vec![false; m + 1];
        for &v in seq {
            hit[v] = true;
        }
        match kind {
            StandardKind::Simplex => true,
            StandardKind::Boundary => hit.iter().any(|h| !h),
            StandardKind::Horn { j } => (0..=m).any(|v| v != j && !hit[v]),
        }
    };
    let mut seqs: Vec<Vec<Vec<usize>>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut level = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        monotone(&mut cur, n + 1, 0, m, &mut level);
        level.retain(|s| keep(s));
        seqs.push(level);
    }
    let index: Vec<HashMap<Vec<usize>, CellId>> = seqs
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let counts = seqs.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    for n in 0..=top {
        for s in &seqs[n] {
            if n > 0 {
                for i in 0..=n {
                    let mut t = s.clone();
                    t.remove(i);
                    faces[n].push(index[n - 1][&t]);
                }
            }
            if n < top {
                for i in 0..=n {
                    let mut t = s.clone();
                    t.insert(i, s[i]);
                    degens[n].push(index[n + 1][&t]);
                }
            }
        }
    }
    let labels = seqs
        .iter()
        .map(|level| level.iter().map(|s| seq_label(s, m)).collect())
        .collect();
    let set = SimplicialSet::from_flat(top, counts, faces, degens)?.with_labels(labels)?;
    Ok(Standard {
        m,
        kind,
        set,
        seqs,
        index,
    })
}

fn monotone(cur: &mut Vec<usize>, len: usize, lo: usize, hi: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for v in lo..=hi {
        cur.push(v);
        monotone(cur, len, v, hi, out);
        cur.pop();
    }
}

fn seq_label(seq: &[usize], m: usize) -> String {
    let parts: Vec<String> = seq.iter().map(usize::to_string).collect();
    if m < 10 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

/// Level-wise product; cell `(a, b)` at level `n` has id `a * |B_n| + b`.
pub fn product(a: &SimplicialSet, b: &SimplicialSet) -> Result<SimplicialSet> {
    if a.top != b.top {
        return Err(Error::TruncationMismatch(format!(
            "product of levels {} and {}",
            a.top, b.top
        )));
    }
    let top = a.top;
    let counts: Vec<usize> = (0..=top).map(|n| a.counts[n] * b.counts[n]).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    for n in 0..=top {
        let (ca, cb) = (a.counts[n], b.counts[n]);
        if n > 0 {
            let nb = b.counts[n - 1];
            let f = &mut faces[n];
            f.reserve(ca * cb * (n + 1));
            for x in 0..ca {
                let fx = a.faces_of(n, x);
                for y in 0..cb {
                    let fy = b.faces_of(n, y);
                    f.extend(fx.iter().zip(fy).map(|(&p, &q)| p * nb + q));
                }
            }
        }
        if n < top {
            let nb = b.counts[n + 1];
            let d = &mut degens[n];
            d.reserve(ca * cb * (n + 1));
            for x in 0..ca {
                let dx = &a.degens[n][x * (n + 1)..(x + 1) * (n + 1)];
                for y in 0..cb {
                    let dy = &b.degens[n][y * (n + 1)..(y + 1) * (n + 1)];
                    d.extend(dx.iter().zip(dy).map(|(&p, &q)| p * nb + q));
                }
            }
        }
    }
    let mut set = SimplicialSet::from_flat(top, counts, faces, degens)?;
    let mut labels = vec![Vec::new(); top + 1];
    for n in 0..=top {
        if !a.labels[n].is_empty() && !b.labels[n].is_empty() {
            for la in &a.labels[n] {
                for lb in &b.labels[n] {
                    labels[n].push(format!("({la},{lb})"));
                }
            }
        }
    }
    set.labels = labels;
    Ok(set)
}

/// `sk_n(X)`: levels up to `n`, and above that only iterated degeneracies.
pub fn skeleton(x: &SimplicialSet, n: usize) -> Result<SimplicialSet> {
    if n > x.top {
        return Err(Error::InvalidIndex(format!("skeleton {n} above truncation {}", x.top)));
    }
    // keep[m][c] = new id of c, for cells kept at level m.
    let mut keep: Vec<Vec<Option<CellId>>> = Vec::with_capacity(x.top + 1);
    for m in 0..=x.top {
        if m <= n {
            keep.push((0..x.counts[m]).map(Some).collect());
        } else {
            let mut hit = vec![false; x.counts[m]];
            for c in 0..x.counts[m - 1] {
                if keep[m - 1][c].is_some() {
                    for i in 0..m {
                        hit[x.degen(m - 1, i, c)] = true;
                    }
                }
            }
            let mut next = 0;
            keep.push(
                hit.into_iter()
                    .map(|h| {
                        h.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect(),
            );
        }
    }
    let mut counts = Vec::new();
    let mut faces = vec![Vec::new(); x.top + 1];
    let mut degens = vec![Vec::new(); x.top + 1];
    let mut labels = vec![Vec::new(); x.top + 1];
    for m in 0..=x.top {
        let kept: Vec<CellId> = (0..x.counts[m]).filter(|&c| keep[m][c].is_some()).collect();
        counts.push(kept.len());
        for &c in &kept {
            if m > 0 {
                for &f in x.faces_of(m, c) {
                    faces[m].push(keep[m - 1][f].ok_or_else(|| {
                        Error::Internal("skeleton not closed under faces".into())
                    })?);
                }
            }
            if m < x.top {
                for i in 0..=m {
                    let d = x.degen(m, i, c);
                    degens[m].push(keep[m + 1][d].ok_or_else(|| {
                        Error::Internal("skeleton not closed under degeneracies".into())
                    })?);
                }
            }
            if !x.labels[m].is_empty() {
                labels[m].push(x.labels[m][c].clone());
            }
        }
    }
    SimplicialSet::from_flat(x.top, counts, faces, degens)?.with_labels(labels)
}
