//! Finite groupoids and their correspondence with 1-groupoids.
//!
//! Composition is written left to right: `comp(a, b)` is defined when
//! `tgt(a) = src(b)` and goes from `src(a)` to `tgt(b)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::horn_restriction;
use crate::iso::find_isomorphism_with;
use crate::kan::classify_n_groupoid;
use crate::map::{MapKind, SimplicialMap};
use crate::report::Verdict;
use crate::simplicial::{CellId, SimplicialSet};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    comp: Vec<usize>,
    inv: Vec<usize>,
    unit: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds from full tables. `comp` is dense, `arrows × arrows`, with
    /// `usize::MAX` on non-composable pairs.
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: Vec<usize>,
        inv: Vec<usize>,
        unit: Vec<usize>,
    ) -> Result<Self> {
        let g = Self {
            objects,
            arrows,
            src,
            tgt,
            comp,
            inv,
            unit,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds from source/target and a composition function; units and
    /// inverses are found by search.
    pub fn from_compose(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = src.len();
        if tgt.len() != n {
            return Err(Error::InvalidGroupoid("source and target tables differ in length".into()));
        }
        let mut comp = vec![NONE; n * n];
        for a in 0..n {
            for b in 0..n {
                if tgt[a] == src[b] {
                    comp[a * n + b] = compose(a, b);
                }
            }
        }
        let unit = (0..objects)
            .map(|x| {
                (0..n)
                    .find(|&u| src[u] == x && tgt[u] == x && comp[u * n + u] == u)
                    .ok_or_else(|| Error::InvalidGroupoid(format!("object {x} has no unit")))
            })
            .collect::<Result<Vec<_>>>()?;
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| src[b] == tgt[a] && tgt[b] == src[a] && comp[a * n + b] == unit[src[a]])
                    .ok_or_else(|| Error::InvalidGroupoid(format!("arrow {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_tables(
            (0..objects).map(|x| x.to_string()).collect(),
            (0..n).map(|a| a.to_string()).collect(),
            src,
            tgt,
            comp,
            inv,
            unit,
        )
    }

    pub fn with_names(mut self, objects: Vec<String>, arrows: Vec<String>) -> Result<Self> {
        if objects.len() != self.objects.len() || arrows.len() != self.arrows.len() {
            return Err(Error::InvalidGroupoid("name count".into()));
        }
        self.objects = objects;
        self.arrows = arrows;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let (no, na) = (self.objects.len(), self.arrows.len());
        let bad = |s: String| Err(Error::InvalidGroupoid(s));
        if self.src.len() != na || self.tgt.len() != na || self.inv.len() != na {
            return bad("arrow tables have the wrong length".into());
        }
        if self.unit.len() != no || self.comp.len() != na * na {
            return bad("unit or composition table has the wrong length".into());
        }
        if self.src.iter().chain(&self.tgt).any(|&x| x >= no)
            || self.inv.iter().chain(&self.unit).any(|&a| a >= na)
        {
            return bad("table entry out of range".into());
        }
        for a in 0..na {
            for b in 0..na {
                let c = self.comp[a * na + b];
                if self.tgt[a] == self.src[b] {
                    if c >= na {
                        return bad(format!("composite of {a} and {b} missing"));
                    }
                    if self.src[c] != self.src[a] || self.tgt[c] != self.tgt[b] {
                        return bad(format!("composite of {a} and {b} has wrong ends"));
                    }
                } else if c != NONE {
                    return bad(format!("composite of non-composable {a}, {b}"));
                }
            }
        }
        for a in 0..na {
            for b in 0..na {
                if self.tgt[a] != self.src[b] {
                    continue;
                }
                let ab = self.comp[a * na + b];
                for c in 0..na {
                    if self.tgt[b] == self.src[c]
                        && self.comp[ab * na + c] != self.comp[a * na + self.comp[b * na + c]]
                    {
                        return bad(format!("composition not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        for (x, &u) in self.unit.iter().enumerate() {
            if self.src[u] != x || self.tgt[u] != x {
                return bad(format!("unit of {x} is not a loop at {x}"));
            }
        }
        for a in 0..na {
            let (s, t) = (self.src[a], self.tgt[a]);
            if self.comp[self.unit[s] * na + a] != a || self.comp[a * na + self.unit[t]] != a {
                return bad(format!("unit law fails at arrow {a}"));
            }
            let i = self.inv[a];
            if self.src[i] != t
                || self.tgt[i] != s
                || self.comp[a * na + i] != self.unit[s]
                || self.comp[i * na + a] != self.unit[t]
            {
                return bad(format!("inverse law fails at arrow {a}"));
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrows[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    /// `a` then `b`; `None` when `tgt(a) ≠ src(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.comp[a * self.arrows.len() + b];
        (c != NONE).then_some(c)
    }

    pub(crate) fn comp(&self, a: usize, b: usize) -> usize {
        self.comp[a * self.arrows.len() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn arrows_between(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.src[a] == x && self.tgt[a] == y)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[self.src[a]] == a
    }

    /// One object whose arrows are the group elements.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        Self::from_compose(1, vec![0; n], vec![0; n], |a, b| g.mul(a, b))
            .and_then(|x| x.with_names(vec!["*".into()], g.names().to_vec()))
            .expect("group as groupoid")
    }

    /// `n` objects and exactly one arrow between any two.
    pub fn pair(n: usize) -> Self {
        let arrows: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        let names = arrows.iter().map(|(x, y)| format!("{x}{y}")).collect();
        Self::from_compose(
            n,
            arrows.iter().map(|a| a.0).collect(),
            arrows.iter().map(|a| a.1).collect(),
            |a, b| arrows[a].0 * n + arrows[b].1,
        )
        .and_then(|g| g.with_names((0..n).map(|x| x.to_string()).collect(), names))
        .expect("pair groupoid")
    }

    /// `n` objects and only unit arrows.
    pub fn discrete(n: usize) -> Self {
        Self::from_compose(n, (0..n).collect(), (0..n).collect(), |a, _| a).expect("discrete groupoid")
    }

    /// `k` objects, with arrows `x → y` indexed by the elements of `g`.
    pub fn transitive(k: usize, g: &FiniteGroup) -> Self {
        let m = g.order();
        let idx = |x: usize, y: usize, e: usize| (x * k + y) * m + e;
        let n = k * k * m;
        let part = |a: usize| (a / (k * m), (a / m) % k, a % m);
        Self::from_compose(
            k,
            (0..n).map(|a| part(a).0).collect(),
            (0..n).map(|a| part(a).1).collect(),
            |a, b| {
                let ((x, _, e), (_, z, f)) = (part(a), part(b));
                idx(x, z, g.mul(e, f))
            },
        )
        .expect("transitive groupoid")
    }

    pub fn disjoint_union(a: &Self, b: &Self) -> Self {
        let (oa, na) = (a.object_count(), a.arrow_count());
        let src = a.src.iter().copied().chain(b.src.iter().map(|&x| x + oa)).collect();
        let tgt = a.tgt.iter().copied().chain(b.tgt.iter().map(|&x| x + oa)).collect();
        Self::from_compose(oa + b.object_count(), src, tgt, |p, q| {
            if p < na {
                a.comp(p, q)
            } else {
                b.comp(p - na, q - na) + na
            }
        })
        .expect("disjoint union")
    }

    /// Relabels objects and arrows: object `x` becomes `objects[x]`, arrow
    /// `a` becomes `arrows[a]`.
    pub fn permuted(&self, objects: &[usize], arrows: &[usize]) -> Result<Self> {
        let (no, na) = (self.object_count(), self.arrow_count());
        let mut inv_a = vec![0; na];
        for (a, &b) in arrows.iter().enumerate() {
            inv_a[b] = a;
        }
        let mut src = vec![0; na];
        let mut tgt = vec![0; na];
        for a in 0..na {
            src[arrows[a]] = objects[self.src[a]];
            tgt[arrows[a]] = objects[self.tgt[a]];
        }
        Self::from_compose(no, src, tgt, |p, q| arrows[self.comp(inv_a[p], inv_a[q])])
    }

    /// Whether `obj`/`arr` tables form a functor `self → other`.
    pub fn check_functor(&self, other: &Self, f: &Functor) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidFunctor(s));
        if f.objects.len() != self.object_count() || f.arrows.len() != self.arrow_count() {
            return bad("table lengths".into());
        }
        if f.objects.iter().any(|&y| y >= other.object_count())
            || f.arrows.iter().any(|&b| b >= other.arrow_count())
        {
            return bad("image out of range".into());
        }
        for a in 0..self.arrow_count() {
            let b = f.arrows[a];
            if other.src(b) != f.objects[self.src(a)] || other.tgt(b) != f.objects[self.tgt(a)] {
                return bad(format!("arrow {a} lands with wrong ends"));
            }
        }
        for x in 0..self.object_count() {
            if f.arrows[self.unit(x)] != other.unit(f.objects[x]) {
                return bad(format!("unit of {x} not preserved"));
            }
        }
        for a in 0..self.arrow_count() {
            for b in 0..self.arrow_count() {
                if let Some(c) = self.compose(a, b) {
                    if other.compose(f.arrows[a], f.arrows[b]) != Some(f.arrows[c]) {
                        return bad(format!("composite of {a} and {b} not preserved"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A strict functor, as object and arrow tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        Self {
            objects: (0..g.object_count()).collect(),
            arrows: (0..g.arrow_count()).collect(),
        }
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Functor) -> Functor {
        Functor {
            objects: self.objects.iter().map(|&x| other.objects[x]).collect(),
            arrows: self.arrows.iter().map(|&a| other.arrows[a]).collect(),
        }
    }
}

/// The nerve with the arrow string of every cell.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub set: Arc<SimplicialSet>,
    strings: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, CellId>>,
}

impl Nerve {
    /// The arrow string of a cell at level `n ≥ 1`; level 0 cells are objects.
    pub fn string(&self, n: usize, c: CellId) -> &[usize] {
        &self.strings[n][c]
    }

    pub fn cell_of(&self, string: &[usize]) -> Option<CellId> {
        self.index.get(string.len())?.get(string).copied()
    }
}

/// Nerve truncated at `top`: level `n` is the strings of `n` composable arrows.
pub fn nerve(g: &FiniteGroupoid, top: usize) -> Nerve {
    let na = g.arrow_count();
    let mut out_of = vec![Vec::new(); g.object_count()];
    for a in 0..na {
        out_of[g.src(a)].push(a);
    }
    let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..g.object_count()).map(|x| vec![x]).collect()];
    if top >= 1 {
        strings.push((0..na).map(|a| vec![a]).collect());
    }
    for _ in 2..=top {
        let prev = strings.last().expect("nonempty");
        let mut next = Vec::new();
        for s in prev {
            for &a in &out_of[g.tgt(*s.last().expect("nonempty string"))] {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        strings.push(next);
    }
    let index: Vec<HashMap<Vec<usize>, CellId>> = strings
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let counts: Vec<usize> = strings.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); top + 1];
    let mut degens = vec![Vec::new(); top + 1];
    for n in 0..=top {
        for s in &strings[n] {
            if n == 1 {
                faces[1].push(g.tgt(s[0]));
                faces[1].push(g.src(s[0]));
            } else if n > 1 {
                for i in 0..=n {
                    let t: Vec<usize> = if i == 0 {
                        s[1..].to_vec()
                    } else if i == n {
                        s[..n - 1].to_vec()
                    } else {
                        let mut t = s[..i - 1].to_vec();
                        t.push(g.comp(s[i - 1], s[i]));
                        t.extend_from_slice(&s[i + 1..]);
                        t
                    };
                    faces[n].push(index[n - 1][&t]);
                }
            }
            if n < top {
                if n == 0 {
                    degens[0].push(g.unit(s[0]));
                } else {
                    for i in 0..=n {
                        let v = if i == 0 { g.src(s[0]) } else { g.tgt(s[i - 1]) };
                        let mut t = s.clone();
                        t.insert(i, g.unit(v));
                        degens[n].push(index[n + 1][&t]);
                    }
                }
            }
        }
    }
    let labels = strings
        .iter()
        .enumerate()
        .map(|(n, l)| {
            l.iter()
                .map(|s| match n {
                    0 => g.object_name(s[0]).to_string(),
                    1 => g.arrow_name(s[0]).to_string(),
                    _ => format!(
                        "({})",
                        s.iter().map(|&a| g.arrow_name(a)).collect::<Vec<_>>().join(",")
                    ),
                })
                .collect()
        })
        .collect();
    let set = SimplicialSet::from_flat(top, counts, faces, degens)
        .and_then(|s| s.with_labels(labels))
        .expect("nerve satisfies the simplicial identities");
    Nerve {
        set: Arc::new(set),
        strings,
        index,
    }
}

/// Reads a groupoid off a 1-groupoid: composition fills `Λ[2,1]`, inverses
/// fill `Λ[2,2]` and `Λ[2,0]` against units.
pub fn to_groupoid(x: &SimplicialSet) -> Result<FiniteGroupoid> {
    if x.top() < 2 {
        return Err(Error::NotA1Groupoid(format!("truncation {} below 2", x.top())));
    }
    let report = classify_n_groupoid(x, 1);
    if report.verdict == Verdict::Fails {
        return Err(Error::NotA1Groupoid(report.summary()));
    }
    let no = x.count(0);
    let na = x.count(1);
    let src: Vec<usize> = (0..na).map(|a| x.face(1, 1, a)).collect();
    let tgt: Vec<usize> = (0..na).map(|a| x.face(1, 0, a)).collect();
    let unit: Vec<usize> = (0..no).map(|v| x.degen(0, 0, v)).collect();
    // Horn tuples list d_i for i ≠ j in increasing i.
    let fill = |j: usize| -> Result<HashMap<Vec<CellId>, CellId>> {
        let hr = horn_restriction(x, 2, j)?;
        let mut m = HashMap::new();
        for (c, &h) in hr.lambda_star.iter().enumerate() {
            m.insert(hr.horns[h].faces.clone(), c);
        }
        Ok(m)
    };
    let (h0, h1, h2) = (fill(0)?, fill(1)?, fill(2)?);
    let mut comp = vec![NONE; na * na];
    for a in 0..na {
        for b in 0..na {
            if tgt[a] == src[b] {
                let c = h1.get(&vec![b, a]).ok_or_else(|| {
                    Error::NotA1Groupoid(format!("arrows {a}, {b} have no composite"))
                })?;
                comp[a * na + b] = x.face(2, 1, *c);
            }
        }
    }
    let mut inv = Vec::with_capacity(na);
    for a in 0..na {
        let left = h2
            .get(&vec![a, unit[tgt[a]]])
            .map(|&c| x.face(2, 2, c))
            .ok_or_else(|| Error::NotA1Groupoid(format!("arrow {a} has no left inverse")))?;
        let right = h0
            .get(&vec![unit[src[a]], a])
            .map(|&c| x.face(2, 0, c))
            .ok_or_else(|| Error::NotA1Groupoid(format!("arrow {a} has no right inverse")))?;
        if left != right {
            return Err(Error::NotA1Groupoid(format!(
                "left and right inverses of arrow {a} differ"
            )));
        }
        inv.push(left);
    }
    let name = |n: usize, c: CellId| x.label(n, c).map(str::to_string).unwrap_or_else(|| c.to_string());
    FiniteGroupoid::from_tables(
        (0..no).map(|v| name(0, v)).collect(),
        (0..na).map(|a| name(1, a)).collect(),
        src,
        tgt,
        comp,
        inv,
        unit,
    )
    .map_err(|e| Error::NotA1Groupoid(e.to_string()))
}

pub fn functor_to_map(
    f: &Functor,
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    top: usize,
) -> Result<SimplicialMap> {
    source.check_functor(target, f)?;
    let ns = nerve(source, top);
    let nt = nerve(target, top);
    functor_between_nerves(f, &ns, &nt)
}

pub(crate) fn functor_between_nerves(f: &Functor, ns: &Nerve, nt: &Nerve) -> Result<SimplicialMap> {
    let top = ns.set.top().min(nt.set.top());
    let mut tables = vec![f.objects.clone()];
    for n in 1..=top {
        tables.push(
            ns.strings[n]
                .iter()
                .map(|s| {
                    let t: Vec<usize> = s.iter().map(|&a| f.arrows[a]).collect();
                    nt.cell_of(&t).expect("image string is composable")
                })
                .collect(),
        );
    }
    SimplicialMap::new(ns.set.clone(), nt.set.clone(), tables, MapKind::Full)
}

pub fn map_to_functor(f: &SimplicialMap) -> Result<Functor> {
    for x in [f.source(), f.target()] {
        let r = classify_n_groupoid(x, 1);
        if r.verdict == Verdict::Fails {
            return Err(Error::NotA1Groupoid(r.summary()));
        }
    }
    Ok(Functor {
        objects: f.table(0).to_vec(),
        arrows: f.table(1).to_vec(),
    })
}

/// Cells of a 1-groupoid indexed by their spine `(x_{01}, …, x_{n-1,n})`.
pub(crate) fn spine_index(x: &SimplicialSet) -> Result<Vec<HashMap<Vec<CellId>, CellId>>> {
    let mut out = vec![HashMap::new()];
    for n in 1..=x.top() {
        let mut m = HashMap::new();
        for c in 0..x.count(n) {
            let spine: Vec<CellId> = (0..n).map(|i| x.edge(n, c, i, i + 1)).collect();
            if m.insert(spine, c).is_some() {
                return Err(Error::NotA1Groupoid(format!(
                    "two {n}-cells share a spine"
                )));
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// The nerve map of a functor `g → to_groupoid(x)`, landing in `x` itself.
pub fn nerve_map_into(
    f: &Functor,
    g: &FiniteGroupoid,
    x: &Arc<SimplicialSet>,
    top: usize,
) -> Result<SimplicialMap> {
    let ng = nerve(g, top.min(x.top()));
    let spines = spine_index(x)?;
    let mut tables = vec![f.objects.clone()];
    for n in 1..=ng.set.top() {
        let mut level = Vec::with_capacity(ng.set.count(n));
        for s in &ng.strings[n] {
            let spine: Vec<CellId> = s.iter().map(|&a| f.arrows[a]).collect();
            level.push(*spines[n].get(&spine).ok_or_else(|| {
                Error::NotA1Groupoid(format!("no {n}-cell with a given spine"))
            })?);
        }
        tables.push(level);
    }
    SimplicialMap::new(ng.set.clone(), x.clone(), tables, MapKind::Full)
}

/// An isomorphism `a → b`, if one exists.
pub fn find_groupoid_isomorphism(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Option<Functor> {
    if a.object_count() != b.object_count() || a.arrow_count() != b.arrow_count() {
        return None;
    }
    let signature = |g: &FiniteGroupoid, x: usize| {
        let out = (0..g.arrow_count()).filter(|&e| g.src(e) == x).count();
        let loops = g.arrows_between(x, x).count();
        (out, loops)
    };
    let sa: Vec<_> = (0..a.object_count()).map(|x| signature(a, x)).collect();
    let sb: Vec<_> = (0..b.object_count()).map(|x| signature(b, x)).collect();
    let na = nerve(a, 2);
    let nb = nerve(b, 2);
    let allow = |n: usize, c: CellId, v: CellId| n != 0 || sa[c] == sb[v];
    let map = find_isomorphism_with(&na.set, &nb.set, Some(&allow))?;
    Some(Functor {
        objects: map.table(0).to_vec(),
        arrows: map.table(1).to_vec(),
    })
}
