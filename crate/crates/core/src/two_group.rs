//! Crossed modules, semi-strict group-like groupoids, their classifying
//! 2-groups, and the calculus of cylinders, transformations and units.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{automorphisms, homomorphisms, is_homomorphism, FiniteGroup};
use crate::groupoid::FiniteGroupoid;
use crate::hom::Prism;
use crate::search::{search_maps, BoundaryIndex, Constraints, SourcePlan};
use crate::simplicial::{CellId, SimplicialSet};
use crate::tower::Tower;

/// `bnd: H → G` with `G` acting on `H` by automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    h: FiniteGroup,
    g: FiniteGroup,
    bnd: Vec<usize>,
    /// `act[g * |H| + h]`.
    act: Vec<usize>,
}

impl CrossedModule {
    pub fn new(h: FiniteGroup, g: FiniteGroup, bnd: Vec<usize>, act: Vec<usize>) -> Result<Self> {
        let xm = Self { h, g, bnd, act };
        xm.validate()?;
        Ok(xm)
    }

    pub fn from_fn(
        h: FiniteGroup,
        g: FiniteGroup,
        bnd: Vec<usize>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let nh = h.order();
        let table = (0..g.order() * nh).map(|i| act(i / nh, i % nh)).collect();
        Self::new(h, g, bnd, table)
    }

    /// `bnd: H → G` with trivial action; requires `G` abelian and `bnd`
    /// a homomorphism, and `H` abelian for the Peiffer identity.
    pub fn with_trivial_action(h: FiniteGroup, g: FiniteGroup, bnd: Vec<usize>) -> Result<Self> {
        Self::from_fn(h, g, bnd, |_, x| x)
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidCrossedModule(s));
        let (h, g) = (&self.h, &self.g);
        if !is_homomorphism(h, g, &self.bnd) {
            return bad("bnd is not a homomorphism".into());
        }
        if self.act.len() != g.order() * h.order() || self.act.iter().any(|&x| x >= h.order()) {
            return bad("act table has the wrong shape".into());
        }
        for a in g.elements() {
            let row = &self.act[a * h.order()..(a + 1) * h.order()];
            if !is_homomorphism(h, h, row) {
                return bad(format!("act({}, ·) is not a homomorphism", g.name(a)));
            }
        }
        for x in h.elements() {
            if self.act(g.identity(), x) != x {
                return bad("the identity does not act trivially".into());
            }
            for a in g.elements() {
                for b in g.elements() {
                    if self.act(g.mul(a, b), x) != self.act(a, self.act(b, x)) {
                        return bad("act is not an action".into());
                    }
                }
                if self.bnd(self.act(a, x)) != g.mul(g.mul(a, self.bnd(x)), g.inv(a)) {
                    return bad(format!("bnd is not equivariant at ({}, {})", g.name(a), h.name(x)));
                }
            }
            for y in h.elements() {
                if self.act(self.bnd(x), y) != h.mul(h.mul(x, y), h.inv(x)) {
                    return bad(format!("Peiffer identity fails at ({}, {})", h.name(x), h.name(y)));
                }
            }
        }
        Ok(())
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn bnd(&self, x: usize) -> usize {
        self.bnd[x]
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.act[a * self.h.order() + x]
    }

    pub fn bnd_table(&self) -> &[usize] {
        &self.bnd
    }

    pub fn act_table(&self) -> &[usize] {
        &self.act
    }

    pub fn is_bnd_injective(&self) -> bool {
        self.h.elements().filter(|&x| self.bnd(x) == self.g.identity()).count() == 1
    }

    /// `1 → 1`.
    pub fn trivial() -> Self {
        let one = crate::group::trivial();
        Self::with_trivial_action(one.clone(), one, vec![0]).expect("trivial crossed module")
    }

    /// `C2 → 1`.
    pub fn xm0() -> Self {
        let c2 = crate::group::cyclic(2);
        Self::with_trivial_action(c2, crate::group::trivial(), vec![0, 0]).expect("XM0")
    }

    /// `1 → C2`.
    pub fn xm1() -> Self {
        Self::with_trivial_action(crate::group::trivial(), crate::group::cyclic(2), vec![0]).expect("XM1")
    }

    /// `C2 → C4`, the inclusion, with trivial action.
    pub fn xm2() -> Self {
        Self::with_trivial_action(crate::group::cyclic(2), crate::group::cyclic(4), vec![0, 2]).expect("XM2")
    }
}

/// Every crossed module structure on `h → g`, ordered by boundary map and
/// then by action.
pub fn enumerate_crossed_modules(h: &FiniteGroup, g: &FiniteGroup) -> Vec<CrossedModule> {
    let auts = automorphisms(h);
    let (aut_group, perms) =
        FiniteGroup::from_permutations(&auts, h.order()).expect("automorphism group");
    let actions = homomorphisms(g, &aut_group);
    let mut out = Vec::new();
    for bnd in homomorphisms(h, g) {
        for rho in &actions {
            let act = g.elements().flat_map(|a| perms[rho[a]].iter().copied()).collect();
            if let Ok(xm) = CrossedModule::new(h.clone(), g.clone(), bnd.clone(), act) {
                out.push(xm);
            }
        }
    }
    out
}

/// A groupoid with a strictly associative product functor, a strict unit
/// object, an inverse functor, and natural transformations
/// `ψ_ℓ: ι(a) ⋆ a ⇒ e`, `ψ_r: a ⋆ ι(a) ⇒ e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLikeGroupoid {
    groupoid: FiniteGroupoid,
    star_obj: Vec<usize>,
    star_arr: Vec<usize>,
    unit: usize,
    iota_obj: Vec<usize>,
    iota_arr: Vec<usize>,
    psi_l: Vec<usize>,
    psi_r: Vec<usize>,
}

/// Tables of a [`GroupLikeGroupoid`]: `star_obj[a * objects + b]`,
/// `star_arr[f * arrows + g]`, and per-object `psi_l`, `psi_r` arrows.
#[derive(Clone, Debug)]
pub struct GroupLikeTables {
    pub star_obj: Vec<usize>,
    pub star_arr: Vec<usize>,
    pub unit: usize,
    pub iota_obj: Vec<usize>,
    pub iota_arr: Vec<usize>,
    pub psi_l: Vec<usize>,
    pub psi_r: Vec<usize>,
}

impl GroupLikeGroupoid {
    pub fn new(groupoid: FiniteGroupoid, t: GroupLikeTables) -> Result<Self> {
        let gl = Self {
            groupoid,
            star_obj: t.star_obj,
            star_arr: t.star_arr,
            unit: t.unit,
            iota_obj: t.iota_obj,
            iota_arr: t.iota_arr,
            psi_l: t.psi_l,
            psi_r: t.psi_r,
        };
        gl.validate()?;
        Ok(gl)
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidGroupLike(s.into()));
        let gd = &self.groupoid;
        let (no, na) = (gd.object_count(), gd.arrow_count());
        if self.star_obj.len() != no * no
            || self.star_arr.len() != na * na
            || self.iota_obj.len() != no
            || self.iota_arr.len() != na
            || self.psi_l.len() != no
            || self.psi_r.len() != no
            || self.unit >= no
        {
            return bad("table shapes");
        }
        if self.star_obj.iter().chain(&self.iota_obj).any(|&x| x >= no)
            || self
                .star_arr
                .iter()
                .chain(&self.iota_arr)
                .chain(&self.psi_l)
                .chain(&self.psi_r)
                .any(|&f| f >= na)
        {
            return bad("table entry out of range");
        }
        for f in 0..na {
            for g in 0..na {
                let fg = self.star_arrows(f, g);
                if gd.src(fg) != self.star_objects(gd.src(f), gd.src(g))
                    || gd.tgt(fg) != self.star_objects(gd.tgt(f), gd.tgt(g))
                {
                    return bad("star does not respect sources and targets");
                }
            }
        }
        for a in 0..no {
            for b in 0..no {
                if self.star_arrows(gd.unit(a), gd.unit(b)) != gd.unit(self.star_objects(a, b)) {
                    return bad("star does not preserve units");
                }
            }
        }
        let composable: Vec<(usize, usize, usize)> = (0..na)
            .flat_map(|f| (0..na).filter_map(move |g| gd.compose(f, g).map(|c| (f, g, c))))
            .collect();
        for &(f, g, fg) in &composable {
            for &(f2, g2, fg2) in &composable {
                let lhs = self.star_arrows(fg, fg2);
                let rhs = gd.compose(self.star_arrows(f, f2), self.star_arrows(g, g2));
                if rhs != Some(lhs) {
                    return bad("star does not preserve composition");
                }
            }
        }
        for a in 0..no {
            if self.star_objects(self.unit, a) != a || self.star_objects(a, self.unit) != a {
                return bad("unit law fails on objects");
            }
            for b in 0..no {
                for c in 0..no {
                    let l = self.star_objects(self.star_objects(a, b), c);
                    if l != self.star_objects(a, self.star_objects(b, c)) {
                        return bad("star is not associative on objects");
                    }
                }
            }
        }
        let e1 = gd.unit(self.unit);
        for f in 0..na {
            if self.star_arrows(e1, f) != f || self.star_arrows(f, e1) != f {
                return bad("unit law fails on arrows");
            }
            for g in 0..na {
                let fg = self.star_arrows(f, g);
                for h in 0..na {
                    if self.star_arrows(fg, h) != self.star_arrows(f, self.star_arrows(g, h)) {
                        return bad("star is not associative on arrows");
                    }
                }
            }
        }
        for f in 0..na {
            let i = self.iota_arr[f];
            if gd.src(i) != self.iota_obj[gd.src(f)] || gd.tgt(i) != self.iota_obj[gd.tgt(f)] {
                return bad("iota does not respect sources and targets");
            }
        }
        for a in 0..no {
            if self.iota_arr[gd.unit(a)] != gd.unit(self.iota_obj[a]) {
                return bad("iota does not preserve units");
            }
        }
        for &(f, g, fg) in &composable {
            if gd.compose(self.iota_arr[f], self.iota_arr[g]) != Some(self.iota_arr[fg]) {
                return bad("iota does not preserve composition");
            }
        }
        for a in 0..no {
            let (l, r) = (self.psi_l[a], self.psi_r[a]);
            if gd.src(l) != self.star_objects(self.iota_obj[a], a) || gd.tgt(l) != self.unit {
                return bad("psi_l has the wrong source or target");
            }
            if gd.src(r) != self.star_objects(a, self.iota_obj[a]) || gd.tgt(r) != self.unit {
                return bad("psi_r has the wrong source or target");
            }
        }
        for f in 0..na {
            let (a, b) = (gd.src(f), gd.tgt(f));
            let left = self.star_arrows(self.iota_arr[f], f);
            if gd.compose(left, self.psi_l[b]) != Some(self.psi_l[a]) {
                return bad("psi_l is not natural");
            }
            let right = self.star_arrows(f, self.iota_arr[f]);
            if gd.compose(right, self.psi_r[b]) != Some(self.psi_r[a]) {
                return bad("psi_r is not natural");
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn star_objects(&self, a: usize, b: usize) -> usize {
        self.star_obj[a * self.groupoid.object_count() + b]
    }

    pub fn star_arrows(&self, f: usize, g: usize) -> usize {
        self.star_arr[f * self.groupoid.arrow_count() + g]
    }

    pub fn iota_object(&self, a: usize) -> usize {
        self.iota_obj[a]
    }

    pub fn iota_arrow(&self, f: usize) -> usize {
        self.iota_arr[f]
    }

    pub fn psi_l(&self, a: usize) -> usize {
        self.psi_l[a]
    }

    pub fn psi_r(&self, a: usize) -> usize {
        self.psi_r[a]
    }

    pub fn tables(&self) -> GroupLikeTables {
        GroupLikeTables {
            star_obj: self.star_obj.clone(),
            star_arr: self.star_arr.clone(),
            unit: self.unit,
            iota_obj: self.iota_obj.clone(),
            iota_arr: self.iota_arr.clone(),
            psi_l: self.psi_l.clone(),
            psi_r: self.psi_r.clone(),
        }
    }
}

/// Arrow `(g, h)` of the groupoid of a crossed module has id `g·|H| + h`.
pub fn crossed_module_arrow(xm: &CrossedModule, g: usize, h: usize) -> usize {
    g * xm.h().order() + h
}

/// Objects `G`, arrows `(g, h): g → g·bnd(h)`, composed by multiplying in
/// `H`; `(g,h) ⋆ (g',h') = (gg', act(g'⁻¹, h)·h')`.
pub fn crossed_module_to_grouplike(xm: &CrossedModule) -> GroupLikeGroupoid {
    let (g, h) = (xm.g(), xm.h());
    let (ng, nh) = (g.order(), h.order());
    let na = ng * nh;
    let split = |f: usize| (f / nh, f % nh);
    let src = (0..na).map(|f| split(f).0).collect();
    let tgt = (0..na).map(|f| {
        let (a, x) = split(f);
        g.mul(a, xm.bnd(x))
    });
    let groupoid = FiniteGroupoid::from_compose(ng, src, tgt.collect(), |f1, f2| {
        let ((a, x), (_, y)) = (split(f1), split(f2));
        a * nh + h.mul(x, y)
    })
    .and_then(|gd| {
        let arrows = (0..na)
            .map(|f| {
                let (a, x) = split(f);
                format!("({},{})", g.name(a), h.name(x))
            })
            .collect();
        gd.with_names(g.names().to_vec(), arrows)
    })
    .expect("groupoid of a crossed module");
    let star_obj = (0..ng * ng).map(|i| g.mul(i / ng, i % ng)).collect();
    let star_arr = (0..na * na)
        .map(|i| {
            let ((a, x), (b, y)) = (split(i / na), split(i % na));
            g.mul(a, b) * nh + h.mul(xm.act(g.inv(b), x), y)
        })
        .collect();
    let iota_obj = (0..ng).map(|a| g.inv(a)).collect();
    let iota_arr = (0..na)
        .map(|f| {
            let (a, x) = split(f);
            g.inv(a) * nh + xm.act(a, h.inv(x))
        })
        .collect();
    let units: Vec<usize> = (0..ng).map(|_| g.identity() * nh + h.identity()).collect();
    GroupLikeGroupoid::new(
        groupoid,
        GroupLikeTables {
            star_obj,
            star_arr,
            unit: g.identity(),
            iota_obj,
            iota_arr,
            psi_l: units.clone(),
            psi_r: units,
        },
    )
    .expect("a crossed module gives a group-like groupoid")
}

/// The classifying 2-group `B𝒢` truncated at `top ≤ 4`.
#[derive(Clone, Debug)]
pub struct TwoGroup {
    pub set: Arc<SimplicialSet>,
    pub grouplike: GroupLikeGroupoid,
    two_cells: Vec<(usize, usize, usize)>,
    two_index: HashMap<(usize, usize, usize), CellId>,
}

impl TwoGroup {
    /// The unit 1-cell `e = s₀(•)`.
    pub fn unit(&self) -> CellId {
        self.grouplike.unit()
    }

    /// A 2-cell as `(α₀₁, α₁₂, g)` with `g: α₀₁ ⋆ α₁₂ → α₀₂`.
    pub fn two_cell(&self, c: CellId) -> (usize, usize, usize) {
        self.two_cells[c]
    }

    pub fn two_cell_of(&self, a01: usize, a12: usize, g: usize) -> Option<CellId> {
        self.two_index.get(&(a01, a12, g)).copied()
    }
}

pub fn classifying_2group(gl: &GroupLikeGroupoid, top: usize) -> Result<TwoGroup> {
    if top > 4 {
        return Err(Error::TruncationMismatch(format!(
            "the classifying 2-group is built up to level 4, not {top}"
        )));
    }
    let gd = gl.groupoid();
    let (no, na) = (gd.object_count(), gd.arrow_count());
    let mut tower = Tower::new(1);
    let mut two_cells = Vec::new();
    let mut two_index = HashMap::new();
    if top >= 1 {
        tower.push_level(no, vec![0; 2 * no]);
        tower.set_degens(0, vec![gl.unit()]);
    }
    if top >= 2 {
        let mut faces = Vec::new();
        for a01 in 0..no {
            for a12 in 0..no {
                let s = gl.star_objects(a01, a12);
                for g in (0..na).filter(|&g| gd.src(g) == s) {
                    two_index.insert((a01, a12, g), two_cells.len());
                    two_cells.push((a01, a12, g));
                    faces.extend([a12, gd.tgt(g), a01]);
                }
            }
        }
        tower.push_level(two_cells.len(), faces);
        let e = gl.unit();
        let mut degens = Vec::with_capacity(2 * no);
        for a in 0..no {
            degens.push(two_index[&(e, a, gd.unit(a))]);
            degens.push(two_index[&(a, e, gd.unit(a))]);
        }
        tower.set_degens(1, degens);
    }
    if top >= 3 {
        let cells = &two_cells;
        let tuples = tower.boundary_candidates(|t| {
            let (_, a23, g123) = cells[t[0]];
            let (_, _, g023) = cells[t[1]];
            let (a01, _, g013) = cells[t[2]];
            let (_, _, g012) = cells[t[3]];
            let lhs = gd.compose(gl.star_arrows(gd.unit(a01), g123), g013);
            let rhs = gd.compose(gl.star_arrows(g012, gd.unit(a23)), g023);
            lhs.is_some() && lhs == rhs
        })?;
        tower.push_tuples(tuples);
        tower.derive_degens(2)?;
    }
    if top >= 4 {
        let tuples = tower.boundary_candidates(|_| true)?;
        tower.push_tuples(tuples);
        tower.derive_degens(3)?;
    }
    let mut labels = vec![vec!["•".to_string()]];
    if top >= 1 {
        labels.push(gd.object_names().to_vec());
    }
    if top >= 2 {
        labels.push(
            two_cells
                .iter()
                .map(|&(a01, a12, g)| {
                    format!("{}|{}|{}", gd.object_name(a01), gd.object_name(a12), gd.arrow_name(g))
                })
                .collect(),
        );
    }
    labels.resize(top + 1, Vec::new());
    let set = tower.finish()?.with_labels(labels)?;
    Ok(TwoGroup {
        set: Arc::new(set),
        grouplike: gl.clone(),
        two_cells,
        two_index,
    })
}

/// Maps `Δ[1] × Δ[n] → G` whose vertical edges all equal `α`.
#[derive(Clone, Debug)]
pub struct Cylinders {
    pub n: usize,
    pub prism: Prism,
    pub maps: Vec<Vec<Vec<CellId>>>,
}

impl Cylinders {
    /// Restriction of cylinder `k` to `{v} × Δ[n]`: `v = 0` gives `d¹₁`,
    /// `v = 1` gives `d¹₀`.
    pub fn end(&self, k: usize, v: usize) -> CellId {
        let a = vec![v; self.n + 1];
        let b: Vec<usize> = (0..=self.n).collect();
        self.maps[k][self.n][self.prism.cell(&a, &b)]
    }
}

fn unit_of(g: &SimplicialSet) -> Result<CellId> {
    if g.count(0) != 1 || g.top() < 1 {
        return Err(Error::NotA2Groupoid("a 2-group has exactly one vertex".into()));
    }
    Ok(g.degen(0, 0, 0))
}

/// The `α`-cylinders at level `n`, found by search over the prism
/// truncated at `n + 1`.
pub fn enumerate_cylinders(g: &SimplicialSet, alpha: CellId, n: usize) -> Result<Cylinders> {
    if n + 1 > g.top() {
        return Err(Error::DepthExceedsTruncation {
            depth: n,
            truncation: g.top(),
        });
    }
    if alpha >= g.count(1) {
        return Err(Error::InvalidIndex(format!("1-cell {alpha}")));
    }
    let prism = Prism::new(1, n, n + 1)?;
    let vertical: HashMap<CellId, CellId> =
        (0..=n).map(|i| (prism.cell(&[0, 1], &[i, i]), alpha)).collect();
    let pin = |lv: usize, c: CellId| if lv == 1 { vertical.get(&c).copied() } else { None };
    let maps = pinned_maps(&prism, g, &pin, None);
    Ok(Cylinders { n, prism, maps })
}

fn pinned_maps(
    prism: &Prism,
    g: &SimplicialSet,
    pin: &dyn Fn(usize, CellId) -> Option<CellId>,
    limit: Option<usize>,
) -> Vec<Vec<Vec<CellId>>> {
    let top = prism.top();
    let plan = SourcePlan::new(&prism.set, top);
    let index = BoundaryIndex::new(g, top);
    let cons = Constraints {
        pin: Some(pin),
        ..Constraints::default()
    };
    let mut out = Vec::new();
    search_maps(&plan, &prism.set, g, &index, cons, &mut |t| {
        out.push(t.to_vec());
        limit.is_none_or(|l| out.len() < l)
    });
    out
}

/// An `e`-cylinder at level 1: a square with vertical edges `e`, from its
/// lower edge to its upper edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformation {
    pub from: CellId,
    pub to: CellId,
    /// Level tables of the map `Δ[1] × Δ[1] → G`, truncated at 2.
    pub tables: Vec<Vec<CellId>>,
}

impl Transformation {
    /// `s⁰₀(x)`: the constant square on the 1-cell `x`.
    pub fn degenerate(g: &SimplicialSet, x: CellId) -> Result<Self> {
        let prism = Prism::new(1, 1, 2)?;
        let tables = (0..=2)
            .map(|lv| {
                (0..prism.set.count(lv))
                    .map(|c| g.operate(1, x, prism.coords(lv, c).1))
                    .collect()
            })
            .collect();
        Ok(Self { from: x, to: x, tables })
    }

    fn evaluate(&self, prism: &Prism, a: &[usize], b: &[usize]) -> CellId {
        self.tables[a.len() - 1][prism.cell(a, b)]
    }
}

pub fn transformations(g: &SimplicialSet) -> Result<Vec<Transformation>> {
    let e = unit_of(g)?;
    let cyl = enumerate_cylinders(g, e, 1)?;
    Ok((0..cyl.maps.len())
        .map(|k| Transformation {
            from: cyl.end(k, 0),
            to: cyl.end(k, 1),
            tables: cyl.maps[k].clone(),
        })
        .collect())
}

/// Each unit element `e′` with the transformations from `e` to `e′`.
pub fn unit_elements(g: &SimplicialSet) -> Result<Vec<(CellId, Vec<Transformation>)>> {
    let e = unit_of(g)?;
    let mut by_target: Vec<(CellId, Vec<Transformation>)> = Vec::new();
    for t in transformations(g)?.into_iter().filter(|t| t.from == e) {
        match by_target.iter_mut().find(|(x, _)| *x == t.to) {
            Some((_, ws)) => ws.push(t),
            None => by_target.push((t.to, vec![t])),
        }
    }
    by_target.sort_by_key(|(x, _)| *x);
    Ok(by_target)
}

/// The same cells and faces with degeneracies `s^n_{ω,j}` making `e_ω`
/// the unit. Levels above 1 use the prism truncated at `G.N`.
pub fn reunitize(g: &SimplicialSet, omega: &Transformation) -> Result<SimplicialSet> {
    let e = unit_of(g)?;
    let square = Prism::new(1, 1, 2)?;
    let not_a = |s: &str| Err(Error::NotATransformation(s.into()));
    if omega.tables.len() != 3
        || (0..=2).any(|lv| omega.tables[lv].len() != square.set.count(lv))
    {
        return not_a("tables do not describe a square");
    }
    let verified = crate::map::SimplicialMap::new(
        square.set.clone(),
        Arc::new(g.truncate(2)?),
        omega.tables.clone(),
        crate::map::MapKind::Full,
    );
    if verified.is_err() {
        return not_a("tables are not a simplicial map");
    }
    if omega.evaluate(&square, &[0, 1], &[0, 0]) != e || omega.evaluate(&square, &[0, 1], &[1, 1]) != e {
        return not_a("vertical edges are not the unit");
    }
    if omega.evaluate(&square, &[0, 0], &[0, 1]) != e || omega.from != e {
        return not_a("the transformation does not start at the unit");
    }
    if omega.evaluate(&square, &[1, 1], &[0, 1]) != omega.to {
        return not_a("target edge does not match");
    }
    let top = g.top();
    let mut degens: Vec<Vec<CellId>> = vec![Vec::new(); top + 1];
    if top >= 1 {
        degens[0] = vec![omega.to];
    }
    for n in 1..top {
        let prism = Prism::new(1, n + 1, top)?;
        let plan = SourcePlan::new(&prism.set, top);
        let index = BoundaryIndex::new(g, top);
        let mut table = Vec::with_capacity(g.count(n) * (n + 1));
        for x in 0..g.count(n) {
            for i in 0..=n {
                let h = g.degen(n, i, x);
                let pin = |lv: usize, c: CellId| -> Option<CellId> {
                    let (a, b) = prism.coords(lv, c);
                    if a.iter().all(|&v| v == 0) {
                        return Some(g.operate(n + 1, h, b));
                    }
                    let (lo, hi) = (b[0], b[b.len() - 1]);
                    if lo >= i && hi <= i + 1 {
                        let shifted: Vec<usize> = b.iter().map(|&v| v - i).collect();
                        if lv <= 2 {
                            return Some(omega.evaluate(&square, a, &shifted));
                        }
                        return None;
                    }
                    if b.iter().all(|&v| v == lo || v == hi) {
                        return Some(g.operate(n + 1, h, b));
                    }
                    None
                };
                let cons = Constraints {
                    pin: Some(&pin),
                    ..Constraints::default()
                };
                let mut found: Vec<CellId> = Vec::new();
                let upper: Vec<usize> = vec![1; n + 2];
                let full: Vec<usize> = (0..=n + 1).collect();
                let upper_cell = prism.cell(&upper, &full);
                search_maps(&plan, &prism.set, g, &index, cons, &mut |t| {
                    found.push(t[n + 1][upper_cell]);
                    found.len() < 2
                });
                match found.as_slice() {
                    [y] => table.push(*y),
                    [] => {
                        return Err(Error::CoherenceFailure(format!(
                            "no cylinder realizes s{i} on cell {x} at level {n}"
                        )))
                    }
                    _ => {
                        return Err(Error::CoherenceFailure(format!(
                            "the cylinder realizing s{i} on cell {x} at level {n} is not unique"
                        )))
                    }
                }
            }
        }
        degens[n] = table;
    }
    let faces = (0..=top).map(|n| g.flat_faces(n).to_vec()).collect();
    let labels = (0..=top).map(|n| g.labels(n).to_vec()).collect();
    SimplicialSet::from_flat(top, g.counts().to_vec(), faces, degens)?.with_labels(labels)
}
