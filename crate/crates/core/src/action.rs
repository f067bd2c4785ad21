//! Strict actions of groups and crossed modules on finite groupoids, and
//! the Kan fibrations they define.
//!
//! Actions are on the right: `Φ(g·g′)` is `Φ(g)` followed by `Φ(g′)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bundle::FibrationBundle;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{functor_between_nerves, nerve, nerve_map_into, to_groupoid, FiniteGroupoid, Functor};
use crate::kan::{check_equivalence, check_hypercover};
use crate::map::{fiber_product, MapKind, SimplicialMap};
use crate::report::CheckReport;
use crate::simplicial::{CellId, SimplicialSet};
use crate::tower::Tower;
use crate::two_group::{classifying_2group, crossed_module_arrow, crossed_module_to_grouplike, CrossedModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acting {
    Group(FiniteGroup),
    CrossedModule(CrossedModule),
}

/// A strict action. For a crossed module, `Θ(h)` is a natural
/// transformation from the identity to `Φ(bnd h)`, stored as its
/// component at each object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictAction {
    groupoid: FiniteGroupoid,
    acting: Acting,
    phi: Vec<Functor>,
    theta: Vec<Vec<usize>>,
}

fn not_strict(s: String) -> Error {
    Error::NotAStrictAction(s)
}

impl StrictAction {
    pub fn of_group(groupoid: FiniteGroupoid, group: FiniteGroup, phi: Vec<Functor>) -> Result<Self> {
        let a = Self {
            groupoid,
            acting: Acting::Group(group),
            phi,
            theta: Vec::new(),
        };
        a.check_phi()?;
        Ok(a)
    }

    pub fn of_crossed_module(
        groupoid: FiniteGroupoid,
        xm: CrossedModule,
        phi: Vec<Functor>,
        theta: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let a = Self {
            groupoid,
            acting: Acting::CrossedModule(xm),
            phi,
            theta,
        };
        a.check_phi()?;
        a.check_theta()?;
        Ok(a)
    }

    fn check_phi(&self) -> Result<()> {
        let (x, g) = (&self.groupoid, self.group());
        if self.phi.len() != g.order() {
            return Err(not_strict(format!("{} functors for a group of order {}", self.phi.len(), g.order())));
        }
        for (k, f) in self.phi.iter().enumerate() {
            x.check_functor(x, f).map_err(|e| not_strict(format!("phi({k}): {e}")))?;
        }
        if self.phi[g.identity()] != Functor::identity(x) {
            return Err(not_strict("phi(e) is not the identity".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                if self.phi[a].then(&self.phi[b]) != self.phi[g.mul(a, b)] {
                    return Err(not_strict(format!("phi({a}) then phi({b}) is not phi of the product")));
                }
            }
        }
        Ok(())
    }

    fn check_theta(&self) -> Result<()> {
        let xm = self.crossed_module().expect("crossed module action");
        let (x, h, g) = (&self.groupoid, xm.h(), xm.g());
        if self.theta.len() != h.order() || self.theta.iter().any(|t| t.len() != x.object_count()) {
            return Err(not_strict("theta needs one component per element of H and object".into()));
        }
        if self.theta.iter().flatten().any(|&a| a >= x.arrow_count()) {
            return Err(not_strict("theta component out of range".into()));
        }
        for k in h.elements() {
            let f = &self.phi[xm.bnd(k)];
            for y in 0..x.object_count() {
                let t = self.theta[k][y];
                if x.src(t) != y || x.tgt(t) != f.objects[y] {
                    return Err(not_strict(format!("theta({k}) at {y} does not end at phi(bnd {k})")));
                }
            }
            for a in 0..x.arrow_count() {
                let lhs = x.compose(a, self.theta[k][x.tgt(a)]);
                let rhs = x.compose(self.theta[k][x.src(a)], f.arrows[a]);
                if lhs != rhs {
                    return Err(not_strict(format!("theta({k}) is not natural at arrow {a}")));
                }
            }
        }
        if (0..x.object_count()).any(|y| self.theta[h.identity()][y] != x.unit(y)) {
            return Err(not_strict("theta(e) is not the identity".into()));
        }
        for k in h.elements() {
            for l in h.elements() {
                let moved = &self.phi[xm.bnd(k)];
                for y in 0..x.object_count() {
                    let c = x.compose(self.theta[k][y], self.theta[l][moved.objects[y]]);
                    if c != Some(self.theta[h.mul(k, l)][y]) {
                        return Err(not_strict(format!("theta({k}) then theta({l}) is not theta of the product")));
                    }
                }
            }
        }
        for a in g.elements() {
            for k in h.elements() {
                let k2 = xm.act(g.inv(a), k);
                for y in 0..x.object_count() {
                    let moved = self.phi[a].arrows[self.theta[k][y]];
                    if moved != self.theta[k2][self.phi[a].objects[y]] {
                        return Err(not_strict(format!("phi({a}) does not carry theta({k}) to theta({k2})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn acting(&self) -> &Acting {
        &self.acting
    }

    /// The group of 1-cells: the group itself, or `G` of a crossed module.
    pub fn group(&self) -> &FiniteGroup {
        match &self.acting {
            Acting::Group(g) => g,
            Acting::CrossedModule(xm) => xm.g(),
        }
    }

    pub fn crossed_module(&self) -> Option<&CrossedModule> {
        match &self.acting {
            Acting::Group(_) => None,
            Acting::CrossedModule(xm) => Some(xm),
        }
    }

    pub fn phi(&self, g: usize) -> &Functor {
        &self.phi[g]
    }

    pub fn phis(&self) -> &[Functor] {
        &self.phi
    }

    /// Component of `Θ(h)` at object `x`.
    pub fn theta(&self, h: usize, x: usize) -> usize {
        self.theta[h][x]
    }

    pub fn thetas(&self) -> &[Vec<usize>] {
        &self.theta
    }

    /// `C2` swapping the two objects `p`, `q` of a discrete groupoid.
    pub fn swap() -> Self {
        let x = FiniteGroupoid::discrete(2)
            .with_names(vec!["p".into(), "q".into()], vec!["1p".into(), "1q".into()])
            .expect("two names");
        let flip = Functor {
            objects: vec![1, 0],
            arrows: vec![1, 0],
        };
        Self::of_group(x.clone(), crate::group::cyclic(2), vec![Functor::identity(&x), flip])
            .expect("swap action")
    }

    pub fn trivial(groupoid: FiniteGroupoid, group: FiniteGroup) -> Self {
        let phi = vec![Functor::identity(&groupoid); group.order()];
        Self::of_group(groupoid, group, phi).expect("trivial action")
    }

    /// `Φ` trivial and every `Θ(h)` the identity; needs nothing of `bnd`.
    pub fn trivial_2group(groupoid: FiniteGroupoid, xm: CrossedModule) -> Self {
        let phi = vec![Functor::identity(&groupoid); xm.g().order()];
        let units: Vec<usize> = (0..groupoid.object_count()).map(|x| groupoid.unit(x)).collect();
        let theta = vec![units; xm.h().order()];
        Self::of_crossed_module(groupoid, xm, phi, theta).expect("trivial 2-group action")
    }

    /// A crossed module acting on its own groupoid: `Φ(g)` multiplies
    /// objects by `g` on the right and `Θ(h)` at `a` is the arrow `(a, h)`.
    pub fn regular(xm: CrossedModule) -> Self {
        let gl = crossed_module_to_grouplike(&xm);
        let x = gl.groupoid().clone();
        let (g, h) = (xm.g(), xm.h());
        let phi = g
            .elements()
            .map(|b| Functor {
                objects: g.elements().map(|a| g.mul(a, b)).collect(),
                arrows: (0..x.arrow_count())
                    .map(|f| {
                        let (a, k) = (f / h.order(), f % h.order());
                        crossed_module_arrow(&xm, g.mul(a, b), xm.act(g.inv(b), k))
                    })
                    .collect(),
            })
            .collect();
        let theta = h
            .elements()
            .map(|k| g.elements().map(|a| crossed_module_arrow(&xm, a, k)).collect())
            .collect();
        Self::of_crossed_module(x, xm, phi, theta).expect("regular action")
    }

    /// Objects fixed by some non-identity element, with that element.
    pub fn fixed_points(&self) -> Vec<(usize, usize)> {
        let g = self.group();
        let mut out = Vec::new();
        for x in 0..self.groupoid.object_count() {
            if let Some(a) = g.elements().find(|&a| a != g.identity() && self.phi[a].objects[x] == x) {
                out.push((x, a));
            }
        }
        out
    }
}

/// The action groupoid `X¹ × G ⇉ X⁰` of a group action; the arrow
/// `(α, g)` has id `g·|X¹| + α`, runs from `s(α)` to `Φ(g)(t(α))`, and
/// `(α, g)·(β, h) = (α·Φ(g⁻¹)(β), gh)`.
pub fn action_groupoid(a: &StrictAction) -> Result<FiniteGroupoid> {
    let Acting::Group(g) = &a.acting else {
        return Err(not_strict("a crossed module action has no action groupoid".into()));
    };
    let x = &a.groupoid;
    let na = x.arrow_count();
    let split = |f: usize| (f % na, f / na);
    let src = (0..na * g.order()).map(|f| x.src(split(f).0)).collect();
    let tgt = (0..na * g.order())
        .map(|f| {
            let (al, k) = split(f);
            a.phi[k].objects[x.tgt(al)]
        })
        .collect();
    let gd = FiniteGroupoid::from_compose(x.object_count(), src, tgt, |f1, f2| {
        let ((al, k), (be, l)) = (split(f1), split(f2));
        let moved = a.phi[g.inv(k)].arrows[be];
        let c = x.compose(al, moved).expect("composable after moving");
        g.mul(k, l) * na + c
    })
    .map_err(|e| not_strict(e.to_string()))?;
    let arrows = (0..na * g.order())
        .map(|f| {
            let (al, k) = split(f);
            format!("({},{})", x.arrow_name(al), g.name(k))
        })
        .collect();
    gd.with_names(x.object_names().to_vec(), arrows)
}

/// Id of the arrow `(α, g)` in [`action_groupoid`], which is also its
/// 1-cell in the total space of [`strict_action_groupoid`].
pub fn action_arrow(a: &StrictAction, alpha: usize, g: usize) -> usize {
    g * a.groupoid.arrow_count() + alpha
}

/// `K = nerve(X¹ × G ⇉ X⁰)` over `nerve(G)`, truncated at `top`. The
/// fibration level is 1 when `X` is discrete and 2 otherwise.
pub fn strict_action_groupoid(a: &StrictAction, top: usize) -> Result<FibrationBundle> {
    let ag = action_groupoid(a)?;
    let g = a.group();
    let na = a.groupoid.arrow_count();
    let k = nerve(&ag, top);
    let bg = FiniteGroupoid::from_group(g);
    let base = nerve(&bg, top);
    let proj = Functor {
        objects: vec![0; ag.object_count()],
        arrows: (0..ag.arrow_count()).map(|f| f / na).collect(),
    };
    let pi = functor_between_nerves(&proj, &k, &base)?;
    let x = &a.groupoid;
    let discrete = (0..na).all(|f| x.is_unit(f));
    FibrationBundle::new(pi, if discrete { 1 } else { 2 })
}

/// 1-cell of [`strict_2group_action_groupoid`] over `g ∈ G` whose arrow is
/// `b`, running from `Φ(g)⁻¹(s(b))` to `t(b)`.
pub fn action2_edge(a: &StrictAction, g: usize, b: usize) -> usize {
    g * a.groupoid.arrow_count() + b
}

/// The Kan fibration of a crossed module action over `B𝒢`, truncated at
/// `top ≤ 4`. An edge over `g` is a pair `(x, b)` with `b: Φ(g)(x) → x′`.
/// A triangle over `(g₀₁, g₁₂, γ)` with `γ = (c, h)` is a triple of edges
/// with `Θ(h)_{Φ(c)(x₀)}·b₀₂ = Φ(g₁₂)(b₀₁)·b₁₂`. Higher cells are the
/// compatible boundaries over cells of the base.
pub fn strict_2group_action_groupoid(a: &StrictAction, top: usize) -> Result<FibrationBundle> {
    let Some(xm) = a.crossed_module() else {
        return Err(not_strict("the action is not by a crossed module".into()));
    };
    let tg = classifying_2group(&crossed_module_to_grouplike(xm), top)?;
    let base = tg.set.clone();
    let gl = &tg.grouplike;
    let gd = gl.groupoid();
    let (x, g, nh) = (&a.groupoid, xm.g(), xm.h().order());
    let (no, na) = (x.object_count(), x.arrow_count());
    let edge_src = |e: usize| a.phi[g.inv(e / na)].objects[x.src(e % na)];
    let edge_tgt = |e: usize| x.tgt(e % na);
    let mut tower = Tower::new(no);
    let mut pi: Vec<Vec<CellId>> = vec![vec![0; no]];
    let mut labels: Vec<Vec<String>> = vec![x.object_names().to_vec()];
    if top >= 1 {
        let ne = g.order() * na;
        tower.push_level(ne, (0..ne).flat_map(|e| [edge_tgt(e), edge_src(e)]).collect());
        tower.set_degens(0, (0..no).map(|y| action2_edge(a, g.identity(), x.unit(y))).collect());
        pi.push((0..ne).map(|e| e / na).collect());
        labels.push((0..ne).map(|e| format!("({}|{})", g.name(e / na), x.arrow_name(e % na))).collect());
    }
    if top >= 2 {
        let mut faces = Vec::new();
        let mut over = Vec::new();
        let mut index: HashMap<(CellId, [CellId; 3]), CellId> = HashMap::new();
        for c2 in 0..base.count(2) {
            let (a01, a12, gamma) = tg.two_cell(c2);
            let (c, k) = (gd.src(gamma), gamma % nh);
            let a02 = gd.tgt(gamma);
            for b01 in 0..na {
                let e01 = action2_edge(a, a01, b01);
                let x0 = edge_src(e01);
                let moved = a.phi[a12].arrows[b01];
                for b12 in (0..na).filter(|&b| x.src(b) == x.tgt(moved)) {
                    let e12 = action2_edge(a, a12, b12);
                    let t = a.theta[k][a.phi[c].objects[x0]];
                    let path = x.compose(moved, b12).expect("composable");
                    let b02 = x.compose(x.inv(t), path).expect("composable");
                    let e02 = action2_edge(a, a02, b02);
                    let bd = [e12, e02, e01];
                    index.insert((c2, bd), over.len());
                    over.push(c2);
                    faces.extend(bd);
                }
            }
        }
        tower.push_level(over.len(), faces);
        let mut degens = Vec::with_capacity(2 * tower.count(1));
        for e in 0..tower.count(1) {
            let ge = e / na;
            let (s, t) = (tower.degen(0, 0, edge_src(e)), tower.degen(0, 0, edge_tgt(e)));
            for (j, bd) in [(0, [e, e, s]), (1, [t, e, e])] {
                let cell = index.get(&(base.degen(1, j, ge), bd)).ok_or_else(|| {
                    Error::CoherenceFailure(format!("s{j} of edge {e} has no triangle"))
                })?;
                degens.push(*cell);
            }
        }
        tower.set_degens(1, degens);
        pi.push(over);
        labels.push(Vec::new());
    }
    for n in 3..=top.min(4) {
        let cells: HashMap<&[CellId], CellId> = (0..base.count(n)).map(|c| (base.faces_of(n, c), c)).collect();
        let below = &pi[n - 1];
        let image = |t: &[CellId]| -> Vec<CellId> { t.iter().map(|&c| below[c]).collect() };
        let tuples = tower.boundary_candidates(|t| cells.contains_key(image(t).as_slice()))?;
        pi.push(tuples.iter().map(|t| cells[image(t).as_slice()]).collect());
        tower.push_tuples(tuples);
        tower.derive_degens(n - 1)?;
        labels.push(Vec::new());
    }
    let k = Arc::new(tower.finish()?.with_labels(labels)?);
    let pi = SimplicialMap::new(k, base, pi, MapKind::Full)?;
    let bundle = FibrationBundle::new(pi, 2)?;
    if bundle.certificate.fails() {
        return Err(Error::CoherenceFailure(bundle.certificate.summary()));
    }
    Ok(bundle)
}

/// The orbit groupoid of a free action, with the projection from the
/// total space of [`strict_action_groupoid`].
#[derive(Clone, Debug)]
pub struct FreeQuotient {
    pub groupoid: FiniteGroupoid,
    pub projection: SimplicialMap,
    pub certificate: CheckReport,
}

pub fn free_quotient(a: &StrictAction, top: usize) -> Result<FreeQuotient> {
    let ag = action_groupoid(a)?;
    if let Some(&(object, element)) = a.fixed_points().first() {
        return Err(Error::ActionNotFree { object, element });
    }
    let (x, g) = (&a.groupoid, a.group());
    let orbit_ids = |count: usize, act: &dyn Fn(usize, usize) -> usize| {
        let mut id = vec![usize::MAX; count];
        let mut reps = Vec::new();
        for y in 0..count {
            if id[y] == usize::MAX {
                for k in g.elements() {
                    id[act(k, y)] = reps.len();
                }
                reps.push(y);
            }
        }
        (id, reps)
    };
    let (obj, obj_reps) = orbit_ids(x.object_count(), &|k, y| a.phi[k].objects[y]);
    let (arr, arr_reps) = orbit_ids(x.arrow_count(), &|k, y| a.phi[k].arrows[y]);
    let src: Vec<usize> = arr_reps.iter().map(|&r| obj[x.src(r)]).collect();
    let tgt: Vec<usize> = arr_reps.iter().map(|&r| obj[x.tgt(r)]).collect();
    let compose = |p: usize, q: usize| {
        let al = arr_reps[p];
        let be = g
            .elements()
            .map(|k| a.phi[k].arrows[arr_reps[q]])
            .find(|&b| x.src(b) == x.tgt(al))
            .expect("orbits meet");
        arr[x.compose(al, be).expect("composable")]
    };
    let quotient = FiniteGroupoid::from_compose(obj_reps.len(), src, tgt, compose)
        .and_then(|q| {
            q.with_names(
                obj_reps.iter().map(|&r| format!("[{}]", x.object_name(r))).collect(),
                arr_reps.iter().map(|&r| format!("[{}]", x.arrow_name(r))).collect(),
            )
        })
        .map_err(|e| Error::Internal(format!("orbit groupoid: {e}")))?;
    let na = x.arrow_count();
    let proj = Functor {
        objects: obj.clone(),
        arrows: (0..ag.arrow_count()).map(|f| arr[f % na]).collect(),
    };
    let nk = nerve(&ag, top);
    let nq = nerve(&quotient, top);
    let projection = functor_between_nerves(&proj, &nk, &nq)?;
    let certificate = check_hypercover(&projection, 1);
    Ok(FreeQuotient {
        groupoid: quotient,
        projection,
        certificate,
    })
}

/// The group of a one-object 1-groupoid, with elements its 1-cells.
pub fn group_of_base(base: &SimplicialSet) -> Result<FiniteGroup> {
    if base.count(0) != 1 {
        return Err(Error::BaseNotA1Group(format!("{} vertices", base.count(0))));
    }
    let gd = to_groupoid(base).map_err(|e| Error::BaseNotA1Group(e.to_string()))?;
    FiniteGroup::new(
        gd.arrow_names().to_vec(),
        (0..gd.arrow_count())
            .flat_map(|a| (0..gd.arrow_count()).map(move |b| (a, b)))
            .map(|(a, b)| gd.compose(a, b).expect("one object"))
            .collect(),
    )
    .map_err(|e| Error::BaseNotA1Group(e.to_string()))
}

/// A groupoid with a strict free action equivalent to a bundle over
/// `nerve(G)`: `𝒳̃ = K ×_{BG} EG` with `EG = (G₀ × G ⇉ G₀)`.
#[derive(Clone, Debug)]
pub struct Strictified {
    pub groupoid: FiniteGroupoid,
    /// `K ×_{BG} EG` itself; its 0- and 1-cells are the objects and arrows
    /// of `groupoid`.
    pub set: Arc<SimplicialSet>,
    pub action: StrictAction,
    /// `x ↦ (x, e₀)` from the fiber.
    pub map: SimplicialMap,
    pub certificate: CheckReport,
}

pub fn strictify(bundle: &FibrationBundle) -> Result<Strictified> {
    let group = group_of_base(&bundle.base)?;
    if bundle.certificate.fails() {
        return Err(Error::NotAFibration(Box::new(bundle.certificate.clone())));
    }
    let ng = group.order();
    let top = bundle.k.top();
    // EG: arrow (g0, g) has id g0·|G| + g and runs g0 → g0·g.
    let eg = FiniteGroupoid::from_compose(
        ng,
        (0..ng * ng).map(|f| f / ng).collect(),
        (0..ng * ng).map(|f| group.mul(f / ng, f % ng)).collect(),
        |f1, f2| (f1 / ng) * ng + group.mul(f1 % ng, f2 % ng),
    )?;
    let to_base = Functor {
        objects: vec![0; ng],
        arrows: (0..ng * ng).map(|f| f % ng).collect(),
    };
    let eg_map = nerve_map_into(&to_base, &eg, &bundle.base, top)?;
    let fp = fiber_product(&bundle.pi, &eg_map)?;
    let kset = &bundle.k;
    let obj_names = (0..fp.set.count(0))
        .map(|c| {
            let (p, q) = (fp.left.apply(0, c), fp.right.apply(0, c));
            format!("({},{})", kset.label(0, p).map_or_else(|| p.to_string(), str::to_string), group.name(q))
        })
        .collect();
    let arr_names = (0..fp.set.count(1))
        .map(|c| {
            let (p, q) = (fp.left.apply(1, c), fp.right.apply(1, c));
            format!("({},{})", kset.label(1, p).map_or_else(|| p.to_string(), str::to_string), group.name(q / ng))
        })
        .collect();
    let groupoid = to_groupoid(&fp.set)?.with_names(obj_names, arr_names)?;
    let phi = group
        .elements()
        .map(|h| {
            let hi = group.inv(h);
            let moved = |n: usize, c: CellId| {
                let (p, q) = (fp.left.apply(n, c), fp.right.apply(n, c));
                // Nerve 1-cells of EG are its arrows.
                let q2 = if n == 0 { group.mul(hi, q) } else { group.mul(hi, q / ng) * ng + q % ng };
                fp.cell_of(n, p, q2).expect("the action preserves the fiber product")
            };
            Functor {
                objects: (0..fp.set.count(0)).map(|c| moved(0, c)).collect(),
                arrows: (0..fp.set.count(1)).map(|c| moved(1, c)).collect(),
            }
        })
        .collect();
    let action = StrictAction::of_group(groupoid.clone(), group.clone(), phi)?;
    let incl = &bundle.incl;
    let fiber = incl.source().clone();
    let e0 = group.identity();
    let e_arrow = e0 * ng + e0;
    let eg_n = nerve(&eg, top);
    let mut tables = Vec::new();
    for n in 0..=fiber.top().min(fp.set.top()) {
        let const_cell = if n == 0 {
            e0
        } else {
            eg_n.cell_of(&vec![e_arrow; n]).expect("constant string")
        };
        tables.push(
            (0..fiber.count(n))
                .map(|c| {
                    fp.cell_of(n, incl.apply(n, c), const_cell)
                        .ok_or_else(|| Error::Internal(format!("fiber cell {c} at level {n} has no image")))
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let map = SimplicialMap::new(fiber, fp.set.clone(), tables, MapKind::Full)?;
    let certificate = check_equivalence(&map, 1)?;
    Ok(Strictified {
        groupoid,
        set: fp.set,
        action,
        map,
        certificate,
    })
}
