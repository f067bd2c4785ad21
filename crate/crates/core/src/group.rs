//! Finite groups as multiplication tables, a small catalog, and
//! homomorphism enumeration.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// `table[a * n + b] = a·b`.
    pub fn new(names: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty".into()));
        }
        if table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table is not n×n over the elements".into()));
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            names,
            table,
            identity,
            inverse,
        })
    }

    pub fn from_fn(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = names.len();
        let table = (0..n * n).map(|i| mul(i / n, i % n)).collect();
        Self::new(names, table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A generating set chosen greedily by least element.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<usize> = [self.identity].into();
        for a in self.elements() {
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut span: BTreeSet<usize> = [self.identity].into();
        let mut queue: VecDeque<usize> = [self.identity].into();
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if span.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        span
    }

    /// The group of the given permutations under `(p·q)(x) = p(q(x))`.
    /// Elements are ordered as first reached from the identity.
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize) -> Result<(Self, Vec<Vec<usize>>)> {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = [(id, 0)].into();
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|x| elems[i][g[x]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let names = (0..elems.len()).map(|k| format!("p{k}")).collect();
        let group = Self::from_fn(names, |a, b| {
            let p: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
            index[&p]
        })?;
        Ok((group, elems))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order() {
            return Err(Error::InvalidGroup("name count".into()));
        }
        self.names = names;
        Ok(self)
    }
}

pub fn trivial() -> FiniteGroup {
    cyclic(1)
}

/// `Z/n` with elements named by residue.
pub fn cyclic(n: usize) -> FiniteGroup {
    let names = (0..n).map(|k| k.to_string()).collect();
    FiniteGroup::from_fn(names, |a, b| (a + b) % n).expect("cyclic group")
}

/// Symmetries of the regular `n`-gon, order `2n`: `r^k` then `s r^k`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let names = (0..2 * n)
        .map(|x| if x < n { format!("r{x}") } else { format!("s{}", x - n) })
        .collect();
    // (f, k) stands for s^f r^k; r^k s = s r^{-k}.
    let split = |x: usize| (x / n, x % n);
    FiniteGroup::from_fn(names, |a, b| {
        let ((fa, ka), (fb, kb)) = (split(a), split(b));
        let k = if fb == 0 { (ka + kb) % n } else { (n - ka + kb) % n };
        ((fa + fb) % 2) * n + k
    })
    .expect("dihedral group")
}

pub fn quaternion() -> FiniteGroup {
    // ±1, ±i, ±j, ±k as (sign, unit) with unit 0..4 = 1, i, j, k.
    let names: Vec<String> = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let unit_mul = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 3) => (0, 1),
            (3, 1) => (0, 2),
            (2, 1) => (1, 3),
            (3, 2) => (1, 1),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    FiniteGroup::from_fn(names, |a, b| {
        let (sa, ua) = (a / 4, a % 4);
        let (sb, ub) = (b / 4, b % 4);
        let (s, u) = unit_mul(ua, ub);
        ((sa + sb + s) % 2) * 4 + u
    })
    .expect("quaternion group")
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let nb = b.order();
    let names = a
        .elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.name(x), b.name(y)))
        .collect();
    FiniteGroup::from_fn(names, |p, q| {
        a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb)
    })
    .expect("direct product")
}

/// Named groups of order at most 8.
pub fn catalog() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("C1", cyclic(1)),
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C2xC2", direct_product(&cyclic(2), &cyclic(2))),
        ("C5", cyclic(5)),
        ("C6", cyclic(6)),
        ("S3", dihedral(3)),
        ("C7", cyclic(7)),
        ("C8", cyclic(8)),
        ("C4xC2", direct_product(&cyclic(4), &cyclic(2))),
        ("C2xC2xC2", direct_product(&direct_product(&cyclic(2), &cyclic(2)), &cyclic(2))),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
    ]
}

pub fn by_name(name: &str) -> Option<FiniteGroup> {
    catalog().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}

/// Extends generator images to a homomorphism if one exists.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut f = vec![NONE; g.order()];
    f[g.identity()] = h.identity();
    let mut queue: VecDeque<usize> = [g.identity()].into();
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = h.mul(f[x], t);
            if f[y] == NONE {
                f[y] = v;
                queue.push_back(y);
            } else if f[y] != v {
                return None;
            }
        }
    }
    let hom = g
        .elements()
        .all(|a| g.elements().all(|b| f[g.mul(a, b)] == h.mul(f[a], f[b])));
    hom.then_some(f)
}

/// All homomorphisms `g → h` as element tables, in lexicographic order of
/// the images of `g.generators()`.
pub fn homomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = g.generators();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let k = g.element_order(s);
            h.elements().filter(|&t| k % h.element_order(t) == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0; gens.len()];
    fn rec(
        t: usize,
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        images: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if t == gens.len() {
            if let Some(f) = extend(g, h, gens, images) {
                out.push(f);
            }
            return;
        }
        for &c in &cands[t] {
            images[t] = c;
            rec(t + 1, g, h, gens, cands, images, out);
        }
    }
    rec(0, g, h, &gens, &cands, &mut images, &mut out);
    out
}

pub fn is_homomorphism(g: &FiniteGroup, h: &FiniteGroup, f: &[usize]) -> bool {
    f.len() == g.order()
        && f.iter().all(|&x| x < h.order())
        && g.elements()
            .all(|a| g.elements().all(|b| f[g.mul(a, b)] == h.mul(f[a], f[b])))
}

/// Automorphisms of `h`, each a permutation of its elements.
pub fn automorphisms(h: &FiniteGroup) -> Vec<Vec<usize>> {
    homomorphisms(h, h)
        .into_iter()
        .filter(|f| {
            let mut seen = vec![false; f.len()];
            f.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
        .collect()
}
