//! Acceptance criteria, one timed line each. Exits nonzero if any criterion
//! fails or runs over its time budget.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kanfib::action::{action_arrow, action_groupoid, free_quotient, strict_2group_action_groupoid, strict_action_groupoid, strictify};
use kanfib::bundle::{find_bundle_isomorphism, pullback, pushforward};
use kanfib::group::cyclic;
use kanfib::groupoid::{find_groupoid_isomorphism, nerve, to_groupoid, FiniteGroupoid};
use kanfib::hom::count_maps;
use kanfib::iso::find_isomorphism;
use kanfib::kan::{check_equivalence, check_fibration, check_hypercover, classify_n_groupoid};
use kanfib::lambda::lambda_extract;
use kanfib::reduction::{check_isotropy_consequences, is_2_isotropy_free, reduce_to_1};
use kanfib::sample::{random_crossed_module, random_groupoid, random_strict_action, LEVEL4_BUDGET};
use kanfib::simplicial::{standard_complex, StandardKind};
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike};
use kanfib::{CrossedModule, FibrationBundle, Functor, SimplicialMap, StrictAction};
use kanfib_cli::{parse, run, serialize};

const SEED: u64 = 0x6b616e;

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn corpus(count: usize) -> Vec<FiniteGroupoid> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_groupoid(&mut rng, 4, 12)).collect()
}

fn actions(count: usize, max_order: usize) -> Vec<StrictAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    (0..count)
        .map(|_| {
            let x = random_groupoid(&mut rng, 3, 8);
            random_strict_action(&mut rng, &x, max_order)
        })
        .collect()
}

fn crossed_modules(count: usize, max_order: usize) -> Vec<CrossedModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    (0..count).map(|_| random_crossed_module(&mut rng, max_order)).collect()
}

/// Composable strings of `n` arrows, counted by extending strings one
/// arrow at a time.
fn strings(g: &FiniteGroupoid, n: usize) -> usize {
    if n == 0 {
        return g.object_count();
    }
    // ending[x] = strings of the current length ending at x.
    let mut ending: Vec<usize> = vec![1; g.object_count()];
    for _ in 0..n {
        let mut next = vec![0; g.object_count()];
        for a in 0..g.arrow_count() {
            next[g.tgt(a)] += ending[g.src(a)];
        }
        ending = next;
    }
    ending.iter().sum()
}

fn hom_law() -> Outcome {
    let gs = corpus(60);
    for (k, g) in gs.iter().enumerate() {
        let nv = nerve(g, 3).set;
        for n in 0..=3 {
            let simplex = standard_complex(StandardKind::Simplex, n, n).map_err(|e| e.to_string())?.set;
            let maps = count_maps(&simplex, &nv).map_err(|e| e.to_string())?;
            check(maps == nv.count(n) && maps == strings(g, n), || {
                format!("groupoid {k}, n = {n}: {maps} maps, {} cells, {} strings", nv.count(n), strings(g, n))
            })?;
        }
    }
    Ok(format!("{} groupoids, n <= 3", gs.len()))
}

fn round_trip() -> Outcome {
    let gs = corpus(60);
    for (k, g) in gs.iter().enumerate() {
        let x = nerve(g, 3).set;
        let back = to_groupoid(&x).map_err(|e| format!("groupoid {k}: {e}"))?;
        check(find_groupoid_isomorphism(&back, g).is_some(), || format!("groupoid {k}: not isomorphic"))?;
        check(find_isomorphism(&nerve(&back, 3).set, &x).is_some(), || format!("groupoid {k}: nerves differ"))?;
    }
    Ok(format!("{} groupoids", gs.len()))
}

fn two_groups() -> Outcome {
    let xms = crossed_modules(24, 8);
    let mut largest = 0;
    for (k, xm) in xms.iter().enumerate() {
        let (g, h) = (xm.g().order(), xm.h().order());
        check(g <= 8 && h <= 8 && g.pow(4) * h.pow(6) <= LEVEL4_BUDGET, || format!("module {k} over budget"))?;
        let z = classifying_2group(&crossed_module_to_grouplike(xm), 4).map_err(|e| e.to_string())?;
        largest = largest.max(z.set.count(4));
        let r = classify_n_groupoid(&z.set, 2);
        check(r.holds(), || format!("module {k} (|H| = {h}, |G| = {g}): {}", r.summary()))?;
    }
    Ok(format!("{} crossed modules, up to {largest} 4-cells", xms.len()))
}

fn fibration_fixtures() -> Outcome {
    let c2 = FiniteGroupoid::from_group(&cyclic(2));
    let groups = [
        ("swap", StrictAction::swap()),
        ("trivial C3 on Pair2", StrictAction::trivial(FiniteGroupoid::pair(2), cyclic(3))),
        ("trivial C2 on C2", StrictAction::trivial(c2.clone(), cyclic(2))),
        ("trivial C2 on a point", StrictAction::trivial(FiniteGroupoid::discrete(1), cyclic(2))),
    ];
    let xms = [("XM0", CrossedModule::xm0()), ("XM1", CrossedModule::xm1()), ("XM2", CrossedModule::xm2())];
    let mut cases: Vec<(String, StrictAction, bool)> =
        groups.into_iter().map(|(n, a)| (n.to_string(), a, false)).collect();
    let xm0_on_c2 = StrictAction::of_crossed_module(
        c2.clone(),
        CrossedModule::xm0(),
        vec![Functor::identity(&c2)],
        vec![vec![0], vec![1]],
    )
    .map_err(|e| e.to_string())?;
    cases.push(("XM0 on C2".into(), xm0_on_c2, true));
    for (n, xm) in xms {
        cases.push((format!("regular {n}"), StrictAction::regular(xm.clone()), true));
        cases.push((format!("trivial {n} on C2"), StrictAction::trivial_2group(c2.clone(), xm.clone()), true));
        cases.push((format!("trivial {n} on Pair2"), StrictAction::trivial_2group(FiniteGroupoid::pair(2), xm), true));
    }
    for (name, a, two) in &cases {
        let b = if *two { strict_2group_action_groupoid(a, 3) } else { strict_action_groupoid(a, 3) }
            .map_err(|e| format!("{name}: {e}"))?;
        let cert = check_fibration(&b.pi, b.n);
        check(cert.holds(), || format!("{name}: {}", cert.summary()))?;
        let fiber = b.fiber().clone();
        check(find_isomorphism(&fiber, &nerve(a.groupoid(), 3).set).is_some(), || {
            format!("{name}: fiber is not the nerve of the groupoid")
        })?;
    }
    Ok(format!("{} actions", cases.len()))
}

fn lambda_round_trip() -> Outcome {
    let acts = actions(24, 4);
    for (k, a) in acts.iter().enumerate() {
        let x = a.groupoid();
        let b = strict_action_groupoid(a, 2).map_err(|e| e.to_string())?;
        let nv = nerve(&action_groupoid(a).map_err(|e| e.to_string())?, 2);
        let edge = |al: usize, g: usize| nv.cell_of(&[action_arrow(a, al, g)]).expect("an edge");
        let d = lambda_extract(&b).map_err(|e| format!("action {k}: {e}"))?;
        let e = a.group().identity();
        for g in a.group().elements() {
            let span = &d.spans[b.pi.apply(1, edge(0, g))];
            for al in 0..x.arrow_count() {
                let (s, t) = (x.src(al), x.tgt(al));
                let found = (|| {
                    let from = span.object_of(edge(x.unit(s), g))?;
                    let to = span.object_of(edge(x.unit(t), g))?;
                    let arrow = span.arrow_over(from, to, d.fiber_arrow(edge(al, e))?)?;
                    Some((d.fiber_cells[0][span.right.objects[from]], span.right.arrows[arrow]))
                })();
                let want = (a.phi(g).objects[s], d.fiber_arrow(edge(a.phi(g).arrows[al], e)));
                check(found.map(|(o, ar)| (o, Some(ar))) == Some(want), || {
                    format!("action {k}, element {g}, arrow {al}: {found:?} against {want:?}")
                })?;
            }
        }
    }
    Ok(format!("{} actions", acts.len()))
}

fn isotropy_injectivity() -> Outcome {
    let xms = crossed_modules(60, 6);
    let mut free = 0;
    for (k, xm) in xms.iter().enumerate() {
        let z = classifying_2group(&crossed_module_to_grouplike(xm), 3).map_err(|e| e.to_string())?.set;
        let f = is_2_isotropy_free(&z);
        let c = check_isotropy_consequences(&z);
        check(c.holds(), || format!("module {k}: {}", c.summary()))?;
        check(f.holds() == xm.is_bnd_injective(), || format!("module {k}: {} but bnd injective = {}", f.summary(), xm.is_bnd_injective()))?;
        free += f.holds() as usize;
    }
    Ok(format!("{} crossed modules, {free} isotropy free, 0 violations", xms.len()))
}

fn reduction() -> Outcome {
    let z = classifying_2group(&crossed_module_to_grouplike(&CrossedModule::xm2()), 3).map_err(|e| e.to_string())?.set;
    let r = reduce_to_1(&z).map_err(|e| e.to_string())?;
    let c2 = FiniteGroupoid::from_group(&cyclic(2));
    check(find_groupoid_isomorphism(&r.groupoid, &c2).is_some(), || "XM2 does not reduce to C2".into())?;
    let h = check_hypercover(&r.map, 2);
    check(h.holds(), || h.summary())?;
    let gs = corpus(50);
    for (k, g) in gs.iter().enumerate() {
        let r = reduce_to_1(&nerve(g, 3).set).map_err(|e| format!("groupoid {k}: {e}"))?;
        check(find_groupoid_isomorphism(&r.groupoid, g).is_some(), || format!("groupoid {k}: reduction differs"))?;
    }
    Ok(format!("XM2 and {} groupoids", gs.len()))
}

fn round_trip_bundle(e: &FibrationBundle, f: &SimplicialMap) -> Result<(), String> {
    let pushed = pushforward(e, f).map_err(|e| e.to_string())?;
    let top = pushed.k.top();
    let back = pullback(&pushed, &f.truncate(top).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let e = e.truncate(top).map_err(|e| e.to_string())?;
    check(find_bundle_isomorphism(&back, &e).is_some(), || "no bundle isomorphism".into())
}

fn pushforward_pullback() -> Outcome {
    let c2 = FiniteGroupoid::from_group(&cyclic(2));
    let e = strict_2group_action_groupoid(&StrictAction::trivial_2group(c2, CrossedModule::xm2()), 3).map_err(|e| e.to_string())?;
    let red = reduce_to_1(&e.base).map_err(|e| e.to_string())?;
    round_trip_bundle(&e, &red.map).map_err(|m| format!("XM2 fixture: {m}"))?;
    let acts = actions(20, 4);
    for (k, a) in acts.iter().enumerate() {
        let e = strict_action_groupoid(a, 3).map_err(|e| e.to_string())?;
        round_trip_bundle(&e, &SimplicialMap::identity(e.base.clone())).map_err(|m| format!("action {k}: {m}"))?;
    }
    Ok(format!("XM2 reduction and {} identity hypercovers", acts.len()))
}

fn strictify_swap() -> Outcome {
    let b = strict_action_groupoid(&StrictAction::swap(), 3).map_err(|e| e.to_string())?;
    let s = strictify(&b).map_err(|e| e.to_string())?;
    check(s.certificate.holds(), || s.certificate.summary())?;
    let eq = check_equivalence(&s.map, 1).map_err(|e| e.to_string())?;
    check(eq.holds(), || eq.summary())?;
    check(s.action.fixed_points().is_empty(), || "strictified action is not free".into())?;
    let q = free_quotient(&s.action, 3).map_err(|e| e.to_string())?;
    check(find_isomorphism(&nerve(&q.groupoid, 3).set, &b.k).is_some(), || "quotient differs from K".into())?;
    // The point with the trivial C2 action strictifies to Pair2.
    let p = strict_action_groupoid(&StrictAction::trivial(FiniteGroupoid::discrete(1), cyclic(2)), 2).map_err(|e| e.to_string())?;
    let sp = strictify(&p).map_err(|e| e.to_string())?;
    check(find_groupoid_isomorphism(&sp.groupoid, &FiniteGroupoid::pair(2)).is_some(), || "point does not strictify to Pair2".into())?;
    Ok(format!("swap: {} objects, {} arrows", s.groupoid.object_count(), s.groupoid.arrow_count()))
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    files.sort();
    files.retain(|p| p.file_name().is_some_and(|n| n != "bad_face.kf"));
    for path in &files {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = parse(&text).map_err(|e| format!("{name}: {e}"))?;
        let runs: Vec<String> = (0..3)
            .map(|_| run(["kanfib", "fmt", name.as_str()]).stdout)
            .collect();
        check(runs.iter().all(|r| *r == runs[0]), || format!("{name}: runs differ"))?;
        check(runs[0] == serialize(&doc) && runs[0] == text, || format!("{name}: not canonical"))?;
        let again = parse(&runs[0]).map_err(|e| format!("{name}: {e}"))?;
        check(again == doc, || format!("{name}: parse of serialize differs"))?;
        check(serialize(&again) == runs[0], || format!("{name}: second serialization differs"))?;
    }
    Ok(format!("{} fixtures, 3 runs each", files.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("hom-set law", 10, hom_law),
        ("1-groupoid round trip", 10, round_trip),
        ("classifying 2-groups are 2-groups", 60, two_groups),
        ("fibration certificates", 30, fibration_fixtures),
        ("lambda round trip", 30, lambda_round_trip),
        ("isotropy freeness and injectivity", 30, isotropy_injectivity),
        ("reduction to 1-groupoids", 30, reduction),
        ("pushforward then pullback", 60, pushforward_pullback),
        ("strictification of the swap action", 30, strictify_swap),
        ("serialization determinism", 5, determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (status, detail) = match &outcome {
            Ok(d) if !over => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name:<36} {:>7.2}s / {budget:>2}s  {detail}", k + 1, took.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
