//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use evc_core::cobip::{
    all_small_cobipartite, analyze, defend_cobip, evc_cobip, template_family, Branch, CobipDefender,
    CobipInstance,
};
use evc_core::game::{
    evc_exact, is_legal_transition, simulate, Budget, Config, Defender, RandomAttacker, Verdict,
};
use evc_core::gen::{random_cobipartite, random_graph, random_rbds};
use evc_core::graph::{is_vertex_cover, Edge, Graph, VertexSet};
use evc_core::reduction::{
    build_reduction, check_connected_cover, classify_cover, defend_nice, nice_cover_families,
    preprocess_rbds, rbds_oracle, verify_instance, CheckStatus, NiceDefender, Preprocessed,
    RbdsInstance, Variant,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn report(name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    println!(
        "{} {name}: {} [{:.1}s]",
        if out.pass { "PASS" } else { "FAIL" },
        out.detail,
        start.elapsed().as_secs_f64()
    );
    out.pass
}

fn main() {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: Vec<Criterion> = vec![
        ("bounds", bounds),
        ("clique-law", clique_law),
        ("cobip-oracle", cobip_oracle),
        ("reduction-equivalence-bipartite", || reduction_equivalence(Variant::Bipartite)),
        ("reduction-equivalence-split", || reduction_equivalence(Variant::Split)),
        ("structural-claims", structural_claims),
        ("case-machine-closure", case_machine_closure),
        ("legal-move-oracle", legal_move_oracle),
        ("endurance-cobip", endurance_cobip),
        ("endurance-nice", endurance_nice),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        if !report(name, run) {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn connected(n: usize, adj: &[u32]) -> bool {
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == (1 << n) - 1
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// One representative per isomorphism class of connected graphs on `n` vertices.
fn connected_graphs(n: usize) -> Vec<Graph> {
    let ps = pairs(n);
    let perms = permutations(n);
    let index = |u: usize, v: usize| ps.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    let relabel: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| ps.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << ps.len() {
        let mut adj = vec![0u32; n];
        for (bit, &(u, v)) in ps.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        if !connected(n, &adj) {
            continue;
        }
        let canon = relabel
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask >> bit & 1 == 1)
                    .fold(0u32, |m, (_, &to)| m | 1 << to)
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges: Vec<(usize, usize)> = ps
                .iter()
                .enumerate()
                .filter(|&(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(Graph::from_pairs(n, &edges).unwrap());
        }
    }
    out
}

fn bounds() -> Outcome {
    let graphs: Vec<Graph> = (1..=6).flat_map(connected_graphs).collect();
    let budget = Budget::default();
    let bad: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let r = evc_exact(g, None, &budget).ok()?;
            match r.evc {
                Some(e) if r.mvc <= e && e <= 2 * r.mvc => None,
                other => Some(format!("{:?}: mvc {} evc {other:?}", g.edges(), r.mvc)),
            }
        })
        .collect();
    Outcome {
        pass: bad.is_empty() && graphs.len() == 143,
        detail: format!(
            "{} connected graphs on <= 6 vertices up to isomorphism, {} violations of mvc <= evc <= 2 mvc{}",
            graphs.len(),
            bad.len(),
            bad.first().map(|b| format!("; first {b}")).unwrap_or_default()
        ),
    }
}

fn clique_law() -> Outcome {
    let mut got = Vec::new();
    for q in 2..=6 {
        let g = Graph::from_pairs(q, &pairs(q)).unwrap();
        got.push((q, evc_exact(&g, None, &Budget::default()).unwrap().evc));
    }
    Outcome {
        pass: got.iter().all(|&(q, e)| e == Some(q - 1)),
        detail: format!(
            "evc(K_q) for q = 2..6: {}",
            got.iter()
                .map(|(q, e)| format!("{q}->{}", e.map_or("?".into(), |e| e.to_string())))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    }
}

fn cobip_oracle() -> Outcome {
    let start = Instant::now();
    let corpus: Vec<CobipInstance> = all_small_cobipartite(7).collect();
    let budget = Budget::default();
    let bad: Vec<String> = corpus
        .par_iter()
        .filter_map(|inst| {
            let (value, branch) = evc_cobip(inst).unwrap();
            let exact = evc_exact(&inst.g, None, &budget).unwrap();
            (exact.evc != Some(value)).then(|| {
                format!("p={} q={} {branch}: formula {value} exact {:?}", inst.p(), inst.q(), exact.evc)
            })
        })
        .collect();
    let elapsed = start.elapsed();
    Outcome {
        pass: bad.is_empty() && elapsed <= Duration::from_secs(600),
        detail: format!(
            "{} instances, {} mismatches{}",
            corpus.len(),
            bad.len(),
            bad.first().map(|b| format!("; first {b}")).unwrap_or_default()
        ),
    }
}

fn rbds(r: usize, b: usize, edges: &[(usize, usize)], k: usize) -> RbdsInstance {
    RbdsInstance {
        reds: (1..=r).map(|i| format!("r{i}")).collect(),
        blues: (1..=b).map(|i| format!("b{i}")).collect(),
        edges: edges.iter().map(|&(p, q)| (format!("r{p}"), format!("b{q}"))).collect(),
        k,
    }
}

fn reduction_equivalence(variant: Variant) -> Outcome {
    let mut cases = Vec::new();
    for r in 1..=3 {
        let all: Vec<(usize, usize)> = (1..=r).flat_map(|p| (1..=2).map(move |q| (p, q))).collect();
        for mask in 0u32..1 << all.len() {
            let edges: Vec<(usize, usize)> = all
                .iter()
                .enumerate()
                .filter(|&(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if let Preprocessed::Normalized(n) = preprocess_rbds(&rbds(r, 2, &edges, 1)).unwrap() {
                cases.push(n);
            }
        }
    }
    let budget = Budget::default();
    let results: Vec<(bool, bool, Duration, String)> = cases
        .par_iter()
        .map(|inst| {
            let oracle = rbds_oracle(inst, &budget).unwrap().is_some();
            let ri = build_reduction(inst, variant).unwrap();
            let start = Instant::now();
            let res = evc_exact(&ri.h, Some(ri.ell), &budget).unwrap();
            let game = res.evc.is_some_and(|e| e <= ri.ell);
            let desc = format!("r={} edges {:?}: oracle {oracle}, evc {:?}", inst.r(), inst.edges, res.evc);
            (oracle, game, start.elapsed(), desc)
        })
        .collect();
    let mismatches: Vec<&String> = results.iter().filter(|r| r.0 != r.1).map(|r| &r.3).collect();
    let slowest = results.iter().map(|r| r.2).max().unwrap_or_default();
    let yes = results.iter().filter(|r| r.0).count();
    Outcome {
        pass: mismatches.is_empty() && slowest <= Duration::from_secs(30),
        detail: format!(
            "{variant}: {} instances ({yes} yes), {} mismatches, slowest solve {:.2}s{}",
            results.len(),
            mismatches.len(),
            slowest.as_secs_f64(),
            mismatches.first().map(|m| format!("; first {m}")).unwrap_or_default()
        ),
    }
}

fn structural_claims() -> Outcome {
    let budget = Budget::default();
    let mut jobs = Vec::new();
    for b in 2..=4 {
        for r in 1..=6 {
            for k in 1..b {
                for seed in 0..2 {
                    for variant in [Variant::Bipartite, Variant::Split] {
                        jobs.push((r, b, k, seed, variant));
                    }
                }
            }
        }
    }
    let results: Vec<(bool, String)> = jobs
        .par_iter()
        .filter_map(|&(r, b, k, seed, variant)| {
            let inst = random_rbds(r, b, 0.4, k, seed * 100 + (r * 10 + b) as u64);
            let Preprocessed::Normalized(n) = preprocess_rbds(&inst).unwrap() else {
                return None;
            };
            let ri = build_reduction(&n, variant).unwrap();
            let rep = verify_instance(&ri, &budget);
            let mut ok = rep.checks.iter().all(|c| c.status != CheckStatus::Failed);
            let wanted: &[&str] = match variant {
                Variant::Bipartite => &["vertex_count", "mvc", "bipartite", "diameter"],
                Variant::Split => &["vertex_count", "mvc", "split"],
            };
            ok &= wanted
                .iter()
                .all(|w| rep.get(w).is_some_and(|c| c.status == CheckStatus::Passed));
            if b == 2 {
                ok &= rep
                    .get("covers_contain_core")
                    .is_some_and(|c| c.status == CheckStatus::Passed);
            }
            let failed: Vec<String> = rep
                .checks
                .iter()
                .filter(|c| c.status != CheckStatus::Passed)
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            Some((ok, format!("r={r} b={b} k={k} {variant}: {}", failed.join("; "))))
        })
        .collect();
    let bad: Vec<&String> = results.iter().filter(|r| !r.0).map(|r| &r.1).collect();
    Outcome {
        pass: bad.is_empty() && !results.is_empty(),
        detail: format!(
            "{} builds with b <= 4, r <= 6 (vertex count, mvc = b+1, bipartite with diameter <= 6 / split, \
             small covers contain B and star for b = 2), {} failures{}",
            results.len(),
            bad.len(),
            bad.first().map(|m| format!("; first {m}")).unwrap_or_default()
        ),
    }
}

fn case_machine_closure() -> Outcome {
    let inst = rbds(
        4,
        3,
        &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 1), (4, 3), (3, 3)],
        2,
    );
    let dom = [1, 2];
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for variant in [Variant::Bipartite, Variant::Split] {
        let Preprocessed::Normalized(n) = preprocess_rbds(&inst).unwrap() else {
            return Outcome {
                pass: false,
                detail: "instance did not survive preprocessing".into(),
            };
        };
        let ri = build_reduction(&n, variant).unwrap();
        for nc in nice_cover_families(&ri, &dom).unwrap() {
            let c = nc.materialize(&ri);
            let was_connected = check_connected_cover(&ri, &c);
            for &e in ri.h.edges() {
                checked += 1;
                let label = format!("{variant} {} on {}", nc.label(&ri), ri.h.format_edge(e));
                let mv = match defend_nice(&ri, &nc, e) {
                    Ok(mv) => mv,
                    Err(err) => {
                        bad.push(format!("{label}: {err}"));
                        continue;
                    }
                };
                let next = mv.next.materialize(&ri);
                let legal = mv.plan.check(&ri.h, &c, e).is_ok_and(|t| t == next)
                    && is_legal_transition(&ri.h, &c, &next, e).unwrap().is_some();
                let nice = classify_cover(&ri, &dom, &next).as_ref() == Some(&mv.next);
                let conn = !was_connected || check_connected_cover(&ri, &next);
                if !(legal && nice && conn) {
                    bad.push(format!("{label}: legal {legal} nice {nice} connected {conn}"));
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && checked > 0,
        detail: format!(
            "r=4 b=3 k=2, both variants: {checked} (nice cover, edge) pairs, {} failures{}",
            bad.len(),
            bad.first().map(|m| format!("; first {m}")).unwrap_or_default()
        ),
    }
}

/// Tries every bijection from `from` onto `to`.
fn brute_legal(g: &Graph, from: &Config, to: &Config, e: Edge) -> bool {
    let src = from.to_vec();
    let dst = to.to_vec();
    permutations(dst.len()).iter().any(|p| {
        let pairs: Vec<(usize, usize)> = src.iter().zip(p).map(|(&a, &i)| (a, dst[i])).collect();
        pairs.iter().all(|&(a, b)| g.closed_neighborhood(a).contains(b))
            && pairs.iter().any(|&(a, b)| (a, b) == (e.0, e.1) || (a, b) == (e.1, e.0))
    })
}

fn legal_move_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tuples = 0;
    let mut legal = 0;
    let mut bad = Vec::new();
    while tuples < 5000 {
        let n = rng.random_range(2..=9);
        let g = random_graph(n, rng.random_range(0.2..0.8), rng.random());
        if g.m() == 0 {
            continue;
        }
        let size = rng.random_range(1..=n.min(5));
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut rng);
        let from: VertexSet = verts[..size].iter().copied().collect();
        let to: VertexSet = if rng.random_bool(0.5) {
            verts.shuffle(&mut rng);
            verts[..size].iter().copied().collect()
        } else {
            // nudge a few guards to neighbours so that legal moves are common
            let mut to = VertexSet::new();
            for v in &from {
                let nb = g.neighbors(v);
                let w = if !nb.is_empty() && rng.random_bool(0.5) {
                    nb[rng.random_range(0..nb.len())]
                } else {
                    v
                };
                if !to.insert(w) {
                    to.insert(v);
                }
            }
            if to.len() != size {
                continue;
            }
            to
        };
        let e = g.edges()[rng.random_range(0..g.m())];
        let fast = is_legal_transition(&g, &from, &to, e).unwrap();
        if let Some(plan) = &fast {
            if plan.check(&g, &from, e).ok() != Some(to.clone()) {
                bad.push(format!("plan does not check: {:?} -> {:?} on {e:?}", from, to));
            }
        }
        let slow = brute_legal(&g, &from, &to, e);
        if fast.is_some() != slow {
            bad.push(format!("{:?}: {from:?} -> {to:?} on {e:?}", g.edges()));
        }
        tuples += 1;
        legal += usize::from(slow);
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{tuples} random tuples with |c| <= 5 ({legal} legal), {} mismatches{}",
            bad.len(),
            bad.first().map(|m| format!("; first {m}")).unwrap_or_default()
        ),
    }
}

const ATTACKS: usize = 10_000;
const PER_BRANCH: usize = 50;

/// Random instances bucketed by branch until every bucket holds
/// `PER_BRANCH`. Branches with few distinct graphs repeat instances; those
/// repeats run against different attack seeds.
fn sample_cobip() -> BTreeMap<Branch, Vec<CobipInstance>> {
    let mut buckets: BTreeMap<Branch, Vec<CobipInstance>> = BTreeMap::new();
    let densities = [0.03, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0u64..2_000_000 {
        if buckets.len() == Branch::ALL.len() && buckets.values().all(|v| v.len() >= PER_BRANCH) {
            break;
        }
        let p = rng.random_range(0..=6);
        let q = rng.random_range(p.max(1)..=8);
        let d = densities[rng.random_range(0..densities.len())];
        let inst = random_cobipartite(p, q, d, seed);
        let branch = evc_cobip(&inst).unwrap().1;
        let bucket = buckets.entry(branch).or_default();
        if bucket.len() < PER_BRANCH {
            bucket.push(inst);
        }
    }
    buckets
}

fn endurance_cobip() -> Outcome {
    let buckets = sample_cobip();
    let jobs: Vec<(Branch, usize, &CobipInstance)> = buckets
        .iter()
        .flat_map(|(&b, v)| v.iter().enumerate().map(move |(i, inst)| (b, i, inst)))
        .collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(branch, i, inst)| {
            let an = analyze(inst).unwrap();
            let family = template_family(inst, &an);
            if family.is_empty() {
                return Some(format!("{branch} #{i}: empty template family"));
            }
            if !family.iter().all(|t| is_vertex_cover(&inst.g, &t.materialize(inst))) {
                return Some(format!("{branch} #{i}: template is not a cover"));
            }
            if inst.g.m() == 0 {
                return None;
            }
            let inst = Arc::new(inst.clone());
            let mut d = CobipDefender::new(inst.clone()).unwrap();
            let k = d.guards();
            let mut att = RandomAttacker::new(1000 * i as u64 + branch as u64);
            match simulate(&inst.g, k, &mut d as &mut dyn Defender, &mut att, ATTACKS) {
                Ok(out) if out.verdict == (Verdict::Survived { rounds: ATTACKS }) => {
                    let ct = d.template();
                    let e = inst.g.edges()[0];
                    defend_cobip(&inst, &an, ct, e)
                        .err()
                        .map(|err| format!("{branch} #{i}: {err}"))
                }
                Ok(out) => Some(format!("{branch} #{i}: {:?}", out.verdict)),
                Err(err) => Some(format!("{branch} #{i}: round {} {}", err.round, err.source)),
            }
        })
        .collect();
    let short: Vec<String> = Branch::ALL
        .iter()
        .filter(|b| buckets.get(b).map_or(0, Vec::len) < PER_BRANCH)
        .map(|b| b.to_string())
        .collect();
    Outcome {
        pass: bad.is_empty() && short.is_empty(),
        detail: format!(
            "{} branches x {PER_BRANCH} instances x {ATTACKS} seeded random attacks, {} losses{}{}",
            buckets.len(),
            bad.len(),
            bad.first().map(|m| format!("; first {m}")).unwrap_or_default(),
            if short.is_empty() { String::new() } else { format!("; under-sampled {}", short.join(",")) }
        ),
    }
}

fn endurance_nice() -> Outcome {
    let budget = Budget::default();
    let mut failures = Vec::new();
    let mut total = 0;
    for variant in [Variant::Bipartite, Variant::Split] {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let mut picked = Vec::new();
        let mut seed = 0u64;
        while picked.len() < PER_BRANCH {
            seed += 1;
            let b = rng.random_range(2..=4);
            let r = rng.random_range(2..=6);
            let k = rng.random_range(1..b);
            let inst = random_rbds(r, b, rng.random_range(0.2..0.6), k, seed);
            let Preprocessed::Normalized(n) = preprocess_rbds(&inst).unwrap() else {
                continue;
            };
            if let Some(dom) = rbds_oracle(&n, &budget).unwrap() {
                picked.push((n, dom, seed));
            }
        }
        total += picked.len();
        let bad: Vec<String> = picked
            .par_iter()
            .filter_map(|(n, dom, seed)| {
                let ri = Arc::new(build_reduction(n, variant).unwrap());
                let mut d = NiceDefender::new(ri.clone(), dom).unwrap();
                let mut att = RandomAttacker::new(*seed);
                match simulate(&ri.h, ri.ell, &mut d as &mut dyn Defender, &mut att, ATTACKS) {
                    Ok(out) if out.verdict == (Verdict::Survived { rounds: ATTACKS }) => None,
                    Ok(out) => Some(format!("{variant} seed {seed}: {:?}", out.verdict)),
                    Err(err) => Some(format!("{variant} seed {seed}: round {} {}", err.round, err.source)),
                }
            })
            .collect();
        failures.extend(bad);
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{total} yes instances over both variants x {ATTACKS} seeded random attacks, {} losses{}",
            failures.len(),
            failures.first().map(|m| format!("; first {m}")).unwrap_or_default()
        ),
    }
}
