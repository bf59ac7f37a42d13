//! `evc`: command-line front end for the eternal vertex cover toolkit.
//!
//! Exit status is 0 on success (a NO answer is a success), 1 when a
//! computation fails, and 2 on usage errors. `--json` switches every verb to
//! a single JSON document on stdout. `EVC_BUDGET` bounds the exact solvers.

mod generate;
mod play;

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use evc_core::cobip::{
    all_small_cobipartite, check_closure, evc_cobip, find_sides, mvc_cobip, normalize, parse_sides, CobipDefender,
    CobipInstance,
};
use evc_core::game::{evc_exact, format_trace, safe_set, simulate, Budget, RandomAttacker, Verdict};
use evc_core::graph::{classify, diameter, is_vertex_cover, mvc_branch_and_bound, parse_graph, two_matching_cover, Graph};
use evc_core::reduction::{
    build_reduction, check_nice_closure, extract_dominating_set, extract_from_config, load_artifact,
    preprocess_rbds, rbds_oracle, verify_instance, Artifact, CheckStatus, Preprocessed, RbdsInstance,
    ReducedInstance, Variant,
};

#[derive(Parser)]
#[command(name = "evc", version, about = "Eternal vertex cover toolkit")]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimum vertex cover.
    Mvc { graph: PathBuf },
    /// Eternal vertex cover number.
    #[command(subcommand)]
    Evc(EvcCmd),
    /// Guards on both endpoints of a maximum matching.
    Approx2 { graph: PathBuf },
    /// Build a reduced instance.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Check a stored artifact.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Read a dominating set off a reduced instance.
    ExtractDomset {
        graph: PathBuf,
        sidecar: PathBuf,
        /// Winning guard positions to read from (space separated ids).
        /// Without it the exact solver is run at `ell`.
        #[arg(long)]
        config: Option<String>,
    },
    /// Exhaustive strategy checks.
    #[command(subcommand)]
    Strategy(StrategyCmd),
    /// Seeded random instances.
    Gen(generate::GenArgs),
    /// Interactive attack/defend loop on stdin.
    Play(play::PlayArgs),
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory for trace files.
        #[arg(long, default_value = "traces")]
        dir: PathBuf,
    },
    /// Bipartite, split and cobipartite membership.
    Classify { graph: PathBuf },
}

#[derive(Subcommand)]
enum EvcCmd {
    /// Exact solver with the win profile for every tried guard count.
    Exact {
        graph: PathBuf,
        /// Stop the search at this many guards.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Closed form for cobipartite graphs.
    Cobip {
        graph: PathBuf,
        /// `side <id> A|B` lines; defaults to lines in the graph file, then
        /// to a coloring of the complement.
        #[arg(long)]
        sides: Option<PathBuf>,
        /// Play this many random attacks against the strategy and print the trace.
        #[arg(long, default_value_t = 0)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Red-blue dominating set instance (JSON) to a graph plus sidecar.
    Rbds {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Bipartite)]
        variant: VariantArg,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Re-run the structural checks on a stored reduced instance.
    Reduction { graph: PathBuf, sidecar: PathBuf },
}

#[derive(Subcommand)]
enum StrategyCmd {
    /// Defend every edge from every position of the strategy.
    #[command(subcommand)]
    Check(CheckTarget),
}

#[derive(Subcommand)]
enum CheckTarget {
    /// Cobipartite strategies, on one graph or on every small instance.
    Cobip {
        graph: Option<PathBuf>,
        #[arg(long)]
        sides: Option<PathBuf>,
        /// Enumerate all instances with at most this many vertices.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Nice-cover case machine on a reduced instance.
    Nice {
        /// Red-blue dominating set instance (JSON).
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Bipartite)]
        variant: VariantArg,
        /// 1-based reds of a dominating set; found by brute force if absent.
        #[arg(long, value_delimiter = ',')]
        dom: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Bipartite,
    Split,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Bipartite => Variant::Bipartite,
            VariantArg::Split => Variant::Split,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd, cli.json) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_rbds(path: &Path) -> Result<RbdsInstance> {
    RbdsInstance::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn set_ids(g: &Graph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    let mut ids: Vec<String> = set.into_iter().map(|v| g.id(v).to_string()).collect();
    ids.sort_unstable();
    ids
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    } else {
        print!("{text}");
    }
}

fn run(cmd: Cmd, json: bool) -> Result<()> {
    let budget = Budget::from_env();
    match cmd {
        Cmd::Mvc { graph } => {
            let g = load_graph(&graph)?;
            let r = mvc_branch_and_bound(&g);
            let cover = set_ids(&g, &r.witness);
            emit(
                json,
                json!({ "mvc": r.size, "cover": cover }),
                format!("mvc={}\ncover: {}\n", r.size, cover.join(" ")),
            );
        }
        Cmd::Evc(EvcCmd::Exact { graph, k_max }) => evc_exact_cmd(&load_graph(&graph)?, k_max, &budget, json)?,
        Cmd::Evc(EvcCmd::Cobip {
            graph,
            sides,
            rounds,
            seed,
        }) => evc_cobip_cmd(&graph, sides.as_deref(), rounds, seed, json)?,
        Cmd::Approx2 { graph } => {
            let g = load_graph(&graph)?;
            let cover = two_matching_cover(&g);
            let m = cover.len() / 2;
            let ids = set_ids(&g, &cover);
            emit(
                json,
                json!({ "matching": m, "guards": cover.len(), "config": ids, "lower": m, "upper": cover.len() }),
                format!(
                    "guards={}\nconfig: {}\nbounds: {m} <= mvc <= evc <= {}\n",
                    cover.len(),
                    ids.join(" "),
                    cover.len()
                ),
            );
        }
        Cmd::Reduce(ReduceCmd::Rbds { input, variant, out }) => reduce_cmd(&input, variant.into(), &out, &budget, json)?,
        Cmd::Verify(VerifyCmd::Reduction { graph, sidecar }) => {
            let ri = load_artifact(&read(&graph)?, &read(&sidecar)?).context("loading artifact")?;
            let ok = report_checks(&ri, &budget, json);
            if !ok {
                bail!("verification failed");
            }
        }
        Cmd::ExtractDomset { graph, sidecar, config } => {
            let ri = load_artifact(&read(&graph)?, &read(&sidecar)?).context("loading artifact")?;
            extract_cmd(&ri, config.as_deref(), &budget, json)?
        }
        Cmd::Strategy(StrategyCmd::Check(target)) => strategy_check(target, &budget, json)?,
        Cmd::Gen(args) => generate::run(&args)?,
        Cmd::Play(args) => play::run(&args, &budget)?,
        Cmd::Serve { addr, dir } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(evc_session::serve(addr, dir, budget))?;
        }
        Cmd::Classify { graph } => {
            let g = load_graph(&graph)?;
            let c = classify(&g);
            let d = diameter(&g);
            emit(
                json,
                json!({
                    "n": g.n(),
                    "m": g.m(),
                    "connected": g.is_connected(),
                    "bipartite": c.bipartite,
                    "split": c.split,
                    "cobipartite": c.cobipartite,
                    "diameter": d.to_string(),
                }),
                format!(
                    "n={} m={}\nconnected={}\nbipartite={}\nsplit={}\ncobipartite={}\ndiameter={d}\n",
                    g.n(),
                    g.m(),
                    g.is_connected(),
                    c.bipartite,
                    c.split,
                    c.cobipartite
                ),
            );
        }
    }
    Ok(())
}

fn evc_exact_cmd(g: &Graph, k_max: Option<usize>, budget: &Budget, json: bool) -> Result<()> {
    let r = evc_exact(g, k_max, budget)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let profile: serde_json::Map<String, Value> = r
        .win_profile
        .iter()
        .map(|(k, win)| (k.to_string(), json!(win)))
        .collect();
    let mut text = match r.evc {
        Some(evc) => format!("evc={evc}\n"),
        None => "evc=unknown\n".to_string(),
    };
    text.push_str(&format!("mvc={}\n", r.mvc));
    for (k, win) in &r.win_profile {
        text.push_str(&format!("k={k} {}\n", if *win { "win" } else { "lose" }));
    }
    if let Some(s) = &r.safe_set {
        text.push_str(&format!("safe configurations at evc: {}\n", s.len()));
    }
    emit(
        json,
        json!({
            "evc": r.evc,
            "mvc": r.mvc,
            "win_profile": profile,
            "safe_configs": r.safe_set.as_ref().map(|s| s.len()),
            "warnings": r.warnings,
        }),
        text,
    );
    Ok(())
}

fn load_cobip(graph: &Path, sides: Option<&Path>) -> Result<CobipInstance> {
    let text = read(graph)?;
    let g = parse_graph(&text).with_context(|| format!("parsing {}", graph.display()))?;
    let side_text = match sides {
        Some(p) => read(p)?,
        None => text,
    };
    let (mut a, mut b) = parse_sides(&g, &side_text)?;
    if a.is_empty() && b.is_empty() {
        (a, b) = find_sides(&g)?;
    }
    Ok(normalize(&g, &a, &b)?)
}

fn evc_cobip_cmd(graph: &Path, sides: Option<&Path>, rounds: usize, seed: u64, json: bool) -> Result<()> {
    let inst = load_cobip(graph, sides)?;
    let (value, branch) = evc_cobip(&inst)?;
    let mvc = mvc_cobip(&inst)?;
    let mut text = format!("evc={value}\nbranch={branch}\np={} q={}\nmvc={mvc}\n", inst.p(), inst.q());
    let mut trace = Vec::new();
    if rounds > 0 && inst.g.m() > 0 {
        let g = inst.g.clone();
        let mut defender = CobipDefender::new(Arc::new(inst.clone()))?;
        let out = simulate(&g, value, &mut defender, &mut RandomAttacker::new(seed), rounds)?;
        if let Verdict::Lost { round, edge } = out.verdict {
            bail!("strategy lost in round {round} on {}", g.format_edge(edge));
        }
        text.push_str(&format!("initial: {}\n", g.format_set(&out.initial)));
        text.push_str(&format_trace(&g, &out.trace));
        trace = out.trace.iter().map(|r| r.event(&g)).collect();
    }
    emit(
        json,
        json!({
            "evc": value,
            "branch": branch.to_string(),
            "p": inst.p(),
            "q": inst.q(),
            "mvc": mvc,
            "side_a": set_ids(&inst.g, &inst.side_a),
            "side_b": set_ids(&inst.g, &inst.side_b),
            "trace": trace,
        }),
        text,
    );
    Ok(())
}

fn report_checks(ri: &ReducedInstance, budget: &Budget, json: bool) -> bool {
    let report = verify_instance(ri, budget);
    let mut text = String::new();
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Passed => "PASS",
            CheckStatus::Failed => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        text.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
    }
    emit(
        json,
        json!({ "passed": report.passed(), "ell": ri.ell, "variant": ri.variant, "checks": report.checks }),
        format!("ell={} variant={}\n{text}", ri.ell, ri.variant),
    );
    report.passed()
}

fn reduce_cmd(input: &Path, variant: Variant, out: &Path, budget: &Budget, json: bool) -> Result<()> {
    let inst = load_rbds(input)?;
    let norm = match preprocess_rbds(&inst)? {
        Preprocessed::Normalized(n) => n,
        trivial => {
            let (yes, why) = match trivial {
                Preprocessed::TrivialYes(why) => (true, why),
                Preprocessed::TrivialNo(why) => (false, why),
                Preprocessed::Normalized(_) => unreachable!(),
            };
            emit(
                json,
                json!({ "trivial": true, "answer": yes, "reason": why }),
                format!("trivial instance, answer {}: {why}\n", if yes { "YES" } else { "NO" }),
            );
            return Ok(());
        }
    };
    let ri = build_reduction(&norm, variant)?;
    for w in &ri.warnings {
        eprintln!("warning: {w}");
    }
    let art = Artifact::new(&ri);
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let graph_path = out.join(format!("{stem}.{variant}.graph"));
    let sidecar_path = out.join(format!("{stem}.{variant}.json"));
    fs::write(&graph_path, &art.graph)?;
    fs::write(&sidecar_path, art.sidecar_json())?;
    if !json {
        println!("wrote {}", graph_path.display());
        println!("wrote {}", sidecar_path.display());
        println!("n={} m={}", ri.h.n(), ri.h.m());
    }
    if !report_checks(&ri, budget, json) {
        bail!("verification failed");
    }
    Ok(())
}

fn extract_cmd(ri: &ReducedInstance, config: Option<&str>, budget: &Budget, json: bool) -> Result<()> {
    let dom = match config {
        Some(text) => {
            let c = ri.h.parse_set(text)?;
            if c.len() != ri.ell || !is_vertex_cover(&ri.h, &c) {
                bail!("configuration is not a vertex cover of size ell = {}", ri.ell);
            }
            Some(extract_from_config(ri, &c)?)
        }
        None => {
            let s = safe_set(&ri.h, ri.ell, budget)?;
            if s.is_empty() {
                None
            } else {
                Some(extract_dominating_set(ri, &s)?)
            }
        }
    };
    let reds: Option<Vec<String>> = dom
        .as_ref()
        .map(|d| d.iter().map(|&q| ri.source.reds[q - 1].clone()).collect());
    let text = match &reds {
        Some(r) => format!("answer=YES\ndominating set: {}\n", r.join(" ")),
        None => format!("answer=NO\nno winning position with {} guards\n", ri.ell),
    };
    emit(json, json!({ "answer": dom.is_some(), "reds": reds, "positions": dom }), text);
    Ok(())
}

fn strategy_check(target: CheckTarget, budget: &Budget, json: bool) -> Result<()> {
    match target {
        CheckTarget::Cobip { graph, sides, max_n } => {
            let instances: Vec<CobipInstance> = match graph {
                Some(p) => vec![load_cobip(&p, sides.as_deref())?],
                None => all_small_cobipartite(max_n).collect(),
            };
            let mut pairs = 0;
            for inst in &instances {
                pairs += check_closure(inst)
                    .with_context(|| format!("instance with p={} q={}", inst.p(), inst.q()))?;
            }
            emit(
                json,
                json!({ "instances": instances.len(), "pairs": pairs, "failures": 0 }),
                format!("{} instances, {pairs} (template, edge) pairs, all closed\n", instances.len()),
            );
        }
        CheckTarget::Nice { input, variant, dom } => {
            let inst = load_rbds(&input)?;
            let Preprocessed::Normalized(norm) = preprocess_rbds(&inst)? else {
                bail!("instance is resolved by preprocessing; nothing to reduce");
            };
            let dom = match dom {
                Some(d) => d,
                None => match rbds_oracle(&norm, budget)? {
                    Some(d) => d,
                    None => {
                        emit(
                            json,
                            json!({ "answer": false, "pairs": 0, "failures": [] }),
                            "answer=NO, no nice covers to check\n".into(),
                        );
                        return Ok(());
                    }
                },
            };
            let ri = build_reduction(&norm, variant.into())?;
            let report = check_nice_closure(&ri, &dom)?;
            let mut text = format!("{} (nice cover, edge) pairs, {} failures\n", report.checked, report.failures.len());
            for f in &report.failures {
                text.push_str(&format!("  {f}\n"));
            }
            emit(
                json,
                json!({ "answer": true, "dom": dom, "pairs": report.checked, "failures": report.failures }),
                text,
            );
            if !report.failures.is_empty() {
                bail!("{} failures", report.failures.len());
            }
        }
    }
    Ok(())
}
