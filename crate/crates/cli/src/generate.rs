use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};

use evc_core::gen::{random_cobipartite, random_connected_graph, random_graph, random_rbds};
use evc_core::graph::serialize_graph;

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Item `i` is generated from `seed + i`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    count: usize,
    /// Write one file per item here instead of printing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// G(n, p) graphs.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Add a random spanning tree first.
        #[arg(long)]
        connected: bool,
    },
    /// Red-blue dominating set instances; every blue gets a red neighbour.
    Rbds {
        #[arg(long)]
        reds: usize,
        #[arg(long)]
        blues: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long)]
        k: usize,
    },
    /// Two cliques with random cross edges, with `side` lines.
    Cobip {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
}

fn item(kind: &GenKind, seed: u64) -> (String, &'static str) {
    match *kind {
        GenKind::Graph { n, density, connected } => {
            let g = if connected {
                random_connected_graph(n, density, seed)
            } else {
                random_graph(n, density, seed)
            };
            (serialize_graph(&g), "graph")
        }
        GenKind::Rbds {
            reds,
            blues,
            density,
            k,
        } => (random_rbds(reds, blues, density, k, seed).to_json() + "\n", "json"),
        GenKind::Cobip { p, q, density } => {
            let inst = random_cobipartite(p, q, density, seed);
            (serialize_graph(&inst.g) + &inst.sides_text(), "graph")
        }
    }
}

pub fn run(args: &GenArgs) -> Result<()> {
    let (GenKind::Graph { density, .. } | GenKind::Rbds { density, .. } | GenKind::Cobip { density, .. }) = args.kind;
    if !(0.0..=1.0).contains(&density) {
        bail!("density must lie in [0, 1]");
    }
    let name = match args.kind {
        GenKind::Graph { .. } => "graph",
        GenKind::Rbds { .. } => "rbds",
        GenKind::Cobip { .. } => "cobip",
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
    }
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i as u64);
        let (text, ext) = item(&args.kind, seed);
        match &args.out {
            Some(dir) => fs::write(dir.join(format!("{name}-{i:03}.{ext}")), text)?,
            None if ext == "json" => print!("{text}"),
            None => print!("# {name} {i} seed {seed}\n{text}"),
        }
    }
    Ok(())
}
