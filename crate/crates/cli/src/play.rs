use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};

use evc_core::game::Budget;
use evc_core::reduction::{RbdsInstance, Variant};
use evc_session::{CreateRequest, DefenderSource, Mode, RoundResult, Session, SessionError, Status};

#[derive(Args)]
pub struct PlayArgs {
    /// Graph file; not needed with `--rbds`.
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Source::Exact)]
    source: Source,
    /// You defend and the engine attacks.
    #[arg(long)]
    defend: bool,
    #[arg(long)]
    k: Option<usize>,
    /// Red-blue dominating set instance for `--source reduction-nice`.
    #[arg(long)]
    rbds: Option<PathBuf>,
    #[arg(long, default_value = "bipartite")]
    variant: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the trace here on exit.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Exact,
    AllButOne,
    Cobipartite,
    ReductionNice,
}

const HELP: &str = "commands:
  attack U V          attack edge U-V (engine defends)
  defend F>T [F>T..]  move guards against the announced attack
  show                board state
  trace               moves so far
  quit
";

fn request(args: &PlayArgs) -> Result<CreateRequest> {
    let graph = args.graph.as_ref().map(fs::read_to_string).transpose().context("reading graph")?;
    let rbds = args
        .rbds
        .as_ref()
        .map(|p| -> Result<RbdsInstance> { Ok(RbdsInstance::from_json(&fs::read_to_string(p)?)?) })
        .transpose()?;
    Ok(CreateRequest {
        graph,
        k: args.k,
        mode: if args.defend { Mode::HumanDefender } else { Mode::HumanAttacker },
        defender_source: match args.source {
            Source::Exact => DefenderSource::Exact,
            Source::AllButOne => DefenderSource::AllButOne,
            Source::Cobipartite => DefenderSource::Cobipartite,
            Source::ReductionNice => DefenderSource::ReductionNice,
        },
        seed: args.seed,
        sides: None,
        rbds,
        variant: Some(args.variant.parse::<Variant>().map_err(anyhow::Error::msg)?),
        dom: None,
    })
}

fn show(s: &Session, out: &mut impl Write) -> io::Result<()> {
    let v = s.view();
    writeln!(out, "k={} round={} status={}", v.k, v.round, status(v.status))?;
    writeln!(out, "guards: {}", v.config.join(" "))?;
    if let Some((a, b)) = &v.pending_attack {
        writeln!(out, "attack on {a}-{b}")?;
    }
    Ok(())
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Live => "live",
        Status::DefenderLost => "defender-lost",
        Status::Closed => "closed",
    }
}

fn round(r: &RoundResult, out: &mut impl Write) -> io::Result<()> {
    match &r.event {
        Some(e) => {
            let moves: Vec<String> = e.moves.iter().map(|(f, t)| format!("{f}>{t}")).collect();
            write!(out, "round {}: {}-{} answered by {}", e.round, e.attacked.0, e.attacked.1, moves.join(" "))?;
            match &e.annotation {
                Some(a) => writeln!(out, " [{a}]")?,
                None => writeln!(out)?,
            }
        }
        None => writeln!(out, "no legal defense")?,
    }
    writeln!(out, "guards: {}", r.config.join(" "))?;
    if r.status != Status::Live {
        writeln!(out, "status: {}", status(r.status))?;
    }
    if let Some((a, b)) = &r.pending_attack {
        writeln!(out, "attack on {a}-{b}")?;
    }
    Ok(())
}

fn step(s: &mut Session, line: &str) -> Result<RoundResult, SessionError> {
    let words: Vec<&str> = line.split_whitespace().collect();
    match words.as_slice() {
        ["attack" | "a", u, v] => s.attack(u, v),
        ["defend" | "d", moves @ ..] => {
            let moves = moves
                .iter()
                .map(|m| {
                    m.split_once('>')
                        .map(|(f, t)| (f.to_string(), t.to_string()))
                        .ok_or_else(|| SessionError::BadRequest(format!("expected FROM>TO, got `{m}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            s.defend(&moves)
        }
        _ => Err(SessionError::BadRequest(format!("unknown command `{line}`"))),
    }
}

pub fn run(args: &PlayArgs, budget: &Budget) -> Result<()> {
    let req = request(args)?;
    let mut session = Session::create("repl".into(), &req, budget).map_err(|e| anyhow::anyhow!("{e}"))?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    show(&session, &mut out)?;
    for line in io::stdin().lock().lines() {
        let line = line?;
        let line = line.trim();
        match line {
            "" => continue,
            "quit" | "q" | "exit" => break,
            "help" | "?" => write!(out, "{HELP}")?,
            "show" => show(&session, &mut out)?,
            "trace" => write!(out, "{}", session.trace_text())?,
            _ => match step(&mut session, line) {
                Ok(r) => round(&r, &mut out)?,
                Err(e) => writeln!(out, "error [{}]: {e}", e.code())?,
            },
        }
        out.flush()?;
    }
    if let Some(path) = &args.trace {
        fs::write(path, session.trace_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
