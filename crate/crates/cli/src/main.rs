use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pnbisim::corpus::{generate, hand_made, Case, Limits};
use pnbisim::engine::oracle::OracleEvidence;
use pnbisim::engine::witness::GameEvidence;
use pnbisim::engine::{decide, decide_interleaving, oracle_game, Flavor, GameConfig, Outcome};
use pnbisim::indexed::reachable_im;
use pnbisim::io::{im_dot, oim_dot, parse_net, reachability_dot, NetDocument};
use pnbisim::ordered::reachable_oim;
use pnbisim::{IndexedMarking, Multiset};

const EXIT_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Fully-concurrent and causal-net bisimilarity for bounded P/T nets.
#[derive(Parser)]
#[command(name = "pnbisim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Equiv {
    /// Fully-concurrent bisimilarity (OIM game).
    Fc,
    /// Causal-net bisimilarity (OIMC game).
    Cn,
    /// Interleaving bisimilarity on the reachability graph.
    Il,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Fc,
    Cn,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Fc => Flavor::Fc,
            FlavorArg::Cn => Flavor::Cn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    /// Collective reachability graph.
    Markings,
    /// Indexed markings.
    Im,
    /// Ordered indexed markings.
    Oim,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two markings of a net are equivalent.
    ///
    /// Exit status: 0 equivalent, 1 not equivalent, 2 unknown, 3 error.
    Check {
        #[arg(long, value_enum)]
        equiv: Equiv,
        /// Fail unless the net is bounded by this many tokens per place.
        #[arg(long)]
        cap: u32,
        /// Write the witness or distinguishing play to this file.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
        /// Fully-concurrent game: alternative reading of the right-hand
        /// deleted-token clause.
        #[arg(long)]
        strict_deleted_clause: bool,
        /// Causal-net game: relate all generated tokens instead of
        /// committing to a pairing (coarser than causal-net bisimilarity).
        #[arg(long)]
        coarse_cn: bool,
        /// Give up with "unknown" after this many seconds.
        #[arg(long, value_name = "SECS")]
        timeout: Option<f64>,
        /// Give up with "unknown" after this many game triples.
        #[arg(long, default_value_t = 2_000_000)]
        max_triples: usize,
        net: PathBuf,
        m1: String,
        m2: String,
    },
    /// Play the process game literally up to a depth.
    ///
    /// Exit status as for `check`.
    Oracle {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long)]
        depth: u32,
        net: PathBuf,
        m1: String,
        m2: String,
    },
    /// Export a state space as Graphviz DOT.
    Explore {
        #[arg(long, value_enum)]
        what: What,
        /// Output file, or `-` for standard output.
        #[arg(long, value_name = "OUT")]
        dot: PathBuf,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        net: PathBuf,
        m: String,
    },
    /// Print the least bound of the marked net, checked up to the cap.
    Bound {
        #[arg(long)]
        cap: u32,
        net: PathBuf,
        m: String,
    },
    /// Cross-check the games against the oracle and each other on a seeded
    /// random corpus.
    ///
    /// Exit status: 0 when everything agrees, 1 otherwise.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Oracle depth.
        #[arg(long, default_value_t = 5)]
        depth: u32,
    },
}

fn load(path: &Path) -> Result<NetDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_net(&text).with_context(|| format!("parsing {}", path.display()))
}

fn marking<'a>(doc: &'a NetDocument, name: &str) -> Result<&'a Multiset> {
    doc.marking(name).ok_or_else(|| {
        let known: Vec<&str> = doc.markings.iter().map(|(n, _)| n.as_str()).collect();
        anyhow!("no marking named `{name}` (declared: {})", known.join(", "))
    })
}

fn exit_for(outcome: Outcome) -> ExitCode {
    ExitCode::from(match outcome {
        Outcome::Equivalent => 0,
        Outcome::NotEquivalent => 1,
        Outcome::Unknown => 2,
    })
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            equiv,
            cap,
            witness,
            strict_deleted_clause,
            coarse_cn,
            timeout,
            max_triples,
            net,
            m1,
            m2,
        } => {
            let doc = load(&net)?;
            let (m1, m2) = (marking(&doc, &m1)?, marking(&doc, &m2)?);
            let flavor = match equiv {
                Equiv::Il => {
                    let v = decide_interleaving(&doc.net, m1, m2, cap)?;
                    println!("{}", v.outcome);
                    if witness.is_some() {
                        log::warn!("interleaving check produces no evidence; nothing written");
                    }
                    return Ok(exit_for(v.outcome));
                }
                Equiv::Fc => Flavor::Fc,
                Equiv::Cn => Flavor::Cn,
            };
            let config = GameConfig {
                strict_deleted_clause,
                coarse_cn_relation: coarse_cn,
                max_triples,
                time_limit: timeout.map(Duration::from_secs_f64),
                ..GameConfig::new(flavor)
            };
            let v = decide(&doc.net, m1, m2, cap, &config)?;
            log::info!("{} triples in {:?}", v.stats.explored, v.stats.elapsed);
            println!("{}", v.outcome);
            if let Some(path) = witness {
                let text = match &v.evidence {
                    Some(GameEvidence::Witness(w)) => w.to_text(&doc.net),
                    Some(GameEvidence::Distinguishing(d)) => d.to_text(&doc.net),
                    None => "unknown: search stopped before a verdict\n".to_string(),
                };
                write_out(&path, &text)?;
            }
            Ok(exit_for(v.outcome))
        }
        Command::Oracle {
            flavor,
            depth,
            net,
            m1,
            m2,
        } => {
            let doc = load(&net)?;
            let v = oracle_game(&doc.net, marking(&doc, &m1)?, marking(&doc, &m2)?, flavor.into(), depth);
            println!("{}", v.outcome);
            match &v.evidence {
                Some(OracleEvidence::Witness(lines)) | Some(OracleEvidence::Distinguishing(lines)) => {
                    for l in lines {
                        println!("  {l}");
                    }
                }
                None => {}
            }
            Ok(exit_for(v.outcome))
        }
        Command::Explore { what, dot, cap, net, m } => {
            let doc = load(&net)?;
            let m = marking(&doc, &m)?;
            let (states, arcs, text) = match what {
                What::Markings => {
                    let r = doc.net.reachable(m, cap)?;
                    (r.graph.len(), r.graph.arcs.len(), reachability_dot(&doc.net, &r))
                }
                What::Im => {
                    let s = reachable_im(&doc.net, &IndexedMarking::initial(m), cap)?;
                    (s.len(), s.arcs.len(), im_dot(&doc.net, &s))
                }
                What::Oim => {
                    let s = reachable_oim(&doc.net, &IndexedMarking::initial(m), cap)?;
                    (s.len(), s.arcs.len(), oim_dot(&doc.net, &s))
                }
            };
            write_out(&dot, &text)?;
            if dot != Path::new("-") {
                println!("{states} states, {arcs} arcs");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { cap, net, m } => {
            let doc = load(&net)?;
            let r = doc.net.reachable(marking(&doc, &m)?, cap)?;
            println!("{}", r.bound);
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus {
            seed,
            count,
            jobs,
            depth,
        } => corpus(seed, count, jobs, depth),
    }
}

struct CaseReport {
    name: String,
    fc: Outcome,
    cn: Outcome,
    il: Outcome,
    oracle_fc: Outcome,
    oracle_cn: Outcome,
    problems: Vec<String>,
}

fn check_case(case: &Case, depth: u32, bound: u32) -> Result<CaseReport> {
    let (net, m1, m2) = (&case.net, &case.m1, &case.m2);
    let fc = decide(net, m1, m2, bound, &GameConfig::new(Flavor::Fc))?.outcome;
    let cn = decide(net, m1, m2, bound, &GameConfig::new(Flavor::Cn))?.outcome;
    let il = decide_interleaving(net, m1, m2, bound)?.outcome;
    let oracle_fc = oracle_game(net, m1, m2, Flavor::Fc, depth).outcome;
    let oracle_cn = oracle_game(net, m1, m2, Flavor::Cn, depth).outcome;
    let mut problems = Vec::new();
    if oracle_fc.is_conclusive() && oracle_fc != fc {
        problems.push(format!("fc game says {fc}, oracle says {oracle_fc}"));
    }
    if oracle_cn.is_conclusive() && oracle_cn != cn {
        problems.push(format!("cn game says {cn}, oracle says {oracle_cn}"));
    }
    if cn == Outcome::Equivalent && fc != Outcome::Equivalent {
        problems.push("cn-equivalent but not fc-equivalent".into());
    }
    if fc == Outcome::Equivalent && il != Outcome::Equivalent {
        problems.push("fc-equivalent but not interleaving-equivalent".into());
    }
    Ok(CaseReport {
        name: case.name.clone(),
        fc,
        cn,
        il,
        oracle_fc,
        oracle_cn,
        problems,
    })
}

fn corpus(seed: u64, count: usize, jobs: usize, depth: u32) -> Result<ExitCode> {
    let limits = Limits::default();
    let mut cases = hand_made();
    cases.extend(generate(seed, count, &limits));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let reports: Vec<Result<CaseReport>> =
        pool.install(|| cases.par_iter().map(|c| check_case(c, depth, limits.bound)).collect());
    let mut bad = 0;
    for r in reports {
        let r = r?;
        println!(
            "{:<22} fc {:<14} cn {:<14} il {:<14} oracle fc {:<14} oracle cn {}",
            r.name, r.fc, r.cn, r.il, r.oracle_fc, r.oracle_cn
        );
        for p in &r.problems {
            println!("  PROBLEM: {p}");
        }
        bad += usize::from(!r.problems.is_empty());
    }
    println!("{} cases, {bad} with problems", cases.len());
    Ok(ExitCode::from(u8::from(bad > 0)))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
