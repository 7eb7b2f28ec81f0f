use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dtw1_core::cycles::{cycle_hypergraph, enumerate_cycles};
use dtw1_core::decomp::{dbd_to_hbd, dtd_to_dbd, dtd_to_ghd, validate_dbd, validate_dtd, Report};
use dtw1_core::digraph::Digraph;
use dtw1_core::dtw1::{recognize_dtw1, verify_certificate, Certificate};
use dtw1_core::format::{
    digraph_hash, parse_certificate, parse_decomposition, parse_edge_list, parse_hypergraph, write_certificate, write_cycles,
    write_decomposition, write_hypergraph, write_play, write_strategy, Decomposition, NamedDigraph, CERTIFICATE_HEADER,
};
use dtw1_core::games::{check_strategy, solve_game, strategy_from_dbd};
use dtw1_core::hypergraph::{dual, Hypergraph};
use dtw1_core::suite::{hypertree_characterisations, run_all, SuiteConfig};

#[derive(Parser)]
#[command(name = "dtw1", version, about = "Recognise and certify digraphs of directed treewidth one")]
struct Cli {
    /// Cap on the number of directed cycles enumerated per digraph.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Dbd,
    Hbd,
    Ghd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide dtw = 1 and print a YES or NO certificate.
    Recognize { digraph: PathBuf },
    /// Check a certificate against its digraph.
    VerifyCert { digraph: PathBuf, certificate: PathBuf },
    /// Enumerate the directed cycles of a digraph.
    Cycles {
        digraph: PathBuf,
        /// Print one `c` line per cycle.
        #[arg(long)]
        dump_cycles: bool,
    },
    /// Hypertree tests on a hypergraph, or on the cycle hypergraph of a digraph.
    Hypergraph {
        input: PathBuf,
        /// Read a digraph edge list and use its cycle hypergraph.
        #[arg(long)]
        from_digraph: bool,
        /// Print the dual hypergraph.
        #[arg(long)]
        dual: bool,
    },
    /// Validate a directed tree decomposition.
    ValidateDtd {
        digraph: PathBuf,
        decomposition: PathBuf,
        /// Fail unless the width is at most this.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Validate a directed branch decomposition.
    ValidateDbd {
        digraph: PathBuf,
        decomposition: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Convert a dtd to a dbd or ghd, or a dbd to an hbd.
    Convert {
        digraph: PathBuf,
        decomposition: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Play the cops-and-robber game with a fixed number of cops, or with
    /// the strategy of a directed branch decomposition.
    Game {
        digraph: PathBuf,
        #[arg(long, required_unless_present = "dbd")]
        cops: Option<usize>,
        #[arg(long, conflicts_with = "cops")]
        dbd: Option<PathBuf>,
        /// Also print the strategy table.
        #[arg(long)]
        strategy: bool,
    },
    /// Run acceptance criteria 1 to 11.
    Suite,
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn field(&mut self, key: &str, value: impl std::fmt::Display) {
        let line = match self.format {
            Format::Text => format!("{}: {value}\n", key.replace('_', " ")),
            Format::Structured => format!("{key}={value}\n"),
        };
        self.text.push_str(&line);
    }

    fn block(&mut self, body: &str) {
        self.text.push_str(body);
    }

    fn report(&mut self, r: &Report) {
        self.field("valid", r.valid);
        self.field("width", r.width);
        for v in &r.violations {
            self.field("violation", v);
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_digraph(path: &Path) -> Result<NamedDigraph> {
    parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A decomposition file, or a YES certificate standing in for its dtd.
fn read_decomposition(path: &Path) -> Result<Decomposition> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    if text.lines().any(|l| l.trim() == CERTIFICATE_HEADER) {
        return match parse_certificate(&text).with_context(ctx)?.certificate {
            Certificate::Yes(dtd) => Ok(Decomposition::Dtd(dtd)),
            Certificate::No(_) => bail!("{} is a NO certificate and holds no decomposition", path.display()),
        };
    }
    parse_decomposition(&text).with_context(ctx)
}

/// Comment lines mapping dense ids back to names, when they differ.
fn name_map(nd: &NamedDigraph) -> String {
    if nd.names.iter().enumerate().all(|(i, s)| *s == i.to_string()) {
        return String::new();
    }
    nd.names.iter().enumerate().map(|(i, s)| format!("# vertex {i} = {s}\n")).collect()
}

fn require_strong(d: &Digraph) -> Result<()> {
    if d.n() < 2 || !d.is_strongly_connected() {
        bail!("the digraph must be strongly connected with at least two vertices");
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8> {
    let cap = cli.cap as usize;
    match &cli.cmd {
        Cmd::Recognize { digraph } => {
            let nd = read_digraph(digraph)?;
            require_strong(&nd.digraph)?;
            let cert = recognize_dtw1(&nd.digraph, cap)?;
            // the certificate carries the verdict; keep the output a valid certificate file
            out.block(&name_map(&nd));
            out.block(&write_certificate(&nd.digraph, &cert));
            Ok(if cert.is_yes() { 0 } else { 1 })
        }
        Cmd::VerifyCert { digraph, certificate } => {
            let nd = read_digraph(digraph)?;
            let parsed = parse_certificate(&read(certificate)?).with_context(|| format!("parsing {}", certificate.display()))?;
            let hash = digraph_hash(&nd.digraph);
            if parsed.digraph_hash != hash {
                bail!("certificate is for digraph {}, input hashes to {hash}", parsed.digraph_hash);
            }
            let verdict = verify_certificate(&nd.digraph, &parsed.certificate);
            out.field("verdict", if parsed.certificate.is_yes() { "YES" } else { "NO" });
            out.field("sound", verdict.is_ok());
            if let Err(e) = &verdict {
                out.field("reason", e);
            }
            Ok(if verdict.is_ok() { 0 } else { 1 })
        }
        Cmd::Cycles { digraph, dump_cycles } => {
            let nd = read_digraph(digraph)?;
            let cycles = enumerate_cycles(&nd.digraph, cap)?;
            out.block(&name_map(&nd));
            out.field("vertices", nd.digraph.n());
            out.field("edges", nd.digraph.edge_count());
            out.field("cycles", cycles.len());
            if *dump_cycles {
                out.block(&write_cycles(&cycles));
            }
            Ok(0)
        }
        Cmd::Hypergraph { input, from_digraph, dual: print_dual } => {
            let h: Hypergraph = if *from_digraph {
                let nd = read_digraph(input)?;
                out.block(&name_map(&nd));
                cycle_hypergraph(&nd.digraph, cap)?.hypergraph()
            } else {
                parse_hypergraph(&read(input)?).with_context(|| format!("parsing {}", input.display()))?.hypergraph
            };
            let [witness, helly, conformal, acyclic, hw1] = hypertree_characterisations(&h)?;
            out.field("vertices", h.vertices.len());
            out.field("hyperedges", h.edges.len());
            out.field("hypertree", witness);
            out.field("helly_and_chordal_line_graph", helly);
            out.field("dual_conformal_and_chordal", conformal);
            out.field("dual_alpha_acyclic", acyclic);
            out.field("dual_hypertree_width_one", hw1);
            if *print_dual {
                out.block(&write_hypergraph(&dual(&h)));
            }
            Ok(0)
        }
        Cmd::ValidateDtd { digraph, decomposition, bound } => {
            let nd = read_digraph(digraph)?;
            let Decomposition::Dtd(dec) = read_decomposition(decomposition)? else {
                bail!("{} is not a dtd", decomposition.display());
            };
            let r = validate_dtd(&nd.digraph, &dec);
            out.report(&r);
            Ok(if r.valid && bound.is_none_or(|b| r.width <= b) { 0 } else { 1 })
        }
        Cmd::ValidateDbd { digraph, decomposition, bound } => {
            let nd = read_digraph(digraph)?;
            let Decomposition::Dbd(dec) = read_decomposition(decomposition)? else {
                bail!("{} is not a dbd", decomposition.display());
            };
            let r = validate_dbd(&nd.digraph, &dec, bound.unwrap_or(usize::MAX), cap)?;
            out.report(&r);
            Ok(if r.valid { 0 } else { 1 })
        }
        Cmd::Convert { digraph, decomposition, to } => {
            let nd = read_digraph(digraph)?;
            let d = &nd.digraph;
            let converted = match (read_decomposition(decomposition)?, to) {
                (Decomposition::Dtd(dec), Target::Dbd) => Decomposition::Dbd(dtd_to_dbd(d, &dec, cap)?),
                (Decomposition::Dtd(dec), Target::Ghd) => {
                    let (h, ghd) = dtd_to_ghd(d, &dec, cap)?;
                    out.block(&comment(&write_hypergraph(&h)));
                    Decomposition::Ghd(ghd)
                }
                (Decomposition::Dbd(dec), Target::Hbd) => {
                    let (h, hbd) = dbd_to_hbd(d, &dec, cap)?;
                    out.block(&comment(&write_hypergraph(&h)));
                    Decomposition::Hbd(hbd)
                }
                _ => bail!("supported conversions: dtd to dbd, dtd to ghd, dbd to hbd"),
            };
            out.block(&write_decomposition(&converted));
            Ok(0)
        }
        Cmd::Game { digraph, cops, dbd, strategy } => {
            let nd = read_digraph(digraph)?;
            let d = &nd.digraph;
            let plan = match (cops, dbd) {
                (Some(k), _) => {
                    let solution = solve_game(d, *k)?;
                    out.field("cops", k);
                    out.field("cops_win", solution.cops_win);
                    solution.strategy
                }
                (None, Some(path)) => {
                    let Decomposition::Dbd(dec) = read_decomposition(path)? else {
                        bail!("{} is not a dbd", path.display());
                    };
                    let s = strategy_from_dbd(d, &dec)?;
                    out.field("budget", s.budget);
                    Some(s)
                }
                (None, None) => unreachable!("clap requires --cops or --dbd"),
            };
            let Some(plan) = plan else { return Ok(1) };
            let outcome = check_strategy(d, &plan);
            out.block(&name_map(&nd));
            out.field("strategy_wins", outcome.cops_win);
            out.field("max_cops", outcome.max_cops);
            if let Some(f) = &outcome.failure {
                out.field("failure", f);
            }
            if *strategy {
                out.block(&write_strategy(&plan));
            }
            out.block(&write_play(&outcome.play));
            Ok(if outcome.cops_win { 0 } else { 1 })
        }
        Cmd::Suite => {
            let reports = run_all(SuiteConfig { seed: cli.seed, cap });
            for r in &reports {
                out.block(&format!("{r}\n"));
                for note in &r.notes {
                    out.block(&format!("    note: {note}\n"));
                }
                for f in &r.failures {
                    out.block(&format!("    failure: {f}\n"));
                }
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            out.field("criteria_passed", format!("{passed}/{}", reports.len()));
            Ok(if passed == reports.len() { 0 } else { 1 })
        }
    }
}

fn comment(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, text: String::new() };
    let format = match cli.format {
        Format::Text => "text",
        Format::Structured => "structured",
    };
    println!("# dtw1 {} seed={} cap={} format={format}", env!("CARGO_PKG_VERSION"), cli.seed, cli.cap);
    match run(&cli, &mut out) {
        Ok(code) => {
            print!("{}", out.text);
            log::debug!("exit code {code}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
