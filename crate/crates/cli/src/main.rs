//! Command-line front end: generators, counting, pruning, extraction,
//! verification, and the bound calculators, wired for reproducible runs.
//! Every run is fully determined by its argument vector and input files.
//!
//! Exit codes: 0 success/holds, 1 not-found/infeasible/violated, 2 usage or
//! input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kpartite::{
    biclique_oracle, chain_inequality_report, emit_certificate, emit_clique_list, emit_edge_list,
    enumerate_r_cliques, extract, extract_with_target, fmt_rat, gen_complete_multipartite,
    gen_gnp, overlay, parse_bipartite, parse_certificate, parse_clique_list, parse_edge_list,
    parse_rat, prune, supersaturation_report, theorem_params, verify_cover, CliqueCounter, Error,
    Rat, TargetOptions,
};

#[derive(Parser)]
#[command(
    name = "kpartite",
    version,
    about = "Extract and verify complete multipartite subgraphs covered by clique sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable report
    Text,
    /// Machine-readable `key=value` lines
    Kv,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a deterministic graph as an edge-list file
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Print k_r(G), the number of r-cliques
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        r: usize,
    },
    /// Enumerate all r-cliques into a clique-list file
    Cliques {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        r: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the consecutive clique-count chain inequality at level s
    Chain {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        s: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Supersaturation margin report at clique order r
    Supersat {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        r: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the co-degree cleaning procedure and write the surviving members
    Prune {
        #[arg(long)]
        cliques: PathBuf,
        #[arg(short, long)]
        n: usize,
        /// Exact rational threshold, e.g. 4/9
        #[arg(long)]
        threshold: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Certified part-size targets and side-condition flags
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        r: usize,
        /// Exact rational, e.g. 69/140
        #[arg(short, long)]
        c: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Extract a covered complete r-partite subgraph and write a certificate
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cliques: PathBuf,
        #[arg(short, long)]
        r: usize,
        /// Guaranteed mode: hypothesis constant as an exact rational
        #[arg(short, long)]
        c: Option<String>,
        /// Targeted mode: balanced part size
        #[arg(long)]
        s: Option<u64>,
        /// Targeted mode: minimum size of the last part
        #[arg(long)]
        t_min: Option<u64>,
        /// Targeted mode: pruning threshold (exact rational, default 0)
        #[arg(long)]
        threshold: Option<String>,
        /// Targeted mode: cap on the harvested left pool
        #[arg(long)]
        max_left: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Check a certificate against the graph and member set
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cliques: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Exhaustive best-biclique scan over a bipartite instance file
    Oracle {
        #[arg(long)]
        bipartite: PathBuf,
        #[arg(short, long)]
        s: usize,
        /// Refuse when C(m, s) exceeds this many subsets
        #[arg(long)]
        cap: Option<u128>,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Seeded G(n, p): SplitMix64 stream, one draw per vertex pair
    Gnp {
        #[arg(long)]
        n: usize,
        /// Probability as an exact rational or decimal string
        #[arg(long)]
        p: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete multipartite graph with consecutive blocks
    Multipartite {
        /// Comma-separated part sizes, e.g. 2,2,20
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Union of a host graph with an embedded planted graph
    Overlay {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        planted: PathBuf,
        /// Comma-separated images: planted vertex i maps to map[i]
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Verdict-bearing parameters take `p/q` only; decimal strings are refused.
fn parse_verdict_rat(text: &str) -> Result<Rat, Error> {
    if text.contains('.') {
        return Err(Error::invalid(format!(
            "verdict-bearing parameter `{text}` must be an exact rational p/q"
        )));
    }
    parse_rat(text)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, content: &str) -> Result<(), Error> {
    std::fs::write(path, content)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad list entry `{t}`")))
        })
        .collect()
}

fn tuple_str(tuple: &[u32]) -> String {
    tuple
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

struct Report {
    format: Format,
}

impl Report {
    fn line(&self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Text => println!("{key}: {value}"),
            Format::Kv => println!("{key}={value}"),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Gen { what } => {
            let (graph, out) = match what {
                GenCmd::Gnp { n, p, seed, out } => (gen_gnp(n, &parse_rat(&p)?, seed)?, out),
                GenCmd::Multipartite { sizes, out } => {
                    (gen_complete_multipartite(&parse_usize_list(&sizes)?)?, out)
                }
                GenCmd::Overlay {
                    host,
                    planted,
                    map,
                    out,
                } => {
                    let host = parse_edge_list(&read(&host)?)?;
                    let planted = parse_edge_list(&read(&planted)?)?;
                    let map: Vec<u32> = parse_usize_list(&map)?
                        .into_iter()
                        .map(|v| v as u32)
                        .collect();
                    (overlay(&host, &planted, &map)?, out)
                }
            };
            write(&out, &emit_edge_list(&graph))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Count { graph, r } => {
            if r == 0 {
                return Err(Error::invalid("clique arity must be >= 1"));
            }
            let g = parse_edge_list(&read(&graph)?)?;
            let mut counter = CliqueCounter::new(&g);
            println!("{}", counter.count(r));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cliques { graph, r, out } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let list = enumerate_r_cliques(&g, r)?;
            write(&out, &emit_clique_list(&list))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Chain { graph, s, format } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let rep = chain_inequality_report(&g, s)?;
            let out = Report {
                format: format.format,
            };
            out.line("s", rep.s);
            out.line("n", rep.n);
            out.line("k_prev", rep.k_prev);
            out.line("k_s", rep.k_s);
            out.line("k_next", rep.k_next);
            out.line("lhs", fmt_rat(&rep.lhs));
            out.line("rhs", fmt_rat(&rep.rhs));
            out.line("holds", rep.holds);
            Ok(if rep.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Supersat { graph, r, format } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let rep = supersaturation_report(&g, r)?;
            let out = Report {
                format: format.format,
            };
            out.line("r", rep.r);
            out.line("n", rep.n);
            out.line("edges", rep.edges);
            out.line("c", fmt_rat(&rep.c));
            out.line("applicable", rep.applicable);
            if rep.applicable {
                out.line("claimed_bound", fmt_rat(&rep.claimed_bound));
                out.line("k_next", rep.k_next);
                out.line("margin", fmt_rat(&rep.margin));
                out.line("claim_holds", rep.claim_holds);
                if let Some(s) = rep.implied_s {
                    out.line("implied_s", s);
                }
                if let Some(t) = rep.implied_t_min {
                    out.line("implied_t_min", t);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Prune {
            cliques,
            n,
            threshold,
            out,
            format,
        } => {
            let m = parse_clique_list(&read(&cliques)?)?;
            let threshold = parse_verdict_rat(&threshold)?;
            let result = prune(&m, n, &threshold)?;
            write(&out, &emit_clique_list(&result.kept))?;
            let rep = Report {
                format: format.format,
            };
            rep.line("input", m.len());
            rep.line("kept", result.kept.len());
            rep.line("removed", result.removed_total());
            rep.line("threshold", fmt_rat(&result.threshold));
            rep.line("rounds", result.rounds.len());
            for (i, (trigger, removed)) in result.rounds.iter().enumerate() {
                match format.format {
                    Format::Text => {
                        println!("round {}: trigger {} removed {removed}", i + 1, tuple_str(trigger))
                    }
                    Format::Kv => println!(
                        "round={} trigger={} removed={removed}",
                        i + 1,
                        trigger
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bounds { n, r, c, format } => {
            let c = parse_verdict_rat(&c)?;
            let params = theorem_params(n, r, &c)?;
            let out = Report {
                format: format.format,
            };
            out.line("n", params.n);
            out.line("r", params.r);
            out.line("c", fmt_rat(&params.c));
            out.line("s", params.s);
            out.line("t_min", params.t_min);
            out.line("feasible", params.feasible);
            for lp in &params.levels {
                match format.format {
                    Format::Text => println!(
                        "level {}: c {} s {} t_min {} left_m {} c_lower {} c_upper {} s_vs_m {} truncation {}",
                        lp.level,
                        fmt_rat(&lp.c),
                        lp.s,
                        lp.t_min,
                        lp.left_m,
                        lp.c_lower_ok,
                        lp.c_upper_ok,
                        lp.s_vs_m_ok,
                        lp.truncation_ok
                    ),
                    Format::Kv => println!(
                        "level={} c={} s={} t_min={} left_m={} c_lower={} c_upper={} s_vs_m={} truncation={}",
                        lp.level,
                        fmt_rat(&lp.c),
                        lp.s,
                        lp.t_min,
                        lp.left_m,
                        lp.c_lower_ok,
                        lp.c_upper_ok,
                        lp.s_vs_m_ok,
                        lp.truncation_ok
                    ),
                }
            }
            for reason in &params.infeasibilities {
                match format.format {
                    Format::Text => println!("infeasible: {reason}"),
                    Format::Kv => println!("infeasible={reason}"),
                }
            }
            Ok(if params.feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Extract {
            graph,
            cliques,
            r,
            c,
            s,
            t_min,
            threshold,
            max_left,
            out,
            format,
        } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let m = parse_clique_list(&read(&cliques)?)?;
            let cert = match (c, s, t_min) {
                (Some(c), None, None) => {
                    if threshold.is_some() || max_left.is_some() {
                        return Err(Error::invalid(
                            "--threshold/--max-left apply to targeted mode only",
                        ));
                    }
                    extract(&g, &m, r, &parse_verdict_rat(&c)?)?
                }
                (None, Some(s), Some(t_min)) => {
                    let opts = TargetOptions {
                        threshold: threshold.as_deref().map(parse_verdict_rat).transpose()?,
                        max_left,
                    };
                    extract_with_target(&g, &m, r, s, t_min, &opts)?
                }
                _ => {
                    return Err(Error::invalid(
                        "pass either -c (guaranteed) or both --s and --t-min (targeted)",
                    ))
                }
            };
            write(&out, &emit_certificate(&cert))?;
            let rep = Report {
                format: format.format,
            };
            rep.line("r", cert.r);
            rep.line("s", cert.s);
            rep.line("t", cert.t);
            rep.line("members", cert.members.len());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            graph,
            cliques,
            cert,
            format,
        } => {
            let g = parse_edge_list(&read(&graph)?)?;
            let m = parse_clique_list(&read(&cliques)?)?;
            let cert = parse_certificate(&read(&cert)?)?;
            let rep = verify_cover(&g, &m, &cert);
            let out = Report {
                format: format.format,
            };
            out.line("parts_ok", rep.parts_ok);
            out.line("completeness_ok", rep.completeness_ok);
            out.line("edges_in_k2m_ok", rep.edges_in_k2m_ok);
            out.line("members_ok", rep.members_ok);
            out.line("sizes_ok", rep.sizes_ok);
            out.line("all_ok", rep.all_ok());
            Ok(if rep.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Oracle {
            bipartite,
            s,
            cap,
            format,
        } => {
            let f = parse_bipartite(&read(&bipartite)?)?;
            let w = biclique_oracle(&f, s, cap)?;
            let out = Report {
                format: format.format,
            };
            out.line("t", w.t);
            out.line(
                "left",
                w.left
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.line(
                "right",
                w.right
                    .iter_ones()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotFound { .. } | Error::Infeasible(_) | Error::SearchFailure { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
