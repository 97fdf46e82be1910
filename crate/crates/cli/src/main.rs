//! `mwpf` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use mwpf_core::codes::{generate_code, CodeKind, WeightPolicy};
use mwpf_core::io::{self, Metadata, ProblemFile};
use mwpf_core::parity::brute_force_mwpf;
use mwpf_core::sampler::sample_syndromes;
use mwpf_core::{decode, verify_certificate, DecoderConfig, DecodingHypergraph, Error, FinderKind, Syndrome, Weight};

const EXIT_PARSE: u8 = 3;
const EXIT_SOLVE: u8 = 4;
const EXIT_VERIFY: u8 = 5;
const THREADS_VAR: &str = "MWPF_THREADS";

#[derive(Parser)]
#[command(name = "mwpf", version, about = "Certifying minimum-weight parity factor decoder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a syndrome and write a certificate
    Decode {
        problem: PathBuf,
        #[command(flatten)]
        syndrome: SyndromeArgs,
        /// cluster limit: a count or `inf`
        #[arg(long = "c", default_value = "inf", value_parser = parse_limit)]
        limit: Limit,
        /// comma separated relaxer finders
        #[arg(long, default_value = "single-hair", value_parser = parse_finders)]
        finders: Finders,
        /// stop after the search stage
        #[arg(long)]
        search_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force minimum-weight parity factor
    Oracle {
        problem: PathBuf,
        #[command(flatten)]
        syndrome: SyndromeArgs,
        /// largest null-space dimension to enumerate
        #[arg(long, default_value_t = 20)]
        cap: usize,
    },
    /// Check a certificate against its problem
    Verify {
        problem: PathBuf,
        certificate: PathBuf,
        #[command(flatten)]
        syndrome: SyndromeArgs,
    },
    /// Generate a code-capacity problem file
    Gen {
        #[arg(value_parser = parse_kind)]
        kind: CodeKind,
        #[arg(long)]
        d: usize,
        /// error rate; edge weights become ln((1-p)/p) unless --uniform
        #[arg(long, value_parser = parse_weight)]
        p: Option<Weight>,
        /// unit weights for every edge
        #[arg(long)]
        uniform: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode sampled shots for several cluster limits and tabulate
    Bench {
        problem: PathBuf,
        #[arg(long, value_parser = parse_weight)]
        p: Weight,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// comma separated cluster limits, `inf` allowed
        #[arg(long = "c", default_value = "0,inf", value_delimiter = ',', value_parser = parse_limit)]
        limits: Vec<Limit>,
        #[arg(long, default_value = "single-hair", value_parser = parse_finders)]
        finders: Finders,
        /// oracle null-space cap; shots above it are not scored
        #[arg(long, default_value_t = 20)]
        cap: usize,
        /// worker threads; defaults to $MWPF_THREADS or the core count
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(clap::Args)]
#[group(multiple = false)]
struct SyndromeArgs {
    /// defect ids such as `v3,v5` or `3,5`
    #[arg(long)]
    syndrome: Option<String>,
    /// file holding defect ids as a JSON list or comma separated text
    #[arg(long)]
    syndrome_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct Limit(Option<usize>);

#[derive(Debug, Clone)]
struct Finders(Vec<FinderKind>);

fn parse_limit(s: &str) -> Result<Limit, String> {
    match s.trim() {
        "inf" | "none" | "unbounded" => Ok(Limit(None)),
        n => n
            .parse()
            .map(|c| Limit(Some(c)))
            .map_err(|_| format!("bad cluster limit `{s}`")),
    }
}

fn parse_finders(s: &str) -> Result<Finders, String> {
    FinderKind::parse_list(s).map(Finders).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<CodeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Limit {
    fn label(self) -> String {
        self.0.map_or("inf".into(), |c| c.to_string())
    }
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MalformedRational(_)
            | Error::ProbabilityOutOfRange(_)
            | Error::EmptyEdge(_)
            | Error::VertexOutOfRange { .. }
            | Error::DuplicateVertex { .. }
            | Error::NegativeWeight { .. }
            | Error::InvalidVertex(_)
            | Error::InvalidEdge(_)
            | Error::MalformedSubgraph(_)
            | Error::Parse(_) => EXIT_PARSE,
            _ => EXIT_SOLVE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_problem(path: &Path) -> Result<(DecodingHypergraph, Option<Syndrome>), Failure> {
    Ok(io::parse_problem(&read(path)?)?)
}

/// The syndrome from the flags, falling back to the one in the problem file.
fn resolve_syndrome(
    graph: &DecodingHypergraph,
    embedded: Option<Syndrome>,
    args: &SyndromeArgs,
) -> Result<Syndrome, Failure> {
    let ids = match (&args.syndrome, &args.syndrome_file) {
        (Some(text), _) => io::parse_vertex_list(text)?,
        (None, Some(path)) => {
            let text = read(path)?;
            let trimmed = text.trim();
            if trimmed.starts_with('[') {
                serde_json::from_str(trimmed).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?
            } else {
                io::parse_vertex_list(trimmed)?
            }
        }
        (None, None) => {
            return embedded.ok_or_else(|| Failure {
                code: 2,
                message: "no syndrome given and none in the problem file".into(),
            })
        }
    };
    Ok(Syndrome::checked(graph, ids)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decode {
            problem,
            syndrome,
            limit,
            finders,
            search_only,
            out,
        } => {
            let (graph, embedded) = load_problem(&problem)?;
            let syndrome = resolve_syndrome(&graph, embedded, &syndrome)?;
            let mut config = DecoderConfig::default().with_limit(limit.0);
            config.finders = finders.0;
            if search_only {
                config.stage = mwpf_core::Stage::SearchOnly;
            }
            let cert = decode(&graph, &syndrome, &config)?;
            eprintln!(
                "weight {} dual {} gap {} certified {}",
                cert.primal_weight, cert.dual_objective, cert.gap, cert.certified_optimal
            );
            write_or_print(out.as_deref(), &io::serialize_certificate(&cert))
        }
        Command::Oracle { problem, syndrome, cap } => {
            let (graph, embedded) = load_problem(&problem)?;
            let syndrome = resolve_syndrome(&graph, embedded, &syndrome)?;
            let pre = mwpf_core::hypergraph::preprocess_negative_weights(&graph, &syndrome);
            let (pattern, weight) = brute_force_mwpf(&pre.graph, &pre.syndrome, cap)?;
            let pattern = pre.postprocess(&pattern);
            let value = serde_json::json!({
                "pattern": pattern.edges(),
                "weight": weight + &pre.offset,
            });
            write_or_print(None, &io::to_text(&value))
        }
        Command::Verify {
            problem,
            certificate,
            syndrome,
        } => {
            let (graph, embedded) = load_problem(&problem)?;
            let syndrome = resolve_syndrome(&graph, embedded, &syndrome)?;
            let cert = io::parse_certificate(&read(&certificate)?, &graph)?;
            let report = verify_certificate(&graph, &syndrome, &cert);
            if report.is_ok() {
                println!(
                    "ok: weight {} gap {} certified {}",
                    cert.primal_weight, cert.gap, cert.certified_optimal
                );
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_VERIFY,
                    message: report.to_string(),
                })
            }
        }
        Command::Gen {
            kind,
            d,
            p,
            uniform,
            out,
        } => {
            let policy = match (&p, uniform) {
                (Some(p), false) => WeightPolicy::Probability(p.clone()),
                _ => WeightPolicy::Uniform(Weight::one()),
            };
            let graph = generate_code(kind, d, &policy)?;
            let metadata = Metadata {
                code: Some(kind.name().into()),
                distance: Some(d),
                p,
            };
            write_or_print(
                out.as_deref(),
                &io::to_text(&ProblemFile::from_graph(&graph, None, Some(metadata))),
            )
        }
        Command::Bench {
            problem,
            p,
            shots,
            seed,
            limits,
            finders,
            cap,
            threads,
        } => {
            let (graph, _) = load_problem(&problem)?;
            let threads = threads.or_else(threads_from_env).unwrap_or_else(default_threads).max(1);
            let table = bench(&graph, &p, shots, seed, &limits, &finders.0, cap, threads)?;
            print!("{table}");
            Ok(())
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.parse().ok()
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct ShotResult {
    micros: f64,
    weight: Weight,
    gap: Weight,
    certified: bool,
}

/// Decodes `shots[i]` for `i ≡ worker (mod threads)`; results come back in
/// shot order.
fn decode_all(
    graph: &DecodingHypergraph,
    shots: &[Syndrome],
    config: &DecoderConfig,
    threads: usize,
) -> Result<Vec<ShotResult>, Error> {
    let mut slots: Vec<Option<Result<ShotResult, Error>>> = (0..shots.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    (w..shots.len())
                        .step_by(threads)
                        .map(|i| {
                            let start = Instant::now();
                            let result = decode(graph, &shots[i], config).map(|cert| ShotResult {
                                micros: start.elapsed().as_secs_f64() * 1e6,
                                weight: cert.primal_weight,
                                gap: cert.gap,
                                certified: cert.certified_optimal,
                            });
                            (i, result)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for worker in workers {
            for (i, result) in worker.join().expect("decode worker panicked") {
                slots[i] = Some(result);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every shot decoded")).collect()
}

#[allow(clippy::too_many_arguments)]
fn bench(
    graph: &DecodingHypergraph,
    p: &Weight,
    shots: usize,
    seed: u64,
    limits: &[Limit],
    finders: &[FinderKind],
    cap: usize,
    threads: usize,
) -> Result<String, Failure> {
    let syndromes: Vec<Syndrome> = sample_syndromes(graph, p, shots, seed)?
        .into_iter()
        .map(|s| s.syndrome)
        .collect();
    let optima: Vec<Option<Weight>> = syndromes
        .iter()
        .map(|s| match brute_force_mwpf(graph, s, cap) {
            Ok((_, w)) => Ok(Some(w)),
            Err(Error::Overflow { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    let scored = optima.iter().filter(|o| o.is_some()).count();
    let mut table = format!(
        "# shots {shots} seed {seed} p {p} threads {threads} oracle-scored {scored}\n{:>6} {:>12} {:>10} {:>10} {:>12}\n",
        "c", "avg_us", "optimal", "certified", "avg_gap"
    );
    for &limit in limits {
        let mut config = DecoderConfig::default().with_limit(limit.0);
        config.finders = finders.to_vec();
        let results = decode_all(graph, &syndromes, &config, threads)?;
        let n = results.len().max(1) as f64;
        let micros = results.iter().map(|r| r.micros).sum::<f64>() / n;
        let certified = results.iter().filter(|r| r.certified).count() as f64 / n;
        let gap: Weight = results.iter().map(|r| r.gap.clone()).sum();
        let optimal = if scored == 0 {
            "n/a".to_string()
        } else {
            let hits = results
                .iter()
                .zip(&optima)
                .filter(|(r, o)| o.as_ref() == Some(&r.weight))
                .count();
            format!("{:.4}", hits as f64 / scored as f64)
        };
        table.push_str(&format!(
            "{:>6} {:>12.1} {:>10} {:>10.4} {:>12.6}\n",
            limit.label(),
            micros,
            optimal,
            certified,
            gap.to_f64() / n
        ));
    }
    Ok(table)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
