use clap::{Parser, Subcommand, ValueEnum};
use kronecker::error::{KronError, Result};
use kronecker::oracle::kronecker_bruteforce;
use kronecker::par::with_threads;
use kronecker::pipeline::{self, Config, DiagramTuple, SigmaChoice};
use kronecker::rootdata::deform::{cache_clear, cache_list, cache_verify, default_cache_dir, CacheStatus, DEFAULT_SEED};
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kron", version, about = "Kronecker coefficients by iterated residues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Seed for the deformation search.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Refuse problems with more (coset, gamma) pairs than this.
    #[arg(long, global = true)]
    max_terms: Option<u64>,
    /// Sigma override: auto, general, rect, stabilizer.
    #[arg(long, default_value = "auto", global = true)]
    sigma: SigmaChoice,
    /// Content cap for the brute-force oracle.
    #[arg(long, default_value_t = 10, global = true)]
    content_cap: i64,
    /// Cache directory (default: $KRON_CACHE_DIR or ./.kron-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Keep deformation vectors in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Read the diagrams as JSON from stdin instead of the positional argument.
    #[arg(long, global = true)]
    stdin: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// The Kronecker coefficient g(nu_1, ..., nu_s).
    Eval { diagrams: Option<String> },
    /// g(k nu_1, ..., k nu_s) as a quasi-polynomial in k.
    Dilate { diagrams: Option<String> },
    /// A quasi-polynomial in all row lengths, valid near the input.
    Symbolic {
        diagrams: Option<String>,
        /// Also print the validity certificate (stderr in pretty mode).
        #[arg(long)]
        certificate: bool,
    },
    /// Hilbert series of the invariant ring, for rectangular diagrams.
    Hilbert { diagrams: Option<String> },
    /// Smallest k >= 1 with g(k nu) > 0.
    Saturation { diagrams: Option<String> },
    /// Compare the engine against the brute-force oracle.
    Oracle { diagrams: Option<String> },
    /// Manage cached deformation vectors.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum CacheAction {
    List,
    Clear,
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    match with_threads(threads, || run(&cli)) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kron: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn config(cli: &Cli) -> Config {
    let mut cfg = Config {
        cache_dir: (!cli.no_cache).then(|| cache_dir(cli)),
        seed: cli.seed,
        sigma: cli.sigma,
        ..Config::default()
    };
    if let Some(m) = cli.max_terms {
        cfg.max_terms = m;
    }
    cfg
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir.clone().unwrap_or_else(default_cache_dir)
}

fn diagrams(cli: &Cli, arg: &Option<String>) -> Result<DiagramTuple> {
    if cli.stdin {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        let v: Value = serde_json::from_str(&text)?;
        return DiagramTuple::from_json(&v);
    }
    match arg {
        Some(s) => DiagramTuple::parse(s),
        None => Err(KronError::InvalidInput("no diagrams given (pass them as an argument or use --stdin)".into())),
    }
}

fn run(cli: &Cli) -> Result<String> {
    let cfg = config(cli);
    let json_out = cli.format == Format::Json;
    match &cli.command {
        Command::Eval { diagrams: d } => {
            let t = diagrams(cli, d)?;
            let g = pipeline::kronecker_number(&t, &cfg)?;
            Ok(if json_out { json!({ "diagrams": t.diagrams, "value": g.to_string() }).to_string() } else { g.to_string() })
        }
        Command::Dilate { diagrams: d } => {
            let t = diagrams(cli, d)?;
            let r = pipeline::kronecker_dilated(&t, &cfg)?;
            Ok(if json_out { r.value.to_json().to_string() } else { r.value.pretty() })
        }
        Command::Symbolic { diagrams: d, certificate } => {
            let t = diagrams(cli, d)?;
            let r = pipeline::kronecker_symbolic(&t, &cfg)?;
            let cert = r.to_json().get("certificate").cloned().unwrap_or(Value::Null);
            if json_out {
                let mut v = r.value.to_json();
                if *certificate {
                    v["certificate"] = cert;
                }
                Ok(v.to_string())
            } else {
                if *certificate {
                    eprintln!("certificate: {cert}");
                }
                Ok(r.value.pretty())
            }
        }
        Command::Hilbert { diagrams: d } => {
            let t = diagrams(cli, d)?;
            let h = pipeline::hilbert_series(&t, &cfg)?;
            Ok(if json_out { h.to_json().to_string() } else { h.pretty() })
        }
        Command::Saturation { diagrams: d } => {
            let t = diagrams(cli, d)?;
            let k = pipeline::saturation(&t, &cfg)?;
            Ok(match (json_out, k) {
                (true, k) => json!({ "saturation": k }).to_string(),
                (false, Some(k)) => k.to_string(),
                (false, None) => "none".to_string(),
            })
        }
        Command::Oracle { diagrams: d } => {
            let t = diagrams(cli, d)?;
            let brute = kronecker_bruteforce(&t.diagrams, cli.content_cap)?;
            let engine = pipeline::kronecker_number(&t, &cfg)?;
            let agree = engine == brute.into();
            if !agree {
                eprintln!("kron: engine and oracle disagree on {t}");
            }
            let out = if json_out {
                json!({ "oracle": brute.to_string(), "engine": engine.to_string(), "agree": agree }).to_string()
            } else {
                format!("oracle {brute} engine {engine} {}", if agree { "agree" } else { "DISAGREE" })
            };
            if agree {
                Ok(out)
            } else {
                println!("{out}");
                Err(KronError::Representation("oracle mismatch".into()))
            }
        }
        Command::Cache { action } => cache(cli, *action, json_out),
    }
}

fn cache(cli: &Cli, action: CacheAction, json_out: bool) -> Result<String> {
    let dir = cache_dir(cli);
    Ok(match action {
        CacheAction::List => {
            let lines = cache_list(&dir);
            if json_out { json!(lines).to_string() } else { lines.join("\n") }
        }
        CacheAction::Clear => {
            let n = cache_clear(&dir)?;
            if json_out { json!({ "removed": n }).to_string() } else { format!("removed {n} entries") }
        }
        CacheAction::Verify => {
            let bad: Vec<(String, String)> = cache_verify(&dir)
                .into_iter()
                .filter_map(|(p, s)| match s {
                    CacheStatus::Ok => None,
                    CacheStatus::Corrupt(why) => Some((p.display().to_string(), why)),
                })
                .collect();
            if json_out {
                json!(bad.iter().map(|(p, w)| json!({ "entry": p, "problem": w })).collect::<Vec<_>>()).to_string()
            } else {
                bad.iter().map(|(p, w)| format!("{p}: {w} (quarantined)")).collect::<Vec<_>>().join("\n")
            }
        }
    })
}
