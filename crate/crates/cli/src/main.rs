mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stdgr::galois_ring::{
    defining_polynomial, standard_model, verify_model, Check, ExplicitModel, GaussSetup,
    PrimePowerOptions, RouteBStatus,
};
use stdgr::tables::cmd_table;
use stdgr::{Caps, Config, Error, ErrorKind};

use cache::{request_key, Cache, Lookup};

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "stdgr",
    version,
    about = "Standard models of Galois rings GR(p^n, m)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Resource caps as m:d:n (rank, auxiliary degree, precision).
    #[arg(long, value_parser = parse_caps, default_value = "243:512:16")]
    caps: Caps,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn config(&self) -> Config {
        let mut cfg = Config {
            caps: self.caps,
            ..Config::default()
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg
    }
}

#[derive(Args, Clone)]
struct CacheArgs {
    /// Cache directory.
    #[arg(long, env = "STDGR_CACHE_DIR")]
    cache: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the standard model of GR(p^n, m).
    Model {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: u32,
        #[arg(short)]
        m: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also print the defining polynomial at precision p^N (text format).
        #[arg(long)]
        precision: Option<u32>,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Defining polynomials of GR(p^n, r^k) for k <= k_max and n <= n_max.
    Table {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        r: u64,
        #[arg(long)]
        k_max: u32,
        #[arg(long)]
        n_max: u32,
        /// Extra column at precision p^N with balanced coefficients.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Check a serialized model, or a freshly built one.
    Verify {
        /// Model file in the JSON format.
        path: Option<PathBuf>,
        #[arg(short, requires_all = ["n", "m"], conflicts_with = "path")]
        p: Option<u64>,
        #[arg(short)]
        n: Option<u32>,
        #[arg(short)]
        m: Option<u64>,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_caps(s: &str) -> Result<Caps, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected m:d:n, got {s}"));
    }
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x}: {e}"));
    Ok(Caps {
        max_m: num(parts[0])?,
        max_d: num(parts[1])?,
        max_n: u32::try_from(num(parts[2])?).map_err(|e| e.to_string())?,
    })
}

enum Failure {
    Lib(Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::Cap => EXIT_CAP,
                ErrorKind::Internal => EXIT_INTERNAL,
            })
        }
    }
}

fn open_cache(args: &CacheArgs) -> Result<Option<Cache>, Failure> {
    match (&args.cache, args.no_cache) {
        (Some(dir), false) => Cache::new(dir)
            .map(Some)
            .map_err(|e| Failure::Io(format!("cache {}: {e}", dir.display()))),
        _ => Ok(None),
    }
}

/// The serialized model, from the cache when a verified entry exists.
fn model_json(
    p: u64,
    n: u32,
    m: u64,
    cfg: &Config,
    cache: Option<&Cache>,
) -> Result<String, Failure> {
    let key = request_key(p, n, m, &cfg.caps, cfg.seed);
    if let Some(c) = cache {
        match c.get(&key) {
            Lookup::Hit(s) => return Ok(s),
            Lookup::Corrupt => {
                eprintln!("warning: cache entry {key} failed its digest check; rebuilding")
            }
            Lookup::Miss => {}
        }
    }
    let s = standard_model(p, n, m, cfg)?.to_json_string();
    if let Some(c) = cache {
        c.put(&key, &s)
            .map_err(|e| Failure::Io(format!("writing cache entry {key}: {e}")))?;
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Model {
            p,
            n,
            m,
            format,
            precision,
            cache,
            common,
        } => {
            let cfg = common.config();
            let cache = open_cache(&cache)?;
            let json = model_json(p, n, m, &cfg, cache.as_ref())?;
            match format {
                Format::Json => println!("{json}"),
                Format::Text => {
                    let model = ExplicitModel::from_json_str(&json)?;
                    match model.defining_poly() {
                        Some(f) => println!("{f}"),
                        None => println!("no defining polynomial (structure constants only)"),
                    }
                    if let Some(big) = precision {
                        let f = standard_model(p, big, m, &cfg)?;
                        if let Some(f) = f.defining_poly() {
                            println!("{}", f.render_balanced());
                        }
                    }
                }
                Format::Table => print!(
                    "{}",
                    multiplication_table(&ExplicitModel::from_json_str(&json)?)
                ),
            }
            Ok(())
        }
        Command::Table {
            p,
            r,
            k_max,
            n_max,
            precision,
            format,
            common,
        } => {
            let t = cmd_table(p, r, k_max, n_max, precision, &common.config())?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(&t).expect("serializable")),
                _ => print!("{}", t.render()),
            }
            Ok(())
        }
        Command::Verify {
            path,
            p,
            n,
            m,
            cache,
            common,
        } => {
            let cfg = common.config();
            let json = match (path, p, n, m) {
                (Some(path), ..) => std::fs::read_to_string(&path)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                (None, Some(p), Some(n), Some(m)) => {
                    let cache = open_cache(&cache)?;
                    model_json(p, n, m, &cfg, cache.as_ref())?
                }
                _ => return Err(Failure::Io("give a model file or -p, -n and -m".into())),
            };
            let model = ExplicitModel::from_json_str(&json)?;
            let mut report = verify_model(&model);
            report.checks.extend(route_checks(&model, &cfg));
            report.checks.push(match model.residue_field_model() {
                Ok(_) => check(
                    "residue coherence",
                    true,
                    "reduction mod p is a field model",
                ),
                Err(e) => check("residue coherence", false, &e.to_string()),
            });
            let passed = report.passed();
            let mut out = serde_json::to_value(&report).expect("serializable");
            out["passed"] = passed.into();
            println!("{out}");
            if passed {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

fn check(name: &str, passed: bool, detail: &str) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Recomputes each coprime component's polynomial by both routes; for a
/// single component the result must be the model's own polynomial.
fn route_checks(model: &ExplicitModel, cfg: &Config) -> Vec<Check> {
    let comps = &model.provenance().r_components;
    let mut out = Vec::new();
    for c in comps.iter().filter(|c| c.r != model.p()) {
        let name = format!("route agreement r={} k={}", c.r, c.k);
        let built = GaussSetup::new(
            model.p(),
            model.n(),
            c.r,
            c.k,
            cfg,
            &PrimePowerOptions::default(),
        )
        .and_then(|s| s.defining_poly());
        out.push(match built {
            Ok((f, status)) => {
                let same = comps.len() > 1 || model.defining_poly() == Some(&f);
                let detail = match status {
                    RouteBStatus::Skipped(why) => format!("{f}; cross-check skipped: {why}"),
                    other => format!("{f}; {}", other.tag()),
                };
                check(&name, same, &detail)
            }
            Err(e) => check(&name, false, &e.to_string()),
        });
    }
    if comps.len() == 1 && comps[0].r == model.p() {
        let want = defining_polynomial(model.p(), model.n(), comps[0].r, comps[0].k, cfg);
        out.push(match want {
            Ok(f) => check(
                "tower polynomial",
                model.defining_poly() == Some(&f),
                &f.to_string(),
            ),
            Err(e) => check("tower polynomial", false, &e.to_string()),
        });
    }
    out
}

fn multiplication_table(model: &ExplicitModel) -> String {
    let m = model.rank();
    let mut out = String::new();
    for i in 0..m {
        for j in i..m {
            let terms: Vec<String> = (0..m)
                .filter(|&k| model.constant(i, j, k).bits() != 0)
                .map(|k| format!("{}*e[{}]", model.constant(i, j, k), model.basis()[k]))
                .collect();
            let rhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            out.push_str(&format!(
                "e[{}] e[{}] = {rhs}\n",
                model.basis()[i],
                model.basis()[j]
            ));
        }
    }
    out
}
