use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smoothcert::harness::{certify_mc, ClassifierSpec};
use smoothcert::levelset::{build_table, default_radii, lookup, RadiusTable};
use smoothcert::radius::{certified_radius, json_number};
use smoothcert::{Adversary, Error, Family, NoiseSpec};

/// Certified radii for randomized smoothing.
#[derive(Parser)]
#[command(name = "smoothcert", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified radius for one noise spec, adversary and ρ (JSON).
    Certify {
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        adv: Adversary,
        #[arg(long)]
        rho: f64,
    },
    /// Level-set radius table for a spherical family (CSV).
    Table {
        #[command(flatten)]
        noise: NoiseArgs,
        /// Comma-separated increasing radii (default: 512 geometric radii over [1e-3 σ, 10 σ]).
        #[arg(long)]
        radii: Option<String>,
    },
    /// Radius from a table written by `table` (JSON).
    Lookup {
        #[command(flatten)]
        noise: NoiseArgs,
        /// CSV table to read.
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        rho: f64,
    },
    /// Radii over grids of specs, σ and ρ (long-format CSV).
    Sweep(SweepArgs),
    /// Monte-Carlo certification of a synthetic classifier (JSON lines).
    Simulate(SimulateArgs),
    /// Convert between λ and σ (JSON).
    Convert {
        #[command(flatten)]
        noise: NoiseArgs,
    },
}

#[derive(Args)]
struct NoiseArgs {
    /// Family name, optionally followed by `key=value` pairs, e.g. `"exp_l2 k=2 j=1"`.
    #[arg(long)]
    dist: String,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Per-coordinate standard deviation; excludes `--lambda`.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    dim: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Repeatable; each value as for the other commands.
    #[arg(long, required = true)]
    dist: Vec<String>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    /// Comma-separated σ grid.
    #[arg(long)]
    sigma: Option<String>,
    /// Comma-separated λ grid, instead of `--sigma`.
    #[arg(long)]
    lambda: Option<String>,
    /// Comma-separated ρ grid.
    #[arg(long)]
    rho: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    adv: Adversary,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Halfspace,
    Linear,
    Constant,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    adv: Adversary,
    #[arg(long, value_enum, default_value = "halfspace")]
    classifier: ClassifierArg,
    /// Halfspace coordinate.
    #[arg(long, default_value_t = 0)]
    axis: usize,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Halfspace labels 1 below the threshold instead of above.
    #[arg(long)]
    negative: bool,
    /// Comma-separated weights of a linear classifier.
    #[arg(long)]
    w: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Label of a constant classifier.
    #[arg(long, default_value_t = 1)]
    label: u8,
    /// Comma-separated input point (default: `threshold + margin` on the axis, 0 elsewhere).
    #[arg(long)]
    x: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certify with seeds `seed, seed + 1, ...`, one line each.
    #[arg(long, default_value_t = 1)]
    repeats: u64,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e.to_string()))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::UnsupportedPair { .. } | Error::Unsupported(_)) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

/// `name [key=value ...]`; inline keys override the flags.
fn parse_family(text: &str, mut k: Option<f64>, mut j: Option<f64>, mut a: Option<f64>) -> Res<Family> {
    let mut toks = text.split_whitespace();
    let Some(name) = toks.next() else { return usage("--dist is empty") };
    for tok in toks {
        let Some((key, val)) = tok.split_once('=') else { return usage(format!("expected key=value, got `{tok}`")) };
        let v: f64 = val.parse().map_err(|_| Failure::Usage(format!("bad number `{val}` for `{key}`")))?;
        match key {
            "k" => k = Some(v),
            "j" => j = Some(v),
            "a" => a = Some(v),
            _ => return usage(format!("unknown family key `{key}`")),
        }
    }
    Ok(Family::from_parts(name, k, j, a)?)
}

fn parse_list(flag: &str, text: &str) -> Res<Vec<f64>> {
    let out = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Failure::Usage(format!("bad number `{s}` in --{flag}"))))
        .collect::<Res<Vec<f64>>>()?;
    if out.is_empty() {
        return usage(format!("--{flag} list is empty"));
    }
    Ok(out)
}

fn build_spec(fam: Family, lambda: Option<f64>, sigma: Option<f64>, dim: usize) -> Res<NoiseSpec> {
    Ok(match (lambda, sigma) {
        (Some(l), None) => NoiseSpec::new(fam, l, dim)?,
        (None, Some(s)) => NoiseSpec::from_sigma(fam, s, dim)?,
        (Some(_), Some(_)) => return usage("give either --lambda or --sigma, not both"),
        (None, None) => return usage("one of --lambda or --sigma is required"),
    })
}

impl NoiseArgs {
    fn spec(&self) -> Res<NoiseSpec> {
        build_spec(parse_family(&self.dist, self.k, self.j, self.a)?, self.lambda, self.sigma, self.dim)
    }
}

fn check_rho(rho: f64) -> Res<()> {
    if !(0.0..=1.0).contains(&rho) {
        return usage(format!("--rho {rho} not in [0, 1]"));
    }
    Ok(())
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> Res<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "inf".into()
    }
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Lib(Error::Io(e.to_string()))
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Res<()> {
    let (scales, by_sigma) = match (&args.sigma, &args.lambda) {
        (Some(s), None) => (parse_list("sigma", s)?, true),
        (None, Some(l)) => (parse_list("lambda", l)?, false),
        (Some(_), Some(_)) => return usage("give either --sigma or --lambda, not both"),
        (None, None) => return usage("one of --sigma or --lambda is required"),
    };
    let rhos = parse_list("rho", &args.rho)?;
    for &r in &rhos {
        check_rho(r)?;
    }
    let mut grid = Vec::new();
    for text in &args.dist {
        let fam = parse_family(text, args.k, args.j, args.a)?;
        for &s in &scales {
            let spec = if by_sigma { build_spec(fam, None, Some(s), args.dim)? } else { build_spec(fam, Some(s), None, args.dim)? };
            grid.push(spec);
        }
        // surface unsupported pairs before any long computation
        certified_radius(&grid[grid.len() - 1], args.adv, 0.5)?;
    }
    let mut rows = Vec::with_capacity(grid.len() * rhos.len());
    for spec in &grid {
        for &rho in &rhos {
            rows.push((spec, rho, certified_radius(spec, args.adv, rho)?));
        }
    }
    let envelope = |spec: &NoiseSpec, rho: f64| {
        rows.iter()
            .filter(|(s, r, _)| s.family() == spec.family() && *r == rho)
            .map(|(_, _, c)| c.value)
            .fold(0.0, f64::max)
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["distribution", "dim", "adv", "sigma", "lambda", "rho", "radius", "method", "envelope"])
        .map_err(csv_err)?;
    for (spec, rho, c) in &rows {
        w.write_record([
            family_label(spec),
            spec.dim().to_string(),
            args.adv.name().to_string(),
            num(spec.sigma()?),
            num(spec.lambda()),
            num(*rho),
            num(c.value),
            c.method.name().to_string(),
            num(envelope(spec, *rho)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// The spec string without `lambda` and `dim`.
fn family_label(spec: &NoiseSpec) -> String {
    let s = spec.to_string();
    let cut = s.find(" lambda=").unwrap_or(s.len());
    s[..cut].trim_start_matches("family=").to_string()
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Res<()> {
    let spec = args.noise.spec()?;
    let d = spec.dim();
    let clf = match args.classifier {
        ClassifierArg::Halfspace => ClassifierSpec::halfspace(d, args.axis, args.threshold, !args.negative)?,
        ClassifierArg::Linear => {
            let Some(w) = &args.w else { return usage("--classifier linear needs --w") };
            ClassifierSpec::linear(parse_list("w", w)?, args.b)?
        }
        ClassifierArg::Constant => ClassifierSpec::constant(d, args.label)?,
    };
    let x = match &args.x {
        Some(text) => parse_list("x", text)?,
        None => {
            let mut x = vec![0.0; d];
            if args.axis < d {
                x[args.axis] = args.threshold + args.margin;
            }
            x
        }
    };
    if x.len() != d {
        return usage(format!("--x has {} coordinates, expected {d}", x.len()));
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return usage(format!("--alpha {} not in (0, 1)", args.alpha));
    }
    if args.n == 0 || args.repeats == 0 {
        return usage("--n and --repeats must be at least 1");
    }
    certified_radius(&spec, args.adv, 0.5)?;
    for i in 0..args.repeats {
        let res = certify_mc(&clf, &spec, &x, args.adv, args.n, args.alpha, args.seed.wrapping_add(i))?;
        json_line(out, &res.to_json())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let out = out.as_mut();
    match &cli.cmd {
        Command::Certify { noise, adv, rho } => {
            let spec = noise.spec()?;
            check_rho(*rho)?;
            json_line(out, &certified_radius(&spec, *adv, *rho)?.to_json())?;
        }
        Command::Table { noise, radii } => {
            let spec = noise.spec()?;
            let radii = match radii {
                Some(text) => parse_list("radii", text)?,
                None => default_radii(&spec),
            };
            if !spec.family().is_spherical() {
                return Err(Error::Unsupported(format!(
                    "level-set tables need a spherical family (gaussian, uniform_l2, exp_l2, power_l2), got {}",
                    spec.family().name()
                ))
                .into());
            }
            build_table(&spec, &radii)?.write_csv(&mut *out)?;
        }
        Command::Lookup { noise, table, rho } => {
            let spec = noise.spec()?;
            check_rho(*rho)?;
            let table = RadiusTable::read_csv(spec, File::open(table)?)?;
            json_line(out, &lookup(&table, *rho)?.to_json())?;
        }
        Command::Sweep(args) => cmd_sweep(args, out)?,
        Command::Simulate(args) => cmd_simulate(args, out)?,
        Command::Convert { noise } => {
            let spec = noise.spec()?;
            let v = serde_json::json!({
                "spec": spec.to_string(),
                "lambda": spec.lambda(),
                "sigma": json_number(spec.sigma()?),
            });
            json_line(out, &v)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
