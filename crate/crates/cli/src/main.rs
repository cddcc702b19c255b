use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use afmimo::config::{parse_dims, parse_grid, parse_limit, parse_mod, parse_num, read_config, Layered};
use afmimo::figure::run_figure;
use afmimo::sweep::{default_limit, run_sweep, Flavor, Metric, Precondition, SweepRequest};
use afmimo_core::eigdist::SystemDims;
use afmimo_core::metrics::ModulationParams;
use afmimo_core::validate::{run_criterion, ValidateOptions};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

/// Performance of optimal beamforming over dual-hop amplify-and-forward
/// MIMO relay channels.
#[derive(Parser)]
#[command(name = "afmimo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one metric over an SNR grid and write CSV.
    Sweep(Opts),
    /// Write the CSV files for one figure family (1 to 6) into --out.
    Figure {
        id: u32,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run the agreement suite and print a pass/fail table.
    Validate {
        /// Comma-separated criterion numbers; all ten by default.
        #[arg(long)]
        criteria: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Default)]
struct Opts {
    /// Antenna counts NS,NR,ND.
    #[arg(long)]
    dims: Option<String>,
    /// Relay gain ratio k, with α = kρ.
    #[arg(long)]
    k: Option<String>,
    /// SNR grid LO:HI:STEP in dB, or one value.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// outage, ser, capacity or cdf.
    #[arg(long)]
    metric: Option<String>,
    /// Comma-separated: exact, closed, highsnr, large_antenna, jensen, taylor,
    /// montecarlo, ostbc_highsnr.
    #[arg(long)]
    flavor: Option<String>,
    /// Outage threshold γ_th (linear).
    #[arg(long = "gamma-th")]
    gamma_th: Option<String>,
    /// bpsk or custom:A1,A2.
    #[arg(long = "mod")]
    modulation: Option<String>,
    /// OSTBC code rate R.
    #[arg(long = "ostbc-rate")]
    ostbc_rate: Option<String>,
    /// Antenna count taken to infinity by large_antenna: ns, nr or nd.
    #[arg(long)]
    limit: Option<String>,
    /// cdf evaluation points LO:HI:STEP.
    #[arg(long = "x-grid")]
    x_grid: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Monte Carlo draws.
    #[arg(long)]
    samples: Option<String>,
    /// Output file (sweep) or directory (figure).
    #[arg(long)]
    out: Option<String>,
    /// File of `key = value` lines using the long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
}

const DEFAULT_SEED: u64 = 20_240_601;

impl Opts {
    fn layered<'a>(&self, file: &'a BTreeMap<String, String>) -> Layered<'a> {
        let flags = BTreeMap::from([
            ("dims", self.dims.clone()),
            ("k", self.k.clone()),
            ("snr-db", self.snr_db.clone()),
            ("metric", self.metric.clone()),
            ("flavor", self.flavor.clone()),
            ("gamma-th", self.gamma_th.clone()),
            ("mod", self.modulation.clone()),
            ("ostbc-rate", self.ostbc_rate.clone()),
            ("limit", self.limit.clone()),
            ("x-grid", self.x_grid.clone()),
            ("seed", self.seed.clone()),
            ("samples", self.samples.clone()),
            ("out", self.out.clone()),
        ]);
        Layered { flags, file }
    }

    fn file(&self) -> Result<BTreeMap<String, String>> {
        match &self.config {
            Some(p) => read_config(p).map_err(|e| Precondition(format!("{e:#}")).into()),
            None => Ok(BTreeMap::new()),
        }
    }
}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e.downcast::<Precondition>() {
        Ok(p) => p.into(),
        Err(e) => Precondition(format!("{e:#}")).into(),
    })
}

fn build_request(l: &Layered) -> Result<SweepRequest> {
    let dims = l.parsed("dims", SystemDims::new(2, 2, 2)?, parse_dims)?;
    Ok(SweepRequest {
        dims,
        k: l.parsed("k", 1.0, parse_num)?,
        snr_db: l.parsed("snr-db", vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0], parse_grid)?,
        metric: l.parsed("metric", Metric::Ser, Metric::parse)?,
        flavors: l.parsed("flavor", vec![Flavor::Exact], Flavor::parse_list)?,
        gamma_th: l.parsed("gamma-th", 1.0, parse_num)?,
        modulation: l.parsed("mod", ModulationParams::bpsk(), parse_mod)?,
        ostbc_rate: l.parsed("ostbc-rate", 1.0, parse_num)?,
        limit: l.parsed("limit", default_limit(dims), parse_limit)?,
        seed: l.parsed("seed", DEFAULT_SEED, parse_num)?,
        samples: l.parsed("samples", 100_000, parse_num)?,
        x_grid: l.parsed("x-grid", None, |s| parse_grid(s).map(Some))?,
    })
}

fn sweep(opts: &Opts) -> Result<ExitCode> {
    let file = opts.file()?;
    let l = opts.layered(&file);
    let req = usage(build_request(&l))?;
    req.validate()?;
    match l.get("out") {
        Some(path) => {
            let mut buf = Vec::new();
            run_sweep(&req, &mut buf)?;
            std::fs::write(path, buf).with_context(|| format!("writing {path}"))?;
        }
        None => {
            let mut buf = Vec::new();
            run_sweep(&req, &mut buf)?;
            std::io::stdout().write_all(&buf)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn figure(id: u32, opts: &Opts) -> Result<ExitCode> {
    let file = opts.file()?;
    let l = opts.layered(&file);
    let seed = usage(l.parsed("seed", DEFAULT_SEED, parse_num))?;
    let samples = usage(l.parsed("samples", 100_000, parse_num))?;
    let dir = PathBuf::from(l.get("out").unwrap_or("figures"));
    for p in run_figure(id, &dir, seed, samples)? {
        println!("{}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(criteria: Option<&str>, opts: &Opts) -> Result<ExitCode> {
    let file = opts.file()?;
    let l = opts.layered(&file);
    let mut o = ValidateOptions {
        seed: usage(l.parsed("seed", ValidateOptions::default().seed, parse_num))?,
        ..ValidateOptions::default()
    };
    if let Some(n) = usage(l.parsed("samples", None, |s| parse_num::<usize>(s).map(Some)))? {
        o.cdf_samples = n;
        o.ser_samples = n;
        o.large_samples = n;
    }
    let ids: Vec<usize> = match criteria {
        None => (1..=10).collect(),
        Some(s) => usage(
            s.split(',')
                .map(|t| {
                    let id: usize = t.trim().parse().with_context(|| format!("criterion '{t}'"))?;
                    if !(1..=10).contains(&id) {
                        bail!("criterion {id} outside 1 to 10");
                    }
                    Ok(id)
                })
                .collect(),
        )?,
    };
    let mut all = true;
    for id in ids {
        let r = run_criterion(id, &o);
        println!("{}", r.line());
        all &= r.passed;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Sweep(o) => sweep(o),
        Command::Figure { id, opts } => figure(*id, opts),
        Command::Validate { criteria, opts } => validate(criteria.as_deref(), opts),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Precondition>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
