//! Sweep requests, their preconditions, and evaluation into a table.

use std::fmt;
use std::io::Write;

use afmimo_core::eigdist::{AntennaLimit, LinkBudget, MaxEigDistribution, SystemDims};
use afmimo_core::metrics::{
    capacity_highsnr, capacity_jensen, capacity_large_antenna, capacity_numeric, capacity_taylor, outage_exact,
    outage_highsnr, ser_closed_ns1, ser_closed_q1, ser_highsnr, ser_large_antenna, ser_numeric, ser_ostbc_highsnr,
    ModulationParams, OstbcParams, OutageSpec,
};
use afmimo_core::montecarlo::{estimate_cdf, estimate_metric, McMetric, RngSpec};
use afmimo_core::validate::quantile;
use anyhow::{bail, Context, Result};
use rayon::prelude::*;

/// A request that cannot run as specified. Reported with exit status 2.
#[derive(Debug)]
pub struct Precondition(pub String);

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Precondition {}

pub fn precondition_error(msg: impl Into<String>) -> anyhow::Error {
    Precondition(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Ser,
    Capacity,
    Cdf,
}

impl Metric {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "outage" => Metric::Outage,
            "ser" => Metric::Ser,
            "capacity" => Metric::Capacity,
            "cdf" => Metric::Cdf,
            _ => bail!("unknown metric '{s}' (outage, ser, capacity, cdf)"),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Ser => "ser",
            Metric::Capacity => "capacity",
            Metric::Cdf => "cdf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Exact,
    Closed,
    HighSnr,
    LargeAntenna,
    Jensen,
    Taylor,
    MonteCarlo,
    OstbcHighSnr,
}

impl Flavor {
    const ALL: [Flavor; 8] = [
        Flavor::Exact,
        Flavor::Closed,
        Flavor::HighSnr,
        Flavor::LargeAntenna,
        Flavor::Jensen,
        Flavor::Taylor,
        Flavor::MonteCarlo,
        Flavor::OstbcHighSnr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Exact => "exact",
            Flavor::Closed => "closed",
            Flavor::HighSnr => "highsnr",
            Flavor::LargeAntenna => "large_antenna",
            Flavor::Jensen => "jensen",
            Flavor::Taylor => "taylor",
            Flavor::MonteCarlo => "montecarlo",
            Flavor::OstbcHighSnr => "ostbc_highsnr",
        }
    }

    /// Comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Flavor>> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim) {
            let f = Flavor::ALL
                .into_iter()
                .find(|f| f.name() == name)
                .with_context(|| format!("unknown flavor '{name}'"))?;
            if out.contains(&f) {
                bail!("flavor '{name}' listed twice");
            }
            out.push(f);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub dims: SystemDims,
    pub k: f64,
    pub snr_db: Vec<f64>,
    pub metric: Metric,
    pub flavors: Vec<Flavor>,
    pub gamma_th: f64,
    pub modulation: ModulationParams,
    pub ostbc_rate: f64,
    pub limit: AntennaLimit,
    pub seed: u64,
    pub samples: usize,
    /// Points for the cdf metric. Defaults to 40 points up to the 99.9% quantile.
    pub x_grid: Option<Vec<f64>>,
}

/// Antenna count sent to infinity when none is named: the largest one.
pub fn default_limit(d: SystemDims) -> AntennaLimit {
    if d.nd >= d.nr && d.nd >= d.ns {
        AntennaLimit::Nd
    } else if d.nr >= d.ns {
        AntennaLimit::Nr
    } else {
        AntennaLimit::Ns
    }
}

fn requires(ok: bool, what: &str, requirement: &str, d: SystemDims) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(precondition_error(format!(
            "{what} requires {requirement}; got dims ({}, {}, {})",
            d.ns, d.nr, d.nd
        )))
    }
}

impl SweepRequest {
    /// Checks every flavor against the preconditions of its formula.
    pub fn validate(&self) -> Result<()> {
        let d = self.dims;
        if self.snr_db.is_empty() || self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(precondition_error("SNR grid must be non-empty and strictly increasing"));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(precondition_error(format!("k = {} must be positive", self.k)));
        }
        if !(self.gamma_th > 0.0 && self.gamma_th.is_finite()) {
            return Err(precondition_error(format!("gamma-th = {} must be positive", self.gamma_th)));
        }
        if !(self.ostbc_rate > 0.0 && self.ostbc_rate <= 1.0) {
            return Err(precondition_error(format!("ostbc-rate = {} must lie in (0, 1]", self.ostbc_rate)));
        }
        if self.flavors.is_empty() {
            return Err(precondition_error("no flavor requested"));
        }
        let special = d.ns == 1 || d.q() == 1;
        for &f in &self.flavors {
            let what = format!("{} {}", self.metric.name(), f.name());
            match (self.metric, f) {
                (_, Flavor::Exact) => {}
                (Metric::Cdf, Flavor::MonteCarlo) => {
                    if self.samples < 1000 {
                        return Err(precondition_error(format!("{what} requires samples >= 1000")));
                    }
                }
                (_, Flavor::MonteCarlo) => {
                    if self.samples < 10_000 {
                        return Err(precondition_error(format!("{what} requires samples >= 10000")));
                    }
                }
                (Metric::Outage | Metric::Ser, Flavor::HighSnr) | (Metric::Ser, Flavor::Closed) => {
                    requires(special, &what, "ns = 1 or min(nr, nd) = 1", d)?
                }
                (Metric::Capacity, Flavor::Jensen | Flavor::Taylor) => {
                    requires(special, &what, "ns = 1 or min(nr, nd) = 1", d)?
                }
                (Metric::Capacity, Flavor::HighSnr) => requires(d.q() == 1, &what, "min(nr, nd) = 1", d)?,
                (Metric::Ser, Flavor::OstbcHighSnr) => {
                    requires(d.q() == 1, &what, "min(nr, nd) = 1", d)?;
                    requires(d.p() != d.ns, &what, "max(nr, nd) != ns", d)?;
                }
                (Metric::Ser, Flavor::LargeAntenna) => {
                    if self.limit == AntennaLimit::Ns {
                        return Err(precondition_error(format!("{what} requires --limit nr or nd")));
                    }
                }
                (Metric::Capacity, Flavor::LargeAntenna) => {}
                _ => return Err(precondition_error(format!("flavor {} is not available for {}", f.name(), self.metric.name()))),
            }
        }
        if self.metric == Metric::Cdf && self.snr_db.len() != 1 {
            return Err(precondition_error("the cdf metric takes a single SNR value"));
        }
        if let Some(g) = &self.x_grid {
            if g.iter().any(|&x| x < 0.0) {
                return Err(precondition_error("x grid must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec![if self.metric == Metric::Cdf { "x" } else { "snr_db" }.to_string()];
        for &f in &self.flavors {
            h.push(f.name().to_string());
            if f == Flavor::MonteCarlo {
                h.push(if self.metric == Metric::Cdf { "montecarlo_band" } else { "montecarlo_stderr" }.to_string());
            }
        }
        h
    }

    /// Evaluates the sweep. Points run in parallel; rows come back in order.
    pub fn evaluate(&self) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        if self.metric == Metric::Cdf {
            return self.evaluate_cdf();
        }
        let rows: Vec<Result<Vec<f64>>> = self
            .snr_db
            .par_iter()
            .enumerate()
            .map(|(i, &db)| self.point(i, db).with_context(|| format!("at {db} dB")))
            .collect();
        rows.into_iter().collect()
    }

    fn point(&self, index: usize, db: f64) -> Result<Vec<f64>> {
        let d = self.dims;
        let b = LinkBudget::from_db(db, self.k, d.nr)?;
        let m = &self.modulation;
        let outage = OutageSpec::new(self.gamma_th)?;
        let mut row = vec![db];
        for &f in &self.flavors {
            let v: f64 = match (self.metric, f) {
                (Metric::Outage, Flavor::Exact) => outage_exact(d, &b, &outage)?,
                (Metric::Outage, Flavor::HighSnr) => outage_highsnr(d, &b, &outage)?,
                (Metric::Ser, Flavor::Exact) => ser_numeric(d, &b, m)?,
                (Metric::Ser, Flavor::Closed) if d.ns == 1 => ser_closed_ns1(d, &b, m)?,
                (Metric::Ser, Flavor::Closed) => ser_closed_q1(d, &b, m)?,
                (Metric::Ser, Flavor::HighSnr) => ser_highsnr(d, &b, m)?,
                (Metric::Ser, Flavor::OstbcHighSnr) => ser_ostbc_highsnr(d, &b, m, &OstbcParams::new(self.ostbc_rate)?)?,
                (Metric::Ser, Flavor::LargeAntenna) => ser_large_antenna(d, &b, m, self.limit)?,
                (Metric::Capacity, Flavor::Exact) => capacity_numeric(d, &b)?,
                (Metric::Capacity, Flavor::Jensen) => capacity_jensen(d, &b)?,
                (Metric::Capacity, Flavor::Taylor) => capacity_taylor(d, &b)?,
                (Metric::Capacity, Flavor::HighSnr) => capacity_highsnr(d, self.k)?.capacity_at(b.rho()),
                (Metric::Capacity, Flavor::LargeAntenna) => capacity_large_antenna(d, &b, self.limit)?,
                (metric, Flavor::MonteCarlo) => {
                    let mc = match metric {
                        Metric::Outage => McMetric::Outage(outage),
                        Metric::Ser => McMetric::Ser(m.clone()),
                        _ => McMetric::Capacity,
                    };
                    let e = estimate_metric(d, &b, &mc, self.samples, RngSpec::new(self.seed, index as u64))?;
                    row.push(e.value);
                    e.stderr
                }
                _ => unreachable!("rejected by validate"),
            };
            row.push(v);
        }
        Ok(row)
    }

    fn evaluate_cdf(&self) -> Result<Vec<Vec<f64>>> {
        let b = LinkBudget::from_db(self.snr_db[0], self.k, self.dims.nr)?;
        let dist = MaxEigDistribution::<f64>::from_budget(self.dims, &b)?;
        let grid = match &self.x_grid {
            Some(g) => g.clone(),
            None => {
                let top = quantile(&dist, 0.999)?;
                (1..=40).map(|i| top * i as f64 / 40.0).collect()
            }
        };
        let mut columns = vec![grid.clone()];
        for &f in &self.flavors {
            match f {
                Flavor::Exact => columns.push(grid.iter().map(|&x| dist.cdf(x)).collect::<Result<_, _>>()?),
                Flavor::MonteCarlo => {
                    let e = estimate_cdf(self.dims, b.a(), &grid, self.samples, RngSpec::new(self.seed, 0))?;
                    columns.push(e.values);
                    columns.push(vec![e.band; grid.len()]);
                }
                _ => unreachable!("rejected by validate"),
            }
        }
        Ok((0..grid.len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
    }
}

/// Writes the table as CSV: the first column in shortest round-trip form,
/// the rest at 17 significant digits. Fails on any non-finite cell.
pub fn write_csv<W: Write>(out: W, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    for (r, row) in rows.iter().enumerate() {
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            bail!("non-finite value {} in row {}, column {}", row[c], r + 1, header[c]);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        let cells = row
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 { format!("{v}") } else { format!("{v:.16e}") });
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_sweep<W: Write>(req: &SweepRequest, out: W) -> Result<()> {
    let rows = req.evaluate()?;
    write_csv(out, &req.header(), &rows)
}
