//! Datasets behind the six figure families.

use std::path::Path;

use afmimo_core::eigdist::{AntennaLimit, SystemDims};
use afmimo_core::metrics::ModulationParams;
use anyhow::{Context, Result};

use crate::sweep::{precondition_error, run_sweep, Flavor, Metric, SweepRequest};

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=6;

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn base(ns: usize, nr: usize, nd: usize, metric: Metric, seed: u64, samples: usize) -> SweepRequest {
    let dims = SystemDims::new(ns, nr, nd).expect("positive antenna counts");
    SweepRequest {
        dims,
        k: 1.0,
        snr_db: grid(0.0, 30.0, 2.0),
        metric,
        flavors: vec![Flavor::Exact],
        gamma_th: 1.0,
        modulation: ModulationParams::bpsk(),
        ostbc_rate: 1.0,
        limit: crate::sweep::default_limit(dims),
        seed,
        samples,
        x_grid: None,
    }
}

fn k_label(k: f64) -> String {
    format!("{k}").replace('.', "p")
}

/// `(file name, request)` pairs making up figure `id`.
pub fn figure_requests(id: u32, seed: u64, samples: usize) -> Result<Vec<(String, SweepRequest)>> {
    use Flavor::*;
    let mut out = Vec::new();
    let name = |r: &SweepRequest, extra: &str| {
        format!("fig{id}_{}_{}-{}-{}{extra}.csv", r.metric.name(), r.dims.ns, r.dims.nr, r.dims.nd)
    };
    match id {
        1 => {
            for &(ns, nr, nd) in &[(2, 2, 2), (2, 3, 2), (1, 3, 3), (3, 1, 2)] {
                for &k in &[0.5, 1.0] {
                    let mut r = base(ns, nr, nd, Metric::Cdf, seed, samples);
                    r.k = k;
                    r.snr_db = vec![10.0];
                    r.flavors = vec![Exact, MonteCarlo];
                    out.push((name(&r, &format!("_k{}", k_label(k))), r));
                }
            }
        }
        2 => {
            for &nr in &[1, 2, 4] {
                let mut r = base(2, nr, 2, Metric::Outage, seed, samples);
                r.flavors = if nr == 1 { vec![Exact, HighSnr, MonteCarlo] } else { vec![Exact, MonteCarlo] };
                out.push((name(&r, ""), r));
            }
        }
        3 => {
            for &nd in &[2, 3, 4] {
                let mut r = base(3, 1, nd, Metric::Outage, seed, samples);
                r.k = 0.5;
                r.snr_db = grid(0.0, 40.0, 2.0);
                r.flavors = vec![Exact, HighSnr, MonteCarlo];
                out.push((name(&r, ""), r));
            }
        }
        4 => {
            for &(nr, nd, limit) in &[(10, 2, AntennaLimit::Nr), (2, 10, AntennaLimit::Nd)] {
                let mut r = base(2, nr, nd, Metric::Ser, seed, samples);
                r.snr_db = grid(0.0, 20.0, 2.0);
                r.limit = limit;
                r.flavors = vec![Exact, LargeAntenna, MonteCarlo];
                out.push((name(&r, ""), r));
            }
        }
        5 => {
            let mut r = base(2, 1, 3, Metric::Ser, seed, samples);
            r.flavors = vec![Exact, Closed, HighSnr, OstbcHighSnr];
            out.push((name(&r, ""), r));
        }
        6 => {
            for &(ns, nr, nd) in &[(8, 2, 2), (2, 8, 2), (2, 2, 8)] {
                let mut r = base(ns, nr, nd, Metric::Capacity, seed, samples);
                r.snr_db = grid(0.0, 30.0, 5.0);
                r.flavors = vec![Exact, LargeAntenna, MonteCarlo];
                out.push((name(&r, ""), r));
            }
        }
        _ => return Err(precondition_error(format!("unknown figure id {id}; expected 1 to 6"))),
    }
    Ok(out)
}

/// Writes every file of figure `id` into `dir` and returns their paths.
pub fn run_figure(id: u32, dir: &Path, seed: u64, samples: usize) -> Result<Vec<std::path::PathBuf>> {
    let reqs = figure_requests(id, seed, samples)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (file, req) in reqs {
        let path = dir.join(file);
        let mut buf = Vec::new();
        run_sweep(&req, &mut buf).with_context(|| format!("building {}", path.display()))?;
        std::fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
