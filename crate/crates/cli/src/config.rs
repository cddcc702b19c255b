//! Settings merged from flags, an optional `key = value` file and defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use afmimo_core::eigdist::{AntennaLimit, SystemDims};
use afmimo_core::metrics::ModulationParams;
use anyhow::{anyhow, bail, Context, Result};

/// Keys accepted in a config file. They match the long flag names.
pub const KEYS: &[&str] = &[
    "dims", "k", "snr-db", "metric", "flavor", "gamma-th", "mod", "ostbc-rate", "seed", "samples", "out", "limit", "x-grid",
];

/// Parses a flat config file: one `key = value` per line, `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key = value", n + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            bail!("config line {}: unknown key '{k}'", n + 1);
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

/// Flag value if given, else file value, else `None`.
pub struct Layered<'a> {
    pub flags: BTreeMap<&'static str, Option<String>>,
    pub file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .and_then(|v| v.as_deref())
            .or_else(|| self.file.get(key).map(String::as_str))
    }

    pub fn parsed<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Result<T>) -> Result<T> {
        match self.get(key) {
            Some(v) => parse(v).with_context(|| format!("--{key} {v}")),
            None => Ok(default),
        }
    }
}

pub fn parse_dims(s: &str) -> Result<SystemDims> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("expected NS,NR,ND"))?;
    if parts.len() != 3 {
        bail!("expected three antenna counts");
    }
    Ok(SystemDims::new(parts[0], parts[1], parts[2])?)
}

/// `LO:HI:STEP` in dB, or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("expected LO:HI:STEP"))?;
    match parts[..] {
        [v] if v.is_finite() => Ok(vec![v]),
        [lo, hi, step] if lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| lo + step * i as f64).collect())
        }
        _ => bail!("expected LO:HI:STEP with STEP > 0 and HI >= LO"),
    }
}

pub fn parse_mod(s: &str) -> Result<ModulationParams> {
    if s == "bpsk" {
        return Ok(ModulationParams::bpsk());
    }
    let rest = s.strip_prefix("custom:").ok_or_else(|| anyhow!("expected bpsk or custom:A1,A2"))?;
    let (a1, a2) = rest.split_once(',').ok_or_else(|| anyhow!("expected custom:A1,A2"))?;
    Ok(ModulationParams::new(a1.trim().parse()?, a2.trim().parse()?, s)?)
}

pub fn parse_limit(s: &str) -> Result<AntennaLimit> {
    AntennaLimit::from_str(s).map_err(|e| anyhow!("{e}"))
}

pub fn parse_num<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    Ok(s.trim().parse::<T>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let m = parse_config("# sweep\ndims = 2,1,3\n\nk=0.5 # relay\n").unwrap();
        assert_eq!(m["dims"], "2,1,3");
        assert_eq!(m["k"], "0.5");
        assert!(parse_config("nonsense = 1").is_err());
        assert!(parse_config("dims").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:10:5").unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(parse_grid("7").unwrap(), vec![7.0]);
        assert_eq!(parse_grid("0:1:0.25").unwrap().len(), 5);
        assert!(parse_grid("10:0:1").is_err());
        assert!(parse_grid("0:10:0").is_err());
    }

    #[test]
    fn modulation() {
        assert_eq!(parse_mod("bpsk").unwrap().a1, 1.0);
        let m = parse_mod("custom:2,0.5").unwrap();
        assert_eq!((m.a1, m.a2), (2.0, 0.5));
        assert!(parse_mod("qam").is_err());
    }

    #[test]
    fn layering() {
        let mut file = BTreeMap::new();
        file.insert("k".to_string(), "0.5".to_string());
        file.insert("seed".to_string(), "9".to_string());
        let mut flags = BTreeMap::new();
        flags.insert("k", Some("2".to_string()));
        flags.insert("seed", None);
        let l = Layered { flags, file: &file };
        assert_eq!(l.parsed("k", 1.0, parse_num).unwrap(), 2.0);
        assert_eq!(l.parsed("seed", 1u64, parse_num).unwrap(), 9);
        assert_eq!(l.parsed("samples", 5usize, parse_num).unwrap(), 5);
    }
}
