//! `key = value` run configuration with command-line overrides.
//!
//! Files hold one `key = value` pair per line; `#` starts a comment and
//! list values are comma separated. Overrides replace file entries key by key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use opent_core::HalfInt;

use crate::error::{CliError, Result};

/// Raw key/value pairs, last assignment wins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn reject_unknown(&self, allowed: &[&str], section: &str) -> Result<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!(
                "unknown key `{k}` for {section} (allowed: {})",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn scalar<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Config(format!("invalid value `{v}` for `{key}`"))),
        }
    }

    fn list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => {
                let items = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse().map_err(|_| {
                            CliError::Config(format!("invalid list item `{s}` for `{key}`"))
                        })
                    })
                    .collect::<Result<Vec<T>>>()?;
                if items.is_empty() {
                    return Err(CliError::Config(format!("`{key}` is an empty list")));
                }
                Ok(items)
            }
        }
    }
}

fn positive(key: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(CliError::Config(format!("`{key}` must be positive")))
    } else {
        Ok(v)
    }
}

fn finite(key: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(CliError::Config(format!("`{key}` contains non-finite {x}"))),
        None => Ok(()),
    }
}

const DEFAULT_OUT: &str = "results";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub k: Vec<f64>,
    pub eps: Vec<f64>,
    pub n_max: usize,
    pub stride: usize,
    pub out: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            j1: HalfInt::integer(10),
            j2: HalfInt::integer(10),
            k: vec![1.0, 2.0, 3.0, 6.0],
            eps: vec![1e-3, 1e-2, 1e-1, 1.0],
            n_max: 1000,
            stride: 5,
            out: PathBuf::from(DEFAULT_OUT),
        }
    }
}

impl SweepConfig {
    pub const KEYS: &'static [&'static str] = &["j1", "j2", "k", "eps", "nmax", "stride", "out"];

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.reject_unknown(Self::KEYS, "sweep")?;
        let d = Self::default();
        let cfg = Self {
            j1: raw.scalar("j1", d.j1)?,
            j2: raw.scalar("j2", d.j2)?,
            k: raw.list("k", &d.k)?,
            eps: raw.list("eps", &d.eps)?,
            n_max: positive("nmax", raw.scalar("nmax", d.n_max)?)?,
            stride: positive("stride", raw.scalar("stride", d.stride)?)?,
            out: raw.scalar("out", d.out)?,
        };
        finite("k", &cfg.k)?;
        finite("eps", &cfg.eps)?;
        Ok(cfg)
    }

    /// All `(k, eps)` points, `eps` outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.eps
            .iter()
            .flat_map(|&e| self.k.iter().map(move |&k| (k, e)))
            .collect()
    }
}

/// Sampling window `start, start + stride, ..., <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub end: usize,
    pub stride: usize,
}

impl Window {
    pub fn new(start: usize, end: usize, stride: usize) -> Result<Self> {
        if start == 0 || stride == 0 || start > end {
            return Err(CliError::Config(format!(
                "window needs 0 < start <= end and stride > 0, got {start}..{end} step {stride}"
            )));
        }
        Ok(Self { start, end, stride })
    }

    pub fn steps(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.stride)
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.start && n <= self.end && (n - self.start).is_multiple_of(self.stride)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    pub j1: HalfInt,
    pub j2: Vec<HalfInt>,
    pub k: f64,
    pub eps: f64,
    pub window: Window,
    pub bins: usize,
    pub out: PathBuf,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            j1: HalfInt::integer(10),
            j2: vec![
                HalfInt::integer(10),
                HalfInt::integer(15),
                HalfInt::integer(20),
            ],
            k: 6.0,
            eps: 1.0,
            window: Window {
                start: 200,
                end: 1000,
                stride: 40,
            },
            bins: opent_core::rmt::DEFAULT_BINS,
            out: PathBuf::from(DEFAULT_OUT),
        }
    }
}

impl SpectrumConfig {
    pub const KEYS: &'static [&'static str] = &[
        "j1",
        "j2",
        "k",
        "eps",
        "window_start",
        "window_end",
        "window_stride",
        "bins",
        "out",
    ];

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.reject_unknown(Self::KEYS, "spectrum")?;
        let d = Self::default();
        let window = Window::new(
            raw.scalar("window_start", d.window.start)?,
            raw.scalar("window_end", d.window.end)?,
            raw.scalar("window_stride", d.window.stride)?,
        )?;
        let cfg = Self {
            j1: raw.scalar("j1", d.j1)?,
            j2: raw.list("j2", &d.j2)?,
            k: raw.scalar("k", d.k)?,
            eps: raw.scalar("eps", d.eps)?,
            window,
            bins: raw.scalar("bins", d.bins)?,
            out: raw.scalar("out", d.out)?,
        };
        finite("k", &[cfg.k])?;
        finite("eps", &[cfg.eps])?;
        if cfg.bins < 5 {
            return Err(CliError::Config(format!(
                "`bins` must be at least 5, got {}",
                cfg.bins
            )));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalConfig {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub alpha: Vec<f64>,
    pub p: f64,
    pub out: PathBuf,
}

impl Default for DiagonalConfig {
    fn default() -> Self {
        Self {
            j1: HalfInt::integer(10),
            j2: HalfInt::integer(10),
            alpha: vec![0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0],
            p: 0.7,
            out: PathBuf::from(DEFAULT_OUT),
        }
    }
}

impl DiagonalConfig {
    pub const KEYS: &'static [&'static str] = &["j1", "j2", "alpha", "p", "out"];

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.reject_unknown(Self::KEYS, "diagonal")?;
        let d = Self::default();
        let cfg = Self {
            j1: raw.scalar("j1", d.j1)?,
            j2: raw.scalar("j2", d.j2)?,
            alpha: raw.list("alpha", &d.alpha)?,
            p: raw.scalar("p", d.p)?,
            out: raw.scalar("out", d.out)?,
        };
        finite("alpha", &cfg.alpha)?;
        finite("p", &[cfg.p])?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationConfig {
    pub n: usize,
    pub m: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        Self { n: 21, m: 21 }
    }
}

impl SaturationConfig {
    pub const KEYS: &'static [&'static str] = &["n", "m"];

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.reject_unknown(Self::KEYS, "saturation")?;
        let d = Self::default();
        Ok(Self {
            n: positive("n", raw.scalar("n", d.n)?)?,
            m: positive("m", raw.scalar("m", d.m)?)?,
        })
    }
}
