//! Runners behind the `sweep`, `spectrum`, `diagonal` and `saturation` commands.

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;

use opent_core::entanglement::{operator_entanglement, schmidt_spectrum, slin, svn};
use opent_core::kickedtop::{diagonal_coupling, power_sequence, product_rotation};
use opent_core::rmt::{fit_distance, histogram, saturation_estimate, LaguerreLaw};
use opent_core::{BipartitionDims, FloquetOperator, HalfInt, KickedTopParams, SpinSystem};

use crate::config::{DiagonalConfig, SaturationConfig, SpectrumConfig, SweepConfig, Window};
use crate::error::{CliError, Result};
use crate::output::{fmt, write_atomic};
use crate::pool::map_ordered;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySample {
    pub n: usize,
    pub von_neumann: f64,
    pub linear: f64,
    pub residual: f64,
}

/// Operator entropies of `U_T^n` for `n = stride, 2·stride, ..., <= n_max`.
pub fn entropy_series(
    params: &KickedTopParams,
    n_max: usize,
    stride: usize,
) -> opent_core::Result<Vec<EntropySample>> {
    let op = FloquetOperator::new(params)?;
    let dims = op.dims();
    power_sequence(&op, n_max, stride)?
        .map(|sample| {
            let sample = sample?;
            let spec = schmidt_spectrum(&sample.matrix, dims)?;
            Ok(EntropySample {
                n: sample.n,
                von_neumann: svn(&spec),
                linear: slin(&spec),
                residual: sample.residual,
            })
        })
        .collect()
}

pub fn mean_von_neumann(series: &[EntropySample], from: usize, to: usize) -> Option<f64> {
    let (sum, count) = series
        .iter()
        .filter(|s| s.n >= from && s.n <= to)
        .fold((0.0, 0usize), |(acc, c), s| (acc + s.von_neumann, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn sweep_file_name(k: f64, eps: f64) -> String {
    format!("sweep_k{}_eps{}.csv", fmt(k), fmt(eps))
}

pub fn sweep_csv(series: &[EntropySample]) -> String {
    let mut s = String::from("n,S_V,S_L\n");
    for e in series {
        let _ = writeln!(s, "{},{},{}", e.n, fmt(e.von_neumann), fmt(e.linear));
    }
    s
}

#[derive(Debug)]
pub struct SweepPoint {
    pub k: f64,
    pub eps: f64,
    pub result: Result<PathBuf>,
}

#[derive(Debug)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub fn failures(&self) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(|p| p.result.is_err())
    }

    pub fn all_ok(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Runs every `(k, eps)` point and writes one CSV per point. A failing point
/// is recorded in the report and does not stop the others.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepReport> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let points = cfg.points();
    let results = map_ordered(&points, workers, |&(k, eps)| -> Result<PathBuf> {
        let point_err = |source| CliError::Point { k, eps, source };
        let params = KickedTopParams::uniform(cfg.j1, cfg.j2, k, eps).map_err(point_err)?;
        let series = entropy_series(&params, cfg.n_max, cfg.stride).map_err(point_err)?;
        write_atomic(&cfg.out, &sweep_file_name(k, eps), &sweep_csv(&series))
    });
    Ok(SweepReport {
        points: points
            .into_iter()
            .zip(results)
            .map(|((k, eps), result)| SweepPoint { k, eps, result })
            .collect(),
    })
}

/// Normalized Schmidt coefficients of `U_T^n` at every step of the window.
pub fn window_spectra(
    params: &KickedTopParams,
    window: Window,
) -> opent_core::Result<Vec<(usize, Vec<f64>)>> {
    let op = FloquetOperator::new(params)?;
    let dims = op.dims();
    let sample_stride = gcd(window.start, window.stride);
    let mut out = Vec::new();
    for sample in power_sequence(&op, window.end, sample_stride)? {
        let sample = sample?;
        if window.contains(sample.n) {
            out.push((
                sample.n,
                schmidt_spectrum(&sample.matrix, dims)?.normalized(),
            ));
        }
    }
    Ok(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub j2: HalfInt,
    pub dims: BipartitionDims,
    pub q: f64,
    pub steps: usize,
    pub eigenvalues: usize,
    pub fit_distance: f64,
    pub eigenvalue_path: PathBuf,
    pub histogram_path: PathBuf,
}

impl fmt::Display for SpectrumResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "j2={} N={} M={} Q={} steps={} eigenvalues={} fit_distance={}",
            self.j2,
            self.dims.n(),
            self.dims.m(),
            fmt(self.q),
            self.steps,
            self.eigenvalues,
            fmt(self.fit_distance)
        )
    }
}

fn spectrum_one(cfg: &SpectrumConfig, j2: HalfInt) -> Result<SpectrumResult> {
    let params = KickedTopParams::uniform(cfg.j1, j2, cfg.k, cfg.eps)?;
    let dims = params.dims();
    let (n, m) = (dims.n(), dims.m());
    let law = LaguerreLaw::for_dims(n, m)?;
    let spectra = window_spectra(&params, cfg.window)?;

    let tag = format!("j1{}_j2{}", fmt(cfg.j1.value()), fmt(j2.value()));
    let mut dump = format!(
        "# N={n} M={m} Q={} k={} eps={} window={}:{}:{}\n",
        fmt(law.q()),
        fmt(cfg.k),
        fmt(cfg.eps),
        cfg.window.start,
        cfg.window.end,
        cfg.window.stride
    );
    let mut all = Vec::with_capacity(spectra.len() * n * n);
    for (step, lambdas) in &spectra {
        let _ = writeln!(dump, "# n={step}");
        for &l in lambdas {
            let _ = writeln!(dump, "{}", fmt(l));
        }
        all.extend_from_slice(lambdas);
    }
    let eigenvalue_path = write_atomic(&cfg.out, &format!("eigenvalues_{tag}.txt"), &dump)?;

    let hist = histogram(&all, cfg.bins, law.default_support())?;
    let distance = fit_distance(&hist, &law);
    let per_spectrum = 1.0 / spectra.len() as f64;
    let mut csv = String::from("bin_left,bin_right,empirical_density,laguerre_density\n");
    for (i, w) in hist.edges().windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt(a),
            fmt(b),
            fmt(hist.heights()[i] * per_spectrum),
            fmt(law.mass_between(a, b) / (b - a))
        );
    }
    let histogram_path = write_atomic(&cfg.out, &format!("histogram_{tag}.csv"), &csv)?;

    Ok(SpectrumResult {
        j2,
        dims,
        q: law.q(),
        steps: spectra.len(),
        eigenvalues: all.len(),
        fit_distance: distance,
        eigenvalue_path,
        histogram_path,
    })
}

/// Eigenvalue dumps, histograms and fit distances for every `j2`, plus a
/// `spectrum_report.txt` summary.
pub fn run_spectrum(cfg: &SpectrumConfig, workers: usize) -> Result<Vec<SpectrumResult>> {
    let results = map_ordered(&cfg.j2, workers, |&j2| spectrum_one(cfg, j2))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let report: String = results.iter().map(|r| format!("{r}\n")).collect();
    write_atomic(&cfg.out, "spectrum_report.txt", &report)?;
    Ok(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalReport {
    pub rows: Vec<(f64, f64, f64)>,
    pub product_rotation: (f64, f64, f64),
    pub path: PathBuf,
}

/// Entropies of `exp(-i α Jz⊗Jz)` over the α grid, always including α = 0,
/// and of the product rotation at angle `p`.
pub fn run_diagonal(cfg: &DiagonalConfig) -> Result<DiagonalReport> {
    let s1 = SpinSystem::new(cfg.j1)?;
    let s2 = SpinSystem::new(cfg.j2)?;
    let dims = BipartitionDims::of_spins(&s1, &s2)?;
    let mut alphas = cfg.alpha.clone();
    if !alphas.contains(&0.0) {
        alphas.insert(0, 0.0);
    }
    let rows = alphas
        .iter()
        .map(|&a| {
            let e = operator_entanglement(&diagonal_coupling(&s1, &s2, a), dims)?;
            Ok((a, e.von_neumann, e.linear))
        })
        .collect::<Result<Vec<_>>>()?;
    let up = operator_entanglement(&product_rotation(&s1, &s2, cfg.p), dims)?;

    let mut csv = String::from("alpha,S_V,S_L\n");
    for (a, v, l) in &rows {
        let _ = writeln!(csv, "{},{},{}", fmt(*a), fmt(*v), fmt(*l));
    }
    let _ = writeln!(
        csv,
        "# U_p p={} S_V={} S_L={}",
        fmt(cfg.p),
        fmt(up.von_neumann),
        fmt(up.linear)
    );
    let tag = format!("j1{}_j2{}", fmt(cfg.j1.value()), fmt(cfg.j2.value()));
    let path = write_atomic(&cfg.out, &format!("diagonal_{tag}.csv"), &csv)?;
    Ok(DiagonalReport {
        rows,
        product_rotation: (cfg.p, up.von_neumann, up.linear),
        path,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationReport {
    pub n: usize,
    pub m: usize,
    pub estimate: f64,
}

impl SaturationReport {
    pub fn ln_n2(&self) -> f64 {
        ((self.n * self.n) as f64).ln()
    }

    pub fn ln_06_n2(&self) -> f64 {
        (0.6 * (self.n * self.n) as f64).ln()
    }
}

impl fmt::Display for SaturationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "N={} M={} Q={}",
            self.n,
            self.m,
            fmt(self.m as f64 / self.n as f64)
        )?;
        writeln!(f, "saturation_estimate={}", fmt(self.estimate))?;
        writeln!(f, "ln(0.6*N^2)={}", fmt(self.ln_06_n2()))?;
        write!(f, "ln(N^2)={}", fmt(self.ln_n2()))
    }
}

pub fn run_saturation(cfg: &SaturationConfig) -> Result<SaturationReport> {
    Ok(SaturationReport {
        n: cfg.n,
        m: cfg.m,
        estimate: saturation_estimate(cfg.n, cfg.m)?,
    })
}
