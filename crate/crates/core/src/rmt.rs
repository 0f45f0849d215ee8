//! Laguerre (Marchenko-Pastur) law for operator reduced density matrices.
//!
//! For `N ≤ M` and `Q = M²/N²`, the probability density of a normalized
//! operator-RDM eigenvalue is
//!
//! ```text
//! f(λ) = (N² Q / 2π) · √((λ_max - λ)(λ - λ_min)) / λ,
//! λ_max,min = (1/N²)(1 + 1/Q ± 2/√Q).
//! ```
//!
//! `f` integrates to one. The `N²` eigenvalues of one RDM are described by the
//! eigenvalue density `N²·f`, which integrates to `N²` and has unit first
//! moment (the RDM trace); [`laguerre_density`] returns this one.
//!
//! Integrals over the support use `λ = c + r·cos θ`, with `c` the midpoint
//! and `r` the half-width. The square-root edges and the `1/λ` factor then
//! cancel into a bounded integrand on `θ ∈ [0, π]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes of the composite midpoint rule on `[0, π]`.
pub const QUADRATURE_NODES: usize = 10_000;
/// Relative agreement required between `QUADRATURE_NODES` and half as many.
pub const QUADRATURE_TOLERANCE: f64 = 1e-3;
/// Nodes per histogram bin when integrating the law over a bin.
const BIN_NODES: usize = 400;

pub const DEFAULT_BINS: usize = 25;
/// Default histogram range is `[0, DEFAULT_SUPPORT_FACTOR · λ_max]`.
pub const DEFAULT_SUPPORT_FACTOR: f64 = 1.05;

/// Support endpoints `(λ_min, λ_max)`.
pub fn laguerre_bounds(n_small: usize, q: f64) -> Result<(f64, f64)> {
    if n_small == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    if !q.is_finite() || q < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Q = {q} must be a finite value >= 1 (N <= M)"
        )));
    }
    let n2 = (n_small * n_small) as f64;
    let base = 1.0 + 1.0 / q;
    let spread = 2.0 / q.sqrt();
    // Written as a square so that Q = 1 gives an exact zero.
    let lower = (1.0 - 1.0 / q.sqrt()).powi(2);
    Ok((lower / n2, (base + spread) / n2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreLaw {
    n_small: usize,
    q: f64,
    lambda_min: f64,
    lambda_max: f64,
}

impl LaguerreLaw {
    pub fn new(n_small: usize, q: f64) -> Result<Self> {
        let (lambda_min, lambda_max) = laguerre_bounds(n_small, q)?;
        Ok(Self {
            n_small,
            q,
            lambda_min,
            lambda_max,
        })
    }

    /// Law for subsystem dimensions `n ≤ m`, i.e. `Q = m²/n²`.
    pub fn for_dims(n: usize, m: usize) -> Result<Self> {
        if n == 0 || n > m {
            return Err(Error::InvalidParameter(format!(
                "need 0 < N <= M, got N = {n}, M = {m}"
            )));
        }
        let ratio = m as f64 / n as f64;
        Self::new(n, ratio * ratio)
    }

    pub fn n_small(&self) -> usize {
        self.n_small
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Number of eigenvalues described by the law, `N²`.
    pub fn eigenvalue_count(&self) -> f64 {
        (self.n_small * self.n_small) as f64
    }

    /// The normalized density `f(λ)`.
    pub fn probability_density(&self, lambda: f64) -> f64 {
        if !(lambda > self.lambda_min && lambda < self.lambda_max) {
            return 0.0;
        }
        let prefactor = self.eigenvalue_count() * self.q / (2.0 * PI);
        prefactor * ((self.lambda_max - lambda) * (lambda - self.lambda_min)).sqrt() / lambda
    }

    /// `N² f(λ)`: expected number of eigenvalues per unit λ.
    pub fn eigenvalue_density(&self, lambda: f64) -> f64 {
        self.eigenvalue_count() * self.probability_density(lambda)
    }

    fn center(&self) -> f64 {
        0.5 * (self.lambda_max + self.lambda_min)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.lambda_max - self.lambda_min)
    }

    fn lambda_at(&self, theta: f64) -> f64 {
        self.center() + self.half_width() * theta.cos()
    }

    fn theta_at(&self, lambda: f64) -> f64 {
        let x = (lambda - self.center()) / self.half_width();
        x.clamp(-1.0, 1.0).acos()
    }

    /// `N² f(λ) dλ/dθ` as a function of θ; bounded on `(0, π)`.
    fn weight(&self, theta: f64) -> f64 {
        let r = self.half_width();
        let s = theta.sin();
        let prefactor = self.eigenvalue_count() * self.eigenvalue_count() * self.q / (2.0 * PI);
        prefactor * r * r * s * s / self.lambda_at(theta)
    }

    fn midpoint_rule(&self, lo: f64, hi: f64, nodes: usize, g: &impl Fn(f64) -> f64) -> f64 {
        let h = (hi - lo) / nodes as f64;
        (0..nodes)
            .map(|i| {
                let theta = lo + (i as f64 + 0.5) * h;
                self.weight(theta) * g(self.lambda_at(theta))
            })
            .sum::<f64>()
            * h
    }

    /// `∫ N² f(λ) g(λ) dλ` over the support, with a convergence check.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let fine = self.midpoint_rule(0.0, PI, QUADRATURE_NODES, &g);
        let coarse = self.midpoint_rule(0.0, PI, QUADRATURE_NODES / 2, &g);
        let scale = fine.abs().max(coarse.abs());
        if !fine.is_finite() || (fine - coarse).abs() > QUADRATURE_TOLERANCE * scale {
            return Err(Error::Quadrature { coarse, fine });
        }
        Ok(fine)
    }

    /// Expected number of eigenvalues in `[a, b]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let lo = a.max(self.lambda_min);
        let hi = b.min(self.lambda_max);
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return 0.0;
        }
        // θ decreases as λ grows.
        let (t_lo, t_hi) = (self.theta_at(hi), self.theta_at(lo));
        self.midpoint_rule(t_lo, t_hi, BIN_NODES, &|_| 1.0)
    }

    /// `(0, 1.05 λ_max)`.
    pub fn default_support(&self) -> (f64, f64) {
        (0.0, DEFAULT_SUPPORT_FACTOR * self.lambda_max)
    }
}

/// Eigenvalue density `N² f(λ)` of the law.
pub fn laguerre_density(law: &LaguerreLaw, lambda: f64) -> f64 {
    law.eigenvalue_density(lambda)
}

/// Expected operator von Neumann entropy `-∫ N² f(λ) λ ln λ dλ` for
/// subsystem dimensions `n_small ≤ m_big`.
pub fn saturation_estimate(n_small: usize, m_big: usize) -> Result<f64> {
    let law = LaguerreLaw::for_dims(n_small, m_big)?;
    law.integrate(|l| if l > 0.0 { -l * l.ln() } else { 0.0 })
}

/// Equal-width histogram with heights normalized so that
/// `Σ height·width` equals the number of in-range samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<usize>,
    heights: Vec<f64>,
    samples: usize,
    outside: usize,
}

impl Histogram {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `Σ height·width`.
    pub fn total_mass(&self) -> f64 {
        self.heights
            .iter()
            .zip(self.edges.windows(2))
            .map(|(h, w)| h * (w[1] - w[0]))
            .sum()
    }

    /// All samples offered, in range or not.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Samples that fell outside the histogram range.
    pub fn outside(&self) -> usize {
        self.outside
    }
}

pub fn histogram(eigs: &[f64], bins: usize, support: (f64, f64)) -> Result<Histogram> {
    if eigs.is_empty() {
        return Err(Error::EmptyInput("histogram needs at least one value"));
    }
    if bins < 5 {
        return Err(Error::InvalidParameter(format!(
            "bins = {bins} must be at least 5"
        )));
    }
    let (lo, hi) = support;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "bad histogram range [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0usize; bins];
    let mut outside = 0;
    for &x in eigs {
        if !(x >= lo && x <= hi) {
            outside += 1;
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let heights = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| c as f64 / (w[1] - w[0]))
        .collect();
    Ok(Histogram {
        edges,
        counts,
        heights,
        samples: eigs.len(),
        outside,
    })
}

/// L1 distance between a histogram and the law, in units of the law's mass.
///
/// The histogram is rescaled to carry `N²` eigenvalues in total, so
/// aggregated spectra from many time steps compare directly. Each bin is
/// compared with the law's exact mass over that bin; samples outside the
/// histogram range and law mass outside it count fully. The result lies in
/// `[0, 2]`, with 2 meaning disjoint supports.
pub fn fit_distance(h: &Histogram, law: &LaguerreLaw) -> f64 {
    let total = law.eigenvalue_count();
    let scale = total / h.samples as f64;
    let mut covered = 0.0;
    let mut l1 = 0.0;
    for (count, w) in h.counts.iter().zip(h.edges.windows(2)) {
        let expected = law.mass_between(w[0], w[1]);
        covered += expected;
        l1 += (scale * *count as f64 - expected).abs();
    }
    l1 += scale * h.outside as f64;
    l1 += (total - covered).max(0.0);
    l1 / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Independent check: Simpson's rule in `u` with `λ = λ_min + u²`.
    fn simpson_oracle(law: &LaguerreLaw, g: impl Fn(f64) -> f64) -> f64 {
        let top = (law.lambda_max() - law.lambda_min()).sqrt();
        let n = 200_000;
        let h = top / n as f64;
        let integrand = |u: f64| {
            let l = law.lambda_min() + u * u;
            if u == 0.0 {
                // λ f(λ) stays finite, f(λ)·2u → 0 unless λ_min = 0.
                if law.lambda_min() == 0.0 {
                    let lm = law.lambda_max();
                    let pref =
                        law.eigenvalue_count() * law.eigenvalue_count() * law.q() / (2.0 * PI);
                    return pref * lm.sqrt() * 2.0 * g(0.0);
                }
                return 0.0;
            }
            laguerre_density(law, l) * 2.0 * u * g(l)
        };
        let mut acc = integrand(0.0) + integrand(top);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * integrand(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = laguerre_bounds(3, 1.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 4.0 / 9.0).abs() < 1e-15);
        let (lo, hi) = laguerre_bounds(21, 1.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.009070294784580499).abs() < 1e-15);
        let (lo, _) = laguerre_bounds(21, 4.0).unwrap();
        assert!((lo - 0.25 / 441.0).abs() < 1e-16);
        assert!(laguerre_bounds(21, 0.5).is_err());
        assert!(laguerre_bounds(0, 2.0).is_err());
    }

    #[test]
    fn lower_edge_vanishes_only_at_unit_ratio() {
        for q in [1.0, 1.01, 2.25, 4.0, 100.0] {
            let law = LaguerreLaw::new(10, q).unwrap();
            assert!(law.lambda_min() >= 0.0);
            assert_eq!(law.lambda_min() == 0.0, q == 1.0);
            assert!(law.lambda_max() > law.lambda_min());
        }
    }

    #[test]
    fn density_vanishes_off_support_and_at_edges() {
        let law = LaguerreLaw::new(21, 2.25).unwrap();
        assert_eq!(laguerre_density(&law, -1.0), 0.0);
        assert_eq!(laguerre_density(&law, 2.0 * law.lambda_max()), 0.0);
        assert_eq!(laguerre_density(&law, law.lambda_max()), 0.0);
        assert!(laguerre_density(&law, 0.5 * (law.lambda_min() + law.lambda_max())) > 0.0);
    }

    #[test]
    fn mass_and_trace_match_independent_quadrature() {
        for q in [1.0, 2.25, 4.0] {
            let law = LaguerreLaw::new(21, q).unwrap();
            let mass = simpson_oracle(&law, |_| 1.0);
            let trace = simpson_oracle(&law, |l| l);
            assert!((mass / 441.0 - 1.0).abs() < 5e-3, "Q={q}: mass {mass}");
            assert!((trace - 1.0).abs() < 5e-3, "Q={q}: trace {trace}");
            let m = law.integrate(|_| 1.0).unwrap();
            let t = law.integrate(|l| l).unwrap();
            assert!((m - mass).abs() < 5e-3 * 441.0);
            assert!((t - trace).abs() < 5e-3);
        }
    }

    #[test]
    fn probability_density_is_normalized() {
        let law = LaguerreLaw::new(21, 1.0).unwrap();
        let p = simpson_oracle(&law, |_| 1.0) / law.eigenvalue_count();
        assert!((p - 1.0).abs() < 5e-3);
    }

    #[test]
    fn saturation_unit_ratio() {
        // Exact value at Q = 1 is ln N² - 1/2 for every N.
        for n in [2usize, 15, 21, 40] {
            let s = saturation_estimate(n, n).unwrap();
            let exact = ((n * n) as f64).ln() - 0.5;
            assert!((s - exact).abs() < 1e-4, "N={n}: {s} vs {exact}");
        }
        let s = saturation_estimate(21, 21).unwrap();
        let oracle = simpson_oracle(&LaguerreLaw::new(21, 1.0).unwrap(), |l| {
            if l > 0.0 {
                -l * l.ln()
            } else {
                0.0
            }
        });
        assert!((s - oracle).abs() < 1e-3);
        assert!((s - 441f64.ln()).abs() > 0.4);
    }

    #[test]
    fn saturation_grows_towards_flat_spectrum() {
        let ln441 = 441f64.ln();
        let s41 = saturation_estimate(21, 41).unwrap();
        assert!(s41 > 5.58 && s41 < ln441);
        let s441 = saturation_estimate(21, 441).unwrap();
        assert!((s441 - ln441).abs() < 0.01);
        let mut last = 0.0;
        for m in 21..=61 {
            let s = saturation_estimate(21, m).unwrap();
            assert!(s > last);
            last = s;
        }
        assert!(saturation_estimate(2, 2).unwrap() < 4f64.ln() - 0.4);
        assert!(saturation_estimate(5, 3).is_err());
    }

    #[test]
    fn bin_masses_sum_to_eigenvalue_count() {
        let law = LaguerreLaw::new(21, 1.0).unwrap();
        let (lo, hi) = law.default_support();
        let edges: Vec<f64> = (0..=25).map(|i| lo + (hi - lo) * i as f64 / 25.0).collect();
        let total: f64 = edges.windows(2).map(|w| law.mass_between(w[0], w[1])).sum();
        assert!((total - 441.0).abs() < 1e-6 * 441.0);
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&[0.5; 100], 5, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts(), &[0, 0, 100, 0, 0]);
        assert!((h.total_mass() - 100.0).abs() < 1e-9);

        assert!(histogram(&[], 5, (0.0, 1.0)).is_err());
        assert!(histogram(&[0.1], 4, (0.0, 1.0)).is_err());
        assert!(histogram(&[0.1], 5, (1.0, 0.0)).is_err());

        let edge = histogram(&[0.0, 1.0, 1.5], 5, (0.0, 1.0)).unwrap();
        assert_eq!(edge.counts(), &[1, 0, 0, 0, 1]);
        assert_eq!(edge.outside(), 1);
        assert_eq!(edge.samples(), 3);
    }

    #[test]
    fn histogram_of_uniform_samples_is_flat() {
        let mut rng = StdRng::seed_from_u64(40);
        let xs: Vec<f64> = (0..50_000).map(|_| rng.random::<f64>()).collect();
        let h = histogram(&xs, 10, (0.0, 1.0)).unwrap();
        assert!((h.total_mass() - 50_000.0).abs() < 1e-9);
        for &height in h.heights() {
            assert!((height / 50_000.0 - 1.0).abs() < 0.05);
        }
    }

    /// Rejection sampling from `f` in the θ variable, where the density is bounded.
    fn sample_law(law: &LaguerreLaw, count: usize, rng: &mut StdRng) -> Vec<f64> {
        let c = 0.5 * (law.lambda_max() + law.lambda_min());
        let r = 0.5 * (law.lambda_max() - law.lambda_min());
        let g = |t: f64| t.sin().powi(2) / (c + r * t.cos());
        let bound = (0..10_000)
            .map(|i| g(PI * (i as f64 + 0.5) / 10_000.0))
            .fold(0.0, f64::max)
            * 1.05;
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let t = PI * rng.random::<f64>();
            if rng.random::<f64>() * bound < g(t) {
                out.push(c + r * t.cos());
            }
        }
        out
    }

    #[test]
    fn self_sampled_histogram_fits() {
        let mut rng = StdRng::seed_from_u64(41);
        for q in [1.0, 4.0] {
            let law = LaguerreLaw::new(21, q).unwrap();
            let xs = sample_law(&law, 100_000, &mut rng);
            let h = histogram(&xs, DEFAULT_BINS, law.default_support()).unwrap();
            let d = fit_distance(&h, &law);
            assert!(d < 0.05, "Q={q}: distance {d}");
        }
    }

    #[test]
    fn point_mass_is_far_from_any_law() {
        let law = LaguerreLaw::new(21, 1.0).unwrap();
        let h = histogram(&[0.5; 100], 5, (0.4, 0.6)).unwrap();
        assert!((fit_distance(&h, &law) - 2.0).abs() < 1e-9);
        // Point mass inside the histogram range but off the law's support.
        let far = 1.04 * law.lambda_max();
        let h = histogram(&[far; 100], 25, law.default_support()).unwrap();
        assert!((fit_distance(&h, &law) - 2.0).abs() < 1e-6);
    }
}
