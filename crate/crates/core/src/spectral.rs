//! Band structure and nearest-neighbour level-spacing statistics.

use std::f64::consts::PI;

use crate::eigensolve::eigvalsh;
use crate::model::{build_z_hamiltonian, RawParams};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Inclusive index range `lo..=hi` of an ascending eigenvalue list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo_index: usize,
    pub hi_index: usize,
    pub e_min: f64,
    pub e_max: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.e_max - self.e_min
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.e_min + self.e_max)
    }

    pub fn population(&self) -> usize {
        self.hi_index - self.lo_index + 1
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.lo_index..=self.hi_index).contains(&index)
    }

    pub fn slice<'a>(&self, eigenvalues: &'a [f64]) -> &'a [f64] {
        &eigenvalues[self.lo_index..=self.hi_index]
    }
}

/// Split ascending `eigenvalues` wherever consecutive levels are more than
/// `gap` apart.
pub fn split_bands(eigenvalues: &[f64], gap: f64) -> Vec<Band> {
    let mut bands = Vec::new();
    if eigenvalues.is_empty() {
        return bands;
    }
    let mut lo = 0;
    for i in 1..=eigenvalues.len() {
        if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] > gap {
            bands.push(Band {
                lo_index: lo,
                hi_index: i - 1,
                e_min: eigenvalues[lo],
                e_max: eigenvalues[i - 1],
            });
            lo = i;
        }
    }
    bands
}

/// Bands separated by gaps larger than `Ω/2`.
pub fn identify_bands(eigenvalues: &[f64], omega: f64) -> Vec<Band> {
    split_bands(eigenvalues, 0.5 * omega)
}

/// The band whose center is closest to the midpoint of the whole spectrum
/// (the lower one on a tie).
///
/// # Panics
/// If `bands` is empty.
pub fn central_band(bands: &[Band], eigenvalues: &[f64]) -> Band {
    assert!(!bands.is_empty(), "central_band needs at least one band");
    let mid = 0.5 * (eigenvalues[0] + eigenvalues[eigenvalues.len() - 1]);
    let mut best = bands[0];
    for b in &bands[1..] {
        if (b.center() - mid).abs() < (best.center() - mid).abs() {
            best = *b;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    J,
    Omega,
}

/// One grid point of a central-band scan.
#[derive(Debug, Clone)]
pub struct BandScanPoint {
    pub grid_value: f64,
    pub outcome: Result<BandSnapshot, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSnapshot {
    pub band_count: usize,
    pub central: Band,
    /// Neighbouring bands below and above the central one, for overlap plots.
    pub below: Option<Band>,
    pub above: Option<Band>,
}

pub fn band_snapshot(eigenvalues: &[f64], omega: f64) -> BandSnapshot {
    let bands = identify_bands(eigenvalues, omega);
    let central = central_band(&bands, eigenvalues);
    let pos = bands.iter().position(|b| *b == central).unwrap();
    BandSnapshot {
        band_count: bands.len(),
        central,
        below: pos.checked_sub(1).map(|i| bands[i]),
        above: bands.get(pos + 1).copied(),
    }
}

/// Diagonalize `H_z` at every grid value and record the central band.
/// Failures are kept per point; the scan always covers the whole grid.
pub fn central_band_width_scan(
    base: &RawParams,
    axis: ScanAxis,
    grid: &[f64],
    mode: Execution,
) -> Vec<BandScanPoint> {
    par::map(grid, mode, |&x| {
        let mut raw = base.clone();
        match axis {
            ScanAxis::J => raw.coupling.j = x,
            ScanAxis::Omega => raw.omega = x,
        }
        let outcome = raw
            .build()
            .and_then(|p| {
                let e = eigvalsh(&build_z_hamiltonian(&p))?;
                Ok(band_snapshot(&e, p.omega()))
            })
            .map_err(|e| e.to_string());
        BandScanPoint { grid_value: x, outcome }
    })
}

/// How raw spacings are brought to unit mean density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unfolding {
    /// Divide by the mean spacing of the band.
    Constant,
    /// Divide each spacing by the mean of the spacings within `half_window`
    /// positions of it, then rescale to unit mean.
    LocalMean { half_window: usize },
}

impl Default for Unfolding {
    fn default() -> Self {
        Unfolding::LocalMean { half_window: 10 }
    }
}

/// Consecutive spacings of ascending `levels`, unfolded to unit mean.
pub fn unfolded_spacings(levels: &[f64], unfolding: Unfolding) -> Result<Vec<f64>> {
    if levels.len() < 2 {
        return Err(Error::BandTooSmall {
            population: levels.len(),
            required: 2,
        });
    }
    let raw: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let n = raw.len();
    let global = raw.iter().sum::<f64>() / n as f64;
    if global <= 0.0 {
        // fully degenerate band: every spacing is zero
        return Ok(vec![0.0; n]);
    }
    let mut s = match unfolding {
        Unfolding::Constant => raw.clone(),
        Unfolding::LocalMean { half_window } => {
            let mut prefix = vec![0.0; n + 1];
            for i in 0..n {
                prefix[i + 1] = prefix[i] + raw[i];
            }
            (0..n)
                .map(|i| {
                    let lo = i.saturating_sub(half_window);
                    let hi = (i + half_window + 1).min(n);
                    let local = (prefix[hi] - prefix[lo]) / (hi - lo) as f64;
                    raw[i] / if local > 1e-12 * global { local } else { global }
                })
                .collect()
        }
    };
    let mean = s.iter().sum::<f64>() / n as f64;
    for x in &mut s {
        *x /= mean;
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingOptions {
    pub bins: usize,
    pub s_max: f64,
    pub unfolding: Unfolding,
}

impl Default for SpacingOptions {
    fn default() -> Self {
        Self {
            bins: 40,
            s_max: 4.0,
            unfolding: Unfolding::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpacingHistogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    /// Mean raw spacing (before unfolding) of the levels that were binned;
    /// the average over members when histograms are pooled.
    pub mean_spacing: f64,
    pub sample_count: usize,
    /// Samples at or beyond `s_max`, counted in the last bin.
    pub overflow: usize,
    /// Samples below `s = 0.1`.
    pub small_s_count: usize,
}

impl SpacingHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Fraction of samples with `s < 0.1`.
    pub fn small_s_fraction(&self) -> f64 {
        if self.sample_count == 0 {
            0.0
        } else {
            self.small_s_count as f64 / self.sample_count as f64
        }
    }

    /// Rows `(bin_lo, bin_hi, density)`.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(e, &d)| (e[0], e[1], d))
            .collect()
    }
}

/// Normalized histogram of already unfolded spacings.
pub fn histogram(spacings: &[f64], bins: usize, s_max: f64, mean_spacing: f64) -> Result<SpacingHistogram> {
    if bins == 0 || !(s_max > 0.0) {
        return Err(Error::InvalidParams(format!("need bins > 0 and s_max > 0, got {bins}, {s_max}")));
    }
    if spacings.is_empty() {
        return Err(Error::BandTooSmall {
            population: 1,
            required: 2,
        });
    }
    let width = s_max / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut overflow = 0;
    let mut small = 0;
    for &s in spacings {
        if s < 0.1 {
            small += 1;
        }
        let b = if s >= s_max {
            overflow += 1;
            bins - 1
        } else {
            ((s / width) as usize).min(bins - 1)
        };
        counts[b] += 1;
    }
    let n = spacings.len() as f64;
    Ok(SpacingHistogram {
        bin_edges: (0..=bins).map(|i| i as f64 * width).collect(),
        densities: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        mean_spacing,
        sample_count: spacings.len(),
        overflow,
        small_s_count: small,
    })
}

/// `P(s)` of the levels `band` selects from ascending `eigenvalues`.
pub fn spacing_distribution(eigenvalues: &[f64], band: &Band, opts: &SpacingOptions) -> Result<SpacingHistogram> {
    let levels = band.slice(eigenvalues);
    let s = unfolded_spacings(levels, opts.unfolding)?;
    let mean = (levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64;
    histogram(&s, opts.bins, opts.s_max, mean)
}

/// Histogram of spacings pooled over several spectra (ensemble averaging).
pub fn pooled_spacing_distribution<'a>(
    members: impl IntoIterator<Item = (&'a [f64], Band)>,
    opts: &SpacingOptions,
) -> Result<SpacingHistogram> {
    let mut all = Vec::new();
    let mut means = Vec::new();
    for (e, band) in members {
        let levels = band.slice(e);
        all.extend(unfolded_spacings(levels, opts.unfolding)?);
        means.push((levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64);
    }
    let mean = means.iter().sum::<f64>() / means.len().max(1) as f64;
    histogram(&all, opts.bins, opts.s_max, mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceDensity {
    Poisson,
    /// Orthogonal-ensemble surmise.
    WignerDyson,
    /// Unitary-ensemble surmise, reported alongside the orthogonal one.
    WignerDysonUnitary,
}

impl ReferenceDensity {
    pub fn density(self, s: f64) -> f64 {
        match self {
            ReferenceDensity::Poisson => (-s).exp(),
            ReferenceDensity::WignerDyson => 0.5 * PI * s * (-0.25 * PI * s * s).exp(),
            ReferenceDensity::WignerDysonUnitary => 32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    /// `Σ_b |P_b - P_ref(mid_b)| Δs`.
    pub l1: f64,
    pub small_s_fraction: f64,
}

pub fn distribution_distance(h: &SpacingHistogram, kind: ReferenceDensity) -> Distance {
    let w = h.bin_width();
    let l1 = h
        .midpoints()
        .iter()
        .zip(&h.densities)
        .map(|(&m, &d)| (d - kind.density(m)).abs() * w)
        .sum();
    Distance {
        l1,
        small_s_fraction: h.small_s_fraction(),
    }
}

/// Which reference a histogram is closer to in L1.
pub fn closer_to_wigner_dyson(h: &SpacingHistogram) -> bool {
    distribution_distance(h, ReferenceDensity::WignerDyson).l1
        < distribution_distance(h, ReferenceDensity::Poisson).l1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use proptest::prelude::*;
    use rand_distr::{Distribution, Exp1};

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn free_chain_has_binomial_bands() {
        for l in [4usize, 6, 8, 10] {
            let p = RawParams::gradient_chain(l, 100.0, 1.0, 0.0).build().unwrap();
            let e = eigvalsh(&build_z_hamiltonian(&p)).unwrap();
            let bands = identify_bands(&e, 100.0);
            assert_eq!(bands.len(), l + 1);
            for (m, b) in bands.iter().enumerate() {
                assert_eq!(b.population(), binom(l, m));
            }
            let total: usize = bands.iter().map(Band::population).sum();
            assert_eq!(total, 1 << l);
            assert_eq!(central_band(&bands, &e).population(), binom(l, l / 2));
        }
    }

    #[test]
    fn strong_coupling_merges_bands() {
        let p = RawParams::gradient_chain(10, 100.0, 1.0, 20.0).build().unwrap();
        let e = eigvalsh(&build_z_hamiltonian(&p)).unwrap();
        assert!(identify_bands(&e, 100.0).len() < 11);
    }

    #[test]
    fn single_level_is_one_flat_band() {
        let bands = identify_bands(&[2.5], 1.0);
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].width(), 0.0);
        assert_eq!(central_band(&bands, &[2.5]), bands[0]);
    }

    #[test]
    fn scan_keeps_grid_order_and_matches_modes() {
        let base = RawParams::gradient_chain(6, 100.0, 1.0, 0.0);
        let grid = [0.0, 1.0, 5.0];
        let seq = central_band_width_scan(&base, ScanAxis::J, &grid, Execution::Sequential);
        let par = central_band_width_scan(&base, ScanAxis::J, &grid, Execution::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.grid_value, b.grid_value);
            assert_eq!(a.outcome, b.outcome);
        }
        let w: Vec<f64> = seq.iter().map(|p| p.outcome.as_ref().unwrap().central.width()).collect();
        assert!(w[0] < w[1] && w[1] < w[2]);
        let snap = seq[0].outcome.as_ref().unwrap();
        assert!(snap.below.is_some() && snap.above.is_some());
        let bad = central_band_width_scan(&base, ScanAxis::Omega, &[-1.0, 100.0], Execution::Sequential);
        assert!(bad[0].outcome.is_err() && bad[1].outcome.is_ok());
    }

    #[test]
    fn rigid_ladder_is_a_delta_at_one() {
        let levels: Vec<f64> = (0..50).map(|i| 0.25 * i as f64).collect();
        let band = split_bands(&levels, 1.0)[0];
        for unfolding in [Unfolding::Constant, Unfolding::default()] {
            let h = spacing_distribution(&levels, &band, &SpacingOptions { unfolding, ..Default::default() }).unwrap();
            let bin = (1.0 / h.bin_width()) as usize;
            assert!((h.densities[bin] * h.bin_width() - 1.0).abs() < 1e-12);
            assert_eq!(h.small_s_fraction(), 0.0);
        }
    }

    #[test]
    fn too_small_band_is_rejected() {
        let band = Band { lo_index: 0, hi_index: 0, e_min: 0.0, e_max: 0.0 };
        assert!(matches!(
            spacing_distribution(&[0.0], &band, &SpacingOptions::default()),
            Err(Error::BandTooSmall { .. })
        ));
    }

    #[test]
    fn overflow_is_clipped_into_last_bin() {
        let h = histogram(&[0.5, 1.5, 9.0], 4, 2.0, 1.0).unwrap();
        assert_eq!(h.overflow, 1);
        assert_eq!(h.densities, vec![0.0, 2.0 / 3.0, 0.0, 4.0 / 3.0]);
    }

    #[test]
    fn reference_densities() {
        assert_eq!(ReferenceDensity::Poisson.density(0.0), 1.0);
        assert_eq!(ReferenceDensity::WignerDyson.density(0.0), 0.0);
        // composite Simpson on [0, 40]
        for kind in [ReferenceDensity::Poisson, ReferenceDensity::WignerDyson, ReferenceDensity::WignerDysonUnitary] {
            let (a, b, n) = (0.0, 40.0, 20_000);
            let h = (b - a) / n as f64;
            let mut norm = 0.0;
            let mut mean = 0.0;
            for i in 0..=n {
                let s = a + i as f64 * h;
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                norm += w * kind.density(s);
                mean += w * s * kind.density(s);
            }
            assert!((norm * h / 3.0 - 1.0).abs() < 1e-10);
            assert!((mean * h / 3.0 - 1.0).abs() < 1e-10);
        }
    }

    fn exp_samples(n: usize, seed: u64) -> Vec<f64> {
        use rand_chacha::ChaCha8Rng;
        use rand_core::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Exp1.sample(&mut rng)).collect()
    }

    #[test]
    fn poisson_samples_are_closer_to_poisson() {
        let s = exp_samples(10_000, 1);
        let h = histogram(&s, 40, 4.0, 1.0).unwrap();
        let dp = distribution_distance(&h, ReferenceDensity::Poisson);
        let dw = distribution_distance(&h, ReferenceDensity::WignerDyson);
        assert!(dp.l1 < dw.l1);
        assert!((dp.small_s_fraction - (1.0 - (-0.1f64).exp())).abs() < 0.01);
        assert!(!closer_to_wigner_dyson(&h));
    }

    #[test]
    fn wigner_surmise_samples_are_closer_to_wigner_dyson() {
        // inverse CDF of the surmise: s = sqrt(-4 ln(1-u) / π)
        let mut st = Stream::new(5);
        let s: Vec<f64> = (0..10_000).map(|_| (-4.0 * (1.0 - st.uniform()).ln() / PI).sqrt()).collect();
        let h = histogram(&s, 40, 4.0, 1.0).unwrap();
        assert!(closer_to_wigner_dyson(&h));
    }

    #[test]
    fn pooling_matches_averaged_histograms() {
        let mut members = Vec::new();
        for seed in 0..8 {
            let mut acc = 0.0;
            let levels: Vec<f64> = exp_samples(400, 100 + seed).into_iter().map(|x| { acc += x; acc }).collect();
            members.push(levels);
        }
        let opts = SpacingOptions { unfolding: Unfolding::Constant, ..Default::default() };
        let pooled = pooled_spacing_distribution(
            members.iter().map(|e| (e.as_slice(), split_bands(e, f64::INFINITY)[0])),
            &opts,
        )
        .unwrap();
        let mut avg = vec![0.0; 40];
        for e in &members {
            let b = split_bands(e, f64::INFINITY)[0];
            let h = spacing_distribution(e, &b, &opts).unwrap();
            for (a, d) in avg.iter_mut().zip(&h.densities) {
                *a += d / members.len() as f64;
            }
        }
        let w = pooled.bin_width();
        let n = pooled.sample_count as f64;
        for (p, a) in pooled.densities.iter().zip(&avg) {
            // 3 sigma of the pooled bin count, in density units
            let sigma = (p * w * n).max(1.0).sqrt() / (n * w);
            assert!((p - a).abs() <= 3.0 * sigma, "{p} vs {a}");
        }
    }

    proptest! {
        #[test]
        fn unfolded_spacings_have_unit_mean(
            gaps in prop::collection::vec(0.0f64..5.0, 2..200),
            window in 0usize..15,
            local in any::<bool>(),
        ) {
            prop_assume!(gaps.iter().sum::<f64>() > 1e-6);
            let mut acc = 0.0;
            let mut levels = vec![0.0];
            for g in &gaps { acc += g; levels.push(acc); }
            let unfolding = if local { Unfolding::LocalMean { half_window: window } } else { Unfolding::Constant };
            let s = unfolded_spacings(&levels, unfolding).unwrap();
            let mean = s.iter().sum::<f64>() / s.len() as f64;
            prop_assert!((mean - 1.0).abs() < 1e-12);
            prop_assert!(s.iter().all(|&x| x >= 0.0));
            let band = split_bands(&levels, f64::INFINITY)[0];
            let h = spacing_distribution(&levels, &band, &SpacingOptions { unfolding, ..Default::default() }).unwrap();
            let total: f64 = h.densities.iter().map(|d| d * h.bin_width()).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }
    }
}
