//! Seeded Monte Carlo estimation and goodness-of-fit tests.
//!
//! Trial `t` of an estimate always draws from the ChaCha8 stream `t` keyed
//! by the master seed, and partial sums are reduced over fixed-size chunks
//! in trial order. Results are therefore bit-identical whatever the thread
//! count or scheduling.
//!
//! Estimators for different policies that share a `SystemConfig` see the
//! same channel draws (common random numbers). Derive a new seed with
//! [`derive_seed`] when independent samples are needed.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::beamforming::{self, received_coefficients};
use crate::error::{Error, Result};
use crate::model::{CellRealization, Policy, SystemConfig, UserChannel};
use crate::scheduling::{self, post_scheduling_sinr};

const CHUNK: usize = 2048;

/// Sample mean with its standard error `s / sqrt(trials)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    /// `|mean - target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.mean == target {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - target).abs() / self.stderr
        }
    }
}

/// Identifies an independent random stream: the master seed keys the
/// generator and the index selects one of its 2^64 streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// SplitMix64 mix of `master` and `tag`.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard circular complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

fn fill_cell<R: Rng + ?Sized>(rng: &mut R, n: usize, out: &mut Vec<UserChannel>) {
    out.clear();
    out.extend((0..n).map(|_| {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        UserChannel { a, b }
    }));
}

/// `n` users with independent `a, b ~ CN(0, 1)` drawn from `stream`.
pub fn sample_cell(stream: RngStream, cfg: &SystemConfig) -> Vec<UserChannel> {
    let mut rng = stream.rng();
    let mut cell = Vec::with_capacity(cfg.users_per_cell);
    fill_cell(&mut rng, cfg.users_per_cell, &mut cell);
    cell
}

/// A window of `num_cells` cells. The last cell has no right neighbour, so
/// its users' cross gains are zero.
pub fn sample_window<R: Rng + ?Sized>(rng: &mut R, cfg: &SystemConfig) -> CellRealization {
    let mut cells = Vec::with_capacity(cfg.num_cells);
    for i in 0..cfg.num_cells {
        let mut cell = Vec::with_capacity(cfg.users_per_cell);
        fill_cell(rng, cfg.users_per_cell, &mut cell);
        if i + 1 == cfg.num_cells {
            for u in &mut cell {
                u.b = Complex64::new(0.0, 0.0);
            }
        }
        cells.push(cell);
    }
    CellRealization::new(cells).expect("rectangular by construction")
}

#[derive(Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

/// Mean and standard error of `trial(rng, buffer)` over `trials` trials,
/// trial `t` drawing from stream `t` of `seed`. The buffer is scratch space
/// reused between trials.
pub fn estimate<F>(seed: u64, trials: usize, trial: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<UserChannel>) -> f64 + Sync,
{
    if trials < 2 {
        return Err(Error::domain("estimate", trials as f64, "trials >= 2"));
    }
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Moments::EMPTY;
            let mut buffer = Vec::new();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = RngStream::new(seed, t as u64).rng();
                acc.push(trial(&mut rng, &mut buffer));
            }
            acc
        })
        .collect();
    let total = partials.into_iter().fold(Moments::EMPTY, Moments::merge);
    let var = total.m2 / (total.count - 1) as f64;
    Ok(Estimate {
        mean: total.mean,
        stderr: (var / total.count as f64).sqrt(),
        trials: total.count,
    })
}

/// Every trial's value, in trial order, under the same stream convention as [`estimate`].
pub fn collect_samples<F>(seed: u64, count: usize, trial: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<UserChannel>) -> f64 + Sync,
{
    (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut buffer = Vec::new();
            let range = c * CHUNK..((c + 1) * CHUNK).min(count);
            range
                .map(|t| {
                    let mut rng = RngStream::new(seed, t as u64).rng();
                    trial(&mut rng, &mut buffer)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn scheduled_sinr(policy: Policy, cfg: &SystemConfig, rng: &mut ChaCha8Rng, cell: &mut Vec<UserChannel>) -> f64 {
    fill_cell(rng, cfg.users_per_cell, cell);
    post_scheduling_sinr(policy, cell, cfg).expect("n >= 1")
}

/// Mean post-scheduling SINR over `trials` independent cell draws.
pub fn estimate_mean_sinr(policy: Policy, cfg: &SystemConfig, trials: usize) -> Result<Estimate> {
    let cfg = cfg.validate()?;
    estimate(cfg.seed, trials, |rng, cell| scheduled_sinr(policy, &cfg, rng, cell))
}

/// Per-cell sum-rate `E log2(1 + SINR)`.
pub fn estimate_sum_rate(policy: Policy, cfg: &SystemConfig, trials: usize) -> Result<Estimate> {
    let cfg = cfg.validate()?;
    estimate(cfg.seed, trials, |rng, cell| {
        scheduled_sinr(policy, &cfg, rng, cell).ln_1p() / std::f64::consts::LN_2
    })
}

/// `count` post-scheduling SINR samples in trial order.
pub fn sample_post_scheduling_sinr(policy: Policy, cfg: &SystemConfig, count: usize) -> Result<Vec<f64>> {
    let cfg = cfg.validate()?;
    Ok(collect_samples(cfg.seed, count, |rng, cell| {
        scheduled_sinr(policy, &cfg, rng, cell)
    }))
}

/// One-sample Kolmogorov–Smirnov distance `sup_x |F_n(x) - F(x)|`.
///
/// Both one-sided limits are compared at every distinct sample value, so
/// targets with atoms (the ZF law at zero) are handled exactly.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((below - cdf(v.next_down())).abs());
        d = d.max((at - cdf(v)).abs());
        i = j;
    }
    d
}

/// Two-sample Kolmogorov–Smirnov distance between empirical distributions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic one-sample critical value at `alpha = 0.01`.
pub fn ks_critical_value(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Asymptotic two-sample critical value at `alpha = 0.01`.
pub fn ks_two_sample_critical_value(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.63 * ((n + m) / (n * m)).sqrt()
}

/// Signal, interference and noise seen by one cell's scheduled user.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub cell: usize,
    pub scheduled: usize,
    pub user: UserChannel,
    /// Cells `0..N-1`; the boundary cell is excluded from statistics.
    pub interior: bool,
    /// `|a| >= beta |b|` for the scheduled user.
    pub cancellable: bool,
    /// Coefficient of the user's own symbol.
    pub signal_gain: Complex64,
    /// `sum_{j != i} |coefficient_j|^2`.
    pub interference_power: f64,
    /// Largest cross-symbol coefficient relative to `sqrt(rho) (|a| + beta |b|)`.
    pub relative_residual: f64,
    pub noise: Complex64,
    /// `a x_i + beta b x_{i+1} + z` computed from the antenna outputs.
    pub received: Complex64,
    /// `|signal|^2 / (1 + interference)`, with unit-power symbols and noise.
    pub sinr: f64,
    /// `rho [|a|^2 - beta^2 |b|^2]_+` from the scalar model.
    pub scalar_sinr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub cells: Vec<CellRecord>,
    pub symbols: Vec<Complex64>,
    pub antenna_power: Vec<f64>,
    pub row_power: Vec<f64>,
    /// Windows redrawn because a scheduled channel was exactly zero.
    pub resamples: usize,
}

/// Simulates one slot through the full matrix model: draw a window,
/// schedule every cell with `ZfOptimal`, precode unit-modulus symbols,
/// pass them through `y_i = a_i x_i + beta b_i x_{i+1} + z_i` and decompose
/// each received signal.
pub fn end_to_end_slot(stream: RngStream, cfg: &SystemConfig) -> Result<SlotRecord> {
    let cfg = cfg.validate()?;
    let mut rng = stream.rng();
    let mut resamples = 0;
    let (scheduled, chosen, window) = loop {
        let realization = sample_window(&mut rng, &cfg);
        let mut scheduled = Vec::with_capacity(cfg.num_cells);
        let mut chosen = Vec::with_capacity(cfg.num_cells);
        for cell in realization.cells() {
            let pick = scheduling::schedule(Policy::ZfOptimal, cell, &cfg)?;
            chosen.push(pick.chosen_index);
            scheduled.push(cell[pick.chosen_index]);
        }
        match beamforming::build_precoder(&scheduled, &cfg) {
            Ok(w) => break (scheduled, chosen, w),
            Err(Error::DegenerateChannel { .. }) => resamples += 1,
            Err(e) => return Err(e),
        }
    };

    let size = cfg.num_cells;
    let symbols: Vec<Complex64> = (0..size)
        .map(|_| {
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    let x = beamforming::apply_precoder(&window, &symbols)?;
    let sqrt_rho = cfg.rho.sqrt();

    let cells = (0..size)
        .map(|i| {
            let user = scheduled[i];
            let noise = complex_gaussian(&mut rng);
            let neighbour = if i + 1 < size {
                x[i + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let received = user.a * x[i] + user.b * cfg.beta * neighbour + noise;
            let coeffs = received_coefficients(&window, &scheduled, i, &cfg);
            let signal_gain = coeffs[i];
            let interference_power: f64 = coeffs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.norm_sqr())
                .sum();
            let max_cross = coeffs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            let scale = sqrt_rho * (user.a.norm() + cfg.beta * user.b.norm());
            CellRecord {
                cell: i,
                scheduled: chosen[i],
                user,
                interior: i + 1 < size,
                cancellable: user.a.norm() >= cfg.beta * user.b.norm(),
                signal_gain,
                interference_power,
                relative_residual: if scale > 0.0 { max_cross / scale } else { 0.0 },
                noise,
                received,
                sinr: signal_gain.norm_sqr() / (1.0 + interference_power),
                scalar_sinr: scheduling::zf_sinr(&user, &cfg),
            }
        })
        .collect();

    Ok(SlotRecord {
        cells,
        symbols,
        antenna_power: x.iter().map(Complex64::norm_sqr).collect(),
        row_power: (0..size).map(|i| window.row_power(i)).collect(),
        resamples,
    })
}

/// Decoded SINR samples from interior cells of consecutive end-to-end slots
/// (slot `s` uses stream `s` of `cfg.seed`), truncated to `count`.
pub fn matrix_path_sinr_samples(cfg: &SystemConfig, count: usize) -> Result<Vec<f64>> {
    let cfg = cfg.validate()?;
    let per_slot = cfg.num_cells - 1;
    let slots = count.div_ceil(per_slot);
    let per: Vec<Vec<f64>> = (0..slots)
        .into_par_iter()
        .map(|s| {
            end_to_end_slot(RngStream::new(cfg.seed, s as u64), &cfg)
                .map(|slot| slot.cells.iter().filter(|c| c.interior).map(|c| c.sinr).collect())
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<f64> = per.into_iter().flatten().collect();
    out.truncate(count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::model::DistKind;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = SystemConfig::new(5, 1.0, 1.0);
        let a = sample_cell(RngStream::new(9, 3), &cfg);
        let b = sample_cell(RngStream::new(9, 3), &cfg);
        let c = sample_cell(RngStream::new(9, 4), &cfg);
        let d = sample_cell(RngStream::new(10, 3), &cfg);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn unit_power_gains() {
        let trials = 1_000_000;
        let a2 = estimate(1, trials, |rng, _| complex_gaussian(rng).norm_sqr()).unwrap();
        assert!(a2.z_score(1.0) < 4.0, "{a2:?}");
        let cfg = SystemConfig::new(1, 1.0, 1.0);
        let b2 = estimate(2, trials, |rng, cell| {
            fill_cell(rng, 1, cell);
            cell[0].gain_cross()
        })
        .unwrap();
        assert!(b2.z_score(1.0) < 4.0, "{b2:?}");
        // components are N(0, 1/2)
        let re2 = estimate(3, trials, |rng, _| complex_gaussian(rng).re.powi(2)).unwrap();
        assert!(re2.z_score(0.5) < 4.0);
        let _ = cfg;
    }

    #[test]
    fn window_entries_have_unit_power() {
        let cfg = SystemConfig::new(4, 1.0, 1.0).with_cells(8);
        let mut rng = RngStream::new(77, 0).rng();
        let (mut sum_a, mut sum_b, mut sum_a2, mut sum_b2, mut count) = (0.0, 0.0, 0.0, 0.0, 0usize);
        for _ in 0..(1_000_000 / 28) {
            let w = sample_window(&mut rng, &cfg);
            assert!(w.cells()[7].iter().all(|u| u.b == Complex64::new(0.0, 0.0)));
            for cell in &w.cells()[..7] {
                for u in cell {
                    let (ga, gb) = (u.gain_local(), u.gain_cross());
                    sum_a += ga;
                    sum_b += gb;
                    sum_a2 += ga * ga;
                    sum_b2 += gb * gb;
                    count += 1;
                }
            }
        }
        let n = count as f64;
        for (s, s2) in [(sum_a, sum_a2), (sum_b, sum_b2)] {
            let mean = s / n;
            let se = ((s2 / n - mean * mean) / n).sqrt();
            assert!((mean - 1.0).abs() < 4.0 * se);
        }
    }

    #[test]
    fn local_gain_is_unit_exponential() {
        let samples = collect_samples(11, 100_000, |rng, _| complex_gaussian(rng).norm_sqr());
        let d = ks_statistic(&samples, |x| if x < 0.0 { 0.0 } else { 1.0 - (-x).exp() });
        assert!(d < ks_critical_value(samples.len()), "D = {d}");
    }

    #[test]
    fn estimates_are_deterministic_across_thread_counts() {
        let cfg = SystemConfig::new(7, 0.8, 5.0).with_seed(1234);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| estimate_mean_sinr(Policy::ZfOptimal, &cfg, 20_001).unwrap());
        let b = four.install(|| estimate_mean_sinr(Policy::ZfOptimal, &cfg, 20_001).unwrap());
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let s1 = one.install(|| sample_post_scheduling_sinr(Policy::ScpSinr, &cfg, 5000).unwrap());
        let s4 = four.install(|| sample_post_scheduling_sinr(Policy::ScpSinr, &cfg, 5000).unwrap());
        assert_eq!(s1, s4);
    }

    #[test]
    fn estimate_rejects_single_trial() {
        assert!(estimate(0, 1, |_, _| 0.0).is_err());
        assert!(estimate_mean_sinr(Policy::MaxGain, &SystemConfig::default().with_users(0), 10).is_err());
    }

    #[test]
    fn stderr_halves_with_four_times_the_trials() {
        let cfg = SystemConfig::new(5, 1.0, 10.0);
        for seed in [1u64, 2, 3] {
            let small = estimate_mean_sinr(Policy::ZfOptimal, &cfg.with_seed(seed), 25_000).unwrap();
            let large = estimate_mean_sinr(Policy::ZfOptimal, &cfg.with_seed(seed + 100), 100_000).unwrap();
            let ratio = small.stderr / large.stderr;
            assert!((ratio - 2.0).abs() < 0.4, "ratio = {ratio}");
        }
    }

    #[test]
    fn mean_sinr_examples() {
        let scn = estimate_mean_sinr(Policy::MaxGain, &SystemConfig::new(10, 0.0, 10.0), 1_000_000).unwrap();
        assert!(scn.z_score(29.289_682_539_682_54) < 4.0, "{scn:?}");
        let zf = estimate_mean_sinr(Policy::ZfOptimal, &SystemConfig::new(1, 1.0, 1.0), 1_000_000).unwrap();
        assert!(zf.z_score(0.5) < 4.0, "{zf:?}");
        let ratio = estimate_mean_sinr(Policy::ZfRatio, &SystemConfig::new(100, 1.0, 1.0), 100_000).unwrap();
        assert!(ratio.mean < 2.0);
        for n in [3usize, 30] {
            let c = SystemConfig::new(n, 0.7, 10.0);
            let e = estimate_mean_sinr(Policy::ZfRatio, &c, 200_000).unwrap();
            assert!(e.z_score(analytic::mean_sinr_zf3(n as u64, &c)) < 4.0, "{e:?}");
        }
    }

    #[test]
    fn two_user_means_match_closed_forms() {
        let cfg = SystemConfig::new(2, 1.0, 1.0).with_seed(5);
        let zf = estimate_mean_sinr(Policy::ZfOptimal, &cfg, 400_000).unwrap();
        assert!(zf.z_score(0.875) < 4.0, "{zf:?}");
        let zf2 = estimate_mean_sinr(Policy::MaxGain, &cfg, 400_000).unwrap();
        assert!(zf2.z_score(1.5 - 2.0 / 3.0) < 4.0, "{zf2:?}");
    }

    #[test]
    fn sum_rate_examples() {
        let tiny = estimate_sum_rate(Policy::MaxGain, &SystemConfig::new(3, 0.0, 1e-9), 1000).unwrap();
        assert!(tiny.mean < 1e-8);
        let cfg = SystemConfig::new(10, 0.0, 10.0);
        let mc = estimate_sum_rate(Policy::MaxGain, &cfg, 200_000).unwrap();
        let exact = analytic::sum_rate_numeric(DistKind::Scn, 10.0, &cfg).unwrap();
        assert!(mc.z_score(exact) < 4.0, "{mc:?} vs {exact}");
        for n in [10usize, 100] {
            let cfg = SystemConfig::new(n, 1.0, 10.0);
            let zf = estimate_sum_rate(Policy::ZfOptimal, &cfg, 20_000).unwrap();
            let scp = estimate_sum_rate(Policy::ScpSinr, &cfg, 20_000).unwrap();
            assert!(zf.mean > scp.mean);
        }
    }

    #[test]
    fn ks_examples() {
        // inverse-transform samples from Exp(1)
        let samples = collect_samples(21, 100_000, |rng, _| -(1.0 - rng.random::<f64>()).ln());
        let d = ks_statistic(&samples, |x| 1.0 - (-x).exp());
        assert!(d < ks_critical_value(100_000));
        let constant = vec![1.0; 50];
        assert!(ks_statistic(&constant, |x| 1.0 - (-x).exp()) >= 0.5);
        assert!(ks_statistic(&[0.0; 20], |x| if x < 0.0 { 0.0 } else { x.min(1.0) }) >= 0.99);
    }

    #[test]
    fn ks_handles_atoms() {
        // half the mass at zero, exponential above
        let cfg = SystemConfig::new(1, 1.0, 1.0);
        let samples: Vec<f64> = (0..1000)
            .map(|i| {
                if i < 500 {
                    0.0
                } else {
                    -((1000 - i) as f64 / 500.0).ln()
                }
            })
            .collect();
        let d = ks_statistic(&samples, |x| analytic::cdf(DistKind::Zf, x, &cfg));
        assert!(d < 0.01, "D = {d}");
    }

    #[test]
    fn ks_two_sample_basics() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b: Vec<f64> = (0..100).map(|i| i as f64 + 1000.0).collect();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
        let c: Vec<f64> = (0..100).map(|i| i as f64 + 50.0).collect();
        assert!((ks_two_sample(&a, &c) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn end_to_end_decoupled_without_cross_path() {
        let cfg = SystemConfig::new(4, 0.0, 10.0).with_cells(6);
        for s in 0..20 {
            let slot = end_to_end_slot(RngStream::new(3, s), &cfg).unwrap();
            for c in &slot.cells {
                assert_eq!(c.interference_power, 0.0);
                assert!((c.sinr - cfg.rho * c.user.gain_local()).abs() <= 1e-12 * c.sinr);
            }
        }
    }

    #[test]
    fn end_to_end_slot_is_consistent() {
        let cfg = SystemConfig::new(3, 1.0, 10.0).with_cells(10);
        for s in 0..200 {
            let slot = end_to_end_slot(RngStream::new(8, s), &cfg).unwrap();
            assert_eq!(slot.resamples, 0);
            for (i, c) in slot.cells.iter().enumerate() {
                // received signal matches its decomposition
                let rebuilt = c.signal_gain * slot.symbols[i] + c.noise;
                let interference_bound = c.interference_power.sqrt() * (cfg.num_cells as f64).sqrt();
                assert!((c.received - rebuilt).norm() <= interference_bound + 1e-10);
                assert!(slot.row_power[i] <= 1.0 + 1e-12);
                if c.interior && c.cancellable {
                    assert!(c.relative_residual <= 1e-12);
                    assert!(
                        c.interference_power <= 1e-20 * c.signal_gain.norm_sqr().max(1e-300)
                            || c.interference_power < 1e-24
                    );
                    assert!((c.sinr - c.scalar_sinr).abs() <= 1e-10 * c.scalar_sinr.max(1e-300));
                    assert!((c.received - rebuilt).norm() <= 1e-10);
                }
                if !c.cancellable {
                    assert_eq!(c.sinr, 0.0);
                    assert_eq!(c.scalar_sinr, 0.0);
                }
            }
        }
    }
}
