//! Monte Carlo estimation of graph distributions and distance histograms.
//!
//! Work is split across `workers` independent ChaCha8 streams seeded from one
//! 64-bit seed; worker `w` uses stream `w`. Results are merged in worker
//! order, so output depends only on `(seed, samples, workers)` and not on
//! thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::connection::{edge_from_uniform, ConnectionModel};
use crate::error::{Error, Result};
use crate::geometry::{pair_count, pairs_0, sample_point_in_disk, DiskDomain, Point2D};
use crate::graph::{entropy_bits, EdgeVector, GraphPmf, PmfMethod};
use crate::scalar::Scalar;

/// Name written into output headers.
pub const RNG_NAME: &str = "ChaCha8";

/// Largest number of pairs for which a full pmf is tabulated.
pub const MAX_PMF_EDGES: usize = 20;

const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 1,
            workers: 1,
        }
    }
}

impl McSettings {
    pub fn new(samples: u64, seed: u64, workers: usize) -> Result<Self> {
        let s = Self { samples, seed, workers };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Argument("sample count must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Argument("worker count must be positive".into()));
        }
        Ok(())
    }

    /// Samples drawn by each worker: an even split with the remainder going to the first workers.
    pub fn shares(&self) -> Vec<u64> {
        let w = self.workers as u64;
        (0..w)
            .map(|i| self.samples / w + u64::from(i < self.samples % w))
            .collect()
    }
}

/// The generator used by worker `stream`.
pub fn worker_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_workers<A, F>(mc: &McSettings, f: F) -> Result<Vec<A>>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    mc.validate()?;
    let shares = mc.shares();
    Ok(shares
        .par_iter()
        .enumerate()
        .map(|(w, &count)| f(&mut worker_rng(mc.seed, w as u64), count))
        .collect())
}

/// Draws `n` points and then one uniform per pair in pair-index order.
fn draw_edges<T: Scalar, R: Rng + ?Sized>(
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    pairs: &[(usize, usize)],
    points: &mut [Point2D<T>],
    rng: &mut R,
    mut emit: impl FnMut(usize, bool),
) {
    for p in points.iter_mut() {
        *p = sample_point_in_disk(domain, rng);
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let r = points[i].distance(&points[j]);
        let u: f64 = rng.random();
        emit(k, edge_from_uniform(model.prob_unchecked(r), u));
    }
}

/// One random graph on `n` nodes.
pub fn sample_graph<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    rng: &mut R,
) -> Result<EdgeVector> {
    if n < 2 {
        return Err(Error::Argument(format!("a graph needs at least two nodes, got {n}")));
    }
    let pairs = pairs_0(n);
    let mut points = vec![Point2D::new(T::zero(), T::zero()); n];
    let mut bits = vec![false; pairs.len()];
    draw_edges(model, domain, &pairs, &mut points, rng, |k, b| bits[k] = b);
    EdgeVector::new(n, bits)
}

/// Count of every outcome code over `mc.samples` graphs.
pub fn outcome_counts<T: Scalar>(
    n: usize,
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    mc: &McSettings,
) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::Argument(format!("a graph needs at least two nodes, got {n}")));
    }
    let m = pair_count(n);
    if m > MAX_PMF_EDGES {
        return Err(Error::OutcomeSpaceTooLarge {
            edges: m,
            max_edges: MAX_PMF_EDGES,
        });
    }
    let pairs = pairs_0(n);
    let parts = run_workers(mc, |rng, count| {
        let mut counts = vec![0u64; 1 << m];
        let mut points = vec![Point2D::new(T::zero(), T::zero()); n];
        for _ in 0..count {
            let mut code = 0usize;
            draw_edges(model, domain, &pairs, &mut points, rng, |k, b| {
                code |= (b as usize) << k
            });
            counts[code] += 1;
        }
        counts
    })?;
    let mut total = vec![0u64; 1 << m];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(total)
}

/// Empirical pmf. The error estimate is the largest per-entry standard error.
pub fn estimate_pmf<T: Scalar>(
    n: usize,
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    mc: &McSettings,
) -> Result<GraphPmf<T>> {
    let counts = outcome_counts(n, model, domain, mc)?;
    pmf_from_counts(n, &counts)
}

pub fn pmf_from_counts<T: Scalar>(n: usize, counts: &[u64]) -> Result<GraphPmf<T>> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Argument("no samples".into()));
    }
    let nf = total as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / nf).collect();
    let se = probs.iter().map(|&p| (p * (1.0 - p) / nf).sqrt()).fold(0.0, f64::max);
    GraphPmf::new(
        n,
        probs.into_iter().map(T::lit).collect(),
        PmfMethod::MonteCarlo,
        T::lit(se),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntropyOptions {
    /// Add the `(K - 1) / (2 N ln 2)` bias correction, `K` the number of observed outcomes.
    pub miller_madow: bool,
    /// Multinomial bootstrap replicates for the standard error; fewer than two gives no error bar.
    pub bootstrap: usize,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            miller_madow: true,
            bootstrap: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate<T> {
    pub bits: T,
    /// Bootstrap standard deviation; NaN when no bootstrap was run.
    pub std_error: T,
    pub plug_in: T,
    pub observed_outcomes: usize,
    pub samples: u64,
}

/// Entropy of the graph on `n` nodes in bits.
pub fn estimate_entropy<T: Scalar>(
    n: usize,
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    mc: &McSettings,
    options: &EntropyOptions,
) -> Result<EntropyEstimate<T>> {
    let counts = outcome_counts(n, model, domain, mc)?;
    Ok(entropy_from_counts(&counts, options, mc.seed))
}

fn counts_entropy(counts: &[u64], miller_madow: bool) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let nf = total as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / nf).collect();
    let plug = entropy_bits(&probs);
    let k = counts.iter().filter(|&&c| c > 0).count();
    let corrected = if miller_madow && k > 1 {
        plug + (k - 1) as f64 / (2.0 * nf * std::f64::consts::LN_2)
    } else {
        plug
    };
    (plug, corrected)
}

/// Entropy estimate from outcome counts; the bootstrap draws from a stream reserved for it.
pub fn entropy_from_counts<T: Scalar>(counts: &[u64], options: &EntropyOptions, seed: u64) -> EntropyEstimate<T> {
    let total: u64 = counts.iter().sum();
    let (plug, bits) = counts_entropy(counts, options.miller_madow);
    let std_error = if options.bootstrap >= 2 && total > 0 {
        let mut rng = worker_rng(seed, BOOTSTRAP_STREAM);
        let reps: Vec<f64> = (0..options.bootstrap)
            .map(|_| counts_entropy(&resample(counts, total, &mut rng), options.miller_madow).1)
            .collect();
        let mean = reps.iter().sum::<f64>() / reps.len() as f64;
        let var = reps.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;
        var.sqrt()
    } else {
        f64::NAN
    };
    EntropyEstimate {
        bits: T::lit(bits),
        std_error: T::lit(std_error),
        plug_in: T::lit(plug),
        observed_outcomes: counts.iter().filter(|&&c| c > 0).count(),
        samples: total,
    }
}

/// Multinomial draw of `total` items with cell probabilities proportional to `counts`.
fn resample<R: Rng + ?Sized>(counts: &[u64], total: u64, rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; counts.len()];
    let (mut left, mut mass) = (total, total);
    for (o, &c) in out.iter_mut().zip(counts) {
        if c == 0 || left == 0 {
            continue;
        }
        let x = if c >= mass {
            left
        } else {
            Binomial::new(left, c as f64 / mass as f64)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        *o = x;
        left -= x;
        mass -= c;
    }
    out
}

fn bin_of<T: Scalar>(x: T, upper: T, bins: usize) -> usize {
    let b = (x / upper * T::lit(bins as f64)).to_usize().unwrap_or(0);
    b.min(bins - 1)
}

/// Counts of `(r12, r13, r23)` on a `bins^3` grid over `[0, D]^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram3<T> {
    pub bins: usize,
    pub diameter: T,
    /// Flat index `(i * bins + j) * bins + k` for bins `i, j, k` of `r12, r13, r23`.
    pub counts: Vec<u64>,
    pub total: u64,
    /// Sides were sorted ascending before binning.
    pub canonical: bool,
}

impl<T: Scalar> Histogram3<T> {
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.bins + j) * self.bins + k
    }

    pub fn count(&self, i: usize, j: usize, k: usize) -> u64 {
        self.counts[self.index(i, j, k)]
    }

    pub fn width(&self) -> T {
        self.diameter / T::lit(self.bins as f64)
    }

    /// Lower and upper corners of cell `(i, j, k)`.
    pub fn cell(&self, i: usize, j: usize, k: usize) -> ([T; 3], [T; 3]) {
        let h = self.width();
        let lo = [i, j, k].map(|b| T::lit(b as f64) * h);
        (lo, lo.map(|x| x + h))
    }
}

/// Histogram of the three distances between three uniform points.
pub fn distance_histogram3<T: Scalar>(
    domain: &DiskDomain<T>,
    mc: &McSettings,
    bins: usize,
    canonical: bool,
) -> Result<Histogram3<T>> {
    if bins == 0 {
        return Err(Error::Argument("bin count must be positive".into()));
    }
    let diam = domain.diameter();
    let parts = run_workers(mc, |rng, count| {
        let mut counts = vec![0u64; bins * bins * bins];
        for _ in 0..count {
            let p = [0; 3].map(|_| sample_point_in_disk(domain, rng));
            let mut r = [p[0].distance(&p[1]), p[0].distance(&p[2]), p[1].distance(&p[2])];
            if canonical {
                r.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            }
            let [i, j, k] = r.map(|x| bin_of(x, diam, bins));
            counts[(i * bins + j) * bins + k] += 1;
        }
        counts
    })?;
    let mut counts = vec![0u64; bins * bins * bins];
    for part in parts {
        for (t, c) in counts.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(Histogram3 {
        bins,
        diameter: diam,
        counts,
        total: mc.samples,
        canonical,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram1<T> {
    pub bins: usize,
    pub upper: T,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl<T: Scalar> Histogram1<T> {
    pub fn width(&self) -> T {
        self.upper / T::lit(self.bins as f64)
    }

    pub fn edges(&self, b: usize) -> (T, T) {
        let h = self.width();
        (T::lit(b as f64) * h, T::lit((b + 1) as f64) * h)
    }
}

/// Histogram of the distance between two uniform points over `[0, D]`.
pub fn pair_distance_histogram<T: Scalar>(
    domain: &DiskDomain<T>,
    mc: &McSettings,
    bins: usize,
) -> Result<Histogram1<T>> {
    if bins == 0 {
        return Err(Error::Argument("bin count must be positive".into()));
    }
    let diam = domain.diameter();
    let parts = run_workers(mc, |rng, count| {
        let mut counts = vec![0u64; bins];
        for _ in 0..count {
            let a = sample_point_in_disk(domain, rng);
            let b = sample_point_in_disk(domain, rng);
            counts[bin_of(a.distance(&b), diam, bins)] += 1;
        }
        counts
    })?;
    let mut counts = vec![0u64; bins];
    for part in parts {
        for (t, c) in counts.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(Histogram1 {
        bins,
        upper: diam,
        counts,
        total: mc.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shares_cover_all_samples() {
        let mc = McSettings::new(10, 0, 3).unwrap();
        assert_eq!(mc.shares(), vec![4, 3, 3]);
        assert!(McSettings::new(0, 0, 1).is_err());
        assert!(McSettings::new(1, 0, 0).is_err());
    }

    #[test]
    fn sample_graph_matches_counting_path() {
        let disk = DiskDomain::unit();
        let model = ConnectionModel::hard_disk(0.5).unwrap();
        let mut rng = worker_rng(9, 0);
        let mut expected = vec![0u64; 8];
        for _ in 0..1000 {
            let g = sample_graph(3, &model, &disk, &mut rng).unwrap();
            expected[g.code().unwrap() as usize] += 1;
        }
        let counts = outcome_counts(3, &model, &disk, &McSettings::new(1000, 9, 1).unwrap()).unwrap();
        assert_eq!(counts, expected);
    }

    #[test]
    fn resample_preserves_total_and_support() {
        let mut rng = worker_rng(1, 0);
        let counts = [5, 0, 10, 85];
        for _ in 0..50 {
            let r = resample(&counts, 100, &mut rng);
            assert_eq!(r.iter().sum::<u64>(), 100);
            assert_eq!(r[1], 0);
        }
    }

    #[test]
    fn miller_madow_term() {
        let counts = [50, 50];
        let e: EntropyEstimate<f64> = entropy_from_counts(&counts, &EntropyOptions::default(), 0);
        assert_eq!(e.plug_in, 1.0);
        assert!((e.bits - 1.0 - 1.0 / (200.0 * std::f64::consts::LN_2)).abs() < 1e-15);
        assert!(e.std_error.is_finite());
    }

    #[test]
    fn too_many_edges() {
        let disk = DiskDomain::unit();
        let model = ConnectionModel::hard_disk(0.5).unwrap();
        let r = outcome_counts(7, &model, &disk, &McSettings::new(10, 0, 1).unwrap());
        assert!(matches!(r, Err(Error::OutcomeSpaceTooLarge { edges: 21, .. })));
    }
}
