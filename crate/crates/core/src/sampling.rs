//! Streaming statistics of `Bs = Σ_M B²(ρ_{1M})` over random pure states.
//!
//! Samples are split into fixed chunks (further cut at checkpoints), each
//! chunk is reduced on its own and the partial results are merged in chunk
//! order, so the result does not depend on how chunks are scheduled.

use alloc::vec;
use alloc::vec::Vec;

use crate::chsh::bell_sum_squared;
use crate::exec::Executor;
use crate::random::{EnsembleKind, RandomEnsemble};
use crate::{Complex64, Error, Result, BOUND_TOL};

/// Samples per work item.
pub const SAMPLE_CHUNK: u64 = 4096;

/// Fractions of the bound whose tail counts are kept exactly.
pub const TRACKED_RATIOS: [f64; 4] = [0.9, 0.95, 0.99, 1.0];

pub const MIN_QUBITS: usize = 3;
pub const MAX_QUBITS: usize = 8;
pub const MIN_BINS: usize = 10;

/// `4(N − 1)`.
pub fn monogamy_bound(n_qubits: usize) -> f64 {
    4.0 * (n_qubits as f64 - 1.0)
}

/// `Bs` of sample `sample_index`, with qubit 0 as the shared party.
pub fn sample_value(n_qubits: usize, ensemble: &RandomEnsemble, sample_index: u64) -> f64 {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
    ensemble.fill_amplitudes(sample_index, &mut amps);
    bell_sum_squared(&amps, n_qubits, 0)
}

/// Welford accumulator with a fixed histogram and tail counters.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleAccumulator {
    bound: f64,
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
    argmax: u64,
    bins: Vec<u64>,
    tails: [u64; TRACKED_RATIOS.len()],
}

impl SampleAccumulator {
    /// Histogram of `bins` equal bins over `[0, bound]`.
    pub fn new(bound: f64, bins: usize) -> Self {
        SampleAccumulator {
            bound,
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmax: 0,
            bins: vec![0; bins],
            tails: [0; TRACKED_RATIOS.len()],
        }
    }

    pub fn push(&mut self, sample_index: u64, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        if x > self.max {
            self.max = x;
            self.argmax = sample_index;
        }
        let nb = self.bins.len();
        let pos = libm::floor(x / self.bound * nb as f64);
        let bin = if pos < 0.0 {
            0
        } else {
            (pos as usize).min(nb - 1)
        };
        self.bins[bin] += 1;
        for (t, r) in self.tails.iter_mut().zip(TRACKED_RATIOS) {
            if x >= r * self.bound - BOUND_TOL {
                *t += 1;
            }
        }
    }

    /// Appends `other`, which must cover later sample indices.
    pub fn merge(&mut self, other: &SampleAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        if other.max > self.max {
            self.max = other.max;
            self.argmax = other.argmax;
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        for (a, b) in self.tails.iter_mut().zip(other.tails) {
            *a += b;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (0 for fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingConfig {
    pub n_qubits: usize,
    pub samples: u64,
    pub ensemble: RandomEnsemble,
    pub bins: usize,
    /// Sample counts at which running mean and deviation are recorded.
    pub checkpoints: Vec<u64>,
}

impl SamplingConfig {
    pub fn new(n_qubits: usize, samples: u64, kind: EnsembleKind, seed: u64) -> Self {
        SamplingConfig {
            n_qubits,
            samples,
            ensemble: RandomEnsemble::new(kind, seed),
            bins: 100,
            checkpoints: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(Error::QubitCount(self.n_qubits));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter {
                name: "samples",
                detail: "must be at least 1".into(),
            });
        }
        if self.bins < MIN_BINS {
            return Err(Error::InvalidParameter {
                name: "bins",
                detail: alloc::format!("must be at least {MIN_BINS} (got {})", self.bins),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub samples: u64,
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats {
    pub n_qubits: usize,
    pub ensemble: RandomEnsemble,
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub bound: f64,
    pub histogram: Vec<HistogramBin>,
    /// `(ratio, number of samples with Bs ≥ ratio·bound − 1e-9)`.
    pub tails: Vec<(f64, u64)>,
    pub checkpoints: Vec<Checkpoint>,
}

impl SampleStats {
    fn from_accumulator(
        cfg: &SamplingConfig,
        acc: &SampleAccumulator,
        checkpoints: Vec<Checkpoint>,
    ) -> Self {
        let width = acc.bound / acc.bins.len() as f64;
        let histogram = acc
            .bins
            .iter()
            .enumerate()
            .map(|(k, &count)| HistogramBin {
                lo: width * k as f64,
                hi: if k + 1 == acc.bins.len() {
                    acc.bound
                } else {
                    width * (k + 1) as f64
                },
                count,
            })
            .collect();
        SampleStats {
            n_qubits: cfg.n_qubits,
            ensemble: cfg.ensemble,
            count: acc.count,
            mean: acc.mean,
            variance: acc.variance(),
            min: acc.min,
            max: acc.max,
            bound: acc.bound,
            histogram,
            tails: TRACKED_RATIOS.iter().copied().zip(acc.tails).collect(),
            checkpoints,
        }
    }

    pub fn stddev(&self) -> f64 {
        libm::sqrt(self.variance)
    }

    /// Fraction of samples with `Bs ≥ ratio·bound` (within 1e-9). Only the
    /// ratios in [`TRACKED_RATIOS`] are available.
    pub fn saturation_fraction(&self, ratio: f64) -> Option<f64> {
        self.tails
            .iter()
            .find(|(r, _)| (r - ratio).abs() < 1e-12)
            .map(|&(_, c)| c as f64 / self.count as f64)
    }

    /// Relative frequency of each histogram bin.
    pub fn frequencies(&self) -> Vec<f64> {
        self.histogram
            .iter()
            .map(|b| b.count as f64 / self.count as f64)
            .collect()
    }
}

/// Work item boundaries: multiples of [`SAMPLE_CHUNK`] and every checkpoint.
fn chunk_ranges(samples: u64, checkpoints: &[u64]) -> Vec<(u64, u64)> {
    let mut cuts: Vec<u64> = (1..=samples.div_ceil(SAMPLE_CHUNK))
        .map(|k| (k * SAMPLE_CHUNK).min(samples))
        .chain(
            checkpoints
                .iter()
                .copied()
                .filter(|&c| c > 0 && c < samples),
        )
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut start = 0;
    cuts.into_iter()
        .map(|end| {
            let r = (start, end);
            start = end;
            r
        })
        .collect()
}

/// Draws `cfg.samples` states and reduces their `Bs` values.
///
/// Fails with [`Error::MonogamyViolation`] if any sample exceeds
/// `4(N − 1) + 1e-9`.
pub fn run_sampling<E: Executor>(cfg: &SamplingConfig, exec: &E) -> Result<SampleStats> {
    cfg.validate()?;
    let n = cfg.n_qubits;
    let bound = monogamy_bound(n);
    let ranges = chunk_ranges(cfg.samples, &cfg.checkpoints);
    let partials = exec.map_indexed(ranges.len(), |k| {
        let (lo, hi) = ranges[k];
        let mut acc = SampleAccumulator::new(bound, cfg.bins);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
        for idx in lo..hi {
            cfg.ensemble.fill_amplitudes(idx, &mut amps);
            acc.push(idx, bell_sum_squared(&amps, n, 0));
        }
        acc
    });

    let mut total = SampleAccumulator::new(bound, cfg.bins);
    let mut checkpoints = Vec::new();
    for part in &partials {
        total.merge(part);
        if cfg.checkpoints.contains(&total.count) {
            checkpoints.push(Checkpoint {
                samples: total.count,
                mean: total.mean,
                stddev: libm::sqrt(total.variance()),
            });
        }
    }
    if total.max > bound + BOUND_TOL {
        return Err(Error::MonogamyViolation {
            sum: total.max,
            bound,
            sample: total.argmax,
        });
    }
    Ok(SampleStats::from_accumulator(cfg, &total, checkpoints))
}

/// Running mean and deviation at `10^k` samples for `k = 1..`, up to
/// `samples`.
pub fn decade_checkpoints(samples: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10u64;
    while c <= samples {
        out.push(c);
        match c.checked_mul(10) {
            Some(next) => c = next,
            None => break,
        }
    }
    out
}

/// Running means of several qubit counts at shared checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub ensemble: RandomEnsemble,
    pub n_qubits: Vec<usize>,
    pub checkpoints: Vec<u64>,
    /// `rows[c][k]`: checkpoint `c`, qubit count `n_qubits[k]`.
    pub rows: Vec<Vec<Checkpoint>>,
    /// Full statistics of each run, in `n_qubits` order.
    pub stats: Vec<SampleStats>,
}

/// One streaming run per qubit count, `checkpoints.last()` samples each,
/// recording the running mean at every checkpoint.
pub fn convergence_table<E: Executor>(
    n_qubits: &[usize],
    checkpoints: &[u64],
    ensemble: RandomEnsemble,
    bins: usize,
    exec: &E,
) -> Result<ConvergenceTable> {
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParameter {
            name: "checkpoints",
            detail: "must be positive and strictly ascending".into(),
        });
    }
    let samples = *checkpoints.last().expect("non-empty");
    let configs: Vec<SamplingConfig> = n_qubits
        .iter()
        .map(|&n| SamplingConfig {
            n_qubits: n,
            samples,
            ensemble,
            bins,
            checkpoints: checkpoints.to_vec(),
        })
        .collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let stats = configs
        .iter()
        .map(|cfg| run_sampling(cfg, exec))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..checkpoints.len())
        .map(|c| stats.iter().map(|s| s.checkpoints[c]).collect())
        .collect();
    Ok(ConvergenceTable {
        ensemble,
        n_qubits: n_qubits.to_vec(),
        checkpoints: checkpoints.to_vec(),
        rows,
        stats,
    })
}
