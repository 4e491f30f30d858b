//! Monte Carlo plumbing: per-trial random streams, trial runners, binomial
//! estimates, exhaustive enumeration of a sampler's random choices, and the
//! chi-square homogeneity statistic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub type TrialRng = ChaCha12Rng;

/// The random stream of trial `index` under `master_seed`.
///
/// Every trial gets its own ChaCha stream keyed by the master seed, so
/// results do not depend on how trials are scheduled across threads.
pub fn trial_rng(master_seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Runs independent trials and returns their results in index order.
pub trait TrialRunner {
    fn run<T, F>(&self, trials: u64, master_seed: u64, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, &mut TrialRng) -> T + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, trials: u64, master_seed: u64, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, &mut TrialRng) -> T + Sync + Send,
    {
        (0..trials)
            .map(|i| trial(i, &mut trial_rng(master_seed, i)))
            .collect()
    }
}

/// A Bernoulli frequency: `hits` successes out of `trials`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub trials: u64,
    pub hits: u64,
}

impl Estimate {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = bool>) -> Self {
        let mut e = Estimate { trials: 0, hits: 0 };
        for hit in outcomes {
            e.trials += 1;
            e.hits += hit as u64;
        }
        e
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.hits as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(r(1-r)/trials)`.
    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let r = self.rate();
        libm::sqrt(r * (1.0 - r) / self.trials as f64)
    }

    /// Lower end of the one-sided Wilson score interval at normal quantile `z`
    /// (`z = 2.326` for 99% confidence).
    pub fn wilson_lower(&self, z: f64) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let n = self.trials as f64;
        let r = self.rate();
        let z2 = z * z;
        let centre = r + z2 / (2.0 * n);
        let spread = z * libm::sqrt(r * (1.0 - r) / n + z2 / (4.0 * n * n));
        ((centre - spread) / (1.0 + z2 / n)).max(0.0)
    }
}

/// One-sided 99% normal quantile.
pub const Z_99: f64 = 2.326_347_874;

/// A source of uniform discrete choices.
///
/// Samplers draw all their randomness through this trait so that the same
/// code can be driven by an RNG or walked exhaustively by [`enumerate_paths`].
pub trait Choices {
    /// Uniform on `0..bound`; `bound >= 1`.
    fn below(&mut self, bound: u64) -> u64;

    fn bit(&mut self) -> bool {
        self.below(2) == 1
    }

    /// A uniform permutation of `0..len` by Fisher-Yates.
    fn permutation(&mut self, len: usize) -> Vec<u32> {
        let mut perm: Vec<u32> = (0..len as u32).collect();
        for i in (1..len).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        perm
    }
}

impl<R: RngCore + ?Sized> Choices for R {
    fn below(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1);
        self.random_range(0..bound)
    }
}

/// Replays a fixed prefix of choices, then always answers 0, recording
/// every choice made with its bound.
pub struct PathWalker {
    prefix: Vec<u64>,
    record: Vec<(u64, u64)>,
}

impl Choices for PathWalker {
    fn below(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1);
        let pos = self.record.len();
        let v = self.prefix.get(pos).copied().unwrap_or(0);
        assert!(v < bound, "choice tree is not deterministic");
        self.record.push((v, bound));
        v
    }
}

/// Runs `sampler` once along every possible sequence of choices and
/// aggregates `key(output)` with its exact probability.
///
/// The sampler must be a deterministic function of its choices. Returns an
/// error if more than `max_paths` paths would be visited.
pub fn enumerate_paths<K, T>(
    max_paths: u64,
    mut sampler: impl FnMut(&mut PathWalker) -> T,
    mut key: impl FnMut(T) -> K,
) -> crate::Result<BTreeMap<K, BigRational>>
where
    K: Ord,
{
    // Per key: path-count keyed by the product of bounds along the path.
    let mut tallies: BTreeMap<K, BTreeMap<u128, u64>> = BTreeMap::new();
    let mut prefix: Vec<u64> = Vec::new();
    let mut visited = 0u64;
    loop {
        visited += 1;
        if visited > max_paths {
            return Err(crate::Error::BudgetExceeded {
                needed: visited as u128,
                budget: max_paths as u128,
            });
        }
        let mut walker = PathWalker {
            prefix: core::mem::take(&mut prefix),
            record: Vec::new(),
        };
        let out = sampler(&mut walker);
        let weight = walker
            .record
            .iter()
            .try_fold(1u128, |acc, &(_, b)| acc.checked_mul(b as u128))
            .expect("path probability denominator overflows u128");
        *tallies.entry(key(out)).or_default().entry(weight).or_insert(0) += 1;

        let record = walker.record;
        match record.iter().rposition(|&(v, b)| v + 1 < b) {
            Some(i) => {
                prefix = record[..i].iter().map(|&(v, _)| v).collect();
                prefix.push(record[i].0 + 1);
            }
            None => break,
        }
    }
    Ok(tallies
        .into_iter()
        .map(|(k, by_weight)| {
            let p = by_weight.into_iter().fold(BigRational::zero(), |acc, (w, c)| {
                acc + BigRational::new(BigInt::from(c), BigInt::from(w))
            });
            (k, p)
        })
        .collect())
}

/// Pearson chi-square statistic for homogeneity of two samples over the
/// same categories. Categories whose pooled count is below `min_pooled` are
/// merged into one bin. Returns `(statistic, degrees_of_freedom)`.
pub fn chi_square_homogeneity<K: Ord + Clone>(
    a: &BTreeMap<K, u64>,
    b: &BTreeMap<K, u64>,
    min_pooled: u64,
) -> (f64, u64) {
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let mut rare = (0u64, 0u64);
    for k in keys {
        let (x, y) = (
            a.get(k).copied().unwrap_or(0),
            b.get(k).copied().unwrap_or(0),
        );
        if x + y < min_pooled {
            rare.0 += x;
            rare.1 += y;
        } else {
            bins.push((x, y));
        }
    }
    if rare.0 + rare.1 > 0 {
        bins.push(rare);
    }
    let na: u64 = bins.iter().map(|b| b.0).sum();
    let nb: u64 = bins.iter().map(|b| b.1).sum();
    let total = (na + nb) as f64;
    let mut stat = 0.0;
    for &(x, y) in &bins {
        let pooled = (x + y) as f64;
        let ea = pooled * na as f64 / total;
        let eb = pooled * nb as f64 / total;
        if ea > 0.0 {
            stat += (x as f64 - ea) * (x as f64 - ea) / ea;
        }
        if eb > 0.0 {
            stat += (y as f64 - eb) * (y as f64 - eb) / eb;
        }
    }
    (stat, bins.len().saturating_sub(1) as u64)
}

/// Pearson chi-square goodness-of-fit of observed counts against exact
/// probabilities. Returns `(statistic, degrees_of_freedom)`.
pub fn chi_square_goodness_of_fit<K: Ord>(
    observed: &BTreeMap<K, u64>,
    expected: &BTreeMap<K, f64>,
) -> (f64, u64) {
    let n: u64 = observed.values().sum();
    let mut stat = 0.0;
    for (k, &p) in expected {
        let e = p * n as f64;
        let o = observed.get(k).copied().unwrap_or(0) as f64;
        if e > 0.0 {
            stat += (o - e) * (o - e) / e;
        }
    }
    (stat, expected.len().saturating_sub(1) as u64)
}
