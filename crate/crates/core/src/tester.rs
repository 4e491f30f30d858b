//! The low-degree tester: restrict `f` to `k` variables by random variable
//! identification and accept iff the restriction has degree at most `d`.
//!
//! The guaranteed properties at every scale are perfect completeness and
//! exactly `2^k` queries per run. The soundness constants of the analysis
//! only apply to the analysis-scale parameter profile
//! ([`TesterParams::analysis_profile`]), where `k` is far too large to run;
//! at desk scale ([`TesterParams::desk`]) soundness is measured empirically.

use alloc::vec::Vec;

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::mc::{Choices, Estimate, Sequential, TrialRunner};
use crate::poly::table_degree;
use crate::restrict::{sample_restriction_recursive, RecursiveSample, Restriction};

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)` on `(0, 1)`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::precondition("entropy_domain", alloc::format!("x = {x} not in (0, 1)")));
    }
    Ok(-x * libm::log2(x) - (1.0 - x) * libm::log2(1.0 - x))
}

/// Constants of the analysis-scale profile. `eps1` and `eps0` underflow any
/// float, so they are kept as base-2 logarithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisConstants {
    pub multiplier: u32,
    /// The hypercontractivity constant `C`.
    pub c: f64,
    pub log2_eps1: f64,
    /// `ceil(log2(2 / eps1))`.
    pub ell: u64,
    /// `log2(eps1 / (100 ell))`.
    pub log2_eps0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TesterParams {
    pub d: u32,
    pub k: u32,
    pub analysis: Option<AnalysisConstants>,
}

impl TesterParams {
    /// Any `k > d`; only completeness and query count are guaranteed.
    pub fn desk(d: u32, k: u32) -> Result<Self> {
        if k <= d {
            return Err(Error::precondition("k_greater_than_d", alloc::format!("k = {k}, d = {d}")));
        }
        if k > crate::cube::MAX_VARIABLES {
            return Err(Error::precondition("k_tractable", alloc::format!("k = {k} gives 2^k queries")));
        }
        Ok(TesterParams { d, k, analysis: None })
    }

    /// `k = M d`, `eps1 = (4C 2^{k H(1/M)})^{-40}`, `ell = ceil(log2(2/eps1))`,
    /// `eps0 = eps1 / (100 ell)`, subject to `H(1/M) < 1/20` and
    /// `k >= 100 log2(2/eps1)`.
    pub fn analysis_profile(d: u32, multiplier: u32, c: f64) -> Result<Self> {
        if d == 0 || multiplier < 2 {
            return Err(Error::precondition("analysis_profile_inputs", alloc::format!("d = {d}, M = {multiplier}")));
        }
        if c.is_nan() || c < 1.0 {
            return Err(Error::precondition("constant_at_least_one", alloc::format!("C = {c}")));
        }
        let h = entropy(1.0 / multiplier as f64)?;
        if h >= 1.0 / 20.0 {
            return Err(Error::precondition("multiplier_entropy", alloc::format!("H(1/{multiplier}) = {h} >= 1/20")));
        }
        let k = multiplier as u64 * d as u64;
        let log2_eps1 = -40.0 * (libm::log2(4.0 * c) + k as f64 * h);
        let log2_two_over_eps1 = 1.0 - log2_eps1;
        if (k as f64) < 100.0 * log2_two_over_eps1 {
            return Err(Error::precondition(
                "k_dominates_log_eps1",
                alloc::format!("k = {k} < 100 log2(2/eps1) = {}", 100.0 * log2_two_over_eps1),
            ));
        }
        let ell = libm::ceil(log2_two_over_eps1) as u64;
        let log2_eps0 = log2_eps1 - libm::log2(100.0 * ell as f64);
        let k = u32::try_from(k).map_err(|_| Error::precondition("k_fits", alloc::format!("k = {k}")))?;
        Ok(TesterParams {
            d,
            k,
            analysis: Some(AnalysisConstants {
                multiplier,
                c,
                log2_eps1,
                ell,
                log2_eps0,
            }),
        })
    }

    pub fn is_analysis_profile(&self) -> bool {
        self.analysis.is_some()
    }

    pub fn queries_per_run(&self) -> u64 {
        1u64.checked_shl(self.k).unwrap_or(u64::MAX)
    }
}

/// The smallest multiplier `M` meeting both analysis-profile constraints for
/// constant `C`, searching up to `limit`.
pub fn min_analysis_multiplier(d: u32, c: f64, limit: u32) -> Option<u32> {
    (2..=limit).find(|&m| TesterParams::analysis_profile(d, m, c).is_ok())
}

/// One run of the tester.
#[derive(Clone, Debug)]
pub struct TestRun {
    pub accept: bool,
    pub sample: RecursiveSample,
    /// `queries[y]` is the point of `{0,1}^n` read for `y`.
    pub queries: Vec<u64>,
    pub restricted: CubeFunction,
}

fn check_input(f: &CubeFunction, params: &TesterParams) -> Result<()> {
    if f.n() <= params.k {
        return Err(Error::precondition("n_greater_than_k", alloc::format!("n = {}, k = {}", f.n(), params.k)));
    }
    Ok(())
}

/// Degree check on `f` restricted by a given `r`.
pub fn verdict_for(f: &CubeFunction, d: u32, r: &Restriction) -> Result<bool> {
    Ok(table_degree(&f.apply_restriction(r)?) <= d)
}

pub fn run_test_once<C: Choices + ?Sized>(f: &CubeFunction, params: &TesterParams, rng: &mut C) -> Result<TestRun> {
    check_input(f, params)?;
    let sample = sample_restriction_recursive(f.n(), params.k, rng)?;
    let queries = sample.restriction.query_points();
    let values = queries.iter().map(|&x| f.residue(x)).collect();
    let restricted = CubeFunction::new(params.k, f.field(), values)?;
    let accept = table_degree(&restricted) <= params.d;
    Ok(TestRun {
        accept,
        sample,
        queries,
        restricted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplifiedRun {
    pub accept: bool,
    pub repetitions: u32,
    pub rejections: u32,
    pub queries: u64,
}

/// `t` independent runs; accepts iff all accept.
pub fn amplified_test<C: Choices + ?Sized>(
    f: &CubeFunction,
    params: &TesterParams,
    t: u32,
    rng: &mut C,
) -> Result<AmplifiedRun> {
    if t == 0 {
        return Err(Error::precondition("repetitions_positive", "t = 0"));
    }
    let mut rejections = 0;
    let mut queries = 0;
    for _ in 0..t {
        let run = run_test_once(f, params, rng)?;
        queries += run.queries.len() as u64;
        rejections += !run.accept as u32;
    }
    Ok(AmplifiedRun {
        accept: rejections == 0,
        repetitions: t,
        rejections,
        queries,
    })
}

/// Fraction of `trials` seeded runs that reject.
pub fn estimate_rejection_probability(
    f: &CubeFunction,
    params: &TesterParams,
    trials: u64,
    master_seed: u64,
) -> Result<Estimate> {
    estimate_rejection_probability_with(&Sequential, f, params, trials, master_seed)
}

pub fn estimate_rejection_probability_with<R: TrialRunner>(
    runner: &R,
    f: &CubeFunction,
    params: &TesterParams,
    trials: u64,
    master_seed: u64,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::precondition("trials_positive", "trials = 0"));
    }
    check_input(f, params)?;
    let outcomes = runner.run(trials, master_seed, |_, rng| run_test_once(f, params, rng).map(|r| !r.accept));
    let outcomes: Result<Vec<bool>> = outcomes.into_iter().collect();
    Ok(Estimate::from_outcomes(outcomes?))
}
