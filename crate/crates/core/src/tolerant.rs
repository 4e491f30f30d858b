//! The tolerant tester: reject if the intolerant tester rejects, otherwise
//! restrict `f` through a uniformly random map to `k` variables, read it on
//! `m` random points, and accept iff the best degree-`d` fit on those points
//! disagrees on fewer than `(delta1 + delta2) / 2` of them.
//!
//! Also here: the minimum distance of the degree-`d` code restricted to a
//! point set, which controls when the fit on a sample is unique.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fraction::Fraction;
use crate::mc::{Choices, Estimate, Sequential, TrialRunner};
use crate::oracle::CodeSearch;
use crate::poly::MultilinearPoly;
use crate::restrict::Restriction;
use crate::tester::{amplified_test, AmplifiedRun, TesterParams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerantParams {
    pub d: u32,
    pub delta1: Fraction,
    pub delta2: Fraction,
    /// Dimension of the random restriction in step 2.
    pub k: u32,
    /// Number of sample points in step 2.
    pub m: u64,
    /// Sample with replacement (the default) or draw `m` distinct points.
    pub replacement: bool,
    /// Step-1 tester and its number of repetitions.
    pub intolerant: TesterParams,
    pub repetitions: u32,
    /// Set when `k` and `m` come from the asymptotic formulas.
    pub asymptotic: bool,
}

/// Far threshold of the step-1 tester, `2^{-(d+10)}`.
pub fn intolerant_far_threshold(d: u32) -> Fraction {
    Fraction::new(1, 1u64 << (d + 10).min(63))
}

impl TolerantParams {
    /// Explicit `k` and `m`; step 1 is a single run of the tester with
    /// `k = d + 2`. Requires `delta1 < delta2 < 2^{-(d+1)}`.
    pub fn desk(d: u32, delta1: Fraction, delta2: Fraction, k: u32, m: u64) -> Result<Self> {
        check_deltas(d, delta1, delta2)?;
        if k == 0 || k > 20 {
            return Err(Error::precondition("k_in_range", alloc::format!("k = {k}")));
        }
        if m == 0 {
            return Err(Error::precondition("m_positive", "m = 0"));
        }
        Ok(TolerantParams {
            d,
            delta1,
            delta2,
            k,
            m,
            replacement: true,
            intolerant: TesterParams::desk(d, d + 2)?,
            repetitions: 1,
            asymptotic: false,
        })
    }

    /// `k = ceil(c d log2(d/eps) / eps^4)` and `m = ceil(c (1/eps^2 + k^d))`
    /// with `eps = (delta2 - delta1) / 2`. Far beyond what can be run; kept
    /// for reporting.
    pub fn asymptotic(d: u32, delta1: Fraction, delta2: Fraction, c: f64, intolerant: TesterParams) -> Result<Self> {
        check_deltas(d, delta1, delta2)?;
        let eps = (delta2.to_f64() - delta1.to_f64()) / 2.0;
        let k = libm::ceil(c * d as f64 * libm::log2((d as f64 / eps).max(2.0)) / libm::pow(eps, 4.0));
        let m = libm::ceil(c * (1.0 / (eps * eps) + libm::pow(k, d as f64)));
        if !(k <= u32::MAX as f64 && m <= u64::MAX as f64) {
            return Err(Error::precondition("sizes_fit", alloc::format!("k = {k}, m = {m}")));
        }
        Ok(TolerantParams {
            d,
            delta1,
            delta2,
            k: k as u32,
            m: m as u64,
            replacement: true,
            intolerant,
            repetitions: 1,
            asymptotic: true,
        })
    }

    pub fn with_replacement(mut self, replacement: bool) -> Self {
        self.replacement = replacement;
        self
    }

    pub fn with_intolerant(mut self, intolerant: TesterParams, repetitions: u32) -> Self {
        self.intolerant = intolerant;
        self.repetitions = repetitions;
        self
    }

    /// `(delta2 - delta1) / 2`.
    pub fn epsilon(&self) -> f64 {
        (self.delta2.to_f64() - self.delta1.to_f64()) / 2.0
    }

    /// `(delta1 + delta2) / 2`, exactly.
    pub fn threshold(&self) -> Fraction {
        let (a, b) = (self.delta1, self.delta2);
        Fraction::new(
            a.numer() * b.denom() + b.numer() * a.denom(),
            2 * a.denom() * b.denom(),
        )
    }

    /// `t 2^{k'} + m`: step-1 queries plus one query per sample.
    pub fn query_bound(&self) -> u64 {
        self.repetitions as u64 * self.intolerant.queries_per_run() + self.m
    }
}

fn check_deltas(d: u32, delta1: Fraction, delta2: Fraction) -> Result<()> {
    if delta1 >= delta2 {
        return Err(Error::precondition("delta1_below_delta2", alloc::format!("{delta1} >= {delta2}")));
    }
    if d >= 62 || delta2 >= Fraction::new(1, 1u64 << (d + 1)) {
        return Err(Error::precondition(
            "delta2_below_half_distance",
            alloc::format!("delta2 = {delta2}, d = {d}"),
        ));
    }
    Ok(())
}

/// `phi(i)` iid uniform on `0..k` and a uniform shift. Buckets may be empty.
pub fn sample_uniform_restriction<C: Choices + ?Sized>(n: u32, k: u32, c: &mut C) -> Result<Restriction> {
    if n == 0 || k == 0 {
        return Err(Error::precondition("dimensions_positive", alloc::format!("n = {n}, k = {k}")));
    }
    let phi = (0..n).map(|_| c.below(k as u64) as u32).collect();
    let mut shift = BitString::zeros(n);
    for i in 0..n {
        shift.set(i, c.bit());
    }
    Restriction::uniform(n, k, phi, shift)
}

/// `m` uniform points of `{0,1}^k`, independent or distinct.
pub fn sample_query_set<C: Choices + ?Sized>(k: u32, m: u64, c: &mut C, replacement: bool) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::precondition("m_positive", "m = 0"));
    }
    if k > 63 {
        return Err(Error::precondition("k_at_most_63", alloc::format!("k = {k}")));
    }
    let size = 1u64 << k;
    if replacement {
        return Ok((0..m).map(|_| c.below(size)).collect());
    }
    if m > size {
        return Err(Error::precondition("m_at_most_cube", alloc::format!("m = {m} > 2^{k}")));
    }
    // Partial Fisher-Yates over a sparse map of displaced entries.
    let mut moved: BTreeMap<u64, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        let j = i + c.below(size - i);
        let vj = moved.get(&j).copied().unwrap_or(j);
        let vi = moved.get(&i).copied().unwrap_or(i);
        moved.insert(j, vi);
        out.push(vj);
    }
    Ok(out)
}

/// A multiset of points as (point, multiplicity), ascending.
fn multiplicities(points: &[u64]) -> BTreeMap<u64, u64> {
    let mut counts = BTreeMap::new();
    for &x in points {
        *counts.entry(x).or_insert(0) += 1;
    }
    counts
}

/// Closest degree-`d` polynomial to the values `values[x]` on the multiset
/// `points`, and the weighted fraction of disagreements.
pub fn closest_poly_on_values(
    k: u32,
    d: u32,
    field: PrimeField,
    points: &[u64],
    value: impl Fn(u64) -> u32,
) -> Result<(MultilinearPoly, Fraction)> {
    if points.is_empty() {
        return Err(Error::precondition("sample_nonempty", "no points"));
    }
    let counts = multiplicities(points);
    let targets = counts.keys().map(|&x| value(x)).collect();
    let search = CodeSearch::new(
        k,
        d,
        field,
        counts.keys().copied().collect(),
        counts.values().copied().collect(),
        targets,
    )?;
    let best = search.search().expect("the code is nonempty");
    Ok((search.poly(best.index), Fraction::new(best.cost, points.len() as u64)))
}

/// [`closest_poly_on_values`] with the values read from a table.
pub fn closest_poly_on_set(g: &CubeFunction, s: &[u64], d: u32) -> Result<(MultilinearPoly, Fraction)> {
    if let Some(&x) = s.iter().find(|&&x| x >> g.n() != 0) {
        return Err(Error::precondition("points_in_cube", alloc::format!("point {x:#b} outside n = {}", g.n())));
    }
    closest_poly_on_values(g.n(), d, g.field(), s, |x| g.residue(x))
}

/// Least fraction of the multiset `s` on which a nonzero degree-`d`
/// codeword is nonzero.
pub fn restricted_min_distance(k: u32, d: u32, field: PrimeField, s: &[u64]) -> Result<Fraction> {
    if s.is_empty() {
        return Err(Error::precondition("sample_nonempty", "no points"));
    }
    let counts = multiplicities(s);
    let search = CodeSearch::new(
        k,
        d,
        field,
        counts.keys().copied().collect(),
        counts.values().copied().collect(),
        alloc::vec![0; counts.len()],
    )?
    .excluding_zero();
    Ok(match search.search() {
        Some(best) => Fraction::new(best.cost, s.len() as u64),
        None => Fraction::ONE,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TolerantRun {
    pub accept: bool,
    pub intolerant: AmplifiedRun,
    /// Steps 2 and 3 are skipped when step 1 rejects.
    pub restriction: Option<Restriction>,
    pub sample: Vec<u64>,
    pub mu: Option<Fraction>,
    pub fit: Option<MultilinearPoly>,
    pub queries: u64,
}

fn check_input(f: &CubeFunction, params: &TolerantParams) -> Result<()> {
    if f.n() <= params.k {
        return Err(Error::precondition("n_greater_than_k", alloc::format!("n = {}, k = {}", f.n(), params.k)));
    }
    if f.n() <= params.intolerant.k {
        return Err(Error::precondition(
            "n_greater_than_k",
            alloc::format!("n = {}, k = {}", f.n(), params.intolerant.k),
        ));
    }
    Ok(())
}

/// One run of the tolerant tester.
pub fn tolerant_test<C: Choices + ?Sized>(f: &CubeFunction, params: &TolerantParams, rng: &mut C) -> Result<TolerantRun> {
    check_input(f, params)?;
    let intolerant = amplified_test(f, &params.intolerant, params.repetitions, rng)?;
    if !intolerant.accept {
        return Ok(TolerantRun {
            accept: false,
            intolerant,
            restriction: None,
            sample: Vec::new(),
            mu: None,
            fit: None,
            queries: intolerant.queries,
        });
    }
    let r = sample_uniform_restriction(f.n(), params.k, rng)?;
    let sample = sample_query_set(params.k, params.m, rng, params.replacement)?;
    let (fit, mu) = closest_poly_on_values(params.k, params.d, f.field(), &sample, |y| f.residue(r.query_point(y)))?;
    let queries = intolerant.queries + sample.len() as u64;
    assert!(queries <= params.query_bound());
    Ok(TolerantRun {
        accept: mu < params.threshold(),
        intolerant,
        restriction: Some(r),
        sample,
        mu: Some(mu),
        fit: Some(fit),
        queries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerantSummary {
    pub accepts: Estimate,
    /// Mean of `mu` over runs that reached step 3.
    pub mu_mean: Option<f64>,
}

/// Acceptance frequency over `trials` seeded runs.
pub fn tolerant_accept_rate(
    f: &CubeFunction,
    params: &TolerantParams,
    trials: u64,
    master_seed: u64,
) -> Result<TolerantSummary> {
    tolerant_accept_rate_with(&Sequential, f, params, trials, master_seed)
}

pub fn tolerant_accept_rate_with<R: TrialRunner>(
    runner: &R,
    f: &CubeFunction,
    params: &TolerantParams,
    trials: u64,
    master_seed: u64,
) -> Result<TolerantSummary> {
    if trials == 0 {
        return Err(Error::precondition("trials_positive", "trials = 0"));
    }
    check_input(f, params)?;
    let runs = runner.run(trials, master_seed, |_, rng| {
        tolerant_test(f, params, rng).map(|r| (r.accept, r.mu.map(Fraction::to_f64)))
    });
    let runs: Result<Vec<_>> = runs.into_iter().collect();
    let runs = runs?;
    let mus: Vec<f64> = runs.iter().filter_map(|r| r.1).collect();
    Ok(TolerantSummary {
        accepts: Estimate::from_outcomes(runs.iter().map(|r| r.0)),
        mu_mean: (!mus.is_empty()).then(|| mus.iter().sum::<f64>() / mus.len() as f64),
    })
}
