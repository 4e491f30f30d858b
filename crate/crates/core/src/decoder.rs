//! Local decoding in characteristic `p`.
//!
//! Let `k` be the smallest power of `p` above `d`. A degree-`d` polynomial
//! `G` on `{0,1}^{2k}` satisfies
//! `G(0) = c^{-1} * sum_{y in B'} G(y)` with `c = C(d+k, k) mod p != 0`,
//! where `B'` is the set of weight-`k` strings whose last `k - d`
//! coordinates are zero. The decoder hashes the `n` variables into `2k`
//! parts so that `y = 0` lands on the target point `x`, while each balanced
//! `y` lands on a uniform point of `{0,1}^n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::{weight_combinations, BitString};
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::field::{binomial_u128, decoder_constant, FieldElement, PrimeField};
use crate::fraction::Fraction;
use crate::mc::{Choices, Estimate, Sequential, TrialRunner};

/// Largest `C(2k, k)` for which the full balanced set is materialised.
pub const FULL_BALL_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderParams {
    pub field: PrimeField,
    pub d: u32,
    pub k: u64,
    /// `C(d + k, k) mod p`.
    pub c: FieldElement,
    /// `C(2k, k)`, when it fits in `u128`.
    pub query_budget: Option<u128>,
}

impl DecoderParams {
    pub fn new(field: PrimeField, d: u32) -> Result<Self> {
        let (k, c) = decoder_constant(d as u64, field)?;
        Ok(DecoderParams {
            field,
            d,
            k,
            c,
            query_budget: binomial_u128(2 * k, k),
        })
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    /// `1 / (4 C(2k, k))`.
    pub fn tolerance(&self) -> Option<Fraction> {
        let b = self.query_budget?;
        u64::try_from(4 * b).ok().map(|den| Fraction::new(1, den))
    }

    /// `|B'| = C(k + d, k)`.
    pub fn zero_tail_size(&self) -> Option<u128> {
        binomial_u128(self.k + self.d as u64, self.k)
    }

    fn k32(&self) -> Result<u32> {
        u32::try_from(self.k)
            .ok()
            .filter(|&k| k <= u32::MAX / 2)
            .ok_or_else(|| Error::precondition("k_fits", alloc::format!("k = {}", self.k)))
    }
}

/// All weight-`k` strings of length `2k`, ascending.
pub fn balanced_set(k: u32) -> Vec<BitString> {
    weight_combinations(2 * k, k).map(|ones| BitString::from_ones(2 * k, &ones)).collect()
}

/// Weight-`k` strings of length `2k` whose last `k - d` coordinates are
/// zero, ascending.
pub fn zero_tail_balanced_set(k: u32, d: u32) -> Result<Vec<BitString>> {
    if d >= k {
        return Err(Error::precondition("d_less_than_k", alloc::format!("d = {d}, k = {k}")));
    }
    Ok(weight_combinations(k + d, k).map(|ones| BitString::from_ones(2 * k, &ones)).collect())
}

/// `c^{-1} * sum_{y in B'} values(y)`; `values` must be keyed by exactly
/// `B'`.
pub fn decode_from_ball(values: &BTreeMap<BitString, FieldElement>, params: &DecoderParams) -> Result<FieldElement> {
    let k = params.k32()?;
    let field = params.field;
    let mut sum = field.zero();
    let mut seen = 0usize;
    for (y, v) in values {
        let in_ball = y.len() == 2 * k && y.weight() == k && y.ones().all(|i| i < k + params.d);
        if !in_ball {
            return Err(Error::BallMismatch(alloc::format!("{y} is not in the zero-tail ball")));
        }
        sum = sum.checked_add(*v)?;
        seen += 1;
    }
    let expected = params.zero_tail_size().unwrap_or(u128::MAX);
    if seen as u128 != expected {
        return Err(Error::BallMismatch(alloc::format!("{seen} values for a ball of size {expected}")));
    }
    sum.checked_div(params.c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Query every balanced input.
    #[default]
    FullB,
    /// Query only the inputs that enter the decoding sum.
    BPrimeOnly,
}

#[derive(Clone, Debug)]
pub struct DecodeRun {
    pub value: FieldElement,
    /// `(y, z)` pairs: `f` was read at `z`, the image of `y`.
    pub queries: Vec<(BitString, u64)>,
    /// Image of `0^{2k}`, which always equals the target point.
    pub origin_image: u64,
}

/// Decodes `F(x)` from the oracle `f` with a uniformly random partition.
pub fn local_decode<C: Choices + ?Sized>(
    f: &CubeFunction,
    x: u64,
    params: &DecoderParams,
    mode: DecodeMode,
    rng: &mut C,
) -> Result<DecodeRun> {
    if f.field() != params.field {
        return Err(Error::ModulusMismatch {
            left: params.p(),
            right: f.field().modulus(),
        });
    }
    if x >> f.n() != 0 {
        return Err(Error::DimensionMismatch {
            expected: f.n() as u64,
            actual: 64 - x.leading_zeros() as u64,
        });
    }
    let k = params.k32()?;
    let queried = match mode {
        DecodeMode::FullB => {
            let size = params.query_budget.unwrap_or(u128::MAX);
            if size > FULL_BALL_LIMIT {
                return Err(Error::precondition("full_ball_tractable", alloc::format!("C(2k, k) = {size}")));
            }
            balanced_set(k)
        }
        DecodeMode::BPrimeOnly => zero_tail_balanced_set(k, params.d)?,
    };
    let parts = 2 * k as u64;
    let mut masks: BTreeMap<u32, u64> = BTreeMap::new();
    for j in 0..f.n() {
        *masks.entry(rng.below(parts) as u32).or_insert(0) |= 1 << j;
    }
    let image = |y: &BitString| -> u64 {
        masks.iter().filter(|(&t, _)| y.get(t)).fold(x, |z, (_, &m)| z ^ m)
    };
    let origin_image = image(&BitString::zeros(2 * k));
    assert_eq!(origin_image, x);
    let mut queries = Vec::with_capacity(queried.len());
    let mut values = BTreeMap::new();
    for y in queried {
        let z = image(&y);
        let in_sum = y.ones().all(|i| i < k + params.d);
        if in_sum {
            values.insert(y.clone(), f.get(z));
        }
        queries.push((y, z));
    }
    let value = decode_from_ball(&values, params)?;
    Ok(DecodeRun {
        value,
        queries,
        origin_image,
    })
}

/// Fraction of trials with uniform target `x` for which decoding `f`
/// returns `truth(x)`.
pub fn decode_success_rate(
    f: &CubeFunction,
    truth: &CubeFunction,
    params: &DecoderParams,
    mode: DecodeMode,
    trials: u64,
    master_seed: u64,
) -> Result<Estimate> {
    decode_success_rate_with(&Sequential, f, truth, params, mode, trials, master_seed)
}

pub fn decode_success_rate_with<R: TrialRunner>(
    runner: &R,
    f: &CubeFunction,
    truth: &CubeFunction,
    params: &DecoderParams,
    mode: DecodeMode,
    trials: u64,
    master_seed: u64,
) -> Result<Estimate> {
    f.disagreements(truth)?;
    let outcomes = runner.run(trials, master_seed, |_, rng| {
        let x = rng.below(f.len() as u64);
        local_decode(f, x, params, mode, rng).map(|run| run.value == truth.get(x))
    });
    let outcomes: Result<Vec<bool>> = outcomes.into_iter().collect();
    Ok(Estimate::from_outcomes(outcomes?))
}
