//! Random restrictions `x_i = y_{phi(i)} xor a_i` from `{0,1}^k` into
//! `{0,1}^n`, the processes that generate them, and the bucket partition
//! they induce.
//!
//! The tester identifies variables in random pairs until `k` survive
//! ([`sample_restriction_recursive`]). The same distribution arises from a
//! random parent function on a random ordering of the variables
//! ([`sample_restriction_direct`]), and the bucket sizes it induces can also
//! be produced by cutting a random cyclic arrangement into arcs
//! ([`sample_buckets_cycle`]). Exact enumerators over all random choices
//! certify these identities at small sizes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::mc::{Choices, Estimate, TrialRng};

/// Whether every target variable is guaranteed a preimage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RestrictionKind {
    /// Produced by variable identification: `phi` is onto `[k]`.
    Bucketed,
    /// `phi` drawn coordinate-wise; some targets may be unused.
    Uniform,
}

/// `x_i(y) = y_{phi(i)} xor a_i` for `i < n`, mapping `{0,1}^k` into
/// `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Restriction {
    n: u32,
    k: u32,
    phi: Vec<u32>,
    shift: BitString,
    kind: RestrictionKind,
}

impl Restriction {
    /// A bucketed restriction; `phi` must be onto `0..k` and `shift` must fit
    /// in `n` bits.
    pub fn new(n: u32, k: u32, phi: Vec<u32>, shift: u64) -> Result<Self> {
        if n > 64 || (n < 64 && shift >> n != 0) {
            return Err(Error::precondition("shift_fits", alloc::format!("shift {shift:#b} for n = {n}")));
        }
        Self::from_parts(n, k, phi, BitString::from_mask(n, shift), RestrictionKind::Bucketed)
    }

    /// A restriction whose map need not be onto.
    pub fn uniform(n: u32, k: u32, phi: Vec<u32>, shift: BitString) -> Result<Self> {
        Self::from_parts(n, k, phi, shift, RestrictionKind::Uniform)
    }

    fn from_parts(n: u32, k: u32, phi: Vec<u32>, shift: BitString, kind: RestrictionKind) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::precondition("dimensions_positive", alloc::format!("n = {n}, k = {k}")));
        }
        if phi.len() != n as usize || shift.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n as u64,
                actual: phi.len() as u64,
            });
        }
        if let Some(&bad) = phi.iter().find(|&&j| j >= k) {
            return Err(Error::precondition("phi_in_range", alloc::format!("phi value {bad} >= k = {k}")));
        }
        if kind == RestrictionKind::Bucketed {
            let mut hit = vec![false; k as usize];
            for &j in &phi {
                hit[j as usize] = true;
            }
            if let Some(j) = hit.iter().position(|h| !h) {
                return Err(Error::precondition("nonempty_buckets", alloc::format!("bucket {j} is empty")));
            }
        }
        Ok(Restriction { n, k, phi, shift, kind })
    }

    pub fn identity(n: u32) -> Self {
        Restriction {
            n,
            k: n,
            phi: (0..n).collect(),
            shift: BitString::zeros(n),
            kind: RestrictionKind::Bucketed,
        }
    }

    pub fn source_dim(&self) -> u32 {
        self.n
    }

    pub fn target_dim(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> RestrictionKind {
        self.kind
    }

    pub fn phi(&self) -> &[u32] {
        &self.phi
    }

    pub fn shift(&self) -> &BitString {
        &self.shift
    }

    /// The variables mapped to each target coordinate, as bitmasks. Needs
    /// `n <= 64`.
    fn bucket_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "query points need n <= 64");
        let mut masks = vec![0u64; self.k as usize];
        for (i, &j) in self.phi.iter().enumerate() {
            masks[j as usize] |= 1 << i;
        }
        masks
    }

    /// `x(y)` for `y` in `{0,1}^k`. Needs `n <= 64`.
    pub fn query_point(&self, y: u64) -> u64 {
        let masks = self.bucket_masks();
        let mut x = self.shift.to_mask().expect("query points need n <= 64");
        for (j, m) in masks.iter().enumerate() {
            if (y >> j) & 1 == 1 {
                x ^= m;
            }
        }
        x
    }

    /// `x(y)` for every `y` in ascending order, so `result[y] = x(y)`.
    pub fn query_points(&self) -> Vec<u64> {
        let masks = self.bucket_masks();
        let size = 1usize << self.k;
        let mut out = vec![0u64; size];
        out[0] = self.shift.to_mask().expect("query points need n <= 64");
        for y in 1..size {
            let low = y.trailing_zeros() as usize;
            out[y] = out[y & (y - 1)] ^ masks[low];
        }
        out
    }

    /// `self` maps `{0,1}^k1` into `{0,1}^n`, `inner` maps `{0,1}^k2` into
    /// `{0,1}^k1`; the result maps `{0,1}^k2` into `{0,1}^n`.
    pub fn compose(&self, inner: &Restriction) -> Result<Restriction> {
        if inner.n != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k as u64,
                actual: inner.n as u64,
            });
        }
        let mut shift = BitString::zeros(self.n);
        let phi = self
            .phi
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                shift.set(i as u32, self.shift.get(i as u32) ^ inner.shift.get(j));
                inner.phi[j as usize]
            })
            .collect();
        let kind = self.kind.max(inner.kind);
        Restriction::from_parts(self.n, inner.k, phi, shift, kind)
    }

    /// `|phi^{-1}(j)|` for each `j`.
    pub fn bucket_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.k as usize];
        for &j in &self.phi {
            sizes[j as usize] += 1;
        }
        sizes
    }

    /// Bucket sizes sorted in descending order.
    pub fn sorted_sizes(&self) -> Vec<u32> {
        sorted_desc(self.bucket_sizes())
    }
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// One round of the recursive process: `X_j0 := a xor X_i0`, indices
/// referring to the original variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentificationStep {
    pub i0: u32,
    pub j0: u32,
    pub a: bool,
}

#[derive(Clone, Debug)]
pub struct RecursiveSample {
    pub restriction: Restriction,
    pub steps: Vec<IdentificationStep>,
    /// The surviving original variables in ascending order.
    pub survivors: Vec<u32>,
    /// `sigma[t]` is the target coordinate of `survivors[t]`.
    pub sigma: Vec<u32>,
    /// Final shift bit of `survivors[t]`.
    pub final_shift: Vec<bool>,
}

fn check_reduction(n: u32, k: u32) -> Result<()> {
    if k == 0 || n <= k {
        return Err(Error::precondition("n_greater_than_k", alloc::format!("n = {n}, k = {k}")));
    }
    Ok(())
}

/// Identifies uniformly random ordered pairs of distinct surviving
/// variables (with a random complement bit) until `k` survive, then maps the
/// survivors to `Y_1..Y_k` by a uniform bijection with a uniform shift.
pub fn sample_restriction_recursive<C: Choices + ?Sized>(n: u32, k: u32, c: &mut C) -> Result<RecursiveSample> {
    check_reduction(n, k)?;
    let mut survivors: Vec<u32> = (0..n).collect();
    // Each original variable equals offset xor X_rep.
    let mut rep: Vec<u32> = (0..n).collect();
    let mut offset = vec![false; n as usize];
    let mut steps = Vec::with_capacity((n - k) as usize);
    while survivors.len() > k as usize {
        let m = survivors.len() as u64;
        let a_pos = c.below(m) as usize;
        let mut b_pos = c.below(m - 1) as usize;
        if b_pos >= a_pos {
            b_pos += 1;
        }
        let a = c.bit();
        let (i0, j0) = (survivors[a_pos], survivors[b_pos]);
        for v in 0..n as usize {
            if rep[v] == j0 {
                rep[v] = i0;
                offset[v] ^= a;
            }
        }
        survivors.remove(b_pos);
        steps.push(IdentificationStep { i0, j0, a });
    }
    let sigma = c.permutation(k as usize);
    let final_shift: Vec<bool> = (0..k).map(|_| c.bit()).collect();
    let mut target = vec![0u32; n as usize];
    let mut last = vec![false; n as usize];
    for (t, &s) in survivors.iter().enumerate() {
        target[s as usize] = sigma[t];
        last[s as usize] = final_shift[t];
    }
    let mut shift = BitString::zeros(n);
    let phi = (0..n as usize)
        .map(|v| {
            let r = rep[v] as usize;
            shift.set(v as u32, offset[v] ^ last[r]);
            target[r]
        })
        .collect();
    let restriction = Restriction::from_parts(n, k, phi, shift, RestrictionKind::Bucketed)?;
    Ok(RecursiveSample {
        restriction,
        steps,
        survivors,
        sigma,
        final_shift,
    })
}

/// The parent-process form: uniform shift `a`, uniform ordering `pi` of the
/// variables, and independent parents `p(i)` uniform below `i`. Variable
/// `pi(i)` joins the bucket of its root ancestor `j <= k`, which becomes
/// `Y_j`.
pub fn sample_restriction_direct<C: Choices + ?Sized>(n: u32, k: u32, c: &mut C) -> Result<Restriction> {
    check_reduction(n, k)?;
    let a: Vec<bool> = (0..n).map(|_| c.bit()).collect();
    let pi = c.permutation(n as usize);
    let parents = sample_parents(n, k, c);
    let (root, off) = resolve_parents(k, &parents, Some(&a));
    let mut phi = vec![0u32; n as usize];
    let mut shift = BitString::zeros(n);
    for i in 0..n as usize {
        phi[pi[i] as usize] = root[i];
        shift.set(pi[i], off[i]);
    }
    Restriction::from_parts(n, k, phi, shift, RestrictionKind::Bucketed)
}

/// `parents[i - k]` is the parent of position `i` (0-based), uniform on
/// `0..i`.
fn sample_parents<C: Choices + ?Sized>(r: u32, k: u32, c: &mut C) -> Vec<u32> {
    (k..r).map(|i| c.below(i as u64) as u32).collect()
}

/// Root and accumulated shift of every position under a parent function.
fn resolve_parents(k: u32, parents: &[u32], a: Option<&[bool]>) -> (Vec<u32>, Vec<bool>) {
    let r = k as usize + parents.len();
    let mut root: Vec<u32> = (0..r as u32).collect();
    let mut off: Vec<bool> = (0..r).map(|i| a.is_some_and(|a| a[i])).collect();
    for i in k as usize..r {
        let p = parents[i - k as usize] as usize;
        root[i] = root[p];
        off[i] ^= off[p];
    }
    (root, off)
}

/// A partition of `0..r` into `k` buckets with `j` in bucket `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BucketSample {
    pub r: u32,
    pub k: u32,
    /// Members of each bucket in ascending order.
    pub buckets: Vec<Vec<u32>>,
}

impl BucketSample {
    fn from_labels(r: u32, k: u32, label: &[u32]) -> Self {
        let mut buckets = vec![Vec::new(); k as usize];
        for (i, &j) in label.iter().enumerate() {
            buckets[j as usize].push(i as u32);
        }
        BucketSample { r, k, buckets }
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.buckets.iter().map(|b| b.len() as u32).collect()
    }

    pub fn sorted_sizes(&self) -> Vec<u32> {
        sorted_desc(self.sizes())
    }
}

fn check_buckets(r: u32, k: u32) -> Result<()> {
    if k == 0 || r < k {
        return Err(Error::precondition("r_at_least_k", alloc::format!("r = {r}, k = {k}")));
    }
    Ok(())
}

/// Buckets of the parent process: position `i >= k` joins the bucket of its
/// parent.
pub fn sample_buckets_parent<C: Choices + ?Sized>(r: u32, k: u32, c: &mut C) -> Result<BucketSample> {
    check_buckets(r, k)?;
    let parents = sample_parents(r, k, c);
    let (root, _) = resolve_parents(k, &parents, None);
    Ok(BucketSample::from_labels(r, k, &root))
}

/// The cyclic-arrangement sampler. A uniform special element `i1 < k` is
/// placed first and the other `r - 1` elements follow in uniform order.
/// Each special element `j < k` owns itself together with the non-special
/// elements that follow it up to the next special element.
///
/// Inserting each element `i >= k` at a uniform slot after the first one
/// puts it behind a uniform existing element, so it joins bucket `j` with
/// probability `|bucket j| / i`, exactly as in the parent process.
pub fn sample_buckets_cycle<C: Choices + ?Sized>(r: u32, k: u32, c: &mut C) -> Result<BucketSample> {
    check_buckets(r, k)?;
    let i1 = c.below(k as u64) as u32;
    let rest: Vec<u32> = (0..r).filter(|&e| e != i1).collect();
    let order = c.permutation(rest.len());
    let mut label = vec![0u32; r as usize];
    let mut owner = i1;
    label[i1 as usize] = i1;
    for &pos in &order {
        let e = rest[pos as usize];
        if e < k {
            owner = e;
        }
        label[e as usize] = owner;
    }
    Ok(BucketSample::from_labels(r, k, &label))
}

/// Default budget for exact enumerators.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

fn parent_space(r: u32, k: u32) -> Result<u64> {
    let mut total: u128 = 1;
    for i in k..r {
        total = total.saturating_mul(i as u128);
    }
    if total > ENUMERATION_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: ENUMERATION_BUDGET as u128,
        });
    }
    Ok(total as u64)
}

/// Exact probability of every labelled partition under the parent process,
/// by running an odometer over all parent functions.
pub fn exact_bucket_partitions(r: u32, k: u32) -> Result<BTreeMap<BucketSample, BigRational>> {
    check_buckets(r, k)?;
    let total = parent_space(r, k)?;
    let mut counts: BTreeMap<BucketSample, u64> = BTreeMap::new();
    let mut parents = vec![0u32; (r - k) as usize];
    loop {
        let (root, _) = resolve_parents(k, &parents, None);
        *counts.entry(BucketSample::from_labels(r, k, &root)).or_insert(0) += 1;
        // Position i = k + idx has parents in 0..i.
        let Some(idx) = (0..parents.len()).rev().find(|&idx| parents[idx] + 1 < k + idx as u32) else {
            break;
        };
        parents[idx] += 1;
        for later in parents.iter_mut().skip(idx + 1) {
            *later = 0;
        }
    }
    let den = BigInt::from(total);
    Ok(counts
        .into_iter()
        .map(|(b, c)| (b, BigRational::new(BigInt::from(c), den.clone())))
        .collect())
}

/// Exact distribution of the descending bucket-size vector under the
/// parent process.
pub fn exact_bucket_distribution(r: u32, k: u32) -> Result<BTreeMap<Vec<u32>, BigRational>> {
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (b, prob) in exact_bucket_partitions(r, k)? {
        *out.entry(b.sorted_sizes()).or_insert_with(|| BigRational::from_integer(0.into())) += prob;
    }
    Ok(out)
}

/// Monte Carlo estimate of `Pr[min_j |B_j| >= r / (4k)]` under the parent
/// process. When `r <= 4k` the event is certain and every trial counts.
pub fn min_bucket_tail(r: u32, k: u32, trials: u64, rng: &mut TrialRng) -> Result<Estimate> {
    check_buckets(r, k)?;
    if r <= 4 * k {
        return Ok(Estimate { trials, hits: trials });
    }
    let mut hits = 0;
    for _ in 0..trials {
        let b = sample_buckets_parent(r, k, rng)?;
        if b.sizes().iter().all(|&s| 4 * k * s >= r) {
            hits += 1;
        }
    }
    Ok(Estimate { trials, hits })
}
