//! A small, well-separated set `T` in `{0,1}^k` carrying a nonzero dual
//! vector of the degree-`d` code: weights `w(y) != 0` on `T` with
//! `sum_{y in T} w(y) prod_{i in A} y_i = 0` for every `|A| <= d`. Such a
//! set forbids two degree-`d` polynomials from differing at exactly one
//! point of `T`.

use alloc::vec::Vec;

use crate::bits::masks_up_to_weight;
use crate::error::{Error, Result};
use crate::field::{binomial_ball, FieldElement, PrimeField};
use crate::linalg::kernel_vector;
use crate::oracle::{code_size, CodeEnumeration};

/// Inclusive bounds on the Hamming distance between kept points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: u32,
    pub hi: u32,
}

impl Window {
    /// `(ceil(k/8), k - ceil(k/8))`.
    pub fn desk(k: u32) -> Self {
        let lo = k.div_ceil(8);
        Window { lo, hi: k - lo }
    }

    /// `(ceil(k/4), floor(3k/4))`.
    pub fn quarters(k: u32) -> Self {
        Window {
            lo: k.div_ceil(4),
            hi: 3 * k / 4,
        }
    }

    fn validate(self, k: u32) -> Result<()> {
        if !(0 < self.lo && self.lo <= self.hi && self.hi < k) {
            return Err(Error::precondition(
                "window_valid",
                alloc::format!("need 0 < lo <= hi < k, got lo = {}, hi = {}, k = {k}", self.lo, self.hi),
            ));
        }
        Ok(())
    }

    fn admits(self, a: u64, b: u64) -> bool {
        let dist = (a ^ b).count_ones();
        self.lo <= dist && dist <= self.hi
    }
}

const MAX_K: u32 = 26;

/// Scans `{0,1}^k` in ascending order, keeping each point whose distance to
/// every kept point lies in the window, until `target` points are kept.
pub fn greedy_code(k: u32, window: Window, target: usize) -> Result<Vec<u64>> {
    window.validate(k)?;
    if k > MAX_K {
        return Err(Error::precondition("k_tractable", alloc::format!("k = {k} > {MAX_K}")));
    }
    let mut kept: Vec<u64> = Vec::with_capacity(target.min(1 << k.min(16)));
    if target == 0 {
        return Ok(kept);
    }
    for z in 0..1u64 << k {
        if kept.iter().all(|&y| window.admits(y, z)) {
            kept.push(z);
            if kept.len() == target {
                return Ok(kept);
            }
        }
    }
    Err(Error::CapacityExhausted {
        found: kept.len(),
        target,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWitness {
    pub k: u32,
    pub d: u32,
    pub field: PrimeField,
    /// Points with nonzero weight, ascending.
    pub support: Vec<u64>,
    /// Residues, aligned with `support`.
    pub weights: Vec<u32>,
    pub window: Window,
}

impl DualWitness {
    pub fn weight(&self, i: usize) -> FieldElement {
        self.field.residue(self.weights[i])
    }

    /// Multiplies every weight by a nonzero constant.
    pub fn scaled(&self, c: FieldElement) -> Result<DualWitness> {
        if c.is_zero() || c.field() != self.field {
            return Err(Error::precondition("nonzero_scalar", alloc::format!("{c}")));
        }
        let mut out = self.clone();
        for w in &mut out.weights {
            *w = self.field.mul(*w, c.value());
        }
        Ok(out)
    }
}

/// Number of monomials of degree at most `d` in `k` variables.
pub fn monomial_count(k: u32, d: u32) -> Result<usize> {
    binomial_ball(k as u64, d as u64)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::precondition("monomial_count_fits", alloc::format!("C({k}, <= {d})")))
}

/// Takes `N + 1` points from the greedy code (`N = C(k, <= d)`) and a
/// nonzero solution of the `N` homogeneous equations in `N + 1` unknowns.
pub fn build_witness(k: u32, d: u32, field: PrimeField, window: Window) -> Result<DualWitness> {
    if d >= k {
        return Err(Error::precondition("d_less_than_k", alloc::format!("d = {d}, k = {k}")));
    }
    let n = monomial_count(k, d)?;
    let points = greedy_code(k, window, n + 1)?;
    let monos = masks_up_to_weight(k, d);
    let rows: Vec<Vec<u32>> = monos
        .iter()
        .map(|&a| points.iter().map(|&y| (a & y == a) as u32).collect())
        .collect();
    let kernel = kernel_vector(&field, &rows, points.len()).expect("N equations in N + 1 unknowns");
    let (support, weights) = points.iter().zip(&kernel).filter(|(_, &w)| w != 0).map(|(&y, &w)| (y, w)).unzip();
    Ok(DualWitness {
        k,
        d,
        field,
        support,
        weights,
        window,
    })
}

/// How one-point separation was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationMethod {
    /// Every pair of codewords compared on the support.
    PairEnumeration,
    /// Every nonzero codeword checked; pairs reduce to differences by
    /// linearity.
    DifferenceEnumeration,
    /// Follows from orthogonality with all weights nonzero.
    Implied,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub orthogonality: bool,
    pub window: bool,
    pub size: bool,
    pub one_point_separation: bool,
    pub separation_method: SeparationMethod,
}

impl WitnessReport {
    pub fn all_pass(&self) -> bool {
        self.orthogonality && self.window && self.size && self.one_point_separation
    }
}

/// Above this code size pairs are not compared directly.
pub const PAIR_CHECK_LIMIT: u64 = 2048;
/// Above this code size separation is derived rather than enumerated.
pub const SEPARATION_CHECK_LIMIT: u64 = 1_000_000;

pub fn verify_witness(w: &DualWitness) -> Result<WitnessReport> {
    let field = w.field;
    let n = monomial_count(w.k, w.d)?;
    let nonzero = !w.support.is_empty() && w.weights.iter().all(|&x| x != 0 && x < field.modulus());
    let orthogonality = nonzero
        && masks_up_to_weight(w.k, w.d).iter().all(|&a| {
            w.support
                .iter()
                .zip(&w.weights)
                .filter(|(&y, _)| a & y == a)
                .fold(0, |acc, (_, &c)| field.add(acc, c))
                == 0
        });
    let window = w
        .support
        .iter()
        .enumerate()
        .all(|(i, &a)| w.support[i + 1..].iter().all(|&b| w.window.admits(a, b)));
    let size = !w.support.is_empty() && w.support.len() <= n + 1;

    let (one_point_separation, separation_method) = match code_size(w.k, w.d, field, SEPARATION_CHECK_LIMIT) {
        Ok(count) if count <= PAIR_CHECK_LIMIT => (pairs_never_differ_once(w)?, SeparationMethod::PairEnumeration),
        Ok(_) => (
            differences_never_differ_once(w)?,
            SeparationMethod::DifferenceEnumeration,
        ),
        Err(_) => (orthogonality, SeparationMethod::Implied),
    };
    Ok(WitnessReport {
        orthogonality,
        window,
        size,
        one_point_separation,
        separation_method,
    })
}

fn values_on(p: &crate::poly::MultilinearPoly, support: &[u64]) -> Vec<u32> {
    support.iter().map(|&y| p.evaluate(y).expect("support inside cube").value()).collect()
}

fn pairs_never_differ_once(w: &DualWitness) -> Result<bool> {
    let tables: Vec<Vec<u32>> = CodeEnumeration::new(w.k, w.d, w.field)?.map(|p| values_on(&p, &w.support)).collect();
    for (i, a) in tables.iter().enumerate() {
        for b in &tables[i + 1..] {
            if a.iter().zip(b).filter(|(x, y)| x != y).count() == 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn differences_never_differ_once(w: &DualWitness) -> Result<bool> {
    Ok(CodeEnumeration::new(w.k, w.d, w.field)?
        .skip(1)
        .all(|p| values_on(&p, &w.support).iter().filter(|&&v| v != 0).count() != 1))
}
