//! Brute-force ground truth: exhaustive enumeration of the degree-`d` code
//! and exact nearest-codeword search.
//!
//! Codewords are indexed by their coefficient vectors over the monomials
//! `|S| <= d` in ascending mask order, read as base-`p` numbers with the
//! first monomial most significant. Index order is therefore lexicographic
//! order of coefficient vectors, and every search returns the smallest
//! index among the minimisers.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::bits::masks_up_to_weight;
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fraction::Fraction;
use crate::poly::MultilinearPoly;

/// Largest code the oracles will enumerate.
pub const CODE_BUDGET: u64 = 10_000_000;

/// `p^{C(n, <= d)}`, or a budget error if it exceeds `budget`.
pub fn code_size(n: u32, d: u32, field: PrimeField, budget: u64) -> Result<u64> {
    let dim = masks_up_to_weight(n, d.min(n)).len() as u32;
    let mut size: u128 = 1;
    for _ in 0..dim {
        size = size.saturating_mul(field.modulus() as u128);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: (field.modulus() as u128).saturating_pow(dim),
                budget: budget as u128,
            });
        }
    }
    Ok(size as u64)
}

fn digits_of(mut index: u64, p: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    for slot in digits.iter_mut().rev() {
        *slot = (index % p as u64) as u32;
        index /= p as u64;
    }
    digits
}

fn poly_from_digits(n: u32, field: PrimeField, monos: &[u64], digits: &[u32]) -> MultilinearPoly {
    MultilinearPoly::from_terms(n, field, monos.iter().zip(digits).map(|(&m, &c)| (m, field.residue(c))))
        .expect("monomials are in range")
}

/// All polynomials of degree at most `d` in lexicographic order of their
/// coefficient vectors.
pub struct CodeEnumeration {
    n: u32,
    field: PrimeField,
    monos: Vec<u64>,
    next: u64,
    size: u64,
}

impl CodeEnumeration {
    pub fn new(n: u32, d: u32, field: PrimeField) -> Result<Self> {
        let size = code_size(n, d, field, CODE_BUDGET)?;
        Ok(CodeEnumeration {
            n,
            field,
            monos: masks_up_to_weight(n, d.min(n)),
            next: 0,
            size,
        })
    }

    /// Number of codewords.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// The monomials indexing coefficient vectors, most significant first.
    pub fn monomials(&self) -> &[u64] {
        &self.monos
    }

    /// The codeword with the given index.
    pub fn nth_poly(&self, index: u64) -> MultilinearPoly {
        let digits = digits_of(index, self.field.modulus(), self.monos.len());
        poly_from_digits(self.n, self.field, &self.monos, &digits)
    }
}

impl Iterator for CodeEnumeration {
    type Item = MultilinearPoly;

    fn next(&mut self) -> Option<MultilinearPoly> {
        (self.next < self.size).then(|| {
            self.next += 1;
            self.nth_poly(self.next - 1)
        })
    }
}

/// A minimiser found by [`CodeSearch`]: `cost` is the weighted number of
/// disagreements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub cost: u64,
    pub index: u64,
}

impl Candidate {
    /// The better of two candidates; ties go to the smaller index, so any
    /// merge order gives the same answer.
    pub fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// Exhaustive search for the codeword of degree `<= d` closest to given
/// target values on a weighted point set.
pub struct CodeSearch {
    n: u32,
    field: PrimeField,
    monos: Vec<u64>,
    points: Vec<u64>,
    weights: Vec<u64>,
    targets: Vec<u32>,
    size: u64,
    skip_zero: bool,
}

impl CodeSearch {
    /// `points[i]` carries multiplicity `weights[i]` and target value
    /// `targets[i]`.
    pub fn new(
        n: u32,
        d: u32,
        field: PrimeField,
        points: Vec<u64>,
        weights: Vec<u64>,
        targets: Vec<u32>,
    ) -> Result<Self> {
        if points.len() != weights.len() || points.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len() as u64,
                actual: weights.len().min(targets.len()) as u64,
            });
        }
        if let Some(&x) = points.iter().find(|&&x| n < 64 && x >> n != 0) {
            return Err(Error::precondition("points_in_cube", alloc::format!("point {x:#b} outside n = {n}")));
        }
        let size = code_size(n, d, field, CODE_BUDGET)?;
        Ok(CodeSearch {
            n,
            field,
            monos: masks_up_to_weight(n, d.min(n)),
            points,
            weights,
            targets,
            size,
            skip_zero: false,
        })
    }

    /// Search with every point of `{0,1}^n` at weight one against `f`.
    pub fn whole_cube(f: &CubeFunction, d: u32) -> Result<Self> {
        let points = (0..f.len() as u64).collect();
        Self::new(f.n(), d, f.field(), points, vec![1; f.len()], f.values().to_vec())
    }

    /// Leave the zero codeword out of the search.
    pub fn excluding_zero(mut self) -> Self {
        self.skip_zero = true;
        self
    }

    pub fn code_size(&self) -> u64 {
        self.size
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn poly(&self, index: u64) -> MultilinearPoly {
        let digits = digits_of(index, self.field.modulus(), self.monos.len());
        poly_from_digits(self.n, self.field, &self.monos, &digits)
    }

    fn cost(&self, values: &[u32]) -> u64 {
        values
            .iter()
            .zip(&self.targets)
            .zip(&self.weights)
            .filter(|((v, t), _)| v != t)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Best codeword among indices in `range`, walking them with an
    /// odometer that updates codeword values incrementally.
    pub fn search_range(&self, range: Range<u64>) -> Option<Candidate> {
        let range = range.start..range.end.min(self.size);
        if range.is_empty() {
            return None;
        }
        let field = self.field;
        let p = field.modulus();
        let mut digits = digits_of(range.start, p, self.monos.len());
        let mut values: Vec<u32> = self
            .points
            .iter()
            .map(|&x| {
                self.monos
                    .iter()
                    .zip(&digits)
                    .filter(|(&m, _)| m & x == m)
                    .fold(0, |acc, (_, &c)| field.add(acc, c))
            })
            .collect();
        let mut best: Option<Candidate> = None;
        let mut index = range.start;
        loop {
            if !(self.skip_zero && index == 0) {
                let cost = self.cost(&values);
                if best.is_none_or(|b| cost < b.cost) {
                    best = Some(Candidate { cost, index });
                }
            }
            index += 1;
            if index >= range.end {
                break;
            }
            // Increment the least significant digit, carrying leftwards.
            // A digit moving up by one, or wrapping from p - 1 to 0, changes
            // the codeword by +1 times its monomial either way.
            for pos in (0..digits.len()).rev() {
                let m = self.monos[pos];
                let carry = digits[pos] + 1 == p;
                digits[pos] = if carry { 0 } else { digits[pos] + 1 };
                for (v, &x) in values.iter_mut().zip(&self.points) {
                    if m & x == m {
                        *v = field.add(*v, 1);
                    }
                }
                if !carry {
                    break;
                }
            }
        }
        best
    }

    /// Best codeword overall.
    pub fn search(&self) -> Option<Candidate> {
        self.search_range(0..self.size)
    }
}

/// `delta_d(f)` exactly, with the lexicographically first nearest codeword.
pub fn exact_delta_d(f: &CubeFunction, d: u32) -> Result<(Fraction, MultilinearPoly)> {
    let search = CodeSearch::whole_cube(f, d)?;
    let best = search.search().expect("the code is nonempty");
    Ok((Fraction::new(best.cost, f.len() as u64), search.poly(best.index)))
}

/// Whether `delta_d(f) >= bound`.
pub fn certify_far(f: &CubeFunction, d: u32, bound: Fraction) -> Result<bool> {
    if bound == Fraction::ZERO {
        code_size(f.n(), d, f.field(), CODE_BUDGET)?;
        return Ok(true);
    }
    Ok(exact_delta_d(f, d)?.0 >= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;
    use crate::poly::table_degree;
    use rand::Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Independent oracle: tabulate every codeword and compare pointwise.
    fn naive_delta(f: &CubeFunction, d: u32) -> u64 {
        CodeEnumeration::new(f.n(), d, f.field())
            .unwrap()
            .map(|p| f.disagreements(&p.truth_table().unwrap()).unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn enumeration_is_exhaustive_and_ordered() {
        let e = CodeEnumeration::new(3, 1, fp(2)).unwrap();
        assert_eq!(e.size(), 16);
        let tables: Vec<Vec<u32>> = e.map(|p| p.truth_table().unwrap().into_values()).collect();
        let mut dedup = tables.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 16);
        let mut e = CodeEnumeration::new(2, 1, fp(3)).unwrap();
        assert!(e.next().unwrap().is_zero());
        // The last monomial (X_2) is least significant.
        assert_eq!(e.next().unwrap().terms().map(|(m, c)| (m, c.value())).collect::<Vec<_>>(), vec![(0b10, 1)]);
        assert!(CodeEnumeration::new(12, 3, fp(2)).is_err());
    }

    #[test]
    fn delta_examples() {
        let f2 = fp(2);
        let and = CubeFunction::new(2, f2, vec![0, 0, 0, 1]).unwrap();
        let (delta, nearest) = exact_delta_d(&and, 1).unwrap();
        assert_eq!(delta, Fraction::new(1, 4));
        assert!(nearest.is_zero());
        assert_eq!(exact_delta_d(&and, 2).unwrap().0, Fraction::ZERO);

        let ip = CubeFunction::from_fn(4, f2, |x| {
            let v = ((x & 1) & (x >> 1)) ^ ((x >> 2) & (x >> 3) & 1);
            f2.element(v)
        })
        .unwrap();
        assert_eq!(exact_delta_d(&ip, 1).unwrap().0, Fraction::new(3, 8));
        assert!(certify_far(&ip, 1, Fraction::new(1, 4)).unwrap());
        assert!(certify_far(&and, 2, Fraction::ZERO).unwrap());
        assert!(!certify_far(&and, 2, Fraction::new(1, 16)).unwrap());
    }

    #[test]
    fn single_flip_is_at_distance_one_point() {
        let mut rng = trial_rng(12, 0);
        for _ in 0..10 {
            let p = MultilinearPoly::random(8, 1, fp(2), &mut rng).unwrap();
            let t = p.truth_table().unwrap();
            let f = t.corrupt_count(1, &mut rng);
            let (delta, nearest) = exact_delta_d(&f, 1).unwrap();
            assert_eq!(delta, Fraction::new(1, 256));
            assert_eq!(nearest, p);
        }
    }

    #[test]
    fn agrees_with_naive_oracle_and_degree() {
        let mut rng = trial_rng(13, 0);
        for (n, d, p) in [(3u32, 1u32, 3u64), (4, 1, 2), (4, 2, 2), (3, 2, 3)] {
            for _ in 0..15 {
                let field = fp(p);
                let vals = (0..1 << n).map(|_| rng.random_range(0..p as u32)).collect();
                let f = CubeFunction::new(n, field, vals).unwrap();
                let (delta, nearest) = exact_delta_d(&f, d).unwrap();
                assert_eq!(delta, Fraction::new(naive_delta(&f, d), 1 << n));
                assert_eq!(delta == Fraction::ZERO, table_degree(&f) <= d);
                assert_eq!(
                    Fraction::new(f.disagreements(&nearest.truth_table().unwrap()).unwrap(), 1 << n),
                    delta
                );
            }
        }
    }

    #[test]
    fn tie_break_is_lexicographic() {
        // Every affine function is at distance 1/4 from AND except those
        // farther away; the zero polynomial is lexicographically first.
        let f2 = fp(2);
        let and = CubeFunction::new(2, f2, vec![0, 0, 0, 1]).unwrap();
        let search = CodeSearch::whole_cube(&and, 1).unwrap();
        let best = search.search().unwrap();
        let ties: Vec<u64> = (0..search.code_size())
            .filter(|&i| search.search_range(i..i + 1).unwrap().cost == best.cost)
            .collect();
        assert!(ties.len() > 1);
        assert_eq!(best.index, ties[0]);
    }

    #[test]
    fn ranges_merge_to_the_full_search() {
        let mut rng = trial_rng(14, 0);
        let field = fp(3);
        let vals = (0..16).map(|_| rng.random_range(0..3)).collect();
        let f = CubeFunction::new(4, field, vals).unwrap();
        let search = CodeSearch::whole_cube(&f, 1).unwrap();
        let full = search.search();
        for chunk in [1u64, 7, 50, 243] {
            let mut merged = None;
            let mut start = 0;
            while start < search.code_size() {
                merged = Candidate::better(merged, search.search_range(start..start + chunk));
                start += chunk;
            }
            assert_eq!(merged, full);
        }
    }

    #[test]
    fn codewords_respect_the_distance_bound() {
        let field = fp(2);
        let polys: Vec<CubeFunction> =
            CodeEnumeration::new(4, 2, field).unwrap().step_by(97).map(|p| p.truth_table().unwrap()).collect();
        for a in &polys {
            for b in &polys {
                if a != b {
                    assert!(a.distance(b).unwrap() >= Fraction::new(1, 4));
                }
            }
        }
        let zero = CodeSearch::new(4, 2, field, (0..16).collect(), vec![1; 16], vec![0; 16])
            .unwrap()
            .excluding_zero();
        assert_eq!(zero.search().unwrap().cost, 4);
    }
}
