//! Exact Gaussian elimination over `F_p` and over the rationals.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::PrimeField;

/// A field in which elimination can be carried out exactly.
pub trait Scalars {
    type Elem: Clone + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

impl Scalars for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        PrimeField::add(*self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        PrimeField::sub(*self, *a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        PrimeField::mul(*self, *a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        PrimeField::inv(*self, *a)
    }
    fn from_i64(&self, v: i64) -> u32 {
        PrimeField::from_i64(*self, v).value()
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

/// The field of rationals with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Scalars for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Brings `rows` (each of length `cols`) to reduced row echelon form,
/// pivoting on the first nonzero entry of each column in turn. Returns the
/// pivot columns; row `r` of the result has its pivot at `pivots[r]`.
pub fn row_reduce<S: Scalars>(s: &S, rows: &mut [Vec<S::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !s.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = s.inv(&rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = s.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || s.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = s.sub(v, &s.mul(&factor, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalars>(s: &S, rows: &[Vec<S::Elem>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    row_reduce(s, &mut m, cols).len()
}

/// A solution of `A c = b` with every free variable set to zero, or `None`
/// if the system is inconsistent. `a` is given row by row.
pub fn solve<S: Scalars>(s: &S, a: &[Vec<S::Elem>], b: &[S::Elem]) -> Option<Vec<S::Elem>> {
    assert_eq!(a.len(), b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<S::Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(s, &mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = alloc::vec![s.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// A nonzero vector `c` with `A c = 0`, or `None` if the kernel is trivial.
/// The first free column is set to one and the others to zero.
pub fn kernel_vector<S: Scalars>(s: &S, a: &[Vec<S::Elem>], cols: usize) -> Option<Vec<S::Elem>> {
    let mut m = a.to_vec();
    let pivots = row_reduce(s, &mut m, cols);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = alloc::vec![s.zero(); cols];
    x[free] = s.one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = s.sub(&s.zero(), &m[r][free]);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn apply<S: Scalars>(s: &S, a: &[Vec<S::Elem>], x: &[S::Elem]) -> Vec<S::Elem> {
        a.iter()
            .map(|row| row.iter().zip(x).fold(s.zero(), |acc, (u, v)| s.add(&acc, &s.mul(u, v))))
            .collect()
    }

    #[test]
    fn solves_rational_system() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let b = vec![q(3, 1), q(5, 1)];
        let x = solve(&Rationals, &a, &b).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        assert!(solve(&Rationals, &a, &[q(1, 1), q(3, 1)]).is_none());
        let x = solve(&Rationals, &a, &[q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn kernel_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let a = vec![vec![1, 2, 3], vec![1, 0, 1]];
        let x = kernel_vector(&f, &a, 3).unwrap();
        assert!(x.iter().any(|&v| v != 0));
        assert!(apply(&f, &a, &x).iter().all(|&v| v == 0));
        assert_eq!(rank(&f, &a, 3), 2);
        let full = vec![vec![1, 0], vec![0, 1]];
        assert!(kernel_vector(&f, &full, 2).is_none());
    }

    #[test]
    fn underdetermined_systems_always_have_kernel() {
        let f = PrimeField::new(3).unwrap();
        let mut seed = 1u64;
        for _ in 0..200 {
            let rows: Vec<Vec<u32>> = (0..4)
                .map(|_| {
                    (0..5)
                        .map(|_| {
                            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            ((seed >> 33) % 3) as u32
                        })
                        .collect()
                })
                .collect();
            let x = kernel_vector(&f, &rows, 5).unwrap();
            assert!(apply(&f, &rows, &x).iter().all(|&v| v == 0));
        }
    }
}
