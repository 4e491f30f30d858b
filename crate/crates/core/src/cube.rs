//! Truth tables of functions `{0,1}^n -> F_p`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::fraction::Fraction;
use crate::restrict::Restriction;

pub const MAX_VARIABLES: u32 = 30;

/// A function `{0,1}^n -> F_p` stored densely.
///
/// Position `x` of the table holds `f(x)` where bit `i` of `x` is
/// coordinate `i` (coordinate 0 is the least significant bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeFunction {
    n: u32,
    field: PrimeField,
    values: Vec<u32>,
}

impl CubeFunction {
    /// Builds a table from reduced residues; `values.len()` must be `2^n`.
    pub fn new(n: u32, field: PrimeField, values: Vec<u32>) -> Result<Self> {
        check_arity(n)?;
        if values.len() as u64 != 1u64 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: values.len() as u64,
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::precondition(
                "residue_range",
                alloc::format!("{bad} is not a residue mod {}", field.modulus()),
            ));
        }
        Ok(CubeFunction { n, field, values })
    }

    pub fn from_fn(n: u32, field: PrimeField, mut f: impl FnMut(u64) -> FieldElement) -> Result<Self> {
        check_arity(n)?;
        let mut values = Vec::with_capacity(1 << n);
        for x in 0..1u64 << n {
            let v = f(x);
            if v.field() != field {
                return Err(Error::ModulusMismatch {
                    left: field.modulus(),
                    right: v.field().modulus(),
                });
            }
            values.push(v.value());
        }
        Ok(CubeFunction { n, field, values })
    }

    pub fn constant(n: u32, c: FieldElement) -> Result<Self> {
        check_arity(n)?;
        Ok(CubeFunction {
            n,
            field: c.field(),
            values: vec![c.value(); 1 << n],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Residues in bitmask order.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn get(&self, x: u64) -> FieldElement {
        self.field.residue(self.values[x as usize])
    }

    #[inline]
    pub fn residue(&self, x: u64) -> u32 {
        self.values[x as usize]
    }

    fn check_same_shape(&self, other: &CubeFunction) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n as u64,
                actual: other.n as u64,
            });
        }
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            });
        }
        Ok(())
    }

    /// Number of points where the two functions disagree.
    pub fn disagreements(&self, other: &CubeFunction) -> Result<u64> {
        self.check_same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count() as u64)
    }

    /// Fractional Hamming distance `Pr_x[f(x) != g(x)]`, exactly.
    pub fn distance(&self, other: &CubeFunction) -> Result<Fraction> {
        Ok(Fraction::new(self.disagreements(other)?, 1 << self.n))
    }

    /// Changes the value at exactly `floor(delta * 2^n)` distinct uniformly
    /// chosen points; each new value is uniform over the `p - 1` values
    /// different from the old one.
    pub fn corrupt<R: Rng + ?Sized>(&self, delta: f64, rng: &mut R) -> Result<CubeFunction> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::precondition("delta_in_unit_interval", alloc::format!("delta = {delta}")));
        }
        let count = libm::floor(delta * self.len() as f64) as usize;
        Ok(self.corrupt_count(count.min(self.len()), rng))
    }

    /// Changes the value at exactly `count` distinct uniform points.
    pub fn corrupt_count<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> CubeFunction {
        let mut out = self.clone();
        let p = self.field.modulus();
        for pos in rand::seq::index::sample(rng, self.len(), count.min(self.len())) {
            let old = out.values[pos];
            let shift = if p == 2 { 1 } else { 1 + rng.random_range(0..p - 1) };
            out.values[pos] = self.field.add(old, shift);
        }
        out
    }

    /// `g(y) = f(x(y))` with `x_i(y) = y_{phi(i)} xor a_i`, reading exactly
    /// the `2^k` points returned by [`Restriction::query_points`].
    pub fn apply_restriction(&self, r: &Restriction) -> Result<CubeFunction> {
        if r.source_dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n as u64,
                actual: r.source_dim() as u64,
            });
        }
        let values = r.query_points().iter().map(|&x| self.residue(x)).collect();
        CubeFunction::new(r.target_dim(), self.field, values)
    }

    /// Pointwise difference `f - g`.
    pub fn sub(&self, other: &CubeFunction) -> Result<CubeFunction> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(CubeFunction { n: self.n, field: self.field, values })
    }
}

fn check_arity(n: u32) -> Result<()> {
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::precondition(
            "arity_in_range",
            alloc::format!("n = {n} outside 1..={MAX_VARIABLES}"),
        ));
    }
    Ok(())
}

/// Maps a point of `{0,1}^n` to `{-1,1}^n` by `a -> 1 - 2a`.
pub fn to_signed(n: u32, x: u64) -> Vec<i8> {
    (0..n).map(|i| if (x >> i) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Inverse of [`to_signed`]. Entries must be `1` or `-1`.
pub fn from_signed(x: &[i8]) -> u64 {
    x.iter().enumerate().fold(0u64, |m, (i, &s)| {
        debug_assert!(s == 1 || s == -1);
        if s == -1 {
            m | 1 << i
        } else {
            m
        }
    })
}

/// A function `{-1,1}^n -> F_p`, stored as the [`CubeFunction`] obtained
/// through the coordinate map `a -> 1 - 2a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCubeFunction {
    inner: CubeFunction,
}

impl SignedCubeFunction {
    pub fn from_signed_fn(
        n: u32,
        field: PrimeField,
        mut f: impl FnMut(&[i8]) -> FieldElement,
    ) -> Result<Self> {
        let inner = CubeFunction::from_fn(n, field, |x| f(&to_signed(n, x)))?;
        Ok(SignedCubeFunction { inner })
    }

    pub fn from_boolean(inner: CubeFunction) -> Self {
        SignedCubeFunction { inner }
    }

    pub fn get(&self, x: &[i8]) -> FieldElement {
        assert_eq!(x.len(), self.inner.n as usize);
        self.inner.get(from_signed(x))
    }

    pub fn as_boolean(&self) -> &CubeFunction {
        &self.inner
    }

    pub fn into_boolean(self) -> CubeFunction {
        self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn and2() -> CubeFunction {
        CubeFunction::new(2, f2(), vec![0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(CubeFunction::new(2, f2(), vec![0, 1, 0]).is_err());
        assert!(CubeFunction::new(2, f2(), vec![0, 1, 0, 2]).is_err());
        assert!(CubeFunction::new(0, f2(), vec![0]).is_err());
        assert!(CubeFunction::new(31, f2(), vec![]).is_err());
    }

    #[test]
    fn distance_examples() {
        let f = and2();
        assert_eq!(f.distance(&f).unwrap(), Fraction::ZERO);
        let g = CubeFunction::new(3, f2(), vec![0; 8]).unwrap();
        let mut v = vec![0; 8];
        v[5] = 1;
        let h = CubeFunction::new(3, f2(), v).unwrap();
        assert_eq!(g.distance(&h).unwrap(), Fraction::new(1, 8));
        assert!(f.distance(&g).is_err());
        let f3 = CubeFunction::new(2, PrimeField::new(3).unwrap(), vec![0; 4]).unwrap();
        assert!(f.distance(&f3).is_err());
    }

    #[test]
    fn distance_is_a_metric_exhaustively() {
        // All functions {0,1}^2 -> F_3 (81 of them) and n = 3 over F_2.
        for (n, p) in [(2u32, 3u64), (3, 2)] {
            let field = PrimeField::new(p).unwrap();
            let size = 1usize << n;
            let count = (p as usize).pow(size as u32);
            let funcs: Vec<CubeFunction> = (0..count)
                .map(|mut code| {
                    let vals = (0..size)
                        .map(|_| {
                            let v = (code % p as usize) as u32;
                            code /= p as usize;
                            v
                        })
                        .collect();
                    CubeFunction::new(n, field, vals).unwrap()
                })
                .collect();
            for a in &funcs {
                for b in &funcs {
                    let ab = a.distance(b).unwrap();
                    assert_eq!(ab, b.distance(a).unwrap());
                    assert_eq!(ab == Fraction::ZERO, a == b);
                    // Triangle inequality checked against a sparse third argument.
                    let direct = a.disagreements(b).unwrap();
                    for c in funcs.iter().step_by(7) {
                        let via = a.disagreements(c).unwrap() + c.disagreements(b).unwrap();
                        assert!(direct <= via);
                    }
                }
            }
        }
    }

    #[test]
    fn corruption_is_exact() {
        let field = PrimeField::new(5).unwrap();
        let f = CubeFunction::constant(10, field.element(2)).unwrap();
        let mut rng = trial_rng(1, 0);
        assert_eq!(f.corrupt(0.0, &mut rng).unwrap(), f);
        let one = f.corrupt(1.0 / 1024.0, &mut rng).unwrap();
        assert_eq!(f.distance(&one).unwrap(), Fraction::new(1, 1024));
        let g = f.corrupt(0.05, &mut rng).unwrap();
        assert_eq!(f.distance(&g).unwrap(), Fraction::new(51, 1024));
        assert!(f.corrupt(1.5, &mut rng).is_err());
        let all = f.corrupt(1.0, &mut rng).unwrap();
        assert_eq!(f.distance(&all).unwrap(), Fraction::ONE);
    }

    #[test]
    fn corrupted_values_avoid_the_old_value_uniformly() {
        let field = PrimeField::new(5).unwrap();
        let f = CubeFunction::constant(12, field.zero()).unwrap();
        let g = f.corrupt_count(4096, &mut trial_rng(3, 0));
        let mut hist = [0u32; 5];
        for &v in g.values() {
            hist[v as usize] += 1;
        }
        assert_eq!(hist[0], 0);
        // 1024 expected per value, sd ~ 27.7.
        for &h in &hist[1..] {
            assert!((h as f64 - 1024.0).abs() < 4.0 * 27.7, "{hist:?}");
        }
    }

    #[test]
    fn restriction_examples() {
        let f = and2();
        let id = Restriction::identity(2);
        assert_eq!(f.apply_restriction(&id).unwrap(), f);

        let merge = Restriction::new(2, 1, vec![0, 0], 0).unwrap();
        let g = f.apply_restriction(&merge).unwrap();
        assert_eq!(g.values(), &[0, 1]);

        let flipped = Restriction::new(2, 1, vec![0, 0], 0b11).unwrap();
        let g = f.apply_restriction(&flipped).unwrap();
        assert_eq!(g.values(), &[1, 0]);

        let wrong = Restriction::identity(3);
        assert!(f.apply_restriction(&wrong).is_err());
    }

    #[test]
    fn signed_view_round_trips() {
        let field = PrimeField::new(7).unwrap();
        let s = SignedCubeFunction::from_signed_fn(3, field, |x| {
            field.from_i64(x.iter().map(|&v| v as i64).sum())
        })
        .unwrap();
        assert_eq!(s.get(&[1, 1, 1]).value(), 3);
        assert_eq!(s.get(&[-1, -1, -1]), field.from_i64(-3));
        assert_eq!(s.as_boolean().get(0).value(), 3);
        for x in 0..8 {
            assert_eq!(from_signed(&to_signed(3, x)), x);
        }
    }
}
