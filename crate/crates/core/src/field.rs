//! Prime-field and exact rational arithmetic, plus the binomial and Lucas
//! machinery used by the decoder.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic primality by trial division; moduli are below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut q = 3u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

/// The prime field `F_p` for a prime `2 <= p < 2^31`.
///
/// Residues are plain `u32`; products are formed in `u64` so no reduction
/// step ever overflows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MODULUS_LIMIT: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if p >= Self::MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, field: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement { value: 1, field: self }
    }

    /// Reduces `v` modulo `p`.
    pub fn element(self, v: u64) -> FieldElement {
        FieldElement {
            value: (v % self.p as u64) as u32,
            field: self,
        }
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64);
        FieldElement {
            value: r as u32,
            field: self,
        }
    }

    /// Wraps an already reduced residue. Panics if `v >= p`.
    pub fn residue(self, v: u32) -> FieldElement {
        assert!(v < self.p, "residue {v} out of range for p = {}", self.p);
        FieldElement { value: v, field: self }
    }

    // Raw residue arithmetic for hot loops over truth tables.

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i64) as u32)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// An element of a [`PrimeField`].
///
/// The checked methods report a modulus mismatch as an error; the operator
/// impls panic on one. Neither ever coerces between fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.p,
                right: other.field.p,
            });
        }
        Ok(self.field)
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.add(self.value, rhs.value),
            field: f,
        })
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.sub(self.value, rhs.value),
            field: f,
        })
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(rhs)?;
        Ok(FieldElement {
            value: f.mul(self.value, rhs.value),
            field: f,
        })
    }

    pub fn checked_div(self, rhs: FieldElement) -> Result<FieldElement> {
        self.checked_mul(rhs.inverse()?)
    }

    pub fn inverse(self) -> Result<FieldElement> {
        let value = self.field.inv(self.value).ok_or(Error::InverseOfZero)?;
        Ok(FieldElement {
            value,
            field: self.field,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.field.pow(self.value, exp),
            field: self.field,
        }
    }
}

macro_rules! field_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

field_op!(Add, add, checked_add);
field_op!(Sub, sub, checked_sub);
field_op!(Mul, mul, checked_mul);
field_op!(Div, div, checked_div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::precondition("denominator", "zero denominator"));
        }
        Ok(ExactRational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

macro_rules! rational_op {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_op!(Add, add);
rational_op!(Sub, sub);
rational_op!(Mul, mul);
rational_op!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// `C(n, k)` as an arbitrary-precision integer (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` when it fits in a `u128`.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let g = num_integer::gcd(acc, i + 1);
        let reduced = acc / g;
        let step = (n as u128 - i) / ((i + 1) / g);
        acc = reduced.checked_mul(step)?;
    }
    Some(acc)
}

/// Size of a Hamming ball: `C(n, <=d) = sum_{j<=d} C(n, j)`.
pub fn binomial_ball(n: u64, d: u64) -> Option<u128> {
    let mut total: u128 = 0;
    for j in 0..=d.min(n) {
        total = total.checked_add(binomial_u128(n, j)?)?;
    }
    Some(total)
}

/// `C(a, b) mod p` by Lucas' theorem: the product of the digit-wise
/// binomials of the base-`p` expansions of `a` and `b`.
pub fn lucas_binomial(a: u64, b: u64, p: u32) -> u32 {
    let field = PrimeField { p };
    let p64 = p as u64;
    let (mut a, mut b) = (a, b);
    let mut acc = 1 % p;
    while b > 0 || a > 0 {
        let (ad, bd) = ((a % p64) as u32, (b % p64) as u32);
        if bd > ad {
            return 0;
        }
        acc = field.mul(acc, small_binomial_mod(ad, bd, field));
        if acc == 0 {
            return 0;
        }
        a /= p64;
        b /= p64;
    }
    acc
}

// C(a, b) mod p for 0 <= b <= a < p; every factor is a unit.
fn small_binomial_mod(a: u32, b: u32, field: PrimeField) -> u32 {
    let b = b.min(a - b);
    let (mut num, mut den) = (1 % field.p, 1 % field.p);
    for i in 0..b {
        num = field.mul(num, a - i);
        den = field.mul(den, i + 1);
    }
    field.mul(num, field.inv(den).expect("digits are units mod p"))
}

/// The decoder's constants for degree `d` over characteristic `p`: the
/// smallest power `k` of `p` with `k > d`, and `c = C(d + k, k) mod p`,
/// which is always nonzero.
pub fn decoder_constant(d: u64, field: PrimeField) -> Result<(u64, FieldElement)> {
    let p = field.modulus() as u64;
    let mut k: u64 = 1;
    while k <= d {
        k = k
            .checked_mul(p)
            .ok_or_else(|| Error::precondition("k_fits_u64", "power of p overflows"))?;
    }
    let a = d
        .checked_add(k)
        .ok_or_else(|| Error::precondition("k_fits_u64", "d + k overflows"))?;
    let c = field.residue(lucas_binomial(a, k, field.modulus()));
    debug_assert!(!c.is_zero());
    Ok((k, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn small_examples() {
        let f5 = f(5);
        assert_eq!((f5.element(3) + f5.element(4)).value(), 2);
        assert_eq!(f5.element(2).inverse().unwrap().value(), 3);
        let f7 = f(7);
        for x in 1..7 {
            let e = f7.element(x);
            assert_eq!((e * e.inverse().unwrap()).value(), 1);
        }
        assert_eq!(f7.zero().inverse(), Err(Error::InverseOfZero));
    }

    #[test]
    fn mismatched_moduli_error() {
        let a = f(5).element(1);
        let b = f(7).element(1);
        assert_eq!(
            a.checked_add(b),
            Err(Error::ModulusMismatch { left: 5, right: 7 })
        );
        assert!(a.checked_mul(b).is_err());
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn operator_panics_on_mismatch() {
        let _ = f(5).element(1) + f(3).element(1);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [2u64, 3, 5, 7, 11] {
            let fp = f(p);
            let els: Vec<_> = (0..p).map(|v| fp.element(v)).collect();
            for &a in &els {
                assert_eq!(a + (-a), fp.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inverse().unwrap(), fp.one());
                }
                for &b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial(3, 2, 2), 1);
        assert_eq!(lucas_binomial(2, 1, 2), 0);
        assert_eq!(lucas_binomial(4, 7, 3), 0);
        for a in 0..40 {
            for p in [2, 3, 5, 7] {
                assert_eq!(lucas_binomial(a, 0, p), 1);
            }
        }
    }

    #[test]
    fn lucas_matches_big_binomials() {
        for p in [2u32, 3, 5, 7] {
            for a in 0..=60u64 {
                for b in 0..=a {
                    let direct = binomial(a, b) % BigUint::from(p);
                    assert_eq!(BigUint::from(lucas_binomial(a, b, p)), direct, "C({a},{b}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn decoder_constant_examples() {
        let (k, c) = decoder_constant(1, f(2)).unwrap();
        assert_eq!((k, c.value()), (2, 1));
        let (k, c) = decoder_constant(2, f(3)).unwrap();
        assert_eq!((k, c.value()), (3, 1));
        let (k, c) = decoder_constant(1, f(5)).unwrap();
        assert_eq!((k, c.value()), (5, 1));
        let (k, _) = decoder_constant(0, f(2)).unwrap();
        assert_eq!(k, 1);
    }

    #[test]
    fn lucas_divisibility_both_directions() {
        for p in [2u32, 3, 5] {
            for d in 0..=10u64 {
                let (k, c) = decoder_constant(d, f(p as u64)).unwrap();
                assert!(k > d && k <= (p as u64) * d.max(1));
                assert!(!c.is_zero());
                for i in 1..=d {
                    assert_eq!(lucas_binomial(d + k - i, k - i, p), 0, "p={p} d={d} i={i}");
                }
            }
        }
    }

    #[test]
    fn binomial_helpers_agree() {
        for n in 0..70u64 {
            for k in 0..=n {
                assert_eq!(
                    BigUint::from(binomial_u128(n, k).unwrap()),
                    binomial(n, k)
                );
            }
        }
        assert_eq!(binomial_ball(10, 1), Some(11));
        assert_eq!(binomial_ball(6, 2), Some(22));
        assert_eq!(binomial_u128(3, 5), Some(0));
    }

    #[test]
    fn rational_is_normalized() {
        let r = ExactRational::new(BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert!(ExactRational::new(BigInt::from(1), BigInt::from(0)).is_err());
        assert_eq!(alloc::format!("{}", r), "-3/2");
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(p in prop::sample::select(vec![2u64, 3, 101, 65_537, 2_147_483_647]), v in 1u64..u64::MAX) {
            let fp = f(p);
            let e = fp.element(v);
            prop_assume!(!e.is_zero());
            prop_assert_eq!(e * e.inverse().unwrap(), fp.one());
            prop_assert_eq!(e.pow(p - 1), fp.one());
        }
    }
}
