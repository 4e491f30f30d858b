//! Multilinear polynomials over `F_p` and their correspondence with truth
//! tables on `{0,1}^n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::bits::masks_up_to_weight;
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// `P(X) = sum_S alpha_S prod_{i in S} X_i`, stored sparsely by the
/// bitmask of `S`. Only nonzero coefficients are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: u32,
    field: PrimeField,
    coeffs: BTreeMap<u64, u32>,
}

impl MultilinearPoly {
    pub fn zero(n: u32, field: PrimeField) -> Self {
        MultilinearPoly {
            n,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(subset mask, coefficient)` pairs; repeated
    /// subsets are summed and zeros dropped.
    pub fn from_terms(
        n: u32,
        field: PrimeField,
        terms: impl IntoIterator<Item = (u64, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, field);
        for (mask, c) in terms {
            if n < 64 && mask >> n != 0 {
                return Err(Error::precondition(
                    "monomial_in_range",
                    alloc::format!("monomial {mask:#b} uses a variable >= {n}"),
                ));
            }
            if c.field() != field {
                return Err(Error::ModulusMismatch {
                    left: field.modulus(),
                    right: c.field().modulus(),
                });
            }
            p.add_term(mask, c.value());
        }
        Ok(p)
    }

    fn add_term(&mut self, mask: u64, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        let slot = self.coeffs.entry(mask).or_insert(0);
        *slot = field.add(*slot, c);
        if *slot == 0 {
            self.coeffs.remove(&mask);
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> FieldElement {
        self.field.residue(self.coeffs.get(&mask).copied().unwrap_or(0))
    }

    /// Nonzero terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, FieldElement)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, self.field.residue(c)))
    }

    /// Largest monomial size with a nonzero coefficient; 0 for the zero
    /// polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// `P(x) = sum over S contained in x of alpha_S`.
    pub fn evaluate(&self, x: u64) -> Result<FieldElement> {
        if self.n < 64 && x >> self.n != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.n as u64,
                actual: 64 - x.leading_zeros() as u64,
            });
        }
        Ok(self.field.residue(self.eval_residue(x)))
    }

    pub(crate) fn eval_residue(&self, x: u64) -> u32 {
        self.coeffs
            .iter()
            .filter(|(&m, _)| m & x == m)
            .fold(0, |acc, (_, &c)| self.field.add(acc, c))
    }

    /// The unique multilinear interpolant of `f`, by Moebius inversion:
    /// `alpha_S = sum_{T subset of S} (-1)^{|S|-|T|} f(1_T)`.
    pub fn from_truth_table(f: &CubeFunction) -> Self {
        let field = f.field();
        let mut v = f.values().to_vec();
        moebius_in_place(&mut v, field);
        let coeffs = v
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m as u64, c))
            .collect();
        MultilinearPoly {
            n: f.n(),
            field,
            coeffs,
        }
    }

    /// The truth table of `P` on `{0,1}^n` (zeta transform).
    pub fn truth_table(&self) -> Result<CubeFunction> {
        let mut v = alloc::vec![0u32; 1usize << self.n.min(crate::cube::MAX_VARIABLES)];
        if self.n > crate::cube::MAX_VARIABLES {
            return CubeFunction::new(self.n, self.field, Vec::new());
        }
        for (&m, &c) in &self.coeffs {
            v[m as usize] = c;
        }
        let field = self.field;
        for i in 0..self.n {
            let bit = 1usize << i;
            for m in 0..v.len() {
                if m & bit != 0 {
                    v[m] = field.add(v[m], v[m ^ bit]);
                }
            }
        }
        CubeFunction::new(self.n, self.field, v)
    }

    /// Substitutes `X_j := b xor X_i` (that is `X_i` for `b = 0` and `1 - X_i`
    /// for `b = 1`), reduces with `X_i^2 = X_i`, and removes variable `j`,
    /// renumbering the surviving variables in order.
    pub fn identify_variables(&self, i: u32, j: u32, b: bool) -> Result<MultilinearPoly> {
        if i == j {
            return Err(Error::precondition("distinct_variables", "i == j"));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::precondition(
                "variables_in_range",
                alloc::format!("({i}, {j}) with n = {}", self.n),
            ));
        }
        let field = self.field;
        let (ibit, jbit) = (1u64 << i, 1u64 << j);
        let mut out = MultilinearPoly::zero(self.n - 1, field);
        for (&m, &c) in &self.coeffs {
            if m & jbit == 0 {
                out.add_term(drop_bit(m, j), c);
                continue;
            }
            let rest = m & !jbit;
            if !b {
                out.add_term(drop_bit(rest | ibit, j), c);
            } else {
                // c * rest * (1 - X_i) = c * rest - c * rest * X_i
                out.add_term(drop_bit(rest, j), c);
                out.add_term(drop_bit(rest | ibit, j), field.neg(c));
            }
        }
        Ok(out)
    }

    /// Each `alpha_S` with `|S| <= d` drawn uniformly from `F_p`.
    pub fn random<R: Rng + ?Sized>(n: u32, d: u32, field: PrimeField, rng: &mut R) -> Result<Self> {
        if d > n {
            return Err(Error::precondition("degree_at_most_n", alloc::format!("d = {d} > n = {n}")));
        }
        let mut p = Self::zero(n, field);
        for m in masks_up_to_weight(n, d) {
            p.add_term(m, rng.random_range(0..field.modulus()));
        }
        Ok(p)
    }
}

/// Removes bit `j` from `m`, shifting higher bits down by one.
fn drop_bit(m: u64, j: u32) -> u64 {
    let low = m & ((1u64 << j) - 1);
    let high = (m >> (j + 1)) << j;
    low | high
}

/// In-place Moebius transform over `F_p`: values to coefficients.
pub(crate) fn moebius_in_place(v: &mut [u32], field: PrimeField) {
    let len = v.len();
    let mut bit = 1;
    while bit < len {
        for m in 0..len {
            if m & bit != 0 {
                v[m] = field.sub(v[m], v[m ^ bit]);
            }
        }
        bit <<= 1;
    }
}

/// Degree of the interpolant of a truth table, without building the map.
pub fn table_degree(f: &CubeFunction) -> u32 {
    let mut v = f.values().to_vec();
    moebius_in_place(&mut v, f.field());
    v.iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(m, _)| m.count_ones())
        .max()
        .unwrap_or(0)
}
