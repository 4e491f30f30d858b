//! Bit strings wider than a machine word and fixed-weight enumeration.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A point of `{0,1}^len` of any length; bit `i` is coordinate `i`.
///
/// Ordered numerically (bit `len - 1` most significant), so sorting matches
/// ascending-bitmask order for strings that fit in a `u64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: u32,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(len: u32) -> Self {
        BitString {
            len,
            words: vec![0; (len as usize).div_ceil(64).max(1)],
        }
    }

    pub fn from_mask(len: u32, mask: u64) -> Self {
        assert!(len >= 64 || mask >> len == 0, "mask wider than {len} bits");
        let mut s = Self::zeros(len);
        s.words[0] = mask;
        s
    }

    pub fn from_ones(len: u32, ones: &[u32]) -> Self {
        let mut s = Self::zeros(len);
        for &i in ones {
            s.set(i, true);
        }
        s
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: u32) -> bool {
        assert!(i < self.len);
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: u32, bit: bool) {
        assert!(i < self.len);
        let w = &mut self.words[(i / 64) as usize];
        if bit {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The value as a bitmask when `len <= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        (self.len <= 64).then(|| self.words[0])
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coordinates in order `1..=len`, matching how points are written by hand.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `w`-subsets of `{0, .., len-1}` in colex order, which is ascending
/// order of the corresponding bitmasks.
pub fn weight_combinations(len: u32, w: u32) -> WeightCombinations {
    WeightCombinations {
        len,
        current: (w <= len).then(|| (0..w).collect()),
    }
}

pub struct WeightCombinations {
    len: u32,
    current: Option<Vec<u32>>,
}

impl Iterator for WeightCombinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let w = next.len();
        // Smallest position that can move up without colliding.
        let pos = (0..w).find(|&i| {
            let limit = if i + 1 < w { next[i + 1] } else { self.len };
            next[i] + 1 < limit
        });
        if let Some(i) = pos {
            next[i] += 1;
            for (j, slot) in next.iter_mut().enumerate().take(i) {
                *slot = j as u32;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All masks over `n` bits with popcount at most `d`, ascending.
pub fn masks_up_to_weight(n: u32, d: u32) -> Vec<u64> {
    let mut out: Vec<u64> = (0..=d.min(n))
        .flat_map(|w| weight_combinations(n, w).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)))
        .collect();
    out.sort_unstable();
    out
}
