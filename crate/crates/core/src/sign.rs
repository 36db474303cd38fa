//! Sign distributions on `A(d)`.
//!
//! Wire format: a string of `'0'`/`'1'` of length `|A(d)|`, one character per
//! point in canonical order, leftmost = index 0. `0` stands for `+`, `1` for `-`.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{check_degree, num_points};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignDistribution {
    degree: u32,
    len: usize,
    words: Vec<u64>,
}

impl SignDistribution {
    /// The all-plus distribution.
    pub fn zeros(degree: u32) -> Result<Self> {
        check_degree(degree)?;
        let len = num_points(degree);
        Ok(SignDistribution {
            degree,
            len,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn from_bits(degree: u32, bits: impl IntoIterator<Item = bool>) -> Result<Self> {
        let mut out = Self::zeros(degree)?;
        let mut n = 0;
        for (k, b) in bits.into_iter().enumerate() {
            if k >= out.len {
                return Err(Error::parse_at(
                    1,
                    k + 1,
                    format!("expected {} signs", out.len),
                ));
            }
            out.set(k, b);
            n = k + 1;
        }
        if n != out.len {
            return Err(Error::parse_at(
                1,
                n + 1,
                format!("expected {} signs, got {n}", out.len),
            ));
        }
        Ok(out)
    }

    /// Parse the `0`/`1` wire format.
    pub fn parse(degree: u32, s: &str) -> Result<Self> {
        check_degree(degree)?;
        let s = s.trim();
        let expected = num_points(degree);
        let mut bits = Vec::with_capacity(expected);
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::parse_at(
                        1,
                        k + 1,
                        format!("invalid sign character `{other}`"),
                    ));
                }
            }
        }
        if bits.len() != expected {
            return Err(Error::parse_at(
                1,
                bits.len().min(expected) + 1,
                format!(
                    "sign string has length {}, degree {degree} needs {expected}",
                    bits.len()
                ),
            ));
        }
        Self::from_bits(degree, bits)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        debug_assert!(k < self.len);
        (self.words[k >> 6] >> (k & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, v: bool) {
        debug_assert!(k < self.len);
        let mask = 1u64 << (k & 63);
        if v {
            self.words[k >> 6] |= mask;
        } else {
            self.words[k >> 6] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|k| self.get(k))
    }

    pub(crate) fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }
}

impl fmt::Display for SignDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}
