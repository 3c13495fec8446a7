//! Words over a finite generating set and their cyclic normal forms.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator '{letter}' at position {position}")]
    UnknownGenerator { letter: char, position: usize },
    #[error("invalid character '{letter}' at position {position}")]
    InvalidCharacter { letter: char, position: usize },
}

/// A generator or its inverse, packed as `2 * generator + inverse_bit`.
///
/// The packing makes the derived ordering `a < A < b < B < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn exponent(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u8)
    }

    pub fn to_char(self) -> char {
        let base = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }
}

/// A word in the free group, stored letter by letter (not necessarily reduced).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `"abAB"`-style text: lowercase letters are generators, uppercase
    /// their inverses. `"1"` and the empty string give the identity.
    pub fn parse(s: &str, rank: usize) -> Result<Self, WordError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            if !ch.is_ascii_alphabetic() {
                return Err(WordError::InvalidCharacter { letter: ch, position });
            }
            let g = (ch.to_ascii_lowercase() as u8 - b'a') as usize;
            if g >= rank {
                return Err(WordError::UnknownGenerator { letter: ch, position });
            }
            out.push(Letter::new(g, ch.is_ascii_uppercase()));
        }
        Ok(Word(out))
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).free_reduce()
    }

    pub fn power(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * m.unsigned_abs() as usize);
        for _ in 0..m.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v).free_reduce()
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Freely and cyclically reduce without rotating.
    pub fn free_cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Lexicographically least rotation (Booth's algorithm).
    pub fn least_rotation(&self) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::empty();
        }
        let s = &self.0;
        let at = |i: usize| s[i % n];
        let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
        while i < n && j < n && k < n {
            match at(i + k).cmp(&at(j + k)) {
                Ordering::Equal => k += 1,
                Ordering::Greater => {
                    i += k + 1;
                    if i <= j {
                        i = j + 1;
                    }
                    k = 0;
                }
                Ordering::Less => {
                    j += k + 1;
                    if j <= i {
                        j = i + 1;
                    }
                    k = 0;
                }
            }
        }
        self.rotate(i.min(j))
    }

    /// Smallest `p` dividing the length with `w` invariant under rotation by `p`.
    pub fn rotation_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[(i + p) % n]))
            .unwrap_or(0)
    }

    /// `(root, power)` with `self = root^power` as literal words.
    pub fn root_and_power(&self) -> (Word, usize) {
        if self.is_empty() {
            return (Word::empty(), 1);
        }
        let p = self.rotation_period();
        (Word(self.0[..p].to_vec()), self.len() / p)
    }

    /// True if `other` is a cyclic rotation of `self`.
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        (0..self.len()).any(|k| self.rotate(k) == *other)
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}
