//! Elements of `K_n` and the word problem.
//!
//! An [`Element`] is stored as its canonical word. Reduction deletes letters
//! using three length-decreasing rules until none applies. For two
//! consecutive occurrences of the same index `i` (no `i` in between):
//!
//! * every letter in between is `< i` (including the adjacent case): drop the
//!   right occurrence, `a_i w a_i = a_i w`;
//! * every letter in between is `> i`: drop the left occurrence,
//!   `a_i w a_i = w a_i`.
//!
//! The leftmost such pair is rewritten first. A word is canonical exactly when
//! every gap between consecutive equal letters `i` holds both a letter `< i`
//! and a letter `> i`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{check_rank, write_letters, Generator, IndexSet, Word};

/// An element of Kiselman's semigroup `K_n`, keyed by its canonical word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    rank: usize,
    canonical: Vec<u8>,
}

/// The first applicable rewrite in `letters`, as the index to remove.
fn find_rewrite(letters: &[u8]) -> Option<usize> {
    for left in 0..letters.len() {
        let i = letters[left];
        let mut has_less = false;
        let mut has_greater = false;
        for (right, &l) in letters.iter().enumerate().skip(left + 1) {
            if l == i {
                if !has_greater {
                    return Some(right);
                }
                if !has_less {
                    return Some(left);
                }
                break;
            }
            if l < i {
                has_less = true;
            } else {
                has_greater = true;
            }
            if has_less && has_greater {
                // no rewrite for this pair; later pairs start further right
                break;
            }
        }
    }
    None
}

pub(crate) fn reduce_in_place(letters: &mut Vec<u8>) {
    while let Some(pos) = find_rewrite(letters) {
        letters.remove(pos);
    }
}

/// True iff no reduction rule applies to `letters`.
pub fn is_canonical(letters: &[u8]) -> bool {
    find_rewrite(letters).is_none()
}

/// Reduces a word to the canonical word of the element it represents.
pub fn reduce(w: &Word) -> Element {
    let mut letters = w.raw().to_vec();
    reduce_in_place(&mut letters);
    Element {
        rank: w.rank(),
        canonical: letters,
    }
}

impl Element {
    /// The unit `e`.
    pub fn identity(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Element {
            rank,
            canonical: Vec::new(),
        })
    }

    /// The zero `f = e_[n] = a_n a_{n-1} ... a_1`.
    pub fn zero(rank: usize) -> Result<Self> {
        idempotent(&IndexSet::full(rank)?)
    }

    pub fn generator(g: Generator, rank: usize) -> Result<Self> {
        check_rank(rank)?;
        if g.index() > rank {
            return Err(Error::MalformedLetter {
                letter: g.index(),
                rank,
            });
        }
        Ok(Element {
            rank,
            canonical: vec![g.index() as u8],
        })
    }

    /// `a_i` for a plain index.
    pub fn gen(rank: usize, i: usize) -> Result<Self> {
        Element::generator(Generator::new(rank, i)?, rank)
    }

    /// Parses a word in text form and reduces it.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        Ok(reduce(&Word::parse(rank, text)?))
    }

    pub fn from_letters(rank: usize, letters: &[usize]) -> Result<Self> {
        Ok(reduce(&Word::new(rank, letters)?))
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn canonical(&self) -> &[u8] {
        &self.canonical
    }

    pub fn word(&self) -> Word {
        Word::from_raw(self.rank, self.canonical.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical.len() == self.rank
            && self
                .canonical
                .iter()
                .zip((1..=self.rank).rev())
                .all(|(&l, i)| l as usize == i)
    }

    fn check_same_rank(&self, other: &Element) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_same_rank(other)?;
        let mut letters = Vec::with_capacity(self.canonical.len() + other.canonical.len());
        letters.extend_from_slice(&self.canonical);
        letters.extend_from_slice(&other.canonical);
        reduce_in_place(&mut letters);
        Ok(Element {
            rank: self.rank,
            canonical: letters,
        })
    }

    /// `x · a_g`.
    pub fn mul_gen(&self, g: Generator) -> Element {
        debug_assert!(g.index() <= self.rank);
        let mut letters = Vec::with_capacity(self.canonical.len() + 1);
        letters.extend_from_slice(&self.canonical);
        letters.push(g.index() as u8);
        reduce_in_place(&mut letters);
        Element {
            rank: self.rank,
            canonical: letters,
        }
    }

    /// `a_g · x`.
    pub fn gen_mul(&self, g: Generator) -> Element {
        debug_assert!(g.index() <= self.rank);
        let mut letters = Vec::with_capacity(self.canonical.len() + 1);
        letters.push(g.index() as u8);
        letters.extend_from_slice(&self.canonical);
        reduce_in_place(&mut letters);
        Element {
            rank: self.rank,
            canonical: letters,
        }
    }

    pub fn content(&self) -> IndexSet {
        self.word().occurrences()
    }

    pub fn is_idempotent(&self) -> bool {
        self.multiply(self).map(|sq| &sq == self).unwrap_or(false)
    }

    /// `x^k` for `k >= 1` by repeated multiplication.
    pub fn power(&self, k: u64) -> Result<Element> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            let next = acc.multiply(self)?;
            if next == acc {
                // acc·x = acc, so every further power is acc
                break;
            }
            acc = next;
        }
        Ok(acc)
    }

    /// The antiautomorphism induced by `a_i ↦ a_{n-i+1}`.
    pub fn tau(&self) -> Element {
        let n = self.rank as u8;
        let mut letters: Vec<u8> = self.canonical.iter().rev().map(|&l| n + 1 - l).collect();
        reduce_in_place(&mut letters);
        Element {
            rank: self.rank,
            canonical: letters,
        }
    }
}

/// `e_X`: the product of `a_i`, `i ∈ X`, in strictly decreasing order of `i`.
pub fn idempotent(x: &IndexSet) -> Result<Element> {
    check_rank(x.rank())?;
    // strictly decreasing words have no repeated letter, hence are canonical
    Ok(Element {
        rank: x.rank(),
        canonical: x.members().rev().map(|i| i as u8).collect(),
    })
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on canonical words, ranks compared first.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.canonical.len().cmp(&other.canonical.len()))
            .then_with(|| self.canonical.cmp(&other.canonical))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.canonical)
    }
}
