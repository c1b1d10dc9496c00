//! Raw words over the generators `a_1, ..., a_n` and subsets of `[n]`.
//!
//! Letters are stored as `u8` generator indices in `1..=rank`. The text form
//! of a word is a whitespace- or comma-separated list of indices, so `"2 1 3 2"`
//! and `"2,1,3,2"` denote the same word and the empty string is the empty word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MAX_RANK;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Error::InvalidRank(rank))
    }
}

/// A generator index `i` of `a_i`, valid for some ambient rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u8);

impl Generator {
    pub fn new(rank: usize, index: usize) -> Result<Self> {
        check_rank(rank)?;
        if index == 0 || index > rank {
            return Err(Error::MalformedLetter {
                letter: index,
                rank,
            });
        }
        Ok(Generator(index as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word over the generators of a fixed rank. Not reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(rank: usize, letters: &[usize]) -> Result<Self> {
        check_rank(rank)?;
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l > rank {
                return Err(Error::MalformedLetter { letter: l, rank });
            }
            out.push(l as u8);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn empty(rank: usize) -> Result<Self> {
        Word::new(rank, &[])
    }

    /// Caller guarantees every letter lies in `1..=rank` and the rank is valid.
    pub(crate) fn from_raw(rank: usize, letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l >= 1 && l as usize <= rank));
        Word { rank, letters }
    }

    /// Parses the text form, e.g. `"2 1 3 2"` or `"2,1,3,2"`.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                input: text.to_string(),
                reason: format!("{tok:?} is not a generator index"),
            })?;
            letters.push(v);
        }
        Word::new(rank, &letters)
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn raw(&self) -> &[u8] {
        &self.letters
    }

    pub fn letters(&self) -> impl Iterator<Item = Generator> + '_ {
        self.letters.iter().map(|&l| Generator(l))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.letters.iter().map(|&l| l as usize).collect()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word::from_raw(self.rank, letters))
    }

    /// Set of indices occurring in the word.
    pub fn occurrences(&self) -> IndexSet {
        IndexSet {
            rank: self.rank,
            bits: self.letters.iter().fold(0u32, |b, &l| b | (1 << (l - 1))),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

pub(crate) fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8]) -> fmt::Result {
    for (k, l) in letters.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// Every word of length `<= max_len` over `rank` letters, in shortlex order.
pub fn all_words(rank: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| WordsOfLength::new(rank, len))
}

struct WordsOfLength {
    rank: u8,
    current: Option<Vec<u8>>,
}

impl WordsOfLength {
    fn new(rank: usize, len: usize) -> Self {
        WordsOfLength {
            rank: rank as u8,
            current: Some(vec![1; len]),
        }
    }
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        let mut pos = succ.len();
        let mut carried = true;
        while pos > 0 && carried {
            pos -= 1;
            if succ[pos] < self.rank {
                succ[pos] += 1;
                carried = false;
            } else {
                succ[pos] = 1;
            }
        }
        if !carried {
            self.current = Some(succ);
        }
        Some(Word::from_raw(self.rank as usize, cur))
    }
}

/// A subset of `[n] = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    rank: usize,
    bits: u32,
}

impl IndexSet {
    pub fn empty(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(IndexSet { rank, bits: 0 })
    }

    pub fn full(rank: usize) -> Result<Self> {
        Self::prefix(rank, rank)
    }

    /// `[k] = {1, ..., k}`; `[0]` is empty.
    pub fn prefix(rank: usize, k: usize) -> Result<Self> {
        check_rank(rank)?;
        if k > rank {
            return Err(Error::MalformedLetter { letter: k, rank });
        }
        Ok(IndexSet {
            rank,
            bits: low_bits(k),
        })
    }

    pub fn new(rank: usize, members: &[usize]) -> Result<Self> {
        check_rank(rank)?;
        let mut bits = 0u32;
        for &m in members {
            if m == 0 || m > rank {
                return Err(Error::MalformedLetter { letter: m, rank });
            }
            bits |= 1 << (m - 1);
        }
        Ok(IndexSet { rank, bits })
    }

    /// Bitmask form: bit `i - 1` set iff `i` is a member.
    pub fn from_bits(rank: usize, bits: u32) -> Result<Self> {
        check_rank(rank)?;
        if bits & !low_bits(rank) != 0 {
            return Err(Error::MalformedLetter {
                letter: 32 - bits.leading_zeros() as usize,
                rank,
            });
        }
        Ok(IndexSet { rank, bits })
    }

    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let w = Word::parse(rank, text)?;
        Ok(w.occurrences())
    }

    /// All `2^rank` subsets ordered by bitmask.
    pub fn all(rank: usize) -> Result<impl Iterator<Item = IndexSet>> {
        check_rank(rank)?;
        Ok((0..=low_bits(rank)).map(move |bits| IndexSet { rank, bits }))
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.rank && self.bits & (1 << (i - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            rank: self.rank,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            rank: self.rank,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            rank: self.rank,
            bits: self.bits & !other.bits,
        }
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            rank: self.rank,
            bits: !self.bits & low_bits(self.rank),
        }
    }

    /// Members in increasing order.
    pub fn members(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        (1..=self.rank).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

#[inline]
pub(crate) fn low_bits(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_spaces_and_commas() {
        let a = Word::parse(3, "2 1 3 2").unwrap();
        let b = Word::parse(3, "2,1, 3,2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_vec(), vec![2, 1, 3, 2]);
        assert!(Word::parse(3, "").unwrap().is_empty());
        assert!(Word::parse(3, "   ").unwrap().is_empty());
    }

    #[test]
    fn parse_rejects_out_of_range_letters() {
        assert_eq!(
            Word::parse(2, "1 3"),
            Err(Error::MalformedLetter { letter: 3, rank: 2 })
        );
        assert!(matches!(
            Word::parse(2, "1 0"),
            Err(Error::MalformedLetter { .. })
        ));
        assert!(matches!(Word::parse(2, "1 x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rank_must_be_at_least_two() {
        assert_eq!(Word::empty(1), Err(Error::InvalidRank(1)));
        assert_eq!(Word::empty(33), Err(Error::InvalidRank(33)));
        assert!(Generator::new(3, 4).is_err());
        assert_eq!(Generator::new(3, 3).unwrap().index(), 3);
    }

    #[test]
    fn display_roundtrips() {
        let w = Word::new(4, &[4, 1, 2]).unwrap();
        assert_eq!(w.to_string(), "4 1 2");
        assert_eq!(Word::parse(4, &w.to_string()).unwrap(), w);
        assert_eq!(Word::empty(4).unwrap().to_string(), "");
    }

    #[test]
    fn all_words_counts_and_order() {
        let words: Vec<_> = all_words(2, 2).collect();
        let text: Vec<_> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(text, vec!["", "1", "2", "1 1", "1 2", "2 1", "2 2"]);
        assert_eq!(all_words(3, 4).count(), 1 + 3 + 9 + 27 + 81);
    }

    #[test]
    fn index_set_operations() {
        let x = IndexSet::new(4, &[1, 3]).unwrap();
        let y = IndexSet::new(4, &[3, 4]).unwrap();
        assert_eq!(x.union(&y).members().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(x.intersection(&y).members().collect::<Vec<_>>(), vec![3]);
        assert_eq!(x.difference(&y).members().collect::<Vec<_>>(), vec![1]);
        assert_eq!(x.complement().members().collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(IndexSet::prefix(4, 0).unwrap(), IndexSet::empty(4).unwrap());
        assert_eq!(IndexSet::prefix(4, 4).unwrap(), IndexSet::full(4).unwrap());
        assert_eq!(x.to_string(), "{1,3}");
        assert!(IndexSet::new(3, &[4]).is_err());
        assert!(IndexSet::from_bits(3, 0b1000).is_err());
        assert_eq!(IndexSet::all(3).unwrap().count(), 8);
    }
}
