//! Brute-force congruence oracle for the word problem.
//!
//! All words of length `<= max_len + slack` are materialized and merged with a
//! union-find structure along every single application of a defining relation
//! (`a_i a_i = a_i`, `a_i a_j a_i = a_i a_j`, `a_j a_i a_j = a_i a_j` for
//! `j < i`) inside every context. Because the merge is symmetric, this covers
//! length-increasing steps as long as the longer word fits in the bound. The
//! partition restricted to words of length `<= max_len` must not change when the
//! slack grows by one, otherwise the oracle reports instability.
//!
//! This module shares nothing with the reduction code in [`crate::element`].

use crate::error::{Error, Result};
use crate::word::{check_rank, Word};

/// Default cap on the number of materialized words.
pub const DEFAULT_WORD_BUDGET: u64 = 20_000_000;

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Roots always point at the smaller id, so a root is its class minimum.
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

/// Words of length `<= max_len`, indexed in shortlex order.
#[derive(Debug, Clone)]
struct WordIndex {
    rank: usize,
    /// `offsets[l]` is the id of the first word of length `l`.
    offsets: Vec<u64>,
}

impl WordIndex {
    fn new(rank: usize, max_len: usize) -> Self {
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut acc = 0u64;
        let mut count = 1u64;
        for _ in 0..=max_len + 1 {
            offsets.push(acc);
            acc += count;
            count *= rank as u64;
        }
        WordIndex { rank, offsets }
    }

    fn total(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    fn id(&self, letters: &[u8]) -> u64 {
        let v = letters
            .iter()
            .fold(0u64, |acc, &l| acc * self.rank as u64 + (l as u64 - 1));
        self.offsets[letters.len()] + v
    }

    fn decode(&self, id: u64, buf: &mut Vec<u8>) {
        let len = self.offsets.iter().rposition(|&o| o <= id).unwrap();
        let mut v = id - self.offsets[len];
        buf.clear();
        buf.resize(len, 0);
        for slot in buf.iter_mut().rev() {
            *slot = (v % self.rank as u64) as u8 + 1;
            v /= self.rank as u64;
        }
    }
}

/// Relation instances as (longer side, shorter side).
fn relations(rank: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    for i in 1..=rank as u8 {
        out.push((vec![i, i], vec![i]));
        for j in 1..i {
            out.push((vec![i, j, i], vec![i, j]));
            out.push((vec![j, i, j], vec![i, j]));
        }
    }
    out
}

/// Class labels for all words up to `max_len` (words up to `max_len + slack`
/// participate in the closure). Labels are the shortlex-least member's id.
fn close(rank: usize, max_len: usize, slack: usize) -> Vec<u32> {
    let total_len = max_len + slack;
    let index = WordIndex::new(rank, total_len);
    let total = index.total() as usize;
    let rels = relations(rank);
    let mut uf = UnionFind::new(total);
    let mut word = Vec::with_capacity(total_len);
    let mut image = Vec::with_capacity(total_len);
    for id in 0..total as u64 {
        index.decode(id, &mut word);
        for (lhs, rhs) in &rels {
            if lhs.len() > word.len() {
                continue;
            }
            for pos in 0..=word.len() - lhs.len() {
                if &word[pos..pos + lhs.len()] == lhs.as_slice() {
                    image.clear();
                    image.extend_from_slice(&word[..pos]);
                    image.extend_from_slice(rhs);
                    image.extend_from_slice(&word[pos + lhs.len()..]);
                    uf.union(id as u32, index.id(&image) as u32);
                }
            }
        }
    }
    let short = WordIndex::new(rank, max_len).total() as usize;
    (0..short as u32).map(|w| uf.find(w)).collect()
}

/// The congruence generated by the defining relations, on words of bounded length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruencePartition {
    rank: usize,
    max_len: usize,
    slack: usize,
    index: Vec<u64>,
    labels: Vec<u32>,
}

impl CongruencePartition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    fn word_index(&self) -> WordIndex {
        WordIndex {
            rank: self.rank,
            offsets: self.index.clone(),
        }
    }

    /// Class label of `w`, or `None` if `w` is longer than `max_len` or of another rank.
    pub fn class_of(&self, w: &Word) -> Option<u32> {
        if w.rank() != self.rank || w.len() > self.max_len {
            return None;
        }
        let id = self.word_index().id(w.raw());
        Some(self.labels[id as usize])
    }

    pub fn same_class(&self, u: &Word, v: &Word) -> Option<bool> {
        Some(self.class_of(u)? == self.class_of(v)?)
    }

    pub fn num_classes(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(id, &l)| id as u32 == l)
            .count()
    }

    /// Label of every word of length `<= max_len`, in shortlex word order.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Classes as lists of words, each list and the outer list in shortlex order.
    pub fn classes(&self) -> Vec<Vec<Word>> {
        let index = self.word_index();
        let mut by_label: std::collections::BTreeMap<u32, Vec<Word>> = Default::default();
        let mut buf = Vec::new();
        for (id, &l) in self.labels.iter().enumerate() {
            index.decode(id as u64, &mut buf);
            by_label
                .entry(l)
                .or_default()
                .push(Word::from_raw(self.rank, buf.clone()));
        }
        by_label.into_values().collect()
    }
}

/// Builds the partition, checking stability between `slack` and `slack + 1`.
pub fn congruence_oracle(n: usize, max_len: usize, slack: usize) -> Result<CongruencePartition> {
    congruence_oracle_with_budget(n, max_len, slack, DEFAULT_WORD_BUDGET)
}

pub fn congruence_oracle_with_budget(
    n: usize,
    max_len: usize,
    slack: usize,
    budget: u64,
) -> Result<CongruencePartition> {
    check_rank(n)?;
    let needed = (n as u64)
        .checked_pow((max_len + slack + 2) as u32)
        .unwrap_or(u64::MAX);
    if needed > budget || needed > u32::MAX as u64 {
        return Err(Error::BudgetExceeded(format!(
            "congruence oracle needs about {n}^{} = {needed} words, budget {budget}",
            max_len + slack + 2
        )));
    }
    let labels = close(n, max_len, slack);
    let wider = close(n, max_len, slack + 1);
    if labels != wider {
        return Err(Error::UnstableOracle { slack });
    }
    Ok(CongruencePartition {
        rank: n,
        max_len,
        slack,
        index: WordIndex::new(n, max_len).offsets,
        labels,
    })
}
