//! Deterministic sequences of partial products `s_j = x_1 x_2 ... x_j`.

use crate::element::{idempotent, Element};
use crate::error::{Error, Result};
use crate::word::{Generator, IndexSet, Word};

/// A generator sequence: eventually periodic, or a finite explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    /// `preamble` once, then `cycle` repeated forever.
    Periodic { preamble: Word, cycle: Word },
    /// Only these letters are known.
    Prefix(Word),
}

impl SequenceSpec {
    pub fn periodic(preamble: Word, cycle: Word) -> Result<Self> {
        if preamble.rank() != cycle.rank() {
            return Err(Error::RankMismatch {
                left: preamble.rank(),
                right: cycle.rank(),
            });
        }
        if cycle.is_empty() {
            return Err(Error::Precondition("cycle must be nonempty".into()));
        }
        Ok(SequenceSpec::Periodic { preamble, cycle })
    }

    pub fn rank(&self) -> usize {
        match self {
            SequenceSpec::Periodic { cycle, .. } => cycle.rank(),
            SequenceSpec::Prefix(w) => w.rank(),
        }
    }

    /// Indices that occur at all.
    pub fn occurring(&self) -> IndexSet {
        match self {
            SequenceSpec::Periodic { preamble, cycle } => {
                preamble.occurrences().union(&cycle.occurrences())
            }
            SequenceSpec::Prefix(w) => w.occurrences(),
        }
    }

    /// Indices that occur infinitely often; `None` for a finite prefix.
    pub fn recurring(&self) -> Option<IndexSet> {
        match self {
            SequenceSpec::Periodic { cycle, .. } => Some(cycle.occurrences()),
            SequenceSpec::Prefix(_) => None,
        }
    }

    /// The `j`-th letter (1-based), if defined.
    pub fn letter(&self, j: usize) -> Option<Generator> {
        debug_assert!(j >= 1);
        let rank = self.rank();
        let raw = match self {
            SequenceSpec::Periodic { preamble, cycle } => {
                if j <= preamble.len() {
                    preamble.raw()[j - 1]
                } else {
                    let k = (j - 1 - preamble.len()) % cycle.len();
                    cycle.raw()[k]
                }
            }
            SequenceSpec::Prefix(w) => *w.raw().get(j - 1)?,
        };
        Some(Generator::new(rank, raw as usize).expect("letters validated by Word"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stabilization {
    /// `s_m = s_{m0}` for every `m >= m0`, proven.
    Certified { m0: usize, value: Element },
    /// Could not be certified within the available letters or horizon.
    NotYetStable { last_change: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// `s_0 = e, s_1, ...` up to the last computed step.
    pub products: Vec<Element>,
    pub status: Stabilization,
}

impl Trace {
    pub fn eventual(&self) -> Option<&Element> {
        match &self.status {
            Stabilization::Certified { value, .. } => Some(value),
            Stabilization::NotYetStable { .. } => None,
        }
    }

    pub fn m0(&self) -> Option<usize> {
        match &self.status {
            Stabilization::Certified { m0, .. } => Some(*m0),
            Stabilization::NotYetStable { .. } => None,
        }
    }
}

/// Iterates the partial products for at most `horizon` steps.
///
/// A periodic sequence is certified stable once a full cycle inside the
/// periodic part leaves the product unchanged at every step: from then on
/// every letter fixes the product. A product equal to `f` is certified at once.
pub fn partial_products(seq: &SequenceSpec, horizon: usize) -> Result<Trace> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let rank = seq.rank();
    let mut current = Element::identity(rank)?;
    let mut products = vec![current.clone()];
    let mut last_change = 0usize;
    let mut unchanged_in_cycle = 0usize;
    let (preamble_len, cycle_len) = match seq {
        SequenceSpec::Periodic { preamble, cycle } => (preamble.len(), Some(cycle.len())),
        SequenceSpec::Prefix(_) => (0, None),
    };

    for j in 1..=horizon {
        let Some(g) = seq.letter(j) else { break };
        let next = current.mul_gen(g);
        if next != current {
            last_change = j;
            unchanged_in_cycle = 0;
        } else if j > preamble_len {
            unchanged_in_cycle += 1;
        }
        current = next;
        products.push(current.clone());

        let cycle_certified = cycle_len.is_some_and(|c| unchanged_in_cycle >= c);
        if current.is_zero() || cycle_certified {
            return Ok(Trace {
                products,
                status: Stabilization::Certified {
                    m0: last_change,
                    value: current,
                },
            });
        }
    }
    Ok(Trace {
        products,
        status: Stabilization::NotYetStable { last_change },
    })
}

/// `e_M` for a periodic sequence whose preamble letters all recur in the cycle.
pub fn eventual_value(seq: &SequenceSpec) -> Result<Element> {
    let recurring = seq
        .recurring()
        .ok_or_else(|| Error::Precondition("eventual value needs a periodic sequence".into()))?;
    let occurring = seq.occurring();
    if occurring != recurring {
        return Err(Error::Precondition(format!(
            "letters {} occur only finitely often",
            occurring.difference(&recurring)
        )));
    }
    idempotent(&occurring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(rank: usize, pre: &[usize], cyc: &[usize]) -> SequenceSpec {
        SequenceSpec::periodic(Word::new(rank, pre).unwrap(), Word::new(rank, cyc).unwrap())
            .unwrap()
    }

    fn el(rank: usize, letters: &[usize]) -> Element {
        Element::from_letters(rank, letters).unwrap()
    }

    #[test]
    fn constant_sequence() {
        let seq = periodic(2, &[], &[1]);
        let t = partial_products(&seq, 100).unwrap();
        assert_eq!(t.m0(), Some(1));
        assert_eq!(t.eventual(), Some(&el(2, &[1])));
        assert_eq!(eventual_value(&seq).unwrap(), el(2, &[1]));
    }

    #[test]
    fn full_cycle_reaches_zero() {
        let seq = periodic(3, &[], &[1, 2, 3]);
        let t = partial_products(&seq, 100).unwrap();
        assert!(t.eventual().unwrap().is_zero());
        assert!(eventual_value(&seq).unwrap().is_zero());
    }

    #[test]
    fn partial_cycle_reaches_idempotent() {
        let seq = periodic(3, &[], &[1, 2]);
        let t = partial_products(&seq, 100).unwrap();
        assert_eq!(t.eventual(), Some(&el(3, &[2, 1])));
        assert_eq!(eventual_value(&seq).unwrap(), el(3, &[2, 1]));
    }

    #[test]
    fn preamble_inside_cycle() {
        let seq = periodic(3, &[3], &[3, 1]);
        let t = partial_products(&seq, 100).unwrap();
        assert_eq!(t.eventual(), Some(&el(3, &[3, 1])));
        assert_eq!(eventual_value(&seq).unwrap(), el(3, &[3, 1]));
    }

    #[test]
    fn transient_letters_violate_precondition() {
        let seq = periodic(3, &[2], &[3, 1]);
        assert!(matches!(eventual_value(&seq), Err(Error::Precondition(_))));
        // iteration still stabilizes
        let t = partial_products(&seq, 100).unwrap();
        assert!(t.eventual().is_some());
    }

    #[test]
    fn prefix_without_zero_is_not_stable() {
        let seq = SequenceSpec::Prefix(Word::new(3, &[1, 2, 1, 2]).unwrap());
        let t = partial_products(&seq, 100).unwrap();
        assert!(matches!(t.status, Stabilization::NotYetStable { .. }));
        assert_eq!(t.products.len(), 5);

        let seq = SequenceSpec::Prefix(Word::new(2, &[2, 1, 1]).unwrap());
        let t = partial_products(&seq, 100).unwrap();
        assert_eq!(t.m0(), Some(2));
    }

    #[test]
    fn horizon_and_cycle_validation() {
        let seq = periodic(2, &[], &[1, 2]);
        assert!(partial_products(&seq, 0).is_err());
        let t = partial_products(&seq, 1).unwrap();
        assert!(matches!(
            t.status,
            Stabilization::NotYetStable { last_change: 1 }
        ));
        assert!(
            SequenceSpec::periodic(Word::new(2, &[1]).unwrap(), Word::empty(2).unwrap()).is_err()
        );
    }
}
