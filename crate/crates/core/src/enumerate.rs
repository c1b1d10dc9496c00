//! Enumeration of `K_n` by breadth-first search over the right Cayley graph.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::word::{check_rank, Generator};

/// A materialized set of elements in shortlex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementList {
    rank: usize,
    elements: Vec<Element>,
    complete: bool,
}

impl ElementList {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// True iff the list is the whole of `K_n`.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    /// Keeps elements satisfying `pred`; evaluation is parallel, order is preserved.
    pub fn filter_par<F>(&self, pred: F) -> Vec<Element>
    where
        F: Fn(&Element) -> bool + Sync,
    {
        self.elements
            .par_iter()
            .filter(|x| pred(x))
            .cloned()
            .collect()
    }
}

impl<'a> IntoIterator for &'a ElementList {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// One canonical word per line.
impl fmt::Display for ElementList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.elements {
            writeln!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Default element cap for [`enumerate`].
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// BFS from `e` under right multiplication by generators.
///
/// Stops once more than `cap` elements are known; the result is then flagged
/// incomplete and holds the first `cap` elements discovered.
pub fn enumerate(n: usize, cap: usize) -> Result<ElementList> {
    check_rank(n)?;
    let gens: Vec<Generator> = (1..=n)
        .map(|i| Generator::new(n, i))
        .collect::<Result<_>>()?;
    let e = Element::identity(n)?;
    let mut seen: HashSet<Element> = HashSet::new();
    let mut found = vec![e.clone()];
    seen.insert(e.clone());
    let mut frontier = vec![e];
    let mut complete = true;

    'bfs: while !frontier.is_empty() {
        let products: Vec<Element> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |&g| x.mul_gen(g)))
            .collect();
        let mut next = Vec::new();
        for p in products {
            if seen.contains(&p) {
                continue;
            }
            if found.len() >= cap {
                complete = false;
                break 'bfs;
            }
            seen.insert(p.clone());
            found.push(p.clone());
            next.push(p);
        }
        frontier = next;
    }

    found.sort();
    Ok(ElementList {
        rank: n,
        elements: found,
        complete,
    })
}

/// `|K_n|` for `n = 2..=max_rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityTable {
    pub rows: Vec<(usize, usize)>,
    /// First rank whose enumeration hit the cap, if any.
    pub truncated_at: Option<usize>,
}

impl CardinalityTable {
    /// TSV with header `n\tcount`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\tcount\n");
        for (n, c) in &self.rows {
            out.push_str(&format!("{n}\t{c}\n"));
        }
        out
    }
}

pub fn cardinality_table(max_rank: usize, cap: usize) -> Result<CardinalityTable> {
    if max_rank < 2 {
        return Err(Error::InvalidRank(max_rank));
    }
    let mut rows = Vec::new();
    for n in 2..=max_rank {
        let list = enumerate(n, cap)?;
        if !list.is_complete() {
            return Ok(CardinalityTable {
                rows,
                truncated_at: Some(n),
            });
        }
        rows.push((n, list.len()));
    }
    Ok(CardinalityTable {
        rows,
        truncated_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{idempotent, is_canonical};
    use crate::word::IndexSet;

    #[test]
    fn rank_two_has_five_elements() {
        let list = enumerate(2, 100).unwrap();
        assert!(list.is_complete());
        assert_eq!(list.to_string(), "\n1\n2\n1 2\n2 1\n");
        let idempotents: Vec<_> = list.iter().filter(|x| x.is_idempotent()).collect();
        assert_eq!(idempotents.len(), 4);
        for x in IndexSet::all(2).unwrap() {
            assert!(list.contains(&idempotent(&x).unwrap()));
        }
    }

    #[test]
    fn complete_lists_contain_zero_and_are_tau_closed() {
        for n in 2..=4 {
            let list = enumerate(n, 10_000).unwrap();
            assert!(list.is_complete());
            assert!(list.contains(&Element::zero(n).unwrap()));
            for x in &list {
                assert!(list.contains(&x.tau()));
                assert!(is_canonical(x.canonical()));
            }
        }
    }

    #[test]
    fn cap_marks_list_incomplete() {
        let list = enumerate(3, 10).unwrap();
        assert!(!list.is_complete());
        assert_eq!(list.len(), 10);
        let exact = enumerate(2, 5).unwrap();
        assert!(exact.is_complete());
    }

    #[test]
    fn table_rows_and_growth() {
        let t = cardinality_table(4, 10_000).unwrap();
        assert_eq!(t.truncated_at, None);
        assert_eq!(t.rows, vec![(2, 5), (3, 18), (4, 115)]);
        for &(n, c) in &t.rows {
            assert!(c > 1 << n);
        }
        let ratios: Vec<f64> = t
            .rows
            .windows(2)
            .map(|w| w[1].1 as f64 / w[0].1 as f64)
            .collect();
        assert!(ratios.windows(2).all(|r| r[1] > r[0]));
        assert_eq!(t.to_tsv(), "n\tcount\n2\t5\n3\t18\n4\t115\n");
    }

    #[test]
    fn table_truncates_with_notice() {
        let t = cardinality_table(4, 20).unwrap();
        assert_eq!(t.rows, vec![(2, 5), (3, 18)]);
        assert_eq!(t.truncated_at, Some(4));
    }
}
