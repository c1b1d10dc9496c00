//! The level function, its equivalent characterizations, and the ultrametric.
//!
//! The level of `x` is the least depth `i ∈ {0..n}` at which deleting the
//! letters `1..=i` leaves `e_{[n]∖[i]}`. It can also be read off as the least
//! `i` with `x · e_[i] = f`, or computed letter by letter from any word for `x`
//! by starting at `n` and stepping down exactly when the next letter equals the
//! current level.

use crate::element::{idempotent, Element};
use crate::enumerate::ElementList;
use crate::error::{Error, Result};
use crate::morphism::delete_prefix;
use crate::word::{IndexSet, Word};

/// `e_{[n]∖[i]} = a_n a_{n-1} ... a_{i+1}`.
pub fn upper_idempotent(rank: usize, i: usize) -> Result<Element> {
    idempotent(&IndexSet::prefix(rank, i)?.complement())
}

fn prefix_idempotent(rank: usize, i: usize) -> Result<Element> {
    idempotent(&IndexSet::prefix(rank, i)?)
}

/// Level by its definition through deletion endomorphisms.
pub fn level_by_definition(x: &Element) -> usize {
    let n = x.rank();
    (0..=n)
        .find(|&i| delete_prefix(i, x) == upper_idempotent(n, i).expect("valid depth"))
        .expect("depth n always qualifies")
}

/// One step of the level update under right multiplication by `a_j`.
#[inline]
pub fn level_step(level: usize, generator: usize) -> usize {
    if level == generator {
        level - 1
    } else {
        level
    }
}

/// Folds [`level_step`] over the letters of any representative word.
pub fn level_by_recursion(w: &Word) -> usize {
    w.raw()
        .iter()
        .fold(w.rank(), |l, &g| level_step(l, g as usize))
}

/// Least `i` with `x · e_[i] = f`.
pub fn annihilation_depth(x: &Element) -> usize {
    let n = x.rank();
    (0..=n)
        .find(|&i| {
            x.multiply(&prefix_idempotent(n, i).expect("valid depth"))
                .expect("same rank")
                .is_zero()
        })
        .expect("x · f = f")
}

/// A subset of `{0, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepthSet {
    rank: usize,
    bits: u64,
}

impl DepthSet {
    pub fn from_predicate(rank: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let bits = (0..=rank)
            .filter(|&i| pred(i))
            .fold(0u64, |b, i| b | (1 << i));
        DepthSet { rank, bits }
    }

    pub fn contains(&self, i: usize) -> bool {
        i <= self.rank && self.bits & (1 << i) != 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.rank).filter(move |&i| self.contains(i))
    }

    pub fn min(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// True iff the set is exactly `{min, ..., n}`.
    pub fn is_upward_closed(&self) -> bool {
        match self.min() {
            None => true,
            Some(m) => (m..=self.rank).all(|i| self.contains(i)),
        }
    }
}

/// Depths reached through deletion and through right annihilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSets {
    pub by_deletion: DepthSet,
    pub by_annihilation: DepthSet,
}

pub fn level_sets(x: &Element) -> LevelSets {
    let n = x.rank();
    let by_deletion = DepthSet::from_predicate(n, |i| {
        delete_prefix(i, x) == upper_idempotent(n, i).expect("valid depth")
    });
    let by_annihilation = DepthSet::from_predicate(n, |i| {
        x.multiply(&prefix_idempotent(n, i).expect("valid depth"))
            .expect("same rank")
            .is_zero()
    });
    LevelSets {
        by_deletion,
        by_annihilation,
    }
}

/// Least depth at which the two truncations agree.
pub fn distance(x: &Element, y: &Element) -> Result<usize> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: y.rank(),
        });
    }
    if x == y {
        return Ok(0);
    }
    Ok((1..=x.rank())
        .find(|&i| delete_prefix(i, x) == delete_prefix(i, y))
        .expect("full deletion sends everything to e"))
}

fn check_universe(center: &Element, r: usize, universe: &ElementList) -> Result<()> {
    if !universe.is_complete() {
        return Err(Error::IncompleteUniverse(universe.rank()));
    }
    if center.rank() != universe.rank() {
        return Err(Error::RankMismatch {
            left: center.rank(),
            right: universe.rank(),
        });
    }
    if r > universe.rank() {
        return Err(Error::InvalidRadius {
            radius: r,
            rank: universe.rank(),
        });
    }
    Ok(())
}

/// Closed ball `{x : d(center, x) <= r}` in shortlex order.
pub fn ball(center: &Element, r: usize, universe: &ElementList) -> Result<Vec<Element>> {
    check_universe(center, r, universe)?;
    Ok(universe.filter_par(|x| distance(center, x).map(|d| d <= r).unwrap_or(false)))
}

/// Sphere `{x : d(center, x) = r}` in shortlex order.
pub fn sphere(center: &Element, r: usize, universe: &ElementList) -> Result<Vec<Element>> {
    check_universe(center, r, universe)?;
    Ok(universe.filter_par(|x| distance(center, x).map(|d| d == r).unwrap_or(false)))
}

/// All `x` with `x · a_1 = f`.
pub fn r_set(universe: &ElementList) -> Result<Vec<Element>> {
    if !universe.is_complete() {
        return Err(Error::IncompleteUniverse(universe.rank()));
    }
    let a1 = Element::gen(universe.rank(), 1)?;
    Ok(universe.filter_par(|x| x.multiply(&a1).map(|p| p.is_zero()).unwrap_or(false)))
}

/// The explicit description `{e_{2..n}} ∪ {x a_1 e_{{2..m(x)}} : x ∈ ⟨a_2..a_n⟩}`,
/// with `x` ranging over the enumerated elements avoiding `a_1` (the unit included)
/// and `m` the annihilation depth. Sorted shortlex, duplicates removed.
pub fn r_set_by_structure(universe: &ElementList) -> Result<Vec<Element>> {
    if !universe.is_complete() {
        return Err(Error::IncompleteUniverse(universe.rank()));
    }
    let n = universe.rank();
    let a1 = Element::gen(n, 1)?;
    let one = IndexSet::new(n, &[1])?;
    let mut out = vec![idempotent(&IndexSet::full(n)?.difference(&one))?];
    for x in universe.iter().filter(|x| !x.content().contains(1)) {
        let m = annihilation_depth(x);
        let tail = idempotent(&IndexSet::prefix(n, m)?.difference(&one))?;
        out.push(x.multiply(&a1)?.multiply(&tail)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}
