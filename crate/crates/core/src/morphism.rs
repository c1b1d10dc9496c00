//! Endomorphisms of `K_n` as Boolean matrices, and deletion endomorphisms.
//!
//! An endomorphism `ψ` is determined by sets `X_1, ..., X_n ⊆ [n]` with
//! `ψ(a_i) = e_{X_i}`; its matrix has entry `(x, i) = 1` iff `x ∈ X_i`. A
//! Boolean matrix describes an endomorphism exactly when it avoids the pattern
//! `[[0,1],[1,0]]` as a 2×2 submatrix (rows `x < y`, columns `i < j`).
//!
//! Row and column indices in this module are generator indices `1..=n`.

use std::fmt;

use crate::element::{idempotent, reduce, Element};
use crate::error::{Error, Result};
use crate::word::{check_rank, low_bits, IndexSet, Word};

/// An `n × n` Boolean matrix, one bitmask per row (bit `j - 1` is column `j`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    size: usize,
    rows: Vec<u32>,
}

impl BoolMatrix {
    pub fn zeros(size: usize) -> Result<Self> {
        check_rank(size)?;
        Ok(BoolMatrix {
            size,
            rows: vec![0; size],
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        check_rank(size)?;
        Ok(BoolMatrix {
            size,
            rows: (0..size).map(|r| 1u32 << r).collect(),
        })
    }

    pub fn ones(size: usize) -> Result<Self> {
        check_rank(size)?;
        Ok(BoolMatrix {
            size,
            rows: vec![low_bits(size); size],
        })
    }

    /// Diagonal matrix `I_X` with ones at `(i, i)` for `i ∈ X`.
    pub fn diagonal(x: &IndexSet) -> Self {
        BoolMatrix {
            size: x.rank(),
            rows: (1..=x.rank())
                .map(|i| if x.contains(i) { 1u32 << (i - 1) } else { 0 })
                .collect(),
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let size = rows.len();
        check_rank(size)?;
        let mut out = Vec::with_capacity(size);
        for row in rows {
            if row.len() != size {
                return Err(Error::SizeMismatch {
                    left: size,
                    right: row.len(),
                });
            }
            out.push(
                row.iter()
                    .enumerate()
                    .fold(0u32, |b, (j, &v)| if v { b | (1 << j) } else { b }),
            );
        }
        Ok(BoolMatrix { size, rows: out })
    }

    /// Parses `n` lines of `n` binary digits each. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        input: line.to_string(),
                        reason: format!("{other:?} is not a binary digit"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        BoolMatrix::from_rows(&rows)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row - 1] & (1 << (col - 1)) != 0
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let bit = 1u32 << (col - 1);
        if value {
            self.rows[row - 1] |= bit;
        } else {
            self.rows[row - 1] &= !bit;
        }
    }

    /// Column `i` as the set `{x : entry(x, i) = 1}`.
    pub fn column_set(&self, col: usize) -> IndexSet {
        let bit = 1u32 << (col - 1);
        let bits =
            self.rows.iter().enumerate().fold(
                0u32,
                |b, (r, &row)| if row & bit != 0 { b | (1 << r) } else { b },
            );
        IndexSet::from_bits(self.size, bits).expect("rank already validated")
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 1..=self.size {
            for c in 1..=self.size {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// True iff `m` has no 2×2 submatrix equal to `[[0,1],[1,0]]`.
pub fn dn_member(m: &BoolMatrix) -> bool {
    for x in 0..m.size {
        for y in x + 1..m.size {
            // columns where row x has 1 and row y has 0, and vice versa
            let top_only = m.rows[x] & !m.rows[y];
            let bottom_only = m.rows[y] & !m.rows[x];
            if top_only == 0 || bottom_only == 0 {
                continue;
            }
            // pattern needs column i (bottom_only) < column j (top_only)
            let lowest_bottom = bottom_only.trailing_zeros();
            let highest_top = 31 - top_only.leading_zeros();
            if lowest_bottom < highest_top {
                return false;
            }
        }
    }
    true
}

/// Boolean matrix product `C_{i,j} = ⋁_k A_{i,k} ∧ B_{k,j}`.
pub fn dn_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    if a.size != b.size {
        return Err(Error::SizeMismatch {
            left: a.size,
            right: b.size,
        });
    }
    let rows = a
        .rows
        .iter()
        .map(|&row| {
            (0..a.size)
                .filter(|&k| row & (1 << k) != 0)
                .fold(0u32, |acc, k| acc | b.rows[k])
        })
        .collect();
    Ok(BoolMatrix { size: a.size, rows })
}

/// An endomorphism of `K_n`, held as its matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    matrix: BoolMatrix,
    images: Vec<Vec<u8>>,
}

impl Endomorphism {
    pub fn new(matrix: BoolMatrix) -> Result<Self> {
        if !dn_member(&matrix) {
            return Err(Error::InvalidEndomorphism);
        }
        let images = (1..=matrix.size)
            .map(|i| {
                matrix
                    .column_set(i)
                    .members()
                    .rev()
                    .map(|x| x as u8)
                    .collect()
            })
            .collect();
        Ok(Endomorphism { matrix, images })
    }

    pub fn matrix(&self) -> &BoolMatrix {
        &self.matrix
    }

    /// `X_i`, so that the generator `a_i` maps to `e_{X_i}`.
    pub fn column_set(&self, i: usize) -> IndexSet {
        self.matrix.column_set(i)
    }

    pub fn image_of_generator(&self, i: usize) -> Result<Element> {
        idempotent(&self.column_set(i))
    }

    /// Replaces every letter `a_i` of the canonical word by `e_{X_i}` and reduces.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.rank() != self.matrix.size {
            return Err(Error::RankMismatch {
                left: self.matrix.size,
                right: x.rank(),
            });
        }
        let mut letters = Vec::new();
        for &l in x.canonical() {
            letters.extend_from_slice(&self.images[l as usize - 1]);
        }
        Ok(reduce(&Word::from_raw(x.rank(), letters)))
    }
}

/// Matrix of the deletion endomorphism for `X`: `I_{X^c}`.
pub fn deletion_matrix(x: &IndexSet) -> Endomorphism {
    Endomorphism::new(BoolMatrix::diagonal(&x.complement()))
        .expect("diagonal matrices avoid the pattern")
}

/// Applies an endomorphism given as a bare matrix.
pub fn apply_endomorphism(matrix: &BoolMatrix, x: &Element) -> Result<Element> {
    Endomorphism::new(matrix.clone())?.apply(x)
}

/// Removes every letter `a_i` with `i ∈ X` from the word.
pub fn word_delete(x: &IndexSet, w: &Word) -> Word {
    let kept = w
        .raw()
        .iter()
        .copied()
        .filter(|&l| !x.contains(l as usize))
        .collect();
    Word::from_raw(w.rank(), kept)
}

/// The deletion endomorphism `∂̄_X`, computed by filtering the canonical word.
pub fn delete(x: &IndexSet, el: &Element) -> Result<Element> {
    if x.rank() != el.rank() {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: el.rank(),
        });
    }
    Ok(reduce(&word_delete(x, &el.word())))
}

/// `∂̄_[k]`: deletes the letters `1..=k`.
pub fn delete_prefix(k: usize, el: &Element) -> Element {
    let letters: Vec<u8> = el
        .canonical()
        .iter()
        .copied()
        .filter(|&l| l as usize > k)
        .collect();
    reduce(&Word::from_raw(el.rank(), letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(rank: usize, letters: &[usize]) -> Element {
        Element::from_letters(rank, letters).unwrap()
    }

    fn set(rank: usize, m: &[usize]) -> IndexSet {
        IndexSet::new(rank, m).unwrap()
    }

    /// Direct four-loop scan of the pattern definition.
    fn dn_member_naive(m: &BoolMatrix) -> bool {
        let n = m.size();
        for x in 1..=n {
            for y in x + 1..=n {
                for i in 1..=n {
                    for j in i + 1..=n {
                        if !m.get(x, i) && m.get(x, j) && m.get(y, i) && !m.get(y, j) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn dn_member_examples() {
        assert!(dn_member(&BoolMatrix::identity(3).unwrap()));
        assert!(dn_member(&BoolMatrix::ones(4).unwrap()));
        let p = BoolMatrix::parse("01\n10\n").unwrap();
        assert!(!dn_member(&p));
        let q = BoolMatrix::parse("10\n01\n").unwrap();
        assert!(dn_member(&q));
    }

    #[test]
    fn dn_member_matches_naive_scan_exhaustively() {
        for n in 2..=3 {
            for bits in 0u64..(1 << (n * n)) {
                let rows: Vec<Vec<bool>> = (0..n)
                    .map(|r| (0..n).map(|c| bits & (1 << (r * n + c)) != 0).collect())
                    .collect();
                let m = BoolMatrix::from_rows(&rows).unwrap();
                assert_eq!(dn_member(&m), dn_member_naive(&m), "{m}");
            }
        }
    }

    #[test]
    fn product_examples() {
        let i = BoolMatrix::identity(3).unwrap();
        let m = BoolMatrix::parse("110\n011\n001").unwrap();
        assert_eq!(dn_product(&i, &m).unwrap(), m);
        assert_eq!(dn_product(&m, &i).unwrap(), m);

        let a = BoolMatrix::parse("10\n00").unwrap();
        let b = BoolMatrix::parse("00\n01").unwrap();
        assert_eq!(dn_product(&a, &b).unwrap(), BoolMatrix::zeros(2).unwrap());

        assert!(matches!(
            dn_product(&a, &i),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn diagonal_products_intersect() {
        for x in IndexSet::all(3).unwrap() {
            for y in IndexSet::all(3).unwrap() {
                let lhs = dn_product(&BoolMatrix::diagonal(&x), &BoolMatrix::diagonal(&y)).unwrap();
                assert_eq!(lhs, BoolMatrix::diagonal(&x.intersection(&y)));
            }
        }
    }

    #[test]
    fn deletion_matrix_examples() {
        assert_eq!(
            deletion_matrix(&IndexSet::empty(3).unwrap()).matrix(),
            &BoolMatrix::identity(3).unwrap()
        );
        assert_eq!(
            deletion_matrix(&set(3, &[2])).matrix(),
            &BoolMatrix::parse("100\n000\n001").unwrap()
        );
        assert_eq!(
            deletion_matrix(&IndexSet::full(3).unwrap()).matrix(),
            &BoolMatrix::zeros(3).unwrap()
        );
    }

    #[test]
    fn apply_examples() {
        let id = Endomorphism::new(BoolMatrix::identity(3).unwrap()).unwrap();
        for w in [&[][..], &[1], &[2, 1, 3, 2], &[3, 1]] {
            let x = el(3, w);
            assert_eq!(id.apply(&x).unwrap(), x);
        }
        let d1 = deletion_matrix(&set(3, &[1]));
        assert_eq!(d1.apply(&el(3, &[2, 1])).unwrap(), el(3, &[2]));
        for i in 1..=3 {
            let img = d1.image_of_generator(i).unwrap();
            if i == 1 {
                assert!(img.is_identity());
            } else {
                assert_eq!(img, el(3, &[i]));
            }
        }
        assert_eq!(
            apply_endomorphism(&BoolMatrix::parse("01\n10").unwrap(), &el(2, &[1])),
            Err(Error::InvalidEndomorphism)
        );
    }

    #[test]
    fn apply_non_diagonal() {
        // a_1 -> e, a_2 -> a_2 a_1 (column 2 = {1,2})
        let m = BoolMatrix::parse("01\n01").unwrap();
        let psi = Endomorphism::new(m).unwrap();
        assert_eq!(psi.apply(&el(2, &[2])).unwrap(), el(2, &[2, 1]));
        assert!(psi.apply(&el(2, &[1])).unwrap().is_identity());
    }

    #[test]
    fn word_delete_examples() {
        let w = Word::new(3, &[2, 1, 3, 2]).unwrap();
        assert_eq!(word_delete(&IndexSet::empty(3).unwrap(), &w), w);
        assert_eq!(word_delete(&set(3, &[1, 2]), &w).to_vec(), vec![3]);
        let u = Word::new(3, &[1, 3]).unwrap();
        let x = set(3, &[3]);
        assert_eq!(
            word_delete(&x, &w.concat(&u).unwrap()),
            word_delete(&x, &w).concat(&word_delete(&x, &u)).unwrap()
        );
    }

    #[test]
    fn delete_examples() {
        let x = el(3, &[2, 1, 3, 2]);
        assert_eq!(delete(&IndexSet::empty(3).unwrap(), &x).unwrap(), x);
        let y = set(3, &[1, 3]);
        let z = set(3, &[3, 2]);
        assert_eq!(
            delete(&z, &idempotent(&y).unwrap()).unwrap(),
            idempotent(&y.difference(&z)).unwrap()
        );
        assert_eq!(delete_prefix(1, &x), delete(&set(3, &[1]), &x).unwrap());
        assert!(delete(&set(2, &[1]), &x).is_err());
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = BoolMatrix::parse("110\n011\n001\n").unwrap();
        assert_eq!(m.to_string(), "110\n011\n001\n");
        assert!(BoolMatrix::parse("11\n0").is_err());
        assert!(BoolMatrix::parse("12\n00").is_err());
    }
}
