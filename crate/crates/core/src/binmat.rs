//! Bit-packed 0/1 test-design matrices.
//!
//! Rows are pooled tests, columns are items. Storage is row-major with one
//! run of `u64` words per row; a column view (each column as a bit vector
//! over the rows) is computed on first use and cached, since every checker
//! works column-wise.

use std::fmt;
use std::sync::OnceLock;

use crate::bits::{words_for, Bits};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
    columns: OnceLock<Vec<Bits>>,
}

impl PartialEq for BinaryMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for BinaryMatrix {}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            for j in 0..self.cols.min(128) {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl BinaryMatrix {
    /// All-zero `rows x cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!("{rows}x{cols} matrix must be at least 1x1")));
        }
        let words_per_row = words_for(cols);
        let len = rows.checked_mul(words_per_row).ok_or_else(|| Error::Overflow(format!("{rows}x{cols} matrix")))?;
        Ok(BinaryMatrix { rows, cols, words_per_row, data: vec![0; len], columns: OnceLock::new() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Build from rows of 0/1 values; all rows must share a length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::InvalidParameter(format!("entry ({i},{j}) = {v} is not 0/1"))),
                }
            }
        }
        Ok(m)
    }

    /// Build from row bit vectors of equal length.
    pub fn from_row_bits(rows: &[Bits]) -> Result<Self> {
        let cols = rows.first().map_or(0, Bits::len);
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} bits, expected {cols}", r.len())));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn identity(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDimension("identity of order 0".into()));
        }
        Self::from_fn(k, k, |i, j| i == j)
    }

    /// The `1 x k` all-ones row.
    pub fn row_ones(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDimension("row of 0 ones".into()));
        }
        let mut m = Self::zeros(1, k)?;
        m.data.copy_from_slice(Bits::ones(k).words());
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        self.data[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        let w = &mut self.data[i * self.words_per_row + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
        self.columns = OnceLock::new();
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        self.columns = OnceLock::new();
        &mut self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row(&self, i: usize) -> Bits {
        Bits::from_words(self.cols, self.row_words(i).to_vec())
    }

    /// Column positions of the 1s in row `i`, ascending.
    pub fn row_ones_positions(&self, i: usize) -> Vec<usize> {
        self.row(i).iter_ones().collect()
    }

    /// Column `j` as a bit vector over rows.
    pub fn column(&self, j: usize) -> &Bits {
        &self.columns()[j]
    }

    /// All columns as bit vectors over rows (computed once per matrix).
    pub fn columns(&self) -> &[Bits] {
        self.columns.get_or_init(|| {
            let mut cols = vec![Bits::zeros(self.rows); self.cols];
            for i in 0..self.rows {
                for j in self.row(i).iter_ones() {
                    cols[j].set(i, true);
                }
            }
            cols
        })
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Largest pool size (L_M).
    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|i| self.row_weight(i)).max().unwrap_or(0)
    }

    pub fn col_weight(&self, j: usize) -> usize {
        self.column(j).count_ones()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Kronecker product: entry `((i1,i2),(j1,j2)) = a(i1,j1) * b(i2,j2)` with the
    /// block indices `i1`, `j1` varying slowest.
    pub fn kronecker(&self, b: &BinaryMatrix) -> Result<Self> {
        let rows = self
            .rows
            .checked_mul(b.rows)
            .ok_or_else(|| Error::Overflow(format!("kronecker rows {}*{}", self.rows, b.rows)))?;
        let cols = self
            .cols
            .checked_mul(b.cols)
            .ok_or_else(|| Error::Overflow(format!("kronecker cols {}*{}", self.cols, b.cols)))?;
        rows.checked_mul(cols).ok_or_else(|| Error::Overflow(format!("kronecker {rows}x{cols}")))?;
        let mut out = Self::zeros(rows, cols)?;
        let b_rows: Vec<Vec<usize>> = (0..b.rows).map(|i| b.row_ones_positions(i)).collect();
        for i1 in 0..self.rows {
            let a_ones = self.row_ones_positions(i1);
            for (i2, b_ones) in b_rows.iter().enumerate() {
                let r = i1 * b.rows + i2;
                for &j1 in &a_ones {
                    for &j2 in b_ones {
                        out.set(r, j1 * b.cols + j2, true);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation, preserving part order.
    pub fn vstack(parts: &[&BinaryMatrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidDimension("vstack of no parts".into()))?;
        let cols = first.cols;
        if let Some(bad) = parts.iter().find(|p| p.cols != cols) {
            return Err(Error::DimensionMismatch(format!("vstack of {cols}-column and {}-column parts", bad.cols)));
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(rows, cols)?;
        let mut at = 0;
        for p in parts {
            let n = p.data.len();
            out.data[at..at + n].copy_from_slice(&p.data);
            at += n;
        }
        Ok(out)
    }

    /// Replace each row of weight `w` by `ceil(w / l_max)` rows that partition its
    /// 1-positions in ascending column order. Zero rows stay as one zero row.
    ///
    /// Any covering property of the input survives: a row separating an item
    /// from a set keeps doing so in whichever piece holds that item.
    pub fn split_rows(&self, l_max: usize) -> Result<Self> {
        if l_max == 0 {
            return Err(Error::InvalidParameter("l_max must be at least 1".into()));
        }
        let mut out_rows = Vec::new();
        for i in 0..self.rows {
            let ones = self.row_ones_positions(i);
            if ones.is_empty() {
                out_rows.push(Bits::zeros(self.cols));
                continue;
            }
            for chunk in ones.chunks(l_max) {
                out_rows.push(Bits::from_indices(self.cols, chunk.iter().copied()));
            }
        }
        Self::from_row_bits(&out_rows)
    }

    /// Source row index for every row of `split_rows(l_max)`.
    pub fn split_row_sources(&self, l_max: usize) -> Vec<usize> {
        let l_max = l_max.max(1);
        (0..self.rows).flat_map(|i| std::iter::repeat_n(i, self.row_weight(i).div_ceil(l_max).max(1))).collect()
    }

    /// The first `n` columns.
    pub fn truncate_cols(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.cols {
            return Err(Error::InvalidDimension(format!("cannot keep {n} of {} columns", self.cols)));
        }
        if n == self.cols {
            return Ok(self.clone());
        }
        Self::from_fn(self.rows, n, |i, j| self.get(i, j))
    }

    /// The first `n` rows.
    pub fn truncate_rows(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.rows {
            return Err(Error::InvalidDimension(format!("cannot keep {n} of {} rows", self.rows)));
        }
        let mut out = Self::zeros(n, self.cols)?;
        out.data.copy_from_slice(&self.data[..n * self.words_per_row]);
        Ok(out)
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Result<Self> {
        if let Some(&bad) = perm.iter().find(|&&c| c >= self.cols) {
            return Err(Error::InvalidDimension(format!("column {bad} outside {} columns", self.cols)));
        }
        Self::from_fn(self.rows, perm.len(), |i, j| self.get(i, perm[j]))
    }

    /// Plain-text form: `"t n"` then `t` lines of `n` characters from `{0,1}`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1) + 16);
        s.push_str(&format!("{} {}\n", self.rows, self.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim =
            |s: &str| s.parse::<usize>().map_err(|_| Error::Parse { line: 1, msg: format!("bad dimension {s:?}") });
        let (t, n) = match dims.as_slice() {
            [t, n] => (parse_dim(t)?, parse_dim(n)?),
            _ => return Err(Error::Parse { line: 1, msg: "header must be \"t n\"".into() }),
        };
        let mut m = Self::zeros(t, n).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
        for i in 0..t {
            let line = lines.next().ok_or(Error::Parse { line: i + 2, msg: format!("expected {t} rows") })?;
            let line = line.trim_end_matches('\r');
            if line.chars().count() != n {
                return Err(Error::Parse { line: i + 2, msg: format!("expected {n} characters") });
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(Error::Parse { line: i + 2, msg: format!("unexpected character {c:?}") }),
                }
            }
        }
        if let Some((k, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse { line: t + 2 + k, msg: "trailing content after matrix".into() });
        }
        Ok(m)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&str]) -> BinaryMatrix {
        let v: Vec<Vec<u8>> = rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
        BinaryMatrix::from_rows(&v).unwrap()
    }

    #[test]
    fn identity_and_row_ones() {
        assert_eq!(BinaryMatrix::identity(1).unwrap(), m(&["1"]));
        assert_eq!(BinaryMatrix::identity(3).unwrap(), m(&["100", "010", "001"]));
        assert_eq!(BinaryMatrix::identity(4).unwrap().max_row_weight(), 1);
        assert_eq!(BinaryMatrix::row_ones(3).unwrap(), m(&["111"]));
        assert_eq!(BinaryMatrix::row_ones(1).unwrap(), BinaryMatrix::identity(1).unwrap());
        assert!(BinaryMatrix::identity(0).is_err());
        assert!(BinaryMatrix::row_ones(0).is_err());
    }

    #[test]
    fn kronecker_small_cases() {
        let i2 = BinaryMatrix::identity(2).unwrap();
        let i3 = BinaryMatrix::identity(3).unwrap();
        assert_eq!(i2.kronecker(&i3).unwrap(), BinaryMatrix::identity(6).unwrap());
        let r2 = BinaryMatrix::row_ones(2).unwrap();
        let r3 = BinaryMatrix::row_ones(3).unwrap();
        assert_eq!(r2.kronecker(&r3).unwrap(), BinaryMatrix::row_ones(6).unwrap());
        let b = m(&["1011", "0110"]);
        assert_eq!(BinaryMatrix::row_ones(1).unwrap().kronecker(&b).unwrap(), b);
        let k = m(&["10", "11"]).kronecker(&m(&["01"])).unwrap();
        assert_eq!(k, m(&["0100", "0101"]));
    }

    #[test]
    fn vstack_rows_and_mismatch() {
        let i2 = BinaryMatrix::identity(2).unwrap();
        assert_eq!(BinaryMatrix::vstack(&[&i2]).unwrap(), i2);
        let a = BinaryMatrix::zeros(9, 36).unwrap();
        let b = BinaryMatrix::zeros(18, 36).unwrap();
        assert_eq!(BinaryMatrix::vstack(&[&a, &b]).unwrap().rows(), 27);
        let c = BinaryMatrix::zeros(1, 35).unwrap();
        assert!(matches!(BinaryMatrix::vstack(&[&a, &c]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn split_rows_examples() {
        let w4 = m(&["1111"]);
        let s = w4.split_rows(2).unwrap();
        assert_eq!(s, m(&["1100", "0011"]));
        // ascending-column partition of {0,1,2,4} into chunks of two: {0,1}, {2,4}
        assert_eq!(m(&["11101"]).split_rows(2).unwrap(), m(&["11000", "00101"]));
        let x = m(&["1010", "0000", "1111"]);
        assert_eq!(x.split_rows(4).unwrap(), x);
        assert_eq!(x.split_rows(3).unwrap().rows(), 4);
        assert_eq!(x.split_row_sources(3), vec![0, 1, 2, 2]);
        assert!(x.split_rows(0).is_err());
    }

    #[test]
    fn text_format() {
        let x = m(&["101", "010"]);
        assert_eq!(x.to_text(), "2 3\n101\n010\n");
        assert_eq!(BinaryMatrix::parse_text("2 3\n101\n010\n").unwrap(), x);
        assert!(BinaryMatrix::parse_text("2 3\n101\n").is_err());
        assert!(BinaryMatrix::parse_text("1 3\n1x1\n").is_err());
        assert!(BinaryMatrix::parse_text("1 3\n1011\n").is_err());
        assert!(BinaryMatrix::parse_text("0 3\n").is_err());
    }

    #[test]
    fn column_view_matches_entries() {
        let x = m(&["1010", "0110", "0001"]);
        assert_eq!(x.column(2).iter_ones().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(x.col_weight(3), 1);
    }

    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BinaryMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BinaryMatrix::from_rows(&rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn split_rows_reconstructs_each_source_row(x in arb_matrix(6, 70), l in 1usize..8) {
            let s = x.split_rows(l).unwrap();
            prop_assert!(s.max_row_weight() <= l);
            let src = x.split_row_sources(l);
            prop_assert_eq!(src.len(), s.rows());
            for i in 0..x.rows() {
                let mut acc = Bits::zeros(x.cols());
                for (k, _) in src.iter().enumerate().filter(|(_, &r)| r == i) {
                    acc.or_assign(&s.row(k));
                }
                prop_assert_eq!(acc, x.row(i));
            }
        }

        #[test]
        fn kronecker_weight_and_associativity(
            a in arb_matrix(3, 3), b in arb_matrix(3, 3), c in arb_matrix(2, 3)
        ) {
            let ab = a.kronecker(&b).unwrap();
            prop_assert_eq!(ab.max_row_weight(), a.max_row_weight() * b.max_row_weight());
            let left = ab.kronecker(&c).unwrap();
            let right = a.kronecker(&b.kronecker(&c).unwrap()).unwrap();
            // with slowest-varying block indices the canonical bijection is the identity
            prop_assert_eq!(left, right);
        }

        #[test]
        fn text_round_trip(x in arb_matrix(5, 80)) {
            let t = x.to_text();
            let y = BinaryMatrix::parse_text(&t).unwrap();
            prop_assert_eq!(y.to_text(), t);
            prop_assert_eq!(y, x);
        }
    }
}
