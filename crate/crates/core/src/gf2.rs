//! Linear algebra over GF(2) on 64-bit packed words.
//!
//! Bit vectors index their entries from 0. When a vector of length `n`
//! stands for a basis state, entry 0 is the most significant bit of the
//! basis index, so ascending index order is lexicographic order.

use std::cmp::Ordering;

use rand::Rng;

use crate::{Error, Result};

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1`; other characters are rejected.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bools(&b))
    }

    /// Vector whose basis index (entry 0 most significant) is `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, index >> (len - 1 - i) & 1 == 1);
        }
        v
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64);
        (0..self.len).fold(0u64, |acc, i| acc << 1 | self.get(i) as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, o: &BitVec) {
        assert_eq!(self.len, o.len);
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, o: &BitVec) -> bool {
        assert_eq!(self.len, o.len);
        self.words
            .iter()
            .zip(&o.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// Lexicographic comparison with entry 0 first.
    pub fn lex_cmp(&self, o: &BitVec) -> Ordering {
        for (a, b) in self.words.iter().zip(&o.words) {
            let d = a ^ b;
            if d != 0 {
                let i = d.trailing_zeros();
                return if a >> i & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.len.cmp(&o.len)
    }
}

impl std::fmt::Display for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major packed matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Rows given as `0`/`1` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let vs: Vec<BitVec> = rows
            .iter()
            .map(|s| BitVec::parse(s).ok_or_else(|| Error::Dimension(format!("bad row '{s}'"))))
            .collect::<Result<_>>()?;
        let cols = vs.first().map_or(0, |v| v.len());
        Self::from_rows(cols, &vs)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let tail = cols % 64;
        for i in 0..rows {
            for w in 0..m.stride {
                let mut x: u64 = rng.gen();
                if w == m.stride - 1 && tail != 0 {
                    x &= (1u64 << tail) - 1;
                }
                m.data[i * m.stride + w] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        let m = 1u64 << (c % 64);
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_bools(&(0..self.rows).map(|r| self.get(r, c)).collect::<Vec<_>>())
    }

    /// Column `c` packed into a word, bit `r` for row `r`.
    pub fn column_word(&self, c: usize) -> u64 {
        assert!(self.rows <= 64);
        (0..self.rows).fold(0u64, |acc, r| acc | (self.get(r, c) as u64) << r)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let p = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(r, p % 2 == 1);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..o.stride {
                        out.data[i * out.stride + w] ^= o.data[k * o.stride + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            let src = self.row_words(r).to_vec();
            m.row_words_mut(i).copy_from_slice(&src);
        }
        m
    }

    /// Stacks `self` on top of `o`.
    pub fn vstack(&self, o: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != o.cols {
            return Err(Error::Dimension("column counts differ".into()));
        }
        let mut m = self.clone();
        m.rows += o.rows;
        m.data.extend_from_slice(&o.data);
        Ok(m)
    }

    /// Reduced row echelon form in place, applying the same row operations
    /// to `rhs`. Returns the pivot column of each nonzero row.
    fn rref_with(&mut self, mut rhs: Option<&mut BitVec>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let w0 = c / 64;
            let bit = 1u64 << (c % 64);
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + w0] & bit != 0) else {
                continue;
            };
            if p != r {
                for w in w0..self.stride {
                    self.data.swap(p * self.stride + w, r * self.stride + w);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    let (bp, br) = (b.get(p), b.get(r));
                    b.set(p, br);
                    b.set(r, bp);
                }
            }
            for i in 0..self.rows {
                if i != r && self.data[i * self.stride + w0] & bit != 0 {
                    // Words before w0 of the pivot row are zero.
                    for w in w0..self.stride {
                        let x = self.data[r * self.stride + w];
                        self.data[i * self.stride + w] ^= x;
                    }
                    if let Some(b) = rhs.as_deref_mut() {
                        if b.get(r) {
                            b.flip(i);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_with(None);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, free variables set to zero.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut m = self.clone();
        let mut rhs = b.clone();
        let pivots = m.rref_with(Some(&mut rhs));
        if (pivots.len()..self.rows).any(|r| rhs.get(r)) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x.set(p, rhs.get(r));
        }
        Ok(Some(x))
    }

    /// Independent rows spanning the row space (the nonzero rows of the
    /// reduced echelon form).
    pub fn row_basis(&self) -> BitMatrix {
        let (m, pivots) = self.rref();
        m.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    /// Reads a header line `k n`, then `k` rows of `n` characters in
    /// `{0,1}`, then an optional line `b BITS` with a right-hand side. `#`
    /// starts a comment; spaces inside rows are ignored.
    pub fn parse_text(src: &str) -> Result<(BitMatrix, Option<BitVec>)> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: String| Error::Syntax { line, col: 1, msg };
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(hl, format!("expected header 'k n', found '{header}'")))?;
        let [k, n] = dims[..] else {
            return Err(err(hl, format!("expected header 'k n', found '{header}'")));
        };
        let mut rows = Vec::with_capacity(k);
        let mut rhs = None;
        for (li, line) in lines {
            if rhs.is_some() {
                return Err(err(li, "content after the right-hand side".into()));
            }
            if let Some(rest) = line.strip_prefix('b') {
                let s: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
                let b = BitVec::parse(&s).ok_or_else(|| err(li, "bad right-hand side".into()))?;
                if b.len() != k {
                    return Err(err(li, format!("right-hand side has {} entries, expected {k}", b.len())));
                }
                rhs = Some(b);
                continue;
            }
            let s: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            let v = BitVec::parse(&s).ok_or_else(|| err(li, format!("bad matrix row '{line}'")))?;
            if v.len() != n {
                return Err(err(li, format!("row has {} entries, expected {n}", v.len())));
            }
            if rows.len() == k {
                return Err(err(li, format!("more than {k} rows")));
            }
            rows.push(v);
        }
        if rows.len() != k {
            return Err(err(hl, format!("header promises {k} rows, found {}", rows.len())));
        }
        Ok((BitMatrix::from_rows(n, &rows)?, rhs))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.push_str(&self.row(r).to_string());
            s.push('\n');
        }
        s
    }
}

/// Matrix and right-hand side in the text format.
pub fn coset_to_text(c: &Coset) -> String {
    let mut s = c.matrix().to_text();
    if c.matrix().rows() > 0 {
        s.push_str(&format!("b {}\n", c.rhs()));
    }
    s
}

pub fn rank(a: &BitMatrix) -> usize {
    a.rank()
}

/// Rank of a set of vectors packed as words (at most 64 bits each).
pub fn rank_of_words(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for &v in vectors {
        if insert_word(&mut basis, v) {
            r += 1;
        }
    }
    r
}

/// Reduces `v` against an echelon basis indexed by leading bit; inserts it
/// if independent.
#[inline]
pub(crate) fn insert_word(basis: &mut [u64; 64], mut v: u64) -> bool {
    while v != 0 {
        let b = 63 - v.leading_zeros() as usize;
        if basis[b] == 0 {
            basis[b] = v;
            return true;
        }
        v ^= basis[b];
    }
    false
}

/// `prod_{i=1..k} (1 - 2^-i)`, the probability that a uniform `k x k`
/// matrix over GF(2) is invertible.
pub fn invertibility_product(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 - 0.5f64.powi(i as i32)).product()
}

/// Solution set `{x : A x = b}` of a consistent system.
#[derive(Clone, Debug)]
pub struct Coset {
    a: BitMatrix,
    b: BitVec,
    particular: BitVec,
    kernel: Vec<BitVec>,
}

impl Coset {
    pub fn new(a: BitMatrix, b: BitVec) -> Result<Self> {
        let particular = a.solve(&b)?.ok_or(Error::EmptyCoset)?;
        let kernel = a.kernel_basis();
        Ok(Coset {
            a,
            b,
            particular,
            kernel,
        })
    }

    /// Kernel of `a`.
    pub fn subgroup(a: BitMatrix) -> Self {
        let b = BitVec::zeros(a.rows());
        Self::new(a, b).expect("homogeneous systems are consistent")
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &BitVec {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn rank(&self) -> usize {
        self.n() - self.kernel.len()
    }

    pub fn log2_size(&self) -> usize {
        self.kernel.len()
    }

    pub fn particular(&self) -> &BitVec {
        &self.particular
    }

    pub fn kernel(&self) -> &[BitVec] {
        &self.kernel
    }

    pub fn contains(&self, x: &BitVec) -> bool {
        x.len() == self.n() && self.a.mul_vec(x).map(|y| y == self.b).unwrap_or(false)
    }

    /// Same coset described by linearly independent rows.
    pub fn reduced(&self) -> Coset {
        let mut m = self.a.clone();
        let mut rhs = self.b.clone();
        let pivots = m.rref_with(Some(&mut rhs));
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let a = m.select_rows(&keep);
        let b = BitVec::from_bools(&keep.iter().map(|&r| rhs.get(r)).collect::<Vec<_>>());
        Coset {
            a,
            b,
            particular: self.particular.clone(),
            kernel: self.kernel.clone(),
        }
    }

    fn check_cap(&self, cap_log2: usize) -> Result<()> {
        if self.log2_size() > cap_log2 {
            return Err(Error::Oversize {
                what: "coset enumeration (log2 of size)",
                size: self.log2_size(),
                limit: cap_log2,
            });
        }
        Ok(())
    }

    /// All elements in lexicographic order; fails above `2^cap_log2` elements.
    pub fn enumerate(&self, cap_log2: usize) -> Result<Vec<BitVec>> {
        self.check_cap(cap_log2)?;
        let mut out = vec![self.particular.clone()];
        for k in &self.kernel {
            let more: Vec<BitVec> = out
                .iter()
                .map(|x| {
                    let mut y = x.clone();
                    y.xor_assign(k);
                    y
                })
                .collect();
            out.extend(more);
        }
        out.sort_by(|x, y| x.lex_cmp(y));
        Ok(out)
    }

    /// Elements as ascending basis indices (requires `n <= 64`).
    pub fn enumerate_indices(&self, cap_log2: usize) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::Oversize {
                what: "coset index enumeration",
                size: self.n(),
                limit: 64,
            });
        }
        self.check_cap(cap_log2)?;
        let mut out = vec![self.particular.to_index()];
        for k in &self.kernel {
            let kw = k.to_index();
            let more: Vec<u64> = out.iter().map(|x| x ^ kw).collect();
            out.extend(more);
        }
        out.sort_unstable();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use proptest::prelude::*;
    use rand::Rng;

    /// Rank by brute force: size of the row span.
    fn span_size(m: &BitMatrix) -> usize {
        let rows: Vec<u64> = (0..m.rows()).map(|r| m.row(r).to_index()).collect();
        let mut span = std::collections::HashSet::new();
        for s in 0..1u64 << rows.len() {
            let v = (0..rows.len()).filter(|&i| s >> i & 1 == 1).fold(0, |a, i| a ^ rows[i]);
            span.insert(v);
        }
        span.len()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(BitMatrix::from_strs(&["1100", "0110", "1010"]).unwrap().rank(), 2);
        assert_eq!(BitMatrix::identity(70).rank(), 70);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
        assert!(BitMatrix::identity(5).is_invertible());
    }

    #[test]
    fn words_spanning_boundary() {
        let mut rng = trial_rng(3, 0);
        let m = BitMatrix::random(90, 130, &mut rng);
        let t = m.transpose();
        assert_eq!(m.rank(), t.rank());
        for k in m.kernel_basis() {
            assert!(m.mul_vec(&k).unwrap().is_zero());
        }
        assert_eq!(m.rank() + m.kernel_basis().len(), 130);
    }

    #[test]
    fn invertibility_constant() {
        assert!((invertibility_product(8) - 0.289_919_117_858_517).abs() < 1e-12);
        assert!((invertibility_product(8).powi(2) - 0.084_053_094_899_860_67).abs() < 1e-12);
        assert_eq!(invertibility_product(0), 1.0);
        assert!((invertibility_product(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parity_coset() {
        let a = BitMatrix::from_strs(&["1111"]).unwrap();
        let c = Coset::subgroup(a.clone());
        let idx = c.enumerate_indices(20).unwrap();
        assert_eq!(idx, vec![0, 3, 5, 6, 9, 10, 12, 15]);
        let odd = Coset::new(a, BitVec::parse("1").unwrap()).unwrap();
        assert_eq!(odd.log2_size(), 3);
        assert!(odd.contains(&BitVec::parse("0100").unwrap()));
        let bad = Coset::new(BitMatrix::zeros(1, 3), BitVec::parse("1").unwrap());
        assert!(matches!(bad, Err(Error::EmptyCoset)));
        assert!(matches!(c.enumerate(2), Err(Error::Oversize { .. })));
    }

    #[test]
    fn text_format() {
        let (m, b) = BitMatrix::parse_text("# parity\n1 4\n1111\nb 1\n").unwrap();
        assert_eq!(m.cols(), 4);
        assert_eq!(b.unwrap().to_string(), "1");
        let (e, _) = BitMatrix::parse_text("0 3\n").unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 3));
        assert!(BitMatrix::parse_text("2 2\n10\n101\n").is_err());
        assert!(BitMatrix::parse_text("2 2\n10\n").is_err());
        assert!(BitMatrix::parse_text("1 2\n10\nb 11\n").is_err());
        assert_eq!(BitMatrix::parse_text(&m.to_text()).unwrap().0, m);
    }

    proptest! {
        #[test]
        fn rank_agrees_with_span(seed in 0u64..10_000, k in 0usize..7, n in 1usize..9) {
            let m = BitMatrix::random(k, n, &mut trial_rng(seed, 0));
            let r = m.rank();
            prop_assert_eq!(1usize << r, span_size(&m));
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert_eq!(r + m.kernel_basis().len(), n);
        }

        #[test]
        fn coset_enumeration_matches_filter(seed in 0u64..10_000, k in 0usize..6, n in 1usize..9) {
            let mut rng = trial_rng(seed, 1);
            let a = BitMatrix::random(k, n, &mut rng);
            let x = BitVec::from_index(rng.gen_range(0..1u64 << n), n);
            let b = a.mul_vec(&x).unwrap();
            let c = Coset::new(a.clone(), b.clone()).unwrap();
            let brute: Vec<u64> = (0..1u64 << n)
                .filter(|&i| a.mul_vec(&BitVec::from_index(i, n)).unwrap() == b)
                .collect();
            prop_assert_eq!(c.enumerate_indices(20).unwrap(), brute.clone());
            let lex: Vec<u64> = c.enumerate(20).unwrap().iter().map(|v| v.to_index()).collect();
            prop_assert_eq!(lex, brute);
            let red = c.reduced();
            prop_assert_eq!(red.matrix().rows(), c.rank());
            prop_assert!(red.contains(&x));
        }

        #[test]
        fn solve_finds_solutions(seed in 0u64..10_000, k in 1usize..8, n in 1usize..8) {
            let mut rng = trial_rng(seed, 2);
            let a = BitMatrix::random(k, n, &mut rng);
            let b = BitVec::from_index(rng.gen_range(0..1u64 << k), k);
            let exists = (0..1u64 << n).any(|i| a.mul_vec(&BitVec::from_index(i, n)).unwrap() == b);
            match a.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
                None => prop_assert!(!exists),
            }
        }
    }
}
