//! Dense boolean matrices used for preorders on tokens, token relations and
//! event orders.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let mut m = Self::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    pub fn assign(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words_per_row + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// All set positions in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols)
                .filter(move |&c| self.get(r, c))
                .map(move |c| (r, c))
        })
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| self.get(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                if !self.get(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.get(j, k) && !self.get(i, k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || !(self.get(i, j) && self.get(j, i))))
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn closure(&self) -> BitMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        for i in 0..n {
            m.set(i, i);
        }
        for k in 0..n {
            for i in 0..n {
                if m.get(i, k) {
                    for j in 0..n {
                        if m.get(k, j) {
                            m.set(i, j);
                        }
                    }
                }
            }
        }
        m
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_rows_span_words() {
        let mut m = BitMatrix::new(2, 130);
        m.set(1, 129);
        m.set(0, 64);
        assert!(m.get(1, 129) && m.get(0, 64) && !m.get(0, 63));
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 64), (1, 129)]);
        m.assign(1, 129, false);
        assert_eq!(m.count(), 1);
    }

    #[test]
    fn closure_of_chain() {
        let mut m = BitMatrix::new(3, 3);
        m.set(0, 1);
        m.set(1, 2);
        let c = m.closure();
        assert!(c.get(0, 2) && c.is_reflexive() && c.is_transitive() && c.is_antisymmetric());
        assert!(!m.is_transitive());
    }
}
