//! Linear algebra over the two-element field.
//!
//! Two representations are used: a mutable sparse row-major matrix for
//! assembling differentials (entry toggling is O(1) amortized), and packed
//! bit-rows for elimination. Rank is computed by Gaussian elimination with
//! column pivoting; for large sparse blocks a row-list elimination avoids
//! materializing dense rows until fill demands it.

use std::collections::HashMap;

/// Sparse matrix over GF(2), row-major. Entries are toggled, never assigned:
/// adding the same entry twice cancels it, matching XOR arithmetic.
#[derive(Clone, Debug, Default)]
pub struct SparseF2 {
    pub rows: usize,
    pub cols: usize,
    row_support: Vec<Vec<u32>>,
}

impl SparseF2 {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, row_support: vec![Vec::new(); rows] }
    }

    /// XOR 1 into (r, c).
    pub fn toggle(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        let row = &mut self.row_support[r];
        if let Some(pos) = row.iter().position(|&x| x == c as u32) {
            row.swap_remove(pos);
        } else {
            row.push(c as u32);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_support[r].contains(&(c as u32))
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.row_support[r]
    }

    pub fn entry_count(&self) -> usize {
        self.row_support.iter().map(|r| r.len()).sum()
    }

    /// Matrix product over GF(2); used by d∘d = 0 checks.
    pub fn is_zero_product(&self, other: &SparseF2) -> bool {
        assert_eq!(self.cols, other.rows);
        let mut acc: HashMap<u32, usize> = HashMap::new();
        for r in 0..self.rows {
            acc.clear();
            for &mid in &self.row_support[r] {
                for &c in &other.row_support[mid as usize] {
                    *acc.entry(c).or_insert(0) += 1;
                }
            }
            if acc.values().any(|&n| n % 2 == 1) {
                return false;
            }
        }
        true
    }

    /// Rank by sparse elimination. Rows are merged as sorted index lists;
    /// pivots are the smallest column of each reduced row.
    pub fn rank(&self) -> usize {
        let mut pivot_of_col: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut rank = 0;
        let mut rows: Vec<Vec<u32>> = self
            .row_support
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut v = r.clone();
                v.sort_unstable();
                v
            })
            .collect();
        // lighter rows first keeps fill down
        rows.sort_by_key(|r| r.len());
        for mut row in rows {
            loop {
                let Some(&lead) = row.first() else { break };
                match pivot_of_col.get(&lead) {
                    Some(p) => row = xor_sorted(&row, p),
                    None => {
                        pivot_of_col.insert(lead, row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

/// Symmetric difference of two sorted index lists.
fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggle_cancels() {
        let mut m = SparseF2::new(2, 2);
        m.toggle(0, 1);
        m.toggle(0, 1);
        assert!(!m.get(0, 1));
        m.toggle(0, 1);
        assert!(m.get(0, 1));
    }

    #[test]
    fn rank_identity() {
        let mut m = SparseF2::new(4, 4);
        for i in 0..4 {
            m.toggle(i, i);
        }
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn rank_dependent_rows() {
        // row2 = row0 + row1
        let mut m = SparseF2::new(3, 3);
        m.toggle(0, 0);
        m.toggle(0, 1);
        m.toggle(1, 1);
        m.toggle(1, 2);
        m.toggle(2, 0);
        m.toggle(2, 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn zero_product() {
        // d1: 1 -> (1,1), d2: (1,1) -> 1+1 = 0 over GF(2)
        let mut d1 = SparseF2::new(1, 2);
        d1.toggle(0, 0);
        d1.toggle(0, 1);
        let mut d2 = SparseF2::new(2, 1);
        d2.toggle(0, 0);
        d2.toggle(1, 0);
        assert!(d1.is_zero_product(&d2));
        d2.toggle(1, 0);
        assert!(!d1.is_zero_product(&d2));
    }
}
