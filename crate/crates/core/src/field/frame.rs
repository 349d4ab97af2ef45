//! Frames: partial specialisations of the generic matrix.
//!
//! A relative invariant `F` of a row group `G` (so `F(gM) = chi(g) F(M)`) is
//! determined by its values on any slice meeting almost every `G`-orbit.
//! Setting the block `M[R_k, C_k]` to the identity for each row block `R_k`
//! gives such a slice for the block-diagonal group on the `R_k`. Frames
//! record that slice, plus optional columns fixed outright (only valid for
//! quantities independent of those columns).

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use super::bracket::{det_poly_matrix, BracketKey};
use super::poly::Polynomial;
use super::VarIndex;
use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
pub struct Frame {
    id: u64,
    p: u32,
    rows: usize,
    fixed: FxHashMap<VarIndex, u32>,
    blocks: Vec<u32>,
    free_columns: Vec<u8>,
    cache: Mutex<FxHashMap<BracketKey, Polynomial>>,
}

/// Row mask with bits `0..rows` set.
pub fn full_mask(rows: usize) -> u32 {
    if rows >= 32 {
        u32::MAX
    } else {
        (1u32 << rows) - 1
    }
}

impl Frame {
    /// The unspecialised generic matrix.
    pub fn generic(p: u32, rows: usize) -> Arc<Frame> {
        Arc::new(Frame {
            id: 0,
            p,
            rows,
            fixed: FxHashMap::default(),
            blocks: Vec::new(),
            free_columns: Vec::new(),
            cache: Mutex::new(FxHashMap::default()),
        })
    }

    /// Slice of the block-diagonal row group: for each `(row_mask, cols)` the
    /// rows in the mask (ascending) meet `cols` in an identity block. Masks
    /// must partition the rows.
    pub fn slice(p: u32, rows: usize, blocks: &[(u32, Vec<u8>)]) -> Result<Frame> {
        let mut seen = 0u32;
        let mut fixed = FxHashMap::default();
        for (mask, cols) in blocks {
            if mask & seen != 0 || *mask & !full_mask(rows) != 0 {
                return Err(Error::BadShape("row blocks overlap or exceed the matrix".into()));
            }
            seen |= mask;
            let rs: Vec<usize> = (0..rows).filter(|r| mask & (1 << r) != 0).collect();
            if rs.len() != cols.len() {
                return Err(Error::BadShape(format!("block of {} rows given {} columns", rs.len(), cols.len())));
            }
            for (a, &r) in rs.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    fixed.insert(VarIndex::new(r + 1, c as usize), u32::from(a == b));
                }
            }
        }
        if seen != full_mask(rows) {
            return Err(Error::BadShape("row blocks do not cover the matrix".into()));
        }
        Ok(Frame {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            rows,
            fixed,
            blocks: blocks.iter().map(|b| b.0).collect(),
            free_columns: Vec::new(),
            cache: Mutex::new(FxHashMap::default()),
        })
    }

    /// Additionally fixes a whole column to constants. Only sound for
    /// quantities that do not depend on that column.
    pub fn with_free_column(mut self, col: u8, values: &[u32]) -> Result<Frame> {
        if values.len() != self.rows {
            return Err(Error::WrongLength { expected: self.rows, got: values.len() });
        }
        for (i, &v) in values.iter().enumerate() {
            let key = VarIndex::new(i + 1, col as usize);
            if self.fixed.contains_key(&key) {
                return Err(Error::BadShape(format!("column {col} already normalised")));
            }
            self.fixed.insert(key, v % self.p);
        }
        self.free_columns.push(col);
        if self.id == 0 {
            self.id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        }
        Ok(self)
    }

    /// Fixes one more entry, e.g. to normalise a column scaling.
    pub fn with_entry(mut self, i: usize, j: usize, value: u32) -> Result<Frame> {
        let key = VarIndex::new(i, j);
        if self.fixed.contains_key(&key) {
            return Err(Error::BadShape(format!("entry {key} already fixed")));
        }
        self.fixed.insert(key, value % self.p);
        if self.id == 0 {
            self.id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        }
        Ok(self)
    }

    pub fn into_arc(self) -> Arc<Frame> {
        Arc::new(self)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn is_generic(&self) -> bool {
        self.fixed.is_empty()
    }

    /// Row partition of the normalising group (empty for the generic frame).
    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn free_columns(&self) -> &[u8] {
        &self.free_columns
    }

    pub fn fixed_value(&self, v: VarIndex) -> Option<u32> {
        self.fixed.get(&v).copied()
    }

    pub fn fixes_column(&self, col: u8) -> bool {
        self.fixed.keys().any(|v| v.col == col)
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        let v = VarIndex::new(i, j);
        match self.fixed.get(&v) {
            Some(&c) => Polynomial::constant(self.p, c),
            None => Polynomial::var(self.p, v),
        }
    }

    pub fn specialize(&self, f: &Polynomial) -> Polynomial {
        if self.fixed.is_empty() {
            return f.clone();
        }
        f.specialize(|v| self.fixed.get(&v).copied())
    }

    /// Bracket over sorted columns, expanded on this frame.
    pub fn bracket(&self, key: &BracketKey) -> Polynomial {
        if let Some(b) = self.cache.lock().unwrap().get(key) {
            return b.clone();
        }
        assert_eq!(key.len(), self.rows, "bracket size does not match frame");
        let entries: Vec<Vec<Polynomial>> = (1..=self.rows)
            .map(|i| key.iter().map(|&j| self.entry(i, j as usize)).collect())
            .collect();
        let b = det_poly_matrix(&entries, self.p);
        self.cache.lock().unwrap().insert(key.clone(), b.clone());
        b
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        let entries: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.entry(i, j)).collect())
            .collect();
        det_poly_matrix(&entries, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn identity_slice_brackets() {
        let f = Frame::slice(2, 2, &[(0b11, vec![1, 3])]).unwrap();
        assert!(f.bracket(&smallvec![1, 3]).is_one());
        assert_eq!(f.bracket(&smallvec![1, 2]), Polynomial::var(2, VarIndex::new(2, 2)));
        assert_eq!(f.bracket(&smallvec![2, 3]), Polynomial::var(2, VarIndex::new(1, 2)));
    }

    #[test]
    fn block_slice_validation() {
        assert!(Frame::slice(2, 4, &[(0b0011, vec![5, 6]), (0b1100, vec![5, 6])]).is_ok());
        assert!(Frame::slice(2, 4, &[(0b0011, vec![5, 6])]).is_err());
        assert!(Frame::slice(2, 4, &[(0b0111, vec![5, 6])]).is_err());
        let g = Frame::slice(2, 2, &[(0b11, vec![1, 2])]).unwrap();
        assert!(g.with_free_column(1, &[1, 0]).is_err());
    }
}
