use smallvec::SmallVec;

use super::poly::Polynomial;
use super::VarIndex;
use crate::error::{Error, Result};

/// Shape of the generic matrix `M = (a[i,j])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenericMatrixSpec {
    pub rows: usize,
    pub cols: usize,
}

impl GenericMatrixSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols < rows {
            return Err(Error::BadShape(format!("{rows}x{cols} generic matrix")));
        }
        if rows > 255 || cols > 255 {
            return Err(Error::BadShape(format!("{rows}x{cols} exceeds 255")));
        }
        Ok(GenericMatrixSpec { rows, cols })
    }

    pub fn var(&self, i: usize, j: usize) -> VarIndex {
        VarIndex::new(i, j)
    }
}

/// Sorted column set of a bracket.
pub type BracketKey = SmallVec<[u8; 8]>;

/// Sorts the columns. Returns `None` for a repeated column, otherwise
/// whether sorting was an odd permutation together with the sorted key.
pub fn normalize_columns(cols: &[usize]) -> Option<(bool, BracketKey)> {
    let mut v: BracketKey = cols.iter().map(|&c| c as u8).collect();
    let mut odd = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, v))
}

/// Expanded bracket `[cols]` of the generic matrix over GF(p).
pub fn bracket(spec: &GenericMatrixSpec, cols: &[usize], p: u32) -> Result<Polynomial> {
    if cols.len() != spec.rows {
        return Err(Error::WrongLength { expected: spec.rows, got: cols.len() });
    }
    for &c in cols {
        if c == 0 || c > spec.cols {
            return Err(Error::BadColumn { col: c, max: spec.cols });
        }
    }
    let entries: Vec<Vec<Polynomial>> = (1..=spec.rows)
        .map(|i| cols.iter().map(|&j| Polynomial::var(p, VarIndex::new(i, j))).collect())
        .collect();
    Ok(det_poly_matrix(&entries, p))
}

/// Size up to which `det_poly_matrix` uses cofactor expansion.
pub const DEFAULT_COFACTOR_CUTOFF: usize = 4;

pub fn det_poly_matrix(entries: &[Vec<Polynomial>], p: u32) -> Polynomial {
    det_poly_matrix_with(entries, p, DEFAULT_COFACTOR_CUTOFF)
}

/// Exact determinant: cofactor expansion (memoised over column subsets) up
/// to `cutoff`, fraction-free Bareiss elimination above.
pub fn det_poly_matrix_with(entries: &[Vec<Polynomial>], p: u32, cutoff: usize) -> Polynomial {
    let n = entries.len();
    assert!(entries.iter().all(|r| r.len() == n), "matrix is not square");
    if n == 0 {
        return Polynomial::one(p);
    }
    if n <= cutoff {
        cofactor_det(entries, p)
    } else {
        bareiss_det(entries, p)
    }
}

fn cofactor_det(a: &[Vec<Polynomial>], p: u32) -> Polynomial {
    let n = a.len();
    assert!(n <= 20, "cofactor expansion limited to 20x20");
    // minors[S] = det of rows 0..|S| restricted to the column subset S
    let full = (1usize << n) - 1;
    let mut minors: Vec<Option<Polynomial>> = vec![None; 1 << n];
    minors[0] = Some(Polynomial::one(p));
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for s in 0..=full {
        by_size[s.count_ones() as usize].push(s);
    }
    for k in 1..=n {
        let row = k - 1;
        for &s in &by_size[k] {
            let mut acc = Polynomial::zero(p);
            // expand along the last row of the minor; column position gives the sign
            let mut pos = 0usize;
            for j in 0..n {
                if s & (1 << j) == 0 {
                    continue;
                }
                let rest = s & !(1 << j);
                let sub = minors[rest].as_ref().unwrap();
                if !sub.is_zero() && !a[row][j].is_zero() {
                    let term = a[row][j].mul(sub);
                    if (k - 1 - pos) % 2 == 1 {
                        acc = acc.sub(&term);
                    } else {
                        acc = acc.add(&term);
                    }
                }
                pos += 1;
            }
            minors[s] = Some(acc);
        }
        if k >= 2 {
            for &s in &by_size[k - 2] {
                minors[s] = None;
            }
        }
    }
    minors[full].take().unwrap()
}

fn bareiss_det(a: &[Vec<Polynomial>], p: u32) -> Polynomial {
    let n = a.len();
    let mut m: Vec<Vec<Polynomial>> = a.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one(p);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Polynomial::zero(p);
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}
