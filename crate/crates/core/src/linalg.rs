//! Dense linear algebra over `GF(p^w)` for specialised (numeric) matrices.

use crate::field::ExtField;

/// Incrementally maintained reduced row-echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon<'a> {
    field: &'a ExtField,
    ncols: usize,
    /// Normalised rows (pivot entry 1), paired with their pivot column.
    rows: Vec<(usize, Vec<u64>)>,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a ExtField, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        p.sort_unstable();
        p
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ncols);
        let f = self.field;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[piv]).expect("nonzero pivot");
        for x in v.iter_mut() {
            if *x != 0 {
                *x = f.mul(*x, inv);
            }
        }
        // keep the basis fully reduced so `reduce` is a single pass
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&v) {
                if r != 0 {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

pub fn rank(field: &ExtField, rows: &[Vec<u64>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = Echelon::new(field, first.len());
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Determinant by Gaussian elimination.
pub fn det(field: &ExtField, m: &[Vec<u64>]) -> u64 {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut d = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            d = field.neg(d);
        }
        d = field.mul(d, a[k][k]);
        let inv = field.inv(a[k][k]).expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let c = field.mul(a[i][k], inv);
            for j in k..n {
                let t = field.mul(c, a[k][j]);
                a[i][j] = field.sub(a[i][j], t);
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;

    #[test]
    fn rank_and_membership() {
        let f = ExtField::new(FieldConfig::default()).unwrap();
        let a = vec![3u64, 5, 7];
        let b = vec![11u64, 13, 17];
        let c: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| f.add(f.mul(x, 9), f.mul(y, 4))).collect();
        assert_eq!(rank(&f, &[a.clone(), b.clone(), c.clone()]), 2);
        let mut e = Echelon::new(&f, 3);
        e.insert(&a);
        e.insert(&b);
        assert!(e.contains(&c));
        assert!(!e.contains(&[1, 0, 0]) || !e.contains(&[0, 0, 1]));
    }

    #[test]
    fn det_small() {
        for cfg in [FieldConfig::default(), FieldConfig::new(5, 14).unwrap()] {
            let f = ExtField::new(cfg).unwrap();
            let m = vec![vec![2u64, 1], vec![1, 2]];
            // 4 - 1 = 3 computed in the prime field
            let expect = f.sub(f.mul(2, 2), 1);
            assert_eq!(det(&f, &m), expect);
            assert_eq!(det(&f, &[vec![1, 1], vec![1, 1]]), 0);
        }
    }
}
