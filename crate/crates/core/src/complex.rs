//! Pure simplicial complexes on the vertex set `1..=m`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted vertex list.
pub type Face = Vec<u32>;

/// Bit `v - 1` set for every vertex `v` of the face.
pub fn mask_of(face: &[u32]) -> u64 {
    face.iter().fold(0, |a, &v| a | 1u64 << (v - 1))
}

pub fn face_of(mask: u64) -> Face {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Pure simplicial complex. Facets are kept sorted, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: u32,
    rank: usize,
    facets: Vec<Face>,
    masks: Vec<u64>,
    index: FxHashMap<u64, usize>,
}

/// Result of the closed-pseudomanifold test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudomanifoldReport {
    pub ok: bool,
    /// Ridges not contained in exactly two facets, with their facet count.
    pub bad_ridges: Vec<(Face, usize)>,
    pub connected: bool,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    m: u32,
    facets: Vec<Vec<u32>>,
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of a sorted slice, in lexicographic order.
pub fn subsets(items: &[u32], k: usize) -> Vec<Face> {
    fn go(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Face>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

impl SimplicialComplex {
    /// Validated pure complex with every vertex of `1..=m` used.
    pub fn from_facets(m: u32, facets: &[Vec<u32>]) -> Result<Self> {
        let c = Self::build(m, facets)?;
        let used = c.masks.iter().fold(0u64, |a, &b| a | b);
        for v in 1..=m {
            if used >> (v - 1) & 1 == 0 {
                return Err(Error::UnusedVertex(v));
            }
        }
        Ok(c)
    }

    /// Like `from_facets` but vertices of `1..=m` may be unused (links).
    pub fn from_facets_partial(m: u32, facets: &[Vec<u32>]) -> Result<Self> {
        Self::build(m, facets)
    }

    fn build(m: u32, facets: &[Vec<u32>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::Empty);
        }
        if m > 63 {
            return Err(Error::BadShape(format!("at most 63 vertices supported, got {m}")));
        }
        let mut set: BTreeSet<Face> = BTreeSet::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            for &v in &s {
                if v == 0 || v > m {
                    return Err(Error::BadVertex { vertex: v, m });
                }
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadShape(format!("repeated vertex in {f:?}")));
            }
            if !set.insert(s.clone()) {
                return Err(Error::DuplicateFacet(s));
            }
        }
        let list: Vec<Face> = set.into_iter().collect();
        let masks: Vec<u64> = list.iter().map(|f| mask_of(f)).collect();
        for (i, a) in masks.iter().enumerate() {
            for (j, b) in masks.iter().enumerate() {
                if i != j && a & b == *a {
                    return Err(Error::NotPure(list[i].clone()));
                }
            }
        }
        let rank = list[0].len();
        if let Some(f) = list.iter().find(|f| f.len() != rank) {
            return Err(Error::MixedDimension(rank, f.len()));
        }
        let index = masks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        Ok(SimplicialComplex { m, rank, facets: list, masks, index })
    }

    /// Boundary of the `(n+1)`-simplex on `n + 2` vertices.
    pub fn boundary_simplex(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::TooSmall { what: "dimension", got: n, min: 1 });
        }
        let verts: Vec<u32> = (1..=n as u32 + 2).collect();
        Self::from_facets(n as u32 + 2, &subsets(&verts, n + 1))
    }

    pub fn polygon(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::TooSmall { what: "polygon size", got: m as usize, min: 3 });
        }
        let mut f: Vec<Vec<u32>> = (1..m).map(|i| vec![i, i + 1]).collect();
        f.push(vec![1, m]);
        Self::from_facets(m, &f)
    }

    /// Join with the two new vertices `m+1` and `m+2`.
    pub fn suspension(&self) -> Self {
        let mut f = Vec::with_capacity(2 * self.facets.len());
        for apex in [self.m + 1, self.m + 2] {
            for s in &self.facets {
                let mut t = s.clone();
                t.push(apex);
                f.push(t);
            }
        }
        Self::from_facets_partial(self.m + 2, &f).expect("suspension of a valid complex")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Dimension; panics on the empty-face complex (`rank` 0).
    pub fn n(&self) -> usize {
        assert!(self.rank > 0, "complex {{∅}} has dimension -1");
        self.rank - 1
    }

    /// Facet size, `n + 1`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn facet_masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn facet_index(&self, face: &[u32]) -> Option<usize> {
        self.index.get(&mask_of(face)).copied()
    }

    pub fn is_facet(&self, face: &[u32]) -> bool {
        face.len() == self.rank && self.index.contains_key(&mask_of(face))
    }

    pub fn is_face_mask(&self, mask: u64) -> bool {
        self.masks.iter().any(|&f| f & mask == mask)
    }

    pub fn is_face(&self, face: &[u32]) -> bool {
        face.iter().all(|&v| v >= 1 && v <= self.m) && self.is_face_mask(mask_of(face))
    }

    /// Lexicographically smallest facet containing the mask.
    pub fn first_facet_containing(&self, mask: u64) -> Option<&Face> {
        self.masks.iter().position(|&f| f & mask == mask).map(|i| &self.facets[i])
    }

    pub fn vertices(&self) -> Vec<u32> {
        face_of(self.masks.iter().fold(0, |a, &b| a | b))
    }

    /// All faces with `k` vertices, in lexicographic order.
    pub fn faces_of_size(&self, k: usize) -> Vec<Face> {
        let mut set: BTreeSet<Face> = BTreeSet::new();
        for f in &self.facets {
            for s in subsets(f, k) {
                set.insert(s);
            }
        }
        set.into_iter().collect()
    }

    fn ridge_map(&self) -> BTreeMap<Face, Vec<usize>> {
        let mut ridges: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for r in subsets(f, self.rank - 1) {
                ridges.entry(r).or_default().push(i);
            }
        }
        ridges
    }

    pub fn pseudomanifold_report(&self) -> PseudomanifoldReport {
        if self.rank == 0 {
            return PseudomanifoldReport { ok: false, bad_ridges: Vec::new(), connected: true };
        }
        let ridges = self.ridge_map();
        let bad_ridges: Vec<(Face, usize)> =
            ridges.iter().filter(|(_, fs)| fs.len() != 2).map(|(r, fs)| (r.clone(), fs.len())).collect();
        let connected = self.component_of(0).len() == self.facets.len();
        PseudomanifoldReport { ok: bad_ridges.is_empty() && connected, bad_ridges, connected }
    }

    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.pseudomanifold_report().ok
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.facets.len()];
        for fs in self.ridge_map().values() {
            for &a in fs {
                for &b in fs {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.facets.len()];
        let mut q = VecDeque::from([start]);
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(x) = q.pop_front() {
            out.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        out
    }

    /// Shortest sequence of facets from `a` to `b` with consecutive facets
    /// sharing a ridge.
    pub fn facet_path(&self, a: &[u32], b: &[u32]) -> Result<Vec<Face>> {
        let ia = self.facet_index(a).filter(|_| a.len() == self.rank).ok_or_else(|| Error::NotAFace(a.to_vec()))?;
        let ib = self.facet_index(b).filter(|_| b.len() == self.rank).ok_or_else(|| Error::NotAFace(b.to_vec()))?;
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.facets.len()];
        prev[ia] = ia;
        let mut q = VecDeque::from([ia]);
        while let Some(x) = q.pop_front() {
            if x == ib {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        if prev[ib] == usize::MAX {
            return Err(Error::NoPath(self.facets[ia].clone(), self.facets[ib].clone()));
        }
        let mut path = vec![ib];
        while *path.last().unwrap() != ia {
            path.push(prev[*path.last().unwrap()]);
        }
        Ok(path.into_iter().rev().map(|i| self.facets[i].clone()).collect())
    }

    /// Link of a face, on the original vertex labels.
    pub fn link(&self, tau: &[u32]) -> Result<SimplicialComplex> {
        let t = mask_of(tau);
        if !self.is_face(tau) {
            return Err(Error::NotAFace(tau.to_vec()));
        }
        let facets: Vec<Vec<u32>> =
            self.masks.iter().filter(|&&f| f & t == t).map(|&f| face_of(f & !t)).collect();
        Self::from_facets_partial(self.m, &facets)
    }

    /// Inclusion-minimal non-faces, ordered by size then lexicographically.
    pub fn minimal_nonfaces(&self) -> Vec<Face> {
        let verts: Vec<u32> = (1..=self.m).collect();
        let mut out = Vec::new();
        for k in 1..=(self.rank + 1).min(self.m as usize) {
            for s in subsets(&verts, k) {
                let mask = mask_of(&s);
                if self.is_face_mask(mask) {
                    continue;
                }
                if s.iter().all(|&v| self.is_face_mask(mask & !(1 << (v - 1)))) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// `f_0, …, f_n`.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut seen: FxHashSet<u64> = FxHashSet::default();
        let mut f = vec![0u64; self.rank];
        for &mask in &self.masks {
            let verts = face_of(mask);
            for k in 1..=self.rank {
                for s in subsets(&verts, k) {
                    if seen.insert(mask_of(&s)) {
                        f[k - 1] += 1;
                    }
                }
            }
        }
        f
    }

    /// `h_0, …, h_{n+1}`.
    pub fn h_vector(&self) -> Vec<i64> {
        let d = self.rank as i64;
        let mut fx = vec![1i64];
        fx.extend(self.f_vector().iter().map(|&x| x as i64));
        (0..=d)
            .map(|k| (0..=k).map(|i| (-1i64).pow((k - i) as u32) * binom(d - i, k - i) * fx[i as usize]).sum())
            .collect()
    }

    /// `g_0 = 1`, `g_i = h_i - h_{i-1}` for `i <= (n+1)/2`.
    pub fn g_vector(&self) -> Vec<i64> {
        let h = self.h_vector();
        let top = self.rank / 2;
        (0..=top).map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] }).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ComplexJson { m: self.m, facets: self.facets.clone() }).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_facets(c.m, &c.facets)
    }
}
