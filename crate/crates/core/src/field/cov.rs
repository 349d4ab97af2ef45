//! Characters of the row action `M -> gM` for block-diagonal `g`.
//!
//! A character is recorded on a partition of the rows: `(mask, e)` means the
//! factor `det(g_B)^e` for the block `B` with that row mask. Brackets have
//! the single-block character with exponent 1.

/// Covariance of a rational function under block-diagonal row operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cov {
    /// The zero function: covariant with every character.
    Any,
    /// Covariant with the recorded character; an empty list is the trivial
    /// character on any partition.
    Known(Vec<(u32, i32)>),
    /// No covariance is known.
    Unknown,
}

impl Cov {
    pub fn trivial() -> Cov {
        Cov::Known(Vec::new())
    }

    pub fn weight(mask: u32, e: i32) -> Cov {
        Cov::Known(vec![(mask, e)])
    }

    fn parts(&self) -> Option<&[(u32, i32)]> {
        match self {
            Cov::Known(v) => Some(v),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Cov) -> Cov {
        match (self, other) {
            (Cov::Any, _) | (_, Cov::Any) => Cov::Any,
            (Cov::Known(a), Cov::Known(b)) => Cov::Known(combine(a, b, |x, y| x + y)),
            _ => Cov::Unknown,
        }
    }

    pub fn inv(&self) -> Cov {
        match self {
            Cov::Known(a) => Cov::Known(a.iter().map(|&(m, e)| (m, -e)).collect()),
            c => c.clone(),
        }
    }

    pub fn scale(&self, k: i32) -> Cov {
        match self {
            Cov::Known(a) => Cov::Known(a.iter().map(|&(m, e)| (m, e * k)).collect()),
            c => c.clone(),
        }
    }

    pub fn add(&self, other: &Cov) -> Cov {
        match (self, other) {
            (Cov::Any, c) | (c, Cov::Any) => c.clone(),
            (Cov::Known(a), Cov::Known(b)) => {
                let (ra, rb) = (restrict_pair(a, b), restrict_pair(b, a));
                if ra == rb {
                    Cov::Known(ra)
                } else {
                    Cov::Unknown
                }
            }
            _ => Cov::Unknown,
        }
    }

    /// Character restricted to the given partition, if that partition
    /// refines the recorded one.
    pub fn on_partition(&self, blocks: &[u32]) -> Option<Vec<i32>> {
        match self {
            Cov::Any => Some(vec![0; blocks.len()]),
            Cov::Unknown => None,
            Cov::Known(parts) => {
                if parts.is_empty() {
                    return Some(vec![0; blocks.len()]);
                }
                blocks
                    .iter()
                    .map(|&b| parts.iter().find(|&&(m, _)| b & !m == 0).map(|&(_, e)| e))
                    .collect()
            }
        }
    }

    /// Applies a derivative covariant under the row blocks `groups` (with
    /// all remaining rows forming one extra block): each listed block loses
    /// one power of its determinant.
    pub fn derive(&self, groups: &[u32], all_rows: u32) -> Cov {
        match self {
            Cov::Known(_) => {
                let used: u32 = groups.iter().fold(0, |a, &g| a | g);
                let mut part: Vec<(u32, i32)> = groups.iter().map(|&g| (g, -1)).collect();
                if all_rows & !used != 0 {
                    part.push((all_rows & !used, 0));
                }
                self.mul(&Cov::Known(part))
            }
            c => c.clone(),
        }
    }

    pub fn partition(&self) -> Option<Vec<u32>> {
        self.parts().map(|p| p.iter().map(|&(m, _)| m).collect())
    }
}

/// Common refinement of two partitions (either may be empty = trivial).
pub fn refine(a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    let mut out = Vec::new();
    for &x in a {
        for &y in b {
            if x & y != 0 {
                out.push(x & y);
            }
        }
    }
    out.sort_unstable();
    out
}

fn restrict_pair(a: &[(u32, i32)], b: &[(u32, i32)]) -> Vec<(u32, i32)> {
    let pa: Vec<u32> = a.iter().map(|x| x.0).collect();
    let pb: Vec<u32> = b.iter().map(|x| x.0).collect();
    let blocks = refine(&pa, &pb);
    blocks
        .into_iter()
        .map(|m| {
            let e = if a.is_empty() { 0 } else { a.iter().find(|&&(x, _)| m & !x == 0).unwrap().1 };
            (m, e)
        })
        .collect()
}

fn combine(a: &[(u32, i32)], b: &[(u32, i32)], f: impl Fn(i32, i32) -> i32) -> Vec<(u32, i32)> {
    let ra = restrict_pair(a, b);
    let rb = restrict_pair(b, a);
    ra.iter().zip(rb.iter()).map(|(&(m, x), &(_, y))| (m, f(x, y))).collect()
}
