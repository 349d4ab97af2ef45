//! Named test complexes.

use crate::complex::{mask_of, subsets, SimplicialComplex};
use crate::error::{Error, Result};

pub const NAMES: [&str; 11] = [
    "triangle",
    "polygon4",
    "polygon5",
    "polygon6",
    "polygon7",
    "polygon8",
    "simplex1",
    "simplex2",
    "simplex3",
    "octahedron",
    "join7",
];

/// `S^0 * ∂Δ^2 * S^0` on seven vertices: non-faces `{1,2}`, `{3,4,5}`, `{6,7}`.
pub fn join7() -> SimplicialComplex {
    let verts: Vec<u32> = (1..=7).collect();
    let bad = [mask_of(&[1, 2]), mask_of(&[3, 4, 5]), mask_of(&[6, 7])];
    let facets: Vec<Vec<u32>> =
        subsets(&verts, 4).into_iter().filter(|s| bad.iter().all(|&b| mask_of(s) & b != b)).collect();
    SimplicialComplex::from_facets(7, &facets).expect("valid join")
}

pub fn octahedron() -> SimplicialComplex {
    SimplicialComplex::polygon(4).expect("square").suspension()
}

pub fn by_name(name: &str) -> Result<SimplicialComplex> {
    let poly = |m| SimplicialComplex::polygon(m);
    match name {
        "triangle" => poly(3),
        "octahedron" => Ok(octahedron()),
        "join7" => Ok(join7()),
        _ => {
            if let Some(m) = name.strip_prefix("polygon").and_then(|s| s.parse().ok()) {
                poly(m)
            } else if let Some(n) = name.strip_prefix("simplex").and_then(|s| s.parse().ok()) {
                SimplicialComplex::boundary_simplex(n)
            } else {
                Err(Error::Config(format!("unknown complex {name}")))
            }
        }
    }
}

/// Every bundled complex with its name.
pub fn all() -> Vec<(&'static str, SimplicialComplex)> {
    NAMES.iter().map(|&n| (n, by_name(n).expect("bundled complex"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_complexes_are_spheres() {
        for (name, cx) in all() {
            assert!(cx.is_closed_pseudomanifold(), "{name}");
        }
        assert_eq!(by_name("simplex1").unwrap(), by_name("triangle").unwrap());
        assert_eq!(octahedron().h_vector(), vec![1, 3, 3, 1]);
        assert_eq!(join7().h_vector(), vec![1, 3, 4, 3, 1]);
        assert!(by_name("cube").is_err());
    }
}
