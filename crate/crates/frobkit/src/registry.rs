//! Built-in ring definitions addressable by name from the CLI and tests.

use crate::cone::Cone;
use crate::toric::{ToricError, ToricRing};

/// The rational double point `k[x,y,z]/(xy - z^2)`: cone with facet
/// normals `(0,1)` and `(2,-1)`, class group `Z/2`.
pub fn a1(p: u64) -> Result<ToricRing, ToricError> {
    ToricRing::new(Cone::from_rows(&[vec![0, 1], vec![2, -1]])?, p)
}

/// The three-dimensional quadric cone `k[x,y,u,v]/(xy - uv)`: facet
/// normals `(1,0,0), (0,1,0), (-1,0,1), (0,-1,1)`, class group `Z`.
pub fn quadric3(p: u64) -> Result<ToricRing, ToricError> {
    ToricRing::new(
        Cone::from_rows(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![-1, 0, 1],
            vec![0, -1, 1],
        ])?,
        p,
    )
}

pub fn polynomial(n: usize, p: u64) -> Result<ToricRing, ToricError> {
    ToricRing::polynomial_ring(n, p)
}

/// Resolves a registry name (`A1`, `quadric3`, `poly<n>`) to a ring.
pub fn by_name(name: &str, p: u64) -> Option<Result<ToricRing, ToricError>> {
    match name {
        "A1" | "a1" => Some(a1(p)),
        "quadric3" => Some(quadric3(p)),
        _ => name
            .strip_prefix("poly")
            .and_then(|s| s.parse::<usize>().ok())
            .map(|n| polynomial(n, p)),
    }
}

/// Load-time self-checks for the built-in entries: the generator relations
/// `x*y = z^2` for A1 and `g2 + g3 = g1 + g4` for the quadric hold among
/// the Hilbert-basis characters.
pub fn self_check() -> Result<(), String> {
    let a1 = a1(3).map_err(|e| e.to_string())?;
    let mut hb = a1
        .cone()
        .hilbert_basis(4)
        .map_err(|e| format!("A1 hilbert basis: {e}"))?;
    hb.sort();
    if hb != vec![vec![1, 0], vec![1, 1], vec![1, 2]] {
        return Err(format!("A1 generators unexpected: {hb:?}"));
    }
    // x*y = z^2 in the character lattice
    let sum: Vec<i64> = hb[0].iter().zip(&hb[2]).map(|(a, b)| a + b).collect();
    let twice: Vec<i64> = hb[1].iter().map(|x| 2 * x).collect();
    if sum != twice {
        return Err("A1 relation x*y = z^2 failed".to_string());
    }

    let q = quadric3(2).map_err(|e| e.to_string())?;
    let mut hb = q
        .cone()
        .hilbert_basis(3)
        .map_err(|e| format!("quadric3 hilbert basis: {e}"))?;
    hb.sort();
    if hb.len() != 4 {
        return Err(format!("quadric3 generator count: {}", hb.len()));
    }
    let add = |a: &Vec<i64>, b: &Vec<i64>| -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    };
    // xy = uv among the four generators in some pairing
    let ok = add(&hb[0], &hb[3]) == add(&hb[1], &hb[2]);
    if !ok {
        return Err("quadric3 relation xy = uv failed".to_string());
    }
    Ok(())
}
