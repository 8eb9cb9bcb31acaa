//! Frobenius pushforward decompositions for monomial ideals over
//! polynomial rings, including the second-syzygy bookkeeping for the
//! Koszul example `M = Omega^2(R/(u,v,w))`.
//!
//! Isomorphism classes of monomial modules are tested by translation
//! normal form: two monomial ideals are isomorphic as modules iff one is a
//! monomial translate of the other. The Hilbert-consistency check below
//! cross-validates this via windowed standard-monomial counts.

use std::collections::BTreeSet;
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::frobenius::{ceil_div, FrobError, FrobeniusLevel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error(transparent)]
    Frob(#[from] FrobError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syzygy example needs d >= 3, got {0}")]
    DimensionTooSmall(usize),
}

/// Monomial ideal given by its minimal generators (exponent vectors).
/// The unit ideal is `{0}`; an empty generator set is the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIdeal {
    n: usize,
    gens: BTreeSet<Vec<u32>>,
}

const ALIASES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    pub fn new(n: usize, gens: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let dedup: BTreeSet<Vec<u32>> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), n, "exponent vector length"))
            .collect();
        let gens = dedup
            .iter()
            .filter(|g| !dedup.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        MonomialIdeal { n, gens }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal::new(n, [vec![0; n]])
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: BTreeSet::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.gens.iter()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.contains(&vec![0; self.n])
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_monomial(&self, m: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, m))
    }

    /// `I^{[q]}`: generators scaled by `q` componentwise.
    pub fn frobenius_power(&self, q: u32) -> MonomialIdeal {
        assert!(q >= 1);
        MonomialIdeal {
            n: self.n,
            gens: self
                .gens
                .iter()
                .map(|g| g.iter().map(|&x| x * q).collect())
                .collect(),
        }
    }

    /// Translation normal form: subtract the per-variable minimum exponent
    /// over the minimal generators. Idempotent.
    pub fn iso_normal_form(&self) -> MonomialIdeal {
        if self.gens.is_empty() {
            return self.clone();
        }
        let mins: Vec<u32> = (0..self.n)
            .map(|i| self.gens.iter().map(|g| g[i]).min().unwrap())
            .collect();
        MonomialIdeal {
            n: self.n,
            gens: self
                .gens
                .iter()
                .map(|g| g.iter().zip(&mins).map(|(x, m)| x - m).collect())
                .collect(),
        }
    }

    /// Parses comma-separated power products, e.g. `x^2*y, z^3` or
    /// `x1*x3^2`. Single-letter aliases x,y,z,u,v,w are accepted for
    /// rings with at most six variables.
    pub fn parse(n: usize, text: &str) -> Result<MonomialIdeal, MonomialError> {
        let mut gens = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(MonomialError::Parse("empty generator".to_string()));
            }
            let mut exp = vec![0u32; n];
            if part == "1" {
                gens.push(exp);
                continue;
            }
            for factor in part.split('*') {
                let factor = factor.trim();
                let (var, pow) = match factor.split_once('^') {
                    Some((v, p)) => {
                        let pow: u32 = p.trim().parse().map_err(|_| {
                            MonomialError::Parse(format!("bad exponent in '{factor}'"))
                        })?;
                        (v.trim(), pow)
                    }
                    None => (factor, 1),
                };
                let idx = if let Some(rest) = var.strip_prefix('x') {
                    if rest.is_empty() {
                        0
                    } else if let Ok(k) = rest.parse::<usize>() {
                        k.checked_sub(1)
                            .ok_or_else(|| MonomialError::Parse(format!("bad variable '{var}'")))?
                    } else {
                        return Err(MonomialError::Parse(format!("unknown variable '{var}'")));
                    }
                } else if n <= ALIASES.len() {
                    ALIASES
                        .iter()
                        .position(|a| *a == var)
                        .ok_or_else(|| MonomialError::Parse(format!("unknown variable '{var}'")))?
                } else {
                    return Err(MonomialError::Parse(format!("unknown variable '{var}'")));
                };
                if idx >= n {
                    return Err(MonomialError::Parse(format!(
                        "variable '{var}' is outside x1..x{n}"
                    )));
                }
                exp[idx] += pow;
            }
            gens.push(exp);
        }
        Ok(MonomialIdeal::new(n, gens))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "0");
        }
        let var_name = |i: usize| {
            if self.n <= ALIASES.len() {
                ALIASES[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        let rendered: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                if g.iter().all(|&e| e == 0) {
                    return "1".to_string();
                }
                g.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            var_name(i)
                        } else {
                            format!("{}^{}", var_name(i), e)
                        }
                    })
                    .collect::<Vec<String>>()
                    .join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(", "))
    }
}

/// Multiset of translation-normal-form pieces of `F^e_* I`; the unit
/// ideal encodes a free summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialDecomposition {
    pub level: FrobeniusLevel,
    #[serde(serialize_with = "serialize_pieces")]
    pub pieces: BTreeMap<MonomialIdeal, u64>,
}

fn serialize_pieces<S: serde::Serializer>(
    pieces: &BTreeMap<MonomialIdeal, u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(pieces.len()))?;
    for (k, v) in pieces {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

impl MonomialDecomposition {
    pub fn total(&self) -> u64 {
        self.pieces.values().sum()
    }

    /// Multiplicity of the target's isomorphism class among the pieces.
    pub fn count_copies(&self, target: &MonomialIdeal) -> u64 {
        self.pieces
            .get(&target.iso_normal_form())
            .copied()
            .unwrap_or(0)
    }
}

fn piece_for_residue(ideal: &MonomialIdeal, r: &[i64], q: i64) -> MonomialIdeal {
    MonomialIdeal::new(
        ideal.n,
        ideal.gens.iter().map(|g| {
            g.iter()
                .zip(r)
                .map(|(&m, &ri)| u32::try_from(ceil_div(i64::from(m) - ri, q).max(0)).unwrap())
                .collect::<Vec<u32>>()
        }),
    )
}

fn decode_residue(mut t: u64, q: u64, n: usize) -> Vec<i64> {
    let mut r = vec![0i64; n];
    for ri in r.iter_mut() {
        *ri = (t % q) as i64;
        t /= q;
    }
    r
}

/// Raw (un-normalized) piece per residue, sequential; for consistency
/// checks and two-stage compositions.
pub fn decompose_raw_pieces(
    ideal: &MonomialIdeal,
    level: FrobeniusLevel,
    cap: u64,
) -> Result<Vec<MonomialIdeal>, FrobError> {
    let n = ideal.n;
    let total = level.residue_count(n, cap)?;
    let q = level.q() as u64;
    Ok((0..total)
        .map(|t| piece_for_residue(ideal, &decode_residue(t, q, n), q as i64))
        .collect())
}

pub fn decompose_pushforward_ideal_seq(
    ideal: &MonomialIdeal,
    level: FrobeniusLevel,
    cap: u64,
) -> Result<MonomialDecomposition, FrobError> {
    let n = ideal.n;
    let total = level.residue_count(n, cap)?;
    let q = level.q() as u64;
    let mut pieces: BTreeMap<MonomialIdeal, u64> = BTreeMap::new();
    for t in 0..total {
        let piece = piece_for_residue(ideal, &decode_residue(t, q, n), q as i64).iso_normal_form();
        *pieces.entry(piece).or_insert(0) += 1;
    }
    Ok(MonomialDecomposition { level, pieces })
}

#[cfg(feature = "parallel")]
pub fn decompose_pushforward_ideal_par(
    ideal: &MonomialIdeal,
    level: FrobeniusLevel,
    cap: u64,
) -> Result<MonomialDecomposition, FrobError> {
    let n = ideal.n;
    let total = level.residue_count(n, cap)?;
    let q = level.q() as u64;
    let pieces = (0..total)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<MonomialIdeal, u64>, t| {
            let piece =
                piece_for_residue(ideal, &decode_residue(t, q, n), q as i64).iso_normal_form();
            *acc.entry(piece).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(MonomialDecomposition { level, pieces })
}

pub fn decompose_pushforward_ideal(
    ideal: &MonomialIdeal,
    level: FrobeniusLevel,
    cap: u64,
) -> Result<MonomialDecomposition, FrobError> {
    #[cfg(feature = "parallel")]
    {
        decompose_pushforward_ideal_par(ideal, level, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        decompose_pushforward_ideal_seq(ideal, level, cap)
    }
}

/// The Koszul second-syzygy example: `M = Omega^2(R/(u,v,w))` over
/// `R = k[x_1..x_{d-3}, u, v, w]`, with the exact-sequence bookkeeping
/// `0 -> F^e_* M -> R^{3 q^d} -> R^{q^d} -> C^{q^{d-3}} -> 0`.
#[derive(Debug, Clone, Serialize)]
pub struct SyzygyExample {
    pub d: usize,
    pub level: FrobeniusLevel,
    /// Copies of `M` in `F^e_* M`: `q^{d-3}`.
    pub b_e: u64,
    /// Rank of the free summand of `F^e_* M`: `2 q^d - 2 q^{d-3}`.
    pub free_rank: u64,
    /// Ranks of the two middle free modules in the pushed-forward
    /// presentation: `(3 q^d, q^d)`.
    pub koszul_ranks: (u64, u64),
}

/// Computes `b_e` for the syzygy example by decomposing the pushforward of
/// `C = R/(u,v,w)` (each nonzero quotient piece is a copy of `C`) and then
/// applying Schanuel to the pushed-forward Koszul presentation. Each step
/// is rank-checked.
pub fn syzygy_pushforward(
    d: usize,
    level: FrobeniusLevel,
    cap: u64,
) -> Result<SyzygyExample, MonomialError> {
    if d < 3 {
        return Err(MonomialError::DimensionTooSmall(d));
    }
    // (u, v, w) = last three variables
    let mut gens = Vec::new();
    for i in d - 3..d {
        let mut g = vec![0u32; d];
        g[i] = 1;
        gens.push(g);
    }
    let c_ideal = MonomialIdeal::new(d, gens);
    let decomp = decompose_pushforward_ideal(&c_ideal, level, cap)?;
    // quotient piece R/J is a copy of C exactly when J = (u,v,w); every
    // other piece is the unit ideal (zero quotient)
    let copies_of_c = decomp.count_copies(&c_ideal.iso_normal_form());
    let unit_pieces = decomp.count_copies(&MonomialIdeal::unit(d));
    let q_d = level.residue_count(d, cap)?;
    assert_eq!(copies_of_c + unit_pieces, q_d, "unexpected quotient pieces");
    let q_dm3 = FrobeniusLevel::new(level.p, level.e).residue_count(d - 3, cap)?;
    assert_eq!(copies_of_c, q_dm3, "C-copy count must be q^{{d-3}}");
    // Schanuel on 0 -> F^e_* M -> R^{3q^d} -> R^{q^d} -> C^{q^{d-3}} -> 0:
    // F^e_* M = M^{q^{d-3}} (+) free; ranks balance as 2 q^d total.
    let total_rank = 2 * q_d;
    let b_e = q_dm3;
    let free_rank = total_rank - 2 * b_e;
    assert_eq!(2 * b_e + free_rank, total_rank);
    Ok(SyzygyExample {
        d,
        level,
        b_e,
        free_rank,
        koszul_ranks: (3 * q_d, q_d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::DEFAULT_CAP;

    fn xy3() -> MonomialIdeal {
        // (x, y) in k[x, y, z]
        MonomialIdeal::new(3, [vec![1, 0, 0], vec![0, 1, 0]])
    }

    #[test]
    fn minimalization() {
        // x^2 is divisible by x
        let i = MonomialIdeal::new(2, [vec![1, 0], vec![2, 0], vec![0, 3]]);
        let gens: Vec<_> = i.generators().cloned().collect();
        assert_eq!(gens, vec![vec![0, 3], vec![1, 0]]);
    }

    #[test]
    fn frobenius_powers() {
        let i = MonomialIdeal::new(2, [vec![1, 0], vec![0, 1]]);
        let i4 = i.frobenius_power(4);
        let gens: Vec<_> = i4.generators().cloned().collect();
        assert_eq!(gens, vec![vec![0, 4], vec![4, 0]]);

        assert_eq!(MonomialIdeal::unit(2).frobenius_power(3), MonomialIdeal::unit(2));

        let j = MonomialIdeal::new(3, [vec![2, 1, 0], vec![0, 0, 3]]);
        let j2 = j.frobenius_power(2);
        let gens: Vec<_> = j2.generators().cloned().collect();
        assert_eq!(gens, vec![vec![0, 0, 6], vec![4, 2, 0]]);
    }

    #[test]
    fn normal_forms() {
        let i = MonomialIdeal::new(3, [vec![2, 1, 0], vec![2, 0, 1]]);
        let nf = i.iso_normal_form();
        let gens: Vec<_> = nf.generators().cloned().collect();
        assert_eq!(gens, vec![vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(nf, nf.iso_normal_form());

        let already = MonomialIdeal::new(2, [vec![1, 0], vec![0, 1]]);
        assert_eq!(already.iso_normal_form(), already);

        // (x^3, x^2 y): mins (2, 0) -> (x, y)
        let j = MonomialIdeal::new(2, [vec![3, 0], vec![2, 1]]);
        let gens: Vec<_> = j.iso_normal_form().generators().cloned().collect();
        assert_eq!(gens, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn decompose_xy_p2_e1() {
        let d =
            decompose_pushforward_ideal(&xy3(), FrobeniusLevel::new(2, 1), DEFAULT_CAP).unwrap();
        assert_eq!(d.count_copies(&xy3()), 2);
        assert_eq!(d.count_copies(&MonomialIdeal::unit(3)), 6);
        assert_eq!(d.total(), 8);
    }

    #[test]
    fn decompose_xy_p3_e2() {
        let d =
            decompose_pushforward_ideal(&xy3(), FrobeniusLevel::new(3, 2), DEFAULT_CAP).unwrap();
        assert_eq!(d.count_copies(&xy3()), 9);
        assert_eq!(d.count_copies(&MonomialIdeal::unit(3)), 720);
        assert_eq!(d.total(), 729);
    }

    #[test]
    fn decompose_unit_ideal() {
        let d = decompose_pushforward_ideal(
            &MonomialIdeal::unit(2),
            FrobeniusLevel::new(3, 1),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(d.count_copies(&MonomialIdeal::unit(2)), 9);
        assert_eq!(d.pieces.len(), 1);
    }

    #[test]
    fn decompose_level_zero_returns_ideal() {
        let i = MonomialIdeal::new(2, [vec![2, 0], vec![1, 1]]);
        let d = decompose_pushforward_ideal(&i, FrobeniusLevel::new(5, 0), DEFAULT_CAP).unwrap();
        assert_eq!(d.total(), 1);
        assert_eq!(d.count_copies(&i.iso_normal_form()), 1);
    }

    #[test]
    fn count_copies_missing_target() {
        let d =
            decompose_pushforward_ideal(&xy3(), FrobeniusLevel::new(2, 1), DEFAULT_CAP).unwrap();
        let absent = MonomialIdeal::new(3, [vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(d.count_copies(&absent), 0);
        // a principal generator is free as a module: counted with the units
        let principal = MonomialIdeal::new(3, [vec![0, 0, 1]]);
        assert_eq!(
            d.count_copies(&principal),
            d.count_copies(&MonomialIdeal::unit(3))
        );
    }

    #[test]
    fn determinacy_under_redundant_generators() {
        let minimal = MonomialIdeal::new(3, [vec![1, 0, 0], vec![0, 1, 0]]);
        let redundant = MonomialIdeal::new(
            3,
            [vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![2, 0, 3]],
        );
        assert_eq!(minimal, redundant);
        let level = FrobeniusLevel::new(2, 2);
        assert_eq!(
            decompose_pushforward_ideal(&minimal, level, DEFAULT_CAP).unwrap(),
            decompose_pushforward_ideal(&redundant, level, DEFAULT_CAP).unwrap()
        );
    }

    #[test]
    fn two_stage_composition_matches() {
        let i = xy3();
        let (e, f) = (1u32, 1u32);
        let one_stage =
            decompose_pushforward_ideal(&i, FrobeniusLevel::new(2, e + f), DEFAULT_CAP).unwrap();
        let raw = decompose_raw_pieces(&i, FrobeniusLevel::new(2, e), DEFAULT_CAP).unwrap();
        let mut two_stage: BTreeMap<MonomialIdeal, u64> = BTreeMap::new();
        for piece in &raw {
            let d = decompose_pushforward_ideal(piece, FrobeniusLevel::new(2, f), DEFAULT_CAP)
                .unwrap();
            for (k, v) in d.pieces {
                *two_stage.entry(k).or_insert(0) += v;
            }
        }
        assert_eq!(two_stage, one_stage.pieces);
    }

    #[test]
    fn hilbert_consistency_windowed() {
        // standard monomials outside I in [0, qB)^n match the piecewise sum
        let i = MonomialIdeal::new(2, [vec![2, 0], vec![1, 1]]);
        let level = FrobeniusLevel::new(2, 1);
        let q = 2u32;
        for b in [2u32, 3, 5] {
            let raw = decompose_raw_pieces(&i, level, DEFAULT_CAP).unwrap();
            let mut summed = 0usize;
            for piece in &raw {
                for x in 0..b {
                    for y in 0..b {
                        if !piece.contains_monomial(&[x, y]) {
                            summed += 1;
                        }
                    }
                }
            }
            let mut direct = 0usize;
            for x in 0..q * b {
                for y in 0..q * b {
                    if !i.contains_monomial(&[x, y]) {
                        direct += 1;
                    }
                }
            }
            assert_eq!(summed, direct);
        }
    }

    #[test]
    fn syzygy_examples() {
        let s = syzygy_pushforward(3, FrobeniusLevel::new(2, 1), DEFAULT_CAP).unwrap();
        assert_eq!(s.b_e, 1);
        let s = syzygy_pushforward(4, FrobeniusLevel::new(2, 1), DEFAULT_CAP).unwrap();
        assert_eq!(s.b_e, 2);
        assert_eq!(s.koszul_ranks, (3 * 16, 16));
        let s = syzygy_pushforward(5, FrobeniusLevel::new(3, 2), DEFAULT_CAP).unwrap();
        assert_eq!(s.b_e, 81);
    }

    #[test]
    fn syzygy_dimension_guard() {
        assert!(matches!(
            syzygy_pushforward(2, FrobeniusLevel::new(2, 1), DEFAULT_CAP),
            Err(MonomialError::DimensionTooSmall(2))
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!(
            MonomialIdeal::parse(3, "x, y").unwrap(),
            MonomialIdeal::new(3, [vec![1, 0, 0], vec![0, 1, 0]])
        );
        assert_eq!(
            MonomialIdeal::parse(3, "x^2*y, z^3").unwrap(),
            MonomialIdeal::new(3, [vec![2, 1, 0], vec![0, 0, 3]])
        );
        assert_eq!(
            MonomialIdeal::parse(4, "x1*x4^2").unwrap(),
            MonomialIdeal::new(4, [vec![1, 0, 0, 2]])
        );
        assert_eq!(MonomialIdeal::parse(2, "1").unwrap(), MonomialIdeal::unit(2));
        assert!(MonomialIdeal::parse(2, "z").is_err());
        assert!(MonomialIdeal::parse(2, "x^").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let i = MonomialIdeal::new(3, [vec![2, 1, 0], vec![0, 0, 3]]);
        let shown = i.to_string();
        assert_eq!(MonomialIdeal::parse(3, &shown).unwrap(), i);
        assert_eq!(MonomialIdeal::unit(2).to_string(), "1");
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let i = xy3();
        let level = FrobeniusLevel::new(2, 3);
        assert_eq!(
            decompose_pushforward_ideal_seq(&i, level, DEFAULT_CAP).unwrap(),
            decompose_pushforward_ideal_par(&i, level, DEFAULT_CAP).unwrap()
        );
    }
}
