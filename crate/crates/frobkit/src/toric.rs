//! The normal semigroup ring `R = k[C /\ Z^n]` over `F_p`, its divisor
//! class group, and the arithmetic of rank-1 reflexive (divisorial) module
//! classes.
//!
//! A coefficient vector `a` of length `r` presents the divisorial module
//! `M_a = {u in Z^n : <u, v_i> >= a_i}`. Its isomorphism class is the image
//! of `a` in `Cl(R) = Z^r / image(div)`, where `div: Z^n -> Z^r` sends
//! `u` to `(<u, v_i>)_i`. Classes are stored in Smith-normal-form
//! coordinates, so equality of classes is plain equality of coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::cone::{Cone, ConeError, Window};
use crate::lattice::{self, CokernelInvariants, IntMatrix, SmithForm};
use crate::ratlin;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclic quotient 1/{d}({weights:?}) has a pseudo-reflection: gcd condition fails at coordinate {coord}")]
    PseudoReflection {
        d: u64,
        weights: Vec<u64>,
        coord: usize,
    },
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoeffLength { expected: usize, got: usize },
}

/// Element of `Cl(R)` in canonical SNF coordinates: a free part over the
/// infinite cyclic factors and reduced residues over the torsion factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivClass {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

impl DivClass {
    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }
}

impl std::fmt::Display for DivClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "free={:?} torsion={:?}", self.free, self.torsion)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone)]
pub struct ToricRing {
    cone: Cone,
    p: u64,
    /// `log_p [k : k^p]`; zero because coefficients are `F_p` (perfect).
    alpha: u32,
    smith: SmithForm,
    cl: CokernelInvariants,
    // fast class arithmetic in i64, derived from the Smith form
    u_rows: Vec<Vec<i64>>,
    u_inv_rows: Vec<Vec<i64>>,
    diag: Vec<i64>,
    rank: usize,
    caveats: Vec<String>,
}

impl ToricRing {
    pub fn new(cone: Cone, p: u64) -> Result<ToricRing, ToricError> {
        if !is_prime(p) {
            return Err(ToricError::NotPrime(p));
        }
        let div = IntMatrix::from_rows_i64(cone.normals());
        let smith = lattice::smith_normal_form(&div);
        let cl = lattice::cokernel_invariants(&div);
        let u_rows = smith.u.to_i64_rows();
        let u_inv_rows = invert_unimodular(&smith.u);
        let r = cone.num_facets();
        let diag: Vec<i64> = (0..r)
            .map(|i| {
                if i < smith.d.rows().min(smith.d.cols()) {
                    i64::try_from(smith.d.get(i, i)).expect("diagonal out of i64 range")
                } else {
                    0
                }
            })
            .collect();
        let mut caveats = Vec::new();
        if cone.had_non_primitive_rows() {
            caveats.push("non-primitive facet normals were rescaled".to_string());
        }
        Ok(ToricRing {
            rank: smith.rank,
            cone,
            p,
            alpha: 0,
            smith,
            cl,
            u_rows,
            u_inv_rows,
            diag,
            caveats,
        })
    }

    pub fn polynomial_ring(n: usize, p: u64) -> Result<ToricRing, ToricError> {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        ToricRing::new(Cone::from_rows(&rows)?, p)
    }

    /// Invariant ring of the cyclic action `1/d(w_1, ..., w_n)` presented
    /// as a semigroup ring on the sublattice `{u : sum w_i u_i = 0 mod d}`.
    pub fn cyclic_quotient(
        n: usize,
        d: u64,
        weights: &[u64],
        p: u64,
    ) -> Result<ToricRing, ToricError> {
        assert_eq!(weights.len(), n);
        assert!(n >= 1 && d >= 1);
        if !is_prime(p) {
            return Err(ToricError::NotPrime(p));
        }
        // no pseudo-reflections: gcd(d, w_j for j != i) = 1 for each i
        for i in 0..n {
            let g = weights
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(d, |acc, (_, &w)| acc.gcd(&w));
            if g != 1 {
                return Err(ToricError::PseudoReflection {
                    d,
                    weights: weights.to_vec(),
                    coord: i,
                });
            }
        }
        // basis of the invariant lattice M = ker(Z^n -> Z/d), via the
        // integer kernel of the 1 x (n+1) matrix [w_1 ... w_n d]
        let mut row: Vec<i64> = weights.iter().map(|&w| w as i64).collect();
        row.push(d as i64);
        let a = IntMatrix::from_rows_i64(&[row]);
        let snf = lattice::smith_normal_form(&a);
        debug_assert_eq!(snf.rank, 1);
        // kernel basis = columns of V past the rank, projected to Z^n
        let mut basis_cols: Vec<Vec<i64>> = Vec::new();
        for j in 1..=n {
            let col: Vec<i64> = (0..n)
                .map(|i| i64::try_from(snf.v.get(i, j)).expect("basis entry out of range"))
                .collect();
            basis_cols.push(col);
        }
        // the cone is the orthant in these coordinates: (B s)_i >= 0
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| basis_cols.iter().map(|c| c[i]).collect())
            .collect();
        let cone = Cone::from_rows(&rows)?;
        debug_assert!(!cone.had_non_primitive_rows());
        let mut ring = ToricRing::new(cone, p)?;
        // Cl must come out as Z/d
        let expected = CokernelInvariants {
            free_rank: 0,
            torsion: if d > 1 { vec![d] } else { vec![] },
        };
        assert_eq!(ring.cl, expected, "cyclic quotient class group mismatch");
        if d > 1 && p % d == 0 {
            ring.caveats.push(format!(
                "characteristic {p} divides the group order {d}; invariant-theory \
                 statements assuming coprime order do not apply"
            ));
        }
        Ok(ring)
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.cone.ambient_rank()
    }

    pub fn num_facets(&self) -> usize {
        self.cone.num_facets()
    }

    pub fn caveats(&self) -> &[String] {
        &self.caveats
    }

    pub fn class_group(&self) -> &CokernelInvariants {
        &self.cl
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    /// `div(u) = (<u, v_i>)_i`, the principal divisor of the character `u`.
    pub fn div_of(&self, u: &[i64]) -> Vec<i64> {
        self.cone.facet_values(u)
    }

    pub fn trivial_class(&self) -> DivClass {
        DivClass {
            free: vec![0; self.cl.free_rank],
            torsion: vec![0; self.cl.torsion.len()],
        }
    }

    /// SNF-coordinate class of a coefficient vector. Two vectors map to the
    /// same class iff their difference is a principal divisor.
    pub fn class_of(&self, a: &[i64]) -> DivClass {
        assert_eq!(a.len(), self.num_facets(), "coefficient vector length");
        let r = self.num_facets();
        let mut free = Vec::with_capacity(self.cl.free_rank);
        let mut torsion = Vec::with_capacity(self.cl.torsion.len());
        for i in 0..r {
            let y: i128 = (0..r)
                .map(|j| i128::from(self.u_rows[i][j]) * i128::from(a[j]))
                .sum();
            if i < self.rank {
                let d = i128::from(self.diag[i]);
                if d > 1 {
                    torsion.push(u64::try_from(y.rem_euclid(d)).unwrap());
                }
            } else {
                free.push(i64::try_from(y).expect("class coordinate out of i64 range"));
            }
        }
        DivClass { free, torsion }
    }

    pub fn class_of_checked(&self, a: &[i64]) -> Result<DivClass, ToricError> {
        if a.len() != self.num_facets() {
            return Err(ToricError::CoeffLength {
                expected: self.num_facets(),
                got: a.len(),
            });
        }
        Ok(self.class_of(a))
    }

    /// A coefficient vector representing the given class
    /// (`class_of(representative(c)) == c`).
    pub fn representative(&self, c: &DivClass) -> Vec<i64> {
        assert_eq!(c.free.len(), self.cl.free_rank);
        assert_eq!(c.torsion.len(), self.cl.torsion.len());
        let r = self.num_facets();
        let mut y = vec![0i64; r];
        let mut t_it = c.torsion.iter();
        let mut f_it = c.free.iter();
        for (i, yi) in y.iter_mut().enumerate() {
            if i < self.rank {
                if self.diag[i] > 1 {
                    *yi = *t_it.next().unwrap() as i64;
                }
            } else {
                *yi = *f_it.next().unwrap();
            }
        }
        (0..r)
            .map(|i| (0..r).map(|j| self.u_inv_rows[i][j] * y[j]).sum())
            .collect()
    }

    pub fn add_class(&self, a: &DivClass, b: &DivClass) -> DivClass {
        DivClass {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.cl.torsion)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg_class(&self, a: &DivClass) -> DivClass {
        DivClass {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.cl.torsion)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        }
    }

    /// Scalar multiple `k * a` in `Cl(R)`.
    pub fn scale_class(&self, a: &DivClass, k: i64) -> DivClass {
        DivClass {
            free: a
                .free
                .iter()
                .map(|x| x.checked_mul(k).expect("class coordinate overflow"))
                .collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.cl.torsion)
                .map(|(x, d)| {
                    let prod = i128::from(*x) * i128::from(k);
                    u64::try_from(prod.rem_euclid(i128::from(*d))).unwrap()
                })
                .collect(),
        }
    }

    /// Class of `Hom(M_a, M_b)`, i.e. `b - a`.
    pub fn hom_class(&self, a: &DivClass, b: &DivClass) -> DivClass {
        self.add_class(&self.neg_class(a), b)
    }

    /// Class of the dual `Hom(M_a, R)`, i.e. `-a`.
    pub fn dual_class(&self, a: &DivClass) -> DivClass {
        self.neg_class(a)
    }

    /// Class of the reflexive tensor `(M_a (x) M_b)^{**}`, i.e. `a + b`.
    pub fn tensor_class(&self, a: &DivClass, b: &DivClass) -> DivClass {
        self.add_class(a, b)
    }

    /// Class of the canonical module: the interior-point module with
    /// coefficient vector `(1, ..., 1)`.
    pub fn canonical_class(&self) -> DivClass {
        self.class_of(&vec![1; self.num_facets()])
    }

    pub fn is_gorenstein(&self) -> bool {
        self.canonical_class().is_trivial()
    }

    /// Exact order of the class in `Cl(R)`, `None` meaning infinite.
    pub fn order_of(&self, c: &DivClass) -> Option<u64> {
        if c.free.iter().any(|&x| x != 0) {
            return None;
        }
        let mut order = 1u64;
        for (x, d) in c.torsion.iter().zip(&self.cl.torsion) {
            let o = d / d.gcd(x);
            order = order.lcm(&o);
        }
        Some(order)
    }

    /// Degrees of `M_a` inside the window: the Hilbert-function oracle.
    pub fn module_degrees(&self, a: &[i64], window: &Window) -> Result<Vec<Vec<i64>>, ToricError> {
        Ok(self.cone.lattice_points_shifted(a, window)?)
    }
}

/// Exact integer inverse of a unimodular matrix.
fn invert_unimodular(u: &IntMatrix) -> Vec<Vec<i64>> {
    let r = u.rows();
    assert_eq!(r, u.cols());
    let columns: Vec<Vec<BigRational>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|i| BigRational::from(u.get(i, j).clone()))
                .collect()
        })
        .collect();
    let mut inv_cols = Vec::with_capacity(r);
    for i in 0..r {
        let mut e = vec![BigRational::from(BigInt::from(0)); r];
        e[i] = BigRational::from(BigInt::from(1));
        let x = ratlin::coords_in_basis(&columns, &e).expect("unimodular matrix is invertible");
        inv_cols.push(x);
    }
    // inv_cols[i] is the i-th column of U^{-1}
    (0..r)
        .map(|row| {
            (0..r)
                .map(|col| {
                    let v = &inv_cols[col][row];
                    assert!(v.denom().abs() == BigInt::from(1), "inverse not integral");
                    i64::try_from(v.numer()).expect("inverse entry out of i64 range")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn a1_ring(p: u64) -> ToricRing {
        ToricRing::new(
            Cone::from_rows(&[vec![0, 1], vec![2, -1]]).unwrap(),
            p,
        )
        .unwrap()
    }

    pub(crate) fn quadric_ring(p: u64) -> ToricRing {
        ToricRing::new(
            Cone::from_rows(&[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![-1, 0, 1],
                vec![0, -1, 1],
            ])
            .unwrap(),
            p,
        )
        .unwrap()
    }

    #[test]
    fn class_groups() {
        assert_eq!(
            a1_ring(3).class_group(),
            &CokernelInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
        assert_eq!(
            quadric_ring(2).class_group(),
            &CokernelInvariants {
                free_rank: 1,
                torsion: vec![]
            }
        );
        assert_eq!(
            ToricRing::polynomial_ring(3, 2).unwrap().class_group(),
            &CokernelInvariants {
                free_rank: 0,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn class_of_basics() {
        let r = a1_ring(3);
        assert!(r.class_of(&[0, 0]).is_trivial());
        // (x, z) has the nontrivial class of Z/2
        let xz = r.class_of(&[0, 1]);
        assert!(!xz.is_trivial());
        assert_eq!(r.order_of(&xz), Some(2));
        // principal divisors are trivial
        let div = r.div_of(&[1, 1]);
        assert!(r.class_of(&div).is_trivial());
    }

    #[test]
    fn representative_roundtrip() {
        for ring in [a1_ring(3), quadric_ring(2)] {
            for a in [
                vec![0; ring.num_facets()],
                {
                    let mut v = vec![0; ring.num_facets()];
                    v[0] = 1;
                    v
                },
                {
                    let mut v = vec![0; ring.num_facets()];
                    v[ring.num_facets() - 1] = -3;
                    v
                },
            ] {
                let c = ring.class_of(&a);
                let rep = ring.representative(&c);
                assert_eq!(ring.class_of(&rep), c);
            }
        }
    }

    #[test]
    fn hom_dual_tensor_laws() {
        let r = a1_ring(3);
        let t = r.trivial_class();
        let nt = r.class_of(&[0, 1]);
        assert_eq!(r.hom_class(&nt, &nt), t);
        assert_eq!(r.hom_class(&t, &nt), nt);
        // order 2: self-dual
        assert_eq!(r.dual_class(&nt), nt);
        assert_eq!(r.tensor_class(&nt, &r.dual_class(&nt)), t);
        assert_eq!(
            r.hom_class(&nt, &t),
            r.tensor_class(&r.dual_class(&nt), &t)
        );

        let q = quadric_ring(2);
        let one = q.class_of(&[1, 0, 0, 0]);
        let two = q.tensor_class(&one, &one);
        assert_eq!(two, q.scale_class(&one, 2));
        assert_eq!(q.order_of(&one), None);
    }

    #[test]
    fn canonical_classes() {
        assert!(ToricRing::polynomial_ring(2, 5).unwrap().is_gorenstein());
        // A1: (1,1) = div((1,1)), so Gorenstein
        assert!(a1_ring(3).is_gorenstein());
        // quadric: phi = (1,-1,1,-1) kills (1,1,1,1)
        assert!(quadric_ring(2).is_gorenstein());
    }

    #[test]
    fn cyclic_quotients() {
        let v2 = ToricRing::cyclic_quotient(2, 2, &[1, 1], 3).unwrap();
        assert_eq!(
            v2.class_group(),
            &CokernelInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
        let c3 = ToricRing::cyclic_quotient(3, 3, &[1, 1, 1], 2).unwrap();
        assert_eq!(
            c3.class_group(),
            &CokernelInvariants {
                free_rank: 0,
                torsion: vec![3]
            }
        );
        let triv = ToricRing::cyclic_quotient(2, 1, &[0, 0], 5).unwrap();
        assert_eq!(
            triv.class_group(),
            &CokernelInvariants {
                free_rank: 0,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn cyclic_quotient_pseudo_reflection_rejected() {
        // 1/2(0, 1): gcd(d, w_2) = 2 at coordinate 1... gcd(2, {w_j, j != 0})
        assert!(matches!(
            ToricRing::cyclic_quotient(2, 2, &[1, 2], 5),
            Err(ToricError::PseudoReflection { .. })
        ));
    }

    #[test]
    fn cyclic_quotient_warns_when_p_divides_order() {
        let r = ToricRing::cyclic_quotient(2, 2, &[1, 1], 2).unwrap();
        assert!(!r.caveats().is_empty());
    }

    #[test]
    fn linear_equivalence_invariance() {
        let r = a1_ring(3);
        for a in [[0, 0], [0, 1], [2, -1], [-3, 4]] {
            for u in [[1, 0], [0, 1], [-2, 3]] {
                let div = r.div_of(&u);
                let shifted: Vec<i64> = a.iter().zip(&div).map(|(x, y)| x + y).collect();
                assert_eq!(r.class_of(&a), r.class_of(&shifted));
            }
        }
    }

    #[test]
    fn not_prime_rejected() {
        assert!(matches!(
            ToricRing::polynomial_ring(2, 6),
            Err(ToricError::NotPrime(6))
        ));
    }
}
