//! Rational polyhedral cone geometry: facet-normal validation, face-lattice
//! enumeration with signed incidence numbers, Hilbert-basis and windowed
//! lattice-point utilities.
//!
//! A cone is presented by primitive inner facet normals `v_1..v_r`:
//! `C = {u in Q^n : <u, v_i> >= 0 for all i}`, pointed and full-dimensional.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::IntMatrix;
use crate::ratlin::{self, RatVec};
use crate::simplex;

pub const FACE_ENUM_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("facet-normal matrix must have at least one row and one column")]
    EmptyInput,
    #[error("cone is not pointed: normals have rank {rank} < ambient rank {n}")]
    NotPointed { rank: usize, n: usize },
    #[error("cone is not full-dimensional: no strict interior point exists")]
    NotFullDimensional,
    #[error("facet normal {row} is redundant (implied by the other rows)")]
    RedundantFacet { row: usize },
    #[error("face enumeration cap exceeded: {facets} facets > {cap}")]
    CapExceeded { facets: usize, cap: usize },
    #[error("height bound {bound} too small: windowed point {point:?} is not generated")]
    BoundTooSmall { bound: i64, point: Vec<i64> },
    #[error("shift vector has length {got}, expected one entry per facet ({expected})")]
    ShiftLength { expected: usize, got: usize },
}

/// Inclusive coordinate box in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Window { lo, hi }
    }

    /// `[-b, b]^n`
    pub fn symmetric(n: usize, b: i64) -> Self {
        Window {
            lo: vec![-b; n],
            hi: vec![b; n],
        }
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        let n = self.lo.len();
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut k = n;
            while k > 0 {
                k -= 1;
                if cur[k] < self.hi[k] {
                    cur[k] += 1;
                    for j in k + 1..n {
                        cur[j] = self.lo[j];
                    }
                    break;
                }
                if k == 0 {
                    return out;
                }
            }
            if n == 0 {
                return out;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    n: usize,
    normals: Vec<Vec<i64>>,
    /// Rows of the input that had to be scaled down to primitive vectors.
    normalized_rows: Vec<usize>,
    /// Integer point with `V u > 0` strictly.
    interior: Vec<i64>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_rat(v: &[i64]) -> RatVec {
    v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()
}

impl Cone {
    pub fn validate(v: &IntMatrix) -> Result<Cone, ConeError> {
        if v.rows() == 0 || v.cols() == 0 {
            return Err(ConeError::EmptyInput);
        }
        let n = v.cols();
        let raw = v.to_i64_rows();
        let mut normals = Vec::with_capacity(raw.len());
        let mut normalized_rows = Vec::new();
        for (i, row) in raw.iter().enumerate() {
            let g = row.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g == 0 {
                // a zero normal is implied by anything
                return Err(ConeError::RedundantFacet { row: i });
            }
            if g != 1 {
                normalized_rows.push(i);
            }
            normals.push(row.iter().map(|&x| x / g).collect::<Vec<i64>>());
        }
        // duplicate primitive rows are mutually redundant
        for i in 0..normals.len() {
            for j in 0..i {
                if normals[i] == normals[j] {
                    return Err(ConeError::RedundantFacet { row: i });
                }
            }
        }
        let rat_rows: Vec<RatVec> = normals.iter().map(|r| to_rat(r)).collect();
        let rank = ratlin::rank(&rat_rows);
        if rank < n {
            return Err(ConeError::NotPointed { rank, n });
        }
        // strict interior point: V u >= 1 is feasible iff V u > 0 is
        let one = BigRational::one();
        let strict: Vec<(RatVec, BigRational)> =
            rat_rows.iter().map(|r| (r.clone(), one.clone())).collect();
        let Some(u) = simplex::feasible(&strict) else {
            return Err(ConeError::NotFullDimensional);
        };
        let interior = scale_to_integer(&u);
        debug_assert!(normals.iter().all(|v| dot(v, &interior) > 0));
        // irredundancy: row i is needed iff it can be violated while the
        // other inequalities hold
        for i in 0..normals.len() {
            let mut cs: Vec<(RatVec, BigRational)> = Vec::new();
            for (j, r) in rat_rows.iter().enumerate() {
                if j != i {
                    cs.push((r.clone(), BigRational::zero()));
                }
            }
            cs.push((rat_rows[i].iter().map(|x| -x).collect(), one.clone()));
            if simplex::feasible(&cs).is_none() {
                return Err(ConeError::RedundantFacet { row: i });
            }
        }
        Ok(Cone {
            n,
            normals,
            normalized_rows,
            interior,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Cone, ConeError> {
        Cone::validate(&IntMatrix::from_rows_i64(rows))
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    /// True if any input row was scaled down to a primitive vector.
    pub fn had_non_primitive_rows(&self) -> bool {
        !self.normalized_rows.is_empty()
    }

    pub fn interior_point(&self) -> &[i64] {
        &self.interior
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.normals.iter().all(|v| dot(v, u) >= 0)
    }

    pub fn facet_values(&self, u: &[i64]) -> Vec<i64> {
        self.normals.iter().map(|v| dot(v, u)).collect()
    }

    /// All `u` in `window` with `<u, v_i> >= a_i` for every facet.
    pub fn lattice_points_shifted(
        &self,
        a: &[i64],
        window: &Window,
    ) -> Result<Vec<Vec<i64>>, ConeError> {
        if a.len() != self.normals.len() {
            return Err(ConeError::ShiftLength {
                expected: self.normals.len(),
                got: a.len(),
            });
        }
        Ok(window
            .points()
            .into_iter()
            .filter(|u| {
                self.normals
                    .iter()
                    .zip(a)
                    .all(|(v, &ai)| dot(v, u) >= ai)
            })
            .collect())
    }

    /// Minimal generating set of `C /\ Z^n` among lattice points with
    /// coordinates in `[-height_bound, height_bound]`. Completeness over the
    /// window is verified; if it fails the bound must be raised.
    pub fn hilbert_basis(&self, height_bound: i64) -> Result<Vec<Vec<i64>>, ConeError> {
        assert!(height_bound >= 1);
        let window = Window::symmetric(self.n, height_bound);
        let mut points: Vec<Vec<i64>> = window
            .points()
            .into_iter()
            .filter(|u| u.iter().any(|&x| x != 0) && self.contains(u))
            .collect();
        // total height <u, v_1 + ... + v_r> is a positive grading on C \ {0}
        let height = |u: &[i64]| -> i64 { self.normals.iter().map(|v| dot(v, u)).sum() };
        points.sort_by(|a, b| height(a).cmp(&height(b)).then(a.cmp(b)));
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for u in &points {
            let reducible = gens.iter().any(|g| {
                let diff: Vec<i64> = u.iter().zip(g).map(|(x, y)| x - y).collect();
                diff.iter().any(|&x| x != 0) && self.contains(&diff)
            });
            if !reducible {
                gens.push(u.clone());
            }
        }
        // completeness: every windowed point must reduce to zero
        let mut memo: HashMap<Vec<i64>, bool> = HashMap::new();
        for u in &points {
            if !self.reduces_to_zero(u, &gens, &mut memo) {
                return Err(ConeError::BoundTooSmall {
                    bound: height_bound,
                    point: u.clone(),
                });
            }
        }
        Ok(gens)
    }

    fn reduces_to_zero(
        &self,
        u: &[i64],
        gens: &[Vec<i64>],
        memo: &mut HashMap<Vec<i64>, bool>,
    ) -> bool {
        if u.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&r) = memo.get(u) {
            return r;
        }
        let mut ok = false;
        for g in gens {
            let diff: Vec<i64> = u.iter().zip(g).map(|(x, y)| x - y).collect();
            if self.contains(&diff) && self.reduces_to_zero(&diff, gens, memo) {
                ok = true;
                break;
            }
        }
        memo.insert(u.to_vec(), ok);
        ok
    }

    pub fn enumerate_faces(&self) -> Result<FaceLattice, ConeError> {
        let r = self.normals.len();
        if r > FACE_ENUM_CAP {
            return Err(ConeError::CapExceeded {
                facets: r,
                cap: FACE_ENUM_CAP,
            });
        }
        let rat_rows: Vec<RatVec> = self.normals.iter().map(|v| to_rat(v)).collect();
        // subsets with the same linear span define the same face; compute
        // each closure once per distinct span
        let mut span_seen: BTreeMap<Vec<RatVec>, ()> = BTreeMap::new();
        let mut faces: BTreeMap<BTreeSet<usize>, Face> = BTreeMap::new();
        for mask in 0u32..(1u32 << r) {
            let selected: Vec<RatVec> = (0..r)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| rat_rows[i].clone())
                .collect();
            let mut span = selected.clone();
            ratlin::rref(&mut span);
            if span_seen.insert(span, ()).is_some() {
                continue;
            }
            let face = self.face_from_selection(&rat_rows, &selected);
            faces.entry(face.facets.clone()).or_insert(face);
        }
        let mut faces: Vec<Face> = faces.into_values().collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.facets.cmp(&b.facets)));

        // signed incidence between faces of consecutive dimensions
        let mut incidence = BTreeMap::new();
        for (lo, f) in faces.iter().enumerate() {
            for (hi, g) in faces.iter().enumerate() {
                if g.dim != f.dim + 1 || !f.facets.is_superset(&g.facets) {
                    continue;
                }
                let mut cols: Vec<RatVec> = f
                    .span_basis
                    .iter()
                    .map(|b| {
                        ratlin::coords_in_basis(&g.span_basis, b)
                            .expect("face span must embed in cofacet span")
                    })
                    .collect();
                cols.push(
                    ratlin::coords_in_basis(&g.span_basis, &g.rel_interior)
                        .expect("relative interior point lies in the span"),
                );
                let s = ratlin::det_sign(&cols);
                debug_assert!(s != 0);
                incidence.insert((lo, hi), s);
            }
        }
        Ok(FaceLattice {
            n: self.n,
            faces,
            incidence,
        })
    }

    fn face_from_selection(&self, rat_rows: &[RatVec], selected: &[RatVec]) -> Face {
        let r = rat_rows.len();
        let span_kernel = ratlin::kernel_basis(selected, self.n);
        // restrict each normal to the kernel coordinates
        let restrict = |basis: &[RatVec], v: &RatVec| -> RatVec {
            basis
                .iter()
                .map(|b| b.iter().zip(v).map(|(bi, vi)| bi * vi).sum())
                .collect()
        };
        let one = BigRational::one();
        let zero = BigRational::zero();
        let mut closure = BTreeSet::new();
        for j in 0..r {
            let w_j = restrict(&span_kernel, &rat_rows[j]);
            if w_j.iter().all(|x| x.is_zero()) {
                closure.insert(j);
                continue;
            }
            // j vanishes on the face iff it cannot be strictly positive there
            let mut cs: Vec<(RatVec, BigRational)> = rat_rows
                .iter()
                .map(|v| (restrict(&span_kernel, v), zero.clone()))
                .collect();
            cs.push((w_j, one.clone()));
            if simplex::feasible(&cs).is_none() {
                closure.insert(j);
            }
        }
        let closed_rows: Vec<RatVec> = closure.iter().map(|&j| rat_rows[j].clone()).collect();
        let span_basis = ratlin::kernel_basis(&closed_rows, self.n);
        let dim = span_basis.len();
        // relative interior: strictly positive on every non-closure facet
        let cs: Vec<(RatVec, BigRational)> = (0..r)
            .filter(|j| !closure.contains(j))
            .map(|j| (restrict(&span_basis, &rat_rows[j]), one.clone()))
            .collect();
        let x = simplex::feasible(&cs).expect("face has a relative interior point");
        let rel_interior: RatVec = (0..self.n)
            .map(|i| {
                span_basis
                    .iter()
                    .zip(&x)
                    .map(|(b, xi)| &b[i] * xi)
                    .sum()
            })
            .collect();
        Face {
            facets: closure,
            dim,
            span_basis,
            rel_interior,
        }
    }
}

fn scale_to_integer(u: &[BigRational]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in u {
        lcm = lcm.lcm(x.denom());
    }
    u.iter()
        .map(|x| {
            let v = x.numer() * (&lcm / x.denom());
            i64::try_from(&v).expect("interior witness out of i64 range")
        })
        .collect()
}

/// A face of the cone, identified by the exact set of facets containing it.
#[derive(Debug, Clone)]
pub struct Face {
    pub facets: BTreeSet<usize>,
    pub dim: usize,
    pub(crate) span_basis: Vec<RatVec>,
    pub(crate) rel_interior: RatVec,
}

/// All faces of the cone, graded by dimension, with signed incidence
/// numbers between faces of consecutive dimensions.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    n: usize,
    faces: Vec<Face>,
    incidence: BTreeMap<(usize, usize), i8>,
}

impl FaceLattice {
    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.dim == d)
    }

    pub fn incidence(&self, lower: usize, upper: usize) -> i8 {
        self.incidence.get(&(lower, upper)).copied().unwrap_or(0)
    }
}
