//! Exact integer linear algebra: Smith normal form, cokernel invariants,
//! image membership and torsion tests.
//!
//! Convention used throughout the crate: a matrix `A` acts on column
//! vectors, so `A: Z^cols -> Z^rows` and the cokernel is
//! `Z^rows / (A * Z^cols)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    let cur = out.get(i, j) + t;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "incompatible shapes");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Appends `c` as an extra column.
    pub fn with_column(&self, c: &[BigInt]) -> IntMatrix {
        assert_eq!(c.len(), self.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            out.set(i, self.cols, c[i].clone());
        }
        out
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        i64::try_from(self.get(i, j)).expect("matrix entry out of i64 range")
                    })
                    .collect()
            })
            .collect()
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let t = a.get(k, j).clone();
                            a.set(k, j, a.get(i, j).clone());
                            a.set(i, j, t);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    a.set(i, j, &num / &prev);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular and
/// `d_1 | d_2 | ... | d_rank` nonnegative on the diagonal.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Invariants of `coker(A) = Z^rows / (A * Z^cols)` as
/// `Z^free_rank (+) Z/t_1 (+) ... (+) Z/t_k` with `t_i | t_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// Classical SNF by row/column reduction. Pivot choice is the smallest
/// nonzero absolute value in the working submatrix, scanned row-major,
/// which makes `U` and `V` reproducible.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let swap_rows = |m: &mut IntMatrix, i: usize, k: usize| {
        if i != k {
            for j in 0..m.cols() {
                let t = m.get(i, j).clone();
                m.set(i, j, m.get(k, j).clone());
                m.set(k, j, t);
            }
        }
    };
    let swap_cols = |m: &mut IntMatrix, j: usize, l: usize| {
        if j != l {
            for i in 0..m.rows() {
                let t = m.get(i, j).clone();
                m.set(i, j, m.get(i, l).clone());
                m.set(i, l, t);
            }
        }
    };
    // row_i -= q * row_k
    let row_sub = |m: &mut IntMatrix, i: usize, k: usize, q: &BigInt| {
        for j in 0..m.cols() {
            let t = m.get(i, j) - q * m.get(k, j);
            m.set(i, j, t);
        }
    };
    let col_sub = |m: &mut IntMatrix, j: usize, l: usize, q: &BigInt| {
        for i in 0..m.rows() {
            let t = m.get(i, j) - q * m.get(i, l);
            m.set(i, j, t);
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero |entry| in the submatrix, row-major scan
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let e = d.get(i, j);
                if !e.is_zero()
                    && pivot.is_none_or(|(pi, pj)| e.abs() < d.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..rows {
                if !d.get(i, t).is_zero() {
                    let q = d.get(i, t).div_floor(d.get(t, t));
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !d.get(i, t).is_zero() {
                        // remainder became the smaller pivot
                        swap_rows(&mut d, t, i);
                        swap_rows(&mut u, t, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_zero() {
                    let q = d.get(t, j).div_floor(d.get(t, t));
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    if !d.get(t, j).is_zero() {
                        swap_cols(&mut d, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide the remaining submatrix
            let mut offender = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // fold row i into row t, then re-reduce
                    for j in 0..cols {
                        let s = d.get(t, j) + d.get(i, j);
                        d.set(t, j, s);
                    }
                    for j in 0..rows {
                        let s = u.get(t, j) + u.get(i, j);
                        u.set(t, j, s);
                    }
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            for j in 0..cols {
                let neg = -d.get(t, j);
                d.set(t, j, neg);
            }
            for j in 0..rows {
                let neg = -u.get(t, j);
                u.set(t, j, neg);
            }
        }
        t += 1;
    }

    let rank = (0..rows.min(cols))
        .take_while(|&i| !d.get(i, i).is_zero())
        .count();
    SmithForm { d, u, v, rank }
}

pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let snf = smith_normal_form(a);
    let torsion = snf
        .diagonal()
        .iter()
        .take(snf.rank)
        .filter(|d| **d > BigInt::one())
        .map(|d| u64::try_from(d).expect("torsion invariant out of u64 range"))
        .collect();
    CokernelInvariants {
        free_rank: a.rows() - snf.rank,
        torsion,
    }
}

/// Solves `A * x = c` over the integers, if possible, via the Smith form.
/// A returned witness always satisfies `A * x = c` exactly.
pub fn solve_in_image(a: &IntMatrix, c: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if c.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            got: c.len(),
        });
    }
    let snf = smith_normal_form(a);
    let rhs = snf.u.mul_vec(c);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, r) in rhs.iter().enumerate() {
        if i < snf.rank {
            let d = snf.d.get(i, i);
            let (q, rem) = r.div_rem(d);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !r.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.mul_vec(&y)))
}

/// True iff `c` lies in the rational column span of `A`, i.e. some positive
/// multiple of `c` is in the integer image.
pub fn is_torsion_in_cokernel(a: &IntMatrix, c: &[BigInt]) -> Result<bool, LatticeError> {
    if c.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            got: c.len(),
        });
    }
    let base = smith_normal_form(a).rank;
    let aug = smith_normal_form(&a.with_column(c)).rank;
    Ok(aug == base)
}
