//! Small exact linear algebra over `BigRational`: reduced row echelon form,
//! rank, kernel bases, and dense solves. Everything here is deterministic,
//! which keeps face bases and incidence signs reproducible.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type RatVec = Vec<BigRational>;

/// In-place RREF; returns the pivot column of each pivot row.
pub(crate) fn rref(rows: &mut Vec<RatVec>) -> Vec<usize> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(rows: &[RatVec]) -> usize {
    let mut copy = rows.to_vec();
    rref(&mut copy).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows, in RREF-derived form:
/// one basis vector per free column, free coordinate set to 1.
pub(crate) fn kernel_basis(rows: &[RatVec], n: usize) -> Vec<RatVec> {
    let mut copy: Vec<RatVec> = rows.iter().map(|r| {
        assert_eq!(r.len(), n);
        r.clone()
    }).collect();
    let pivots = rref(&mut copy);
    let mut basis = Vec::new();
    for c in 0..n {
        if pivots.contains(&c) {
            continue;
        }
        let mut v = vec![BigRational::zero(); n];
        v[c] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&copy[r][c];
        }
        basis.push(v);
    }
    basis
}

/// Solves `B x = w` where the columns of `B` are `basis` vectors (assumed
/// linearly independent). Returns `None` if `w` is outside the span.
pub(crate) fn coords_in_basis(basis: &[RatVec], w: &RatVec) -> Option<RatVec> {
    let n = w.len();
    let k = basis.len();
    // augmented system, eliminate
    let mut rows: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut row: RatVec = basis.iter().map(|b| b[i].clone()).collect();
            row.push(w[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None; // inconsistent
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[r][k].clone();
    }
    Some(x)
}

/// Sign of the determinant of the square matrix with the given columns:
/// -1, 0, or +1.
pub(crate) fn det_sign(columns: &[RatVec]) -> i8 {
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == k));
    if k == 0 {
        return 1;
    }
    let mut a: Vec<RatVec> = (0..k)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut sign = 1i8;
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| !a[i][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        if a[c][c].is_negative() {
            sign = -sign;
        }
        let piv = a[c][c].clone();
        for i in c + 1..k {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                for j in c..k {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    sign
}
