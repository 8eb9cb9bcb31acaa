//! Textbook phase-1 simplex over exact rationals, used for feasibility
//! questions only (interior points, facet redundancy, face closures).
//! Bland's rule on both entering and leaving variables, so no cycling.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finds `u` in `Q^n` with `a . u >= b` for every `(a, b)` in `constraints`,
/// or `None` if the system is infeasible. Variables are free.
pub(crate) fn feasible(constraints: &[(Vec<BigRational>, BigRational)]) -> Option<Vec<BigRational>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![]);
    }
    let n = constraints[0].0.len();
    debug_assert!(constraints.iter().all(|(a, _)| a.len() == n));

    // u = x+ - x-, slack s >= 0:  A x+ - A x- - s = b, then flip rows to
    // make the right-hand side nonnegative and add artificials.
    let ncols = 2 * n + m + m; // x+, x-, slacks, artificials
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (a, b)) in constraints.iter().enumerate() {
        let flip = b.is_negative();
        let sgn = if flip { -BigRational::one() } else { BigRational::one() };
        let mut row = vec![BigRational::zero(); ncols + 1];
        for j in 0..n {
            row[j] = &sgn * &a[j];
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = -&sgn; // slack
        row[2 * n + m + i] = BigRational::one(); // artificial
        row[ncols] = &sgn * b;
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();

    // reduced costs for minimizing the sum of artificials
    fn reduced_cost(
        tab: &[Vec<BigRational>],
        basis: &[usize],
        art_start: usize,
        j: usize,
    ) -> BigRational {
        let mut acc = if j >= art_start {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        for (i, row) in tab.iter().enumerate() {
            if basis[i] >= art_start {
                acc -= &row[j];
            }
        }
        acc
    }

    loop {
        let entering =
            (0..ncols).find(|&j| reduced_cost(&tab, &basis, 2 * n + m, j).is_negative());
        let Some(e) = entering else { break };
        // min-ratio leaving row, Bland tie-break on basis index
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if tab[i][e].is_positive() {
                let ratio = &tab[i][ncols] / &tab[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            // unbounded phase-1 objective cannot happen (bounded below by 0)
            unreachable!("phase-1 simplex unbounded");
        };
        // pivot on (l, e)
        let piv = tab[l][e].clone();
        for x in tab[l].iter_mut() {
            *x /= &piv;
        }
        for i in 0..m {
            if i != l && !tab[i][e].is_zero() {
                let f = tab[i][e].clone();
                for j in 0..=ncols {
                    let t = &tab[l][j] * &f;
                    tab[i][j] -= t;
                }
            }
        }
        basis[l] = e;
    }

    // feasible iff every artificial is zero in the optimal solution
    let objective: BigRational = (0..m)
        .filter(|&i| basis[i] >= 2 * n + m)
        .map(|i| tab[i][ncols].clone())
        .sum();
    if !objective.is_zero() {
        return None;
    }

    let mut u = vec![BigRational::zero(); n];
    for i in 0..m {
        let j = basis[i];
        if j < n {
            u[j] += &tab[i][ncols];
        } else if j < 2 * n {
            u[j - n] -= &tab[i][ncols];
        }
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    fn sys(rows: &[(&[i64], i64)]) -> Vec<(Vec<BigRational>, BigRational)> {
        rows.iter()
            .map(|(a, b)| (a.iter().map(|&x| rat(x)).collect(), rat(*b)))
            .collect()
    }

    fn check_feasible(rows: &[(&[i64], i64)]) -> Option<Vec<BigRational>> {
        let cs = sys(rows);
        let u = feasible(&cs)?;
        for (a, b) in &cs {
            let lhs: BigRational = a.iter().zip(&u).map(|(ai, ui)| ai * ui).sum();
            assert!(lhs >= *b, "witness violates a constraint");
        }
        Some(u)
    }

    #[test]
    fn strict_interior_of_quadrant() {
        assert!(check_feasible(&[(&[1, 0], 1), (&[0, 1], 1)]).is_some());
    }

    #[test]
    fn infeasible_halfplanes() {
        // x >= 1 and -x >= 0
        assert!(check_feasible(&[(&[1], 1), (&[-1], 0)]).is_none());
    }

    #[test]
    fn degenerate_line_has_no_interior() {
        // (1,0).u >= 1 and (-1,0).u >= 1
        assert!(check_feasible(&[(&[1, 0], 1), (&[-1, 0], 1)]).is_none());
    }

    #[test]
    fn a1_cone_interior() {
        let u = check_feasible(&[(&[0, 1], 1), (&[2, -1], 1)]).unwrap();
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn negative_rhs_rows() {
        // u >= -3 and -u >= -5, i.e. -3 <= u <= 5
        assert!(check_feasible(&[(&[1], -3), (&[-1], -5)]).is_some());
    }
}
