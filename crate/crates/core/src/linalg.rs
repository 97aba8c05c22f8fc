//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{Rational, RationalVector};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<RationalVector> {
    let mut work: Vec<Vec<Rational>> = rows.to_vec();
    if work.is_empty() {
        return (0..ncols)
            .map(|j| {
                (0..ncols)
                    .map(|i| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
    }
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            RationalVector::new(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![row(&[1, 2, 3]), row(&[2, 4, 6])];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.iter().all(|r| RationalVector::new(r.clone()).dot(v).is_zero()));
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let a = vec![row(&[1, 0]), row(&[1, 1])];
        assert!(nullspace(&a, 2).is_empty());
    }

    #[test]
    fn no_equations_gives_identity_basis() {
        assert_eq!(nullspace(&[], 2).len(), 2);
    }
}
