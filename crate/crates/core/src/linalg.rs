//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::error::{NfError, Result};
use crate::scalar::Rational;

/// General solution `x = particular + Σ_k λ_k · directions[k]` of `A x = b`.
///
/// `free_columns[k]` is the unknown set equal to `λ_k`; free columns are the
/// non-pivot columns of the reduced row echelon form with pivots chosen
/// leftmost, listed left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub free_columns: Vec<usize>,
    pub directions: Vec<Vec<Rational>>,
}

pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<AffineSolution> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(found) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, found);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=cols {
                let delta = &factor * &m[row][c];
                m[r][c] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(NfError::Inconsistent);
    }

    let free_columns: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Rational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = m[r][cols].clone();
    }
    let directions = free_columns
        .iter()
        .map(|&fc| {
            let mut d = vec![Rational::zero(); cols];
            d[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                d[pc] = -&m[r][fc];
            }
            d
        })
        .collect();
    Ok(AffineSolution {
        particular,
        free_columns,
        directions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let s = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(s.particular, vec![rat(4, 5), rat(7, 5)]);
        assert!(s.free_columns.is_empty());
    }

    #[test]
    fn underdetermined_family() {
        // x + y + z = 1, rank one; last two columns are free
        let a = mat(&[&[1, 1, 1], &[2, 2, 2]]);
        let s = solve(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(s.free_columns, vec![1, 2]);
        assert_eq!(s.particular, vec![int(1), int(0), int(0)]);
        assert_eq!(s.directions[0], vec![int(-1), int(1), int(0)]);
        for d in &s.directions {
            let sum: Rational = d.iter().sum();
            assert_eq!(sum, int(0));
        }
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[int(1), int(2)]), Err(NfError::Inconsistent));
    }

    #[test]
    fn zero_columns_are_free() {
        let a = mat(&[&[0, 1]]);
        let s = solve(&a, &[int(4)]).unwrap();
        assert_eq!(s.free_columns, vec![0]);
        assert_eq!(s.particular, vec![int(0), int(4)]);
    }
}
