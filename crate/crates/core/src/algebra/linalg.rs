//! Exact linear solves over ℚ.

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Solves `A x = b` exactly. Requires full column rank; every surplus
/// equation must be consistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], context: &str) -> Result<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Singular(format!("{context}: no pivot in column {col}")));
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < pivot_row {
                    let (lo, hi) = m.split_at_mut(pivot_row);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[pivot_row], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    if let Some(r) = (pivot_row..rows).find(|&r| !m[r][cols].is_zero()) {
        return Err(Error::Inconsistent(format!("{context}: equation {r} has residual {}", m[r][cols])));
    }
    debug_assert!(m.iter().take(cols).enumerate().all(|(i, r)| r[i].is_one()));
    Ok(m.into_iter().take(cols).map(|mut r| r.pop().expect("augmented")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn square_and_overdetermined() {
        let a = vec![row(&[1, 1]), row(&[1, -1]), row(&[2, 0])];
        let x = solve(&a, &row(&[3, 1, 4]), "t").unwrap();
        assert_eq!(x, row(&[2, 1]));
        assert!(matches!(solve(&a, &row(&[3, 1, 5]), "t"), Err(Error::Inconsistent(_))));
        let sing = vec![row(&[1, 1]), row(&[2, 2])];
        assert!(matches!(solve(&sing, &row(&[1, 2]), "t"), Err(Error::Singular(_))));
    }
}
