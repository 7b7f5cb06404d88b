use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank over the rationals of an integer matrix, by fraction-free
/// (Bareiss) elimination. No tolerances: every intermediate is an exact
/// minor of the input.
pub fn exact_rank(m: &DMatrix<i64>) -> usize {
    let rows = (0..m.nrows()).map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss_rank(rows)
}

/// Rank of a rational matrix: each row is scaled by the lcm of its
/// denominators, which leaves the rank unchanged.
pub fn exact_rank_rational(m: &DMatrix<BigRational>) -> usize {
    let rows = (0..m.nrows())
        .map(|i| {
            let row: Vec<&BigRational> = (0..m.ncols()).map(|j| &m[(i, j)]).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    bareiss_rank(rows)
}

#[allow(clippy::needless_range_loop)]
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..n_rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for r in rank + 1..n_rows {
            let lead = a[r][col].clone();
            for c in col + 1..n_cols {
                let v = (&pivot * &a[r][c] - &lead * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain Gaussian elimination over the rationals.
    #[allow(clippy::needless_range_loop)]
    fn rational_rank(m: &DMatrix<i64>) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..m.nrows())
            .map(|i| m.row(i).iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.ncols() {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[rank][col];
                    for c in 0..m.ncols() {
                        let d = &f * &a[rank][c];
                        a[r][c] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_cases() {
        assert_eq!(exact_rank(&DMatrix::identity(3, 3)), 3);
        assert_eq!(exact_rank(&DMatrix::zeros(3, 4)), 0);
        assert_eq!(exact_rank(&DMatrix::zeros(0, 0)), 0);
        assert_eq!(exact_rank(&DMatrix::from_row_slice(2, 3, &[1, 2, 3, 2, 4, 6])), 1);
        assert_eq!(exact_rank(&DMatrix::from_row_slice(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0])), 2);
        // near-singular in floating point, exactly full rank here
        let big = 1i64 << 40;
        assert_eq!(exact_rank(&DMatrix::from_row_slice(2, 2, &[big, big + 1, big - 1, big])), 2);
    }

    #[test]
    fn rational_rows_are_rescaled() {
        let half = |n: i64| BigRational::new(n.into(), 2.into());
        let third = |n: i64| BigRational::new(n.into(), 3.into());
        let m = DMatrix::from_row_slice(2, 2, &[half(1), third(1), half(3), BigRational::from_integer(1.into())]);
        assert_eq!(exact_rank_rational(&m), 1);
        let m = DMatrix::from_row_slice(2, 2, &[half(1), third(1), half(3), third(2)]);
        assert_eq!(exact_rank_rational(&m), 2);
    }

    proptest! {
        #[test]
        fn agrees_with_gaussian_elimination(
            r in 1usize..7, c in 1usize..7, seed in proptest::collection::vec(-3i64..=3, 49), low in 0usize..3,
        ) {
            // force low rank sometimes by repeating combinations of earlier rows
            let mut m = DMatrix::from_fn(r, c, |i, j| seed[i * 7 + j]);
            for i in 0..r.min(low) {
                if i + 1 < r {
                    let combo = m.row(i) * 2 - m.row(0);
                    m.set_row(i + 1, &combo);
                }
            }
            prop_assert_eq!(exact_rank(&m), rational_rank(&m));
        }
    }
}
