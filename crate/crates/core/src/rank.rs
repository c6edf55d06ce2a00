//! Exact matrix rank by fraction-free (Bareiss) elimination.
//!
//! Every intermediate entry is a minor of the input, so all divisions are
//! exact and no rationals are needed. Elimination first runs on `i128` with
//! checked arithmetic and restarts on `BigInt` if an entry overflows.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Integer type usable by [`rank_fraction_free`].
pub trait ExactInteger: Clone + Zero + One + PartialEq {
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    /// Division known to leave no remainder.
    fn exact_div(&self, other: &Self) -> Self;
}

macro_rules! prim_exact {
    ($($t:ty),*) => {$(
        impl ExactInteger for $t {
            fn checked_mul(&self, other: &Self) -> Option<Self> {
                <$t>::checked_mul(*self, *other)
            }
            fn checked_sub(&self, other: &Self) -> Option<Self> {
                <$t>::checked_sub(*self, *other)
            }
            fn exact_div(&self, other: &Self) -> Self {
                debug_assert_eq!(self % other, 0);
                self / other
            }
        }
    )*};
}

prim_exact!(i64, i128);

impl ExactInteger for BigInt {
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Rank of `rows` (all of equal length). `None` if `I` overflowed.
pub fn rank_fraction_free<I: ExactInteger>(mut rows: Vec<Vec<I>>) -> Option<usize> {
    let m = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = I::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let a = pivot.checked_mul(&row[j])?;
                let b = lead.checked_mul(&pivot_row[j])?;
                row[j] = a.checked_sub(&b)?.exact_div(&prev);
            }
            row[c] = I::zero();
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

/// Exact rank over the rationals of an integer matrix.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    if let Some(r) = rank_fraction_free(wide) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    rank_fraction_free(big).expect("BigInt arithmetic does not overflow")
}
