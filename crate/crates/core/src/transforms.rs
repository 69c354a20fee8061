//! Sequence transforms on generating functions: binomial `B_r`, `INVERT_s`,
//! the mean-INVERT `MINVERT_r`, reversion, and the Hankel transform.

use crate::jfraction::JFractionSpec;
use crate::scalar::Scalar;
use crate::series::{SeriesError, TruncatedSeries};

/// `B_r`: `b_n = Σ_k C(n,k) r^{n−k} a_k`, by the direct sum.
pub fn binomial<T: Scalar>(g: &TruncatedSeries<T>, r: &T) -> TruncatedSeries<T> {
    let order = g.order();
    let mut powers = Vec::with_capacity(order + 1);
    let mut acc = T::one();
    for _ in 0..=order {
        powers.push(acc.clone());
        acc = acc * r.clone();
    }
    // Pascal rows built by addition so the scalar type only needs ring ops
    let mut row: Vec<T> = vec![T::one()];
    TruncatedSeries::from_fn(order, |n| {
        if n > 0 {
            let mut next = vec![T::one(); n + 1];
            for k in 1..n {
                next[k] = row[k - 1].clone() + row[k].clone();
            }
            row = next;
        }
        (0..=n).fold(T::zero(), |sum, k| {
            sum + row[k].clone() * powers[n - k].clone() * g.coeff(k)
        })
    })
}

/// `INVERT_s`: `g / (1 − s·x·g)`.
pub fn invert<T: Scalar>(g: &TruncatedSeries<T>, s: &T) -> TruncatedSeries<T> {
    let denom = TruncatedSeries::one(g.order())
        .sub(&g.shift_up(1).scale(s))
        .expect("same order");
    g.div(&denom).expect("denominator has unit constant term")
}

/// `MINVERT_r`: `g / (1 − r·x²·g²)`.
pub fn minvert<T: Scalar>(g: &TruncatedSeries<T>, r: &T) -> TruncatedSeries<T> {
    let g2 = g.mul(g).expect("same order");
    let denom = TruncatedSeries::one(g.order())
        .sub(&g2.shift_up(2).scale(r))
        .expect("same order");
    g.div(&denom).expect("denominator has unit constant term")
}

/// `Rev(g) = (1/x)·Rev(x·g)`, via Lagrange inversion.
pub fn rev<T: Scalar>(g: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>, SeriesError> {
    g.reversion_lagrange()
}

/// Hankel determinants `h_n = det(a_{i+j})_{0≤i,j≤n}` for every `n` the
/// sequence supports, i.e. `n ≤ ⌊(len − 1)/2⌋`.
pub fn hankel<T: Scalar>(seq: &[T]) -> Vec<T> {
    if seq.is_empty() {
        return Vec::new();
    }
    (0..=(seq.len() - 1) / 2)
        .map(|n| {
            let matrix = (0..=n)
                .map(|i| (0..=n).map(|j| seq[i + j].clone()).collect())
                .collect();
            bareiss_determinant(matrix)
        })
        .collect()
}

/// Fraction-free (Bareiss) elimination. Every division is exact, so integer
/// input stays integral throughout.
pub fn bareiss_determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev_pivot = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone())
                    / prev_pivot.clone();
                m[i][j] = v;
            }
        }
        prev_pivot = m[k][k].clone();
    }
    let det = if n == 0 {
        T::one()
    } else {
        m[n - 1][n - 1].clone()
    };
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Product formula for the Hankel determinants of a J-fraction expansion:
/// `h_n = det(a_{i+j})_{0≤i,j≤n} = ∏_{k=1}^{n} β_k^{n+1−k}` for `n = 0..=n_max`.
pub fn hankel_from_jcf<T: Scalar>(spec: &JFractionSpec<T>, n_max: usize) -> Vec<T> {
    (0..=n_max)
        .map(|n| {
            (1..=n).fold(T::one(), |acc, k| {
                let beta = spec.beta(k);
                (0..=n - k).fold(acc, |acc, _| acc * beta.clone())
            })
        })
        .collect()
}
