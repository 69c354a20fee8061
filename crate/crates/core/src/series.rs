//! Truncated formal power series with exact ring operations, composition and
//! two independent reversion algorithms.
//!
//! A [`TruncatedSeries`] always carries its truncation order `N` explicitly
//! and holds exactly `N + 1` coefficients. Binary operations refuse operands
//! of different order instead of truncating silently.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("reversion precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// Coefficients `c_0..=c_N` of a formal power series truncated at order `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// Builds a series from coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// When `coeffs` is empty: a series has at least its constant term.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    /// Pads with zeros or truncates `coeffs` to exactly `order + 1` entries.
    pub fn from_prefix(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| T::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·x^k` truncated to `order` (zero when `k > order`).
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `x` (zero at order 0).
    pub fn x(order: usize) -> Self {
        Self::monomial(T::one(), 1, order)
    }

    /// Geometric series `1/(1 - c·x)`.
    pub fn geometric(c: T, order: usize) -> Self {
        let mut acc = T::one();
        Self::from_fn(order, |_| {
            let out = acc.clone();
            acc = acc.clone() * c.clone();
            out
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::from_prefix(self.coeffs.clone(), order)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self::from_fn(self.order(), |n| {
            self.coeffs[n].clone() + other.coeffs[n].clone()
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self::from_fn(self.order(), |n| {
            self.coeffs[n].clone() - other.coeffs[n].clone()
        }))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.order(), |n| -self.coeffs[n].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.order(), |n| self.coeffs[n].clone() * c.clone())
    }

    /// Multiplies by `x^k`, dropping terms past the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |n| {
            if n >= k {
                self.coeffs[n - k].clone()
            } else {
                T::zero()
            }
        })
    }

    /// Divides by `x^k`, discarding `c_0..c_{k-1}`; the order drops by `k`.
    ///
    /// # Panics
    /// When `k > order`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(
            k <= self.order(),
            "cannot divide an order-{} series by x^{k}",
            self.order()
        );
        Self::new(self.coeffs[k..].to_vec())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        Self::from_fn(self.order(), |n| {
            let mut acc = T::zero();
            for i in 0..=n {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[i].clone() * other.coeffs[n - i].clone();
            }
            acc
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..exp {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// Multiplicative inverse, solving the triangular system `f·r = 1`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let mut r: Vec<T> = Vec::with_capacity(self.coeffs.len());
        r.push(T::one() / c0.clone());
        for n in 1..=self.order() {
            let mut acc = T::zero();
            for i in 1..=n {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[i].clone() * r[n - i].clone();
            }
            r.push(-acc / c0.clone());
        }
        Ok(Self::new(r))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(&other.reciprocal()?))
    }

    /// `f(h(x))` by Horner's scheme; requires `h(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let order = self.order();
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Formal derivative, keeping the order (the top coefficient becomes 0).
    pub fn derivative(&self) -> Self {
        Self::from_fn(self.order(), |n| {
            if n < self.order() {
                self.coeffs[n + 1].clone() * T::from_int((n + 1) as i64)
            } else {
                T::zero()
            }
        })
    }

    fn check_reversible(&self) -> Result<(), SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::PreconditionViolated(
                "constant term must be nonzero",
            ));
        }
        Ok(())
    }

    /// `Rev(g)`: the series with `x·Rev(g)` compositionally inverse to `x·g`,
    /// read off coefficient by coefficient from Lagrange inversion
    /// `[x^n] Rev(g) = [x^n] g^{-(n+1)} / (n + 1)`.
    pub fn reversion_lagrange(&self) -> Result<Self, SeriesError> {
        self.check_reversible()?;
        let h = self.reciprocal()?;
        let mut power = Self::one(self.order());
        Ok(Self::from_fn(self.order(), |n| {
            power = power.mul_unchecked(&h);
            power.coeffs[n].clone() / T::from_int((n + 1) as i64)
        }))
    }

    /// Same value as [`reversion_lagrange`](Self::reversion_lagrange), by
    /// Newton iteration on `F(u) = (x·g)(u) - x` at order `N + 1`.
    ///
    /// Each step doubles the number of correct coefficients; iteration stops
    /// once the iterate is stationary.
    pub fn reversion_newton(&self) -> Result<Self, SeriesError> {
        self.check_reversible()?;
        let order = self.order() + 1;
        // f = x·g at the working order
        let f = Self::from_fn(order, |n| {
            if n == 0 {
                T::zero()
            } else {
                self.coeffs[n - 1].clone()
            }
        });
        let df = f.derivative();
        let x = Self::x(order);
        let mut u = Self::monomial(T::one() / self.coeffs[0].clone(), 1, order);
        // ceil(log2(order + 1)) + 1 steps always suffice; the bound only guards the loop
        for _ in 0..=(usize::BITS - order.leading_zeros()) + 1 {
            let residual = f.compose(&u)?.sub(&x)?;
            if residual.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
            let slope = df.compose(&u)?;
            u = u.sub(&residual.div(&slope)?)?;
        }
        Ok(u.shift_down(1))
    }

    /// Alias for the Lagrange route, the one the transform layer uses.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        self.reversion_lagrange()
    }
}

impl<T: Scalar> fmt::Debug for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{self}]")
    }
}

impl<T: Scalar> fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
