//! Eventually-constant Jacobi continued fractions
//!
//! ```text
//! J(α_1, α_2, …; β_1, β_2, …) = 1/(1 − α_1 x − β_1 x²/(1 − α_2 x − β_2 x²/(1 − …)))
//! ```
//!
//! where both coefficient streams become constant after a finite head.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JFractionError {
    #[error("J-fraction extraction needs a unit constant term")]
    NonUnitConstant,
    #[error("J-fraction terminates: beta_{level} = 0")]
    TerminatedFraction { level: usize },
    #[error("series of order {order} is too short to extract {depth} levels (need order >= {})", 2 * depth)]
    InsufficientOrder { order: usize, depth: usize },
    #[error("coefficient shift needs a constant-coefficient J-fraction (empty heads)")]
    NotConstantCoefficient,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Coefficient data `α_k`, `β_k` (1-indexed) of an eventually-constant J-fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JFractionSpec<T> {
    pub alpha_head: Vec<T>,
    pub alpha_tail: T,
    pub beta_head: Vec<T>,
    pub beta_tail: T,
}

impl<T: Scalar> JFractionSpec<T> {
    pub fn new(alpha_head: Vec<T>, alpha_tail: T, beta_head: Vec<T>, beta_tail: T) -> Self {
        Self {
            alpha_head,
            alpha_tail,
            beta_head,
            beta_tail,
        }
    }

    /// Constant-coefficient fraction `J(α, α, …; β, β, …)`.
    pub fn constant(alpha: T, beta: T) -> Self {
        Self::new(Vec::new(), alpha, Vec::new(), beta)
    }

    /// `α_k`, 1-indexed.
    pub fn alpha(&self, k: usize) -> T {
        assert!(k >= 1, "J-fraction coefficients are 1-indexed");
        self.alpha_head
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| self.alpha_tail.clone())
    }

    /// `β_k`, 1-indexed.
    pub fn beta(&self, k: usize) -> T {
        assert!(k >= 1, "J-fraction coefficients are 1-indexed");
        self.beta_head
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| self.beta_tail.clone())
    }

    /// Number of leading levels that may differ from the tail.
    pub fn head_len(&self) -> usize {
        self.alpha_head.len().max(self.beta_head.len())
    }

    pub fn is_constant(&self) -> bool {
        self.alpha_head.is_empty() && self.beta_head.is_empty()
    }

    /// Drops trailing head entries equal to the tail; the expansion is unchanged.
    pub fn normalized(&self) -> Self {
        let trim = |head: &[T], tail: &T| {
            let mut v = head.to_vec();
            while v.last() == Some(tail) {
                v.pop();
            }
            v
        };
        Self::new(
            trim(&self.alpha_head, &self.alpha_tail),
            self.alpha_tail.clone(),
            trim(&self.beta_head, &self.beta_tail),
            self.beta_tail.clone(),
        )
    }

    /// Expansion to order `n` using the minimal sufficient nesting depth.
    pub fn expand(&self, n: usize) -> TruncatedSeries<T> {
        self.expand_with_depth(n, n.div_ceil(2) + 1)
    }

    /// Evaluates the fraction to `depth` levels, seeding the innermost level
    /// with the constant series 1. Levels past `⌈n/2⌉ + 1` cannot reach `x^n`.
    pub fn expand_with_depth(&self, n: usize, depth: usize) -> TruncatedSeries<T> {
        let mut g = TruncatedSeries::one(n);
        for k in (1..=depth).rev() {
            let mut denom = g.shift_up(2).scale(&-self.beta(k));
            let mut c = denom.coeffs().to_vec();
            c[0] = c[0].clone() + T::one();
            if n >= 1 {
                c[1] = c[1].clone() - self.alpha(k);
            }
            denom = TruncatedSeries::new(c);
            g = denom
                .reciprocal()
                .expect("J-fraction denominators have unit constant term");
        }
        g
    }

    /// Adds `r` to every `α_k`: the binomial transform at coefficient level.
    pub fn binomial_shift(&self, r: &T) -> Self {
        Self::new(
            self.alpha_head
                .iter()
                .map(|a| a.clone() + r.clone())
                .collect(),
            self.alpha_tail.clone() + r.clone(),
            self.beta_head.clone(),
            self.beta_tail.clone(),
        )
        .normalized()
    }

    /// Adds `s` to `α_1` only: the INVERT transform at coefficient level.
    pub fn invert_shift(&self, s: &T) -> Self {
        let mut out = self.clone();
        if out.alpha_head.is_empty() {
            out.alpha_head.push(out.alpha_tail.clone());
        }
        out.alpha_head[0] = out.alpha_head[0].clone() + s.clone();
        out.normalized()
    }

    /// Adds `r` to `β_1` of a constant-coefficient fraction (MINVERT).
    ///
    /// For a general head the effect of MINVERT on the coefficients is not a
    /// single shift, so only the constant case is accepted.
    pub fn minvert_shift(&self, r: &T) -> Result<Self, JFractionError> {
        if !self.is_constant() {
            return Err(JFractionError::NotConstantCoefficient);
        }
        Ok(Self::new(
            Vec::new(),
            self.alpha_tail.clone(),
            vec![self.beta_tail.clone() + r.clone()],
            self.beta_tail.clone(),
        )
        .normalized())
    }

    /// Monic orthogonal polynomials `P_0..=P_n` (ascending coefficient vectors)
    /// from `P_{k+1} = (x − α_{k+1}) P_k − β_k P_{k−1}`.
    pub fn orthogonal_polynomials(&self, n: usize) -> Vec<Vec<T>> {
        let mut polys: Vec<Vec<T>> = vec![vec![T::one()]];
        for k in 0..n {
            let pk = &polys[k];
            let mut next = vec![T::zero(); k + 2];
            for (i, c) in pk.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - self.alpha(k + 1) * c.clone();
            }
            if k >= 1 {
                let beta = self.beta(k);
                for (i, c) in polys[k - 1].iter().enumerate() {
                    next[i] = next[i].clone() - beta.clone() * c.clone();
                }
            }
            polys.push(next);
        }
        polys
    }
}

/// Coefficients peeled off a series by [`extract`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JFractionCoefficients<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> JFractionCoefficients<T> {
    /// A spec with these coefficients as heads and the last values as tails.
    pub fn to_spec(&self) -> JFractionSpec<T> {
        let tail = |v: &[T]| v.last().cloned().unwrap_or_else(T::zero);
        JFractionSpec::new(
            self.alpha.clone(),
            tail(&self.alpha),
            self.beta.clone(),
            tail(&self.beta),
        )
        .normalized()
    }
}

/// Recovers `α_1..α_depth`, `β_1..β_depth` from a series with `g_0 = 1`.
///
/// At each level `r = 1/g_k` gives `α_k = −r_1`, and `1 − α_k x − r` equals
/// `β_k x² g_{k+1}`, from which the next level is read off. Every level costs
/// two orders of accuracy, hence `2·depth ≤ order`.
pub fn extract<T: Scalar>(
    g: &TruncatedSeries<T>,
    depth: usize,
) -> Result<JFractionCoefficients<T>, JFractionError> {
    if !g.coeff(0).is_one() {
        return Err(JFractionError::NonUnitConstant);
    }
    if 2 * depth > g.order() {
        return Err(JFractionError::InsufficientOrder {
            order: g.order(),
            depth,
        });
    }
    let mut alpha = Vec::with_capacity(depth);
    let mut beta = Vec::with_capacity(depth);
    let mut level = g.clone();
    for k in 1..=depth {
        let r = level.reciprocal()?;
        let a = -r.coeff(1);
        // rest = 1 - a x - r = β_k x² g_{k+1}
        let rest = TruncatedSeries::from_fn(r.order(), |n| match n {
            0 | 1 => T::zero(),
            _ => -r.coeff(n),
        });
        let b = rest.coeff(2);
        if b.is_zero() {
            return Err(JFractionError::TerminatedFraction { level: k });
        }
        alpha.push(a);
        level = rest.shift_down(2).scale(&(T::one() / b.clone()));
        beta.push(b);
    }
    Ok(JFractionCoefficients { alpha, beta })
}

impl<T: Scalar> fmt::Display for JFractionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, head: &[T], tail: &T| -> fmt::Result {
            for h in head {
                write!(f, "{h}, ")?;
            }
            write!(f, "{tail}, …")
        };
        f.write_str("J(")?;
        side(f, &self.alpha_head, &self.alpha_tail)?;
        f.write_str("; ")?;
        side(f, &self.beta_head, &self.beta_tail)?;
        f.write_str(")")
    }
}

/// Wire form: rationals as `"p/q"` strings, lossless for big values.
#[derive(Serialize, Deserialize)]
struct WireSpec {
    alpha_head: Vec<String>,
    alpha_tail: String,
    beta_head: Vec<String>,
    beta_tail: String,
}

impl Serialize for JFractionSpec<BigRational> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WireSpec {
            alpha_head: self.alpha_head.iter().map(format_rational).collect(),
            alpha_tail: format_rational(&self.alpha_tail),
            beta_head: self.beta_head.iter().map(format_rational).collect(),
            beta_tail: format_rational(&self.beta_tail),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JFractionSpec<BigRational> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireSpec::deserialize(deserializer)?;
        let parse = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        Ok(Self {
            alpha_head: wire
                .alpha_head
                .iter()
                .map(|s| parse(s))
                .collect::<Result<_, _>>()?,
            alpha_tail: parse(&wire.alpha_tail)?,
            beta_head: wire
                .beta_head
                .iter()
                .map(|s| parse(s))
                .collect::<Result<_, _>>()?,
            beta_tail: parse(&wire.beta_tail)?,
        })
    }
}
