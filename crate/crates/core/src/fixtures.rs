//! Classic integer sequences used as reference data.
//!
//! Each sequence comes from its own standard recurrence or sum, not from the
//! continued-fraction machinery, so it can serve as an oracle for it. The two
//! exceptions (`a000958`, `a109190`) are defined by transforms of other
//! fixtures and are only as independent as those transforms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::TruncatedSeries;
use crate::transforms;

/// Minimum order every fixture is generated to.
pub const MIN_FIXTURE_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    Catalan,
    Motzkin,
    Fine,
    Riordan,
    SchroederShifted,
    DelannoyCentral,
    TrinomialCentral,
    A000958,
    A109190,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown fixture {0:?}")]
pub struct UnknownFixture(pub String);

impl Fixture {
    pub const ALL: [Fixture; 9] = [
        Fixture::Catalan,
        Fixture::Motzkin,
        Fixture::Fine,
        Fixture::Riordan,
        Fixture::SchroederShifted,
        Fixture::DelannoyCentral,
        Fixture::TrinomialCentral,
        Fixture::A000958,
        Fixture::A109190,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Catalan => "catalan",
            Fixture::Motzkin => "motzkin",
            Fixture::Fine => "fine",
            Fixture::Riordan => "riordan",
            Fixture::SchroederShifted => "schroeder_shifted",
            Fixture::DelannoyCentral => "delannoy_central",
            Fixture::TrinomialCentral => "trinomial_central",
            Fixture::A000958 => "a000958",
            Fixture::A109190 => "a109190",
        }
    }

    /// Integer terms `a_0..=a_order`.
    pub fn terms(self, order: usize) -> Vec<BigInt> {
        let n = order.max(MIN_FIXTURE_ORDER);
        let mut terms = match self {
            Fixture::Catalan => catalan(n),
            Fixture::Motzkin => motzkin(n),
            Fixture::Fine => fine(n),
            Fixture::Riordan => riordan(n),
            Fixture::SchroederShifted => little_schroeder(n + 1).split_off(1),
            Fixture::DelannoyCentral => central_delannoy(n),
            Fixture::TrinomialCentral => central_trinomial(n),
            Fixture::A000958 => {
                let c = to_series(&catalan(n));
                to_integers(transforms::minvert(&c, &BigRational::one()).coeffs())
            }
            Fixture::A109190 => {
                let m = to_series(&motzkin(n));
                let t = transforms::minvert(&m, &BigRational::one());
                to_integers(transforms::invert(&t, &-BigRational::one()).coeffs())
            }
        };
        terms.truncate(order + 1);
        terms
    }

    pub fn series(self, order: usize) -> TruncatedSeries<BigRational> {
        to_series(&self.terms(order))
    }
}

impl FromStr for Fixture {
    type Err = UnknownFixture;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| UnknownFixture(s.to_string()))
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn fixture(name: &str, order: usize) -> Result<TruncatedSeries<BigRational>, UnknownFixture> {
    Ok(name.parse::<Fixture>()?.series(order))
}

fn to_series(terms: &[BigInt]) -> TruncatedSeries<BigRational> {
    TruncatedSeries::new(
        terms
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect(),
    )
}

fn to_integers(coeffs: &[BigRational]) -> Vec<BigInt> {
    coeffs
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "fixture transform produced a non-integer");
            c.to_integer()
        })
        .collect()
}

/// `C_{n+1} = Σ_k C_k C_{n−k}`.
fn catalan(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for i in 0..n {
        let next = (0..=i).map(|k| &c[k] * &c[i - k]).sum();
        c.push(next);
    }
    c
}

/// `M_n = M_{n−1} + Σ_{k=0}^{n−2} M_k M_{n−2−k}`.
fn motzkin(n: usize) -> Vec<BigInt> {
    let mut m = vec![BigInt::one()];
    for i in 1..=n {
        let conv: BigInt = (0..i.saturating_sub(1))
            .map(|k| &m[k] * &m[i - 2 - k])
            .sum();
        let next = &m[i - 1] + conv;
        m.push(next);
    }
    m
}

/// From `C_n = 2F_n + F_{n−1}` (n ≥ 1), `F_0 = 1`.
fn fine(n: usize) -> Vec<BigInt> {
    let c = catalan(n);
    let mut f = vec![BigInt::one()];
    for i in 1..=n {
        let next = (&c[i] - &f[i - 1]) / BigInt::from(2);
        f.push(next);
    }
    f
}

/// `(n+1) R_n = (n−1)(2R_{n−1} + 3R_{n−2})`.
fn riordan(n: usize) -> Vec<BigInt> {
    let mut r = vec![BigInt::one(), BigInt::zero()];
    for i in 2..=n {
        let k = BigInt::from(i);
        let next = (&k - 1) * (2 * &r[i - 1] + 3 * &r[i - 2]) / (&k + 1);
        r.push(next);
    }
    r.truncate(n + 1);
    r
}

/// Little Schroeder numbers: `(n+1) s_n = 3(2n−1) s_{n−1} − (n−2) s_{n−2}`.
fn little_schroeder(n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::one(), BigInt::one()];
    for i in 2..=n {
        let k = BigInt::from(i);
        let next = (3 * (2 * &k - 1) * &s[i - 1] - (&k - 2) * &s[i - 2]) / (&k + 1);
        s.push(next);
    }
    s.truncate(n + 1);
    s
}

fn binomial_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|k| {
                let left = if k > 0 {
                    prev[k - 1].clone()
                } else {
                    BigInt::zero()
                };
                let right = prev.get(k).cloned().unwrap_or_default();
                left + right
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// `D_n = Σ_k C(n,k) C(n+k,k)`.
fn central_delannoy(n: usize) -> Vec<BigInt> {
    let table = binomial_table(2 * n);
    (0..=n)
        .map(|i| (0..=i).map(|k| &table[i][k] * &table[i + k][k]).sum())
        .collect()
}

/// `[x^n] (1 + x + x²)^n`.
fn central_trinomial(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut poly = vec![BigInt::one()];
    for i in 0..=n {
        out.push(poly[i].clone());
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (j, c) in poly.iter().enumerate() {
            next[j] += c;
            next[j + 1] += c;
            next[j + 2] += c;
        }
        poly = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fixture_prefixes() {
        assert_eq!(
            Fixture::Catalan.terms(10),
            big(&[1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796])
        );
        assert_eq!(
            Fixture::Fine.terms(8),
            big(&[1, 0, 1, 2, 6, 18, 57, 186, 622])
        );
        assert_eq!(
            Fixture::A000958.terms(10),
            big(&[1, 1, 3, 8, 24, 75, 243, 808, 2742, 9458, 33062])
        );
        assert_eq!(Fixture::Motzkin.terms(6), big(&[1, 1, 2, 4, 9, 21, 51]));
        assert_eq!(
            Fixture::Riordan.terms(8),
            big(&[1, 0, 1, 1, 3, 6, 15, 36, 91])
        );
        assert_eq!(
            Fixture::SchroederShifted.terms(5),
            big(&[1, 3, 11, 45, 197, 903])
        );
        assert_eq!(
            Fixture::DelannoyCentral.terms(5),
            big(&[1, 3, 13, 63, 321, 1683])
        );
        assert_eq!(
            Fixture::TrinomialCentral.terms(6),
            big(&[1, 1, 3, 7, 19, 51, 141])
        );
        assert_eq!(Fixture::A109190.terms(6), big(&[1, 0, 2, 2, 8, 16, 46]));
    }

    #[test]
    fn names_round_trip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
            assert_eq!(f.series(12).order(), 12);
        }
        assert_eq!(
            "nope".parse::<Fixture>(),
            Err(UnknownFixture("nope".into()))
        );
        assert!(fixture("Catalan", 3).is_ok());
    }

    #[test]
    fn catalan_times_fine_is_a000958() {
        let prod = Fixture::Catalan
            .series(8)
            .mul(&Fixture::Fine.series(8))
            .unwrap();
        assert_eq!(prod, Fixture::A000958.series(8));
    }
}
