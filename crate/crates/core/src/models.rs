//! Named generating-function families: constant J-fractions `g_{a,b}`,
//! spidernet moments `g_{a,b,c}` and the free Meixner family `m_{p,q,a}`.

use num_bigint::BigUint;

use crate::jfraction::JFractionSpec;
use crate::scalar::Scalar;
use crate::series::{SeriesError, TruncatedSeries};
use crate::transforms;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid spidernet S({a},{b},{c}): need a >= 1, b >= 2, 1 <= c <= b-1")]
    InvalidSpidernet { a: i64, b: i64, c: i64 },
    #[error("invalid free Meixner parameters: {0}")]
    InvalidMeixner(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Parameters of a spidernet `S(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpidernetParams {
    a: u32,
    b: u32,
    c: u32,
}

impl SpidernetParams {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ModelError> {
        if a < 1 || b < 2 || c < 1 || c > b - 1 || a > u32::MAX as i64 || b > u32::MAX as i64 {
            return Err(ModelError::InvalidSpidernet { a, b, c });
        }
        Ok(Self {
            a: a as u32,
            b: b as u32,
            c: c as u32,
        })
    }

    /// Upward degree of the origin, `ω_+(o)`.
    pub fn a(&self) -> u32 {
        self.a
    }

    /// Total degree of every vertex other than the origin.
    pub fn b(&self) -> u32 {
        self.b
    }

    /// Upward degree `ω_+` away from the origin.
    pub fn c(&self) -> u32 {
        self.c
    }

    /// In-stratum degree `ω_0 = b − 1 − c` away from the origin.
    pub fn flat_degree(&self) -> u32 {
        self.b - 1 - self.c
    }

    /// `|V_0| = 1`, `|V_k| = a·c^{k−1}`.
    pub fn stratum_size(&self, k: u32) -> BigUint {
        if k == 0 {
            BigUint::from(1u32)
        } else {
            BigUint::from(self.a) * BigUint::from(self.c).pow(k - 1)
        }
    }

    /// `J(0, b−1−c, b−1−c, …; a, c, c, …)`.
    pub fn spec<T: Scalar>(&self) -> JFractionSpec<T> {
        JFractionSpec::new(
            vec![T::zero()],
            T::from_int(self.flat_degree() as i64),
            vec![T::from_int(self.a as i64)],
            T::from_int(self.c as i64),
        )
    }
}

impl std::fmt::Display for SpidernetParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S({},{},{})", self.a, self.b, self.c)
    }
}

/// Parameters `(p, q, a)` of the free Meixner law.
///
/// Unless `relaxed`, the law needs `p > 0` and `q ≥ 0`; relaxed parameters
/// only describe the formal J-fraction (as in the reversion identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeixnerParams<T> {
    pub p: T,
    pub q: T,
    pub a: T,
    pub relaxed: bool,
}

impl<T: Scalar> MeixnerParams<T> {
    pub fn new(p: T, q: T, a: T) -> Result<Self, ModelError> {
        if !p.is_positive() {
            return Err(ModelError::InvalidMeixner(format!("p = {p} must be > 0")));
        }
        if q.is_negative() {
            return Err(ModelError::InvalidMeixner(format!("q = {q} must be >= 0")));
        }
        Ok(Self {
            p,
            q,
            a,
            relaxed: false,
        })
    }

    pub fn relaxed(p: T, q: T, a: T) -> Self {
        Self {
            p,
            q,
            a,
            relaxed: true,
        }
    }

    /// `m_{p,q,a} = J(0, a, a, …; p, q, q, …)`.
    pub fn spec(&self) -> JFractionSpec<T> {
        JFractionSpec::new(
            vec![T::zero()],
            self.a.clone(),
            vec![self.p.clone()],
            self.q.clone(),
        )
    }

    /// `INVERT_{−a} ∘ MINVERT_{p−q}` applied to the expansion of `g_{a,q}`.
    pub fn via_transforms(&self, order: usize) -> TruncatedSeries<T> {
        let gaq = gab_spec(self.a.clone(), self.q.clone()).expand(order);
        let m = transforms::minvert(&gaq, &(self.p.clone() - self.q.clone()));
        transforms::invert(&m, &-self.a.clone())
    }

    /// Parameters of `Rev(m_{p,q,a}) = m_{−p, q−p, a}`.
    pub fn reversed(&self) -> Self {
        Self::relaxed(
            -self.p.clone(),
            self.q.clone() - self.p.clone(),
            self.a.clone(),
        )
    }

    /// `Rev` of the expansion of `m_{p,q,a}`, computed by series reversion.
    pub fn reversion(&self, order: usize) -> Result<TruncatedSeries<T>, ModelError> {
        Ok(transforms::rev(&self.spec().expand(order))?)
    }
}

/// `g_{a,b} = J(a, a, …; b, b, …)`.
pub fn gab_spec<T: Scalar>(a: T, b: T) -> JFractionSpec<T> {
    JFractionSpec::constant(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use crate::Rational;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn gab_examples() {
        assert_eq!(
            gab_spec(int(0), int(0)).expand(4).coeffs(),
            &ints(&[1, 0, 0, 0, 0])[..]
        );
        assert_eq!(
            gab_spec(int(1), int(1)).expand(6).coeffs(),
            &ints(&[1, 1, 2, 4, 9, 21, 51])[..]
        );
        // g = 1/(1 − 2x − 3x² g), i.e. g = 1 + 2x·g + 3x²·g², solved term by term
        let mut g = vec![1i64];
        for n in 1..6usize {
            let conv: i64 = (0..n.saturating_sub(1)).map(|k| g[k] * g[n - 2 - k]).sum();
            g.push(2 * g[n - 1] + 3 * conv);
        }
        assert_eq!(g, vec![1, 2, 7, 26, 106, 452]);
        assert_eq!(gab_spec(int(2), int(3)).expand(5).coeffs(), &ints(&g)[..]);
    }

    #[test]
    fn spidernet_validation_and_strata() {
        assert!(SpidernetParams::new(0, 3, 1).is_err());
        assert!(SpidernetParams::new(1, 1, 1).is_err());
        assert!(SpidernetParams::new(1, 3, 3).is_err());
        assert!(SpidernetParams::new(1, 3, 0).is_err());
        let s = SpidernetParams::new(4, 6, 3).unwrap();
        assert_eq!(s.stratum_size(0), BigUint::from(1u32));
        assert_eq!(s.stratum_size(3), BigUint::from(36u32));
        let r = SpidernetParams::new(1, 3, 1).unwrap();
        assert!((1..10).all(|k| r.stratum_size(k) == BigUint::from(1u32)));
    }

    #[test]
    fn spidernet_specs() {
        let s463 = SpidernetParams::new(4, 6, 3).unwrap().spec::<Rational>();
        assert_eq!(
            s463,
            JFractionSpec::new(ints(&[0]), int(2), ints(&[4]), int(3))
        );
        assert_eq!(
            s463.expand(8).coeffs(),
            &ints(&[1, 0, 4, 8, 44, 168, 776, 3472, 16204])[..]
        );
        let s131 = SpidernetParams::new(1, 3, 1).unwrap().spec::<Rational>();
        assert_eq!(
            s131.expand(8).coeffs(),
            &ints(&[1, 0, 1, 1, 3, 6, 15, 36, 91])[..]
        );
        let s231 = SpidernetParams::new(2, 3, 1).unwrap().spec::<Rational>();
        assert_eq!(s231.expand(6).coeffs(), &ints(&[1, 0, 2, 2, 8, 16, 46])[..]);
    }

    #[test]
    fn meixner_validation() {
        assert!(MeixnerParams::new(int(0), int(1), int(0)).is_err());
        assert!(MeixnerParams::new(int(1), int(-1), int(0)).is_err());
        let relaxed = MeixnerParams::relaxed(int(-1), int(-2), int(0));
        assert!(relaxed.relaxed);
    }

    #[test]
    fn meixner_fine_and_transform_examples() {
        let fine = MeixnerParams::new(int(1), int(1), int(2)).unwrap();
        assert_eq!(
            fine.spec().expand(8).coeffs(),
            &ints(&[1, 0, 1, 2, 6, 18, 57, 186, 622])[..]
        );
        let m432 = MeixnerParams::new(int(4), int(3), int(2)).unwrap();
        assert_eq!(m432.via_transforms(12), m432.spec().expand(12));
        // p = q: MINVERT parameter is 0
        let pq = MeixnerParams::new(int(3), int(3), int(1)).unwrap();
        let g = gab_spec(int(1), int(3)).expand(10);
        assert_eq!(pq.via_transforms(10), transforms::invert(&g, &int(-1)));
    }

    #[test]
    fn spidernet_functional_equation() {
        // inner h satisfies c x² h² − (1 − (b−1−c) x) h + 1 = 0 and g = 1/(1 − a x² h)
        for (a, b, c) in [(4, 6, 3), (1, 3, 1), (2, 3, 1), (5, 4, 3), (3, 7, 2)] {
            let params = SpidernetParams::new(a, b, c).unwrap();
            let order = 12;
            let flat = int(params.flat_degree() as i64);
            let h = gab_spec(flat.clone(), int(c)).expand(order);
            let h2 = h.mul(&h).unwrap();
            let lin = h.sub(&h.shift_up(1).scale(&flat)).unwrap();
            let lhs = h2.shift_up(2).scale(&int(c)).sub(&lin).unwrap();
            let lhs = lhs.add(&TruncatedSeries::one(order)).unwrap();
            assert_eq!(lhs, TruncatedSeries::zero(order));
            let g = TruncatedSeries::one(order)
                .sub(&h.shift_up(2).scale(&int(a)))
                .unwrap()
                .reciprocal()
                .unwrap();
            assert_eq!(g, params.spec::<Rational>().expand(order));
        }
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rational(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn meixner_moment_polynomials(p in rat(), q in rat(), a in rat()) {
            let m = MeixnerParams::relaxed(p.clone(), q.clone(), a.clone());
            let mu = m.spec().expand(6);
            let a2 = a.clone() * a.clone();
            let expected = [
                int(1),
                int(0),
                p.clone(),
                a.clone() * p.clone(),
                p.clone() * (a2.clone() + p.clone() + q.clone()),
                a.clone() * p.clone() * (a2.clone() + int(2) * p.clone() + int(3) * q.clone()),
                p.clone() * (a2.clone() * a2.clone() + int(3) * a2.clone() * (p.clone() + int(2) * q.clone())
                    + p.clone() * p.clone() + int(2) * p.clone() * q.clone() + int(2) * q.clone() * q.clone()),
            ];
            prop_assert_eq!(mu.coeffs(), &expected[..]);
        }

        #[test]
        fn meixner_reversion_identity(p in rat(), q in rat(), a in rat()) {
            let m = MeixnerParams::relaxed(p, q, a);
            let rev = m.reversion(14).unwrap();
            prop_assert_eq!(&rev, &m.reversed().spec().expand(14));
            prop_assert_eq!(transforms::rev(&rev).unwrap(), m.spec().expand(14));
        }

        #[test]
        fn meixner_from_transforms(p in rat(), q in rat(), a in rat()) {
            let m = MeixnerParams::relaxed(p, q, a);
            prop_assert_eq!(m.via_transforms(14), m.spec().expand(14));
        }

        #[test]
        fn gab_reverts_to_quadratic(a in rat(), b in rat()) {
            let order = 12;
            let rev = transforms::rev(&gab_spec(a.clone(), b.clone()).expand(order)).unwrap();
            let quad = TruncatedSeries::from_prefix(vec![int(1), a, b], order).reciprocal().unwrap();
            prop_assert_eq!(rev, quad);
        }
    }
}
