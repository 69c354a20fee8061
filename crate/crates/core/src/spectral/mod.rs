//! Floating-point reconstruction of the measure behind an eventually-constant
//! J-fraction: Stieltjes transform, density on the support cut, atoms, and a
//! quadrature check against the exact moments.
//!
//! The constant tail `(α, β)` closes analytically: its level value solves
//! `β w² − (z − α) w + 1 = 0` on the branch with `w ~ 1/z`. The head levels
//! are folded on top with `G_k = 1/(z − α_k − β_k G_{k+1})`.

pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::jfraction::JFractionSpec;
use crate::scalar::Scalar;

/// Gauss–Legendre order on each panel of the adaptive density quadrature.
pub const PANEL_NODES: usize = 20;
/// Initial panels per side, halving in width toward `θ = ±π/2`.
pub const EDGE_PANELS: usize = 40;
/// Absolute error target for the density mass.
pub const QUADRATURE_TOLERANCE: f64 = 1e-13;
/// Cap on the number of adaptive panels.
pub const MAX_PANELS: usize = 4000;
/// Atoms closer than this are merged.
pub const ATOM_TOLERANCE: f64 = 1e-10;
/// Poles with smaller mass are treated as removable.
pub const MIN_ATOM_WEIGHT: f64 = 1e-12;
/// Distance from the support interval inside which `G` is not evaluated.
pub const CUT_MARGIN: f64 = 1e-12;

const SCAN_POINTS: usize = 20_000;
const EDGE_SCAN_POINTS: usize = 400;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("tail beta must be positive for a continuous spectrum, got {0}")]
    DegenerateTail(f64),
    #[error("G(z) is not defined on the support cut (z = {0})")]
    EvaluationOnCut(Complex64),
    #[error("x = {x} is outside the open support ({lo}, {hi})")]
    OutsideSupport { x: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A measure given by its J-fraction, with atoms already located.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    spec: JFractionSpec<f64>,
    support: (f64, f64),
    atoms: Vec<Atom>,
}

/// Rounds every coefficient to `f64`.
pub fn to_f64_spec<T: Scalar>(spec: &JFractionSpec<T>) -> JFractionSpec<f64> {
    let conv = |v: &[T]| v.iter().map(Scalar::to_f64_lossy).collect();
    JFractionSpec::new(
        conv(&spec.alpha_head),
        spec.alpha_tail.to_f64_lossy(),
        conv(&spec.beta_head),
        spec.beta_tail.to_f64_lossy(),
    )
}

/// `[α − 2√β, α + 2√β]` for the tail `(α, β)`.
pub fn support(spec: &JFractionSpec<f64>) -> Result<(f64, f64), SpectralError> {
    let beta = spec.beta_tail;
    if beta.is_nan() || beta <= 0.0 {
        return Err(SpectralError::DegenerateTail(beta));
    }
    let r = 2.0 * beta.sqrt();
    Ok((spec.alpha_tail - r, spec.alpha_tail + r))
}

/// `G_1` from the tail value, folding levels `head_len()..=1`.
fn fold(spec: &JFractionSpec<f64>, z: Complex64, tail: Complex64) -> Complex64 {
    (1..=spec.head_len())
        .rev()
        .fold(tail, |g, k| (z - spec.alpha(k) - g * spec.beta(k)).inv())
}

/// Stieltjes transform `G(z) = ∫ μ(dt)/(z − t)`.
pub fn stieltjes(spec: &JFractionSpec<f64>, z: Complex64) -> Result<Complex64, SpectralError> {
    let (lo, hi) = support(spec)?;
    if z.im.abs() < CUT_MARGIN && z.re > lo - CUT_MARGIN && z.re < hi + CUT_MARGIN {
        return Err(SpectralError::EvaluationOnCut(z));
    }
    let (alpha, beta) = (spec.alpha_tail, spec.beta_tail);
    let r = 2.0 * beta.sqrt();
    let u = z - alpha;
    // product of principal roots: analytic off [−r, r] and ~ u at infinity
    let s = (u - r).sqrt() * (u + r).sqrt();
    let w = (u - s) / (2.0 * beta);
    Ok(fold(spec, z, w))
}

/// Density of the absolutely continuous part at an interior point of the
/// support, from the boundary value `G(x − i0)`.
pub fn density(spec: &JFractionSpec<f64>, x: f64) -> Result<f64, SpectralError> {
    let (lo, hi) = support(spec)?;
    if !(x > lo && x < hi) {
        return Err(SpectralError::OutsideSupport { x, lo, hi });
    }
    let u = x - spec.alpha_tail;
    let root = (4.0 * spec.beta_tail - u * u).max(0.0).sqrt();
    Ok(boundary_density(spec, x, u, root))
}

/// `Im G(x − i0)/π` given `u = x − α` and `root = √(4β − u²)`.
fn boundary_density(spec: &JFractionSpec<f64>, x: f64, u: f64, root: f64) -> f64 {
    let w = Complex64::new(u, root) / (2.0 * spec.beta_tail);
    let g = fold(spec, Complex64::new(x, 0.0), w);
    (g.im / PI).max(0.0)
}

/// `1/G(x)` on the real axis outside the support, zero exactly at atoms,
/// together with its derivative.
fn reciprocal_real(spec: &JFractionSpec<f64>, x: f64) -> (f64, f64) {
    let (d, slope) = reciprocal_real_at(spec, x);
    if d.is_nan() || slope.is_nan() {
        // an inner level hit an exact zero denominator; the neighbouring
        // float sees the same branch without 0/0
        return reciprocal_real_at(spec, x.next_up());
    }
    (d, slope)
}

fn reciprocal_real_at(spec: &JFractionSpec<f64>, x: f64) -> (f64, f64) {
    let (alpha, beta) = (spec.alpha_tail, spec.beta_tail);
    let u = x - alpha;
    let r = 2.0 * beta.sqrt();
    let s = (u - r).abs().sqrt() * (u + r).abs().sqrt();
    // the root of smaller modulus, and w' from differentiating β w² − u w + 1 = 0
    let w = (u - u.signum() * s) / (2.0 * beta);
    let dw = w / (2.0 * beta * w - u);
    let head = spec.head_len();
    if head == 0 {
        return (1.0 / w, -dw / (w * w));
    }
    let (mut g, mut dg) = (w, dw);
    for k in (2..=head).rev() {
        let next = 1.0 / (x - spec.alpha(k) - spec.beta(k) * g);
        dg = -next * next * (1.0 - spec.beta(k) * dg);
        g = next;
    }
    (
        x - spec.alpha(1) - spec.beta(1) * g,
        1.0 - spec.beta(1) * dg,
    )
}

/// Bound covering every pole: 10 half-widths around the support, widened to
/// the Gershgorin radius of the Jacobi matrix.
pub fn default_search_bound(spec: &JFractionSpec<f64>) -> Result<f64, SpectralError> {
    let (lo, hi) = support(spec)?;
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let levels = spec.head_len() + 2;
    let root = |k: usize| {
        if k == 0 {
            0.0
        } else {
            spec.beta(k).abs().sqrt()
        }
    };
    let gershgorin = (1..=levels)
        .map(|k| spec.alpha(k).abs() + root(k - 1) + root(k))
        .fold(0.0, f64::max);
    Ok((center.abs() + 10.0 * half).max(gershgorin + 1.0))
}

/// Point masses outside the support within `|x| ≤ search_bound`.
///
/// Sign changes of `1/G` on a grid that is denser near the support edges are
/// refined by bisection to full precision; sign changes across poles of `1/G`
/// are rejected. The weight is the residue of `G`, `1/(1/G)'(x₀)`, with the
/// derivative carried exactly through the level recursion; this stays
/// accurate for atoms right next to the support edge.
pub fn find_atoms(
    spec: &JFractionSpec<f64>,
    search_bound: f64,
) -> Result<Vec<Atom>, SpectralError> {
    let (lo, hi) = support(spec)?;
    let mut atoms = Vec::new();
    for (edge, far) in [(lo, -search_bound), (hi, search_bound)] {
        let span = far - edge;
        // the side lies on the far side of the support or is empty
        if span * (edge - 0.5 * (lo + hi)) <= 0.0 {
            continue;
        }
        // fractions of the span: a geometric run hugging the edge, then a
        // quadratic grid
        let mut fractions: Vec<f64> = (0..=EDGE_SCAN_POINTS)
            .map(|k| 1e-14 * 1e10f64.powf(k as f64 / EDGE_SCAN_POINTS as f64))
            .collect();
        fractions.extend((1..=SCAN_POINTS).map(|j| (j as f64 / SCAN_POINTS as f64).powi(2)));
        fractions.sort_by(f64::total_cmp);
        let point = |j: usize| edge + span * fractions[j];
        let mut prev_x = point(0);
        let mut prev_d = reciprocal_real(spec, prev_x).0;
        for j in 1..fractions.len() {
            let x = point(j);
            let d = reciprocal_real(spec, x).0;
            if prev_d.is_finite() && d.is_finite() && prev_d != 0.0 && prev_d.signum() != d.signum()
            {
                if let Some(location) = bisect(spec, prev_x, x, prev_d) {
                    let weight = atom_weight(spec, location);
                    if weight >= MIN_ATOM_WEIGHT {
                        atoms.push(Atom { location, weight });
                    }
                }
            } else if d == 0.0 {
                let weight = atom_weight(spec, x);
                if weight >= MIN_ATOM_WEIGHT {
                    atoms.push(Atom {
                        location: x,
                        weight,
                    });
                }
            }
            prev_x = x;
            prev_d = d;
        }
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    atoms.dedup_by(|a, b| (a.location - b.location).abs() < 10.0 * ATOM_TOLERANCE);
    Ok(atoms)
}

fn bisect(spec: &JFractionSpec<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Option<f64> {
    loop {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = reciprocal_real(spec, m).0;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let m = 0.5 * (a + b);
    // a pole of 1/G also flips the sign; there |1/G| is large, not small
    (reciprocal_real(spec, m).0.abs() < 1e-4).then_some(m)
}

fn atom_weight(spec: &JFractionSpec<f64>, x0: f64) -> f64 {
    1.0 / reciprocal_real(spec, x0).1.abs()
}

impl SpectralModel {
    /// Builds the model and locates atoms within [`default_search_bound`].
    pub fn new<T: Scalar>(spec: &JFractionSpec<T>) -> Result<Self, SpectralError> {
        let spec = to_f64_spec(spec);
        let bound = default_search_bound(&spec)?;
        Self::with_search_bound(spec, bound)
    }

    pub fn with_search_bound(
        spec: JFractionSpec<f64>,
        search_bound: f64,
    ) -> Result<Self, SpectralError> {
        let support = support(&spec)?;
        let atoms = find_atoms(&spec, search_bound)?;
        Ok(Self {
            spec,
            support,
            atoms,
        })
    }

    pub fn spec(&self) -> &JFractionSpec<f64> {
        &self.spec
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64, SpectralError> {
        stieltjes(&self.spec, z)
    }

    pub fn density(&self, x: f64) -> Result<f64, SpectralError> {
        density(&self.spec, x)
    }

    /// Quadrature nodes `x_i` with weights `c_i` such that
    /// `∫ f(x)·density(x) dx ≈ Σ c_i f(x_i)`, via `x = α + 2√β sin θ`.
    ///
    /// The panels are refined adaptively on the density itself. The initial
    /// partition already shrinks geometrically toward both edges, where
    /// poles just outside the support make the density spike.
    pub fn continuous_rule(&self) -> Vec<(f64, f64)> {
        let half_pi = 0.5 * PI;
        let mut cuts: Vec<f64> = (1..=EDGE_PANELS)
            .map(|k| half_pi * 0.5f64.powi(k as i32))
            .collect();
        cuts.push(0.0);
        let mut breaks: Vec<f64> = cuts.iter().map(|d| -half_pi + d).collect();
        breaks.extend([-0.25 * PI, 0.0, 0.25 * PI]);
        breaks.extend(cuts.iter().map(|d| half_pi - d));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let panels: Vec<(f64, f64)> = breaks.windows(2).map(|p| (p[0], p[1])).collect();

        let r = 2.0 * self.spec.beta_tail.sqrt();
        let alpha = self.spec.alpha_tail;
        // the Jacobian r·cos θ is folded into the integrand
        let mass = |theta: f64| {
            let (u, root) = (r * theta.sin(), r * theta.cos());
            root * boundary_density(&self.spec, alpha + u, u, root)
        };
        quadrature::adaptive_rule(mass, &panels, PANEL_NODES, QUADRATURE_TOLERANCE, MAX_PANELS)
            .into_iter()
            .map(|(theta, c)| (alpha + r * theta.sin(), c))
            .collect()
    }

    /// `μ̂_0..=μ̂_{n_max}`: quadrature over the density plus the atoms.
    pub fn moments(&self, n_max: usize) -> Vec<f64> {
        let points = self
            .continuous_rule()
            .into_iter()
            .chain(self.atoms.iter().map(|a| (a.location, a.weight)));
        let mut out = vec![0.0; n_max + 1];
        for (x, c) in points {
            let mut p = c;
            for m in out.iter_mut() {
                *m += p;
                p *= x;
            }
        }
        out
    }

    pub fn total_mass(&self) -> f64 {
        self.moments(0)[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub exact: f64,
    pub approx: f64,
    /// `|μ̂ − μ| / max(|μ|, 1)`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    pub atoms: Vec<Atom>,
    pub max_error: f64,
    pub tolerance: f64,
}

impl MomentReport {
    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }
}

/// Compares reconstructed moments with the exact expansion of `spec`.
pub fn verify_moments<T: Scalar>(
    spec: &JFractionSpec<T>,
    n_max: usize,
    tol: f64,
) -> Result<MomentReport, SpectralError> {
    let model = SpectralModel::new(spec)?;
    let approx = model.moments(n_max);
    let exact = spec.expand(n_max);
    let rows: Vec<MomentRow> = exact
        .coeffs()
        .iter()
        .zip(approx)
        .enumerate()
        .map(|(n, (mu, approx))| {
            let exact = mu.to_f64_lossy();
            let error = (approx - exact).abs() / exact.abs().max(1.0);
            MomentRow {
                n,
                exact,
                approx,
                error,
            }
        })
        .collect();
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    Ok(MomentReport {
        rows,
        atoms: model.atoms.clone(),
        max_error,
        tolerance: tol,
    })
}
