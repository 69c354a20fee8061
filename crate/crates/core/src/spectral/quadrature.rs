//! Gauss–Legendre rules on `[-1, 1]` and adaptive composite rules built
//! from them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule, nodes ascending.
///
/// Newton iteration on `P_n` from the Chebyshev-like initial guesses; the
/// derivative comes from `(1 − x²) P_n' = n (P_{n−1} − x P_n)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            dp = n as f64 * (p_prev - x * p) / (1.0 - x * x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (p, p_prev) = legendre_pair(n, x);
                dp = n as f64 * (p_prev - x * p) / (1.0 - x * x);
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule for `f` over the union of `panels`.
///
/// Each panel carries an error estimate: the difference between its
/// `order`-point value and the sum over its two halves. The panel with the
/// largest estimate is bisected until the estimates sum to at most `tol` or
/// `max_panels` is reached. The result lists `(t, w·f(t))` over the halves
/// of every final panel.
pub fn adaptive_rule(
    f: impl Fn(f64) -> f64,
    panels: &[(f64, f64)],
    order: usize,
    tol: f64,
    max_panels: usize,
) -> Vec<(f64, f64)> {
    let (nodes, weights) = gauss_legendre(order);
    let apply = |a: f64, b: f64| -> Vec<(f64, f64)> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        nodes
            .iter()
            .zip(&weights)
            .map(|(&t, &w)| {
                let x = mid + half * t;
                (x, half * w * f(x))
            })
            .collect()
    };
    let sum = |rule: &[(f64, f64)]| rule.iter().map(|p| p.1).sum::<f64>();
    let assess = |a: f64, b: f64, coarse: f64| {
        let m = 0.5 * (a + b);
        let (left, right) = (apply(a, m), apply(m, b));
        Panel {
            error: (sum(&left) + sum(&right) - coarse).abs(),
            a,
            b,
            left,
            right,
        }
    };
    let mut heap: BinaryHeap<Panel> = panels
        .iter()
        .map(|&(a, b)| assess(a, b, sum(&apply(a, b))))
        .collect();
    let mut total_error: f64 = heap.iter().map(|p| p.error).sum();
    while total_error > tol && heap.len() < max_panels {
        let worst = heap.pop().expect("at least one panel");
        total_error -= worst.error;
        let m = 0.5 * (worst.a + worst.b);
        for (a, b, half) in [(worst.a, m, &worst.left), (m, worst.b, &worst.right)] {
            let p = assess(a, b, sum(half));
            total_error += p.error;
            heap.push(p);
        }
    }
    let mut out: Vec<(f64, f64)> = heap
        .into_iter()
        .flat_map(|p| p.left.into_iter().chain(p.right))
        .collect();
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

struct Panel {
    error: f64,
    a: f64,
    b: f64,
    left: Vec<(f64, f64)>,
    right: Vec<(f64, f64)>,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (p0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}
