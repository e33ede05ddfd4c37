//! Polar-angle quadrature grids and Legendre series.
//!
//! Amplitudes are assumed azimuthally symmetric, so a grid only resolves θ.
//! Weights carry the full solid-angle measure (2π · sinθ dθ), which makes
//! `Σ w_k = 4π` for any grid that covers the sphere.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid<T> {
    /// Polar angles in radians, strictly increasing.
    pub nodes: Vec<T>,
    /// Solid-angle weights in sr.
    pub weights: Vec<T>,
}

impl<T: Real> AngleGrid<T> {
    /// Builds a grid without checking invariants; see [`AngleGrid::violations`].
    pub fn from_raw(nodes: Vec<T>, weights: Vec<T>) -> Self {
        Self { nodes, weights }
    }

    /// Gauss–Legendre rule in cosθ with `order` nodes, θ ascending.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("grid order must be at least 1".into()));
        }
        let (xs, ws) = gauss_legendre_nodes::<T>(order);
        let two_pi = T::two_pi();
        // xs descending in cosθ gives θ ascending.
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for (x, w) in xs.into_iter().zip(ws) {
            nodes.push(x.acos());
            weights.push(w * two_pi);
        }
        Ok(Self { nodes, weights })
    }

    /// One node, for purely differential tables.
    pub fn single(theta: T, weight: T) -> Self {
        Self {
            nodes: vec![theta],
            weights: vec![weight],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    /// Index of the node closest to `theta` (radians). Ties go to the lower index.
    pub fn nearest_node(&self, theta: T) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (k, &node) in self.nodes.iter().enumerate() {
            let d = (node - theta).abs();
            match best {
                Some((_, bd)) if d >= bd => {}
                _ => best = Some((k, d)),
            }
        }
        best.map(|(k, _)| k)
    }

    /// Broken grid invariants, as `(invariant name, detail)` pairs.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            out.push(("grid-nonempty", "grid has no nodes".to_string()));
            return out;
        }
        if self.nodes.len() != self.weights.len() {
            out.push((
                "grid-length",
                format!(
                    "{} nodes but {} weights",
                    self.nodes.len(),
                    self.weights.len()
                ),
            ));
        }
        for (k, &w) in self.weights.iter().enumerate() {
            if !w.is_finite() || w <= T::zero() {
                out.push(("weight-positive", format!("weight[{k}] = {w}")));
            }
        }
        let pi = T::PI();
        if self.nodes.len() == 1 {
            let th = self.nodes[0];
            if !(th.is_finite() && th >= T::zero() && th <= pi) {
                out.push(("node-range", format!("node[0] = {th} outside [0, π]")));
            }
            return out;
        }
        for (k, &th) in self.nodes.iter().enumerate() {
            if !(th.is_finite() && th > T::zero() && th < pi) {
                out.push(("node-range", format!("node[{k}] = {th} outside (0, π)")));
            }
        }
        for k in 1..self.nodes.len() {
            if self.nodes[k] <= self.nodes[k - 1] {
                out.push((
                    "node-order",
                    format!("node[{k}] does not exceed node[{}]", k - 1),
                ));
            }
        }
        let four_pi = T::lit(2.0) * T::two_pi();
        let total = self.total_weight();
        if total.is_finite() && (total - four_pi).abs() > T::tol(1e-12) * four_pi {
            out.push((
                "weight-sum",
                format!("weights sum to {total} sr, expected 4π"),
            ));
        }
        out
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes descending.
pub fn gauss_legendre_nodes<T: Real>(order: usize) -> (Vec<T>, Vec<T>) {
    let n = order;
    let nf = T::from_usize(n).unwrap();
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let half = T::lit(0.5);
    let one = T::one();
    for i in 0..n.div_ceil(2) {
        let fi = T::from_usize(i).unwrap();
        let mut x = (T::PI() * (fi + T::lit(0.75)) / (nf + half)).cos();
        let mut dp = one;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            dp = nf * (x * p - p_prev) / (x * x - one);
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - one);
                break;
            }
        }
        let w = T::lit(2.0) / ((one - x * x) * dp * dp);
        xs[i] = x;
        ws[i] = w;
        xs[n - 1 - i] = -x;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = T::zero();
    }
    (xs, ws)
}

/// (P_n(x), P_{n-1}(x)) by upward recurrence.
fn legendre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for l in 1..n {
        let lf = T::from_usize(l).unwrap();
        let next = ((lf + lf + T::one()) * x * p - lf * p_prev) / (lf + T::one());
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Evaluates Σ_l c_l P_l(x).
pub fn legendre_series<T: Real>(coeffs: &[T], x: T) -> T {
    let mut sum = T::zero();
    let mut p_prev = T::one();
    let mut p = x;
    for (l, &c) in coeffs.iter().enumerate() {
        let pl = match l {
            0 => T::one(),
            1 => x,
            _ => {
                let lf = T::from_usize(l - 1).unwrap();
                let next = ((lf + lf + T::one()) * x * p - lf * p_prev) / (lf + T::one());
                p_prev = p;
                p = next;
                next
            }
        };
        sum = sum + c * pl;
    }
    sum
}

/// ∫ (Σ c_l P_l)² dΩ over the full sphere, by Legendre orthogonality.
pub fn legendre_series_norm<T: Real>(coeffs: &[T]) -> T {
    let mut acc = T::zero();
    for (l, &c) in coeffs.iter().enumerate() {
        let lf = T::from_usize(l).unwrap();
        acc = acc + c * c * T::lit(2.0) / (lf + lf + T::one());
    }
    acc * T::two_pi()
}
