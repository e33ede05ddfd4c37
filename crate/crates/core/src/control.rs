//! Extrema of the controlled cross section and of cross-section ratios.
//!
//! The cross section is the Hermitian form c†Mc on normalized c, so its
//! extrema over (s, φ12) are the eigenvalues of M. A ratio (c†Ac)/(c†Bc)
//! is a generalized Rayleigh quotient whose extrema solve
//! det(A − λB) = 0, a quadratic in λ for 2×2 matrices:
//!
//! ```text
//!     det(B) λ² − [a11 b22 + a22 b11 − 2 Re(a12 b12*)] λ + det(A) = 0
//! ```
//!
//! Both are solved in closed form. [`grid_oracle`] is an exhaustive lattice
//! search kept as an independent check.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{phase_distance, Real};
use crate::xsection::{ControlParams, XsecMatrix};

/// det B ≤ this · tr(B)² marks a singular ratio denominator.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-14;

/// Relative residual below which A is treated as κB.
pub const PROPORTIONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ControlRange<T> {
    pub min_value: T,
    pub max_value: T,
    pub params_at_min: ControlParams<T>,
    pub params_at_max: ControlParams<T>,
    /// The maximum diverges; `params_at_max` then zeroes the denominator.
    pub unbounded_max: bool,
    /// The objective does not depend on (s, φ12).
    pub degenerate: bool,
}

impl<T: Real> ControlRange<T> {
    /// max / min, infinite when the maximum is unbounded or the minimum is zero.
    pub fn factor(&self) -> T {
        if self.unbounded_max || self.min_value <= T::zero() {
            T::infinity()
        } else {
            self.max_value / self.min_value
        }
    }

    /// Distance between the two achieving points in (s, φ12/2π), with the
    /// phase difference taken on the circle. Informational only.
    pub fn separation(&self) -> T {
        let ds = self.params_at_max.s() - self.params_at_min.s();
        let dphi =
            phase_distance(self.params_at_max.phi12(), self.params_at_min.phi12()) / T::two_pi();
        (ds * ds + dphi * dphi).sqrt()
    }

    fn flat(value: T) -> Self {
        Self {
            min_value: value,
            max_value: value,
            params_at_min: canonical_min(),
            params_at_max: canonical_max(),
            unbounded_max: false,
            degenerate: true,
        }
    }
}

fn canonical_min<T: Real>() -> ControlParams<T> {
    ControlParams::from_amplitudes(Complex::from(T::one()), Complex::from(T::zero()))
}

fn canonical_max<T: Real>() -> ControlParams<T> {
    ControlParams::from_amplitudes(Complex::from(T::zero()), Complex::from(T::one()))
}

/// Picks the better-conditioned of two candidate null vectors.
fn pick<T: Real>(a: [Complex<T>; 2], b: [Complex<T>; 2]) -> Option<ControlParams<T>> {
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let v = if na >= nb { a } else { b };
    if na.max(nb) > T::zero() {
        Some(ControlParams::from_amplitudes(v[0], v[1]))
    } else {
        None
    }
}

struct Eigen2<T> {
    lower: T,
    upper: T,
    at_lower: Option<ControlParams<T>>,
    at_upper: Option<ControlParams<T>>,
}

/// Eigenpairs of [[p, q], [q*, r]] without cancellation in the shifts.
fn hermitian_eigen<T: Real>(p: T, r: T, q: Complex<T>) -> Eigen2<T> {
    let two = T::lit(2.0);
    let diff = p - r;
    let qq = q.norm_sqr();
    let disc = (diff * diff + T::lit(4.0) * qq).sqrt();
    let half_plus = (disc + diff.abs()) / two;
    let half_minus = if disc + diff.abs() > T::zero() {
        two * qq / (disc + diff.abs())
    } else {
        T::zero()
    };
    let upper = (p + r + disc) / two;
    let det = p * r - qq;
    let lower = if upper > T::zero() {
        det / upper
    } else {
        T::zero()
    };
    // (λ − p, λ − r) for each eigenvalue.
    let (up_p, up_r, lo_p, lo_r) = if diff >= T::zero() {
        (half_minus, half_plus, -half_plus, -half_minus)
    } else {
        (half_plus, half_minus, -half_minus, -half_plus)
    };
    let vec_for = |dp: T, dr: T| pick([q, Complex::from(dp)], [Complex::from(dr), q.conj()]);
    Eigen2 {
        lower,
        upper,
        at_lower: vec_for(lo_p, lo_r),
        at_upper: vec_for(up_p, up_r),
    }
}

/// Exact extrema of the controlled cross section over (s, φ12).
pub fn sigma_extrema<T: Real>(m: &XsecMatrix<T>) -> ControlRange<T> {
    let (p, r, q) = (m.sigma11(), m.sigma22(), m.sigma12());
    let trace = p + r;
    let tol = T::tol(1e-12) * trace;
    if (p - r).abs() <= tol && q.norm() <= tol {
        let mut flat = ControlRange::flat(p);
        flat.max_value = r;
        return flat;
    }
    let e = hermitian_eigen(p, r, q);
    ControlRange {
        min_value: e.lower,
        max_value: e.upper,
        params_at_min: e.at_lower.unwrap_or_else(canonical_min),
        params_at_max: e.at_upper.unwrap_or_else(canonical_max),
        unbounded_max: false,
        degenerate: false,
    }
}

/// Extrema of σ_num / σ_den with the default singularity threshold.
pub fn ratio_extrema<T: Real>(num: &XsecMatrix<T>, den: &XsecMatrix<T>) -> Result<ControlRange<T>> {
    ratio_extrema_with_tol(num, den, T::lit(DEFAULT_SINGULAR_TOL))
}

/// Extrema of σ_num / σ_den; `tol_singular` sets when det(den) counts as zero.
pub fn ratio_extrema_with_tol<T: Real>(
    num: &XsecMatrix<T>,
    den: &XsecMatrix<T>,
    tol_singular: T,
) -> Result<ControlRange<T>> {
    let (a11, a22, a12) = (num.sigma11(), num.sigma22(), num.sigma12());
    let (b11, b22, b12) = (den.sigma11(), den.sigma22(), den.sigma12());
    let tr_b = b11 + b22;
    if !(tr_b > T::zero()) {
        return Err(Error::ZeroDenominator);
    }
    let tr_a = a11 + a22;
    let kappa = tr_a / tr_b;
    let residual = (a11 - kappa * b11).abs()
        + (a22 - kappa * b22).abs()
        + T::lit(2.0) * (a12 - b12 * kappa).norm();
    if residual <= T::tol(PROPORTIONAL_TOL) * (tr_a + kappa * tr_b) || tr_a <= T::zero() {
        return Ok(ControlRange::flat(kappa));
    }

    let det_a = num.determinant();
    let det_b = den.determinant();
    let mixed = a11 * b22 + a22 * b11 - T::lit(2.0) * (a12 * b12.conj()).re;
    let singular = det_b <= tol_singular * tr_b * tr_b;
    let det_b_eff = if singular { T::zero() } else { det_b };
    let disc = (mixed * mixed - T::lit(4.0) * det_a * det_b_eff)
        .max(T::zero())
        .sqrt();
    let denom = mixed + disc;
    let lower = if denom > T::zero() {
        T::lit(2.0) * det_a / denom
    } else {
        T::zero()
    };

    let at_lower = generalized_vector(num, den, lower).unwrap_or_else(canonical_min);
    if singular {
        let null = hermitian_eigen(b11, b22, b12)
            .at_lower
            .unwrap_or_else(canonical_max);
        return Ok(ControlRange {
            min_value: lower,
            max_value: T::infinity(),
            params_at_min: at_lower,
            params_at_max: null,
            unbounded_max: true,
            degenerate: false,
        });
    }
    let upper = denom / (T::lit(2.0) * det_b);
    Ok(ControlRange {
        min_value: lower,
        max_value: upper,
        params_at_min: at_lower,
        params_at_max: generalized_vector(num, den, upper).unwrap_or_else(canonical_max),
        unbounded_max: false,
        degenerate: false,
    })
}

/// Null vector of A − λB.
fn generalized_vector<T: Real>(
    a: &XsecMatrix<T>,
    b: &XsecMatrix<T>,
    lambda: T,
) -> Option<ControlParams<T>> {
    let d11 = a.sigma11() - lambda * b.sigma11();
    let d22 = a.sigma22() - lambda * b.sigma22();
    let d12 = a.sigma12() - b.sigma12() * lambda;
    pick(
        [d12, Complex::from(-d11)],
        [Complex::from(d22), -d12.conj()],
    )
}

/// Values at s = 0 and s = 1: the cross sections of the two pure initial states.
pub fn noncoherent_limits<T: Real>(m: &XsecMatrix<T>) -> (T, T) {
    (m.sigma11(), m.sigma22())
}

/// (min, max) of the ratio over the two pure initial states.
pub fn noncoherent_ratio_limits<T: Real>(num: &XsecMatrix<T>, den: &XsecMatrix<T>) -> (T, T) {
    let (a1, a2) = noncoherent_limits(num);
    let (b1, b2) = noncoherent_limits(den);
    let r1 = pure_ratio(a1, b1);
    let r2 = pure_ratio(a2, b2);
    (r1.min(r2), r1.max(r2))
}

fn pure_ratio<T: Real>(a: T, b: T) -> T {
    if b > T::zero() {
        a / b
    } else if a > T::zero() {
        T::infinity()
    } else {
        T::nan()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub range: ControlRange<T>,
    /// Ratio lattice points skipped because the denominator fell below 1e-300.
    pub skipped: usize,
}

/// Exhaustive search on s ∈ {0, …, 1} (n_s points, endpoints included) by
/// φ12 ∈ {0, 2π/n_phi, …} (n_phi points, 2π excluded).
///
/// The objective is evaluated as c†Mc directly, not through the (s, φ12)
/// closed form. Ties, up to a few ulps of rounding in the phasor, keep the
/// lexicographically smaller (s, φ12) index.
pub fn grid_oracle<T: Real>(
    num: &XsecMatrix<T>,
    den: Option<&XsecMatrix<T>>,
    n_s: usize,
    n_phi: usize,
) -> Result<OracleResult<T>> {
    if n_s < 2 || n_phi < 2 {
        return Err(Error::InvalidInput(format!(
            "oracle lattice {n_s}x{n_phi} is too small"
        )));
    }
    if let Some(b) = den {
        if !(b.trace() > T::zero()) {
            return Err(Error::ZeroDenominator);
        }
    }
    let tiny = T::from_f64(1e-300).unwrap_or_else(T::min_positive_value);
    let phases: Vec<(T, Complex<T>)> = (0..n_phi)
        .map(|j| {
            let phi = T::two_pi() * T::from_usize(j).unwrap() / T::from_usize(n_phi).unwrap();
            (phi, Complex::from_polar(T::one(), phi))
        })
        .collect();
    let last = T::from_usize(n_s - 1).unwrap();
    let ulps = T::lit(8.0) * T::epsilon();

    let mut best_min: Option<(T, usize, usize)> = None;
    let mut best_max: Option<(T, usize, usize)> = None;
    let mut skipped = 0usize;
    for i in 0..n_s {
        let s = if i == n_s - 1 {
            T::one()
        } else {
            T::from_usize(i).unwrap() / last
        };
        let c1 = Complex::from((T::one() - s).sqrt());
        let mag2 = s.sqrt();
        for (j, &(_, unit)) in phases.iter().enumerate() {
            let c = [c1, unit * mag2];
            let value = match den {
                None => num.quadratic_form(c),
                Some(b) => {
                    let d = b.quadratic_form(c);
                    if d < tiny {
                        skipped += 1;
                        continue;
                    }
                    num.quadratic_form(c) / d
                }
            };
            if best_min.is_none_or(|(v, _, _)| value < v - ulps * v.abs()) {
                best_min = Some((value, i, j));
            }
            if best_max.is_none_or(|(v, _, _)| value > v + ulps * v.abs()) {
                best_max = Some((value, i, j));
            }
        }
    }
    let params = |i: usize, j: usize| {
        let s = if i == n_s - 1 {
            T::one()
        } else {
            T::from_usize(i).unwrap() / last
        };
        ControlParams::new(s, phases[j].0).expect("lattice point in range")
    };
    let (Some((lo, li, lj)), Some((hi, hi_i, hj))) = (best_min, best_max) else {
        return Err(Error::ZeroDenominator);
    };
    let degenerate = den.is_some() && hi - lo <= T::tol(1e-10) * hi.abs().max(lo.abs());
    Ok(OracleResult {
        range: ControlRange {
            min_value: lo,
            max_value: hi,
            params_at_min: params(li, lj),
            params_at_max: params(hi_i, hj),
            unbounded_max: false,
            degenerate,
        },
        skipped,
    })
}
