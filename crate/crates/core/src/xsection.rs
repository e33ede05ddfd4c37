//! Interference cross-section matrices and the controlled cross section.
//!
//! For a superposition c1|1⟩ + c2|2⟩ the cross section into one product
//! channel is the Hermitian form c†Mc with
//!
//! ```text
//!     M = [[σ11, σ12], [σ12*, σ22]],   σ(ij) = Σ_n ∫ f*_{n,i} f_{n,j} dΩ
//! ```
//!
//! `σ21` is never stored. Writing c1 = sqrt(1−s), c2 = sqrt(s)·e^{iφ12}
//! turns the form into
//! `(1−s)σ11 + sσ22 + 2 sqrt(s(1−s)) |σ12| cos(Arg σ12 + φ12)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{wrap_phase, Real};
use crate::table::AmplitudeTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XsecKind {
    Integral,
    /// Angle-resolved at one grid node; units Å²/sr.
    Differential {
        node: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct XsecMatrix<T> {
    channel: String,
    kind: XsecKind,
    sigma11: T,
    sigma22: T,
    sigma12: Complex<T>,
}

impl<T: Real> XsecMatrix<T> {
    /// Checked constructor for matrices that did not come from a table.
    ///
    /// Diagonal entries within 1e-12 below zero are clamped to zero; larger
    /// negative values, non-finite entries and violations of the Schwartz
    /// inequality are rejected.
    pub fn new(
        channel: impl Into<String>,
        kind: XsecKind,
        sigma11: T,
        sigma22: T,
        sigma12: Complex<T>,
    ) -> Result<Self> {
        let finite = sigma11.is_finite()
            && sigma22.is_finite()
            && sigma12.re.is_finite()
            && sigma12.im.is_finite();
        if !finite {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let slack = T::tol(1e-12);
        let clamp = |x: T, name: &str| -> Result<T> {
            if x >= T::zero() {
                Ok(x)
            } else if x >= -slack {
                Ok(T::zero())
            } else {
                Err(Error::InvalidMatrix(format!("{name} = {x} is negative")))
            }
        };
        let sigma11 = clamp(sigma11, "sigma11")?;
        let sigma22 = clamp(sigma22, "sigma22")?;
        let bound = (sigma11 * sigma22).sqrt() + T::tol(1e-10) * (sigma11 + sigma22);
        if sigma12.norm() > bound {
            return Err(Error::InvalidMatrix(format!(
                "|sigma12| = {} exceeds sqrt(sigma11 sigma22) = {}",
                sigma12.norm(),
                (sigma11 * sigma22).sqrt()
            )));
        }
        Ok(Self::from_gram(
            channel.into(),
            kind,
            sigma11,
            sigma22,
            sigma12,
        ))
    }

    /// Unlabelled integral matrix, convenient for tests and examples.
    pub fn from_elements(sigma11: T, sigma22: T, sigma12: Complex<T>) -> Result<Self> {
        Self::new("", XsecKind::Integral, sigma11, sigma22, sigma12)
    }

    fn from_gram(
        channel: String,
        kind: XsecKind,
        sigma11: T,
        sigma22: T,
        sigma12: Complex<T>,
    ) -> Self {
        Self {
            channel,
            kind,
            sigma11,
            sigma22,
            sigma12,
        }
    }

    pub fn channel(&self) -> &str {
        &self.channel
    }

    pub fn kind(&self) -> XsecKind {
        self.kind
    }

    pub fn sigma11(&self) -> T {
        self.sigma11
    }

    pub fn sigma22(&self) -> T {
        self.sigma22
    }

    pub fn sigma12(&self) -> Complex<T> {
        self.sigma12
    }

    pub fn trace(&self) -> T {
        self.sigma11 + self.sigma22
    }

    pub fn determinant(&self) -> T {
        self.sigma11 * self.sigma22 - self.sigma12.norm_sqr()
    }

    /// c†Mc evaluated directly in complex arithmetic.
    pub fn quadratic_form(&self, c: [Complex<T>; 2]) -> T {
        let [c1, c2] = c;
        let cross = c1.conj() * self.sigma12 * c2;
        self.sigma11 * c1.norm_sqr() + self.sigma22 * c2.norm_sqr() + cross.re + cross.re
    }

    /// The same matrix with every entry multiplied by `factor` (≥ 0).
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            channel: self.channel.clone(),
            kind: self.kind,
            sigma11: self.sigma11 * factor,
            sigma22: self.sigma22 * factor,
            sigma12: self.sigma12 * factor,
        }
    }

    /// U†MU for a 2×2 unitary `u` given row-major.
    pub fn transformed(&self, u: [[Complex<T>; 2]; 2]) -> Self {
        let m = [
            [Complex::from(self.sigma11), self.sigma12],
            [self.sigma12.conj(), Complex::from(self.sigma22)],
        ];
        let mut out = [[Complex::from(T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = Complex::from(T::zero());
                for a in 0..2 {
                    for b in 0..2 {
                        acc = acc + u[a][i].conj() * m[a][b] * u[b][j];
                    }
                }
                *cell = acc;
            }
        }
        Self {
            channel: self.channel.clone(),
            kind: self.kind,
            sigma11: out[0][0].re.max(T::zero()),
            sigma22: out[1][1].re.max(T::zero()),
            sigma12: out[0][1],
        }
    }
}

/// A point (s, φ12) in control space; φ12 is kept in [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlParams<T> {
    s: T,
    phi12: T,
}

impl<T: Real> ControlParams<T> {
    pub fn new(s: T, phi12: T) -> Result<Self> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(Error::InvalidInput(format!("s = {s} outside [0, 1]")));
        }
        if !phi12.is_finite() {
            return Err(Error::InvalidInput(format!(
                "phi12 = {phi12} is not finite"
            )));
        }
        Ok(Self {
            s,
            phi12: wrap_phase(phi12),
        })
    }

    /// Parameters of the superposition with (unnormalized) coefficients c1, c2.
    ///
    /// φ12 = Arg(c2/c1), reported as 0 when either coefficient vanishes.
    pub fn from_amplitudes(c1: Complex<T>, c2: Complex<T>) -> Self {
        let n1 = c1.norm_sqr();
        let n2 = c2.norm_sqr();
        let total = n1 + n2;
        let s = if total > T::zero() {
            (n2 / total).min(T::one())
        } else {
            T::zero()
        };
        let phi12 = if n1 > T::zero() && n2 > T::zero() {
            wrap_phase(c2.arg() - c1.arg())
        } else {
            T::zero()
        };
        Self { s, phi12 }
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn phi12(&self) -> T {
        self.phi12
    }

    pub fn phi12_degrees(&self) -> T {
        self.phi12.to_degrees()
    }

    /// Normalized coefficients (sqrt(1−s), sqrt(s)·e^{iφ12}).
    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        [
            Complex::from((T::one() - self.s).sqrt()),
            Complex::from_polar(self.s.sqrt(), self.phi12),
        ]
    }
}

fn lookup<'a, T: Real>(
    t: &'a AmplitudeTable<T>,
    channel: &str,
) -> Result<&'a crate::table::ProductChannel<T>> {
    t.channel(channel)
        .ok_or_else(|| Error::UnknownChannel(channel.to_string()))
}

/// Integral interference matrix for one product channel.
pub fn xsec_matrix<T: Real>(t: &AmplitudeTable<T>, channel: &str) -> Result<XsecMatrix<T>> {
    let ch = lookup(t, channel)?;
    let n_nodes = t.grid.len();
    let mut s11 = T::zero();
    let mut s22 = T::zero();
    let mut s12 = Complex::from(T::zero());
    for (k, &w) in t.grid.weights.iter().enumerate() {
        let (a, b, c) = node_sums(ch, k, n_nodes);
        s11 = s11 + w * a;
        s22 = s22 + w * b;
        s12 = s12 + c * w;
    }
    Ok(XsecMatrix::from_gram(
        channel.to_string(),
        XsecKind::Integral,
        s11,
        s22,
        s12,
    ))
}

/// Differential interference matrix at grid node `node`; no weight applied.
pub fn diff_xsec_matrix<T: Real>(
    t: &AmplitudeTable<T>,
    channel: &str,
    node: usize,
) -> Result<XsecMatrix<T>> {
    let ch = lookup(t, channel)?;
    let n_nodes = t.grid.len();
    if node >= n_nodes {
        return Err(Error::IndexOutOfRange {
            index: node,
            len: n_nodes,
        });
    }
    let (a, b, c) = node_sums(ch, node, n_nodes);
    Ok(XsecMatrix::from_gram(
        channel.to_string(),
        XsecKind::Differential { node },
        a,
        b,
        c,
    ))
}

fn node_sums<T: Real>(
    ch: &crate::table::ProductChannel<T>,
    node: usize,
    n_nodes: usize,
) -> (T, T, Complex<T>) {
    let mut a = T::zero();
    let mut b = T::zero();
    let mut c = Complex::from(T::zero());
    for n in 0..ch.states.len() {
        let [f1, f2] = ch.amplitude(n, node, n_nodes);
        a = a + f1.norm_sqr();
        b = b + f2.norm_sqr();
        c = c + f1.conj() * f2;
    }
    (a, b, c)
}

/// Controlled cross section at `p`.
pub fn evaluate_sigma<T: Real>(m: &XsecMatrix<T>, p: &ControlParams<T>) -> T {
    let s = p.s();
    let one = T::one();
    let two = T::lit(2.0);
    let interference =
        two * (s * (one - s)).sqrt() * m.sigma12.norm() * (m.sigma12.arg() + p.phi12()).cos();
    let value = (one - s) * m.sigma11 + s * m.sigma22 + interference;
    if value < T::zero() && value >= -T::tol(1e-10) * m.trace() {
        T::zero()
    } else {
        value
    }
}

/// |σ12| / sqrt(σ11 σ22), clamped to [0, 1].
pub fn schwartz_ratio<T: Real>(m: &XsecMatrix<T>) -> Result<T> {
    if m.sigma11 <= T::zero() || m.sigma22 <= T::zero() {
        return Err(Error::DegenerateChannel(m.channel.clone()));
    }
    let r = m.sigma12.norm() / (m.sigma11 * m.sigma22).sqrt();
    Ok(r.min(T::one()).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelState;
    use crate::grid::AngleGrid;
    use crate::table::ProductChannel;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn table(weights: Vec<f64>, rows: Vec<Vec<[Complex<f64>; 2]>>) -> AmplitudeTable<f64> {
        let n = weights.len();
        let nodes = (0..n).map(|k| (k as f64 + 0.5) * PI / n as f64).collect();
        let states = (0..rows.len() as u32)
            .map(|v| ChannelState::new("D+HF", v, 0, 0))
            .collect();
        AmplitudeTable {
            energy: 0.3,
            initial: [
                ChannelState::new("F+HD", 0, 0, 0),
                ChannelState::new("F+HD", 0, 1, 0),
            ],
            grid: AngleGrid::from_raw(nodes, weights),
            channels: vec![ProductChannel {
                arrangement: "D+HF".into(),
                states,
                amplitudes: rows.into_iter().flatten().collect(),
            }],
        }
    }

    #[test]
    fn single_term_gram() {
        let t = table(vec![1.0], vec![vec![[c(1.0, 0.0), c(0.0, 1.0)]]]);
        let m = xsec_matrix(&t, "D+HF").unwrap();
        assert_eq!(
            (m.sigma11(), m.sigma22(), m.sigma12()),
            (1.0, 1.0, c(0.0, 1.0))
        );
    }

    #[test]
    fn two_node_hand_sum() {
        let t = table(
            vec![2.0, 3.0],
            vec![vec![
                [c(1.0, 0.0), c(1.0, 0.0)],
                [c(1.0, 0.0), c(-1.0, 0.0)],
            ]],
        );
        let m = xsec_matrix(&t, "D+HF").unwrap();
        assert_eq!(
            (m.sigma11(), m.sigma22(), m.sigma12()),
            (5.0, 5.0, c(-1.0, 0.0))
        );
    }

    #[test]
    fn conj_first_ordering() {
        let t = table(vec![1.0], vec![vec![[c(0.0, 1.0), c(1.0, 0.0)]]]);
        assert_eq!(xsec_matrix(&t, "D+HF").unwrap().sigma12(), c(0.0, -1.0));
    }

    #[test]
    fn differential_single_state() {
        let t = table(vec![4.0 * PI], vec![vec![[c(2.0, 0.0), c(0.0, 0.0)]]]);
        let m = diff_xsec_matrix(&t, "D+HF", 0).unwrap();
        assert_eq!(
            (m.sigma11(), m.sigma22(), m.sigma12()),
            (4.0, 0.0, c(0.0, 0.0))
        );
        assert_eq!(m.kind(), XsecKind::Differential { node: 0 });
        assert!(matches!(
            diff_xsec_matrix(&t, "D+HF", 1),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
        assert!(matches!(
            xsec_matrix(&t, "H+DF"),
            Err(Error::UnknownChannel(_))
        ));
    }

    #[test]
    fn factorized_table_saturates_schwartz() {
        let g = [c(0.3, -1.2), c(2.0, 0.1), c(-0.7, 0.4)];
        let (y1, y2) = (c(0.8, 0.6), c(-0.2, 1.5));
        let rows = vec![
            vec![[g[0] * y1, g[0] * y2], [g[1] * y1, g[1] * y2]],
            vec![[g[2] * y1, g[2] * y2], [g[0] * y1 * 0.5, g[0] * y2 * 0.5]],
        ];
        let t = table(vec![1.5, 2.5], rows);
        let m = xsec_matrix(&t, "D+HF").unwrap();
        assert!(
            (m.sigma12().norm() - (m.sigma11() * m.sigma22()).sqrt()).abs()
                <= 1e-12 * m.sigma12().norm()
        );
        assert!(schwartz_ratio(&m).unwrap() >= 1.0 - 1e-12);
        for node in 0..2 {
            let d = diff_xsec_matrix(&t, "D+HF", node).unwrap();
            assert!(schwartz_ratio(&d).unwrap() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn evaluate_limits() {
        let m = XsecMatrix::from_elements(0.7, 2.3, c(0.4, -0.9)).unwrap();
        for phi in [0.0, 1.0, 4.0] {
            assert_eq!(
                evaluate_sigma(&m, &ControlParams::new(0.0, phi).unwrap()),
                0.7
            );
            assert_eq!(
                evaluate_sigma(&m, &ControlParams::new(1.0, phi).unwrap()),
                2.3
            );
        }
        let m = XsecMatrix::from_elements(1.0, 1.0, c(1.0, 0.0)).unwrap();
        assert!((evaluate_sigma(&m, &ControlParams::new(0.5, 0.0).unwrap()) - 2.0).abs() < 1e-15);
        assert_eq!(
            evaluate_sigma(&m, &ControlParams::new(0.5, PI).unwrap()),
            0.0
        );
    }

    #[test]
    fn schwartz_edge_cases() {
        let m = XsecMatrix::from_elements(1.0, 2.0, c(0.0, 0.0)).unwrap();
        assert_eq!(schwartz_ratio(&m).unwrap(), 0.0);
        let m = XsecMatrix::new("H+DF", XsecKind::Integral, 0.0, 2.0, c(0.0, 0.0)).unwrap();
        assert!(matches!(schwartz_ratio(&m), Err(Error::DegenerateChannel(ch)) if ch == "H+DF"));
    }

    #[test]
    fn checked_constructor() {
        assert_eq!(
            XsecMatrix::from_elements(-1e-13, 1.0, c(0.0, 0.0))
                .unwrap()
                .sigma11(),
            0.0
        );
        assert!(XsecMatrix::from_elements(-1e-6, 1.0, c(0.0, 0.0)).is_err());
        assert!(XsecMatrix::from_elements(1.0, 1.0, c(1.1, 0.0)).is_err());
        assert!(XsecMatrix::from_elements(f64::NAN, 1.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn control_params_normalization() {
        assert!(ControlParams::new(1.5, 0.0).is_err());
        assert!(ControlParams::new(f64::NAN, 0.0).is_err());
        let p = ControlParams::new(0.25, -PI / 2.0).unwrap();
        assert!((p.phi12() - 1.5 * PI).abs() < 1e-15);
        let [c1, c2] = p.amplitudes();
        assert!((c1.norm_sqr() + c2.norm_sqr() - 1.0).abs() < 1e-15);
        let back = ControlParams::from_amplitudes(c1 * 3.0, c2 * 3.0);
        assert!((back.s() - 0.25).abs() < 1e-15 && (back.phi12() - p.phi12()).abs() < 1e-14);
        assert_eq!(
            ControlParams::from_amplitudes(c(0.0, 0.0), c(0.0, 2.0)).phi12(),
            0.0
        );
    }

    #[test]
    fn f32_evaluation() {
        let m = XsecMatrix::<f32>::from_elements(1.0, 4.0, Complex::from_polar(2.0, 0.3)).unwrap();
        let p = ControlParams::new(0.2_f32, PI as f32 - 0.3).unwrap();
        assert!(evaluate_sigma(&m, &p).abs() < 1e-5);
    }
}
