mod common;

use cohres::{
    diff_xsec_matrix, evaluate_sigma, schwartz_ratio, xsec_matrix, Complex64, ControlParams,
    XsecMatrix,
};
use common::{rng, CH_A};
use proptest::prelude::*;

/// Gram sums accumulated directly from the table.
fn gram(t: &cohres::AmplitudeTable<f64>) -> (f64, f64, Complex64) {
    let ch = &t.channels[0];
    let n = t.grid.len();
    let (mut s11, mut s22, mut s12) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    for st in 0..ch.states.len() {
        for k in 0..n {
            let w = t.grid.weights[k];
            let [f1, f2] = ch.amplitude(st, k, n);
            s11 += w * f1.norm_sqr();
            s22 += w * f2.norm_sqr();
            s12 += f1.conj() * f2 * w;
        }
    }
    (s11, s22, s12)
}

fn min_eigenvalue(m: &XsecMatrix<f64>) -> f64 {
    let (a, d, b) = (m.sigma11(), m.sigma22(), m.sigma12().norm());
    0.5 * ((a + d) - ((a - d).powi(2) + 4.0 * b * b).sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gram_matrix_is_hermitian_psd(seed in any::<u64>(), states in 1usize..=20, nodes in 1usize..=64) {
        let t = common::random_table(&mut rng(seed), states, nodes);
        let m = xsec_matrix(&t, CH_A).unwrap();
        let (s11, s22, s12) = gram(&t);
        let tr = m.trace();
        prop_assert!((m.sigma11() - s11).abs() <= 1e-12 * tr);
        prop_assert!((m.sigma22() - s22).abs() <= 1e-12 * tr);
        prop_assert!((m.sigma12() - s12).norm() <= 1e-12 * tr);
        prop_assert!(min_eigenvalue(&m) >= -1e-10 * tr);
        let rho = schwartz_ratio(&m).unwrap();
        prop_assert!((0.0..=1.0).contains(&rho));
        prop_assert!(m.sigma12().norm() <= (m.sigma11() * m.sigma22()).sqrt() * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_equals_quadratic_form(seed in any::<u64>(), s in 0.0f64..=1.0, phi in 0.0f64..std::f64::consts::TAU) {
        let m = common::random_psd(&mut rng(seed));
        let p = ControlParams::new(s, phi).unwrap();
        let direct = m.quadratic_form(p.amplitudes());
        let closed = evaluate_sigma(&m, &p);
        prop_assert!((direct - closed).abs() <= 1e-12 * m.trace(), "{direct} vs {closed}");
    }

    #[test]
    fn scaling_amplitudes_scales_matrix(seed in any::<u64>(), mag in 0.01f64..100.0, arg in -3.2f64..3.2) {
        let mut t = common::random_table(&mut rng(seed), 5, 16);
        let m = xsec_matrix(&t, CH_A).unwrap();
        let z = Complex64::from_polar(mag, arg);
        for pair in &mut t.channels[0].amplitudes {
            pair[0] *= z;
            pair[1] *= z;
        }
        let mz = xsec_matrix(&t, CH_A).unwrap();
        let k = z.norm_sqr();
        prop_assert!(common::rel(mz.sigma11(), k * m.sigma11()) <= 1e-12);
        prop_assert!(common::rel(mz.sigma22(), k * m.sigma22()) <= 1e-12);
        prop_assert!((mz.sigma12() - m.sigma12() * k).norm() <= 1e-12 * mz.trace());
        prop_assert!(cohres::scalar::phase_distance(mz.sigma12().arg(), m.sigma12().arg()) <= 1e-9);
    }

    #[test]
    fn weighted_differential_sum_is_integral(seed in any::<u64>(), states in 1usize..=8, nodes in 1usize..=48) {
        let t = common::random_table(&mut rng(seed), states, nodes);
        let m = xsec_matrix(&t, CH_A).unwrap();
        let (mut s11, mut s22, mut s12) = (0.0, 0.0, Complex64::new(0.0, 0.0));
        for k in 0..nodes {
            let d = diff_xsec_matrix(&t, CH_A, k).unwrap();
            let w = t.grid.weights[k];
            s11 += w * d.sigma11();
            s22 += w * d.sigma22();
            s12 += d.sigma12() * w;
        }
        let tr = m.trace();
        prop_assert!((s11 - m.sigma11()).abs() <= 1e-12 * tr);
        prop_assert!((s22 - m.sigma22()).abs() <= 1e-12 * tr);
        prop_assert!((s12 - m.sigma12()).norm() <= 1e-12 * tr);
    }

    #[test]
    fn factorized_tables_reach_schwartz_equality(seed in any::<u64>()) {
        let (_, t) = common::random_pure_table(&mut rng(seed));
        for ch in t.channel_labels() {
            prop_assert!(schwartz_ratio(&xsec_matrix(&t, ch).unwrap()).unwrap() >= 1.0 - 1e-12);
            for k in 0..t.grid.len() {
                let d = diff_xsec_matrix(&t, ch, k).unwrap();
                if d.sigma11() > 0.0 && d.sigma22() > 0.0 {
                    prop_assert!(schwartz_ratio(&d).unwrap() >= 1.0 - 1e-12);
                }
            }
        }
    }
}

#[test]
fn diff_matrix_rejects_bad_node() {
    let t = common::random_table(&mut rng(1), 2, 8);
    assert!(matches!(
        diff_xsec_matrix(&t, CH_A, 8),
        Err(cohres::Error::IndexOutOfRange { index: 8, len: 8 })
    ));
    assert!(matches!(
        xsec_matrix(&t, "X+YZ"),
        Err(cohres::Error::UnknownChannel(_))
    ));
}
