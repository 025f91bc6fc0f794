use proptest::prelude::*;

use qlitho::correlation::{CorrelationFunction, FrequencyGrid, PumpEnvelope};
use qlitho::interferometer::{
    intensity, path_amplitudes, two_photon_amplitude, Geometry, Illumination,
};
use qlitho::resolution::{
    exposure_order, phase_match_residual, ExposurePoint, PhaseMatchCase, Process, Wave,
};
use qlitho::spectra::{NonlinearCrystal, SignalSpectrum, OMEGA0};

const SIGMA: f64 = 0.05 * OMEGA0;

fn crystal_strategy() -> impl Strategy<Value = NonlinearCrystal> {
    prop_oneof![
        (1.0..500.0f64, -0.2..0.2f64).prop_map(|(l, d)| NonlinearCrystal::type_ii(l, d).unwrap()),
        (1.0..500.0f64, -0.5..0.5f64).prop_map(|(l, g)| NonlinearCrystal::type_i(l, g).unwrap()),
    ]
}

fn spectrum_strategy() -> impl Strategy<Value = SignalSpectrum> {
    (0.01..0.2f64, any::<bool>()).prop_map(|(s, gauss)| {
        if gauss {
            SignalSpectrum::gaussian(s * OMEGA0).unwrap()
        } else {
            SignalSpectrum::rectangular(s * OMEGA0).unwrap()
        }
    })
}

#[test]
fn phase_matching_is_bounded_on_a_dense_sweep() {
    let crystals = [
        NonlinearCrystal::type_ii(125.0, 0.057).unwrap(),
        NonlinearCrystal::type_i(125.0, 0.3).unwrap(),
        NonlinearCrystal::type_ii(1e4, 1.0).unwrap(),
    ];
    for c in crystals {
        for k in 0..10_000 {
            let nu = -6.0 * SIGMA + 12.0 * SIGMA * k as f64 / 9_999.0;
            let h = c.phase_matching(nu);
            assert!(h.norm() <= 1.0 + 1e-12, "|h({nu})| = {}", h.norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phase_matching_bounded(c in crystal_strategy(), r in -6.0..6.0f64) {
        prop_assert!(c.phase_matching(r * SIGMA).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn phase_matching_mirror(c in crystal_strategy(), nu in -2.0..2.0f64) {
        let (p, m) = (c.phase_matching(nu), c.phase_matching(-nu));
        match c.kind() {
            // linear mismatch: h(−ν) = h(ν)*
            qlitho::spectra::CrystalKind::TypeII => prop_assert!((m - p.conj()).norm() < 1e-14),
            // quadratic mismatch: even
            qlitho::spectra::CrystalKind::TypeI => prop_assert!((m - p).norm() < 1e-14),
        }
    }

    #[test]
    fn spectrum_is_even_and_peaked(s in spectrum_strategy(), nu in -5.0..5.0f64) {
        prop_assert_eq!(s.amplitude(nu), s.amplitude(-nu));
        prop_assert!(s.amplitude(nu) <= s.amplitude(0.0));
        prop_assert_eq!(s.amplitude(0.0), 1.0);
    }

    #[test]
    fn grid_is_symmetric(n in 2usize..5000, nu_max in 0.01..10.0f64) {
        let g = FrequencyGrid::new(n, nu_max).unwrap();
        let total: f64 = (0..n).map(|j| g.weight(j)).sum();
        prop_assert!((total - 2.0 * nu_max).abs() < 1e-12 * nu_max * n as f64);
        for j in [0, n / 3, n / 2, n - 1] {
            prop_assert_eq!(g.node(j), -g.node(g.partner(j)));
            prop_assert_eq!(g.weight(j), g.weight(g.partner(j)));
        }
    }

    #[test]
    fn exposure_order_recovered_and_scale_invariant(
        n in 0.5..3.0f64,
        k in 1.0..1e4f64,
        intensities in proptest::collection::vec(0.1..100.0f64, 2..6),
        scale in 0.1..10.0f64,
    ) {
        let mut is = intensities;
        is.sort_by(f64::total_cmp);
        is.dedup_by(|a, b| (*a / *b - 1.0).abs() < 1e-3);
        prop_assume!(is.len() >= 2);
        let pts: Vec<_> = is.iter().map(|&i| ExposurePoint::new(i, k / i.powf(n)).unwrap()).collect();
        let fit = exposure_order(&pts).unwrap();
        prop_assert!((fit.order - n).abs() < 1e-9 * n.max(1.0));
        // rescaling intensity units or the dose leaves n unchanged
        let scaled: Vec<_> = pts
            .iter()
            .map(|p| ExposurePoint::new(scale * p.intensity, p.threshold_time / scale).unwrap())
            .collect();
        prop_assert!((exposure_order(&scaled).unwrap().order - fit.order).abs() < 1e-9);
    }

    #[test]
    fn phase_match_residual_is_linear(
        kp in proptest::array::uniform3(-5.0..5.0f64),
        wp in 0.1..10.0f64,
        ks in proptest::array::uniform3(-5.0..5.0f64),
        ki in proptest::array::uniform3(-5.0..5.0f64),
        ws in 0.1..10.0f64,
        wi in 0.1..10.0f64,
        s in 0.1..10.0f64,
        hps in any::<bool>(),
    ) {
        let process = if hps { Process::Hps } else { Process::Spdc };
        let w = |k: [f64; 3], omega| Wave { k, omega };
        let case = PhaseMatchCase::new(process, w(kp, wp), w(ks, ws), w(ki, wi)).unwrap();
        let r = phase_match_residual(&case);
        let sc = |k: [f64; 3]| k.map(|c| s * c);
        let scaled = PhaseMatchCase::new(
            process,
            w(sc(kp), s * wp),
            w(sc(ks), s * ws),
            w(sc(ki), s * wi),
        )
        .unwrap();
        let rs = phase_match_residual(&scaled);
        prop_assert!((rs.energy - s * r.energy).abs() < 1e-12 * (1.0 + s * r.energy.abs()) * 30.0);
        for i in 0..3 {
            prop_assert!((rs.momentum[i] - s * r.momentum[i]).abs() < 1e-12 * 30.0 * (1.0 + s));
        }
        let degenerate = PhaseMatchCase::degenerate_collinear(process, w(kp, wp)).unwrap();
        let d = phase_match_residual(&degenerate);
        prop_assert!(d.energy.abs() < 1e-14 * wp.max(1.0));
        prop_assert!(d.momentum.iter().all(|m| m.abs() < 1e-14 * 5.0));
    }

    #[test]
    fn pump_envelope_shape(bw in 1e-4..1.0f64, r in -100.0..100.0f64, s in -100.0..100.0f64) {
        let p = PumpEnvelope::new(bw, r).unwrap();
        prop_assert_eq!(p.factor(r), 1.0);
        prop_assert!(p.factor(s) <= 1.0 && p.factor(s) >= 0.0);
        prop_assert!((p.factor(r + s) - p.factor(r - s)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn path_sum_equals_amplitude(
        c in crystal_strategy(),
        s in spectrum_strategy(),
        l1 in 0.0..20.0f64,
        l2 in 0.0..20.0f64,
        x_mean in 3.0..20.0f64,
        dx in -3.0..3.0f64,
    ) {
        let grid = FrequencyGrid::for_spectrum(&s, 512, 8.0).unwrap();
        let corr = CorrelationFunction::new(c, s, grid).unwrap();
        let g = Geometry::balanced(0.0, x_mean, dx).unwrap();
        let g = Geometry::new(l1, l2, g.x1, g.x2).unwrap();
        let a = two_photon_amplitude(&g, &corr).unwrap();
        let p = path_amplitudes(&g, Illumination::Broadband(&corr)).unwrap();
        prop_assert!((p.total() - a).norm() <= 1e-12 * corr.u0().norm());
    }

    #[test]
    fn balanced_paths_cancel_and_intensity_is_flat(
        c in crystal_strategy(),
        s in spectrum_strategy(),
        l in 0.0..20.0f64,
        x_mean in 3.0..20.0f64,
        dx in -3.0..3.0f64,
    ) {
        let grid = FrequencyGrid::for_spectrum(&s, 512, 8.0).unwrap();
        let corr = CorrelationFunction::new(c, s, grid).unwrap();
        let g = Geometry::balanced(l, x_mean, dx).unwrap();
        let p = path_amplitudes(&g, Illumination::Broadband(&corr)).unwrap();
        prop_assert!(p.coincidence_pair().norm() < 1e-10 * corr.u0().norm());
        prop_assert!((intensity(&g, &c, &s, &grid) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn with_dx_keeps_the_arm_sum(x_mean in 3.0..20.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let g = Geometry::balanced(1.0, x_mean, a).unwrap();
        let h = g.with_dx(b).unwrap();
        prop_assert!((h.x_sum() - g.x_sum()).abs() < 1e-13);
        prop_assert!((h.dx() - b).abs() < 1e-13);
        prop_assert_eq!(h.l_sum(), g.l_sum());
    }
}
