use proptest::prelude::*;

use ims_core::geometry::{count_blockers, wrap_angle, Obstacle, PolarPoint};
use ims_core::interference::{sinr, LinkBudgetTerm, ModelSpec, SinrPair};
use ims_core::propagation::{db_to_linear, linear_to_db, path_gain, PathLossLaw, SectorAntenna};
use ims_core::similarity::{bhattacharyya, error_probs, index_value, kl_divergence, similarity_index, LogBase, OutageCounts};

fn term() -> impl Strategy<Value = LinkBudgetTerm> {
    (0.5f64..500.0, 1e-12f64..1e-3, 0.01f64..20.0).prop_map(|(d, g, tx)| LinkBudgetTerm {
        tx_power: tx,
        tx_gain: 1.0,
        channel_gain: g,
        rx_gain: 1.0,
        distance: d,
    })
}

fn obstacle() -> impl Strategy<Value = Obstacle> {
    (-50f64..50.0, -50f64..50.0, 0.0f64..4.0, 0.0f64..3.0, 0.0f64..std::f64::consts::TAU).prop_map(|(x, y, w, l, o)| Obstacle {
        center: [x, y],
        width: w,
        length: l,
        orientation: o,
        is_reflector: false,
        penetration_loss_db: 10.0,
        reflection_coeff: 1.0,
    })
}

fn pmf(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #[test]
    fn antenna_power_is_normalised(theta in 1e-3f64..std::f64::consts::TAU, z in 0.0f64..0.999) {
        let a = SectorAntenna::new(theta, z).unwrap();
        let total = theta * a.main_gain() + (std::f64::consts::TAU - theta) * z;
        prop_assert!((total - std::f64::consts::TAU).abs() < 1e-12 * std::f64::consts::TAU);
        prop_assert!(a.main_gain() >= 1.0 - 1e-12);
    }

    #[test]
    fn path_gain_never_increases(alpha in 2.0f64..6.0, a in 0.1f64..5.0, d in 0.0f64..1000.0, step in 0.0f64..100.0) {
        let law = PathLossLaw::new(1.0, alpha, a).unwrap();
        prop_assert!(path_gain(&law, d + step) <= path_gain(&law, d));
    }

    #[test]
    fn db_round_trip(db in -200.0f64..100.0) {
        prop_assert!((linear_to_db(db_to_linear(db)) - db).abs() < 1e-9);
    }

    #[test]
    fn ibm_dominates_phym(signal in term(), terms in prop::collection::vec(term(), 0..40), r in 0.5f64..600.0, noise in 1e-15f64..1e-9) {
        let phym = sinr(&ModelSpec::PhyM, &signal, &terms, noise).unwrap();
        let ibm = sinr(&ModelSpec::Ibm { r_ibm: r }, &signal, &terms, noise).unwrap();
        prop_assert!(phym <= ibm);
    }

    #[test]
    fn larger_ball_never_raises_sinr(signal in term(), terms in prop::collection::vec(term(), 0..40), r in 0.5f64..300.0, extra in 0.0f64..300.0) {
        let small = sinr(&ModelSpec::Ibm { r_ibm: r }, &signal, &terms, 1e-12).unwrap();
        let large = sinr(&ModelSpec::Ibm { r_ibm: r + extra }, &signal, &terms, 1e-12).unwrap();
        prop_assert!(large <= small);
    }

    #[test]
    fn prm_is_two_valued(signal in term(), terms in prop::collection::vec(term(), 0..20), r in 0.5f64..100.0) {
        let noise = 1e-12;
        let g = sinr(&ModelSpec::Prm { r_prm: r }, &signal, &terms, noise).unwrap();
        let snr = signal.received_power() / noise;
        prop_assert!(g == 0.0 || (g - snr).abs() <= 1e-12 * snr);
        prop_assert_eq!(g == 0.0, terms.iter().any(|t| t.distance <= r));
    }

    #[test]
    fn sinr_ignores_interferer_order(signal in term(), mut terms in prop::collection::vec(term(), 1..20), r in 0.5f64..300.0) {
        let m = ModelSpec::Ibm { r_ibm: r };
        let a = sinr(&m, &signal, &terms, 1e-12).unwrap();
        terms.reverse();
        let b = sinr(&m, &signal, &terms, 1e-12).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn blockers_are_symmetric(obs in prop::collection::vec(obstacle(), 0..30), p in (-60f64..60.0, -60f64..60.0), q in (-60f64..60.0, -60f64..60.0)) {
        let (p, q) = ([p.0, p.1], [q.0, q.1]);
        prop_assert_eq!(count_blockers(p, q, &obs), count_blockers(q, p, &obs));
    }

    #[test]
    fn more_obstacles_never_fewer_blockers(obs in prop::collection::vec(obstacle(), 0..30), more in prop::collection::vec(obstacle(), 0..10), q in (-60f64..60.0, -60f64..60.0)) {
        let q = [q.0, q.1];
        let before = count_blockers([0.0, 0.0], q, &obs);
        let mut all = obs.clone();
        all.extend(more);
        prop_assert!(count_blockers([0.0, 0.0], q, &all) >= before);
    }

    #[test]
    fn polar_round_trip(r in 0.01f64..1e4, phi in -std::f64::consts::PI..std::f64::consts::PI) {
        let p = PolarPoint::from_xy(PolarPoint { r, phi }.to_xy());
        prop_assert!((p.r - r).abs() <= 1e-9 * r);
        prop_assert!(wrap_angle(p.phi - phi).abs() < 1e-9);
    }

    #[test]
    fn error_rates_ignore_sample_order(mut pairs in prop::collection::vec((0.0f64..20.0, 0.0f64..20.0), 1..200), beta in 0.1f64..10.0) {
        let mk = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| SinrPair { gamma_x: x, gamma_y: y }).collect::<Vec<_>>();
        let a = error_probs(&mk(&pairs), beta).unwrap();
        pairs.reverse();
        let b = error_probs(&mk(&pairs), beta).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn count_merge_is_associative(pairs in prop::collection::vec((0.0f64..20.0, 0.0f64..20.0), 3..90), beta in 0.1f64..10.0) {
        let parts: Vec<OutageCounts> = pairs.chunks(pairs.len() / 3).map(|c| {
            let mut k = OutageCounts::default();
            for &(x, y) in c {
                k.record(SinrPair { gamma_x: x, gamma_y: y }, beta);
            }
            k
        }).collect();
        let left = parts.iter().fold(OutageCounts::default(), |a, &b| a.merge(b));
        let right = parts.iter().rev().fold(OutageCounts::default(), |a, &b| b.merge(a));
        prop_assert_eq!(left, right);
        prop_assert_eq!(left.total(), pairs.len() as u64);
    }

    #[test]
    fn index_stays_in_unit_interval(p_fa in 0.0f64..=1.0, p_md in 0.0f64..=1.0, xi in 0.0f64..=1.0) {
        let s = index_value(p_fa, p_md, xi);
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn identical_models_score_one(gs in prop::collection::vec(0.0f64..20.0, 1..100), beta in 0.1f64..10.0) {
        let pairs: Vec<SinrPair> = gs.iter().map(|&g| SinrPair { gamma_x: g, gamma_y: g }).collect();
        let st = error_probs(&pairs, beta).unwrap();
        prop_assert_eq!(similarity_index(&st, None).value, 1.0);
    }

    #[test]
    fn distances_are_well_behaved(p in pmf(6), q in pmf(6)) {
        let (rho, d) = bhattacharyya(&p, &q).unwrap();
        prop_assert!(rho > 0.0 && rho <= 1.0 + 1e-12);
        prop_assert!(d >= -1e-12);
        prop_assert!(kl_divergence(&p, &q, LogBase::Natural).unwrap() >= -1e-12);
        let (rho_pp, _) = bhattacharyya(&p, &p).unwrap();
        prop_assert!((rho_pp - 1.0).abs() < 1e-12);
    }
}
