use num_complex::Complex64;
use proptest::prelude::*;
use sqz_core::decoherence::{apply_channel, ChannelKind, ChannelSpec};
use sqz_core::dicke::husimi_total;
use sqz_core::entanglement::{concurrence_general, pair_density_matrix};
use sqz_core::models::{qnd_monte_carlo_chunk, QNDSpec, ResidualSums};
use sqz_core::{compute_report, local_moments, moments, rotate, LocalMoments, SymmetricState};

fn state_strategy() -> impl Strategy<Value = SymmetricState> {
    (2usize..=12)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1)))
        .prop_filter_map("non-zero vector", |(n, v)| {
            SymmetricState::normalized(n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).ok()
        })
}

fn parity_strategy() -> impl Strategy<Value = SymmetricState> {
    state_strategy().prop_filter_map("non-zero even part", |s| {
        let n = s.n_particles();
        let amps = s.amplitudes().iter().enumerate().map(|(k, a)| if (n - k) % 2 == 0 { *a } else { Complex64::new(0.0, 0.0) }).collect();
        SymmetricState::normalized(n, amps).ok()
    })
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (l > 1e-3).then(|| v.map(|x| x / l))
}

fn close_local(a: &LocalMoments, b: &LocalMoments, tol: f64) -> bool {
    (a.sz - b.sz).abs() < tol
        && (a.szsz - b.szsz).abs() < tol
        && (a.spsm - b.spsm).abs() < tol
        && (a.smsm - b.smsm).norm() < tol
        && (a.sdots - b.sdots).abs() < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotations_preserve_invariants(s in state_strategy(), axis in prop::array::uniform3(-1.0f64..1.0), angle in -3.2f64..3.2) {
        let Some(axis) = unit(axis) else { return Ok(()) };
        let r = rotate(&s, axis, angle).unwrap();
        prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-12);
        let (a, b) = (compute_report(&moments(&s)), compute_report(&moments(&r)));
        prop_assert!((a.tilde_xi_e2 - b.tilde_xi_e2).abs() < 1e-9);
        prop_assert!((a.mean_spin_length - b.mean_spin_length).abs() < 1e-9);
        prop_assert!((a.xi_singlet2 - b.xi_singlet2).abs() < 1e-9);
        if let (Some(x), Some(y)) = (a.xi_s2, b.xi_s2) {
            prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
        }
    }

    #[test]
    fn xi_r_never_below_xi_s(s in state_strategy()) {
        let r = compute_report(&moments(&s));
        if let (Some(xs), Some(xr)) = (r.xi_s2, r.xi_r2) {
            prop_assert!(xr >= xs * (1.0 - 1e-12));
        }
    }

    #[test]
    fn local_moments_round_trip(s in state_strategy()) {
        let lm = local_moments(&s).unwrap();
        let back = LocalMoments::from_collective(lm.n_particles, &lm.collective()).unwrap();
        prop_assert!(close_local(&lm, &back, 1e-12));
    }

    #[test]
    fn concurrence_is_bounded(s in state_strategy()) {
        let c = concurrence_general(&pair_density_matrix(&s).unwrap()).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn channels_compose_as_semigroup(s in parity_strategy(), p1 in 0.0f64..1.0, p2 in 0.0f64..1.0, k in 0usize..3) {
        let kind = [ChannelKind::Adc, ChannelKind::Pdc, ChannelKind::Dpc][k];
        let lm = local_moments(&s).unwrap();
        let twice = apply_channel(&apply_channel(&lm, &ChannelSpec::new(kind, p1).unwrap()), &ChannelSpec::new(kind, p2).unwrap());
        let once = apply_channel(&lm, &ChannelSpec::new(kind, 1.0 - (1.0 - p1) * (1.0 - p2)).unwrap());
        prop_assert!(close_local(&twice, &once, 1e-12));
    }

    #[test]
    fn husimi_integrates_to_one(s in state_strategy()) {
        prop_assert!((husimi_total(&s, 48, 96) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qnd_chunks_are_order_independent(seed in any::<u64>(), split in 1u64..200) {
        let spec = QNDSpec::new(100, 500.0, 0.01, 0.0).unwrap();
        let a = qnd_monte_carlo_chunk(&spec, seed, 0, 200).unwrap();
        let b = qnd_monte_carlo_chunk(&spec, seed, 1, split).unwrap();
        let left = a.merge(b);
        let right = ResidualSums::default().merge(a).merge(b);
        prop_assert_eq!(left, right);
        prop_assert_eq!(qnd_monte_carlo_chunk(&spec, seed, 1, split).unwrap(), b);
    }
}
