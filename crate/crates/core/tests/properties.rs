//! Property tests for the structural invariants: correlation symmetries,
//! the four-type quadratic-form identity, energy and norm preservation,
//! route agreement of the mean-square indices, the mode-weight bounds,
//! and sandwich containment.

use proptest::prelude::*;
use seqsnr_core::correlation::{aperiodic_corr, odd_corr, periodic_corr, quad_form, BitPair};
use seqsnr_core::mean_square::{msq_direct, msq_spectral, msq_theta, sandwich_bounds};
use seqsnr_core::seqset::{energy, generate, Family, GeneratorSpec, SequenceSet};
use seqsnr_core::snr::{s_term, snr_lower_bound, ChannelProfile, UserChannel};
use seqsnr_core::spectral::to_spectral;
use seqsnr_core::Complex64;

fn arb_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::RandomPhase),
        Just(Family::RandomBinary),
        Just(Family::ZadoffChu),
        Just(Family::AllOnes),
    ]
}

fn arb_set() -> impl Strategy<Value = SequenceSet> {
    (arb_family(), 2usize..=10, 1usize..=4, any::<u64>()).prop_map(|(family, mut n, k, seed)| {
        if family == Family::ZadoffChu {
            n |= 1; // the family is defined for odd lengths only
        }
        generate(
            &GeneratorSpec {
                family,
                n,
                root: 1,
                seed,
            },
            k,
        )
        .unwrap()
    })
}

fn arb_set_and_channel() -> impl Strategy<Value = (SequenceSet, ChannelProfile)> {
    (arb_family(), 2usize..=10, 1usize..=4, any::<u64>()).prop_flat_map(|(family, n, k, seed)| {
        (
            Just((family, n, k, seed)),
            proptest::collection::vec((0.0f64..1.5, 0.2f64..1.2, 1u32..4u32), k),
            0.5f64..2.0,
            0.5f64..2.0,
            0.01f64..1.0,
        )
            .prop_map(|((family, n, k, seed), users, p, t, n0)| {
                let n = if family == Family::ZadoffChu {
                    n | 1
                } else {
                    n
                };
                let set = generate(
                    &GeneratorSpec {
                        family,
                        n,
                        root: 1,
                        seed,
                    },
                    k,
                )
                .unwrap();
                let users = users
                    .into_iter()
                    .map(|(g, c, m)| UserChannel::new(g, c, m).unwrap())
                    .collect();
                (set, ChannelProfile::new(p, t, n0, users).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_is_conjugate_symmetric(set in arb_set()) {
        let n = set.n() as i64;
        for i in 0..set.k_users() {
            for k in 0..set.k_users() {
                for l in -(n - 1)..n {
                    let a = aperiodic_corr(&set, i, k, l);
                    let b = aperiodic_corr(&set, k, i, -l).conj();
                    prop_assert!((a - b).norm_sqr().sqrt() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn correlation_vanishes_outside_the_window(set in arb_set()) {
        let n = set.n() as i64;
        for &l in &[n, -n, n + 3, -(n + 3)] {
            prop_assert_eq!(aperiodic_corr(&set, 0, 0, l), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn quad_form_decomposes_into_periodic_and_odd_parts(set in arb_set()) {
        let n = set.n();
        let i = 0;
        let k = set.k_users() - 1;
        for l in 0..n {
            let theta = periodic_corr(&set, i, k, l).unwrap();
            let theta_hat = odd_corr(&set, i, k, l).unwrap();
            let pp = quad_form(&set, i, k, l, BitPair::new(1, 1).unwrap()).unwrap();
            let mm = quad_form(&set, i, k, l, BitPair::new(-1, -1).unwrap()).unwrap();
            let mp = quad_form(&set, i, k, l, BitPair::new(-1, 1).unwrap()).unwrap();
            let pm = quad_form(&set, i, k, l, BitPair::new(1, -1).unwrap()).unwrap();
            prop_assert!((pp - theta).norm_sqr().sqrt() < 1e-9);
            prop_assert!((mm + theta).norm_sqr().sqrt() < 1e-9);
            prop_assert!((mp - theta_hat).norm_sqr().sqrt() < 1e-9);
            prop_assert!((pm + theta_hat).norm_sqr().sqrt() < 1e-9);
            // Flipping both bits flips the sign, never the magnitude.
            prop_assert_eq!(pp.norm_sqr(), mm.norm_sqr());
            prop_assert_eq!(mp.norm_sqr(), pm.norm_sqr());
        }
    }

    #[test]
    fn generated_sets_keep_the_energy_invariant(set in arb_set()) {
        for u in 0..set.k_users() {
            let e = energy(set.user(u));
            prop_assert!((e - set.n() as f64).abs() <= 1e-9 * set.n() as f64);
        }
    }

    #[test]
    fn both_projections_preserve_the_norm(set in arb_set()) {
        for u in 0..set.k_users() {
            let c = to_spectral(set.user(u)).unwrap();
            let na: f64 = c.alpha().iter().map(|z| z.norm_sqr()).sum();
            let nb: f64 = c.beta().iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((na - set.n() as f64).abs() <= 1e-9 * set.n() as f64);
            prop_assert!((nb - set.n() as f64).abs() <= 1e-9 * set.n() as f64);
        }
    }

    #[test]
    fn mean_square_routes_agree(set in arb_set()) {
        let coeffs: Vec<_> =
            (0..set.k_users()).map(|u| to_spectral(set.user(u)).unwrap()).collect();
        let d = msq_direct(&set);
        let t = msq_theta(&set);
        let s = msq_spectral(&coeffs).unwrap();
        for i in 0..set.k_users() {
            prop_assert!((d.r_ac_per_user[i] - t.r_ac_per_user[i]).abs() < 1e-9);
            prop_assert!((d.r_ac_per_user[i] - s.r_ac_per_user[i]).abs() < 1e-9);
            prop_assert!(d.r_ac_per_user[i] >= -1e-12);
        }
        if set.k_users() > 1 {
            let dc = d.r_cc_per_user.unwrap();
            let tc = t.r_cc_per_user.unwrap();
            let sc = s.r_cc_per_user.unwrap();
            for i in 0..set.k_users() {
                prop_assert!((dc[i] - tc[i]).abs() < 1e-9);
                prop_assert!((dc[i] - sc[i]).abs() < 1e-9);
                prop_assert!(dc[i] >= 0.0);
            }
        } else {
            prop_assert!(d.r_cc.is_none() && t.r_cc.is_none() && s.r_cc.is_none());
        }
    }

    #[test]
    fn mode_coupling_respects_the_weight_bounds(set in arb_set()) {
        let coeffs: Vec<_> =
            (0..set.k_users()).map(|u| to_spectral(set.user(u)).unwrap()).collect();
        let n = set.n();
        for ci in &coeffs {
            for ck in &coeffs {
                for m in 1..=n {
                    let raw = ci.alpha()[m - 1].norm_sqr() * ck.alpha()[m - 1].norm_sqr()
                        + ci.beta()[m - 1].norm_sqr() * ck.beta()[m - 1].norm_sqr();
                    let s = s_term(ci, ck, m).unwrap();
                    prop_assert!(s >= 0.5 * raw - 1e-12);
                    prop_assert!(s <= 1.5 * raw + 1e-12);
                }
            }
        }
    }

    #[test]
    fn sandwich_contains_the_bound((set, channel) in arb_set_and_channel()) {
        for i in 0..set.k_users() {
            let snr = snr_lower_bound(&set, i, &channel).unwrap();
            let (lo, hi) = sandwich_bounds(&set, i, &channel);
            prop_assert!(lo <= snr * (1.0 + 1e-9));
            prop_assert!(snr <= hi * (1.0 + 1e-9));
            prop_assert!(lo <= hi);
        }
    }
}
