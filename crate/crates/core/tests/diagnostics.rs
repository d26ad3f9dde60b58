use lieinv::diagnostics::{
    aghe_fit, construct_witness, estimate_certificate, estimate_check, l2_closed_range_report,
    sigma_sequence, ClosedRangeVerdict, Verdict, WitnessKind, WitnessParams,
};
use lieinv::linalg::{RankPolicy, Tolerances, C64, ONE};
use lieinv::numbers::liouville;
use lieinv::spectral::{enumerate_levels, Backend};
use lieinv::symbol::{Flavor, SymbolFamily, TruncatedSequence, WeightFunction};
use lieinv::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn slope_field(alpha: f64, cutoff: f64) -> SymbolFamily {
    let t = enumerate_levels(Backend::Torus { dims: 2 }, cutoff).unwrap();
    SymbolFamily::vector_field(t, &[ONE, C64::new(alpha, 0.0)])
}

#[test]
fn circle_sigma_is_square_root_of_lambda() {
    let t = enumerate_levels(Backend::Torus { dims: 1 }, 1e4).unwrap();
    let p = SymbolFamily::vector_field(t, &[ONE]);
    let sigma = sigma_sequence(&p, RankPolicy::default());
    assert!(sigma.entries[0].is_sentinel());
    for e in &sigma.entries[1..] {
        let exact = e.lambda_f64.sqrt();
        assert!((e.sigma_min_perp - exact).abs() <= 1e-12 * exact);
    }
    let fit = aghe_fit(&sigma, &WeightFunction::smooth(), Flavor::Beurling, &[1e2, 1e3, 1e4], None)
        .unwrap();
    assert!((fit.fitted_exponent - 0.5).abs() <= 0.01, "{}", fit.fitted_exponent);
    let report = l2_closed_range_report(&sigma, &[1e2, 1e3, 1e4]).unwrap();
    assert!(matches!(report.verdict, ClosedRangeVerdict::UniformBoundEvidence));
    assert!((report.constant - 1.0).abs() <= 1e-9);
}

/// `min |k₁ + α k₂|` over nonzero lattice points with `|k|² ≤ cutoff`.
fn brute_force_inf(alpha: f64, cutoff: f64) -> f64 {
    let r = cutoff.sqrt() as i64;
    let mut best = f64::INFINITY;
    for k2 in -r..=r {
        for k1 in -r..=r {
            if (k1 * k1 + k2 * k2) as f64 <= cutoff && (k1, k2) != (0, 0) {
                best = best.min((k1 as f64 + alpha * k2 as f64).abs());
            }
        }
    }
    best
}

#[test]
fn slope_field_infima_match_brute_force() {
    for alpha in [std::f64::consts::SQRT_2, liouville()] {
        let p = slope_field(alpha, 1e4);
        let sigma = sigma_sequence(&p, RankPolicy::default());
        let cutoffs = [1e2, 1e3, 1e4];
        let report = l2_closed_range_report(&sigma, &cutoffs).unwrap();
        for (inf, &cut) in report.infima.iter().zip(&cutoffs) {
            let expected = brute_force_inf(alpha, cut);
            assert!((inf - expected).abs() <= 1e-9 * expected, "α={alpha} Λ={cut}: {inf} vs {expected}");
        }
    }
}

#[test]
fn weighted_infima_separate_sqrt2_from_liouville() {
    // the mode (−11, 100) has |−11 + 100α| ≈ 1e−4 and enters between the two cutoffs
    let cutoffs = [1e2, 2e4];
    let weight = WeightFunction::smooth();
    let row = |alpha: f64| {
        let sigma = sigma_sequence(&slope_field(alpha, 2e4), RankPolicy::default());
        let fit = aghe_fit(&sigma, &weight, Flavor::Beurling, &cutoffs, Some(&[-0.5])).unwrap();
        fit.table[0].clone()
    };
    let sqrt2 = row(std::f64::consts::SQRT_2);
    assert!((sqrt2[1] / sqrt2[0] - 1.0).abs() < 0.05, "{sqrt2:?}");
    let liou = row(liouville());
    assert!(liou[0] / liou[1] > 5.0, "{liou:?}");
}

#[test]
fn liouville_witness_round_trip() {
    let p = slope_field(liouville(), 2e4);
    let sigma = sigma_sequence(&p, RankPolicy::default());
    let weight = WeightFunction::gevrey(1.0, Flavor::Roumieu).unwrap();
    let params = WitnessParams {
        weight,
        s: -0.05,
        rho: None,
        policy: RankPolicy::default(),
    };
    let w = construct_witness(&p, &sigma, WitnessKind::TwoA, &params).unwrap();
    assert!(w.verification.passed, "{:?}", w.verification);
    for &idx in &w.levels {
        assert!((lieinv::linalg::vec_norm(w.sequence.at(idx)) - 1.0).abs() < 1e-12);
    }
    let circle = SymbolFamily::vector_field(enumerate_levels(Backend::Torus { dims: 1 }, 1e4).unwrap(), &[ONE]);
    let sigma = sigma_sequence(&circle, RankPolicy::default());
    assert!(matches!(
        construct_witness(&circle, &sigma, WitnessKind::TwoA, &params),
        Err(Error::NoFailureCertificate)
    ));
}

#[test]
fn harvested_certificate_bounds_random_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let policy = Tolerances::default().rank_policy();
    let weight = WeightFunction::smooth();
    for p in [
        SymbolFamily::vector_field(enumerate_levels(Backend::Torus { dims: 1 }, 400.0).unwrap(), &[ONE]),
        slope_field(std::f64::consts::SQRT_2, 400.0),
    ] {
        let sigma = sigma_sequence(&p, policy);
        let fit = aghe_fit(&sigma, &weight, Flavor::Beurling, &[1e2, 4e2], None).unwrap();
        assert_ne!(fit.verdict, Verdict::DecayingTrend);
        let cert = estimate_certificate(&sigma, &weight, fit.certificate_exponent).unwrap();
        for _ in 0..20 {
            let a = TruncatedSequence::random(p.truncation().clone(), 1, &mut rng);
            let check = estimate_check(&p, &a, &weight, cert, 1.0, policy).unwrap();
            assert!(check.holds, "{check:?}");
        }
    }
}

#[test]
fn sqrt2_fit_tracks_the_convergents() {
    // |k₁ + √2 k₂| ≥ c/|k| with equality up to constants along the convergents
    let p = slope_field(std::f64::consts::SQRT_2, 1e4);
    let sigma = sigma_sequence(&p, RankPolicy::default());
    let fit = aghe_fit(&sigma, &WeightFunction::smooth(), Flavor::Beurling, &[1e2, 1e3, 1e4], None)
        .unwrap();
    assert_eq!(fit.envelope, "record-minima");
    assert!((fit.fitted_exponent + 0.5).abs() < 0.05, "{}", fit.fitted_exponent);
    assert_eq!(fit.verdict, Verdict::ConsistentAtCutoff, "{:?}", fit.table);
}

#[test]
fn sqrt2_has_no_certificate_below_its_exponent() {
    let p = slope_field(std::f64::consts::SQRT_2, 1e4);
    let sigma = sigma_sequence(&p, RankPolicy::default());
    let params = WitnessParams {
        weight: WeightFunction::smooth(),
        s: -0.6,
        rho: None,
        policy: RankPolicy::default(),
    };
    assert!(matches!(
        construct_witness(&p, &sigma, WitnessKind::TwoA, &params),
        Err(Error::NoFailureCertificate)
    ));
}
