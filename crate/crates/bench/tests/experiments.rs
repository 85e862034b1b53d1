use mmpm_core::bootstrap::LookUpTable;
use mmpmboot::experiment::{compare_schemes, run_experiment, run_experiment_detailed, FunctionSpec};
use mmpmboot::presets::{apply_overrides, preset};
use mmpmboot::stats::{
    bootstrap_errors, cmux_errors, external_product_errors, modswitch_errors, uniform_digit_second_moment,
};
use rand::SeedableRng;

#[test]
fn zero_trials_is_an_empty_report() {
    let r = run_experiment(&preset("desk-small").unwrap(), &FunctionSpec::Identity, 0, 1, true).unwrap();
    assert_eq!((r.trials, r.failures, r.ring_mults, r.max_abs_error), (0, 0, 0, 0));
    assert_eq!(r.seconds_per_bootstrap, None);
}

#[test]
fn identity_on_desk_small() {
    let p = preset("desk-small").unwrap();
    let (r, outcomes) = run_experiment_detailed(&p, &FunctionSpec::Identity, 100, 9, false).unwrap();
    assert_eq!(r.failures, 0);
    let k = &p.params;
    assert_eq!(r.ring_mults, 2 * 8 * (k.n * k.r * k.l_b()) as u64);
    assert!(outcomes.iter().all(|o| o.expected == o.message % k.t));
    // Both halves of Z_2t are exercised.
    assert!(outcomes.iter().any(|o| o.message >= k.t));
}

#[test]
fn reports_are_deterministic_and_timing_optional() {
    let p = preset("desk-r2").unwrap();
    let a = run_experiment(&p, &FunctionSpec::Sign, 10, 5, false).unwrap();
    let b = run_experiment(&p, &FunctionSpec::Sign, 10, 5, false).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(run_experiment(&p, &FunctionSpec::Sign, 2, 5, true).unwrap().seconds_per_bootstrap.is_some());
}

#[test]
fn comparison_rejects_mismatched_presets() {
    let a = preset("desk-small").unwrap();
    assert!(compare_schemes(&a, &preset("desk-tfhe-r2").unwrap(), &FunctionSpec::Sign, 1, 0, false).is_err());
    assert!(compare_schemes(&a, &a, &FunctionSpec::Sign, 1, 0, false).is_err());
    let r1 = preset("desk-r1").unwrap();
    let c = compare_schemes(&r1, &preset("desk-tfhe-r1").unwrap(), &FunctionSpec::Sign, 10, 0, false).unwrap();
    assert_eq!(c.mmpm.ring_mults, c.tfhe.ring_mults);
    assert_eq!(c.boot_key_ratio, 1.0);
    assert_eq!(c.failures(), 0);
}

#[test]
fn table_spec_must_match_t() {
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
    let f = LookUpTable::random(16, 8, &mut rng).unwrap();
    assert!(run_experiment(&preset("desk-small").unwrap(), &FunctionSpec::Table(f), 1, 0, false).is_err());
}

#[test]
fn invalid_preset_is_rejected() {
    let bad = apply_overrides(preset("desk-small").unwrap(), "q=500").unwrap();
    assert!(run_experiment(&bad, &FunctionSpec::Identity, 1, 0, false).is_err());
}

/// The proxies count `B²` per digit; a uniform digit on `[0, B)` has second
/// moment `(B-1)(2B-1)/6`, so the measured variance should match the proxy
/// with `B²` replaced by that moment, and never exceed the proxy.
#[test]
fn gadget_products_match_the_digit_moment() {
    let p = preset("desk-small").unwrap().params;
    let scale = uniform_digit_second_moment(p.gadget_base) / (p.gadget_base * p.gadget_base) as f64;
    let beta2 = p.sigma_enc * p.sigma_enc;
    for (name, sample) in [
        ("external product", external_product_errors(&p, 2000, 1).unwrap()),
        ("cmux", cmux_errors(&p, 500, 2).unwrap()),
    ] {
        let refined = beta2 + (sample.predicted - beta2) * scale;
        let rel = sample.variance() / refined;
        assert!((0.97..1.03).contains(&rel), "{name}: measured/refined = {rel}");
        assert!(sample.variance() <= sample.predicted);
        assert!(sample.mean().abs() < 0.05 * sample.predicted.sqrt());
        assert_eq!(sample.exceed_fraction(p.h), 0.0);
    }
}

#[test]
fn modswitch_and_bootstrap_noise() {
    let p = preset("desk-small").unwrap().params;
    let ms = modswitch_errors(&p, 10_000, 3).unwrap();
    assert!(ms.within_factor(1.1), "ratio {}", ms.ratio());
    assert!(ms.exceed_fraction(p.h) <= 0.01);
    let boot = bootstrap_errors(&p, 60, 4).unwrap();
    assert!(boot.exceed_fraction(p.h) <= 0.01);
    assert!(boot.variance() <= 3.0 * boot.predicted, "ratio {}", boot.ratio());
}
