use proptest::prelude::*;
use smoothcert::harness::{exact_rho, true_robust_radius, ClassifierSpec};
use smoothcert::radius::certified_radius;
use smoothcert::{Adversary, Error, Family, NoiseSpec};

fn iid_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Gaussian),
        Just(Family::Laplace),
        Just(Family::UniformLinf),
        (0.3f64..4.0).prop_map(|p| Family::ExpLpIid { p }),
        (0.5f64..6.0).prop_map(|a| Family::ParetoIid { a }),
    ]
}

fn spherical_family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Gaussian), Just(Family::UniformL2), Just(Family::ExpL2 { k: 1.0, j: 0.0 })]
}

fn tight(fam: Family, adv: Adversary, axis_aligned: bool) -> bool {
    match (fam, adv) {
        (Family::Gaussian, Adversary::L2) => true,
        (Family::Gaussian | Family::Laplace | Family::UniformLinf, Adversary::L1) => axis_aligned,
        (Family::ExpLpIid { p }, Adversary::L1) => axis_aligned && p >= 1.0,
        _ => false,
    }
}

/// Certified radius at the exact `ρ` against the bisected robust radius.
fn check_sound(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64], axis_aligned: bool) -> Result<(), TestCaseError> {
    let rho = exact_rho(clf, spec, x).unwrap();
    // far from the boundary an unbounded density's ρ rounds to 1, where every radius is infinite
    prop_assume!(rho < 1.0 || matches!(spec.family(), Family::UniformLinf | Family::UniformL2));
    for adv in Adversary::ALL {
        let cert = match certified_radius(spec, adv, rho) {
            Ok(c) => c.value,
            Err(Error::UnsupportedPair { .. }) => continue,
            Err(e) => panic!("{spec} {adv}: {e}"),
        };
        let truth = true_robust_radius(clf, spec, x, adv).unwrap();
        prop_assert!(cert <= truth * (1.0 + 1e-9) + 1e-12, "{} {} rho {}: certified {} > true {}", spec, adv, rho, cert, truth);
        // past the edge of a bounded support ρ saturates at 1 and the witness is lost
        if tight(spec.family(), adv, axis_aligned) && rho < 1.0 {
            prop_assert!((cert - truth).abs() <= 1e-6 * truth.max(1e-3), "{} {}: certified {} vs true {}", spec, adv, cert, truth);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axis_halfspaces_are_never_over_certified(
        fam in iid_family(),
        d in 1usize..8,
        lambda in 0.3f64..3.0,
        axis_frac in 0.0f64..1.0,
        threshold in -2.0f64..2.0,
        positive_side: bool,
        margin in -1.5f64..1.5,
    ) {
        let spec = NoiseSpec::new(fam, lambda, d).unwrap();
        let axis = ((axis_frac * d as f64) as usize).min(d - 1);
        let clf = ClassifierSpec::halfspace(d, axis, threshold, positive_side).unwrap();
        let mut x = vec![0.25; d];
        x[axis] = threshold + margin * lambda;
        check_sound(&clf, &spec, &x, true)?;
    }

    #[test]
    fn linear_classifiers_are_never_over_certified(
        fam in spherical_family(),
        d in 2usize..8,
        lambda in 0.3f64..3.0,
        w in prop::collection::vec(-1.0f64..1.0, 8),
        x in prop::collection::vec(-1.0f64..1.0, 8),
        b in -1.0f64..1.0,
    ) {
        prop_assume!(w[..d].iter().map(|v| v * v).sum::<f64>() > 1e-2);
        let spec = NoiseSpec::new(fam, lambda, d).unwrap();
        let clf = ClassifierSpec::linear(w[..d].to_vec(), b).unwrap();
        check_sound(&clf, &spec, &x[..d], false)?;
    }
}

#[test]
fn level_set_pairs_are_sound() {
    for fam in [Family::ExpL2 { k: 2.0, j: 1.0 }, Family::PowerL2 { a: 8.0, k: 2.0 }] {
        let spec = NoiseSpec::new(fam, 1.0, 4).unwrap();
        let clf = ClassifierSpec::linear(vec![0.3, -1.0, 0.2, 0.5], 0.1).unwrap();
        let x = [0.4, -0.6, 0.0, 0.2];
        let rho = exact_rho(&clf, &spec, &x).unwrap();
        let cert = certified_radius(&spec, Adversary::L2, rho).unwrap().value;
        let truth = true_robust_radius(&clf, &spec, &x, Adversary::L2).unwrap();
        assert!(cert > 0.0 && cert <= truth * (1.0 + 1e-9), "{spec}: {cert} vs {truth}");
    }
}
