use proptest::prelude::*;
use smoothcert::radius::certified_radius;
use smoothcert::{Adversary, Error, Family, Method, NoiseSpec};

fn family(d: usize) -> impl Strategy<Value = Family> {
    let df = d as f64;
    prop_oneof![
        Just(Family::Gaussian),
        Just(Family::Laplace),
        Just(Family::UniformLinf),
        Just(Family::UniformL2),
        (prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)], 0.0..df - 1.5).prop_map(|(k, j)| Family::ExpLinf { k, j }),
        Just(Family::ExpLinf { k: 1.0, j: 0.0 }),
        Just(Family::ExpL2 { k: 1.0, j: 0.0 }),
        (0.5f64..3.0).prop_map(|k| Family::ExpL1 { k }),
        Just(Family::ExpL1 { k: 1.0 }),
        (0.3f64..4.0).prop_map(|p| Family::ExpLpIid { p }),
        (0.5f64..20.0).prop_map(move |e| Family::PowerLinf { a: df + e }),
        (0.5f64..6.0).prop_map(|a| Family::ParetoIid { a }),
    ]
}

fn case() -> impl Strategy<Value = NoiseSpec> {
    (3usize..12).prop_flat_map(|d| (family(d), 0.2f64..3.0).prop_map(move |(f, l)| NoiseSpec::new(f, l, d).unwrap()))
}

/// Radius, or `None` for pairs without a formula.
fn radius(spec: &NoiseSpec, adv: Adversary, rho: f64) -> Option<f64> {
    match certified_radius(spec, adv, rho) {
        Ok(r) => {
            assert_ne!(r.method, Method::LevelSetTable);
            Some(r.value)
        }
        Err(Error::UnsupportedPair { .. }) => None,
        Err(e) => panic!("{spec} {adv} rho {rho}: {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn radius_scales_with_lambda(spec in case(), rho in 0.51f64..0.995) {
        for adv in Adversary::ALL {
            let Some(base) = radius(&spec, adv, rho) else { continue };
            for c in [0.5, 2.0, 10.0] {
                let scaled = radius(&spec.with_lambda(c * spec.lambda()).unwrap(), adv, rho).unwrap();
                prop_assert!((scaled - c * base).abs() <= 1e-10 * c * base, "{} {}: {} vs {}", spec, adv, scaled, c * base);
            }
        }
    }

    #[test]
    fn radius_is_monotone_in_rho(spec in case()) {
        for adv in Adversary::ALL {
            let mut last = 0.0;
            for i in 0..50 {
                let rho = 0.5 + 0.499 * i as f64 / 49.0;
                let Some(r) = radius(&spec, adv, rho) else { break };
                prop_assert!(r >= last, "{} {} rho {}: {} < {}", spec, adv, rho, r, last);
                last = r;
            }
        }
    }

    #[test]
    fn radii_nest_with_the_unit_balls(spec in case(), rho in 0.51f64..0.995) {
        let r: Vec<Option<f64>> = [Adversary::Linf, Adversary::L2, Adversary::L1].iter().map(|&a| radius(&spec, a, rho)).collect();
        if let [Some(inf), Some(two), Some(one)] = r[..] {
            prop_assert!(inf <= two * (1.0 + 1e-12) && two <= one * (1.0 + 1e-12), "{}: {} {} {}", spec, inf, two, one);
        }
        if let (Some(inf), Some(one)) = (r[0], r[2]) {
            prop_assert!(inf <= one * (1.0 + 1e-12), "{}: {} {}", spec, inf, one);
        }
    }

    #[test]
    fn gaussian_linf_is_the_scaled_l2_radius(d in 1usize..5000, l in 0.01f64..10.0, rho in 0.5f64..0.9999) {
        let spec = NoiseSpec::new(Family::Gaussian, l, d).unwrap();
        let inf = radius(&spec, Adversary::Linf, rho).unwrap();
        let two = radius(&spec, Adversary::L2, rho).unwrap();
        prop_assert!((inf * (d as f64).sqrt() - two).abs() <= 4.0 * f64::EPSILON * two);
    }
}
