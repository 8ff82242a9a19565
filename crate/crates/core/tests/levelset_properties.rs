use std::sync::OnceLock;

use proptest::prelude::*;
use smoothcert::levelset::{build_table, lookup, RadiusTable};
use smoothcert::specfun::gaussian_cdf_inv;
use smoothcert::{Family, NoiseSpec};

fn tables() -> &'static [RadiusTable] {
    static TABLES: OnceLock<Vec<RadiusTable>> = OnceLock::new();
    TABLES.get_or_init(|| {
        [(0.7, 3usize), (2.0, 10)]
            .into_iter()
            .map(|(l, d)| {
                let spec = NoiseSpec::new(Family::Gaussian, l, d).unwrap();
                // 96 geometric radii over [1e-3 λ, 10 λ]
                let radii: Vec<f64> = (0..96).map(|i| l * 1e-3 * 1e4f64.powf(i as f64 / 95.0)).collect();
                build_table(&spec, &radii).unwrap()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gaussian_lookup_is_within_one_grid_step(which in 0usize..2, rho in 0.5005f64..0.99999) {
        let table = &tables()[which];
        let exact = table.spec().lambda() * gaussian_cdf_inv(rho).unwrap();
        let got = lookup(table, rho).unwrap();
        let e = table.entries();
        if got.below_table || got.table_truncated {
            return Ok(());
        }
        let i = e.iter().position(|&(_, r)| r == got.value).unwrap();
        prop_assert!(i + 1 < e.len());
        let step = e[i + 1].1 - e[i].1;
        // the table only floors, so it never exceeds the exact radius by more than rounding
        prop_assert!(got.value <= exact + step && got.value <= exact * (1.0 + 1e-6), "rho {}: {} vs {}", rho, got.value, exact);
        prop_assert!(got.value >= exact - step, "rho {}: {} vs {} (step {})", rho, got.value, exact, step);
    }
}
