//! Level-set certification for densities `q(x) = q̄(‖x‖₂)` against ℓ2.
//!
//! For a likelihood ratio `κ` and shift `ε`, the Neyman–Pearson set
//! `{κ q(x - εu) ≥ q(x)}` meets every sphere `‖x‖₂ = r` in a spherical cap, so
//! its mass before and after the shift are one-dimensional integrals over the
//! radial law. Radii are found by searching `κ` until the shifted mass is 1/2.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::{Family, NoiseSpec};
use crate::quad::{integrate_pieces, Tol};
use crate::radius::{Adversary, CertifiedRadius, Method};
use crate::specfun::{beta_cdf, beta_cdf_inv, beta_prime_cdf_inv, gamma_cdf_inv, gamma_sf, gamma_sf_inv, ln_gamma};

/// `W_d(r, s, ε)`: the fraction of the sphere of radius `r` about the origin
/// that lies outside the ball of radius `s` centred `ε` away.
pub fn w_cap(r: f64, s: f64, eps: f64, d: usize) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite() && s >= 0.0 && s.is_finite() && eps > 0.0 && eps.is_finite()) || d == 0 {
        return Err(Error::Domain(format!(
            "w_cap needs r >= 0, s >= 0, eps > 0, d >= 1; got r = {r}, s = {s}, eps = {eps}, d = {d}"
        )));
    }
    Ok(cap(r, s, eps, d, false))
}

/// `W_d`, or `1 - W_d` when `inside` is set, each without cancellation.
fn cap(r: f64, s: f64, eps: f64, d: usize, inside: bool) -> f64 {
    let out = if r == 0.0 {
        (eps > s) as u8 as f64
    } else if d == 1 {
        // two points ±r
        0.5 * ((r + eps > s) as u8 as f64 + ((r - eps).abs() > s) as u8 as f64)
    } else {
        let den = 4.0 * eps * r;
        // the inside fraction has argument 1 - x, formed directly
        let x = if inside { (s - r + eps) * (s + r - eps) / den } else { (r + eps - s) * (r + eps + s) / den };
        let m = 0.5 * (d as f64 - 1.0);
        return if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            beta_cdf(x, m, m).unwrap_or(f64::NAN)
        };
    };
    if inside {
        1.0 - out
    } else {
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Profile {
    /// `q̄(x) = exp(-x²/2)`
    Gaussian,
    /// `q̄(x) = x^{-j} exp(-x^k)`
    Exp { k: f64, j: f64 },
    /// `q̄(x) = (1 + x^k)^{-a}`
    Power { a: f64, k: f64 },
}

/// Law of `‖δ‖₂` for a spherical family: density `∝ r^{d-1} q̄(r)`.
#[derive(Debug)]
pub struct RadialLaw {
    profile: Profile,
    lambda: f64,
    dim: usize,
    cache: RwLock<HashMap<u64, (f64, f64)>>,
}

impl RadialLaw {
    pub fn new(spec: &NoiseSpec) -> Result<Self> {
        let profile = match spec.family() {
            Family::Gaussian => Profile::Gaussian,
            Family::ExpL2 { k, j } => Profile::Exp { k, j },
            Family::PowerL2 { a, k } => Profile::Power { a, k },
            other => {
                return Err(Error::Unsupported(format!(
                    "level-set tables need a strictly decreasing spherical profile (gaussian, exp_l2, power_l2), got {}",
                    other.name()
                )))
            }
        };
        Ok(Self { profile, lambda: spec.lambda(), dim: spec.dim(), cache: RwLock::new(HashMap::new()) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Radius at lower-tail probability `u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile level {u} not in [0, 1]")));
        }
        if u <= 0.5 {
            self.tail_quantile(u, false)
        } else {
            self.tail_quantile(1.0 - u, true)
        }
    }

    /// Radius with lower tail `t` (`upper = false`) or upper tail `t`.
    fn tail_quantile(&self, t: f64, upper: bool) -> Result<f64> {
        let d = self.dim as f64;
        let x = match self.profile {
            Profile::Gaussian => {
                let g = if upper { gamma_sf_inv(t, 0.5 * d)? } else { gamma_cdf_inv(t, 0.5 * d)? };
                (2.0 * g).sqrt()
            }
            Profile::Exp { k, j } => {
                let shape = (d - j) / k;
                let g = if upper { gamma_sf_inv(t, shape)? } else { gamma_cdf_inv(t, shape)? };
                g.powf(1.0 / k)
            }
            Profile::Power { a, k } => {
                let (al, be) = (d / k, a - d / k);
                let b = if upper {
                    // X = (1 - Z)/Z with Z = 1 - X/(1+X) ~ Beta(β, α)
                    let z = beta_cdf_inv(t, be, al)?;
                    (1.0 - z) / z
                } else {
                    beta_prime_cdf_inv(t, al, be)?
                };
                b.powf(1.0 / k)
            }
        };
        Ok(self.lambda * x)
    }

    /// Radius exceeded with probability `t`.
    pub fn upper_quantile(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("tail level {t} not in [0, 1]")));
        }
        self.tail_quantile(t, true)
    }

    /// `P[‖δ‖₂ > r]`.
    pub fn sf(&self, r: f64) -> Result<f64> {
        if r.is_nan() {
            return Err(Error::Domain("radius is NaN".into()));
        }
        if r <= 0.0 {
            return Ok(1.0);
        }
        let d = self.dim as f64;
        let x = r / self.lambda;
        match self.profile {
            Profile::Gaussian => gamma_sf(0.5 * x * x, 0.5 * d),
            Profile::Exp { k, j } => gamma_sf(x.powf(k), (d - j) / k),
            Profile::Power { a, k } => beta_cdf(1.0 / (1.0 + x.powf(k)), a - d / k, d / k),
        }
    }

    /// Both radii at tail mass `e^{-t}`, memoised on `t`.
    fn tails_at(&self, t: f64) -> (f64, f64) {
        let key = t.to_bits();
        if let Some(&v) = self.cache.read().unwrap().get(&key) {
            return v;
        }
        let u = (-t).exp();
        let v = (
            self.tail_quantile(u, false).unwrap_or(f64::NAN),
            self.tail_quantile(u, true).unwrap_or(f64::NAN),
        );
        self.cache.write().unwrap().insert(key, v);
        v
    }

    /// Density of the radius.
    pub fn pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let d = self.dim as f64;
        let x = r / self.lambda;
        let ln = match self.profile {
            Profile::Gaussian => {
                let s = 0.5 * d;
                (d - 1.0) * x.ln() - 0.5 * x * x - (s - 1.0) * 2f64.ln() - ln_gamma(s)
            }
            Profile::Exp { k, j } => {
                let s = (d - j) / k;
                k.ln() + (d - j - 1.0) * x.ln() - x.powf(k) - ln_gamma(s)
            }
            Profile::Power { a, k } => {
                let (al, be) = (d / k, a - d / k);
                k.ln() + (d - 1.0) * x.ln() - a * x.powf(k).ln_1p() - (ln_gamma(al) + ln_gamma(be) - ln_gamma(a))
            }
        };
        ln.exp() / self.lambda
    }

    /// `E r^q`, infinite when the moment does not exist.
    pub fn moment(&self, q: f64) -> f64 {
        let d = self.dim as f64;
        let ln = match self.profile {
            Profile::Gaussian => 0.5 * q * 2f64.ln() + ln_gamma(0.5 * (d + q)) - ln_gamma(0.5 * d),
            Profile::Exp { k, j } => ln_gamma((d - j + q) / k) - ln_gamma((d - j) / k),
            Profile::Power { a, k } => {
                let (al, be) = (d / k, a - d / k);
                if be <= q / k {
                    return f64::INFINITY;
                }
                ln_gamma(al + q / k) + ln_gamma(be - q / k) - ln_gamma(al) - ln_gamma(be)
            }
        };
        self.lambda.powf(q) * ln.exp()
    }

    /// `s` with `ln q̄(s) = ln q̄(r) + ln_ratio`; zero when the level exceeds `q̄(0)`.
    pub fn level_radius(&self, r: f64, ln_ratio: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let x = r / self.lambda;
        let s = match self.profile {
            Profile::Gaussian => (x * x - 2.0 * ln_ratio).max(0.0).sqrt(),
            Profile::Exp { k, j } if j == 0.0 => (x.powf(k) - ln_ratio).max(0.0).powf(1.0 / k),
            Profile::Exp { k, j } => {
                // solve j t + e^{k t} = j ln x + x^k - ln_ratio for t = ln s
                let target = j * x.ln() + x.powf(k) - ln_ratio;
                let h = |t: f64| j * t + (k * t).exp() - target;
                // h is convex and increasing; both starts lie right of the root
                let mut t = if target >= 1.0 { (target / j).min(target.ln() / k) } else { target / j };
                for _ in 0..100 {
                    let e = (k * t).exp();
                    let step = h(t) / (j + k * e);
                    t -= step;
                    if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                        break;
                    }
                }
                t.exp()
            }
            Profile::Power { a, k } => {
                let v = (x.powf(k).ln_1p() - ln_ratio / a).exp_m1();
                v.max(0.0).powf(1.0 / k)
            }
        };
        self.lambda * s
    }

    /// `∫₀¹ g(Q(u)) du`, written as `∫ e^{-t} [g(Q(e^{-t})) + g(Q(1 - e^{-t}))] dt` so
    /// that both tails keep full resolution. The range stops at `t_max`.
    fn expect(&self, g: impl Fn(f64) -> f64, t_max: f64, tol: Tol) -> Result<f64> {
        let lo = std::f64::consts::LN_2;
        let breaks: Vec<f64> = (0..10).map(|i| 2f64.powi(i)).collect();
        let f = |t: f64| {
            let (a, b) = self.tails_at(t);
            (-t).exp() * (g(a) + g(b))
        };
        integrate_pieces(f, lo, t_max, &breaks, tol)
    }
}

/// Mass of the Neyman–Pearson set at `ln κ` after the shift by `eps`.
fn shifted_mass(law: &RadialLaw, ln_kappa: f64, eps: f64) -> Result<f64> {
    // the dropped tails weigh 2e-40
    law.expect(|r| cap(r, law.level_radius(r, ln_kappa), eps, law.dim, false), 92.0, Tol { abs: 1e-11, rel: 0.0 })
}

/// Mass of the Neyman–Pearson set at `ln κ` before the shift, to relative accuracy.
fn unshifted_mass(law: &RadialLaw, ln_kappa: f64, eps: f64) -> Result<f64> {
    law.expect(|r| cap(r, law.level_radius(r, -ln_kappa), eps, law.dim, true), 700.0, Tol { abs: 1e-300, rel: 1e-9 })
}

/// `(p₀, p₁)` with `𝒢(p₀, εu) = p₁` for the Neyman–Pearson set at ratio `κ`.
pub fn growth_pair(spec: &NoiseSpec, kappa: f64, eps: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa = {kappa} must be positive")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let law = RadialLaw::new(spec)?;
    let t = kappa.ln();
    Ok((unshifted_mass(&law, t, eps)?, shifted_mass(&law, t, eps)?))
}

/// `ln κ` at which the shifted mass is 1/2, and the unshifted mass there.
///
/// Bracketed search on `ln κ`: the bracket is doubled outwards, then shrunk
/// with Illinois false-position steps.
fn solve_half(law: &RadialLaw, eps: f64) -> Result<(f64, f64)> {
    let f = |t: f64| shifted_mass(law, t, eps).map(|m| m - 0.5);
    let fail = || Error::Numerical(format!("no likelihood ratio puts mass 1/2 at radius {eps}"));
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    let mut n = 0;
    while f_lo > 0.0 {
        (hi, f_hi) = (lo, f_lo);
        lo *= 2.0;
        f_lo = f(lo)?;
        n += 1;
        if n > 200 {
            return Err(fail());
        }
    }
    while f_hi < 0.0 {
        (lo, f_lo) = (hi, f_hi);
        hi *= 2.0;
        f_hi = f(hi)?;
        n += 1;
        if n > 200 {
            return Err(fail());
        }
    }
    if f_lo == 0.0 {
        return Ok((lo, unshifted_mass(law, lo, eps)?));
    }
    let mut t = hi;
    let mut side = 0i8;
    // unscaled end values, for the monotonicity check
    let (mut g_lo, mut g_hi) = (f_lo, f_hi);
    for _ in 0..200 {
        t = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let ft = f(t)?;
        if !(g_lo - 1e-10 <= ft && ft <= g_hi + 1e-10) {
            return Err(Error::Numerical(format!("shifted mass not monotone in kappa at radius {eps}")));
        }
        if ft.abs() < 1e-9 || hi - lo <= 1e-14 * (1.0 + t.abs()) {
            break;
        }
        if ft < 0.0 {
            lo = t;
            f_lo = ft;
            g_lo = ft;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            f_hi = ft;
            g_hi = ft;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok((t, unshifted_mass(law, t, eps)?))
}

/// Pairs `(pᵢ, rᵢ)`: radius `rᵢ` is certified whenever `1 - ρ ≤ pᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusTable {
    entries: Vec<(f64, f64)>,
    spec: NoiseSpec,
}

impl RadiusTable {
    /// Checks strict monotonicity.
    pub fn new(spec: NoiseSpec, entries: Vec<(f64, f64)>) -> Result<Self> {
        for w in entries.windows(2) {
            if !(w[1].0 < w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::Numerical(format!(
                    "table entries ({}, {}) and ({}, {}) are not strictly monotone",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { entries, spec })
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    pub fn adversary(&self) -> Adversary {
        Adversary::L2
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// CSV with header `p,radius`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["p", "radius"]).map_err(io)?;
        for &(p, r) in &self.entries {
            out.write_record([format!("{p:.16e}"), format!("{r:.16e}")]).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_csv<R: Read>(spec: NoiseSpec, r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["p", "radius"] {
            return Err(Error::Parse(format!("expected header `p,radius`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse("short row".into()))?
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("{e}")))
            };
            entries.push((num(0)?, num(1)?));
        }
        Self::new(spec, entries)
    }
}

/// 512 radii spaced geometrically over `[1e-3 σ, 10 σ]`.
pub fn default_radii(spec: &NoiseSpec) -> Vec<f64> {
    let sigma = spec.sigma().unwrap_or(spec.lambda());
    let (lo, hi) = (1e-3 * sigma, 10.0 * sigma);
    let n = 512;
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Level-set table over the given radii.
///
/// Radii past the point where `p` stops decreasing in floating point are dropped.
pub fn build_table(spec: &NoiseSpec, radii: &[f64]) -> Result<RadiusTable> {
    for w in radii.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain("radii must be strictly increasing".into()));
        }
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::Domain(format!("radius {r} must be positive and finite")));
    }
    let law = RadialLaw::new(spec)?;
    let ps: Vec<f64> = radii.par_iter().map(|&r| solve_half(&law, r).map(|x| x.1)).collect::<Result<_>>()?;
    let mut entries: Vec<(f64, f64)> = Vec::with_capacity(radii.len());
    for (&p, &r) in ps.iter().zip(radii) {
        if p <= 0.0 || entries.last().is_some_and(|&(q, _)| p >= q) {
            break;
        }
        entries.push((p, r));
    }
    RadiusTable::new(*spec, entries)
}

/// Largest tabulated radius certified at `rho`.
pub fn lookup(table: &RadiusTable, rho: f64) -> Result<CertifiedRadius> {
    if rho.is_nan() || !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho = {rho} not in [0, 1]")));
    }
    let (spec, adv) = (table.spec, Adversary::L2);
    if rho <= 0.5 {
        return Ok(CertifiedRadius::zero(Method::LevelSetTable, &spec, adv, rho));
    }
    let q = 1.0 - rho;
    // entries are sorted by decreasing p
    let n = table.entries.partition_point(|&(p, _)| p >= q);
    if n == 0 {
        let mut out = CertifiedRadius::new(0.0, Method::LevelSetTable, &spec, adv, rho);
        out.below_table = true;
        return Ok(out);
    }
    let mut out = CertifiedRadius::new(table.entries[n - 1].1, Method::LevelSetTable, &spec, adv, rho);
    out.table_truncated = n == table.entries.len();
    Ok(out)
}

/// Exact level-set radius at `rho`, solved directly instead of through a table.
pub fn certify_direct(spec: &NoiseSpec, rho: f64) -> Result<f64> {
    if rho.is_nan() || !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho = {rho} not in [0, 1]")));
    }
    if rho <= 0.5 {
        return Ok(0.0);
    }
    let law = RadialLaw::new(spec)?;
    let target = 1.0 - rho;
    let p0 = |eps: f64| solve_half(&law, eps).map(|x| x.1);
    let scale = spec.sigma().unwrap_or(spec.lambda());
    let mut hi = scale;
    let mut n = 0;
    while p0(hi)? >= target {
        hi *= 2.0;
        n += 1;
        if n > 200 {
            return Err(Error::Numerical(format!("level-set radius at rho = {rho} did not bracket")));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if p0(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::specfun::{gaussian_cdf, gaussian_cdf_inv};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn gauss(d: usize) -> NoiseSpec {
        NoiseSpec::new(Family::Gaussian, 1.0, d).unwrap()
    }

    #[test]
    fn cap_extremes() {
        assert_eq!(w_cap(3.0, 1.0, 1.5, 5).unwrap(), 1.0);
        assert_eq!(w_cap(1.0, 3.0, 1.5, 5).unwrap(), 0.0);
        assert_eq!(w_cap(2.0, 1.0, 0.5, 1).unwrap(), 1.0);
        assert_eq!(w_cap(1.0, 1.0, 0.5, 1).unwrap(), 0.5);
        assert!(w_cap(1.0, 1.0, 0.0, 3).is_err());
    }

    #[test]
    fn cap_matches_sphere_sampling() {
        let (d, r, s, eps) = (8, 1.0, 1.0, 0.6);
        let w = w_cap(r, s, eps, d).unwrap();
        let mut rng = stream_rng(7, 0);
        let n = 1_000_000;
        let mut hits = 0u64;
        let mut x = vec![0.0; d];
        for _ in 0..n {
            for v in x.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dist2: f64 = x.iter().enumerate().map(|(i, v)| {
                let c = if i == 0 { eps } else { 0.0 };
                (r * v / norm - c).powi(2)
            }).sum();
            hits += (dist2 > s * s) as u64;
        }
        let est = hits as f64 / n as f64;
        let se = (w * (1.0 - w) / n as f64).sqrt();
        assert!((est - w).abs() < 4.0 * se, "{est} vs {w}");
    }

    #[test]
    fn survival_inverts_upper_quantile() {
        for fam in [Family::Gaussian, Family::ExpL2 { k: 1.0, j: 3.0 }, Family::PowerL2 { a: 20.0, k: 2.0 }] {
            let law = RadialLaw::new(&NoiseSpec::new(fam, 0.7, 12).unwrap()).unwrap();
            for t in [1e-12, 1e-4, 0.3, 0.9] {
                let r = law.upper_quantile(t).unwrap();
                assert!((law.sf(r).unwrap() / t - 1.0).abs() < 1e-9, "{fam:?} t {t}");
            }
        }
    }

    #[test]
    fn radial_law_normalizes() {
        let specs = [
            gauss(5),
            NoiseSpec::new(Family::ExpL2 { k: 1.5, j: 2.0 }, 0.7, 6).unwrap(),
            NoiseSpec::new(Family::PowerL2 { a: 6.0, k: 2.0 }, 1.3, 4).unwrap(),
        ];
        for s in &specs {
            let law = RadialLaw::new(s).unwrap();
            let total = crate::quad::integrate_to_infinity(|r| law.pdf(r), 0.0, Tol { abs: 1e-12, rel: 1e-10 }).unwrap();
            assert!((total - 1.0).abs() < 1e-8, "{s}: {total}");
            let med = law.quantile(0.5).unwrap();
            let half = crate::quad::integrate(|r| law.pdf(r), 0.0, med, Tol { abs: 1e-13, rel: 1e-11 }).unwrap();
            assert!((half - 0.5).abs() < 1e-8, "{s}: {half}");
            let m2 = crate::quad::integrate_to_infinity(|r| r * r * law.pdf(r), 0.0, Tol { abs: 1e-12, rel: 1e-10 }).unwrap();
            assert!((m2 / law.moment(2.0) - 1.0).abs() < 1e-7, "{s}");
        }
    }

    #[test]
    fn level_radius_inverts_profile() {
        let specs = [
            NoiseSpec::new(Family::ExpL2 { k: 1.5, j: 2.0 }, 0.7, 6).unwrap(),
            NoiseSpec::new(Family::ExpL2 { k: 2.0, j: 0.0 }, 1.0, 6).unwrap(),
            NoiseSpec::new(Family::PowerL2 { a: 6.0, k: 2.0 }, 1.3, 4).unwrap(),
            gauss(3),
        ];
        for s in &specs {
            let law = RadialLaw::new(s).unwrap();
            let ln_q = |r: f64| s.log_density(&[r, 0.0, 0.0][..s.dim().min(3)].iter().copied().chain(std::iter::repeat(0.0)).take(s.dim()).collect::<Vec<_>>()).unwrap();
            for &(r, t) in &[(0.9, 0.3), (1.2, -0.4), (2.0, 1.0), (0.3, -2.0), (25.0, 3.0), (25.0, -3.0)] {
                let s2 = law.level_radius(r, t);
                assert!(s2 > 0.0);
                assert!((ln_q(s2) - ln_q(r) - t).abs() < 1e-9, "{s}: r {r} t {t}");
            }
        }
    }

    #[test]
    fn gaussian_pairs_follow_neyman_pearson() {
        let s = gauss(6);
        for &kappa in &[0.3, 1.0, 2.5, 10.0] {
            let (p0, p1) = growth_pair(&s, kappa, 1.0).unwrap();
            let want = gaussian_cdf(gaussian_cdf_inv(p0).unwrap() + 1.0).unwrap();
            assert!((p1 - want).abs() < 1e-6, "kappa {kappa}: {p1} vs {want}");
            assert!(p1 > p0);
        }
        let (p0, p1) = growth_pair(&s, 1.0, 1e-6).unwrap();
        assert!((p1 - p0).abs() < 1e-5);
    }

    #[test]
    fn gaussian_table() {
        let t = build_table(&gauss(4), &[0.5, 1.0, 1.5]).unwrap();
        let want = [0.3085375387, 0.1586552539, 0.0668072013];
        for (e, w) in t.entries().iter().zip(want) {
            assert!((e.0 - w).abs() < 1e-5, "{e:?}");
        }
        // 1 - N(1) = 0.158655...: ρ = 0.8413 falls just short of radius 1
        assert_eq!(lookup(&t, 0.8413).unwrap().value, 0.5);
        assert_eq!(lookup(&t, 0.84135).unwrap().value, 1.0);
        assert!(build_table(&gauss(4), &[]).unwrap().is_empty());
    }

    #[test]
    fn lookup_edges() {
        let t = RadiusTable::new(gauss(2), vec![(0.4, 1.0), (0.3, 2.0), (0.2, 3.0)]).unwrap();
        assert_eq!(lookup(&t, 0.6).unwrap().value, 1.0);
        assert_eq!(lookup(&t, 0.75).unwrap().value, 2.0);
        let below = lookup(&t, 0.55).unwrap();
        assert!(below.below_table && below.value == 0.0);
        let above = lookup(&t, 0.9).unwrap();
        assert!(above.table_truncated && above.value == 3.0);
        assert!(lookup(&t, 0.3).unwrap().not_certified);
        assert!(RadiusTable::new(gauss(2), vec![(0.4, 1.0), (0.4, 2.0)]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = RadiusTable::new(gauss(2), vec![(0.4, 0.1), (1.0 / 3.0, std::f64::consts::PI), (1e-300, 7.0)]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("p,radius\n"));
        let back = RadiusTable::read_csv(gauss(2), &buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn direct_gaussian_is_exact() {
        let r = certify_direct(&gauss(3), 0.9).unwrap();
        assert!((r - gaussian_cdf_inv(0.9).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn one_dimension() {
        let t = build_table(&gauss(1), &[0.5, 1.0]).unwrap();
        assert!((t.entries()[1].0 - 0.1586552539).abs() < 1e-6);
    }
}
