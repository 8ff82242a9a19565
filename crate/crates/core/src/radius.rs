//! Certified radii.
//!
//! Every radius is `λ ∫_{1-ρ}^{1/2} dp / Φ(p)` for the unit-scale growth rate
//! `Φ` of the (noise, adversary) pair. Where that integral has a closed form
//! it is evaluated directly; otherwise [`integrate_inverse_phi`] runs adaptive
//! quadrature, preferably in a variable `c` with `p = p(c)` that removes the
//! inverse CDF from the integrand.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::levelset;
use crate::noise::{Family, NoiseSpec};
use crate::quad::{integrate, integrate_pieces, integrate_to_infinity, Tol};
use crate::specfun::{
    beta_cdf_inv, beta_pdf, beta_prime_cdf, beta_prime_cdf_inv, binomial_tail, binomial_tail_inv, gamma_cdf,
    gamma_cdf_inv, gamma_pdf, gamma_sf, gamma_sf_inv, gaussian_cdf_inv, gaussian_pdf, hyp2f1_special, ln_gamma,
    polylog, POLICY,
};

/// Perturbation norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adversary {
    L1,
    L2,
    Linf,
}

impl Adversary {
    pub const ALL: [Adversary; 3] = [Adversary::L1, Adversary::L2, Adversary::Linf];

    pub fn name(&self) -> &'static str {
        match self {
            Adversary::L1 => "l1",
            Adversary::L2 => "l2",
            Adversary::Linf => "linf",
        }
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Adversary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Adversary::L1),
            "l2" => Ok(Adversary::L2),
            "linf" => Ok(Adversary::Linf),
            other => Err(Error::Parse(format!("unknown adversary `{other}` (expected l1, l2 or linf)"))),
        }
    }
}

/// How a radius was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    DifferentialQuadrature,
    LevelSetTable,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::DifferentialQuadrature => "differential_quadrature",
            Method::LevelSetTable => "level_set_table",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A certified radius with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedRadius {
    pub value: f64,
    pub method: Method,
    pub spec: NoiseSpec,
    pub adversary: Adversary,
    pub rho: f64,
    /// `ρ ≤ 1/2`: nothing is certified and `value` is zero.
    pub not_certified: bool,
    /// The formula only covers part of the ρ range and a smaller valid radius was returned.
    pub conservative: bool,
    /// A table lookup ran past its last entry.
    pub table_truncated: bool,
    /// `1 - ρ` lies above the first table entry, so the table certifies nothing.
    pub below_table: bool,
}

impl CertifiedRadius {
    pub(crate) fn new(value: f64, method: Method, spec: &NoiseSpec, adversary: Adversary, rho: f64) -> Self {
        Self {
            value,
            method,
            spec: *spec,
            adversary,
            rho,
            not_certified: false,
            conservative: false,
            table_truncated: false,
            below_table: false,
        }
    }

    pub(crate) fn zero(method: Method, spec: &NoiseSpec, adversary: Adversary, rho: f64) -> Self {
        Self { not_certified: true, ..Self::new(0.0, method, spec, adversary, rho) }
    }

    /// One-line JSON record.
    pub fn to_json(&self) -> serde_json::Value {
        let mut flags = Vec::new();
        if self.not_certified {
            flags.push("not_certified");
        }
        if self.conservative {
            flags.push("conservative");
        }
        if self.table_truncated {
            flags.push("table_truncated");
        }
        if self.below_table {
            flags.push("below_table");
        }
        serde_json::json!({
            "radius": json_number(self.value),
            "method": self.method.name(),
            "spec": self.spec.to_string(),
            "adv": self.adversary.name(),
            "rho": self.rho,
            "flags": flags,
        })
    }
}

/// JSON has no infinity; unbounded radii are written as the string `"inf"`.
pub fn json_number(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::json!("inf")
    }
}

type Eval = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;
type Real = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `Φ` written through a variable `c` with `p = p(c)`.
///
/// Then `∫_{p₀}^{1/2} dp / Φ(p) = ∫_{c(p₀)}^{c(1/2)} p'(c) / Φ(p(c)) dc`.
#[derive(Clone)]
pub struct Factored {
    /// `c(p)`
    pub quantile: Eval,
    /// `c(1/2)`, possibly infinite
    pub c_half: f64,
    /// `p'(c) / Φ(p(c))`
    pub integrand: Real,
}

/// Unit-scale growth rate `Φ(p)` on `(p_min, 1/2]`, with the noise scale kept
/// separately so that [`PhiFunction::eval`] returns `Φ` in input units.
#[derive(Clone)]
pub struct PhiFunction {
    unit: Eval,
    lambda: f64,
    p_min: f64,
    breakpoints: Vec<f64>,
    factored: Option<Factored>,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("lambda", &self.lambda)
            .field("p_min", &self.p_min)
            .field("breakpoints", &self.breakpoints.len())
            .field("factored", &self.factored.is_some())
            .finish()
    }
}

impl PhiFunction {
    /// `Φ` for unit scale, valid on `(p_min, 1/2]`.
    pub fn new(unit: impl Fn(f64) -> Result<f64> + Send + Sync + 'static, p_min: f64) -> Self {
        Self { unit: Arc::new(unit), lambda: 1.0, p_min, breakpoints: Vec::new(), factored: None }
    }

    /// Points in `p` where `Φ` has kinks.
    pub fn with_breakpoints(mut self, b: Vec<f64>) -> Self {
        self.breakpoints = b;
        self
    }

    pub fn with_factored(mut self, f: Factored) -> Self {
        self.factored = Some(f);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Same `Φ` without the factored form, forcing direct integration in `p`.
    pub fn without_factored(&self) -> Self {
        Self { factored: None, ..self.clone() }
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn has_factored(&self) -> bool {
        self.factored.is_some()
    }

    /// `Φ(p)` in input units (unit `Φ` divided by `λ`).
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(p > self.p_min && p <= 0.5) && !(p == self.p_min && p > 0.0) {
            return Err(Error::Domain(format!("p = {p} outside the validity range ({}, 1/2]", self.p_min)));
        }
        Ok((self.unit)(p)? / self.lambda)
    }
}

/// `∫_{1-ρ}^{1/2} dp / Φ(p)`.
pub fn integrate_inverse_phi(phi: &PhiFunction, rho: f64) -> Result<f64> {
    if rho.is_nan() || !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho = {rho} not in [0, 1]")));
    }
    if rho <= 0.5 {
        return Ok(0.0);
    }
    let p0 = 1.0 - rho;
    if p0 < phi.p_min || (p0 == 0.0 && phi.p_min == 0.0) {
        return Err(Error::Domain(format!("1 - rho = {p0} below the validity range of Φ (p_min = {})", phi.p_min)));
    }
    let tol = Tol { abs: POLICY.quad_abs_tol, rel: 1e-10 };
    let unit = if let Some(f) = &phi.factored {
        let c0 = (f.quantile)(p0)?;
        let g = |c: f64| (f.integrand)(c);
        if f.c_half.is_infinite() {
            let v = integrate_to_infinity(g, c0, tol)?;
            if f.c_half > 0.0 {
                v
            } else {
                -v
            }
        } else {
            integrate(g, c0, f.c_half, tol)?
        }
    } else {
        // p = e^s spreads the p -> 0 end over many panels
        let g = |s: f64| {
            let p = s.exp();
            match (phi.unit)(p.min(0.5)) {
                Ok(v) if v > 0.0 => p / v,
                _ => f64::NAN,
            }
        };
        let breaks: Vec<f64> = phi.breakpoints.iter().filter(|&&b| b > 0.0).map(|b| b.ln()).collect();
        integrate_pieces(g, p0.ln(), 0.5f64.ln(), &breaks, tol)?
    };
    Ok(phi.lambda * unit)
}

// ---------------------------------------------------------------------------
// Dispatch

fn unsupported(spec: &NoiseSpec, adv: Adversary) -> Error {
    let fam = spec.family();
    let alternatives = Adversary::ALL
        .iter()
        .filter(|&&a| a != adv && supports(&fam, spec.dim(), a))
        .map(|&a| {
            let how = if method_for(&fam, a) == Method::LevelSetTable { "level-set " } else { "" };
            format!("{} vs {how}{a}", fam.name())
        })
        .collect();
    Error::UnsupportedPair { spec: spec.to_string(), adversary: adv.name().into(), alternatives }
}

fn supports(fam: &Family, dim: usize, adv: Adversary) -> bool {
    let d = dim as f64;
    use Adversary::*;
    match (fam, adv) {
        (Family::Gaussian, _) | (Family::UniformL2, _) => true,
        (Family::Laplace, L1 | Linf) => true,
        (Family::UniformLinf, L1 | Linf) => true,
        (Family::ExpLinf { k, j }, L1) => (*k == 1.0 && *j == 0.0) || (*k >= 1.0 && *j < d - 1.0),
        (Family::ExpLinf { k, j }, Linf) => *k >= 1.0 && (*j == 0.0 || *j < d - 1.0),
        (Family::ExpL2 { k, j }, L1 | Linf) => *k == 1.0 && *j == 0.0 && dim >= 2,
        (Family::ExpL2 { .. }, L2) => true,
        (Family::ExpL1 { .. }, L1) => true,
        (Family::ExpL1 { k }, Linf) => *k >= 1.0,
        (Family::ExpLpIid { .. }, L1) => true,
        (Family::PowerLinf { .. }, L1 | Linf) => true,
        (Family::PowerL2 { .. }, L2) => true,
        (Family::ParetoIid { .. }, L1) => true,
        _ => false,
    }
}

/// Radii that stay finite as ρ → 1.
fn bounded(fam: &Family, adv: Adversary) -> bool {
    match (fam, adv) {
        (Family::UniformLinf, _) | (Family::UniformL2, _) | (Family::PowerLinf { .. }, Adversary::L1) => true,
        (Family::ExpLinf { k, j }, Adversary::L1) => !(*k == 1.0 && *j == 0.0),
        _ => false,
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_nan() || !(0.0..=1.0).contains(&rho) {
        Err(Error::Domain(format!("rho = {rho} not in [0, 1]")))
    } else {
        Ok(())
    }
}

/// Certified radius of `spec` against `adv` at top-class probability `rho`.
pub fn certified_radius(spec: &NoiseSpec, adv: Adversary, rho: f64) -> Result<CertifiedRadius> {
    check_rho(rho)?;
    let fam = spec.family();
    if !supports(&fam, spec.dim(), adv) {
        return Err(unsupported(spec, adv));
    }
    let method = method_for(&fam, adv);
    if rho <= 0.5 {
        return Ok(CertifiedRadius::zero(method, spec, adv, rho));
    }
    if rho > POLICY.max_rho && !bounded(&fam, adv) {
        return Ok(CertifiedRadius::new(f64::INFINITY, method, spec, adv, rho));
    }
    let (unit, method, conservative) = unit_radius(spec, adv, rho)?;
    let mut out = CertifiedRadius::new(spec.lambda() * unit, method, spec, adv, rho);
    out.conservative = conservative;
    Ok(out)
}

fn method_for(fam: &Family, adv: Adversary) -> Method {
    use Adversary::*;
    match (fam, adv) {
        (Family::Laplace, Linf) => Method::DifferentialQuadrature,
        (Family::ExpLinf { k, j }, Linf) if !(*k == 1.0 && *j == 0.0) => Method::DifferentialQuadrature,
        (Family::ExpL2 { k, j }, L2) if !(*k == 1.0 && *j == 0.0) => Method::LevelSetTable,
        (Family::PowerL2 { .. }, _) => Method::LevelSetTable,
        (Family::ExpL1 { k }, _) if *k != 1.0 => Method::DifferentialQuadrature,
        (Family::ExpL1 { .. }, Linf) => Method::DifferentialQuadrature,
        (Family::ExpLpIid { p }, _) if *p < 1.0 && polylog_order(*p).is_none() => Method::DifferentialQuadrature,
        (Family::PowerLinf { .. }, Linf) | (Family::ParetoIid { .. }, _) => Method::DifferentialQuadrature,
        _ => Method::ClosedForm,
    }
}

/// Radius at `λ = 1` for `1/2 < ρ`, with ρ possibly above the finite cap for bounded formulas.
fn unit_radius(spec: &NoiseSpec, adv: Adversary, rho: f64) -> Result<(f64, Method, bool)> {
    use Adversary::*;
    let d = spec.dim() as f64;
    let du = spec.dim() as u64;
    let rho = rho.min(1.0);
    let closed = |v: f64| Ok((v, Method::ClosedForm, false));
    let quad = |v: f64| Ok((v, Method::DifferentialQuadrature, false));
    match (spec.family(), adv) {
        (Family::Gaussian, L1 | L2) => closed(gaussian_cdf_inv(rho)?),
        (Family::Gaussian, Linf) => closed(gaussian_cdf_inv(rho)? / d.sqrt()),
        (Family::Laplace, L1) => closed(-(2.0 * (1.0 - rho)).ln()),
        (Family::Laplace, Linf) => quad(laplace_linf_unit(du, rho)?),
        (Family::UniformLinf, L1) => closed(2.0 * (rho - 0.5)),
        (Family::UniformLinf, Linf) => closed(2.0 * (1.0 - (1.5 - rho).powf(1.0 / d))),
        (Family::UniformL2, _) => {
            let b = beta_cdf_inv(0.75 - 0.5 * rho, 0.5 * (d + 1.0), 0.5 * (d + 1.0))?;
            let r = 2.0 - 4.0 * b;
            closed(if adv == Linf { r / d.sqrt() } else { r })
        }
        (Family::ExpLinf { k, j }, L1) if k == 1.0 && j == 0.0 => {
            if rho <= 1.0 - 0.5 / d {
                closed(2.0 * d * (rho - 0.5))
            } else {
                closed((1.0 / (2.0 * d * (1.0 - rho))).ln() + d - 1.0)
            }
        }
        (Family::ExpLinf { k, j }, L1) => {
            let slope = 2.0 * d / (d - 1.0) * (ln_gamma((d - j) / k) - ln_gamma((d - 1.0 - j) / k)).exp();
            let cap = 1.0 - 0.5 / d;
            Ok((slope * (rho.min(cap) - 0.5), Method::ClosedForm, rho > cap))
        }
        (Family::ExpLinf { k, j }, Linf) if k == 1.0 && j == 0.0 => closed((1.0 / (2.0 * (1.0 - rho))).ln()),
        (Family::ExpLinf { k, j }, Linf) => quad(integrate_inverse_phi(&exp_linf_linf_phi(d, k, j)?, rho)?),
        (Family::ExpL2 { k, j }, _) if k == 1.0 && j == 0.0 && d >= 2.0 => {
            let r = exp_l2_closed(d, rho)?;
            closed(if adv == Linf { r / d.sqrt() } else { r })
        }
        (Family::ExpL2 { .. }, L2) | (Family::PowerL2 { .. }, L2) => {
            let unit = spec.with_lambda(1.0)?;
            Ok((levelset::certify_direct(&unit, rho)?, Method::LevelSetTable, false))
        }
        (Family::ExpL1 { k }, L1) if k == 1.0 => closed(-(2.0 * (1.0 - rho)).ln()),
        (Family::ExpL1 { k }, L1) => quad(integrate_inverse_phi(&exp_l1_l1_phi(d, k), rho)?),
        (Family::ExpL1 { k }, Linf) if k == 1.0 => quad(laplace_linf_unit(du, rho)?),
        (Family::ExpL1 { k }, Linf) => quad(exp_l1_linf_unit(du, k, rho)?),
        (Family::ExpLpIid { p }, L1) => {
            let (v, m) = exp_lp_unit(p, rho)?;
            Ok((v, m, false))
        }
        (Family::PowerLinf { a }, L1) => closed(2.0 * d / (a - d) * (rho - 0.5)),
        (Family::PowerLinf { a }, Linf) => quad(integrate_inverse_phi(&power_linf_linf_phi(d, a), rho)?),
        (Family::ParetoIid { a }, L1) => quad(pareto_unit(a, rho)?),
        _ => Err(unsupported(spec, adv)),
    }
}

/// Radius against ℓ1 for an independent-coordinate family.
pub fn radius_iid(spec: &NoiseSpec, rho: f64) -> Result<CertifiedRadius> {
    if !spec.family().is_iid() {
        return Err(Error::Unsupported(format!("radius_iid needs an independent-coordinate family, got {}", spec.family().name())));
    }
    check_rho(rho)?;
    let adv = Adversary::L1;
    let log_concave = match spec.family() {
        Family::ExpLpIid { p } => p >= 1.0,
        Family::ParetoIid { .. } => false,
        _ => true,
    };
    if !log_concave {
        return certified_radius(spec, adv, rho);
    }
    if rho <= 0.5 {
        return Ok(CertifiedRadius::zero(Method::ClosedForm, spec, adv, rho));
    }
    let unbounded = !matches!(spec.family(), Family::UniformLinf);
    if rho > POLICY.max_rho && unbounded {
        return Ok(CertifiedRadius::new(f64::INFINITY, Method::ClosedForm, spec, adv, rho));
    }
    // log-concave marginal: the radius is the marginal quantile
    Ok(CertifiedRadius::new(spec.coordinate_quantile(rho)?, Method::ClosedForm, spec, adv, rho))
}

/// [`certified_radius`] over a grid, evaluated in parallel.
pub fn radius_curve(spec: &NoiseSpec, adv: Adversary, rho_grid: &[f64]) -> Result<Vec<(f64, CertifiedRadius)>> {
    rho_grid
        .par_iter()
        .map(|&rho| certified_radius(spec, adv, rho).map(|r| (rho, r)))
        .collect()
}

/// Growth rate `Φ` of the pair, at the scale of `spec`.
pub fn phi_function(spec: &NoiseSpec, adv: Adversary) -> Result<PhiFunction> {
    use Adversary::*;
    let fam = spec.family();
    if !supports(&fam, spec.dim(), adv) {
        return Err(unsupported(spec, adv));
    }
    let d = spec.dim() as f64;
    let du = spec.dim() as u64;
    let phi = match (fam, adv) {
        (Family::Gaussian, _) => gaussian_phi(if adv == Linf { d.sqrt() } else { 1.0 }),
        (Family::Laplace, L1) | (Family::ExpL1 { k: 1.0 }, L1) | (Family::ExpLinf { k: 1.0, j: 0.0 }, Linf) => {
            PhiFunction::new(Ok, 0.0)
        }
        (Family::Laplace, Linf) | (Family::ExpL1 { k: 1.0 }, Linf) => laplace_linf_phi(du)?,
        (Family::UniformLinf, L1) => PhiFunction::new(|_| Ok(0.5), 0.0),
        (Family::ExpLinf { k, j }, L1) if k == 1.0 && j == 0.0 => {
            let cut = 0.5 / d;
            PhiFunction::new(move |p| Ok(if p >= cut { cut } else { p }), 0.0).with_breakpoints(vec![cut])
        }
        (Family::ExpLinf { k, j }, L1) => {
            let v = (d - 1.0) / (2.0 * d) * (ln_gamma((d - 1.0 - j) / k) - ln_gamma((d - j) / k)).exp();
            PhiFunction::new(move |_| Ok(v), 0.5 / d)
        }
        (Family::ExpLinf { k, j }, Linf) => exp_linf_linf_phi(d, k, j)?,
        (Family::ExpL2 { k, j }, _) if k == 1.0 && j == 0.0 && d >= 2.0 => {
            exp_l2_phi(d, if adv == Linf { d.sqrt() } else { 1.0 })
        }
        (Family::ExpL1 { k }, L1) => exp_l1_l1_phi(d, k),
        (Family::ExpL1 { k }, Linf) => exp_l1_linf_phi(du, k)?,
        (Family::ExpLpIid { p }, L1) => exp_lp_phi(p),
        (Family::PowerLinf { a }, L1) => {
            let v = (a - d) / (2.0 * d);
            PhiFunction::new(move |_| Ok(v), 0.0)
        }
        (Family::PowerLinf { a }, Linf) => power_linf_linf_phi(d, a),
        (Family::ParetoIid { a }, L1) => pareto_phi(a),
        _ => {
            return Err(Error::Unsupported(format!(
                "no growth-rate construction for {} vs {adv}; use the closed form or level-set table",
                fam.name()
            )))
        }
    };
    Ok(phi.with_lambda(spec.lambda()))
}

// ---------------------------------------------------------------------------
// Gaussian and ℓ2 exponential

/// `Φ(p) = s · φ(Φ⁻¹(1 - p))`.
fn gaussian_phi(s: f64) -> PhiFunction {
    PhiFunction::new(move |p| Ok(s * gaussian_pdf(gaussian_cdf_inv(1.0 - p)?)), 0.0).with_factored(Factored {
        // c = Φ⁻¹(1 - p), p'(c) = -φ(c), Φ(p(c)) = s φ(c)
        quantile: Arc::new(|p| gaussian_cdf_inv(1.0 - p)),
        c_half: 0.0,
        integrand: Arc::new(move |_| -1.0 / s),
    })
}

/// `(d-1) artanh(1 - 2x)` with `x = β⁻¹(1 - ρ; (d-1)/2, (d-1)/2)`, via `½ ln((1-x)/x)`.
fn exp_l2_closed(d: f64, rho: f64) -> Result<f64> {
    let m = 0.5 * (d - 1.0);
    let x = beta_cdf_inv(1.0 - rho, m, m)?;
    // 1 - x from the mirrored solve keeps precision when x is near 1
    let y = beta_cdf_inv(rho, m, m)?;
    Ok((d - 1.0) * 0.5 * (y.ln() - x.ln()))
}

/// Growth rate of `exp(-‖x‖₂)`: `Φ(p) = s · 2 (x(1-x))^{(d-1)/2} / ((d-1) B)` with `x = β⁻¹(p)`.
fn exp_l2_phi(d: f64, s: f64) -> PhiFunction {
    let m = 0.5 * (d - 1.0);
    PhiFunction::new(
        move |p| {
            let x = beta_cdf_inv(p, m, m)?;
            Ok(s * 2.0 * x * (1.0 - x) * beta_pdf(x, m, m) / (d - 1.0))
        },
        0.0,
    )
    .with_factored(Factored {
        quantile: Arc::new(move |p| beta_cdf_inv(p, m, m)),
        c_half: 0.5,
        integrand: Arc::new(move |x: f64| (d - 1.0) / (2.0 * s * x * (1.0 - x))),
    })
}

// ---------------------------------------------------------------------------
// Laplace against ℓ∞

/// `P[Binom(n, 1/2) ≥ m]`, allowing `n = 0`.
fn binom_at_least(n: u64, m: u64) -> Result<f64> {
    if m == 0 {
        Ok(1.0)
    } else if m > n {
        Ok(0.0)
    } else {
        binomial_tail(n, m - 1)
    }
}

/// On the piece where `m` is the smallest index with `T_d(m) ≤ p`, `Φ(p) = c p + b`.
fn laplace_piece(d: u64, m: u64) -> Result<(f64, f64, f64)> {
    let t = binomial_tail(d, m)?;
    let c = 2.0 * m as f64 - d as f64;
    let b = d as f64 * binom_at_least(d - 1, m)? - c * t - d as f64 * t;
    Ok((c, b, t))
}

fn laplace_linf_phi(d: u64) -> Result<PhiFunction> {
    let mut breaks = Vec::new();
    let mut m = binomial_tail_inv(d, 0.5)?;
    while m < d {
        let t = binomial_tail(d, m)?;
        if t < 1e-14 {
            break;
        }
        breaks.push(t);
        m += 1;
    }
    Ok(PhiFunction::new(
        move |p| {
            let m = binomial_tail_inv(d, p)?;
            let (c, b, _) = laplace_piece(d, m)?;
            Ok(c * p + b)
        },
        0.0,
    )
    .with_breakpoints(breaks))
}

/// Exact piecewise integral of `1/Φ` for the binomial growth rate.
fn laplace_linf_unit(d: u64, rho: f64) -> Result<f64> {
    let p0 = 1.0 - rho;
    let mut hi = 0.5;
    let mut m = binomial_tail_inv(d, 0.5)?;
    let mut total = 0.0;
    loop {
        let (c, b, t) = laplace_piece(d, m)?;
        let lo = t.max(p0);
        if hi > lo {
            let base = c * lo + b;
            total += if c == 0.0 { (hi - lo) / b } else { (c * (hi - lo) / base).ln_1p() / c };
        }
        if t <= p0 || m >= d {
            break;
        }
        hi = t;
        m += 1;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// ℓ∞ exponential family against ℓ∞

fn exp_linf_linf_phi(d: f64, k: f64, j: f64) -> Result<PhiFunction> {
    if j == 0.0 {
        // Φ(p) = C Q(c*; (d+k-1)/k), c* = Q⁻¹(2p; d/k)
        let (r, r1) = (d / k, (d + k - 1.0) / k);
        let cc = 0.5 * k * (ln_gamma(r1) - ln_gamma(r)).exp();
        return Ok(PhiFunction::new(move |p| Ok(cc * gamma_sf(gamma_sf_inv(2.0 * p, r)?, r1)?), 0.0).with_factored(
            Factored {
                quantile: Arc::new(move |p| gamma_sf_inv(2.0 * p, r)),
                c_half: 0.0,
                integrand: Arc::new(move |c| -0.5 * gamma_pdf(c, r) / (cc * gamma_sf(c, r1).unwrap_or(f64::NAN))),
            },
        ));
    }
    if j >= d - 1.0 {
        return Err(Error::Unsupported(format!("exp_linf vs linf needs j < d - 1, got j = {j}")));
    }
    let g = Arc::new(SingularLinf::new(d, k, j));
    let ge = g.clone();
    let gq = g.clone();
    let gi = g.clone();
    Ok(PhiFunction::new(move |p| ge.phi(p), 0.0).with_factored(Factored {
        quantile: Arc::new(move |p| gq.var_for_p(p)),
        c_half: g.var_half(),
        integrand: Arc::new(move |v| gi.integrand(v)),
    }))
}

/// `γ = k ξ^{(k-1)/k} + j ξ^{-1/k}` with `ξ ~ Gamma((d-j)/k)`, `j > 0`, `k ≥ 1`.
///
/// For `k = 1` the factored variable is `ξ` itself (γ is decreasing). For
/// `k > 1` γ has its minimum at `ξ* = j/(k(k-1))`; the variable is
/// `w = ln(ξ_hi/ξ*) ≥ 0` and the lower root `ξ_lo` is found from
/// `G(u) = γ(ξ* eᵘ) - γ(ξ*) = A [expm1(s u) + (k-1) expm1(-u/k)]`.
struct SingularLinf {
    k: f64,
    j: f64,
    r: f64,
    s: f64,
    xi_star: f64,
    a: f64,
    // Γ(r + t)/Γ(r) for t = s and t = -1/k
    g_s: f64,
    g_m: f64,
}

impl SingularLinf {
    fn new(d: f64, k: f64, j: f64) -> Self {
        let r = (d - j) / k;
        let s = (k - 1.0) / k;
        let xi_star = if k > 1.0 { j / (k * (k - 1.0)) } else { f64::INFINITY };
        let a = if k > 1.0 { k * xi_star.powf(s) } else { 0.0 };
        Self {
            k,
            j,
            r,
            s,
            xi_star,
            a,
            g_s: (ln_gamma(r + s) - ln_gamma(r)).exp(),
            g_m: (ln_gamma(r - 1.0 / k) - ln_gamma(r)).exp(),
        }
    }

    fn big_g(&self, u: f64) -> f64 {
        self.a * ((self.s * u).exp_m1() + (self.k - 1.0) * (-u / self.k).exp_m1())
    }

    /// `u < 0` with `G(u) = G(w)`.
    fn lower_root(&self, w: f64) -> f64 {
        let target = self.big_g(w);
        let mut lo = -w.max(1e-300);
        while self.big_g(lo) < target && lo > -1e300 {
            lo *= 2.0;
        }
        let mut hi = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.big_g(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if (lo - hi).abs() <= 1e-16 * lo.abs() {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(P[ξ < lo] + P[ξ > hi])` under `Gamma(shape)`.
    fn mass(&self, lo: f64, hi: f64, shape: f64) -> f64 {
        let a = if lo > 0.0 { gamma_cdf(lo, shape).unwrap_or(f64::NAN) } else { 0.0 };
        let b = if hi.is_finite() { gamma_sf(hi, shape).unwrap_or(f64::NAN) } else { 0.0 };
        a + b
    }

    /// `(ξ_lo, ξ_hi)` bounding `{γ > c}` at the factored variable `v`.
    fn roots(&self, v: f64) -> (f64, f64) {
        if self.k == 1.0 {
            (v, f64::INFINITY)
        } else {
            let u = self.lower_root(v);
            (self.xi_star * u.exp(), self.xi_star * v.exp())
        }
    }

    /// `2p = P[γ > c]` as a function of the factored variable.
    fn two_p(&self, v: f64) -> f64 {
        let (lo, hi) = self.roots(v);
        self.mass(lo, hi, self.r)
    }

    /// `φ̄(c) = E γ 1(γ > c)`.
    fn phibar(&self, v: f64) -> f64 {
        let (lo, hi) = self.roots(v);
        let part_s = self.g_s * self.mass(lo, hi, self.r + self.s);
        let part_m = self.g_m * self.mass(lo, hi, self.r - 1.0 / self.k);
        self.k * part_s + self.j * part_m
    }

    fn var_half(&self) -> f64 {
        if self.k == 1.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    fn var_for_p(&self, p: f64) -> Result<f64> {
        if self.k == 1.0 {
            return gamma_cdf_inv(2.0 * p, self.r);
        }
        // two_p decreases from 1 at w = 0
        let mut hi = 1.0;
        while self.two_p(hi) > 2.0 * p {
            hi *= 2.0;
            if hi > 600.0 {
                return Err(Error::Numerical(format!("no level for p = {p}")));
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.two_p(mid) > 2.0 * p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn phi(&self, p: f64) -> Result<f64> {
        Ok(0.5 * self.phibar(self.var_for_p(p)?))
    }

    /// `p'(v) / Φ(p(v))`.
    fn integrand(&self, v: f64) -> f64 {
        let dens = |x: f64| gamma_pdf(x, self.r) * x;
        if self.k == 1.0 {
            // p = P(ξ; r)/2, dp/dξ = f(ξ)/2
            let pdf = gamma_pdf(v, self.r);
            return pdf / self.phibar(v);
        }
        let u = self.lower_root(v);
        let (lo, hi) = (self.xi_star * u.exp(), self.xi_star * v.exp());
        // du/dw = G'(w)/G'(u), G'(x) ∝ e^{s x} (-expm1(-x))
        let du_dw = if v == 0.0 {
            -1.0
        } else {
            (self.s * (v - u)).exp() * (-v).exp_m1() / (-u).exp_m1()
        };
        (dens(lo) * du_dw - dens(hi)) / self.phibar(v)
    }
}

// ---------------------------------------------------------------------------
// ℓ1 exponential family

/// `Φ = Ψ / R` with `R = 2Γ(d/k) / (k Γ((d+k-1)/k))`.
fn exp_l1_l1_phi(d: f64, k: f64) -> PhiFunction {
    let (r, r1) = (d / k, (d + k - 1.0) / k);
    let big_r = 2.0 / k * (ln_gamma(r) - ln_gamma(r1)).exp();
    if k >= 1.0 {
        PhiFunction::new(move |p| Ok(gamma_sf(gamma_sf_inv(2.0 * p, r)?, r1)? / big_r), 0.0).with_factored(Factored {
            quantile: Arc::new(move |p| gamma_sf_inv(2.0 * p, r)),
            c_half: 0.0,
            integrand: Arc::new(move |c| -0.5 * gamma_pdf(c, r) * big_r / gamma_sf(c, r1).unwrap_or(f64::NAN)),
        })
    } else {
        PhiFunction::new(move |p| Ok(gamma_cdf(gamma_cdf_inv(2.0 * p, r)?, r1)? / big_r), 0.0).with_factored(
            Factored {
                quantile: Arc::new(move |p| gamma_cdf_inv(2.0 * p, r)),
                c_half: f64::INFINITY,
                integrand: Arc::new(move |c| 0.5 * gamma_pdf(c, r) * big_r / gamma_cdf(c, r1).unwrap_or(f64::NAN)),
            },
        )
    }
}

/// `γ = S k ξ^{(k-1)/k}` with `S = Σ ζᵢ` a sum of `d` signs and `ξ ~ Gamma(d/k)`, `k > 1`.
struct SignSumGamma {
    k: f64,
    r: f64,
    r1: f64,
    /// `(s, P[S = s])` for the positive values of `S` that carry mass
    terms: Vec<(f64, f64)>,
    /// `E ξ^{(k-1)/k}`
    moment: f64,
}

impl SignSumGamma {
    fn new(d: u64, k: f64) -> Self {
        let df = d as f64;
        let lnf = |n: f64| ln_gamma(n + 1.0);
        let mut terms = Vec::new();
        let m0 = d / 2 + 1;
        for m in m0..=d {
            let lp = lnf(df) - lnf(m as f64) - lnf((d - m) as f64) - df * std::f64::consts::LN_2;
            if lp < -60.0 && !terms.is_empty() {
                break;
            }
            terms.push(((2 * m) as f64 - df, lp.exp()));
        }
        let (r, r1) = (df / k, (df + k - 1.0) / k);
        Self { k, r, r1, terms, moment: (ln_gamma(r1) - ln_gamma(r)).exp() }
    }

    fn thresh(&self, c: f64, s: f64) -> f64 {
        (c / (s * self.k)).powf(self.k / (self.k - 1.0))
    }

    /// `P[γ > c]` for `c > 0`.
    fn tail(&self, c: f64) -> f64 {
        self.terms.iter().map(|&(s, w)| w * gamma_sf(self.thresh(c, s), self.r).unwrap_or(f64::NAN)).sum()
    }

    /// `E γ 1(γ > c)` for `c ≥ 0`.
    fn phibar(&self, c: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(s, w)| w * s * self.k * self.moment * gamma_sf(self.thresh(c, s), self.r1).unwrap_or(f64::NAN))
            .sum()
    }

    /// `-d/dc P[γ > c]`.
    fn density(&self, c: f64) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        let e = self.k / (self.k - 1.0);
        self.terms
            .iter()
            .map(|&(s, w)| {
                let t = self.thresh(c, s);
                // dt/dc = e t / c
                w * gamma_pdf(t, self.r) * e * t / c
            })
            .sum()
    }

    fn tail_inv(&self, p: f64) -> Result<f64> {
        let mut hi = 1.0;
        while self.tail(hi) > p {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::Numerical(format!("no level for p = {p}")));
            }
        }
        let mut lo = 0.0;
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if self.tail(mid) > p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn exp_l1_linf_phi(d: u64, k: f64) -> Result<PhiFunction> {
    if k == 1.0 {
        return laplace_linf_phi(d);
    }
    if k < 1.0 {
        return Err(Error::Unsupported("exp_l1 vs linf needs k >= 1".into()));
    }
    let g = Arc::new(SignSumGamma::new(d, k));
    // {γ > 0} has mass P[S > 0]; above it Φ is flat at φ̄(0)
    let p_flat = g.tail(0.0);
    let flat = g.phibar(0.0);
    Ok(PhiFunction::new(
        move |p| {
            if p >= p_flat {
                Ok(flat)
            } else {
                Ok(g.phibar(g.tail_inv(p)?))
            }
        },
        0.0,
    )
    .with_breakpoints(vec![p_flat]))
}

/// Flat stretch `p ∈ [P[S>0], 1/2]` in closed form, the rest in the threshold variable `c`.
fn exp_l1_linf_unit(d: u64, k: f64, rho: f64) -> Result<f64> {
    if k == 1.0 {
        return laplace_linf_unit(d, rho);
    }
    let g = SignSumGamma::new(d, k);
    let p_flat = g.tail(0.0);
    let flat = g.phibar(0.0);
    let p0 = 1.0 - rho;
    if p0 >= p_flat {
        return Ok((0.5 - p0) / flat);
    }
    let c0 = g.tail_inv(p0)?;
    let tol = Tol { abs: POLICY.quad_abs_tol, rel: 1e-10 };
    let curve = integrate(|c| g.density(c) / g.phibar(c), 0.0, c0, tol)?;
    Ok((0.5 - p_flat) / flat + curve)
}

// ---------------------------------------------------------------------------
// Independent exponential-power coordinates

/// `n` with `p = 1/n` for the closed polylog forms.
fn polylog_order(p: f64) -> Option<u32> {
    let n = (1.0 / p).round();
    if (2.0..=4.0).contains(&n) && (n * p - 1.0).abs() < 1e-12 {
        Some(n as u32)
    } else {
        None
    }
}

fn exp_lp_phi(p: f64) -> PhiFunction {
    let norm = 2.0 * ln_gamma(1.0 + 1.0 / p).exp();
    let shape = 1.0 / p;
    if p >= 1.0 {
        // Φ(p₀) = e^{-c^p} / (2Γ(1+1/p)), c^p = GammaCDF⁻¹(1 - 2p₀; 1/p)
        PhiFunction::new(move |q| Ok((-gamma_sf_inv(2.0 * q, shape)?).exp() / norm), 0.0)
    } else {
        PhiFunction::new(move |q| Ok(-(-gamma_cdf_inv(2.0 * q, shape)?).exp_m1() / norm), 0.0).with_factored(
            Factored {
                // variable t = c^p; p₀ = GammaCDF(t)/2
                quantile: Arc::new(move |q| gamma_cdf_inv(2.0 * q, shape)),
                c_half: f64::INFINITY,
                integrand: Arc::new(move |t| 0.5 * gamma_pdf(t, shape) * norm / -(-t).exp_m1()),
            },
        )
    }
}

/// `Σ_{i<n} n!/(n-1-i)! t^{n-1-i} Li_{i+1}(e^{-t})`, i.e. `∫_{t^n}^∞ dc / (e^{c^{1/n}} - 1)`.
pub fn exp_lp_polylog(n: u32, t: f64) -> Result<f64> {
    let z = (-t).exp();
    let mut sum = 0.0;
    let mut coef = n as f64; // n (n-1) ... (n-i)
    for i in 0..n {
        let power = t.powi((n - 1 - i) as i32);
        let li = if i == 0 { -(-z).ln_1p() } else { polylog(i + 1, z)? };
        sum += coef * power * li;
        coef *= (n - 1 - i) as f64;
    }
    Ok(sum)
}

fn exp_lp_unit(p: f64, rho: f64) -> Result<(f64, Method)> {
    if p >= 1.0 {
        return Ok((gamma_cdf_inv(2.0 * rho - 1.0, 1.0 / p)?.powf(1.0 / p), Method::ClosedForm));
    }
    if let Some(n) = polylog_order(p) {
        let t = gamma_cdf_inv(2.0 * (1.0 - rho), 1.0 / p)?;
        return Ok((exp_lp_polylog(n, t)?, Method::ClosedForm));
    }
    Ok((integrate_inverse_phi(&exp_lp_phi(p), rho)?, Method::DifferentialQuadrature))
}

// ---------------------------------------------------------------------------
// Power laws

/// `Φ(p) = (a-d)/2 · Υ(Υ⁻¹(2p; d, a-d); d, a+1-d)`.
fn power_linf_linf_phi(d: f64, a: f64) -> PhiFunction {
    let half = 0.5 * (a - d);
    let ln_b = ln_gamma(d) + ln_gamma(a - d) - ln_gamma(a);
    PhiFunction::new(
        move |p| Ok(half * beta_prime_cdf(beta_prime_cdf_inv(2.0 * p, d, a - d)?, d, a + 1.0 - d)?),
        0.0,
    )
    .with_factored(Factored {
        quantile: Arc::new(move |p| beta_prime_cdf_inv(2.0 * p, d, a - d)),
        c_half: f64::INFINITY,
        integrand: Arc::new(move |c: f64| {
            // p = Υ(c)/2, dp/dc = c^{d-1} (1+c)^{-a} / (2B)
            let dens = ((d - 1.0) * c.ln() - a * c.ln_1p() - ln_b).exp();
            0.5 * dens / (half * beta_prime_cdf(c, d, a + 1.0 - d).unwrap_or(f64::NAN))
        }),
    })
}

fn pareto_phi(a: f64) -> PhiFunction {
    PhiFunction::new(move |p| Ok(0.5 * a * -((a + 1.0) / a * (-2.0 * p).ln_1p()).exp_m1()), 0.0)
}

/// `∫ 2 / (a (1 - (1-2p)^{(a+1)/a})) dp`, checked against the series form when it converges quickly.
fn pareto_unit(a: f64, rho: f64) -> Result<f64> {
    let quad = integrate_inverse_phi(&pareto_phi(a), rho)?;
    let z = (2.0 * rho - 1.0).powf(1.0 + 1.0 / a);
    if z <= 0.99 {
        let series = (2.0 * rho - 1.0) / a * hyp2f1_special(a, z)?;
        if (series - quad).abs() > 1e-7 * quad.abs().max(1e-300) {
            return Err(Error::Numerical(format!(
                "pareto radius: quadrature {quad} and series {series} disagree at rho = {rho}"
            )));
        }
    }
    Ok(quad)
}

/// The hypergeometric form of the Pareto radius at unit scale.
pub fn pareto_series(a: f64, rho: f64) -> Result<f64> {
    let z = (2.0 * rho - 1.0).powf(1.0 + 1.0 / a);
    Ok((2.0 * rho - 1.0) / a * hyp2f1_special(a, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sp(f: Family, l: f64, d: usize) -> NoiseSpec {
        NoiseSpec::new(f, l, d).unwrap()
    }

    fn r(spec: &NoiseSpec, adv: Adversary, rho: f64) -> f64 {
        certified_radius(spec, adv, rho).unwrap().value
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn golden_values() {
        assert!((r(&sp(Family::Gaussian, 1.0, 10), Adversary::L2, 0.9) - 1.281_551_565_5).abs() < 1e-9);
        assert!((r(&sp(Family::Laplace, 1.0, 10), Adversary::L1, 0.75) - 2f64.ln()).abs() < 1e-12);
        assert_eq!(r(&sp(Family::UniformLinf, 1.0, 10), Adversary::L1, 0.75), 0.5);
        let e = Family::ExpLinf { k: 1.0, j: 0.0 };
        assert!((r(&sp(e, 1.0, 4), Adversary::L1, 0.6) - 0.8).abs() < 1e-12);
        assert!((r(&sp(e, 1.0, 2), Adversary::L1, 0.9) - (2.5f64.ln() + 1.0)).abs() < 1e-12);
        assert!((r(&sp(Family::UniformLinf, 1.0, 2), Adversary::Linf, 0.75) - 2.0 * (1.0 - 0.75f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn rho_edge_cases() {
        let g = sp(Family::Gaussian, 1.0, 3);
        let z = certified_radius(&g, Adversary::L2, 0.4).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(z.not_certified);
        assert!(certified_radius(&g, Adversary::L2, 1.2).is_err());
        assert!(certified_radius(&g, Adversary::L2, f64::NAN).is_err());
        assert_eq!(r(&g, Adversary::L2, 1.0), f64::INFINITY);
        let u = sp(Family::UniformLinf, 1.0, 3);
        assert_eq!(r(&u, Adversary::L1, 1.0), 1.0);
        assert!(r(&sp(Family::UniformL2, 1.0, 3), Adversary::L2, 1.0).is_finite());
    }

    #[test]
    fn unsupported_pairs_name_alternatives() {
        let e = certified_radius(&sp(Family::PowerL2 { a: 10.0, k: 1.0 }, 1.0, 3), Adversary::L1, 0.9).unwrap_err();
        match e {
            Error::UnsupportedPair { alternatives, .. } => {
                assert_eq!(alternatives, vec!["power_l2 vs level-set l2".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        assert!(certified_radius(&sp(Family::Laplace, 1.0, 3), Adversary::L2, 0.9).is_err());
    }

    #[test]
    fn general_exp_linf_l1_high_branch_is_flagged() {
        let s = sp(Family::ExpLinf { k: 2.0, j: 1.0 }, 1.0, 4);
        let lo = certified_radius(&s, Adversary::L1, 0.8).unwrap();
        assert!(!lo.conservative);
        let hi = certified_radius(&s, Adversary::L1, 0.95).unwrap();
        assert!(hi.conservative);
        let edge = r(&s, Adversary::L1, 1.0 - 0.125);
        assert!((hi.value - edge).abs() < 1e-12);
    }

    #[test]
    fn phi_examples() {
        let lap = phi_function(&sp(Family::Laplace, 1.0, 5), Adversary::L1).unwrap();
        assert_eq!(lap.eval(0.2).unwrap(), 0.2);
        let e = phi_function(&sp(Family::ExpLinf { k: 1.0, j: 0.0 }, 1.0, 4), Adversary::L1).unwrap();
        assert_eq!(e.eval(0.3).unwrap(), 0.125);
        assert_eq!(e.eval(0.05).unwrap(), 0.05);
        let g = phi_function(&sp(Family::Gaussian, 1.0, 4), Adversary::L2).unwrap();
        assert!((g.eval(0.5).unwrap() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn integral_examples() {
        let lap = PhiFunction::new(Ok, 0.0);
        assert!((integrate_inverse_phi(&lap, 0.75).unwrap() - 2f64.ln()).abs() < 1e-10);
        let cst = PhiFunction::new(|_| Ok(0.2), 0.0);
        assert!((integrate_inverse_phi(&cst, 0.8).unwrap() - 0.3 / 0.2).abs() < 1e-12);
        let g = phi_function(&sp(Family::Gaussian, 1.0, 4), Adversary::L2).unwrap();
        assert!((integrate_inverse_phi(&g.without_factored(), 0.9).unwrap() - 1.281_551_565_5).abs() < 1e-7);
        let bounded = PhiFunction::new(|_| Ok(1.0), 0.25);
        assert!(integrate_inverse_phi(&bounded, 0.9).is_err());
    }

    #[test]
    fn laplace_linf_exact_matches_quadrature() {
        for d in [1u64, 2, 3, 8, 33] {
            let phi = laplace_linf_phi(d).unwrap();
            for &rho in &[0.55, 0.8, 0.99] {
                let exact = laplace_linf_unit(d, rho).unwrap();
                let q = integrate_inverse_phi(&phi, rho).unwrap();
                assert!(rel(q, exact) < 1e-8, "d {d} rho {rho}: {q} vs {exact}");
            }
        }
        // one coordinate: ℓ∞ = ℓ1
        assert!((laplace_linf_unit(1, 0.75).unwrap() - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn laplace_linf_approaches_gaussian_shape() {
        let d = 3072;
        let v = laplace_linf_unit(d, 0.9).unwrap();
        let approx = gaussian_cdf_inv(0.9).unwrap() / (d as f64).sqrt();
        assert!(rel(v, approx) < 0.05, "{v} vs {approx}");
    }

    #[test]
    fn factored_and_direct_forms_agree() {
        let cases: Vec<(NoiseSpec, Adversary)> = vec![
            (sp(Family::Gaussian, 1.0, 4), Adversary::L2),
            (sp(Family::ExpL2 { k: 1.0, j: 0.0 }, 1.0, 6), Adversary::L2),
            (sp(Family::ExpLinf { k: 2.0, j: 0.0 }, 1.0, 5), Adversary::Linf),
            (sp(Family::ExpLinf { k: 1.0, j: 1.5 }, 1.0, 5), Adversary::Linf),
            (sp(Family::ExpLinf { k: 2.5, j: 2.0 }, 1.0, 6), Adversary::Linf),
            (sp(Family::ExpL1 { k: 2.0 }, 1.0, 4), Adversary::L1),
            (sp(Family::ExpL1 { k: 0.5 }, 1.0, 4), Adversary::L1),
            (sp(Family::ExpLpIid { p: 0.7 }, 1.0, 3), Adversary::L1),
            (sp(Family::PowerLinf { a: 9.0 }, 1.0, 4), Adversary::Linf),
        ];
        for (s, adv) in cases {
            let phi = phi_function(&s, adv).unwrap();
            assert!(phi.has_factored());
            for &rho in &[0.6, 0.9, 0.99] {
                let f = integrate_inverse_phi(&phi, rho).unwrap();
                let direct = integrate_inverse_phi(&phi.without_factored(), rho).unwrap();
                assert!(rel(f, direct) < 1e-6, "{s} {adv} rho {rho}: {f} vs {direct}");
            }
        }
    }

    #[test]
    fn exp_l1_linf_flat_stretch() {
        // the factored integral skips p ∈ [P[S>0], 1/2]; the wrapper restores it
        let s = sp(Family::ExpL1 { k: 2.0 }, 1.0, 4);
        for &rho in &[0.6, 0.9] {
            let via_dispatch = r(&s, Adversary::Linf, rho);
            let direct = integrate_inverse_phi(&phi_function(&s, Adversary::Linf).unwrap().without_factored(), rho).unwrap();
            assert!(rel(via_dispatch, direct) < 1e-6, "rho {rho}: {via_dispatch} vs {direct}");
        }
    }

    #[test]
    fn exp_linf_vanishing_singularity() {
        for k in [1.0, 2.0] {
            let plain = r(&sp(Family::ExpLinf { k, j: 0.0 }, 1.0, 8), Adversary::Linf, 0.8);
            let s = r(&sp(Family::ExpLinf { k, j: 1e-7 }, 1.0, 8), Adversary::Linf, 0.8);
            assert!(rel(s, plain) < 1e-4, "k {k}: {s} vs {plain}");
        }
    }

    #[test]
    fn exp_l2_closed_form_matches_phi() {
        for d in [2usize, 5, 64] {
            let s = sp(Family::ExpL2 { k: 1.0, j: 0.0 }, 1.0, d);
            let phi = phi_function(&s, Adversary::L2).unwrap().without_factored();
            for &rho in &[0.55, 0.8, 0.99] {
                let c = r(&s, Adversary::L2, rho);
                let q = integrate_inverse_phi(&phi, rho).unwrap();
                assert!(rel(q, c) < 1e-6, "d {d} rho {rho}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn exp_l1_k1_is_laplace() {
        let a = sp(Family::ExpL1 { k: 1.0 }, 1.0, 6);
        let phi = exp_l1_l1_phi(6.0, 1.0);
        for &rho in &[0.6, 0.9] {
            let q = integrate_inverse_phi(&phi, rho).unwrap();
            assert!(rel(q, r(&a, Adversary::L1, rho)) < 1e-8);
        }
    }

    #[test]
    fn exp_lp_polylog_matches_quadrature() {
        for p in [0.5, 1.0 / 3.0, 0.25] {
            let phi = exp_lp_phi(p);
            for &rho in &[0.6, 0.8, 0.95] {
                let closed = exp_lp_unit(p, rho).unwrap().0;
                let q = integrate_inverse_phi(&phi, rho).unwrap();
                assert!(rel(closed, q) < 1e-8, "p {p} rho {rho}: {closed} vs {q}");
            }
        }
    }

    #[test]
    fn exp_lp_reductions() {
        let one = sp(Family::ExpLpIid { p: 1.0 }, 1.3, 5);
        let lap = sp(Family::Laplace, 1.3, 5);
        for &rho in &[0.6, 0.9, 0.999] {
            assert!(rel(r(&one, Adversary::L1, rho), r(&lap, Adversary::L1, rho)) < 1e-10);
        }
        let g = sp(Family::Gaussian, 0.7, 5);
        for &rho in &[0.6, 0.9] {
            let a = radius_iid(&g, rho).unwrap().value;
            assert!(rel(a, r(&g, Adversary::L1, rho)) < 1e-12);
        }
    }

    #[test]
    fn pareto_series_and_quadrature() {
        for a in [0.5, 1.0, 3.0, 10.0] {
            for &rho in &[0.55, 0.7, 0.9] {
                let q = pareto_unit(a, rho).unwrap();
                let s = pareto_series(a, rho).unwrap();
                assert!(rel(q, s) < 1e-7, "a {a} rho {rho}");
            }
        }
        // slope 2λ/a at ρ = 1/2
        let s = sp(Family::ParetoIid { a: 4.0 }, 2.0, 3);
        let h = 1e-7;
        assert!(rel(r(&s, Adversary::L1, 0.5 + h) / h, 2.0 * 2.0 / 4.0) < 1e-5);
    }

    #[test]
    fn exp_linf_linf_phi_limit() {
        let d = 64.0;
        let phi = exp_linf_linf_phi(d, 512.0, 0.0).unwrap();
        for &p in &[0.2, 0.45, 0.5] {
            assert!(rel(phi.eval(p).unwrap(), d / 2.0) < 0.01, "p {p}");
        }
        // smaller p needs larger k
        let mut last = f64::INFINITY;
        for k in [512.0, 1e4, 1e5] {
            let gap = (exp_linf_linf_phi(d, k, 0.0).unwrap().eval(0.05).unwrap() - d / 2.0).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last / (d / 2.0) < 1e-4);
    }

    #[test]
    fn exp_linf_l1_limit_is_uniform() {
        let d = 64;
        let e = NoiseSpec::from_sigma(Family::ExpLinf { k: 512.0, j: 0.0 }, 1.0, d).unwrap();
        let u = NoiseSpec::from_sigma(Family::UniformLinf, 1.0, d).unwrap();
        for &rho in &[0.6, 0.9] {
            assert!(rel(r(&e, Adversary::L1, rho), r(&u, Adversary::L1, rho)) < 0.01);
        }
    }

    #[test]
    fn symmetry_rows() {
        let d = 49;
        let g = sp(Family::Gaussian, 1.7, d);
        let l2 = r(&g, Adversary::L2, 0.83);
        assert!(rel(r(&g, Adversary::Linf, 0.83) * 7.0, l2) < 1e-15);
        assert_eq!(r(&g, Adversary::L1, 0.83), l2);
    }

    #[test]
    fn curve_is_monotone() {
        let g = sp(Family::Gaussian, 1.0, 3);
        let grid: Vec<f64> = (1..50).map(|i| 0.5 + i as f64 / 100.0).collect();
        let c = radius_curve(&g, Adversary::L2, &grid).unwrap();
        for w in c.windows(2) {
            assert!(w[1].1.value >= w[0].1.value);
        }
        let tiny = radius_curve(&g, Adversary::L2, &[0.5 + 1e-9]).unwrap();
        assert!(tiny[0].1.value < 1e-8);
    }

    #[test]
    fn json_record() {
        let g = sp(Family::Gaussian, 1.0, 3);
        let v = certified_radius(&g, Adversary::L2, 1.0).unwrap().to_json();
        assert_eq!(v["radius"], "inf");
        assert_eq!(v["method"], "closed_form");
    }
}
