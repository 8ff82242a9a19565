//! Smoothing distributions: specification, sampling, densities and scale
//! conversion.
//!
//! Norm-based families are sampled as `radius * direction`, where the radius
//! follows the one-dimensional radial law and the direction is uniform with
//! respect to the cone measure of the unit sphere of the defining norm.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::specfun::{
    gamma_cdf, gamma_cdf_inv, gaussian_cdf, gaussian_cdf_inv, ln_beta, ln_gamma,
};

/// Shape of a smoothing density. Scale and dimension live in [`NoiseSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `exp(-‖x/λ‖₂² / 2)`
    Gaussian,
    /// `exp(-‖x/λ‖₁)`
    Laplace,
    /// uniform on the cube `‖x‖∞ ≤ λ`
    UniformLinf,
    /// uniform on the ball `‖x‖₂ ≤ λ`
    UniformL2,
    /// `‖x/λ‖∞^{-j} exp(-‖x/λ‖∞^k)`
    ExpLinf { k: f64, j: f64 },
    /// `‖x/λ‖₂^{-j} exp(-‖x/λ‖₂^k)`
    ExpL2 { k: f64, j: f64 },
    /// `exp(-‖x/λ‖₁^k)`
    ExpL1 { k: f64 },
    /// `exp(-‖x/λ‖_p^p)`, independent coordinates
    ExpLpIid { p: f64 },
    /// `(1 + ‖x/λ‖∞)^{-a}`
    PowerLinf { a: f64 },
    /// `(1 + ‖x/λ‖₂^k)^{-a}`
    PowerL2 { a: f64, k: f64 },
    /// `Π (1 + |x_i|/λ)^{-(a+1)}`
    ParetoIid { a: f64 },
}

impl Family {
    /// Serialization name, e.g. `exp_linf`.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Laplace => "laplace",
            Family::UniformLinf => "uniform_linf",
            Family::UniformL2 => "uniform_l2",
            Family::ExpLinf { .. } => "exp_linf",
            Family::ExpL2 { .. } => "exp_l2",
            Family::ExpL1 { .. } => "exp_l1",
            Family::ExpLpIid { .. } => "exp_lp_iid",
            Family::PowerLinf { .. } => "power_linf",
            Family::PowerL2 { .. } => "power_l2",
            Family::ParetoIid { .. } => "pareto_iid",
        }
    }

    /// Keys accepted by this family besides `family`, `lambda` and `dim`.
    fn shape_keys(&self) -> &'static [&'static str] {
        match self {
            Family::ExpLinf { .. } | Family::ExpL2 { .. } => &["k", "j"],
            Family::ExpL1 { .. } | Family::ExpLpIid { .. } => &["k"],
            Family::PowerLinf { .. } | Family::ParetoIid { .. } => &["a"],
            Family::PowerL2 { .. } => &["k", "a"],
            _ => &[],
        }
    }

    /// Builds a family from its name and optional `k`, `j`, `a`.
    ///
    /// For `exp_lp_iid` the exponent `p` is read from `k`.
    pub fn from_parts(name: &str, k: Option<f64>, j: Option<f64>, a: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::InvalidSpec(format!("family {name} needs `{key}`")))
        };
        let fam = match name {
            "gaussian" => Family::Gaussian,
            "laplace" => Family::Laplace,
            "uniform_linf" => Family::UniformLinf,
            "uniform_l2" => Family::UniformL2,
            "exp_linf" => Family::ExpLinf { k: need(k, "k")?, j: j.unwrap_or(0.0) },
            "exp_l2" => Family::ExpL2 { k: need(k, "k")?, j: j.unwrap_or(0.0) },
            "exp_l1" => Family::ExpL1 { k: need(k, "k")? },
            "exp_lp_iid" => Family::ExpLpIid { p: need(k, "k")? },
            "power_linf" => Family::PowerLinf { a: need(a, "a")? },
            "power_l2" => Family::PowerL2 { a: need(a, "a")?, k: k.unwrap_or(1.0) },
            "pareto_iid" => Family::ParetoIid { a: need(a, "a")? },
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        let keys = fam.shape_keys();
        for (key, v) in [("k", k), ("j", j), ("a", a)] {
            if v.is_some() && !keys.contains(&key) {
                return Err(Error::InvalidSpec(format!("family {name} takes no `{key}`")));
            }
        }
        Ok(fam)
    }

    /// Coordinates are independent.
    pub fn is_iid(&self) -> bool {
        matches!(
            self,
            Family::Gaussian | Family::Laplace | Family::UniformLinf | Family::ExpLpIid { .. } | Family::ParetoIid { .. }
        )
    }

    /// Density depends on `‖x‖₂` only.
    pub fn is_spherical(&self) -> bool {
        matches!(
            self,
            Family::Gaussian | Family::UniformL2 | Family::ExpL2 { .. } | Family::PowerL2 { .. }
        )
    }
}

/// A smoothing distribution in dimension `dim` with scale `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    family: Family,
    lambda: f64,
    dim: usize,
}

/// One draw of noise.
pub type NoiseSample = Vec<f64>;

fn pos(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} = {v} must be positive and finite")))
    }
}

impl NoiseSpec {
    pub fn new(family: Family, lambda: f64, dim: usize) -> Result<Self> {
        pos("lambda", lambda)?;
        if dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        let d = dim as f64;
        match family {
            Family::ExpLinf { k, j } | Family::ExpL2 { k, j } => {
                pos("k", k)?;
                if !(j.is_finite() && j >= 0.0 && j < d) {
                    return Err(Error::InvalidSpec(format!("j = {j} must satisfy 0 <= j < d = {dim}")));
                }
            }
            Family::ExpL1 { k } => pos("k", k)?,
            Family::ExpLpIid { p } => pos("p", p)?,
            Family::PowerLinf { a } => {
                pos("a", a)?;
                if a <= d {
                    return Err(Error::InvalidSpec(format!("power_linf needs a > d, got a = {a}, d = {dim}")));
                }
            }
            Family::PowerL2 { a, k } => {
                pos("a", a)?;
                pos("k", k)?;
                if a * k <= d {
                    return Err(Error::InvalidSpec(format!("power_l2 needs a k > d, got a = {a}, k = {k}, d = {dim}")));
                }
            }
            Family::ParetoIid { a } => pos("a", a)?,
            _ => {}
        }
        Ok(Self { family, lambda, dim })
    }

    /// Spec whose per-coordinate second moment is `sigma²`.
    pub fn from_sigma(family: Family, sigma: f64, dim: usize) -> Result<Self> {
        Self::new(family, lambda_for_sigma(family, dim, sigma)?, dim)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same shape with a different scale.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.family, lambda, self.dim)
    }

    /// `sqrt(E ‖δ‖₂² / d)`.
    pub fn sigma(&self) -> Result<f64> {
        sigma_for_lambda(self.family, self.dim, self.lambda)
    }

    /// Unnormalized `log q(x)`.
    ///
    /// Families with `j > 0` are singular at the origin and return
    /// [`Error::Singular`] there. Points outside a bounded support give `-∞`.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Domain(format!("point has dim {}, spec has {}", x.len(), self.dim)));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("point has non-finite entries".into()));
        }
        let l = self.lambda;
        let linf = || x.iter().fold(0.0f64, |m, v| m.max(v.abs())) / l;
        let l1 = || x.iter().map(|v| v.abs()).sum::<f64>() / l;
        let l2 = || x.iter().map(|v| v * v).sum::<f64>().sqrt() / l;
        let radial_exp = |r: f64, k: f64, j: f64| {
            if j > 0.0 && r == 0.0 {
                Err(Error::Singular("the origin".into()))
            } else {
                let sing = if j > 0.0 { -j * r.ln() } else { 0.0 };
                Ok(sing - r.powf(k))
            }
        };
        match self.family {
            Family::Gaussian => {
                let r = l2();
                Ok(-0.5 * r * r)
            }
            Family::Laplace => Ok(-l1()),
            Family::UniformLinf => Ok(if linf() <= 1.0 { 0.0 } else { f64::NEG_INFINITY }),
            Family::UniformL2 => Ok(if l2() <= 1.0 { 0.0 } else { f64::NEG_INFINITY }),
            Family::ExpLinf { k, j } => radial_exp(linf(), k, j),
            Family::ExpL2 { k, j } => radial_exp(l2(), k, j),
            Family::ExpL1 { k } => Ok(-l1().powf(k)),
            Family::ExpLpIid { p } => Ok(-x.iter().map(|v| (v.abs() / l).powf(p)).sum::<f64>()),
            Family::PowerLinf { a } => Ok(-a * linf().ln_1p()),
            Family::PowerL2 { a, k } => Ok(-a * l2().powf(k).ln_1p()),
            Family::ParetoIid { a } => Ok(-(a + 1.0) * x.iter().map(|v| (v.abs() / l).ln_1p()).sum::<f64>()),
        }
    }

    /// `ln ∫ exp(log_density)`.
    pub fn log_norm_const(&self) -> f64 {
        let d = self.dim as f64;
        let ln_l = self.lambda.ln();
        let ln2 = std::f64::consts::LN_2;
        let ln_vball = ln_unit_ball_volume(self.dim);
        match self.family {
            Family::Gaussian => 0.5 * d * (2.0 * PI).ln() + d * ln_l,
            Family::Laplace | Family::UniformLinf => d * (ln2 + ln_l),
            Family::UniformL2 => ln_vball + d * ln_l,
            Family::ExpLinf { k, j } => d.ln() + d * (ln2 + ln_l) + ln_gamma((d - j) / k) - k.ln(),
            Family::ExpL2 { k, j } => d.ln() + ln_vball + d * ln_l + ln_gamma((d - j) / k) - k.ln(),
            Family::ExpL1 { k } => d * (ln2 + ln_l) + ln_gamma(d / k) - k.ln() - ln_gamma(d),
            Family::ExpLpIid { p } => d * (ln2 + ln_l + ln_gamma(1.0 + 1.0 / p)),
            Family::PowerLinf { a } => d.ln() + d * (ln2 + ln_l) + ln_beta(d, a - d),
            Family::PowerL2 { a, k } => d.ln() + ln_vball + d * ln_l + ln_beta(d / k, a - d / k) - k.ln(),
            Family::ParetoIid { a } => d * (ln2 + ln_l - a.ln()),
        }
    }

    /// Marginal CDF of one coordinate, for independent-coordinate families.
    pub fn coordinate_cdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::Domain("coordinate_cdf: t is NaN".into()));
        }
        let z = t / self.lambda;
        let half_tail = |mass_beyond: f64| if z < 0.0 { 0.5 * mass_beyond } else { 1.0 - 0.5 * mass_beyond };
        match self.family {
            Family::Gaussian => gaussian_cdf(z),
            Family::Laplace => Ok(half_tail((-z.abs()).exp())),
            Family::UniformLinf => Ok((0.5 * (z + 1.0)).clamp(0.0, 1.0)),
            Family::ExpLpIid { p } => {
                let g = gamma_cdf(z.abs().powf(p), 1.0 / p)?;
                Ok(half_tail(1.0 - g))
            }
            Family::ParetoIid { a } => Ok(half_tail((-a * z.abs().ln_1p()).exp())),
            _ => Err(self.not_iid("coordinate_cdf")),
        }
    }

    /// Inverse of [`NoiseSpec::coordinate_cdf`].
    pub fn coordinate_quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("coordinate_quantile: u = {u} not in [0, 1]")));
        }
        let l = self.lambda;
        // mass beyond |z| on the relevant side, times 2
        let (tail, sign) = if u < 0.5 { (2.0 * u, -1.0) } else { (2.0 * (1.0 - u), 1.0) };
        let z = match self.family {
            Family::Gaussian => return Ok(l * gaussian_cdf_inv(u)?),
            Family::UniformLinf => return Ok(l * (2.0 * u - 1.0)),
            Family::Laplace => -tail.ln(),
            Family::ExpLpIid { p } => gamma_cdf_inv(1.0 - tail, 1.0 / p)?.powf(1.0 / p),
            Family::ParetoIid { a } => tail.powf(-1.0 / a) - 1.0,
            _ => return Err(self.not_iid("coordinate_quantile")),
        };
        Ok(sign * l * z)
    }

    fn not_iid(&self, op: &str) -> Error {
        Error::Unsupported(format!("{op} needs an independent-coordinate family, got {}", self.family.name()))
    }

    /// Fills `out` (length `dim`) with one draw.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim, "sample buffer has the wrong length");
        let d = self.dim as f64;
        let l = self.lambda;
        match self.family {
            Family::Gaussian => {
                for v in out.iter_mut() {
                    *v = l * rng.sample::<f64, _>(StandardNormal);
                }
            }
            Family::Laplace => {
                for chunk in out.chunks_mut(64) {
                    let signs: u64 = rng.random();
                    for (i, v) in chunk.iter_mut().enumerate() {
                        *v = l * bit_sign(signs, i) * rng.sample::<f64, _>(Exp1);
                    }
                }
            }
            Family::UniformLinf => {
                for v in out.iter_mut() {
                    *v = l * rng.random_range(-1.0..=1.0);
                }
            }
            Family::UniformL2 => {
                let r = l * rng.random::<f64>().powf(1.0 / d);
                l2_direction(rng, out);
                scale(out, r);
            }
            Family::ExpLinf { k, j } => {
                let r = l * gamma_draw(rng, (d - j) / k).powf(1.0 / k);
                linf_direction(rng, out);
                scale(out, r);
            }
            Family::ExpL2 { k, j } => {
                let r = l * gamma_draw(rng, (d - j) / k).powf(1.0 / k);
                l2_direction(rng, out);
                scale(out, r);
            }
            Family::ExpL1 { k } => {
                let r = l * gamma_draw(rng, d / k).powf(1.0 / k);
                l1_direction(rng, out);
                scale(out, r);
            }
            Family::ExpLpIid { p } => {
                // G^{1/p} for G ~ Gamma(1/p) has the law of U Y^{1/p} with Y ~ Gamma(1 + 1/p)
                let g = Gamma::new(1.0 + 1.0 / p, 1.0).expect("validated shape");
                for v in out.iter_mut() {
                    *v = l * rng.random_range(-1.0..1.0) * g.sample(rng).powf(1.0 / p);
                }
            }
            Family::PowerLinf { a } => {
                let r = l * beta_prime_draw(rng, d, a - d);
                linf_direction(rng, out);
                scale(out, r);
            }
            Family::PowerL2 { a, k } => {
                let r = l * beta_prime_draw(rng, d / k, a - d / k).powf(1.0 / k);
                l2_direction(rng, out);
                scale(out, r);
            }
            Family::ParetoIid { a } => {
                // |x| = U^{-1/a} - 1 = expm1(E/a) with E ~ Exp(1)
                for chunk in out.chunks_mut(64) {
                    let signs: u64 = rng.random();
                    for (i, v) in chunk.iter_mut().enumerate() {
                        *v = l * bit_sign(signs, i) * (rng.sample::<f64, _>(Exp1) / a).exp_m1();
                    }
                }
            }
        }
    }

    /// `count` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<NoiseSample> {
        (0..count)
            .map(|_| {
                let mut v = vec![0.0; self.dim];
                self.sample_into(rng, &mut v);
                v
            })
            .collect()
    }
}

impl fmt::Display for NoiseSpec {
    /// Flat `key=value` form with keys in the order `family k j a lambda dim`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family.name())?;
        match self.family {
            Family::ExpLinf { k, j } | Family::ExpL2 { k, j } => write!(f, " k={k} j={j}")?,
            Family::ExpL1 { k } => write!(f, " k={k}")?,
            Family::ExpLpIid { p } => write!(f, " k={p}")?,
            Family::PowerLinf { a } | Family::ParetoIid { a } => write!(f, " a={a}")?,
            Family::PowerL2 { a, k } => write!(f, " k={k} a={a}")?,
            _ => {}
        }
        write!(f, " lambda={} dim={}", self.lambda, self.dim)
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let (mut k, mut j, mut a, mut lambda, mut dim) = (None, None, None, None, None);
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))?;
            let num = || val.parse::<f64>().map_err(|_| Error::Parse(format!("bad number for {key}: `{val}`")));
            let slot = match key {
                "family" => {
                    if family.replace(val.to_string()).is_some() {
                        return Err(Error::Parse("duplicate key `family`".into()));
                    }
                    continue;
                }
                "dim" => {
                    let v = val.parse::<usize>().map_err(|_| Error::Parse(format!("bad dim `{val}`")))?;
                    if dim.replace(v).is_some() {
                        return Err(Error::Parse("duplicate key `dim`".into()));
                    }
                    continue;
                }
                "k" => &mut k,
                "j" => &mut j,
                "a" => &mut a,
                "lambda" => &mut lambda,
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            };
            if slot.replace(num()?).is_some() {
                return Err(Error::Parse(format!("duplicate key `{key}`")));
            }
        }
        let family = family.ok_or_else(|| Error::Parse("missing `family`".into()))?;
        let fam = Family::from_parts(&family, k, j, a)?;
        let lambda = lambda.ok_or_else(|| Error::Parse("missing `lambda`".into()))?;
        let dim = dim.ok_or_else(|| Error::Parse("missing `dim`".into()))?;
        NoiseSpec::new(fam, lambda, dim)
    }
}

/// `λ / σ` for the family in dimension `dim`.
pub fn lambda_over_sigma(family: Family, dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidSpec("dim must be at least 1".into()));
    }
    let d = dim as f64;
    let cube = (d - 1.0) / 3.0 + 1.0;
    let need = |ok: bool, msg: String| if ok { Ok(()) } else { Err(Error::InvalidSpec(msg)) };
    let ratio = match family {
        Family::Gaussian => 1.0,
        Family::Laplace => 0.5f64.sqrt(),
        Family::UniformLinf => 3f64.sqrt(),
        Family::UniformL2 => (d + 2.0).sqrt(),
        Family::ExpLinf { k, j } => {
            (0.5 * (d.ln() + ln_gamma((d - j) / k) - cube.ln() - ln_gamma((d + 2.0 - j) / k))).exp()
        }
        Family::ExpL2 { k, j } => (0.5 * (d.ln() + ln_gamma((d - j) / k) - ln_gamma((d + 2.0 - j) / k))).exp(),
        Family::ExpL1 { k } => {
            (0.5 * (d.ln() + (d + 1.0).ln() + ln_gamma(d / k) - 2f64.ln() - ln_gamma((d + 2.0) / k))).exp()
        }
        Family::ExpLpIid { p } => (0.5 * (ln_gamma(1.0 / p) - ln_gamma(3.0 / p))).exp(),
        Family::PowerLinf { a } => {
            need(a > d + 2.0, format!("power_linf variance needs a > d + 2, got a = {a}, d = {dim}"))?;
            ((a - d - 1.0) * (a - d - 2.0) / ((d + 1.0) * cube)).sqrt()
        }
        Family::PowerL2 { a, k } => {
            need(a > (d + 2.0) / k, format!("power_l2 variance needs a > (d + 2)/k, got a = {a}, k = {k}"))?;
            (0.5 * (d.ln() + ln_gamma(d / k) + ln_gamma(a - d / k)
                - ln_gamma((d + 2.0) / k)
                - ln_gamma(a - (d + 2.0) / k)))
                .exp()
        }
        Family::ParetoIid { a } => {
            need(a > 2.0, format!("pareto_iid variance needs a > 2, got a = {a}"))?;
            ((a - 1.0) * (a - 2.0) / 2.0).sqrt()
        }
    };
    Ok(ratio)
}

/// `λ` giving per-coordinate standard deviation `sigma`.
pub fn lambda_for_sigma(family: Family, dim: usize, sigma: f64) -> Result<f64> {
    pos("sigma", sigma)?;
    Ok(sigma * lambda_over_sigma(family, dim)?)
}

/// Inverse of [`lambda_for_sigma`].
pub fn sigma_for_lambda(family: Family, dim: usize, lambda: f64) -> Result<f64> {
    pos("lambda", lambda)?;
    Ok(lambda / lambda_over_sigma(family, dim)?)
}

/// `ln Vol(B₂^d) = (d/2) ln π - ln Γ(d/2 + 1)`.
pub fn ln_unit_ball_volume(dim: usize) -> f64 {
    let d = dim as f64;
    0.5 * d * PI.ln() - ln_gamma(0.5 * d + 1.0)
}

fn scale(out: &mut [f64], r: f64) {
    for v in out.iter_mut() {
        *v *= r;
    }
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `±1` from bit `i` of `bits`.
fn bit_sign(bits: u64, i: usize) -> f64 {
    if bits >> i & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn gamma_draw<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    Gamma::new(shape, 1.0).expect("validated shape").sample(rng)
}

fn beta_prime_draw<R: Rng + ?Sized>(rng: &mut R, a: f64, b: f64) -> f64 {
    gamma_draw(rng, a) / gamma_draw(rng, b)
}

/// Uniform direction on the ℓ2 unit sphere.
pub fn l2_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
            n2 += *v * *v;
        }
        if n2 > 0.0 {
            scale(out, 1.0 / n2.sqrt());
            return;
        }
    }
}

/// Cone-measure direction on the ℓ∞ unit sphere: a uniform face, uniform inside it.
pub fn linf_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = rng.random_range(-1.0..=1.0);
    }
    let face = rng.random_range(0..out.len());
    out[face] = random_sign(rng);
}

/// Cone-measure direction on the ℓ1 unit sphere.
pub fn l1_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut s = 0.0;
        for v in out.iter_mut() {
            *v = rng.sample::<f64, _>(Exp1);
            s += *v;
        }
        if s > 0.0 {
            for chunk in out.chunks_mut(64) {
                let signs: u64 = rng.random();
                for (i, v) in chunk.iter_mut().enumerate() {
                    *v *= bit_sign(signs, i) / s;
                }
            }
            return;
        }
    }
}
