//! Monte-Carlo certification against synthetic linear classifiers.
//!
//! Halfspaces have smoothed probabilities in closed form (or a 1-D quadrature
//! for spherical families), which makes them exact oracles for the sampler,
//! the confidence bound and the radius formulas.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::levelset::RadialLaw;
use crate::noise::{Family, NoiseSpec};
use crate::quad::{integrate, Tol};
use crate::radius::{certified_radius, json_number, Adversary, CertifiedRadius};
use crate::rng::stream_rng;
use crate::specfun::{beta_cdf, beta_cdf_inv, gaussian_cdf};

/// Samples used to pick the predicted label; they are not reused for the bound.
pub const SELECTION_SAMPLES: usize = 64;
/// Estimation samples are split into this many sub-streams, `1..=SHARDS`.
pub const SHARDS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierKind {
    /// Label 1 on `x[axis] ≥ threshold` (or `≤` when `positive_side` is false).
    Halfspace { axis: usize, threshold: f64, positive_side: bool },
    /// Label 1 on `⟨w, x⟩ + b ≥ 0`.
    LinearGeneral { w: Vec<f64>, b: f64 },
    /// Always the same label.
    Constant { label: u8 },
}

/// Binary classifier on `ℝ^dim` with labels `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierSpec {
    kind: ClassifierKind,
    dim: usize,
}

impl ClassifierSpec {
    pub fn halfspace(dim: usize, axis: usize, threshold: f64, positive_side: bool) -> Result<Self> {
        if axis >= dim {
            return Err(Error::Domain(format!("halfspace axis {axis} must be below dim {dim}")));
        }
        if !threshold.is_finite() {
            return Err(Error::Domain("halfspace threshold must be finite".into()));
        }
        Ok(Self { kind: ClassifierKind::Halfspace { axis, threshold, positive_side }, dim })
    }

    pub fn linear(w: Vec<f64>, b: f64) -> Result<Self> {
        if w.is_empty() || w.iter().all(|x| *x == 0.0) || w.iter().any(|x| !x.is_finite()) || !b.is_finite() {
            return Err(Error::Domain("linear classifier needs a finite nonzero w and finite b".into()));
        }
        let dim = w.len();
        Ok(Self { kind: ClassifierKind::LinearGeneral { w, b }, dim })
    }

    pub fn constant(dim: usize, label: u8) -> Result<Self> {
        if label > 1 || dim == 0 {
            return Err(Error::Domain("constant classifier needs label 0 or 1 and dim >= 1".into()));
        }
        Ok(Self { kind: ClassifierKind::Constant { label }, dim })
    }

    pub fn kind(&self) -> &ClassifierKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn predict(&self, z: &[f64]) -> u8 {
        match &self.kind {
            ClassifierKind::Halfspace { axis, threshold, positive_side } => {
                let above = z[*axis] >= *threshold;
                (above == *positive_side || z[*axis] == *threshold) as u8
            }
            ClassifierKind::LinearGeneral { w, b } => {
                (w.iter().zip(z).map(|(a, x)| a * x).sum::<f64>() + b >= 0.0) as u8
            }
            ClassifierKind::Constant { label } => *label,
        }
    }

    /// Normal `w` and offset `b` with label 1 on `⟨w, x⟩ + b ≥ 0`.
    fn affine(&self) -> Option<(Vec<f64>, f64)> {
        match &self.kind {
            ClassifierKind::Halfspace { axis, threshold, positive_side } => {
                let s = if *positive_side { 1.0 } else { -1.0 };
                let mut w = vec![0.0; self.dim];
                w[*axis] = s;
                Some((w, -s * threshold))
            }
            ClassifierKind::LinearGeneral { w, b } => Some((w.clone(), *b)),
            ClassifierKind::Constant { .. } => None,
        }
    }
}

fn check_point(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64]) -> Result<()> {
    if clf.dim != spec.dim() || x.len() != spec.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: classifier {}, noise {}, point {}",
            clf.dim,
            spec.dim(),
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("point must be finite".into()));
    }
    Ok(())
}

/// `P[δ₁ ≤ t]` for a rotation-invariant family, by quadrature over the radius.
fn spherical_marginal_cdf(spec: &NoiseSpec, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.5);
    }
    if t > 0.0 {
        return Ok(1.0 - spherical_marginal_cdf(spec, -t)?);
    }
    let d = spec.dim();
    let l = spec.lambda();
    match spec.family() {
        Family::Gaussian => gaussian_cdf(t / l),
        Family::UniformL2 => {
            let m = 0.5 * (d as f64 + 1.0);
            beta_cdf((0.5 * (1.0 + t / l)).max(0.0), m, m)
        }
        Family::ExpL2 { .. } | Family::PowerL2 { .. } => {
            let law = RadialLaw::new(spec)?;
            let a = -t;
            let top = law.sf(a)?;
            if d == 1 {
                return Ok(0.5 * top);
            }
            if top == 0.0 {
                return Ok(0.0);
            }
            // δ₁ = R U with (U + 1)/2 ~ Beta(m, m); integrate over the upper tail of R beyond |t|
            let m = 0.5 * (d as f64 - 1.0);
            let g = |u: f64| {
                let r = law.upper_quantile(u).unwrap_or(f64::NAN);
                if !(r > a) {
                    return 0.0;
                }
                beta_cdf(0.5 * (1.0 - a / r), m, m).unwrap_or(f64::NAN)
            };
            integrate(g, 0.0, top, Tol { abs: 1e-14, rel: 1e-12 })
        }
        other => Err(Error::Unsupported(format!("no exact marginal for {}", other.name()))),
    }
}

/// Exact `P[f(x + δ) = label]` for halfspace classifiers.
///
/// Axis halfspaces work with independent-coordinate families, general normals
/// with rotation-invariant ones. Anything else needs [`certify_mc`].
pub fn exact_label_probability(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64], label: u8) -> Result<f64> {
    check_point(clf, spec, x)?;
    if let ClassifierKind::Constant { label: c } = clf.kind {
        return Ok((c == label) as u8 as f64);
    }
    let (w, b) = clf.affine().expect("affine classifier");
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let margin = (w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b) / norm;
    // label 1 iff ⟨w/‖w‖, δ⟩ ≥ -margin, and the projection is symmetric
    let t = if label == 1 { margin } else { -margin };
    let fam = spec.family();
    match (&clf.kind, fam) {
        (ClassifierKind::Halfspace { .. }, f) if f.is_iid() => spec.coordinate_cdf(t),
        (_, Family::Gaussian | Family::UniformL2 | Family::ExpL2 { .. } | Family::PowerL2 { .. }) => {
            spherical_marginal_cdf(spec, t)
        }
        _ => Err(Error::Unsupported(format!(
            "exact smoothed probability is not available for this classifier under {}; use certify_mc",
            fam.name()
        ))),
    }
}

/// Smoothed probability of the majority label at `x`.
pub fn exact_rho(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64]) -> Result<f64> {
    let p1 = exact_label_probability(clf, spec, x, 1)?;
    let p0 = exact_label_probability(clf, spec, x, 0)?;
    Ok(p1.max(p0))
}

fn majority_label(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64]) -> Result<u8> {
    Ok((exact_label_probability(clf, spec, x, 1)? >= 0.5) as u8)
}

/// One-sided lower confidence bound for a binomial proportion, at level `1 - alpha`.
pub fn clopper_pearson_lower(successes: u64, n: u64, alpha: f64) -> Result<f64> {
    if n == 0 || successes > n {
        return Err(Error::Domain(format!("need 0 <= successes <= n and n >= 1, got {successes} of {n}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if successes == 0 {
        return Ok(0.0);
    }
    if successes == n {
        return Ok(alpha.powf(1.0 / n as f64));
    }
    beta_cdf_inv(alpha, successes as f64, (n - successes + 1) as f64)
}

/// Outcome of one Monte-Carlo certification.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationResult {
    /// `None` when the smoothed classifier abstains.
    pub label: Option<u8>,
    pub rho_lower: f64,
    pub radius: CertifiedRadius,
    pub successes: u64,
    pub n: u64,
    pub alpha: f64,
    /// Selection draws use stream 0 of this seed, estimation shard `i` stream `1 + i`.
    pub seed: u64,
}

impl CertificationResult {
    pub fn abstained(&self) -> bool {
        self.label.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "rho_lower": self.rho_lower,
            "radius": json_number(self.radius.value),
            "method": if self.abstained() { "abstain" } else { self.radius.method.name() },
            "n": self.n,
            "alpha": self.alpha,
            "seed": self.seed,
        })
    }
}

fn count_label(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64], label: u8, count: usize, seed: u64, stream: u64) -> u64 {
    let mut rng = stream_rng(seed, stream);
    let mut z = vec![0.0; x.len()];
    let mut hits = 0;
    for _ in 0..count {
        spec.sample_into(&mut rng, &mut z);
        for (zi, xi) in z.iter_mut().zip(x) {
            *zi += xi;
        }
        hits += (clf.predict(&z) == label) as u64;
    }
    hits
}

/// Certify `x` from `n` noisy evaluations of `clf`.
pub fn certify_mc(
    clf: &ClassifierSpec,
    spec: &NoiseSpec,
    x: &[f64],
    adv: Adversary,
    n: u64,
    alpha: f64,
    seed: u64,
) -> Result<CertificationResult> {
    check_point(clf, spec, x)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let ones = count_label(clf, spec, x, 1, SELECTION_SAMPLES, seed, 0);
    let label = (2 * ones > SELECTION_SAMPLES as u64) as u8;
    let successes: u64 = (0..SHARDS)
        .into_par_iter()
        .map(|i| {
            let size = n / SHARDS as u64 + ((i as u64) < n % SHARDS as u64) as u64;
            count_label(clf, spec, x, label, size as usize, seed, 1 + i as u64)
        })
        .sum();
    let rho_lower = clopper_pearson_lower(successes, n, alpha)?;
    let radius = certified_radius(spec, adv, rho_lower)?;
    Ok(CertificationResult {
        label: (rho_lower > 0.5).then_some(label),
        rho_lower,
        radius,
        successes,
        n,
        alpha,
        seed,
    })
}

/// Unit-norm (in the adversary's norm) direction that moves fastest toward label 1.
pub fn adversarial_direction(clf: &ClassifierSpec, adv: Adversary) -> Result<Vec<f64>> {
    let (w, _) = clf.affine().ok_or_else(|| Error::Unsupported("constant classifiers have no boundary".into()))?;
    let sign = |v: f64| if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
    Ok(match adv {
        Adversary::L1 => {
            let i = (0..w.len()).max_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs())).unwrap();
            let mut u = vec![0.0; w.len()];
            u[i] = sign(w[i]);
            u
        }
        Adversary::L2 => {
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            w.iter().map(|v| v / norm).collect()
        }
        Adversary::Linf => w.iter().map(|&v| sign(v)).collect(),
    })
}

fn shifted(x: &[f64], u: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(u).map(|(a, b)| a + t * b).collect()
}

/// Smallest adversarial shift that brings the majority label's smoothed
/// probability down to 1/2, by bisection on exact probabilities.
pub fn true_robust_radius(clf: &ClassifierSpec, spec: &NoiseSpec, x: &[f64], adv: Adversary) -> Result<f64> {
    let label = majority_label(clf, spec, x)?;
    let u = adversarial_direction(clf, adv)?;
    let toward = if label == 1 { -1.0 } else { 1.0 };
    let f = |t: f64| -> Result<f64> { Ok(exact_label_probability(clf, spec, &shifted(x, &u, toward * t), label)? - 0.5) };
    if f(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi)? > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Numerical("robust radius bracket did not close".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Result of pushing `x` to its certified radius and a little beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct TightnessReport {
    pub rho: f64,
    pub radius: f64,
    /// Majority-label probability after a shift of exactly `radius`.
    pub prob_at_radius: f64,
    /// The same after a shift of `radius · (1 + eps_beyond)`.
    pub prob_beyond: f64,
    pub pass: bool,
}

/// Checks that the certified radius at the exact `ρ` is attained by a halfspace.
pub fn tightness_check(
    clf: &ClassifierSpec,
    spec: &NoiseSpec,
    x: &[f64],
    adv: Adversary,
    eps_beyond: f64,
) -> Result<TightnessReport> {
    if !(eps_beyond > 0.0) {
        return Err(Error::Domain("eps_beyond must be positive".into()));
    }
    let label = majority_label(clf, spec, x)?;
    let rho = exact_rho(clf, spec, x)?;
    let radius = certified_radius(spec, adv, rho)?.value;
    let u = adversarial_direction(clf, adv)?;
    let toward = if label == 1 { -1.0 } else { 1.0 };
    let prob_at_radius = exact_label_probability(clf, spec, &shifted(x, &u, toward * radius), label)?;
    let prob_beyond = exact_label_probability(clf, spec, &shifted(x, &u, toward * radius * (1.0 + eps_beyond)), label)?;
    let pass = prob_at_radius >= 0.5 - 1e-9 && prob_beyond < 0.5;
    Ok(TightnessReport { rho, radius, prob_at_radius, prob_beyond, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::specfun::gaussian_cdf_inv;

    fn axis_point(d: usize, x0: f64) -> Vec<f64> {
        let mut x = vec![0.0; d];
        x[0] = x0;
        x
    }

    #[test]
    fn boundary_is_one_half() {
        let clf = ClassifierSpec::halfspace(6, 0, 0.4, true).unwrap();
        let x = axis_point(6, 0.4);
        for fam in [
            Family::Gaussian,
            Family::Laplace,
            Family::UniformLinf,
            Family::ExpLpIid { p: 3.0 },
            Family::ParetoIid { a: 2.0 },
            Family::UniformL2,
            Family::ExpL2 { k: 1.0, j: 0.0 },
            Family::PowerL2 { a: 9.0, k: 2.0 },
        ] {
            let spec = NoiseSpec::new(fam, 0.8, 6).unwrap();
            assert_eq!(exact_rho(&clf, &spec, &x).unwrap(), 0.5, "{fam:?}");
        }
        let spec = NoiseSpec::new(Family::ExpLinf { k: 1.0, j: 0.0 }, 1.0, 6).unwrap();
        assert!(matches!(exact_rho(&clf, &spec, &x), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gaussian_rho() {
        let spec = NoiseSpec::new(Family::Gaussian, 1.0, 5).unwrap();
        let clf = ClassifierSpec::halfspace(5, 0, 0.0, true).unwrap();
        let rho = exact_rho(&clf, &spec, &axis_point(5, 1.0)).unwrap();
        assert!((rho - 0.8413447460685429).abs() < 1e-14);
        // a general normal sees the same margin
        let lin = ClassifierSpec::linear(vec![3.0, 4.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let rho2 = exact_rho(&lin, &spec, &[0.6, 0.8, 0.0, 0.0, 0.0]).unwrap();
        assert!((rho2 - rho).abs() < 1e-14);
        let flipped = ClassifierSpec::halfspace(5, 0, 0.0, false).unwrap();
        assert!((exact_label_probability(&flipped, &spec, &axis_point(5, 1.0), 0).unwrap() - rho).abs() < 1e-15);
    }

    #[test]
    fn spherical_marginal_matches_sampling() {
        let d = 16;
        let spec = NoiseSpec::new(Family::ExpL2 { k: 1.0, j: 0.0 }, 1.0, d).unwrap();
        let clf = ClassifierSpec::halfspace(d, 0, 0.0, true).unwrap();
        let x = axis_point(d, 2.5);
        let exact = exact_label_probability(&clf, &spec, &x, 1).unwrap();
        let n = 10_000_000u64;
        let hits: u64 = (0..SHARDS)
            .into_par_iter()
            .map(|i| count_label(&clf, &spec, &x, 1, (n / SHARDS as u64) as usize, 11, i as u64))
            .sum();
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((p - exact).abs() < 4.0 * se, "{p} vs {exact} (se {se})");
    }

    #[test]
    fn uniform_ball_marginal_matches_sampling() {
        let d = 5;
        let spec = NoiseSpec::new(Family::UniformL2, 1.3, d).unwrap();
        let clf = ClassifierSpec::linear(vec![1.0, -1.0, 0.0, 2.0, 0.0], -0.3).unwrap();
        let x = [0.1, -0.2, 0.0, 0.3, 0.0];
        let exact = exact_label_probability(&clf, &spec, &x, 1).unwrap();
        let n = 2_000_000u64;
        let p = count_label(&clf, &spec, &x, 1, n as usize, 12, 0) as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((p - exact).abs() < 4.0 * se, "{p} vs {exact}");
    }

    #[test]
    fn clopper_pearson() {
        assert_eq!(clopper_pearson_lower(0, 10, 0.05).unwrap(), 0.0);
        let all = clopper_pearson_lower(100, 100, 0.001).unwrap();
        assert!((all - 0.001f64.powf(0.01)).abs() < 1e-15);
        assert!((all - 0.93325).abs() < 1e-5);
        // inverts the binomial tail: P[Bin(n, p_lo) ≥ s] = α
        let (s, n, a) = (37u64, 50u64, 0.05);
        let lo = clopper_pearson_lower(s, n, a).unwrap();
        let tail: f64 = (s..=n)
            .map(|k| {
                let ln = crate::specfun::ln_gamma(n as f64 + 1.0)
                    - crate::specfun::ln_gamma(k as f64 + 1.0)
                    - crate::specfun::ln_gamma((n - k) as f64 + 1.0)
                    + k as f64 * lo.ln()
                    + (n - k) as f64 * (1.0 - lo).ln();
                ln.exp()
            })
            .sum();
        assert!((tail - a).abs() < 1e-10, "{tail}");
        assert!(clopper_pearson_lower(5, 4, 0.1).is_err());
    }

    #[test]
    fn clopper_pearson_coverage() {
        use rand::Rng;
        let (p, n, alpha, runs) = (0.9, 200u64, 0.05, 10_000);
        let mut rng = stream_rng(21, 0);
        let mut misses = 0;
        for _ in 0..runs {
            let s = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
            misses += (clopper_pearson_lower(s, n, alpha).unwrap() > p) as u32;
        }
        let expect = alpha * runs as f64;
        assert!((misses as f64) <= expect + 3.0 * expect.sqrt(), "{misses}");
    }

    #[test]
    fn constant_classifier_and_single_sample() {
        let spec = NoiseSpec::new(Family::Gaussian, 1.0, 3).unwrap();
        let clf = ClassifierSpec::constant(3, 1).unwrap();
        let r = certify_mc(&clf, &spec, &[0.0; 3], Adversary::L2, 1000, 0.001, 1).unwrap();
        assert_eq!(r.label, Some(1));
        assert_eq!(r.rho_lower, 0.001f64.powf(1e-3));
        assert_eq!(r.radius.value, certified_radius(&spec, Adversary::L2, r.rho_lower).unwrap().value);
        let one = certify_mc(&clf, &spec, &[0.0; 3], Adversary::L2, 1, 0.001, 1).unwrap();
        assert!(one.abstained());
        assert_eq!(one.radius.value, 0.0);
        assert_eq!(one.to_json()["method"], "abstain");
        assert!(one.to_json()["label"].is_null());
    }

    #[test]
    fn certify_gaussian_halfspace() {
        let spec = NoiseSpec::new(Family::Gaussian, 1.0, 4).unwrap();
        let clf = ClassifierSpec::halfspace(4, 0, 0.0, true).unwrap();
        let x = axis_point(4, 1.5);
        let mut high = 0;
        let reps = 100;
        for seed in 0..reps {
            let r = certify_mc(&clf, &spec, &x, Adversary::L2, 100_000, 0.001, seed).unwrap();
            assert_eq!(r.label, Some(1));
            assert!(r.radius.value <= 1.5, "seed {seed}: {}", r.radius.value);
            high += (r.radius.value >= 1.40) as u32;
        }
        assert!(high as f64 >= 0.99 * reps as f64);
    }

    #[test]
    fn certification_is_deterministic() {
        let spec = NoiseSpec::new(Family::Laplace, 0.5, 3).unwrap();
        let clf = ClassifierSpec::linear(vec![1.0, 2.0, -1.0], 0.1).unwrap();
        let x = [0.3, 0.1, 0.0];
        let a = certify_mc(&clf, &spec, &x, Adversary::L1, 5000, 0.01, 99).unwrap();
        let b = certify_mc(&clf, &spec, &x, Adversary::L1, 5000, 0.01, 99).unwrap();
        assert_eq!(a, b);
        let keys: Vec<String> = a.to_json().as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["label", "rho_lower", "radius", "method", "n", "alpha", "seed"]);
    }

    #[test]
    fn tightness_witnesses() {
        let clf = ClassifierSpec::halfspace(3, 1, -0.2, false).unwrap();
        let x = [0.0, -0.9, 0.0];
        for fam in [Family::Gaussian, Family::Laplace, Family::UniformLinf, Family::ExpLpIid { p: 1.5 }] {
            let spec = NoiseSpec::new(fam, 1.0, 3).unwrap();
            let rep = tightness_check(&clf, &spec, &x, Adversary::L1, 1e-3).unwrap();
            assert!(rep.pass, "{fam:?}: {rep:?}");
            assert!((rep.prob_at_radius - 0.5).abs() < 1e-9, "{fam:?}: {rep:?}");
        }
        let spec = NoiseSpec::new(Family::Gaussian, 0.7, 3).unwrap();
        let rho = exact_rho(&clf, &spec, &x).unwrap();
        assert!((certified_radius(&spec, Adversary::L2, rho).unwrap().value - 0.7 * gaussian_cdf_inv(rho).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn robust_radius_by_bisection() {
        let spec = NoiseSpec::new(Family::Laplace, 1.0, 4).unwrap();
        let clf = ClassifierSpec::linear(vec![1.0, -2.0, 0.0, 0.5], 0.0).unwrap();
        let x = [0.5, -0.5, 0.2, 0.0];
        // margin along w is 1.5; per-unit-ℓ∞ progress is ‖w‖₁ = 3.5, per-unit-ℓ1 progress max|wᵢ| = 2
        let spec_g = NoiseSpec::new(Family::Gaussian, 1.0, 4).unwrap();
        let t_inf = true_robust_radius(&clf, &spec_g, &x, Adversary::Linf).unwrap();
        assert!((t_inf - 1.5 / 3.5).abs() < 1e-12);
        let t_1 = true_robust_radius(&clf, &spec_g, &x, Adversary::L1).unwrap();
        assert!((t_1 - 0.75).abs() < 1e-12);
        assert!(matches!(true_robust_radius(&clf, &spec, &x, Adversary::L1), Err(Error::Unsupported(_))));
    }
}
