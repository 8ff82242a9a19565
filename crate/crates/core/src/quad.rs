//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Absolute and relative tolerance for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tol {
    fn default() -> Self {
        let p = crate::specfun::POLICY;
        Self { abs: p.quad_abs_tol, rel: p.quad_rel_tol }
    }
}

const INITIAL_PANELS: usize = 16;
const MAX_DEPTH: u32 = 60;

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("integrand is {v} at x = {x}")))
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, eps: f64, depth: u32) -> Result<f64> {
    let lm = 0.5 * (p.a + p.m);
    let rm = 0.5 * (p.m + p.b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(p.a, p.m, p.fa, flm, p.fm);
    let right = simpson(p.m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * eps || p.m <= p.a || p.b <= p.m {
        return Ok(left + right + delta / 15.0);
    }
    let l = Panel { a: p.a, m: lm, b: p.m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
    let r = Panel { a: p.m, m: rm, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
    Ok(refine(f, l, 0.5 * eps, depth + 1)? + refine(f, r, 0.5 * eps, depth + 1)?)
}

/// `∫_a^b f`. Reversed limits flip the sign.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tol) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Numerical("integrate needs finite limits".into()));
    }
    // coarse pass to scale the tolerance
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(INITIAL_PANELS);
    let mut rough = 0.0;
    let mut fa = eval(&f, a)?;
    for i in 0..INITIAL_PANELS {
        let pa = a + i as f64 * h;
        let pb = if i + 1 == INITIAL_PANELS { b } else { a + (i + 1) as f64 * h };
        let pm = 0.5 * (pa + pb);
        let fm = eval(&f, pm)?;
        let fb = eval(&f, pb)?;
        let whole = simpson(pa, pb, fa, fm, fb);
        rough += whole;
        panels.push(Panel { a: pa, m: pm, b: pb, fa, fm, fb, whole });
        fa = fb;
    }
    let eps = tol.abs.max(tol.rel * rough.abs()) / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for p in panels {
        total += refine(&f, p, eps, 0)?;
    }
    Ok(total)
}

/// `∫_a^b f` with the interval split at the given interior points.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: Tol) -> Result<f64> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut pts = vec![lo];
    pts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    pts.push(hi);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate(&f, w[0], w[1], tol)?;
    }
    Ok(sign * total)
}

/// `∫_a^∞ f` through `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tol) -> Result<f64> {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        f(a + t / s) / (s * s)
    };
    integrate(g, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, Tol::default()).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_limits() {
        let v = integrate(|x| x.cos(), 1.0, 0.0, Tol::default()).unwrap();
        assert!((v + 1f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn peaked_integrand() {
        let tol = Tol { abs: 1e-13, rel: 1e-11 };
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, tol).unwrap();
        let want = 2.0 * (1.0 / 1e-2f64) * (1.0 / 1e-2f64).atan();
        assert!((v - want).abs() / want < 1e-9);
    }

    #[test]
    fn half_line() {
        let v = integrate_to_infinity(|x| (-x).exp(), 0.0, Tol::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nan_is_an_error() {
        assert!(integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, Tol::default()).is_err());
    }

    #[test]
    fn pieces_match_whole() {
        let f = |x: f64| x.abs();
        let v = integrate_pieces(f, -1.0, 2.0, &[0.0], Tol::default()).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }
}
