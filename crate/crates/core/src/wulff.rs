//! Zonotopes, Wulff crystals and the boundary growth of standard shapes.
//!
//! The growth of a set `S` in direction `v` is `lim (1/r) Vol((S + rv) \ S)`.
//! For convex `S` it equals `‖v‖₂ Vol(Π_v S)`; for a zonotope that projection
//! is again a zonotope, so both volume and growth reduce to sums of absolute
//! subset determinants.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::ln_unit_ball_volume;
use crate::radius::Adversary;
use crate::rng::stream_rng;
use crate::specfun::ln_gamma;

/// Finite set of vectors in `ℝ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSet {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl VectorSet {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("vector set needs dim >= 1".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::Domain(format!("vector of length {} in a set of dim {dim}", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain("vector entries must be finite".into()));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// `{±1}^d`, in binary order.
    pub fn sign_cube(dim: usize) -> Result<Self> {
        if dim == 0 || dim > 20 {
            return Err(Error::SizeGuard(format!("sign cube of dim {dim} (supported: 1..=20)")));
        }
        let vectors = (0..1u32 << dim)
            .map(|m| (0..dim).map(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect();
        Self::new(dim, vectors)
    }

    /// One vector from each `±` pair of `{±1}^d` (first coordinate `+1`).
    fn half_sign_cube(dim: usize) -> Self {
        let vectors = (0..1u32 << (dim - 1))
            .map(|m| {
                let mut v = vec![1.0];
                v.extend((1..dim).map(|i| if m >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }));
                v
            })
            .collect();
        Self { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { dim: self.dim, vectors: self.vectors.iter().map(|v| v.iter().map(|x| c * x).collect()).collect() }
    }
}

/// Sum of `|det|` over all `k`-subsets of `rows`, each padded with `fixed` rows.
///
/// Depth-first over subsets in lexicographic order, eliminating one row per
/// level so that each node costs `O(d k)`. Subtrees whose partial rows are
/// already dependent are skipped.
fn subset_det_sum(rows: &[Vec<f64>], k: usize, fixed: &[Vec<f64>], dim: usize) -> f64 {
    struct Walk<'a> {
        rows: &'a [Vec<f64>],
        k: usize,
        dim: usize,
        // reduced rows with their pivot column
        basis: Vec<(Vec<f64>, usize)>,
        total: f64,
    }

    impl Walk<'_> {
        /// Reduce `v` against the basis; returns the pivot column and value, if any.
        fn reduce(&self, v: &[f64]) -> (Vec<f64>, Option<(usize, f64)>) {
            let mut r = v.to_vec();
            for (b, pc) in &self.basis {
                let f = r[*pc] / b[*pc];
                if f != 0.0 {
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= f * y;
                    }
                    r[*pc] = 0.0;
                }
            }
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let (mut best, mut bv) = (None, 0.0f64);
            for (i, &x) in r.iter().enumerate() {
                if x.abs() > bv.abs() {
                    best = Some(i);
                    bv = x;
                }
            }
            match best {
                Some(i) if bv.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) * self.dim as f64 => (r, Some((i, bv))),
                _ => (r, None),
            }
        }

        fn go(&mut self, start: usize, prod: f64) {
            let depth = self.basis.len();
            if depth == self.dim {
                self.total += prod;
                return;
            }
            let need = self.k - (depth - (self.dim - self.k));
            if need == 0 {
                return;
            }
            for i in start..=self.rows.len() - need {
                let (r, piv) = self.reduce(&self.rows[i]);
                if let Some((pc, pv)) = piv {
                    self.basis.push((r, pc));
                    self.go(i + 1, prod * pv.abs());
                    self.basis.pop();
                }
            }
        }
    }

    if k > rows.len() {
        return 0.0;
    }
    let mut w = Walk { rows, k, dim, basis: Vec::new(), total: 0.0 };
    let mut prod = 1.0;
    for f in fixed {
        let (r, piv) = w.reduce(f);
        match piv {
            Some((pc, pv)) => {
                w.basis.push((r, pc));
                prod *= pv.abs();
            }
            None => return 0.0,
        }
    }
    w.go(0, prod);
    w.total
}

/// `Vol(Σ [0, vᵢ]) = Σ_{|T| = d} |det T|`, for `n ≤ 24` vectors in `d ≤ 8` dimensions.
pub fn zonotope_volume(vs: &VectorSet) -> Result<f64> {
    let (n, d) = (vs.vectors.len(), vs.dim);
    if n > 24 || d > 8 {
        return Err(Error::SizeGuard(format!(
            "zonotope_volume enumerates subsets only for n <= 24 and d <= 8 (got n = {n}, d = {d}); \
             use cube_zonotope_volume_mc for sign-cube zonotopes"
        )));
    }
    Ok(subset_det_sum(&vs.vectors, d, &[], d))
}

/// Growth of `Σ [0, vᵢ]` in direction `v`: `Σ_{|T| = d-1} |det [T, v]|`.
fn zonotope_growth(vs: &VectorSet, v: &[f64]) -> f64 {
    subset_det_sum(&vs.vectors, vs.dim - 1, &[v.to_vec()], vs.dim)
}

/// `|det|` of a square matrix by elimination with partial pivoting.
fn abs_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        m.swap(c, p);
        det *= m[c][c].abs();
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f != 0.0 {
                for j in c..n {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    det
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `Vol(Zon({±1}^d)) = 2^{d²} E|det X| / d!` by sampling random sign matrices `X`.
///
/// Returns the estimate and its standard error.
pub fn cube_zonotope_volume_mc<R: Rng + ?Sized>(dim: usize, samples: usize, rng: &mut R) -> Result<(f64, f64)> {
    if dim == 0 || dim > 12 {
        return Err(Error::SizeGuard(format!("cube_zonotope_volume_mc supports 1 <= d <= 12, got {dim}")));
    }
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let m: Vec<Vec<f64>> =
            (0..dim).map(|_| (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()).collect();
        let a = abs_det(m);
        sum += a;
        sum2 += a * a;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    let scale = ((dim * dim) as f64 * std::f64::consts::LN_2 - ln_factorial(dim)).exp();
    Ok((scale * mean, scale * (var / n).sqrt()))
}

/// Volume of the Wulff crystal of the adversary's unit ball.
///
/// ℓ1 and ℓ2 are exact. ℓ∞ is exact up to `d = 6` and a fixed-seed Monte-Carlo
/// estimate for `7 ≤ d ≤ 12`.
pub fn wulff_crystal_volume(adv: Adversary, dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::Domain("dim must be at least 1".into()));
    }
    let d = dim as f64;
    match adv {
        // (1/d) [-1, 1]^d
        Adversary::L1 => Ok((2.0 / d).powi(dim as i32)),
        // ball of radius E|y₁| for y uniform on the sphere
        Adversary::L2 => {
            let c = ln_gamma(0.5 * d) - 0.5 * std::f64::consts::PI.ln() - ln_gamma(0.5 * (d + 1.0));
            Ok((ln_unit_ball_volume(dim) + d * c).exp())
        }
        // 2^{1-d} Zon({±1}^d), and Zon({±1}^d) is 2 Zon(half) up to translation
        Adversary::Linf => {
            let scale = ((1.0 - d) * d * std::f64::consts::LN_2).exp();
            let full = if dim <= 6 {
                let half = VectorSet::half_sign_cube(dim);
                2f64.powi(dim as i32) * subset_det_sum(&half.vectors, dim, &[], dim)
            } else if dim <= 12 {
                let mut rng = stream_rng(0x5eed, dim as u64);
                cube_zonotope_volume_mc(dim, 200_000, &mut rng)?.0
            } else {
                return Err(Error::SizeGuard(format!("linf Wulff crystal volume supports d <= 12, got {dim}")));
            };
            Ok(scale * full)
        }
    }
}

/// Standard shapes, normalized to unit volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Cube,
    Ball,
    CrossPolytope,
    /// Wulff crystal of the ℓ∞ ball (zonotope of `{±1}^d`)
    LinfWulff,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Cube => "cube",
            Shape::Ball => "ball",
            Shape::CrossPolytope => "cross_polytope",
            Shape::LinfWulff => "linf_wulff",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShapeId {
    pub shape: Shape,
    pub dim: usize,
}

impl ShapeId {
    pub fn new(shape: Shape, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("shape dim must be at least 1".into()));
        }
        Ok(Self { shape, dim })
    }
}

/// `Σ_s max(0, ⟨s, 1⟩)` over `s ∈ {±1}^d`, in log space.
fn ln_cross_diagonal_sum(d: usize) -> f64 {
    let ln_binom = |n: usize, k: usize| ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
    if d % 2 == 0 {
        ((d + 2) as f64 / 2.0).ln() + ln_binom(d, d / 2 + 1)
    } else {
        ((d + 1) as f64 / 2.0).ln() + ln_binom(d, (d + 1) / 2)
    }
}

/// Growth of the unit-volume `shape` in direction `v`.
///
/// Cube, ball and ℓ∞ crystal (`d ≤ 6`) accept any `v`. The cross-polytope
/// accepts axis directions and directions with all `|vᵢ|` equal.
pub fn set_growth(shape: ShapeId, v: &[f64]) -> Result<f64> {
    let dim = shape.dim;
    if v.len() != dim {
        return Err(Error::Domain(format!("direction has length {}, shape has dim {dim}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("direction must be finite".into()));
    }
    let d = dim as f64;
    let norm2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    match shape.shape {
        Shape::Cube => Ok(v.iter().map(|x| x.abs()).sum()),
        Shape::Ball => {
            // ‖v‖ V_{d-1} ρ^{d-1} with V_d ρ^d = 1
            let ln = ln_unit_ball_volume(dim - 1) - (d - 1.0) / d * ln_unit_ball_volume(dim);
            Ok(norm2 * ln.exp())
        }
        Shape::CrossPolytope => {
            // scale c = (d!/2^d)^{1/d}; 2^d facets of area c^{d-1} √d/(d-1)! with normals s/√d
            let ln_c = (ln_factorial(dim) - d * std::f64::consts::LN_2) / d;
            let ln_pref = (d - 1.0) * ln_c - ln_factorial(dim - 1);
            let nz: Vec<f64> = v.iter().copied().filter(|x| *x != 0.0).collect();
            if nz.is_empty() {
                return Ok(0.0);
            }
            if nz.len() == 1 {
                return Ok(nz[0].abs() * (ln_pref + (d - 1.0) * std::f64::consts::LN_2).exp());
            }
            let a = v[0].abs();
            if nz.len() == dim && v.iter().all(|x| (x.abs() - a).abs() <= 1e-12 * a) {
                return Ok(a * (ln_pref + ln_cross_diagonal_sum(dim)).exp());
            }
            Err(Error::Unsupported(
                "cross-polytope growth is catalogued for axis and diagonal directions only".into(),
            ))
        }
        Shape::LinfWulff => {
            if dim > 6 {
                return Err(Error::Unsupported(format!("linf Wulff crystal growth is exact for d <= 6, got {dim}")));
            }
            if dim == 1 {
                return Ok(norm2);
            }
            let half = VectorSet::half_sign_cube(dim);
            let vol = subset_det_sum(&half.vectors, dim, &[], dim);
            let c = vol.powf(-1.0 / d);
            Ok(c.powi(dim as i32 - 1) * zonotope_growth(&half, v))
        }
    }
}

/// Cube, ball and cross-polytope ranked by worst-case growth over the
/// adversary's vertices, divided by the largest vertex length.
pub fn shape_phi_compare(adv: Adversary, dim: usize) -> Result<Vec<(Shape, f64)>> {
    if dim == 0 {
        return Err(Error::Domain("dim must be at least 1".into()));
    }
    let axis: Vec<f64> = (0..dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    let diag = vec![1.0; dim];
    let unit_diag = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut out = Vec::new();
    for shape in [Shape::Cube, Shape::Ball, Shape::CrossPolytope] {
        let id = ShapeId::new(shape, dim)?;
        let value = match adv {
            // vertices ±eᵢ
            Adversary::L1 => set_growth(id, &axis)?,
            // every unit vector; the worst case is attained on an axis or a diagonal
            Adversary::L2 => set_growth(id, &axis)?.max(set_growth(id, &unit_diag)?),
            // vertices {±1}^d, all equivalent under the symmetries of the three shapes
            Adversary::Linf => set_growth(id, &diag)? / (dim as f64).sqrt(),
        };
        out.push((shape, value));
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(out)
}
