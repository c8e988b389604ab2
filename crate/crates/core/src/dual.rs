//! Dual complement `D* = {ξ : ξ∙z ≠ 1 for all z ∈ D}`.
//!
//! For a complete Reinhardt domain `D` the set `{ξ∙z : z ∈ D}` is the open
//! disc of radius `σ(|ξ1|, |ξ2|)`, where `σ(a, b) = sup (a x + b y)` over the
//! shadow. Hence `ξ ∈ D*` iff `σ(|ξ1|, |ξ2|) ≤ 1`, and `D*` is described
//! entirely by the support function of the shadow.

use crate::domains::{Domain2, Extent, Profile, Shadow};
use crate::error::{Error, Result};
use crate::point::Point2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

/// Slack on `σ ≤ 1` absorbing rounding in the support function.
pub const DUAL_BOUNDARY_SLACK: f64 = 1e-12;

/// Tolerance of the ray bisection in [`dual_boundary`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Default number of boundary samples of `∂D*`.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 257;

const MONTE_CARLO_SAMPLES: usize = 4096;

fn check_modulus(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be a finite modulus, got {v}")))
    }
}

/// Maximize `p t^(1/q1) + r (1-t)^(1/q2)` over `t ∈ [0, 1]`.
fn superellipse_support(p: f64, r: f64, q1: f64, q2: f64) -> f64 {
    if p == 0.0 || r == 0.0 {
        return p.max(r);
    }
    if q1 == q2 {
        let q = q1;
        if q <= 1.0 {
            return p.max(r);
        }
        if q == 2.0 {
            return p.hypot(r);
        }
        let dual = q / (q - 1.0);
        let m = p.max(r);
        return m * ((p / m).powf(dual) + (r / m).powf(dual)).powf(1.0 / dual);
    }
    let h = |t: f64| p * t.powf(1.0 / q1) + r * (1.0 - t).powf(1.0 / q2);
    const SCAN: usize = 2048;
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..=SCAN {
        let v = h(k as f64 / SCAN as f64);
        if v > best_val {
            best_val = v;
            best = k;
        }
    }
    let mut lo = (best.saturating_sub(1)) as f64 / SCAN as f64;
    let mut hi = ((best + 1).min(SCAN)) as f64 / SCAN as f64;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..80 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = h(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = h(d);
        }
    }
    best_val.max(fc).max(fd).max(h(0.0)).max(h(1.0))
}

/// Support function `σ(a, b) = sup (a x + b y)` over a bounded shadow.
pub fn shadow_support(s: &Shadow, a: f64, b: f64) -> Result<f64> {
    check_modulus("a", a)?;
    check_modulus("b", b)?;
    let (xm, ym) = s
        .extents()
        .ok_or_else(|| Error::UnboundedDomain("support function of an unbounded shadow".into()))?;
    Ok(match s.profile() {
        Profile::Rectangle => a * xm + b * ym,
        Profile::Superellipse { q1, q2 } => superellipse_support(a * xm, b * ym, *q1, *q2),
        Profile::Sampled { .. } => s
            .boundary_chain()?
            .iter()
            .map(|&(x, y)| a * x + b * y)
            .fold(0.0, f64::max),
    })
}

/// Support function of a bounded Reinhardt domain.
pub fn support(d: &Domain2, a: f64, b: f64) -> Result<f64> {
    shadow_support(d.require_shadow("support")?, a, b)
}

/// Outcome of a dual-complement membership query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualMembership {
    /// Decided exactly from the support function.
    Exact(bool),
    /// Monte-Carlo answer for a general domain. `witness`, when present, is a
    /// point `z ∈ D` with `ξ∙z = 1`, which certifies `ξ ∉ D*`.
    Approximate { inside: bool, witness: Option<Point2> },
}

impl DualMembership {
    pub fn inside(&self) -> bool {
        match *self {
            DualMembership::Exact(v) => v,
            DualMembership::Approximate { inside, .. } => inside,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DualMembership::Exact(_))
    }
}

/// Is `ξ ∈ D*`?
pub fn dual_contains(d: &Domain2, xi: &Point2) -> Result<DualMembership> {
    match d {
        Domain2::Reinhardt(s) => {
            let (a, b) = xi.moduli();
            Ok(DualMembership::Exact(shadow_support(s, a, b)? <= 1.0 + DUAL_BOUNDARY_SLACK))
        }
        Domain2::General(_) => {
            let r = match d.bound_radius() {
                Extent::Finite(r) => r,
                Extent::Unbounded => {
                    return Err(Error::UnboundedDomain("dual of an unbounded domain".into()));
                }
            };
            let n2 = xi.z1.norm_sqr() + xi.z2.norm_sqr();
            if n2 == 0.0 {
                return Ok(DualMembership::Exact(true));
            }
            let dir = xi.conj();
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0a1);
            let mut sample = || Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            for _ in 0..MONTE_CARLO_SAMPLES {
                let z = Point2::new(sample(), sample());
                if !d.contains(&z) {
                    continue;
                }
                // Move z along conj(ξ) onto the hyperplane ξ∙z = 1.
                let shift = (Complex64::new(1.0, 0.0) - xi.dot(&z)) / n2;
                let hit = Point2::new(z.z1 + shift * dir.z1, z.z2 + shift * dir.z2);
                if d.contains(&hit) {
                    return Ok(DualMembership::Approximate {
                        inside: false,
                        witness: Some(hit),
                    });
                }
            }
            Ok(DualMembership::Approximate {
                inside: true,
                witness: None,
            })
        }
    }
}

/// `n ≥ 2` points of `{σ = 1}` in the closed positive quadrant, ordered from
/// `(1/σ(1,0), 0)` to `(0, 1/σ(0,1))`, equally spaced in angle.
pub fn dual_boundary(d: &Domain2, n: usize) -> Result<Vec<(f64, f64)>> {
    shadow_dual_boundary(d.require_shadow("dual_boundary")?, n)
}

pub fn shadow_dual_boundary(s: &Shadow, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 boundary samples, got {n}")));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = FRAC_PI_2 * k as f64 / (n - 1) as f64;
        let (mut sn, mut cs) = t.sin_cos();
        if k == 0 {
            (sn, cs) = (0.0, 1.0);
        } else if k == n - 1 {
            (sn, cs) = (1.0, 0.0);
        }
        let sigma = shadow_support(s, cs, sn)?;
        let mut lam = 1.0 / sigma;
        if (shadow_support(s, lam * cs, lam * sn)? - 1.0).abs() > BOUNDARY_TOLERANCE {
            // Homogeneity failed numerically; bisect along the ray.
            let (mut lo, mut hi) = (0.0, 2.0 * lam);
            while shadow_support(s, hi * cs, hi * sn)? < 1.0 {
                hi *= 2.0;
            }
            for _ in 0..200 {
                lam = 0.5 * (lo + hi);
                let v = shadow_support(s, lam * cs, lam * sn)?;
                if (v - 1.0).abs() <= BOUNDARY_TOLERANCE {
                    break;
                }
                if v < 1.0 {
                    lo = lam;
                } else {
                    hi = lam;
                }
            }
        }
        out.push((lam * cs, lam * sn));
    }
    Ok(out)
}

/// Compact dual complement of a bounded Reinhardt domain, with a cached
/// sampling of its boundary.
#[derive(Debug, Clone)]
pub struct DualSet {
    shadow: Shadow,
    boundary: Vec<(f64, f64)>,
}

impl DualSet {
    pub fn new(d: &Domain2, samples: usize) -> Result<Self> {
        let shadow = d.require_shadow("dual set")?.clone();
        let boundary = shadow_dual_boundary(&shadow, samples)?;
        Ok(Self { shadow, boundary })
    }

    pub fn support(&self, a: f64, b: f64) -> Result<f64> {
        shadow_support(&self.shadow, a, b)
    }

    pub fn contains(&self, xi: &Point2) -> bool {
        let (a, b) = xi.moduli();
        // Construction guarantees a bounded shadow.
        shadow_support(&self.shadow, a, b).is_ok_and(|s| s <= 1.0 + DUAL_BOUNDARY_SLACK)
    }

    pub fn boundary(&self) -> &[(f64, f64)] {
        &self.boundary
    }
}

/// A boundary point `w` of `D` with a unit normal `nu`.
///
/// `nu` is taken in the holomorphic sense, `nu_j ∝ ∂ρ/∂z_j` for a defining
/// function `ρ`, so that the complex tangent hyperplane at `w` is
/// `{(z - w)∙nu = 0}` with the bilinear pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalSample {
    pub w: Point2,
    pub nu: Point2,
}

impl NormalSample {
    pub fn new(w: Point2, nu: Point2) -> Result<Self> {
        let n = nu.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("normal must be non-zero".into()));
        }
        Ok(Self {
            w,
            nu: Point2::new(nu.z1 / n, nu.z2 / n),
        })
    }
}

/// `φ(w) = nu / (w∙nu)`; satisfies `w∙φ(w) = 1`.
pub fn phi_map(s: &NormalSample) -> Result<Point2> {
    let dot = s.w.dot(&s.nu);
    if dot.norm() <= 1e-14 * s.w.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateNormal);
    }
    Ok(Point2::new(s.nu.z1 / dot, s.nu.z2 / dot))
}

/// Gradient of a defining function of the shadow at a boundary point
/// `(x, y)`, or `None` where the boundary is not smooth.
fn shadow_gradient(s: &Shadow, x: f64, y: f64) -> Option<(f64, f64)> {
    let (xm, ym) = s.extents()?;
    let tol = 1e-9 * xm.max(ym);
    match s.profile() {
        Profile::Rectangle => {
            let on_x = (x - xm).abs() <= tol;
            let on_y = (y - ym).abs() <= tol;
            match (on_x, on_y) {
                (true, false) => Some((1.0, 0.0)),
                (false, true) => Some((0.0, 1.0)),
                _ => None,
            }
        }
        Profile::Superellipse { q1, q2 } => {
            let d = |t: f64, m: f64, q: f64| {
                if t == 0.0 {
                    if q > 1.0 {
                        Some(0.0)
                    } else if q == 1.0 {
                        Some(1.0 / m)
                    } else {
                        None
                    }
                } else {
                    Some(q * t.powf(q - 1.0) / m.powf(q))
                }
            };
            Some((d(x, xm, *q1)?, d(y, ym, *q2)?))
        }
        Profile::Sampled { points } => {
            if (x - xm).abs() <= tol {
                return Some((1.0, 0.0));
            }
            let idx = points.partition_point(|p| p.0 <= x);
            if idx == 0 || idx == points.len() {
                return Some((0.0, 1.0));
            }
            let (x0, y0) = points[idx - 1];
            let (x1, y1) = points[idx];
            if x == x0 && idx >= 2 && points[idx - 2].0 < x0 {
                // Kink at a vertex.
                return None;
            }
            Some(((y0 - y1) / (x1 - x0), 1.0))
        }
    }
}

/// Holomorphic unit normal of a Reinhardt domain at the boundary point `w`.
pub fn reinhardt_normal(d: &Domain2, w: &Point2) -> Result<NormalSample> {
    let s = d.require_shadow("reinhardt_normal")?;
    let (x, y) = w.moduli();
    let (g1, g2) = shadow_gradient(s, x, y)
        .ok_or_else(|| Error::InvalidArgument(format!("boundary is not smooth at {w:?}")))?;
    let phase = |z: Complex64| if z.norm() > 0.0 { z.conj() / z.norm() } else { Complex64::new(1.0, 0.0) };
    NormalSample::new(*w, Point2::new(phase(w.z1) * g1, phase(w.z2) * g2))
}
