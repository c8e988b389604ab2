//! Absolute images of complete Reinhardt domains.
//!
//! A [`Shadow`] is an open, downward-closed region of the closed positive
//! quadrant. It is described by an extent along each axis and an upper
//! boundary profile `beta`, so that `(x, y)` is inside iff `x < xmax`,
//! `y < ymax` and `y < beta(x)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Extent of a shadow along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extent {
    Finite(f64),
    Unbounded,
}

impl Extent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extent::Finite(v) => Some(v),
            Extent::Unbounded => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extent::Finite(_))
    }

    /// `+inf` for [`Extent::Unbounded`]; only for arithmetic, never stored.
    pub fn as_f64(self) -> f64 {
        match self {
            Extent::Finite(v) => v,
            Extent::Unbounded => f64::INFINITY,
        }
    }

    fn scaled(self, factor: f64) -> Extent {
        match self {
            Extent::Finite(v) => Extent::Finite(v * factor),
            Extent::Unbounded => Extent::Unbounded,
        }
    }
}

/// Upper boundary profile of a shadow.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `beta = ymax` on `[0, xmax)`.
    Rectangle,
    /// `(x/xmax)^q1 + (y/ymax)^q2 < 1`.
    Superellipse { q1: f64, q2: f64 },
    /// Piecewise-linear through the points. `x` is non-decreasing (equal
    /// abscissae encode a vertical drop), `y` is non-increasing. Left of the
    /// first point the profile is unbounded (capped by `ymax`); right of the
    /// last point it stays at the last height (capped by `xmax`).
    Sampled { points: Vec<(f64, f64)> },
}

/// Open downward-closed region of the positive quadrant.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadow {
    profile: Profile,
    xmax: Extent,
    ymax: Extent,
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Shadow {
    pub fn rectangle(xmax: f64, ymax: f64) -> Result<Self> {
        positive_finite("xmax", xmax)?;
        positive_finite("ymax", ymax)?;
        Ok(Self {
            profile: Profile::Rectangle,
            xmax: Extent::Finite(xmax),
            ymax: Extent::Finite(ymax),
        })
    }

    /// `{(x/a)^q1 + (y/b)^q2 < 1}`.
    pub fn superellipse(a: f64, b: f64, q1: f64, q2: f64) -> Result<Self> {
        positive_finite("a", a)?;
        positive_finite("b", b)?;
        positive_finite("q1", q1)?;
        positive_finite("q2", q2)?;
        Ok(Self {
            profile: Profile::Superellipse { q1, q2 },
            xmax: Extent::Finite(a),
            ymax: Extent::Finite(b),
        })
    }

    /// Piecewise-linear profile. Points must have non-negative coordinates,
    /// non-decreasing `x`, non-increasing `y`. When an extent is `None` it
    /// defaults to the data: `xmax` to the last abscissa and `ymax` to the
    /// first height.
    pub fn sampled(points: Vec<(f64, f64)>, xmax: Option<Extent>, ymax: Option<Extent>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("profile needs at least one point".into()));
        }
        for &(x, y) in &points {
            if !(x.is_finite() && y.is_finite() && x >= 0.0 && y >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "profile point ({x}, {y}) must be finite and non-negative"
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].0 < w[0].0 {
                return Err(Error::InvalidParameter("profile abscissae must be non-decreasing".into()));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::InvalidParameter("profile heights must be non-increasing".into()));
            }
        }
        let mut pts = points;
        pts.dedup();
        let xmax = xmax.unwrap_or(Extent::Finite(pts[pts.len() - 1].0));
        let ymax = ymax.unwrap_or(if pts[0].0 == 0.0 {
            Extent::Finite(pts[0].1)
        } else {
            Extent::Unbounded
        });
        if let Extent::Finite(v) = xmax {
            positive_finite("xmax", v)?;
        }
        if let Extent::Finite(v) = ymax {
            positive_finite("ymax", v)?;
        }
        let shadow = Self {
            profile: Profile::Sampled { points: pts },
            xmax,
            ymax,
        };
        if !shadow.contains(0.0, 0.0) {
            return Err(Error::InvalidParameter("profile does not contain the origin".into()));
        }
        Ok(shadow)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn xmax(&self) -> Extent {
        self.xmax
    }

    pub fn ymax(&self) -> Extent {
        self.ymax
    }

    pub fn is_bounded(&self) -> bool {
        self.xmax.is_finite() && self.ymax.is_finite()
    }

    /// `(xmax, ymax)` when both are finite.
    pub fn extents(&self) -> Option<(f64, f64)> {
        Some((self.xmax.finite()?, self.ymax.finite()?))
    }

    /// Height of the upper boundary at abscissa `x >= 0`, ignoring `xmax`
    /// but including the `ymax` cap. May be `+inf` for unbounded shadows.
    pub fn beta(&self, x: f64) -> f64 {
        let cap = self.ymax.as_f64();
        match &self.profile {
            Profile::Rectangle => cap,
            Profile::Superellipse { q1, q2 } => {
                let a = self.xmax.as_f64();
                let u = (x / a).powf(*q1);
                if u >= 1.0 {
                    0.0
                } else {
                    cap * (1.0 - u).powf(1.0 / q2)
                }
            }
            Profile::Sampled { points } => {
                let idx = points.partition_point(|p| p.0 <= x);
                let h = if idx == 0 {
                    f64::INFINITY
                } else if idx == points.len() {
                    points[idx - 1].1
                } else {
                    let (x0, y0) = points[idx - 1];
                    let (x1, y1) = points[idx];
                    if x == x0 {
                        y0
                    } else {
                        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
                    }
                };
                h.min(cap)
            }
        }
    }

    /// Strict membership of `(|x|, |y|)`; the region is open.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (x, y) = (x.abs(), y.abs());
        if x >= self.xmax.as_f64() || y >= self.ymax.as_f64() {
            return false;
        }
        match &self.profile {
            Profile::Rectangle => true,
            Profile::Superellipse { q1, q2 } => {
                let a = self.xmax.as_f64();
                let b = self.ymax.as_f64();
                (x / a).powf(*q1) + (y / b).powf(*q2) < 1.0
            }
            Profile::Sampled { .. } => y < self.beta(x),
        }
    }

    /// Coordinatewise scaling `(x, y) -> (lx * x, ly * y)`.
    pub fn scaled(&self, lx: f64, ly: f64) -> Result<Self> {
        positive_finite("scale", lx)?;
        positive_finite("scale", ly)?;
        let profile = match &self.profile {
            Profile::Sampled { points } => Profile::Sampled {
                points: points.iter().map(|&(x, y)| (x * lx, y * ly)).collect(),
            },
            p => p.clone(),
        };
        Ok(Self {
            profile,
            xmax: self.xmax.scaled(lx),
            ymax: self.ymax.scaled(ly),
        })
    }

    /// Exchange the two axes.
    pub fn swapped(&self) -> Result<Self> {
        let profile = match &self.profile {
            Profile::Rectangle => Profile::Rectangle,
            Profile::Superellipse { q1, q2 } => Profile::Superellipse { q1: *q2, q2: *q1 },
            Profile::Sampled { .. } => {
                let chain = self.boundary_chain()?;
                let points = chain.iter().rev().map(|&(x, y)| (y, x)).collect();
                return Shadow::sampled(points, Some(self.ymax), Some(self.xmax));
            }
        };
        Ok(Self {
            profile,
            xmax: self.ymax,
            ymax: self.xmax,
        })
    }

    /// Vertices of the upper boundary of a bounded shadow, from `(0, ymax)`
    /// down to `(xmax, 0)`, as a monotone chain. Curved profiles are sampled
    /// with `curve_samples` points.
    pub fn boundary_chain_with(&self, curve_samples: usize) -> Result<Vec<(f64, f64)>> {
        let (xm, ym) = self
            .extents()
            .ok_or_else(|| Error::UnboundedDomain("boundary of an unbounded shadow".into()))?;
        let mut chain = Vec::new();
        match &self.profile {
            Profile::Rectangle => {
                chain.extend([(0.0, ym), (xm, ym), (xm, 0.0)]);
            }
            Profile::Superellipse { q1, q2 } => {
                let n = curve_samples.max(2);
                // Parametrize by an angle so both ends are resolved.
                for k in 0..=n {
                    let t = std::f64::consts::FRAC_PI_2 * k as f64 / n as f64;
                    let (s, c) = t.sin_cos();
                    let x = xm * s.powf(2.0 / q1);
                    let y = ym * c.powf(2.0 / q2);
                    chain.push((x, y));
                }
                chain[0] = (0.0, ym);
                chain[n] = (xm, 0.0);
            }
            Profile::Sampled { points } => {
                let first = points[0];
                chain.push((0.0, ym));
                if first.0 > 0.0 {
                    chain.push((first.0, ym));
                }
                for &(x, y) in points {
                    if x >= xm {
                        break;
                    }
                    chain.push((x, y.min(ym)));
                }
                let tail = self.beta(xm);
                chain.push((xm, tail.min(ym)));
                chain.push((xm, 0.0));
            }
        }
        chain.dedup();
        Ok(chain)
    }

    pub fn boundary_chain(&self) -> Result<Vec<(f64, f64)>> {
        self.boundary_chain_with(512)
    }

    /// Distance from the origin to the boundary along the ray with
    /// direction `(cos phi, sin phi)`, `phi` in `[0, pi/2]`.
    pub fn ray_radius(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let (c, s) = (c.max(0.0), s.max(0.0));
        let mut hi = 1.0;
        let mut guard = 0;
        while self.contains(hi * c, hi * s) {
            hi *= 2.0;
            guard += 1;
            if guard > 1100 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.contains(mid * c, mid * s) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
