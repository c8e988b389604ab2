//! Bivariate truncated power series and quadrature cross-checks.
//!
//! Coefficients `c_α` are stored for `α₁ + α₂ ≤ cap` in a dense triangular
//! table, degree by degree.

use crate::domains::{Extent, Shadow};
use crate::error::{Error, Result};
use crate::point::Point2;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::{Read, Write};
use std::ops::{Add, Mul};

/// Largest accepted degree cap.
pub const MAX_CAP: usize = 200;
/// Relative agreement between successive node doublings.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Node budget of one-dimensional contour quadrature.
pub const MAX_CONTOUR_NODES: usize = 1 << 14;
/// Node budget per variable of torus quadrature.
pub const MAX_TORUS_NODES: usize = 1 << 10;

/// Scalars a series can hold.
pub trait Coefficient: Clone + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn from_count(n: usize) -> Self;
    /// `(|α|+1)! / α!`
    fn h_weight(a1: usize, a2: usize) -> Self;
    /// `α! / (|α|+1)!`
    fn h_weight_recip(a1: usize, a2: usize) -> Self;
}

/// `(|α|+1)·C(|α|, α₁)` by incremental ratios.
pub fn h_weight_f64(a1: usize, a2: usize) -> f64 {
    let d = a1 + a2;
    let k = a1.min(a2);
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (d - k + i) as f64 / i as f64;
    }
    (d + 1) as f64 * c
}

impl Coefficient for Complex64 {
    fn from_count(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn h_weight(a1: usize, a2: usize) -> Self {
        Complex64::new(h_weight_f64(a1, a2), 0.0)
    }
    fn h_weight_recip(a1: usize, a2: usize) -> Self {
        Complex64::new(1.0 / h_weight_f64(a1, a2), 0.0)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl Coefficient for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn h_weight(a1: usize, a2: usize) -> Self {
        BigRational::new(factorial(a1 + a2 + 1), factorial(a1) * factorial(a2))
    }
    fn h_weight_recip(a1: usize, a2: usize) -> Self {
        BigRational::new(factorial(a1) * factorial(a2), factorial(a1 + a2 + 1))
    }
}

fn tri_index(a1: usize, a2: usize) -> usize {
    let d = a1 + a2;
    d * (d + 1) / 2 + a2
}

fn tri_len(cap: usize) -> usize {
    (cap + 1) * (cap + 2) / 2
}

/// Truncated series `Σ_{|α| ≤ cap} c_α z^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries2<T = Complex64> {
    cap: usize,
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries2<T> {
    pub fn zeros(cap: usize) -> Result<Self> {
        check_cap(cap)?;
        Ok(Self {
            cap,
            coeffs: vec![T::zero(); tri_len(cap)],
        })
    }

    pub fn from_fn(cap: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        check_cap(cap)?;
        let mut coeffs = Vec::with_capacity(tri_len(cap));
        for d in 0..=cap {
            for a2 in 0..=d {
                coeffs.push(f(d - a2, a2));
            }
        }
        Ok(Self { cap, coeffs })
    }

    /// Single monomial `c z₁^{a1} z₂^{a2}` with the given cap.
    pub fn monomial(cap: usize, a1: usize, a2: usize, c: T) -> Result<Self> {
        let mut s = Self::zeros(cap)?;
        s.set(a1, a2, c)?;
        Ok(s)
    }

    /// All coefficients one: `1/((1-z₁)(1-z₂))`.
    pub fn geometric(cap: usize) -> Result<Self> {
        Self::from_fn(cap, |_, _| T::one())
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `c_α`, zero beyond the cap.
    pub fn get(&self, a1: usize, a2: usize) -> T {
        if a1 + a2 > self.cap {
            T::zero()
        } else {
            self.coeffs[tri_index(a1, a2)].clone()
        }
    }

    pub fn set(&mut self, a1: usize, a2: usize, c: T) -> Result<()> {
        if a1 + a2 > self.cap {
            return Err(Error::InvalidArgument(format!(
                "index ({a1}, {a2}) exceeds cap {}",
                self.cap
            )));
        }
        self.coeffs[tri_index(a1, a2)] = c;
        Ok(())
    }

    /// `((α₁, α₂), c_α)` in degree order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &T)> + '_ {
        (0..=self.cap)
            .flat_map(|d| (0..=d).map(move |a2| (d - a2, a2)))
            .zip(self.coeffs.iter())
    }

    pub fn truncated(&self, cap: usize) -> Self {
        let cap = cap.min(self.cap);
        Self {
            cap,
            coeffs: self.coeffs[..tri_len(cap)].to_vec(),
        }
    }

    fn map(&self, mut f: impl FnMut(usize, usize, &T) -> T) -> Self {
        let coeffs = self.iter().map(|((a1, a2), c)| f(a1, a2, c)).collect();
        Self {
            cap: self.cap,
            coeffs,
        }
    }
}

fn check_cap(cap: usize) -> Result<()> {
    if cap > MAX_CAP {
        return Err(Error::InvalidParameter(format!(
            "degree cap {cap} exceeds {MAX_CAP}"
        )));
    }
    Ok(())
}

/// `Σ f_α g_α z^α`, truncated to the smaller cap.
pub fn hadamard<T: Coefficient>(f: &TruncatedSeries2<T>, g: &TruncatedSeries2<T>) -> TruncatedSeries2<T> {
    let f = f.truncated(g.cap);
    f.map(|a1, a2, c| c.clone() * g.get(a1, a2))
}

/// `Σ α!/(|α|+1)! f_α g_α z^α`, truncated to the smaller cap.
pub fn weighted_hadamard<T: Coefficient>(
    f: &TruncatedSeries2<T>,
    g: &TruncatedSeries2<T>,
) -> TruncatedSeries2<T> {
    let f = f.truncated(g.cap);
    f.map(|a1, a2, c| T::h_weight_recip(a1, a2) * c.clone() * g.get(a1, a2))
}

/// Coefficients of `h_(1,1)`: `(|α|+1)!/α!`.
pub fn h_unit_coeffs<T: Coefficient>(cap: usize) -> Result<TruncatedSeries2<T>> {
    TruncatedSeries2::from_fn(cap, T::h_weight)
}

/// Coefficients of `h_ξ(z) = (1 - ξ∙z)⁻²`: `(|α|+1)!/α! ξ^α`.
pub fn h_xi_coeffs(xi: &Point2, cap: usize) -> Result<TruncatedSeries2> {
    check_cap(cap)?;
    let mut s = TruncatedSeries2::zeros(cap)?;
    let mut p1 = Complex64::one();
    for a1 in 0..=cap {
        let mut p = p1;
        for a2 in 0..=cap - a1 {
            s.coeffs[tri_index(a1, a2)] = p * h_weight_f64(a1, a2);
            p *= xi.z2;
        }
        p1 *= xi.z1;
    }
    Ok(s)
}

/// `Λ(f) = f + z₁ ∂f/∂z₁`.
pub fn lambda_op<T: Coefficient>(f: &TruncatedSeries2<T>) -> TruncatedSeries2<T> {
    f.map(|a1, _, c| T::from_count(a1 + 1) * c.clone())
}

impl TruncatedSeries2<Complex64> {
    /// Nested Horner evaluation.
    pub fn eval(&self, z: &Point2) -> Complex64 {
        let mut outer = Complex64::zero();
        for a1 in (0..=self.cap).rev() {
            let mut inner = Complex64::zero();
            for a2 in (0..=self.cap - a1).rev() {
                inner = inner * z.z2 + self.coeffs[tri_index(a1, a2)];
            }
            outer = outer * z.z1 + inner;
        }
        outer
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Write nonzero coefficients as CSV `a1,a2,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for ((a1, a2), c) in self.iter() {
            if !c.is_zero() {
                wr.serialize(CoeffRecord {
                    a1,
                    a2,
                    re: c.re,
                    im: c.im,
                })
                .map_err(csv_err)?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Read CSV `a1,a2,re,im`; absent coefficients are zero. The cap is
    /// `cap` if given, else the largest degree present.
    pub fn read_csv<R: Read>(r: R, cap: Option<usize>) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut recs = Vec::new();
        for rec in rd.deserialize() {
            let rec: CoeffRecord = rec.map_err(csv_err)?;
            if !(rec.re.is_finite() && rec.im.is_finite()) {
                return Err(Error::Parse(format!("non-finite coefficient at ({}, {})", rec.a1, rec.a2)));
            }
            recs.push(rec);
        }
        let cap = cap.unwrap_or_else(|| recs.iter().map(|r| r.a1 + r.a2).max().unwrap_or(0));
        let mut s = Self::zeros(cap)?;
        for r in recs {
            if r.a1 + r.a2 <= cap {
                s.set(r.a1, r.a2, Complex64::new(r.re, r.im))?;
            }
        }
        Ok(s)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
struct CoeffRecord {
    a1: usize,
    a2: usize,
    re: f64,
    im: f64,
}

/// Ordered pairwise sum.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Nodes used at the final level (per variable for torus rules).
    pub nodes: usize,
    /// `|last - previous|` between the final two levels.
    pub error_estimate: f64,
}

/// Double `n` until two successive levels agree to [`QUADRATURE_TOLERANCE`]
/// relative to `max(|value|, scale)`. `rule(n)` returns `(value, scale)`.
fn doubling(start: usize, max: usize, mut rule: impl FnMut(usize) -> Result<(Complex64, f64)>) -> Result<Quadrature> {
    let mut n = start;
    let (mut prev, _) = rule(n)?;
    loop {
        if n * 2 > max {
            return Err(Error::QuadratureFailure {
                nodes: n,
                relative_change: f64::NAN,
            });
        }
        n *= 2;
        let (value, scale) = rule(n)?;
        let err = (value - prev).norm();
        let reference = value.norm().max(scale);
        if err <= QUADRATURE_TOLERANCE * reference || err == 0.0 {
            return Ok(Quadrature {
                value,
                nodes: n,
                error_estimate: err,
            });
        }
        if n * 2 > max {
            return Err(Error::QuadratureFailure {
                nodes: n,
                relative_change: err / reference,
            });
        }
        prev = value;
    }
}

/// `(f∗g)(z)` by the tensor trapezoidal rule on the torus `|ζ_j| = 1/ρ`:
/// the mean of `f(zζ) g(1/ζ)`.
pub fn torus_hadamard<F, G>(f: F, g: G, rho: f64, z: &Point2, nodes: usize) -> Result<Quadrature>
where
    F: Fn(&Point2) -> Complex64 + Sync,
    G: Fn(&Point2) -> Complex64 + Sync,
{
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if nodes < 8 {
        return Err(Error::InvalidParameter("torus quadrature needs at least 8 nodes".into()));
    }
    let r = 1.0 / rho;
    doubling(nodes, MAX_TORUS_NODES, |n| {
        let circle: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
            .collect();
        let terms: Vec<Complex64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (e1, e2) = (circle[idx % n], circle[idx / n]);
                let zeta = Point2::new(e1 * r, e2 * r);
                let inv = Point2::new(e1.conj() * rho, e2.conj() * rho);
                f(&z.mul(&zeta)) * g(&inv)
            })
            .collect();
        let count = (n * n) as f64;
        let scale = terms.iter().map(|t| t.norm()).sum::<f64>() / count;
        Ok((pairwise_sum(&terms) / count, scale))
    })
}

/// Closed contour in `C_*`.
#[derive(Debug, Clone, PartialEq)]
pub enum ContourShape {
    Circle { center: Complex64, radius: f64 },
    /// Vertices of a closed polygon; the last vertex connects to the first.
    Polyline(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub shape: ContourShape,
    /// Initial node count.
    pub nodes: usize,
}

impl ContourSpec {
    pub fn unit_circle() -> Self {
        Self::circle(Complex64::zero(), 1.0)
    }

    pub fn circle(center: Complex64, radius: f64) -> Self {
        Self {
            shape: ContourShape::Circle { center, radius },
            nodes: 32,
        }
    }

    pub fn polyline(vertices: Vec<Complex64>) -> Self {
        Self {
            shape: ContourShape::Polyline(vertices),
            nodes: 8,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.shape {
            ContourShape::Circle { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidParameter("circle radius must be positive".into()));
                }
                if (center.norm() - radius).abs() <= 1e-14 * radius {
                    return Err(Error::ContourThroughZero);
                }
            }
            ContourShape::Polyline(v) => {
                if v.len() < 3 {
                    return Err(Error::InvalidParameter("polyline needs at least 3 vertices".into()));
                }
                for k in 0..v.len() {
                    let (a, b) = (v[k], v[(k + 1) % v.len()]);
                    let scale = a.norm().max(b.norm());
                    if segment_distance_to_origin(a, b) <= 1e-14 * scale {
                        return Err(Error::ContourThroughZero);
                    }
                }
            }
        }
        if self.nodes < 2 {
            return Err(Error::InvalidParameter("contour needs at least 2 nodes".into()));
        }
        Ok(())
    }
}

fn segment_distance_to_origin(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// `(2πi)⁻¹ ∮_γ (1 + ζ⁻¹) Λf(I_z(ζ)) dζ`, which is `(h_(1,1) ∗ f)(z)` when
/// `γ` is admissible for `z`. `lambda_f` evaluates `Λf`.
///
/// Circles use the trapezoidal rule; polygons use Gauss–Legendre on each
/// edge. Both double their nodes until converged.
pub fn contour_h_star<L>(lambda_f: L, z: &Point2, gamma: &ContourSpec) -> Result<Quadrature>
where
    L: Fn(&Point2) -> Complex64 + Sync,
{
    gamma.validate()?;
    // ζ ≠ 0 on a validated contour
    let integrand = |zeta: Complex64| {
        let inv = zeta.inv();
        let w = Point2::new(z.z1 * (1.0 + zeta), z.z2 * (1.0 + inv));
        (1.0 + inv) * lambda_f(&w)
    };
    match &gamma.shape {
        ContourShape::Circle { center, radius } => doubling(gamma.nodes, MAX_CONTOUR_NODES, |n| {
            let terms: Vec<Complex64> = (0..n)
                .into_par_iter()
                .map(|k| {
                    let e = Complex64::from_polar(*radius, TAU * k as f64 / n as f64);
                    integrand(center + e) * e
                })
                .collect();
            let scale = terms.iter().map(|t| t.norm()).sum::<f64>() / n as f64;
            Ok((pairwise_sum(&terms) / n as f64, scale))
        }),
        ContourShape::Polyline(v) => {
            let edges = v.len();
            doubling(gamma.nodes, MAX_CONTOUR_NODES / edges, |n| {
                let rule = gauss_quad::legendre::GaussLegendre::new(n)
                    .map_err(|e| Error::Internal(e.to_string()))?;
                let pairs = rule.as_node_weight_pairs();
                let terms: Vec<Complex64> = (0..edges * n)
                    .into_par_iter()
                    .map(|idx| {
                        let (a, b) = (v[idx / n], v[(idx / n + 1) % edges]);
                        let (t, w) = pairs[idx % n];
                        let half = (b - a) * 0.5;
                        integrand(a + half * (t + 1.0)) * half * w
                    })
                    .collect();
                let scale = terms.iter().map(|t| t.norm()).sum::<f64>() / TAU;
                Ok((pairwise_sum(&terms) / Complex64::new(0.0, TAU), scale))
            })
        }
    }
}

/// [`contour_h_star`] for a truncated series.
pub fn contour_h_star_series(f: &TruncatedSeries2, z: &Point2, gamma: &ContourSpec) -> Result<Quadrature> {
    let lf = lambda_op(f);
    contour_h_star(|w| lf.eval(w), z, gamma)
}

/// Convergence radius `t*` along direction `(u, v)` from the top half of
/// the degree bands. `None` when all those bands vanish.
fn directional_radius(f: &TruncatedSeries2, u: f64, v: f64) -> Option<f64> {
    let (lu, lv) = (u.ln(), v.ln());
    let cap = f.cap();
    let mut samples = Vec::new();
    for d in (cap / 2).max(1)..=cap {
        let mut best = f64::NEG_INFINITY;
        for a2 in 0..=d {
            let a1 = d - a2;
            let c = f.get(a1, a2).norm();
            if c == 0.0 || (a1 > 0 && u == 0.0) || (a2 > 0 && v == 0.0) {
                continue;
            }
            let mut l = c.ln();
            if a1 > 0 {
                l += a1 as f64 * lu;
            }
            if a2 > 0 {
                l += a2 as f64 * lv;
            }
            best = best.max(l);
        }
        if best.is_finite() {
            samples.push((d as f64, best / d as f64));
        }
    }
    if samples.is_empty() {
        return None;
    }
    Some((-extrapolate(&samples)).exp())
}

/// Least-squares fit of `y = a + b/d + c ln(d)/d`; returns `a`, falling
/// back to fewer terms when there are too few samples.
fn extrapolate(samples: &[(f64, f64)]) -> f64 {
    let basis = |d: f64| [1.0, 1.0 / d, d.ln() / d];
    let terms = match samples.len() {
        1 => return samples[0].1,
        2 => 2,
        _ => 3,
    };
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for &(d, y) in samples {
        let b = basis(d);
        for i in 0..terms {
            aty[i] += b[i] * y;
            for j in 0..terms {
                ata[i][j] += b[i] * b[j];
            }
        }
    }
    match solve(&mut ata, &mut aty, terms) {
        Some(x) => x[0],
        None => samples.last().unwrap().1,
    }
}

fn solve(a: &mut [[f64; 3]; 3], b: &mut [f64; 3], n: usize) -> Option<[f64; 3]> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Estimate the convergence shadow of `f` from its coefficients, along
/// `directions` rays of the quarter circle. Magnitudes are tracked in log
/// space.
pub fn cauchy_hadamard_shadow(f: &TruncatedSeries2, directions: usize) -> Result<Shadow> {
    if f.cap() < 20 {
        return Err(Error::InvalidParameter("cauchy_hadamard_shadow needs cap >= 20".into()));
    }
    if directions < 2 {
        return Err(Error::InvalidParameter("need at least 2 directions".into()));
    }
    let radii: Vec<Option<(f64, f64)>> = (0..directions)
        .map(|k| {
            // from the y-axis down to the x-axis
            let phi = FRAC_PI_2 * (1.0 - k as f64 / (directions - 1) as f64);
            let (u, v) = if k == directions - 1 { (1.0, 0.0) } else if k == 0 { (0.0, 1.0) } else { (phi.cos(), phi.sin()) };
            directional_radius(f, u, v).map(|t| (t * u, t * v))
        })
        .collect();
    if radii.iter().all(Option::is_none) {
        return Err(Error::InfiniteRadius);
    }
    let ymax = match radii[0] {
        Some((_, y)) => Extent::Finite(y),
        None => Extent::Unbounded,
    };
    let xmax = match radii[directions - 1] {
        Some((x, _)) => Extent::Finite(x),
        None => Extent::Unbounded,
    };
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (x, y) in radii.into_iter().flatten() {
        // keep the chain monotone despite estimation noise
        let (x, y) = match points.last() {
            Some(&(px, py)) => (x.max(px), y.min(py)),
            None => (x, y),
        };
        points.push((x, y));
    }
    Shadow::sampled(points, Some(xmax), Some(ymax))
}

/// Exact rational counterparts used for identity checks.
pub mod exact {
    use super::*;

    pub type RationalSeries = TruncatedSeries2<BigRational>;

    /// Series with small integer coefficients `c(α₁, α₂)`.
    pub fn from_integers(cap: usize, mut c: impl FnMut(usize, usize) -> i64) -> Result<RationalSeries> {
        TruncatedSeries2::from_fn(cap, |a1, a2| BigRational::from_integer(BigInt::from(c(a1, a2))))
    }

    /// `h_(1,1) ∗ weighted_hadamard(f, g) == f ∗ g`, checked exactly.
    pub fn reciprocal_identity_holds(f: &RationalSeries, g: &RationalSeries) -> Result<bool> {
        let cap = f.cap().min(g.cap());
        let h = h_unit_coeffs::<BigRational>(cap)?;
        Ok(hadamard(&h, &weighted_hadamard(f, g)) == hadamard(f, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cap_limit() {
        assert!(TruncatedSeries2::<Complex64>::zeros(200).is_ok());
        assert!(TruncatedSeries2::<Complex64>::zeros(201).is_err());
    }

    #[test]
    fn hadamard_examples() {
        let g = TruncatedSeries2::<Complex64>::geometric(10).unwrap();
        assert_eq!(hadamard(&g, &g), g);
        let m1 = TruncatedSeries2::monomial(5, 2, 1, c(1.0)).unwrap();
        let m2 = TruncatedSeries2::monomial(5, 1, 2, c(1.0)).unwrap();
        assert!(hadamard(&m1, &m2).iter().all(|(_, v)| v.is_zero()));
        let h = h_xi_coeffs(&Point2::real(1.0, 1.0), 4).unwrap();
        let f = TruncatedSeries2::from_fn(6, |a1, a2| c((a1 * 10 + a2) as f64)).unwrap();
        let p = hadamard(&h, &f);
        assert_eq!(p.cap(), 4);
        assert_eq!(p.get(1, 1), c(6.0 * 11.0));
    }

    #[test]
    fn h_xi_examples() {
        let h = h_xi_coeffs(&Point2::real(1.0, 1.0), 5).unwrap();
        assert_eq!(h.get(0, 0), c(1.0));
        assert_eq!(h.get(2, 1), c(12.0));
        let z = h_xi_coeffs(&Point2::ORIGIN, 5).unwrap();
        assert_eq!(z.get(0, 0), c(1.0));
        assert!(z.iter().skip(1).all(|(_, v)| v.is_zero()));
        // ξ^α factor
        let xi = Point2::new(Complex64::new(0.0, 1.0), c(2.0));
        let hx = h_xi_coeffs(&xi, 5).unwrap();
        assert!((hx.get(1, 2) - Complex64::new(0.0, 1.0) * 4.0 * 12.0).norm() < 1e-12);
    }

    #[test]
    fn weighted_examples() {
        let h = h_unit_coeffs::<Complex64>(12).unwrap();
        let g = TruncatedSeries2::from_fn(12, |a1, a2| Complex64::new(a1 as f64 - 0.5, a2 as f64)).unwrap();
        let w = weighted_hadamard(&h, &g);
        for ((a1, a2), v) in w.iter() {
            assert!((v - g.get(a1, a2)).norm() < 1e-12 * (1.0 + g.get(a1, a2).norm()));
        }
        let one = TruncatedSeries2::monomial(0, 0, 0, c(1.0)).unwrap();
        assert_eq!(weighted_hadamard(&one, &one).get(0, 0), c(1.0));
        let x = TruncatedSeries2::monomial(1, 1, 0, c(1.0)).unwrap();
        assert_eq!(weighted_hadamard(&x, &x).get(1, 0), c(0.5));
    }

    #[test]
    fn lambda_examples() {
        let z1 = TruncatedSeries2::monomial(3, 1, 0, c(1.0)).unwrap();
        assert_eq!(lambda_op(&z1).get(1, 0), c(2.0));
        let z2k = TruncatedSeries2::monomial(6, 0, 5, c(1.0)).unwrap();
        assert_eq!(lambda_op(&z2k), z2k);
        let m = TruncatedSeries2::monomial(3, 2, 1, c(1.0)).unwrap();
        assert_eq!(lambda_op(&m).get(2, 1), c(3.0));
    }

    #[test]
    fn eval_examples() {
        let k = TruncatedSeries2::monomial(7, 0, 0, Complex64::new(2.0, -1.0)).unwrap();
        assert_eq!(k.eval(&Point2::real(3.0, -4.0)), Complex64::new(2.0, -1.0));
        let h = h_unit_coeffs::<Complex64>(40).unwrap();
        assert!((h.eval(&Point2::real(0.1, 0.1)) - c(1.5625)).norm() < 1e-10);
        let g = TruncatedSeries2::<Complex64>::geometric(60).unwrap();
        assert!((g.eval(&Point2::real(0.5, 0.0)) - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn torus_examples() {
        let z1 = TruncatedSeries2::monomial(1, 1, 0, c(1.0)).unwrap();
        let q = torus_hadamard(|w| z1.eval(w), |w| z1.eval(w), 1.0, &Point2::real(0.3, 0.0), 8).unwrap();
        assert!((q.value - c(0.3)).norm() < 1e-12);

        let h = h_unit_coeffs::<Complex64>(60).unwrap();
        let z = Point2::real(0.2, 0.2);
        let q = torus_hadamard(
            |w| (Complex64::one() - w.z1 - w.z2).powi(-2),
            |w| ((Complex64::one() - w.z1) * (Complex64::one() - w.z2)).inv(),
            0.9,
            &z,
            16,
        )
        .unwrap();
        let g = TruncatedSeries2::<Complex64>::geometric(60).unwrap();
        assert!((q.value - hadamard(&h, &g).eval(&z)).norm() < 1e-8);

        let q = torus_hadamard(|w| w.z1.exp(), |_| Complex64::zero(), 1.0, &z, 8).unwrap();
        assert_eq!(q.value, Complex64::zero());
    }

    #[test]
    fn contour_examples() {
        let z = Point2::new(Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.4));
        for (a1, a2) in [(0, 0), (1, 0), (2, 3), (4, 1)] {
            let f = TruncatedSeries2::monomial(5, a1, a2, c(1.0)).unwrap();
            let q = contour_h_star_series(&f, &z, &ContourSpec::unit_circle()).unwrap();
            let expected = z.z1.powu(a1 as u32) * z.z2.powu(a2 as u32) * h_weight_f64(a1, a2);
            assert!((q.value - expected).norm() < 1e-12 * (1.0 + expected.norm()), "{a1},{a2}");
        }
        let f = TruncatedSeries2::monomial(1, 1, 0, c(1.0)).unwrap();
        let q = contour_h_star_series(&f, &Point2::real(0.5, 0.7), &ContourSpec::unit_circle()).unwrap();
        assert!((q.value - c(1.0)).norm() < 1e-12);
        // a square around 0 agrees with the circle
        let g = TruncatedSeries2::from_fn(6, |a1, a2| Complex64::new(1.0 / (1 + a1) as f64, a2 as f64 * 0.1)).unwrap();
        let sq = ContourSpec::polyline(vec![
            Complex64::new(1.0, -1.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(-1.0, -1.0),
        ]);
        let a = contour_h_star_series(&g, &z, &sq).unwrap().value;
        let b = contour_h_star_series(&g, &z, &ContourSpec::circle(Complex64::new(0.2, 0.1), 2.0)).unwrap().value;
        assert!((a - b).norm() < 1e-9 * b.norm());
        // a loop not enclosing 0 gives 0
        let far = contour_h_star_series(&g, &z, &ContourSpec::circle(c(3.0), 1.0)).unwrap().value;
        assert!(far.norm() < 1e-9);
    }

    #[test]
    fn contour_through_zero() {
        let f = TruncatedSeries2::monomial(1, 0, 0, c(1.0)).unwrap();
        let z = Point2::real(0.1, 0.1);
        assert!(matches!(
            contour_h_star_series(&f, &z, &ContourSpec::circle(c(1.0), 1.0)),
            Err(Error::ContourThroughZero)
        ));
        let tri = ContourSpec::polyline(vec![c(-1.0), c(1.0), Complex64::new(0.0, 1.0)]);
        assert!(matches!(contour_h_star_series(&f, &z, &tri), Err(Error::ContourThroughZero)));
    }

    #[test]
    fn cauchy_hadamard_examples() {
        let g = TruncatedSeries2::<Complex64>::geometric(60).unwrap();
        let s = cauchy_hadamard_shadow(&g, 65).unwrap();
        for k in 0..=20 {
            let phi = FRAC_PI_2 * k as f64 / 20.0;
            let expected = 1.0 / phi.cos().max(phi.sin());
            assert!((s.ray_radius(phi) - expected).abs() < 5e-2 * expected, "phi={phi}");
        }
        let h = h_unit_coeffs::<Complex64>(60).unwrap();
        let s = cauchy_hadamard_shadow(&h, 65).unwrap();
        for k in 0..=20 {
            let phi = FRAC_PI_2 * k as f64 / 20.0;
            let expected = 1.0 / (phi.cos() + phi.sin());
            assert!((s.ray_radius(phi) - expected).abs() < 5e-2 * expected, "phi={phi}");
        }
        let m = TruncatedSeries2::monomial(60, 2, 3, c(1.0)).unwrap();
        assert!(matches!(cauchy_hadamard_shadow(&m, 33), Err(Error::InfiniteRadius)));
        assert!(cauchy_hadamard_shadow(&TruncatedSeries2::<Complex64>::geometric(10).unwrap(), 9).is_err());
    }

    #[test]
    fn exact_reciprocal_identity() {
        for cap in 0..=6 {
            let f = exact::from_integers(cap, |a1, a2| a1 as i64 * 3 - a2 as i64 + 1).unwrap();
            let g = exact::from_integers(cap, |a1, a2| (a1 * a2) as i64 - 2).unwrap();
            assert!(exact::reciprocal_identity_holds(&f, &g).unwrap());
        }
        assert_eq!(BigRational::h_weight(2, 1), BigRational::from_integer(BigInt::from(12)));
    }
}
