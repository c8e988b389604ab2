//! Cross-checks between the geometric constructions and series analysis.

use crate::domains::{exhaustion, make_ball, make_ellipsoid, make_polydisc, Domain2, Shadow};
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::series::{
    cauchy_hadamard_shadow, contour_h_star_series, h_xi_coeffs, hadamard, ContourSpec, TruncatedSeries2,
};
use crate::separation::{
    separates, verify_cycle, verify_path, GridResolution, LogPolarGrid, SeparationVerdict,
};
use crate::star::{h_star_shadow, star_shadow_with, CellState, GridSpec, StarResult};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::{FRAC_PI_2, TAU};

/// Default tolerance of shadow comparisons.
pub const SHADOW_TOLERANCE: f64 = 5e-2;
/// Default relative tolerance of series identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Rays used for the boundary discrepancy of [`shadow_distance`].
pub const DISTANCE_RAYS: usize = 64;
/// Directions used for Cauchy–Hadamard estimates.
pub const CAUCHY_HADAMARD_DIRECTIONS: usize = 65;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub inputs: Value,
    pub predicted: Value,
    pub observed: Value,
    /// Discrepancy under `metric`.
    pub error: f64,
    pub tolerance: f64,
    pub metric: String,
    pub pass: bool,
    /// Designed to fail.
    pub control: bool,
    /// Which side of the claim the check supports, when it is one-sided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certifies: Option<String>,
}

impl Case {
    pub fn new(name: impl Into<String>, inputs: Value, predicted: Value, observed: Value, error: f64, tolerance: f64, metric: &str) -> Self {
        Self {
            name: name.into(),
            inputs,
            predicted,
            observed,
            error,
            tolerance,
            metric: metric.to_string(),
            pass: error <= tolerance,
            control: false,
            certifies: None,
        }
    }

    pub fn control(mut self) -> Self {
        self.control = true;
        self
    }

    pub fn certifying(mut self, side: &str) -> Self {
        self.certifies = Some(side.to_string());
        self
    }

    /// Passing cases pass, controls fail.
    pub fn as_expected(&self) -> bool {
        self.pass != self.control
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub controls: usize,
    pub controls_failed: usize,
    /// Every regular case passed and every control failed.
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: Option<u64>, cases: Vec<Case>) -> Self {
        let summary = summarize(&cases);
        Self {
            suite: suite.into(),
            seed,
            cases,
            summary,
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.ok
    }

    /// Concatenate cases under a new suite name.
    pub fn merge(suite: impl Into<String>, seed: Option<u64>, reports: impl IntoIterator<Item = Report>) -> Self {
        let cases = reports.into_iter().flat_map(|r| r.cases).collect();
        Self::new(suite, seed, cases)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.as_expected())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn summarize(cases: &[Case]) -> Summary {
    let passed = cases.iter().filter(|c| c.pass).count();
    let controls = cases.iter().filter(|c| c.control).count();
    let controls_failed = cases.iter().filter(|c| c.control && !c.pass).count();
    Summary {
        total: cases.len(),
        passed,
        failed: cases.len() - passed,
        controls,
        controls_failed,
        ok: cases.iter().all(Case::as_expected),
    }
}

/// Comparison of two shadows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShadowDistance {
    /// Symmetric-difference area over the window area.
    pub area: f64,
    /// Largest radial boundary discrepancy over [`DISTANCE_RAYS`] rays.
    pub max_ray: f64,
    pub window: (f64, f64),
}

/// Compare two bounded shadows on a `resolution²` grid over their joint
/// bounding box.
pub fn shadow_distance(a: &Shadow, b: &Shadow, resolution: usize) -> Result<ShadowDistance> {
    let (ea, eb) = match (a.extents(), b.extents()) {
        (Some(ea), Some(eb)) => (ea, eb),
        _ => return Err(Error::UnboundedDomain("shadow_distance needs bounded shadows".into())),
    };
    let window = (ea.0.max(eb.0), ea.1.max(eb.1));
    let n = resolution.max(1);
    let (w, h) = (window.0 / n as f64, window.1 / n as f64);
    let mut differ = 0usize;
    for j in 0..n {
        let y = (j as f64 + 0.5) * h;
        for i in 0..n {
            let x = (i as f64 + 0.5) * w;
            if a.contains(x, y) != b.contains(x, y) {
                differ += 1;
            }
        }
    }
    let max_ray = (0..DISTANCE_RAYS)
        .map(|k| {
            let phi = FRAC_PI_2 * k as f64 / (DISTANCE_RAYS - 1) as f64;
            (a.ray_radius(phi) - b.ray_radius(phi)).abs()
        })
        .fold(0.0, f64::max);
    Ok(ShadowDistance {
        area: differ as f64 / (n * n) as f64,
        max_ray,
        window,
    })
}

fn shadow_json(s: &Shadow) -> Value {
    json!({ "xmax": s.xmax().as_f64(), "ymax": s.ymax().as_f64() })
}

/// Compare `h_star_shadow(G)` with the Cauchy–Hadamard shadow of
/// `h_(1,1) ∗ g`.
///
/// A single germ `g` only bounds `h * G` from one side: the convergence
/// shadow of `h ∗ g` contains `h * G`. The case is labelled accordingly.
pub fn verify_hstar(g_domain: &Domain2, g_extremal: &TruncatedSeries2, grid: &GridSpec) -> Result<Report> {
    let hstar = h_star_shadow(g_domain, grid)?;
    verify_hstar_with(&hstar, g_extremal, grid.cells, "hstar")
}

fn verify_hstar_with(hstar: &StarResult, g_extremal: &TruncatedSeries2, resolution: usize, name: &str) -> Result<Report> {
    let h = h_xi_coeffs(&Point2::real(1.0, 1.0), g_extremal.cap())?;
    let series = cauchy_hadamard_shadow(&hadamard(&h, g_extremal), CAUCHY_HADAMARD_DIRECTIONS)?;
    let d = shadow_distance(&hstar.shadow, &series, resolution)?;
    let case = Case::new(
        name,
        json!({ "cap": g_extremal.cap(), "grid": resolution }),
        shadow_json(&hstar.shadow),
        json!({ "series_shadow": shadow_json(&series), "max_ray": d.max_ray }),
        d.area,
        SHADOW_TOLERANCE,
        "symmetric-difference area fraction",
    )
    .certifying("upper bound: the continuation domain of h*g contains h*G");
    Ok(Report::new("hstar", None, vec![case]))
}

/// Series with coefficients `c(α₁, α₂)` up to `cap`.
fn real_series(cap: usize, c: impl Fn(usize, usize) -> f64) -> Result<TruncatedSeries2> {
    TruncatedSeries2::from_fn(cap, |a1, a2| Complex64::new(c(a1, a2), 0.0))
}

/// The `hstar` suite: polydiscs against geometric-type germs, plus a
/// mismatched germ as negative control.
pub fn hstar_suite(grid: &GridSpec) -> Result<Report> {
    let cap = 60;
    let p11 = h_star_shadow(&make_polydisc(1.0, 1.0)?, grid)?;
    let p21 = h_star_shadow(&make_polydisc(2.0, 1.0)?, grid)?;
    let reports = [
        verify_hstar_with(&p11, &real_series(cap, |_, _| 1.0)?, grid.cells, "polydisc(1,1) vs geometric")?,
        verify_hstar_with(&p21, &real_series(cap, |a1, _| 0.5f64.powi(a1 as i32))?, grid.cells, "polydisc(2,1) vs 2^-a1")?,
        control(verify_hstar_with(&p11, &real_series(cap, |a1, _| 2f64.powi(a1 as i32))?, grid.cells, "polydisc(1,1) vs 2^a1 (mismatched germ)")?),
    ];
    Ok(Report::merge("hstar", None, reports))
}

fn control(mut r: Report) -> Report {
    r.cases = r.cases.into_iter().map(Case::control).collect();
    Report::new(r.suite, r.seed, r.cases)
}

fn unit_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

fn relative_error(observed: Complex64, predicted: Complex64) -> f64 {
    let diff = (observed - predicted).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / predicted.norm()
    }
}

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn contour_case(name: String, f: &TruncatedSeries2, z: &Point2, gamma: &ContourSpec) -> Result<Case> {
    let h = h_xi_coeffs(&Point2::real(1.0, 1.0), f.cap())?;
    let predicted = hadamard(&h, f).eval(z);
    let observed = contour_h_star_series(f, z, gamma)?.value;
    Ok(Case::new(
        name,
        json!({ "degree": f.cap(), "z": [complex_json(z.z1), complex_json(z.z2)] }),
        complex_json(predicted),
        complex_json(observed),
        relative_error(observed, predicted),
        IDENTITY_TOLERANCE,
        "relative",
    ))
}

/// Random polynomial of degree at most `max_degree` with coefficients in
/// the unit disc.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> Result<TruncatedSeries2> {
    let deg = rng.gen_range(1..=max_degree);
    TruncatedSeries2::from_fn(deg, |_, _| unit_disc(rng, 1.0))
}

/// Contour integral against the series identity on seeded random
/// polynomials, plus two fixed cases and a loop not enclosing 0 as control.
pub fn verify_contour_vs_series(trials: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circle = ContourSpec::unit_circle();
    let mut cases = Vec::with_capacity(trials + 3);
    let one = real_series(0, |_, _| 1.0)?;
    cases.push(contour_case("f=1".into(), &one, &Point2::real(0.7, -1.3), &circle)?);
    let z1z2 = TruncatedSeries2::monomial(2, 1, 1, Complex64::new(1.0, 0.0))?;
    cases.push(contour_case("f=z1*z2 at (1,1)".into(), &z1z2, &Point2::real(1.0, 1.0), &circle)?);
    for t in 0..trials {
        let f = random_polynomial(&mut rng, 8)?;
        let z = Point2::new(unit_disc(&mut rng, 2.0), unit_disc(&mut rng, 2.0));
        cases.push(contour_case(format!("random #{t}"), &f, &z, &circle)?);
    }
    let away = ContourSpec::circle(Complex64::new(3.0, 0.0), 1.0);
    cases.push(contour_case("loop not enclosing 0".into(), &z1z2, &Point2::real(1.0, 1.0), &away)?.control());
    Ok(Report::new("contour", Some(seed), cases))
}

/// `star_shadow(exhaustion(D, n), G)` for `n ≤ n_max` against
/// `star_shadow(D, G)` on one grid: IN cells never disappear as `n` grows,
/// and the last stage covers at least `1 - 2^-n_max - 8/cells` of the
/// limit's IN cells.
pub fn verify_union_lemma(d: &Domain2, g: &Domain2, n_max: u32, grid: &GridSpec) -> Result<Report> {
    let hstar = h_star_shadow(g, &GridSpec { window: None, ..*grid })?;
    verify_union_lemma_with(d, &hstar, n_max, grid)
}

/// [`verify_union_lemma`] with a precomputed `h * G`.
pub fn verify_union_lemma_with(d: &Domain2, hstar: &StarResult, n_max: u32, grid: &GridSpec) -> Result<Report> {
    let limit = star_shadow_with(d, hstar, &GridSpec { window: None, ..*grid })?;
    let fixed = GridSpec {
        window: Some(limit.window()),
        ..*grid
    };
    let stages = (0..=n_max)
        .map(|n| star_shadow_with(&exhaustion(d, n)?, hstar, &fixed))
        .collect::<Result<Vec<_>>>()?;
    let in_cells = |r: &StarResult| r.mask.iter().filter(|c| c.2 == CellState::In).map(|c| (c.0, c.1)).collect::<Vec<_>>();
    let lost = |a: &StarResult, b: &StarResult| in_cells(a).into_iter().filter(|&(i, j)| b.mask.state(i, j) != CellState::In).count();

    let mut cases = Vec::new();
    for n in 0..n_max as usize {
        let k = lost(&stages[n], &stages[n + 1]);
        cases.push(Case::new(
            format!("monotone {n} -> {}", n + 1),
            json!({ "n": n }),
            json!(0),
            json!(k),
            k as f64,
            0.0,
            "IN cells lost",
        ));
    }
    if n_max >= 1 {
        let gained = lost(&stages[1], &stages[0]);
        cases.push(Case::new(
            "strict growth 0 -> 1",
            json!({}),
            json!(">0"),
            json!(gained),
            if gained > 0 { 0.0 } else { 1.0 },
            0.0,
            "IN cells gained",
        ));
        let back = lost(&stages[1], &stages[0]);
        cases.push(
            Case::new("monotone 1 -> 0 (reversed)", json!({}), json!(0), json!(back), back as f64, 0.0, "IN cells lost").control(),
        );
    }
    let total = limit.mask.count(CellState::In);
    let missing = lost(&limit, &stages[n_max as usize]);
    let ratio = if total == 0 { 0.0 } else { 1.0 - missing as f64 / total as f64 };
    let threshold = 1.0 - 0.5f64.powi(n_max as i32) - 8.0 / grid.cells as f64;
    cases.push(Case::new(
        "coverage",
        json!({ "n_max": n_max, "limit_in_cells": total }),
        json!(threshold),
        json!(ratio),
        (threshold - ratio).max(0.0),
        0.0,
        "coverage shortfall",
    ));
    Ok(Report::new("union", None, cases))
}

/// Criterion-style union-lemma pairs: `polydisc(1,1)` and `ball(1)` against
/// `polydisc(1,1)`.
pub fn union_suite(n_max: u32, grid: &GridSpec) -> Result<Report> {
    let p = make_polydisc(1.0, 1.0)?;
    let hstar = h_star_shadow(&p, &GridSpec { window: None, ..*grid })?;
    let mut a = verify_union_lemma_with(&p, &hstar, n_max, grid)?;
    let mut b = verify_union_lemma_with(&make_ball(1.0)?, &hstar, n_max, grid)?;
    for c in &mut a.cases {
        c.name = format!("polydisc(1,1): {}", c.name);
    }
    for c in &mut b.cases {
        c.name = format!("ball(1): {}", c.name);
    }
    Ok(Report::merge("union", None, [a, b]))
}

/// Seeded Reinhardt test domain: polydisc, ball or ellipsoid.
pub fn random_domain(rng: &mut ChaCha8Rng) -> Result<(Domain2, Value)> {
    match rng.gen_range(0..3) {
        0 => {
            let (r1, r2) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
            Ok((make_polydisc(r1, r2)?, json!({ "type": "polydisc", "r": [r1, r2] })))
        }
        1 => {
            let r = rng.gen_range(0.5..2.0);
            Ok((make_ball(r)?, json!({ "type": "ball", "r": r })))
        }
        _ => {
            let (p1, p2) = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
            Ok((make_ellipsoid(p1, p2)?, json!({ "type": "ellipsoid", "p": [p1, p2] })))
        }
    }
}

/// Random point with moduli up to `scale` and random phases.
fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> Point2 {
    Point2::real(rng.gen_range(0.0..scale), rng.gen_range(0.0..scale))
        .rotate(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
}

/// Certificates returned by [`separates`] re-checked with `density` samples
/// per segment on seeded random cases.
pub fn verify_certificates(trials: usize, seed: u64, density: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let res = GridResolution::default();
    let mut cases = Vec::with_capacity(trials);
    for t in 0..trials {
        let (d, dj) = random_domain(&mut rng)?;
        let z = random_point(&mut rng, 1.5 * d.bound_radius().as_f64());
        let range = crate::separation::auto_range(&d, &z)?;
        let grid = res.with_range(range)?;
        let verdict = separates(&d, &z, &grid)?;
        let (kind, ok) = match &verdict {
            SeparationVerdict::Separated { cycle } => ("Separated", verify_cycle(&d, &z, cycle, density)),
            SeparationVerdict::NotSeparated { path } => ("NotSeparated", verify_path(&d, &z, path, range.0, range.1, density)),
            SeparationVerdict::Undetermined(_) => ("Undetermined", true),
        };
        cases.push(Case::new(
            format!("certificate #{t}"),
            json!({ "domain": dj, "z": [complex_json(z.z1), complex_json(z.z2)] }),
            json!(kind),
            json!(ok),
            if ok { 0.0 } else { 1.0 },
            0.0,
            "certificate failure",
        ));
    }
    Ok(Report::new("certificates", Some(seed), cases))
}

/// Which symmetry an invariance case exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `separates(λG, λz) = separates(G, z)`.
    Scaling,
    /// `separates(swap G, swap z) = separates(G, z)` on a symmetric range.
    Swap,
    /// `separates(G, e^{iθ} z) = separates(G, z)`.
    Phase,
}

impl Symmetry {
    fn name(self) -> &'static str {
        match self {
            Symmetry::Scaling => "scaling",
            Symmetry::Swap => "swap",
            Symmetry::Phase => "phase",
        }
    }
}

/// Seeded invariance cases for one symmetry; a case fails when the two
/// verdict kinds differ.
pub fn verify_invariance(symmetry: Symmetry, trials: usize, seed: u64, resolution: &GridResolution) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(trials);
    for t in 0..trials {
        let (d, dj) = random_domain(&mut rng)?;
        let z = random_point(&mut rng, 1.2 * d.bound_radius().as_f64());
        let (s_min, s_max) = crate::separation::auto_range(&d, &z)?;
        let reach = s_min.abs().max(s_max.abs());
        let grid: LogPolarGrid = resolution.with_range((-reach, reach))?;
        let base = separates(&d, &z, &grid)?.kind();
        let (other, detail) = match symmetry {
            Symmetry::Scaling => {
                let (l1, l2) = (rng.gen_range(0.25..4.0), rng.gen_range(0.25..4.0));
                (separates(&d.scaled(l1, l2)?, &z.scale(l1, l2), &grid)?.kind(), json!([l1, l2]))
            }
            Symmetry::Swap => (separates(&d.swapped()?, &z.swap(), &grid)?.kind(), json!(null)),
            Symmetry::Phase => {
                let (t1, t2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
                (separates(&d, &z.rotate(t1, t2), &grid)?.kind(), json!([t1, t2]))
            }
        };
        cases.push(Case::new(
            format!("{} #{t}", symmetry.name()),
            json!({ "domain": dj, "z": [complex_json(z.z1), complex_json(z.z2)], "transform": detail }),
            json!(base.to_string()),
            json!(other.to_string()),
            if base == other { 0.0 } else { 1.0 },
            0.0,
            "verdict mismatch",
        ));
    }
    Ok(Report::new(symmetry.name(), Some(seed), cases))
}
