//! Star products of Reinhardt domains on shadow grids.
//!
//! `h_(1,1) * G` is the set of `z` for which `I_z⁻¹(G)` separates 0 and ∞,
//! and `D * G` is the connected component of the origin in
//! `{z : z D* ⊂ h_(1,1) * G}`. For complete Reinhardt `D` and `G` both sets
//! are complete Reinhardt, so they are computed on a rectangular grid over
//! the shadow window `[0, X] × [0, Y]`.
//!
//! Verdicts are evaluated at grid nodes. Both sets are downward closed in
//! the moduli, so a cell is IN when its upper-right node is in the set and
//! OUT when its lower-left node is not.

use crate::domains::{Domain2, Shadow};
use crate::dual::{shadow_dual_boundary, shadow_support, DEFAULT_BOUNDARY_SAMPLES};
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::separation::{separates_auto, GridResolution, SeparationVerdict, VerdictKind};
use std::collections::{HashMap, VecDeque};
use std::fmt;

/// Separation grid used for each node of an `h * G` sweep.
pub const HSTAR_SEPARATION: GridResolution = GridResolution {
    ns: 256,
    ntheta: 256,
    max_refinements: 1,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    In,
    Out,
    Mixed,
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellState::In => "IN",
            CellState::Out => "OUT",
            CellState::Mixed => "MIXED",
        })
    }
}

/// Grid parameters of a shadow sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Cells per axis.
    pub cells: usize,
    /// `[0, X] × [0, Y]`; derived from the inputs when `None`.
    pub window: Option<(f64, f64)>,
    pub separation: GridResolution,
    /// Samples of `∂D*` in the quadrant.
    pub dual_samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cells: 256,
            window: None,
            separation: HSTAR_SEPARATION,
            dual_samples: DEFAULT_BOUNDARY_SAMPLES,
        }
    }
}

impl GridSpec {
    pub fn with_cells(cells: usize) -> Self {
        Self {
            cells,
            ..Self::default()
        }
    }
}

/// Per-cell IN/OUT/MIXED states over `[0, X] × [0, Y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMask {
    x_max: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
    states: Vec<CellState>,
}

impl GridMask {
    pub fn new(x_max: f64, y_max: f64, nx: usize, ny: usize, states: Vec<CellState>) -> Result<Self> {
        if !(x_max > 0.0 && y_max > 0.0 && x_max.is_finite() && y_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad window {x_max} x {y_max}")));
        }
        if nx == 0 || ny == 0 || states.len() != nx * ny {
            return Err(Error::InvalidParameter("mask size does not match the grid".into()));
        }
        Ok(Self {
            x_max,
            y_max,
            nx,
            ny,
            states,
        })
    }

    pub fn filled(x_max: f64, y_max: f64, nx: usize, ny: usize, state: CellState) -> Result<Self> {
        Self::new(x_max, y_max, nx, ny, vec![state; nx * ny])
    }

    pub fn window(&self) -> (f64, f64) {
        (self.x_max, self.y_max)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.x_max / self.nx as f64, self.y_max / self.ny as f64)
    }

    pub fn state(&self, i: usize, j: usize) -> CellState {
        self.states[j * self.nx + i]
    }

    pub fn set(&mut self, i: usize, j: usize, s: CellState) {
        self.states[j * self.nx + i] = s;
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let (w, h) = self.cell_size();
        ((i as f64 + 0.5) * w, (j as f64 + 0.5) * h)
    }

    /// Cell containing `(x, y)`, half-open on the upper sides.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(x >= 0.0 && y >= 0.0 && x < self.x_max && y < self.y_max) {
            return None;
        }
        let (w, h) = self.cell_size();
        let i = ((x / w) as usize).min(self.nx - 1);
        let j = ((y / h) as usize).min(self.ny - 1);
        Some((i, j))
    }

    pub fn count(&self, s: CellState) -> usize {
        self.states.iter().filter(|&&c| c == s).count()
    }

    /// Iterate `(i, j, state)` row by row from the bottom.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, CellState)> + '_ {
        self.states
            .iter()
            .enumerate()
            .map(move |(n, &s)| (n % self.nx, n / self.nx, s))
    }
}

/// Keep only the IN cells 4-connected to the origin cell.
pub fn cc0(mask: &GridMask) -> Result<GridMask> {
    if mask.state(0, 0) != CellState::In {
        return Err(Error::OriginExcluded);
    }
    let (nx, ny) = mask.dims();
    let mut keep = vec![false; nx * ny];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    keep[0] = true;
    while let Some((i, j)) = queue.pop_front() {
        let mut visit = |a: usize, b: usize| {
            let n = b * nx + a;
            if !keep[n] && mask.state(a, b) == CellState::In {
                keep[n] = true;
                queue.push_back((a, b));
            }
        };
        if i + 1 < nx {
            visit(i + 1, j);
        }
        if i > 0 {
            visit(i - 1, j);
        }
        if j + 1 < ny {
            visit(i, j + 1);
        }
        if j > 0 {
            visit(i, j - 1);
        }
    }
    let mut out = mask.clone();
    for (n, s) in out.states.iter_mut().enumerate() {
        if *s == CellState::In && !keep[n] {
            *s = CellState::Out;
        }
    }
    Ok(out)
}

/// Three-valued node verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeVerdict {
    In,
    Out,
    Unknown,
}

impl From<VerdictKind> for NodeVerdict {
    fn from(v: VerdictKind) -> Self {
        match v {
            VerdictKind::Separated => NodeVerdict::In,
            VerdictKind::NotSeparated => NodeVerdict::Out,
            VerdictKind::Undetermined => NodeVerdict::Unknown,
        }
    }
}

/// Why a cell ended up in its final state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    /// Verdict at the upper-right node (decides IN).
    pub upper: NodeVerdict,
    /// Verdict at the lower-left node (decides OUT).
    pub lower: NodeVerdict,
    /// IN at the node level but not connected to the origin.
    pub cut_by_cc0: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub provenance: Vec<Provenance>,
    /// IN cells above the downward-closed staircase.
    pub monotonicity_violations: usize,
    pub warnings: Vec<String>,
    /// Number of node verdicts that were computed.
    pub evaluated_nodes: usize,
}

/// A computed star-product shadow.
#[derive(Debug, Clone)]
pub struct StarResult {
    pub shadow: Shadow,
    pub mask: GridMask,
    pub diagnostics: Diagnostics,
    /// IN heights (in cells) of the downward-closed staircase, per column.
    heights: Vec<usize>,
    /// The window contains the whole set, so points beyond it are outside.
    window_complete: bool,
}

impl StarResult {
    fn from_nodes(window: (f64, f64), n: usize, nodes: &[NodeVerdict], window_complete: bool) -> Result<Self> {
        let side = n + 1;
        let node = |i: usize, j: usize| nodes[j * side + i];
        let mut states = Vec::with_capacity(n * n);
        let mut provenance = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let upper = node(i + 1, j + 1);
                let lower = node(i, j);
                states.push(match (upper, lower) {
                    (NodeVerdict::In, _) => CellState::In,
                    (_, NodeVerdict::Out) => CellState::Out,
                    _ => CellState::Mixed,
                });
                provenance.push(Provenance {
                    upper,
                    lower,
                    cut_by_cc0: false,
                });
            }
        }
        let raw = GridMask::new(window.0, window.1, n, n, states)?;
        let mask = cc0(&raw)?;
        for (p, (a, b)) in provenance.iter_mut().zip(raw.states.iter().zip(&mask.states)) {
            p.cut_by_cc0 = a != b;
        }

        // Largest downward-closed union of IN cells.
        let mut heights = Vec::with_capacity(n);
        let mut running = n;
        let mut excess_max = 0;
        let mut violations = 0;
        for i in 0..n {
            let run = (0..n).take_while(|&j| mask.state(i, j) == CellState::In).count();
            running = running.min(run);
            heights.push(running);
            let top = (0..n).rev().find(|&j| mask.state(i, j) == CellState::In).map_or(0, |j| j + 1);
            let col_in = (0..n).filter(|&j| mask.state(i, j) == CellState::In).count();
            violations += col_in - running;
            excess_max = excess_max.max(top.saturating_sub(running));
        }
        let mut warnings = Vec::new();
        if excess_max > 1 {
            warnings.push(format!(
                "IN region is not downward closed: {violations} cells above the staircase, up to {excess_max} cells"
            ));
        }
        let shadow = staircase_shadow(window, n, &heights)?;
        Ok(Self {
            shadow,
            mask,
            diagnostics: Diagnostics {
                provenance,
                monotonicity_violations: violations,
                warnings,
                evaluated_nodes: 0,
            },
            heights,
            window_complete,
        })
    }

    pub fn window(&self) -> (f64, f64) {
        self.mask.window()
    }

    pub fn window_complete(&self) -> bool {
        self.window_complete
    }

    /// Heights of the downward-closed IN staircase, in cells.
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// `(x, y)` lies in the certified, downward-closed IN region.
    pub fn certified_in(&self, x: f64, y: f64) -> bool {
        match self.mask.cell_of(x, y) {
            Some((i, j)) => j < self.heights[i],
            None => false,
        }
    }

    /// `(x, y)` lies in a certified OUT cell, or beyond a complete window.
    pub fn certified_out(&self, x: f64, y: f64) -> bool {
        match self.mask.cell_of(x, y) {
            Some((i, j)) => self.mask.state(i, j) == CellState::Out,
            None => self.window_complete,
        }
    }

    pub fn lookup(&self, x: f64, y: f64) -> CellState {
        if self.certified_in(x, y) {
            CellState::In
        } else if self.certified_out(x, y) {
            CellState::Out
        } else {
            CellState::Mixed
        }
    }
}

fn staircase_shadow(window: (f64, f64), n: usize, heights: &[usize]) -> Result<Shadow> {
    let (w, h) = (window.0 / n as f64, window.1 / n as f64);
    let mut points = Vec::new();
    let mut end = n;
    for (i, &hi) in heights.iter().enumerate() {
        if hi == 0 {
            end = i;
            break;
        }
        let y = hi as f64 * h;
        points.push((i as f64 * w, y));
        points.push(((i + 1) as f64 * w, y));
    }
    if points.is_empty() {
        return Err(Error::OriginExcluded);
    }
    let xmax = end as f64 * w;
    Shadow::sampled(
        points,
        Some(crate::domains::Extent::Finite(xmax)),
        Some(crate::domains::Extent::Finite(heights[0] as f64 * h)),
    )
}

/// Node verdicts along one column, assuming the verdict is monotone in `j`:
/// Separated up to some height, NotSeparated from a larger height on.
fn sweep_column(
    n: usize,
    upper_bound: usize,
    mut verdict_at: impl FnMut(usize) -> Result<VerdictKind>,
) -> Result<(Vec<NodeVerdict>, usize)> {
    let mut cache: HashMap<usize, VerdictKind> = HashMap::new();
    let mut eval = |j: usize, cache: &mut HashMap<usize, VerdictKind>| -> Result<VerdictKind> {
        if let Some(&v) = cache.get(&j) {
            return Ok(v);
        }
        let v = verdict_at(j)?;
        cache.insert(j, v);
        Ok(v)
    };
    // First j (≤ upper_bound) that is not Separated; upper_bound itself is
    // assumed not Separated.
    let (mut lo, mut hi) = (0usize, upper_bound);
    if eval(0, &mut cache)? != VerdictKind::Separated {
        hi = 0;
    }
    while hi > lo + 1 {
        let mid = (lo + hi) / 2;
        if eval(mid, &mut cache)? == VerdictKind::Separated {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let first_not_sep = hi;
    // First j ≥ first_not_sep that is NotSeparated (n + 1 if none).
    let mut out = vec![NodeVerdict::Unknown; n + 1];
    let first_out = if first_not_sep > n {
        n + 1
    } else if eval(first_not_sep, &mut cache)? == VerdictKind::NotSeparated {
        first_not_sep
    } else if first_not_sep == n || eval(n, &mut cache)? != VerdictKind::NotSeparated {
        n + 1
    } else {
        let (mut lo, mut hi) = (first_not_sep, n);
        while hi > lo + 1 {
            let mid = (lo + hi) / 2;
            if eval(mid, &mut cache)? == VerdictKind::NotSeparated {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    for (j, v) in out.iter_mut().enumerate() {
        *v = if j < first_not_sep {
            NodeVerdict::In
        } else if j >= first_out {
            NodeVerdict::Out
        } else {
            NodeVerdict::Unknown
        };
    }
    Ok((out, cache.len()))
}

/// Shadow of `h_(1,1) * G` for a complete Reinhardt `G`.
pub fn h_star_shadow(g: &Domain2, spec: &GridSpec) -> Result<StarResult> {
    let shadow = g.require_shadow("h_star_shadow")?;
    let extents = shadow.extents();
    let window = match (spec.window, extents) {
        (Some(w), _) => w,
        (None, Some(e)) => e,
        (None, None) => return Err(Error::RangeRequired),
    };
    // (x, 0) lies in h * G iff x < xmax(G), and the set is downward closed.
    let window_complete = extents.is_some_and(|(x, y)| window.0 >= x && window.1 >= y);
    let n = spec.cells;
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 cells per axis".into()));
    }
    let side = n + 1;
    let mut nodes = vec![NodeVerdict::Unknown; side * side];
    let mut evaluated = 0;
    let mut bound = n + 1;
    for i in 0..side {
        let x = window.0 * i as f64 / n as f64;
        let (col, count) = sweep_column(n, bound, |j| {
            let y = window.1 * j as f64 / n as f64;
            Ok(separates_auto(g, &Point2::real(x, y), &spec.separation)?.kind())
        })?;
        evaluated += count;
        bound = col.iter().position(|&v| v != NodeVerdict::In).unwrap_or(n + 1);
        for (j, v) in col.into_iter().enumerate() {
            nodes[j * side + i] = v;
        }
    }
    let mut result = StarResult::from_nodes(window, n, &nodes, window_complete)?;
    result.diagnostics.evaluated_nodes = evaluated;
    Ok(result)
}

/// Dual boundary samples of `D` prepared for star-membership queries.
#[derive(Debug, Clone)]
pub struct DualProbe {
    points: Vec<(f64, f64)>,
    corners: Vec<(f64, f64)>,
}

impl DualProbe {
    pub fn new(d: &Domain2, samples: usize) -> Result<Self> {
        let s = d.require_shadow("star membership")?;
        let points = shadow_dual_boundary(s, samples)?;
        // The boundary of D* is a monotone arc, so between consecutive samples
        // it stays below the componentwise maximum of the two.
        let corners = points
            .windows(2)
            .map(|w| (w[0].0.max(w[1].0), w[0].1.max(w[1].1)))
            .collect();
        Ok(Self { points, corners })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Is `z D* ⊂ h * G` for `z` with moduli `(x, y)`?
///
/// IN when every arc of `∂D*` between consecutive samples, scaled by `z`,
/// lies in the certified region; OUT when a scaled sample hits a certified
/// OUT cell; MIXED otherwise.
pub fn star_membership(probe: &DualProbe, hstar: &StarResult, z_moduli: (f64, f64)) -> Result<CellState> {
    let (x, y) = z_moduli;
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad moduli ({x}, {y})")));
    }
    if probe.corners.iter().all(|&(a, b)| hstar.certified_in(x * a, y * b)) {
        return Ok(CellState::In);
    }
    if probe.points.iter().any(|&(a, b)| hstar.certified_out(x * a, y * b)) {
        return Ok(CellState::Out);
    }
    Ok(CellState::Mixed)
}

/// Shadow of `D * G` given a precomputed `h * G`.
pub fn star_shadow_with(d: &Domain2, hstar: &StarResult, spec: &GridSpec) -> Result<StarResult> {
    let s = d.require_shadow("star_shadow")?;
    if !s.is_bounded() {
        return Err(Error::UnboundedDomain("D must be bounded".into()));
    }
    let probe = DualProbe::new(d, spec.dual_samples)?;
    let (hx, hy) = hstar.window();
    let natural = (shadow_support(s, 1.0, 0.0)? * hx, shadow_support(s, 0.0, 1.0)? * hy);
    let window = spec.window.unwrap_or(natural);
    let window_complete = hstar.window_complete() && window.0 >= natural.0 && window.1 >= natural.1;
    let n = spec.cells;
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 cells per axis".into()));
    }
    let side = n + 1;
    let mut nodes = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            let z = (window.0 * i as f64 / n as f64, window.1 * j as f64 / n as f64);
            nodes.push(match star_membership(&probe, hstar, z)? {
                CellState::In => NodeVerdict::In,
                CellState::Out => NodeVerdict::Out,
                CellState::Mixed => NodeVerdict::Unknown,
            });
        }
    }
    let mut result = StarResult::from_nodes(window, n, &nodes, window_complete)?;
    result.diagnostics.evaluated_nodes = side * side;
    Ok(result)
}

/// Shadow of `D * G` for complete Reinhardt `D` (bounded) and `G`.
pub fn star_shadow(d: &Domain2, g: &Domain2, spec: &GridSpec) -> Result<StarResult> {
    let hstar = h_star_shadow(
        g,
        &GridSpec {
            window: None,
            ..*spec
        },
    )?;
    star_shadow_with(d, &hstar, spec)
}

/// Approximate verdict at a point of a user-given path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVerdict {
    In,
    Out,
    Mixed,
    /// An earlier point of the path was not IN, so connectivity to 0 along
    /// the path is lost.
    Disconnected,
}

/// Pointwise `z D* ⊂ h * G` along a path starting at 0, for a general `G`.
///
/// `D*` is sampled on `radial` shells of `dual_samples` boundary points with
/// `phases × phases` coordinate phases; each product `z ξ` is tested with
/// [`separates_auto`]. The connected component of 0 is approximated by
/// connectivity along the path. The result is approximate.
pub fn star_membership_along_path(
    d: &Domain2,
    g: &Domain2,
    path: &[Point2],
    dual_samples: usize,
    radial: usize,
    phases: usize,
    resolution: &GridResolution,
) -> Result<Vec<PathVerdict>> {
    let probe = DualProbe::new(d, dual_samples)?;
    let radial = radial.max(1);
    let phases = phases.max(1);
    let mut xis = Vec::new();
    for &(a, b) in probe.points() {
        for r in 1..=radial {
            let t = r as f64 / radial as f64;
            for p in 0..phases {
                for q in 0..phases {
                    let th1 = std::f64::consts::TAU * p as f64 / phases as f64;
                    let th2 = std::f64::consts::TAU * q as f64 / phases as f64;
                    xis.push(Point2::real(t * a, t * b).rotate(th1, th2));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(path.len());
    let mut connected = true;
    for z in path {
        if !connected {
            out.push(PathVerdict::Disconnected);
            continue;
        }
        let mut any_unknown = false;
        let mut any_out = false;
        for xi in &xis {
            match separates_auto(g, &z.mul(xi), resolution)? {
                SeparationVerdict::Separated { .. } => {}
                SeparationVerdict::NotSeparated { .. } => {
                    any_out = true;
                    break;
                }
                SeparationVerdict::Undetermined(_) => any_unknown = true,
            }
        }
        let v = if any_out {
            PathVerdict::Out
        } else if any_unknown {
            PathVerdict::Mixed
        } else {
            PathVerdict::In
        };
        connected = v == PathVerdict::In;
        out.push(v);
    }
    Ok(out)
}
