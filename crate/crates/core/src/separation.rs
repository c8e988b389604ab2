//! Does `I_z⁻¹(D)` separate 0 and ∞?
//!
//! `I_z(ζ) = (z1 (1 + ζ), z2 (1 + 1/ζ))` maps the punctured plane into C².
//! The preimage of `D` is studied on a log-polar grid `ζ = e^(s + iθ)`.
//! Cells are classified conservatively from five samples (centre and
//! corners): IN when all map into `D`, OUT when all map outside, MIXED
//! otherwise.
//!
//! * A positive answer is a closed polyline through IN cells with winding
//!   number one about 0. It is found by a breadth-first search over IN cells
//!   (4-connectivity, periodic in θ) that tracks how many times each tree
//!   path crossed the seam θ = 0. A non-tree edge whose endpoints disagree
//!   closes a fundamental cycle of the cell graph; such cycles are simple, so
//!   the disagreement is exactly ±1.
//! * A negative answer is a polyline through OUT cells (8-connectivity) from
//!   the inner ring to the outer ring, together with a check that both caps
//!   `|ζ| ≤ e^s_min` and `|ζ| ≥ e^s_max` map outside `D`.
//!
//! Both certificates are re-evaluated densely before being returned. When
//! neither is found the grid is refined.

use crate::domains::{Domain2, Extent};
use crate::error::{Error, Result};
use crate::point::Point2;
use num_complex::Complex64;
use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

/// Default cells per direction.
pub const DEFAULT_CELLS: usize = 256;
/// Default number of grid doublings before giving up.
pub const DEFAULT_MAX_REFINEMENTS: u32 = 4;
/// Samples per certificate segment used when a certificate is built.
pub const CERTIFICATE_SUBDIVISIONS: usize = 10;

const RANGE_MARGIN: f64 = 0.1;
/// Relative size of a cap image when the controlling coordinate vanishes.
const CAP_RELATIVE: f64 = 1e-4;
const REPAIR_ATTEMPTS: usize = 16;

/// `I_z(ζ) = (z1 (1 + ζ), z2 (1 + 1/ζ))`.
pub fn i_map(z: &Point2, zeta: Complex64) -> Result<Point2> {
    if zeta == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("I_z is undefined at 0".into()));
    }
    Ok(eval_i_map(z, zeta))
}

#[inline]
fn eval_i_map(z: &Point2, zeta: Complex64) -> Point2 {
    let one = Complex64::new(1.0, 0.0);
    Point2::new(z.z1 * (one + zeta), z.z2 * (one + zeta.inv()))
}

/// Log-polar grid on the annulus `e^s_min ≤ |ζ| ≤ e^s_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPolarGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub ns: usize,
    pub ntheta: usize,
    pub max_refinements: u32,
}

impl LogPolarGrid {
    pub fn new(s_min: f64, s_max: f64, ns: usize, ntheta: usize, max_refinements: u32) -> Result<Self> {
        if !(s_min.is_finite() && s_max.is_finite() && s_min < 0.0 && 0.0 < s_max) {
            return Err(Error::InvalidParameter(format!(
                "log-radius range must satisfy s_min < 0 < s_max, got [{s_min}, {s_max}]"
            )));
        }
        if ns < 16 || ntheta < 16 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 16 cells per direction, got {ns} x {ntheta}"
            )));
        }
        Ok(Self {
            s_min,
            s_max,
            ns,
            ntheta,
            max_refinements,
        })
    }

    pub fn refined(&self) -> Self {
        Self {
            ns: self.ns * 2,
            ntheta: self.ntheta * 2,
            ..*self
        }
    }

    fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / self.ns as f64
    }

    fn dtheta(&self) -> f64 {
        TAU / self.ntheta as f64
    }

    fn point(&self, s: f64, theta: f64) -> Complex64 {
        Complex64::from_polar(s.exp(), theta)
    }

    fn center(&self, i: usize, k: usize) -> Complex64 {
        self.point(
            self.s_min + (i as f64 + 0.5) * self.ds(),
            (k as f64 + 0.5) * self.dtheta(),
        )
    }
}

/// Cell counts and resolution, without the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridResolution {
    pub ns: usize,
    pub ntheta: usize,
    pub max_refinements: u32,
}

impl Default for GridResolution {
    fn default() -> Self {
        Self {
            ns: DEFAULT_CELLS,
            ntheta: DEFAULT_CELLS,
            max_refinements: DEFAULT_MAX_REFINEMENTS,
        }
    }
}

impl GridResolution {
    pub fn with_range(&self, (s_min, s_max): (f64, f64)) -> Result<LogPolarGrid> {
        LogPolarGrid::new(s_min, s_max, self.ns, self.ntheta, self.max_refinements)
    }
}

/// A log-radius range whose extreme rings (and everything beyond them) map
/// outside the bounded domain `D`, except where a coordinate of `z` vanishes;
/// then the cap image is a disc of relative radius `1e-4` about the limit
/// point `(z1, 0)` or `(0, z2)`.
pub fn auto_range(d: &Domain2, z: &Point2) -> Result<(f64, f64)> {
    let r = match d.bound_radius() {
        Extent::Finite(r) => r,
        Extent::Unbounded => return Err(Error::RangeRequired),
    };
    if z.is_origin() {
        return Ok((-1.0, 1.0));
    }
    let (r1, r2) = z.moduli();
    let s_max = if r1 > 0.0 {
        (2.0 * r / r1).ln_1p() + RANGE_MARGIN
    } else {
        (r2 / (CAP_RELATIVE * r)).ln().max(1.0)
    };
    let s_min = if r2 > 0.0 {
        -((2.0 * r / r2).ln_1p() + RANGE_MARGIN)
    } else {
        -(r1 / (CAP_RELATIVE * r)).ln().max(1.0)
    };
    Ok((s_min, s_max))
}

/// Statistics of the last grid examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridStats {
    pub ns: usize,
    pub ntheta: usize,
    pub refinements: u32,
    pub in_cells: usize,
    pub out_cells: usize,
    pub mixed_cells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparationVerdict {
    /// Closed polyline (first vertex not repeated) inside `I_z⁻¹(D)` with
    /// winding number one about 0.
    Separated { cycle: Vec<Complex64> },
    /// Polyline in the complement of `I_z⁻¹(D)` from `|ζ| = e^s_min` to
    /// `|ζ| = e^s_max`.
    NotSeparated { path: Vec<Complex64> },
    Undetermined(GridStats),
}

impl SeparationVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            SeparationVerdict::Separated { .. } => VerdictKind::Separated,
            SeparationVerdict::NotSeparated { .. } => VerdictKind::NotSeparated,
            SeparationVerdict::Undetermined(_) => VerdictKind::Undetermined,
        }
    }

    pub fn is_separated(&self) -> bool {
        matches!(self, SeparationVerdict::Separated { .. })
    }

    pub fn is_not_separated(&self) -> bool {
        matches!(self, SeparationVerdict::NotSeparated { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Separated,
    NotSeparated,
    Undetermined,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Separated => "Separated",
            VerdictKind::NotSeparated => "NotSeparated",
            VerdictKind::Undetermined => "Undetermined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    In,
    Out,
    Mixed,
}

/// Membership of `I_z(ζ)` in `D`, specialised for Reinhardt domains.
struct Preimage<'a> {
    d: &'a Domain2,
    z: Point2,
    r1: f64,
    r2: f64,
}

impl<'a> Preimage<'a> {
    fn new(d: &'a Domain2, z: &Point2) -> Self {
        let (r1, r2) = z.moduli();
        Self { d, z: *z, r1, r2 }
    }

    /// `ζ = rho (cos θ + i sin θ)`.
    #[inline]
    fn contains_polar(&self, rho: f64, cos: f64, sin: f64) -> bool {
        match self.d {
            Domain2::Reinhardt(s) => {
                let (a, b) = (1.0 + rho * cos, rho * sin);
                let inv = 1.0 / rho;
                let (c, e) = (1.0 + inv * cos, -inv * sin);
                s.contains(self.r1 * (a * a + b * b).sqrt(), self.r2 * (c * c + e * e).sqrt())
            }
            Domain2::General(_) => self.contains(Complex64::new(rho * cos, rho * sin)),
        }
    }

    #[inline]
    fn contains(&self, zeta: Complex64) -> bool {
        self.d.contains(&eval_i_map(&self.z, zeta))
    }

    /// The cap `0 < |ζ| ≤ rho` (inner) or `|ζ| ≥ rho` (outer) maps outside `D`.
    fn cap_outside(&self, rho: f64, inner: bool) -> bool {
        let (m1, m2) = if inner {
            ((self.r1 * (1.0 - rho)).max(0.0), self.r2 * (1.0 / rho - 1.0))
        } else {
            (self.r1 * (rho - 1.0), (self.r2 * (1.0 - 1.0 / rho)).max(0.0))
        };
        match self.d {
            // Image moduli dominate (m1, m2) and the shadow is downward closed.
            Domain2::Reinhardt(s) => !s.contains(m1, m2),
            Domain2::General(_) => match self.d.bound_radius() {
                Extent::Finite(r) => m1 > r || m2 > r,
                // Unbounded general domains: the range is the caller's certificate.
                Extent::Unbounded => true,
            },
        }
    }
}

struct Classification {
    cells: Vec<Cell>,
    ns: usize,
    nt: usize,
}

impl Classification {
    fn idx(&self, i: usize, k: usize) -> usize {
        i * self.nt + k
    }

    fn stats(&self, grid: &LogPolarGrid, refinements: u32) -> GridStats {
        let count = |c: Cell| self.cells.iter().filter(|&&x| x == c).count();
        GridStats {
            ns: grid.ns,
            ntheta: grid.ntheta,
            refinements,
            in_cells: count(Cell::In),
            out_cells: count(Cell::Out),
            mixed_cells: count(Cell::Mixed),
        }
    }
}

fn classify(pre: &Preimage<'_>, grid: &LogPolarGrid) -> Classification {
    let (ns, nt) = (grid.ns, grid.ntheta);
    let ds = grid.ds();
    let dt = grid.dtheta();
    let trig: Vec<(f64, f64)> = (0..nt).map(|k| (k as f64 * dt).sin_cos()).collect();
    let trig_c: Vec<(f64, f64)> = (0..nt).map(|k| ((k as f64 + 0.5) * dt).sin_cos()).collect();
    let rho: Vec<f64> = (0..=ns).map(|i| (grid.s_min + i as f64 * ds).exp()).collect();

    let mut nodes = vec![false; (ns + 1) * nt];
    for i in 0..=ns {
        for k in 0..nt {
            let (sn, cs) = trig[k];
            nodes[i * nt + k] = pre.contains_polar(rho[i], cs, sn);
        }
    }
    let mut cells = vec![Cell::Mixed; ns * nt];
    for i in 0..ns {
        let rc = (grid.s_min + (i as f64 + 0.5) * ds).exp();
        for k in 0..nt {
            let k1 = (k + 1) % nt;
            let corners = [
                nodes[i * nt + k],
                nodes[i * nt + k1],
                nodes[(i + 1) * nt + k],
                nodes[(i + 1) * nt + k1],
            ];
            let all_in = corners.iter().all(|&c| c);
            let all_out = corners.iter().all(|&c| !c);
            if !(all_in || all_out) {
                continue;
            }
            let (sn, cs) = trig_c[k];
            let center = pre.contains_polar(rc, cs, sn);
            cells[i * nt + k] = match (center, all_in, all_out) {
                (true, true, _) => Cell::In,
                (false, _, true) => Cell::Out,
                _ => Cell::Mixed,
            };
        }
    }
    Classification { cells, ns, nt }
}

/// Winding-one cycle of IN cells, as a list of `(i, k)` cells.
fn find_in_cycle(cl: &Classification) -> Option<Vec<(usize, usize)>> {
    let (ns, nt) = (cl.ns, cl.nt);
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; ns * nt];
    let mut lift = vec![0i32; ns * nt];
    let mut depth = vec![0u32; ns * nt];
    let mut queue = VecDeque::new();
    for start in 0..ns * nt {
        if cl.cells[start] != Cell::In || parent[start] != UNSEEN {
            continue;
        }
        parent[start] = start as u32;
        queue.clear();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let (i, k) = (u / nt, u % nt);
            let mut nbrs: [(usize, i32); 4] = [(usize::MAX, 0); 4];
            nbrs[0] = if k + 1 == nt { (cl.idx(i, 0), 1) } else { (cl.idx(i, k + 1), 0) };
            nbrs[1] = if k == 0 { (cl.idx(i, nt - 1), -1) } else { (cl.idx(i, k - 1), 0) };
            if i + 1 < ns {
                nbrs[2] = (cl.idx(i + 1, k), 0);
            }
            if i > 0 {
                nbrs[3] = (cl.idx(i - 1, k), 0);
            }
            for &(v, delta) in &nbrs {
                if v == usize::MAX || cl.cells[v] != Cell::In {
                    continue;
                }
                if parent[v] == UNSEEN {
                    parent[v] = u as u32;
                    lift[v] = lift[u] + delta;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if lift[v] != lift[u] + delta {
                    let winding = lift[u] + delta - lift[v];
                    // Tree path from the common ancestor to u, the edge u -> v,
                    // then back up from v.
                    let (mut a, mut b) = (u, v);
                    let mut down_u = vec![u];
                    let mut up_v = vec![v];
                    while depth[a] > depth[b] {
                        a = parent[a] as usize;
                        down_u.push(a);
                    }
                    while depth[b] > depth[a] {
                        b = parent[b] as usize;
                        up_v.push(b);
                    }
                    while a != b {
                        a = parent[a] as usize;
                        b = parent[b] as usize;
                        down_u.push(a);
                        up_v.push(b);
                    }
                    up_v.pop();
                    down_u.reverse();
                    let mut cycle: Vec<usize> = down_u;
                    cycle.extend(up_v);
                    if winding < 0 {
                        cycle.reverse();
                    }
                    debug_assert_eq!(winding.abs(), 1, "fundamental cycles are simple");
                    return Some(cycle.into_iter().map(|c| (c / nt, c % nt)).collect());
                }
            }
        }
    }
    None
}

/// OUT-cell path (8-connectivity) from the inner ring to the outer ring.
fn find_out_path(cl: &Classification) -> Option<Vec<(usize, usize)>> {
    let (ns, nt) = (cl.ns, cl.nt);
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; ns * nt];
    let mut queue = VecDeque::new();
    for k in 0..nt {
        let c = cl.idx(0, k);
        if cl.cells[c] == Cell::Out {
            parent[c] = c as u32;
            queue.push_back(c);
        }
    }
    while let Some(u) = queue.pop_front() {
        let (i, k) = (u / nt, u % nt);
        if i == ns - 1 {
            let mut path = vec![u];
            let mut c = u;
            while parent[c] as usize != c {
                c = parent[c] as usize;
                path.push(c);
            }
            path.reverse();
            return Some(path.into_iter().map(|c| (c / nt, c % nt)).collect());
        }
        for di in -1i64..=1 {
            let ii = i as i64 + di;
            if ii < 0 || ii >= ns as i64 {
                continue;
            }
            for dk in -1i64..=1 {
                if di == 0 && dk == 0 {
                    continue;
                }
                let kk = (k as i64 + dk).rem_euclid(nt as i64) as usize;
                let v = cl.idx(ii as usize, kk);
                if cl.cells[v] == Cell::Out && parent[v] == UNSEEN {
                    parent[v] = u as u32;
                    queue.push_back(v);
                }
            }
        }
    }
    None
}

/// Sample `subdivisions` points per segment (including the start vertex) of
/// the polyline through `vertices`, closed when `closed` is set.
fn segment_samples(vertices: &[Complex64], closed: bool, subdivisions: usize) -> Vec<(usize, Complex64)> {
    let n = vertices.len();
    let segs = if closed { n } else { n.saturating_sub(1) };
    let mut out = Vec::with_capacity(segs * subdivisions + 1);
    for j in 0..segs {
        let a = vertices[j];
        let b = vertices[(j + 1) % n];
        for t in 0..subdivisions {
            let f = t as f64 / subdivisions as f64;
            out.push((j, a + (b - a) * f));
        }
    }
    if !closed && n > 0 {
        out.push((segs.saturating_sub(1), vertices[n - 1]));
    }
    out
}

/// Total increment of `arg ζ` along the closed polyline, divided by 2π.
pub fn winding_number(cycle: &[Complex64]) -> f64 {
    let n = cycle.len();
    let mut total = 0.0;
    for j in 0..n {
        total += (cycle[(j + 1) % n] / cycle[j]).arg();
    }
    total / TAU
}

fn first_failing_segment(
    pre: &Preimage<'_>,
    vertices: &[Complex64],
    closed: bool,
    subdivisions: usize,
    want_inside: bool,
) -> Option<usize> {
    segment_samples(vertices, closed, subdivisions)
        .into_iter()
        .find(|&(_, zeta)| zeta == Complex64::new(0.0, 0.0) || pre.contains(zeta) != want_inside)
        .map(|(j, _)| j)
}

/// Check a Separated certificate: `subdivisions` samples per segment map
/// into `D`, no segment passes through 0, and the winding number is one.
pub fn verify_cycle(d: &Domain2, z: &Point2, cycle: &[Complex64], subdivisions: usize) -> bool {
    if cycle.len() < 3 {
        return false;
    }
    let pre = Preimage::new(d, z);
    if first_failing_segment(&pre, cycle, true, subdivisions.max(1), true).is_some() {
        return false;
    }
    let n = cycle.len();
    let steps_ok = (0..n).all(|j| (cycle[(j + 1) % n] / cycle[j]).arg().abs() < 0.5 * PI);
    steps_ok && (winding_number(cycle) - 1.0).abs() < 1e-9
}

/// Check a NotSeparated certificate: all samples map outside `D` and the
/// endpoints lie on the two extreme rings.
pub fn verify_path(d: &Domain2, z: &Point2, path: &[Complex64], s_min: f64, s_max: f64, subdivisions: usize) -> bool {
    if path.len() < 2 {
        return false;
    }
    let pre = Preimage::new(d, z);
    let on_ring = |w: Complex64, s: f64| (w.norm().ln() - s).abs() <= 1e-9 * (1.0 + s.abs());
    on_ring(path[0], s_min)
        && on_ring(path[path.len() - 1], s_max)
        && first_failing_segment(&pre, path, false, subdivisions.max(1), false).is_none()
}

fn unit_circle(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

enum Attempt {
    Found(SeparationVerdict),
    Nothing,
}

fn attempt(pre: &Preimage<'_>, grid: &LogPolarGrid, cl: &mut Classification, caps_outside: bool) -> Result<Attempt> {
    for _ in 0..REPAIR_ATTEMPTS {
        let cycle = find_in_cycle(cl);
        let path = if caps_outside { find_out_path(cl) } else { None };
        if cycle.is_some() && path.is_some() {
            return Err(Error::Internal(
                "both a separating cycle and a crossing path were found".into(),
            ));
        }
        if let Some(cells) = cycle {
            let verts: Vec<Complex64> = cells.iter().map(|&(i, k)| grid.center(i, k)).collect();
            match first_failing_segment(pre, &verts, true, CERTIFICATE_SUBDIVISIONS, true) {
                None => return Ok(Attempt::Found(SeparationVerdict::Separated { cycle: verts })),
                Some(j) => {
                    let (a, b) = (cells[j], cells[(j + 1) % cells.len()]);
                    let (ia, ib) = (cl.idx(a.0, a.1), cl.idx(b.0, b.1));
                    cl.cells[ia] = Cell::Mixed;
                    cl.cells[ib] = Cell::Mixed;
                    continue;
                }
            }
        }
        if let Some(cells) = path {
            let dt = grid.dtheta();
            let first = cells[0];
            let last = cells[cells.len() - 1];
            let mut verts = Vec::with_capacity(cells.len() + 2);
            verts.push(grid.point(grid.s_min, (first.1 as f64 + 0.5) * dt));
            verts.extend(cells.iter().map(|&(i, k)| grid.center(i, k)));
            verts.push(grid.point(grid.s_max, (last.1 as f64 + 0.5) * dt));
            match first_failing_segment(pre, &verts, false, CERTIFICATE_SUBDIVISIONS, false) {
                None => return Ok(Attempt::Found(SeparationVerdict::NotSeparated { path: verts })),
                Some(j) => {
                    // Segment j joins verts[j] and verts[j+1]; cells are offset by one.
                    for v in [j, j + 1] {
                        if v >= 1 && v <= cells.len() {
                            let (i, k) = cells[v - 1];
                            let c = cl.idx(i, k);
                            cl.cells[c] = Cell::Mixed;
                        }
                    }
                    continue;
                }
            }
        }
        return Ok(Attempt::Nothing);
    }
    Ok(Attempt::Nothing)
}

/// Decide whether `I_z⁻¹(D)` separates 0 and ∞ on the given grid, refining
/// up to `grid.max_refinements` times.
pub fn separates(d: &Domain2, z: &Point2, grid: &LogPolarGrid) -> Result<SeparationVerdict> {
    if !d.contains(&Point2::ORIGIN) {
        return Err(Error::InvalidArgument("domain must contain the origin".into()));
    }
    if z.is_origin() {
        // I_(0,0) maps everything to the origin.
        return Ok(SeparationVerdict::Separated { cycle: unit_circle(64) });
    }
    let pre = Preimage::new(d, z);
    let caps_outside = pre.cap_outside(grid.s_min.exp(), true) && pre.cap_outside(grid.s_max.exp(), false);
    let mut g = *grid;
    let mut refinements = 0;
    loop {
        let mut cl = classify(&pre, &g);
        if let Attempt::Found(v) = attempt(&pre, &g, &mut cl, caps_outside)? {
            return Ok(v);
        }
        if refinements >= g.max_refinements {
            return Ok(SeparationVerdict::Undetermined(cl.stats(&g, refinements)));
        }
        g = g.refined();
        refinements += 1;
    }
}

/// [`separates`] on a grid whose range comes from [`auto_range`].
pub fn separates_auto(d: &Domain2, z: &Point2, resolution: &GridResolution) -> Result<SeparationVerdict> {
    let grid = resolution.with_range(auto_range(d, z)?)?;
    separates(d, z, &grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{make_ball, make_polydisc, ClassFlags};
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn i_map_examples() {
        let z = Point2::new(c(0.3, -1.0), c(2.0, 0.5));
        assert!(i_map(&z, c(-1.0, 0.0)).unwrap().is_origin());
        assert!(i_map(&Point2::ORIGIN, c(0.2, 3.0)).unwrap().is_origin());
        assert_eq!(i_map(&Point2::real(1.0, 2.0), c(1.0, 0.0)).unwrap(), Point2::real(2.0, 4.0));
        assert!(matches!(i_map(&z, c(0.0, 0.0)), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn auto_range_examples() {
        let d = make_polydisc(1.0, 1.0).unwrap();
        let (lo, hi) = auto_range(&d, &Point2::real(0.25, 0.25)).unwrap();
        assert!(hi.exp() >= 9.0 && (-lo).exp() >= 9.0);
        let b = make_ball(1.0).unwrap();
        let (lo, hi) = auto_range(&b, &Point2::real(10.0, 10.0)).unwrap();
        assert!(hi.exp() >= 1.2 && lo < 0.0);
        let (lo, hi) = auto_range(&d, &Point2::ORIGIN).unwrap();
        assert!(lo < 0.0 && hi > 0.0);
        let (lo, hi) = auto_range(&d, &Point2::real(0.0, 0.5)).unwrap();
        assert!(lo < 0.0 && hi > 0.0);
    }

    #[test]
    fn unbounded_requires_range() {
        let g = Domain2::general(Arc::new(|_: &Point2| true), Extent::Unbounded, ClassFlags::default()).unwrap();
        assert!(matches!(auto_range(&g, &Point2::real(1.0, 1.0)), Err(Error::RangeRequired)));
        assert!(matches!(
            separates_auto(&g, &Point2::real(1.0, 1.0), &GridResolution::default()),
            Err(Error::RangeRequired)
        ));
        // With a caller-supplied range the whole plane is trivially separated.
        let grid = LogPolarGrid::new(-2.0, 2.0, 32, 32, 0).unwrap();
        assert!(separates(&g, &Point2::real(1.0, 1.0), &grid).unwrap().is_separated());
    }

    #[test]
    fn grid_validation() {
        assert!(LogPolarGrid::new(0.5, 1.0, 32, 32, 0).is_err());
        assert!(LogPolarGrid::new(-1.0, 1.0, 8, 32, 0).is_err());
        let g = LogPolarGrid::new(-1.0, 1.0, 16, 32, 1).unwrap().refined();
        assert_eq!((g.ns, g.ntheta), (32, 64));
    }

    #[test]
    fn polydisc_examples() {
        let d = make_polydisc(1.0, 1.0).unwrap();
        let res = GridResolution::default();
        let z = Point2::real(0.25, 0.25);
        match separates_auto(&d, &z, &res).unwrap() {
            SeparationVerdict::Separated { cycle } => assert!(verify_cycle(&d, &z, &cycle, 100)),
            v => panic!("{v:?}"),
        }
        let z = Point2::real(0.6, 0.6);
        let grid = res.with_range(auto_range(&d, &z).unwrap()).unwrap();
        match separates(&d, &z, &grid).unwrap() {
            SeparationVerdict::NotSeparated { path } => {
                assert!(verify_path(&d, &z, &path, grid.s_min, grid.s_max, 100))
            }
            v => panic!("{v:?}"),
        }
        assert!(separates_auto(&d, &Point2::ORIGIN, &res).unwrap().is_separated());
    }

    #[test]
    fn unit_circle_is_a_valid_cycle_for_small_points() {
        // |1 + ζ| ≤ 2 on the unit circle, so 0.25 * 2 < 1.
        let d = make_polydisc(1.0, 1.0).unwrap();
        let z = Point2::real(0.25, 0.25);
        assert!(verify_cycle(&d, &z, &unit_circle(512), 10));
        assert!((winding_number(&unit_circle(7)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn axis_points() {
        let d = make_polydisc(1.0, 1.0).unwrap();
        let res = GridResolution { ns: 64, ntheta: 64, max_refinements: 2 };
        assert!(separates_auto(&d, &Point2::real(0.0, 0.9), &res).unwrap().is_separated());
        assert!(separates_auto(&d, &Point2::real(0.8, 0.0), &res).unwrap().is_separated());
        assert!(separates_auto(&d, &Point2::real(1.3, 0.0), &res).unwrap().is_not_separated());
        assert!(separates_auto(&d, &Point2::real(0.0, 1.2), &res).unwrap().is_not_separated());
    }

    #[test]
    fn general_domain_matches_reinhardt() {
        let g = Domain2::general(
            Arc::new(|z: &Point2| z.z1.norm() < 1.0 && z.z2.norm() < 1.0),
            Extent::Finite(1.0),
            ClassFlags { bounded: true, linearly_convex: true, runge: true, smooth: false },
        )
        .unwrap();
        let res = GridResolution { ns: 128, ntheta: 128, max_refinements: 1 };
        assert!(separates_auto(&g, &Point2::new(c(0.2, 0.1), c(0.0, -0.3)), &res).unwrap().is_separated());
        assert!(separates_auto(&g, &Point2::new(c(0.0, 0.7), c(0.6, 0.0)), &res).unwrap().is_not_separated());
    }
}
