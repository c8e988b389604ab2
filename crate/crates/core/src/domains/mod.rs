//! Domains `0 ∈ D ⊂ C²`: complete Reinhardt domains described by their
//! shadow, and general domains given by a membership oracle.

mod shadow;
mod spec;

pub use shadow::{Extent, Profile, Shadow};
pub use spec::DomainSpec;

use crate::error::{Error, Result};
use crate::point::Point2;
use std::fmt;
use std::sync::Arc;

/// Self-declared class of a general domain. The library trusts these flags;
/// wrong flags void the guarantees of downstream computations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassFlags {
    pub bounded: bool,
    pub linearly_convex: bool,
    pub runge: bool,
    pub smooth: bool,
}

pub type MembershipOracle = Arc<dyn Fn(&Point2) -> bool + Send + Sync>;

/// A domain given only through a pure membership oracle.
#[derive(Clone)]
pub struct GeneralDomain {
    member: MembershipOracle,
    bound_radius: Extent,
    flags: ClassFlags,
}

impl GeneralDomain {
    /// `bound_radius` must be finite when `flags.bounded` is set; the oracle
    /// is wrapped so that points with `max |z_i| > bound_radius` are outside.
    pub fn new(member: MembershipOracle, bound_radius: Extent, flags: ClassFlags) -> Result<Self> {
        if flags.bounded && !bound_radius.is_finite() {
            return Err(Error::InvalidParameter("bounded domain needs a finite bound radius".into()));
        }
        if let Extent::Finite(r) = bound_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!("bound radius must be positive, got {r}")));
            }
        }
        if !member(&Point2::ORIGIN) {
            return Err(Error::InvalidParameter("domain must contain the origin".into()));
        }
        Ok(Self { member, bound_radius, flags })
    }

    pub fn flags(&self) -> ClassFlags {
        self.flags
    }

    pub fn contains(&self, z: &Point2) -> bool {
        if let Extent::Finite(r) = self.bound_radius {
            if z.max_modulus() > r {
                return false;
            }
        }
        (self.member)(z)
    }
}

impl fmt::Debug for GeneralDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralDomain")
            .field("bound_radius", &self.bound_radius)
            .field("flags", &self.flags)
            .finish_non_exhaustive()
    }
}

/// A domain in C² containing the origin.
#[derive(Debug, Clone)]
pub enum Domain2 {
    Reinhardt(Shadow),
    General(GeneralDomain),
}

impl Domain2 {
    pub fn reinhardt(shadow: Shadow) -> Self {
        Domain2::Reinhardt(shadow)
    }

    pub fn general(member: MembershipOracle, bound_radius: Extent, flags: ClassFlags) -> Result<Self> {
        GeneralDomain::new(member, bound_radius, flags).map(Domain2::General)
    }

    pub fn contains(&self, z: &Point2) -> bool {
        match self {
            Domain2::Reinhardt(s) => {
                let (x, y) = z.moduli();
                s.contains(x, y)
            }
            Domain2::General(g) => g.contains(z),
        }
    }

    /// Membership of the Reinhardt point with moduli `(x, y)`. For general
    /// domains this tests the real point `(x, y)`.
    pub fn contains_moduli(&self, x: f64, y: f64) -> bool {
        match self {
            Domain2::Reinhardt(s) => s.contains(x, y),
            Domain2::General(g) => g.contains(&Point2::real(x, y)),
        }
    }

    pub fn shadow(&self) -> Option<&Shadow> {
        match self {
            Domain2::Reinhardt(s) => Some(s),
            Domain2::General(_) => None,
        }
    }

    pub(crate) fn require_shadow(&self, what: &str) -> Result<&Shadow> {
        self.shadow()
            .ok_or_else(|| Error::UnsupportedDomain(format!("{what} requires a Reinhardt domain")))
    }

    /// Radius `R` with `D ⊂ {max |z_i| < R}`.
    pub fn bound_radius(&self) -> Extent {
        match self {
            Domain2::Reinhardt(s) => match s.extents() {
                Some((x, y)) => Extent::Finite(x.max(y)),
                None => Extent::Unbounded,
            },
            Domain2::General(g) => g.bound_radius,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bound_radius().is_finite()
    }

    /// The image of the domain under `(z1, z2) -> (l1 z1, l2 z2)`.
    pub fn scaled(&self, l1: f64, l2: f64) -> Result<Self> {
        match self {
            Domain2::Reinhardt(s) => Ok(Domain2::Reinhardt(s.scaled(l1, l2)?)),
            Domain2::General(g) => {
                if !(l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite()) {
                    return Err(Error::InvalidParameter("scale factors must be positive".into()));
                }
                let inner = g.member.clone();
                let member: MembershipOracle = Arc::new(move |z: &Point2| inner(&z.scale(1.0 / l1, 1.0 / l2)));
                let bound_radius = match g.bound_radius {
                    Extent::Finite(r) => Extent::Finite(r * l1.max(l2)),
                    Extent::Unbounded => Extent::Unbounded,
                };
                Ok(Domain2::General(GeneralDomain {
                    member,
                    bound_radius,
                    flags: g.flags,
                }))
            }
        }
    }

    /// The image of the domain under `(z1, z2) -> (z2, z1)`.
    pub fn swapped(&self) -> Result<Self> {
        match self {
            Domain2::Reinhardt(s) => Ok(Domain2::Reinhardt(s.swapped()?)),
            Domain2::General(g) => {
                let inner = g.member.clone();
                let member: MembershipOracle = Arc::new(move |z: &Point2| inner(&z.swap()));
                Ok(Domain2::General(GeneralDomain {
                    member,
                    bound_radius: g.bound_radius,
                    flags: g.flags,
                }))
            }
        }
    }
}

/// Polydisc `{|z1| < r1, |z2| < r2}`.
pub fn make_polydisc(r1: f64, r2: f64) -> Result<Domain2> {
    Shadow::rectangle(r1, r2).map(Domain2::Reinhardt)
}

/// Euclidean ball of radius `r`.
pub fn make_ball(r: f64) -> Result<Domain2> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    Shadow::superellipse(r, r, 2.0, 2.0).map(Domain2::Reinhardt)
}

/// `{|z1|^(2 p1) + |z2|^(2 p2) < 1}`.
pub fn make_ellipsoid(p1: f64, p2: f64) -> Result<Domain2> {
    if !(p1 > 0.0 && p2 > 0.0 && p1.is_finite() && p2.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponents must be positive, got ({p1}, {p2})")));
    }
    Shadow::superellipse(1.0, 1.0, 2.0 * p1, 2.0 * p2).map(Domain2::Reinhardt)
}

pub fn contains(d: &Domain2, z: &Point2) -> bool {
    d.contains(z)
}

/// Scale factor of the `n`-th member of the exhaustion.
pub fn exhaustion_scale(n: u32) -> f64 {
    1.0 - 0.5f64.powi(n as i32 + 1)
}

/// The `n`-th domain of an increasing exhaustion `D_0 ⊂ D_1 ⊂ … ⊂ D` with
/// `⋃ D_n = D`.
///
/// The shadow is shrunk by `1 - 2^-(n+1)`. Polydiscs additionally get their
/// corner rounded: the rectangle becomes the superellipse with exponent
/// `2^(n+2)`, whose `l^q` gauge decreases in `q`, which keeps the sequence
/// nested.
pub fn exhaustion(d: &Domain2, n: u32) -> Result<Domain2> {
    let shadow = d.require_shadow("exhaustion")?;
    let c = exhaustion_scale(n);
    let next = match shadow.profile() {
        Profile::Rectangle => {
            let (xm, ym) = shadow
                .extents()
                .ok_or_else(|| Error::UnboundedDomain("rectangle".into()))?;
            let q = 2f64.powi(n as i32 + 2);
            Shadow::superellipse(c * xm, c * ym, q, q)?
        }
        _ => shadow.scaled(c, c)?,
    };
    Ok(Domain2::Reinhardt(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polydisc_membership() {
        let d = make_polydisc(1.0, 1.0).unwrap();
        assert!(d.contains(&Point2::real(0.5, 0.5)));
        assert!(!d.contains(&Point2::real(1.0, 0.0)));
        assert!(d.contains(&Point2::real(0.0, 0.999)));
        let d = make_polydisc(2.0, 3.0).unwrap();
        let s = d.shadow().unwrap();
        assert_eq!(s.xmax(), Extent::Finite(2.0));
        assert_eq!(s.ymax(), Extent::Finite(3.0));
    }

    #[test]
    fn ball_membership() {
        let d = make_ball(1.0).unwrap();
        assert!(d.contains(&Point2::real(0.6, 0.6)));
        assert!(!d.contains(&Point2::real(1.0, 0.0)));
        assert!(!d.contains(&Point2::real(0.8, 0.7)));
        let d = make_ball(2.0).unwrap();
        assert_eq!(d.shadow().unwrap().beta(0.0), 2.0);
    }

    #[test]
    fn ellipsoid_membership() {
        let e = make_ellipsoid(0.5, 0.5).unwrap();
        assert!(e.contains(&Point2::real(0.4, 0.5)));
        assert!(!e.contains(&Point2::real(0.5, 0.5)));
        let e = make_ellipsoid(1.0, 1.0).unwrap();
        let b = make_ball(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let z = Point2::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
            assert_eq!(e.contains(&z), b.contains(&z));
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(make_polydisc(0.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_polydisc(1.0, -2.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_ball(-1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_ellipsoid(0.0, 1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn origin_always_inside() {
        for d in [make_polydisc(0.1, 5.0), make_ball(0.01), make_ellipsoid(0.2, 3.0)] {
            assert!(d.unwrap().contains(&Point2::ORIGIN));
        }
    }

    #[test]
    fn exhaustion_of_polydisc() {
        let d = make_polydisc(1.0, 1.0).unwrap();
        let d0 = exhaustion(&d, 0).unwrap();
        assert!(d0.contains(&Point2::real(0.4, 0.4)));
        assert!(!d0.contains(&Point2::real(0.6, 0.6)));
        let z = Point2::real(0.9, 0.9);
        let first = (0..20).find(|&n| exhaustion(&d, n).unwrap().contains(&z));
        assert!(first.is_some());
    }

    #[test]
    fn exhaustion_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [make_polydisc(1.0, 2.0).unwrap(), make_ball(1.0).unwrap(), make_ellipsoid(0.5, 2.0).unwrap()] {
            let levels: Vec<_> = (0..8).map(|n| exhaustion(&d, n).unwrap()).collect();
            for _ in 0..1000 {
                let z = Point2::real(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
                for w in levels.windows(2) {
                    if w[0].contains(&z) {
                        assert!(w[1].contains(&z), "{z:?}");
                    }
                }
                if levels[7].contains(&z) {
                    assert!(d.contains(&z));
                }
            }
        }
    }

    #[test]
    fn exhaustion_rejects_general_domains() {
        let g = Domain2::general(
            Arc::new(|z: &Point2| z.norm() < 1.0),
            Extent::Finite(1.0),
            ClassFlags { bounded: true, ..Default::default() },
        )
        .unwrap();
        assert!(matches!(exhaustion(&g, 0), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn general_domain_bound_is_enforced() {
        let g = Domain2::general(
            Arc::new(|_: &Point2| true),
            Extent::Finite(2.0),
            ClassFlags { bounded: true, ..Default::default() },
        )
        .unwrap();
        assert!(g.contains(&Point2::real(1.9, 1.9)));
        assert!(!g.contains(&Point2::real(2.1, 0.0)));
        assert!(Domain2::general(Arc::new(|_: &Point2| false), Extent::Unbounded, ClassFlags::default()).is_err());
    }
}
