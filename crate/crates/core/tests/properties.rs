use hadamard_domains::domains::{make_ball, make_ellipsoid, make_polydisc, Domain2, Shadow};
use hadamard_domains::dual::{dual_contains, phi_map, reinhardt_normal, support};
use hadamard_domains::point::Point2;
use hadamard_domains::separation::{separates, separates_auto, GridResolution, VerdictKind};
use hadamard_domains::series::{
    contour_h_star_series, hadamard, lambda_op, ContourSpec, TruncatedSeries2,
};
use hadamard_domains::star::{h_star_shadow, CellState, GridSpec};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};

fn domain(kind: u8, p: f64, q: f64) -> Domain2 {
    match kind % 3 {
        0 => make_polydisc(p, q).unwrap(),
        1 => make_ball(p).unwrap(),
        _ => make_ellipsoid(p, q).unwrap(),
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn series(cap: usize) -> impl Strategy<Value = TruncatedSeries2> {
    proptest::collection::vec(complex(), (cap + 1) * (cap + 2) / 2)
        .prop_map(move |v| {
            let mut it = v.into_iter();
            TruncatedSeries2::from_fn(cap, |_, _| it.next().unwrap()).unwrap()
        })
}

fn coarse() -> GridResolution {
    GridResolution {
        ns: 128,
        ntheta: 128,
        max_refinements: 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_sublinear(kind in 0u8..3, p in 0.3..3.0f64, q in 0.3..3.0f64,
                            a1 in 0.0..2.0f64, b1 in 0.0..2.0f64, a2 in 0.0..2.0f64, b2 in 0.0..2.0f64, l in 0.1..5.0f64) {
        let d = domain(kind, p, q);
        let s1 = support(&d, a1, b1).unwrap();
        let s2 = support(&d, a2, b2).unwrap();
        let tol = 1e-9 * (1.0 + s1 + s2);
        prop_assert!((support(&d, l * a1, l * b1).unwrap() - l * s1).abs() <= l * tol + 1e-6 * l * s1);
        prop_assert!(support(&d, a1 + a2, b1 + b2).unwrap() <= s1 + s2 + tol + 1e-6 * (s1 + s2));
    }

    #[test]
    fn dual_points_never_pair_to_one(kind in 0u8..3, p in 0.3..3.0f64, q in 0.3..3.0f64,
                                     phi in 0.0..FRAC_PI_2, t in 0.0..0.999f64,
                                     th in proptest::array::uniform4(0.0..TAU), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let d = domain(kind, p, q);
        let sigma = support(&d, phi.cos(), phi.sin()).unwrap();
        let xi = Point2::real(t * phi.cos() / sigma, t * phi.sin() / sigma).rotate(th[0], th[1]);
        prop_assert!(dual_contains(&d, &xi).unwrap().inside());
        // a point of D, drawn from the shadow's bounding box
        let s = d.shadow().unwrap();
        let (x, y) = (u * s.xmax().as_f64(), v * s.ymax().as_f64());
        if s.contains(x, y) {
            let z = Point2::real(x, y).rotate(th[2], th[3]);
            prop_assert!(z.dot(&xi).norm() < 1.0);
        }
    }

    // ellipsoid exponents p >= 1/2 keep the shadow convex, so tangent
    // hyperplanes support D
    #[test]
    fn phi_map_lands_on_the_dual_boundary(kind in 1u8..3, p in 0.5..3.0f64, q in 0.5..3.0f64,
                                         phi in 0.05..(FRAC_PI_2 - 0.05), th1 in 0.0..TAU, th2 in 0.0..TAU) {
        let d = domain(kind, p, q);
        let s = d.shadow().unwrap();
        let r = s.ray_radius(phi);
        let w = Point2::real(r * phi.cos(), r * phi.sin()).rotate(th1, th2);
        let xi = phi_map(&reinhardt_normal(&d, &w).unwrap()).unwrap();
        prop_assert!((w.dot(&xi) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let (a, b) = xi.moduli();
        prop_assert!((support(&d, a, b).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn scaled_shadows_are_covariant(kind in 0u8..3, p in 0.3..3.0f64, q in 0.3..3.0f64,
                                    lx in 0.2..5.0f64, ly in 0.2..5.0f64, x in 0.0..4.0f64, y in 0.0..4.0f64) {
        let s = domain(kind, p, q).shadow().unwrap().clone();
        let t: Shadow = s.scaled(lx, ly).unwrap();
        prop_assert_eq!(t.contains(lx * x, ly * y), s.contains(x, y));
        prop_assert_eq!(s.swapped().unwrap().contains(y, x), s.contains(x, y));
    }

    #[test]
    fn hadamard_is_commutative_and_bilinear(f in series(6), g in series(6), h in series(6), a in complex()) {
        prop_assert_eq!(hadamard(&f, &g), hadamard(&g, &f));
        let fg = TruncatedSeries2::from_fn(6, |i, j| a * f.get(i, j) + g.get(i, j)).unwrap();
        let lhs = hadamard(&fg, &h);
        let (p1, p2) = (hadamard(&f, &h), hadamard(&g, &h));
        for ((i, j), c) in lhs.iter() {
            prop_assert!((c - (a * p1.get(i, j) + p2.get(i, j))).norm() < 1e-12);
        }
    }

    #[test]
    fn lambda_commutes_with_z2_only_factor(g in series(6), coeffs in proptest::collection::vec(complex(), 7)) {
        let f = TruncatedSeries2::from_fn(6, |i, j| if i == 0 { coeffs[j] } else { Complex64::new(0.0, 0.0) }).unwrap();
        prop_assert_eq!(hadamard(&f, &lambda_op(&g)), lambda_op(&hadamard(&f, &g)));
    }

    #[test]
    fn contour_value_does_not_depend_on_the_loop(f in series(5), z1 in complex(), z2 in complex(),
                                                 cx in -0.4..0.4f64, cy in -0.4..0.4f64, r in 0.6..3.0f64) {
        let z = Point2::new(z1 * 2.0, z2 * 2.0);
        let a = contour_h_star_series(&f, &z, &ContourSpec::unit_circle()).unwrap().value;
        let b = contour_h_star_series(&f, &z, &ContourSpec::circle(Complex64::new(cx, cy), r)).unwrap().value;
        let square = ContourSpec::polyline(vec![
            Complex64::new(r, -r), Complex64::new(r, r), Complex64::new(-r, r), Complex64::new(-r, -r),
        ]);
        let c = contour_h_star_series(&f, &z, &square).unwrap().value;
        let scale = 1.0 + a.norm();
        prop_assert!((a - b).norm() < 1e-8 * scale);
        prop_assert!((a - c).norm() < 1e-8 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn separation_is_monotone_along_rays(kind in 0u8..3, p in 0.5..2.0f64, q in 0.5..2.0f64,
                                         phi in 0.0..FRAC_PI_2, t in 0.1..2.0f64, shrink in 0.3..0.95f64) {
        let d = domain(kind, p, q);
        let z = Point2::real(t * phi.cos(), t * phi.sin());
        let outer = separates_auto(&d, &z, &coarse()).unwrap().kind();
        let inner = separates_auto(&d, &z.scale(shrink, shrink), &coarse()).unwrap().kind();
        prop_assert!(!(outer == VerdictKind::Separated && inner == VerdictKind::NotSeparated));
    }

    #[test]
    fn refinement_never_flips_a_verdict(kind in 0u8..3, p in 0.5..2.0f64, q in 0.5..2.0f64,
                                        x in 0.0..1.5f64, y in 0.0..1.5f64) {
        let d = domain(kind, p, q);
        let z = Point2::real(x, y);
        let range = hadamard_domains::separation::auto_range(&d, &z).unwrap();
        let coarse_grid = coarse().with_range(range).unwrap();
        let a = separates(&d, &z, &coarse_grid).unwrap().kind();
        let b = separates(&d, &z, &coarse_grid.refined()).unwrap().kind();
        let decided = |k: VerdictKind| k != VerdictKind::Undetermined;
        prop_assert!(!(decided(a) && decided(b) && a != b));
    }
}

#[test]
fn hstar_shadow_lies_in_certified_cells() {
    let g = make_ball(1.0).unwrap();
    let r = h_star_shadow(&g, &GridSpec::with_cells(32)).unwrap();
    let (w, h) = r.mask.cell_size();
    for (i, j, s) in r.mask.iter() {
        let (cx, cy) = r.mask.center(i, j);
        if r.shadow.contains(cx, cy) {
            assert_eq!(s, CellState::In);
        }
        // spot-check the certified upper-right nodes of IN cells
        if s == CellState::In && (i + j) % 7 == 0 {
            let node = Point2::real((i + 1) as f64 * w, (j + 1) as f64 * h);
            assert!(separates_auto(&g, &node, &GridResolution::default()).unwrap().is_separated());
        }
    }
    assert!(r.diagnostics.warnings.is_empty());
}
