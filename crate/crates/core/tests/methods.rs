use std::f64::consts::PI;
use std::sync::Arc;

use tmc::catalog::catalog;
use tmc::curvature::{
    cube_closed_form, gauss_check, inscribed_sphere, mean_curvature_classical, mean_curvature_pedal,
    mean_curvature_pedal_mc, mean_curvature_pedal_refined, minkowski_check, pstar_integral_mc,
    santalo_total_mean_curvature, table1_experiment, translation_invariance_check, PStar, Refinement,
};
use tmc::mesh::{polytope_body, to_polytope, MeshDocument};
use tmc::quadrature::{
    integrate_radial_volume, integrate_sphere, monte_carlo_volume_integral, octant_rule, sphere_rule, McSettings,
};
use tmc::surface::SmoothSurfacePatch;
use tmc::{Body, Point, Polytope, Shape};

const FOUR_PI: f64 = 4.0 * PI;
const SIX_PI: f64 = 6.0 * PI;

fn body(shape: Shape<f64>) -> Body {
    Body::centered(shape).unwrap()
}

fn mc(samples: u64, seed: u64, eps: f64) -> McSettings<f64> {
    McSettings {
        samples,
        seed,
        excision_radius: eps,
    }
}

#[test]
fn monte_carlo_pedal_examples() {
    let o = Point::zero();
    let s = mean_curvature_pedal_mc(&body(Shape::sphere(2.0)), o, &mc(1_000_000, 1, 0.1)).unwrap();
    assert!((s.estimate - 8.0 * PI).abs() <= 3.0 * s.standard_error, "{s:?}");

    // reference first, by a high-order rule
    let e = body(Shape::ellipsoid(1.0, 1.0, 2.0));
    let reference = mean_curvature_pedal(&e, o, &sphere_rule(256, 512).unwrap()).unwrap();
    let est = mean_curvature_pedal_mc(&e, o, &mc(1_000_000, 2, 0.05)).unwrap();
    assert!(
        (est.estimate - reference).abs() <= 4.0 * est.standard_error,
        "{est:?} vs {reference}"
    );
}

#[test]
fn classical_examples() {
    let sphere_chart = SmoothSurfacePatch::superellipsoid(2, 1.0, Point::zero());
    assert!((mean_curvature_classical(&sphere_chart, (64, 64)).unwrap() - FOUR_PI).abs() < 1e-8);
    let p = SmoothSurfacePatch::ellipsoid(2.0, 1.0, 1.0, Point::zero());
    let classical = mean_curvature_classical(&p, (256, 256)).unwrap();
    let pedal = mean_curvature_pedal_refined(
        &body(Shape::ellipsoid(2.0, 1.0, 1.0)),
        Point::zero(),
        &Refinement::default(),
    )
    .unwrap()
    .value;
    assert!(((pedal - classical) / classical).abs() <= 1e-4);
}

#[test]
fn minkowski_formula_on_ellipsoid() {
    let p = SmoothSurfacePatch::ellipsoid(2.0, 1.5, 1.0, Point::zero());
    let (lhs, rhs) = minkowski_check(&p, Point::zero(), (512, 512)).unwrap();
    assert!(((lhs - rhs) / rhs).abs() <= 1e-6, "{lhs} {rhs}");
    let (lhs, rhs) = minkowski_check(&p, Point::new(0.5, -0.3, 0.2), (512, 512)).unwrap();
    assert!(((lhs - rhs) / rhs).abs() <= 1e-6, "{lhs} {rhs}");
}

#[test]
fn gauss_bonnet() {
    for r in [0.5, 2.0] {
        let s = SmoothSurfacePatch::sphere(r, Point::zero());
        assert!((gauss_check(&s, (64, 64)).unwrap() - FOUR_PI).abs() < 1e-10);
    }
    let e = SmoothSurfacePatch::ellipsoid(2.0, 1.0, 1.0, Point::zero());
    assert!((gauss_check(&e, (256, 256)).unwrap() - FOUR_PI).abs() < 1e-6);
    let se = SmoothSurfacePatch::superellipsoid(6, 1.0, Point::zero());
    assert!((gauss_check(&se, (512, 512)).unwrap() - FOUR_PI).abs() < 1e-5);
}

#[test]
fn inverse_pstar_probes() {
    let o = Point::zero();
    let rule = sphere_rule(64, 128).unwrap();
    for shape in [Shape::sphere(1.0), Shape::ellipsoid(2.0, 1.0, 1.0)] {
        let b = body(shape);
        let eps = 0.25 * b.min_support(o);
        let est = pstar_integral_mc(&b, o, &mc(1_000_000, 3, eps), PStar::SupportValue, &rule).unwrap();
        assert!((est.estimate - FOUR_PI).abs() <= 3.0 * est.standard_error, "{est:?}");
    }
    // the cube is outside the ovaloid class: the estimate is recorded, not asserted
    let cube = body(Shape::cube(1.0));
    let est = pstar_integral_mc(
        &cube,
        o,
        &mc(200_000, 3, 0.25),
        PStar::SupportValue,
        &octant_rule(32).unwrap(),
    )
    .unwrap();
    assert!(est.estimate.is_finite() && est.standard_error > 0.0);
    // the tangent-plane reading runs on bodies with explicit boundaries
    let tp = pstar_integral_mc(
        &body(Shape::ellipsoid(2.0, 1.0, 1.0)),
        o,
        &mc(200_000, 3, 0.25),
        PStar::TangentPlane,
        &rule,
    )
    .unwrap();
    assert!(tp.estimate.is_finite());
}

#[test]
fn santalo_examples() {
    let box_value = santalo_total_mean_curvature(&Polytope::cuboid([1.0, 2.0, 3.0])).unwrap();
    assert!((box_value - PI * (2.0 + 4.0 + 6.0)).abs() < 1e-12);
    let pedal = mean_curvature_pedal(
        &body(Shape::cuboid(1.0, 2.0, 3.0)),
        Point::zero(),
        &octant_rule(32).unwrap(),
    )
    .unwrap();
    assert!(((box_value - pedal) / pedal).abs() <= 1e-6);
}

#[test]
fn polytope_zoo_pedal_matches_santalo() {
    let s = 1.0 / 2f64.sqrt();
    let octahedron = Polytope::from_faces(
        vec![
            Point::new(1.0, 0.0, 0.0),
            Point::new(-1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
            Point::new(0.0, -1.0, 0.0),
            Point::new(0.0, 0.0, 1.0),
            Point::new(0.0, 0.0, -1.0),
        ],
        vec![
            vec![0, 2, 4],
            vec![2, 1, 4],
            vec![1, 3, 4],
            vec![3, 0, 4],
            vec![2, 0, 5],
            vec![1, 2, 5],
            vec![3, 1, 5],
            vec![0, 3, 5],
        ],
        1e-9,
    )
    .unwrap();
    let prism = Polytope::from_faces(
        vec![
            Point::new(1.0, 0.0, -0.7),
            Point::new(-0.5, 0.8, -0.7),
            Point::new(-0.5, -0.8, -0.7),
            Point::new(1.0, 0.0, 0.7),
            Point::new(-0.5, 0.8, 0.7),
            Point::new(-0.5, -0.8, 0.7),
        ],
        vec![
            vec![0, 1, 2],
            vec![3, 5, 4],
            vec![0, 3, 4, 1],
            vec![1, 4, 5, 2],
            vec![2, 5, 3, 0],
        ],
        1e-9,
    )
    .unwrap();
    let pyramid = Polytope::from_faces(
        vec![
            Point::new(s, s, 0.0),
            Point::new(-s, s, 0.0),
            Point::new(-s, -s, 0.0),
            Point::new(s, -s, 0.0),
            Point::new(0.1, 0.2, 1.3),
        ],
        vec![
            vec![0, 1, 2, 3],
            vec![0, 4, 1],
            vec![1, 4, 2],
            vec![2, 4, 3],
            vec![3, 4, 0],
        ],
        1e-9,
    )
    .unwrap();
    for p in [octahedron, prism, pyramid, Polytope::regular_tetrahedron(1.7)] {
        let santalo = santalo_total_mean_curvature(&p).unwrap();
        let b = polytope_body(p).unwrap();
        let pedal = mean_curvature_pedal_refined(&b, b.center(), &Refinement::default())
            .unwrap()
            .value;
        assert!(((santalo - pedal) / santalo).abs() <= 1e-6, "{santalo} vs {pedal}");
    }
}

#[test]
fn loaded_meshes_agree_across_methods() {
    let cube = MeshDocument::<f64>::parse_off(
        "OFF\n8 6 0\n-1 -1 -1\n1 -1 -1\n-1 1 -1\n1 1 -1\n-1 -1 1\n1 -1 1\n-1 1 1\n1 1 1\n\
         4 0 2 3 1\n4 4 5 7 6\n4 0 1 5 4\n4 2 6 7 3\n4 0 4 6 2\n4 1 3 7 5\n",
    )
    .unwrap();
    let poly = to_polytope(&cube).unwrap();
    let santalo = santalo_total_mean_curvature(&poly).unwrap();
    let b = polytope_body(poly).unwrap();
    let pedal = mean_curvature_pedal_refined(&b, b.center(), &Refinement::default())
        .unwrap()
        .value;
    assert!((santalo - SIX_PI).abs() <= 1e-6 * SIX_PI);
    assert!((pedal - SIX_PI).abs() <= 1e-6 * SIX_PI);
}

#[test]
fn inscribed_sphere_bound() {
    let r = inscribed_sphere(&body(Shape::cube(1.0)), 1e-8).unwrap();
    assert!((r.radius - 1.0).abs() < 1e-8 && r.center.norm() < 1e-7, "{r:?}");
    let r = inscribed_sphere(&body(Shape::ellipsoid(2.0, 1.5, 1.0)), 1e-8).unwrap();
    assert!((r.radius - 1.0).abs() < 1e-8 && r.center.norm() < 1e-6, "{r:?}");
    let sphere = body(Shape::sphere(1.0));
    let r = inscribed_sphere(&sphere, 1e-10).unwrap();
    let m = mean_curvature_pedal(&sphere, Point::zero(), &octant_rule(16).unwrap()).unwrap();
    assert!((m - FOUR_PI * r.radius).abs() <= 1e-8);
    for e in catalog::<f64>().unwrap() {
        let m = mean_curvature_pedal_refined(&e.body, e.body.center(), &Refinement::default())
            .unwrap()
            .value;
        let r = inscribed_sphere(&e.body, 1e-9).unwrap();
        assert!(m >= FOUR_PI * r.radius - 1e-6, "{}", e.name);
        if !e.name.starts_with("sphere") {
            assert!((m - FOUR_PI * r.radius) / m > 1e-6, "{}", e.name);
        }
    }
}

#[test]
fn translation_invariance_examples() {
    let rule = octant_rule(64).unwrap();
    let o = Point::zero();
    let d = translation_invariance_check(&body(Shape::sphere(1.0)), o, Point::new(0.5, 0.0, 0.0), &rule).unwrap();
    assert!(d <= 1e-9);
    let e = body(Shape::ellipsoid(2.0, 1.0, 1.0));
    let near = Point::new(0.9, 0.0, 0.0);
    let a = mean_curvature_pedal_refined(&e, o, &Refinement::default())
        .unwrap()
        .value;
    let fine = Refinement {
        start_order: 64,
        max_order: 1024,
        rel_tol: 1e-9,
    };
    let b = mean_curvature_pedal_refined(&e, near, &fine).unwrap().value;
    assert!((a - b).abs() <= 1e-6, "{a} {b}");
}

#[test]
fn cube_routes_coincide() {
    for m in [1.0, 2.0] {
        let cf = cube_closed_form(m, 32).unwrap();
        assert!((cf.octant - 0.75 * m * PI).abs() < 1e-12 * m);
        let pedal = mean_curvature_pedal(&body(Shape::cube(m)), Point::zero(), &octant_rule(32).unwrap()).unwrap();
        assert!((cf.total - pedal).abs() <= 1e-9 * m);
    }
}

#[test]
fn table1_sphere_row() {
    let rows = table1_experiment::<f64>(&[2, 100], &Refinement::default()).unwrap();
    assert_eq!(rows[0].n, 2);
    assert!((rows[0].m - FOUR_PI).abs() < 1e-12);
    assert!((rows[1].m - 18.6792).abs() < 1e-3);
    assert!((rows[1].m_minus_6pi - (rows[1].m - SIX_PI)).abs() < 1e-15);
}

#[test]
fn radial_volume_matches_monte_carlo_volume() {
    let rule = sphere_rule(48, 96).unwrap();
    for e in catalog::<f64>().unwrap() {
        let m = e.body.center();
        let exact = integrate_radial_volume(|_| 1.0, &e.body, m, &rule, 4).unwrap();
        let est = monte_carlo_volume_integral(|_| 1.0, &e.body, m, &mc(400_000, 5, 0.0), 0.0).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 4.0 * est.standard_error,
            "{}: {exact} {est:?}",
            e.name
        );
    }
}

#[test]
fn radial_inverse_square_on_cube() {
    let v = integrate_radial_volume(
        |y| 1.0 / y.norm_squared(),
        &body(Shape::cube(1.0)),
        Point::zero(),
        &octant_rule(32).unwrap(),
        8,
    )
    .unwrap();
    assert!((v - SIX_PI).abs() < 1e-6);
}

#[test]
fn rule_refinement_is_cauchy() {
    // ellipsoid mean width integrand
    let f = |w: tmc::Direction| {
        let v = w.vec();
        (4.0 * v.x * v.x + 2.25 * v.y * v.y + v.z * v.z).sqrt()
    };
    let mut prev = integrate_sphere(f, &sphere_rule(4, 8).unwrap()).unwrap();
    let mut last_change = f64::INFINITY;
    for k in 3..=7 {
        let p = 1usize << k;
        let cur = integrate_sphere(f, &sphere_rule(p, 2 * p).unwrap()).unwrap();
        let change = (cur - prev).abs();
        assert!(
            change < last_change || change <= 1e-12,
            "p={p}: {change} vs {last_change}"
        );
        last_change = change;
        prev = cur;
    }
    assert!(last_change <= 1e-12);
}

#[test]
fn polytope_body_support_is_vertex_max() {
    let p = Polytope::regular_tetrahedron(1.0);
    let verts = p.vertices().to_vec();
    let b = Body::centered(Shape::Polytope(Arc::new(p))).unwrap();
    let w = tmc::Direction::from_components(0.3, -0.2, 0.9).unwrap();
    let brute = verts.iter().map(|v| v.dot(w.vec())).fold(f64::MIN, f64::max);
    assert_eq!(b.support(Point::zero(), w).unwrap(), brute);
}
