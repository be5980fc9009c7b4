//! Total mean curvature by four routes and the integral identities that tie
//! them together.
//!
//! * pedal: `M = ∫_{S²} p_m dS`, the sphere-integral form of the pedal-body
//!   volume integral `∫ dy / ‖y − m‖²` (also available in radial form and as
//!   a direct Monte Carlo volume integral);
//! * classical: `M = ∫ H dA` over a smooth chart;
//! * polyhedral: `M = ½ Σ (π − αᵢ) aᵢ` over polytope edges.

mod experiments;
mod inscribed;
mod report;

pub use experiments::{cube_closed_form, table1_experiment, CubeClosedForm, Table1Row, REFERENCE_TABLE1};
pub use inscribed::{inscribed_sphere, InscribedSphere, SUPPORT_CAP};
pub use report::{CurvatureReport, Discrepancy, Method, MethodValue};

use crate::bodies::{ConvexBody, UnitDirection};
use crate::error::{Error, Result};
use crate::polytope::ConvexPolytope;
use crate::quadrature::{
    integrate_octant_symmetric, integrate_radial_volume, inverse_square_excision, monte_carlo_volume_integral,
    octant_rule, try_integrate_sphere, CompensatedSum, McEstimate, McSettings, SphereQuadrature,
};
use crate::scalar::Real;
use crate::surface::{integrate_surface, SmoothSurfacePatch};
use crate::vec3::Vec3;

/// `M = ∫_{S²} p_m(w) dS` with the given rule.
pub fn mean_curvature_pedal<T: Real>(body: &ConvexBody<T>, m: Vec3<T>, rule: &SphereQuadrature<T>) -> Result<T> {
    try_integrate_sphere(|w| body.support(m, w), rule)
}

/// `∫_{pedal body} dy / ‖y − m‖²` evaluated in sphere × radial form.
pub fn mean_curvature_radial<T: Real>(
    body: &ConvexBody<T>,
    m: Vec3<T>,
    rule: &SphereQuadrature<T>,
    radial_order: usize,
) -> Result<T> {
    integrate_radial_volume(|y| (y - m).norm_squared().recip(), body, m, rule, radial_order)
}

/// Order-doubling schedule for [`mean_curvature_pedal_refined`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Refinement {
    pub start_order: usize,
    pub max_order: usize,
    /// Stop once two successive orders differ by less than this, relatively.
    pub rel_tol: f64,
}

impl Default for Refinement {
    fn default() -> Self {
        Self {
            start_order: 32,
            max_order: 512,
            rel_tol: 1e-5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinedValue<T> {
    pub value: T,
    pub order: usize,
    /// `|M(order) − M(order/2)|`.
    pub last_change: T,
    pub converged: bool,
    pub strategy: RuleStrategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleStrategy {
    /// Normal-fan rule of a polytope; the order is per spherical triangle.
    NormalFan,
    /// One octant times eight, for sign-flip symmetric bodies seen from the origin.
    OctantSymmetric,
    /// Full octant-reflected rule.
    Octant,
}

impl RuleStrategy {
    pub fn for_body<T: Real>(body: &ConvexBody<T>, m: Vec3<T>) -> Self {
        if body.shape().polytope().is_some() {
            RuleStrategy::NormalFan
        } else if body.shape().is_octant_symmetric() && m == Vec3::zero() {
            RuleStrategy::OctantSymmetric
        } else {
            RuleStrategy::Octant
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleStrategy::NormalFan => "normal-fan",
            RuleStrategy::OctantSymmetric => "octant-symmetric",
            RuleStrategy::Octant => "octant",
        }
    }
}

/// The rule [`mean_curvature_pedal_refined`] uses for `body` at `order`.
pub fn preferred_rule<T: Real>(body: &ConvexBody<T>, order: usize) -> Result<SphereQuadrature<T>> {
    match body.shape().polytope() {
        Some((p, _)) => p.normal_fan_rule(fan_order(order)),
        None => octant_rule(order),
    }
}

fn fan_order(order: usize) -> usize {
    (order / 4).max(4)
}

/// Pedal mean curvature with the rule family chosen from the body's
/// non-smoothness and the order doubled until successive values agree.
pub fn mean_curvature_pedal_refined<T: Real>(
    body: &ConvexBody<T>,
    m: Vec3<T>,
    refine: &Refinement,
) -> Result<RefinedValue<T>> {
    if refine.start_order == 0 || refine.max_order < refine.start_order {
        return Err(Error::InvalidOrder(format!(
            "refinement orders {}..{} invalid",
            refine.start_order, refine.max_order
        )));
    }
    let strategy = RuleStrategy::for_body(body, m);
    let eval = |order: usize| -> Result<T> {
        match strategy {
            RuleStrategy::OctantSymmetric => integrate_octant_symmetric(|w| body.support(m, w), order),
            RuleStrategy::NormalFan | RuleStrategy::Octant => {
                mean_curvature_pedal(body, m, &preferred_rule(body, order)?)
            }
        }
    };
    let mut order = refine.start_order;
    let mut prev = eval(order)?;
    loop {
        let next_order = order * 2;
        if next_order > refine.max_order {
            return Ok(RefinedValue {
                value: prev,
                order,
                last_change: T::nan(),
                converged: false,
                strategy,
            });
        }
        let cur = eval(next_order)?;
        let change = (cur - prev).abs();
        if change <= T::lit(refine.rel_tol) * cur.abs() {
            return Ok(RefinedValue {
                value: cur,
                order: next_order,
                last_change: change,
                converged: true,
                strategy,
            });
        }
        prev = cur;
        order = next_order;
    }
}

/// Default excision radius: 5% of the smallest support value.
pub fn default_excision<T: Real>(body: &ConvexBody<T>, m: Vec3<T>) -> T {
    T::lit(0.05) * body.min_support(m)
}

/// `∫_{pedal body} dy / ‖y − m‖²` by direct Monte Carlo volume integration.
pub fn mean_curvature_pedal_mc<T: Real>(
    body: &ConvexBody<T>,
    m: Vec3<T>,
    settings: &McSettings<T>,
) -> Result<McEstimate<T>> {
    monte_carlo_volume_integral(
        |y| (y - m).norm_squared().recip(),
        body,
        m,
        settings,
        inverse_square_excision(settings.excision_radius),
    )
}

/// Reading of `p*(y)`, the distance from `m` to a tangent plane associated
/// with `y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PStar {
    /// Support value in the direction of `y − m`: `p_m((y − m)/‖y − m‖)`.
    #[default]
    SupportValue,
    /// Distance to the tangent plane at the boundary point hit by the ray
    /// from `m` through `y`.
    TangentPlane,
}

/// `p*` along direction `w`; both readings are constant along rays from `m`.
fn pstar_along<T: Real>(body: &ConvexBody<T>, m: Vec3<T>, w: UnitDirection<T>, mode: PStar) -> Result<T> {
    match mode {
        PStar::SupportValue => body.support(m, w),
        PStar::TangentPlane => {
            let (x, n) = body
                .shape()
                .boundary_hit(m, w.vec())
                .ok_or_else(|| Error::Unsupported("tangent-plane reading needs an explicit boundary".into()))?;
            let p = (x - m).dot(n);
            if p > T::zero() {
                Ok(p)
            } else {
                Err(Error::NonPositiveSupport {
                    value: p.as_f64(),
                    direction: w.vec().to_f64(),
                })
            }
        }
    }
}

/// `p*(y)` with the convention `p*(m) = 1`.
pub fn pstar<T: Real>(body: &ConvexBody<T>, m: Vec3<T>, y: Vec3<T>, mode: PStar) -> Result<T> {
    let d = y - m;
    if d == Vec3::zero() {
        return Ok(T::one());
    }
    pstar_along(body, m, UnitDirection::new(d)?, mode)
}

/// `∫_{pedal body} dy / (p*(y) ‖y − m‖²)` by Monte Carlo. The excised ball
/// contributes `ε ∫_{S²} dS / p*(w)`, evaluated with `correction_rule`.
pub fn pstar_integral_mc<T: Real>(
    body: &ConvexBody<T>,
    m: Vec3<T>,
    settings: &McSettings<T>,
    mode: PStar,
    correction_rule: &SphereQuadrature<T>,
) -> Result<McEstimate<T>> {
    // surface unsupported readings before sampling
    pstar_along(
        body,
        m,
        UnitDirection::assume_unit(Vec3::new(T::zero(), T::zero(), T::one())),
        mode,
    )?;
    let inv = try_integrate_sphere(|w| pstar_along(body, m, w, mode).map(T::recip), correction_rule)?;
    let excised = settings.excision_radius * inv;
    monte_carlo_volume_integral(
        |y| {
            let d = y - m;
            let r2 = d.norm_squared();
            let w = UnitDirection::assume_unit(d / r2.sqrt());
            match pstar_along(body, m, w, mode) {
                Ok(p) => (p * r2).recip(),
                Err(_) => T::nan(),
            }
        },
        body,
        m,
        settings,
        excised,
    )
}

/// The same integral in sphere × radial form. With the support-value reading
/// the radial factor cancels (`∫₀^p ρ⁻² p⁻¹ ρ² dρ = 1`), so the result is the
/// total weight of the rule, `4π`.
pub fn pstar_integral_radial<T: Real>(
    body: &ConvexBody<T>,
    m: Vec3<T>,
    rule: &SphereQuadrature<T>,
    radial_order: usize,
    mode: PStar,
) -> Result<T> {
    integrate_radial_volume(
        |y| {
            let d = y - m;
            let r2 = d.norm_squared();
            let w = UnitDirection::assume_unit(d / r2.sqrt());
            match pstar_along(body, m, w, mode) {
                Ok(p) => (p * r2).recip(),
                Err(_) => T::nan(),
            }
        },
        body,
        m,
        rule,
        radial_order,
    )
}

/// `∫ H dA` over a closed chart.
pub fn mean_curvature_classical<T: Real>(patch: &SmoothSurfacePatch<T>, grid: (usize, usize)) -> Result<T> {
    integrate_surface(patch, grid, |ff| ff.mean)
}

/// Both sides of `∫ p K dA = ∫ H dA` with `p = ⟨x − m, N⟩`.
pub fn minkowski_check<T: Real>(patch: &SmoothSurfacePatch<T>, m: Vec3<T>, grid: (usize, usize)) -> Result<(T, T)> {
    let lhs = integrate_surface(patch, grid, |ff| (ff.point - m).dot(ff.normal.vec()) * ff.gaussian)?;
    let rhs = integrate_surface(patch, grid, |ff| ff.mean)?;
    Ok((lhs, rhs))
}

/// `∫ K dA`, which is `4π` on any closed convex surface.
pub fn gauss_check<T: Real>(patch: &SmoothSurfacePatch<T>, grid: (usize, usize)) -> Result<T> {
    integrate_surface(patch, grid, |ff| ff.gaussian)
}

/// `M = ½ Σ (π − αᵢ) aᵢ`. Coplanar edges (`α = π`) contribute nothing.
pub fn santalo_total_mean_curvature<T: Real>(poly: &ConvexPolytope<T>) -> Result<T> {
    let slack = T::lit(1e-12);
    let mut acc = CompensatedSum::default();
    for (i, e) in poly.edges().iter().enumerate() {
        if !(e.dihedral > T::zero() && e.dihedral <= T::PI() + slack) {
            return Err(Error::BadDihedral {
                edge: i,
                angle: e.dihedral.as_f64(),
            });
        }
        acc.add((T::PI() - e.dihedral).max(T::zero()) * e.length);
    }
    Ok(acc.value() * T::lit(0.5))
}

/// `|M(m1) − M(m2)|` from the pedal method at two reference centers.
pub fn translation_invariance_check<T: Real>(
    body: &ConvexBody<T>,
    m1: Vec3<T>,
    m2: Vec3<T>,
    rule: &SphereQuadrature<T>,
) -> Result<T> {
    let a = mean_curvature_pedal(body, m1, rule)?;
    let b = mean_curvature_pedal(body, m2, rule)?;
    Ok((a - b).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Shape;
    use crate::quadrature::sphere_rule;
    use std::f64::consts::PI;

    fn body(shape: Shape<f64>) -> ConvexBody<f64> {
        ConvexBody::centered(shape).unwrap()
    }

    #[test]
    fn pedal_values() {
        let o = Vec3::zero();
        let rule = octant_rule::<f64>(64).unwrap();
        let s = mean_curvature_pedal(&body(Shape::sphere(1.0)), o, &rule).unwrap();
        assert!((s - 4.0 * PI).abs() < 1e-12);
        let c = mean_curvature_pedal(&body(Shape::cube(1.0)), o, &rule).unwrap();
        assert!((c - 6.0 * PI).abs() < 1e-12);
        let r =
            mean_curvature_pedal_refined(&body(Shape::superellipsoid(500, 1.0)), o, &Refinement::default()).unwrap();
        assert!((r.value - 18.8151).abs() < 1e-3, "{r:?}");
        assert_eq!(r.strategy, RuleStrategy::OctantSymmetric);
    }

    #[test]
    fn radial_and_sphere_forms_agree() {
        let b = body(Shape::ellipsoid(2.0, 1.5, 1.0));
        let rule = sphere_rule::<f64>(32, 64).unwrap();
        let a = mean_curvature_pedal(&b, Vec3::zero(), &rule).unwrap();
        let r = mean_curvature_radial(&b, Vec3::zero(), &rule, 8).unwrap();
        assert!((a - r).abs() < 1e-12 * a);
    }

    #[test]
    fn classical_sphere_and_ellipsoid() {
        for r in [0.5, 1.0, 3.0] {
            let patch = SmoothSurfacePatch::sphere(r, Vec3::zero());
            let m = mean_curvature_classical(&patch, (64, 64)).unwrap();
            assert!((m - 4.0 * PI * r).abs() < 1e-10, "{m}");
        }
        let patch = SmoothSurfacePatch::for_shape(&Shape::ellipsoid(2.0, 1.0, 1.0)).unwrap();
        let classical = mean_curvature_classical(&patch, (128, 128)).unwrap();
        let pedal = mean_curvature_pedal(
            &body(Shape::ellipsoid(2.0, 1.0, 1.0)),
            Vec3::zero(),
            &sphere_rule(64, 128).unwrap(),
        )
        .unwrap();
        assert!(((classical - pedal) / classical).abs() < 1e-4);
    }

    #[test]
    fn minkowski_and_gauss_on_sphere() {
        let patch = SmoothSurfacePatch::sphere(1.0, Vec3::zero());
        for m in [Vec3::zero(), Vec3::new(0.3, 0.0, 0.0)] {
            let (lhs, rhs) = minkowski_check(&patch, m, (64, 64)).unwrap();
            assert!((lhs - 4.0 * PI).abs() < 1e-10 && (rhs - 4.0 * PI).abs() < 1e-10);
        }
        assert!((gauss_check(&patch, (64, 64)).unwrap() - 4.0 * PI).abs() < 1e-10);
        let e = SmoothSurfacePatch::ellipsoid(2.0, 1.0, 1.0, Vec3::zero());
        assert!((gauss_check(&e, (128, 128)).unwrap() - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn santalo_boxes_and_tetrahedron() {
        let cube = ConvexPolytope::<f64>::cuboid([1.0, 1.0, 1.0]);
        assert!((santalo_total_mean_curvature(&cube).unwrap() - 6.0 * PI).abs() < 1e-12);
        let b = ConvexPolytope::<f64>::cuboid([0.5, 1.0, 1.5]);
        assert!((santalo_total_mean_curvature(&b).unwrap() - PI * 6.0).abs() < 1e-12);
        let t = ConvexPolytope::<f64>::regular_tetrahedron(1.0);
        let expect = 3.0 * (PI - (1.0f64 / 3.0).acos());
        assert!((santalo_total_mean_curvature(&t).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 5.7319).abs() < 1e-4);
    }

    #[test]
    fn pstar_identity_and_convention() {
        let b = body(Shape::ellipsoid(2.0, 1.0, 1.0));
        let rule = sphere_rule::<f64>(16, 32).unwrap();
        let v = pstar_integral_radial(&b, Vec3::zero(), &rule, 4, PStar::SupportValue).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-12);
        assert_eq!(pstar(&b, Vec3::zero(), Vec3::zero(), PStar::SupportValue).unwrap(), 1.0);
        assert_eq!(
            pstar(&b, Vec3::zero(), Vec3::new(0.5, 0.0, 0.0), PStar::TangentPlane).unwrap(),
            2.0
        );
    }

    #[test]
    fn pstar_tangent_plane_unsupported_for_sums() {
        let b = body(Shape::minkowski_sum(Shape::sphere(1.0), Shape::cube(1.0)));
        let s = McSettings {
            samples: 10,
            seed: 1,
            excision_radius: 0.1,
        };
        let rule = sphere_rule::<f64>(4, 8).unwrap();
        let err = pstar_integral_mc(&b, Vec3::zero(), &s, PStar::TangentPlane, &rule).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn translation_invariance_on_cube() {
        let b = body(Shape::cube(1.0));
        let rule = octant_rule::<f64>(32).unwrap();
        let d = translation_invariance_check(&b, Vec3::zero(), Vec3::new(0.4, -0.2, 0.1), &rule).unwrap();
        assert!(d <= 1e-9);
    }

    #[test]
    fn bad_dihedral_reported() {
        // a zero-thickness "polytope" cannot be built, so check the guard via
        // the refined path instead: an invalid refinement schedule
        let b = body(Shape::sphere(1.0));
        let bad = Refinement {
            start_order: 64,
            max_order: 32,
            rel_tol: 1e-6,
        };
        assert!(mean_curvature_pedal_refined(&b, Vec3::zero(), &bad).is_err());
    }
}
