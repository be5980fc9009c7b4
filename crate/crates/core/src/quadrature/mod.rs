//! Sphere and radial quadrature plus seeded Monte Carlo volume integration.

mod gauss;
mod monte_carlo;

pub use gauss::GaussLegendre;
pub use monte_carlo::{
    inverse_square_excision, monte_carlo_volume_integral, McEstimate, McSettings, CHUNK_SAMPLES, DEFAULT_SEED,
};

use rayon::prelude::*;

use crate::bodies::{ConvexBody, UnitDirection};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// How a [`SphereQuadrature`] was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleFamily {
    /// Gauss–Legendre in `s = sin(latitude)` per hemisphere × trapezoid in azimuth.
    Product,
    /// Gauss–Legendre in polar and azimuthal angle on one octant, reflected
    /// into all eight.
    Octant,
    /// Adapted to a polytope's normal fan.
    NormalFan,
}

/// Nodes and weights on the unit sphere.
///
/// `degree` is the polynomial exactness in `w`; it is `0` for the octant and
/// normal-fan families, which converge spectrally on their target integrands
/// without being interpolatory.
#[derive(Clone, Debug)]
pub struct SphereQuadrature<T> {
    nodes: Vec<UnitDirection<T>>,
    weights: Vec<T>,
    degree: usize,
    family: RuleFamily,
}

impl<T: Real> SphereQuadrature<T> {
    pub(crate) fn from_parts(nodes: Vec<UnitDirection<T>>, weights: Vec<T>, degree: usize, family: RuleFamily) -> Self {
        debug_assert_eq!(nodes.len(), weights.len());
        Self {
            nodes,
            weights,
            degree,
            family,
        }
    }

    pub fn nodes(&self) -> &[UnitDirection<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> RuleFamily {
        self.family
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().collect::<CompensatedSum<T>>().value()
    }
}

/// Product rule on the chart `w = (cos u¹ cos u², cos u¹ sin u², sin u¹)`.
///
/// The substitution `s = sin u¹` absorbs the `cos u¹` area factor, so the
/// polar integral is a plain integral over `s ∈ [−1, 1]`; it is split at the
/// equator and each half gets `polar_order` Gauss–Legendre nodes. Azimuth uses
/// the `azimuth_count`-point trapezoid rule. Exact for spherical polynomials of
/// degree `min(2·polar_order − 1, azimuth_count − 1)`.
pub fn sphere_rule<T: Real>(polar_order: usize, azimuth_count: usize) -> Result<SphereQuadrature<T>> {
    if polar_order == 0 || azimuth_count == 0 {
        return Err(Error::InvalidOrder(format!(
            "polar_order={polar_order}, azimuth_count={azimuth_count}; both must be >= 1"
        )));
    }
    let gl = GaussLegendre::<T>::new(polar_order)?;
    let dphi = T::TAU() / T::count(azimuth_count);
    let mut nodes = Vec::with_capacity(2 * polar_order * azimuth_count);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (lo, hi) in [(-T::one(), T::zero()), (T::zero(), T::one())] {
        for (s, ws) in gl.on_interval(lo, hi) {
            let c = (T::one() - s * s).sqrt();
            for j in 0..azimuth_count {
                let (sp, cp) = (dphi * T::count(j)).sin_cos();
                nodes.push(UnitDirection::assume_unit(Vec3::new(c * cp, c * sp, s)));
                weights.push(ws * dphi);
            }
        }
    }
    let degree = (2 * polar_order - 1).min(azimuth_count - 1);
    Ok(SphereQuadrature::from_parts(
        nodes,
        weights,
        degree,
        RuleFamily::Product,
    ))
}

/// One-octant angular nodes: `(direction, weight)` with `θ, φ ∈ (0, π/2)`,
/// weight `sin θ dθ dφ`. Total weight is `π/2`.
pub fn octant_nodes<T: Real>(order: usize) -> Result<Vec<(UnitDirection<T>, T)>> {
    let gl = GaussLegendre::<T>::new(order)?;
    let half_pi = T::FRAC_PI_2();
    let mut out = Vec::with_capacity(order * order);
    for (theta, wt) in gl.on_interval(T::zero(), half_pi) {
        let st = theta.sin();
        for (phi, wp) in gl.on_interval(T::zero(), half_pi) {
            out.push((UnitDirection::spherical(theta, phi), wt * wp * st));
        }
    }
    Ok(out)
}

/// Octant rule reflected into all eight octants (`8·order²` nodes).
///
/// Integrands whose only non-smoothness lies on the coordinate planes (box,
/// superellipsoid support functions) converge spectrally; the reflection
/// makes the first-moment identity hold exactly by symmetry.
pub fn octant_rule<T: Real>(order: usize) -> Result<SphereQuadrature<T>> {
    if order == 0 {
        return Err(Error::InvalidOrder("octant rule order must be >= 1".into()));
    }
    let base = octant_nodes::<T>(order)?;
    let mut nodes = Vec::with_capacity(8 * base.len());
    let mut weights = Vec::with_capacity(8 * base.len());
    for mask in 0..8u8 {
        let signs = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
        for &(d, w) in &base {
            nodes.push(d.reflect(signs));
            weights.push(w);
        }
    }
    Ok(SphereQuadrature::from_parts(nodes, weights, 0, RuleFamily::Octant))
}

/// `∫_{S²} f dS ≈ Σ wᵢ f(nodeᵢ)`.
///
/// Node evaluations run in parallel; the accumulation is sequential and
/// compensated, so the result does not depend on the worker count.
pub fn integrate_sphere<T, F>(f: F, rule: &SphereQuadrature<T>) -> Result<T>
where
    T: Real,
    F: Fn(UnitDirection<T>) -> T + Sync,
{
    try_integrate_sphere(|w| Ok(f(w)), rule)
}

/// As [`integrate_sphere`] for fallible integrands.
pub fn try_integrate_sphere<T, F>(f: F, rule: &SphereQuadrature<T>) -> Result<T>
where
    T: Real,
    F: Fn(UnitDirection<T>) -> Result<T> + Sync,
{
    let values: Vec<T> = rule
        .nodes
        .par_iter()
        .with_min_len(256)
        .map(|&w| f(w))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::default();
    for ((v, w), node) in values.into_iter().zip(&rule.weights).zip(&rule.nodes) {
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                node: node.vec().to_f64(),
            });
        }
        acc.add(*w * v);
    }
    Ok(acc.value())
}

/// `8·∫_{octant} f dS` for integrands invariant under coordinate sign flips.
pub fn integrate_octant_symmetric<T, F>(f: F, order: usize) -> Result<T>
where
    T: Real,
    F: Fn(UnitDirection<T>) -> Result<T> + Sync,
{
    let base = octant_nodes::<T>(order)?;
    let values: Vec<T> = base
        .par_iter()
        .with_min_len(256)
        .map(|&(d, _)| f(d))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::default();
    for (v, (d, w)) in values.into_iter().zip(&base) {
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: d.vec().to_f64() });
        }
        acc.add(*w * v);
    }
    Ok(acc.value() * T::lit(8.0))
}

/// Volume integral over the pedal body of `body` with respect to `m`,
/// reduced to sphere × radial form:
/// `∫ g dy = ∫_{S²} ∫₀^{p_m(w)} g(m + ρw) ρ² dρ dS`.
///
/// The inner integral uses `radial_order` Gauss–Legendre nodes on `[0, p_m(w)]`.
pub fn integrate_radial_volume<T, G>(
    g: G,
    body: &ConvexBody<T>,
    m: Vec3<T>,
    rule: &SphereQuadrature<T>,
    radial_order: usize,
) -> Result<T>
where
    T: Real,
    G: Fn(Vec3<T>) -> T + Sync,
{
    let radial = GaussLegendre::<T>::new(radial_order)?;
    try_integrate_sphere(
        |w| {
            let p = body.support(m, w)?;
            let mut acc = CompensatedSum::default();
            for (rho, wr) in radial.on_interval(T::zero(), p) {
                let v = g(m + w.vec() * rho);
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand { node: w.vec().to_f64() });
                }
                acc.add(wr * v * rho * rho);
            }
            Ok(acc.value())
        },
        rule,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Shape;
    use std::f64::consts::PI;

    fn first_moments(rule: &SphereQuadrature<f64>) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (n, w) in rule.nodes().iter().zip(rule.weights()) {
            for (o, c) in out.iter_mut().zip(n.vec().to_array()) {
                *o += w * c;
            }
        }
        out
    }

    #[test]
    fn single_band_rule() {
        let r = sphere_rule::<f64>(1, 1).unwrap();
        assert!((r.total_weight() - 4.0 * PI).abs() < 1e-14);
        assert!(first_moments(&r)[2].abs() < 1e-14);
        assert_eq!(r.degree(), 0);
    }

    #[test]
    fn product_rule_invariants() {
        for (p, a) in [(2usize, 3usize), (5, 8), (32, 64), (17, 40)] {
            let r = sphere_rule::<f64>(p, a).unwrap();
            assert!((r.total_weight() / (4.0 * PI) - 1.0).abs() < 1e-12);
            for m in first_moments(&r) {
                assert!(m.abs() < 1e-12, "{p}x{a}: {m}");
            }
            let z2 = integrate_sphere(|w| w.vec().z * w.vec().z, &r).unwrap();
            assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn abs_z_is_integrated_exactly() {
        let r = sphere_rule::<f64>(32, 64).unwrap();
        let v = integrate_sphere(|w| w.vec().z.abs(), &r).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn polynomial_exactness_matches_declared_degree() {
        // ∫ x²y²z² dS = 4π/105, a degree-6 polynomial
        let r = sphere_rule::<f64>(4, 7).unwrap();
        assert_eq!(r.degree(), 6);
        let v = integrate_sphere(|w| (w.vec().x * w.vec().y * w.vec().z).powi(2), &r).unwrap();
        assert!((v - 4.0 * PI / 105.0).abs() < 1e-14);
    }

    #[test]
    fn cube_support_integrand_gives_six_pi() {
        let r = octant_rule::<f64>(24).unwrap();
        let v = integrate_sphere(|w| w.vec().abs().dot(Vec3::splat(1.0)), &r).unwrap();
        assert!((v - 6.0 * PI).abs() < 1e-6);
        assert!((v - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn superellipsoid_integrand_table_value() {
        let q = 100.0 / 99.0;
        let f = |w: UnitDirection<f64>| {
            let a = w.vec().abs();
            (a.x.powf(q) + a.y.powf(q) + a.z.powf(q)).powf(1.0 / q)
        };
        let v = integrate_octant_symmetric(|w| Ok(f(w)), 128).unwrap();
        assert!((v - 18.6792).abs() < 1e-3, "{v}");
        let full = integrate_sphere(f, &octant_rule(128).unwrap()).unwrap();
        assert!((full - v).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let r = sphere_rule::<f64>(2, 4).unwrap();
        let err = integrate_sphere(|w| if w.vec().z > 0.0 { f64::NAN } else { 1.0 }, &r);
        assert!(matches!(err, Err(Error::NonFiniteIntegrand { .. })));
        assert!(sphere_rule::<f64>(0, 4).is_err());
    }

    #[test]
    fn radial_volume_of_sphere() {
        let body = ConvexBody::centered(Shape::sphere(1.0)).unwrap();
        let rule = sphere_rule::<f64>(16, 32).unwrap();
        let o = Vec3::zero();
        let vol = integrate_radial_volume(|_| 1.0, &body, o, &rule, 8).unwrap();
        assert!((vol - 4.0 * PI / 3.0).abs() < 1e-10);
        let m = integrate_radial_volume(|y| 1.0 / y.norm_squared(), &body, o, &rule, 8).unwrap();
        assert!((m - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn radial_cube_mean_curvature() {
        let body = ConvexBody::centered(Shape::cube(1.0)).unwrap();
        let rule = octant_rule::<f64>(32).unwrap();
        let v = integrate_radial_volume(|y| 1.0 / y.norm_squared(), &body, Vec3::zero(), &rule, 8).unwrap();
        assert!((v - 6.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
