use std::cmp::Ordering;

use serde::Serialize;

use crate::bodies::{ConvexBody, UnitDirection};
use crate::directions::icosphere;
use crate::error::{Error, Result};
use crate::polytope::tangent_basis;
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Support values above this are treated as an unbounded body.
pub const SUPPORT_CAP: f64 = 1e12;

const NET_LEVEL: u32 = 4;
const MAX_CANDIDATES: usize = 12;
/// Minimum angle (radians) between refined candidate directions.
const CANDIDATE_SEPARATION: f64 = 0.3;
const RESTARTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InscribedSphere<T> {
    pub radius: T,
    pub center: Vec3<T>,
}

struct DistanceField<'a, T> {
    body: &'a ConvexBody<T>,
    net: Vec<(UnitDirection<T>, T)>,
    /// Lipschitz slack of the net: values above `net_min + slack` cannot
    /// hide the true minimum.
    slack_per_unit: T,
}

impl<'a, T: Real> DistanceField<'a, T> {
    fn new(body: &'a ConvexBody<T>) -> Result<Self> {
        let cap = T::lit(SUPPORT_CAP);
        let dirs = icosphere::<T>(NET_LEVEL);
        let net = dirs
            .into_iter()
            .map(|w| {
                let h = body.shape().support_origin(w.vec());
                if !(h.abs() <= cap) {
                    return Err(Error::Unbounded {
                        value: h.as_f64(),
                        cap: SUPPORT_CAP,
                    });
                }
                Ok((w, h))
            })
            .collect::<Result<Vec<_>>>()?;
        // level-4 icosphere edges are below 0.08 rad
        Ok(Self {
            body,
            net,
            slack_per_unit: T::lit(0.08),
        })
    }

    fn p(&self, m: Vec3<T>, w: Vec3<T>) -> T {
        self.body.shape().support_origin(w) - m.dot(w)
    }

    /// `min_w p_m(w)`: the distance from `m` to the boundary when `m` is
    /// interior, negative outside.
    fn radius_at(&self, m: Vec3<T>) -> T {
        let mut scored: Vec<(T, Vec3<T>)> = self.net.iter().map(|&(w, h)| (h - m.dot(w.vec()), w.vec())).collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let lipschitz = self.body.shape().extent_bound() + m.norm();
        let cutoff = scored[0].0 + T::lit(2.0) * lipschitz * self.slack_per_unit;
        let min_cos = T::lit(CANDIDATE_SEPARATION.cos());
        let mut picked: Vec<Vec3<T>> = Vec::with_capacity(MAX_CANDIDATES);
        for &(v, w) in &scored {
            if v > cutoff || picked.len() == MAX_CANDIDATES {
                break;
            }
            if picked.iter().all(|q| q.dot(w) < min_cos) {
                picked.push(w);
            }
        }
        picked
            .into_iter()
            .map(|w| self.refine_direction(m, w))
            .fold(T::infinity(), T::min)
    }

    /// Local minimum of `p_m` near `w`, by Nelder–Mead in gnomonic
    /// coordinates about `w`.
    fn refine_direction(&self, m: Vec3<T>, w: Vec3<T>) -> T {
        let (e1, e2) = tangent_basis(w);
        let f = |x: [T; 2]| {
            let d = (w + e1 * x[0] + e2 * x[1]).normalized().expect("near a unit vector");
            self.p(m, d)
        };
        let (_, v) = nelder_mead(&f, [T::zero(); 2], T::lit(0.05), T::lit(1e-12), 2000);
        v
    }
}

/// Largest ball inside `body`, by Nelder–Mead over the center `m` of
/// `R(m) = min_w p_m(w)`, restarted from the best vertex until the simplex
/// shrinks below `tol`.
pub fn inscribed_sphere<T: Real>(body: &ConvexBody<T>, tol: T) -> Result<InscribedSphere<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidOrder(format!(
            "inscribed-sphere tolerance {tol} must be > 0"
        )));
    }
    let field = DistanceField::new(body)?;
    let mut start = Vec3::zero();
    for &(w, h) in &field.net {
        start += w.vec() * h;
    }
    start = start / T::count(field.net.len());
    if field.radius_at(start) <= T::zero() {
        start = body.center();
    }

    let objective = |x: [T; 3]| -field.radius_at(Vec3::from_array(x));
    let mut center = start.to_array();
    let mut value = objective(center);
    let mut size = T::lit(0.25) * body.shape().extent_bound();
    for _ in 0..RESTARTS {
        let (c, v) = nelder_mead(&objective, center, size, tol, 5000);
        let improved = value - v;
        center = c;
        value = v;
        if improved <= tol * T::lit(1e-3) && size <= T::lit(10.0) * tol {
            break;
        }
        size = (tol * T::lit(100.0)).max(size * T::lit(0.1));
    }
    Ok(InscribedSphere {
        radius: -value,
        center: Vec3::from_array(center),
    })
}

/// Minimizes `f` from an axis-aligned simplex of edge `size`. Stops when
/// the simplex diameter drops below `xtol` or its values agree to rounding.
fn nelder_mead<T: Real, const N: usize>(
    f: &impl Fn([T; N]) -> T,
    x0: [T; N],
    size: T,
    xtol: T,
    max_iter: usize,
) -> ([T; N], T) {
    let mut simplex: Vec<([T; N], T)> = Vec::with_capacity(N + 1);
    simplex.push((x0, f(x0)));
    for axis in 0..N {
        let mut p = x0;
        p[axis] = p[axis] + size;
        simplex.push((p, f(p)));
    }
    let half = T::lit(0.5);
    let lerp = |a: &[T; N], b: &[T; N], t: T| -> [T; N] { std::array::from_fn(|i| a[i] + (b[i] - a[i]) * t) };
    let ftol = T::lit(4.0) * T::epsilon();
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
        let best = simplex[0];
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(&best.0)
                    .map(|(a, b)| (*a - *b).abs())
                    .fold(T::zero(), T::max)
            })
            .fold(T::zero(), T::max);
        let spread = simplex[N].1 - best.1;
        if diameter < xtol || spread <= ftol * best.1.abs().max(T::one()) {
            break;
        }
        let centroid: [T; N] =
            std::array::from_fn(|i| simplex[..N].iter().map(|(p, _)| p[i]).fold(T::zero(), |a, b| a + b) / T::count(N));
        let (worst, fw) = simplex[N];
        let reflected = lerp(&centroid, &worst, -T::one());
        let fr = f(reflected);
        if fr < best.1 {
            let expanded = lerp(&centroid, &worst, -T::lit(2.0));
            let fe = f(expanded);
            simplex[N] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
        } else {
            let contracted = if fr < fw {
                lerp(&centroid, &reflected, half)
            } else {
                lerp(&centroid, &worst, half)
            };
            let fc = f(contracted);
            if fc < fw.min(fr) {
                simplex[N] = (contracted, fc);
            } else {
                for s in simplex.iter_mut().skip(1) {
                    let p = lerp(&best.0, &s.0, half);
                    *s = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
    simplex[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Shape;

    fn solve(shape: Shape<f64>) -> InscribedSphere<f64> {
        inscribed_sphere(&ConvexBody::centered(shape).unwrap(), 1e-7).unwrap()
    }

    #[test]
    fn cube_and_ellipsoid() {
        let c = solve(Shape::cube(1.0));
        assert!((c.radius - 1.0).abs() < 1e-7, "{c:?}");
        assert!(c.center.norm() < 1e-6);
        let e = solve(Shape::ellipsoid(2.0, 1.5, 1.0));
        assert!((e.radius - 1.0).abs() < 1e-7, "{e:?}");
        assert!(e.center.norm() < 1e-5);
    }

    #[test]
    fn sphere_is_exact() {
        let s = solve(Shape::sphere(1.0));
        assert!((s.radius - 1.0).abs() < 1e-9, "{s:?}");
    }

    #[test]
    fn translated_box_finds_shifted_center() {
        let s = solve(Shape::cuboid(1.0, 2.0, 3.0).translate(Vec3::new(0.3, 0.0, -0.2)));
        assert!((s.radius - 1.0).abs() < 1e-7, "{s:?}");
        assert!((s.center.x - 0.3).abs() < 1e-6);
    }

    #[test]
    fn tetrahedron_inradius() {
        let s = solve(Shape::Polytope(std::sync::Arc::new(
            crate::polytope::ConvexPolytope::regular_tetrahedron(1.0),
        )));
        let exact = 1.0 / (2.0 * 6f64.sqrt());
        assert!((s.radius - exact).abs() < 1e-7, "{s:?} vs {exact}");
        assert!(s.center.norm() < 1e-6);
    }

    #[test]
    fn huge_support_is_unbounded() {
        let b = ConvexBody::centered(Shape::sphere(1e13)).unwrap();
        assert!(matches!(inscribed_sphere(&b, 1e-3), Err(Error::Unbounded { .. })));
    }
}
