//! Convex bodies described by their support functions.
//!
//! Every curvature method in the crate consumes a [`ConvexBody`] only through
//! [`ConvexBody::support`] and the derived pedal-surface queries, so adding a
//! shape means adding a support function.

use std::borrow::Cow;
use std::sync::Arc;

use crate::directions::{cube_net26, lat_long_net};
use crate::error::{Error, Result};
use crate::polytope::ConvexPolytope;
use crate::scalar::Real;
use crate::vec3::Vec3;

/// A point of the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitDirection<T>(Vec3<T>);

impl<T: Real> UnitDirection<T> {
    /// Normalizes `v`; rejects the zero vector.
    pub fn new(v: Vec3<T>) -> Result<Self> {
        v.normalized().map(Self).ok_or(Error::ZeroDirection)
    }

    pub fn from_components(x: T, y: T, z: T) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn spherical(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(Vec3::new(st * cp, st * sp, ct))
    }

    /// Wraps a vector the caller knows to be unit length.
    pub(crate) fn assume_unit(v: Vec3<T>) -> Self {
        Self(v)
    }

    #[inline]
    pub fn vec(self) -> Vec3<T> {
        self.0
    }

    #[inline]
    pub fn dot(self, v: Vec3<T>) -> T {
        self.0.dot(v)
    }

    #[inline]
    pub fn reflect(self, signs: [bool; 3]) -> Self {
        let f = |c: T, s: bool| if s { -c } else { c };
        Self(Vec3::new(
            f(self.0.x, signs[0]),
            f(self.0.y, signs[1]),
            f(self.0.z, signs[2]),
        ))
    }
}

/// Shape catalog. Geometry is given in world coordinates; the reference
/// center used for support values is supplied separately.
#[derive(Clone, Debug)]
pub enum Shape<T> {
    Sphere {
        radius: T,
    },
    Ellipsoid {
        semi_axes: [T; 3],
    },
    /// Axis-aligned box with the given half-extents.
    Box {
        half_extents: [T; 3],
    },
    /// `|x|^n + |y|^n + |z|^n = m^n` for even `n`.
    Superellipsoid {
        exponent: u32,
        half_side: T,
    },
    /// Polytope with known face structure.
    Polytope(Arc<ConvexPolytope<T>>),
    /// Convex hull of a vertex list, support only.
    VertexHull(Arc<[Vec3<T>]>),
    MinkowskiSum(Box<Shape<T>>, Box<Shape<T>>),
    Translate(Box<Shape<T>>, Vec3<T>),
}

impl<T: Real> Shape<T> {
    pub fn sphere(radius: T) -> Self {
        Shape::Sphere { radius }
    }

    pub fn ellipsoid(a: T, b: T, c: T) -> Self {
        Shape::Ellipsoid { semi_axes: [a, b, c] }
    }

    pub fn cuboid(a: T, b: T, c: T) -> Self {
        Shape::Box {
            half_extents: [a, b, c],
        }
    }

    pub fn cube(half_side: T) -> Self {
        Self::cuboid(half_side, half_side, half_side)
    }

    pub fn superellipsoid(exponent: u32, half_side: T) -> Self {
        Shape::Superellipsoid { exponent, half_side }
    }

    pub fn minkowski_sum(a: Shape<T>, b: Shape<T>) -> Self {
        Shape::MinkowskiSum(Box::new(a), Box::new(b))
    }

    pub fn translate(self, offset: Vec3<T>) -> Self {
        Shape::Translate(Box::new(self), offset)
    }

    /// Checks catalog parameters (positivity, even exponent).
    pub fn validate(&self) -> Result<()> {
        let positive = |v: T, what: &str| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidShape(format!(
                    "{what} must be positive and finite, got {v}"
                )))
            }
        };
        match self {
            Shape::Sphere { radius } => positive(*radius, "radius"),
            Shape::Ellipsoid { semi_axes } => semi_axes.iter().try_for_each(|&a| positive(a, "semi-axis")),
            Shape::Box { half_extents } => half_extents.iter().try_for_each(|&a| positive(a, "half-extent")),
            Shape::Superellipsoid { exponent, half_side } => {
                if *exponent < 2 || exponent % 2 != 0 {
                    return Err(Error::OddExponent(*exponent));
                }
                positive(*half_side, "half-side")
            }
            Shape::Polytope(_) => Ok(()),
            Shape::VertexHull(v) => {
                if v.len() < 4 {
                    return Err(Error::InvalidShape("vertex hull needs at least 4 vertices".into()));
                }
                if v.iter().all(|p| p.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidShape("vertex coordinates must be finite".into()))
                }
            }
            Shape::MinkowskiSum(a, b) => a.validate().and_then(|_| b.validate()),
            Shape::Translate(s, t) => {
                if !t.is_finite() {
                    return Err(Error::InvalidShape("translation must be finite".into()));
                }
                s.validate()
            }
        }
    }

    /// Support value `max ⟨x, w⟩` over the shape, relative to the origin.
    pub fn support_origin(&self, w: Vec3<T>) -> T {
        match self {
            Shape::Sphere { radius } => *radius,
            Shape::Ellipsoid { semi_axes: [a, b, c] } => Vec3::new(*a * w.x, *b * w.y, *c * w.z).norm(),
            Shape::Box {
                half_extents: [a, b, c],
            } => *a * w.x.abs() + *b * w.y.abs() + *c * w.z.abs(),
            Shape::Superellipsoid { exponent, half_side } => *half_side * dual_norm(w, *exponent),
            Shape::Polytope(p) => p.support_origin(w),
            Shape::VertexHull(v) => max_dot(v, w),
            Shape::MinkowskiSum(a, b) => a.support_origin(w) + b.support_origin(w),
            Shape::Translate(s, t) => s.support_origin(w) + t.dot(w),
        }
    }

    /// Upper bound on `‖x‖` over all points `x` of the shape.
    pub fn extent_bound(&self) -> T {
        match self {
            Shape::Sphere { radius } => *radius,
            Shape::Ellipsoid { semi_axes: [a, b, c] } => a.max(*b).max(*c),
            Shape::Box {
                half_extents: [a, b, c],
            } => Vec3::new(*a, *b, *c).norm(),
            Shape::Superellipsoid { exponent, half_side } => {
                // attained on the diagonal: m·3^(1/2 − 1/n)
                let e = T::lit(0.5) - T::one() / T::lit(f64::from(*exponent));
                *half_side * T::lit(3.0).powf(e)
            }
            Shape::Polytope(p) => p.vertices().iter().map(|v| v.norm()).fold(T::zero(), T::max),
            Shape::VertexHull(v) => v.iter().map(|p| p.norm()).fold(T::zero(), T::max),
            Shape::MinkowskiSum(a, b) => a.extent_bound() + b.extent_bound(),
            Shape::Translate(s, t) => s.extent_bound() + t.norm(),
        }
    }

    /// The shape scaled by `lambda` about the origin.
    pub fn scaled(&self, lambda: T) -> Self {
        match self {
            Shape::Sphere { radius } => Shape::Sphere {
                radius: *radius * lambda,
            },
            Shape::Ellipsoid { semi_axes } => Shape::Ellipsoid {
                semi_axes: semi_axes.map(|a| a * lambda),
            },
            Shape::Box { half_extents } => Shape::Box {
                half_extents: half_extents.map(|a| a * lambda),
            },
            Shape::Superellipsoid { exponent, half_side } => Shape::Superellipsoid {
                exponent: *exponent,
                half_side: *half_side * lambda,
            },
            Shape::Polytope(p) => Shape::Polytope(Arc::new(p.scaled(lambda))),
            Shape::VertexHull(v) => Shape::VertexHull(v.iter().map(|p| *p * lambda).collect()),
            Shape::MinkowskiSum(a, b) => Shape::MinkowskiSum(Box::new(a.scaled(lambda)), Box::new(b.scaled(lambda))),
            Shape::Translate(s, t) => Shape::Translate(Box::new(s.scaled(lambda)), *t * lambda),
        }
    }

    /// True when the support function is invariant under every coordinate
    /// sign flip, so sphere integrals may be taken over one octant.
    pub fn is_octant_symmetric(&self) -> bool {
        match self {
            Shape::Sphere { .. } | Shape::Ellipsoid { .. } | Shape::Box { .. } | Shape::Superellipsoid { .. } => true,
            Shape::MinkowskiSum(a, b) => a.is_octant_symmetric() && b.is_octant_symmetric(),
            Shape::Polytope(_) | Shape::VertexHull(_) | Shape::Translate(..) => false,
        }
    }

    /// The polytope backing this shape, if its support function is
    /// piecewise linear with a known normal fan.
    pub fn polytope(&self) -> Option<(&ConvexPolytope<T>, Vec3<T>)> {
        match self {
            Shape::Polytope(p) => Some((p, Vec3::zero())),
            Shape::Translate(s, t) => s.polytope().map(|(p, o)| (p, o + *t)),
            _ => None,
        }
    }

    /// The polytope this shape equals up to translation, including boxes.
    pub fn edge_polytope(&self) -> Option<Cow<'_, ConvexPolytope<T>>> {
        match self {
            Shape::Polytope(p) => Some(Cow::Borrowed(p)),
            Shape::Box { half_extents } => Some(Cow::Owned(ConvexPolytope::cuboid(*half_extents))),
            Shape::Translate(s, _) => s.edge_polytope(),
            _ => None,
        }
    }

    /// Boundary point hit by the ray `m + t·d` (`t > 0`) and the outward unit
    /// normal there. `m` must be interior. `None` for shapes without an
    /// explicit boundary description.
    pub fn boundary_hit(&self, m: Vec3<T>, d: Vec3<T>) -> Option<(Vec3<T>, Vec3<T>)> {
        let d = d.normalized()?;
        match self {
            Shape::Sphere { radius } => {
                // |m + t d|² = r²
                let b = m.dot(d);
                let c = m.norm_squared() - *radius * *radius;
                let t = -b + (b * b - c).sqrt();
                let x = m + d * t;
                Some((x, x.normalized()?))
            }
            Shape::Ellipsoid { semi_axes: [a, b, c] } => {
                let inv = Vec3::new(a.recip(), b.recip(), c.recip());
                let ms = Vec3::new(m.x * inv.x, m.y * inv.y, m.z * inv.z);
                let ds = Vec3::new(d.x * inv.x, d.y * inv.y, d.z * inv.z);
                let qa = ds.norm_squared();
                let qb = ms.dot(ds);
                let qc = ms.norm_squared() - T::one();
                let t = (-qb + (qb * qb - qa * qc).sqrt()) / qa;
                let x = m + d * t;
                let g = Vec3::new(x.x * inv.x * inv.x, x.y * inv.y * inv.y, x.z * inv.z * inv.z);
                Some((x, g.normalized()?))
            }
            Shape::Box { half_extents } => {
                let mut best = (T::infinity(), 0usize);
                for (i, (&h, (&mi, &di))) in half_extents
                    .iter()
                    .zip(m.to_array().iter().zip(d.to_array().iter()))
                    .enumerate()
                {
                    if di != T::zero() {
                        let wall = if di > T::zero() { h } else { -h };
                        let t = (wall - mi) / di;
                        if t < best.0 {
                            best = (t, i);
                        }
                    }
                }
                let x = m + d * best.0;
                let mut n = [T::zero(); 3];
                n[best.1] = d.to_array()[best.1].signum();
                Some((x, Vec3::from_array(n)))
            }
            Shape::Superellipsoid { exponent, half_side } => {
                let n = *exponent as i32;
                let level =
                    |x: Vec3<T>| (x.x / *half_side).powi(n) + (x.y / *half_side).powi(n) + (x.z / *half_side).powi(n);
                // bracket, then bisect; the level set is convex and m interior
                let mut hi = self.extent_bound() + m.norm();
                let mut lo = T::zero();
                for _ in 0..200 {
                    let mid = (lo + hi) * T::lit(0.5);
                    if level(m + d * mid) < T::one() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= T::epsilon() * hi {
                        break;
                    }
                }
                let x = m + d * ((lo + hi) * T::lit(0.5));
                // gradient direction x_i^(n-1), rescaled to avoid underflow
                let s = x.abs().max_component();
                let g = (x / s).map(|c| c.powi(n - 1));
                Some((x, g.normalized()?))
            }
            Shape::Polytope(p) => p.boundary_hit(m, d),
            Shape::Translate(s, t) => s.boundary_hit(m - *t, d).map(|(x, n)| (x + *t, n)),
            Shape::VertexHull(_) | Shape::MinkowskiSum(..) => None,
        }
    }
}

/// `‖w‖_q` with `q = n/(n−1)`, the support function of the unit `ℓ_n` ball.
pub fn dual_norm<T: Real>(w: Vec3<T>, exponent: u32) -> T {
    let a = w.abs();
    let mx = a.max_component();
    if mx == T::zero() {
        return T::zero();
    }
    if exponent == 2 {
        return w.norm();
    }
    let nf = T::lit(f64::from(exponent));
    let q = nf / (nf - T::one());
    let s = (a.x / mx).powf(q) + (a.y / mx).powf(q) + (a.z / mx).powf(q);
    mx * s.powf(q.recip())
}

fn max_dot<T: Real>(v: &[Vec3<T>], w: Vec3<T>) -> T {
    v.iter().map(|p| p.dot(w)).fold(T::neg_infinity(), T::max)
}

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn from_center(center: Vec3<T>, half: Vec3<T>) -> Self {
        Self {
            min: center - half,
            max: center + half,
        }
    }

    pub fn volume(&self) -> T {
        let d = self.max - self.min;
        d.x * d.y * d.z
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

/// A convex body: a shape together with its default reference center `m`.
#[derive(Clone, Debug)]
pub struct ConvexBody<T> {
    shape: Shape<T>,
    center: Vec3<T>,
}

impl<T: Real> ConvexBody<T> {
    /// Validates the shape and checks `support > 0` from `center` on the
    /// 26-direction cube net.
    pub fn new(shape: Shape<T>, center: Vec3<T>) -> Result<Self> {
        shape.validate()?;
        if !center.is_finite() {
            return Err(Error::InvalidShape("reference center must be finite".into()));
        }
        let body = Self { shape, center };
        for w in cube_net26::<T>() {
            body.support(center, w)?;
        }
        Ok(body)
    }

    /// Body with reference center at the origin.
    pub fn centered(shape: Shape<T>) -> Result<Self> {
        Self::new(shape, Vec3::zero())
    }

    pub fn shape(&self) -> &Shape<T> {
        &self.shape
    }

    pub fn center(&self) -> Vec3<T> {
        self.center
    }

    pub fn with_center(&self, center: Vec3<T>) -> Result<Self> {
        Self::new(self.shape.clone(), center)
    }

    /// Same shape scaled by `lambda`; the reference center scales with it.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        Self::new(self.shape.scaled(lambda), self.center * lambda)
    }

    /// `p_m(w) = p_o(w) − ⟨m, w⟩`.
    pub fn support(&self, m: Vec3<T>, w: UnitDirection<T>) -> Result<T> {
        let value = self.raw_support(m, w);
        if value > T::zero() {
            Ok(value)
        } else {
            Err(Error::NonPositiveSupport {
                value: value.as_f64(),
                direction: w.vec().to_f64(),
            })
        }
    }

    #[inline]
    pub(crate) fn raw_support(&self, m: Vec3<T>, w: UnitDirection<T>) -> T {
        self.shape.support_origin(w.vec()) - m.dot(w.vec())
    }

    /// `p_m(w)·w + m`, a point of the pedal surface with respect to `m`.
    pub fn pedal_point(&self, m: Vec3<T>, w: UnitDirection<T>) -> Result<Vec3<T>> {
        Ok(w.vec() * self.support(m, w)? + m)
    }

    /// Membership in the pedal body, which is star-shaped about `m`.
    pub fn contains_pedal(&self, m: Vec3<T>, y: Vec3<T>) -> bool {
        let d = y - m;
        let r = d.norm();
        if r == T::zero() {
            return true;
        }
        let w = UnitDirection::assume_unit(d / r);
        r < self.raw_support(m, w)
    }

    /// Upper bound on `p_m(w)` over all directions.
    pub fn radius_bound(&self, m: Vec3<T>) -> T {
        self.shape.extent_bound() + m.norm()
    }

    /// A box guaranteed to contain the pedal body with respect to `m`.
    ///
    /// Per-axis extents come from a direction net, padded by the Lipschitz
    /// constant of `w ↦ p_m(w)·w_i` times the net's covering radius, and capped
    /// by the global radius bound.
    pub fn bounding_box(&self, m: Vec3<T>) -> Aabb<T> {
        let r = self.radius_bound(m);
        let (net, cover) = lat_long_net::<T>(256, 512);
        let mut lo = Vec3::splat(T::zero());
        let mut hi = Vec3::splat(T::zero());
        for w in net {
            let p = self.raw_support(m, w).max(T::zero());
            let q = w.vec() * p;
            lo = Vec3::new(lo.x.min(q.x), lo.y.min(q.y), lo.z.min(q.z));
            hi = Vec3::new(hi.x.max(q.x), hi.y.max(q.y), hi.z.max(q.z));
        }
        let slack = T::lit(2.0) * r * cover;
        let pad = |v: T| (v.abs() + slack).min(r);
        Aabb {
            min: m - lo.map(pad),
            max: m + hi.map(pad),
        }
    }

    /// Minimum of `p_m` over a fine direction net (an upper estimate of the
    /// true minimum).
    pub fn min_support(&self, m: Vec3<T>) -> T {
        let (net, _) = lat_long_net::<T>(128, 256);
        net.into_iter()
            .map(|w| self.raw_support(m, w))
            .fold(T::infinity(), T::min)
    }
}
