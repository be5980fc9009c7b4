//! Named test bodies shared by the identity suite, the CLI and the tests.

use std::sync::Arc;

use crate::bodies::{ConvexBody, Shape};
use crate::error::Result;
use crate::polytope::ConvexPolytope;
use crate::scalar::Real;
use crate::surface::SmoothSurfacePatch;
use crate::vec3::Vec3;

#[derive(Clone, Debug)]
pub struct CatalogEntry<T> {
    /// Inline shape spec, e.g. `ellipsoid:2,1.5,1`.
    pub name: String,
    pub body: ConvexBody<T>,
}

impl<T: Real> CatalogEntry<T> {
    pub fn new(name: impl Into<String>, body: ConvexBody<T>) -> Self {
        Self {
            name: name.into(),
            body,
        }
    }

    /// Closed surface chart, when the body is a smooth catalog shape.
    pub fn patch(&self) -> Option<SmoothSurfacePatch<T>> {
        SmoothSurfacePatch::for_shape(self.body.shape()).ok()
    }

    /// A reference center other than the default one, still well inside.
    pub fn shifted_center(&self) -> Vec3<T> {
        let m = self.body.center();
        let r = self.body.min_support(m);
        let d = Vec3::new(T::one(), T::lit(-0.5), T::lit(0.25));
        m + d * (T::lit(0.5) * r / d.norm())
    }
}

fn entry<T: Real>(name: &str, shape: Shape<T>, center: Vec3<T>) -> Result<CatalogEntry<T>> {
    Ok(CatalogEntry::new(name, ConvexBody::new(shape, center)?))
}

/// The default catalog.
pub fn catalog<T: Real>() -> Result<Vec<CatalogEntry<T>>> {
    let l = T::lit;
    let o = Vec3::zero();
    let shift = Vec3::new(l(0.5), l(-1.0), l(0.25));
    Ok(vec![
        entry("sphere:r=1", Shape::sphere(l(1.0)), o)?,
        entry("ellipsoid:2,1.5,1", Shape::ellipsoid(l(2.0), l(1.5), l(1.0)), o)?,
        entry("ellipsoid:2,1,1", Shape::ellipsoid(l(2.0), l(1.0), l(1.0)), o)?,
        entry("cube:1", Shape::cube(l(1.0)), o)?,
        entry("box:1,2,3", Shape::cuboid(l(1.0), l(2.0), l(3.0)), o)?,
        entry("superellipsoid:n=4", Shape::superellipsoid(4, l(1.0)), o)?,
        entry("superellipsoid:n=6", Shape::superellipsoid(6, l(1.0)), o)?,
        entry("superellipsoid:n=100", Shape::superellipsoid(100, l(1.0)), o)?,
        entry(
            "tetrahedron:1",
            Shape::Polytope(Arc::new(ConvexPolytope::regular_tetrahedron(l(1.0)))),
            o,
        )?,
        entry(
            "sum:sphere:r=0.5+cube:0.5",
            Shape::minkowski_sum(Shape::sphere(l(0.5)), Shape::cube(l(0.5))),
            o,
        )?,
        entry(
            "ellipsoid:2,1,1@0.5,-1,0.25",
            Shape::ellipsoid(l(2.0), l(1.0), l(1.0)).translate(shift),
            shift,
        )?,
    ])
}

/// Pairs `(inner, outer)` of catalog names with `inner ⊆ outer`.
pub const INCLUSIONS: [(&str, &str); 6] = [
    ("sphere:r=1", "cube:1"),
    ("sphere:r=1", "superellipsoid:n=4"),
    ("superellipsoid:n=4", "superellipsoid:n=6"),
    ("superellipsoid:n=100", "cube:1"),
    ("ellipsoid:2,1,1", "ellipsoid:2,1.5,1"),
    ("sum:sphere:r=0.5+cube:0.5", "cube:1"),
];
