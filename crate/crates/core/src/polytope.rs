//! Convex polytopes with face structure, edge lengths and dihedral angles.

use std::collections::BTreeMap;

use crate::bodies::UnitDirection;
use crate::error::{Error, Result};
use crate::quadrature::{GaussLegendre, RuleFamily, SphereQuadrature};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Default relative tolerance (times the bounding-box diagonal) for planarity
/// and convexity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
    pub length: T,
    /// Interior angle between the two faces, in `(0, π]`.
    pub dihedral: T,
}

#[derive(Clone, Debug)]
pub struct ConvexPolytope<T> {
    vertices: Vec<Vec3<T>>,
    faces: Vec<Vec<usize>>,
    normals: Vec<Vec3<T>>,
    offsets: Vec<T>,
    edges: Vec<Edge<T>>,
}

impl<T: Real> ConvexPolytope<T> {
    /// Builds and validates a polytope from vertex positions and face loops.
    ///
    /// Faces are rewound to outward orientation. Fails on out-of-range
    /// indices, non-manifold edges, non-convex configurations and non-planar
    /// faces, in that order.
    pub fn from_faces(vertices: Vec<Vec3<T>>, faces: Vec<Vec<usize>>, rel_tol: T) -> Result<Self> {
        let nv = vertices.len();
        if nv < 4 || faces.len() < 4 {
            return Err(Error::InvalidShape(format!(
                "polytope needs at least 4 vertices and 4 faces, got {nv} and {}",
                faces.len()
            )));
        }
        for (fi, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(Error::InvalidShape(format!("face {fi} has fewer than 3 vertices")));
            }
            for (k, &i) in f.iter().enumerate() {
                if i >= nv {
                    return Err(Error::IndexOutOfRange {
                        face: fi,
                        index: i,
                        vertex_count: nv,
                    });
                }
                if f[..k].contains(&i) {
                    return Err(Error::InvalidShape(format!("face {fi} repeats vertex {i}")));
                }
            }
        }

        let mut lo = vertices[0];
        let mut hi = vertices[0];
        for v in &vertices {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        let diameter = (hi - lo).norm();
        let tol = rel_tol * diameter;
        let centroid = vertices.iter().fold(Vec3::zero(), |acc, v| acc + *v) / T::count(nv);

        let mut faces = faces;
        let mut normals = Vec::with_capacity(faces.len());
        let mut offsets = Vec::with_capacity(faces.len());
        for (fi, face) in faces.iter_mut().enumerate() {
            let n = newell_normal(&vertices, face);
            let fc = face.iter().fold(Vec3::zero(), |acc, &i| acc + vertices[i]) / T::count(face.len());
            let mut n = n
                .normalized()
                .ok_or_else(|| Error::InvalidShape(format!("face {fi} has zero area")))?;
            if n.dot(fc - centroid) < T::zero() {
                face.reverse();
                n = -n;
            }
            normals.push(n);
            offsets.push(n.dot(fc));
        }

        let mut incidence: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, face) in faces.iter().enumerate() {
            for k in 0..face.len() {
                let (a, b) = (face[k], face[(k + 1) % face.len()]);
                incidence.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        for (&(a, b), fs) in &incidence {
            if fs.len() != 2 {
                return Err(Error::NonManifoldEdge { a, b, count: fs.len() });
            }
        }

        // Each corner of each face spans a plane the whole vertex set must lie
        // below; this also rejects reflex corners inside a face.
        for (fi, face) in faces.iter().enumerate() {
            let k = face.len();
            for c in 0..k {
                let prev = vertices[face[(c + k - 1) % k]];
                let cur = vertices[face[c]];
                let next = vertices[face[(c + 1) % k]];
                let cross = (cur - prev).cross(next - cur);
                let len = cross.norm();
                if len <= tol * ((cur - prev).norm() + (next - cur).norm()) {
                    continue;
                }
                let cn = cross / len;
                for (vi, v) in vertices.iter().enumerate() {
                    let dist = cn.dot(*v - cur);
                    if dist > tol {
                        return Err(Error::NonConvexMesh {
                            face: fi,
                            vertex: vi,
                            distance: dist.as_f64(),
                        });
                    }
                }
            }
        }

        for (fi, face) in faces.iter().enumerate() {
            for &i in face {
                let dev = (normals[fi].dot(vertices[i]) - offsets[fi]).abs();
                if dev > tol {
                    return Err(Error::NonPlanarFace {
                        face: fi,
                        deviation: dev.as_f64(),
                    });
                }
            }
        }

        let mut edges = Vec::with_capacity(incidence.len());
        for (&(a, b), fs) in &incidence {
            let dot = normals[fs[0]].dot(normals[fs[1]]).max(-T::one()).min(T::one());
            edges.push(Edge {
                vertices: [a, b],
                faces: [fs[0], fs[1]],
                length: vertices[a].distance(vertices[b]),
                dihedral: T::PI() - dot.acos(),
            });
        }

        Ok(Self {
            vertices,
            faces,
            normals,
            offsets,
            edges,
        })
    }

    /// Axis-aligned box with the given half-extents, centered at the origin.
    pub fn cuboid(half: [T; 3]) -> Self {
        let [a, b, c] = half;
        let mut vertices = Vec::with_capacity(8);
        for i in 0..8 {
            let s = |bit: usize, h: T| if i & bit != 0 { h } else { -h };
            vertices.push(Vec3::new(s(1, a), s(2, b), s(4, c)));
        }
        let faces = vec![
            vec![0, 2, 6, 4],
            vec![1, 5, 7, 3],
            vec![0, 4, 5, 1],
            vec![2, 3, 7, 6],
            vec![0, 1, 3, 2],
            vec![4, 6, 7, 5],
        ];
        Self::from_faces(vertices, faces, T::lit(DEFAULT_TOLERANCE)).expect("box is a valid polytope")
    }

    /// Regular tetrahedron with the given edge length, centroid at the origin.
    pub fn regular_tetrahedron(edge: T) -> Self {
        let k = edge / (T::lit(2.0) * T::SQRT_2());
        let one = T::one();
        let vertices = vec![
            Vec3::new(one, one, one) * k,
            Vec3::new(one, -one, -one) * k,
            Vec3::new(-one, one, -one) * k,
            Vec3::new(-one, -one, one) * k,
        ];
        let faces = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        Self::from_faces(vertices, faces, T::lit(DEFAULT_TOLERANCE)).expect("tetrahedron is valid")
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_normals(&self) -> &[Vec3<T>] {
        &self.normals
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    /// `max_i ⟨v_i, w⟩`.
    pub fn support_origin(&self, w: Vec3<T>) -> T {
        self.vertices.iter().map(|v| v.dot(w)).fold(T::neg_infinity(), T::max)
    }

    pub fn scaled(&self, lambda: T) -> Self {
        let mut out = self.clone();
        for v in out.vertices.iter_mut() {
            *v = *v * lambda;
        }
        for o in out.offsets.iter_mut() {
            *o = *o * lambda;
        }
        for e in out.edges.iter_mut() {
            e.length = e.length * lambda;
        }
        out
    }

    pub(crate) fn boundary_hit(&self, m: Vec3<T>, d: Vec3<T>) -> Option<(Vec3<T>, Vec3<T>)> {
        let mut best: Option<(T, usize)> = None;
        for (fi, (n, off)) in self.normals.iter().zip(&self.offsets).enumerate() {
            let nd = n.dot(d);
            if nd > T::zero() {
                let t = (*off - n.dot(m)) / nd;
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, fi));
                }
            }
        }
        best.map(|(t, fi)| (m + d * t, self.normals[fi]))
    }

    /// A sphere rule adapted to this polytope's normal fan.
    ///
    /// The normal cone of each vertex is a convex spherical polygon on which
    /// the support function is linear; each cone is fanned into spherical
    /// triangles from its axis and every triangle gets a collapsed
    /// Gauss–Legendre rule of `order²` nodes.
    pub fn normal_fan_rule(&self, order: usize) -> Result<SphereQuadrature<T>> {
        if order == 0 {
            return Err(Error::InvalidOrder("normal fan rule order must be >= 1".into()));
        }
        let gl = GaussLegendre::<T>::new(order)?;
        let mut vertex_faces = vec![Vec::new(); self.vertices.len()];
        for (fi, face) in self.faces.iter().enumerate() {
            for &v in face {
                vertex_faces[v].push(fi);
            }
        }
        let dup = T::lit(1e-12);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for incident in vertex_faces {
            let mut corners: Vec<Vec3<T>> = Vec::new();
            for fi in incident {
                let n = self.normals[fi];
                if corners.iter().all(|c| c.distance(n) > dup) {
                    corners.push(n);
                }
            }
            if corners.len() < 3 {
                continue;
            }
            let axis = match corners.iter().fold(Vec3::zero(), |a, c| a + *c).normalized() {
                Some(a) => a,
                None => continue,
            };
            let (e1, e2) = tangent_basis(axis);
            corners.sort_by(|p, q| {
                let ap = p.dot(e2).atan2(p.dot(e1));
                let aq = q.dot(e2).atan2(q.dot(e1));
                ap.partial_cmp(&aq).unwrap_or(std::cmp::Ordering::Equal)
            });
            for k in 0..corners.len() {
                let (b, c) = (corners[k], corners[(k + 1) % corners.len()]);
                push_spherical_triangle(&gl, axis, b, c, &mut nodes, &mut weights);
            }
        }
        Ok(SphereQuadrature::from_parts(nodes, weights, 0, RuleFamily::NormalFan))
    }
}

fn newell_normal<T: Real>(vertices: &[Vec3<T>], face: &[usize]) -> Vec3<T> {
    let mut n = Vec3::zero();
    for k in 0..face.len() {
        let a = vertices[face[k]];
        let b = vertices[face[(k + 1) % face.len()]];
        n += Vec3::new(
            (a.y - b.y) * (a.z + b.z),
            (a.z - b.z) * (a.x + b.x),
            (a.x - b.x) * (a.y + b.y),
        );
    }
    n
}

pub(crate) fn tangent_basis<T: Real>(axis: Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    let helper = if axis.x.abs() < T::lit(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let e1 = axis.cross(helper).normalized().expect("helper not parallel to axis");
    let e2 = axis.cross(e1);
    (e1, e2)
}

/// Radially projected planar triangle `(a, b, c)` with a collapsed
/// tensor Gauss–Legendre rule; `dS = |det(a,b,c)| / ‖x‖³ ds dt`. Weights
/// are rescaled to the exact spherical area.
fn push_spherical_triangle<T: Real>(
    gl: &GaussLegendre<T>,
    a: Vec3<T>,
    b: Vec3<T>,
    c: Vec3<T>,
    nodes: &mut Vec<UnitDirection<T>>,
    weights: &mut Vec<T>,
) {
    let det = Vec3::triple(a, b, c).abs();
    if det <= T::zero() {
        return;
    }
    // tan(E/2) = |det| / (1 + a·b + b·c + c·a) for unit a, b, c
    let area = T::lit(2.0) * det.atan2(T::one() + a.dot(b) + b.dot(c) + c.dot(a));
    let start = weights.len();
    for (u, wu) in gl.on_interval(T::zero(), T::one()) {
        for (v, wv) in gl.on_interval(T::zero(), T::one()) {
            let s = u;
            let t = v * (T::one() - u);
            let x = a + (b - a) * s + (c - a) * t;
            let r = x.norm();
            nodes.push(UnitDirection::assume_unit(x / r));
            weights.push(wu * wv * (T::one() - u) * det / (r * r * r));
        }
    }
    let approx: T = weights[start..].iter().copied().sum();
    let scale = area / approx;
    for w in &mut weights[start..] {
        *w = *w * scale;
    }
}
