//! Direction nets on the unit sphere.
//!
//! These are sampling nets, not quadrature rules: they feed interior checks,
//! bounding boxes and the inscribed-sphere search.

use crate::bodies::UnitDirection;
use crate::scalar::Real;
use crate::vec3::Vec3;

/// The 26 directions towards the faces, edges and corners of a cube.
pub fn cube_net26<T: Real>() -> Vec<UnitDirection<T>> {
    let mut out = Vec::with_capacity(26);
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let v = Vec3::new(T::lit(i.into()), T::lit(j.into()), T::lit(k.into()));
                out.push(UnitDirection::new(v).expect("nonzero"));
            }
        }
    }
    out
}

/// A latitude/longitude net including both poles.
///
/// Returns the directions and an upper bound on the chord distance from any
/// point of the sphere to the nearest net direction.
pub fn lat_long_net<T: Real>(n_theta: usize, n_phi: usize) -> (Vec<UnitDirection<T>>, T) {
    let n_theta = n_theta.max(1);
    let n_phi = n_phi.max(3);
    let dtheta = T::PI() / T::count(n_theta);
    let dphi = T::TAU() / T::count(n_phi);
    let mut out = Vec::with_capacity((n_theta - 1) * n_phi + 2);
    out.push(UnitDirection::spherical(T::zero(), T::zero()));
    for i in 1..n_theta {
        let theta = dtheta * T::count(i);
        for j in 0..n_phi {
            out.push(UnitDirection::spherical(theta, dphi * T::count(j)));
        }
    }
    out.push(UnitDirection::spherical(T::PI(), T::zero()));
    // Arc distance to the nearest node is at most half the cell diagonal,
    // bounded by (dtheta + dphi) / 2; chords are shorter than arcs.
    let cover = (dtheta + dphi) * T::lit(0.5);
    (out, cover)
}

/// Vertices of the subdivided icosahedron; level `k` has `10·4^k + 2` points
/// (2562 at level 4).
pub fn icosphere<T: Real>(level: u32) -> Vec<UnitDirection<T>> {
    use std::collections::HashMap;

    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let normalize = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    for v in verts.iter_mut() {
        *v = normalize(*v);
    }
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
        .into_iter()
        .map(|v| UnitDirection::new(Vec3::from_f64(v)).expect("unit"))
        .collect()
}
