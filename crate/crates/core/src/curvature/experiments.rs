use serde::Serialize;

use crate::bodies::{ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::vec3::Vec3;

use super::{mean_curvature_pedal_refined, Refinement};

/// Published `M(n)` for the unit superellipsoid `|x|ⁿ + |y|ⁿ + |z|ⁿ ≤ 1`.
pub const REFERENCE_TABLE1: [(u32, f64); 10] = [
    (100, 18.6792),
    (200, 18.7640),
    (300, 18.7928),
    (400, 18.8064),
    (500, 18.8151),
    (600, 18.8208),
    (700, 18.8248),
    (800, 18.8280),
    (900, 18.8304),
    (1000, 18.8312),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table1Row<T> {
    pub n: u32,
    #[serde(rename = "M")]
    pub m: T,
    #[serde(rename = "M_minus_6pi")]
    pub m_minus_6pi: T,
}

/// `M(n)` for superellipsoids of half-side 1, rows in input order.
pub fn table1_experiment<T: Real>(ns: &[u32], refine: &Refinement) -> Result<Vec<Table1Row<T>>> {
    if let Some(&n) = ns.iter().find(|&&n| n % 2 == 1 || n < 2) {
        return Err(Error::OddExponent(n));
    }
    let six_pi = T::lit(6.0) * T::PI();
    ns.iter()
        .map(|&n| {
            let body = ConvexBody::centered(Shape::superellipsoid(n, T::one()))?;
            let m = mean_curvature_pedal_refined(&body, Vec3::zero(), refine)?.value;
            Ok(Table1Row {
                n,
                m,
                m_minus_6pi: m - six_pi,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CubeClosedForm<T> {
    pub octant: T,
    pub total: T,
}

/// Cube of side `2m` through its octant pedal chart
/// `r(u¹,u²) = m(sin u¹ sin u² + sin u¹ cos u² + cos u¹)`: the octant value is
/// `∫∫ r sin u¹ du¹du²` over `(0, π/2)²` and the total is eight octants.
pub fn cube_closed_form<T: Real>(m: T, order: usize) -> Result<CubeClosedForm<T>> {
    if !(m > T::zero()) {
        return Err(Error::InvalidShape(format!("cube half-side {m} must be > 0")));
    }
    let gl = GaussLegendre::<T>::new(order)?;
    let half_pi = T::FRAC_PI_2();
    let octant = gl.integrate(T::zero(), half_pi, |u1| {
        let (s1, c1) = u1.sin_cos();
        gl.integrate(T::zero(), half_pi, |u2| {
            let (s2, c2) = u2.sin_cos();
            m * (s1 * s2 + s1 * c2 + c1) * s1
        })
    });
    Ok(CubeClosedForm {
        octant,
        total: octant * T::lit(8.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cube_octant_is_three_quarters_pi() {
        let c = cube_closed_form(1.0f64, 24).unwrap();
        assert!((c.octant - 0.75 * PI).abs() < 1e-13);
        assert!((c.total - 6.0 * PI).abs() < 1e-12);
        let c2 = cube_closed_form(2.0f64, 24).unwrap();
        assert!((c2.total - 12.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_row_and_odd_exponent() {
        let rows = table1_experiment::<f64>(&[2], &Refinement::default()).unwrap();
        assert!((rows[0].m - 4.0 * PI).abs() < 1e-10);
        assert_eq!(
            table1_experiment::<f64>(&[100, 7], &Refinement::default()),
            Err(Error::OddExponent(7))
        );
    }

    #[test]
    fn reference_table_increases_toward_six_pi() {
        assert!(REFERENCE_TABLE1.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(REFERENCE_TABLE1.iter().all(|&(_, m)| m < 6.0 * PI));
    }
}
