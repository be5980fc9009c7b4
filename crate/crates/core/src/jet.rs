//! Second-order forward-mode derivatives in two variables.
//!
//! Surface charts are written once against [`ChartScalar`] and evaluated either
//! on plain reals (positions) or on [`Jet2`] (positions together with the first
//! and second partial derivatives needed for the fundamental forms).

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

/// Scalars a surface chart can be evaluated on.
pub trait ChartScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    type Base: Real;

    fn constant(v: Self::Base) -> Self;
    fn value(self) -> Self::Base;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// `self^e` for a constant exponent; only defined for positive `self`.
    fn powf(self, e: Self::Base) -> Self;

    #[inline]
    fn scale(self, k: Self::Base) -> Self {
        self * Self::constant(k)
    }
}

impl<T: Real> ChartScalar for T {
    type Base = T;

    #[inline]
    fn constant(v: T) -> T {
        v
    }
    #[inline]
    fn value(self) -> T {
        self
    }
    #[inline]
    fn sin(self) -> T {
        num_traits::Float::sin(self)
    }
    #[inline]
    fn cos(self) -> T {
        num_traits::Float::cos(self)
    }
    #[inline]
    fn sqrt(self) -> T {
        num_traits::Float::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> T {
        num_traits::Float::powi(self, n)
    }
    #[inline]
    fn powf(self, e: T) -> T {
        num_traits::Float::powf(self, e)
    }
}

/// Value, gradient and Hessian of a function of `(u, v)`.
///
/// `hess` stores `[∂uu, ∂uv, ∂vv]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2<T> {
    pub val: T,
    pub grad: [T; 2],
    pub hess: [T; 3],
}

impl<T: Real> Jet2<T> {
    /// The independent variable `u` (index 0) or `v` (index 1) at `value`.
    pub fn variable(value: T, index: usize) -> Self {
        let mut grad = [T::zero(); 2];
        grad[index] = T::one();
        Self {
            val: value,
            grad,
            hess: [T::zero(); 3],
        }
    }

    /// Applies a scalar function with derivatives `d1 = f'(val)`, `d2 = f''(val)`.
    #[inline]
    fn chain(self, f: T, d1: T, d2: T) -> Self {
        let [gu, gv] = self.grad;
        let [huu, huv, hvv] = self.hess;
        Self {
            val: f,
            grad: [d1 * gu, d1 * gv],
            hess: [
                d1 * huu + d2 * gu * gu,
                d1 * huv + d2 * gu * gv,
                d1 * hvv + d2 * gv * gv,
            ],
        }
    }
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            val: self.val + o.val,
            grad: [self.grad[0] + o.grad[0], self.grad[1] + o.grad[1]],
            hess: [
                self.hess[0] + o.hess[0],
                self.hess[1] + o.hess[1],
                self.hess[2] + o.hess[2],
            ],
        }
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            val: -self.val,
            grad: [-self.grad[0], -self.grad[1]],
            hess: [-self.hess[0], -self.hess[1], -self.hess[2]],
        }
    }
}

impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self {
            val: a.val * b.val,
            grad: [
                a.grad[0] * b.val + a.val * b.grad[0],
                a.grad[1] * b.val + a.val * b.grad[1],
            ],
            hess: [
                a.hess[0] * b.val + a.grad[0] * b.grad[0] * T::lit(2.0) + a.val * b.hess[0],
                a.hess[1] * b.val + a.grad[0] * b.grad[1] + a.grad[1] * b.grad[0] + a.val * b.hess[1],
                a.hess[2] * b.val + a.grad[1] * b.grad[1] * T::lit(2.0) + a.val * b.hess[2],
            ],
        }
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let r = o.val.recip();
        self * o.chain(r, -r * r, T::lit(2.0) * r * r * r)
    }
}

impl<T: Real> ChartScalar for Jet2<T> {
    type Base = T;

    #[inline]
    fn constant(v: T) -> Self {
        Self {
            val: v,
            grad: [T::zero(); 2],
            hess: [T::zero(); 3],
        }
    }
    #[inline]
    fn value(self) -> T {
        self.val
    }
    #[inline]
    fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }
    #[inline]
    fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let r = self.val.sqrt();
        let d1 = T::lit(0.5) / r;
        self.chain(r, d1, -d1 / (T::lit(2.0) * self.val))
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        let nf = T::lit(f64::from(n));
        let f = self.val.powi(n);
        let d1 = if n == 0 { T::zero() } else { nf * self.val.powi(n - 1) };
        let d2 = if n == 0 || n == 1 {
            T::zero()
        } else {
            nf * (nf - T::one()) * self.val.powi(n - 2)
        };
        self.chain(f, d1, d2)
    }
    #[inline]
    fn powf(self, e: T) -> Self {
        let f = self.val.powf(e);
        let d1 = e * f / self.val;
        let d2 = (e - T::one()) * d1 / self.val;
        self.chain(f, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    // Test-side oracle: central differences of a closed-form function.
    fn fd_oracle(f: impl Fn(f64, f64) -> f64, u: f64, v: f64) -> ([f64; 2], [f64; 3]) {
        let h = 1e-4;
        let fu = (f(u + h, v) - f(u - h, v)) / (2.0 * h);
        let fv = (f(u, v + h) - f(u, v - h)) / (2.0 * h);
        let fuu = (f(u + h, v) - 2.0 * f(u, v) + f(u - h, v)) / (h * h);
        let fvv = (f(u, v + h) - 2.0 * f(u, v) + f(u, v - h)) / (h * h);
        let fuv = (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4.0 * h * h);
        ([fu, fv], [fuu, fuv, fvv])
    }

    fn generic<S: ChartScalar<Base = f64>>(u: S, v: S) -> S {
        let w = (u.sin() * v.cos()).powi(4) + (u * v).cos().powi(2) + S::constant(0.5);
        w.powf(-0.25) + (u * u + v).sqrt() / (v + S::constant(2.0))
    }

    #[test]
    fn jet_matches_finite_differences() {
        let (u, v) = (0.7, 1.3);
        let j = generic(Jet2::variable(u, 0), Jet2::variable(v, 1));
        assert!(approx(j.val, generic(u, v)));
        let (g, h) = fd_oracle(generic, u, v);
        for k in 0..2 {
            assert!((j.grad[k] - g[k]).abs() < 1e-7, "grad {k}: {} vs {}", j.grad[k], g[k]);
        }
        for k in 0..3 {
            assert!((j.hess[k] - h[k]).abs() < 1e-5, "hess {k}: {} vs {}", j.hess[k], h[k]);
        }
    }

    #[test]
    fn exact_on_polynomials() {
        let u = Jet2::variable(2.0, 0);
        let v = Jet2::variable(3.0, 1);
        let p = u * u * v + v.powi(3);
        assert_eq!(p.val, 12.0 + 27.0);
        assert_eq!(p.grad, [12.0, 4.0 + 27.0]);
        assert_eq!(p.hess, [6.0, 4.0, 18.0]);
    }
}
