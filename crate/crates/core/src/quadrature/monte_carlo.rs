//! Rejection-sampling Monte Carlo over pedal bodies.
//!
//! Samples are drawn in fixed-size chunks; chunk `k` uses the ChaCha stream
//! `k` of the user seed, and chunk partial sums are combined in chunk order.
//! The estimate is therefore a function of `(seed, samples)` alone, whatever
//! the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

use super::CompensatedSum;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Samples per independent random stream.
pub const CHUNK_SAMPLES: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McSettings<T> {
    pub samples: u64,
    pub seed: u64,
    /// Radius of the ball about `m` excluded from sampling; its contribution
    /// is supplied analytically by the caller.
    pub excision_radius: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate<T> {
    pub estimate: T,
    pub standard_error: T,
    pub samples_used: u64,
    /// Samples that landed in the integration shell.
    pub accepted: u64,
    pub seed: u64,
}

/// Exact integral of `1/‖y − m‖²` over the excised ball of radius `ε`: `4πε`.
pub fn inverse_square_excision<T: Real>(epsilon: T) -> T {
    T::lit(4.0) * T::PI() * epsilon
}

/// `∫_{pedal body} g dy` by uniform sampling in the pedal bounding box.
///
/// Points inside the pedal body and outside the ball of radius
/// `settings.excision_radius` about `m` contribute `g`; `excised` (the exact
/// integral over that ball) is added to the estimate. `ε = 0` is accepted but
/// singular integrands then have unbounded variance.
pub fn monte_carlo_volume_integral<T, G>(
    g: G,
    body: &ConvexBody<T>,
    m: Vec3<T>,
    settings: &McSettings<T>,
    excised: T,
) -> Result<McEstimate<T>>
where
    T: Real,
    G: Fn(Vec3<T>) -> T + Sync,
{
    if settings.samples == 0 {
        return Err(Error::InvalidOrder("Monte Carlo sample count must be >= 1".into()));
    }
    let eps = settings.excision_radius;
    if !(eps >= T::zero()) {
        return Err(Error::InvalidOrder(format!("excision radius {eps} must be >= 0")));
    }
    if eps > T::zero() {
        let min_support = body.min_support(m);
        if eps >= min_support {
            return Err(Error::ExcisionTooLarge {
                epsilon: eps.as_f64(),
                min_support: min_support.as_f64(),
            });
        }
    }

    let bbox = body.bounding_box(m);
    let extent = bbox.max - bbox.min;
    let chunks = settings.samples.div_ceil(CHUNK_SAMPLES);
    let eps2 = eps * eps;

    let partials: Vec<(T, T, u64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = CHUNK_SAMPLES.min(settings.samples - k * CHUNK_SAMPLES);
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
            rng.set_stream(k);
            let mut sum = CompensatedSum::default();
            let mut sum_sq = CompensatedSum::default();
            let mut accepted = 0u64;
            for _ in 0..count {
                let u = Vec3::new(
                    T::lit(rng.gen::<f64>()),
                    T::lit(rng.gen::<f64>()),
                    T::lit(rng.gen::<f64>()),
                );
                let y = bbox.min + Vec3::new(u.x * extent.x, u.y * extent.y, u.z * extent.z);
                if (y - m).norm_squared() < eps2 || !body.contains_pedal(m, y) {
                    continue;
                }
                let v = g(y);
                accepted += 1;
                sum.add(v);
                sum_sq.add(v * v);
            }
            (sum.value(), sum_sq.value(), accepted)
        })
        .collect();

    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    let mut accepted = 0u64;
    for (s, s2, a) in partials {
        sum.add(s);
        sum_sq.add(s2);
        accepted += a;
    }
    if accepted == 0 {
        return Err(Error::ZeroAcceptance {
            samples: settings.samples,
        });
    }

    let n = T::lit(settings.samples as f64);
    let volume = bbox.volume();
    let mean = sum.value() / n;
    if !mean.is_finite() {
        return Err(Error::NonFiniteIntegrand { node: m.to_f64() });
    }
    let var = if settings.samples > 1 {
        ((sum_sq.value() - n * mean * mean) / (n - T::one())).max(T::zero())
    } else {
        T::zero()
    };
    Ok(McEstimate {
        estimate: volume * mean + excised,
        standard_error: volume * (var / n).sqrt(),
        samples_used: settings.samples,
        accepted,
        seed: settings.seed,
    })
}
