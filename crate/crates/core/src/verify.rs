//! Identity suite: integral identities and cross-method agreement over a set
//! of bodies, one row per (check, body).

use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{ConvexBody, Shape};
use crate::catalog::{CatalogEntry, INCLUSIONS};
use crate::curvature::{
    gauss_check, inscribed_sphere, mean_curvature_classical, mean_curvature_pedal, mean_curvature_pedal_mc,
    mean_curvature_pedal_refined, minkowski_check, preferred_rule, pstar_integral_mc, pstar_integral_radial,
    santalo_total_mean_curvature, translation_invariance_check, PStar, Refinement,
};
use crate::error::{Error, Result};
use crate::quadrature::{octant_rule, sphere_rule, McSettings, DEFAULT_SEED};
use crate::surface::SmoothSurfacePatch;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Minkowski,
    Gauss,
    Pstar,
    Inradius,
    Translation,
    Scaling,
    Additivity,
    Monotonicity,
    Methods,
    Santalo,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Minkowski,
        Check::Gauss,
        Check::Pstar,
        Check::Inradius,
        Check::Translation,
        Check::Scaling,
        Check::Additivity,
        Check::Monotonicity,
        Check::Methods,
        Check::Santalo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Minkowski => "minkowski",
            Check::Gauss => "gauss",
            Check::Pstar => "pstar",
            Check::Inradius => "inradius",
            Check::Translation => "translation",
            Check::Scaling => "scaling",
            Check::Additivity => "additivity",
            Check::Monotonicity => "monotonicity",
            Check::Methods => "methods",
            Check::Santalo => "santalo",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: Check,
    pub body: String,
    /// What is being compared, e.g. `lhs vs rhs` or `mc vs pedal`.
    pub quantity: String,
    pub expected: f64,
    pub observed: f64,
    /// The compared error: absolute or relative per `quantity`.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySettings {
    /// Surface grid for Minkowski, Gauss and classical checks.
    pub grid: usize,
    /// Fixed-rule order for the linearity checks.
    pub rule_order: usize,
    pub refine: Refinement,
    pub samples: u64,
    pub seed: u64,
    /// Excision radius for Monte Carlo, as a fraction of the minimum support.
    pub epsilon_fraction: f64,
    /// Excision fraction for the `p*` integral, whose variance is larger.
    pub pstar_epsilon_fraction: f64,
    pub inscribed_tol: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            grid: 512,
            rule_order: 64,
            refine: Refinement::default(),
            samples: 1_000_000,
            seed: DEFAULT_SEED,
            epsilon_fraction: 0.05,
            pstar_epsilon_fraction: 0.25,
            inscribed_tol: 1e-9,
        }
    }
}

struct Row<'a> {
    check: Check,
    body: &'a str,
}

impl Row<'_> {
    fn abs(&self, quantity: &str, expected: f64, observed: f64, tolerance: f64) -> CheckRow {
        let error = (observed - expected).abs();
        self.finish(quantity, expected, observed, error, tolerance)
    }

    fn rel(&self, quantity: &str, expected: f64, observed: f64, tolerance: f64) -> CheckRow {
        let error = (observed - expected).abs() / expected.abs();
        self.finish(quantity, expected, observed, error, tolerance)
    }

    fn finish(&self, quantity: &str, expected: f64, observed: f64, error: f64, tolerance: f64) -> CheckRow {
        CheckRow {
            check: self.check,
            body: self.body.to_string(),
            quantity: quantity.to_string(),
            expected,
            observed,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }
}

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

fn is_ovaloid(shape: &Shape<f64>) -> bool {
    match shape {
        Shape::Sphere { .. } | Shape::Ellipsoid { .. } => true,
        Shape::Superellipsoid { exponent, .. } => *exponent == 2,
        Shape::Translate(s, _) => is_ovaloid(s),
        _ => false,
    }
}

/// Smooth charts whose curvature integrals resolve at moderate grids.
fn resolvable_patch(e: &CatalogEntry<f64>) -> Option<SmoothSurfacePatch<f64>> {
    fn ok(shape: &Shape<f64>) -> bool {
        match shape {
            Shape::Superellipsoid { exponent, .. } => *exponent <= 6,
            Shape::Translate(s, _) => ok(s),
            _ => true,
        }
    }
    if ok(e.body.shape()) {
        e.patch()
    } else {
        None
    }
}

fn check_body(check: Check, e: &CatalogEntry<f64>, s: &VerifySettings) -> Result<Vec<CheckRow>> {
    let row = Row { check, body: &e.name };
    let m = e.body.center();
    let grid = (s.grid, s.grid);
    let mut out = Vec::new();
    match check {
        Check::Minkowski => {
            if let (Some(p), true) = (e.patch(), is_ovaloid(e.body.shape())) {
                let (lhs, rhs) = minkowski_check(&p, m, grid)?;
                out.push(row.rel("int pK dA vs int H dA", rhs, lhs, 1e-6));
            }
        }
        Check::Gauss => {
            if let Some(p) = resolvable_patch(e) {
                let tol = if is_ovaloid(e.body.shape()) { 1e-6 } else { 1e-5 };
                out.push(row.abs("int K dA", FOUR_PI, gauss_check(&p, grid)?, tol));
            }
        }
        Check::Pstar => {
            if is_ovaloid(e.body.shape()) {
                let rule = sphere_rule(64, 128)?;
                let radial = pstar_integral_radial(&e.body, m, &rule, 8, PStar::SupportValue)?;
                out.push(row.abs("radial form", FOUR_PI, radial, 1e-12));
                let mc = McSettings {
                    samples: s.samples,
                    seed: s.seed,
                    excision_radius: s.pstar_epsilon_fraction * e.body.min_support(m),
                };
                let est = pstar_integral_mc(&e.body, m, &mc, PStar::SupportValue, &rule)?;
                out.push(row.abs("monte carlo (4 sigma)", FOUR_PI, est.estimate, 4.0 * est.standard_error));
                out.push(row.finish(
                    "monte carlo sigma/4pi",
                    0.0,
                    est.standard_error / FOUR_PI,
                    est.standard_error / FOUR_PI,
                    5e-3,
                ));
            }
        }
        Check::Inradius => {
            let mc = mean_curvature_pedal_refined(&e.body, m, &s.refine)?.value;
            let ins = inscribed_sphere(&e.body, s.inscribed_tol)?;
            let bound = FOUR_PI * ins.radius;
            out.push(row.finish("M >= 4 pi R", bound, mc, (bound - mc).max(0.0), 1e-6));
            if matches!(e.body.shape(), Shape::Sphere { .. }) {
                out.push(row.abs("M = 4 pi R", bound, mc, 1e-8));
            }
        }
        Check::Translation => {
            let rule = preferred_rule(&e.body, s.rule_order)?;
            let d = translation_invariance_check(&e.body, m, e.shifted_center(), &rule)?;
            out.push(row.finish("|M(m1) - M(m2)|", 0.0, d, d, 1e-6));
        }
        Check::Scaling => {
            let rule = preferred_rule(&e.body, s.rule_order)?;
            let base = mean_curvature_pedal(&e.body, m, &rule)?;
            for lambda in [0.5, 2.0, 10.0] {
                let b = e.body.scaled(lambda)?;
                let v = mean_curvature_pedal(&b, b.center(), &rule)?;
                out.push(row.rel(&format!("M({lambda} body) vs {lambda} M"), lambda * base, v, 1e-10));
            }
        }
        Check::Additivity => {
            if let Shape::MinkowskiSum(a, b) = e.body.shape() {
                let rule = octant_rule(s.rule_order * 2)?;
                let o = Vec3::zero();
                let total = mean_curvature_pedal(&e.body, m, &rule)?;
                let ma = mean_curvature_pedal(&ConvexBody::centered((**a).clone())?, o, &rule)?;
                let mb = mean_curvature_pedal(&ConvexBody::centered((**b).clone())?, o, &rule)?;
                out.push(row.abs("M(A+B) vs M(A) + M(B)", ma + mb, total, 1e-9));
            }
        }
        Check::Monotonicity | Check::Santalo => unreachable!("handled separately"),
        Check::Methods => {
            let pedal = mean_curvature_pedal_refined(&e.body, m, &s.refine)?.value;
            if let Some(p) = resolvable_patch(e) {
                let classical = mean_curvature_classical(&p, grid)?;
                out.push(row.rel("pedal vs classical", classical, pedal, 1e-4));
            }
            let mc = McSettings {
                samples: s.samples,
                seed: s.seed,
                excision_radius: s.epsilon_fraction * e.body.min_support(m),
            };
            let est = mean_curvature_pedal_mc(&e.body, m, &mc)?;
            out.push(row.abs("mc vs pedal (4 sigma)", pedal, est.estimate, 4.0 * est.standard_error));
        }
    }
    Ok(out)
}

fn santalo_rows(e: &CatalogEntry<f64>, s: &VerifySettings) -> Result<Vec<CheckRow>> {
    let Some(poly) = e.body.shape().edge_polytope() else {
        return Ok(Vec::new());
    };
    let row = Row {
        check: Check::Santalo,
        body: &e.name,
    };
    let santalo = santalo_total_mean_curvature(&poly)?;
    let pedal = mean_curvature_pedal_refined(&e.body, e.body.center(), &s.refine)?.value;
    Ok(vec![row.rel("santalo vs pedal", pedal, santalo, 1e-6)])
}

fn monotonicity_rows(entries: &[CatalogEntry<f64>], s: &VerifySettings) -> Result<Vec<CheckRow>> {
    let find = |n: &str| entries.iter().find(|e| e.name == n);
    let mut out = Vec::new();
    for (inner, outer) in INCLUSIONS {
        let (Some(a), Some(b)) = (find(inner), find(outer)) else {
            continue;
        };
        let ma = mean_curvature_pedal_refined(&a.body, a.body.center(), &s.refine)?.value;
        let mb = mean_curvature_pedal_refined(&b.body, b.body.center(), &s.refine)?.value;
        let body = format!("{inner} in {outer}");
        let row = Row {
            check: Check::Monotonicity,
            body: &body,
        };
        out.push(row.finish("M(inner) <= M(outer)", mb, ma, (ma - mb).max(0.0), 1e-9));
    }
    Ok(out)
}

/// Runs `checks` over `entries`. Checks that do not apply to a body (for
/// example Minkowski on a polytope) produce no rows.
pub fn run_checks(entries: &[CatalogEntry<f64>], checks: &[Check], s: &VerifySettings) -> Result<Vec<CheckRow>> {
    let mut jobs: Vec<(Check, Option<usize>)> = Vec::new();
    for &c in checks {
        match c {
            Check::Monotonicity => jobs.push((c, None)),
            _ => jobs.extend((0..entries.len()).map(|i| (c, Some(i)))),
        }
    }
    let results: Vec<Result<Vec<CheckRow>>> = jobs
        .par_iter()
        .map(|&(c, i)| match (c, i) {
            (Check::Monotonicity, _) => monotonicity_rows(entries, s),
            (Check::Santalo, Some(i)) => santalo_rows(&entries[i], s),
            (c, Some(i)) => check_body(c, &entries[i], s),
            (_, None) => Err(Error::Unsupported("check needs a body".into())),
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}
