//! Parallel sweeps over radius grids.

use canonical_growth::bounds::{bound_row, prepare_for_sweep, report_params};
use canonical_growth::{Atom, BoundReport, CanonicalIntegral, ComplexPoint, DiscreteMeasure};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Result, ToolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

/// `count` radii from `r_min` to `r_max`.
pub fn radius_grid(r_min: f64, r_max: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(ToolError::Usage("grid count must be at least 1".into()));
    }
    if !(r_min.is_finite() && r_max.is_finite()) || r_min < 0.0 || r_max < r_min {
        return Err(ToolError::Usage(format!(
            "invalid grid range [{r_min}, {r_max}]"
        )));
    }
    if spacing == Spacing::Log && r_min <= 0.0 {
        return Err(ToolError::Usage("log spacing needs r-min > 0".into()));
    }
    if count == 1 {
        return Ok(vec![r_min]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|k| match (k, spacing) {
            (0, _) => r_min,
            (k, _) if k == count - 1 => r_max,
            (k, Spacing::Log) => r_min * (r_max / r_min).powf(k as f64 / last),
            (k, Spacing::Linear) => r_min + (r_max - r_min) * (k as f64 / last),
        })
        .collect())
}

/// Bound report with rows computed in parallel; row order follows `r`.
pub fn bound_sweep(u: &CanonicalIntegral, grid: &[f64], rho: Option<f64>) -> Result<BoundReport> {
    let prepared = prepare_for_sweep(u, grid)?;
    let rows = grid.par_iter().map(|&r| bound_row(&prepared, r)).collect();
    Ok(BoundReport::from_rows(rows, report_params(u, rho)))
}

/// `(r, max U, mean U)`; the mean is NaN on circles through atoms.
pub fn eval_sweep(u: &CanonicalIntegral, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    grid.par_iter()
        .map(|&r| {
            let mean = if r == 0.0 {
                Ok(u.evaluate(ComplexPoint::ZERO))
            } else {
                u.circle_mean(r)
            };
            let mean = match mean {
                Err(canonical_growth::Error::SingularCircle { .. }) => f64::NAN,
                other => other?,
            };
            Ok(vec![r, u.circle_max(r), mean])
        })
        .collect()
}

/// Shape of the random measures used by seeded sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomMeasureSpec {
    pub max_atoms: usize,
    pub radius: (f64, f64),
    pub mass: (f64, f64),
}

impl Default for RandomMeasureSpec {
    fn default() -> Self {
        Self {
            max_atoms: 50,
            radius: (0.5, 50.0),
            mass: (0.5, 2.0),
        }
    }
}

/// Between 1 and `max_atoms` atoms, log-uniform radii, uniform angles and
/// masses.
pub fn random_measure<R: Rng>(rng: &mut R, spec: &RandomMeasureSpec) -> DiscreteMeasure {
    let n = rng.gen_range(1..=spec.max_atoms);
    let (lo, hi) = (spec.radius.0.ln(), spec.radius.1.ln());
    let atoms = (0..n)
        .map(|_| {
            let r = rng.gen_range(lo..=hi).exp();
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let mass = rng.gen_range(spec.mass.0..=spec.mass.1);
            Atom::new(ComplexPoint::from_polar(r, theta), mass)
        })
        .collect();
    DiscreteMeasure::new(atoms).expect("random atoms are valid")
}
