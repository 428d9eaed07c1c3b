//! Numerical checks of the growth bounds for canonical integrals.
//!
//! For a measure `μ` with counting function `μ^rad` and averaged counting
//! function `N`, and `r = |z|`,
//!
//! ```text
//! U_q^μ(z) ≤ ∫ M_q(r/t) dμ^rad(t)        (p1_a)
//!          = ∫ μ^rad(r/t) M_q'(t) dt      (p1_b)
//!          = ∫ (r/t) M_q'(r/t) dN(t)      (p2_a)
//!          = ∫ N(r/t) d(t M_q'(t))        (p2_b)
//! ```
//!
//! and for non-integer `ρ`
//!
//! ```text
//! type_ρ[U] ≤ S(ρ)·type_ρ[μ],   type_ρ[U] ≤ ρ·S(ρ)·type_ρ[N].
//! ```
//!
//! The four right-hand sides are computed along independent numerical
//! routes so that their agreement is a meaningful check:
//!
//! * `p1_a` sums direct maximizations of `K_q` over the atoms;
//! * `p1_b` integrates the tabulated `M_q'` against the step function;
//! * `p2_a` integrates the tabulated `t·M_q'(t)` against `dN = μ^rad(t)/t dt`,
//!   with a semi-infinite last piece;
//! * `p2_b` is a Stieltjes integral of the closed-form `N(r/t)` against the
//!   interpolated `t·M_q'(t)`, plus an exact endpoint term below the
//!   smallest ratio `r/|w|`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::canonical::CanonicalIntegral;
use crate::error::{Error, Result};
use crate::kernel::{s_constant, KernelContext, KernelTable, OrderParams, SForm};
use crate::math;
use crate::measures::{estimate_type, DiscreteMeasure, GeometricGrid};
use crate::numerics::{integrate, integrate_with_breakpoints, stieltjes_sum};

/// A row passes when `lhs − min(rhs) ≤ VIOLATION_TOL·(1 + |lhs|)`.
pub const VIOLATION_TOL: f64 = 1e-6;
/// A row passes when the four right-hand sides agree to this relative gap.
pub const IDENTITY_TOL: f64 = 1e-5;
/// Relative slack of the type inequalities; absorbs the finite-grid limsup
/// surrogate, which undershoots.
pub const TYPE_SLACK: f64 = 0.05;

/// One radius of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundRow {
    pub r: f64,
    /// `max_{|z|=r} U_q^μ(z)`
    pub lhs: f64,
    pub rhs_p1_a: f64,
    pub rhs_p1_b: f64,
    pub rhs_p2_a: f64,
    pub rhs_p2_b: f64,
    /// `lhs − min(rhs)`
    pub violation: f64,
    /// Largest pairwise relative gap among the four right-hand sides.
    pub identity_gap: f64,
    /// Set when a quadrature failed on this row.
    #[cfg_attr(feature = "serde", serde(skip_deserializing))]
    pub failure: Option<Error>,
}

impl BoundRow {
    fn failed(r: f64, lhs: f64, err: Error) -> Self {
        Self {
            r,
            lhs,
            rhs_p1_a: f64::NAN,
            rhs_p1_b: f64::NAN,
            rhs_p2_a: f64::NAN,
            rhs_p2_b: f64::NAN,
            violation: f64::NAN,
            identity_gap: f64::NAN,
            failure: Some(err),
        }
    }

    pub fn rhs(&self) -> [f64; 4] {
        [self.rhs_p1_a, self.rhs_p1_b, self.rhs_p2_a, self.rhs_p2_b]
    }

    pub fn passes(&self) -> bool {
        self.failure.is_none()
            && self.violation <= VIOLATION_TOL * (1.0 + self.lhs.abs())
            && self.identity_gap <= IDENTITY_TOL
    }
}

/// Order, genus and a short description of the measure a report refers to.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportParams {
    pub rho: Option<f64>,
    pub q: u32,
    pub measure: String,
}

/// Per-radius table of both sides of the integral bounds.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub worst_violation: f64,
    pub identity_gap: f64,
    pub params: ReportParams,
}

impl BoundReport {
    /// Sorts the rows by radius and computes the aggregates.
    pub fn from_rows(mut rows: Vec<BoundRow>, params: ReportParams) -> Self {
        rows.sort_by(|a, b| a.r.total_cmp(&b.r));
        let ok = rows.iter().filter(|r| r.failure.is_none());
        let worst_violation = ok
            .clone()
            .map(|r| r.violation)
            .fold(f64::NEG_INFINITY, f64::max);
        let identity_gap = ok.map(|r| r.identity_gap).fold(0.0, f64::max);
        Self {
            rows,
            worst_violation,
            identity_gap,
            params,
        }
    }

    pub fn passes(&self) -> bool {
        self.rows.iter().all(BoundRow::passes)
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.passes())
    }
}

/// Estimated types and the slack of both type inequalities.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TypeBoundReport {
    pub rho: f64,
    pub q: u32,
    pub type_u: f64,
    pub type_mu: f64,
    pub type_n: f64,
    pub s_rho: f64,
    /// `S(ρ)·type_mu − type_u`
    pub slack_1: f64,
    /// `ρ·S(ρ)·type_N − type_u`
    pub slack_2: f64,
    pub grid: GeometricGrid,
}

impl TypeBoundReport {
    pub fn passes(&self) -> bool {
        self.slack_1 >= -TYPE_SLACK * self.s_rho * self.type_mu
            && self.slack_2 >= -TYPE_SLACK * self.rho * self.s_rho * self.type_n
    }
}

/// Short human-readable description of a measure.
pub fn describe_measure(m: &DiscreteMeasure) -> String {
    match (m.min_radius(), m.max_radius()) {
        (Some(lo), Some(hi)) => format!(
            "{} atoms, total mass {}, radii [{}, {}]",
            m.len(),
            m.total_mass(),
            lo,
            hi
        ),
        _ => String::from("empty measure"),
    }
}

/// Relative gap, 0 when both values vanish.
fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Both forms of the first bound:
/// `(∫ M_q(r/t) dμ^rad(t), ∫ μ^rad(r/t) M_q'(t) dt)`.
pub fn bound_part1(u: &CanonicalIntegral, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let profile = u.measure().profile();
    if profile.radii().is_empty() {
        return Ok((0.0, 0.0));
    }
    let ctx = u.context();
    let rhs_a = stieltjes_sum(|t| ctx.max(r / t), &profile.jumps().collect::<Vec<_>>())?;

    // μ^rad(r/t) jumps at t = r/ρ_j and vanishes for t > r/ρ_min
    let mut points: Vec<f64> = profile.radii().iter().rev().map(|&a| r / a).collect();
    points.insert(0, 0.0);
    points.dedup();
    let rhs_b = integrate_with_breakpoints(
        |t| profile.value(r / t) * ctx.derivative_fast(t),
        &points,
        &ctx.quad,
    )?;
    Ok((rhs_a, rhs_b))
}

/// Both forms of the second bound:
/// `(∫ (r/t) M_q'(r/t) dN(t), ∫ N(r/t) d(t M_q'(t)))`.
pub fn bound_part2(u: &CanonicalIntegral, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let profile = u.measure().profile();
    let radii = profile.radii();
    let (Some(&a_min), Some(&a_max)) = (radii.first(), radii.last()) else {
        return Ok((0.0, 0.0));
    };
    let ctx = u.context();

    // dN(t) = μ^rad(t)/t dt, zero below ρ_min
    let integrand = |t: f64| ctx.slope_fast(r / t) * profile.value(t) / t;
    let mut rhs_a = if radii.len() > 1 {
        integrate_with_breakpoints(integrand, radii, &ctx.quad)?
    } else {
        0.0
    };
    rhs_a += integrate(integrand, a_max, f64::INFINITY, &ctx.quad)?;
    if !rhs_a.is_finite() {
        return Err(Error::DivergentTail);
    }

    // Stieltjes part in x = ln t on [ln(r/ρ_max), ln(r/ρ_min)], where
    // N(r e^{-x}) is affine between the breaks ln(r/ρ_j).
    let t_start = r / a_max;
    let t_end = r / a_min;
    let n_at = |x: f64| profile.averaged(r * math::exp(-x));
    let (body, g_start, m_start) = if t_start == t_end {
        (0.0, ctx.slope_fast(t_start), ctx.max_fast(t_start))
    } else {
        let local;
        let table = match ctx.table() {
            Some(tab) if tab.covers(t_start, t_end) => tab,
            _ => {
                local =
                    KernelTable::build(ctx, t_start, t_end, KernelTable::DEFAULT_PER_DECADE)?;
                &local
            }
        };
        let breaks: Vec<f64> = radii.iter().map(|&a| math::ln(r / a)).collect();
        let body = table
            .stieltjes_against_slope(n_at, math::ln(t_start), math::ln(t_end), &breaks)
            .ok_or(Error::Domain("Stieltjes range outside the kernel table"))?;
        let g = table.slope(t_start).unwrap_or_else(|| ctx.slope_fast(t_start));
        let m = table.max(t_start).unwrap_or_else(|| ctx.max(t_start));
        (body, g, m)
    };

    // Below t_start every atom counts, N(r/t) = μ_tot·ln(r/t) − Σ m_j ln ρ_j,
    // and integration by parts gives
    // ∫_{(0, t_start]} N(r/t) dG = N(ρ_max)·G(t_start) + μ_tot·M_q(t_start).
    let endpoint = profile.averaged(a_max) * g_start + profile.total_mass() * m_start;
    Ok((rhs_a, body + endpoint))
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain("bounds need r > 0"));
    }
    Ok(())
}

/// Computes one report row; quadrature failures are recorded in the row.
pub fn bound_row(u: &CanonicalIntegral, r: f64) -> BoundRow {
    let lhs = u.circle_max(r);
    let p1 = match bound_part1(u, r) {
        Ok(v) => v,
        Err(e) => return BoundRow::failed(r, lhs, e),
    };
    let p2 = match bound_part2(u, r) {
        Ok(v) => v,
        Err(e) => return BoundRow::failed(r, lhs, e),
    };
    let rhs = [p1.0, p1.1, p2.0, p2.1];
    let min_rhs = rhs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut gap = 0.0_f64;
    for i in 0..4 {
        for j in i + 1..4 {
            gap = gap.max(relative_gap(rhs[i], rhs[j]));
        }
    }
    BoundRow {
        r,
        lhs,
        rhs_p1_a: rhs[0],
        rhs_p1_b: rhs[1],
        rhs_p2_a: rhs[2],
        rhs_p2_b: rhs[3],
        violation: lhs - min_rhs,
        identity_gap: gap,
        failure: None,
    }
}

/// Returns `u` with a kernel table covering every ratio `r/|w|` that a sweep
/// over `grid` needs (and at least the default span).
pub fn prepare_for_sweep(u: &CanonicalIntegral, grid: &[f64]) -> Result<CanonicalIntegral> {
    let m = u.measure();
    let (Some(a_min), Some(a_max)) = (m.min_radius(), m.max_radius()) else {
        return Ok(u.clone());
    };
    let r_lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let r_hi = grid.iter().copied().fold(0.0, f64::max);
    if !(r_lo > 0.0) || !r_hi.is_finite() {
        return Err(Error::Domain("grid radii must be positive and finite"));
    }
    let (lo, hi) = (r_lo / a_max, r_hi / a_min);
    if u.context().table().is_some_and(|t| t.covers(lo, hi)) {
        return Ok(u.clone());
    }
    let ctx: KernelContext = u.context().clone().with_table(lo, hi)?;
    Ok(u.clone().with_context(ctx))
}

pub fn report_params(u: &CanonicalIntegral, rho: Option<f64>) -> ReportParams {
    ReportParams {
        rho,
        q: u.genus(),
        measure: describe_measure(u.measure()),
    }
}

/// Sweeps `grid`, comparing `max_{|z|=r} U` with the four right-hand sides.
pub fn verify_theorem_12(u: &CanonicalIntegral, grid: &[f64]) -> Result<BoundReport> {
    let prepared = prepare_for_sweep(u, grid)?;
    let rows = grid.iter().map(|&r| bound_row(&prepared, r)).collect();
    Ok(BoundReport::from_rows(rows, report_params(u, None)))
}

/// Estimates `type_ρ` of `max_{|z|=r} U`, `μ^rad` and `N` on `grid` and
/// compares them through `S(ρ)`. Uses genus `⌊ρ⌋`.
pub fn verify_theorem_3(
    measure: &DiscreteMeasure,
    rho: f64,
    grid: &GeometricGrid,
) -> Result<TypeBoundReport> {
    let params = OrderParams::new(rho)?;
    if params.is_integer() {
        return Err(Error::IntegerOrder { rho });
    }
    let ctx = KernelContext::new(params.q);
    let s_rho = s_constant(&params, &ctx, SForm::Derivative)?;
    let u = CanonicalIntegral::new(measure.clone(), ctx);

    let type_of = |e: crate::measures::GrowthEstimate| e.type_at.map_or(f64::NAN, |(_, t)| t);
    let type_u = type_of(estimate_type(|r| u.circle_max(r), rho, grid)?);
    let type_mu = type_of(estimate_type(|r| measure.counting_function(r), rho, grid)?);
    let type_n = type_of(estimate_type(|r| measure.averaged_counting(r), rho, grid)?);

    let slack = |bound: f64| {
        if bound == f64::INFINITY {
            f64::INFINITY
        } else {
            bound - type_u
        }
    };
    Ok(TypeBoundReport {
        rho,
        q: params.q,
        type_u,
        type_mu,
        type_n,
        s_rho,
        slack_1: slack(s_rho * type_mu),
        slack_2: slack(rho * s_rho * type_n),
        grid: *grid,
    })
}
