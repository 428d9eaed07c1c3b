//! The Weierstrass primary kernel of genus `q`,
//!
//! ```text
//! K_q(z) = ln|1 − z| + Σ_{k=1..q} Re(z^k)/k,
//! ```
//!
//! its circle maximum `M_q(r) = max_{|z|=r} K_q(z)`, the right derivative
//! `M_q'`, the nondecreasing composite `t·M_q'(t)` and the growth constant
//!
//! ```text
//! S(ρ) = ∫₀^∞ r^{−ρ} M_q'(r) dr = ρ ∫₀^∞ r^{−ρ−1} M_q(r) dr,   q = ⌊ρ⌋,
//! ```
//!
//! which is finite exactly when `ρ` is not an integer.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::measures::ComplexPoint;
use crate::numerics::{
    integrate_with_breakpoints, maximize_on_interval, right_derivative, CircleScanSettings,
    QuadratureSettings,
};

/// Genus `q = ⌊ρ⌋` of the canonical integral of order `ρ > 0`.
pub fn genus_for_order(rho: f64) -> u32 {
    math::floor(rho.max(0.0)) as u32
}

/// Order `ρ` together with its genus `q = ⌊ρ⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderParams {
    pub rho: f64,
    pub q: u32,
}

impl OrderParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain("order must be positive and finite"));
        }
        Ok(Self {
            rho,
            q: genus_for_order(rho),
        })
    }

    pub fn is_integer(&self) -> bool {
        self.rho == math::floor(self.rho)
    }
}

/// `K_q(z)`; `−∞` at `z = 1`.
pub fn kernel_eval(q: u32, z: ComplexPoint) -> f64 {
    let modulus = z.abs();
    if modulus < 0.5 {
        if q == 0 {
            // ln|1 − z| = ½·ln(1 − 2x + x² + y²)
            return 0.5 * math::ln_1p(z.re * (z.re - 2.0) + z.im * z.im);
        }
        return -compensated_tail(q, z, modulus);
    }
    let log_term = math::ln(math::hypot(1.0 - z.re, z.im));
    if log_term == f64::NEG_INFINITY {
        return log_term;
    }
    let mut power = ComplexPoint::ONE;
    let mut sum = 0.0;
    for k in 1..=q {
        power = power * z;
        sum += power.re / k as f64;
    }
    log_term + sum
}

/// `Re Σ_{k>q} z^k/k` for `|z| < 1/2`; the direct formula cancels
/// catastrophically there.
fn compensated_tail(q: u32, z: ComplexPoint, modulus: f64) -> f64 {
    let mut power = ComplexPoint::ONE;
    for _ in 0..=q {
        power = power * z;
    }
    let lead = math::powf(modulus, (q + 1) as f64) / (q + 1) as f64;
    let mut sum = 0.0;
    let mut k = q + 1;
    let mut magnitude = lead * (q + 1) as f64;
    loop {
        sum += power.re / k as f64;
        magnitude *= modulus;
        k += 1;
        if magnitude / (k as f64) < 1e-18 * lead || k > q + 200 {
            break;
        }
        power = power * z;
    }
    sum
}

/// Which integral representation of `S(ρ)` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SForm {
    /// `∫ r^{−ρ} M_q'(r) dr`
    Derivative,
    /// `ρ ∫ r^{−ρ−1} M_q(r) dr`
    Direct,
}

/// Genus plus numeric settings for `K_q`, `M_q`, `M_q'` and `S(ρ)`.
///
/// A context may carry a precomputed [`KernelTable`] for bulk queries; it is
/// built eagerly by [`KernelContext::with_table`] and shared by reference
/// counting, so clones and concurrent readers see identical values.
#[derive(Debug, Clone)]
pub struct KernelContext {
    q: u32,
    pub quad: QuadratureSettings,
    pub scan: CircleScanSettings,
    table: Option<Arc<KernelTable>>,
}

impl KernelContext {
    pub fn new(q: u32) -> Self {
        Self {
            q,
            quad: QuadratureSettings::default(),
            scan: CircleScanSettings::default(),
            table: None,
        }
    }

    pub fn for_order(rho: f64) -> Result<Self> {
        Ok(Self::new(OrderParams::new(rho)?.q))
    }

    pub fn with_quadrature(mut self, quad: QuadratureSettings) -> Self {
        self.quad = quad;
        self
    }

    pub fn with_scan(mut self, scan: CircleScanSettings) -> Self {
        self.scan = scan;
        self.table = None;
        self
    }

    /// Builds the `M_q` table on `[lo, hi]` (extended to at least the default
    /// span) and attaches it.
    pub fn with_table(mut self, lo: f64, hi: f64) -> Result<Self> {
        let table = KernelTable::build(
            &self,
            lo.min(KernelTable::DEFAULT_LO),
            hi.max(KernelTable::DEFAULT_HI),
            KernelTable::DEFAULT_PER_DECADE,
        )?;
        self.table = Some(Arc::new(table));
        Ok(self)
    }

    pub fn with_default_table(self) -> Result<Self> {
        self.with_table(KernelTable::DEFAULT_LO, KernelTable::DEFAULT_HI)
    }

    pub fn genus(&self) -> u32 {
        self.q
    }

    pub fn table(&self) -> Option<&KernelTable> {
        self.table.as_deref()
    }

    /// `K_q(z)`.
    pub fn eval(&self, z: ComplexPoint) -> f64 {
        kernel_eval(self.q, z)
    }

    /// `(θ*, M_q(r))` with `θ* ∈ [0, π]`. The kernel is symmetric under
    /// conjugation, so only the upper half circle is scanned.
    pub fn argmax(&self, r: f64) -> (f64, f64) {
        if r == 0.0 {
            return (0.0, 0.0);
        }
        maximize_on_interval(
            |theta| self.eval(ComplexPoint::from_polar(r, theta)),
            0.0,
            math::PI,
            (self.scan.coarse_points / 2).max(4),
            self.scan.refine_tol,
        )
    }

    /// `M_q(r)` by direct maximization.
    pub fn max(&self, r: f64) -> f64 {
        self.argmax(r).1
    }

    /// Right derivative `M_q'(t)` by Richardson-extrapolated forward
    /// differences.
    pub fn max_derivative(&self, t: f64) -> Result<f64> {
        right_derivative(|s| self.max(s), t)
    }

    /// `t·M_q'(t)`, the logarithmic derivative `dM_q/d(ln t)`.
    pub fn slope(&self, t: f64) -> Result<f64> {
        Ok(t * self.max_derivative(t)?)
    }

    /// `M_q(t)`, from the table when `t` lies inside it.
    pub fn max_fast(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        self.table()
            .and_then(|tab| tab.max(t))
            .unwrap_or_else(|| self.max(t))
    }

    /// `t·M_q'(t)`, from the table when `t` lies inside it.
    pub fn slope_fast(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match self.table().and_then(|tab| tab.slope(t)) {
            Some(v) => v,
            None => self.slope(t).unwrap_or(f64::NAN),
        }
    }

    /// `M_q'(t)`, from the table when `t` lies inside it.
    pub fn derivative_fast(&self, t: f64) -> f64 {
        self.slope_fast(t) / t
    }

    /// `S(ρ)` in the requested form.
    pub fn s_constant(&self, params: &OrderParams, form: SForm) -> Result<f64> {
        s_constant(params, self, form)
    }
}

/// `max_{|z|=r} K_q(z)`.
pub fn kernel_max(ctx: &KernelContext, r: f64) -> f64 {
    ctx.max(r)
}

/// `M_q'(t)`.
pub fn kernel_max_derivative(ctx: &KernelContext, t: f64) -> Result<f64> {
    ctx.max_derivative(t)
}

/// Upper bound for both truncated ends of the `S(ρ)` integrals.
fn s_truncation(params: &OrderParams, tol: f64) -> Result<(f64, f64)> {
    let rho = params.rho;
    let q = params.q as f64;
    // M_q(r) ≤ Σ_{k>q} r^k/k ≤ r^{q+1}/((q+1)(1−r)) for r < 1
    let head = |eps: f64| {
        math::powf(eps, q + 1.0 - rho) / ((q + 1.0) * (1.0 - eps)) * (1.0 + rho / (q + 1.0 - rho))
    };
    // M_q(r) ≤ ln 2 + ln r + Σ_{k≤q} r^k/k for r ≥ 1
    let tail = |big: f64| {
        let lnr = math::ln(big);
        let mut t = math::powf(big, -rho) * (core::f64::consts::LN_2 + lnr + 1.0 / rho);
        for k in 1..=params.q {
            let k = k as f64;
            t += rho * math::powf(big, k - rho) / (k * (rho - k));
        }
        t
    };

    let mut lo = 0.1;
    while head(lo) > tol {
        lo *= 0.1;
        if lo < 1e-300 {
            return Err(Error::NonConvergence {
                estimate: f64::NAN,
                error_estimate: head(lo),
                subdivisions: 0,
            });
        }
    }
    let mut hi = 10.0;
    while tail(hi) > tol {
        hi *= 10.0;
        if hi > 1e300 {
            return Err(Error::NonConvergence {
                estimate: f64::NAN,
                error_estimate: tail(hi),
                subdivisions: 0,
            });
        }
    }
    Ok((lo, hi))
}

/// The growth constant `S(ρ)`, `q = ⌊ρ⌋`, for non-integer `ρ`.
///
/// Both forms are integrated in `x = ln r` over `[ln ε, ln R]`, where `ε` and
/// `R` are chosen so that the explicit majorants of `M_q` bound each
/// discarded end by `10⁻³·abs_tol`. In `x` the integrands decay
/// exponentially at both ends.
pub fn s_constant(params: &OrderParams, ctx: &KernelContext, form: SForm) -> Result<f64> {
    if params.is_integer() {
        return Err(Error::IntegerOrder { rho: params.rho });
    }
    if params.q != genus_for_order(params.rho) {
        return Err(Error::Domain("genus must equal floor(rho)"));
    }
    if ctx.genus() != params.q {
        return Err(Error::Domain("kernel genus does not match the order"));
    }
    let rho = params.rho;
    let (lo, hi) = s_truncation(params, 1e-3 * ctx.quad.abs_tol)?;
    let (x_lo, x_hi) = (math::ln(lo), math::ln(hi));

    let mut points = Vec::new();
    let mut x = x_lo;
    while x < x_hi {
        points.push(x);
        x += 2.0;
    }
    points.push(x_hi);

    match form {
        SForm::Derivative => integrate_with_breakpoints(
            |x| {
                let r = math::exp(x);
                math::exp(x * (1.0 - rho)) * ctx.max_derivative(r).unwrap_or(f64::NAN)
            },
            &points,
            &ctx.quad,
        ),
        SForm::Direct => integrate_with_breakpoints(
            |x| rho * math::exp(-rho * x) * ctx.max(math::exp(x)),
            &points,
            &ctx.quad,
        ),
    }
}

/// `M_q` and `t·M_q'` tabulated on a lattice uniform in `ln t`, with monotone
/// piecewise-cubic interpolation.
///
/// `M_q` is interpolated by Hermite cubics whose tangents are the tabulated
/// slopes `dM_q/d ln t = t·M_q'(t)`; the slope itself by a Fritsch–Carlson
/// monotone cubic. Lattice nodes sit at `k·ln(10)/per_decade` for integer
/// `k`, so tables built over different ranges agree at shared nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    q: u32,
    x0: f64,
    h: f64,
    max: Vec<f64>,
    max_tangent: Vec<f64>,
    slope: Vec<f64>,
    slope_tangent: Vec<f64>,
}

impl KernelTable {
    pub const DEFAULT_LO: f64 = 1e-6;
    pub const DEFAULT_HI: f64 = 1e6;
    pub const DEFAULT_PER_DECADE: usize = 512;

    pub fn build(ctx: &KernelContext, lo: f64, hi: f64, per_decade: usize) -> Result<Self> {
        if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(Error::Domain("table range must satisfy 0 < lo < hi"));
        }
        if per_decade < 4 {
            return Err(Error::Domain("table needs at least 4 nodes per decade"));
        }
        let h = math::LN_10 / per_decade as f64;
        let k_lo = math::floor(math::ln(lo) / h) as i64;
        let k_hi = math::ceil(math::ln(hi) / h) as i64;
        let n = (k_hi - k_lo + 1) as usize;
        let x0 = k_lo as f64 * h;

        let mut max = Vec::with_capacity(n);
        let mut slope = Vec::with_capacity(n);
        for i in 0..n {
            let t = math::exp(x0 + i as f64 * h);
            let m0 = ctx.max(t);
            let step = crate::numerics::DERIVATIVE_STEP * t;
            let full = (ctx.max(t + step) - m0) / step;
            let half = (ctx.max(t + 0.5 * step) - m0) / (0.5 * step);
            max.push(m0);
            slope.push(t * (2.0 * half - full));
        }

        let max_tangent = limited_tangents(&max, slope.clone(), h);
        let slope_tangent = limited_tangents(&slope, centred_tangents(&slope, h), h);
        Ok(Self {
            q: ctx.genus(),
            x0,
            h,
            max,
            max_tangent,
            slope,
            slope_tangent,
        })
    }

    pub fn genus(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.max.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max.is_empty()
    }

    /// Node spacing in `ln t`.
    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn node(&self, i: usize) -> f64 {
        math::exp(self.log_node(i))
    }

    pub fn log_node(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    /// Smallest and largest tabulated `t`.
    pub fn range(&self) -> (f64, f64) {
        (self.node(0), self.node(self.len() - 1))
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.range();
        a <= lo && hi <= b
    }

    /// Tabulated `(M_q, t·M_q')` at node `i`.
    pub fn node_values(&self, i: usize) -> (f64, f64) {
        (self.max[i], self.slope[i])
    }

    /// Cell index and local coordinate for `x = ln t`.
    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let u = (x - self.x0) / self.h;
        let last = (self.len() - 1) as f64;
        if !(u >= 0.0 && u <= last) {
            return None;
        }
        let i = (math::floor(u) as usize).min(self.len() - 2);
        Some((i, u - i as f64))
    }

    fn hermite(values: &[f64], tangents: &[f64], h: f64, i: usize, s: f64) -> f64 {
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * values[i] + h10 * h * tangents[i] + h01 * values[i + 1] + h11 * h * tangents[i + 1]
    }

    /// Derivative in `x` of the cubic on cell `i` at local coordinate `s`.
    fn hermite_derivative(values: &[f64], tangents: &[f64], h: f64, i: usize, s: f64) -> f64 {
        let s2 = s * s;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        (d00 * values[i] + d01 * values[i + 1]) / h + d10 * tangents[i] + d11 * tangents[i + 1]
    }

    /// Interpolated `M_q(t)`, `None` outside the table.
    pub fn max(&self, t: f64) -> Option<f64> {
        let (i, s) = self.locate(math::ln(t))?;
        Some(Self::hermite(&self.max, &self.max_tangent, self.h, i, s))
    }

    /// Interpolated `t·M_q'(t)`, `None` outside the table.
    pub fn slope(&self, t: f64) -> Option<f64> {
        let (i, s) = self.locate(math::ln(t))?;
        Some(Self::hermite(&self.slope, &self.slope_tangent, self.h, i, s))
    }

    /// `∫ n(x) dG(x)` over `[x_from, x_to]` (in `x = ln t`), where `G` is the
    /// interpolated slope `t·M_q'(t)` and `n` is affine between consecutive
    /// `breaks`. Each piece is integrated exactly by 2-point Gauss–Legendre,
    /// which is exact for the cubic `n·G'`. Returns `None` when the range
    /// leaves the table.
    pub fn stieltjes_against_slope<N: FnMut(f64) -> f64>(
        &self,
        mut n: N,
        x_from: f64,
        x_to: f64,
        breaks: &[f64],
    ) -> Option<f64> {
        if !(x_from <= x_to) {
            return None;
        }
        self.locate(x_from)?;
        self.locate(x_to)?;
        if x_from == x_to {
            return Some(0.0);
        }
        let mut cuts: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|&b| b > x_from && b < x_to)
            .collect();
        let first_node = math::ceil((x_from - self.x0) / self.h) as usize;
        let mut i = first_node;
        while i < self.len() && self.log_node(i) < x_to {
            let x = self.log_node(i);
            if x > x_from {
                cuts.push(x);
            }
            i += 1;
        }
        cuts.push(x_from);
        cuts.push(x_to);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        const G: f64 = 0.577_350_269_189_625_8;
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let (cell, _) = self.locate(mid)?;
            let base = self.log_node(cell);
            for x in [mid - half * G, mid + half * G] {
                let s = (x - base) / self.h;
                let dg = Self::hermite_derivative(&self.slope, &self.slope_tangent, self.h, cell, s);
                total += half * n(x) * dg;
            }
        }
        Some(total)
    }
}

fn centred_tangents(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| match i {
            0 => (values[1] - values[0]) / h,
            i if i == n - 1 => (values[n - 1] - values[n - 2]) / h,
            i => (values[i + 1] - values[i - 1]) / (2.0 * h),
        })
        .collect()
}

/// Fritsch–Carlson: clamp Hermite tangents so every cell where the data is
/// monotone stays monotone.
fn limited_tangents(values: &[f64], mut tangents: Vec<f64>, h: f64) -> Vec<f64> {
    for i in 0..values.len() - 1 {
        let delta = (values[i + 1] - values[i]) / h;
        if delta == 0.0 {
            tangents[i] = 0.0;
            tangents[i + 1] = 0.0;
            continue;
        }
        if tangents[i] / delta < 0.0 {
            tangents[i] = 0.0;
        }
        if tangents[i + 1] / delta < 0.0 {
            tangents[i + 1] = 0.0;
        }
        let alpha = tangents[i] / delta;
        let beta = tangents[i + 1] / delta;
        let r2 = alpha * alpha + beta * beta;
        if r2 > 9.0 {
            let tau = 3.0 / math::sqrt(r2);
            tangents[i] = tau * alpha * delta;
            tangents[i + 1] = tau * beta * delta;
        }
    }
    tangents
}
