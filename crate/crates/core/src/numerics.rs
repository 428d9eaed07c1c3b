//! Shared numeric kernels: adaptive Gauss–Kronrod quadrature on finite and
//! semi-infinite ranges, maximization of periodic functions, one-sided
//! derivatives and Stieltjes sums against step functions.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSettings {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain("abs_tol must be positive"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Domain("rel_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, result: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * result.abs())
    }
}

/// Resolution of [`maximize_on_circle`]: a uniform coarse scan followed by
/// golden-section refinement of every coarse local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleScanSettings {
    /// Samples on the full circle.
    pub coarse_points: usize,
    /// Width of the final golden-section bracket in θ.
    pub refine_tol: f64,
}

impl Default for CircleScanSettings {
    fn default() -> Self {
        Self {
            coarse_points: 1024,
            refine_tol: 1e-12,
        }
    }
}

impl CircleScanSettings {
    pub fn new(coarse_points: usize, refine_tol: f64) -> Result<Self> {
        let s = Self {
            coarse_points,
            refine_tol,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 8 {
            return Err(Error::Domain("coarse_points must be at least 8"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::Domain("refine_tol must be positive"));
        }
        Ok(())
    }
}

// Gauss–Kronrod 10/21 abscissae and weights (QUADPACK qk21), digits as published.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_215_311,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = math::powf(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor > scaled {
            scaled = floor;
        }
    }
    scaled
}

fn gauss_kronrod_21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() || !fc.is_finite() {
        return Err(Error::Domain("integrand is not finite on the integration range"));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over the finite range split at `points` (sorted, at least
/// two entries). Each piece seeds the adaptive bisection, so breakpoints at
/// known kinks or jumps of `f` make the quadrature much cheaper.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if points.len() < 2 {
        return Err(Error::Domain("at least two breakpoints are needed"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("breakpoints must be finite"));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("integration limits must satisfy a < b"));
    }

    let mut heap = BinaryHeap::with_capacity(points.len() + 16);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let p = gauss_kronrod_21(&mut f, w[0], w[1])?;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    let mut subdivisions = 0;
    while total_err > settings.target(total) {
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: total,
                error_estimate: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel cannot be split further in floating point
            return Err(Error::NonConvergence {
                estimate: total,
                error_estimate: total_err,
                subdivisions,
            });
        }
        let left = gauss_kronrod_21(&mut f, worst.a, mid)?;
        let right = gauss_kronrod_21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        // the running sums drift; resynchronize from time to time
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Integrates `f` over `(a, b)` where `b` may be `f64::INFINITY`.
///
/// Unbounded ranges are split at `c = max(a, 1)`: the finite part is
/// integrated directly and the tail through the inversion `t = 1/u`, which
/// maps `(c, ∞)` onto `(0, 1/c)`. The caller is responsible for a tail that
/// decays fast enough to be integrable.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if a.is_nan() || b.is_nan() || !a.is_finite() {
        return Err(Error::Domain("integration limits must be numbers with a finite lower end"));
    }
    if !(a < b) {
        return Err(Error::Domain("integration limits must satisfy a < b"));
    }
    if b.is_finite() {
        return integrate_with_breakpoints(f, &[a, b], settings);
    }

    let split = a.max(1.0);
    let half = QuadratureSettings {
        abs_tol: 0.5 * settings.abs_tol,
        ..*settings
    };
    let head = if split > a {
        integrate_with_breakpoints(&mut f, &[a, split], &half)?
    } else {
        0.0
    };
    let tail = integrate_with_breakpoints(
        |u: f64| {
            let t = 1.0 / u;
            if t.is_finite() {
                f(t) / (u * u)
            } else {
                0.0
            }
        },
        &[0.0, 1.0 / split],
        &half,
    )?;
    let total = head + tail;
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::DivergentTail)
    }
}

/// Maximizes `g` on `[lo, hi]`: a scan with `intervals + 1` equally spaced
/// samples (endpoints included), then a golden-section search around every
/// sample that is at least as large as its neighbours (the first one of a
/// plateau). Non-finite samples are skipped. Ties resolve to the smallest
/// abscissa.
pub fn maximize_on_interval<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    intervals: usize,
    refine_tol: f64,
) -> (f64, f64) {
    let n = intervals.max(2);
    let step = (hi - lo) / n as f64;
    let samples: Vec<f64> = (0..=n)
        .map(|k| {
            let x = if k == n { hi } else { lo + step * k as f64 };
            sanitize(g(x))
        })
        .collect();
    let at = |k: usize| if k == n { hi } else { lo + step * k as f64 };

    let mut best = (lo, f64::NEG_INFINITY);
    for k in 0..=n {
        let v = samples[k];
        if v == f64::NEG_INFINITY {
            continue;
        }
        let left = if k == 0 { f64::NEG_INFINITY } else { samples[k - 1] };
        let right = if k == n { f64::NEG_INFINITY } else { samples[k + 1] };
        // only the first sample of a plateau is refined
        if v < left || v < right || v == left {
            continue;
        }
        let a = if k == 0 { at(0) } else { at(k - 1) };
        let b = if k == n { at(n) } else { at(k + 1) };
        let candidate = refine(&mut g, a, b, (at(k), v), refine_tol);
        if candidate.1 > best.1 {
            best = candidate;
        }
    }
    best
}

/// Maximizes a continuous 2π-periodic function over `[0, 2π)`.
///
/// Returns `(θ*, g(θ*))`. The coarse scan uses `settings.coarse_points`
/// equally spaced angles starting at 0; every coarse local maximum is refined
/// by golden-section search on its two neighbouring cells, and ties resolve to
/// the smallest angle.
pub fn maximize_on_circle<G: FnMut(f64) -> f64>(
    mut g: G,
    settings: &CircleScanSettings,
) -> (f64, f64) {
    let n = settings.coarse_points.max(8);
    let step = math::TAU / n as f64;
    let samples: Vec<f64> = (0..n).map(|k| sanitize(g(step * k as f64))).collect();

    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let v = samples[k];
        if v == f64::NEG_INFINITY {
            continue;
        }
        let left = samples[(k + n - 1) % n];
        let right = samples[(k + 1) % n];
        if v < left || v < right || v == left {
            continue;
        }
        let centre = step * k as f64;
        let (x, value) = refine(
            &mut g,
            centre - step,
            centre + step,
            (centre, v),
            settings.refine_tol,
        );
        let theta = if x == centre {
            centre
        } else {
            math::rem_euclid(x, math::TAU)
        };
        if value > best.1 || (value == best.1 && theta < best.0) {
            best = (theta, value);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        // flat scan: every sample equals its left neighbour
        if let Some(k) = samples.iter().position(|&v| v > f64::NEG_INFINITY) {
            best = (step * k as f64, samples[k]);
        }
    }
    best
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search on `[a, b]`; keeps `seed` unless the search finds a
/// strictly larger value.
fn refine<G: FnMut(f64) -> f64>(
    g: &mut G,
    a: f64,
    b: f64,
    seed: (f64, f64),
    tol: f64,
) -> (f64, f64) {
    let (x, v) = golden_section_max(&mut *g, a, b, tol);
    let mut best = seed;
    if v > best.1 {
        best = (x, v);
    }
    // the maximum may sit on the bracket edge
    for edge in [a, b] {
        let ve = sanitize(g(edge));
        if ve > best.1 {
            best = (edge, ve);
        }
    }
    best
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max<G: FnMut(f64) -> f64>(
    mut g: G,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = sanitize(g(c));
    let mut gd = sanitize(g(d));
    // 200 iterations shrink any bracket below f64 resolution
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = sanitize(g(c));
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = sanitize(g(d));
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Relative step of [`right_derivative`].
pub const DERIVATIVE_STEP: f64 = 1e-6;

/// One-sided (right) derivative of `f` at `t > 0`.
///
/// Forward differences with step `h = 1e-6·t` and one Richardson
/// extrapolation, `2·D(h/2) − D(h)`, which cancels the O(h) term.
pub fn right_derivative<F: FnMut(f64) -> f64>(mut f: F, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain("right derivative needs t > 0"));
    }
    let h = DERIVATIVE_STEP * t;
    let f0 = f(t);
    let full = (f(t + h) - f0) / h;
    let half = (f(t + 0.5 * h) - f0) / (0.5 * h);
    Ok(2.0 * half - full)
}

/// `Σ mass·g(location)` over the jumps of a step measure: the
/// Riemann–Stieltjes integral of `g` against that step function.
pub fn stieltjes_sum<G: FnMut(f64) -> f64>(mut g: G, jumps: &[(f64, f64)]) -> Result<f64> {
    let mut sum = 0.0;
    for &(location, mass) in jumps {
        if !(location > 0.0) || !location.is_finite() {
            return Err(Error::Domain("jump locations must be positive"));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain("jump masses must be positive"));
        }
        sum += mass * g(location);
    }
    Ok(sum)
}
