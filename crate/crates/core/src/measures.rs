//! Finite positive measures on ℂ with support away from the origin, their
//! counting functions `μ^rad(t) = μ({|z| ≤ t})`, the averaged counting
//! function `N_μ(t) = ∫₀^t μ^rad(s)/s ds`, and finite-grid estimators for the
//! order and type of a growth function.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math;

/// A point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self::new(r * math::cos(theta), r * math::sin(theta))
    }

    pub fn abs(self) -> f64 {
        math::hypot(self.re, self.im)
    }

    pub fn arg(self) -> f64 {
        math::atan2(self.im, self.re)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.re * c, self.im * c)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for ComplexPoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexPoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for ComplexPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for ComplexPoint {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for ComplexPoint {
    type Output = Self;
    // Smith's algorithm, avoids overflow for large denominators
    fn div(self, o: Self) -> Self {
        if o.re.abs() >= o.im.abs() {
            let ratio = o.im / o.re;
            let den = o.re + o.im * ratio;
            Self::new(
                (self.re + self.im * ratio) / den,
                (self.im - self.re * ratio) / den,
            )
        } else {
            let ratio = o.re / o.im;
            let den = o.re * ratio + o.im;
            Self::new(
                (self.re * ratio + self.im) / den,
                (self.im * ratio - self.re) / den,
            )
        }
    }
}

/// One point mass of a [`DiscreteMeasure`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub point: ComplexPoint,
    pub mass: f64,
}

impl Atom {
    pub fn new(point: ComplexPoint, mass: f64) -> Self {
        Self { point, mass }
    }

    pub fn unit(point: ComplexPoint) -> Self {
        Self { point, mass: 1.0 }
    }

    pub fn radius(&self) -> f64 {
        self.point.abs()
    }
}

/// A finite positive point-mass measure whose support excludes the origin.
///
/// Atoms are kept in input order; the sorted radial profile is computed once
/// at construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
    profile: StepProfile,
}

impl DiscreteMeasure {
    /// Validates the atoms: finite coordinates, strictly positive finite
    /// masses, and no atom at the origin.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (index, atom) in atoms.iter().enumerate() {
            if !atom.point.is_finite() {
                return Err(Error::InvalidMeasure {
                    index,
                    reason: "non-finite coordinates",
                });
            }
            if !(atom.mass > 0.0) || !atom.mass.is_finite() {
                return Err(Error::InvalidMeasure {
                    index,
                    reason: "mass must be positive and finite",
                });
            }
            if !(atom.radius() > 0.0) {
                return Err(Error::InvalidMeasure {
                    index,
                    reason: "atom at the origin",
                });
            }
        }
        let profile = StepProfile::from_jumps(atoms.iter().map(|a| (a.radius(), a.mass)))?;
        Ok(Self { atoms, profile })
    }

    /// Unit atoms at the given points.
    pub fn unit_atoms<I: IntoIterator<Item = ComplexPoint>>(points: I) -> Result<Self> {
        Self::new(points.into_iter().map(Atom::unit).collect())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.profile.total_mass()
    }

    /// Smallest atom radius, `None` for the empty measure.
    pub fn min_radius(&self) -> Option<f64> {
        self.profile.radii.first().copied()
    }

    pub fn max_radius(&self) -> Option<f64> {
        self.profile.radii.last().copied()
    }

    /// The step counting function of this measure.
    pub fn profile(&self) -> &StepProfile {
        &self.profile
    }

    pub fn radial_profile(&self) -> RadialProfile {
        RadialProfile::Step(self.profile.clone())
    }

    /// `μ^rad(t)`: total mass on the closed disc `|z| ≤ t`.
    pub fn counting_function(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    /// `N_μ(t)` in closed form.
    pub fn averaged_counting(&self, t: f64) -> f64 {
        self.profile.averaged(t)
    }

    /// Sum of the two measures (atoms concatenated).
    pub fn union(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        DiscreteMeasure::new(atoms).expect("union of valid measures is valid")
    }

    /// Image of the measure under `w ↦ c·w`, `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<DiscreteMeasure> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain("scale factor must be positive"));
        }
        DiscreteMeasure::new(
            self.atoms
                .iter()
                .map(|a| Atom::new(a.point.scale(c), a.mass))
                .collect(),
        )
    }
}

/// `μ^rad(t)` of a discrete measure.
pub fn counting_function(m: &DiscreteMeasure, t: f64) -> f64 {
    m.counting_function(t)
}

/// Nondecreasing right-continuous step function: jumps of size `masses[i]`
/// at the strictly increasing `radii[i]`.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepProfile {
    radii: Vec<f64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepProfile {
    /// Builds the profile from `(radius, mass)` pairs in any order; equal
    /// radii are merged. Radius 0 is allowed here (it makes `N_μ` diverge).
    pub fn from_jumps<I: IntoIterator<Item = (f64, f64)>>(jumps: I) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = jumps.into_iter().collect();
        for (index, &(r, m)) in pairs.iter().enumerate() {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidMeasure {
                    index,
                    reason: "jump radius must be nonnegative and finite",
                });
            }
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidMeasure {
                    index,
                    reason: "jump mass must be positive and finite",
                });
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut radii: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut masses: Vec<f64> = Vec::with_capacity(pairs.len());
        for (r, m) in pairs {
            match radii.last() {
                Some(&last) if last == r => *masses.last_mut().unwrap() += m,
                _ => {
                    radii.push(r);
                    masses.push(m);
                }
            }
        }
        let mut acc = 0.0;
        let cumulative = masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        Ok(Self {
            radii,
            masses,
            cumulative,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `(radius, mass)` pairs in increasing radius.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radii.iter().copied().zip(self.masses.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Number of jumps at radii `≤ t`.
    fn count_at_most(&self, t: f64) -> usize {
        self.radii.partition_point(|&r| r <= t)
    }

    /// `μ^rad(t)`; the closed-disc convention counts mass on `|z| = t`.
    pub fn value(&self, t: f64) -> f64 {
        match self.count_at_most(t) {
            0 => 0.0,
            k => self.cumulative[k - 1],
        }
    }

    /// `Σ_{ρ_j ≤ t} m_j ln(t/ρ_j)`, the exact `∫₀^t μ^rad(s)/s ds`.
    /// Infinite when a jump sits at radius 0.
    pub fn averaged(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        self.jumps()
            .take_while(|&(r, _)| r <= t)
            .map(|(r, m)| m * math::ln(t / r))
            .sum()
    }
}

/// `t ↦ μ^rad(t)`: either the step function of a discrete measure or the
/// synthetic power profile `σ·t^ρ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RadialProfile {
    Step(StepProfile),
    Power { sigma: f64, rho: f64 },
}

impl RadialProfile {
    pub fn power(sigma: f64, rho: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::Domain("power profile needs sigma >= 0"));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain("power profile needs rho > 0"));
        }
        Ok(RadialProfile::Power { sigma, rho })
    }

    /// `μ^rad(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Step(p) => p.value(t),
            RadialProfile::Power { sigma, rho } => {
                if t > 0.0 {
                    sigma * math::powf(t, *rho)
                } else {
                    0.0
                }
            }
        }
    }

    /// `N(t) = ∫₀^t μ^rad(s)/s ds`, evaluated in closed form.
    pub fn averaged(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain("averaged counting needs t > 0"));
        }
        match self {
            RadialProfile::Step(p) => {
                if p.radii.first().is_some_and(|&r| r == 0.0) {
                    return Err(Error::DivergentIntegral);
                }
                Ok(p.averaged(t))
            }
            RadialProfile::Power { sigma, rho } => Ok(sigma * math::powf(t, *rho) / rho),
        }
    }
}

/// `N_μ(t)` of a radial profile.
pub fn averaged_counting(p: &RadialProfile, t: f64) -> Result<f64> {
    p.averaged(t)
}

/// Splits `m` into the atoms on the closed disc `|w| ≤ radius` (compactly
/// supported, finite) and the rest.
pub fn split_measure(m: &DiscreteMeasure, radius: f64) -> (DiscreteMeasure, DiscreteMeasure) {
    let (inner, outer): (Vec<Atom>, Vec<Atom>) =
        m.atoms.iter().partition(|a| a.radius() <= radius);
    (
        DiscreteMeasure::new(inner).expect("subset of a valid measure"),
        DiscreteMeasure::new(outer).expect("subset of a valid measure"),
    )
}

/// Angles of synthesized zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AngleRule {
    /// Every atom on the ray `arg w = θ₀`.
    Fixed(f64),
    /// Golden-angle sequence `θ_j = j·π(3 − √5)`, equidistributed mod 2π.
    Equidistributed,
}

/// Unit atoms at `r_j = (j/σ)^{1/ρ}`, `j = 1..=count`, so that
/// `μ^rad(r_j) = j = σ·r_j^ρ` at every jump.
pub fn synthesize_power_zeros(
    sigma: f64,
    rho: f64,
    count: usize,
    angle_rule: AngleRule,
) -> Result<DiscreteMeasure> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain("sigma must be positive"));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain("rho must be positive"));
    }
    if count == 0 {
        return Err(Error::Domain("count must be positive"));
    }
    let golden_angle = math::PI * (3.0 - math::sqrt(5.0));
    let atoms = (1..=count)
        .map(|j| {
            let r = math::powf(j as f64 / sigma, 1.0 / rho);
            let point = match angle_rule {
                AngleRule::Fixed(0.0) => ComplexPoint::new(r, 0.0),
                AngleRule::Fixed(theta) => ComplexPoint::from_polar(r, theta),
                AngleRule::Equidistributed => {
                    ComplexPoint::from_polar(r, math::rem_euclid(j as f64 * golden_angle, math::TAU))
                }
            };
            Atom::unit(point)
        })
        .collect();
    DiscreteMeasure::new(atoms)
}

/// Geometric radius grid `r₀·ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeometricGrid {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl GeometricGrid {
    pub fn new(r0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Domain("grid start must be positive"));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(Error::Domain("grid ratio must exceed 1"));
        }
        if count < 8 {
            return Err(Error::Domain("growth grids need at least 8 points"));
        }
        Ok(Self { r0, ratio, count })
    }

    /// Grid with `count` points from `r_min` to `r_max` inclusive.
    pub fn spanning(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_max > r_min) || count < 2 {
            return Err(Error::Domain("grid needs r_max > r_min"));
        }
        let ratio = math::powf(r_max / r_min, 1.0 / (count - 1) as f64);
        Self::new(r_min, ratio, count)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.r0 * math::powf(self.ratio, k as f64)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }

    /// Index of the first point of the upper half.
    fn upper_start(&self) -> usize {
        self.count / 2
    }
}

/// Order (and optionally type) estimated from samples on a finite grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthEstimate {
    pub order: f64,
    /// `(ρ, type_ρ)` when a type was requested.
    pub type_at: Option<(f64, f64)>,
    pub grid: GeometricGrid,
    pub method: String,
}

fn ln_plus(x: f64) -> f64 {
    if x > 1.0 {
        math::ln(x)
    } else {
        0.0
    }
}

/// Margin around `ρ` inside which [`estimate_type`] reports the sampled
/// ratio; outside it the order estimate decides between type 0 and ∞.
pub const ORDER_MARGIN: f64 = 0.05;

fn order_from_samples(grid: &GeometricGrid, values: &[f64]) -> f64 {
    let start = grid.upper_start();
    let anchor_log = ln_plus(values[0]);
    let anchor_r = math::ln(grid.point(start));
    // long baselines only: staircase inputs make short secants noisy
    let first = values.len() / 2;
    let mut best = 0.0_f64;
    for (i, &v) in values.iter().enumerate().skip(first.max(1)) {
        let dr = math::ln(grid.point(start + i)) - anchor_r;
        let slope = (ln_plus(v) - anchor_log) / dr;
        best = best.max(slope);
    }
    best
}

/// Order of growth `limsup ln⁺f⁺(r)/ln r` from finite data.
///
/// Surrogate: the largest secant slope of `ln⁺f⁺` against `ln r` between the
/// first point of the upper half of the grid and each point of the top
/// quarter. It has
/// the same limsup as `ln⁺f⁺(r)/ln r`, is exact for `c·r^ρ` with `c ≥ 1` on any
/// grid where `f > 1`, and gives 0 for bounded functions.
pub fn estimate_order<F: FnMut(f64) -> f64>(mut f: F, grid: &GeometricGrid) -> GrowthEstimate {
    let values: Vec<f64> = (grid.upper_start()..grid.count)
        .map(|k| f(grid.point(k)).max(0.0))
        .collect();
    GrowthEstimate {
        order: order_from_samples(grid, &values),
        type_at: None,
        grid: *grid,
        method: String::from("max secant slope of ln+ f+ vs ln r over the upper half of the grid"),
    }
}

/// Type at order `ρ`, `limsup f⁺(r)/r^ρ`, from finite data.
///
/// The order is estimated first (see [`estimate_order`]). If it is below
/// `ρ − ORDER_MARGIN` the type is 0, if above `ρ + ORDER_MARGIN` it is +∞;
/// otherwise the type is the maximum of `f⁺(r)/r^ρ` over the upper half of
/// the grid.
pub fn estimate_type<F: FnMut(f64) -> f64>(
    mut f: F,
    rho: f64,
    grid: &GeometricGrid,
) -> Result<GrowthEstimate> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain("type needs rho > 0"));
    }
    let start = grid.upper_start();
    let values: Vec<f64> = (start..grid.count)
        .map(|k| f(grid.point(k)).max(0.0))
        .collect();
    let order = order_from_samples(grid, &values);
    let ty = if order < rho - ORDER_MARGIN {
        0.0
    } else if order > rho + ORDER_MARGIN {
        f64::INFINITY
    } else {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| v / math::powf(grid.point(start + i), rho))
            .fold(0.0, f64::max)
    };
    Ok(GrowthEstimate {
        order,
        type_at: Some((rho, ty)),
        grid: *grid,
        method: String::from(
            "max of f+/r^rho over the upper half of the grid; 0 or +inf when the order \
             estimate is outside rho +- 0.05",
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    fn radii_measure(radii: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::unit_atoms(radii.iter().map(|&r| ComplexPoint::new(r, 0.0))).unwrap()
    }

    #[test]
    fn counting_function_examples() {
        let m = radii_measure(&[1.0, 2.0, 3.0]);
        assert_eq!(m.counting_function(2.5), 2.0);
        assert_eq!(m.counting_function(0.5), 0.0);
        let single = DiscreteMeasure::new(vec![Atom::new(ComplexPoint::new(0.0, 2.0), 1.5)]).unwrap();
        assert_eq!(single.counting_function(2.0), 1.5);
    }

    #[test]
    fn rejects_atoms_at_origin() {
        let err = DiscreteMeasure::unit_atoms([ComplexPoint::ONE, ComplexPoint::ZERO]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidMeasure {
                index: 1,
                reason: "atom at the origin"
            }
        );
        assert!(DiscreteMeasure::new(vec![Atom::new(ComplexPoint::ONE, 0.0)]).is_err());
        assert!(DiscreteMeasure::new(vec![Atom::new(ComplexPoint::new(f64::NAN, 1.0), 1.0)]).is_err());
    }

    #[test]
    fn averaged_counting_examples() {
        let p = radii_measure(&[1.0, 2.0]).radial_profile();
        assert!((p.averaged(2.0).unwrap() - LN_2).abs() < 1e-15);
        assert!((p.averaged(4.0).unwrap() - 3.0 * LN_2).abs() < 1e-15);
        let power = RadialProfile::power(2.0, 0.5).unwrap();
        assert!((power.averaged(4.0).unwrap() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn averaged_counting_diverges_with_mass_at_origin() {
        let p = RadialProfile::Step(StepProfile::from_jumps([(0.0, 1.0), (1.0, 1.0)]).unwrap());
        assert_eq!(p.averaged(2.0), Err(Error::DivergentIntegral));
    }

    #[test]
    fn split_examples() {
        let m = radii_measure(&[1.0, 2.0, 3.0]);
        let (inner, outer) = split_measure(&m, 2.0);
        assert_eq!(inner.profile().radii(), &[1.0, 2.0]);
        assert_eq!(outer.profile().radii(), &[3.0]);
        let (inner, outer) = split_measure(&m, 0.5);
        assert!(inner.is_empty());
        assert_eq!(outer, m);
        let (inner, outer) = split_measure(&m, 10.0);
        assert_eq!(inner, m);
        assert!(outer.is_empty());
    }

    #[test]
    fn synthesized_radii() {
        let m = synthesize_power_zeros(1.0, 0.5, 4, AngleRule::Fixed(0.0)).unwrap();
        assert_eq!(m.profile().radii(), &[1.0, 4.0, 9.0, 16.0]);
        let m = synthesize_power_zeros(2.0, 1.0, 3, AngleRule::Fixed(0.0)).unwrap();
        assert_eq!(m.profile().radii(), &[0.5, 1.0, 1.5]);
        assert!(synthesize_power_zeros(0.0, 1.0, 3, AngleRule::Equidistributed).is_err());
        assert!(synthesize_power_zeros(1.0, -1.0, 3, AngleRule::Equidistributed).is_err());
        assert!(synthesize_power_zeros(1.0, 1.0, 0, AngleRule::Equidistributed).is_err());
    }

    #[test]
    fn synthesized_counting_hits_power_law_at_jumps() {
        let m = synthesize_power_zeros(3.0, 0.7, 50, AngleRule::Fixed(0.0)).unwrap();
        for (j, &r) in m.profile().radii().iter().enumerate() {
            assert_eq!(m.counting_function(r), (j + 1) as f64);
        }
    }

    fn dyadic(k_min: i32, k_max: i32) -> GeometricGrid {
        GeometricGrid::new(2f64.powi(k_min), 2.0, (k_max - k_min + 1) as usize).unwrap()
    }

    #[test]
    fn order_examples() {
        let grid = dyadic(4, 20);
        let e = estimate_order(|r| r.powi(3), &grid);
        assert!((e.order - 3.0).abs() < 1e-6, "{}", e.order);
        assert_eq!(estimate_order(|_| 5.0, &grid).order, 0.0);

        // unit atoms at j², j = 1..1000: μ^rad(t) = ⌊√t⌋ up to t = 10⁶
        let m = DiscreteMeasure::unit_atoms((1..=1000).map(|j| ComplexPoint::new((j * j) as f64, 0.0)))
            .unwrap();
        let e = estimate_order(|r| m.counting_function(r), &dyadic(0, 19));
        assert!((e.order - 0.5).abs() < 0.02, "{}", e.order);
    }

    #[test]
    fn type_examples() {
        let grid = dyadic(0, 40);
        let e = estimate_type(|r| 2.0 * r.sqrt(), 0.5, &grid).unwrap();
        assert!((e.type_at.unwrap().1 - 2.0).abs() < 1e-9);
        let e = estimate_type(|r| r.powf(0.4), 0.5, &grid).unwrap();
        assert!(e.type_at.unwrap().1.abs() < 0.05);
        let n = RadialProfile::power(1.0, 0.5).unwrap();
        let e = estimate_type(|r| n.averaged(r).unwrap(), 0.5, &grid).unwrap();
        assert!((e.type_at.unwrap().1 - 2.0).abs() < 1e-9);
        assert!(estimate_type(|r| r, 0.0, &grid).is_err());
    }

    #[test]
    fn synthesized_type_is_sigma() {
        let m = synthesize_power_zeros(1.0, 0.5, 1000, AngleRule::Equidistributed).unwrap();
        let e = estimate_type(|r| m.counting_function(r), 0.5, &dyadic(0, 19)).unwrap();
        assert!((e.type_at.unwrap().1 - 1.0).abs() < 0.01, "{:?}", e.type_at);
    }

    #[test]
    fn grid_validation() {
        assert!(GeometricGrid::new(1.0, 2.0, 7).is_err());
        assert!(GeometricGrid::new(1.0, 1.0, 10).is_err());
        assert!(GeometricGrid::new(0.0, 2.0, 10).is_err());
        let g = GeometricGrid::spanning(1.0, 1e6, 13).unwrap();
        assert!((g.point(12) - 1e6).abs() < 1e-6);
    }

    #[test]
    fn complex_division() {
        let z = ComplexPoint::new(3.0, -4.0);
        let w = ComplexPoint::new(-1.5, 2.0);
        let q = z / w;
        let back = q * w;
        assert!((back - z).abs() < 1e-14);
    }
}
