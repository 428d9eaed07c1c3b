//! Canonical Hadamard–Weierstrass integrals of finite point-mass measures,
//!
//! ```text
//! U_q^μ(z) = ∫ K_q(z/w) dμ(w) = Σ_j m_j K_q(z/w_j),
//! ```
//!
//! i.e. `ln|P(z)|` for the canonical product `P` with zeros `w_j` of
//! multiplicity `m_j` when the masses are integers.

use crate::error::{Error, Result};
use crate::kernel::{kernel_eval, KernelContext, OrderParams};
use crate::math;
use crate::measures::{ComplexPoint, DiscreteMeasure};
use crate::numerics::maximize_on_circle;

/// `U_q^μ` for a discrete measure `μ`.
#[derive(Debug, Clone)]
pub struct CanonicalIntegral {
    measure: DiscreteMeasure,
    ctx: KernelContext,
}

/// Smallest trapezoid rule used by [`CanonicalIntegral::circle_mean`].
pub const CIRCLE_MEAN_NODES: usize = 4096;
const CIRCLE_MEAN_MAX_NODES: usize = 1 << 22;

impl CanonicalIntegral {
    /// Uses the genus of `ctx`; `KernelContext::for_order` gives `q = ⌊ρ⌋`.
    pub fn new(measure: DiscreteMeasure, ctx: KernelContext) -> Self {
        Self { measure, ctx }
    }

    /// Canonical integral of order `rho`, genus `⌊rho⌋`.
    pub fn for_order(measure: DiscreteMeasure, rho: f64) -> Result<Self> {
        let params = OrderParams::new(rho)?;
        Ok(Self::new(measure, KernelContext::new(params.q)))
    }

    /// Explicit genus, for exploratory use.
    pub fn with_genus(measure: DiscreteMeasure, q: u32) -> Self {
        Self::new(measure, KernelContext::new(q))
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn context(&self) -> &KernelContext {
        &self.ctx
    }

    pub fn genus(&self) -> u32 {
        self.ctx.genus()
    }

    /// Replaces the kernel context, e.g. with one carrying a table.
    pub fn with_context(mut self, ctx: KernelContext) -> Self {
        self.ctx = ctx;
        self
    }

    /// `U_q^μ(z)`; `−∞` exactly when `z` is an atom.
    pub fn evaluate(&self, z: ComplexPoint) -> f64 {
        let q = self.genus();
        let mut sum = 0.0;
        for atom in self.measure.atoms() {
            if z == atom.point {
                return f64::NEG_INFINITY;
            }
            let k = kernel_eval(q, z / atom.point);
            if k == f64::NEG_INFINITY {
                return k;
            }
            sum += atom.mass * k;
        }
        sum
    }

    /// `(θ*, M_u(r))`, the maximum of `U` on `|z| = r`.
    pub fn circle_argmax(&self, r: f64) -> (f64, f64) {
        if r == 0.0 {
            return (0.0, self.evaluate(ComplexPoint::ZERO));
        }
        maximize_on_circle(
            |theta| self.evaluate(ComplexPoint::from_polar(r, theta)),
            &self.ctx.scan,
        )
    }

    /// `M_u(r) = max_{|z|=r} U_q^μ(z)`.
    pub fn circle_max(&self, r: f64) -> f64 {
        self.circle_argmax(r).1
    }

    /// `(1/2π)∫ U(r e^{iθ}) dθ` by the periodic trapezoid rule, doubling the
    /// node count from 4096 until successive values agree to the context's
    /// quadrature tolerance. Equal to `N_μ(r)` for every genus.
    pub fn circle_mean(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain("circle mean needs r > 0"));
        }
        if self
            .measure
            .profile()
            .radii()
            .iter()
            .any(|&a| (r - a).abs() <= 1e-9 * a.max(1.0))
        {
            return Err(Error::SingularCircle { r });
        }
        let sample = |n: usize, k: usize| {
            self.evaluate(ComplexPoint::from_polar(
                r,
                math::TAU * k as f64 / n as f64,
            ))
        };
        let mut n = CIRCLE_MEAN_NODES;
        let mut mean = (0..n).map(|k| sample(n, k)).sum::<f64>() / n as f64;
        loop {
            let doubled = 2 * n;
            let odd = (0..n).map(|k| sample(doubled, 2 * k + 1)).sum::<f64>() / n as f64;
            let refined = 0.5 * (mean + odd);
            let change = (refined - mean).abs();
            mean = refined;
            n = doubled;
            if change <= self.ctx.quad.abs_tol.max(self.ctx.quad.rel_tol * mean.abs()) {
                return Ok(mean);
            }
            if n >= CIRCLE_MEAN_MAX_NODES {
                return Err(Error::NonConvergence {
                    estimate: mean,
                    error_estimate: change,
                    subdivisions: n,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Atom;
    use core::f64::consts::{LN_2, PI};

    fn unit_at_one(q: u32) -> CanonicalIntegral {
        CanonicalIntegral::with_genus(DiscreteMeasure::unit_atoms([ComplexPoint::ONE]).unwrap(), q)
    }

    fn roots_of_unity(n: usize) -> DiscreteMeasure {
        DiscreteMeasure::unit_atoms(
            (0..n).map(|k| ComplexPoint::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let u = unit_at_one(0);
        assert!((u.evaluate(ComplexPoint::new(-1.0, 0.0)) - LN_2).abs() < 1e-15);
        // Π(1 − z/ω) = 1 − z⁵
        let u5 = CanonicalIntegral::with_genus(roots_of_unity(5), 0);
        let v = u5.evaluate(ComplexPoint::new(2.0, 0.0));
        assert!((v - 31f64.ln()).abs() < 1e-12, "{v}");
        for atom in u5.measure().atoms() {
            assert_eq!(u5.evaluate(atom.point), f64::NEG_INFINITY);
        }
    }

    #[test]
    fn circle_max_examples() {
        let u = unit_at_one(0);
        for &r in &[0.1, 0.5, 2.0, 10.0] {
            assert!((u.circle_max(r) - (1.0 + r).ln()).abs() < 1e-14);
        }
        let u5 = CanonicalIntegral::with_genus(roots_of_unity(5), 0);
        assert!((u5.circle_max(2.0) - 33f64.ln()).abs() < 1e-12);
        let far = CanonicalIntegral::with_genus(
            DiscreteMeasure::unit_atoms([ComplexPoint::new(10.0, 0.0)]).unwrap(),
            0,
        );
        assert_eq!(far.circle_max(0.0), 0.0);
    }

    #[test]
    fn circle_mean_examples() {
        let u = unit_at_one(0);
        assert!((u.circle_mean(2.0).unwrap() - LN_2).abs() < 1e-10);
        assert!(u.circle_mean(0.5).unwrap().abs() < 1e-10);
        let two = CanonicalIntegral::with_genus(
            DiscreteMeasure::unit_atoms([ComplexPoint::ONE, ComplexPoint::new(0.0, 2.0)]).unwrap(),
            1,
        );
        assert!((two.circle_mean(4.0).unwrap() - 3.0 * LN_2).abs() < 1e-10);
        assert_eq!(u.circle_mean(1.0), Err(Error::SingularCircle { r: 1.0 }));
    }

    #[test]
    fn masses_scale_terms() {
        let m = DiscreteMeasure::new(vec![Atom::new(ComplexPoint::new(0.0, 3.0), 2.5)]).unwrap();
        let u = CanonicalIntegral::with_genus(m, 2);
        let z = ComplexPoint::new(1.0, 1.0);
        let expected = 2.5 * kernel_eval(2, z / ComplexPoint::new(0.0, 3.0));
        assert_eq!(u.evaluate(z), expected);
    }
}
