//! Growth of canonical Hadamard–Weierstrass integrals.
//!
//! The crate evaluates the Weierstrass primary kernel
//! `K_q(z) = ln|1 - z| + Σ_{k=1..q} Re(z^k)/k`, its circle maximum `M_q(r)`,
//! the growth constant `S(ρ)`, canonical integrals `U_q^μ` of finite
//! point-mass measures, and checks the integral and type bounds that relate
//! the growth of `U_q^μ` to the counting function `μ^rad` and the averaged
//! counting function `N_μ` of the measure.
//!
//! Everything here is pure computation over `alloc`; file formats, the CLI and
//! parallel sweeps live in the `canonical-growth-tools` crate.

#![cfg_attr(not(test), no_std)]
// NaN must fail validation, so `!(x > 0.0)` is intended
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod bounds;
pub mod canonical;
pub mod error;
pub mod kernel;
pub mod measures;
pub mod numerics;


pub use crate::bounds::{BoundReport, BoundRow, ReportParams, TypeBoundReport};
pub use crate::canonical::CanonicalIntegral;
pub use crate::error::{Error, Result};
pub use crate::kernel::{genus_for_order, KernelContext, KernelTable, OrderParams, SForm};
pub use crate::measures::{
    AngleRule, Atom, ComplexPoint, DiscreteMeasure, GeometricGrid, GrowthEstimate, RadialProfile,
};
pub use crate::numerics::{CircleScanSettings, QuadratureSettings};
