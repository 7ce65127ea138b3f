//! A desk-scale laboratory for the geometric Lorenz attractor.
//!
//! The crate realizes one concrete model: a one-dimensional Lorenz expanding
//! map `f(x) = sign(x)(mu |x|^rho - 1)`, the two-dimensional return map
//! `P(x, y) = (f(x), H(x, y))` on the cross section, and an explicit
//! cube-and-tube suspension flow whose roof function is
//! `r0 + ln(1/|x|) / lambda3`. On top of that model it provides
//!
//! * interval iteration with exact discontinuity bookkeeping and
//!   eventually-onto certificates ([`expanding_map`]),
//! * cone-field and axiom verification plus orbit traces ([`return_map`]),
//! * itineraries, cylinders, periodic orbits and horseshoes ([`symbolic`]),
//! * flow-invariant measures, a fixed weak* metric and entropy
//!   ([`measures`]),
//! * a one-parameter perturbation family, the connecting solver, and the
//!   homoclinic-loop and isolation experiments ([`connecting`]),
//! * configuration, reports and SVG plots for the command line ([`cli`]).

// `!(x > 0.0)` guards are deliberate: they reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod connecting;
pub mod dictionary;
pub mod error;
pub mod expanding_map;
pub mod measures;
pub mod quadrature;
pub mod return_map;
pub mod symbolic;

pub use error::{LabError, Result};
pub use expanding_map::{Interval, ModelParams, QuotientMap};
pub use return_map::SectionPoint;
