//! Computational laboratory for projection-method dynamics and discrete
//! geometry experiments: discrete and continuous-time Douglas–Rachford
//! iterations on pairs of constraint sets, an exact support-face transform on
//! finite polytope families with cycle detection, minimax enclosing balls,
//! graph k-linkage decisions, and edge unfoldings of 3-polytopes with overlap
//! detection.
//!
//! The exact modules ([`rat`], [`hull`], [`transform`]) run on
//! arbitrary-precision rationals so set and family equality is decided with
//! zero tolerance; the numeric modules share the [`float::Tolerance`] policy.

pub mod ball;
pub mod dynamics;
pub mod error;
pub mod float;
pub mod hull;
pub mod linkage;
pub mod polygon;
pub mod projections;
pub mod rat;
pub mod transform;
pub mod unfolding;

mod lp;

pub use error::{Error, Result};
pub use float::{FloatVec, Tolerance};
pub use rat::{Rat, RatVec};
