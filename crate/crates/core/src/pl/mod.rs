//! Increasing piecewise-linear maps of `[0,1]` and of its closed subintervals.

mod kernel;
mod map;
mod partial;
#[cfg(test)]
mod strategies;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub use map::{PLMap, Side};
pub use partial::{FixedPointSet, PartialPLMap};

/// How a written word `l_1 l_2 ... l_k` turns into a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrder {
    /// Juxtaposition is function composition: `l_k` acts first.
    RightmostFirst,
    /// `l_1` acts first.
    LeftmostFirst,
}

/// The single reading convention used by every word evaluation in the crate.
///
/// Pinned by the presentation check: with `x_{m+1} = x_0^-1 . x_m . x_0`,
/// the relations `x_j x_i = x_i x_{j+1}` hold for the A, B realization of F
/// only under this reading.
pub const WORD_ORDER: WordOrder = WordOrder::RightmostFirst;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Breakpoint {
    pub t: Rational,
    pub y: Rational,
}

impl Breakpoint {
    pub fn new(t: Rational, y: Rational) -> Self {
        Breakpoint { t, y }
    }
}

impl From<(Rational, Rational)> for Breakpoint {
    fn from((t, y): (Rational, Rational)) -> Self {
        Breakpoint { t, y }
    }
}

/// Outcome of testing a map against the defining conditions of F(n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    pub n: u32,
    /// `q` with slope `n^q`, one per affine piece.
    pub slope_exponents: Vec<i64>,
    /// Minimal `r` with `t_i * n^r` integral, one per breakpoint.
    pub breakpoint_levels: Vec<u32>,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure_reason: Option<String>,
}

/// Group-like operations shared by total and partial maps, used by word evaluation.
pub trait PlElement: Clone {
    fn identity() -> Self;
    /// `x -> self(inner(x))`.
    fn compose(&self, inner: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl PlElement for PLMap {
    fn identity() -> Self {
        PLMap::identity()
    }
    fn compose(&self, inner: &Self) -> Self {
        PLMap::compose(self, inner)
    }
    fn inverse(&self) -> Self {
        PLMap::inverse(self)
    }
}

impl PlElement for PartialPLMap {
    fn identity() -> Self {
        PartialPLMap::from(PLMap::identity())
    }
    fn compose(&self, inner: &Self) -> Self {
        PartialPLMap::compose(self, inner)
    }
    fn inverse(&self) -> Self {
        PartialPLMap::inverse(self)
    }
}

#[derive(Serialize, Deserialize)]
struct RawPoints {
    breakpoints: Vec<(Rational, Rational)>,
}

fn to_pairs(points: &[Breakpoint]) -> Vec<(Rational, Rational)> {
    points.iter().map(|p| (p.t.clone(), p.y.clone())).collect()
}
