use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::kernel;
use super::{to_pairs, Breakpoint, MembershipCertificate, PartialPLMap, RawPoints};

/// Increasing piecewise-linear bijection of `[0,1]` in canonical form.
///
/// Breakpoints run from `(0,0)` to `(1,1)`, strictly increasing in both
/// coordinates, with no interior breakpoint between two pieces of equal
/// slope. Two maps are equal iff their breakpoint lists are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    points: Vec<Breakpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl PLMap {
    /// Builds a map from breakpoints, merging collinear interior points.
    pub fn new<P: Into<Breakpoint>>(points: impl IntoIterator<Item = P>) -> Result<Self> {
        let points: Vec<Breakpoint> = points.into_iter().map(Into::into).collect();
        let (Some(first), Some(last)) = (points.first(), points.last()) else {
            return Err(Error::BadEndpoints);
        };
        if points.len() < 2
            || !first.t.is_zero()
            || !first.y.is_zero()
            || !last.t.is_one()
            || !last.y.is_one()
        {
            return Err(Error::BadEndpoints);
        }
        kernel::check_increasing(&points)?;
        Ok(PLMap {
            points: kernel::canonicalize(points),
        })
    }

    /// Shorthand for literal breakpoints `(t_num, t_den, y_num, y_den)`.
    pub fn from_fracs(list: &[(i64, i64, i64, i64)]) -> Result<Self> {
        PLMap::new(
            list.iter()
                .map(|&(a, b, c, d)| (Rational::frac(a, b), Rational::frac(c, d))),
        )
    }

    pub fn identity() -> Self {
        PLMap {
            points: vec![
                Breakpoint::new(Rational::zero(), Rational::zero()),
                Breakpoint::new(Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        kernel::eval(&self.points, x).ok_or_else(|| Error::OutOfDomain(x.to_string()))
    }

    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational> {
        kernel::eval_inverse(&self.points, y).ok_or_else(|| Error::OutOfDomain(y.to_string()))
    }

    /// `x -> self(inner(x))`.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        PLMap {
            points: kernel::compose(&self.points, &inner.points),
        }
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            points: kernel::inverse(&self.points),
        }
    }

    /// `self` composed with itself `k` times; negative `k` uses the inverse.
    pub fn pow(&self, k: i64) -> PLMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = PLMap::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn slopes(&self) -> Vec<Rational> {
        kernel::slopes(&self.points)
    }

    /// One-sided or two-sided derivative at `x`.
    ///
    /// At the endpoints 0 and 1 the two-sided slope is the only one-sided
    /// slope available. At an interior breakpoint the two-sided slope is an
    /// error, since canonical form guarantees the two sides differ there.
    pub fn slope_at(&self, x: &Rational, side: Side) -> Result<Rational> {
        if x.is_negative() || x > &Rational::one() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let idx = self.points.partition_point(|p| &p.t < x);
        let at_breakpoint = self.points[idx].t == *x;
        let left = |idx: usize| kernel::piece_slope(&self.points, idx - 1);
        let right = |idx: usize| {
            if at_breakpoint {
                kernel::piece_slope(&self.points, idx)
            } else {
                kernel::piece_slope(&self.points, idx - 1)
            }
        };
        match side {
            Side::Left if x.is_zero() => Err(Error::OutOfDomain(x.to_string())),
            Side::Right if x.is_one() => Err(Error::OutOfDomain(x.to_string())),
            Side::Left => Ok(left(idx)),
            Side::Right => Ok(right(idx)),
            Side::TwoSided if x.is_zero() => Ok(right(idx)),
            Side::TwoSided if x.is_one() => Ok(left(idx)),
            Side::TwoSided if at_breakpoint => Err(Error::NonDifferentiable(x.to_string())),
            Side::TwoSided => Ok(right(idx)),
        }
    }

    pub fn check_membership(&self, n: u32) -> MembershipCertificate {
        kernel::certify(&self.points, n)
    }

    pub fn ensure_member(&self, n: u32) -> Result<()> {
        let cert = self.check_membership(n);
        if cert.verdict {
            Ok(())
        } else {
            Err(Error::NotMember {
                n,
                reason: cert.failure_reason.unwrap_or_default(),
            })
        }
    }

    /// The restriction of `self` to `[a, b]`.
    pub fn restrict(&self, a: &Rational, b: &Rational) -> Result<PartialPLMap> {
        PartialPLMap::restrict(self, a, b)
    }
}

impl Serialize for PLMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawPoints {
            breakpoints: to_pairs(&self.points),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPoints::deserialize(deserializer)?;
        PLMap::new(raw.breakpoints).map_err(serde::de::Error::custom)
    }
}
