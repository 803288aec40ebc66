use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::kernel;
use super::{to_pairs, Breakpoint, MembershipCertificate, PLMap};

/// Increasing PL bijection between closed subintervals of `[0,1]`.
///
/// The domain is `[t_0, t_m]` of the breakpoint list. A single breakpoint is
/// a map on a degenerate interval and no breakpoints means the empty domain;
/// both arise naturally when composing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialPLMap {
    points: Vec<Breakpoint>,
}

impl PartialPLMap {
    pub fn empty() -> Self {
        PartialPLMap { points: Vec::new() }
    }

    pub fn new<P: Into<Breakpoint>>(points: impl IntoIterator<Item = P>) -> Result<Self> {
        let points: Vec<Breakpoint> = points.into_iter().map(Into::into).collect();
        let unit = |q: &Rational| !q.is_negative() && q <= &Rational::one();
        if let Some(bad) = points.iter().find(|p| !unit(&p.t) || !unit(&p.y)) {
            return Err(Error::OutOfDomain(format!("({}, {})", bad.t, bad.y)));
        }
        kernel::check_increasing(&points)?;
        Ok(PartialPLMap {
            points: kernel::canonicalize(points),
        })
    }

    /// Restriction of a total map to `[a, b]`; `a > b` gives the empty map.
    pub fn restrict(f: &PLMap, a: &Rational, b: &Rational) -> Result<Self> {
        if a > b {
            return Ok(PartialPLMap::empty());
        }
        let fa = f.eval(a)?;
        let fb = f.eval(b)?;
        if a == b {
            return Ok(PartialPLMap {
                points: vec![Breakpoint::new(a.clone(), fa)],
            });
        }
        let mut points = vec![Breakpoint::new(a.clone(), fa)];
        points.extend(
            f.breakpoints()
                .iter()
                .filter(|p| &p.t > a && &p.t < b)
                .cloned(),
        );
        points.push(Breakpoint::new(b.clone(), fb));
        Ok(PartialPLMap { points })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.points.len() == 1
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn domain(&self) -> Option<(Rational, Rational)> {
        Some((
            self.points.first()?.t.clone(),
            self.points.last()?.t.clone(),
        ))
    }

    pub fn range(&self) -> Option<(Rational, Rational)> {
        Some((
            self.points.first()?.y.clone(),
            self.points.last()?.y.clone(),
        ))
    }

    /// Lebesgue measure of the domain.
    pub fn domain_length(&self) -> Rational {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => &b.t - &a.t,
            _ => Rational::zero(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        matches!((self.points.first(), self.points.last()), (Some(a), Some(b)) if &a.t <= x && x <= &b.t)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        kernel::eval(&self.points, x).ok_or_else(|| Error::OutOfDomain(x.to_string()))
    }

    /// `x -> self(inner(x))` on `{x in dom inner : inner(x) in dom self}`.
    pub fn compose(&self, inner: &PartialPLMap) -> PartialPLMap {
        PartialPLMap {
            points: kernel::compose(&self.points, &inner.points),
        }
    }

    pub fn inverse(&self) -> PartialPLMap {
        PartialPLMap {
            points: kernel::inverse(&self.points),
        }
    }

    pub fn slopes(&self) -> Vec<Rational> {
        kernel::slopes(&self.points)
    }

    pub fn check_membership(&self, n: u32) -> MembershipCertificate {
        kernel::certify(&self.points, n)
    }

    /// Solves `f(x) = x` piece by piece.
    ///
    /// A piece `x -> a x + b` contributes its whole interval when it is the
    /// identity, the single point `b / (1 - a)` when `a != 1` and that point
    /// lies on the piece, and nothing otherwise.
    pub fn fixed_points(&self) -> FixedPointSet {
        let mut set = FixedPointSet::default();
        if let [only] = self.points.as_slice() {
            if only.t == only.y {
                set.isolated_points.push(only.t.clone());
            }
            return set;
        }
        for pair in self.points.windows(2) {
            let (p, q) = (&pair[0], &pair[1]);
            let slope = (&q.y - &p.y) / (&q.t - &p.t);
            if slope.is_one() {
                if p.t == p.y {
                    set.push_interval(p.t.clone(), q.t.clone());
                }
                continue;
            }
            // y_p + s (x - t_p) = x  =>  x = (y_p - s t_p) / (1 - s)
            let x = (&p.y - &slope * &p.t) / (Rational::one() - &slope);
            if p.t <= x && x <= q.t {
                set.push_point(x);
            }
        }
        set
    }
}

impl From<PLMap> for PartialPLMap {
    fn from(f: PLMap) -> Self {
        PartialPLMap {
            points: f.breakpoints().to_vec(),
        }
    }
}

/// Solution set of `f(x) = x`: isolated points plus nondegenerate intervals,
/// sorted and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub isolated_points: Vec<Rational>,
    pub intervals: Vec<(Rational, Rational)>,
}

impl FixedPointSet {
    pub fn is_empty(&self) -> bool {
        self.isolated_points.is_empty() && self.intervals.is_empty()
    }

    pub fn has_interval(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.isolated_points.iter().any(|p| p == x)
            || self.intervals.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// Lebesgue measure of the set.
    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    // Pieces are visited left to right, so pushes arrive in sorted order.
    fn push_point(&mut self, x: Rational) {
        if self.contains(&x) {
            return;
        }
        self.isolated_points.push(x);
    }

    fn push_interval(&mut self, a: Rational, b: Rational) {
        self.isolated_points.retain(|p| p < &a || p > &b);
        match self.intervals.last_mut() {
            Some(last) if last.1 >= a => last.1 = b,
            _ => self.intervals.push((a, b)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawPartial {
    domain: Option<(Rational, Rational)>,
    breakpoints: Vec<(Rational, Rational)>,
}

impl Serialize for PartialPLMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawPartial {
            domain: self.domain(),
            breakpoints: to_pairs(&self.points),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartialPLMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawPartial::deserialize(deserializer)?;
        let map = PartialPLMap::new(raw.breakpoints).map_err(D::Error::custom)?;
        if map.domain() != raw.domain {
            return Err(D::Error::custom(
                "domain does not match the first and last breakpoints",
            ));
        }
        Ok(map)
    }
}
