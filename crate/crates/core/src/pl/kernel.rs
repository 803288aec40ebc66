//! Breakpoint-list algorithms shared by total and partial maps.
//!
//! A list `[(t_0, y_0), ..., (t_m, y_m)]` with both coordinates strictly
//! increasing describes the map that is affine between consecutive
//! breakpoints. An empty list is the map with empty domain; a single point
//! is a map on a degenerate interval.

use crate::error::{Error, Result};
use crate::rational::{nadic_level, power_of_n_exponent, Rational};

use super::{Breakpoint, MembershipCertificate};

pub(crate) fn check_increasing(points: &[Breakpoint]) -> Result<()> {
    for (i, pair) in points.windows(2).enumerate() {
        if pair[0].t >= pair[1].t || pair[0].y >= pair[1].y {
            return Err(Error::NotMonotone(i + 1));
        }
    }
    Ok(())
}

fn collinear(a: &Breakpoint, b: &Breakpoint, c: &Breakpoint) -> bool {
    (&b.y - &a.y) * (&c.t - &b.t) == (&c.y - &b.y) * (&b.t - &a.t)
}

/// Drops every interior breakpoint where the incoming and outgoing slopes agree.
pub(crate) fn canonicalize(points: Vec<Breakpoint>) -> Vec<Breakpoint> {
    if points.len() <= 2 {
        return points;
    }
    let last = points.len() - 1;
    let mut out: Vec<Breakpoint> = Vec::with_capacity(points.len());
    let mut iter = points.into_iter().enumerate().peekable();
    while let Some((i, p)) = iter.next() {
        if i == 0 || i == last {
            out.push(p);
            continue;
        }
        let next = &iter.peek().expect("interior point has a successor").1;
        if !collinear(out.last().expect("first point kept"), &p, next) {
            out.push(p);
        }
    }
    out
}

fn interpolate(a: &Breakpoint, b: &Breakpoint, x: &Rational) -> Rational {
    &a.y + (&b.y - &a.y) * (x - &a.t) / (&b.t - &a.t)
}

pub(crate) fn eval(points: &[Breakpoint], x: &Rational) -> Option<Rational> {
    let first = points.first()?;
    let last = points.last()?;
    if x < &first.t || x > &last.t {
        return None;
    }
    let idx = points.partition_point(|p| &p.t < x);
    let hit = &points[idx];
    if &hit.t == x {
        return Some(hit.y.clone());
    }
    Some(interpolate(&points[idx - 1], hit, x))
}

pub(crate) fn eval_inverse(points: &[Breakpoint], y: &Rational) -> Option<Rational> {
    let first = points.first()?;
    let last = points.last()?;
    if y < &first.y || y > &last.y {
        return None;
    }
    let idx = points.partition_point(|p| &p.y < y);
    let hit = &points[idx];
    if &hit.y == y {
        return Some(hit.t.clone());
    }
    let (a, b) = (&points[idx - 1], hit);
    Some(&a.t + (&b.t - &a.t) * (y - &a.y) / (&b.y - &a.y))
}

pub(crate) fn piece_slope(points: &[Breakpoint], piece: usize) -> Rational {
    let (a, b) = (&points[piece], &points[piece + 1]);
    (&b.y - &a.y) / (&b.t - &a.t)
}

pub(crate) fn slopes(points: &[Breakpoint]) -> Vec<Rational> {
    (0..points.len().saturating_sub(1))
        .map(|i| piece_slope(points, i))
        .collect()
}

pub(crate) fn inverse(points: &[Breakpoint]) -> Vec<Breakpoint> {
    points
        .iter()
        .map(|p| Breakpoint {
            t: p.y.clone(),
            y: p.t.clone(),
        })
        .collect()
}

/// `x -> outer(inner(x))` on `{x in dom inner : inner(x) in dom outer}`.
///
/// Breakpoints of the result are the inner breakpoints plus the inner
/// preimages of the outer breakpoints, restricted to the overlap.
pub(crate) fn compose(outer: &[Breakpoint], inner: &[Breakpoint]) -> Vec<Breakpoint> {
    let (Some(of), Some(ol), Some(inf), Some(inl)) =
        (outer.first(), outer.last(), inner.first(), inner.last())
    else {
        return Vec::new();
    };
    let lo = std::cmp::max(&of.t, &inf.y);
    let hi = std::cmp::min(&ol.t, &inl.y);
    if lo > hi {
        return Vec::new();
    }
    if lo == hi {
        let x = eval_inverse(inner, lo).expect("lo lies in the inner range");
        let z = eval(outer, lo).expect("lo lies in the outer domain");
        return vec![Breakpoint { t: x, y: z }];
    }

    // Interior y-values of both lists in increasing order, tagged with the
    // breakpoint they come from so the matching coordinate is copied exactly.
    let inner_mid: Vec<usize> = (1..inner.len() - 1)
        .filter(|&i| &inner[i].y > lo && &inner[i].y < hi)
        .collect();
    let outer_mid: Vec<usize> = (1..outer.len() - 1)
        .filter(|&j| &outer[j].t > lo && &outer[j].t < hi)
        .collect();
    let mut points = Vec::with_capacity(inner_mid.len() + outer_mid.len() + 2);
    points.push(Breakpoint {
        t: eval_inverse(inner, lo).expect("lo lies in the inner range"),
        y: eval(outer, lo).expect("lo lies in the outer domain"),
    });
    let (mut a, mut b) = (
        inner_mid.into_iter().peekable(),
        outer_mid.into_iter().peekable(),
    );
    loop {
        let point = match (a.peek().copied(), b.peek().copied()) {
            (None, None) => break,
            (Some(i), None) => {
                a.next();
                from_inner(inner, outer, i)
            }
            (None, Some(j)) => {
                b.next();
                from_outer(inner, outer, j)
            }
            (Some(i), Some(j)) => match inner[i].y.cmp(&outer[j].t) {
                std::cmp::Ordering::Less => {
                    a.next();
                    from_inner(inner, outer, i)
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                    from_outer(inner, outer, j)
                }
                std::cmp::Ordering::Equal => {
                    a.next();
                    b.next();
                    // both slopes change here; the product may not
                    let left = piece_slope(outer, j - 1) * piece_slope(inner, i - 1);
                    let right = piece_slope(outer, j) * piece_slope(inner, i);
                    if left == right {
                        continue;
                    }
                    Breakpoint {
                        t: inner[i].t.clone(),
                        y: outer[j].y.clone(),
                    }
                }
            },
        };
        points.push(point);
    }
    points.push(Breakpoint {
        t: eval_inverse(inner, hi).expect("hi lies in the inner range"),
        y: eval(outer, hi).expect("hi lies in the outer domain"),
    });
    points
}

// With canonical inputs only one slope changes at these points, so they are
// genuine breakpoints of the composite.
fn from_inner(inner: &[Breakpoint], outer: &[Breakpoint], i: usize) -> Breakpoint {
    Breakpoint {
        t: inner[i].t.clone(),
        y: eval(outer, &inner[i].y).expect("inside the overlap"),
    }
}

fn from_outer(inner: &[Breakpoint], outer: &[Breakpoint], j: usize) -> Breakpoint {
    Breakpoint {
        t: eval_inverse(inner, &outer[j].t).expect("inside the overlap"),
        y: outer[j].y.clone(),
    }
}

/// F(n) certificate for the pieces of a breakpoint list.
pub(crate) fn certify(points: &[Breakpoint], n: u32) -> MembershipCertificate {
    let fail = |reason: String| MembershipCertificate {
        n,
        slope_exponents: Vec::new(),
        breakpoint_levels: Vec::new(),
        verdict: false,
        failure_reason: Some(reason),
    };
    if n < 2 {
        return fail(format!("base must be at least 2, got {n}"));
    }
    let mut levels = Vec::with_capacity(points.len() * 2);
    for p in points {
        for coord in [&p.t, &p.y] {
            match nadic_level(coord, n).expect("base checked") {
                Some(level) => levels.push(level),
                None => return fail(format!("breakpoint coordinate {coord} is not {n}-adic")),
            }
        }
    }
    // only the t-levels are reported; y-levels are implied for members
    let breakpoint_levels = levels.iter().step_by(2).copied().collect();
    let mut exponents = Vec::with_capacity(points.len().saturating_sub(1));
    for (i, slope) in slopes(points).into_iter().enumerate() {
        match power_of_n_exponent(&slope, n).expect("slopes of increasing maps are positive") {
            Some(q) => exponents.push(q),
            None => return fail(format!("slope {slope} on piece {i} is not a power of {n}")),
        }
    }
    MembershipCertificate {
        n,
        slope_exponents: exponents,
        breakpoint_levels,
        verdict: true,
        failure_reason: None,
    }
}
