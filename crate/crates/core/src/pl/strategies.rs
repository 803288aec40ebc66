//! Proptest generators for maps, shared by the unit tests.

use proptest::prelude::*;

use crate::generators::{gen_a, gen_b};
use crate::rational::Rational;

use super::PLMap;

fn sorted_interior(values: Vec<(i64, i64)>) -> Vec<Rational> {
    let mut out: Vec<Rational> = values
        .into_iter()
        .map(|(num, den)| Rational::frac(num % den, den))
        .filter(|q| q.is_positive())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Arbitrary increasing PL homeomorphism of [0, 1] with small rational breakpoints.
pub(crate) fn arb_plmap() -> impl Strategy<Value = PLMap> {
    (1usize..6).prop_flat_map(|k| {
        let coord = proptest::collection::vec((1i64..60, 2i64..60), k);
        (coord.clone(), coord).prop_map(|(ts, ys)| {
            let ts = sorted_interior(ts);
            let ys = sorted_interior(ys);
            let m = ts.len().min(ys.len());
            let mut points = vec![(Rational::zero(), Rational::zero())];
            points.extend(ts.into_iter().zip(ys).take(m));
            points.push((Rational::one(), Rational::one()));
            PLMap::new(points).expect("both coordinates increase")
        })
    })
}

/// Product of `A^{+-1}`, `B^{+-1}` letters, applied right to left.
pub(crate) fn arb_f2_element(max_len: usize) -> impl Strategy<Value = PLMap> {
    proptest::collection::vec(0usize..4, 0..=max_len).prop_map(|codes| {
        let letters = [gen_a(), gen_a().inverse(), gen_b(), gen_b().inverse()];
        codes
            .into_iter()
            .fold(PLMap::identity(), |acc, c| acc.compose(&letters[c]))
    })
}

pub(crate) fn arb_unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=1000).prop_flat_map(|den| (0..=den).prop_map(move |num| Rational::frac(num, den)))
}
