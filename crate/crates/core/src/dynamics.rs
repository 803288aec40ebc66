//! Orbits of the F(N) action at exact rational points, the Radon-Nikodym
//! cocycle along explicit witnesses, the slope-one subrelation, and the
//! parity obstruction to N-adic translations for odd N.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::gen_adp;
use crate::pl::{PLMap, Side};
use crate::rational::{is_nadic, nadic_level, numerator_at_level, power_of_n_exponent, Rational};
use crate::words::{evaluate, sweep_reduced, Alphabet, GenWord, IndexLetter};

fn ensure_alphabet_members(alphabet: &Alphabet<PLMap>, n: u32) -> Result<()> {
    for (name, map) in alphabet.names().iter().zip(alphabet.maps()) {
        let cert = map.check_membership(n);
        if !cert.verdict {
            return Err(Error::NotMember {
                n,
                reason: format!("letter {name}: {}", cert.failure_reason.unwrap_or_default()),
            });
        }
    }
    Ok(())
}

fn ensure_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || x > &Rational::one() {
        Err(Error::OutOfDomain(x.to_string()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitNode {
    pub point: Rational,
    /// Shortest word carrying the root to `point`; lexicographically least among ties.
    pub witness: GenWord,
    pub depth: usize,
    /// N-adic points can be reached by several elements with different
    /// slopes, so cocycle values there depend on the chosen witness.
    pub multi_witness_possible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub root: Rational,
    pub nodes: Vec<OrbitNode>,
    /// Stopped by `max_points` with unexplored images left.
    pub truncated: bool,
    /// Some expansion produced no new points: the orbit is fully listed.
    pub closed: bool,
}

/// Breadth-first closure of `{x}` under the letters of `alphabet` and their
/// inverses, deduplicated by exact value.
pub fn orbit_bfs(
    x: &Rational,
    n: u32,
    alphabet: &Alphabet<PLMap>,
    max_depth: usize,
    max_points: usize,
) -> Result<Orbit> {
    ensure_unit(x)?;
    ensure_alphabet_members(alphabet, n)?;
    let node = |point: Rational, witness: GenWord, depth: usize| -> Result<OrbitNode> {
        Ok(OrbitNode {
            multi_witness_possible: is_nadic(&point, n)?,
            point,
            witness,
            depth,
        })
    };
    let mut nodes = vec![node(x.clone(), GenWord::empty(), 0)?];
    let mut seen: HashSet<Rational> = HashSet::from([x.clone()]);
    let mut frontier = 0..1;
    let mut truncated = false;
    let mut closed = false;
    for depth in 1..=max_depth {
        let mut found: BTreeMap<Rational, GenWord> = BTreeMap::new();
        for parent in &nodes[frontier.clone()] {
            for code in 0..2 * alphabet.len() {
                let letter = IndexLetter::from_code(code);
                let image = alphabet.letter_map(letter).eval(&parent.point)?;
                if seen.contains(&image) {
                    continue;
                }
                let word = parent.witness.then(&alphabet.word_from_indices(&[letter]));
                match found.get(&image) {
                    Some(best) if best <= &word => {}
                    _ => {
                        found.insert(image, word);
                    }
                }
            }
        }
        if found.is_empty() {
            closed = true;
            break;
        }
        let start = nodes.len();
        for (point, word) in found {
            if nodes.len() >= max_points {
                truncated = true;
                break;
            }
            seen.insert(point.clone());
            nodes.push(node(point, word, depth)?);
        }
        frontier = start..nodes.len();
        if truncated {
            break;
        }
    }
    Ok(Orbit {
        root: x.clone(),
        nodes,
        truncated,
        closed,
    })
}

/// `value = n^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleValue {
    pub value: Rational,
    pub exponent: i64,
}

/// `D(x, T x) = 1 / T'(x)` for the element `T` that `w` denotes.
pub fn rn_cocycle(
    w: &GenWord,
    alphabet: &Alphabet<PLMap>,
    x: &Rational,
    n: u32,
) -> Result<CocycleValue> {
    let f = evaluate(w, alphabet)?;
    cocycle_of_map(&f, x, n)
}

pub fn cocycle_of_map(f: &PLMap, x: &Rational, n: u32) -> Result<CocycleValue> {
    let value = f.slope_at(x, Side::TwoSided)?.recip()?;
    let exponent = power_of_n_exponent(&value, n)?.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "cocycle value {value} at {x} is not a power of {n}"
        ))
    })?;
    Ok(CocycleValue { value, exponent })
}

/// Whether `D_{u then v}(x) = D_u(x) * D_v(u x)` holds exactly.
pub fn cocycle_chain_check(
    u: &GenWord,
    v: &GenWord,
    alphabet: &Alphabet<PLMap>,
    x: &Rational,
    n: u32,
) -> Result<bool> {
    let fu = evaluate(u, alphabet)?;
    let y = fu.eval(x)?;
    let du = cocycle_of_map(&fu, x, n)?;
    let dv = rn_cocycle(v, alphabet, &y, n)?;
    let dvu = rn_cocycle(&u.then(v), alphabet, x, n)?;
    Ok(dvu.value == &du.value * &dv.value && dvu.exponent == du.exponent + dv.exponent)
}

/// The translation `f(x) - x` when `w` has slope exactly 1 on both sides of `x`.
pub fn sn_step_check(
    w: &GenWord,
    alphabet: &Alphabet<PLMap>,
    x: &Rational,
    n: u32,
) -> Result<Option<Rational>> {
    let f = evaluate(w, alphabet)?;
    sn_step_of_map(&f, x, n)
}

pub fn sn_step_of_map(f: &PLMap, x: &Rational, n: u32) -> Result<Option<Rational>> {
    let slope = match f.slope_at(x, Side::TwoSided) {
        Ok(s) => s,
        Err(Error::NonDifferentiable(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !slope.is_one() {
        return Ok(None);
    }
    let shift = f.eval(x)? - x;
    if !is_nadic(&shift, n)? {
        return Err(Error::InvariantViolation(format!(
            "slope-one translation {shift} at {x} is not {n}-adic"
        )));
    }
    Ok(Some(shift))
}

/// `A_{d,p}(x) = x - d + d/n^p` for `p` in `p_from..=p_to`, each with `x`
/// strictly inside the slope-one piece `(d, 1 - d/n^p)`.
pub fn sn_orbit_points(
    x: &Rational,
    n: u32,
    d: &Rational,
    p_from: i64,
    p_to: i64,
) -> Result<Vec<Rational>> {
    if p_from > p_to {
        return Err(Error::InvalidParameters(format!(
            "empty range {p_from}..={p_to}"
        )));
    }
    let mut points = Vec::new();
    for p in p_from..=p_to {
        let f = gen_adp(n, d, p)?;
        let shrunk = d / Rational::power(n, p);
        let right = Rational::one() - &shrunk;
        if x <= d || x >= &right {
            return Err(Error::InvalidParameters(format!(
                "{x} is not inside the slope-one piece ({d}, {right}) of A_{{{d},{p}}}"
            )));
        }
        let point = x - d + &shrunk;
        if f.eval(x)? != point {
            return Err(Error::InvariantViolation(format!(
                "A_{{{d},{p}}}({x}) mismatch"
            )));
        }
        points.push(point);
    }
    let distinct: HashSet<&Rational> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::InvariantViolation("repeated orbit point".into()));
    }
    Ok(points)
}

/// Maximal runs of equal slope on the grid `k / n^r`: `(cells, exponent)`.
pub fn slope_runs(f: &PLMap, n: u32, r: u32) -> Result<Vec<(BigInt, i64)>> {
    f.ensure_member(n)?;
    let cert = f.check_membership(n);
    let mut cells = Vec::with_capacity(f.breakpoints().len());
    for p in f.breakpoints() {
        cells.push(numerator_at_level(&p.t, n, r)?);
    }
    Ok(cells
        .windows(2)
        .zip(cert.slope_exponents)
        .map(|(pair, q)| (&pair[1] - &pair[0], q))
        .collect())
}

const MAX_GRID_CELLS: u64 = 1 << 24;

/// Slope exponent `q_i` of `f` on each cell `[i/n^r, (i+1)/n^r]`.
pub fn slope_sum_decomposition(f: &PLMap, n: u32, r: u32) -> Result<Vec<i64>> {
    let runs = slope_runs(f, n, r)?;
    let cells = BigInt::from(n).pow(r);
    if cells > BigInt::from(MAX_GRID_CELLS) {
        return Err(Error::InvalidParameters(format!(
            "{n}^{r} cells exceed the listing limit; use slope_runs"
        )));
    }
    let mut out = Vec::new();
    for (count, q) in runs {
        let count: u64 = count.try_into().expect("bounded by the cell limit");
        out.extend(std::iter::repeat_n(q, count as usize));
    }
    Ok(out)
}

/// Smallest level at which every breakpoint of `f` is a grid point.
pub fn refining_level(f: &PLMap, n: u32) -> Result<u32> {
    let mut level = 0;
    for p in f.breakpoints() {
        let l = nadic_level(&p.t, n)?.ok_or_else(|| Error::NotMember {
            n,
            reason: format!("breakpoint {} is not {n}-adic", p.t),
        })?;
        level = level.max(l);
    }
    Ok(level)
}

/// Witness that `f(d) != d + k/n^p`, together with the parity count that forbids it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub n: u32,
    pub d: Rational,
    pub k: i64,
    pub p: u32,
    pub target: Rational,
    pub image: Rational,
    /// `d = a / n^level`, `target = b / n^level`, `level = max(p, level of d)`.
    pub level: u32,
    pub a: Rational,
    pub b: Rational,
    pub ab_parity_differs: bool,
    pub image_differs: bool,
    /// Grid level refining both `d` and every breakpoint of `f`.
    pub refined_level: u32,
    pub refined_a: Rational,
    pub refined_b: Rational,
    /// `scale` with `q_i + scale >= 0` on all cells left of `d`.
    pub scale: i64,
    /// `sum_{i < a} n^{scale + q_i}`, a sum of `refined_a` odd integers.
    pub slope_sum: Rational,
    /// `slope_sum = f(d) * n^{refined_level + scale}`.
    pub slope_sum_reproduces_image: bool,
    pub slope_sum_parity_matches_a: bool,
    /// `b * n^scale` and `slope_sum` have different parities.
    pub target_parity_differs: bool,
    pub verdict: bool,
}

fn odd(x: &BigInt) -> bool {
    x.is_odd()
}

/// Checks one element `f` against the target `d + k/n^p` for odd `n`, `k`.
pub fn parity_certificate(
    f: &PLMap,
    n: u32,
    d: &Rational,
    k: i64,
    p: u32,
) -> Result<ParityCertificate> {
    if n < 2 || n.is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!(
            "n = {n} must be odd and >= 3"
        )));
    }
    if k % 2 == 0 {
        return Err(Error::PreconditionViolated(format!("k = {k} must be odd")));
    }
    ensure_unit(d)?;
    let d_level = nadic_level(d, n)?
        .ok_or_else(|| Error::PreconditionViolated(format!("d = {d} is not {n}-adic")))?;
    f.ensure_member(n)?;

    let big_n = BigInt::from(n);
    let target = d + Rational::from(k) * Rational::power(n, -i64::from(p));
    let image = f.eval(d)?;

    let level = d_level.max(p);
    let a = numerator_at_level(d, n, level)?;
    let b = &a + BigInt::from(k) * big_n.pow(level - p);

    let refined_level = level.max(refining_level(f, n)?);
    let refined_a = numerator_at_level(d, n, refined_level)?;
    let refined_b = &refined_a + BigInt::from(k) * big_n.pow(refined_level - p);

    // cells left of d, grouped by slope
    let mut left_runs = Vec::new();
    let mut remaining = refined_a.clone();
    for (count, q) in slope_runs(f, n, refined_level)? {
        if remaining.is_zero() {
            break;
        }
        let take = std::cmp::min(count, remaining.clone());
        remaining -= &take;
        left_runs.push((take, q));
    }
    let scale = left_runs.iter().map(|(_, q)| -q).max().unwrap_or(0).max(0);
    let slope_sum: BigInt = left_runs
        .iter()
        .map(|(count, q)| count * big_n.pow((scale + q) as u32))
        .sum();
    let scaled_image = &image * Rational::power(n, i64::from(refined_level) + scale);
    let slope_sum_reproduces_image = scaled_image == Rational::integer(slope_sum.clone());
    let slope_sum_parity_matches_a = odd(&slope_sum) == odd(&refined_a);
    let scaled_target = &refined_b * big_n.pow(scale as u32);
    let target_parity_differs = odd(&slope_sum) != odd(&scaled_target);

    let ab_parity_differs = odd(&a) != odd(&b);
    let image_differs = image != target;
    let verdict = ab_parity_differs
        && image_differs
        && slope_sum_reproduces_image
        && slope_sum_parity_matches_a
        && target_parity_differs;
    Ok(ParityCertificate {
        n,
        d: d.clone(),
        k,
        p,
        target,
        image,
        level,
        a: Rational::integer(a),
        b: Rational::integer(b),
        ab_parity_differs,
        image_differs,
        refined_level,
        refined_a: Rational::integer(refined_a),
        refined_b: Rational::integer(refined_b),
        scale,
        slope_sum: Rational::integer(slope_sum),
        slope_sum_reproduces_image,
        slope_sum_parity_matches_a,
        target_parity_differs,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub n: u32,
    pub d: Rational,
    pub k: i64,
    pub p: u32,
    pub target: Rational,
    pub alphabet: Vec<String>,
    pub max_len: usize,
    /// Words tested per length, starting with the empty word at length 0.
    pub words_per_length: Vec<u64>,
    pub words_tested: u64,
    pub witnesses: Vec<GenWord>,
    pub certificates_agreeing: u64,
    pub certificate_failures: Vec<GenWord>,
    pub zero_witnesses: bool,
}

/// Evaluates every reduced word of length `0..=max_len` at `d`, looking for
/// one that reaches `d + k/n^p`, and certifies each element by parity.
pub fn parity_search(
    n: u32,
    d: &Rational,
    k: i64,
    p: u32,
    alphabet: &Alphabet<PLMap>,
    max_len: usize,
) -> Result<ParityReport> {
    ensure_alphabet_members(alphabet, n)?;
    // validates n, k, d up front
    let identity = parity_certificate(&PLMap::identity(), n, d, k, p)?;
    let target = identity.target.clone();

    let mut report = ParityReport {
        n,
        d: d.clone(),
        k,
        p,
        target: target.clone(),
        alphabet: alphabet.names().to_vec(),
        max_len,
        words_per_length: vec![0; max_len + 1],
        words_tested: 0,
        witnesses: Vec::new(),
        certificates_agreeing: 0,
        certificate_failures: Vec::new(),
        zero_witnesses: true,
    };
    let mut record = |word: &[IndexLetter], cert: Result<ParityCertificate>| -> Result<()> {
        report.words_per_length[word.len()] += 1;
        report.words_tested += 1;
        let cert = cert?;
        if !cert.image_differs {
            report.witnesses.push(alphabet.word_from_indices(word));
        }
        if cert.verdict {
            report.certificates_agreeing += 1;
        } else {
            report
                .certificate_failures
                .push(alphabet.word_from_indices(word));
        }
        Ok(())
    };
    record(&[], Ok(identity))?;
    let mut failure = None;
    sweep_reduced(alphabet, max_len, None, |word, f| {
        if failure.is_some() {
            return false;
        }
        if let Err(e) = record(word, parity_certificate(f, n, d, k, p)) {
            failure = Some(e);
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    report.zero_witnesses = report.witnesses.is_empty();
    log::info!(
        "parity search: {} words, {} witnesses",
        report.words_tested,
        report.witnesses.len()
    );
    Ok(report)
}

/// Every reduced word of length `0..=max_len` with `w(from) = to`, shortest first.
pub fn translation_witness_search(
    from: &Rational,
    to: &Rational,
    alphabet: &Alphabet<PLMap>,
    max_len: usize,
) -> Result<Vec<GenWord>> {
    ensure_unit(from)?;
    let mut found = Vec::new();
    if from == to {
        found.push(GenWord::empty());
    }
    sweep_reduced(alphabet, max_len, None, |word, f| {
        if f.eval(from).as_ref() == Ok(to) {
            found.push(alphabet.word_from_indices(word));
        }
        true
    });
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}
