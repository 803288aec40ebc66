//! Finite graphings of partial PL maps: the three-map graphing of the
//! orbit relation of F, its cost, a rewriter from {A, B}-words to words over
//! the graphing, and the exhaustive fixed-interval sweep over reduced words.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gen_a, gen_b};
use crate::pl::{MembershipCertificate, PLMap, PartialPLMap};
use crate::rational::Rational;
use crate::words::{evaluate_partial, sweep_reduced, Alphabet, GenWord, IndexLetter, Letter};

pub const PHI1: &str = "phi1";
pub const PHI2: &str = "phi2";
pub const PHI3: &str = "phi3";

/// One generator of a graphing: `map` restricted to the closed interval `domain`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphingPart {
    pub name: String,
    pub domain: (Rational, Rational),
    pub map: PLMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graphing {
    n: u32,
    parts: Vec<GraphingPart>,
    alphabet: Alphabet<PartialPLMap>,
}

/// On-disk form: `{"n": 2, "parts": [{"name", "domain", "map"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphingFile {
    pub n: u32,
    pub parts: Vec<GraphingPart>,
}

impl Graphing {
    /// Builds the graphing and checks every restricted part against F(n) piecewise.
    pub fn new(n: u32, parts: Vec<GraphingPart>) -> Result<Self> {
        let mut restricted = Vec::with_capacity(parts.len());
        for part in &parts {
            let (a, b) = &part.domain;
            if a.is_negative() || b > &Rational::one() || a > b {
                return Err(Error::InvalidParameters(format!(
                    "part {}: domain [{a}, {b}] is not a subinterval of [0,1]",
                    part.name
                )));
            }
            let partial = part.map.restrict(a, b)?;
            let cert = partial.check_membership(n);
            if !cert.verdict {
                return Err(Error::NotMember {
                    n,
                    reason: format!(
                        "part {}: {}",
                        part.name,
                        cert.failure_reason.unwrap_or_default()
                    ),
                });
            }
            restricted.push((part.name.clone(), partial));
        }
        Ok(Graphing {
            n,
            alphabet: Alphabet::new(restricted)?,
            parts,
        })
    }

    /// phi1 = A^-1 on [0,1/2], phi2 = B^-1 on [1/2,3/4], phi3 = A on [3/4,1].
    pub fn phi_r2() -> Self {
        let q = Rational::frac;
        let part = |name: &str, a, b, map| GraphingPart {
            name: name.to_string(),
            domain: (a, b),
            map,
        };
        Graphing::new(
            2,
            vec![
                part(PHI1, q(0, 1), q(1, 2), gen_a().inverse()),
                part(PHI2, q(1, 2), q(3, 4), gen_b().inverse()),
                part(PHI3, q(3, 4), q(1, 1), gen_a()),
            ],
        )
        .expect("the graphing parts are restrictions of elements of F")
    }

    pub fn from_file(file: GraphingFile) -> Result<Self> {
        Graphing::new(file.n, file.parts)
    }

    pub fn to_file(&self) -> GraphingFile {
        GraphingFile {
            n: self.n,
            parts: self.parts.clone(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parts(&self) -> &[GraphingPart] {
        &self.parts
    }

    /// The parts as partial maps, addressable by name in words.
    pub fn alphabet(&self) -> &Alphabet<PartialPLMap> {
        &self.alphabet
    }

    /// Sum of the Lebesgue measures of the domains.
    pub fn cost(&self) -> Rational {
        self.alphabet
            .maps()
            .iter()
            .fold(Rational::zero(), |acc, part| acc + part.domain_length())
    }

    pub fn certificates(&self) -> Vec<MembershipCertificate> {
        self.alphabet
            .maps()
            .iter()
            .map(|part| part.check_membership(self.n))
            .collect()
    }
}

fn word_of(letter: Option<Letter>) -> GenWord {
    GenWord::from_letters(letter.into_iter().collect())
}

/// A word over phi1, phi2, phi3 carrying `x` to `letter(x)`, for `letter`
/// one of `A`, `B`, `A^-1`, `B^-1`.
///
/// Forward letters are split by the position of `x`, inverse letters by the
/// position of the image; on shared endpoints the lowest interval wins.
pub fn express_step(x: &Rational, letter: &Letter) -> Result<GenWord> {
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    let q = Rational::frac;
    let step = match (letter.name.as_str(), letter.inverted) {
        // A = phi1^-1 on [0,3/4], A = phi3 on [3/4,1]
        ("A", false) if x <= &q(3, 4) => Some(Letter::inv(PHI1)),
        ("A", false) => Some(Letter::new(PHI3)),
        // B is the identity on [0,1/2], phi2^-1 on [1/2,7/8], and agrees with phi3 on [7/8,1]
        ("B", false) if x <= &q(1, 2) => None,
        ("B", false) if x <= &q(7, 8) => Some(Letter::inv(PHI2)),
        ("B", false) => Some(Letter::new(PHI3)),
        ("A", true) => {
            let image = gen_a().eval_inverse(x)?;
            if image <= q(3, 4) {
                Some(Letter::new(PHI1))
            } else {
                Some(Letter::inv(PHI3))
            }
        }
        ("B", true) => {
            let image = gen_b().eval_inverse(x)?;
            if image <= q(1, 2) {
                None
            } else if image <= q(7, 8) {
                Some(Letter::new(PHI2))
            } else {
                Some(Letter::inv(PHI3))
            }
        }
        _ => return Err(Error::UnboundLetter(letter.to_string())),
    };
    Ok(word_of(step))
}

/// Chains [`express_step`] along the trajectory of `x` under `w`.
pub fn express_word(x: &Rational, w: &GenWord) -> Result<GenWord> {
    let (a, b) = (gen_a(), gen_b());
    let mut point = x.clone();
    let mut out = GenWord::empty();
    for letter in w.action_order() {
        let step = express_step(&point, letter)?;
        out = out.then(&step);
        point = match (letter.name.as_str(), letter.inverted) {
            ("A", false) => a.eval(&point)?,
            ("A", true) => a.eval_inverse(&point)?,
            ("B", false) => b.eval(&point)?,
            _ => b.eval_inverse(&point)?,
        };
    }
    Ok(out)
}

/// Result of checking a graphing word against the point it should move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressCheck {
    pub x: Rational,
    pub source_word: GenWord,
    pub target: Rational,
    pub graphing_word: GenWord,
    pub graphing_image: Option<Rational>,
    pub verified: bool,
}

/// Rewrites `w` at `x` and re-evaluates the graphing word independently.
pub fn express_and_verify(x: &Rational, w: &GenWord) -> Result<ExpressCheck> {
    let ab = Alphabet::new([("A", gen_a()), ("B", gen_b())])?;
    let target = crate::words::evaluate(w, &ab)?.eval(x)?;
    let graphing_word = express_word(x, w)?;
    let phi = Graphing::phi_r2();
    let value = evaluate_partial(&graphing_word, phi.alphabet())?;
    let graphing_image = value.eval(x).ok();
    Ok(ExpressCheck {
        x: x.clone(),
        source_word: w.clone(),
        verified: graphing_image.as_ref() == Some(&target),
        target,
        graphing_word,
        graphing_image,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStats {
    pub length: usize,
    pub words: u64,
    pub empty_domain: u64,
    pub degenerate_domain: u64,
    pub with_isolated_fixed_points: u64,
    pub isolated_fixed_points: u64,
    pub with_fixed_interval: u64,
}

impl LengthStats {
    fn merge(&mut self, other: &LengthStats) {
        self.words += other.words;
        self.empty_domain += other.empty_domain;
        self.degenerate_domain += other.degenerate_domain;
        self.with_isolated_fixed_points += other.with_isolated_fixed_points;
        self.isolated_fixed_points += other.isolated_fixed_points;
        self.with_fixed_interval += other.with_fixed_interval;
    }
}

/// A reduced word whose fixed-point set contains a nondegenerate interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedIntervalWitness {
    pub word: GenWord,
    pub interval: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeingReport {
    pub max_len: usize,
    pub words_checked: u64,
    pub empty_domain_words: u64,
    pub words_with_fixed_interval: Vec<FixedIntervalWitness>,
    pub per_length: Vec<LengthStats>,
    /// No reduced word up to `max_len` fixes a set of positive measure.
    pub treeing_consistent: bool,
}

impl TreeingReport {
    fn blank(max_len: usize) -> Self {
        TreeingReport {
            max_len,
            words_checked: 0,
            empty_domain_words: 0,
            words_with_fixed_interval: Vec::new(),
            per_length: (1..=max_len)
                .map(|length| LengthStats {
                    length,
                    ..LengthStats::default()
                })
                .collect(),
            treeing_consistent: true,
        }
    }

    fn merge(mut self, other: TreeingReport) -> Self {
        self.words_checked += other.words_checked;
        self.empty_domain_words += other.empty_domain_words;
        self.words_with_fixed_interval
            .extend(other.words_with_fixed_interval);
        for (mine, theirs) in self.per_length.iter_mut().zip(&other.per_length) {
            mine.merge(theirs);
        }
        self.treeing_consistent = self.words_with_fixed_interval.is_empty();
        self
    }
}

fn sweep_partition(g: &Graphing, max_len: usize, first: IndexLetter) -> TreeingReport {
    let alphabet = g.alphabet();
    let branching = 2 * alphabet.len() as u64 - 1;
    let mut report = TreeingReport::blank(max_len);
    sweep_reduced(alphabet, max_len, Some(first), |word, value| {
        let len = word.len();
        if value.is_empty() {
            // every extension stays empty: count the whole subtree at once
            let mut width = 1u64;
            for stats in &mut report.per_length[len - 1..] {
                stats.words += width;
                stats.empty_domain += width;
                report.words_checked += width;
                report.empty_domain_words += width;
                width *= branching;
            }
            return false;
        }
        let stats = &mut report.per_length[len - 1];
        stats.words += 1;
        report.words_checked += 1;
        if value.is_degenerate() {
            stats.degenerate_domain += 1;
        }
        let fixed = value.fixed_points();
        if !fixed.isolated_points.is_empty() {
            stats.with_isolated_fixed_points += 1;
            stats.isolated_fixed_points += fixed.isolated_points.len() as u64;
        }
        if fixed.has_interval() {
            stats.with_fixed_interval += 1;
            let word = alphabet.word_from_indices(word);
            report
                .words_with_fixed_interval
                .extend(
                    fixed
                        .intervals
                        .into_iter()
                        .map(|interval| FixedIntervalWitness {
                            word: word.clone(),
                            interval,
                        }),
                );
        }
        true
    });
    report.treeing_consistent = report.words_with_fixed_interval.is_empty();
    report
}

/// Evaluates every reduced word of length `1..=max_len` over the graphing
/// and records each word that fixes a nondegenerate interval.
///
/// The stream is partitioned by first letter; `jobs > 1` runs the partitions
/// on a dedicated thread pool. Reports are identical for every `jobs`.
pub fn treeing_sweep(g: &Graphing, max_len: usize, jobs: usize) -> Result<TreeingReport> {
    if max_len == 0 {
        return Err(Error::InvalidParameters(
            "max_len must be at least 1".into(),
        ));
    }
    let firsts: Vec<IndexLetter> = (0..2 * g.alphabet().len())
        .map(IndexLetter::from_code)
        .collect();
    let run = |first: &IndexLetter| {
        let part = sweep_partition(g, max_len, *first);
        log::info!(
            "treeing sweep: first letter {} done, {} words",
            g.alphabet().word_from_indices(&[*first]),
            part.words_checked
        );
        part
    };
    let parts: Vec<TreeingReport> = if jobs <= 1 {
        firsts.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
        pool.install(|| firsts.par_iter().map(run).collect())
    };
    Ok(parts
        .into_iter()
        .fold(TreeingReport::blank(max_len), TreeingReport::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{count_reduced, evaluate};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w(s: &str) -> GenWord {
        GenWord::parse(s).unwrap()
    }

    fn phi_value(word: &GenWord) -> PartialPLMap {
        evaluate_partial(word, Graphing::phi_r2().alphabet()).unwrap()
    }

    #[test]
    fn phi_parts() {
        let g = Graphing::phi_r2();
        let alpha = g.alphabet();
        assert_eq!(alpha.map(0).eval(&r("1/4")).unwrap(), r("1/2"));
        assert_eq!(alpha.map(1).eval(&r("5/8")).unwrap(), r("3/4"));
        assert_eq!(alpha.map(2).eval(&r("3/4")).unwrap(), r("1/2"));
        let ranges: Vec<_> = alpha.maps().iter().map(|m| m.range().unwrap()).collect();
        assert_eq!(
            ranges,
            vec![(r("0"), r("3/4")), (r("1/2"), r("7/8")), (r("1/2"), r("1"))]
        );
        assert!(g.certificates().iter().all(|c| c.verdict));
    }

    #[test]
    fn cost_examples() {
        assert_eq!(Graphing::phi_r2().cost(), r("1"));
        assert_eq!(Graphing::new(2, vec![]).unwrap().cost(), r("0"));
        let mut fam = crate::generators::GeneratorFamily::thompson_f();
        let gamma = crate::generators::gamma(&mut fam);
        let single = Graphing::new(
            2,
            vec![GraphingPart {
                name: "gamma".into(),
                domain: (r("0"), r("1")),
                map: gamma,
            }],
        )
        .unwrap();
        assert_eq!(single.cost(), r("1"));
    }

    #[test]
    fn rejects_parts_outside_f() {
        let bad = PLMap::from_fracs(&[(0, 1, 0, 1), (1, 3, 1, 2), (1, 1, 1, 1)]).unwrap();
        let part = GraphingPart {
            name: "bad".into(),
            domain: (r("0"), r("1")),
            map: bad,
        };
        assert!(matches!(
            Graphing::new(2, vec![part]),
            Err(Error::NotMember { .. })
        ));
        let part = GraphingPart {
            name: "wide".into(),
            domain: (r("1/2"), r("3/2")),
            map: gen_a(),
        };
        assert!(Graphing::new(2, vec![part]).is_err());
    }

    #[test]
    fn graphing_json_round_trip() {
        let file = Graphing::phi_r2().to_file();
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.starts_with(
            r#"{"n":2,"parts":[{"name":"phi1","domain":["0","1/2"],"map":{"breakpoints""#
        ));
        let back: GraphingFile = serde_json::from_str(&json).unwrap();
        assert_eq!(Graphing::from_file(back).unwrap(), Graphing::phi_r2());
    }

    #[test]
    fn express_step_examples() {
        let x = r("1/3");
        let step = express_step(&x, &Letter::new("A")).unwrap();
        assert_eq!(step, w("phi1^-1"));
        assert_eq!(phi_value(&step).eval(&x).unwrap(), r("1/6"));

        assert!(express_step(&x, &Letter::new("B")).unwrap().is_empty());

        let x = r("5/6");
        let step = express_step(&x, &Letter::new("A")).unwrap();
        assert_eq!(step, w("phi3"));
        assert_eq!(phi_value(&step).eval(&x).unwrap(), r("2/3"));

        assert!(matches!(
            express_step(&x, &Letter::new("C")),
            Err(Error::UnboundLetter(_))
        ));
        assert!(matches!(
            express_step(&r("2"), &Letter::new("A")),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn steep_piece_of_b_uses_phi3_forward() {
        // on [7/8, 1], B(x) = 2x - 1 = phi3(x): the witness is phi3 applied to x itself
        for x in ["7/8", "15/16", "1", "29/32"] {
            let x = r(x);
            let step = express_step(&x, &Letter::new("B")).unwrap();
            let image = phi_value(&step).eval(&x).unwrap();
            assert_eq!(image, gen_b().eval(&x).unwrap(), "x = {x}");
        }
        assert_eq!(
            express_step(&r("15/16"), &Letter::new("B")).unwrap(),
            w("phi3")
        );
    }

    #[test]
    fn express_step_at_shared_endpoints() {
        for x in ["0", "1/4", "1/2", "5/8", "3/4", "7/8", "1"] {
            let x = r(x);
            for letter in [
                Letter::new("A"),
                Letter::inv("A"),
                Letter::new("B"),
                Letter::inv("B"),
            ] {
                let step = express_step(&x, &letter).unwrap();
                let check =
                    express_and_verify(&x, &GenWord::from_letters(vec![letter.clone()])).unwrap();
                assert!(check.verified, "x = {x}, letter {letter}, word {step}");
            }
        }
    }

    #[test]
    fn express_word_examples() {
        let x = r("1/3");
        assert!(express_word(&x, &GenWord::empty()).unwrap().is_empty());
        let check = express_and_verify(&x, &w("B A")).unwrap();
        assert!(check.verified);
        // A acts first (1/3 -> 1/6), then B fixes 1/6
        assert_eq!(check.graphing_word, w("phi1^-1"));
        let check = express_and_verify(&r("7/8"), &w("B")).unwrap();
        assert_eq!(check.target, r("3/4"));
        assert!(check.verified);
    }

    #[test]
    fn partial_words_agree_with_total_words_on_their_domain() {
        // phi1 = A^-1, phi2 = B^-1, phi3 = A restricted
        let total = Alphabet::new([
            (PHI1, gen_a().inverse()),
            (PHI2, gen_b().inverse()),
            (PHI3, gen_a()),
        ])
        .unwrap();
        for word in [
            "phi3 phi2^-1",
            "phi2 phi2 phi3^-1",
            "phi1^-1 phi3 phi2",
            "phi3^-1 phi1",
        ] {
            let word = w(word);
            let partial = phi_value(&word);
            let full = evaluate(&word, &total).unwrap();
            let Some((a, b)) = partial.domain() else {
                continue;
            };
            for k in 0..=16 {
                let x = &a + (&b - &a) * Rational::frac(k, 16);
                assert_eq!(partial.eval(&x).unwrap(), full.eval(&x).unwrap());
            }
        }
    }

    #[test]
    fn sweep_length_one() {
        let report = treeing_sweep(&Graphing::phi_r2(), 1, 1).unwrap();
        assert_eq!(report.words_checked, 6);
        assert!(report.treeing_consistent);
        let fixed: Vec<_> = ["phi1", "phi3"]
            .iter()
            .map(|name| phi_value(&w(name)).fixed_points().isolated_points)
            .collect();
        assert_eq!(fixed, vec![vec![r("0")], vec![r("1")]]);
    }

    #[test]
    fn sweep_counts_match_formula_and_jobs() {
        let g = Graphing::phi_r2();
        let serial = treeing_sweep(&g, 4, 1).unwrap();
        let parallel = treeing_sweep(&g, 4, 3).unwrap();
        assert_eq!(serial, parallel);
        let expected: u128 = (1..=4).map(|k| count_reduced(3, k)).sum();
        assert_eq!(serial.words_checked as u128, expected);
        for stats in &serial.per_length {
            assert_eq!(stats.words as u128, count_reduced(3, stats.length));
        }
        assert!(serial.treeing_consistent);
        assert!(treeing_sweep(&g, 0, 1).is_err());
    }

    #[test]
    fn identity_graphing_is_flagged() {
        let id = Graphing::new(
            2,
            vec![GraphingPart {
                name: "id".into(),
                domain: (r("0"), r("1")),
                map: PLMap::identity(),
            }],
        )
        .unwrap();
        let report = treeing_sweep(&id, 1, 1).unwrap();
        assert!(!report.treeing_consistent);
        assert!(!report.words_with_fixed_interval.is_empty());
        assert!(report
            .words_with_fixed_interval
            .iter()
            .all(|v| v.interval == (r("0"), r("1"))));
    }

    #[test]
    fn nonempty_words_are_dyadic_pieces() {
        let phi = Graphing::phi_r2();
        let mut checked = 0;
        sweep_reduced(phi.alphabet(), 5, None, |word, value| {
            if value.is_empty() {
                return false;
            }
            let cert = value.check_membership(2);
            assert!(
                cert.verdict,
                "{}: {:?}",
                phi.alphabet().word_from_indices(word),
                cert
            );
            checked += 1;
            true
        });
        assert!(checked > 0);
    }
}
