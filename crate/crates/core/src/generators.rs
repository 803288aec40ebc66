//! Explicit elements of F(N): A, B, the three-piece family A_{d,p}, the
//! infinite generating family x_i, and the element gamma = x_N x_1^-1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::PLMap;
use crate::rational::{is_nadic, Rational};
use crate::words::{evaluate, Alphabet, GenWord};

/// The generator A of F: slopes 1/2, 1, 2 with breakpoints 1/2 and 3/4.
pub fn gen_a() -> PLMap {
    PLMap::from_fracs(&[(0, 1, 0, 1), (1, 2, 1, 4), (3, 4, 1, 2), (1, 1, 1, 1)])
        .expect("A is a valid map")
}

/// The generator B of F: identity on [0,1/2], then slopes 1/2, 1, 2.
pub fn gen_b() -> PLMap {
    PLMap::from_fracs(&[
        (0, 1, 0, 1),
        (1, 2, 1, 2),
        (3, 4, 5, 8),
        (7, 8, 3, 4),
        (1, 1, 1, 1),
    ])
    .expect("B is a valid map")
}

/// The three-piece map with slopes `n^-p`, 1, `n^p` and breakpoints `d`
/// and `1 - d/n^p`.
///
/// Requires `d` N-adic with `0 < d < 1`, `d < n^p`, `p != 0`, and
/// `d (1 + n^-p) <= 1` so that the middle piece is a (possibly degenerate)
/// interval.
pub fn gen_adp(n: u32, d: &Rational, p: i64) -> Result<PLMap> {
    if n < 2 {
        return Err(Error::InvalidBase(n));
    }
    let invalid = |why: &str| Err(Error::InvalidParameters(format!("A_{{{d},{p}}}: {why}")));
    if !d.is_positive() || d >= &Rational::one() {
        return invalid("d must lie strictly between 0 and 1");
    }
    if !is_nadic(d, n)? {
        return invalid("d is not N-adic");
    }
    if p == 0 {
        return invalid("p = 0 gives the identity");
    }
    let scale = Rational::power(n, p);
    if d >= &scale {
        return invalid("d must be smaller than n^p");
    }
    let shrunk = d / &scale;
    let right = Rational::one() - &shrunk;
    if d > &right {
        return invalid("middle interval is empty (need d (1 + n^-p) <= 1)");
    }
    PLMap::new(vec![
        (Rational::zero(), Rational::zero()),
        (d.clone(), shrunk),
        (right, Rational::one() - d),
        (Rational::one(), Rational::one()),
    ])
}

/// Parses the built-in names `A`, `B` and `A_{d,p}(d;p)`, the latter for base `n`.
pub fn builtin(name: &str, n: u32) -> Result<PLMap> {
    match name {
        "A" => Ok(gen_a()),
        "B" => Ok(gen_b()),
        _ => {
            let args = name
                .strip_prefix("A_{d,p}(")
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(|| Error::UnboundLetter(name.to_string()))?;
            let (d, p) = args.split_once(';').ok_or_else(|| {
                Error::parse(8, "expected `A_{d,p}(d;p)` with `;` between the arguments")
            })?;
            let d: Rational = d.parse()?;
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(9 + args.find(';').unwrap_or(0), "invalid exponent"))?;
            gen_adp(n, &d, p)
        }
    }
}

pub fn builtin_name_adp(d: &Rational, p: i64) -> String {
    format!("A_{{d,p}}({d};{p})")
}

/// The generators x_0, x_1, ... of the infinite presentation, grown on
/// demand from `n` seeds by `x_{m+n-1} = x_0^-1 x_m x_0` (m >= 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFamily {
    n: u32,
    derived: Vec<PLMap>,
}

/// On-disk seed family: `{"n": N, "seeds": [PLMap, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub n: u32,
    pub seeds: Vec<PLMap>,
}

impl SeedFile {
    pub fn into_family(self) -> Result<GeneratorFamily> {
        GeneratorFamily::new(self.n, self.seeds)
    }
}

impl GeneratorFamily {
    /// Validates `n` seeds x_0..x_{n-1} as members of F(n).
    pub fn new(n: u32, seeds: Vec<PLMap>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidBase(n));
        }
        if seeds.len() != n as usize {
            return Err(Error::InvalidParameters(format!(
                "F({n}) needs {n} seeds x_0..x_{}, got {}",
                n - 1,
                seeds.len()
            )));
        }
        for (i, seed) in seeds.iter().enumerate() {
            seed.ensure_member(n).map_err(|e| match e {
                Error::NotMember { n, reason } => Error::NotMember {
                    n,
                    reason: format!("seed x_{i}: {reason}"),
                },
                other => other,
            })?;
        }
        Ok(GeneratorFamily { n, derived: seeds })
    }

    /// The family of F = F(2) seeded with x_0 = A, x_1 = B.
    pub fn thompson_f() -> Self {
        GeneratorFamily::new(2, vec![gen_a(), gen_b()]).expect("A and B are members of F")
    }

    /// Grows the family so that x_0..=x_{up_to} are available.
    pub fn extend(&mut self, up_to: usize) {
        let shift = self.n as usize - 1;
        let x0 = self.derived[0].clone();
        let x0_inv = x0.inverse();
        while self.derived.len() <= up_to {
            let k = self.derived.len();
            let next = x0_inv.compose(&self.derived[k - shift].compose(&x0));
            self.derived.push(next);
        }
    }

    pub fn extended(mut self, up_to: usize) -> Self {
        self.extend(up_to);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn seeds(&self) -> &[PLMap] {
        &self.derived[..self.n as usize]
    }

    pub fn len(&self) -> usize {
        self.derived.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derived.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&PLMap> {
        self.derived.get(i)
    }

    pub fn members(&self) -> &[PLMap] {
        &self.derived
    }

    /// Alphabet binding `x0, x1, ...` to the currently derived members.
    pub fn alphabet(&self) -> Alphabet<PLMap> {
        Alphabet::new(
            self.derived
                .iter()
                .enumerate()
                .map(|(i, f)| (format!("x{i}"), f.clone())),
        )
        .expect("generated names are distinct")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub i: usize,
    pub j: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub n: u32,
    pub max_index: usize,
    pub relations: Vec<RelationCheck>,
    pub all_hold: bool,
}

/// Checks `x_j x_i = x_i x_{j+n-1}` for all `0 <= i < j <= max_index` as
/// exact map equalities, extending the family as needed.
pub fn check_presentation(fam: &mut GeneratorFamily, max_index: usize) -> PresentationReport {
    let shift = fam.n as usize - 1;
    fam.extend(max_index + shift);
    let alphabet = fam.alphabet();
    let mut relations = Vec::new();
    for j in 1..=max_index {
        for i in 0..j {
            let lhs = GenWord::parse(&format!("x{j} x{i}")).expect("well-formed");
            let rhs = GenWord::parse(&format!("x{i} x{}", j + shift)).expect("well-formed");
            let holds = evaluate(&lhs, &alphabet).expect("bound")
                == evaluate(&rhs, &alphabet).expect("bound");
            relations.push(RelationCheck { i, j, holds });
        }
    }
    relations.sort_by_key(|r| (r.i, r.j));
    PresentationReport {
        n: fam.n,
        max_index,
        all_hold: relations.iter().all(|r| r.holds),
        relations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRelation {
    pub relation: String,
    pub holds: bool,
}

/// The two commutator relations of the finite presentation of F over {A, B}.
pub fn check_finite_relations() -> Vec<NamedRelation> {
    let alphabet = Alphabet::new([("A", gen_a()), ("B", gen_b())]).expect("distinct names");
    let u = GenWord::parse("A B^-1").expect("well-formed");
    [
        ("[A B^-1, A^-1 B A]", "A^-1 B A"),
        ("[A B^-1, A^-2 B A^2]", "A^-1 A^-1 B A A"),
    ]
    .into_iter()
    .map(|(label, v)| {
        let v = GenWord::parse(v).expect("well-formed");
        let word = GenWord::commutator(&u, &v);
        NamedRelation {
            relation: format!("{label} = 1"),
            holds: evaluate(&word, &alphabet).expect("bound").is_identity(),
        }
    })
    .collect()
}

/// gamma = x_n x_1^-1.
pub fn gamma(fam: &mut GeneratorFamily) -> PLMap {
    let n = fam.n as usize;
    fam.extend(n);
    let word = GenWord::parse(&format!("x{n} x1^-1")).expect("well-formed");
    evaluate(&word, &fam.alphabet()).expect("bound")
}

/// Whether gamma commutes with x_j, compared as exact maps.
pub fn gamma_commutes_with(fam: &mut GeneratorFamily, j: usize) -> bool {
    let g = gamma(fam);
    fam.extend(j);
    let xj = &fam.members()[j];
    g.compose(xj) == xj.compose(&g)
}
