//! k-powers modulo an additive morphism: `k` adjacent blocks of equal length
//! with equal `mu`-values. Sums give additive powers, Parikh vectors give
//! abelian powers.
//!
//! Two finders share the same search order (increasing end `t + ks`, then
//! `s`, then `t`):
//!
//! * [`find_power_scan`] checks block values directly and is complete within
//!   its limits;
//! * [`find_power_vdw`] colours every cut point `n` by `P(n) mod q` and looks
//!   for a monochromatic progression `t, t+s, ..., t+ks`. All blocks of such a
//!   progression are congruent mod `q`, and when `q` exceeds the spread of
//!   equal-length factor values congruence forces equality. The default
//!   modulus is the observed spread plus one; a smaller modulus may yield a
//!   progression whose exact values differ, in which case the modulus is
//!   doubled and the search restarts.
//!
//! Every returned witness is re-validated by direct summation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{CumulativeTable, Factor, MorphismMu, MuKind};
use crate::words::{FiniteWord, WordSource};

/// Blocks `B_i = x[t+(i-1)s+1 .. t+is]` for `1 <= i <= k`, all with value `value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerWitness {
    pub t: usize,
    pub s: usize,
    pub k: usize,
    pub value: Vec<i64>,
}

impl PowerWitness {
    pub fn blocks(&self) -> impl Iterator<Item = Factor> + '_ {
        (1..=self.k).map(|i| Factor::new(self.t + (i - 1) * self.s + 1, self.s))
    }

    /// Index of the last letter of `B_k`.
    pub fn end(&self) -> usize {
        self.t + self.k * self.s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchLimits {
    /// Prefix length `N` searched.
    pub max_prefix: usize,
    /// Largest block length `s`; defaults to `N / k`.
    pub max_block: Option<usize>,
    /// Largest offset `t`; defaults to `N`.
    pub max_offset: Option<usize>,
    /// Initial colouring modulus for the progression search; `None` uses the
    /// observed spread of block values plus one.
    pub modulus: Option<i64>,
    /// Number of modulus doublings allowed.
    pub retry_cap: u32,
    /// Whether `t = 0`, anchored at the empty prefix `P(0) = 0`, is allowed.
    pub allow_empty_anchor: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_prefix: 1000,
            max_block: None,
            max_offset: None,
            modulus: None,
            retry_cap: 16,
            allow_empty_anchor: true,
        }
    }
}

impl SearchLimits {
    pub fn with_prefix(max_prefix: usize) -> Self {
        SearchLimits {
            max_prefix,
            ..Default::default()
        }
    }
}

/// Limits as actually applied to a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedLimits {
    pub prefix_len: usize,
    pub max_block: usize,
    pub max_offset: usize,
    pub allow_empty_anchor: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub retry_cap: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Scan,
    Vdw,
    Simultaneous,
    ModMu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// `t = 0`: the progression starts at the empty prefix.
    EmptyPrefix,
    /// `t >= 1`.
    Position,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    #[serde(flatten)]
    pub witness: PowerWitness,
    pub mu: MuKind,
    pub verified: bool,
    pub method: Method,
    pub anchor: Anchor,
    /// Colouring modulus that produced the witness (progression searches only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<Vec<i64>>,
    pub retries: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotFound {
    pub found: bool,
    pub method: Method,
    pub mu: MuKind,
    pub k: usize,
    /// No witness exists within these limits; nothing is claimed beyond them.
    pub limits: AppliedLimits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PowerOutcome {
    Found(Found),
    NotFound(NotFound),
}

impl PowerOutcome {
    pub fn witness(&self) -> Option<&PowerWitness> {
        match self {
            PowerOutcome::Found(f) => Some(&f.witness),
            PowerOutcome::NotFound(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, PowerOutcome::Found(_))
    }
}

/// True iff every block of `w` has `mu`-value `w.value`. Block values are
/// summed letter by letter, independently of any prefix table.
pub fn validate_witness(word: &FiniteWord, mu: &MorphismMu, w: &PowerWitness) -> Result<bool> {
    if w.k == 0 || w.s == 0 || w.end() > word.len() {
        return Err(Error::FactorOutOfRange {
            start: w.t + 1,
            len: w.k * w.s,
            available: word.len(),
        });
    }
    let letters: Vec<_> = word.letters().collect();
    for b in w.blocks() {
        let value = mu.value_of(letters[b.start - 1..b.end()].iter().copied())?;
        if value != w.value {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Prepared {
    table: CumulativeTable,
    k: usize,
    max_block: usize,
    max_offset: usize,
    allow_empty_anchor: bool,
}

impl Prepared {
    fn new(table: CumulativeTable, k: usize, limits: &SearchLimits) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k = {k}, expected k >= 2")));
        }
        if limits.max_prefix == 0 {
            return Err(Error::InvalidArgument("max_prefix must be positive".into()));
        }
        let n = table.len();
        Ok(Prepared {
            k,
            max_block: limits.max_block.unwrap_or(n / k).min(n / k),
            max_offset: limits.max_offset.unwrap_or(n).min(n),
            allow_empty_anchor: limits.allow_empty_anchor,
            table,
        })
    }

    fn applied(&self, modulus: Option<Vec<i64>>, retry_cap: Option<u32>) -> AppliedLimits {
        AppliedLimits {
            prefix_len: self.table.len(),
            max_block: self.max_block,
            max_offset: self.max_offset,
            allow_empty_anchor: self.allow_empty_anchor,
            modulus,
            retry_cap,
        }
    }

    /// First `(t, s)` in search order accepted by `accept`.
    fn first_match(&self, accept: impl Fn(usize, usize) -> bool + Sync) -> Option<(usize, usize)> {
        let k = self.k;
        let min_t = usize::from(!self.allow_empty_anchor);
        (k..=self.table.len())
            .into_par_iter()
            .find_map_first(|end| {
                (1..=self.max_block.min(end / k)).find_map(|s| {
                    let t = end - k * s;
                    (t >= min_t && t <= self.max_offset && accept(t, s)).then_some((t, s))
                })
            })
    }

    fn is_power(&self, t: usize, s: usize) -> bool {
        (2..=self.k).all(|i| self.table.same_value(t, t + s, t + (i - 1) * s, t + i * s))
    }

    fn witness(&self, t: usize, s: usize) -> PowerWitness {
        let mut value = vec![0; self.table.dim()];
        self.table.between(t, t + s, &mut value);
        PowerWitness {
            t,
            s,
            k: self.k,
            value,
        }
    }

    /// Largest coordinate-wise spread of factor values over lengths `1..=max_block`.
    fn spread(&self) -> Vec<i64> {
        let table = &self.table;
        let (n, d) = (table.len(), table.dim());
        (1..=self.max_block)
            .into_par_iter()
            .map(|len| {
                let mut lo = vec![i64::MAX; d];
                let mut hi = vec![i64::MIN; d];
                for i in 0..=n - len {
                    let (a, b) = (table.prefix(i), table.prefix(i + len));
                    for j in 0..d {
                        let v = b[j] - a[j];
                        lo[j] = lo[j].min(v);
                        hi[j] = hi[j].max(v);
                    }
                }
                lo.iter().zip(&hi).map(|(l, h)| h - l).collect::<Vec<i64>>()
            })
            .reduce(
                || vec![0; d],
                |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
            )
    }
}

fn anchor(w: &PowerWitness) -> Anchor {
    if w.t == 0 {
        Anchor::EmptyPrefix
    } else {
        Anchor::Position
    }
}

fn certify(word: &FiniteWord, mu: &MorphismMu, w: &PowerWitness) -> Result<()> {
    if validate_witness(word, mu, w)? {
        Ok(())
    } else {
        Err(Error::Internal(format!("witness {w:?} failed validation")))
    }
}

fn prepare(
    source: &WordSource,
    mu: &MorphismMu,
    k: usize,
    limits: &SearchLimits,
) -> Result<(FiniteWord, Prepared)> {
    let word = source.prefix_up_to(limits.max_prefix.max(1))?;
    let table = CumulativeTable::accumulate(mu, &word)?;
    let prepared = Prepared::new(table, k, limits)?;
    Ok((word, prepared))
}

/// Exhaustive search in order of `(t + ks, s, t)`.
pub fn find_power_scan(
    source: &WordSource,
    mu: &MorphismMu,
    k: usize,
    limits: &SearchLimits,
) -> Result<PowerOutcome> {
    let (word, p) = prepare(source, mu, k, limits)?;
    scan_prepared(&word, mu, &p)
}

pub fn find_power_scan_word(
    word: &FiniteWord,
    mu: &MorphismMu,
    k: usize,
    limits: &SearchLimits,
) -> Result<PowerOutcome> {
    let word = if word.len() > limits.max_prefix {
        word.factor(1, limits.max_prefix)?
    } else {
        word.clone()
    };
    let p = Prepared::new(CumulativeTable::accumulate(mu, &word)?, k, limits)?;
    scan_prepared(&word, mu, &p)
}

fn scan_prepared(word: &FiniteWord, mu: &MorphismMu, p: &Prepared) -> Result<PowerOutcome> {
    match p.first_match(|t, s| p.is_power(t, s)) {
        Some((t, s)) => {
            let witness = p.witness(t, s);
            certify(word, mu, &witness)?;
            Ok(PowerOutcome::Found(Found {
                anchor: anchor(&witness),
                witness,
                mu: mu.kind(),
                verified: true,
                method: Method::Scan,
                modulus: None,
                retries: 0,
            }))
        }
        None => Ok(PowerOutcome::NotFound(NotFound {
            found: false,
            method: Method::Scan,
            mu: mu.kind(),
            k: p.k,
            limits: p.applied(None, None),
        })),
    }
}

enum ProgressionResult {
    Found {
        t: usize,
        s: usize,
        modulus: Vec<i64>,
        retries: u32,
    },
    NotFound {
        modulus: Vec<i64>,
    },
}

/// Monochromatic progression search with modulus doubling.
fn progression_search(
    p: &Prepared,
    initial: Vec<i64>,
    retry_cap: u32,
) -> Result<ProgressionResult> {
    if initial.iter().any(|&m| m < 1) {
        return Err(Error::InvalidArgument(format!(
            "modulus {initial:?} must be positive"
        )));
    }
    let d = p.table.dim();
    let k = p.k;
    let mut modulus = initial;
    let mut retries = 0;
    loop {
        let colors = p.table.residues(&modulus);
        let color = |n: usize| &colors[n * d..(n + 1) * d];
        let hit = p.first_match(|t, s| {
            let c = color(t);
            (1..=k).all(|i| color(t + i * s) == c)
        });
        match hit {
            None => return Ok(ProgressionResult::NotFound { modulus }),
            Some((t, s)) if p.is_power(t, s) => {
                return Ok(ProgressionResult::Found {
                    t,
                    s,
                    modulus,
                    retries,
                });
            }
            Some(_) => {
                if retries == retry_cap {
                    return Err(Error::RetryCapExhausted { retries, modulus });
                }
                retries += 1;
                modulus = modulus
                    .iter()
                    .map(|m| {
                        m.checked_mul(2)
                            .ok_or(Error::Overflow("doubling the modulus"))
                    })
                    .collect::<Result<_>>()?;
            }
        }
    }
}

fn progression_outcome(
    word: &FiniteWord,
    mu: &MorphismMu,
    p: &Prepared,
    initial: Vec<i64>,
    limits: &SearchLimits,
    method: Method,
) -> Result<PowerOutcome> {
    match progression_search(p, initial, limits.retry_cap)? {
        ProgressionResult::Found {
            t,
            s,
            modulus,
            retries,
        } => {
            let witness = p.witness(t, s);
            certify(word, mu, &witness)?;
            Ok(PowerOutcome::Found(Found {
                anchor: anchor(&witness),
                witness,
                mu: mu.kind(),
                verified: true,
                method,
                modulus: Some(modulus),
                retries,
            }))
        }
        ProgressionResult::NotFound { modulus } => Ok(PowerOutcome::NotFound(NotFound {
            found: false,
            method,
            mu: mu.kind(),
            k: p.k,
            limits: p.applied(Some(modulus), Some(limits.retry_cap)),
        })),
    }
}

/// The colouring modulus used when none is given: one more than the largest
/// coordinate-wise spread of factor values of length up to `max_block`.
fn auto_modulus(p: &Prepared) -> Result<i64> {
    let spread = p.spread().into_iter().max().unwrap_or(0);
    spread
        .checked_add(1)
        .ok_or(Error::Overflow("choosing the modulus"))
}

/// Progression search colouring `n` by `P(n) mod q` coordinate-wise.
pub fn find_power_vdw(
    source: &WordSource,
    mu: &MorphismMu,
    k: usize,
    limits: &SearchLimits,
) -> Result<PowerOutcome> {
    let (word, p) = prepare(source, mu, k, limits)?;
    vdw_prepared(&word, mu, &p, limits, Method::Vdw)
}

fn vdw_prepared(
    word: &FiniteWord,
    mu: &MorphismMu,
    p: &Prepared,
    limits: &SearchLimits,
    method: Method,
) -> Result<PowerOutcome> {
    let q = match limits.modulus {
        Some(q) => q,
        None => auto_modulus(p)?,
    };
    progression_outcome(word, mu, p, vec![q; p.table.dim()], limits, method)
}

/// k-power modulo an arbitrary additive morphism, by the same progression
/// search as [`find_power_vdw`].
pub fn find_power_mod_mu(
    source: &WordSource,
    mu: &MorphismMu,
    k: usize,
    limits: &SearchLimits,
) -> Result<PowerOutcome> {
    mu.covers(source.alphabet())?;
    let (word, p) = prepare(source, mu, k, limits)?;
    vdw_prepared(&word, mu, &p, limits, Method::ModMu)
}

/// Common `t, s` such that each word over `Z` has an additive k-power on the
/// same blocks. Cut points are coloured by the tuple of per-word residues;
/// the witness value lists the per-word block sums.
pub fn find_simultaneous(
    sources: &[WordSource],
    k: usize,
    limits: &SearchLimits,
) -> Result<PowerOutcome> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("no words given".into()));
    }
    if let Some(bad) = sources.iter().find(|s| s.dim() != 1) {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: bad.dim(),
        });
    }
    let n = sources
        .iter()
        .filter_map(WordSource::available)
        .fold(limits.max_prefix, usize::min);
    let words = sources
        .iter()
        .map(|s| s.prefix(n))
        .collect::<Result<Vec<_>>>()?;
    let mus: Vec<MorphismMu> = words
        .iter()
        .map(|w| MorphismMu::additive(w.alphabet()))
        .collect();
    let tables = words
        .iter()
        .zip(&mus)
        .map(|(w, mu)| CumulativeTable::accumulate(mu, w))
        .collect::<Result<Vec<_>>>()?;
    let p = Prepared::new(CumulativeTable::zip(&tables)?, k, limits)?;
    let initial = match limits.modulus {
        Some(q) => vec![q; sources.len()],
        None => p
            .spread()
            .into_iter()
            .map(|s| {
                s.checked_add(1)
                    .ok_or(Error::Overflow("choosing the modulus"))
            })
            .collect::<Result<_>>()?,
    };
    match progression_search(&p, initial, limits.retry_cap)? {
        ProgressionResult::Found {
            t,
            s,
            modulus,
            retries,
        } => {
            let witness = p.witness(t, s);
            for (j, (w, mu)) in words.iter().zip(&mus).enumerate() {
                let single = PowerWitness {
                    value: vec![witness.value[j]],
                    ..witness.clone()
                };
                certify(w, mu, &single)?;
            }
            Ok(PowerOutcome::Found(Found {
                anchor: anchor(&witness),
                witness,
                mu: MuKind::Additive,
                verified: true,
                method: Method::Simultaneous,
                modulus: Some(modulus),
                retries,
            }))
        }
        ProgressionResult::NotFound { modulus } => Ok(PowerOutcome::NotFound(NotFound {
            found: false,
            method: Method::Simultaneous,
            mu: MuKind::Additive,
            k,
            limits: p.applied(Some(modulus), Some(limits.retry_cap)),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    fn periodic(p: &[i64]) -> WordSource {
        WordSource::periodic_scalars(p).unwrap()
    }

    fn additive(src: &WordSource) -> MorphismMu {
        MorphismMu::additive(src.alphabet())
    }

    fn parikh(src: &WordSource) -> MorphismMu {
        MorphismMu::parikh(src.alphabet())
    }

    fn found(o: PowerOutcome) -> Found {
        match o {
            PowerOutcome::Found(f) => f,
            PowerOutcome::NotFound(n) => panic!("not found within {:?}", n.limits),
        }
    }

    /// Independent enumeration: first (t, s) in (t + ks, s, t) order whose
    /// blocks have equal direct sums.
    fn brute_first_power(values: &[i64], k: usize) -> Option<(usize, usize)> {
        let n = values.len();
        for end in k..=n {
            for s in 1..=end / k {
                let t = end - k * s;
                let sums: Vec<i64> = (0..k)
                    .map(|i| values[t + i * s..t + (i + 1) * s].iter().sum())
                    .collect();
                if sums.iter().all(|&x| x == sums[0]) {
                    return Some((t, s));
                }
            }
        }
        None
    }

    /// Independent enumeration of the first monochromatic progression of
    /// prefix sums modulo `q`, per word.
    fn brute_first_progression(words: &[Vec<i64>], k: usize, q: &[i64]) -> Option<(usize, usize)> {
        let n = words[0].len();
        let sums: Vec<Vec<i64>> = words
            .iter()
            .map(|w| {
                std::iter::once(0)
                    .chain(w.iter().scan(0, |acc, x| {
                        *acc += x;
                        Some(*acc)
                    }))
                    .collect()
            })
            .collect();
        for end in k..=n {
            for s in 1..=end / k {
                let t = end - k * s;
                let mono = sums.iter().zip(q).all(|(p, &q)| {
                    (0..=k).all(|i| p[t + i * s].rem_euclid(q) == p[t].rem_euclid(q))
                });
                if mono {
                    return Some((t, s));
                }
            }
        }
        None
    }

    #[test]
    fn validate_examples() {
        let w = periodic(&[0, 1]).prefix(10).unwrap();
        let mu = MorphismMu::additive(w.alphabet());
        let ok = PowerWitness {
            t: 0,
            s: 2,
            k: 3,
            value: vec![1],
        };
        assert!(validate_witness(&w, &mu, &ok).unwrap());
        let bad = PowerWitness {
            t: 0,
            s: 1,
            k: 2,
            value: vec![0],
        };
        assert!(!validate_witness(&w, &mu, &bad).unwrap());
        let out = PowerWitness {
            t: 5,
            s: 2,
            k: 3,
            value: vec![1],
        };
        assert!(validate_witness(&w, &mu, &out).is_err());

        let w = FiniteWord::from_scalars(&[0, 1, 1, 0]).unwrap();
        let mu = MorphismMu::parikh(w.alphabet());
        let sq = PowerWitness {
            t: 0,
            s: 2,
            k: 2,
            value: vec![1, 1],
        };
        assert!(validate_witness(&w, &mu, &sq).unwrap());
    }

    #[test]
    fn scan_periodic() {
        let src = periodic(&[0, 1]);
        let f = found(
            find_power_scan(&src, &additive(&src), 4, &SearchLimits::with_prefix(100)).unwrap(),
        );
        assert_eq!(
            f.witness,
            PowerWitness {
                t: 0,
                s: 2,
                k: 4,
                value: vec![1]
            }
        );
        let values = src.prefix(100).unwrap().to_scalars().unwrap();
        assert_eq!(brute_first_power(&values, 4), Some((0, 2)));
        assert_eq!(f.anchor, Anchor::EmptyPrefix);
    }

    #[test]
    fn scan_matches_brute_force() {
        let values = [
            2, -1, 0, 3, 3, -2, 1, 0, 0, 2, -1, 1, 3, -2, 0, 1, 2, 2, -1, 0, 3, 1, -2, 0,
        ];
        let src = WordSource::explicit_scalars(&values).unwrap();
        for k in 2..=5 {
            let o =
                find_power_scan(&src, &additive(&src), k, &SearchLimits::with_prefix(100)).unwrap();
            assert_eq!(
                o.witness().map(|w| (w.t, w.s)),
                brute_first_power(&values, k),
                "k = {k}"
            );
        }
    }

    #[test]
    fn scan_without_empty_anchor() {
        let src = periodic(&[0, 1]);
        let limits = SearchLimits {
            allow_empty_anchor: false,
            ..SearchLimits::with_prefix(100)
        };
        let f = found(find_power_scan(&src, &additive(&src), 4, &limits).unwrap());
        assert!(f.witness.t >= 1);
        assert_eq!(f.anchor, Anchor::Position);
    }

    #[test]
    fn champernowne_abelian_fourth_power() {
        let src = WordSource::champernowne();
        let mu = parikh(&src);
        let f = found(find_power_scan(&src, &mu, 4, &SearchLimits::with_prefix(10_000)).unwrap());
        let w = src.prefix(f.witness.end()).unwrap();
        assert!(validate_witness(&w, &mu, &f.witness).unwrap());
    }

    #[test]
    fn dekking_has_no_abelian_fourth_power_in_short_prefix() {
        let src = WordSource::dekking();
        let o = find_power_scan(&src, &parikh(&src), 4, &SearchLimits::with_prefix(2000)).unwrap();
        let PowerOutcome::NotFound(nf) = o else {
            panic!("{o:?}")
        };
        assert_eq!(nf.limits.prefix_len, 2000);
        // It does have abelian cubes.
        let o = find_power_scan(&src, &parikh(&src), 3, &SearchLimits::with_prefix(2000)).unwrap();
        assert!(o.is_found());
    }

    #[test]
    fn k_must_be_at_least_two() {
        let src = periodic(&[0, 1]);
        assert!(find_power_scan(&src, &additive(&src), 1, &SearchLimits::default()).is_err());
    }

    #[test]
    fn vdw_periodic() {
        let src = periodic(&[0, 1]);
        let f = found(
            find_power_vdw(&src, &additive(&src), 3, &SearchLimits::with_prefix(1000)).unwrap(),
        );
        let w = src.prefix(1000).unwrap();
        assert!(validate_witness(&w, &additive(&src), &f.witness).unwrap());
        // Spread of factor sums of (01)^w is 1, so the modulus is 2.
        assert_eq!(f.modulus, Some(vec![2]));
        let values = w.to_scalars().unwrap();
        let expected = brute_first_progression(&[values], 3, &[2]).unwrap();
        assert_eq!((f.witness.t, f.witness.s), expected);
        assert_eq!(expected, (0, 4));
        let scan =
            find_power_scan(&src, &additive(&src), 3, &SearchLimits::with_prefix(1000)).unwrap();
        assert!(scan.is_found());
    }

    #[test]
    fn vdw_constant_word() {
        let src = periodic(&[0]);
        for k in 2..6 {
            let f = found(
                find_power_vdw(&src, &additive(&src), k, &SearchLimits::with_prefix(50)).unwrap(),
            );
            assert_eq!(
                f.witness,
                PowerWitness {
                    t: 0,
                    s: 1,
                    k,
                    value: vec![0]
                }
            );
        }
    }

    #[test]
    fn vdw_tau() {
        let src = WordSource::dekking_coded();
        let mu = additive(&src);
        let f = found(find_power_vdw(&src, &mu, 5, &SearchLimits::with_prefix(1000)).unwrap());
        let w = src.prefix(1000).unwrap();
        assert!(validate_witness(&w, &mu, &f.witness).unwrap());
        let same =
            found(find_power_mod_mu(&src, &mu, 5, &SearchLimits::with_prefix(1000)).unwrap());
        assert_eq!(same.witness, f.witness);
    }

    #[test]
    fn small_modulus_doubles() {
        let src =
            WordSource::explicit_scalars(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0, 0])
                .unwrap();
        let mu = additive(&src);
        let limits = SearchLimits {
            modulus: Some(1),
            ..SearchLimits::with_prefix(100)
        };
        // Modulus 1 makes (0, 1) monochromatic although the blocks differ.
        let f = found(find_power_vdw(&src, &mu, 2, &limits).unwrap());
        assert!(f.retries >= 1);
        let w = src.prefix(18).unwrap();
        assert!(validate_witness(&w, &mu, &f.witness).unwrap());

        let capped = SearchLimits {
            retry_cap: 0,
            ..limits
        };
        assert!(matches!(
            find_power_vdw(&src, &mu, 2, &capped),
            Err(Error::RetryCapExhausted { retries: 0, .. })
        ));
    }

    #[test]
    fn monochromatic_blocks_are_congruent() {
        let src = WordSource::dekking_coded();
        let w = src.prefix(600).unwrap();
        let mu = additive(&src);
        let table = CumulativeTable::accumulate(&mu, &w).unwrap();
        let q = 4;
        let r = table.residues(&[q]);
        for (n, &c) in r.iter().enumerate().skip(1) {
            assert_eq!(
                c,
                table.factor_value(Factor::new(1, n)).unwrap()[0].rem_euclid(q)
            );
        }
        for t in 0..50 {
            for s in 1..40 {
                if t + 3 * s > 600 || !(1..=3).all(|i| r[t + i * s] == r[t]) {
                    continue;
                }
                let sums: Vec<i64> = (0..3)
                    .map(|i| table.factor_value(Factor::new(t + i * s + 1, s)).unwrap()[0])
                    .collect();
                assert!(sums.iter().all(|x| (x - sums[0]).rem_euclid(q) == 0));
            }
        }
    }

    #[test]
    fn zero_morphism() {
        let src = WordSource::champernowne();
        let mu = MorphismMu::zero(src.alphabet(), 2).unwrap();
        let f = found(find_power_mod_mu(&src, &mu, 5, &SearchLimits::with_prefix(100)).unwrap());
        assert_eq!(
            f.witness,
            PowerWitness {
                t: 0,
                s: 1,
                k: 5,
                value: vec![0, 0]
            }
        );
        assert_eq!(f.mu, MuKind::Custom);
    }

    #[test]
    fn mod_mu_requires_full_images() {
        let src = periodic(&[0, 1]);
        let mu = MorphismMu::custom([(Letter::scalar(0), vec![1])].into_iter().collect()).unwrap();
        assert!(matches!(
            find_power_mod_mu(&src, &mu, 2, &SearchLimits::default()),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn parikh_mod_mu_on_periodic() {
        let src = periodic(&[0, 1]);
        let mu = parikh(&src);
        let f = found(find_power_mod_mu(&src, &mu, 3, &SearchLimits::with_prefix(200)).unwrap());
        let w = src.prefix(200).unwrap();
        assert!(validate_witness(&w, &mu, &f.witness).unwrap());
        let letters = w.to_letters();
        let mut blocks: Vec<Vec<Letter>> = f
            .witness
            .blocks()
            .map(|b| {
                let mut v = letters[b.start - 1..b.end()].to_vec();
                v.sort();
                v
            })
            .collect();
        blocks.dedup();
        assert_eq!(blocks.len(), 1);
    }

    #[test]
    fn simultaneous_periodic_pair() {
        let a = periodic(&[0, 1]);
        let b = periodic(&[0, 0, 1]);
        for k in 2..=3 {
            let f = found(
                find_simultaneous(
                    &[a.clone(), b.clone()],
                    k,
                    &SearchLimits::with_prefix(10_000),
                )
                .unwrap(),
            );
            let wa = a.prefix(10_000).unwrap().to_scalars().unwrap();
            let wb = b.prefix(10_000).unwrap().to_scalars().unwrap();
            let q = f.modulus.clone().unwrap();
            assert_eq!(q, [2, 2]);
            let expected = brute_first_progression(&[wa.clone(), wb.clone()], k, &q).unwrap();
            assert_eq!((f.witness.t, f.witness.s), expected);
            for (vals, j) in [(&wa, 0), (&wb, 1)] {
                let w = &f.witness;
                for i in 0..k {
                    let sum: i64 = vals[w.t + i * w.s..w.t + (i + 1) * w.s].iter().sum();
                    assert_eq!(sum, w.value[j]);
                }
            }
        }
    }

    #[test]
    fn simultaneous_single_word_is_vdw() {
        let src = WordSource::dekking_coded();
        for k in 2..=4 {
            let limits = SearchLimits::with_prefix(1000);
            let a = find_simultaneous(std::slice::from_ref(&src), k, &limits).unwrap();
            let b = find_power_vdw(&src, &additive(&src), k, &limits).unwrap();
            assert_eq!(a.witness(), b.witness());
        }
        let c = periodic(&[2]);
        let f =
            found(find_simultaneous(&[c.clone(), c], 3, &SearchLimits::with_prefix(50)).unwrap());
        assert_eq!((f.witness.t, f.witness.s), (0, 1));
    }

    #[test]
    fn simultaneous_rejects_vector_words() {
        let l = Letter::new(vec![1, 0]).unwrap();
        let src = WordSource::periodic(vec![l]).unwrap();
        assert!(find_simultaneous(&[src], 2, &SearchLimits::default()).is_err());
    }

    #[test]
    fn witness_json_shape() {
        let src = periodic(&[0, 1]);
        let o = find_power_scan(&src, &additive(&src), 4, &SearchLimits::with_prefix(100)).unwrap();
        let v = serde_json::to_value(&o).unwrap();
        assert_eq!(v["t"], 0);
        assert_eq!(v["s"], 2);
        assert_eq!(v["k"], 4);
        assert_eq!(v["value"], serde_json::json!([1]));
        assert_eq!(v["mu"], "additive");
        assert_eq!(v["verified"], true);
        let back: PowerOutcome = serde_json::from_value(v).unwrap();
        assert_eq!(back, o);

        let src = WordSource::dekking();
        let o = find_power_scan(&src, &parikh(&src), 4, &SearchLimits::with_prefix(300)).unwrap();
        let v = serde_json::to_value(&o).unwrap();
        assert_eq!(v["found"], false);
        assert_eq!(v["limits"]["prefix_len"], 300);
    }
}
