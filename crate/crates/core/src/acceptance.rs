//! The acceptance suite: eleven end-to-end checks of the library against the
//! known behaviour of the reference words, each reported as pass or fail.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexity::{
    check_abelian_bounds, check_additive_bounds, observed_bounds, profile, Trend,
};
use crate::error::{Error, Result};
use crate::measures::{CumulativeTable, MorphismMu};
use crate::powers::{
    find_power_mod_mu, find_power_scan, find_power_vdw, find_simultaneous, validate_witness,
    PowerOutcome, PowerWitness, SearchLimits,
};
use crate::search::{backtrack, contains_pattern, AvoidanceProblem, PatternMode};
use crate::words::{scalar_map, Letter, LetterMap, WordSource};

const SEED: u64 = 0x5eed_5a45;

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    /// Prefixes of length 10^3 instead of the full sizes.
    pub quick: bool,
    /// Replaces `0 -> 011, 1 -> 0001` for the Dekking word and its coding.
    pub dekking_rules: Option<LetterMap>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<32} {:>7} ms  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub quick: bool,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

pub const CRITERIA: [&str; 11] = [
    "tau sum complexity at most 4",
    "tau block sums",
    "dekking has no abelian 4th power",
    "champernowne abelian complexity",
    "champernowne abelian 4th power",
    "bound inequalities",
    "progression search on bounded words",
    "simultaneous additive powers",
    "mod-mu specializations",
    "lift correspondence",
    "binary additive-square search",
];

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    SuiteReport {
        quick: config.quick,
        results: (1..=CRITERIA.len())
            .map(|id| run_criterion(id, config))
            .collect(),
    }
}

pub fn run_criterion(id: usize, config: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let suite = Suite { config };
    let outcome = match id {
        1 => suite.tau_size(),
        2 => suite.tau_sums(),
        3 => suite.dekking_avoidance(),
        4 => suite.champernowne_complexity(),
        5 => suite.champernowne_power(),
        6 => suite.bound_suite(),
        7 => suite.vdw_on_bounded(),
        8 => suite.simultaneous(),
        9 => suite.specializations(),
        10 => suite.lift_correspondence(),
        11 => suite.binary_squares(),
        _ => Err(Error::InvalidArgument(format!("no criterion {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok(Verdict { passed, detail }) => (passed, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name: CRITERIA
            .get(id.wrapping_sub(1))
            .copied()
            .unwrap_or("unknown"),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        passed: true,
        detail: detail.into(),
    })
}

fn fail(detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        passed: false,
        detail: detail.into(),
    })
}

/// Seeded words over `letters`, used where the suite needs arbitrary inputs.
pub fn pseudo_random_words(
    count: usize,
    len: usize,
    letters: &[i64],
    stream: u64,
) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(stream);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| letters[rng.gen_range(0..letters.len())])
                .collect()
        })
        .collect()
}

struct Suite<'a> {
    config: &'a SuiteConfig,
}

impl Suite<'_> {
    fn scale(&self, full: usize) -> usize {
        if self.config.quick {
            full.min(1000)
        } else {
            full
        }
    }

    fn sigma(&self) -> Result<WordSource> {
        match &self.config.dekking_rules {
            Some(rules) => WordSource::morphic(rules.clone(), Letter::scalar(0)),
            None => Ok(WordSource::dekking()),
        }
    }

    fn tau(&self) -> Result<WordSource> {
        WordSource::block_code(self.sigma()?, scalar_map(&[(0, &[0, 3]), (1, &[1, 2])]))
    }

    fn tau_profile(&self) -> Result<crate::complexity::ComplexityProfile> {
        let tau = self.tau()?;
        let n = self.scale(100_000);
        let n_max = if self.config.quick { 128 } else { 512 };
        profile(&tau, &MorphismMu::additive(tau.alphabet()), n, n_max)
    }

    fn tau_size(&self) -> Result<Verdict> {
        let p = self.tau_profile()?;
        match p.rows.iter().find(|r| r.size() > 4) {
            Some(r) => fail(format!("n = {} has {} distinct sums", r.n, r.size())),
            None => pass(format!(
                "N = {}, n <= {}, largest size {}",
                p.prefix_len,
                p.n_max(),
                p.sizes().into_iter().max().unwrap_or(0)
            )),
        }
    }

    fn tau_sums(&self) -> Result<Verdict> {
        let p = self.tau_profile()?;
        for row in &p.rows {
            let n = row.n as i64;
            let (base, offsets) = if n % 2 == 0 {
                (3 * n / 2, -1..=1)
            } else {
                (3 * (n - 1) / 2, 0..=3)
            };
            for v in &row.values {
                if !offsets.contains(&(v.value[0] - base)) {
                    return fail(format!(
                        "n = {n}: sum {} at position {}",
                        v.value[0], v.first_start
                    ));
                }
            }
        }
        pass(format!("N = {}, n <= {}", p.prefix_len, p.n_max()))
    }

    fn dekking_avoidance(&self) -> Result<Verdict> {
        let sigma = self.sigma()?;
        let n = self.scale(10_000);
        let o = find_power_scan(
            &sigma,
            &MorphismMu::parikh(sigma.alphabet()),
            4,
            &SearchLimits::with_prefix(n),
        )?;
        match o {
            PowerOutcome::NotFound(nf) => pass(format!("none within N = {}", nf.limits.prefix_len)),
            PowerOutcome::Found(f) => fail(format!(
                "abelian 4th power at t = {}, s = {}",
                f.witness.t, f.witness.s
            )),
        }
    }

    fn champernowne_complexity(&self) -> Result<Verdict> {
        let c = WordSource::champernowne();
        let (n, n_max) = if self.config.quick {
            (1000, 7)
        } else {
            (1 << 16, 10)
        };
        let p = profile(&c, &MorphismMu::parikh(c.alphabet()), n, n_max)?;
        for row in &p.rows {
            if row.size() != row.n + 1 {
                return fail(format!("n = {}: {} Parikh vectors", row.n, row.size()));
            }
        }
        pass(format!("N = {n}, sizes n + 1 for n <= {n_max}"))
    }

    fn champernowne_power(&self) -> Result<Verdict> {
        let c = WordSource::champernowne();
        let mu = MorphismMu::parikh(c.alphabet());
        let n = self.scale(10_000);
        match find_power_scan(&c, &mu, 4, &SearchLimits::with_prefix(n))? {
            PowerOutcome::Found(f) => {
                let w = c.prefix(f.witness.end())?;
                if validate_witness(&w, &mu, &f.witness)? {
                    pass(format!(
                        "t = {}, s = {}, value {:?}",
                        f.witness.t, f.witness.s, f.witness.value
                    ))
                } else {
                    fail("witness does not validate")
                }
            }
            PowerOutcome::NotFound(_) => fail(format!("no abelian 4th power within N = {n}")),
        }
    }

    /// The words of the bound suite, each with its analysed prefix length.
    fn bound_words(&self) -> Result<Vec<(String, WordSource)>> {
        let mut words = vec![
            ("(01)^w".to_string(), WordSource::periodic_scalars(&[0, 1])?),
            (
                "(0011)^w".to_string(),
                WordSource::periodic_scalars(&[0, 0, 1, 1])?,
            ),
            ("tau".to_string(), self.tau()?),
            ("sigma".to_string(), self.sigma()?),
            ("champernowne".to_string(), WordSource::champernowne()),
        ];
        for (i, w) in pseudo_random_words(20, 2000, &[-2, -1, 0, 1, 2, 3], 6)
            .into_iter()
            .enumerate()
        {
            words.push((format!("random #{i}"), WordSource::explicit_scalars(&w)?));
        }
        Ok(words)
    }

    fn bound_suite(&self) -> Result<Verdict> {
        let n = self.scale(2000);
        let mut failures = Vec::new();
        let mut notes = 0;
        for (name, src) in self.bound_words()? {
            let word = src.prefix(n)?;
            for mu in [
                MorphismMu::additive(src.alphabet()),
                MorphismMu::parikh(src.alphabet()),
            ] {
                let p = crate::complexity::profile_word(&word, &mu, 128)?;
                let report = observed_bounds(&p, &word, &mu)?;
                let mut verdicts = check_additive_bounds(&report);
                if mu.kind() == crate::measures::MuKind::Parikh {
                    let abelian = check_abelian_bounds(&report)?;
                    verdicts.checks.extend(abelian.checks);
                    verdicts.notes.extend(abelian.notes);
                }
                notes += verdicts.notes.len();
                for c in verdicts.failures() {
                    failures.push(format!("{name} {:?} {}: {}", mu.kind(), c.name, c.detail));
                }
            }
        }
        if failures.is_empty() {
            pass(format!("25 words, N = {n}, n_max = 128, {notes} notes"))
        } else {
            fail(failures.join("; "))
        }
    }

    fn vdw_on_bounded(&self) -> Result<Verdict> {
        let n = 1000;
        let mut bounded = Vec::new();
        for (name, src) in self.bound_words()? {
            let word = src.prefix(self.scale(2000))?;
            let mu = MorphismMu::additive(src.alphabet());
            let p = crate::complexity::profile_word(&word, &mu, 128)?;
            let report = observed_bounds(&p, &word, &mu)?;
            if report.trend == Trend::Saturated {
                bounded.push((name, src));
            }
        }
        if bounded.is_empty() {
            return fail("no word classified as bounded");
        }
        let limits = SearchLimits::with_prefix(n);
        for (name, src) in &bounded {
            let mu = MorphismMu::additive(src.alphabet());
            let word = src.prefix(n)?;
            for k in 2..=5 {
                let vdw = find_power_vdw(src, &mu, k, &limits)?;
                let scan = find_power_scan(src, &mu, k, &limits)?;
                let Some(w) = vdw.witness() else {
                    return fail(format!("{name}, k = {k}: no progression within N = {n}"));
                };
                if !validate_witness(&word, &mu, w)? {
                    return fail(format!("{name}, k = {k}: witness does not validate"));
                }
                if !scan.is_found() {
                    return fail(format!("{name}, k = {k}: scan disagrees"));
                }
            }
        }
        let names: Vec<_> = bounded.iter().map(|(n, _)| n.as_str()).collect();
        pass(format!("bounded: {}; k = 2..5, N = {n}", names.join(", ")))
    }

    fn simultaneous(&self) -> Result<Verdict> {
        let pats: [&[i64]; 2] = [&[0, 1], &[0, 0, 1]];
        let sources = pats
            .iter()
            .map(|p| WordSource::periodic_scalars(p))
            .collect::<Result<Vec<_>>>()?;
        let n = self.scale(10_000);
        let mut found = Vec::new();
        for k in 2..=3 {
            let o = find_simultaneous(&sources, k, &SearchLimits::with_prefix(n))?;
            let Some(w) = o.witness() else {
                return fail(format!("k = {k}: none within N = {n}"));
            };
            for (j, p) in pats.iter().enumerate() {
                let letter = |i: usize| p[(i - 1) % p.len()];
                let sums: Vec<i64> = (1..=k)
                    .map(|i| (w.t + (i - 1) * w.s + 1..=w.t + i * w.s).map(letter).sum())
                    .collect();
                if sums.iter().any(|&x| x != w.value[j]) {
                    return fail(format!("k = {k}, word {j}: block sums {sums:?}"));
                }
            }
            found.push(format!("k = {k}: t = {}, s = {}", w.t, w.s));
        }
        pass(found.join("; "))
    }

    fn specializations(&self) -> Result<Verdict> {
        let n = 1000;
        let limits = SearchLimits::with_prefix(n);
        let mut found = 0;
        let mut total = 0;
        for (name, src) in self.bound_words()? {
            let word = src.prefix(n)?;
            let dedicated = [
                MorphismMu::additive(src.alphabet()),
                MorphismMu::parikh(src.alphabet()),
            ];
            for mu in &dedicated {
                let as_custom = MorphismMu::custom(mu.images().clone())?;
                for k in 2..=4 {
                    total += 1;
                    let general = find_power_mod_mu(&src, &as_custom, k, &limits)?;
                    let special = find_power_vdw(&src, mu, k, &limits)?;
                    if general.witness() != special.witness() {
                        return fail(format!(
                            "{name} {:?} k = {k}: {general:?} vs {special:?}",
                            mu.kind()
                        ));
                    }
                    if let Some(w) = general.witness() {
                        found += 1;
                        if !validate_witness(&word, mu, w)?
                            || !find_power_scan(&src, mu, k, &limits)?.is_found()
                        {
                            return fail(format!(
                                "{name} {:?} k = {k}: witness not confirmed",
                                mu.kind()
                            ));
                        }
                    }
                }
            }
        }
        pass(format!(
            "{total} cases agree, {found} with witnesses, N = {n}"
        ))
    }

    fn lift_correspondence(&self) -> Result<Verdict> {
        let mut checked = 0u64;
        let mut powers = 0u64;
        for w in pseudo_random_words(100, 200, &[1, 2, 3], 10) {
            let src = WordSource::explicit_scalars(&w)?;
            let lifted = WordSource::lift(src.clone())?;
            let lifted_word = lifted.prefix(w.len())?;
            let additive = MorphismMu::additive(lifted.alphabet());
            let table = CumulativeTable::accumulate(&additive, &lifted_word)?;
            let base_word = src.prefix(w.len())?;
            let parikh = MorphismMu::parikh(src.alphabet());

            // Letter counts of the original word, kept independently of the
            // lifted table.
            let mut counts = vec![[0i64; 3]; w.len() + 1];
            for (i, &x) in w.iter().enumerate() {
                counts[i + 1] = counts[i];
                counts[i + 1][(x - 1) as usize] += 1;
            }
            let count = |t: usize, s: usize| -> [i64; 3] {
                let (a, b) = (counts[t], counts[t + s]);
                [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
            };
            let sum = |t: usize, s: usize| -> Vec<i64> {
                table
                    .prefix(t + s)
                    .iter()
                    .zip(table.prefix(t))
                    .map(|(b, a)| b - a)
                    .collect()
            };

            for k in 2..=3 {
                let mut first_witness = None;
                for s in 1..=w.len() / k {
                    for t in 0..=w.len() - k * s {
                        checked += 1;
                        let abelian = (1..k).all(|i| count(t + i * s, s) == count(t, s));
                        let additive_power = (1..k).all(|i| sum(t + i * s, s) == sum(t, s));
                        if abelian != additive_power {
                            return fail(format!("t = {t}, s = {s}, k = {k}: abelian {abelian}, lifted {additive_power}"));
                        }
                        if abelian {
                            powers += 1;
                            first_witness.get_or_insert((t, s));
                        }
                    }
                }
                if let Some((t, s)) = first_witness {
                    let a = PowerWitness {
                        t,
                        s,
                        k,
                        value: count(t, s).to_vec(),
                    };
                    let b = PowerWitness {
                        t,
                        s,
                        k,
                        value: sum(t, s),
                    };
                    if !validate_witness(&base_word, &parikh, &a)?
                        || !validate_witness(&lifted_word, &additive, &b)?
                    {
                        return fail(format!(
                            "witness t = {t}, s = {s}, k = {k} does not validate"
                        ));
                    }
                }
            }
        }
        pass(format!(
            "{checked} (t, s, k) triples, {powers} powers, all matching"
        ))
    }

    fn binary_squares(&self) -> Result<Verdict> {
        let problem = AvoidanceProblem::new(&[0, 1], 2, PatternMode::Additive)?;
        let first = backtrack(&problem)?;
        let second = backtrack(&problem)?;
        if !first.exhausted || first.length_capped {
            return fail("search did not exhaust");
        }
        if contains_pattern(&first.longest, 2, PatternMode::Additive) {
            return fail(format!("{:?} contains an additive square", first.longest));
        }
        if first != second {
            return fail("two runs differ");
        }
        pass(format!(
            "longest {:?} (length {}), {} nodes",
            first.longest, first.length, first.nodes
        ))
    }
}
