//! Additive and abelian complexity profiles of prefixes, the observed
//! constants `M1`, `M2`, `M3`, and checkers for the inequalities linking
//! them.
//!
//! Everything here is exact for the analysed prefix and only a lower bound
//! for the infinite word.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{add_checked, sub_checked, CumulativeTable, Factor, MorphismMu, MuKind};
use crate::words::{FiniteWord, WordSource};

/// One distinct factor value and the 1-based start of its first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueEntry {
    pub value: Vec<i64>,
    pub first_start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    /// Distinct values of length-`n` factors, in lexicographic order.
    pub values: Vec<ValueEntry>,
}

impl ProfileRow {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self, j: usize) -> &ValueEntry {
        self.values
            .iter()
            .min_by_key(|e| e.value[j])
            .expect("rows are nonempty")
    }

    pub fn max(&self, j: usize) -> &ValueEntry {
        self.values
            .iter()
            .max_by_key(|e| e.value[j])
            .expect("rows are nonempty")
    }

    pub fn range(&self, j: usize) -> i64 {
        self.max(j).value[j] - self.min(j).value[j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    /// Length `N` of the prefix the profile is exact for.
    pub prefix_len: usize,
    pub mode: MuKind,
    pub dim: usize,
    pub rows: Vec<ProfileRow>,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.rows.iter().map(ProfileRow::size).collect()
    }

    pub fn row(&self, n: usize) -> &ProfileRow {
        &self.rows[n - 1]
    }
}

/// Profile of `source`'s prefix of length `n` for factor lengths `1..=n_max`.
pub fn profile(
    source: &WordSource,
    mu: &MorphismMu,
    n: usize,
    n_max: usize,
) -> Result<ComplexityProfile> {
    if n_max > n {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} exceeds prefix length {n}"
        )));
    }
    profile_word(&source.prefix(n)?, mu, n_max)
}

pub fn profile_word(word: &FiniteWord, mu: &MorphismMu, n_max: usize) -> Result<ComplexityProfile> {
    let big_n = word.len();
    if n_max == 0 || n_max > big_n {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} must lie in 1..={big_n}"
        )));
    }
    let images = mu.symbol_images(word)?;
    let symbols = word.symbols();
    let t = mu.target_dim();

    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut cur = vec![0i64; t];
            for &s in &symbols[..n] {
                add_checked(&mut cur, images.get(s))?;
            }
            let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
            seen.insert(cur.clone(), 1);
            let mut last = cur.clone();
            for i in 0..big_n - n {
                add_checked(&mut cur, images.get(symbols[i + n]))?;
                sub_checked(&mut cur, images.get(symbols[i]))?;
                if cur != last {
                    if !seen.contains_key(&cur) {
                        seen.insert(cur.clone(), i + 2);
                    }
                    last.copy_from_slice(&cur);
                }
            }
            let mut values: Vec<ValueEntry> = seen
                .into_iter()
                .map(|(value, first_start)| ValueEntry { value, first_start })
                .collect();
            values.sort_by(|a, b| a.value.cmp(&b.value));
            Ok(ProfileRow { n, values })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ComplexityProfile {
        prefix_len: big_n,
        mode: mu.kind(),
        dim: t,
        rows,
    })
}

/// Two equal-length factors and the coordinate on which they differ most.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub first: Factor,
    pub second: Factor,
    pub coordinate: usize,
    pub gap: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStats {
    pub n: usize,
    pub size: usize,
    pub min: Vec<i64>,
    pub max: Vec<i64>,
    pub range: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    /// The largest value-set size is already reached in the first quarter
    /// of the analysed lengths.
    Saturated,
    /// The largest size first appears later.
    Growing,
}

/// Observed constants of a prefix. Gaps are coordinate-wise (`M1[j]` is the
/// largest `|mu(B1)_j - mu(B2)_j|` over adjacent equal-length pairs `B1 B2`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mode: MuKind,
    pub prefix_len: usize,
    pub n_max: usize,
    pub dim: usize,
    /// Adjacent pairs scanned for every length `n <= m1_scan_len`.
    pub m1_scan_len: usize,
    /// True when `m1_scan_len` covers every `n` with `2n <= N`.
    pub m1_complete: bool,
    pub m1: Vec<i64>,
    pub m1_witness: Option<PairWitness>,
    /// `M1` restricted to lengths `n <= n_max`, comparable with `m2`.
    pub m1_up_to_n_max: Vec<i64>,
    pub m1_euclidean: f64,
    pub m2: Vec<i64>,
    pub m2_witness: Option<PairWitness>,
    pub m2_euclidean: f64,
    pub m3: usize,
    pub m3_length: usize,
    /// Per-coordinate extremes over the images of the letters that occur.
    pub letter_min: Vec<i64>,
    pub letter_max: Vec<i64>,
    pub letter_abs_max: Vec<i64>,
    /// Largest change of a coordinate between windows shifted by one.
    pub max_shift: Vec<i64>,
    pub lengths: Vec<LengthStats>,
    pub trend: Trend,
}

impl BoundReport {
    pub fn m1_inf(&self) -> i64 {
        self.m1.iter().copied().max().unwrap_or(0)
    }

    pub fn m2_inf(&self) -> i64 {
        self.m2.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BoundsOptions {
    /// Longest adjacent-pair length scanned for `M1`; `None` scans all
    /// `n` with `2n <= N`, which inequality (a) needs to be sound.
    pub m1_max_len: Option<usize>,
}

pub fn observed_bounds(
    profile: &ComplexityProfile,
    word: &FiniteWord,
    mu: &MorphismMu,
) -> Result<BoundReport> {
    observed_bounds_with(profile, word, mu, BoundsOptions::default())
}

pub fn observed_bounds_with(
    profile: &ComplexityProfile,
    word: &FiniteWord,
    mu: &MorphismMu,
    options: BoundsOptions,
) -> Result<BoundReport> {
    let big_n = word.len();
    if profile.prefix_len != big_n || profile.dim != mu.target_dim() {
        return Err(Error::InvalidArgument(
            "profile was not computed from this word and morphism".into(),
        ));
    }
    let t = profile.dim;
    let n_max = profile.n_max();
    let images = mu.symbol_images(word)?;
    let table = CumulativeTable::from_images(&images, word.symbols())?;

    let lengths: Vec<LengthStats> = profile
        .rows
        .iter()
        .map(|row| {
            let min: Vec<i64> = (0..t).map(|j| row.min(j).value[j]).collect();
            let max: Vec<i64> = (0..t).map(|j| row.max(j).value[j]).collect();
            let range = min.iter().zip(&max).map(|(a, b)| b - a).collect();
            LengthStats {
                n: row.n,
                size: row.size(),
                min,
                max,
                range,
            }
        })
        .collect();

    let mut m2 = vec![0i64; t];
    let mut m2_witness: Option<PairWitness> = None;
    for (row, stats) in profile.rows.iter().zip(&lengths) {
        for (j, m) in m2.iter_mut().enumerate() {
            *m = (*m).max(stats.range[j]);
            if m2_witness.as_ref().is_none_or(|w| stats.range[j] > w.gap) {
                m2_witness = Some(PairWitness {
                    first: Factor::new(row.min(j).first_start, row.n),
                    second: Factor::new(row.max(j).first_start, row.n),
                    coordinate: j,
                    gap: stats.range[j],
                });
            }
        }
    }
    let m2_euclidean = profile
        .rows
        .par_iter()
        .map(euclidean_diameter_sq)
        .max()
        .map_or(0.0, |d| (d as f64).sqrt());

    let (m3_length, m3) = lengths
        .iter()
        .map(|s| (s.n, s.size))
        .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let quarter = (n_max / 4).max(1);
    let early = lengths[..quarter].iter().map(|s| s.size).max().unwrap_or(0);
    let trend = if early == m3 {
        Trend::Saturated
    } else {
        Trend::Growing
    };

    let m1_scan_len = options.m1_max_len.map_or(big_n / 2, |l| l.min(big_n / 2));
    let m1_scan = scan_adjacent(&table, m1_scan_len, n_max);

    let extremes = images.extremes();
    let letter_min: Vec<i64> = extremes.iter().map(|e| e.0).collect();
    let letter_max: Vec<i64> = extremes.iter().map(|e| e.1).collect();
    let letter_abs_max = extremes.iter().map(|e| e.0.abs().max(e.1.abs())).collect();

    let symbols = word.symbols();
    let max_shift = (1..=n_max.min(big_n - 1))
        .into_par_iter()
        .map(|n| {
            let mut best = vec![0i64; t];
            for i in 0..big_n - n {
                let (old, new) = (images.get(symbols[i]), images.get(symbols[i + n]));
                for j in 0..t {
                    best[j] = best[j].max((new[j] - old[j]).abs());
                }
            }
            best
        })
        .reduce(
            || vec![0; t],
            |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
        );

    Ok(BoundReport {
        mode: profile.mode,
        prefix_len: big_n,
        n_max,
        dim: t,
        m1_scan_len,
        m1_complete: m1_scan_len == big_n / 2,
        m1: m1_scan.all,
        m1_witness: m1_scan.witness,
        m1_up_to_n_max: m1_scan.short,
        m1_euclidean: (m1_scan.euclid_sq as f64).sqrt(),
        m2,
        m2_witness,
        m2_euclidean,
        m3,
        m3_length,
        letter_min,
        letter_max,
        letter_abs_max,
        max_shift,
        lengths,
        trend,
    })
}

/// Exact squared diameter. Points are visited by decreasing distance from the
/// centroid `c`; since `|a - b| <= |a - c| + |b - c|`, a pair is skipped once
/// that bound cannot beat the best distance found.
fn euclidean_diameter_sq(row: &ProfileRow) -> i128 {
    let points = &row.values;
    if points.len() < 2 {
        return 0;
    }
    let dim = points[0].value.len();
    let mut centroid = vec![0.0f64; dim];
    for p in points {
        for (c, &x) in centroid.iter_mut().zip(&p.value) {
            *c += x as f64;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= points.len() as f64);
    let mut order: Vec<(f64, &Vec<i64>)> = points
        .iter()
        .map(|p| {
            let r = p
                .value
                .iter()
                .zip(&centroid)
                .map(|(&x, c)| (x as f64 - c).powi(2))
                .sum::<f64>();
            (r.sqrt(), &p.value)
        })
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let dist_sq = |a: &[i64], b: &[i64]| -> i128 {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let d = (*x - *y) as i128;
                d * d
            })
            .sum()
    };
    // Slack keeps the pruning conservative against rounding.
    let slack = 1e-6;
    let mut best = 0i128;
    for (i, (ri, a)) in order.iter().enumerate() {
        if 2.0 * ri + slack < (best as f64).sqrt() {
            break;
        }
        for (rj, b) in &order[i + 1..] {
            if ri + rj + slack < (best as f64).sqrt() {
                break;
            }
            best = best.max(dist_sq(a, b));
        }
    }
    best
}

struct AdjacentScan {
    all: Vec<i64>,
    short: Vec<i64>,
    witness: Option<PairWitness>,
    euclid_sq: i128,
}

/// Largest coordinate-wise gap `|mu(x_{i+1..i+n}) - mu(x_{i+n+1..i+2n})|`
/// over all `n <= max_len`.
fn scan_adjacent(table: &CumulativeTable, max_len: usize, short_len: usize) -> AdjacentScan {
    let t = table.dim();
    let big_n = table.len();
    let per_len: Vec<(usize, Vec<i64>, Vec<usize>, i128)> = (1..=max_len)
        .into_par_iter()
        .map(|n| {
            let mut best = vec![0i64; t];
            let mut at = vec![0usize; t];
            let mut euclid = 0i128;
            for i in 0..=big_n - 2 * n {
                let (p0, p1, p2) = (
                    table.prefix(i),
                    table.prefix(i + n),
                    table.prefix(i + 2 * n),
                );
                let mut sq = 0i128;
                for j in 0..t {
                    let d = ((p1[j] - p0[j]) - (p2[j] - p1[j])).abs();
                    if d > best[j] {
                        best[j] = d;
                        at[j] = i;
                    }
                    sq += (d as i128) * (d as i128);
                }
                euclid = euclid.max(sq);
            }
            (n, best, at, euclid)
        })
        .collect();

    let mut all = vec![0i64; t];
    let mut short = vec![0i64; t];
    let mut witness: Option<PairWitness> = None;
    let mut euclid_sq = 0i128;
    for (n, best, at, e) in per_len {
        euclid_sq = euclid_sq.max(e);
        for j in 0..t {
            all[j] = all[j].max(best[j]);
            if n <= short_len {
                short[j] = short[j].max(best[j]);
            }
            if witness.as_ref().is_none_or(|w| best[j] > w.gap) {
                witness = Some(PairWitness {
                    first: Factor::new(at[j] + 1, n),
                    second: Factor::new(at[j] + n + 1, n),
                    coordinate: j,
                    gap: best[j],
                });
            }
        }
    }
    AdjacentScan {
        all,
        short,
        witness,
        euclid_sq,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub coordinate: Option<usize>,
    pub observed: i128,
    pub bound: i128,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Verdicts {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    fn push(&mut self, name: &str, detail: String, counterexample: Option<Counterexample>) {
        self.checks.push(Check {
            name: name.into(),
            status: if counterexample.is_some() {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            detail,
            counterexample,
        });
    }
}

fn box_volume(sides: impl Iterator<Item = i64>) -> i128 {
    sides.fold(1i128, |acc, s| acc.saturating_mul(s as i128 + 1))
}

/// Inequalities for sums (and any additive morphism):
///
/// * (a) `M2[j] <= 2 M1[j] + 2 max|a_j|`,
/// * (b) `size(n) <= prod_j (range_j(n) + 1) <= prod_j (M2[j] + 1)`,
/// * (c) `range_j(n) <= (size(n) - 1)(max S_j - min S_j)`,
///
/// plus the one-step shift bound `max S_j - min S_j`.
pub fn check_additive_bounds(report: &BoundReport) -> Verdicts {
    let mut v = Verdicts::default();
    let t = report.dim;
    let spread: Vec<i64> = (0..t)
        .map(|j| report.letter_max[j] - report.letter_min[j])
        .collect();

    if report.m1_complete {
        let mut bad = None;
        for j in 0..t {
            let sound = 2 * report.m1[j] as i128 + 2 * report.letter_abs_max[j] as i128;
            let literal = 2 * report.m1[j] as i128 + 2 * report.letter_max[j] as i128;
            let m2 = report.m2[j] as i128;
            if m2 > sound && bad.is_none() {
                let w = report.m2_witness.clone();
                bad = Some(Counterexample {
                    n: w.as_ref().map_or(0, |w| w.first.len),
                    coordinate: Some(j),
                    observed: m2,
                    bound: sound,
                    factors: w.map(|w| vec![w.first, w.second]).unwrap_or_default(),
                });
            }
            if m2 > literal && m2 <= sound {
                v.notes.push(format!(
                    "coordinate {j}: M2 = {m2} exceeds 2*M1 + 2*max S = {literal} but not 2*M1 + 2*max|a| = {sound}"
                ));
            }
        }
        v.push(
            "additive_m2_from_m1",
            format!(
                "M1 = {:?}, M2 = {:?}, max|a| = {:?}",
                report.m1, report.m2, report.letter_abs_max
            ),
            bad,
        );
    } else {
        v.checks.push(Check {
            name: "additive_m2_from_m1".into(),
            status: CheckStatus::Skipped,
            detail: format!(
                "M1 scanned only up to length {}; all lengths up to {} are needed",
                report.m1_scan_len,
                report.prefix_len / 2
            ),
            counterexample: None,
        });
    }

    let m2_box = box_volume(report.m2.iter().copied());
    let mut bad = None;
    for s in &report.lengths {
        let local = box_volume(s.range.iter().copied());
        if (s.size as i128) > local || local > m2_box {
            bad = Some(Counterexample {
                n: s.n,
                coordinate: None,
                observed: s.size as i128,
                bound: local.min(m2_box),
                factors: vec![],
            });
            break;
        }
    }
    if t == 1 && report.m3 as i128 > report.m2[0] as i128 + 1 && bad.is_none() {
        bad = Some(Counterexample {
            n: report.m3_length,
            coordinate: Some(0),
            observed: report.m3 as i128,
            bound: report.m2[0] as i128 + 1,
            factors: vec![],
        });
    }
    v.push(
        "additive_size_from_m2",
        format!("M3 = {}, prod(M2 + 1) = {m2_box}", report.m3),
        bad,
    );

    let mut bad = None;
    'outer: for s in &report.lengths {
        for (j, &spread_j) in spread.iter().enumerate() {
            let bound = (s.size as i128 - 1) * spread_j as i128;
            if s.range[j] as i128 > bound {
                bad = Some(Counterexample {
                    n: s.n,
                    coordinate: Some(j),
                    observed: s.range[j] as i128,
                    bound,
                    factors: vec![],
                });
                break 'outer;
            }
        }
    }
    v.push(
        "additive_range_from_size",
        format!("max S - min S = {spread:?}"),
        bad,
    );

    let bad = (0..t)
        .find(|&j| report.max_shift[j] > spread[j])
        .map(|j| Counterexample {
            n: 0,
            coordinate: Some(j),
            observed: report.max_shift[j] as i128,
            bound: spread[j] as i128,
            factors: vec![],
        });
    v.push(
        "additive_shift_lemma",
        format!("max shift = {:?}", report.max_shift),
        bad,
    );
    v
}

/// Inequalities for Parikh vectors over a `t`-letter alphabet:
///
/// * `rho(n) <= prod_j (range_j(n) + 1) <= (M2 + 1)^t`,
/// * `range_j(n) <= rho(n) - 1 <= M3 - 1`,
/// * consecutive windows differ by at most one in every coordinate.
pub fn check_abelian_bounds(report: &BoundReport) -> Result<Verdicts> {
    if report.mode != MuKind::Parikh {
        return Err(Error::InvalidArgument(format!(
            "abelian bounds need a Parikh profile, got {:?}",
            report.mode
        )));
    }
    let mut v = Verdicts::default();
    let t = report.dim;
    let m2 = report.m2_inf() as i128;
    let sound = (m2 + 1).saturating_pow(t as u32);
    let literal = (2 * m2 - 1).saturating_pow(t as u32);

    let mut bad = None;
    for s in &report.lengths {
        let local = box_volume(s.range.iter().copied());
        if (s.size as i128) > local || local > sound {
            bad = Some(Counterexample {
                n: s.n,
                coordinate: None,
                observed: s.size as i128,
                bound: local.min(sound),
                factors: vec![],
            });
            break;
        }
    }
    if (report.m3 as i128) > literal {
        v.notes.push(format!(
            "M3 = {} exceeds (2*M2 - 1)^t = {literal}; the bound (M2 + 1)^t = {sound} holds",
            report.m3
        ));
    }
    v.push(
        "abelian_size_from_m2",
        format!("M2 = {m2}, t = {t}, (M2 + 1)^t = {sound}"),
        bad,
    );

    let mut bad = None;
    'outer: for s in &report.lengths {
        for j in 0..t {
            if s.range[j] > s.size as i64 - 1 || s.range[j] > report.m3 as i64 - 1 {
                bad = Some(Counterexample {
                    n: s.n,
                    coordinate: Some(j),
                    observed: s.range[j] as i128,
                    bound: s.size as i128 - 1,
                    factors: vec![],
                });
                break 'outer;
            }
        }
    }
    v.push(
        "abelian_gap_from_m3",
        format!("M3 - 1 = {}", report.m3 as i64 - 1),
        bad,
    );

    let bad = (0..t)
        .find(|&j| report.max_shift[j] > 1)
        .map(|j| Counterexample {
            n: 0,
            coordinate: Some(j),
            observed: report.max_shift[j] as i128,
            bound: 1,
            factors: vec![],
        });
    v.push(
        "abelian_shift_lemma",
        format!("max shift = {:?}", report.max_shift),
        bad,
    );

    if report.trend == Trend::Growing {
        v.notes.push(format!(
            "abelian complexity still growing at n = {}: M3 = {} reached at n = {}",
            report.n_max, report.m3, report.m3_length
        ));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    fn additive(
        src: &WordSource,
        n: usize,
        n_max: usize,
    ) -> (FiniteWord, MorphismMu, ComplexityProfile) {
        let w = src.prefix(n).unwrap();
        let mu = MorphismMu::additive(w.alphabet());
        let p = profile_word(&w, &mu, n_max).unwrap();
        (w, mu, p)
    }

    fn parikh(
        src: &WordSource,
        n: usize,
        n_max: usize,
    ) -> (FiniteWord, MorphismMu, ComplexityProfile) {
        let w = src.prefix(n).unwrap();
        let mu = MorphismMu::parikh(w.alphabet());
        let p = profile_word(&w, &mu, n_max).unwrap();
        (w, mu, p)
    }

    fn naive_values(w: &FiniteWord, mu: &MorphismMu, n: usize) -> Vec<Vec<i64>> {
        let letters = w.to_letters();
        let mut vals: Vec<Vec<i64>> = letters
            .windows(n)
            .map(|b| mu.value_of(b).unwrap())
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }

    #[test]
    fn periodic_profile() {
        let (_, _, p) = additive(&WordSource::periodic_scalars(&[0, 1]).unwrap(), 20, 4);
        let vals: Vec<Vec<i64>> = p.row(1).values.iter().map(|e| e.value.clone()).collect();
        assert_eq!(vals, [[0], [1]]);
        assert_eq!(p.sizes(), [2, 1, 2, 1]);
        assert_eq!(p.row(2).values[0].value, [1]);
    }

    #[test]
    fn constant_profile() {
        let (_, _, p) = additive(&WordSource::periodic_scalars(&[0]).unwrap(), 50, 10);
        assert!(p.sizes().iter().all(|&s| s == 1));
        assert!(p.rows.iter().all(|r| r.values[0].value == [0]));
    }

    #[test]
    fn first_starts_point_at_windows_with_that_value() {
        let (w, mu, p) = additive(&WordSource::dekking_coded(), 300, 20);
        let table = CumulativeTable::accumulate(&mu, &w).unwrap();
        for row in &p.rows {
            for e in &row.values {
                assert_eq!(
                    table
                        .factor_value(Factor::new(e.first_start, row.n))
                        .unwrap(),
                    e.value
                );
            }
        }
    }

    #[test]
    fn incremental_matches_naive() {
        let sources = [
            WordSource::dekking_coded(),
            WordSource::champernowne(),
            WordSource::explicit_scalars(&[
                3, -2, 0, 0, 1, 3, 3, -2, 1, 0, 2, 2, -1, 3, 0, 1, 1, -2, 3, 0,
            ])
            .unwrap(),
        ];
        for src in &sources {
            let n = src.available().unwrap_or(1000);
            let w = src.prefix(n).unwrap();
            for mu in [
                MorphismMu::additive(w.alphabet()),
                MorphismMu::parikh(w.alphabet()),
            ] {
                let n_max = n.min(40);
                let p = profile_word(&w, &mu, n_max).unwrap();
                for row in &p.rows {
                    let vals: Vec<Vec<i64>> = row.values.iter().map(|e| e.value.clone()).collect();
                    assert_eq!(vals, naive_values(&w, &mu, row.n), "n = {}", row.n);
                }
            }
        }
    }

    #[test]
    fn tau_has_at_most_four_sums() {
        let (_, _, p) = additive(&WordSource::dekking_coded(), 20_000, 128);
        assert!(p.sizes().iter().all(|&s| s <= 4));
    }

    #[test]
    fn champernowne_abelian_sizes() {
        let (_, _, p) = parikh(&WordSource::champernowne(), 1 << 14, 8);
        assert_eq!(p.sizes(), (2..=9).collect::<Vec<_>>());
    }

    #[test]
    fn profile_rejects_long_n_max() {
        let src = WordSource::periodic_scalars(&[0, 1]).unwrap();
        let mu = MorphismMu::additive(src.alphabet());
        assert!(matches!(
            profile(&src, &mu, 5, 6),
            Err(Error::InvalidArgument(_))
        ));
    }

    /// All-pairs brute force over factors of length <= n_max (M2) and
    /// adjacent pairs of every length (M1).
    fn brute_force_m1_m2(values: &[i64], n_max: usize) -> (i64, i64) {
        let n = values.len();
        let sum = |a: usize, l: usize| values[a..a + l].iter().sum::<i64>();
        let mut m1 = 0;
        for l in 1..=n / 2 {
            for a in 0..=n - 2 * l {
                m1 = m1.max((sum(a, l) - sum(a + l, l)).abs());
            }
        }
        let mut m2 = 0;
        for l in 1..=n_max {
            for a in 0..=n - l {
                for b in 0..=n - l {
                    m2 = m2.max((sum(a, l) - sum(b, l)).abs());
                }
            }
        }
        (m1, m2)
    }

    #[test]
    fn periodic_bounds_match_brute_force() {
        let src = WordSource::periodic_scalars(&[0, 1]).unwrap();
        let (w, mu, p) = additive(&src, 40, 8);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        let (m1, m2) = brute_force_m1_m2(&w.to_scalars().unwrap(), 8);
        assert_eq!((r.m1[0], r.m2[0], r.m3), (m1, m2, 2));
        assert_eq!((m1, m2), (1, 1));
        assert_eq!(r.lengths[1].range, [0]);
        assert!(check_additive_bounds(&r).passed());
    }

    #[test]
    fn random_bounds_match_brute_force() {
        let values = [
            3, -2, 0, 0, 1, 3, 3, -2, 1, 0, 2, 2, -1, 3, 0, 1, 1, -2, 3, 0, 2, -2, -2, 1, 3,
        ];
        let src = WordSource::explicit_scalars(&values).unwrap();
        let (w, mu, p) = additive(&src, values.len(), 6);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        let (m1, m2) = brute_force_m1_m2(&values, 6);
        assert_eq!((r.m1[0], r.m2[0]), (m1, m2));
        let v = check_additive_bounds(&r);
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn constant_word_bounds() {
        let (w, mu, p) = additive(&WordSource::periodic_scalars(&[0]).unwrap(), 30, 10);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert_eq!((r.m1[0], r.m2[0], r.m3), (0, 0, 1));
        assert!(check_additive_bounds(&r).passed());
        let (w, mu, p) = parikh(&WordSource::periodic_scalars(&[0]).unwrap(), 30, 10);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert!(r.lengths.iter().all(|s| s.size == 1 && s.range == [0]));
        assert!(check_abelian_bounds(&r).unwrap().passed());
    }

    #[test]
    fn tau_report() {
        let (w, mu, p) = additive(&WordSource::dekking_coded(), 4000, 64);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert!(r.m3 <= 4);
        assert_eq!(r.trend, Trend::Saturated);
        assert!(r.m1_up_to_n_max.iter().zip(&r.m2).all(|(a, b)| a <= b));
        assert!(check_additive_bounds(&r).passed());
    }

    #[test]
    fn periodic_abelian() {
        let (w, mu, p) = parikh(&WordSource::periodic_scalars(&[0, 1]).unwrap(), 40, 10);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert!(r.lengths.iter().all(|s| s.size <= 2));
        assert_eq!(r.m3, 2);
        assert!(r.lengths.iter().all(|s| s.range.iter().all(|&g| g <= 1)));
        let v = check_abelian_bounds(&r).unwrap();
        assert!(v.passed(), "{v:?}");
        // (2*M2 - 1)^t = 1 < 2 = M3 here.
        assert!(!v.notes.is_empty());
    }

    #[test]
    fn champernowne_abelian_growth() {
        let (w, mu, p) = parikh(&WordSource::champernowne(), 1 << 13, 8);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        for s in &r.lengths {
            assert_eq!(s.range, [s.n as i64, s.n as i64]);
        }
        assert_eq!(r.trend, Trend::Growing);
        let v = check_abelian_bounds(&r).unwrap();
        assert!(v.passed());
        assert!(v.notes.iter().any(|n| n.contains("growing")));
    }

    #[test]
    fn abelian_check_needs_parikh() {
        let (w, mu, p) = additive(&WordSource::periodic_scalars(&[0, 1]).unwrap(), 10, 3);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert!(check_abelian_bounds(&r).is_err());
    }

    #[test]
    fn truncated_m1_skips_inequality_a() {
        let (w, mu, p) = additive(&WordSource::dekking_coded(), 500, 10);
        let r = observed_bounds_with(
            &p,
            &w,
            &mu,
            BoundsOptions {
                m1_max_len: Some(10),
            },
        )
        .unwrap();
        assert!(!r.m1_complete);
        let v = check_additive_bounds(&r);
        assert_eq!(v.checks[0].status, CheckStatus::Skipped);
        assert!(v.passed());
    }

    #[test]
    fn slow_drift_needs_full_m1_scan() {
        // Density of 1s climbs slowly from 0 to 1/2: short adjacent windows
        // look alike while distant windows differ a lot.
        let n = 2000i64;
        let sum = |p: i64| p * p / (4 * n);
        let values: Vec<i64> = (1..=n).map(|p| sum(p) - sum(p - 1)).collect();
        let src = WordSource::explicit_scalars(&values).unwrap();
        let (w, mu, p) = additive(&src, values.len(), 50);
        let full = observed_bounds(&p, &w, &mu).unwrap();
        assert!(check_additive_bounds(&full).passed());
        let short = observed_bounds_with(
            &p,
            &w,
            &mu,
            BoundsOptions {
                m1_max_len: Some(50),
            },
        )
        .unwrap();
        assert!(
            short.m2[0] > 2 * short.m1[0] + 2,
            "{:?} {:?}",
            short.m2,
            short.m1
        );
    }

    #[test]
    fn vector_alphabet_bounds() {
        let l = |a: i64, b: i64| Letter::new(vec![a, b]).unwrap();
        let src = WordSource::periodic(vec![l(1, 0), l(0, 2), l(0, 2), l(-1, 1)]).unwrap();
        let (w, mu, p) = additive(&src, 200, 12);
        let r = observed_bounds(&p, &w, &mu).unwrap();
        assert_eq!(r.dim, 2);
        assert_eq!(r.letter_min, [-1, 0]);
        assert_eq!(r.letter_abs_max, [1, 2]);
        assert!(check_additive_bounds(&r).passed());
    }

    #[test]
    fn pruned_diameter_matches_all_pairs() {
        let values =
            crate::acceptance::pseudo_random_words(1, 600, &[-2, -1, 0, 1, 2, 3], 99).remove(0);
        let src = WordSource::explicit_scalars(&values).unwrap();
        let w = src.prefix(600).unwrap();
        for mu in [
            MorphismMu::additive(src.alphabet()),
            MorphismMu::parikh(src.alphabet()),
        ] {
            let p = profile_word(&w, &mu, 40).unwrap();
            for row in &p.rows {
                let mut naive = 0i128;
                for a in &row.values {
                    for b in &row.values {
                        let d: i128 = a
                            .value
                            .iter()
                            .zip(&b.value)
                            .map(|(x, y)| ((x - y) as i128).pow(2))
                            .sum();
                        naive = naive.max(d);
                    }
                }
                assert_eq!(euclidean_diameter_sq(row), naive, "n = {}", row.n);
            }
        }
    }
}
