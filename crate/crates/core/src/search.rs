//! Backtracking search for long words over a finite `S ⊂ Z` that avoid
//! `k` adjacent blocks of equal length and equal sum (or equal Parikh
//! vector in abelian mode).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::CumulativeTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternMode {
    Additive,
    Abelian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceProblem {
    alphabet: Vec<i64>,
    k: usize,
    mode: PatternMode,
    max_len: Option<usize>,
    max_nodes: Option<u64>,
}

impl AvoidanceProblem {
    /// Letters are deduplicated and sorted; extension order is ascending.
    pub fn new(alphabet: &[i64], k: usize, mode: PatternMode) -> Result<Self> {
        let mut alphabet = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k = {k}, expected k >= 2")));
        }
        Ok(AvoidanceProblem {
            alphabet,
            k,
            mode,
            max_len: None,
            max_nodes: None,
        })
    }

    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = Some(max_len);
        self
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = Some(max_nodes);
        self
    }

    pub fn alphabet(&self) -> &[i64] {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> PatternMode {
        self.mode
    }

    fn dim(&self) -> usize {
        match self.mode {
            PatternMode::Additive => 1,
            PatternMode::Abelian => self.alphabet.len(),
        }
    }

    fn image(&self, idx: usize, out: &mut [i64]) {
        match self.mode {
            PatternMode::Additive => out[0] = self.alphabet[idx],
            PatternMode::Abelian => {
                out.fill(0);
                out[idx] = 1;
            }
        }
    }

    fn index_of(&self, letter: i64) -> Result<usize> {
        self.alphabet
            .binary_search(&letter)
            .map_err(|_| Error::InvalidArgument(format!("letter {letter} is not in the alphabet")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub alphabet: Vec<i64>,
    pub k: usize,
    pub mode: PatternMode,
    /// First word of maximal length in DFS order.
    pub longest: Vec<i64>,
    pub length: usize,
    /// The whole tree within the length bound was explored.
    pub exhausted: bool,
    /// Some branch was cut by the length bound, so `longest` is only a lower
    /// bound even when `exhausted` holds.
    pub length_capped: bool,
    /// Pattern-free words visited, the empty word excluded.
    pub nodes: u64,
    /// Where to resume when the node budget ran out.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checkpoint: Option<Checkpoint>,
}

/// Search state: the next candidate word to test (its proper prefixes are
/// pattern-free), plus the running totals so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub path: Vec<i64>,
    pub nodes: u64,
    pub longest: Vec<i64>,
    pub length_capped: bool,
}

impl Checkpoint {
    /// Plain text: the path as space-separated letters on the first line,
    /// followed by `nodes`, `longest` and `capped` lines.
    pub fn to_text(&self) -> String {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "{}", join(&self.path));
        let _ = writeln!(s, "nodes {}", self.nodes);
        let _ = writeln!(s, "longest {}", join(&self.longest));
        let _ = writeln!(s, "capped {}", self.length_capped);
        s
    }

    /// Accepts the output of [`Checkpoint::to_text`], or a bare path line.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("checkpoint: {msg}"));
        let ints = |s: &str| {
            s.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| bad(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()
        };
        let mut lines = text.lines();
        let path = ints(lines.next().ok_or_else(|| bad("empty".into()))?)?;
        if path.is_empty() {
            return Err(bad("empty path".into()));
        }
        let mut cp = Checkpoint {
            path,
            nodes: 0,
            longest: Vec::new(),
            length_capped: false,
        };
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "nodes" => {
                    cp.nodes = rest
                        .trim()
                        .parse()
                        .map_err(|e| bad(format!("nodes: {e}")))?
                }
                "longest" => cp.longest = ints(rest)?,
                "capped" => {
                    cp.length_capped = rest
                        .trim()
                        .parse()
                        .map_err(|e| bad(format!("capped: {e}")))?
                }
                other => return Err(bad(format!("unknown line {other:?}"))),
            }
        }
        Ok(cp)
    }
}

/// True iff the last `k` blocks of some common length `L >= 1` have equal
/// values, for a flat prefix table of dimension `d` and length `n`.
fn power_at_end(prefix: &[i64], d: usize, n: usize, k: usize) -> bool {
    let p = |i: usize| &prefix[i * d..(i + 1) * d];
    (1..=n / k).any(|l| {
        (0..d).all(|j| {
            let first = p(n)[j] - p(n - l)[j];
            (1..k).all(|i| p(n - i * l)[j] - p(n - (i + 1) * l)[j] == first)
        })
    })
}

/// True iff some suffix of length `2L` splits into two blocks of equal value.
pub fn has_additive_square_at_end(table: &CumulativeTable) -> bool {
    has_power_at_end(table, 2)
}

/// True iff some suffix of length `kL` splits into `k` blocks of equal value.
pub fn has_power_at_end(table: &CumulativeTable, k: usize) -> bool {
    let n = table.len();
    let d = table.dim();
    (1..=n / k.max(1)).any(|l| {
        let last = table
            .prefix(n)
            .iter()
            .zip(table.prefix(n - l))
            .map(|(a, b)| a - b);
        let last: Vec<i64> = last.collect();
        (1..k).all(|i| {
            let hi = table.prefix(n - i * l);
            let lo = table.prefix(n - (i + 1) * l);
            (0..d).all(|j| hi[j] - lo[j] == last[j])
        })
    })
}

/// Reference check by direct block sums over every position and length.
pub fn contains_pattern(word: &[i64], k: usize, mode: PatternMode) -> bool {
    find_pattern(word, k, mode).is_some()
}

/// First `(t, s)` such that the `k` blocks after offset `t` of length `s`
/// have equal sums (or equal letter multisets in abelian mode).
pub fn find_pattern(word: &[i64], k: usize, mode: PatternMode) -> Option<(usize, usize)> {
    let n = word.len();
    let mut sums = vec![0i64; n + 1];
    for (i, x) in word.iter().enumerate() {
        sums[i + 1] = sums[i] + x;
    }
    let block_key = |t: usize, s: usize| -> Vec<i64> {
        match mode {
            PatternMode::Additive => vec![sums[t + s] - sums[t]],
            PatternMode::Abelian => {
                let mut v = word[t..t + s].to_vec();
                v.sort_unstable();
                v
            }
        }
    };
    for s in 1..=n / k.max(1) {
        for t in 0..=n - k * s {
            let first = block_key(t, s);
            if (1..k).all(|i| block_key(t + i * s, s) == first) {
                return Some((t, s));
            }
        }
    }
    None
}

/// Depth-first search from the empty word.
pub fn backtrack(problem: &AvoidanceProblem) -> Result<SearchOutcome> {
    run(problem, None)
}

/// Continues a search interrupted by its node budget.
pub fn backtrack_from(
    problem: &AvoidanceProblem,
    checkpoint: &Checkpoint,
) -> Result<SearchOutcome> {
    run(problem, Some(checkpoint))
}

fn run(problem: &AvoidanceProblem, resume: Option<&Checkpoint>) -> Result<SearchOutcome> {
    let size = problem.alphabet.len();
    let d = problem.dim();
    let k = problem.k;
    let max_len = problem.max_len.unwrap_or(usize::MAX);

    let mut path: Vec<usize> = Vec::new();
    let mut prefix: Vec<i64> = vec![0; d];
    let mut next: Vec<usize> = vec![0];
    let mut longest: Vec<usize> = Vec::new();
    let mut nodes: u64 = 0;
    let mut capped = false;
    let mut image = vec![0i64; d];

    let push = |prefix: &mut Vec<i64>, image: &mut [i64], idx: usize| {
        problem.image(idx, image);
        let base = prefix.len() - d;
        for j in 0..d {
            let v = prefix[base + j] + image[j];
            prefix.push(v);
        }
    };

    if let Some(cp) = resume {
        let idx = cp
            .path
            .iter()
            .map(|&x| problem.index_of(x))
            .collect::<Result<Vec<_>>>()?;
        let (&last, ancestors) = idx.split_last().expect("checkpoint path is nonempty");
        if ancestors.len() >= max_len {
            return Err(Error::InvalidArgument(
                "checkpoint exceeds the length bound".into(),
            ));
        }
        for &c in ancestors {
            *next.last_mut().expect("stack is nonempty") = c + 1;
            push(&mut prefix, &mut image, c);
            path.push(c);
            if power_at_end(&prefix, d, path.len(), k) {
                return Err(Error::InvalidArgument(
                    "checkpoint path contains the pattern".into(),
                ));
            }
            next.push(0);
        }
        *next.last_mut().expect("stack is nonempty") = last;
        longest = cp
            .longest
            .iter()
            .map(|&x| problem.index_of(x))
            .collect::<Result<_>>()?;
        nodes = cp.nodes;
        capped = cp.length_capped;
    }

    loop {
        let depth = path.len();
        let c = next[depth];
        if c == size || depth == max_len {
            if depth == max_len && c < size {
                capped = true;
            }
            if depth == 0 {
                break;
            }
            path.pop();
            next.pop();
            prefix.truncate(prefix.len() - d);
            continue;
        }
        if problem.max_nodes.is_some_and(|m| nodes >= m) {
            let mut cp_path = path.clone();
            cp_path.push(c);
            let letters = |v: &[usize]| v.iter().map(|&i| problem.alphabet[i]).collect::<Vec<_>>();
            let longest = letters(&longest);
            return Ok(SearchOutcome {
                alphabet: problem.alphabet.clone(),
                k,
                mode: problem.mode,
                length: longest.len(),
                longest: longest.clone(),
                exhausted: false,
                length_capped: capped,
                nodes,
                checkpoint: Some(Checkpoint {
                    path: letters(&cp_path),
                    nodes,
                    longest,
                    length_capped: capped,
                }),
            });
        }
        next[depth] = c + 1;
        push(&mut prefix, &mut image, c);
        path.push(c);
        if power_at_end(&prefix, d, path.len(), k) {
            path.pop();
            prefix.truncate(prefix.len() - d);
            continue;
        }
        nodes += 1;
        if path.len() > longest.len() {
            longest.clone_from(&path);
        }
        next.push(0);
    }

    let longest: Vec<i64> = longest.iter().map(|&i| problem.alphabet[i]).collect();
    Ok(SearchOutcome {
        alphabet: problem.alphabet.clone(),
        k,
        mode: problem.mode,
        length: longest.len(),
        longest,
        exhausted: true,
        length_capped: capped,
        nodes,
        checkpoint: None,
    })
}
