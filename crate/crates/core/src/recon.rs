//! Channel simulation and reconstruction from many noisy reads.
//!
//! A read is a length `n − 1` word obtained from the transmitted codeword
//! by one deletion followed by at most one substitution. With more distinct
//! reads than the largest ball intersection over codeword pairs, only one
//! codeword can contain them all.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersect::{intersection_size_fast, theorem_bound, validity_threshold};
use crate::seq::{same_alphabet, Alphabet, Sequence, Symbol};

/// Default cap on the number of codeword pairs visited exhaustively.
pub const DEFAULT_COVERAGE_PAIR_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Rule {
    Explicit(BTreeSet<Sequence>),
    /// `Σ x_i ≡ 0 (mod q)`.
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    alphabet: Alphabet,
    n: usize,
    rule: Rule,
}

impl Codebook {
    /// Single parity-check code of length `n ≥ 2`.
    pub fn parity(alphabet: Alphabet, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidBallSpec { t: 1, s: 1, n });
        }
        Ok(Codebook {
            alphabet,
            n,
            rule: Rule::Parity,
        })
    }

    /// A listed code; words must be distinct and share length and alphabet.
    pub fn explicit(words: Vec<Sequence>) -> Result<Self> {
        let first = words.first().ok_or(Error::CodebookTooSmall(0))?.clone();
        let mut set = BTreeSet::new();
        for w in words {
            same_alphabet(&first, &w)?;
            if w.len() != first.len() {
                return Err(Error::LengthMismatch {
                    left: first.len(),
                    right: w.len(),
                });
            }
            let text = w.to_string();
            if !set.insert(w) {
                return Err(Error::DuplicateCodeword(text));
            }
        }
        Ok(Codebook {
            alphabet: first.alphabet(),
            n: first.len(),
            rule: Rule::Explicit(set),
        })
    }

    /// One codeword per line; blank lines and `#` comments are skipped.
    pub fn parse_list(text: &str, alphabet: Alphabet) -> Result<Self> {
        Self::explicit(parse_lines(text, alphabet)?)
    }

    pub fn from_file(path: &Path, alphabet: Alphabet) -> Result<Self> {
        Self::parse_list(&read_file(path)?, alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_parity(&self) -> bool {
        self.rule == Rule::Parity
    }

    pub fn len(&self) -> u128 {
        match &self.rule {
            Rule::Explicit(set) => set.len() as u128,
            Rule::Parity => (self.alphabet.size() as u128).pow(self.n as u32 - 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, w: &Sequence) -> bool {
        self.contains_raw(w.symbols()) && w.alphabet() == self.alphabet
    }

    fn contains_raw(&self, w: &[Symbol]) -> bool {
        if w.len() != self.n {
            return false;
        }
        match &self.rule {
            Rule::Explicit(set) => set.contains(&Sequence::from_raw(self.alphabet, w.to_vec())),
            Rule::Parity => parity(w, self.alphabet) == 0,
        }
    }

    /// Minimum Hamming distance the code guarantees (`2` for parity codes).
    pub fn min_distance(&self) -> Option<usize> {
        match &self.rule {
            Rule::Parity => Some(2),
            Rule::Explicit(set) => {
                let words: Vec<&Sequence> = set.iter().collect();
                let mut best = None;
                for (a, x) in words.iter().enumerate() {
                    for y in &words[a + 1..] {
                        let d = crate::seq::hamming_raw(x.symbols(), y.symbols());
                        best = Some(best.map_or(d, |b: usize| b.min(d)));
                    }
                }
                best
            }
        }
    }

    /// Every codeword, in lexicographic order.
    pub fn words(&self) -> Vec<Sequence> {
        match &self.rule {
            Rule::Explicit(set) => set.iter().cloned().collect(),
            Rule::Parity => crate::sweep::all_words(self.alphabet, self.n - 1)
                .into_iter()
                .map(|w| self.complete(w.into_symbols()))
                .collect(),
        }
    }

    /// Appends the check symbol to a length `n − 1` prefix.
    fn complete(&self, mut prefix: Vec<Symbol>) -> Sequence {
        let q = self.alphabet.size();
        let s = parity(&prefix, self.alphabet) as usize;
        prefix.push(((q - s) % q) as Symbol);
        Sequence::from_raw(self.alphabet, prefix)
    }

    /// A uniformly random codeword.
    pub fn random_word(&self, rng: &mut impl Rng) -> Sequence {
        match &self.rule {
            Rule::Explicit(set) => set.iter().nth(rng.gen_range(0..set.len())).unwrap().clone(),
            Rule::Parity => {
                let q = self.alphabet.size();
                let prefix = (0..self.n - 1).map(|_| rng.gen_range(0..q) as Symbol).collect();
                self.complete(prefix)
            }
        }
    }

    /// A codeword near `c`, or a uniform one, for coverage sampling.
    fn random_partner(&self, c: &Sequence, rng: &mut impl Rng) -> Sequence {
        if let Rule::Explicit(_) = self.rule {
            return self.random_word(rng);
        }
        let q = self.alphabet.size() as Symbol;
        let mut w = c.symbols().to_vec();
        let n = w.len();
        match rng.gen_range(0..4) {
            0 => return self.random_word(rng),
            1 => {
                let i = rng.gen_range(0..n - 1);
                w.swap(i, i + 1);
            }
            2 => {
                // move one symbol; the multiset, hence the check, is kept
                let a = w.remove(rng.gen_range(0..n));
                w.insert(rng.gen_range(0..n), a);
            }
            _ => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let delta = rng.gen_range(1..q);
                w[i] = (w[i] + delta) % q;
                w[j] = (w[j] + q - delta) % q;
            }
        }
        Sequence::from_raw(self.alphabet, w)
    }
}

fn parity(w: &[Symbol], alphabet: Alphabet) -> u32 {
    w.iter().map(|&a| a as u32).sum::<u32>() % alphabet.q() as u32
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn parse_lines(text: &str, alphabet: Alphabet) -> Result<Vec<Sequence>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Sequence::parse(l, alphabet))
        .collect()
}

/// Distinct channel outputs, with the raw count kept alongside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadSet {
    reads: BTreeSet<Sequence>,
    raw: usize,
}

impl ReadSet {
    pub fn new(reads: Vec<Sequence>) -> Result<Self> {
        let first = reads.first().ok_or(Error::EmptyReadSet)?.clone();
        let raw = reads.len();
        let mut set = BTreeSet::new();
        for r in reads {
            same_alphabet(&first, &r)?;
            if r.len() != first.len() {
                return Err(Error::LengthMismatch {
                    left: first.len(),
                    right: r.len(),
                });
            }
            set.insert(r);
        }
        Ok(ReadSet { reads: set, raw })
    }

    pub fn parse_list(text: &str, alphabet: Alphabet) -> Result<Self> {
        Self::new(parse_lines(text, alphabet)?)
    }

    pub fn from_file(path: &Path, alphabet: Alphabet) -> Result<Self> {
        Self::parse_list(&read_file(path)?, alphabet)
    }

    pub fn raw_count(&self) -> usize {
        self.raw
    }

    pub fn distinct_count(&self) -> usize {
        self.reads.len()
    }

    pub fn read_len(&self) -> usize {
        self.reads.iter().next().map_or(0, Sequence::len)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sequence> {
        self.reads.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome {
    Unique { codeword: Sequence },
    Ambiguous { candidates: Vec<Sequence> },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconResult {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub raw_reads: usize,
    pub distinct_reads: usize,
}

impl ReconResult {
    pub fn unique(&self) -> Option<&Sequence> {
        match &self.outcome {
            Outcome::Unique { codeword } => Some(codeword),
            _ => None,
        }
    }
}

/// One deletion at a uniform position, then with probability `p_sub` one
/// substitution at a uniform remaining position by a different symbol.
pub fn channel_transmit(x: &Sequence, p_sub: f64, seed: u64) -> Result<Sequence> {
    transmit_with(x, p_sub, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn transmit_with(x: &Sequence, p_sub: f64, rng: &mut impl Rng) -> Result<Sequence> {
    if x.len() < 2 {
        return Err(Error::InvalidBallSpec { t: 1, s: 1, n: x.len() });
    }
    if !(0.0..=1.0).contains(&p_sub) {
        return Err(Error::InvalidProbability(p_sub.to_string()));
    }
    let mut w = x.symbols().to_vec();
    w.remove(rng.gen_range(0..w.len()));
    if rng.gen_bool(p_sub) {
        let q = x.alphabet().size() as Symbol;
        let i = rng.gen_range(0..w.len());
        w[i] = (w[i] + rng.gen_range(1..q)) % q;
    }
    Ok(Sequence::from_raw(x.alphabet(), w))
}

/// Whether `y` is in `B^{D,S}_{1,1}(x)`, in linear time.
pub fn ball_membership(y: &Sequence, x: &Sequence) -> Result<bool> {
    same_alphabet(x, y)?;
    if y.len() + 1 != x.len() {
        return Err(Error::LengthMismatch {
            left: x.len() - 1,
            right: y.len(),
        });
    }
    Ok(within_one(y.symbols(), x.symbols()))
}

// min over j of d_H(x with position j removed, y) ≤ 1
fn within_one(y: &[Symbol], x: &[Symbol]) -> bool {
    let m = y.len();
    // suffix[j] = #{k ≥ j : y_k ≠ x_{k+1}}
    let mut suffix = vec![0usize; m + 1];
    for k in (0..m).rev() {
        suffix[k] = suffix[k + 1] + usize::from(y[k] != x[k + 1]);
    }
    let mut prefix = 0;
    for j in 0..=m {
        if prefix + suffix[j] <= 1 {
            return true;
        }
        if j < m {
            prefix += usize::from(y[j] != x[j]);
            if prefix > 1 {
                return false;
            }
        }
    }
    false
}

/// All codewords whose ball contains every read.
pub fn reconstruct(reads: &ReadSet, code: &Codebook) -> Result<ReconResult> {
    let first = reads.iter().next().ok_or(Error::EmptyReadSet)?;
    if first.alphabet() != code.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: code.alphabet().q(),
            right: first.alphabet().q(),
        });
    }
    if reads.read_len() + 1 != code.n() {
        return Err(Error::LengthMismatch {
            left: code.n() - 1,
            right: reads.read_len(),
        });
    }
    // any codeword containing `first` is one insertion away from a word
    // within one substitution of it
    let mut seeds: Vec<Vec<Symbol>> = vec![first.symbols().to_vec()];
    let q = code.alphabet().size() as Symbol;
    for i in 0..first.len() {
        for a in 0..q {
            if a != first.symbols()[i] {
                let mut w = first.symbols().to_vec();
                w[i] = a;
                seeds.push(w);
            }
        }
    }
    let mut candidates: HashSet<Vec<Symbol>> = HashSet::new();
    for w in &seeds {
        for pos in 0..=w.len() {
            for a in 0..q {
                let mut c = Vec::with_capacity(w.len() + 1);
                c.extend_from_slice(&w[..pos]);
                c.push(a);
                c.extend_from_slice(&w[pos..]);
                if code.contains_raw(&c) {
                    candidates.insert(c);
                }
            }
        }
    }
    let mut survivors: Vec<Sequence> = candidates
        .into_iter()
        .filter(|c| reads.iter().all(|r| within_one(r.symbols(), c)))
        .map(|c| Sequence::from_raw(code.alphabet(), c))
        .collect();
    survivors.sort();
    let outcome = match survivors.len() {
        0 => Outcome::Infeasible,
        1 => Outcome::Unique {
            codeword: survivors.pop().unwrap(),
        },
        _ => Outcome::Ambiguous { candidates: survivors },
    };
    Ok(ReconResult {
        outcome,
        raw_reads: reads.raw_count(),
        distinct_reads: reads.distinct_count(),
    })
}

/// `2qn − 3q − 1 − δ_{q,2}`: one more than the largest intersection.
pub fn required_reads(n: usize, q: u16) -> Result<u64> {
    let threshold = validity_threshold(q);
    if n < threshold {
        return Err(Error::BelowThreshold { n, q, threshold });
    }
    Ok(theorem_bound(n, q) as u64 + 1)
}

/// The codeword other than `x` whose ball shares the most reads with the
/// ball of `x`. Parity codes only search words within Hamming distance 2.
pub fn strongest_competitor(code: &Codebook, x: &Sequence) -> Result<Option<(Sequence, usize)>> {
    let rivals: Vec<Sequence> = match &code.rule {
        Rule::Explicit(set) => set.iter().filter(|c| *c != x).cloned().collect(),
        Rule::Parity => {
            let q = code.alphabet.size() as Symbol;
            let n = x.len();
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for delta in 1..q {
                        let mut w = x.symbols().to_vec();
                        w[i] = (w[i] + delta) % q;
                        w[j] = (w[j] + q - delta) % q;
                        out.push(Sequence::from_raw(code.alphabet, w));
                    }
                }
            }
            out
        }
    };
    let sized: Vec<(Sequence, usize)> = rivals
        .into_par_iter()
        .map(|c| intersection_size_fast(x, &c).map(|r| (c, r.size)))
        .collect::<Result<_>>()?;
    Ok(sized.into_iter().max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0))))
}

/// Up to `count` distinct reads of `x`, taking every read shared with
/// `rival` first and filling up with random reads of `x`.
pub fn adversarial_reads(x: &Sequence, rival: &Sequence, count: usize, rng: &mut impl Rng) -> Result<Vec<Sequence>> {
    use rand::seq::SliceRandom;
    let ball = crate::ball::ds_ball(x, crate::ball::BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION)?;
    let (mut shared, mut rest): (Vec<Sequence>, Vec<Sequence>) =
        ball.iter().cloned().partition(|r| within_one(r.symbols(), rival.symbols()));
    shared.shuffle(rng);
    rest.shuffle(rng);
    shared.extend(rest);
    shared.truncate(count);
    Ok(shared)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageOptions {
    /// Largest number of codeword pairs visited exhaustively.
    pub pair_cap: u64,
    /// Pairs sampled beyond the cap; `0` turns an oversized request into
    /// an error.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            pair_cap: DEFAULT_COVERAGE_PAIR_CAP,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub coverage: usize,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    /// Present for sampled runs: the value is then a lower estimate.
    pub note: Option<String>,
}

/// Largest intersection over distinct codeword pairs.
pub fn read_coverage(code: &Codebook) -> Result<usize> {
    Ok(read_coverage_with(code, CoverageOptions::default())?.coverage)
}

pub fn read_coverage_with(code: &Codebook, opts: CoverageOptions) -> Result<CoverageReport> {
    let size = code.len();
    if size < 2 {
        return Err(Error::CodebookTooSmall(size as usize));
    }
    let pairs = size * (size - 1) / 2;
    let size_of = |x: &Sequence, y: &Sequence| intersection_size_fast(x, y).map(|r| r.size);
    if pairs <= opts.pair_cap as u128 {
        let words = code.words();
        let coverage = (0..words.len())
            .into_par_iter()
            .map(|a| {
                words[a + 1..]
                    .iter()
                    .map(|y| size_of(&words[a], y))
                    .try_fold(0, |m, s| s.map(|s| m.max(s)))
            })
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
        return Ok(CoverageReport {
            coverage,
            pairs_checked: pairs as u64,
            exhaustive: true,
            note: None,
        });
    }
    if opts.samples == 0 {
        return Err(Error::BudgetExceeded {
            estimate: pairs,
            budget: opts.pair_cap,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sampled = Vec::with_capacity(opts.samples);
    while sampled.len() < opts.samples {
        let x = code.random_word(&mut rng);
        let y = code.random_partner(&x, &mut rng);
        if x != y {
            sampled.push((x, y));
        }
    }
    let coverage = sampled
        .par_iter()
        .map(|(x, y)| size_of(x, y))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    Ok(CoverageReport {
        coverage,
        pairs_checked: opts.samples as u64,
        exhaustive: false,
        note: Some(format!(
            "sampled {} of {} pairs with seed {}; lower estimate",
            opts.samples, pairs, opts.seed
        )),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRow {
    pub reads: usize,
    pub trials: usize,
    pub unique_correct: usize,
    pub unique_wrong: usize,
    pub ambiguous: usize,
    pub infeasible: usize,
    /// Trials where the channel produced fewer distinct reads than asked.
    pub short: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationTable {
    pub n: usize,
    pub q: u16,
    pub seed: u64,
    pub p_sub: f64,
    pub rows: Vec<SimulationRow>,
}

fn trial_seed(seed: u64, reads: usize, trial: usize) -> u64 {
    let mut z = seed ^ (reads as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (trial as u64).rotate_left(32);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws channel outputs of `x` until `count` are distinct or the attempt
/// limit is hit.
pub fn distinct_reads(x: &Sequence, count: usize, p_sub: f64, rng: &mut impl Rng) -> Result<Vec<Sequence>> {
    let mut seen = BTreeSet::new();
    let limit = 200 * count.max(1) + 1000;
    for _ in 0..limit {
        if seen.len() == count {
            break;
        }
        seen.insert(transmit_with(x, p_sub, rng)?);
    }
    Ok(seen.into_iter().collect())
}

/// Transmit, collect `R` distinct reads, decode; repeated `trials` times
/// for each `R` in `read_counts`.
pub fn simulate(
    code: &Codebook,
    read_counts: &[usize],
    trials: usize,
    seed: u64,
    p_sub: f64,
) -> Result<SimulationTable> {
    if !(0.0..=1.0).contains(&p_sub) {
        return Err(Error::InvalidProbability(p_sub.to_string()));
    }
    let mut rows = Vec::new();
    for &r in read_counts {
        let outcomes: Vec<(u8, bool)> = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<(u8, bool)> {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, r, t));
                let x = code.random_word(&mut rng);
                let reads = distinct_reads(&x, r, p_sub, &mut rng)?;
                let short = reads.len() < r;
                let result = reconstruct(&ReadSet::new(reads)?, code)?;
                let kind = match result.outcome {
                    Outcome::Unique { codeword } if codeword == x => 0,
                    Outcome::Unique { .. } => 1,
                    Outcome::Ambiguous { .. } => 2,
                    Outcome::Infeasible => 3,
                };
                Ok((kind, short))
            })
            .collect::<Result<_>>()?;
        let count = |k: u8| outcomes.iter().filter(|o| o.0 == k).count();
        let unique_correct = count(0);
        rows.push(SimulationRow {
            reads: r,
            trials,
            unique_correct,
            unique_wrong: count(1),
            ambiguous: count(2),
            infeasible: count(3),
            short: outcomes.iter().filter(|o| o.1).count(),
            success_rate: if trials == 0 {
                0.0
            } else {
                unique_correct as f64 / trials as f64
            },
        });
    }
    Ok(SimulationTable {
        n: code.n(),
        q: code.alphabet().q(),
        seed,
        p_sub,
        rows,
    })
}
