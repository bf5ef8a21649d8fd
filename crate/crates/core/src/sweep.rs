//! Exhaustive and sampled sweeps over word pairs.
//!
//! Sampled pairs mix uniformly random pairs with pairs built from a random
//! word by a few local edits (substitutions, adjacent swaps, moving one
//! symbol), since uniform pairs almost never have the small Hamming
//! distances where the intersection is large.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{BallSpec, MaterializedBall, Oracle};
use crate::error::{Error, Result};
use crate::intersect::{
    intersection_size_fast, theorem_bound, tight_pair_binary, tight_pair_q_ge_3, validity_threshold, verify_claims,
};
use crate::seq::{hamming_raw, levenshtein, Alphabet, Sequence, Symbol};

/// Cap on the number of ordered pairs an exhaustive sweep may visit.
pub const DEFAULT_PAIR_CAP: u64 = 100_000_000;

const CHUNK: usize = 4096;
const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Fast evaluator against materialized balls.
    Oracle,
    /// Predicted `Λ` groups against the scan.
    Claims,
    /// Size against `2qn − 3q − 2 − δ_{q,2}`.
    Theorem,
    /// Structural inequalities on `Λ` and `Ω`.
    Lemmas,
    /// Size at most `4q + 32` when `d_H ≥ 3` and `d_L ≥ 2`.
    Remark5,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Scope::Oracle),
            "claims" => Ok(Scope::Claims),
            "theorem" => Ok(Scope::Theorem),
            "lemmas" => Ok(Scope::Lemmas),
            "remark5" => Ok(Scope::Remark5),
            _ => Err(Error::Parse {
                text: s.to_string(),
                reason: "expected oracle, claims, theorem, lemmas or remark5".into(),
            }),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Oracle => "oracle",
            Scope::Claims => "claims",
            Scope::Theorem => "theorem",
            Scope::Lemmas => "lemmas",
            Scope::Remark5 => "remark5",
        })
    }
}

impl Scope {
    /// Whether a pair falls under the hypotheses this scope checks.
    pub fn admits(self, x: &Sequence, y: &Sequence) -> bool {
        let d = hamming_raw(x.symbols(), y.symbols());
        match self {
            Scope::Oracle => true,
            Scope::Claims | Scope::Theorem | Scope::Lemmas => d >= 2,
            Scope::Remark5 => d >= 3 && levenshtein(x, y).is_ok_and(|l| l >= 2),
        }
    }

    /// Scopes whose statement needs `n` at or above the validity threshold.
    pub fn needs_valid_length(self) -> bool {
        matches!(self, Scope::Theorem | Scope::Remark5)
    }

    /// Upper bound on the intersection size checked by this scope.
    pub fn size_limit(self, n: usize, q: u16) -> Option<i64> {
        match self {
            Scope::Theorem => Some(theorem_bound(n, q)),
            Scope::Remark5 => Some(4 * q as i64 + 32),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub scope: Scope,
    pub q: u16,
    pub n: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    /// Pairs that met the scope's hypotheses and were checked.
    pub instances: u64,
    pub violations: u64,
    pub max_size: Option<usize>,
    pub bound: Option<i64>,
    /// The first few violations, in visiting order.
    pub failures: Vec<String>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Every word of length `n`, in lexicographic order.
pub fn all_words(alphabet: Alphabet, n: usize) -> Vec<Sequence> {
    let q = alphabet.size();
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut m| {
            let mut w = vec![0 as Symbol; n];
            for slot in w.iter_mut().rev() {
                *slot = (m % q) as Symbol;
                m /= q;
            }
            Sequence::from_raw(alphabet, w)
        })
        .collect()
}

/// Seeded source of word pairs.
pub struct PairSampler {
    alphabet: Alphabet,
    n: usize,
    rng: ChaCha8Rng,
}

impl PairSampler {
    pub fn new(alphabet: Alphabet, n: usize, seed: u64) -> Self {
        PairSampler {
            alphabet,
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn word(&mut self) -> Sequence {
        let q = self.alphabet.size();
        let w = (0..self.n).map(|_| self.rng.gen_range(0..q) as Symbol).collect();
        Sequence::from_raw(self.alphabet, w)
    }

    /// A word with few, long runs.
    fn blocky_word(&mut self) -> Sequence {
        let q = self.alphabet.size();
        let mut w = Vec::with_capacity(self.n);
        while w.len() < self.n {
            let a = self.rng.gen_range(0..q) as Symbol;
            let len = self.rng.gen_range(1..=4);
            w.extend(std::iter::repeat_n(a, len));
        }
        w.truncate(self.n);
        Sequence::from_raw(self.alphabet, w)
    }

    fn other_symbol(&mut self, a: Symbol) -> Symbol {
        let q = self.alphabet.size() as Symbol;
        (a + self.rng.gen_range(1..q)) % q
    }

    fn substitute(&mut self, w: &mut [Symbol]) {
        let i = self.rng.gen_range(0..w.len());
        w[i] = self.other_symbol(w[i]);
    }

    fn swap_adjacent(&mut self, w: &mut [Symbol]) {
        if w.len() >= 2 {
            let i = self.rng.gen_range(0..w.len() - 1);
            w.swap(i, i + 1);
        }
    }

    fn move_symbol(&mut self, w: &mut Vec<Symbol>) {
        let from = self.rng.gen_range(0..w.len());
        let a = w.remove(from);
        let to = self.rng.gen_range(0..=w.len());
        w.insert(to, a);
    }

    pub fn pair(&mut self) -> (Sequence, Sequence) {
        let x = if self.rng.gen_bool(0.25) {
            self.blocky_word()
        } else {
            self.word()
        };
        if self.rng.gen_bool(0.3) {
            let y = self.word();
            return (x, y);
        }
        let mut w = x.symbols().to_vec();
        let edits = self.rng.gen_range(1..=3);
        for _ in 0..edits {
            match self.rng.gen_range(0..4) {
                0 => self.substitute(&mut w),
                1 => self.swap_adjacent(&mut w),
                2 => self.move_symbol(&mut w),
                _ => {
                    self.swap_adjacent(&mut w);
                    self.substitute(&mut w);
                }
            }
        }
        let y = Sequence::from_raw(self.alphabet, w);
        if self.rng.gen_bool(0.5) {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// `count` pairs accepted by `keep`, in generation order.
    pub fn pairs_where(
        &mut self,
        count: usize,
        keep: impl Fn(&Sequence, &Sequence) -> bool,
    ) -> Vec<(Sequence, Sequence)> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let (x, y) = self.pair();
            if keep(&x, &y) {
                out.push((x, y));
            }
        }
        out
    }
}

/// The tight constructions for this alphabet and length, both orders.
pub fn constructed_pairs(alphabet: Alphabet, n: usize) -> Vec<(Sequence, Sequence)> {
    let pair = if alphabet.q() == 2 {
        tight_pair_binary(n)
    } else {
        tight_pair_q_ge_3(alphabet, n)
    };
    match pair {
        Ok((x, y)) => vec![(x.clone(), y.clone()), (y, x)],
        Err(_) => Vec::new(),
    }
}

/// Sampled pairs for a scope: constructions first (for size scopes), then
/// seeded samples meeting the scope's hypotheses, `samples` in total.
pub fn sample_for_scope(scope: Scope, alphabet: Alphabet, n: usize, samples: usize, seed: u64) -> Vec<(Sequence, Sequence)> {
    let mut pairs: Vec<_> = match scope {
        Scope::Theorem | Scope::Oracle => constructed_pairs(alphabet, n)
            .into_iter()
            .filter(|(x, y)| scope.admits(x, y))
            .take(samples)
            .collect(),
        _ => Vec::new(),
    };
    let mut sampler = PairSampler::new(alphabet, n, seed);
    let rest = samples - pairs.len();
    pairs.extend(sampler.pairs_where(rest, |x, y| scope.admits(x, y)));
    pairs
}

enum Outcome {
    Skipped,
    Checked { size: Option<usize>, failure: Option<String> },
}

#[derive(Default)]
struct Tally {
    instances: u64,
    violations: u64,
    max_size: Option<usize>,
    failures: Vec<String>,
}

impl Tally {
    fn absorb(&mut self, outcome: Outcome) {
        if let Outcome::Checked { size, failure } = outcome {
            self.instances += 1;
            if let Some(s) = size {
                self.max_size = Some(self.max_size.map_or(s, |m| m.max(s)));
            }
            if let Some(f) = failure {
                self.violations += 1;
                if self.failures.len() < KEPT_FAILURES {
                    self.failures.push(f);
                }
            }
        }
    }
}

fn check(scope: Scope, x: &Sequence, y: &Sequence, oracle_size: Option<usize>) -> Outcome {
    if !scope.admits(x, y) {
        return Outcome::Skipped;
    }
    let describe = |msg: String| format!("{x} {y}: {msg}");
    match scope {
        Scope::Claims | Scope::Lemmas => match verify_claims(x, y) {
            Ok(r) => {
                let bad = if scope == Scope::Claims {
                    r.claim_failures()
                } else {
                    r.lemma_failures()
                };
                Outcome::Checked {
                    size: None,
                    failure: (!bad.is_empty()).then(|| describe(bad.join("; "))),
                }
            }
            Err(e) => Outcome::Checked {
                size: None,
                failure: Some(describe(e.to_string())),
            },
        },
        Scope::Oracle | Scope::Theorem | Scope::Remark5 => {
            let report = match intersection_size_fast(x, y) {
                Ok(r) => r,
                Err(e) => {
                    return Outcome::Checked {
                        size: None,
                        failure: Some(describe(e.to_string())),
                    }
                }
            };
            let size = report.size;
            let failure = match scope {
                Scope::Oracle => {
                    let expected = oracle_size.map(Ok).unwrap_or_else(|| {
                        Oracle::default().ball_intersection_size(x, y, BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION)
                    });
                    match expected {
                        Ok(e) if e == size => None,
                        Ok(e) => Some(describe(format!("fast {size} oracle {e}"))),
                        Err(err) => Some(describe(err.to_string())),
                    }
                }
                _ => {
                    let limit = scope.size_limit(x.len(), x.alphabet().q()).unwrap_or(i64::MAX);
                    (size as i64 > limit).then(|| describe(format!("size {size} exceeds {limit}")))
                }
            };
            Outcome::Checked {
                size: Some(size),
                failure,
            }
        }
    }
}

/// Runs `scope` over the given pairs. `progress` receives
/// `(visited, total)` after each chunk.
pub fn run_pairs(
    scope: Scope,
    alphabet: Alphabet,
    n: usize,
    pairs: &[(Sequence, Sequence)],
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SweepSummary> {
    check_domain(scope, alphabet, n)?;
    let mut tally = Tally::default();
    for (idx, chunk) in pairs.chunks(CHUNK).enumerate() {
        let outcomes: Vec<Outcome> = chunk.par_iter().map(|(x, y)| check(scope, x, y, None)).collect();
        outcomes.into_iter().for_each(|o| tally.absorb(o));
        progress((idx * CHUNK + chunk.len()).min(pairs.len()), pairs.len());
    }
    Ok(summary(scope, alphabet, n, false, None, tally))
}

/// Runs `scope` over every ordered pair of `Σ_q^n` or over seeded samples.
pub fn run_sweep(
    scope: Scope,
    alphabet: Alphabet,
    n: usize,
    mode: Mode,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SweepSummary> {
    check_domain(scope, alphabet, n)?;
    match mode {
        Mode::Sampled { samples, seed } => {
            let pairs = sample_for_scope(scope, alphabet, n, samples, seed);
            let mut s = run_pairs(scope, alphabet, n, &pairs, progress)?;
            s.seed = Some(seed);
            Ok(s)
        }
        Mode::Exhaustive => {
            let q = alphabet.size() as u128;
            let total = q.saturating_pow(2 * n as u32);
            if total > DEFAULT_PAIR_CAP as u128 {
                return Err(Error::BudgetExceeded {
                    estimate: total,
                    budget: DEFAULT_PAIR_CAP,
                });
            }
            let words = all_words(alphabet, n);
            let balls: Option<Vec<MaterializedBall>> = if scope == Scope::Oracle {
                let oracle = Oracle::default();
                Some(
                    words
                        .par_iter()
                        .map(|w| oracle.materialize(w, BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION))
                        .collect::<Result<_>>()?,
                )
            } else {
                None
            };
            let m = words.len();
            let total = m * m;
            let mut tally = Tally::default();
            let mut start = 0;
            while start < total {
                let end = (start + CHUNK).min(total);
                let outcomes: Vec<Outcome> = (start..end)
                    .into_par_iter()
                    .map(|idx| {
                        let (a, b) = (idx / m, idx % m);
                        let expected = balls.as_ref().map(|bs| bs[a].intersection_size(&bs[b]));
                        check(scope, &words[a], &words[b], expected)
                    })
                    .collect();
                outcomes.into_iter().for_each(|o| tally.absorb(o));
                progress(end, total);
                start = end;
            }
            Ok(summary(scope, alphabet, n, true, None, tally))
        }
    }
}

fn check_domain(scope: Scope, alphabet: Alphabet, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidBallSpec { t: 1, s: 1, n });
    }
    let threshold = validity_threshold(alphabet.q());
    if scope.needs_valid_length() && n < threshold {
        return Err(Error::BelowThreshold {
            n,
            q: alphabet.q(),
            threshold,
        });
    }
    Ok(())
}

fn summary(scope: Scope, alphabet: Alphabet, n: usize, exhaustive: bool, seed: Option<u64>, t: Tally) -> SweepSummary {
    SweepSummary {
        scope,
        q: alphabet.q(),
        n,
        exhaustive,
        seed,
        instances: t.instances,
        violations: t.violations,
        max_size: t.max_size,
        bound: scope.size_limit(n, alphabet.q()),
        failures: t.failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet(_: usize, _: usize) {}

    #[test]
    fn word_enumeration() {
        let w = all_words(Alphabet::TERNARY, 3);
        assert_eq!(w.len(), 27);
        assert_eq!(w[0].to_string(), "000");
        assert_eq!(w[26].to_string(), "222");
        assert_eq!(w[5].to_string(), "012");
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_for_scope(Scope::Claims, Alphabet::new(4).unwrap(), 12, 50, 3);
        let b = sample_for_scope(Scope::Claims, Alphabet::new(4).unwrap(), 12, 50, 3);
        assert_eq!(a, b);
        let c = sample_for_scope(Scope::Claims, Alphabet::new(4).unwrap(), 12, 50, 4);
        assert_ne!(a, c);
        assert!(a.iter().all(|(x, y)| hamming_raw(x.symbols(), y.symbols()) >= 2));
    }

    #[test]
    fn sampler_hits_small_distances() {
        let mut s = PairSampler::new(Alphabet::BINARY, 30, 1);
        let pairs = s.pairs_where(500, |_, _| true);
        let d2 = pairs
            .iter()
            .filter(|(x, y)| hamming_raw(x.symbols(), y.symbols()) == 2)
            .count();
        assert!(d2 > 50, "{d2}");
    }

    #[test]
    fn theorem_samples_start_with_constructions() {
        let pairs = sample_for_scope(Scope::Theorem, Alphabet::TERNARY, 17, 10, 7);
        assert_eq!(pairs.len(), 10);
        assert_eq!(pairs[0].0.to_string(), "01201010101010101");
    }

    #[test]
    fn small_exhaustive_sweeps_pass() {
        for scope in [Scope::Oracle, Scope::Claims, Scope::Lemmas] {
            let s = run_sweep(scope, Alphabet::BINARY, 5, Mode::Exhaustive, &quiet).unwrap();
            assert!(s.passed(), "{scope}: {:?}", s.failures);
            assert!(s.instances > 0);
        }
    }

    #[test]
    fn theorem_scope_needs_valid_length() {
        assert_eq!(
            run_sweep(Scope::Theorem, Alphabet::BINARY, 20, Mode::Sampled { samples: 5, seed: 1 }, &quiet).unwrap_err(),
            Error::BelowThreshold {
                n: 20,
                q: 2,
                threshold: 29
            }
        );
    }

    #[test]
    fn sampled_theorem_sweep_reaches_bound() {
        let s = run_sweep(
            Scope::Theorem,
            Alphabet::TERNARY,
            17,
            Mode::Sampled { samples: 300, seed: 7 },
            &quiet,
        )
        .unwrap();
        assert!(s.passed(), "{:?}", s.failures);
        assert_eq!(s.max_size, Some(91));
        assert_eq!(s.seed, Some(7));
    }

    #[test]
    fn exhaustive_cap() {
        let err = run_sweep(Scope::Claims, Alphabet::BINARY, 30, Mode::Exhaustive, &quiet).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn scope_parsing() {
        for s in ["oracle", "claims", "theorem", "lemmas", "remark5"] {
            assert_eq!(s.parse::<Scope>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<Scope>().is_err());
    }
}
