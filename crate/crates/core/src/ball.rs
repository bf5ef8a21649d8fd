//! Materialized error balls.
//!
//! Everything here enumerates explicitly and is meant as ground truth for
//! the structural code in [`crate::intersect`]. Enumeration is refused when
//! its estimated size exceeds a budget.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seq::{deleted, hamming_raw, same_shape, Alphabet, Sequence, Symbol};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Exactly `t` deletions followed by at most `s` substitutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BallSpec {
    pub t: usize,
    pub s: usize,
}

impl BallSpec {
    pub const SINGLE_DELETION_SINGLE_SUBSTITUTION: BallSpec = BallSpec { t: 1, s: 1 };

    pub fn new(t: usize, s: usize) -> Self {
        BallSpec { t, s }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.t + self.s >= n {
            return Err(Error::InvalidBallSpec {
                t: self.t,
                s: self.s,
                n,
            });
        }
        Ok(())
    }

    /// Upper bound on the number of words generated while enumerating the
    /// ball of a length-`n` word: `n^t * |B^S_s|` at length `n - t`.
    pub fn enumeration_estimate(&self, n: usize, q: usize) -> u128 {
        let deletions = (n as u128).saturating_pow(self.t as u32);
        deletions.saturating_mul(substitution_ball_size(n - self.t.min(n), q, self.s))
    }
}

/// `Σ_{k≤s} C(n,k) (q-1)^k`.
pub fn substitution_ball_size(n: usize, q: usize, s: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for k in 0..=s.min(n) {
        if k > 0 {
            binom = binom * (n - k + 1) as u128 / k as u128;
            power = power.saturating_mul((q - 1) as u128);
        }
        total = total.saturating_add(binom.saturating_mul(power));
    }
    total
}

/// A deduplicated set of equal-length words, listed in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequenceSet {
    items: BTreeSet<Sequence>,
}

impl SequenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn from_raw<I>(alphabet: Alphabet, words: I) -> Self
    where
        I: IntoIterator<Item = Vec<Symbol>>,
    {
        words
            .into_iter()
            .map(|w| Sequence::from_raw(alphabet, w))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, w: &Sequence) -> bool {
        self.items.contains(w)
    }

    pub fn insert(&mut self, w: Sequence) -> bool {
        self.items.insert(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sequence> {
        self.items.iter()
    }

    pub fn intersection(&self, other: &SequenceSet) -> SequenceSet {
        self.items.intersection(&other.items).cloned().collect()
    }

    pub fn union(&self, other: &SequenceSet) -> SequenceSet {
        self.items.union(&other.items).cloned().collect()
    }

    pub fn difference(&self, other: &SequenceSet) -> SequenceSet {
        self.items.difference(&other.items).cloned().collect()
    }

    pub fn is_subset(&self, other: &SequenceSet) -> bool {
        self.items.is_subset(&other.items)
    }
}

impl FromIterator<Sequence> for SequenceSet {
    fn from_iter<I: IntoIterator<Item = Sequence>>(iter: I) -> Self {
        SequenceSet {
            items: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for SequenceSet {
    type Item = Sequence;
    type IntoIter = std::collections::btree_set::IntoIter<Sequence>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl Serialize for SequenceSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.items.iter())
    }
}

/// A ball held as raw symbol vectors for fast membership and intersection.
#[derive(Debug, Clone)]
pub struct MaterializedBall {
    alphabet: Alphabet,
    words: HashSet<Vec<Symbol>>,
}

impl MaterializedBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Sequence) -> bool {
        self.words.contains(w.symbols())
    }

    pub fn intersection_size(&self, other: &MaterializedBall) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.words.iter().filter(|w| large.words.contains(*w)).count()
    }

    pub fn intersection(&self, other: &MaterializedBall) -> SequenceSet {
        SequenceSet::from_raw(
            self.alphabet,
            self.words
                .iter()
                .filter(|w| other.words.contains(*w))
                .cloned(),
        )
    }

    pub fn to_set(&self) -> SequenceSet {
        SequenceSet::from_raw(self.alphabet, self.words.iter().cloned())
    }
}

/// Explicit enumerator with a configurable materialization budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub budget: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Oracle {
    pub fn with_budget(budget: u64) -> Self {
        Oracle { budget }
    }

    fn admit(&self, estimate: u128) -> Result<()> {
        if estimate > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn substitution_ball(&self, x: &Sequence, s: usize) -> Result<SequenceSet> {
        self.admit(substitution_ball_size(x.len(), x.alphabet().size(), s))?;
        let mut out = HashSet::new();
        substitutions_into(x.symbols(), x.alphabet(), s, &mut out);
        Ok(SequenceSet::from_raw(x.alphabet(), out))
    }

    pub fn deletion_ball(&self, x: &Sequence, t: usize) -> Result<SequenceSet> {
        if t == 0 {
            return Ok(std::iter::once(x.clone()).collect());
        }
        if t >= x.len() {
            return Err(Error::InvalidBallSpec {
                t,
                s: 0,
                n: x.len(),
            });
        }
        self.admit((x.len() as u128).saturating_pow(t as u32))?;
        Ok(SequenceSet::from_raw(
            x.alphabet(),
            deletions(x.symbols(), t),
        ))
    }

    pub fn materialize(&self, x: &Sequence, spec: BallSpec) -> Result<MaterializedBall> {
        spec.check(x.len())?;
        self.admit(spec.enumeration_estimate(x.len(), x.alphabet().size()))?;
        let mut words = HashSet::new();
        for z in deletions(x.symbols(), spec.t) {
            substitutions_into(&z, x.alphabet(), spec.s, &mut words);
        }
        Ok(MaterializedBall {
            alphabet: x.alphabet(),
            words,
        })
    }

    pub fn ds_ball(&self, x: &Sequence, spec: BallSpec) -> Result<SequenceSet> {
        Ok(self.materialize(x, spec)?.to_set())
    }

    pub fn ball_intersection(
        &self,
        x: &Sequence,
        y: &Sequence,
        spec: BallSpec,
    ) -> Result<SequenceSet> {
        same_shape(x, y)?;
        let bx = self.materialize(x, spec)?;
        let by = self.materialize(y, spec)?;
        Ok(bx.intersection(&by))
    }

    pub fn ball_intersection_size(&self, x: &Sequence, y: &Sequence, spec: BallSpec) -> Result<usize> {
        same_shape(x, y)?;
        let bx = self.materialize(x, spec)?;
        let by = self.materialize(y, spec)?;
        Ok(bx.intersection_size(&by))
    }
}

/// All words at Hamming distance at most `s` from `x`.
pub fn substitution_ball(x: &Sequence, s: usize) -> Result<SequenceSet> {
    Oracle::default().substitution_ball(x, s)
}

/// All length `n - t` subsequences of `x`.
pub fn deletion_ball(x: &Sequence, t: usize) -> Result<SequenceSet> {
    Oracle::default().deletion_ball(x, t)
}

/// `B^{D,S}_{t,s}(x)`.
pub fn ds_ball(x: &Sequence, spec: BallSpec) -> Result<SequenceSet> {
    Oracle::default().ds_ball(x, spec)
}

/// `B^{D,S}_{t,s}(x) ∩ B^{D,S}_{t,s}(y)`, by materializing both balls.
pub fn ball_intersection(x: &Sequence, y: &Sequence, spec: BallSpec) -> Result<SequenceSet> {
    Oracle::default().ball_intersection(x, y, spec)
}

/// `|B^S_1(x) ∩ B^S_1(y)|` in closed form.
pub fn sub_intersection_size(x: &Sequence, y: &Sequence) -> Result<usize> {
    same_shape(x, y)?;
    let q = x.alphabet().size();
    Ok(match hamming_raw(x.symbols(), y.symbols()) {
        0 => 1 + (q - 1) * x.len(),
        1 => q,
        2 => 2,
        _ => 0,
    })
}

fn deletions(w: &[Symbol], t: usize) -> HashSet<Vec<Symbol>> {
    let mut level: HashSet<Vec<Symbol>> = std::iter::once(w.to_vec()).collect();
    for _ in 0..t {
        let mut next = HashSet::new();
        for v in &level {
            for j in 0..v.len() {
                // deleting inside a run gives the same word; keep one per run
                if j > 0 && v[j] == v[j - 1] {
                    continue;
                }
                next.insert(deleted(v, j));
            }
        }
        level = next;
    }
    level
}

fn substitutions_into(
    w: &[Symbol],
    alphabet: Alphabet,
    s: usize,
    out: &mut HashSet<Vec<Symbol>>,
) {
    fn rec(
        buf: &mut Vec<Symbol>,
        start: usize,
        left: usize,
        alphabet: Alphabet,
        out: &mut HashSet<Vec<Symbol>>,
    ) {
        out.insert(buf.clone());
        if left == 0 {
            return;
        }
        for pos in start..buf.len() {
            let original = buf[pos];
            for a in alphabet.symbols().filter(|&a| a != original) {
                buf[pos] = a;
                rec(buf, pos + 1, left - 1, alphabet, out);
            }
            buf[pos] = original;
        }
    }
    let mut buf = w.to_vec();
    rec(&mut buf, 0, s, alphabet, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::hamming;

    fn word(s: &str, q: u32) -> Sequence {
        Sequence::parse(s, Alphabet::new(q).unwrap()).unwrap()
    }

    fn all_words(q: u32, n: usize) -> Vec<Sequence> {
        let alphabet = Alphabet::new(q).unwrap();
        let total = (q as usize).pow(n as u32);
        (0..total)
            .map(|mut m| {
                let mut v = vec![0u8; n];
                for slot in v.iter_mut().rev() {
                    *slot = (m % q as usize) as u8;
                    m /= q as usize;
                }
                Sequence::new(alphabet, v).unwrap()
            })
            .collect()
    }

    #[test]
    fn substitution_ball_sizes() {
        assert_eq!(substitution_ball(&word("01010111", 2), 1).unwrap().len(), 9);
        assert_eq!(substitution_ball(&word("01201", 3), 1).unwrap().len(), 11);
        let x = word("0120", 3);
        let zero = substitution_ball(&x, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero.contains(&x));
        assert_eq!(
            substitution_ball(&x, 2).unwrap().len() as u128,
            substitution_ball_size(4, 3, 2)
        );
    }

    #[test]
    fn single_substitution_ball_size_is_one_plus_q_minus_one_n() {
        for (q, max_n) in [(2u32, 8usize), (3, 6)] {
            for n in 1..=max_n {
                for x in all_words(q, n) {
                    let ball = substitution_ball(&x, 1).unwrap();
                    assert_eq!(ball.len(), 1 + (q as usize - 1) * n);
                    assert!(ball.iter().all(|w| hamming(w, &x).unwrap() <= 1));
                }
            }
        }
    }

    #[test]
    fn deletion_ball_examples() {
        assert_eq!(deletion_ball(&word("0000", 2), 1).unwrap().len(), 1);
        let pair: Vec<String> = deletion_ball(&word("01", 2), 1)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(pair, vec!["0", "1"]);
        assert!(deletion_ball(&word("01", 2), 2).is_err());
    }

    #[test]
    fn single_deletion_ball_size_equals_run_count() {
        for x in all_words(2, 6) {
            let size = deletion_ball(&x, 1).unwrap().len();
            assert_eq!(size, x.runs(None).unwrap().count());
        }
    }

    #[test]
    fn two_deletions_match_subsequence_enumeration() {
        let x = word("0120112", 3);
        let mut expected = SequenceSet::new();
        for a in 1..=7 {
            for b in (a + 1)..=7 {
                expected.insert(x.delete(b).unwrap().delete(a).unwrap());
            }
        }
        assert_eq!(deletion_ball(&x, 2).unwrap(), expected);
    }

    #[test]
    fn ds_ball_is_union_of_substitution_balls_of_deletions() {
        for x in all_words(2, 6).into_iter().chain(all_words(3, 4)) {
            let direct = ds_ball(&x, BallSpec::new(1, 1)).unwrap();
            let mut union = SequenceSet::new();
            for j in 1..=x.len() {
                union = union.union(&substitution_ball(&x.delete(j).unwrap(), 1).unwrap());
            }
            assert_eq!(direct, union);
            let pure = ds_ball(&x, BallSpec::new(1, 0)).unwrap();
            assert!(pure.is_subset(&direct));
            assert_eq!(pure, deletion_ball(&x, 1).unwrap());
        }
    }

    #[test]
    fn ds_ball_small_cases() {
        let x = word("01", 2);
        assert_eq!(ds_ball(&x, BallSpec::new(1, 0)).unwrap().len(), 2);
        assert!(ds_ball(&x, BallSpec::new(1, 1)).is_err());
        let x = word("01010111", 2);
        let ball = ds_ball(&x, BallSpec::new(1, 1)).unwrap();
        assert!(ball.len() <= 64);
        // brute force over all length-7 binary words
        let brute = all_words(2, 7)
            .into_iter()
            .filter(|w| (1..=8).any(|j| hamming(&x.delete(j).unwrap(), w).unwrap() <= 1))
            .count();
        assert_eq!(ball.len(), brute);
    }

    #[test]
    fn intersection_contains_example_word() {
        let x = word("01010111", 2);
        let y = word("01101011", 2);
        let inter = ball_intersection(&x, &y, BallSpec::new(1, 1)).unwrap();
        assert!(inter.contains(&word("0100101", 2)));
        assert!(inter.contains(&word("0110111", 2)));
        let own = ball_intersection(&x, &x, BallSpec::new(1, 1)).unwrap();
        assert_eq!(own, ds_ball(&x, BallSpec::new(1, 1)).unwrap());
        assert!(ball_intersection(&x, &word("0101", 2), BallSpec::new(1, 1)).is_err());
    }

    #[test]
    fn sub_intersection_closed_form() {
        let q4 = Alphabet::new(4).unwrap();
        let a = Sequence::new(q4, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(sub_intersection_size(&a, &a.substitute(2, 3).unwrap()).unwrap(), 4);
        let b = word("010101", 2);
        assert_eq!(sub_intersection_size(&b, &word("100101", 2)).unwrap(), 2);
        assert_eq!(sub_intersection_size(&b, &word("101011", 2)).unwrap(), 0);
        assert_eq!(sub_intersection_size(&b, &b).unwrap(), 7);
        for (q, n) in [(2u32, 6usize), (3, 4)] {
            let words = all_words(q, n);
            for x in &words {
                let bx = substitution_ball(x, 1).unwrap();
                for y in &words {
                    let by = substitution_ball(y, 1).unwrap();
                    assert_eq!(
                        sub_intersection_size(x, y).unwrap(),
                        bx.intersection(&by).len()
                    );
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let x = word("0101010101", 2);
        let tight = Oracle::with_budget(50);
        assert!(matches!(
            tight.ds_ball(&x, BallSpec::new(1, 1)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(Oracle::with_budget(100).ds_ball(&x, BallSpec::new(1, 1)).is_ok());
    }
}
