//! q-ary words and the elementary operations on them.
//!
//! Positions in the public API are 1-based. A word over `Σ_q` is stored as a
//! plain byte vector together with its alphabet, so `q` is limited to 256.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// The alphabet `{0, 1, ..., q-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Alphabet {
    q: u16,
}

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet { q: 2 };
    pub const TERNARY: Alphabet = Alphabet { q: 3 };

    pub fn new(q: u32) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::InvalidAlphabet(q));
        }
        Ok(Alphabet { q: q as u16 })
    }

    pub fn q(self) -> u16 {
        self.q
    }

    pub fn size(self) -> usize {
        self.q as usize
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        (symbol as u16) < self.q
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.q).map(|s| s as Symbol)
    }

    fn check(self, symbol: Symbol) -> Result<()> {
        if self.contains(symbol) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: symbol as u32,
                q: self.q,
            })
        }
    }
}

impl TryFrom<u32> for Alphabet {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Alphabet::new(q)
    }
}

impl From<Alphabet> for u32 {
    fn from(a: Alphabet) -> u32 {
        a.q as u32
    }
}

/// An immutable word over a q-ary alphabet.
///
/// Ordering is lexicographic on the symbols, which is what set listings use.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl Sequence {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check(s)?;
        }
        Ok(Sequence { symbols, alphabet })
    }

    /// Builds a word whose symbols are already known to lie in the alphabet.
    pub(crate) fn from_raw(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        Sequence { symbols, alphabet }
    }

    /// Parses the textual form: one digit per symbol when `q <= 10`,
    /// comma-separated decimals otherwise. Commas are accepted for any `q`.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let text = text.trim();
        let err = |reason: String| Error::Parse {
            text: text.to_string(),
            reason,
        };
        let symbols = if text.is_empty() {
            Vec::new()
        } else if text.contains(',') || alphabet.q > 10 {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|e| err(format!("bad symbol {tok:?}: {e}")))
                })
                .collect::<Result<Vec<u32>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| err(format!("unexpected character {c:?}")))
                })
                .collect::<Result<Vec<u32>>>()?
        };
        let symbols = symbols
            .into_iter()
            .map(|s| {
                if s < alphabet.q as u32 {
                    Ok(s as Symbol)
                } else {
                    Err(Error::SymbolOutOfRange {
                        symbol: s,
                        q: alphabet.q,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence { symbols, alphabet })
    }

    /// `A_n(ab)`: the alternating word `abab...` of length `n`.
    pub fn alternating(alphabet: Alphabet, n: usize, a: Symbol, b: Symbol) -> Result<Self> {
        alphabet.check(a)?;
        alphabet.check(b)?;
        if a == b {
            return Err(Error::EqualSymbols(a));
        }
        let symbols = (0..n).map(|i| if i % 2 == 0 { a } else { b }).collect();
        Ok(Sequence { symbols, alphabet })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    /// Symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> Result<Symbol> {
        self.check_index(i)?;
        Ok(self.symbols[i - 1])
    }

    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        same_alphabet(self, other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Sequence::from_raw(self.alphabet, symbols))
    }

    /// `x_{[n]\j}`: removes the symbol at position `j`.
    pub fn delete(&self, j: usize) -> Result<Sequence> {
        self.check_index(j)?;
        Ok(Sequence::from_raw(
            self.alphabet,
            deleted(&self.symbols, j - 1),
        ))
    }

    /// Writes `a` at position `j`.
    pub fn substitute(&self, j: usize, a: Symbol) -> Result<Sequence> {
        self.check_index(j)?;
        self.alphabet.check(a)?;
        let mut symbols = self.symbols.clone();
        symbols[j - 1] = a;
        Ok(Sequence::from_raw(self.alphabet, symbols))
    }

    /// `φ^{j1}_{j2;a}(x)`: deletes position `j1` and writes `a` at the symbol
    /// originally at position `j2`.
    pub fn phi(&self, j1: usize, j2: usize, a: Symbol) -> Result<Sequence> {
        self.check_index(j1)?;
        self.check_index(j2)?;
        self.alphabet.check(a)?;
        if j1 == j2 {
            return Err(Error::CoincidentPositions(j1));
        }
        Ok(Sequence::from_raw(
            self.alphabet,
            phi_raw(&self.symbols, j1 - 1, j2 - 1, a),
        ))
    }

    /// Maximal constant substrings, optionally restricted to the 1-based
    /// interval `[l, r]`. `l = r + 1` denotes the empty interval.
    pub fn runs(&self, interval: Option<(usize, usize)>) -> Result<RunDecomposition> {
        let n = self.len();
        let (l, r) = interval.unwrap_or((1, n));
        if l == 0 || r > n || l > r + 1 {
            return Err(Error::BadInterval {
                left: l,
                right: r,
                len: n,
            });
        }
        let mut boundaries = Vec::new();
        for i in l..=r {
            if i == l || self.symbols[i - 1] != self.symbols[i - 2] {
                boundaries.push(i);
            }
        }
        Ok(RunDecomposition { boundaries })
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.q <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (k, &s) in self.symbols.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence(q={}, {})", self.alphabet.q, self)
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Run structure of a word or of one of its substrings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunDecomposition {
    boundaries: Vec<usize>,
}

impl RunDecomposition {
    /// 1-based start index of each run, strictly increasing.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn count(&self) -> usize {
        self.boundaries.len()
    }
}

pub(crate) fn same_alphabet(x: &Sequence, y: &Sequence) -> Result<()> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch {
            left: x.alphabet.q,
            right: y.alphabet.q,
        });
    }
    Ok(())
}

pub(crate) fn same_shape(x: &Sequence, y: &Sequence) -> Result<()> {
    same_alphabet(x, y)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Number of positions where `x` and `y` differ.
pub fn hamming(x: &Sequence, y: &Sequence) -> Result<usize> {
    same_shape(x, y)?;
    Ok(hamming_raw(&x.symbols, &y.symbols))
}

/// `n - LCS(x, y)` for two words of equal length `n`.
pub fn levenshtein(x: &Sequence, y: &Sequence) -> Result<usize> {
    same_shape(x, y)?;
    Ok(x.len() - lcs_len(&x.symbols, &y.symbols))
}

/// Length of a longest common subsequence, two-row dynamic program.
pub fn lcs_len(a: &[Symbol], b: &[Symbol]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (k, &cb) in b.iter().enumerate() {
            cur[k + 1] = if ca == cb {
                prev[k] + 1
            } else {
                prev[k + 1].max(cur[k])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub(crate) fn hamming_raw(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(u, v)| u != v).count()
}

/// Copy of `w` without the 0-based position `j`.
pub(crate) fn deleted(w: &[Symbol], j: usize) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(w.len() - 1);
    out.extend_from_slice(&w[..j]);
    out.extend_from_slice(&w[j + 1..]);
    out
}

/// 0-based `φ`: delete `j1`, write `a` at original position `j2`.
pub(crate) fn phi_raw(w: &[Symbol], j1: usize, j2: usize, a: Symbol) -> Vec<Symbol> {
    let mut out = deleted(w, j1);
    let target = if j2 > j1 { j2 - 1 } else { j2 };
    out[target] = a;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Sequence {
        Sequence::parse(s, Alphabet::BINARY).unwrap()
    }

    fn t(s: &str) -> Sequence {
        Sequence::parse(s, Alphabet::TERNARY).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&t("10212201"), &t("10212201")).unwrap(), 0);
        assert_eq!(hamming(&b("01010111"), &b("01101011")).unwrap(), 4);
        assert_eq!(hamming(&b("0101"), &b("1010")).unwrap(), 4);
    }

    #[test]
    fn hamming_rejects_mismatches() {
        assert!(matches!(
            hamming(&b("01"), &b("011")),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            hamming(&b("01"), &t("01")),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn levenshtein_examples() {
        assert_eq!(levenshtein(&t("012"), &t("012")).unwrap(), 0);
        assert_eq!(levenshtein(&b("01"), &b("10")).unwrap(), 1);
        assert_eq!(levenshtein(&b("0011"), &b("1100")).unwrap(), 2);
        assert!(levenshtein(&b("0"), &b("01")).is_err());
    }

    #[test]
    fn delete_examples() {
        assert_eq!(t("012").delete(2).unwrap(), t("02"));
        assert_eq!(b("01010111").delete(4).unwrap(), b("0100111"));
        assert_eq!(b("01101011").delete(7).unwrap(), b("0110101"));
        assert!(b("01").delete(0).is_err());
        assert!(b("01").delete(3).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(t("10212201").phi(6, 3, 0).unwrap(), t("1001201"));
        assert_eq!(b("01010111").phi(4, 7, 0).unwrap(), b("0100101"));
        let x = t("10212201");
        for j1 in 1..=x.len() {
            for j2 in (1..=x.len()).filter(|&j2| j2 != j1) {
                let same = x.at(j2).unwrap();
                assert_eq!(x.phi(j1, j2, same).unwrap(), x.delete(j1).unwrap());
            }
        }
    }

    #[test]
    fn phi_errors() {
        let x = b("0101");
        assert_eq!(x.phi(2, 2, 0), Err(Error::CoincidentPositions(2)));
        assert!(x.phi(5, 1, 0).is_err());
        assert!(x.phi(1, 2, 2).is_err());
    }

    #[test]
    fn alternating_examples() {
        let q = Alphabet::new(4).unwrap();
        assert_eq!(Sequence::alternating(q, 5, 2, 3).unwrap().to_string(), "23232");
        assert_eq!(Sequence::alternating(q, 6, 0, 1).unwrap().to_string(), "010101");
        assert!(Sequence::alternating(q, 0, 0, 1).unwrap().is_empty());
        assert_eq!(
            Sequence::alternating(q, 3, 1, 1),
            Err(Error::EqualSymbols(1))
        );
    }

    #[test]
    fn runs_examples() {
        assert_eq!(b("000").runs(None).unwrap().count(), 1);
        let r = t("10212201").runs(None).unwrap();
        assert_eq!(r.count(), 7);
        assert_eq!(r.boundaries(), &[1, 2, 3, 4, 5, 7, 8]);
        // positions 6..8 of 01010111 read "111"
        assert_eq!(b("01010111").runs(Some((6, 8))).unwrap().count(), 1);
        assert_eq!(b("01010111").runs(Some((5, 8))).unwrap().count(), 2);
        assert_eq!(b("0101").runs(Some((3, 2))).unwrap().count(), 0);
        assert!(b("0101").runs(Some((3, 1))).is_err());
        assert!(b("0101").runs(Some((0, 2))).is_err());
        assert!(b("0101").runs(Some((2, 5))).is_err());
    }

    #[test]
    fn textual_forms() {
        let big = Alphabet::new(12).unwrap();
        let w = Sequence::parse("11,0,3", big).unwrap();
        assert_eq!(w.symbols(), &[11, 0, 3]);
        assert_eq!(w.to_string(), "11,0,3");
        assert_eq!(Sequence::parse("0,1,1", Alphabet::BINARY).unwrap(), b("011"));
        assert!(Sequence::parse("012", Alphabet::BINARY).is_err());
        assert!(Sequence::parse("0a1", Alphabet::BINARY).is_err());
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(257).is_err());
    }

    #[test]
    fn lcs_matches_subsequence_brute_force() {
        fn is_subseq(small: &[u8], big: &[u8]) -> bool {
            let mut it = big.iter();
            small.iter().all(|c| it.any(|d| d == c))
        }
        let words: Vec<Vec<u8>> = (0..64u32)
            .map(|m| (0..6).map(|k| ((m >> k) & 1) as u8).collect())
            .collect();
        for a in &words {
            for c in &words {
                let mut best = 0;
                for mask in 0..64u32 {
                    let sub: Vec<u8> = (0..6).filter(|k| mask >> k & 1 == 1).map(|k| a[k]).collect();
                    if sub.len() > best && is_subseq(&sub, c) {
                        best = sub.len();
                    }
                }
                assert_eq!(lcs_len(a, c), best);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = Sequence> {
            (2u32..5, 1usize..12).prop_flat_map(|(q, n)| {
                prop::collection::vec(0..q as u8, n).prop_map(move |w| Sequence::new(Alphabet::new(q).unwrap(), w).unwrap())
            })
        }

        proptest! {
            #[test]
            fn text_round_trip(x in word()) {
                prop_assert_eq!(Sequence::parse(&x.to_string(), x.alphabet()).unwrap(), x);
            }

            #[test]
            fn runs_partition_the_word(x in word()) {
                let runs = x.runs(None).unwrap();
                let starts = runs.boundaries();
                prop_assert_eq!(starts[0], 1);
                for (k, &j) in starts.iter().enumerate().skip(1) {
                    prop_assert!(j > starts[k - 1]);
                    prop_assert_ne!(x.at(j).unwrap(), x.at(j - 1).unwrap());
                }
            }

            #[test]
            fn deletions_in_a_run_coincide(x in word()) {
                for j in 2..=x.len() {
                    if x.at(j).unwrap() == x.at(j - 1).unwrap() {
                        prop_assert_eq!(x.delete(j).unwrap(), x.delete(j - 1).unwrap());
                    }
                }
            }
        }
    }
}
