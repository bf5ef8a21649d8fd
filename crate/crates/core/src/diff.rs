//! Mismatch structure of an ordered pair `(x, x')` and the family `Λ` of
//! deleted-word pairs at Hamming distance at most two.
//!
//! Three index sets drive everything:
//!
//! * `S   = { i ∈ [1, n] : x_i ≠ x'_i }`
//! * `T^L = { i ∈ [2, n] : x_i ≠ x'_{i-1} }`
//! * `T^R = { i ∈ [2, n] : x_{i-1} ≠ x'_i }`
//!
//! For `j ≤ j'` the distance between `x_{[n]\j}` and `x'_{[n]\j'}` is
//! `|S ∩ [1, j-1]| + |T^L ∩ [j+1, j']| + |S ∩ [j'+1, n]|`, and the mirrored
//! pair `(x_{[n]\j'}, x'_{[n]\j})` uses `T^R` instead. Each of the three
//! terms is answered from prefix counts, so a distance query is O(1).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seq::{deleted, same_shape, Sequence};

/// Which of the two alignments a `Λ` entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// `(x_{[n]\j}, x'_{[n]\j'})`, distances through `T^L`.
    L,
    /// `(x_{[n]\j'}, x'_{[n]\j})`, distances through `T^R`.
    R,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::L, Side::R];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

/// Sorted 1-based index set over `[1, n]` with prefix counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    members: Vec<usize>,
    // prefix[i] = |set ∩ [1, i]|
    prefix: Vec<usize>,
}

impl IndexSet {
    fn from_predicate(n: usize, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut members = Vec::new();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0);
        for i in 1..=n {
            if keep(i) {
                members.push(i);
            }
            prefix.push(members.len());
        }
        IndexSet { members, prefix }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// `|set ∩ [l, r]|`, zero for an empty interval.
    pub fn count(&self, l: usize, r: usize) -> usize {
        let n = self.prefix.len() - 1;
        let l = l.max(1);
        let r = r.min(n);
        if l > r {
            0
        } else {
            self.prefix[r] - self.prefix[l - 1]
        }
    }

    /// Members of `set ∩ [l, r]` in increasing order.
    pub fn within(&self, l: usize, r: usize) -> &[usize] {
        let lo = self.members.partition_point(|&m| m < l);
        let hi = self.members.partition_point(|&m| m <= r);
        if lo >= hi {
            &[]
        } else {
            &self.members[lo..hi]
        }
    }

    pub fn max_in(&self, l: usize, r: usize) -> Option<usize> {
        self.within(l, r).last().copied()
    }

    pub fn min_in(&self, l: usize, r: usize) -> Option<usize> {
        self.within(l, r).first().copied()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

/// `S`, `T^L`, `T^R` of an ordered pair of equal-length words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffProfile {
    n: usize,
    s: IndexSet,
    tl: IndexSet,
    tr: IndexSet,
}

/// Builds the mismatch profile of `(x, y)`. Requires `n ≥ 2`.
pub fn diff_profile(x: &Sequence, y: &Sequence) -> Result<DiffProfile> {
    same_shape(x, y)?;
    let n = x.len();
    if n < 2 {
        return Err(Error::LengthMismatch { left: n, right: 2 });
    }
    let (a, b) = (x.symbols(), y.symbols());
    Ok(DiffProfile {
        n,
        s: IndexSet::from_predicate(n, |i| a[i - 1] != b[i - 1]),
        tl: IndexSet::from_predicate(n, |i| i >= 2 && a[i - 1] != b[i - 2]),
        tr: IndexSet::from_predicate(n, |i| i >= 2 && a[i - 2] != b[i - 1]),
    })
}

impl DiffProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Hamming distance of the underlying pair.
    pub fn d(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self) -> &IndexSet {
        &self.s
    }

    pub fn tl(&self) -> &IndexSet {
        &self.tl
    }

    pub fn tr(&self) -> &IndexSet {
        &self.tr
    }

    pub fn t(&self, side: Side) -> &IndexSet {
        match side {
            Side::L => &self.tl,
            Side::R => &self.tr,
        }
    }

    /// `i_k`, the k-th smallest mismatch position (1-based `k`).
    pub fn i(&self, k: usize) -> usize {
        self.s.members[k - 1]
    }

    /// `(|S ∩ [1, j-1]|, |T^X ∩ [j+1, j']|, |S ∩ [j'+1, n]|)`.
    pub fn triple(&self, j: usize, jp: usize, side: Side) -> (usize, usize, usize) {
        (
            self.s.count(1, j - 1),
            self.t(side).count(j + 1, jp),
            self.s.count(jp + 1, self.n),
        )
    }

    /// Hamming distance of the deleted pair selected by `(j, j')` and `side`.
    pub fn deleted_hamming(&self, j: usize, jp: usize, side: Side) -> Result<usize> {
        if j > jp {
            return Err(Error::UnorderedPositions { j, jp });
        }
        for idx in [j, jp] {
            if idx == 0 || idx > self.n {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    len: self.n,
                });
            }
        }
        let (a, b, c) = self.triple(j, jp, side);
        Ok(a + b + c)
    }

    /// Mismatch positions of the deleted pair, as indices into `S` or `T^X`
    /// (the union from the distance formula, not yet shifted).
    pub(crate) fn mismatches(&self, j: usize, jp: usize, side: Side) -> Vec<Mismatch> {
        let mut out: Vec<Mismatch> = self
            .s
            .within(1, j - 1)
            .iter()
            .map(|&i| Mismatch::Outside(i))
            .collect();
        out.extend(
            self.t(side)
                .within(j + 1, jp)
                .iter()
                .map(|&i| Mismatch::Inside(i)),
        );
        out.extend(
            self.s
                .within(jp + 1, self.n)
                .iter()
                .map(|&i| Mismatch::Outside(i)),
        );
        out
    }
}

/// One term of the distance union: an element of `S` outside `[j+1, j']`
/// or an element of `T^X` inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mismatch {
    Outside(usize),
    Inside(usize),
}

/// Extremal elements of one `T^X` around the mismatch block `[i_1, i_d]`.
///
/// `first`/`second` are the largest elements of `T^X ∩ [1, i_1]`;
/// `first_p`/`second_p` the smallest of `T^X ∩ [i_d+1, n]`. The `a`, `b`, `c`
/// variants carry the fallback values `1` and `n` when their sets are too
/// small.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SideLandmarks {
    pub first: Option<usize>,
    pub first_p: Option<usize>,
    pub second: Option<usize>,
    pub second_p: Option<usize>,
    pub a: usize,
    pub a_p: usize,
    pub b: usize,
    pub b_p: usize,
    pub c: usize,
    pub c_p: usize,
}

impl SideLandmarks {
    fn compute(p: &DiffProfile, side: Side) -> Self {
        let t = p.t(side);
        let n = p.n;
        let (i1, id) = (p.i(1), p.i(p.d()));
        let left = t.within(1, i1);
        let right = t.within(id + 1, n);
        let from_left = |k: usize| left.len().checked_sub(k).map(|idx| left[idx]);
        let from_right = |k: usize| right.get(k - 1).copied();
        SideLandmarks {
            first: from_left(1),
            first_p: from_right(1),
            second: from_left(2),
            second_p: from_right(2),
            a: from_left(1).unwrap_or(1),
            a_p: from_right(1).map_or(n, |v| v - 1),
            b: from_left(2).unwrap_or(1),
            b_p: from_right(2).map_or(n, |v| v - 1),
            c: from_left(3).unwrap_or(1),
            c_p: from_right(3).map_or(n, |v| v - 1),
        }
    }
}

/// Landmark indices for both alignments: the `k` family comes from `T^L`,
/// the `m` family from `T^R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Landmarks {
    pub left: SideLandmarks,
    pub right: SideLandmarks,
}

impl Landmarks {
    pub fn side(&self, side: Side) -> &SideLandmarks {
        match side {
            Side::L => &self.left,
            Side::R => &self.right,
        }
    }

    pub fn k1(&self) -> Option<usize> {
        self.left.first
    }
    pub fn k1p(&self) -> Option<usize> {
        self.left.first_p
    }
    pub fn k2(&self) -> Option<usize> {
        self.left.second
    }
    pub fn k2p(&self) -> Option<usize> {
        self.left.second_p
    }
    pub fn ka(&self) -> usize {
        self.left.a
    }
    pub fn kap(&self) -> usize {
        self.left.a_p
    }
    pub fn kb(&self) -> usize {
        self.left.b
    }
    pub fn kbp(&self) -> usize {
        self.left.b_p
    }
    pub fn kc(&self) -> usize {
        self.left.c
    }
    pub fn kcp(&self) -> usize {
        self.left.c_p
    }
    pub fn m1(&self) -> Option<usize> {
        self.right.first
    }
    pub fn m1p(&self) -> Option<usize> {
        self.right.first_p
    }
    pub fn m2(&self) -> Option<usize> {
        self.right.second
    }
    pub fn m2p(&self) -> Option<usize> {
        self.right.second_p
    }
}

/// Landmarks of a profile with `d ≥ 1`.
pub fn landmarks(p: &DiffProfile) -> Result<Landmarks> {
    if p.d() == 0 {
        return Err(Error::DistanceTooSmall { d: 0, min: 1 });
    }
    Ok(Landmarks {
        left: SideLandmarks::compute(p, Side::L),
        right: SideLandmarks::compute(p, Side::R),
    })
}

/// Group label of a `Λ` entry: side, distance `ℓ` and the table row.
/// `case` is 0 for `ℓ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupKey {
    pub side: Side,
    pub ell: u8,
    pub case: u8,
}

impl GroupKey {
    pub fn new(side: Side, ell: u8, case: u8) -> Self {
        GroupKey { side, ell, case }
    }

    /// All ten rows for both sides, in table order.
    pub fn all() -> impl Iterator<Item = GroupKey> {
        Side::BOTH.into_iter().flat_map(|side| {
            TABLE
                .iter()
                .map(move |&(ell, case, _)| GroupKey { side, ell, case })
        })
    }

    /// The triple that defines this row.
    pub fn triple(&self) -> (usize, usize, usize) {
        TABLE
            .iter()
            .find(|&&(ell, case, _)| ell == self.ell && case == self.case)
            .map(|&(_, _, t)| t)
            .expect("group key outside the table")
    }

    /// Claim label of the row: `0`, `1.2`, `2.6'`, ...
    pub fn claim_name(&self) -> String {
        let prime = if self.side == Side::R { "'" } else { "" };
        if self.ell == 0 {
            format!("0{prime}")
        } else {
            format!("{}.{}{prime}", self.ell, self.case)
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ell == 0 {
            write!(f, "{}0", self.side)
        } else {
            write!(f, "{}{}.{}", self.side, self.ell, self.case)
        }
    }
}

// (ℓ, case, (|S∩[1,j-1]|, |T^X∩[j+1,j']|, |S∩[j'+1,n]|))
const TABLE: [(u8, u8, (usize, usize, usize)); 10] = [
    (0, 0, (0, 0, 0)),
    (1, 1, (1, 0, 0)),
    (1, 2, (0, 1, 0)),
    (1, 3, (0, 0, 1)),
    (2, 1, (2, 0, 0)),
    (2, 2, (0, 2, 0)),
    (2, 3, (0, 0, 2)),
    (2, 4, (0, 1, 1)),
    (2, 5, (1, 0, 1)),
    (2, 6, (1, 1, 0)),
];

/// Table row of a distance triple, `None` when the total exceeds two.
pub fn classify(triple: (usize, usize, usize)) -> Option<(u8, u8)> {
    TABLE
        .iter()
        .find(|&&(_, _, t)| t == triple)
        .map(|&(ell, case, _)| (ell, case))
}

/// The deleted pair selected by `(j, j')` on the given side.
pub fn deleted_pair(x: &Sequence, y: &Sequence, j: usize, jp: usize, side: Side) -> (Sequence, Sequence) {
    let (dx, dy) = match side {
        Side::L => (j, jp),
        Side::R => (jp, j),
    };
    (
        Sequence::from_raw(x.alphabet(), deleted(x.symbols(), dx - 1)),
        Sequence::from_raw(y.alphabet(), deleted(y.symbols(), dy - 1)),
    )
}

/// A single classified `(j, j')` together with the pair it selects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaEntry {
    pub side: Side,
    pub ell: u8,
    /// Table row within `ℓ`; `None` for `ℓ = 0`.
    pub case_index: Option<u8>,
    pub j: usize,
    pub jprime: usize,
    pub pair: (Sequence, Sequence),
}

impl LambdaEntry {
    pub fn key(&self) -> GroupKey {
        GroupKey::new(self.side, self.ell, self.case_index.unwrap_or(0))
    }
}

pub type SequencePair = (Sequence, Sequence);

/// `Λ` split by side and table row. Each group keeps the distinct pairs and,
/// for every pair, the `(j, j')` positions that produced it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LambdaDecomposition {
    groups: BTreeMap<GroupKey, BTreeMap<SequencePair, Vec<(usize, usize)>>>,
}

impl LambdaDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: GroupKey, pair: SequencePair, j: usize, jp: usize) {
        self.groups
            .entry(key)
            .or_default()
            .entry(pair)
            .or_default()
            .push((j, jp));
    }

    /// Distinct pairs of one group.
    pub fn pairs(&self, key: GroupKey) -> impl Iterator<Item = &SequencePair> + '_ {
        self.groups.get(&key).into_iter().flat_map(|g| g.keys())
    }

    /// Distinct pairs with their provenance.
    pub fn provenance(&self, key: GroupKey) -> impl Iterator<Item = (&SequencePair, &[(usize, usize)])> + '_ {
        self.groups
            .get(&key)
            .into_iter()
            .flat_map(|g| g.iter().map(|(p, v)| (p, v.as_slice())))
    }

    pub fn group_len(&self, key: GroupKey) -> usize {
        self.groups.get(&key).map_or(0, |g| g.len())
    }

    pub fn keys(&self) -> impl Iterator<Item = GroupKey> + '_ {
        self.groups.keys().copied()
    }

    /// Distinct pairs of every group matching `filter`, merged.
    pub fn pair_set(&self, filter: impl Fn(GroupKey) -> bool) -> std::collections::BTreeSet<&SequencePair> {
        self.groups
            .iter()
            .filter(|(k, _)| filter(**k))
            .flat_map(|(_, g)| g.keys())
            .collect()
    }

    /// `Λ` itself, as a set of pairs.
    pub fn lambda(&self) -> std::collections::BTreeSet<&SequencePair> {
        self.pair_set(|_| true)
    }

    /// One entry per (group, distinct pair), using the first provenance.
    pub fn entries(&self) -> Vec<LambdaEntry> {
        self.groups
            .iter()
            .flat_map(|(key, g)| {
                g.iter().map(move |(pair, prov)| LambdaEntry {
                    side: key.side,
                    ell: key.ell,
                    case_index: (key.ell > 0).then_some(key.case),
                    j: prov[0].0,
                    jprime: prov[0].1,
                    pair: pair.clone(),
                })
            })
            .collect()
    }
}

/// Scans every `(j, j')` with `j ≤ j'` on both sides, keeps those whose
/// deleted pair is within distance two and files them under their table row.
pub fn lambda_enumerate(x: &Sequence, y: &Sequence) -> Result<LambdaDecomposition> {
    let p = diff_profile(x, y)?;
    Ok(lambda_enumerate_profile(x, y, &p))
}

pub(crate) fn lambda_enumerate_profile(
    x: &Sequence,
    y: &Sequence,
    p: &DiffProfile,
) -> LambdaDecomposition {
    let n = p.n();
    let mut dec = LambdaDecomposition::new();
    for side in Side::BOTH {
        for j in 1..=n {
            let before = p.s().count(1, j - 1);
            if before > 2 {
                break;
            }
            for jp in j..=n {
                let (a, b, c) = (before, p.t(side).count(j + 1, jp), p.s().count(jp + 1, n));
                if a + b > 2 {
                    break;
                }
                if let Some((ell, case)) = classify((a, b, c)) {
                    let pair = deleted_pair(x, y, j, jp, side);
                    dec.insert(GroupKey::new(side, ell, case), pair, j, jp);
                }
            }
        }
    }
    dec
}
