use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::ball::{BallSpec, Oracle};
use crate::diff::{diff_profile, lambda_enumerate_profile, GroupKey, LambdaDecomposition};
use crate::error::{Error, Result};
use crate::intersect::claims::claims_lambda_profile;
use crate::intersect::omega::{omega_raw, RawGroups};
use crate::seq::{same_shape, Alphabet, Sequence, Symbol};

/// How an [`IntersectionReport`] obtained its size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `Λ` predicted from landmarks, `Ω` from `φ` images.
    Claims,
    /// Both balls enumerated and intersected (`d = 1`).
    Oracle,
    /// `Λ` from the full `(j, j')` scan (`d = 0`).
    Scan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub n: usize,
    pub q: u16,
    pub d: usize,
    pub size: usize,
    /// Per-group `Ω` sizes before merging, keyed like `L0`, `R2.4`.
    pub group_sizes: BTreeMap<String, usize>,
    pub overlaps: BTreeMap<String, usize>,
    pub bound: i64,
    pub bound_applicable: bool,
    pub method: Method,
}

/// `2qn − 3q − 2 − δ_{q,2}`.
pub fn theorem_bound(n: usize, q: u16) -> i64 {
    let (n, q) = (n as i64, q as i64);
    2 * q * n - 3 * q - 2 - i64::from(q == 2)
}

/// Smallest `n` with `n ≥ (q+23)/2` and `n ≥ (5q+19)/(q−1)`.
pub fn validity_threshold(q: u16) -> usize {
    let q = q as usize;
    ((q + 23).div_ceil(2)).max((5 * q + 19).div_ceil(q - 1))
}

/// `|Ω_0|` for an adjacent transposition `uabv / ubav`: two substitution
/// balls of length `n − 1` words at distance one share `q` words.
pub fn transposition_zero_size(n: usize, q: u16) -> i64 {
    let (n, q) = (n as i64, q as i64);
    2 * (1 + (q - 1) * (n - 1)) - q
}

/// `01201·A_{n−5}(01)` and `10201·A_{n−5}(01)` for `q ≥ 3`, `n ≥ 5`.
pub fn tight_pair_q_ge_3(alphabet: Alphabet, n: usize) -> Result<(Sequence, Sequence)> {
    if alphabet.q() < 3 {
        return Err(Error::InvalidAlphabet(alphabet.q() as u32));
    }
    if n < 5 {
        return Err(Error::IndexOutOfRange { index: n, len: 5 });
    }
    let tail = Sequence::alternating(alphabet, n - 5, 0, 1)?;
    let x = Sequence::new(alphabet, vec![0, 1, 2, 0, 1])?.concat(&tail)?;
    let y = Sequence::new(alphabet, vec![1, 0, 2, 0, 1])?.concat(&tail)?;
    Ok((x, y))
}

/// `0101·A_{n−4}(01)` and `1001·A_{n−4}(01)` over the binary alphabet, `n ≥ 4`.
pub fn tight_pair_binary(n: usize) -> Result<(Sequence, Sequence)> {
    if n < 4 {
        return Err(Error::IndexOutOfRange { index: n, len: 4 });
    }
    let a = Alphabet::BINARY;
    let tail = Sequence::alternating(a, n - 4, 0, 1)?;
    let x = Sequence::new(a, vec![0, 1, 0, 1])?.concat(&tail)?;
    let y = Sequence::new(a, vec![1, 0, 0, 1])?.concat(&tail)?;
    Ok((x, y))
}

/// `|B^{D,S}_{1,1}(x) ∩ B^{D,S}_{1,1}(y)|` without enumerating either ball
/// when `d ≥ 2`.
pub fn intersection_size_fast(x: &Sequence, y: &Sequence) -> Result<IntersectionReport> {
    same_shape(x, y)?;
    let n = x.len();
    let q = x.alphabet().q();
    if n < 2 {
        return Err(Error::InvalidBallSpec { t: 1, s: 1, n });
    }
    let p = diff_profile(x, y)?;
    let d = p.d();
    let bound = theorem_bound(n, q);
    let bound_applicable = d >= 2 && n >= validity_threshold(q);
    let (dec, method) = match d {
        1 => {
            let size = Oracle::default().ball_intersection_size(
                x,
                y,
                BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION,
            )?;
            return Ok(IntersectionReport {
                n,
                q,
                d,
                size,
                group_sizes: BTreeMap::new(),
                overlaps: BTreeMap::new(),
                bound,
                bound_applicable,
                method: Method::Oracle,
            });
        }
        0 => (lambda_enumerate_profile(x, y, &p), Method::Scan),
        _ => (claims_lambda_profile(x, y, &p)?, Method::Claims),
    };
    let groups = omega_raw(&dec, x, y, &p)?;
    Ok(report_from_groups(n, q, d, &groups, bound, bound_applicable, method))
}

/// `Ω` views of a decomposition, used by the report and the lemma checks.
pub(crate) struct OmegaView<'a> {
    groups: &'a RawGroups,
}

impl<'a> OmegaView<'a> {
    pub(crate) fn new(groups: &'a RawGroups) -> Self {
        OmegaView { groups }
    }

    pub(crate) fn union(&self, filter: impl Fn(GroupKey) -> bool) -> HashSet<&'a [Symbol]> {
        self.groups
            .iter()
            .filter(|(k, _)| filter(**k))
            .flat_map(|(_, words)| words.iter().map(|w| w.as_slice()))
            .collect()
    }
}

pub(crate) fn minus_size(a: &HashSet<&[Symbol]>, b: &HashSet<&[Symbol]>) -> usize {
    a.iter().filter(|w| !b.contains(*w)).count()
}

fn report_from_groups(
    n: usize,
    q: u16,
    d: usize,
    groups: &RawGroups,
    bound: i64,
    bound_applicable: bool,
    method: Method,
) -> IntersectionReport {
    let view = OmegaView::new(groups);
    let all = view.union(|_| true);
    let o0 = view.union(|k| k.ell == 0);
    let o1 = view.union(|k| k.ell == 1);
    let o2 = view.union(|k| k.ell == 2);
    let group_sizes = groups
        .iter()
        .map(|(k, words)| (k.to_string(), words.len()))
        .collect();
    let overlaps = BTreeMap::from([
        ("omega0".to_string(), o0.len()),
        ("omega1".to_string(), o1.len()),
        ("omega2".to_string(), o2.len()),
        ("omega1_minus_omega0".to_string(), minus_size(&o1, &o0)),
        ("omega2_minus_omega0".to_string(), minus_size(&o2, &o0)),
        (
            "omega2_minus_omega01".to_string(),
            o2.iter().filter(|w| !o0.contains(*w) && !o1.contains(*w)).count(),
        ),
    ]);
    IntersectionReport {
        n,
        q,
        d,
        size: all.len(),
        group_sizes,
        overlaps,
        bound,
        bound_applicable,
        method,
    }
}

/// Size of the union of the `Ω` groups of an arbitrary decomposition.
pub fn decomposition_union_size(dec: &LambdaDecomposition, x: &Sequence, y: &Sequence) -> Result<usize> {
    let p = diff_profile(x, y)?;
    let groups = omega_raw(dec, x, y, &p)?;
    Ok(OmegaView::new(&groups).union(|_| true).len())
}
