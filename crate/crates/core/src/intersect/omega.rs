//! Expansion of `Λ` groups into their `Ω` word sets.
//!
//! A pair at distance one contributes `q` words and a pair at distance two
//! contributes two; both are written as `φ` images of `x` read off the
//! mismatch positions of the pair, so no substitution ball is ever built
//! for those groups. Distance-zero pairs contribute the whole
//! single-substitution ball of their common word.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ball::SequenceSet;
use crate::diff::{deleted_pair, diff_profile, DiffProfile, GroupKey, LambdaDecomposition, Mismatch, Side};
use crate::error::{Error, Result};
use crate::seq::{deleted, phi_raw, Sequence, Symbol};

/// The words generated by one `Λ` group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaGroup {
    pub side: Side,
    pub ell: u8,
    pub case_index: Option<u8>,
    pub members: SequenceSet,
}

impl OmegaGroup {
    pub fn key(&self) -> GroupKey {
        GroupKey::new(self.side, self.ell, self.case_index.unwrap_or(0))
    }
}

/// Raw words per group, each list sorted and deduplicated.
pub(crate) type RawGroups = BTreeMap<GroupKey, Vec<Vec<Symbol>>>;

/// Expands every group of `dec`, which must have been built from `(x, y)`.
pub fn omega_groups(dec: &LambdaDecomposition, x: &Sequence, y: &Sequence) -> Result<Vec<OmegaGroup>> {
    let p = diff_profile(x, y)?;
    let raw = omega_raw(dec, x, y, &p)?;
    Ok(raw
        .into_iter()
        .map(|(key, words)| OmegaGroup {
            side: key.side,
            ell: key.ell,
            case_index: (key.ell > 0).then_some(key.case),
            members: SequenceSet::from_raw(x.alphabet(), words),
        })
        .collect())
}

pub(crate) fn omega_raw(
    dec: &LambdaDecomposition,
    x: &Sequence,
    y: &Sequence,
    p: &DiffProfile,
) -> Result<RawGroups> {
    let mut out = RawGroups::new();
    for key in dec.keys() {
        let mut words = Vec::new();
        for (pair, prov) in dec.provenance(key) {
            for &(j, jp) in prov {
                check_provenance(x, y, p, key, pair, j, jp)?;
            }
            let (j, jp) = prov[0];
            expand_pair(x, y, p, key, j, jp, &mut words)?;
        }
        words.sort_unstable();
        words.dedup();
        out.insert(key, words);
    }
    Ok(out)
}

fn check_provenance(
    x: &Sequence,
    y: &Sequence,
    p: &DiffProfile,
    key: GroupKey,
    pair: &(Sequence, Sequence),
    j: usize,
    jp: usize,
) -> Result<()> {
    if j == 0 || j > jp || jp > p.n() {
        return Err(Error::Provenance(format!("{key}: positions ({j}, {jp})")));
    }
    if p.triple(j, jp, key.side) != key.triple() {
        return Err(Error::Provenance(format!(
            "{key}: ({j}, {jp}) has triple {:?}",
            p.triple(j, jp, key.side)
        )));
    }
    let expected = deleted_pair(x, y, j, jp, key.side);
    if &expected != pair {
        return Err(Error::Provenance(format!(
            "{key}: ({j}, {jp}) does not produce ({}, {})",
            pair.0, pair.1
        )));
    }
    Ok(())
}

/// Appends `B^S_1(z, z')` of the pair selected by `(j, j')` to `out`.
pub(crate) fn expand_pair(
    x: &Sequence,
    y: &Sequence,
    p: &DiffProfile,
    key: GroupKey,
    j: usize,
    jp: usize,
    out: &mut Vec<Vec<Symbol>>,
) -> Result<()> {
    let (xs, ys) = (x.symbols(), y.symbols());
    // position of x removed by this pair
    let del = match key.side {
        Side::L => j,
        Side::R => jp,
    };
    if key.ell == 0 {
        let z = deleted(xs, del - 1);
        out.push(z.clone());
        for pos in 0..z.len() {
            for a in x.alphabet().symbols() {
                if a != z[pos] {
                    let mut w = z.clone();
                    w[pos] = a;
                    out.push(w);
                }
            }
        }
        return Ok(());
    }
    let mismatches = p.mismatches(j, jp, key.side);
    if mismatches.len() != key.ell as usize {
        return Err(Error::Provenance(format!(
            "{key}: ({j}, {jp}) has {} mismatches",
            mismatches.len()
        )));
    }
    // (position in x to overwrite, symbol x' carries there)
    let target = |m: Mismatch| -> (usize, Symbol) {
        match (key.side, m) {
            (Side::L, Mismatch::Outside(i)) => (i, ys[i - 1]),
            (Side::L, Mismatch::Inside(i)) => (i, ys[i - 2]),
            (Side::R, Mismatch::Outside(i)) => (i, ys[i - 1]),
            (Side::R, Mismatch::Inside(i)) => (i - 1, ys[i - 1]),
        }
    };
    if key.ell == 1 {
        let (pos, _) = target(mismatches[0]);
        for a in x.alphabet().symbols() {
            out.push(phi_raw(xs, del - 1, pos - 1, a));
        }
    } else {
        for &m in &mismatches {
            let (pos, a) = target(m);
            out.push(phi_raw(xs, del - 1, pos - 1, a));
        }
    }
    Ok(())
}
