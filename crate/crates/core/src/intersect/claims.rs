//! `Λ` built directly from interval counts and landmarks, one group at a
//! time, without scanning `(j, j')`.

use crate::diff::{deleted_pair, diff_profile, landmarks, DiffProfile, GroupKey, LambdaDecomposition, Side, SideLandmarks};
use crate::error::{Error, Result};
use crate::seq::Sequence;

/// Predicted decomposition of `Λ` for a pair at Hamming distance `d ≥ 2`.
///
/// Groups stated as equalities are emitted unconditionally. Groups stated
/// only as containments produce candidates from the landmarks that exist,
/// and a candidate is kept only if its own distance triple lands in the
/// group's row.
pub fn claims_lambda(x: &Sequence, y: &Sequence) -> Result<LambdaDecomposition> {
    let p = diff_profile(x, y)?;
    claims_lambda_profile(x, y, &p)
}

pub(crate) fn claims_lambda_profile(
    x: &Sequence,
    y: &Sequence,
    p: &DiffProfile,
) -> Result<LambdaDecomposition> {
    let d = p.d();
    if d < 2 {
        return Err(Error::DistanceTooSmall { d, min: 2 });
    }
    let lm = landmarks(p)?;
    let mut dec = LambdaDecomposition::new();
    for side in Side::BOTH {
        let mut b = Builder {
            x,
            y,
            p,
            side,
            dec: &mut dec,
        };
        b.emit(lm.side(side))?;
    }
    Ok(dec)
}

struct Builder<'a> {
    x: &'a Sequence,
    y: &'a Sequence,
    p: &'a DiffProfile,
    side: Side,
    dec: &'a mut LambdaDecomposition,
}

impl Builder<'_> {
    fn key(&self, ell: u8, case: u8) -> GroupKey {
        GroupKey::new(self.side, ell, case)
    }

    fn push(&mut self, key: GroupKey, j: usize, jp: usize) {
        let pair = deleted_pair(self.x, self.y, j, jp, self.side);
        self.dec.insert(key, pair, j, jp);
    }

    fn push_checked(&mut self, key: GroupKey, j: usize, jp: usize) {
        let n = self.p.n();
        if j >= 1 && j <= jp && jp <= n && self.p.triple(j, jp, self.side) == key.triple() {
            self.push(key, j, jp);
        }
    }

    fn push_runs(&mut self, key: GroupKey, l: usize, r: usize) -> Result<()> {
        for &j in self.x.runs(Some((l, r)))?.boundaries() {
            self.push(key, j, j);
        }
        Ok(())
    }

    fn emit(&mut self, lm: &SideLandmarks) -> Result<()> {
        let p = self.p;
        let t = p.t(self.side);
        let (n, d) = (p.n(), p.d());
        let i = |k: usize| p.i(k);
        let (i1, i2, id, idm1) = (i(1), i(2), i(d), i(d - 1));

        if t.count(i1 + 1, id) == 0 {
            self.push(self.key(0, 0), i1, id);
        }

        // ℓ = 1
        if t.count(i2 + 1, id) == 0 {
            self.push(self.key(1, 1), i2, id);
        }
        let k = self.key(1, 2);
        match t.count(i1 + 1, id) {
            0 => {
                if let Some(k1) = lm.first {
                    self.push_checked(k, k1 - 1, id);
                }
                if let Some(k1p) = lm.first_p {
                    self.push_checked(k, i1, k1p);
                }
            }
            1 => self.push(k, i1, id),
            _ => {}
        }
        if t.count(i1 + 1, idm1) == 0 {
            self.push(self.key(1, 3), i1, idm1);
        }

        // ℓ = 2
        let k = self.key(2, 1);
        if d == 2 {
            self.push_runs(k, i2 + 1, n)?;
        } else if t.count(i(3) + 1, id) == 0 {
            self.push(k, i(3), id);
        }

        let k = self.key(2, 2);
        match t.count(i1 + 1, id) {
            0 => {
                if let Some(k2) = lm.second {
                    self.push_checked(k, k2 - 1, id);
                }
                if let (Some(k1), Some(k1p)) = (lm.first, lm.first_p) {
                    self.push_checked(k, k1 - 1, k1p);
                }
                if let Some(k2p) = lm.second_p {
                    self.push_checked(k, i1, k2p);
                }
            }
            1 => {
                if let Some(k1) = lm.first {
                    self.push_checked(k, k1 - 1, id);
                }
                if let Some(k1p) = lm.first_p {
                    self.push_checked(k, i1, k1p);
                }
            }
            2 => self.push(k, i1, id),
            _ => {}
        }

        let k = self.key(2, 3);
        if d == 2 {
            self.push_runs(k, 1, i1 - 1)?;
        } else if t.count(i1 + 1, i(d - 2)) == 0 {
            self.push(k, i1, i(d - 2));
        }

        let k = self.key(2, 4);
        match t.count(i1 + 1, idm1) {
            0 => {
                if let Some(k1) = lm.first {
                    self.push_checked(k, k1 - 1, idm1);
                }
                if let Some(j1p) = t.min_in(idm1 + 1, id - 1) {
                    self.push_checked(k, i1, j1p);
                }
            }
            1 => self.push(k, i1, idm1),
            _ => {}
        }

        let k = self.key(2, 5);
        if d == 2 {
            self.push_runs(k, i1 + 1, i2 - 1)?;
        } else if t.count(i2 + 1, idm1) == 0 {
            self.push(k, i2, idm1);
        }

        let k = self.key(2, 6);
        match t.count(i2 + 1, id) {
            0 => {
                if let Some(k1p) = lm.first_p {
                    self.push_checked(k, i2, k1p);
                }
                if let Some(j1) = t.max_in(i1 + 2, i2) {
                    self.push_checked(k, j1 - 1, id);
                }
            }
            1 => self.push(k, i2, id),
            _ => {}
        }
        Ok(())
    }
}

/// Groupwise comparison of two decompositions as pair-sets. Returns the
/// keys whose pair-sets differ.
pub fn mismatched_groups(a: &LambdaDecomposition, b: &LambdaDecomposition) -> Vec<GroupKey> {
    GroupKey::all()
        .filter(|&k| !a.pairs(k).eq(b.pairs(k)))
        .collect()
}
