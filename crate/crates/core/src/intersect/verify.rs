//! Per-pair checks: predicted `Λ` groups against the scan, and the
//! structural inequalities on `Λ` and `Ω` that the bound is assembled from.

use serde::Serialize;

use crate::diff::{diff_profile, lambda_enumerate_profile, GroupKey, LambdaDecomposition, Side};
use crate::error::{Error, Result};
use crate::intersect::claims::claims_lambda_profile;
use crate::intersect::fast::{minus_size, transposition_zero_size, OmegaView};
use crate::intersect::omega::omega_raw;
use crate::seq::Sequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    /// Group label such as `L1.2`.
    pub group: String,
    pub predicted: usize,
    pub enumerated: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `value ≤ limit`
    Le,
    /// `value = limit`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub side: Option<Side>,
    pub value: i64,
    pub relation: Relation,
    pub limit: i64,
    pub pass: bool,
}

impl LemmaCheck {
    fn new(name: &'static str, side: Option<Side>, value: usize, relation: Relation, limit: i64) -> Self {
        let value = value as i64;
        let pass = match relation {
            Relation::Le => value <= limit,
            Relation::Eq => value == limit,
        };
        LemmaCheck {
            name,
            side,
            value,
            relation,
            limit,
            pass,
        }
    }
}

/// Names of the structural checks, in the order they are evaluated.
pub const LEMMA_CHECKS: [&str; 10] = [
    "omega1_within_omega0",
    "lambda1_at_most_3",
    "lambda1_at_most_2",
    "odd_pairs_at_most_n_minus_2",
    "even_pairs_at_most_6",
    "even_excess_at_most_6",
    "transposition_omega0_size",
    "transposition_excess",
    "omega2_excess_at_most_8",
    "lambda2_at_most_8",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub q: u16,
    pub d: usize,
    pub claims: Vec<ClaimCheck>,
    /// Only checks whose hypotheses hold for this pair.
    pub lemmas: Vec<LemmaCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass) && self.lemmas.iter().all(|l| l.pass)
    }

    pub fn claim_failures(&self) -> Vec<String> {
        self.claims
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: predicted {} enumerated {}", c.group, c.predicted, c.enumerated))
            .collect()
    }

    pub fn lemma_failures(&self) -> Vec<String> {
        self.lemmas
            .iter()
            .filter(|l| !l.pass)
            .map(|l| {
                let side = l.side.map(|s| format!("[{s}]")).unwrap_or_default();
                format!("{}{side}: {} vs {}", l.name, l.value, l.limit)
            })
            .collect()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = self.claim_failures();
        out.extend(self.lemma_failures());
        out
    }
}

/// Runs every claim and structural check on a pair with `d ≥ 2`.
pub fn verify_claims(x: &Sequence, y: &Sequence) -> Result<VerifyReport> {
    let p = diff_profile(x, y)?;
    let (n, d, q) = (p.n(), p.d(), x.alphabet().q());
    if d < 2 {
        return Err(Error::DistanceTooSmall { d, min: 2 });
    }
    let predicted = claims_lambda_profile(x, y, &p)?;
    let scanned = lambda_enumerate_profile(x, y, &p);
    let claims = GroupKey::all()
        .map(|key| ClaimCheck {
            group: key.to_string(),
            predicted: predicted.group_len(key),
            enumerated: scanned.group_len(key),
            pass: predicted.pairs(key).eq(scanned.pairs(key)),
        })
        .collect();

    let groups = omega_raw(&scanned, x, y, &p)?;
    let view = OmegaView::new(&groups);
    let (i1, id) = (p.i(1), p.i(d));
    let lambda_len = |dec: &LambdaDecomposition, f: &dyn Fn(GroupKey) -> bool| dec.pair_set(f).len();
    let mut lemmas = Vec::new();
    let mut zero_inner = [false; 2];
    for (slot, side) in Side::BOTH.into_iter().enumerate() {
        let inner = p.t(side).count(i1 + 1, id);
        zero_inner[slot] = inner == 0;
        let s = Some(side);
        let o0 = view.union(|k| k.side == side && k.ell == 0);
        if inner == 0 {
            let o1 = view.union(|k| k.side == side && k.ell == 1);
            lemmas.push(LemmaCheck::new(LEMMA_CHECKS[0], s, minus_size(&o1, &o0), Relation::Le, 0));
        } else {
            let l1 = lambda_len(&scanned, &|k| k.side == side && k.ell == 1);
            if d == 2 {
                lemmas.push(LemmaCheck::new(LEMMA_CHECKS[1], s, l1, Relation::Le, 3));
            } else {
                lemmas.push(LemmaCheck::new(LEMMA_CHECKS[2], s, l1, Relation::Le, 2));
            }
        }
        if d == 2 {
            let even = |k: GroupKey| k.side == side && k.ell == 2 && k.case.is_multiple_of(2);
            if inner == 0 {
                let o2e = view.union(even);
                lemmas.push(LemmaCheck::new(LEMMA_CHECKS[5], s, minus_size(&o2e, &o0), Relation::Le, 6));
            } else {
                lemmas.push(LemmaCheck::new(LEMMA_CHECKS[4], s, lambda_len(&scanned, &even), Relation::Le, 6));
            }
        } else if inner == 0 {
            let o2 = view.union(|k| k.side == side && k.ell == 2);
            lemmas.push(LemmaCheck::new(LEMMA_CHECKS[8], s, minus_size(&o2, &o0), Relation::Le, 8));
        } else {
            let l2 = lambda_len(&scanned, &|k| k.side == side && k.ell == 2);
            lemmas.push(LemmaCheck::new(LEMMA_CHECKS[9], s, l2, Relation::Le, 8));
        }
    }
    if d == 2 {
        let odd = lambda_len(&scanned, &|k| k.ell == 2 && k.case % 2 == 1);
        lemmas.push(LemmaCheck::new(LEMMA_CHECKS[3], None, odd, Relation::Le, n as i64 - 2));
        if zero_inner == [true, true] {
            let o0 = view.union(|k| k.ell == 0);
            let o2 = view.union(|k| k.ell == 2);
            lemmas.push(LemmaCheck::new(
                LEMMA_CHECKS[6],
                None,
                o0.len(),
                Relation::Eq,
                transposition_zero_size(n, q),
            ));
            let limit = 2 * n as i64 - 6 - i64::from(q == 2);
            lemmas.push(LemmaCheck::new(LEMMA_CHECKS[7], None, minus_size(&o2, &o0), Relation::Le, limit));
        }
    }
    Ok(VerifyReport {
        n,
        q,
        d,
        claims,
        lemmas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersect::fast::{tight_pair_binary, tight_pair_q_ge_3};
    use crate::seq::Alphabet;

    fn b(s: &str) -> Sequence {
        Sequence::parse(s, Alphabet::BINARY).unwrap()
    }

    #[test]
    fn twenty_claims_per_pair() {
        let r = verify_claims(&b("01010111"), &b("01101011")).unwrap();
        assert_eq!(r.claims.len(), 20);
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn rejects_close_pairs() {
        assert!(verify_claims(&b("0101"), &b("0100")).is_err());
    }

    #[test]
    fn transposition_pair_gets_size_checks() {
        let (x, y) = tight_pair_q_ge_3(Alphabet::TERNARY, 17).unwrap();
        let r = verify_claims(&x, &y).unwrap();
        let zero = r.lemmas.iter().find(|l| l.name == "transposition_omega0_size").unwrap();
        assert_eq!(zero.value, 2 * 2 * 17 - 9 + 4);
        assert!(r.passed(), "{:?}", r.failures());
        let (x, y) = tight_pair_binary(29).unwrap();
        assert!(verify_claims(&x, &y).unwrap().passed());
    }

    #[test]
    fn far_pair_gets_large_distance_checks() {
        let r = verify_claims(&b("0110100110"), &b("1011010011")).unwrap();
        assert!(r.d >= 3);
        assert!(r.lemmas.iter().all(|l| matches!(
            l.name,
            "omega1_within_omega0" | "lambda1_at_most_2" | "omega2_excess_at_most_8" | "lambda2_at_most_8"
        )));
        assert!(r.passed(), "{:?}", r.failures());
    }
}
