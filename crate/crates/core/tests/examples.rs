//! Small worked instances with hand-checkable answers.

use delsub::ball::{ball_intersection, ds_ball, BallSpec};
use delsub::diff::{diff_profile, GroupKey};
use delsub::intersect::{omega_groups, theorem_bound, tight_pair_binary, tight_pair_q_ge_3, validity_threshold};
use delsub::recon::required_reads;
use delsub::{claims_lambda, intersection_size_fast, Alphabet, Error, Sequence, Side};

fn b(s: &str) -> Sequence {
    Sequence::parse(s, Alphabet::BINARY).unwrap()
}

#[test]
fn mismatch_sets_of_worked_pair() {
    let p = diff_profile(&b("01010111"), &b("01101011")).unwrap();
    assert_eq!(p.s().members(), &[3, 4, 5, 6]);
    assert_eq!(p.tl().members(), &[2, 3, 7]);
    assert_eq!(p.tr().members(), &[2]);
}

#[test]
fn zero_group_of_transposition_is_one_ball() {
    let (x, y) = (b("0010110"), b("0001110"));
    let dec = claims_lambda(&x, &y).unwrap();
    let groups = omega_groups(&dec, &x, &y).unwrap();
    let zero = groups
        .iter()
        .find(|g| g.side == Side::L && g.ell == 0)
        .expect("zero group present");
    assert_eq!(zero.members.len(), 1 + 6);
    assert_eq!(dec.group_len(GroupKey::new(Side::R, 0, 0)), 1);
}

#[test]
fn tight_pairs_reach_the_bound() {
    let spec = BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION;
    let (x, y) = tight_pair_q_ge_3(Alphabet::TERNARY, 17).unwrap();
    assert_eq!(ball_intersection(&x, &y, spec).unwrap().len(), 91);
    let (x, y) = tight_pair_binary(29).unwrap();
    assert_eq!(intersection_size_fast(&x, &y).unwrap().size, 107);
    assert_eq!(theorem_bound(29, 2), 107);
}

#[test]
fn thresholds_and_read_counts() {
    assert_eq!([2, 3, 4, 5].map(validity_threshold), [29, 17, 14, 14]);
    assert_eq!(required_reads(17, 3).unwrap(), 92);
    assert!(matches!(required_reads(28, 2), Err(Error::BelowThreshold { threshold: 29, .. })));
}

#[test]
fn ball_of_constant_word() {
    let x = b("0000");
    let ball = ds_ball(&x, BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION).unwrap();
    assert_eq!(ball.len(), 4);
}
