use std::sync::Arc;

use perfcode::bitcore::{Code, ExplicitCode, Word};
use perfcode::construct::{hamming, DescriptorExpr, MollardShape};
use perfcode::dataset::builtin_code;
use perfcode::groups::{automorphism_group, rotations_at, GROUP_ELEMENT_CAP};
use perfcode::invariants::{dual_zero_set, explicit_kernel, mu, SampleOptions};
use perfcode::propelin::{
    decide, incorrect_inverse, incorrect_inverse_premise, incorrect_inverse_sym_check, incorrect_inverse_words, mollard_certificate,
    regular_subgroup_search, regular_subgroup_search_with, verify_propelinear_assignment, Condition, DecideOptions, FactorSummary,
    MollardSeries, PropelinearAssignment, Strategy, Verdict,
};
use perfcode::Error;

fn x234() -> Word {
    Word::from_support(15, &[2, 3, 4]).unwrap()
}

#[test]
fn incorrect_inverse_and_search_agree() {
    let c = builtin_code(4918).unwrap();
    let words = incorrect_inverse_words(&c).unwrap();
    assert!(words.contains(&x234()));
    let aut = automorphism_group(&c).unwrap();
    assert!(aut.order() <= 1 << 13 && aut.order() <= GROUP_ELEMENT_CAP);
    let r = regular_subgroup_search(&aut, None).unwrap();
    assert!(r.complete && r.found.is_none());
}

#[test]
fn incorrect_inverse_examples() {
    let c = builtin_code(4918).unwrap();
    assert!(incorrect_inverse(&c, &x234()).unwrap());
    assert!(incorrect_inverse_sym_check(&c, &x234()).unwrap());
    for k in explicit_kernel(&c).unwrap().words() {
        assert!(!incorrect_inverse(&c, k).unwrap());
    }
    let outside = Word::from_support(15, &[1]).unwrap();
    assert!(matches!(incorrect_inverse(&c, &outside), Err(Error::NotMember)));
}

#[test]
fn any_rotation_choice_on_4918_fails_the_conditions() {
    let c = builtin_code(4918).unwrap();
    let perms = c.words().iter().map(|x| rotations_at(&c, x).unwrap().remove(0)).collect();
    let pa = PropelinearAssignment::new(Arc::clone(&c), perms);
    let check = verify_propelinear_assignment(&c, &pa, false, 1).unwrap();
    assert!(!check.valid);
    let f = check.failure.unwrap();
    assert_eq!(f.condition, Condition::Multiplicative);
    assert!(f.y.is_some());
}

#[test]
fn found_regular_subgroup_induces_a_group_operation() {
    let h = hamming(3).unwrap();
    let code = h.as_explicit().unwrap();
    let aut = automorphism_group(code).unwrap();
    let pa = regular_subgroup_search_with(&aut, Strategy::GeneratorBacktracking, None).unwrap().found.unwrap();
    assert!(verify_propelinear_assignment(code, &pa, false, 0).unwrap().valid);
    let words = code.words();
    let zero = Word::zero(7);
    for x in words {
        assert_eq!(pa.product(&zero, x).as_ref(), Some(x));
        assert_eq!(pa.product(x, &zero).as_ref(), Some(x));
        for y in words {
            let xy = pa.product(x, y).unwrap();
            assert!(code.contains(&xy));
            for z in words {
                let left = pa.product(&xy, z).unwrap();
                let right = pa.product(x, &pa.product(y, z).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn certificate_premises_recheck_with_fresh_invariants() {
    let expr = DescriptorExpr::parse("mollard(builtin:4918,hamming:3)").unwrap();
    let d = decide(&expr, &DecideOptions::default()).unwrap();
    assert_eq!(d.verdict, Verdict::Nonpropelinear);
    let cert = d.certificate.unwrap();
    let c = builtin_code(4918).unwrap();
    let code = Code::Explicit(Arc::clone(&c));
    for p in &cert.premises {
        assert!(p.holds, "{}", p.name);
        match p.name {
            "incorrect-inverse" => assert!(incorrect_inverse(&c, &x234()).unwrap()),
            "support-in-zero-set" => {
                let zero = dual_zero_set(&code, &SampleOptions::default()).unwrap().value;
                assert!([2, 3, 4].iter().all(|i| zero.contains(i)));
                let listed: Vec<usize> = serde_json::from_value(p.operands["zero_set"].clone()).unwrap();
                assert_eq!(listed, zero.into_iter().collect::<Vec<_>>());
            }
            "column-mu-bound" => assert!(2 * mu(&code).unwrap().max() + 1 < 15),
            other => panic!("unexpected premise {other}"),
        }
    }
    let witness = Word::from_bit_str(cert.witness.as_deref().unwrap()).unwrap();
    let m = expr.build().unwrap();
    assert!(m.contains(&witness));
    assert_eq!(witness, MollardShape::new(15, 7).embed1_unchecked(&x234()));
}

fn summary_4918() -> (Arc<ExplicitCode>, FactorSummary) {
    let c = builtin_code(4918).unwrap();
    let s = FactorSummary::from_code("builtin:4918", &Code::Explicit(Arc::clone(&c))).unwrap();
    (c, s)
}

#[test]
fn factor_series_with_a_hamming_factor_is_rejected_by_the_row_window() {
    let (c, s) = summary_4918();
    let premise = incorrect_inverse_premise(&c, "builtin:4918", &x234()).unwrap();
    let r = mollard_certificate(&s, &x234(), premise, &MollardSeries::Factor { d: FactorSummary::hamming(3) });
    assert!(matches!(r, Err(Error::ConditionFailed { name: "row-mu-window", .. })), "{r:?}");
}

#[test]
fn factor_series_accepts_a_window_profile() {
    let (c, s) = summary_4918();
    let d = FactorSummary::from_mu("d", perfcode::invariants::MuMultiset::parse("1^13 3^1 5^1").unwrap().arbitrary_profile());
    let premise = incorrect_inverse_premise(&c, "builtin:4918", &x234()).unwrap();
    let cert = mollard_certificate(&s, &x234(), premise, &MollardSeries::Factor { d: d.clone() }).unwrap();
    assert_eq!(cert.kind.as_str(), "mollard-factor");
    let premise = incorrect_inverse_premise(&c, "builtin:4918", &x234()).unwrap();
    let nested = mollard_certificate(&s, &x234(), premise, &MollardSeries::Nested { d, r: 2 }).unwrap();
    assert_eq!(nested.kind.as_str(), "mollard-nested");
    let w = Word::from_bit_str(nested.witness.as_deref().unwrap()).unwrap();
    assert_eq!(w.len(), (15 * 15 + 30) * 3 + 255 + 3);
    assert_eq!(w.weight(), 3);
}

#[test]
fn a_word_without_incorrect_inverse_is_refused() {
    let (c, s) = summary_4918();
    let k = explicit_kernel(&c).unwrap().words()[1].clone();
    let premise = incorrect_inverse_premise(&c, "builtin:4918", &k).unwrap();
    assert!(!premise.holds);
    let r = mollard_certificate(&s, &k, premise, &MollardSeries::Hamming { r: 3 });
    assert!(matches!(r, Err(Error::ConditionFailed { name: "incorrect-inverse", .. })));
}
