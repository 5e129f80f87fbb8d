use apolar_core::realcert::{
    rank_certify, sample_form, typical_rank_sample, typical_rank_sample_with_threads, Verdict,
    COEFF_BOUND,
};
use apolar_core::Error;
use num_traits::Signed;

#[test]
fn samples_are_reproducible_and_bounded() {
    for index in 0..20 {
        let f = sample_form(2, 9, index);
        assert_eq!(f, sample_form(2, 9, index));
        assert_eq!(f.degree().parts(), &[2, 4]);
        for (_, c) in f.canonical_terms() {
            assert!(c.abs() <= apolar_core::exactalg::rat(COEFF_BOUND));
        }
    }
    assert_ne!(sample_form(1, 9, 0), sample_form(1, 10, 0));
}

#[test]
fn thread_count_does_not_change_the_tally() {
    let one = typical_rank_sample_with_threads(1, 120, 42, 1).unwrap();
    let four = typical_rank_sample_with_threads(1, 120, 42, 4).unwrap();
    assert_eq!(one, four);
    assert_eq!(one, typical_rank_sample(1, 120, 42).unwrap());
}

#[test]
fn tally_matches_individual_certificates() {
    let stats = typical_rank_sample(1, 60, 3).unwrap();
    let mut eq4 = 0;
    let mut singular = 0;
    for i in 0..60 {
        match rank_certify(&sample_form(1, 3, i)) {
            Ok(c) if c.verdict == Verdict::RealRankEq(4) => eq4 += 1,
            Ok(_) => {}
            Err(Error::SingularCatalecticant) => singular += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert_eq!(stats.verdict_count(Verdict::RealRankEq(4)), eq4);
    assert_eq!(stats.singular, singular);
    let total: usize = stats.verdicts.values().sum();
    assert_eq!(total + stats.singular, 60);
}

#[test]
fn empty_and_degenerate_requests() {
    assert_eq!(typical_rank_sample(1, 0, 1).unwrap_err(), Error::EmptySample);
    assert!(matches!(typical_rank_sample(0, 5, 1), Err(Error::DegreeTooSmall { .. })));
}
