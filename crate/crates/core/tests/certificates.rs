//! Rank certificates, Ranestad-Schreyer membership and rank formulas checked on constructed
//! inputs whose answer is known by construction.

mod common;

use std::sync::Arc;

use apolar_core::antipolar::{antipolar, point_square, rs_membership};
use apolar_core::apolarity::{
    binary_rank_complex, catalecticant, generic_rank, tangential_membership_binary,
};
use apolar_core::exactalg::{parse_rational, rat};
use apolar_core::realcert::{rank_certify, reznick_rank, sample_form, signature, Verdict};
use apolar_core::{Error, GradedForm, Multidegree, Rational, Ring};
use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn linear(ring: &Arc<Ring>, block: usize, coeffs: &[Rational]) -> GradedForm {
    let n = ring.nvars();
    let mut deg = vec![0; ring.num_blocks()];
    deg[block] = 1;
    let terms = ring.block_range(block).zip(coeffs).map(|(i, c)| {
        let mut e = vec![0; n];
        e[i] = 1;
        (e, c.clone())
    });
    GradedForm::from_terms(ring.clone(), Multidegree(deg), terms.collect::<Vec<_>>()).unwrap()
}

/// Tangent vector to the `(1,d)` Veronese-Segre embedding at `(l, m)` in direction `(l', m')`,
/// plus `2d` general point squares.
fn tangential_biform(d: u32, seed: u64) -> (GradedForm, Vec<Rational>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = Ring::p1xp1();
    let l = random_point(&mut rng, 2, 4);
    let lp = random_point(&mut rng, 2, 4);
    let m = random_point(&mut rng, 2, 4);
    let mp = random_point(&mut rng, 2, 4);
    let (l1, m1) = (linear(&ring, 0, &l), linear(&ring, 0, &lp));
    let (l2, m2) = (linear(&ring, 1, &m), linear(&ring, 1, &mp));
    let a = l1.mul(&m1).unwrap().mul(&l2.pow(2 * d)).unwrap().scale(&rat(2));
    let b = l1
        .pow(2)
        .mul(&l2.pow(2 * d - 1))
        .unwrap()
        .mul(&m2)
        .unwrap()
        .scale(&rat(2 * d as i64));
    let mut f = a.add(&b).unwrap();
    for _ in 0..2 * d {
        let p = random_point(&mut rng, 4, 5);
        f = f.add(&point_square_oracle(&ring, &[1, d], &p)).unwrap();
    }
    (f, [l, m].concat())
}

#[test]
fn tangential_biforms_lie_on_the_antipolar() {
    for d in 1..=2 {
        for seed in 0..5 {
            let (f, point) = tangential_biform(d, seed);
            let b = Multidegree::new(&[1, d]);
            assert!(rs_membership(&f, &b, &point).unwrap(), "d={d} seed={seed}: {f}");
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let other = random_point(&mut rng, 4, 7);
            assert!(!rs_membership(&f, &b, &other).unwrap(), "d={d} seed={seed}");
        }
    }
}

#[test]
fn tangential_ternary_quartic_lies_on_the_antipolar() {
    let ring = Ring::ternary();
    let mut general = 0;
    for seed in 0..8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_point(&mut rng, 3, 4);
        let lp = random_point(&mut rng, 3, 4);
        let mut f = linear(&ring, 0, &l).pow(3).mul(&linear(&ring, 0, &lp)).unwrap();
        for _ in 0..4 {
            let p = random_point(&mut rng, 3, 5);
            f = f.add(&point_square_oracle(&ring, &[2], &p)).unwrap();
        }
        let b = Multidegree::new(&[2]);
        // small integer data occasionally puts the six-point scheme on a conic
        if catalecticant(&f, &b).unwrap().rank() < 6 {
            continue;
        }
        general += 1;
        assert!(rs_membership(&f, &b, &l).unwrap(), "{f}");
        let other = random_point(&mut rng, 3, 7);
        assert!(!rs_membership(&f, &b, &other).unwrap());
    }
    assert!(general >= 5);
}

fn parse_all(v: &[String]) -> Vec<Rational> {
    v.iter().map(|s| parse_rational(s).unwrap()).collect()
}

/// PSD of rank `r` by principal minors: all are nonnegative, the full determinant vanishes
/// and some `r×r` principal minor is positive.
fn psd_rank_oracle(m: &[Vec<Rational>]) -> Option<usize> {
    let n = m.len();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        let det = leibniz_det(&sub);
        if det.is_negative() {
            return None;
        }
        if det.is_positive() {
            best = best.max(idx.len());
        }
    }
    Some(best)
}

#[test]
fn real_rank_witnesses_verify_independently() {
    let mut verified = 0;
    for d in 1..=2u32 {
        for index in 0..100 {
            let f = sample_form(d, 17, index);
            let Ok(cert) = rank_certify(&f) else { continue };
            let Verdict::RealRankEq(r) = cert.verdict else { continue };
            assert_eq!(r, (2 * d + 2) as usize);
            let w = cert.witness.expect("witness attached");
            let point = parse_all(&w.point);
            let kappa = parse_rational(&w.kappa).unwrap();
            assert!(kappa.is_positive());
            let b = [1, d];
            let sq = point_square_oracle(f.ring(), &b, &point);
            let g = f.add(&sq.scale(&kappa)).unwrap();
            let cat = catalecticant_oracle(&g, &b);
            assert_eq!(psd_rank_oracle(&cat), Some((2 * d + 1) as usize), "{f}");
            assert_eq!(
                (w.updated_signature.n_plus, w.updated_signature.n_minus, w.updated_signature.n_zero),
                ((2 * d + 1) as usize, 0, 1)
            );
            verified += 1;
        }
    }
    assert!(verified >= 15, "only {verified} witnesses");
}

#[test]
fn explicit_definite_example() {
    let ring = Ring::p1xp1();
    // −2x²zw − 2xyz² − xyzw + 2xyw² + y²zw + y²w²
    let terms = [
        ([2, 0, 1, 1], -2),
        ([1, 1, 2, 0], -2),
        ([1, 1, 1, 1], -1),
        ([1, 1, 0, 2], 2),
        ([0, 2, 1, 1], 1),
        ([0, 2, 0, 2], 1),
    ];
    let f = GradedForm::from_terms(
        ring,
        Multidegree::new(&[2, 2]),
        terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))).collect::<Vec<_>>(),
    )
    .unwrap();
    let cert = rank_certify(&f).unwrap();
    assert_eq!(cert.verdict, Verdict::RealRankGe(5));
    assert_eq!(cert.signature.to_string(), "(3,1,0)");
    assert!(cert.witness.is_none());
}

#[test]
fn sums_of_squares_have_reznick_rank() {
    let ring = Ring::p1xp1();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=3u32 {
        let n = 2 * d + 2;
        for k in 1..=n {
            let f = (0..k).fold(GradedForm::zero(ring.clone(), Multidegree::new(&[2, 2 * d])), |acc, _| {
                acc.add(&point_square_oracle(&ring, &[1, d], &random_point(&mut rng, 4, 6)))
                    .unwrap()
            });
            let b = Multidegree::new(&[1, d]);
            assert_eq!(reznick_rank(&f, &b).unwrap(), k as usize);
            match rank_certify(&f) {
                Ok(cert) => {
                    assert_eq!(k, n);
                    assert_eq!(cert.verdict, Verdict::PsdRank(n as usize));
                }
                Err(e) => {
                    assert!(k < n);
                    assert_eq!(e, Error::SingularCatalecticant);
                }
            }
        }
    }
}

#[test]
fn negated_square_sum_is_not_psd() {
    let ring = Ring::p1xp1();
    let f = point_square(&ring, &Multidegree::new(&[1, 1]), &ints(&[1, 2, 3, -1]))
        .unwrap()
        .scale(&rat(-1));
    assert!(matches!(reznick_rank(&f, &Multidegree::new(&[1, 1])), Err(Error::NotPsd { .. })));
}

#[test]
fn generic_forms_reach_the_generic_rank_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 1..=3u32 {
        let ring = Ring::p1xp1();
        let f = random_form(&mut rng, &ring, &[2, 2 * d], 9);
        let cat = catalecticant(&f, &Multidegree::new(&[1, d])).unwrap();
        assert_eq!(cat.rank(), generic_rank(&[2, 2], &Multidegree::new(&[2, 2 * d])).unwrap());
        for n in 1..=3usize {
            let ring = Ring::pn_x_p1(n);
            let f = random_form(&mut rng, &ring, &[2, 2 * d], 9);
            let cat = catalecticant(&f, &Multidegree::new(&[1, d])).unwrap();
            let expect = generic_rank(&[n + 1, 2], &Multidegree::new(&[2, 2 * d])).unwrap();
            assert_eq!(cat.rank(), expect);
            assert_eq!(expect, (d as usize + 1) * (n + 1));
        }
    }
}

#[test]
fn binary_rank_and_tangential_membership() {
    let ring = Ring::binary();
    let x = linear(&ring, 0, &ints(&[1, 0]));
    let y = linear(&ring, 0, &ints(&[0, 1]));
    for d in 2..=7u32 {
        let tangent = x.pow(d - 1).mul(&y).unwrap();
        assert_eq!(binary_rank_complex(&tangent).unwrap(), d as usize);
        assert!(tangential_membership_binary(&tangent).unwrap());
        let power = x.pow(d);
        assert_eq!(binary_rank_complex(&power).unwrap(), 1);
        assert!(!tangential_membership_binary(&power).unwrap());
        let two = x.pow(d).add(&y.pow(d)).unwrap();
        assert_eq!(binary_rank_complex(&two).unwrap(), 2);
        assert_eq!(tangential_membership_binary(&two).unwrap(), d == 2);
    }
}

#[test]
fn certificate_signature_matches_catalecticant() {
    for index in 0..10 {
        let f = sample_form(1, 3, index);
        let Ok(cert) = rank_certify(&f) else { continue };
        let cat = catalecticant(&f, &Multidegree::new(&[1, 1])).unwrap();
        assert_eq!(cert.signature, signature(&cat.matrix).unwrap());
        assert_eq!(parse_rational(&cert.det_phi).unwrap(), leibniz_det(&catalecticant_oracle(&f, &[1, 1])));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank_one_update_is_linear(seed in any::<u64>(), lambda in -5i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::p1xp1();
        let f = random_form(&mut rng, &ring, &[2, 2], 9);
        let b = Multidegree::new(&[1, 1]);
        let Ok(omega) = antipolar(&f, &b) else { return Ok(()) };
        let p = random_point(&mut rng, 4, 5);
        let sq = point_square(&ring, &b, &p).unwrap().scale(&rat(lambda));
        let lhs = catalecticant(&f.add(&sq).unwrap(), &b).unwrap().det().unwrap();
        let rhs = &omega.det_phi + rat(lambda) * omega.eval(&p).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(!omega.det_phi.is_zero());
    }
}
