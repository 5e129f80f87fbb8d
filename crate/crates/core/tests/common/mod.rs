//! Test-only oracles, written without the library's linear algebra.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use apolar_core::exactalg::rat;
use apolar_core::{GradedForm, Multidegree, Rational, Ring};
use num_traits::{One, Zero};
use rand::Rng;

/// Leibniz expansion over all permutations.
pub fn leibniz_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = Rational::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
            if term.is_zero() {
                return;
            }
        }
        if inversions % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn minor_rows(m: &[Vec<Rational>], skip_row: usize, skip_col: usize) -> Vec<Vec<Rational>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

fn fact(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * rat(k as i64))
}

/// All exponent vectors of a multidegree over the given block sizes, in any fixed order.
pub fn monomials(block_sizes: &[usize], degree: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for (&size, &deg) in block_sizes.iter().zip(degree) {
        let block = compositions(size, deg);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                block.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(c);
                    v
                })
            })
            .collect();
    }
    out
}

fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(parts - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

pub fn coefficients(f: &GradedForm) -> BTreeMap<Vec<u32>, Rational> {
    f.canonical_terms().into_iter().collect()
}

/// Catalecticant built from the pairing `⟨∂^α, ∂^β f⟩ = (α+β)!·f_{α+β}`.
pub fn catalecticant_oracle(f: &GradedForm, b: &[u32]) -> Vec<Vec<Rational>> {
    let sizes = f.ring().block_sizes();
    let basis = monomials(&sizes, b);
    let coeffs = coefficients(f);
    basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|c| {
                    let e: Vec<u32> = a.iter().zip(c).map(|(x, y)| x + y).collect();
                    match coeffs.get(&e) {
                        Some(v) => e.iter().fold(v.clone(), |acc, &k| acc * fact(k)),
                        None => Rational::zero(),
                    }
                })
                .collect()
        })
        .collect()
}

/// `Π_b (ℓ_b · x_b)^(2B_b)`, expanded by the multinomial theorem.
pub fn point_square_oracle(ring: &Arc<Ring>, b: &[u32], point: &[Rational]) -> GradedForm {
    let sizes = ring.block_sizes();
    let deg: Vec<u32> = b.iter().map(|k| 2 * k).collect();
    let terms: Vec<(Vec<u32>, Rational)> = monomials(&sizes, &deg)
        .into_iter()
        .map(|e| {
            let mut c = Rational::one();
            let mut offset = 0;
            for (blk, &size) in sizes.iter().enumerate() {
                let part = &e[offset..offset + size];
                c *= fact(deg[blk]);
                for (i, &k) in part.iter().enumerate() {
                    c = c / fact(k) * num_traits::pow(point[offset + i].clone(), k as usize);
                }
                offset += size;
            }
            (e, c)
        })
        .collect();
    GradedForm::from_terms(ring.clone(), Multidegree(deg), terms).unwrap()
}

pub fn random_form<R: Rng>(rng: &mut R, ring: &Arc<Ring>, degree: &[u32], bound: i64) -> GradedForm {
    let terms: Vec<(Vec<u32>, Rational)> = monomials(&ring.block_sizes(), degree)
        .into_iter()
        .map(|e| (e, rat(rng.gen_range(-bound..=bound))))
        .collect();
    GradedForm::from_terms(ring.clone(), Multidegree(degree.to_vec()), terms).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    loop {
        let p: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
        if p.iter().all(|v| !v.is_zero()) {
            return p;
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}
