//! Fixed inputs shared by the benchmarks in `benches/`.

use apolar_core::exactalg::rat;
use apolar_core::hyperdet::{Pencil, Tensor2222};
use apolar_core::{ExactMatrix, Rational, UniPoly};

/// Deterministic dense `n×n` rational matrix with small entries and a few denominators.
pub fn matrix(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |i, j| {
        let num = ((i * 7 + j * 11 + 3) % 13) as i64 - 6;
        let den = 1 + ((i + 2 * j) % 3) as i64;
        Rational::new(num.into(), den.into())
    })
}

/// `Π (x − k)` for `k = 1..=n` with one repeated factor, so Sturm chains have full length.
pub fn polynomial(n: usize) -> UniPoly {
    let mut p = UniPoly::from_i64(&[-1, 1]).pow(2);
    for k in 2..=n as i64 {
        p = &p * &UniPoly::from_i64(&[-k, 1]);
    }
    p
}

pub fn pencil(n: usize) -> Pencil {
    Pencil::new(ExactMatrix::identity(n), matrix(n)).expect("square slices")
}

pub fn tensor() -> Tensor2222 {
    Tensor2222::new((0..16).map(|k| rat((k * 5 % 7) as i64 - 3)).collect()).expect("16 entries")
}
