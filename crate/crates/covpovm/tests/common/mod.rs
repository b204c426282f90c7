//! Shared oracles for integration tests.
//!
//! The displacement oracle exponentiates the generator by plain scaling and
//! squaring of the power series. It never touches the spectral route the
//! library uses, so agreement between the two is a genuine cross-check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use covpovm::fock::{generators, FockSpace};

/// `exp(i(pQ + qP))` on `dim` levels through the scaled Taylor series.
pub fn series_displacement(dim: usize, p: f64, q: f64) -> DMatrix<Complex64> {
    let space = FockSpace::new(dim).unwrap();
    let (_, _, qop, pop) = generators(space);
    let gen = qop.matrix().map(|z| z * Complex64::new(0.0, p))
        + pop.matrix().map(|z| z * Complex64::new(0.0, q));

    // scale so the series converges fast, then square back
    let norm_est: f64 = gen
        .column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm_est > 0.5 {
        (norm_est / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = gen.map(|z| z / 2f64.powi(squarings as i32));

    let mut result = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..200 {
        term = (&term * &scaled).map(|z| z / k as f64);
        result += &term;
        let worst = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if worst < 1e-30 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Largest entry difference on the top-left `block × block` corner.
pub fn block_max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, block: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}
