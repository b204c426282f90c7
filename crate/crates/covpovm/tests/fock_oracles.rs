//! Displacement and coherent-state checks against the independent
//! power-series oracle, run at four times the working dimension.

mod common;

use common::{block_max_diff, series_displacement};
use num_complex::Complex64;

use covpovm::fock::{coherent_state, displacement, DisplacementEngine, FockSpace};

#[test]
fn displacement_matches_series_oracle_on_usable_block() {
    // oracle at 4x the working dimension; compare the top-left N/2 block
    let n = 32;
    let d = displacement(FockSpace::new(n).unwrap(), 1.0, 0.0).unwrap();
    let oracle = series_displacement(4 * n, 1.0, 0.0);
    let diff = block_max_diff(&oracle.view((0, 0), (n, n)).into_owned(), d.matrix(), n / 2);
    assert!(diff <= 1e-12, "block diff {diff}");
    // and the closed form for the corner entry
    assert!((d.entry(0, 0).re - (-0.25f64).exp()).abs() <= 1e-13);
}

#[test]
fn displacement_matches_series_oracle_generic_argument() {
    // displacement modulus ~1.5 spreads amplitude toward level N/2; the
    // usable block agrees with the oracle to truncation accuracy
    let n = 32;
    let d = displacement(FockSpace::new(n).unwrap(), -0.8, 1.3).unwrap();
    let oracle = series_displacement(4 * n, -0.8, 1.3);
    let diff = block_max_diff(&oracle.view((0, 0), (n, n)).into_owned(), d.matrix(), n / 2);
    assert!(diff <= 1e-11, "block diff {diff}");
}

#[test]
fn coherent_amplitudes_match_series_oracle() {
    // alpha = (ip - q)/sqrt(2) = 1 for (p, q) = (0, -sqrt(2))
    let n = 64;
    let c = coherent_state(FockSpace::new(n).unwrap(), 0.0, -std::f64::consts::SQRT_2).unwrap();
    let oracle = series_displacement(256, 0.0, -std::f64::consts::SQRT_2);
    for level in 0..n / 2 {
        let expect = oracle[(level, 0)];
        let got = c.amplitude(level);
        assert!(
            (got - expect).norm() <= 1e-12,
            "level {level}: {got} vs oracle {expect}"
        );
    }
    assert!((c.norm() - 1.0).abs() <= 1e-12);
}

#[test]
fn unitarity_over_argument_sweep() {
    // |p|, |q| up to 8 across dimensions including a large space
    for n in [2usize, 32, 256] {
        let engine = DisplacementEngine::new(FockSpace::new(n).unwrap());
        for (p, q) in [(8.0, 8.0), (-8.0, 3.0), (0.1, -0.1), (5.5, -7.5)] {
            let d = engine.matrix(p, q).unwrap();
            let defect = d
                .mul(&d.adjoint())
                .sub(&covpovm::fock::LinearOperator::identity(n))
                .max_abs(None);
            assert!(defect <= 1e-10, "N={n} (p,q)=({p},{q}) defect {defect}");
        }
    }
}

#[test]
fn composition_law_up_to_phase() {
    // D(p1,q1) D(p2,q2) = e^{-i(p1 q2 - q1 p2)/2} D(p1+p2, q1+q2)
    // on the usable block, small arguments, N = 64.
    let n = 64;
    let engine = DisplacementEngine::new(FockSpace::new(n).unwrap());
    for (p1, q1, p2, q2) in [
        (1.0, 0.0, 0.0, 1.0),
        (0.5, -0.5, 0.25, 0.75),
        (-1.0, 1.0, 1.0, -0.3),
        (0.9, 0.2, -0.6, -0.8),
    ] {
        let left = engine
            .matrix(p1, q1)
            .unwrap()
            .mul(&engine.matrix(p2, q2).unwrap());
        let phase = Complex64::from_polar(1.0, -(p1 * q2 - q1 * p2) / 2.0);
        let right = engine.matrix(p1 + p2, q1 + q2).unwrap().scale(phase);
        let diff = block_max_diff(left.matrix(), right.matrix(), n / 2);
        assert!(diff <= 5e-6, "composition residual {diff}");
    }
}

#[test]
fn coherent_overlap_gaussian_law() {
    // |<coh(p,q), coh(p',q')>|^2 = exp(-((p-p')^2 + (q-q')^2)/2)
    let space = FockSpace::new(64).unwrap();
    for (p1, q1, p2, q2) in [
        (0.0, 0.0, 1.0, 1.0),
        (2.0, 0.0, 0.0, -2.0),
        (-1.5, 0.5, 0.5, 1.5),
        (0.3, -1.9, -0.2, 0.1),
    ] {
        let a = coherent_state(space, p1, q1).unwrap();
        let b = coherent_state(space, p2, q2).unwrap();
        let got = a.inner(&b).norm_sqr();
        let expect = (-((p1 - p2).powi(2) + (q1 - q2).powi(2)) / 2.0).exp();
        assert!(
            (got - expect).abs() <= 1e-8,
            "overlap {got} vs {expect} for ({p1},{q1})-({p2},{q2})"
        );
    }
}
