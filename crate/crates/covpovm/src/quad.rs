//! One-dimensional quadrature rules and the deterministic parallel reduction
//! used by every quadrature loop in the crate.
//!
//! Gauss–Legendre nodes come from the Golub–Welsch eigenvalue method: the
//! nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
//! the Legendre recurrence and the weights are `2 v0²` for the normalized
//! eigenvectors. Trapezoid nodes are uniform and include both endpoints.

use nalgebra::DMatrix;

/// Nodes and matching weights of a 1-D rule on some interval.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre rule with `n` nodes on `[lo, hi]`.
///
/// Exact for polynomials of degree `2n - 1`; weights sum to `hi - lo`
/// up to rounding. A degenerate interval (`hi == lo`) yields zero weights.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Rule1d {
    let (xs, ws) = gauss_legendre_reference(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Rule1d {
        nodes: xs.iter().map(|x| mid + half * x).collect(),
        weights: ws.iter().map(|w| half * w).collect(),
    }
}

/// Composite trapezoid rule with `n >= 2` uniform nodes on `[lo, hi]`,
/// endpoints included with half weight.
pub fn trapezoid(n: usize, lo: f64, hi: f64) -> Rule1d {
    assert!(n >= 2, "trapezoid rule needs at least 2 nodes");
    let h = (hi - lo) / (n - 1) as f64;
    let nodes = (0..n).map(|k| lo + h * k as f64).collect();
    let mut weights = vec![h; n];
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
    Rule1d { nodes, weights }
}

/// Reference Gauss–Legendre nodes/weights on `[-1, 1]`, ascending nodes.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    // Jacobi matrix of the Legendre three-term recurrence.
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let beta = kf / (4.0 * kf * kf - 1.0).sqrt();
        jac[(k - 1, k)] = beta;
        jac[(k, k - 1)] = beta;
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let nodes = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let weights = order
        .iter()
        .map(|&i| {
            let v0 = eig.eigenvectors[(0, i)];
            2.0 * v0 * v0
        })
        .collect();
    (nodes, weights)
}

/// Fixed chunk length of the ordered reduction. Partial sums are taken over
/// consecutive index chunks of this length and then combined in chunk order,
/// so results are bit-identical for any worker count, including one.
pub const REDUCTION_CHUNK: usize = 64;

/// Deterministic parallel sum over the index range `0..n`.
///
/// `fill` accumulates the terms of one chunk into a fresh accumulator in
/// ascending index order; partials are combined in ascending chunk order.
pub fn reduce_indexed<T, M, F, C>(n: usize, make: M, fill: F, combine: C) -> T
where
    T: Send,
    M: Fn() -> T + Sync,
    F: Fn(&mut T, std::ops::Range<usize>) + Sync,
    C: Fn(&mut T, T),
{
    use rayon::prelude::*;
    let ranges: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(REDUCTION_CHUNK)
        .map(|start| start..usize::min(start + REDUCTION_CHUNK, n))
        .collect();
    let partials: Vec<T> = ranges
        .into_par_iter()
        .map(|r| {
            let mut acc = make();
            fill(&mut acc, r);
            acc
        })
        .collect();
    let mut total = make();
    for p in partials {
        combine(&mut total, p);
    }
    total
}
