//! Group-agnostic POVM bookkeeping: density-operator validation with cached
//! spectral data, Hermiticity/positivity reports, the sampled injectivity
//! separation of `T ↦ Q_T`, and the normalization-defect measurement.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::LinearOperator;
use crate::heisenberg::{povm_element, PhaseSpaceRegion, QuadratureSpec, Rect};

/// Eigenvalues at or below this are dropped from spectral sums. Small enough
/// that the dropped mass stays orders of magnitude under every tolerance in
/// the crate, large enough to skip the exact zeros of projectors.
pub(crate) const EIGENVALUE_CUTOFF: f64 = 1e-14;

/// A validated positive trace-one operator with cached eigendecomposition.
///
/// The stored entries are the Hermitization `(A + A†)/2` of the input, so
/// re-validating a `DensityOperator`'s entries is a fixed point. Eigenvalues
/// within the clamp tolerance below zero are clamped to zero; the clamped
/// magnitude is recorded.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<DVector<Complex64>>,
    clamped: f64,
}

impl DensityOperator {
    /// Validates `entries` as a density operator at tolerance `tol`.
    ///
    /// Rejects non-square input, Hermiticity defect above `tol`, trace
    /// further than `tol` from one, and eigenvalues below `-tol`.
    pub fn validate(entries: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let op = LinearOperator::from_matrix(entries)?;
        let herm_defect = op.hermiticity_defect();
        if herm_defect > tol {
            return Err(Error::HermiticityDefect {
                defect: herm_defect,
                tol,
            });
        }
        let trace = op.trace();
        let trace_defect = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_defect > tol {
            return Err(Error::TraceDefect {
                defect: trace_defect,
                tol,
            });
        }
        let herm = (op.matrix() + op.matrix().adjoint()).map(|z| z * 0.5);
        let eig = nalgebra::SymmetricEigen::new(herm.clone());
        let mut clamped = 0.0f64;
        let mut eigenvalues = Vec::with_capacity(herm.nrows());
        for &lam in eig.eigenvalues.iter() {
            if lam < -tol {
                return Err(Error::NegativeEigenvalue {
                    eigenvalue: lam,
                    tol,
                });
            }
            if lam < 0.0 {
                clamped = clamped.max(-lam);
                eigenvalues.push(0.0);
            } else {
                eigenvalues.push(lam);
            }
        }
        let eigenvectors = (0..herm.ncols())
            .map(|k| eig.eigenvectors.column(k).into_owned())
            .collect();
        Ok(Self {
            mat: herm,
            eigenvalues,
            eigenvectors,
            clamped,
        })
    }

    /// Projector onto the lowest number state.
    pub fn vacuum_projector(dim: usize) -> Result<Self> {
        Self::fock_projector(dim, 0)
    }

    /// Projector onto number state `level`.
    pub fn fock_projector(dim: usize, level: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { min: 2, got: dim });
        }
        if level >= dim {
            return Err(Error::InvalidDimension {
                min: level + 1,
                got: dim,
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(level, level)] = Complex64::new(1.0, 0.0);
        Self::validate(m, 1e-12)
    }

    /// Diagonal mixture over the lowest levels; weights are normalized to
    /// sum to one.
    pub fn mixed_diagonal(dim: usize, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.len() > dim {
            return Err(Error::InvalidDimension {
                min: weights.len().max(1),
                got: dim,
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidValue {
                context: "mixture weight",
                value: *weights
                    .iter()
                    .find(|w| !w.is_finite() || **w < 0.0)
                    .unwrap(),
            });
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidValue {
                context: "mixture weight sum",
                value: total,
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (k, w) in weights.iter().enumerate() {
            m[(k, k)] = Complex64::new(w / total, 0.0);
        }
        Self::validate(m, 1e-12)
    }

    /// Rank-one density `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(state: &crate::fock::StateVector) -> Result<Self> {
        let n = state.dim();
        let nrm = state.norm();
        if nrm == 0.0 {
            return Err(Error::InvalidValue {
                context: "pure-state norm",
                value: 0.0,
            });
        }
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = state.amplitude(i) * state.amplitude(j).conj() / (nrm * nrm);
            }
        }
        Self::validate(m, 1e-10)
    }

    /// Haar-generic random density of the given rank (Ginibre construction).
    pub fn random<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Result<Self> {
        if dim < 2 || rank == 0 || rank > dim {
            return Err(Error::InvalidDimension { min: 2, got: dim });
        }
        let mut g = DMatrix::<Complex64>::zeros(dim, rank);
        for i in 0..dim {
            for j in 0..rank {
                g[(i, j)] = Complex64::new(standard_normal(rng), standard_normal(rng));
            }
        }
        let t = &g * g.adjoint();
        let tr = t.trace().re;
        Self::validate(t.map(|z| z / tr), 1e-8)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Clamped eigenvalues, ascending order not guaranteed.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &DVector<Complex64> {
        &self.eigenvectors[k]
    }

    /// Largest negative-eigenvalue magnitude clamped during validation.
    pub fn clamp_magnitude(&self) -> f64 {
        self.clamped
    }

    /// Spectral terms `(λ, v)` with `λ` above the internal cutoff.
    pub(crate) fn spectral_terms(&self) -> impl Iterator<Item = (f64, &DVector<Complex64>)> {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors.iter())
            .filter(|(lam, _)| **lam > EIGENVALUE_CUTOFF)
            .map(|(lam, v)| (*lam, v))
    }

    /// Trace distance `‖T₁ - T₂‖₁ / 2`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let diff = &self.mat - &other.mat;
        let eig = nalgebra::SymmetricEigen::new(diff);
        Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }
}

#[cfg(test)]
pub(crate) fn seeded_rng(seed: u64) -> impl Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}

/// Box–Muller standard normal sample.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.random();
        if u1 > f64::MIN_POSITIVE {
            let u2: f64 = rng.random();
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

/// Outcome of a Hermiticity / positivity / trace check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub trace_defect: f64,
    pub passed: bool,
}

/// Reports the Hermiticity defect, the minimum eigenvalue of the Hermitian
/// part, and the trace defect against `trace_target`. Never fails; `passed`
/// holds when all three stay within `tol` (eigenvalues may undershoot zero
/// by at most `tol`).
pub fn psd_hermiticity_report(op: &LinearOperator, trace_target: f64, tol: f64) -> CheckReport {
    let hermiticity_defect = op.hermiticity_defect();
    let eigenvalues = op.hermitian_part_eigenvalues();
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let trace_defect = (op.trace() - Complex64::new(trace_target, 0.0)).norm();
    CheckReport {
        hermiticity_defect,
        min_eigenvalue,
        trace_defect,
        passed: hermiticity_defect <= tol && min_eigenvalue >= -tol && trace_defect <= tol,
    }
}

/// Largest pointwise outcome-density separation between `t1` and `t2` over
/// the supplied probe states and phase-space points.
///
/// Zero exactly when the sampled densities agree; a positive lower bound on
/// it witnesses `Q_{T₁} ≠ Q_{T₂}`.
pub fn povm_sup_distance(
    t1: &DensityOperator,
    t2: &DensityOperator,
    probes: &[DensityOperator],
    sample_points: &[(f64, f64)],
) -> Result<f64> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch {
            left: t1.dim(),
            right: t2.dim(),
        });
    }
    if probes.is_empty() {
        return Err(Error::EmptyInput { context: "probes" });
    }
    if sample_points.is_empty() {
        return Err(Error::EmptyInput {
            context: "sample points",
        });
    }
    let engine = crate::fock::DisplacementEngine::new(crate::fock::FockSpace::new(t1.dim())?);
    let mut sup = 0.0f64;
    for &(p, q) in sample_points {
        for rho in probes {
            let d1 = outcome_density_with_engine(&engine, t1, rho, p, q)?;
            let d2 = outcome_density_with_engine(&engine, t2, rho, p, q)?;
            sup = sup.max((d1 - d2).abs());
        }
    }
    Ok(sup)
}

pub(crate) fn outcome_density_with_engine(
    engine: &crate::fock::DisplacementEngine,
    t: &DensityOperator,
    rho: &DensityOperator,
    p: f64,
    q: f64,
) -> Result<f64> {
    if t.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: rho.dim(),
        });
    }
    let mut total = 0.0f64;
    for (mu, tv) in t.spectral_terms() {
        let displaced = engine.apply(p, q, tv)?;
        for (nu, rv) in rho.spectral_terms() {
            let mut overlap = Complex64::new(0.0, 0.0);
            for k in 0..displaced.len() {
                overlap += rv[k].conj() * displaced[k];
            }
            total += mu * nu * overlap.norm_sqr();
        }
    }
    Ok(total / (2.0 * std::f64::consts::PI))
}

/// Deviation of `Q_T` from the identity on the low number-state block,
/// measured over the centered square of half-width `box_half_width`.
///
/// Returns `max_{n < low_block} |⟨n|Q|n⟩ - 1|` plus the largest off-diagonal
/// magnitude on that block. `low_block` must not exceed half the dimension.
pub fn normalization_defect(
    t: &DensityOperator,
    box_half_width: f64,
    low_block: usize,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if low_block == 0 || 2 * low_block > t.dim() {
        return Err(Error::InvalidValue {
            context: "low_block must be positive and at most half the dimension",
            value: low_block as f64,
        });
    }
    if !box_half_width.is_finite() || box_half_width < 0.0 {
        return Err(Error::InvalidValue {
            context: "box_half_width",
            value: box_half_width,
        });
    }
    let r = box_half_width;
    let region = PhaseSpaceRegion::rectangle(Rect::new(-r, r, -r, r)?);
    let q = povm_element(t, &region, quad)?;
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..low_block {
        diag = diag.max((q.entry(i, i) - Complex64::new(1.0, 0.0)).norm());
        for j in 0..low_block {
            if i != j {
                off = off.max(q.entry(i, j).norm());
            }
        }
    }
    Ok(diag + off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn proj(dim: usize, level: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(dim, dim);
        m[(level, level)] = Complex64::new(1.0, 0.0);
        m
    }

    #[test]
    fn validates_vacuum_projector() {
        let d = DensityOperator::validate(proj(4, 0), 1e-10).unwrap();
        let mut ev = d.eigenvalues().to_vec();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[3], 1.0, epsilon = 1e-12);
        assert!(ev[..3].iter().all(|l| l.abs() <= 1e-12));
        assert_eq!(d.clamp_magnitude(), 0.0);
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = proj(4, 0).map(|z| z * 0.9);
        match DensityOperator::validate(m, 1e-6) {
            Err(Error::TraceDefect { defect, .. }) => {
                assert_abs_diff_eq!(defect, 0.1, epsilon = 1e-12)
            }
            other => panic!("expected trace defect, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.001, 0.0);
        m[(1, 1)] = Complex64::new(-0.001, 0.0);
        assert!(matches!(
            DensityOperator::validate(m, 1e-6),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = proj(2, 0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            DensityOperator::validate(m, 1e-8),
            Err(Error::HermiticityDefect { .. })
        ));
    }

    #[test]
    fn clamps_tiny_negative_eigenvalues() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0 + 1e-12, 0.0);
        m[(1, 1)] = Complex64::new(-1e-12, 0.0);
        let d = DensityOperator::validate(m, 1e-10).unwrap();
        assert!(d.eigenvalues().iter().all(|l| *l >= 0.0));
        assert!(d.clamp_magnitude() > 0.0 && d.clamp_magnitude() <= 1e-10);
    }

    #[test]
    fn validation_is_idempotent() {
        let mut rng = seeded_rng(5);
        let d = DensityOperator::random(6, 6, &mut rng).unwrap();
        let again = DensityOperator::validate(d.matrix().clone(), 1e-10).unwrap();
        let mut worst = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                worst = worst.max((d.entry(i, j) - again.entry(i, j)).norm());
            }
        }
        assert!(worst <= 1e-15);
    }

    #[test]
    fn report_examples() {
        let id = LinearOperator::identity(3);
        let rep = psd_hermiticity_report(&id, 3.0, 1e-12);
        assert!(rep.passed);
        assert_abs_diff_eq!(rep.min_eigenvalue, 1.0, epsilon = 1e-12);

        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(-1e-3, 0.0);
        let bad = LinearOperator::from_matrix(m).unwrap();
        let rep = psd_hermiticity_report(&bad, 1.0 - 1e-3, 1e-6);
        assert!(!rep.passed);
        assert_abs_diff_eq!(rep.min_eigenvalue, -1e-3, epsilon = 1e-12);
    }

    #[test]
    fn sup_distance_separates_vacuum_from_fock1() {
        let t1 = DensityOperator::vacuum_projector(8).unwrap();
        let t2 = DensityOperator::fock_projector(8, 1).unwrap();
        let probe = DensityOperator::vacuum_projector(8).unwrap();
        let d = povm_sup_distance(&t1, &t2, &[probe], &[(0.0, 0.0)]).unwrap();
        assert!(d >= 1.0 / (2.0 * std::f64::consts::PI) - 1e-12);
    }

    #[test]
    fn sup_distance_zero_and_symmetric() {
        let mut rng = seeded_rng(11);
        let t1 = DensityOperator::random(5, 3, &mut rng).unwrap();
        let t2 = DensityOperator::random(5, 5, &mut rng).unwrap();
        let probes = vec![DensityOperator::vacuum_projector(5).unwrap()];
        let pts = vec![(0.0, 0.0), (1.0, -0.5)];
        assert_eq!(
            povm_sup_distance(&t1, &t1, &probes, &pts).unwrap(),
            0.0,
            "identical operators must give zero"
        );
        let ab = povm_sup_distance(&t1, &t2, &probes, &pts).unwrap();
        let ba = povm_sup_distance(&t2, &t1, &probes, &pts).unwrap();
        assert_abs_diff_eq!(ab, ba, epsilon = 1e-15);
    }

    #[test]
    fn normalization_defect_zero_radius_is_one() {
        let t = DensityOperator::vacuum_projector(8).unwrap();
        let quad = QuadratureSpec::gauss_legendre(16, 16, Rect::new(0.0, 0.0, 0.0, 0.0).unwrap());
        let d = normalization_defect(&t, 0.0, 2, &quad).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn normalization_rejects_large_block() {
        let t = DensityOperator::vacuum_projector(8).unwrap();
        let quad = QuadratureSpec::gauss_legendre(8, 8, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap());
        assert!(normalization_defect(&t, 1.0, 5, &quad).is_err());
    }
}
