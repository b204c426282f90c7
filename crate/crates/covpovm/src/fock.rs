//! Truncated Fock-space model of the Heisenberg phase-space representation.
//!
//! The space keeps the first `N` number levels `0..N-1`. Ladder operators,
//! the quadratures `Q = (a + a*)/√2` and `P = (a - a*)/(√2 i)`, and the
//! displacement unitaries `D(p, q) = exp(i(pQ + qP))` all live here.
//!
//! Conventions:
//! * scalar products are linear in the **first** argument;
//! * `D(p, q)` equals the optics displacement `D(α)` with `α = (ip - q)/√2`,
//!   so `D(p, q)|0⟩` is the coherent state of amplitude `α`;
//! * exponentials are taken through the spectral decomposition of the
//!   Hermitian truncated generator, never by truncating the
//!   infinite-dimensional series, so every `D(p, q)` is unitary to
//!   floating-point roundoff. The identity `pQ + qP = s·e^{iθn̂} Q e^{-iθn̂}`
//!   with `s = √(p²+q²)`, `θ = arg(p + iq)` holds entrywise in the
//!   truncation, so one symmetric eigendecomposition of `Q` per dimension
//!   serves every `(p, q)`.
//!
//! Matrix elements that are compared against infinite-dimensional values are
//! only trustworthy on a usable block of roughly the first `N/2` levels;
//! oracles should run at four times the working dimension or more.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncated Fock space holding levels `0..dim-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    /// A space with `dim >= 2` levels.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { min: 2, got: dim });
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Dense complex operator on a truncated Fock space.
///
/// Entries are indexed `(row, column)` with the row the output basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    mat: DMatrix<Complex64>,
}

impl LinearOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Wraps a square matrix with finite entries.
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "operator entries",
            });
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            mat: &self.mat * &rhs.mat,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            mat: &self.mat + &rhs.mat,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            mat: &self.mat - &rhs.mat,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            mat: self.mat.map(|z| z * factor),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        StateVector {
            amp: &self.mat * &v.amp,
        }
    }

    /// Largest entry magnitude, optionally restricted to the top-left
    /// `block × block` corner.
    pub fn max_abs(&self, block: Option<usize>) -> f64 {
        let b = block.unwrap_or(self.dim()).min(self.dim());
        let mut m = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    /// `max_ij |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                d = d.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_part_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()).map(|z| z * Complex64::new(0.5, 0.0));
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// State vector on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amp: DVector<Complex64>,
}

impl StateVector {
    /// The number state `|level⟩`.
    pub fn basis_state(space: FockSpace, level: usize) -> Result<Self> {
        if level >= space.dim() {
            return Err(Error::InvalidDimension {
                min: level + 1,
                got: space.dim(),
            });
        }
        let mut amp = DVector::zeros(space.dim());
        amp[level] = Complex64::new(1.0, 0.0);
        Ok(Self { amp })
    }

    pub fn from_amplitudes(amp: Vec<Complex64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::EmptyInput {
                context: "state amplitudes",
            });
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "state amplitudes",
            });
        }
        Ok(Self {
            amp: DVector::from_vec(amp),
        })
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitude(&self, level: usize) -> Complex64 {
        self.amp[level]
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// Scalar product, linear in `self` (the first argument).
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (a, b) in self.amp.iter().zip(other.amp.iter()) {
            s += a * b.conj();
        }
        s
    }
}

/// Ladder operators and quadratures `(a, a*, Q, P)` on `space`.
///
/// `a` maps level `n` to `√n ·` level `n-1`; `a*` is its adjoint within the
/// truncation. `Q` and `P` are Hermitian exactly. The truncated commutator
/// `[Q, P] - iI` is supported only at the corner entry `(N-1, N-1)` where it
/// equals `-iN`.
pub fn generators(
    space: FockSpace,
) -> (
    LinearOperator,
    LinearOperator,
    LinearOperator,
    LinearOperator,
) {
    let n = space.dim();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &a_dag).map(|z| z * inv_sqrt2);
    let p = (&a - &a_dag).map(|z| z * Complex64::new(0.0, -inv_sqrt2));
    (
        LinearOperator { mat: a },
        LinearOperator { mat: a_dag },
        LinearOperator { mat: q },
        LinearOperator { mat: p },
    )
}

/// Reusable spectral factorization of `Q` powering all displacements on one
/// space. Building it costs one real symmetric eigendecomposition; each
/// displacement afterwards is two real mat-vecs (or mat-muls) plus phases.
#[derive(Debug, Clone)]
pub struct DisplacementEngine {
    dim: usize,
    /// Orthogonal eigenvector matrix of the real symmetric `Q`.
    basis: DMatrix<f64>,
    /// Eigenvalues of `Q` matching `basis` columns.
    spectrum: DVector<f64>,
}

impl DisplacementEngine {
    pub fn new(space: FockSpace) -> Self {
        let n = space.dim();
        let mut q = DMatrix::<f64>::zeros(n, n);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for k in 1..n {
            let v = (k as f64).sqrt() * inv_sqrt2;
            q[(k - 1, k)] = v;
            q[(k, k - 1)] = v;
        }
        let eig = nalgebra::SymmetricEigen::new(q);
        Self {
            dim: n,
            basis: eig.eigenvectors,
            spectrum: eig.eigenvalues,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_args(&self, p: f64, q: f64) -> Result<()> {
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::NonFinite {
                context: "displacement arguments",
            });
        }
        Ok(())
    }

    /// Applies `D(p, q)` to a complex vector without forming the matrix.
    pub fn apply(&self, p: f64, q: f64, vec: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.check_args(p, q)?;
        if vec.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: vec.len(),
                right: self.dim,
            });
        }
        if p == 0.0 && q == 0.0 {
            return Ok(vec.clone());
        }
        let s = p.hypot(q);
        let theta = q.atan2(p);
        let n = self.dim;

        // u = e^{-iθn̂} vec
        let mut u = DVector::<Complex64>::zeros(n);
        for k in 0..n {
            let ph = Complex64::from_polar(1.0, -theta * k as f64);
            u[k] = vec[k] * ph;
        }
        // u = Vᵀ u  (real matrix times complex vector, split parts)
        let ur = u.map(|z| z.re);
        let ui = u.map(|z| z.im);
        let vr = self.basis.tr_mul(&ur);
        let vi = self.basis.tr_mul(&ui);
        for k in 0..n {
            u[k] = Complex64::new(vr[k], vi[k]) * Complex64::from_polar(1.0, s * self.spectrum[k]);
        }
        // u = V u, then restore the number phases
        let ur = u.map(|z| z.re);
        let ui = u.map(|z| z.im);
        let vr = &self.basis * ur;
        let vi = &self.basis * ui;
        let mut out = DVector::<Complex64>::zeros(n);
        for k in 0..n {
            out[k] = Complex64::new(vr[k], vi[k]) * Complex64::from_polar(1.0, theta * k as f64);
        }
        Ok(out)
    }

    /// The full matrix of `D(p, q)`.
    pub fn matrix(&self, p: f64, q: f64) -> Result<LinearOperator> {
        self.check_args(p, q)?;
        let n = self.dim;
        if p == 0.0 && q == 0.0 {
            return Ok(LinearOperator::identity(n));
        }
        let s = p.hypot(q);
        let theta = q.atan2(p);
        // core = V diag(e^{i s λ}) Vᵀ
        let mut scaled = DMatrix::<Complex64>::zeros(n, n);
        for k in 0..n {
            let e = Complex64::from_polar(1.0, s * self.spectrum[k]);
            for i in 0..n {
                scaled[(i, k)] = e * self.basis[(i, k)];
            }
        }
        let vt = self.basis.map(|x| Complex64::new(x, 0.0)).transpose();
        let mut core = scaled * vt;
        // number phases: D_ij = e^{iθi} core_ij e^{-iθj}
        for i in 0..n {
            for j in 0..n {
                let ph = Complex64::from_polar(1.0, theta * (i as f64 - j as f64));
                core[(i, j)] *= ph;
            }
        }
        Ok(LinearOperator { mat: core })
    }
}

/// The displacement unitary `exp(i(pQ + qP))` on `space`.
pub fn displacement(space: FockSpace, p: f64, q: f64) -> Result<LinearOperator> {
    DisplacementEngine::new(space).matrix(p, q)
}

/// Coherent state `D(p, q)|0⟩` of amplitude `α = (ip - q)/√2`.
pub fn coherent_state(space: FockSpace, p: f64, q: f64) -> Result<StateVector> {
    let engine = DisplacementEngine::new(space);
    let vacuum = StateVector::basis_state(space, 0)?;
    let amp = engine.apply(p, q, vacuum.amplitudes())?;
    Ok(StateVector { amp })
}

/// Heisenberg group element `(p, q, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergElement {
    pub p: f64,
    pub q: f64,
    pub t: f64,
}

impl HeisenbergElement {
    pub fn new(p: f64, q: f64, t: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && t.is_finite()) {
            return Err(Error::NonFinite {
                context: "Heisenberg element coordinates",
            });
        }
        Ok(Self { p, q, t })
    }

    pub fn identity() -> Self {
        Self {
            p: 0.0,
            q: 0.0,
            t: 0.0,
        }
    }

    /// Group law `(p,q,t)(p',q',t') = (p+p', q+q', t+t'+(pq'-qp')/2)`.
    pub fn compose(self, other: Self) -> Self {
        Self {
            p: self.p + other.p,
            q: self.q + other.q,
            t: self.t + other.t + 0.5 * (self.p * other.q - self.q * other.p),
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            p: -self.p,
            q: -self.q,
            t: -self.t,
        }
    }
}

/// Free-function form of [`HeisenbergElement::compose`].
pub fn heisenberg_compose(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement {
    g.compose(h)
}
