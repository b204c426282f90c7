//! Discretized model of the `ax+b` group acting on the half-line.
//!
//! The group is `{(b, a) : b ∈ ℝ, a > 0}` with law `(b,a)(b',a') =
//! (b + ab', aa')`, left Haar measure `a⁻² db da` and modular function
//! `Δ(b,a) = 1/a`. It acts on `L²((0,∞), dx)` through
//!
//! ```text
//! [π⁺(b,a) f](x) = a^{1/2} e^{2πibx} f(ax)
//! ```
//!
//! The carrier is a geometric grid `x_k = x_min·ratio^k` with weights
//! `w_k = x_k·ln ratio`, so a dilation by `ratio^m` acts by an exact index
//! shift — dilation covariance is tested free of resampling error, and
//! dilations that are not integer powers of the ratio are rejected rather
//! than interpolated.
//!
//! The positive multiplier entering the covariant construction (the square
//! root of the formal degree in the Duflo–Moore orthogonality relations) is
//! multiplication by `x^{1/2}` here: it is the unique power satisfying both
//! `π⁺(g)C = Δ(g)^{-1/2} C π⁺(g)` and the isometry normalization
//! `∫_G |⟨u, π⁺(g)Cv⟩|² dμ_G = ‖u‖²‖v‖²` under the conventions above, both
//! of which the test suite checks numerically.
//!
//! Modulations `e^{2πibx}` are resolvable only while the phase advances less
//! than a quarter cycle between neighbouring nodes of the supports involved;
//! group quadratures reject windows beyond that bound.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{reduce_indexed, trapezoid, Rule1d};

/// Element `(b, a)` of the `ax+b` group, `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElement {
    pub b: f64,
    pub a: f64,
}

impl AffineElement {
    pub fn new(b: f64, a: f64) -> Result<Self> {
        if !b.is_finite() || !a.is_finite() {
            return Err(Error::NonFinite {
                context: "affine element coordinates",
            });
        }
        if a <= 0.0 {
            return Err(Error::InvalidValue {
                context: "affine dilation must be positive",
                value: a,
            });
        }
        Ok(Self { b, a })
    }

    pub fn identity() -> Self {
        Self { b: 0.0, a: 1.0 }
    }

    /// Group law `(b,a)(b',a') = (b + ab', aa')`.
    pub fn compose(self, other: Self) -> Self {
        Self {
            b: self.b + self.a * other.b,
            a: self.a * other.a,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            b: -self.b / self.a,
            a: 1.0 / self.a,
        }
    }

    /// Left Haar density `a⁻²` at this element.
    pub fn haar_density(self) -> f64 {
        1.0 / (self.a * self.a)
    }

    /// Modular function `Δ(b, a) = 1/a`.
    pub fn modular(self) -> f64 {
        1.0 / self.a
    }
}

/// Free-function form of [`AffineElement::compose`].
pub fn affine_compose(g: AffineElement, h: AffineElement) -> AffineElement {
    g.compose(h)
}

/// Haar density and modular function `(a⁻², 1/a)` of an element.
pub fn haar_and_modular(g: AffineElement) -> (f64, f64) {
    (g.haar_density(), g.modular())
}

/// Geometric discretization of the half-line: `x_k = x_min·ratio^k`,
/// quadrature weights `w_k = x_k·ln ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineGrid {
    x_min: f64,
    ratio: f64,
    count: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HalfLineGrid {
    pub fn geometric(x_min: f64, ratio: f64, count: usize) -> Result<Arc<Self>> {
        if !(x_min.is_finite() && ratio.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid parameters",
            });
        }
        if x_min <= 0.0 {
            return Err(Error::InvalidValue {
                context: "grid x_min must be positive",
                value: x_min,
            });
        }
        if ratio <= 1.0 {
            return Err(Error::InvalidValue {
                context: "grid ratio must exceed 1",
                value: ratio,
            });
        }
        if count < 8 {
            return Err(Error::InvalidDimension { min: 8, got: count });
        }
        let ln_ratio = ratio.ln();
        let nodes: Vec<f64> = (0..count).map(|k| x_min * ratio.powi(k as i32)).collect();
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid nodes overflow",
            });
        }
        let weights = nodes.iter().map(|x| x * ln_ratio).collect();
        Ok(Arc::new(Self {
            x_min,
            ratio,
            count,
            nodes,
            weights,
        }))
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn node(&self, k: usize) -> f64 {
        self.nodes[k]
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integer `m` with `a = ratio^m` to relative accuracy `1e-9`, or an
    /// error naming the nearest compatible dilation.
    pub fn dilation_steps(&self, a: f64) -> Result<i64> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::InvalidValue {
                context: "dilation must be positive and finite",
                value: a,
            });
        }
        let m = (a.ln() / self.ratio.ln()).round();
        let nearest = self.ratio.powf(m);
        if ((a - nearest) / nearest).abs() > 1e-9 {
            return Err(Error::IncompatibleDilation {
                requested: a,
                nearest,
            });
        }
        Ok(m as i64)
    }

    /// Largest inter-node spacing over node indices `lo..=hi`.
    pub fn max_spacing(&self, lo: usize, hi: usize) -> f64 {
        let hi = hi.min(self.count - 1);
        let mut m: f64 = 0.0;
        for k in lo..hi {
            m = m.max(self.nodes[k + 1] - self.nodes[k]);
        }
        // a single node still spans its local cell
        if lo >= hi {
            let k = lo.min(self.count - 2);
            m = self.nodes[k + 1] - self.nodes[k];
        }
        m
    }
}

/// Largest modulation `|b|` the grid resolves over the union of the supports
/// of `funcs` (at most a quarter cycle of phase advance between neighbouring
/// nodes). Functions with empty support impose no constraint; if all are
/// empty the bound is infinite.
pub fn modulation_bound(grid: &HalfLineGrid, funcs: &[&SampledFunction]) -> f64 {
    let mut lo = usize::MAX;
    let mut hi = 0usize;
    for f in funcs {
        if let Some((a, b)) = f.support_range() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo == usize::MAX {
        return f64::INFINITY;
    }
    1.0 / (4.0 * grid.max_spacing(lo, hi))
}

/// Complex function sampled on a [`HalfLineGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Arc<HalfLineGrid>,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn zeros(grid: Arc<HalfLineGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_values(grid: Arc<HalfLineGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: grid.len(),
            });
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "sampled values",
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<HalfLineGrid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::from_values(grid, values)
    }

    /// Smooth compactly supported bump: `exp(-1/(1-t²))` on `|t| < 1` with
    /// `t = ln(x/center)/half_width`, normalized to unit norm.
    pub fn bump(grid: Arc<HalfLineGrid>, center_x: f64, half_width_ln: f64) -> Result<Self> {
        if !(center_x.is_finite() && half_width_ln.is_finite())
            || center_x <= 0.0
            || half_width_ln <= 0.0
        {
            return Err(Error::InvalidValue {
                context: "bump parameters must be positive",
                value: if center_x <= 0.0 {
                    center_x
                } else {
                    half_width_ln
                },
            });
        }
        let raw = Self::from_fn(grid, |x| {
            let t = (x / center_x).ln() / half_width_ln;
            if t.abs() < 1.0 {
                Complex64::new((-1.0 / (1.0 - t * t)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })?;
        raw.normalized()
    }

    pub fn grid(&self) -> &Arc<HalfLineGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Squared norm `Σ_k w_k |f_k|²`.
    pub fn norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(z, w)| w * z.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Scalar product `Σ_k w_k f_k conj(h_k)`, linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.values.len(), other.values.len());
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..self.values.len() {
            s += self.grid.weights()[k] * self.values[k] * other.values[k].conj();
        }
        s
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidValue {
                context: "cannot normalize the zero function",
                value: 0.0,
            });
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_grid(self, other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// First and last node indices carrying a nonzero value.
    pub fn support_range(&self) -> Option<(usize, usize)> {
        let lo = self.values.iter().position(|z| z.norm_sqr() > 0.0)?;
        let hi = self.values.iter().rposition(|z| z.norm_sqr() > 0.0)?;
        Some((lo, hi))
    }

    /// Fraction of the squared norm carried by the lowest and highest
    /// sixteenth of the grid. A large value flags mass parked against an
    /// edge, where the half-line model truncates.
    pub fn edge_mass(&self) -> (f64, f64) {
        let total = self.norm_sq();
        if total == 0.0 {
            return (0.0, 0.0);
        }
        let band = (self.grid.len() / 16).max(1);
        let low: f64 = (0..band)
            .map(|k| self.grid.weights()[k] * self.values[k].norm_sqr())
            .sum();
        let high: f64 = (self.grid.len() - band..self.grid.len())
            .map(|k| self.grid.weights()[k] * self.values[k].norm_sqr())
            .sum();
        (low / total, high / total)
    }
}

fn same_grid(a: &SampledFunction, b: &SampledFunction) -> Result<()> {
    if Arc::ptr_eq(&a.grid, &b.grid) || a.grid == b.grid {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Raw `π⁺` action with a dilation given directly in grid steps.
/// `out_k = ratio^{m/2} e^{2πib x_k} f_{k+m}`, zero-filled at the edges.
fn pi_plus_raw(grid: &HalfLineGrid, b: f64, m: i64, values: &[Complex64]) -> Vec<Complex64> {
    let n = grid.len() as i64;
    let sqrt_a = grid.ratio().powf(0.5 * m as f64);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for k in 0..n {
        let src = k + m;
        if src < 0 || src >= n {
            continue;
        }
        let phase =
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * b * grid.node(k as usize));
        out[k as usize] = sqrt_a * phase * values[src as usize];
    }
    out
}

/// Applies `π⁺(g)` to `f`, returning the result and the fraction of squared
/// norm lost off the grid edges (zero for interior-supported `f`).
///
/// The dilation must be a grid-compatible power of the ratio.
pub fn apply_pi_plus_with_loss(
    g: AffineElement,
    f: &SampledFunction,
) -> Result<(SampledFunction, f64)> {
    let m = f.grid.dilation_steps(g.a)?;
    let out_values = pi_plus_raw(&f.grid, g.b, m, &f.values);
    let out = SampledFunction {
        grid: Arc::clone(&f.grid),
        values: out_values,
    };
    // mass of the source samples that have no destination node
    let n = f.grid.len() as i64;
    let mut dropped = 0.0;
    for j in 0..n {
        let dest = j - m;
        if dest < 0 || dest >= n {
            dropped += f.grid.weight(j as usize) * f.values[j as usize].norm_sqr();
        }
    }
    let before = f.norm_sq();
    let loss = if before == 0.0 { 0.0 } else { dropped / before };
    Ok((out, loss))
}

/// Applies `π⁺(g)` to `f`, rejecting support loss above `max_support_loss`.
pub fn apply_pi_plus(
    g: AffineElement,
    f: &SampledFunction,
    max_support_loss: f64,
) -> Result<SampledFunction> {
    let (out, loss) = apply_pi_plus_with_loss(g, f)?;
    if loss > max_support_loss {
        return Err(Error::SupportLoss {
            lost: loss,
            allowed: max_support_loss,
        });
    }
    Ok(out)
}

/// Multiplies by `x^{1/2}` — the square root of the formal degree entering
/// the covariant construction. Self-adjoint and positive; satisfies
/// `π⁺(g) ∘ this = Δ(g)^{-1/2} · this ∘ π⁺(g)` exactly on the grid.
pub fn apply_formal_degree_root(f: &SampledFunction) -> SampledFunction {
    let values = f
        .values
        .iter()
        .zip(f.grid.nodes())
        .map(|(z, x)| z * x.sqrt())
        .collect();
    SampledFunction {
        grid: Arc::clone(&f.grid),
        values,
    }
}

/// Matrix coefficient `(W_{Cη}v)(g) = ⟨v, π⁺(g) C η⟩` of the wavelet
/// operator attached to `Cη`. Sesquilinear: linear in `v`, conjugate-linear
/// in `eta`.
pub fn wavelet_coefficient(
    v: &SampledFunction,
    eta: &SampledFunction,
    g: AffineElement,
) -> Result<Complex64> {
    same_grid(v, eta)?;
    let weighted = apply_formal_degree_root(eta);
    let (moved, _loss) = apply_pi_plus_with_loss(g, &weighted)?;
    Ok(v.inner(&moved))
}

/// Window `[b_lo, b_hi] × [a_lo, a_hi]` in the group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupRegion {
    pub b_lo: f64,
    pub b_hi: f64,
    pub a_lo: f64,
    pub a_hi: f64,
}

impl GroupRegion {
    pub fn new(b_lo: f64, b_hi: f64, a_lo: f64, a_hi: f64) -> Result<Self> {
        for v in [b_lo, b_hi, a_lo, a_hi] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "group region bounds",
                });
            }
        }
        if b_lo > b_hi {
            return Err(Error::InvalidValue {
                context: "group region needs b_lo <= b_hi",
                value: b_lo,
            });
        }
        if a_lo <= 0.0 || a_lo > a_hi {
            return Err(Error::InvalidValue {
                context: "group region needs 0 < a_lo <= a_hi",
                value: a_lo,
            });
        }
        Ok(Self {
            b_lo,
            b_hi,
            a_lo,
            a_hi,
        })
    }
}

/// Quadrature for group windows: uniform trapezoid nodes in `b`, exact sum
/// over the grid-compatible dilations `a = ratio^m` inside the window with
/// Haar weights `a⁻²·Δa = ln(ratio)/a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupQuadrature {
    pub b_nodes: usize,
}

impl GroupQuadrature {
    pub fn new(b_nodes: usize) -> Result<Self> {
        if b_nodes < 2 {
            return Err(Error::TooFewNodes { got: b_nodes });
        }
        Ok(Self { b_nodes })
    }

    fn b_rule(&self, region: &GroupRegion) -> Rule1d {
        trapezoid(self.b_nodes, region.b_lo, region.b_hi)
    }

    /// Dilation step indices inside the window.
    fn dilation_range(&self, grid: &HalfLineGrid, region: &GroupRegion) -> (i64, i64) {
        let lnr = grid.ratio().ln();
        let m_lo = (region.a_lo.ln() / lnr - 1e-9).ceil() as i64;
        let m_hi = (region.a_hi.ln() / lnr + 1e-9).floor() as i64;
        (m_lo, m_hi)
    }
}

fn check_modulation(
    grid: &HalfLineGrid,
    region: &GroupRegion,
    funcs: &[&SampledFunction],
) -> Result<()> {
    let b_max = region.b_lo.abs().max(region.b_hi.abs());
    let bound = modulation_bound(grid, funcs);
    if b_max > bound {
        return Err(Error::ModulationBound { b_max, bound });
    }
    Ok(())
}

/// Eigen-list presentation of a trace-one positive operator on the sampled
/// space: weights `λ_i ≥ 0` summing to one and orthonormal vectors `e_i`.
#[derive(Debug, Clone)]
pub struct DensityMixture {
    terms: Vec<(f64, SampledFunction)>,
}

impl DensityMixture {
    const WEIGHT_TOL: f64 = 1e-10;
    const ORTHO_TOL: f64 = 1e-8;

    pub fn new(terms: Vec<(f64, SampledFunction)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyInput {
                context: "density mixture terms",
            });
        }
        for window in terms.windows(2) {
            same_grid(&window[0].1, &window[1].1)?;
        }
        if let Some((lam, _)) = terms.iter().find(|(lam, _)| !lam.is_finite() || *lam < 0.0) {
            return Err(Error::InvalidValue {
                context: "mixture weight",
                value: *lam,
            });
        }
        let sum: f64 = terms.iter().map(|(lam, _)| lam).sum();
        if (sum - 1.0).abs() > Self::WEIGHT_TOL {
            return Err(Error::MixtureWeights {
                defect: (sum - 1.0).abs(),
                tol: Self::WEIGHT_TOL,
            });
        }
        let mut worst = 0.0f64;
        for (i, (_, ei)) in terms.iter().enumerate() {
            for (j, (_, ej)) in terms.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ei.inner(ej) - Complex64::new(target, 0.0)).norm());
            }
        }
        if worst > Self::ORTHO_TOL {
            return Err(Error::MixtureOrthonormality {
                defect: worst,
                tol: Self::ORTHO_TOL,
            });
        }
        Ok(Self { terms })
    }

    /// Rank-one operator `η ⊗ η*` for a unit vector `η`.
    pub fn rank_one(eta: SampledFunction) -> Result<Self> {
        Self::new(vec![(1.0, eta)])
    }

    pub fn terms(&self) -> &[(f64, SampledFunction)] {
        &self.terms
    }

    fn grid(&self) -> &Arc<HalfLineGrid> {
        self.terms[0].1.grid()
    }
}

/// Quadratic form `⟨Q_T(X)u, u⟩ = Σ_i λ_i ∫_X |⟨C π⁺(g⁻¹)u, e_i⟩|² dμ_G(g)`.
///
/// Nonnegative, additive over disjoint windows sharing a partition, and
/// bounded by `‖u‖²` up to window truncation and discretization error.
pub fn povm_quadratic_form(
    mixture: &DensityMixture,
    region: &GroupRegion,
    u: &SampledFunction,
    quad: &GroupQuadrature,
) -> Result<f64> {
    same_grid(&mixture.terms[0].1, u)?;
    let grid = mixture.grid();
    let mut involved: Vec<&SampledFunction> = vec![u];
    involved.extend(mixture.terms.iter().map(|(_, e)| e));
    check_modulation(grid, region, &involved)?;

    let b_rule = quad.b_rule(region);
    let (m_lo, m_hi) = quad.dilation_range(grid, region);
    if m_lo > m_hi {
        return Ok(0.0);
    }
    let m_count = (m_hi - m_lo + 1) as usize;
    let lnr = grid.ratio().ln();

    let total = reduce_indexed(
        m_count,
        || 0.0f64,
        |acc, range| {
            for mi in range {
                let m = m_lo + mi as i64;
                let a = grid.ratio().powi(m as i32);
                let haar_w = lnr / a;
                // π⁺(g⁻¹) u with g = (b, a): dilation part is b-independent
                let dilated = pi_plus_raw(grid, 0.0, -m, &u.values);
                if dilated.iter().all(|z| z.norm_sqr() == 0.0) {
                    continue;
                }
                for (bi, &b) in b_rule.nodes.iter().enumerate() {
                    let wb = b_rule.weights[bi];
                    if wb == 0.0 {
                        continue;
                    }
                    // full π⁺(g⁻¹)u = e^{-2πi(b/a)x} · dilated, then C
                    let minus_b_over_a = -b / a;
                    let mut node_sum = 0.0;
                    for (lam, e) in &mixture.terms {
                        let mut overlap = Complex64::new(0.0, 0.0);
                        for (k, d) in dilated.iter().enumerate() {
                            if d.norm_sqr() == 0.0 {
                                continue;
                            }
                            let x = grid.node(k);
                            let phase = Complex64::from_polar(
                                1.0,
                                2.0 * std::f64::consts::PI * minus_b_over_a * x,
                            );
                            let cf = d * phase * x.sqrt();
                            overlap += grid.weight(k) * cf * e.values[k].conj();
                        }
                        node_sum += lam * overlap.norm_sqr();
                    }
                    *acc += haar_w * wb * node_sum;
                }
            }
        },
        |a, b| *a += b,
    );
    Ok(total)
}

/// Defect of the discretized orthogonality relation:
/// `|∫_window |⟨u, π⁺(g) C v⟩|² dμ_G - ‖u‖²‖v‖²|`.
///
/// Evaluated through the wavelet route (`C` applied to `v`, then `π⁺(g)`),
/// independent of the [`povm_quadratic_form`] route.
///
/// ```
/// use covpovm::axb::{orthogonality_defect, GroupQuadrature, GroupRegion, HalfLineGrid,
///                    SampledFunction};
///
/// let grid = HalfLineGrid::geometric(1e-3, 1.02, 512).unwrap();
/// // unit bump well inside the grid
/// let u = SampledFunction::bump(grid.clone(), 0.16, 0.7).unwrap();
/// let window = GroupRegion::new(-10.0, 10.0, 1.02f64.powi(-150), 1.02f64.powi(150)).unwrap();
/// let quad = GroupQuadrature::new(321).unwrap();
/// let defect = orthogonality_defect(&u, &u, &window, &quad).unwrap();
/// assert!(defect < 5e-2, "defect {defect}");
/// ```
pub fn orthogonality_defect(
    u: &SampledFunction,
    v: &SampledFunction,
    window: &GroupRegion,
    quad: &GroupQuadrature,
) -> Result<f64> {
    let integral = wavelet_intensity_integral(u, v, window, quad)?;
    Ok((integral - u.norm_sq() * v.norm_sq()).abs())
}

/// `∫_window |⟨u, π⁺(g) C v⟩|² dμ_G(g)` over the group quadrature.
pub fn wavelet_intensity_integral(
    u: &SampledFunction,
    v: &SampledFunction,
    window: &GroupRegion,
    quad: &GroupQuadrature,
) -> Result<f64> {
    same_grid(u, v)?;
    let grid = u.grid();
    check_modulation(grid, window, &[u, v])?;
    let weighted = apply_formal_degree_root(v);

    let b_rule = quad.b_rule(window);
    let (m_lo, m_hi) = quad.dilation_range(grid, window);
    if m_lo > m_hi {
        return Ok(0.0);
    }
    let m_count = (m_hi - m_lo + 1) as usize;
    let lnr = grid.ratio().ln();

    let total = reduce_indexed(
        m_count,
        || 0.0f64,
        |acc, range| {
            for mi in range {
                let m = m_lo + mi as i64;
                let a = grid.ratio().powi(m as i32);
                let haar_w = lnr / a;
                let shifted = pi_plus_raw(grid, 0.0, m, &weighted.values);
                // restrict to the joint support of u and the shifted vector
                let mut terms: Vec<(f64, Complex64)> = Vec::new();
                for (k, s) in shifted.iter().enumerate() {
                    let base = grid.weight(k) * u.values[k] * s.conj();
                    if base.norm_sqr() > 0.0 {
                        terms.push((grid.node(k), base));
                    }
                }
                if terms.is_empty() {
                    continue;
                }
                for (bi, &b) in b_rule.nodes.iter().enumerate() {
                    let wb = b_rule.weights[bi];
                    if wb == 0.0 {
                        continue;
                    }
                    // ⟨u, e^{2πibx}·shifted⟩ = Σ base_k e^{-2πibx_k}
                    let mut val = Complex64::new(0.0, 0.0);
                    for (x, base) in &terms {
                        val +=
                            base * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * b * x);
                    }
                    *acc += haar_w * wb * val.norm_sqr();
                }
            }
        },
        |a, b| *a += b,
    );
    Ok(total)
}
