//! Covariant phase-space POVMs for the Heisenberg group.
//!
//! The quotient of the Heisenberg group by its centre is the phase plane
//! `(p, q)` carried with the invariant measure `dp dq / 2π`; this
//! normalization is hard-coded throughout (any other choice would rescale
//! the construction). Elements of the POVM attached to a trace-one positive
//! operator `T` are
//!
//! ```text
//! Q_T(X) = (1/2π) ∫_X D(p,q) T D(p,q)†  dp dq
//! ```
//!
//! evaluated by tensor quadrature over a bounding box with indicator masking
//! of the region. Masked nodes contribute nothing, so elements are additive
//! over disjoint regions sharing a quadrature partition, and an overlap of
//! region primitives is never double counted.
//!
//! Quadrature sums run in fixed index chunks combined in chunk order
//! (see [`crate::quad::reduce_indexed`]), so results are bit-identical for
//! any worker count.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DisplacementEngine, FockSpace, LinearOperator};
use crate::povm::{outcome_density_with_engine, DensityOperator};
use crate::quad::{gauss_legendre, reduce_indexed, trapezoid, Rule1d};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Axis-aligned closed rectangle in the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub p_lo: f64,
    pub p_hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
}

impl Rect {
    pub fn new(p_lo: f64, p_hi: f64, q_lo: f64, q_hi: f64) -> Result<Self> {
        for v in [p_lo, p_hi, q_lo, q_hi] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "rectangle bounds",
                });
            }
        }
        if p_lo > p_hi || q_lo > q_hi {
            return Err(Error::InvalidValue {
                context: "rectangle bounds must satisfy lo <= hi",
                value: if p_lo > p_hi { p_lo } else { q_lo },
            });
        }
        Ok(Self {
            p_lo,
            p_hi,
            q_lo,
            q_hi,
        })
    }

    pub fn area(&self) -> f64 {
        (self.p_hi - self.p_lo) * (self.q_hi - self.q_lo)
    }

    pub fn contains(&self, p: f64, q: f64) -> bool {
        p >= self.p_lo && p <= self.p_hi && q >= self.q_lo && q <= self.q_hi
    }

    fn contains_rect(&self, other: &Rect) -> bool {
        self.p_lo <= other.p_lo
            && self.p_hi >= other.p_hi
            && self.q_lo <= other.q_lo
            && self.q_hi >= other.q_hi
    }

    pub fn translated(&self, dp: f64, dq: f64) -> Self {
        Self {
            p_lo: self.p_lo + dp,
            p_hi: self.p_hi + dp,
            q_lo: self.q_lo + dq,
            q_hi: self.q_hi + dq,
        }
    }
}

/// One measurable primitive of a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionPrimitive {
    Rect(Rect),
    Disk {
        center_p: f64,
        center_q: f64,
        radius: f64,
    },
}

impl RegionPrimitive {
    fn contains(&self, p: f64, q: f64) -> bool {
        match self {
            RegionPrimitive::Rect(r) => r.contains(p, q),
            RegionPrimitive::Disk {
                center_p,
                center_q,
                radius,
            } => {
                let dp = p - center_p;
                let dq = q - center_q;
                dp * dp + dq * dq <= radius * radius
            }
        }
    }

    fn bounding_box(&self) -> Rect {
        match self {
            RegionPrimitive::Rect(r) => *r,
            RegionPrimitive::Disk {
                center_p,
                center_q,
                radius,
            } => Rect {
                p_lo: center_p - radius,
                p_hi: center_p + radius,
                q_lo: center_q - radius,
                q_hi: center_q + radius,
            },
        }
    }

    fn translated(&self, dp: f64, dq: f64) -> Self {
        match self {
            RegionPrimitive::Rect(r) => RegionPrimitive::Rect(r.translated(dp, dq)),
            RegionPrimitive::Disk {
                center_p,
                center_q,
                radius,
            } => RegionPrimitive::Disk {
                center_p: center_p + dp,
                center_q: center_q + dq,
                radius: *radius,
            },
        }
    }

    fn area(&self) -> f64 {
        match self {
            RegionPrimitive::Rect(r) => r.area(),
            RegionPrimitive::Disk { radius, .. } => std::f64::consts::PI * radius * radius,
        }
    }
}

/// Finite union of rectangles and disks; a point belongs to the region when
/// it lies in any primitive, so overlaps are not double counted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseSpaceRegion {
    primitives: Vec<RegionPrimitive>,
}

impl PhaseSpaceRegion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rectangle(rect: Rect) -> Self {
        Self {
            primitives: vec![RegionPrimitive::Rect(rect)],
        }
    }

    pub fn disk(center_p: f64, center_q: f64, radius: f64) -> Result<Self> {
        let mut region = Self::empty();
        region.add_disk(center_p, center_q, radius)?;
        Ok(region)
    }

    pub fn add_rect(&mut self, rect: Rect) {
        self.primitives.push(RegionPrimitive::Rect(rect));
    }

    pub fn add_disk(&mut self, center_p: f64, center_q: f64, radius: f64) -> Result<()> {
        if !(center_p.is_finite() && center_q.is_finite() && radius.is_finite()) {
            return Err(Error::NonFinite {
                context: "disk parameters",
            });
        }
        if radius < 0.0 {
            return Err(Error::InvalidValue {
                context: "disk radius",
                value: radius,
            });
        }
        self.primitives.push(RegionPrimitive::Disk {
            center_p,
            center_q,
            radius,
        });
        Ok(())
    }

    pub fn primitives(&self) -> &[RegionPrimitive] {
        &self.primitives
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    pub fn contains(&self, p: f64, q: f64) -> bool {
        self.primitives.iter().any(|prim| prim.contains(p, q))
    }

    /// Smallest rectangle containing every primitive; `None` when empty.
    pub fn bounding_box(&self) -> Option<Rect> {
        let mut it = self.primitives.iter().map(|p| p.bounding_box());
        let first = it.next()?;
        Some(it.fold(first, |acc, b| Rect {
            p_lo: acc.p_lo.min(b.p_lo),
            p_hi: acc.p_hi.max(b.p_hi),
            q_lo: acc.q_lo.min(b.q_lo),
            q_hi: acc.q_hi.max(b.q_hi),
        }))
    }

    pub fn translated(&self, dp: f64, dq: f64) -> Self {
        Self {
            primitives: self
                .primitives
                .iter()
                .map(|p| p.translated(dp, dq))
                .collect(),
        }
    }

    /// Exact area when it can be read off directly: empty regions and single
    /// primitives. Unions may overlap, so their exact area is not attempted.
    pub fn exact_area(&self) -> Option<f64> {
        match self.primitives.len() {
            0 => Some(0.0),
            1 => Some(self.primitives[0].area()),
            _ => None,
        }
    }
}

/// Tensor quadrature rule selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Uniform nodes with trapezoid weights; the robust choice when the
    /// region boundary cuts through the box (disk masking).
    Trapezoid,
    /// Tensor Gauss–Legendre; spectrally accurate for smooth integrands
    /// over the full box.
    GaussLegendre,
}

/// Tensor quadrature specification over a bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub nodes_p: usize,
    pub nodes_q: usize,
    pub bounding_box: Rect,
}

impl QuadratureSpec {
    pub fn new(rule: QuadratureRule, nodes_p: usize, nodes_q: usize, bounding_box: Rect) -> Self {
        Self {
            rule,
            nodes_p,
            nodes_q,
            bounding_box,
        }
    }

    pub fn gauss_legendre(nodes_p: usize, nodes_q: usize, bounding_box: Rect) -> Self {
        Self::new(
            QuadratureRule::GaussLegendre,
            nodes_p,
            nodes_q,
            bounding_box,
        )
    }

    pub fn trapezoid(nodes_p: usize, nodes_q: usize, bounding_box: Rect) -> Self {
        Self::new(QuadratureRule::Trapezoid, nodes_p, nodes_q, bounding_box)
    }

    /// Default rule for a region: Gauss–Legendre on its bounding box with
    /// 64 × 64 nodes, trapezoid instead when a disk boundary is present.
    pub fn default_for(region: &PhaseSpaceRegion) -> Result<Self> {
        let bbox = region
            .bounding_box()
            .unwrap_or(Rect::new(0.0, 0.0, 0.0, 0.0)?);
        let has_disk = region
            .primitives()
            .iter()
            .any(|p| matches!(p, RegionPrimitive::Disk { .. }));
        let rule = if has_disk {
            QuadratureRule::Trapezoid
        } else {
            QuadratureRule::GaussLegendre
        };
        Ok(Self::new(rule, 64, 64, bbox))
    }

    fn validate(&self) -> Result<()> {
        if self.nodes_p < 2 || self.nodes_q < 2 {
            return Err(Error::TooFewNodes {
                got: self.nodes_p.min(self.nodes_q),
            });
        }
        Ok(())
    }

    fn check_covers(&self, region: &PhaseSpaceRegion) -> Result<()> {
        if let Some(bbox) = region.bounding_box() {
            if !self.bounding_box.contains_rect(&bbox) {
                return Err(Error::BoundingBoxCoverage {
                    context: "phase-space region",
                });
            }
        }
        Ok(())
    }

    fn rules(&self) -> (Rule1d, Rule1d) {
        let b = &self.bounding_box;
        match self.rule {
            QuadratureRule::GaussLegendre => (
                gauss_legendre(self.nodes_p, b.p_lo, b.p_hi),
                gauss_legendre(self.nodes_q, b.q_lo, b.q_hi),
            ),
            QuadratureRule::Trapezoid => (
                trapezoid(self.nodes_p, b.p_lo, b.p_hi),
                trapezoid(self.nodes_q, b.q_lo, b.q_hi),
            ),
        }
    }
}

/// Quadrature nodes with the region mask baked in. The mask is shared by
/// translated evaluations so a covariance comparison sees geometrically
/// identical node patterns on both sides.
struct MaskedNodes {
    ps: Rule1d,
    qs: Rule1d,
    mask: Vec<bool>,
}

impl MaskedNodes {
    fn build(region: &PhaseSpaceRegion, quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        quad.check_covers(region)?;
        let (ps, qs) = quad.rules();
        let nq = qs.nodes.len();
        let mut mask = vec![false; ps.nodes.len() * nq];
        for (i, &p) in ps.nodes.iter().enumerate() {
            for (j, &q) in qs.nodes.iter().enumerate() {
                mask[i * nq + j] = region.contains(p, q);
            }
        }
        Ok(Self { ps, qs, mask })
    }

    fn len(&self) -> usize {
        self.mask.len()
    }

    /// Node (p, q) and weight for a flat row-major index, origin shifted by
    /// `(dp, dq)`.
    fn node(&self, flat: usize, dp: f64, dq: f64) -> (f64, f64, f64, bool) {
        let nq = self.qs.nodes.len();
        let i = flat / nq;
        let j = flat % nq;
        (
            self.ps.nodes[i] + dp,
            self.qs.nodes[j] + dq,
            self.ps.weights[i] * self.qs.weights[j],
            self.mask[flat],
        )
    }

    /// Quadrature measure of the masked region.
    fn measure(&self) -> f64 {
        let nq = self.qs.nodes.len();
        let mut total = 0.0;
        for i in 0..self.ps.nodes.len() {
            for j in 0..nq {
                if self.mask[i * nq + j] {
                    total += self.ps.weights[i] * self.qs.weights[j];
                }
            }
        }
        total
    }
}

/// Quadrature measure of `region` under `quad` (the rule applied to the
/// constant 1). Useful as the trace target for union regions.
pub fn region_quadrature_measure(region: &PhaseSpaceRegion, quad: &QuadratureSpec) -> Result<f64> {
    Ok(MaskedNodes::build(region, quad)?.measure())
}

fn element_at_nodes(
    t: &DensityOperator,
    engine: &DisplacementEngine,
    nodes: &MaskedNodes,
    dp: f64,
    dq: f64,
) -> Result<LinearOperator> {
    let n = t.dim();
    let terms: Vec<(f64, &DVector<Complex64>)> = t.spectral_terms().collect();
    let mat = reduce_indexed(
        nodes.len(),
        || DMatrix::<Complex64>::zeros(n, n),
        |acc, range| {
            for flat in range {
                let (p, q, w, inside) = nodes.node(flat, dp, dq);
                if !inside || w == 0.0 {
                    continue;
                }
                let scale = w / TWO_PI;
                for (mu, vec) in &terms {
                    let y = engine
                        .apply(p, q, vec)
                        .expect("finite node coordinates and matching dimension");
                    accumulate_outer(acc, &y, scale * mu);
                }
            }
        },
        |a, b| *a += b,
    );
    LinearOperator::from_matrix(mat)
}

/// `acc += scale * y y†`, column-major fill so both triangles are built from
/// the same products and the accumulated matrix stays exactly Hermitian.
fn accumulate_outer(acc: &mut DMatrix<Complex64>, y: &DVector<Complex64>, scale: f64) {
    let n = y.len();
    for j in 0..n {
        let yj = y[j].conj() * scale;
        for i in 0..n {
            acc[(i, j)] += y[i] * yj;
        }
    }
}

/// The POVM element `Q_T(X)` for region `X` under the given quadrature.
///
/// Hermitian by construction; positive semidefinite and additive over
/// disjoint regions sharing a quadrature partition; its trace approximates
/// `area(X)/2π` to quadrature accuracy independently of `T`.
///
/// ```
/// use covpovm::heisenberg::{povm_element, PhaseSpaceRegion, QuadratureSpec, Rect};
/// use covpovm::povm::DensityOperator;
///
/// let vacuum = DensityOperator::vacuum_projector(24).unwrap();
/// let rect = Rect::new(0.0, 2.0 * std::f64::consts::PI, 0.0, 1.0).unwrap();
/// let quad = QuadratureSpec::gauss_legendre(32, 32, rect);
/// let q = povm_element(&vacuum, &PhaseSpaceRegion::rectangle(rect), &quad).unwrap();
/// // the region has invariant measure 2π / 2π = 1
/// assert!((q.trace().re - 1.0).abs() < 1e-9);
/// ```
pub fn povm_element(
    t: &DensityOperator,
    region: &PhaseSpaceRegion,
    quad: &QuadratureSpec,
) -> Result<LinearOperator> {
    let engine = DisplacementEngine::new(FockSpace::new(t.dim())?);
    let nodes = MaskedNodes::build(region, quad)?;
    element_at_nodes(t, &engine, &nodes, 0.0, 0.0)
}

/// Phase-space outcome density `(1/2π) tr(ρ D(p,q) T D(p,q)†)`.
///
/// Evaluated through the spectral terms of both operators, so the value is
/// a sum of squared overlaps: real and nonnegative up to roundoff.
pub fn outcome_density(t: &DensityOperator, rho: &DensityOperator, p: f64, q: f64) -> Result<f64> {
    let engine = DisplacementEngine::new(FockSpace::new(t.dim())?);
    outcome_density_with_engine(&engine, t, rho, p, q)
}

/// Measurement probability `tr(ρ Q_T(X))`, integrated nodewise.
///
/// An independent evaluation path from [`povm_element`] followed by a trace;
/// the two agree within accumulation roundoff (`~1e-13`).
pub fn probability(
    t: &DensityOperator,
    rho: &DensityOperator,
    region: &PhaseSpaceRegion,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if t.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: rho.dim(),
        });
    }
    let engine = DisplacementEngine::new(FockSpace::new(t.dim())?);
    let nodes = MaskedNodes::build(region, quad)?;
    let t_terms: Vec<(f64, &DVector<Complex64>)> = t.spectral_terms().collect();
    let r_terms: Vec<(f64, &DVector<Complex64>)> = rho.spectral_terms().collect();
    let total = reduce_indexed(
        nodes.len(),
        || 0.0f64,
        |acc, range| {
            for flat in range {
                let (p, q, w, inside) = nodes.node(flat, 0.0, 0.0);
                if !inside || w == 0.0 {
                    continue;
                }
                let mut density = 0.0;
                for (mu, tv) in &t_terms {
                    let y = engine
                        .apply(p, q, tv)
                        .expect("finite node coordinates and matching dimension");
                    for (nu, rv) in &r_terms {
                        let mut overlap = Complex64::new(0.0, 0.0);
                        for k in 0..y.len() {
                            overlap += rv[k].conj() * y[k];
                        }
                        density += mu * nu * overlap.norm_sqr();
                    }
                }
                *acc += w / TWO_PI * density;
            }
        },
        |a, b| *a += b,
    );
    Ok(total)
}

/// Covariance defect `‖D(p₀,q₀) Q_T(X) D(p₀,q₀)† - Q_T(X + (p₀,q₀))‖_max`
/// on the top-left `N/2` block (truncation corrupts the highest levels
/// first).
///
/// The shifted element is evaluated on the same node pattern translated by
/// the shift — every primitive translated, mask reused — so the residual
/// reflects the representation, not quadrature jitter at the boundary.
pub fn covariance_residual(
    t: &DensityOperator,
    shift: (f64, f64),
    region: &PhaseSpaceRegion,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (dp, dq) = shift;
    if !dp.is_finite() || !dq.is_finite() {
        return Err(Error::NonFinite {
            context: "covariance shift",
        });
    }
    let engine = DisplacementEngine::new(FockSpace::new(t.dim())?);
    let nodes = MaskedNodes::build(region, quad)?;
    let q_base = element_at_nodes(t, &engine, &nodes, 0.0, 0.0)?;
    let q_shifted = element_at_nodes(t, &engine, &nodes, dp, dq)?;
    let d = engine.matrix(dp, dq)?;
    let conjugated = d.mul(&q_base).mul(&d.adjoint());
    let block = t.dim() / 2;
    Ok(conjugated.sub(&q_shifted).max_abs(Some(block)))
}
