//! Acceptance suite: every promised property at its stated tolerance, one
//! pass/fail line per criterion. Run with `--nocapture` to see the lines
//! for passing criteria too.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use covpovm::axb::{
    apply_formal_degree_root, apply_pi_plus, orthogonality_defect, povm_quadratic_form,
    wavelet_coefficient, AffineElement, DensityMixture, GroupQuadrature, GroupRegion, HalfLineGrid,
    SampledFunction,
};
use covpovm::fock::{generators, DisplacementEngine, FockSpace, LinearOperator};
use covpovm::heisenberg::{
    covariance_residual, povm_element, PhaseSpaceRegion, QuadratureSpec, Rect,
};
use covpovm::povm::{normalization_defect, povm_sup_distance, DensityOperator};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:02} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} {name}: {detail}");
}

#[test]
fn criterion_01_vacuum_husimi_closed_form() {
    let started = Instant::now();
    let t = DensityOperator::vacuum_projector(32).unwrap();
    let engine = DisplacementEngine::new(FockSpace::new(32).unwrap());
    let mut worst_inner = 0.0f64;
    let mut worst_outer = 0.0f64;
    for (half, worst) in [(2.0, &mut worst_inner), (4.0, &mut worst_outer)] {
        for i in 0..81 {
            for j in 0..81 {
                let p = -half + 2.0 * half * i as f64 / 80.0;
                let q = -half + 2.0 * half * j as f64 / 80.0;
                let vac = t.eigenvector(
                    t.eigenvalues()
                        .iter()
                        .position(|l| *l > 0.5)
                        .expect("vacuum eigenvalue"),
                );
                let displaced = engine.apply(p, q, vac).unwrap();
                let dens = displaced[0].norm_sqr() / TWO_PI;
                let exact = (-(p * p + q * q) / 2.0).exp() / TWO_PI;
                *worst = worst.max((dens - exact).abs());
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst_inner <= 1e-8 && worst_outer <= 1e-4 && elapsed < 5.0;
    verdict(
        1,
        "vacuum Husimi closed form",
        pass,
        &format!(
            "max err {worst_inner:.2e} on [-2,2]^2 (tol 1e-8), {worst_outer:.2e} on [-4,4]^2 (tol 1e-4), {elapsed:.2}s (< 5s)"
        ),
    );
}

#[test]
fn criterion_02_normalization() {
    let started = Instant::now();
    let t = DensityOperator::vacuum_projector(32).unwrap();
    let quad = QuadratureSpec::gauss_legendre(128, 128, Rect::new(-8.0, 8.0, -8.0, 8.0).unwrap());
    let defect = normalization_defect(&t, 8.0, 4, &quad).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let pass = defect <= 1e-3 && elapsed < 30.0;
    verdict(
        2,
        "normalization Q(G/Z) = I on the low block",
        pass,
        &format!("defect {defect:.3e} (tol 1e-3), {elapsed:.2}s (< 30s)"),
    );
}

#[test]
fn criterion_03_covariance() {
    let started = Instant::now();
    let shifts = [(0.5, 0.0), (0.0, 0.25), (0.6, -0.8), (-1.0, 0.0)];
    let operators = [
        DensityOperator::vacuum_projector(32).unwrap(),
        DensityOperator::fock_projector(32, 1).unwrap(),
        DensityOperator::mixed_diagonal(32, &[0.5, 0.3, 0.2]).unwrap(),
    ];
    let region = PhaseSpaceRegion::disk(0.0, 0.0, 1.0).unwrap();
    let quad = QuadratureSpec::gauss_legendre(80, 80, region.bounding_box().unwrap());
    let mut worst = 0.0f64;
    for t in &operators {
        for &shift in &shifts {
            let r = covariance_residual(t, shift, &region, &quad).unwrap();
            worst = worst.max(r);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst <= 1e-5 && elapsed < 60.0;
    verdict(
        3,
        "covariance under phase-space shifts",
        pass,
        &format!("worst residual {worst:.3e} (tol 1e-5), {elapsed:.2}s (< 60s)"),
    );
}

#[test]
fn criterion_04_trace_identity() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
    let operators: Vec<DensityOperator> = (0..5)
        .map(|_| DensityOperator::random(24, 24, &mut rng).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let p_lo = rng.random_range(-4.0..3.5);
        let q_lo = rng.random_range(-4.0..3.5);
        let p_hi = rng.random_range(p_lo + 0.1..4.0);
        let q_hi = rng.random_range(q_lo + 0.1..4.0);
        let rect = Rect::new(p_lo, p_hi, q_lo, q_hi).unwrap();
        let quad = QuadratureSpec::gauss_legendre(48, 48, rect);
        let t = &operators[k % 5];
        let q = povm_element(t, &PhaseSpaceRegion::rectangle(rect), &quad).unwrap();
        worst = worst.max((q.trace().re - rect.area() / TWO_PI).abs());
    }
    let pass = worst <= 1e-6;
    verdict(
        4,
        "trace identity tr Q_T(X) = area(X)/2pi",
        pass,
        &format!("worst defect {worst:.3e} (tol 1e-6), 20 rects x 5 operators"),
    );
}

#[test]
fn criterion_05_positivity_additivity() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
    // positivity across a corpus of regions, rules and operators
    let mut min_eig = f64::INFINITY;
    let corpus: Vec<(DensityOperator, PhaseSpaceRegion, QuadratureSpec)> = vec![
        (
            DensityOperator::vacuum_projector(16).unwrap(),
            PhaseSpaceRegion::disk(0.0, 0.0, 2.0).unwrap(),
            QuadratureSpec::trapezoid(61, 61, Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap()),
        ),
        (
            DensityOperator::random(16, 16, &mut rng).unwrap(),
            PhaseSpaceRegion::rectangle(Rect::new(-1.0, 2.0, 0.0, 1.5).unwrap()),
            QuadratureSpec::gauss_legendre(48, 48, Rect::new(-1.0, 2.0, 0.0, 1.5).unwrap()),
        ),
        (
            DensityOperator::mixed_diagonal(16, &[0.7, 0.2, 0.1]).unwrap(),
            {
                let mut r = PhaseSpaceRegion::disk(-0.5, 0.5, 1.0).unwrap();
                r.add_rect(Rect::new(0.0, 1.0, -1.0, 0.0).unwrap());
                r
            },
            QuadratureSpec::trapezoid(51, 51, Rect::new(-1.5, 1.5, -1.0, 1.5).unwrap()),
        ),
    ];
    for (t, region, quad) in &corpus {
        let q = povm_element(t, region, quad).unwrap();
        min_eig = min_eig.min(q.hermitian_part_eigenvalues()[0]);
    }

    // additivity over disjoint rectangles sharing one partition
    let t = DensityOperator::random(16, 8, &mut rng).unwrap();
    let bbox = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    let quad = QuadratureSpec::gauss_legendre(64, 64, bbox);
    let left = PhaseSpaceRegion::rectangle(Rect::new(-1.0, 0.0, -1.0, 1.0).unwrap());
    let right = PhaseSpaceRegion::rectangle(Rect::new(0.0, 1.0, -1.0, 1.0).unwrap());
    let mut union = PhaseSpaceRegion::rectangle(Rect::new(-1.0, 0.0, -1.0, 1.0).unwrap());
    union.add_rect(Rect::new(0.0, 1.0, -1.0, 1.0).unwrap());
    let additivity = povm_element(&t, &left, &quad)
        .unwrap()
        .add(&povm_element(&t, &right, &quad).unwrap())
        .sub(&povm_element(&t, &union, &quad).unwrap())
        .max_abs(None);

    let pass = min_eig >= -1e-10 && additivity <= 1e-12;
    verdict(
        5,
        "positivity and additivity",
        pass,
        &format!("min eigenvalue {min_eig:.3e} (>= -1e-10), additivity defect {additivity:.3e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_06_injectivity() {
    let started = Instant::now();
    let dim = 8;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1234);
    let mut probes = Vec::new();
    for level in 0..4 {
        probes.push(DensityOperator::fock_projector(dim, level).unwrap());
    }
    for _ in 0..4 {
        probes.push(DensityOperator::random(dim, 1, &mut rng).unwrap());
    }
    let mut points = Vec::new();
    for i in 0..21 {
        for j in 0..21 {
            points.push((-3.0 + 0.3 * i as f64, -3.0 + 0.3 * j as f64));
        }
    }
    let mut min_sup = f64::INFINITY;
    let mut pairs = 0;
    while pairs < 100 {
        let t1 = DensityOperator::random(dim, dim, &mut rng).unwrap();
        let t2 = DensityOperator::random(dim, dim, &mut rng).unwrap();
        if t1.trace_distance(&t2).unwrap() < 0.1 {
            continue;
        }
        pairs += 1;
        min_sup = min_sup.min(povm_sup_distance(&t1, &t2, &probes, &points).unwrap());
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = min_sup > 1e-3 && elapsed < 60.0;
    verdict(
        6,
        "injectivity separation of T -> Q_T",
        pass,
        &format!("min sup-distance {min_sup:.3e} (> 1e-3) over 100 pairs, {elapsed:.2}s (< 60s)"),
    );
}

#[test]
fn criterion_07_axb_covariance_of_degree_root() {
    // pi+(g) C = Delta(g)^{-1/2} C pi+(g) for grid-compatible g
    let grid = HalfLineGrid::geometric(1e-3, 1.02, 512).unwrap();
    let f = reference_bump(&grid);
    let mut worst = 0.0f64;
    for (b, m) in [
        (0.0, 1),
        (0.31, 37),
        (-0.9, -60),
        (2.0, 120),
        (-4.0, -100),
        (7.5, 5),
    ] {
        let g = AffineElement::new(b, 1.02f64.powi(m)).unwrap();
        let lhs = apply_pi_plus(g, &apply_formal_degree_root(&f), 0.0).unwrap();
        let rhs = apply_formal_degree_root(&apply_pi_plus(g, &f, 0.0).unwrap())
            .scaled(Complex64::new(g.modular().powf(-0.5), 0.0));
        let mut diff2 = 0.0;
        for k in 0..grid.len() {
            diff2 += grid.weight(k) * (lhs.value(k) - rhs.value(k)).norm_sqr();
        }
        worst = worst.max(diff2.sqrt());
    }
    let pass = worst <= 1e-12;
    verdict(
        7,
        "ax+b covariance relation of the degree root",
        pass,
        &format!("worst defect {worst:.3e} (tol 1e-12)"),
    );
}

fn reference_bump(grid: &Arc<HalfLineGrid>) -> SampledFunction {
    let m = grid.len();
    let lo = grid.node(m / 3);
    let hi = grid.node(2 * m / 3);
    let center = (lo * hi).sqrt();
    let half_width = 0.45 * (hi / lo).ln() / 2.0;
    SampledFunction::bump(Arc::clone(grid), center, half_width).unwrap()
}

fn reference_defect(m_count: usize, ratio: f64, b_half: f64, b_nodes: usize) -> f64 {
    let grid = HalfLineGrid::geometric(1e-3, ratio, m_count).unwrap();
    let u = reference_bump(&grid);
    let steps = (m_count / 3) as i32;
    let window = GroupRegion::new(-b_half, b_half, ratio.powi(-steps), ratio.powi(steps)).unwrap();
    let quad = GroupQuadrature::new(b_nodes).unwrap();
    orthogonality_defect(&u, &u, &window, &quad).unwrap()
}

#[test]
fn criterion_08_axb_orthogonality_with_convergence() {
    // reference grid, then M and the b-window doubled twice
    let d_ref = reference_defect(512, 1.02, 10.0, 321);
    let d_2 = reference_defect(1024, 1.02f64.sqrt(), 20.0, 641);
    let d_4 = reference_defect(2048, 1.02f64.powf(0.25), 40.0, 1281);
    let pass = d_ref <= 2e-2 && d_2 < d_ref && d_4 < d_2;
    verdict(
        8,
        "ax+b orthogonality relation and convergence trend",
        pass,
        &format!(
            "defects {d_ref:.3e} -> {d_2:.3e} -> {d_4:.3e} (first <= 2e-2, strictly decreasing)"
        ),
    );
}

#[test]
fn criterion_09_rank_one_wavelet_identity() {
    let started = Instant::now();
    let grid = HalfLineGrid::geometric(1e-3, 1.02, 512).unwrap();
    let u = reference_bump(&grid);
    let eta = SampledFunction::bump(Arc::clone(&grid), grid.node(290), 0.28).unwrap();
    let window = GroupRegion::new(-3.0, 3.0, 1.02f64.powi(-40), 1.02f64.powi(40)).unwrap();
    let b_nodes = 81;
    let quad = GroupQuadrature::new(b_nodes).unwrap();
    let mixture = DensityMixture::rank_one(eta.clone()).unwrap();
    let qf = povm_quadratic_form(&mixture, &window, &u, &quad).unwrap();

    // literal wavelet-coefficient integral on the same quadrature
    let lnr = grid.ratio().ln();
    let hb = (window.b_hi - window.b_lo) / (b_nodes - 1) as f64;
    let mut integral = 0.0;
    for m in -40..=40i32 {
        let a = grid.ratio().powi(m);
        let haar_w = lnr / a;
        for jb in 0..b_nodes {
            let b = window.b_lo + hb * jb as f64;
            let wb = if jb == 0 || jb == b_nodes - 1 {
                0.5 * hb
            } else {
                hb
            };
            let g = AffineElement::new(b, a).unwrap();
            let coeff = wavelet_coefficient(&u, &eta, g).unwrap();
            integral += haar_w * wb * coeff.norm_sqr();
        }
    }
    let diff = (qf - integral).abs();
    let elapsed = started.elapsed().as_secs_f64();
    let pass = diff <= 1e-10 && elapsed < 10.0;
    verdict(
        9,
        "rank-one form equals integrated wavelet coefficients",
        pass,
        &format!("|difference| {diff:.3e} (tol 1e-10), {elapsed:.2}s (< 10s)"),
    );
}

#[test]
fn criterion_10_truncated_commutator() {
    let mut worst = 0.0f64;
    for n in [2usize, 4, 16, 64] {
        let (_, _, q, p) = generators(FockSpace::new(n).unwrap());
        let mut comm = q.mul(&p).sub(&p.mul(&q)).matrix().clone();
        for k in 0..n {
            comm[(k, k)] -= Complex64::new(0.0, 1.0);
        }
        let corner = comm[(n - 1, n - 1)];
        worst = worst.max((corner - Complex64::new(0.0, -(n as f64))).norm());
        comm[(n - 1, n - 1)] = Complex64::new(0.0, 0.0);
        worst = worst.max(LinearOperator::from_matrix(comm).unwrap().max_abs(None));
    }
    let pass = worst <= 1e-12;
    verdict(
        10,
        "truncated commutator supported at the corner",
        pass,
        &format!("worst residual {worst:.3e} (tol 1e-12) for N in {{2,4,16,64}}"),
    );
}
