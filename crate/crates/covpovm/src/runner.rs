//! Batch front-end: execute one configured computation and emit matrices,
//! heatmaps and scalar reports.
//!
//! Exit policy: `0` on success, `1` on validation errors (unreadable config,
//! violated preconditions), `2` when a requested numerical invariant
//! exceeded its tolerance. Matrices are checked against their module
//! post-conditions before being written; a violation yields exit 2 and the
//! offending matrix is not emitted.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;

use crate::axb::{
    apply_formal_degree_root, modulation_bound, orthogonality_defect, povm_quadratic_form,
    wavelet_intensity_integral, DensityMixture, GroupQuadrature, GroupRegion, HalfLineGrid,
};
use crate::config::{
    mid_bump, parse_floats, parse_mixture, parse_rect, parse_region, ConfigFile, OperatorSpec,
    VectorSpec,
};
use crate::error::{Error, Result};
use crate::fock::{DisplacementEngine, FockSpace};
use crate::heisenberg::{
    covariance_residual, povm_element, probability, region_quadrature_measure, PhaseSpaceRegion,
    QuadratureRule, QuadratureSpec, Rect,
};
use crate::output::{heatmap_csv, matrix_file, JsonMap};
use crate::povm::{
    normalization_defect, outcome_density_with_engine, povm_sup_distance, psd_hermiticity_report,
    DensityOperator,
};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config_path: PathBuf,
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
}

/// Whether every requested numerical check passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Passed,
    CheckFailed,
}

struct Sink {
    dir: PathBuf,
    name: String,
}

impl Sink {
    fn write(&self, suffix: &str, content: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| Error::Io(format!("cannot create {}: {e}", self.dir.display())))?;
        let path = self.dir.join(format!("{}.{suffix}", self.name));
        std::fs::write(&path, content)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

pub fn run(opts: &RunOptions) -> Result<RunOutcome> {
    let cfg = ConfigFile::load(&opts.config_path)?;
    let command = cfg.require("command")?.to_string();
    let seed = match opts.seed_override {
        Some(s) => {
            // consume the config seed if present so it does not count as unknown
            let _ = cfg.get_u64("seed", 0)?;
            s
        }
        None => cfg.get_u64("seed", 0)?,
    };
    let name = cfg
        .get("output")
        .map(str::to_string)
        .unwrap_or_else(|| command.clone());
    let sink = Sink {
        dir: opts.out_dir.clone(),
        name,
    };

    let outcome = match command.as_str() {
        "husimi-grid" => husimi_grid(&cfg, seed, &sink),
        "povm-element" => element_cmd(&cfg, seed, &sink),
        "probability" => probability_cmd(&cfg, seed, &sink),
        "covariance-check" => covariance_cmd(&cfg, seed, &sink),
        "normalization" => normalization_cmd(&cfg, seed, &sink),
        "axb-orthogonality" => axb_orthogonality_cmd(&cfg, seed, &sink),
        "axb-povm" => axb_povm_cmd(&cfg, seed, &sink),
        "injectivity" => injectivity_cmd(&cfg, seed, &sink),
        other => Err(Error::Config(format!(
            "unknown command `{other}`; expected one of husimi-grid, povm-element, \
             probability, covariance-check, normalization, axb-orthogonality, \
             axb-povm, injectivity"
        ))),
    }?;
    cfg.finish()?;
    Ok(outcome)
}

fn base_report(command: &str, seed: u64) -> JsonMap {
    JsonMap::new().str("command", command).u64("seed", seed)
}

fn operator_from(cfg: &ConfigFile, key: &str, dim: usize) -> Result<DensityOperator> {
    let spec = OperatorSpec::parse(cfg.get(key).unwrap_or("vacuum"))?;
    spec.materialize(dim, cfg.base_dir())
}

fn quad_from(cfg: &ConfigFile, region: &PhaseSpaceRegion) -> Result<QuadratureSpec> {
    let default = QuadratureSpec::default_for(region)?;
    let rule = match cfg.get("quad_rule") {
        None => default.rule,
        Some("gauss-legendre") => QuadratureRule::GaussLegendre,
        Some("trapezoid") => QuadratureRule::Trapezoid,
        Some(other) => {
            return Err(Error::Config(format!(
                "quad_rule `{other}` must be gauss-legendre or trapezoid"
            )))
        }
    };
    let nodes_p = cfg.get_usize("quad_nodes_p", 64)?;
    let nodes_q = cfg.get_usize("quad_nodes_q", 64)?;
    let bbox = match cfg.get("quad_box") {
        None => default.bounding_box,
        Some(v) => parse_rect("quad_box", v)?,
    };
    Ok(QuadratureSpec::new(rule, nodes_p, nodes_q, bbox))
}

fn husimi_grid(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 32)?;
    let t = operator_from(cfg, "t", dim)?;
    let rho = operator_from(cfg, "rho", dim)?;
    let bbox = match cfg.get("grid_box") {
        None => Rect::new(-4.0, 4.0, -4.0, 4.0)?,
        Some(v) => parse_rect("grid_box", v)?,
    };
    let np = cfg.get_usize("grid_nodes_p", 81)?;
    let nq = cfg.get_usize("grid_nodes_q", 81)?;
    if np < 2 || nq < 2 {
        return Err(Error::TooFewNodes { got: np.min(nq) });
    }
    let mass_tol = match cfg.get("mass_tolerance") {
        None => None,
        Some(v) => Some(
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("mass_tolerance `{v}` is not a number")))?,
        ),
    };

    let engine = DisplacementEngine::new(FockSpace::new(dim)?);
    let hp = (bbox.p_hi - bbox.p_lo) / (np - 1) as f64;
    let hq = (bbox.q_hi - bbox.q_lo) / (nq - 1) as f64;
    let ps: Vec<f64> = (0..np).map(|i| bbox.p_lo + hp * i as f64).collect();
    let qs: Vec<f64> = (0..nq).map(|j| bbox.q_lo + hq * j as f64).collect();
    let mut values = Vec::with_capacity(np * nq);
    let mut min_value = f64::INFINITY;
    for &p in &ps {
        for &q in &qs {
            let v = outcome_density_with_engine(&engine, &t, &rho, p, q)?;
            min_value = min_value.min(v);
            values.push(v);
        }
    }
    let mass: f64 = values.iter().sum::<f64>() * hp * hq;
    let center = values[(np / 2) * nq + nq / 2];

    let nonnegative = min_value >= -1e-12;
    let mass_ok = mass_tol.map(|tol| (mass - 1.0).abs() <= tol);
    let passed = nonnegative && mass_ok.unwrap_or(true);

    let mut report = base_report("husimi-grid", seed)
        .usize("dim", dim)
        .raw(
            "grid",
            JsonMap::new()
                .f64("p_lo", bbox.p_lo)
                .f64("p_hi", bbox.p_hi)
                .f64("q_lo", bbox.q_lo)
                .f64("q_hi", bbox.q_hi)
                .usize("nodes_p", np)
                .usize("nodes_q", nq)
                .render()
                .trim_end()
                .to_string(),
        )
        .f64("center_value", center)
        .f64("min_value", min_value)
        .f64("cell_mass", mass)
        .bool("nonnegative", nonnegative);
    if let (Some(tol), Some(ok)) = (mass_tol, mass_ok) {
        report = report.f64("mass_tolerance", tol).bool("mass_ok", ok);
    }
    let report = report.bool("passed", passed);

    if passed {
        sink.write("heatmap.csv", &heatmap_csv(&ps, &qs, &values))?;
    }
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn element_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 32)?;
    let t = operator_from(cfg, "t", dim)?;
    let region = parse_region(cfg.require("region")?)?;
    let quad = quad_from(cfg, &region)?;
    let check_tol = cfg.get_f64("check_tol", 1e-9)?;

    let element = povm_element(&t, &region, &quad)?;
    // the trace identity holds at the rule's own measure of the region;
    // comparing against exact areas would fold region-discretization error
    // (disk masking) into the operator check
    let measure = region_quadrature_measure(&region, &quad)?;
    let trace_target = measure / TWO_PI;
    let check = psd_hermiticity_report(&element, trace_target, check_tol);

    let mut report = base_report("povm-element", seed)
        .usize("dim", dim)
        .f64("region_measure_quadrature", measure);
    if let Some(area) = region.exact_area() {
        report = report.f64("region_area_exact", area);
    }
    let report = report
        .f64("trace_target", trace_target)
        .f64("trace", element.trace().re)
        .f64("check_tol", check_tol)
        .raw("check", crate::output::check_report_json(&check))
        .bool("passed", check.passed);
    if check.passed {
        sink.write("matrix.json", &matrix_file(&element, &check))?;
    }
    sink.write("report.json", &report.render())?;
    Ok(if check.passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn probability_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 32)?;
    let t = operator_from(cfg, "t", dim)?;
    let rho = operator_from(cfg, "rho", dim)?;
    let region = parse_region(cfg.require("region")?)?;
    let quad = quad_from(cfg, &region)?;
    let consistency_tol = cfg.get_f64("consistency_tol", 1e-12)?;

    let value = probability(&t, &rho, &region, &quad)?;
    let element = povm_element(&t, &region, &quad)?;
    let via_trace = (rho.matrix() * element.matrix()).trace().re;
    let consistency = (value - via_trace).abs();

    let in_range = (-1e-9..=1.0 + 1e-9).contains(&value);
    let consistent = consistency <= consistency_tol;
    let passed = in_range && consistent;

    let report = base_report("probability", seed)
        .usize("dim", dim)
        .f64("probability", value)
        .f64("via_element_trace", via_trace)
        .f64("consistency_defect", consistency)
        .f64("consistency_tol", consistency_tol)
        .bool("in_range", in_range)
        .bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn covariance_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 32)?;
    let t = operator_from(cfg, "t", dim)?;
    let region = parse_region(cfg.require("region")?)?;
    let quad = quad_from(cfg, &region)?;
    let shift = parse_floats("shift", cfg.require("shift")?, 2)?;
    let tolerance = cfg.get_f64("tolerance", 1e-5)?;

    let residual = covariance_residual(&t, (shift[0], shift[1]), &region, &quad)?;
    let passed = residual <= tolerance;

    let report = base_report("covariance-check", seed)
        .usize("dim", dim)
        .f64("shift_p", shift[0])
        .f64("shift_q", shift[1])
        .f64("residual", residual)
        .f64("tolerance", tolerance)
        .bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn normalization_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 32)?;
    let t = operator_from(cfg, "t", dim)?;
    let r = cfg.get_f64("box_half_width", 8.0)?;
    let low_block = cfg.get_usize("low_block", 4)?;
    let nodes = cfg.get_usize("quad_nodes", 128)?;
    let tolerance = cfg.get_f64("tolerance", 1e-3)?;

    let quad = QuadratureSpec::gauss_legendre(nodes, nodes, Rect::new(-r, r, -r, r)?);
    let defect = normalization_defect(&t, r, low_block, &quad)?;
    let passed = defect <= tolerance;

    let report = base_report("normalization", seed)
        .usize("dim", dim)
        .f64("box_half_width", r)
        .usize("low_block", low_block)
        .usize("quad_nodes", nodes)
        .f64("defect", defect)
        .f64("tolerance", tolerance)
        .bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn grid_from(cfg: &ConfigFile) -> Result<Arc<HalfLineGrid>> {
    let x_min = cfg.get_f64("grid_x_min", 1e-3)?;
    let ratio = cfg.get_f64("grid_ratio", 1.02)?;
    let count = cfg.get_usize("grid_count", 512)?;
    HalfLineGrid::geometric(x_min, ratio, count)
}

fn window_from(
    cfg: &ConfigFile,
    grid: &Arc<HalfLineGrid>,
    funcs: &[&crate::axb::SampledFunction],
) -> Result<(GroupRegion, f64)> {
    let bound = modulation_bound(grid, funcs);
    let window = match cfg.get("window") {
        Some(v) => {
            let f = parse_floats("window", v, 4)?;
            GroupRegion::new(f[0], f[1], f[2], f[3])?
        }
        None => {
            let b_half = 10.0f64.min(0.9 * bound);
            let steps = (grid.len() / 3) as i32;
            GroupRegion::new(
                -b_half,
                b_half,
                grid.ratio().powi(-steps),
                grid.ratio().powi(steps),
            )?
        }
    };
    Ok((window, bound))
}

fn axb_orthogonality_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let grid = grid_from(cfg)?;
    let u = match cfg.get("u") {
        None => mid_bump(&grid)?,
        Some(v) => VectorSpec::parse(v)?.materialize(&grid)?,
    };
    let v = match cfg.get("v") {
        None => u.clone(),
        Some(s) => VectorSpec::parse(s)?.materialize(&grid)?,
    };
    let b_nodes = cfg.get_usize("b_nodes", 321)?;
    let tolerance = cfg.get_f64("tolerance", 2e-2)?;
    let (window, bound) = window_from(cfg, &grid, &[&u, &v])?;
    let quad = GroupQuadrature::new(b_nodes)?;

    let integral = wavelet_intensity_integral(&u, &v, &window, &quad)?;
    let defect = orthogonality_defect(&u, &v, &window, &quad)?;
    let passed = defect <= tolerance;
    let (edge_lo, edge_hi) = apply_formal_degree_root(&v).edge_mass();

    let report = base_report("axb-orthogonality", seed)
        .usize("grid_count", grid.len())
        .f64("grid_x_min", grid.x_min())
        .f64("grid_ratio", grid.ratio())
        .raw(
            "window",
            JsonMap::new()
                .f64("b_lo", window.b_lo)
                .f64("b_hi", window.b_hi)
                .f64("a_lo", window.a_lo)
                .f64("a_hi", window.a_hi)
                .usize("b_nodes", b_nodes)
                .render()
                .trim_end()
                .to_string(),
        )
        .f64("modulation_bound", bound)
        .f64("integral", integral)
        .f64("norm_sq_u", u.norm_sq())
        .f64("norm_sq_v", v.norm_sq())
        .f64("defect", defect)
        .f64("tolerance", tolerance)
        .f64("edge_mass_low", edge_lo)
        .f64("edge_mass_high", edge_hi)
        .bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn axb_povm_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let grid = grid_from(cfg)?;
    let u = match cfg.get("u") {
        None => mid_bump(&grid)?,
        Some(v) => VectorSpec::parse(v)?.materialize(&grid)?,
    };
    let rank_one_eta = cfg.get("eta").map(str::to_string);
    let mixture = if let Some(eta_spec) = &rank_one_eta {
        DensityMixture::rank_one(VectorSpec::parse(eta_spec)?.materialize(&grid)?)?
    } else {
        let terms = parse_mixture(cfg.require("t_terms")?)?;
        let materialized: Result<Vec<_>> = terms
            .into_iter()
            .map(|(w, spec)| Ok((w, spec.materialize(&grid)?)))
            .collect();
        DensityMixture::new(materialized?)?
    };
    let b_nodes = cfg.get_usize("b_nodes", 321)?;
    let bound_tolerance = cfg.get_f64("bound_tolerance", 2e-2)?;
    let consistency_tol = cfg.get_f64("consistency_tol", 1e-10)?;

    let mut involved: Vec<&crate::axb::SampledFunction> = vec![&u];
    involved.extend(mixture.terms().iter().map(|(_, e)| e));
    let (window, bound) = window_from(cfg, &grid, &involved)?;
    let quad = GroupQuadrature::new(b_nodes)?;

    let value = povm_quadratic_form(&mixture, &window, &u, &quad)?;
    let upper = u.norm_sq() + bound_tolerance;
    let nonnegative = value >= -1e-10;
    let bounded = value <= upper;

    let mut consistency_defect = None;
    if mixture.terms().len() == 1 {
        let eta = &mixture.terms()[0].1;
        let wav = wavelet_intensity_integral(&u, eta, &window, &quad)?;
        consistency_defect = Some((value - wav).abs());
    }
    let consistent = consistency_defect
        .map(|d| d <= consistency_tol)
        .unwrap_or(true);
    let passed = nonnegative && bounded && consistent;

    let mut report = base_report("axb-povm", seed)
        .usize("grid_count", grid.len())
        .f64("value", value)
        .f64("norm_sq_u", u.norm_sq())
        .f64("upper_bound", upper)
        .f64("modulation_bound", bound)
        .usize("rank", mixture.terms().len())
        .bool("nonnegative", nonnegative)
        .bool("bounded", bounded);
    if let Some(d) = consistency_defect {
        report = report
            .f64("wavelet_consistency_defect", d)
            .f64("consistency_tol", consistency_tol);
    }
    let report = report.bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

fn injectivity_cmd(cfg: &ConfigFile, seed: u64, sink: &Sink) -> Result<RunOutcome> {
    let dim = cfg.get_usize("dim", 8)?;
    let pairs = cfg.get_usize("pairs", 100)?;
    let min_distance = cfg.get_f64("min_trace_distance", 0.1)?;
    let grid_points = cfg.get_usize("grid_points", 21)?;
    let bbox = match cfg.get("points_box") {
        None => Rect::new(-3.0, 3.0, -3.0, 3.0)?,
        Some(v) => parse_rect("points_box", v)?,
    };
    let probes_fock = cfg.get_usize("probes_fock", 4)?;
    let probes_random = cfg.get_usize("probes_random", 4)?;
    let threshold = cfg.get_f64("threshold", 1e-3)?;
    if grid_points < 2 {
        return Err(Error::TooFewNodes { got: grid_points });
    }

    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut probes = Vec::new();
    for level in 0..probes_fock.min(dim) {
        probes.push(DensityOperator::fock_projector(dim, level)?);
    }
    for _ in 0..probes_random {
        probes.push(DensityOperator::random(dim, 1, &mut rng)?);
    }
    let mut points = Vec::with_capacity(grid_points * grid_points);
    let hp = (bbox.p_hi - bbox.p_lo) / (grid_points - 1) as f64;
    let hq = (bbox.q_hi - bbox.q_lo) / (grid_points - 1) as f64;
    for i in 0..grid_points {
        for j in 0..grid_points {
            points.push((bbox.p_lo + hp * i as f64, bbox.q_lo + hq * j as f64));
        }
    }

    let mut min_sup = f64::INFINITY;
    let mut max_sup: f64 = 0.0;
    let mut generated = 0usize;
    while generated < pairs {
        let t1 = DensityOperator::random(dim, dim, &mut rng)?;
        let t2 = DensityOperator::random(dim, dim, &mut rng)?;
        if t1.trace_distance(&t2)? < min_distance {
            continue;
        }
        generated += 1;
        let sup = povm_sup_distance(&t1, &t2, &probes, &points)?;
        min_sup = min_sup.min(sup);
        max_sup = max_sup.max(sup);
    }
    let passed = min_sup > threshold;

    let report = base_report("injectivity", seed)
        .usize("dim", dim)
        .usize("pairs", pairs)
        .f64("min_trace_distance", min_distance)
        .usize("grid_points", grid_points)
        .usize("probes", probes.len())
        .f64("min_sup_distance", min_sup)
        .f64("max_sup_distance", max_sup)
        .f64("threshold", threshold)
        .bool("passed", passed);
    sink.write("report.json", &report.render())?;
    Ok(if passed {
        RunOutcome::Passed
    } else {
        RunOutcome::CheckFailed
    })
}

/// Convenience used by integration tests: run a config given as text.
pub fn run_config_text(
    text: &str,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<RunOutcome> {
    let dir = out_dir.to_path_buf();
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let cfg_path = dir.join("run.config");
    std::fs::write(&cfg_path, text).map_err(|e| Error::Io(format!("cannot write config: {e}")))?;
    run(&RunOptions {
        config_path: cfg_path,
        out_dir: dir,
        seed_override,
    })
}
