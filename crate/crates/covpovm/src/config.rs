//! Flat key = value run configuration.
//!
//! One `key = value` per line, `#` starts a comment line, blank lines are
//! ignored. The mandatory `command` key selects the computation. Unknown
//! keys are rejected so typos fail loudly instead of silently falling back
//! to defaults.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::axb::{HalfLineGrid, SampledFunction};
use crate::error::{Error, Result};
use crate::heisenberg::{PhaseSpaceRegion, Rect};
use crate::povm::DensityOperator;

/// Parsed config file with used-key tracking.
#[derive(Debug)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
    base_dir: PathBuf,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::parse(&text, base_dir)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(Self {
            entries,
            used: RefCell::new(BTreeSet::new()),
            base_dir,
        })
    }

    /// Directory of the config file; relative paths resolve against it.
    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        let v = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_f64(key, v),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not an integer"))),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not an integer"))),
        }
    }

    /// Fails when any key was never consumed by the selected command.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self.entries.keys().filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown key(s) for this command: {}",
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a number")))
}

/// Comma-separated list of exactly `n` floats.
pub fn parse_floats(key: &str, v: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(Error::Config(format!(
            "key `{key}`: expected {n} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_f64(key, p)).collect()
}

pub fn parse_rect(key: &str, v: &str) -> Result<Rect> {
    let f = parse_floats(key, v, 4)?;
    Rect::new(f[0], f[1], f[2], f[3])
}

/// Region syntax: `;`-separated primitives, each
/// `rect:p_lo,p_hi,q_lo,q_hi` or `disk:center_p,center_q,radius`.
pub fn parse_region(v: &str) -> Result<PhaseSpaceRegion> {
    let mut region = PhaseSpaceRegion::empty();
    let trimmed = v.trim();
    if trimmed.is_empty() || trimmed == "empty" {
        return Ok(region);
    }
    for prim in trimmed.split(';') {
        let prim = prim.trim();
        if let Some(rest) = prim.strip_prefix("rect:") {
            region.add_rect(parse_rect("region", rest)?);
        } else if let Some(rest) = prim.strip_prefix("disk:") {
            let f = parse_floats("region", rest, 3)?;
            region.add_disk(f[0], f[1], f[2])?;
        } else {
            return Err(Error::Config(format!(
                "region primitive `{prim}` must start with rect: or disk:"
            )));
        }
    }
    Ok(region)
}

/// Operator presets: `vacuum`, `fock:n`, `mixed:w1,w2,...`, or
/// `file:path` pointing at a plain-text operator file.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Vacuum,
    Fock(usize),
    Mixed(Vec<f64>),
    File(PathBuf),
}

impl OperatorSpec {
    pub fn parse(v: &str) -> Result<Self> {
        let v = v.trim();
        if v == "vacuum" {
            return Ok(Self::Vacuum);
        }
        if let Some(rest) = v.strip_prefix("fock:") {
            let level: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("fock level `{rest}` is not an integer")))?;
            return Ok(Self::Fock(level));
        }
        if let Some(rest) = v.strip_prefix("mixed:") {
            let weights: Result<Vec<f64>> = rest
                .split(',')
                .map(|p| parse_f64("mixed weights", p.trim()))
                .collect();
            return Ok(Self::Mixed(weights?));
        }
        if let Some(rest) = v.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(rest.trim())));
        }
        Err(Error::Config(format!(
            "operator spec `{v}` is not vacuum | fock:n | mixed:list | file:path"
        )))
    }

    pub fn materialize(&self, dim: usize, base_dir: &Path) -> Result<DensityOperator> {
        match self {
            Self::Vacuum => DensityOperator::vacuum_projector(dim),
            Self::Fock(level) => DensityOperator::fock_projector(dim, *level),
            Self::Mixed(weights) => DensityOperator::mixed_diagonal(dim, weights),
            Self::File(path) => {
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                let mat = read_operator_file(&resolved)?;
                if mat.nrows() != dim {
                    return Err(Error::DimensionMismatch {
                        left: mat.nrows(),
                        right: dim,
                    });
                }
                DensityOperator::validate(mat, 1e-9)
            }
        }
    }
}

/// Plain-text operator file: first data line the dimension `N`, then `N²`
/// lines `re im` in row-major order. `#` comments and blank lines allowed.
pub fn read_operator_file(path: &Path) -> Result<DMatrix<Complex64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read operator file {}: {e}", path.display())))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let dim: usize = lines
        .next()
        .ok_or_else(|| Error::Config("operator file is empty".into()))?
        .parse()
        .map_err(|_| Error::Config("operator file: first line must be the dimension".into()))?;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let line = lines.next().ok_or_else(|| {
                Error::Config(format!(
                    "operator file: expected {} entries, ran out at ({i},{j})",
                    dim * dim
                ))
            })?;
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Config(format!("operator file: bad entry `{line}`")))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Config(format!("operator file: bad entry `{line}`")))?;
            mat[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(mat)
}

/// Half-line test vectors: `midbump` (reference bump in the middle grid
/// third) or `bump:center_x,half_width_ln`.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorSpec {
    MidBump,
    Bump { center: f64, half_width: f64 },
}

impl VectorSpec {
    pub fn parse(v: &str) -> Result<Self> {
        let v = v.trim();
        if v == "midbump" {
            return Ok(Self::MidBump);
        }
        if let Some(rest) = v.strip_prefix("bump:") {
            let f = parse_floats("bump", rest, 2)?;
            return Ok(Self::Bump {
                center: f[0],
                half_width: f[1],
            });
        }
        Err(Error::Config(format!(
            "vector spec `{v}` is not midbump | bump:center,half_width"
        )))
    }

    pub fn materialize(&self, grid: &Arc<HalfLineGrid>) -> Result<SampledFunction> {
        match self {
            Self::MidBump => mid_bump(grid),
            Self::Bump { center, half_width } => {
                SampledFunction::bump(Arc::clone(grid), *center, *half_width)
            }
        }
    }
}

/// Reference bump: unit-norm mollifier filling 45% of the middle grid third.
pub fn mid_bump(grid: &Arc<HalfLineGrid>) -> Result<SampledFunction> {
    let m = grid.len();
    let lo = grid.node(m / 3);
    let hi = grid.node(2 * m / 3);
    let center = (lo * hi).sqrt();
    let half_width = 0.45 * (hi / lo).ln() / 2.0;
    SampledFunction::bump(Arc::clone(grid), center, half_width)
}

/// Mixture syntax: `;`-separated `weight@vector-spec` terms.
pub fn parse_mixture(v: &str) -> Result<Vec<(f64, VectorSpec)>> {
    let mut terms = Vec::new();
    for part in v.split(';') {
        let part = part.trim();
        let Some((w, spec)) = part.split_once('@') else {
            return Err(Error::Config(format!(
                "mixture term `{part}` must be weight@vector-spec"
            )));
        };
        terms.push((
            parse_f64("mixture weight", w.trim())?,
            VectorSpec::parse(spec)?,
        ));
    }
    if terms.is_empty() {
        return Err(Error::Config("mixture must have at least one term".into()));
    }
    Ok(terms)
}
