//! Text cache for sphere rules.
//!
//! One CSV file per `(n, order, grading)` under `$TALPHA_CACHE_DIR`:
//!
//! ```text
//! # talpha sphere rule n=3 order=16 grading=uniform
//! x1,x2,x3,weight
//! 1.0000000000000000e0,...
//! ```
//!
//! Values are written with 17 significant digits, which round-trips `f64`
//! exactly, so a cached rule is bit-identical to a freshly built one.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sphere::{Grading, SphereRule};
use crate::moebius::SpherePoint;
use crate::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "TALPHA_CACHE_DIR";

/// The cache directory, if configured.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn file_name(n: usize, order: usize, grading: Grading) -> String {
    format!("sphere_n{n}_o{order}_{}.csv", grading.label())
}

/// Serialize a rule in the cache format.
pub fn to_csv(rule: &SphereRule) -> String {
    let n = rule.dim();
    let mut out = format!(
        "# talpha sphere rule n={n} order={} grading={}\n",
        rule.order(),
        rule.grading().label()
    );
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).chain(["weight".into()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (p, w) in rule.nodes().iter().zip(rule.weights()) {
        for c in p.coords() {
            let _ = write!(out, "{c:.16e},");
        }
        let _ = writeln!(out, "{w:.16e}");
    }
    out
}

/// Parse a rule written by [`to_csv`].
pub fn from_csv(text: &str, n: usize, order: usize, grading: Grading) -> Result<SphereRule> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().ok_or_else(|| Error::Cache("missing header".into()))?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Cache(format!("line {}: {e}", i + 2)))?;
        if vals.len() != n + 1 {
            return Err(Error::Cache(format!("line {}: expected {} fields, found {}", i + 2, n + 1, vals.len())));
        }
        nodes.push(SpherePoint::new(vals[..n].to_vec()).map_err(|e| Error::Cache(e.to_string()))?);
        weights.push(vals[n]);
    }
    if nodes.is_empty() {
        return Err(Error::Cache("no nodes".into()));
    }
    Ok(SphereRule::from_parts(n, order, grading, nodes, weights))
}

/// Load the rule from `dir` or build and store it.
pub fn load_or_build_in(dir: &Path, n: usize, order: usize, grading: Grading) -> Result<SphereRule> {
    let path = dir.join(file_name(n, order, grading));
    if let Ok(text) = fs::read_to_string(&path) {
        match from_csv(&text, n, order, grading) {
            Ok(rule) => return Ok(rule),
            Err(e) => log::warn!("ignoring unreadable rule cache {}: {e}", path.display()),
        }
    }
    let rule = SphereRule::with_grading(n, order, grading)?;
    if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(&path, to_csv(&rule))) {
        log::warn!("could not write rule cache {}: {e}", path.display());
    }
    Ok(rule)
}

/// A sphere rule, served from `$TALPHA_CACHE_DIR` when set.
pub fn cached_sphere_rule(n: usize, order: usize, grading: Grading) -> Result<SphereRule> {
    match cache_dir() {
        Some(dir) => load_or_build_in(&dir, n, order, grading),
        None => SphereRule::with_grading(n, order, grading),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let rule = SphereRule::new(4, 3).unwrap();
        let back = from_csv(&to_csv(&rule), 4, 3, Grading::Uniform).unwrap();
        assert_eq!(rule, back);
    }

    #[test]
    fn cache_directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = load_or_build_in(dir.path(), 3, 5, Grading::Uniform).unwrap();
        assert!(dir.path().join("sphere_n3_o5_uniform.csv").exists());
        let b = load_or_build_in(dir.path(), 3, 5, Grading::Uniform).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(from_csv("x1,x2,weight\n1.0,0.0\n", 2, 2, Grading::Uniform).is_err());
    }
}
