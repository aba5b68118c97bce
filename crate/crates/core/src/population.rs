//! Finite populations and their parameters.
//!
//! Two ways in: raw unit data (`y,x,z` CSV) reduced by [`summarize`], or a
//! `key = value` summary file read by [`load_summary`] when only published
//! summary statistics exist.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::accum::NeumaierSum;

/// Summary statistics published for the head-measurement data, shipped with the crate.
pub const ANDERSON_SUMMARY: &str = include_str!("../data/anderson.summary");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub y: f64,
    pub x: f64,
    pub z: f64,
}

/// An ordered list of units. Immutable once built; `N >= 2` and every value finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePopulation {
    units: Vec<Unit>,
    label: String,
}

impl FinitePopulation {
    pub fn new(label: impl Into<String>, units: Vec<Unit>) -> Result<Self> {
        if units.len() < 2 {
            return Err(Error::TooFewUnits(units.len()));
        }
        for (i, u) in units.iter().enumerate() {
            if !(u.y.is_finite() && u.x.is_finite() && u.z.is_finite()) {
                return Err(Error::Parse {
                    row: i + 1,
                    message: "non-finite value".into(),
                });
            }
        }
        Ok(Self {
            units,
            label: label.into(),
        })
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Writes the population as `y,x,z` CSV.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["y", "x", "z"])?;
        for u in &self.units {
            w.write_record([u.y.to_string(), u.x.to_string(), u.z.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads a population from CSV with the mandatory header `y,x,z`.
///
/// Rows are numbered from 1 (the first data row) in error messages.
pub fn load_population<R: Read>(source: R, label: &str) -> Result<FinitePopulation> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(Error::TooFewUnits(0)),
        Some(h) => h.map_err(|e| Error::Parse {
            row: 0,
            message: e.to_string(),
        })?,
    };
    let names: Vec<&str> = header.iter().collect();
    if names != ["y", "x", "z"] {
        return Err(Error::Parse {
            row: 0,
            message: format!(
                "header must be exactly `y,x,z`, found `{}`",
                names.join(",")
            ),
        });
    }

    let mut units = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if rec.len() != 3 {
            return Err(Error::Parse {
                row,
                message: format!("expected 3 fields, found {}", rec.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (slot, (field, name)) in vals.iter_mut().zip(rec.iter().zip(["y", "x", "z"])) {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                row,
                message: format!("{name}: `{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    message: format!("{name}: non-finite value `{field}`"),
                });
            }
            *slot = v;
        }
        units.push(Unit {
            y: vals[0],
            x: vals[1],
            z: vals[2],
        });
    }
    FinitePopulation::new(label, units)
}

/// Every population parameter the estimator and MSE formulas consume.
///
/// `S²` quantities and covariances use divisor `N - 1`. CVs are `S / |mean|`.
/// `beta1_z = m3² / m2³` and `beta2_z = m4 / m2²` with central moments `m_r`
/// taken with divisor `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSummary {
    pub n_population: usize,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
    pub s2_y: f64,
    pub s2_x: f64,
    pub s2_z: f64,
    pub s_xy: f64,
    pub s_xz: f64,
    pub s_yz: f64,
    pub cv_y: f64,
    pub cv_x: f64,
    pub cv_z: f64,
    pub rho_xy: f64,
    pub rho_xz: f64,
    pub rho_yz: f64,
    pub sigma_z: f64,
    pub beta1_z: f64,
    pub beta2_z: f64,
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.collect::<NeumaierSum>().value() / n as f64
}

/// Computes the population parameters from raw unit data.
pub fn summarize(pop: &FinitePopulation) -> Result<PopulationSummary> {
    let units = pop.units();
    let n = units.len();
    if n < 2 {
        return Err(Error::TooFewUnits(n));
    }
    let nf = n as f64;
    let mean_y = mean(units.iter().map(|u| u.y), n);
    let mean_x = mean(units.iter().map(|u| u.x), n);
    let mean_z = mean(units.iter().map(|u| u.z), n);

    let mut acc = [NeumaierSum::default(); 6];
    let mut m = [NeumaierSum::default(); 3]; // z central moments 2..4
    for u in units {
        let (dy, dx, dz) = (u.y - mean_y, u.x - mean_x, u.z - mean_z);
        acc[0].add(dy * dy);
        acc[1].add(dx * dx);
        acc[2].add(dz * dz);
        acc[3].add(dx * dy);
        acc[4].add(dx * dz);
        acc[5].add(dy * dz);
        let dz2 = dz * dz;
        m[0].add(dz2);
        m[1].add(dz2 * dz);
        m[2].add(dz2 * dz2);
    }
    let d = nf - 1.0;
    let [s2_y, s2_x, s2_z, s_xy, s_xz, s_yz] = acc.map(|a| a.value() / d);

    for (name, mu) in [("y", mean_y), ("x", mean_x), ("z", mean_z)] {
        if mu == 0.0 {
            return Err(Error::ZeroMean(name));
        }
    }
    let (m2, m3, m4) = (m[0].value() / nf, m[1].value() / nf, m[2].value() / nf);
    if s2_z <= 0.0 || m2 <= 0.0 {
        return Err(Error::ZeroVarianceZ);
    }

    let corr = |c: f64, a: f64, b: f64| {
        if a > 0.0 && b > 0.0 {
            (c / (a * b).sqrt()).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    };

    Ok(PopulationSummary {
        n_population: n,
        mean_y,
        mean_x,
        mean_z,
        s2_y,
        s2_x,
        s2_z,
        s_xy,
        s_xz,
        s_yz,
        cv_y: s2_y.sqrt() / mean_y.abs(),
        cv_x: s2_x.sqrt() / mean_x.abs(),
        cv_z: s2_z.sqrt() / mean_z.abs(),
        rho_xy: corr(s_xy, s2_x, s2_y),
        rho_xz: corr(s_xz, s2_x, s2_z),
        rho_yz: corr(s_yz, s2_y, s2_z),
        sigma_z: s2_z.sqrt(),
        beta1_z: m3 * m3 / (m2 * m2 * m2),
        beta2_z: m4 / (m2 * m2),
    })
}

/// Keys a summary file must define, in the order they are written.
pub const SUMMARY_KEYS: [&str; 13] = [
    "N", "mean_y", "mean_x", "mean_z", "cv_y", "cv_x", "cv_z", "rho_xy", "rho_xz", "rho_yz",
    "sigma_z", "beta1_z", "beta2_z",
];

/// Reads a `key = value` summary file. `#` starts a comment; an optional
/// `label` key is accepted and ignored.
///
/// Values are taken verbatim. `S²` and covariances are back-filled from the
/// means, CVs and correlations. Mutually inconsistent inputs (for example
/// `sigma_z != cv_z * mean_z`) are accepted; see [`consistency_warnings`].
pub fn load_summary<R: Read>(mut source: R) -> Result<PopulationSummary> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;

    let mut values: BTreeMap<&str, &str> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            row: lineno + 1,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key == "label" {
            continue;
        }
        if !SUMMARY_KEYS.contains(&key) {
            return Err(Error::InvalidValue {
                key: key.into(),
                reason: "unknown key".into(),
            });
        }
        if values.insert(key, value).is_some() {
            return Err(Error::InvalidValue {
                key: key.into(),
                reason: "duplicate key".into(),
            });
        }
    }

    let get = |key: &str| -> Result<f64> {
        let raw = values
            .get(key)
            .ok_or_else(|| Error::MissingKey(key.into()))?;
        let v: f64 = raw.parse().map_err(|_| Error::InvalidValue {
            key: key.into(),
            reason: format!("`{raw}` is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::InvalidValue {
                key: key.into(),
                reason: "non-finite value".into(),
            });
        }
        Ok(v)
    };
    let invalid = |key: &str, reason: &str| Error::InvalidValue {
        key: key.into(),
        reason: reason.into(),
    };

    // Look every key up first so a missing key is reported before range errors.
    let mut got = BTreeMap::new();
    for key in SUMMARY_KEYS {
        got.insert(key, get(key)?);
    }
    let n = got["N"];
    if n.fract() != 0.0 || n < 2.0 {
        return Err(invalid("N", "must be an integer >= 2"));
    }
    for key in ["mean_y", "mean_x", "mean_z"] {
        if got[key] == 0.0 {
            return Err(invalid(key, "must be non-zero"));
        }
    }
    for key in ["cv_y", "cv_x", "cv_z"] {
        if got[key] <= 0.0 {
            return Err(invalid(key, "must be > 0"));
        }
    }
    for key in ["rho_xy", "rho_xz", "rho_yz"] {
        if got[key].abs() > 1.0 {
            return Err(invalid(key, "must lie in [-1, 1]"));
        }
    }
    if got["sigma_z"] < 0.0 {
        return Err(invalid("sigma_z", "must be >= 0"));
    }
    if got["beta1_z"] < 0.0 {
        return Err(invalid("beta1_z", "must be >= 0"));
    }
    if got["beta2_z"] <= 0.0 {
        return Err(invalid("beta2_z", "must be > 0"));
    }

    let (mean_y, mean_x, mean_z) = (got["mean_y"], got["mean_x"], got["mean_z"]);
    let (cv_y, cv_x, cv_z) = (got["cv_y"], got["cv_x"], got["cv_z"]);
    let (sd_y, sd_x, sd_z) = (
        cv_y * mean_y.abs(),
        cv_x * mean_x.abs(),
        cv_z * mean_z.abs(),
    );
    let (rho_xy, rho_xz, rho_yz) = (got["rho_xy"], got["rho_xz"], got["rho_yz"]);

    Ok(PopulationSummary {
        n_population: n as usize,
        mean_y,
        mean_x,
        mean_z,
        s2_y: sd_y * sd_y,
        s2_x: sd_x * sd_x,
        s2_z: sd_z * sd_z,
        s_xy: rho_xy * sd_x * sd_y,
        s_xz: rho_xz * sd_x * sd_z,
        s_yz: rho_yz * sd_y * sd_z,
        cv_y,
        cv_x,
        cv_z,
        rho_xy,
        rho_xz,
        rho_yz,
        sigma_z: got["sigma_z"],
        beta1_z: got["beta1_z"],
        beta2_z: got["beta2_z"],
    })
}

impl PopulationSummary {
    /// The bundled head-measurement summary.
    pub fn anderson() -> Self {
        load_summary(ANDERSON_SUMMARY.as_bytes()).expect("bundled summary is valid")
    }

    /// Serializes to the `key = value` format read by [`load_summary`].
    /// Values use shortest round-trip formatting.
    pub fn to_kv_string(&self, label: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(label) = label {
            let _ = writeln!(out, "label = {label}");
        }
        let _ = writeln!(out, "N = {}", self.n_population);
        for (key, value) in [
            ("mean_y", self.mean_y),
            ("mean_x", self.mean_x),
            ("mean_z", self.mean_z),
            ("cv_y", self.cv_y),
            ("cv_x", self.cv_x),
            ("cv_z", self.cv_z),
            ("rho_xy", self.rho_xy),
            ("rho_xz", self.rho_xz),
            ("rho_yz", self.rho_yz),
            ("sigma_z", self.sigma_z),
            ("beta1_z", self.beta1_z),
            ("beta2_z", self.beta2_z),
        ] {
            let _ = writeln!(out, "{key} = {value:?}");
        }
        out
    }
}

/// Non-fatal observations about a summary whose values disagree with each
/// other. Never an error: published summaries are used as given.
pub fn consistency_warnings(s: &PopulationSummary) -> Vec<String> {
    let mut warnings = Vec::new();
    let implied = s.cv_z * s.mean_z.abs();
    if implied > 0.0 && ((s.sigma_z - implied) / implied).abs() > 1e-3 {
        warnings.push(format!(
            "sigma_z = {} differs from cv_z * |mean_z| = {:.4}",
            s.sigma_z, implied
        ));
    }
    if s.beta2_z < 1.0 + s.beta1_z {
        warnings.push(format!(
            "beta2_z = {} is below 1 + beta1_z = {}; no distribution has these moments",
            s.beta2_z,
            1.0 + s.beta1_z
        ));
    }
    warnings
}
