//! Curve tables, report documents and the figure data hash.

use std::path::Path;

use lmcf_core::curve::{curvature_and_radial, lagrangian_angle, PlanarCurve, Topology};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    index: usize,
    s: f64,
    x: f64,
    y: f64,
    kappa: f64,
    theta: f64,
}

/// Writes `index,s,x,y,kappa,theta`. Columns that cannot be computed on an
/// under-resolved curve are written as `NaN`.
pub fn write_curve(path: &Path, curve: &PlanarCurve, n: usize) -> CliResult<()> {
    let len = curve.len();
    let (s, kappa) = match curvature_and_radial(curve) {
        Ok(d) => (d.arclength, d.kappa),
        Err(_) => (vec![f64::NAN; len], vec![f64::NAN; len]),
    };
    let theta = lagrangian_angle(curve, n).map_or(vec![f64::NAN; len], |a| a.theta);
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    for (i, z) in curve.nodes().iter().enumerate() {
        w.serialize(CurveRow {
            index: i,
            s: s[i],
            x: z.re,
            y: z.im,
            kappa: kappa[i],
            theta: theta[i],
        })
        .map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

pub fn read_curve(path: &Path, topology: Topology) -> CliResult<PlanarCurve> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut nodes = Vec::new();
    for row in r.deserialize::<CurveRow>() {
        let row = row.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        nodes.push(Complex64::new(row.x, row.y));
    }
    Ok(PlanarCurve::new(nodes, topology)?)
}

/// Any serializable rows as a CSV table.
pub fn write_table<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// `report.toml` for people and `report.json` for scripts, same tree.
pub fn write_report<T: Serialize>(dir: &Path, report: &T) -> CliResult<()> {
    let json = serde_json::to_value(report).map_err(|e| CliError::Numerical(e.to_string()))?;
    let toml_text = toml::to_string_pretty(&strip_nulls(json.clone()))
        .map_err(|e| CliError::Numerical(format!("report: {e}")))?;
    let path = dir.join("report.toml");
    std::fs::write(&path, toml_text).map_err(|e| io_error(&path, e))?;
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| CliError::Numerical(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| io_error(&path, e))
}

/// TOML has no null; drop null members and replace null array items with "none".
fn strip_nulls(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Object(map) => Value::Object(
            map.into_iter()
                .filter(|(_, v)| !v.is_null())
                .map(|(k, v)| (k, strip_nulls(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .map(|v| if v.is_null() { Value::String("none".into()) } else { strip_nulls(v) })
                .collect(),
        ),
        other => other,
    }
}

/// FNV-1a over the bit patterns of every node, in order.
pub fn curve_hash<'a>(curves: impl IntoIterator<Item = &'a PlanarCurve>) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in curves {
        for z in c.nodes() {
            for b in z.re.to_bits().to_le_bytes().into_iter().chain(z.im.to_bits().to_le_bytes()) {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    format!("{h:016x}")
}
