//! File formats and report rendering: point-cloud CSV, grid CSV/JSON,
//! JSON reports with a stable schema, and aligned text tables.
//!
//! Scalars are serialized through `f64`; run in `f64` when bit-stable
//! output matters.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{ConvergenceTable, GradientProbe, OscillationReport};
use crate::error::Error;
use crate::geometry::{Hull, Point, PointCloud};
use crate::quantum::{DensityMatrix, PureDecomposition, PureState, C};
use crate::roof::{AffineFunctional, FlatSet, RoofGrid, RoofValue};
use crate::scalar::Float;
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

fn f64_of<S: Float>(x: S) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn vec_f64<S: Float>(xs: &[S]) -> Vec<f64> {
    xs.iter().map(|&x| f64_of(x)).collect()
}

/// `%.{digits}g`-style formatting for table output.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let mag = x.abs().log10().floor() as i32;
    if mag >= -4 && (mag as i64) < digits as i64 {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // trim trailing zeros but keep at least one digit
        if s.contains('.') {
            let t = s.trim_end_matches('0').trim_end_matches('.');
            t.to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

// ---------------------------------------------------------------------
// point-cloud CSV: header x1,...,xd,f; comments start with '#'

pub fn read_point_cloud<S: Float, R: Read>(reader: R) -> Result<(PointCloud<S>, Vec<S>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::Parse(
            "point-cloud CSV needs at least one coordinate column and the value column".into(),
        ));
    }
    let d = headers.len() - 1;
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != d + 1 {
            return Err(Error::Parse(format!(
                "row has {} fields, expected {}",
                record.len(),
                d + 1
            )));
        }
        let mut coords = Vec::with_capacity(d);
        for field in record.iter().take(d) {
            let v: f64 = field
                .parse()
                .map_err(|e| Error::Parse(format!("bad coordinate `{field}`: {e}")))?;
            coords.push(S::of(v));
        }
        let v: f64 = record[d]
            .parse()
            .map_err(|e| Error::Parse(format!("bad value `{}`: {e}", &record[d])))?;
        rows.push(coords);
        values.push(S::of(v));
    }
    Ok((PointCloud::from_rows(rows)?, values))
}

pub fn write_point_cloud<S: Float, W: Write>(
    mut writer: W,
    cloud: &PointCloud<S>,
    values: &[S],
) -> Result<()> {
    let d = cloud.dim();
    let header: Vec<String> = (1..=d)
        .map(|j| format!("x{j}"))
        .chain(std::iter::once("f".to_string()))
        .collect();
    writeln!(writer, "{}", header.join(","))?;
    for i in 0..cloud.len() {
        let mut fields: Vec<String> = cloud.coords(i).iter().map(|&c| full(c)).collect();
        fields.push(full(values[i]));
        writeln!(writer, "{}", fields.join(","))?;
    }
    Ok(())
}

fn full<S: Float>(x: S) -> String {
    let v = f64_of(x);
    // shortest representation that round-trips
    format!("{v:?}")
}

// ---------------------------------------------------------------------
// grid output

#[derive(Debug, Serialize, Deserialize)]
pub struct GridJson {
    pub schema_version: u32,
    pub bbox_lo: Vec<f64>,
    pub bbox_hi: Vec<f64>,
    pub resolution: usize,
    pub dim: usize,
    pub values: Vec<Option<f64>>,
}

pub fn grid_json<S: Float>(grid: &RoofGrid<S>) -> GridJson {
    GridJson {
        schema_version: SCHEMA_VERSION,
        bbox_lo: vec_f64(&grid.bbox_lo),
        bbox_hi: vec_f64(&grid.bbox_hi),
        resolution: grid.resolution,
        dim: grid.dim,
        values: grid.values.iter().map(|v| v.map(f64_of)).collect(),
    }
}

/// CSV `x1,...,xd,value` with an empty value field for out-of-hull cells.
pub fn grid_to_csv<S: Float, W: Write>(mut writer: W, grid: &RoofGrid<S>) -> Result<()> {
    let header: Vec<String> = (1..=grid.dim)
        .map(|j| format!("x{j}"))
        .chain(std::iter::once("value".to_string()))
        .collect();
    writeln!(writer, "{}", header.join(","))?;
    for (cell, value) in grid.values.iter().enumerate() {
        let coords = grid.cell_coords(cell);
        let mut fields: Vec<String> = coords.iter().map(|&c| full(c)).collect();
        fields.push(value.map(|v| full(v)).unwrap_or_default());
        writeln!(writer, "{}", fields.join(","))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// roof value / flat set / hyperplane / hull

#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionEntryJson {
    pub index: usize,
    pub weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RoofValueJson {
    pub schema_version: u32,
    pub query: Vec<f64>,
    pub value: f64,
    pub decomposition: Vec<DecompositionEntryJson>,
}

pub fn roof_value_json<S: Float>(rv: &RoofValue<S>) -> RoofValueJson {
    RoofValueJson {
        schema_version: SCHEMA_VERSION,
        query: vec_f64(rv.query.coords()),
        value: f64_of(rv.value),
        decomposition: rv
            .decomposition
            .entries()
            .iter()
            .map(|&(index, w)| DecompositionEntryJson {
                index,
                weight: f64_of(w),
            })
            .collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FacetJson {
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HullJson {
    pub schema_version: u32,
    pub vertex_indices: Vec<usize>,
    pub affine_dim: usize,
    pub facets: Option<Vec<FacetJson>>,
}

pub fn hull_json<S: Float>(hull: &Hull<S>) -> HullJson {
    HullJson {
        schema_version: SCHEMA_VERSION,
        vertex_indices: hull.vertex_indices.clone(),
        affine_dim: hull.affine_dim,
        facets: hull.facets.as_ref().map(|fs| {
            fs.iter()
                .map(|f| FacetJson {
                    vertices: f.vertices.clone(),
                    normal: vec_f64(&f.normal),
                    offset: f64_of(f.offset),
                })
                .collect()
        }),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub gradient: Vec<f64>,
    pub offset: f64,
}

pub fn functional_json<S: Float>(f: &AffineFunctional<S>) -> FunctionalJson {
    FunctionalJson {
        gradient: vec_f64(&f.gradient),
        offset: f64_of(f.offset),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FlatSetJson {
    pub schema_version: u32,
    pub query: Vec<f64>,
    pub support_indices: Vec<usize>,
    pub support: Vec<Vec<f64>>,
    pub functional: FunctionalJson,
    pub barycenter_error: f64,
}

pub fn flat_set_json<S: Float>(query: &Point<S>, flat: &FlatSet<S>) -> FlatSetJson {
    FlatSetJson {
        schema_version: SCHEMA_VERSION,
        query: vec_f64(query.coords()),
        support_indices: flat.support_indices.clone(),
        support: flat.support.iter().map(|p| vec_f64(p.coords())).collect(),
        functional: functional_json(&flat.functional),
        barycenter_error: f64_of(flat.barycenter_error),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HyperplaneJson {
    pub schema_version: u32,
    pub point: Vec<f64>,
    pub gradient_bound: f64,
    pub feasible: bool,
    pub functional: Option<FunctionalJson>,
}

// ---------------------------------------------------------------------
// analysis reports

#[derive(Debug, Serialize, Deserialize)]
pub struct OscillationEntryJson {
    pub radius: f64,
    pub osc: Option<f64>,
    pub samples: usize,
    pub note: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OscillationJson {
    pub schema_version: u32,
    pub center: Vec<f64>,
    pub center_value: f64,
    pub seed: u64,
    pub entries: Vec<OscillationEntryJson>,
}

pub fn oscillation_json<S: Float>(report: &OscillationReport<S>) -> OscillationJson {
    OscillationJson {
        schema_version: SCHEMA_VERSION,
        center: vec_f64(report.center.coords()),
        center_value: f64_of(report.center_value),
        seed: report.seed,
        entries: report
            .entries
            .iter()
            .map(|e| OscillationEntryJson {
                radius: f64_of(e.radius),
                osc: e.osc.map(f64_of),
                samples: e.samples,
                note: e.note.clone(),
            })
            .collect(),
    }
}

pub fn oscillation_table<S: Float>(report: &OscillationReport<S>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "oscillation around {:?} (center value {})\n",
        vec_f64(report.center.coords()),
        format_significant(f64_of(report.center_value), 6)
    ));
    out.push_str(&format!(
        "{:>12} {:>14} {:>9}  note\n",
        "radius", "osc", "samples"
    ));
    for e in &report.entries {
        out.push_str(&format!(
            "{:>12} {:>14} {:>9}  {}\n",
            format_significant(f64_of(e.radius), 6),
            e.osc
                .map(|o| format_significant(f64_of(o), 6))
                .unwrap_or_else(|| "-".into()),
            e.samples,
            e.note.clone().unwrap_or_default()
        ));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GradientProbeJson {
    pub schema_version: u32,
    pub point: Vec<f64>,
    pub step: f64,
    pub grad: Vec<f64>,
    pub hessian_diag: Vec<f64>,
    pub one_sided: Vec<bool>,
}

pub fn gradient_probe_json<S: Float>(probe: &GradientProbe<S>) -> GradientProbeJson {
    GradientProbeJson {
        schema_version: SCHEMA_VERSION,
        point: vec_f64(probe.point.coords()),
        step: f64_of(probe.step),
        grad: vec_f64(&probe.grad),
        hessian_diag: vec_f64(&probe.hessian_diag),
        one_sided: probe.one_sided.clone(),
    }
}

pub fn gradient_probe_table<S: Float>(probe: &GradientProbe<S>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "finite differences at {:?} with step {}\n",
        vec_f64(probe.point.coords()),
        format_significant(f64_of(probe.step), 6)
    ));
    out.push_str(&format!(
        "{:>5} {:>14} {:>14} {:>10}\n",
        "axis", "grad", "hess_diag", "one_sided"
    ));
    for axis in 0..probe.grad.len() {
        out.push_str(&format!(
            "{:>5} {:>14} {:>14} {:>10}\n",
            axis,
            format_significant(f64_of(probe.grad[axis]), 6),
            format_significant(f64_of(probe.hessian_diag[axis]), 6),
            probe.one_sided[axis]
        ));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConvergenceRowJson {
    pub resolution: usize,
    pub probe: Vec<f64>,
    pub roof: f64,
    pub oracle: Option<f64>,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConvergenceJson {
    pub schema_version: u32,
    pub example: String,
    pub seed: u64,
    pub rows: Vec<ConvergenceRowJson>,
}

pub fn convergence_json<S: Float>(table: &ConvergenceTable<S>) -> ConvergenceJson {
    ConvergenceJson {
        schema_version: SCHEMA_VERSION,
        example: table.example.to_string(),
        seed: table.seed,
        rows: table
            .rows
            .iter()
            .map(|r| ConvergenceRowJson {
                resolution: r.resolution,
                probe: vec_f64(r.probe.coords()),
                roof: f64_of(r.roof),
                oracle: r.oracle.map(f64_of),
                abs_error: r.abs_error.map(f64_of),
            })
            .collect(),
    }
}

pub fn convergence_table_text<S: Float>(table: &ConvergenceTable<S>) -> String {
    let mut out = String::new();
    out.push_str(&format!("refinement study: {}\n", table.example));
    out.push_str(&format!(
        "{:>11} {:>24} {:>14} {:>14} {:>14}\n",
        "resolution", "probe", "roof", "oracle", "abs_error"
    ));
    for r in &table.rows {
        let probe = r
            .probe
            .coords()
            .iter()
            .map(|&c| format_significant(f64_of(c), 4))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{:>11} {:>24} {:>14} {:>14} {:>14}\n",
            r.resolution,
            probe,
            format_significant(f64_of(r.roof), 6),
            r.oracle
                .map(|o| format_significant(f64_of(o), 6))
                .unwrap_or_else(|| "-".into()),
            r.abs_error
                .map(|e| format_significant(f64_of(e), 6))
                .unwrap_or_else(|| "-".into()),
        ));
    }
    out
}

// ---------------------------------------------------------------------
// quantum state input and results

#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

pub fn density_matrix_from_json<S: Float, R: Read>(reader: R) -> Result<DensityMatrix<S>> {
    let parsed: StateJson = serde_json::from_reader(reader)?;
    if parsed.re.len() != 4 || parsed.im.len() != 4 {
        return Err(Error::Parse("state JSON must carry 4×4 re/im arrays".into()));
    }
    let m = (0..4)
        .map(|i| {
            if parsed.re[i].len() != 4 || parsed.im[i].len() != 4 {
                return Err(Error::Parse("state JSON must carry 4×4 re/im arrays".into()));
            }
            Ok((0..4)
                .map(|j| C::new(S::of(parsed.re[i][j]), S::of(parsed.im[i][j])))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    DensityMatrix::new(m)
}

/// Named state generators: `bell`, `werner:p`, `random:seed:rank`.
pub fn parse_state_name<S: Float>(text: &str) -> Result<DensityMatrix<S>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["bell"] => Ok(DensityMatrix::from_pure(&PureState::bell_phi_plus())),
        ["werner", p] => {
            let p: f64 = p
                .parse()
                .map_err(|e| Error::Parse(format!("bad mixing parameter `{p}`: {e}")))?;
            DensityMatrix::werner(S::of(p))
        }
        ["random", seed, rank] => {
            let seed: u64 = seed
                .parse()
                .map_err(|e| Error::Parse(format!("bad seed `{seed}`: {e}")))?;
            let rank: usize = rank
                .parse()
                .map_err(|e| Error::Parse(format!("bad rank `{rank}`: {e}")))?;
            DensityMatrix::random(seed, rank)
        }
        _ => Err(Error::Parse(format!(
            "unknown state `{text}`; expected bell, werner:p, random:seed:rank, or a JSON file"
        ))),
    }
}

pub fn density_matrix_json<S: Float>(rho: &DensityMatrix<S>) -> StateJson {
    let m = rho.matrix();
    StateJson {
        re: (0..4)
            .map(|i| (0..4).map(|j| f64_of(m[i][j].re)).collect())
            .collect(),
        im: (0..4)
            .map(|i| (0..4).map(|j| f64_of(m[i][j].im)).collect())
            .collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleMemberJson {
    pub probability: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EntangleJson {
    pub schema_version: u32,
    pub state: String,
    pub measure: String,
    /// The numeric roof value; an upper bound on the true roof.
    pub upper_bound: f64,
    pub oracle: Option<f64>,
    pub gap: Option<f64>,
    pub ensemble_size: usize,
    pub restarts: usize,
    pub converged: bool,
    pub ensemble: Vec<EnsembleMemberJson>,
}

pub fn ensemble_json<S: Float>(dec: &PureDecomposition<S>) -> Vec<EnsembleMemberJson> {
    dec.members
        .iter()
        .map(|(p, psi)| EnsembleMemberJson {
            probability: f64_of(*p),
            re: psi.amplitudes().iter().map(|z| f64_of(z.re)).collect(),
            im: psi.amplitudes().iter().map(|z| f64_of(z.im)).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_cloud_csv_round_trip() {
        let csv_text = "# a comment\nx1,x2,f\n0.0,0.0,1.0\n1.0,0.0,2.5\n0.5,1.0,-0.25\n";
        let (cloud, values) = read_point_cloud::<f64, _>(csv_text.as_bytes()).unwrap();
        assert_eq!(cloud.len(), 3);
        assert_eq!(cloud.dim(), 2);
        assert_eq!(values, vec![1.0, 2.5, -0.25]);
        let mut buf = Vec::new();
        write_point_cloud(&mut buf, &cloud, &values).unwrap();
        let (cloud2, values2) = read_point_cloud::<f64, _>(buf.as_slice()).unwrap();
        assert_eq!(values, values2);
        for i in 0..cloud.len() {
            assert_eq!(cloud.coords(i), cloud2.coords(i));
        }
    }

    #[test]
    fn bad_rows_are_rejected() {
        let csv_text = "x1,x2,f\n1.0,oops,0.0\n";
        assert!(read_point_cloud::<f64, _>(csv_text.as_bytes()).is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(1.0, 6), "1");
        assert_eq!(format_significant(0.5, 6), "0.5");
        assert_eq!(format_significant(123.456789, 6), "123.457");
        assert_eq!(format_significant(0.000012345678, 6), "1.23457e-5");
        assert_eq!(format_significant(-2.0 / 3.0, 6), "-0.666667");
    }

    #[test]
    fn named_states_parse() {
        assert!(parse_state_name::<f64>("bell").is_ok());
        assert!(parse_state_name::<f64>("werner:0.5").is_ok());
        assert!(parse_state_name::<f64>("random:3:2").is_ok());
        assert!(parse_state_name::<f64>("werner:2.0").is_err());
        assert!(parse_state_name::<f64>("garbage").is_err());
    }

    #[test]
    fn state_json_round_trip() {
        let rho = DensityMatrix::<f64>::werner(0.3).unwrap();
        let json = serde_json::to_string(&density_matrix_json(&rho)).unwrap();
        let back = density_matrix_from_json::<f64, _>(json.as_bytes()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((rho.matrix()[i][j] - back.matrix()[i][j]).norm() < 1e-15);
            }
        }
    }
}
