//! Trajectory CSV, JSON classification reports, and SVG plots.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::classify::ClassificationReport;
use crate::conservation::momentum;
use crate::dynamics::{accel, equilibrium, Trajectory};
use crate::error::{Error, Result};
use crate::model::curvature;

pub const CSV_HEADER: [&str; 7] = ["s", "r", "dr", "kappa", "J", "x", "y"];

/// JSON Schema for [`ReportJson`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// One CSV line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub s: f64,
    pub r: f64,
    pub dr: f64,
    pub kappa: f64,
    pub j: f64,
    pub x: f64,
    pub y: f64,
}

impl CsvRow {
    fn fields(&self) -> [f64; 7] {
        [self.s, self.r, self.dr, self.kappa, self.j, self.x, self.y]
    }
}

/// Rows over `[-reach, reach]`, including log-mode tail points.
pub fn trajectory_rows(traj: &Trajectory) -> Result<Vec<CsvRow>> {
    let alpha = traj.params().alpha();
    let mut half: Vec<(f64, f64, f64)> = traj.samples().iter().map(|p| (p.s, p.r, p.dr)).collect();
    half.extend(traj.tail().iter().map(|t| (t.s, t.r, 1.0 / t.q)));
    let full = half
        .iter()
        .skip(1)
        .rev()
        .map(|&(s, r, dr)| (-s, r, -dr))
        .chain(half.iter().copied());
    full.map(|(s, r, dr)| {
        Ok(CsvRow {
            s,
            r,
            dr,
            kappa: curvature(r, dr, accel(alpha, r, dr)),
            j: momentum(traj.params(), r, dr)?,
            x: r * s.cos(),
            y: r * s.sin(),
        })
    })
    .collect()
}

/// Writes rows with a header, LF line endings and 17 significant digits.
pub fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.fields().iter().map(|v| format!("{v:.16e}"))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rd.headers().map_err(csv_error)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    rd.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_error)?;
            if rec.len() != CSV_HEADER.len() {
                return Err(Error::Format(format!("row {}: expected 7 fields, found {}", i + 1, rec.len())));
            }
            let mut v = [0.0; 7];
            for (k, field) in rec.iter().enumerate() {
                v[k] = field
                    .parse()
                    .map_err(|e| Error::Format(format!("row {}, column {}: {e}", i + 1, CSV_HEADER[k])))?;
            }
            Ok(CsvRow { s: v[0], r: v[1], dr: v[2], kappa: v[3], j: v[4], x: v[5], y: v[6] })
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e.to_string()),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Serialized form of a classification report. Absent optional values are
/// omitted; `null` reads back as absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub alpha: f64,
    pub r0: f64,
    pub regime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrema: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonality_defect: Option<f64>,
    pub momentum_drift: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_reason: Option<String>,
    pub solver: SolverJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverJson {
    pub span: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub eps_unit: f64,
    pub eps_origin: f64,
    pub v_max: f64,
    pub max_samples: usize,
    pub two_sided: bool,
    pub accepted_steps: usize,
    pub evaluations: usize,
    pub samples: usize,
    pub angular_extent: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&ClassificationReport> for ReportJson {
    fn from(r: &ClassificationReport) -> Self {
        let c = &r.solver;
        Self {
            alpha: r.params.alpha(),
            r0: r.r0,
            regime: r.regime.as_str().to_string(),
            period: r.period,
            extrema: r.extrema.map(|(a, b)| [a, b]),
            blowup_angle: r.blowup_angle,
            orthogonality_defect: r.orthogonality_defect,
            momentum_drift: r.conservation_drift,
            stop_reason: r.stop_reason.map(|s| s.as_str().to_string()),
            solver: SolverJson {
                span: c.span,
                rel_tol: c.rel_tol,
                abs_tol: c.abs_tol,
                eps_unit: c.eps_unit,
                eps_origin: c.eps_origin,
                v_max: c.v_max,
                max_samples: c.max_samples,
                two_sided: c.two_sided,
                accepted_steps: r.accepted_steps,
                evaluations: r.evaluations,
                samples: r.samples,
                angular_extent: r.angular_extent,
                notes: r.notes.clone(),
            },
        }
    }
}

pub fn report_to_json(report: &ReportJson) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Format(e.to_string()))
}

/// Parses and validates a report against [`REPORT_SCHEMA`].
pub fn report_from_json(text: &str) -> Result<ReportJson> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    validate_report(&value)?;
    serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn validate_report(value: &serde_json::Value) -> Result<()> {
    let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).expect("embedded schema is valid JSON");
    let validator = jsonschema::validator_for(&schema).map_err(|e| Error::Format(e.to_string()))?;
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{}: {e}", e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Format(errors.join("; ")))
    }
}

/// Plot window in data coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

const PALETTE: [&str; 6] = ["#000000", "#c0392b", "#1f5fbf", "#2e8b57", "#8e44ad", "#d35400"];
const SIZE: f64 = 600.0;

struct Canvas {
    bounds: Bounds,
    scale: f64,
    body: String,
}

impl Canvas {
    fn new(bounds: Bounds) -> Self {
        let scale = SIZE / (bounds.x_max - bounds.x_min).max(bounds.y_max - bounds.y_min);
        Self { bounds, scale, body: String::new() }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.bounds.x_min) * self.scale, (self.bounds.y_max - y) * self.scale)
    }

    /// Polyline pieces, broken wherever the curve leaves the window.
    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        let mut piece: Vec<(f64, f64)> = Vec::new();
        for &p in pts.iter().chain(std::iter::once(&(f64::NAN, f64::NAN))) {
            if p.0.is_finite() && p.1.is_finite() && self.bounds.contains(p) {
                piece.push(self.map(p));
                continue;
            }
            if piece.len() >= 2 {
                let coords: Vec<String> = piece.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    self.body,
                    r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            piece.clear();
        }
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, dash: bool) {
        let (a, b) = (self.map(a), self.map(b));
        let dash = if dash { r#" stroke-dasharray="4 4""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="1"{dash}/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn finish(self, title: &str) -> String {
        let w = (self.bounds.x_max - self.bounds.x_min) * self.scale;
        let h = (self.bounds.y_max - self.bounds.y_min) * self.scale;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{}</svg>\n",
            escape(title),
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Cartesian plot of the curves with the unit circle and the origin marked.
/// The window fits the curves, clipped to `|x|, |y| <= clip`.
pub fn cartesian_svg(curves: &[Vec<(f64, f64)>], clip: f64, title: &str) -> String {
    let mut m: f64 = 1.1;
    for &(x, y) in curves.iter().flatten() {
        if x.is_finite() && y.is_finite() {
            m = m.max(x.abs().min(clip)).max(y.abs().min(clip));
        }
    }
    m *= 1.05;
    let mut c = Canvas::new(Bounds { x_min: -m, x_max: m, y_min: -m, y_max: m });
    let circle: Vec<(f64, f64)> = (0..=360).map(|k| (k as f64).to_radians()).map(|t| (t.cos(), t.sin())).collect();
    c.polyline(&circle, "#999999", 1.0);
    c.line((-m, 0.0), (m, 0.0), "#dddddd", false);
    c.line((0.0, -m), (0.0, m), "#dddddd", false);
    for (k, curve) in curves.iter().enumerate() {
        c.polyline(curve, PALETTE[k % PALETTE.len()], 1.5);
    }
    c.finish(title)
}

/// Phase portrait `(r, r')` of the given trajectories, with the singular
/// line `r = 1` dashed and the equilibrium marked.
pub fn phase_svg(trajectories: &[Trajectory], bounds: Bounds, title: &str) -> String {
    let mut c = Canvas::new(bounds);
    c.line((1.0, bounds.y_min), (1.0, bounds.y_max), "#999999", true);
    c.line((bounds.x_min, 0.0), (bounds.x_max, 0.0), "#dddddd", false);
    for (k, t) in trajectories.iter().enumerate() {
        let pts: Vec<(f64, f64)> = t
            .mirrored()
            .iter()
            .map(|p| (p.r, p.dr))
            .chain(t.tail().iter().map(|q| (q.r, 1.0 / q.q)))
            .collect();
        let mut ordered = pts;
        let n = t.samples().len();
        if !t.tail().is_empty() {
            // Keep the tail attached to the positive branch.
            let tail: Vec<(f64, f64)> = ordered.split_off(2 * n - 1);
            let mut neg: Vec<(f64, f64)> = tail.iter().rev().map(|&(r, v)| (r, -v)).collect();
            neg.extend(ordered);
            neg.extend(tail);
            ordered = neg;
        }
        c.polyline(&ordered, PALETTE[k % PALETTE.len()], 1.2);
    }
    if let Some(eq) = trajectories.first().and_then(|t| equilibrium(t.params())) {
        let (x, y) = c.map((eq.point.u, eq.point.v));
        let _ = writeln!(c.body, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#c0392b"/>"##);
    }
    c.finish(title)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, ClassifyConfig};
    use crate::dynamics::{integrate, SolverConfig};
    use crate::model::PowerParams;
    use proptest::prelude::*;

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3..1e3f64]
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(vals in prop::collection::vec(prop::array::uniform7(finite()), 0..20)) {
            let rows: Vec<CsvRow> = vals
                .iter()
                .map(|v| CsvRow { s: v[0], r: v[1], dr: v[2], kappa: v[3], j: v[4], x: v[5], y: v[6] })
                .collect();
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows).unwrap();
            let back = read_csv(&buf[..]).unwrap();
            prop_assert_eq!(back.len(), rows.len());
            for (a, b) in rows.iter().zip(&back) {
                for (x, y) in a.fields().iter().zip(b.fields()) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
            let mut again = Vec::new();
            write_csv(&mut again, &back).unwrap();
            prop_assert_eq!(buf, again);
        }
    }

    #[test]
    fn trajectory_csv_layout() {
        let p = PowerParams::new(1.0).unwrap();
        let t = integrate(&p, 0.25, &SolverConfig::default()).unwrap();
        let rows = trajectory_rows(&t).unwrap();
        assert_eq!(rows.len(), 2 * t.samples().len() - 1);
        assert_eq!(rows[t.samples().len() - 1].s, 0.0);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,r,dr,kappa,J,x,y\n"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(matches!(read_csv("a,b\n1,2\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(read_csv("s,r,dr,kappa,J,x,y\n1,2,3\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(read_csv("s,r,dr,kappa,J,x,y\n1,2,3,4,5,6,z\n".as_bytes()), Err(Error::Format(_))));
    }

    #[test]
    fn report_json_round_trip_and_schema() {
        let cfg = ClassifyConfig::default();
        for (a, r0) in [(1.0, 0.25), (1.0, 2.0), (-0.5, 0.75), (1.0, 0.5)] {
            let rep = classify(&PowerParams::new(a).unwrap(), r0, &cfg).unwrap();
            let json = ReportJson::from(&rep);
            let text = report_to_json(&json).unwrap();
            let back = report_from_json(&text).unwrap();
            assert_eq!(back, json);
            assert_eq!(report_to_json(&back).unwrap(), text);
            assert!(!text.contains("null"));
        }
    }

    #[test]
    fn unknown_and_missing_fields_are_rejected() {
        let rep = classify(&PowerParams::new(1.0).unwrap(), 2.0, &ClassifyConfig::default()).unwrap();
        let mut v = serde_json::to_value(ReportJson::from(&rep)).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(report_from_json(&v.to_string()).is_err());
        v.as_object_mut().unwrap().remove("extra");
        v.as_object_mut().unwrap().remove("regime");
        assert!(report_from_json(&v.to_string()).is_err());
    }

    #[test]
    fn null_reads_as_absent() {
        let rep = classify(&PowerParams::new(1.0).unwrap(), 2.0, &ClassifyConfig::default()).unwrap();
        let mut v = serde_json::to_value(ReportJson::from(&rep)).unwrap();
        v["period"] = serde_json::Value::Null;
        let back = report_from_json(&v.to_string()).unwrap();
        assert_eq!(back.period, None);
        assert!(!report_to_json(&back).unwrap().contains("period"));
    }

    #[test]
    fn svgs_are_self_contained() {
        let p = PowerParams::new(1.0).unwrap();
        let t = integrate(&p, 0.25, &SolverConfig::default()).unwrap();
        let pts: Vec<(f64, f64)> = crate::model::to_cartesian(&t.mirrored());
        let svg = cartesian_svg(&[pts], 4.0, "alpha = 1");
        assert!(svg.starts_with("<svg") && svg.contains("#999999") && svg.contains("<polyline"));
        assert!(!svg.contains("href") && !svg.contains("url("));
        let b = Bounds { x_min: 0.0, x_max: 2.0, y_min: -1.5, y_max: 1.5 };
        let svg = phase_svg(&[t], b, "phase");
        assert!(svg.contains("<circle") && !svg.contains("href"));
    }
}
