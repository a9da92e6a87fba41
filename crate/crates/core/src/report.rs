//! Report assembly, deterministic JSON and SVG scatter plots.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;
use thiserror::Error;

use crate::analyzers::FiberReport;
use crate::germ::MapGerm;

pub const TOOL: &str = "milnorlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermInfo {
    pub name: Option<String>,
    pub vars: Vec<String>,
    pub components: Vec<String>,
}

impl GermInfo {
    pub fn of(g: &MapGerm) -> Self {
        GermInfo {
            name: g.name().map(str::to_string),
            vars: g.var_names().to_vec(),
            components: g.component_strings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub germ: GermInfo,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inner_germ: Option<GermInfo>,
    /// Wall-clock seconds; only filled in on request since it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_seconds: Option<f64>,
}

/// Points stored flat, row-major, with a `[rows, cols]` header. Labels are
/// cluster indices, −1 for unclustered points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub name: String,
    pub shape: [usize; 2],
    pub data: Vec<f64>,
    pub labels: Vec<i64>,
}

impl PointCloud {
    pub fn new(name: impl Into<String>, dim: usize, points: &[Vec<f64>], labels: Vec<i64>) -> Self {
        assert_eq!(labels.len(), points.len(), "one label per point");
        PointCloud {
            name: name.into(),
            shape: [points.len(), dim],
            data: points.iter().flat_map(|p| p.iter().copied()).collect(),
            labels,
        }
    }

    pub fn from_fiber(name: impl Into<String>, f: &FiberReport) -> Self {
        let dim = f.points.first().map_or(0, Vec::len);
        let labels = f.labels.iter().map(|l| l.map_or(-1, |i| i as i64)).collect();
        PointCloud::new(name, dim, &f.points, labels)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.shape[1];
        &self.data[i * d..(i + 1) * d]
    }

    pub fn len(&self) -> usize {
        self.shape[0]
    }

    pub fn is_empty(&self) -> bool {
        self.shape[0] == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub meta: Meta,
    pub config: Value,
    pub verdicts: Value,
    pub point_clouds: Vec<PointCloud>,
}

/// Pretty printer that writes every float with 17 significant digits.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Deterministic JSON text: fixed field order, 17 significant digits per
/// float, non-finite floats as `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("report serializes");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn from_json(text: &str) -> Result<AnalysisReport, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("projection index {index} out of range for {dim}-dimensional points")]
    ProjectionOutOfRange { index: usize, dim: usize },
    #[error("projection needs 2 or 3 coordinate indices, got {0}")]
    ProjectionArity(usize),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn project(p: &[f64], proj: &[usize]) -> (f64, f64) {
    match *proj {
        [a, b] => (p[a], p[b]),
        // orthographic view from the (1, 1, 1) direction
        [a, b, c] => {
            let (x, y, z) = (p[a], p[b], p[c]);
            let s = 3f64.sqrt() / 2.0;
            ((x - y) * s, z - (x + y) / 2.0)
        }
        _ => unreachable!("arity checked"),
    }
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (-1.0, 1.0);
    }
    let span = hi - lo;
    let pad = if span > 0.0 { 0.05 * span } else { lo.abs().max(1e-3) * 0.1 };
    (lo - pad, hi + pad)
}

/// 2-D scatter of the report's point clouds, one colour per cluster
/// (grey for unclustered points), with labelled axes. Three indices give an
/// orthographic projection of those coordinates.
pub fn emit_svg(clouds: &[PointCloud], projection: &[usize]) -> Result<String, SvgError> {
    if !(2..=3).contains(&projection.len()) {
        return Err(SvgError::ProjectionArity(projection.len()));
    }
    for c in clouds.iter().filter(|c| !c.is_empty()) {
        if let Some(&index) = projection.iter().find(|&&i| i >= c.shape[1]) {
            return Err(SvgError::ProjectionOutOfRange { index, dim: c.shape[1] });
        }
    }
    let mut pts: Vec<(f64, f64, i64)> = Vec::new();
    let mut offset = 0i64;
    for c in clouds {
        let max_label = c.labels.iter().copied().max().unwrap_or(-1);
        for i in 0..c.len() {
            let (u, v) = project(c.point(i), projection);
            let l = c.labels[i];
            pts.push((u, v, if l < 0 { -1 } else { l + offset }));
        }
        offset += max_label + 1;
    }
    let fold = |f: fn(&(f64, f64, i64)) -> f64| {
        pts.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (ulo, uhi) = fold(|p| p.0);
    let (vlo, vhi) = fold(|p| p.1);
    let (ulo, uhi) = nice_range(ulo, uhi);
    let (vlo, vhi) = nice_range(vlo, vhi);
    let sx = |u: f64| MARGIN + (u - ulo) / (uhi - ulo) * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| HEIGHT - MARGIN - (v - vlo) / (vhi - vlo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    s.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    s.push_str(&format!(
        "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\"/><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/></g>\n"
    ));
    s.push_str("<g font-family=\"monospace\" font-size=\"10\" fill=\"black\">\n");
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let u = ulo + f * (uhi - ulo);
        let v = vlo + f * (vhi - vlo);
        let (px, py) = (sx(u), sy(v));
        s.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{u:.3e}</text>\n",
            y0 + 5.0,
            y0 + 18.0
        ));
        s.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"black\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{v:.3e}</text>\n",
            x0 - 5.0,
            x0 - 8.0,
            py + 3.0
        ));
    }
    let axis_name = |i: usize| format!("x{}", projection[i]);
    let (hname, vname) = if projection.len() == 2 {
        (axis_name(0), axis_name(1))
    } else {
        (
            format!("({} - {})·√3/2", axis_name(0), axis_name(1)),
            format!("{} - ({} + {})/2", axis_name(2), axis_name(0), axis_name(1)),
        )
    };
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{hname}</text>\n<text x=\"14\" y=\"{:.2}\" transform=\"rotate(-90 14 {:.2})\" text-anchor=\"middle\">{vname}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 15.0,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));
    s.push_str("</g>\n<g stroke=\"none\">\n");
    for (u, v, l) in &pts {
        let colour = if *l < 0 { "#999999" } else { PALETTE[*l as usize % PALETTE.len()] };
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{colour}\"/>\n",
            sx(*u),
            sy(*v)
        ));
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
