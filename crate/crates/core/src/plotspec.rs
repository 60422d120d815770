//! Vega-Lite (v5) descriptions of the density figures, with data inline.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::{AnalysisReport, ComparisonSummary};
use crate::stats::DensityCurve;

const SCHEMA: &str = "https://vega.github.io/schema/vega-lite/v5.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Individual entropy, one curve per number of fields.
    Fig1,
    /// Cosine similarity on edges and non-edges.
    Fig2,
    /// Team z-scores for entropy and mean cosine.
    Fig4,
    /// h-index and publication years, core vs shell.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig4, Figure::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig4 => "fig4",
            Figure::Fig6 => "fig6",
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1, fig2, fig4 or fig6)"))
    }
}

fn rows(curve: &DensityCurve, series: &str, out: &mut Vec<Value>) {
    for (x, y) in curve.grid.iter().zip(&curve.density) {
        out.push(json!({ "x": x, "density": y, "series": series }));
    }
}

fn line_layer(x_title: &str, series_title: &str) -> Value {
    json!({
        "mark": { "type": "line" },
        "encoding": {
            "x": { "field": "x", "type": "quantitative", "title": x_title },
            "y": { "field": "density", "type": "quantitative", "title": "probability density" },
            "color": { "field": "series", "type": "nominal", "title": series_title }
        }
    })
}

fn single_panel(title: &str, x_title: &str, series_title: &str, values: Vec<Value>) -> Value {
    json!({
        "$schema": SCHEMA,
        "title": title,
        "width": 480,
        "height": 300,
        "data": { "values": values },
        "mark": { "type": "line" },
        "encoding": line_layer(x_title, series_title)["encoding"].clone()
    })
}

fn fig1(report: &AnalysisReport) -> Result<Value> {
    let groups: Vec<_> = report
        .individual
        .groups
        .iter()
        .filter(|g| g.density.is_some())
        .collect();
    if groups.is_empty() {
        return Err(Error::MissingSection("individual entropy densities"));
    }
    let mut curves = Vec::new();
    let mut means = Vec::new();
    for g in groups {
        let series = format!("n_d = {}", g.n_fields);
        rows(g.density.as_ref().unwrap(), &series, &mut curves);
        means.push(json!({ "mean": g.mean, "series": series }));
    }
    let mut layer = line_layer("individual entropy H", "fields");
    layer["data"] = json!({ "values": curves });
    Ok(json!({
        "$schema": SCHEMA,
        "title": "Individual entropy by number of fields",
        "width": 480,
        "height": 300,
        "layer": [
            layer,
            {
                "data": { "values": means },
                "mark": { "type": "rule", "strokeDash": [4, 3] },
                "encoding": {
                    "x": { "field": "mean", "type": "quantitative" },
                    "color": { "field": "series", "type": "nominal" }
                }
            }
        ]
    }))
}

fn fig2(report: &AnalysisReport) -> Result<Value> {
    let d = &report.dyadic;
    let (Some(e), Some(n)) = (&d.density_edges, &d.density_non_edges) else {
        return Err(Error::MissingSection("edge and non-edge similarity densities"));
    };
    let mut values = Vec::new();
    rows(e, "edges", &mut values);
    rows(n, "non-edges", &mut values);
    Ok(single_panel("Cosine similarity of author pairs", "cosine similarity S", "pairs", values))
}

fn fig4(report: &AnalysisReport) -> Result<Value> {
    let t = &report.teams;
    if t.density_z_entropy.is_none() && t.density_z_cosine.is_none() {
        return Err(Error::MissingSection("team z-score densities"));
    }
    let mut values = Vec::new();
    if let Some(c) = &t.density_z_entropy {
        rows(c, "z(H)", &mut values);
    }
    if let Some(c) = &t.density_z_cosine {
        rows(c, "z(S)", &mut values);
    }
    Ok(single_panel("Team interdisciplinarity z-scores", "z-score", "measure", values))
}

fn panel(cmp: &ComparisonSummary, x_title: &str) -> Value {
    let mut values = Vec::new();
    for (curve, group) in [(&cmp.density_core, "core"), (&cmp.density_shell, "shell")] {
        if let Some(c) = curve {
            rows(c, &format!("{group} {}", cmp.attribute), &mut values);
        }
    }
    let mut layer = line_layer(x_title, "group");
    layer["data"] = json!({ "values": values });
    layer["title"] = json!(x_title);
    layer["width"] = json!(320);
    layer["height"] = json!(260);
    layer
}

fn fig6(report: &AnalysisReport) -> Result<Value> {
    let cs = &report.core_shell;
    let (Some(h), Some(y)) = (&cs.h_index, &cs.pub_years) else {
        return Err(Error::MissingSection("core/shell comparisons"));
    };
    Ok(json!({
        "$schema": SCHEMA,
        "title": "Core vs shell",
        "hconcat": [panel(h, "h-index"), panel(y, "publication years")]
    }))
}

/// Build the plot description for one figure.
pub fn plotspec(report: &AnalysisReport, figure: Figure) -> Result<Value> {
    match figure {
        Figure::Fig1 => fig1(report),
        Figure::Fig2 => fig2(report),
        Figure::Fig4 => fig4(report),
        Figure::Fig6 => fig6(report),
    }
}
