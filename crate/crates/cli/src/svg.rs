//! Static SVG figures: a row of square panels, each centred on the origin.

use std::fmt::Write;
use std::path::Path;

use lmcf_core::curve::PlanarCurve;

use crate::error::{io_error, CliResult};

const PANEL: f64 = 320.0;
const MARGIN: f64 = 16.0;
const PALETTE: [&str; 8] = ["#1f4e79", "#c0392b", "#27864a", "#8e44ad", "#d68910", "#138d90", "#7f8c8d", "#2c3e50"];

pub struct Panel {
    pub title: String,
    pub curves: Vec<PlanarCurve>,
    /// Half-width of the view box; the largest node radius when `None`.
    pub extent: Option<f64>,
}

impl Panel {
    pub fn new(title: impl Into<String>, curves: Vec<PlanarCurve>) -> Self {
        Panel { title: title.into(), curves, extent: None }
    }

    pub fn with_extent(mut self, extent: f64) -> Self {
        self.extent = Some(extent);
        self
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(panels: &[Panel], columns: usize) -> String {
    let columns = columns.clamp(1, panels.len().max(1));
    let rows = panels.len().div_ceil(columns).max(1);
    let width = columns as f64 * (PANEL + MARGIN) + MARGIN;
    let height = rows as f64 * (PANEL + MARGIN + 20.0) + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        let x0 = MARGIN + (i % columns) as f64 * (PANEL + MARGIN);
        let y0 = MARGIN + (i / columns) as f64 * (PANEL + MARGIN + 20.0);
        let extent = panel.extent.unwrap_or_else(|| {
            panel
                .curves
                .iter()
                .flat_map(|c| c.nodes().iter().map(|z| z.re.abs().max(z.im.abs())))
                .fold(0.0, f64::max)
                .max(1e-12)
                * 1.05
        });
        let scale = 0.5 * PANEL / extent;
        let (cx, cy) = (x0 + 0.5 * PANEL, y0 + 20.0 + 0.5 * PANEL);
        let _ = writeln!(
            out,
            r##"<text x="{cx:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"##,
            y0 + 13.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.1}" y="{:.1}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#dddddd"/>"##,
            y0 + 20.0
        );
        let _ = writeln!(
            out,
            r##"<path d="M{:.1} {cy:.1}H{:.1}M{cx:.1} {:.1}V{:.1}" stroke="#eeeeee"/>"##,
            x0,
            x0 + PANEL,
            y0 + 20.0,
            y0 + 20.0 + PANEL
        );
        for (j, curve) in panel.curves.iter().enumerate() {
            let mut d = String::new();
            for (k, z) in curve.nodes().iter().enumerate() {
                let px = cx + scale * z.re;
                let py = cy - scale * z.im;
                let _ = write!(d, "{}{px:.2} {py:.2}", if k == 0 { "M" } else { "L" });
            }
            if curve.is_closed() {
                d.push('Z');
            }
            let _ = writeln!(
                out,
                r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1.2"/>"#,
                PALETTE[j % PALETTE.len()]
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_figure(path: &Path, panels: &[Panel], columns: usize) -> CliResult<()> {
    std::fs::write(path, render(panels, columns)).map_err(|e| io_error(path, e))
}
