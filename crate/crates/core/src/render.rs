//! Linear diagram drawing: one row band per set, one column per element,
//! one horizontal segment per run of consecutive members.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, ColumnPermutation};
use crate::setsystem::SetSystem;

const MAX_CANVAS: u64 = 100_000;

pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub cell_width: u32,
    pub cell_height: u32,
    /// Space left of the grid for set names.
    pub gutter: u32,
    /// Space above the grid for element labels.
    pub header: u32,
    pub thickness: u32,
    pub colors: Vec<String>,
    pub grid: bool,
    pub font_size: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            cell_width: 18,
            cell_height: 22,
            gutter: 120,
            header: 80,
            thickness: 10,
            colors: PALETTE.iter().map(|c| c.to_string()).collect(),
            grid: true,
            font_size: 12,
        }
    }
}

impl RenderStyle {
    fn validate(&self) -> Result<()> {
        if self.cell_width == 0 || self.cell_height == 0 || self.thickness == 0 || self.font_size == 0 {
            return Err(Error::InvalidArgument("style dimensions must be positive".into()));
        }
        if self.thickness > self.cell_height {
            return Err(Error::InvalidArgument("segment thicker than its row".into()));
        }
        if self.colors.is_empty() {
            return Err(Error::InvalidArgument("empty color cycle".into()));
        }
        Ok(())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Maximal runs `(start, end)` (end exclusive) of member positions in row
/// `i` under `order`.
fn runs(a: &BinaryMatrix, i: usize, order: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &j) in order.iter().enumerate() {
        match (a.get(i, j), start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push((s, k));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, order.len()));
    }
    out
}

/// SVG drawing of `s` with its elements in order `p`. Each segment is a
/// `<rect class="segment">`, so the number of those elements equals the
/// block count of the permuted matrix.
pub fn render_svg(s: &SetSystem, p: &ColumnPermutation, st: &RenderStyle) -> Result<String> {
    st.validate()?;
    let a = s.to_matrix();
    let (m, n) = (a.rows(), a.cols());
    if p.len() != n {
        return Err(Error::LengthMismatch {
            what: "permutation",
            expected: n,
            found: p.len(),
        });
    }
    let width = st.gutter as u64 + n as u64 * st.cell_width as u64 + 10;
    let height = st.header as u64 + m as u64 * st.cell_height as u64 + 10;
    if width > MAX_CANVAS || height > MAX_CANVAS {
        return Err(Error::DimensionOverflow { width, height });
    }
    let (cw, ch) = (st.cell_width as u64, st.cell_height as u64);
    let (gx, gy) = (st.gutter as u64, st.header as u64);
    let order = p.as_slice();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="{}">"#,
        st.font_size
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    if st.grid {
        let _ = writeln!(out, r##"<g class="grid" stroke="#e0e0e0" stroke-width="1">"##);
        for k in 0..=n as u64 {
            let x = gx + k * cw;
            let _ = writeln!(out, r#"<line x1="{x}" y1="{gy}" x2="{x}" y2="{}"/>"#, gy + m as u64 * ch);
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g class="columns" text-anchor="start">"#);
    for (k, &j) in order.iter().enumerate() {
        let x = gx + k as u64 * cw + cw / 2;
        let y = gy - 4;
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" transform="rotate(-60 {x} {y})">{}</text>"#,
            escape(&s.elements()[j])
        );
    }
    let _ = writeln!(out, "</g>");

    let thick = st.thickness as u64;
    for (i, set) in s.sets().iter().enumerate() {
        let color = &st.colors[i % st.colors.len()];
        let top = gy + i as u64 * ch;
        let _ = writeln!(out, r#"<g class="row" data-set="{}">"#, escape(&set.name));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            gx - 6,
            top + ch / 2,
            escape(&set.name)
        );
        for (lo, hi) in runs(&a, i, order) {
            let _ = writeln!(
                out,
                r#"<rect class="segment" x="{}" y="{}" width="{}" height="{thick}" rx="{}" fill="{color}"/>"#,
                gx + lo as u64 * cw + 2,
                top + (ch - thick) / 2,
                (hi - lo) as u64 * cw - 4,
                thick / 2
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Terminal drawing: a header `# j0 j1 ...` followed by one line per row
/// with `█` for members and `·` otherwise.
pub fn render_text(a: &BinaryMatrix, p: &ColumnPermutation) -> Result<String> {
    if p.len() != a.cols() {
        return Err(Error::LengthMismatch {
            what: "permutation",
            expected: a.cols(),
            found: p.len(),
        });
    }
    let mut out = String::from("#");
    for j in p.as_slice() {
        let _ = write!(out, " {j}");
    }
    out.push('\n');
    for i in 0..a.rows() {
        for &j in p.as_slice() {
            out.push(if a.get(i, j) { '█' } else { '·' });
        }
        out.push('\n');
    }
    Ok(out)
}
