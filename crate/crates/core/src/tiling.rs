//! Tiling diagrams of bipartite product sets.
//!
//! Rows index party 1's standard basis and columns party 2's. A state
//! occupies the cells `supp(a) × supp(b)`; states with identical supports
//! share a tile.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::measurement::Projector;
use crate::state::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TilingFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub rows: BTreeSet<usize>,
    pub cols: BTreeSet<usize>,
    pub labels: Vec<String>,
}

impl Tile {
    fn covers(&self, r: usize, c: usize) -> bool {
        self.rows.contains(&r) && self.cols.contains(&c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingDiagram {
    pub rows: usize,
    pub cols: usize,
    pub tiles: Vec<Tile>,
    /// Pairs of tile indices sharing at least one cell.
    pub overlaps: Vec<(usize, usize)>,
}

pub fn tiling(s: &StateSet) -> Result<TilingDiagram> {
    if s.num_parties() != 2 {
        return Err(Error::Dimension(format!(
            "tiling diagrams need two parties, the set has {}",
            s.num_parties()
        )));
    }
    let mut tiles: Vec<Tile> = Vec::new();
    for st in s.states() {
        let rows = st.factors[0].support();
        let cols = st.factors[1].support();
        match tiles.iter_mut().find(|t| t.rows == rows && t.cols == cols) {
            Some(t) => t.labels.push(st.label.clone()),
            None => tiles.push(Tile {
                rows,
                cols,
                labels: vec![st.label.clone()],
            }),
        }
    }
    let mut overlaps = Vec::new();
    for i in 0..tiles.len() {
        for j in i + 1..tiles.len() {
            if !tiles[i].rows.is_disjoint(&tiles[j].rows)
                && !tiles[i].cols.is_disjoint(&tiles[j].cols)
            {
                overlaps.push((i, j));
            }
        }
    }
    Ok(TilingDiagram {
        rows: s.dims()[0],
        cols: s.dims()[1],
        tiles,
        overlaps,
    })
}

fn tile_name(i: usize) -> String {
    const LETTERS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    let mut n = i;
    let mut out = Vec::new();
    loop {
        out.push(LETTERS[n % 26]);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", v.join(","))
}

/// Cells inside the support of `p`: whole rows for party 1, whole columns
/// for party 2.
fn highlighted(d: &TilingDiagram, p: Option<&Projector>) -> Result<Vec<Vec<bool>>> {
    let mut cells = vec![vec![false; d.cols]; d.rows];
    let Some(p) = p else {
        return Ok(cells);
    };
    let expected = if p.party() == 0 { d.rows } else { d.cols };
    if p.party() > 1 || p.dim() != expected {
        return Err(Error::Dimension(format!(
            "highlight projector on party {} of dimension {} does not fit a {}x{} grid",
            p.party() + 1,
            p.dim(),
            d.rows,
            d.cols
        )));
    }
    let supp = p.standard_support();
    for (r, row) in cells.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = supp.contains(if p.party() == 0 { &r } else { &c });
        }
    }
    Ok(cells)
}

pub fn render_tiling(
    s: &StateSet,
    format: TilingFormat,
    highlight: Option<&Projector>,
) -> Result<String> {
    let d = tiling(s)?;
    let marks = highlighted(&d, highlight)?;
    Ok(match format {
        TilingFormat::Ascii => render_ascii(&d, &marks, highlight),
        TilingFormat::Svg => render_svg(&d, &marks, highlight),
    })
}

fn cell_text(d: &TilingDiagram, r: usize, c: usize) -> String {
    let covering: Vec<usize> = (0..d.tiles.len())
        .filter(|&t| d.tiles[t].covers(r, c))
        .collect();
    if covering.is_empty() {
        return ".".to_string();
    }
    covering.into_iter().map(tile_name).collect()
}

fn render_ascii(d: &TilingDiagram, marks: &[Vec<bool>], highlight: Option<&Projector>) -> String {
    let width = (0..d.rows)
        .flat_map(|r| (0..d.cols).map(move |c| (r, c)))
        .map(|(r, c)| cell_text(d, r, c).len())
        .chain([d.cols.saturating_sub(1).to_string().len()])
        .max()
        .unwrap_or(1);
    let row_w = d.rows.saturating_sub(1).to_string().len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "tiling {}x{} (rows: party 1, columns: party 2)",
        d.rows, d.cols
    );
    let _ = write!(out, "{:row_w$} |", "");
    for c in 0..d.cols {
        let _ = write!(out, " {c:^width$} ");
    }
    out.push('\n');
    for r in 0..d.rows {
        let _ = write!(out, "{r:>row_w$} |");
        for c in 0..d.cols {
            let t = cell_text(d, r, c);
            if marks[r][c] {
                let _ = write!(out, "[{t:^width$}]");
            } else {
                let _ = write!(out, " {t:^width$} ");
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out, "tiles:");
    for (i, t) in d.tiles.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {} rows {} cols {}: {}",
            tile_name(i),
            fmt_set(&t.rows),
            fmt_set(&t.cols),
            t.labels.join(", ")
        );
    }
    if let Some(p) = highlight {
        let _ = writeln!(
            out,
            "highlight: party {} support {} (cells in brackets)",
            p.party() + 1,
            fmt_set(&p.standard_support())
        );
    }
    for &(i, j) in &d.overlaps {
        let _ = writeln!(
            out,
            "warning: tiles {} and {} overlap",
            tile_name(i),
            tile_name(j)
        );
    }
    out.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];
const CELL: usize = 48;
const MARGIN: usize = 32;

fn render_svg(d: &TilingDiagram, marks: &[Vec<bool>], highlight: Option<&Projector>) -> String {
    let legend_lines = d.tiles.len() + d.overlaps.len() + usize::from(highlight.is_some());
    let w = 2 * MARGIN + d.cols * CELL;
    let h = 2 * MARGIN + d.rows * CELL + 18 * legend_lines;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    );
    for (i, t) in d.tiles.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<g id="tile-{}" fill="{color}" fill-opacity="0.55">"#,
            tile_name(i)
        );
        for &r in &t.rows {
            for &c in &t.cols {
                if r < d.rows && c < d.cols {
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}"/>"#,
                        MARGIN + c * CELL,
                        MARGIN + r * CELL
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    for r in 0..d.rows {
        for c in 0..d.cols {
            let x = MARGIN + c * CELL;
            let y = MARGIN + r * CELL;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="none" stroke="black" stroke-width="1"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
                x + CELL / 2,
                y + CELL / 2 + 4,
                cell_text(d, r, c)
            );
            if marks[r][c] {
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#d62728" fill-opacity="0.25" stroke="#d62728" stroke-width="3"/>"##,
                    x + 2,
                    y + 2,
                    CELL - 4,
                    CELL - 4
                );
            }
        }
    }
    for c in 0..d.cols {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{c}</text>"#,
            MARGIN + c * CELL + CELL / 2,
            MARGIN - 8
        );
    }
    for r in 0..d.rows {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{r}</text>"#,
            MARGIN - 8,
            MARGIN + r * CELL + CELL / 2 + 4
        );
    }
    let mut y = 2 * MARGIN + d.rows * CELL - 8;
    for (i, t) in d.tiles.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{y}">{}: {}</text>"#,
            tile_name(i),
            escape(&t.labels.join(", "))
        );
        y += 18;
    }
    if let Some(p) = highlight {
        let _ = writeln!(
            out,
            r##"<text x="{MARGIN}" y="{y}" fill="#d62728">highlight: party {} support {}</text>"##,
            p.party() + 1,
            fmt_set(&p.standard_support())
        );
        y += 18;
    }
    for &(i, j) in &d.overlaps {
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{y}">warning: tiles {} and {} overlap</text>"#,
            tile_name(i),
            tile_name(j)
        );
        y += 18;
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
