// CSV and SVG writers for field grids. Both are byte-deterministic.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::FieldGrid;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    SvgHeatmap,
}

pub fn export_grid(grid: &FieldGrid, format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let out = std::io::BufWriter::new(file);
    match format {
        ExportFormat::Csv => write_csv(grid, out),
        ExportFormat::SvgHeatmap => write_svg(grid, out),
    }
}

/// `x,p,value,valid` rows, row-major; masked cells have an empty value and `valid=0`.
pub fn write_csv<W: Write>(grid: &FieldGrid, out: W) -> Result<()> {
    let mut out = out;
    let spec = grid.spec();
    writeln!(out, "x,p,value,valid")?;
    for j in 0..spec.ny {
        let p = spec.p_at(j);
        for i in 0..spec.nx {
            let x = spec.x_at(i);
            match grid.get(i, j) {
                Some(v) => writeln!(out, "{x:.16e},{p:.16e},{v:.16e},1")?,
                None => writeln!(out, "{x:.16e},{p:.16e},,0")?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

const PLOT: f64 = 600.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 50.0;
const BAR_GAP: f64 = 20.0;
const BAR_WIDTH: f64 = 20.0;
const WIDTH: f64 = LEFT + PLOT + BAR_GAP + BAR_WIDTH + 110.0;
const HEIGHT: f64 = TOP + PLOT + 60.0;

// viridis anchors
const STOPS: [(f64, [f64; 3]); 5] = [
    (0.00, [68.0, 1.0, 84.0]),
    (0.25, [59.0, 82.0, 139.0]),
    (0.50, [33.0, 145.0, 140.0]),
    (0.75, [94.0, 201.0, 98.0]),
    (1.00, [253.0, 231.0, 37.0]),
];

fn color(s: f64) -> String {
    let s = s.clamp(0.0, 1.0);
    let k = STOPS.iter().rposition(|(at, _)| *at <= s).unwrap_or(0).min(STOPS.len() - 2);
    let (s0, c0) = STOPS[k];
    let (s1, c1) = STOPS[k + 1];
    let w = (s - s0) / (s1 - s0);
    let ch = |n: usize| (c0[n] + w * (c1[n] - c0[n])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

/// Heatmap with a linear colour scale over the valid range; masked cells are
/// left transparent. `p` increases upward.
pub fn write_svg<W: Write>(grid: &FieldGrid, out: W) -> Result<()> {
    let mut out = out;
    let spec = grid.spec();
    let (lo, hi) = grid.value_range().unwrap_or((0.0, 0.0));
    let scale = |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
    let (cw, ch) = (PLOT / spec.nx as f64, PLOT / spec.ny as f64);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="25" text-anchor="middle" font-size="15">{} (gamma = {}, omega0 = {})</text>"#,
        LEFT + PLOT / 2.0,
        grid.invariant().name(),
        grid.params().gamma(),
        grid.params().omega0()
    );
    let _ = writeln!(svg, r#"<g shape-rendering="crispEdges">"#);
    for j in 0..spec.ny {
        let y = TOP + PLOT - (j + 1) as f64 * ch;
        for i in 0..spec.nx {
            let x = LEFT + i as f64 * cw;
            let fill = grid.get(i, j).map_or_else(|| "none".to_string(), |v| color(scale(v)));
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                cw + 0.01,
                ch + 0.01
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    // frame, axis labels and bounds
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>"#);
    let bottom = TOP + PLOT;
    let _ = writeln!(svg, r#"<text x="{LEFT}" y="{:.1}" text-anchor="start">{}</text>"#, bottom + 18.0, spec.x_min);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
        LEFT + PLOT,
        bottom + 18.0,
        spec.x_max
    );
    let _ =
        writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">x</text>"#, LEFT + PLOT / 2.0, bottom + 40.0);
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{bottom}" text-anchor="end">{}</text>"#, LEFT - 6.0, spec.p_min);
    let _ =
        writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, LEFT - 6.0, TOP + 12.0, spec.p_max);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">p</text>"#,
        LEFT - 40.0,
        TOP + PLOT / 2.0,
        LEFT - 40.0,
        TOP + PLOT / 2.0
    );

    // colour bar with min/max annotation
    let bar_x = LEFT + PLOT + BAR_GAP;
    let _ = writeln!(svg, r#"<defs><linearGradient id="scale" x1="0" y1="1" x2="0" y2="0">"#);
    for (at, _) in STOPS {
        let _ = writeln!(svg, r#"<stop offset="{at}" stop-color="{}"/>"#, color(at));
    }
    let _ = writeln!(svg, "</linearGradient></defs>");
    let _ = writeln!(
        svg,
        r#"<rect x="{bar_x}" y="{TOP}" width="{BAR_WIDTH}" height="{PLOT}" fill="url(#scale)" stroke="black"/>"#
    );
    let label_x = bar_x + BAR_WIDTH + 6.0;
    let _ = writeln!(svg, r#"<text x="{label_x}" y="{:.1}">max {hi:.6}</text>"#, TOP + 12.0);
    let _ = writeln!(svg, r#"<text x="{label_x}" y="{bottom}">min {lo:.6}</text>"#);
    let _ = writeln!(svg, "</svg>");

    out.write_all(svg.as_bytes())?;
    out.flush()?;
    Ok(())
}
