//! Minimal static SVG rendering of the CSV outputs.

use std::fmt::Write as _;
use std::path::Path;

use crate::cli::PlotKind;
use crate::error::{CliError, CliResult};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
const SERIES: [&str; 4] = ["abe", "delta_s", "e_a", "e_f"];
const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#ff7f0e", "#d62728", "#9467bd", "#7f7f7f",
];

pub struct Data {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_csv(path: &Path) -> CliResult<Data> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(path)?;
    let headers = rdr.headers()?.iter().map(str::to_owned).collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_owned).collect()))
        .collect::<Result<_, _>>()?;
    Ok(Data { headers, rows })
}

impl Data {
    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> CliResult<usize> {
        self.column(name)
            .ok_or_else(|| CliError::Usage(format!("input has no `{name}` column")))
    }

    fn floats(&self, col: usize) -> CliResult<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| {
                r[col].parse::<f64>().map_err(|_| {
                    CliError::Usage(format!(
                        "`{}` is not a number in `{}`",
                        r[col], self.headers[col]
                    ))
                })
            })
            .collect()
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        let range = |v: &[f64]| {
            let lo = v
                .iter()
                .copied()
                .filter(|x| x.is_finite())
                .fold(0.0f64, f64::min);
            let hi = v
                .iter()
                .copied()
                .filter(|x| x.is_finite())
                .fold(1e-12f64, f64::max);
            (lo, hi * 1.05)
        };
        Self {
            x: range(xs),
            y: range(ys),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open_svg(svg: &mut String, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1) = (MARGIN, WIDTH - MARGIN);
    let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let xv = frame.x.0 + t * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + t * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            y0 + 4.0,
            y0 + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{ylabel}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_scatter(data: &Data) -> CliResult<String> {
    let (xc, yc) = (data.require("delta_s")?, data.require("abe")?);
    let xs = data.floats(xc)?;
    let ys = data.floats(yc)?;
    let class_col = data.column("class");
    let mut classes: Vec<String> = Vec::new();
    let class_of = |i: usize| class_col.map_or(String::new(), |c| data.rows[i][c].clone());
    for i in 0..data.rows.len() {
        let c = class_of(i);
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    classes.sort();

    let mut frame = Frame::fit(&xs, &ys);
    frame.x.1 = frame.x.1.max(1.0);
    frame.y.1 = frame.y.1.max(1.0);
    let mut svg = String::new();
    open_svg(&mut svg, &frame, "ΔS", "Δ_E");
    // Saturation line Δ_E = ΔS.
    let top = frame.x.1.min(frame.y.1);
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#444" stroke-dasharray="4 3"/>"##,
        frame.px(0.0),
        frame.py(0.0),
        frame.px(top),
        frame.py(top)
    );
    for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        let k = classes.binary_search(&class_of(i)).unwrap_or(0);
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.6" fill="{}" fill-opacity="0.7"/>"#,
            frame.px(x),
            frame.py(y),
            PALETTE[k % PALETTE.len()]
        );
    }
    legend(
        &mut svg,
        classes.iter().filter(|c| !c.is_empty()).map(String::as_str),
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_curve(data: &Data) -> CliResult<String> {
    if data.headers.is_empty() {
        return Err(CliError::Usage("input has no columns".into()));
    }
    let series: Vec<(&str, usize)> = SERIES
        .iter()
        .filter_map(|&s| data.column(s).map(|c| (s, c)))
        .collect();
    if series.is_empty() {
        return Err(CliError::Usage(format!(
            "input has none of the columns {}",
            SERIES.join(", ")
        )));
    }
    let xs = data.floats(0)?;
    let ys: Vec<Vec<f64>> = series
        .iter()
        .map(|&(_, c)| data.floats(c))
        .collect::<CliResult<_>>()?;
    let all_y: Vec<f64> = ys.iter().flatten().copied().collect();
    let frame = Frame::fit(&xs, &all_y);
    let mut svg = String::new();
    open_svg(&mut svg, &frame, &escape(&data.headers[0]), "measure");
    for (k, y) in ys.iter().enumerate() {
        for (&x, &v) in xs.iter().zip(y) {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{}"/>"#,
                frame.px(x),
                frame.py(v),
                PALETTE[k % PALETTE.len()]
            );
        }
    }
    legend(&mut svg, series.iter().map(|(s, _)| *s));
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn legend<'a>(svg: &mut String, names: impl Iterator<Item = &'a str>) {
    for (k, name) in names.enumerate() {
        let y = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{y:.2}" r="4" fill="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            PALETTE[k % PALETTE.len()],
            WIDTH - MARGIN - 110.0,
            y + 4.0,
            escape(name)
        );
    }
}

fn empty_svg() -> String {
    let frame = Frame {
        x: (0.0, 1.0),
        y: (0.0, 1.0),
    };
    let mut svg = String::new();
    open_svg(&mut svg, &frame, "", "");
    svg.push_str("</svg>\n");
    svg
}

pub fn plot_file(input: &Path, out: &Path, kind: PlotKind) -> CliResult<()> {
    let is_blank = std::fs::read_to_string(input)?
        .lines()
        .all(|l| l.trim().is_empty() || l.starts_with('#'));
    let svg = if is_blank {
        None
    } else {
        let data = read_csv(input)?;
        if data.rows.is_empty() {
            None
        } else {
            Some(match kind {
                PlotKind::Scatter => render_scatter(&data)?,
                PlotKind::Curve => render_curve(&data)?,
            })
        }
    };
    let svg = svg.unwrap_or_else(|| {
        eprintln!(
            "warning: {} has no data rows; writing an empty plot",
            input.display()
        );
        empty_svg()
    });
    std::fs::write(out, svg)?;
    Ok(())
}
