//! Figure emission: the filled step profile overlaid with the virtual
//! polyline, in codimension × weight axes, as an SVG 1.1 document or a
//! monospace ASCII grid.
//!
//! Coordinates inside the SVG are presentation-only floats formatted to a
//! fixed precision; the same scenario always renders to identical bytes.

use std::fmt::Write as _;

use crate::profile::StepProfile;
use crate::rational::to_f64;
use crate::virtual_profile::VirtualProfile;

pub struct RenderOptions {
    /// Tick pitch along the codimension axis.
    pub x_tick: f64,
    /// Tick pitch along the weight axis.
    pub y_tick: f64,
    /// Maximum character width of ASCII output.
    pub ascii_width: usize,
}

impl RenderOptions {
    /// Ticks every v codimension units and every v/2 weight units, matching
    /// the illustrative figures; callers can override.
    pub fn for_run(v: u64) -> Self {
        RenderOptions { x_tick: v as f64, y_tick: v as f64 / 2.0, ascii_width: 120 }
    }
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    max_x: f64,
    max_y: f64,
}

impl Frame {
    fn x(&self, codim: f64) -> f64 {
        self.x0 + codim / self.max_x * self.w
    }
    fn y(&self, weight: f64) -> f64 {
        self.y0 + self.h - weight / self.max_y * self.h
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// The staircase corner points (codim, weight) of a step profile, ending at
/// (total_dim, terminal weight).
fn staircase_points(profile: &StepProfile) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    let mut prev_y: Option<f64> = None;
    for (idx, (start, weight)) in profile.steps.iter().enumerate() {
        let next = profile.steps.get(idx + 1).map_or(profile.terminal_codim, |s| s.0);
        let (x0, x1) = (*start as f64, next as f64);
        let y = to_f64(weight);
        if let Some(py) = prev_y {
            pts.push((x0, py));
        }
        pts.push((x0, y));
        pts.push((x1, y));
        prev_y = Some(y);
        let _ = x1;
    }
    let ty = to_f64(&profile.terminal_weight);
    pts.push((profile.terminal_codim as f64, ty));
    pts.push((profile.total_dim as f64, ty));
    pts
}

/// Renders the profile and virtual profile as a standalone SVG document.
pub fn render_svg(
    profile: &StepProfile,
    vp: Option<&VirtualProfile>,
    opts: &RenderOptions,
) -> String {
    let (width, height) = (720.0, 420.0);
    let frame = Frame {
        x0: 60.0,
        y0: 20.0,
        w: width - 90.0,
        h: height - 70.0,
        max_x: (profile.total_dim.max(1)) as f64,
        max_y: profile.steps.first().map(|s| to_f64(&s.1)).unwrap_or(1.0).max(1e-9),
    };
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // filled region under the staircase
    let pts = staircase_points(profile);
    let mut path = format!("M {} {}", fmt(frame.x(0.0)), fmt(frame.y(0.0)));
    for (x, y) in &pts {
        let _ = write!(path, " L {} {}", fmt(frame.x(*x)), fmt(frame.y(*y)));
    }
    let _ = write!(path, " L {} {} Z", fmt(frame.x(frame.max_x)), fmt(frame.y(0.0)));
    let _ = write!(
        svg,
        "<path d=\"{path}\" fill=\"#d7e3f4\" stroke=\"#1f3d7a\" stroke-width=\"1.5\"/>\n"
    );

    // axes
    let _ = write!(
        svg,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(frame.x(0.0)),
        fmt(frame.y(0.0)),
        fmt(frame.x(frame.max_x)),
        fmt(frame.y(0.0))
    );
    let _ = write!(
        svg,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(frame.x(0.0)),
        fmt(frame.y(0.0)),
        fmt(frame.x(0.0)),
        fmt(frame.y(frame.max_y))
    );

    // ticks
    if opts.x_tick > 0.0 {
        let mut t = opts.x_tick;
        while t <= frame.max_x {
            let _ = write!(
                svg,
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                fmt(frame.x(t)),
                fmt(frame.y(0.0) - 3.0),
                fmt(frame.y(0.0) + 3.0)
            );
            t += opts.x_tick;
        }
    }
    if opts.y_tick > 0.0 {
        let mut t = opts.y_tick;
        while t <= frame.max_y {
            let _ = write!(
                svg,
                "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\n",
                fmt(frame.x(0.0) - 3.0),
                fmt(frame.x(0.0) + 3.0),
                fmt(frame.y(t))
            );
            t += opts.y_tick;
        }
    }

    // virtual polyline with dots at the vertices
    if let Some(vp) = vp {
        let mut line = String::new();
        for (i, (f, w)) in vp.vertices.iter().enumerate() {
            let _ = write!(
                line,
                "{}{},{}",
                if i == 0 { "" } else { " " },
                fmt(frame.x(to_f64(f))),
                fmt(frame.y(to_f64(w)))
            );
        }
        let _ = write!(
            svg,
            "<polyline points=\"{line}\" fill=\"none\" stroke=\"#a23b3b\" stroke-width=\"1.5\"/>\n"
        );
        for (f, w) in &vp.vertices {
            let _ = write!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#a23b3b\"/>\n",
                fmt(frame.x(to_f64(f))),
                fmt(frame.y(to_f64(w)))
            );
        }
    }

    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">codimension</text>\n",
        fmt(frame.x0 + frame.w / 2.0),
        fmt(height - 12.0)
    );
    let _ = write!(
        svg,
        "<text x=\"14\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">weight</text>\n",
        fmt(frame.y0 + frame.h / 2.0),
        fmt(frame.y0 + frame.h / 2.0)
    );
    svg.push_str("</svg>\n");
    svg
}

/// Renders the profile (`#` fill, `%` where the virtual polyline passes,
/// `o` at its vertices) on a character grid of at most `opts.ascii_width`
/// columns. A caption notes the scale and flags downsampling.
pub fn render_ascii(
    profile: &StepProfile,
    vp: Option<&VirtualProfile>,
    opts: &RenderOptions,
) -> String {
    let max_x = profile.total_dim.max(1) as f64;
    let max_y = profile.steps.first().map(|s| to_f64(&s.1)).unwrap_or(1.0).max(1e-9);
    let cols = opts.ascii_width.clamp(20, 120);
    let rows = 24usize;
    let downsampled = max_x > cols as f64;
    let col_of = |x: f64| (((x / max_x) * (cols - 1) as f64).round() as usize).min(cols - 1);
    let row_of = |y: f64| {
        let r = ((1.0 - y / max_y) * (rows - 1) as f64).round() as i64;
        r.clamp(0, rows as i64 - 1) as usize
    };

    let mut grid = vec![vec![' '; cols]; rows];

    // fill under the step function column by column
    let mut weights: Vec<f64> = vec![to_f64(&profile.terminal_weight); cols];
    for (idx, (start, weight)) in profile.steps.iter().enumerate() {
        let next = profile.steps.get(idx + 1).map_or(profile.terminal_codim, |s| s.0);
        let (c0, c1) = (col_of(*start as f64), col_of(next as f64));
        for w in weights.iter_mut().take(c1.max(c0 + 1)).skip(c0) {
            *w = to_f64(weight);
        }
    }
    for (col, w) in weights.iter().enumerate() {
        let top = row_of(*w);
        for (row, line) in grid.iter_mut().enumerate() {
            if row >= top {
                line[col] = '#';
            }
        }
    }

    // overlay the virtual polyline
    if let Some(vp) = vp {
        for pair in vp.vertices.windows(2) {
            let (x0, y0) = (to_f64(&pair[0].0), to_f64(&pair[0].1));
            let (x1, y1) = (to_f64(&pair[1].0), to_f64(&pair[1].1));
            let steps = 4 * cols;
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                let x = x0 + (x1 - x0) * t;
                let y = y0 + (y1 - y0) * t;
                grid[row_of(y)][col_of(x)] = '%';
            }
        }
        for (f, w) in &vp.vertices {
            grid[row_of(to_f64(w))][col_of(to_f64(f))] = 'o';
        }
    }

    let mut out = String::new();
    for line in &grid {
        out.push('|');
        out.extend(line.iter());
        out.push('\n');
    }
    out.push('+');
    out.extend(std::iter::repeat_n('-', cols));
    out.push('\n');
    let _ = writeln!(
        out,
        "codimension 0..{} ({} per column{}), weight 0..{:.3} top to bottom",
        profile.total_dim,
        fmt(max_x / cols as f64),
        if downsampled { ", downsampled" } else { "" },
        max_y
    );
    out
}
