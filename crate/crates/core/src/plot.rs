//! Minimal self-contained SVG charts: lines, scatter/bubble, bars and
//! vertical markers on linear axes. Output contains no timestamps, so the
//! same data always renders to the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Days, NaiveDate};

use crate::error::Result;
use crate::ingest::write_text;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

pub const BLUE: &str = "#1f77b4";
pub const ORANGE: &str = "#ff7f0e";
pub const GREEN: &str = "#2ca02c";
pub const RED: &str = "#d62728";

#[derive(Debug, Clone)]
enum Layer {
    Line {
        points: Vec<(f64, f64)>,
        color: String,
        label: String,
    },
    Scatter {
        points: Vec<(f64, f64)>,
        radii: Vec<f64>,
        color: String,
    },
    Bars {
        points: Vec<(f64, f64)>,
        color: String,
    },
    Markers {
        xs: Vec<f64>,
        color: String,
    },
}

#[derive(Debug, Clone)]
pub struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    /// When set, x values are day offsets from this date.
    x_epoch: Option<NaiveDate>,
    layers: Vec<Layer>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn fmt_tick(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10()).ceil() as usize };
    let s = format!("{v:.decimals$}");
    if s == "-0" { "0".into() } else { s }
}

impl Figure {
    pub fn new(title: impl Into<String>) -> Figure {
        Figure {
            title: title.into(),
            x_label: String::new(),
            y_label: String::new(),
            x_epoch: None,
            layers: Vec::new(),
        }
    }

    pub fn x_label(mut self, label: impl Into<String>) -> Figure {
        self.x_label = label.into();
        self
    }

    pub fn y_label(mut self, label: impl Into<String>) -> Figure {
        self.y_label = label.into();
        self
    }

    pub fn dated_x(mut self, epoch: NaiveDate) -> Figure {
        self.x_epoch = Some(epoch);
        self
    }

    pub fn line(mut self, points: Vec<(f64, f64)>, color: &str, label: impl Into<String>) -> Figure {
        self.layers.push(Layer::Line {
            points,
            color: color.into(),
            label: label.into(),
        });
        self
    }

    pub fn scatter(mut self, points: Vec<(f64, f64)>, color: &str) -> Figure {
        let radii = vec![2.5; points.len()];
        self.layers.push(Layer::Scatter {
            points,
            radii,
            color: color.into(),
        });
        self
    }

    /// Scatter whose marker area is proportional to `weights`.
    pub fn bubbles(mut self, points: Vec<(f64, f64)>, weights: &[f64], color: &str) -> Figure {
        let max = weights.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let radii = weights.iter().map(|w| 3.0 + 17.0 * (w / max).sqrt()).collect();
        self.layers.push(Layer::Scatter {
            points,
            radii,
            color: color.into(),
        });
        self
    }

    pub fn bars(mut self, points: Vec<(f64, f64)>, color: &str) -> Figure {
        self.layers.push(Layer::Bars {
            points,
            color: color.into(),
        });
        self
    }

    pub fn markers(mut self, xs: Vec<f64>, color: &str) -> Figure {
        self.layers.push(Layer::Markers {
            xs,
            color: color.into(),
        });
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for layer in &self.layers {
            match layer {
                Layer::Line { points, .. } | Layer::Scatter { points, .. } => {
                    xs.extend(points.iter().map(|p| p.0));
                    ys.extend(points.iter().map(|p| p.1));
                }
                Layer::Bars { points, .. } => {
                    xs.extend(points.iter().map(|p| p.0));
                    ys.extend(points.iter().map(|p| p.1));
                    ys.push(0.0);
                }
                Layer::Markers { xs: m, .. } => xs.extend(m),
            }
        }
        let range = |v: &[f64]| {
            let finite = v.iter().copied().filter(|x| x.is_finite());
            let lo = finite.clone().fold(f64::INFINITY, f64::min);
            let hi = finite.fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                let pad = (hi - lo) * 0.04;
                (lo - pad, hi + pad)
            }
        };
        (range(&xs), range(&ys))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        // axes and ticks
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let xstep = nice_step(x1 - x0, 6);
        let mut t = (x0 / xstep).ceil() * xstep;
        while t <= x1 {
            let label = match self.x_epoch {
                Some(epoch) if t >= 0.0 => (epoch + Days::new(t.round() as u64)).to_string(),
                _ => fmt_tick(t, xstep),
            };
            let x = sx(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ccc"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
                MARGIN_TOP,
                MARGIN_TOP + ph,
                MARGIN_TOP + ph + 18.0
            );
            t += xstep;
        }
        let ystep = nice_step(y1 - y0, 6);
        let mut t = (y0 / ystep).ceil() * ystep;
        while t <= y1 {
            let y = sy(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                MARGIN_LEFT + pw,
                MARGIN_LEFT - 6.0,
                y + 4.0,
                fmt_tick(t, ystep)
            );
            t += ystep;
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            MARGIN_TOP + ph / 2.0,
            MARGIN_TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let mut legend_y = MARGIN_TOP + 16.0;
        for layer in &self.layers {
            match layer {
                Layer::Line { points, color, label } => {
                    let path: Vec<String> = points
                        .iter()
                        .filter(|p| p.0.is_finite() && p.1.is_finite())
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
                        path.join(" ")
                    );
                    if !label.is_empty() {
                        let lx = MARGIN_LEFT + pw - 150.0;
                        let _ = writeln!(
                            svg,
                            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                            legend_y - 4.0,
                            lx + 20.0,
                            legend_y - 4.0,
                            lx + 26.0,
                            legend_y,
                            escape(label)
                        );
                        legend_y += 16.0;
                    }
                }
                Layer::Scatter { points, radii, color } => {
                    for (&(x, y), r) in points.iter().zip(radii) {
                        if x.is_finite() && y.is_finite() {
                            let _ = writeln!(
                                svg,
                                r#"<circle cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="{color}" fill-opacity="0.5"/>"#,
                                sx(x),
                                sy(y)
                            );
                        }
                    }
                }
                Layer::Bars { points, color } => {
                    let n = points.len().max(1) as f64;
                    let bw = (pw / n * 0.6).max(1.0);
                    for &(x, y) in points {
                        let (top, bottom) = (sy(y.max(0.0)), sy(y.min(0.0)));
                        let _ = writeln!(
                            svg,
                            r#"<rect x="{:.2}" y="{top:.2}" width="{bw:.2}" height="{:.2}" fill="{color}"/>"#,
                            sx(x) - bw / 2.0,
                            bottom - top
                        );
                    }
                }
                Layer::Markers { xs, color } => {
                    for &x in xs {
                        let _ = writeln!(
                            svg,
                            r#"<line x1="{:.2}" y1="{MARGIN_TOP}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"/>"#,
                            sx(x),
                            sx(x),
                            MARGIN_TOP + ph
                        );
                    }
                }
            }
        }
        svg.push_str("</svg>\n");
        svg
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_text(path, &self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_layer_deterministically() {
        let fig = Figure::new("a <test>")
            .x_label("x")
            .y_label("y")
            .line(vec![(0.0, 1.0), (1.0, 2.0)], BLUE, "series")
            .scatter(vec![(0.5, 1.5)], ORANGE)
            .bubbles(vec![(0.2, 1.2)], &[4.0], GREEN)
            .bars(vec![(0.0, 1.0), (1.0, -0.5)], RED)
            .markers(vec![0.7], RED);
        let a = fig.render();
        assert_eq!(a, fig.render());
        assert!(a.starts_with("<svg"));
        assert!(a.contains("a &lt;test&gt;"));
        assert!(a.contains("<polyline"));
        assert_eq!(a.matches("<circle").count(), 2);
    }

    #[test]
    fn empty_and_degenerate_ranges() {
        let svg = Figure::new("empty").render();
        assert!(svg.ends_with("</svg>\n"));
        let svg = Figure::new("flat").line(vec![(1.0, 3.0), (1.0, 3.0)], BLUE, "").render();
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn date_ticks() {
        let epoch = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
        let svg = Figure::new("d")
            .dated_x(epoch)
            .line(vec![(0.0, 1.0), (100.0, 2.0)], BLUE, "")
            .render();
        assert!(svg.contains("2016-01-01"));
    }

    #[test]
    fn tick_steps() {
        assert_eq!(nice_step(10.0, 5), 2.0);
        assert_eq!(nice_step(1.0, 4), 0.2);
        assert_eq!(fmt_tick(0.25, 0.05), "0.25");
        assert_eq!(fmt_tick(-0.0, 1.0), "0");
    }
}
