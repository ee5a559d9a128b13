//! SVG of the real affine chart `ξ3 = 1` of the quartic's plane.

use std::fmt::Write;

use ternquart::covariants::recover_quartic;
use ternquart::idempotents::solve_idempotents;
use ternquart::quartic_geometry::{bitangent_candidates, is_bitangent, BitangencyCertificate};
use ternquart::{Algebra, SolverConfig, TernaryForm, C};

use crate::CliError;

/// Imaginary parts below this count as real.
const REAL_TOL: f64 = 1e-9;
/// `|Im f|` below this fraction of the grid maximum keeps a contour segment.
const IMAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    /// xmin, xmax, ymin, ymax.
    pub view: [f64; 4],
    pub grid: u32,
}

impl PlotOptions {
    pub fn validate(&self) -> Result<(), CliError> {
        let [x0, x1, y0, y1] = self.view;
        if self.width == 0 || self.height == 0 {
            return Err(CliError::Input("plot size must be positive".into()));
        }
        if !self.view.iter().all(|v| v.is_finite()) || x1 <= x0 || y1 <= y0 {
            return Err(CliError::Input("view must satisfy xmin < xmax and ymin < ymax".into()));
        }
        if self.grid < 2 {
            return Err(CliError::Input("grid must be at least 2".into()));
        }
        Ok(())
    }

    fn px(&self, x: f64) -> f64 {
        (x - self.view[0]) / (self.view[1] - self.view[0]) * self.width as f64
    }

    fn py(&self, y: f64) -> f64 {
        (self.view[3] - y) / (self.view[3] - self.view[2]) * self.height as f64
    }
}

type Segment = [(f64, f64); 2];

/// Marching squares on `Re f(x, y, 1)`, keeping segments where `Im f` is small.
fn contour(f: &TernaryForm, o: &PlotOptions) -> Vec<Segment> {
    let n = o.grid as usize;
    let [x0, x1, y0, y1] = o.view;
    let xs: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| y0 + (y1 - y0) * j as f64 / n as f64).collect();
    let vals: Vec<Vec<C>> = ys
        .iter()
        .map(|&y| xs.iter().map(|&x| f.eval(&[C::new(x, 0.0), C::new(y, 0.0), C::new(1.0, 0.0)])).collect())
        .collect();
    let vmax = vals.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            // Corners counterclockwise from (i, j).
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut hits: Vec<((f64, f64), f64)> = Vec::new();
            for e in 0..4 {
                let (a, b) = (corners[e], corners[(e + 1) % 4]);
                let (va, vb) = (vals[a.1][a.0], vals[b.1][b.0]);
                if (va.re > 0.0) != (vb.re > 0.0) {
                    let t = va.re / (va.re - vb.re);
                    let x = xs[a.0] + t * (xs[b.0] - xs[a.0]);
                    let y = ys[a.1] + t * (ys[b.1] - ys[a.1]);
                    let im = va.im + t * (vb.im - va.im);
                    hits.push(((x, y), im));
                }
            }
            for pair in hits.chunks_exact(2) {
                let im = 0.5 * (pair[0].1 + pair[1].1);
                if im.abs() <= IMAG_TOL * vmax {
                    out.push([pair[0].0, pair[1].0]);
                }
            }
        }
    }
    out
}

/// The part of `a x + b y + c = 0` inside the view.
fn clip_line(a: f64, b: f64, c: f64, o: &PlotOptions) -> Option<Segment> {
    let [x0, x1, y0, y1] = o.view;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if b.abs() > 1e-300 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if y >= y0 && y <= y1 {
                pts.push((x, y));
            }
        }
    }
    if a.abs() > 1e-300 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if x >= x0 && x <= x1 {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
    if pts.len() >= 2 {
        Some([pts[0], pts[pts.len() - 1]])
    } else {
        None
    }
}

pub fn render_svg(alg: &Algebra, cfg: &SolverConfig, o: &PlotOptions) -> Result<String, CliError> {
    let q = recover_quartic(alg)?;
    let segments = contour(&q.form, o);
    let x = solve_idempotents(alg, cfg)?;
    let lines = bitangent_candidates(alg, &x, cfg).unwrap_or_default();
    let certs: Vec<BitangencyCertificate> = lines.iter().filter_map(|l| is_bitangent(&q.form, l, cfg).ok()).collect();

    let (w, h) = (o.width, o.height);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();

    writeln!(s, r#"<g id="lines" stroke-width="1" fill="none">"#).unwrap();
    for l in &lines {
        let v = l.ell.coords();
        let real = v.iter().all(|z| z.im.abs() <= REAL_TOL);
        if let Some([p, r]) = clip_line(v[0].re, v[1].re, v[2].re, o) {
            let style = if real {
                r##"stroke="#1f5fbf""##
            } else {
                r##"stroke="#9aa7b8" stroke-dasharray="4 3""##
            };
            writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}><title>{}</title></line>"#,
                o.px(p.0),
                o.py(p.1),
                o.px(r.0),
                o.py(r.1),
                l.label
            )
            .unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();

    writeln!(s, r##"<g id="quartic" stroke="#c0392b" stroke-width="1.5" fill="none">"##).unwrap();
    if !segments.is_empty() {
        let mut d = String::new();
        for [p, r] in &segments {
            write!(d, "M{:.2} {:.2}L{:.2} {:.2}", o.px(p.0), o.py(p.1), o.px(r.0), o.py(r.1)).unwrap();
        }
        writeln!(s, r#"<path d="{d}"/>"#).unwrap();
    }
    writeln!(s, "</g>").unwrap();

    writeln!(s, r#"<g id="tangency" fill="black">"#).unwrap();
    for c in &certs {
        for t in &c.tangency_points {
            let v = t.coords();
            if v[2].norm() < 1e-12 {
                continue;
            }
            let (xp, yp) = (v[0] / v[2], v[1] / v[2]);
            if xp.im.abs() > REAL_TOL || yp.im.abs() > REAL_TOL {
                continue;
            }
            let (x, y) = (xp.re, yp.re);
            if x < o.view[0] || x > o.view[1] || y < o.view[2] || y > o.view[3] {
                continue;
            }
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, o.px(x), o.py(y)).unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();

    if segments.is_empty() {
        writeln!(s, r#"<text x="10" y="20" font-family="sans-serif" font-size="14">empty real locus</text>"#).unwrap();
    }
    writeln!(
        s,
        r#"<text x="10" y="{}" font-family="sans-serif" font-size="12">{} lines, chart x3 = 1, view [{}, {}] x [{}, {}]</text>"#,
        h.saturating_sub(10),
        lines.len(),
        o.view[0],
        o.view[1],
        o.view[2],
        o.view[3]
    )
    .unwrap();
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> PlotOptions {
        PlotOptions {
            width: 100,
            height: 100,
            view: [-1.0, 1.0, -1.0, 1.0],
            grid: 40,
        }
    }

    #[test]
    fn circle_contour_stays_on_circle() {
        let one = C::new(1.0, 0.0);
        let f = &(&TernaryForm::monomial([2, 0, 0], one) + &TernaryForm::monomial([0, 2, 0], one))
            - &TernaryForm::monomial([0, 0, 2], C::new(0.25, 0.0));
        let seg = contour(&f, &opts());
        assert!(!seg.is_empty());
        for s in seg {
            for (x, y) in s {
                assert!(((x * x + y * y).sqrt() - 0.5).abs() < 0.01);
            }
        }
    }

    #[test]
    fn lines_clip_to_the_box() {
        let s = clip_line(1.0, -1.0, 0.0, &opts()).unwrap();
        assert_eq!(s, [(-1.0, -1.0), (1.0, 1.0)]);
        assert!(clip_line(1.0, 0.0, -5.0, &opts()).is_none());
    }

    #[test]
    fn zero_viewport_is_rejected() {
        let mut o = opts();
        o.view = [0.0, 0.0, -1.0, 1.0];
        assert!(o.validate().is_err());
        let mut o = opts();
        o.width = 0;
        assert!(o.validate().is_err());
    }
}
