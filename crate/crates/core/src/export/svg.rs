use std::fmt::Write;

use crate::geom::BBox;

pub const UNSTABLE: &str = "#1f4fd0";
pub const STABLE: &str = "#d0201f";
pub const TRAP_FILL: &str = "#cfe6ff";
pub const K_STROKE: &str = "#404040";

/// Minimal SVG canvas in world coordinates, y pointing up.
pub struct Svg {
    view: BBox,
    width: f64,
    height: f64,
    body: String,
    hatch: bool,
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

impl Svg {
    /// `view` is padded by 5% on each side.
    pub fn new(view: BBox, width: f64) -> Self {
        let (w, h) = (view.width().max(1e-12), view.height().max(1e-12));
        let pad = 0.05 * w.max(h);
        let view = BBox::new(view.xmin - pad, view.xmax + pad, view.ymin - pad, view.ymax + pad);
        let height = width * view.height() / view.width();
        Svg { view, width, height, body: String::new(), hatch: false }
    }

    fn tx(&self, p: (f64, f64)) -> (f64, f64) {
        let x = (p.0 - self.view.xmin) / self.view.width() * self.width;
        let y = (self.view.ymax - p.1) / self.view.height() * self.height;
        (x, y)
    }

    fn points_attr(&self, pts: &[(f64, f64)]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.tx(*p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{},{}", fmt_num(x), fmt_num(y));
        }
        s
    }

    /// Pieces of the polyline inside a generous margin around the view.
    fn clipped(&self, pts: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
        let m = 2.0 * self.view.width().max(self.view.height());
        let r = self.view.inflate(m);
        let inside = |p: &(f64, f64)| p.0.is_finite() && p.1.is_finite() && p.0 >= r.xmin && p.0 <= r.xmax && p.1 >= r.ymin && p.1 <= r.ymax;
        let mut out = Vec::new();
        let mut cur: Vec<(f64, f64)> = Vec::new();
        for w in pts.windows(2) {
            match clip_segment(w[0], w[1], &r) {
                Some((a, b)) => {
                    if cur.last() != Some(&a) {
                        if cur.len() >= 2 {
                            out.push(std::mem::take(&mut cur));
                        }
                        cur.clear();
                        cur.push(a);
                    }
                    cur.push(b);
                    if !inside(&w[1]) {
                        out.push(std::mem::take(&mut cur));
                    }
                }
                None => {
                    if cur.len() >= 2 {
                        out.push(std::mem::take(&mut cur));
                    }
                    cur.clear();
                }
            }
        }
        if cur.len() >= 2 {
            out.push(cur);
        }
        out
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        for piece in self.clipped(pts) {
            let attr = self.points_attr(&piece);
            let _ = writeln!(
                self.body,
                r#"<polyline points="{attr}" fill="none" stroke="{stroke}" stroke-width="{}" stroke-linejoin="round"/>"#,
                fmt_num(width)
            );
        }
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(self.body, r#"<polygon points="{attr}" fill="{fill}" stroke="{stroke}" stroke-width="0.8"/>"#);
    }

    pub fn hatched_polygon(&mut self, pts: &[(f64, f64)], stroke: &str) {
        self.hatch = true;
        let attr = self.points_attr(pts);
        let _ = writeln!(self.body, r#"<polygon points="{attr}" fill="url(#hatch)" stroke="{stroke}" stroke-width="0.8"/>"#);
    }

    pub fn dot(&mut self, p: (f64, f64), fill: &str, label: Option<&str>) {
        if !(p.0.is_finite() && p.1.is_finite()) {
            return;
        }
        let (x, y) = self.tx(p);
        let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="2.5" fill="{fill}"/>"#, fmt_num(x), fmt_num(y));
        if let Some(l) = label {
            let _ = writeln!(
                self.body,
                r#"<text x="{}" y="{}" font-family="serif" font-size="12" fill="{fill}">{}</text>"#,
                fmt_num(x + 4.0),
                fmt_num(y - 4.0),
                escape(l)
            );
        }
    }

    /// Coordinate axes through the origin, when visible.
    pub fn axes(&mut self) {
        let v = self.view;
        if v.ymin <= 0.0 && v.ymax >= 0.0 {
            self.polyline(&[(v.xmin, 0.0), (v.xmax, 0.0)], "#999999", 0.6);
        }
        if v.xmin <= 0.0 && v.xmax >= 0.0 {
            self.polyline(&[(0.0, v.ymin), (0.0, v.ymax)], "#999999", 0.6);
        }
    }

    pub fn title(&mut self, text: &str) {
        let _ = writeln!(self.body, r#"<text x="8" y="16" font-family="serif" font-size="13">{}</text>"#, escape(text));
    }

    pub fn finish(self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = fmt_num(self.width),
            h = fmt_num(self.height)
        );
        if self.hatch {
            s.push_str(
                r##"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="#404040" stroke-width="1"/></pattern></defs>"##,
            );
            s.push('\n');
        }
        s.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
        s.push('\n');
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Liang–Barsky clip of `[a, b]` to `r`.
fn clip_segment(a: (f64, f64), b: (f64, f64), r: &BBox) -> Option<((f64, f64), (f64, f64))> {
    if !(a.0.is_finite() && a.1.is_finite() && b.0.is_finite() && b.1.is_finite()) {
        return None;
    }
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dx, a.0 - r.xmin), (dx, r.xmax - a.0), (-dy, a.1 - r.ymin), (dy, r.ymax - a.1)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| if t == 0.0 { a } else if t == 1.0 { b } else { (a.0 + t * dx, a.1 + t * dy) };
    Some((at(t0), at(t1)))
}
