//! SVG output. Geometry stays exact until here; `y = v·√3` is applied only
//! when a coordinate is written out.

use std::fmt::Write;

use num_traits::ToPrimitive;
use tetrapet::pet::PeriodicTile;
use tetrapet::{ConcretePet, Poly2, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorMode {
    ByPiece,
    ByPeriod,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// Width of one panel in pixels.
    pub width: u32,
    pub color: ColorMode,
    pub label: String,
    pub approximate: bool,
}

impl RenderSpec {
    pub fn new(label: impl Into<String>, color: ColorMode) -> Self {
        RenderSpec {
            width: 600,
            color,
            label: label.into(),
            approximate: false,
        }
    }
}

/// A float with 12 significant digits, trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn f(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

/// Hue spread by the golden angle so neighbouring keys look different.
pub fn color_for(key: usize) -> String {
    let hue = (key as f64 * 137.507_764_050_037_85) % 360.0;
    format!("hsl({},62%,62%)", fmt_num(hue))
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
const MARGIN: f64 = 20.0;

struct Panel {
    scale: f64,
    left: f64,
}

impl Panel {
    fn new(spec: &RenderSpec, index: u32) -> Self {
        let scale = (spec.width as f64 - 2.0 * MARGIN) / 3.0;
        Panel {
            scale,
            left: index as f64 * spec.width as f64,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + MARGIN + (x + 1.5) * self.scale
    }

    fn py(&self, v: f64) -> f64 {
        MARGIN + 24.0 + (SQRT3 / 2.0 - v * SQRT3) * self.scale
    }

    fn points(&self, p: &Poly2) -> String {
        p.verts()
            .iter()
            .map(|q| {
                format!(
                    "{},{}",
                    fmt_num(self.px(f(&q.x))),
                    fmt_num(self.py(f(&q.v)))
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn outline(&self, out: &mut String) {
        let chart = tetrapet::torus::fundamental_domain::<Rat>();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            self.points(&chart)
        );
    }

    fn polygon(&self, out: &mut String, p: &Poly2, fill: &str, label: Option<String>) {
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.4"/>"#,
            self.points(p)
        );
        if let Some(l) = label {
            let c = p.centroid();
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="10" text-anchor="middle" dominant-baseline="middle">{l}</text>"#,
                fmt_num(self.px(f(&c.x))),
                fmt_num(self.py(f(&c.v)))
            );
        }
    }
}

fn header(spec: &RenderSpec, panels: u32) -> (String, f64) {
    let w = spec.width as f64 * panels as f64;
    let h = (spec.width as f64 - 2.0 * MARGIN) / 3.0 * SQRT3 + 2.0 * MARGIN + 24.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt_num(w),
        fmt_num(h),
        fmt_num(w),
        fmt_num(h)
    );
    let mut title = spec.label.clone();
    if spec.approximate {
        title.push_str(" (approximate)");
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" font-size="14">{}</text>"#,
        fmt_num(MARGIN),
        escape(&title)
    );
    (out, h)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Domain pieces on the left, their images on the right, numbered alike.
pub fn svg_partition(pet: &ConcretePet, spec: &RenderSpec) -> String {
    let (mut out, _) = header(spec, 2);
    for (side, panel) in [(0u32, Panel::new(spec, 0)), (1, Panel::new(spec, 1))] {
        for (k, piece) in pet.pieces.iter().enumerate() {
            let poly = if side == 0 {
                piece.dom.clone()
            } else {
                piece.image()
            };
            panel.polygon(&mut out, &poly, &color_for(k), Some(k.to_string()));
        }
        panel.outline(&mut out);
    }
    out.push_str("</svg>\n");
    out
}

/// Tiles coloured by period; uncovered holes in white.
pub fn svg_tiling(tiles: &[PeriodicTile<Rat>], holes: &[Poly2], spec: &RenderSpec) -> String {
    let (mut out, _) = header(spec, 1);
    let panel = Panel::new(spec, 0);
    for (k, t) in tiles.iter().enumerate() {
        let key = match spec.color {
            ColorMode::ByPeriod => t.period,
            ColorMode::ByPiece => k,
        };
        panel.polygon(&mut out, &t.tile, &color_for(key), None);
    }
    for h in holes {
        panel.polygon(&mut out, h, "white", None);
    }
    panel.outline(&mut out);
    out.push_str("</svg>\n");
    out
}

/// Labelled regions in one panel, such as the slice of a domain list.
pub fn svg_regions(regions: &[(String, Poly2)], spec: &RenderSpec) -> String {
    let (mut out, _) = header(spec, 1);
    let panel = Panel::new(spec, 0);
    for (k, (label, p)) in regions.iter().enumerate() {
        panel.polygon(&mut out, p, &color_for(k), Some(escape(label)));
    }
    panel.outline(&mut out);
    out.push_str("</svg>\n");
    out
}

/// Number of `<polygon` elements, chart outlines included.
pub fn polygon_count(svg: &str) -> usize {
    svg.matches("<polygon").count()
}
