//! Figures and tables: SVG, CSV.

pub mod svg;

use std::fmt::Write;

use crate::error::Result;
use crate::geom::{BBox, Chain, Point, SimplePolygon};
use crate::manifold::{Branch, StableManifold, UnstableManifold};
use crate::map::{NumericMode, Params};
use crate::numeric::scalar_to_float;
use crate::trap::{EllApproximation, TrapConstruction};

use svg::{Svg, K_STROKE, STABLE, TRAP_FILL, UNSTABLE};

pub const FIGURE_WIDTH: f64 = 800.0;

/// Float precision used for every emitted coordinate.
pub fn output_precision(params: &Params) -> u32 {
    match params.mode() {
        NumericMode::Exact => 53,
        NumericMode::Float { precision_bits } => precision_bits,
    }
}

pub fn to_xy(p: &Point, precision: u32) -> Result<(f64, f64)> {
    Ok((scalar_to_float(p.x(), precision)?.to_f64(), scalar_to_float(p.y(), precision)?.to_f64()))
}

fn to_xys(pts: &[Point], precision: u32) -> Result<Vec<(f64, f64)>> {
    pts.iter().map(|p| to_xy(p, precision)).collect()
}

fn bbox_of(pts: &[(f64, f64)]) -> BBox {
    pts.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).fold(BBox::empty(), |b, p| b.union(&BBox::new(p.0, p.0, p.1, p.1)))
}

/// `branch,arc,index,x,y` rows; `arc` is empty on the initial segment.
pub fn manifold_csv(m: &UnstableManifold, precision: u32) -> Result<String> {
    let mut s = String::from("branch,arc,index,x,y\n");
    for (name, b) in [("u+", Branch::UPlus), ("u-", Branch::UMinus)] {
        let chain = m.branch_chain(b);
        for (i, p) in chain.vertices.iter().enumerate() {
            let arc = if i == 0 { None } else { chain.segment_arc[i - 1] };
            let (x, y) = to_xy(p, precision)?;
            let _ = writeln!(s, "{name},{},{i},{x},{y}", arc.map(|a| a.to_string()).unwrap_or_default());
        }
    }
    Ok(s)
}

fn manifold_layers(fig: &mut Svg, m: &UnstableManifold, s: Option<&StableManifold>, precision: u32) -> Result<()> {
    if let Some(s) = s {
        fig.polyline(&to_xys(&s.minus_chain().vertices, precision)?, STABLE, 1.0);
        fig.polyline(&to_xys(s.plus_segment(10.0).vertices(), precision)?, STABLE, 1.0);
    }
    for b in [Branch::UPlus, Branch::UMinus] {
        fig.polyline(&to_xys(&m.branch_chain(b).vertices, precision)?, UNSTABLE, 1.2);
    }
    Ok(())
}

fn manifold_view(m: &UnstableManifold, precision: u32) -> Result<BBox> {
    let mut pts = to_xys(&m.branch_chain(Branch::UPlus).vertices, precision)?;
    pts.extend(to_xys(&m.branch_chain(Branch::UMinus).vertices, precision)?);
    Ok(bbox_of(&pts))
}

/// Both manifolds of `X` with `X`, `Z`, `Z⁻¹`.
pub fn manifold_svg(params: &Params, m: &UnstableManifold, s: Option<&StableManifold>) -> Result<String> {
    let pr = output_precision(params);
    let mut fig = Svg::new(manifold_view(m, pr)?, FIGURE_WIDTH);
    fig.axes();
    manifold_layers(&mut fig, m, s, pr)?;
    fig.dot(to_xy(&m.x, pr)?, "black", Some("X"));
    fig.dot(to_xy(&m.z, pr)?, "black", Some("Z"));
    fig.dot(to_xy(&m.z_inverse, pr)?, "black", Some("Z⁻¹"));
    fig.title(&format!("a = {}, b = {}, depth {}", params.a_rational(), params.b_rational(), m.depth));
    Ok(fig.finish())
}

/// `𝒟` shaded under the unstable manifold.
pub fn trap_svg(params: &Params, m: &UnstableManifold, tc: &TrapConstruction, d: &SimplePolygon) -> Result<String> {
    let pr = output_precision(params);
    let mut fig = Svg::new(manifold_view(m, pr)?, FIGURE_WIDTH);
    fig.polygon(&to_xys(d.vertices(), pr)?, TRAP_FILL, "none");
    fig.axes();
    manifold_layers(&mut fig, m, None, pr)?;
    fig.dot(to_xy(&tc.z, pr)?, "black", Some("Z"));
    fig.dot(to_xy(&tc.t, pr)?, "black", Some("T"));
    if tc.s != tc.t {
        fig.dot(to_xy(&tc.s, pr)?, "black", Some("S"));
    }
    Ok(fig.finish())
}

/// `𝒟` outlined, `𝒦` hatched.
pub fn kpolygon_svg(params: &Params, m: &UnstableManifold, d: &SimplePolygon, k: &SimplePolygon) -> Result<String> {
    let pr = output_precision(params);
    let mut fig = Svg::new(bbox_of(&to_xys(d.vertices(), pr)?), FIGURE_WIDTH);
    fig.polygon(&to_xys(d.vertices(), pr)?, TRAP_FILL, UNSTABLE);
    fig.hatched_polygon(&to_xys(k.vertices(), pr)?, K_STROKE);
    fig.axes();
    manifold_layers(&mut fig, m, None, pr)?;
    Ok(fig.finish())
}

/// The last nested iterate pair around `P` and `P′`.
pub fn ell_svg(params: &Params, ell: &EllApproximation, context: Option<&SimplePolygon>) -> Result<String> {
    let pr = output_precision(params);
    let right = to_xys(ell.right.vertices(), pr)?;
    let left = to_xys(ell.left.vertices(), pr)?;
    let mut all = right.clone();
    all.extend(left.iter().copied());
    let ctx = match context {
        Some(c) => Some(to_xys(c.vertices(), pr)?),
        None => None,
    };
    if let Some(c) = &ctx {
        all.extend(c.iter().copied());
    }
    let mut fig = Svg::new(bbox_of(&all), FIGURE_WIDTH);
    if let Some(c) = &ctx {
        fig.polygon(c, "none", "#b0b0b0");
    }
    fig.polygon(&right, TRAP_FILL, UNSTABLE);
    fig.polygon(&left, TRAP_FILL, UNSTABLE);
    fig.axes();
    let (p, pp) = params.period_two_orbit()?;
    fig.dot(to_xy(&p, pr)?, "black", Some("P"));
    fig.dot(to_xy(&pp, pr)?, "black", Some("P′"));
    fig.title(&format!("L^{}", 2 * ell.k));
    Ok(fig.finish())
}
