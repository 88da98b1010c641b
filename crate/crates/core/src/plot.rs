//! Static SVG rendering of planar clouds and line solutions.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{canonicalize_flat, nearest_flat, AffineFlat, Hyperplane, WeightedPointCloud, DEFAULT_REL_TOL};

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const SIZE: f64 = 600.0;
const MARGIN: f64 = 30.0;

/// Points coloured by their nearest flat (grey without flats); line flats
/// are drawn across the viewport in the same colour.
pub fn render_svg(cloud: &WeightedPointCloud<f64>, flats: &[AffineFlat<f64>]) -> Result<String> {
    if cloud.dim() != 2 {
        return Err(Error::NotPlanar(cloud.dim()));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for i in 0..cloud.len() {
        for a in 0..2 {
            lo[a] = lo[a].min(cloud.point(i)[a]);
            hi[a] = hi[a].max(cloud.point(i)[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let sx = |x: f64| MARGIN + (x - lo[0]) * scale;
    let sy = |y: f64| SIZE - MARGIN - (y - lo[1]) * scale;

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#)
        .expect("write to string");
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).expect("write to string");
    for (idx, flat) in flats.iter().enumerate() {
        if flat.flat_dim() != 1 {
            continue;
        }
        let (p, b) = (flat.offset(), &flat.basis()[0]);
        let reach = 2.0 * span + p.iter().zip(&lo).map(|(a, l)| (a - l).abs()).sum::<f64>();
        let (x1, y1) = (p[0] - reach * b[0], p[1] - reach * b[1]);
        let (x2, y2) = (p[0] + reach * b[0], p[1] + reach * b[1]);
        writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="1.5"/>"#,
            sx(x1),
            sy(y1),
            sx(x2),
            sy(y2),
            PALETTE[idx % PALETTE.len()]
        )
        .expect("write to string");
    }
    for i in 0..cloud.len() {
        let colour = if flats.is_empty() {
            "#808080"
        } else {
            PALETTE[nearest_flat(cloud.point(i), flats)?.0 % PALETTE.len()]
        };
        let p = cloud.point(i);
        writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{colour}"/>"#, sx(p[0]), sy(p[1]))
            .expect("write to string");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Float flat of the planar line `c0 + c1 x + c2 y = 0`.
pub fn line_flat(h: &Hyperplane) -> Result<AffineFlat<f64>> {
    if h.dim() != 2 {
        return Err(Error::NotPlanar(h.dim()));
    }
    let c: Vec<f64> = h.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let n2 = c[1] * c[1] + c[2] * c[2];
    let foot = [-c[0] * c[1] / n2, -c[0] * c[2] / n2];
    canonicalize_flat(&[vec![-c[2], c[1]]], &foot, DEFAULT_REL_TOL)
}
