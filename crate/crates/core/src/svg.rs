//! Poincaré disk pictures of axes, translates, lifts and windows.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::bracket::BracketEngine;
use crate::cayley::{enumerate_ball, AxisData};
use crate::hyperbolic::{to_disk, Geodesic, GeodesicSegment, Mobius, Point};
use crate::lift::{build_lift, constants_for_pair, window, LiftError, PieceKind, PiecewiseGeodesic, Sampling};
use crate::word::Word;

pub const CANVAS: f64 = 1000.0;
const RADIUS: f64 = 480.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Default)]
pub struct Overlays {
    /// Draw translates `g·A_w` for group elements within this distance of the basepoint.
    pub translates: Option<f64>,
    /// Lifts `γ(α, β')` for the first crossing coset of each pair.
    pub lifts: Vec<(Word, Word)>,
    /// Window on the lift of `(α^m, β)`.
    pub window: Option<(Word, Word, u32)>,
}

fn fmt3(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    // avoid "-0.000"
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.3}")
}

fn screen(z: Complex64) -> (String, String) {
    (fmt3(CANVAS / 2.0 + RADIUS * z.re), fmt3(CANVAS / 2.0 - RADIUS * z.im))
}

/// SVG path for a complete geodesic: a circular arc orthogonal to the
/// boundary, or a diameter.
fn geodesic_path(g: &Geodesic) -> String {
    let (u, v) = (g.source.to_disk(), g.target.to_disk());
    let (su, sv) = (screen(u), screen(v));
    let cross = u.re * v.im - u.im * v.re;
    if cross.abs() < 1e-9 {
        return format!("M {} {} L {} {}", su.0, su.1, sv.0, sv.1);
    }
    let cos_d = (u * v.conj()).re;
    let half = cos_d.clamp(-1.0, 1.0).acos() / 2.0;
    let r = RADIUS * half.tan();
    let sweep = if cross > 0.0 { 1 } else { 0 };
    format!(
        "M {} {} A {} {} 0 0 {} {} {}",
        su.0,
        su.1,
        fmt3(r),
        fmt3(r),
        sweep,
        sv.0,
        sv.1
    )
}

fn polyline(points: impl IntoIterator<Item = Point>) -> String {
    let mut s = String::new();
    for (i, p) in points.into_iter().enumerate() {
        let (x, y) = screen(to_disk(p));
        let _ = write!(s, "{}{} {}", if i == 0 { "M " } else { " L " }, x, y);
    }
    s
}

fn segment_points(seg: &GeodesicSegment, chart: &Mobius, n: usize) -> Vec<Point> {
    (0..=n)
        .map(|i| chart.apply_point(seg.point_at(seg.length * i as f64 / n as f64)))
        .collect()
}

fn path(out: &mut String, d: &str, stroke: &str, width: f64, extra: &str) {
    let _ = writeln!(
        out,
        r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{}"{extra}/>"#,
        fmt3(width)
    );
}

fn draw_lift(out: &mut String, lift: &PiecewiseGeodesic, color: &str) {
    for k in -2..=2 {
        for kind in [PieceKind::Alpha, PieceKind::Beta] {
            let seg = lift.piece(kind, k);
            path(
                out,
                &polyline(segment_points(&seg, &lift.to_original, 48)),
                color,
                2.5,
                "",
            );
        }
    }
    let axis = lift.axis_h.transformed(&lift.to_original);
    path(out, &geodesic_path(&axis), color, 1.0, r#" stroke-dasharray="6 4""#);
}

/// Renders the picture. Byte-identical for identical inputs.
pub fn render(engine: &BracketEngine, words: &[Word], overlays: &Overlays) -> Result<String, LiftError> {
    let group = &engine.group;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(
        out,
        r#"<circle cx="500.000" cy="500.000" r="480.000" fill="none" stroke="black" stroke-width="1.500"/>"#
    );

    let axes: Vec<AxisData> = words
        .iter()
        .map(|w| AxisData::of_word(group, w))
        .collect::<Result<_, _>>()?;
    if let Some(radius) = overlays.translates {
        let ball = enumerate_ball(group, group.basepoint, radius)?;
        for (i, a) in axes.iter().enumerate() {
            let mut seen: Vec<Geodesic> = Vec::new();
            for e in &ball {
                let t = a.axis.transformed(&e.matrix);
                if seen.iter().any(|s| s.approx_eq(&t, 1e-9)) {
                    continue;
                }
                seen.push(t);
                path(
                    &mut out,
                    &geodesic_path(&t),
                    PALETTE[i % PALETTE.len()],
                    0.6,
                    r#" stroke-opacity="0.5""#,
                );
            }
        }
    }
    for (i, a) in axes.iter().enumerate() {
        path(&mut out, &geodesic_path(&a.axis), PALETTE[i % PALETTE.len()], 2.0, "");
    }
    for (i, (a, b)) in overlays.lifts.iter().enumerate() {
        let data = engine.intersection_data(a, b)?;
        let Some(first) = data.first() else {
            return Err(LiftError::AxesDisjoint);
        };
        let lift = build_lift(group, a, &first.coset_rep, b)?;
        draw_lift(&mut out, &lift, PALETTE[(words.len() + i) % PALETTE.len()]);
    }
    if let Some((a, b, m)) = &overlays.window {
        let data = engine.intersection_data(a, b)?;
        let Some(first) = data.first() else {
            return Err(LiftError::AxesDisjoint);
        };
        let bundle = constants_for_pair(engine, a, b)?;
        let lift = build_lift(group, &a.power(*m as i64), &first.coset_rep, b)?;
        let w = window(
            &lift,
            &bundle,
            Sampling {
                window_along: 50,
                window_across: 3,
                ..Sampling::default()
            },
        )?;
        draw_lift(&mut out, &lift, "#555555");
        // boundary of U: two equidistant curves and the two end caps
        let n = 96;
        let fermi = |s: f64, r: f64| {
            let h = s.exp();
            lift.to_original.apply_point(Point {
                x: h * r.tanh(),
                y: h / r.cosh(),
            })
        };
        let (s0, s1) = (w.j_segment.start.y.ln(), w.j_segment.start.y.ln() + w.j_length);
        let c = w.u_halfwidth;
        let mut ring: Vec<Point> = (0..=n)
            .map(|i| fermi(s0 + (s1 - s0) * i as f64 / n as f64, -c))
            .collect();
        ring.extend((0..=n).map(|i| fermi(s1 - (s1 - s0) * i as f64 / n as f64, c)));
        ring.push(ring[0]);
        path(&mut out, &polyline(ring), "#e377c2", 1.5, "");
        path(
            &mut out,
            &polyline(segment_points(&w.j_segment, &lift.to_original, 48)),
            "#e377c2",
            3.0,
            "",
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
