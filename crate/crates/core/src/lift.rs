//! Piecewise-geodesic lifts of bracket terms and the constants that control
//! them.
//!
//! A crossing of `A_α` with a translate `A_{β'}` (`β' = gβg⁻¹`) at `P`
//! gives the zigzag `P → αP → αβ'P → ...`, periodic under `h = αβ'`. Every
//! lift is stored in a normalized chart where `P = i` and `A_α` is the
//! imaginary axis oriented upward; `to_original` maps back to the surface
//! group's chart. Metric checks run in the chart of `A_h`, where `h` is a
//! dilation and the periodic structure is numerically stable.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::bracket::{BracketEngine, FormalSum};
use crate::cayley::{enumerate_tube, AxisData, EnumerationError, IntersectionDatum, SearchOptions};
use crate::hyperbolic::{
    axis, dist, dist_point_geodesic, fellow_travel_segment, geodesic_intersection, quasi_constant, translation_length,
    Geodesic, GeodesicSegment, GeometryError, Mobius, Point,
};
use crate::surface::SurfaceGroup;
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("the axes do not cross")]
    AxesDisjoint,
    #[error("window is empty: m·τ = {length} does not exceed 6KC = {bound}")]
    WindowEmpty { length: f64, bound: f64 },
    #[error("no crossing translates; constants are undefined for this pair")]
    NoCrossings,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Sampling resolutions for the numerical checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    pub quasi_per_period: usize,
    pub quasi_periods: usize,
    pub neighborhood_per_period: usize,
    pub window_along: usize,
    pub window_across: usize,
    pub window_periods: i64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            quasi_per_period: 64,
            quasi_periods: 3,
            neighborhood_per_period: 1000,
            window_along: 1000,
            window_across: 21,
            window_periods: 3,
        }
    }
}

/// The lift `γ(α, β')` of one bracket term.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseGeodesic {
    pub tau_alpha: f64,
    pub tau_beta: f64,
    /// Angle from `A_α` to `A_{β'}` at `P`, in `(0, π)`.
    pub crossing_angle: f64,
    pub sign: i8,
    /// `α`, `β'` and `h = αβ'` in the normalized chart.
    pub alpha: Mobius,
    pub beta: Mobius,
    pub holonomy: Mobius,
    pub tau_h: f64,
    pub axis_h: Geodesic,
    /// Normalized chart to the group's chart.
    pub to_original: Mobius,
    /// Chart of `A_h`; `h` acts there as `z ↦ e^{τ_h} z`.
    h_frame: Mobius,
    p_h: Point,
    q_h: Point,
}

/// Which kind of piece a lift segment is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceKind {
    Alpha,
    Beta,
}

impl PiecewiseGeodesic {
    /// Builds the lift from its intrinsic data. Angle `0` gives the
    /// degenerate case where both pieces lie on one geodesic.
    pub fn from_parameters(tau_alpha: f64, tau_beta: f64, crossing_angle: f64, sign: i8) -> Result<Self, LiftError> {
        let alpha = Mobius::dilation(tau_alpha);
        let rot = Mobius::rotation_about_i(sign as f64 * crossing_angle);
        let beta = Mobius::dilation(tau_beta).conjugate_by(&rot);
        let holonomy = alpha.compose(&beta);
        let tau_h = translation_length(&holonomy)?;
        let axis_h = axis(&holonomy)?;
        let h_frame = axis_h.frame();
        let p_h = h_frame.apply_point(Point::I);
        let q_h = h_frame.apply_point(alpha.apply_point(Point::I));
        Ok(PiecewiseGeodesic {
            tau_alpha,
            tau_beta,
            crossing_angle,
            sign,
            alpha,
            beta,
            holonomy,
            tau_h,
            axis_h,
            to_original: Mobius::IDENTITY,
            h_frame,
            p_h,
            q_h,
        })
    }

    /// Lift for `α` and the conjugate `β' = gβg⁻¹`, given as matrices.
    pub fn from_matrices(alpha: &Mobius, beta_conj: &Mobius) -> Result<Self, LiftError> {
        let (aa, ab) = (axis(alpha)?, axis(beta_conj)?);
        let x = match geodesic_intersection(&aa, &ab) {
            Ok(Some(x)) => x,
            Ok(None) | Err(GeometryError::SameCarrier) => return Err(LiftError::AxesDisjoint),
            Err(e) => return Err(e.into()),
        };
        let (ta, tb) = (translation_length(alpha)?, translation_length(beta_conj)?);
        let mut lift = Self::from_parameters(ta, tb, x.angle, x.sign)?;
        let f = aa.frame();
        let height = f.apply(x.point.to_complex()).norm();
        lift.to_original = f.inverse().compose(&Mobius::dilation(2.0 * height.ln()));
        Ok(lift)
    }

    pub fn period(&self) -> f64 {
        self.tau_alpha + self.tau_beta
    }

    /// Interior angle of the zigzag at each vertex.
    pub fn vertex_angle(&self) -> f64 {
        PI - self.crossing_angle
    }

    /// `[P, αP, hP]` in the group's chart.
    pub fn base_vertices(&self) -> [Point; 3] {
        let p = Point::I;
        [p, self.alpha.apply_point(p), self.holonomy.apply_point(p)].map(|v| self.to_original.apply_point(v))
    }

    /// Point at arclength `t` from `P`, in the chart of `A_h`.
    pub fn point_in_axis_chart(&self, t: f64) -> Point {
        let per = self.period();
        let k = (t / per).floor();
        let s = t - k * per;
        let scale = (k * self.tau_h).exp();
        let (p, q) = (scale_point(self.p_h, scale), scale_point(self.q_h, scale));
        if s < self.tau_alpha {
            walk_between(p, q, s)
        } else {
            walk_between(q, scale_point(self.p_h, scale * self.tau_h.exp()), s - self.tau_alpha)
        }
    }

    /// Point at arclength `t` in the normalized chart.
    pub fn point_at(&self, t: f64) -> Point {
        self.h_frame.inverse().apply_point(self.point_in_axis_chart(t))
    }

    /// Vertex `k`: even indices are `h^{k/2}P`, odd ones `h^{(k-1)/2}αP`; in the chart of `A_h`.
    fn vertex_in_axis_chart(&self, k: i64) -> Point {
        let j = k.div_euclid(2);
        let scale = (j as f64 * self.tau_h).exp();
        if k.rem_euclid(2) == 0 {
            scale_point(self.p_h, scale)
        } else {
            scale_point(self.q_h, scale)
        }
    }

    /// Piece `k` of the given kind in the normalized chart: `I_α^k = h^k[P, αP]`
    /// and `I_β^k = h^k[αP, hP]`.
    pub fn piece(&self, kind: PieceKind, k: i64) -> GeodesicSegment {
        let hk = self.holonomy.pow(k);
        match kind {
            PieceKind::Alpha => GeodesicSegment::new(
                Geodesic::IMAGINARY_AXIS.transformed(&hk),
                hk.apply_point(Point::I),
                self.tau_alpha,
                true,
            ),
            PieceKind::Beta => {
                let carrier = axis(&self.beta)
                    .expect("β is hyperbolic")
                    .transformed(&hk.compose(&self.alpha));
                let start = hk.apply_point(self.alpha.apply_point(Point::I));
                GeodesicSegment::new(carrier, start, self.tau_beta, true)
            }
        }
    }

    /// Midpoints of the two base pieces and their distances to `A_h`.
    pub fn midpoint_residuals(&self) -> (f64, f64) {
        let a = self.piece(PieceKind::Alpha, 0).midpoint();
        let b = self.piece(PieceKind::Beta, 0).midpoint();
        (
            dist_point_geodesic(a, &self.axis_h),
            dist_point_geodesic(b, &self.axis_h),
        )
    }
}

fn scale_point(p: Point, s: f64) -> Point {
    Point { x: p.x * s, y: p.y * s }
}

fn walk_between(p: Point, q: Point, s: f64) -> Point {
    match Geodesic::through(p, q) {
        Ok(g) => g.walk(p, s),
        Err(_) => p,
    }
}

/// Lift for words `α`, `g`, `β` of a surface group.
pub fn build_lift(group: &SurfaceGroup, alpha: &Word, g: &Word, beta: &Word) -> Result<PiecewiseGeodesic, LiftError> {
    let a = group.evaluate(alpha);
    let b = group.evaluate(&g.concat(beta).concat(&g.inverse()));
    PiecewiseGeodesic::from_matrices(&a, &b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiReport {
    pub max_ratio: f64,
    pub pass: bool,
}

/// Largest ratio of path length to endpoint distance over a sampled grid
/// of parameter pairs covering several periods, vertices included.
pub fn check_quasigeodesic(lift: &PiecewiseGeodesic, k: f64, samples: usize, periods: usize) -> QuasiReport {
    let per = lift.period();
    let samples = samples.max(2);
    let mut ts: Vec<f64> = (0..=samples * periods)
        .map(|i| i as f64 * per / samples as f64)
        .collect();
    for j in 0..=periods {
        ts.push(j as f64 * per);
        ts.push(j as f64 * per + lift.tau_alpha);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let pts: Vec<Point> = ts.iter().map(|&t| lift.point_in_axis_chart(t)).collect();
    let mut max_ratio: f64 = 1.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = dist(pts[i], pts[j]);
            if d > 1e-9 {
                max_ratio = max_ratio.max((ts[j] - ts[i]) / d);
            }
        }
    }
    QuasiReport {
        max_ratio,
        pass: max_ratio <= k * (1.0 + 1e-6),
    }
}

/// Twice the two-sided sampled distance between the lift and `A_h` over one period.
pub fn measure_neighborhood_constant(lift: &PiecewiseGeodesic, samples: usize) -> f64 {
    let per = lift.period();
    let samples = samples.max(2);
    let to_axis = |p: Point| (p.x.abs() / p.y).asinh();
    // path to axis; vertices are the extremes by convexity, but sample anyway
    let mut worst = to_axis(lift.p_h).max(to_axis(lift.q_h));
    for i in 0..samples {
        worst = worst.max(to_axis(lift.point_in_axis_chart(i as f64 * per / samples as f64)));
    }
    // axis to path: points of A_h over one period against the nearby pieces
    let pieces: Vec<GeodesicSegment> = (-2..=4)
        .filter_map(|k| GeodesicSegment::between(lift.vertex_in_axis_chart(k), lift.vertex_in_axis_chart(k + 1)).ok())
        .collect();
    let h0 = lift.p_h.x.hypot(lift.p_h.y);
    for i in 0..samples {
        let y = h0 * (lift.tau_h * i as f64 / samples as f64).exp();
        let z = Point { x: 0.0, y };
        let d = pieces.iter().map(|s| s.distance_to(z)).fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    2.0 * worst
}

/// Constants controlling the non-cancellation argument for one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsBundle {
    pub length_cap: f64,
    pub theta_min: f64,
    pub k: f64,
    pub c: f64,
    pub m: f64,
    pub tau0: f64,
    pub m0: u64,
}

/// `ceil(K·(3M + 10·K·C) / τ₀)`.
pub fn m0_bound(k: f64, m: f64, c: f64, tau0: f64) -> u64 {
    (k * (3.0 * m + 10.0 * k * c) / tau0).ceil().max(1.0) as u64
}

/// Shortest translation length among reduced words of the growth sample
/// length, or the configured systole.
pub fn systole_estimate(group: &SurfaceGroup) -> f64 {
    if let Some(s) = group.systole {
        return s;
    }
    let n = crate::cayley::default_sample_length(group);
    let mut best = f64::INFINITY;
    for len in 1..=n {
        for w in group.reduced_words(len) {
            if let Ok(t) = translation_length(&group.evaluate(&w)) {
                best = best.min(t);
            }
        }
    }
    best
}

/// Longest stretch of `A_x` within `c` of another translate of `A_x` or
/// `A_y`, over translates whose basepoint images lie near the fundamental
/// segments of both axes.
pub fn fellow_travel_cap(group: &SurfaceGroup, x: &AxisData, y: &AxisData, c: f64) -> Result<f64, LiftError> {
    let mut best: f64 = 0.0;
    let o = group.basepoint;
    let opts = SearchOptions::for_group(group);
    let reach = x.tau.max(y.tau) / 2.0 + dist_point_geodesic(o, &x.axis).max(dist_point_geodesic(o, &y.axis));
    for (base, other) in [(x, y), (y, x)] {
        let start = base.axis.project(o);
        let seg = GeodesicSegment::new(base.axis, start, base.tau, true);
        for e in enumerate_tube(group, &seg, reach + c, opts)? {
            for target in [base, other] {
                let t = target.axis.transformed(&e.matrix);
                if t.same_carrier(&base.axis, 1e-9) {
                    continue;
                }
                match fellow_travel_segment(&base.axis, &t, c) {
                    Ok(Some(s)) => best = best.max(s.length),
                    Ok(None) => {}
                    Err(GeometryError::Asymptotic) | Err(GeometryError::SameCarrier) => {}
                    Err(err) => return Err(err.into()),
                }
            }
        }
    }
    Ok(best)
}

/// Largest power `m` with `m·τ` at most this is used when sampling `C`.
const C_SAMPLE_SPAN: f64 = 64.0;

pub fn constants_for_pair(engine: &BracketEngine, alpha: &Word, beta: &Word) -> Result<ConstantsBundle, LiftError> {
    constants_for_pair_with(engine, alpha, beta, Sampling::default())
}

pub fn constants_for_pair_with(
    engine: &BracketEngine,
    alpha: &Word,
    beta: &Word,
    sampling: Sampling,
) -> Result<ConstantsBundle, LiftError> {
    let group = &engine.group;
    let data = engine.intersection_data(alpha, beta)?;
    if data.is_empty() {
        return Err(LiftError::NoCrossings);
    }
    let xa = AxisData::of_word(group, alpha)?;
    let xb = AxisData::of_word(group, beta)?;
    let theta_min = data
        .iter()
        .map(|d| d.angle.min(PI - d.angle))
        .fold(f64::INFINITY, f64::min);
    let k = quasi_constant(theta_min)?;
    let mut c: f64 = 0.0;
    for d in &data {
        let mut m = 1u32;
        loop {
            let lift = build_lift(group, &alpha.power(m as i64), &d.coset_rep, beta)?;
            c = c.max(measure_neighborhood_constant(&lift, sampling.neighborhood_per_period));
            m *= 2;
            if m as f64 * xa.tau > C_SAMPLE_SPAN {
                break;
            }
        }
    }
    let m = fellow_travel_cap(group, &xa, &xb, c)?;
    let tau0 = systole_estimate(group);
    Ok(ConstantsBundle {
        length_cap: xa.tau.max(xb.tau),
        theta_min,
        k,
        c,
        m,
        tau0,
        m0: m0_bound(k, m, c, tau0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowData {
    #[serde(skip)]
    pub s: Point,
    #[serde(skip)]
    pub r: Point,
    #[serde(skip)]
    pub j_segment: GeodesicSegment,
    pub j_length: f64,
    pub u_halfwidth: f64,
    /// Smallest sampled distance from `U` to the other pieces.
    pub min_separation: f64,
    pub pass: bool,
}

/// Window on the `α^m` piece `I^0` of a lift whose first piece has length
/// `m·τ_α`: the part `J` at distance `3KC` from both ends, its Fermi
/// neighborhood `U` of half-width `C`, and a sampled check that `U` keeps
/// distance at least `C` from the other pieces.
pub fn window(lift: &PiecewiseGeodesic, bundle: &ConstantsBundle, sampling: Sampling) -> Result<WindowData, LiftError> {
    let (k, c) = (bundle.k, bundle.c);
    let len = lift.tau_alpha;
    let margin = 3.0 * k * c;
    if len <= 2.0 * margin {
        return Err(LiftError::WindowEmpty {
            length: len,
            bound: 2.0 * margin,
        });
    }
    let axis_a = Geodesic::IMAGINARY_AXIS;
    let s = axis_a.walk(Point::I, margin);
    let r = axis_a.walk(Point::I, len - margin);
    let j_length = len - 2.0 * margin;
    let j_segment = GeodesicSegment::new(axis_a, s, j_length, false);

    let mut others = Vec::new();
    for kk in -sampling.window_periods..=sampling.window_periods {
        if kk != 0 {
            others.push(lift.piece(PieceKind::Alpha, kk));
        }
        others.push(lift.piece(PieceKind::Beta, kk));
    }
    // the pieces adjacent to I^0 come first so the running minimum tightens early
    others.sort_by_key(|seg| (dist(seg.start, s).min(dist(seg.start, r)) * 1e3) as i64);

    let mut min_sep = f64::INFINITY;
    let (na, nc) = (sampling.window_along.max(2), sampling.window_across.max(2));
    for i in 0..=na {
        let along = margin + j_length * i as f64 / na as f64;
        let height = along.exp();
        for jx in 0..nc {
            let offset = -c + 2.0 * c * jx as f64 / (nc - 1) as f64;
            // Fermi coordinates: signed distance `offset` from the imaginary axis
            let z = Point {
                x: height * offset.tanh(),
                y: height / offset.cosh(),
            };
            for seg in &others {
                min_sep = min_sep.min(seg.distance_to(z));
            }
        }
    }
    Ok(WindowData {
        s,
        r,
        j_segment,
        j_length,
        u_halfwidth: c,
        min_separation: min_sep,
        pass: min_sep >= c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoncancelRow {
    pub m: u32,
    pub distinct_classes: usize,
    pub coefficients: Vec<i64>,
    /// `m·i(α, β)`
    pub expected_multiplicity: usize,
    pub above_threshold: bool,
    /// Structure check, only decided above the threshold.
    pub pass: Option<bool>,
    pub quasi_ok: bool,
    pub window_ok: Option<bool>,
    /// Agreement with the direct enumeration, when `m·τ_α` is short enough
    /// for the group chart to resolve it.
    pub direct_agrees: Option<bool>,
    pub bracket: String,
}

/// Longest axis segment the direct enumeration is trusted on. Orbit points
/// much further out crowd the boundary of the half-plane chart.
pub const DIRECT_SPAN: f64 = 24.0;

/// Brackets `[α^m, β]` for each `m`, with the structural checks on every
/// lift encountered.
pub fn noncancellation_experiment(
    engine: &BracketEngine,
    alpha: &Word,
    beta: &Word,
    m_list: &[u32],
    bundle: Option<&ConstantsBundle>,
    sampling: Sampling,
) -> Result<Vec<NoncancelRow>, LiftError> {
    let i_ab = engine.intersection_number(alpha, beta)?;
    let data: Vec<IntersectionDatum> = if i_ab > 0 {
        engine.intersection_data(alpha, beta)?
    } else {
        Vec::new()
    };
    let tau_alpha = AxisData::of_word(&engine.group, alpha).map(|x| x.tau).unwrap_or(0.0);
    let mut rows = Vec::new();
    for &m in m_list {
        let am = alpha.power(m as i64);
        let sum = engine.power_bracket(alpha, m, beta)?;
        let direct_agrees = if m as f64 * tau_alpha <= DIRECT_SPAN {
            Some(engine.bracket_direct(&am, beta)?.0 == sum)
        } else {
            None
        };
        let above = bundle.is_some_and(|b| m as u64 > b.m0);
        let coefficients: Vec<i64> = sum.iter().map(|(_, k)| k).collect();
        let pass = above.then(|| sum.len() == i_ab && coefficients.iter().all(|k| k.unsigned_abs() == m as u64));
        let mut quasi_ok = true;
        let mut window_ok = None;
        for d in &data {
            let lift = build_lift(&engine.group, &am, &d.coset_rep, beta)?;
            let k = match bundle {
                Some(b) => b.k,
                None => quasi_constant(d.angle.min(PI - d.angle))?,
            };
            quasi_ok &= check_quasigeodesic(&lift, k, sampling.quasi_per_period, sampling.quasi_periods).pass;
            if let Some(b) = bundle {
                match window(&lift, b, sampling) {
                    Ok(w) => window_ok = Some(window_ok.unwrap_or(true) && w.pass),
                    Err(LiftError::WindowEmpty { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        rows.push(NoncancelRow {
            m,
            distinct_classes: sum.len(),
            coefficients,
            expected_multiplicity: m as usize * i_ab,
            above_threshold: above,
            pass,
            quasi_ok,
            window_ok,
            direct_agrees,
            bracket: sum.to_string(),
        });
    }
    Ok(rows)
}

/// Multiplicity check used by callers that already have a bracket.
pub fn has_power_structure(sum: &FormalSum, m: u32, intersections: usize) -> bool {
    sum.len() == intersections && sum.iter().all(|(_, k)| k.unsigned_abs() == m as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example() -> PiecewiseGeodesic {
        let alpha = Mobius::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let beta = Mobius::new(1.25, 0.75, 0.75, 1.25).unwrap();
        PiecewiseGeodesic::from_matrices(&alpha, &beta).unwrap()
    }

    #[test]
    fn worked_example_vertices() {
        let lift = worked_example();
        let [p, ap, hp] = lift.base_vertices();
        assert!(dist(p, Point::I) < 1e-12);
        assert!(dist(ap, Point { x: 0.0, y: 4.0 }) < 1e-12);
        assert!((hp.x - 3.529411764705882).abs() < 1e-9 && (hp.y - 1.8823529411764706).abs() < 1e-9);
        assert!((lift.tau_alpha - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((lift.tau_beta - 2.0 * 2f64.ln()).abs() < 1e-12);
        let (ra, rb) = lift.midpoint_residuals();
        assert!(ra < 1e-9 && rb < 1e-9);
    }

    #[test]
    fn worked_example_quasi_geodesic() {
        let lift = worked_example();
        let k = quasi_constant(lift.vertex_angle()).unwrap();
        assert!((k - 2.0).abs() < 1e-12);
        let rep = check_quasigeodesic(&lift, k, 64, 3);
        assert!(rep.pass, "{rep:?}");
        assert!(rep.max_ratio > 1.0);
    }

    #[test]
    fn degenerate_lift_is_geodesic() {
        let lift = PiecewiseGeodesic::from_parameters(1.0, 0.7, 0.0, 1).unwrap();
        let rep = check_quasigeodesic(&lift, 1.0, 64, 3);
        assert!((rep.max_ratio - 1.0).abs() < 1e-9, "{rep:?}");
        assert!(measure_neighborhood_constant(&lift, 200) < 1e-9);
    }

    #[test]
    fn neighborhood_constant_matches_vertex_distance() {
        let lift = worked_example();
        let c = measure_neighborhood_constant(&lift, 1000);
        let vertex = dist_point_geodesic(lift.point_at(0.0), &lift.axis_h);
        assert!((c - 2.0 * vertex).abs() < 1e-3, "{c} vs {vertex}");
    }

    #[test]
    fn m0_arithmetic() {
        assert_eq!(m0_bound(2.0, 3.0, 1.0, 0.5), 116);
    }

    #[test]
    fn window_boundary_case() {
        let lift = PiecewiseGeodesic::from_parameters(6.0, 1.0, PI / 2.0, 1).unwrap();
        let bundle = ConstantsBundle {
            length_cap: 6.0,
            theta_min: PI / 2.0,
            k: 2.0,
            c: 0.5,
            m: 1.0,
            tau0: 1.0,
            m0: 1,
        };
        assert!(matches!(
            window(&lift, &bundle, Sampling::default()),
            Err(LiftError::WindowEmpty { .. })
        ));
        let lift = PiecewiseGeodesic::from_parameters(20.0, 1.0, PI / 2.0, 1).unwrap();
        let w = window(
            &lift,
            &bundle,
            Sampling {
                window_along: 50,
                ..Sampling::default()
            },
        )
        .unwrap();
        assert!((w.j_length - (20.0 - 6.0)).abs() < 1e-12);
        assert!((dist(w.s, w.r) - w.j_length).abs() < 1e-9);
    }
}
