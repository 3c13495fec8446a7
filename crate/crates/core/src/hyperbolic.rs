//! Numeric kernel for the upper half-plane model.
//!
//! Points live in `{ z : Im z > 0 }`, isometries are real unit-determinant
//! matrices taken up to sign, and geodesics are stored by their two ideal
//! endpoints with `∞` as a first-class value. Most routines work by moving a
//! geodesic onto the imaginary axis with [`Geodesic::frame`], doing the
//! computation there, and mapping back.
//!
//! Orientation: the standard counterclockwise orientation of the `(x, y)`
//! chart. Crossing signs, and therefore the global sign of every bracket,
//! follow from this choice.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Trace threshold used by [`classify_isometry`] for `||tr| - 2|`.
pub const CLASSIFY_EPS: f64 = 1e-9;
/// Entrywise tolerance for identity / equality tests of normalized matrices.
pub const MATRIX_EPS: f64 = 1e-12;
/// How far (hyperbolic distance) a point may sit off a geodesic and still count as on it.
pub const ON_GEODESIC_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("matrix has non-positive determinant {0}")]
    BadDeterminant(f64),
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    NotInUpperHalfPlane { x: f64, y: f64 },
    #[error("isometry is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("geodesics share the same carrier")]
    SameCarrier,
    #[error("geodesics do not cross")]
    NoCrossing,
    #[error("axes are disjoint")]
    AxesDisjoint,
    #[error("point is not on the given geodesic (off by {0})")]
    PointOffGeodesic(f64),
    #[error("geodesics are asymptotic; the neighbourhood set is unbounded")]
    Asymptotic,
    #[error("angle {0} is outside (0, pi)")]
    AngleOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// An element of `PSL(2, R)` acting by `z -> (a z + b) / (c z + d)`.
///
/// Always stored with `ad - bc = 1` and with the first non-negligible entry
/// positive, so `M` and `-M` have the same representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Fixed-point type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a normalized transform from raw entries.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(GeometryError::BadDeterminant(det));
        }
        Ok(Self::normalize_raw(a, b, c, d, det))
    }

    pub fn from_row_major(m: [f64; 4]) -> Result<Self> {
        Self::new(m[0], m[1], m[2], m[3])
    }

    fn normalize_raw(a: f64, b: f64, c: f64, d: f64, det: f64) -> Self {
        let k = det.sqrt().recip();
        let (a, b, c, d) = (a * k, b * k, c * k, d * k);
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        let first = [a, b, c, d]
            .into_iter()
            .find(|x| x.abs() > 1e-14 * scale)
            .unwrap_or(1.0);
        if first < 0.0 {
            Mobius {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Mobius { a, b, c, d }
        }
    }

    /// Re-normalizes after accumulated floating point drift.
    ///
    /// Products of unimodular matrices only drift by rounding, so when the
    /// computed determinant is dominated by cancellation (large entries) the
    /// scale is left alone and only the sign is fixed.
    pub fn normalized(self) -> Self {
        let det = self.det();
        let magnitude = (self.a * self.d).abs() + (self.b * self.c).abs();
        let det = if det > 0.0 && magnitude < 1e6 { det } else { 1.0 };
        Self::normalize_raw(self.a, self.b, self.c, self.d, det)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// Matrix product without renormalization.
    fn product(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn compose(&self, o: &Mobius) -> Mobius {
        self.product(o).normalized()
    }

    pub fn pow(&self, m: i64) -> Mobius {
        let base = if m < 0 { self.inverse() } else { *self };
        let mut acc = Mobius::IDENTITY;
        for _ in 0..m.unsigned_abs() {
            acc = acc.product(&base);
        }
        acc.normalized()
    }

    /// `g * self * g^-1`
    pub fn conjugate_by(&self, g: &Mobius) -> Mobius {
        g.product(self).product(&g.inverse()).normalized()
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_point(&self, p: Point) -> Point {
        let w = self.apply(p.to_complex());
        Point { x: w.re, y: w.im }
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let num = self.a * x + self.b;
                let den = self.c * x + self.d;
                let v = num / den;
                if den == 0.0 || !v.is_finite() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(v)
                }
            }
        }
    }

    /// Complex derivative `1 / (c z + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = z * self.c + self.d;
        (den * den).inv()
    }

    /// Largest entrywise deviation from `±I`.
    pub fn identity_residual(&self) -> f64 {
        let plus = (self.a - 1.0)
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max((self.d - 1.0).abs());
        let minus = (self.a + 1.0)
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max((self.d + 1.0).abs());
        plus.min(minus)
    }

    pub fn approx_eq(&self, o: &Mobius, tol: f64) -> bool {
        let diff = |s: f64| {
            (self.a - s * o.a)
                .abs()
                .max((self.b - s * o.b).abs())
                .max((self.c - s * o.c).abs())
                .max((self.d - s * o.d).abs())
        };
        diff(1.0).min(diff(-1.0)) <= tol
    }

    /// Hyperbolic translation along the real-axis-symmetric geodesic `0 -> ∞` by `t`.
    pub fn dilation(t: f64) -> Mobius {
        Mobius {
            a: (t / 2.0).exp(),
            b: 0.0,
            c: 0.0,
            d: (-t / 2.0).exp(),
        }
    }

    /// Rotation about `i` by angle `phi` (counterclockwise).
    pub fn rotation_about_i(phi: f64) -> Mobius {
        let (s, c) = (phi / 2.0).sin_cos();
        Mobius {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
        .normalized()
    }
}

impl Mul for Mobius {
    type Output = Mobius;
    fn mul(self, rhs: Mobius) -> Mobius {
        self.compose(&rhs)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn classify_isometry(m: &Mobius) -> IsometryClass {
    classify_with(m, CLASSIFY_EPS)
}

/// [`classify_isometry`] with an explicit trace threshold.
pub fn classify_with(m: &Mobius, eps: f64) -> IsometryClass {
    if m.identity_residual() <= MATRIX_EPS {
        return IsometryClass::Identity;
    }
    let t = m.trace().abs();
    if t > 2.0 + eps {
        IsometryClass::Hyperbolic
    } else if t < 2.0 - eps {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Parabolic
    }
}

fn require_hyperbolic(m: &Mobius) -> Result<()> {
    if classify_isometry(m) == IsometryClass::Hyperbolic {
        Ok(())
    } else {
        Err(GeometryError::NotHyperbolic { trace: m.trace() })
    }
}

pub fn translation_length(m: &Mobius) -> Result<f64> {
    require_hyperbolic(m)?;
    Ok(2.0 * (m.trace().abs() / 2.0).acosh())
}

/// Oriented axis from the repelling to the attracting fixed point.
pub fn axis(m: &Mobius) -> Result<Geodesic> {
    require_hyperbolic(m)?;
    let Mobius { a, b, c, d } = *m;
    if c == 0.0 {
        let finite = BoundaryPoint::Finite(b / (d - a));
        return Ok(if a.abs() > d.abs() {
            Geodesic {
                source: finite,
                target: BoundaryPoint::Infinity,
            }
        } else {
            Geodesic {
                source: BoundaryPoint::Infinity,
                target: finite,
            }
        });
    }
    // roots of c z^2 + (d - a) z - b = 0; discriminant equals tr^2 - 4
    let t = m.trace().abs();
    let sq = ((t - 2.0) * (t + 2.0)).sqrt();
    let p = d - a;
    let q = -0.5 * (p + if p >= 0.0 { sq } else { -sq });
    let z1 = q / c;
    let z2 = if q != 0.0 { -b / q } else { -z1 };
    let gain = |z: f64| (c * z + d).abs();
    let (src, dst) = if gain(z1) > gain(z2) { (z2, z1) } else { (z1, z2) };
    Geodesic::new(BoundaryPoint::Finite(src), BoundaryPoint::Finite(dst))
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if y > 0.0 && x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(GeometryError::NotInUpperHalfPlane { x, y })
        }
    }

    pub const I: Point = Point { x: 0.0, y: 1.0 };

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub(crate) fn from_complex(z: Complex64) -> Point {
        Point { x: z.re, y: z.im }
    }
}

/// Hyperbolic distance, `cosh d = 1 + |p - q|^2 / (2 p.y q.y)`.
pub fn dist(p: Point, q: Point) -> f64 {
    let e = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (e / (2.0 * (p.y.sqrt() * q.y.sqrt()))).asinh()
}

/// A point of `R ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    /// Projective pair `(p : q)`.
    pub fn from_projective(p: f64, q: f64) -> Option<Self> {
        if p == 0.0 && q == 0.0 {
            None
        } else if q == 0.0 {
            Some(BoundaryPoint::Infinity)
        } else {
            Some(BoundaryPoint::Finite(p / q))
        }
    }

    pub fn projective(self) -> (f64, f64) {
        match self {
            BoundaryPoint::Finite(x) => (x, 1.0),
            BoundaryPoint::Infinity => (1.0, 0.0),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Chordal distance between the images on the unit circle, in `[0, 2]`.
    /// Large finite values are close to `∞` and to each other.
    pub fn separation(self, o: BoundaryPoint) -> f64 {
        match (self, o) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                2.0 * ((x - y).abs() / 1f64.hypot(x)) / 1f64.hypot(y)
            }
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => 2.0 / 1f64.hypot(x),
        }
    }

    pub fn approx_eq(self, o: BoundaryPoint, tol: f64) -> bool {
        self.separation(o) <= tol
    }

    /// Position on the unit circle after the Cayley map `z -> (z - i)/(z + i)`.
    pub fn to_disk(self) -> Complex64 {
        match self {
            BoundaryPoint::Infinity => Complex64::new(1.0, 0.0),
            BoundaryPoint::Finite(x) => {
                let z = Complex64::new(x, 0.0);
                (z - Complex64::i()) / (z + Complex64::i())
            }
        }
    }
}

/// Oriented complete geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub source: BoundaryPoint,
    pub target: BoundaryPoint,
}

/// Transverse intersection of two oriented geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: Point,
    /// Angle from the first direction to the second, in `(0, π)`.
    pub angle: f64,
    pub sign: i8,
}

impl Geodesic {
    pub fn new(source: BoundaryPoint, target: BoundaryPoint) -> Result<Self> {
        if source.approx_eq(target, 1e-15) {
            return Err(GeometryError::DegenerateGeodesic);
        }
        Ok(Geodesic { source, target })
    }

    /// The imaginary axis, oriented upward.
    pub const IMAGINARY_AXIS: Geodesic = Geodesic {
        source: BoundaryPoint::Finite(0.0),
        target: BoundaryPoint::Infinity,
    };

    pub fn reversed(&self) -> Geodesic {
        Geodesic {
            source: self.target,
            target: self.source,
        }
    }

    pub fn transformed(&self, m: &Mobius) -> Geodesic {
        Geodesic {
            source: m.apply_boundary(self.source),
            target: m.apply_boundary(self.target),
        }
    }

    /// Orientation-preserving isometry sending `source -> 0` and `target -> ∞`.
    pub fn frame(&self) -> Mobius {
        use BoundaryPoint::*;
        let raw = match (self.source, self.target) {
            (Finite(u), Finite(v)) => {
                if u > v {
                    (1.0, -u, 1.0, -v)
                } else {
                    (-1.0, u, 1.0, -v)
                }
            }
            (Infinity, Finite(v)) => (0.0, 1.0, -1.0, v),
            (Finite(u), Infinity) => (1.0, -u, 0.0, 1.0),
            (Infinity, Infinity) => (1.0, 0.0, 0.0, 1.0),
        };
        let det = raw.0 * raw.3 - raw.1 * raw.2;
        Mobius::normalize_raw(raw.0, raw.1, raw.2, raw.3, det)
    }

    /// Geodesic through `p` then `q`, oriented from `p` towards `q`.
    pub fn through(p: Point, q: Point) -> Result<Geodesic> {
        // move p to i, solve there, move back
        let s = Mobius::new(1.0, -p.x, 0.0, p.y)?;
        let s_inv = s.inverse();
        let w = s.apply_point(q);
        let r2 = w.x * w.x + w.y * w.y;
        if (w.x - 0.0).abs() <= 1e-15 * (1.0 + r2.sqrt()) {
            if (w.y - 1.0).abs() == 0.0 {
                return Err(GeometryError::DegenerateGeodesic);
            }
            let up = Geodesic::IMAGINARY_AXIS;
            let g = if w.y > 1.0 { up } else { up.reversed() };
            return Ok(g.transformed(&s_inv));
        }
        // circle through i centred at c: endpoints are the roots of z^2 - 2cz - 1
        let c = (r2 - 1.0) / (2.0 * w.x);
        let r = c.hypot(1.0);
        let (hi, lo) = if c >= 0.0 {
            (c + r, -1.0 / (c + r))
        } else {
            (-1.0 / (c - r), c - r)
        };
        let (src, dst) = if w.x > 0.0 { (lo, hi) } else { (hi, lo) };
        Ok(Geodesic {
            source: s_inv.apply_boundary(BoundaryPoint::Finite(src)),
            target: s_inv.apply_boundary(BoundaryPoint::Finite(dst)),
        })
    }

    /// Same oriented geodesic up to `tol` on endpoints.
    pub fn approx_eq(&self, o: &Geodesic, tol: f64) -> bool {
        self.source.approx_eq(o.source, tol) && self.target.approx_eq(o.target, tol)
    }

    /// Same carrier, either orientation.
    pub fn same_carrier(&self, o: &Geodesic, tol: f64) -> bool {
        self.approx_eq(o, tol) || self.approx_eq(&o.reversed(), tol)
    }

    /// Nearest point of the geodesic to `p`.
    pub fn project(&self, p: Point) -> Point {
        let f = self.frame();
        let w = f.apply(p.to_complex());
        Point::from_complex(f.inverse().apply(Complex64::new(0.0, w.norm())))
    }

    /// Point at signed arclength `s` from `p` (assumed on the geodesic) in
    /// the positive direction.
    pub fn walk(&self, p: Point, s: f64) -> Point {
        let f = self.frame();
        let h = f.apply(p.to_complex()).norm();
        Point::from_complex(f.inverse().apply(Complex64::new(0.0, h * s.exp())))
    }

    /// Signed arclength from the projection of `p` to the projection of `q`.
    pub fn offset(&self, p: Point, q: Point) -> f64 {
        let f = self.frame();
        let hp = f.apply(p.to_complex()).norm();
        let hq = f.apply(q.to_complex()).norm();
        (hq / hp).ln()
    }

    /// Euclidean unit tangent in the chart at a point of the geodesic.
    pub fn tangent_at(&self, p: Point) -> (f64, f64) {
        let f = self.frame();
        let w = f.apply(p.to_complex());
        let w = Complex64::new(0.0, w.norm());
        let v = Complex64::i() * f.inverse().derivative(w);
        let n = v.norm();
        (v.re / n, v.im / n)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        dist_point_geodesic(p, self) <= tol
    }
}

pub fn dist_point_geodesic(p: Point, g: &Geodesic) -> f64 {
    let w = g.frame().apply(p.to_complex());
    (w.re.abs() / w.im).asinh()
}

/// `Some` when the endpoint pairs strictly interleave on the boundary.
pub fn geodesic_intersection(g1: &Geodesic, g2: &Geodesic) -> Result<Option<Crossing>> {
    if g1.same_carrier(g2, 1e-13) {
        return Err(GeometryError::SameCarrier);
    }
    let f = g1.frame();
    let (s, t) = match (f.apply_boundary(g2.source), f.apply_boundary(g2.target)) {
        (BoundaryPoint::Finite(s), BoundaryPoint::Finite(t)) => (s, t),
        _ => return Ok(None),
    };
    let product = s * t;
    if product.is_nan() || product >= 0.0 {
        return Ok(None);
    }
    let y = (-s * t).sqrt();
    let c = 0.5 * (s + t);
    let (tx, ty) = if s < t { (y, c) } else { (-y, -c) };
    let n = tx.hypot(ty);
    let (tx, ty) = (tx / n, ty / n);
    let angle = tx.abs().atan2(ty);
    let sign = if tx > 0.0 { -1 } else { 1 };
    let point = Point::from_complex(f.inverse().apply(Complex64::new(0.0, y)));
    Ok(Some(Crossing { point, angle, sign }))
}

/// Sign of `det[t1 t2]` for the unit tangents at the crossing.
pub fn intersection_sign(g1: &Geodesic, g2: &Geodesic) -> Result<i8> {
    geodesic_intersection(g1, g2)?
        .map(|c| c.sign)
        .ok_or(GeometryError::NoCrossing)
}

/// Axis of `αβ` built from the crossing of the two axes: walk half of `τ_α`
/// forward along `A_α` and half of `τ_β` backward along `A_β`.
pub fn product_axis_construction(alpha: &Mobius, beta: &Mobius) -> Result<(Geodesic, f64)> {
    let (ta, tb) = (translation_length(alpha)?, translation_length(beta)?);
    let (aa, ab) = (axis(alpha)?, axis(beta)?);
    let p = match geodesic_intersection(&aa, &ab) {
        Ok(Some(c)) => c.point,
        Ok(None) | Err(GeometryError::SameCarrier) => return Err(GeometryError::AxesDisjoint),
        Err(e) => return Err(e),
    };
    let q = aa.walk(p, ta / 2.0);
    let r = ab.walk(p, -tb / 2.0);
    Ok((Geodesic::through(r, q)?, dist(q, r)))
}

/// A sub-arc of a geodesic, parametrized by arclength from `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub carrier: Geodesic,
    pub start: Point,
    pub length: f64,
    pub half_open: bool,
}

impl GeodesicSegment {
    pub fn new(carrier: Geodesic, start: Point, length: f64, half_open: bool) -> Self {
        GeodesicSegment {
            carrier,
            start,
            length,
            half_open,
        }
    }

    /// Segment between two points (closed).
    pub fn between(p: Point, q: Point) -> Result<Self> {
        Ok(GeodesicSegment {
            carrier: Geodesic::through(p, q)?,
            start: p,
            length: dist(p, q),
            half_open: false,
        })
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.carrier.walk(self.start, s)
    }

    pub fn end(&self) -> Point {
        self.point_at(self.length)
    }

    pub fn midpoint(&self) -> Point {
        self.point_at(self.length / 2.0)
    }

    /// Exact distance from `p` to the closed segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        let f = self.carrier.frame();
        let w = f.apply(p.to_complex());
        let h0 = f.apply(self.start.to_complex()).norm();
        let s = (w.norm() / h0).ln();
        if (0.0..=self.length).contains(&s) {
            (w.re.abs() / w.im).asinh()
        } else {
            dist(p, self.start).min(dist(p, self.end()))
        }
    }
}

/// Closure of `{ x ∈ A1 : d(x, A2) < C }`.
pub fn fellow_travel_segment(a1: &Geodesic, a2: &Geodesic, c: f64) -> Result<Option<GeodesicSegment>> {
    if let Some(x) = geodesic_intersection(a1, a2)? {
        let half = (c.sinh() / x.angle.sin()).asinh();
        let start = a1.walk(x.point, -half);
        return Ok(Some(GeodesicSegment::new(*a1, start, 2.0 * half, false)));
    }
    let f = a1.frame();
    let (s, t) = match (f.apply_boundary(a2.source), f.apply_boundary(a2.target)) {
        (BoundaryPoint::Finite(s), BoundaryPoint::Finite(t)) if s != 0.0 && t != 0.0 => (s, t),
        _ => return Err(GeometryError::Asymptotic),
    };
    // common perpendicular is the circle |z| = sqrt(st)
    let foot = Point::from_complex(f.inverse().apply(Complex64::new(0.0, (s * t).sqrt())));
    let gap = dist_point_geodesic(foot, a2);
    if gap >= c {
        return Ok(None);
    }
    let half = (c.sinh() / gap.sinh()).acosh();
    let start = a1.walk(foot, -half);
    Ok(Some(GeodesicSegment::new(*a1, start, 2.0 * half, false)))
}

fn angle_between(u: (f64, f64), v: (f64, f64)) -> f64 {
    let cross = u.0 * v.1 - u.1 * v.0;
    let dot = u.0 * v.0 + u.1 * v.1;
    cross.abs().atan2(dot)
}

/// δ-closeness of two oriented geodesics at given points: distance below
/// `δ` and the angles each makes with the connecting geodesic differ by less than `δ`.
pub fn delta_close(a1: &Geodesic, p1: Point, a2: &Geodesic, p2: Point, delta: f64) -> Result<bool> {
    for (g, p) in [(a1, p1), (a2, p2)] {
        let off = dist_point_geodesic(p, g);
        if off > ON_GEODESIC_EPS {
            return Err(GeometryError::PointOffGeodesic(off));
        }
    }
    let d = dist(p1, p2);
    if d >= delta {
        return Ok(false);
    }
    let (u1, u2) = (a1.tangent_at(p1), a2.tangent_at(p2));
    let diff = if d < 1e-12 {
        angle_between(u1, u2)
    } else {
        let link = Geodesic::through(p1, p2)?;
        (angle_between(u1, link.tangent_at(p1)) - angle_between(u2, link.tangent_at(p2))).abs()
    };
    Ok(diff < delta)
}

/// `K(θ)` bounding the quasi-geodesic constant of a zigzag with vertex angle `θ`.
pub fn quasi_constant(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(GeometryError::AngleOutOfRange(theta));
    }
    Ok(if theta < PI / 2.0 {
        1.0 / theta.sin() + 1.0 / theta.tan() + 1.0
    } else {
        1.0 / theta.sin() + 1.0
    })
}

/// Cayley map to the Poincaré disk.
pub fn to_disk(p: Point) -> Complex64 {
    let z = p.to_complex();
    (z - Complex64::i()) / (z + Complex64::i())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64, c: f64, d: f64) -> Mobius {
        Mobius::new(a, b, c, d).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_isometry(&m(1.0, 1.0, 0.0, 1.0)), IsometryClass::Parabolic);
        assert_eq!(classify_isometry(&m(2.0, 0.0, 0.0, 0.5)), IsometryClass::Hyperbolic);
        assert_eq!(classify_isometry(&m(0.0, 1.0, -1.0, 0.0)), IsometryClass::Elliptic);
        assert_eq!(classify_isometry(&m(1.0, 0.0, 0.0, 1.0)), IsometryClass::Identity);
        assert_eq!(classify_isometry(&m(-1.0, 0.0, 0.0, -1.0)), IsometryClass::Identity);
    }

    #[test]
    fn sign_canonical_form() {
        let x = m(-2.0, 0.0, 0.0, -0.5);
        assert_eq!(x, m(2.0, 0.0, 0.0, 0.5));
        let y = m(0.0, -1.0, 1.0, 0.0);
        assert!(y.c < 0.0 && y.b > 0.0);
        assert!(Mobius::new(1.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn translation_lengths() {
        close(
            translation_length(&m(2.0, 0.0, 0.0, 0.5)).unwrap(),
            2.0 * 2f64.ln(),
            1e-12,
        );
        close(
            translation_length(&m(2.0, 1.0, 1.0, 1.0)).unwrap(),
            1.9248473002384139,
            1e-12,
        );
        let g = m(1.0, 1.0, 0.0, 1.0);
        let conj = m(2.0, 0.0, 0.0, 0.5).conjugate_by(&g);
        close(translation_length(&conj).unwrap(), 2.0 * 2f64.ln(), 1e-12);
        assert!(matches!(
            translation_length(&g),
            Err(GeometryError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn axes_of_examples() {
        let a = axis(&m(2.0, 0.0, 0.0, 0.5)).unwrap();
        assert_eq!(a.source, BoundaryPoint::Finite(0.0));
        assert_eq!(a.target, BoundaryPoint::Infinity);
        let b = axis(&m(2.0, 1.0, 1.0, 1.0)).unwrap();
        let s5 = 5f64.sqrt();
        assert!(b.source.approx_eq(BoundaryPoint::Finite((1.0 - s5) / 2.0), 1e-14));
        assert!(b.target.approx_eq(BoundaryPoint::Finite((1.0 + s5) / 2.0), 1e-14));
        // inverse reverses the axis
        let bi = axis(&m(2.0, 1.0, 1.0, 1.0).inverse()).unwrap();
        assert!(bi.approx_eq(&b.reversed(), 1e-14));
        // c = 0, contracting case
        let c = axis(&m(0.5, 1.0, 0.0, 2.0)).unwrap();
        assert_eq!(c.source, BoundaryPoint::Infinity);
    }

    #[test]
    fn distances() {
        close(dist(Point::I, Point { x: 0.0, y: 2.0 }), 2f64.ln(), 1e-15);
        close(dist(Point::I, Point::I), 0.0, 0.0);
        close(dist(Point::I, Point { x: 1.0, y: 1.0 }), 1.5f64.acosh(), 1e-12);
        let axis = Geodesic::IMAGINARY_AXIS;
        close(dist_point_geodesic(Point { x: 0.0, y: 2.0 }, &axis), 0.0, 0.0);
        close(
            dist_point_geodesic(Point { x: 1.0, y: 1.0 }, &axis),
            1f64.asinh(),
            1e-15,
        );
    }

    #[test]
    fn crossing_examples() {
        let a1 = Geodesic::IMAGINARY_AXIS;
        let a2 = Geodesic::new(BoundaryPoint::Finite(-1.0), BoundaryPoint::Finite(1.0)).unwrap();
        let x = geodesic_intersection(&a1, &a2).unwrap().unwrap();
        close(x.point.x, 0.0, 1e-15);
        close(x.point.y, 1.0, 1e-15);
        close(x.angle, PI / 2.0, 1e-15);
        assert_eq!(x.sign, -1);
        assert_eq!(intersection_sign(&a1, &a2.reversed()).unwrap(), 1);
        assert_eq!(intersection_sign(&a2, &a1).unwrap(), 1);
        let a3 = Geodesic::new(BoundaryPoint::Finite(1.0), BoundaryPoint::Finite(3.0)).unwrap();
        assert!(geodesic_intersection(&a1, &a3).unwrap().is_none());
        assert_eq!(intersection_sign(&a1, &a3), Err(GeometryError::NoCrossing));
        assert_eq!(
            geodesic_intersection(&a1, &a1.reversed()),
            Err(GeometryError::SameCarrier)
        );
    }

    #[test]
    fn product_axis_worked_example() {
        let alpha = m(2.0, 0.0, 0.0, 0.5);
        let beta = m(1.25, 0.75, 0.75, 1.25);
        let prod = alpha * beta;
        assert!(prod.approx_eq(&m(2.5, 1.5, 0.375, 0.625), 1e-15));
        let (g, half) = product_axis_construction(&alpha, &beta).unwrap();
        close(half, 1.5625f64.acosh(), 1e-12);
        assert!(g.approx_eq(&axis(&prod).unwrap(), 1e-12));
        close(translation_length(&prod).unwrap(), 2.0 * 1.5625f64.acosh(), 1e-12);
    }

    #[test]
    fn through_points_orientation() {
        let p = Point { x: 0.0, y: 1.0 };
        let q = Point { x: 0.0, y: 3.0 };
        let g = Geodesic::through(p, q).unwrap();
        assert!(g.approx_eq(&Geodesic::IMAGINARY_AXIS, 1e-14));
        let g = Geodesic::through(Point { x: -0.6, y: 0.8 }, Point { x: 0.6, y: 0.8 }).unwrap();
        assert!(g.source.approx_eq(BoundaryPoint::Finite(-1.0), 1e-14));
        assert!(g.target.approx_eq(BoundaryPoint::Finite(1.0), 1e-14));
    }

    #[test]
    fn fellow_travel_right_angle() {
        let a1 = Geodesic::IMAGINARY_AXIS;
        let a2 = Geodesic::new(BoundaryPoint::Finite(-1.0), BoundaryPoint::Finite(1.0)).unwrap();
        let seg = fellow_travel_segment(&a1, &a2, 1.0).unwrap().unwrap();
        close(seg.length, 2.0, 1e-12);
        let mid = seg.midpoint();
        close(dist(mid, Point::I), 0.0, 1e-12);
        let far = Geodesic::new(BoundaryPoint::Finite(10.0), BoundaryPoint::Finite(11.0)).unwrap();
        assert!(fellow_travel_segment(&a1, &far, 1.0).unwrap().is_none());
        assert_eq!(fellow_travel_segment(&a1, &a1, 1.0), Err(GeometryError::SameCarrier));
    }

    #[test]
    fn delta_close_examples() {
        let a = Geodesic::IMAGINARY_AXIS;
        assert!(delta_close(&a, Point::I, &a, Point::I, 1e-6).unwrap());
        let delta: f64 = 0.3;
        let q = Point {
            x: 0.0,
            y: (2.0 * delta).exp(),
        };
        assert!(!delta_close(&a, Point::I, &a, q, delta).unwrap());
        // two geodesics through points δ/2 apart whose angles to the link differ by δ/2
        let p2 = a.walk(Point::I, delta / 2.0);
        let rot = Mobius::rotation_about_i(delta / 2.0);
        let shift = Mobius::dilation(delta / 2.0);
        let a2 = a.transformed(&(shift * rot));
        assert!(a2.contains(p2, 1e-12));
        assert!(delta_close(&a, Point::I, &a2, p2, delta).unwrap());
        assert!(matches!(
            delta_close(&a, Point { x: 1.0, y: 1.0 }, &a, Point::I, delta),
            Err(GeometryError::PointOffGeodesic(_))
        ));
    }

    #[test]
    fn quasi_constant_values() {
        close(quasi_constant(PI / 2.0).unwrap(), 2.0, 1e-15);
        close(quasi_constant(PI / 3.0).unwrap(), 2.732_050_807_568_877, 1e-12);
        close(quasi_constant(PI / 2.0 - 1e-12).unwrap(), 2.0, 1e-9);
        assert!(quasi_constant(1e-6).unwrap() > 1e5);
        assert_eq!(quasi_constant(0.0), Err(GeometryError::AngleOutOfRange(0.0)));
        assert!(quasi_constant(PI).is_err());
    }
}
