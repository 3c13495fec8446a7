//! Breadth-first enumeration of group elements whose basepoint images lie
//! near a compact region, and the crossing cosets built on top of it.
//!
//! Words are explored in length order. A prefix is expanded only while its
//! basepoint image stays within `max(radius, d(o, region)) + margin` of the
//! region; since the region is convex, the prefix points of a word landing in
//! the region track the geodesic from `o`, and the margin absorbs how far
//! they wander from it. Depth is capped from a fitted growth estimate and the
//! total work by an element budget.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::hyperbolic::{
    axis, dist, geodesic_intersection, translation_length, Geodesic, GeodesicSegment, GeometryError, Mobius, Point,
};
use crate::surface::{ConjClass, SurfaceError, SurfaceGroup};
use crate::word::Word;

/// Environment variable overriding the element budget.
pub const BUDGET_ENV: &str = "GOLDMAN_ELEMENT_BUDGET";

const HASH_CELL: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumerationError {
    #[error("enumeration would exceed the element budget of {cap}")]
    RadiusTooLargeForBudget { cap: usize },
    #[error("word {word} is not hyperbolic")]
    NotHyperbolic { word: String },
    #[error("classes share the primitive root {root}")]
    CommonPrimitiveRoot { root: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallElement {
    pub word: Word,
    pub matrix: Mobius,
    /// `d(g·o, o)` for the basepoint `o`.
    pub displacement: f64,
}

/// Linear lower bound `d(g·o, o) >= c1·|g| - c2` fitted on short words.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub c1: f64,
    pub c2: f64,
    pub sample_length: usize,
    /// The factor `c1` was divided by after fitting.
    pub safety_factor: f64,
}

impl GrowthEstimate {
    /// Longest word that can reach displacement `d` under the estimate.
    pub fn max_length(&self, d: f64) -> usize {
        ((d + self.c2) / self.c1).floor().max(0.0) as usize
    }
}

/// Default number of letters sampled by [`estimate_growth`].
pub fn default_sample_length(g: &SurfaceGroup) -> usize {
    if g.is_closed() {
        5
    } else {
        8
    }
}

pub fn estimate_growth(g: &SurfaceGroup, sample_length: usize) -> GrowthEstimate {
    let sample_length = sample_length.max(3);
    let o = g.basepoint;
    let mut ratio = f64::INFINITY;
    for n in 1..=sample_length {
        for w in g.reduced_words(n) {
            let d = dist(g.evaluate(&w).apply_point(o), o);
            ratio = ratio.min(d / n as f64);
        }
    }
    let safety_factor = 2.0;
    GrowthEstimate {
        c1: ratio / safety_factor,
        c2: 0.0,
        sample_length,
        safety_factor,
    }
}

fn cached_growth(g: &SurfaceGroup) -> GrowthEstimate {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<String, GrowthEstimate>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = format!(
        "{}:{:?}",
        g.name,
        (0..g.rank()).map(|i| g.generator(i).entries()).collect::<Vec<_>>()
    );
    if let Some(e) = cache.lock().expect("growth cache poisoned").get(&key) {
        return *e;
    }
    let e = estimate_growth(g, default_sample_length(g));
    cache.lock().expect("growth cache poisoned").insert(key, e);
    e
}

pub fn element_budget(g: &SurfaceGroup) -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(g.tolerances.element_budget)
}

/// Largest basepoint displacement of a single generator.
pub fn max_generator_displacement(g: &SurfaceGroup) -> f64 {
    let o = g.basepoint;
    g.letters()
        .map(|l| dist(g.letter_matrix(l).apply_point(o), o))
        .fold(0.0, f64::max)
}

/// Search knobs shared by the ball and tube enumerations.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub margin: f64,
    pub budget: usize,
    /// Extra letters allowed beyond the growth-estimate depth cap.
    pub depth_cap: Option<usize>,
}

impl SearchOptions {
    pub fn for_group(g: &SurfaceGroup) -> Self {
        SearchOptions {
            margin: 2.0 * max_generator_displacement(g),
            budget: element_budget(g),
            depth_cap: None,
        }
    }
}

/// Buckets basepoint images so duplicate elements of a closed group can be
/// found without comparing every pair.
#[derive(Default)]
struct OrbitIndex {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl OrbitIndex {
    fn key(p: Point) -> (i64, i64) {
        (
            (p.y.ln() / HASH_CELL).round() as i64,
            (p.x / (p.y * HASH_CELL)).round() as i64,
        )
    }

    fn neighbours(&self, p: Point) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = Self::key(p);
        (-1..=1)
            .flat_map(move |i| (-1..=1).map(move |j| (a + i, b + j)))
            .filter_map(|k| self.cells.get(&k))
            .flatten()
            .copied()
    }

    fn insert(&mut self, p: Point, idx: usize) {
        self.cells.entry(Self::key(p)).or_default().push(idx);
    }
}

/// Enumerates elements `g` with `distance(g·o) <= radius`.
///
/// `reach` must bound `d(o, x)` over the region, and `base` is `distance(o)`.
fn enumerate_region<F>(
    g: &SurfaceGroup,
    distance: F,
    radius: f64,
    reach: f64,
    opts: SearchOptions,
) -> Result<Vec<BallElement>, EnumerationError>
where
    F: Fn(Point) -> f64,
{
    let o = g.basepoint;
    let growth = cached_growth(g);
    let mut max_len = growth.max_length(radius + reach);
    if let Some(cap) = opts.depth_cap {
        max_len = max_len.min(cap);
    }
    let expand_limit = radius.max(distance(o)) + opts.margin;

    let mut out = Vec::new();
    // closed groups: every visited element, for duplicate detection
    let mut visited: Vec<(Word, Point)> = Vec::new();
    let mut index = OrbitIndex::default();
    let mut frontier: Vec<(Word, Mobius)> = vec![(Word::empty(), Mobius::IDENTITY)];
    let mut work = 0usize;
    let closed = g.is_closed();
    if closed {
        visited.push((Word::empty(), o));
        index.insert(o, 0);
    }
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (w, m) in frontier {
            let p = m.apply_point(o);
            let d = distance(p);
            if d <= radius {
                out.push(BallElement {
                    displacement: dist(p, o),
                    word: w.clone(),
                    matrix: m,
                });
            }
            if depth == max_len || d > expand_limit {
                continue;
            }
            for l in g.letters() {
                if w.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                work += 1;
                if work > opts.budget {
                    return Err(EnumerationError::RadiusTooLargeForBudget { cap: opts.budget });
                }
                let mut child = w.clone();
                child.0.push(l);
                let cm = m.compose(&g.letter_matrix(l));
                if closed {
                    let child = g.reduce(&child);
                    if child.len() != depth + 1 {
                        continue;
                    }
                    let cp = cm.apply_point(o);
                    let dup = index.neighbours(cp).any(|k| {
                        let (ref vw, vp) = visited[k];
                        dist(vp, cp) < 1e-6 && g.is_identity(&vw.inverse().concat(&child))
                    });
                    if dup {
                        continue;
                    }
                    index.insert(cp, visited.len());
                    visited.push((child.clone(), cp));
                    next.push((child, cm));
                } else {
                    next.push((child, cm));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out.sort_by(|a, b| a.word.shortlex_cmp(&b.word));
    Ok(out)
}

/// All elements with `d(g·o, center) <= radius`, sorted by word length then lexicographically.
pub fn enumerate_ball(g: &SurfaceGroup, center: Point, radius: f64) -> Result<Vec<BallElement>, EnumerationError> {
    enumerate_ball_with(g, center, radius, SearchOptions::for_group(g))
}

pub fn enumerate_ball_with(
    g: &SurfaceGroup,
    center: Point,
    radius: f64,
    opts: SearchOptions,
) -> Result<Vec<BallElement>, EnumerationError> {
    let reach = dist(g.basepoint, center);
    enumerate_region(g, |p| dist(p, center), radius, reach, opts)
}

/// All elements whose basepoint image lies within `radius` of a segment.
pub fn enumerate_tube(
    g: &SurfaceGroup,
    segment: &GeodesicSegment,
    radius: f64,
    opts: SearchOptions,
) -> Result<Vec<BallElement>, EnumerationError> {
    let o = g.basepoint;
    let reach = dist(o, segment.start).max(dist(o, segment.end()));
    enumerate_region(g, |p| segment.distance_to(p), radius, reach, opts)
}

/// One crossing of a translate `g·A_β` with the fundamental segment of `A_α`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionDatum {
    pub coset_rep: Word,
    #[serde(skip)]
    pub translate: Geodesic,
    #[serde(skip)]
    pub point: Point,
    pub arclength: f64,
    pub angle: f64,
    pub sign: i8,
    #[serde(serialize_with = "serialize_class")]
    pub term: ConjClass,
}

fn serialize_class<S: serde::Serializer>(c: &ConjClass, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

/// Geometry of a hyperbolic class: canonical word, matrix, axis, length.
#[derive(Debug, Clone)]
pub struct AxisData {
    pub class: ConjClass,
    pub word: Word,
    pub matrix: Mobius,
    pub axis: Geodesic,
    pub tau: f64,
}

impl AxisData {
    pub fn of_word(g: &SurfaceGroup, word: &Word) -> Result<Self, EnumerationError> {
        let matrix = g.evaluate(word);
        let tau =
            translation_length(&matrix).map_err(|_| EnumerationError::NotHyperbolic { word: word.to_string() })?;
        let class = g.canonical_conjugacy(word)?;
        Ok(AxisData {
            class,
            word: word.clone(),
            axis: axis(&matrix)?,
            matrix,
            tau,
        })
    }
}

/// Crossing data between the primitive roots of two classes.
#[derive(Debug, Clone)]
pub struct RootCrossings {
    pub rho: AxisData,
    pub sigma: AxisData,
    /// Start of the fundamental segment on `A_ρ`.
    pub start: Point,
    /// Coset representatives `g` with `g·A_σ` crossing the segment, sorted by arclength.
    pub data: Vec<IntersectionDatum>,
}

/// Start of the fundamental segment on an axis, placed so the segment is
/// centered on the projection of the basepoint. Points far out along an
/// axis crowd the boundary of the chart and lose precision.
fn segment_start(g: &SurfaceGroup, a: &AxisData) -> Point {
    a.axis.walk(a.axis.project(g.basepoint), -a.tau / 2.0)
}

/// Exponent `j` with `h = σ^j` when `h` preserves `A_σ`, read from its translation along it.
fn axis_shift(sigma: &AxisData, h: &Mobius) -> i64 {
    let p = sigma.axis.project(Point::I);
    (sigma.axis.offset(p, h.apply_point(p)) / sigma.tau).round() as i64
}

/// Cosets `g⟨σ⟩` whose translate `g·A_σ` crosses the half-open segment of
/// length `τ_ρ` on `A_ρ`, for primitive cyclic words `ρ`, `σ` in distinct classes.
/// The term attached to each datum is `⟨ρ g σ g⁻¹⟩`.
pub fn root_crossings(g: &SurfaceGroup, rho: &Word, sigma: &Word) -> Result<RootCrossings, EnumerationError> {
    root_crossings_with(g, rho, sigma, g.tolerances.slack, SearchOptions::for_group(g))
}

/// Crossings closer than this to either end of the fundamental segment are
/// normalized to its start before deduplication.
const WRAP_TOL: f64 = 1e-6;

/// Crossings with `sin θ` below this are checked for a shared carrier by words.
const TANGENCY_CHECK: f64 = 1e-6;

/// Endpoint separation below which two translates are compared by words.
const DEDUP_FILTER: f64 = 1e-4;

pub fn root_crossings_with(
    g: &SurfaceGroup,
    rho: &Word,
    sigma: &Word,
    slack: f64,
    opts: SearchOptions,
) -> Result<RootCrossings, EnumerationError> {
    let r = AxisData::of_word(g, rho)?;
    let s = AxisData::of_word(g, sigma)?;
    // enumerate along whichever segment is cheaper: the tube radius grows
    // with the other translation length
    let swap = s.tau > r.tau;
    let (seg_ax, other) = if swap { (&s, &r) } else { (&r, &s) };
    let start = segment_start(g, seg_ax);
    let segment = GeodesicSegment::new(seg_ax.axis, start, seg_ax.tau, true);
    let radius = other.tau / 2.0 + crate::hyperbolic::dist_point_geodesic(g.basepoint, &other.axis) + slack;
    let elements = enumerate_tube(g, &segment, radius, opts)?;

    let r_start = segment_start(g, &r);
    let tol = 1e-9;
    let mut data: Vec<IntersectionDatum> = Vec::new();
    for e in elements {
        let translate = other.axis.transformed(&e.matrix);
        let x = match geodesic_intersection(&seg_ax.axis, &translate) {
            Ok(Some(x)) => x,
            _ => continue,
        };
        let t = seg_ax.axis.offset(start, x.point);
        if !(t > -WRAP_TOL && t < seg_ax.tau + WRAP_TOL) {
            continue;
        }
        // coset representative for the ρ-segment
        let (mut rep_word, mut rep_matrix) = if swap {
            let inv = e.word.inverse();
            let im = e.matrix.inverse();
            let y = im.apply_point(x.point);
            let k = -(r.axis.offset(r_start, y) / r.tau + tol).floor() as i64;
            let w = g.reduce(&r.word.power(k).concat(&inv));
            // products of far-away matrices lose precision; evaluate the word afresh
            let m = g.evaluate(&w);
            (w, m)
        } else {
            (e.word.clone(), e.matrix)
        };
        let mut translate = s.axis.transformed(&rep_matrix);
        let mut crossing = match geodesic_intersection(&r.axis, &translate) {
            Ok(Some(c)) => c,
            Ok(None) | Err(GeometryError::SameCarrier) => continue,
            Err(e) => return Err(e.into()),
        };
        // crossings at the very end of the segment are the start ones moved by ρ
        let mut arclength = r.axis.offset(r_start, crossing.point);
        let k = ((arclength + WRAP_TOL) / r.tau).floor() as i64;
        if k != 0 {
            rep_word = g.reduce(&r.word.power(-k).concat(&rep_word));
            rep_matrix = g.evaluate(&rep_word);
            translate = s.axis.transformed(&rep_matrix);
            crossing = match geodesic_intersection(&r.axis, &translate) {
                Ok(Some(c)) => c,
                Ok(None) | Err(GeometryError::SameCarrier) => continue,
                Err(e) => return Err(e.into()),
            };
            arclength = r.axis.offset(r_start, crossing.point);
        }
        let arclength = arclength.clamp(0.0, r.tau);
        // a nearly tangent "crossing" may be a translate of A_ρ itself seen through
        // rounding; commuting hyperbolic elements share their axis
        if crossing.angle.sin() < TANGENCY_CHECK {
            let conj = rep_word.concat(&s.word).concat(&rep_word.inverse());
            if g.is_identity(&r.word.concat(&conj).concat(&r.word.inverse()).concat(&conj.inverse())) {
                continue;
            }
        }
        // same coset up to a shift by ρ: a loose geometric filter, then an exact word check
        let duplicate = data.iter().any(|d| {
            (-1..=1).any(|k| {
                let shifted = d.translate.transformed(&r.matrix.pow(k));
                shifted.approx_eq(&translate, DEDUP_FILTER) && {
                    let base = g.reduce(&r.word.power(k).concat(&d.coset_rep));
                    let h = g.evaluate(&base).inverse().compose(&rep_matrix);
                    let j = axis_shift(&s, &h);
                    g.is_identity(&base.inverse().concat(&rep_word).concat(&s.word.power(-j)))
                }
            })
        });
        if duplicate {
            continue;
        }
        let term_word = r.word.concat(&rep_word).concat(&s.word).concat(&rep_word.inverse());
        data.push(IntersectionDatum {
            term: g.canonical_conjugacy(&term_word)?,
            coset_rep: rep_word,
            translate,
            point: crossing.point,
            arclength,
            angle: crossing.angle,
            sign: crossing.sign,
        });
    }
    data.sort_by(|a, b| {
        a.arclength
            .total_cmp(&b.arclength)
            .then_with(|| a.coset_rep.shortlex_cmp(&b.coset_rep))
    });
    Ok(RootCrossings {
        rho: r,
        sigma: s,
        start: r_start,
        data,
    })
}

/// Crossing cosets `J(α, β)` for arbitrary words: translates `g·A_β`
/// crossing the half-open segment of length `τ_α` on `A_α`.
///
/// Built from the primitive roots `α = ρ^p`, `β = σ^q`: every coset of the
/// roots expands to the `p·q` representatives `ρ^k g σ^j`.
pub fn crossing_cosets(
    g: &SurfaceGroup,
    alpha: &Word,
    beta: &Word,
) -> Result<Vec<IntersectionDatum>, EnumerationError> {
    let a = g.canonical_conjugacy(alpha)?;
    let b = g.canonical_conjugacy(beta)?;
    for (c, w) in [(&a, alpha), (&b, beta)] {
        if g.is_inessential(c) {
            return Err(EnumerationError::NotHyperbolic { word: w.to_string() });
        }
    }
    if a.primitive_root == b.primitive_root
        || g.canonical_conjugacy(&b.primitive_root.inverse())?.word == a.primitive_root
    {
        return Err(EnumerationError::CommonPrimitiveRoot {
            root: a.primitive_root.to_string(),
        });
    }
    let roots = root_crossings(g, &a.primitive_root, &b.primitive_root)?;
    expand_crossings(g, &a, &b, &roots)
}

pub fn expand_crossings(
    g: &SurfaceGroup,
    a: &ConjClass,
    b: &ConjClass,
    roots: &RootCrossings,
) -> Result<Vec<IntersectionDatum>, EnumerationError> {
    let (p, q) = (a.power as i64, b.power as i64);
    let mut out = Vec::with_capacity(roots.data.len() * (p * q) as usize);
    for d in &roots.data {
        for k in 0..p {
            for j in 0..q {
                let rep = g.reduce(
                    &roots
                        .rho
                        .word
                        .power(k)
                        .concat(&d.coset_rep)
                        .concat(&roots.sigma.word.power(j)),
                );
                let m = g.evaluate(&rep);
                let term_word = a.word.concat(&rep).concat(&b.word).concat(&rep.inverse());
                out.push(IntersectionDatum {
                    term: g.canonical_conjugacy(&term_word)?,
                    translate: roots.sigma.axis.transformed(&m),
                    point: roots.rho.matrix.pow(k).apply_point(d.point),
                    arclength: d.arclength + k as f64 * roots.rho.tau,
                    angle: d.angle,
                    sign: d.sign,
                    coset_rep: rep,
                });
            }
        }
    }
    out.sort_by(|x, y| {
        x.arclength
            .total_cmp(&y.arclength)
            .then_with(|| x.coset_rep.shortlex_cmp(&y.coset_rep))
    });
    Ok(out)
}
