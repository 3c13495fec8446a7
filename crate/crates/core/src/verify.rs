//! Seeded invariant suites run by `goldman verify`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bracket::{BracketEngine, FormalSum};
use crate::cayley::EnumerationError;
use crate::hyperbolic::{axis, product_axis_construction, translation_length, Geodesic, Mobius};
use crate::lift::{constants_for_pair, noncancellation_experiment, LiftError, Sampling};
use crate::surface::{SurfaceGroup, SurfaceKind};
use crate::word::{Letter, Word};

pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axes,
    Skew,
    Jacobi,
    Noncancel,
    Peripheral,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Axes,
        Suite::Skew,
        Suite::Jacobi,
        Suite::Noncancel,
        Suite::Peripheral,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Axes => "axes",
            Suite::Skew => "skew",
            Suite::Jacobi => "jacobi",
            Suite::Noncancel => "noncancel",
            Suite::Peripheral => "peripheral",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub pass: bool,
    /// A few failing cases, for the log.
    pub examples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            cases: 0,
            failures: 0,
            worst_residual: 0.0,
            pass: true,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if residual.is_nan() {
            self.worst_residual = f64::NAN;
        } else if !self.worst_residual.is_nan() {
            self.worst_residual = self.worst_residual.max(residual);
        }
        if !ok {
            self.failures += 1;
            self.pass = false;
            if self.examples.len() < 5 {
                self.examples.push(describe());
            }
        }
    }
}

/// Uniformly random freely reduced word with length in `1..=max_len`;
/// Dehn-reduced on closed surfaces.
pub fn random_word<R: Rng>(group: &SurfaceGroup, rng: &mut R, max_len: usize) -> Word {
    let letters: Vec<Letter> = group.letters().collect();
    let len = rng.gen_range(1..=max_len.max(1));
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    while v.len() < len {
        let l = letters[rng.gen_range(0..letters.len())];
        if v.last() != Some(&l.inverse()) {
            v.push(l);
        }
    }
    group.reduce(&Word(v))
}

/// A random hyperbolic element with axis `source → target` and translation length `tau`.
pub fn hyperbolic_with_axis(source: f64, target: f64, tau: f64) -> Mobius {
    // sends 0 to `source` and ∞ to `target`
    let t = if target > source {
        Mobius::new(target, source, 1.0, 1.0)
    } else {
        Mobius::new(-target, source, -1.0, 1.0)
    }
    .expect("distinct endpoints");
    Mobius::dilation(tau).conjugate_by(&t)
}

/// Two hyperbolic elements whose axes cross, with random orientations.
pub fn random_crossing_pair<R: Rng>(rng: &mut R) -> (Mobius, Mobius) {
    let mut xs: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
    xs.sort_by(f64::total_cmp);
    let (mut p, mut q) = ((xs[0], xs[2]), (xs[1], xs[3]));
    if rng.gen_bool(0.5) {
        p = (p.1, p.0);
    }
    if rng.gen_bool(0.5) {
        q = (q.1, q.0);
    }
    let ta = rng.gen_range(0.2..4.0);
    let tb = rng.gen_range(0.2..4.0);
    (hyperbolic_with_axis(p.0, p.1, ta), hyperbolic_with_axis(q.0, q.1, tb))
}

/// Largest chordal endpoint separation between two oriented geodesics.
pub fn endpoint_residual(a: &Geodesic, b: &Geodesic) -> f64 {
    a.source.separation(b.source).max(a.target.separation(b.target))
}

/// Compares the crossing construction of `A_{αβ}` with the axis computed from the product matrix.
pub fn run_axes(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(Suite::Axes);
    let mut done = 0;
    while done < samples {
        let (a, b) = random_crossing_pair(&mut rng);
        let ab = a.compose(&b);
        let (Ok(built), Ok(direct), Ok(tau)) = (product_axis_construction(&a, &b), axis(&ab), translation_length(&ab))
        else {
            // only near-tangent draws fail here; they are not crossing pairs in any useful sense
            continue;
        };
        done += 1;
        let residual = endpoint_residual(&built.0, &direct).max((built.1 - tau / 2.0).abs());
        rep.record(residual, residual <= AXIS_TOLERANCE, || {
            format!("{a} {b}: residual {residual:e}")
        });
    }
    rep
}

fn pair_list<R: Rng>(group: &SurfaceGroup, rng: &mut R, samples: usize, max_len: usize) -> Vec<(Word, Word)> {
    (0..samples)
        .map(|_| (random_word(group, rng, max_len), random_word(group, rng, max_len)))
        .collect()
}

pub fn run_skew(
    engine: &BracketEngine,
    samples: usize,
    seed: u64,
    max_len: usize,
) -> Result<SuiteReport, EnumerationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(Suite::Skew);
    for (a, b) in pair_list(&engine.group, &mut rng, samples, max_len) {
        let mut s = engine.bracket(&a, &b)?;
        s.add(&engine.bracket(&b, &a)?);
        let residual = s.total_multiplicity() as f64;
        rep.record(residual, s.is_zero(), || format!("[{a},{b}] + [{b},{a}] = {s}"));
    }
    Ok(rep)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` for three classes.
pub fn jacobi_residual(engine: &BracketEngine, x: &Word, y: &Word, z: &Word) -> Result<FormalSum, EnumerationError> {
    let single = |w: &Word| -> Result<FormalSum, EnumerationError> { Ok(FormalSum::single(engine.class(w)?, 1)) };
    let (x, y, z) = (single(x)?, single(y)?, single(z)?);
    let mut total = FormalSum::zero();
    for (p, q, r) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
        let inner = engine.bracket_sums(q, r)?;
        total.add(&engine.bracket_sums(p, &inner)?);
    }
    Ok(total)
}

pub fn run_jacobi(
    engine: &BracketEngine,
    samples: usize,
    seed: u64,
    max_len: usize,
) -> Result<SuiteReport, EnumerationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(Suite::Jacobi);
    for _ in 0..samples {
        let g = &engine.group;
        let (x, y, z) = (
            random_word(g, &mut rng, max_len),
            random_word(g, &mut rng, max_len),
            random_word(g, &mut rng, max_len),
        );
        let s = jacobi_residual(engine, &x, &y, &z)?;
        let residual = s.total_multiplicity() as f64;
        rep.record(residual, s.is_zero(), || format!("jacobi({x},{y},{z}) = {s}"));
    }
    Ok(rep)
}

/// Every peripheral class brackets to zero against random classes.
pub fn run_peripheral(
    engine: &BracketEngine,
    samples: usize,
    seed: u64,
    max_len: usize,
) -> Result<SuiteReport, EnumerationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(Suite::Peripheral);
    let g = &engine.group;
    for p in &g.peripherals {
        let pc = engine.class(p)?;
        let flagged = g.is_peripheral(&pc)?;
        rep.record(0.0, flagged, || format!("{pc} is not recognized as peripheral"));
        for _ in 0..samples {
            let w = random_word(g, &mut rng, max_len);
            let s = engine.bracket(p, &w)?;
            rep.record(s.total_multiplicity() as f64, s.is_zero(), || {
                format!("[{pc},<{w}>] = {s}")
            });
        }
    }
    Ok(rep)
}

/// Power brackets of designated simple classes against the other designated
/// classes, at `m = 1` and just above the computed threshold. At most
/// `samples` pairs with nonzero intersection are examined.
pub fn run_noncancel(engine: &BracketEngine, samples: usize) -> Result<SuiteReport, LiftError> {
    let mut rep = SuiteReport::new(Suite::Noncancel);
    let g = &engine.group;
    let mut pairs = 0;
    'outer: for a in &g.designated_simple {
        for b in &g.designated_simple {
            if pairs >= samples {
                break 'outer;
            }
            let i = engine.intersection_number(a, b)?;
            if i == 0 {
                // disjoint pair: the bracket must vanish
                let rows = noncancellation_experiment(engine, a, b, &[1], None, Sampling::default())?;
                let ok = rows.iter().all(|r| r.distinct_classes == 0);
                rep.record(0.0, ok, || format!("[{a},{b}] should vanish"));
                continue;
            }
            pairs += 1;
            let bundle = constants_for_pair(engine, a, b)?;
            let m0 = bundle.m0 as u32;
            let rows =
                noncancellation_experiment(engine, a, b, &[1, m0 + 1, m0 + 2], Some(&bundle), Sampling::default())?;
            for r in rows {
                let ok = r.pass.unwrap_or(true)
                    && r.quasi_ok
                    && r.window_ok.unwrap_or(true)
                    && r.direct_agrees.unwrap_or(true);
                rep.record(0.0, ok, || {
                    format!(
                        "({a}^{}, {b}): {} quasi={} window={:?}",
                        r.m, r.bracket, r.quasi_ok, r.window_ok
                    )
                });
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Default word lengths for the algebraic suites.
pub const SKEW_MAX_LEN: usize = 6;
pub const JACOBI_MAX_LEN: usize = 4;
pub const PERIPHERAL_MAX_LEN: usize = 5;
/// Shorter words on closed surfaces, where tubes around long axes are large.
pub const CLOSED_SKEW_MAX_LEN: usize = 3;
pub const CLOSED_JACOBI_MAX_LEN: usize = 2;

pub fn run_suite(engine: &BracketEngine, suite: Suite, samples: usize, seed: u64) -> Result<SuiteReport, VerifyError> {
    let closed = engine.group.kind == SurfaceKind::Closed;
    let (skew_len, jacobi_len) = if closed {
        (CLOSED_SKEW_MAX_LEN, CLOSED_JACOBI_MAX_LEN)
    } else {
        (SKEW_MAX_LEN, JACOBI_MAX_LEN)
    };
    Ok(match suite {
        Suite::Axes => run_axes(samples, seed),
        Suite::Skew => run_skew(engine, samples, seed, skew_len)?,
        Suite::Jacobi => run_jacobi(engine, samples, seed, jacobi_len)?,
        Suite::Peripheral => run_peripheral(engine, samples, seed, PERIPHERAL_MAX_LEN)?,
        Suite::Noncancel => run_noncancel(engine, samples)?,
    })
}
