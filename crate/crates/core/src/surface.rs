//! Surface groups: presentation, matrix representation, conjugacy classes.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dehn::{DehnError, DehnReducer};
use crate::hyperbolic::{classify_with, IsometryClass, Mobius, Point};
use crate::word::{Letter, Word, WordError};

const PUNCTURED_TORUS: &str = include_str!("../presets/punctured-torus.json");
const PAIR_OF_PANTS: &str = include_str!("../presets/pair-of-pants.json");
const GENUS_TWO: &str = include_str!("../presets/genus-2.json");

pub const PRESET_NAMES: [&str; 3] = ["punctured-torus", "pair-of-pants", "genus-2"];

/// Word length of the elliptic scan performed at load time.
const LOAD_SCAN_LENGTH: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("relator {relator} does not evaluate to the identity (residual {residual:e})")]
    RelatorNotIdentity { relator: String, residual: f64 },
    #[error("elliptic element {word} found; the group is not discrete and torsion-free")]
    NonDiscreteSuspected { word: String },
    #[error("peripheral word {word} should be {expected:?}, found {found:?}")]
    PeripheralMismatch {
        word: String,
        expected: IsometryClass,
        found: IsometryClass,
    },
    #[error("isometric circles of the generators overlap; ping-pong check failed")]
    NotSchottky,
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Dehn(#[from] DehnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Closed,
    WithBoundary,
    Punctured,
}

/// Numeric tolerances and engine knobs, overridable from the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub classify: f64,
    pub relator: f64,
    /// Endpoint tolerance when matching translate geodesics.
    pub endpoint: f64,
    /// Extra radius added to crossing enumeration.
    pub slack: f64,
    pub element_budget: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            classify: 1e-9,
            relator: 1e-9,
            endpoint: 1e-7,
            slack: 2.0,
            element_budget: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default)]
    pub matrix: Option<[f64; 4]>,
}

/// On-disk surface description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub name: String,
    pub kind: SurfaceKind,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub peripherals: Vec<String>,
    #[serde(default)]
    pub designated_simple: Vec<String>,
    #[serde(default = "default_basepoint")]
    pub basepoint: [f64; 2],
    #[serde(default)]
    pub epsilons: Tolerances,
    /// Known length of the shortest closed geodesic, if any.
    #[serde(default)]
    pub systole: Option<f64>,
    /// Builds generator matrices instead of reading them; only
    /// `"regular_octagon"` is recognised.
    #[serde(default)]
    pub construction: Option<String>,
}

fn default_basepoint() -> [f64; 2] {
    [0.0, 1.0]
}

/// A free homotopy class, named by its canonical cyclic word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjClass {
    pub word: Word,
    pub primitive_root: Word,
    pub power: usize,
}

impl ConjClass {
    pub fn trivial() -> Self {
        ConjClass {
            word: Word::empty(),
            primitive_root: Word::empty(),
            power: 1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for ConjClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.shortlex_cmp(&other.word)
    }
}

impl PartialOrd for ConjClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.word)
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceGroup {
    pub name: String,
    pub kind: SurfaceKind,
    pub generator_names: Vec<String>,
    /// Indexed by letter code: generator, inverse, next generator, ...
    letter_matrices: Vec<Mobius>,
    pub relators: Vec<Word>,
    pub peripherals: Vec<Word>,
    pub basepoint: Point,
    pub designated_simple: Vec<Word>,
    pub tolerances: Tolerances,
    pub systole: Option<f64>,
    dehn: Option<DehnReducer>,
}

/// Side pairings of the regular octagon with interior angles `π/4`, glued
/// by the word `abABcdCD`, mapped to the upper half-plane.
pub fn regular_octagon_generators() -> [Mobius; 4] {
    // inradius of the octagon
    let r = (1.0 + 2f64.sqrt()).acosh();
    let translate = [
        Complex64::new(r.cosh(), 0.0),
        Complex64::new(r.sinh(), 0.0),
        Complex64::new(r.sinh(), 0.0),
        Complex64::new(r.cosh(), 0.0),
    ];
    let rot = |phi: f64| {
        [
            Complex64::from_polar(1.0, phi / 2.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, -phi / 2.0),
        ]
    };
    let mul = |x: [Complex64; 4], y: [Complex64; 4]| {
        [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ]
    };
    // carries side `from` onto side `to`, sides numbered counterclockwise
    let pairing = |from: f64, to: f64| mul(mul(rot(to * PI / 4.0), translate), rot(-from * PI / 4.0 - PI));
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // disk -> half-plane conjugation by the Cayley matrix [[1, -i], [1, i]]
    let cayley = [one, -i, one, i];
    let cayley_inv = [i / (2.0 * i), i / (2.0 * i), -one / (2.0 * i), one / (2.0 * i)];
    let to_half_plane = |m: [Complex64; 4]| {
        let h = mul(mul(cayley_inv, m), cayley);
        Mobius::new(h[0].re, h[1].re, h[2].re, h[3].re).expect("octagon pairing has unit determinant")
    };
    [
        to_half_plane(pairing(2.0, 0.0)),
        to_half_plane(pairing(1.0, 3.0)),
        to_half_plane(pairing(6.0, 4.0)),
        to_half_plane(pairing(5.0, 7.0)),
    ]
}

impl SurfaceGroup {
    pub fn preset(name: &str) -> Result<Self, SurfaceError> {
        let text = match name {
            "punctured-torus" => PUNCTURED_TORUS,
            "pair-of-pants" => PAIR_OF_PANTS,
            "genus-2" => GENUS_TWO,
            other => return Err(SurfaceError::UnknownPreset(other.to_string())),
        };
        load_surface(text)
    }

    /// A preset name or a path to a JSON config.
    pub fn open(name_or_path: &str) -> Result<Self, SurfaceError> {
        if PRESET_NAMES.contains(&name_or_path) {
            return Self::preset(name_or_path);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(SurfaceError::UnknownPreset(name_or_path.to_string()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| SurfaceError::Parse(format!("{name_or_path}: {e}")))?;
        load_surface(&text)
    }

    pub fn rank(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator(&self, index: usize) -> Mobius {
        self.letter_matrices[2 * index]
    }

    pub fn letter_matrix(&self, l: Letter) -> Mobius {
        self.letter_matrices[l.code()]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank()).map(Letter::from_code)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, WordError> {
        Word::parse(s, self.rank())
    }

    pub fn evaluate(&self, w: &Word) -> Mobius {
        let mut acc = Mobius::IDENTITY;
        for (k, &l) in w.letters().iter().enumerate() {
            acc = acc.compose(&self.letter_matrix(l));
            // keep drift in check on long words
            if k % 16 == 15 {
                acc = acc.normalized();
            }
        }
        acc
    }

    pub fn classify(&self, m: &Mobius) -> IsometryClass {
        classify_with(m, self.tolerances.classify)
    }

    pub fn is_closed(&self) -> bool {
        self.dehn.is_some()
    }

    /// Exact word problem.
    pub fn is_identity(&self, w: &Word) -> bool {
        match &self.dehn {
            Some(d) => d.is_identity(w),
            None => w.free_reduce().is_empty(),
        }
    }

    /// Freely reduced, and Dehn-reduced for closed groups.
    pub fn reduce(&self, w: &Word) -> Word {
        match &self.dehn {
            Some(d) => d.reduce(w),
            None => w.free_reduce(),
        }
    }

    pub fn canonical_conjugacy(&self, w: &Word) -> Result<ConjClass, SurfaceError> {
        let (word, power) = match &self.dehn {
            Some(d) => d.canonical(w)?,
            None => {
                let c = w.free_cyclic_reduce().least_rotation();
                let p = c.root_and_power().1;
                (c, p)
            }
        };
        if word.is_empty() {
            return Ok(ConjClass::trivial());
        }
        let primitive_root = Word(word.letters()[..word.len() / power].to_vec());
        Ok(ConjClass {
            word,
            primitive_root,
            power,
        })
    }

    pub fn class_of_root(&self, c: &ConjClass) -> ConjClass {
        if c.is_trivial() {
            return ConjClass::trivial();
        }
        ConjClass {
            word: c.primitive_root.clone(),
            primitive_root: c.primitive_root.clone(),
            power: 1,
        }
    }

    /// Whether `c` is a power of a boundary or puncture class.
    pub fn is_peripheral(&self, c: &ConjClass) -> Result<bool, SurfaceError> {
        if c.is_trivial() {
            return Ok(false);
        }
        let root = self.class_of_root(c);
        for p in &self.peripherals {
            for q in [p.clone(), p.inverse()] {
                if self.canonical_conjugacy(&q)?.primitive_root == root.word {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Trivial or parabolic: the bracket with such a class vanishes.
    pub fn is_inessential(&self, c: &ConjClass) -> bool {
        c.is_trivial() || self.classify(&self.evaluate(&c.word)) != IsometryClass::Hyperbolic
    }

    pub fn is_designated_simple(&self, c: &ConjClass) -> Result<bool, SurfaceError> {
        for w in &self.designated_simple {
            let d = self.canonical_conjugacy(w)?;
            if d.word == c.word || self.canonical_conjugacy(&w.inverse())?.word == c.word {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All freely reduced words of exactly length `n` in lexicographic order
    /// (for closed groups, also Dehn-reduced).
    pub fn reduced_words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &out {
                for l in self.letters() {
                    if w.letters().last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.0.push(l);
                    if self.dehn.is_none() || self.reduce(&v) == v {
                        next.push(v);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// One representative word per nontrivial class of cyclically reduced
    /// length at most `max_len`, sorted canonically.
    pub fn classes_up_to(&self, max_len: usize) -> Result<Vec<ConjClass>, SurfaceError> {
        let mut set = std::collections::BTreeSet::new();
        for n in 1..=max_len {
            for w in self.reduced_words(n) {
                let c = self.canonical_conjugacy(&w)?;
                if !c.is_trivial() && c.word.len() <= max_len {
                    set.insert(c);
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}

fn check_schottky(mats: &[Mobius]) -> Result<(), SurfaceError> {
    let mut disks = Vec::new();
    for m in mats {
        if m.c.abs() < 1e-12 {
            return Err(SurfaceError::NotSchottky);
        }
        let r = 1.0 / m.c.abs();
        disks.push((-m.d / m.c, r));
        disks.push((m.a / m.c, r));
    }
    for (i, &(c1, r1)) in disks.iter().enumerate() {
        for &(c2, r2) in &disks[i + 1..] {
            if (c1 - c2).abs() <= r1 + r2 {
                return Err(SurfaceError::NotSchottky);
            }
        }
    }
    Ok(())
}

pub fn load_surface(text: &str) -> Result<SurfaceGroup, SurfaceError> {
    let cfg: SurfaceConfig = serde_json::from_str(text).map_err(|e| SurfaceError::Parse(e.to_string()))?;
    build_surface(cfg)
}

pub fn build_surface(cfg: SurfaceConfig) -> Result<SurfaceGroup, SurfaceError> {
    if cfg.generators.is_empty() {
        return Err(SurfaceError::Parse("generator list is empty".into()));
    }
    if cfg.generators.len() > 13 {
        return Err(SurfaceError::Parse("at most 13 generators are supported".into()));
    }
    for (k, g) in cfg.generators.iter().enumerate() {
        let expected = ((b'a' + k as u8) as char).to_string();
        if g.name != expected {
            return Err(SurfaceError::Parse(format!(
                "generator {k} is named '{}'; generators must be named a, b, c, ... in order",
                g.name
            )));
        }
    }
    let mats: Vec<Mobius> = match cfg.construction.as_deref() {
        Some("regular_octagon") => {
            if cfg.generators.len() != 4 {
                return Err(SurfaceError::Parse(
                    "regular_octagon needs exactly four generators".into(),
                ));
            }
            regular_octagon_generators().to_vec()
        }
        Some(other) => return Err(SurfaceError::Parse(format!("unknown construction '{other}'"))),
        None => cfg
            .generators
            .iter()
            .map(|g| {
                let m = g
                    .matrix
                    .ok_or_else(|| SurfaceError::Parse(format!("generator {} has no matrix", g.name)))?;
                Mobius::from_row_major(m).map_err(|e| SurfaceError::Parse(format!("generator {}: {e}", g.name)))
            })
            .collect::<Result<_, _>>()?,
    };
    let rank = mats.len();
    let parse = |list: &[String]| -> Result<Vec<Word>, SurfaceError> {
        list.iter()
            .map(|s| Word::parse(s, rank).map_err(SurfaceError::from))
            .collect()
    };
    let relators = parse(&cfg.relators)?;
    let peripherals = parse(&cfg.peripherals)?;
    let designated_simple = parse(&cfg.designated_simple)?;
    let basepoint =
        Point::new(cfg.basepoint[0], cfg.basepoint[1]).map_err(|e| SurfaceError::Parse(format!("basepoint: {e}")))?;

    let dehn = match cfg.kind {
        SurfaceKind::Closed => {
            if relators.is_empty() {
                return Err(SurfaceError::Parse("closed surface needs a relator".into()));
            }
            Some(DehnReducer::new(&relators, rank)?)
        }
        _ => {
            if !relators.is_empty() {
                return Err(SurfaceError::Parse(
                    "surfaces with boundary or punctures have free fundamental group".into(),
                ));
            }
            None
        }
    };
    let letter_matrices = mats.iter().flat_map(|m| [*m, m.inverse()]).collect();
    let group = SurfaceGroup {
        name: cfg.name,
        kind: cfg.kind,
        generator_names: cfg.generators.into_iter().map(|g| g.name).collect(),
        letter_matrices,
        relators,
        peripherals,
        basepoint,
        designated_simple,
        tolerances: cfg.epsilons,
        systole: cfg.systole,
        dehn,
    };
    validate(&group, &mats)?;
    Ok(group)
}

fn validate(g: &SurfaceGroup, mats: &[Mobius]) -> Result<(), SurfaceError> {
    for r in &g.relators {
        let residual = g.evaluate(r).identity_residual();
        if residual > g.tolerances.relator {
            return Err(SurfaceError::RelatorNotIdentity {
                relator: r.to_string(),
                residual,
            });
        }
    }
    let expected = match g.kind {
        SurfaceKind::Punctured => Some(IsometryClass::Parabolic),
        SurfaceKind::WithBoundary => Some(IsometryClass::Hyperbolic),
        SurfaceKind::Closed => None,
    };
    if let Some(expected) = expected {
        for p in &g.peripherals {
            let found = g.classify(&g.evaluate(p));
            if found != expected {
                return Err(SurfaceError::PeripheralMismatch {
                    word: p.to_string(),
                    expected,
                    found,
                });
            }
        }
    }
    if g.kind == SurfaceKind::WithBoundary {
        check_schottky(mats)?;
    }
    for n in 1..=LOAD_SCAN_LENGTH {
        for w in g.reduced_words(n) {
            if g.is_identity(&w) {
                continue;
            }
            let m = g.evaluate(&w);
            if g.classify(&m) == IsometryClass::Elliptic || m.identity_residual() <= 1e-9 {
                return Err(SurfaceError::NonDiscreteSuspected { word: w.to_string() });
            }
        }
    }
    Ok(())
}
