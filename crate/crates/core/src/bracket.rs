//! The Goldman bracket on integer combinations of free homotopy classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::cayley::{
    expand_crossings, root_crossings_with, EnumerationError, IntersectionDatum, RootCrossings, SearchOptions,
};
use crate::surface::{ConjClass, SurfaceError, SurfaceGroup};
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("parse error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Finite integer combination of conjugacy classes; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<ConjClass, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    pub fn single(c: ConjClass, coefficient: i64) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(c, coefficient);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct classes.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ConjClass, i64)> {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    pub fn coefficient(&self, c: &ConjClass) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    /// Sum of absolute coefficients.
    pub fn total_multiplicity(&self) -> i64 {
        self.terms.values().map(|k| k.abs()).sum()
    }

    pub fn add_term(&mut self, c: ConjClass, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        let entry = self.terms.entry(c.clone()).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.remove(&c);
        }
    }

    pub fn add(&mut self, other: &FormalSum) {
        for (c, k) in other.iter() {
            self.add_term(c.clone(), k);
        }
    }

    pub fn scaled(&self, k: i64) -> FormalSum {
        let mut s = FormalSum::zero();
        for (c, x) in self.iter() {
            s.add_term(c.clone(), k * x);
        }
        s
    }

    pub fn negated(&self) -> FormalSum {
        self.scaled(-1)
    }

    /// Parses text such as `"3*<ab> - <aB>"` or `"0"`, canonicalizing every class.
    pub fn parse(g: &SurfaceGroup, text: &str) -> Result<FormalSum, ParseError> {
        SumParser {
            g,
            s: text.as_bytes(),
            pos: 0,
        }
        .parse()
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.iter()
            .map(|(c, k)| TermJson {
                class: c.word.to_string(),
                coefficient: k,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub class: String,
    pub coefficient: i64,
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, k)) in self.iter().enumerate() {
            match (i, k < 0) {
                (0, false) => write!(f, "{k}*{c}")?,
                (0, true) => write!(f, "-{}*{c}", -k)?,
                (_, false) => write!(f, " + {k}*{c}")?,
                (_, true) => write!(f, " - {}*{c}", -k)?,
            }
        }
        Ok(())
    }
}

struct SumParser<'a> {
    g: &'a SurfaceGroup,
    s: &'a [u8],
    pos: usize,
}

impl SumParser<'_> {
    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<FormalSum, ParseError> {
        let mut sum = FormalSum::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = 1i64;
            match self.peek() {
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                None => break,
                _ if !first => return self.err("expected '+' or '-'"),
                _ => {}
            }
            self.skip_ws();
            let (k, class) = self.term()?;
            if let Some(c) = class {
                sum.add_term(c, sign * k);
            } else if k != 0 {
                return self.err("a bare number must be 0");
            }
            first = false;
        }
        Ok(sum)
    }

    /// `[int '*'] '<' word '>'`, or a bare integer (only `0` is meaningful).
    fn term(&mut self) -> Result<(i64, Option<ConjClass>), ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let mut k = 1i64;
        if self.pos > start {
            let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
            k = match digits.parse() {
                Ok(v) => v,
                Err(_) => return self.err("coefficient out of range"),
            };
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
            } else {
                return Ok((k, None));
            }
        }
        if self.peek() != Some(b'<') {
            return self.err("expected '<'");
        }
        self.pos += 1;
        let wstart = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[wstart..self.pos]).expect("ascii word");
        let word = self.g.parse_word(text).map_err(|e| ParseError::Syntax {
            position: wstart,
            message: e.to_string(),
        })?;
        if self.peek() != Some(b'>') {
            return self.err("expected '>'");
        }
        self.pos += 1;
        let class = self.g.canonical_conjugacy(&word)?;
        Ok((k, Some(class)))
    }
}

/// Bracket computations on one surface, with crossing data cached per pair of primitive roots.
pub struct BracketEngine {
    pub group: SurfaceGroup,
    options: SearchOptions,
    slack: f64,
    cache: Mutex<HashMap<(Word, Word), Arc<RootCrossings>>>,
}

/// What a pair of classes reduces to before any enumeration.
enum PairKind {
    Vanishing,
    Crossing { a: ConjClass, b: ConjClass },
}

impl BracketEngine {
    pub fn new(group: SurfaceGroup) -> Self {
        let options = SearchOptions::for_group(&group);
        let slack = group.tolerances.slack;
        BracketEngine {
            group,
            options,
            slack,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_options(mut self, options: SearchOptions) -> Self {
        self.options = options;
        self
    }

    pub fn class(&self, w: &Word) -> Result<ConjClass, EnumerationError> {
        Ok(self.group.canonical_conjugacy(w)?)
    }

    fn pair_kind(&self, a: &ConjClass, b: &ConjClass) -> Result<PairKind, EnumerationError> {
        let g = &self.group;
        // Classes sharing a primitive root are not special-cased: their
        // crossings are the transverse translates at self-intersections, and
        // the common carrier itself is skipped as non-transverse. For simple
        // roots this gives 0.
        if g.is_inessential(a) || g.is_inessential(b) {
            return Ok(PairKind::Vanishing);
        }
        Ok(PairKind::Crossing {
            a: a.clone(),
            b: b.clone(),
        })
    }

    /// Crossings of the primitive roots, computed once per ordered pair.
    pub fn root_crossings(&self, a: &ConjClass, b: &ConjClass) -> Result<Arc<RootCrossings>, EnumerationError> {
        let key = (a.primitive_root.clone(), b.primitive_root.clone());
        if let Some(hit) = self.cache.lock().expect("bracket cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let data = Arc::new(root_crossings_with(
            &self.group,
            &key.0,
            &key.1,
            self.slack,
            self.options,
        )?);
        self.cache
            .lock()
            .expect("bracket cache poisoned")
            .insert(key, data.clone());
        Ok(data)
    }

    /// Number of crossing cosets `|J(α, β)|`; zero for inessential classes.
    pub fn intersection_number(&self, alpha: &Word, beta: &Word) -> Result<usize, EnumerationError> {
        let (a, b) = (self.class(alpha)?, self.class(beta)?);
        self.intersection_number_classes(&a, &b)
    }

    pub fn intersection_number_classes(&self, a: &ConjClass, b: &ConjClass) -> Result<usize, EnumerationError> {
        match self.pair_kind(a, b)? {
            PairKind::Vanishing => Ok(0),
            PairKind::Crossing { a, b } => Ok(a.power * b.power * self.root_crossings(&a, &b)?.data.len()),
        }
    }

    pub fn bracket(&self, alpha: &Word, beta: &Word) -> Result<FormalSum, EnumerationError> {
        let (a, b) = (self.class(alpha)?, self.class(beta)?);
        self.bracket_classes(&a, &b)
    }

    /// `Σ ε ⟨α g β g⁻¹⟩` over crossing cosets. Every coset of the roots
    /// contributes `p·q` equal terms, where `α = ρ^p` and `β = σ^q`.
    pub fn bracket_classes(&self, a: &ConjClass, b: &ConjClass) -> Result<FormalSum, EnumerationError> {
        let (a, b) = match self.pair_kind(a, b)? {
            PairKind::Vanishing => return Ok(FormalSum::zero()),
            PairKind::Crossing { a, b } => (a, b),
        };
        let roots = self.root_crossings(&a, &b)?;
        let mult = (a.power * b.power) as i64;
        let mut sum = FormalSum::zero();
        for d in &roots.data {
            let w = a
                .word
                .concat(&d.coset_rep)
                .concat(&b.word)
                .concat(&d.coset_rep.inverse());
            sum.add_term(self.group.canonical_conjugacy(&w)?, mult * d.sign as i64);
        }
        Ok(sum)
    }

    /// Intersection data with one entry per coset of `⟨β⟩` on the full segment of `A_α`.
    pub fn intersection_data(&self, alpha: &Word, beta: &Word) -> Result<Vec<IntersectionDatum>, EnumerationError> {
        let (a, b) = (self.class(alpha)?, self.class(beta)?);
        match self.pair_kind(&a, &b)? {
            PairKind::Vanishing => Ok(Vec::new()),
            PairKind::Crossing { a, b } => {
                let roots = self.root_crossings(&a, &b)?;
                expand_crossings(&self.group, &a, &b, &roots)
            }
        }
    }

    /// The bracket computed from `J(α, β)` directly, without passing to
    /// primitive roots: cosets of `⟨β⟩` along the full segment of `A_α`.
    pub fn bracket_direct(&self, alpha: &Word, beta: &Word) -> Result<(FormalSum, usize), EnumerationError> {
        let (a, b) = (self.class(alpha)?, self.class(beta)?);
        let (a, b) = match self.pair_kind(&a, &b)? {
            PairKind::Vanishing => return Ok((FormalSum::zero(), 0)),
            PairKind::Crossing { a, b } => (a, b),
        };
        let direct = root_crossings_with(&self.group, &a.word, &b.word, self.slack, self.options)?;
        let mut sum = FormalSum::zero();
        for d in &direct.data {
            sum.add_term(d.term.clone(), d.sign as i64);
        }
        Ok((sum, direct.data.len()))
    }

    pub fn bracket_sums(&self, x: &FormalSum, y: &FormalSum) -> Result<FormalSum, EnumerationError> {
        let mut out = FormalSum::zero();
        for (c, k) in x.iter() {
            for (d, l) in y.iter() {
                out.add(&self.bracket_classes(c, d)?.scaled(k * l));
            }
        }
        Ok(out)
    }

    pub fn power_bracket(&self, alpha: &Word, m: u32, beta: &Word) -> Result<FormalSum, EnumerationError> {
        self.bracket(&alpha.power(m as i64), beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(name: &str) -> BracketEngine {
        BracketEngine::new(SurfaceGroup::preset(name).unwrap())
    }

    #[test]
    fn formatting() {
        let e = engine("punctured-torus");
        let g = &e.group;
        assert_eq!(FormalSum::zero().to_string(), "0");
        let s = FormalSum::parse(g, "<ab>").unwrap();
        assert_eq!(
            s.coefficient(&g.canonical_conjugacy(&g.parse_word("ba").unwrap()).unwrap()),
            1
        );
        let s = FormalSum::parse(g, "3*<ab> - 1*<aB>").unwrap();
        assert_eq!(s.to_string(), "3*<ab> - 1*<aB>");
        let s = FormalSum::parse(g, " -2*<ba> + <a>+<ab>").unwrap();
        assert_eq!(s.to_string(), "1*<a> - 1*<ab>");
        assert!(FormalSum::parse(g, "0").unwrap().is_zero());
        assert!(FormalSum::parse(g, "<a> - <a>").unwrap().is_zero());
        assert!(matches!(
            FormalSum::parse(g, "<ac>"),
            Err(ParseError::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            FormalSum::parse(g, "<a> <b>"),
            Err(ParseError::Syntax { position: 4, .. })
        ));
        assert!(matches!(FormalSum::parse(g, ""), Err(ParseError::Syntax { .. })));
        assert!(matches!(FormalSum::parse(g, "3"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn torus_generators() {
        let e = engine("punctured-torus");
        let g = &e.group;
        let w = |s: &str| g.parse_word(s).unwrap();
        let ab = e.bracket(&w("a"), &w("b")).unwrap();
        assert_eq!(ab.len(), 1);
        let (c, k) = ab.iter().next().unwrap();
        assert_eq!(c.word, w("ab"));
        assert_eq!(k.abs(), 1);
        assert!(e.bracket(&w("a"), &w("a")).unwrap().is_zero());
        assert!(e.bracket(&w("abAB"), &w("b")).unwrap().is_zero());
        assert_eq!(e.intersection_number(&w("a"), &w("b")).unwrap(), 1);
        assert_eq!(e.intersection_number(&w("a"), &w("bb")).unwrap(), 2);
        assert_eq!(e.intersection_number(&w("a"), &w("a")).unwrap(), 0);
        assert_eq!(e.intersection_number(&w("a"), &w("abAB")).unwrap(), 0);
        assert_eq!(e.bracket(&w("b"), &w("a")).unwrap(), ab.negated());
    }

    #[test]
    fn linearity() {
        let e = engine("punctured-torus");
        let g = &e.group;
        let x = FormalSum::parse(g, "2*<a>").unwrap();
        let y = FormalSum::parse(g, "<b>").unwrap();
        let ab = e
            .bracket(&g.parse_word("a").unwrap(), &g.parse_word("b").unwrap())
            .unwrap();
        assert_eq!(e.bracket_sums(&x, &y).unwrap(), ab.scaled(2));
        assert!(e.bracket_sums(&FormalSum::zero(), &y).unwrap().is_zero());
    }

    #[test]
    fn direct_matches_root_reduction() {
        let e = engine("punctured-torus");
        let g = &e.group;
        let w = |s: &str| g.parse_word(s).unwrap();
        for (x, y) in [("aa", "b"), ("aaa", "bb"), ("ab", "aB"), ("aab", "b")] {
            let (direct, n) = e.bracket_direct(&w(x), &w(y)).unwrap();
            assert_eq!(direct, e.bracket(&w(x), &w(y)).unwrap(), "{x} {y}");
            assert_eq!(n, e.intersection_number(&w(x), &w(y)).unwrap());
        }
    }
}
