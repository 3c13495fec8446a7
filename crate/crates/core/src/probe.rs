//! Bounded centrality probes.
//!
//! A probe brackets a candidate sum against every class up to a word length
//! and stops at the first nonzero result. `CentralUpToBound` is only a
//! necessary condition for lying in the center.

use serde::Serialize;

use crate::bracket::{BracketEngine, FormalSum, TermJson};
use crate::cayley::EnumerationError;
use crate::surface::{ConjClass, SurfaceKind};

/// Default probe depth for closed surfaces, where probing is expensive.
pub const CLOSED_DEFAULT_MAX_LEN: usize = 3;
pub const DEFAULT_MAX_LEN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CentralUpToBound,
    NotCentral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub class: ConjClass,
    pub bracket: FormalSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub candidate: FormalSum,
    pub max_len: usize,
    pub tested_classes: usize,
    pub witness: Option<Witness>,
    pub verdict: Verdict,
    /// Peripheral status of each candidate term, on surfaces with boundary or punctures.
    pub peripheral_terms: Option<Vec<(ConjClass, bool)>>,
}

#[derive(Serialize)]
struct WitnessJson {
    class: String,
    bracket: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize)]
struct PeripheralJson {
    class: String,
    peripheral: bool,
}

#[derive(Serialize)]
struct ProbeJson {
    candidate: String,
    max_len: usize,
    tested_classes: usize,
    verdict: Verdict,
    witness: Option<WitnessJson>,
    peripheral_terms: Option<Vec<PeripheralJson>>,
}

impl ProbeReport {
    pub fn to_json(&self) -> serde_json::Value {
        let report = ProbeJson {
            candidate: self.candidate.to_string(),
            max_len: self.max_len,
            tested_classes: self.tested_classes,
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| WitnessJson {
                class: w.class.to_string(),
                bracket: w.bracket.to_string(),
                terms: w.bracket.to_json(),
            }),
            peripheral_terms: self.peripheral_terms.as_ref().map(|v| {
                v.iter()
                    .map(|(c, p)| PeripheralJson {
                        class: c.to_string(),
                        peripheral: *p,
                    })
                    .collect()
            }),
        };
        serde_json::to_value(report).expect("probe report serializes")
    }

    pub fn all_terms_peripheral(&self) -> Option<bool> {
        self.peripheral_terms.as_ref().map(|v| v.iter().all(|(_, p)| *p))
    }
}

pub fn default_max_len(engine: &BracketEngine) -> usize {
    match engine.group.kind {
        SurfaceKind::Closed => CLOSED_DEFAULT_MAX_LEN,
        _ => DEFAULT_MAX_LEN,
    }
}

pub fn probe_center(
    engine: &BracketEngine,
    candidate: &FormalSum,
    max_len: usize,
) -> Result<ProbeReport, EnumerationError> {
    let group = &engine.group;
    let peripheral_terms = match group.kind {
        SurfaceKind::Closed => None,
        _ => Some(
            candidate
                .iter()
                .map(|(c, _)| Ok((c.clone(), group.is_peripheral(c)?)))
                .collect::<Result<Vec<_>, EnumerationError>>()?,
        ),
    };
    let mut tested = 0;
    let mut witness = None;
    if !candidate.is_zero() {
        for class in group.classes_up_to(max_len)? {
            tested += 1;
            let b = engine.bracket_sums(candidate, &FormalSum::single(class.clone(), 1))?;
            if !b.is_zero() {
                witness = Some(Witness { class, bracket: b });
                break;
            }
        }
    }
    let verdict = if witness.is_some() {
        Verdict::NotCentral
    } else {
        Verdict::CentralUpToBound
    };
    Ok(ProbeReport {
        candidate: candidate.clone(),
        max_len,
        tested_classes: tested,
        witness,
        verdict,
        peripheral_terms,
    })
}
