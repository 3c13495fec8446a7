//! Word and conjugacy problems for small-cancellation one-relator groups.
//!
//! The word problem is Dehn's algorithm. For conjugacy, cyclic Dehn reduction
//! alone does not give a unique representative: a cyclic word can contain
//! exactly half of a relator, and swapping that half for the other half keeps
//! the length. More generally, minimal-length conjugates are related through
//! annular diagrams with a single layer of relator cells. We compute the set
//! of all minimal-length cyclic words reachable through such single-layer
//! moves and pick a deterministic member.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::word::{Letter, Word};

/// Default bound on the number of minimal cyclic words explored per class.
pub const DEFAULT_CLOSURE_CAP: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DehnError {
    #[error("relator {0} is not cyclically reduced")]
    RelatorNotCyclicallyReduced(String),
    #[error(
        "presentation fails the small-cancellation condition (piece of length {piece} in relator of length {len})"
    )]
    NotSmallCancellation { piece: usize, len: usize },
    #[error("conjugacy closure exceeded {cap} words")]
    ClosureTooLarge { cap: usize },
}

/// Symmetrized relator set for Dehn-style reduction.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    /// Every relator and its inverse, as cyclic letter sequences.
    cycles: Vec<Vec<Letter>>,
    /// For each letter code, the `(cycle, position)` pairs where it occurs.
    occurrences: Vec<Vec<(usize, usize)>>,
    closure_cap: usize,
}

impl DehnReducer {
    pub fn new(relators: &[Word], rank: usize) -> Result<Self, DehnError> {
        let mut cycles = Vec::new();
        for r in relators {
            if r.free_cyclic_reduce() != *r || r.is_empty() {
                return Err(DehnError::RelatorNotCyclicallyReduced(r.to_string()));
            }
            cycles.push(r.0.clone());
            cycles.push(r.inverse().0);
        }
        let mut occurrences = vec![Vec::new(); 2 * rank];
        for (ci, c) in cycles.iter().enumerate() {
            for (p, l) in c.iter().enumerate() {
                occurrences[l.code()].push((ci, p));
            }
        }
        let reducer = DehnReducer {
            cycles,
            occurrences,
            closure_cap: DEFAULT_CLOSURE_CAP,
        };
        let piece = reducer.max_piece_length();
        if let Some(len) = reducer.cycles.iter().map(Vec::len).min() {
            // C'(1/6): every piece shorter than a sixth of the relator
            if 6 * piece >= len {
                return Err(DehnError::NotSmallCancellation { piece, len });
            }
        }
        Ok(reducer)
    }

    pub fn with_closure_cap(mut self, cap: usize) -> Self {
        self.closure_cap = cap;
        self
    }

    /// Longest word that occurs at two different places of the symmetrized relator set.
    pub fn max_piece_length(&self) -> usize {
        let mut best = 0;
        let spots: Vec<(usize, usize)> = self
            .cycles
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| (0..c.len()).map(move |p| (ci, p)))
            .collect();
        for (i, &(c1, p1)) in spots.iter().enumerate() {
            for &(c2, p2) in &spots[i + 1..] {
                let (a, b) = (&self.cycles[c1], &self.cycles[c2]);
                let mut k = 0;
                while k < a.len().min(b.len()) && a[(p1 + k) % a.len()] == b[(p2 + k) % b.len()] {
                    k += 1;
                }
                best = best.max(k);
            }
        }
        best
    }

    /// Longest match of `w` (read cyclically when `cyclic`) starting at `i`
    /// against any relator cycle; returns `(length, cycle, offset)`.
    fn longest_match(&self, w: &[Letter], i: usize, cyclic: bool) -> Option<(usize, usize, usize)> {
        let n = w.len();
        let avail = if cyclic { n } else { n - i };
        let mut best: Option<(usize, usize, usize)> = None;
        for &(ci, p) in &self.occurrences[w[i].code()] {
            let c = &self.cycles[ci];
            let lim = avail.min(c.len());
            let mut k = 0;
            while k < lim && w[(i + k) % n] == c[(p + k) % c.len()] {
                k += 1;
            }
            if best.is_none_or(|b| k > b.0) {
                best = Some((k, ci, p));
            }
        }
        best
    }

    fn complement_inverse(&self, ci: usize, p: usize, k: usize) -> Vec<Letter> {
        let c = &self.cycles[ci];
        let len = c.len();
        (k..len).rev().map(|j| c[(p + j) % len].inverse()).collect()
    }

    /// Dehn's algorithm on a linear word. The result is freely reduced and
    /// contains no subword longer than half a relator.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_reduce().0;
        'outer: loop {
            for i in 0..cur.len() {
                if let Some((k, ci, p)) = self.longest_match(&cur, i, false) {
                    if 2 * k > self.cycles[ci].len() {
                        let mut next = cur[..i].to_vec();
                        next.extend(self.complement_inverse(ci, p, k));
                        next.extend_from_slice(&cur[i + k..]);
                        cur = Word(next).free_reduce().0;
                        continue 'outer;
                    }
                }
            }
            return Word(cur);
        }
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.reduce(w).is_empty()
    }

    /// Cyclic Dehn reduction: free and cyclic reduction, then repeated
    /// replacement of long cyclic relator subwords.
    pub fn cyclic_reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_cyclic_reduce().0;
        'outer: loop {
            let n = cur.len();
            for i in 0..n {
                if let Some((k, ci, p)) = self.longest_match(&cur, i, true) {
                    if 2 * k > self.cycles[ci].len() {
                        let mut next = self.complement_inverse(ci, p, k);
                        next.extend((k..n).map(|j| cur[(i + j) % n]));
                        cur = Word(next).free_cyclic_reduce().0;
                        continue 'outer;
                    }
                }
            }
            return Word(cur);
        }
    }

    /// Cyclic words obtainable from `u` by one single-layer annular move, of
    /// length at most `max_len` after reduction.
    pub fn layer_neighbors(&self, u: &Word, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let n = u.len();
        if n == 0 {
            return out;
        }
        let rank2 = self.occurrences.len();
        let connectors: Vec<Option<Letter>> = std::iter::once(None)
            .chain((0..rank2).map(|c| Some(Letter::from_code(c))))
            .collect();
        for s in 0..n {
            let w = u.rotate(s).0;
            for &t0 in &connectors {
                let mut search = LayerSearch {
                    reducer: self,
                    top: &w,
                    first_connector: t0,
                    slack: max_len as i64 - n as i64,
                    bottom: Vec::with_capacity(n + 8),
                    out: &mut out,
                };
                search.run(0, t0, 0);
            }
        }
        out.remove(&u.least_rotation());
        out
    }

    /// All minimal-length cyclic words (as least rotations) in the conjugacy
    /// class of `w` reachable by layer moves.
    pub fn minimal_conjugates(&self, w: &Word) -> Result<BTreeSet<Word>, DehnError> {
        let start = self.cyclic_reduce(w).least_rotation();
        let mut best = start.len();
        let mut seen: BTreeSet<Word> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for v in self.layer_neighbors(&x, best) {
                let v = self.cyclic_reduce(&v).least_rotation();
                if v.len() < best {
                    best = v.len();
                    seen.clear();
                    queue.clear();
                    seen.insert(v.clone());
                    queue.push_back(v);
                    break;
                }
                if v.len() == best && seen.insert(v.clone()) {
                    if seen.len() > self.closure_cap {
                        return Err(DehnError::ClosureTooLarge { cap: self.closure_cap });
                    }
                    queue.push_back(v);
                }
            }
        }
        Ok(seen)
    }

    /// Canonical cyclic representative and its power.
    ///
    /// The power is the largest rotation periodicity among the minimal
    /// conjugates; the representative is the least word attaining it.
    pub fn canonical(&self, w: &Word) -> Result<(Word, usize), DehnError> {
        let set = self.minimal_conjugates(w)?;
        let mut best: Option<(usize, Word)> = None;
        for x in set {
            let (_, p) = x.root_and_power();
            match &best {
                Some((bp, bw)) if *bp > p || (*bp == p && *bw <= x) => {}
                _ => best = Some((p, x)),
            }
        }
        let (_, word) = best.unwrap_or((1, Word::empty()));
        let (root, power) = word.root_and_power();
        Ok((root.power(power as i64), power))
    }
}

/// Depth-first search over single-layer annular diagrams whose top boundary
/// is a fixed cyclic word. Cells are relator cycles; consecutive cells share
/// a connector edge of length at most one, and stretches where top and
/// bottom coincide are copied verbatim.
struct LayerSearch<'a> {
    reducer: &'a DehnReducer,
    top: &'a [Letter],
    first_connector: Option<Letter>,
    slack: i64,
    bottom: Vec<Letter>,
    out: &'a mut BTreeSet<Word>,
}

impl LayerSearch<'_> {
    /// Upper bound on how much the remaining `rem` top letters can shorten the
    /// bottom. A cell covering `k` top letters with both connectors present has
    /// `len - k - 2` bottom letters, so it saves at most `2k + 2 - len`, and
    /// `k` is at most half the relator on a Dehn-reduced word.
    fn max_future_saving(&self, rem: usize) -> i64 {
        let len = self.reducer.cycles.iter().map(Vec::len).min().unwrap_or(0) as i64;
        let k = len / 2;
        let per_cell = 2 * k + 2 - len;
        if per_cell <= 0 || k == 0 {
            0
        } else {
            (rem as i64 / k) * per_cell + (2 * (rem as i64 % k) + 2 - len).max(0)
        }
    }

    fn run(&mut self, pos: usize, left: Option<Letter>, cells: usize) {
        let n = self.top.len();
        if pos == n {
            if left == self.first_connector && cells > 0 {
                let v = Word(self.bottom.clone()).free_cyclic_reduce();
                if v.len() as i64 <= n as i64 + self.slack {
                    self.out.insert(v.least_rotation());
                }
            }
            return;
        }
        let excess = self.bottom.len() as i64 - pos as i64;
        if excess - self.max_future_saving(n - pos) > self.slack {
            return;
        }
        if left.is_none() && pos > 0 {
            self.bottom.push(self.top[pos]);
            self.run(pos + 1, None, cells);
            self.bottom.pop();
        }
        for ci in 0..self.reducer.cycles.len() {
            let starts: Vec<usize> = self.reducer.occurrences[self.top[pos].code()]
                .iter()
                .filter(|&&(c, _)| c == ci)
                .map(|&(_, p)| p)
                .collect();
            for q in starts {
                self.try_cell(pos, left, cells, ci, q);
            }
        }
    }

    fn try_cell(&mut self, pos: usize, left: Option<Letter>, cells: usize, ci: usize, q: usize) {
        let cycle = &self.reducer.cycles[ci];
        let len = cycle.len();
        let at = |j: usize| cycle[(q + j) % len];
        if let Some(t) = left {
            if at(len - 1) != t.inverse() {
                return;
            }
        }
        let left_len = left.is_some() as usize;
        let n = self.top.len();
        let mut k = 0;
        // the top stretch may end anywhere along the matching prefix
        while pos + k < n && k + left_len < len && at(k) == self.top[pos + k] {
            k += 1;
            if 2 * k > len {
                break;
            }
            let mid = len - k - left_len;
            self.place_cell(pos + k, cells, (k..k + mid).map(at).collect());
        }
    }

    /// `middle` is the part of the cycle between the top stretch and the left
    /// connector: right connector (optional) followed by the reversed bottom.
    fn place_cell(&mut self, next: usize, cells: usize, middle: Vec<Letter>) {
        let saved = self.bottom.len();
        for split in 0..=1.min(middle.len()) {
            let right = if split == 1 { Some(middle[0]) } else { None };
            self.bottom.extend(middle[split..].iter().rev().map(|l| l.inverse()));
            self.run(next, right, cells + 1);
            self.bottom.truncate(saved);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genus2() -> DehnReducer {
        DehnReducer::new(&[Word::parse("abABcdCD", 4).unwrap()], 4).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 4).unwrap()
    }

    #[test]
    fn pieces_and_condition() {
        let d = genus2();
        assert_eq!(d.max_piece_length(), 1);
        assert!(matches!(
            DehnReducer::new(&[w("abAB")], 2),
            Err(DehnError::NotSmallCancellation { .. })
        ));
    }

    #[test]
    fn word_problem() {
        let d = genus2();
        assert!(d.is_identity(&w("abABcdCD")));
        assert!(d.is_identity(&w("cdCDabAB")));
        assert!(d.is_identity(&w("dcDCbaBA")));
        assert!(d.is_identity(&w("xabABcdCDX".replace('x', "a").replace('X', "A").as_str())));
        assert!(!d.is_identity(&w("abAB")));
        assert!(!d.is_identity(&w("a")));
        assert_eq!(d.reduce(&w("abABc")), w("dcD"));
    }

    #[test]
    fn cyclic_dehn_example() {
        let d = genus2();
        assert_eq!(d.cyclic_reduce(&w("abABc")), w("c"));
        assert_eq!(d.cyclic_reduce(&w("abABcdCD")), Word::empty());
    }

    #[test]
    fn half_relator_swap_is_a_neighbor() {
        let d = genus2();
        // abAB = (cdCD)^-1 = dcDC in the group
        let n = d.layer_neighbors(&w("abABa"), 5);
        let target = w("dcDCa").least_rotation();
        assert!(n.contains(&target), "{n:?}");
    }

    #[test]
    fn canonical_agrees_on_half_swaps() {
        let d = genus2();
        let x = d.canonical(&w("abABa")).unwrap();
        let y = d.canonical(&w("dcDCa")).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.0.len(), 5);
    }

    #[test]
    fn powers_detected() {
        let d = genus2();
        let (c, p) = d.canonical(&w("abab")).unwrap();
        assert_eq!(c, w("abab"));
        assert_eq!(p, 2);
        let (c, p) = d.canonical(&w("abABcdCD")).unwrap();
        assert!(c.is_empty());
        assert_eq!(p, 1);
    }
}
