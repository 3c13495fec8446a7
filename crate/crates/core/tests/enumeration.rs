use std::collections::BTreeSet;

use goldman::bracket::{BracketEngine, FormalSum};
use goldman::cayley::{default_sample_length, enumerate_ball, estimate_growth, AxisData, SearchOptions};
use goldman::hyperbolic::{dist, dist_point_geodesic, geodesic_intersection, Mobius};
use goldman::surface::{ConjClass, SurfaceGroup};
use goldman::word::Word;

fn preset(name: &str) -> SurfaceGroup {
    SurfaceGroup::preset(name).unwrap()
}

fn all_words(g: &SurfaceGroup, max_len: usize) -> Vec<(Word, Mobius)> {
    (0..=max_len)
        .flat_map(|n| g.reduced_words(n))
        .map(|w| (w.clone(), g.evaluate(&w)))
        .collect()
}

#[test]
fn free_ball_matches_unpruned_search() {
    for name in ["punctured-torus", "pair-of-pants"] {
        let g = preset(name);
        for radius in [2.0, 3.5] {
            let growth = estimate_growth(&g, default_sample_length(&g));
            let o = g.basepoint;
            let brute: BTreeSet<Word> = all_words(&g, growth.max_length(radius))
                .into_iter()
                .filter(|(_, m)| dist(m.apply_point(o), o) <= radius)
                .map(|(w, _)| w)
                .collect();
            let ball: BTreeSet<Word> = enumerate_ball(&g, o, radius)
                .unwrap()
                .into_iter()
                .map(|e| e.word)
                .collect();
            assert_eq!(ball, brute, "{name} radius {radius}");
        }
    }
}

#[test]
fn closed_ball_has_one_word_per_element() {
    let g = preset("genus-2");
    let o = g.basepoint;
    let radius = 2.5;
    let growth = estimate_growth(&g, default_sample_length(&g));
    // distinct elements have distinct basepoint images
    let mut brute: Vec<(f64, f64)> = all_words(&g, growth.max_length(radius))
        .into_iter()
        .map(|(_, m)| m.apply_point(o))
        .filter(|p| dist(*p, o) <= radius)
        .map(|p| (p.x, p.y))
        .collect();
    brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
    brute.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    let ball = enumerate_ball(&g, o, radius).unwrap();
    assert_eq!(ball.len(), brute.len());
    for (i, e) in ball.iter().enumerate() {
        for f in &ball[i + 1..] {
            assert!(
                !g.is_identity(&e.word.inverse().concat(&f.word)),
                "{} and {} are equal",
                e.word,
                f.word
            );
        }
    }
}

/// Bracket by scanning every translate `w·A_β` for reduced words `w` up to a
/// length. Crossings are taken on one period of `A_α` and cosets `w⟨β⟩`
/// are merged by exact word comparison.
fn brute_bracket(g: &SurfaceGroup, words: &[(Word, Mobius)], a: &ConjClass, b: &ConjClass) -> FormalSum {
    let (aa, bb) = (
        AxisData::of_word(g, &a.word).unwrap(),
        AxisData::of_word(g, &b.word).unwrap(),
    );
    // an arbitrary start, away from the basepoint projection used by the library
    let start = aa.axis.walk(aa.axis.project(g.basepoint), 0.37 * aa.tau);
    let same_coset = |u: &Word, v: &Word| {
        let q = g.reduce(&u.inverse().concat(v));
        q.is_empty()
            || (q.len().is_multiple_of(b.word.len()) && {
                let k = (q.len() / b.word.len()) as i64;
                q == b.word.power(k) || q == b.word.power(-k)
            })
    };
    let mut seen: Vec<Word> = Vec::new();
    let mut sum = FormalSum::zero();
    for (w, m) in words {
        let t = bb.axis.transformed(m);
        let Ok(Some(x)) = geodesic_intersection(&aa.axis, &t) else {
            continue;
        };
        let s = aa.axis.offset(start, x.point);
        if !(0.0..aa.tau).contains(&s) || seen.iter().any(|u| same_coset(u, w)) {
            continue;
        }
        seen.push(w.clone());
        let term = a.word.concat(w).concat(&b.word).concat(&w.inverse());
        sum.add_term(g.canonical_conjugacy(&term).unwrap(), x.sign as i64);
    }
    sum
}

#[test]
fn brackets_match_translate_scan() {
    for name in ["punctured-torus", "pair-of-pants"] {
        let g = preset(name);
        let engine = BracketEngine::new(g.clone());
        let words = all_words(&g, 8);
        let classes: Vec<ConjClass> = g
            .classes_up_to(3)
            .unwrap()
            .into_iter()
            .filter(|c| !g.is_inessential(c) && c.power == 1)
            .collect();
        let mut compared = 0;
        for a in &classes {
            for b in &classes {
                if a == b || g.canonical_conjugacy(&b.word.inverse()).unwrap() == *a {
                    continue;
                }
                let lib = engine.bracket_classes(a, b).unwrap();
                let brute = brute_bracket(&g, &words, a, b);
                assert_eq!(lib, brute, "{name}: [{a}, {b}]");
                compared += 1;
            }
        }
        assert!(compared > 20, "{name}: only {compared} pairs");
    }
}

/// Engines with the tube radius doubled, and separately with the pruning
/// margin doubled. Closed groups grow too fast for that within the budget,
/// so both knobs get one extra unit instead.
fn widened(g: &SurfaceGroup, a: &Word, b: &Word) -> [BracketEngine; 2] {
    let (aa, bb) = (AxisData::of_word(g, a).unwrap(), AxisData::of_word(g, b).unwrap());
    let o = g.basepoint;
    let radius = (aa.tau / 2.0 + dist_point_geodesic(o, &aa.axis)).max(bb.tau / 2.0 + dist_point_geodesic(o, &bb.axis))
        + g.tolerances.slack;
    let base = SearchOptions::for_group(g);
    let (extra, margin) = if g.is_closed() {
        (1.0, base.margin + 1.0)
    } else {
        (radius, 2.0 * base.margin)
    };
    [
        BracketEngine::new(g.clone()).with_slack(g.tolerances.slack + extra),
        BracketEngine::new(g.clone()).with_options(SearchOptions { margin, ..base }),
    ]
}

#[test]
fn results_stable_when_search_widens() {
    let cases = [
        (
            "punctured-torus",
            vec![("a", "b"), ("a", "bb"), ("ab", "aB"), ("aab", "abb"), ("aaB", "abb")],
        ),
        ("pair-of-pants", vec![("ab", "aB"), ("aab", "abb"), ("aaB", "ab")]),
        ("genus-2", vec![("a", "b"), ("ab", "bc"), ("a", "cd")]),
    ];
    for (name, pairs) in cases {
        let g = preset(name);
        let engine = BracketEngine::new(g.clone());
        for (x, y) in pairs {
            let (a, b) = (g.parse_word(x).unwrap(), g.parse_word(y).unwrap());
            let (count, bracket) = (
                engine.intersection_number(&a, &b).unwrap(),
                engine.bracket(&a, &b).unwrap(),
            );
            for wide in widened(&g, &a, &b) {
                assert_eq!(wide.intersection_number(&a, &b).unwrap(), count, "{name} i({x},{y})");
                assert_eq!(wide.bracket(&a, &b).unwrap(), bracket, "{name} [{x},{y}]");
            }
        }
    }
}

#[test]
fn translation_lengths_bound_the_systole() {
    // every class in the ball is at least as long as the shortest generator class
    let g = preset("punctured-torus");
    let tau0 = 2.0 * 1.5f64.acosh();
    for w in (1..=6).flat_map(|n| g.reduced_words(n)) {
        let m = g.evaluate(&w);
        if m.trace().abs() > 2.0 + 1e-9 {
            assert!(2.0 * (m.trace().abs() / 2.0).acosh() >= tau0 - 1e-9, "{w}");
        }
    }
}
