//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use goldman::bracket::{BracketEngine, FormalSum};
use goldman::cayley::{AxisData, SearchOptions};
use goldman::hyperbolic::{
    dist, dist_point_geodesic, product_axis_construction, translation_length, BoundaryPoint, Mobius, Point,
};
use goldman::lift::{constants_for_pair, noncancellation_experiment, Sampling};
use goldman::probe::{probe_center, Verdict};
use goldman::surface::SurfaceGroup;
use goldman::verify::{random_crossing_pair, random_word, run_jacobi, run_skew};
use goldman::word::Word;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn preset(name: &str) -> SurfaceGroup {
    SurfaceGroup::preset(name).unwrap()
}

/// Attracting and repelling fixed points from the quadratic `cz² + (d−a)z − b = 0`.
fn fixed_points(m: &Mobius) -> (BoundaryPoint, BoundaryPoint) {
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    if c.abs() < 1e-14 {
        let finite = BoundaryPoint::Finite(b / (d - a));
        return if (a / d).abs() > 1.0 {
            (finite, BoundaryPoint::Infinity)
        } else {
            (BoundaryPoint::Infinity, finite)
        };
    }
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let (r1, r2) = ((a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c));
    if (c * r1 + d).abs() > 1.0 {
        (BoundaryPoint::Finite(r2), BoundaryPoint::Finite(r1))
    } else {
        (BoundaryPoint::Finite(r1), BoundaryPoint::Finite(r2))
    }
}

fn axis_of_product() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_end, mut worst_half, mut done, mut skipped) = (0.0f64, 0.0f64, 0, 0);
    while done < 1000 {
        let (a, b) = random_crossing_pair(&mut rng);
        let Ok((built, half)) = product_axis_construction(&a, &b) else {
            skipped += 1;
            continue;
        };
        done += 1;
        let ab = a.compose(&b);
        let (source, target) = fixed_points(&ab);
        worst_end = worst_end
            .max(built.source.separation(source))
            .max(built.target.separation(target));
        let tau = 2.0 * (ab.trace().abs() / 2.0).acosh();
        worst_half = worst_half.max((half - tau / 2.0).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst_end <= 1e-9 && worst_half <= 1e-9 && elapsed < Duration::from_secs(10) && skipped == 0,
        format!(
            "1000 pairs, endpoint residual {worst_end:.2e}, |d(Q,R) - τ/2| {worst_half:.2e}, {skipped} degenerate, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn worked_constants() -> Outcome {
    let alpha = Mobius::new(2.0, 0.0, 0.0, 0.5).unwrap();
    let beta = Mobius::new(1.25, 0.75, 0.75, 1.25).unwrap();
    let ab = alpha.compose(&beta);
    let e1 = (translation_length(&alpha).unwrap() - 2.0 * 2f64.ln()).abs();
    let e2 = (dist(Point::I, Point { x: 1.0, y: 1.0 }) - 1.5f64.acosh()).abs();
    let e3 = (translation_length(&ab).unwrap() - 2.0 * 1.5625f64.acosh()).abs();
    let product = Mobius::new(2.5, 1.5, 0.375, 0.625).unwrap();
    let matches = ab.approx_eq(&product, 1e-12);
    outcome(
        e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && matches,
        format!("τ(diag) err {e1:.1e}, d(i,1+i) err {e2:.1e}, τ(αβ) err {e3:.1e}, product matrix matches: {matches}"),
    )
}

fn lie_laws() -> Outcome {
    let start = Instant::now();
    let engine = BracketEngine::new(preset("punctured-torus"));
    let g = &engine.group;
    let words: Vec<Word> = (1..=4).flat_map(|n| g.reduced_words(n)).collect();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for a in &words {
        for b in &words {
            pairs += 1;
            let mut s = engine.bracket(a, b).unwrap();
            s.add(&engine.bracket(b, a).unwrap());
            if !s.is_zero() {
                failures.push(format!("[{a},{b}] + [{b},{a}] = {s}"));
            }
        }
    }
    let skew = run_skew(&engine, 200, 42, 6).unwrap();
    let jacobi = run_jacobi(&engine, 50, 7, 4).unwrap();
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && skew.pass && jacobi.pass && elapsed < Duration::from_secs(300),
        format!(
            "{pairs} exhaustive pairs ({} skew failures{}), 200 seeded pairs ({} failures), 50 triples ({} failures), {:.1}s",
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default(),
            skew.failures,
            jacobi.failures,
            elapsed.as_secs_f64()
        ),
    )
}

/// Engine whose tube radius is twice the default for the pair.
fn doubled_radius(g: &SurfaceGroup, a: &Word, b: &Word) -> BracketEngine {
    let (x, y) = (AxisData::of_word(g, a).unwrap(), AxisData::of_word(g, b).unwrap());
    let o = g.basepoint;
    let radius = (x.tau / 2.0 + dist_point_geodesic(o, &x.axis)).max(y.tau / 2.0 + dist_point_geodesic(o, &y.axis))
        + g.tolerances.slack;
    BracketEngine::new(g.clone())
        .with_slack(g.tolerances.slack + radius)
        .with_options(SearchOptions::for_group(g))
}

fn intersection_numbers() -> Outcome {
    let g = preset("punctured-torus");
    let engine = BracketEngine::new(g.clone());
    let w = |s: &str| g.parse_word(s).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for (x, y, expected) in [("a", "b", 1), ("a", "bb", 2), ("a", "a", 0)] {
        let (a, b) = (w(x), w(y));
        let n = engine.intersection_number(&a, &b).unwrap();
        let stable = if x == y {
            n
        } else {
            doubled_radius(&g, &a, &b).intersection_number(&a, &b).unwrap()
        };
        ok &= n == expected && stable == n;
        notes.push(format!("i({x},{y})={n}"));
    }
    let puncture = w("abAB");
    let mut puncture_ok = true;
    for c in g.classes_up_to(4).unwrap() {
        puncture_ok &= engine.intersection_number(&c.word, &puncture).unwrap() == 0
            && engine.intersection_number(&puncture, &c.word).unwrap() == 0;
    }
    ok &= puncture_ok;
    notes.push(format!("i(·,abAB)=0 on classes ≤ 4: {puncture_ok}"));
    outcome(ok, format!("{}, stable under doubled radius", notes.join(", ")))
}

fn noncancellation() -> Outcome {
    let engine = BracketEngine::new(preset("punctured-torus"));
    let (a, b) = (
        engine.group.parse_word("a").unwrap(),
        engine.group.parse_word("b").unwrap(),
    );
    let bundle = match constants_for_pair(&engine, &a, &b) {
        Ok(x) => x,
        Err(e) => return outcome(false, format!("constants failed: {e}")),
    };
    let ms = [bundle.m0 as u32 + 1, bundle.m0 as u32 + 2];
    let rows = match noncancellation_experiment(&engine, &a, &b, &ms, Some(&bundle), Sampling::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("experiment failed: {e}")),
    };
    let ok = rows.iter().all(|r| {
        r.distinct_classes == 1
            && r.coefficients.iter().all(|k| k.unsigned_abs() == r.m as u64)
            && r.quasi_ok
            && r.window_ok == Some(true)
    });
    let summary: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "m={}: {} class, coeff {:?}, quasi {}, window {:?}",
                r.m, r.distinct_classes, r.coefficients, r.quasi_ok, r.window_ok
            )
        })
        .collect();
    outcome(
        ok,
        format!(
            "K={:.4} C={:.4} M={:.4} τ0={:.6} m0={}; {}",
            bundle.k,
            bundle.c,
            bundle.m,
            bundle.tau0,
            bundle.m0,
            summary.join("; ")
        ),
    )
}

fn centrality() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut probe = |name: &str, candidate: &str, max_len: usize, expected: Verdict| {
        let engine = BracketEngine::new(preset(name));
        let sum = FormalSum::parse(&engine.group, candidate).unwrap();
        let r = probe_center(&engine, &sum, max_len).unwrap();
        // witnesses must re-verify with a single bracket
        let witness_ok = r.witness.as_ref().is_none_or(|w| {
            engine
                .bracket_sums(&sum, &FormalSum::single(w.class.clone(), 1))
                .unwrap()
                == w.bracket
        });
        ok &= r.verdict == expected && witness_ok;
        notes.push(format!("{name} {candidate}: {:?}", r.verdict));
    };
    let pants = preset("pair-of-pants");
    for p in &pants.peripherals {
        probe("pair-of-pants", &format!("<{p}>"), 5, Verdict::CentralUpToBound);
    }
    probe("punctured-torus", "<abAB>", 5, Verdict::CentralUpToBound);
    for gen in ["a", "b"] {
        probe("punctured-torus", &format!("<{gen}>"), 3, Verdict::NotCentral);
    }
    for gen in ["a", "b"] {
        probe("genus-2", &format!("<{gen}>"), 3, Verdict::NotCentral);
    }
    outcome(ok, notes.join(", "))
}

fn canonicalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let closed = preset("genus-2");
    let conj = |g: &SurfaceGroup, w: &Word, c: &Word| g.reduce(&c.concat(w).concat(&c.inverse()));
    let mut closed_bad = 0;
    for _ in 0..500 {
        let (w, c) = (random_word(&closed, &mut rng, 6), random_word(&closed, &mut rng, 4));
        if closed.canonical_conjugacy(&w).unwrap() != closed.canonical_conjugacy(&conj(&closed, &w, &c)).unwrap() {
            closed_bad += 1;
        }
    }
    let mut free_bad = 0;
    for name in ["punctured-torus", "pair-of-pants"] {
        let g = preset(name);
        for _ in 0..500 {
            let (w, c) = (random_word(&g, &mut rng, 6), random_word(&g, &mut rng, 4));
            let x = g.canonical_conjugacy(&w).unwrap();
            let cyc = w.free_cyclic_reduce();
            let rotations_agree = (0..cyc.len()).all(|k| g.canonical_conjugacy(&cyc.rotate(k)).unwrap() == x);
            if !rotations_agree || g.canonical_conjugacy(&conj(&g, &w, &c)).unwrap() != x {
                free_bad += 1;
            }
        }
    }
    // a class holding two different |traces| would be a false merge
    let mut merges = 0;
    let mut words_checked = 0;
    for name in ["punctured-torus", "pair-of-pants", "genus-2"] {
        let g = preset(name);
        let mut traces: BTreeMap<Word, f64> = BTreeMap::new();
        for w in (1..=6).flat_map(|n| g.reduced_words(n)) {
            words_checked += 1;
            let t = g.evaluate(&w).trace().abs();
            let c = g.canonical_conjugacy(&w).unwrap();
            let seen = *traces.entry(c.word).or_insert(t);
            if (seen - t).abs() > 1e-8 * seen.max(1.0) {
                merges += 1;
            }
        }
    }
    outcome(
        closed_bad == 0 && free_bad == 0 && merges == 0,
        format!("genus-2 conjugate pairs disagreeing {closed_bad}/500, free disagreements {free_bad}/1000, false merges {merges} over {words_checked} words"),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("axis of a product", axis_of_product),
        ("worked constants", worked_constants),
        ("skew-symmetry and Jacobi", lie_laws),
        ("intersection numbers", intersection_numbers),
        ("non-cancellation of powers", noncancellation),
        ("centrality probes", centrality),
        ("conjugacy canonical forms", canonicalization),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {} {}: {} [{:.1}s] {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
