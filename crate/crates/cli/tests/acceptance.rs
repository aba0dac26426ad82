//! The ten acceptance criteria at their stated tolerances and runtime bounds.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fuchsian_core::freewords::{
    enumerate_reduced_words, theta, verify_free_generation, Letter, Word, WordFamily,
};
use fuchsian_core::limits::{
    count_orbit_in_ball, enumerate_subgroup, estimate_limit_point, intersect_subgroups,
    matrix_coincidences, qi_check, radial_check,
};
use fuchsian_core::mobius::{
    apply, classify, dist_to_ray, hyp_dist, GeodesicRay, GroupElement, IsometryClass, Point,
};
use fuchsian_core::rational::{int, rat};
use fuchsian_core::schottky::{
    default_generators, verify_ping_pong, word_to_element, Circle, CircleName, SchottkyData,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit, || {
        format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
    })
}

const KNOWN_VIOLATIONS: [&str; 6] = [
    "degenerate-circle",
    "disks-not-disjoint",
    "base-point-not-exterior",
    "not-loxodromic",
    "image-circle-mismatch",
    "side-mapping-failed",
];

fn gap_to_nearest(sd: &SchottkyData, i: usize) -> num_rational::BigRational {
    let c = &sd.circles()[i];
    sd.circles()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, o)| {
            if o.lo() > c.hi() {
                o.lo() - c.hi()
            } else {
                c.lo() - o.hi()
            }
        })
        .min()
        .unwrap()
}

fn intervals_disjoint(sd: &SchottkyData) -> bool {
    let cs = sd.circles();
    (0..4).all(|i| (i + 1..4).all(|j| cs[i].hi() < cs[j].lo() || cs[j].hi() < cs[i].lo()))
}

fn ping_pong() -> Outcome {
    let start = Instant::now();
    let sd = default_generators();
    let cert = verify_ping_pong(&sd).map_err(|v| format!("defaults rejected: {v}"))?;
    let mut outcomes = Vec::new();
    for (i, name) in CircleName::ALL.iter().enumerate() {
        let c = &sd.circles()[i];
        let grown = Circle::new(
            c.center.clone(),
            &c.radius + gap_to_nearest(&sd, i) * rat(1, 10),
        );
        let mutated = sd.with_circle(*name, grown);
        match verify_ping_pong(&mutated) {
            Err(v) => {
                check(KNOWN_VIOLATIONS.contains(&v.name()), || {
                    format!("unnamed violation {v}")
                })?;
                outcomes.push(format!("{name}: {}", v.name()));
            }
            Ok(_) => {
                // A pass must survive an independent re-check of the geometry.
                check(intervals_disjoint(&mutated), || {
                    format!("{name}: certified with overlapping disks")
                })?;
                outcomes.push(format!("{name}: certified"));
            }
        }
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!(
        "{} exact checks; +10% gap mutations -> {}",
        cert.checks.len(),
        outcomes.join(", ")
    ))
}

fn nontrivial_words() -> Vec<Word> {
    enumerate_reduced_words(8).into_iter().skip(1).collect()
}

fn desk_freeness() -> Outcome {
    let start = Instant::now();
    let sd = default_generators();
    let words = nontrivial_words();
    // 4 * (3^8 - 1) / 2 = 13120 nontrivial reduced words of length <= 8.
    check(words.len() == 13120, || {
        format!("{} words enumerated", words.len())
    })?;
    if let Some(w) = words.iter().find(|w| word_to_element(w, &sd).is_identity()) {
        return Err(format!("{w} evaluates to the identity"));
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "{} nontrivial words, none is the identity",
        words.len()
    ))
}

fn purely_loxodromic() -> Outcome {
    let sd = default_generators();
    let words = nontrivial_words();
    for w in &words {
        let class = classify(&word_to_element(w, &sd)).map_err(|e| format!("{w}: {e}"))?;
        check(class == IsometryClass::Loxodromic, || {
            format!("{w} is {class:?}")
        })?;
    }
    Ok(format!(
        "{} elements, all loxodromic by exact trace",
        words.len()
    ))
}

fn free_generation() -> Outcome {
    let start = Instant::now();
    let report = verify_free_generation(&WordFamily::standard(6), 4).map_err(|e| e.to_string())?;
    if let Some(c) = &report.counterexample {
        return Err(format!("counterexample {}: {}", c.symbol_word, c.reason));
    }
    // Nonempty reduced words over 12 symbols with at most 4 syllables.
    let expected: usize = (1..=4).map(|k| 12 * 11usize.pow(k - 1)).sum();
    check(report.symbol_words_checked == expected, || {
        format!(
            "{} symbol words checked, expected {expected}",
            report.symbol_words_checked
        )
    })?;
    within(start.elapsed(), 10.0)?;
    Ok(format!(
        "{} symbol words, {} pair reductions keep their outer letters",
        report.symbol_words_checked, report.pair_reductions_checked
    ))
}

fn intersection() -> Outcome {
    let start = Instant::now();
    let sd = default_generators();
    let fam = WordFamily::standard(6);
    let th = |n| theta(n, &fam).unwrap();
    let g1 = enumerate_subgroup(&[th(1), th(3), th(5)], 3).map_err(|e| e.to_string())?;
    let g2 = enumerate_subgroup(&[th(2), th(4), th(6)], 3).map_err(|e| e.to_string())?;
    let both = intersect_subgroups(&g1, &g2);
    let words: Vec<String> = both.iter().map(|w| w.to_string()).collect();
    check(words == ["e"], || format!("intersection {words:?}"))?;
    let pairs = matrix_coincidences(&g1, &g2, &sd);
    check(pairs == vec![(Word::identity(), Word::identity())], || {
        format!("matrix coincidences {pairs:?}")
    })?;
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "|G1| = {}, |G2| = {}, intersection [e], matrices agree",
        g1.len(),
        g2.len()
    ))
}

fn radial_limit_point() -> Outcome {
    let sd = default_generators();
    let fam = WordFamily::standard(12);
    let eta = estimate_limit_point(&fam, &sd, 12, 1e-10).map_err(|e| e.to_string())?;
    check(eta.width() < 1e-10, || format!("width {}", eta.width()))?;
    let rw = radial_check(&eta, &fam, &sd, 12).map_err(|e| e.to_string())?;
    check(rw.per_n.len() == 12, || {
        format!("{} distances", rw.per_n.len())
    })?;
    check(rw.per_n.iter().all(|(_, d)| d.is_finite()), || {
        "non-finite distance".into()
    })?;
    check(rw.last_quartile_max <= rw.constant_c, || {
        format!(
            "last quartile {} above c {}",
            rw.last_quartile_max, rw.constant_c
        )
    })?;

    let finer = estimate_limit_point(&fam, &sd, 12, 1e-11).map_err(|e| e.to_string())?;
    let c_finer = radial_check(&finer, &fam, &sd, 12)
        .map_err(|e| e.to_string())?
        .constant_c;
    check((c_finer - rw.constant_c).abs() < 1e-6, || {
        format!(
            "c moved from {} to {c_finer} under tol 1e-11",
            rw.constant_c
        )
    })?;
    // The true eta lies in every deeper nested interval; refining the bracket
    // by one more prefix must leave c in place.
    let deeper = estimate_limit_point(&WordFamily::standard(13), &sd, 13, 1e-11)
        .map_err(|e| e.to_string())?;
    check(
        eta.contains(&deeper.lower) && eta.contains(&deeper.upper),
        || "deeper bracket escapes the first".into(),
    )?;
    let c_deeper = radial_check(&deeper, &fam, &sd, 12)
        .map_err(|e| e.to_string())?
        .constant_c;
    let spread = (c_deeper - rw.constant_c).abs();
    check(spread < 1e-6, || {
        format!("c moved by {spread} under a deeper bracket")
    })?;
    Ok(format!(
        "eta = {:.12} (width {:.2e}), c = {:.6}, last-quartile max {:.2e}, refinement shift {spread:.1e}",
        rw.eta,
        eta.width(),
        rw.constant_c,
        rw.last_quartile_max
    ))
}

fn quasi_isometry() -> Outcome {
    let sd = default_generators();
    let qi = qi_check(&sd, 8).map_err(|e| e.to_string())?;
    check(qi.lower_alpha > 0.0, || {
        format!("lower_alpha {}", qi.lower_alpha)
    })?;
    let mut worst: f64 = 0.0;
    for letter in [Letter::A, Letter::B] {
        let g = Word::from_letters(vec![letter]);
        let step = word_to_element(&g, &sd).displacement();
        for n in 1..=20 {
            let d = word_to_element(&g.pow(n), &sd).displacement();
            worst = worst.max((d - n as f64 * step).abs());
        }
    }
    check(worst < 1e-9, || {
        format!("power displacement off by {worst}")
    })?;
    Ok(format!(
        "lower ({:.6}, {:.6}), upper ({:.6}, {:.6}), power error {worst:.1e}",
        qi.lower_alpha, qi.lower_beta, qi.upper_alpha, qi.upper_beta
    ))
}

/// Hyperbolic length of the geodesic segment from `p` to `q`, integrated
/// numerically (composite Simpson on `ds = |dz| / y`).
fn integrated_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    const STEPS: usize = 2000;
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let h = (b - a) / STEPS as f64;
        let mut s = f(a) + f(b);
        for k in 1..STEPS {
            s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    if (p.0 - q.0).abs() < 1e-9 {
        // Vertical segment, integrated in log y for accuracy.
        return simpson(&|_| 1.0, p.1.ln(), q.1.ln()).abs();
    }
    let c = (q.0 * q.0 + q.1 * q.1 - p.0 * p.0 - p.1 * p.1) / (2.0 * (q.0 - p.0));
    let a = p.1.atan2(p.0 - c);
    let b = q.1.atan2(q.0 - c);
    // On the semicircle, |dz| / y = d(phi) / sin(phi).
    simpson(&|phi: f64| 1.0 / phi.sin(), a, b).abs()
}

/// Distance to the ray by sampling it, then ternary search on the convex
/// distance profile around the best sample.
fn sampled_ray_distance(p: &Point, ray: &GeodesicRay) -> f64 {
    let f = |t: f64| hyp_dist(p, &ray.point_at(t)).unwrap();
    let span = 2.0 * hyp_dist(p, &ray.base()).unwrap() + 1.0;
    let n = 400;
    let step = span / n as f64;
    let best = (0..=n)
        .min_by(|&i, &j| f(i as f64 * step).total_cmp(&f(j as f64 * step)))
        .unwrap();
    let (mut lo, mut hi) = (
        (best as f64 - 1.0).max(0.0) * step,
        (best as f64 + 1.0) * step,
    );
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi))
}

fn random_point(rng: &mut StdRng) -> Point {
    Point::Interior {
        x: rng.random_range(-3.0..3.0),
        y: rng.random_range(0.1..3.0),
    }
}

fn random_element(rng: &mut StdRng) -> GroupElement {
    let mut g = GroupElement::identity();
    for k in 0..3 {
        let t = rat(rng.random_range(-9..=9), rng.random_range(1..=7));
        let one = || int(1);
        let zero = || int(0);
        let factor = if k % 2 == 0 {
            GroupElement::unimodular(one(), t, zero(), one())
        } else {
            GroupElement::unimodular(one(), zero(), t, one())
        };
        g = g.compose(&factor.unwrap());
    }
    assert!(g.determinant().is_one());
    g
}

fn metric() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut dist_err: f64 = 0.0;
    let mut ray_err: f64 = 0.0;
    let mut iso_err: f64 = 0.0;
    for i in 0..1000 {
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let (Point::Interior { x: px, y: py }, Point::Interior { x: qx, y: qy }) = (p, q) else {
            unreachable!()
        };
        let d = hyp_dist(&p, &q).unwrap();
        dist_err = dist_err.max((d - integrated_distance((px, py), (qx, qy))).abs());

        let endpoint = if i % 10 == 0 {
            Point::Infinity
        } else {
            Point::Boundary(rng.random_range(-4.0..4.0))
        };
        let ray = GeodesicRay::new(random_point(&mut rng), endpoint).unwrap();
        let r = dist_to_ray(&p, &ray).unwrap();
        ray_err = ray_err.max((r - sampled_ray_distance(&p, &ray)).abs());

        let g = random_element(&mut rng);
        let moved = hyp_dist(&apply(&g, &p), &apply(&g, &q)).unwrap();
        iso_err = iso_err.max((moved - d).abs());
    }
    check(dist_err < 1e-6, || format!("hyp_dist off by {dist_err}"))?;
    check(ray_err < 1e-6, || format!("dist_to_ray off by {ray_err}"))?;
    check(iso_err < 1e-9, || {
        format!("isometry invariance off by {iso_err}")
    })?;
    Ok(format!(
        "1000 instances: hyp_dist {dist_err:.1e}, dist_to_ray {ray_err:.1e}, invariance {iso_err:.1e}"
    ))
}

fn discreteness_count() -> Outcome {
    let sd = default_generators();
    let step = word_to_element(&"a".parse().unwrap(), &sd);
    let radius = 2.0 * step.displacement();
    let counted = count_orbit_in_ball(&sd, radius, 8).map_err(|e| e.to_string())?;
    // d <= 2l  <=>  cosh d <= 2 cosh^2 l - 1, decided exactly.
    let ch = step.cosh_displacement();
    let bound = &ch * &ch * int(2) - int(1);
    let brute = enumerate_reduced_words(8)
        .iter()
        .filter(|w| word_to_element(w, &sd).cosh_displacement() <= bound)
        .count();
    check(counted.count == brute, || {
        format!("count {} vs exhaustive {brute}", counted.count)
    })?;
    check(counted.complete, || {
        format!(
            "escape bound {} does not clear R = {radius}",
            counted.escape_bound
        )
    })?;
    check(counted.qi_predicts_complete, || {
        "QI envelope does not clear R".into()
    })?;
    Ok(format!(
        "R = {radius:.6}: {brute} orbit points, longer words start at distance {:.4}",
        counted.escape_bound
    ))
}

fn determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_fuchsian"))
            .arg("report")
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let (code1, first) = run();
    let (code2, second) = run();
    check(code1 == Some(0) && code2 == Some(0), || {
        format!("exit codes {code1:?}, {code2:?}")
    })?;
    check(first == second, || {
        "report output differs between runs".into()
    })?;
    Ok(format!("two runs, {} identical bytes", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("ping-pong certificate", ping_pong),
        ("desk-scale freeness", desk_freeness),
        ("purely loxodromic", purely_loxodromic),
        ("free generation of the theta family", free_generation),
        ("intersection triviality", intersection),
        ("shared radial limit point", radial_limit_point),
        ("quasi-isometry envelope", quasi_isometry),
        ("metric correctness", metric),
        ("discreteness count", discreteness_count),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(criterion))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
