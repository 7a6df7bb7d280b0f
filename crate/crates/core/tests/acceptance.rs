//! Acceptance suite: ten criteria, each printed as one PASS/FAIL line.
//!
//! Each criterion returns whether it passed, a note, and a digest of every
//! report it produced; criterion 10 reruns the first nine and compares the
//! digests byte for byte.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use richlines_core::embed::{
    dagger_flat, dagger_vec, iota_inv_vec, iota_vec, lift_dependent_vectors, real_image,
    trap_in_hyperplane,
};
use richlines_core::harness::generate::{
    gen_generic, gen_grid, gen_hyperplane_planted, gen_random, gen_random_lines, Sample,
};
use richlines_core::harness::sweep::scaling_sweep;
use richlines_core::harness::trichotomy::{
    verify_cheap_corollary, verify_trichotomy, Constants, Quantity,
};
use richlines_core::incidence::{enumerate_rich_lines, refine_bipartite, IncidenceGraph};
use richlines_core::partition::{build_partition, cell_visit_stats, restrict_partition, Visits};
use richlines_core::{Error, Field, Flat, GaussianRational, Line, Point, Rational};

struct Outcome {
    pass: bool,
    note: String,
    digest: String,
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn line_out(text: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").unwrap();
    out.flush().unwrap();
}

// ---------------------------------------------------------------------------
// Independent oracles

/// `true` iff `c - a` is a scalar multiple of `b - a` (with `a != b`),
/// checked coordinate by coordinate without any library line type.
fn collinear<F: Field>(a: &Point<F>, b: &Point<F>, c: &Point<F>) -> bool {
    let u: Vec<F> = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| y.clone() - x.clone())
        .collect();
    let v: Vec<F> = a
        .coords()
        .iter()
        .zip(c.coords())
        .map(|(x, y)| y.clone() - x.clone())
        .collect();
    let t = u
        .iter()
        .position(|x| !x.is_zero())
        .expect("distinct points");
    let lambda = v[t].clone() / u[t].clone();
    u.iter()
        .zip(&v)
        .all(|(x, y)| lambda.clone() * x.clone() == *y)
}

/// Rich lines as sets of point indices: for every pair, recount all points
/// on the line through it.
fn naive_rich<F: Field>(points: &[Point<F>], r: usize) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let on: BTreeSet<usize> = (0..points.len())
                .filter(|&k| k == i || k == j || collinear(&points[i], &points[j], &points[k]))
                .collect();
            if on.len() >= r {
                out.insert(on);
            }
        }
    }
    out
}

/// The library's rich lines, converted to incident index sets.
fn library_rich<F: Field>(
    points: &[Point<F>],
    r: usize,
) -> (BTreeSet<BTreeSet<usize>>, bool, String) {
    let set = enumerate_rich_lines(points, r).unwrap();
    let mut counts_ok = true;
    let mut sets = BTreeSet::new();
    for (line, &count) in &set.entries {
        let on: BTreeSet<usize> = (0..points.len())
            .filter(|&k| line.contains(&points[k]))
            .collect();
        counts_ok &= on.len() == count;
        sets.insert(on);
    }
    counts_ok &= sets.len() == set.len();
    (sets, counts_ok, serde_json::to_string(&set).unwrap())
}

// ---------------------------------------------------------------------------
// Configurations shared by criteria 1 and 4

enum Config {
    Real(Vec<Point<Rational>>),
    Complex(Vec<Point<GaussianRational>>),
}

/// Fifty seeded configurations: n in 10..=40, d in {2, 3}, alternating
/// fields, small coordinate ranges so that many triples are collinear.
fn criterion_one_configs() -> Vec<(u64, Config)> {
    (0..50u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = rng.random_range(10..=40);
            let d = if seed % 4 < 2 { 2 } else { 3 };
            let config = if seed % 2 == 0 {
                let spread = if d == 2 { 7 } else { 4 };
                Config::Real(gen_random(n, d, spread, seed).unwrap())
            } else {
                let spread = if d == 2 { 3 } else { 2 };
                Config::Complex(gen_random(n, d, spread, seed).unwrap())
            };
            (seed, config)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut digest = String::new();
    let mut failures = Vec::new();
    let mut compared = 0;
    for (seed, config) in criterion_one_configs() {
        for r in [2, 3] {
            let (naive, (lib, counts_ok, text)) = match &config {
                Config::Real(p) => (naive_rich(p, r), library_rich(p, r)),
                Config::Complex(p) => (naive_rich(p, r), library_rich(p, r)),
            };
            compared += 1;
            if naive != lib || !counts_ok {
                failures.push(format!(
                    "seed {seed} r {r}: naive {} vs library {}",
                    naive.len(),
                    lib.len()
                ));
            }
            digest.push_str(&text);
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(10);
    Outcome {
        pass: failures.is_empty() && fast,
        note: format!(
            "{compared} comparisons, {} mismatches, {elapsed:.2?} (limit 10s) {failures:?}",
            failures.len()
        ),
        digest,
    }
}

fn criterion_2() -> Outcome {
    let g3: Vec<Point<Rational>> = gen_grid(3, 2).unwrap();
    let g4: Vec<Point<Rational>> = gen_grid(4, 2).unwrap();
    let l3 = enumerate_rich_lines(&g3, 3).unwrap();
    let l2 = enumerate_rich_lines(&g3, 2).unwrap();
    let mut ok = l3.len() == 8 && l2.len() == 20;
    let mut note = format!("3x3: |L3| = {}, |L2| = {}", l3.len(), l2.len());
    for r in 2..=4 {
        let (lib, counts_ok, _) = library_rich(&g4, r);
        let naive = naive_rich(&g4, r);
        ok &= counts_ok && lib == naive;
        note.push_str(&format!(
            "; 4x4 r={r}: {} (oracle {})",
            lib.len(),
            naive.len()
        ));
    }
    let digest = serde_json::to_string(&(l3, l2)).unwrap();
    Outcome {
        pass: ok,
        note,
        digest,
    }
}

fn random_gauss(rng: &mut ChaCha8Rng, d: usize) -> Vec<GaussianRational> {
    (0..d)
        .map(|_| {
            GaussianRational::new(
                Rational::new(rng.random_range(-9i64..=9), rng.random_range(1i64..=3)),
                Rational::new(rng.random_range(-9i64..=9), rng.random_range(1i64..=3)),
            )
        })
        .collect()
}

fn random_real(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m)
        .map(|_| Rational::new(rng.random_range(-9i64..=9), rng.random_range(1i64..=3)))
        .collect()
}

fn combine<F: Field>(coeffs: &[F], vecs: &[Vec<F>]) -> Vec<F> {
    let mut out = vec![F::zero(); vecs[0].len()];
    for (c, v) in coeffs.iter().zip(vecs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

fn line_through_origin(dir: &[GaussianRational]) -> Option<Line<GaussianRational>> {
    Line::from_point_direction(&Point::origin(dir.len()), dir).ok()
}

/// Brute-force complex-span membership: `u` lies in the span of `basis`
/// iff appending it does not raise the rank, computed by elimination here.
fn complex_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut m: Vec<Vec<GaussianRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone() / pivot.clone();
                let row = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn in_complex_span(u: &[GaussianRational], basis: &[Vec<GaussianRational>]) -> bool {
    let mut rows = basis.to_vec();
    let before = complex_rank(&rows);
    rows.push(u.to_vec());
    complex_rank(&rows) == before
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut digest = String::new();
    for d in [2usize, 3, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + d as u64);
        for trial in 0..200 {
            // (a) lines inside a random complex hyperplane H; pi0 is the real
            // image of H, optionally enlarged by one random real vector.
            let h_basis: Vec<Vec<GaussianRational>> =
                (0..d - 1).map(|_| random_gauss(&mut rng, d)).collect();
            if complex_rank(&h_basis) != d - 1 {
                continue;
            }
            let count = rng.random_range(1..=2 * d);
            let lines: Vec<Line<GaussianRational>> = (0..count)
                .filter_map(|_| {
                    let c = random_gauss(&mut rng, d - 1);
                    line_through_origin(&combine(&c, &h_basis))
                })
                .collect();
            let mut real_dirs: Vec<Vec<Rational>> = h_basis
                .iter()
                .flat_map(|b| {
                    let ib: Vec<GaussianRational> = b
                        .iter()
                        .map(|z| z.clone() * GaussianRational::i())
                        .collect();
                    [iota_vec(b), iota_vec(&ib)]
                })
                .collect();
            if rng.random_bool(0.5) {
                real_dirs.push(random_real(&mut rng, 2 * d));
            }
            let pi0 = Flat::linear(2 * d, real_dirs);
            if pi0.dim() == 2 * d {
                continue;
            }
            match trap_in_hyperplane(&lines, &pi0) {
                Ok(hyp) => {
                    let contains = lines
                        .iter()
                        .all(|l| in_complex_span(l.direction(), hyp.basis()));
                    if hyp.dim() != d - 1 || complex_rank(hyp.basis()) != d - 1 || !contains {
                        failures.push(format!("trap d={d} trial {trial}"));
                    }
                    digest.push_str(&serde_json::to_string(&hyp).unwrap());
                }
                Err(e) => failures.push(format!("trap d={d} trial {trial}: {e}")),
            }

            // (b) witnesses in a real subspace of dimension s <= d - 1.
            let s = rng.random_range(1..=d - 1);
            let w: Vec<Vec<Rational>> = (0..s).map(|_| random_real(&mut rng, 2 * d)).collect();
            let pi1 = Flat::linear(2 * d, w.clone());
            let mut wit = Vec::new();
            let mut wl = Vec::new();
            for _ in 0..rng.random_range(1..=2 * d) {
                let c = random_real(&mut rng, s);
                let v = combine(&c, &w);
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let z = iota_inv_vec(&v).unwrap();
                // Scale the line's direction by a random unit so the witness is
                // not the canonical direction itself.
                let scale = random_gauss(&mut rng, 1).remove(0);
                let dir: Vec<GaussianRational> = if scale.is_zero() {
                    z.clone()
                } else {
                    z.iter().map(|x| x.clone() * scale.clone()).collect()
                };
                wl.push(line_through_origin(&dir).unwrap());
                wit.push(v);
            }
            if !wl.is_empty() {
                match lift_dependent_vectors(&wl, &wit, &pi1) {
                    Ok(sub) => {
                        let contains = wl
                            .iter()
                            .all(|l| in_complex_span(l.direction(), sub.basis()));
                        if sub.dim() > d - 1 || !contains {
                            failures.push(format!("lift d={d} trial {trial}"));
                        }
                        digest.push_str(&serde_json::to_string(&sub).unwrap());
                    }
                    Err(e) => failures.push(format!("lift d={d} trial {trial}: {e}")),
                }
            }

            // (c) v in Pi implies the dagger of v lies in the dagger of Pi.
            let k = rng.random_range(1..2 * d);
            let pi_dirs: Vec<Vec<Rational>> =
                (0..k).map(|_| random_real(&mut rng, 2 * d)).collect();
            let pi = Flat::linear(2 * d, pi_dirs.clone());
            let pi_dagger = dagger_flat(&pi).unwrap();
            for _ in 0..3 {
                let c = random_real(&mut rng, k);
                let v = combine(&c, &pi_dirs);
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let vd = dagger_vec(&v).unwrap();
                // Independent check: v and its rotation i·v both lie in the
                // dagger of Pi.
                let iv = iota_vec(
                    &iota_inv_vec(&v)
                        .unwrap()
                        .iter()
                        .map(|z| z.clone() * GaussianRational::i())
                        .collect::<Vec<_>>(),
                );
                if !pi_dagger.contains_flat(&vd)
                    || !pi_dagger.contains_vector(&v)
                    || !pi_dagger.contains_vector(&iv)
                {
                    failures.push(format!("dagger d={d} trial {trial}"));
                }
            }
            digest.push_str(&serde_json::to_string(&pi_dagger).unwrap());
            // The real image of each line equals the dagger of its direction.
            for l in &lines {
                if real_image(l).flat != dagger_vec(&iota_vec(l.direction())).unwrap() {
                    failures.push(format!("image d={d} trial {trial}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(30),
        note: format!(
            "{} failures, {elapsed:.2?} (limit 30s) {:?}",
            failures.len(),
            &failures[..failures.len().min(5)]
        ),
        digest,
    }
}

/// Checks the refinement bounds from the raw edge lists.
fn refinement_ok<F: Field>(points: &[Point<F>], r: usize) -> (Option<bool>, String) {
    let set = enumerate_rich_lines(points, r).unwrap();
    let graph = IncidenceGraph::from_rich_lines(points, &set).unwrap();
    match refine_bipartite(&graph) {
        Err(Error::EmptyGraph) => (None, String::new()),
        Err(e) => panic!("refinement failed: {e}"),
        Ok(refined) => {
            let (a, b, e) = (graph.points.len(), graph.lines.len(), graph.edges.len());
            let kept = &refined.graph;
            let mut pdeg = vec![0usize; kept.points.len()];
            let mut ldeg = vec![0usize; kept.lines.len()];
            for &(p, l) in &kept.edges {
                pdeg[p] += 1;
                ldeg[l] += 1;
            }
            let ok = pdeg.iter().all(|&g| 4 * a * g >= e)
                && ldeg.iter().all(|&g| 4 * b * g >= e)
                && 2 * kept.edges.len() >= e
                && refined.all_bounds_hold();
            (Some(ok), serde_json::to_string(&refined).unwrap())
        }
    }
}

fn criterion_4() -> Outcome {
    let mut digest = String::new();
    let mut checked = 0;
    let mut empty = 0;
    let mut failures = Vec::new();
    let mut record = |label: String, (res, text): (Option<bool>, String)| {
        match res {
            None => empty += 1,
            Some(ok) => {
                checked += 1;
                if !ok {
                    failures.push(label);
                }
            }
        }
        digest.push_str(&text);
    };
    for (seed, config) in criterion_one_configs() {
        for r in [2, 3, 4] {
            let res = match &config {
                Config::Real(p) => refinement_ok(p, r),
                Config::Complex(p) => refinement_ok(p, r),
            };
            record(format!("config {seed} r {r}"), res);
        }
    }
    for k in 2..=8 {
        let g: Vec<Point<Rational>> = gen_grid(k, 2).unwrap();
        for r in [2, 3, 4] {
            record(format!("grid {k} r {r}"), refinement_ok(&g, r));
        }
    }
    Outcome {
        pass: failures.is_empty() && checked > 0,
        note: format!(
            "{checked} graphs refined, {empty} without rich lines, failures {failures:?}"
        ),
        digest,
    }
}

/// Criteria 5 and 6 share the partitions.
fn criteria_5_6() -> (Outcome, Outcome) {
    let start = Instant::now();
    let points: Vec<Point<Rational>> = gen_generic(1024, 4, 5).unwrap();
    let delta = q("1/20");
    let mut parts = Vec::new();
    let mut ok5 = true;
    let mut note5 = String::new();
    let mut digest5 = String::new();
    for j in 1..=6usize {
        let part = build_partition(&points, j, &delta, 0).unwrap();
        let bound = Rational::from(1024) * q("11/20").pow(j as u32);
        let max = part.max_cell_size();
        // Recount cells from scratch: every point is in exactly one cell.
        let assigned: usize =
            part.cells.values().map(Vec::len).sum::<usize>() + part.boundary.len();
        let fits = Rational::from(max) <= bound
            && part.cells.len() <= 1 << j
            && assigned == 1024
            && part.boundary.is_empty();
        ok5 &= fits;
        note5.push_str(&format!(
            "j={j}: cells {} max {max} bound {:.1} D {}; ",
            part.cells.len(),
            bound.to_f64(),
            part.total_degree
        ));
        digest5.push_str(&serde_json::to_string(&part).unwrap());
        parts.push(part);
    }
    let t5 = start.elapsed();
    ok5 &= t5 < Duration::from_secs(60);
    note5.push_str(&format!("{t5:.2?} (limit 60s)"));

    let lines = gen_random_lines::<Rational>(100, 4, 6).unwrap();
    let mut ok6 = true;
    let mut note6 = String::new();
    let mut digest6 = String::new();
    for part in &parts {
        let stats = cell_visit_stats(&lines, part).unwrap();
        ok6 &= stats.within_degree_bound() && stats.contained == 0;
        // Oracle: sign changes of the restricted product at sampled
        // parameters never exceed the Sturm count of distinct roots.
        for (line, visits) in lines.iter().zip(&stats.visits).take(20) {
            let poly = restrict_partition(line, part).unwrap();
            ok6 &= poly.degree().unwrap_or(0) <= part.total_degree as usize;
            let mut changes = 0;
            let mut prev = 0;
            for t in -400i64..=400 {
                let s = poly.eval(&Rational::new(t, 4)).signum();
                if s != 0 && prev != 0 && s != prev {
                    changes += 1;
                }
                if s != 0 {
                    prev = s;
                }
            }
            match visits {
                Visits::Components(c) => ok6 &= changes < *c,
                Visits::Contained => ok6 = false,
            }
        }
        note6.push_str(&format!(
            "D={} max {}; ",
            stats.total_degree, stats.max_components
        ));
        digest6.push_str(&serde_json::to_string(&stats).unwrap());
    }
    (
        Outcome {
            pass: ok5,
            note: note5,
            digest: digest5,
        },
        Outcome {
            pass: ok6,
            note: note6,
            digest: digest6,
        },
    )
}

fn planted_case<F: Sample>(n: usize, d: usize, seed: u64) -> (bool, String) {
    let planted = gen_hyperplane_planted::<F>(n, n, d, seed).unwrap();
    let rep = verify_trichotomy(
        &planted.points,
        2,
        &q("1/10"),
        &Constants::default(),
        &q("1"),
    )
    .unwrap();
    let ok = rep.concentration.as_ref().is_some_and(|c| {
        c.flat == planted.hyperplane
            && c.fraction == Rational::from(1)
            && c.members.len() == n
            && c.members
                .iter()
                .all(|&i| planted.hyperplane.contains_point(&planted.points[i]))
    });
    (ok, rep.to_json())
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut digest = String::new();
    let mut cases = 0;
    for n in [50, 200] {
        for d in [2, 3] {
            let seed = (n * 10 + d) as u64;
            let (a, ta) = planted_case::<Rational>(n, d, seed);
            let (b, tb) = planted_case::<GaussianRational>(n, d, seed);
            ok &= a && b;
            cases += 2;
            digest.push_str(&ta);
            digest.push_str(&tb);
        }
    }
    Outcome {
        pass: ok,
        note: format!("{cases} planted cases"),
        digest,
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let ks = [4, 6, 8, 10, 12];
    let table = scaling_sweep(|k| gen_grid::<Rational>(k, 2), &ks, 3, 2).unwrap();
    let mut ok = true;
    for row in &table.rows {
        let pts: Vec<Point<Rational>> = gen_grid(row.k, 2).unwrap();
        ok &= naive_rich(&pts, 3).len() == row.rich_count;
    }
    let spread = table.ratio_spread();
    ok &= spread.as_ref().is_some_and(|s| *s < Rational::from(4));
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    let ratios: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("{:.3}", r.normalized_ratio.to_f64()))
        .collect();
    Outcome {
        pass: ok,
        note: format!(
            "ratios {ratios:?}, spread {:.3}, {elapsed:.2?} (limit 120s)",
            spread.map_or(f64::INFINITY, |s| s.to_f64())
        ),
        digest: table.to_csv(),
    }
}

fn criterion_9() -> Outcome {
    let grid: Vec<Point<Rational>> = gen_grid(3, 2).unwrap();
    let rep = verify_cheap_corollary(&grid, 9, &q("1/2"), &Constants::default(), &q("1")).unwrap();
    let exact =
        rep.rho == Some(Quantity::Exact(q("1"))) && rep.epsilon == Quantity::Exact(q("1/2"));
    let big: Vec<Point<Rational>> = gen_grid(6, 2).unwrap();
    let violated = matches!(
        verify_cheap_corollary(&big, 5, &q("1/2"), &Constants::default(), &q("1")),
        Err(Error::CutoffViolated { r: 5, n: 36 })
    );
    // r = n^{eps0} exactly is allowed.
    let boundary =
        verify_cheap_corollary(&big, 6, &q("1/2"), &Constants::default(), &q("1")).is_ok();
    Outcome {
        pass: exact && violated && boundary,
        note: format!(
            "rho {:?}, epsilon {:?}, cutoff violation detected: {violated}",
            rep.rho, rep.epsilon
        ),
        digest: rep.to_json(),
    }
}

fn report(index: usize, name: &str, outcome: &Outcome) {
    let status = if outcome.pass { "PASS" } else { "FAIL" };
    line_out(&format!(
        "criterion {index:>2} {status} {name}: {}",
        outcome.note
    ));
}

fn run_all() -> Vec<(&'static str, Outcome)> {
    let (c5, c6) = criteria_5_6();
    vec![
        ("rich-line oracle equivalence", criterion_1()),
        ("grid ground truth", criterion_2()),
        ("embedding containments", criterion_3()),
        ("bipartite refinement bounds", criterion_4()),
        ("partition occupancy", c5),
        ("cell visits within D + 1", c6),
        ("planted concentration", criterion_7()),
        ("grid scaling sweep", criterion_8()),
        ("corollary substitutions", criterion_9()),
    ]
}

#[test]
fn acceptance() {
    let first = run_all();
    for (i, (name, outcome)) in first.iter().enumerate() {
        report(i + 1, name, outcome);
    }
    let second = run_all();
    let differing: Vec<usize> = first
        .iter()
        .zip(&second)
        .enumerate()
        .filter(|(_, (a, b))| a.1.digest != b.1.digest || a.1.pass != b.1.pass)
        .map(|(i, _)| i + 1)
        .collect();
    let determinism = Outcome {
        pass: differing.is_empty(),
        note: format!("rerun of criteria 1-9, differing: {differing:?}"),
        digest: String::new(),
    };
    report(10, "determinism", &determinism);
    let failed: Vec<usize> = first
        .iter()
        .map(|(_, o)| o.pass)
        .chain([determinism.pass])
        .enumerate()
        .filter(|(_, p)| !p)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
