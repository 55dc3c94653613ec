//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lozi_lab::classify::{classify_parameters, ClassifyBudgets, LapSignal, Regime};
use lozi_lab::cli::{analyze, CommonArgs, RunConfig};
use lozi_lab::geom::{orient, Chain, point_in_polygon, split_at_fold, Containment, Fold, Point, Polyline, SimplePolygon};
use lozi_lab::manifold::{
    axis_crossings, homoclinic_search, image_of_polyline, local_arc_epsilon, periodic_homoclinic_search, unstable_manifold,
    verify_simple, Branch, HomoclinicResult,
};
use lozi_lab::map::{periodic_orbits, NumericMode, Params};
use lozi_lab::numeric::Sign;
use lozi_lab::trap::{
    area_ledger, construct_t, construct_t_from, ell_from_seed, iterate_d, polygon_image, segment_meets_manifold_only_at_ends, trapping_index,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn exact(a: &str, b: &str) -> Result<Params, String> {
    ok(Params::from_text(a, b, NumericMode::Exact))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    if e > limit {
        return Err(format!("took {:.1} s, limit {} s", e.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

fn exact_algebra() -> Outcome {
    let t = Instant::now();
    let mut n = 0;
    for j in 1..=20 {
        let b = ratio(j, 21);
        for i in 1..=20 {
            // a spans (1 − b, 1 + b), inside the period-two band
            let a = &(ratio(1, 1) - &b) + &(&b * ratio(2 * i, 21));
            let p = ok(Params::new(a.clone(), b.clone(), NumericMode::Exact))?;
            ensure!(p.flags().standard() && p.flags().period_two, "({a}, {b}) is not in the period-two band");
            let (x, y) = ok(p.fixed_points())?;
            ensure!(ok(p.step(&x))? == x, "L(X) ≠ X at ({a}, {b})");
            ensure!(ok(p.step(&y))? == y, "L(Y) ≠ Y at ({a}, {b})");
            let (pp, pq) = ok(p.period_two_orbit())?;
            ensure!(ok(p.step(&pp))? == pq && ok(p.step(&pq))? == pp, "P, P′ not a 2-cycle at ({a}, {b})");
            let e = ok(p.eigen_data())?;
            ensure!((&(&e.lambda_u + &e.lambda_s) + p.a()).is_zero(), "λu + λs ≠ −a at ({a}, {b})");
            ensure!((&(&e.lambda_u * &e.lambda_s) + p.b()).is_zero(), "λu λs ≠ −b at ({a}, {b})");
            n += 1;
        }
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{n} parameter pairs, {:.2} s", t.elapsed().as_secs_f64()))
}

fn closed_form_one_half() -> Outcome {
    let p = exact("1", "1/2")?;
    let (pp, pq) = ok(p.period_two_orbit())?;
    let want_p = Point::from_ratios(6, 5, -1, 5);
    let want_q = Point::from_ratios(-2, 5, 3, 5);
    ensure!(pp == want_p && pq == want_q, "P = {pp:?}, P′ = {pq:?}");
    ensure!(ok(p.step(&want_p))? == want_q && ok(p.step(&want_q))? == want_p, "direct map check failed");
    let orbits = ok(periodic_orbits(&p, 2))?;
    let two: Vec<_> = orbits.iter().filter(|o| o.period == 2).collect();
    ensure!(two.len() == 1, "expected one period-2 orbit, found {}", two.len());
    let pts = &two[0].points;
    let as_set = (pts.contains(&want_p) && pts.contains(&want_q)) && pts.len() == 2;
    ensure!(as_set, "itinerary {} gives {:?}", two[0].word, pts);
    Ok(format!("P = (6/5, −1/5), P′ = (−2/5, 3/5), itinerary {}", two[0].word))
}

/// Star-shaped polygon with one vertex per angular sector, rational to 1e-3.
fn random_polygon(rng: &mut ChaCha8Rng) -> Result<SimplePolygon, String> {
    let k = rng.gen_range(3..=12);
    let (cx, cy) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut v = Vec::with_capacity(k);
    for i in 0..k {
        let th = std::f64::consts::TAU * (i as f64 + rng.gen_range(0.1..0.9)) / k as f64;
        let r = rng.gen_range(0.5..2.0);
        let x = ((cx + r * th.cos()) * 1000.0).round() as i64;
        let y = ((cy + r * th.sin()) * 1000.0).round() as i64;
        v.push(Point::from_ratios(x, 1000, y, 1000));
    }
    ok(SimplePolygon::new(v))
}

fn area_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10c1);
    let params = [exact("1.06", "0.96")?, exact("1.4", "0.3")?, exact("1", "1/2")?, exact("1.6", "0.61")?];
    let mut crossing_fold = 0;
    for case in 0..500 {
        let p = &params[case % params.len()];
        let poly = random_polygon(&mut rng)?;
        let img = ok(polygon_image(p, &poly, 1))?;
        crossing_fold += (img.len() > poly.len()) as usize;
        ensure!(img.area() == &poly.area() * p.b(), "case {case}: area(L Q) ≠ b area(Q)");
    }
    let p = exact("1.06", "0.96")?;
    let m = ok(unstable_manifold(&p, 12))?;
    let mut tc = ok(construct_t_from(&p, &m))?;
    ok(tc.build_polygons(&p, &m))?;
    let d = tc.d.clone().ok_or("𝒟 missing")?;
    let its = ok(iterate_d(&p, &d, 10))?;
    let mut prev = d;
    for (j, it) in its.iter().enumerate() {
        let half = ok(polygon_image(&p, &prev, 1))?;
        ensure!(half.area() == &prev.area() * p.b(), "L^{}(𝒟): area law fails", 2 * j + 1);
        ensure!(it.area() == &half.area() * p.b(), "L^{}(𝒟): area law fails", 2 * j + 2);
        prev = it.clone();
    }
    Ok(format!("500 random polygons ({crossing_fold} split by the fold), {} iterates of 𝒟 ({} steps)", its.len(), 2 * its.len()))
}

fn trap_pipeline() -> Outcome {
    let t = Instant::now();
    let p = exact("1.06", "0.96")?;
    let v = classify_parameters(&p, &ClassifyBudgets::default());
    ensure!(
        matches!(v.regime, Regime::FiniteCrossings | Regime::FrakRMinusRCandidate),
        "classifier gives {:?}",
        v.regime
    );
    let m = ok(unstable_manifold(&p, 12))?;
    let mut tc = ok(construct_t(&p, 12))?;
    ok(tc.build_polygons(&p, &m))?;
    let d = tc.d.clone().ok_or("𝒟 missing")?;
    let k = tc.k.clone().ok_or("𝒦 missing")?;
    ensure!(ok(segment_meets_manifold_only_at_ends(&tc.s, &tc.t, &m))?, "ST meets W^u away from S, T");
    let l2 = ok(polygon_image(&p, &d, 2))?;
    ensure!(ok(lozi_lab::geom::contains_polygon(&d, &l2, false))?, "L²𝒟 ⊄ 𝒟");
    let ti = ok(trapping_index(&p, &d, 50))?;
    let ledger = ok(area_ledger(&p, &d, &k, ti))?;
    ensure!(ledger.identity_holds && ledger.area_law_holds, "area identity fails: {ledger:?}");
    let (pp, pq) = ok(p.period_two_orbit())?;
    let its = ok(iterate_d(&p, &d, ti))?;
    // P sits in the even iterates, P′ in the odd ones
    for (j, poly) in std::iter::once(&d).chain(its.iter()).enumerate() {
        ensure!(ok(point_in_polygon(&pp, poly))? == Containment::Interior, "P not inside L^{}(𝒟)", 2 * j);
        let odd = ok(polygon_image(&p, poly, 1))?;
        ensure!(ok(point_in_polygon(&pq, &odd))? == Containment::Interior, "P′ not inside L^{}(𝒟)", 2 * j + 1);
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{:?} regime, trapping index {ti}, {} vertices in 𝒟, {:.1} s", v.regime, d.len(), t.elapsed().as_secs_f64()))
}

fn r_consistency() -> Outcome {
    let t = Instant::now();
    let p = exact("1", "1/2")?;
    let cl = ok(axis_crossings(&p, 100))?;
    ensure!(cl.only_z_and_z_inverse(&ok(p.point_z())?, &ok(p.point_z_inverse())?), "extra axis crossings: {cl:?}");
    let h = ok(homoclinic_search(&p, 60, 60))?;
    ensure!(h == HomoclinicResult::NoneFound { u_depth: 60, s_depth: 60 }, "homoclinic search gives {h:?}");
    let v = classify_parameters(&p, &ClassifyBudgets::default());
    let seed = ok(v.certificate.as_ref().ok_or("no certificate")?.conv_zr_polygon())?;
    let ell = ok(ell_from_seed(&p, &seed, 60))?;
    let first = ell.iterates.iter().find(|it| it.diameter < 1e-6).map(|it| it.k);
    ensure!(first.is_some(), "diameter {} after 60 iterates", ell.iterates.last().unwrap().diameter);
    ensure!(ell.p_in_all && ell.p_prime_in_left, "ℓ approximation lost P or P′");
    within(t, Duration::from_secs(60))?;
    Ok(format!("depth 100 census clean, 60/60 no witness, diameter < 1e-6 at L^{}, {:.1} s", 2 * first.unwrap(), t.elapsed().as_secs_f64()))
}

fn counterexample() -> Outcome {
    let t = Instant::now();
    let p = exact("1.6", "0.61")?;
    let six: Vec<_> = ok(periodic_orbits(&p, 6))?.into_iter().filter(|o| o.period == 6 && o.is_saddle()).collect();
    ensure!(!six.is_empty(), "no period-six saddle");
    let witness = six.iter().find_map(|o| match periodic_homoclinic_search(&p, o, 4, 4, &ClassifyBudgets::default().budget) {
        Ok(r) if r.has_transversal_witness() => Some(o.word.clone()),
        _ => None,
    });
    ensure!(witness.is_some(), "no transversal witness for {} period-six saddles", six.len());
    let v = classify_parameters(&p, &ClassifyBudgets::default());
    ensure!(v.regime == Regime::PositiveEntropySignal, "classifier gives {:?}", v.regime);
    let lap = v.lap_growth.as_ref().ok_or("no lap growth")?;
    ensure!(lap.signal == LapSignal::Positive, "lap signal {:?}", lap.signal);
    within(t, Duration::from_secs(120))?;
    Ok(format!("{} period-six saddles, witness on {}, lap slope {:.3}, {:.1} s", six.len(), witness.unwrap(), lap.slope, t.elapsed().as_secs_f64()))
}

fn convex_oracle(q: &Point, hull: &[Point]) -> Result<Containment, String> {
    let mut on_edge = false;
    for i in 0..hull.len() {
        match ok(orient(&hull[i], &hull[(i + 1) % hull.len()], q))? {
            Sign::Negative => return Ok(Containment::Exterior),
            Sign::Zero => on_edge = true,
            Sign::Positive => {}
        }
    }
    Ok(if on_edge { Containment::Boundary } else { Containment::Interior })
}

fn property_suites() -> Outcome {
    let pairs = [exact("1.06", "0.96")?, exact("1", "1/2")?];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in &pairs {
        let m = ok(unstable_manifold(p, 12))?;
        ok(verify_simple(&m))?;
        for b in [Branch::UPlus, Branch::UMinus] {
            for w in m.branch(b).windows(2) {
                ensure!(ok(image_of_polyline(p, &w[0].polyline, 2))? == w[1].polyline, "L²(arc {}) ≠ arc {}", w[0].depth, w[1].depth);
            }
        }
        let qs: Vec<Point> = m.branch(Branch::UPlus).iter().take(5).chain(m.branch(Branch::UMinus).iter().take(5)).map(|a| a.polyline.vertices()[0].midpoint(&a.polyline.vertices()[1])).collect();
        ensure!(qs.len() == 10, "only {} sample points", qs.len());
        for q in &qs {
            let e = ok(local_arc_epsilon(p, q, 12))?;
            ensure!(e > 0.0, "ε = {e}");
        }
        let folds = [Fold::YAxis, Fold::XAxis, Fold::PreimageOfYAxis { a: p.a().clone() }];
        for _ in 0..50 {
            let v: Vec<Point> = (0..rng.gen_range(2..8)).map(|_| Point::from_ratios(rng.gen_range(-300..300), 100, rng.gen_range(-300..300), 100)).collect();
            let Ok(line) = Polyline::new(v) else { continue };
            for f in &folds {
                let once = ok(split_at_fold(&line, f))?;
                ensure!(ok(split_at_fold(&once, f))? == once, "split_at_fold is not idempotent");
            }
        }
    }
    for (a, b) in [("1", "1/2"), ("1.06", "0.96"), ("1.6", "0.61"), ("1.4", "0.3")] {
        let p = exact(a, b)?;
        let x = ok(p.fixed_point_x())?;
        if let HomoclinicResult::Witness(w) = ok(homoclinic_search(&p, 6, 6))? {
            ensure!(w.point != x, "homoclinic search reported X at ({a}, {b})");
        }
    }
    let mut agree = 0;
    for _ in 0..1000 {
        let pts: Vec<Point> = (0..rng.gen_range(3..10)).map(|_| Point::from_ratios(rng.gen_range(-20..20), 4, rng.gen_range(-20..20), 4)).collect();
        let Ok(hull) = lozi_lab::geom::convex_hull(&pts) else { continue };
        let Ok(poly) = SimplePolygon::new(hull.clone()) else { continue };
        let q = if rng.gen_bool(0.2) { hull[0].midpoint(&hull[1]) } else { Point::from_ratios(rng.gen_range(-24..24), 4, rng.gen_range(-24..24), 4) };
        ensure!(ok(point_in_polygon(&q, &poly))? == convex_oracle(&q, poly.vertices())?, "point_in_polygon disagrees with the convex oracle");
        agree += 1;
    }
    ensure!(agree >= 900, "only {agree} convex cases generated");
    Ok(format!("injectivity, recurrence, ε, fold idempotence, X exclusion, {agree} convex containment cases"))
}

fn determinism() -> Outcome {
    let args = CommonArgs { a: Some("1.06".into()), b: Some("0.96".into()), ..Default::default() };
    let cfg = ok(RunConfig::resolve(&args, Some("1")))?;
    let (_, first, c1) = analyze(&cfg);
    let (_, second, c2) = analyze(&cfg);
    ensure!(c1 == 0 && c2 == 0, "exit codes {c1}, {c2}");
    ensure!(first.iter().any(|(n, _)| n == "report.json") && first.iter().any(|(n, _)| n == "manifold.csv"), "missing JSON or CSV output");
    ensure!(first == second, "outputs differ between runs");
    let bytes: usize = first.iter().map(|(_, t)| t.len()).sum();
    Ok(format!("{} files, {bytes} bytes identical", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exact algebra on a 20×20 grid", exact_algebra),
        ("closed forms at (1, 1/2)", closed_form_one_half),
        ("area law", area_law),
        ("trap pipeline at (1.06, 0.96)", trap_pipeline),
        ("consistency at (1, 1/2)", r_consistency),
        ("counterexample at (1.6, 0.61)", counterexample),
        ("property suites", property_suites),
        ("determinism of analyze", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
