//! Parameter classification, the finite-crossings certificate and entropy
//! signal estimators.

mod sweep;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{LabError, Result};
use crate::geom::{contains_polygon, convex_hull, BBox, Chain, Point, SimplePolygon};
use crate::manifold::{
    crossings_of, homoclinic_search_with_budget, periodic_homoclinic_search, unstable_manifold_with_budget,
    Branch, CrossingList, HomoclinicResult, UnstableManifold,
};
use crate::map::{periodic_orbits, Params, RegimeFlags};
use crate::numeric::Sign;
use crate::trap::{construct_t_from, trapping_index};

pub use sweep::{sweep, GridSpec, SweepRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    RCandidate,
    FrakRMinusRCandidate,
    FiniteCrossings,
    PositiveEntropySignal,
    OutOfScope,
    Unknown,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::RCandidate => "RCandidate",
            Regime::FrakRMinusRCandidate => "FrakRMinusRCandidate",
            Regime::FiniteCrossings => "FiniteCrossings",
            Regime::PositiveEntropySignal => "PositiveEntropySignal",
            Regime::OutOfScope => "OutOfScope",
            Regime::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyBudgets {
    /// Arc depth of the axis-crossing census.
    pub crossing_depth: usize,
    /// Trailing arcs without new crossings counted as finite-crossings evidence.
    pub finite_window: usize,
    pub homoclinic_u_depth: usize,
    pub homoclinic_s_depth: usize,
    /// Largest period searched for saddles with homoclinic points.
    pub orbit_cap: usize,
    /// Search depth for periodic saddles, in periods.
    pub periodic_depth: usize,
    pub lap_n_max: usize,
    pub lap_threshold: f64,
    pub max_trapping_index: usize,
    pub budget: Budget,
}

impl Default for ClassifyBudgets {
    fn default() -> Self {
        ClassifyBudgets {
            crossing_depth: 40,
            finite_window: 6,
            homoclinic_u_depth: 30,
            homoclinic_s_depth: 30,
            orbit_cap: 6,
            periodic_depth: 4,
            lap_n_max: 48,
            lap_threshold: 0.05,
            max_trapping_index: 50,
            budget: Budget { max_vertices: 5_000, ..Budget::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingEvidence {
    /// Only `Z` on `Ox` and `Z⁻¹` on `Oy`.
    OnlyZAndZInverse,
    /// No new crossing in the trailing window.
    Finite,
    /// New crossings keep appearing up to the census depth.
    Growing,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingCensus {
    pub depth: usize,
    pub requested_depth: usize,
    pub count: usize,
    pub last_arc: Option<usize>,
    pub evidence: CrossingEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicEvidence {
    pub word: String,
    pub period: usize,
    pub result: HomoclinicResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionVerdict {
    pub a: String,
    pub b: String,
    pub flags: RegimeFlags,
    pub regime: Regime,
    /// Depth stamp of the evidence behind `regime`.
    pub evidence_depth: usize,
    pub homoclinic: Option<HomoclinicResult>,
    pub periodic: Vec<PeriodicEvidence>,
    pub crossings: Option<CrossingCensus>,
    pub lap_growth: Option<LapGrowth>,
    pub certificate: Option<FiniteCrossingCertificate>,
    pub trapping_index: Option<usize>,
    pub notes: Vec<String>,
}

/// Largest depth `≤ depth` the budget allows.
fn manifold_within(params: &Params, depth: usize, budget: &Budget) -> Result<UnstableManifold> {
    let mut d = depth;
    loop {
        match unstable_manifold_with_budget(params, d, budget, true) {
            Err(LabError::BudgetExhausted { depth_reached, .. }) if depth_reached > 0 && depth_reached <= d => {
                d = depth_reached - 1;
            }
            r => return r,
        }
    }
}

fn homoclinic_within(params: &Params, u: usize, s: usize, budget: &Budget) -> Result<HomoclinicResult> {
    let (mut u, mut s) = (u, s);
    loop {
        match homoclinic_search_with_budget(params, u, s, budget) {
            Err(LabError::BudgetExhausted { .. }) if u + s > 0 => {
                u /= 2;
                s /= 2;
            }
            r => return r,
        }
    }
}

/// Census of axis crossings with its finiteness evidence.
pub fn crossing_census(m: &UnstableManifold, requested: usize, window: usize) -> Result<(CrossingList, CrossingCensus)> {
    let list = crossings_of(m)?;
    let last_arc = list.last_arc();
    let evidence = if list.only_z_and_z_inverse(&m.z, &m.z_inverse) {
        CrossingEvidence::OnlyZAndZInverse
    } else if m.depth >= window && last_arc.map_or(true, |l| l + window <= m.depth) {
        CrossingEvidence::Finite
    } else {
        CrossingEvidence::Growing
    };
    let census = CrossingCensus { depth: m.depth, requested_depth: requested, count: list.crossing_count(), last_arc, evidence };
    Ok((list, census))
}

pub fn classify_parameters(params: &Params, budgets: &ClassifyBudgets) -> RegionVerdict {
    let flags = params.flags();
    let mut v = RegionVerdict {
        a: params.a_rational().to_string(),
        b: params.b_rational().to_string(),
        flags,
        regime: Regime::Unknown,
        evidence_depth: 0,
        homoclinic: None,
        periodic: Vec::new(),
        crossings: None,
        lap_growth: None,
        certificate: None,
        trapping_index: None,
        notes: Vec::new(),
    };
    if !flags.standard() {
        v.regime = Regime::OutOfScope;
        return v;
    }
    if let Err(e) = run_pipeline(params, budgets, &mut v) {
        v.notes.push(format!("{}: {e}", e.kind()));
        if v.regime != Regime::PositiveEntropySignal {
            v.regime = Regime::Unknown;
        }
    }
    v
}

fn run_pipeline(params: &Params, budgets: &ClassifyBudgets, v: &mut RegionVerdict) -> Result<()> {
    let bud = &budgets.budget;
    let m = manifold_within(params, budgets.crossing_depth, bud)?;
    let (_, census) = crossing_census(&m, budgets.crossing_depth, budgets.finite_window)?;
    v.crossings = Some(census.clone());

    let h = homoclinic_within(params, budgets.homoclinic_u_depth, budgets.homoclinic_s_depth, bud)?;
    let x_witness = h.has_transversal_witness();
    v.homoclinic = Some(h);
    if x_witness {
        v.regime = Regime::PositiveEntropySignal;
        v.evidence_depth = budgets.homoclinic_u_depth.max(budgets.homoclinic_s_depth);
    }

    if !x_witness && budgets.orbit_cap > 0 {
        for orbit in periodic_orbits(params, budgets.orbit_cap)? {
            if !orbit.is_saddle() || orbit.degenerate || orbit.word == "R" {
                continue;
            }
            let r = match periodic_homoclinic_search(params, &orbit, budgets.periodic_depth, budgets.periodic_depth, bud) {
                Ok(r) => r,
                Err(LabError::BudgetExhausted { .. }) => continue,
                Err(e) => return Err(e),
            };
            let hit = r.has_transversal_witness();
            v.periodic.push(PeriodicEvidence { word: orbit.word.clone(), period: orbit.period, result: r });
            if hit {
                v.regime = Regime::PositiveEntropySignal;
                v.evidence_depth = budgets.periodic_depth;
                break;
            }
        }
    }

    let lap = lap_growth_entropy_estimate_with(params, budgets.lap_n_max, budgets.lap_threshold, bud)?;
    let positive_laps = lap.signal == LapSignal::Positive;
    v.lap_growth = Some(lap);
    if v.regime == Regime::PositiveEntropySignal {
        return Ok(());
    }
    if positive_laps {
        v.regime = Regime::PositiveEntropySignal;
        v.evidence_depth = budgets.lap_n_max;
        return Ok(());
    }
    if !v.flags.period_two {
        v.regime = Regime::Unknown;
        v.evidence_depth = census.depth;
        v.notes.push("no period-two orbit".into());
        return Ok(());
    }
    v.evidence_depth = census.depth;
    match census.evidence {
        CrossingEvidence::OnlyZAndZInverse | CrossingEvidence::Finite => {
            match certificate_from(params, &m, budgets.finite_window) {
                Ok(c) => v.certificate = Some(c),
                Err(e) => v.notes.push(format!("certificate: {e}")),
            }
            v.regime = if census.evidence == CrossingEvidence::OnlyZAndZInverse {
                Regime::RCandidate
            } else if v.certificate.is_some() {
                Regime::FiniteCrossings
            } else {
                Regime::Unknown
            };
            if v.regime == Regime::FiniteCrossings {
                attach_trapping_index(params, &m, budgets, v);
            }
        }
        CrossingEvidence::Growing => {
            v.regime = Regime::FrakRMinusRCandidate;
            attach_trapping_index(params, &m, budgets, v);
        }
    }
    Ok(())
}

fn attach_trapping_index(params: &Params, m: &UnstableManifold, budgets: &ClassifyBudgets, v: &mut RegionVerdict) {
    let r = construct_t_from(params, m).and_then(|mut tc| {
        tc.build_polygons(params, m)?;
        trapping_index(params, tc.d.as_ref().expect("built"), budgets.max_trapping_index)
    });
    match r {
        Ok(k) => v.trapping_index = Some(k),
        Err(e) => v.notes.push(format!("trap: {e}")),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteCrossingCertificate {
    /// `A = Z^{2m}`.
    pub a: Point,
    pub m: usize,
    pub depth: usize,
    pub conv_zr: Vec<Point>,
    pub conv_zl: Vec<Point>,
    /// `L(Conv ZR) = Conv ZL`.
    pub image_equals: bool,
    /// `L(Conv ZL) ⊆ Conv ZR`.
    pub image_contained: bool,
    pub zr_in_quadrant_4: bool,
    pub zl_in_quadrant_2: bool,
    /// Largest float distance of the hull vertices to `{P, P′}` after
    /// `convergence_steps` steps of `L²` (at least 200).
    pub convergence_error: f64,
    pub convergence_steps: usize,
}

impl FiniteCrossingCertificate {
    pub fn conv_zr_polygon(&self) -> Result<SimplePolygon> {
        Ok(SimplePolygon::new_trusted(self.conv_zr.clone())?)
    }
}

const CONVERGENCE_STEPS: usize = 200;
const CONVERGENCE_STEP_CAP: usize = 10_000;
const CONVERGENCE_TOL: f64 = 1e-8;

pub fn finite_crossings_certificate(params: &Params, depth: usize) -> Result<FiniteCrossingCertificate> {
    let m = manifold_within(params, depth, &Budget::default())?;
    certificate_from(params, &m, ClassifyBudgets::default().finite_window)
}

fn hull_of(arcs: &[crate::manifold::ManifoldArc]) -> Result<Vec<Point>> {
    let pts: Vec<Point> = arcs.iter().flat_map(|a| a.polyline.vertices().iter().cloned()).collect();
    Ok(convex_hull(&pts)?)
}

fn all_signs(pts: &[Point], x_ok: Sign, y_ok: Sign) -> Result<bool> {
    for p in pts {
        let (sx, sy) = (p.x_sign()?, p.y_sign()?);
        if (sx != Sign::Zero && sx != x_ok) || (sy != Sign::Zero && sy != y_ok) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn canonical(mut v: Vec<Point>) -> Result<Vec<Point>> {
    v = convex_hull(&v)?;
    Ok(v)
}

pub fn certificate_from(params: &Params, um: &UnstableManifold, window: usize) -> Result<FiniteCrossingCertificate> {
    let (_, census) = crossing_census(um, um.depth, window)?;
    if census.evidence == CrossingEvidence::Growing {
        return Err(LabError::Precondition("crossings still appear in the trailing window".into()));
    }
    let list = crossings_of(um)?;
    let mut m = 0;
    for c in list.entries.iter().filter(|c| c.kind != crate::manifold::CrossingKind::Touch) {
        if let Some(n) = c.arc {
            m = m.max(match c.branch {
                Branch::UPlus => n + 1,
                _ => n,
            });
        }
    }
    let d = um.depth;
    if m + 2 > d {
        return Err(LabError::DepthInsufficient { what: "tails for the certificate".into(), depth_reached: d });
    }
    let zr = hull_of(&um.plus[m..d])?;
    let zl = hull_of(&um.minus[m + 1..=d])?;
    if zr.len() < 3 || zl.len() < 3 {
        return Err(LabError::Degenerate("tail hull has no interior".into()));
    }
    let zr_in_quadrant_4 = all_signs(&zr, Sign::Positive, Sign::Negative)?;
    let zl_in_quadrant_2 = all_signs(&zl, Sign::Negative, Sign::Positive)?;
    let img_zr = canonical(zr.iter().map(|p| params.step(p)).collect::<Result<_>>()?)?;
    let image_equals = zr_in_quadrant_4 && img_zr == zl;
    let img_zl = SimplePolygon::new_trusted(canonical(zl.iter().map(|p| params.step(p)).collect::<Result<_>>()?)?)?;
    let zr_poly = SimplePolygon::new_trusted(zr.clone())?;
    let image_contained = zl_in_quadrant_2 && contains_polygon(&zr_poly, &img_zl, false)?;
    if !(image_equals && image_contained && zr_in_quadrant_4 && zl_in_quadrant_2) {
        return Err(LabError::DepthInsufficient {
            what: format!(
                "certificate relations (image equal {image_equals}, contained {image_contained}, quadrants {zr_in_quadrant_4}/{zl_in_quadrant_2})"
            ),
            depth_reached: d,
        });
    }
    let (p, pp) = params.period_two_orbit()?;
    let (af, bf) = (params.a().to_f64(), params.b().to_f64());
    let step = |(x, y): (f64, f64)| (1.0 + y - af * x.abs(), bf * x);
    let mut pts: Vec<((f64, f64), (f64, f64))> = Vec::new();
    for (hull, target) in [(&zr, &p), (&zl, &pp)] {
        pts.extend(hull.iter().map(|q| (q.approx(), target.approx())));
    }
    let error = |pts: &[((f64, f64), (f64, f64))]| pts.iter().map(|(z, t)| (z.0 - t.0).hypot(z.1 - t.1)).fold(0.0, f64::max);
    let mut steps = 0;
    let mut err = f64::INFINITY;
    while steps < CONVERGENCE_STEP_CAP {
        for (z, _) in pts.iter_mut() {
            *z = step(step(*z));
        }
        steps += 1;
        if steps >= CONVERGENCE_STEPS {
            err = error(&pts);
            if err < CONVERGENCE_TOL {
                break;
            }
        }
    }
    if !(err < CONVERGENCE_TOL) {
        return Err(LabError::DepthInsufficient { what: format!("hull convergence to the 2-cycle (error {err:e})"), depth_reached: d });
    }
    Ok(FiniteCrossingCertificate {
        a: um.plus[m].polyline.first().clone(),
        m,
        depth: d,
        conv_zr: zr,
        conv_zl: zl,
        image_equals,
        image_contained,
        zr_in_quadrant_4,
        zl_in_quadrant_2,
        convergence_error: err,
        convergence_steps: steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LapSignal {
    ZeroLike,
    Positive,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LapGrowth {
    /// `counts[n-1]` linearity pieces of `L^n` on the fundamental arc.
    pub counts: Vec<usize>,
    /// `ln(count) / n`.
    pub rates: Vec<f64>,
    /// Fitted exponential rate `s` in `ln c = α + k ln n + s n`.
    pub slope: f64,
    pub poly_exponent: f64,
    /// `ln(c_N / c_{N/2}) / (N − N/2)`.
    pub tail_rate: f64,
    pub signal: LapSignal,
    pub n_reached: usize,
}

pub fn lap_growth_entropy_estimate(params: &Params, n_max: usize) -> Result<LapGrowth> {
    lap_growth_entropy_estimate_with(params, n_max, 0.05, &Budget::default())
}

/// Piece counts of `L^n` on the straight arc `[Z⁻¹, Z¹]`.
pub fn lap_counts(params: &Params, n_max: usize, budget: &Budget) -> Result<Vec<usize>> {
    let z = params.point_z()?;
    let mut line = crate::geom::Polyline::new(vec![params.point_z_inverse()?, params.step(&z)?])?;
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        line = crate::manifold::image_of_polyline(params, &line, 1)?;
        if budget.check(line.vertices(), "lap growth", n).is_err() {
            break;
        }
        counts.push(line.len() - 1);
    }
    Ok(counts)
}

pub fn lap_growth_entropy_estimate_with(params: &Params, n_max: usize, threshold: f64, budget: &Budget) -> Result<LapGrowth> {
    if n_max < 5 {
        return Err(LabError::Precondition("n_max must be at least 5".into()));
    }
    let counts = lap_counts(params, n_max, budget)?;
    let n_reached = counts.len();
    if n_reached < 5 {
        return Err(LabError::BudgetExhausted { what: "lap growth".into(), depth_reached: n_reached });
    }
    let rates: Vec<f64> = counts.iter().enumerate().map(|(i, c)| (*c as f64).ln() / (i + 1) as f64).collect();
    let (k, s) = fit_growth(&counts);
    let last = *counts.last().unwrap();
    let half = n_reached / 2;
    let tail_rate = (last as f64 / counts[half - 1] as f64).ln() / (n_reached - half) as f64;
    let signal = if s > threshold && tail_rate > threshold && last >= 16 {
        LapSignal::Positive
    } else if s <= threshold || tail_rate <= threshold / 2.0 {
        LapSignal::ZeroLike
    } else {
        LapSignal::Inconclusive
    };
    Ok(LapGrowth { counts, rates, slope: s, poly_exponent: k, tail_rate, signal, n_reached })
}

/// Least squares `ln c = α + k ln n + s n`; returns `(k, s)`.
fn fit_growth(counts: &[usize]) -> (f64, f64) {
    let rows: Vec<[f64; 4]> = counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            [1.0, n.ln(), n, (*c as f64).ln()]
        })
        .collect();
    let mut m = [[0.0f64; 4]; 3];
    for r in &rows {
        for i in 0..3 {
            for j in 0..4 {
                m[i][j] += r[i] * r[j];
            }
        }
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, piv);
        if m[c][c].abs() < 1e-300 {
            return (0.0, 0.0);
        }
        for r in 0..3 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..4 {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    (m[1][3] / m[1][1], m[2][3] / m[2][2])
}

const SEPARATED_GRID: usize = 8;

/// Greedy lower bound for the largest `(n, ε)`-separated set among grid points of `region`.
pub fn separated_set_estimate(params: &Params, n: usize, epsilon: f64, region: &BBox) -> Result<usize> {
    separated_set_estimate_with_grid(params, n, epsilon, region, SEPARATED_GRID)
}

pub fn separated_set_estimate_with_grid(params: &Params, n: usize, epsilon: f64, region: &BBox, grid: usize) -> Result<usize> {
    if n < 1 || !(epsilon > 0.0) || grid < 1 {
        return Err(LabError::Precondition("need n ≥ 1, ε > 0 and a nonempty grid".into()));
    }
    let (af, bf) = (params.a().to_f64(), params.b().to_f64());
    let g = grid.max(1);
    let coord = |lo: f64, hi: f64, i: usize| if g == 1 { (lo + hi) / 2.0 } else { lo + (hi - lo) * i as f64 / (g - 1) as f64 };
    let mut orbits: Vec<Vec<(f64, f64)>> = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            let mut p = (coord(region.xmin, region.xmax, i), coord(region.ymin, region.ymax, j));
            let mut orb = Vec::with_capacity(n);
            for _ in 0..n {
                orb.push(p);
                p = (1.0 + p.1 - af * p.0.abs(), bf * p.0);
            }
            orbits.push(orb);
        }
    }
    let k = orbits.len();
    let mut dist = vec![vec![0.0f64; k]; k];
    let mut best = 0;
    for m in 1..=n {
        for i in 0..k {
            for j in i + 1..k {
                let (p, q) = (orbits[i][m - 1], orbits[j][m - 1]);
                let d = (p.0 - q.0).abs().max((p.1 - q.1).abs());
                let d = if d.is_nan() { f64::INFINITY } else { d };
                if d > dist[i][j] {
                    dist[i][j] = d;
                    dist[j][i] = d;
                }
            }
        }
        let mut thresholds: Vec<f64> = vec![epsilon];
        for i in 0..k {
            for j in i + 1..k {
                if dist[i][j] > epsilon && dist[i][j].is_finite() {
                    thresholds.push(dist[i][j]);
                }
            }
        }
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup();
        for t in thresholds {
            let mut chosen: Vec<usize> = Vec::new();
            for i in 0..k {
                if chosen.iter().all(|&c| dist[c][i] > t) {
                    chosen.push(i);
                }
            }
            best = best.max(chosen.len());
            if chosen.len() <= 1 {
                break;
            }
        }
    }
    Ok(best)
}
