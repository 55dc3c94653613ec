use serde_json::{json, Value};

use super::config::{Format, RunConfig};
use super::Artifacts;
use crate::classify::{classify_parameters, Regime, RegionVerdict};
use crate::error::{LabError, Result};
use crate::export;
use crate::manifold::{crossings_of, stable_manifold_with_budget, unstable_manifold_with_budget, UnstableManifold};
use crate::map::Params;
use crate::trap::{
    area_ledger, construct_t_from, ell_approximation, ell_from_seed, forward_branch_in_d, iterate_d,
    segment_meets_manifold_only_at_ends, trapping_index, EllApproximation,
};

const MAX_TRAPPING_INDEX: usize = 50;

fn error_json(e: &LabError) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() })
}

fn constants(params: &Params) -> Result<Value> {
    let (x, y) = params.fixed_points()?;
    let mut c = json!({ "x": x, "y": y });
    if params.flags().standard() {
        c["eigen"] = serde_json::to_value(params.eigen_data()?).expect("serializable");
        c["z"] = serde_json::to_value(params.point_z()?).expect("serializable");
        c["z_inverse"] = serde_json::to_value(params.point_z_inverse()?).expect("serializable");
        c["v"] = serde_json::to_value(params.point_v()?).expect("serializable");
    }
    if params.flags().period_two {
        let (p, pp) = params.period_two_orbit()?;
        c["p"] = serde_json::to_value(p).expect("serializable");
        c["p_prime"] = serde_json::to_value(pp).expect("serializable");
    }
    Ok(c)
}

fn ell_json(ell: &EllApproximation, seed: &str) -> Value {
    json!({
        "seed": seed,
        "k": ell.k,
        "iterates": ell.iterates,
        "p_in_all": ell.p_in_all,
        "p_prime_in_left": ell.p_prime_in_left,
        "final_diameter": ell.right.diameter_f64().max(ell.left.diameter_f64()),
    })
}

/// Runs the pipeline; the report always comes back, with `error` set when a
/// stage failed.
pub fn analyze(cfg: &RunConfig) -> (Value, Artifacts, i32) {
    let mut report = json!({ "config": cfg, "error": Value::Null });
    let mut files = Artifacts::new();
    let code = match run(cfg, &mut report, &mut files) {
        Ok(()) => 0,
        Err(e) => {
            report["error"] = error_json(&e);
            e.exit_code()
        }
    };
    if cfg.wants(Format::Json) {
        let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        files.insert(0, ("report.json".into(), text));
    }
    (report, files, code)
}

fn run(cfg: &RunConfig, report: &mut Value, files: &mut Artifacts) -> Result<()> {
    let params = cfg.params()?;
    report["parameters"] = json!({
        "a": params.a_rational().to_string(),
        "b": params.b_rational().to_string(),
        "flags": params.flags(),
    });
    report["constants"] = constants(&params)?;
    let verdict = classify_parameters(&params, &cfg.classify_budgets());
    report["verdict"] = serde_json::to_value(&verdict).expect("serializable");
    if verdict.regime == Regime::OutOfScope {
        return Ok(());
    }
    let budget = cfg.budget();
    let m = unstable_manifold_with_budget(&params, cfg.depth, &budget, true)?;
    let s = stable_manifold_with_budget(&params, cfg.depth, &budget)?;
    let crossings = crossings_of(&m)?;
    report["manifold"] = json!({
        "depth": m.depth,
        "vertices": m.vertex_count(),
        "simple": true,
        "crossings": crossings.entries,
    });
    if cfg.wants(Format::Csv) {
        files.push(("manifold.csv".into(), export::manifold_csv(&m, export::output_precision(&params))?));
    }
    if cfg.wants(Format::Svg) {
        files.push(("manifold.svg".into(), export::manifold_svg(&params, &m, Some(&s))?));
    }
    if !params.flags().period_two || verdict.regime == Regime::PositiveEntropySignal {
        return Ok(());
    }
    match trap_stage(cfg, &params, &m, report, files) {
        Ok(true) => Ok(()),
        Ok(false) => ell_from_certificate(cfg, &params, &verdict, report, files),
        Err(e @ (LabError::DepthInsufficient { .. } | LabError::Precondition(_))) => {
            report["trap"] = json!({ "error": error_json(&e) });
            ell_from_certificate(cfg, &params, &verdict, report, files)
        }
        Err(e) => Err(e),
    }
}

fn ell_from_certificate(cfg: &RunConfig, params: &Params, v: &RegionVerdict, report: &mut Value, files: &mut Artifacts) -> Result<()> {
    let Some(c) = &v.certificate else { return Ok(()) };
    let seed = c.conv_zr_polygon()?;
    let ell = ell_from_seed(params, &seed, cfg.iterates)?;
    report["ell"] = ell_json(&ell, "conv_zr");
    if cfg.wants(Format::Svg) {
        files.push(("ell_k.svg".into(), export::ell_svg(params, &ell, Some(&seed))?));
    }
    Ok(())
}

/// `Ok(false)` when no trap applies.
fn trap_stage(cfg: &RunConfig, params: &Params, m: &UnstableManifold, report: &mut Value, files: &mut Artifacts) -> Result<bool> {
    let mut tc = construct_t_from(params, m)?;
    tc.build_polygons(params, m)?;
    let d = tc.d.clone().expect("built");
    let k = tc.k.clone().expect("built");
    let zt_ok = segment_meets_manifold_only_at_ends(&tc.z, &tc.t, m)?;
    let st_ok = segment_meets_manifold_only_at_ends(&tc.s, &tc.t, m)?;
    let branch_ok = forward_branch_in_d(&tc, m, &d)?;
    let mut trap = json!({
        "case": tc.case,
        "s": tc.s,
        "t": tc.t,
        "t_arc": tc.t_arc,
        "zt_meets_manifold_only_at_ends": zt_ok,
        "st_meets_manifold_only_at_ends": st_ok,
        "forward_branch_in_d": branch_ok,
        "d_vertices": d.len(),
        "d_area": d.area(),
        "k_vertices": k.len(),
        "k_area": k.area(),
    });
    if !(zt_ok && st_ok && branch_ok) {
        report["trap"] = trap;
        return Err(LabError::Inconsistency("trapping polygon checks failed on the computed manifold".into()));
    }
    let iterates = iterate_d(params, &d, cfg.iterates)?;
    let b2 = params.b() * params.b();
    let mut prev = d.area();
    let mut law = true;
    for it in &iterates {
        law &= it.area() == &prev * &b2;
        prev = it.area();
    }
    trap["l2_invariant_iterates"] = json!(iterates.len());
    trap["area_law_exact"] = json!(law);
    if !law {
        report["trap"] = trap;
        return Err(LabError::Inconsistency("area of L²(𝒟) is not b² area(𝒟)".into()));
    }
    let ti = trapping_index(params, &d, MAX_TRAPPING_INDEX);
    match &ti {
        Ok(t) => trap["trapping_index"] = json!(t),
        Err(e) => trap["trapping_index_error"] = error_json(e),
    }
    let ledger = area_ledger(params, &d, &k, cfg.iterates.min(ti.as_ref().copied().unwrap_or(cfg.iterates)))?;
    trap["area_ledger"] = serde_json::to_value(&ledger).expect("serializable");
    report["trap"] = trap;
    if !(ledger.identity_holds && ledger.area_law_holds && ledger.k_iterates_disjoint && ledger.k_inside_d) {
        return Err(LabError::Inconsistency("area bookkeeping of 𝒦 failed".into()));
    }
    let ell = ell_approximation(params, &tc, cfg.iterates)?;
    report["ell"] = ell_json(&ell, "d");
    if cfg.wants(Format::Svg) {
        files.push(("trap.svg".into(), export::trap_svg(params, m, &tc, &d)?));
        files.push(("kpolygon.svg".into(), export::kpolygon_svg(params, m, &d, &k)?));
        files.push(("ell_k.svg".into(), export::ell_svg(params, &ell, Some(&d))?));
    }
    Ok(true)
}
