use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{LabError, Result};
use crate::geom::{orient, segment_intersection, BBox, Chain, Intersection, Point, Polyline, SegmentIndex};
use crate::map::{orbit_manifold_seed, OrbitRecord, Params};
use crate::numeric::{Scalar, Sign};

use super::{image_of_polyline, stable_manifold_with_budget, unstable_manifold_with_budget, Branch};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomoclinicWitness {
    pub point: Point,
    pub transversal: bool,
    /// `"X"` or the itinerary of the periodic saddle.
    pub saddle: String,
    pub unstable_piece: String,
    pub stable_piece: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomoclinicResult {
    /// Depth-bounded evidence only.
    NoneFound { u_depth: usize, s_depth: usize },
    Witness(HomoclinicWitness),
}

impl HomoclinicResult {
    pub fn witness(&self) -> Option<&HomoclinicWitness> {
        match self {
            HomoclinicResult::Witness(w) => Some(w),
            HomoclinicResult::NoneFound { .. } => None,
        }
    }

    pub fn has_transversal_witness(&self) -> bool {
        self.witness().is_some_and(|w| w.transversal)
    }
}

struct Curve {
    name: String,
    vertices: Vec<Point>,
}

/// Is direction `q − p` strictly inside the counterclockwise sector from
/// `a − p` to `b − p`? `None` if it lies on a sector edge.
fn in_sector(p: &Point, a: &Point, b: &Point, q: &Point) -> Result<Option<bool>> {
    let oa = orient(p, a, q)?;
    let ob = orient(p, q, b)?;
    let on_ray = |o: Sign, r: &Point| -> Result<bool> {
        // collinear and pointing the same way
        if o != Sign::Zero {
            return Ok(false);
        }
        let (dx, dy) = r.sub(p);
        let (ex, ey) = q.sub(p);
        Ok((&(&dx * &ex) + &(&dy * &ey)).sign()? == Sign::Positive)
    };
    if on_ray(oa, a)? || on_ray(ob, b)? {
        return Ok(None);
    }
    let ab = orient(p, a, b)?;
    Ok(Some(match ab {
        Sign::Positive => oa == Sign::Positive && ob == Sign::Positive,
        Sign::Negative => !(oa == Sign::Negative && ob == Sign::Negative),
        Sign::Zero => oa == Sign::Positive,
    }))
}

/// Neighbours of `pt` on chain `v`, where `pt` lies on segment `i`.
fn neighbours<'a>(v: &'a [Point], i: usize, pt: &Point) -> Option<(&'a Point, &'a Point)> {
    if pt == &v[i] {
        if i == 0 {
            return None;
        }
        Some((&v[i - 1], &v[i + 1]))
    } else if pt == &v[i + 1] {
        v.get(i + 2).map(|n| (&v[i], n))
    } else {
        Some((&v[i], &v[i + 1]))
    }
}

/// Does the curve `u` pass from one side of `s` to the other at `pt`?
fn crosses(u: &[Point], iu: usize, s: &[Point], is: usize, pt: &Point) -> Result<bool> {
    let (Some((u0, u1)), Some((s0, s1))) = (neighbours(u, iu, pt), neighbours(s, is, pt)) else {
        return Ok(false);
    };
    let left = in_sector(pt, s1, s0, u0)?;
    let right = in_sector(pt, s1, s0, u1)?;
    Ok(matches!((left, right), (Some(l), Some(r)) if l != r))
}

/// First witness among all pairs, preferring a transversal one.
fn search(unstable: &[Curve], stable: &[Curve], excluded: &[Point], saddle: &str) -> Result<Option<HomoclinicWitness>> {
    let mut boxes = Vec::new();
    let mut owners = Vec::new();
    for (ci, c) in stable.iter().enumerate() {
        for i in 0..c.vertices.len() - 1 {
            boxes.push(c.vertices[i].bbox().union(&c.vertices[i + 1].bbox()));
            owners.push((ci, i));
        }
    }
    let index = SegmentIndex::new(boxes);
    let mut fallback = None;
    for cu in unstable {
        let u = &cu.vertices;
        for iu in 0..u.len() - 1 {
            let bb: BBox = u[iu].bbox().union(&u[iu + 1].bbox());
            for id in index.query(&bb) {
                let (cs, is) = owners[id];
                let s = &stable[cs].vertices;
                let pt = match segment_intersection(&u[iu], &u[iu + 1], &s[is], &s[is + 1])? {
                    Intersection::Empty => continue,
                    Intersection::Point(p) => p,
                    Intersection::Subsegment(p, q) => {
                        if excluded.contains(&p) { q } else { p }
                    }
                };
                if excluded.contains(&pt) {
                    continue;
                }
                let transversal = crosses(u, iu, s, is, &pt)?;
                let w = HomoclinicWitness {
                    point: pt,
                    transversal,
                    saddle: saddle.to_string(),
                    unstable_piece: cu.name.clone(),
                    stable_piece: stable[cs].name.clone(),
                };
                if transversal {
                    return Ok(Some(w));
                }
                fallback.get_or_insert(w);
            }
        }
    }
    Ok(fallback)
}

fn radius(curves: &[Curve]) -> f64 {
    curves
        .iter()
        .flat_map(|c| c.vertices.iter())
        .map(|p| {
            let (x, y) = p.approx();
            x.abs().max(y.abs())
        })
        .fold(0.0, f64::max)
}

/// Intersections of `W^u_X` (arcs up to `u_depth`) with `W^s_X` (ray plus
/// arcs up to `s_depth`), other than `X`.
pub fn homoclinic_search(params: &Params, u_depth: usize, s_depth: usize) -> Result<HomoclinicResult> {
    homoclinic_search_with_budget(params, u_depth, s_depth, &Budget::default())
}

pub fn homoclinic_search_with_budget(
    params: &Params,
    u_depth: usize,
    s_depth: usize,
    budget: &Budget,
) -> Result<HomoclinicResult> {
    let um = unstable_manifold_with_budget(params, u_depth, budget, false)?;
    let sm = stable_manifold_with_budget(params, s_depth, budget)?;
    let unstable = vec![
        Curve { name: "u+".into(), vertices: um.branch_chain(Branch::UPlus).vertices },
        Curve { name: "u-".into(), vertices: um.branch_chain(Branch::UMinus).vertices },
    ];
    let r = radius(&unstable);
    let stable = vec![
        Curve { name: "s-".into(), vertices: sm.minus_chain().vertices },
        Curve { name: "s+".into(), vertices: sm.plus_segment(r).into_vertices() },
    ];
    Ok(match search(&unstable, &stable, &[um.x.clone()], "X")? {
        Some(w) => HomoclinicResult::Witness(w),
        None => HomoclinicResult::NoneFound { u_depth, s_depth },
    })
}

/// Largest `δ = 2^{−k}` keeping every `p_i ± δ d_i` on the side of the fold
/// that `p_i` is on.
fn seed_half_width(points: &[Point], dirs: &[&[(Scalar, Scalar)]]) -> Result<Scalar> {
    let mut delta = BigRational::one();
    for _ in 0..200 {
        let d = Scalar::Rational(delta.clone());
        let mut ok = true;
        'outer: for set in dirs {
            for (p, v) in points.iter().zip(set.iter()) {
                let s = p.x_sign()?;
                let off = &d * &v.0;
                for x in [p.x() + &off, p.x() - &off] {
                    if x.sign()? != s {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            return Ok(d);
        }
        delta /= BigRational::from_integer(2.into());
    }
    Err(LabError::Degenerate("no affine neighbourhood around the orbit".into()))
}

fn seed_segment(p: &Point, v: &(Scalar, Scalar), delta: &Scalar) -> Result<Polyline> {
    let dx = delta * &v.0;
    let dy = delta * &v.1;
    Ok(Polyline::new(vec![
        Point::new(p.x() - &dx, p.y() - &dy),
        p.clone(),
        Point::new(p.x() + &dx, p.y() + &dy),
    ])?)
}

/// Homoclinic search for a saddle periodic orbit. Depths count periods.
/// The search deepens one period at a time and stops at the first witness.
pub fn periodic_homoclinic_search(
    params: &Params,
    orbit: &OrbitRecord,
    u_depth: usize,
    s_depth: usize,
    budget: &Budget,
) -> Result<HomoclinicResult> {
    let seed = orbit_manifold_seed(params, orbit)?;
    let n = seed.period as i64;
    let delta = seed_half_width(&seed.points, &[&seed.directions_u, &seed.directions_s])?;
    let mut u = seed_segment(&seed.points[0], &seed.directions_u[0], &delta)?;
    let mut s = seed_segment(&seed.points[0], &seed.directions_s[0], &delta)?;
    let (mut du, mut ds) = (0usize, 0usize);
    let mut best = None;
    loop {
        let grow_u = du < u_depth && (du <= ds || ds >= s_depth);
        if grow_u {
            u = image_of_polyline(params, &u, n)?;
            du += 1;
            budget.check(u.vertices(), "periodic unstable manifold", du)?;
        } else if ds < s_depth {
            s = image_of_polyline(params, &s, -n)?;
            ds += 1;
            budget.check(s.vertices(), "periodic stable manifold", ds)?;
        } else {
            break;
        }
        let mut us = Vec::new();
        let mut ss = Vec::new();
        let mut ui = u.clone();
        let mut si = s.clone();
        for i in 0..seed.period {
            if i > 0 {
                ui = image_of_polyline(params, &ui, 1)?;
                si = image_of_polyline(params, &si, -1)?;
            }
            us.push(Curve { name: format!("u[{i}]"), vertices: ui.vertices().to_vec() });
            ss.push(Curve { name: format!("s[{}]", (seed.period - i) % seed.period), vertices: si.vertices().to_vec() });
        }
        if let Some(w) = search(&us, &ss, &seed.points, &orbit.word)? {
            let t = w.transversal;
            best = Some(w);
            if t {
                break;
            }
        }
    }
    Ok(match best {
        Some(w) => HomoclinicResult::Witness(w),
        None => HomoclinicResult::NoneFound { u_depth, s_depth },
    })
}
