//! Periodic orbits by symbolic itinerary.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geom::Point;
use crate::numeric::{QuadField, Scalar, Sign};

use super::Params;

/// Longest period accepted by [`periodic_orbits`].
pub const MAX_PERIOD: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    AttractingNode,
    AttractingFocus,
    Saddle,
    Repelling,
    /// A multiplier of modulus one, or an orbit point on the fold.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Multiplier {
    Real { mu_u: Scalar, mu_s: Scalar },
    Complex { real_part: Scalar, modulus_squared: Scalar },
}

/// One periodic orbit with its return-map data at `points[0]`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub word: String,
    pub period: usize,
    pub points: Vec<Point>,
    /// Return map `[[m11, m12], [m21, m22]]`.
    pub matrix: [[Scalar; 2]; 2],
    pub trace: Scalar,
    pub det: Scalar,
    pub discriminant: Scalar,
    pub multipliers: Multiplier,
    pub multiplier_moduli: [f64; 2],
    pub stability: Stability,
    /// Some orbit point lies on the fold `x = 0`.
    pub degenerate: bool,
}

/// Saddle data for growing the invariant manifolds of an orbit, one entry per
/// orbit point.
#[derive(Clone, Debug)]
pub struct OrbitSeed {
    pub points: Vec<Point>,
    pub period: usize,
    pub mu_u: Scalar,
    pub mu_s: Scalar,
    pub directions_u: Vec<(Scalar, Scalar)>,
    pub directions_s: Vec<(Scalar, Scalar)>,
    pub field: Option<QuadField>,
}

/// Lyndon words of length `n` over `{0, 1}`, lexicographic order.
pub(crate) fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&1) = w.last() {
            w.pop();
        }
        match w.last_mut() {
            Some(c) => *c = 1,
            None => break,
        }
    }
    out
}

type Mat = [[BigRational; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn letter_matrix(a: &BigRational, b: &BigRational, right: bool) -> Mat {
    let s = if right { -a.clone() } else { a.clone() };
    [[s, BigRational::one()], [b.clone(), BigRational::zero()]]
}

/// Composite affine map `p ↦ M p + v` along the word.
fn compose(a: &BigRational, b: &BigRational, word: &[u8]) -> (Mat, [BigRational; 2]) {
    let id = [[BigRational::one(), BigRational::zero()], [BigRational::zero(), BigRational::one()]];
    let mut m = id;
    let mut v = [BigRational::zero(), BigRational::zero()];
    for &c in word {
        let l = letter_matrix(a, b, c == 0);
        m = mat_mul(&l, &m);
        let nv0 = &l[0][0] * &v[0] + &l[0][1] * &v[1] + BigRational::one();
        let nv1 = &l[1][0] * &v[0] + &l[1][1] * &v[1];
        v = [nv0, nv1];
    }
    (m, v)
}

fn cmp_abs_one(mu: &Scalar) -> Result<Ordering> {
    let abs = mu.abs()?;
    Ok(abs.cmp_to(&Scalar::one())?)
}

fn classify_real(mu_u: &Scalar, mu_s: &Scalar) -> Result<Stability> {
    let cu = cmp_abs_one(mu_u)?;
    let cs = cmp_abs_one(mu_s)?;
    Ok(match (cu, cs) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Stability::Degenerate,
        (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => Stability::Saddle,
        (Ordering::Less, Ordering::Less) => Stability::AttractingNode,
        (Ordering::Greater, Ordering::Greater) => Stability::Repelling,
    })
}

fn orbit_record(params: &Params, word: &[u8]) -> Result<Option<OrbitRecord>> {
    let (a, b) = (params.a_rational(), params.b_rational());
    let (m, v) = compose(a, b, word);
    // (I − M) p = v
    let i00 = BigRational::one() - &m[0][0];
    let i01 = -m[0][1].clone();
    let i10 = -m[1][0].clone();
    let i11 = BigRational::one() - &m[1][1];
    let det_i = &i00 * &i11 - &i01 * &i10;
    if det_i.is_zero() {
        return Ok(None);
    }
    let px = (&v[0] * &i11 - &i01 * &v[1]) / &det_i;
    let py = (&i00 * &v[1] - &i10 * &v[0]) / &det_i;

    let mut points = Vec::with_capacity(word.len());
    let mut degenerate = false;
    let (mut x, mut y) = (px, py);
    for &c in word {
        match x.cmp(&BigRational::zero()) {
            Ordering::Less if c == 0 => return Ok(None),
            Ordering::Greater if c == 1 => return Ok(None),
            Ordering::Equal if c == 1 => return Ok(None),
            Ordering::Equal => degenerate = true,
            _ => {}
        }
        points.push(Point::new(Scalar::Rational(x.clone()), Scalar::Rational(y.clone())));
        let ax = if c == 0 { a * &x } else { -(a * &x) };
        let nx = BigRational::one() + &y - ax;
        let ny = b * &x;
        x = nx;
        y = ny;
    }
    if Point::new(Scalar::Rational(x), Scalar::Rational(y)) != points[0] {
        return Err(LabError::Inconsistency(format!(
            "orbit for itinerary {} does not close",
            word_text(word)
        )));
    }

    let trace = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let disc = &trace * &trace - BigRational::from_integer(4.into()) * &det;
    let (multipliers, stability) = if disc.is_negative() {
        let st = match det.cmp(&BigRational::one()) {
            Ordering::Less => Stability::AttractingFocus,
            Ordering::Equal => Stability::Degenerate,
            Ordering::Greater => Stability::Repelling,
        };
        let half = BigRational::new(1.into(), 2.into());
        (
            Multiplier::Complex { real_part: Scalar::Rational(&trace * &half), modulus_squared: Scalar::Rational(det.clone()) },
            st,
        )
    } else {
        let (root, _) = Scalar::sqrt_rational(&disc)?;
        let t = Scalar::Rational(trace.clone());
        let half = Scalar::ratio(1, 2);
        let plus = &(&t + &root) * &half;
        let minus = &(&t - &root) * &half;
        // the multiplier of larger modulus is the unstable one
        let (mu_u, mu_s) = if plus.abs()?.cmp_to(&minus.abs()?)? == Ordering::Less { (minus, plus) } else { (plus, minus) };
        let st = classify_real(&mu_u, &mu_s)?;
        (Multiplier::Real { mu_u, mu_s }, st)
    };
    let stability = if degenerate { Stability::Degenerate } else { stability };
    let multiplier_moduli = match &multipliers {
        Multiplier::Real { mu_u, mu_s } => [mu_u.to_f64().abs(), mu_s.to_f64().abs()],
        Multiplier::Complex { modulus_squared, .. } => {
            let r = modulus_squared.to_f64().sqrt();
            [r, r]
        }
    };
    let sm = |r: &BigRational| Scalar::Rational(r.clone());
    Ok(Some(OrbitRecord {
        word: word_text(word),
        period: word.len(),
        points,
        matrix: [[sm(&m[0][0]), sm(&m[0][1])], [sm(&m[1][0]), sm(&m[1][1])]],
        trace: Scalar::Rational(trace),
        det: Scalar::Rational(det),
        discriminant: Scalar::Rational(disc),
        multipliers,
        multiplier_moduli,
        stability,
        degenerate,
    }))
}

fn word_text(word: &[u8]) -> String {
    word.iter().map(|&c| if c == 0 { 'R' } else { 'L' }).collect()
}

/// All periodic orbits of minimal period `n`, one record per orbit, ordered by
/// itinerary (`R` before `L`, each word the least rotation).
pub fn periodic_orbits(params: &Params, n: usize) -> Result<Vec<OrbitRecord>> {
    if !params.is_exact() {
        return Err(LabError::Precondition("periodic orbit enumeration needs exact mode".into()));
    }
    if n == 0 || n > MAX_PERIOD {
        return Err(LabError::InvalidParameters(format!("period must be in 1..={MAX_PERIOD}, got {n}")));
    }
    let mut out = Vec::new();
    for w in lyndon_words(n) {
        if let Some(r) = orbit_record(params, &w)? {
            out.push(r);
        }
    }
    Ok(out)
}

fn eigenvector(m: &[[Scalar; 2]; 2], mu: &Scalar) -> Result<(Scalar, Scalar)> {
    let v = (mu - &m[1][1], m[1][0].clone());
    if !(v.0.is_zero() && v.1.is_zero()) {
        return Ok(v);
    }
    let w = (m[0][1].clone(), mu - &m[0][0]);
    if !(w.0.is_zero() && w.1.is_zero()) {
        return Ok(w);
    }
    Err(LabError::Degenerate("return map is a multiple of the identity".into()))
}

/// Eigen-directions of a saddle orbit's return map at `points[0]`.
pub fn orbit_manifold_seed(params: &Params, orbit: &OrbitRecord) -> Result<OrbitSeed> {
    let (mu_u, mu_s) = match (&orbit.multipliers, orbit.stability) {
        (Multiplier::Real { mu_u, mu_s }, Stability::Saddle) => (mu_u.clone(), mu_s.clone()),
        _ => return Err(LabError::Precondition(format!("orbit {} is not a saddle", orbit.word))),
    };
    if orbit.degenerate {
        return Err(LabError::Degenerate(format!("orbit {} touches the fold", orbit.word)));
    }
    let mut du = vec![eigenvector(&orbit.matrix, &mu_u)?];
    let mut ds = vec![eigenvector(&orbit.matrix, &mu_s)?];
    let a = params.a();
    let b = params.b();
    for (i, c) in orbit.word.chars().enumerate().take(orbit.period - 1) {
        let s = if c == 'R' { -a.clone() } else { a.clone() };
        let push = |v: &(Scalar, Scalar)| (&(&s * &v.0) + &v.1, b * &v.0);
        du.push(push(&du[i]));
        ds.push(push(&ds[i]));
    }
    let field = mu_u.field().cloned();
    Ok(OrbitSeed {
        points: orbit.points.clone(),
        period: orbit.period,
        mu_u,
        mu_s,
        directions_u: du,
        directions_s: ds,
        field,
    })
}

impl OrbitRecord {
    pub fn is_saddle(&self) -> bool {
        self.stability == Stability::Saddle && !self.degenerate
    }

    /// Sign pattern of the orbit's x-coordinates.
    pub fn x_signs(&self) -> Result<Vec<Sign>> {
        self.points.iter().map(|p| Ok(p.x_sign()?)).collect()
    }
}
