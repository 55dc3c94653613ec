//! Grid sweeps over parameter pairs.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{classify_parameters, ClassifyBudgets, Regime, RegionVerdict};
use crate::error::{LabError, Result};
use crate::manifold::HomoclinicResult;
use crate::map::{NumericMode, Params};
use crate::numeric::parse_rational;

/// `a = a0 + i·da`, `b = b0 + j·db` for `i < na`, `j < nb`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub a0: BigRational,
    pub da: BigRational,
    pub na: usize,
    pub b0: BigRational,
    pub db: BigRational,
    pub nb: usize,
}

impl GridSpec {
    /// Parses `start:step:count`.
    pub fn axis(text: &str) -> Result<(BigRational, BigRational, usize)> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(LabError::Config(format!("grid axis `{text}` is not start:step:count")));
        }
        let n: usize = parts[2].trim().parse().map_err(|_| LabError::Config(format!("bad count in `{text}`")))?;
        if n == 0 {
            return Err(LabError::Config("grid count must be positive".into()));
        }
        Ok((parse_rational(parts[0].trim())?, parse_rational(parts[1].trim())?, n))
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        let (a0, da, na) = Self::axis(a)?;
        let (b0, db, nb) = Self::axis(b)?;
        Ok(GridSpec { a0, da, na, b0, db, nb })
    }

    pub fn len(&self) -> usize {
        self.na * self.nb
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major in `b`, then `a`.
    pub fn point(&self, index: usize) -> (BigRational, BigRational) {
        let (j, i) = (index / self.na, index % self.na);
        (
            &self.a0 + &self.da * BigRational::from_integer((i as i64).into()),
            &self.b0 + &self.db * BigRational::from_integer((j as i64).into()),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub a: String,
    pub b: String,
    pub regime: String,
    pub evidence_depth: usize,
    pub crossing_depth: Option<usize>,
    pub homoclinic_depth: Option<String>,
    pub trapping_index: Option<usize>,
    pub lap_slope: Option<f64>,
}

impl SweepRow {
    pub const HEADER: &'static str = "a,b,regime,evidence_depth,crossing_depth,homoclinic_depth,trapping_index,lap_slope";

    pub fn from_verdict(index: usize, v: &RegionVerdict) -> Self {
        let homoclinic_depth = v.homoclinic.as_ref().map(|h| match h {
            HomoclinicResult::NoneFound { u_depth, s_depth } => format!("{u_depth}/{s_depth}"),
            HomoclinicResult::Witness(_) => "witness".into(),
        });
        SweepRow {
            index,
            a: v.a.clone(),
            b: v.b.clone(),
            regime: v.regime.as_str().into(),
            evidence_depth: v.evidence_depth,
            crossing_depth: v.crossings.as_ref().map(|c| c.depth),
            homoclinic_depth,
            trapping_index: v.trapping_index,
            lap_slope: v.lap_growth.as_ref().map(|l| l.slope),
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |x: Option<String>| x.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.regime,
            self.evidence_depth,
            opt(self.crossing_depth.map(|d| d.to_string())),
            opt(self.homoclinic_depth.clone()),
            opt(self.trapping_index.map(|d| d.to_string())),
            opt(self.lap_slope.map(|s| format!("{s:.6}"))),
        )
    }
}

fn classify_point(grid: &GridSpec, index: usize, mode: NumericMode, budgets: &ClassifyBudgets) -> SweepRow {
    let (a, b) = grid.point(index);
    match Params::new(a.clone(), b.clone(), mode) {
        Ok(p) => SweepRow::from_verdict(index, &classify_parameters(&p, budgets)),
        Err(_) => SweepRow {
            index,
            a: a.to_string(),
            b: b.to_string(),
            regime: Regime::OutOfScope.as_str().into(),
            evidence_depth: 0,
            crossing_depth: None,
            homoclinic_depth: None,
            trapping_index: None,
            lap_slope: None,
        },
    }
}

/// Classifies every grid point not in `done` on `threads` workers; `emit`
/// runs on the calling thread in completion order.
pub fn sweep<F>(grid: &GridSpec, mode: NumericMode, budgets: &ClassifyBudgets, threads: usize, done: &HashSet<usize>, mut emit: F) -> Result<()>
where
    F: FnMut(SweepRow) -> Result<()>,
{
    let todo: Vec<usize> = (0..grid.len()).filter(|i| !done.contains(i)).collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(todo.len().max(1)) {
            let tx = tx.clone();
            let (todo, next) = (&todo, &next);
            s.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = todo.get(k) else { break };
                if tx.send(classify_point(grid, i, mode, budgets)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut result = Ok(());
        for row in rx {
            if result.is_ok() {
                result = emit(row);
            }
            if result.is_err() {
                next.store(usize::MAX / 2, Ordering::Relaxed);
            }
        }
        result
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_exact() {
        let g = GridSpec::parse("0.9:0.1:3", "0.4:0.1:3").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.point(0), (parse_rational("0.9").unwrap(), parse_rational("0.4").unwrap()));
        assert_eq!(g.point(5), (parse_rational("1.1").unwrap(), parse_rational("0.5").unwrap()));
        assert!(GridSpec::parse("1:0.1", "0:1:1").is_err());
    }

    #[test]
    fn out_of_scope_cell() {
        let g = GridSpec::parse("0.5:0.1:1", "0.25:0.1:1").unwrap();
        let mut rows = Vec::new();
        sweep(&g, NumericMode::Exact, &ClassifyBudgets::default(), 2, &HashSet::new(), |r| {
            rows.push(r);
            Ok(())
        })
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].regime, "OutOfScope");
    }
}
