//! Empirical check of the metric axioms on a sample.

use std::fmt;

use crate::error::{Result, TreeDistError};
use crate::rf::rf_distance;
use crate::tree::{is_identical, Tree};

/// One failed axiom, with indices into the sample.
#[derive(Clone, Debug, PartialEq)]
pub enum AxiomViolation {
    Negative {
        i: usize,
        j: usize,
        d: f64,
    },
    /// Distance zero for distinct items, or non-zero for identical ones.
    Identity {
        i: usize,
        j: usize,
        d: f64,
        identical: bool,
    },
    Symmetry {
        i: usize,
        j: usize,
        dij: f64,
        dji: f64,
    },
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        dik: f64,
        dij: f64,
        djk: f64,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Negative { i, j, d } => write!(f, "d({i},{j}) = {d} < 0"),
            AxiomViolation::Identity { i, j, d, identical } => {
                write!(f, "d({i},{j}) = {d} but identical = {identical}")
            }
            AxiomViolation::Symmetry { i, j, dij, dji } => {
                write!(f, "d({i},{j}) = {dij} != d({j},{i}) = {dji}")
            }
            AxiomViolation::Triangle {
                i,
                j,
                k,
                dik,
                dij,
                djk,
            } => {
                write!(
                    f,
                    "d({i},{k}) = {dik} > d({i},{j}) + d({j},{k}) = {}",
                    dij + djk
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub items: usize,
    pub triples: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks non-negativity, identity of indiscernibles, symmetry and the
/// triangle inequality over every pair and ordered triple of `items`.
/// `tolerance` absorbs rounding in the symmetry, identity and triangle tests.
pub fn check_metric_axioms<T, D, S>(
    items: &[T],
    dist: D,
    same: S,
    tolerance: f64,
) -> Result<AxiomReport>
where
    D: Fn(&T, &T) -> Result<f64>,
    S: Fn(&T, &T) -> Result<bool>,
{
    let m = items.len();
    let mut d = vec![0.0; m * m];
    let mut report = AxiomReport {
        items: m,
        ..Default::default()
    };
    for i in 0..m {
        for j in 0..m {
            let v = dist(&items[i], &items[j])?;
            d[i * m + j] = v;
            if v < 0.0 {
                report
                    .violations
                    .push(AxiomViolation::Negative { i, j, d: v });
            }
            if i <= j {
                let identical = same(&items[i], &items[j])?;
                if identical != (v.abs() <= tolerance) {
                    report.violations.push(AxiomViolation::Identity {
                        i,
                        j,
                        d: v,
                        identical,
                    });
                }
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let (dij, dji) = (d[i * m + j], d[j * m + i]);
            if (dij - dji).abs() > tolerance {
                report
                    .violations
                    .push(AxiomViolation::Symmetry { i, j, dij, dji });
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                report.triples += 1;
                let (dik, dij, djk) = (d[i * m + k], d[i * m + j], d[j * m + k]);
                if dik > dij + djk + tolerance {
                    report.violations.push(AxiomViolation::Triangle {
                        i,
                        j,
                        k,
                        dik,
                        dij,
                        djk,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Metric axioms of the rooted Robinson-Foulds distance on a sample of at
/// least three trees over one label set.
pub fn rf_is_metric_suite(sample: &[Tree]) -> Result<AxiomReport> {
    if sample.len() < 3 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 3 trees, got {}",
            sample.len()
        )));
    }
    check_metric_axioms(
        sample,
        |a, b| Ok(rf_distance(a, b)? as f64),
        is_identical,
        0.0,
    )
}
