//! One entry point for every metric, and all-pairs distance matrices.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::compare::{
    align_score, ccc, mast_distance, node_distance, similarity_probability_distance,
};
use crate::error::{Result, TreeDistError};
use crate::geodesic::{geodesic_distance_with, GeodesicOptions};
use crate::quartet::{quartet_distance, triplet_distance, triplet_length_distance};
use crate::rf::{rf, rfl_distance, rfl_distance_raw};
use crate::spr::{spr_distance_maf, unrooted_spr_distance_bfs};
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Metric {
    Rf,
    Rfl,
    Quartet,
    Triplet,
    TripletLength,
    Geodesic,
    Mast,
    Align,
    Ccc,
    Node,
    PathDiff,
    Sim,
    Spr,
}

impl Metric {
    pub const ALL: [Metric; 13] = [
        Metric::Rf,
        Metric::Rfl,
        Metric::Quartet,
        Metric::Triplet,
        Metric::TripletLength,
        Metric::Geodesic,
        Metric::Mast,
        Metric::Align,
        Metric::Ccc,
        Metric::Node,
        Metric::PathDiff,
        Metric::Sim,
        Metric::Spr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Rf => "rf",
            Metric::Rfl => "rfl",
            Metric::Quartet => "quartet",
            Metric::Triplet => "triplet",
            Metric::TripletLength => "triplet-length",
            Metric::Geodesic => "geodesic",
            Metric::Mast => "mast",
            Metric::Align => "align",
            Metric::Ccc => "ccc",
            Metric::Node => "node",
            Metric::PathDiff => "path-diff",
            Metric::Sim => "sim",
            Metric::Spr => "spr",
        }
    }

    /// What every input tree must satisfy.
    pub fn requirements(self) -> Requirements {
        let r = Requirements::default();
        match self {
            Metric::Rfl | Metric::Geodesic => Requirements {
                weighted: true,
                ..r
            },
            Metric::Quartet => Requirements {
                rooted: Some(false),
                ..r
            },
            Metric::Triplet | Metric::Mast | Metric::Ccc => Requirements {
                rooted: Some(true),
                ..r
            },
            Metric::TripletLength | Metric::Sim => Requirements {
                rooted: Some(true),
                weighted: true,
                ..r
            },
            Metric::Spr => Requirements { binary: true, ..r },
            Metric::Rf | Metric::Align | Metric::Node | Metric::PathDiff => r,
        }
    }

    /// Whether `d(t, t)` is zero by definition, so the diagonal is not
    /// computed.
    fn zero_diagonal(self) -> bool {
        !matches!(self, Metric::Align | Metric::Ccc)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input constraints of a metric. `rooted: None` accepts either kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Requirements {
    pub rooted: Option<bool>,
    pub weighted: bool,
    pub binary: bool,
}

impl Requirements {
    pub fn check(&self, tree: &Tree) -> Result<()> {
        match self.rooted {
            Some(true) if !tree.is_rooted() => return Err(TreeDistError::UnrootedInput),
            Some(false) if tree.is_rooted() => return Err(TreeDistError::RootednessMismatch),
            _ => {}
        }
        if self.weighted {
            tree.require_weighted()?;
        }
        if self.binary && !tree.is_binary() {
            return Err(TreeDistError::NotBinary);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricOptions {
    /// Robinson-Foulds length on the trees as given instead of normalized.
    pub raw: bool,
    /// Count pendant edges in the geodesic.
    pub pendant: bool,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            raw: false,
            pendant: true,
        }
    }
}

/// A value with an optional note for the report.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub note: Option<String>,
}

impl Cell {
    fn plain(value: f64) -> Cell {
        Cell { value, note: None }
    }
}

/// `metric(a, b)` as a real number.
pub fn pair_distance(metric: Metric, a: &Tree, b: &Tree, options: MetricOptions) -> Result<Cell> {
    let cell = match metric {
        Metric::Rf => Cell::plain(rf(a, b)? as f64),
        Metric::Rfl if options.raw => match rfl_distance_raw(a, b) {
            Ok(r) => Cell::plain(r.value),
            Err(TreeDistError::AmbiguousMatching { functions, candidates }) => Cell {
                value: candidates[0],
                note: Some(format!(
                    "ambiguous matching: {functions} matching functions, candidate values {candidates:?}"
                )),
            },
            Err(e) => return Err(e),
        },
        Metric::Rfl => Cell::plain(rfl_distance(a, b)?.value),
        Metric::Quartet => Cell::plain(quartet_distance(a, b)? as f64),
        Metric::Triplet => Cell::plain(triplet_distance(a, b)? as f64),
        Metric::TripletLength => Cell::plain(triplet_length_distance(a, b)?),
        Metric::Geodesic => {
            let r = geodesic_distance_with(a, b, GeodesicOptions { pendant: options.pendant })?;
            Cell {
                value: r.length,
                note: (r.iterations > 0).then(|| format!("{} refinement iterations", r.iterations)),
            }
        }
        Metric::Mast => Cell::plain(mast_distance(a, b)?.distance as f64),
        Metric::Align => Cell::plain(align_score(a, b)?.total),
        Metric::Ccc => Cell::plain(ccc(a, b)?),
        Metric::Node => Cell::plain(node_distance(a, b, 1)?),
        Metric::PathDiff => Cell::plain(node_distance(a, b, 2)?),
        Metric::Sim => Cell::plain(similarity_probability_distance(a, b)?),
        Metric::Spr if a.is_rooted() && b.is_rooted() => Cell::plain(spr_distance_maf(a, b)?.distance as f64),
        Metric::Spr => Cell::plain(unrooted_spr_distance_bfs(a, b)? as f64),
    };
    Ok(cell)
}

/// All-pairs values over named trees, with notes for individual cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixReport {
    pub metric: String,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub diagnostics: Vec<String>,
}

impl MatrixReport {
    /// CSV with an empty corner cell, the identifiers as header and one
    /// labelled row per tree. Values use the shortest exact decimal form.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once(String::new()).chain(self.labels.iter().cloned());
        w.write_record(header).expect("write to memory");
        for (id, row) in self.labels.iter().zip(&self.matrix) {
            let cells = std::iter::once(id.clone()).chain(row.iter().map(|x| x.to_string()));
            w.write_record(cells).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite values serialize")
    }
}

/// Which tree of the input failed, and why.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("{id}: {source}")]
    Tree { id: String, source: TreeDistError },
    #[error("{a} vs {b}: {source}")]
    Pair {
        a: String,
        b: String,
        source: TreeDistError,
    },
}

impl MatrixError {
    pub fn source_error(&self) -> &TreeDistError {
        match self {
            MatrixError::Tree { source, .. } | MatrixError::Pair { source, .. } => source,
        }
    }
}

/// Computes every cell in parallel on the current rayon pool. Symmetric
/// metrics fill the upper triangle and mirror it; raw Robinson-Foulds
/// length computes every ordered pair since it need not be symmetric.
pub fn distance_matrix(
    metric: Metric,
    trees: &[(String, Tree)],
    options: MetricOptions,
) -> std::result::Result<MatrixReport, MatrixError> {
    let req = metric.requirements();
    for (id, t) in trees {
        req.check(t).map_err(|source| MatrixError::Tree {
            id: id.clone(),
            source,
        })?;
    }
    let m = trees.len();
    let ordered = metric == Metric::Rfl && options.raw;
    let cells: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            if ordered {
                true
            } else if metric.zero_diagonal() {
                i < j
            } else {
                i <= j
            }
        })
        .collect();
    let values: Vec<(usize, usize, Cell)> = cells
        .into_par_iter()
        .map(|(i, j)| {
            pair_distance(metric, &trees[i].1, &trees[j].1, options)
                .map(|c| (i, j, c))
                .map_err(|source| MatrixError::Pair {
                    a: trees[i].0.clone(),
                    b: trees[j].0.clone(),
                    source,
                })
        })
        .collect::<std::result::Result<_, _>>()?;
    let mut matrix = vec![vec![0.0; m]; m];
    let mut diagnostics = Vec::new();
    for (i, j, cell) in values {
        matrix[i][j] = cell.value;
        if !ordered {
            matrix[j][i] = cell.value;
        }
        if let Some(note) = cell.note {
            diagnostics.push(format!("{} vs {}: {note}", trees[i].0, trees[j].0));
        }
    }
    if ordered {
        for i in 0..m {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    diagnostics.push(format!(
                        "{} vs {}: asymmetric, {} one way and {} the other",
                        trees[i].0, trees[j].0, matrix[i][j], matrix[j][i]
                    ));
                }
            }
        }
    }
    Ok(MatrixReport {
        metric: metric.name().to_owned(),
        labels: trees.iter().map(|t| t.0.clone()).collect(),
        matrix,
        diagnostics,
    })
}
