//! Cophenetic correlation between dendrograms, or between a dendrogram and
//! a distance matrix.

use std::io::Read;

use crate::error::{Result, TreeDistError};
use crate::pairs::PairTable;
use crate::tree::{Label, Taxa, Tree};

/// Class value of every leaf pair: the class of their last common ancestor.
#[derive(Clone, Debug, PartialEq)]
pub struct CopheneticMatrix {
    pub labels: Vec<Label>,
    /// Row-major `n x n`; the diagonal is zero and unused.
    pub values: Vec<f64>,
    /// Short description of the class assignment.
    pub class_fn: String,
}

impl CopheneticMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.labels.len() + j]
    }

    fn lower_triangle(&self) -> Vec<f64> {
        lower_triangle(&self.values, self.labels.len())
    }
}

/// A symmetric matrix of distances between labeled data points.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<Label>,
    /// Row-major `n x n`.
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix and checks that it is square and symmetric.
    pub fn new(labels: Vec<Label>, values: Vec<f64>) -> Result<DistanceMatrix> {
        let n = labels.len();
        if values.len() != n * n {
            return Err(TreeDistError::Matrix(format!(
                "{} labels but {} values",
                n,
                values.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                let (x, y) = (values[i * n + j], values[j * n + i]);
                if (x - y).abs() > 1e-12 * x.abs().max(1.0) {
                    return Err(TreeDistError::Matrix(format!(
                        "entry ({}, {}) = {x} differs from ({}, {}) = {y}",
                        labels[i], labels[j], labels[j], labels[i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { labels, values })
    }

    /// Reads CSV with a header row of labels followed by one row of values
    /// per label. If the header starts with an empty cell, every row starts
    /// with its label, which must follow the header order.
    pub fn from_csv<R: Read>(reader: R) -> Result<DistanceMatrix> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = csv
            .headers()
            .map_err(|e| TreeDistError::Matrix(e.to_string()))?
            .clone();
        let labelled_rows = header.get(0) == Some("");
        let labels: Vec<Label> = header
            .iter()
            .skip(usize::from(labelled_rows))
            .map(Label::from)
            .collect();
        let mut values = Vec::with_capacity(labels.len() * labels.len());
        for (row, record) in csv.records().enumerate() {
            let record = record.map_err(|e| TreeDistError::Matrix(e.to_string()))?;
            let mut cells = record.iter();
            if labelled_rows {
                let name = cells.next().unwrap_or("");
                if labels.get(row).map(Label::as_str) != Some(name) {
                    return Err(TreeDistError::Matrix(format!(
                        "row {} is labelled '{name}'",
                        row + 1
                    )));
                }
            }
            for cell in cells {
                let x: f64 = cell.parse().map_err(|_| {
                    TreeDistError::Matrix(format!("row {}: '{cell}' is not a number", row + 1))
                })?;
                values.push(x);
            }
        }
        DistanceMatrix::new(labels, values)
    }

    /// The same matrix with rows and columns in sorted label order.
    fn sorted(&self) -> Result<DistanceMatrix> {
        let taxa = Taxa::from_labels(self.labels.iter().cloned());
        if taxa.len() != self.labels.len() {
            return Err(TreeDistError::Matrix("labels repeat".into()));
        }
        let n = taxa.len();
        let pos: Vec<usize> = taxa
            .labels()
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .expect("same labels")
            })
            .collect();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.values[pos[i] * n + pos[j]];
            }
        }
        Ok(DistanceMatrix {
            labels: taxa.labels().to_vec(),
            values,
        })
    }
}

fn lower_triangle(values: &[f64], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for i in 0..j {
            out.push(values[i * n + j]);
        }
    }
    out
}

/// Pearson product-moment correlation.
fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let m = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / m, y.iter().sum::<f64>() / m);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if x.is_empty() || sxx == 0.0 || syy == 0.0 {
        return Err(TreeDistError::DegenerateVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Cophenetic matrix of a rooted tree under `class`, a non-decreasing map
/// from vertex depth (root = 0) to class value.
pub fn cophenetic_matrix<F: Fn(usize) -> f64>(
    tree: &Tree,
    class: F,
    description: &str,
) -> Result<CopheneticMatrix> {
    tree.require_rooted()?;
    let depths = tree.depths();
    let deepest = depths.iter().copied().max().unwrap_or(0);
    let classes: Vec<f64> = (0..=deepest).map(&class).collect();
    if classes.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(TreeDistError::DomainError(
            "class values must not decrease with depth".into(),
        ));
    }
    let taxa = Taxa::from_tree(tree);
    let n = taxa.len();
    let pairs = PairTable::new(tree, &taxa);
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let c = classes[depths[pairs.lca(i, j)]];
            values[i * n + j] = c;
            values[j * n + i] = c;
        }
    }
    Ok(CopheneticMatrix {
        labels: taxa.labels().to_vec(),
        values,
        class_fn: description.to_owned(),
    })
}

fn depth_plus_one(depth: usize) -> f64 {
    depth as f64 + 1.0
}

/// Cophenetic correlation of two rooted trees with class value depth + 1.
pub fn ccc(a: &Tree, b: &Tree) -> Result<f64> {
    ccc_with(a, b, depth_plus_one)
}

pub fn ccc_with<F: Fn(usize) -> f64 + Copy>(a: &Tree, b: &Tree, class: F) -> Result<f64> {
    a.check_same_labels(b)?;
    let ma = cophenetic_matrix(a, class, "custom")?;
    let mb = cophenetic_matrix(b, class, "custom")?;
    pearson(&ma.lower_triangle(), &mb.lower_triangle())
}

/// Cophenetic correlation of a rooted tree against data distances, class
/// value depth + 1.
pub fn ccc_data(tree: &Tree, data: &DistanceMatrix) -> Result<f64> {
    ccc_data_with(tree, data, depth_plus_one)
}

pub fn ccc_data_with<F: Fn(usize) -> f64>(
    tree: &Tree,
    data: &DistanceMatrix,
    class: F,
) -> Result<f64> {
    let m = cophenetic_matrix(tree, class, "custom")?;
    let data = data.sorted()?;
    if data.labels != m.labels {
        return Err(TreeDistError::LabelSetMismatch);
    }
    pearson(
        &m.lower_triangle(),
        &lower_triangle(&data.values, data.labels.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn self_correlation_is_one() {
        let a = t("(((1,2),3),(4,5));");
        assert!((ccc(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn anti_ordered_pair() {
        // pairs 12,13,14,23,24,34: classes (3,2,1,2,1,1) against (1,1,1,2,2,3)
        let a = t("(((1,2),3),4);");
        let b = t("(((3,4),2),1);");
        assert!((ccc(&a, &b).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn star_is_degenerate() {
        let s = t("[&R](1,2,3,4);");
        assert_eq!(ccc(&s, &s).unwrap_err(), TreeDistError::DegenerateVariance);
    }

    #[test]
    fn matrix_values() {
        let a = t("(((1,2),3),4);");
        let m = cophenetic_matrix(&a, depth_plus_one, "depth + 1").unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(2, 0), 2.0);
        assert_eq!(m.get(3, 1), 1.0);
        assert!(cophenetic_matrix(&a, |d| -(d as f64), "bad").is_err());
    }

    #[test]
    fn against_data() {
        let a = t("(((1,2),3),4);");
        let csv = "1,2,3,4\n0,1,2,4\n1,0,2,4\n2,2,0,3\n4,4,3,0\n";
        let d = DistanceMatrix::from_csv(csv.as_bytes()).unwrap();
        // deviations (4,1,-2,1,-2,-2)/3 and (-5,-2,4,-2,4,1)/3
        let expected = -42.0 / (30.0f64 * 66.0).sqrt();
        assert!((ccc_data(&a, &d).unwrap() - expected).abs() < 1e-12);

        let own = cophenetic_matrix(&a, depth_plus_one, "").unwrap();
        let own = DistanceMatrix::new(own.labels, own.values).unwrap();
        assert!((ccc_data(&a, &own).unwrap() - 1.0).abs() < 1e-15);

        let flat = DistanceMatrix::new(own.labels.clone(), vec![1.0; 16]).unwrap();
        assert_eq!(
            ccc_data(&a, &flat).unwrap_err(),
            TreeDistError::DegenerateVariance
        );
    }

    #[test]
    fn csv_with_row_labels_and_errors() {
        let csv = ",b,a\nb,0,2\na,2,0\n";
        let d = DistanceMatrix::from_csv(csv.as_bytes()).unwrap();
        assert_eq!(d.labels, vec![Label::from("b"), Label::from("a")]);
        assert!(DistanceMatrix::from_csv("a,b\n0,1\n2,0\n".as_bytes()).is_err());
        assert!(DistanceMatrix::from_csv("a,b\n0,x\n1,0\n".as_bytes()).is_err());
        assert!(DistanceMatrix::from_csv("a,b\n0,1\n".as_bytes()).is_err());
    }
}
