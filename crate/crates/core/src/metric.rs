//! Finite metric spaces: exact distance matrices, axiom validation,
//! diameter, induced subspaces, scaling, and brute-force isometry testing.

use thiserror::Error;

use crate::scalar::Scalar;

/// Which metric axiom a matrix breaks, with witness indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `d[i][i] != 0`.
    NonzeroDiagonal { i: usize },
    /// `d[i][j] < 0`.
    Negative { i: usize, j: usize },
    /// `d[i][j] != d[j][i]`.
    Asymmetry { i: usize, j: usize },
    /// `d[i][j] = 0` for distinct points.
    ZeroOffDiagonal { i: usize, j: usize },
    /// `d[i][k] > d[i][j] + d[j][k]`.
    Triangle { i: usize, j: usize, k: usize },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::NonzeroDiagonal { i } => write!(f, "nonzero-diagonal at point {i}"),
            AxiomViolation::Negative { i, j } => write!(f, "negative distance at ({i}, {j})"),
            AxiomViolation::Asymmetry { i, j } => write!(f, "asymmetry at ({i}, {j})"),
            AxiomViolation::ZeroOffDiagonal { i, j } => {
                write!(f, "zero-off-diagonal at ({i}, {j})")
            }
            AxiomViolation::Triangle { i, j, k } => {
                write!(f, "triangle inequality fails on ({i}, {j}, {k})")
            }
        }
    }
}

impl AxiomViolation {
    /// Short machine-readable tag for CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            AxiomViolation::NonzeroDiagonal { .. } => "nonzero-diagonal",
            AxiomViolation::Negative { .. } => "negative",
            AxiomViolation::Asymmetry { .. } => "asymmetry",
            AxiomViolation::ZeroOffDiagonal { .. } => "zero-off-diagonal",
            AxiomViolation::Triangle { .. } => "triangle",
        }
    }

    /// Witness indices, in axiom order.
    pub fn witness(&self) -> Vec<usize> {
        match *self {
            AxiomViolation::NonzeroDiagonal { i } => vec![i],
            AxiomViolation::Negative { i, j }
            | AxiomViolation::Asymmetry { i, j }
            | AxiomViolation::ZeroOffDiagonal { i, j } => vec![i, j],
            AxiomViolation::Triangle { i, j, k } => vec![i, j, k],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("label count {labels} does not match matrix dimension {dim}")]
    LabelCountMismatch { labels: usize, dim: usize },
    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },
    #[error("metric axiom violated: {0}")]
    Axiom(AxiomViolation),
    #[error("point index {index} out of range for space of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("subspace selection must be nonempty and duplicate-free")]
    BadSelection,
    #[error("scale factor must be positive")]
    NonpositiveFactor,
}

/// A finite metric space: distinct point labels plus a validated symmetric
/// distance matrix. Immutable after construction; every operation is a pure
/// function, so values are safe to share across workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Scalar>>,
}

impl FiniteMetricSpace {
    /// Validates the four metric axioms exhaustively (O(n^3) for the triangle
    /// inequality) and returns the space. The first violation in scan order
    /// is reported with witness indices.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Scalar>>) -> Result<Self, MetricError> {
        let dim = dist.len();
        if dim == 0 {
            return Err(MetricError::Empty);
        }
        for (row, entries) in dist.iter().enumerate() {
            if entries.len() != dim {
                return Err(MetricError::NotSquare {
                    row,
                    len: entries.len(),
                    dim,
                });
            }
        }
        if labels.len() != dim {
            return Err(MetricError::LabelCountMismatch {
                labels: labels.len(),
                dim,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(MetricError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        check_axioms(&dist).map_err(MetricError::Axiom)?;
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// One-point space; trivially a metric.
    pub fn point(label: impl Into<String>) -> Self {
        FiniteMetricSpace {
            labels: vec![label.into()],
            dist: vec![vec![Scalar::zero()]],
        }
    }

    /// Two points at the given (positive) distance.
    pub fn two_point(
        label_a: impl Into<String>,
        label_b: impl Into<String>,
        distance: Scalar,
    ) -> Result<Self, MetricError> {
        FiniteMetricSpace::new(
            vec![label_a.into(), label_b.into()],
            vec![
                vec![Scalar::zero(), distance.clone()],
                vec![distance, Scalar::zero()],
            ],
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn distance(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.dist
    }

    /// Largest pairwise distance; zero for a one-point space.
    pub fn diameter(&self) -> Scalar {
        let mut best = Scalar::zero();
        for row in &self.dist {
            for value in row {
                if *value > best {
                    best = value.clone();
                }
            }
        }
        best
    }

    /// Largest distance from point `i` to any point.
    pub fn eccentricity(&self, i: usize) -> &Scalar {
        self.dist[i].iter().max().expect("nonempty row")
    }

    /// Induced metric on the selected points, labels preserved.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self, MetricError> {
        if indices.is_empty() {
            return Err(MetricError::BadSelection);
        }
        for (pos, &index) in indices.iter().enumerate() {
            if index >= self.len() {
                return Err(MetricError::IndexOutOfRange {
                    index,
                    size: self.len(),
                });
            }
            if indices[..pos].contains(&index) {
                return Err(MetricError::BadSelection);
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.dist[i][j].clone()).collect())
            .collect();
        // The induced matrix inherits every axiom from the parent.
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Every distance multiplied by a positive factor.
    pub fn scale(&self, factor: &Scalar) -> Result<Self, MetricError> {
        if !factor.is_positive() {
            return Err(MetricError::NonpositiveFactor);
        }
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|d| d * factor).collect())
            .collect();
        Ok(FiniteMetricSpace {
            labels: self.labels.clone(),
            dist,
        })
    }

    /// Searches for a distance-preserving bijection onto `other`, returned as
    /// `perm` with `perm[i]` the image of point `i`. Candidates are filtered
    /// by per-point sorted distance multisets before backtracking, and tried
    /// in ascending index order so the first isometry found is deterministic.
    pub fn find_isometry(&self, other: &FiniteMetricSpace) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let profile = |space: &FiniteMetricSpace, i: usize| {
            let mut row = space.dist[i].clone();
            row.sort();
            row
        };
        let mine: Vec<_> = (0..n).map(|i| profile(self, i)).collect();
        let theirs: Vec<_> = (0..n).map(|j| profile(other, j)).collect();
        let candidates: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| mine[i] == theirs[j]).collect())
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            return None;
        }

        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        if self.extend_isometry(other, &candidates, &mut perm, &mut used) {
            Some(perm)
        } else {
            None
        }
    }

    fn extend_isometry(
        &self,
        other: &FiniteMetricSpace,
        candidates: &[Vec<usize>],
        perm: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let i = perm.len();
        if i == self.len() {
            return true;
        }
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            let consistent = (0..i).all(|prev| self.dist[prev][i] == other.dist[perm[prev]][j]);
            if !consistent {
                continue;
            }
            perm.push(j);
            used[j] = true;
            if self.extend_isometry(other, candidates, perm, used) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
        false
    }
}

#[allow(clippy::needless_range_loop)] // index pairs are the witness data
fn check_axioms(dist: &[Vec<Scalar>]) -> Result<(), AxiomViolation> {
    let n = dist.len();
    for i in 0..n {
        if !dist[i][i].is_zero() {
            return Err(AxiomViolation::NonzeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if dist[i][j].is_negative() {
                return Err(AxiomViolation::Negative { i, j });
            }
            if i < j && dist[i][j] != dist[j][i] {
                return Err(AxiomViolation::Asymmetry { i, j });
            }
            if i != j && dist[i][j].is_zero() {
                return Err(AxiomViolation::ZeroOffDiagonal { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    return Err(AxiomViolation::Triangle { i, j, k });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn space(labels: &[&str], rows: &[&[&str]]) -> Result<FiniteMetricSpace, MetricError> {
        FiniteMetricSpace::new(
            labels.iter().map(|l| l.to_string()).collect(),
            rows.iter()
                .map(|row| row.iter().map(|v| s(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn accepts_two_point_space() {
        let x = space(&["a", "b"], &[&["0", "3"], &["3", "0"]]).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.diameter(), s("3"));
    }

    #[test]
    fn rejects_triangle_violation_with_witness() {
        let err = space(
            &["a", "b", "c"],
            &[&["0", "1", "10"], &["1", "0", "1"], &["10", "1", "0"]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            MetricError::Axiom(AxiomViolation::Triangle { i: 0, j: 1, k: 2 })
        );
    }

    #[test]
    fn rejects_each_axiom_violation() {
        assert!(matches!(
            space(&["a", "b"], &[&["1", "3"], &["3", "0"]]),
            Err(MetricError::Axiom(AxiomViolation::NonzeroDiagonal { i: 0 }))
        ));
        assert!(matches!(
            space(&["a", "b"], &[&["0", "-1"], &["-1", "0"]]),
            Err(MetricError::Axiom(AxiomViolation::Negative { .. }))
        ));
        assert!(matches!(
            space(&["a", "b"], &[&["0", "1"], &["2", "0"]]),
            Err(MetricError::Axiom(AxiomViolation::Asymmetry { i: 0, j: 1 }))
        ));
        assert!(matches!(
            space(&["a", "b"], &[&["0", "0"], &["0", "0"]]),
            Err(MetricError::Axiom(AxiomViolation::ZeroOffDiagonal { .. }))
        ));
    }

    #[test]
    fn rejects_label_problems_and_empty() {
        assert!(matches!(
            space(&["a", "a"], &[&["0", "1"], &["1", "0"]]),
            Err(MetricError::DuplicateLabel { .. })
        ));
        assert!(matches!(
            space(&["a"], &[&["0", "1"], &["1", "0"]]),
            Err(MetricError::LabelCountMismatch { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![], vec![]),
            Err(MetricError::Empty)
        ));
        assert!(matches!(
            space(&["a", "b"], &[&["0", "1"], &["1"]]),
            Err(MetricError::NotSquare { row: 1, .. })
        ));
    }

    #[test]
    fn anchor_pair_at_three_r() {
        let anchor = FiniteMetricSpace::two_point("p+", "p-", s("3")).unwrap();
        assert_eq!(anchor.diameter(), s("3"));
    }

    #[test]
    fn diameter_of_point_is_zero() {
        assert_eq!(FiniteMetricSpace::point("x").diameter(), Scalar::zero());
    }

    #[test]
    fn subspace_identity_and_point() {
        let x = space(
            &["a", "b", "c"],
            &[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]],
        )
        .unwrap();
        assert_eq!(x.subspace(&[0, 1, 2]).unwrap(), x);
        let p = x.subspace(&[1]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.label(0), "b");
        assert!(matches!(
            x.subspace(&[5]),
            Err(MetricError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(x.subspace(&[]), Err(MetricError::BadSelection)));
        assert!(matches!(
            x.subspace(&[0, 0]),
            Err(MetricError::BadSelection)
        ));
    }

    #[test]
    fn scale_behaves_multiplicatively() {
        let x = space(&["a", "b"], &[&["0", "3"], &["3", "0"]]).unwrap();
        assert_eq!(x.scale(&Scalar::one()).unwrap(), x);
        let third = x.scale(&s("1/3")).unwrap();
        assert_eq!(third.distance(0, 1), &Scalar::one());
        let scaled = x.scale(&s("5")).unwrap();
        assert_eq!(scaled.diameter(), &x.diameter() * &s("5"));
        let twice = x.scale(&s("2")).unwrap().scale(&s("3")).unwrap();
        assert_eq!(twice, x.scale(&s("6")).unwrap());
        assert!(matches!(
            x.scale(&Scalar::zero()),
            Err(MetricError::NonpositiveFactor)
        ));
    }

    #[test]
    fn isometry_identity_and_mismatch() {
        let x = space(
            &["a", "b", "c"],
            &[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]],
        )
        .unwrap();
        assert_eq!(x.find_isometry(&x), Some(vec![0, 1, 2]));

        let u = FiniteMetricSpace::two_point("a", "b", s("1")).unwrap();
        let v = FiniteMetricSpace::two_point("a", "b", s("2")).unwrap();
        assert_eq!(u.find_isometry(&v), None);
        assert_eq!(u.find_isometry(&FiniteMetricSpace::point("z")), None);
    }

    #[test]
    fn isometry_found_under_permutation() {
        let x = space(
            &["a", "b", "c"],
            &[&["0", "1", "2"], &["1", "0", "3/2"], &["2", "3/2", "0"]],
        )
        .unwrap();
        // Same space with points listed in order (c, a, b).
        let y = space(
            &["c", "a", "b"],
            &[&["0", "2", "3/2"], &["2", "0", "1"], &["3/2", "1", "0"]],
        )
        .unwrap();
        let perm = x.find_isometry(&y).expect("isometric");
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(x.distance(i, j), y.distance(perm[i], perm[j]));
            }
        }
    }
}
