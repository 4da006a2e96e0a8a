//! The gluing construction: `n` spaces of diameter at most `r` are joined
//! with a two-point anchor block whose points sit at mutual distance `3r`,
//! and every distance between block `k` and block `l` is set to `5r|l - k|`.
//! The result is a single finite metric space of diameter exactly `5rn`
//! whose Gromov-Hausdorff distances reproduce the l-infinity product of the
//! blockwise distances.

use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceError};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("radius must be positive")]
    NonpositiveRadius,
    #[error("a product point needs at least one block")]
    ZeroBlocks,
    #[error("params expect {expected} blocks, got {got}")]
    BlockCountMismatch { expected: usize, got: usize },
    #[error("block {block} has diameter {diameter}, above the cap {cap}")]
    DiameterExceeded {
        block: usize,
        diameter: Scalar,
        cap: Scalar,
    },
    #[error("embedded spaces have different (r, n) parameters")]
    ParamMismatch,
    #[error("correspondence {index} is {got_left}x{got_right}, blocks are {left}x{right}")]
    BlockSizeMismatch {
        index: usize,
        got_left: usize,
        got_right: usize,
        left: usize,
        right: usize,
    },
    #[error("embedded-space metadata is inconsistent: {0}")]
    BadMetadata(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

/// Diameter cap `r > 0` and tuple length `n >= 1` of a gluing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingParams {
    r: Scalar,
    n: usize,
}

impl EmbeddingParams {
    pub fn new(r: Scalar, n: usize) -> Result<Self, EmbeddingError> {
        if !r.is_positive() {
            return Err(EmbeddingError::NonpositiveRadius);
        }
        if n == 0 {
            return Err(EmbeddingError::ZeroBlocks);
        }
        Ok(EmbeddingParams { r, n })
    }

    pub fn r(&self) -> &Scalar {
        &self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `5rn`, the exact diameter of every gluing with these parameters.
    pub fn expected_diameter(&self) -> Scalar {
        &(&self.r * &Scalar::from_int(5)) * &Scalar::from_int(self.n as i64)
    }
}

/// A tuple of finite metric spaces, one per coordinate of the product.
/// Block diameters are checked against `r` when the tuple is glued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPoint {
    blocks: Vec<FiniteMetricSpace>,
}

impl ProductPoint {
    pub fn new(blocks: Vec<FiniteMetricSpace>) -> Result<Self, EmbeddingError> {
        if blocks.is_empty() {
            return Err(EmbeddingError::ZeroBlocks);
        }
        Ok(ProductPoint { blocks })
    }

    pub fn blocks(&self) -> &[FiniteMetricSpace] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A glued space plus its block decomposition: `block_of[i]` is the block
/// index of point `i`, with block 0 the two-point anchor `{p+, p-}` and
/// blocks `1..=n` the tuple entries in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedSpace {
    space: FiniteMetricSpace,
    block_of: Vec<usize>,
    params: EmbeddingParams,
}

impl EmbeddedSpace {
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn params(&self) -> &EmbeddingParams {
        &self.params
    }

    /// Point indices belonging to block `k` (0 is the anchor pair).
    pub fn block_points(&self, k: usize) -> Vec<usize> {
        self.block_of
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == k)
            .map(|(i, _)| i)
            .collect()
    }

    /// The induced metric on block `k`.
    pub fn block_subspace(&self, k: usize) -> Result<FiniteMetricSpace, MetricError> {
        self.space.subspace(&self.block_points(k))
    }

    /// Rebuilds an embedded space from serialized parts, re-deriving every
    /// structural invariant: anchors first at `3r`, in-block distances below
    /// the cap, cross-block distances exactly `5r|l - k|`.
    pub fn from_parts(
        space: FiniteMetricSpace,
        block_of: Vec<usize>,
        params: EmbeddingParams,
    ) -> Result<Self, EmbeddingError> {
        let bad = |message: String| EmbeddingError::BadMetadata(message);
        if block_of.len() != space.len() {
            return Err(bad(format!(
                "block_of has {} entries for {} points",
                block_of.len(),
                space.len()
            )));
        }
        if block_of.iter().any(|&b| b > params.n) {
            return Err(bad(format!("block index above n = {}", params.n)));
        }
        for k in 0..=params.n {
            if !block_of.contains(&k) {
                return Err(bad(format!("block {k} is empty")));
            }
        }
        if block_of.iter().filter(|&&b| b == 0).count() != 2 || block_of[0] != 0 || block_of[1] != 0
        {
            return Err(bad("anchor block must be the first two points".into()));
        }
        let candidate = EmbeddedSpace {
            space,
            block_of,
            params,
        };
        candidate.check_distances()?;
        Ok(candidate)
    }

    fn check_distances(&self) -> Result<(), EmbeddingError> {
        let bad = |message: String| EmbeddingError::BadMetadata(message);
        let r = &self.params.r;
        let five_r = r * &Scalar::from_int(5);
        let three_r = r * &Scalar::from_int(3);
        let n = self.space.len();
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (self.block_of[i], self.block_of[j]);
                let d = self.space.distance(i, j);
                if bi == bj {
                    if bi == 0 && i != j && *d != three_r {
                        return Err(bad(format!("anchor distance is {d}, expected {three_r}")));
                    }
                    if bi > 0 && *d > *r {
                        return Err(bad(format!("in-block distance {d} above the cap {r}")));
                    }
                } else {
                    let gap = Scalar::from_int(bi.abs_diff(bj) as i64);
                    if *d != &five_r * &gap {
                        return Err(bad(format!(
                            "cross-block distance ({i}, {j}) is {d}, expected {}",
                            &five_r * &gap
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The two-point anchor `{p+, p-}` at mutual distance `3r`.
pub fn anchor_space(r: &Scalar) -> Result<FiniteMetricSpace, EmbeddingError> {
    if !r.is_positive() {
        return Err(EmbeddingError::NonpositiveRadius);
    }
    Ok(FiniteMetricSpace::two_point(
        "p+",
        "p-",
        r * &Scalar::from_int(3),
    )?)
}

/// Glues a tuple into a single space: points of block `k` keep their own
/// distances, any two points of distinct blocks `k != l` sit at `5r|l - k|`,
/// and the anchor pair occupies block 0 at distance `3r`. Labels are
/// prefixed `"k:"` so isometric blocks stay disjoint. The construction
/// guarantees the metric axioms; they are re-validated anyway.
pub fn embed(
    point: &ProductPoint,
    params: &EmbeddingParams,
) -> Result<EmbeddedSpace, EmbeddingError> {
    if point.len() != params.n {
        return Err(EmbeddingError::BlockCountMismatch {
            expected: params.n,
            got: point.len(),
        });
    }
    for (k, block) in point.blocks().iter().enumerate() {
        let diameter = block.diameter();
        if diameter > *params.r() {
            return Err(EmbeddingError::DiameterExceeded {
                block: k + 1,
                diameter,
                cap: params.r().clone(),
            });
        }
    }

    let mut labels = vec!["p+".to_owned(), "p-".to_owned()];
    let mut block_of = vec![0, 0];
    for (k, block) in point.blocks().iter().enumerate() {
        for label in block.labels() {
            labels.push(format!("{}:{label}", k + 1));
            block_of.push(k + 1);
        }
    }

    let total = labels.len();
    let five_r = params.r() * &Scalar::from_int(5);
    let three_r = params.r() * &Scalar::from_int(3);
    // Offset of each block's first point in the glued index space.
    let mut offsets = vec![2usize];
    for block in point.blocks() {
        offsets.push(offsets.last().unwrap() + block.len());
    }

    let mut dist = vec![vec![Scalar::zero(); total]; total];
    for i in 0..total {
        for j in 0..total {
            let (bi, bj) = (block_of[i], block_of[j]);
            dist[i][j] = if bi == bj {
                if bi == 0 {
                    if i == j {
                        Scalar::zero()
                    } else {
                        three_r.clone()
                    }
                } else {
                    let block = &point.blocks()[bi - 1];
                    let base = offsets[bi - 1];
                    block.distance(i - base, j - base).clone()
                }
            } else {
                &five_r * &Scalar::from_int(bi.abs_diff(bj) as i64)
            };
        }
    }

    let space = FiniteMetricSpace::new(labels, dist)?;
    Ok(EmbeddedSpace {
        space,
        block_of,
        params: params.clone(),
    })
}

/// The upper-bound correspondence of the construction: anchors matched to
/// anchors, and the given per-block correspondences shifted into the glued
/// index spaces. Its distortion is exactly the largest block distortion,
/// because cross-block and anchor pair-pairs contribute zero.
pub fn glue_correspondence(
    block_correspondences: &[Correspondence],
    embedded_x: &EmbeddedSpace,
    embedded_y: &EmbeddedSpace,
) -> Result<Correspondence, EmbeddingError> {
    if embedded_x.params != embedded_y.params {
        return Err(EmbeddingError::ParamMismatch);
    }
    let n = embedded_x.params.n;
    if block_correspondences.len() != n {
        return Err(EmbeddingError::BlockCountMismatch {
            expected: n,
            got: block_correspondences.len(),
        });
    }

    let mut pairs = vec![(0, 0), (1, 1)];
    for (index, relation) in block_correspondences.iter().enumerate() {
        let k = index + 1;
        let x_points = embedded_x.block_points(k);
        let y_points = embedded_y.block_points(k);
        if relation.left_size() != x_points.len() || relation.right_size() != y_points.len() {
            return Err(EmbeddingError::BlockSizeMismatch {
                index,
                got_left: relation.left_size(),
                got_right: relation.right_size(),
                left: x_points.len(),
                right: y_points.len(),
            });
        }
        for &(i, j) in relation.pairs() {
            pairs.push((x_points[i], y_points[j]));
        }
    }
    Ok(Correspondence::new(
        pairs,
        embedded_x.space.len(),
        embedded_y.space.len(),
    )?)
}
