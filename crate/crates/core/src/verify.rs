//! Desk-scale verification that the gluing construction preserves
//! l-infinity product distances, plus diagnostics that recover the
//! structure every low-distortion correspondence between two gluings must
//! have (anchors to anchors, blocks to matching blocks), and constructive
//! embeddings of real and l-infinity point sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceError};
use crate::embedding::{embed, EmbeddedSpace, EmbeddingError, EmbeddingParams, ProductPoint};
use crate::gh::{gh_exact_with, SearchOptions};
use crate::metric::FiniteMetricSpace;
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("tuples have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("offset must be positive")]
    NonpositiveOffset,
    #[error("value {index} is negative; shift inputs to be nonnegative first")]
    NegativeValue { index: usize },
    #[error("no points supplied")]
    EmptyInput,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error(
        "point {point}, coordinate {coordinate} is out of range: coordinates must be nonnegative"
    )]
    RangeExceeded { point: usize, coordinate: usize },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

/// Search statistics of one verified instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes explored by the search on the glued spaces.
    pub glued_nodes: u64,
    /// Nodes explored by all per-block searches combined.
    pub block_nodes: u64,
}

/// Both sides of the product identity for one instance, computed exactly.
///
/// `lhs` is the distance between the two gluings, `rhs` the largest
/// blockwise distance. `equal` is only meaningful when `conclusive`; a
/// budget-starved search leaves the report inconclusive rather than
/// unequal. `glue_distortion` is the distortion of the glued per-block
/// witnesses, which certifies `lhs <= rhs` independently of the search.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub per_block: Vec<Scalar>,
    pub equal: bool,
    pub conclusive: bool,
    pub witness: Correspondence,
    pub params: EmbeddingParams,
    pub glue_distortion: Scalar,
    pub stats: SearchStats,
}

/// `max_k d_GH(X_k, Y_k)`, each coordinate computed exactly.
pub fn linf_product_distance(
    x: &ProductPoint,
    y: &ProductPoint,
    options: &SearchOptions,
) -> Result<Scalar, VerifyError> {
    if x.len() != y.len() {
        return Err(VerifyError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut worst = Scalar::zero();
    for (bx, by) in x.blocks().iter().zip(y.blocks()) {
        let value = gh_exact_with(bx, by, options).value;
        if value > worst {
            worst = value;
        }
    }
    Ok(worst)
}

/// Computes both sides of the identity for one instance: glues both tuples,
/// runs the exact search on the gluings (`lhs`) and on every block pair
/// (`rhs`), and cross-checks `lhs <= rhs` constructively by gluing the
/// per-block witnesses.
pub fn verify_instance(
    x: &ProductPoint,
    y: &ProductPoint,
    params: &EmbeddingParams,
    options: &SearchOptions,
) -> Result<VerifyReport, VerifyError> {
    if x.len() != y.len() {
        return Err(VerifyError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let glued_x = embed(x, params)?;
    let glued_y = embed(y, params)?;

    let block_options = SearchOptions {
        budget: options.budget,
        workers: 1,
    };
    let mut per_block = Vec::with_capacity(x.len());
    let mut block_witnesses = Vec::with_capacity(x.len());
    let mut block_nodes = 0u64;
    let mut blocks_exact = true;
    for (bx, by) in x.blocks().iter().zip(y.blocks()) {
        let result = gh_exact_with(bx, by, &block_options);
        block_nodes += result.nodes_explored;
        blocks_exact &= result.exact;
        per_block.push(result.value);
        block_witnesses.push(result.witness);
    }
    let rhs = per_block.iter().max().expect("nonempty tuple").clone();

    let glue = crate::embedding::glue_correspondence(&block_witnesses, &glued_x, &glued_y)?;
    let glue_distortion = glue.distortion(glued_x.space(), glued_y.space())?;

    let glued = gh_exact_with(glued_x.space(), glued_y.space(), options);
    let conclusive = glued.exact && blocks_exact;
    let equal = conclusive && glued.value == rhs;

    Ok(VerifyReport {
        lhs: glued.value,
        rhs,
        per_block,
        equal,
        conclusive,
        witness: glued.witness,
        params: params.clone(),
        glue_distortion,
        stats: SearchStats {
            glued_nodes: glued.nodes_explored,
            block_nodes,
        },
    })
}

/// How a low-distortion correspondence acts on the anchor pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorMap {
    Identity,
    Swap,
}

/// Structural facts that must hold for every correspondence between two
/// gluings with distortion below `2r`; a violation is a counterexample to
/// the construction and should never occur for valid inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureViolation {
    AnchorEscapesBlock { anchor: usize, hit: usize },
    AnchorImageNotSingleton { anchor: usize },
    AnchorsCollapse,
    AnchorMapsNotMutuallyInverse,
    BlockTouchesAnchor { block: usize },
    BlockStraddles { block: usize, hits: Vec<usize> },
    BlockMapNotBijective { image: Vec<usize> },
}

impl std::fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureViolation::AnchorEscapesBlock { anchor, hit } => {
                write!(f, "anchor {anchor} is matched to non-anchor point {hit}")
            }
            StructureViolation::AnchorImageNotSingleton { anchor } => {
                write!(f, "anchor {anchor} is matched to both anchors")
            }
            StructureViolation::AnchorsCollapse => {
                write!(f, "both anchors are matched to the same point")
            }
            StructureViolation::AnchorMapsNotMutuallyInverse => {
                write!(f, "the forward and inverse anchor maps disagree")
            }
            StructureViolation::BlockTouchesAnchor { block } => {
                write!(f, "block {block} is matched into the anchor block")
            }
            StructureViolation::BlockStraddles { block, hits } => {
                write!(f, "block {block} is matched into blocks {hits:?}")
            }
            StructureViolation::BlockMapNotBijective { image } => {
                write!(f, "induced block map {image:?} is not a permutation")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnosticError {
    #[error("embedded spaces have different (r, n) parameters")]
    ParamMismatch,
    #[error("distortion {distortion} is not below the threshold {threshold}")]
    DistortionTooLarge {
        distortion: Scalar,
        threshold: Scalar,
    },
    #[error("proof-structure violation: {0}")]
    Structure(StructureViolation),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

fn check_diagnostic_preconditions(
    relation: &Correspondence,
    glued_x: &EmbeddedSpace,
    glued_y: &EmbeddedSpace,
) -> Result<(), DiagnosticError> {
    if glued_x.params() != glued_y.params() {
        return Err(DiagnosticError::ParamMismatch);
    }
    let distortion = relation.distortion(glued_x.space(), glued_y.space())?;
    let threshold = glued_x.params().r().double();
    if distortion >= threshold {
        return Err(DiagnosticError::DistortionTooLarge {
            distortion,
            threshold,
        });
    }
    Ok(())
}

/// Recovers the anchor-to-anchor bijection induced by a correspondence with
/// distortion below `2r`: each anchor must be matched to exactly one anchor
/// on the other side, the two images must differ, and the forward and
/// inverse maps must agree.
pub fn recover_anchor_map(
    relation: &Correspondence,
    glued_x: &EmbeddedSpace,
    glued_y: &EmbeddedSpace,
) -> Result<AnchorMap, DiagnosticError> {
    check_diagnostic_preconditions(relation, glued_x, glued_y)?;

    let anchor_image = |rel: &Correspondence,
                        glued: &EmbeddedSpace,
                        anchor: usize|
     -> Result<usize, DiagnosticError> {
        let image = rel.image(&[anchor])?;
        for &hit in &image {
            if glued.block_of()[hit] != 0 {
                return Err(DiagnosticError::Structure(
                    StructureViolation::AnchorEscapesBlock { anchor, hit },
                ));
            }
        }
        if image.len() != 1 {
            return Err(DiagnosticError::Structure(
                StructureViolation::AnchorImageNotSingleton { anchor },
            ));
        }
        Ok(*image.iter().next().expect("singleton"))
    };

    let inverse = relation.inverse();
    let plus = anchor_image(relation, glued_y, 0)?;
    let minus = anchor_image(relation, glued_y, 1)?;
    if plus == minus {
        return Err(DiagnosticError::Structure(
            StructureViolation::AnchorsCollapse,
        ));
    }
    let back_plus = anchor_image(&inverse, glued_x, 0)?;
    let back_minus = anchor_image(&inverse, glued_x, 1)?;
    if back_plus == back_minus {
        return Err(DiagnosticError::Structure(
            StructureViolation::AnchorsCollapse,
        ));
    }
    // The forward map {p+, p-} -> {p+, p-} and the inverse map must be
    // inverses of each other; on a two-point set each is an involution, so
    // they must simply coincide.
    if back_plus != plus || back_minus != minus {
        return Err(DiagnosticError::Structure(
            StructureViolation::AnchorMapsNotMutuallyInverse,
        ));
    }
    Ok(if plus == 0 {
        AnchorMap::Identity
    } else {
        AnchorMap::Swap
    })
}

/// Recovers the block permutation induced by a correspondence with
/// distortion below `2r`: block `k` must be matched into exactly one block
/// `sigma(k) >= 1`, and `sigma` must be a permutation. Returned as a vector
/// with `sigma[k-1]` the image of block `k`.
pub fn recover_block_permutation(
    relation: &Correspondence,
    glued_x: &EmbeddedSpace,
    glued_y: &EmbeddedSpace,
) -> Result<Vec<usize>, DiagnosticError> {
    check_diagnostic_preconditions(relation, glued_x, glued_y)?;

    let n = glued_x.params().n();
    let mut sigma = Vec::with_capacity(n);
    for k in 1..=n {
        let points = glued_x.block_points(k);
        let image = relation.image(&points)?;
        let hits: BTreeSet<usize> = image.iter().map(|&j| glued_y.block_of()[j]).collect();
        if hits.contains(&0) {
            return Err(DiagnosticError::Structure(
                StructureViolation::BlockTouchesAnchor { block: k },
            ));
        }
        if hits.len() != 1 {
            return Err(DiagnosticError::Structure(
                StructureViolation::BlockStraddles {
                    block: k,
                    hits: hits.into_iter().collect(),
                },
            ));
        }
        sigma.push(*hits.iter().next().expect("singleton"));
    }
    let mut sorted = sigma.clone();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(DiagnosticError::Structure(
            StructureViolation::BlockMapNotBijective { image: sigma },
        ));
    }
    Ok(sigma)
}

/// Embeds real values as two-point spaces: `t` becomes the pair at distance
/// `offset + 2t`, so any two outputs sit at distance `|s - t|` (the
/// two-point formula halves the gap of the gaps).
pub fn embed_real_points(
    values: &[Scalar],
    offset: &Scalar,
) -> Result<Vec<FiniteMetricSpace>, VerifyError> {
    if !offset.is_positive() {
        return Err(VerifyError::NonpositiveOffset);
    }
    values
        .iter()
        .enumerate()
        .map(|(index, value)| {
            if value.is_negative() {
                return Err(VerifyError::NegativeValue { index });
            }
            let space = FiniteMetricSpace::two_point("a", "b", offset + &value.double())
                .expect("offset + 2t is positive");
            Ok(space)
        })
        .collect()
}

/// One glued space per input point, under shared parameters.
#[derive(Debug, Clone)]
pub struct LinfEmbedding {
    pub spaces: Vec<EmbeddedSpace>,
    pub params: EmbeddingParams,
    pub offset: Scalar,
}

/// `max_k |u_k - v_k|`.
pub fn linf_distance(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.abs_diff(b))
        .max()
        .unwrap_or_else(Scalar::zero)
}

/// Embeds nonnegative bounded points of R^n (l-infinity metric) as glued
/// spaces whose pairwise distances reproduce the l-infinity distances
/// exactly: each coordinate becomes a two-point block via
/// [`embed_real_points`] (offset 1), and `r` is `1 + 2 * range` rounded up
/// to an integer.
pub fn embed_linf_points(points: &[Vec<Scalar>]) -> Result<LinfEmbedding, VerifyError> {
    if points.is_empty() {
        return Err(VerifyError::EmptyInput);
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(VerifyError::ZeroDimension);
    }
    for (index, point) in points.iter().enumerate() {
        if point.len() != dim {
            return Err(VerifyError::DimensionMismatch {
                index,
                expected: dim,
                got: point.len(),
            });
        }
        for (coordinate, value) in point.iter().enumerate() {
            if value.is_negative() {
                return Err(VerifyError::RangeExceeded {
                    point: index,
                    coordinate,
                });
            }
        }
    }

    let offset = Scalar::one();
    let range = points
        .iter()
        .flat_map(|p| p.iter())
        .max()
        .cloned()
        .unwrap_or_else(Scalar::zero);
    let radius = (&offset + &range.double()).ceil();
    let params = EmbeddingParams::new(radius, dim)?;

    let mut spaces = Vec::with_capacity(points.len());
    for point in points {
        let blocks = embed_real_points(point, &offset)?;
        let tuple = ProductPoint::new(blocks)?;
        spaces.push(embed(&tuple, &params)?);
    }
    Ok(LinfEmbedding {
        spaces,
        params,
        offset,
    })
}

/// Deterministic random tuple: block sizes in `1..=max_block_size`, pairwise
/// distances drawn from rationals in `[r/2, r]` with denominators up to 6.
/// Any such matrix is automatically a metric (the largest entry is at most
/// twice the smallest) with diameter at most `r`.
#[allow(clippy::needless_range_loop)]
pub fn random_product_point(
    seed: u64,
    n: usize,
    r: &Scalar,
    max_block_size: usize,
) -> ProductPoint {
    assert!(n >= 1, "tuple length must be positive");
    assert!(max_block_size >= 1, "block size cap must be positive");
    assert!(r.is_positive(), "radius must be positive");

    let mut rng = SplitMix64::new(seed);
    let mut blocks = Vec::with_capacity(n);
    for _ in 0..n {
        let size = 1 + rng.below(max_block_size as u64) as usize;
        let labels: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let mut dist = vec![vec![Scalar::zero(); size]; size];
        for i in 0..size {
            for j in (i + 1)..size {
                let denom = 2 + rng.below(5) as i64; // 2..=6
                let lo = (denom + 1) / 2;
                let numer = lo + rng.below((denom - lo + 1) as u64) as i64;
                let d = r * &Scalar::ratio(numer, denom);
                dist[i][j] = d.clone();
                dist[j][i] = d;
            }
        }
        blocks.push(
            FiniteMetricSpace::new(labels, dist).expect("the [r/2, r] family is always metric"),
        );
    }
    ProductPoint::new(blocks).expect("n >= 1")
}

/// Configuration for a batch of randomized instances.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    pub n: usize,
    pub r: Scalar,
    pub max_block_size: usize,
    pub budget: Option<u64>,
    pub workers: usize,
}

/// One generated instance and its report.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub index: usize,
    pub x: ProductPoint,
    pub y: ProductPoint,
    pub report: VerifyReport,
}

/// Runs `instances` seeded random instances. Instances are independent and
/// may be computed on several workers; the output order and every report
/// are identical for any worker count.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<SuiteInstance>, VerifyError> {
    let params = EmbeddingParams::new(config.r.clone(), config.n)?;
    let mut seeder = SplitMix64::new(config.seed);
    let seeds: Vec<(u64, u64)> = (0..config.instances)
        .map(|_| (seeder.next_u64(), seeder.next_u64()))
        .collect();
    let options = SearchOptions {
        budget: config.budget,
        workers: 1,
    };

    let run_one = |index: usize| -> Result<SuiteInstance, VerifyError> {
        let (seed_x, seed_y) = seeds[index];
        let x = random_product_point(seed_x, config.n, &config.r, config.max_block_size);
        let y = random_product_point(seed_y, config.n, &config.r, config.max_block_size);
        let report = verify_instance(&x, &y, &params, &options)?;
        Ok(SuiteInstance {
            index,
            x,
            y,
            report,
        })
    };

    let workers = config.workers.max(1).min(config.instances.max(1));
    if workers <= 1 {
        return (0..config.instances).map(run_one).collect();
    }
    let mut collected: Vec<(usize, Result<SuiteInstance, VerifyError>)> =
        std::thread::scope(|scope| {
            let run_one = &run_one;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..config.instances)
                            .step_by(workers)
                            .map(|i| (i, run_one(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite worker panicked"))
                .collect()
        });
    collected.sort_by_key(|(index, _)| *index);
    collected.into_iter().map(|(_, result)| result).collect()
}
