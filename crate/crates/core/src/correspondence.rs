//! Correspondences between two point sets: relations that are total and
//! surjective in both directions, their images, inverses, and distortion.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

/// Default cap on `left * right` grid cells for exhaustive enumeration;
/// the stream has up to `2^(left*right)` candidates.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("sides must be nonempty")]
    EmptySide,
    #[error("pair ({0}, {1}) out of range for {2}x{3} grid")]
    PairOutOfRange(usize, usize, usize, usize),
    #[error("left point {index} is unmatched")]
    UncoveredLeft { index: usize },
    #[error("right point {index} is unmatched")]
    UncoveredRight { index: usize },
    #[error("index {index} out of range for side of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("correspondence is {got_left}x{got_right} but spaces are {left}x{right}")]
    SizeMismatch {
        got_left: usize,
        got_right: usize,
        left: usize,
        right: usize,
    },
    #[error("grid of {cells} cells exceeds enumeration cap {cap}")]
    CapExceeded { cells: usize, cap: usize },
}

/// A relation between `{0..left_size}` and `{0..right_size}` in which every
/// point on either side is matched at least once. Pairs are kept sorted and
/// duplicate-free, so equal relations compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
    left_size: usize,
    right_size: usize,
}

impl Correspondence {
    pub fn new(
        mut pairs: Vec<(usize, usize)>,
        left_size: usize,
        right_size: usize,
    ) -> Result<Self, CorrespondenceError> {
        if left_size == 0 || right_size == 0 {
            return Err(CorrespondenceError::EmptySide);
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut left_hit = vec![false; left_size];
        let mut right_hit = vec![false; right_size];
        for &(i, j) in &pairs {
            if i >= left_size || j >= right_size {
                return Err(CorrespondenceError::PairOutOfRange(
                    i, j, left_size, right_size,
                ));
            }
            left_hit[i] = true;
            right_hit[j] = true;
        }
        if let Some(index) = left_hit.iter().position(|hit| !hit) {
            return Err(CorrespondenceError::UncoveredLeft { index });
        }
        if let Some(index) = right_hit.iter().position(|hit| !hit) {
            return Err(CorrespondenceError::UncoveredRight { index });
        }
        Ok(Correspondence {
            pairs,
            left_size,
            right_size,
        })
    }

    /// The diagonal `{(i, i)}` on a set of size `n`.
    pub fn identity(n: usize) -> Self {
        Correspondence {
            pairs: (0..n).map(|i| (i, i)).collect(),
            left_size: n,
            right_size: n,
        }
    }

    /// The full relation `X x Y`.
    pub fn full(left_size: usize, right_size: usize) -> Self {
        let pairs = (0..left_size)
            .flat_map(|i| (0..right_size).map(move |j| (i, j)))
            .collect();
        Correspondence {
            pairs,
            left_size,
            right_size,
        }
    }

    /// `graph(f) ∪ graph(g)^{-1}` for maps `f: X -> Y` and `g: Y -> X`;
    /// always a valid correspondence.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Self {
        let left_size = f.len();
        let right_size = g.len();
        let mut pairs: Vec<(usize, usize)> = f
            .iter()
            .enumerate()
            .map(|(i, &j)| (i, j))
            .chain(g.iter().enumerate().map(|(j, &i)| (i, j)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Correspondence {
            pairs,
            left_size,
            right_size,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    /// True when every pair of `self` also belongs to `other`.
    pub fn is_subrelation_of(&self, other: &Correspondence) -> bool {
        self.left_size == other.left_size
            && self.right_size == other.right_size
            && self.pairs.iter().all(|&p| other.contains(p))
    }

    /// `{ j | i in set, (i, j) in R }`.
    pub fn image(&self, set: &[usize]) -> Result<BTreeSet<usize>, CorrespondenceError> {
        for &index in set {
            if index >= self.left_size {
                return Err(CorrespondenceError::IndexOutOfRange {
                    index,
                    size: self.left_size,
                });
            }
        }
        Ok(self
            .pairs
            .iter()
            .filter(|(i, _)| set.contains(i))
            .map(|&(_, j)| j)
            .collect())
    }

    /// The relation with every pair flipped and the sides swapped.
    pub fn inverse(&self) -> Correspondence {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Correspondence {
            pairs,
            left_size: self.right_size,
            right_size: self.left_size,
        }
    }

    /// `max |d_X(x, xi) - d_Y(y, eta)|` over ordered pairs of matched pairs.
    /// O(|R|^2) exact rational arithmetic.
    pub fn distortion(
        &self,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> Result<Scalar, CorrespondenceError> {
        if self.left_size != x.len() || self.right_size != y.len() {
            return Err(CorrespondenceError::SizeMismatch {
                got_left: self.left_size,
                got_right: self.right_size,
                left: x.len(),
                right: y.len(),
            });
        }
        let mut worst = Scalar::zero();
        for &(a, b) in &self.pairs {
            for &(c, d) in &self.pairs {
                let gap = x.distance(a, c).abs_diff(y.distance(b, d));
                if gap > worst {
                    worst = gap;
                }
            }
        }
        Ok(worst)
    }
}

/// Streams every both-ways-surjective subset of the `left x right` index
/// grid exactly once, in ascending bitmask order (bit `i*right + j` encodes
/// the pair `(i, j)`).
pub fn enumerate_correspondences(
    left_size: usize,
    right_size: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Correspondence>, CorrespondenceError> {
    if left_size == 0 || right_size == 0 {
        return Err(CorrespondenceError::EmptySide);
    }
    let cells = left_size * right_size;
    if cells > cap.min(63) {
        return Err(CorrespondenceError::CapExceeded {
            cells,
            cap: cap.min(63),
        });
    }
    let iter = (1u64..(1u64 << cells)).filter_map(move |mask| {
        let mut left_hit = 0u64;
        let mut right_hit = 0u64;
        for i in 0..left_size {
            for j in 0..right_size {
                if mask >> (i * right_size + j) & 1 == 1 {
                    left_hit |= 1 << i;
                    right_hit |= 1 << j;
                }
            }
        }
        if left_hit != (1 << left_size) - 1 || right_hit != (1 << right_size) - 1 {
            return None;
        }
        let pairs = (0..cells)
            .filter(|bit| mask >> bit & 1 == 1)
            .map(|bit| (bit / right_size, bit % right_size))
            .collect();
        Some(Correspondence {
            pairs,
            left_size,
            right_size,
        })
    });
    Ok(iter)
}

/// Streams `graph(f) ∪ graph(g)^{-1}` for every pair of maps `f: X -> Y`,
/// `g: Y -> X`, in lexicographic order of the concatenated assignment vector
/// (rightmost digit fastest). Duplicates as relations are allowed. Every
/// correspondence contains such a union, and distortion is monotone under
/// inclusion, so minimizing over this family minimizes over all of GHC.
pub fn enumerate_function_pairs(
    left_size: usize,
    right_size: usize,
) -> impl Iterator<Item = Correspondence> {
    FunctionPairs {
        f: vec![0; left_size],
        g: vec![0; right_size],
        left_size,
        right_size,
        done: left_size == 0 || right_size == 0,
    }
}

struct FunctionPairs {
    f: Vec<usize>,
    g: Vec<usize>,
    left_size: usize,
    right_size: usize,
    done: bool,
}

impl Iterator for FunctionPairs {
    type Item = Correspondence;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let current = Correspondence::from_maps(&self.f, &self.g);
        // Odometer step: g advances fastest, then f.
        if !advance(&mut self.g, self.left_size) && !advance(&mut self.f, self.right_size) {
            self.done = true;
        }
        Some(current)
    }
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for digit in digits.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}
