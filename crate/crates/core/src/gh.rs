//! Exact Gromov-Hausdorff distance between finite metric spaces: a slow
//! enumeration oracle, a branch-and-bound solver over function pairs, and
//! cheap diameter-based bounds.
//!
//! All routines first rescale both distance matrices to a common denominator
//! so the inner loops compare integers (i128 when they fit, big integers
//! otherwise) instead of cross-multiplying rationals. The rescaling is exact,
//! so minima and minimizers are identical to the rational computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::correspondence::{enumerate_function_pairs, Correspondence, CorrespondenceError};
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhError {
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

/// Which algorithm produced a [`GhResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    FunctionPairs,
    BranchAndBound,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::BruteForce => write!(f, "bruteforce"),
            Method::FunctionPairs => write!(f, "function-pairs"),
            Method::BranchAndBound => write!(f, "branch-and-bound"),
        }
    }
}

/// Outcome of a distance computation. `distortion(witness) = 2 * value`
/// holds exactly. When `exact` is false the search ran out of node budget
/// and `value` is only an upper bound certified by `witness`.
#[derive(Debug, Clone)]
pub struct GhResult {
    pub value: Scalar,
    pub witness: Correspondence,
    pub nodes_explored: u64,
    pub method: Method,
    pub exact: bool,
}

/// Node budget and worker count for [`gh_exact_with`].
///
/// The observable result (value, witness, node count) never depends on
/// `workers`: top-level branches are searched independently and merged in a
/// fixed order. A budgeted search always runs on one worker so the node
/// counter stays meaningful.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub budget: Option<u64>,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            workers: 1,
        }
    }
}

/// `|diam(X) - diam(Y)| / 2`; the diameter map is 2-Lipschitz, so this is a
/// lower bound on the distance.
pub fn gh_lower_bound_diam(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Scalar {
    x.diameter().abs_diff(&y.diameter()).half()
}

/// Half the distortion of the full relation `X x Y`; an upper bound that is
/// itself at most `max(diam X, diam Y) / 2`.
pub fn gh_upper_bound_full_relation(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Scalar {
    Correspondence::full(x.len(), y.len())
        .distortion(x, y)
        .expect("sizes match by construction")
        .half()
}

/// Exact minimum of half the distortion over every correspondence, by
/// exhaustive enumeration. The witness is the first minimizer in bitmask
/// order. Fails when `|X| * |Y|` exceeds `cap`.
pub fn gh_bruteforce(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cap: usize,
) -> Result<GhResult, GhError> {
    let scaled = ScaledPair::build(x, y);
    let enumerator = crate::correspondence::enumerate_correspondences(x.len(), y.len(), cap)?;
    let mut best: Option<(ScaledValue, Correspondence)> = None;
    let mut nodes = 0u64;
    for candidate in enumerator {
        nodes += 1;
        let dis = scaled.distortion_of(candidate.pairs());
        if best.as_ref().is_none_or(|(v, _)| dis < *v) {
            best = Some((dis, candidate));
        }
    }
    let (dis, witness) = best.expect("grid always has the full relation");
    Ok(GhResult {
        value: scaled.half_value(&dis),
        witness,
        nodes_explored: nodes,
        method: Method::BruteForce,
        exact: true,
    })
}

/// Exact minimum of half the distortion over the function-pair family, by
/// plain enumeration without pruning. Used as a middle oracle between
/// [`gh_bruteforce`] and [`gh_exact`].
pub fn gh_function_pairs(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> GhResult {
    let scaled = ScaledPair::build(x, y);
    let mut best: Option<(ScaledValue, Correspondence)> = None;
    let mut nodes = 0u64;
    for candidate in enumerate_function_pairs(x.len(), y.len()) {
        nodes += 1;
        let dis = scaled.distortion_of(candidate.pairs());
        if best.as_ref().is_none_or(|(v, _)| dis < *v) {
            best = Some((dis, candidate));
        }
    }
    let (dis, witness) = best.expect("family is nonempty");
    GhResult {
        value: scaled.half_value(&dis),
        witness,
        nodes_explored: nodes,
        method: Method::FunctionPairs,
        exact: true,
    }
}

/// Exact Gromov-Hausdorff distance with default options (no budget, one
/// worker). See [`gh_exact_with`].
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> GhResult {
    gh_exact_with(x, y, &SearchOptions::default())
}

/// Branch-and-bound over the function-pair family.
///
/// Points are assigned in decreasing eccentricity order, the X side fully
/// before the Y side. A partial assignment is pruned as soon as its running
/// distortion reaches the incumbent (strict minimization, so the first
/// minimizer in assignment order is kept), or exceeds the distortion of a
/// deterministic greedy seed before any leaf has been reached. Top-level
/// branches (the first point's target) are searched independently, which
/// makes the value, witness, and node count independent of the worker count
/// and of scheduling.
pub fn gh_exact_with(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    options: &SearchOptions,
) -> GhResult {
    let scaled = ScaledPair::build(x, y);
    let (dis, pairs, nodes, exact) = match &scaled.tables {
        Tables::Small { x: dx, y: dy } => {
            let raw = solve(dx, dy, options);
            (
                ScaledValue::Small(raw.value),
                raw.pairs,
                raw.nodes,
                raw.exact,
            )
        }
        Tables::Big { x: dx, y: dy } => {
            let raw = solve(dx, dy, options);
            (ScaledValue::Big(raw.value), raw.pairs, raw.nodes, raw.exact)
        }
    };
    let witness =
        Correspondence::new(pairs, x.len(), y.len()).expect("search leaves cover both sides");
    GhResult {
        value: scaled.half_value(&dis),
        witness,
        nodes_explored: nodes,
        method: Method::BranchAndBound,
        exact,
    }
}

// ---------------------------------------------------------------------------
// Integer rescaling
// ---------------------------------------------------------------------------

trait Dist: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn diff(a: &Self, b: &Self) -> Self;
}

impl Dist for i128 {
    fn zero() -> Self {
        0
    }
    fn diff(a: &Self, b: &Self) -> Self {
        (a - b).abs()
    }
}

impl Dist for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn diff(a: &Self, b: &Self) -> Self {
        (a - b).abs()
    }
}

enum Tables {
    Small {
        x: Vec<Vec<i128>>,
        y: Vec<Vec<i128>>,
    },
    Big {
        x: Vec<Vec<BigInt>>,
        y: Vec<Vec<BigInt>>,
    },
}

enum ScaledValue {
    Small(i128),
    Big(BigInt),
}

/// Both distance matrices multiplied by the least common multiple of every
/// denominator, so all entries are integers and `true distance = entry / lcm`.
struct ScaledPair {
    tables: Tables,
    denom: BigInt,
}

// Scaled entries beyond this bound go through the BigInt path; the margin
// keeps i128 differences comfortably away from overflow.
const I128_LIMIT: i128 = i64::MAX as i128;

impl ScaledPair {
    fn build(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> ScaledPair {
        let mut lcm = BigInt::one();
        for space in [x, y] {
            for row in space.matrix() {
                for value in row {
                    lcm = lcm.lcm(value.denom());
                }
            }
        }
        let scale = |space: &FiniteMetricSpace| -> Vec<Vec<BigInt>> {
            space
                .matrix()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|value| value.numer() * (&lcm / value.denom()))
                        .collect()
                })
                .collect()
        };
        let bx = scale(x);
        let by = scale(y);
        let shrink = |table: &[Vec<BigInt>]| -> Option<Vec<Vec<i128>>> {
            table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| v.to_i128().filter(|n| n.abs() <= I128_LIMIT))
                        .collect()
                })
                .collect()
        };
        let tables = match (shrink(&bx), shrink(&by)) {
            (Some(sx), Some(sy)) => Tables::Small { x: sx, y: sy },
            _ => Tables::Big { x: bx, y: by },
        };
        ScaledPair { tables, denom: lcm }
    }

    fn distortion_of(&self, pairs: &[(usize, usize)]) -> ScaledValue {
        match &self.tables {
            Tables::Small { x, y } => ScaledValue::Small(distortion_scaled(x, y, pairs)),
            Tables::Big { x, y } => ScaledValue::Big(distortion_scaled(x, y, pairs)),
        }
    }

    /// Converts a scaled distortion back to the exact rational `dis / (2 lcm)`.
    fn half_value(&self, dis: &ScaledValue) -> Scalar {
        let numer = match dis {
            ScaledValue::Small(v) => BigInt::from(*v),
            ScaledValue::Big(v) => v.clone(),
        };
        Scalar::from_rational(BigRational::new(numer, &self.denom * BigInt::from(2)))
    }
}

impl PartialEq for ScaledValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == std::cmp::Ordering::Equal
    }
}

impl ScaledValue {
    fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (ScaledValue::Small(a), ScaledValue::Small(b)) => a.cmp(b),
            (ScaledValue::Big(a), ScaledValue::Big(b)) => a.cmp(b),
            (ScaledValue::Small(a), ScaledValue::Big(b)) => BigInt::from(*a).cmp(b),
            (ScaledValue::Big(a), ScaledValue::Small(b)) => a.cmp(&BigInt::from(*b)),
        }
    }
}

impl PartialOrd for ScaledValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_value(other))
    }
}

fn distortion_scaled<T: Dist>(dx: &[Vec<T>], dy: &[Vec<T>], pairs: &[(usize, usize)]) -> T {
    let mut worst = T::zero();
    for &(a, b) in pairs {
        for &(c, d) in pairs {
            let gap = T::diff(&dx[a][c], &dy[b][d]);
            if gap > worst {
                worst = gap;
            }
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

struct RawOutcome<T> {
    value: T,
    pairs: Vec<(usize, usize)>,
    nodes: u64,
    exact: bool,
}

struct Problem<'a, T> {
    dx: &'a [Vec<T>],
    dy: &'a [Vec<T>],
    /// X point indices in assignment order (decreasing eccentricity).
    xorder: Vec<usize>,
    /// Y point indices in assignment order.
    yorder: Vec<usize>,
    /// Value bound from the greedy seed; every leaf of the greedy branch
    /// stays at or below it.
    bound: T,
    greedy: Vec<(usize, usize)>,
}

fn eccentricity_order<T: Dist>(table: &[Vec<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..table.len()).collect();
    // Stable sort keeps index order among equal eccentricities.
    order.sort_by(|&a, &b| {
        let ea = table[a].iter().max().expect("nonempty");
        let eb = table[b].iter().max().expect("nonempty");
        eb.cmp(ea)
    });
    order
}

/// The matched pair appended at assignment step `depth`, given the chosen
/// `target` on the opposite side.
fn pair_at(xorder: &[usize], yorder: &[usize], depth: usize, target: usize) -> (usize, usize) {
    if depth < xorder.len() {
        (xorder[depth], target)
    } else {
        (target, yorder[depth - xorder.len()])
    }
}

fn target_count<T>(problem: &Problem<'_, T>, depth: usize) -> usize {
    if depth < problem.xorder.len() {
        problem.dy.len()
    } else {
        problem.dx.len()
    }
}

fn incremental_max<T: Dist>(
    dx: &[Vec<T>],
    dy: &[Vec<T>],
    pairs: &[(usize, usize)],
    new_pair: (usize, usize),
    floor: &T,
) -> T {
    let (a, b) = new_pair;
    let mut worst = floor.clone();
    for &(c, d) in pairs {
        let gap = T::diff(&dx[a][c], &dy[b][d]);
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

/// Deterministic greedy assignment: walk the assignment order, always taking
/// the target with the smallest incremental distortion (ties to the smallest
/// index). Provides the initial value bound and the fallback witness when a
/// budget expires before the search completes a leaf.
fn greedy_seed<T: Dist>(
    dx: &[Vec<T>],
    dy: &[Vec<T>],
    xorder: &[usize],
    yorder: &[usize],
) -> (T, Vec<(usize, usize)>) {
    let total = xorder.len() + yorder.len();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(total);
    let mut current = T::zero();
    for depth in 0..total {
        let targets = if depth < xorder.len() {
            dy.len()
        } else {
            dx.len()
        };
        let mut best_target = 0;
        let mut best_value: Option<T> = None;
        for t in 0..targets {
            let pair = pair_at(xorder, yorder, depth, t);
            let value = incremental_max(dx, dy, &pairs, pair, &current);
            if best_value.as_ref().is_none_or(|b| value < *b) {
                best_value = Some(value);
                best_target = t;
            }
        }
        current = best_value.expect("at least one target");
        pairs.push(pair_at(xorder, yorder, depth, best_target));
    }
    (current, pairs)
}

fn solve<T: Dist>(dx: &[Vec<T>], dy: &[Vec<T>], options: &SearchOptions) -> RawOutcome<T> {
    let xorder = eccentricity_order(dx);
    let yorder = eccentricity_order(dy);
    let (bound, greedy) = greedy_seed(dx, dy, &xorder, &yorder);
    let problem = Problem {
        dx,
        dy,
        xorder,
        yorder,
        bound,
        greedy,
    };
    let branches = target_count(&problem, 0);

    if let Some(budget) = options.budget {
        return solve_sequential(&problem, branches, budget);
    }

    let workers = options.workers.max(1).min(branches);
    let outcomes: Vec<(usize, BranchOutcome<T>)> = if workers <= 1 {
        (0..branches)
            .map(|b| (b, search_branch(&problem, b, u64::MAX).0))
            .collect()
    } else {
        let mut collected: Vec<(usize, BranchOutcome<T>)> = std::thread::scope(|scope| {
            let problem = &problem;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..branches)
                            .step_by(workers)
                            .map(|b| (b, search_branch(problem, b, u64::MAX).0))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        collected.sort_by_key(|(b, _)| *b);
        collected
    };

    merge_outcomes(&problem, outcomes, true)
}

/// Budgeted search: branches run in order on one worker, sharing a global
/// node counter, so the outcome is the same on every machine and worker
/// setting.
fn solve_sequential<T: Dist>(
    problem: &Problem<'_, T>,
    branches: usize,
    budget: u64,
) -> RawOutcome<T> {
    let mut outcomes = Vec::with_capacity(branches);
    let mut spent = 0u64;
    let mut aborted = false;
    for b in 0..branches {
        if spent >= budget {
            aborted = true;
            break;
        }
        let (outcome, exhausted) = search_branch(problem, b, budget - spent);
        spent += outcome.nodes;
        outcomes.push((b, outcome));
        if exhausted {
            aborted = true;
            break;
        }
    }
    merge_outcomes(problem, outcomes, !aborted)
}

struct BranchOutcome<T> {
    best: Option<(T, Vec<(usize, usize)>)>,
    nodes: u64,
}

fn merge_outcomes<T: Dist>(
    problem: &Problem<'_, T>,
    outcomes: Vec<(usize, BranchOutcome<T>)>,
    complete: bool,
) -> RawOutcome<T> {
    let mut nodes = 0u64;
    let mut best: Option<(T, Vec<(usize, usize)>)> = None;
    for (_, outcome) in outcomes {
        nodes += outcome.nodes;
        if let Some((value, pairs)) = outcome.best {
            // Strict comparison keeps the earliest branch on ties.
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, pairs));
            }
        }
    }
    match best {
        Some((value, pairs)) => RawOutcome {
            value,
            pairs,
            nodes,
            exact: complete,
        },
        // Budget died before any leaf: fall back to the greedy witness.
        None => RawOutcome {
            value: problem.bound.clone(),
            pairs: problem.greedy.clone(),
            nodes,
            exact: false,
        },
    }
}

/// Depth-first search below one top-level branch. Returns the outcome and
/// whether the node budget ran out.
fn search_branch<T: Dist>(
    problem: &Problem<'_, T>,
    branch: usize,
    budget: u64,
) -> (BranchOutcome<T>, bool) {
    let mut state = BranchState {
        pairs: Vec::with_capacity(problem.xorder.len() + problem.yorder.len()),
        best: None,
        nodes: 0,
        budget,
    };
    let exhausted = descend(problem, 0, branch, &T::zero(), &mut state);
    (
        BranchOutcome {
            best: state.best,
            nodes: state.nodes,
        },
        exhausted,
    )
}

struct BranchState<T> {
    pairs: Vec<(usize, usize)>,
    best: Option<(T, Vec<(usize, usize)>)>,
    nodes: u64,
    budget: u64,
}

/// Evaluates extending the current assignment with `target` at `depth`,
/// then recurses over the next level. Returns true when the budget expired.
fn descend<T: Dist>(
    problem: &Problem<'_, T>,
    depth: usize,
    target: usize,
    partial: &T,
    state: &mut BranchState<T>,
) -> bool {
    if state.nodes >= state.budget {
        return true;
    }
    state.nodes += 1;

    let pair = pair_at(&problem.xorder, &problem.yorder, depth, target);
    let extended = incremental_max(problem.dx, problem.dy, &state.pairs, pair, partial);
    let prune = match &state.best {
        Some((incumbent, _)) => extended >= *incumbent,
        None => extended > problem.bound,
    };
    if prune {
        return false;
    }

    state.pairs.push(pair);
    let next_depth = depth + 1;
    let mut exhausted = false;
    if next_depth == problem.xorder.len() + problem.yorder.len() {
        // Leaf: strictly better than the incumbent, or the first one found.
        state.best = Some((extended, state.pairs.clone()));
    } else {
        for next_target in 0..target_count(problem, next_depth) {
            if descend(problem, next_depth, next_target, &extended, state) {
                exhausted = true;
                break;
            }
        }
    }
    state.pairs.pop();
    exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::DEFAULT_ENUMERATION_CAP;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn two_point(d: &str) -> FiniteMetricSpace {
        FiniteMetricSpace::two_point("a", "b", s(d)).unwrap()
    }

    fn anchor() -> FiniteMetricSpace {
        FiniteMetricSpace::two_point("p+", "p-", s("3")).unwrap()
    }

    #[test]
    fn bruteforce_on_identical_spaces_is_zero_with_identity_witness() {
        // Distinct pairwise distances leave the identity as the only
        // zero-distortion correspondence.
        let x = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![s("0"), s("1"), s("3/2")],
                vec![s("1"), s("0"), s("2")],
                vec![s("3/2"), s("2"), s("0")],
            ],
        )
        .unwrap();
        let result = gh_bruteforce(&x, &x, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(result.value, Scalar::zero());
        for i in 0..x.len() {
            assert!(result.witness.contains((i, i)));
        }
        assert_eq!(
            result.witness.distortion(&x, &x).unwrap(),
            result.value.double()
        );
        // On a symmetric space a different minimizer may enumerate first,
        // but it still certifies distance zero.
        let sym = two_point("1");
        let result = gh_bruteforce(&sym, &sym, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(result.value, Scalar::zero());
        assert_eq!(
            result.witness.distortion(&sym, &sym).unwrap(),
            Scalar::zero()
        );
    }

    #[test]
    fn point_against_anchor_space_is_half_diameter() {
        // The only correspondence is {pt} x X, whose distortion is diam(X).
        let p = FiniteMetricSpace::point("z");
        let result = gh_bruteforce(&p, &anchor(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(result.value, s("3/2"));
        assert_eq!(result.nodes_explored, 1);
    }

    #[test]
    fn two_point_spaces_give_half_gap() {
        let result = gh_bruteforce(&two_point("1"), &two_point("2"), 12).unwrap();
        assert_eq!(result.value, s("1/2"));
        // All 7 members of the 2x2 family are enumerated.
        assert_eq!(result.nodes_explored, 7);
    }

    #[test]
    fn exact_matches_bruteforce_on_small_pairs() {
        let spaces = [
            FiniteMetricSpace::point("z"),
            two_point("1"),
            two_point("3/2"),
            FiniteMetricSpace::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![
                    vec![s("0"), s("1"), s("2")],
                    vec![s("1"), s("0"), s("3/2")],
                    vec![s("2"), s("3/2"), s("0")],
                ],
            )
            .unwrap(),
        ];
        for x in &spaces {
            for y in &spaces {
                let oracle = gh_bruteforce(x, y, 12).unwrap();
                let fast = gh_exact(x, y);
                let middle = gh_function_pairs(x, y);
                assert_eq!(fast.value, oracle.value);
                assert_eq!(middle.value, oracle.value);
                assert!(fast.exact);
                assert_eq!(
                    fast.witness.distortion(x, y).unwrap(),
                    fast.value.double(),
                    "witness certifies the value"
                );
            }
        }
    }

    #[test]
    fn exact_is_zero_on_identical_space() {
        let x = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![s("0"), s("2"), s("1")],
                vec![s("2"), s("0"), s("2")],
                vec![s("1"), s("2"), s("0")],
            ],
        )
        .unwrap();
        let result = gh_exact(&x, &x);
        assert_eq!(result.value, Scalar::zero());
        // Pruning sanity: never more nodes than the unpruned tree.
        let unpruned: u64 = {
            let n = x.len() as u64;
            // sum over depth d of n^(d+1) candidate evaluations
            (0..2 * x.len() as u32).map(|d| n.pow(d + 1)).sum()
        };
        assert!(result.nodes_explored <= unpruned);
    }

    #[test]
    fn bounds_sandwich_the_distance() {
        let x = two_point("1");
        let y = two_point("2");
        let exact = gh_exact(&x, &y);
        assert_eq!(gh_lower_bound_diam(&x, &y), s("1/2"));
        assert!(gh_lower_bound_diam(&x, &y) <= exact.value);
        assert!(exact.value <= gh_upper_bound_full_relation(&x, &y));
        // Paper-level bound: never above the larger diameter.
        assert!(exact.value <= x.diameter().max(y.diameter()));
    }

    #[test]
    fn lower_bound_examples() {
        let x = two_point("1");
        assert_eq!(gh_lower_bound_diam(&x, &x), Scalar::zero());
        assert_eq!(
            gh_lower_bound_diam(&anchor(), &FiniteMetricSpace::point("z")),
            s("3/2")
        );
    }

    #[test]
    fn upper_bound_examples() {
        let x = two_point("1");
        // dis(X x X) = 1 via the mixed pair-pairs.
        assert_eq!(gh_upper_bound_full_relation(&x, &x), s("1/2"));
        let p = FiniteMetricSpace::point("z");
        assert_eq!(gh_upper_bound_full_relation(&p, &p), Scalar::zero());
    }

    #[test]
    fn budget_exhaustion_returns_flagged_upper_bound() {
        let x = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![s("0"), s("2"), s("1")],
                vec![s("2"), s("0"), s("2")],
                vec![s("1"), s("2"), s("0")],
            ],
        )
        .unwrap();
        let y = two_point("1");
        let full = gh_exact(&x, &y);
        let starved = gh_exact_with(
            &x,
            &y,
            &SearchOptions {
                budget: Some(1),
                workers: 1,
            },
        );
        assert!(!starved.exact);
        assert!(starved.value >= full.value, "budgeted value is a bound");
        assert_eq!(
            starved.witness.distortion(&x, &y).unwrap(),
            starved.value.double()
        );
        assert!(starved.nodes_explored <= 1);
    }

    #[test]
    fn worker_count_does_not_change_the_outcome() {
        let x = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                vec![s("0"), s("1"), s("2"), s("2")],
                vec![s("1"), s("0"), s("3/2"), s("1")],
                vec![s("2"), s("3/2"), s("0"), s("1")],
                vec![s("2"), s("1"), s("1"), s("0")],
            ],
        )
        .unwrap();
        let y = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![s("0"), s("1/2"), s("1")],
                vec![s("1/2"), s("0"), s("1")],
                vec![s("1"), s("1"), s("0")],
            ],
        )
        .unwrap();
        let one = gh_exact_with(
            &x,
            &y,
            &SearchOptions {
                budget: None,
                workers: 1,
            },
        );
        let four = gh_exact_with(
            &x,
            &y,
            &SearchOptions {
                budget: None,
                workers: 4,
            },
        );
        assert_eq!(one.value, four.value);
        assert_eq!(one.witness, four.witness);
        assert_eq!(one.nodes_explored, four.nodes_explored);
    }

    #[test]
    fn big_integer_fallback_stays_exact() {
        // Denominators chosen so the scaled entries overflow i64.
        let huge = Scalar::from_rational(BigRational::new(
            BigInt::from(i64::MAX) * BigInt::from(7),
            BigInt::from(3),
        ));
        let x = FiniteMetricSpace::two_point("a", "b", huge.clone()).unwrap();
        let y = FiniteMetricSpace::two_point("a", "b", huge.double()).unwrap();
        let result = gh_exact(&x, &y);
        assert_eq!(result.value, huge.half());
        assert_eq!(result.value, gh_bruteforce(&x, &y, 12).unwrap().value);
    }
}
