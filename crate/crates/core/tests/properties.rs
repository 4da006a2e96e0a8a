//! Property tests for the library invariants: parse/display round trips,
//! correspondence algebra, distortion monotonicity, bound sandwiches, and
//! invariance of the distance under relabeling and permutation.

// Index loops build matrices whose indices are the data; iterators obscure that.
#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use ghforge::{
    gh_exact, gh_lower_bound_diam, gh_upper_bound_full_relation, Correspondence, FiniteMetricSpace,
    Scalar,
};

/// A valid metric space of the given size: distances in `[1/2, 1]` scaled by
/// a positive rational, so the triangle inequality holds by construction.
fn space_strategy(max_points: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (1..=max_points, any::<u64>(), 1i64..=4, 1i64..=4).prop_map(|(size, seed, num, den)| {
        let scale = Scalar::ratio(num, den);
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_add(0x9e3779b97f4a7c15)
                .rotate_left(17)
                .wrapping_mul(0xd1342543de82ef95)
                | 1;
            state
        };
        let labels: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let mut dist = vec![vec![Scalar::zero(); size]; size];
        for i in 0..size {
            for j in (i + 1)..size {
                let q = 2 + (next() % 5) as i64;
                let p = (q + 1) / 2 + (next() % ((q - (q + 1) / 2 + 1) as u64)) as i64;
                let d = &Scalar::ratio(p, q) * &scale;
                dist[i][j] = d.clone();
                dist[j][i] = d;
            }
        }
        FiniteMetricSpace::new(labels, dist).expect("half-to-one family is metric")
    })
}

/// A random map `0..from -> 0..to` as an assignment vector.
fn map_strategy(from: usize, to: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..to, from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_display_parse_roundtrip(p in -1_000_000i64..1_000_000, q in 1i64..10_000) {
        let value = Scalar::ratio(p, q);
        let reparsed: Scalar = value.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, value);
    }

    #[test]
    fn scale_is_multiplicative(space in space_strategy(4), a in 1i64..6, b in 1i64..6) {
        let sa = Scalar::ratio(a, 3);
        let sb = Scalar::ratio(b, 2);
        let left = space.scale(&sa).unwrap().scale(&sb).unwrap();
        let right = space.scale(&(&sa * &sb)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn diameter_scales_homogeneously(space in space_strategy(4), c in 1i64..9) {
        let factor = Scalar::ratio(c, 4);
        let scaled = space.scale(&factor).unwrap();
        prop_assert_eq!(scaled.diameter(), &space.diameter() * &factor);
    }

    #[test]
    fn distortion_is_invariant_under_inverse(
        (x, y, f, g) in (space_strategy(4), space_strategy(4)).prop_flat_map(|(x, y)| {
            let (lx, ly) = (x.len(), y.len());
            (Just(x), Just(y), map_strategy(lx, ly), map_strategy(ly, lx))
        })
    ) {
        let relation = Correspondence::from_maps(&f, &g);
        let forward = relation.distortion(&x, &y).unwrap();
        let backward = relation.inverse().distortion(&y, &x).unwrap();
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn distortion_is_monotone_under_inclusion(
        (x, y, f, g, extra) in (space_strategy(3), space_strategy(3)).prop_flat_map(|(x, y)| {
            let (lx, ly) = (x.len(), y.len());
            (
                Just(x),
                Just(y),
                map_strategy(lx, ly),
                map_strategy(ly, lx),
                proptest::collection::vec((0..lx, 0..ly), 0..4),
            )
        })
    ) {
        let small = Correspondence::from_maps(&f, &g);
        let mut pairs = small.pairs().to_vec();
        pairs.extend(extra);
        let big = Correspondence::new(pairs, x.len(), y.len()).unwrap();
        prop_assert!(small.is_subrelation_of(&big));
        prop_assert!(small.distortion(&x, &y).unwrap() <= big.distortion(&x, &y).unwrap());
    }

    #[test]
    fn distance_is_symmetric_and_sandwiched(x in space_strategy(3), y in space_strategy(3)) {
        let forward = gh_exact(&x, &y);
        let backward = gh_exact(&y, &x);
        prop_assert_eq!(&forward.value, &backward.value);
        prop_assert!(gh_lower_bound_diam(&x, &y) <= forward.value);
        prop_assert!(forward.value <= gh_upper_bound_full_relation(&x, &y));
        prop_assert!(forward.value <= x.diameter().max(y.diameter()));
        // The witness always certifies the value exactly.
        prop_assert_eq!(
            forward.witness.distortion(&x, &y).unwrap(),
            forward.value.double()
        );
    }

    #[test]
    fn distance_is_invariant_under_point_permutation(
        (x, y, perm_seed) in (space_strategy(3), space_strategy(3), any::<u64>())
    ) {
        // Shuffle the points of x; the distance must not move.
        let n = x.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = perm_seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = x.subspace(&order).unwrap();
        prop_assert_eq!(gh_exact(&shuffled, &y).value, gh_exact(&x, &y).value);
    }

    #[test]
    fn triangle_inequality_on_three_small_spaces(
        x in space_strategy(3),
        y in space_strategy(3),
        z in space_strategy(3),
    ) {
        let xy = gh_exact(&x, &y).value;
        let yz = gh_exact(&y, &z).value;
        let xz = gh_exact(&x, &z).value;
        prop_assert!(xz <= &xy + &yz);
    }

    #[test]
    fn space_file_roundtrip(space in space_strategy(4)) {
        let text = ghforge::format::serialize_space(&space);
        let reparsed = ghforge::format::parse_space(&text).unwrap();
        prop_assert_eq!(reparsed.space, space);
    }

    #[test]
    fn validation_agrees_with_the_naive_checker(
        entries in proptest::collection::vec((-2i64..8, 1i64..4), 6),
        size in 2usize..=3,
    ) {
        // Arbitrary symmetric matrices with a zero diagonal: construction
        // must accept exactly those the triple-loop oracle accepts.
        let mut dist = vec![vec![Scalar::zero(); size]; size];
        let mut feed = entries.iter().cycle();
        for i in 0..size {
            for j in (i + 1)..size {
                let &(p, q) = feed.next().unwrap();
                let value = Scalar::ratio(p, q);
                dist[i][j] = value.clone();
                dist[j][i] = value;
            }
        }
        let labels: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let accepted = FiniteMetricSpace::new(labels, dist.clone()).is_ok();
        prop_assert_eq!(accepted, naive_metric_check(&dist));
    }
}

/// Exhaustive triangle inequality for the distance itself, over every
/// ordered triple from a small deterministic corpus.
#[test]
fn distance_triangle_inequality_exhaustive_on_small_corpus() {
    let mut spaces = vec![FiniteMetricSpace::point("x")];
    for d in ["1", "3/2", "2"] {
        spaces.push(FiniteMetricSpace::two_point("a", "b", d.parse().unwrap()).unwrap());
    }
    for seed in 0..4u64 {
        spaces.push(ghforge::random_product_point(seed, 1, &Scalar::one(), 3).blocks()[0].clone());
    }
    let n = spaces.len();
    let mut table = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = gh_exact(&spaces[i], &spaces[j]).value;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                assert!(
                    table[i][k] <= &table[i][j] + &table[j][k],
                    "triangle fails on ({i}, {j}, {k})"
                );
            }
        }
    }
}

/// Independent oracle for the four metric axioms, written as the plainest
/// possible triple loop.
fn naive_metric_check(dist: &[Vec<Scalar>]) -> bool {
    let n = dist.len();
    for i in 0..n {
        for j in 0..n {
            if i == j && !dist[i][j].is_zero() {
                return false;
            }
            if i != j && (dist[i][j].is_negative() || dist[i][j].is_zero()) {
                return false;
            }
            if dist[i][j] != dist[j][i] {
                return false;
            }
            for k in 0..n {
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    return false;
                }
            }
        }
    }
    true
}
