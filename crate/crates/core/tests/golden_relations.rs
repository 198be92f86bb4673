//! Coefficient-for-coefficient checks of the divisor-class relations each
//! family presentation is pinned to, for the stated ray bases.

use toric4::catalog::{
    build_fa_bundle, build_family, build_g1, build_j2, build_l12, build_l5, build_m5, Family,
};
use toric4::chow::intersection_number;
use toric4::fan::Fan;
use toric4::picard::basis_relations;

fn assert_relations(fan: &Fan, basis: [usize; 4], expected: &[Vec<i64>]) {
    let got = basis_relations(fan, basis).unwrap();
    for (k, (g, e)) in got.iter().zip(expected).enumerate() {
        assert_eq!(g, e, "{}: relation {} differs", fan.name, k + 1);
    }
}

#[test]
fn g1_relations() {
    for a in 1..=3i64 {
        let fan = build_g1(a).unwrap();
        assert_relations(
            &fan,
            [0, 1, 3, 4],
            &[
                vec![1, 0, a, 0, 0, a + 1, -1],
                vec![0, 1, -1, 0, 0, 0, 0],
                vec![0, 0, -1, 1, 0, -1, 0],
                vec![0, 0, 0, 0, 1, -1, 0],
            ],
        );
    }
}

#[test]
fn l5_relations() {
    for a in 1..=3i64 {
        let fan = build_l5(a).unwrap();
        assert_relations(
            &fan,
            [0, 1, 3, 5],
            &[
                vec![1, 0, 0, 0, 0, 0, 0, -1],
                vec![0, 1, -1, 0, -a, 0, -a, 0],
                vec![0, 0, 0, 1, -1, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 1, -1, 0],
            ],
        );
    }
}

#[test]
fn i_family_relations() {
    for (a, b, c) in [(1i64, 1i64, -1i64), (0, 1, 0), (0, 0, -1), (1, 0, -1)] {
        let fan = build_family(Family::I, &[a, b, c]).unwrap();
        let expected = [
            vec![1, -1, 0, 0, 0, 0, 0, 0],
            vec![0, b, 1, 0, -1, 0, 1, 0],
            vec![0, 0, 0, 1, -1, 0, 0, 0],
            vec![0, c, 0, 0, a + 1, -1, -1, 1],
        ];
        assert_relations(&fan, [0, 2, 3, 7], &expected);
        // The derived fifth relation is the sum of the second and fourth.
        let sum: Vec<i64> = expected[1]
            .iter()
            .zip(&expected[3])
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(sum, vec![0, b + c, 1, 0, a, -1, 0, 1]);
    }
}

#[test]
fn j2_relations() {
    let fan = build_j2().unwrap();
    assert_relations(
        &fan,
        [0, 1, 3, 4],
        &[
            vec![1, 0, -1, 0, 0, 1, 0, -1],
            vec![0, 1, -1, 0, 0, 1, 0, -1],
            vec![0, 0, 0, 1, 0, -1, -1, 1],
            vec![0, 0, 0, 0, 1, -1, -1, 1],
        ],
    );
}

#[test]
fn l_family_relations() {
    for (a, b, c, d) in [(0i64, 1i64, 0i64, 1i64), (1, 0, 1, 0), (1, 0, -1, 1)] {
        let fan = build_family(Family::L, &[a, b, c, d]).unwrap();
        assert_relations(
            &fan,
            [0, 2, 3, 5],
            &[
                vec![1, 1, 0, 0, b, 0, d, -1],
                vec![0, -1, 1, 0, a, 0, c, 0],
                vec![0, 0, 0, 1, -1, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 1, -1, 0],
            ],
        );
    }
}

#[test]
fn l12_relations_and_square_identities() {
    let fan = build_l12().unwrap();
    assert_relations(
        &fan,
        [0, 1, 3, 5],
        &[
            vec![1, 0, 1, 0, -1, 0, 0, -1],
            vec![0, 1, -1, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, -1, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 1, -1, 0],
        ],
    );
    // The two codimension-2 identities D8^2 = D3 D8 - D5 D8 and
    // D5^2 = D5 D7, verified against every pair monomial.
    let n = fan.ray_count();
    for k in 0..n {
        for l in k..n {
            let lhs = intersection_number(&fan, [7, 7, k, l]);
            let rhs = intersection_number(&fan, [2, 7, k, l])
                - intersection_number(&fan, [4, 7, k, l]);
            assert_eq!(lhs, rhs, "D8^2 identity fails against ({}, {})", k, l);
            let lhs = intersection_number(&fan, [4, 4, k, l]);
            let rhs = intersection_number(&fan, [4, 6, k, l]);
            assert_eq!(lhs, rhs, "D5^2 identity fails against ({}, {})", k, l);
        }
    }
}

#[test]
fn m_family_relations() {
    for (a, b, c) in [(0i64, 0i64, 0i64), (1, 1, 0), (1, 0, 1), (1, 0, 0)] {
        let fan = build_family(Family::M, &[a, b, c]).unwrap();
        let expected = [
            vec![1, 0, -1, 0, a, 0, a * c + b, -1],
            vec![0, 1, -1, 0, 0, 0, 0, 0],
            vec![0, 0, 1, 1, -1, 0, -c, 0],
            vec![0, 0, 1, 0, 0, 1, -1, 0],
        ];
        assert_relations(&fan, [0, 1, 3, 5], &expected);
        // Derived combinations (1) + a*(3) and (1) + (4).
        let comb1: Vec<i64> = expected[0]
            .iter()
            .zip(&expected[2])
            .map(|(x, y)| x + a * y)
            .collect();
        assert_eq!(comb1, vec![1, 0, a - 1, a, 0, 0, b, -1]);
        let comb2: Vec<i64> = expected[0]
            .iter()
            .zip(&expected[3])
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(comb2, vec![1, 0, 0, 0, a, 1, a * c + b - 1, -1]);
    }
}

#[test]
fn m5_relations() {
    let fan = build_m5().unwrap();
    assert_relations(
        &fan,
        [0, 1, 3, 5],
        &[
            vec![1, 0, -1, 0, 1, 0, 1, 0],
            vec![0, 1, -1, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, -1, 0, 0, -1],
            vec![0, 0, 1, 0, -1, 1, -1, -1],
        ],
    );
}

#[test]
fn fa_bundle_relations() {
    for (a, s, t) in [(1i64, 0i64, 2i64), (1, 1, -1), (0, 2, 0)] {
        let fan = build_fa_bundle(a, s, t).unwrap();
        assert_relations(
            &fan,
            [0, 1, 3, 5],
            &[
                vec![1, 0, -1, 0, 0, 0, 0],
                vec![0, 1, -1, 0, 0, 0, 0],
                vec![0, 0, s, 1, -1, 0, 0],
                vec![0, 0, t, 0, a, 1, -1],
            ],
        );
    }
}
