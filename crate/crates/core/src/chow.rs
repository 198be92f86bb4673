//! Exact intersection theory on smooth complete toric 4-folds: quadruple
//! intersection numbers by divisor-relation reduction, a working basis of
//! A^2(X) with its pairing data, and the c_2 pairing.
//!
//! The reduction mirrors the hand computation in toric intersection theory:
//! a repeated divisor `D_i` is rewritten as `-sum_{k not in sigma} <m, x_k> D_k`
//! for the dual `m` of `x_i` in a maximal cone `sigma` containing the other
//! factors, which keeps the recursion shallow.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::fan::Fan;
use crate::lattice::dual_basis;
use crate::ratlin::{rat, rref, solve_row_combination, Rat};

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("degree-2 pairing is rank deficient (internal consistency failure)")]
    RankDeficiency,
    #[error("hint monomials do not span A^2: rank {got} of {need}")]
    HintNotGenerating { got: usize, need: usize },
}

/// Memoized quadruple intersection numbers for one fan.
pub struct IntersectionTable<'a> {
    fan: &'a Fan,
    memo: HashMap<[usize; 4], i64>,
}

/// Canonical sorted multiset key.
pub fn canonical_key(mut idx: [usize; 4]) -> [usize; 4] {
    idx.sort_unstable();
    idx
}

impl<'a> IntersectionTable<'a> {
    pub fn new(fan: &'a Fan) -> Self {
        IntersectionTable {
            fan,
            memo: HashMap::new(),
        }
    }

    pub fn fan(&self) -> &Fan {
        self.fan
    }

    /// The exact degree of `D_a D_b D_c D_d` for the multiset `idx`.
    pub fn number(&mut self, idx: [usize; 4]) -> i64 {
        let key = canonical_key(idx);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let fan = self.fan;
        let v = reduce(fan, key, &mut |_| 0, &mut |m| self.number(m));
        self.memo.insert(key, v);
        v
    }

    /// Pairing vector of the degree-2 monomial `D_i D_j` against a list of
    /// basis monomials.
    pub fn pairing_vector(&mut self, i: usize, j: usize, basis: &[(usize, usize)]) -> Vec<i64> {
        basis
            .iter()
            .map(|&(a, b)| self.number([i, j, a, b]))
            .collect()
    }
}

/// One reduction step, parameterized over the choice of containing cone so
/// independent verification can randomize it. `choose` picks a position in
/// the candidate list; `recurse` evaluates smaller multisets.
fn reduce(
    fan: &Fan,
    key: [usize; 4],
    choose: &mut dyn FnMut(&[usize]) -> usize,
    recurse: &mut dyn FnMut([usize; 4]) -> i64,
) -> i64 {
    let mut support: Vec<usize> = key.to_vec();
    support.dedup();
    if !fan.cone_exists(&support) {
        return 0;
    }
    if support.len() == 4 {
        // Four distinct rays spanning a cone of a smooth fan meet
        // transversally in one point.
        return 1;
    }
    // A repeated index (support is a proper face, so one exists).
    let rep = key
        .iter()
        .copied()
        .find(|&i| key.iter().filter(|&&j| j == i).count() > 1)
        .expect("non-distinct multiset");
    let cones: Vec<usize> = fan
        .max_cones()
        .iter()
        .enumerate()
        .filter(|(_, c)| support.iter().all(|i| c.contains(i)))
        .map(|(ci, _)| ci)
        .collect();
    let sigma = fan.max_cones()[cones[choose(&cones) % cones.len()]];
    let basis = [
        *fan.ray(sigma[0]),
        *fan.ray(sigma[1]),
        *fan.ray(sigma[2]),
        *fan.ray(sigma[3]),
    ];
    let duals = dual_basis(&basis).expect("smooth cone");
    let pos = sigma.iter().position(|&r| r == rep).expect("rep in sigma");
    let m = duals[pos];
    // D_rep = -sum_{k not in sigma} <m, x_k> D_k
    let mut rest: Vec<usize> = key.to_vec();
    let drop_at = rest.iter().position(|&i| i == rep).unwrap();
    rest.remove(drop_at);
    let mut total = 0i64;
    for k in 0..fan.ray_count() {
        if sigma.contains(&k) {
            continue;
        }
        let coeff = m.pair(fan.ray(k));
        if coeff == 0 {
            continue;
        }
        let next = canonical_key([rest[0], rest[1], rest[2], k]);
        total -= coeff * recurse(next);
    }
    total
}

/// Intersection number computed with randomized reduction choices and no
/// memoization; an independent evaluation route for verification.
pub fn intersection_number_randomized<R: Rng>(fan: &Fan, idx: [usize; 4], rng: &mut R) -> i64 {
    fn go<R: Rng>(fan: &Fan, rng: &mut R, key: [usize; 4]) -> i64 {
        let mut support: Vec<usize> = key.to_vec();
        support.dedup();
        if !fan.cone_exists(&support) {
            return 0;
        }
        if support.len() == 4 {
            return 1;
        }
        let rep = key
            .iter()
            .copied()
            .find(|&i| key.iter().filter(|&&j| j == i).count() > 1)
            .unwrap();
        let cones: Vec<&[usize; 4]> = fan
            .max_cones()
            .iter()
            .filter(|c| support.iter().all(|i| c.contains(i)))
            .collect();
        let sigma = *cones[rng.gen_range(0..cones.len())];
        let basis = [
            *fan.ray(sigma[0]),
            *fan.ray(sigma[1]),
            *fan.ray(sigma[2]),
            *fan.ray(sigma[3]),
        ];
        let duals = dual_basis(&basis).expect("smooth cone");
        let pos = sigma.iter().position(|&r| r == rep).unwrap();
        let m = duals[pos];
        let mut rest: Vec<usize> = key.to_vec();
        let drop_at = rest.iter().position(|&i| i == rep).unwrap();
        rest.remove(drop_at);
        let mut total = 0i64;
        for k in 0..fan.ray_count() {
            if sigma.contains(&k) {
                continue;
            }
            let coeff = m.pair(fan.ray(k));
            if coeff == 0 {
                continue;
            }
            total -= coeff * go(fan, rng, canonical_key([rest[0], rest[1], rest[2], k]));
        }
        total
    }
    go(fan, rng, canonical_key(idx))
}

/// Deterministic one-off evaluation (builds a throwaway table).
pub fn intersection_number(fan: &Fan, idx: [usize; 4]) -> i64 {
    IntersectionTable::new(fan).number(idx)
}

/// A generating set of pair-monomials for `A^2(X)_Q` together with the
/// expansion of every pair in that generating set.
#[derive(Debug, Clone)]
pub struct Codim2Basis {
    /// Basis monomials `D_i D_j` as index pairs `(i, j)`, `i <= j`.
    pub monomials: Vec<(usize, usize)>,
    /// All pairs `(i, j)` with `i <= j`, the ambient monomial list.
    pub all_pairs: Vec<(usize, usize)>,
    /// `expansion[p]` gives `D_p = sum_b coeffs[b] * monomials[b]` in A^2_Q,
    /// verified through the full quadruple pairing.
    pub expansion: HashMap<(usize, usize), Vec<Rat>>,
    /// Pairing matrix: rows indexed by basis monomials, columns by
    /// `all_pairs`; entry = quadruple intersection number.
    pub pairing: Vec<Vec<i64>>,
}

impl Codim2Basis {
    pub fn rank(&self) -> usize {
        self.monomials.len()
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    pairs.extend((0..n).map(|i| (i, i)));
    pairs.sort_unstable();
    pairs
}

fn gram_row(table: &mut IntersectionTable, p: (usize, usize), pairs: &[(usize, usize)]) -> Vec<Rat> {
    pairs
        .iter()
        .map(|&(a, b)| rat(table.number([p.0, p.1, a, b])))
        .collect()
}

/// Greedy basis of `A^2(X)_Q` from pair-monomials by pairing rank, with an
/// optional caller-supplied hint that is validated and used if independent
/// and generating.
pub fn codim2_basis(fan: &Fan, hint: Option<&[(usize, usize)]>) -> Result<Codim2Basis, ChowError> {
    let n = fan.ray_count();
    let pairs = all_pairs(n);
    let mut table = IntersectionTable::new(fan);
    // Rank of the full degree-2 pairing.
    let full: Vec<Vec<Rat>> = pairs
        .iter()
        .map(|&p| gram_row(&mut table, p, &pairs))
        .collect();
    let need = {
        let mut m = full.clone();
        rref(&mut m).len()
    };
    if need == 0 {
        return Err(ChowError::RankDeficiency);
    }
    let monomials: Vec<(usize, usize)> = if let Some(hint) = hint {
        let rows: Vec<Vec<Rat>> = hint
            .iter()
            .map(|&p| gram_row(&mut table, p, &pairs))
            .collect();
        let got = {
            let mut m = rows.clone();
            rref(&mut m).len()
        };
        if got != need || got != hint.len() {
            return Err(ChowError::HintNotGenerating { got, need });
        }
        hint.to_vec()
    } else {
        // Distinct pairs first, squares as a fallback, lexicographic.
        let mut order: Vec<(usize, usize)> =
            pairs.iter().copied().filter(|(a, b)| a != b).collect();
        order.extend(pairs.iter().copied().filter(|(a, b)| a == b));
        let mut chosen = Vec::new();
        let mut span: Vec<Vec<Rat>> = Vec::new();
        for p in order {
            if chosen.len() == need {
                break;
            }
            let row = gram_row(&mut table, p, &pairs);
            let mut trial = span.clone();
            trial.push(row.clone());
            if rref(&mut trial).len() > span.len() {
                // keep reduced span small: store the reduced form
                span = trial;
                chosen.push(p);
            }
        }
        if chosen.len() != need {
            return Err(ChowError::RankDeficiency);
        }
        chosen
    };
    let basis_rows: Vec<Vec<Rat>> = monomials
        .iter()
        .map(|&p| gram_row(&mut table, p, &pairs))
        .collect();
    let mut expansion = HashMap::new();
    for &p in &pairs {
        let target = gram_row(&mut table, p, &pairs);
        let coeffs =
            solve_row_combination(&basis_rows, &target).ok_or(ChowError::RankDeficiency)?;
        expansion.insert(p, coeffs);
    }
    let pairing: Vec<Vec<i64>> = monomials
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .map(|&(c, d)| table.number([a, b, c, d]))
                .collect()
        })
        .collect();
    Ok(Codim2Basis {
        monomials,
        all_pairs: pairs,
        expansion,
        pairing,
    })
}

/// `sum_{i<j} D_i D_j . alpha` for `alpha` given in basis coordinates:
/// the pairing of `alpha` with `c_2(X) = sum_{i<j} D_i D_j`.
pub fn c2_pairing(fan: &Fan, basis: &Codim2Basis, alpha: &[Rat]) -> Rat {
    let mut table = IntersectionTable::new(fan);
    let n = fan.ray_count();
    let mut total = Rat::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            for (b, &(a, c)) in basis.monomials.iter().enumerate() {
                total += &alpha[b] * rat(table.number([i, j, a, c]));
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::p4_fan;
    use num_traits::One;

    #[test]
    fn p4_h4_is_one() {
        let fan = p4_fan();
        for i in 0..5 {
            assert_eq!(intersection_number(&fan, [i, i, i, i]), 1);
        }
        assert_eq!(intersection_number(&fan, [0, 1, 2, 3]), 1);
        assert_eq!(intersection_number(&fan, [0, 0, 1, 2]), 1);
    }

    #[test]
    fn p4_codim2_rank_one() {
        let fan = p4_fan();
        let basis = codim2_basis(&fan, None).unwrap();
        assert_eq!(basis.rank(), 1);
    }

    #[test]
    fn p4_c2_pairing_is_ten() {
        let fan = p4_fan();
        let basis = codim2_basis(&fan, None).unwrap();
        let alpha = vec![Rat::one()];
        assert_eq!(c2_pairing(&fan, &basis, &alpha), rat(10));
    }

    #[test]
    fn zero_alpha_pairs_to_zero() {
        let fan = p4_fan();
        let basis = codim2_basis(&fan, None).unwrap();
        let alpha = vec![Rat::zero()];
        assert!(c2_pairing(&fan, &basis, &alpha).is_zero());
    }

    #[test]
    fn randomized_matches_memoized() {
        let fan = p4_fan();
        let mut rng = rand::thread_rng();
        let mut table = IntersectionTable::new(&fan);
        for i in 0..5 {
            for j in i..5 {
                for k in j..5 {
                    for l in k..5 {
                        let key = [i, j, k, l];
                        assert_eq!(
                            table.number(key),
                            intersection_number_randomized(&fan, key, &mut rng),
                            "at {:?}",
                            key
                        );
                    }
                }
            }
        }
    }
}
