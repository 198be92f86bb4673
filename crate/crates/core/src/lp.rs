//! Exact rational feasibility via Fourier-Motzkin elimination.
//!
//! Every constraint is `coeffs . x >= rhs`. The eliminator tracks, for each
//! derived constraint, its nonnegative combination of the original rows, so
//! an infeasible system yields a Farkas certificate and a feasible one yields
//! an exact rational witness by back-substitution. Problem sizes here are a
//! handful of variables and a few dozen constraints.

use num_traits::{Signed, Zero};

use crate::ratlin::Rat;

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, rhs }
    }
}

/// Nonnegative multipliers over the original constraints with
/// `sum mu_i coeffs_i = 0` and `sum mu_i rhs_i > 0`.
#[derive(Clone, Debug)]
pub struct Farkas {
    pub multipliers: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum LpResult {
    Feasible(Vec<Rat>),
    Infeasible(Farkas),
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible(_))
    }
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<Rat>,
    rhs: Rat,
    mult: Vec<Rat>,
}

impl Row {
    fn scaled(&self, f: &Rat) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            rhs: &self.rhs * f,
            mult: self.mult.iter().map(|m| m * f).collect(),
        }
    }

    fn plus(&self, other: &Row) -> Row {
        Row {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            rhs: &self.rhs + &other.rhs,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
        }
    }

    fn normalized(&self) -> Row {
        // Positive scaling so syntactically-equal rows dedupe.
        let scale = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs().recip());
        match scale {
            Some(s) => self.scaled(&s),
            None => self.clone(),
        }
    }
}

/// Decide feasibility of `{x : coeffs_i . x >= rhs_i}` over the rationals.
pub fn feasible(num_vars: usize, constraints: &[Constraint]) -> LpResult {
    let n = constraints.len();
    let mut rows: Vec<Row> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            assert_eq!(c.coeffs.len(), num_vars);
            let mut mult = vec![Rat::zero(); n];
            mult[i] = Rat::from_integer(1.into());
            Row {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                mult,
            }
        })
        .collect();

    // Stage snapshots for back-substitution: stages[v] holds the rows that
    // still mention variable v at the moment v is eliminated.
    let mut stages: Vec<Vec<Row>> = vec![Vec::new(); num_vars];

    for v in (0..num_vars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for row in rows {
            match row.coeffs[v].is_zero() {
                true => rest.push(row),
                false if row.coeffs[v].is_positive() => pos.push(row),
                false => neg.push(row),
            }
        }
        stages[v] = pos.iter().chain(neg.iter()).cloned().collect();
        for p in &pos {
            let ps = p.scaled(&p.coeffs[v].recip());
            for q in &neg {
                let qs = q.scaled(&(-q.coeffs[v].clone()).recip());
                rest.push(ps.plus(&qs));
            }
        }
        // Drop dominated duplicates: identical coefficient vectors keep the
        // strongest (largest) rhs.
        let mut kept: Vec<Row> = Vec::new();
        'outer: for row in rest {
            let row = row.normalized();
            for k in kept.iter_mut() {
                if k.coeffs == row.coeffs {
                    if row.rhs > k.rhs {
                        *k = row;
                    }
                    continue 'outer;
                }
            }
            kept.push(row);
        }
        // Early contradiction check on variable-free rows.
        for row in &kept {
            if row.coeffs.iter().all(|c| c.is_zero()) && row.rhs.is_positive() {
                return LpResult::Infeasible(Farkas {
                    multipliers: row.mult.clone(),
                });
            }
        }
        rows = kept
            .into_iter()
            .filter(|r| r.coeffs.iter().any(|c| !c.is_zero()) || r.rhs.is_positive())
            .collect();
    }

    debug_assert!(rows.is_empty());

    // Back-substitute a witness, lowest variable first.
    let mut x = vec![Rat::zero(); num_vars];
    for v in 0..num_vars {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for row in &stages[v] {
            let mut bound = row.rhs.clone();
            for (j, xj) in x.iter().enumerate().take(v) {
                bound -= &row.coeffs[j] * xj;
            }
            bound /= &row.coeffs[v];
            if row.coeffs[v].is_positive() {
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            }
        }
        x[v] = match (lo, hi) {
            (Some(l), Some(h)) => (&l + &h) / Rat::from_integer(2.into()),
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Rat::zero(),
        };
    }
    LpResult::Feasible(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    fn c(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| rat(x)).collect(), rat(rhs))
    }

    fn check_witness(n: usize, cons: &[Constraint]) {
        match feasible(n, cons) {
            LpResult::Feasible(x) => {
                for con in cons {
                    let dot: Rat = con.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
                    assert!(dot >= con.rhs, "witness violates {:?}", con);
                }
            }
            LpResult::Infeasible(_) => panic!("expected feasible"),
        }
    }

    fn check_farkas(n: usize, cons: &[Constraint]) {
        match feasible(n, cons) {
            LpResult::Infeasible(f) => {
                assert_eq!(f.multipliers.len(), cons.len());
                let mut rhs = Rat::zero();
                for (m, con) in f.multipliers.iter().zip(cons) {
                    assert!(!m.is_negative());
                    rhs += m * &con.rhs;
                }
                assert!(rhs.is_positive());
                for v in 0..n {
                    let s: Rat = f
                        .multipliers
                        .iter()
                        .zip(cons)
                        .map(|(m, con)| m * &con.coeffs[v])
                        .sum();
                    assert!(s.is_zero());
                }
            }
            LpResult::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn simple_feasible() {
        check_witness(2, &[c(&[1, 0], 1), c(&[0, 1], 0), c(&[-1, -1], -5)]);
    }

    #[test]
    fn simple_infeasible() {
        check_farkas(2, &[c(&[1, 0], 1), c(&[-1, 0], 0)]);
    }

    #[test]
    fn equality_pair_feasible() {
        // x + y = 3, x >= 1, y >= 1
        check_witness(
            2,
            &[c(&[1, 1], 3), c(&[-1, -1], -3), c(&[1, 0], 1), c(&[0, 1], 1)],
        );
    }

    #[test]
    fn degenerate_no_constraints() {
        check_witness(3, &[]);
    }

    #[test]
    fn zero_row_infeasible() {
        check_farkas(2, &[c(&[0, 0], 1)]);
    }

    #[test]
    fn strict_chain_infeasible() {
        // x >= 1, y >= x + 1 (y - x >= 1), -y >= -1 (y <= 1) => infeasible
        check_farkas(2, &[c(&[1, 0], 1), c(&[-1, 1], 1), c(&[0, -1], -1)]);
    }
}
