//! Small exact rational linear algebra: row reduction, rank, solving and
//! nullspaces. Matrices here never exceed a few dozen rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form in place. Returns the pivot column per row.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Solve `sum_i x_i rows_i = target` over Q; `None` if inconsistent.
pub fn solve_row_combination(rows: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    // Transpose into a system A x = b with columns = rows_i.
    let n = rows.len();
    let m = target.len();
    let mut aug: Vec<Vec<Rat>> = (0..m)
        .map(|j| {
            let mut row: Vec<Rat> = (0..n).map(|i| rows[i][j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        if c == n {
            return None; // pivot in the augmented column
        }
        x[c] = aug[r][n].clone();
    }
    // Verify (free variables set to zero).
    for j in 0..m {
        let mut acc = Rat::zero();
        for i in 0..n {
            acc += &x[i] * &rows[i][j];
        }
        if acc != target[j] {
            return None;
        }
    }
    Some(x)
}

/// A basis of `{v : rows_i . v = 0 for all i}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector (positive content).
pub fn to_primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(&x.abs());
    }
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_and_rref() {
        let rows = vec![rv(&[1, 2, 3]), rv(&[2, 4, 6]), rv(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn solve_combination() {
        let rows = vec![rv(&[1, 0, 1]), rv(&[0, 1, 1])];
        let x = solve_row_combination(&rows, &rv(&[2, 3, 5])).unwrap();
        assert_eq!(x, rv(&[2, 3]));
        assert!(solve_row_combination(&rows, &rv(&[1, 1, 3])).is_none());
    }

    #[test]
    fn nullspace_dimensions() {
        let rows = vec![rv(&[1, 1, 0]), rv(&[0, 0, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for r in &rows {
                let dot: Rat = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn primitive_integer_scaling() {
        let v = vec![rat(1) / rat(2), rat(-3) / rat(4), rat(0)];
        let ints = to_primitive_integer(&v);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
