//! Independent certificate checker. Replays every derivation step of a
//! [`Certificate`] against the fan alone, using its own graph routines,
//! fraction-free integer linear algebra, and the randomized (memo-free)
//! intersection-number evaluator, so that a bug in the certifier's code path
//! cannot silently vouch for itself.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chow::intersection_number_randomized;
use crate::fan::Fan;
use crate::lattice::{DualVector, LatticeVector};
use crate::obstruction::{
    Certificate, ChowCertificate, ContractionCertificate, ContradictionKind, FarkasWitness, Mode,
    RuleFired, TraceStep, VanishingReason, VerdictStatus,
};

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("certificate is for a fan with {cert} rays, fan has {fan}")]
    RayCountMismatch { cert: usize, fan: usize },
    #[error("step {step}: {reason}")]
    BadStep { step: usize, reason: String },
    #[error("claimed contradiction does not hold: {0}")]
    BadContradiction(String),
    #[error("divisorial contraction witness is invalid: {0}")]
    BadContraction(String),
    #[error("Chow-stage section is invalid: {0}")]
    BadChowSection(String),
    #[error("status/rule bookkeeping is inconsistent: {0}")]
    Inconsistent(String),
}

fn bad(step: usize, reason: impl Into<String>) -> ReplayError {
    ReplayError::BadStep {
        step,
        reason: reason.into(),
    }
}

/// Zero-pair bookkeeping local to the checker.
#[derive(Default)]
struct Zeros(BTreeSet<(usize, usize)>);

impl Zeros {
    fn norm(i: usize, j: usize) -> (usize, usize) {
        if i <= j {
            (i, j)
        } else {
            (j, i)
        }
    }
    fn has(&self, i: usize, j: usize) -> bool {
        self.0.contains(&Self::norm(i, j))
    }
    fn add(&mut self, i: usize, j: usize) {
        self.0.insert(Self::norm(i, j));
    }
    /// Breadth-first connectivity over edges inside `vertices`.
    fn connected_on(&self, vertices: &[usize]) -> bool {
        let Some(&start) = vertices.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in vertices {
                if u != v && !seen.contains(&u) && self.has(u, v) {
                    seen.insert(u);
                    queue.push_back(u);
                }
            }
        }
        seen.len() == vertices.len()
    }
}

/// Fraction-free (Bareiss) row elimination rank of an integer matrix.
fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in (rank + 1)..m.len() {
            for c in (col + 1)..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Do the integer rows span all of Z^ncols? True iff they have full rank
/// and the gcd of all maximal minors is 1 (checked via Hermite-style
/// column-by-column reduction with explicit gcd pivots — a different
/// algorithm from the certifier's).
fn spans_lattice(rows: &[Vec<BigInt>], ncols: usize) -> bool {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut row = 0;
    for col in 0..ncols {
        // Reduce column `col` below `row` to a single gcd entry.
        loop {
            let mut nonzero: Vec<usize> =
                (row..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
            if nonzero.is_empty() {
                return false;
            }
            if nonzero.len() == 1 {
                m.swap(row, nonzero[0]);
                break;
            }
            nonzero.sort_by_key(|&r| m[r][col].abs());
            let (small, other) = (nonzero[0], nonzero[1]);
            let q = &m[other][col] / &m[small][col];
            for c in 0..ncols {
                let sub = &q * &m[small][c];
                m[other][c] -= sub;
            }
        }
        if !m[row][col].abs().is_one() {
            return false;
        }
        row += 1;
        if row == m.len() {
            return (col + 1) == ncols;
        }
    }
    true
}

struct Checker<'a> {
    fan: &'a Fan,
    rng: ChaCha8Rng,
}

impl<'a> Checker<'a> {
    fn number(&mut self, a: usize, b: usize, c: usize, d: usize) -> i64 {
        intersection_number_randomized(self.fan, [a, b, c, d], &mut self.rng)
    }

    /// The functional q(pair) evaluated coordinate-wise against the listed
    /// basis monomials.
    fn functional(&mut self, pair: (usize, usize), basis: &[(usize, usize)]) -> Vec<i64> {
        basis
            .iter()
            .map(|&(k, l)| self.number(pair.0, pair.1, k, l))
            .collect()
    }
}

/// Re-validate an emitted certificate against the fan alone.
pub fn replay(fan: &Fan, cert: &Certificate) -> Result<(), ReplayError> {
    let n = fan.ray_count();
    if cert.n != n {
        return Err(ReplayError::RayCountMismatch { cert: cert.n, fan: n });
    }
    let mut checker = Checker {
        fan,
        rng: ChaCha8Rng::seed_from_u64(0x7e57ab1e),
    };
    let mut zeros = Zeros::default();

    for (si, step) in cert.steps.iter().enumerate() {
        match step {
            TraceStep::DisjointDivisors { pair: (i, j) } => {
                if i == j || *i >= n || *j >= n {
                    return Err(bad(si, "disjoint-divisor pair is not two distinct rays"));
                }
                if fan.cone_exists(&[*i, *j]) {
                    return Err(bad(si, format!("rays {} and {} span a cone", i, j)));
                }
                zeros.add(*i, *j);
            }
            TraceStep::RelationRule {
                pivot,
                m,
                relation,
                concluded,
            } => {
                if *pivot >= n || relation.len() != n {
                    return Err(bad(si, "pivot or relation vector out of shape"));
                }
                if m.iter().all(|&c| c == 0) {
                    return Err(bad(si, "zero dual vector"));
                }
                let mv = DualVector(*m);
                for (k, &r) in relation.iter().enumerate() {
                    if mv.pair(fan.ray(k)) != r {
                        return Err(bad(si, format!("relation coefficient {} is wrong", k)));
                    }
                }
                // Single-signedness on the pivot's survivor set.
                for k in 0..n {
                    if !zeros.has(*pivot, k) && relation[k] < 0 {
                        return Err(bad(
                            si,
                            format!("survivor {} has negative coefficient", k),
                        ));
                    }
                }
                if concluded.is_empty() {
                    return Err(bad(si, "relation rule concluded nothing"));
                }
                for &(i, j) in concluded {
                    let other = if i == *pivot {
                        j
                    } else if j == *pivot {
                        i
                    } else {
                        return Err(bad(si, "concluded pair does not involve the pivot"));
                    };
                    if zeros.has(*pivot, other) {
                        continue; // already known; harmless
                    }
                    if relation[other] <= 0 {
                        return Err(bad(
                            si,
                            format!("pair with {} lacks a positive coefficient", other),
                        ));
                    }
                    zeros.add(*pivot, other);
                }
            }
            TraceStep::Transitivity { via, pair: (i, j) } => {
                if via == i || via == j {
                    return Err(bad(si, "transitivity via an endpoint"));
                }
                if !zeros.has(*i, *via) || !zeros.has(*via, *j) {
                    return Err(bad(si, "transitivity premises are not established"));
                }
                zeros.add(*i, *j);
            }
            TraceStep::ChowZero { pair, farkas } => {
                check_farkas(&mut checker, &zeros, *pair, farkas, si)?;
                zeros.add(pair.0, pair.1);
            }
        }
    }

    match (&cert.contradiction, &cert.contraction, cert.rule) {
        (Some(kind), None, Some(rule)) if kind.rule() == rule => {
            check_contradiction(fan, &zeros, kind)?;
        }
        (None, Some(contraction), Some(RuleFired::DivisorialContraction)) => {
            check_contraction(fan, contraction)?;
        }
        (None, None, Some(RuleFired::ChowClassStage)) => {
            let Some(chow) = &cert.chow else {
                return Err(ReplayError::Inconsistent(
                    "ChowClassStage fired without a Chow section".into(),
                ));
            };
            if cert.mode != Mode::Embedding || cert.status != VerdictStatus::NoEmbedding {
                return Err(ReplayError::Inconsistent(
                    "ChowClassStage outside embedding mode".into(),
                ));
            }
            check_chow_section(&mut checker, &zeros, chow)?;
        }
        (None, None, None) if cert.status == VerdictStatus::Inconclusive => {}
        _ => {
            return Err(ReplayError::Inconsistent(format!(
                "rule {:?} with status {:?} and mismatched witness sections",
                cert.rule, cert.status
            )));
        }
    }
    Ok(())
}

/// The Farkas identity `t q_target + sum mu q_u + sum lambda q_e = 0` must
/// hold after independent re-evaluation of every functional, with t > 0,
/// mu >= 0, inequality rows outside the zero set and equality rows inside.
/// The identity is checked against every pair monomial — a spanning set of
/// the codimension-2 Chow group — so no recorded basis is trusted.
fn check_farkas(
    checker: &mut Checker,
    zeros: &Zeros,
    target: (usize, usize),
    farkas: &FarkasWitness,
    si: usize,
) -> Result<(), ReplayError> {
    if farkas.target_multiplier <= 0 {
        return Err(bad(si, "target multiplier must be positive"));
    }
    if zeros.has(target.0, target.1) {
        return Err(bad(si, "target pair already zero"));
    }
    let n = checker.fan.ray_count();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i..n {
            basis.push((i, j));
        }
    }
    let basis = &basis[..];
    let r = basis.len();
    let mut acc = vec![0i128; r];
    let add = |f: &[i64], c: i64, acc: &mut Vec<i128>| {
        for (a, &x) in acc.iter_mut().zip(f) {
            *a += i128::from(c) * i128::from(x);
        }
    };
    let tf = checker.functional(target, basis);
    add(&tf, farkas.target_multiplier, &mut acc);
    for &(p, mu) in &farkas.inequalities {
        if mu < 0 {
            return Err(bad(si, "negative multiplier on an inequality row"));
        }
        if zeros.has(p.0, p.1) {
            return Err(bad(si, "inequality row cites a pair already forced zero"));
        }
        let f = checker.functional(p, basis);
        add(&f, mu, &mut acc);
    }
    for &(p, lambda) in &farkas.equalities {
        if !zeros.has(p.0, p.1) {
            return Err(bad(si, "equality row cites a pair not yet forced zero"));
        }
        let f = checker.functional(p, basis);
        add(&f, lambda, &mut acc);
    }
    if acc.iter().any(|&a| a != 0) {
        return Err(bad(si, "Farkas combination does not vanish"));
    }
    Ok(())
}

fn check_contradiction(
    fan: &Fan,
    zeros: &Zeros,
    kind: &ContradictionKind,
) -> Result<(), ReplayError> {
    let n = fan.ray_count();
    match kind {
        ContradictionKind::FullGraphConnected => {
            let all: Vec<usize> = (0..n).collect();
            if n < 2 || !zeros.connected_on(&all) {
                return Err(ReplayError::BadContradiction(
                    "zero graph is not connected on all rays".into(),
                ));
            }
        }
        ContradictionKind::PicGeneratingComponent { component } => {
            if n <= 5 || component.len() < 2 {
                return Err(ReplayError::BadContradiction(
                    "component criterion needs n > 5 and at least two rays".into(),
                ));
            }
            if !zeros.connected_on(component) {
                return Err(ReplayError::BadContradiction(
                    "claimed component is not connected in the zero graph".into(),
                ));
            }
            // The component's divisor classes, together with the four
            // div(e(m)) relations, must span Z^n.
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for &i in component {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                rows.push(e);
            }
            for d in 0..4 {
                let m = DualVector::basis(d);
                rows.push(
                    fan.rays()
                        .iter()
                        .map(|x| BigInt::from(m.pair(x)))
                        .collect(),
                );
            }
            if !spans_lattice(&rows, n) {
                return Err(ReplayError::BadContradiction(
                    "component classes do not generate the divisor class group".into(),
                ));
            }
        }
        ContradictionKind::P1FactorSubgraph { fibers: (i, j) } => {
            if *fan.ray(*i) + *fan.ray(*j) != LatticeVector::ZERO {
                return Err(ReplayError::BadContradiction(
                    "fiber rays are not opposite".into(),
                ));
            }
            for cone in fan.max_cones() {
                if cone.contains(i) == cone.contains(j) {
                    return Err(ReplayError::BadContradiction(
                        "a maximal cone does not contain exactly one fiber ray".into(),
                    ));
                }
            }
            let others: Vec<usize> = (0..n).filter(|v| v != i && v != j).collect();
            let rows: Vec<Vec<BigInt>> = others
                .iter()
                .map(|&v| fan.ray(v).0.iter().map(|&c| BigInt::from(c)).collect())
                .collect();
            if integer_rank(&rows) != 3 {
                return Err(ReplayError::BadContradiction(
                    "non-fiber rays do not lie in a rank-3 complement".into(),
                ));
            }
            if others.len() < 2 || !zeros.connected_on(&others) {
                return Err(ReplayError::BadContradiction(
                    "zero graph is not connected off the fibers".into(),
                ));
            }
        }
    }
    Ok(())
}

fn check_contraction(fan: &Fan, c: &ContractionCertificate) -> Result<(), ReplayError> {
    if c.collection.len() != 4 || c.coefficient < 1 {
        return Err(ReplayError::BadContraction(
            "need four rays summing to a positive multiple of the apex".into(),
        ));
    }
    if c.collection.contains(&c.apex) {
        return Err(ReplayError::BadContraction("apex inside the collection".into()));
    }
    if fan.cone_exists(&c.collection) {
        return Err(ReplayError::BadContraction("collection spans a cone".into()));
    }
    for skip in &c.collection {
        let sub: Vec<usize> = c.collection.iter().copied().filter(|r| r != skip).collect();
        if !fan.cone_exists(&sub) {
            return Err(ReplayError::BadContraction(
                "collection is not a minimal non-face".into(),
            ));
        }
    }
    let sum = c
        .collection
        .iter()
        .fold(LatticeVector::ZERO, |acc, &i| acc + *fan.ray(i));
    if sum != fan.ray(c.apex).scale(c.coefficient) {
        return Err(ReplayError::BadContraction(
            "rays do not sum to the stated apex multiple".into(),
        ));
    }
    Ok(())
}

fn check_chow_section(
    checker: &mut Checker,
    zeros: &Zeros,
    chow: &ChowCertificate,
) -> Result<(), ReplayError> {
    let r = chow.basis.len();
    let err = |m: &str| ReplayError::BadChowSection(m.into());

    // The claimed monomial basis must span the pairing space: its pairing
    // rows must have the same rank as the full pair-against-pair Gram
    // matrix, and be independent.
    let n = checker.fan.ray_count();
    let mut all_pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            all_pairs.push((i, j));
        }
    }
    let gram: Vec<Vec<BigInt>> = all_pairs
        .iter()
        .map(|&p| {
            all_pairs
                .iter()
                .map(|&(k, l)| BigInt::from(checker.number(p.0, p.1, k, l)))
                .collect()
        })
        .collect();
    let full_rank = integer_rank(&gram);
    let basis_rows: Vec<Vec<BigInt>> = chow
        .basis
        .iter()
        .map(|&p| {
            all_pairs
                .iter()
                .map(|&(k, l)| BigInt::from(checker.number(p.0, p.1, k, l)))
                .collect()
        })
        .collect();
    if integer_rank(&basis_rows) != r || full_rank != r {
        return Err(err("basis monomials do not span the pairing space"));
    }

    // Equality system: every recorded functional re-evaluates correctly and
    // every forced-zero pair is present (the span is cut out by all of them).
    let recorded: BTreeSet<(usize, usize)> =
        chow.equality_system.iter().map(|row| row.pair).collect();
    if recorded != zeros.0 {
        return Err(err("equality system does not list exactly the forced-zero pairs"));
    }
    for row in &chow.equality_system {
        if row.functional.len() != r {
            return Err(err("functional has wrong arity"));
        }
        let f = checker.functional(row.pair, &chow.basis);
        if f != row.functional {
            return Err(err("recorded functional does not match re-evaluation"));
        }
    }

    // Span: independent vectors annihilated by the system, spanning its
    // whole nullspace.
    for v in &chow.span_basis {
        if v.len() != r {
            return Err(err("span vector has wrong arity"));
        }
        for row in &chow.equality_system {
            let dot: i128 = row
                .functional
                .iter()
                .zip(v)
                .map(|(&a, &b)| i128::from(a) * i128::from(b))
                .sum();
            if dot != 0 {
                return Err(err("span vector violates an equality row"));
            }
        }
    }
    let span_rows: Vec<Vec<BigInt>> = chow
        .span_basis
        .iter()
        .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    if integer_rank(&span_rows) != chow.span_basis.len() {
        return Err(err("span vectors are dependent"));
    }
    let sys_rows: Vec<Vec<BigInt>> = chow
        .equality_system
        .iter()
        .map(|row| row.functional.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    if chow.span_basis.len() + integer_rank(&sys_rows) != r {
        return Err(err("span does not exhaust the nullspace of the system"));
    }

    // Per-monomial vanishing: alpha^2 = sum_b alpha_b q_{m_b}(alpha) is
    // identically zero on the span because one factor dies for each b.
    if chow.monomial_vanishing.len() != r {
        return Err(err("vanishing list must cover every basis monomial"));
    }
    for (b, mv) in chow.monomial_vanishing.iter().enumerate() {
        if mv.monomial != chow.basis[b] {
            return Err(err("vanishing list out of order"));
        }
        match mv.reason {
            VanishingReason::CoordinateVanishes => {
                if chow.span_basis.iter().any(|v| v[b] != 0) {
                    return Err(err("claimed coordinate does not vanish on the span"));
                }
            }
            VanishingReason::PairingVanishes => {
                let f = checker.functional(mv.monomial, &chow.basis);
                for v in &chow.span_basis {
                    let dot: i128 = f
                        .iter()
                        .zip(v)
                        .map(|(&a, &b)| i128::from(a) * i128::from(b))
                        .sum();
                    if dot != 0 {
                        return Err(err("claimed pairing does not vanish on the span"));
                    }
                }
            }
        }
    }
    Ok(())
}
