//! The certifier: forced zero intersections `C_i C_j = 0`, saturation by
//! transitivity and single-signed divisor relations, contradiction criteria,
//! and the embedding-only Chow-class stage. Every derivation is recorded in
//! a replayable trace (see [`crate::replay`]).
//!
//! The engine works with `q(i, j) := (phi* D_i)(phi* D_j)` for a hypothetical
//! totally nondegenerate finite morphism `phi` from an abelian surface.
//! All `q(i, j) >= 0`: squares because effective divisors on an abelian
//! surface have nonnegative self-intersection, cross terms because pullbacks
//! of effective divisors are nonzero effective, hence nef, by the same
//! translation argument. A divisor relation whose surviving coefficients are
//! single-signed therefore forces each surviving term to vanish.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{codim2_basis, ChowError, IntersectionTable};
use crate::fan::{Fan, ValidationReport};
use crate::lp::{feasible, Constraint, LpResult};
use crate::picard::classes_generate_pic;
use crate::ratlin::{nullspace, rat, to_primitive_integer, Rat};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("fan fails validation: {0:?}")]
    InvalidFan(ValidationReport),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FiniteMorphism,
    Embedding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    NoFiniteMorphism,
    NoEmbedding,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleFired {
    FullGraphConnected,
    PicGeneratingComponent,
    P1FactorSubgraph,
    DivisorialContraction,
    ChowClassStage,
}

/// One derivation step. Pairs are 0-based, normalized `i <= j`; squares
/// `(i, i)` are allowed and mean `q(i, i) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum TraceStep {
    /// `{x_i, x_j}` is a 2-element primitive collection, so `D_i D_j = 0`
    /// on X already.
    DisjointDivisors { pair: (usize, usize) },
    /// The dual vector `m` has pairing vector `relation` against the rays;
    /// on the pivot's survivor set the coefficients are all nonnegative, so
    /// every strictly positive survivor pairs to zero with the pivot.
    RelationRule {
        pivot: usize,
        m: [i64; 4],
        relation: Vec<i64>,
        concluded: Vec<(usize, usize)>,
    },
    /// `q(i, via) = q(via, j) = 0` forces `q(i, j) = 0` (ampleness of the
    /// sum otherwise).
    Transitivity { via: usize, pair: (usize, usize) },
    /// Chow-class stage: `q(pair) <= 0` holds identically on the constraint
    /// cone, witnessed by a Farkas combination; with `q(pair) >= 0` this
    /// forces equality.
    ChowZero {
        pair: (usize, usize),
        farkas: FarkasWitness,
    },
}

/// Integer Farkas combination proving `q(target) <= 0` on the cone
/// `{alpha : q_u(alpha) >= 0, q_e(alpha) = 0 (e in zero set)}`:
///
/// `target_multiplier * q_t + sum mu_u q_u + sum lambda_e q_e = 0`
///
/// with `target_multiplier > 0` and all `mu_u >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasWitness {
    pub target_multiplier: i64,
    pub inequalities: Vec<((usize, usize), i64)>,
    pub equalities: Vec<((usize, usize), i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ContradictionKind {
    /// The zero graph on all n vertices is connected, so complete, which is
    /// impossible on a projective X.
    FullGraphConnected,
    /// A connected component whose divisor classes generate Pic(X).
    PicGeneratingComponent { component: Vec<usize> },
    /// X = P^1 x X' and the zero graph restricted to the non-fiber vertices
    /// is connected.
    P1FactorSubgraph { fibers: (usize, usize) },
}

impl ContradictionKind {
    pub fn rule(&self) -> RuleFired {
        match self {
            ContradictionKind::FullGraphConnected => RuleFired::FullGraphConnected,
            ContradictionKind::PicGeneratingComponent { .. } => RuleFired::PicGeneratingComponent,
            ContradictionKind::P1FactorSubgraph { .. } => RuleFired::P1FactorSubgraph,
        }
    }
}

/// A primitive relation `x_a + x_b + x_c + x_d = k x_apex`, i.e. an
/// equivariant divisorial contraction to a (possibly singular) point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub collection: Vec<usize>,
    pub apex: usize,
    pub coefficient: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingReason {
    /// The basis coordinate itself vanishes on the solution span.
    CoordinateVanishes,
    /// The monomial's pairing functional vanishes on the solution span.
    PairingVanishes,
}

/// The Chow-class stage record: basis monomials, the final equality system
/// (each forced-zero pair with its linear functional in basis coordinates),
/// the span of the solution space, and the per-monomial reason why
/// `alpha^2` vanishes identically there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowCertificate {
    pub basis: Vec<(usize, usize)>,
    pub equality_system: Vec<EqualityRow>,
    pub span_basis: Vec<Vec<i64>>,
    pub monomial_vanishing: Vec<MonomialVanishing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityRow {
    pub pair: (usize, usize),
    /// `q(pair)` as a linear functional in basis coordinates.
    pub functional: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialVanishing {
    pub monomial: (usize, usize),
    pub reason: VanishingReason,
}

/// Machine-checkable proof document for one fan and mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub fan_name: String,
    pub n: usize,
    pub mode: Mode,
    pub status: VerdictStatus,
    pub rule: Option<RuleFired>,
    pub steps: Vec<TraceStep>,
    pub contradiction: Option<ContradictionKind>,
    pub contraction: Option<ContractionCertificate>,
    /// Monomial basis used by any ChowZero steps (recorded whenever the
    /// Chow stage ran, even if it did not fire).
    pub chow_basis: Option<Vec<(usize, usize)>>,
    pub chow: Option<ChowCertificate>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub mode: Mode,
    pub rule: Option<RuleFired>,
    pub certificate: Certificate,
}

/// The symmetric forced-zero set plus its derivation trace.
#[derive(Debug, Clone, Default)]
pub struct ObstructionState {
    pub n: usize,
    zeros: BTreeSet<(usize, usize)>,
    pub trace: Vec<TraceStep>,
}

fn norm(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl ObstructionState {
    pub fn new(n: usize) -> Self {
        ObstructionState {
            n,
            zeros: BTreeSet::new(),
            trace: Vec::new(),
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.zeros.contains(&norm(i, j))
    }

    pub fn zero_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.zeros.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Seed an arbitrary zero pair without a derivation step. Exploratory
    /// use only: certificates produced from hand-seeded states will not
    /// replay.
    pub fn seed_zero(&mut self, i: usize, j: usize) {
        self.zeros.insert(norm(i, j));
    }

    fn insert(&mut self, i: usize, j: usize, step: TraceStep) -> bool {
        if self.zeros.insert(norm(i, j)) {
            self.trace.push(step);
            true
        } else {
            false
        }
    }

    fn insert_silent(&mut self, i: usize, j: usize) -> bool {
        self.zeros.insert(norm(i, j))
    }

    /// Connected components of the zero graph (edges are distinct pairs).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for &(i, j) in &self.zeros {
            if i != j {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.n {
            let root = find(&mut parent, v);
            comps.entry(root).or_default().push(v);
        }
        comps.into_values().collect()
    }

    /// Is the zero graph connected on the given vertex subset (using only
    /// edges inside the subset)?
    pub fn connected_on(&self, vertices: &[usize]) -> bool {
        if vertices.len() <= 1 {
            return true;
        }
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![vertices[0]];
        seen.insert(vertices[0]);
        while let Some(v) = stack.pop() {
            for &u in &set {
                if !seen.contains(&u) && v != u && self.contains(v, u) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// Seed the zero set with all 2-element primitive collections: disjoint
/// divisors on X pull back to orthogonal divisors on A.
pub fn initial_zeros(fan: &Fan) -> ObstructionState {
    let mut state = ObstructionState::new(fan.ray_count());
    for pc in fan.primitive_collections() {
        if pc.0.len() == 2 {
            let pair = (pc.0[0], pc.0[1]);
            state.insert(pair.0, pair.1, TraceStep::DisjointDivisors { pair });
        }
    }
    state
}

/// Close the zero set under transitivity. Returns true if anything was
/// added.
fn transitivity_close(state: &mut ObstructionState) -> bool {
    let mut changed = false;
    loop {
        let mut added = false;
        for via in 0..state.n {
            let neigh: Vec<usize> = (0..state.n)
                .filter(|&k| k != via && state.contains(via, k))
                .collect();
            for (a, &i) in neigh.iter().enumerate() {
                for &j in &neigh[a + 1..] {
                    if !state.contains(i, j) {
                        state.insert(
                            i,
                            j,
                            TraceStep::Transitivity {
                                via,
                                pair: norm(i, j),
                            },
                        );
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
        changed = true;
    }
    changed
}

/// One relation-rule derivation, if any pivot admits a dual vector `m`
/// single-signed on its survivor set. The search is LP-complete over the
/// full rank-4 relation lattice, not just the four printed basis relations.
pub fn relation_rule_step(fan: &Fan, state: &mut ObstructionState) -> bool {
    let n = fan.ray_count();
    for pivot in 0..n {
        let survivors: Vec<usize> = (0..n).filter(|&k| !state.contains(pivot, k)).collect();
        if survivors.is_empty() {
            continue;
        }
        for &target in &survivors {
            // <m, x_target> >= 1, <m, x_u> >= 0 for all survivors u.
            // The all-nonpositive mirror is the same system for -m.
            let mut cons = Vec::with_capacity(survivors.len() + 1);
            cons.push(Constraint::new(
                fan.ray(target).0.iter().map(|&c| rat(c)).collect(),
                rat(1),
            ));
            for &u in &survivors {
                cons.push(Constraint::new(
                    fan.ray(u).0.iter().map(|&c| rat(c)).collect(),
                    rat(0),
                ));
            }
            let LpResult::Feasible(m_rat) = feasible(4, &cons) else {
                continue;
            };
            let m_int = to_primitive_integer(&m_rat);
            let m: [i64; 4] = [
                int64(&m_int[0]),
                int64(&m_int[1]),
                int64(&m_int[2]),
                int64(&m_int[3]),
            ];
            let mv = crate::lattice::DualVector(m);
            let relation: Vec<i64> = fan.rays().iter().map(|x| mv.pair(x)).collect();
            debug_assert!(survivors.iter().all(|&u| relation[u] >= 0));
            debug_assert!(relation[target] > 0);
            let concluded: Vec<(usize, usize)> = survivors
                .iter()
                .filter(|&&u| relation[u] > 0)
                .map(|&u| norm(pivot, u))
                .collect();
            let step = TraceStep::RelationRule {
                pivot,
                m,
                relation,
                concluded: concluded.clone(),
            };
            let mut any = false;
            for &(i, j) in &concluded {
                any |= state.insert_silent(i, j);
            }
            debug_assert!(any);
            state.trace.push(step);
            return true;
        }
    }
    false
}

fn int64(x: &num_bigint::BigInt) -> i64 {
    i64::try_from(x.clone()).expect("multiplier exceeds i64")
}

/// Fixpoint of transitivity closure and the relation rule. Idempotent.
pub fn saturate(fan: &Fan, state: &mut ObstructionState) {
    loop {
        let mut changed = transitivity_close(state);
        if relation_rule_step(fan, state) {
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

/// The contradiction criteria, in a fixed order for certificate stability.
pub fn contradiction_check(fan: &Fan, state: &ObstructionState) -> Option<ContradictionKind> {
    let n = fan.ray_count();
    let all: Vec<usize> = (0..n).collect();
    if state.connected_on(&all) && n > 1 {
        return Some(ContradictionKind::FullGraphConnected);
    }
    if n > 5 {
        for component in state.components() {
            if component.len() >= 2 && classes_generate_pic(fan, &component) {
                return Some(ContradictionKind::PicGeneratingComponent { component });
            }
        }
    }
    for factor in fan.p1_factors() {
        let (i, j) = factor.fibers;
        let others: Vec<usize> = (0..n).filter(|&v| v != i && v != j).collect();
        if others.len() >= 2 && state.connected_on(&others) {
            return Some(ContradictionKind::P1FactorSubgraph { fibers: (i, j) });
        }
    }
    None
}

/// Fires iff some primitive relation reads `x_a + x_b + x_c + x_d = k x_e`
/// with `k >= 1`: an equivariant divisorial contraction to a point.
pub fn contraction_criterion(fan: &Fan) -> Option<ContractionCertificate> {
    for pc in fan.primitive_collections() {
        if pc.0.len() != 4 {
            continue;
        }
        let Ok(rel) = fan.primitive_relation(&pc) else {
            continue;
        };
        if let [(apex, k)] = rel.rhs[..] {
            if k >= 1 {
                return Some(ContractionCertificate {
                    collection: pc.0.clone(),
                    apex,
                    coefficient: k,
                });
            }
        }
    }
    None
}

/// All index pairs `(i, j)` with `i <= j`.
pub fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// The embedding-only Chow-class stage. Models the unknown surface class in
/// A^2(X)_Q, forces pairs to zero by exact LP over the nonnegativity cone,
/// re-saturates, and finally tests whether `alpha^2` vanishes identically on
/// the solution span, which contradicts projectivity via
/// `c_2(X) alpha = alpha^2`.
pub struct ChowStageOutcome {
    /// Basis monomials referenced by any emitted ChowZero steps.
    pub basis: Vec<(usize, usize)>,
    /// The firing witness, if the stage reached a contradiction.
    pub fired: Option<ChowCertificate>,
}

pub fn chow_class_stage(
    fan: &Fan,
    state: &mut ObstructionState,
    basis_hint: Option<&[(usize, usize)]>,
) -> Result<ChowStageOutcome, ChowError> {
    let basis = codim2_basis(fan, basis_hint)?;
    let r = basis.rank();
    let n = fan.ray_count();
    let pairs = index_pairs(n);
    let mut table = IntersectionTable::new(fan);
    let functional = |table: &mut IntersectionTable, p: (usize, usize)| -> Vec<i64> {
        table.pairing_vector(p.0, p.1, &basis.monomials)
    };

    // Iterate: move implicit equalities of the cone into the zero set.
    loop {
        let mut added = false;
        let candidates: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(i, j)| !state.contains(i, j))
            .collect();
        'cand: for target in candidates {
            if state.contains(target.0, target.1) {
                continue; // may have been added by re-saturation
            }
            // Constraint list: target first, then one row per pair
            // (equalities as two rows).
            #[derive(Clone, Copy)]
            enum RowKind {
                Target,
                Ineq((usize, usize)),
                EqPlus((usize, usize)),
                EqMinus((usize, usize)),
            }
            let mut rows: Vec<(RowKind, Vec<Rat>, Rat)> = Vec::new();
            let tf = functional(&mut table, target);
            rows.push((
                RowKind::Target,
                tf.iter().map(|&x| rat(x)).collect(),
                rat(1),
            ));
            for &p in &pairs {
                let f = functional(&mut table, p);
                let fr: Vec<Rat> = f.iter().map(|&x| rat(x)).collect();
                if state.contains(p.0, p.1) {
                    rows.push((RowKind::EqPlus(p), fr.clone(), rat(0)));
                    rows.push((
                        RowKind::EqMinus(p),
                        fr.iter().map(|x| -x.clone()).collect(),
                        rat(0),
                    ));
                } else {
                    rows.push((RowKind::Ineq(p), fr, rat(0)));
                }
            }
            let cons: Vec<Constraint> = rows
                .iter()
                .map(|(_, c, b)| Constraint::new(c.clone(), b.clone()))
                .collect();
            match feasible(r, &cons) {
                LpResult::Feasible(_) => continue 'cand,
                LpResult::Infeasible(farkas) => {
                    let mult_int = to_primitive_integer(&farkas.multipliers);
                    let mut target_multiplier = 0i64;
                    let mut inequalities = Vec::new();
                    let mut eq_map: std::collections::BTreeMap<(usize, usize), i64> =
                        Default::default();
                    for ((kind, _, _), m) in rows.iter().zip(&mult_int) {
                        let m = int64(m);
                        if m == 0 {
                            continue;
                        }
                        match kind {
                            RowKind::Target => target_multiplier = m,
                            RowKind::Ineq(p) => inequalities.push((*p, m)),
                            RowKind::EqPlus(p) => *eq_map.entry(*p).or_insert(0) += m,
                            RowKind::EqMinus(p) => *eq_map.entry(*p).or_insert(0) -= m,
                        }
                    }
                    debug_assert!(target_multiplier > 0);
                    let equalities: Vec<((usize, usize), i64)> = eq_map
                        .into_iter()
                        .filter(|(_, l)| *l != 0)
                        .collect();
                    state.insert(
                        target.0,
                        target.1,
                        TraceStep::ChowZero {
                            pair: target,
                            farkas: FarkasWitness {
                                target_multiplier,
                                inequalities,
                                equalities,
                            },
                        },
                    );
                    saturate(fan, state);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }

    // Solution span of the equality system.
    let equality_system: Vec<EqualityRow> = state
        .zero_pairs()
        .map(|p| EqualityRow {
            pair: p,
            functional: functional(&mut table, p),
        })
        .collect();
    let eq_rows: Vec<Vec<Rat>> = equality_system
        .iter()
        .map(|row| row.functional.iter().map(|&x| rat(x)).collect())
        .collect();
    let span = nullspace(&eq_rows, r);
    let span_int: Vec<Vec<i64>> = span
        .iter()
        .map(|v| to_primitive_integer(v).iter().map(int64).collect())
        .collect();

    // alpha^2 = sum_b alpha_b q_{monomial b}(alpha); it vanishes on the span
    // if for each b one of the factors does.
    let mut monomial_vanishing = Vec::with_capacity(r);
    for (b, &p) in basis.monomials.iter().enumerate() {
        let coord_vanishes = span_int.iter().all(|v| v[b] == 0);
        if coord_vanishes {
            monomial_vanishing.push(MonomialVanishing {
                monomial: p,
                reason: VanishingReason::CoordinateVanishes,
            });
            continue;
        }
        let f = functional(&mut table, p);
        let pairing_vanishes = span_int
            .iter()
            .all(|v| f.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() == 0);
        if pairing_vanishes {
            monomial_vanishing.push(MonomialVanishing {
                monomial: p,
                reason: VanishingReason::PairingVanishes,
            });
        } else {
            return Ok(ChowStageOutcome {
                basis: basis.monomials.clone(),
                fired: None,
            });
        }
    }
    Ok(ChowStageOutcome {
        basis: basis.monomials.clone(),
        fired: Some(ChowCertificate {
            basis: basis.monomials.clone(),
            equality_system,
            span_basis: span_int,
            monomial_vanishing,
        }),
    })
}

/// Full pipeline: divisorial-contraction fast path, then
/// `initial_zeros -> saturate -> contradiction_check`, and in embedding mode
/// additionally the Chow-class stage. Never claims existence.
pub fn certify(
    fan: &Fan,
    mode: Mode,
    basis_hint: Option<&[(usize, usize)]>,
) -> Result<Verdict, CertifyError> {
    let report = fan.validate();
    if !report.all_true() {
        return Err(CertifyError::InvalidFan(report));
    }
    let n = fan.ray_count();
    let base_cert = |status, rule, state: &ObstructionState| Certificate {
        fan_name: fan.name.clone(),
        n,
        mode,
        status,
        rule,
        steps: state.trace.clone(),
        contradiction: None,
        contraction: None,
        chow_basis: None,
        chow: None,
    };

    if let Some(contraction) = contraction_criterion(fan) {
        let state = ObstructionState::new(n);
        let mut cert = base_cert(
            VerdictStatus::NoFiniteMorphism,
            Some(RuleFired::DivisorialContraction),
            &state,
        );
        cert.contraction = Some(contraction);
        return Ok(Verdict {
            status: VerdictStatus::NoFiniteMorphism,
            mode,
            rule: Some(RuleFired::DivisorialContraction),
            certificate: cert,
        });
    }

    let mut state = initial_zeros(fan);
    saturate(fan, &mut state);
    if let Some(kind) = contradiction_check(fan, &state) {
        let rule = kind.rule();
        let mut cert = base_cert(VerdictStatus::NoFiniteMorphism, Some(rule), &state);
        cert.contradiction = Some(kind);
        return Ok(Verdict {
            status: VerdictStatus::NoFiniteMorphism,
            mode,
            rule: Some(rule),
            certificate: cert,
        });
    }

    let mut chow_basis = None;
    if mode == Mode::Embedding {
        let outcome = chow_class_stage(fan, &mut state, basis_hint)?;
        chow_basis = Some(outcome.basis);
        if let Some(chow) = outcome.fired {
            let mut cert = base_cert(
                VerdictStatus::NoEmbedding,
                Some(RuleFired::ChowClassStage),
                &state,
            );
            cert.chow_basis = chow_basis;
            cert.chow = Some(chow);
            return Ok(Verdict {
                status: VerdictStatus::NoEmbedding,
                mode,
                rule: Some(RuleFired::ChowClassStage),
                certificate: cert,
            });
        }
        // The stage may still have enlarged the zero set enough for a graph
        // contradiction (re-saturation runs inside); check once more.
        if let Some(kind) = contradiction_check(fan, &state) {
            let rule = kind.rule();
            let mut cert = base_cert(VerdictStatus::NoEmbedding, Some(rule), &state);
            cert.chow_basis = chow_basis;
            cert.contradiction = Some(kind);
            return Ok(Verdict {
                status: VerdictStatus::NoEmbedding,
                mode,
                rule: Some(rule),
                certificate: cert,
            });
        }
    }

    let mut cert = base_cert(VerdictStatus::Inconclusive, None, &state);
    cert.chow_basis = chow_basis;
    Ok(Verdict {
        status: VerdictStatus::Inconclusive,
        mode,
        rule: None,
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::p4_fan;

    #[test]
    fn p4_engine_is_silent() {
        let fan = p4_fan();
        let mut state = initial_zeros(&fan);
        assert!(state.is_empty());
        saturate(&fan, &mut state);
        assert!(state.is_empty());
        assert!(contradiction_check(&fan, &state).is_none());
        assert!(contraction_criterion(&fan).is_none());
    }

    #[test]
    fn p4_inconclusive_both_modes() {
        let fan = p4_fan();
        for mode in [Mode::FiniteMorphism, Mode::Embedding] {
            let v = certify(&fan, mode, None).unwrap();
            assert_eq!(v.status, VerdictStatus::Inconclusive, "{:?}", mode);
        }
    }

    #[test]
    fn saturate_is_idempotent() {
        let fan = p4_fan();
        let mut state = initial_zeros(&fan);
        saturate(&fan, &mut state);
        let before: Vec<_> = state.zero_pairs().collect();
        saturate(&fan, &mut state);
        let after: Vec<_> = state.zero_pairs().collect();
        assert_eq!(before, after);
    }

    #[test]
    fn blowup_of_p4_at_point_contracts() {
        use crate::lattice::LatticeVector;
        use itertools::Itertools;
        let mut rays: Vec<LatticeVector> = (0..4).map(LatticeVector::basis).collect();
        rays.push(LatticeVector([-1, -1, -1, -1]));
        rays.push(LatticeVector([1, 1, 1, 1]));
        let mut cones: Vec<Vec<usize>> = (0..5usize)
            .combinations(4)
            .filter(|c| !c.iter().all(|&i| i < 4))
            .collect();
        for skip in 0..4usize {
            let mut c: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
            c.push(5);
            cones.push(c);
        }
        let fan = Fan::new("BlP4pt", rays, cones).unwrap();
        assert!(fan.validate().all_true());
        let c = contraction_criterion(&fan).unwrap();
        assert_eq!(c.collection, vec![0, 1, 2, 3]);
        assert_eq!(c.apex, 5);
        assert_eq!(c.coefficient, 1);
        // The general engine confirms the contraction verdict.
        let mut state = initial_zeros(&fan);
        saturate(&fan, &mut state);
        assert_eq!(
            contradiction_check(&fan, &state),
            Some(ContradictionKind::FullGraphConnected)
        );
        let v = certify(&fan, Mode::FiniteMorphism, None).unwrap();
        assert_eq!(v.status, VerdictStatus::NoFiniteMorphism);
        assert_eq!(v.rule, Some(RuleFired::DivisorialContraction));
    }
}
