//! Finite complete nonsingular fans in `Z^4`: validation, primitive
//! collections and relations, star subdivisions, P^1-factor detection and
//! reconstruction from primitive-relation presentations.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{dual_basis, express_in_basis, is_unimodular_basis, LatticeVector};

#[derive(Debug, Error)]
pub enum FanError {
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("no maximal cone contains the primitive-collection sum (fan not complete?)")]
    NoContainingCone,
    #[error("{0:?} does not span a cone of the fan")]
    NotACone(Vec<usize>),
    #[error("ray {0} is not expressible from the given primitive relations")]
    UnderdeterminedRays(usize),
    #[error("inconsistent primitive relations: {0}")]
    InconsistentRelations(String),
    #[error("reconstructed fan fails validation: {0:?}")]
    ValidationFailed(ValidationReport),
    #[error("recomputed primitive collections differ from the presentation")]
    CollectionMismatch {
        expected: Vec<Vec<usize>>,
        got: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rays_primitive: bool,
    pub smooth: bool,
    pub complete: bool,
}

impl ValidationReport {
    pub fn all_true(&self) -> bool {
        self.rays_primitive && self.smooth && self.complete
    }
}

/// A simplicial fan given by its primitive ray generators and maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub name: String,
    rays: Vec<LatticeVector>,
    max_cones: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveCollection(pub Vec<usize>);

/// `sum_{i in lhs} x_i = sum_{(j, c) in rhs} c x_j` with the rhs rays
/// spanning a cone; empty rhs means the sum is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveRelation {
    pub lhs: PrimitiveCollection,
    pub rhs: Vec<(usize, i64)>,
}

impl Fan {
    pub fn new(
        name: impl Into<String>,
        rays: Vec<LatticeVector>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        let n = rays.len();
        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in &max_cones {
            if cone.len() != 4 {
                return Err(FanError::MalformedFan(format!(
                    "maximal cone {:?} does not have 4 rays",
                    cone
                )));
            }
            let mut c: [usize; 4] = [cone[0], cone[1], cone[2], cone[3]];
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(FanError::MalformedFan(format!(
                    "maximal cone {:?} has repeated rays",
                    cone
                )));
            }
            if c[3] >= n {
                return Err(FanError::MalformedFan(format!(
                    "maximal cone {:?} has an out-of-range ray index",
                    cone
                )));
            }
            cones.push(c);
        }
        cones.sort_unstable();
        cones.dedup();
        for (i, a) in rays.iter().enumerate() {
            for b in rays.iter().skip(i + 1) {
                if a == b {
                    return Err(FanError::MalformedFan(format!("duplicate ray {:?}", a)));
                }
            }
        }
        let mut used = vec![false; n];
        for c in &cones {
            for &i in c {
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(FanError::MalformedFan(format!("ray {} appears in no cone", i)));
        }
        Ok(Fan {
            name: name.into(),
            rays,
            max_cones: cones,
        })
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[[usize; 4]] {
        &self.max_cones
    }

    fn cone_rays(&self, cone: &[usize; 4]) -> [LatticeVector; 4] {
        [
            self.rays[cone[0]],
            self.rays[cone[1]],
            self.rays[cone[2]],
            self.rays[cone[3]],
        ]
    }

    pub fn validate(&self) -> ValidationReport {
        let rays_primitive = self.rays.iter().all(|r| r.is_primitive());
        let smooth = self
            .max_cones
            .iter()
            .all(|c| is_unimodular_basis(&self.cone_rays(c)));
        ValidationReport {
            rays_primitive,
            smooth,
            complete: self.is_complete(),
        }
    }

    /// Boundary-less criterion: every 3-face lies in exactly two maximal
    /// cones and the dual adjacency graph is connected.
    fn is_complete(&self) -> bool {
        if self.max_cones.is_empty() {
            return false;
        }
        let mut face_count: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..4 {
                let mut face = [0usize; 3];
                let mut k = 0;
                for (j, &r) in cone.iter().enumerate() {
                    if j != skip {
                        face[k] = r;
                        k += 1;
                    }
                }
                face_count.entry(face).or_default().push(ci);
            }
        }
        if face_count.values().any(|v| v.len() != 2) {
            return false;
        }
        // Dual graph connectivity.
        let mut seen = vec![false; self.max_cones.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for neighbors in face_count.values() {
                if neighbors.contains(&c) {
                    for &o in neighbors {
                        if !seen[o] {
                            seen[o] = true;
                            stack.push(o);
                        }
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// True iff `indices` spans a cone, i.e. is a subset of a maximal cone.
    pub fn cone_exists(&self, indices: &[usize]) -> bool {
        if indices.iter().any(|&i| i >= self.rays.len()) {
            return false;
        }
        if indices.is_empty() {
            return true;
        }
        self.max_cones
            .iter()
            .any(|c| indices.iter().all(|i| c.contains(i)))
    }

    /// All minimal non-faces, each sorted, in lexicographic order.
    pub fn primitive_collections(&self) -> Vec<PrimitiveCollection> {
        let n = self.rays.len();
        let mut out = Vec::new();
        for size in 2..=5usize.min(n) {
            for subset in (0..n).combinations(size) {
                if self.cone_exists(&subset) {
                    continue;
                }
                let minimal = subset
                    .iter()
                    .combinations(size - 1)
                    .all(|sub| self.cone_exists(&sub.into_iter().copied().collect::<Vec<_>>()));
                if minimal {
                    out.push(PrimitiveCollection(subset));
                }
            }
        }
        out.sort();
        out
    }

    /// Write the collection's ray sum in the unique cone containing it.
    pub fn primitive_relation(
        &self,
        pc: &PrimitiveCollection,
    ) -> Result<PrimitiveRelation, FanError> {
        let sum = pc
            .0
            .iter()
            .fold(LatticeVector::ZERO, |acc, &i| acc + self.rays[i]);
        if sum.is_zero() {
            return Ok(PrimitiveRelation {
                lhs: pc.clone(),
                rhs: Vec::new(),
            });
        }
        for cone in &self.max_cones {
            let basis = self.cone_rays(cone);
            let coeffs = express_in_basis(&sum, &basis).expect("smooth cone");
            if coeffs.iter().all(|&c| c >= 0) {
                let rhs: Vec<(usize, i64)> = cone
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| *c > 0)
                    .map(|(&i, c)| (i, c))
                    .sorted()
                    .collect();
                return Ok(PrimitiveRelation {
                    lhs: pc.clone(),
                    rhs,
                });
            }
        }
        Err(FanError::NoContainingCone)
    }

    pub fn primitive_relations(&self) -> Result<Vec<PrimitiveRelation>, FanError> {
        self.primitive_collections()
            .iter()
            .map(|pc| self.primitive_relation(pc))
            .collect()
    }

    /// Star subdivision along a 2-cone: blow-up of the corresponding
    /// codimension-2 invariant subvariety.
    pub fn star_subdivision(&self, cone2: (usize, usize)) -> Result<Fan, FanError> {
        let (i, j) = cone2;
        if i == j || !self.cone_exists(&[i, j]) {
            return Err(FanError::NotACone(vec![i, j]));
        }
        let new_ray = self.rays[i] + self.rays[j];
        let new_idx = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(new_ray);
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for cone in &self.max_cones {
            if cone.contains(&i) && cone.contains(&j) {
                for &drop in &[i, j] {
                    let mut c: Vec<usize> =
                        cone.iter().copied().filter(|&r| r != drop).collect();
                    c.push(new_idx);
                    cones.push(c);
                }
            } else {
                cones.push(cone.to_vec());
            }
        }
        Fan::new(format!("{}*({},{})", self.name, i, j), rays, cones)
    }

    /// If the fan splits as (fan of P^1) x Sigma', the pair of opposite ray
    /// indices realizing the P^1 factor, together with the quotient 3-cones.
    pub fn detect_p1_factor(&self) -> Option<P1Factor> {
        self.p1_factors().into_iter().next()
    }

    /// All pairs of opposite rays realizing a P^1 product factor (a fan can
    /// have several, e.g. products of P^1's).
    pub fn p1_factors(&self) -> Vec<P1Factor> {
        let n = self.rays.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.rays[i] != -self.rays[j] {
                    continue;
                }
                if let Some(f) = self.check_p1_pair(i, j) {
                    out.push(f);
                }
            }
        }
        out
    }

    fn check_p1_pair(&self, i: usize, j: usize) -> Option<P1Factor> {
        // Every maximal cone must contain exactly one of {i, j}.
        for cone in &self.max_cones {
            let has_i = cone.contains(&i);
            let has_j = cone.contains(&j);
            if has_i == has_j {
                return None;
            }
        }
        // A genuine product needs the remaining rays inside a common rank-3
        // complement of the fiber line; opposite rays whose complement rays
        // still span all of N_Q give only a fibration, not a factor.
        let others: Vec<Vec<crate::ratlin::Rat>> = (0..self.rays.len())
            .filter(|&r| r != i && r != j)
            .map(|r| self.rays[r].0.iter().map(|&c| crate::ratlin::rat(c)).collect())
            .collect();
        if crate::ratlin::rank(&others) != 3 {
            return None;
        }
        let side = |of: usize| -> BTreeSet<Vec<usize>> {
            self.max_cones
                .iter()
                .filter(|c| c.contains(&of))
                .map(|c| c.iter().copied().filter(|&r| r != of).collect())
                .collect()
        };
        let base = side(i);
        if base != side(j) {
            return None;
        }
        // Project to N / Z x_i using the dual coordinates of a maximal cone
        // containing x_i, and check the base 3-sets form a smooth complete
        // fan there.
        let sigma = self.max_cones.iter().find(|c| c.contains(&i))?;
        let basis = self.cone_rays(sigma);
        let duals = dual_basis(&basis).ok()?;
        let pos = sigma.iter().position(|&r| r == i)?;
        let project = |v: &LatticeVector| -> [i64; 3] {
            let mut out = [0i64; 3];
            let mut k = 0;
            for (d, dv) in duals.iter().enumerate() {
                if d != pos {
                    out[k] = dv.pair(v);
                    k += 1;
                }
            }
            // Remove the x_i component entirely: subtract <m_pos, v> x_i and
            // take the remaining dual coordinates. Because the other duals
            // vanish on x_i, dropping coordinate `pos` is exactly that.
            out
        };
        let mut proj: BTreeMap<usize, [i64; 3]> = BTreeMap::new();
        for cone in &base {
            for &r in cone {
                proj.entry(r).or_insert_with(|| project(&self.rays[r]));
            }
        }
        // Distinct nonzero primitive images.
        let mut seen: BTreeSet<[i64; 3]> = BTreeSet::new();
        for v in proj.values() {
            if *v == [0, 0, 0] || !seen.insert(*v) {
                return None;
            }
            let g = v.iter().fold(0i64, |g, &c| num_integer::gcd(g, c.abs()));
            if g != 1 {
                return None;
            }
        }
        // Smoothness of the quotient cones.
        let det3 = |a: [i64; 3], b: [i64; 3], c: [i64; 3]| -> i64 {
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        for cone in &base {
            let [a, b, c] = [proj[&cone[0]], proj[&cone[1]], proj[&cone[2]]];
            if det3(a, b, c).abs() != 1 {
                return None;
            }
        }
        // Completeness of the quotient fan.
        let mut edge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &base {
            for skip in 0..3 {
                let face: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &r)| r)
                    .collect();
                *edge_count.entry(face).or_insert(0) += 1;
            }
        }
        if edge_count.values().any(|&c| c != 2) {
            return None;
        }
        Some(P1Factor {
            fibers: (i, j),
            base_cones: base.into_iter().collect(),
        })
    }
}

/// Witness that the fan splits off a P^1 factor with fiber divisors
/// `fibers.0` and `fibers.1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P1Factor {
    pub fibers: (usize, usize),
    pub base_cones: Vec<Vec<usize>>,
}

/// A symbolic primitive relation: `sum_{i in lhs} x_i = sum c_j x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicRelation {
    pub lhs: Vec<usize>,
    pub rhs: Vec<(usize, i64)>,
}

/// Reconstruct a fan from a primitive-relation presentation: the four
/// `basis` rays are assigned the standard basis, the remaining rays are
/// solved from the relations by back-substitution, and the maximal cones are
/// the collection-free 4-subsets.
pub fn fan_from_primitive_data(
    name: impl Into<String>,
    n: usize,
    basis: [usize; 4],
    relations: &[SymbolicRelation],
) -> Result<Fan, FanError> {
    let name = name.into();
    let mut rays: Vec<Option<LatticeVector>> = vec![None; n];
    for (k, &b) in basis.iter().enumerate() {
        rays[b] = Some(LatticeVector::basis(k));
    }
    for _ in 0..=n {
        let mut progress = false;
        for rel in relations {
            // sum_lhs x_i - sum_rhs c_j x_j = 0
            let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
            for &i in &rel.lhs {
                *terms.entry(i).or_insert(0) += 1;
            }
            for &(j, c) in &rel.rhs {
                *terms.entry(j).or_insert(0) -= c;
            }
            let unknowns: Vec<usize> = terms
                .iter()
                .filter(|(i, c)| rays[**i].is_none() && **c != 0)
                .map(|(&i, _)| i)
                .collect();
            match unknowns.len() {
                0 => {
                    let total = terms.iter().fold(LatticeVector::ZERO, |acc, (&i, &c)| {
                        acc + rays[i].unwrap().scale(c)
                    });
                    if !total.is_zero() {
                        return Err(FanError::InconsistentRelations(format!(
                            "relation {:?} does not close",
                            rel
                        )));
                    }
                }
                1 => {
                    let u = unknowns[0];
                    let cu = terms[&u];
                    let rest = terms
                        .iter()
                        .filter(|(&i, _)| i != u)
                        .fold(LatticeVector::ZERO, |acc, (&i, &c)| {
                            acc + rays[i].unwrap().scale(c)
                        });
                    if rest.0.iter().any(|&c| c % cu != 0) {
                        return Err(FanError::InconsistentRelations(format!(
                            "ray {} would be non-integral",
                            u
                        )));
                    }
                    rays[u] = Some(LatticeVector([
                        -rest.0[0] / cu,
                        -rest.0[1] / cu,
                        -rest.0[2] / cu,
                        -rest.0[3] / cu,
                    ]));
                    progress = true;
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    if let Some(u) = rays.iter().position(|r| r.is_none()) {
        return Err(FanError::UnderdeterminedRays(u));
    }
    let rays: Vec<LatticeVector> = rays.into_iter().map(|r| r.unwrap()).collect();
    let lhs_sets: BTreeSet<Vec<usize>> = relations
        .iter()
        .map(|r| r.lhs.iter().copied().sorted().collect())
        .collect();
    let cones: Vec<Vec<usize>> = (0..n)
        .combinations(4)
        .filter(|cone| {
            !lhs_sets
                .iter()
                .any(|lhs| lhs.iter().all(|i| cone.contains(i)))
        })
        .collect();
    let fan = Fan::new(name, rays, cones)?;
    let report = fan.validate();
    if !report.all_true() {
        return Err(FanError::ValidationFailed(report));
    }
    let got: Vec<Vec<usize>> = fan
        .primitive_collections()
        .into_iter()
        .map(|pc| pc.0)
        .collect();
    let expected: Vec<Vec<usize>> = lhs_sets.iter().cloned().sorted().collect();
    if got.iter().cloned().sorted().collect::<Vec<_>>() != expected {
        return Err(FanError::CollectionMismatch { expected, got });
    }
    // Cross-check every relation numerically against the reconstruction.
    for rel in relations {
        let lhs_sum = rel
            .lhs
            .iter()
            .fold(LatticeVector::ZERO, |acc, &i| acc + fan.rays[i]);
        let rhs_sum = rel
            .rhs
            .iter()
            .fold(LatticeVector::ZERO, |acc, &(j, c)| acc + fan.rays[j].scale(c));
        if lhs_sum != rhs_sum {
            return Err(FanError::InconsistentRelations(format!(
                "relation {:?} fails on the reconstructed rays",
                rel
            )));
        }
    }
    Ok(fan)
}

/// The fan of P^4 (used pervasively in tests and as a catalog entry).
pub fn p4_fan() -> Fan {
    let mut rays: Vec<LatticeVector> = (0..4).map(LatticeVector::basis).collect();
    rays.push(LatticeVector([-1, -1, -1, -1]));
    let cones = (0..5).combinations(4).collect();
    Fan::new("P4", rays, cones).unwrap()
}
