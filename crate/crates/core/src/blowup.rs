//! Blow-ups along invariant codimension-2 subvarieties (star subdivisions
//! of 2-cones), their detection between catalog fans, and the propagation
//! of non-existence verdicts: composing with the blow-down keeps a totally
//! nondegenerate finite morphism totally nondegenerate, so NoFiniteMorphism
//! on the blown-down fan is inherited by every iterated 2-blow-up. The
//! analogous statement for embeddings is an open conjecture, so NoEmbedding
//! verdicts are deliberately not propagated.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::Fan;
use crate::obstruction::VerdictStatus;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlowupError {
    #[error("blow-up edge set contains a cycle through fan {0}")]
    CycleDetected(usize),
    #[error("edge ({0}, {1}) references a fan outside the catalog")]
    EdgeOutOfRange(usize, usize),
}

/// Witness that `fine` is the star subdivision of `coarse` at `center`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blowup2 {
    /// 2-cone of the coarse fan (coarse ray indices, sorted).
    pub center: (usize, usize),
    /// `correspondence[c]` = index in the fine fan of coarse ray `c`.
    pub correspondence: Vec<usize>,
    /// Index in the fine fan of the exceptional ray (the center's sum).
    pub exceptional: usize,
}

/// Is `fine` the 2-blow-up of `coarse`, up to ray reindexing? Rays are
/// matched by coordinates, not permuted by lattice automorphisms: catalog
/// entries are expected in compatible coordinates.
pub fn is_2blowup(fine: &Fan, coarse: &Fan) -> Option<Blowup2> {
    let n = coarse.ray_count();
    if fine.ray_count() != n + 1 {
        return None;
    }
    let mut correspondence = Vec::with_capacity(n);
    for ray in coarse.rays() {
        let idx = fine.rays().iter().position(|r| r == ray)?;
        correspondence.push(idx);
    }
    let exceptional = (0..=n).find(|i| !correspondence.contains(i))?;
    let new_ray = *fine.ray(exceptional);
    for i in 0..n {
        for j in (i + 1)..n {
            if *coarse.ray(i) + *coarse.ray(j) != new_ray || !coarse.cone_exists(&[i, j]) {
                continue;
            }
            let Ok(subdivided) = coarse.star_subdivision((i, j)) else {
                continue;
            };
            // Map the subdivision's cones into fine indices (its new ray
            // sits at index n) and compare cone sets.
            let mut mapped: Vec<[usize; 4]> = subdivided
                .max_cones()
                .iter()
                .map(|c| {
                    let mut m = c.map(|r| if r == n { exceptional } else { correspondence[r] });
                    m.sort_unstable();
                    m
                })
                .collect();
            mapped.sort_unstable();
            if mapped == fine.max_cones() {
                return Some(Blowup2 {
                    center: (i, j),
                    correspondence,
                    exceptional,
                });
            }
        }
    }
    None
}

/// A detected relation: catalog fan `fine` is the 2-blow-up of catalog fan
/// `coarse`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupEdge {
    pub fine: usize,
    pub coarse: usize,
    pub detection: Blowup2,
}

/// All 2-blow-up relations among the given fans, ordered by (fine, coarse).
pub fn blowup_edges(catalog: &[Fan]) -> Vec<BlowupEdge> {
    let mut edges = Vec::new();
    for (fi, fine) in catalog.iter().enumerate() {
        for (ci, coarse) in catalog.iter().enumerate() {
            if fi == ci {
                continue;
            }
            if let Some(detection) = is_2blowup(fine, coarse) {
                edges.push(BlowupEdge {
                    fine: fi,
                    coarse: ci,
                    detection,
                });
            }
        }
    }
    edges
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "origin")]
pub enum VerdictOrigin {
    /// Certified directly on this fan.
    Seed,
    /// NoEmbedding certified directly, but embedding non-existence does not
    /// transfer along blow-ups (open conjecture), so blow-ups of this fan
    /// inherit nothing from it.
    SeedNonPropagable,
    /// Inherited along 2-blow-downs; `path` lists catalog indices from the
    /// immediate blow-down target to the seeding fan.
    Propagated { path: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagatedVerdict {
    pub status: VerdictStatus,
    pub origin: VerdictOrigin,
}

fn strength(s: VerdictStatus) -> u8 {
    match s {
        VerdictStatus::Inconclusive => 0,
        VerdictStatus::NoEmbedding => 1,
        VerdictStatus::NoFiniteMorphism => 2,
    }
}

/// Push NoFiniteMorphism verdicts from blown-down fans up to their iterated
/// 2-blow-ups. Monotone fixpoint; NoEmbedding seeds stay put and are tagged
/// [`VerdictOrigin::SeedNonPropagable`].
pub fn propagate(
    catalog_len: usize,
    edges: &[BlowupEdge],
    seeds: &[VerdictStatus],
) -> Result<Vec<PropagatedVerdict>, BlowupError> {
    assert_eq!(seeds.len(), catalog_len);
    for e in edges {
        if e.fine >= catalog_len || e.coarse >= catalog_len {
            return Err(BlowupError::EdgeOutOfRange(e.fine, e.coarse));
        }
    }
    detect_cycle(catalog_len, edges)?;

    let mut out: Vec<PropagatedVerdict> = seeds
        .iter()
        .map(|&status| PropagatedVerdict {
            status,
            origin: if status == VerdictStatus::NoEmbedding {
                VerdictOrigin::SeedNonPropagable
            } else {
                VerdictOrigin::Seed
            },
        })
        .collect();

    // Fixpoint in at most catalog_len rounds: each round extends the longest
    // inherited chain by one.
    for _ in 0..catalog_len {
        let mut changed = false;
        for e in edges {
            let coarse = &out[e.coarse];
            if coarse.status != VerdictStatus::NoFiniteMorphism {
                continue;
            }
            if strength(out[e.fine].status) >= strength(VerdictStatus::NoFiniteMorphism) {
                continue;
            }
            let mut path = vec![e.coarse];
            if let VerdictOrigin::Propagated { path: rest } = &coarse.origin {
                path.extend(rest.iter().copied());
            }
            out[e.fine] = PropagatedVerdict {
                status: VerdictStatus::NoFiniteMorphism,
                origin: VerdictOrigin::Propagated { path },
            };
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(out)
}

/// Reject edge sets with directed cycles (impossible for genuine blow-up
/// detections since the fine fan always has one more ray, but user-supplied
/// edge data must be checked).
fn detect_cycle(n: usize, edges: &[BlowupEdge]) -> Result<(), BlowupError> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        adj[e.fine].push(e.coarse);
    }
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let u = adj[v][*next];
                *next += 1;
                match color[u] {
                    0 => {
                        color[u] = 1;
                        stack.push((u, 0));
                    }
                    1 => return Err(BlowupError::CycleDetected(u)),
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::p4_fan;

    #[test]
    fn star_subdivision_round_trip() {
        let p4 = p4_fan();
        let fine = p4.star_subdivision((0, 1)).unwrap();
        let det = is_2blowup(&fine, &p4).unwrap();
        assert_eq!(det.center, (0, 1));
        assert_eq!(det.exceptional, 5);
        assert_eq!(det.correspondence, vec![0, 1, 2, 3, 4]);
        assert!(is_2blowup(&p4, &p4).is_none());
        assert!(is_2blowup(&p4, &fine).is_none());
    }

    #[test]
    fn edges_and_propagation_chain() {
        let f0 = p4_fan();
        let f1 = f0.star_subdivision((0, 1)).unwrap();
        let f2 = f1.star_subdivision((2, 3)).unwrap();
        let catalog = vec![f0, f1, f2];
        let edges = blowup_edges(&catalog);
        assert_eq!(edges.len(), 2);
        let seeds = vec![
            VerdictStatus::NoFiniteMorphism,
            VerdictStatus::Inconclusive,
            VerdictStatus::Inconclusive,
        ];
        let out = propagate(3, &edges, &seeds).unwrap();
        assert_eq!(out[1].status, VerdictStatus::NoFiniteMorphism);
        assert_eq!(out[2].status, VerdictStatus::NoFiniteMorphism);
        assert_eq!(
            out[2].origin,
            VerdictOrigin::Propagated { path: vec![1, 0] }
        );
    }

    #[test]
    fn no_embedding_seed_does_not_propagate() {
        let f0 = p4_fan();
        let f1 = f0.star_subdivision((0, 1)).unwrap();
        let catalog = vec![f0, f1];
        let edges = blowup_edges(&catalog);
        assert_eq!(edges.len(), 1);
        let seeds = vec![VerdictStatus::NoEmbedding, VerdictStatus::Inconclusive];
        let out = propagate(2, &edges, &seeds).unwrap();
        assert_eq!(out[0].origin, VerdictOrigin::SeedNonPropagable);
        assert_eq!(out[1].status, VerdictStatus::Inconclusive);
        assert_eq!(out[1].origin, VerdictOrigin::Seed);
    }

    #[test]
    fn cycle_is_rejected() {
        let fake = Blowup2 {
            center: (0, 1),
            correspondence: vec![],
            exceptional: 0,
        };
        let edges = vec![
            BlowupEdge {
                fine: 0,
                coarse: 1,
                detection: fake.clone(),
            },
            BlowupEdge {
                fine: 1,
                coarse: 0,
                detection: fake,
            },
        ];
        let seeds = vec![VerdictStatus::Inconclusive; 2];
        assert_eq!(
            propagate(2, &edges, &seeds),
            Err(BlowupError::CycleDetected(0))
        );
    }
}
