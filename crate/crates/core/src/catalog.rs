//! Built-in fans: products of projective spaces, the hexagonal del Pezzo
//! surface, the F_a-bundle family over P^2, the explicit I/L/M families, and
//! the fans given only by primitive-relation presentations (G1, L5, L12, J2,
//! M5). Every constructor validates smoothness, completeness, and the
//! expected primitive-collection list.

use itertools::Itertools;

use crate::fan::{fan_from_primitive_data, Fan, FanError, SymbolicRelation};
use crate::lattice::LatticeVector;

/// A complete simplicial fan in dimension < 4, used only as a product
/// factor.
#[derive(Debug, Clone)]
pub struct FactorFan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FactorFan {
    pub fn product(&self, other: &FactorFan) -> FactorFan {
        let dim = self.dim + other.dim;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(dim, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0i64; self.dim];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let off = self.rays.len();
        let mut cones = Vec::new();
        for ca in &self.cones {
            for cb in &other.cones {
                let mut c = ca.clone();
                c.extend(cb.iter().map(|&i| i + off));
                cones.push(c);
            }
        }
        FactorFan { dim, rays, cones }
    }

    pub fn into_fan(self, name: impl Into<String>) -> Result<Fan, FanError> {
        assert_eq!(self.dim, 4, "product must have total dimension 4");
        let rays = self
            .rays
            .into_iter()
            .map(|r| LatticeVector([r[0], r[1], r[2], r[3]]))
            .collect();
        let fan = Fan::new(name, rays, self.cones)?;
        let report = fan.validate();
        if !report.all_true() {
            return Err(FanError::ValidationFailed(report));
        }
        Ok(fan)
    }
}

/// The fan of P^d: standard basis rays plus their negated sum, maximal cones
/// all d-subsets.
pub fn projective_space(d: usize) -> FactorFan {
    let mut rays: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; d]);
    let cones = (0..=d).combinations(d).collect();
    FactorFan { dim: d, rays, cones }
}

/// The hexagonal del Pezzo surface (P^2 blown up in the three torus-fixed
/// points): six rays in cyclic order, cones the adjacent pairs.
pub fn hexagon_del_pezzo() -> FactorFan {
    let rays = vec![
        vec![1, 0],
        vec![1, 1],
        vec![0, 1],
        vec![-1, 0],
        vec![-1, -1],
        vec![0, -1],
    ];
    let cones = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    FactorFan { dim: 2, rays, cones }
}

/// Maximal cones as the 4-subsets containing no listed collection, then the
/// usual validation plus a check that the fan's minimal non-faces are
/// exactly the listed collections.
fn fan_from_rays_and_collections(
    name: impl Into<String>,
    rays: Vec<LatticeVector>,
    collections: &[Vec<usize>],
) -> Result<Fan, FanError> {
    let n = rays.len();
    let cones: Vec<Vec<usize>> = (0..n)
        .combinations(4)
        .filter(|cone| {
            !collections
                .iter()
                .any(|pc| pc.iter().all(|i| cone.contains(i)))
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
    let expected: Vec<Vec<usize>> = collections
        .iter()
        .map(|pc| pc.iter().copied().sorted().collect())
        .sorted()
        .collect();
    if got != expected {
        return Err(FanError::CollectionMismatch { expected, got });
    }
    Ok(fan)
}

/// An F_a-bundle over P^2 twisted by (s, t): seven rays with
/// x3 = (-1,-1,s,t) and x5 = (0,0,-1,a); primitive collections
/// {x1,x2,x3}, {x4,x5}, {x6,x7}.
pub fn build_fa_bundle(a: i64, s: i64, t: i64) -> Result<Fan, FanError> {
    let rays = vec![
        LatticeVector([1, 0, 0, 0]),
        LatticeVector([0, 1, 0, 0]),
        LatticeVector([-1, -1, s, t]),
        LatticeVector([0, 0, 1, 0]),
        LatticeVector([0, 0, -1, a]),
        LatticeVector([0, 0, 0, 1]),
        LatticeVector([0, 0, 0, -1]),
    ];
    fan_from_rays_and_collections(
        format!("Fa(a={},s={},t={})", a, s, t),
        rays,
        &[vec![0, 1, 2], vec![3, 4], vec![5, 6]],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    I,
    L,
    M,
}

/// The explicit eight-ray families. `params` is (a, b, c) for I and M, and
/// (a, b, c, d) for L (pass d = 0 for I/M's unused slot is not accepted:
/// the L family takes four parameters, the others three).
pub fn build_family(family: Family, params: &[i64]) -> Result<Fan, FanError> {
    match family {
        Family::I => {
            let [a, b, c] = params else {
                return Err(FanError::MalformedFan(
                    "family I takes parameters (a, b, c)".into(),
                ));
            };
            let rays = vec![
                LatticeVector([1, 0, 0, 0]),
                LatticeVector([-1, *b, 0, *c]),
                LatticeVector([0, 1, 0, 0]),
                LatticeVector([0, 0, 1, 0]),
                LatticeVector([0, -1, -1, a + 1]),
                LatticeVector([0, 0, 0, -1]),
                LatticeVector([0, 1, 0, -1]),
                LatticeVector([0, 0, 0, 1]),
            ];
            fan_from_rays_and_collections(
                format!("I(a={},b={},c={})", a, b, c),
                rays,
                &[
                    vec![2, 3, 4],
                    vec![3, 4, 6],
                    vec![6, 7],
                    vec![2, 5],
                    vec![5, 7],
                    vec![0, 1],
                ],
            )
        }
        Family::L => {
            let [a, b, c, d] = params else {
                return Err(FanError::MalformedFan(
                    "family L takes parameters (a, b, c, d)".into(),
                ));
            };
            let rays = vec![
                LatticeVector([0, 1, 0, 0]),
                LatticeVector([-1, 1, 0, 0]),
                LatticeVector([1, 0, 0, 0]),
                LatticeVector([0, 0, 1, 0]),
                LatticeVector([*a, *b, -1, 0]),
                LatticeVector([0, 0, 0, 1]),
                LatticeVector([*c, *d, 0, -1]),
                LatticeVector([0, -1, 0, 0]),
            ];
            fan_from_rays_and_collections(
                format!("L(a={},b={},c={},d={})", a, b, c, d),
                rays,
                &[vec![0, 7], vec![1, 2], vec![3, 4], vec![5, 6]],
            )
        }
        Family::M => {
            let [a, b, c] = params else {
                return Err(FanError::MalformedFan(
                    "family M takes parameters (a, b, c)".into(),
                ));
            };
            let rays = vec![
                LatticeVector([1, 0, 0, 0]),
                LatticeVector([0, 1, 0, 0]),
                LatticeVector([-1, -1, 1, 1]),
                LatticeVector([0, 0, 1, 0]),
                LatticeVector([*a, 0, -1, 0]),
                LatticeVector([0, 0, 0, 1]),
                LatticeVector([a * c + b, 0, -c, -1]),
                LatticeVector([-1, 0, 0, 0]),
            ];
            fan_from_rays_and_collections(
                format!("M(a={},b={},c={})", a, b, c),
                rays,
                &[
                    vec![0, 7],
                    vec![0, 1, 2],
                    vec![3, 5, 7],
                    vec![3, 4],
                    vec![5, 6],
                    vec![1, 2, 4],
                    vec![1, 2, 6],
                ],
            )
        }
    }
}

fn rel(lhs: &[usize], rhs: &[(usize, i64)]) -> SymbolicRelation {
    SymbolicRelation {
        lhs: lhs.to_vec(),
        rhs: rhs.to_vec(),
    }
}

/// Seven rays, one positive parameter; primitive relations
/// x1+x7 = 0, x2+x3+x4 = a x1, x4+x5+x6 = (a+1) x1,
/// x5+x6+x7 = x2+x3, x1+x2+x3 = x5+x6.
pub fn build_g1(a: i64) -> Result<Fan, FanError> {
    fan_from_primitive_data(
        format!("G1(a={})", a),
        7,
        [0, 1, 3, 4],
        &[
            rel(&[0, 6], &[]),
            rel(&[1, 2, 3], &[(0, a)]),
            rel(&[3, 4, 5], &[(0, a + 1)]),
            rel(&[4, 5, 6], &[(1, 1), (2, 1)]),
            rel(&[0, 1, 2], &[(4, 1), (5, 1)]),
        ],
    )
}

/// Eight rays, one positive parameter; primitive relations
/// x1+x8 = 0, x2+x3 = 0, x4+x5 = a x3, x6+x7 = a x3.
pub fn build_l5(a: i64) -> Result<Fan, FanError> {
    fan_from_primitive_data(
        format!("L5(a={})", a),
        8,
        [0, 1, 3, 5],
        &[
            rel(&[0, 7], &[]),
            rel(&[1, 2], &[]),
            rel(&[3, 4], &[(2, a)]),
            rel(&[5, 6], &[(2, a)]),
        ],
    )
}

/// Primitive relations x1+x8 = 0, x2+x3 = x1, x4+x5 = x8, x6+x7 = x4.
pub fn build_l12() -> Result<Fan, FanError> {
    fan_from_primitive_data(
        "L12",
        8,
        [0, 1, 3, 5],
        &[
            rel(&[0, 7], &[]),
            rel(&[1, 2], &[(0, 1)]),
            rel(&[3, 4], &[(7, 1)]),
            rel(&[5, 6], &[(3, 1)]),
        ],
    )
}

/// Primitive relations x3+x6 = x7, x1+x2+x8 = x4+x5, x4+x5+x6 = x1+x2,
/// x7+x8 = x3, x6+x8 = 0, x3+x4+x5 = x8, x4+x5+x7 = 0, x1+x2+x3 = 0,
/// x1+x2+x7 = x6.
pub fn build_j2() -> Result<Fan, FanError> {
    fan_from_primitive_data(
        "J2",
        8,
        [0, 1, 3, 4],
        &[
            rel(&[2, 5], &[(6, 1)]),
            rel(&[0, 1, 7], &[(3, 1), (4, 1)]),
            rel(&[3, 4, 5], &[(0, 1), (1, 1)]),
            rel(&[6, 7], &[(2, 1)]),
            rel(&[5, 7], &[]),
            rel(&[2, 3, 4], &[(7, 1)]),
            rel(&[3, 4, 6], &[]),
            rel(&[0, 1, 2], &[]),
            rel(&[0, 1, 6], &[(5, 1)]),
        ],
    )
}

/// Primitive relations x1+x8 = x5, x4+x5 = x7, x6+x7 = x1, x1+x2+x3 = x6,
/// x2+x3+x5 = x6+x8, x2+x3+x7 = 0, x4+x6+x8 = 0.
pub fn build_m5() -> Result<Fan, FanError> {
    fan_from_primitive_data(
        "M5",
        8,
        [0, 1, 3, 5],
        &[
            rel(&[0, 7], &[(4, 1)]),
            rel(&[3, 4], &[(6, 1)]),
            rel(&[5, 6], &[(0, 1)]),
            rel(&[0, 1, 2], &[(5, 1)]),
            rel(&[1, 2, 4], &[(5, 1), (7, 1)]),
            rel(&[1, 2, 6], &[]),
            rel(&[3, 5, 7], &[]),
        ],
    )
}

/// The blow-up of P^4 at a torus-fixed point: the star subdivision of the
/// cone spanned by the four standard basis rays at their sum.
pub fn build_blowup_p4_point() -> Result<Fan, FanError> {
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
    let fan = Fan::new("BlowupP4Point", rays, cones)?;
    let report = fan.validate();
    if !report.all_true() {
        return Err(FanError::ValidationFailed(report));
    }
    Ok(fan)
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Unique within a catalog; used as the stable sort key in reports.
    pub type_label: String,
    pub fan: Fan,
    /// Preferred monomial basis of the codimension-2 Chow group, when a
    /// specific presentation is wanted for certificates (0-based pairs).
    pub basis_hint: Option<Vec<(usize, usize)>>,
    /// Human note on where the fan comes from (builtin family, product,
    /// or user file).
    pub provenance: String,
}

impl CatalogEntry {
    fn builtin(label: &str, fan: Fan, provenance: &str) -> CatalogEntry {
        CatalogEntry {
            type_label: label.to_string(),
            fan,
            basis_hint: None,
            provenance: provenance.to_string(),
        }
    }
}

/// The nine F_a-bundle parameter triples (a, s, t) with their type labels.
pub const D_TYPE_PARAMS: [(&str, i64, i64, i64); 9] = [
    ("D1", 1, 0, 2),
    ("D2", 1, 2, 0),
    ("D3", 1, 1, 1),
    ("D5", 0, 2, 0),
    ("D6", 1, 0, 1),
    ("D8", 1, 1, 0),
    ("D9", 0, 1, 1),
    ("D12", 0, 1, 0),
    ("D16", 1, 1, -1),
];

/// Every fan specified explicitly by coordinates, parameters, or primitive
/// relations, plus the standard products used as known-positive controls.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let p1 = projective_space(1);
    let p2 = projective_space(2);
    let p3 = projective_space(3);
    let s6 = hexagon_del_pezzo();
    let mut entries = vec![
        CatalogEntry::builtin("P4", projective_space(4).into_fan("P4").unwrap(), "product"),
        CatalogEntry::builtin("P1xP3", p1.product(&p3).into_fan("P1xP3").unwrap(), "product"),
        CatalogEntry::builtin("P2xP2", p2.product(&p2).into_fan("P2xP2").unwrap(), "product"),
        CatalogEntry::builtin(
            "P2xP1xP1",
            p2.product(&p1.product(&p1)).into_fan("P2xP1xP1").unwrap(),
            "product",
        ),
        CatalogEntry::builtin(
            "P1xP1xP1xP1",
            p1.product(&p1)
                .product(&p1.product(&p1))
                .into_fan("P1xP1xP1xP1")
                .unwrap(),
            "product",
        ),
        CatalogEntry::builtin("P2xS6", p2.product(&s6).into_fan("P2xS6").unwrap(), "product"),
        CatalogEntry::builtin(
            "BlowupP4Point",
            build_blowup_p4_point().unwrap(),
            "point blow-up",
        ),
    ];
    for a in 1..=3 {
        entries.push(CatalogEntry::builtin(
            &format!("G1(a={})", a),
            build_g1(a).unwrap(),
            "G1 family",
        ));
        entries.push(CatalogEntry::builtin(
            &format!("L5(a={})", a),
            build_l5(a).unwrap(),
            "L5 family",
        ));
    }
    for (label, a, s, t) in D_TYPE_PARAMS {
        entries.push(CatalogEntry::builtin(
            label,
            build_fa_bundle(a, s, t).unwrap(),
            "Fa bundle",
        ));
    }
    for (label, params) in [
        ("I4", [1i64, 1, -1]),
        ("I6", [0, 1, 0]),
        ("I12", [0, 0, -1]),
        ("I15", [1, 0, -1]),
    ] {
        entries.push(CatalogEntry::builtin(
            label,
            build_family(Family::I, &params).unwrap(),
            "I family",
        ));
    }
    entries.push(CatalogEntry::builtin("J2", build_j2().unwrap(), "presentation"));
    for (label, params) in [
        ("L1", [0i64, 1, 0, 1]),
        ("L2", [1, 0, 1, 0]),
        ("L10", [1, 0, -1, 1]),
    ] {
        entries.push(CatalogEntry::builtin(
            label,
            build_family(Family::L, &params).unwrap(),
            "L family",
        ));
    }
    let mut l12 = CatalogEntry::builtin("L12", build_l12().unwrap(), "presentation");
    l12.basis_hint = Some(vec![(2, 4), (2, 6), (2, 7), (4, 6), (4, 7), (6, 7)]);
    entries.push(l12);
    for (label, params) in [
        ("M1", [0i64, 0, 0]),
        ("M2", [1, 1, 0]),
        ("M3", [1, 0, 1]),
        ("M4", [1, 0, 0]),
    ] {
        entries.push(CatalogEntry::builtin(
            label,
            build_family(Family::M, &params).unwrap(),
            "M family",
        ));
    }
    entries.push(CatalogEntry::builtin("M5", build_m5().unwrap(), "presentation"));
    entries
}
