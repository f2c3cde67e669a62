//! Ergodic actions of D_K: the α and β families as induced module
//! algebras, ergodicity certificates with the invariant state, the
//! isomorphism test for induced actions, and the census.

use std::fmt;

use rayon::prelude::*;

use crate::corep::{hom_space, irreducible_reps, m2_action, multiplicities, subgroup_shape, induce, ModuleAlgebra};
use crate::cyclo::CycNum;
use crate::error::{QgwError, Result};
use crate::groups::{dihedral_order, make_group, subgroup_conjugacy_classes, FiniteGroup, GroupKind};
use crate::hopf::{gram_matrix, DEFAULT_PRECISION};
use crate::linalg::{hermitian_ldl, nullspace, rank_of, Accumulator, SparseVec};
use crate::polysolve::{solve, Outcome, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum ActionLabel {
    /// Induced from the trivial action of C_k.
    Alpha { k: usize },
    /// β^(k)_{l/2}: induced from D_k acting on M₂ at parameter l (on ℂ when
    /// l = 0). `alt` marks the dihedral subgroup ⟨r^{K/k}, rs⟩, which is not
    /// conjugate to ⟨r^{K/k}, s⟩ when K/k is even.
    Beta { k: usize, l: usize, alt: bool },
}

impl ActionLabel {
    pub fn k(&self) -> usize {
        match *self {
            ActionLabel::Alpha { k } | ActionLabel::Beta { k, .. } => k,
        }
    }

    pub fn is_alt(&self) -> bool {
        matches!(self, ActionLabel::Beta { alt: true, .. })
    }

    /// dim α^(k) = 2K/k, dim β^(k)_0 = K/k, dim β^(k)_{l/2} = 4K/k.
    pub fn dimension(&self, big_k: usize) -> usize {
        match *self {
            ActionLabel::Alpha { k } => 2 * big_k / k,
            ActionLabel::Beta { k, l: 0, .. } => big_k / k,
            ActionLabel::Beta { k, .. } => 4 * big_k / k,
        }
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ActionLabel::Alpha { k } => write!(f, "alpha({})", k),
            ActionLabel::Beta { k, l, alt } => {
                let p = if l == 0 { "0".to_string() } else if l % 2 == 0 { format!("{}", l / 2) } else { format!("{}/2", l) };
                write!(f, "beta({},{}){}", k, p, if alt { "'" } else { "" })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub subgroup: Vec<usize>,
    pub inducing: ModuleAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicActionData {
    pub big_k: usize,
    pub label: ActionLabel,
    pub provenance: Option<Provenance>,
    pub action: ModuleAlgebra,
    pub state: Vec<CycNum>,
    pub mult: Vec<usize>,
}

impl ErgodicActionData {
    pub fn dim(&self) -> usize {
        self.action.dim()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErgodicCertificate {
    pub fixed_dim: usize,
    pub ergodic: bool,
    /// The unique invariant state, when ergodic.
    pub state: Option<Vec<CycNum>>,
    pub state_positive: bool,
    pub state_faithful: bool,
}

pub fn is_ergodic(a: &ModuleAlgebra) -> ErgodicCertificate {
    let fixed_dim = a.fixed_space().len();
    let mut cert =
        ErgodicCertificate { fixed_dim, ergodic: fixed_dim == 1, state: None, state_positive: false, state_faithful: false };
    if !cert.ergodic {
        return cert;
    }
    let n = a.dim();
    let order = a.algebra.order;
    let mut rows = Vec::new();
    for &g in &a.rep.group.generators(&a.rep.domain) {
        // φ(α_g e_k) - φ(e_k) = 0
        let m = a.rep.matrix(g);
        for (k, col) in m.iter().enumerate() {
            let row = col.sub(&SparseVec::unit(k, order));
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    let sols = nullspace(rows, n, order);
    if sols.len() != 1 {
        return cert;
    }
    let phi = sols[0].to_dense(n, order);
    let Some(at_one) = a.algebra.unit.dot_dense(&phi) else { return cert };
    let Ok(inv) = at_one.inv() else { return cert };
    let phi: Vec<CycNum> = phi.iter().map(|x| x * &inv).collect();
    let ldl = hermitian_ldl(&gram_matrix(&a.algebra, &phi), DEFAULT_PRECISION);
    cert.state_positive = ldl.semidefinite;
    cert.state_faithful = ldl.definite;
    cert.state = Some(phi);
    cert
}

/// ⟨r^{K/k}⟩, or ⟨r^{K/k}, r^b s⟩.
pub fn standard_subgroup(g: &FiniteGroup, big_k: usize, k: usize, reflection: Option<usize>) -> Vec<usize> {
    let step = big_k / k;
    let mut gens = vec![g.dihedral(step as i64, 0)];
    if let Some(b) = reflection {
        gens.push(g.dihedral(b as i64, 1));
    }
    g.closure(&gens)
}

fn build(big_k: usize, label: ActionLabel, sub: Vec<usize>, inducing: ModuleAlgebra) -> Result<ErgodicActionData> {
    let g = make_group(GroupKind::Dihedral(big_k));
    let order = dihedral_order(big_k);
    let action = induce(&g, &sub, &inducing)?;
    let cert = is_ergodic(&action);
    let state = cert.state.ok_or_else(|| QgwError::BadParams(format!("{} is not ergodic", label)))?;
    let mult = multiplicities(&action.rep, &irreducible_reps(&g, order)?);
    Ok(ErgodicActionData { big_k, label, provenance: Some(Provenance { subgroup: sub, inducing }), action, state, mult })
}

pub fn alpha_action(big_k: usize, k: usize) -> Result<ErgodicActionData> {
    if k == 0 || big_k == 0 || !big_k.is_multiple_of(k) {
        return Err(QgwError::BadDivisor { k, n: big_k });
    }
    let g = make_group(GroupKind::Dihedral(big_k));
    let sub = standard_subgroup(&g, big_k, k, None);
    let inducing = ModuleAlgebra::scalars(&g, &sub, dihedral_order(big_k));
    build(big_k, ActionLabel::Alpha { k }, sub, inducing)
}

pub fn beta_action(big_k: usize, k: usize, l: usize) -> Result<ErgodicActionData> {
    beta_action_on(big_k, k, l, false)
}

/// β^(k)_{l/2} induced from ⟨r^{K/k}, rs⟩ (requires K/k even).
pub fn beta_action_alt(big_k: usize, k: usize, l: usize) -> Result<ErgodicActionData> {
    beta_action_on(big_k, k, l, true)
}

fn beta_action_on(big_k: usize, k: usize, l: usize, alt: bool) -> Result<ErgodicActionData> {
    if k == 0 || big_k == 0 || !big_k.is_multiple_of(k) {
        return Err(QgwError::BadDivisor { k, n: big_k });
    }
    if l > k / 2 {
        return Err(QgwError::BadParams(format!("l = {} exceeds floor(k/2) = {}", l, k / 2)));
    }
    if alt && (big_k / k) % 2 == 1 {
        return Err(QgwError::BadParams(format!("K/k = {} is odd: a single class of D_{}", big_k / k, k)));
    }
    let g = make_group(GroupKind::Dihedral(big_k));
    let order = dihedral_order(big_k);
    let sub = standard_subgroup(&g, big_k, k, Some(alt as usize));
    let inducing = if l == 0 { ModuleAlgebra::scalars(&g, &sub, order) } else { m2_action(&g, &sub, l, order)? };
    build(big_k, ActionLabel::Beta { k, l, alt }, sub, inducing)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// g with g⁻¹ L₁ g = L₂ and an equivariant algebra isomorphism of the
    /// inducing algebras (columns are images of basis elements).
    Iso { g: usize, map: Vec<SparseVec>, star_preserving: bool },
    NotIso(String),
    Undecided,
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso { .. })
    }
}

pub(crate) enum IsoSearch {
    Found(Vec<SparseVec>),
    Absent,
    Undecided,
}

/// Equivariant unital multiplicative bijections between two module algebras
/// over the same subgroup: a linear equivariance system, then the
/// multiplicativity constraints as quadrics in its coordinates.
pub(crate) fn equivariant_iso(a: &ModuleAlgebra, b: &ModuleAlgebra) -> IsoSearch {
    let (d1, d2) = (a.dim(), b.dim());
    if d1 != d2 {
        return IsoSearch::Absent;
    }
    let order = a.algebra.order;
    let basis = hom_space(&a.rep, &b.rep);
    let r = basis.len();
    if r == 0 {
        return IsoSearch::Absent;
    }
    // coordinate i of φ(e_j) is Σ_s basis[s][i·d1 + j] t_s
    let mut image: Vec<Vec<Poly>> = vec![vec![Poly::default(); d2]; d1];
    for (s, v) in basis.iter().enumerate() {
        for (idx, c) in v.iter() {
            image[idx % d1][idx / d1].add_term(vec![s], c.clone());
        }
    }
    let apply = |x: &SparseVec| -> Vec<Poly> {
        let mut out = vec![Poly::default(); d2];
        for (j, c) in x.iter() {
            for i in 0..d2 {
                if !image[*j][i].is_zero() {
                    out[i] = out[i].add(&image[*j][i].scale(c));
                }
            }
        }
        out
    };
    let minus_one = CycNum::from_int(order, -1);
    let mut polys = Vec::new();
    let unit_img = apply(&a.algebra.unit);
    for i in 0..d2 {
        let want = b.algebra.unit.get(i).cloned().unwrap_or_else(|| CycNum::zero(order));
        polys.push(unit_img[i].add(&Poly::constant(-&want)));
    }
    for p in 0..d1 {
        for q in 0..d1 {
            let mut diff = apply(&a.algebra.mult[p][q]);
            for s in 0..d2 {
                for t in 0..d2 {
                    let prod = &b.algebra.mult[s][t];
                    if prod.is_empty() || image[p][s].is_zero() || image[q][t].is_zero() {
                        continue;
                    }
                    let st = image[p][s].mul(&image[q][t]).scale(&minus_one);
                    for (i, c) in prod.iter() {
                        diff[*i] = diff[*i].add(&st.scale(c));
                    }
                }
            }
            polys.extend(diff);
        }
    }
    let to_map = |t: &[CycNum]| -> Vec<SparseVec> {
        let mut cols: Vec<Accumulator> = (0..d1).map(|_| Accumulator::new(order)).collect();
        for (s, v) in basis.iter().enumerate() {
            for (idx, c) in v.iter() {
                cols[idx % d1].add(idx / d1, &(c * &t[s]));
            }
        }
        cols.into_iter().map(|a| a.finish()).collect()
    };
    match solve(r, polys, order, &|t| rank_of(&to_map(t)) == d1) {
        Outcome::Solution(t) => IsoSearch::Found(to_map(&t)),
        Outcome::NoSolution => IsoSearch::Absent,
        Outcome::Undecided => IsoSearch::Undecided,
    }
}

pub fn are_isomorphic(a: &ErgodicActionData, b: &ErgodicActionData) -> Result<IsoVerdict> {
    let (Some(pa), Some(pb)) = (&a.provenance, &b.provenance) else {
        return Err(QgwError::NeedsProvenance("isomorphism test needs inducing data".into()));
    };
    if a.big_k != b.big_k {
        return Ok(IsoVerdict::NotIso("different groups".into()));
    }
    if a.dim() != b.dim() {
        return Ok(IsoVerdict::NotIso(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    if a.mult != b.mult {
        return Ok(IsoVerdict::NotIso("multiplicity vectors differ".into()));
    }
    let g = &a.action.rep.group;
    let conjugators: Vec<usize> =
        (0..g.order()).filter(|&x| g.conjugate_subgroup(&pa.subgroup, x) == pb.subgroup).collect();
    if conjugators.is_empty() {
        return Ok(IsoVerdict::NotIso("inducing subgroups are not conjugate".into()));
    }
    let mut undecided = false;
    for x in conjugators {
        // B's action pulled back to L₁: y ↦ β(x⁻¹ y x)
        let pulled = ModuleAlgebra { rep: pb.inducing.rep.conjugate(g.inv(x)), algebra: pb.inducing.algebra.clone() };
        let map = if pulled.rep.mats == pa.inducing.rep.mats && pulled.algebra == pa.inducing.algebra {
            (0..pa.inducing.dim()).map(|j| pa.inducing.algebra.basis(j)).collect()
        } else {
            match equivariant_iso(&pa.inducing, &pulled) {
                IsoSearch::Found(m) => m,
                IsoSearch::Undecided => {
                    undecided = true;
                    continue;
                }
                IsoSearch::Absent => continue,
            }
        };
        let alg = &pulled.algebra;
        let star_preserving = (0..map.len()).all(|j| {
            let mut acc = Accumulator::new(alg.order);
            for (i, c) in pa.inducing.algebra.star[j].iter() {
                acc.add_scaled(&map[*i], c);
            }
            alg.star_of(&map[j]) == acc.finish()
        });
        return Ok(IsoVerdict::Iso { g: x, map, star_preserving });
    }
    Ok(if undecided { IsoVerdict::Undecided } else { IsoVerdict::NotIso("no equivariant algebra isomorphism".into()) })
}

/// Labels with 0 ≤ l ≤ ⌊k/2⌋ for every k | K, α before β, by k then l.
pub fn standard_labels(big_k: usize) -> Vec<ActionLabel> {
    let divs: Vec<usize> = (1..=big_k).filter(|k| big_k.is_multiple_of(*k)).collect();
    let mut out: Vec<ActionLabel> = divs.iter().map(|&k| ActionLabel::Alpha { k }).collect();
    for &k in &divs {
        out.extend((0..=k / 2).map(|l| ActionLabel::Beta { k, l, alt: false }));
    }
    out
}

/// One label per conjugacy class of (subgroup, inducing datum): α for cyclic
/// classes, β_0 and the M₂ actions for dihedral classes.
pub fn raw_labels(big_k: usize) -> Vec<ActionLabel> {
    let g = make_group(GroupKind::Dihedral(big_k));
    let mut out = Vec::new();
    for (sub, _) in subgroup_conjugacy_classes(&g) {
        let shape = subgroup_shape(&g, &sub).expect("dihedral subgroup");
        let k = shape.k();
        match shape.reflection {
            None => out.push(ActionLabel::Alpha { k }),
            Some(b) => out.extend((0..=k / 2).map(|l| ActionLabel::Beta { k, l, alt: b % 2 == 1 })),
        }
    }
    out.sort();
    out
}

pub fn action_for(big_k: usize, label: ActionLabel) -> Result<ErgodicActionData> {
    match label {
        ActionLabel::Alpha { k } => alpha_action(big_k, k),
        ActionLabel::Beta { k, l, alt } => beta_action_on(big_k, k, l, alt),
    }
}

#[derive(Clone, Debug)]
pub struct Census {
    pub big_k: usize,
    pub labelled: Vec<ErgodicActionData>,
    /// Raw classes, after merging any isomorphic pairs.
    pub raw: Vec<ErgodicActionData>,
    /// Pairs merged in the raw census.
    pub merged: Vec<(ActionLabel, ActionLabel)>,
    pub undecided: Vec<(ActionLabel, ActionLabel)>,
    pub discrepancies: Vec<String>,
}

pub fn classify_ergodic(big_k: usize) -> Result<Census> {
    if big_k == 0 {
        return Err(QgwError::BadParams("K must be positive".into()));
    }
    let raw_all: Vec<ErgodicActionData> =
        raw_labels(big_k).into_par_iter().map(|l| action_for(big_k, l)).collect::<Result<_>>()?;
    let mut raw: Vec<ErgodicActionData> = Vec::new();
    let mut merged = Vec::new();
    let mut undecided = Vec::new();
    for a in raw_all {
        let mut dup = false;
        for b in &raw {
            match are_isomorphic(&a, b)? {
                IsoVerdict::Iso { .. } => {
                    merged.push((a.label, b.label));
                    dup = true;
                    break;
                }
                IsoVerdict::Undecided => undecided.push((a.label, b.label)),
                IsoVerdict::NotIso(_) => {}
            }
        }
        if !dup {
            raw.push(a);
        }
    }
    let labelled: Vec<ErgodicActionData> = raw.iter().filter(|a| !a.label.is_alt()).cloned().collect();
    let mut discrepancies = Vec::new();
    let expected = standard_labels(big_k);
    if labelled.len() != expected.len() {
        discrepancies.push(format!("{} labelled classes found, {} expected", labelled.len(), expected.len()));
    }
    for a in raw.iter().filter(|a| a.label.is_alt()) {
        discrepancies.push(format!(
            "{} is induced from a dihedral subgroup not conjugate to the standard one and carries no label of its own",
            a.label
        ));
    }
    Ok(Census { big_k, labelled, raw, merged, undecided, discrepancies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_bookkeeping() {
        for big_k in [1, 2, 4, 6] {
            for label in raw_labels(big_k) {
                let a = action_for(big_k, label).unwrap();
                assert_eq!(a.dim(), label.dimension(big_k), "{}", label);
                let cert = is_ergodic(&a.action);
                assert!(cert.ergodic && cert.state_positive && cert.state_faithful);
                assert!(a.action.validate().is_none());
            }
        }
    }

    #[test]
    fn examples() {
        let a = alpha_action(4, 4).unwrap();
        assert_eq!(a.dim(), 2);
        let g = &a.action.rep.group;
        assert!(a.action.rep.matrix(g.dihedral(1, 0)).iter().enumerate().all(|(j, c)| *c == SparseVec::unit(j, 4)));
        assert_eq!(alpha_action(4, 1).unwrap().mult, vec![1, 1, 1, 1, 2]);
        assert_eq!(alpha_action(6, 2).unwrap().dim(), 6);
        assert_eq!(beta_action(4, 4, 0).unwrap().dim(), 1);
        assert_eq!(beta_action(4, 2, 1).unwrap().dim(), 8);
        assert_eq!(beta_action(6, 3, 1).unwrap().dim(), 8);
        assert!(matches!(alpha_action(6, 4), Err(QgwError::BadDivisor { .. })));
        assert!(matches!(beta_action(6, 3, 2), Err(QgwError::BadParams(_))));
        assert!(beta_action_alt(6, 2, 0).is_err());
        assert_eq!(beta_action_alt(6, 3, 0).unwrap().dim(), 2);
    }

    #[test]
    fn two_fold_trivial_action_not_ergodic() {
        let g = make_group(GroupKind::Dihedral(2));
        let all: Vec<usize> = (0..4).collect();
        let one = ModuleAlgebra::scalars(&g, &all, 4);
        let e: Vec<usize> = vec![g.identity];
        let two = induce(&g, &e, &ModuleAlgebra::scalars(&g, &e, 4)).unwrap();
        assert!(is_ergodic(&one).ergodic);
        assert_eq!(is_ergodic(&two).fixed_dim, 1);
        let sum = ModuleAlgebra {
            rep: crate::corep::Rep::from_fn(&g, &all, 2, 4, "2triv", |_| vec![SparseVec::unit(0, 4), SparseVec::unit(1, 4)]),
            algebra: crate::algebra::Algebra::multimatrix(&crate::algebra::BlockLayout::new(vec![1, 1]), 4),
        };
        let cert = is_ergodic(&sum);
        assert!(!cert.ergodic);
        assert_eq!(cert.fixed_dim, 2);
    }

    #[test]
    fn isomorphism_examples() {
        let a = beta_action(4, 2, 1).unwrap();
        match are_isomorphic(&a, &a).unwrap() {
            IsoVerdict::Iso { g, map, .. } => {
                assert_eq!(g, 0);
                assert!(map.iter().enumerate().all(|(j, c)| *c == SparseVec::unit(j, 4)));
            }
            v => panic!("{:?}", v),
        }
        let b = beta_action(4, 2, 0).unwrap();
        let b_alt = beta_action_alt(4, 2, 0).unwrap();
        assert!(!are_isomorphic(&b, &b_alt).unwrap().is_iso());
        let x = alpha_action(6, 2).unwrap();
        let y = beta_action(6, 2, 1).unwrap();
        assert!(matches!(are_isomorphic(&x, &y).unwrap(), IsoVerdict::NotIso(_)));
        let mut bare = x.clone();
        bare.provenance = None;
        assert!(are_isomorphic(&bare, &x).is_err());
    }

    #[test]
    fn conjugate_choices_are_isomorphic() {
        // ⟨r², r²s⟩ is conjugate to ⟨r², s⟩ in D_4; the solver must find it.
        let a = beta_action(4, 2, 1).unwrap();
        let g = make_group(GroupKind::Dihedral(4));
        let sub = standard_subgroup(&g, 4, 2, Some(2));
        let inducing = m2_action(&g, &sub, 1, 4).unwrap();
        let other = build(4, ActionLabel::Beta { k: 2, l: 1, alt: false }, sub, inducing).unwrap();
        assert!(are_isomorphic(&a, &other).unwrap().is_iso());
    }

    #[test]
    fn census_counts() {
        for big_k in [1, 2, 3, 4, 6, 8] {
            let c = classify_ergodic(big_k).unwrap();
            assert!(c.merged.is_empty() && c.undecided.is_empty(), "K={}", big_k);
            assert_eq!(c.labelled.len(), standard_labels(big_k).len());
            let alts = c.raw.iter().filter(|a| a.label.is_alt()).count();
            assert_eq!(c.raw.len(), c.labelled.len() + alts);
            if big_k % 2 == 1 {
                assert_eq!(alts, 0);
            }
        }
        // K = 6: Σ_{k|6} (2 + ⌊k/2⌋) = 2 + 3 + 3 + 5
        assert_eq!(standard_labels(6).len(), 13);
    }
}
