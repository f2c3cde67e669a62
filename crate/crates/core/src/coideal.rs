//! Right coideal *-subalgebras C ⊆ H with Δ(C) ⊆ C⊗H: the quotient-type
//! coideals A_π, tame coideals from idempotent states, the embeddable
//! classification for D_K and (D_K)₋₁, and an exhaustive small-dimension
//! search used as an oracle.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::corep::{comodule_to_module, transport_unchecked, Comodule, ComoduleAlgebra, Irreps, ModuleAlgebra, Rep};
use crate::cyclo::{rat, CycNum};
use crate::ergodic::{action_for, equivariant_iso, raw_labels, ActionLabel, ErgodicActionData, IsoSearch};
use crate::error::{QgwError, Result};
use crate::groups::{
    dihedral_order, function_algebra, group_algebra, klein_subgroup, make_group, subgroups, FiniteGroup, GroupKind,
    HopfQuotient,
};
use crate::hopf::{
    convolve, gram_matrix, min_eigenvalue_f64, tensor2_from_pairs, Functional, HopfAlgebraData, DEFAULT_PRECISION,
};
use crate::linalg::{hermitian_ldl, inverse, nullspace, rank_of, Accumulator, Echelon, Mat, SparseVec};
use crate::twist::{dihedral_minus_one_full, Cocycle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CoidealCertificates {
    pub unital: bool,
    pub star_closed: bool,
    pub product_closed: bool,
    pub coideal: bool,
}

impl CoidealCertificates {
    pub fn all(&self) -> bool {
        self.unital && self.star_closed && self.product_closed && self.coideal
    }
}

/// Invariants used to sort coideals (and ergodic actions) into classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Invariants {
    pub dim: usize,
    pub mult: Vec<usize>,
    pub commutative: bool,
    pub center_dim: usize,
    /// Trace of each group element on the center; for an ergodic action the
    /// center is F(G/L) and this is the permutation character of G/L. Empty
    /// when no group action is attached.
    pub center_character: Vec<String>,
}

pub fn center_character(m: &ModuleAlgebra) -> Vec<String> {
    let g = &m.rep.group;
    let center = m.algebra.center_basis();
    let ech = Echelon::from_rows(center.iter().cloned());
    let basis = ech.rref();
    let pivots: Vec<usize> = basis.iter().map(|b| b.entries[0].0).collect();
    (0..g.order())
        .map(|x| {
            // coordinate i of x▷b_i is its value at pivot i
            let mut tr = CycNum::zero(m.algebra.order);
            for (b, p) in basis.iter().zip(&pivots) {
                if let Some(c) = m.rep.apply(x, b).get(*p) {
                    tr += c;
                }
            }
            tr.to_string()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoidealSubalgebra {
    pub parent: u64,
    /// Reduced row echelon basis, ordered by pivot.
    pub basis: Vec<SparseVec>,
    pub certificates: CoidealCertificates,
    /// Multiplicities of the supplied irreducibles in C as a right comodule;
    /// empty when C is not a coideal or no irreducibles were given.
    pub mult: Vec<usize>,
    pub commutative: bool,
    pub center_dim: usize,
}

impl CoidealSubalgebra {
    /// Canonicalize the span of `vectors` and certify it inside `h`.
    pub fn from_span<I: IntoIterator<Item = SparseVec>>(h: &HopfAlgebraData, vectors: I, irreps: &Irreps) -> Self {
        let basis = Echelon::from_rows(vectors).rref();
        let mut c = CoidealSubalgebra {
            parent: h.fingerprint(),
            basis,
            certificates: CoidealCertificates::default(),
            mult: Vec::new(),
            commutative: false,
            center_dim: 0,
        };
        c.certificates = c.recertify(h);
        if c.certificates.coideal && !irreps.is_empty() {
            if let Some(m) = c.comodule(h) {
                // a failed pairing leaves mult empty, which no census entry matches
                c.mult = irreps.decompose(h, &m).unwrap_or_default();
            }
        }
        if c.certificates.unital && c.certificates.product_closed {
            if let Some(alg) = c.as_algebra(h) {
                c.commutative = alg.is_commutative();
                c.center_dim = alg.center_dim();
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_valid(&self) -> bool {
        self.certificates.all()
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            dim: self.dim(),
            mult: self.mult.clone(),
            commutative: self.commutative,
            center_dim: self.center_dim,
            center_character: Vec::new(),
        }
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.entries[0].0).collect()
    }

    /// Coordinates of `v` in the canonical basis, or None if v ∉ C.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<CycNum>> {
        let order = self.basis.first().map(|b| b.entries[0].1.order())?;
        let coords: Vec<CycNum> =
            self.pivots().iter().map(|p| v.get(*p).cloned().unwrap_or_else(|| CycNum::zero(order))).collect();
        let mut acc = Accumulator::new(order);
        for (b, c) in self.basis.iter().zip(&coords) {
            acc.add_scaled(b, c);
        }
        (acc.finish() == *v).then_some(coords)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        if v.is_zero() {
            return true;
        }
        self.coords(v).is_some()
    }

    /// Right legs of Δ(v) grouped: q ↦ Σ_p c e_p for the terms e_p⊗e_q.
    fn left_legs(h: &HopfAlgebraData, v: &SparseVec) -> BTreeMap<usize, SparseVec> {
        let mut by_right: BTreeMap<usize, Accumulator> = BTreeMap::new();
        for (p, q, c) in h.comult_of(v) {
            by_right.entry(q).or_insert_with(|| Accumulator::new(h.order())).add(p, &c);
        }
        by_right.into_iter().map(|(q, a)| (q, a.finish())).collect()
    }

    /// Independent exact re-computation of the four certificates.
    pub fn recertify(&self, h: &HopfAlgebraData) -> CoidealCertificates {
        if self.basis.is_empty() {
            return CoidealCertificates::default();
        }
        let unital = self.contains(&h.one());
        let star_closed = self.basis.iter().all(|b| self.contains(&h.star_of(b)));
        let n = self.basis.len();
        let product_closed = (0..n)
            .into_par_iter()
            .all(|i| (0..n).all(|j| self.contains(&h.mul(&self.basis[i], &self.basis[j]))));
        let coideal =
            self.basis.par_iter().all(|b| Self::left_legs(h, b).values().all(|l| self.contains(l)));
        CoidealCertificates { unital, star_closed, product_closed, coideal }
    }

    /// C as a right comodule: Δ(b_j) = Σ_i b_i ⊗ u_ij.
    pub fn comodule(&self, h: &HopfAlgebraData) -> Option<Comodule> {
        let n = self.dim();
        let order = h.order();
        let mut u: Vec<Vec<Accumulator>> = (0..n).map(|_| (0..n).map(|_| Accumulator::new(order)).collect()).collect();
        for (j, b) in self.basis.iter().enumerate() {
            for (q, leg) in Self::left_legs(h, b) {
                let coords = self.coords(&leg)?;
                for (i, c) in coords.iter().enumerate() {
                    u[i][j].add(q, c);
                }
            }
        }
        let u: Vec<Vec<SparseVec>> = u.into_iter().map(|row| row.into_iter().map(|a| a.finish()).collect()).collect();
        // the echelon basis is not orthonormal, so unitarity is left unchecked
        Some(Comodule { parent: h.fingerprint(), dim: n, u, unitary: false, label: "coideal".into() })
    }

    /// Structure constants of C in its canonical basis.
    pub fn as_algebra(&self, h: &HopfAlgebraData) -> Option<Algebra> {
        let n = self.dim();
        let order = h.order();
        let to_vec = |v: &SparseVec| -> Option<SparseVec> {
            Some(SparseVec::from_pairs(self.coords(v)?.into_iter().enumerate()))
        };
        let mut mult = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                mult[i][j] = to_vec(&h.mul(&self.basis[i], &self.basis[j]))?;
            }
        }
        let unit = to_vec(&h.one())?;
        // an algebra without a star-closed basis keeps the identity placeholder
        let star = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| to_vec(&h.star_of(b)).unwrap_or_else(|| SparseVec::unit(i, order)))
            .collect();
        Some(Algebra { dim: n, order, mult, unit, star })
    }

    pub fn comodule_algebra(&self, h: &HopfAlgebraData) -> Option<ComoduleAlgebra> {
        Some(ComoduleAlgebra { algebra: self.as_algebra(h)?, comodule: self.comodule(h)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameProvenance {
    pub quotient: String,
    /// Ω as indices into the target group Γ.
    pub omega: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentState {
    pub parent: u64,
    pub phi: Functional,
    pub provenance: Option<TameProvenance>,
}

/// A_π = {x ∈ H : (π⊗id)Δ(x) = 1⊗x}.
pub fn quotient_coideal(pi: &HopfQuotient, irreps: &Irreps) -> CoidealSubalgebra {
    let h = &pi.source;
    let n = h.dim();
    let order = h.order();
    let one_t = pi.target.one();
    let mut rows: BTreeMap<(usize, usize), Accumulator> = BTreeMap::new();
    for j in 0..n {
        for (p, q, c) in &h.comult[j] {
            for (t, u) in pi.map[*p].iter() {
                rows.entry((*t, *q)).or_insert_with(|| Accumulator::new(order)).add(j, &(c * u));
            }
        }
        for (t, u) in one_t.iter() {
            rows.entry((*t, j)).or_insert_with(|| Accumulator::new(order)).add(j, &-u);
        }
    }
    let basis = nullspace(rows.into_values().map(|a| a.finish()), n, order);
    CoidealSubalgebra::from_span(h, basis, irreps)
}

/// φ = 1_Ω∘π and C = Im (φ⊗id)Δ.
pub fn tame_coideal(
    pi: &HopfQuotient,
    name: &str,
    omega: &[usize],
    irreps: &Irreps,
) -> Result<(IdempotentState, CoidealSubalgebra)> {
    let state = tame_state(pi, name, omega)?;
    let c = coideal_of_state(&pi.source, &state.phi, irreps);
    Ok((state, c))
}

/// The idempotent state 1_Ω∘π, checked for idempotency and positivity.
pub fn tame_state(pi: &HopfQuotient, name: &str, omega: &[usize]) -> Result<IdempotentState> {
    let Some(gamma) = &pi.target_group else {
        return Err(QgwError::BadKind("tame coideals need a quotient onto a group algebra".into()));
    };
    if !gamma.is_subgroup(omega) {
        return Err(QgwError::NotSubgroup(format!("{:?} in Γ", omega)));
    }
    let h = &pi.source;
    let order = h.order();
    let coeffs: Vec<CycNum> = pi
        .map
        .iter()
        .map(|img| {
            let mut acc = CycNum::zero(order);
            for (gm, c) in img.iter() {
                if omega.contains(gm) {
                    acc += c;
                }
            }
            acc
        })
        .collect();
    let phi = Functional::new(h, coeffs);
    check_idempotent_state(h, &phi)?;
    Ok(IdempotentState {
        parent: h.fingerprint(),
        phi,
        provenance: Some(TameProvenance { quotient: name.to_string(), omega: omega.to_vec() }),
    })
}

pub fn check_idempotent_state(h: &HopfAlgebraData, phi: &Functional) -> Result<()> {
    if convolve(h, phi, phi)? != *phi {
        return Err(QgwError::NotAState("not idempotent under convolution".into()));
    }
    if phi.eval(&h.one()) != CycNum::one(h.order()) {
        return Err(QgwError::NotAState("φ(1) != 1".into()));
    }
    let gram = gram_matrix(&h.algebra, &phi.coeffs);
    if !hermitian_ldl(&gram, DEFAULT_PRECISION).semidefinite {
        return Err(QgwError::NotAState(format!("Gram eigenvalue {:.6e}", min_eigenvalue_f64(&gram))));
    }
    Ok(())
}

/// Im (φ⊗id)Δ.
pub fn coideal_of_state(h: &HopfAlgebraData, phi: &Functional, irreps: &Irreps) -> CoidealSubalgebra {
    let image: Vec<SparseVec> = (0..h.dim()).map(|j| apply_left(h, phi, &h.basis(j))).collect();
    CoidealSubalgebra::from_span(h, image, irreps)
}

/// (φ⊗id)Δ(x).
pub fn apply_left(h: &HopfAlgebraData, phi: &Functional, x: &SparseVec) -> SparseVec {
    let mut acc = Accumulator::new(h.order());
    for (p, q, c) in h.comult_of(x) {
        let v = &phi.coeffs[p];
        if !v.is_zero() {
            acc.add(q, &(&c * v));
        }
    }
    acc.finish()
}

fn apply_map(map: &[SparseVec], v: &SparseVec, order: u32) -> SparseVec {
    let mut acc = Accumulator::new(order);
    for (i, c) in v.iter() {
        acc.add_scaled(&map[*i], c);
    }
    acc.finish()
}

/// The quotient structure on span(π(section)) pushed forward from `h`,
/// then certified; fails unless ker π is a Hopf *-ideal.
fn pushforward(
    h: &HopfAlgebraData,
    map: Vec<SparseVec>,
    section: &[SparseVec],
    labels: Vec<String>,
) -> Result<HopfQuotient> {
    let order = h.order();
    let pi = |v: &SparseVec| apply_map(&map, v, order);
    let m = section.len();
    let mult = section.iter().map(|a| section.iter().map(|b| pi(&h.mul(a, b))).collect()).collect();
    let algebra = Algebra {
        dim: m,
        order,
        mult,
        unit: pi(&h.one()),
        star: section.iter().map(|a| pi(&h.star_of(a))).collect(),
    };
    let comult = section
        .iter()
        .map(|a| {
            tensor2_from_pairs(h.comult_of(a).into_iter().flat_map(|(p, q, c)| {
                let (x, y) = (map[p].clone(), map[q].clone());
                x.entries
                    .into_iter()
                    .flat_map(move |(i, u)| {
                        let c = &c * &u;
                        y.entries.clone().into_iter().map(move |(j, v)| ((i, j), &c * &v))
                    })
                    .collect::<Vec<_>>()
            }))
        })
        .collect();
    let counit = section.iter().map(|a| h.counit_of(a)).collect();
    let antipode = section.iter().map(|a| pi(&h.antipode_of(a))).collect();
    let target = HopfAlgebraData { labels, algebra, comult, counit, antipode };
    let q = HopfQuotient { source: h.clone(), target, map, target_group: None };
    q.certify()?;
    Ok(q)
}

/// Restriction of functions to a subgroup L, as a quotient of `h` (the
/// function algebra of `g`, possibly with a twisted product).
pub fn function_quotient(h: &HopfAlgebraData, g: &FiniteGroup, sub: &[usize]) -> Result<HopfQuotient> {
    if !g.is_subgroup(sub) {
        return Err(QgwError::NotSubgroup(format!("{:?}", sub)));
    }
    let order = h.order();
    let (lg, emb) = g.subgroup_group(sub);
    let map = (0..g.order())
        .map(|x| emb.iter().position(|&y| y == x).map(|p| SparseVec::unit(p, order)).unwrap_or_default())
        .collect();
    let section: Vec<SparseVec> = emb.iter().map(|&x| SparseVec::unit(x, order)).collect();
    pushforward(h, map, &section, lg.labels.iter().map(|l| format!("δ[{}]", l)).collect())
}

/// Characters of an abelian subgroup L: the dual group Γ and the values
/// χ_γ(sub[p]).
fn dual_group(g: &FiniteGroup, sub: &[usize], order: u32) -> Option<(FiniteGroup, Vec<Vec<CycNum>>)> {
    if sub.iter().any(|&a| sub.iter().any(|&b| g.mul(a, b) != g.mul(b, a))) {
        return None;
    }
    let m = sub.len();
    if let Some(&x) = sub.iter().find(|&&x| g.element_order(x) == m) {
        if !(order as usize).is_multiple_of(m) && m > 2 {
            return None;
        }
        let mut power = vec![0usize; g.order()];
        let mut y = g.identity;
        for t in 0..m {
            power[y] = t;
            y = g.mul(y, x);
        }
        let step = (order as usize / m.max(1)) as i64;
        let vals = (0..m)
            .map(|j| sub.iter().map(|&s| CycNum::root_of_unity(order, step * (j * power[s]) as i64)).collect())
            .collect();
        return Some((make_group(GroupKind::Cyclic(m)), vals));
    }
    if m == 4 {
        let others: Vec<usize> = sub.iter().copied().filter(|&x| x != g.identity).collect();
        let (a, b) = (others[0], others[1]);
        let coords = |s: usize| -> (usize, usize) {
            for x in 0..2 {
                for y in 0..2 {
                    let mut e = g.identity;
                    if x == 1 {
                        e = g.mul(e, a);
                    }
                    if y == 1 {
                        e = g.mul(e, b);
                    }
                    if e == s {
                        return (x, y);
                    }
                }
            }
            unreachable!("Klein subgroup")
        };
        let vals = (0..4)
            .map(|chi| {
                let (c, d) = (chi >> 1, chi & 1);
                sub.iter()
                    .map(|&s| {
                        let (x, y) = coords(s);
                        CycNum::from_int(order, if (c * x + d * y) % 2 == 1 { -1 } else { 1 })
                    })
                    .collect()
            })
            .collect();
        return Some((make_group(GroupKind::Klein), vals));
    }
    None
}

/// F(D_K)-type algebra → ℂL̂ for an abelian subgroup L, through the Fourier
/// identification δ_x ↦ |L|⁻¹ Σ_γ conj(χ_γ(x)) γ. Certified against `h`.
pub fn group_algebra_quotient(h: &HopfAlgebraData, g: &FiniteGroup, sub: &[usize]) -> Result<HopfQuotient> {
    let order = h.order();
    let mut sub = sub.to_vec();
    sub.sort_unstable();
    if !g.is_subgroup(&sub) {
        return Err(QgwError::NotSubgroup(format!("{:?}", sub)));
    }
    let (gamma, vals) =
        dual_group(g, &sub, order).ok_or_else(|| QgwError::BadKind("subgroup is not abelian of a supported shape".into()))?;
    let inv_m = rat(1, sub.len() as i64);
    let map = (0..g.order())
        .map(|x| match sub.iter().position(|&s| s == x) {
            Some(p) => SparseVec::from_pairs((0..gamma.order()).map(|gm| (gm, vals[gm][p].conj().scale(&inv_m)))),
            None => SparseVec::new(),
        })
        .collect();
    let target = group_algebra(&gamma, order);
    let q = HopfQuotient { source: h.clone(), target, map, target_group: Some(gamma) };
    q.certify()?;
    Ok(q)
}

fn subgroup_name(g: &FiniteGroup, sub: &[usize]) -> String {
    let gens = g.generators(sub);
    if gens.is_empty() {
        return "<1>".into();
    }
    format!("<{}>", gens.iter().map(|&x| g.labels[x].clone()).collect::<Vec<_>>().join(","))
}

/// Group-algebra quotients of `h` found by certifying the Fourier map for
/// every abelian subgroup.
pub fn group_algebra_quotients(h: &HopfAlgebraData, g: &FiniteGroup) -> Vec<(String, HopfQuotient)> {
    subgroups(g)
        .into_par_iter()
        .filter_map(|sub| group_algebra_quotient(h, g, &sub).ok().map(|q| (format!("C{}^", subgroup_name(g, &sub)), q)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateSource {
    Quotient { subgroup: String },
    Tame { quotient: String, omega: Vec<String> },
    /// Built from an equivariant *-homomorphism out of the named action;
    /// `case` records the block configuration used.
    Frobenius { action: ActionLabel, case: String },
}

impl std::fmt::Display for CandidateSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CandidateSource::Quotient { subgroup } => write!(f, "quotient F{}", subgroup),
            CandidateSource::Tame { quotient, omega } => write!(f, "tame {} Ω={{{}}}", quotient, omega.join(",")),
            CandidateSource::Frobenius { action, case } => write!(f, "frobenius {} {}", action, case),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchResult {
    Unique(ActionLabel),
    Ambiguous(Vec<ActionLabel>),
    Unmatched(String),
}

/// Matches coideals of F(D_K) or (D_K)₋₁ to ergodic actions of D_K by the
/// invariants of the λ⁻¹-transported comodule algebra.
pub struct LabelMatcher {
    pub big_k: usize,
    pub group: FiniteGroup,
    pub classical: HopfAlgebraData,
    /// The algebra the coideals live in.
    pub hopf: HopfAlgebraData,
    pub irreps: Irreps,
    pub actions: Vec<ErgodicActionData>,
    pub entries: Vec<(ActionLabel, Invariants)>,
    back: Option<Cocycle>,
    lam: Option<Cocycle>,
}

impl LabelMatcher {
    pub fn new(big_k: usize, twisted: bool) -> Result<LabelMatcher> {
        if big_k == 0 {
            return Err(QgwError::BadParams("K must be positive".into()));
        }
        let group = make_group(GroupKind::Dihedral(big_k));
        let order = dihedral_order(big_k);
        let classical = function_algebra(&group, order);
        let (hopf, lam) = if twisted {
            let t = dihedral_minus_one_full(big_k)?;
            (t.hopf, Some(t.cocycle))
        } else {
            (classical.clone(), None)
        };
        let back = lam.as_ref().map(|l| l.inverse_on(&hopf));
        let comodules = crate::corep::irreducible_reps(&group, order)?.iter().map(|r| Comodule::from_rep(&hopf, r)).collect();
        let irreps = Irreps::new(&hopf, comodules)?;
        let actions: Vec<ErgodicActionData> =
            raw_labels(big_k).into_par_iter().map(|l| action_for(big_k, l)).collect::<Result<_>>()?;
        let entries = actions
            .iter()
            .map(|a| {
                let inv = Invariants {
                    dim: a.dim(),
                    mult: a.mult.clone(),
                    commutative: a.action.algebra.is_commutative(),
                    center_dim: a.action.algebra.center_dim(),
                    center_character: center_character(&a.action),
                };
                (a.label, inv)
            })
            .collect();
        Ok(LabelMatcher { big_k, group, classical, hopf, irreps, actions, entries, back, lam })
    }

    pub fn twisted(&self) -> bool {
        self.lam.is_some()
    }

    pub fn cocycle(&self) -> Option<&Cocycle> {
        self.lam.as_ref()
    }

    /// The classical D_K-action realized by a coideal of `self.hopf`.
    pub fn classical_action(&self, c: &CoidealSubalgebra) -> Result<ModuleAlgebra> {
        let ca = c
            .comodule_algebra(&self.hopf)
            .ok_or_else(|| QgwError::TransportError("not a coideal subalgebra".into()))?;
        let ca = match &self.back {
            Some(lam) => transport_unchecked(&ca, lam, &self.classical),
            None => ca,
        };
        Ok(comodule_to_module(&self.group, &ca))
    }

    pub fn invariants_of(&self, c: &CoidealSubalgebra) -> Result<Invariants> {
        let m = self.classical_action(c)?;
        Ok(Invariants {
            dim: c.dim(),
            mult: c.mult.clone(),
            commutative: m.algebra.is_commutative(),
            center_dim: m.algebra.center_dim(),
            center_character: center_character(&m),
        })
    }

    pub fn identify(&self, c: &CoidealSubalgebra) -> MatchResult {
        let inv = match self.invariants_of(c) {
            Ok(i) => i,
            Err(e) => return MatchResult::Unmatched(e.to_string()),
        };
        let mut hits: Vec<ActionLabel> = self.entries.iter().filter(|(_, i)| *i == inv).map(|(l, _)| *l).collect();
        if hits.len() > 1 {
            // invariants tie: fall back to an explicit equivariant isomorphism
            if let Ok(m) = self.classical_action(c) {
                let decided: Vec<(ActionLabel, IsoSearch)> = hits
                    .par_iter()
                    .map(|l| {
                        let a = self.actions.iter().find(|a| a.label == *l).expect("census entry");
                        (*l, equivariant_iso(&m, &a.action))
                    })
                    .collect();
                hits = decided.into_iter().filter(|(_, r)| !matches!(r, IsoSearch::Absent)).map(|(l, _)| l).collect();
            }
        }
        match hits.len() {
            0 => MatchResult::Unmatched(format!("no ergodic action with invariants {:?}", inv)),
            1 => MatchResult::Unique(hits[0]),
            _ => MatchResult::Ambiguous(hits),
        }
    }

    /// Pairs of census entries that the invariant tuple fails to separate.
    pub fn invariant_collisions(&self) -> Vec<(ActionLabel, ActionLabel)> {
        let mut out = Vec::new();
        for (i, (a, x)) in self.entries.iter().enumerate() {
            for (b, y) in &self.entries[i + 1..] {
                if x == y {
                    out.push((*a, *b));
                }
            }
        }
        out
    }
}

/// _λF(V) with V acting by (v▷F)(y) = F(yv): the regular V-action on the
/// one-sided twisted function algebra, basis δ_v in the order of `v`.
fn twisted_klein_algebra(g: &FiniteGroup, v: &[usize], lam: &Cocycle, order: u32) -> ModuleAlgebra {
    let pos = |x: usize| v.iter().position(|&y| y == x).expect("element of V");
    let lam_at = |a: usize, b: usize| lam.eval(&SparseVec::unit(a, order), &SparseVec::unit(b, order), order);
    let mult = v
        .iter()
        .map(|&a| {
            v.iter()
                .map(|&b| {
                    SparseVec::from_pairs(v.iter().map(|&y| {
                        let yi = g.inv(y);
                        (pos(y), lam_at(g.mul(a, yi), g.mul(b, yi)))
                    }))
                })
                .collect()
        })
        .collect();
    let one = CycNum::one(order);
    let algebra = Algebra {
        dim: 4,
        order,
        mult,
        unit: SparseVec::from_pairs((0..4).map(|i| (i, one.clone()))),
        star: (0..4).map(|i| SparseVec::unit(i, order)).collect(),
    };
    let rep = Rep::from_fn(g, v, 4, order, "V-regular", |x| {
        v.iter().map(|&a| SparseVec::unit(pos(g.mul(a, g.inv(x))), order)).collect()
    });
    ModuleAlgebra { rep, algebra }
}

/// f_a(x) = Σ_(i,w) w·(x▷a)_i for each basis element a of the action.
fn frobenius_vectors(a: &ModuleAlgebra, weights: &[(usize, CycNum)]) -> Vec<SparseVec> {
    let g = &a.rep.group;
    (0..a.dim())
        .map(|j| {
            let mut acc = Accumulator::new(a.algebra.order);
            for x in 0..g.order() {
                let col = &a.rep.matrix(x)[j];
                for (i, w) in weights {
                    if let Some(c) = col.get(*i) {
                        acc.add(x, &(c * w));
                    }
                }
            }
            acc.finish()
        })
        .collect()
}

/// Weight data for equivariant unital homomorphisms out of an induced
/// action: into ℂ (classical), or into _λF(V) (twisted).
fn frobenius_weights(m: &LabelMatcher, a: &ErgodicActionData) -> Vec<(String, std::result::Result<Vec<(usize, CycNum)>, String>)> {
    let order = a.action.algebra.order;
    let one = CycNum::one(order);
    let Some(prov) = &a.provenance else { return vec![("no provenance".into(), Err("missing inducing data".into()))] };
    let d = prov.inducing.dim();
    let Some(lam) = m.cocycle() else {
        if d == 1 {
            return vec![("character".into(), Ok(vec![(0, one)]))];
        }
        return Vec::new();
    };
    let g = &m.group;
    let v = klein_subgroup(g).expect("even K");
    let blocks = a.dim() / d;
    let block_image = |x: usize, c: usize| a.action.rep.matrix(x)[c * d].entries[0].0 / d;
    let q = twisted_klein_algebra(g, &v, lam, order);
    let mut seen = vec![false; blocks];
    let mut out = Vec::new();
    for c in 0..blocks {
        if seen[c] {
            continue;
        }
        let mut orbit: Vec<usize> = v.iter().map(|&x| block_image(x, c)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &o in &orbit {
            seen[o] = true;
        }
        match (d, orbit.len()) {
            (1, 1) => out.push((format!("fixed block {}", c), Ok(vec![(c, one.clone())]))),
            (1, 2) => {
                let other = orbit.iter().copied().find(|&o| o != c).expect("orbit of size two");
                let chi: Vec<CycNum> = v
                    .iter()
                    .map(|&x| CycNum::from_int(order, if block_image(x, c) == c { 1 } else { -1 }))
                    .collect();
                let chi_hat = SparseVec::from_dense(&chi);
                let sq = q.algebra.mul(&chi_hat, &chi_hat);
                let p = if sq == q.algebra.unit {
                    chi_hat
                } else if sq == q.algebra.unit.neg() {
                    chi_hat.scale(&CycNum::root_of_unity(order, order as i64 / 4))
                } else {
                    out.push((format!("block pair {},{}", c, other), Err("χ̂² is not ±1".into())));
                    continue;
                };
                for sign in [1i64, -1] {
                    let p0 = p.get(0).cloned().unwrap_or_else(|| CycNum::zero(order)).scale(&rat(sign, 1));
                    // e = (1 ± P)/2 evaluated at the identity of V
                    let e0 = (&one + &p0).scale(&rat(1, 2));
                    let f0 = &one - &e0;
                    out.push((format!("block pair {},{} sign {}", c, other, sign), Ok(vec![(c, e0), (other, f0)])));
                }
            }
            (4, 1) => {
                let block = ModuleAlgebra {
                    rep: Rep::from_fn(g, &v, 4, order, "block", |x| {
                        a.action.rep.matrix(x)[c * 4..c * 4 + 4]
                            .iter()
                            .map(|col| SparseVec::from_pairs(col.iter().map(|(i, w)| (i - c * 4, w.clone()))))
                            .collect()
                    }),
                    algebra: prov.inducing.algebra.clone(),
                };
                match equivariant_iso(&block, &q) {
                    IsoSearch::Found(map) => {
                        let w = (0..4)
                            .map(|t| (c * 4 + t, map[t].get(0).cloned().unwrap_or_else(|| CycNum::zero(order))))
                            .filter(|(_, w)| !w.is_zero())
                            .collect();
                        out.push((format!("matrix block {}", c), Ok(w)));
                    }
                    IsoSearch::Absent => out.push((format!("matrix block {}", c), Err("no equivariant isomorphism onto the twisted Klein algebra".into()))),
                    IsoSearch::Undecided => out.push((format!("matrix block {}", c), Err("isomorphism search undecided".into()))),
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddableClass {
    pub label: ActionLabel,
    pub coideal: CoidealSubalgebra,
    pub source: CandidateSource,
    /// Distinct certified subalgebras found in this class.
    pub realizations: usize,
}

#[derive(Clone, Debug)]
pub struct EmbeddableClassification {
    pub big_k: usize,
    pub twisted: bool,
    /// Sorted by label.
    pub classes: Vec<EmbeddableClass>,
    pub findings: Vec<String>,
}

impl EmbeddableClassification {
    pub fn labels(&self) -> Vec<ActionLabel> {
        self.classes.iter().map(|c| c.label).collect()
    }

    /// Classes carrying one of the α/β labels (alt classes excluded).
    pub fn count(&self) -> usize {
        self.classes.iter().filter(|c| !c.label.is_alt()).count()
    }

    pub fn raw_count(&self) -> usize {
        self.classes.len()
    }
}

struct Candidate {
    source: CandidateSource,
    coideal: CoidealSubalgebra,
    expected: Option<ActionLabel>,
}

pub fn embeddable_classification(big_k: usize, twisted: bool) -> Result<EmbeddableClassification> {
    if twisted && big_k % 2 == 1 {
        return Err(QgwError::NoKleinSubgroup(big_k));
    }
    let m = LabelMatcher::new(big_k, twisted)?;
    classify_with(&m)
}

pub fn classify_with(m: &LabelMatcher) -> Result<EmbeddableClassification> {
    let h = &m.hopf;
    let g = &m.group;
    let mut findings = Vec::new();
    let mut candidates: Vec<Candidate> = Vec::new();

    // quotient-type coideals
    let subs = subgroups(g);
    let quotient_cands: Vec<Option<Candidate>> = subs
        .par_iter()
        .map(|sub| {
            let q = function_quotient(h, g, sub).ok()?;
            let c = quotient_coideal(&q, &m.irreps);
            Some(Candidate { source: CandidateSource::Quotient { subgroup: subgroup_name(g, sub) }, coideal: c, expected: None })
        })
        .collect();
    candidates.extend(quotient_cands.into_iter().flatten());

    // tame coideals over group-algebra quotients
    let quotients = group_algebra_quotients(h, g);
    let states: Vec<std::result::Result<(CandidateSource, IdempotentState), String>> = quotients
        .par_iter()
        .flat_map_iter(|(name, q)| {
            let gamma = q.target_group.clone().expect("group algebra target");
            subgroups(&gamma).into_iter().map(move |omega| {
                let omega_names: Vec<String> = omega.iter().map(|&x| gamma.labels[x].clone()).collect();
                let source = CandidateSource::Tame { quotient: name.clone(), omega: omega_names };
                tame_state(q, name, &omega).map(|st| (source.clone(), st)).map_err(|e| format!("{}: {}", source, e))
            })
        })
        .collect();
    // distinct (π, Ω) often give the same state; keep the first of each
    let mut distinct: Vec<(CandidateSource, IdempotentState)> = Vec::new();
    for st in states {
        match st {
            Ok((src, st)) => {
                if !distinct.iter().any(|(_, d)| d.phi == st.phi) {
                    distinct.push((src, st));
                }
            }
            Err(f) => findings.push(f),
        }
    }
    let tame: Vec<Candidate> = distinct
        .into_par_iter()
        .map(|(source, st)| Candidate { source, coideal: coideal_of_state(h, &st.phi, &m.irreps), expected: None })
        .collect();
    candidates.extend(tame);

    // Frobenius candidates: one certified embedding per action suffices
    let frob: Vec<(Vec<Candidate>, Vec<String>)> = m
        .actions
        .par_iter()
        .map(|a| {
            let mut notes = Vec::new();
            for (case, w) in frobenius_weights(m, a) {
                match w {
                    Ok(w) => {
                        let c = CoidealSubalgebra::from_span(h, frobenius_vectors(&a.action, &w), &m.irreps);
                        if c.is_valid() && c.dim() == a.dim() {
                            let source = CandidateSource::Frobenius { action: a.label, case };
                            return (vec![Candidate { source, coideal: c, expected: Some(a.label) }], Vec::new());
                        }
                        notes.push(format!("{} {}: certificates {:?}, dim {}", a.label, case, c.certificates, c.dim()));
                    }
                    Err(e) => notes.push(format!("{} {}: {}", a.label, case, e)),
                }
            }
            (Vec::new(), notes)
        })
        .collect();
    let mut frob_notes = Vec::new();
    for (c, n) in frob {
        candidates.extend(c);
        frob_notes.extend(n);
    }
    let _ = frob_notes;

    // identical subalgebras from different constructions are identified once
    let mut unique: Vec<Candidate> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<SparseVec>> = std::collections::HashSet::new();
    for c in candidates.into_iter().filter(|c| c.coideal.is_valid()) {
        if c.expected.is_some() || seen.insert(c.coideal.basis.clone()) {
            unique.push(c);
        }
    }
    let matched: Vec<(Candidate, MatchResult)> = unique
        .into_par_iter()
        .map(|c| {
            let r = m.identify(&c.coideal);
            (c, r)
        })
        .collect();
    let mut classes: BTreeMap<ActionLabel, EmbeddableClass> = BTreeMap::new();
    for (cand, res) in matched {
        let label = match res {
            MatchResult::Unique(l) => l,
            MatchResult::Ambiguous(ls) => {
                findings.push(format!(
                    "{} matches several actions: {}",
                    cand.source,
                    ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
                ));
                match cand.expected {
                    Some(l) if ls.contains(&l) => l,
                    _ => continue,
                }
            }
            MatchResult::Unmatched(why) => {
                findings.push(format!("{} is unmatched: {}", cand.source, why));
                continue;
            }
        };
        if let Some(e) = cand.expected {
            if e != label {
                findings.push(format!("{} was built from {} but its invariants match {}", cand.source, e, label));
            }
        }
        classes
            .entry(label)
            .and_modify(|c| c.realizations += 1)
            .or_insert(EmbeddableClass { label, coideal: cand.coideal, source: cand.source, realizations: 1 });
    }
    findings.sort();
    Ok(EmbeddableClassification { big_k: m.big_k, twisted: m.twisted(), classes: classes.into_values().collect(), findings })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CountRow {
    pub big_k: usize,
    pub tau: usize,
    pub classical: usize,
    pub twisted: usize,
    pub classical_raw: usize,
    pub twisted_raw: usize,
    pub differ: bool,
}

pub fn count_comparison(ks: &[usize]) -> Result<Vec<CountRow>> {
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k % 2 == 1) {
        return Err(QgwError::BadParams(format!("K = {} is not a positive even number", k)));
    }
    ks.iter()
        .map(|&k| {
            let c = embeddable_classification(k, false)?;
            let t = embeddable_classification(k, true)?;
            Ok(CountRow {
                big_k: k,
                tau: (1..=k).filter(|d| k % d == 0).count(),
                classical: c.count(),
                twisted: t.count(),
                classical_raw: c.raw_count(),
                twisted_raw: t.raw_count(),
                differ: c.count() != t.count(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------
// exhaustive search in dimension ≤ 8

type UniPoly = Vec<CycNum>;

fn trim(p: &mut UniPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_rem(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut r = a.clone();
    trim(&mut r);
    let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty") * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &(&f * c);
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(mut a: UniPoly, mut b: UniPoly) -> UniPoly {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        let inv = l.inv().expect("nonzero lead");
        for c in a.iter_mut() {
            *c = &*c * &inv;
        }
    }
    a
}

fn poly_eval(p: &UniPoly, t: &CycNum) -> CycNum {
    let mut acc = CycNum::zero(t.order());
    for c in p.iter().rev() {
        acc = &(&acc * t) + c;
    }
    acc
}

/// Roots in ℚ(ζ_N) of a polynomial of degree at most three.
fn field_roots(p: &UniPoly, order: u32) -> Result<Vec<CycNum>> {
    let mut p = p.clone();
    trim(&mut p);
    let mut roots = Vec::new();
    if p.len() == 4 {
        let mut cands = vec![CycNum::zero(order)];
        for j in 0..order as i64 {
            for s in [rat(1, 1), rat(2, 1), rat(1, 2), rat(3, 1), rat(1, 3)] {
                cands.push(CycNum::root_of_unity(order, j).scale(&s));
            }
        }
        let Some(r) = cands.into_iter().find(|t| poly_eval(&p, t).is_zero()) else {
            return Err(QgwError::OracleField("cubic without a root of the searched form".into()));
        };
        // deflate by (t - r)
        let (c3, c2, c1) = (p[3].clone(), p[2].clone(), p[1].clone());
        let b2 = c3;
        let b1 = &c2 + &(&b2 * &r);
        let b0 = &c1 + &(&b1 * &r);
        roots.push(r);
        p = vec![b0, b1, b2];
    }
    match p.len() {
        0 | 1 => {}
        2 => roots.push(&(-&p[0]) * &p[1].inv()?),
        3 => {
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = &(b * b) - &(a * c).scale(&rat(4, 1));
            let s = disc.sqrt_in_field().ok_or_else(|| QgwError::OracleField(format!("√({}) not in the field", disc)))?;
            let inv = a.scale(&rat(2, 1)).inv()?;
            roots.push(&(&(-b) + &s) * &inv);
            roots.push(&(&(-b) - &s) * &inv);
        }
        _ => return Err(QgwError::OracleField("degree above three".into())),
    }
    roots.sort_by_key(|r| format!("{}", r));
    roots.dedup();
    Ok(roots)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    None,
    All,
    /// The row [0:1] of the multiplicity space.
    Second,
    /// The rows [1:t], t a parameter.
    Family,
}

/// Every right coideal *-subalgebra of a Hopf algebra of dimension ≤ 8,
/// given its irreducible comodules (which must span H).
pub fn brute_force_coideals(h: &HopfAlgebraData, irreps: &Irreps) -> Result<Vec<CoidealSubalgebra>> {
    let irr = &irreps.comodules;
    let n = h.dim();
    if n > 8 {
        return Err(QgwError::OracleLimit(n));
    }
    let order = h.order();
    if irr.iter().any(|w| w.dim > 2) {
        return Err(QgwError::OracleField("irreducible of dimension above two".into()));
    }
    let mut cols: Vec<SparseVec> = Vec::new();
    let mut col_of: Vec<(usize, usize, usize)> = Vec::new();
    for (w, c) in irr.iter().enumerate() {
        for j in 0..c.dim {
            for k in 0..c.dim {
                cols.push(c.u[j][k].clone());
                col_of.push((w, j, k));
            }
        }
    }
    if cols.len() != n || rank_of(&cols) != n {
        return Err(QgwError::OracleField("matrix coefficients of the irreducibles do not form a basis".into()));
    }
    let m: Mat = (0..n).map(|i| cols.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| CycNum::zero(order))).collect()).collect();
    let minv = inverse(&m, order).ok_or(QgwError::DivisionByZero)?;
    let coords = |z: &SparseVec| -> Vec<CycNum> {
        (0..n)
            .map(|r| {
                let mut acc = CycNum::zero(order);
                for (i, c) in z.iter() {
                    if !minv[r][*i].is_zero() {
                        acc += &(&minv[r][*i] * c);
                    }
                }
                acc
            })
            .collect()
    };
    let Some(triv) = irr.iter().position(|w| w.dim == 1 && w.u[0][0] == h.one()) else {
        return Err(QgwError::OracleField("no trivial comodule among the irreducibles".into()));
    };
    let ones: Vec<usize> = (0..irr.len()).filter(|&w| irr[w].dim == 1 && w != triv).collect();
    let twos: Vec<usize> = (0..irr.len()).filter(|&w| irr[w].dim == 2).collect();
    if twos.len() > 1 {
        return Err(QgwError::OracleField("more than one two-dimensional irreducible".into()));
    }
    let parts: Vec<Part> = if twos.is_empty() { vec![Part::None] } else { vec![Part::None, Part::All, Part::Second, Part::Family] };

    let configs: Vec<(u64, Part)> =
        (0..1u64 << ones.len()).flat_map(|mask| parts.iter().map(move |&p| (mask, p))).collect();
    let results: Vec<Result<Vec<CoidealSubalgebra>>> = configs
        .par_iter()
        .map(|&(mask, part)| {
            let mut fixed = vec![irr[triv].u[0][0].clone()];
            let mut chosen = vec![triv];
            for (b, &w) in ones.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    fixed.push(irr[w].u[0][0].clone());
                    chosen.push(w);
                }
            }
            let two = twos.first().copied();
            match (part, two) {
                (Part::None, _) => {}
                (Part::All, Some(w)) => {
                    chosen.push(w);
                    fixed.extend(irr[w].u.iter().flatten().cloned());
                }
                (Part::Second, Some(w)) => fixed.extend(irr[w].u[1].iter().cloned()),
                (Part::Family, Some(_)) => {}
                _ => unreachable!("two-dimensional part without an irreducible"),
            }
            if part != Part::Family {
                let c = CoidealSubalgebra::from_span(h, fixed, irreps);
                return Ok(if c.is_valid() { vec![c] } else { Vec::new() });
            }
            let w = two.expect("family needs a two-dimensional irreducible");
            // vectors x0 + t x1
            let mut gens: Vec<(SparseVec, SparseVec)> = fixed.iter().map(|f| (f.clone(), SparseVec::new())).collect();
            for k in 0..2 {
                gens.push((irr[w].u[0][k].clone(), irr[w].u[1][k].clone()));
            }
            let col_index = |w2: usize, j: usize, k: usize| col_of.iter().position(|&c| c == (w2, j, k)).expect("column");
            let mut polys: Vec<UniPoly> = Vec::new();
            let zero = CycNum::zero(order);
            for (a0, a1) in &gens {
                for (b0, b1) in &gens {
                    let z = [h.mul(a0, b0), h.mul(a0, b1).add(&h.mul(a1, b0)), h.mul(a1, b1)];
                    let cz: Vec<Vec<CycNum>> = z.iter().map(&coords).collect();
                    for (ci, &(w2, j, k)) in col_of.iter().enumerate() {
                        if w2 == w {
                            if j == 1 {
                                // c_{1k} - t c_{0k}
                                let c0 = col_index(w, 0, k);
                                polys.push(vec![
                                    cz[0][ci].clone(),
                                    &cz[1][ci] - &cz[0][c0],
                                    &cz[2][ci] - &cz[1][c0],
                                    -&cz[2][c0],
                                ]);
                            }
                        } else if !chosen.contains(&w2) {
                            polys.push(vec![cz[0][ci].clone(), cz[1][ci].clone(), cz[2][ci].clone(), zero.clone()]);
                        }
                    }
                }
            }
            let mut g = Vec::new();
            for p in polys {
                g = poly_gcd(g, p);
            }
            if g.is_empty() {
                return Err(QgwError::OracleField("a one-parameter family survives the product conditions".into()));
            }
            let mut out = Vec::new();
            for t in field_roots(&g, order)? {
                let vecs = gens.iter().map(|(x0, x1)| x0.add(&x1.scale(&t)));
                let c = CoidealSubalgebra::from_span(h, vecs, irreps);
                if c.is_valid() {
                    out.push(c);
                }
            }
            Ok(out)
        })
        .collect();
    let mut all: Vec<CoidealSubalgebra> = Vec::new();
    for r in results {
        for c in r? {
            if !all.iter().any(|x| x.basis == c.basis) {
                all.push(c);
            }
        }
    }
    all.sort_by_cached_key(|c| (c.dim(), format!("{:?}", c.basis)));
    Ok(all)
}

/// Group-likes of a group algebra as one-dimensional comodules.
pub fn group_like_comodules(h: &HopfAlgebraData) -> Vec<Comodule> {
    (0..h.dim())
        .filter(|&i| h.comult[i].len() == 1 && h.comult[i][0].0 == i && h.comult[i][0].1 == i)
        .map(|i| {
            let mut c = Comodule::trivial(h);
            c.u = vec![vec![h.basis(i)]];
            c.label = h.labels[i].clone();
            c.unitary = c.is_unitary(h);
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use crate::corep::irreducibles;
    use crate::groups::{counit_quotient, identity_quotient, restriction_to_subgroup};

    fn dk(k: usize) -> (FiniteGroup, HopfAlgebraData, Irreps) {
        let g = make_group(GroupKind::Dihedral(k));
        let h = function_algebra(&g, dihedral_order(k));
        let irr = Irreps::new(&h, irreducibles(&h, &g, GroupKind::Dihedral(k)).unwrap()).unwrap();
        (g, h, irr)
    }

    #[test]
    fn quotient_examples() {
        let (g, h, irr) = dk(4);
        let c = quotient_coideal(&identity_quotient(&h), &irr);
        assert_eq!(c.basis, vec![h.one()]);
        assert!(c.is_valid());
        let c = quotient_coideal(&counit_quotient(&h), &irr);
        assert_eq!(c.dim(), 8);
        for sub in subgroups(&g) {
            let q = restriction_to_subgroup(&g, &sub, 4).unwrap();
            let c = quotient_coideal(&q, &irr);
            assert!(c.is_valid());
            assert_eq!(c.dim(), 8 / sub.len());
            assert!(c.commutative);
            let q2 = function_quotient(&h, &g, &sub).unwrap();
            assert_eq!(quotient_coideal(&q2, &irr).basis, c.basis);
        }
    }

    #[test]
    fn tame_examples() {
        let t = dihedral_minus_one_full(4).unwrap();
        let g = make_group(GroupKind::Dihedral(4));
        let irr = Irreps::new(
            &t.hopf,
            crate::corep::irreducible_reps(&g, 4).unwrap().iter().map(|r| Comodule::from_rep(&t.hopf, r)).collect(),
        )
        .unwrap();
        let v = klein_subgroup(&g).unwrap();
        let q = group_algebra_quotient(&t.hopf, &g, &v).unwrap();
        let gamma = q.target_group.clone().unwrap();
        for omega in subgroups(&gamma) {
            let (state, c) = tame_coideal(&q, "V^", &omega, &irr).unwrap();
            assert!(c.is_valid(), "{:?}", c.certificates);
            // φ acts as the identity on its image
            for b in &c.basis {
                assert_eq!(apply_left(&t.hopf, &state.phi, b), *b);
            }
            match omega.len() {
                1 => assert_eq!(c.basis, quotient_coideal(&q, &irr).basis),
                4 => assert_eq!(c.dim(), 8),
                _ => assert!(c.dim() > 1 && c.dim() < 8),
            }
        }
        assert!(matches!(tame_coideal(&q, "V^", &[1], &irr), Err(QgwError::NotSubgroup(_))));
    }

    #[test]
    fn classical_classification_k4() {
        let c = embeddable_classification(4, false).unwrap();
        let labels: Vec<String> = c.classes.iter().filter(|c| !c.label.is_alt()).map(|c| c.label.to_string()).collect();
        assert_eq!(labels, ["alpha(1)", "alpha(2)", "alpha(4)", "beta(1,0)", "beta(2,0)", "beta(4,0)"]);
        assert!(c.findings.is_empty(), "{:?}", c.findings);
    }

    #[test]
    fn twisted_classification_k4() {
        let c = embeddable_classification(4, true).unwrap();
        let labels: Vec<String> = c.labels().iter().map(|l| l.to_string()).collect();
        println!("{:?}\n{:#?}", labels, c.findings);
        assert_eq!(c.raw_count(), 8);
        assert_eq!(c.count(), 7);
    }

    #[test]
    fn oracle_small() {
        let klein = make_group(GroupKind::Klein);
        let h = function_algebra(&klein, 4);
        let irr = Irreps::new(&h, irreducibles(&h, &klein, GroupKind::Klein).unwrap()).unwrap();
        assert_eq!(brute_force_coideals(&h, &irr).unwrap().len(), 5);
        let z4 = make_group(GroupKind::Cyclic(4));
        let h = group_algebra(&z4, 4);
        assert_eq!(brute_force_coideals(&h, &Irreps::new(&h, group_like_comodules(&h)).unwrap()).unwrap().len(), 3);
        let (g, h, irr) = dk(4);
        assert_eq!(brute_force_coideals(&h, &irr).unwrap().len(), subgroups(&g).len());
        let (_, h, irr) = dk(8);
        assert!(matches!(brute_force_coideals(&h, &irr), Err(QgwError::OracleLimit(16))));
    }

    #[test]
    fn twisted_oracle_matches_classification() {
        for k in [2usize, 4] {
            let m = LabelMatcher::new(k, true).unwrap();
            let all = brute_force_coideals(&m.hopf, &m.irreps).unwrap();
            let mut seen = BTreeSet::new();
            for c in &all {
                match m.identify(c) {
                    MatchResult::Unique(l) => {
                        seen.insert(l);
                    }
                    other => panic!("K={} dim {}: {:?}", k, c.dim(), other),
                }
            }
            let classified: BTreeSet<ActionLabel> = embeddable_classification(k, true).unwrap().classes.iter().map(|c| c.label).collect();
            assert_eq!(seen, classified, "K={}", k);
        }
    }

    #[test]
    fn k2_counts_agree() {
        assert_eq!(embeddable_classification(2, true).unwrap().count(), 4);
        assert_eq!(embeddable_classification(2, false).unwrap().count(), 4);
    }

    #[test]
    fn matcher_invariants_separate_k8() {
        for twisted in [false, true] {
            assert!(LabelMatcher::new(8, twisted).unwrap().invariant_collisions().is_empty());
        }
    }
}
