//! Symbolic representation theory of O(2) and its closed subgroups C_k, D_k
//! (k finite or ∞), truncated multiplicity vectors of induced actions, and
//! word arithmetic in the infinite dihedral group D_∞ = ⟨g₁, g₂ | g_i² = 1⟩.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::corep::{hom_space, Rep};
use crate::cyclo::CycNum;
use crate::error::{QgwError, Result};
use crate::groups::{dihedral_order, make_group, FiniteGroup, GroupKind};
use crate::linalg::SparseVec;

/// A subgroup order parameter: a positive integer or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Param {
    Finite(usize),
    Infinity,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(k) => write!(f, "{}", k),
            Param::Infinity => write!(f, "inf"),
        }
    }
}

impl Param {
    /// Whether k divides m; ∞ divides only 0.
    fn divides(&self, m: i64) -> bool {
        match *self {
            Param::Finite(k) => m.rem_euclid(k as i64) == 0,
            Param::Infinity => m == 0,
        }
    }

    fn is_even(&self) -> bool {
        matches!(self, Param::Finite(k) if k % 2 == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IrrO2 {
    Triv,
    Sgn,
    /// The two-dimensional V_m, m ≥ 1, restricting to the circle as m ⊕ (−m).
    V(usize),
}

impl IrrO2 {
    pub fn dim(&self) -> usize {
        match self {
            IrrO2::V(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for IrrO2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrO2::Triv => write!(f, "triv"),
            IrrO2::Sgn => write!(f, "sgn"),
            IrrO2::V(m) => write!(f, "V{}", m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum O2Subgroup {
    /// C_k ⊆ T, with C_∞ = T.
    Cyclic(Param),
    /// D_k = C_k ⋊ C₂, with D_∞ = O(2).
    Dihedral(Param),
}

impl fmt::Display for O2Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            O2Subgroup::Cyclic(k) => write!(f, "C{}", k),
            O2Subgroup::Dihedral(k) => write!(f, "D{}", k),
        }
    }
}

/// Irreducible representations of C_k and D_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SubIrr {
    /// χ_j of C_k, j taken mod k (any integer for k = ∞).
    Chi(i64),
    DTriv,
    /// Rotations trivial, reflections −1.
    DSgn,
    /// For even k: rotation generator −1, reflection ±1.
    DHalf(bool),
    /// ρ_j for 0 < j < k/2: rotation diag(ζ^j, ζ^{−j}), reflection swap.
    DTwo(usize),
}

impl fmt::Display for SubIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubIrr::Chi(j) => write!(f, "chi{}", j),
            SubIrr::DTriv => write!(f, "triv"),
            SubIrr::DSgn => write!(f, "sgn"),
            SubIrr::DHalf(p) => write!(f, "half{}", if *p { "+" } else { "-" }),
            SubIrr::DTwo(j) => write!(f, "rho{}", j),
        }
    }
}

/// A decomposition as a sorted list of (irreducible, multiplicity).
pub type Decomposition = Vec<(SubIrr, usize)>;

fn collect(parts: Vec<SubIrr>) -> Decomposition {
    let mut parts = parts;
    parts.sort();
    let mut out: Decomposition = Vec::new();
    for p in parts {
        match out.last_mut() {
            Some((q, n)) if *q == p => *n += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn reduce_mod(m: i64, k: Param) -> i64 {
    match k {
        Param::Finite(k) => m.rem_euclid(k as i64),
        Param::Infinity => m,
    }
}

/// Restriction of an O(2)-irreducible to C_k or D_k.
pub fn branch(irr: IrrO2, target: O2Subgroup) -> Decomposition {
    match (irr, target) {
        (IrrO2::Triv | IrrO2::Sgn, O2Subgroup::Cyclic(_)) => collect(vec![SubIrr::Chi(0)]),
        (IrrO2::V(m), O2Subgroup::Cyclic(k)) => {
            collect(vec![SubIrr::Chi(reduce_mod(m as i64, k)), SubIrr::Chi(reduce_mod(-(m as i64), k))])
        }
        (IrrO2::Triv, O2Subgroup::Dihedral(_)) => collect(vec![SubIrr::DTriv]),
        (IrrO2::Sgn, O2Subgroup::Dihedral(_)) => collect(vec![SubIrr::DSgn]),
        (IrrO2::V(m), O2Subgroup::Dihedral(k)) => {
            let m = m as i64;
            if k.divides(m) {
                collect(vec![SubIrr::DTriv, SubIrr::DSgn])
            } else if k.divides(2 * m) {
                collect(vec![SubIrr::DHalf(true), SubIrr::DHalf(false)])
            } else {
                let j = match k {
                    Param::Finite(k) => {
                        let r = m.rem_euclid(k as i64);
                        r.min(k as i64 - r)
                    }
                    Param::Infinity => m,
                };
                collect(vec![SubIrr::DTwo(j as usize)])
            }
        }
    }
}

/// Decomposition of the subgroup module W used for induction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InducingModule {
    Trivial,
    Character(SubIrr),
    /// M₂ with z ▷ b = z^l b, z ▷ c = z^{−l} c and σ swapping a↔d, b↔c.
    M2(usize),
}

fn inducing_decomposition(h: O2Subgroup, w: InducingModule) -> Result<Decomposition> {
    match (h, w) {
        (O2Subgroup::Cyclic(_), InducingModule::Trivial) => Ok(collect(vec![SubIrr::Chi(0)])),
        (O2Subgroup::Dihedral(_), InducingModule::Trivial) => Ok(collect(vec![SubIrr::DTriv])),
        (O2Subgroup::Cyclic(k), InducingModule::Character(SubIrr::Chi(j))) => Ok(collect(vec![SubIrr::Chi(reduce_mod(j, k))])),
        (O2Subgroup::Dihedral(_), InducingModule::Character(c @ (SubIrr::DTriv | SubIrr::DSgn))) => Ok(collect(vec![c])),
        (O2Subgroup::Dihedral(k), InducingModule::Character(c @ SubIrr::DHalf(_))) if k.is_even() => Ok(collect(vec![c])),
        (O2Subgroup::Dihedral(k), InducingModule::M2(l)) if l > 0 => {
            let mut parts = vec![SubIrr::DTriv, SubIrr::DSgn];
            for (p, n) in branch(IrrO2::V(l), O2Subgroup::Dihedral(k)) {
                parts.extend(std::iter::repeat_n(p, n));
            }
            Ok(collect(parts))
        }
        _ => Err(QgwError::BadParams(format!("no inducing module {:?} on {}", w, h))),
    }
}

/// Multiplicities of triv, sgn, V_1, ..., V_cutoff. Every entry is finite:
/// inducing a finite-dimensional module from a closed subgroup gives finite
/// multiplicities, so no entry ever needs an unbounded marker.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultVector {
    pub cutoff: usize,
    pub triv: usize,
    pub sgn: usize,
    /// v[t-1] is the multiplicity of V_t.
    pub v: Vec<usize>,
}

impl MultVector {
    pub fn regular(cutoff: usize) -> MultVector {
        MultVector { cutoff, triv: 1, sgn: 1, v: vec![2; cutoff] }
    }

    pub fn get(&self, irr: IrrO2) -> usize {
        match irr {
            IrrO2::Triv => self.triv,
            IrrO2::Sgn => self.sgn,
            IrrO2::V(m) => self.v[m - 1],
        }
    }

    pub fn tsv_row(&self, label: &str) -> String {
        let mut cols = vec![label.to_string(), self.cutoff.to_string(), self.triv.to_string(), self.sgn.to_string()];
        cols.extend(self.v.iter().map(|x| x.to_string()));
        cols.join("\t")
    }

    pub fn tsv_header(cutoff: usize) -> String {
        let mut cols = vec!["label".to_string(), "cutoff".into(), "triv".into(), "sgn".into()];
        cols.extend((1..=cutoff).map(|t| format!("V{}", t)));
        cols.join("\t")
    }
}

fn hom_dim(a: &Decomposition, b: &Decomposition) -> usize {
    a.iter().map(|(p, n)| n * b.iter().find(|(q, _)| q == p).map(|(_, m)| *m).unwrap_or(0)).sum()
}

/// Multiplicities in Ind_H^{O(2)} W via Frobenius reciprocity:
/// mult(V) = dim hom_H(V|_H, W).
pub fn induced_mult(h: O2Subgroup, w: InducingModule, cutoff: usize) -> Result<MultVector> {
    if cutoff == 0 {
        return Err(QgwError::BadParams("cutoff must be at least 1".into()));
    }
    if let O2Subgroup::Cyclic(Param::Finite(0)) | O2Subgroup::Dihedral(Param::Finite(0)) = h {
        return Err(QgwError::BadParams("subgroup order must be positive".into()));
    }
    let wd = inducing_decomposition(h, w)?;
    let m = |irr: IrrO2| hom_dim(&branch(irr, h), &wd);
    Ok(MultVector { cutoff, triv: m(IrrO2::Triv), sgn: m(IrrO2::Sgn), v: (1..=cutoff).map(|t| m(IrrO2::V(t))).collect() })
}

/// Ergodic O(2)-actions: α^(k) = Ind_{C_k} ℂ and β^(k)_{l/2} = Ind_{D_k} of ℂ
/// (l = 0) or of M₂ at parameter l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum O2Label {
    Alpha { k: Param },
    Beta { k: Param, l: usize },
}

impl fmt::Display for O2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            O2Label::Alpha { k } => write!(f, "alpha({})", k),
            O2Label::Beta { k, l } => {
                let p = if l == 0 { "0".to_string() } else if l % 2 == 0 { format!("{}", l / 2) } else { format!("{}/2", l) };
                write!(f, "beta({},{})", k, p)
            }
        }
    }
}

impl O2Label {
    pub fn mult(&self, cutoff: usize) -> Result<MultVector> {
        match *self {
            O2Label::Alpha { k } => induced_mult(O2Subgroup::Cyclic(k), InducingModule::Trivial, cutoff),
            O2Label::Beta { k, l: 0 } => induced_mult(O2Subgroup::Dihedral(k), InducingModule::Trivial, cutoff),
            O2Label::Beta { k, l } => induced_mult(O2Subgroup::Dihedral(k), InducingModule::M2(l), cutoff),
        }
    }

    /// The matching finite label for D_K, when k is finite.
    pub fn finite(&self) -> Option<crate::ergodic::ActionLabel> {
        use crate::ergodic::ActionLabel;
        match *self {
            O2Label::Alpha { k: Param::Finite(k) } => Some(ActionLabel::Alpha { k }),
            O2Label::Beta { k: Param::Finite(k), l } => Some(ActionLabel::Beta { k, l, alt: false }),
            _ => None,
        }
    }
}

/// All labels with finite k ≤ k_bound, plus k = ∞, and 0 ≤ l ≤ min(l_bound, ⌊k/2⌋)
/// (l ≤ l_bound for k = ∞).
pub fn labels_up_to(k_bound: usize, l_bound: usize) -> Vec<O2Label> {
    let mut ks: Vec<Param> = (1..=k_bound).map(Param::Finite).collect();
    ks.push(Param::Infinity);
    let mut out: Vec<O2Label> = ks.iter().map(|&k| O2Label::Alpha { k }).collect();
    for &k in &ks {
        let top = match k {
            Param::Finite(k) => l_bound.min(k / 2),
            Param::Infinity => l_bound,
        };
        out.extend((0..=top).map(|l| O2Label::Beta { k, l }));
    }
    out
}

/// Labels whose truncated multiplicity vector equals the regular one.
pub fn scan_regular_candidates(k_bound: usize, l_bound: usize, cutoff: usize) -> Result<Vec<O2Label>> {
    if cutoff < 2 * k_bound {
        return Err(QgwError::BadParams(format!("cutoff {} is below 2·k_bound = {}", cutoff, 2 * k_bound)));
    }
    let regular = MultVector::regular(cutoff);
    let checked: Vec<(O2Label, bool)> = labels_up_to(k_bound, l_bound)
        .into_par_iter()
        .map(|l| l.mult(cutoff).map(|m| (l, m == regular)))
        .collect::<Result<_>>()?;
    Ok(checked.into_iter().filter(|(_, hit)| *hit).map(|(l, _)| l).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Embeddable,
    NotEmbeddable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub label: O2Label,
    pub verdict: Verdict,
    pub reason: &'static str,
}

/// Which ergodic O(2)-actions embed into β^(2)_{1/2}, the twisted regular
/// comodule algebra, decided by parity and divisibility.
pub fn embeddable_table(k_bound: usize, l_bound: usize) -> Vec<TableEntry> {
    labels_up_to(k_bound, l_bound).into_iter().map(decide).collect()
}

pub fn decide(label: O2Label) -> TableEntry {
    use Verdict::*;
    let (verdict, reason) = match label {
        O2Label::Alpha { k: Param::Infinity } => (Embeddable, "diagonal-subalgebra"),
        O2Label::Alpha { k } if k.is_even() => (Embeddable, "induction-in-stages"),
        O2Label::Alpha { .. } => (NotEmbeddable, "commutative-onto-W"),
        O2Label::Beta { k: Param::Infinity, l: 0 } => (Embeddable, "trivial-action"),
        O2Label::Beta { k, l: 0 } if k.is_even() => (Embeddable, "inside-alpha"),
        O2Label::Beta { l: 0, .. } => (NotEmbeddable, "commutative-onto-W"),
        O2Label::Beta { l, .. } if l % 2 == 0 => (NotEmbeddable, "invariant-dimension"),
        O2Label::Beta { k, .. } if k.is_even() || k == Param::Infinity => (Embeddable, "restriction-into-W"),
        // odd k: some even l' ≡ l (mod k) reduces to the previous case
        O2Label::Beta { .. } => (NotEmbeddable, "invariant-dimension"),
    };
    TableEntry { label, verdict, reason }
}

/// Element (g₁g₂)^m g₁^ε of D_∞ in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DInfWord {
    pub m: i64,
    pub eps: bool,
}

impl DInfWord {
    pub const ONE: DInfWord = DInfWord { m: 0, eps: false };
    pub const G1: DInfWord = DInfWord { m: 0, eps: true };
    /// g₂ = (g₁g₂)⁻¹ g₁.
    pub const G2: DInfWord = DInfWord { m: -1, eps: true };

    pub fn mul(&self, other: &DInfWord) -> DInfWord {
        // g₁ (g₁g₂)^n = (g₁g₂)^{−n} g₁
        let m = if self.eps { self.m - other.m } else { self.m + other.m };
        DInfWord { m, eps: self.eps ^ other.eps }
    }

    pub fn inv(&self) -> DInfWord {
        if self.eps {
            *self
        } else {
            DInfWord { m: -self.m, eps: false }
        }
    }

    pub fn pow(&self, n: usize) -> DInfWord {
        (0..n).fold(DInfWord::ONE, |acc, _| acc.mul(self))
    }
}

impl fmt::Display for DInfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g1g2)^{}{}", self.m, if self.eps { "g1" } else { "" })
    }
}

/// Subgroup of D_∞ generated by (g₁g₂)^step (step = None: trivial rotation
/// part) and optionally the reflection (g₁g₂)^c g₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DInfSubgroup {
    pub step: Option<usize>,
    pub reflection: Option<i64>,
}

impl DInfSubgroup {
    fn rotation_in(&self, m: i64) -> bool {
        match self.step {
            Some(s) => m.rem_euclid(s as i64) == 0,
            None => m == 0,
        }
    }

    pub fn contains(&self, w: &DInfWord) -> bool {
        if !w.eps {
            return self.rotation_in(w.m);
        }
        self.reflection.is_some_and(|c| self.rotation_in(w.m - c))
    }
}

/// Ω for β^(k)_{l/2}: rotations (g₁g₂)^{k/2} together with the reflection
/// (g₁g₂)^{(l−1)/2} g₁. The rotation g₁g₂ moves V_t by two steps, so k/2 here
/// is the index-k subgroup of the circle.
pub fn tame_subgroup(k: Param, l: usize) -> Result<DInfSubgroup> {
    if l.is_multiple_of(2) {
        return Err(QgwError::BadParams(format!("l = {} must be odd", l)));
    }
    let step = match k {
        Param::Finite(k) if k % 2 == 0 && k > 0 => Some(k / 2),
        Param::Infinity => None,
        Param::Finite(k) => return Err(QgwError::BadParams(format!("k = {} must be even", k))),
    };
    Ok(DInfSubgroup { step, reflection: Some(((l - 1) / 2) as i64) })
}

/// Images in D_∞ of the diagonal words of the matrix coalgebra C_t:
/// (v₁₁v₂₂)^m v₁₁^ε and (v₂₂v₁₁)^m v₂₂^ε with t = 2m + ε. The off-diagonal
/// words contain v₁₂ or v₂₁ and vanish.
pub fn coalgebra_word_images(t: usize) -> [DInfWord; 2] {
    let (m, eps) = (t / 2, t % 2 == 1);
    let w11 = DInfWord::G1.mul(&DInfWord::G2).pow(m).mul(if eps { &DInfWord::G1 } else { &DInfWord::ONE });
    let w22 = DInfWord::G2.mul(&DInfWord::G1).pow(m).mul(if eps { &DInfWord::G2 } else { &DInfWord::ONE });
    [w11, w22]
}

/// Multiplicities of the tame coideal A_{π,Ω} for π onto ℂD_∞: the
/// idempotent state restricted to C_t is diag(1_Ω(w₁₁), 1_Ω(w₂₂)), and the
/// rank of that matrix is the multiplicity of V_t. Both one-dimensional
/// comodules map to the identity of D_∞.
pub fn dinf_tame_mult(k: Param, l: usize, cutoff: usize) -> Result<MultVector> {
    let omega = tame_subgroup(k, l)?;
    let v = (1..=cutoff).map(|t| coalgebra_word_images(t).iter().filter(|w| omega.contains(w)).count()).collect();
    Ok(MultVector { cutoff, triv: 1, sgn: 1, v })
}

/// Branching facts for the quotients onto A(n,e) and ℂD_n, taken as input:
/// V_k has invariants over A(n,e) iff `modulus` | k, and C_k lies in the
/// coideal of ℂD_n iff `modulus` | k. The true modulus is 2n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientAxioms {
    pub modulus: usize,
}

impl QuotientAxioms {
    pub fn standard(n: usize) -> QuotientAxioms {
        QuotientAxioms { modulus: 2 * n }
    }
}

/// Multiplicities of the coideals of the A(n,e) and ℂD_n quotients, built
/// from the axioms, against β^(2n)_0 and α^(2n).
pub fn ane_consistency_with(n: usize, cutoff: usize, ax: QuotientAxioms) -> Result<bool> {
    if n == 0 {
        return Err(QgwError::BadParams("n must be positive".into()));
    }
    let hit = |t: usize| ax.modulus > 0 && t.is_multiple_of(ax.modulus);
    // the non-trivial grouplike survives π_{n,e}, so it is absent from the coideal
    let ane = MultVector { cutoff, triv: 1, sgn: 0, v: (1..=cutoff).map(|t| usize::from(hit(t))).collect() };
    let dih = MultVector { cutoff, triv: 1, sgn: 1, v: (1..=cutoff).map(|t| 2 * usize::from(hit(t))).collect() };
    let k = Param::Finite(2 * n);
    Ok(ane == induced_mult(O2Subgroup::Dihedral(k), InducingModule::Trivial, cutoff)?
        && dih == induced_mult(O2Subgroup::Cyclic(k), InducingModule::Trivial, cutoff)?)
}

pub fn ane_consistency(n: usize, cutoff: usize) -> Result<bool> {
    ane_consistency_with(n, cutoff, QuotientAxioms::standard(n))
}

// ---------------------------------------------------------------------
// finite realizations inside D_K

fn root(order: u32, big_k: usize, j: i64) -> CycNum {
    CycNum::root_of_unity(order, (order as usize / big_k) as i64 * j)
}

/// V_m (or a character of O(2)) as a representation of D_K ⊂ O(2),
/// restricted to `domain`.
pub fn o2_rep_on(g: &FiniteGroup, domain: &[usize], irr: IrrO2, order: u32) -> Rep {
    let GroupKind::Dihedral(big_k) = g.kind else { panic!("D_K expected") };
    match irr {
        IrrO2::Triv => Rep::character(g, domain, order, "triv", |_| CycNum::one(order)),
        IrrO2::Sgn => Rep::character(g, domain, order, "sgn", |x| {
            CycNum::from_int(order, if g.dihedral_parts(x).1 == 1 { -1 } else { 1 })
        }),
        IrrO2::V(m) => Rep::from_fn(g, domain, 2, order, format!("V{}", m), |x| {
            let (a, e) = g.dihedral_parts(x);
            let d0 = root(order, big_k, (m * a) as i64);
            let d1 = root(order, big_k, -((m * a) as i64));
            if e == 0 {
                vec![SparseVec::from_pairs([(0, d0)]), SparseVec::from_pairs([(1, d1)])]
            } else {
                vec![SparseVec::from_pairs([(1, d1)]), SparseVec::from_pairs([(0, d0)])]
            }
        }),
    }
}

/// A subgroup irreducible realized on C_k = ⟨r^{K/k}⟩ or D_k = ⟨r^{K/k}, s⟩.
pub fn sub_irr_rep(g: &FiniteGroup, domain: &[usize], k: usize, irr: SubIrr, order: u32) -> Rep {
    let GroupKind::Dihedral(big_k) = g.kind else { panic!("D_K expected") };
    let step = big_k / k;
    let parts = move |x: usize| {
        let (a, e) = g.dihedral_parts(x);
        (a / step, e)
    };
    let sign = |b: bool| CycNum::from_int(order, if b { -1 } else { 1 });
    match irr {
        SubIrr::Chi(j) => Rep::character(g, domain, order, irr.to_string(), |x| root(order, k, j * parts(x).0 as i64)),
        SubIrr::DTriv => Rep::character(g, domain, order, "triv", |_| CycNum::one(order)),
        SubIrr::DSgn => Rep::character(g, domain, order, "sgn", |x| sign(parts(x).1 == 1)),
        SubIrr::DHalf(p) => Rep::character(g, domain, order, irr.to_string(), |x| {
            let (t, e) = parts(x);
            sign((t % 2 == 1) ^ (!p && e == 1))
        }),
        SubIrr::DTwo(j) => Rep::from_fn(g, domain, 2, order, irr.to_string(), |x| {
            let (t, e) = parts(x);
            let d0 = root(order, k, (j * t) as i64);
            let d1 = root(order, k, -((j * t) as i64));
            if e == 0 {
                vec![SparseVec::from_pairs([(0, d0)]), SparseVec::from_pairs([(1, d1)])]
            } else {
                vec![SparseVec::from_pairs([(1, d1)]), SparseVec::from_pairs([(0, d0)])]
            }
        }),
    }
}

fn all_sub_irreps(k: usize, dihedral: bool) -> Vec<SubIrr> {
    if !dihedral {
        return (0..k as i64).map(SubIrr::Chi).collect();
    }
    let mut out = vec![SubIrr::DTriv, SubIrr::DSgn];
    if k.is_multiple_of(2) {
        out.extend([SubIrr::DHalf(true), SubIrr::DHalf(false)]);
    }
    out.extend((1..k.div_ceil(2)).map(SubIrr::DTwo));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchCheck {
    pub big_k: usize,
    pub target: String,
    pub irr: String,
    pub symbolic: Vec<(String, usize)>,
    pub exact: Vec<(String, usize)>,
}

impl BranchCheck {
    pub fn agrees(&self) -> bool {
        self.symbolic == self.exact
    }
}

/// Compare `branch` with exact hom-space dimensions on D_K for every k | K,
/// both C_k and D_k, and every O(2)-irreducible with parameter below K/2.
pub fn branch_cross_check(big_k: usize) -> Result<Vec<BranchCheck>> {
    if big_k < 2 {
        return Err(QgwError::BadParams("K must be at least 2".into()));
    }
    let g = make_group(GroupKind::Dihedral(big_k));
    let order = dihedral_order(big_k);
    let mut irrs = vec![IrrO2::Triv, IrrO2::Sgn];
    irrs.extend((1..big_k.div_ceil(2)).map(IrrO2::V));
    let mut cases = Vec::new();
    for k in (1..=big_k).filter(|k| big_k.is_multiple_of(*k)) {
        for dihedral in [false, true] {
            for &irr in &irrs {
                cases.push((k, dihedral, irr));
            }
        }
    }
    let g = &g;
    cases
        .into_par_iter()
        .map(|(k, dihedral, irr)| {
            let step = (big_k / k) as i64;
            let mut gens = vec![g.dihedral(step, 0)];
            if dihedral {
                gens.push(g.dihedral(0, 1));
            }
            let domain = g.closure(&gens);
            let target = if dihedral { O2Subgroup::Dihedral(Param::Finite(k)) } else { O2Subgroup::Cyclic(Param::Finite(k)) };
            let v = o2_rep_on(g, &domain, irr, order);
            let mut exact = Vec::new();
            for s in all_sub_irreps(k, dihedral) {
                let w = sub_irr_rep(g, &domain, k, s, order);
                let d = hom_space(&v, &w).len();
                if d > 0 {
                    exact.push((s.to_string(), d));
                }
            }
            let mut symbolic: Vec<(String, usize)> = branch(irr, target).into_iter().map(|(s, n)| (s.to_string(), n)).collect();
            symbolic.sort();
            exact.sort();
            Ok(BranchCheck { big_k, target: target.to_string(), irr: irr.to_string(), symbolic, exact })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(k: usize) -> Param {
        Param::Finite(k)
    }

    #[test]
    fn branch_examples() {
        assert_eq!(branch(IrrO2::V(3), O2Subgroup::Cyclic(fin(3))), vec![(SubIrr::Chi(0), 2)]);
        let b = branch(IrrO2::V(1), O2Subgroup::Dihedral(fin(2)));
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|(_, n)| *n == 1));
        assert_eq!(branch(IrrO2::V(1), O2Subgroup::Dihedral(fin(5))), vec![(SubIrr::DTwo(1), 1)]);
    }

    #[test]
    fn induced_examples() {
        let m = induced_mult(O2Subgroup::Cyclic(fin(1)), InducingModule::Trivial, 10).unwrap();
        assert_eq!(m, MultVector::regular(10));
        for k in 2..8 {
            let m = induced_mult(O2Subgroup::Cyclic(fin(k)), InducingModule::Trivial, 10).unwrap();
            assert_eq!(m.get(IrrO2::V(1)), 0);
        }
        let m = induced_mult(O2Subgroup::Dihedral(fin(2)), InducingModule::M2(1), 30).unwrap();
        assert_eq!(m, MultVector::regular(30));
        let a_inf = O2Label::Alpha { k: Param::Infinity }.mult(6).unwrap();
        assert_eq!((a_inf.triv, a_inf.sgn, a_inf.v.iter().sum::<usize>()), (1, 1, 0));
        let b_inf = O2Label::Beta { k: Param::Infinity, l: 3 }.mult(6).unwrap();
        assert_eq!(b_inf.v, vec![0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn regular_scan() {
        let expect = vec![O2Label::Alpha { k: fin(1) }, O2Label::Beta { k: fin(2), l: 1 }];
        assert_eq!(scan_regular_candidates(12, 6, 24).unwrap(), expect);
        assert_eq!(scan_regular_candidates(3, 1, 8).unwrap(), expect);
        assert!(matches!(scan_regular_candidates(12, 6, 20), Err(QgwError::BadParams(_))));
    }

    #[test]
    fn table_examples() {
        for k in [3, 5, 7] {
            let e = decide(O2Label::Alpha { k: fin(k) });
            assert_eq!((e.verdict, e.reason), (Verdict::NotEmbeddable, "commutative-onto-W"));
        }
        let e = decide(O2Label::Beta { k: fin(6), l: 2 });
        assert_eq!((e.verdict, e.reason), (Verdict::NotEmbeddable, "invariant-dimension"));
        assert_eq!(decide(O2Label::Beta { k: fin(6), l: 3 }).verdict, Verdict::Embeddable);
        assert_eq!(decide(O2Label::Alpha { k: Param::Infinity }).verdict, Verdict::Embeddable);
    }

    #[test]
    fn dinf_words() {
        let a = DInfWord::G1.mul(&DInfWord::G2);
        assert_eq!(a, DInfWord { m: 1, eps: false });
        assert_eq!(DInfWord::G1.mul(&DInfWord::G1), DInfWord::ONE);
        assert_eq!(DInfWord::G2.mul(&DInfWord::G2), DInfWord::ONE);
        let w = DInfWord { m: 3, eps: true };
        assert_eq!(w.mul(&w.inv()), DInfWord::ONE);
        assert_eq!(a.pow(4).inv(), DInfWord { m: -4, eps: false });
    }

    #[test]
    fn tame_examples() {
        assert_eq!(dinf_tame_mult(fin(2), 1, 20).unwrap(), MultVector::regular(20));
        for (k, l) in [(4, 1), (6, 3), (8, 3)] {
            let want = induced_mult(O2Subgroup::Dihedral(fin(k)), InducingModule::M2(l), 16).unwrap();
            assert_eq!(dinf_tame_mult(fin(k), l, 16).unwrap(), want);
        }
        let want = induced_mult(O2Subgroup::Dihedral(Param::Infinity), InducingModule::M2(3), 16).unwrap();
        assert_eq!(dinf_tame_mult(Param::Infinity, 3, 16).unwrap(), want);
        assert!(matches!(dinf_tame_mult(fin(3), 1, 8), Err(QgwError::BadParams(_))));
        assert!(matches!(dinf_tame_mult(fin(4), 2, 8), Err(QgwError::BadParams(_))));
    }

    #[test]
    fn ane_checks() {
        assert!(ane_consistency(1, 12).unwrap());
        assert!(ane_consistency(3, 24).unwrap());
        assert!(!ane_consistency_with(3, 24, QuotientAxioms { modulus: 5 }).unwrap());
    }

    #[test]
    fn branch_matches_exact() {
        for big_k in [4, 6] {
            for c in branch_cross_check(big_k).unwrap() {
                assert!(c.agrees(), "{:?}", c);
            }
        }
    }
}
