//! Finite groups as multiplication tables, subgroup lattices, the Hopf
//! algebras F(G) and ℂG, and certified Hopf quotients.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::cyclo::CycNum;
use crate::error::{QgwError, Result};
use crate::hopf::{tensor2_from_pairs, HopfAlgebraData};
use crate::linalg::{Accumulator, Echelon, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Dihedral(usize),
    Cyclic(usize),
    Klein,
    /// A subgroup or other group given only by its table.
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub kind: GroupKind,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    pub labels: Vec<String>,
}

/// Cyclotomic order used for constructions over D_K: lcm(4, K).
pub fn dihedral_order(k: usize) -> u32 {
    (4usize.lcm(&k.max(1))) as u32
}

fn power_label(base: &str, j: usize) -> String {
    match j {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{}^{}", base, j),
    }
}

pub fn make_group(kind: GroupKind) -> FiniteGroup {
    match kind {
        GroupKind::Dihedral(k) => {
            let k = k.max(1);
            let n = 2 * k;
            let idx = |a: usize, e: usize| e * k + a;
            let mut table = vec![vec![0; n]; n];
            for e in 0..2 {
                for a in 0..k {
                    for f in 0..2 {
                        for b in 0..k {
                            let a2 = if e == 0 { (a + b) % k } else { (a + k - b) % k };
                            table[idx(a, e)][idx(b, f)] = idx(a2, (e + f) % 2);
                        }
                    }
                }
            }
            let labels = (0..n)
                .map(|i| {
                    let (a, e) = (i % k, i / k);
                    let r = power_label("r", a);
                    match (r.is_empty(), e) {
                        (true, 0) => "1".to_string(),
                        (true, _) => "s".to_string(),
                        (false, 0) => r,
                        (false, _) => format!("{}s", r),
                    }
                })
                .collect();
            from_table(kind, table, labels)
        }
        GroupKind::Cyclic(k) => {
            let k = k.max(1);
            let table = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
            let labels = (0..k)
                .map(|j| if j == 0 { "1".to_string() } else { power_label("g", j) })
                .collect();
            from_table(kind, table, labels)
        }
        GroupKind::Klein | GroupKind::Table => {
            let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
            let labels = (0..4).map(|i| format!("({},{})", i >> 1, i & 1)).collect();
            from_table(GroupKind::Klein, table, labels)
        }
    }
}

pub fn from_table(kind: GroupKind, table: Vec<Vec<usize>>, labels: Vec<String>) -> FiniteGroup {
    let n = table.len();
    let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g)).expect("identity");
    let inverse = (0..n).map(|g| (0..n).find(|&h| table[g][h] == identity).expect("inverse")).collect();
    FiniteGroup { kind, table, identity, inverse, labels }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// g x g⁻¹
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// For D_K: the index of r^a s^e.
    pub fn dihedral(&self, a: i64, e: usize) -> usize {
        let GroupKind::Dihedral(k) = self.kind else { panic!("not a dihedral group") };
        (e % 2) * k + a.rem_euclid(k as i64) as usize
    }

    /// For D_K: (a, e) with g = r^a s^e.
    pub fn dihedral_parts(&self, g: usize) -> (usize, usize) {
        let GroupKind::Dihedral(k) = self.kind else { panic!("not a dihedral group") };
        (g % k, g / k)
    }

    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        let closed = self.table.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
        let latin = (0..n).all(|i| (0..n).map(|j| self.table[i][j]).collect::<HashSet<_>>().len() == n);
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))));
        let labels = self.labels.iter().collect::<HashSet<_>>().len() == n;
        closed && latin && assoc && labels
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: HashSet<usize> = set.iter().copied().collect();
        s.contains(&self.identity) && set.iter().all(|&a| set.iter().all(|&b| s.contains(&self.mul(a, self.inv(b)))))
    }

    /// A small generating set of a subgroup (greedy).
    pub fn generators(&self, sub: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<usize> = BTreeSet::from([self.identity]);
        // prefer elements of large order
        let mut cand: Vec<usize> = sub.to_vec();
        cand.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        for g in cand {
            if !span.contains(&g) {
                gens.push(g);
                span = self.closure(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// g⁻¹ L g
    pub fn conjugate_subgroup(&self, sub: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        let mut out: Vec<usize> = sub.iter().map(|&x| self.mul(self.mul(gi, x), g)).collect();
        out.sort_unstable();
        out
    }

    /// The subgroup as an abstract group with its own table, together with
    /// the embedding of its indices into self.
    pub fn subgroup_group(&self, sub: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let pos = |x: usize| sub.iter().position(|&y| y == x).expect("closed subgroup");
        let table = sub.iter().map(|&a| sub.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        let labels = sub.iter().map(|&a| self.labels[a].clone()).collect();
        (from_table(GroupKind::Table, table, labels), sub.to_vec())
    }

    /// Left coset representatives c with G = ⊔ c L (smallest element of each coset).
    pub fn left_coset_reps(&self, sub: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &l in sub {
                seen[self.mul(g, l)] = true;
            }
        }
        reps
    }
}

/// All subgroups, by breadth-first closure over added elements.
pub fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let trivial = vec![g.identity];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    let mut out = Vec::new();
    while let Some(h) = queue.pop_front() {
        let members: HashSet<usize> = h.iter().copied().collect();
        for x in 0..g.order() {
            if members.contains(&x) {
                continue;
            }
            let mut gens = g.generators(&h);
            gens.push(x);
            let c = g.closure(&gens);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Conjugacy classes of subgroups as (representative, class size),
/// representatives chosen minimal in the canonical order.
pub fn subgroup_conjugacy_classes(g: &FiniteGroup) -> Vec<(Vec<usize>, usize)> {
    let subs = subgroups(g);
    let mut assigned: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for s in subs {
        if assigned.contains(&s) {
            continue;
        }
        let class: BTreeSet<Vec<usize>> = (0..g.order()).map(|x| g.conjugate_subgroup(&s, x)).collect();
        for c in &class {
            assigned.insert(c.clone());
        }
        out.push((s, class.len()));
    }
    out
}

/// F(G): basis δ_g with pointwise product and Δδ_g = Σ_h δ_h⊗δ_{h⁻¹g}.
pub fn function_algebra(g: &FiniteGroup, order: u32) -> HopfAlgebraData {
    let n = g.order();
    let one = CycNum::one(order);
    let mut mult = vec![vec![SparseVec::new(); n]; n];
    for (i, row) in mult.iter_mut().enumerate() {
        row[i] = SparseVec::unit(i, order);
    }
    let algebra = Algebra {
        dim: n,
        order,
        mult,
        unit: SparseVec::from_pairs((0..n).map(|i| (i, one.clone()))),
        star: (0..n).map(|i| SparseVec::unit(i, order)).collect(),
    };
    let comult = (0..n)
        .map(|x| tensor2_from_pairs((0..n).map(|h| ((h, g.mul(g.inv(h), x)), one.clone()))))
        .collect();
    let counit = (0..n).map(|x| if x == g.identity { one.clone() } else { CycNum::zero(order) }).collect();
    let antipode = (0..n).map(|x| SparseVec::unit(g.inv(x), order)).collect();
    let labels = g.labels.iter().map(|l| format!("δ[{}]", l)).collect();
    HopfAlgebraData { labels, algebra, comult, counit, antipode }
}

/// ℂΓ: basis γ, group product, Δγ = γ⊗γ, γ* = γ⁻¹.
pub fn group_algebra(g: &FiniteGroup, order: u32) -> HopfAlgebraData {
    let n = g.order();
    let one = CycNum::one(order);
    let mult = (0..n).map(|a| (0..n).map(|b| SparseVec::unit(g.mul(a, b), order)).collect()).collect();
    let algebra = Algebra {
        dim: n,
        order,
        mult,
        unit: SparseVec::unit(g.identity, order),
        star: (0..n).map(|a| SparseVec::unit(g.inv(a), order)).collect(),
    };
    let comult = (0..n).map(|a| vec![(a, a, one.clone())]).collect();
    let counit = vec![one; n];
    let antipode = (0..n).map(|a| SparseVec::unit(g.inv(a), order)).collect();
    HopfAlgebraData { labels: g.labels.clone(), algebra, comult, counit, antipode }
}

/// A Hopf quotient π: source → target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfQuotient {
    pub source: HopfAlgebraData,
    pub target: HopfAlgebraData,
    /// `map[j]` is π(e_j) in target coordinates.
    pub map: Vec<SparseVec>,
    /// When the target is a group algebra ℂΓ, the group Γ whose elements
    /// index the target basis.
    pub target_group: Option<FiniteGroup>,
}

impl HopfQuotient {
    pub fn apply(&self, a: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.source.order());
        for (i, c) in a.iter() {
            acc.add_scaled(&self.map[*i], c);
        }
        acc.finish()
    }

    /// Exact quantum-subgroup certificate.
    pub fn certify(&self) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        let n = s.dim();
        let bad = |m: String| Err(QgwError::InvalidQuotient(m));
        if self.map.len() != n {
            return bad("map has wrong length".into());
        }
        let rank = Echelon::from_rows(self.map.iter().cloned()).rank();
        if rank != t.dim() {
            return bad(format!("image has dimension {} < {}", rank, t.dim()));
        }
        if self.apply(&s.one()) != t.one() {
            return bad("unit not preserved".into());
        }
        for i in 0..n {
            for j in 0..n {
                if self.apply(&s.algebra.mult[i][j]) != t.mul(&self.map[i], &self.map[j]) {
                    return bad(format!("not multiplicative at ({}, {})", s.labels[i], s.labels[j]));
                }
            }
            let lhs = t.comult_of(&self.map[i]);
            let rhs = tensor2_from_pairs(s.comult[i].iter().flat_map(|(p, q, c)| {
                let a = &self.map[*p];
                let b = &self.map[*q];
                a.iter()
                    .flat_map(move |(x, u)| b.iter().map(move |(y, v)| ((*x, *y), &(c * u) * v)))
                    .collect::<Vec<_>>()
            }));
            if lhs != rhs {
                return bad(format!("comultiplication not intertwined at {}", s.labels[i]));
            }
            if t.counit_of(&self.map[i]) != s.counit[i] {
                return bad(format!("counit not intertwined at {}", s.labels[i]));
            }
            if t.antipode_of(&self.map[i]) != self.apply(&s.antipode[i]) {
                return bad(format!("antipode not intertwined at {}", s.labels[i]));
            }
            if t.star_of(&self.map[i]) != self.apply(&s.algebra.star[i]) {
                return bad(format!("star not intertwined at {}", s.labels[i]));
            }
        }
        Ok(())
    }
}

pub fn identity_quotient(h: &HopfAlgebraData) -> HopfQuotient {
    HopfQuotient {
        source: h.clone(),
        target: h.clone(),
        map: (0..h.dim()).map(|i| h.basis(i)).collect(),
        target_group: None,
    }
}

/// The counit as a quotient onto the one-dimensional Hopf algebra.
pub fn counit_quotient(h: &HopfAlgebraData) -> HopfQuotient {
    let target = function_algebra(&make_group(GroupKind::Cyclic(1)), h.order());
    let map = h.counit.iter().map(|c| SparseVec::from_pairs([(0, c.clone())])).collect();
    HopfQuotient { source: h.clone(), target, map, target_group: Some(make_group(GroupKind::Cyclic(1))) }
}

/// Restriction of functions F(G) → F(L) for a subgroup L.
pub fn restriction_to_subgroup(g: &FiniteGroup, sub: &[usize], order: u32) -> Result<HopfQuotient> {
    if !g.is_subgroup(sub) {
        return Err(QgwError::NotSubgroup(format!("{:?}", sub)));
    }
    let (lg, emb) = g.subgroup_group(sub);
    let source = function_algebra(g, order);
    let target = function_algebra(&lg, order);
    let map = (0..g.order())
        .map(|x| match emb.iter().position(|&y| y == x) {
            Some(p) => SparseVec::unit(p, order),
            None => SparseVec::new(),
        })
        .collect();
    Ok(HopfQuotient { source, target, map, target_group: None })
}

/// The Klein subgroup V = {1, z, s, zs} of D_K, z = r^{K/2}, listed in
/// that order.
pub fn klein_subgroup(g: &FiniteGroup) -> Result<Vec<usize>> {
    let GroupKind::Dihedral(k) = g.kind else {
        return Err(QgwError::BadKind("Klein subgroup needs a dihedral group".into()));
    };
    if k % 2 == 1 {
        return Err(QgwError::NoKleinSubgroup(k));
    }
    let z = (k / 2) as i64;
    Ok(vec![g.dihedral(0, 0), g.dihedral(z, 0), g.dihedral(0, 1), g.dihedral(z, 1)])
}

/// Diagonal entries of V ⊂ O(2) under r ↦ rotation, s ↦ diag(1, -1).
pub fn klein_diag(g: &FiniteGroup, v: usize) -> (i64, i64) {
    let (a, e) = g.dihedral_parts(v);
    let rot = if a == 0 { 1 } else { -1 };
    if e == 0 {
        (rot, rot)
    } else {
        (rot, -rot)
    }
}

/// Character χ_{(a,b)} of V evaluated at v: ε₁^a ε₂^b.
pub fn klein_character(g: &FiniteGroup, chi: usize, v: usize) -> i64 {
    let (e1, e2) = klein_diag(g, v);
    let (a, b) = (chi >> 1, chi & 1);
    (if a == 1 { e1 } else { 1 }) * (if b == 1 { e2 } else { 1 })
}

/// F(D_K) → F(V) ≅ ℂℤ₂², with the target written in the character basis
/// of the self-dual Klein group: δ_v ↦ ¼ Σ_χ χ(v) χ̂.
pub fn restriction_quotient(k: usize) -> Result<HopfQuotient> {
    let g = make_group(GroupKind::Dihedral(k));
    let v = klein_subgroup(&g)?;
    let order = dihedral_order(k);
    let source = function_algebra(&g, order);
    let klein = make_group(GroupKind::Klein);
    let target = group_algebra(&klein, order);
    let map = (0..g.order())
        .map(|x| {
            if v.contains(&x) {
                SparseVec::from_pairs(
                    (0..4).map(|chi| (chi, CycNum::from_ratio(order, klein_character(&g, chi, x), 4))),
                )
            } else {
                SparseVec::new()
            }
        })
        .collect();
    Ok(HopfQuotient { source, target, map, target_group: Some(klein) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{check_cqg, verify_hopf};

    #[test]
    fn group_constructors() {
        let d4 = make_group(GroupKind::Dihedral(4));
        assert_eq!(d4.order(), 8);
        assert!(d4.check_axioms());
        assert_eq!(d4.generators(&(0..8).collect::<Vec<_>>()).len(), 2);
        let k = make_group(GroupKind::Klein);
        assert!((0..4).filter(|&g| g != k.identity).all(|g| k.element_order(g) == 2));
        assert_eq!(make_group(GroupKind::Cyclic(1)).order(), 1);
        // s r s = r⁻¹
        let (r, s) = (d4.dihedral(1, 0), d4.dihedral(0, 1));
        assert_eq!(d4.mul(d4.mul(s, r), s), d4.inv(r));
    }

    #[test]
    fn subgroup_counts() {
        let d4 = make_group(GroupKind::Dihedral(4));
        assert_eq!(subgroups(&d4).len(), 10);
        assert_eq!(subgroup_conjugacy_classes(&d4).len(), 8);
        let k = make_group(GroupKind::Klein);
        assert_eq!(subgroup_conjugacy_classes(&k).len(), 5);
        let c6 = make_group(GroupKind::Cyclic(6));
        let orders: Vec<usize> = subgroups(&c6).iter().map(|s| s.len()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn algebras_of_small_groups() {
        let fk = function_algebra(&make_group(GroupKind::Klein), 4);
        assert_eq!(fk.dim(), 4);
        assert!(fk.is_commutative() && fk.is_cocommutative());
        let cd3 = group_algebra(&make_group(GroupKind::Dihedral(3)), 12);
        assert_eq!(cd3.dim(), 6);
        assert!(cd3.is_cocommutative() && !cd3.is_commutative());
        assert!(check_cqg(&cd3).passed());
        let f1 = function_algebra(&make_group(GroupKind::Cyclic(1)), 4);
        assert_eq!(f1.dim(), 1);
        assert!(verify_hopf(&f1).unwrap().all_passed());
    }

    #[test]
    fn restriction_quotients() {
        let q2 = restriction_quotient(2).unwrap();
        q2.certify().unwrap();
        assert_eq!(Echelon::from_rows(q2.map.iter().cloned()).rank(), 4);
        let q4 = restriction_quotient(4).unwrap();
        q4.certify().unwrap();
        let kernel = crate::linalg::nullspace(
            (0..4).map(|c| SparseVec::from_pairs((0..8).filter_map(|j| q4.map[j].get(c).map(|x| (j, x.clone()))))),
            8,
            4,
        );
        assert_eq!(kernel.len(), 4);
        assert!(matches!(restriction_quotient(3), Err(QgwError::NoKleinSubgroup(3))));
    }

    #[test]
    fn trivial_quotients_certify() {
        let f = function_algebra(&make_group(GroupKind::Dihedral(3)), 12);
        identity_quotient(&f).certify().unwrap();
        counit_quotient(&f).certify().unwrap();
        let g = make_group(GroupKind::Dihedral(3));
        restriction_to_subgroup(&g, &[0, 1, 2], 12).unwrap().certify().unwrap();
    }

    #[test]
    fn function_and_group_algebras_are_dual() {
        // ⟨δ_g, γ⟩ = [g = γ]: the product of F(G) is dual to Δ of ℂG and
        // Δ of F(G) is dual to the product of ℂG.
        let g = make_group(GroupKind::Dihedral(3));
        let f = function_algebra(&g, 12);
        let c = group_algebra(&g, 12);
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    // ⟨δ_a δ_b, x⟩ = ⟨δ_a⊗δ_b, Δx⟩
                    let lhs = f.algebra.mult[a][b].get(x).is_some();
                    let rhs = c.comult[x].iter().any(|(p, q, _)| *p == a && *q == b);
                    assert_eq!(lhs, rhs);
                    // ⟨Δδ_x, a⊗b⟩ = ⟨δ_x, ab⟩
                    let lhs = f.comult[x].iter().any(|(p, q, _)| *p == a && *q == b);
                    let rhs = c.algebra.mult[a][b].get(x).is_some();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
