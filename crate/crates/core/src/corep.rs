//! Representations of finite groups and their subgroups, comodules over
//! Hopf algebras, module algebras, induction and Frobenius reciprocity, and
//! the transport of comodule algebras along a cocycle twist.

use rayon::prelude::*;

use crate::algebra::{Algebra, BlockLayout};
use crate::cyclo::CycNum;
use crate::error::{QgwError, Result};
use crate::groups::{FiniteGroup, GroupKind};
use crate::hopf::{haar_state, tensor2_from_pairs, Functional, HopfAlgebraData};
use crate::linalg::{inverse, mat_mul, nullspace, Accumulator, Mat, SparseVec};
use crate::twist::Cocycle;

/// A linear representation of a subgroup `domain` of `group`; `mats[p][j]`
/// is the image of e_j under the p-th element of `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub group: FiniteGroup,
    pub domain: Vec<usize>,
    pub dim: usize,
    pub order: u32,
    pub mats: Vec<Vec<SparseVec>>,
    pub label: String,
}

impl Rep {
    pub fn from_fn<F: Fn(usize) -> Vec<SparseVec>>(
        group: &FiniteGroup,
        domain: &[usize],
        dim: usize,
        order: u32,
        label: impl Into<String>,
        f: F,
    ) -> Rep {
        let mut domain = domain.to_vec();
        domain.sort_unstable();
        let mats = domain.iter().map(|&g| f(g)).collect();
        Rep { group: group.clone(), domain, dim, order, mats, label: label.into() }
    }

    pub fn trivial(group: &FiniteGroup, domain: &[usize], order: u32) -> Rep {
        Rep::from_fn(group, domain, 1, order, "triv", |_| vec![SparseVec::unit(0, order)])
    }

    /// One-dimensional representation from a scalar character.
    pub fn character<F: Fn(usize) -> CycNum>(
        group: &FiniteGroup,
        domain: &[usize],
        order: u32,
        label: impl Into<String>,
        chi: F,
    ) -> Rep {
        Rep::from_fn(group, domain, 1, order, label, |g| vec![SparseVec::from_pairs([(0, chi(g))])])
    }

    fn pos(&self, g: usize) -> usize {
        self.domain.binary_search(&g).expect("element outside the representation's domain")
    }

    pub fn matrix(&self, g: usize) -> &[SparseVec] {
        &self.mats[self.pos(g)]
    }

    pub fn apply(&self, g: usize, v: &SparseVec) -> SparseVec {
        let m = self.matrix(g);
        let mut acc = Accumulator::new(self.order);
        for (j, c) in v.iter() {
            acc.add_scaled(&m[*j], c);
        }
        acc.finish()
    }

    pub fn entry(&self, g: usize, i: usize, j: usize) -> CycNum {
        self.matrix(g)[j].get(i).cloned().unwrap_or_else(|| CycNum::zero(self.order))
    }

    pub fn is_homomorphism(&self) -> bool {
        let g = &self.group;
        self.domain.par_iter().all(|&x| {
            self.domain.iter().all(|&y| {
                let xy = g.mul(x, y);
                (0..self.dim).all(|j| self.apply(x, &self.matrix(y)[j]) == self.matrix(xy)[j])
            })
        })
    }

    pub fn restrict(&self, sub: &[usize]) -> Result<Rep> {
        if !self.group.is_subgroup(sub) || sub.iter().any(|x| self.domain.binary_search(x).is_err()) {
            return Err(QgwError::NotSubgroup(format!("{:?} is not a subgroup of the domain", sub)));
        }
        Ok(Rep::from_fn(&self.group, sub, self.dim, self.order, self.label.clone(), |g| self.matrix(g).to_vec()))
    }

    pub fn tensor(&self, other: &Rep) -> Rep {
        let (d1, d2) = (self.dim, other.dim);
        Rep::from_fn(&self.group, &self.domain, d1 * d2, self.order, format!("{}x{}", self.label, other.label), |g| {
            let a = self.matrix(g);
            let b = other.matrix(g);
            let mut cols = Vec::with_capacity(d1 * d2);
            for j1 in 0..d1 {
                for j2 in 0..d2 {
                    let mut acc = Accumulator::new(self.order);
                    for (i1, x) in a[j1].iter() {
                        for (i2, y) in b[j2].iter() {
                            acc.add(i1 * d2 + i2, &(x * y));
                        }
                    }
                    cols.push(acc.finish());
                }
            }
            cols
        })
    }

    /// Conjugated representation x ↦ ρ(g x g⁻¹) on g⁻¹ L g.
    pub fn conjugate(&self, g: usize) -> Rep {
        let grp = &self.group;
        let sub = grp.conjugate_subgroup(&self.domain, g);
        Rep::from_fn(grp, &sub, self.dim, self.order, self.label.clone(), |x| self.matrix(grp.conj(g, x)).to_vec())
    }
}

/// dim Hom_L(V, W), with L the common domain; only generators are imposed.
pub fn hom_dim(v: &Rep, w: &Rep) -> usize {
    hom_space(v, w).len()
}

/// Intertwiners T: V → W, as vectors over the index a·dim V + b of T_ab.
pub fn hom_space(v: &Rep, w: &Rep) -> Vec<SparseVec> {
    assert_eq!(v.domain, w.domain, "representations on different subgroups");
    let (dv, dw) = (v.dim, w.dim);
    let order = v.order;
    let gens = v.group.generators(&v.domain);
    let mut rows = Vec::new();
    for &g in &gens {
        let pv = v.matrix(g);
        let pw = w.matrix(g);
        let mut eqs: Vec<Accumulator> = (0..dw * dv).map(|_| Accumulator::new(order)).collect();
        // (T ρ_V)_ij = Σ_k T_ik ρ_V_kj
        for i in 0..dw {
            for j in 0..dv {
                for (k, c) in pv[j].iter() {
                    eqs[i * dv + j].add(i * dv + k, c);
                }
            }
        }
        // (ρ_W T)_ij = Σ_k ρ_W_ik T_kj
        for k in 0..dw {
            for (i, c) in pw[k].iter() {
                let mc = -c;
                for j in 0..dv {
                    eqs[i * dv + j].add(k * dv + j, &mc);
                }
            }
        }
        rows.extend(eqs.into_iter().map(|a| a.finish()).filter(|r| !r.is_empty()));
    }
    nullspace(rows, dw * dv, order)
}

/// Multiplicities of the (pairwise inequivalent, absolutely irreducible)
/// `irreps` in `v`.
pub fn multiplicities(v: &Rep, irreps: &[Rep]) -> Vec<usize> {
    irreps.par_iter().map(|r| hom_dim(r, v)).collect()
}

fn zeta(order: u32, k: usize, j: i64) -> CycNum {
    CycNum::root_of_unity(order, (order as usize / k) as i64 * j)
}

/// Irreducible representations of D_K, C_k or the Klein group, in the fixed
/// order: characters first (triv, sgn, chi3, chi4 for D_K), then V_l.
pub fn irreducible_reps(g: &FiniteGroup, order: u32) -> Result<Vec<Rep>> {
    let all: Vec<usize> = (0..g.order()).collect();
    match g.kind {
        GroupKind::Dihedral(k) => {
            let mut out = Vec::new();
            let chars: &[(&str, i64, i64)] = if k % 2 == 0 {
                &[("triv", 1, 1), ("sgn", 1, -1), ("chi3", -1, 1), ("chi4", -1, -1)]
            } else {
                &[("triv", 1, 1), ("sgn", 1, -1)]
            };
            for &(name, er, es) in chars {
                out.push(Rep::character(g, &all, order, name, |x| {
                    let (a, e) = g.dihedral_parts(x);
                    let v = er.pow(a as u32 % 2) * es.pow(e as u32);
                    CycNum::from_int(order, v)
                }));
            }
            for l in 1..k.div_ceil(2) {
                out.push(Rep::from_fn(g, &all, 2, order, format!("V{}", l), |x| {
                    let (a, e) = g.dihedral_parts(x);
                    let d0 = zeta(order, k, (l * a) as i64);
                    let d1 = zeta(order, k, -((l * a) as i64));
                    // diag(ζ^{la}, ζ^{-la}) · swap^e
                    if e == 0 {
                        vec![SparseVec::from_pairs([(0, d0)]), SparseVec::from_pairs([(1, d1)])]
                    } else {
                        vec![SparseVec::from_pairs([(1, d1)]), SparseVec::from_pairs([(0, d0)])]
                    }
                }));
            }
            Ok(out)
        }
        GroupKind::Cyclic(k) => Ok((0..k)
            .map(|j| Rep::character(g, &all, order, format!("chi{}", j), |x| zeta(order, k, (j * x) as i64)))
            .collect()),
        GroupKind::Klein => Ok((0..4)
            .map(|chi| {
                Rep::character(g, &all, order, format!("chi({},{})", chi >> 1, chi & 1), |x| {
                    let s = ((chi >> 1) & (x >> 1)) ^ (chi & x & 1);
                    CycNum::from_int(order, if s == 1 { -1 } else { 1 })
                })
            })
            .collect()),
        GroupKind::Table => Err(QgwError::BadKind("irreducibles need a dihedral, cyclic or Klein group".into())),
    }
}

/// Shape of a subgroup of D_K: rotations ⟨r^d⟩ and optionally the
/// reflection r^b s with 0 ≤ b < d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgroupShape {
    pub big_k: usize,
    pub step: usize,
    pub reflection: Option<usize>,
}

impl SubgroupShape {
    /// Order of the rotation part.
    pub fn k(&self) -> usize {
        self.big_k / self.step
    }

    pub fn is_dihedral(&self) -> bool {
        self.reflection.is_some()
    }

    /// (m, e) with x = (r^d)^m (r^b s)^e.
    pub fn coords(&self, g: &FiniteGroup, x: usize) -> (usize, usize) {
        let (a, e) = g.dihedral_parts(x);
        let b = if e == 1 { self.reflection.expect("reflection in a cyclic subgroup") } else { 0 };
        let m = ((a + self.big_k - b) % self.big_k) / self.step;
        (m, e)
    }

    pub fn elements(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.k()).map(|m| g.dihedral((m * self.step) as i64, 0)).collect();
        if let Some(b) = self.reflection {
            out.extend((0..self.k()).map(|m| g.dihedral((m * self.step + b) as i64, 1)));
        }
        out.sort_unstable();
        out
    }
}

pub fn subgroup_shape(g: &FiniteGroup, sub: &[usize]) -> Result<SubgroupShape> {
    let GroupKind::Dihedral(big_k) = g.kind else {
        return Err(QgwError::BadKind("subgroup shapes are defined for dihedral groups".into()));
    };
    if !g.is_subgroup(sub) {
        return Err(QgwError::NotSubgroup(format!("{:?}", sub)));
    }
    let rot: Vec<usize> = sub.iter().map(|&x| g.dihedral_parts(x)).filter(|p| p.1 == 0).map(|p| p.0).collect();
    let step = big_k / rot.len();
    let reflection = sub.iter().map(|&x| g.dihedral_parts(x)).filter(|p| p.1 == 1).map(|p| p.0 % step).min();
    Ok(SubgroupShape { big_k, step, reflection })
}

/// One-dimensional characters of a subgroup of D_K.
pub fn subgroup_characters(g: &FiniteGroup, sub: &[usize], order: u32) -> Result<Vec<Rep>> {
    let shape = subgroup_shape(g, sub)?;
    let k = shape.k();
    if !shape.is_dihedral() {
        return Ok((0..k)
            .map(|j| {
                Rep::character(g, sub, order, format!("chi{}", j), |x| zeta(order, k, (j * shape.coords(g, x).0) as i64))
            })
            .collect());
    }
    let rot_signs: &[i64] = if k % 2 == 0 { &[1, -1] } else { &[1] };
    let mut out = Vec::new();
    for &er in rot_signs {
        for es in [1i64, -1] {
            out.push(Rep::character(g, sub, order, format!("eps({},{})", er, es), |x| {
                let (m, e) = shape.coords(g, x);
                CycNum::from_int(order, er.pow(m as u32 % 2) * es.pow(e as u32))
            }));
        }
    }
    Ok(out)
}

/// A projective representation π(x)π(y) = μ(x,y) π(xy).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveRep {
    pub group: FiniteGroup,
    pub domain: Vec<usize>,
    pub dim: usize,
    pub order: u32,
    pub mats: Vec<Mat>,
}

impl ProjectiveRep {
    fn pos(&self, g: usize) -> usize {
        self.domain.binary_search(&g).expect("element outside the domain")
    }

    pub fn matrix(&self, g: usize) -> &Mat {
        &self.mats[self.pos(g)]
    }

    /// μ(x, y), if π(x)π(y) is a scalar multiple of π(xy).
    pub fn multiplier(&self, x: usize, y: usize) -> Option<CycNum> {
        let lhs = mat_mul(self.matrix(x), self.matrix(y), self.order);
        let rhs = self.matrix(self.group.mul(x, y));
        let (i, j) = (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| (i, j))).find(|&(i, j)| !rhs[i][j].is_zero())?;
        let mu = lhs[i][j].try_div(&rhs[i][j]).ok()?;
        let ok = (0..self.dim).all(|a| (0..self.dim).all(|b| lhs[a][b] == &mu * &rhs[a][b]));
        ok.then_some(mu)
    }

    pub fn verify(&self) -> bool {
        self.domain.iter().all(|&x| self.domain.iter().all(|&y| self.multiplier(x, y).is_some()))
    }

    /// The module algebra M_n with x ▷ T = π(x) T π(x)⁻¹.
    pub fn adjoint_action(&self, label: impl Into<String>) -> ModuleAlgebra {
        let n = self.dim;
        let layout = BlockLayout::new(vec![n]);
        let algebra = Algebra::multimatrix(&layout, self.order);
        let rep = Rep::from_fn(&self.group, &self.domain, n * n, self.order, label, |x| {
            let u = self.matrix(x);
            let ui = inverse(u, self.order).expect("invertible projective matrix");
            let mut cols = Vec::with_capacity(n * n);
            for p in 0..n {
                for q in 0..n {
                    // U E_pq U⁻¹ = Σ U_ap U⁻¹_qb E_ab
                    let mut acc = Accumulator::new(self.order);
                    for a in 0..n {
                        if u[a][p].is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            if !ui[q][b].is_zero() {
                                acc.add(a * n + b, &(&u[a][p] * &ui[q][b]));
                            }
                        }
                    }
                    cols.push(acc.finish());
                }
            }
            cols
        });
        ModuleAlgebra { rep, algebra }
    }
}

/// π(r^{md}(r^b s)^e) = diag(ζ_k^{lm}, 1)·swap^e on a dihedral subgroup of
/// D_K with rotation part of order k.
pub fn m2_projective(g: &FiniteGroup, sub: &[usize], l: usize, order: u32) -> Result<ProjectiveRep> {
    let shape = subgroup_shape(g, sub)?;
    if !shape.is_dihedral() {
        return Err(QgwError::BadParams("the M2 action needs a dihedral subgroup".into()));
    }
    let k = shape.k();
    let mut domain = sub.to_vec();
    domain.sort_unstable();
    let mats = domain
        .iter()
        .map(|&x| {
            let (m, e) = shape.coords(g, x);
            let d = zeta(order, k, (l * m) as i64);
            let z = CycNum::zero(order);
            let one = CycNum::one(order);
            if e == 0 {
                vec![vec![d, z.clone()], vec![z, one]]
            } else {
                vec![vec![z.clone(), d], vec![one, z]]
            }
        })
        .collect();
    Ok(ProjectiveRep { group: g.clone(), domain, dim: 2, order, mats })
}

pub fn m2_action(g: &FiniteGroup, sub: &[usize], l: usize, order: u32) -> Result<ModuleAlgebra> {
    Ok(m2_projective(g, sub, l, order)?.adjoint_action(format!("M2[l={}]", l)))
}

/// A finite-dimensional *-algebra with an action of a subgroup by
/// *-automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAlgebra {
    pub rep: Rep,
    pub algebra: Algebra,
}

impl ModuleAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// The trivial action on ℂ.
    pub fn scalars(group: &FiniteGroup, domain: &[usize], order: u32) -> ModuleAlgebra {
        ModuleAlgebra { rep: Rep::trivial(group, domain, order), algebra: Algebra::multimatrix(&BlockLayout::new(vec![1]), order) }
    }

    /// First failing property, if any.
    pub fn validate(&self) -> Option<String> {
        if !self.rep.is_homomorphism() {
            return Some("action is not a homomorphism".into());
        }
        let alg = &self.algebra;
        let n = alg.dim;
        for &g in &self.rep.domain {
            let m = self.rep.matrix(g);
            if self.rep.apply(g, &alg.unit) != alg.unit {
                return Some(format!("{} is not unital", self.rep.group.labels[g]));
            }
            for i in 0..n {
                if self.rep.apply(g, &alg.star[i]) != alg.star_of(&m[i]) {
                    return Some(format!("{} does not commute with the star", self.rep.group.labels[g]));
                }
                for j in 0..n {
                    if self.rep.apply(g, &alg.mult[i][j]) != alg.mul(&m[i], &m[j]) {
                        return Some(format!("{} is not multiplicative", self.rep.group.labels[g]));
                    }
                }
            }
        }
        None
    }

    /// Fixed-point subalgebra A^G, computed from generators.
    pub fn fixed_space(&self) -> Vec<SparseVec> {
        let n = self.dim();
        let order = self.algebra.order;
        let gens = self.rep.group.generators(&self.rep.domain);
        let mut rows = Vec::new();
        for &g in &gens {
            // (α_g - 1) x = 0, row i: Σ_j (α_g)_ij x_j - x_i
            let m = self.rep.matrix(g);
            let mut eqs: Vec<Accumulator> = (0..n).map(|_| Accumulator::new(order)).collect();
            for j in 0..n {
                for (i, c) in m[j].iter() {
                    eqs[*i].add(j, c);
                }
                eqs[j].add(j, &CycNum::from_int(order, -1));
            }
            rows.extend(eqs.into_iter().map(|a| a.finish()).filter(|r| !r.is_empty()));
        }
        nullspace(rows, n, order)
    }
}

pub fn induce_rep(g: &FiniteGroup, sub: &[usize], w: &Rep) -> Result<Rep> {
    let mut sorted = sub.to_vec();
    sorted.sort_unstable();
    if !g.is_subgroup(&sorted) || sorted != w.domain {
        return Err(QgwError::NotSubgroup("inducing representation lives on a different subgroup".into()));
    }
    let reps = g.left_coset_reps(&sorted);
    let m = reps.len();
    let mut coset_of = vec![0usize; g.order()];
    for (i, &c) in reps.iter().enumerate() {
        for &l in &sorted {
            coset_of[g.mul(c, l)] = i;
        }
    }
    let d = w.dim;
    let order = w.order;
    let all: Vec<usize> = (0..g.order()).collect();
    Ok(Rep::from_fn(g, &all, m * d, order, format!("Ind({})", w.label), |x| {
        // (x▷F)_i = α_{l⁻¹}(F_j) where x⁻¹ c_i = c_j l
        let xi = g.inv(x);
        let mut cols = vec![SparseVec::new(); m * d];
        for (i, &ci) in reps.iter().enumerate() {
            let y = g.mul(xi, ci);
            let j = coset_of[y];
            let l = g.mul(g.inv(reps[j]), y);
            let li = g.inv(l);
            for t in 0..d {
                let col = &w.matrix(li)[t];
                cols[j * d + t] = SparseVec::from_pairs(col.iter().map(|(s, c)| (i * d + s, c.clone())));
            }
        }
        cols
    }))
}

/// Induced module algebra: L-equivariant functions G → A with pointwise
/// operations, realized on one copy of A per left coset.
pub fn induce(g: &FiniteGroup, sub: &[usize], a: &ModuleAlgebra) -> Result<ModuleAlgebra> {
    let rep = induce_rep(g, sub, &a.rep)?;
    let m = g.order() / sub.len();
    let d = a.dim();
    let order = a.algebra.order;
    let shift = |v: &SparseVec, i: usize| SparseVec::from_pairs(v.iter().map(|(s, c)| (i * d + s, c.clone())));
    let n = m * d;
    let mut mult = vec![vec![SparseVec::new(); n]; n];
    let mut star = Vec::with_capacity(n);
    let mut unit = SparseVec::new();
    for i in 0..m {
        unit = unit.add(&shift(&a.algebra.unit, i));
        for s in 0..d {
            star.push(shift(&a.algebra.star[s], i));
            for t in 0..d {
                mult[i * d + s][i * d + t] = shift(&a.algebra.mult[s][t], i);
            }
        }
    }
    let algebra = Algebra { dim: n, order, mult, unit, star };
    Ok(ModuleAlgebra { rep, algebra })
}

/// (dim Hom_G(V, Ind W), dim Hom_L(V|_L, W)).
pub fn frobenius_dims(v: &Rep, sub: &[usize], w: &Rep) -> Result<(usize, usize)> {
    let ind = induce_rep(&v.group, sub, w)?;
    let lhs = hom_dim(v, &ind);
    let rhs = hom_dim(&v.restrict(&w.domain)?, w);
    Ok((lhs, rhs))
}

/// A right comodule with coefficient matrix u: δ(e_j) = Σ_i e_i ⊗ u_ij.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    pub parent: u64,
    pub dim: usize,
    pub u: Vec<Vec<SparseVec>>,
    /// Set once u has been verified unitary; false also covers unchecked.
    pub unitary: bool,
    pub label: String,
}

impl Comodule {
    fn build(h: &HopfAlgebraData, u: Vec<Vec<SparseVec>>, label: String) -> Comodule {
        let mut c = Comodule { parent: h.fingerprint(), dim: u.len(), u, unitary: false, label };
        c.unitary = c.is_unitary(h);
        c
    }

    /// Wrap a coefficient matrix; call `is_comatrix` to check it.
    pub fn from_matrix(h: &HopfAlgebraData, u: Vec<Vec<SparseVec>>, label: String) -> Comodule {
        Comodule::build(h, u, label)
    }

    pub fn trivial(h: &HopfAlgebraData) -> Comodule {
        Comodule::build(h, vec![vec![h.one()]], "triv".into())
    }

    /// u_ij = Σ_g ρ(g)_ij δ_g over F(G).
    pub fn from_rep(h: &HopfAlgebraData, rep: &Rep) -> Comodule {
        let n = rep.dim;
        let mut u = vec![vec![Vec::new(); n]; n];
        for (p, &g) in rep.domain.iter().enumerate() {
            for j in 0..n {
                for (i, c) in rep.mats[p][j].iter() {
                    u[*i][j].push((g, c.clone()));
                }
            }
        }
        let u = u.into_iter().map(|row| row.into_iter().map(SparseVec::from_pairs).collect()).collect();
        Comodule::build(h, u, rep.label.clone())
    }

    /// H coacting on itself by Δ.
    pub fn regular(h: &HopfAlgebraData) -> Comodule {
        let n = h.dim();
        let mut u = vec![vec![Vec::new(); n]; n];
        for j in 0..n {
            for (p, q, c) in &h.comult[j] {
                u[*p][j].push((*q, c.clone()));
            }
        }
        let u = u.into_iter().map(|row| row.into_iter().map(SparseVec::from_pairs).collect()).collect();
        Comodule::build(h, u, "regular".into())
    }

    pub fn tensor(&self, other: &Comodule, h: &HopfAlgebraData) -> Comodule {
        let (d1, d2) = (self.dim, other.dim);
        let mut u = vec![vec![SparseVec::new(); d1 * d2]; d1 * d2];
        for i in 0..d1 {
            for k in 0..d2 {
                for j in 0..d1 {
                    for l in 0..d2 {
                        u[i * d2 + k][j * d2 + l] = h.mul(&self.u[i][j], &other.u[k][l]);
                    }
                }
            }
        }
        Comodule::build(h, u, format!("{}x{}", self.label, other.label))
    }

    /// Δu_ij = Σ_k u_ik ⊗ u_kj and ε(u_ij) = δ_ij.
    pub fn is_comatrix(&self, h: &HopfAlgebraData) -> bool {
        let d = self.dim;
        (0..d).into_par_iter().all(|i| {
            (0..d).all(|j| {
                let lhs = h.comult_of(&self.u[i][j]);
                let mut pairs = Vec::new();
                for k in 0..d {
                    for (a, x) in self.u[i][k].iter() {
                        for (b, y) in self.u[k][j].iter() {
                            pairs.push(((*a, *b), x * y));
                        }
                    }
                }
                let eps = h.counit_of(&self.u[i][j]);
                lhs == tensor2_from_pairs(pairs) && eps == CycNum::from_int(h.order(), (i == j) as i64)
            })
        })
    }

    /// Σ_k u_ki^* u_kj = δ_ij 1.
    pub fn is_unitary(&self, h: &HopfAlgebraData) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                let mut acc = SparseVec::new();
                for k in 0..d {
                    acc = acc.add(&h.mul(&h.star_of(&self.u[k][i]), &self.u[k][j]));
                }
                acc == if i == j { h.one() } else { SparseVec::new() }
            })
        })
    }
}

/// Intertwiners T: W → V of comodules (u^V T = T u^W), as a basis of
/// vectors over the index a·dim W + b.
pub fn comodule_hom_space(h: &HopfAlgebraData, w: &Comodule, v: &Comodule) -> Vec<SparseVec> {
    let (dv, dw) = (v.dim, w.dim);
    let order = h.order();
    let rows: Vec<SparseVec> = (0..dv * dw)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let (i, j) = (ij / dw, ij % dw);
            // coordinate c of Σ_k u^V_ik T_kj - Σ_k T_ik u^W_kj
            let mut by_coord: std::collections::BTreeMap<usize, Accumulator> = Default::default();
            for k in 0..dv {
                for (c, x) in v.u[i][k].iter() {
                    by_coord.entry(*c).or_insert_with(|| Accumulator::new(order)).add(k * dw + j, x);
                }
            }
            for k in 0..dw {
                for (c, x) in w.u[k][j].iter() {
                    by_coord.entry(*c).or_insert_with(|| Accumulator::new(order)).add(i * dw + k, &-x);
                }
            }
            by_coord.into_values().map(|a| a.finish()).filter(|r| !r.is_empty()).collect::<Vec<_>>()
        })
        .collect();
    nullspace(rows, dv * dw, order)
}

/// Multiplicity of each irreducible comodule in `v`.
pub fn decompose(h: &HopfAlgebraData, v: &Comodule, irreps: &[Comodule]) -> Vec<usize> {
    irreps.par_iter().map(|w| comodule_hom_space(h, w, v).len()).collect()
}

/// χ_v = Σ_i u_ii.
pub fn comodule_character(h: &HopfAlgebraData, v: &Comodule) -> SparseVec {
    let mut acc = Accumulator::new(h.order());
    for i in 0..v.dim {
        acc.add_scaled(&v.u[i][i], &CycNum::one(h.order()));
    }
    acc.finish()
}

/// Irreducible comodules with their characters and the Haar state, for
/// multiplicities by orthogonality: mult_w(v) = h(χ_w^* χ_v). Exact for
/// finite-dimensional (hence Kac type) algebras.
#[derive(Clone, Debug)]
pub struct Irreps {
    pub comodules: Vec<Comodule>,
    conj_chars: Vec<SparseVec>,
    haar: Functional,
}

impl Irreps {
    pub fn new(h: &HopfAlgebraData, comodules: Vec<Comodule>) -> Result<Irreps> {
        let haar = haar_state(h)?;
        let conj_chars = comodules.iter().map(|w| h.star_of(&comodule_character(h, w))).collect();
        Ok(Irreps { comodules, conj_chars, haar })
    }

    pub fn len(&self) -> usize {
        self.comodules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comodules.is_empty()
    }

    pub fn decompose(&self, h: &HopfAlgebraData, v: &Comodule) -> Result<Vec<usize>> {
        let chi = comodule_character(h, v);
        self.conj_chars
            .iter()
            .map(|cw| {
                let m = self.haar.eval(&h.mul(cw, &chi));
                m.to_rational()
                    .and_then(|r| r.is_integer().then(|| r.to_integer()))
                    .and_then(|n| usize::try_from(n).ok())
                    .ok_or_else(|| QgwError::NotCQG(format!("character pairing {} is not a multiplicity", m)))
            })
            .collect()
    }
}

/// Irreducible comodules of F(G) for G of the given kind.
pub fn irreducibles(h: &HopfAlgebraData, g: &FiniteGroup, kind: GroupKind) -> Result<Vec<Comodule>> {
    if g.kind != kind {
        return Err(QgwError::BadKind(format!("group is {:?}, requested {:?}", g.kind, kind)));
    }
    Ok(irreducible_reps(g, h.order())?.iter().map(|r| Comodule::from_rep(h, r)).collect())
}

/// A right comodule algebra: δ(e_j) = Σ_i e_i ⊗ u_ij multiplicative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleAlgebra {
    pub algebra: Algebra,
    pub comodule: Comodule,
}

impl ComoduleAlgebra {
    fn coact(&self, a: &SparseVec, h: &HopfAlgebraData) -> Vec<(usize, SparseVec)> {
        // Σ_i e_i ⊗ (Σ_j a_j u_ij)
        (0..self.algebra.dim)
            .filter_map(|i| {
                let mut acc = Accumulator::new(h.order());
                for (j, c) in a.iter() {
                    acc.add_scaled(&self.comodule.u[i][*j], c);
                }
                let v = acc.finish();
                (!v.is_empty()).then_some((i, v))
            })
            .collect()
    }

    /// First failing comodule-algebra property over `h`, if any.
    pub fn validate(&self, h: &HopfAlgebraData) -> Option<String> {
        let alg = &self.algebra;
        let n = alg.dim;
        if let Some((i, j, k)) = alg.associativity_witness() {
            return Some(format!("not associative at ({}, {}, {})", i, j, k));
        }
        if !self.comodule.is_comatrix(h) {
            return Some("coefficients are not a comatrix".into());
        }
        let as_pairs = |v: Vec<(usize, SparseVec)>| -> Vec<((usize, usize), CycNum)> {
            v.into_iter().flat_map(|(i, x)| x.entries.into_iter().map(move |(c, y)| ((i, c), y))).collect()
        };
        if tensor2_from_pairs(as_pairs(self.coact(&alg.unit, h))) != tensor2_from_pairs(as_pairs(
            alg.unit.iter().map(|(i, c)| (*i, h.one().scale(c))).collect(),
        )) {
            return Some("coaction is not unital".into());
        }
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            let di = self.coact(&alg.basis(i), h);
            for j in 0..n {
                let dj = self.coact(&alg.basis(j), h);
                let lhs = tensor2_from_pairs(as_pairs(self.coact(&alg.mult[i][j], h)));
                let mut pairs = Vec::new();
                for (p, x) in &di {
                    for (q, y) in &dj {
                        let xy = h.mul(x, y);
                        for (r, c) in alg.mult[*p][*q].iter() {
                            for (s, d) in xy.iter() {
                                pairs.push(((*r, *s), c * d));
                            }
                        }
                    }
                }
                if lhs != tensor2_from_pairs(pairs) {
                    return Some(format!("coaction not multiplicative at ({}, {})", i, j));
                }
            }
            None
        });
        if bad.is_some() {
            return bad;
        }
        None
    }

    /// δ(a^*) = δ(a)^* with the star of `h`.
    pub fn star_compatible(&self, h: &HopfAlgebraData) -> bool {
        let alg = &self.algebra;
        if alg.star_witness().is_some() {
            return false;
        }
        (0..alg.dim).all(|j| {
            let lhs: Vec<((usize, usize), CycNum)> = self
                .coact(&alg.star[j], h)
                .into_iter()
                .flat_map(|(i, x)| x.entries.into_iter().map(move |(c, y)| ((i, c), y)))
                .collect();
            let mut rhs = Vec::new();
            for (i, x) in self.coact(&alg.basis(j), h) {
                let xs = h.star_of(&x);
                let es = alg.star_of(&alg.basis(i));
                for (p, c) in es.iter() {
                    for (q, d) in xs.iter() {
                        rhs.push(((*p, *q), c * d));
                    }
                }
            }
            tensor2_from_pairs(lhs) == tensor2_from_pairs(rhs)
        })
    }
}

/// δ(a) = Σ_g (g▷a) ⊗ δ_g over F(G).
pub fn module_to_comodule(h: &HopfAlgebraData, a: &ModuleAlgebra) -> Result<ComoduleAlgebra> {
    if a.rep.domain.len() != a.rep.group.order() || h.dim() != a.rep.group.order() {
        return Err(QgwError::AlgebraMismatch);
    }
    let mut comodule = Comodule::from_rep(h, &a.rep);
    comodule.label = a.rep.label.clone();
    Ok(ComoduleAlgebra { algebra: a.algebra.clone(), comodule })
}

/// Inverse of `module_to_comodule`: g▷e_j = Σ_i ⟨u_ij, g⟩ e_i.
pub fn comodule_to_module(g: &FiniteGroup, ca: &ComoduleAlgebra) -> ModuleAlgebra {
    let n = ca.algebra.dim;
    let order = ca.algebra.order;
    let all: Vec<usize> = (0..g.order()).collect();
    let rep = Rep::from_fn(g, &all, n, order, ca.comodule.label.clone(), |x| {
        (0..n)
            .map(|j| SparseVec::from_pairs((0..n).filter_map(|i| ca.comodule.u[i][j].get(x).map(|c| (i, c.clone())))))
            .collect()
    });
    ModuleAlgebra { rep, algebra: ca.algebra.clone() }
}

/// The transported comodule algebra over H^λ: same coaction, product
/// a∘b = a₀b₀ λ⁻¹(a₁, b₁). The cocycle hits the coacting legs on the right,
/// which makes δ multiplicative for the two-sided twisted product of H^λ.
pub fn transport(ca: &ComoduleAlgebra, lam: &Cocycle, twisted: &HopfAlgebraData) -> Result<ComoduleAlgebra> {
    let out = transport_unchecked(ca, lam, twisted);
    if let Some(w) = out.validate(twisted) {
        return Err(QgwError::TransportError(w));
    }
    Ok(out)
}

/// The transported product without re-validating the comodule algebra
/// axioms; for inputs already certified elsewhere.
pub fn transport_unchecked(ca: &ComoduleAlgebra, lam: &Cocycle, twisted: &HopfAlgebraData) -> ComoduleAlgebra {
    let alg = &ca.algebra;
    let n = alg.dim;
    let order = alg.order;
    let u = &ca.comodule.u;
    let support: Vec<Vec<usize>> =
        (0..n).map(|j| (0..n).filter(|&i| !u[i][j].is_empty()).collect()).collect();
    let mult: Vec<Vec<SparseVec>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Accumulator::new(order);
                    for &p in &support[i] {
                        for &q in &support[j] {
                            let prod = &alg.mult[p][q];
                            if prod.is_empty() {
                                continue;
                            }
                            let c = lam.eval_inverse(&u[p][i], &u[q][j], order);
                            if !c.is_zero() {
                                acc.add_scaled(prod, &c);
                            }
                        }
                    }
                    acc.finish()
                })
                .collect()
        })
        .collect();
    let mut comodule = ca.comodule.clone();
    comodule.parent = twisted.fingerprint();
    ComoduleAlgebra { algebra: Algebra { dim: n, order, mult, unit: alg.unit.clone(), star: alg.star.clone() }, comodule }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{dihedral_order, function_algebra, make_group, subgroups};
    use crate::twist::dihedral_minus_one_full;

    fn dk(k: usize) -> (FiniteGroup, u32) {
        (make_group(GroupKind::Dihedral(k)), dihedral_order(k))
    }

    #[test]
    fn irreps_complete_and_inequivalent() {
        for k in [1, 2, 3, 4, 5, 6] {
            let (g, n) = dk(k);
            let irr = irreducible_reps(&g, n).unwrap();
            assert_eq!(irr.iter().map(|r| r.dim * r.dim).sum::<usize>(), 2 * k);
            for (a, r) in irr.iter().enumerate() {
                assert!(r.is_homomorphism());
                for (b, s) in irr.iter().enumerate() {
                    assert_eq!(hom_dim(r, s), (a == b) as usize);
                }
            }
        }
        let klein = make_group(GroupKind::Klein);
        assert_eq!(irreducible_reps(&klein, 4).unwrap().len(), 4);
    }

    #[test]
    fn regular_comodule_is_peter_weyl() {
        let (g, n) = dk(4);
        let h = function_algebra(&g, n);
        let irr = irreducibles(&h, &g, GroupKind::Dihedral(4)).unwrap();
        assert!(irr.iter().all(|c| c.is_comatrix(&h) && c.unitary));
        assert_eq!(decompose(&h, &Comodule::regular(&h), &irr), vec![1, 1, 1, 1, 2]);
        assert_eq!(decompose(&h, &Comodule::trivial(&h), &irr), vec![1, 0, 0, 0, 0]);
        assert!(irreducibles(&h, &g, GroupKind::Klein).is_err());
    }

    #[test]
    fn v1_tensor_square_over_d6() {
        let (g, n) = dk(6);
        let h = function_algebra(&g, n);
        let irr = irreducibles(&h, &g, GroupKind::Dihedral(6)).unwrap();
        let v1 = &irr[4];
        let sq = v1.tensor(v1, &h);
        // V1⊗V1 = triv ⊕ sgn ⊕ V2
        assert_eq!(decompose(&h, &sq, &irr), vec![1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn induction_examples() {
        let (g, n) = dk(4);
        let c4 = g.closure(&[g.dihedral(1, 0)]);
        let a = induce(&g, &c4, &ModuleAlgebra::scalars(&g, &c4, n)).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.algebra.is_commutative() && a.validate().is_none());
        let all: Vec<usize> = (0..8).collect();
        let m2 = m2_action(&g, &all, 1, n).unwrap();
        let same = induce(&g, &all, &m2).unwrap();
        assert_eq!(same.rep.mats, m2.rep.mats);
        let d2 = g.closure(&[g.dihedral(2, 0), g.dihedral(0, 1)]);
        let b = induce(&g, &d2, &m2_action(&g, &d2, 1, n).unwrap()).unwrap();
        assert_eq!(b.dim(), 8);
        assert!(b.validate().is_none());
        assert_eq!(b.fixed_space().len(), 1);
        assert!(induce(&g, &[0, 1], &ModuleAlgebra::scalars(&g, &[0, 1], n)).is_err());
    }

    #[test]
    fn m2_projective_multiplier() {
        let (g, n) = dk(4);
        let d2 = g.closure(&[g.dihedral(2, 0), g.dihedral(0, 1)]);
        let p = m2_projective(&g, &d2, 1, n).unwrap();
        assert!(p.verify());
        let z = g.dihedral(2, 0);
        let s = g.dihedral(0, 1);
        // Pauli-type relation: z s = -s z up to the multiplier
        assert_ne!(p.multiplier(z, s), p.multiplier(s, z));
    }

    #[test]
    fn frobenius_examples() {
        let (g, n) = dk(8);
        let irr = irreducible_reps(&g, n).unwrap();
        let v1 = &irr[4];
        let c8 = g.closure(&[g.dihedral(1, 0)]);
        let triv = Rep::trivial(&g, &c8, n);
        assert_eq!(frobenius_dims(v1, &c8, &triv).unwrap(), (0, 0));
        let d2 = g.closure(&[g.dihedral(4, 0), g.dihedral(0, 1)]);
        let w = m2_action(&g, &d2, 1, n).unwrap().rep;
        assert_eq!(frobenius_dims(v1, &d2, &w).unwrap(), (2, 2));
        assert_eq!(frobenius_dims(&irr[1], &d2, &w).unwrap(), (1, 1));
    }

    #[test]
    fn frobenius_all_subgroups_d4() {
        let (g, n) = dk(4);
        for sub in subgroups(&g) {
            let mut ws = subgroup_characters(&g, &sub, n).unwrap();
            let shape = subgroup_shape(&g, &sub).unwrap();
            if shape.is_dihedral() {
                for l in 1..=shape.k() / 2 {
                    ws.push(m2_action(&g, &sub, l, n).unwrap().rep);
                }
            }
            for v in irreducible_reps(&g, n).unwrap() {
                for w in &ws {
                    let (a, b) = frobenius_dims(&v, &sub, w).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn module_comodule_roundtrip_and_transport() {
        let d = dihedral_minus_one_full(4).unwrap();
        let g = make_group(GroupKind::Dihedral(4));
        let n = d.classical.order();
        let d2 = g.closure(&[g.dihedral(2, 0), g.dihedral(0, 1)]);
        let a = induce(&g, &d2, &m2_action(&g, &d2, 1, n).unwrap()).unwrap();
        let ca = module_to_comodule(&d.classical, &a).unwrap();
        assert!(ca.validate(&d.classical).is_none());
        assert!(ca.star_compatible(&d.classical));
        assert_eq!(comodule_to_module(&g, &ca), a);
        let t = transport(&ca, &d.cocycle, &d.hopf).unwrap();
        let back = transport(&t, &d.cocycle.inverse_on(&d.hopf), &d.classical).unwrap();
        assert_eq!(back.algebra.mult, ca.algebra.mult);
        let triv = transport(&ca, &Cocycle::trivial(&d.classical), &d.classical).unwrap();
        assert_eq!(triv.algebra.mult, ca.algebra.mult);
    }
}
