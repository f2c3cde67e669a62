//! Exact linear algebra over ℚ(ζ_N): sparse vectors, incremental echelon
//! forms, null spaces, affine solving and Hermitian LDL* factorization.

use std::collections::BTreeMap;

use crate::cyclo::{CycNum, Positivity};

/// Sorted list of nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec {
    pub entries: Vec<(usize, CycNum)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, order: u32) -> SparseVec {
        SparseVec { entries: vec![(i, CycNum::one(order))] }
    }

    pub fn from_dense(v: &[CycNum]) -> SparseVec {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    /// Build from unsorted (index, value) pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, CycNum)>>(pairs: I) -> SparseVec {
        let mut acc: BTreeMap<usize, CycNum> = BTreeMap::new();
        for (i, c) in pairs {
            match acc.get_mut(&i) {
                Some(x) => *x += &c,
                None => {
                    acc.insert(i, c);
                }
            }
        }
        SparseVec { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn to_dense(&self, n: usize, order: u32) -> Vec<CycNum> {
        let mut out = vec![CycNum::zero(order); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&CycNum> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|p| &self.entries[p].1)
    }

    pub fn first(&self) -> Option<&(usize, CycNum)> {
        self.entries.first()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, CycNum)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &CycNum) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x.conj())).collect() }
    }

    /// self + c·other
    pub fn axpy(&self, c: &CycNum, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, c * &other.entries[b].1));
                b += 1;
            } else {
                let v = &self.entries[a].1 + &(c * &other.entries[b].1);
                if !v.is_zero() {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let order = other.entries.first().map(|e| e.1.order()).unwrap_or(1);
        self.axpy(&CycNum::one(order), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let order = other.entries.first().map(|e| e.1.order()).unwrap_or(1);
        self.axpy(&CycNum::from_int(order, -1), other)
    }

    pub fn dot_dense(&self, v: &[CycNum]) -> Option<CycNum> {
        let mut acc: Option<CycNum> = None;
        for (i, c) in &self.entries {
            if v[*i].is_zero() {
                continue;
            }
            let t = c * &v[*i];
            acc = Some(match acc {
                Some(a) => a + t,
                None => t,
            });
        }
        acc
    }
}

/// Dense accumulator keyed by index, used when summing many sparse terms.
pub struct Accumulator {
    order: u32,
    map: BTreeMap<usize, CycNum>,
}

impl Accumulator {
    pub fn new(order: u32) -> Accumulator {
        Accumulator { order, map: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&i) {
            Some(x) => *x += c,
            None => {
                self.map.insert(i, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, v: &SparseVec, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (i, x) in &v.entries {
            if one {
                self.add(*i, x);
            } else {
                self.add(*i, &(x * c));
            }
        }
    }

    pub fn finish(self) -> SparseVec {
        let _ = self.order;
        SparseVec { entries: self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

/// Incremental row echelon form. Each stored row has pivot coefficient 1
/// and no entries left of its pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon::new()
    }
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(rows: I) -> Echelon {
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Forward-reduce against stored rows; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        let mut floor = 0usize;
        loop {
            let next = cur.entries.iter().find(|(i, _)| *i >= floor && self.rows.contains_key(i)).cloned();
            match next {
                Some((p, c)) => {
                    cur = cur.axpy(&(-&c), &self.rows[&p]);
                    floor = p + 1;
                }
                None => return cur,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert a row; returns true if it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut cur = v;
        loop {
            let Some((p, c)) = cur.first().cloned() else {
                return false;
            };
            if let Some(row) = self.rows.get(&p) {
                cur = cur.axpy(&(-&c), row);
            } else {
                let inv = c.inv().expect("nonzero pivot");
                self.rows.insert(p, cur.scale(&inv));
                return true;
            }
        }
    }

    /// Fully reduced rows ordered by pivot: the canonical basis of the span.
    pub fn rref(&self) -> Vec<SparseVec> {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut row = self.rows[&p].clone();
            loop {
                let hit = row.entries.iter().find(|(i, _)| *i != p && done.contains_key(i)).cloned();
                match hit {
                    Some((q, c)) => row = row.axpy(&(-&c), &done[&q]),
                    None => break,
                }
            }
            done.insert(p, row);
        }
        done.into_values().collect()
    }

    /// Null space of the stored rows viewed as homogeneous equations in
    /// `ncols` unknowns.
    pub fn nullspace(&self, ncols: usize, order: u32) -> Vec<SparseVec> {
        let rref = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = rref.iter().map(|r| r.entries[0].0).collect();
        let mut out = Vec::new();
        for f in 0..ncols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut entries = vec![(f, CycNum::one(order))];
            for r in &rref {
                if let Some(c) = r.get(f) {
                    entries.push((r.entries[0].0, -c));
                }
            }
            out.push(SparseVec::from_pairs(entries));
        }
        out
    }
}

/// Null space of a list of equation rows.
pub fn nullspace(rows: impl IntoIterator<Item = SparseVec>, ncols: usize, order: u32) -> Vec<SparseVec> {
    Echelon::from_rows(rows).nullspace(ncols, order)
}

/// Solve equations Σ aᵢxᵢ + c = 0 where the constant c sits in column
/// `ncols`. Returns a particular solution and a kernel basis, or None
/// when inconsistent.
pub fn solve_affine(
    rows: impl IntoIterator<Item = SparseVec>,
    ncols: usize,
    order: u32,
) -> Option<(Vec<CycNum>, Vec<SparseVec>)> {
    let ech = Echelon::from_rows(rows);
    if ech.rows.contains_key(&ncols) {
        return None;
    }
    let rref = ech.rref();
    let mut part = vec![CycNum::zero(order); ncols];
    for r in &rref {
        let p = r.entries[0].0;
        if let Some(c) = r.get(ncols) {
            part[p] = -c;
        }
    }
    let kernel = ech.nullspace(ncols, order);
    Some((part, kernel))
}

pub type Mat = Vec<Vec<CycNum>>;

pub fn identity(n: usize, order: u32) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { CycNum::one(order) } else { CycNum::zero(order) }).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat, order: u32) -> Mat {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![CycNum::zero(order); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[CycNum], order: u32) -> Vec<CycNum> {
    a.iter()
        .map(|row| {
            let mut acc = CycNum::zero(order);
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
            acc
        })
        .collect()
}

/// Inverse of a square matrix, or None if singular.
pub fn inverse(a: &Mat, order: u32) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<CycNum>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { CycNum::one(order) } else { CycNum::zero(order) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].inv().ok()?;
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pr = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pr.iter()) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rank_of(rows: &[SparseVec]) -> usize {
    Echelon::from_rows(rows.iter().cloned()).rank()
}

/// Outcome of an exact LDL* factorization of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LdlReport {
    pub hermitian: bool,
    /// All pivots nonnegative (zero pivots only with vanishing rows).
    pub semidefinite: bool,
    /// All pivots strictly above the positivity threshold.
    pub definite: bool,
    pub min_pivot: f64,
    /// Index of the first offending pivot, if any.
    pub witness: Option<usize>,
}

/// Exact LDL* of a Hermitian matrix; pivot signs decided with the
/// positivity policy of the cyclo module.
pub fn hermitian_ldl(g: &Mat, precision: usize) -> LdlReport {
    let n = g.len();
    let hermitian = (0..n).all(|i| (0..n).all(|j| g[i][j] == g[j][i].conj()));
    if !hermitian {
        return LdlReport { hermitian, semidefinite: false, definite: false, min_pivot: f64::NAN, witness: None };
    }
    let mut m = g.clone();
    let mut semidefinite = true;
    let mut definite = true;
    let mut min_pivot = f64::INFINITY;
    let mut witness = None;
    for k in 0..n {
        let d = m[k][k].clone();
        if d.is_zero() {
            definite = false;
            min_pivot = min_pivot.min(0.0);
            if (k + 1..n).any(|j| !m[k][j].is_zero()) {
                semidefinite = false;
                witness.get_or_insert(k);
            }
            continue;
        }
        match d.positivity(precision) {
            Positivity::Positive(v) => min_pivot = min_pivot.min(v),
            Positivity::NonPositive(v) => {
                min_pivot = min_pivot.min(v);
                semidefinite = false;
                definite = false;
                witness.get_or_insert(k);
            }
            Positivity::NotReal => {
                semidefinite = false;
                definite = false;
                witness.get_or_insert(k);
            }
        }
        let dinv = d.inv().expect("nonzero pivot");
        let row_k: Vec<CycNum> = m[k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &dinv;
            for j in k + 1..n {
                if !row_k[j].is_zero() {
                    let t = &f * &row_k[j];
                    m[i][j] -= &t;
                }
            }
        }
    }
    if n == 0 {
        min_pivot = 0.0;
    }
    LdlReport { hermitian, semidefinite, definite, min_pivot, witness }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| CycNum::from_int(4, x)).collect::<Vec<_>>())
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(v(&[1, 2, 0])));
        assert!(e.insert(v(&[0, 1, 1])));
        assert!(!e.insert(v(&[1, 3, 1])));
        assert!(e.contains(&v(&[2, 5, 1])));
        assert!(!e.contains(&v(&[0, 0, 1])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn rref_is_canonical() {
        let a = Echelon::from_rows([v(&[1, 2, 0]), v(&[0, 1, 1])]);
        let b = Echelon::from_rows([v(&[1, 3, 1]), v(&[2, 5, 1])]);
        assert_eq!(a.rref(), b.rref());
    }

    #[test]
    fn nullspace_dimension() {
        let ns = nullspace([v(&[1, 1, 1, 1]), v(&[1, -1, 0, 0])], 4, 4);
        assert_eq!(ns.len(), 2);
        for k in &ns {
            let d = k.to_dense(4, 4);
            assert!(v(&[1, 1, 1, 1]).dot_dense(&d).is_none_or(|x| x.is_zero()));
        }
    }

    #[test]
    fn affine_inconsistent() {
        // x = 1 and x = 2
        let r1 = SparseVec::from_pairs([(0, CycNum::one(4)), (1, CycNum::from_int(4, -1))]);
        let r2 = SparseVec::from_pairs([(0, CycNum::one(4)), (1, CycNum::from_int(4, -2))]);
        assert!(solve_affine([r1.clone()], 1, 4).is_some());
        assert!(solve_affine([r1, r2], 1, 4).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let i = CycNum::root_of_unity(4, 1);
        let a: Mat = vec![vec![CycNum::one(4), i.clone()], vec![i.clone(), CycNum::from_int(4, 3)]];
        let inv = inverse(&a, 4).unwrap();
        assert_eq!(mat_mul(&a, &inv, 4), identity(2, 4));
    }

    #[test]
    fn ldl_detects_indefinite() {
        let g: Mat = vec![vec![CycNum::one(4), CycNum::from_int(4, 2)], vec![CycNum::from_int(4, 2), CycNum::one(4)]];
        let r = hermitian_ldl(&g, 128);
        assert!(r.hermitian && !r.semidefinite);
        let g: Mat = vec![vec![CycNum::from_int(4, 2), CycNum::one(4)], vec![CycNum::one(4), CycNum::from_int(4, 2)]];
        assert!(hermitian_ldl(&g, 128).definite);
    }
}
