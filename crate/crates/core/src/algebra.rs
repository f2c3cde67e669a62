//! Finite-dimensional *-algebras given by structure constants.

use rayon::prelude::*;

use crate::cyclo::CycNum;
use crate::linalg::{nullspace, Accumulator, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub dim: usize,
    pub order: u32,
    /// `mult[i][j]` is the product e_i e_j.
    pub mult: Vec<Vec<SparseVec>>,
    pub unit: SparseVec,
    /// `star[j]` is e_j^*; the star map is its conjugate-linear extension.
    pub star: Vec<SparseVec>,
}

/// Block layout of a multimatrix algebra ⊕ M_{n_c}: basis is the
/// concatenation of matrix units E^c_{ij}, row-major within each block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub sizes: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl BlockLayout {
    pub fn new(sizes: Vec<usize>) -> BlockLayout {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for s in &sizes {
            offsets.push(acc);
            acc += s * s;
        }
        BlockLayout { sizes, offsets }
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().map(|s| s * s).sum()
    }

    pub fn index(&self, block: usize, i: usize, j: usize) -> usize {
        self.offsets[block] + i * self.sizes[block] + j
    }

    /// (block, i, j) for a basis index.
    pub fn locate(&self, idx: usize) -> (usize, usize, usize) {
        let b = match self.offsets.binary_search(&idx) {
            Ok(b) => {
                // skip empty blocks sharing the offset
                let mut b = b;
                while self.sizes[b] == 0 {
                    b += 1;
                }
                b
            }
            Err(b) => b - 1,
        };
        let r = idx - self.offsets[b];
        (b, r / self.sizes[b], r % self.sizes[b])
    }
}

impl Algebra {
    pub fn multimatrix(layout: &BlockLayout, order: u32) -> Algebra {
        let dim = layout.dim();
        let mut mult = vec![vec![SparseVec::new(); dim]; dim];
        let mut star = Vec::with_capacity(dim);
        let mut unit = Vec::new();
        for (c, &n) in layout.sizes.iter().enumerate() {
            for i in 0..n {
                unit.push((layout.index(c, i, i), CycNum::one(order)));
                for j in 0..n {
                    for l in 0..n {
                        mult[layout.index(c, i, j)][layout.index(c, j, l)] =
                            SparseVec::unit(layout.index(c, i, l), order);
                    }
                }
            }
        }
        for idx in 0..dim {
            let (c, i, j) = layout.locate(idx);
            star.push(SparseVec::unit(layout.index(c, j, i), order));
        }
        Algebra { dim, order, mult, unit: SparseVec::from_pairs(unit), star }
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.order);
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                acc.add_scaled(&self.mult[*i][*j], &(x * y));
            }
        }
        acc.finish()
    }

    pub fn star_of(&self, a: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.order);
        for (j, c) in a.iter() {
            acc.add_scaled(&self.star[*j], &c.conj());
        }
        acc.finish()
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        SparseVec::unit(i, self.order)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).into_par_iter().all(|i| (i + 1..self.dim).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    /// First non-commuting basis pair, if any.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        (0..self.dim).find_map(|i| (i + 1..self.dim).find(|&j| self.mult[i][j] != self.mult[j][i]).map(|j| (i, j)))
    }

    pub fn center_dim(&self) -> usize {
        self.center_basis().len()
    }

    pub fn center_basis(&self) -> Vec<SparseVec> {
        let n = self.dim;
        // x = Σ x_i e_i central: Σ x_i (e_i e_j - e_j e_i) = 0 for all j
        let mut rows = Vec::new();
        for j in 0..n {
            let mut per_coord: Vec<Vec<(usize, CycNum)>> = vec![Vec::new(); n];
            for i in 0..n {
                let diff = self.mult[i][j].sub(&self.mult[j][i]);
                for (k, c) in diff.iter() {
                    per_coord[*k].push((i, c.clone()));
                }
            }
            rows.extend(per_coord.into_iter().filter(|r| !r.is_empty()).map(SparseVec::from_pairs));
        }
        nullspace(rows, n, self.order)
    }

    /// First associativity violation (i, j, k), if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let ij = &self.mult[i][j];
                for k in 0..n {
                    let left = self.mul(ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.mult[j][k]);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
            None
        })
    }

    pub fn unit_witness(&self) -> Option<usize> {
        (0..self.dim).find(|&i| {
            let e = self.basis(i);
            self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e
        })
    }

    /// Checks that * is involutive and anti-multiplicative; returns a
    /// description of the first failure.
    pub fn star_witness(&self) -> Option<String> {
        for j in 0..self.dim {
            if self.star_of(&self.star[j]) != self.basis(j) {
                return Some(format!("star not involutive at basis {}", j));
            }
        }
        let n = self.dim;
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            (0..n).find_map(|j| {
                let lhs = self.star_of(&self.mult[i][j]);
                let rhs = self.mul(&self.star[j], &self.star[i]);
                if lhs != rhs {
                    Some(format!("(e{} e{})* != e{}* e{}*", i, j, j, i))
                } else {
                    None
                }
            })
        });
        if bad.is_some() {
            return bad;
        }
        if self.star_of(&self.unit) != self.unit {
            return Some("unit not self-adjoint".into());
        }
        None
    }

    /// Left multiplication operator by `a` as rows of coordinates.
    pub fn left_mul_matrix(&self, a: &SparseVec) -> Vec<SparseVec> {
        (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multimatrix_axioms() {
        let layout = BlockLayout::new(vec![1, 2]);
        let a = Algebra::multimatrix(&layout, 4);
        assert_eq!(a.dim, 5);
        assert!(a.associativity_witness().is_none());
        assert!(a.unit_witness().is_none());
        assert!(a.star_witness().is_none());
        assert!(!a.is_commutative());
        assert_eq!(a.center_dim(), 2);
    }

    #[test]
    fn locate_roundtrip() {
        let layout = BlockLayout::new(vec![2, 1, 2]);
        for idx in 0..layout.dim() {
            let (b, i, j) = layout.locate(idx);
            assert_eq!(layout.index(b, i, j), idx);
        }
    }
}
