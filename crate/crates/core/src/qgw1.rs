//! The qgw-1 structure-constant file format.
//!
//! A qgw-1 document is one JSON object. Coefficients are written as
//! `{order, coeffs: [[num, den], ...]}` in the power basis of ℚ(ζ_order), with
//! integers of arbitrary size kept exact. Sparse tensors are lists of index
//! tuples ending in a coefficient:
//!
//! - `mult`: `[i, j, k, c]` means e_i e_j has coefficient c on e_k
//! - `comult`: `[i, j, k, c]` means Δ(e_i) has coefficient c on e_j ⊗ e_k
//! - `antipode`, `star`: `[i, j, c]` means S(e_i) (resp. e_i^*) has c on e_j
//! - `unit`, `counit`: `[i, c]`
//!
//! Optional companion sections carry a group table, a cocycle, comodules and
//! coideal bases. Output is deterministic: entries are emitted in index order.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::algebra::Algebra;
use crate::corep::Comodule;
use crate::cyclo::CycNum;
use crate::error::{QgwError, Result};
use crate::groups::{FiniteGroup, GroupKind};
use crate::hopf::{HopfAlgebraData, Tensor2};
use crate::linalg::SparseVec;
use crate::twist::Cocycle;

pub const FORMAT_VERSION: &str = "qgw-1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coeff {
    pub order: u32,
    pub coeffs: Vec<(Number, Number)>,
}

impl Coeff {
    pub fn encode(c: &CycNum) -> Coeff {
        let int = |b: &BigInt| Number::from_str(&b.to_string()).expect("integer literal");
        Coeff { order: c.order(), coeffs: c.coeffs().iter().map(|r| (int(r.numer()), int(r.denom()))).collect() }
    }

    pub fn decode(&self, order: u32) -> Result<CycNum> {
        let int = |n: &Number| {
            let s = n.to_string();
            BigInt::from_str(&s).map_err(|_| QgwError::Parse(format!("not an integer: {}", s)))
        };
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, d) in &self.coeffs {
            let d = int(d)?;
            if d == BigInt::from(0) {
                return Err(QgwError::Parse("zero denominator".into()));
            }
            coeffs.push(BigRational::new(int(n)?, d));
        }
        let c = CycNum::from_coeffs(self.order, coeffs)?;
        if self.order == order {
            Ok(c)
        } else {
            c.promote(order)
        }
    }
}

pub type Entry1 = (usize, Coeff);
pub type Entry2 = (usize, usize, Coeff);
pub type Entry3 = (usize, usize, usize, Coeff);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSection {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleSection {
    pub table: Vec<Entry2>,
    pub inverse_table: Vec<Entry2>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComoduleSection {
    pub label: String,
    pub dim: usize,
    /// `[r, c, v]`: the matrix coefficient u_rc as a sparse vector.
    pub entries: Vec<(usize, usize, Vec<Entry1>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoidealSection {
    pub label: String,
    pub basis: Vec<Vec<Entry1>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub format_version: String,
    pub cyc_order: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    pub mult: Vec<Entry3>,
    pub comult: Vec<Entry3>,
    pub unit: Vec<Entry1>,
    pub counit: Vec<Entry1>,
    pub antipode: Vec<Entry2>,
    pub star: Vec<Entry2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comodules: Vec<ComoduleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coideals: Vec<CoidealSection>,
}

fn sparse_entries(v: &SparseVec) -> Vec<Entry1> {
    v.iter().map(|(i, c)| (*i, Coeff::encode(c))).collect()
}

fn rows_entries(rows: &[SparseVec]) -> Vec<Entry2> {
    rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, c)| (i, *j, Coeff::encode(c)))).collect()
}

impl Document {
    pub fn from_hopf(h: &HopfAlgebraData) -> Document {
        let a = &h.algebra;
        let mut mult = Vec::new();
        for (i, row) in a.mult.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                mult.extend(v.iter().map(|(k, c)| (i, j, *k, Coeff::encode(c))));
            }
        }
        let comult = h
            .comult
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.iter().map(move |(j, k, c)| (i, *j, *k, Coeff::encode(c))))
            .collect();
        let counit = h.counit.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, Coeff::encode(c))).collect();
        Document {
            format_version: FORMAT_VERSION.into(),
            cyc_order: h.order(),
            dim: h.dim(),
            labels: h.labels.clone(),
            mult,
            comult,
            unit: sparse_entries(&a.unit),
            counit,
            antipode: rows_entries(&h.antipode),
            star: rows_entries(&a.star),
            group: None,
            cocycle: None,
            comodules: Vec::new(),
            coideals: Vec::new(),
        }
    }

    pub fn with_group(mut self, g: &FiniteGroup) -> Document {
        self.group = Some(GroupSection { order: g.order(), table: g.table.clone(), labels: g.labels.clone() });
        self
    }

    pub fn with_cocycle(mut self, lam: &Cocycle) -> Document {
        self.cocycle = Some(CocycleSection { table: rows_entries(&lam.table), inverse_table: rows_entries(&lam.inverse_table) });
        self
    }

    pub fn with_comodules(mut self, comodules: &[Comodule]) -> Document {
        self.comodules = comodules
            .iter()
            .map(|m| ComoduleSection {
                label: m.label.clone(),
                dim: m.dim,
                entries: m
                    .u
                    .iter()
                    .enumerate()
                    .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, sparse_entries(v))))
                    .collect(),
            })
            .collect();
        self
    }

    pub fn add_coideal(&mut self, label: String, basis: &[SparseVec]) {
        self.coideals.push(CoidealSection { label, basis: basis.iter().map(sparse_entries).collect() });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("qgw-1 documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Document> {
        let doc: Document = serde_json::from_str(text).map_err(|e| QgwError::Parse(e.to_string()))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(QgwError::Parse(format!("unsupported format_version {:?}", doc.format_version)));
        }
        Ok(doc)
    }

    fn check_index(&self, i: usize, what: &str) -> Result<()> {
        if i >= self.dim {
            return Err(QgwError::SchemaError(format!("{} index {} out of range for dimension {}", what, i, self.dim)));
        }
        Ok(())
    }

    fn vector(&self, entries: &[Entry1], what: &str) -> Result<SparseVec> {
        let mut pairs = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            self.check_index(*i, what)?;
            pairs.push((*i, c.decode(self.cyc_order)?));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    fn rows(&self, entries: &[Entry2], what: &str) -> Result<Vec<SparseVec>> {
        let mut rows: Vec<Vec<(usize, CycNum)>> = vec![Vec::new(); self.dim];
        for (i, j, c) in entries {
            self.check_index(*i, what)?;
            self.check_index(*j, what)?;
            rows[*i].push((*j, c.decode(self.cyc_order)?));
        }
        Ok(rows.into_iter().map(SparseVec::from_pairs).collect())
    }

    pub fn to_hopf(&self) -> Result<HopfAlgebraData> {
        let n = self.dim;
        let order = self.cyc_order;
        if self.labels.len() != n {
            return Err(QgwError::SchemaError(format!("{} labels for dimension {}", self.labels.len(), n)));
        }
        let mut mult: Vec<Vec<Vec<(usize, CycNum)>>> = vec![vec![Vec::new(); n]; n];
        for (i, j, k, c) in &self.mult {
            for x in [i, j, k] {
                self.check_index(*x, "mult")?;
            }
            mult[*i][*j].push((*k, c.decode(order)?));
        }
        let mult = mult.into_iter().map(|row| row.into_iter().map(SparseVec::from_pairs).collect()).collect();
        let mut comult: Vec<Vec<((usize, usize), CycNum)>> = vec![Vec::new(); n];
        for (i, j, k, c) in &self.comult {
            for x in [i, j, k] {
                self.check_index(*x, "comult")?;
            }
            comult[*i].push(((*j, *k), c.decode(order)?));
        }
        let comult: Vec<Tensor2> = comult.into_iter().map(crate::hopf::tensor2_from_pairs).collect();
        let mut counit = vec![CycNum::zero(order); n];
        for (i, c) in &self.counit {
            self.check_index(*i, "counit")?;
            counit[*i] = c.decode(order)?;
        }
        let algebra = Algebra { dim: n, order, mult, unit: self.vector(&self.unit, "unit")?, star: self.rows(&self.star, "star")? };
        let h = HopfAlgebraData { labels: self.labels.clone(), algebra, comult, counit, antipode: self.rows(&self.antipode, "antipode")? };
        h.validate_shapes()?;
        Ok(h)
    }

    pub fn group(&self) -> Result<Option<FiniteGroup>> {
        let Some(g) = &self.group else { return Ok(None) };
        let n = g.order;
        if g.table.len() != n || g.labels.len() != n || g.table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(QgwError::SchemaError("group table has the wrong shape".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| g.table[e][x] == x && g.table[x][e] == x))
            .ok_or_else(|| QgwError::SchemaError("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| g.table[x][y] == identity)
                .ok_or_else(|| QgwError::SchemaError(format!("element {} has no inverse", x)))?;
        }
        Ok(Some(FiniteGroup { kind: GroupKind::Table, table: g.table.clone(), identity, inverse, labels: g.labels.clone() }))
    }

    /// The cocycle section, attached to the algebra this document describes.
    /// The quotient grading is not part of the format and comes back empty.
    pub fn cocycle(&self, h: &HopfAlgebraData) -> Result<Option<Cocycle>> {
        let Some(c) = &self.cocycle else { return Ok(None) };
        Ok(Some(Cocycle {
            parent: h.fingerprint(),
            table: self.rows(&c.table, "cocycle")?,
            inverse_table: self.rows(&c.inverse_table, "cocycle")?,
            grading: None,
        }))
    }

    /// Coefficient matrices of the stored comodules, indexed `[r][c]`.
    pub fn comodule_matrices(&self) -> Result<Vec<(String, Vec<Vec<SparseVec>>)>> {
        let mut out = Vec::new();
        for m in &self.comodules {
            let mut u = vec![vec![SparseVec::new(); m.dim]; m.dim];
            for (r, c, v) in &m.entries {
                if *r >= m.dim || *c >= m.dim {
                    return Err(QgwError::SchemaError(format!("comodule {} entry ({}, {}) out of range", m.label, r, c)));
                }
                u[*r][*c] = self.vector(v, "comodule")?;
            }
            out.push((m.label.clone(), u));
        }
        Ok(out)
    }

    pub fn coideal_bases(&self) -> Result<Vec<(String, Vec<SparseVec>)>> {
        self.coideals
            .iter()
            .map(|c| Ok((c.label.clone(), c.basis.iter().map(|v| self.vector(v, "coideal")).collect::<Result<Vec<_>>>()?)))
            .collect()
    }
}

pub fn write_hopf(h: &HopfAlgebraData) -> String {
    Document::from_hopf(h).to_json()
}

pub fn read_hopf(text: &str) -> Result<HopfAlgebraData> {
    Document::from_json(text)?.to_hopf()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{dihedral_order, function_algebra, group_algebra, make_group};
    use crate::twist::dihedral_minus_one_full;

    #[test]
    fn round_trip_classical_and_dual() {
        let g = make_group(GroupKind::Dihedral(4));
        for h in [function_algebra(&g, 8), group_algebra(&g, 8)] {
            let text = write_hopf(&h);
            let back = read_hopf(&text).unwrap();
            assert_eq!(back, h);
            assert_eq!(write_hopf(&back), text);
        }
    }

    #[test]
    fn round_trip_twisted_with_companions() {
        let t = dihedral_minus_one_full(4).unwrap();
        let g = make_group(GroupKind::Dihedral(4));
        let mut doc = Document::from_hopf(&t.hopf).with_group(&g).with_cocycle(&t.cocycle);
        doc.add_coideal("unit".into(), &[t.hopf.one()]);
        let text = doc.to_json();
        let parsed = Document::from_json(&text).unwrap();
        assert_eq!(parsed, doc);
        let h = parsed.to_hopf().unwrap();
        assert_eq!(h, t.hopf);
        let lam = parsed.cocycle(&h).unwrap().unwrap();
        assert_eq!(lam.table, t.cocycle.table);
        assert_eq!(lam.inverse_table, t.cocycle.inverse_table);
        let pg = parsed.group().unwrap().unwrap();
        assert_eq!((pg.table, pg.identity, pg.inverse), (g.table.clone(), g.identity, g.inverse.clone()));
        assert_eq!(parsed.coideal_bases().unwrap()[0].1, vec![t.hopf.one()]);
    }

    #[test]
    fn big_integers_survive() {
        let big = BigInt::from_str("10000000000000000000000000000000000000007").unwrap();
        let c = CycNum::from_rational(4, BigRational::new(big, BigInt::from(3)));
        let text = serde_json::to_string(&Coeff::encode(&c)).unwrap();
        let back: Coeff = serde_json::from_str(&text).unwrap();
        assert_eq!(back.decode(4).unwrap(), c);
        assert_eq!(Coeff::encode(&CycNum::from_int(8, 1)).decode(dihedral_order(8)).unwrap(), CycNum::from_int(8, 1));
    }

    #[test]
    fn rejects_bad_documents() {
        let h = function_algebra(&make_group(GroupKind::Klein), 4);
        let mut doc = Document::from_hopf(&h);
        doc.format_version = "qgw-0".into();
        assert!(matches!(Document::from_json(&doc.to_json()), Err(QgwError::Parse(_))));
        let mut doc = Document::from_hopf(&h);
        doc.mult[0].2 = 99;
        assert!(matches!(doc.to_hopf(), Err(QgwError::SchemaError(_))));
        assert!(matches!(read_hopf("{"), Err(QgwError::Parse(_))));
    }
}
