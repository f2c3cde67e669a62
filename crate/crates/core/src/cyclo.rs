//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced
//! modulo the N-th cyclotomic polynomial, so equal elements of equal order
//! have identical coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QgwError, Result};

static ORDER_LIMIT: AtomicU32 = AtomicU32::new(512);

/// Largest cyclotomic order accepted by arithmetic (default 512).
pub fn order_limit() -> u32 {
    ORDER_LIMIT.load(Ordering::Relaxed)
}

pub fn set_order_limit(limit: u32) {
    ORDER_LIMIT.store(limit.max(1), Ordering::Relaxed);
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn lcm(a: u32, b: u32) -> u64 {
    (a as u64).lcm(&(b as u64))
}

/// Φ_N as integer coefficients, lowest degree first.
fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn] / den[dn];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    q
}

struct FieldTable {
    phi: usize,
    /// `pow[j]` is ζ^j (0 ≤ j < n) in the reduced power basis.
    pow: Vec<Vec<i64>>,
}

impl FieldTable {
    fn build(n: u32) -> FieldTable {
        let phi = euler_phi(n);
        let cp = cyclotomic_poly(n);
        let mut pow = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            pow.push(cur.clone());
            // multiply by x and reduce with the monic Φ_N
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            for k in (1..phi).rev() {
                next[k] = cur[k - 1];
            }
            if top != 0 {
                for k in 0..phi {
                    next[k] = next[k]
                        .checked_sub(top.checked_mul(cp[k]).expect("cyclotomic table overflow"))
                        .expect("cyclotomic table overflow");
                }
            }
            cur = next;
        }
        FieldTable { phi, pow }
    }
}

fn table(n: u32) -> Arc<FieldTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let m = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = m.lock().expect("cyclotomic table cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(FieldTable::build(n))).clone()
}

fn check_order(order: u64) -> Result<u32> {
    let limit = order_limit();
    if order == 0 || order > limit as u64 {
        return Err(QgwError::OrderLimit { order, limit });
    }
    Ok(order as u32)
}

/// An element of ℚ(ζ_N).
#[derive(Clone, PartialOrd, Ord)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl CycNum {
    pub fn zero(order: u32) -> CycNum {
        let order = check_order(order as u64).expect("order within limit");
        CycNum { order, coeffs: vec![BigRational::zero(); euler_phi(order)] }
    }

    pub fn one(order: u32) -> CycNum {
        CycNum::from_rational(order, BigRational::one())
    }

    pub fn from_int(order: u32, v: i64) -> CycNum {
        CycNum::from_rational(order, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(order: u32, n: i64, d: i64) -> CycNum {
        CycNum::from_rational(order, rat(n, d))
    }

    pub fn from_rational(order: u32, r: BigRational) -> CycNum {
        let mut z = CycNum::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// ζ_N^j.
    pub fn root_of_unity(order: u32, j: i64) -> CycNum {
        let t = table(order);
        let e = j.rem_euclid(order as i64) as usize;
        let coeffs = t.pow[e].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        CycNum { order, coeffs }
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<CycNum> {
        let order = check_order(order as u64)?;
        if coeffs.len() != euler_phi(order) {
            return Err(QgwError::SchemaError(format!(
                "order {} needs {} coefficients, got {}",
                order,
                euler_phi(order),
                coeffs.len()
            )));
        }
        Ok(CycNum { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in ℚ(ζ_M) for a multiple M of the current order.
    pub fn promote(&self, m: u32) -> Result<CycNum> {
        if m == self.order {
            return Ok(self.clone());
        }
        if !m.is_multiple_of(self.order) {
            return Err(QgwError::SchemaError(format!("cannot promote order {} to {}", self.order, m)));
        }
        let m = check_order(m as u64)?;
        let step = (m / self.order) as usize;
        let t = table(m);
        let mut out = vec![BigRational::zero(); t.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            add_scaled_row(&mut out, c, &t.pow[(j * step) % m as usize]);
        }
        Ok(CycNum { order: m, coeffs: out })
    }

    /// Re-express in ℚ(ζ_M) for a divisor M of the current order, if the
    /// element lies in that subfield.
    pub fn demote(&self, m: u32) -> Option<CycNum> {
        if m == self.order {
            return Some(self.clone());
        }
        if m == 0 || !self.order.is_multiple_of(m) {
            return None;
        }
        let phi_m = euler_phi(m);
        // Columns: images of the basis ζ_M^j in ℚ(ζ_N).
        let cols: Vec<CycNum> = (0..phi_m)
            .map(|j| CycNum::root_of_unity(m, j as i64).promote(self.order).expect("divisor order"))
            .collect();
        let rows = self.coeffs.len();
        let mut mat: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let sol = solve_rational(&mut mat, phi_m)?;
        Some(CycNum { order: m, coeffs: sol })
    }

    fn unify(&self, other: &CycNum) -> Result<(CycNum, CycNum)> {
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let l = check_order(lcm(self.order, other.order))?;
        Ok((self.promote(l)?, other.promote(l)?))
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        if self.order == other.order {
            return Ok(self.add_same(other));
        }
        let (a, b) = self.unify(other)?;
        Ok(a.add_same(&b))
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        if self.order == other.order {
            return Ok(self.mul_same(other));
        }
        let (a, b) = self.unify(other)?;
        Ok(a.mul_same(&b))
    }

    fn add_same(&self, other: &CycNum) -> CycNum {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycNum { order: self.order, coeffs }
    }

    fn sub_same(&self, other: &CycNum) -> CycNum {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycNum { order: self.order, coeffs }
    }

    fn mul_same(&self, other: &CycNum) -> CycNum {
        if self.is_rational() {
            return other.scale(&self.coeffs[0]);
        }
        if other.is_rational() {
            return self.scale(&other.coeffs[0]);
        }
        let t = table(self.order);
        let phi = t.phi;
        let mut out = vec![BigRational::zero(); phi];
        let n = self.order as usize;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let e = i + j;
                if e < phi {
                    out[e] += p;
                } else {
                    add_scaled_row(&mut out, &p, &t.pow[e % n]);
                }
            }
        }
        CycNum { order: self.order, coeffs: out }
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        if r.is_zero() {
            return CycNum::zero(self.order);
        }
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn neg(&self) -> CycNum {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Complex conjugation ζ_N ↦ ζ_N^{N-1}.
    pub fn conj(&self) -> CycNum {
        if self.is_rational() {
            return self.clone();
        }
        let t = table(self.order);
        let n = self.order as usize;
        let mut out = vec![BigRational::zero(); t.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            add_scaled_row(&mut out, c, &t.pow[(n - j) % n]);
        }
        CycNum { order: self.order, coeffs: out }
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(QgwError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(CycNum::from_rational(self.order, self.coeffs[0].recip()));
        }
        let phi = self.coeffs.len();
        // Solve (self · x) = 1 through the multiplication matrix.
        let cols: Vec<CycNum> =
            (0..phi).map(|j| self.mul_same(&CycNum::root_of_unity(self.order, j as i64))).collect();
        let mut mat: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let sol = solve_rational(&mut mat, phi).ok_or(QgwError::DivisionByZero)?;
        Ok(CycNum { order: self.order, coeffs: sol })
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        self.try_mul(&other.inv()?)
    }

    /// Dispatch used by the `cyc_arith` entry point.
    pub fn arith(a: &CycNum, b: &CycNum, op: CycOp) -> Result<CycNum> {
        match op {
            CycOp::Add => a.try_add(b),
            CycOp::Mul => a.try_mul(b),
            CycOp::Inv => a.inv(),
            CycOp::Conj => Ok(a.conj()),
        }
    }

    pub fn is_conj_fixed(&self) -> bool {
        self.conj() == *self
    }

    /// If the element is r·ζ_N^j with r rational, return (r, j).
    pub fn as_monomial(&self) -> Option<(BigRational, u32)> {
        for j in 0..self.order {
            let shifted = self.mul_same(&CycNum::root_of_unity(self.order, -(j as i64)));
            if let Some(r) = shifted.to_rational() {
                return Some((r, j));
            }
        }
        None
    }

    /// Square root inside the same field for elements r·ζ^j with r rational.
    /// The square-free part of r is handled with quadratic Gauss sums, so
    /// e.g. √2 ∈ ℚ(ζ_8) and √-3 ∈ ℚ(ζ_3) are found.
    pub fn sqrt_in_field(&self) -> Option<CycNum> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.order;
        let (r, j) = self.as_monomial()?;
        let neg = r.is_negative();
        let r_abs = if neg { -r } else { r };
        // r = (a·b)/b², a·b = t²·q with q square-free
        let ab = r_abs.numer() * r_abs.denom();
        let ab: u128 = ab.to_u128()?;
        let (t, primes) = squarefree_split(ab)?;
        let mut root = CycNum::one(n);
        let mut star_sign = 1i64;
        for p in primes {
            let (g, sign) = prime_root(n, p)?;
            root = root.mul_same(&g);
            star_sign *= sign;
        }
        let scale = BigRational::new(BigInt::from(t), r_abs.denom().clone());
        // remaining unit: u² = (±1)(sign of Π p*)·ζ^j
        let unit = CycNum::root_of_unity(n, j as i64);
        let unit = if neg != (star_sign < 0) { unit.neg() } else { unit };
        let mut extra = vec![CycNum::one(n)];
        if n.is_multiple_of(4) {
            extra.push(CycNum::root_of_unity(n, (n / 4) as i64));
        }
        for x in &extra {
            for e in 0..n as i64 {
                let u = CycNum::root_of_unity(n, e).mul_same(x);
                if u.mul_same(&u) == unit {
                    return Some(u.mul_same(&root).scale(&scale));
                }
            }
        }
        None
    }

    /// Complex approximation with `precision` bits (at least 53).
    pub fn embed(&self, precision: usize) -> ComplexApprox {
        let p = precision.max(53) + 64;
        let rm = RoundingMode::ToEven;
        let mut re = BigFloat::from_i32(0, p);
        let mut im = BigFloat::from_i32(0, p);
        let trig = trig_table(self.order, p);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = rational_to_bigfloat(c, p);
            let (cs, sn) = &trig[j];
            re = re.add(&cf.mul(cs, p, rm), p, rm);
            im = im.add(&cf.mul(sn, p, rm), p, rm);
        }
        ComplexApprox { re, im, precision: p }
    }

    /// Fast double-precision approximation (re, im), for reporting only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let n = self.order as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = std::f64::consts::TAU * j as f64 / n;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Decide positivity of a real cyclotomic number: exact check that the
    /// value is conjugation-fixed, then a numerical comparison against
    /// the threshold 2^{-64} at the given precision.
    pub fn positivity(&self, precision: usize) -> Positivity {
        if !self.is_conj_fixed() {
            return Positivity::NotReal;
        }
        if let Some(r) = self.to_rational() {
            let v = rational_to_f64(&r);
            return if r.is_positive() && v > THRESHOLD {
                Positivity::Positive(v)
            } else {
                Positivity::NonPositive(v)
            };
        }
        let approx = self.embed(precision.max(128));
        let v = approx.re_f64();
        let thr = BigFloat::from_f64(THRESHOLD, approx.precision);
        match approx.re.cmp(&thr) {
            Some(c) if c > 0 => Positivity::Positive(v),
            _ => Positivity::NonPositive(v),
        }
    }
}

/// 2^{-64}, the positivity threshold of the numerical policy.
pub const THRESHOLD: f64 = 5.421010862427522e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycOp {
    Add,
    Mul,
    Inv,
    Conj,
}

/// Free-function form of field arithmetic with automatic promotion.
pub fn cyc_arith(a: &CycNum, b: &CycNum, op: CycOp) -> Result<CycNum> {
    CycNum::arith(a, b, op)
}

pub fn cyc_embed(a: &CycNum, precision: usize) -> ComplexApprox {
    a.embed(precision)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Positivity {
    Positive(f64),
    NonPositive(f64),
    NotReal,
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive(_))
    }
}

#[derive(Debug, Clone)]
pub struct ComplexApprox {
    pub re: BigFloat,
    pub im: BigFloat,
    pub precision: usize,
}

impl ComplexApprox {
    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }
    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }
}

fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut cc = Consts::new().expect("astro-float constants");
    let s = x.format(Radix::Dec, RoundingMode::ToEven, &mut cc).unwrap_or_else(|_| "NaN".into());
    s.parse::<f64>().unwrap_or(f64::NAN)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let p = 128;
    bigfloat_to_f64(&rational_to_bigfloat(r, p))
}

fn rational_to_bigfloat(r: &BigRational, p: usize) -> BigFloat {
    let rm = RoundingMode::ToEven;
    let n = bigint_to_bigfloat(r.numer(), p);
    let d = bigint_to_bigfloat(r.denom(), p);
    n.div(&d, p, rm)
}

fn bigint_to_bigfloat(v: &BigInt, p: usize) -> BigFloat {
    let rm = RoundingMode::ToEven;
    let (sign, digits) = v.to_u64_digits();
    let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u8(1, p), p, rm);
    let mut acc = BigFloat::from_u8(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, rm).add(&BigFloat::from_u64(*d, p), p, rm);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg();
    }
    acc
}

type Trig = Vec<(BigFloat, BigFloat)>;

fn trig_table(n: u32, p: usize) -> Arc<Trig> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Trig>>>> = OnceLock::new();
    let m = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = m.lock().expect("trig cache").get(&(n, p)) {
        return t.clone();
    }
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().expect("astro-float constants");
    let pi = cc.pi(p + 64, rm);
    let two_pi = pi.mul(&BigFloat::from_u8(2, p + 64), p + 64, rm);
    let phi = euler_phi(n);
    let mut out = Vec::with_capacity(phi);
    for j in 0..phi {
        let ang = two_pi.mul(&BigFloat::from_u64(j as u64, p + 64), p + 64, rm).div(
            &BigFloat::from_u64(n as u64, p + 64),
            p + 64,
            rm,
        );
        let (c, s) = if j == 0 {
            (BigFloat::from_u8(1, p), BigFloat::from_u8(0, p))
        } else if 4 * j == n as usize {
            (BigFloat::from_u8(0, p), BigFloat::from_u8(1, p))
        } else if 2 * j == n as usize {
            (BigFloat::from_i8(-1, p), BigFloat::from_u8(0, p))
        } else {
            (ang.cos(p, rm, &mut cc), ang.sin(p, rm, &mut cc))
        };
        out.push((c, s));
    }
    let t = Arc::new(out);
    m.lock().expect("trig cache").insert((n, p), t.clone());
    t
}

fn add_scaled_row(out: &mut [BigRational], c: &BigRational, row: &[i64]) {
    for (o, &r) in out.iter_mut().zip(row) {
        if r != 0 {
            *o += c * BigRational::from_integer(BigInt::from(r));
        }
    }
}

/// Solve a consistent rational system given as augmented rows; returns
/// None if inconsistent or underdetermined.
fn solve_rational(mat: &mut [Vec<BigRational>], ncols: usize) -> Option<Vec<BigRational>> {
    let rows = mat.len();
    let mut piv_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(r) = (piv_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(piv_row, r);
        let inv = mat[piv_row][col].recip();
        for x in mat[piv_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r2 in 0..rows {
            if r2 != piv_row && !mat[r2][col].is_zero() {
                let f = mat[r2][col].clone();
                let pr = mat[piv_row].clone();
                for (x, y) in mat[r2].iter_mut().zip(pr.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        piv_row += 1;
    }
    if pivots.len() != ncols {
        return None;
    }
    for r in piv_row..rows {
        if !mat[r][ncols].is_zero() {
            return None;
        }
    }
    Some((0..ncols).map(|i| mat[i][ncols].clone()).collect())
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match self.unify(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycNum {}

impl std::hash::Hash for CycNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.coeffs.hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $same:ident, $checked:ident) => {
        impl std::ops::$tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                if self.order == rhs.order {
                    self.$same(rhs)
                } else {
                    self.$checked(rhs).expect("cyclotomic order limit exceeded")
                }
            }
        }
        impl std::ops::$tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}

impl CycNum {
    fn try_sub(&self, other: &CycNum) -> Result<CycNum> {
        let (a, b) = self.unify(other)?;
        Ok(a.sub_same(&b))
    }
}

binop!(Add, add, add_same, try_add);
binop!(Sub, sub, sub_same, try_sub);
binop!(Mul, mul, mul_same, try_mul);

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum::neg(self)
    }
}

impl std::ops::AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !b.is_zero() {
                    *a += b;
                }
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl std::ops::SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !b.is_zero() {
                    *a -= b;
                }
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "z{}^{}", self.order, j)?,
                (_, false) => write!(f, "{}*z{}^{}", mag, self.order, j)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.order, self)
    }
}

/// n = t²·Π p over distinct primes p; None when n has a large prime factor
/// that trial division cannot settle.
fn squarefree_split(mut n: u128) -> Option<(u128, Vec<u64>)> {
    let mut t: u128 = 1;
    let mut primes = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if p > 1_000_000 {
            return None;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            t *= p;
        }
        if e % 2 == 1 {
            primes.push(p as u64);
        }
        p += 1;
    }
    if n > 1 {
        primes.push(u64::try_from(n).ok()?);
    }
    Some((t, primes))
}

/// (g, sign) with g² = sign·p in ℚ(ζ_n), when such a Gauss sum lives there.
fn prime_root(n: u32, p: u64) -> Option<(CycNum, i64)> {
    if p == 2 {
        if !n.is_multiple_of(8) {
            return None;
        }
        let z = CycNum::root_of_unity(n, (n / 8) as i64);
        return Some((&z + &z.conj(), 1));
    }
    if !(n as u64).is_multiple_of(p) {
        return None;
    }
    let step = (n as u64 / p) as i64;
    let mut g = CycNum::zero(n);
    for a in 1..p {
        // Euler's criterion for the Legendre symbol
        let mut acc: u128 = 1;
        for _ in 0..(p - 1) / 2 {
            acc = acc * a as u128 % p as u128;
        }
        let z = CycNum::root_of_unity(n, step * a as i64);
        g = if acc == 1 { &g + &z } else { &g - &z };
    }
    Some((g, if p % 4 == 1 { 1 } else { -1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycNum::root_of_unity(4, 1);
        assert_eq!(&i * &i, CycNum::from_int(4, -1));
    }

    #[test]
    fn conj_of_zeta8() {
        assert_eq!(CycNum::root_of_unity(8, 1).conj(), CycNum::root_of_unity(8, 7));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = CycNum::one(3) + CycNum::root_of_unity(3, 1) + CycNum::root_of_unity(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn totients() {
        let v: Vec<usize> = [1, 2, 3, 4, 5, 6, 8, 12, 24].iter().map(|&n| euler_phi(n)).collect();
        assert_eq!(v, vec![1, 1, 2, 2, 4, 2, 4, 4, 8]);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(CycNum::zero(6).inv(), Err(QgwError::DivisionByZero));
    }

    #[test]
    fn order_limit_enforced() {
        let a = CycNum::root_of_unity(509, 1);
        let b = CycNum::root_of_unity(7, 1);
        assert!(matches!(a.try_mul(&b), Err(QgwError::OrderLimit { .. })));
    }

    #[test]
    fn mixed_orders_promote() {
        // ζ_4 · ζ_3 = ζ_12^{3+4}
        let p = CycNum::root_of_unity(4, 1) * CycNum::root_of_unity(3, 1);
        assert_eq!(p, CycNum::root_of_unity(12, 7));
        assert_eq!(p.order(), 12);
    }

    #[test]
    fn promote_demote_roundtrip() {
        let a = CycNum::root_of_unity(6, 1) + CycNum::from_ratio(6, 2, 3);
        let up = a.promote(24).unwrap();
        assert_eq!(up.demote(6).unwrap().coeffs(), a.coeffs());
        assert!(CycNum::root_of_unity(24, 1).demote(12).is_none());
    }

    #[test]
    fn embedding_examples() {
        let i = CycNum::root_of_unity(4, 1).embed(128);
        assert!(i.re_f64().abs() < 1e-15 && (i.im_f64() - 1.0).abs() < 1e-15);
        let z6 = CycNum::root_of_unity(6, 1).embed(128);
        assert!((z6.re_f64() - 0.5).abs() < 1e-15);
        assert!((z6.im_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let m1 = CycNum::from_int(5, -1).embed(53);
        assert_eq!(m1.re_f64(), -1.0);
    }

    #[test]
    fn positivity_policy() {
        // 2 + ζ_8 + ζ_8^{-1} = 2 + √2 > 0
        let x = CycNum::from_int(8, 2) + CycNum::root_of_unity(8, 1) + CycNum::root_of_unity(8, 7);
        assert!(x.positivity(128).is_positive());
        // 1 - √2 < 0
        let y = CycNum::one(8) - CycNum::root_of_unity(8, 1) - CycNum::root_of_unity(8, 7);
        assert!(!y.positivity(128).is_positive());
        assert_eq!(CycNum::root_of_unity(8, 1).positivity(128), Positivity::NotReal);
    }

    #[test]
    fn square_roots() {
        let m1 = CycNum::from_int(4, -1);
        let r = m1.sqrt_in_field().unwrap();
        assert_eq!(&r * &r, m1);
        let z = CycNum::root_of_unity(12, 4).scale(&rat(9, 4));
        let r = z.sqrt_in_field().unwrap();
        assert_eq!(&r * &r, z);
        assert!(CycNum::from_int(4, 2).sqrt_in_field().is_none());
        let two = CycNum::from_int(8, 2);
        let r2 = two.sqrt_in_field().unwrap();
        assert_eq!(&r2 * &r2, two);
        let m3 = CycNum::from_ratio(12, -27, 4);
        let r3 = m3.sqrt_in_field().unwrap();
        assert_eq!(&r3 * &r3, m3);
        let x = CycNum::root_of_unity(24, 4).scale(&rat(6, 1));
        let rx = x.sqrt_in_field().unwrap();
        assert_eq!(&rx * &rx, x);
        assert!(CycNum::root_of_unity(12, 5).sqrt_in_field().is_none());
    }
}
