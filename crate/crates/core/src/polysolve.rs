//! A small exact solver for systems of polynomial equations of degree at
//! most two over ℚ(ζ_N): linear elimination, univariate quadratics with
//! roots in the field, and generic values for free variables.

use std::collections::BTreeMap;

use crate::cyclo::{rat, CycNum};

/// Sorted variable indices; the empty monomial is the constant term.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, CycNum>,
}

impl Poly {
    pub fn constant(c: CycNum) -> Poly {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: usize, order: u32) -> Poly {
        let mut p = Poly::default();
        p.add_term(vec![v], CycNum::one(order));
        p
    }

    pub fn add_term(&mut self, mut m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let e = self.terms.entry(m.clone()).or_insert_with(|| CycNum::zero(c.order()));
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        let mut out = Poly::default();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let mut m = m1.clone();
                m.extend(m2.iter().copied());
                out.add_term(m, a * b);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn coeff(&self, m: &[usize]) -> Option<&CycNum> {
        self.terms.get(m)
    }

    /// Replace variable `v` by `by`.
    pub fn substitute(&self, v: usize, by: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut term = Poly::default();
            let rest: Monomial = m.iter().copied().filter(|&x| x != v).collect();
            term.add_term(rest, c.clone());
            for _ in 0..m.iter().filter(|&&x| x == v).count() {
                term = term.mul(by);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, values: &[CycNum], order: u32) -> CycNum {
        let mut acc = CycNum::zero(order);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &v in m {
                t = &t * &values[v];
            }
            acc += &t;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solution(Vec<CycNum>),
    /// Every branch was exhausted without a solution passing the filter.
    NoSolution,
    /// A root outside the field or a heuristic guess blocked a decision.
    Undecided,
}

struct Solver<'a> {
    nvars: usize,
    order: u32,
    accept: &'a dyn Fn(&[CycNum]) -> bool,
}

impl Solver<'_> {
    fn finish(&self, fixed: &[Option<Poly>]) -> Outcome {
        let free: Vec<usize> = (0..self.nvars).filter(|&v| fixed[v].is_none()).collect();
        for attempt in 0..8i64 {
            let mut vals = vec![CycNum::zero(self.order); self.nvars];
            for (i, &v) in free.iter().enumerate() {
                vals[v] = CycNum::from_int(self.order, 1 + (attempt + 1) * (i as i64 + 1) + attempt * attempt);
            }
            for v in 0..self.nvars {
                if let Some(p) = &fixed[v] {
                    vals[v] = p.eval(&vals, self.order);
                }
            }
            if (self.accept)(&vals) {
                return Outcome::Solution(vals);
            }
            if free.is_empty() {
                return Outcome::NoSolution;
            }
        }
        Outcome::Undecided
    }

    fn eliminate(&self, polys: &[Poly], fixed: &[Option<Poly>], v: usize, by: &Poly) -> (Vec<Poly>, Vec<Option<Poly>>) {
        let polys = polys.iter().map(|p| p.substitute(v, by)).collect();
        let mut fixed: Vec<Option<Poly>> = fixed.iter().map(|f| f.as_ref().map(|p| p.substitute(v, by))).collect();
        fixed[v] = Some(by.clone());
        (polys, fixed)
    }

    fn run(&self, polys: Vec<Poly>, fixed: Vec<Option<Poly>>, depth: usize) -> Outcome {
        let polys: Vec<Poly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        if polys.iter().any(|p| p.degree() == 0) {
            return Outcome::NoSolution;
        }
        if polys.is_empty() {
            return self.finish(&fixed);
        }
        if depth > 4 * self.nvars + 8 {
            return Outcome::Undecided;
        }
        if let Some(p) = polys.iter().find(|p| p.degree() == 1) {
            let v = *p.vars().last().expect("nonconstant");
            let c = p.coeff(&[v]).expect("linear variable").clone();
            let mut rest = p.clone();
            rest.terms.remove(&vec![v]);
            let by = rest.scale(&(-&c).inv().expect("nonzero"));
            let (polys, fixed) = self.eliminate(&polys, &fixed, v, &by);
            return self.run(polys, fixed, depth + 1);
        }
        if let Some(p) = polys.iter().find(|p| p.vars().len() == 1) {
            let v = p.vars()[0];
            let zero = CycNum::zero(self.order);
            let a = p.coeff(&[v, v]).cloned().unwrap_or_else(|| zero.clone());
            let b = p.coeff(&[v]).cloned().unwrap_or_else(|| zero.clone());
            let c = p.coeff(&[]).cloned().unwrap_or(zero);
            let disc = &(&b * &b) - &(&a * &c).scale(&rat(4, 1));
            let Some(s) = disc.sqrt_in_field() else { return Outcome::Undecided };
            let two_a_inv = a.scale(&rat(2, 1)).inv().expect("quadratic");
            let mut roots = vec![&(&(-&b) + &s) * &two_a_inv];
            if !s.is_zero() {
                roots.push(&(&(-&b) - &s) * &two_a_inv);
            }
            let mut undecided = false;
            for r in roots {
                let (polys, fixed) = self.eliminate(&polys, &fixed, v, &Poly::constant(r));
                match self.run(polys, fixed, depth + 1) {
                    Outcome::Solution(x) => return Outcome::Solution(x),
                    Outcome::Undecided => undecided = true,
                    Outcome::NoSolution => {}
                }
            }
            return if undecided { Outcome::Undecided } else { Outcome::NoSolution };
        }
        // Only multivariate quadratics remain: guess a value for one variable.
        let v = polys.iter().flat_map(|p| p.vars()).min().expect("nonconstant");
        for guess in [0i64, 1, -1, 2] {
            let (ps, fx) = self.eliminate(&polys, &fixed, v, &Poly::constant(CycNum::from_int(self.order, guess)));
            if let Outcome::Solution(x) = self.run(ps, fx, depth + 1) {
                return Outcome::Solution(x);
            }
        }
        Outcome::Undecided
    }
}

/// Solve `polys = 0` in `nvars` unknowns; candidate solutions must also pass
/// `accept` (typically an open condition such as invertibility).
pub fn solve(nvars: usize, polys: Vec<Poly>, order: u32, accept: &dyn Fn(&[CycNum]) -> bool) -> Outcome {
    let solver = Solver { nvars, order, accept };
    solver.run(polys, vec![None; nvars], 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> CycNum {
        CycNum::from_int(8, v)
    }

    #[test]
    fn linear_then_quadratic() {
        // x + y = 3, x^2 = 2 over Q(ζ8): x = ±√2
        let mut p1 = Poly::default();
        p1.add_term(vec![0], c(1));
        p1.add_term(vec![1], c(1));
        p1.add_term(vec![], c(-3));
        let mut p2 = Poly::default();
        p2.add_term(vec![0, 0], c(1));
        p2.add_term(vec![], c(-2));
        let Outcome::Solution(s) = solve(2, vec![p1.clone(), p2.clone()], 8, &|_| true) else { panic!() };
        assert!(p1.eval(&s, 8).is_zero() && p2.eval(&s, 8).is_zero());
    }

    #[test]
    fn inconsistent_and_out_of_field() {
        let mut p = Poly::default();
        p.add_term(vec![0, 0], c(1));
        p.add_term(vec![], c(1));
        let q = Poly::var(0, 8).add(&Poly::constant(c(-1)));
        // x^2 = -1 and x = 1
        assert_eq!(solve(1, vec![p.clone(), q], 8, &|_| true), Outcome::NoSolution);
        // x^2 = 3 has no root in Q(ζ8)
        let mut r = Poly::default();
        r.add_term(vec![0, 0], c(1));
        r.add_term(vec![], c(-3));
        assert_eq!(solve(1, vec![r], 8, &|_| true), Outcome::Undecided);
    }

    #[test]
    fn free_variables_respect_filter() {
        // xy - 1 = 0 ... after guessing; accept only x != 0
        let mut p = Poly::default();
        p.add_term(vec![0, 1], c(1));
        p.add_term(vec![], c(-1));
        let Outcome::Solution(s) = solve(2, vec![p.clone()], 8, &|v| !v[0].is_zero()) else { panic!() };
        assert!(p.eval(&s, 8).is_zero());
    }
}
