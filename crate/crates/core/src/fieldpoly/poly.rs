use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use crate::error::{Error, Result};

/// Exponent vector. Ordered by graded reverse lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Bitmask of the variables that occur.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        // reverse lex: the last differing exponent decides, smaller wins
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Sparse multivariate polynomial; no zero coefficients are ever stored.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for MultiPoly<F> {}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn monomial(field: &F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    /// Sums the given terms; repeated monomials accumulate and zeros vanish.
    pub fn from_terms<I>(field: &F, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, F::Elem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Input(format!(
                    "exponent vector of length {} in a ring with {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(field: &F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F::Elem, m: &Monomial) {
        if self.field.is_zero(c) {
            return;
        }
        for (om, oc) in other.terms.iter() {
            self.add_term(om.mul(m), self.field.mul(c, oc));
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&self.field.inv(c).expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::Input(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (m, c) in self.terms.iter() {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[var] -= 1;
            out.add_term(Monomial::new(ex), f.mul(c, &f.from_i64(e as i64)));
        }
        out
    }

    /// Replaces every variable `x_i` by `images[i]`; all images share one ring.
    pub fn compose(&self, images: &[MultiPoly<F>], target_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let f = &self.field;
        let mut powers: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .map(|img| vec![Self::constant(f, target_nvars, f.one()), img.clone()])
            .collect();
        let mut out = Self::zero(f, target_nvars);
        for (m, c) in self.terms.iter() {
            let mut t = Self::constant(f, target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Substitutes `x_var := value` where `value` lives in the same ring.
    pub fn substitute(&self, var: usize, value: &MultiPoly<F>) -> Self {
        let images: Vec<_> = (0..self.nvars)
            .map(|i| {
                if i == var {
                    value.clone()
                } else {
                    Self::var(&self.field, self.nvars, i)
                }
            })
            .collect();
        self.compose(&images, self.nvars)
    }

    /// Moves variable `i` to position `mapping[i]` in a ring of `nvars` variables.
    /// Variables mapped to `None` must not occur.
    pub fn remap(&self, nvars: usize, mapping: &[Option<usize>]) -> Result<Self> {
        let mut out = Self::zero(&self.field, nvars);
        for (m, c) in self.terms.iter() {
            let mut ex = vec![0u16; nvars];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => ex[j] = e,
                    None => {
                        return Err(Error::Precondition(format!(
                            "variable x{i} occurs but is dropped by the remapping"
                        )))
                    }
                }
            }
            out.add_term(Monomial::new(ex), c.clone());
        }
        Ok(out)
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coefficients(&self) -> Option<Vec<F::Elem>> {
        if !self.is_zero() && self.homogeneous_degree() != Some(1) {
            return None;
        }
        Some(
            (0..self.nvars)
                .map(|i| self.coeff(&Monomial::var(self.nvars, i)))
                .collect(),
        )
    }

    /// Remainder of `self` modulo the single polynomial `divisor`.
    pub fn remainder(&self, divisor: &Self) -> Self {
        let f = &self.field;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return self.clone(),
        };
        let ilc = f.inv(&lc).expect("nonzero");
        let mut p = self.clone();
        let mut rem = Self::zero(f, self.nvars);
        while let Some((m, c)) = p
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if lm.divides(&m) {
                let q = lm.quotient_of(&m);
                p.add_scaled(divisor, &f.neg(&f.mul(&c, &ilc)), &q);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        rem
    }

    pub fn display_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let coeff = self.field.format(c);
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names(i)
                    } else {
                        format!("{}^{e}", names(i))
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&coeff);
            } else if self.field.is_one(c) {
                s.push_str(&vars.join("*"));
            } else {
                s.push_str(&format!("{coeff}*{}", vars.join("*")));
            }
        }
        s
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|i| format!("x{i}")))
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|i| format!("x{i}")))
    }
}

impl<F: Field> Add for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: Self) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<F: Field> Sub for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: Self) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}

impl<F: Field> Mul for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: Self) -> MultiPoly<F> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, c) in self.terms.iter() {
            out.add_scaled(rhs, c, m);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::{PrimeField, Rationals};

    fn x(i: usize, n: usize) -> MultiPoly<Rationals> {
        MultiPoly::var(&Rationals, n, i)
    }

    #[test]
    fn grevlex_order() {
        // x0 > x1 > x2 in degree one; x1^2 > x0*x2 in grevlex
        let a = Monomial::new(vec![1, 0, 0]);
        let b = Monomial::new(vec![0, 1, 0]);
        assert!(a > b);
        assert!(Monomial::new(vec![0, 2, 0]) > Monomial::new(vec![1, 0, 1]));
        assert!(Monomial::new(vec![0, 0, 2]) > Monomial::new(vec![1, 0, 0]));
    }

    #[test]
    fn eval_examples() {
        let q = Rationals;
        let f = &(&x(0, 3) * &x(1, 3)) + &x(2, 3).pow(2);
        let one = q.one();
        let zero = q.zero();
        assert_eq!(
            f.eval(&[one.clone(), one.clone(), zero.clone()]).unwrap(),
            one
        );
        assert_eq!(
            MultiPoly::zero(&q, 3)
                .eval(&[one.clone(), zero.clone(), one])
                .unwrap(),
            zero
        );
        assert!(f.eval(&[q.one()]).is_err());

        let f5 = PrimeField::new(5).unwrap();
        let sq = MultiPoly::var(&f5, 1, 0).pow(2);
        assert_eq!(sq.eval(&[3]).unwrap(), 4);
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let f = &x(0, 2) + &x(1, 2);
        let g = &f - &x(1, 2);
        assert_eq!(g, x(0, 2));
        assert_eq!((&f - &f).num_terms(), 0);
    }

    #[test]
    fn substitute_and_remainder() {
        // x0^2 with x0 := x1 + 1 gives x1^2 + 2 x1 + 1
        let one = MultiPoly::constant(&Rationals, 2, Rationals.one());
        let f = x(0, 2).pow(2).substitute(0, &(&x(1, 2) + &one));
        let expect = &(&x(1, 2).pow(2) + &x(1, 2).scale(&Rationals.from_i64(2))) + &one;
        assert_eq!(f, expect);
        let g = &x(0, 2) * &(&x(0, 2) + &x(1, 2));
        assert!(g.remainder(&(&x(0, 2) + &x(1, 2))).is_zero());
        assert!(!g.remainder(&x(1, 2)).is_zero());
    }
}
