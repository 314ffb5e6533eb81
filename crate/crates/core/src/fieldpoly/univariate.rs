use super::field::Field;

/// Dense univariate polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        UniPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `a + b t`.
    pub fn linear(field: &F, a: F::Elem, b: F::Elem) -> Self {
        Self::new(field, vec![a, b])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).unwrap_or(&z),
                    other.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Self::new(f, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_i64(i as i64)))
            .collect();
        Self::new(f, c)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let ilc = f.inv(divisor.coeffs.last().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = f.mul(&r[top], &ilc);
            let shift = top - dd;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(&r[shift + i], &f.mul(&q, c));
            }
            r.pop();
            while r.last().is_some_and(|c| f.is_zero(c)) {
                r.pop();
            }
        }
        Self::new(f, r)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lc) => self.scale(&self.field.inv(lc).unwrap()),
            None => self.clone(),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(field: &F, points: &[(F::Elem, F::Elem)]) -> Self {
        let mut acc = Self::zero(field);
        for (i, (xi, yi)) in points.iter().enumerate() {
            if field.is_zero(yi) {
                continue;
            }
            let mut basis = Self::constant(field, field.one());
            let mut denom = field.one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::linear(field, field.neg(xj), field.one()));
                    denom = field.mul(&denom, &field.sub(xi, xj));
                }
            }
            let s = field
                .div(yi, &denom)
                .expect("interpolation nodes must be distinct");
            acc = acc.add(&basis.scale(&s));
        }
        acc
    }

    /// Squarefree over the algebraic closure (needs characteristic 0 or above the degree).
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).is_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::{PrimeField, Rationals};

    #[test]
    fn gcd_finds_common_root() {
        let q = Rationals;
        let i = |v: i64| q.from_i64(v);
        // (t-1)(t-2) and (t-1)(t+3)
        let a = UniPoly::new(&q, vec![i(2), i(-3), i(1)]);
        let b = UniPoly::new(&q, vec![i(-3), i(2), i(1)]);
        assert_eq!(a.gcd(&b), UniPoly::new(&q, vec![i(-1), i(1)]));
        assert!(a.is_squarefree());
        assert!(!a.mul(&a).is_squarefree());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = PrimeField::new(101).unwrap();
        let p = UniPoly::new(&f, vec![5, 0, 7, 1]);
        let pts: Vec<(u64, u64)> = (0..4).map(|x| (x, p.eval(&x))).collect();
        assert_eq!(UniPoly::interpolate(&f, &pts), p);
    }

    #[test]
    fn modular_eval_and_rem() {
        let f = PrimeField::new(7).unwrap();
        let p = UniPoly::new(&f, vec![1, 0, 1]); // t^2 + 1
        assert_eq!(p.eval(&3), 3);
        let r = p.rem(&UniPoly::new(&f, vec![6, 1])); // mod (t - 1)
        assert_eq!(r, UniPoly::constant(&f, 2));
    }
}
