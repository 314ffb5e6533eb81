use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::MultiPoly;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Randomized squarefreeness test by restriction to lines.
///
/// The polynomial is homogenized and restricted to `trials` random lines of
/// projective space, giving binary forms. A binary form that is squarefree
/// certifies that `f` is squarefree, since a square factor of `f` restricts to
/// a square factor on every line not contained in `f = 0`. Returns `true` as
/// soon as one restriction is squarefree and `false` when every trial showed a
/// repeated root. A square factor is therefore never missed; a squarefree `f`
/// is misreported only if all lines happen to be tangent.
pub fn squarefree_probabilistic<F: Field>(
    f: &MultiPoly<F>,
    trials: u32,
    seed: u64,
) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Input(
            "squarefree test on the zero polynomial".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::Input(
            "squarefree test needs at least one trial".into(),
        ));
    }
    let field = f.field();
    let d = f.degree().unwrap();
    let p = field.characteristic();
    if p != 0 && p <= d as u64 {
        return Err(Error::Unsupported(format!(
            "derivative test is unsound in characteristic {p} for degree {d}"
        )));
    }
    if d == 0 {
        return Ok(true);
    }
    let n = f.nvars() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valid = 0;
    let mut attempts = 0;
    while valid < trials && attempts < 20 * trials {
        attempts += 1;
        let a: Vec<F::Elem> = (0..n).map(|_| field.random(&mut rng)).collect();
        let b: Vec<F::Elem> = (0..n).map(|_| field.random(&mut rng)).collect();
        let g = restrict_homogenized(f, d, &a, &b);
        if g.is_zero() {
            // line inside the hypersurface
            continue;
        }
        valid += 1;
        let at_infinity = d as usize - g.degree().unwrap();
        if at_infinity <= 1 && g.is_squarefree() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `f^h(a + t b)` where `f^h` is the homogenization of `f` to degree `d`
/// with the extra variable last.
fn restrict_homogenized<F: Field>(
    f: &MultiPoly<F>,
    d: u32,
    a: &[F::Elem],
    b: &[F::Elem],
) -> UniPoly<F> {
    let field = f.field();
    let n = f.nvars();
    let lines: Vec<UniPoly<F>> = (0..=n)
        .map(|i| UniPoly::linear(field, a[i].clone(), b[i].clone()))
        .collect();
    let mut acc = UniPoly::zero(field);
    for (m, c) in f.terms() {
        let mut t = UniPoly::constant(field, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&lines[i]);
            }
        }
        for _ in 0..(d - m.degree()) {
            t = t.mul(&lines[n]);
        }
        acc = acc.add(&t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::{PrimeField, Rationals};

    #[test]
    fn spec_examples() {
        let q = Rationals;
        let x0 = MultiPoly::var(&q, 2, 0);
        let x1 = MultiPoly::var(&q, 2, 1);
        assert!(squarefree_probabilistic(&(&x0 * &x1), 4, 1).unwrap());
        let s = &x0 + &x1;
        assert!(!squarefree_probabilistic(&(&s * &s), 4, 1).unwrap());

        let f = PrimeField::new(101).unwrap();
        let y0 = MultiPoly::var(&f, 2, 0);
        let y1 = MultiPoly::var(&f, 2, 1);
        let g = &(&(&y0 * &y0) * &y1) + &(&y0 * &(&y1 * &y1));
        assert!(squarefree_probabilistic(&g, 8, 7).unwrap());
    }

    #[test]
    fn rejects_small_characteristic_and_zero() {
        let f = PrimeField::new(3).unwrap();
        let x = MultiPoly::var(&f, 1, 0);
        assert!(matches!(
            squarefree_probabilistic(&x.pow(3), 4, 0),
            Err(Error::Unsupported(_))
        ));
        assert!(squarefree_probabilistic(&MultiPoly::zero(&f, 1), 4, 0).is_err());
    }

    #[test]
    fn inhomogeneous_square_detected() {
        // (x0 + 1)^2 * x1
        let q = Rationals;
        let one = MultiPoly::constant(&q, 2, q.one());
        let s = &MultiPoly::var(&q, 2, 0) + &one;
        let g = &(&s * &s) * &MultiPoly::var(&q, 2, 1);
        assert!(!squarefree_probabilistic(&g, 6, 3).unwrap());
        assert!(squarefree_probabilistic(&(&s * &MultiPoly::var(&q, 2, 1)), 6, 3).unwrap());
    }
}
