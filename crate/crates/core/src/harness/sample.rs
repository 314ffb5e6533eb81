use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_points;
use crate::error::{Error, Result};
use crate::expansion::AmbientSetup;
use crate::fieldpoly::{Field, MultiPoly, PrimeField};

/// Parameters of a stream of random pairs over a prime field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub setup: AmbientSetup,
    pub p: u64,
    /// Probability that a given monomial appears.
    pub density: f64,
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledPair<F: Field> {
    pub index: usize,
    pub f1: MultiPoly<F>,
    pub f2: MultiPoly<F>,
}

/// Exponent vectors of all monomials of degree `d` in `n` variables, in
/// lexicographic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u16>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            go(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, d, &mut vec![0; n], &mut out);
    }
    out
}

fn random_form<R: Rng>(
    field: &PrimeField,
    n: usize,
    d: u32,
    density: f64,
    rng: &mut R,
) -> Result<MultiPoly<PrimeField>> {
    let p = field.modulus();
    let terms: Vec<(Vec<u16>, u64)> = monomials_of_degree(n, d)
        .into_iter()
        .filter_map(|e| {
            let keep = rng.gen_bool(density);
            let c = rng.gen_range(1..p);
            keep.then_some((e, c))
        })
        .collect();
    let f = MultiPoly::from_terms(field, n, terms)?;
    if f.is_zero() {
        return Err(Error::Input(format!(
            "sampled a zero form of degree {d}; raise the density"
        )));
    }
    Ok(f)
}

fn validate(spec: &SampleSpec) -> Result<PrimeField> {
    spec.setup.validate()?;
    if spec.p == 0 {
        return Err(Error::Input(
            "sampling needs a prime field; rational pairs must be given explicitly".into(),
        ));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::Input(format!(
            "density {} outside (0, 1]",
            spec.density
        )));
    }
    PrimeField::new(spec.p)
}

/// The pair with the given index in the stream defined by `spec`. Each index
/// has its own random stream, so pairs do not depend on one another.
pub fn sample_pair_at(spec: &SampleSpec, index: usize) -> Result<SampledPair<PrimeField>> {
    let field = validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let n = spec.setup.homogeneous_vars();
    let f1 = random_form(&field, n, spec.setup.d1, spec.density, &mut rng)?;
    let f2 = random_form(&field, n, spec.setup.d2, spec.density, &mut rng)?;
    Ok(SampledPair { index, f1, f2 })
}

/// First pair of the stream.
pub fn sample_pair(spec: &SampleSpec) -> Result<(MultiPoly<PrimeField>, MultiPoly<PrimeField>)> {
    let s = sample_pair_at(spec, 0)?;
    Ok((s.f1, s.f2))
}

fn normalize<F: Field>(field: &F, p: Vec<F::Elem>) -> Option<Vec<F::Elem>> {
    let lead = p.iter().find(|c| !field.is_zero(c))?;
    let inv = field.inv(lead).unwrap();
    Some(p.iter().map(|c| field.mul(c, &inv)).collect())
}

/// Up to `count` distinct points of `V(F_p)`, found by listing the points of
/// `V` on random planes. Points are returned in discovery order.
pub fn sample_points<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = f1.field();
    if field.elements().is_none() {
        return Err(Error::Unsupported(
            "point sampling needs a finite field".into(),
        ));
    }
    let n = f1.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let max_planes = 20 * count + 20;
    for _ in 0..max_planes {
        if out.len() >= count {
            break;
        }
        let basis: Vec<Vec<F::Elem>> = (0..3)
            .map(|_| (0..n).map(|_| field.random(&mut rng)).collect())
            .collect();
        let images: Vec<MultiPoly<F>> = (0..n)
            .map(|i| {
                MultiPoly::linear(
                    field,
                    &[
                        basis[0][i].clone(),
                        basis[1][i].clone(),
                        basis[2][i].clone(),
                    ],
                )
            })
            .collect();
        let g1 = f1.compose(&images, 3);
        let g2 = f2.compose(&images, 3);
        if g1.is_zero() || g2.is_zero() {
            continue;
        }
        for st in enumerate_points(&[g1, g2], usize::MAX)?.points {
            let x: Vec<F::Elem> = (0..n)
                .map(|i| {
                    (0..3).fold(field.zero(), |acc, k| {
                        field.add(&acc, &field.mul(&st[k], &basis[k][i]))
                    })
                })
                .collect();
            if let Some(x) = normalize(field, x) {
                if seen.insert(x.clone()) {
                    out.push(x);
                    if out.len() >= count {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}
