//! Oracles kept apart from the library: plain dense arithmetic mod a small
//! prime, no Gröbner bases.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

/// Homogeneous polynomial mod `p` as exponent vector -> nonzero coefficient.
pub type SmallPoly = BTreeMap<Vec<u16>, u64>;

pub fn degree(f: &SmallPoly) -> u32 {
    f.keys()
        .next()
        .map_or(0, |e| e.iter().map(|&x| x as u32).sum())
}

fn add_term(f: &mut SmallPoly, e: Vec<u16>, c: u64, p: u64) {
    let v = f.entry(e.clone()).or_insert(0);
    *v = (*v + c) % p;
    if *v == 0 {
        f.remove(&e);
    }
}

fn mul(f: &SmallPoly, g: &SmallPoly, p: u64) -> SmallPoly {
    let mut out = SmallPoly::new();
    for (a, x) in f {
        for (b, y) in g {
            let e: Vec<u16> = a.iter().zip(b).map(|(i, j)| i + j).collect();
            add_term(&mut out, e, x * y % p, p);
        }
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn eval(f: &SmallPoly, x: &[u64], p: u64) -> u64 {
    f.iter().fold(0, |acc, (e, c)| {
        let t = e
            .iter()
            .zip(x)
            .fold(*c, |t, (&k, &xi)| t * pow_mod(xi, k as u64, p) % p);
        (acc + t) % p
    })
}

/// `f(A y)` for an `n x m` matrix `A`.
pub fn restrict(f: &SmallPoly, a: &[Vec<u64>], m: usize, p: u64) -> SmallPoly {
    let forms: Vec<SmallPoly> = a
        .iter()
        .map(|row| {
            let mut l = SmallPoly::new();
            for (j, &c) in row.iter().enumerate() {
                let mut e = vec![0u16; m];
                e[j] = 1;
                add_term(&mut l, e, c, p);
            }
            l
        })
        .collect();
    let mut out = SmallPoly::new();
    for (e, c) in f {
        let mut t = SmallPoly::new();
        t.insert(vec![0; m], *c);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = mul(&t, &forms[i], p);
            }
        }
        for (e2, c2) in t {
            add_term(&mut out, e2, c2, p);
        }
    }
    out
}

/// Exponent vectors of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u16>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + (p - f) * rows[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the forms, in `m` variables, have no common projective zero over
/// the algebraic closure: the degree-`T` part of the ideal is everything,
/// with `T` the Macaulay bound `Σ (d_i − 1) + 1` over the `m` largest degrees.
pub fn irrelevant(forms: &[SmallPoly], m: usize, p: u64) -> bool {
    if m == 0 {
        return true;
    }
    let mut nz: Vec<&SmallPoly> = forms.iter().filter(|f| !f.is_empty()).collect();
    if nz.len() < m {
        return false;
    }
    nz.sort_by_key(|f| std::cmp::Reverse(degree(f)));
    let t = nz.iter().take(m).map(|f| degree(f) - 1).sum::<u32>() + 1;
    let cols = monomials(m, t);
    let index: BTreeMap<&Vec<u16>, usize> = cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::new();
    for f in &nz {
        let d = degree(f);
        if d > t {
            continue;
        }
        for shift in monomials(m, t - d) {
            let mut row = vec![0u64; cols.len()];
            for (e, c) in f.iter() {
                let e2: Vec<u16> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                row[index[&e2]] = *c;
            }
            rows.push(row);
        }
    }
    rank_mod(rows, p) == cols.len()
}

/// Projective dimension of `V(gens) ⊂ P^{n−1}` by slicing: the smallest `j`
/// such that a random codimension-`j` linear subspace misses `V`, minus one.
/// Subspaces of codimension at most `dim V` always meet `V`, so the answer
/// can only be too large, and only if every trial slice is special.
pub fn slicing_dimension<R: Rng>(
    gens: &[SmallPoly],
    n: usize,
    p: u64,
    trials: usize,
    rng: &mut R,
) -> i64 {
    for j in 0..=n {
        let m = n - j;
        let misses = (0..trials.max(1)).any(|_| {
            let a: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let restricted: Vec<SmallPoly> = gens.iter().map(|g| restrict(g, &a, m, p)).collect();
            // A singular A has a kernel vector, a common zero, so it never reports a miss.
            irrelevant(&restricted, m, p)
        });
        if misses {
            return j as i64 - 1;
        }
    }
    unreachable!("the empty subspace always misses V")
}

/// Projective points of `V(gens)` over `F_p`, by a double loop over all of
/// `F_p^n` keeping vectors whose first nonzero coordinate is 1.
pub fn brute_force_points(gens: &[SmallPoly], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(n as u32);
    for code in 1..total {
        let mut x = vec![0u64; n];
        let mut c = code;
        for xi in x.iter_mut().rev() {
            *xi = c % p;
            c /= p;
        }
        if x.iter().find(|&&v| v != 0) != Some(&1) {
            continue;
        }
        if gens.iter().all(|g| eval(g, &x, p) == 0) {
            out.push(x);
        }
    }
    out
}

/// `F_25 = F_5[s]/(s² − 2)`, elements `a + b s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct F25(pub u64, pub u64);

impl F25 {
    pub fn add(self, o: F25) -> F25 {
        F25((self.0 + o.0) % 5, (self.1 + o.1) % 5)
    }
    pub fn mul(self, o: F25) -> F25 {
        F25(
            (self.0 * o.0 + 2 * self.1 * o.1) % 5,
            (self.0 * o.1 + self.1 * o.0) % 5,
        )
    }
    pub fn is_zero(self) -> bool {
        self == F25(0, 0)
    }
    pub fn all() -> Vec<F25> {
        (0..25).map(|k| F25(k % 5, k / 5)).collect()
    }
}

fn eval25(f: &SmallPoly, x: &[F25]) -> F25 {
    f.iter().fold(F25(0, 0), |acc, (e, &c)| {
        let mut t = F25(c % 5, 0);
        for (&k, &xi) in e.iter().zip(x) {
            for _ in 0..k {
                t = t.mul(xi);
            }
        }
        acc.add(t)
    })
}

/// Number of projective points of `V(gens)` over `F_25`; coefficients must
/// be reduced mod 5.
pub fn count_points_f25(gens: &[SmallPoly], n: usize) -> usize {
    let els = F25::all();
    let mut count = 0;
    let total = 25usize.pow(n as u32);
    let mut x = vec![F25(0, 0); n];
    for code in 1..total {
        let mut c = code;
        for xi in x.iter_mut().rev() {
            *xi = els[c % 25];
            c /= 25;
        }
        if x.iter().find(|v| !v.is_zero()) != Some(&F25(1, 0)) {
            continue;
        }
        if gens.iter().all(|g| eval25(g, &x).is_zero()) {
            count += 1;
        }
    }
    count
}

/// `|P^d(F_q)|`, zero for `d < 0`.
pub fn projective_count(q: u64, d: i64) -> u64 {
    if d < 0 {
        0
    } else {
        (0..=d as u32).map(|i| q.pow(i)).sum()
    }
}

/// Projective dimension of a monomial ideal: the largest set `S` of
/// variables containing no generator's support, minus one.
pub fn monomial_dimension(gens: &[Vec<u16>], n: usize) -> i64 {
    let supports: Vec<u32> = gens
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let mut best = 0i64;
    for s in 0u32..(1 << n) {
        if supports.iter().all(|&g| g & !s != 0) {
            best = best.max(s.count_ones() as i64);
        }
    }
    best - 1
}

/// A random monomial ideal in 2..=6 variables: 1..=5 generators of degree 1..=4.
pub fn random_monomial_ideal<R: Rng>(rng: &mut R) -> (usize, Vec<Vec<u16>>) {
    let n = rng.gen_range(2..=6);
    let s = rng.gen_range(1..=5);
    let gens = (0..s)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            let mut e = vec![0u16; n];
            for _ in 0..d {
                e[rng.gen_range(0..n)] += 1;
            }
            e
        })
        .collect();
    (n, gens)
}

/// A random ideal of binomials and trinomials mod `p` in 2..=4 variables,
/// each generator homogeneous of degree 1..=3.
pub fn random_sparse_ideal<R: Rng>(rng: &mut R, p: u64) -> (usize, Vec<SmallPoly>) {
    let n = rng.gen_range(2..=4);
    let s = rng.gen_range(1..=n);
    let mut gens = Vec::new();
    while gens.len() < s {
        let d = rng.gen_range(1..=3);
        let all = monomials(n, d);
        let terms = rng.gen_range(2..=3).min(all.len());
        let mut f = SmallPoly::new();
        while f.len() < terms {
            f.insert(
                all[rng.gen_range(0..all.len())].clone(),
                rng.gen_range(1..p),
            );
        }
        gens.push(f);
    }
    (n, gens)
}

pub fn to_library(
    f: &SmallPoly,
    n: usize,
    field: &fanoci::fieldpoly::PrimeField,
) -> fanoci::fieldpoly::MultiPoly<fanoci::fieldpoly::PrimeField> {
    fanoci::fieldpoly::MultiPoly::from_terms(field, n, f.iter().map(|(e, c)| (e.clone(), *c)))
        .expect("valid terms")
}

pub fn monomial_to_library(
    e: &[u16],
    field: &fanoci::fieldpoly::PrimeField,
) -> fanoci::fieldpoly::MultiPoly<fanoci::fieldpoly::PrimeField> {
    fanoci::fieldpoly::MultiPoly::from_terms(field, e.len(), [(e.to_vec(), 1u64)])
        .expect("valid monomial")
}

/// Library answer for the projective dimension of `V(gens)`.
pub fn library_dimension(
    gens: Vec<fanoci::fieldpoly::MultiPoly<fanoci::fieldpoly::PrimeField>>,
    n: usize,
    p: u64,
) -> i64 {
    let field = fanoci::fieldpoly::PrimeField::new(p).unwrap();
    let ideal = fanoci::grobner::IdealBasis::new(&field, n, gens).unwrap();
    fanoci::grobner::projective_dimension(&ideal, fanoci::grobner::StepBudget(200_000))
        .unwrap()
        .0
}
