//! Singular points: the smooth / quadratic / biquadratic trichotomy, ranks of
//! quadratic forms and pencils, and the Jacobian singular locus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{linear_part_rank, HomogeneousExpansion};
use crate::fieldpoly::{Field, Monomial, MultiPoly, UniPoly};
use crate::grobner::{projective_dimension, GroebnerStats, IdealBasis, StepBudget};

/// Type of a point of `V` read off from the linear parts `q11`, `q21`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointClass<E> {
    Smooth,
    /// The linear parts are proportional: the form `q_{other,1}` equals
    /// `lambda * q_{star,1}`, where `q_{star,1}` is nonzero.
    Quadratic {
        lambda: E,
        star: u8,
    },
    Biquadratic,
}

impl<E> PointClass<E> {
    pub fn name(&self) -> &'static str {
        match self {
            PointClass::Smooth => "smooth",
            PointClass::Quadratic { .. } => "quadratic",
            PointClass::Biquadratic => "biquadratic",
        }
    }
}

pub fn classify_point<F: Field>(exp: &HomogeneousExpansion<F>) -> PointClass<F::Elem> {
    match linear_part_rank(exp) {
        2 => PointClass::Smooth,
        0 => PointClass::Biquadratic,
        _ => {
            let f = exp.field();
            let a = exp.q(1, 1).linear_coefficients().unwrap();
            let b = exp.q(2, 1).linear_coefficients().unwrap();
            let (star, base, other) = if a.iter().any(|c| !f.is_zero(c)) {
                (1, a, b)
            } else {
                (2, b, a)
            };
            let i = base.iter().position(|c| !f.is_zero(c)).unwrap();
            let lambda = f.div(&other[i], &base[i]).unwrap();
            PointClass::Quadratic { lambda, star }
        }
    }
}

/// Symmetric matrix of a quadratic form, `q(x) = x^T A x`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm<F: Field> {
    field: F,
    matrix: Vec<Vec<F::Elem>>,
}

impl<F: Field> QuadraticForm<F> {
    pub fn new(field: &F, matrix: Vec<Vec<F::Elem>>) -> Result<Self> {
        check_char(field)?;
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Input("quadratic form matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Input(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(QuadraticForm {
            field: field.clone(),
            matrix,
        })
    }

    /// Matrix of a quadratic form given as a polynomial (zero allowed).
    pub fn from_poly(q: &MultiPoly<F>) -> Result<Self> {
        let field = q.field();
        check_char(field)?;
        if !q.is_zero() && q.homogeneous_degree() != Some(2) {
            return Err(Error::Input("not a quadratic form".into()));
        }
        let n = q.nvars();
        let half = field.inv(&field.from_i64(2)).unwrap();
        let mut a = vec![vec![field.zero(); n]; n];
        for (m, c) in q.terms() {
            let e = m.exponents();
            let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            if idx.len() == 1 {
                a[idx[0]][idx[0]] = c.clone();
            } else {
                let h = field.mul(c, &half);
                a[idx[0]][idx[1]] = h.clone();
                a[idx[1]][idx[0]] = h;
            }
        }
        Ok(QuadraticForm {
            field: field.clone(),
            matrix: a,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<F::Elem>] {
        &self.matrix
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn to_poly(&self) -> MultiPoly<F> {
        let f = &self.field;
        let n = self.dim();
        let mut p = MultiPoly::zero(f, n);
        for i in 0..n {
            for j in i..n {
                let c = if i == j {
                    self.matrix[i][i].clone()
                } else {
                    f.add(&self.matrix[i][j], &self.matrix[i][j])
                };
                if !f.is_zero(&c) {
                    let mut e = vec![0u16; n];
                    e[i] += 1;
                    e[j] += 1;
                    p.add_term(Monomial::new(e), c);
                }
            }
        }
        p
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &F::Elem, other: &Self, b: &F::Elem) -> Self {
        let f = &self.field;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(r, s)| {
                r.iter()
                    .zip(s)
                    .map(|(x, y)| f.add(&f.mul(a, x), &f.mul(b, y)))
                    .collect()
            })
            .collect();
        QuadraticForm {
            field: f.clone(),
            matrix,
        }
    }

    /// Rank by symmetric elimination. Each step pivots on a nonzero diagonal
    /// entry; when the remaining diagonal vanishes, a congruence adding one
    /// variable to another creates a diagonal entry `2 a_ij`.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.matrix.clone();
        let mut active: Vec<usize> = (0..self.dim()).collect();
        let mut rank = 0;
        loop {
            let pivot = active.iter().copied().find(|&i| !f.is_zero(&a[i][i]));
            let pivot = match pivot {
                Some(i) => i,
                None => {
                    let mut pair = None;
                    'search: for (s, &i) in active.iter().enumerate() {
                        for &j in &active[s + 1..] {
                            if !f.is_zero(&a[i][j]) {
                                pair = Some((i, j));
                                break 'search;
                            }
                        }
                    }
                    let Some((i, j)) = pair else { return rank };
                    for &k in &active {
                        a[i][k] = f.add(&a[i][k], &a[j][k]);
                    }
                    for &k in &active {
                        a[k][i] = f.add(&a[k][i], &a[k][j]);
                    }
                    i
                }
            };
            let inv = f.inv(&a[pivot][pivot]).unwrap();
            active.retain(|&k| k != pivot);
            for &j in &active {
                if f.is_zero(&a[j][pivot]) {
                    continue;
                }
                let s = f.mul(&a[j][pivot], &inv);
                for &k in &active {
                    let t = f.mul(&s, &a[pivot][k]);
                    a[j][k] = f.sub(&a[j][k], &t);
                }
            }
            rank += 1;
        }
    }
}

fn check_char<F: Field>(field: &F) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::Unsupported(
            "quadratic forms in characteristic 2".into(),
        ));
    }
    Ok(())
}

pub fn quadratic_rank<F: Field>(q: &QuadraticForm<F>) -> usize {
    q.rank()
}

/// The quadratic form whose rank is the rank of a quadratic point:
/// `q22 - lambda q12`, or `q12 - lambda q22` when `q21` is the nonzero form.
pub fn point_quadric<F: Field>(exp: &HomogeneousExpansion<F>) -> Result<MultiPoly<F>> {
    match classify_point(exp) {
        PointClass::Quadratic { lambda, star } => {
            let (main, other) = if star == 1 {
                (exp.q(2, 2), exp.q(1, 2))
            } else {
                (exp.q(1, 2), exp.q(2, 2))
            };
            Ok(&main - &other.scale(&lambda))
        }
        c => Err(Error::Precondition(format!(
            "point rank needs a quadratic point, found a {} point",
            c.name()
        ))),
    }
}

/// Rank of `q22 - lambda q12` on all `M + 2` affine variables.
pub fn point_rank<F: Field>(exp: &HomogeneousExpansion<F>) -> Result<usize> {
    Ok(QuadraticForm::from_poly(&point_quadric(exp)?)?.rank())
}

fn poly_det<F: Field>(m: &[Vec<MultiPoly<F>>]) -> MultiPoly<F> {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = MultiPoly::zero(m[0][0].field(), m[0][0].nvars());
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<MultiPoly<F>>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][c] * &poly_det(&sub);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Generators of the singular locus: the generators of `ideal` and all
/// `expected_codim`-minors of their Jacobian matrix.
pub fn singular_ideal_generators<F: Field>(
    ideal: &IdealBasis<F>,
    expected_codim: usize,
) -> Result<Vec<MultiPoly<F>>> {
    let gens = ideal.generators();
    let n = ideal.nvars();
    if expected_codim == 0 || expected_codim > gens.len() {
        return Err(Error::Input(format!(
            "expected codimension {expected_codim} with {} generators",
            gens.len()
        )));
    }
    let jac: Vec<Vec<MultiPoly<F>>> = gens
        .iter()
        .map(|g| (0..n).map(|v| g.derivative(v)).collect())
        .collect();
    let mut all = gens.to_vec();
    for rows in combinations(gens.len(), expected_codim) {
        for cols in combinations(n, expected_codim) {
            let sub: Vec<Vec<MultiPoly<F>>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                .collect();
            let d = poly_det(&sub);
            if !d.is_zero() && !all.contains(&d) {
                all.push(d);
            }
        }
    }
    Ok(all)
}

/// Projective dimension of the singular locus of the scheme cut by `ideal`,
/// computed from the generators and all `expected_codim`-minors of their
/// Jacobian matrix. Returns `-1` when the locus is empty.
pub fn singular_locus_dimension<F: Field>(
    ideal: &IdealBasis<F>,
    expected_codim: usize,
    budget: StepBudget,
) -> Result<(i64, GroebnerStats)> {
    let all = singular_ideal_generators(ideal, expected_codim)?;
    let full = IdealBasis::new(ideal.field(), ideal.nvars(), all)?;
    projective_dimension(&full, budget)
}

/// Restricts homogeneous polynomials to a seeded random linear subspace of
/// codimension `k`: the last `k` coordinates become random combinations of
/// the others.
pub fn restrict_to_random_subspace<F: Field>(
    polys: &[MultiPoly<F>],
    k: usize,
    seed: u64,
) -> Vec<MultiPoly<F>> {
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let field = first.field();
    let n = first.nvars();
    let m = n - k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images: Vec<MultiPoly<F>> = (0..n)
        .map(|i| {
            if i < m {
                MultiPoly::var(field, m, i)
            } else {
                let c: Vec<F::Elem> = (0..m).map(|_| field.random(&mut rng)).collect();
                MultiPoly::linear(field, &c)
            }
        })
        .collect();
    polys.iter().map(|p| p.compose(&images, m)).collect()
}

/// Certifies `dim Sing <= bound` by checking that the singular locus misses a
/// random linear subspace of codimension `bound + 1`. A `true` answer is a
/// proof; `false` means the slice was not empty and nothing is concluded.
pub fn singular_locus_at_most<F: Field>(
    ideal: &IdealBasis<F>,
    expected_codim: usize,
    bound: i64,
    seed: u64,
    budget: StepBudget,
) -> Result<(bool, GroebnerStats)> {
    let n = ideal.nvars();
    if bound >= n as i64 - 1 {
        return Ok((true, GroebnerStats::default()));
    }
    let all = singular_ideal_generators(ideal, expected_codim)?;
    let k = (bound + 1).max(0) as usize;
    let sliced = restrict_to_random_subspace(&all, k, seed);
    let sliced = IdealBasis::new(ideal.field(), n - k, sliced)?;
    let (d, stats) = projective_dimension(&sliced, budget)?;
    Ok((d < 0, stats))
}

/// A point of the pencil `g2 - lambda g1`; `Infinity` stands for `g1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilParam<E> {
    Infinity,
    Finite(E),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilProfile<E> {
    pub samples: Vec<(PencilParam<E>, usize)>,
    pub min_observed: usize,
    /// Minimum over the pencil over the algebraic closure (rationals only).
    pub exact_minimum: Option<usize>,
}

/// Largest dimension for which the exact pencil minimum is attempted.
const EXACT_PENCIL_MAX_DIM: usize = 10;

/// Ranks along the pencil spanned by `g1`, `g2`: at `g1`, at `g2` and at
/// `sample_count` seeded random members `g2 - lambda g1`.
pub fn pencil_rank_profile<F: Field>(
    g1: &QuadraticForm<F>,
    g2: &QuadraticForm<F>,
    sample_count: usize,
    seed: u64,
) -> Result<PencilProfile<F::Elem>> {
    if g1.dim() != g2.dim() {
        return Err(Error::Input(format!(
            "pencil of forms of sizes {} and {}",
            g1.dim(),
            g2.dim()
        )));
    }
    let f = g1.field();
    let member = |lambda: &F::Elem| g2.combine(&f.one(), g1, &f.neg(lambda));
    let mut samples = vec![
        (PencilParam::Infinity, g1.rank()),
        (PencilParam::Finite(f.zero()), g2.rank()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let l = f.random(&mut rng);
        let r = member(&l).rank();
        samples.push((PencilParam::Finite(l), r));
    }
    let min_observed = samples.iter().map(|s| s.1).min().unwrap();
    let exact_minimum = (f.characteristic() == 0 && g1.dim() <= EXACT_PENCIL_MAX_DIM)
        .then(|| exact_pencil_minimum(g1, g2));
    Ok(PencilProfile {
        samples,
        min_observed,
        exact_minimum,
    })
}

fn field_det<F: Field>(f: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !f.is_zero(&m[r][c])) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[c][c]);
        let inv = f.inv(&m[c][c]).unwrap();
        for r in (c + 1)..n {
            if f.is_zero(&m[r][c]) {
                continue;
            }
            let s = f.mul(&m[r][c], &inv);
            for k in c..n {
                let t = f.mul(&s, &m[c][k]);
                m[r][k] = f.sub(&m[r][k], &t);
            }
        }
    }
    det
}

/// The rank of `g2 - lambda g1` is at most `r` exactly at the common roots of
/// its `(r+1)`-minors. Each minor has degree at most `r + 1` in `lambda` and
/// is recovered by interpolation; a nonconstant gcd means a drop occurs.
fn exact_pencil_minimum<F: Field>(g1: &QuadraticForm<F>, g2: &QuadraticForm<F>) -> usize {
    let f = g1.field();
    let n = g1.dim();
    let at = |l: i64| g2.combine(&f.one(), g1, &f.neg(&f.from_i64(l)));
    let generic = (0..=n as i64).map(|l| at(l).rank()).max().unwrap();
    let mut best = g1.rank();
    for r in 0..generic.min(best) {
        let nodes: Vec<(F::Elem, QuadraticForm<F>)> = (0..=(r + 1) as i64)
            .map(|l| (f.from_i64(l), at(l)))
            .collect();
        let mut g = UniPoly::zero(f);
        let mut exhausted = false;
        'minors: for rows in combinations(n, r + 1) {
            for cols in combinations(n, r + 1) {
                let pts: Vec<(F::Elem, F::Elem)> = nodes
                    .iter()
                    .map(|(l, q)| {
                        let sub = rows
                            .iter()
                            .map(|&i| cols.iter().map(|&j| q.matrix[i][j].clone()).collect())
                            .collect();
                        (l.clone(), field_det(f, sub))
                    })
                    .collect();
                let minor = UniPoly::interpolate(f, &pts);
                g = g.gcd(&minor);
                if !g.is_zero() && g.is_constant() {
                    exhausted = true;
                    break 'minors;
                }
            }
        }
        if !exhausted {
            best = r;
            break;
        }
    }
    best
}
