//! Buchberger's algorithm and dimension of homogeneous ideals.
//!
//! The engine runs the normal selection strategy (smallest lcm first) with the
//! Gebauer–Möller installation of both Buchberger criteria. Dimension is read
//! off the leading-term ideal: the affine dimension of `V(I)` equals the
//! largest set of variables containing the support of no leading monomial.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldpoly::{Field, Monomial, MultiPoly};

/// Maximum number of s-pairs a single computation may process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepBudget(pub usize);

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget(200_000)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub pairs_processed: usize,
    pub zero_reductions: usize,
    pub pairs_pruned: usize,
}

impl GroebnerStats {
    pub fn absorb(&mut self, other: &GroebnerStats) {
        self.pairs_processed += other.pairs_processed;
        self.zero_reductions += other.zero_reductions;
        self.pairs_pruned += other.pairs_pruned;
    }
}

/// Homogeneous generators of an ideal; zero generators are dropped.
#[derive(Clone, Debug)]
pub struct IdealBasis<F: Field> {
    field: F,
    nvars: usize,
    generators: Vec<MultiPoly<F>>,
}

impl<F: Field> IdealBasis<F> {
    pub fn new(field: &F, nvars: usize, generators: Vec<MultiPoly<F>>) -> Result<Self> {
        let mut kept = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.nvars() != nvars {
                return Err(Error::Input(format!(
                    "generator {i} has {} variables, expected {nvars}",
                    g.nvars()
                )));
            }
            if !g.is_homogeneous() {
                return Err(Error::Input(format!("generator {i} is not homogeneous")));
            }
            if !g.is_zero() {
                kept.push(g);
            }
        }
        Ok(IdealBasis {
            field: field.clone(),
            nvars,
            generators: kept,
        })
    }

    pub fn generators(&self) -> &[MultiPoly<F>] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &F {
        &self.field
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerResult<F: Field> {
    /// Reduced, monic, sorted by increasing leading monomial.
    pub basis: Vec<MultiPoly<F>>,
    pub leading: Vec<Monomial>,
    pub stats: GroebnerStats,
}

impl<F: Field> GroebnerResult<F> {
    pub fn normal_form(&self, p: &MultiPoly<F>) -> MultiPoly<F> {
        normal_form(p, &self.basis)
    }

    pub fn contains(&self, p: &MultiPoly<F>) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn projective_dimension(&self, nvars: usize) -> i64 {
        projective_dimension_of_leading(&self.leading, nvars)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lcm
            .cmp(&other.lcm)
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Incremental Buchberger state. Generators may be added after a completion,
/// which lets prefix dimensions of a sequence reuse earlier work.
pub struct Buchberger<F: Field> {
    field: F,
    nvars: usize,
    polys: Vec<MultiPoly<F>>,
    active: Vec<bool>,
    pairs: BinaryHeap<Reverse<Pair>>,
    budget: StepBudget,
    stats: GroebnerStats,
}

impl<F: Field> Buchberger<F> {
    pub fn new(field: &F, nvars: usize, budget: StepBudget) -> Self {
        Buchberger {
            field: field.clone(),
            nvars,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: BinaryHeap::new(),
            budget,
            stats: GroebnerStats::default(),
        }
    }

    pub fn stats(&self) -> GroebnerStats {
        self.stats
    }

    fn active_polys(&self) -> impl Iterator<Item = &MultiPoly<F>> + '_ {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
    }

    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i]
            .leading_monomial()
            .expect("stored polynomials are nonzero")
    }

    fn reduce(&self, p: MultiPoly<F>) -> MultiPoly<F> {
        let basis: Vec<&MultiPoly<F>> = self.active_polys().collect();
        reduce_by(p, &basis)
    }

    /// Reduces `g` by the current basis and installs it if nonzero.
    pub fn add_generator(&mut self, g: &MultiPoly<F>) {
        let h = self.reduce(g.clone());
        if !h.is_zero() {
            self.install(h.monic());
        }
    }

    fn install(&mut self, h: MultiPoly<F>) {
        let hidx = self.polys.len();
        let hlm = h.leading_monomial().unwrap().clone();
        self.polys.push(h);
        self.active.push(false);

        let mut c: Vec<(usize, Monomial)> = (0..hidx)
            .filter(|&g| self.active[g])
            .map(|g| (g, hlm.lcm(self.lm(g))))
            .collect();
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g1, l1)) = c.pop() {
            let coprime = hlm.is_coprime(self.lm(g1));
            let dominated = c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1));
            if coprime || !dominated {
                d.push((g1, l1));
            } else {
                self.stats.pairs_pruned += 1;
            }
        }
        let mut kept: Vec<Reverse<Pair>> = Vec::with_capacity(self.pairs.len() + d.len());
        for Reverse(pair) in std::mem::take(&mut self.pairs).into_vec() {
            let drop = hlm.divides(&pair.lcm)
                && hlm.lcm(self.lm(pair.i)) != pair.lcm
                && hlm.lcm(self.lm(pair.j)) != pair.lcm;
            if drop {
                self.stats.pairs_pruned += 1;
            } else {
                kept.push(Reverse(pair));
            }
        }
        for (g, l) in d {
            if hlm.is_coprime(self.lm(g)) {
                self.stats.pairs_pruned += 1;
            } else {
                kept.push(Reverse(Pair {
                    lcm: l,
                    i: g,
                    j: hidx,
                }));
            }
        }
        self.pairs = BinaryHeap::from(kept);
        for g in 0..hidx {
            if self.active[g] && hlm.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
        self.active[hidx] = true;
    }

    fn spoly(&self, pair: &Pair) -> MultiPoly<F> {
        let f = &self.field;
        let (a, b) = (&self.polys[pair.i], &self.polys[pair.j]);
        let ma = self.lm(pair.i).quotient_of(&pair.lcm);
        let mb = self.lm(pair.j).quotient_of(&pair.lcm);
        let mut s = MultiPoly::zero(f, self.nvars);
        s.add_scaled(a, &f.one(), &ma);
        s.add_scaled(b, &f.neg(&f.one()), &mb);
        s
    }

    /// Processes pairs until none are left.
    pub fn complete(&mut self) -> Result<()> {
        while let Some(Reverse(pair)) = self.pairs.pop() {
            if self.stats.pairs_processed >= self.budget.0 {
                return Err(Error::BudgetExceeded {
                    budget: self.budget.0,
                });
            }
            self.stats.pairs_processed += 1;
            let s = self.spoly(&pair);
            let h = self.reduce(s);
            if h.is_zero() {
                self.stats.zero_reductions += 1;
            } else {
                self.install(h.monic());
            }
        }
        Ok(())
    }

    /// Leading monomials of the current (minimal) basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.active_polys()
            .map(|p| p.leading_monomial().unwrap().clone())
            .collect()
    }

    pub fn into_result(self) -> GroebnerResult<F> {
        let minimal: Vec<MultiPoly<F>> = self.active_polys().cloned().collect();
        let mut basis: Vec<MultiPoly<F>> = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            let others: Vec<&MultiPoly<F>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, p)| p)
                .collect();
            let (lm, lc) = g.leading_term().unwrap();
            let mut tail = g.clone();
            tail.add_term(lm.clone(), self.field.neg(lc));
            let mut r = reduce_by(tail, &others);
            r.add_term(lm.clone(), lc.clone());
            basis.push(r.monic());
        }
        basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        let leading = basis
            .iter()
            .map(|p| p.leading_monomial().unwrap().clone())
            .collect();
        GroebnerResult {
            basis,
            leading,
            stats: self.stats,
        }
    }
}

/// Full reduction of `p` by monic `basis` polynomials.
fn reduce_by<F: Field>(mut p: MultiPoly<F>, basis: &[&MultiPoly<F>]) -> MultiPoly<F> {
    let field = p.field().clone();
    let mut rem = MultiPoly::zero(&field, p.nvars());
    loop {
        let (m, c) = match p.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => break,
        };
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().unwrap().divides(&m));
        match divisor {
            Some(g) => {
                let (glm, glc) = g.leading_term().unwrap();
                let q = glm.quotient_of(&m);
                let factor = field.neg(&field.div(&c, glc).unwrap());
                p.add_scaled(g, &factor, &q);
            }
            None => {
                p.add_term(m.clone(), field.neg(&c));
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// Normal form of `p` with respect to any list of nonzero polynomials.
pub fn normal_form<F: Field>(p: &MultiPoly<F>, basis: &[MultiPoly<F>]) -> MultiPoly<F> {
    let refs: Vec<&MultiPoly<F>> = basis.iter().filter(|g| !g.is_zero()).collect();
    reduce_by(p.clone(), &refs)
}

/// Reduced Gröbner basis under graded reverse lexicographic order.
pub fn groebner_basis<F: Field>(
    ideal: &IdealBasis<F>,
    budget: StepBudget,
) -> Result<GroebnerResult<F>> {
    let mut bb = Buchberger::new(&ideal.field, ideal.nvars, budget);
    for g in ideal.generators() {
        bb.add_generator(g);
    }
    bb.complete()?;
    Ok(bb.into_result())
}

/// Dimension of the projective zero set of a monomial ideal given by generators
/// (or leading monomials of a Gröbner basis). `-1` means empty.
pub fn projective_dimension_of_leading(leading: &[Monomial], nvars: usize) -> i64 {
    assert!(nvars <= 64, "at most 64 variables");
    let mut masks: Vec<u64> = leading.iter().map(Monomial::support_mask).collect();
    if masks.contains(&0) {
        return -1;
    }
    masks.sort_by_key(|m| m.count_ones());
    masks.dedup();
    // keep only masks not containing another mask
    let minimal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect();
    let mut best = nvars + 1;
    min_hitting_set(&minimal, 0, 0, &mut best);
    let affine = nvars as i64 - best as i64;
    (affine - 1).max(-1)
}

/// Smallest set of variables meeting every support mask (branch and bound).
fn min_hitting_set(masks: &[u64], chosen: u64, count: usize, best: &mut usize) {
    if count >= *best {
        return;
    }
    let unhit = masks
        .iter()
        .filter(|&&m| m & chosen == 0)
        .min_by_key(|m| m.count_ones());
    match unhit {
        None => *best = count,
        Some(&m) => {
            let mut bits = m;
            while bits != 0 {
                let v = bits & bits.wrapping_neg();
                bits &= bits - 1;
                min_hitting_set(masks, chosen | v, count + 1, best);
            }
        }
    }
}

/// Dimension of the projective zero set of a homogeneous ideal.
pub fn projective_dimension<F: Field>(
    ideal: &IdealBasis<F>,
    budget: StepBudget,
) -> Result<(i64, GroebnerStats)> {
    let gb = groebner_basis(ideal, budget)?;
    Ok((gb.projective_dimension(ideal.nvars), gb.stats))
}

/// Outcome of the regular-sequence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityOutcome {
    pub regular: bool,
    pub length: usize,
    pub nvars: usize,
    /// Projective dimension after each prefix, starting with the first form.
    pub prefix_dimensions: Vec<i64>,
    /// Codimension in projective space of the full sequence's zero set.
    pub achieved_codim: i64,
    /// 1-based index of the first form that fails to cut the dimension.
    pub first_failure: Option<usize>,
    pub stats: GroebnerStats,
    pub diagnostic: Option<String>,
}

/// Homogeneous forms in `nvars` variables form a regular sequence iff their
/// common projective zero set has codimension equal to their number.
pub fn is_regular_sequence<F: Field>(
    field: &F,
    nvars: usize,
    forms: &[MultiPoly<F>],
    budget: StepBudget,
) -> Result<RegularityOutcome> {
    if forms.is_empty() {
        return Err(Error::Input(
            "regular-sequence test on an empty sequence".into(),
        ));
    }
    for (i, f) in forms.iter().enumerate() {
        if f.nvars() != nvars || !f.is_homogeneous() {
            return Err(Error::Input(format!(
                "form {} is not homogeneous in {nvars} variables",
                i + 1
            )));
        }
    }
    let k = forms.len();
    if k > nvars {
        return Ok(RegularityOutcome {
            regular: false,
            length: k,
            nvars,
            prefix_dimensions: Vec::new(),
            achieved_codim: 0,
            first_failure: Some(nvars + 1),
            stats: GroebnerStats::default(),
            diagnostic: Some(format!("{k} forms cannot be regular in {nvars} variables")),
        });
    }
    let mut bb = Buchberger::new(field, nvars, budget);
    let mut dims = Vec::with_capacity(k);
    let mut first_failure = None;
    for (i, f) in forms.iter().enumerate() {
        bb.add_generator(f);
        bb.complete()?;
        let d = projective_dimension_of_leading(&bb.leading_monomials(), nvars);
        if first_failure.is_none() && d > nvars as i64 - 2 - i as i64 {
            first_failure = Some(i + 1);
        }
        dims.push(d);
    }
    let last = *dims.last().unwrap();
    Ok(RegularityOutcome {
        regular: first_failure.is_none(),
        length: k,
        nvars,
        achieved_codim: nvars as i64 - 1 - last,
        prefix_dimensions: dims,
        first_failure,
        stats: bb.stats(),
        diagnostic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::{PrimeField, Rationals};

    fn vars<F: Field>(f: &F, n: usize) -> Vec<MultiPoly<F>> {
        (0..n).map(|i| MultiPoly::var(f, n, i)).collect()
    }

    #[test]
    fn coordinate_generators_are_their_own_basis() {
        let q = Rationals;
        let x = vars(&q, 3);
        let ideal = IdealBasis::new(&q, 3, vec![x[0].clone(), x[1].clone()]).unwrap();
        let gb = groebner_basis(&ideal, StepBudget::default()).unwrap();
        assert_eq!(gb.basis, vec![x[1].clone(), x[0].clone()]);
    }

    #[test]
    fn one_spair_example() {
        // {x0 x1 - x2^2, x0}: basis contains x0 and x2^2
        let q = Rationals;
        let x = vars(&q, 3);
        let g = &(&x[0] * &x[1]) - &x[2].pow(2);
        let ideal = IdealBasis::new(&q, 3, vec![g, x[0].clone()]).unwrap();
        let gb = groebner_basis(&ideal, StepBudget::default()).unwrap();
        assert!(gb.basis.contains(&x[0]));
        assert!(gb.basis.contains(&x[2].pow(2)));
        assert_eq!(gb.basis.len(), 2);
    }

    #[test]
    fn hand_buchberger_run() {
        // {x0^2, x0 x1 + x1^2}: leading monomials x0^2, x0 x1, x1^3
        let q = Rationals;
        let x = vars(&q, 2);
        let g2 = &(&x[0] * &x[1]) + &x[1].pow(2);
        let ideal = IdealBasis::new(&q, 2, vec![x[0].pow(2), g2.clone()]).unwrap();
        let gb = groebner_basis(&ideal, StepBudget::default()).unwrap();
        let mut lms: Vec<Vec<u16>> = gb.leading.iter().map(|m| m.exponents().to_vec()).collect();
        lms.sort();
        assert_eq!(lms, vec![vec![0, 3], vec![1, 1], vec![2, 0]]);
        assert!(gb.contains(&x[0].pow(2)));
        assert!(gb.contains(&g2));
        assert!(gb.contains(&x[1].pow(3)));
        assert!(!gb.contains(&x[1].pow(2)));
    }

    #[test]
    fn dimension_examples() {
        let q = Rationals;
        let x = vars(&q, 3);
        let dim = |gens: Vec<MultiPoly<Rationals>>| {
            projective_dimension(
                &IdealBasis::new(&q, 3, gens).unwrap(),
                StepBudget::default(),
            )
            .unwrap()
            .0
        };
        assert_eq!(dim(vec![x[0].clone()]), 1);
        assert_eq!(dim(x.clone()), -1);
        assert_eq!(dim(vec![&(&x[0] * &x[1]) - &x[2].pow(2)]), 1);
        assert_eq!(dim(vec![]), 2);
    }

    #[test]
    fn inhomogeneous_generator_rejected() {
        let q = Rationals;
        let x = vars(&q, 2);
        let one = MultiPoly::constant(&q, 2, q.one());
        assert!(IdealBasis::new(&q, 2, vec![&x[0] + &one]).is_err());
    }

    #[test]
    fn regular_sequence_examples() {
        let q = Rationals;
        let x = vars(&q, 4);
        let out = is_regular_sequence(&q, 4, &x[..2], StepBudget::default()).unwrap();
        assert!(out.regular);
        assert_eq!(out.achieved_codim, 2);

        let y = vars(&q, 3);
        let out = is_regular_sequence(&q, 3, &[y[0].pow(2), &y[0] * &y[1]], StepBudget::default())
            .unwrap();
        assert!(!out.regular);
        assert_eq!(out.first_failure, Some(2));
        assert_eq!(out.achieved_codim, 1);

        let f = PrimeField::new(101).unwrap();
        let z = vars(&f, 4);
        let sq = z
            .iter()
            .fold(MultiPoly::zero(&f, 4), |acc, v| &acc + &v.pow(2));
        let cu = z
            .iter()
            .fold(MultiPoly::zero(&f, 4), |acc, v| &acc + &v.pow(3));
        let out = is_regular_sequence(&f, 4, &[sq, cu], StepBudget::default()).unwrap();
        assert!(out.regular);
        assert_eq!(out.prefix_dimensions, vec![2, 1]);
    }

    #[test]
    fn too_long_sequence_is_not_regular() {
        let q = Rationals;
        let x = vars(&q, 2);
        let out = is_regular_sequence(
            &q,
            2,
            &[x[0].clone(), x[1].clone(), x[0].clone()],
            StepBudget::default(),
        )
        .unwrap();
        assert!(!out.regular);
        assert!(out.diagnostic.is_some());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = PrimeField::new(101).unwrap();
        let x = vars(&f, 3);
        let g = &(&x[0] * &x[1]) - &x[2].pow(2);
        let ideal = IdealBasis::new(&f, 3, vec![g, x[0].clone()]).unwrap();
        assert!(groebner_basis(&ideal, StepBudget(1)).is_ok());
        assert!(matches!(
            groebner_basis(&ideal, StepBudget(0)),
            Err(Error::BudgetExceeded { budget: 0 })
        ));
    }
}
