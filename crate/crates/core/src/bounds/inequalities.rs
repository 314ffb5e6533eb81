use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{int, ratio, ser_display, Check, Relation};
use crate::error::{Error, Result};

fn one() -> BigRational {
    BigRational::one()
}

/// `α²/(α−1)` for `α ∈ (1, 2]`.
pub fn improved_4n2(alpha: &BigRational) -> Result<BigRational> {
    if *alpha <= one() || *alpha > int(2) {
        return Err(Error::Input(format!("alpha = {alpha} outside (1, 2]")));
    }
    Ok(alpha * alpha / (alpha - one()))
}

/// `(2Σl+Σu)² / (Σl(Σl+Σu))` for `Σl >= 1`, `Σu >= 0`.
pub fn graph_bound(sigma_l: &BigRational, sigma_u: &BigRational) -> Result<BigRational> {
    if *sigma_l < one() {
        return Err(Error::Input(format!("sigma_l = {sigma_l} is below 1")));
    }
    if *sigma_u < BigRational::zero() {
        return Err(Error::Input(format!("sigma_u = {sigma_u} is negative")));
    }
    let s = int(2) * sigma_l + sigma_u;
    Ok(&s * &s / (sigma_l * (sigma_l + sigma_u)))
}

/// `t³/(t−1)` for `t > 1`.
pub fn beta(t: &BigRational) -> Result<BigRational> {
    if *t <= one() {
        return Err(Error::Input(format!("t = {t} is not above 1")));
    }
    Ok(t * t * t / (t - one()))
}

/// Sorted rationals `p/q` with `q <= max_den` in `[lo, hi]`, dropping `lo`
/// when `open_lo`.
pub fn rational_grid(
    lo: &BigRational,
    hi: &BigRational,
    open_lo: bool,
    max_den: i128,
) -> Vec<BigRational> {
    let mut out = BTreeSet::new();
    for q in 1..=max_den {
        let qb = int(q);
        let start = (lo * &qb).ceil().to_integer();
        let stop = (hi * &qb).floor().to_integer();
        let mut p = start;
        while p <= stop {
            let x = BigRational::new(p.clone(), qb.numer().clone());
            if !(open_lo && x == *lo) {
                out.insert(x);
            }
            p += 1;
        }
    }
    out.into_iter().collect()
}

/// Outcome of evaluating a function along a sorted grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicitySweep {
    pub name: String,
    pub points: usize,
    #[serde(serialize_with = "ser_display")]
    pub minimum: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub argmin: BigRational,
    pub checks: Vec<Check>,
}

impl MonotonicitySweep {
    pub fn ok(&self) -> bool {
        super::all_ok(&self.checks)
    }
}

fn min_of(xs: &[BigRational], ys: &[BigRational]) -> (BigRational, BigRational) {
    let i = (0..ys.len())
        .min_by(|&a, &b| ys[a].cmp(&ys[b]))
        .expect("non-empty grid");
    (ys[i].clone(), xs[i].clone())
}

fn count_bool(name: &str, n: usize, total: usize) -> Check {
    Check::new(name, int(n as i128), Relation::Eq, int(total as i128))
}

/// `improved_4n2 >= 4` on the grid of `(1, 2]`, with equality only at 2.
pub fn improved_4n2_sweep(max_den: i128) -> MonotonicitySweep {
    let xs = rational_grid(&one(), &int(2), true, max_den);
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|a| improved_4n2(a).expect("grid inside domain"))
        .collect();
    let (minimum, argmin) = min_of(&xs, &ys);
    let four = int(4);
    let above = ys.iter().filter(|y| **y >= four).count();
    let equal_away_from_two = xs
        .iter()
        .zip(&ys)
        .filter(|(x, y)| **y == four && **x != int(2))
        .count();
    let decreasing = ys.windows(2).filter(|w| w[1] < w[0]).count();
    let checks = vec![
        Check::new(
            "improved_4n2(2) = 4",
            improved_4n2(&int(2)).expect("2 in domain"),
            Relation::Eq,
            four.clone(),
        ),
        count_bool("grid points with value >= 4", above, ys.len()),
        Check::new(
            "grid points with value 4 other than alpha = 2",
            int(equal_away_from_two as i128),
            Relation::Eq,
            int(0),
        ),
        count_bool("strictly decreasing steps", decreasing, ys.len() - 1),
        Check::new("grid minimum", minimum.clone(), Relation::Eq, four),
    ];
    MonotonicitySweep {
        name: "alpha^2/(alpha-1) on (1,2]".into(),
        points: xs.len(),
        minimum,
        argmin,
        checks,
    }
}

/// Sign pattern of `β(t) = t³/(t−1)`: decreasing on the grid of `(1, 3/2]`,
/// increasing on `[3/2, 4]`, minimum `27/4` at `3/2`.
pub fn beta_sweep(max_den: i128) -> MonotonicitySweep {
    let mid = ratio(3, 2);
    let left = rational_grid(&one(), &mid, true, max_den);
    let right = rational_grid(&mid, &int(4), false, max_den);
    let bl: Vec<BigRational> = left.iter().map(|t| beta(t).expect("t > 1")).collect();
    let br: Vec<BigRational> = right.iter().map(|t| beta(t).expect("t > 1")).collect();
    let dec = bl.windows(2).filter(|w| w[1] < w[0]).count();
    let inc = br.windows(2).filter(|w| w[1] > w[0]).count();
    let mut xs = left.clone();
    xs.extend(right.iter().skip(1).cloned());
    let mut ys = bl.clone();
    ys.extend(br.iter().skip(1).cloned());
    let (minimum, argmin) = min_of(&xs, &ys);
    let checks = vec![
        Check::new(
            "beta(3/2) = 27/4",
            beta(&mid).expect("3/2 > 1"),
            Relation::Eq,
            ratio(27, 4),
        ),
        count_bool("strictly decreasing steps on (1, 3/2]", dec, bl.len() - 1),
        count_bool("strictly increasing steps on [3/2, 4]", inc, br.len() - 1),
        Check::new(
            "grid minimum = 27/4",
            minimum.clone(),
            Relation::Eq,
            ratio(27, 4),
        ),
        Check::new("grid argmin = 3/2", argmin.clone(), Relation::Eq, mid),
    ];
    MonotonicitySweep {
        name: "t^3/(t-1) on (1,4]".into(),
        points: xs.len(),
        minimum,
        argmin,
        checks,
    }
}

/// For each `α` on the grid of `(1, 2]` and `Σl ∈ {1, 3/2, 2, 3, 5}`, the
/// graph bound over `Σu >= x0 Σl` with `x0 = (2−α)/(α−1)`: equal to
/// `α²/(α−1)` at the boundary and increasing beyond it.
pub fn graph_bound_sweep(max_den: i128) -> MonotonicitySweep {
    let alphas = rational_grid(&one(), &int(2), true, max_den);
    let sigmas = [int(1), ratio(3, 2), int(2), int(3), int(5)];
    let steps: Vec<BigRational> = (0..=8).map(|k| ratio(k, 4)).collect();
    let (mut total, mut at_boundary, mut above, mut increasing, mut steps_total) =
        (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut minimum: Option<(BigRational, BigRational)> = None;
    for a in &alphas {
        let bound = improved_4n2(a).expect("grid inside domain");
        let x0 = (int(2) - a) / (a - one());
        for sl in &sigmas {
            let base = &x0 * sl;
            let vals: Vec<BigRational> = steps
                .iter()
                .map(|s| graph_bound(sl, &(&base + s)).expect("inside domain"))
                .collect();
            total += vals.len();
            if vals[0] == bound {
                at_boundary += 1;
            }
            above += vals.iter().filter(|v| **v >= bound).count();
            increasing += vals.windows(2).filter(|w| w[1] > w[0]).count();
            steps_total += vals.len() - 1;
            let gap = &vals[0] - &bound;
            if minimum.as_ref().is_none_or(|(g, _)| gap < *g) {
                minimum = Some((gap, a.clone()));
            }
        }
    }
    let pairs = alphas.len() * sigmas.len();
    let (minimum, argmin) = minimum.expect("non-empty grid");
    let checks = vec![
        Check::new(
            "graph_bound(1, 0) = 4",
            graph_bound(&one(), &BigRational::zero()).expect("domain"),
            Relation::Eq,
            int(4),
        ),
        count_bool(
            "boundary values equal alpha^2/(alpha-1)",
            at_boundary,
            pairs,
        ),
        count_bool("values >= alpha^2/(alpha-1)", above, total),
        count_bool(
            "strictly increasing steps in sigma_u",
            increasing,
            steps_total,
        ),
        Check::new(
            "smallest gap to alpha^2/(alpha-1)",
            minimum.clone(),
            Relation::Ge,
            int(0),
        ),
    ];
    MonotonicitySweep {
        name: "(2sl+su)^2/(sl(sl+su)) over su >= (2-alpha)/(alpha-1) sl".into(),
        points: total,
        minimum,
        argmin,
        checks,
    }
}

/// Grid check that `f(α) rel bound` for every `α` in `(1, 2]`; the reported
/// left side is the grid minimum.
fn over_alpha(
    name: &str,
    max_den: i128,
    f: impl Fn(&BigRational) -> BigRational,
    rel: Relation,
    bound: BigRational,
) -> Check {
    let xs = rational_grid(&one(), &int(2), true, max_den);
    let min = xs.iter().map(&f).min().expect("non-empty grid");
    let mut c = Check::new(name, min, rel, bound.clone());
    c.holds = xs.iter().all(|x| rel.eval(&f(x), &bound));
    c
}

/// The inequalities closing the exclusion of quadratic and biquadratic
/// centres. Multiplicities are in units of `n²`; `α = ν/n`.
pub fn exclusion_margins(d1: u32, d2: u32) -> Result<Vec<Check>> {
    if d1 < 2 || d1 > d2 {
        return Err(Error::Input(format!(
            "need 2 <= d1 <= d2, got d1 = {d1}, d2 = {d2}"
        )));
    }
    let dd = int(d1 as i128 * d2 as i128);
    let den = 64;
    let beta_ = |a: &BigRational| beta(a).expect("alpha > 1");
    let a2 = ratio(3, 2);
    let two = int(2);
    let quad_mult = |a: &BigRational| int(2) * a * a + int(8) * (int(3) - a);
    let biquad_mult = |a: &BigRational| int(4) * a * a + int(16) * (int(3) - a);
    let displayed = |a: &BigRational| int(2) * (a * a + a * a / (a - one())) - ratio(7, 4);
    let simplified = |a: &BigRational| int(2) * (beta_(a) - ratio(7, 4));

    let out = vec![
        // Multiplicity bounds of the self-intersection at quadratic and biquadratic points.
        Check::new(
            "(7/(d1d2)) * d1d2 = 7",
            int(7) / &dd * &dd,
            Relation::Eq,
            int(7),
        ),
        Check::new(
            "(72/(7d1d2)) * d1d2 = 72/7",
            ratio(72, 7) / &dd * &dd,
            Relation::Eq,
            ratio(72, 7),
        ),
        Check::new(
            "(9/(d1d2)) * d1d2 = 9",
            int(9) / &dd * &dd,
            Relation::Eq,
            int(9),
        ),
        Check::new(
            "nu <= sqrt(7/2) n < 2n, via 7/2 < 4",
            ratio(7, 2),
            Relation::Lt,
            int(4),
        ),
        Check::new("nu <= 3/2 n < 2n", ratio(3, 2), Relation::Lt, int(2)),
        // Divisorial case, quadratic.
        over_alpha(
            "2a^2 + 8(3-a) >= 16 on (1,2]",
            den,
            quad_mult,
            Relation::Ge,
            int(16),
        ),
        Check::new(
            "2a^2 + 8(3-a) at a = 2",
            quad_mult(&two),
            Relation::Eq,
            int(16),
        ),
        Check::new(
            "16 > 7 contradicts the quadratic bound",
            int(16),
            Relation::Gt,
            int(7),
        ),
        // Codimension 2, degree >= 4.
        over_alpha(
            "a^2 + a^2/(a-1) = a^3/(a-1) on (1,2]",
            den,
            |a| a * a + a * a / (a - one()) - beta_(a),
            Relation::Eq,
            int(0),
        ),
        over_alpha(
            "2(a^3/(a-1) - 7/4) >= 10 on (1,2]",
            den,
            simplified,
            Relation::Ge,
            int(10),
        ),
        Check::new(
            "2(a^3/(a-1) - 7/4) at a = 3/2",
            simplified(&a2),
            Relation::Eq,
            int(10),
        ),
        Check::new(
            "10 > 7 contradicts the quadratic bound",
            int(10),
            Relation::Gt,
            int(7),
        ),
        over_alpha(
            "displayed 2(a^2 + a^2/(a-1)) - 7/4 equals the simplified form",
            den,
            |a| displayed(a) - simplified(a),
            Relation::Eq,
            int(0),
        )
        .informational(),
        Check::new(
            "displayed minus simplified form at a = 3/2",
            displayed(&a2) - simplified(&a2),
            Relation::Eq,
            ratio(7, 4),
        ),
        // Codimension 2, degree 2.
        over_alpha(
            "2a^3/(a-1) >= 27/2 on (1,2]",
            den,
            |a| int(2) * beta_(a),
            Relation::Ge,
            ratio(27, 2),
        ),
        Check::new(
            "72/7 < 27/2 (144 < 189)",
            ratio(72, 7),
            Relation::Lt,
            ratio(27, 2),
        ),
        Check::new(
            "cross-multiplied: 72*2 < 27*7",
            int(144),
            Relation::Lt,
            int(189),
        ),
        // Biquadratic, divisorial.
        over_alpha(
            "4a^2 + 16(3-a) >= 32 on (1,2]",
            den,
            biquad_mult,
            Relation::Ge,
            int(32),
        ),
        Check::new(
            "4a^2 + 16(3-a) at a = 2",
            biquad_mult(&two),
            Relation::Eq,
            int(32),
        ),
        Check::new(
            "32 > 9 contradicts the biquadratic bound",
            int(32),
            Relation::Gt,
            int(9),
        ),
        Check::new(
            "10 > 9 contradicts the biquadratic bound",
            int(10),
            Relation::Gt,
            int(9),
        ),
        // Biquadratic, codimension 3.
        over_alpha(
            "4(a^3/(a-1))/2 >= 27/2 on (1,2]",
            den,
            |a| int(4) * beta_(a) / int(2),
            Relation::Ge,
            ratio(27, 2),
        ),
        Check::new(
            "9 < 27/2 contradicts the biquadratic bound",
            int(9),
            Relation::Lt,
            ratio(27, 2),
        ),
    ];
    Ok(out)
}
