//! Exact arithmetic behind the codimension estimates and the exclusion
//! argument: the per-condition ledger, the two counting methods for regular
//! sequences, hypertangent product chains and the multiplicity inequalities.
//!
//! Everything here is exact (`i128`, `BigInt`, `BigRational`); comparisons
//! carry zero tolerance.

mod chains;
mod inequalities;
mod ledger;
mod method1;
mod theta;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansion::AmbientSetup;

pub use chains::{hypertangent_chain, ChainFactor, ChainResult, ChainVariant};
pub use inequalities::{
    beta, beta_sweep, exclusion_margins, graph_bound, graph_bound_sweep, improved_4n2,
    improved_4n2_sweep, rational_grid, MonotonicitySweep,
};
pub use ledger::{
    condition_bound, lambda, theorem02_minimum, theorem02_target, BoundEntry, BoundLedger,
    BoundTag, Prop31Detail, Prop33Detail,
};
pub use method1::{method1_table, BinomialEntry, Method1Claim, Method1Table};
pub use theta::{
    omega1, omega2, omega3, omega4, prop35_sweep, prop35_target, theta_b, theta_b_worst,
    Prop35Report, ThetaRow,
};

/// Smallest `M` accepted by the ledger. Values in `11..13` are exploratory
/// and produce a warning.
pub const MIN_EXPLORATORY_M: usize = 11;
pub const MIN_THEOREM_M: usize = 13;

/// Which points the degree profile belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Smooth points: profile of (R1), `M − 2` forms.
    Smooth,
    /// Quadratic points: profile of (R2.2), `M − 1` forms.
    Singular,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Smooth => "smooth",
            Regime::Singular => "singular",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    pub fn eval(&self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }
}

/// One exact comparison. `required` checks decide verdicts; the others record
/// claims whose failure is reported but expected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigRational,
    pub relation: Relation,
    #[serde(serialize_with = "ser_display")]
    pub rhs: BigRational,
    pub holds: bool,
    pub required: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        lhs: impl Into<Exact>,
        relation: Relation,
        rhs: impl Into<Exact>,
    ) -> Check {
        let (lhs, rhs) = (lhs.into().0, rhs.into().0);
        let holds = relation.eval(&lhs, &rhs);
        Check {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds,
            required: true,
        }
    }

    /// Marks the check as informational.
    pub fn informational(mut self) -> Check {
        self.required = false;
        self
    }

    /// Fails only if required and false.
    pub fn ok(&self) -> bool {
        self.holds || !self.required
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = match (self.holds, self.required) {
            (true, _) => "ok",
            (false, true) => "FAILS",
            (false, false) => "does not hold",
        };
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.name,
            self.lhs,
            self.relation.symbol(),
            self.rhs,
            mark
        )
    }
}

/// All required checks hold.
pub fn all_ok(checks: &[Check]) -> bool {
    checks.iter().all(Check::ok)
}

/// Conversion target for `Check` operands.
pub struct Exact(pub BigRational);

impl From<BigRational> for Exact {
    fn from(v: BigRational) -> Self {
        Exact(v)
    }
}

impl From<&BigRational> for Exact {
    fn from(v: &BigRational) -> Self {
        Exact(v.clone())
    }
}

impl From<BigInt> for Exact {
    fn from(v: BigInt) -> Self {
        Exact(BigRational::from_integer(v))
    }
}

impl From<&BigInt> for Exact {
    fn from(v: &BigInt) -> Self {
        Exact(BigRational::from_integer(v.clone()))
    }
}

impl From<i128> for Exact {
    fn from(v: i128) -> Self {
        Exact(int(v))
    }
}

pub(crate) fn ser_display<T: fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn ratio(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `binom(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `binom(n, k)` without overflow.
pub fn big_binom(n: i128, k: i128) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Validates `(M, d1, d2)` for the ledger. Returns warnings for the
/// exploratory range `11 <= M < 13`.
pub fn admissible(m: usize, d1: u32, d2: u32) -> Result<(AmbientSetup, Vec<String>)> {
    let setup = AmbientSetup::new(m, d1, d2)?;
    if m < MIN_EXPLORATORY_M {
        return Err(Error::Input(format!(
            "M = {m} is below {MIN_EXPLORATORY_M}; the estimates are not meaningful there"
        )));
    }
    let mut warnings = Vec::new();
    if m < MIN_THEOREM_M {
        warnings.push(format!(
            "M = {m} is below {MIN_THEOREM_M}: exploratory values only, the theorems do not apply"
        ));
    }
    Ok((setup, warnings))
}

/// All `(d1, d2)` with `2 <= d1 <= d2` and `d1 + d2 = M + 2`.
pub fn admissible_splits(m: usize) -> Vec<(u32, u32)> {
    let total = m as u32 + 2;
    (2..=total / 2).map(|d1| (d1, total - d1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(9, 3), 84);
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(5, -1), 0);
        assert_eq!(big_binom(122, 61), big_binom(121, 60) + big_binom(121, 61));
        for n in 0..40 {
            for k in 0..=n {
                assert_eq!(BigInt::from(binom(n, k)), big_binom(n, k));
            }
        }
    }

    #[test]
    fn splits() {
        assert_eq!(
            admissible_splits(13),
            vec![(2, 13), (3, 12), (4, 11), (5, 10), (6, 9), (7, 8)]
        );
        assert_eq!(admissible_splits(14).last(), Some(&(8, 8)));
        assert!(admissible(10, 2, 10).is_err());
        assert_eq!(admissible(12, 2, 12).unwrap().1.len(), 1);
        assert!(admissible(13, 6, 9).unwrap().1.is_empty());
        assert!(admissible(13, 6, 8).is_err());
    }

    #[test]
    fn check_display() {
        let c = Check::new("x", ratio(72, 7), Relation::Lt, ratio(27, 2));
        assert!(c.holds);
        assert_eq!(c.to_string(), "x: 72/7 < 27/2 [ok]");
        let d = Check::new("y", 1i128, Relation::Eq, 2i128).informational();
        assert!(d.ok() && !d.holds);
    }
}
