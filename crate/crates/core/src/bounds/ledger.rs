use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{admissible, admissible_splits, big_binom, binom, ser_display, Check, Relation};
use crate::error::Result;

/// Rows of the ledger. R2.2 and R3.2 share one bound but are kept apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundTag {
    #[serde(rename = "R0.1-irred")]
    R01Irred,
    #[serde(rename = "R0.1-rank")]
    R01Rank,
    #[serde(rename = "R0.2")]
    R02,
    #[serde(rename = "R1")]
    R1,
    #[serde(rename = "R2.2")]
    R22,
    #[serde(rename = "R3.2")]
    R32,
    #[serde(rename = "R2.1")]
    R21,
    #[serde(rename = "R3.1")]
    R31,
}

impl BoundTag {
    pub const ALL: [BoundTag; 8] = [
        BoundTag::R01Irred,
        BoundTag::R01Rank,
        BoundTag::R02,
        BoundTag::R1,
        BoundTag::R22,
        BoundTag::R32,
        BoundTag::R21,
        BoundTag::R31,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundTag::R01Irred => "R0.1-irred",
            BoundTag::R01Rank => "R0.1-rank",
            BoundTag::R02 => "R0.2",
            BoundTag::R1 => "R1",
            BoundTag::R22 => "R2.2",
            BoundTag::R32 => "R3.2",
            BoundTag::R21 => "R2.1",
            BoundTag::R31 => "R3.1",
        }
    }

    pub fn parse(s: &str) -> Option<BoundTag> {
        BoundTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
    }

    fn formula(&self) -> &'static str {
        match self {
            BoundTag::R01Irred => "M(M+3)/2",
            BoundTag::R01Rank => "binom(M-1,2)+1",
            BoundTag::R02 => "binom(M+2,2)-2",
            BoundTag::R1 | BoundTag::R22 | BoundTag::R32 => "(M-5)(M-6)/2-(M+1)",
            BoundTag::R21 => "binom(M-5,2)+1",
            BoundTag::R31 => "binom(M-9,2)-1",
        }
    }
}

impl fmt::Display for BoundTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `λ(M) = (M−5)(M−6)/2 − (M+1)`.
pub fn lambda(m: usize) -> i128 {
    let m = m as i128;
    (m - 5) * (m - 6) / 2 - (m + 1)
}

/// `½(M−9)(M−10) − 1`.
pub fn theorem02_target(m: usize) -> i128 {
    let m = m as i128;
    (m - 9) * (m - 10) / 2 - 1
}

fn stated(tag: BoundTag, m: usize) -> i128 {
    let m = m as i128;
    match tag {
        BoundTag::R01Irred => m * (m + 3) / 2,
        BoundTag::R01Rank => binom(m - 1, 2) + 1,
        BoundTag::R02 => binom(m + 2, 2) - 2,
        BoundTag::R1 | BoundTag::R22 | BoundTag::R32 => lambda(m as usize),
        BoundTag::R21 => binom(m - 5, 2) + 1,
        BoundTag::R31 => binom(m - 9, 2) - 1,
    }
}

/// The stated lower bound on the codimension of the pairs violating `tag`.
pub fn condition_bound(tag: BoundTag, m: usize, d1: u32, d2: u32) -> Result<i128> {
    admissible(m, d1, d2)?;
    Ok(stated(tag, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub tag: BoundTag,
    pub value: i128,
    pub formula: &'static str,
}

/// The irreducibility bound before minimizing over `d1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop31Detail {
    /// `binom(d1+M+1, M+1) − (M+3)` at the given `d1`.
    #[serde(serialize_with = "ser_display")]
    pub at_d1: BigInt,
    /// The same expression at `d1 = 2`.
    #[serde(serialize_with = "ser_display")]
    pub at_d1_two: BigInt,
    /// `d1 = 2` gives the smallest value over all admissible `d1`.
    pub minimized_at_d1_two: bool,
    /// The value at `d1 = 2` equals `M(M+3)/2`.
    pub agrees_with_stated: bool,
}

/// The reducible-intersection bound before minimizing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop33Detail {
    /// `binom(d2+M+2, d2) − ((M+3) + binom(d2+M+1, d2−1) + binom(d2−d1+M+2, d2−d1))`.
    #[serde(serialize_with = "ser_display")]
    pub at_params: BigInt,
    /// Smallest value of the expression over the splits `d1 + d2 = M + 2`.
    #[serde(serialize_with = "ser_display")]
    pub constrained_minimum: BigInt,
    pub constrained_argmin: (u32, u32),
    /// The value at `d1 = d2 = 2`, where the unconstrained minimum sits.
    #[serde(serialize_with = "ser_display")]
    pub unconstrained_minimum: BigInt,
    /// The stated bound is below the constrained minimum.
    pub stated_below_constrained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundLedger {
    #[serde(rename = "M")]
    pub m: usize,
    pub d1: u32,
    pub d2: u32,
    pub entries: Vec<BoundEntry>,
    pub minimum: i128,
    pub minimum_tags: Vec<BoundTag>,
    pub target: i128,
    pub prop31: Prop31Detail,
    pub prop33: Prop33Detail,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl BoundLedger {
    pub fn value(&self, tag: BoundTag) -> i128 {
        self.entries
            .iter()
            .find(|e| e.tag == tag)
            .map(|e| e.value)
            .expect("ledger has every tag")
    }

    /// `(R0.1-irred, R0.1-rank, R0.2, R1, R2.2 = R3.2, R2.1, R3.1)`.
    pub fn values(&self) -> [i128; 7] {
        use BoundTag::*;
        [R01Irred, R01Rank, R02, R1, R22, R21, R31].map(|t| self.value(t))
    }

    pub fn ok(&self) -> bool {
        super::all_ok(&self.checks)
    }
}

fn prop31_expr(m: usize, d1: u32) -> BigInt {
    let m = m as i128;
    big_binom(d1 as i128 + m + 1, m + 1) - BigInt::from(m + 3)
}

fn prop33_expr(m: usize, d1: u32, d2: u32) -> BigInt {
    let (m, d1, d2) = (m as i128, d1 as i128, d2 as i128);
    big_binom(d2 + m + 2, d2)
        - (BigInt::from(m + 3)
            + big_binom(d2 + m + 1, d2 - 1)
            + big_binom(d2 - d1 + m + 2, d2 - d1))
}

/// The full ledger for `(M, d1, d2)`, compared with the codimension target.
pub fn theorem02_minimum(m: usize, d1: u32, d2: u32) -> Result<BoundLedger> {
    let (_, warnings) = admissible(m, d1, d2)?;
    let entries: Vec<BoundEntry> = BoundTag::ALL
        .iter()
        .map(|&tag| BoundEntry {
            tag,
            value: stated(tag, m),
            formula: tag.formula(),
        })
        .collect();
    let minimum = entries.iter().map(|e| e.value).min().expect("non-empty");
    let minimum_tags = entries
        .iter()
        .filter(|e| e.value == minimum)
        .map(|e| e.tag)
        .collect();
    let target = theorem02_target(m);
    let mi = m as i128;

    let splits = admissible_splits(m);
    let p31_all: Vec<BigInt> = splits.iter().map(|&(a, _)| prop31_expr(m, a)).collect();
    let prop31 = Prop31Detail {
        at_d1: prop31_expr(m, d1),
        at_d1_two: prop31_expr(m, 2),
        minimized_at_d1_two: p31_all.iter().all(|v| *v >= p31_all[0]),
        agrees_with_stated: prop31_expr(m, 2) == BigInt::from(stated(BoundTag::R01Irred, m)),
    };

    let (constrained_argmin, constrained_minimum) = splits
        .iter()
        .map(|&(a, b)| ((a, b), prop33_expr(m, a, b)))
        .min_by(|x, y| x.1.cmp(&y.1))
        .expect("at least one split");
    let stated02 = BigInt::from(stated(BoundTag::R02, m));
    let prop33 = Prop33Detail {
        at_params: prop33_expr(m, d1, d2),
        stated_below_constrained: stated02 <= constrained_minimum,
        constrained_minimum,
        constrained_argmin,
        unconstrained_minimum: prop33_expr(m, 2, 2),
    };

    let r31 = stated(BoundTag::R31, m);
    let checks = vec![
        Check::new("minimum = R3.1 bound", minimum, Relation::Eq, r31),
        Check::new(
            "minimum >= codimension target",
            minimum,
            Relation::Ge,
            target,
        ),
        Check::new(
            "binom(M-9,2)-1 = (M-9)(M-10)/2-1",
            r31,
            Relation::Eq,
            target,
        ),
        Check::new(
            "R0.1 irreducibility: formula at d1=2 = M(M+3)/2",
            prop31.at_d1_two.clone(),
            Relation::Eq,
            stated(BoundTag::R01Irred, m),
        ),
        Check::new(
            "R0.2: expression at d1=d2=2 = binom(M+2,2)-2",
            prop33.unconstrained_minimum.clone(),
            Relation::Eq,
            stated02.clone(),
        ),
        Check::new(
            "R0.2: constrained minimum >= binom(M+2,2)-2",
            prop33.constrained_minimum.clone(),
            Relation::Ge,
            stated02,
        ),
        Check::new(
            "pointwise (M-5)(M-6)/2+1 - lambda(M) = M+2",
            (mi - 5) * (mi - 6) / 2 + 1 - lambda(m),
            Relation::Eq,
            mi + 2,
        ),
        Check::new(
            "R0.1 irreducibility: minimum over d1 = value at d1=2",
            p31_all.iter().min().expect("non-empty").clone(),
            Relation::Eq,
            prop31.at_d1_two.clone(),
        ),
    ];

    Ok(BoundLedger {
        m,
        d1,
        d2,
        entries,
        minimum,
        minimum_tags,
        target,
        prop31,
        prop33,
        checks,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_at_thirteen() {
        let l = theorem02_minimum(13, 6, 9).unwrap();
        assert_eq!(l.values(), [104, 67, 103, 14, 14, 29, 5]);
        assert_eq!(l.minimum, 5);
        assert_eq!(l.minimum_tags, vec![BoundTag::R31]);
        assert_eq!(l.target, 5);
        assert!(l.ok(), "{:?}", l.checks);
        assert!(l.warnings.is_empty());
    }

    #[test]
    fn single_bounds() {
        assert_eq!(condition_bound(BoundTag::R31, 13, 6, 9).unwrap(), 5);
        assert_eq!(condition_bound(BoundTag::R1, 13, 2, 13).unwrap(), 14);
        assert_eq!(condition_bound(BoundTag::R01Irred, 13, 2, 13).unwrap(), 104);
        assert_eq!(prop31_expr(13, 2), BigInt::from(binom(16, 2) - 16));
        assert_eq!(theorem02_target(14), 9);
        assert_eq!(condition_bound(BoundTag::R31, 14, 8, 8).unwrap(), 9);
        assert!(condition_bound(BoundTag::R31, 13, 5, 9).is_err());
    }

    #[test]
    fn exploratory_range_warns() {
        let l = theorem02_minimum(11, 5, 8).unwrap();
        assert_eq!(l.warnings.len(), 1);
        assert_eq!(l.value(BoundTag::R31), 0);
    }

    #[test]
    fn tags_round_trip() {
        for t in BoundTag::ALL {
            assert_eq!(BoundTag::parse(t.as_str()), Some(t));
            assert_eq!(
                serde_json::to_string(&t).unwrap(),
                format!("\"{}\"", t.as_str())
            );
        }
    }
}
