use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{int, ratio, ser_display, Check, Relation};
use crate::error::{Error, Result};

/// Which hypertangent chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainVariant {
    /// Smooth points: `D1, D2, D'3, D''3, ..., D''_{d1−1}, D_{d1}, ..., D_{d2−3}`.
    #[serde(rename = "smooth")]
    Smooth,
    /// Quadratic points, codimension 2: starts at `D2`, ends at `D_{d2−2}`.
    #[serde(rename = "quad-i")]
    QuadI,
    /// Quadratic points, codimension 3: as `quad-i` without `D2`.
    #[serde(rename = "quad-ii")]
    QuadII,
    /// Biquadratic points: `D'3, D''3, ..., D_{d2−1}`.
    #[serde(rename = "biquad")]
    Biquad,
}

impl ChainVariant {
    pub const ALL: [ChainVariant; 4] = [
        ChainVariant::Smooth,
        ChainVariant::QuadI,
        ChainVariant::QuadII,
        ChainVariant::Biquad,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChainVariant::Smooth => "smooth",
            ChainVariant::QuadI => "quad-i",
            ChainVariant::QuadII => "quad-ii",
            ChainVariant::Biquad => "biquad",
        }
    }

    pub fn parse(s: &str) -> Option<ChainVariant> {
        ChainVariant::ALL.into_iter().find(|v| v.as_str() == s)
    }

    /// Last index of the single-divisor tail `D_{d1}, ..., D_last`.
    fn tail_end(&self, d2: i128) -> i128 {
        match self {
            ChainVariant::Smooth => d2 - 3,
            ChainVariant::QuadI | ChainVariant::QuadII => d2 - 2,
            ChainVariant::Biquad => d2 - 1,
        }
    }

    /// Multiplicity-to-degree bound the chain is compared against, times `d1 d2`.
    fn threshold_numerator(&self) -> BigRational {
        match self {
            ChainVariant::Smooth => int(4),
            ChainVariant::QuadI => int(7),
            ChainVariant::QuadII => ratio(72, 7),
            ChainVariant::Biquad => int(9),
        }
    }
}

impl fmt::Display for ChainVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One divisor of the chain, contributing `((i+1)/i)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFactor {
    pub label: String,
    pub index: u32,
    /// `-1` for a formal inverse closing a reversed range.
    pub exponent: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainResult {
    pub variant: ChainVariant,
    pub d1: u32,
    pub d2: u32,
    pub divisors: Vec<ChainFactor>,
    #[serde(serialize_with = "ser_display")]
    pub product: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub closed_form: BigRational,
    pub closed_form_text: &'static str,
    pub identity_holds: bool,
    /// `(c/(d1 d2)) · product` against 1; only for `d2 >= 8`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl ChainResult {
    pub fn ok(&self) -> bool {
        self.identity_holds && self.threshold.as_ref().is_none_or(Check::ok)
    }
}

fn factor(i: i128) -> BigRational {
    ratio(i + 1, i)
}

/// The hypertangent product `Π ((i+1)/i)` along the chain for `variant`,
/// checked against its closed form and, for `d2 >= 8`, the threshold.
///
/// For `d1 = 2` the doubled block is empty and the closed form is not
/// expected to match; the result is flagged. A tail range running backwards
/// (`D_{d1}, ..., D_e` with `e < d1 − 1`) is read as the formal inverse of
/// `D_{e+1}, ..., D_{d1−1}` so the product still telescopes; that is flagged
/// as well.
pub fn hypertangent_chain(d1: u32, d2: u32, variant: ChainVariant) -> Result<ChainResult> {
    if d1 < 2 || d1 > d2 {
        return Err(Error::Input(format!(
            "need 2 <= d1 <= d2, got d1 = {d1}, d2 = {d2}"
        )));
    }
    let (a, b) = (d1 as i128, d2 as i128);
    let mut flags = Vec::new();
    let mut divisors = Vec::new();
    let mut push = |label: String, index: i128, exponent: i32| {
        divisors.push(ChainFactor {
            label,
            index: index as u32,
            exponent,
        });
    };
    match variant {
        ChainVariant::Smooth => {
            push("D1".into(), 1, 1);
            push("D2".into(), 2, 1);
        }
        ChainVariant::QuadI => push("D2".into(), 2, 1),
        ChainVariant::QuadII | ChainVariant::Biquad => {}
    }
    if d1 == 2 {
        flags.push("d1 = 2: the doubled block D'3, ..., D''_{d1-1} is empty and the closed form does not apply".into());
    }
    for i in 3..a {
        push(format!("D'{i}"), i, 1);
        push(format!("D''{i}"), i, 1);
    }
    let end = variant.tail_end(b);
    if end >= a - 1 {
        for i in a..=end {
            push(format!("D{i}"), i, 1);
        }
    } else {
        flags.push(format!(
            "tail D{a}..D{end} runs backwards; read as a formal inverse"
        ));
        for i in end + 1..a {
            push(format!("D{i}^-1"), i, -1);
        }
    }

    let mut product = BigRational::one();
    for f in &divisors {
        let x = factor(f.index as i128);
        product = if f.exponent > 0 {
            product * x
        } else {
            product / x
        };
    }
    let (closed_form, closed_form_text) = match variant {
        ChainVariant::Smooth => (ratio(a * (b - 2), 3), "d1(d2-2)/3"),
        ChainVariant::QuadI => (ratio(a * (b - 1), 6), "d1(d2-1)/6"),
        ChainVariant::QuadII => (ratio(a * (b - 1), 9), "d1(d2-1)/9"),
        ChainVariant::Biquad => (ratio(a * b, 9), "d1d2/9"),
    };
    let identity_holds = product == closed_form;

    let threshold = (d2 >= 8).then(|| {
        let value = variant.threshold_numerator() / int(a * b) * &product;
        let (name, rel) = match variant {
            ChainVariant::Smooth => ("4/(d1d2) * product = 4(d2-2)/(3d2) >= 1", Relation::Ge),
            ChainVariant::QuadI => ("7/(d1d2) * product = 7(d2-1)/(6d2) > 1", Relation::Gt),
            ChainVariant::QuadII => ("72/(7d1d2) * product = 72(d2-1)/(63d2) >= 1", Relation::Ge),
            ChainVariant::Biquad => ("9/(d1d2) * product = 1", Relation::Eq),
        };
        Check::new(name, value, rel, int(1))
    });
    Ok(ChainResult {
        variant,
        d1,
        d2,
        divisors,
        product,
        closed_form,
        closed_form_text,
        identity_holds,
        threshold,
        flags,
    })
}
