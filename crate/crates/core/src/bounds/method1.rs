use num_bigint::BigInt;
use serde::Serialize;

use super::{admissible, big_binom, lambda, ser_display, Check, Regime, Relation};
use crate::error::Result;
use crate::expansion::{condition_profile, FormIndex, SequenceTag};

/// `binom(α_k, β_k)` for the `k`-th form of the profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialEntry {
    pub k: usize,
    pub form: FormIndex,
    pub alpha: i128,
    pub beta: i128,
    #[serde(serialize_with = "ser_display")]
    pub value: BigInt,
}

/// The closed-form minimum claimed for the table, compared with the
/// minimum over the entries it is meant to cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Method1Claim {
    pub description: String,
    #[serde(serialize_with = "ser_display")]
    pub claimed: BigInt,
    /// First `k` of the range the claim is compared against.
    pub from_k: usize,
    #[serde(serialize_with = "ser_display")]
    pub observed: BigInt,
    /// `observed == claimed`.
    pub exact: bool,
    /// `observed >= claimed`.
    pub lower_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Method1Table {
    #[serde(rename = "M")]
    pub m: usize,
    pub d1: u32,
    pub d2: u32,
    pub regime: Regime,
    pub entries: Vec<BinomialEntry>,
    #[serde(serialize_with = "ser_display")]
    pub minimum: BigInt,
    pub minimum_k: usize,
    /// Minimum over `k >= 3`, if that range is non-empty.
    #[serde(serialize_with = "ser_opt_display")]
    pub tail_minimum: Option<BigInt>,
    pub claim: Method1Claim,
    /// Every entry meets `λ(M) + M`, the codimension needed per stage.
    pub required: Check,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn ser_opt_display<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

impl Method1Table {
    /// Three-row layout: `k`, `α_k`, `β_k`.
    pub fn to_text(&self) -> String {
        let w = self
            .entries
            .iter()
            .map(|e| e.alpha.to_string().len().max(e.k.to_string().len()))
            .max()
            .unwrap_or(1);
        let row = |label: &str, f: &dyn Fn(&BinomialEntry) -> String| {
            let cells: Vec<String> = self
                .entries
                .iter()
                .map(|e| format!("{:>w$}", f(e)))
                .collect();
            format!("{label:<7} {}\n", cells.join(" "))
        };
        let mut out = format!(
            "method 1, {} points, M={} d1={} d2={}\n",
            self.regime, self.m, self.d1, self.d2
        );
        out += &row("k:", &|e| e.k.to_string());
        out += &row("alpha:", &|e| e.alpha.to_string());
        out += &row("beta:", &|e| e.beta.to_string());
        out += &format!(
            "minimum binom = {} at k = {}\n",
            self.minimum, self.minimum_k
        );
        if let Some(t) = &self.tail_minimum {
            out += &format!("minimum over k >= 3 = {t}\n");
        }
        out += &format!(
            "claim {}: claimed {}, observed {} ({})\n",
            self.claim.description,
            self.claim.claimed,
            self.claim.observed,
            if self.claim.exact {
                "exact"
            } else if self.claim.lower_bound {
                "lower bound only"
            } else {
                "violated"
            }
        );
        out += &format!("{}\n", self.required);
        out
    }
}

/// `α` for a form of the smooth profile: `M+3−m` on `f1`, `M+2−m` on `f2`
/// up to degree `d1`, and `d2` past it.
fn smooth_alpha(m_: i128, d1: u32, d2: u32, ix: FormIndex) -> i128 {
    let deg = ix.degree as i128;
    if ix.poly == 1 {
        m_ + 3 - deg
    } else if ix.degree <= d1 {
        m_ + 2 - deg
    } else {
        d2 as i128
    }
}

/// The Method 1 list `binom(α_k, β_k)` for `k = 1..M−3` (smooth) or
/// `k = 1..M−2` (singular), with its minima and the claimed closed form.
pub fn method1_table(m: usize, d1: u32, d2: u32, regime: Regime) -> Result<Method1Table> {
    let (_, warnings) = admissible(m, d1, d2)?;
    let mi = m as i128;
    let (tag, len, shift) = match regime {
        Regime::Smooth => (SequenceTag::R1, m - 3, 0),
        Regime::Singular => (SequenceTag::R22, m - 2, 1),
    };
    let profile = condition_profile(d1, d2, tag);
    let entries: Vec<BinomialEntry> = profile
        .iter()
        .take(len)
        .enumerate()
        .map(|(i, &form)| {
            let alpha = smooth_alpha(mi, d1, d2, form) + shift;
            let beta = form.degree as i128;
            BinomialEntry {
                k: i + 1,
                form,
                alpha,
                beta,
                value: big_binom(alpha, beta),
            }
        })
        .collect();
    let (minimum_k, minimum) = entries
        .iter()
        .map(|e| (e.k, e.value.clone()))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("M >= 11 gives a non-empty table");
    let tail_minimum = entries
        .iter()
        .filter(|e| e.k >= 3)
        .map(|e| e.value.clone())
        .min();

    let d2i = d2 as i128;
    let (description, claimed, from_k) = match (regime, d1) {
        (Regime::Smooth, 2) => ("d1 = 2: binom(M,2)", big_binom(mi, 2), 1),
        (Regime::Smooth, _) => ("d1 >= 3: binom(d2,3)", big_binom(d2i, 3), 3),
        (Regime::Singular, 2) => ("d1 = 2: binom(M+1,2)", big_binom(mi + 1, 2), 1),
        (Regime::Singular, _) => ("d1 >= 3: binom(d2+1,3)", big_binom(d2i + 1, 3), 3),
    };
    let observed = if from_k == 1 {
        minimum.clone()
    } else {
        tail_minimum.clone().unwrap_or_else(|| minimum.clone())
    };
    let claim = Method1Claim {
        description: description.into(),
        exact: observed == claimed,
        lower_bound: observed >= claimed,
        claimed,
        from_k,
        observed,
    };
    let required = Check::new(
        "every entry >= lambda(M) + M",
        minimum.clone(),
        Relation::Ge,
        lambda(m) + mi,
    );
    Ok(Method1Table {
        m,
        d1,
        d2,
        regime,
        entries,
        minimum,
        minimum_k,
        tail_minimum,
        claim,
        required,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_table_at_thirteen() {
        let t = method1_table(13, 6, 9, Regime::Smooth).unwrap();
        let alphas: Vec<i128> = t.entries.iter().map(|e| e.alpha).collect();
        let betas: Vec<i128> = t.entries.iter().map(|e| e.beta).collect();
        assert_eq!(alphas, vec![14, 13, 13, 12, 12, 11, 11, 10, 10, 9]);
        assert_eq!(betas, vec![2, 2, 3, 3, 4, 4, 5, 5, 6, 6]);
        // binom(M,2) at k = 2 sits below the claimed binom(d2,3).
        assert_eq!(t.minimum, BigInt::from(78));
        assert_eq!(t.minimum_k, 2);
        assert_eq!(t.tail_minimum, Some(BigInt::from(84)));
        assert!(t.claim.exact);
        assert!(t.required.holds);
    }

    #[test]
    fn singular_table_d1_two() {
        let t = method1_table(13, 2, 13, Regime::Singular).unwrap();
        assert_eq!(t.entries.len(), 11);
        assert_eq!(t.entries[0].value, BigInt::from(105));
        assert_eq!(t.minimum, BigInt::from(91));
        assert!(t.claim.exact);
        let last = t.entries.last().unwrap();
        assert_eq!((last.alpha, last.beta), (14, 11));
    }

    #[test]
    fn singular_tail_is_binom_d2_plus_one() {
        let t = method1_table(13, 6, 9, Regime::Singular).unwrap();
        let last = t.entries.last().unwrap();
        assert_eq!((last.alpha, last.beta), (10, 7));
        assert_eq!(t.claim.claimed, BigInt::from(120));
        assert!(t.claim.exact);
        assert!(t.to_text().contains("alpha:"));
    }
}
