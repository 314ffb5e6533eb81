//! Hand-built pairs violating (or satisfying) a single condition.
//!
//! All instances live over `F_101` with `M = 4`, `d1 = 2`, `d2 = 4`. Local
//! instances are centred at `o = [0:...:0:1]`: with `h = x6` and affine
//! coordinates `x0..x5`,
//!
//! ```text
//! f1 = h L1 + Q1,    f2 = h^3 L2 + h^2 Q2 + h C2 + K2,
//! ```
//!
//! so that `q11 = L1`, `q12 = Q1`, `q21 = L2`, `q22 = Q2`, `q23 = C2`,
//! `q24 = K2`.

use crate::conditions::ConditionTag;
use crate::expansion::AmbientSetup;
use crate::fieldpoly::{MultiPoly, PrimeField};

pub type Poly = MultiPoly<PrimeField>;

#[derive(Clone, Debug)]
pub struct ConstructedInstance {
    pub name: &'static str,
    pub tag: ConditionTag,
    /// Whether the condition `tag` should fail.
    pub violating: bool,
    pub setup: AmbientSetup,
    pub f1: Poly,
    pub f2: Poly,
    /// Point for local conditions.
    pub point: Option<Vec<u64>>,
}

const N: usize = 7;

pub fn field() -> PrimeField {
    PrimeField::new(101).unwrap()
}

fn setup() -> AmbientSetup {
    AmbientSetup::new(4, 2, 4).unwrap()
}

fn x(i: usize) -> Poly {
    MultiPoly::var(&field(), N, i)
}

fn zero() -> Poly {
    MultiPoly::zero(&field(), N)
}

fn c(v: i64, p: &Poly) -> Poly {
    p.scale(&((v.rem_euclid(101)) as u64))
}

fn vertex() -> Vec<u64> {
    let mut o = vec![0; N];
    o[N - 1] = 1;
    o
}

/// `f1 = h L1 + Q1`, `f2 = h^3 L2 + h^2 Q2 + h C2 + K2`.
fn local_pair(l1: Poly, q1: Poly, l2: Poly, q2: Poly, c2: Poly, k2: Poly) -> (Poly, Poly) {
    let h = x(6);
    let f1 = &(&h * &l1) + &q1;
    let f2 = &(&(&(&h.pow(3) * &l2) + &(&h.pow(2) * &q2)) + &(&h * &c2)) + &k2;
    (f1, f2)
}

fn local(
    name: &'static str,
    tag: ConditionTag,
    violating: bool,
    pair: (Poly, Poly),
) -> ConstructedInstance {
    ConstructedInstance {
        name,
        tag,
        violating,
        setup: setup(),
        f1: pair.0,
        f2: pair.1,
        point: Some(vertex()),
    }
}

fn sum_sq(idx: &[usize]) -> Poly {
    idx.iter().fold(zero(), |a, &i| &a + &x(i).pow(2))
}

/// Smooth point whose `q12`, `q22` share the factor `x2` on `{x0 = x1 = 0}`.
pub fn r1_violation() -> ConstructedInstance {
    let pair = local_pair(
        x(0),
        &x(2) * &x(3),
        x(1),
        &x(2) * &x(4),
        x(5).pow(3),
        x(3).pow(4),
    );
    local("r1-shared-factor", ConditionTag::R1, true, pair)
}

pub fn r1_regular() -> ConstructedInstance {
    let pair = local_pair(
        x(0),
        x(2).pow(2),
        x(1),
        x(3).pow(2),
        x(5).pow(3),
        x(4).pow(4),
    );
    local("r1-coordinate-squares", ConditionTag::R1, false, pair)
}

/// Quadratic point with `lambda = 3` and `q22 - 3 q12 = x2 x3` of rank 2.
pub fn r21_violation() -> ConstructedInstance {
    let q1 = x(1).pow(2);
    let q2 = &c(3, &q1) + &(&x(2) * &x(3));
    let pair = local_pair(x(0), q1, c(3, &x(0)), q2, x(4).pow(3), x(5).pow(4));
    local("r21-rank-two", ConditionTag::R21, true, pair)
}

/// Quadratic point whose `q12`, `q22` share the factor `x1` on `{x0 = 0}`.
pub fn r22_violation() -> ConstructedInstance {
    let pair = local_pair(
        x(0),
        &x(1) * &x(2),
        zero(),
        &x(1) * &x(3),
        x(4).pow(3),
        x(5).pow(4),
    );
    local("r22-shared-factor", ConditionTag::R22, true, pair)
}

pub fn r22_regular() -> ConstructedInstance {
    let pair = local_pair(
        x(0),
        x(1).pow(2),
        zero(),
        x(2).pow(2),
        x(3).pow(3),
        x(5).pow(4),
    );
    local("r22-coordinate-powers", ConditionTag::R22, false, pair)
}

/// Biquadratic point where `q12 = x0 x1`, `q22 = x0 x2` meet in a hyperplane.
pub fn r31_violation() -> ConstructedInstance {
    let pair = local_pair(
        zero(),
        &x(0) * &x(1),
        zero(),
        &x(0) * &x(2),
        x(3).pow(3),
        x(4).pow(4),
    );
    local("r31-reducible-intersection", ConditionTag::R31, true, pair)
}

/// Biquadratic point whose quadrics form a diagonal pencil with distinct
/// eigenvalues, so `Q` is nonsingular.
pub fn r31_regular() -> ConstructedInstance {
    let q1 = sum_sq(&[0, 1, 2, 3, 4, 5]);
    let q2 = (0..6).fold(zero(), |a, i| &a + &c(i as i64 + 1, &x(i).pow(2)));
    let pair = local_pair(zero(), q1, zero(), q2, x(0).pow(3), x(1).pow(4));
    local("r31-diagonal-pencil", ConditionTag::R31, false, pair)
}

/// Biquadratic point with `q22 = q12`.
pub fn r32_violation() -> ConstructedInstance {
    let q = &x(0) * &x(1);
    let pair = local_pair(zero(), q.clone(), zero(), q, x(2).pow(3), x(3).pow(4));
    local("r32-repeated-form", ConditionTag::R32, true, pair)
}

/// Biquadratic point with Fermat-type components `x0^2, x1^2, x2^3, x3^4`.
pub fn r32_regular() -> ConstructedInstance {
    let pair = local_pair(
        zero(),
        x(0).pow(2),
        zero(),
        x(1).pow(2),
        x(2).pow(3),
        x(3).pow(4),
    );
    local("r32-fermat", ConditionTag::R32, false, pair)
}

/// A smooth quadric and a Fermat quartic.
pub fn global_regular() -> (Poly, Poly) {
    let f1 = sum_sq(&[0, 1, 2, 3, 4, 5, 6]);
    let f2 = (0..N).fold(zero(), |a, i| &a + &c(i as i64 + 1, &x(i).pow(4)));
    (f1, f2)
}

/// `f1 = (x0 + x1)(x2 + x3)` is reducible.
pub fn r01_violation() -> ConstructedInstance {
    let f1 = &(&x(0) + &x(1)) * &(&x(2) + &x(3));
    let (_, f2) = global_regular();
    ConstructedInstance {
        name: "r01-reducible",
        tag: ConditionTag::R01,
        violating: true,
        setup: setup(),
        f1,
        f2,
        point: None,
    }
}

/// `f2 = f1 * g`.
pub fn r02_violation() -> ConstructedInstance {
    let (f1, _) = global_regular();
    let f2 = &f1 * &(&x(0).pow(2) + &(&x(1) * &x(5)));
    ConstructedInstance {
        name: "r02-divisible",
        tag: ConditionTag::R02,
        violating: true,
        setup: setup(),
        f1,
        f2,
        point: None,
    }
}

/// Every constructed instance.
pub fn all() -> Vec<ConstructedInstance> {
    vec![
        r01_violation(),
        r02_violation(),
        r1_violation(),
        r1_regular(),
        r21_violation(),
        r22_violation(),
        r22_regular(),
        r31_violation(),
        r31_regular(),
        r32_violation(),
        r32_regular(),
    ]
}
