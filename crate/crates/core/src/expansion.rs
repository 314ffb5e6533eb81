//! Local data of a complete intersection at a point.
//!
//! At a point `o` of `V = {f1 = f2 = 0}` the polynomials are translated into an
//! affine chart centred at `o` and split into homogeneous components
//! `q[i][j]`. The components are listed in the standard order
//! `q11, q21, q12, q22, ..., q1d1, q2d1, ..., q2d2`, and each local condition
//! uses a truncation of that list restricted to a linear subspace cut out by
//! the linear components.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldpoly::{Field, MultiPoly};

/// Dimensions and degrees of `V ⊂ P^{M+2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSetup {
    #[serde(rename = "M")]
    pub m: usize,
    pub d1: u32,
    pub d2: u32,
}

impl AmbientSetup {
    pub fn new(m: usize, d1: u32, d2: u32) -> Result<Self> {
        let s = AmbientSetup { m, d1, d2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Input(format!("M = {} is below 2", self.m)));
        }
        if self.d1 < 2 || self.d1 > self.d2 {
            return Err(Error::Input(format!(
                "need 2 <= d1 <= d2, got d1 = {}, d2 = {}",
                self.d1, self.d2
            )));
        }
        if (self.d1 + self.d2) as usize != self.m + 2 {
            return Err(Error::Input(format!(
                "d1 + d2 = {} but index one requires M + 2 = {}",
                self.d1 + self.d2,
                self.m + 2
            )));
        }
        Ok(())
    }

    /// Homogeneous coordinates on `P^{M+2}`.
    pub fn homogeneous_vars(&self) -> usize {
        self.m + 3
    }

    pub fn affine_vars(&self) -> usize {
        self.m + 2
    }
}

/// Which homogeneous component: `q[poly][degree]`, `poly` being 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormIndex {
    pub poly: u8,
    pub degree: u32,
}

impl fmt::Display for FormIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{},{}", self.poly, self.degree)
    }
}

/// The local conditions that ask for a regular sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceTag {
    #[serde(rename = "R1")]
    R1,
    #[serde(rename = "R2.2")]
    R22,
    #[serde(rename = "R3.2")]
    R32,
}

impl SequenceTag {
    /// Number of linear forms eliminated before testing regularity.
    pub fn eliminated_linear_forms(&self) -> usize {
        match self {
            SequenceTag::R1 => 2,
            SequenceTag::R22 => 1,
            SequenceTag::R32 => 0,
        }
    }
}

/// The full standard order, linear forms included.
pub fn standard_order(d1: u32, d2: u32) -> Vec<FormIndex> {
    let mut out = Vec::with_capacity((d1 + d2) as usize);
    for j in 1..=d2 {
        if j <= d1 {
            out.push(FormIndex { poly: 1, degree: j });
        }
        out.push(FormIndex { poly: 2, degree: j });
    }
    out
}

/// Components entering the regularity test for `tag`, after the linear forms
/// have been used for elimination. Degrees are non-decreasing.
///
/// * R1: the standard order minus its last two entries.
/// * R2.2: the standard order with `q2,d2` removed.
/// * R3.2: the whole standard order.
pub fn condition_profile(d1: u32, d2: u32, tag: SequenceTag) -> Vec<FormIndex> {
    let mut order = standard_order(d1, d2);
    let drop = match tag {
        SequenceTag::R1 => 2,
        SequenceTag::R22 => 1,
        SequenceTag::R32 => 0,
    };
    order.truncate(order.len() - drop);
    order.retain(|ix| ix.degree >= 2);
    order
}

/// Degrees `m_i` of the profile, as used by the codimension estimates.
pub fn degree_profile(d1: u32, d2: u32, tag: SequenceTag) -> Vec<u32> {
    condition_profile(d1, d2, tag)
        .iter()
        .map(|ix| ix.degree)
        .collect()
}

/// Homogeneous components of `f1`, `f2` at a point of `V`.
#[derive(Clone, Debug)]
pub struct HomogeneousExpansion<F: Field> {
    field: F,
    /// Homogeneous coordinates of `o`, scaled so the chart coordinate is 1.
    point: Vec<F::Elem>,
    /// Index of the homogeneous coordinate set to 1.
    chart: usize,
    degrees: [u32; 2],
    /// `components[i][j]` is `q_{i+1, j}`; index 0 holds the (zero) constant term.
    components: [Vec<MultiPoly<F>>; 2],
}

impl<F: Field> HomogeneousExpansion<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn point(&self) -> &[F::Elem] {
        &self.point
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn d1(&self) -> u32 {
        self.degrees[0]
    }

    pub fn d2(&self) -> u32 {
        self.degrees[1]
    }

    /// Number of affine coordinates, `M + 2`.
    pub fn affine_vars(&self) -> usize {
        self.point.len() - 1
    }

    /// `q_{poly, degree}`; zero beyond the polynomial's degree.
    pub fn q(&self, poly: u8, degree: u32) -> MultiPoly<F> {
        assert!(poly == 1 || poly == 2, "poly index is 1 or 2");
        self.components[(poly - 1) as usize]
            .get(degree as usize)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.field, self.affine_vars()))
    }

    pub fn form(&self, ix: FormIndex) -> MultiPoly<F> {
        self.q(ix.poly, ix.degree)
    }

    /// Affine coordinate index of homogeneous coordinate `i` (the chart has none).
    pub fn affine_index(&self, i: usize) -> Option<usize> {
        match i.cmp(&self.chart) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        }
    }

    /// Homogeneous coordinates of the affine point `o + z`.
    pub fn homogeneous_point(&self, z: &[F::Elem]) -> Vec<F::Elem> {
        (0..self.point.len())
            .map(|i| match self.affine_index(i) {
                None => self.field.one(),
                Some(a) => self.field.add(&self.point[i], &z[a]),
            })
            .collect()
    }

    /// Sum of the components of `f_poly`, i.e. `f_poly(o + z)` in the chart.
    pub fn reconstruct(&self, poly: u8) -> MultiPoly<F> {
        self.components[(poly - 1) as usize].iter().fold(
            MultiPoly::zero(&self.field, self.affine_vars()),
            |acc, q| &acc + q,
        )
    }
}

/// Chooses the chart with the largest nonzero coordinate, translates both
/// polynomials to the point and splits them into homogeneous components.
pub fn homogeneous_expansion<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    o: &[F::Elem],
) -> Result<HomogeneousExpansion<F>> {
    let field = f1.field().clone();
    let n = f1.nvars();
    if f2.nvars() != n || o.len() != n {
        return Err(Error::Input(format!(
            "ring sizes disagree: f1 has {n} variables, f2 {}, point {}",
            f2.nvars(),
            o.len()
        )));
    }
    let d1 = f1
        .homogeneous_degree()
        .ok_or_else(|| Error::Input("f1 must be a nonzero homogeneous polynomial".into()))?;
    let d2 = f2
        .homogeneous_degree()
        .ok_or_else(|| Error::Input("f2 must be a nonzero homogeneous polynomial".into()))?;
    if d1 > d2 {
        return Err(Error::Input(format!("deg f1 = {d1} exceeds deg f2 = {d2}")));
    }
    let chart = (0..n)
        .rev()
        .find(|&i| !field.is_zero(&o[i]))
        .ok_or_else(|| Error::Input("the zero vector lies in no coordinate chart".into()))?;
    let scale = field.inv(&o[chart]).unwrap();
    let point: Vec<F::Elem> = o.iter().map(|c| field.mul(c, &scale)).collect();

    let na = n - 1;
    let images: Vec<MultiPoly<F>> = (0..n)
        .map(|i| {
            if i == chart {
                MultiPoly::constant(&field, na, field.one())
            } else {
                let a = if i < chart { i } else { i - 1 };
                &MultiPoly::constant(&field, na, point[i].clone()) + &MultiPoly::var(&field, na, a)
            }
        })
        .collect();

    let mut components: [Vec<MultiPoly<F>>; 2] = [Vec::new(), Vec::new()];
    for (k, (f, d)) in [(f1, d1), (f2, d2)].into_iter().enumerate() {
        let t = f.compose(&images, na);
        components[k] = (0..=d).map(|j| t.homogeneous_component(j)).collect();
        if !components[k][0].is_zero() {
            return Err(Error::Precondition(format!(
                "f{} does not vanish at the point",
                k + 1
            )));
        }
    }
    Ok(HomogeneousExpansion {
        field,
        point,
        chart,
        degrees: [d1, d2],
        components,
    })
}

/// One entry of a standard sequence with its provenance.
#[derive(Clone, Debug)]
pub struct SequenceEntry<F: Field> {
    pub index: FormIndex,
    pub form: MultiPoly<F>,
}

/// Truncated standard order restricted to the subspace cut by the linear forms.
#[derive(Clone, Debug)]
pub struct StandardSequence<F: Field> {
    pub tag: SequenceTag,
    pub entries: Vec<SequenceEntry<F>>,
    /// Variables left after restriction.
    pub nvars: usize,
    /// Affine coordinates (of the `M + 2`) that survive, in order.
    pub kept: Vec<usize>,
    /// `(pivot, expression)` in elimination order; expressions are linear
    /// forms in the ambient affine variables not yet eliminated.
    pub eliminations: Vec<(usize, MultiPoly<F>)>,
    field: F,
    ambient_vars: usize,
}

impl<F: Field> StandardSequence<F> {
    pub fn forms(&self) -> Vec<MultiPoly<F>> {
        self.entries.iter().map(|e| e.form.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.index.degree).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lifts a point of the restricted space to the ambient affine space.
    pub fn lift(&self, point: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if point.len() != self.nvars {
            return Err(Error::Input(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                point.len()
            )));
        }
        let mut full = vec![self.field.zero(); self.ambient_vars];
        for (k, &a) in self.kept.iter().enumerate() {
            full[a] = point[k].clone();
        }
        for (pivot, expr) in self.eliminations.iter().rev() {
            full[*pivot] = expr.eval(&full)?;
        }
        Ok(full)
    }
}

/// Rank (0, 1 or 2) of the span of the linear parts `q11`, `q21`.
pub fn linear_part_rank<F: Field>(exp: &HomogeneousExpansion<F>) -> usize {
    let f = &exp.field;
    let a = exp.q(1, 1).linear_coefficients().unwrap();
    let b = exp.q(2, 1).linear_coefficients().unwrap();
    let za = a.iter().all(|c| f.is_zero(c));
    let zb = b.iter().all(|c| f.is_zero(c));
    if za && zb {
        return 0;
    }
    let n = a.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let det = f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
            if !f.is_zero(&det) {
                return 2;
            }
        }
    }
    1
}

/// Solves `l = 0` for its largest-index variable: returns that index and the
/// expression it equals.
fn solve_pivot<F: Field>(l: &MultiPoly<F>) -> Option<(usize, MultiPoly<F>)> {
    let f = l.field();
    let coeffs = l.linear_coefficients()?;
    let pivot = (0..coeffs.len()).rev().find(|&i| !f.is_zero(&coeffs[i]))?;
    let scale = f.neg(&f.inv(&coeffs[pivot]).unwrap());
    let rest: Vec<F::Elem> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == pivot {
                f.zero()
            } else {
                f.mul(c, &scale)
            }
        })
        .collect();
    Some((pivot, MultiPoly::linear(f, &rest)))
}

/// Builds the sequence tested by R1, R2.2 or R3.2 at the expansion's point.
pub fn condition_sequence<F: Field>(
    exp: &HomogeneousExpansion<F>,
    tag: SequenceTag,
) -> Result<StandardSequence<F>> {
    let rank = linear_part_rank(exp);
    let required = match tag {
        SequenceTag::R1 => 2,
        SequenceTag::R22 => 1,
        SequenceTag::R32 => 0,
    };
    if rank != required {
        return Err(Error::Precondition(format!(
            "{tag:?} needs linear parts of rank {required}, the point has rank {rank}"
        )));
    }
    let linear: Vec<MultiPoly<F>> = match tag {
        SequenceTag::R1 => vec![exp.q(1, 1), exp.q(2, 1)],
        SequenceTag::R22 => {
            let q11 = exp.q(1, 1);
            vec![if q11.is_zero() { exp.q(2, 1) } else { q11 }]
        }
        SequenceTag::R32 => vec![],
    };

    let na = exp.affine_vars();
    let mut forms: Vec<SequenceEntry<F>> = condition_profile(exp.d1(), exp.d2(), tag)
        .into_iter()
        .map(|index| SequenceEntry {
            index,
            form: exp.form(index),
        })
        .collect();
    let mut pending = linear;
    let mut eliminations = Vec::new();
    while !pending.is_empty() {
        let l = pending.remove(0);
        let (pivot, expr) = solve_pivot(&l).ok_or_else(|| {
            Error::Precondition(
                "a linear form needed for elimination vanishes on the subspace".into(),
            )
        })?;
        for p in pending.iter_mut() {
            *p = p.substitute(pivot, &expr);
        }
        for e in forms.iter_mut() {
            e.form = e.form.substitute(pivot, &expr);
        }
        eliminations.push((pivot, expr));
    }
    let eliminated: Vec<usize> = eliminations.iter().map(|(p, _)| *p).collect();
    let kept: Vec<usize> = (0..na).filter(|a| !eliminated.contains(a)).collect();
    let mut mapping = vec![None; na];
    for (k, &a) in kept.iter().enumerate() {
        mapping[a] = Some(k);
    }
    for e in forms.iter_mut() {
        e.form = e.form.remap(kept.len(), &mapping)?;
    }
    Ok(StandardSequence {
        tag,
        entries: forms,
        nvars: kept.len(),
        kept,
        eliminations,
        field: exp.field.clone(),
        ambient_vars: na,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::{PrimeField, Rationals};

    fn xs<F: Field>(f: &F, n: usize) -> Vec<MultiPoly<F>> {
        (0..n).map(|i| MultiPoly::var(f, n, i)).collect()
    }

    #[test]
    fn standard_order_interleaves() {
        let o = standard_order(2, 4);
        let s: Vec<String> = o.iter().map(|i| i.to_string()).collect();
        assert_eq!(s, ["q1,1", "q2,1", "q1,2", "q2,2", "q2,3", "q2,4"]);
    }

    #[test]
    fn profiles_match_counts() {
        // M = 4: (2,4) and (3,3)
        let p = condition_profile(2, 4, SequenceTag::R1);
        assert_eq!(
            p,
            vec![
                FormIndex { poly: 1, degree: 2 },
                FormIndex { poly: 2, degree: 2 }
            ]
        );
        let p = condition_profile(3, 3, SequenceTag::R1);
        assert_eq!(
            p,
            vec![
                FormIndex { poly: 1, degree: 2 },
                FormIndex { poly: 2, degree: 2 }
            ]
        );
        assert_eq!(degree_profile(2, 4, SequenceTag::R32), vec![2, 2, 3, 4]);
        assert_eq!(degree_profile(2, 4, SequenceTag::R22), vec![2, 2, 3]);
        // M = 13, d1 = 6, d2 = 9
        assert_eq!(
            degree_profile(6, 9, SequenceTag::R1),
            vec![2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7]
        );
    }

    #[test]
    fn setup_validation() {
        assert!(AmbientSetup::new(4, 2, 4).is_ok());
        assert!(AmbientSetup::new(4, 2, 3).is_err());
        assert!(AmbientSetup::new(4, 4, 2).is_err());
        assert!(AmbientSetup::new(0, 1, 1).is_err());
    }

    #[test]
    fn conic_at_origin_chart() {
        // f1 = x0 x2 - x1^2 at [1:0:0]: chart x0 = 1, affine (z1, z2)
        let q = Rationals;
        let x = xs(&q, 3);
        let f1 = &(&x[0] * &x[2]) - &x[1].pow(2);
        let f2 = x[1].pow(3);
        let o = vec![q.one(), q.zero(), q.zero()];
        let exp = homogeneous_expansion(&f1, &f2, &o).unwrap();
        assert_eq!(exp.chart(), 0);
        let z = xs(&q, 2);
        assert_eq!(exp.q(1, 1), z[1]);
        assert_eq!(exp.q(1, 2), -&z[0].pow(2));
        assert!(exp.q(2, 1).is_zero());
        assert!(exp.q(2, 2).is_zero());
        assert_eq!(exp.q(2, 3), z[0].pow(3));
    }

    #[test]
    fn off_vertex_point_and_errors() {
        let q = Rationals;
        let x = xs(&q, 3);
        let s = &x[0] + &x[1];
        let f1 = &s * &s;
        // o = [1:-1:0], chart index 1 after scaling gives [-1:1:0]
        let o = vec![q.one(), q.from_i64(-1), q.zero()];
        let exp = homogeneous_expansion(&f1, &f1, &o).unwrap();
        assert!(exp.q(1, 1).is_zero());
        assert_eq!(exp.reconstruct(1).homogeneous_degree(), Some(2));

        let off = vec![q.one(), q.one(), q.zero()];
        assert!(matches!(
            homogeneous_expansion(&f1, &f1, &off),
            Err(Error::Precondition(_))
        ));
        let zero = vec![q.zero(); 3];
        assert!(matches!(
            homogeneous_expansion(&f1, &f1, &zero),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn r1_elimination_restricts_to_tangent_space() {
        // 4 affine variables after elimination of two, M = 4 -> 7 homogeneous vars
        let f = PrimeField::new(101).unwrap();
        let x = xs(&f, 7);
        // o = [0:...:0:1]; f1 = x0 x6 + x1 x2, f2 = x1 x6^3 + x2 x3 x6^2 + x4^2 x6^2 + x5^4
        let f1 = &(&x[0] * &x[6]) + &(&x[1] * &x[2]);
        let f2 = &(&(&(&x[1] * &x[6].pow(3)) + &(&(&x[2] * &x[3]) * &x[6].pow(2)))
            + &(&x[4].pow(2) * &x[6].pow(2)))
            + &x[5].pow(4);
        let mut o = vec![0u64; 7];
        o[6] = 1;
        let exp = homogeneous_expansion(&f1, &f2, &o).unwrap();
        assert_eq!(linear_part_rank(&exp), 2);
        let seq = condition_sequence(&exp, SequenceTag::R1).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.nvars, 4);
        assert_eq!(seq.degrees(), vec![2, 2]);
        assert!(condition_sequence(&exp, SequenceTag::R32).is_err());
    }
}
