//! Document-level entry points shared by the command line and the C ABI.

use serde::{Deserialize, Serialize};

use super::sample::sample_points;
use super::schema::{dispatch, poly_to_terms, FieldTask, GbDocument, PairDocument, Term, SCHEMA};
use crate::conditions::{membership_report, CheckOptions, MembershipReport};
use crate::error::{Error, Result};
use crate::expansion::homogeneous_expansion;
use crate::fieldpoly::{Field, FieldSpec};
use crate::grobner::{groebner_basis, GroebnerStats, IdealBasis, StepBudget};
use crate::singular::{classify_point, point_rank, PointClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub point: Vec<String>,
    pub class: String,
    /// Ratio of the proportional linear parts at a quadratic point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Rank of `q2,2 − λ q1,2` at a quadratic point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbReport {
    pub schema: String,
    pub field: FieldSpec,
    pub nvars: usize,
    pub basis: Vec<Vec<Term>>,
    pub leading: Vec<Vec<u16>>,
    pub projective_dimension: i64,
    pub stats: GroebnerStats,
}

fn points_of<F: Field>(
    field: &F,
    doc: &PairDocument,
    extra: &[Vec<String>],
) -> Result<Vec<Vec<F::Elem>>> {
    let mut pts = doc.parsed_points(field)?;
    let n = doc.setup.homogeneous_vars();
    for p in extra {
        if p.len() != n {
            return Err(Error::Input(format!(
                "point with {} coordinates, expected {n}",
                p.len()
            )));
        }
        pts.push(
            p.iter()
                .map(|c| field.parse(c))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(pts)
}

struct ClassifyTask<'a> {
    doc: &'a PairDocument,
    extra: &'a [Vec<String>],
}

impl FieldTask for ClassifyTask<'_> {
    type Output = Vec<ClassifiedPoint>;
    fn run<F: Field>(self, field: F) -> Result<Self::Output> {
        let (f1, f2) = self.doc.polys(&field)?;
        points_of(&field, self.doc, self.extra)?
            .iter()
            .map(|o| {
                let exp = homogeneous_expansion(&f1, &f2, o)?;
                let class = classify_point(&exp);
                let (lambda, rank) = match &class {
                    PointClass::Quadratic { lambda, .. } => {
                        (Some(field.format(lambda)), Some(point_rank(&exp)?))
                    }
                    _ => (None, None),
                };
                Ok(ClassifiedPoint {
                    point: exp.point().iter().map(|c| field.format(c)).collect(),
                    class: class.name().into(),
                    lambda,
                    rank,
                })
            })
            .collect()
    }
}

/// Classifies the document's points and `extra` as smooth, quadratic or
/// biquadratic.
pub fn classify_document(
    doc: &PairDocument,
    extra: &[Vec<String>],
) -> Result<Vec<ClassifiedPoint>> {
    dispatch(doc.field, ClassifyTask { doc, extra })
}

struct CheckTask<'a> {
    doc: &'a PairDocument,
    extra: &'a [Vec<String>],
    sample: usize,
    opts: &'a CheckOptions,
}

impl FieldTask for CheckTask<'_> {
    type Output = MembershipReport;
    fn run<F: Field>(self, field: F) -> Result<Self::Output> {
        let (f1, f2) = self.doc.polys(&field)?;
        let mut pts = points_of(&field, self.doc, self.extra)?;
        if pts.is_empty() && self.sample > 0 {
            pts = sample_points(&f1, &f2, self.sample, self.opts.seed)?;
        }
        membership_report(&f1, &f2, &self.doc.setup, &pts, self.opts)
    }
}

/// Runs every condition on the pair: global ones once, local ones at the
/// document's points and `extra`. When no point is given and `sample > 0`,
/// up to `sample` points are drawn from `V` over the prime field.
pub fn check_document(
    doc: &PairDocument,
    extra: &[Vec<String>],
    sample: usize,
    opts: &CheckOptions,
) -> Result<MembershipReport> {
    dispatch(
        doc.field,
        CheckTask {
            doc,
            extra,
            sample,
            opts,
        },
    )
}

struct GbTask<'a> {
    doc: &'a GbDocument,
    budget: usize,
}

impl FieldTask for GbTask<'_> {
    type Output = GbReport;
    fn run<F: Field>(self, field: F) -> Result<Self::Output> {
        let gens = self.doc.generators(&field)?;
        let ideal = IdealBasis::new(&field, self.doc.nvars, gens)?;
        let gb = groebner_basis(&ideal, StepBudget(self.budget))?;
        Ok(GbReport {
            schema: SCHEMA.into(),
            field: self.doc.field,
            nvars: self.doc.nvars,
            basis: gb.basis.iter().map(poly_to_terms).collect(),
            leading: gb.leading.iter().map(|m| m.exponents().to_vec()).collect(),
            projective_dimension: gb.projective_dimension(self.doc.nvars),
            stats: gb.stats,
        })
    }
}

/// Reduced Gröbner basis and projective dimension of the document's ideal.
pub fn gb_document(doc: &GbDocument, budget: usize) -> Result<GbReport> {
    dispatch(doc.field, GbTask { doc, budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::constructions;

    #[test]
    fn classify_constructed_vertex() {
        let inst = constructions::r21_violation();
        let doc = PairDocument::new(
            inst.setup,
            &inst.f1,
            &inst.f2,
            &[inst.point.clone().unwrap()],
        );
        let c = classify_document(&doc, &[]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].class, "quadratic");
        assert_eq!(c[0].lambda.as_deref(), Some("3"));
        assert_eq!(c[0].rank, Some(2));
    }

    #[test]
    fn check_with_sampled_points() {
        let (f1, f2) = constructions::global_regular();
        let doc = PairDocument::new(
            crate::expansion::AmbientSetup::new(4, 2, 4).unwrap(),
            &f1,
            &f2,
            &[],
        );
        let r = check_document(&doc, &[], 3, &CheckOptions::default()).unwrap();
        assert_eq!(r.local.len(), 3);
        let none = check_document(&doc, &[], 0, &CheckOptions::default()).unwrap();
        assert!(none.local.is_empty());
    }

    #[test]
    fn gb_of_two_quadrics() {
        let json = r#"{"schema":"fanoci/1","field":{"characteristic":101},"nvars":4,
            "generators":[[["1",[2,0,0,0]],["-1",[1,0,1,0]]],
                          [["1",[1,1,0,0]],["-1",[0,0,0,2]]]]}"#;
        let doc = GbDocument::from_json(json).unwrap();
        let r = gb_document(&doc, 1000).unwrap();
        // A line and a conic in P^3.
        assert_eq!(r.projective_dimension, 1);
        assert!(!r.basis.is_empty());
        assert!(matches!(
            gb_document(&doc, 0),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
