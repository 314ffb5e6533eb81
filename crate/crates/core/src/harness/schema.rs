use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::AmbientSetup;
use crate::fieldpoly::{Field, FieldSpec, MultiPoly, PrimeField, Rationals};

/// Version tag carried by every document and report.
pub const SCHEMA: &str = "fanoci/1";

/// One term of a polynomial literal: coefficient and exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term(pub String, pub Vec<u16>);

pub fn poly_to_terms<F: Field>(f: &MultiPoly<F>) -> Vec<Term> {
    f.terms()
        .rev()
        .map(|(m, c)| Term(f.field().format(c), m.exponents().to_vec()))
        .collect()
}

pub fn terms_to_poly<F: Field>(field: &F, nvars: usize, terms: &[Term]) -> Result<MultiPoly<F>> {
    let parsed = terms
        .iter()
        .map(|Term(c, e)| Ok((e.clone(), field.parse(c)?)))
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(field, nvars, parsed)
}

/// A pair `(f1, f2)` with its field, setup and optional points of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDocument {
    pub schema: String,
    pub field: FieldSpec,
    pub setup: AmbientSetup,
    pub f1: Vec<Term>,
    pub f2: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<String>>,
}

fn check_schema(s: &str) -> Result<()> {
    if s != SCHEMA {
        return Err(Error::Input(format!(
            "unknown schema {s:?}, expected {SCHEMA:?}"
        )));
    }
    Ok(())
}

impl PairDocument {
    pub fn new<F: Field>(
        setup: AmbientSetup,
        f1: &MultiPoly<F>,
        f2: &MultiPoly<F>,
        points: &[Vec<F::Elem>],
    ) -> Self {
        let field = f1.field();
        PairDocument {
            schema: SCHEMA.into(),
            field: field.spec(),
            setup,
            f1: poly_to_terms(f1),
            f2: poly_to_terms(f2),
            points: points
                .iter()
                .map(|p| p.iter().map(|c| field.format(c)).collect())
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PairDocument = serde_json::from_str(s)?;
        check_schema(&doc.schema)?;
        doc.field.validate()?;
        doc.setup.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Parses both polynomials over `field`, which must match the document.
    pub fn polys<F: Field>(&self, field: &F) -> Result<(MultiPoly<F>, MultiPoly<F>)> {
        if field.spec() != self.field {
            return Err(Error::Input("field does not match the document".into()));
        }
        let n = self.setup.homogeneous_vars();
        Ok((
            terms_to_poly(field, n, &self.f1)?,
            terms_to_poly(field, n, &self.f2)?,
        ))
    }

    pub fn parsed_points<F: Field>(&self, field: &F) -> Result<Vec<Vec<F::Elem>>> {
        let n = self.setup.homogeneous_vars();
        self.points
            .iter()
            .map(|p| {
                if p.len() != n {
                    return Err(Error::Input(format!(
                        "point with {} coordinates, expected {n}",
                        p.len()
                    )));
                }
                p.iter().map(|c| field.parse(c)).collect()
            })
            .collect()
    }
}

/// Generators of a homogeneous ideal, for the `gb` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbDocument {
    pub schema: String,
    pub field: FieldSpec,
    pub nvars: usize,
    pub generators: Vec<Vec<Term>>,
}

impl GbDocument {
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GbDocument = serde_json::from_str(s)?;
        check_schema(&doc.schema)?;
        doc.field.validate()?;
        Ok(doc)
    }

    pub fn generators<F: Field>(&self, field: &F) -> Result<Vec<MultiPoly<F>>> {
        self.generators
            .iter()
            .map(|g| terms_to_poly(field, self.nvars, g))
            .collect()
    }
}

/// A computation generic in the coefficient field, run once the field is
/// known at runtime.
pub trait FieldTask {
    type Output;
    fn run<F: Field>(self, field: F) -> Result<Self::Output>;
}

pub fn dispatch<T: FieldTask>(spec: FieldSpec, task: T) -> Result<T::Output> {
    spec.validate()?;
    if spec.characteristic == 0 {
        task.run(Rationals)
    } else {
        task.run(PrimeField::new(spec.characteristic)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = PrimeField::new(101).unwrap();
        let setup = AmbientSetup::new(4, 2, 4).unwrap();
        let x: Vec<_> = (0..7).map(|i| MultiPoly::var(&f, 7, i)).collect();
        let f1 = &(&x[0] * &x[6]) + &x[1].pow(2).scale(&100);
        let f2 = &x[1] * &x[6].pow(3);
        let mut o = vec![0u64; 7];
        o[6] = 1;
        let doc = PairDocument::new(setup, &f1, &f2, &[o.clone()]);
        let back = PairDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let (g1, g2) = back.polys(&f).unwrap();
        assert_eq!((g1, g2), (f1, f2));
        assert_eq!(back.parsed_points(&f).unwrap(), vec![o]);
    }

    #[test]
    fn bad_schema_and_field() {
        let s = r#"{"schema":"other","field":{"characteristic":101},"setup":{"M":4,"d1":2,"d2":4},"f1":[],"f2":[]}"#;
        assert!(PairDocument::from_json(s).is_err());
        let s = r#"{"schema":"fanoci/1","field":{"characteristic":2},"setup":{"M":4,"d1":2,"d2":4},"f1":[],"f2":[]}"#;
        assert!(matches!(
            PairDocument::from_json(s),
            Err(Error::Unsupported(_))
        ));
        assert!(PairDocument::from_json("{").is_err());
    }
}
