use crate::error::{Error, Result};
use crate::fieldpoly::{Field, MultiPoly};

/// Rational points of a projective zero set, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEnumeration<E> {
    pub points: Vec<Vec<E>>,
    /// Candidates examined.
    pub scanned: usize,
    /// The scan stopped at the limit before covering projective space.
    pub truncated: bool,
}

/// Lists the points of `{g = 0 for g in polys}` over a finite field. Each
/// point is given by its representative with first nonzero coordinate 1, in
/// lexicographic order of representatives. At most `limit` candidates are
/// examined.
pub fn enumerate_points<F: Field>(
    polys: &[MultiPoly<F>],
    limit: usize,
) -> Result<PointEnumeration<F::Elem>> {
    let first = polys
        .first()
        .ok_or_else(|| Error::Input("no polynomials to enumerate".into()))?;
    if polys.iter().all(|g| g.is_zero()) {
        return Err(Error::Input("every polynomial is zero".into()));
    }
    let field = first.field();
    let n = first.nvars();
    if polys.iter().any(|g| g.nvars() != n) {
        return Err(Error::Input("polynomials live in different rings".into()));
    }
    let elems = field
        .elements()
        .ok_or_else(|| Error::Unsupported("point enumeration needs a finite field".into()))?;
    if field.characteristic() < 3 {
        return Err(Error::Unsupported("point enumeration needs p >= 3".into()));
    }
    let q = elems.len();
    let mut points = Vec::new();
    let mut scanned = 0usize;
    let mut idx = vec![0usize; n];
    for lead in 0..n {
        // odometer over the coordinates after the leading 1
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            if scanned == limit {
                return Ok(PointEnumeration {
                    points,
                    scanned,
                    truncated: true,
                });
            }
            scanned += 1;
            let pt: Vec<F::Elem> = (0..n)
                .map(|k| match k.cmp(&lead) {
                    std::cmp::Ordering::Less => field.zero(),
                    std::cmp::Ordering::Equal => field.one(),
                    std::cmp::Ordering::Greater => elems[idx[k]].clone(),
                })
                .collect();
            if polys
                .iter()
                .all(|g| g.eval(&pt).map(|v| field.is_zero(&v)).unwrap_or(false))
            {
                points.push(pt);
            }
            let mut k = n;
            let mut carry = true;
            while carry && k > lead + 1 {
                k -= 1;
                idx[k] += 1;
                carry = idx[k] == q;
                if carry {
                    idx[k] = 0;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(PointEnumeration {
        points,
        scanned,
        truncated: false,
    })
}
