//! Integer intersection numbers of the forcing bundles over a curve, in units
//! of powers of the hyperplane class.

use crate::algebra::ForcingData;
use crate::error::{Error, Result};
use crate::membership::in_ideal;
use crate::syzygy::CertifiedPrimaryRelation;

/// `ℓ = sum d_i - (n - 1) d_0`.
pub fn leadno(degrees: &[i64], candidate_degree: i64) -> i64 {
    degrees.iter().sum::<i64>() - (degrees.len() as i64 - 1) * candidate_degree
}

/// Chern coefficients `c_0, ..., c_{n-1}` (multiples of `H^i`) of the kernel
/// bundle `V_m` of `⊕ O(e_i) -> O(m)`, from
/// `c_t(V_m) (1 - m t) = ∏ (1 - e_i t)` truncated at the rank `n - 1`.
pub fn chern_polynomial(e_list: &[i64], m: i64) -> Result<Vec<i64>> {
    if e_list.is_empty() {
        return Err(Error::Invalid("need at least one summand".into()));
    }
    let len = e_list.len();
    let overflow = || Error::Invalid("Chern coefficient overflows".into());
    let mut product = vec![0i64; len];
    product[0] = 1;
    for &e in e_list {
        for k in (1..len).rev() {
            product[k] = product[k]
                .checked_sub(e.checked_mul(product[k - 1]).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
    }
    // Divide by (1 - m t): c_k = p_k + m c_{k-1}.
    let mut c = vec![0i64; len];
    for k in 0..len {
        let carry = if k == 0 { 0 } else { m.checked_mul(c[k - 1]).ok_or_else(overflow)? };
        c[k] = product[k].checked_add(carry).ok_or_else(overflow)?;
    }
    Ok(c)
}

/// `ℓ · deg H`.
pub fn self_intersection_top(data: &ForcingData, deg_h: i64) -> Result<i64> {
    if deg_h < 1 {
        return Err(Error::Invalid("deg H must be positive".into()));
    }
    Ok(data.leadno() * deg_h)
}

/// Closed integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub low: i64,
    pub high: i64,
}

impl Interval {
    pub fn exact(v: i64) -> Self {
        Self { low: v, high: v }
    }

    pub fn is_exact(&self) -> bool {
        self.low == self.high
    }

    pub fn contains(&self, v: i64) -> bool {
        self.low <= v && v <= self.high
    }

    fn meet(self, other: Interval) -> Interval {
        Interval {
            low: self.low.max(other.low),
            high: self.high.min(other.high),
        }
    }
}

/// `ν` and `e = 2ν - ℓ deg H` for the ruled surface of two generators and a
/// candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantBounds {
    pub nu: Interval,
    pub e: Interval,
}

/// Bounds on `ν` and `e`. A relation of total degree `k` for `(f_1, f_2, f_0)`
/// tightens them; it must come certified from the syzygy search.
pub fn e_bounds(
    data: &ForcingData,
    deg_h: i64,
    relation: Option<&CertifiedPrimaryRelation>,
) -> Result<InvariantBounds> {
    if data.len() != 2 {
        return Err(Error::Invalid("e-invariant bounds need two generators".into()));
    }
    if deg_h < 1 {
        return Err(Error::Invalid("deg H must be positive".into()));
    }
    let ell = data.leadno();
    let z = ell * deg_h;
    let e_of = |nu: Interval| Interval {
        low: 2 * nu.low - z,
        high: 2 * nu.high - z,
    };
    if ell <= 0 {
        let nu = Interval::exact(0);
        return Ok(InvariantBounds { nu, e: e_of(nu) });
    }
    let strict = in_ideal(data)?.is_none();
    let mut nu = Interval {
        low: 0,
        high: if strict { z - 1 } else { z },
    };
    if let Some(rel) = relation {
        let gens = [
            data.generators()[0].clone(),
            data.generators()[1].clone(),
            data.candidate().clone(),
        ];
        if !rel.relation().verify(data.ring(), &gens)? {
            return Err(Error::Invalid("relation does not belong to (f1, f2, f0)".into()));
        }
        let k = rel.total_degree() as i64;
        let (d1, d2, d0) = (
            data.degrees()[0] as i64,
            data.degrees()[1] as i64,
            data.candidate_degree() as i64,
        );
        let a = (k - d0).max(d1 + d2 - k);
        nu = nu.meet(Interval { low: 0, high: a * deg_h });
        if 2 * k == d0 + d1 + d2 {
            // ν = ℓ deg H / 2 and e = 0.
            nu = Interval::exact(z / 2);
        }
    }
    Ok(InvariantBounds { nu, e: e_of(nu) })
}

/// Everything numeric about forcing data over a curve of hyperplane degree
/// `deg_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionReport {
    pub m: i64,
    pub e_list: Vec<i64>,
    pub e0: i64,
    pub ell: i64,
    pub deg_h: i64,
    pub z_top: i64,
    pub chern: Vec<i64>,
    /// Present for two generators.
    pub bounds: Option<InvariantBounds>,
}

pub fn intersection_report(
    data: &ForcingData,
    deg_h: i64,
    relation: Option<&CertifiedPrimaryRelation>,
) -> Result<IntersectionReport> {
    let e_list = data.bundle_degrees();
    let bounds = if data.len() == 2 {
        Some(e_bounds(data, deg_h, relation)?)
    } else {
        None
    };
    Ok(IntersectionReport {
        m: data.twist(),
        chern: chern_polynomial(&e_list, data.twist())?,
        e_list,
        e0: data.candidate_bundle_degree(),
        ell: data.leadno(),
        deg_h,
        z_top: self_intersection_top(data, deg_h)?,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedRing;
    use proptest::prelude::*;

    #[test]
    fn leadno_examples() {
        assert_eq!(leadno(&[2, 2, 2], 3), 0);
        assert_eq!(leadno(&[1, 1], 3), -1);
        assert_eq!(leadno(&[4, 7], 11), 0);
    }

    #[test]
    fn top_self_intersection() {
        let r = GradedRing::from_text(5, 3, Some("x^4+y^4+z^4")).unwrap();
        let d = ForcingData::from_text(&r, &["x", "y"], "z^3", None).unwrap();
        assert_eq!(self_intersection_top(&d, 4).unwrap(), -4);
        let line = GradedRing::from_text(5, 2, None).unwrap();
        let d = ForcingData::from_text(&line, &["x^4", "y^4", "x^4"], "x^3*y^3", None).unwrap();
        assert_eq!(self_intersection_top(&d, 1).unwrap(), 0);
    }

    #[test]
    fn chern_small() {
        assert_eq!(chern_polynomial(&[3], 3).unwrap(), vec![1]);
        // c_1 = m - sum e_i
        assert_eq!(chern_polynomial(&[1, 2, 4], 5).unwrap()[1], 5 - 7);
    }

    #[test]
    fn parameter_bounds() {
        let r = GradedRing::from_text(7, 3, Some("x^3+y^3+z^3")).unwrap();
        let d = ForcingData::from_text(&r, &["x", "y"], "z^3", None).unwrap();
        let b = e_bounds(&d, 3, None).unwrap();
        assert_eq!(b.nu, Interval::exact(0));
        assert_eq!(b.e, Interval::exact(3));
        let d = ForcingData::from_text(&r, &["x^2", "y^2"], "z^2", None).unwrap();
        let b = e_bounds(&d, 3, None).unwrap();
        assert_eq!(b.nu, Interval { low: 0, high: 5 });
    }

    proptest! {
        #[test]
        fn chern_first_coefficient(e in prop::collection::vec(-20i64..20, 2..6), m in -20i64..20) {
            let c = chern_polynomial(&e, m).unwrap();
            prop_assert_eq!(c[0], 1);
            prop_assert_eq!(c[1], m - e.iter().sum::<i64>());
            prop_assert_eq!(c.len(), e.len());
        }

        #[test]
        fn leadno_ignores_order(mut d in prop::collection::vec(0i64..30, 2..6), d0 in 0i64..30) {
            let a = leadno(&d, d0);
            d.reverse();
            prop_assert_eq!(leadno(&d, d0), a);
        }
    }
}
