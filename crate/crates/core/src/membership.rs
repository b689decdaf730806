//! Homogeneous ideal membership with explicit cofactors, and primariness as
//! vanishing of the quotient in one degree.

use crate::algebra::{ForcingData, GradedRing, Poly};
use crate::error::{Error, Result};

/// Cofactors `a_i` with `target = sum a_i g_i` in the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofactorCertificate {
    pub cofactors: Vec<Poly>,
}

impl CofactorCertificate {
    /// Re-multiplies the cofactors and checks `target - sum a_i g_i = 0` in the
    /// ring.
    pub fn verify(&self, ring: &GradedRing, gens: &[Poly], target: &Poly) -> Result<bool> {
        if gens.len() != self.cofactors.len() {
            return Ok(false);
        }
        let mut residue = target.clone();
        for (a, g) in self.cofactors.iter().zip(gens) {
            residue = residue.sub(&a.mul(g));
        }
        if residue.is_zero() {
            return Ok(true);
        }
        if !residue.is_homogeneous() {
            return Ok(false);
        }
        ring.is_zero_in_ring(&residue)
    }

    /// Image under the `q`-th power Frobenius: a certificate for
    /// `target^q` against `g_i^q`.
    pub fn frobenius(&self, q: u32) -> CofactorCertificate {
        CofactorCertificate {
            cofactors: self.cofactors.iter().map(|a| a.frobenius_power(q)).collect(),
        }
    }
}

/// Decides `target ∈ (gens)` in degree `target_degree` by one linear solve.
/// `target` may be zero.
pub fn ideal_membership(
    ring: &GradedRing,
    gens: &[Poly],
    target: &Poly,
    target_degree: u32,
) -> Result<Option<CofactorCertificate>> {
    let n = target_degree as i64;
    let map = ring.combination_map(gens, n)?;
    let rhs = ring.coordinates(target, n)?;
    let Some(solution) = map.matrix.solve(&rhs) else {
        return Ok(None);
    };
    let cofactors = ring.split_vector(&map.source_degrees, &solution)?;
    let cert = CofactorCertificate { cofactors };
    debug_assert!(cert.verify(ring, gens, target).unwrap_or(false));
    Ok(Some(cert))
}

/// `f_0 ∈ (f_1, ..., f_n)`, with cofactors when it holds.
pub fn in_ideal(data: &ForcingData) -> Result<Option<CofactorCertificate>> {
    ideal_membership(
        data.ring(),
        data.generators(),
        data.candidate(),
        data.candidate_degree(),
    )
}

/// `dim (R/I)_n`.
pub fn quotient_dim(ring: &GradedRing, gens: &[Poly], n: i64) -> Result<usize> {
    if n < 0 {
        return Ok(0);
    }
    let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let dim = ring.graded_piece_dim(n);
    if gens.is_empty() {
        return Ok(dim);
    }
    Ok(dim - ring.combination_map(&gens, n)?.rank())
}

/// Outcome of a primariness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimaryCheck {
    pub primary: bool,
    /// Least degree where the quotient vanishes when primary; otherwise the
    /// degree at which a nonzero quotient was certified.
    pub degree: u32,
}

/// Degree bound used when none is given: `dim R * max d_i + deg F`.
///
/// Over an infinite field an `R_+`-primary ideal generated in degrees `<= D`
/// contains a system of parameters of degree `D`, and the quotient by it
/// vanishes above this bound.
pub fn default_primary_bound(ring: &GradedRing, gens: &[Poly]) -> u32 {
    let max_d = gens
        .iter()
        .filter_map(|g| g.homogeneous_degree().ok())
        .max()
        .unwrap_or(0);
    let (krull, rel) = match ring.relation_degree() {
        Some(d) => (ring.nvars() as u32 - 1, d),
        None => (ring.nvars() as u32, 0),
    };
    (krull * max_d + rel).max(max_d)
}

/// Whether `gens` generate an ideal of finite colength, decided by checking
/// `(R/I)_n = 0` for some `n <= n_max`. Zero generators are ignored.
pub fn is_primary(ring: &GradedRing, gens: &[Poly], n_max: Option<u32>) -> Result<PrimaryCheck> {
    let nonzero: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut max_degree = 0;
    for g in &nonzero {
        ring.check_poly(g)?;
        max_degree = max_degree.max(g.homogeneous_degree()?);
    }
    let n_max = n_max.unwrap_or_else(|| default_primary_bound(ring, &nonzero));
    if n_max < max_degree {
        return Err(Error::Inconclusive { n_max, max_degree });
    }
    if nonzero.is_empty() {
        return Ok(PrimaryCheck {
            primary: ring.graded_piece_dim(n_max as i64) == 0,
            degree: n_max,
        });
    }
    if quotient_dim(ring, &nonzero, n_max as i64)? != 0 {
        return Ok(PrimaryCheck {
            primary: false,
            degree: n_max,
        });
    }
    // Vanishing is monotone in a standard graded ring: search the least degree.
    let (mut lo, mut hi) = (0u32, n_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if quotient_dim(ring, &nonzero, mid as i64)? == 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(PrimaryCheck {
        primary: true,
        degree: lo,
    })
}

/// Jacobian criterion for `Proj R` when `R` is a plane-curve cone: the
/// relation and its partial derivatives must generate a primary ideal.
pub fn is_smooth_curve(ring: &GradedRing) -> Result<bool> {
    let Some(rel) = ring.relation() else {
        return Err(Error::Invalid("smoothness check needs a relation".into()));
    };
    if ring.nvars() != 3 {
        return Err(Error::Invalid("smoothness check needs three variables".into()));
    }
    let d = rel.homogeneous_degree()?;
    let partials: Vec<Poly> = (0..3)
        .map(|i| rel.partial_derivative(i))
        .filter(|p| !p.is_zero())
        .collect();
    if partials.is_empty() {
        return Ok(false);
    }
    // The partials have degree d - 1 < d, so they are nonzero in R as well.
    Ok(is_primary(ring, &partials, Some(4 * d))?.primary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat(p: u64, d: u32) -> GradedRing {
        GradedRing::from_text(p, 3, Some(&format!("x^{d}+y^{d}+z^{d}"))).unwrap()
    }

    #[test]
    fn candidate_equal_to_generator() {
        let r = fermat(5, 3);
        let d = ForcingData::from_text(&r, &["x^2", "y^2"], "x^2", None).unwrap();
        let cert = in_ideal(&d).unwrap().unwrap();
        assert_eq!(cert.cofactors[0], r.one());
        assert!(cert.cofactors[1].is_zero());
    }

    #[test]
    fn z_squared_not_in_xy() {
        let r = fermat(7, 3);
        let d = ForcingData::from_text(&r, &["x", "y"], "z^2", None).unwrap();
        assert!(in_ideal(&d).unwrap().is_none());
    }

    #[test]
    fn xyz_not_in_squares() {
        let r = fermat(7, 3);
        let d = ForcingData::from_text(&r, &["x^2", "y^2", "z^2"], "x*y*z", None).unwrap();
        assert!(in_ideal(&d).unwrap().is_none());
    }

    #[test]
    fn primary_examples() {
        let r = fermat(7, 3);
        let g = |s: &str| r.parse(s).unwrap();
        let check = is_primary(&r, &[g("x"), g("y"), g("z")], None).unwrap();
        assert_eq!(check, PrimaryCheck { primary: true, degree: 1 });
        let check = is_primary(&r, &[g("x"), g("y")], None).unwrap();
        assert_eq!(check, PrimaryCheck { primary: true, degree: 3 });
        assert_eq!(quotient_dim(&r, &[g("x"), g("y")], 3).unwrap(), 0);
        assert_eq!(quotient_dim(&r, &[g("x"), g("y")], 2).unwrap(), 1);
        assert!(!is_primary(&r, &[g("x"), g("x^2")], None).unwrap().primary);
        assert!(matches!(
            is_primary(&r, &[g("x^3"), g("y")], Some(2)),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth_curve(&fermat(5, 3)).unwrap());
        assert!(!is_smooth_curve(&fermat(3, 3)).unwrap());
        assert!(is_smooth_curve(&fermat(5, 4)).unwrap());
        assert!(is_smooth_curve(&fermat(2, 3)).unwrap());
        // a nodal cubic
        let nodal = GradedRing::from_text(7, 3, Some("y^2*z-x^3-x^2*z")).unwrap();
        assert!(!is_smooth_curve(&nodal).unwrap());
        assert!(is_smooth_curve(&GradedRing::from_text(7, 2, None).unwrap()).is_err());
    }

    #[test]
    fn quotient_dim_matches_rank() {
        let r = fermat(5, 4);
        let gens: Vec<Poly> = ["x^2", "y^3", "x*z"].iter().map(|s| r.parse(s).unwrap()).collect();
        for n in 0..10 {
            let map = r.combination_map(&gens, n).unwrap();
            assert_eq!(
                quotient_dim(&r, &gens, n).unwrap(),
                r.graded_piece_dim(n) - map.rank()
            );
        }
    }
}
