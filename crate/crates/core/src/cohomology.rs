//! Cohomology of line bundles and of the forcing sheaves on a smooth plane
//! curve `Y = V(F) ⊂ P^2`.
//!
//! `H^2(P^2, O(-s))` has the basis `x^-a y^-b z^-c` with `a, b, c >= 1`,
//! `a + b + c = s`; multiplication by a form keeps the monomials whose
//! exponents all stay negative. `H^1(Y, O_Y(t))` is the kernel of
//! multiplication by `F` on `H^2(P^2, O(t - d))`, which is all of it when
//! `t >= -2`.

use std::collections::HashMap;

use crate::algebra::monomial::monomials_of_degree;
use crate::algebra::{ForcingData, GradedRing, Matrix, Poly};
use crate::error::{Error, Result};
use crate::membership::{ideal_membership, in_ideal};
use crate::syzygy::{relation_dim, CertifiedPrimaryRelation};

/// Basis triples `(a, b, c)` of `H^2(P^2, O(-s))`, in graded order of
/// `(a - 1, b - 1, c - 1)`.
pub fn negative_basis(s: i64) -> Vec<[u32; 3]> {
    if s < 3 {
        return Vec::new();
    }
    monomials_of_degree(3, (s - 3) as u32)
        .into_iter()
        .map(|m| {
            let e = m.exponents();
            [e[0] + 1, e[1] + 1, e[2] + 1]
        })
        .collect()
}

fn binom2(k: i64) -> usize {
    if k < 2 {
        0
    } else {
        (k * (k - 1) / 2) as usize
    }
}

/// A ring `F_p[x, y, z]/(F)` whose projective curve has been checked smooth.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    ring: GradedRing,
    degree: u32,
}

impl PlaneCurve {
    pub fn new(ring: GradedRing) -> Result<Self> {
        let degree = ring
            .relation_degree()
            .ok_or_else(|| Error::Invalid("a plane curve needs a relation".into()))?;
        if !crate::membership::is_smooth_curve(&ring)? {
            return Err(Error::Invalid("the plane curve is singular".into()));
        }
        Ok(Self { ring, degree })
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn genus(&self) -> usize {
        binom2(self.degree as i64 - 1)
    }

    fn check_data(&self, data: &ForcingData) -> Result<()> {
        let other = data.ring();
        if other.field() != self.ring.field() || other.relation() != self.ring.relation() {
            return Err(Error::Invalid("forcing data lives on a different ring".into()));
        }
        Ok(())
    }
}

/// `(h^0, h^1)` of `O_Y(n)`.
pub fn h_line(curve: &PlaneCurve, n: i64) -> (usize, usize) {
    let d = curve.degree as i64;
    let h0 = curve.ring.graded_piece_dim(n);
    // dim H^2(O(n - d)) minus the image of F in H^2(O(n)), which is onto.
    let h1 = binom2(d - n - 1) - binom2(-n - 1);
    (h0, h1)
}

/// Multiplication by `f` from `H^2(P^2, O(-s))` to `H^2(P^2, O(-s + deg f))`.
pub fn negative_mult_matrix(f: &Poly, s: i64) -> Result<Matrix> {
    let e = f.homogeneous_degree()? as i64;
    let src = negative_basis(s);
    let dst = negative_basis(s - e);
    let index: HashMap<[u32; 3], usize> = dst.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let field = f.field();
    let mut m = Matrix::zeros(field, dst.len(), src.len());
    for (j, a) in src.iter().enumerate() {
        for (mono, c) in f.terms() {
            let t = mono.exponents();
            if (0..3).any(|k| t[k] >= a[k]) {
                continue;
            }
            let i = index[&[a[0] - t[0], a[1] - t[1], a[2] - t[2]]];
            m.set(i, j, field.add(m.get(i, j), c));
        }
    }
    Ok(m)
}

/// Multiplication by `f` from `H^1(O_Y(n))` to `H^1(O_Y(n + deg f))`, written
/// on the ambient `H^2(P^2, O(n - d))` bases; `H^1` is the kernel of `F`.
#[derive(Debug, Clone)]
pub struct H1Map {
    pub source_twist: i64,
    pub target_twist: i64,
    pub matrix: Matrix,
}

pub fn mult_map_h1(curve: &PlaneCurve, f: &Poly, n: i64) -> Result<H1Map> {
    curve.ring.check_poly(f)?;
    let e = f.homogeneous_degree()? as i64;
    let d = curve.degree as i64;
    Ok(H1Map {
        source_twist: n,
        target_twist: n + e,
        matrix: negative_mult_matrix(f, d - n)?,
    })
}

/// Basis of `H^1(O_Y(n))` inside the ambient `H^2(P^2, O(n - d))`.
pub fn h1_basis(curve: &PlaneCurve, n: i64) -> Result<Vec<Vec<u32>>> {
    let d = curve.degree as i64;
    let rel = curve.ring.relation().expect("plane curve has a relation");
    Ok(negative_mult_matrix(rel, d - n)?.kernel())
}

/// The Čech class `h / (f_1 f_2)` is zero exactly when `h ∈ (f_1, f_2)`.
pub fn cech_class_vanishes(ring: &GradedRing, f1: &Poly, f2: &Poly, h: &Poly) -> Result<bool> {
    if h.is_zero() {
        return Ok(true);
    }
    let deg = h.homogeneous_degree()?;
    Ok(ideal_membership(ring, &[f1.clone(), f2.clone()], h, deg)?.is_some())
}

/// Sections of a sheaf `S(j)` presented as the cokernel of
/// `O(j - m) -> ⊕ O(j - e_i)`: the cokernel on `H^0` plus the kernel on `H^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SheafSectionReport {
    pub twist: i64,
    pub h0: usize,
    pub cokernel_part: usize,
    pub kernel_part: usize,
}

/// Sections at twist `j` of the three sheaves attached to forcing data with
/// grading twist `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForcingSections {
    /// The sheaf of linear forms of `f_0, ..., f_n`.
    pub forcing: SheafSectionReport,
    /// The same for `f_1, ..., f_n` only.
    pub relation_only: SheafSectionReport,
    /// `dim Rel_{m + j}` for `f_1, ..., f_n`: sections of the relation sheaf.
    pub relations: usize,
}

fn cokernel_sheaf_sections(
    curve: &PlaneCurve,
    forms: &[Poly],
    twist_m: i64,
    j: i64,
) -> Result<SheafSectionReport> {
    let ring = &curve.ring;
    let d = curve.degree as i64;
    let mut sum = 0;
    for f in forms {
        let e = twist_m - f.homogeneous_degree()? as i64;
        sum += ring.graded_piece_dim(j - e);
    }
    // The forms are nonzero in a domain, so R_{j-m} injects.
    let cokernel_part = sum - ring.graded_piece_dim(j - twist_m);
    let t = j - twist_m;
    let rel = ring.relation().expect("plane curve has a relation");
    let mut stacked = negative_mult_matrix(rel, d - t)?;
    for f in forms {
        stacked = stacked.vstack(&negative_mult_matrix(f, d - t)?);
    }
    let kernel_part = stacked.cols() - stacked.rank();
    Ok(SheafSectionReport {
        twist: j,
        h0: cokernel_part + kernel_part,
        cokernel_part,
        kernel_part,
    })
}

pub fn h0_forcing_sheaf(curve: &PlaneCurve, data: &ForcingData, j: i64) -> Result<ForcingSections> {
    curve.check_data(data)?;
    let m = data.twist();
    let gens = data.generators();
    let mut all = vec![data.candidate().clone()];
    all.extend_from_slice(gens);
    // A zero candidate contributes a free summand O(j - e_0).
    let forcing = if data.candidate().is_zero() {
        let mut r = cokernel_sheaf_sections(curve, gens, m, j)?;
        let extra = curve.ring.graded_piece_dim(j - data.candidate_bundle_degree());
        r.cokernel_part += extra;
        r.h0 += extra;
        r
    } else {
        cokernel_sheaf_sections(curve, &all, m, j)?
    };
    Ok(ForcingSections {
        forcing,
        relation_only: cokernel_sheaf_sections(curve, gens, m, j)?,
        relations: relation_dim(&curve.ring, gens, m + j)?,
    })
}

/// Bounds on the normalizing number `ν` of the forcing divisor, searched over
/// multiples of the hyperplane class only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizingBounds {
    pub nu_low: i64,
    pub nu_high: i64,
    pub deg_h: i64,
    /// Largest `j` with sections of the forcing sheaf twisted by `-j H`.
    pub sections_up_to: i64,
}

impl NormalizingBounds {
    pub fn is_exact(&self) -> bool {
        self.nu_low == self.nu_high
    }
}

/// `ν` for two generators, with the forcing sheaf taken at twist `m = d_0`.
///
/// The lower bound is `deg H` times the largest `j` for which the forcing
/// sheaf still has sections after twisting by `-j`. The upper bound is
/// `ℓ deg H` (strict when `f_0 ∉ I`), and `a deg H` with
/// `a = max(k - d_0, d_1 + d_2 - k)` when a primary relation of total degree
/// `k` for `(f_1, f_2, f_0)` is supplied.
pub fn normalizing_number_h(
    curve: &PlaneCurve,
    data: &ForcingData,
    relation: Option<&CertifiedPrimaryRelation>,
) -> Result<NormalizingBounds> {
    curve.check_data(data)?;
    if data.len() != 2 {
        return Err(Error::Invalid("normalizing number needs two generators".into()));
    }
    let deg_h = curve.degree as i64;
    let ell = data.leadno();
    let d0 = data.candidate_degree() as i64;
    let at_candidate = data.with_twist(d0);

    let mut nu_high = if ell <= 0 {
        0
    } else if in_ideal(data)?.is_some() {
        ell * deg_h
    } else {
        ell * deg_h - 1
    };
    if let Some(rel) = relation {
        let gens = [
            data.generators()[0].clone(),
            data.generators()[1].clone(),
            data.candidate().clone(),
        ];
        if !rel.relation().verify(&curve.ring, &gens)? {
            return Err(Error::Invalid("relation does not belong to (f1, f2, f0)".into()));
        }
        let k = rel.total_degree() as i64;
        let (d1, d2) = (data.degrees()[0] as i64, data.degrees()[1] as i64);
        let a = (k - d0).max(d1 + d2 - k);
        nu_high = nu_high.min(a * deg_h);
    }

    // Twisting down by H eventually kills all sections; the kernel part is
    // bounded by the H^1 of O_Y(-j - m), so this limit is generous.
    let limit = 4 * (d0 + data.degrees().iter().map(|&d| d as i64).sum::<i64>() + deg_h);
    let mut j = 0;
    while j < limit {
        if h0_forcing_sheaf(curve, &at_candidate, -(j + 1))?.forcing.h0 == 0 {
            break;
        }
        j += 1;
    }
    if j == limit {
        return Err(Error::Invalid("sections did not vanish within the search window".into()));
    }
    Ok(NormalizingBounds {
        nu_low: j * deg_h,
        nu_high,
        deg_h,
        sections_up_to: j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u64, f: &str) -> PlaneCurve {
        PlaneCurve::new(GradedRing::from_text(p, 3, Some(f)).unwrap()).unwrap()
    }

    #[test]
    fn line_bundles_on_cubic_and_quartic() {
        let c = curve(7, "x^3+y^3+z^3");
        assert_eq!(h_line(&c, 0), (1, 1));
        let q = curve(5, "x^4+y^4+z^4");
        assert_eq!(h_line(&q, 0), (1, 3));
        for n in 2..8 {
            assert_eq!(h_line(&q, n).1, 0);
            assert_eq!(h_line(&q, n).0, q.ring().graded_piece_dim(n));
        }
    }

    #[test]
    fn h1_dimension_matches_kernel() {
        let q = curve(5, "x^4+y^4+z^4");
        for n in -6..8 {
            assert_eq!(h1_basis(&q, n).unwrap().len(), h_line(&q, n).1, "n = {n}");
        }
    }

    #[test]
    fn singular_curve_rejected() {
        let r = GradedRing::from_text(3, 3, Some("x^3+y^3+z^3")).unwrap();
        assert!(PlaneCurve::new(r).is_err());
    }

    #[test]
    fn mult_by_unit_and_relation() {
        let c = curve(7, "x^3+y^3+z^3");
        let one = c.ring().one();
        let m = mult_map_h1(&c, &one, -2).unwrap();
        assert_eq!(m.matrix, Matrix::identity(c.ring().field(), 6));
        let f = c.ring().relation().unwrap().clone();
        for n in -2..2 {
            assert!(mult_map_h1(&c, &f, n).unwrap().matrix.is_zero());
        }
    }

    #[test]
    fn mult_by_z_on_quartic() {
        let q = curve(5, "x^4+y^4+z^4");
        let z = q.ring().parse("z").unwrap();
        let m = mult_map_h1(&q, &z, -1).unwrap();
        let (h1_src, h1_dst) = (h_line(&q, -1).1, h_line(&q, 0).1);
        // H^0(O_Y) -> H^0(O_{Y ∩ {z = 0}}) has rank 1 into 4 points.
        assert_eq!(m.matrix.rank(), h1_dst);
        assert_eq!(h1_src - m.matrix.rank(), 4 - 1);
    }

    #[test]
    fn cech_vanishing() {
        let c = curve(7, "x^3+y^3+z^3");
        let g = |s: &str| c.ring().parse(s).unwrap();
        assert!(cech_class_vanishes(c.ring(), &g("x"), &g("y"), &g("x*z")).unwrap());
        assert!(!cech_class_vanishes(c.ring(), &g("x"), &g("y"), &g("z^2")).unwrap());
        let c2 = GradedRing::from_text(2, 3, Some("x^3+y^3+z^3")).unwrap();
        let g = |s: &str| c2.parse(s).unwrap();
        assert!(cech_class_vanishes(&c2, &g("x^2"), &g("y^2"), &g("z^4")).unwrap());
    }

    #[test]
    fn parameter_case_sections() {
        let c = curve(7, "x^3+y^3+z^3");
        let d = ForcingData::from_text(c.ring(), &["x", "y"], "z^2", None).unwrap();
        assert_eq!(h0_forcing_sheaf(&c, &d, 0).unwrap().forcing.h0, 1);
        assert_eq!(h0_forcing_sheaf(&c, &d, -1).unwrap().forcing.h0, 0);
        let nu = normalizing_number_h(&c, &d, None).unwrap();
        assert_eq!((nu.nu_low, nu.nu_high), (0, 0));
    }

    #[test]
    fn balanced_relation_gives_sections() {
        let c = curve(7, "x^3+y^3+z^3");
        let d = ForcingData::from_text(c.ring(), &["x^2", "y^2", "z^2"], "x*y*z", Some(3)).unwrap();
        assert!(h0_forcing_sheaf(&c, &d, 0).unwrap().relations >= 1);
    }

    #[test]
    fn zero_candidate_splits_off() {
        let c = curve(5, "x^4+y^4+z^4");
        let gens = vec![c.ring().parse("x^2").unwrap(), c.ring().parse("y^3").unwrap()];
        let d = ForcingData::with_candidate_degree(c.ring().clone(), gens, c.ring().zero(), 3, None).unwrap();
        for j in -4..6 {
            let s = h0_forcing_sheaf(&c, &d, j).unwrap();
            let extra = c.ring().graded_piece_dim(j - d.candidate_bundle_degree());
            assert_eq!(s.forcing.h0, s.relation_only.h0 + extra);
        }
    }

    #[test]
    fn split_case_normalizing_number() {
        let c = curve(7, "x^3+y^3+z^3");
        let d = ForcingData::from_text(c.ring(), &["x^2", "y^2"], "x^2", None).unwrap();
        let nu = normalizing_number_h(&c, &d, None).unwrap();
        assert_eq!((nu.nu_low, nu.nu_high), (6, 6));
    }

    #[test]
    fn fermat_triples_balanced() {
        use crate::syzygy::{find_primary_relation, DEFAULT_BUDGET};
        for (m, p, ds) in [(3u32, 7u64, [2u32, 2, 2]), (4, 5, [3, 3, 2]), (4, 5, [3, 2, 3]), (4, 5, [2, 3, 3])] {
            let c = curve(p, &format!("x^{m}+y^{m}+z^{m}"));
            let g = [format!("x^{}", ds[0]), format!("y^{}", ds[1])];
            let d = ForcingData::from_text(c.ring(), &[&g[0], &g[1]], &format!("z^{}", ds[2]), None).unwrap();
            let triple: Vec<Poly> = vec![d.generators()[0].clone(), d.generators()[1].clone(), d.candidate().clone()];
            let rel = find_primary_relation(c.ring(), &triple, m, DEFAULT_BUDGET, 1).unwrap();
            let rel = rel.found().expect("balanced relation");
            let nu = normalizing_number_h(&c, &d, Some(rel)).unwrap();
            let half = d.leadno() * m as i64 / 2;
            assert_eq!((nu.nu_low, nu.nu_high), (half, half), "m = {m}, d = {ds:?}");
        }
    }
}
