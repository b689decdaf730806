//! Bracket powers and the Frobenius-based tests: Frobenius closure, tight
//! closure witnesses, the Hasse invariant, the Frobenius matrix on
//! `H^1(Y, O_Y)` and Artin-Schreier glue data for Frobenius-fixed classes.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::algebra::{ForcingData, GradedRing, Matrix, Monomial, Poly};
use crate::cohomology::negative_basis;
use crate::error::{Error, Result};
use crate::membership::{ideal_membership, is_primary, CofactorCertificate};

/// Default largest Frobenius exponent tried.
pub const DEFAULT_E_MAX: u32 = 2;

#[derive(Debug, Clone, Default)]
pub struct FrobeniusConfig {
    /// `None` picks [`default_test_element`].
    pub test_element: Option<Poly>,
    /// Exponents `e = 1..=e_max` are tested.
    pub e_max: u32,
    /// Largest degree a bracket solve may reach.
    pub max_degree: Option<u32>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl FrobeniusConfig {
    pub fn new(e_max: u32) -> Self {
        Self {
            e_max,
            ..Self::default()
        }
    }

    fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }

    fn check_degree(&self, degree: u64) -> Result<u32> {
        let cap = self.max_degree.unwrap_or(u32::MAX);
        if degree > cap as u64 {
            return Err(Error::DegreeCap { degree, cap });
        }
        Ok(degree as u32)
    }
}

/// The first partial derivative of the relation that is nonzero, or `1` for a
/// polynomial ring. Partials have degree below the relation, so they stay
/// nonzero in the ring.
pub fn default_test_element(ring: &GradedRing) -> Poly {
    match ring.relation() {
        None => ring.one(),
        Some(rel) => (0..ring.nvars())
            .map(|i| rel.partial_derivative(i))
            .find(|p| !p.is_zero())
            .unwrap_or_else(|| ring.one()),
    }
}

fn frobenius_exponent(p: u32, q: u32) -> Option<u32> {
    let mut e = 0;
    let mut acc = 1u32;
    while acc < q {
        acc = acc.checked_mul(p)?;
        e += 1;
    }
    (acc == q).then_some(e)
}

/// `p^e`, or an error when it does not fit.
pub fn frobenius_power_of(p: u32, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .ok_or_else(|| Error::Invalid(format!("{p}^{e} overflows")))
}

/// Tests `multiplier · f_0^q ∈ (f_1^q, ..., f_n^q)`.
pub fn bracket_membership(
    data: &ForcingData,
    q: u32,
    multiplier: &Poly,
    config: &FrobeniusConfig,
) -> Result<Option<CofactorCertificate>> {
    let ring = data.ring();
    let p = ring.characteristic();
    if frobenius_exponent(p, q).is_none() {
        return Err(Error::Invalid(format!("{q} is not a power of {p}")));
    }
    ring.check_poly(multiplier)?;
    if multiplier.is_zero() {
        return Err(Error::Invalid("multiplier must be nonzero".into()));
    }
    config.check_cancel()?;
    let degree = config.check_degree(
        multiplier.homogeneous_degree()? as u64 + q as u64 * data.candidate_degree() as u64,
    )?;
    let gens: Vec<Poly> = data.generators().iter().map(|g| g.frobenius_power(q)).collect();
    let target = multiplier.mul(&data.candidate().frobenius_power(q));
    let cert = ideal_membership(ring, &gens, &target, degree)?;
    config.check_cancel()?;
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusClosure {
    /// `f_0^q ∈ I^[q]` with `q` the least power tried that works.
    In {
        witness_q: u32,
        certificate: CofactorCertificate,
    },
    /// Every `q <= max_q` failed. This never proves exclusion.
    Unknown { max_q: u32 },
}

/// Tries `q = 1, p, ..., p^{e_max}` in turn.
pub fn frobenius_closure_test(
    data: &ForcingData,
    config: &FrobeniusConfig,
) -> Result<FrobeniusClosure> {
    let ring = data.ring();
    let p = ring.characteristic();
    let one = ring.one();
    let mut q = 1;
    for e in 0..=config.e_max {
        q = frobenius_power_of(p, e)?;
        if let Some(certificate) = bracket_membership(data, q, &one, config)? {
            return Ok(FrobeniusClosure::In {
                witness_q: q,
                certificate,
            });
        }
    }
    Ok(FrobeniusClosure::Unknown { max_q: q })
}

/// Outcome of `c f_0^q ∈ I^[q]` for `q = p, ..., p^{e_max}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightClosureWitness {
    pub test_element: Poly,
    pub qs: Vec<u32>,
    pub vector: Vec<bool>,
    pub certificates: Vec<Option<CofactorCertificate>>,
}

impl TightClosureWitness {
    pub fn supports_membership(&self) -> bool {
        self.vector.iter().all(|b| *b)
    }

    /// A failure at some `q` contradicts membership provided the test element
    /// really is one.
    pub fn refutes_under_test_element(&self) -> bool {
        self.vector.iter().any(|b| !*b)
    }
}

pub fn tight_closure_witness(
    data: &ForcingData,
    config: &FrobeniusConfig,
) -> Result<TightClosureWitness> {
    let ring = data.ring();
    let c = match &config.test_element {
        Some(c) => c.clone(),
        None => default_test_element(ring),
    };
    ring.check_poly(&c)?;
    if c.is_zero() || ring.is_zero_in_ring(&c)? {
        return Err(Error::Invalid("test element must be nonzero in the ring".into()));
    }
    c.homogeneous_degree()?;
    let p = ring.characteristic();
    let mut out = TightClosureWitness {
        test_element: c.clone(),
        qs: Vec::new(),
        vector: Vec::new(),
        certificates: Vec::new(),
    };
    for e in 1..=config.e_max {
        let q = frobenius_power_of(p, e)?;
        let cert = bracket_membership(data, q, &c, config)?;
        out.qs.push(q);
        out.vector.push(cert.is_some());
        out.certificates.push(cert);
    }
    Ok(out)
}

fn check_plane(f: &Poly) -> Result<u32> {
    if f.nvars() != 3 {
        return Err(Error::Invalid("expected a ternary form".into()));
    }
    f.homogeneous_degree()
}

/// Coefficient of `(xyz)^{p-1}` in `F^{p-1}` for a plane cubic `F`.
pub fn hasse_invariant(f: &Poly) -> Result<u32> {
    if check_plane(f)? != 3 {
        return Err(Error::Invalid("Hasse invariant needs a cubic".into()));
    }
    let p = f.field().characteristic();
    let power = f.pow(p - 1);
    Ok(power.coefficient(&Monomial::from_exponents(&[p - 1, p - 1, p - 1])))
}

/// The p-linear Frobenius on `H^1(Y, O_Y) ≅ H^2(P^2, O(-d))`, written on the
/// basis `x^-a y^-b z^-c` with `a, b, c >= 1`, `a + b + c = d`.
///
/// Coordinates are in `F_p`, where the p-power on scalars is the identity, so
/// the e-fold composite is the plain matrix power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAction {
    /// Exponent triples `(a, b, c)` indexing rows and columns.
    pub basis: Vec<[u32; 3]>,
    pub matrix: Matrix,
    pub genus: usize,
    /// `rank M^e` for `e = 0..=genus`.
    pub rank_chain: Vec<usize>,
    /// Dimension of the stable part.
    pub p_rank: usize,
    /// Least `t` with `M^t = 0` on the nilpotent part.
    pub nilpotency_index: usize,
    /// `dim ker (M - 1)` over `F_p`.
    pub fixed_dim: usize,
    /// The stable part has no basis of fixed vectors over `F_p`; a finite
    /// extension would be needed.
    pub needs_extension: bool,
}

pub fn frobenius_action_h1(ring: &GradedRing) -> Result<FrobeniusAction> {
    let Some(f) = ring.relation() else {
        return Err(Error::Invalid("Frobenius action needs a plane curve".into()));
    };
    let d = check_plane(f)?;
    let p = ring.characteristic();
    let field = ring.field();
    let basis = negative_basis(d as i64);
    let g = basis.len();
    let power = f.pow(p - 1);
    let mut m = Matrix::zeros(field, g, g);
    for (j, src) in basis.iter().enumerate() {
        for (i, dst) in basis.iter().enumerate() {
            // F^{p-1} x^{-pa} ... lands on x^{-a'} ... through the monomial
            // x^{pa - a'} ...; any other monomial leaves a nonnegative exponent.
            // When p a < a' for some variable the entry is zero.
            let exps: Option<Vec<u32>> = (0..3).map(|k| (p * src[k]).checked_sub(dst[k])).collect();
            if let Some(exps) = exps {
                m.set(i, j, power.coefficient(&Monomial::from_exponents(&exps)));
            }
        }
    }
    let mut rank_chain = Vec::with_capacity(g + 1);
    let mut acc = Matrix::identity(field, g);
    for _ in 0..=g {
        rank_chain.push(acc.rank());
        acc = acc.mul(&m);
    }
    let p_rank = rank_chain[g];
    let nilpotency_index = rank_chain.iter().position(|r| *r == p_rank).unwrap_or(g);
    let fixed_dim = m.sub(&Matrix::identity(field, g)).kernel().len();
    Ok(FrobeniusAction {
        basis,
        matrix: m,
        genus: g,
        rank_chain,
        p_rank,
        nilpotency_index,
        fixed_dim,
        needs_extension: fixed_dim < p_rank,
    })
}

/// Glue data `T_i^p - T_i + u_i / f_i^p` for the class `c = h / (f_1 f_2)`,
/// subject to `h^p - h (f_1 f_2)^{p-1} = u_2 f_1^p - u_1 f_2^p` in the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDatum {
    pub f1: Poly,
    pub f2: Poly,
    pub h: Poly,
    pub u1: Poly,
    pub u2: Poly,
}

impl CoverDatum {
    pub fn verify(&self, ring: &GradedRing) -> Result<bool> {
        let p = ring.characteristic();
        let lhs = self
            .h
            .pow(p)
            .sub(&self.h.mul(&self.f1.mul(&self.f2).pow(p - 1)));
        let rhs = self
            .u2
            .mul(&self.f1.frobenius_power(p))
            .sub(&self.u1.mul(&self.f2.frobenius_power(p)));
        let diff = lhs.sub(&rhs);
        if diff.is_zero() {
            return Ok(true);
        }
        if !diff.is_homogeneous() {
            return Ok(false);
        }
        ring.is_zero_in_ring(&diff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArtinSchreierSplit {
    /// `h ∈ (f_1, f_2)`: the class is zero and the datum comes from the
    /// cofactors of `h`.
    Trivial(CoverDatum),
    /// `Φ(c) = c` for a nonzero class.
    Cover(CoverDatum),
    /// `Φ^e(c) = 0` with `q = p^e`; no Artin-Schreier layer is needed.
    NilpotentRoute { q: u32 },
}

/// Builds Artin-Schreier glue for `h / (f_1 f_2)`. Fails with
/// [`Error::NotACoboundary`] when the class is neither fixed nor killed by a
/// Frobenius power up to `p^{e_max}`.
pub fn artin_schreier_split(
    ring: &GradedRing,
    f1: &Poly,
    f2: &Poly,
    h: &Poly,
    e_max: u32,
) -> Result<ArtinSchreierSplit> {
    for g in [f1, f2, h] {
        ring.check_poly(g)?;
    }
    let (d1, d2) = (f1.homogeneous_degree()?, f2.homogeneous_degree()?);
    if !h.is_zero() && h.homogeneous_degree()? != d1 + d2 {
        return Err(Error::Invalid("deg h must be deg f1 + deg f2".into()));
    }
    if !is_primary(ring, &[f1.clone(), f2.clone()], None)?.primary {
        return Err(Error::NotPrimary);
    }
    let p = ring.characteristic();
    let pair = [f1.clone(), f2.clone()];
    let datum = |u1: Poly, u2: Poly| CoverDatum {
        f1: f1.clone(),
        f2: f2.clone(),
        h: h.clone(),
        u1,
        u2,
    };
    if let Some(cert) = ideal_membership(ring, &pair, h, d1 + d2)? {
        // c = g1/f2 + g2/f1, so c^p - c splits term by term.
        let (g1, g2) = (&cert.cofactors[0], &cert.cofactors[1]);
        let u2 = g1.pow(p).sub(&g1.mul(&f2.pow(p - 1)));
        let u1 = g2.pow(p).sub(&g2.mul(&f1.pow(p - 1))).neg();
        let d = datum(u1, u2);
        debug_assert!(d.verify(ring)?);
        return Ok(ArtinSchreierSplit::Trivial(d));
    }
    let target = h.pow(p).sub(&h.mul(&f1.mul(f2).pow(p - 1)));
    let bracket = [f1.frobenius_power(p), f2.frobenius_power(p)];
    if let Some(cert) = ideal_membership(ring, &bracket, &target, p * (d1 + d2))? {
        let u2 = cert.cofactors[0].clone();
        let u1 = cert.cofactors[1].neg();
        let d = datum(u1, u2);
        if !d.verify(ring)? {
            return Err(Error::Invalid("cover datum failed its identity".into()));
        }
        return Ok(ArtinSchreierSplit::Cover(d));
    }
    for e in 1..=e_max {
        let q = frobenius_power_of(p, e)?;
        let bracket = [f1.frobenius_power(q), f2.frobenius_power(q)];
        if ideal_membership(ring, &bracket, &h.frobenius_power(q), q * (d1 + d2))?.is_some() {
            return Ok(ArtinSchreierSplit::NilpotentRoute { q });
        }
    }
    Err(Error::NotACoboundary)
}
