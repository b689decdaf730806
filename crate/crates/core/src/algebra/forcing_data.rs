use super::poly::Poly;
use super::ring::GradedRing;
use crate::error::{Error, Result};

/// Forcing data `f_1, ..., f_n; f_0` in a graded ring, together with the
/// twist `m` used for the bundle gradings `e_i = m - d_i`.
#[derive(Debug, Clone)]
pub struct ForcingData {
    ring: GradedRing,
    generators: Vec<Poly>,
    degrees: Vec<u32>,
    candidate: Poly,
    candidate_degree: u32,
    twist: i64,
}

impl ForcingData {
    /// `twist` defaults to the candidate degree.
    pub fn new(
        ring: GradedRing,
        generators: Vec<Poly>,
        candidate: Poly,
        twist: Option<i64>,
    ) -> Result<Self> {
        ring.check_poly(&candidate)?;
        let d0 = candidate.homogeneous_degree()?;
        Self::with_candidate_degree(ring, generators, candidate, d0, twist)
    }

    /// Allows a zero candidate, whose degree must then be given explicitly.
    pub fn with_candidate_degree(
        ring: GradedRing,
        generators: Vec<Poly>,
        candidate: Poly,
        candidate_degree: u32,
        twist: Option<i64>,
    ) -> Result<Self> {
        if generators.len() < 2 {
            return Err(Error::Invalid("forcing data needs at least two generators".into()));
        }
        let mut degrees = Vec::with_capacity(generators.len());
        for g in &generators {
            ring.check_poly(g)?;
            if g.is_zero() {
                return Err(Error::Invalid("generators must be nonzero".into()));
            }
            degrees.push(g.homogeneous_degree()?);
        }
        ring.check_poly(&candidate)?;
        if !candidate.is_zero() && candidate.homogeneous_degree()? != candidate_degree {
            return Err(Error::Invalid("candidate degree does not match".into()));
        }
        Ok(Self {
            ring,
            generators,
            degrees,
            candidate,
            candidate_degree,
            twist: twist.unwrap_or(candidate_degree as i64),
        })
    }

    pub fn from_text(
        ring: &GradedRing,
        generators: &[&str],
        candidate: &str,
        twist: Option<i64>,
    ) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>>>()?;
        let f0 = ring.parse(candidate)?;
        Self::new(ring.clone(), gens, f0, twist)
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn candidate(&self) -> &Poly {
        &self.candidate
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn candidate_degree(&self) -> u32 {
        self.candidate_degree
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// `e_i = m - d_i` for the generators.
    pub fn bundle_degrees(&self) -> Vec<i64> {
        self.degrees.iter().map(|&d| self.twist - d as i64).collect()
    }

    /// `e_0 = m - d_0`.
    pub fn candidate_bundle_degree(&self) -> i64 {
        self.twist - self.candidate_degree as i64
    }

    /// `sum d_i - (n - 1) d_0`.
    pub fn leadno(&self) -> i64 {
        let ds: Vec<i64> = self.degrees.iter().map(|&d| d as i64).collect();
        crate::geometry::leadno(&ds, self.candidate_degree as i64)
    }

    /// Same data with another twist.
    pub fn with_twist(&self, twist: i64) -> Self {
        Self {
            twist,
            ..self.clone()
        }
    }

    /// Same generators with another candidate.
    pub fn with_candidate(&self, candidate: Poly) -> Result<Self> {
        Self::new(self.ring.clone(), self.generators.clone(), candidate, Some(self.twist))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_degrees() {
        let r = GradedRing::from_text(5, 3, Some("x^3+y^3+z^3")).unwrap();
        let d = ForcingData::from_text(&r, &["x", "y^2"], "z^3", None).unwrap();
        assert_eq!(d.twist(), 3);
        assert_eq!(d.bundle_degrees(), vec![2, 1]);
        assert_eq!(d.candidate_bundle_degree(), 0);
        for (e, di) in d.bundle_degrees().iter().zip(d.degrees()) {
            assert_eq!(e + *di as i64, d.twist());
        }
        assert_eq!(d.leadno(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let r = GradedRing::from_text(5, 3, None).unwrap();
        assert!(ForcingData::from_text(&r, &["x"], "y", None).is_err());
        assert!(ForcingData::from_text(&r, &["x", "0"], "y", None).is_err());
        assert!(ForcingData::from_text(&r, &["x", "y+z^2"], "y", None).is_err());
        assert!(ForcingData::from_text(&r, &["x", "y"], "0", None).is_err());
        let zero = r.zero();
        let ok = ForcingData::with_candidate_degree(r.clone(), vec![r.var(0), r.var(1)], zero, 2, None);
        assert!(ok.is_ok());
    }
}
