//! Graded pieces of the relation module of `f_1, ..., f_n`, computed degree by
//! degree as kernels of `⊕ R_{k - d_i} -> R_k`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GradedRing, Matrix, Poly};
use crate::error::{Error, Result};
use crate::membership::is_primary;

/// Default number of random combinations tried after the basis vectors.
pub const DEFAULT_BUDGET: usize = 1000;

/// `(g_1, ..., g_n)` with `sum g_i f_i = 0` and `deg g_i = k - d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVector {
    pub components: Vec<Poly>,
    pub total_degree: u32,
}

impl RelationVector {
    /// Re-multiplies against `gens` and reduces.
    pub fn verify(&self, ring: &GradedRing, gens: &[Poly]) -> Result<bool> {
        if gens.len() != self.components.len() {
            return Ok(false);
        }
        let mut sum = ring.zero();
        for (g, f) in self.components.iter().zip(gens) {
            if g.is_zero() {
                continue;
            }
            if g.homogeneous_degree()? + f.homogeneous_degree()? != self.total_degree {
                return Ok(false);
            }
            sum = sum.add(&g.mul(f));
        }
        ring.is_zero_in_ring(&sum)
    }

    /// Whether the components generate a primary ideal.
    pub fn is_primary(&self, ring: &GradedRing) -> Result<bool> {
        Ok(is_primary(ring, &self.components, None)?.primary)
    }
}

/// A relation whose vanishing and primariness have both been checked.
/// Only this module can construct one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedPrimaryRelation(RelationVector);

impl CertifiedPrimaryRelation {
    /// Checks `rel` against `gens` and wraps it.
    pub fn certify(ring: &GradedRing, gens: &[Poly], rel: RelationVector) -> Result<Self> {
        if !rel.verify(ring, gens)? {
            return Err(Error::Invalid("vector is not a relation".into()));
        }
        if !rel.is_primary(ring)? {
            return Err(Error::NotPrimary);
        }
        Ok(Self(rel))
    }

    pub fn relation(&self) -> &RelationVector {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.total_degree
    }

    pub fn into_inner(self) -> RelationVector {
        self.0
    }
}

fn degrees_of(gens: &[Poly]) -> Result<Vec<u32>> {
    gens.iter().map(|g| g.homogeneous_degree()).collect()
}

/// Basis of `Rel_k`.
pub fn relation_space(ring: &GradedRing, gens: &[Poly], k: i64) -> Result<Vec<RelationVector>> {
    if k < 0 {
        return Ok(Vec::new());
    }
    let map = ring.combination_map(gens, k)?;
    map.matrix
        .kernel()
        .into_iter()
        .map(|v| {
            Ok(RelationVector {
                components: ring.split_vector(&map.source_degrees, &v)?,
                total_degree: k as u32,
            })
        })
        .collect()
}

/// `dim Rel_k`.
pub fn relation_dim(ring: &GradedRing, gens: &[Poly], k: i64) -> Result<usize> {
    if k < 0 {
        return Ok(0);
    }
    let map = ring.combination_map(gens, k)?;
    Ok(map.matrix.cols() - map.rank())
}

/// Counts of minimal generators of the relation module per total degree,
/// valid in `window` only: the graded Betti window `[min d_i, k_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDegrees {
    pub window: (u32, u32),
    pub counts: BTreeMap<u32, usize>,
}

impl GeneratorDegrees {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Degrees with multiplicity, ascending.
    pub fn flattened(&self) -> Vec<u32> {
        self.counts
            .iter()
            .flat_map(|(&k, &c)| std::iter::repeat_n(k, c))
            .collect()
    }
}

/// Minimal generator counts in each degree `k`, as
/// `dim Rel_k - dim (R_1 · Rel_{k-1})`.
pub fn minimal_generator_degrees(
    ring: &GradedRing,
    gens: &[Poly],
    k_max: u32,
) -> Result<GeneratorDegrees> {
    let degrees = degrees_of(gens)?;
    let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
        return Err(Error::Invalid("no generators".into()));
    };
    if k_max < hi {
        return Err(Error::Invalid(format!(
            "k_max = {k_max} is below the largest generator degree {hi}"
        )));
    }
    let mut counts = BTreeMap::new();
    let mut previous: Vec<RelationVector> = Vec::new();
    for k in lo..=k_max {
        let current = relation_space(ring, gens, k as i64)?;
        let src: Vec<i64> = degrees.iter().map(|&d| k as i64 - d as i64).collect();
        let mut columns = Vec::new();
        for rel in &previous {
            for i in 0..ring.nvars() {
                let x = ring.var(i);
                let shifted: Vec<Poly> = rel.components.iter().map(|g| g.mul(&x)).collect();
                columns.push(ring.join_vector(&src, &shifted)?);
            }
        }
        let rows: usize = src.iter().map(|&a| ring.graded_piece_dim(a)).sum();
        let decomposable = Matrix::from_columns(ring.field(), rows, &columns).rank();
        let new = current.len() - decomposable;
        if new > 0 {
            counts.insert(k, new);
        }
        previous = current;
    }
    Ok(GeneratorDegrees {
        window: (lo, k_max),
        counts,
    })
}

/// Total degrees `k_j` of a basis of the free relation module over
/// `F_p[x, y]`, so that the relation bundle on the projective line is
/// `⊕ O(m - k_j)` after twisting by `m`.
///
/// A convention note: a relation of total degree `k` has its last component
/// in degree `k - d_n`, which is the per-component number used when two such
/// bases are compared; see [`SplittingType::component_degrees`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType {
    pub degrees: Vec<u32>,
    pub twist: i64,
}

impl SplittingType {
    /// `m - k_j`, the line bundle degrees.
    pub fn bundle_degrees(&self) -> Vec<i64> {
        self.degrees.iter().map(|&k| self.twist - k as i64).collect()
    }

    /// `k_j - d_ref`: degrees of the components that multiply a generator of
    /// degree `d_ref`.
    pub fn component_degrees(&self, d_ref: u32) -> Vec<i64> {
        self.degrees.iter().map(|&k| k as i64 - d_ref as i64).collect()
    }

    /// Difference of the extreme degrees; for rank two this is the index of
    /// the Hirzebruch surface.
    pub fn imbalance(&self) -> u32 {
        match (self.degrees.first(), self.degrees.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    /// `sum (m - k_j) = (n - 1) m - sum d_i`, from the determinant of the
    /// relation bundle.
    pub fn determinant_holds(&self, gen_degrees: &[u32]) -> bool {
        let n = gen_degrees.len() as i64;
        let lhs: i64 = self.bundle_degrees().iter().sum();
        let rhs = (n - 1) * self.twist - gen_degrees.iter().map(|&d| d as i64).sum::<i64>();
        self.degrees.len() as i64 == n - 1 && lhs == rhs
    }
}

pub fn splitting_type_p1(ring: &GradedRing, gens: &[Poly], m: i64) -> Result<SplittingType> {
    if ring.nvars() != 2 || ring.relation().is_some() {
        return Err(Error::Invalid(
            "splitting type needs the polynomial ring in two variables".into(),
        ));
    }
    if !is_primary(ring, gens, None)?.primary {
        return Err(Error::NotPrimary);
    }
    let degrees = degrees_of(gens)?;
    let k_max: u32 = degrees.iter().sum();
    let found = minimal_generator_degrees(ring, gens, k_max)?;
    let st = SplittingType {
        degrees: found.flattened(),
        twist: m,
    };
    if !st.determinant_holds(&degrees) {
        return Err(Error::Invalid(format!(
            "relation module generators {:?} violate the determinant identity",
            st.degrees
        )));
    }
    Ok(st)
}

/// Outcome of a primary-relation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationSearch {
    Found {
        relation: CertifiedPrimaryRelation,
        tried: usize,
    },
    /// `Rel_k = 0`.
    NoRelationSpace,
    Exhausted {
        tried: usize,
        dim: usize,
    },
}

impl RelationSearch {
    pub fn found(&self) -> Option<&CertifiedPrimaryRelation> {
        match self {
            RelationSearch::Found { relation, .. } => Some(relation),
            _ => None,
        }
    }
}

/// Whether every pair of `gens` generates a primary ideal.
pub fn pairwise_primary(ring: &GradedRing, gens: &[Poly]) -> Result<bool> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !is_primary(ring, &[gens[i].clone(), gens[j].clone()], None)?.primary {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches `Rel_k` for a relation with primary components: first the basis
/// vectors, then `budget` pseudo-random combinations drawn from `seed`.
pub fn find_primary_relation(
    ring: &GradedRing,
    gens: &[Poly],
    k: u32,
    budget: usize,
    seed: u64,
) -> Result<RelationSearch> {
    if !pairwise_primary(ring, gens)? {
        return Err(Error::NotPrimary);
    }
    let basis = relation_space(ring, gens, k as i64)?;
    if basis.is_empty() {
        return Ok(RelationSearch::NoRelationSpace);
    }
    let mut tried = 0;
    for rel in &basis {
        tried += 1;
        if rel.is_primary(ring)? {
            return Ok(RelationSearch::Found {
                relation: CertifiedPrimaryRelation::certify(ring, gens, rel.clone())?,
                tried,
            });
        }
    }
    let field = ring.field();
    let p = field.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // A single basis vector has no other combinations up to scaling.
    let attempts = if basis.len() == 1 { 0 } else { budget };
    for _ in 0..attempts {
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..p)).collect();
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        tried += 1;
        let components = (0..gens.len())
            .map(|i| {
                basis
                    .iter()
                    .zip(&coeffs)
                    .fold(ring.zero(), |acc, (rel, &c)| acc.add(&rel.components[i].scale(c)))
            })
            .collect();
        let rel = RelationVector {
            components,
            total_degree: k,
        };
        if rel.is_primary(ring)? {
            return Ok(RelationSearch::Found {
                relation: CertifiedPrimaryRelation::certify(ring, gens, rel)?,
                tried,
            });
        }
    }
    Ok(RelationSearch::Exhausted {
        tried,
        dim: basis.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(p: u64) -> GradedRing {
        GradedRing::from_text(p, 2, None).unwrap()
    }

    fn gens(r: &GradedRing, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|g| r.parse(g).unwrap()).collect()
    }

    #[test]
    fn koszul() {
        let r = plane(5);
        let g = gens(&r, &["x", "y"]);
        let rels = relation_space(&r, &g, 2).unwrap();
        assert_eq!(rels.len(), 1);
        assert!(rels[0].verify(&r, &g).unwrap());
        let md = minimal_generator_degrees(&r, &g, 4).unwrap();
        assert_eq!(md.flattened(), vec![2]);
        assert_eq!(splitting_type_p1(&r, &g, 1).unwrap().degrees, vec![2]);
    }

    #[test]
    fn three_quadrics_on_the_line() {
        let r = plane(7);
        let g = gens(&r, &["x^2", "y^2", "x*y"]);
        assert_eq!(relation_dim(&r, &g, 2).unwrap(), 0);
        let rels = relation_space(&r, &g, 3).unwrap();
        assert_eq!(rels.len(), 2);
        for rel in &rels {
            assert!(rel.verify(&r, &g).unwrap());
        }
        let st = splitting_type_p1(&r, &g, 2).unwrap();
        assert_eq!(st.degrees, vec![3, 3]);
        assert_eq!(st.component_degrees(2), vec![1, 1]);
        assert_eq!(st.imbalance(), 0);

        let g = gens(&r, &["x^2", "y^2", "x^2"]);
        let st = splitting_type_p1(&r, &g, 2).unwrap();
        assert_eq!(st.degrees, vec![2, 4]);
        assert_eq!(st.component_degrees(2), vec![0, 2]);
        assert!(st.determinant_holds(&[2, 2, 2]));
    }

    #[test]
    fn splitting_needs_primary() {
        let r = plane(7);
        let g = gens(&r, &["x^2", "x*y"]);
        assert!(matches!(splitting_type_p1(&r, &g, 2), Err(Error::NotPrimary)));
    }

    #[test]
    fn fermat_relation() {
        let r = GradedRing::from_text(7, 3, Some("x^3+y^3+z^3")).unwrap();
        let g = gens(&r, &["x^2", "y^2", "z^2"]);
        let found = find_primary_relation(&r, &g, 3, DEFAULT_BUDGET, 0).unwrap();
        let rel = found.found().expect("primary relation in degree 3");
        assert_eq!(rel.total_degree(), 3);
        assert!(rel.relation().verify(&r, &g).unwrap());
        // Rel_3 is spanned by (x, y, z) and the Koszul-free part is empty
        assert_eq!(relation_dim(&r, &g, 3).unwrap(), 1);
        let c = &rel.relation().components;
        let lc = c[0].leading_term().unwrap().1;
        let inv = r.field().inv(lc).unwrap();
        let scaled: Vec<String> = c.iter().map(|p| r.format(&p.scale(inv))).collect();
        assert_eq!(scaled, vec!["x", "y", "z"]);

        let g = gens(&r, &["x", "y", "z"]);
        assert_eq!(
            find_primary_relation(&r, &g, 1, DEFAULT_BUDGET, 0).unwrap(),
            RelationSearch::NoRelationSpace
        );
    }

    #[test]
    fn search_is_deterministic() {
        let r = GradedRing::from_text(5, 3, Some("x^4+y^4+z^4")).unwrap();
        let g = gens(&r, &["x^3", "y^3", "z^2"]);
        let a = find_primary_relation(&r, &g, 5, 50, 11).unwrap();
        let b = find_primary_relation(&r, &g, 5, 50, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn euler_identity() {
        let r = GradedRing::from_text(5, 3, Some("x^4+y^4+z^4")).unwrap();
        let g = gens(&r, &["x^3", "y^3", "z^2"]);
        for k in 0..9i64 {
            let map = r.combination_map(&g, k).unwrap();
            let sources: usize = [3, 3, 2].iter().map(|d| r.graded_piece_dim(k - d)).sum();
            assert_eq!(relation_dim(&r, &g, k).unwrap(), sources - map.rank());
        }
    }
}
