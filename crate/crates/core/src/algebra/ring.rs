//! Standard graded rings `F_p[x_1..x_r]/(F)` with a single homogeneous
//! relation (or none), and their graded pieces in monomial coordinates.
//!
//! The relation is its own Gröbner basis, so the standard monomials of degree
//! `n` are those not divisible by the graded-lex leading monomial of `F`. Each
//! graded piece caches the normal form of every ambient monomial of that
//! degree; the cache is filled once per degree and shared between clones.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use super::field::PrimeField;
use super::matrix::Matrix;
use super::monomial::{count_monomials, monomials_of_degree, Monomial};
use super::parse::{default_variable_names, format_poly, parse_poly};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Default cap on the number of ambient monomials in one graded piece.
pub const DEFAULT_PIECE_CAP: usize = 20_000;

type SparseVec = Vec<(u32, u32)>;

/// One graded piece `R_n` in monomial coordinates.
#[derive(Debug)]
pub struct Piece {
    degree: u32,
    ambient: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    basis: Vec<Monomial>,
    normal_forms: Vec<SparseVec>,
}

impl Piece {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Standard monomials spanning `R_n`, descending graded-lex.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient.len()
    }

    fn normal_form(&self, m: &Monomial) -> &SparseVec {
        &self.normal_forms[self.index[m]]
    }
}

struct RingInner {
    field: PrimeField,
    names: Vec<String>,
    relation: Option<Poly>,
    /// Leading monomial of the relation and the negated, normalized tail:
    /// `lead = sum c_t * t` modulo the relation.
    rewrite: Option<(Monomial, Vec<(Monomial, u32)>)>,
    piece_cap: usize,
    cache: RwLock<HashMap<u32, Arc<Piece>>>,
}

/// `F_p[x_1..x_r]/(F)`, every variable of weight one. Clones share the cache.
#[derive(Clone)]
pub struct GradedRing {
    inner: Arc<RingInner>,
}

impl std::fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedRing")
            .field("p", &self.inner.field.characteristic())
            .field("vars", &self.inner.names)
            .field("relation", &self.inner.relation.as_ref().map(|r| self.format(r)))
            .finish()
    }
}

impl GradedRing {
    pub fn polynomial(field: PrimeField, names: Vec<String>) -> Result<Self> {
        Self::build(field, names, None, DEFAULT_PIECE_CAP)
    }

    pub fn hypersurface(field: PrimeField, names: Vec<String>, relation: Poly) -> Result<Self> {
        Self::build(field, names, Some(relation), DEFAULT_PIECE_CAP)
    }

    /// Convenience constructor: `p`, default variable names and the relation
    /// in text form.
    pub fn from_text(p: u64, nvars: usize, relation: Option<&str>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let names = default_variable_names(nvars);
        match relation {
            None => Self::polynomial(field, names),
            Some(text) => {
                let rel = parse_poly(text, field, &names)?;
                Self::hypersurface(field, names, rel)
            }
        }
    }

    /// Same ring with a different piece cap and a fresh cache.
    pub fn with_piece_cap(&self, cap: usize) -> Result<Self> {
        Self::build(
            self.inner.field,
            self.inner.names.clone(),
            self.inner.relation.clone(),
            cap,
        )
    }

    fn build(
        field: PrimeField,
        names: Vec<String>,
        relation: Option<Poly>,
        piece_cap: usize,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid("a graded ring needs at least one variable".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::Invalid(format!("duplicate variable name '{dup}'")));
        }
        let rewrite = match &relation {
            None => None,
            Some(rel) => {
                if rel.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field.characteristic(),
                        right: rel.field().characteristic(),
                    });
                }
                if rel.nvars() != names.len() {
                    return Err(Error::VariableCount {
                        expected: names.len(),
                        found: rel.nvars(),
                    });
                }
                let d = rel.homogeneous_degree()?;
                if d == 0 {
                    return Err(Error::Invalid("relation must have positive degree".into()));
                }
                let (lead, lc) = rel.leading_term().expect("nonzero relation");
                let scale = field.neg(field.inv(lc).expect("nonzero"));
                let tail = rel
                    .terms()
                    .filter(|(m, _)| *m != lead)
                    .map(|(m, c)| (m.clone(), field.mul(c, scale)))
                    .collect();
                Some((lead.clone(), tail))
            }
        };
        Ok(Self {
            inner: Arc::new(RingInner {
                field,
                names,
                relation,
                rewrite,
                piece_cap,
                cache: RwLock::new(HashMap::new()),
            }),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.inner.field
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.field.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.inner.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn relation(&self) -> Option<&Poly> {
        self.inner.relation.as_ref()
    }

    pub fn relation_degree(&self) -> Option<u32> {
        self.inner.relation.as_ref().map(|r| r.homogeneous_degree().expect("checked"))
    }

    pub fn piece_cap(&self) -> usize {
        self.inner.piece_cap
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        parse_poly(text, self.inner.field, &self.inner.names)
    }

    pub fn format(&self, f: &Poly) -> String {
        format_poly(f, &self.inner.names)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.inner.field, self.nvars(), i)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.inner.field, self.nvars())
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.inner.field, self.nvars())
    }

    pub fn check_poly(&self, f: &Poly) -> Result<()> {
        if f.field() != self.inner.field {
            return Err(Error::FieldMismatch {
                left: self.characteristic(),
                right: f.field().characteristic(),
            });
        }
        if f.nvars() != self.nvars() {
            return Err(Error::VariableCount {
                expected: self.nvars(),
                found: f.nvars(),
            });
        }
        Ok(())
    }

    /// `dim R_n` from the Hilbert function of a hypersurface ring.
    pub fn graded_piece_dim(&self, n: i64) -> usize {
        let r = self.nvars();
        let ambient = count_monomials(r, n);
        match self.relation_degree() {
            None => ambient,
            Some(d) => ambient - count_monomials(r, n - d as i64),
        }
    }

    /// The cached graded piece of degree `n`.
    pub fn piece(&self, n: u32) -> Result<Arc<Piece>> {
        if let Some(p) = self.inner.cache.read().get(&n) {
            return Ok(Arc::clone(p));
        }
        let size = count_monomials(self.nvars(), n as i64);
        if size > self.inner.piece_cap {
            return Err(Error::ResourceCap {
                degree: n,
                size,
                cap: self.inner.piece_cap,
            });
        }
        let built = Arc::new(self.build_piece(n));
        let mut cache = self.inner.cache.write();
        Ok(Arc::clone(cache.entry(n).or_insert(built)))
    }

    fn build_piece(&self, n: u32) -> Piece {
        let f = self.inner.field;
        let ambient = monomials_of_degree(self.nvars(), n);
        let index: HashMap<Monomial, usize> =
            ambient.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let is_standard = |m: &Monomial| match &self.inner.rewrite {
            None => true,
            Some((lead, _)) => !lead.divides(m),
        };
        let basis: Vec<Monomial> = ambient.iter().filter(|m| is_standard(m)).cloned().collect();
        let basis_pos: HashMap<&Monomial, u32> =
            basis.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();

        let mut normal_forms: Vec<SparseVec> = vec![Vec::new(); ambient.len()];
        let mut dense = vec![0u32; basis.len()];
        // Ascending order: every rewrite target is smaller than its source.
        for idx in (0..ambient.len()).rev() {
            let m = &ambient[idx];
            if let Some(&pos) = basis_pos.get(m) {
                normal_forms[idx] = vec![(pos, 1 % f.characteristic())];
                continue;
            }
            let (lead, tail) = self.inner.rewrite.as_ref().expect("non-standard needs relation");
            let cofactor = lead.quotient_of(m);
            for (t, c) in tail {
                let target = index[&cofactor.mul(t)];
                debug_assert!(target > idx);
                for &(j, v) in &normal_forms[target] {
                    let slot = &mut dense[j as usize];
                    *slot = f.add(*slot, f.mul(*c, v));
                }
            }
            let mut nf = Vec::new();
            for (j, slot) in dense.iter_mut().enumerate() {
                if *slot != 0 {
                    nf.push((j as u32, *slot));
                    *slot = 0;
                }
            }
            normal_forms[idx] = nf;
        }
        Piece {
            degree: n,
            ambient,
            index,
            basis,
            normal_forms,
        }
    }

    /// Coordinates of `f mod F` in the standard basis of `R_n`. `f` must be
    /// zero or homogeneous of degree `n`.
    pub fn coordinates(&self, f: &Poly, n: i64) -> Result<Vec<u32>> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(vec![0; self.graded_piece_dim(n)]);
        }
        let deg = f.homogeneous_degree()?;
        if deg as i64 != n {
            return Err(Error::Invalid(format!(
                "expected a form of degree {n}, found degree {deg}"
            )));
        }
        let piece = self.piece(deg)?;
        let field = self.inner.field;
        let mut out = vec![0u32; piece.dim()];
        for (m, c) in f.terms() {
            for &(j, v) in piece.normal_form(m) {
                let slot = &mut out[j as usize];
                *slot = field.add(*slot, field.mul(c, v));
            }
        }
        Ok(out)
    }

    /// Polynomial with the given coordinates in the standard basis of `R_n`.
    pub fn from_coordinates(&self, n: i64, coords: &[u32]) -> Result<Poly> {
        if n < 0 {
            if coords.iter().any(|c| *c != 0) {
                return Err(Error::Invalid("nonzero vector in a negative degree".into()));
            }
            return Ok(self.zero());
        }
        let piece = self.piece(n as u32)?;
        assert_eq!(coords.len(), piece.dim(), "coordinate length mismatch");
        Ok(Poly::from_terms(
            self.inner.field,
            self.nvars(),
            piece
                .basis()
                .iter()
                .zip(coords)
                .filter(|(_, c)| **c != 0)
                .map(|(m, c)| (m.clone(), *c)),
        ))
    }

    /// Normal form of a homogeneous polynomial modulo the relation.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(f.clone());
        }
        let n = f.homogeneous_degree()? as i64;
        let coords = self.coordinates(f, n)?;
        self.from_coordinates(n, &coords)
    }

    pub fn is_zero_in_ring(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Multiplication by the form `f` from `R_a` to `R_{a + deg f}`, columns
    /// indexed by the standard monomials of `R_a`.
    pub fn mult_matrix(&self, f: &Poly, source_degree: i64) -> Result<GradedMap> {
        self.check_poly(f)?;
        let e = f.homogeneous_degree()? as i64;
        let target = source_degree + e;
        let rows = self.graded_piece_dim(target);
        if source_degree < 0 {
            return Ok(GradedMap {
                source_degrees: vec![source_degree],
                target_degree: target,
                matrix: Matrix::zeros(self.inner.field, rows, 0),
            });
        }
        let src = self.piece(source_degree as u32)?;
        let tgt = self.piece(target as u32)?;
        let field = self.inner.field;
        let mut columns = Vec::with_capacity(src.dim());
        for s in src.basis() {
            let mut col = vec![0u32; tgt.dim()];
            for (t, c) in f.terms() {
                for &(j, v) in tgt.normal_form(&s.mul(t)) {
                    let slot = &mut col[j as usize];
                    *slot = field.add(*slot, field.mul(c, v));
                }
            }
            columns.push(col);
        }
        Ok(GradedMap {
            source_degrees: vec![source_degree],
            target_degree: target,
            matrix: Matrix::from_columns(field, rows, &columns),
        })
    }

    /// The map `(a_1..a_n) -> sum a_i g_i` from `⊕ R_{target - deg g_i}` to
    /// `R_target`.
    pub fn combination_map(&self, gens: &[Poly], target_degree: i64) -> Result<GradedMap> {
        let rows = self.graded_piece_dim(target_degree);
        let mut matrix = Matrix::zeros(self.inner.field, rows, 0);
        let mut source_degrees = Vec::with_capacity(gens.len());
        for g in gens {
            let d = g.homogeneous_degree()? as i64;
            let block = self.mult_matrix(g, target_degree - d)?;
            source_degrees.push(target_degree - d);
            matrix = matrix.hstack(&block.matrix);
        }
        Ok(GradedMap {
            source_degrees,
            target_degree,
            matrix,
        })
    }

    /// Splits a vector in `⊕ R_{a_i}` coordinates into polynomials.
    pub fn split_vector(&self, degrees: &[i64], v: &[u32]) -> Result<Vec<Poly>> {
        let mut out = Vec::with_capacity(degrees.len());
        let mut offset = 0;
        for &a in degrees {
            let len = self.graded_piece_dim(a);
            out.push(self.from_coordinates(a, &v[offset..offset + len])?);
            offset += len;
        }
        debug_assert_eq!(offset, v.len());
        Ok(out)
    }

    /// Inverse of [`split_vector`](Self::split_vector).
    pub fn join_vector(&self, degrees: &[i64], polys: &[Poly]) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for (&a, g) in degrees.iter().zip(polys) {
            out.extend(self.coordinates(g, a)?);
        }
        Ok(out)
    }
}

/// An exact `F_p` matrix for a map `⊕ R_{a_i} -> R_b` in monomial bases.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub source_degrees: Vec<i64>,
    pub target_degree: i64,
    pub matrix: Matrix,
}

impl GradedMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}
