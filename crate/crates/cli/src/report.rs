//! Serialized report shapes. Field order is fixed by the struct definitions,
//! so equal inputs give byte-identical output.

use std::collections::BTreeMap;

use serde::Serialize;

use forcing::geometry::{IntersectionReport, Interval};
use forcing::membership::CofactorCertificate;
use forcing::verdict::{Evidence, Status, Verdict};
use forcing::GradedRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Malformed,
    ResourceCap,
}

impl ErrorKind {
    pub fn of(e: &forcing::Error) -> Self {
        match e {
            forcing::Error::ResourceCap { .. }
            | forcing::Error::DegreeCap { .. }
            | forcing::Error::Cancelled => ErrorKind::ResourceCap,
            _ => ErrorKind::Malformed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub kind: ErrorKind,
    pub message: String,
}

impl ErrorReport {
    pub fn from_error(e: &forcing::Error) -> Self {
        Self {
            kind: ErrorKind::of(e),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub characteristic: u64,
    pub variables: Vec<String>,
    pub relation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceReport {
    None,
    Cofactors {
        cofactors: Vec<String>,
    },
    FrobeniusWitness {
        q: u32,
        cofactors: Vec<String>,
    },
    Degrees {
        candidate: u32,
        bound: u32,
    },
    Relation {
        total_degree: u32,
        components: Vec<String>,
        p_rank: Option<usize>,
    },
    Witness(WitnessReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub test_element: String,
    pub qs: Vec<u32>,
    pub vector: Vec<bool>,
    pub certificates: Vec<Option<Vec<String>>>,
}

pub fn polys(ring: &GradedRing, ps: &[forcing::Poly]) -> Vec<String> {
    ps.iter().map(|p| ring.format(p)).collect()
}

pub fn cofactors(ring: &GradedRing, c: &CofactorCertificate) -> Vec<String> {
    polys(ring, &c.cofactors)
}

pub fn witness(ring: &GradedRing, w: &forcing::frobenius::TightClosureWitness) -> WitnessReport {
    WitnessReport {
        test_element: ring.format(&w.test_element),
        qs: w.qs.clone(),
        vector: w.vector.clone(),
        certificates: w
            .certificates
            .iter()
            .map(|c| c.as_ref().map(|c| cofactors(ring, c)))
            .collect(),
    }
}

impl EvidenceReport {
    pub fn new(ring: &GradedRing, e: &Evidence) -> Self {
        match e {
            Evidence::None => EvidenceReport::None,
            Evidence::Cofactors(c) => EvidenceReport::Cofactors {
                cofactors: cofactors(ring, c),
            },
            Evidence::FrobeniusWitness { q, certificate } => EvidenceReport::FrobeniusWitness {
                q: *q,
                cofactors: cofactors(ring, certificate),
            },
            Evidence::Degrees { candidate, bound } => EvidenceReport::Degrees {
                candidate: *candidate,
                bound: *bound,
            },
            Evidence::Relation { relation, p_rank } => EvidenceReport::Relation {
                total_degree: relation.total_degree,
                components: polys(ring, &relation.components),
                p_rank: *p_rank,
            },
            Evidence::Witness(w) => EvidenceReport::Witness(witness(ring, w)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub rule: &'static str,
    pub fired: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub status: &'static str,
    pub rule: &'static str,
    pub citation: &'static str,
    pub evidence: EvidenceReport,
    pub caveats: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditEntry>>,
}

impl VerdictReport {
    pub fn new(ring: &GradedRing, v: &Verdict, audit: bool) -> Self {
        Self {
            status: v.status.name(),
            rule: v.rule.id(),
            citation: v.citation(),
            evidence: EvidenceReport::new(ring, &v.evidence),
            caveats: v.caveats.clone(),
            audit: audit.then(|| {
                v.audit
                    .iter()
                    .map(|e| AuditEntry {
                        rule: e.rule.id(),
                        fired: e.fired,
                        note: e.note.clone(),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub low: i64,
    pub high: i64,
}

impl From<Interval> for IntervalReport {
    fn from(i: Interval) -> Self {
        Self {
            low: i.low,
            high: i.high,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub total_degree: u32,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsReport {
    pub m: i64,
    pub e_list: Vec<i64>,
    pub e0: i64,
    pub ell: i64,
    pub deg_h: i64,
    pub z_top: i64,
    pub chern: Vec<i64>,
    pub nu: Option<IntervalReport>,
    pub e: Option<IntervalReport>,
    pub relation: Option<RelationReport>,
    /// Bounds from sections of the forcing sheaf, smooth plane curves only.
    pub nu_sections: Option<IntervalReport>,
}

impl InvariantsReport {
    pub fn new(
        r: &IntersectionReport,
        relation: Option<RelationReport>,
        nu_sections: Option<IntervalReport>,
    ) -> Self {
        Self {
            m: r.m,
            e_list: r.e_list.clone(),
            e0: r.e0,
            ell: r.ell,
            deg_h: r.deg_h,
            z_top: r.z_top,
            chern: r.chern.clone(),
            nu: r.bounds.map(|b| b.nu.into()),
            e: r.bounds.map(|b| b.e.into()),
            relation,
            nu_sections,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    /// `"in"` or `"unknown"`.
    pub status: &'static str,
    pub witness_q: Option<u32>,
    pub max_q: u32,
    pub cofactors: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusReport {
    pub frobenius_closure: ClosureReport,
    pub tight_closure_witness: WitnessReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub index: usize,
    pub name: Option<String>,
    pub ring: RingReport,
    pub generators: Vec<String>,
    pub candidate: String,
    pub twist: Option<i64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<FrobeniusReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub statuses: BTreeMap<&'static str, usize>,
    pub malformed: usize,
    pub resource_cap: usize,
}

impl Summary {
    pub fn new(cases: &[CaseReport]) -> Self {
        let mut statuses: BTreeMap<&'static str, usize> =
            Status::ALL.iter().map(|s| (s.name(), 0)).collect();
        let (mut malformed, mut resource_cap) = (0, 0);
        for c in cases {
            if let Some(v) = &c.verdict {
                *statuses.entry(v.status).or_default() += 1;
            }
            match c.error.as_ref().map(|e| e.kind) {
                Some(ErrorKind::Malformed) => malformed += 1,
                Some(ErrorKind::ResourceCap) => resource_cap += 1,
                None => {}
            }
        }
        Self {
            cases: cases.len(),
            statuses,
            malformed,
            resource_cap,
        }
    }

    /// 0 clean, 2 when any case is malformed, else 3 when any hit a cap.
    pub fn exit_code(&self) -> i32 {
        if self.malformed > 0 {
            2
        } else if self.resource_cap > 0 {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub command: &'static str,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct HasseRow {
    pub p: u64,
    pub hasse: Option<u32>,
    pub supersingular: Option<bool>,
    /// `F^{p-1} ∈ (x^p, y^p, z^p)`, computed separately.
    pub bracket_power_member: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HasseReport {
    pub command: &'static str,
    pub relation: String,
    pub rows: Vec<HasseRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionRow {
    pub k: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorDegreesReport {
    pub window: [u32; 2],
    pub counts: BTreeMap<u32, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingReport {
    pub twist: i64,
    pub degrees: Vec<u32>,
    pub bundle_degrees: Vec<i64>,
    pub determinant_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SyzygyReport {
    pub command: &'static str,
    pub ring: RingReport,
    pub generators: Vec<String>,
    pub dimensions: Vec<DimensionRow>,
    pub generator_degrees: GeneratorDegreesReport,
    pub splitting_type: Option<SplittingReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FatalReport {
    pub command: &'static str,
    pub error: ErrorReport,
}
