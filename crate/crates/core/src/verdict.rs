//! Closure classification: numerical and computational criteria tried in a
//! fixed priority order, each firing rule backed by checkable evidence.

use std::fmt;

use crate::algebra::{ForcingData, Poly};
use crate::cohomology::PlaneCurve;
use crate::error::{Error, Result};
use crate::frobenius::{
    frobenius_action_h1, frobenius_closure_test, tight_closure_witness, FrobeniusClosure,
    FrobeniusConfig, TightClosureWitness, DEFAULT_E_MAX,
};
use crate::membership::{in_ideal, is_primary, CofactorCertificate};
use crate::syzygy::{find_primary_relation, pairwise_primary, RelationSearch, RelationVector, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    InIdeal,
    InFrobeniusClosure,
    InPlusClosure,
    InTightClosure,
    NotInSolidClosure,
    RefutedUnderTestElement,
    Unknown,
}

impl Status {
    pub const ALL: [Status; 7] = [
        Status::InIdeal,
        Status::InFrobeniusClosure,
        Status::InPlusClosure,
        Status::InTightClosure,
        Status::NotInSolidClosure,
        Status::RefutedUnderTestElement,
        Status::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Status::InIdeal => "InIdeal",
            Status::InFrobeniusClosure => "InFrobeniusClosure",
            Status::InPlusClosure => "InPlusClosure",
            Status::InTightClosure => "InTightClosure",
            Status::NotInSolidClosure => "NotInSolidClosure",
            Status::RefutedUnderTestElement => "RefutedUnderTestElement",
            Status::Unknown => "Unknown",
        }
    }

    /// Statuses asserting membership in some closure.
    pub fn is_membership(self) -> bool {
        matches!(
            self,
            Status::InIdeal | Status::InFrobeniusClosure | Status::InPlusClosure | Status::InTightClosure
        )
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl Rule {
    /// Evaluation order. The Frobenius witness rule precedes the degree bound
    /// for parameters because it certifies the stronger closure.
    pub const ORDER: [Rule; 8] = [
        Rule::R1,
        Rule::R2,
        Rule::R4,
        Rule::R3,
        Rule::R5,
        Rule::R6,
        Rule::R7,
        Rule::R8,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
        }
    }

    /// The criterion the rule applies.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::R1 => "ideal membership: the forcing sequence splits",
            Rule::R2 => "low degree: d0 <= min d_i forces solid closure membership back into the ideal",
            Rule::R3 => "parameter degree bound: R_{>= d1+d2} lies in the tight closure of two parameters",
            Rule::R4 => "negative leading number: H^1(O_Y(-q l)) vanishes, certified by f0^q in I^[q]",
            Rule::R5 => "parameter exclusion below d1+d2 for p = 0 and p >> 0, checked against a test element",
            Rule::R6 => "primary relation of total degree k: R_{>= max(k, sum d - k)} lies in the graded plus closure",
            Rule::R7 => "balanced primary relation at m = sum d / 2: R_{>= m} lies in the tight closure",
            Rule::R8 => "no criterion applies",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    None,
    Cofactors(CofactorCertificate),
    FrobeniusWitness {
        q: u32,
        certificate: CofactorCertificate,
    },
    /// Degree comparison that triggered a numerical rule.
    Degrees {
        candidate: u32,
        bound: u32,
    },
    Relation {
        relation: RelationVector,
        p_rank: Option<usize>,
    },
    Witness(TightClosureWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleEvaluation {
    pub rule: Rule,
    pub fired: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    pub evidence: Evidence,
    pub caveats: Vec<String>,
    pub audit: Vec<RuleEvaluation>,
    pub seed: u64,
}

impl Verdict {
    pub fn citation(&self) -> &'static str {
        self.rule.citation()
    }
}

#[derive(Debug, Clone)]
pub struct VerdictConfig {
    pub e_max: u32,
    pub budget: usize,
    pub seed: u64,
    pub test_element: Option<Poly>,
    pub max_degree: Option<u32>,
    /// Evaluate every rule, not only up to the first that fires.
    pub audit: bool,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            e_max: DEFAULT_E_MAX,
            budget: DEFAULT_BUDGET,
            seed: 0,
            test_element: None,
            max_degree: None,
            audit: false,
        }
    }
}

impl VerdictConfig {
    fn frobenius(&self) -> FrobeniusConfig {
        FrobeniusConfig {
            test_element: self.test_element.clone(),
            e_max: self.e_max,
            max_degree: self.max_degree,
            cancel: None,
        }
    }
}

struct Outcome {
    status: Status,
    evidence: Evidence,
    caveats: Vec<String>,
}

struct Context<'a> {
    data: &'a ForcingData,
    config: &'a VerdictConfig,
    curve: Option<PlaneCurve>,
    in_ideal: Option<CofactorCertificate>,
    witness: Option<TightClosureWitness>,
}

impl Context<'_> {
    fn witness(&mut self) -> Result<TightClosureWitness> {
        if self.witness.is_none() {
            self.witness = Some(tight_closure_witness(self.data, &self.config.frobenius())?);
        }
        Ok(self.witness.clone().expect("just computed"))
    }

    fn normality_caveat(&self) -> String {
        if self.curve.is_some() {
            "normality of R inferred from smoothness of Proj R".to_string()
        } else {
            "normality of R assumed, not verified".to_string()
        }
    }

    fn test_element_caveat(&self, w: &TightClosureWitness) -> String {
        format!(
            "test-element assumption: c = {}",
            self.data.ring().format(&w.test_element)
        )
    }

    fn degrees(&self) -> (Vec<u32>, u32, u32) {
        let ds = self.data.degrees().to_vec();
        let sum = ds.iter().sum();
        (ds, sum, self.data.candidate_degree())
    }

    /// `Ok(None)` means the rule does not fire; the note says why.
    fn evaluate(&mut self, rule: Rule) -> Result<(Option<Outcome>, String)> {
        let n = self.data.len();
        let (ds, sum, d0) = self.degrees();
        let not_member = self.in_ideal.is_none();
        match rule {
            Rule::R1 => Ok(match &self.in_ideal {
                Some(cert) => (
                    Some(Outcome {
                        status: Status::InIdeal,
                        evidence: Evidence::Cofactors(cert.clone()),
                        caveats: Vec::new(),
                    }),
                    "f0 is a combination of the generators".into(),
                ),
                None => (None, "f0 is not in the ideal".into()),
            }),
            Rule::R2 => {
                let min = ds.iter().copied().min().unwrap_or(0);
                if self.curve.is_none() {
                    return Ok((None, "ring is not the cone over a smooth plane curve".into()));
                }
                if d0 > min || !not_member {
                    return Ok((None, format!("d0 = {d0} > min d_i = {min} or f0 in the ideal")));
                }
                Ok((
                    Some(Outcome {
                        status: Status::NotInSolidClosure,
                        evidence: Evidence::Degrees { candidate: d0, bound: min },
                        caveats: Vec::new(),
                    }),
                    format!("d0 = {d0} <= min d_i = {min}"),
                ))
            }
            Rule::R4 => {
                if n != 2 {
                    return Ok((None, "needs two parameters".into()));
                }
                let ell = self.data.leadno();
                if ell >= 0 {
                    return Ok((None, format!("l = {ell} is not negative")));
                }
                match frobenius_closure_test(self.data, &self.config.frobenius())? {
                    FrobeniusClosure::In { witness_q, certificate } => Ok((
                        Some(Outcome {
                            status: Status::InFrobeniusClosure,
                            evidence: Evidence::FrobeniusWitness { q: witness_q, certificate },
                            caveats: Vec::new(),
                        }),
                        format!("l = {ell}, witness q = {witness_q}"),
                    )),
                    FrobeniusClosure::Unknown { max_q } => {
                        Ok((None, format!("l = {ell} but no witness up to q = {max_q}")))
                    }
                }
            }
            Rule::R3 => {
                if n != 2 {
                    return Ok((None, "needs two parameters".into()));
                }
                if d0 < sum {
                    return Ok((None, format!("d0 = {d0} < d1 + d2 = {sum}")));
                }
                Ok((
                    Some(Outcome {
                        status: Status::InTightClosure,
                        evidence: Evidence::Degrees { candidate: d0, bound: sum },
                        caveats: vec![self.normality_caveat()],
                    }),
                    format!("d0 = {d0} >= d1 + d2 = {sum}"),
                ))
            }
            Rule::R5 => {
                if n != 2 {
                    return Ok((None, "needs two parameters".into()));
                }
                if d0 >= sum || !not_member {
                    return Ok((None, format!("d0 = {d0} >= d1 + d2 = {sum} or f0 in the ideal")));
                }
                let w = self.witness()?;
                if !w.refutes_under_test_element() {
                    return Ok((None, format!("c f0^q in I^[q] for all q in {:?}", w.qs)));
                }
                let caveats = vec![
                    "valid for p = 0 and for p >> 0".to_string(),
                    self.test_element_caveat(&w),
                    self.normality_caveat(),
                ];
                Ok((
                    Some(Outcome {
                        status: Status::RefutedUnderTestElement,
                        evidence: Evidence::Witness(w.clone()),
                        caveats,
                    }),
                    format!("witness vector {:?}", w.vector),
                ))
            }
            Rule::R6 => self.plus_closure_rule(&ds, sum, d0),
            Rule::R7 => self.balanced_rule(sum, d0),
            Rule::R8 => {
                let w = self.witness()?;
                let mut caveats = vec![self.test_element_caveat(&w)];
                if w.supports_membership() {
                    caveats.push("witness vector supports membership".into());
                } else {
                    caveats.push("witness vector refutes membership under the test element".into());
                }
                Ok((
                    Some(Outcome {
                        status: Status::Unknown,
                        evidence: Evidence::Witness(w),
                        caveats,
                    }),
                    "fallback".into(),
                ))
            }
        }
    }

    fn three_generator_gate(&self) -> Result<Option<String>> {
        if self.data.len() != 3 {
            return Ok(Some("needs three generators".into()));
        }
        if !pairwise_primary(self.data.ring(), self.data.generators())? {
            return Ok(Some("generators are not pairwise primary".into()));
        }
        Ok(None)
    }

    fn plus_closure_rule(&mut self, _ds: &[u32], sum: u32, d0: u32) -> Result<(Option<Outcome>, String)> {
        if let Some(note) = self.three_generator_gate()? {
            return Ok((None, note));
        }
        let Some(curve) = &self.curve else {
            return Ok((None, "ring is not the cone over a smooth plane curve".into()));
        };
        if sum > 2 * d0 {
            return Ok((None, format!("no k with max(k, {sum} - k) <= d0 = {d0}")));
        }
        let action = frobenius_action_h1(curve.ring())?;
        if action.needs_extension {
            return Ok((
                None,
                format!(
                    "p-rank {} but Frobenius-fixed space of dimension {} over F_p: the Artin-Schreier step needs an extension",
                    action.p_rank, action.fixed_dim
                ),
            ));
        }
        let ring = self.data.ring();
        let mut notes = Vec::new();
        for k in (sum - d0)..=d0 {
            let search = find_primary_relation(
                ring,
                self.data.generators(),
                k,
                self.config.budget,
                self.config.seed,
            )?;
            match search {
                RelationSearch::Found { relation, .. } => {
                    return Ok((
                        Some(Outcome {
                            status: Status::InPlusClosure,
                            evidence: Evidence::Relation {
                                relation: relation.into_inner(),
                                p_rank: Some(action.p_rank),
                            },
                            caveats: Vec::new(),
                        }),
                        format!("primary relation of total degree {k}, p-rank {}", action.p_rank),
                    ))
                }
                RelationSearch::NoRelationSpace => notes.push(format!("k = {k}: no relations")),
                RelationSearch::Exhausted { tried, dim } => {
                    notes.push(format!("k = {k}: {tried} candidates in dimension {dim} not primary"))
                }
            }
        }
        Ok((None, notes.join("; ")))
    }

    fn balanced_rule(&mut self, sum: u32, d0: u32) -> Result<(Option<Outcome>, String)> {
        if let Some(note) = self.three_generator_gate()? {
            return Ok((None, note));
        }
        if !sum.is_multiple_of(2) {
            return Ok((None, format!("sum d = {sum} is odd")));
        }
        let m = sum / 2;
        if d0 < m {
            return Ok((None, format!("d0 = {d0} < m = {m}")));
        }
        let search = find_primary_relation(
            self.data.ring(),
            self.data.generators(),
            m,
            self.config.budget,
            self.config.seed,
        )?;
        match search {
            RelationSearch::Found { relation, .. } => Ok((
                Some(Outcome {
                    status: Status::InTightClosure,
                    evidence: Evidence::Relation {
                        relation: relation.into_inner(),
                        p_rank: None,
                    },
                    caveats: vec![self.normality_caveat()],
                }),
                format!("primary relation of total degree m = {m}"),
            )),
            RelationSearch::NoRelationSpace => Ok((None, format!("no relations at m = {m}"))),
            RelationSearch::Exhausted { tried, dim } => Ok((
                None,
                format!("m = {m}: {tried} candidates in dimension {dim} not primary"),
            )),
        }
    }
}

/// Classifies `f_0` against `(f_1, ..., f_n)`. The generators must be
/// primary.
pub fn classify(data: &ForcingData, config: &VerdictConfig) -> Result<Verdict> {
    let ring = data.ring();
    if !is_primary(ring, data.generators(), None)?.primary {
        return Err(Error::NotPrimary);
    }
    let curve = if ring.nvars() == 3 && ring.relation().is_some() {
        PlaneCurve::new(ring.clone()).ok()
    } else {
        None
    };
    let mut ctx = Context {
        data,
        config,
        curve,
        in_ideal: in_ideal(data)?,
        witness: None,
    };
    let mut audit = Vec::new();
    let mut winner: Option<(Rule, Outcome)> = None;
    for rule in Rule::ORDER {
        if winner.is_some() && !config.audit {
            break;
        }
        let (outcome, note) = ctx.evaluate(rule)?;
        audit.push(RuleEvaluation {
            rule,
            fired: outcome.is_some(),
            note,
        });
        if winner.is_none() {
            winner = outcome.map(|o| (rule, o));
        }
    }
    let (rule, outcome) = winner.expect("the fallback rule always fires");
    if config.audit {
        check_consistency(rule, outcome.status, &audit)?;
    }
    Ok(Verdict {
        status: outcome.status,
        rule,
        evidence: outcome.evidence,
        caveats: outcome.caveats,
        audit,
        seed: config.seed,
    })
}

/// An exclusion must never coexist with a membership rule firing.
fn check_consistency(rule: Rule, status: Status, audit: &[RuleEvaluation]) -> Result<()> {
    let membership_rules = [Rule::R1, Rule::R3, Rule::R4, Rule::R6, Rule::R7];
    let exclusion_rules = [Rule::R2, Rule::R5];
    let fired = |set: &[Rule]| audit.iter().any(|e| e.fired && set.contains(&e.rule));
    if fired(&membership_rules) && fired(&exclusion_rules) {
        return Err(Error::Invalid(format!(
            "rules disagree: {} fired with {status} alongside a contradicting rule",
            rule.id()
        )));
    }
    Ok(())
}

/// Seed for case `index` of a batch rooted at `root` (SplitMix64 step).
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedRing;

    fn verdict(p: u64, rel: Option<&str>, nvars: usize, gens: &[&str], f0: &str) -> Verdict {
        let r = GradedRing::from_text(p, nvars, rel).unwrap();
        let d = ForcingData::from_text(&r, gens, f0, None).unwrap();
        let cfg = VerdictConfig {
            audit: true,
            ..VerdictConfig::default()
        };
        classify(&d, &cfg).unwrap()
    }

    #[test]
    fn parameter_cases_on_the_cubic() {
        let v = verdict(7, Some("x^3+y^3+z^3"), 3, &["x", "y"], "z^2");
        assert_eq!((v.status, v.rule), (Status::InTightClosure, Rule::R3));
        let v = verdict(7, Some("x^3+y^3+z^3"), 3, &["x", "y"], "z");
        assert_eq!((v.status, v.rule), (Status::NotInSolidClosure, Rule::R2));
        let v = verdict(7, Some("x^3+y^3+z^3"), 3, &["x", "y"], "x");
        assert_eq!((v.status, v.rule), (Status::InIdeal, Rule::R1));
    }

    #[test]
    fn fermat_squares() {
        let v = verdict(7, Some("x^3+y^3+z^3"), 3, &["x^2", "y^2", "z^2"], "x*y*z");
        assert_eq!((v.status, v.rule), (Status::InTightClosure, Rule::R7));
        let r6 = v.audit.iter().find(|e| e.rule == Rule::R6).unwrap();
        assert!(!r6.fired, "{}", r6.note);
    }

    #[test]
    fn regular_ring_refutation() {
        let v = verdict(3, None, 2, &["x^2", "y^2"], "x*y");
        assert_eq!((v.status, v.rule), (Status::RefutedUnderTestElement, Rule::R5));
        assert!(v.caveats.iter().any(|c| c.contains("p >> 0")));
    }

    #[test]
    fn non_primary_rejected() {
        let r = GradedRing::from_text(7, 3, Some("x^3+y^3+z^3")).unwrap();
        let d = ForcingData::from_text(&r, &["x", "x^2"], "y", None).unwrap();
        assert_eq!(classify(&d, &VerdictConfig::default()).unwrap_err(), Error::NotPrimary);
    }

    #[test]
    fn seeds_differ_per_case() {
        assert_ne!(derive_seed(0, 0), derive_seed(0, 1));
        assert_eq!(derive_seed(5, 3), derive_seed(5, 3));
    }
}
