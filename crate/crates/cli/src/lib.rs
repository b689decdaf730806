//! Command-line front end for the `forcing` crate: reads JSON case files,
//! runs one module per subcommand and writes JSON reports.

pub mod case;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use forcing::algebra::DEFAULT_PIECE_CAP;
use forcing::cohomology::{normalizing_number_h, PlaneCurve};
use forcing::frobenius::{
    frobenius_closure_test, hasse_invariant, tight_closure_witness, FrobeniusClosure,
    FrobeniusConfig, DEFAULT_E_MAX,
};
use forcing::geometry::intersection_report;
use forcing::membership::ideal_membership;
use forcing::syzygy::{
    find_primary_relation, minimal_generator_degrees, relation_dim, splitting_type_p1,
    CertifiedPrimaryRelation, DEFAULT_BUDGET,
};
use forcing::verdict::{classify, derive_seed, VerdictConfig};
use forcing::{ForcingData, GradedRing, Monomial, Poly, PrimeField};

use case::{parse_case_files, Case, CaseFile};
use report::*;

#[derive(Debug, Parser)]
#[command(name = "forcing", version, about = "Closure verdicts for homogeneous forcing data over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every case of a case file.
    Verdict(BatchArgs),
    /// Intersection numbers and ν/e bounds per case.
    Invariants(BatchArgs),
    /// Frobenius closure test and tight closure witness vectors per case.
    Frobenius(BatchArgs),
    /// Hasse invariants of a plane cubic for several primes.
    Hasse(HasseArgs),
    /// Relation-module dimensions and generator degrees.
    Syzygy(SyzygyArgs),
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// JSON case file: one ring object or an array of them.
    #[arg(long)]
    pub cases: PathBuf,
    /// Largest Frobenius exponent; overrides the per-case option.
    #[arg(long)]
    pub emax: Option<u32>,
    /// Random combinations tried in the relation search.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Root seed; per-case seeds derive from it unless a case sets one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of monomials in one graded piece.
    #[arg(long)]
    pub degree_cap: Option<usize>,
    /// Include every rule evaluation in verdict reports.
    #[arg(long)]
    pub audit: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HasseArgs {
    /// A ternary cubic form.
    #[arg(long)]
    pub relation: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "x,y,z")]
    pub variables: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SyzygyArgs {
    #[arg(long)]
    pub characteristic: u64,
    #[arg(long, value_delimiter = ',', default_value = "x,y,z")]
    pub variables: Vec<String>,
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub generators: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub k_min: i64,
    #[arg(long)]
    pub k_max: u32,
    /// Twist for the splitting type; defaults to the largest generator degree.
    #[arg(long)]
    pub twist: Option<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli.command)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>, code: i32, stderr: String) -> RunOutput {
    let text = to_json(value);
    match out {
        None => RunOutput { code, stdout: text, stderr },
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => RunOutput { code, stdout: String::new(), stderr },
            Err(e) => RunOutput {
                code: 2,
                stdout: String::new(),
                stderr: format!("{stderr}cannot write {}: {e}\n", path.display()),
            },
        },
    }
}

pub fn execute(command: &Command) -> RunOutput {
    match command {
        Command::Verdict(a) => batch(a, "verdict"),
        Command::Invariants(a) => batch(a, "invariants"),
        Command::Frobenius(a) => batch(a, "frobenius"),
        Command::Hasse(a) => hasse(a),
        Command::Syzygy(a) => syzygy(a),
    }
}

fn fatal(command: &'static str, message: String, out: &Option<PathBuf>) -> RunOutput {
    let report = FatalReport {
        command,
        error: ErrorReport { kind: ErrorKind::Malformed, message: message.clone() },
    };
    emit(&report, out, 2, format!("error: {message}\n"))
}

/// FNV-1a over the mathematical content of a case, so duplicated cases get
/// the same seed wherever they appear.
fn content_hash(file: &CaseFile, case: &Case) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |s: &str| {
        for b in s.bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&file.characteristic.to_string());
    file.variables.iter().for_each(|v| feed(v));
    feed(file.relation.as_deref().unwrap_or(""));
    case.generators.iter().for_each(|g| feed(g));
    feed(&case.candidate);
    h
}

struct Prepared {
    ring: GradedRing,
    data: ForcingData,
    config: VerdictConfig,
    deg_h: Option<i64>,
}

fn prepare(args: &BatchArgs, file: &CaseFile, case: &Case, seed: u64) -> forcing::Result<Prepared> {
    let cap = args.degree_cap.or(case.options.degree_cap).unwrap_or(DEFAULT_PIECE_CAP);
    let ring = file.ring()?.with_piece_cap(cap)?;
    let data = case.data(&ring)?;
    let test_element = case
        .options
        .test_element
        .as_deref()
        .map(|t| ring.parse(t))
        .transpose()?;
    let config = VerdictConfig {
        e_max: args.emax.or(case.options.e_max).unwrap_or(DEFAULT_E_MAX),
        budget: args.budget.or(case.options.budget).unwrap_or(DEFAULT_BUDGET),
        seed,
        test_element,
        max_degree: None,
        audit: args.audit,
    };
    let deg_h = file.deg_h(&ring);
    Ok(Prepared { ring, data, config, deg_h })
}

fn batch(args: &BatchArgs, command: &'static str) -> RunOutput {
    let text = match std::fs::read_to_string(&args.cases) {
        Ok(t) => t,
        Err(e) => return fatal(command, format!("cannot read {}: {e}", args.cases.display()), &args.out),
    };
    let files = match parse_case_files(&text) {
        Ok(f) => f,
        Err(e) => return fatal(command, format!("malformed case file {e}"), &args.out),
    };
    let mut reports = Vec::new();
    let mut stderr = String::new();
    for file in &files {
        for case in &file.cases {
            let index = reports.len();
            let seed = case
                .options
                .seed
                .unwrap_or_else(|| derive_seed(args.seed, content_hash(file, case)));
            let mut report = CaseReport {
                index,
                name: case.name.clone(),
                ring: RingReport {
                    characteristic: file.characteristic,
                    variables: file.variables.clone(),
                    relation: file.relation.clone(),
                },
                generators: case.generators.clone(),
                candidate: case.candidate.clone(),
                twist: case.twist,
                seed,
                verdict: None,
                invariants: None,
                frobenius: None,
                error: None,
            };
            let result = prepare(args, file, case, seed).and_then(|p| {
                report.ring.relation = p.ring.relation().map(|r| p.ring.format(r));
                report.generators = polys(&p.ring, p.data.generators());
                report.candidate = p.ring.format(p.data.candidate());
                report.twist = Some(p.data.twist());
                run_case(command, &p, &mut report)
            });
            if let Err(e) = result {
                let label = case.name.clone().unwrap_or_else(|| format!("#{index}"));
                stderr.push_str(&format!("case {label}: {e}\n"));
                report.error = Some(ErrorReport::from_error(&e));
            }
            reports.push(report);
        }
    }
    let summary = Summary::new(&reports);
    let code = summary.exit_code();
    let report = BatchReport { command, cases: reports, summary };
    emit(&report, &args.out, code, stderr)
}

fn run_case(command: &str, p: &Prepared, report: &mut CaseReport) -> forcing::Result<()> {
    match command {
        "verdict" => {
            let v = classify(&p.data, &p.config)?;
            report.verdict = Some(VerdictReport::new(&p.ring, &v, p.config.audit));
        }
        "invariants" => report.invariants = Some(invariants(p)?),
        "frobenius" => {
            let cfg = FrobeniusConfig {
                test_element: p.config.test_element.clone(),
                e_max: p.config.e_max,
                ..FrobeniusConfig::default()
            };
            let closure = match frobenius_closure_test(&p.data, &cfg)? {
                FrobeniusClosure::In { witness_q, certificate } => ClosureReport {
                    status: "in",
                    witness_q: Some(witness_q),
                    max_q: witness_q,
                    cofactors: Some(cofactors(&p.ring, &certificate)),
                },
                FrobeniusClosure::Unknown { max_q } => ClosureReport {
                    status: "unknown",
                    witness_q: None,
                    max_q,
                    cofactors: None,
                },
            };
            let w = tight_closure_witness(&p.data, &cfg)?;
            report.frobenius = Some(FrobeniusReport {
                frobenius_closure: closure,
                tight_closure_witness: witness(&p.ring, &w),
            });
        }
        _ => unreachable!("unknown batch command"),
    }
    Ok(())
}

/// For two generators: a primary relation of `(f_1, f_2, f_0)` with the
/// smallest `a = max(k - d_0, d_1 + d_2 - k)` that the search finds.
fn best_relation(p: &Prepared) -> forcing::Result<Option<CertifiedPrimaryRelation>> {
    let data = &p.data;
    if data.len() != 2 {
        return Ok(None);
    }
    let triple = vec![
        data.generators()[0].clone(),
        data.generators()[1].clone(),
        data.candidate().clone(),
    ];
    if triple[2].is_zero() || !forcing::syzygy::pairwise_primary(&p.ring, &triple)? {
        return Ok(None);
    }
    let (d1, d2, d0) = (
        data.degrees()[0] as i64,
        data.degrees()[1] as i64,
        data.candidate_degree() as i64,
    );
    let lo = d0.max(d1).max(d2);
    let hi = d0 + d1 + d2;
    let mut ks: Vec<i64> = (lo..=hi).collect();
    ks.sort_by_key(|&k| ((k - d0).max(d1 + d2 - k), k));
    for k in ks {
        let search = find_primary_relation(&p.ring, &triple, k as u32, p.config.budget, p.config.seed)?;
        if let Some(rel) = search.found() {
            return Ok(Some(rel.clone()));
        }
    }
    Ok(None)
}

fn invariants(p: &Prepared) -> forcing::Result<InvariantsReport> {
    let deg_h = p.deg_h.ok_or_else(|| {
        forcing::Error::Invalid("deg_h is required for rings without a relation".into())
    })?;
    let relation = best_relation(p)?;
    let r = intersection_report(&p.data, deg_h, relation.as_ref())?;
    let curve = if p.data.len() == 2 && p.ring.nvars() == 3 && p.ring.relation().is_some() {
        PlaneCurve::new(p.ring.clone()).ok()
    } else {
        None
    };
    let nu_sections = match &curve {
        Some(c) => {
            let nb = normalizing_number_h(c, &p.data, relation.as_ref())?;
            Some(IntervalReport { low: nb.nu_low, high: nb.nu_high })
        }
        None => None,
    };
    let rel = relation.map(|rel| RelationReport {
        total_degree: rel.total_degree(),
        components: polys(&p.ring, &rel.relation().components),
    });
    Ok(InvariantsReport::new(&r, rel, nu_sections))
}

fn hasse(a: &HasseArgs) -> RunOutput {
    let mut rows = Vec::new();
    let mut stderr = String::new();
    let mut code = 0;
    for &p in &a.primes {
        let row = (|| -> forcing::Result<HasseRow> {
            let field = PrimeField::new(p)?;
            let f = forcing::algebra::parse::parse_poly(&a.relation, field, &a.variables)?;
            let h = hasse_invariant(&f)?;
            // Independent route: membership of F^{p-1} in the bracket power of
            // the maximal ideal of the polynomial ring.
            let ring = GradedRing::polynomial(field, a.variables.clone())?;
            let pw = p as u32;
            let bracket: Vec<Poly> = (0..3)
                .map(|i| Poly::term(field, 1, Monomial::var(3, i).pow(pw)))
                .collect();
            let member = ideal_membership(&ring, &bracket, &f.pow(pw - 1), 3 * (pw - 1))?.is_some();
            Ok(HasseRow {
                p,
                hasse: Some(h),
                supersingular: Some(h == 0),
                bracket_power_member: Some(member),
                error: None,
            })
        })();
        rows.push(row.unwrap_or_else(|e| {
            code = 2;
            stderr.push_str(&format!("p = {p}: {e}\n"));
            HasseRow {
                p,
                hasse: None,
                supersingular: None,
                bracket_power_member: None,
                error: Some(ErrorReport::from_error(&e)),
            }
        }));
    }
    let report = HasseReport { command: "hasse", relation: a.relation.clone(), rows };
    emit(&report, &a.out, code, stderr)
}

fn syzygy(a: &SyzygyArgs) -> RunOutput {
    let result = (|| -> forcing::Result<SyzygyReport> {
        let field = PrimeField::new(a.characteristic)?;
        let ring = match &a.relation {
            None => GradedRing::polynomial(field, a.variables.clone())?,
            Some(t) => {
                let rel = forcing::algebra::parse::parse_poly(t, field, &a.variables)?;
                GradedRing::hypersurface(field, a.variables.clone(), rel)?
            }
        };
        let gens = a
            .generators
            .iter()
            .map(|g| {
                let p = ring.parse(g)?;
                p.homogeneous_degree()?;
                Ok(p)
            })
            .collect::<forcing::Result<Vec<Poly>>>()?;
        let dimensions = (a.k_min..=a.k_max as i64)
            .map(|k| Ok(DimensionRow { k, dim: relation_dim(&ring, &gens, k)? }))
            .collect::<forcing::Result<Vec<_>>>()?;
        let g = minimal_generator_degrees(&ring, &gens, a.k_max)?;
        let max_d = gens.iter().filter_map(|g| g.homogeneous_degree().ok()).max().unwrap_or(0);
        let splitting_type = if ring.nvars() == 2 && ring.relation().is_none() {
            let m = a.twist.unwrap_or(max_d as i64);
            let degrees: Vec<u32> = gens.iter().map(|g| g.homogeneous_degree()).collect::<forcing::Result<_>>()?;
            splitting_type_p1(&ring, &gens, m).ok().map(|st| SplittingReport {
                twist: m,
                bundle_degrees: st.bundle_degrees(),
                determinant_holds: st.determinant_holds(&degrees),
                degrees: st.degrees,
            })
        } else {
            None
        };
        Ok(SyzygyReport {
            command: "syzygy",
            ring: RingReport {
                characteristic: a.characteristic,
                variables: a.variables.clone(),
                relation: ring.relation().map(|r| ring.format(r)),
            },
            generators: polys(&ring, &gens),
            dimensions,
            generator_degrees: GeneratorDegreesReport {
                window: [g.window.0, g.window.1],
                counts: g.counts,
            },
            splitting_type,
        })
    })();
    match result {
        Ok(r) => emit(&r, &a.out, 0, String::new()),
        Err(e) => {
            let report = FatalReport { command: "syzygy", error: ErrorReport::from_error(&e) };
            let code = match ErrorKind::of(&e) {
                ErrorKind::Malformed => 2,
                ErrorKind::ResourceCap => 3,
            };
            emit(&report, &a.out, code, format!("error: {e}\n"))
        }
    }
}
