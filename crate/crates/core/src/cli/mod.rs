//! Batch front end: load spec files, run the analysis pipeline and render
//! reports as JSON or as a fixed-layout text summary.

pub mod input;
mod text;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::fourier::{injectivity_check, spherical_transform, FourierTable};
use crate::function::{weight_checks, WeightFlags};
use crate::group::{double_cosets, Element, DEFAULT_ELEMENT_CAP};
use crate::hecke::{check_rap_condition, gelfand_report, GelfandReport, HeckeAlgebra, RapCondition, WeightedPair};
use crate::multiplier::{extract_symbol, is_multiplier, verify_commutation, SymbolOptions};
use crate::spherical::{enumerate_spherical, EnumerationOptions, SphericalSet};
use crate::{Verdict, DEFAULT_SEED, DEFAULT_TOLERANCE};

use input::{load_json, AutomorphismSpec, GroupSpec, MultiplierSpec, SubgroupSpec, WeightSpec};

pub use text::render_text;

pub const TOOL_NAME: &str = "wgelfand";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Analyze,
    Spherical,
    Fourier,
    MultiplierCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Spherical => "spherical",
            Command::Fourier => "fourier",
            Command::MultiplierCheck => "multiplier-check",
        }
    }
}

/// Parsed inputs for one run. Absent subgroup means `{e}`; absent weight
/// means `ω ≡ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub command: Command,
    pub group: GroupSpec,
    pub subgroup: Option<SubgroupSpec>,
    pub weight: Option<WeightSpec>,
    pub automorphism: Option<AutomorphismSpec>,
    pub multipliers: Vec<MultiplierSpec>,
    pub tolerance: f64,
    pub seed: u64,
    pub max_order: usize,
    pub timings: bool,
    /// SHA-256 of each input file, keyed by role.
    pub digests: BTreeMap<String, String>,
}

impl AnalysisRequest {
    pub fn new(command: Command, group: GroupSpec) -> Self {
        AnalysisRequest {
            command,
            group,
            subgroup: None,
            weight: None,
            automorphism: None,
            multipliers: Vec::new(),
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            max_order: DEFAULT_ELEMENT_CAP,
            timings: false,
            digests: BTreeMap::new(),
        }
    }
}

/// Input file paths, as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct InputPaths {
    pub group: PathBuf,
    pub subgroup: Option<PathBuf>,
    pub weight: Option<PathBuf>,
    pub automorphism: Option<PathBuf>,
    pub multipliers: Vec<PathBuf>,
}

impl AnalysisRequest {
    /// Loads every referenced file and records its digest.
    pub fn load(command: Command, paths: &InputPaths) -> Result<Self> {
        let mut digests = BTreeMap::new();
        let (group, d) = load_json::<GroupSpec>(&paths.group)?;
        digests.insert("group".to_string(), d);
        let mut request = AnalysisRequest::new(command, group);
        request.subgroup = load_optional(&paths.subgroup, "subgroup", &mut digests)?;
        request.weight = load_optional(&paths.weight, "weight", &mut digests)?;
        request.automorphism = load_optional(&paths.automorphism, "automorphism", &mut digests)?;
        for (i, p) in paths.multipliers.iter().enumerate() {
            let (m, d) = load_json::<MultiplierSpec>(p)?;
            digests.insert(format!("multiplier.{i}"), d);
            request.multipliers.push(m);
        }
        request.digests = digests;
        Ok(request)
    }
}

fn load_optional<T: serde::de::DeserializeOwned>(
    path: &Option<PathBuf>,
    role: &str,
    digests: &mut BTreeMap<String, String>,
) -> Result<Option<T>> {
    let Some(p) = path else { return Ok(None) };
    let (value, d) = load_json::<T>(p)?;
    digests.insert(role.to_string(), d);
    Ok(Some(value))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupSummary {
    pub order: usize,
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetSummary {
    pub count: usize,
    pub sizes: Vec<usize>,
    pub representatives: Vec<Element>,
    /// Id of `D_i⁻¹` for each coset.
    pub inverses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutomorphismSummary {
    pub involutive: bool,
    /// Absent when the automorphism is not involutive.
    pub condition: Option<RapCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSummary {
    pub rank: usize,
    /// `null` when the table is singular.
    pub condition: Option<f64>,
    pub table: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierResult {
    pub index: usize,
    pub multiplier: bool,
    /// First pair `(i, j)` with `T(δ_i ∗ δ_j) != Tδ_i ∗ δ_j`.
    pub witness: Option<(usize, usize)>,
    pub symbol: Option<Vec<[f64; 2]>>,
    /// `max |𝔟 - 𝓕(h)|` for kernel-defined operators.
    pub kernel_transform_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutationResidual {
    pub a: usize,
    pub b: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierSummary {
    pub operators: Vec<MultiplierResult>,
    pub commutation: Vec<CommutationResidual>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub seed: String,
    pub tolerance: f64,
    pub inputs: BTreeMap<String, String>,
    pub group: GroupSummary,
    pub subgroup: SubgroupSummary,
    pub double_cosets: CosetSummary,
    pub weight: WeightFlags,
    pub automorphism: Option<AutomorphismSummary>,
    pub gelfand: GelfandReport,
    pub spherical: Option<SphericalSet>,
    pub fourier: Option<FourierSummary>,
    pub multipliers: Option<MultiplierSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Process exit status derived from a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 1,
    NegativeVerdict = 2,
    Degenerate = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Exit status for a run that failed with `err`.
    pub fn for_error(err: &Error) -> Self {
        match err {
            Error::Degenerate(_) | Error::ConsistencyViolation(_) => ExitStatus::Degenerate,
            Error::NotCommutative { .. } | Error::NotAMultiplier(_) => ExitStatus::NegativeVerdict,
            _ => ExitStatus::InputError,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: AnalysisReport,
    pub status: ExitStatus,
}

struct Stopwatch {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch { enabled, last: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        if self.enabled {
            let now = Instant::now();
            self.laps.insert(name.to_string(), (now - self.last).as_secs_f64() * 1e3);
            self.last = now;
        }
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

/// Group → double cosets → weight checks → Gelfand verdict, then spherical
/// functions and the Fourier table when the pair is Gelfand.
pub fn run_analyze(request: &AnalysisRequest) -> Result<Outcome> {
    run(request)
}

/// As [`run_analyze`], followed by the verdict and symbol of every supplied
/// multiplier and their pairwise commutation residuals.
pub fn run_multiplier_check(request: &AnalysisRequest) -> Result<Outcome> {
    if request.multipliers.is_empty() {
        return Err(Error::Input("multiplier-check needs at least one --multiplier file".into()));
    }
    run(request)
}

/// Dispatches on `request.command`.
pub fn run(request: &AnalysisRequest) -> Result<Outcome> {
    if !(request.tolerance > 0.0 && request.tolerance.is_finite()) {
        return Err(Error::Input(format!("tolerance must be positive, got {}", request.tolerance)));
    }
    if request.command == Command::MultiplierCheck && request.multipliers.is_empty() {
        return Err(Error::Input("multiplier-check needs at least one --multiplier file".into()));
    }
    let tol = request.tolerance;
    let mut notes = Vec::new();
    let mut clock = Stopwatch::new(request.timings);

    let group = request.group.build(request.max_order)?;
    clock.lap("group");

    let subgroup = match &request.subgroup {
        Some(s) => s.build(&group)?,
        None => {
            notes.push("no subgroup given; using the trivial subgroup".to_string());
            crate::group::SubgroupEmbedding::trivial(&group)
        }
    };
    let cosets = double_cosets(&group, &subgroup);
    clock.lap("double_cosets");

    let weight = match &request.weight {
        Some(w) => w.build(&group, &cosets)?,
        None => crate::function::Weight::uniform(group.order()),
    };
    let theta = request.automorphism.as_ref().map(|a| a.build(&group)).transpose()?;
    let flags = weight_checks(&weight, &group, &cosets, theta.as_ref());
    clock.lap("weight_checks");

    let pair = WeightedPair::new(&group, subgroup.clone(), weight)?;
    let algebra = HeckeAlgebra::new(&group, &pair)?;
    clock.lap("structure_constants");

    let automorphism = match &theta {
        Some(t) if t.is_involutive() => Some(AutomorphismSummary {
            involutive: true,
            condition: Some(check_rap_condition(&group, &pair, t, tol)?),
        }),
        Some(_) => {
            notes.push("automorphism is not involutive; sufficient condition not evaluated".to_string());
            Some(AutomorphismSummary { involutive: false, condition: None })
        }
        None => None,
    };
    let gelfand = gelfand_report(&group, &algebra, theta.as_ref().filter(|t| t.is_involutive()), tol)?;
    if gelfand.unimodularity.is_none() {
        notes.push("weight is not 1 at the identity; unimodularity identity not evaluated".to_string());
    }
    clock.lap("gelfand");

    let mut report = AnalysisReport {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: request.command,
        seed: format!("{:#x}", request.seed),
        tolerance: tol,
        inputs: request.digests.clone(),
        group: GroupSummary { order: group.order(), abelian: group.is_abelian() },
        subgroup: SubgroupSummary { order: subgroup.order(), elements: subgroup.elements().to_vec() },
        double_cosets: CosetSummary {
            count: cosets.len(),
            sizes: cosets.sizes(),
            representatives: (0..cosets.len()).map(|i| cosets.representative(i)).collect(),
            inverses: (0..cosets.len()).map(|i| cosets.inverse_coset(i)).collect(),
        },
        weight: flags,
        automorphism,
        gelfand,
        spherical: None,
        fourier: None,
        multipliers: None,
        timings_ms: None,
        notes,
    };

    if !report.gelfand.gelfand {
        report.notes.push("not a weighted Gelfand pair; spectral analysis skipped".to_string());
        report.timings_ms = clock.finish();
        return Ok(Outcome { report, status: ExitStatus::NegativeVerdict });
    }

    let set = enumerate_spherical(&group, &algebra, &EnumerationOptions { seed: request.seed, tolerance: tol })?;
    clock.lap("spherical");
    let mut status = ExitStatus::Success;

    if request.command != Command::Spherical {
        let table = FourierTable::build(&group, &pair, &set);
        let inj = injectivity_check(&table);
        report.fourier = Some(FourierSummary {
            rank: inj.rank,
            condition: inj.condition.is_finite().then_some(inj.condition),
            table: table.rows_serializable(),
        });
        clock.lap("fourier");

        if !request.multipliers.is_empty() {
            report.multipliers = Some(check_multipliers(request, &group, &pair, &algebra, &set, &table, &mut status)?);
            clock.lap("multipliers");
        }
    } else if !request.multipliers.is_empty() {
        report.notes.push("multipliers are ignored by the spherical command".to_string());
    }

    report.spherical = Some(set);
    report.timings_ms = clock.finish();
    Ok(Outcome { report, status })
}

fn check_multipliers(
    request: &AnalysisRequest,
    group: &crate::group::GroupTable,
    pair: &WeightedPair,
    algebra: &HeckeAlgebra,
    set: &SphericalSet,
    table: &FourierTable,
    status: &mut ExitStatus,
) -> Result<MultiplierSummary> {
    let tol = request.tolerance;
    let operators = request.multipliers.iter().map(|m| m.build(algebra)).collect::<Result<Vec<_>>>()?;
    let mut results = Vec::with_capacity(operators.len());
    for (index, t) in operators.iter().enumerate() {
        let verdict = is_multiplier(algebra, t, tol);
        let mut result = MultiplierResult {
            index,
            multiplier: verdict.holds(),
            witness: verdict.witness().copied(),
            symbol: None,
            kernel_transform_residual: None,
        };
        if let Verdict::Holds = verdict {
            let options = SymbolOptions { seed: request.seed.wrapping_add(index as u64), tolerance: tol };
            let symbol = extract_symbol(t, table, &options)?;
            if let Some(h) = t.kernel() {
                let fh = spherical_transform(group, pair, h, set);
                result.kernel_transform_residual = Some(symbol.max_abs_diff(&fh));
            }
            result.symbol = Some(complex_serde::to_pairs(symbol.values()));
        } else {
            *status = ExitStatus::NegativeVerdict;
        }
        results.push(result);
    }
    let mut commutation = Vec::new();
    for a in 0..operators.len() {
        for b in a + 1..operators.len() {
            if results[a].multiplier && results[b].multiplier {
                commutation.push(CommutationResidual {
                    a,
                    b,
                    residual: verify_commutation(algebra, &operators[a], &operators[b]),
                });
            }
        }
    }
    Ok(MultiplierSummary { operators: results, commutation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => render_text(report),
    }
}

/// Writes `contents` to `path`, or to stdout when `path` is `None`.
pub fn emit(contents: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(|e| Error::Input(format!("stdout: {e}")))
        }
    }
}

/// Parses a seed given as hexadecimal, with or without a `0x` prefix.
pub fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("invalid hex seed {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_request(subgroup: Option<SubgroupSpec>) -> AnalysisRequest {
        let mut r = AnalysisRequest::new(Command::Analyze, GroupSpec::Symmetric { n: 3 });
        r.subgroup = subgroup;
        r
    }

    fn transposition() -> SubgroupSpec {
        SubgroupSpec { generators: Some(vec![vec![1, 0, 2]]), ..Default::default() }
    }

    #[test]
    fn s3_transposition_pipeline() {
        let out = run_analyze(&s3_request(Some(transposition()))).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert!(out.report.gelfand.gelfand);
        assert_eq!(out.report.spherical.as_ref().unwrap().len(), 2);
        assert_eq!(out.report.fourier.as_ref().unwrap().rank, 2);
    }

    #[test]
    fn trivial_subgroup_of_s3_is_negative_verdict() {
        let out = run_analyze(&s3_request(None)).unwrap();
        assert_eq!(out.status, ExitStatus::NegativeVerdict);
        assert!(!out.report.gelfand.gelfand);
        assert!(out.report.gelfand.witness.is_some());
        assert!(out.report.spherical.is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        let r = s3_request(Some(transposition()));
        assert_eq!(run(&r).unwrap().report.to_json(), run(&r).unwrap().report.to_json());
    }

    #[test]
    fn multiplier_check_requires_operators() {
        let mut r = s3_request(Some(transposition()));
        r.command = Command::MultiplierCheck;
        assert_eq!(ExitStatus::for_error(&run(&r).unwrap_err()), ExitStatus::InputError);
    }

    #[test]
    fn kernel_and_bad_matrix() {
        let mut r = s3_request(Some(transposition()));
        r.command = Command::MultiplierCheck;
        r.weight = Some(WeightSpec::ByDoubleCoset {
            values: [("0".to_string(), 1.0), ("1".to_string(), 2.0)].into_iter().collect(),
        });
        r.multipliers = vec![
            MultiplierSpec::Kernel { coset_values: vec![[0.5, 0.0], [1.0, 0.0]] },
            MultiplierSpec::Kernel { coset_values: vec![[-1.0, 0.0], [0.25, 0.0]] },
        ];
        let out = run_multiplier_check(&r).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        let m = out.report.multipliers.as_ref().unwrap();
        assert!(m.operators.iter().all(|o| o.multiplier));
        assert!(m.operators.iter().all(|o| o.kernel_transform_residual.unwrap() < 1e-9));
        assert!(m.commutation[0].residual < 1e-9);

        r.multipliers = vec![MultiplierSpec::Matrix { rows: vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]] }];
        let out = run_multiplier_check(&r).unwrap();
        assert_eq!(out.status, ExitStatus::NegativeVerdict);
        assert!(out.report.multipliers.unwrap().operators[0].witness.is_some());
    }

    #[test]
    fn seeds_parse_as_hex() {
        assert_eq!(parse_seed("0xC0FFEE"), Ok(0xC0FFEE));
        assert_eq!(parse_seed("ff"), Ok(255));
        assert!(parse_seed("zz").is_err());
    }
}
