//! Command-line front end: scenario files in, JSON reports and CSV tables out.
//!
//! A scenario file holds one scenario object or an array of them. Each
//! scenario writes `<name>.json` (and `<name>.csv` where the command has
//! tabular output) into the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    build_descriptor, classify_regularity, validate_pair, CaseDescriptor, CommutingPair, DiffOp,
    RegularityReport, ValidationReport, VARIANTS,
};
use crate::classifier::{classify, verify_candidate, ClassificationResult, Convention, TaylorData};
use crate::error::{Error, Result};
use crate::expalg::Cplx;
use crate::normality::{is_normal, is_self_adjoint, NormalityReport, SelfAdjointReport};
use crate::quadrature::MAX_NODES;
use crate::spectral::{k_spectrum_from_l, solve_l_eigen, svd_pipeline, SvdResult, MAX_BASIS};
use crate::verify::{commutator_norm, grid_residual, phi_study, PhiStudy, TestFn, PHI_EPS};

pub const SCHEMA: &str = "commutant-kernels/1";

#[derive(Debug, Parser)]
#[command(name = "commutant", version, about = "Commuting convolution kernels and differential operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Scenario file (one object or an array)
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, env = "COMMUTANT_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Override the spectral basis size
    #[arg(long, global = true)]
    pub basis: Option<usize>,
    /// Override the quadrature size N
    #[arg(long, global = true)]
    pub quad: Option<usize>,
    /// Override the pass/fail tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Scenarios run in parallel within a batch file
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the pair families, or build and validate the scenario's pair
    Catalog {
        #[arg(long)]
        list: bool,
    },
    /// Residue grid, discrete commutator norms and the boundary term
    Verify,
    /// Eigenpairs of L and the matching eigenvalues of K
    Spectrum,
    /// Singular system of a two-segment K from eigenfunctions of L
    Svd,
    /// Classify kernel coefficients about the origin
    Classify,
    /// Self-adjointness and normality of operators
    Normality,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Catalog { .. } => "catalog",
            Command::Verify => "verify",
            Command::Spectrum => "spectrum",
            Command::Svd => "svd",
            Command::Classify => "classify",
            Command::Normality => "normality",
        }
    }
}

fn default_basis() -> usize {
    96
}
fn default_n() -> usize {
    128
}
fn default_modes() -> usize {
    5
}
fn default_commutator_n() -> Vec<usize> {
    vec![32, 64, 128]
}
fn default_phi_x() -> f64 {
    0.3
}
fn default_residue_tol() -> f64 {
    1e-10
}
fn default_spectral_tol() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Resolutions {
    #[serde(default = "default_basis")]
    pub basis_size: usize,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_commutator_n")]
    pub commutator_n: Vec<usize>,
    #[serde(default = "default_phi_x")]
    pub phi_x: f64,
}

impl Default for Resolutions {
    fn default() -> Self {
        Resolutions {
            basis_size: default_basis(),
            n: default_n(),
            modes: default_modes(),
            commutator_n: default_commutator_n(),
            phi_x: default_phi_x(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_residue_tol")]
    pub residue: f64,
    #[serde(default = "default_spectral_tol")]
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residue: default_residue_tol(),
            spectral: default_spectral_tol(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Artifact {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub pair: Option<CaseDescriptor>,
    /// Raw coefficients for `classify`.
    #[serde(default)]
    pub taylor: Option<TaylorData>,
    /// A bare operator for `normality` and `spectrum`.
    #[serde(default)]
    pub operator: Option<DiffOp>,
    #[serde(default)]
    pub resolutions: Resolutions,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Empty means every artifact the command produces.
    #[serde(default)]
    pub outputs: Vec<Artifact>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let safe = !self.name.is_empty()
            && self
                .name
                .chars()
                .all(|ch| ch.is_ascii_alphanumeric() || "_-.".contains(ch))
            && !self.name.starts_with('.');
        if !safe {
            return Err(Error::InvalidInput(format!(
                "scenario name {:?} is not filesystem-safe",
                self.name
            )));
        }
        let r = &self.resolutions;
        if r.basis_size < 2 || r.basis_size > MAX_BASIS {
            return Err(Error::InvalidInput(format!(
                "basisSize {} outside 2..={MAX_BASIS}",
                r.basis_size
            )));
        }
        for &n in std::iter::once(&r.n).chain(&r.commutator_n) {
            if !(4..=MAX_NODES).contains(&n) {
                return Err(Error::InvalidInput(format!("N = {n} outside 4..={MAX_NODES}")));
            }
        }
        if r.modes == 0 {
            return Err(Error::InvalidInput("modes must be positive".into()));
        }
        let t = &self.tolerances;
        if !(t.residue > 0.0 && t.spectral > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn apply_overrides(&mut self, opts: &Opts) {
        if let Some(b) = opts.basis {
            self.resolutions.basis_size = b;
        }
        if let Some(n) = opts.quad {
            self.resolutions.n = n;
        }
        if let Some(t) = opts.tol {
            self.tolerances.residue = t;
            self.tolerances.spectral = t;
        }
    }

    fn wants(&self, a: Artifact) -> bool {
        self.outputs.is_empty() || self.outputs.contains(&a)
    }

    pub fn build(&self) -> Result<CommutingPair> {
        let desc = self
            .pair
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("scenario {} has no pair", self.name)))?;
        build_descriptor(desc)
    }
}

/// Parses one scenario or an array of them.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let list = match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<std::result::Result<Vec<Scenario>, _>>()?,
        other => vec![serde_json::from_value(other)?],
    };
    for s in &list {
        s.validate()?;
    }
    Ok(list)
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    parse_scenarios(&fs::read_to_string(path)?)
}

/// Versioned envelope around every result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: String,
    pub command: String,
    pub scenario: String,
    pub result: T,
}

impl<T> Report<T> {
    pub fn new(command: &str, scenario: &str, result: T) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            scenario: scenario.into(),
            result,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub case: String,
    pub formulas: [String; 3],
    pub source: (Cplx, Cplx),
    pub target: Option<(Cplx, Cplx)>,
    pub validation: ValidationReport,
    pub regularity: Option<RegularityReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub case: String,
    pub grid_residual_max: f64,
    pub grid_points: usize,
    pub skipped: usize,
    /// Keyed by `N`.
    pub commutator_norms: BTreeMap<usize, f64>,
    pub phi: Option<PhiStudy>,
    pub phi_slope: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub chi: Cplx,
    pub kappa: Option<Cplx>,
    pub l_residual: f64,
    pub k_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub case: String,
    pub basis_size: usize,
    pub n: usize,
    pub self_adjoint: bool,
    pub modes: Vec<SpectrumRow>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdReport {
    pub case: String,
    pub basis_size: usize,
    pub n: usize,
    pub regularity: RegularityReport,
    pub svd: SvdResult,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub input: TaylorData,
    pub classification: ClassificationResult,
    /// Defect of the scenario's own operator against the input data.
    pub operator_check: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormality {
    pub label: String,
    pub segment: (Cplx, Cplx),
    pub self_adjoint: SelfAdjointReport,
    pub normality: NormalityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityCliReport {
    pub operators: Vec<OperatorNormality>,
}

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Header plus rows; fields are never quoted, so callers pass numbers only.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn verify_csv(grid: &crate::verify::GridResidual) -> String {
    let rows: Vec<Vec<String>> = grid
        .points
        .iter()
        .map(|p| {
            vec![
                num(p.y.re),
                num(p.y.im),
                num(p.z.re),
                num(p.z.im),
                num(p.abs),
                num(p.relative),
            ]
        })
        .collect();
    csv_table(&["y_re", "y_im", "z_re", "z_im", "abs_residual", "relative_residual"], &rows)
}

pub fn spectrum_csv(r: &SpectrumReport) -> String {
    let rows: Vec<Vec<String>> = r
        .modes
        .iter()
        .map(|m| {
            vec![
                m.n.to_string(),
                num(m.chi.re),
                num(m.chi.im),
                opt_num(m.kappa.map(|k| k.re)),
                opt_num(m.kappa.map(|k| k.im)),
                num(m.l_residual),
                opt_num(m.k_residual),
            ]
        })
        .collect();
    csv_table(
        &["n", "chi_re", "chi_im", "kappa_re", "kappa_im", "l_residual", "k_residual"],
        &rows,
    )
}

pub fn svd_csv(r: &SvdResult) -> String {
    let rows: Vec<Vec<String>> = (0..r.sigmas.len())
        .map(|i| {
            vec![
                i.to_string(),
                num(r.chis[i].re),
                num(r.chis[i].im),
                num(r.sigmas[i]),
                num(r.cross_residuals[i]),
                num(r.normal_residuals[i]),
            ]
        })
        .collect();
    csv_table(
        &["n", "chi_re", "chi_im", "sigma", "cross_residual", "normal_residual"],
        &rows,
    )
}

/// What one scenario produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub json: String,
    pub csv: Option<String>,
    /// Set when the run completed but missed its tolerance.
    pub failure: Option<Error>,
}

fn emit<T: Serialize>(command: Command, sc: &Scenario, result: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Report::new(command.name(), &sc.name, result))?;
    s.push('\n');
    Ok(s)
}

fn tolerance_failure(case: &str, residual: f64, tolerance: f64) -> Error {
    Error::ResidueCheck {
        case: case.into(),
        residual,
        tolerance,
    }
}

pub fn catalog_report(pair: &CommutingPair) -> Result<CatalogReport> {
    let regularity = if pair.op_target.is_some() {
        Some(classify_regularity(pair)?)
    } else {
        None
    };
    Ok(CatalogReport {
        case: pair.case.name().into(),
        formulas: pair.op.formulas(),
        source: pair.op.segment,
        target: pair.op_target.as_ref().map(|t| t.segment),
        validation: validate_pair(pair),
        regularity,
    })
}

pub fn verify_report(pair: &CommutingPair, sc: &Scenario) -> Result<(VerifyReport, String)> {
    let grid = grid_residual(pair)?;
    let mut norms = BTreeMap::new();
    for &n in &sc.resolutions.commutator_n {
        norms.insert(n, commutator_norm(pair, n, &TestFn::BATTERY)?);
    }
    let phi = if pair.kernel.pole_order_at_zero() > 0 {
        Some(phi_study(pair, sc.resolutions.phi_x, &PHI_EPS)?)
    } else {
        None
    };
    let tol = sc.tolerances.residue;
    let report = VerifyReport {
        case: pair.case.name().into(),
        grid_residual_max: grid.max_relative,
        grid_points: grid.points.len(),
        skipped: grid.skipped,
        commutator_norms: norms,
        phi_slope: phi.as_ref().map(|p| p.slope),
        phi,
        tolerance: tol,
        passed: grid.max_relative <= tol,
    };
    Ok((report, verify_csv(&grid)))
}

/// Eigenpairs of `op`; with a single-segment `pair` also the matching
/// eigenvalues of its kernel.
pub fn spectrum_report(op: &DiffOp, pair: Option<&CommutingPair>, sc: &Scenario) -> Result<SpectrumReport> {
    let r = &sc.resolutions;
    let spec = solve_l_eigen(op, r.basis_size)?;
    let modes = r.modes.min(spec.len());
    let head = crate::spectral::Spectrum {
        eigenvalues: spec.eigenvalues[..modes].to_vec(),
        eigvecs: spec.eigvecs[..modes].to_vec(),
        residuals: spec.residuals[..modes].to_vec(),
        ..spec.clone()
    };
    let transfer = match pair {
        Some(p) if p.op_target.is_none() => Some(k_spectrum_from_l(p, &head, r.n)?),
        _ => None,
    };
    let rows: Vec<SpectrumRow> = (0..modes)
        .map(|i| SpectrumRow {
            n: i,
            chi: head.eigenvalues[i],
            kappa: transfer.as_ref().map(|t| t.0[i]),
            l_residual: head.residuals[i],
            k_residual: transfer.as_ref().map(|t| t.1[i]),
        })
        .collect();
    let tol = sc.tolerances.spectral;
    let passed = rows
        .iter()
        .all(|m| m.l_residual <= tol && m.k_residual.is_none_or(|k| k <= tol));
    Ok(SpectrumReport {
        case: pair.map_or("operator", |p| p.case.name()).into(),
        basis_size: r.basis_size,
        n: r.n,
        self_adjoint: spec.self_adjoint,
        modes: rows,
        tolerance: tol,
        passed,
    })
}

pub fn svd_report(pair: &CommutingPair, sc: &Scenario) -> Result<SvdReport> {
    let r = &sc.resolutions;
    let svd = svd_pipeline(pair, r.basis_size, r.n, r.modes)?;
    let tol = sc.tolerances.spectral;
    let passed = svd.cross_residuals.iter().all(|&x| x <= tol);
    Ok(SvdReport {
        case: pair.case.name().into(),
        basis_size: r.basis_size,
        n: r.n,
        regularity: classify_regularity(pair)?,
        svd,
        tolerance: tol,
        passed,
    })
}

pub fn classify_report(sc: &Scenario) -> Result<ClassifyReport> {
    let (input, op) = match (&sc.taylor, &sc.pair) {
        (Some(t), _) => (t.clone(), None),
        (None, Some(_)) => {
            let pair = sc.build()?;
            let singular = pair.kernel.pole_order_at_zero() > 0;
            let conv = if singular {
                Convention::Plain
            } else {
                Convention::Factorial
            };
            (TaylorData::from_kernel(&pair.kernel, 6, conv)?, Some(pair.op))
        }
        (None, None) => {
            return Err(Error::InvalidInput(format!(
                "scenario {} needs taylor coefficients or a pair",
                sc.name
            )))
        }
    };
    let classification = classify(&input)?;
    let operator_check = match op {
        Some(op) => Some(verify_candidate(&input, &op)?),
        None => None,
    };
    Ok(ClassifyReport {
        input,
        classification,
        operator_check,
    })
}

pub fn normality_report(sc: &Scenario) -> Result<NormalityCliReport> {
    let mut ops: Vec<(String, DiffOp)> = Vec::new();
    if let Some(op) = &sc.operator {
        ops.push(("operator".into(), op.clone()));
    }
    if sc.pair.is_some() {
        let pair = sc.build()?;
        if let Some(t) = &pair.op_target {
            ops.push(("target".into(), t.clone()));
        }
        ops.insert(0, ("source".into(), pair.op));
    }
    let operators = ops
        .into_iter()
        .map(|(label, op)| {
            Ok(OperatorNormality {
                label,
                segment: op.segment,
                self_adjoint: is_self_adjoint(&op),
                normality: is_normal(&op)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalityCliReport { operators })
}

/// Runs one scenario without touching the file system.
pub fn run_scenario(command: Command, sc: &Scenario) -> Result<Outcome> {
    match command {
        Command::Catalog { .. } => {
            let r = catalog_report(&sc.build()?)?;
            let failure = (!r.validation.passed)
                .then(|| Error::InvalidInput(format!("{} failed validation", r.case)));
            Ok(Outcome {
                json: emit(command, sc, &r)?,
                csv: None,
                failure,
            })
        }
        Command::Verify => {
            let pair = sc.build()?;
            let (r, csv) = verify_report(&pair, sc)?;
            let failure = (!r.passed).then(|| tolerance_failure(&r.case, r.grid_residual_max, r.tolerance));
            Ok(Outcome {
                json: emit(command, sc, &r)?,
                csv: Some(csv),
                failure,
            })
        }
        Command::Spectrum => {
            let r = match &sc.operator {
                Some(op) => spectrum_report(op, None, sc)?,
                None => {
                    let pair = sc.build()?;
                    spectrum_report(&pair.op, Some(&pair), sc)?
                }
            };
            let worst = r
                .modes
                .iter()
                .map(|m| m.l_residual.max(m.k_residual.unwrap_or(0.0)))
                .fold(0.0, f64::max);
            let failure = (!r.passed).then(|| tolerance_failure(&r.case, worst, r.tolerance));
            Ok(Outcome {
                json: emit(command, sc, &r)?,
                csv: Some(spectrum_csv(&r)),
                failure,
            })
        }
        Command::Svd => {
            let r = svd_report(&sc.build()?, sc)?;
            let worst = r.svd.cross_residuals.iter().copied().fold(0.0, f64::max);
            let failure = (!r.passed).then(|| tolerance_failure(&r.case, worst, r.tolerance));
            Ok(Outcome {
                json: emit(command, sc, &r)?,
                csv: Some(svd_csv(&r.svd)),
                failure,
            })
        }
        Command::Classify => Ok(Outcome {
            json: emit(command, sc, &classify_report(sc)?)?,
            csv: None,
            failure: None,
        }),
        Command::Normality => Ok(Outcome {
            json: emit(command, sc, &normality_report(sc)?)?,
            csv: None,
            failure: None,
        }),
    }
}

fn write_outcome(dir: &Path, sc: &Scenario, out: &Outcome) -> Result<()> {
    fs::create_dir_all(dir)?;
    if sc.wants(Artifact::Json) {
        fs::write(dir.join(format!("{}.json", sc.name)), &out.json)?;
    }
    if let (Some(csv), true) = (&out.csv, sc.wants(Artifact::Csv)) {
        fs::write(dir.join(format!("{}.csv", sc.name)), csv)?;
    }
    Ok(())
}

pub fn catalog_listing() -> String {
    let mut s = String::new();
    for (name, domain) in VARIANTS {
        let _ = writeln!(s, "{name:<10} {domain}");
    }
    s
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    if let Command::Catalog { list: true } = cli.command {
        print!("{}", catalog_listing());
        return 0;
    }
    let Some(path) = &cli.opts.scenario else {
        eprintln!("error: --scenario is required for {}", cli.command.name());
        return 2;
    };
    let mut scenarios = match load_scenarios(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return e.exit_code();
        }
    };
    for sc in &mut scenarios {
        sc.apply_overrides(&cli.opts);
        if let Err(e) = sc.validate() {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
    let one = |sc: &Scenario| -> i32 {
        let result = run_scenario(cli.command, sc)
            .and_then(|o| write_outcome(&cli.opts.out, sc, &o).map(|_| o.failure));
        match result {
            Ok(None) => 0,
            Ok(Some(e)) | Err(e) => {
                eprintln!("{}: {e}", sc.name);
                e.exit_code()
            }
        }
    };
    let codes: Vec<i32> = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.opts.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(|| scenarios.par_iter().map(one).collect()),
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    codes.into_iter().find(|&c| c != 0).unwrap_or(0)
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_names_every_family() {
        let s = catalog_listing();
        assert_eq!(s.lines().count(), VARIANTS.len());
        assert!(s.contains("C2Item4"));
    }

    #[test]
    fn unsafe_names_rejected() {
        let js = r#"{"name": "../x", "pair": {"case": "Special4", "p": [[1,0]], "beta": [0,0]}}"#;
        assert!(matches!(parse_scenarios(js), Err(Error::InvalidInput(_))));
        let js = r#"{"name": "ok", "resolutions": {"N": 2}}"#;
        assert!(parse_scenarios(js).is_err());
        let js = r#"{"name": "ok", "bogus": 1}"#;
        assert!(matches!(parse_scenarios(js), Err(Error::Json(_))));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
    }
}
