use crate::error::CliError;
use crate::format::{self, Form, FormFileV1, InputHash, Provenance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rcvv::jacobi::{ext_bracket_hol, ThetaComponentForm};
use rcvv::number::{float_prec_from_env, frac};
use rcvv::numcheck::QuadratureSpec;
use rcvv::pairing::theta::{
    jacobi_adjoint, jacobi_bracket_pairing, skew_adjoint, skew_bracket_pairing, DualPairing, JacobiPairingParams,
    Mode, ModeDifference,
};
use rcvv::pairing::{
    adjoint_coeffs, bracket_pairing, poincare_pairing_coeff, AdjointForm, AdjointParams, BracketPairingParams,
    PairingResult,
};
use rcvv::skewjacobi::{ext_bracket_skew, SkewThetaForm};
use rcvv::suites::{self, SkewScaling, SuiteReport};
use rcvv::vvforms::rc_bracket;
use rcvv::VVForm;
use rug::Rational;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(name = "rcvv", version, about = "Rankin-Cohen brackets and Petersson pairing formulas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rankin-Cohen bracket of two vector-valued forms.
    Bracket {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long)]
        nu: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Extended bracket of a Jacobi or skew-holomorphic Jacobi form with a scalar form.
    JacobiBracket {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        nu: u32,
        #[arg(long, conflicts_with = "skew", required_unless_present = "skew")]
        hol: bool,
        #[arg(long)]
        skew: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Theta decomposition of a Jacobi or skew form into a vector-valued form.
    ThetaDecompose {
        f: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Inverse of `theta-decompose`.
    ThetaRecompose {
        f: PathBuf,
        #[arg(long, value_enum)]
        kind: JacobiKind,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Closed-form pairing against a Poincare series or a bracket with one.
    Pair(PairArgs),
    /// Adjoint coefficients of a bracket operator.
    Adjoint(AdjointArgs),
    /// Runs a verification suite; exits 3 when it fails.
    Verify(VerifyArgs),
    /// Writes the built-in fixture forms.
    Fixtures {
        #[arg(long)]
        emit: PathBuf,
        #[arg(long, default_value_t = 20)]
        precision: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum JacobiKind {
    Jacobi,
    Skew,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PairFormula {
    Thm2,
    Thm3,
    Thm9,
    Thm10,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdjointFormula {
    Thm4,
    Prop2,
    Thm11,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Canonical,
    AsPrinted,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Canonical => Mode::Canonical,
            ModeArg::AsPrinted => Mode::AsPrinted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Thm1,
    Swap,
    Thm7,
    Thm8,
    Thm4,
    Dual,
    Thm2num,
    Thm3num,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Printed,
    Signed,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, value_enum)]
    pub formula: PairFormula,
    #[arg(long, value_enum, default_value = "canonical")]
    pub mode: ModeArg,
    /// Cusp form on the dual side (thm3, thm9, thm10).
    #[arg(long)]
    pub f: Option<PathBuf>,
    #[arg(long)]
    pub g: PathBuf,
    /// Poincare weight (thm2).
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub k1: Option<String>,
    #[arg(long)]
    pub k2: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, default_value_t = 1)]
    pub s: i64,
    /// Component of the Poincare series, 0-based.
    #[arg(long, default_value_t = 0)]
    pub u: usize,
    #[arg(long)]
    pub max_n: Option<i64>,
    /// Report destination; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdjointArgs {
    #[arg(long, value_enum)]
    pub formula: AdjointFormula,
    #[arg(long, value_enum, default_value = "canonical")]
    pub mode: ModeArg,
    #[arg(long)]
    pub h: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub k1: String,
    #[arg(long)]
    pub k2: String,
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, default_value_t = 5)]
    pub max_index: i64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cases per suite, or seeds per grid point for thm7 and thm8.
    #[arg(long)]
    pub cases: Option<usize>,
    /// Which identity the thm8 suite checks.
    #[arg(long, value_enum, default_value = "printed")]
    pub skew_scaling: ScalingArg,
    /// Coset cutoff for the numerical suites.
    #[arg(long, default_value_t = 50)]
    pub cutoff: i64,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bracket { f1, f2, nu, output } => cmd_bracket(&f1, &f2, nu, &output),
        Command::JacobiBracket { f, g, nu, hol: _, skew, output } => cmd_jacobi_bracket(&f, &g, nu, skew, &output),
        Command::ThetaDecompose { f, output } => cmd_theta_decompose(&f, &output),
        Command::ThetaRecompose { f, kind, output } => cmd_theta_recompose(&f, kind, &output),
        Command::Pair(a) => cmd_pair(&a),
        Command::Adjoint(a) => cmd_adjoint(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Fixtures { emit, precision } => cmd_fixtures(&emit, precision),
    }
}

/// A parsed input together with its path and content hash.
struct Input {
    form: Form,
    hash: InputHash,
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::Validation(format!("{}: not UTF-8", path.display())))?;
    let (form, _) = format::parse_str(text)
        .map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
            other => other,
        })?;
    let hash = InputHash { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    Ok(Input { form, hash })
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn write_form(path: &Path, form: &Form, provenance: Provenance, scale: Option<String>) -> Result<(), CliError> {
    let mut file: FormFileV1 = format::to_file(form)?;
    file.provenance = Some(provenance);
    file.scale = scale;
    write_atomic(path, &format::to_string(&file)?)
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    Rational::from_str(s).map_err(|_| CliError::Validation(format!("{what}: {s:?} is not a rational")))
}

fn required<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Validation(format!("--{what} is required for this formula")))
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn provenance(inputs: &[&Input], nu: Option<u32>, mode: Option<&str>) -> Provenance {
    Provenance {
        command: command_line(),
        inputs: inputs.iter().map(|i| i.hash.clone()).collect(),
        nu,
        mode: mode.map(str::to_string),
    }
}

fn cmd_bracket(f1: &Path, f2: &Path, nu: u32, output: &Path) -> Result<(), CliError> {
    let a = read_input(f1)?;
    let b = read_input(f2)?;
    let out = rc_bracket(&a.form.clone().into_vector()?, &b.form.clone().into_vector()?, nu)?;
    write_form(output, &Form::Vector(out), provenance(&[&a, &b], Some(nu), None), None)
}

fn cmd_jacobi_bracket(f: &Path, g: &Path, nu: u32, skew: bool, output: &Path) -> Result<(), CliError> {
    let a = read_input(f)?;
    let b = read_input(g)?;
    let g_form = b.form.clone().into_vector()?;
    let (out, mode) = if skew {
        (Form::Skew(ext_bracket_skew(&a.form.clone().into_skew()?, &g_form, nu)?), "skew")
    } else {
        (Form::Jacobi(ext_bracket_hol(&a.form.clone().into_jacobi()?, &g_form, nu)?), "hol")
    };
    write_form(output, &out, provenance(&[&a, &b], Some(nu), Some(mode)), None)
}

fn cmd_theta_decompose(f: &Path, output: &Path) -> Result<(), CliError> {
    let a = read_input(f)?;
    let vv = match &a.form {
        Form::Jacobi(j) => j.psi(),
        Form::Skew(s) => s.psi_sk(),
        Form::Vector(_) => return Err(CliError::Validation("input is already a vvform".into())),
    };
    write_form(output, &Form::Vector(vv), provenance(&[&a], None, Some(a.form.kind())), None)
}

fn cmd_theta_recompose(f: &Path, kind: JacobiKind, output: &Path) -> Result<(), CliError> {
    let a = read_input(f)?;
    let vv = a.form.clone().into_vector()?;
    let out = match kind {
        JacobiKind::Jacobi => Form::Jacobi(ThetaComponentForm::psi_inv(&vv)?),
        JacobiKind::Skew => Form::Skew(SkewThetaForm::psi_sk_inv(&vv)?),
    };
    write_form(output, &out, provenance(&[&a], None, Some(out.kind())), None)
}

#[derive(Debug, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct DifferenceJson {
    pub location: String,
    pub canonical: String,
    pub as_printed: String,
    pub factor: Option<String>,
    pub numeric_ratio: Option<f64>,
}

impl From<&ModeDifference> for DifferenceJson {
    fn from(d: &ModeDifference) -> Self {
        DifferenceJson {
            location: d.location.clone(),
            canonical: d.canonical.clone(),
            as_printed: d.as_printed.clone(),
            factor: d.factor.as_ref().map(|f| f.to_string()),
            numeric_ratio: d.numeric_ratio,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PairingReport {
    pub schema: &'static str,
    pub formula: &'static str,
    pub mode: &'static str,
    pub value: String,
    pub value_numeric: ComplexJson,
    pub truncation_n: i64,
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub as_printed: Option<String>,
    pub differences: Vec<DifferenceJson>,
    pub provenance: Provenance,
}

fn report_of(r: &PairingResult, mode: Mode, dual: Option<&DualPairing>, prov: Provenance) -> PairingReport {
    let z = r.value.to_c64();
    PairingReport {
        schema: "rcvv-pairing/1",
        formula: r.formula.tag(),
        mode: mode.name(),
        value: r.value.to_string(),
        value_numeric: ComplexJson { re: z.re, im: z.im },
        truncation_n: r.truncation_n,
        tail_bound: r.tail_bound.filter(|t| t.is_finite()),
        canonical: dual.map(|d| d.canonical.value.to_string()),
        as_printed: dual.map(|d| d.as_printed.value.to_string()),
        differences: dual.map(|d| d.differences.iter().map(DifferenceJson::from).collect()).unwrap_or_default(),
        provenance: prov,
    }
}

fn emit_json<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    match output {
        Some(p) => write_atomic(p, &s),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn cmd_pair(a: &PairArgs) -> Result<(), CliError> {
    let g = read_input(&a.g)?;
    let mode = a.mode.mode();
    let report = match a.formula {
        PairFormula::Thm2 => {
            let k = parse_rational(required(&a.k, "k")?, "k")?;
            let r = poincare_pairing_coeff(&g.form.clone().into_vector()?, &k, a.s, a.u)?;
            report_of(&r, Mode::Canonical, None, provenance(&[&g], None, None))
        }
        PairFormula::Thm3 => {
            let f = read_input(a.f.as_ref().ok_or_else(|| CliError::Validation("--f is required".into()))?)?;
            let gv = g.form.clone().into_vector()?;
            let fv = with_scalar_tensor(f.form.clone().into_vector()?, &gv)?;
            let p = BracketPairingParams {
                k1: parse_rational(required(&a.k1, "k1")?, "k1")?,
                k2: parse_rational(required(&a.k2, "k2")?, "k2")?,
                nu: a.nu,
                s: a.s,
                r: a.u,
                max_n: a.max_n,
            };
            let r = bracket_pairing(&fv, &gv, &p)?;
            report_of(&r, Mode::Canonical, None, provenance(&[&f, &g], Some(a.nu), None))
        }
        PairFormula::Thm9 | PairFormula::Thm10 => {
            let f = read_input(a.f.as_ref().ok_or_else(|| CliError::Validation("--f is required".into()))?)?;
            let p = JacobiPairingParams {
                k1: parse_rational(required(&a.k1, "k1")?, "k1")?,
                k2: parse_rational(required(&a.k2, "k2")?, "k2")?,
                nu: a.nu,
                s: a.s,
            };
            let d = if a.formula == PairFormula::Thm9 {
                jacobi_bracket_pairing(&f.form.clone().into_jacobi()?, &g.form.clone().into_jacobi()?, &p)?
            } else {
                skew_bracket_pairing(&f.form.clone().into_skew()?, &g.form.clone().into_skew()?, &p)?
            };
            report_of(d.get(mode), mode, Some(&d), provenance(&[&f, &g], Some(a.nu), Some(mode.name())))
        }
    };
    emit_json(&report, a.output.as_deref())
}

/// For a scalar pair without tensor metadata, attaches `[g offset] (x) [f offset - g offset]`.
fn with_scalar_tensor(f: VVForm, g: &VVForm) -> Result<VVForm, CliError> {
    if f.meta().tensor().is_some() {
        return Ok(f);
    }
    if f.dim() != 1 || g.dim() != 1 {
        return Err(CliError::Validation("f needs tensor factors unless both forms are scalar".into()));
    }
    let right = frac(&Rational::from(&f.offsets()[0] - &g.offsets()[0]));
    Ok(f.with_tensor_factors(g.offsets().to_vec(), vec![right])?)
}

fn adjoint_to_form(adj: &AdjointForm) -> Result<(Form, Option<String>), CliError> {
    let prec = float_prec_from_env()?;
    let (vv, scale) = adj.to_vvform(prec)?;
    let scale = scale.map(|s| s.to_string());
    let form = match &adj.kind {
        rcvv::pairing::AdjointKind::Vector => Form::Vector(vv),
        rcvv::pairing::AdjointKind::Jacobi { index, kappa } => Form::Jacobi(ThetaComponentForm::new(
            *index,
            adj.weight.clone(),
            kappa.clone(),
            vv.components().to_vec(),
            vv.cusp_flag(),
        )?),
        rcvv::pairing::AdjointKind::Skew { index, kappa } => Form::Skew(SkewThetaForm::new(
            *index,
            adj.weight.clone(),
            kappa.clone(),
            vv.components().to_vec(),
            vv.cusp_flag(),
        )?),
    };
    Ok((form, scale))
}

fn cmd_adjoint(a: &AdjointArgs) -> Result<(), CliError> {
    let h = read_input(&a.h)?;
    let g = read_input(&a.g)?;
    let gv = g.form.clone().into_vector()?;
    let p = AdjointParams {
        k1: parse_rational(&a.k1, "k1")?,
        k2: parse_rational(&a.k2, "k2")?,
        nu: a.nu,
        max_index: a.max_index,
    };
    let mode = a.mode.mode();
    let adj = match a.formula {
        AdjointFormula::Thm4 => adjoint_coeffs(&h.form.clone().into_vector()?, &gv, &p)?,
        AdjointFormula::Prop2 => jacobi_adjoint(&h.form.clone().into_jacobi()?, &gv, &p)?.get(mode).clone(),
        AdjointFormula::Thm11 => skew_adjoint(&h.form.clone().into_skew()?, &gv, &p)?.get(mode).clone(),
    };
    let (form, scale) = adjoint_to_form(&adj)?;
    let mode_name = (a.formula != AdjointFormula::Thm4).then(|| mode.name());
    write_form(&a.output, &form, provenance(&[&h, &g], Some(a.nu), mode_name), scale)
}

fn print_suite(r: &SuiteReport) {
    println!("{}", r.summary());
    for f in r.failures.iter().take(20) {
        println!("  {f}");
    }
    if r.failures.len() > 20 {
        println!("  ... {} more", r.failures.len() - 20);
    }
}

/// Relative tolerances of the numerical suites.
pub const THM2_TOLERANCE: f64 = 1e-2;
pub const THM3_TOLERANCE: f64 = 5e-2;

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let spec = QuadratureSpec { cutoff: a.cutoff, ..QuadratureSpec::default() };
    let ok = match a.suite {
        Suite::Thm1 | Suite::Swap | Suite::Thm7 | Suite::Thm8 | Suite::Thm4 => {
            let r = match a.suite {
                Suite::Thm1 => suites::thm1_suite(a.seed, a.cases.unwrap_or(100)),
                Suite::Swap => suites::swap_suite(a.seed, a.cases.unwrap_or(100)),
                Suite::Thm7 => suites::thm7_suite(a.seed, a.cases.unwrap_or(25)),
                Suite::Thm8 => {
                    let scaling = match a.skew_scaling {
                        ScalingArg::Printed => SkewScaling::Printed,
                        ScalingArg::Signed => SkewScaling::Signed,
                    };
                    suites::thm8_suite(a.seed, a.cases.unwrap_or(25), scaling)
                }
                _ => suites::thm4_suite(a.seed, a.cases.unwrap_or(5)),
            };
            print_suite(&r);
            r.passed()
        }
        Suite::Dual => {
            let entries = suites::dual_mode_report(a.seed)?;
            for e in &entries {
                println!("{} [{}]: {} difference(s)", e.formula, e.instance, e.differences.len());
                for d in &e.differences {
                    let factor = d.factor.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "-".into());
                    let ratio = d.numeric_ratio.map(|r| format!("{r:.6e}")).unwrap_or_else(|| "-".into());
                    println!("  {}: factor {factor}, ratio {ratio}", d.location);
                }
            }
            !entries.is_empty()
        }
        Suite::Thm2num => {
            let mut ok = true;
            for r in suites::thm2_numeric(&spec) {
                let c = r?;
                let pass = c.passes(THM2_TOLERANCE);
                ok &= pass;
                println!(
                    "{}: closed form {:.12e}, quadrature {:.12e}, relative error {:.3e} ({})",
                    c.label,
                    c.closed_form,
                    c.numeric.re,
                    c.relative_error,
                    if pass { "ok" } else { "FAIL" }
                );
            }
            ok
        }
        Suite::Thm3num => {
            let c = suites::thm3_numeric(&spec)?;
            let pass = c.passes(THM3_TOLERANCE);
            println!(
                "{}: closed form {:.12e}, quadrature {:.12e}, relative error {:.3e} ({})",
                c.label,
                c.closed_form,
                c.numeric.re,
                c.relative_error,
                if pass { "ok" } else { "FAIL" }
            );
            pass
        }
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!("suite {} failed", format!("{:?}", a.suite).to_lowercase())))
    }
}

fn cmd_fixtures(dir: &Path, precision: i64) -> Result<(), CliError> {
    if precision < 1 {
        return Err(CliError::Validation("precision must be positive".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for (name, form) in rcvv::fixtures::all(precision) {
        let prov = Provenance { command: format!("fixtures --precision {precision}"), ..Provenance::default() };
        write_form(&dir.join(format!("{name}.json")), &Form::Vector(form), prov, None)?;
    }
    Ok(())
}
