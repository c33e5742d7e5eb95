use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use convdom::checks::{intertwining_batch, verify_group};
use convdom::group::growth_fit;
use convdom::io::{to_json_string, write_json};
use convdom::lab::{
    make_test_matrix, study_matrix, weighted_inverse_check, EnvelopeShape, Offset, PhaseScheme, StudyOptions,
    TestMatrixSpec,
};
use convdom::repr::{check_normid, PowerOptions};
use convdom::weight::{grs_diagnostic, induced_weight_v, ratio_condition, ugrs_diagnostic};
use convdom::{CdMatrix, Element, Error, Extent, Group, GroupConfig, GroupKind, Result, Weight};

#[derive(Parser, Debug, Serialize)]
#[command(name = "convdom", version, about = "Convolution-dominated matrices over discrete groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Z1..Z8, H3 or F2
    #[arg(long, global = true, default_value = "Z1")]
    group: String,
    /// const, poly:s=.., subexp:c=..,beta=.., exp:c=.., prodz2:s=..
    #[arg(long, global = true)]
    weight: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory; created if missing
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Run on groups without polynomial growth
    #[arg(long, global = true)]
    allow_out_of_hypothesis: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Ball sizes and growth exponent fit
    Ball {
        #[arg(long)]
        n: usize,
    },
    /// GRS and UGRS diagnostics, ratio condition, induced weight table
    Weights {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Element for the GRS sequence; defaults to the first generator
        #[arg(long)]
        x: Option<String>,
        /// Sphere radius limit for the ratio condition
        #[arg(long, default_value_t = 8)]
        ratio_n: usize,
        /// Bound in the ratio condition
        #[arg(long, default_value_t = 1.0)]
        ratio_bound: f64,
        /// Length of the induced weight table
        #[arg(long, default_value_t = 20)]
        v_n: usize,
    },
    /// Randomized property suites; exits 0 iff all pass
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
    /// Finite-section inversion study of a test matrix
    Invert(InvertArgs),
    /// Spectral radius sequence of f* f against the operator norm
    Spectral(SpectralArgs),
    /// Batches of intertwining checks
    Intertwine {
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Level {
    Quick,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Shape {
    Geometric,
    Polynomial,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Phases {
    Random,
    Positive,
    Toeplitz,
}

#[derive(Args, Debug, Serialize)]
struct InvertArgs {
    /// Comma-separated increasing section radii
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<usize>,
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long, value_enum, default_value_t = Shape::Geometric)]
    shape: Shape,
    /// Decay per sphere for the geometric shape
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    /// Exponent for the polynomial shape
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    /// Radius of the off-identity support
    #[arg(long, default_value_t = 1)]
    support: usize,
    /// Off-identity envelope mass
    #[arg(long, default_value_t = 0.5)]
    mass: f64,
    /// Coefficient of the identity
    #[arg(long, default_value_t = 1.0)]
    identity: f64,
    #[arg(long, value_enum, default_value_t = Phases::Random)]
    phases: Phases,
    #[arg(long)]
    hermitian: bool,
    /// Extra diagonal `element=value`, repeatable
    #[arg(long = "offset")]
    offsets: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
struct SpectralArgs {
    /// Coefficients of lambda(0), lambda(1), ... on Z1
    #[arg(long, value_delimiter = ',')]
    toeplitz: Option<Vec<f64>>,
    /// Use the single shift lambda(x)
    #[arg(long, conflicts_with = "toeplitz")]
    shift: Option<String>,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    /// Radius of the section used for the operator norm
    #[arg(long)]
    section: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn make_group(common: &Common, max_radius: usize) -> Result<Arc<Group>> {
    let kind: GroupKind = common.group.parse()?;
    let mut cfg = GroupConfig::for_kind(kind);
    cfg.max_radius = cfg.max_radius.max(max_radius);
    cfg.allow_out_of_hypothesis = common.allow_out_of_hypothesis;
    Ok(Group::with_config(kind, cfg))
}

fn weight(common: &Common) -> Result<Option<Weight>> {
    common.weight.as_deref().map(str::parse).transpose()
}

fn emit<S: Serialize>(out: Option<&Path>, name: &str, report: &S) -> Result<()> {
    if let Some(dir) = out {
        write_json(&dir.join(name), report)?;
    }
    let mut stdout = io::stdout().lock();
    match writeln!(stdout, "{}", to_json_string(report)?) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn cmd_ball(common: &Common, n: usize, out: Option<&Path>) -> Result<()> {
    let g = make_group(common, n)?;
    let sizes = g.ball_sizes(n)?;
    let points: Vec<(usize, usize)> = sizes.iter().copied().enumerate().skip(1).collect();
    let fit = growth_fit(&points)?;
    if let Some(dir) = out {
        let mut csv = String::from("n,size\n");
        for (k, s) in &points {
            csv.push_str(&format!("{k},{s}\n"));
        }
        fs::write(dir.join("ball.csv"), csv)?;
    }
    let sizes: Vec<_> = points.iter().map(|(k, s)| json!({"n": k, "size": s})).collect();
    emit(out, "growth.json", &json!({"group": g.kind().to_string(), "sizes": sizes, "fit": fit}))
}

fn cmd_weights(common: &Common, cmd: &Command, out: Option<&Path>) -> Result<()> {
    let Command::Weights { n, x, ratio_n, ratio_bound, v_n } = cmd else { unreachable!() };
    let g = make_group(common, 0)?;
    let w = weight(common)?.ok_or_else(|| Error::Usage("weights needs --weight".into()))?;
    let x = match x {
        Some(s) => g.parse_element(s)?,
        None => g.generators()[0].clone(),
    };
    let grs = grs_diagnostic(&w, &g, &x, *n)?;
    let ugrs = ugrs_diagnostic(&w, &g, *n)?;
    let ratio = ratio_condition(&w, &g, *ratio_n, *ratio_bound)?;
    let v = induced_weight_v(&w, &g, *v_n)?;
    emit(
        out,
        "weights.json",
        &json!({
            "group": g.kind().to_string(),
            "weight": w.to_string(),
            "grs": grs,
            "ugrs": ugrs,
            "ratio": ratio,
            "v": v.values,
        }),
    )
}

fn cmd_verify(common: &Common, level: Level, out: Option<&Path>) -> Result<()> {
    let g = make_group(common, 0)?;
    let cases = match level {
        Level::Quick => 10,
        Level::Full => 50,
    };
    let report = verify_group::<f64>(&g, common.seed, cases)?;
    emit(out, "verify.json", &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<_> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
        Err(Error::CheckFailed(failed.join(", ")))
    }
}

fn spec_of(a: &InvertArgs) -> Result<TestMatrixSpec> {
    let shape = match a.shape {
        Shape::Geometric => EnvelopeShape::Geometric { rate: a.rate },
        Shape::Polynomial => EnvelopeShape::Polynomial { s: a.s },
    };
    let phases = match a.phases {
        Phases::Random => PhaseScheme::Random,
        Phases::Positive => PhaseScheme::Positive,
        Phases::Toeplitz => PhaseScheme::Toeplitz,
    };
    let mut spec = TestMatrixSpec::new(shape, a.support, a.mass)
        .with_identity(a.identity)
        .with_phases(phases)
        .hermitian(a.hermitian);
    for o in &a.offsets {
        let (e, v) = o
            .rsplit_once('=')
            .ok_or_else(|| Error::Usage(format!("offset '{o}' is not element=value")))?;
        let value = v.trim().parse().map_err(|_| Error::Parse(format!("offset value '{v}'")))?;
        spec.offsets.push(Offset {
            element: e.trim().to_string(),
            value,
        });
    }
    Ok(spec)
}

fn cmd_invert(common: &Common, a: &InvertArgs, out: Option<&Path>) -> Result<()> {
    let rmax = *a.radii.iter().max().unwrap();
    let g = make_group(common, 2 * rmax + a.support)?;
    g.require_hypotheses()?;
    let spec = spec_of(a)?;
    let m = make_test_matrix::<f64>(&g, &spec, common.seed, rmax)?;
    let mut opts = StudyOptions::new(&a.radii);
    opts.margin = a.margin;
    opts.jobs = common.jobs;
    let off = m.sub(&CdMatrix::identity(&g, rmax)?)?.cd_norm();
    let (report, envelopes) = match weight(common)? {
        Some(w) => {
            let (r, e) = weighted_inverse_check(&m, &w, &opts)?;
            (serde_json::to_value(r)?, e)
        }
        None => {
            let s = study_matrix(&m, &opts)?;
            (serde_json::to_value(s.report)?, s.envelopes)
        }
    };
    if let Some(dir) = out {
        for (r, e) in a.radii.iter().zip(&envelopes) {
            e.write_curve_csv(fs::File::create(dir.join(format!("envelope_r{r}.csv")))?)?;
        }
    }
    let neumann_bound = (off < 1.0).then(|| 1.0 / (1.0 - off));
    emit(
        out,
        "report.json",
        &json!({
            "spec": spec,
            "seed": common.seed,
            "cd_norm_a": m.cd_norm(),
            "cd_norm_off_identity": off,
            "neumann_bound": neumann_bound,
            "study": report,
        }),
    )
}

fn cmd_spectral(common: &Common, a: &SpectralArgs, out: Option<&Path>) -> Result<()> {
    let kind: GroupKind = common.group.parse()?;
    let section = a.section.unwrap_or(match kind {
        GroupKind::Lattice(1) => 200,
        GroupKind::Lattice(_) => 12,
        _ => 5,
    });
    let cols = section + 20;
    let g = make_group(common, cols + 2)?;
    g.require_hypotheses()?;
    let (f, input) = match (&a.toeplitz, &a.shift) {
        (Some(c), _) => {
            if kind != GroupKind::Lattice(1) {
                return Err(Error::Usage("--toeplitz needs --group Z1".into()));
            }
            let mut f = CdMatrix::<f64>::zero(&g, cols, Extent::Window)?;
            for (k, &v) in c.iter().enumerate() {
                let s = CdMatrix::shift(&g, &Element::new(&[k as i64]), cols)?;
                f = f.add_scaled(&s, v.into())?;
            }
            (f, format!("toeplitz {c:?}"))
        }
        (None, Some(x)) => {
            let x = g.parse_element(x)?;
            (CdMatrix::shift(&g, &x, cols)?, format!("shift {x}"))
        }
        (None, None) => {
            let spec = TestMatrixSpec::new(EnvelopeShape::Geometric { rate: 0.5 }, 1, 1.0);
            (make_test_matrix::<f64>(&g, &spec, common.seed, cols)?, format!("random seed {}", common.seed))
        }
    };
    let opts = PowerOptions {
        max_iters: a.max_iters,
        tol: a.tol,
        seed: common.seed,
    };
    let rep = check_normid(&f, &g.ball(section)?, a.kmax, opts)?;
    emit(
        out,
        "spectral.json",
        &json!({
            "group": g.kind().to_string(),
            "input": input,
            "section_radius": section,
            "opnorm_squared": rep.opnorm * rep.opnorm,
            "report": rep,
        }),
    )
}

fn cmd_intertwine(common: &Common, cases: usize, out: Option<&Path>) -> Result<()> {
    let g = make_group(common, 0)?;
    let r = intertwining_batch::<f64>(&g, common.seed, cases)?;
    emit(out, "intertwine.json", &json!({"group": g.kind().to_string(), "seed": common.seed, "result": r}))?;
    if r.passed {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!("intertwining error {}", r.max_error)))
    }
}

fn run(cli: &Cli) -> Result<()> {
    let out = cli.common.out.as_deref();
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join("config.json"), cli)?;
    }
    let c = &cli.common;
    match &cli.command {
        Command::Ball { n } => cmd_ball(c, *n, out),
        w @ Command::Weights { .. } => cmd_weights(c, w, out),
        Command::Verify { level } => cmd_verify(c, *level, out),
        Command::Invert(a) => cmd_invert(c, a, out),
        Command::Spectral(a) => cmd_spectral(c, a, out),
        Command::Intertwine { cases } => cmd_intertwine(c, *cases, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.category().code() as u8)
        }
    }
}
