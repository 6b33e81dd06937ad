use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tracecodes::curves::{self, CurveSpec};
use tracecodes::gf::Fe;
use tracecodes::klapper::{rank_distribution_l3l, rank_distribution_monomial, tally_family};
use tracecodes::linpoly::{FamilySpec, LinearizedPoly};
use tracecodes::spectra::{
    self, brute_spectrum, cwe_brute, CodeSpec, CompressedCwe, Spectrum, Variant, DEFAULT_BUDGET,
};
use tracecodes::trace::TraceCtx;
use tracecodes::verify::{self, VerifyConfig};
use tracecodes::Error;

#[derive(Parser)]
#[command(name = "tracecodes", version, about = "Weight distributions of quadratic trace codes")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight distribution of a code.
    Spectrum(CodeArgs),
    /// Complete weight enumerator of a base code.
    Cwe(CodeArgs),
    /// Artin-Schreier curve point counts.
    Curves(CurveArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Predict,
    Brute,
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Predict => "predict",
            Method::Brute => "brute",
            Method::Both => "both",
        }
    }
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u32,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// mono:L, l3l:L or general:L1,L2,...
    #[arg(long)]
    family: String,
    /// base, 0, 1 or 2.
    #[arg(long, default_value = "base")]
    variant: String,
    /// Monomial codes of variants base and 0 default to one period, length
    /// (q^m - 1)/D; this keeps all q^m - 1 coordinates instead.
    #[arg(long)]
    full_length: bool,
    #[arg(long, value_enum, default_value_t = Method::Predict)]
    method: Method,
    /// Symbol-evaluation budget for brute force.
    #[arg(long, env = "TRACECODES_BUDGET")]
    budget: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveMode {
    /// One curve `y^p - y = x R(x) + beta x`.
    Point,
    /// Every gamma and beta for `R = gamma x^{p^L}`.
    Scan,
    /// Search `<x^{p^L}, x^{p^{3L}}>` for an optimal curve.
    Witness,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: u32,
    /// mono:L, l3l:L or general:L1,L2,...
    #[arg(long)]
    family: String,
    #[arg(long, value_enum, default_value_t = CurveMode::Point)]
    mode: CurveMode,
    /// Coefficients of R, one per family exponent: `0`, `1` or `a^K`.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<String>,
    #[arg(long, default_value = "0")]
    beta: String,
    /// Pair budget for the witness search.
    #[arg(long, env = "TRACECODES_BUDGET")]
    budget: Option<u128>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Pair budget for the two-term sweeps; omitted means exhaustive.
    #[arg(long, env = "TRACECODES_BUDGET")]
    budget: Option<u128>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Perturb one predicted table row.
    #[arg(long)]
    perturb: bool,
    /// Criteria to run (default: all twelve).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
}

/// Exit statuses: 0 pass, 1 usage, 2 mismatch, 3 budget.
enum Failure {
    Usage(String),
    Mismatch(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Mismatch(_) => Failure::Mismatch(e.to_string()),
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Output {
    json: Value,
    csv: String,
    text: String,
    /// Verification outcome for exit status.
    pass: bool,
}

fn parse_family(p: u32, s: u32, m: u32, text: &str) -> Run<FamilySpec> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("family {text:?}: expected mono:L, l3l:L or general:L1,...")))?;
    let nums = rest
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("family {text:?}: {e}")))?;
    let fam = match (kind, nums.as_slice()) {
        ("mono", [l]) => FamilySpec::monomial(p, s, m, *l)?,
        ("l3l", [l]) => {
            if s != 1 {
                return Err(Failure::Usage("l3l families are defined over a prime base field (s = 1)".into()));
            }
            FamilySpec::l3l(p, m, *l)?
        }
        ("general", ls) => FamilySpec::new(p, s, m, ls.to_vec())?,
        _ => return Err(Failure::Usage(format!("family {text:?}: expected mono:L, l3l:L or general:L1,..."))),
    };
    Ok(fam)
}

fn parse_element(ctx: &TraceCtx, text: &str) -> Run<Fe> {
    let f = ctx.field();
    match text.trim() {
        "0" => Ok(Fe::ZERO),
        "1" => Ok(Fe::ONE),
        t => {
            let k = t
                .strip_prefix("a^")
                .and_then(|k| k.parse::<i64>().ok())
                .ok_or_else(|| Failure::Usage(format!("element {t:?}: expected 0, 1 or a^K")))?;
            Ok(f.exp(k))
        }
    }
}

fn field_json(ctx: &TraceCtx) -> Value {
    let f = ctx.field();
    json!({
        "p": ctx.p(),
        "s": ctx.s(),
        "m": ctx.m(),
        "modulus": f.modulus(),
        "alpha": f.coeffs(f.alpha()),
    })
}

fn spectrum_json(s: &Spectrum) -> Value {
    Value::Array(s.rows().into_iter().map(|(w, a)| json!({ "w": w, "A": a })).collect())
}

fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("weight,frequency\n");
    for (w, a) in s.rows() {
        out.push_str(&format!("{w},{a}\n"));
    }
    out
}

fn code_spec(args: &CodeArgs) -> Run<(TraceCtx, CodeSpec)> {
    let FieldArgs { p, s, m } = args.field;
    let family = parse_family(p, s, m, &args.family)?;
    let variant: Variant = args.variant.parse()?;
    let shortened = family.exponents.len() == 1 && !variant.has_beta() && !args.full_length;
    let spec = CodeSpec::new(family, variant, shortened)?;
    Ok((TraceCtx::new(p, s, m)?, spec))
}

/// Closed form, or for families without one, the general tables fed by an
/// exhaustive rank tally.
fn predicted_spectrum(ctx: &TraceCtx, spec: &CodeSpec) -> Run<Spectrum> {
    match spectra::predict(spec) {
        Ok(p) => Ok(p.spectrum),
        Err(Error::Invalid(_)) if !spec.shortened => {
            let fam = &spec.family;
            let dist = tally_family(ctx, fam)?;
            Ok(spectra::predict_general(fam.q(), fam.m, &dist, spec.variant)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_spectrum(args: &CodeArgs) -> Run<Output> {
    let (ctx, spec) = code_spec(args)?;
    let budget = args.budget.unwrap_or(DEFAULT_BUDGET);
    let q = spec.family.q();
    let predicted = match args.method {
        Method::Brute => None,
        _ => Some(predicted_spectrum(&ctx, &spec)?),
    };
    let brute = match args.method {
        Method::Predict => None,
        _ => Some(brute_spectrum(&ctx, &spec, budget)?.spectrum),
    };
    let matched = match (&predicted, &brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let shown = brute.as_ref().or(predicted.as_ref()).expect("one method ran");
    let params = shown.params(q)?;
    let json = json!({
        "field": field_json(&ctx),
        "code": {
            "family": spec.family.describe(),
            "variant": spec.variant.label(),
            "shortened": spec.shortened,
            "n": params.n,
            "k": params.k,
            "d": params.d,
        },
        "spectrum": spectrum_json(shown),
        "method": args.method.name(),
        "match": matched,
    });
    let mut text = format!(
        "{} variant {} over F_{}^{}: {}\n",
        spec.family.describe(),
        spec.variant.label(),
        q,
        spec.family.m,
        params
    );
    for (w, a) in shown.rows() {
        text.push_str(&format!("  A_{w} = {a}\n"));
    }
    if let Some(m) = matched {
        text.push_str(if m { "predict and brute agree\n" } else { "predict and brute DIFFER\n" });
    }
    if matched == Some(false) {
        let mut diff = String::new();
        let (a, b) = (predicted.as_ref().unwrap(), brute.as_ref().unwrap());
        let weights: std::collections::BTreeSet<u64> =
            a.rows().iter().chain(b.rows().iter()).map(|r| r.0).collect();
        for w in weights {
            let (x, y) = (a.counts.get(&w).copied().unwrap_or(0), b.counts.get(&w).copied().unwrap_or(0));
            if x != y {
                diff.push_str(&format!("  w = {w}: predicted {x}, brute {y}\n"));
            }
        }
        text.push_str(&diff);
    }
    Ok(Output { json, csv: spectrum_csv(shown), text, pass: matched != Some(false) })
}

fn predicted_cwe(ctx: &TraceCtx, spec: &CodeSpec) -> Run<CompressedCwe> {
    let fam = &spec.family;
    let q = fam.q();
    let m = fam.m;
    Ok(match fam.exponents.as_slice() {
        [l] if spec.shortened => spectra::cwe_monomial(q, m, *l)?,
        [l] => spectra::cwe_general(q, m, &rank_distribution_monomial(q, m, *l)?)?,
        [a, b] if *b == 3 * *a && fam.s == 1 => {
            let c = spectra::cwe_l3l(fam.p, m, *a)?;
            debug_assert_eq!(c, spectra::cwe_general(q, m, &rank_distribution_l3l(fam.p, m, *a)?)?);
            c
        }
        _ => spectra::cwe_general(q, m, &tally_family(ctx, fam)?)?,
    })
}

fn cmd_cwe(args: &CodeArgs) -> Run<Output> {
    let (ctx, spec) = code_spec(args)?;
    if spec.variant != Variant::Base {
        return Err(Failure::Usage("complete weight enumerators are computed for the base variant".into()));
    }
    let budget = args.budget.unwrap_or(DEFAULT_BUDGET);
    let predicted = match args.method {
        Method::Brute => None,
        _ => Some(predicted_cwe(&ctx, &spec)?),
    };
    let brute = match args.method {
        Method::Predict => None,
        _ => Some(cwe_brute(&ctx, &spec, budget)?.compress()?),
    };
    let matched = match (&predicted, &brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let shown = brute.as_ref().or(predicted.as_ref()).expect("one method ran");
    let terms: Vec<Value> = shown.terms.iter().map(|t| json!({ "a": t.a, "b": t.b, "count": t.count })).collect();
    let json = json!({
        "field": field_json(&ctx),
        "code": {
            "family": spec.family.describe(),
            "variant": spec.variant.label(),
            "shortened": spec.shortened,
            "n": shown.n,
        },
        "cwe": terms,
        "method": args.method.name(),
        "match": matched,
    });
    let mut csv = String::from("zero_count,nonzero_symbol_count,frequency\n");
    let mut text = format!("complete weight enumerator, n = {} (z0^a times each nonzero symbol^b):\n", shown.n);
    for t in &shown.terms {
        csv.push_str(&format!("{},{},{}\n", t.a, t.b, t.count));
        text.push_str(&format!("  {} z0^{} z*^{}\n", t.count, t.a, t.b));
    }
    if let Some(m) = matched {
        text.push_str(if m { "predict and brute agree\n" } else { "predict and brute DIFFER\n" });
    }
    Ok(Output { json, csv, text, pass: matched != Some(false) })
}

fn cmd_curves(args: &CurveArgs) -> Run<Output> {
    let ctx = TraceCtx::new(args.p, 1, args.m)?;
    let fam = parse_family(args.p, 1, args.m, &args.family)?;
    let field = field_json(&ctx);
    match args.mode {
        CurveMode::Point => {
            if args.coeffs.len() != fam.exponents.len() {
                return Err(Failure::Usage(format!(
                    "{} coefficients given for {} exponents",
                    args.coeffs.len(),
                    fam.exponents.len()
                )));
            }
            let coeffs = args.coeffs.iter().map(|c| parse_element(&ctx, c)).collect::<Run<Vec<_>>>()?;
            let r = LinearizedPoly::new(1, fam.exponents.clone(), coeffs)?;
            let beta = parse_element(&ctx, &args.beta)?;
            let rep = curves::optimality_status(&ctx, &CurveSpec::new(r, beta))?;
            let json = json!({ "field": field, "family": fam.describe(), "curve": rep });
            let csv = format!(
                "points,genus,hw_lo,hw_hi,status\n{},{},{},{},{}\n",
                rep.points,
                opt(rep.genus),
                opt(rep.hw_lo),
                opt(rep.hw_hi),
                status_name(rep.status)
            );
            let text = format!("{} points, genus {}, {}\n", rep.points, opt(rep.genus), status_name(rep.status));
            Ok(Output { json, csv, text, pass: true })
        }
        CurveMode::Scan => {
            let [ell] = fam.exponents.as_slice() else {
                return Err(Failure::Usage("scan needs a mono:L family".into()));
            };
            let scan = curves::scan_monomial(&ctx, *ell)?;
            let json = json!({ "field": field, "family": fam.describe(), "scan": scan });
            let mut csv = String::from("branch,points,betas\n");
            let mut text = String::new();
            for b in &scan.branches {
                for (pts, n) in &b.observed {
                    csv.push_str(&format!("{},{pts},{n}\n", b.branch.label()));
                }
                text.push_str(&format!(
                    "{}: {} gammas, points {:?}, (minimal, maximal) betas {:?}, {}\n",
                    b.branch.label(),
                    b.gammas,
                    b.observed,
                    b.optimal_observed,
                    if b.ok { "matches" } else { "DIFFERS" }
                ));
            }
            Ok(Output { json, csv, text, pass: scan.ok })
        }
        CurveMode::Witness => {
            let [ell, _] = fam.exponents.as_slice() else {
                return Err(Failure::Usage("witness needs an l3l:L family".into()));
            };
            let w = curves::l3l_optimal_witness(&ctx, *ell, args.budget.unwrap_or(u128::MAX))?;
            let ok = w.recount == w.report.points;
            let json = json!({ "field": field, "family": fam.describe(), "witness": w });
            let csv = format!(
                "gamma1,gamma2,beta,points,status\n{:?},{:?},{:?},{},{}\n",
                w.gamma1,
                w.gamma2,
                w.beta,
                w.report.points,
                status_name(w.report.status)
            )
            .replace(", ", " ");
            let text = format!(
                "gamma1 {:?} gamma2 {:?} beta {:?}: {} points, {} (recount {})\n",
                w.gamma1,
                w.gamma2,
                w.beta,
                w.report.points,
                status_name(w.report.status),
                w.recount
            );
            Ok(Output { json, csv, text, pass: ok })
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn status_name(s: curves::Status) -> &'static str {
    match s {
        curves::Status::Maximal => "maximal",
        curves::Status::Minimal => "minimal",
        curves::Status::Interior => "interior",
        curves::Status::Degenerate => "degenerate",
    }
}

fn cmd_verify(args: &VerifyArgs) -> Run<Output> {
    let cfg = VerifyConfig {
        budget: DEFAULT_BUDGET,
        pair_budget: args.budget,
        samples: args.samples,
        seed: args.seed,
        perturb: args.perturb,
    };
    let ids = if args.criteria.is_empty() { verify::ALL.to_vec() } else { args.criteria.clone() };
    let report = verify::run(&cfg, &ids)?;
    let json = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut csv = String::from("criterion,name,pass,sampled\n");
    let mut text = String::new();
    for c in &report.criteria {
        csv.push_str(&format!("{},{},{},{}\n", c.id, c.name, c.pass, c.sampled));
        text.push_str(&c.line());
        text.push('\n');
    }
    Ok(Output { json, csv, text, pass: report.pass })
}

fn emit(cli: &Cli, out: &Output) -> Run<()> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).map_err(|e| Failure::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => out.csv.clone(),
        Format::Text => out.text.clone(),
    };
    match &cli.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn run(cli: &Cli) -> Run<bool> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let out = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a)?,
        Command::Cwe(a) => cmd_cwe(a)?,
        Command::Curves(a) => cmd_curves(a)?,
        Command::Verify(a) => cmd_verify(a)?,
    };
    emit(cli, &out)?;
    Ok(out.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget: {msg}");
            ExitCode::from(3)
        }
    }
}
