use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypfq::backend::{Backend, BackendKind};
use hypfq::characters::Character;
use hypfq::error::{ParseError, VerifyError};
use hypfq::field::{FieldElement, FiniteField};
use hypfq::hypergeometric::{fstar_char_sum, fstar_point_count, hyp2f1, FStarForm};
use hypfq::input::{parse_character, parse_element, parse_field, parse_field_list};
use hypfq::sums::SumContext;
use hypfq::verify::{self, IdentityId, IdentityReport, IdentitySweep, SweepFilter, JOBS_ENV};

const DEFAULT_FIELDS: &str = "5,9,13,17,25,27,29";

#[derive(Parser)]
#[command(name = "hypfq", version, about = "Hypergeometric functions over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single character sum or hypergeometric value
    Eval {
        #[command(subcommand)]
        function: EvalFunction,
    },
    /// Sweep identities over every admissible parameter tuple
    Verify(VerifyArgs),
    /// Print the modulus, generator and optionally the tables of a field
    FieldInfo {
        /// Field: an odd prime power q or "p^n"
        #[arg(long)]
        field: String,
        /// Include the power and trace tables
        #[arg(long)]
        tables: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for BackendKind {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => BackendKind::Exact,
            BackendArg::Float => BackendKind::Float,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Char,
    Point,
}

impl From<FormArg> for FStarForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Char => FStarForm::CharSum,
            FormArg::Point => FStarForm::PointCount,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Field: an odd prime power q or "p^n"
    #[arg(long)]
    field: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum EvalFunction {
    /// Gauss sum G(A)
    Gauss {
        #[command(flatten)]
        common: Common,
        /// Character: exponent j or eps|phi|chi4|chi4bar
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Jacobi sum J(A, B)
    Jacobi {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Binomial coefficient (A over B)
    Binomial {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// 2F1(A, B; C | x)
    #[command(name = "2f1")]
    Hyp2F1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Element: code in [0, q), negative integer, or g^k
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// F*(C, D; x)
    Fstar {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Defining character sum or point-count form
        #[arg(long, value_enum, default_value_t = FormArg::Point)]
        form: FormArg,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to sweep (thm3 runs both quartic characters)
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    identity: Option<String>,
    /// Sweep every identity
    #[arg(long)]
    all: bool,
    /// Single field
    #[arg(long, conflicts_with = "fields")]
    field: Option<String>,
    /// Comma-separated fields
    #[arg(long)]
    fields: Option<String>,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Worker threads (default from the environment, else all CPUs)
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
    /// Also write the reports to this file
    #[arg(long)]
    report: Option<std::path::PathBuf>,
    /// Largest n for the polynomial identity
    #[arg(long, default_value_t = verify::DEFAULT_N_MAX)]
    n_max: u32,
    /// F* form used by the lemma sweep
    #[arg(long, value_enum, default_value_t = FormArg::Point)]
    form: FormArg,
    /// Record zero wall time so reports are reproducible
    #[arg(long)]
    no_timing: bool,
    /// Restrict the leading character to these exponents
    #[arg(long, value_delimiter = ',')]
    chars: Option<Vec<u32>>,
    /// Restrict the argument to these element codes
    #[arg(long, value_delimiter = ',')]
    elements: Option<Vec<u32>>,
    /// Accepted for symmetry with eval; sweeps always emit JSON
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(ParseError),
    Verify(VerifyError),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Parse(e) => e.fmt(f),
            CliError::Verify(e) => e.fmt(f),
            CliError::Io(e) => e.fmt(f),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Verify(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Eval { function } => eval(function).map(|()| true),
        Command::Verify(args) => run_verify(args),
        Command::FieldInfo { field, tables, format } => field_info(&field, tables, format).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn field_info(descriptor: &str, tables: bool, format: Format) -> Result<(), CliError> {
    let field = parse_field(descriptor)?;
    let dump = field.dump(tables);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&dump).expect("dump serializes")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            w.write_record(["descriptor", "p", "n", "q", "modulus", "generator", "generator_code"])
                .and_then(|()| {
                    w.write_record([
                        dump.descriptor.clone(),
                        dump.p.to_string(),
                        dump.n.to_string(),
                        dump.q.to_string(),
                        join(&dump.modulus),
                        join(&dump.generator),
                        dump.generator_code.to_string(),
                    ])
                })
                .and_then(|()| w.flush().map_err(Into::into))
                .map_err(|e| CliError::Io(e.into()))?;
        }
        Format::Pretty => {
            println!("{field}: p = {}, n = {}, q = {}", dump.p, dump.n, dump.q);
            println!("modulus (low degree first): {:?}", dump.modulus);
            println!("generator: {:?} (code {})", dump.generator, dump.generator_code);
            if let Some(powers) = &dump.power_codes {
                println!("codes of g^k: {powers:?}");
            }
            if let Some(traces) = &dump.trace_by_code {
                println!("traces by code: {traces:?}");
            }
        }
    }
    Ok(())
}

/// A parsed evaluation request, independent of the backend.
enum Request {
    Gauss(Character),
    Jacobi(Character, Character),
    Binomial(Character, Character),
    Hyp2F1(Character, Character, Character, FieldElement),
    FStar(Character, Character, FieldElement, FStarForm),
}

impl Request {
    fn name(&self) -> &'static str {
        match self {
            Request::Gauss(..) => "gauss",
            Request::Jacobi(..) => "jacobi",
            Request::Binomial(..) => "binomial",
            Request::Hyp2F1(..) => "2f1",
            Request::FStar(..) => "fstar",
        }
    }

    fn args(&self, field: &FiniteField) -> BTreeMap<&'static str, Value> {
        let ch = |c: &Character| json!(c.exponent());
        let el = |x: &FieldElement| json!(field.code(*x));
        match self {
            Request::Gauss(a) => [("a", ch(a))].into(),
            Request::Jacobi(a, b) | Request::Binomial(a, b) => [("a", ch(a)), ("b", ch(b))].into(),
            Request::Hyp2F1(a, b, c, x) => [("a", ch(a)), ("b", ch(b)), ("c", ch(c)), ("x", el(x))].into(),
            Request::FStar(c, d, x, form) => {
                [("c", ch(c)), ("d", ch(d)), ("x", el(x)), ("form", json!(form.to_string()))].into()
            }
        }
    }

    fn eval<B: Backend>(&self, ctx: &SumContext<B>) -> B::Value {
        match *self {
            Request::Gauss(a) => ctx.gauss(a).clone(),
            Request::Jacobi(a, b) => ctx.jacobi(a, b),
            Request::Binomial(a, b) => ctx.binomial(a, b),
            Request::Hyp2F1(a, b, c, x) => hyp2f1(ctx, a, b, c, x),
            Request::FStar(c, d, x, FStarForm::CharSum) => fstar_char_sum(ctx, c, d, x),
            Request::FStar(c, d, x, FStarForm::PointCount) => fstar_point_count(ctx, c, d, x),
        }
    }

    fn label(&self) -> String {
        match self {
            Request::Gauss(a) => format!("G({a})"),
            Request::Jacobi(a, b) => format!("J({a}, {b})"),
            Request::Binomial(a, b) => format!("({a} over {b})"),
            Request::Hyp2F1(a, b, c, _) => format!("2F1({a}, {b}; {c} | x)"),
            Request::FStar(c, d, _, _) => format!("F*({c}, {d}; x)"),
        }
    }
}

type RequestBuilder = Box<dyn Fn(&FiniteField) -> Result<Request, ParseError>>;

fn eval(function: EvalFunction) -> Result<(), CliError> {
    let (common, build): (Common, RequestBuilder) = match function {
        EvalFunction::Gauss { common, a } => {
            (common, Box::new(move |f| Ok(Request::Gauss(parse_character(&a, f)?))))
        }
        EvalFunction::Jacobi { common, a, b } => (
            common,
            Box::new(move |f| Ok(Request::Jacobi(parse_character(&a, f)?, parse_character(&b, f)?))),
        ),
        EvalFunction::Binomial { common, a, b } => (
            common,
            Box::new(move |f| Ok(Request::Binomial(parse_character(&a, f)?, parse_character(&b, f)?))),
        ),
        EvalFunction::Hyp2F1 { common, a, b, c, x } => (
            common,
            Box::new(move |f| {
                Ok(Request::Hyp2F1(
                    parse_character(&a, f)?,
                    parse_character(&b, f)?,
                    parse_character(&c, f)?,
                    parse_element(&x, f)?,
                ))
            }),
        ),
        EvalFunction::Fstar { common, c, d, x, form } => (
            common,
            Box::new(move |f| {
                Ok(Request::FStar(parse_character(&c, f)?, parse_character(&d, f)?, parse_element(&x, f)?, form.into()))
            }),
        ),
    };
    let field = Arc::new(parse_field(&common.field)?);
    let request = build(&field)?;
    let (value, approx, exact_text) = match BackendKind::from(common.backend) {
        BackendKind::Exact => {
            let ctx = SumContext::exact(field.clone());
            let v = ctx.to_cyc(&request.eval(&ctx));
            let text = v.to_string();
            (serde_json::to_value(&v).expect("serializes"), v.embed(), Some(text))
        }
        BackendKind::Float => {
            let ctx = SumContext::float(field.clone());
            let v = ctx.backend().approx(&request.eval(&ctx));
            (serde_json::to_value(v).expect("serializes"), v, None)
        }
    };
    let backend = BackendKind::from(common.backend).to_string();
    match common.format {
        Format::Json => {
            let out = json!({
                "function": request.name(),
                "field": field.descriptor(),
                "backend": backend,
                "args": request.args(&field),
                "value": value,
                "approx": approx,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
        }
        Format::Csv => {
            let args = request.args(&field);
            let mut header = vec!["function".to_string(), "field".into(), "backend".into()];
            header.extend(args.keys().map(|k| k.to_string()));
            header.extend(["re".into(), "im".into(), "exact".into()]);
            let mut row = vec![request.name().to_string(), field.descriptor(), backend];
            row.extend(args.values().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }));
            row.extend([approx.re.to_string(), approx.im.to_string(), exact_text.unwrap_or_default()]);
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(&header)
                .and_then(|()| w.write_record(&row))
                .and_then(|()| w.flush().map_err(Into::into))
                .map_err(|e| CliError::Io(e.into()))?;
        }
        Format::Pretty => {
            let mut line = format!("{} over {field}", request.label());
            if let Request::Hyp2F1(.., x) | Request::FStar(_, _, x, _) = &request {
                let _ = write!(line, ", x = {}", field.code(*x));
            }
            match exact_text {
                Some(t) => println!("{line} = {t}\n  ~ {approx}"),
                None => println!("{line} ~ {approx}"),
            }
        }
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<bool, CliError> {
    let identities: Vec<IdentityId> = match (&args.identity, args.all) {
        (Some(name), _) => match name.as_str() {
            "thm3" => vec![IdentityId::Thm3, IdentityId::Thm3Bar],
            other => vec![other.parse()?],
        },
        (None, true) => IdentityId::ALL.to_vec(),
        (None, false) => return Err(CliError::Usage("one of --identity or --all is required".into())),
    };
    let needs_field = identities.iter().any(|id| id.is_field_sweep());
    let fields = match (&args.field, &args.fields) {
        (Some(f), _) => parse_field_list(f)?,
        (None, Some(list)) => parse_field_list(list)?,
        (None, None) if args.all => parse_field_list(DEFAULT_FIELDS)?,
        (None, None) if needs_field => {
            return Err(CliError::Usage("--field or --fields is required for this identity".into()))
        }
        (None, None) => Vec::new(),
    };
    if needs_field && fields.is_empty() {
        return Err(CliError::Usage("no fields given".into()));
    }
    if args.format != Format::Json {
        eprintln!("note: sweeps always emit JSON");
    }
    let jobs = args.jobs.filter(|&j| j > 0).unwrap_or_else(verify::default_jobs);
    let pool = verify::build_pool(jobs)?;
    let filter = SweepFilter { characters: args.chars.clone(), elements: args.elements.clone() };
    let template = |id: IdentityId, (p, n): (u64, u32)| {
        IdentitySweep::new(id, p, n)
            .backend(args.backend.into())
            .filter(filter.clone())
            .form(args.form.into())
            .n_max(args.n_max)
            .timing(!args.no_timing)
    };

    let mut reports: Vec<IdentityReport> = Vec::new();
    for &(p, n) in &fields {
        let field = Arc::new(FiniteField::new(p, n).map_err(ParseError::from)?);
        let field_ids = identities.iter().copied().filter(|id| id.is_field_sweep());
        match BackendKind::from(args.backend) {
            BackendKind::Exact => {
                let ctx = SumContext::exact(field);
                reports.extend(field_ids.map(|id| verify::sweep_in(&ctx, &template(id, (p, n)), &pool)));
            }
            BackendKind::Float => {
                let ctx = SumContext::float(field);
                reports.extend(field_ids.map(|id| verify::sweep_in(&ctx, &template(id, (p, n)), &pool)));
            }
        }
    }
    if identities.contains(&IdentityId::Stanton) {
        reports.push(verify::run_sweep(&template(IdentityId::Stanton, (0, 0)), jobs)?);
    }

    for r in &reports {
        let status = if !r.applicable {
            "n/a"
        } else if r.failed == 0 {
            "ok"
        } else {
            "FAILED"
        };
        eprintln!(
            "{:<16} {:<6} {:<5} tested {:>8} passed {:>8} failed {:>6} skipped {:>8} {}",
            r.identity,
            r.field,
            r.backend,
            r.tested,
            r.passed,
            r.failed,
            r.skipped_total(),
            status
        );
    }
    let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
    if let Some(path) = &args.report {
        std::fs::write(path, format!("{text}\n")).map_err(CliError::Io)?;
    }
    println!("{text}");
    Ok(reports.iter().all(IdentityReport::is_success))
}
