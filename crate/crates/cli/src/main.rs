mod config;
mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ulrich_core::classifier::{self, UlrichModel};
use ulrich_core::products::{self, DeductionRecord};
use ulrich_core::ring::{Ring, RingDescriptor};
use ulrich_core::spinor::{spinor_rank, Spinor, SpinorEngine, SpinorKind};
use ulrich_core::{expr, suites, BundleClass, VerificationReport};

use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "ulrich",
    version,
    about = "Chern classes, numerical dimension and bigness of Ulrich bundles"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Md, global = true)]
    format: Format,
    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,
    /// JSON config file with `n_max` and `column_width`
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology ring arithmetic
    #[command(subcommand)]
    Ring(RingCmd),
    /// Bundle calculus on a BundleClass JSON document
    Bundle(BundleArgs),
    /// Spinor bundles on quadrics
    #[command(subcommand)]
    Spinor(SpinorCmd),
    /// Ulrich bundles on quadrics
    #[command(subcommand)]
    Quadric(QuadricCmd),
    /// Verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug)]
struct RingSel {
    /// Quadric Q_n
    #[arg(long, conflicts_with = "multi")]
    quadric: Option<usize>,
    /// Product of projective spaces, e.g. 2,2
    #[arg(long, value_delimiter = ',')]
    multi: Option<Vec<usize>>,
}

impl RingSel {
    fn descriptor(&self) -> Result<RingDescriptor, Failure> {
        match (&self.quadric, &self.multi) {
            (Some(n), None) => Ok(RingDescriptor::quadric(*n)),
            (None, Some(d)) => Ok(RingDescriptor::multi(d)),
            _ => Err(Failure::usage("give exactly one of --quadric or --multi")),
        }
    }
}

#[derive(Subcommand, Debug)]
enum RingCmd {
    /// Evaluate a polynomial in the ring generators
    Eval {
        #[command(flatten)]
        ring: RingSel,
        /// Expression, e.g. "b5*bp5" or "(t1+t2)^4"
        expr: String,
    },
}

#[derive(Args, Debug)]
struct BundleArgs {
    #[command(subcommand)]
    op: BundleOp,
    /// BundleClass JSON file (stdin if absent)
    #[arg(long, short, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BundleOp {
    /// Total Chern class
    Chern,
    /// Dual bundle
    Dual,
    /// Total Segre class
    Segre,
    /// Numerical dimension
    Nu,
    /// Bigness test with witness
    IsBig,
    /// Twist by a line bundle class
    Twist {
        /// Codegree-one expression, e.g. "h" or "t1-t2"
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Whitney sum with a second bundle
    Sum {
        #[arg(long)]
        with: PathBuf,
    },
    /// Bigness certificate terms for the sum with a second bundle
    Certificate {
        #[arg(long)]
        with: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum SpinorCmd {
    /// Chern classes of a spinor bundle
    Chern {
        #[arg(long)]
        n: usize,
        /// s, sprime or sdoubleprime
        #[arg(long)]
        kind: SpinorKind,
        /// Twist by O(1), the Ulrich normalization
        #[arg(long)]
        ulrich_twist: bool,
    },
    /// Numerical dimension of the Ulrich spinor bundles
    NuTable {
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 10)]
        to: usize,
    },
    /// Closure identities of the computed classes
    Identities {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum QuadricCmd {
    /// Non-big Ulrich bundles of bounded rank
    Classify {
        #[arg(long)]
        n: usize,
        /// Maximum rank (default: twice the spinor rank)
        #[arg(long)]
        rmax: Option<usize>,
        /// List every model, not only the non-big ones
        #[arg(long)]
        all: bool,
        /// Compare the non-big models with a reference table
        #[arg(long, value_enum)]
        verify: Option<Golden>,
    },
    /// Numerical dimension of a sum of Ulrich spinor bundles
    Nu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        b: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Golden {
    Table1,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Non-big Ulrich bundles on Q_2 .. Q_12
    Table1 {
        /// Rank bound, in multiples of the spinor rank
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
    /// Chern classes of S' on Q_10
    ChernQ10,
    /// Numerical dimensions of the spinor bundles for n <= 10
    NuTable,
    /// Rank deduction for non-big Ulrich bundles on P^2 x P^2
    Thm4 {
        #[arg(long, default_value_t = 1)]
        rmin: usize,
        #[arg(long, default_value_t = 8)]
        rmax: usize,
    },
    /// Ulrich bundle on P^1 x P^{n-1} with nu = r + 1
    ExampleUn {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Integer checks in the low numerical dimension classification
    Theorem2Cases {
        #[arg(long, default_value_t = 12)]
        m_max: u64,
    },
    /// Where the line criterion forces spinor bundles to be big
    LineCriterion {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 40)]
        to: usize,
    },
}

/// An error with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::usage(e.to_string())
    }
}

struct Out {
    format: Format,
    width: usize,
    text: String,
}

impl Out {
    fn emit<T: Serialize>(&mut self, value: &T, md: impl FnOnce(usize) -> String) -> Result<(), Failure> {
        match self.format {
            Format::Json => {
                self.text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
                self.text.push('\n');
            }
            Format::Md => self.text = md(self.width),
        }
        Ok(())
    }

    fn report(&mut self, r: &VerificationReport) -> Result<u8, Failure> {
        self.emit(r, |_| r.to_markdown())?;
        Ok(u8::from(!r.pass))
    }

    fn record(&mut self, r: &DeductionRecord) -> Result<u8, Failure> {
        self.emit(r, |_| r.to_markdown())?;
        Ok(u8::from(!r.pass))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        format: if cli.json { Format::Json } else { cli.format },
        width: 0,
        text: String::new(),
    };
    match run(cli, &mut out) {
        Ok(code) => {
            print!("{}", out.text);
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<u8, Failure> {
    let cfg = Config::load(cli.config.as_deref()).map_err(Failure::usage)?;
    out.width = cfg.column_width();
    let engine = SpinorEngine::new(cfg.n_max());
    match cli.command {
        Command::Ring(RingCmd::Eval { ring, expr }) => {
            let ring = Ring::with_max_dim(ring.descriptor()?, cfg.n_max().max(16))?;
            let value = expr::eval(&ring, &expr)?;
            let integral = value.integrate();
            out.emit(
                &json!({ "class": value, "integral": serde_json::to_value(Num(&integral)).unwrap() }),
                |w| format!("{}\nintegral: {integral}\n", render::class_table(&expr, &value, w)),
            )?;
            Ok(0)
        }
        Command::Bundle(args) => bundle(args, out),
        Command::Spinor(cmd) => spinor(cmd, &engine, out),
        Command::Quadric(cmd) => quadric(cmd, &engine, out),
        Command::Verify(cmd) => verify(cmd, &engine, out),
    }
}

struct Num<'a>(&'a num_bigint::BigInt);

impl Serialize for Num<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

fn read_bundle(path: Option<&std::path::Path>) -> Result<BundleClass, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid bundle JSON: {e}")))
}

fn bundle(args: BundleArgs, out: &mut Out) -> Result<u8, Failure> {
    let e = read_bundle(args.input.as_deref())?;
    match args.op {
        BundleOp::Chern => out.emit(&e, |w| render::chern_table(&e, w))?,
        BundleOp::Dual => {
            let d = e.dual();
            out.emit(&d, |w| render::chern_table(&d, w))?;
        }
        BundleOp::Segre => {
            let s = e.segre();
            out.emit(&s, |w| render::class_table("segre", &s, w))?;
        }
        BundleOp::Nu => {
            let nu = e.nu();
            out.emit(&json!({ "nu": nu }), |_| format!("nu = {nu}\n"))?;
        }
        BundleOp::IsBig => {
            let v = e.is_big();
            out.emit(&v, |_| format!("big = {}, witness s_n(E*) = {}\n", v.big, v.witness))?;
        }
        BundleOp::Twist { by } => {
            let lambda = expr::eval(e.ring(), &by)?;
            let t = e.twist(&lambda)?;
            out.emit(&t, |w| render::chern_table(&t, w))?;
        }
        BundleOp::Sum { with } => {
            let f = read_bundle(Some(&with))?;
            let s = e.whitney_sum(&f)?;
            out.emit(&s, |w| render::chern_table(&s, w))?;
        }
        BundleOp::Certificate { with } => {
            let f = read_bundle(Some(&with))?;
            let c = e.sum_big_certificate(&f)?;
            let terms: Vec<Num> = c.terms.iter().map(Num).collect();
            let shown: Vec<String> = c.terms.iter().map(ToString::to_string).collect();
            out.emit(&json!({ "big": c.big, "terms": terms }), |_| {
                format!("big = {}, terms [{}]\n", c.big, shown.join(", "))
            })?;
        }
    }
    Ok(0)
}

fn spinor(cmd: SpinorCmd, engine: &SpinorEngine, out: &mut Out) -> Result<u8, Failure> {
    match cmd {
        SpinorCmd::Chern { n, kind, ulrich_twist } => {
            let s = Spinor { kind, ulrich_twist };
            let b = engine.chern(n, s)?;
            let twist = if ulrich_twist { "(1)" } else { "" };
            out.emit(&b, |w| format!("{kind}{twist}, {}", render::chern_table(&b, w)))?;
            Ok(0)
        }
        SpinorCmd::NuTable { from, to } => {
            let rows = engine.nu_table(from, to)?;
            out.emit(&rows, |w| render::nu_table(&rows, w))?;
            Ok(0)
        }
        SpinorCmd::Identities { n } => {
            let r = engine.identities_check(n)?;
            out.report(&r)
        }
    }
}

fn quadric(cmd: QuadricCmd, engine: &SpinorEngine, out: &mut Out) -> Result<u8, Failure> {
    match cmd {
        QuadricCmd::Classify { n, rmax, all, verify } => {
            if n < 2 || n > engine.n_max() {
                return Err(Failure::usage(format!("n must lie in 2..={}", engine.n_max())));
            }
            let r_max = rmax.unwrap_or(2 * spinor_rank(n));
            let rows = if all {
                classifier::classify_all(engine, n, r_max)?
            } else {
                classifier::classify_nonbig(engine, n, r_max)?
            };
            let note = classifier::boundary_pattern(n);
            match out.format {
                Format::Json => out.emit(&rows, |_| String::new())?,
                Format::Md => {
                    let mut text = render::classification(&rows, out.width);
                    if let Some(note) = note {
                        text.push_str(&format!("\nTruncated at rank {r_max}; {note}.\n"));
                    }
                    out.text = text;
                }
            }
            match verify {
                Some(Golden::Table1) => Ok(u8::from(!matches_table1(n, r_max, &rows))),
                None => Ok(0),
            }
        }
        QuadricCmd::Nu { n, a, b } => {
            let model = UlrichModel::new(n, a, b)?;
            let row = classifier::classify_model(engine, &model)?;
            out.emit(&row, |_| format!("nu({model}) = {}\n", row.nu))?;
            Ok(0)
        }
    }
}

/// Compares the non-big rows with the reference sets; a mismatch is
/// described on stderr.
fn matches_table1(n: usize, r_max: usize, rows: &[classifier::ClassificationRow]) -> bool {
    let k = r_max / spinor_rank(n);
    let mut expected = classifier::table1_expected(n, k).unwrap_or_default();
    expected.sort_unstable();
    let mut got: Vec<(usize, usize)> = rows.iter().filter(|r| !r.big).map(|r| (r.a, r.b)).collect();
    got.sort_unstable();
    if got == expected {
        eprintln!("table1 n={n}: match");
        true
    } else {
        eprintln!("table1 n={n}: mismatch, expected {expected:?}, got {got:?}");
        false
    }
}

fn verify(cmd: VerifyCmd, engine: &SpinorEngine, out: &mut Out) -> Result<u8, Failure> {
    match cmd {
        VerifyCmd::Table1 { rmax } => {
            if rmax == 0 {
                return Err(Failure::usage("--rmax must be positive"));
            }
            let hi = engine.n_max().min(12);
            let r = classifier::table1_report(engine, 2, hi, rmax)?;
            out.report(&r)
        }
        VerifyCmd::ChernQ10 => out.report(&suites::chern_q10(engine)?),
        VerifyCmd::NuTable => out.report(&suites::nu_table(engine)?),
        VerifyCmd::Thm4 { rmin, rmax } => {
            if rmin > rmax {
                return Err(Failure::usage("--rmin exceeds --rmax"));
            }
            out.record(&products::theorem3_pipeline(rmin..=rmax)?)
        }
        VerifyCmd::ExampleUn { n, r } => out.record(&products::example43_pipeline(n, r)?),
        VerifyCmd::Theorem2Cases { m_max } => {
            if m_max < 3 {
                return Err(Failure::usage("--m-max must be at least 3"));
            }
            out.report(&classifier::theorem2_case_checks(m_max))
        }
        VerifyCmd::LineCriterion { from, to } => {
            if from < 3 || from > to {
                return Err(Failure::usage("need 3 <= --from <= --to"));
            }
            out.report(&suites::line_criterion_report(engine, from, to)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ulrich_core::Provenance;

    fn out(format: Format) -> Out {
        Out {
            format,
            width: 0,
            text: String::new(),
        }
    }

    #[test]
    fn failing_report_exits_one() {
        let mut r = VerificationReport::new("demo");
        r.compare("x", Provenance::Derived, 1, 1);
        assert_eq!(out(Format::Md).report(&r).unwrap(), 0);
        r.compare("y", Provenance::Derived, 1, 2);
        let mut o = out(Format::Json);
        assert_eq!(o.report(&r).unwrap(), 1);
        assert!(o.text.contains("\"pass\": false"));
    }

    #[test]
    fn failing_record_exits_one() {
        let mut rec = DeductionRecord::new("demo");
        rec.push("step", "1 = 1", "ok", true);
        assert_eq!(out(Format::Md).record(&rec).unwrap(), 0);
        rec.push("step", "1 = 2", "no", false);
        assert_eq!(out(Format::Md).record(&rec).unwrap(), 1);
    }

    #[test]
    fn table1_mismatch_is_detected() {
        let engine = SpinorEngine::new(8);
        let rows = classifier::classify_all(&engine, 4, 4).unwrap();
        assert!(matches_table1(4, 4, &rows));
        let mut wrong = rows.clone();
        wrong.retain(|r| (r.a, r.b) != (1, 1));
        assert!(!matches_table1(4, 4, &wrong));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
