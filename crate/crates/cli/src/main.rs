//! `annihil`: command-line access to annihilators, Stickelberger membership,
//! quadratic fields, residue-degree certificates and parameter scans.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use annihil::catalog::{embedded, Catalog};
use annihil::group_ring::{admissible_sets, annihilation_certificate, theta_of, IntElement};
use annihil::groups::{FiniteGroup, Group};
use annihil::quadratic::{
    element_ideal_factorization, pell_family_insoluble, represents_principal, PellKind, QuadraticField,
};
use annihil::rset::{
    biquadratic_certificate, corollary_checks, minus_class_number, mt1_certificate, mt31_certificate, mt3_certificate,
    mt4_exclusion, real_cyclotomic_rset,
};
use annihil::scan::{append_jsonl, parse_range, run_scan, run_scan_with_workers, ScanJob, ScanKind};
use annihil::stickelberger::{elimination_certificate, generator_lattice, lattice_membership, tabulated_lattice_23};
use annihil::verify::{run_item, verify_paper, VerifyReport, ITEM_COUNT};
use annihil::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "annihil", version, about = "Class-group annihilators and residue-degree certificates")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to FILE; for `scan`, append certificates as JSON lines.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible sets S and the annihilators theta_f(S).
    Theta(ThetaArgs),
    /// Membership in the Stickelberger ideal of Q(zeta_p).
    Stickelberger(StickelbergerArgs),
    /// Quadratic fields.
    #[command(subcommand)]
    Quad(QuadCommand),
    /// Residue-degree set certificates.
    #[command(subcommand)]
    Rset(RsetCommand),
    /// Certificates over a parameter grid.
    Scan(ScanArgs),
    /// Re-derives every quoted numeric claim; exits 1 if any item fails.
    VerifyPaper {
        /// Run a single item.
        #[arg(long)]
        item: Option<u8>,
    },
    /// Embedded tables.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args)]
struct ThetaArgs {
    /// `unitmod:N`, `unitmod-pm:N` (modulo +-1), `cyclic:N`, `q8` or `table:FILE`.
    #[arg(long)]
    group: String,
    #[arg(long)]
    f: usize,
    /// Stop enumerating after this many admissible sets.
    #[arg(long, default_value_t = annihil::group_ring::admissible::DEFAULT_CAP)]
    enumerate_cap: usize,
}

#[derive(Args)]
struct StickelbergerArgs {
    #[arg(long)]
    p: u64,
    /// Element such as `s1+s5` or `2*s3 - s7`.
    #[arg(long)]
    member: String,
}

#[derive(Subcommand)]
enum QuadCommand {
    /// Narrow and wide class numbers of Q(sqrt d).
    ClassNumber {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Whether the principal form represents m.
    Represents {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Insolubility of a Pell family instance.
    Pell {
        #[arg(long, value_enum)]
        kind: PellArg,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Minkowski bound of Q(sqrt d).
    Minkowski {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Decomposition of p in Q(sqrt d).
    Splitting {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u64,
    },
    /// Norm and prime ideal factorization of x + y sqrt d.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        #[arg(long, allow_hyphen_values = true)]
        y: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PellArg {
    #[value(name = "P4")]
    P4,
    #[value(name = "P5")]
    P5,
}

#[derive(Subcommand)]
enum RsetCommand {
    /// Q(zeta_q) for a prime q = 7 mod 8.
    Mt1 {
        #[arg(long)]
        q: u64,
    },
    /// Q(zeta_n)^+ with n = 4 q^m + 1.
    Mt3 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: u64,
    },
    /// Q(zeta_n)^+ with n = 4 q^(2m+1) + 1.
    Mt31 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: u64,
    },
    /// Q(zeta_n)^+ from the Pell families and the residue degree of p.
    Real {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
    },
    /// Q(sqrt u, sqrt 79).
    Biquadratic {
        #[arg(long, allow_hyphen_values = true)]
        u: i64,
    },
    /// Whether f can be excluded from R for Q(zeta_n) or its real subfield.
    Mt4 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        real: bool,
    },
    /// Consequences of given R-set members for the subfields of Q(zeta_l).
    Corollaries {
        #[arg(long)]
        l: u64,
        #[arg(long, value_delimiter = ',')]
        members: Vec<u64>,
        #[arg(long)]
        real: bool,
    },
    /// h_p^- by the Maillet determinant.
    MinusClassNumber {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(value_enum)]
    kind: ScanArg,
    /// Range `lo..hi` (inclusive) or a single value; ignored for mt1.
    #[arg(long, default_value = "1")]
    m: String,
    #[arg(long)]
    q: String,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "ANNIHIL_WORKERS")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanArg {
    Mt1,
    Mt3,
    Mt31,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Every embedded table as JSON.
    Dump,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => match emit(&cli, &value) {
            Ok(()) if ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?,
        Format::Table => render_table(value),
    };
    match (&cli.out, &cli.command) {
        (Some(path), cmd) if !matches!(cmd, Command::Scan(_)) => Ok(std::fs::write(path, text + "\n")?),
        _ => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

/// Flattens JSON into aligned `path  value` lines.
fn render_table(value: &Value) -> String {
    fn walk(prefix: String, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(p, x, rows);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                rows.push((prefix, format!("[{}]", parts.join(", "))));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(format!("{prefix}[{i}]"), x, rows);
                }
            }
            _ => rows.push((prefix, scalar(v))),
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut rows = Vec::new();
    walk(String::new(), value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:width$}  {v}")).collect::<Vec<_>>().join("\n")
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

fn parse_group(spec: &str) -> Result<Group> {
    let number = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad group size in {spec:?}")));
    match spec.split_once(':') {
        Some(("unitmod", n)) => FiniteGroup::units(number(n)?, false),
        Some(("unitmod-pm", n)) => FiniteGroup::units(number(n)?, true),
        Some(("cyclic", n)) => FiniteGroup::cyclic(number(n)? as usize),
        Some(("table", path)) => FiniteGroup::parse_table(&std::fs::read_to_string(path)?),
        None if spec.eq_ignore_ascii_case("q8") => Ok(FiniteGroup::quaternion()),
        _ => Err(Error::Parse(format!("unknown group {spec:?}"))),
    }
}

/// The value to print and whether the command succeeded.
fn run(cli: &Cli) -> Result<(Value, bool)> {
    let cat = embedded();
    let value = match &cli.command {
        Command::Theta(a) => theta(a)?,
        Command::Stickelberger(a) => stickelberger(a)?,
        Command::Quad(q) => quad(q)?,
        Command::Rset(r) => rset(cat, r)?,
        Command::Scan(s) => return scan(cat, s, cli.out.as_ref()).map(|v| (v, true)),
        Command::VerifyPaper { item } => {
            let report = match item {
                Some(id) if (1..=ITEM_COUNT).contains(id) => {
                    let item = run_item(cat, *id);
                    VerifyReport { passed: item.pass, items: vec![item] }
                }
                Some(id) => return Err(Error::Parse(format!("items are numbered 1..={ITEM_COUNT}, got {id}"))),
                None => verify_paper(cat),
            };
            return Ok((to_json(&report)?, report.passed));
        }
        Command::Catalog(CatalogCommand::Dump) => cat.dump(),
    };
    Ok((value, true))
}

fn theta(a: &ThetaArgs) -> Result<Value> {
    let g = parse_group(&a.group)?;
    let sys = admissible_sets(&g, a.f, a.enumerate_cap)?;
    let mut sets = Vec::with_capacity(sys.sets.len());
    for s in &sys.sets {
        let ann = theta_of(&sys, s);
        let cert = annihilation_certificate(&g, a.f, &s.members)?;
        sets.push(json!({
            "set": s.members.iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
            "theta": ann.element.to_text(),
            "witnesses": s.witnesses.iter().map(|w| w.view()).collect::<Vec<_>>(),
            "certificate": cert,
        }));
    }
    Ok(json!({
        "group": g.name(),
        "order": g.order(),
        "f": a.f,
        "decomposition_groups": sys.subgroups.iter().map(|s| s.labels()).collect::<Vec<_>>(),
        "h": sys.h.labels(),
        "search_space": sys.search_space.to_string(),
        "total_admissible": sys.total_admissible,
        "truncated": sys.truncated,
        "sets": sets,
    }))
}

fn stickelberger(a: &StickelbergerArgs) -> Result<Value> {
    let gen = generator_lattice(a.p)?;
    let x = IntElement::parse(&gen.group, &a.member)?;
    let in_gen = lattice_membership(&gen, &x)?;
    let mut out = json!({
        "p": a.p,
        "element": x.to_text(),
        "member": in_gen.member,
        "generator_lattice": in_gen,
    });
    if a.p == 23 {
        let tab = tabulated_lattice_23()?;
        let y = IntElement::from_coeffs(&tab.group, x.to_vec())?;
        out["tabulated_basis"] = json!({
            "rank": tab.rank(),
            "membership": lattice_membership(&tab, &y)?,
            "elimination": elimination_certificate(&tab.generators, &y)?,
        });
    }
    Ok(out)
}

fn quad(q: &QuadCommand) -> Result<Value> {
    match *q {
        QuadCommand::ClassNumber { d } => {
            let k = QuadraticField::new(d)?;
            Ok(json!({"d": k.d, "discriminant": k.disc, "class_number": to_json(&k.class_number()?)?}))
        }
        QuadCommand::Represents { d, m } => to_json(&represents_principal(&QuadraticField::new(d)?, m)?),
        QuadCommand::Pell { kind, n, m } => {
            let kind = match kind {
                PellArg::P4 => PellKind::P4,
                PellArg::P5 => PellKind::P5,
            };
            to_json(&pell_family_insoluble(kind, n, m)?)
        }
        QuadCommand::Minkowski { d } => to_json(&QuadraticField::new(d)?.minkowski_bound()),
        QuadCommand::Splitting { d, p } => to_json(&QuadraticField::new(d)?.splitting_type(p)?),
        QuadCommand::Norm { d, x, y } => to_json(&element_ideal_factorization(&QuadraticField::new(d)?, x, y)?),
    }
}

fn rset(cat: &Catalog, r: &RsetCommand) -> Result<Value> {
    match *r {
        RsetCommand::Mt1 { q } => to_json(&mt1_certificate(cat, q)),
        RsetCommand::Mt3 { m, q } => to_json(&mt3_certificate(cat, m, q)),
        RsetCommand::Mt31 { m, q } => to_json(&mt31_certificate(cat, m, q)),
        RsetCommand::Real { n, p } => to_json(&real_cyclotomic_rset(cat, n, p)?),
        RsetCommand::Biquadratic { u } => to_json(&biquadratic_certificate(cat, u)),
        RsetCommand::Mt4 { n, f, real } => to_json(&mt4_exclusion(cat, n, f, real)?),
        RsetCommand::Corollaries { l, ref members, real } => to_json(&corollary_checks(cat, l, members, real)?),
        RsetCommand::MinusClassNumber { p } => to_json(&minus_class_number(p)?),
    }
}

fn scan(cat: &Catalog, s: &ScanArgs, out: Option<&PathBuf>) -> Result<Value> {
    let kind = match s.kind {
        ScanArg::Mt1 => ScanKind::Mt1,
        ScanArg::Mt3 => ScanKind::Mt3,
        ScanArg::Mt31 => ScanKind::Mt31,
    };
    let job = ScanJob { kind, m: parse_range(&s.m)?, q: parse_range(&s.q)? };
    let report = match s.workers {
        Some(w) => run_scan_with_workers(cat, &job, w)?,
        None => run_scan(cat, &job)?,
    };
    match out {
        Some(path) => {
            let appended = append_jsonl(path, &report.certificates)?;
            let hits: Vec<String> = report.hits().map(|c| c.key()).collect();
            Ok(json!({
                "schema": report.schema,
                "job": report.job,
                "summary": report.summary,
                "hits": hits,
                "file": path.display().to_string(),
                "written": appended.written,
                "skipped": appended.skipped,
            }))
        }
        None => to_json(&report),
    }
}
