//! plinth: analyze finite transitive permutation groups against the
//! semiprimitivity taxonomy, verify the order / base-size / minimal-degree /
//! fixed-point-ratio / chief-length bounds, and reproduce the
//! exceptional-group tables.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use plinth_core::atlas::{construct, parse_group_expr};
use plinth_core::covers::numerical_lemma_checks;
use plinth_core::genfile::parse_generator_file;
use plinth_core::group::PermGroup;
use plinth_core::report::{
    analyze, reproduce_tables, run_corpus, verify_bounds, AnalysisReport, BoundStatus,
    BoundVerdict, Config, CorpusReport, TableReport, DEFAULT_CORPUS,
};
use plinth_core::structure::normal_lattice;

#[derive(Parser)]
#[command(name = "plinth", version, about = "permutation-group semiprimitivity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on full element enumeration.
    #[arg(long, global = true)]
    census_cap: Option<u64>,
    /// Per-group budget for the exact base-size search, in seconds.
    #[arg(long, global = true)]
    time_budget: Option<u64>,
    /// Seed for sample(...) corpus directives.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one group (expression or generator file).
    Analyze { target: String },
    /// Just the bound verdicts for one group.
    VerifyBounds { target: String },
    /// Recompute the exceptional-group table rows and compare.
    ReproduceTables,
    /// Analyze every entry of a corpus config file ("default" for the
    /// built-in corpus).
    Corpus { config: PathBuf },
    /// Check the two arithmetic lemmas exhaustively.
    Lemmas,
}

fn load_group(target: &str) -> Result<(String, PermGroup), String> {
    if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| e.to_string())?;
        let group = parse_generator_file(&text).map_err(|e| e.to_string())?;
        Ok((target.to_string(), group))
    } else {
        let expr = parse_group_expr(target).map_err(|e| e.to_string())?;
        let group = construct(&expr).map_err(|e| e.to_string())?;
        Ok((expr.to_string(), group))
    }
}

fn print_bounds_text(bounds: &[BoundVerdict]) {
    for v in bounds {
        let status = match v.status {
            BoundStatus::Pass => "pass",
            BoundStatus::Fail => "FAIL",
            BoundStatus::Exempt => "exempt",
            BoundStatus::Informational => "informational",
        };
        let reason = v
            .exemption_reason
            .as_ref()
            .map(|r| format!(" ({})", r))
            .unwrap_or_default();
        println!(
            "  {:<15} {:<12} lhs = {} vs rhs = {}{}",
            v.bound_id.as_str(),
            status,
            v.lhs,
            v.rhs,
            reason
        );
    }
}

fn print_report_text(report: &AnalysisReport) {
    println!("{}", report.name);
    println!("  degree {}  order {}", report.degree, report.order);
    println!("  taxonomy: {}", report.taxonomy.as_str());
    if !report.antiplinths.is_empty() {
        let parts: Vec<String> = report
            .antiplinths
            .iter()
            .map(|a| format!("order {} with {} orbits", a.order, a.orbit_count))
            .collect();
        println!("  antiplinths: {}", parts.join("; "));
    }
    println!(
        "  b(G) = {} (base {:?})  m(G) = {}  fpr = {}  chief length {}",
        report.metrics.base_size,
        report.metrics.base_witness,
        report.metrics.minimal_degree,
        report.metrics.fpr,
        report.metrics.chief_length
    );
    if let Some(c) = &report.classification {
        println!(
            "  classification: theorem case {} -> table {} row {} (antiplinth order {}, {} blocks)",
            c.theorem_case, c.table, c.row, c.antiplinth_order, c.block_count
        );
    }
    if !report.bounds.is_empty() {
        println!("  bounds:");
        print_bounds_text(&report.bounds);
    }
}

fn report_csv(reports: &[&AnalysisReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "degree",
        "order",
        "taxonomy",
        "base_size",
        "minimal_degree",
        "fpr",
        "chief_length",
        "bounds_failed",
        "classification",
    ])
    .unwrap();
    for r in reports {
        let failed = r
            .bounds
            .iter()
            .filter(|v| v.status == BoundStatus::Fail)
            .map(|v| v.bound_id.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let class = r
            .classification
            .as_ref()
            .map(|c| format!("table {} row {}", c.table, c.row))
            .unwrap_or_default();
        w.write_record([
            r.name.as_str(),
            &r.degree.to_string(),
            &r.order,
            r.taxonomy.as_str(),
            &r.metrics.base_size.to_string(),
            &r.metrics.minimal_degree.to_string(),
            &r.metrics.fpr,
            &r.metrics.chief_length.to_string(),
            &failed,
            &class,
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn cmd_analyze(target: &str, config: &Config, format: Format) -> Result<ExitCode, String> {
    let (name, group) = load_group(target)?;
    let report = analyze(&name, &group, config).map_err(|e| e.to_string())?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => print!("{}", report_csv(&[&report])),
        Format::Text => print_report_text(&report),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_bounds(target: &str, config: &Config, format: Format) -> Result<ExitCode, String> {
    let (name, group) = load_group(target)?;
    let lattice = normal_lattice(&group, config.census_cap).map_err(|e| e.to_string())?;
    let bounds = verify_bounds(&group, &lattice, config).map_err(|e| e.to_string())?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&bounds).unwrap()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["bound_id", "lhs", "rhs", "status", "exemption_reason"])
                .unwrap();
            for v in &bounds {
                w.write_record([
                    v.bound_id.as_str(),
                    &v.lhs,
                    &v.rhs,
                    &format!("{:?}", v.status).to_lowercase(),
                    v.exemption_reason.as_deref().unwrap_or(""),
                ])
                .unwrap();
            }
            print!("{}", String::from_utf8(w.into_inner().unwrap()).unwrap());
        }
        Format::Text => {
            println!("{}", name);
            print_bounds_text(&bounds);
        }
    }
    let failed = bounds.iter().any(|v| v.status == BoundStatus::Fail);
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn print_tables_text(report: &TableReport) {
    println!(
        "{:<12} {:>9} {:>7} {:>5} {:>5}   {:>9} {:>7} {:>5} {:>5}   {}",
        "group", "order", "degree", "b", "m", "order", "degree", "b", "m", "verdict"
    );
    println!("{:<12} {:-^29}   {:-^29}", "", " expected ", " computed ");
    for row in &report.rows {
        println!(
            "{:<12} {:>9} {:>7} {:>5} {:>5}   {:>9} {:>7} {:>5} {:>5}   {}",
            row.name,
            row.expected.0,
            row.expected.1,
            row.expected.2,
            row.expected.3,
            row.computed.0,
            row.computed.1,
            row.computed.2,
            row.computed.3,
            if row.matches { "match" } else { "MISMATCH" }
        );
        for m in &row.mismatches {
            println!("{:<12}   {}", "", m);
        }
    }
}

fn cmd_reproduce_tables(config: &Config, format: Format) -> Result<ExitCode, String> {
    let report = reproduce_tables(config).map_err(|e| e.to_string())?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "name", "expected_order", "expected_degree", "expected_b", "expected_m",
                "computed_order", "computed_degree", "computed_b", "computed_m", "matches",
            ])
            .unwrap();
            for r in &report.rows {
                w.write_record([
                    r.name.as_str(),
                    &r.expected.0.to_string(),
                    &r.expected.1.to_string(),
                    &r.expected.2.to_string(),
                    &r.expected.3.to_string(),
                    &r.computed.0.to_string(),
                    &r.computed.1.to_string(),
                    &r.computed.2.to_string(),
                    &r.computed.3.to_string(),
                    &r.matches.to_string(),
                ])
                .unwrap();
            }
            print!("{}", String::from_utf8(w.into_inner().unwrap()).unwrap());
        }
        Format::Text => print_tables_text(&report),
    }
    Ok(if report.all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_corpus(path: &Path, config: &Config, format: Format) -> Result<ExitCode, String> {
    let text = if path.as_os_str() == "default" {
        DEFAULT_CORPUS.to_string()
    } else {
        std::fs::read_to_string(path).map_err(|e| e.to_string())?
    };
    let report: CorpusReport = run_corpus(&text, config);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            let reports: Vec<&AnalysisReport> =
                report.entries.iter().filter_map(|e| e.report.as_ref()).collect();
            print!("{}", report_csv(&reports));
            for e in report.entries.iter().filter(|e| e.error.is_some()) {
                eprintln!("error: {}: {}", e.name, e.error.as_ref().unwrap());
            }
        }
        Format::Text => {
            for entry in &report.entries {
                match (&entry.report, &entry.error) {
                    (Some(r), _) => {
                        print_report_text(r);
                        println!();
                    }
                    (None, Some(e)) => println!("{}\n  error: {}\n", entry.name, e),
                    _ => unreachable!(),
                }
            }
            println!(
                "summary: {} groups, {} errors; verdicts: {} pass, {} fail, {} exempt, {} informational",
                report.summary.groups,
                report.summary.errors,
                report.summary.pass,
                report.summary.fail,
                report.summary.exempt,
                report.summary.informational
            );
        }
    }
    Ok(if report.any_fail {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_lemmas(format: Format) -> ExitCode {
    let report = numerical_lemma_checks();
    let ok = report.factorial_holds && report.sqrt_exceptions_expected;
    match format {
        Format::Json | Format::Csv => {
            println!(
                "{}",
                serde_json::json!({
                    "factorial_pairs": report.factorial_pairs,
                    "factorial_holds": report.factorial_holds,
                    "sqrt_pairs": report.sqrt_pairs,
                    "sqrt_exceptions": report.sqrt_exceptions,
                    "sqrt_exceptions_expected": report.sqrt_exceptions_expected,
                })
            );
        }
        Format::Text => {
            println!(
                "m*r! < 4^(m r) on 5 <= r < m <= 60: {} pairs, {}",
                report.factorial_pairs,
                if report.factorial_holds { "all hold" } else { "VIOLATED" }
            );
            println!(
                "a(sqrt(b)-1) >= sqrt(a b)-1 on 2 <= a,b <= 100: {} pairs, exceptions {:?} ({})",
                report.sqrt_pairs,
                report.sqrt_exceptions,
                if report.sqrt_exceptions_expected {
                    "exactly b=2, a<=5"
                } else {
                    "UNEXPECTED SET"
                }
            );
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = Config {
        // exactness has a price at degree 128; keep a generous default budget
        base_size_budget: Some(Duration::from_secs(600)),
        ..Config::default()
    };
    if let Some(cap) = cli.census_cap {
        config.census_cap = cap;
    }
    if let Some(seconds) = cli.time_budget {
        config.base_size_budget = Some(Duration::from_secs(seconds));
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let outcome = match &cli.command {
        Command::Analyze { target } => cmd_analyze(target, &config, cli.format),
        Command::VerifyBounds { target } => cmd_verify_bounds(target, &config, cli.format),
        Command::ReproduceTables => cmd_reproduce_tables(&config, cli.format),
        Command::Corpus { config: path } => cmd_corpus(path, &config, cli.format),
        Command::Lemmas => Ok(cmd_lemmas(cli.format)),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}
