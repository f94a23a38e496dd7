//! Batch front end: catalog listing, verification suites, diagram export,
//! mapping application and count tables.

pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use infocap::counting::{cardinality_table, compare_growth, formula_count, FormulaLabel};
use infocap::enumeration::{Enumerator, DEFAULT_BUDGET};
use infocap::lattice::{binary_catalog, build_binary_hasse, build_ternary_chain, export_dot, ternary_catalog, CatalogEntry};
use infocap::mappings::{apply_mapping, catalog as mapping_catalog, invert, mapping_by_name, verify_mapping};
use infocap::relmodel::{parse_instance, write_instance, Symbols};
use infocap::sbchain::{classify_chains, parse_graph, sb_bijection};
use infocap::{Error, Exec, Result};

use verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "infocap", version, about = "Finite-scale checks of schema information capacity")]
pub struct Cli {
    /// Largest search space (in candidate instances) any enumeration may cover.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the built-in schemas.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dominance diagram with its evidence.
    Hasse {
        which: Diagram,
        /// Domain size up to which evidence is checked.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply, invert or check a named mapping.
    Map {
        action: MapAction,
        #[arg(long)]
        name: Option<String>,
        /// Instance file: one tuple per line, `--` comments.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Cardinality formulas of the nine binary classes.
    Counts {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Pointwise comparison of two cardinality formulas.
    Growth {
        a: String,
        b: String,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Chain shapes and matching of a bipartite graph file.
    Chains {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Dot,
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Diagram {
    Binary,
    Ternary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapAction {
    List,
    Apply,
    Invert,
    Verify,
}

/// What a command produced: text for stdout and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, passed: true })
}

fn bad_format(cmd: &str, f: Format) -> Error {
    Error::Usage(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn catalog_line(e: &CatalogEntry) -> String {
    let s = &e.schema;
    let mut parts: Vec<String> = s.keys.iter().map(|k| k.to_string()).collect();
    parts.extend(s.inds.iter().map(|i| i.to_string()));
    let mut line = format!("{:<4} arity {}  {}", s.name, s.arity, if parts.is_empty() { "no constraints".into() } else { parts.join(", ") });
    if let Some(c) = e.declared_class {
        let _ = write!(line, "  class {c}");
    }
    if let Some((other, kind)) = e.declared_equivalent_to {
        let _ = write!(line, "  {kind} equivalent to {other}");
    }
    line
}

const ID_SCHEMAS: [(&str, &str); 5] = [
    ("K_none", "ids 1, values 1  no keys"),
    ("K_id", "ids 1, values 1  key on the id column"),
    ("K_val", "ids 1, values 1  key on the value column"),
    ("K_both", "ids 1, values 1  keys on both columns"),
    ("V11", "ids 0, values 1  unary value relation"),
];

fn cmd_catalog(name: Option<&str>) -> Result<Outcome> {
    let entries: Vec<CatalogEntry> = binary_catalog().into_iter().chain(ternary_catalog()).collect();
    let mut lines: Vec<(String, String)> = entries.iter().map(|e| (e.schema.name.clone(), catalog_line(e))).collect();
    lines.extend(ID_SCHEMAS.iter().map(|(n, d)| (n.to_string(), format!("{n:<6} {d}"))));
    if let Some(name) = name {
        let key = name.trim();
        let found = lines
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(key))
            .or_else(|| {
                let label = key.parse::<infocap::relmodel::GraphClassLabel>().ok()?;
                lines.iter().find(|(n, _)| n == label.representative())
            })
            .ok_or_else(|| Error::Usage(format!("no catalog entry named {name:?}")))?;
        return ok(format!("{}\n", found.1));
    }
    ok(lines.into_iter().map(|(_, l)| l + "\n").collect())
}

fn cmd_hasse(which: Diagram, n: usize, format: Format, en: &Enumerator) -> Result<Outcome> {
    let h = match which {
        Diagram::Binary => build_binary_hasse(n, None, en)?,
        Diagram::Ternary => build_ternary_chain(n.min(3), en)?,
    };
    match format {
        Format::Dot => ok(export_dot(&h)),
        Format::Report | Format::Text => ok(h.report()),
        f => Err(bad_format("hasse", f)),
    }
}

fn cmd_map(action: MapAction, name: Option<&str>, input: Option<&PathBuf>, n: usize, en: &Enumerator) -> Result<Outcome> {
    if action == MapAction::List {
        let mut out = String::new();
        for m in mapping_catalog() {
            let _ = writeln!(
                out,
                "{:<12} {} -> {}{}",
                m.name,
                m.source.name,
                m.target.name,
                if m.has_inverse() { "  invertible" } else { "" }
            );
        }
        return ok(out);
    }
    let map = mapping_by_name(name.ok_or_else(|| Error::Usage("--name is required".into()))?)?;
    if action == MapAction::Verify {
        let r = verify_mapping(&map, n, en)?;
        let passed = r.as_expected(map.expected_generic);
        let text = format!(
            "{} at n={n}: {} sources\n  target violation: {}\n  injectivity: {:?}\n  genericity: {}\n  round trip: {}\n{}\n",
            map.name,
            r.sources,
            r.target_violation.as_ref().map_or("none".to_string(), |i| i.to_string()),
            r.injectivity.passed(),
            if r.genericity.passed() { "passes".to_string() } else { format!("{:?}", r.genericity) },
            r.round_trip_failure.as_ref().map_or("ok".to_string(), |i| format!("fails on {i}")),
            if passed { "as expected" } else { "NOT as expected" },
        );
        return Ok(Outcome { text, passed });
    }
    let path = input.ok_or_else(|| Error::Usage("--in is required".into()))?;
    let text = read(path)?;
    let mut symbols = Symbols::new();
    let arity = if action == MapAction::Apply { map.source.arity } else { map.target.arity };
    let inst = parse_instance(&text, arity, &mut symbols)?;
    let out = match action {
        MapAction::Apply => apply_mapping(&map, &inst)?,
        _ => invert(&map, &inst)?,
    };
    ok(write_instance(&out, &symbols))
}

fn cmd_counts(n_max: usize, format: Format) -> Result<Outcome> {
    match format {
        Format::Text => ok(cardinality_table(n_max)),
        Format::Csv => {
            let mut out = String::from("formula,class,n,count\n");
            for label in FormulaLabel::ALL {
                for n in 0..=n_max {
                    let _ = writeln!(out, "{},{label},{n},{}", label.formula_name(), formula_count(label, n));
                }
            }
            ok(out)
        }
        f => Err(bad_format("counts", f)),
    }
}

fn cmd_growth(a: &str, b: &str, n_max: usize, format: Format) -> Result<Outcome> {
    let r = compare_growth(a.parse()?, b.parse()?, n_max);
    match format {
        Format::Text => ok(r.to_text()),
        Format::Csv => ok(r.to_csv()),
        f => Err(bad_format("growth", f)),
    }
}

fn cmd_chains(input: &PathBuf) -> Result<Outcome> {
    let g = parse_graph(&read(input)?)?;
    let mut out = String::new();
    for c in classify_chains(&g)? {
        let _ = writeln!(out, "{} {}", c.shape, c.nodes.join(" "));
    }
    let h = sb_bijection(&g)?;
    for (x, y) in &h.pairs {
        let _ = writeln!(out, "pair {x} {y}");
    }
    for u in &h.uncovered {
        let _ = writeln!(out, "uncovered {u}");
    }
    ok(out)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let en = Enumerator::new(cli.budget, exec);
    match &cli.command {
        Command::Catalog { name } => cmd_catalog(name.as_deref()),
        Command::Verify { suite, n, format, .. } => {
            let report = verify::run(*suite, *n, &en)?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Csv => report.to_csv(),
                f => return Err(bad_format("verify", *f)),
            };
            Ok(Outcome {
                text,
                passed: report.passed(),
            })
        }
        Command::Hasse { which, n, format, .. } => cmd_hasse(*which, *n, *format, &en),
        Command::Map { action, name, input, n } => cmd_map(*action, name.as_deref(), input.as_ref(), *n, &en),
        Command::Counts { n_max, format } => cmd_counts(*n_max, *format),
        Command::Growth { a, b, n_max, format } => cmd_growth(a, b, *n_max, *format),
        Command::Chains { input } => cmd_chains(input),
    }
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Verify { out, .. } | Command::Hasse { out, .. } => out.as_ref(),
        _ => None,
    }
}

/// Parses arguments, runs the command and maps the result to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("infocap: {e}");
            return ExitCode::from(verify::exit_code(&e));
        }
    };
    match out_path(&cli.command) {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("infocap: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
