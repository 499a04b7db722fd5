//! The `arrowlab` command line: load definitions, derive objects, check laws, run the suite.
//!
//! Commands chain within one invocation and share a workspace:
//! `arrowlab load two.json derive sierpinski two --as s2 check s2 --laws nuclei`.

pub mod defs;
pub mod workspace;

use crate::error::{Error, Result};
use crate::report::{Finding, Law, Status, VerificationReport, REGISTRY_VERSION};
use crate::suite::{self, SuiteConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
pub use workspace::{LawFilter, Object, Provenance, Workspace};

pub const COMMANDS: [&str; 6] = ["load", "check", "derive", "suite", "lambda", "show"];

pub const USAGE: &str = "usage: arrowlab [--seed N] [--format text|structured] [--timing] [--caps key=value,...] <command>...

commands (chain several in one invocation):
  load <file>...                         read definition files
  check <name>... [--laws <law>,...]     verify laws on named objects
  derive <construction> <arg>... [--as <name>]
                                         constructions: downset per sierpinski modify quotient power
                                         monotonize lift-arrow lift-modified adjoint factorize tilde
  suite [--family <family>]...           run the generated families and check every loaded object
  lambda eval <algebra> <term> [--env x=a]... [--check]
  show <name>...                         print tables of named objects

caps (--caps): lambda-terms term-size max-index max-w random

exit status: 0 no violation, 1 a law failed, 2 bad input";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Parser, Debug, Default)]
#[command(name = "arrowlab", no_binary_name = true, disable_help_flag = true)]
struct Globals {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    timing: bool,
    #[arg(long, value_delimiter = ',')]
    caps: Vec<String>,
}

#[derive(Parser, Debug)]
#[command(name = "load", no_binary_name = true)]
struct LoadArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "check", no_binary_name = true)]
struct CheckArgs {
    #[arg(required = true)]
    subjects: Vec<String>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    laws: Vec<String>,
}

#[derive(Parser, Debug)]
#[command(name = "derive", no_binary_name = true)]
struct DeriveArgs {
    construction: String,
    args: Vec<String>,
    #[arg(long = "as")]
    name: Option<String>,
}

#[derive(Parser, Debug)]
#[command(name = "suite", no_binary_name = true)]
struct SuiteArgs {
    #[arg(long)]
    family: Vec<String>,
}

#[derive(Parser, Debug)]
#[command(name = "lambda", no_binary_name = true)]
struct LambdaArgs {
    #[command(subcommand)]
    cmd: LambdaCmd,
}

#[derive(Subcommand, Debug)]
enum LambdaCmd {
    Eval {
        algebra: String,
        term: String,
        #[arg(long)]
        env: Vec<String>,
        /// Also check that the value lies in the separator.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Parser, Debug)]
#[command(name = "show", no_binary_name = true)]
struct ShowArgs {
    #[arg(required = true)]
    names: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Derived {
    name: String,
    kind: &'static str,
    size: usize,
}

#[derive(Debug, Serialize)]
struct Value {
    algebra: String,
    term: String,
    value: String,
}

/// Everything one invocation produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub report: VerificationReport,
    derived: Vec<Derived>,
    values: Vec<Value>,
    shown: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.status() == Status::Fail {
            1
        } else {
            0
        }
    }
}

fn clap_err(e: clap::Error) -> Error {
    Error::Input(e.to_string().trim_end().to_string())
}

/// Pulls the global flags out of `argv` wherever they appear.
fn split_globals(argv: &[String]) -> Result<(Globals, Vec<String>)> {
    let mut globals = Vec::new();
    let mut rest = Vec::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let flag = a.split('=').next().unwrap_or("");
        match flag {
            "--timing" => globals.push(a.clone()),
            "--seed" | "--format" | "--caps" => {
                globals.push(a.clone());
                if !a.contains('=') {
                    globals.push(it.next().cloned().ok_or_else(|| Error::Input(format!("{a} needs a value")))?);
                }
            }
            _ => rest.push(a.clone()),
        }
    }
    Ok((Globals::try_parse_from(globals).map_err(clap_err)?, rest))
}

fn segments(args: &[String]) -> Result<Vec<(String, Vec<String>)>> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for a in args {
        if COMMANDS.contains(&a.as_str()) {
            out.push((a.clone(), Vec::new()));
        } else if let Some(last) = out.last_mut() {
            last.1.push(a.clone());
        } else {
            return Err(Error::Input(format!("expected a command, found `{a}`")));
        }
    }
    if out.is_empty() {
        return Err(Error::Input("no command given".into()));
    }
    Ok(out)
}

fn object_size(ws: &Workspace, name: &str) -> usize {
    match ws.objects.get(name) {
        Some(Object::Algebra(a, _)) => a.size(),
        Some(Object::Pca(p)) => p.size(),
        Some(Object::Morphism { table, .. }) | Some(Object::Nucleus { table, .. }) => table.len(),
        Some(Object::PcaMorphism { values, .. }) => values.len(),
        Some(Object::Term(t)) => t.size(),
        None => 0,
    }
}

fn default_name(construction: &str, args: &[String]) -> String {
    format!("{construction}({})", args.join(","))
}

/// Runs one invocation against a fresh workspace.
pub fn run(argv: &[String]) -> Result<(Outcome, RenderOptions)> {
    let (g, rest) = split_globals(argv)?;
    let mut cfg = SuiteConfig { seed: g.seed, ..SuiteConfig::default() };
    for c in &g.caps {
        cfg.set_cap(c)?;
    }
    let mut ws = Workspace::new();
    let mut out = Outcome::default();
    for (cmd, args) in segments(&rest)? {
        let started = Instant::now();
        match cmd.as_str() {
            "load" => {
                let a = LoadArgs::try_parse_from(&args).map_err(clap_err)?;
                let mut defs = Vec::new();
                for f in &a.files {
                    defs.extend(defs::parse_file(f)?);
                }
                ws.load_defs(defs)?;
            }
            "check" => {
                let a = CheckArgs::try_parse_from(&args).map_err(clap_err)?;
                let filter = if a.laws.is_empty() { LawFilter::all() } else { LawFilter::parse(&a.laws)? };
                for s in &a.subjects {
                    let mut r = ws.check(s, &filter, &cfg)?;
                    if r.findings.is_empty() {
                        return Err(Error::Input(format!("none of the requested laws apply to `{s}`")));
                    }
                    r.canonicalize();
                    out.report.extend(r);
                }
            }
            "derive" => {
                let a = DeriveArgs::try_parse_from(&args).map_err(clap_err)?;
                let name = a.name.clone().unwrap_or_else(|| default_name(&a.construction, &a.args));
                match ws.derive(&a.construction, &a.args, &name) {
                    Ok(added) => {
                        for n in added {
                            let kind = ws.objects[&n].kind();
                            out.derived.push(Derived { size: object_size(&ws, &n), name: n, kind });
                        }
                    }
                    Err(Error::Precondition(why)) if a.construction == "adjoint" => {
                        out.report.push(Finding::fail(a.args[0].clone(), Law::AdjExists).counterexample([why]));
                    }
                    Err(e) => return Err(e),
                }
            }
            "suite" => {
                let a = SuiteArgs::try_parse_from(&args).map_err(clap_err)?;
                let mut r = if a.family.is_empty() {
                    suite::run_suite(&cfg)
                } else {
                    let mut r = VerificationReport::new();
                    for f in &a.family {
                        r.extend(
                            suite::run_family(f, &cfg).ok_or_else(|| Error::Input(format!("unknown family `{f}`; known: {}", suite::FAMILIES.join(", "))))?,
                        );
                    }
                    r
                };
                for (name, obj) in &ws.objects {
                    if !matches!(obj, Object::Term(_)) {
                        r.extend(ws.check(name, &LawFilter::all(), &cfg)?);
                    }
                }
                r.canonicalize();
                out.report.extend(r);
            }
            "lambda" => {
                let a = LambdaArgs::try_parse_from(&args).map_err(clap_err)?;
                let LambdaCmd::Eval { algebra, term, env, check } = a.cmd;
                let (v, t) = ws.eval(&algebra, &term, &env)?;
                let alg = ws.algebra(&algebra)?;
                out.values.push(Value { algebra: algebra.clone(), term: t.to_string(), value: alg.name(v).to_string() });
                if check {
                    let mut bindings = std::collections::BTreeMap::new();
                    for e in &env {
                        let (x, val) = e.split_once('=').expect("validated by eval");
                        bindings.insert(x.trim().to_string(), alg.index_of(val.trim())?);
                    }
                    out.report.push(crate::lambda::check_separator_closure(alg, &algebra, &t, &bindings)?);
                }
            }
            "show" => {
                let a = ShowArgs::try_parse_from(&args).map_err(clap_err)?;
                for n in &a.names {
                    out.shown.push(show(&ws, n)?);
                }
            }
            _ => unreachable!("segments only yields known commands"),
        }
        if g.timing {
            out.shown.push(format!("# {cmd} took {} ms", started.elapsed().as_millis()));
        }
    }
    Ok((out, RenderOptions { format: g.format, timing: g.timing }))
}

/// The output-affecting global flags.
#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub format: Format,
    pub timing: bool,
}

fn show(ws: &Workspace, name: &str) -> Result<String> {
    let mut s = String::new();
    match ws.get(name)? {
        Object::Algebra(a, _) => {
            s.push_str(&format!("{name}: algebra on {} elements\n", a.size()));
            s.push_str(&format!("  separator: {}\n", a.names_of(&a.separator()).join(" ")));
            for x in a.elements() {
                let row: Vec<&str> = a.elements().map(|y| a.name(a.imp(x, y))).collect();
                s.push_str(&format!("  {} -> [{}]\n", a.name(x), row.join(" ")));
            }
        }
        Object::Pca(p) => {
            s.push_str(&format!("{name}: pca on {} elements, k = {}, s = {}\n", p.size(), p.name(p.k()), p.name(p.s())));
            for x in p.elements() {
                let row: Vec<&str> = p.elements().map(|y| p.app(x, y).map_or("-", |v| p.name(v))).collect();
                s.push_str(&format!("  {} . [{}]\n", p.name(x), row.join(" ")));
            }
        }
        Object::Morphism { from, to, table } => s.push_str(&table_lines(ws, name, from, to, table)?),
        Object::Nucleus { on, table } => s.push_str(&table_lines(ws, name, on, on, table)?),
        Object::PcaMorphism { from, to, values } => {
            let (a, b) = (ws.pca(from)?, ws.pca(to)?);
            s.push_str(&format!("{name}: {from} -> D({to})\n"));
            for (x, &m) in values.iter().enumerate() {
                s.push_str(&format!("  {} |-> {}\n", a.name(x), b.poset().set_name(m)));
            }
        }
        Object::Term(t) => s.push_str(&format!("{name}: {t}\n")),
    }
    Ok(s.trim_end().to_string())
}

fn table_lines(ws: &Workspace, name: &str, from: &str, to: &str, table: &[crate::Elem]) -> Result<String> {
    let (a, b) = (ws.algebra(from)?, ws.algebra(to)?);
    let mut s = format!("{name}: {from} -> {to}\n");
    for (x, &y) in table.iter().enumerate() {
        s.push_str(&format!("  {} |-> {}\n", a.name(x), b.name(y)));
    }
    Ok(s)
}

/// Renders the outcome in the requested format.
pub fn render(out: &Outcome, g: RenderOptions) -> String {
    match g.format {
        Format::Text => {
            let mut s = String::new();
            for d in &out.derived {
                s.push_str(&format!("derived {} ({}, {} entries)\n", d.name, d.kind, d.size));
            }
            for v in &out.values {
                s.push_str(&format!("{} in {} = {}\n", v.term, v.algebra, v.value));
            }
            for line in &out.shown {
                s.push_str(line);
                s.push('\n');
            }
            s.push_str(&out.report.to_text(g.timing));
            if !out.report.findings.is_empty() {
                let count = |st| out.report.findings.iter().filter(|f| f.status == st).count();
                s.push_str(&format!(
                    "{}: {} pass, {} fail, {} inconclusive\n",
                    out.report.status(),
                    count(Status::Pass),
                    count(Status::Fail),
                    count(Status::Inconclusive)
                ));
            }
            s
        }
        Format::Structured => {
            #[derive(Serialize)]
            struct Doc<'a> {
                registry_version: u32,
                status: Status,
                #[serde(skip_serializing_if = "<[_]>::is_empty")]
                derived: &'a [Derived],
                #[serde(skip_serializing_if = "<[_]>::is_empty")]
                values: &'a [Value],
                findings: &'a [Finding],
            }
            let doc = Doc {
                registry_version: REGISTRY_VERSION,
                status: out.report.status(),
                derived: &out.derived,
                values: &out.values,
                findings: &out.report.findings,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("outcome serializes");
            s.push('\n');
            s
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args(argv: &[String]) -> i32 {
    if argv.is_empty() || argv.iter().any(|a| a == "--help" || a == "-h") && !argv.iter().any(|a| COMMANDS.contains(&a.as_str())) {
        println!("{USAGE}");
        return if argv.is_empty() { 2 } else { 0 };
    }
    match run(argv) {
        Ok((out, g)) => {
            let text = render(&out, g);
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
