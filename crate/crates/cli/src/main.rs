use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use gturan::cliques::count_cliques;
use gturan::constructions::{
    bushaw_kettle_line, bushaw_kettle_value, erdos_gallai_value, parse_construction, thm_2c5_value, thm_kkr_value,
    turan_clique_count, FormulaValue,
};
use gturan::graph::{from_graph6, to_graph6, Graph};
use gturan::patterns::{find_disjoint_copies, ForbiddenPattern};
use gturan::search::{solve, SearchOptions, SearchOutcome, SearchProblem, EXHAUSTIVE_LIMIT};
use gturan::suites::{run_suite, Suite, SuiteReport};

/// Generalized Turán numbers: constructions, clique counts, pattern
/// freeness and exact small-case search.
#[derive(Parser)]
#[command(name = "gturan", version)]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for search (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Largest order the exhaustive search may attempt.
    #[arg(long, global = true, default_value_t = EXHAUSTIVE_LIMIT)]
    max_n: usize,
    /// Score every candidate instead of only edge-maximal ones.
    #[arg(long, global = true)]
    no_prune: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named graph and print it in graph6.
    ///
    /// Names: turan:n,r  join:A,B  union:A,B  thm2c5:n  thmkkr:n,r,k  K:n
    /// C:n  P:n  S:n  E:n  g6:<graph6>
    Construct { spec: String },
    /// Count the s-cliques of a graph (graph6 or construction name).
    Count { graph: String, s: usize },
    /// Decide whether a graph contains no copy of a pattern such as 2C5.
    Free { graph: String, pattern: String },
    /// Exact ex(n, K_s, pattern) by exhaustive search.
    Solve { n: usize, s: usize, pattern: String },
    /// Run verification suites.
    Verify {
        #[arg(required = true, value_parser = Suite::NAMES)]
        suites: Vec<String>,
    },
    /// Evaluate a closed form.
    ///
    /// turan N R S | thm2c5 N | thmkkr N R K | erdos-gallai N K |
    /// bushaw-kettle N K L
    Formula { name: String, args: Vec<usize> },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Table
    };
    let options = SearchOptions {
        prune: cli.no_prune.then_some(false),
        threads: cli.threads,
        max_n: cli.max_n,
    };
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Construct { spec } => construct(&mut out, format, spec)?,
        Command::Count { graph, s } => count(&mut out, format, graph, *s)?,
        Command::Free { graph, pattern } => free(&mut out, format, graph, pattern)?,
        Command::Solve { n, s, pattern } => {
            let pattern = parse_pattern(pattern)?;
            let outcome = solve(&SearchProblem::new(*n, *s, pattern), &options)?;
            print_outcome(&mut out, format, &outcome)?;
        }
        Command::Verify { suites } => {
            let mut pass = true;
            let mut reports = Vec::new();
            for name in suites {
                let suite: Suite = name.parse()?;
                let report = run_suite(suite, &options)?;
                pass &= report.pass;
                reports.push(report);
            }
            print_reports(&mut out, format, &reports)?;
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Formula { name, args } => formula(&mut out, format, name, args)?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Accepts graph6 text or a construction name.
fn parse_graph(text: &str) -> Result<Graph> {
    if text.contains(':') {
        return parse_construction(text).with_context(|| format!("bad construction {text:?}"));
    }
    from_graph6(text).with_context(|| format!("bad graph6 {text:?}"))
}

fn parse_pattern(text: &str) -> Result<ForbiddenPattern> {
    text.parse().with_context(|| format!("bad pattern {text:?}"))
}

fn construct(out: &mut impl Write, format: Format, spec: &str) -> Result<()> {
    let g = parse_construction(spec).with_context(|| format!("bad construction {spec:?}"))?;
    match format {
        Format::Json => {
            let doc = json!({"spec": spec, "order": g.order(), "edges": g.edge_count(), "graph6": to_graph6(&g)});
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["spec", "order", "edges", "graph6"])?;
            w.write_record([
                spec,
                &g.order().to_string(),
                &g.edge_count().to_string(),
                &to_graph6(&g),
            ])?;
            w.flush()?;
        }
        Format::Table => writeln!(out, "{}", to_graph6(&g))?,
    }
    Ok(())
}

fn count(out: &mut impl Write, format: Format, graph: &str, s: usize) -> Result<()> {
    let g = parse_graph(graph)?;
    let c = count_cliques(&g, s);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({"graph6": to_graph6(&g), "s": s, "count": c.to_string()})
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["graph6", "s", "count"])?;
            w.write_record([to_graph6(&g), s.to_string(), c.to_string()])?;
            w.flush()?;
        }
        Format::Table => writeln!(out, "{c}")?,
    }
    Ok(())
}

fn free(out: &mut impl Write, format: Format, graph: &str, pattern: &str) -> Result<()> {
    let g = parse_graph(graph)?;
    let p = parse_pattern(pattern)?;
    let copies = find_disjoint_copies(&g, &p);
    match format {
        Format::Json => {
            let witness: Option<Vec<Vec<usize>>> =
                copies.as_ref().map(|c| c.iter().map(|e| e.map().to_vec()).collect());
            let doc = json!({"graph6": to_graph6(&g), "pattern": p.to_string(), "free": copies.is_none(), "witness": witness});
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["copy", "pattern_vertex", "host_vertex"])?;
            for (i, e) in copies.iter().flatten().enumerate() {
                for (u, v) in e.map().iter().enumerate() {
                    w.write_record([i.to_string(), u.to_string(), v.to_string()])?;
                }
            }
            w.flush()?;
        }
        Format::Table => match copies {
            None => writeln!(out, "FREE")?,
            Some(copies) => {
                writeln!(out, "CONTAINS {p}")?;
                for (i, e) in copies.iter().enumerate() {
                    writeln!(out, "copy {}: {e}", i + 1)?;
                }
            }
        },
    }
    Ok(())
}

fn print_outcome(out: &mut impl Write, format: Format, outcome: &SearchOutcome) -> Result<()> {
    let extremal: Vec<String> = outcome.extremal.iter().map(|f| to_graph6(&f.graph())).collect();
    match format {
        Format::Json => writeln!(out, "{}", outcome.to_json())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "n",
                "objective",
                "pattern",
                "optimum",
                "unique",
                "classes",
                "graphs_examined",
                "extremal",
            ])?;
            w.write_record([
                outcome.n.to_string(),
                outcome.objective.name(),
                outcome.pattern.to_string(),
                outcome.optimum.to_string(),
                outcome.unique.to_string(),
                extremal.len().to_string(),
                outcome.graphs_examined.to_string(),
                extremal.join(" "),
            ])?;
            w.flush()?;
        }
        Format::Table => {
            writeln!(out, "n            {}", outcome.n)?;
            writeln!(out, "objective    {}", outcome.objective.name())?;
            writeln!(out, "pattern      {}", outcome.pattern)?;
            writeln!(out, "optimum      {}", outcome.optimum)?;
            writeln!(out, "unique       {}", outcome.unique)?;
            writeln!(out, "examined     {}", outcome.graphs_examined)?;
            writeln!(out, "elapsed      {} ms", outcome.elapsed.as_millis())?;
            writeln!(out, "extremal     {}", extremal.join(" "))?;
        }
    }
    Ok(())
}

fn dec(v: Option<u128>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

fn print_reports(out: &mut impl Write, format: Format, reports: &[SuiteReport]) -> Result<()> {
    match format {
        Format::Json => {
            let doc = if let [one] = reports {
                one.to_json()
            } else {
                serde_json::Value::Array(reports.iter().map(SuiteReport::to_json).collect())
            };
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "suite",
                "params",
                "pattern",
                "objective",
                "formula",
                "search",
                "construction",
                "agree",
                "extremal_unique",
                "informational",
                "passed",
                "notes",
            ])?;
            for report in reports {
                for row in &report.rows {
                    w.write_record([
                        report.suite.clone(),
                        row.params_text(),
                        row.pattern.clone(),
                        row.objective.clone(),
                        dec(row.formula),
                        dec(row.search),
                        dec(row.construction),
                        flag(row.agree).to_string(),
                        flag(row.extremal_unique).to_string(),
                        row.informational.to_string(),
                        row.passed().to_string(),
                        row.notes.join("; "),
                    ])?;
                }
            }
            w.flush()?;
        }
        Format::Table => {
            for report in reports {
                print_table(out, report)?;
            }
        }
    }
    Ok(())
}

fn print_table(out: &mut impl Write, report: &SuiteReport) -> Result<()> {
    let header = [
        "params", "pattern", "formula", "search", "constr", "agree", "unique", "status", "notes",
    ];
    let rows: Vec<[String; 9]> = report
        .rows
        .iter()
        .map(|row| {
            let status = match (row.passed(), row.informational) {
                (false, _) => "FAIL",
                (true, true) => "info",
                (true, false) => "ok",
            };
            [
                row.params_text(),
                row.pattern.clone(),
                dec(row.formula),
                dec(row.search),
                dec(row.construction),
                flag(row.agree).to_string(),
                flag(row.extremal_unique).to_string(),
                status.to_string(),
                row.notes.join("; "),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    writeln!(
        out,
        "suite {}: {}",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" }
    )?;
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(&header.map(String::from)))?;
    for row in &rows {
        writeln!(out, "{}", line(row))?;
    }
    writeln!(out)?;
    Ok(())
}

fn formula(out: &mut impl Write, format: Format, name: &str, args: &[usize]) -> Result<()> {
    let want = |k: usize| -> Result<()> {
        if args.len() != k {
            bail!("{name} takes {k} arguments, got {}", args.len());
        }
        Ok(())
    };
    let mut line = None;
    let value: FormulaValue = match name {
        "turan" => {
            want(3)?;
            turan_clique_count(args[0], args[1], args[2])?
        }
        "thm2c5" => {
            want(1)?;
            thm_2c5_value(args[0])?
        }
        "thmkkr" => {
            want(3)?;
            thm_kkr_value(args[0], args[1], args[2])?
        }
        "erdos-gallai" => {
            want(2)?;
            erdos_gallai_value(args[0], args[1])?
        }
        "bushaw-kettle" => {
            want(3)?;
            line = Some(bushaw_kettle_line(args[1], args[2])?);
            bushaw_kettle_value(args[0], args[1], args[2])?
        }
        _ => {
            return Err(anyhow!(
                "unknown formula {name:?} (turan, thm2c5, thmkkr, erdos-gallai, bushaw-kettle)"
            ))
        }
    };
    let line_text = line.map(|(a, b)| {
        if b < 0 {
            format!("{a}n - {}", -b)
        } else {
            format!("{a}n + {b}")
        }
    });
    match format {
        Format::Json => {
            let mut doc = json!({
                "formula": name,
                "args": args,
                "value": value.value.to_string(),
                "valid_for": value.valid_for,
                "validity": value.valid_for.to_string(),
            });
            if let Some(l) = &line_text {
                doc["linear_form"] = json!(l);
            }
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["formula", "args", "value", "validity"])?;
            let args: Vec<String> = args.iter().map(usize::to_string).collect();
            w.write_record([
                name,
                &args.join(" "),
                &value.value.to_string(),
                &value.valid_for.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Table => {
            writeln!(out, "{}", value.value)?;
            writeln!(out, "validity: {}", value.valid_for)?;
            if let Some(l) = line_text {
                writeln!(out, "linear form: {l}")?;
            }
        }
    }
    Ok(())
}
