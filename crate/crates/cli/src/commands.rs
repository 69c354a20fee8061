use std::io::{self, Write};

use num_bigint::BigInt;
use serde_json::json;
use spidermoment_core::graph::{profile_walk_counts, required_depth, GraphError, SpidernetGraph};
use spidermoment_core::spectral::{verify_moments, SpectralError, SpectralModel};
use spidermoment_core::{
    extract, format_rational, parse_pipeline, JFraction, JFractionError, PipelineError, Rational,
    Series, SpidernetParams,
};

use crate::oeis::{construction_offset, OeisClient, OeisError, OeisId, OeisRecord};
use crate::source::{parse_sequence, parse_source, SourceError, SourceExpr};
use crate::{Cli, Command, JcfCommand, OutputFormat};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Source(#[from] SourceError),
    #[error("{0}")]
    Pipeline(#[from] PipelineError),
    #[error("{0}")]
    JFraction(#[from] JFractionError),
    #[error("{0}")]
    Spectral(#[from] SpectralError),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Oeis(#[from] OeisError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A verification or comparison failed; details were written.
    Fail,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let order = cli.order as usize;
    let fmt = cli.output;
    match &cli.command {
        Command::Expand { source } => {
            let values = parse_source(source)?.expand(order).into_coeffs();
            write_values(out, fmt, &values)?;
        }
        Command::Transform { pipeline, source } => {
            let pipeline = parse_pipeline(pipeline)?;
            let g = parse_source(source)?.expand(order);
            write_values(out, fmt, pipeline.run(&g)?.values())?;
        }
        Command::Jcf(JcfCommand::Extract { terms, depth }) => {
            let series = Series::new(parse_sequence(terms)?);
            let coeffs = extract(&series, *depth)?;
            write_jcf(out, fmt, &coeffs.alpha, &coeffs.beta)?;
        }
        Command::Jcf(JcfCommand::Expand { source }) => {
            let spec = require_spec(&parse_source(source)?)?;
            write_values(out, fmt, spec.expand(order).coeffs())?;
        }
        Command::Verify { model } => {
            return verify(out, fmt, &parse_source(model)?, order, cli.tol)
        }
        Command::Check {
            source,
            id,
            pipeline,
            offset,
        } => {
            let id: OeisId = id.parse()?;
            let g = parse_source(source)?.expand(order);
            let values = match pipeline {
                Some(p) => parse_pipeline(p)?.run(&g)?.values().to_vec(),
                None => g.into_coeffs(),
            };
            let record = client(cli).lookup(&id)?;
            let offset = offset.unwrap_or_else(|| construction_offset(&id));
            return check(out, &values, &record, offset);
        }
        Command::Graph {
            model,
            edges,
            depth,
            explicit,
        } => {
            let params = require_spidernet(&parse_source(model)?)?;
            if *edges {
                let graph = SpidernetGraph::build(params, *depth)?;
                for (u, v) in graph.edges() {
                    writeln!(out, "{u} {v}")?;
                }
            } else {
                let counts = if *explicit {
                    SpidernetGraph::build(params, required_depth(order))?
                        .closed_walk_counts(order)?
                } else {
                    profile_walk_counts(params, order)
                };
                let values: Vec<Rational> = counts
                    .into_iter()
                    .map(|c| Rational::from_integer(BigInt::from(c)))
                    .collect();
                write_values(out, fmt, &values)?;
            }
        }
        Command::Density {
            model,
            points,
            atoms,
        } => {
            let spec = require_spec(&parse_source(model)?)?;
            let model = SpectralModel::new(&spec)?;
            if *points == 0 {
                return Err(CliError::Usage("--points must be at least 1".into()));
            }
            let (lo, hi) = model.support();
            writeln!(out, "x,density")?;
            for i in 1..=*points {
                // interior points only; the density is not defined on the edges
                let x = lo + (hi - lo) * i as f64 / (*points + 1) as f64;
                writeln!(out, "{x},{}", model.density(x)?)?;
            }
            if let Some(path) = atoms {
                let list: Vec<_> = model
                    .atoms()
                    .iter()
                    .map(|a| json!({ "location": a.location, "weight": a.weight }))
                    .collect();
                let text = serde_json::to_string_pretty(&list).expect("atoms serialize");
                std::fs::write(path, text + "\n")?;
            }
        }
        Command::Lookup { id } => {
            let record = client(cli).lookup(&id.parse()?)?;
            write_record(out, fmt, &record)?;
        }
    }
    Ok(Outcome::Pass)
}

fn client(cli: &Cli) -> OeisClient {
    OeisClient::new(cli.offline, cli.cache_dir.clone())
}

fn require_spec(source: &SourceExpr) -> Result<JFraction, CliError> {
    source.spec().ok_or_else(|| {
        CliError::Usage(format!(
            "{source} is a plain sequence, not a J-fraction model"
        ))
    })
}

fn require_spidernet(source: &SourceExpr) -> Result<SpidernetParams, CliError> {
    match source {
        SourceExpr::Spidernet(p) => Ok(*p),
        other => Err(CliError::Usage(format!(
            "{other} is not a spidernet(a,b,c) model"
        ))),
    }
}

fn write_values(out: &mut dyn Write, fmt: OutputFormat, values: &[Rational]) -> io::Result<()> {
    let text: Vec<String> = values.iter().map(format_rational).collect();
    match fmt {
        OutputFormat::Plain => writeln!(out, "{}", text.join(" ")),
        OutputFormat::Json => writeln!(out, "{}", json!(text)),
        OutputFormat::Csv => {
            writeln!(out, "n,value")?;
            for (n, v) in text.iter().enumerate() {
                writeln!(out, "{n},{v}")?;
            }
            Ok(())
        }
    }
}

fn write_jcf(
    out: &mut dyn Write,
    fmt: OutputFormat,
    alpha: &[Rational],
    beta: &[Rational],
) -> io::Result<()> {
    let alpha: Vec<String> = alpha.iter().map(format_rational).collect();
    let beta: Vec<String> = beta.iter().map(format_rational).collect();
    match fmt {
        OutputFormat::Plain => {
            writeln!(out, "alpha: {}", alpha.join(" "))?;
            writeln!(out, "beta: {}", beta.join(" "))
        }
        OutputFormat::Json => writeln!(out, "{}", json!({ "alpha": alpha, "beta": beta })),
        OutputFormat::Csv => {
            writeln!(out, "k,alpha,beta")?;
            for (k, (a, b)) in alpha.iter().zip(&beta).enumerate() {
                writeln!(out, "{},{a},{b}", k + 1)?;
            }
            Ok(())
        }
    }
}

fn write_record(out: &mut dyn Write, fmt: OutputFormat, record: &OeisRecord) -> io::Result<()> {
    let terms: Vec<String> = record.terms.iter().map(BigInt::to_string).collect();
    match fmt {
        OutputFormat::Plain => {
            writeln!(
                out,
                "{} offset {} ({})",
                record.id, record.offset, record.source
            )?;
            writeln!(out, "{}", terms.join(" "))
        }
        OutputFormat::Json => writeln!(
            out,
            "{}",
            json!({
                "id": record.id.as_str(),
                "offset": record.offset,
                "source": record.source.to_string(),
                "terms": terms,
            })
        ),
        OutputFormat::Csv => {
            writeln!(out, "n,value")?;
            for (i, t) in terms.iter().enumerate() {
                writeln!(out, "{},{t}", record.offset + i)?;
            }
            Ok(())
        }
    }
}

fn check(
    out: &mut dyn Write,
    values: &[Rational],
    record: &OeisRecord,
    offset: usize,
) -> Result<Outcome, CliError> {
    let mut compared = 0;
    for (i, v) in values.iter().enumerate() {
        let Some(expected) = record.term(i + offset) else {
            break;
        };
        if !v.is_integer() || v.to_integer() != *expected {
            writeln!(
                out,
                "fail: {} mismatch at index {i} (OEIS n = {}): computed {}, expected {expected}",
                record.id,
                i + offset,
                format_rational(v),
            )?;
            return Ok(Outcome::Fail);
        }
        compared += 1;
    }
    if compared == 0 {
        return Err(CliError::Usage(format!(
            "{} has no terms at offset {offset} to compare against",
            record.id
        )));
    }
    writeln!(
        out,
        "pass: {compared} terms match {} (offset {offset}, {})",
        record.id, record.source
    )?;
    Ok(Outcome::Pass)
}

fn verify(
    out: &mut dyn Write,
    fmt: OutputFormat,
    model: &SourceExpr,
    n_max: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let spec = require_spec(model)?;
    let mut passed = true;
    let mut notes = Vec::new();

    if let SourceExpr::Spidernet(params) = model {
        let moments = spec.expand(n_max);
        let profile = profile_walk_counts(*params, n_max);
        let bad = first_mismatch(
            moments.coeffs(),
            profile.iter().map(|c| BigInt::from(c.clone())),
        );
        match bad {
            None => notes.push(format!("profile walk counts match for n <= {n_max}")),
            Some(n) => {
                passed = false;
                notes.push(format!("profile walk count differs at n = {n}"));
            }
        }
        match SpidernetGraph::build(*params, required_depth(n_max)) {
            Ok(graph) => {
                let counts = graph.closed_walk_counts(n_max)?;
                match first_mismatch(moments.coeffs(), counts.into_iter().map(BigInt::from)) {
                    None => notes.push(format!(
                        "explicit graph walk counts match ({} vertices)",
                        graph.vertex_count()
                    )),
                    Some(n) => {
                        passed = false;
                        notes.push(format!("explicit graph walk count differs at n = {n}"));
                    }
                }
            }
            Err(e @ (GraphError::InfeasibleWiring { .. } | GraphError::TooLarge)) => {
                notes.push(format!("explicit graph skipped: {e}"))
            }
            Err(e) => return Err(e.into()),
        }
    }

    let report = verify_moments(&spec, n_max, tol)?;
    passed &= report.passed();
    let failing: Vec<usize> = report
        .rows
        .iter()
        .filter(|r| r.error.is_nan() || r.error >= tol)
        .map(|r| r.n)
        .collect();

    match fmt {
        OutputFormat::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(
                    |r| json!({ "n": r.n, "exact": r.exact, "approx": r.approx, "error": r.error }),
                )
                .collect();
            let atoms: Vec<_> = report
                .atoms
                .iter()
                .map(|a| json!({ "location": a.location, "weight": a.weight }))
                .collect();
            let doc = json!({
                "model": model.to_string(),
                "spec": spec,
                "graph": notes,
                "moments": rows,
                "atoms": atoms,
                "max_error": report.max_error,
                "tolerance": tol,
                "failing": failing,
                "passed": passed,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            )?;
        }
        OutputFormat::Csv => {
            writeln!(out, "n,exact,approx,error")?;
            for r in &report.rows {
                writeln!(out, "{},{},{},{:e}", r.n, r.exact, r.approx, r.error)?;
            }
        }
        OutputFormat::Plain => {
            writeln!(out, "model {model} = {spec}")?;
            for note in &notes {
                writeln!(out, "graph: {note}")?;
            }
            writeln!(
                out,
                "{:>3} {:>24} {:>24} {:>10}",
                "n", "exact", "approx", "error"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>3} {:>24} {:>24.12} {:>10.2e}",
                    r.n, r.exact, r.approx, r.error
                )?;
            }
            if report.atoms.is_empty() {
                writeln!(out, "atoms: none")?;
            }
            for a in &report.atoms {
                writeln!(out, "atom at {:.9} weight {:.9}", a.location, a.weight)?;
            }
            writeln!(
                out,
                "max error {:.2e} (tolerance {tol:e})",
                report.max_error
            )?;
            if !failing.is_empty() {
                let list: Vec<String> = failing.iter().map(usize::to_string).collect();
                writeln!(out, "failing n: {}", list.join(" "))?;
            }
            writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

fn first_mismatch(moments: &[Rational], mut counts: impl Iterator<Item = BigInt>) -> Option<usize> {
    moments
        .iter()
        .enumerate()
        .find_map(|(n, m)| match counts.next() {
            Some(c) if m.is_integer() && m.to_integer() == c => None,
            _ => Some(n),
        })
}
