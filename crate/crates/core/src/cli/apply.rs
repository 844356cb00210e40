//! `softsort sort|rank`: row-wise operators over CSV or JSON-lines files.
//!
//! Each input row is an independent vector (rows may differ in length). Values
//! are written in the shortest representation that round-trips to the same
//! `f64`, so no precision is lost.

use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;

use super::CliError;
use crate::operators::{hard_rank, hard_sort, Direction, OpKind, SoftOpSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApplyOptions {
    pub spec: SoftOpSpec,
    pub hard: bool,
    pub format: Format,
}

impl ApplyOptions {
    pub fn from_flags(
        op: &str,
        epsilon: f64,
        reg: &str,
        direction: &str,
        hard: bool,
        json: bool,
    ) -> Result<Self, CliError> {
        let spec = SoftOpSpec::parse(op, reg, epsilon, direction).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(ApplyOptions {
            spec,
            hard,
            format: if json { Format::JsonLines } else { Format::Csv },
        })
    }
}

enum Row {
    Reals(Vec<f64>),
    Ranks(Vec<usize>),
}

fn read_csv<R: Read>(input: R) -> Result<Vec<(u64, Vec<f64>)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let values = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| CliError::Data(format!("line {line}: cannot parse '{field}' as a number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push((line, values));
    }
    Ok(rows)
}

fn read_json_lines<R: Read>(input: R) -> Result<Vec<(u64, Vec<f64>)>, CliError> {
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let number = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> =
            serde_json::from_str(&line).map_err(|e| CliError::Data(format!("line {number}: {e}")))?;
        rows.push((number, values));
    }
    Ok(rows)
}

fn transform(values: &[f64], options: &ApplyOptions) -> crate::Result<Row> {
    let spec = &options.spec;
    if options.hard {
        return match spec.kind {
            OpKind::Sort => hard_sort(values, spec.direction).map(Row::Reals),
            OpKind::Rank | OpKind::RankKlDirect => hard_rank(values, spec.direction).map(Row::Ranks),
        };
    }
    spec.apply(values).map(|r| Row::Reals(r.into_values()))
}

fn format_row(row: &Row) -> Vec<String> {
    match row {
        Row::Reals(v) => v.iter().map(|x| x.to_string()).collect(),
        Row::Ranks(v) => v.iter().map(|x| x.to_string()).collect(),
    }
}

/// Reads every row from `input`, applies the operator and writes the results
/// to `output` in the same format and order.
pub fn apply<R: Read, W: Write>(input: R, output: &mut W, options: &ApplyOptions) -> Result<(), CliError> {
    let rows = match options.format {
        Format::Csv => read_csv(input)?,
        Format::JsonLines => read_json_lines(input)?,
    };
    let results: Vec<Row> = rows
        .par_iter()
        .map(|(line, values)| transform(values, options).map_err(|e| CliError::Data(format!("line {line}: {e}"))))
        .collect::<Result<_, _>>()?;

    match options.format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(&mut *output);
            for row in &results {
                writer.write_record(format_row(row)).map_err(|e| CliError::Data(e.to_string()))?;
            }
            writer.flush()?;
        }
        Format::JsonLines => {
            for row in &results {
                let line = match row {
                    Row::Reals(v) => serde_json::to_string(v),
                    Row::Ranks(v) => serde_json::to_string(v),
                }
                .map_err(|e| CliError::Data(e.to_string()))?;
                writeln!(output, "{line}")?;
            }
        }
    }
    Ok(())
}

/// Convenience wrapper over [`apply`] for in-memory text.
pub fn apply_str(input: &str, options: &ApplyOptions) -> Result<String, CliError> {
    let mut out = Vec::new();
    apply(input.as_bytes(), &mut out, options)?;
    String::from_utf8(out).map_err(|e| CliError::Data(e.to_string()))
}

impl Default for ApplyOptions {
    fn default() -> Self {
        ApplyOptions {
            spec: SoftOpSpec::new(OpKind::Rank, 1.0, crate::Regularizer::Quadratic, Direction::Descending),
            hard: false,
            format: Format::Csv,
        }
    }
}
