use std::collections::BTreeMap;

use crate::analysis::{CptParameterId, ScenarioResult, SobolMatrix, TornadoBar};
use crate::error::{Error, Result};
use crate::infer::QueryResult;
use crate::learn::ArcStrengthTable;
use crate::model::Evidence;
use crate::report::format::{round4, sig12, text_table};

fn write_csv(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
}

fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
    Ok((header, rows))
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::MalformedFile {
        line: 0,
        column: 0,
        message: format!("`{s}` is not a number"),
    })
}

/// `Baseline` for empty evidence, else `Var=level; Var=level`.
pub fn condition_label(evidence: &Evidence) -> String {
    if evidence.is_empty() {
        "Baseline".into()
    } else {
        evidence
            .iter()
            .map(|(v, l)| format!("{v}={l}"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// `<first>, <levels...>, evidence_probability` with one row per posterior.
fn distribution_csv(first: &str, labels: &[String], rows: &[&QueryResult]) -> Result<String> {
    let mut header = vec![first.to_string()];
    if let Some(q) = rows.first() {
        header.extend(q.levels.iter().cloned());
    }
    header.push("evidence_probability".into());
    let body: Vec<Vec<String>> = rows
        .iter()
        .zip(labels)
        .map(|(q, label)| {
            let mut r = vec![label.clone()];
            r.extend(q.distribution.iter().map(|&p| sig12(p)));
            r.push(sig12(q.evidence_probability));
            r
        })
        .collect();
    write_csv(&header, &body)
}

/// Posteriors of one target: `condition, <levels...>, evidence_probability`.
pub fn query_csv(rows: &[QueryResult]) -> Result<String> {
    let labels: Vec<String> = rows.iter().map(|q| condition_label(&q.evidence)).collect();
    distribution_csv("condition", &labels, &rows.iter().collect::<Vec<_>>())
}

/// One parsed row of [`query_csv`].
#[derive(Clone, Debug, PartialEq)]
pub struct QueryRow {
    pub condition: String,
    pub distribution: Vec<f64>,
    pub evidence_probability: f64,
}

/// Levels and rows of a [`query_csv`] table.
pub fn parse_query_csv(text: &str) -> Result<(Vec<String>, Vec<QueryRow>)> {
    let (header, rows) = read_csv(text)?;
    if header.len() < 2 {
        return Err(Error::MissingColumn("evidence_probability".into()));
    }
    let levels = header[1..header.len() - 1].to_vec();
    let parsed = rows
        .iter()
        .map(|r| {
            Ok(QueryRow {
                condition: r[0].clone(),
                distribution: r[1..r.len() - 1]
                    .iter()
                    .map(|s| parse_number(s))
                    .collect::<Result<_>>()?,
                evidence_probability: parse_number(&r[r.len() - 1])?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((levels, parsed))
}

/// Same rows rounded to four decimals, as a text table.
pub fn query_text(rows: &[QueryResult]) -> String {
    let Some(first) = rows.first() else {
        return String::new();
    };
    let mut header = vec![format!("P({})", first.target)];
    header.extend(first.levels.iter().cloned());
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|q| {
            let mut r = vec![condition_label(&q.evidence)];
            r.extend(q.distribution.iter().map(|&p| round4(p)));
            r
        })
        .collect();
    text_table(&header, &body)
}

/// `input, <targets...>` in percent; `-` where the input is the target.
pub fn sobol_csv(m: &SobolMatrix) -> Result<String> {
    let mut header = vec!["input".to_string()];
    header.extend(m.targets.iter().cloned());
    let body: Vec<Vec<String>> = m
        .inputs
        .iter()
        .zip(&m.values)
        .map(|(i, row)| {
            let mut r = vec![i.clone()];
            r.extend(row.iter().map(|v| v.map_or("-".into(), sig12)));
            r
        })
        .collect();
    write_csv(&header, &body)
}

pub fn sobol_text(m: &SobolMatrix) -> String {
    let mut header = vec!["Input".to_string()];
    header.extend(m.targets.iter().cloned());
    let body: Vec<Vec<String>> = m
        .inputs
        .iter()
        .zip(&m.values)
        .map(|(i, row)| {
            let mut r = vec![i.clone()];
            r.extend(row.iter().map(|v| v.map_or("--".into(), |x| format!("{x:.1}"))));
            r
        })
        .collect();
    text_table(&header, &body)
}

/// Posteriors of target `t` under every scenario:
/// `scenario, <levels...>, evidence_probability`.
pub fn scenario_csv(results: &[ScenarioResult], t: usize) -> Result<String> {
    let labels: Vec<String> = results.iter().map(|r| r.scenario.clone()).collect();
    let rows: Vec<&QueryResult> = results.iter().map(|r| &r.posteriors[t]).collect();
    distribution_csv("scenario", &labels, &rows)
}

pub fn scenario_text(results: &[ScenarioResult], t: usize) -> String {
    let Some(first) = results.first() else {
        return String::new();
    };
    let q = &first.posteriors[t];
    let mut header = vec![format!("P({})", q.target)];
    header.extend(q.levels.iter().cloned());
    let body: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let mut row = vec![r.scenario.clone()];
            row.extend(r.posteriors[t].distribution.iter().map(|&p| round4(p)));
            row
        })
        .collect();
    text_table(&header, &body)
}

/// Tornado bars in sorted order.
pub fn tornado_csv(bars: &[TornadoBar]) -> Result<String> {
    let header: Vec<String> = [
        "rank",
        "variable",
        "config",
        "state",
        "label",
        "theta",
        "delta_down",
        "delta_up",
        "shift_down",
        "shift_up",
        "max_abs_shift",
    ]
    .map(String::from)
    .to_vec();
    let body: Vec<Vec<String>> = bars
        .iter()
        .enumerate()
        .map(|(i, b)| {
            vec![
                (i + 1).to_string(),
                b.parameter.variable.clone(),
                b.parameter.config.to_string(),
                b.parameter.state.to_string(),
                b.label.clone(),
                sig12(b.theta),
                sig12(b.delta_down),
                sig12(b.delta_up),
                sig12(b.shift_down),
                sig12(b.shift_up),
                sig12(b.max_shift()),
            ]
        })
        .collect();
    write_csv(&header, &body)
}

/// `variable, config, state, slope, method`.
pub fn slopes_csv(slopes: &[(CptParameterId, f64)], finite_difference: bool) -> Result<String> {
    let header: Vec<String> = ["variable", "config", "state", "slope", "method"]
        .map(String::from)
        .to_vec();
    let method = if finite_difference {
        "finite_difference"
    } else {
        "two_point"
    };
    let body: Vec<Vec<String>> = slopes
        .iter()
        .map(|(p, s)| {
            vec![
                p.variable.clone(),
                p.config.to_string(),
                p.state.to_string(),
                sig12(*s),
                method.into(),
            ]
        })
        .collect();
    write_csv(&header, &body)
}

/// `node, influence, color`.
pub fn influence_csv(influence: &BTreeMap<String, f64>, colors: &BTreeMap<String, String>) -> Result<String> {
    let header: Vec<String> = ["node", "influence", "color"].map(String::from).to_vec();
    let body: Vec<Vec<String>> = influence
        .iter()
        .map(|(n, v)| vec![n.clone(), sig12(*v), colors.get(n).cloned().unwrap_or_default()])
        .collect();
    write_csv(&header, &body)
}

const STRENGTH_COLUMNS: [&str; 7] = [
    "from",
    "to",
    "strength",
    "direction",
    "arc_frequency",
    "count",
    "replicates",
];

/// Every ordered pair `a ≠ b`; `count` and `replicates` make it reloadable.
pub fn strengths_csv(t: &ArcStrengthTable) -> Result<String> {
    let n = t.len();
    let mut body = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            body.push(vec![
                t.variables()[a].clone(),
                t.variables()[b].clone(),
                sig12(t.strength(a, b)),
                sig12(t.direction(a, b)),
                sig12(t.arc_frequency(a, b)),
                t.count(a, b).to_string(),
                t.replicates().to_string(),
            ]);
        }
    }
    write_csv(&STRENGTH_COLUMNS.map(String::from), &body)
}

/// Inverse of [`strengths_csv`]; `variables` fixes the node order.
pub fn parse_strengths_csv(text: &str, variables: &[String]) -> Result<ArcStrengthTable> {
    let (header, rows) = read_csv(text)?;
    for c in STRENGTH_COLUMNS {
        if !header.iter().any(|h| h == c) {
            return Err(Error::MissingColumn(c.into()));
        }
    }
    let col = |name: &str| header.iter().position(|h| h == name).expect("checked");
    let (cf, ct, cc, cr) = (col("from"), col("to"), col("count"), col("replicates"));
    let n = variables.len();
    let idx = |name: &str| {
        variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    };
    let mut counts = vec![0u64; n * n];
    let mut replicates = 0usize;
    for r in &rows {
        let (a, b) = (idx(&r[cf])?, idx(&r[ct])?);
        counts[a * n + b] = parse_number(&r[cc])? as u64;
        replicates = parse_number(&r[cr])? as usize;
    }
    ArcStrengthTable::from_counts(variables.to_vec(), replicates, counts)
}
