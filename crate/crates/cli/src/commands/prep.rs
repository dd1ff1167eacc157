use std::collections::BTreeMap;

use beliefnet::data::{
    collapse_rare, drop_incomplete, group_themes, io as data_io, load_csv, recode, split_population, DataTable,
    RecodeSpec, ThemeSpec,
};

use crate::cli::PrepArgs;
use crate::commands::Context;
use crate::config::{Population, PrepConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::InputRecord;
use crate::workspace::Staged;

/// One line of `data/audit.csv`.
struct AuditRow {
    step: &'static str,
    table: String,
    rows: usize,
    detail: String,
}

fn audit_csv(rows: &[AuditRow]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Data(format!("audit log: {e}"));
    w.write_record(["step", "table", "rows", "detail"]).map_err(io)?;
    for r in rows {
        w.write_record([r.step, &r.table, &r.rows.to_string(), &r.detail])
            .map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Data(format!("audit log: {e}")))
}

fn missing_cells(t: &DataTable, col: usize) -> usize {
    (0..t.n_rows()).filter(|&r| t.is_missing(r, col)).count()
}

/// Collapse rare levels of each listed variable, logging what changed.
fn collapse_all(mut table: DataTable, vars: &[String], min: usize, audit: &mut Vec<AuditRow>) -> CliResult<DataTable> {
    for v in vars {
        let col = table.require(v)?;
        let before = table.variable(col).levels().to_vec();
        let missing_before = missing_cells(&table, col);
        table = collapse_rare(&table, v, min)?;
        let after = table.variable(col).levels();
        if after.len() != before.len() {
            let dropped: Vec<&str> = before
                .iter()
                .filter(|l| !after.contains(l))
                .map(String::as_str)
                .collect();
            audit.push(AuditRow {
                step: "collapse",
                table: "full".into(),
                rows: table.n_rows(),
                detail: format!(
                    "{v}: {} -> missing ({} cells)",
                    dropped.join(" | "),
                    missing_cells(&table, col) - missing_before
                ),
            });
        }
    }
    Ok(table)
}

/// Select the modelled columns and keep complete cases.
fn finalize(table: &DataTable, name: &str, vars: &[String], audit: &mut Vec<AuditRow>) -> CliResult<DataTable> {
    let selected = table.select(vars)?;
    let out = drop_incomplete(&selected, vars)?;
    audit.push(AuditRow {
        step: "complete",
        table: name.into(),
        rows: out.n_rows(),
        detail: format!("dropped {} incomplete rows", selected.n_rows() - out.n_rows()),
    });
    Ok(out)
}

fn themes_of(prep: &PrepConfig, population: Population) -> Vec<String> {
    prep.theme
        .iter()
        .filter(|t| t.population == population)
        .map(|t| t.name.clone())
        .collect()
}

pub fn run(ctx: &Context, args: &PrepArgs) -> CliResult<()> {
    let prep = ctx
        .config
        .prep
        .as_ref()
        .ok_or_else(|| CliError::usage("the config has no [prep] section"))?;
    let raw_path = match &args.raw {
        Some(p) => p.clone(),
        None => ctx.resolve(&prep.raw),
    };
    let spec = RecodeSpec {
        unmapped: prep.unmapped,
        variable: prep.variable.clone(),
    };
    let raw = load_csv(&raw_path, &spec.source_columns())?;
    let mut audit = vec![AuditRow {
        step: "load",
        table: "raw".into(),
        rows: raw.n_rows(),
        detail: format!("sha256 {}", raw.fingerprint().sha256),
    }];

    let recoded = recode(&raw, &spec)?;
    audit.push(AuditRow {
        step: "recode",
        table: "full".into(),
        rows: recoded.n_rows(),
        detail: format!("{} variables", recoded.n_vars()),
    });

    let collapse = prep.collapse.as_ref().unwrap_or(&prep.variables);
    let collapsed = collapse_all(recoded, collapse, prep.min_count, &mut audit)?;

    let specs: Vec<ThemeSpec> = prep.theme.iter().map(|t| t.spec()).collect();
    let grouped = group_themes(&collapsed, &specs)?;
    if !specs.is_empty() {
        audit.push(AuditRow {
            step: "themes",
            table: "full".into(),
            rows: grouped.n_rows(),
            detail: format!("{} themes", specs.len()),
        });
    }

    let mut tables = BTreeMap::new();
    let mut order = vec!["full"];
    if let Some(split) = &prep.split {
        let (risk, opportunity) = split_population(&grouped, split)?;
        for (name, t) in [("risk", &risk), ("opportunity", &opportunity)] {
            audit.push(AuditRow {
                step: "split",
                table: name.into(),
                rows: t.n_rows(),
                detail: format!(
                    "{} in {{{}, {}}}",
                    split.variable,
                    if name == "risk" {
                        &split.risk
                    } else {
                        &split.opportunity
                    },
                    split.both
                ),
            });
        }
        let mut risk_vars = prep.variables.clone();
        risk_vars.extend(themes_of(prep, Population::Risk));
        let mut opp_vars = prep.variables.clone();
        opp_vars.extend(themes_of(prep, Population::Opportunity));
        tables.insert("full", finalize(&grouped, "full", &prep.variables, &mut audit)?);
        tables.insert("risk", finalize(&risk, "risk", &risk_vars, &mut audit)?);
        tables.insert(
            "opportunity",
            finalize(&opportunity, "opportunity", &opp_vars, &mut audit)?,
        );
        order.extend(["risk", "opportunity"]);
    } else {
        tables.insert("full", finalize(&grouped, "full", &prep.variables, &mut audit)?);
    }

    let mut staged = Staged::new();
    for name in &order {
        let t = &tables[name];
        staged.add(ctx.ws.data(&format!("{name}.csv")), data_io::table_to_csv(t)?);
        staged.add(
            ctx.ws.data(&format!("{name}.dict.toml")),
            data_io::dictionary_to_toml(t.variables()),
        );
    }
    staged.add(ctx.ws.data("audit.csv"), audit_csv(&audit)?);

    let mut m = ctx.manifest("prep");
    m.inputs.push(InputRecord {
        path: raw_path.display().to_string(),
        sha256: raw.fingerprint().sha256.clone(),
        rows: Some(raw.n_rows()),
    });
    for name in &order {
        m.details.insert(format!("rows.{name}"), tables[name].n_rows().into());
    }
    m.details.insert("min_count".into(), prep.min_count.into());
    ctx.finish(staged, ctx.ws.data("prep.manifest.json"), m)
}
