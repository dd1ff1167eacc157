use beliefnet::analysis::{
    influence_colors, node_influence_with, parameter_slopes, scenario_posteriors, sobol_matrix_with, tornado_with,
    TargetEvent, DEFAULT_DELTA,
};
use beliefnet::infer::{conditional_table, posterior, QueryResult};
use beliefnet::model::{export_dot, Evidence, FittedNetwork};
use beliefnet::report::{
    condition_label, influence_csv, query_csv, query_text, scenario_csv, scenario_svg, scenario_text, slopes_csv,
    sobol_csv, sobol_text, tornado_csv, tornado_svg,
};

use crate::cli::{ModelArgs, QueryArgs, SensitivityArgs, SobolArgs};
use crate::commands::{file_token, Context};
use crate::config::{QueryConfig, SensitivityConfig, DEFAULT_INFLUENCE_COLOR, DEFAULT_MAX_BARS};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::workspace::Staged;

fn open(ctx: &Context, model: &str, command: &str) -> CliResult<(FittedNetwork, RunManifest)> {
    let (net, input) = ctx.load_model(model)?;
    let mut m = ctx.manifest(command);
    m.inputs.push(input);
    m.details.insert("model".into(), model.into());
    Ok((net, m))
}

/// Baseline followed by one row per level of each swept variable.
fn query_rows(net: &FittedNetwork, q: &QueryConfig) -> CliResult<Vec<QueryResult>> {
    let mut rows = vec![posterior(net, &q.target, &Evidence::new())?];
    for by in &q.evidence {
        rows.extend(conditional_table(net, &q.target, by)?.into_iter().skip(1));
    }
    Ok(rows)
}

fn manifest_name(command: &str, parts: &[&str]) -> String {
    let mut name = command.to_string();
    for p in parts {
        name.push('_');
        name.push_str(&file_token(p));
    }
    name + ".manifest.json"
}

pub fn query(ctx: &Context, args: &QueryArgs) -> CliResult<()> {
    let (net, mut m) = open(ctx, &args.model, "query")?;
    let (queries, mname) = match &args.target {
        Some(t) => (
            vec![QueryConfig {
                target: t.clone(),
                evidence: args.by.clone(),
            }],
            manifest_name("query", &[t]),
        ),
        None if !ctx.config.query.is_empty() => (ctx.config.query.clone(), manifest_name("query", &[])),
        None => {
            return Err(CliError::usage(
                "no --target given and the config has no [[query]] entries",
            ))
        }
    };
    let mut staged = Staged::new();
    for q in &queries {
        let rows = query_rows(&net, q)?;
        let stem = format!("query_{}", file_token(&q.target));
        staged.add(ctx.ws.report(&args.model, &format!("{stem}.csv")), query_csv(&rows)?);
        staged.add(ctx.ws.report(&args.model, &format!("{stem}.txt")), query_text(&rows));
    }
    m.details
        .insert("queries".into(), serde_json::to_value(&queries).expect("queries"));
    ctx.finish(staged, ctx.ws.report(&args.model, &mname), m)
}

pub fn sobol(ctx: &Context, args: &SobolArgs) -> CliResult<()> {
    let (net, mut m) = open(ctx, &args.model, "sobol")?;
    let conf = ctx.config.sobol.as_ref();
    let targets = if !args.targets.is_empty() {
        args.targets.clone()
    } else {
        conf.map(|c| c.targets.clone())
            .ok_or_else(|| CliError::usage("no --target given and the config has no [sobol] section"))?
    };
    let inputs = conf
        .and_then(|c| c.inputs.clone())
        .unwrap_or_else(|| net.variables().iter().map(|v| v.name().to_string()).collect());
    let matrix = sobol_matrix_with(&net, &targets, &inputs, ctx.exec)?;
    let mut staged = Staged::new();
    staged.add(ctx.ws.report(&args.model, "sobol.csv"), sobol_csv(&matrix)?);
    staged.add(ctx.ws.report(&args.model, "sobol.txt"), sobol_text(&matrix));
    m.details.insert("targets".into(), targets.into());
    m.details.insert("inputs".into(), inputs.into());
    ctx.finish(staged, ctx.ws.report(&args.model, "sobol.manifest.json"), m)
}

pub fn scenario(ctx: &Context, args: &ModelArgs) -> CliResult<()> {
    let (net, mut m) = open(ctx, &args.model, "scenario")?;
    let conf = ctx
        .config
        .scenarios
        .as_ref()
        .ok_or_else(|| CliError::usage("the config has no [scenarios] section"))?;
    let results = scenario_posteriors(&net, &conf.scenario, &conf.targets)?;
    let mut staged = Staged::new();
    let mut charts = Vec::new();
    for (t, target) in conf.targets.iter().enumerate() {
        let stem = format!("scenarios_{}", file_token(target));
        staged.add(
            ctx.ws.report(&args.model, &format!("{stem}.csv")),
            scenario_csv(&results, t)?,
        );
        staged.add(
            ctx.ws.report(&args.model, &format!("{stem}.txt")),
            scenario_text(&results, t),
        );
        charts.push((
            ctx.ws.report(&args.model, &format!("{stem}.svg")),
            scenario_svg(&results, t, ctx.timestamp()),
        ));
    }
    for (p, svg) in charts {
        staged.add(p, svg);
    }
    m.details.insert("scenarios".into(), conf.scenario.len().into());
    m.details.insert("targets".into(), conf.targets.clone().into());
    ctx.finish(staged, ctx.ws.report(&args.model, "scenario.manifest.json"), m)
}

fn parse_given(given: &[String]) -> CliResult<Evidence> {
    let mut ev = Evidence::new();
    for g in given {
        let (v, l) = g
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("--given expects Variable=Level, got `{g}`")))?;
        ev.insert(v.trim(), l.trim());
    }
    Ok(ev)
}

pub fn sensitivity(ctx: &Context, args: &SensitivityArgs) -> CliResult<()> {
    let (net, mut m) = open(ctx, &args.model, "sensitivity")?;
    let (requests, mname) = match (&args.target, &args.state) {
        (Some(t), Some(s)) => {
            let req = SensitivityConfig {
                target: t.clone(),
                state: s.clone(),
                evidence: parse_given(&args.given)?,
                nodes: None,
                delta: args.delta.unwrap_or(DEFAULT_DELTA),
                max_bars: DEFAULT_MAX_BARS,
                color: DEFAULT_INFLUENCE_COLOR.into(),
            };
            (vec![req], manifest_name("sensitivity", &[t, s]))
        }
        _ if !ctx.config.sensitivity.is_empty() => (ctx.config.sensitivity.clone(), manifest_name("sensitivity", &[])),
        _ => {
            return Err(CliError::usage(
                "no --target given and the config has no [[sensitivity]] entries",
            ))
        }
    };
    let mut tables = Staged::new();
    let mut charts = Vec::new();
    for req in &requests {
        if !(req.delta > 0.0 && req.delta <= 1.0) {
            return Err(CliError::usage(format!("delta must lie in (0, 1], got {}", req.delta)));
        }
        let event = TargetEvent::new(&req.target, &req.state).with_evidence(req.evidence.clone());
        let nodes = req.nodes.as_deref();
        let bars = tornado_with(&net, &event, nodes, req.delta, ctx.exec)?;
        let slopes = parameter_slopes(&net, &event, nodes, ctx.exec)?;
        let influence = node_influence_with(&net, &event, ctx.exec)?;
        let colors = influence_colors(&influence, &req.color)?;
        let stem = format!("{}_{}", file_token(&req.target), file_token(&req.state));
        let report = |kind: &str, ext: &str| ctx.ws.report(&args.model, &format!("{kind}_{stem}.{ext}"));
        tables.add(report("tornado", "csv"), tornado_csv(&bars)?);
        tables.add(report("slopes", "csv"), slopes_csv(&slopes, !event.is_linear())?);
        tables.add(report("influence", "csv"), influence_csv(&influence, &colors)?);
        let label = if req.evidence.is_empty() {
            format!("P({}={})", req.target, req.state)
        } else {
            format!("P({}={} | {})", req.target, req.state, condition_label(&req.evidence))
        };
        charts.push((
            report("tornado", "svg"),
            tornado_svg(&bars, &label, req.max_bars, ctx.timestamp()),
        ));
        charts.push((report("influence", "dot"), export_dot(net.dag(), Some(&colors))));
    }
    for (p, c) in charts {
        tables.add(p, c);
    }
    m.details
        .insert("requests".into(), serde_json::to_value(&requests).expect("requests"));
    ctx.finish(tables, ctx.ws.report(&args.model, &mname), m)
}

pub fn export(ctx: &Context, args: &ModelArgs) -> CliResult<()> {
    let (net, m) = open(ctx, &args.model, "export")?;
    let mut staged = Staged::new();
    staged.add(ctx.ws.report(&args.model, "network.dot"), export_dot(net.dag(), None));
    ctx.finish(staged, ctx.ws.report(&args.model, "export.manifest.json"), m)
}
