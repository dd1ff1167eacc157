use beliefnet::data::DataTable;
use beliefnet::infer::{fit_bayes, fit_mle};
use beliefnet::learn::{
    averaged_network, bootstrap_strengths_with, optimal_threshold, tabu_search, tiers_to_blacklist, BootstrapConfig,
    Constraints, ScoreKind, TabuConfig, TierSpec,
};
use beliefnet::model::io as model_io;
use beliefnet::report::strengths_csv;

use crate::cli::{FitArgs, LearnArgs};
use crate::commands::Context;
use crate::config::LearnConfig;
use crate::error::{CliError, CliResult};
use crate::workspace::{check_name, Staged};

fn require_complete(table: &DataTable, name: &str) -> CliResult<()> {
    let cols: Vec<usize> = (0..table.n_vars()).collect();
    if table.has_missing(&cols) {
        return Err(CliError::Data(format!(
            "table `{name}` has missing values; learning needs complete cases"
        )));
    }
    if table.n_rows() == 0 {
        return Err(CliError::Data(format!("table `{name}` is empty")));
    }
    Ok(())
}

/// Tier blacklist restricted to the table, plus explicit forbid/require arcs.
pub fn constraints(cfg: &LearnConfig, names: &[String]) -> CliResult<Constraints> {
    let mut c = if cfg.tier.is_empty() {
        Constraints::none(names.iter().cloned())
    } else {
        tiers_to_blacklist(&TierSpec::new(cfg.tier.clone()).restrict_to(names), names)?
    };
    for (a, b) in &cfg.forbid {
        c.forbid(a, b)?;
    }
    for (a, b) in &cfg.require {
        c.require(a, b)?;
    }
    c.validate()?;
    Ok(c)
}

pub fn learn(ctx: &Context, args: &LearnArgs) -> CliResult<()> {
    let out = args.out.clone().unwrap_or_else(|| args.data.clone());
    check_name("model", &out)?;
    let cfg = &ctx.config.learn;
    let score: ScoreKind = args.score.map(Into::into).unwrap_or(cfg.score);
    let replicates = args.bootstrap.unwrap_or(cfg.bootstrap);
    let fixed_threshold = args.threshold.or(cfg.threshold);
    if let Some(t) = fixed_threshold {
        if !(0.0..=1.0).contains(&t) {
            return Err(CliError::usage(format!("threshold must lie in [0, 1], got {t}")));
        }
    }
    let (table, inputs) = ctx.load_table(&args.data)?;
    require_complete(&table, &args.data)?;
    let names = table.names();
    let constraints = constraints(cfg, &names)?;
    let (seed, source) = ctx.seed();
    log::info!("learning `{out}` from {} rows, seed {seed}", table.n_rows());

    let mut m = ctx.manifest("learn");
    m.seed = Some(seed);
    m.seed_source = Some(source);
    m.inputs = inputs;
    m.details
        .insert("score".into(), serde_json::to_value(score).expect("score"));
    m.details.insert("bootstrap".into(), replicates.into());
    m.details
        .insert("tabu".into(), serde_json::to_value(&cfg.tabu).expect("tabu"));
    m.details.insert("alpha".into(), cfg.alpha.into());

    let mut staged = Staged::new();
    let dag = if replicates == 0 {
        let tabu = TabuConfig {
            seed,
            ..cfg.tabu.clone()
        };
        tabu_search(&table, score, &constraints, &tabu)?
    } else {
        let bcfg = BootstrapConfig {
            replicates,
            score,
            tabu: cfg.tabu.clone(),
        };
        let strengths = bootstrap_strengths_with(&table, &bcfg, &constraints, seed, ctx.exec)?;
        let threshold = match fixed_threshold {
            Some(t) => t,
            None => optimal_threshold(&strengths)?,
        };
        let avg = averaged_network(&strengths, threshold, &constraints)?;
        for s in &avg.skipped {
            log::warn!(
                "consensus skipped {} -> {} (strength {:.3}, {:?})",
                s.from,
                s.to,
                s.strength,
                s.reason
            );
        }
        m.details.insert("threshold".into(), threshold.into());
        m.details.insert(
            "threshold_source".into(),
            if fixed_threshold.is_some() {
                "fixed"
            } else {
                "estimated"
            }
            .into(),
        );
        m.details.insert(
            "skipped_edges".into(),
            serde_json::to_value(&avg.skipped).expect("skipped"),
        );
        staged.add(ctx.ws.strengths(&format!("{out}.csv")), strengths_csv(&strengths)?);
        avg.dag
    };
    m.details.insert("arcs".into(), dag.n_arcs().into());

    let mut net = fit_bayes(&dag, &table, cfg.alpha)?
        .with_metadata("data", args.data.clone())
        .with_metadata("seed", seed.to_string())
        .with_metadata("score", format!("{score:?}").to_lowercase())
        .with_metadata("bootstrap", replicates.to_string())
        .with_metadata("alpha", cfg.alpha.to_string());
    if let Some(t) = m.details.get("threshold") {
        net = net.with_metadata("threshold", t.to_string());
    }
    staged.add(ctx.ws.model(&format!("{out}.toml")), model_io::serialize(&net));
    ctx.finish(staged, ctx.ws.model(&format!("{out}.manifest.json")), m)
}

pub fn fit(ctx: &Context, args: &FitArgs) -> CliResult<()> {
    check_name("model", &args.out)?;
    let (base, model_input) = ctx.load_model(&args.model)?;
    let (table, mut inputs) = ctx.load_table(&args.data)?;
    inputs.push(model_input);
    let mut m = ctx.manifest("fit");
    m.inputs = inputs;
    let net = if args.mle {
        m.details.insert("estimator".into(), "mle".into());
        fit_mle(base.dag(), &table)?.with_metadata("estimator", "mle")
    } else {
        let alpha = args.alpha.unwrap_or(ctx.config.learn.alpha);
        m.details.insert("estimator".into(), "bayes".into());
        m.details.insert("alpha".into(), alpha.into());
        fit_bayes(base.dag(), &table, alpha)?.with_metadata("alpha", alpha.to_string())
    };
    let net = net
        .with_metadata("data", args.data.clone())
        .with_metadata("structure", args.model.clone());
    let mut staged = Staged::new();
    staged.add(ctx.ws.model(&format!("{}.toml", args.out)), model_io::serialize(&net));
    ctx.finish(staged, ctx.ws.model(&format!("{}.manifest.json", args.out)), m)
}
