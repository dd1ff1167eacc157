use serde::{Deserialize, Serialize};

use crate::data::table::{DataTable, MISSING};
use crate::error::{Error, Result};
use crate::model::CategoricalVariable;

/// Default rare-response threshold: levels observed fewer times become missing.
pub const DEFAULT_MIN_COUNT: usize = 50;

/// Drop every level of `variable` observed fewer than `min_count` times;
/// its cells become missing and the remaining levels keep their order.
///
/// Counts are taken on the table as given, so call this before any row
/// filtering. An empty table has no evidence about rarity and is returned
/// unchanged.
pub fn collapse_rare(table: &DataTable, variable: &str, min_count: usize) -> Result<DataTable> {
    let col = table.require(variable)?;
    if table.n_rows() == 0 {
        return Ok(table.clone());
    }
    let counts = table.level_counts(col);
    let keep: Vec<usize> = (0..counts.len()).filter(|&k| counts[k] >= min_count).collect();
    if keep.len() == counts.len() {
        return Ok(table.clone());
    }
    let var = table.variable(col);
    let restricted = var.restrict(&keep).map_err(|_| Error::DegenerateVariable {
        variable: var.name().to_string(),
    })?;
    let mut remap = vec![MISSING; counts.len()];
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new as u16;
    }
    let values = table
        .column(col)
        .iter()
        .map(|&v| if v == MISSING { MISSING } else { remap[v as usize] })
        .collect();
    let mut out = table.clone();
    out.replace_column(col, restricted, values);
    Ok(out)
}

/// Keep rows with no missing cell among `variables`, preserving order.
pub fn drop_incomplete<S: AsRef<str>>(table: &DataTable, variables: &[S]) -> Result<DataTable> {
    let cols = variables
        .iter()
        .map(|v| table.require(v.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let keep: Vec<bool> = (0..table.n_rows())
        .map(|r| cols.iter().all(|&c| !table.is_missing(r, c)))
        .collect();
    Ok(table.filter_rows(&keep))
}

fn default_positive() -> String {
    "Mentioned".to_string()
}

/// Binary theme built from binary indicator columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThemeSpec {
    pub name: String,
    pub members: Vec<String>,
    /// Level label meaning "mentioned".
    #[serde(default = "default_positive")]
    pub positive: String,
}

/// Add one column per theme, `positive` iff any member is positive, and drop
/// the member columns.
///
/// Missing members follow three-valued OR: a positive member decides the
/// theme; otherwise any missing member leaves the theme missing.
pub fn group_themes(table: &DataTable, specs: &[ThemeSpec]) -> Result<DataTable> {
    let mut out = table.clone();
    let mut drop = Vec::new();
    for spec in specs {
        let mut member_cols = Vec::with_capacity(spec.members.len());
        let mut template: Option<&CategoricalVariable> = None;
        for m in &spec.members {
            let col = table.require(m)?;
            let var = table.variable(col);
            if var.cardinality() != 2 {
                return Err(Error::NonBinaryMember(m.clone()));
            }
            let pos = var.require_level(&spec.positive)?;
            member_cols.push((col, pos as u16));
            template.get_or_insert(var);
            if !drop.contains(&col) {
                drop.push(col);
            }
        }
        let template = template.ok_or_else(|| Error::InvalidConfig(format!("theme `{}` has no members", spec.name)))?;
        let pos_out = template.require_level(&spec.positive)? as u16;
        let var = CategoricalVariable::new(spec.name.clone(), template.levels().to_vec())?;
        let values = (0..table.n_rows())
            .map(|r| {
                let mut any_missing = false;
                for &(c, pos) in &member_cols {
                    match table.column(c)[r] {
                        MISSING => any_missing = true,
                        v if v == pos => return pos_out,
                        _ => {}
                    }
                }
                if any_missing {
                    MISSING
                } else {
                    1 - pos_out
                }
            })
            .collect();
        out.push_column(var, values)?;
    }
    out.remove_columns(&drop);
    Ok(out)
}

/// Level labels of the framing variable used to split the sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PopulationSplit {
    pub variable: String,
    pub risk: String,
    pub opportunity: String,
    pub both: String,
}

impl Default for PopulationSplit {
    fn default() -> Self {
        PopulationSplit {
            variable: "DevelopAI".into(),
            risk: "Risk".into(),
            opportunity: "Opportunity".into(),
            both: "Both".into(),
        }
    }
}

/// Split into (risk, opportunity) subpopulations; "both" rows go to both
/// outputs and rows with a missing framing value to neither.
pub fn split_population(table: &DataTable, split: &PopulationSplit) -> Result<(DataTable, DataTable)> {
    let col = table.require(&split.variable)?;
    let var = table.variable(col);
    let risk = var.require_level(&split.risk)?;
    let opp = var.require_level(&split.opportunity)?;
    let both = var.require_level(&split.both)?;
    let values: Vec<Option<usize>> = (0..table.n_rows()).map(|r| table.value(r, col)).collect();
    let risk_rows: Vec<bool> = values
        .iter()
        .map(|v| matches!(v, Some(k) if *k == risk || *k == both))
        .collect();
    let opp_rows: Vec<bool> = values
        .iter()
        .map(|v| matches!(v, Some(k) if *k == opp || *k == both))
        .collect();
    Ok((table.filter_rows(&risk_rows), table.filter_rows(&opp_rows)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str, levels: &[&str]) -> CategoricalVariable {
        CategoricalVariable::new(name, levels.iter().copied()).unwrap()
    }

    fn column_with_counts(counts: &[usize]) -> Vec<Option<usize>> {
        counts
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| std::iter::repeat_n(Some(k), n))
            .collect()
    }

    #[test]
    fn collapse_boundary() {
        let t = DataTable::new(
            vec![var("A", &["a", "b", "dk"])],
            vec![column_with_counts(&[60, 60, 49])],
        )
        .unwrap();
        let out = collapse_rare(&t, "A", 50).unwrap();
        assert_eq!(out.variable(0).levels(), &["a", "b"]);
        assert_eq!((0..out.n_rows()).filter(|&r| out.is_missing(r, 0)).count(), 49);

        let t = DataTable::new(
            vec![var("A", &["a", "b", "dk"])],
            vec![column_with_counts(&[60, 60, 50])],
        )
        .unwrap();
        assert_eq!(collapse_rare(&t, "A", 50).unwrap().variable(0).cardinality(), 3);
    }

    #[test]
    fn collapse_leaves_empty_tables_alone() {
        let t = DataTable::new(vec![var("A", &["a", "b"])], vec![vec![]]).unwrap();
        assert_eq!(collapse_rare(&t, "A", 50).unwrap(), t);
    }

    #[test]
    fn collapse_remaps_indices() {
        let t = DataTable::new(
            vec![var("A", &["rare", "x", "y"])],
            vec![vec![Some(0), Some(1), Some(1), Some(2), Some(2)]],
        )
        .unwrap();
        let out = collapse_rare(&t, "A", 2).unwrap();
        assert_eq!(out.variable(0).levels(), &["x", "y"]);
        assert_eq!(out.label(1, 0), Some("x"));
        assert_eq!(out.label(3, 0), Some("y"));
        assert!(out.is_missing(0, 0));
        assert!(matches!(
            collapse_rare(&t, "A", 3),
            Err(Error::DegenerateVariable { .. })
        ));
    }

    #[test]
    fn drop_incomplete_cases() {
        let t = DataTable::new(
            vec![var("A", &["0", "1"]), var("B", &["0", "1"])],
            vec![vec![Some(0), Some(1), Some(0)], vec![Some(1), None, Some(0)]],
        )
        .unwrap();
        assert_eq!(drop_incomplete(&t, &["A"]).unwrap(), t);
        let out = drop_incomplete(&t, &["A", "B"]).unwrap();
        assert_eq!(out.n_rows(), 2);
        assert_eq!(out.value(1, 0), Some(0));

        let all_missing = DataTable::new(vec![var("A", &["0", "1"])], vec![vec![None, None]]).unwrap();
        assert_eq!(drop_incomplete(&all_missing, &["A"]).unwrap().n_rows(), 0);
    }

    #[test]
    fn theme_or() {
        let m = |n: &str| var(n, &["Mentioned", "Not mentioned"]);
        let t = DataTable::new(
            vec![m("i1"), m("i2"), m("i3"), var("Other", &["a", "b"])],
            vec![
                vec![Some(1), Some(1), None, Some(1)],
                vec![Some(1), Some(0), Some(1), Some(1)],
                vec![Some(1), Some(1), Some(1), Some(1)],
                vec![Some(0), Some(0), Some(0), Some(1)],
            ],
        )
        .unwrap();
        let spec = ThemeSpec {
            name: "T".into(),
            members: vec!["i1".into(), "i2".into(), "i3".into()],
            positive: "Mentioned".into(),
        };
        let out = group_themes(&t, &[spec]).unwrap();
        assert_eq!(out.names(), vec!["Other", "T"]);
        let col = out.require("T").unwrap();
        assert_eq!(out.label(0, col), Some("Not mentioned"));
        assert_eq!(out.label(1, col), Some("Mentioned"));
        assert_eq!(out.label(2, col), None);
        assert_eq!(out.label(3, col), Some("Not mentioned"));
    }

    #[test]
    fn theme_member_errors() {
        let t = DataTable::new(
            vec![var("i1", &["Mentioned", "Not mentioned", "x"])],
            vec![vec![Some(0)]],
        )
        .unwrap();
        let spec = ThemeSpec {
            name: "T".into(),
            members: vec!["i1".into()],
            positive: "Mentioned".into(),
        };
        assert!(matches!(
            group_themes(&t, std::slice::from_ref(&spec)),
            Err(Error::NonBinaryMember(_))
        ));
        let spec = ThemeSpec {
            members: vec!["nope".into()],
            ..spec
        };
        assert!(matches!(group_themes(&t, &[spec]), Err(Error::UnknownVariable(c)) if c == "nope"));
    }

    #[test]
    fn split_duplicates_both() {
        let t = DataTable::new(
            vec![var("DevelopAI", &["Risk", "Opportunity", "Both"])],
            vec![vec![Some(0), Some(1), Some(2), None]],
        )
        .unwrap();
        let (risk, opp) = split_population(&t, &PopulationSplit::default()).unwrap();
        assert_eq!(risk.n_rows(), 2);
        assert_eq!(risk.label(0, 0), Some("Risk"));
        assert_eq!(risk.label(1, 0), Some("Both"));
        assert_eq!(opp.label(0, 0), Some("Opportunity"));
        assert_eq!(opp.label(1, 0), Some("Both"));

        let all_opp = DataTable::new(
            vec![var("DevelopAI", &["Risk", "Opportunity", "Both"])],
            vec![vec![Some(1), Some(1)]],
        )
        .unwrap();
        let (risk, opp) = split_population(&all_opp, &PopulationSplit::default()).unwrap();
        assert_eq!((risk.n_rows(), opp.n_rows()), (0, 2));

        let wrong = DataTable::new(vec![var("DevelopAI", &["Yes", "No"])], vec![vec![Some(0)]]).unwrap();
        assert!(matches!(
            split_population(&wrong, &PopulationSplit::default()),
            Err(Error::UnknownLevel { .. })
        ));
    }
}
