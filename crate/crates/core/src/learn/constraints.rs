use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dag;

/// Forbidden and required arcs over a fixed variable list (by index).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    variables: Vec<String>,
    blacklist: BTreeSet<(usize, usize)>,
    whitelist: BTreeSet<(usize, usize)>,
}

impl Constraints {
    /// No constraints over `variables`.
    pub fn none<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        Constraints {
            variables: variables.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn forbid(&mut self, from: &str, to: &str) -> Result<()> {
        let arc = (self.index(from)?, self.index(to)?);
        self.blacklist.insert(arc);
        Ok(())
    }

    pub fn require(&mut self, from: &str, to: &str) -> Result<()> {
        let arc = (self.index(from)?, self.index(to)?);
        self.whitelist.insert(arc);
        Ok(())
    }

    pub fn is_forbidden(&self, from: usize, to: usize) -> bool {
        self.blacklist.contains(&(from, to))
    }

    pub fn is_required(&self, from: usize, to: usize) -> bool {
        self.whitelist.contains(&(from, to))
    }

    pub fn blacklist(&self) -> &BTreeSet<(usize, usize)> {
        &self.blacklist
    }

    pub fn whitelist(&self) -> &BTreeSet<(usize, usize)> {
        &self.whitelist
    }

    /// Whitelist must be acyclic and disjoint from the blacklist.
    pub fn validate(&self) -> Result<()> {
        let name = |i: usize| self.variables[i].as_str();
        if let Some(&(a, b)) = self.whitelist.intersection(&self.blacklist).next() {
            return Err(Error::UnsatisfiableConstraints(format!(
                "{} -> {} is both required and forbidden",
                name(a),
                name(b)
            )));
        }
        let mut dag = Dag::empty(self.variables.clone())?;
        for &(a, b) in &self.whitelist {
            if a == b || dag.add_arc(a, b).is_err() {
                return Err(Error::UnsatisfiableConstraints(format!(
                    "required arc {} -> {} creates a cycle",
                    name(a),
                    name(b)
                )));
            }
        }
        Ok(())
    }

    /// Does `dag` (over the same variables) respect both lists?
    pub fn admits(&self, dag: &Dag) -> bool {
        dag.arcs().iter().all(|&(a, b)| !self.is_forbidden(a, b))
            && self.whitelist.iter().all(|&(a, b)| dag.has_arc(a, b))
    }
}

/// One tier of the variable ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tier {
    pub members: Vec<String>,
    /// Whether arcs between members of this tier are allowed.
    #[serde(default = "yes")]
    pub within: bool,
}

fn yes() -> bool {
    true
}

/// Ordered tiers; arcs may only point from earlier to later tiers (and
/// within a tier when it allows it).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TierSpec {
    pub tiers: Vec<Tier>,
}

impl TierSpec {
    pub fn new(tiers: Vec<Tier>) -> Self {
        TierSpec { tiers }
    }

    /// Same tiers restricted to `variables`; emptied tiers are dropped.
    pub fn restrict_to<S: AsRef<str>>(&self, variables: &[S]) -> TierSpec {
        let keep = |m: &String| variables.iter().any(|v| v.as_ref() == m);
        TierSpec {
            tiers: self
                .tiers
                .iter()
                .map(|t| Tier {
                    members: t.members.iter().filter(|m| keep(m)).cloned().collect(),
                    within: t.within,
                })
                .filter(|t| !t.members.is_empty())
                .collect(),
        }
    }
}

/// Blacklist every arc from a later tier into an earlier one, plus
/// within-tier arcs for tiers that forbid them.
pub fn tiers_to_blacklist<S: AsRef<str>>(tiers: &TierSpec, variables: &[S]) -> Result<Constraints> {
    let mut constraints = Constraints::none(variables.iter().map(|v| v.as_ref().to_string()));
    let mut tier_of = vec![None; variables.len()];
    for (t, tier) in tiers.tiers.iter().enumerate() {
        if tier.members.is_empty() {
            return Err(Error::InvalidConfig(format!("tier {} is empty", t + 1)));
        }
        for m in &tier.members {
            let i = constraints.index(m)?;
            if tier_of[i].replace(t).is_some() {
                return Err(Error::DuplicateTierMember(m.clone()));
            }
        }
    }
    let tier_of = tier_of
        .iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| Error::UnassignedVariable(variables[i].as_ref().to_string())))
        .collect::<Result<Vec<_>>>()?;
    for a in 0..variables.len() {
        for b in 0..variables.len() {
            if a == b {
                continue;
            }
            let (ta, tb) = (tier_of[a], tier_of[b]);
            if ta > tb || (ta == tb && !tiers.tiers[ta].within) {
                constraints.blacklist.insert((a, b));
            }
        }
    }
    Ok(constraints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tier(members: &[&str]) -> Tier {
        Tier {
            members: members.iter().map(|s| s.to_string()).collect(),
            within: true,
        }
    }

    #[test]
    fn two_tiers() {
        let spec = TierSpec::new(vec![tier(&["A"]), tier(&["B"])]);
        let c = tiers_to_blacklist(&spec, &["A", "B"]).unwrap();
        assert_eq!(c.blacklist().iter().copied().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn three_tiers_of_two() {
        let spec = TierSpec::new(vec![tier(&["A", "B"]), tier(&["C", "D"]), tier(&["E", "F"])]);
        let c = tiers_to_blacklist(&spec, &["A", "B", "C", "D", "E", "F"]).unwrap();
        assert_eq!(c.blacklist().len(), 12);
    }

    #[test]
    fn closed_tier_forbids_internal_arcs() {
        let mut t = tier(&["A", "B"]);
        t.within = false;
        let c = tiers_to_blacklist(&TierSpec::new(vec![t]), &["A", "B"]).unwrap();
        assert!(c.is_forbidden(0, 1) && c.is_forbidden(1, 0));
    }

    #[test]
    fn unassigned_and_duplicate() {
        let spec = TierSpec::new(vec![tier(&["A"])]);
        assert!(matches!(
            tiers_to_blacklist(&spec, &["A", "B"]),
            Err(Error::UnassignedVariable(v)) if v == "B"
        ));
        let spec = TierSpec::new(vec![tier(&["A"]), tier(&["A", "B"])]);
        assert!(matches!(
            tiers_to_blacklist(&spec, &["A", "B"]),
            Err(Error::DuplicateTierMember(_))
        ));
    }

    #[test]
    fn whitelist_conflicts() {
        let spec = TierSpec::new(vec![tier(&["A"]), tier(&["B"])]);
        let mut c = tiers_to_blacklist(&spec, &["A", "B"]).unwrap();
        c.require("B", "A").unwrap();
        assert!(matches!(c.validate(), Err(Error::UnsatisfiableConstraints(_))));

        let mut c = Constraints::none(["A", "B"]);
        c.require("A", "B").unwrap();
        c.require("B", "A").unwrap();
        assert!(matches!(c.validate(), Err(Error::UnsatisfiableConstraints(_))));
    }
}
