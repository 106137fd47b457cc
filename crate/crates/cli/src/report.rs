use std::collections::BTreeMap;
use std::fmt::Write as _;

use fairgame_core::{Arena, LassoAnalysis, NodeId, ValueTable, WinRegions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Regions {
    pub win1: Vec<String>,
    pub win2: Vec<String>,
    pub undetermined: Vec<String>,
}

/// The JSON report printed by `solve`, `value` and `oracle`.
#[derive(Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub regions: Regions,
    pub credits: BTreeMap<String, i64>,
    pub values: BTreeMap<String, String>,
    pub route: String,
    pub determinacy: String,
}

fn names<'a>(a: &Arena, nodes: impl IntoIterator<Item = &'a NodeId>) -> Vec<String> {
    nodes.into_iter().map(|&q| a.name(q).to_string()).collect()
}

impl Report {
    pub fn from_regions(a: &Arena, r: &WinRegions, route: String, determinacy: String) -> Self {
        Report {
            regions: Regions { win1: names(a, &r.win1), win2: names(a, &r.win2), undetermined: names(a, &r.undetermined) },
            credits: r.credit.iter().map(|(&q, &c)| (a.name(q).to_string(), c)).collect(),
            values: r.value.iter().map(|(&q, v)| (a.name(q).to_string(), v.to_fraction_string())).collect(),
            route,
            determinacy,
        }
    }

    pub fn from_values(a: &Arena, values: &ValueTable, route: String) -> Self {
        Report {
            values: values.iter().map(|(q, v)| (a.name(q).to_string(), v.to_fraction_string())).collect(),
            route,
            ..Report::default()
        }
    }

    /// One line per node: name, owner, region, credit and value.
    pub fn table(&self, a: &Arena) -> String {
        let mut out = String::new();
        if !self.route.is_empty() {
            let _ = writeln!(out, "route: {}", self.route);
        }
        if !self.determinacy.is_empty() {
            let _ = writeln!(out, "determinacy: {}", self.determinacy);
        }
        let width = a.nodes().map(|q| a.name(q).len()).max().unwrap_or(0).max(4);
        let with_regions = !(self.regions.win1.is_empty() && self.regions.win2.is_empty() && self.regions.undetermined.is_empty());
        let _ = write!(out, "{:width$}  owner", "node");
        let with_credits = !self.credits.is_empty();
        if with_regions {
            out.push_str("  region      ");
        }
        if with_credits {
            out.push_str("  credit");
        }
        if !self.values.is_empty() {
            out.push_str("  value");
        }
        out.push('\n');
        for q in a.nodes() {
            let name = a.name(q);
            let _ = write!(out, "{name:width$}  {:5}", a.owner(q).token());
            if with_regions {
                let region = if self.regions.win1.iter().any(|n| n == name) {
                    "win1"
                } else if self.regions.win2.iter().any(|n| n == name) {
                    "win2"
                } else {
                    "undetermined"
                };
                let _ = write!(out, "  {region:12}");
            }
            if with_credits {
                let credit = self.credits.get(name).map(i64::to_string).unwrap_or_else(|| "-".into());
                let _ = write!(out, "  {credit:>6}");
            }
            if let Some(v) = self.values.get(name) {
                let _ = write!(out, "  {v}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct LassoReport {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
    pub cycle_weight: i64,
    pub cycle_mean: String,
    pub fair_on_cycle: bool,
    pub min_prefix_weight: i64,
}

impl LassoReport {
    pub fn new(a: &Arena, l: &LassoAnalysis) -> Self {
        LassoReport {
            prefix: names(a, &l.prefix),
            cycle: names(a, &l.cycle),
            cycle_weight: l.cycle_weight,
            cycle_mean: l.cycle_mean.to_fraction_string(),
            fair_on_cycle: l.fair_on_cycle,
            min_prefix_weight: l.min_prefix_weight,
        }
    }

    pub fn table(&self) -> String {
        format!(
            "prefix: {}\ncycle: {}\ncycle weight: {}\ncycle mean: {}\nfair on cycle: {}\nmin prefix weight: {}\n",
            self.prefix.join(" "),
            self.cycle.join(" "),
            self.cycle_weight,
            self.cycle_mean,
            self.fair_on_cycle,
            self.min_prefix_weight
        )
    }
}
