//! Synthetic survey used by the bundled project and the acceptance suite.
//!
//! Respondents are drawn from a hand-built generator network whose tables
//! are tilted log-linear forms: `P(k | cfg) ∝ base_k · exp(Σ_p w_p u_p u_k)`
//! with level scores `u` in `[-1, 1]`. Sampled records are then rendered as
//! a raw export with numeric answer codes, "don't know" codes, a party
//! question and open-answer indicator columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use beliefnet::infer::sample;
use beliefnet::model::{CategoricalVariable, Cpt, Dag, FittedNetwork};
use beliefnet::Result;

pub const FIXTURE_ROWS: usize = 1506;
pub const FIXTURE_SEED: u64 = 2023;

const AGREE: [&str; 4] = [
    "Strongly disagree",
    "Somewhat disagree",
    "Somewhat agree",
    "Strongly agree",
];
const AGREE_DK: [&str; 5] = [
    "Strongly disagree",
    "Somewhat disagree",
    "Somewhat agree",
    "Strongly agree",
    "Don't know",
];
const ORD4: [f64; 4] = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
const ORD4_DK: [f64; 5] = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0, 0.0];
const ORD3: [f64; 3] = [-1.0, 0.0, 1.0];
const YES_NO: [f64; 2] = [1.0, -1.0];

struct Node {
    name: &'static str,
    levels: &'static [&'static str],
    ordinal: bool,
    scores: &'static [f64],
    base: &'static [f64],
    parents: &'static [(&'static str, f64)],
}

/// Generator nodes in topological order.
const NODES: &[Node] = &[
    Node {
        name: "Sex",
        levels: &["Female", "Male"],
        ordinal: false,
        scores: &[-1.0, 1.0],
        base: &[0.51, 0.49],
        parents: &[],
    },
    Node {
        name: "Age",
        levels: &["14-29", "30-44", "45-59", "60+"],
        ordinal: true,
        scores: &ORD4,
        base: &[0.2, 0.24, 0.27, 0.29],
        parents: &[("Sex", -0.1)],
    },
    Node {
        name: "Education",
        levels: &["Low", "Medium", "High"],
        ordinal: true,
        scores: &ORD3,
        base: &[0.3, 0.38, 0.32],
        parents: &[("Age", -0.6), ("Sex", 0.15)],
    },
    Node {
        name: "Income",
        levels: &["Low", "Medium", "High", "Not reported"],
        ordinal: false,
        scores: &[-1.0, 0.0, 1.0, 0.0],
        base: &[0.28, 0.3, 0.24, 0.18],
        parents: &[("Education", 1.0), ("Age", 0.4)],
    },
    Node {
        name: "Municipality",
        levels: &["<5k", "5k-19k", "20k-99k", "100k-499k", "500k+"],
        ordinal: true,
        scores: &[-1.0, -0.5, 0.0, 0.5, 1.0],
        base: &[0.15, 0.25, 0.27, 0.16, 0.17],
        parents: &[("Education", 0.7)],
    },
    Node {
        name: "VoteIntent",
        levels: &["Left", "Right", "Other"],
        ordinal: false,
        scores: &[1.0, -1.0, 0.0],
        base: &[0.36, 0.38, 0.26],
        parents: &[("Education", 0.9), ("Age", -0.5), ("Municipality", 0.5)],
    },
    Node {
        name: "InterestAI",
        levels: &["Not at all", "Less strongly", "Strongly", "Very strongly"],
        ordinal: true,
        scores: &ORD4,
        base: &[0.2, 0.35, 0.3, 0.15],
        parents: &[("Sex", 0.5), ("Education", 0.9), ("Age", -0.6)],
    },
    Node {
        name: "InformedAI",
        levels: &["Very poor", "Rather poor", "Rather good", "Very good"],
        ordinal: true,
        scores: &ORD4,
        base: &[0.15, 0.4, 0.35, 0.1],
        parents: &[("InterestAI", 1.8), ("Education", 0.6)],
    },
    Node {
        name: "MediaAI",
        levels: &["Yes", "No"],
        ordinal: false,
        scores: &YES_NO,
        base: &[0.7, 0.3],
        parents: &[("InterestAI", 1.3), ("Age", 0.4)],
    },
    Node {
        name: "FriendsAI",
        levels: &["Yes", "No"],
        ordinal: false,
        scores: &YES_NO,
        base: &[0.45, 0.55],
        parents: &[("InterestAI", 1.5), ("Education", 0.5)],
    },
    Node {
        name: "SearchAI",
        levels: &["Yes", "No"],
        ordinal: false,
        scores: &YES_NO,
        base: &[0.3, 0.7],
        parents: &[("InterestAI", 1.6), ("InformedAI", 0.8)],
    },
    Node {
        name: "AIEasierLife",
        levels: &AGREE_DK,
        ordinal: true,
        scores: &ORD4_DK,
        base: &[0.14, 0.27, 0.38, 0.19, 0.017],
        parents: &[("InterestAI", 1.6), ("Age", -0.5)],
    },
    Node {
        name: "AIFieldBenefit",
        levels: &AGREE,
        ordinal: true,
        scores: &ORD4,
        base: &[0.12, 0.25, 0.4, 0.23],
        parents: &[("AIEasierLife", 1.2), ("InformedAI", 1.0)],
    },
    Node {
        name: "AIReduceShortageWorkers",
        levels: &AGREE,
        ordinal: true,
        scores: &ORD4,
        base: &[0.15, 0.3, 0.37, 0.18],
        parents: &[("AIEasierLife", 1.4)],
    },
    Node {
        name: "AIHealtcareBenefit",
        levels: &AGREE_DK,
        ordinal: true,
        scores: &ORD4_DK,
        base: &[0.08, 0.2, 0.4, 0.27, 0.05],
        parents: &[("AIEasierLife", 1.3), ("AIFieldBenefit", 0.9)],
    },
    Node {
        name: "AIvsHuman",
        levels: &AGREE,
        ordinal: true,
        scores: &ORD4,
        base: &[0.12, 0.25, 0.38, 0.25],
        parents: &[("InformedAI", 0.9)],
    },
    Node {
        name: "AIFalseInfo",
        levels: &AGREE,
        ordinal: true,
        scores: &ORD4,
        base: &[0.06, 0.14, 0.4, 0.4],
        parents: &[("AIvsHuman", 1.5)],
    },
    Node {
        name: "DevelopAI",
        levels: &["Risk", "Opportunity", "Both", "Don't know"],
        ordinal: false,
        scores: &[-1.0, 1.0, 0.0, 0.0],
        base: &[0.4, 0.36, 0.22, 0.02],
        parents: &[("AIEasierLife", 2.0), ("InterestAI", 0.8)],
    },
    Node {
        name: "HeardEURegulation",
        levels: &["Yes", "No"],
        ordinal: false,
        scores: &YES_NO,
        base: &[0.22, 0.78],
        parents: &[("InterestAI", 1.2), ("SearchAI", 0.6), ("FriendsAI", 0.4)],
    },
    Node {
        name: "EUAppropriateRegulation",
        levels: &["Not strict enough", "Appropriate", "Too strict", "Don't know"],
        ordinal: false,
        scores: &[-1.0, 0.0, 1.0, 0.0],
        base: &[0.3, 0.35, 0.1, 0.25],
        parents: &[("HeardEURegulation", 0.5), ("VoteIntent", 0.9)],
    },
    Node {
        name: "AIUncontrollable",
        levels: &AGREE_DK,
        ordinal: true,
        scores: &ORD4_DK,
        base: &[0.15, 0.3, 0.3, 0.25, 0.02],
        parents: &[
            ("AIEasierLife", -1.4),
            ("AIFalseInfo", 1.3),
            ("EUAppropriateRegulation", -0.8),
        ],
    },
    Node {
        name: "AIRegulations",
        levels: &["Yes", "No"],
        ordinal: false,
        scores: &YES_NO,
        base: &[0.88, 0.12],
        parents: &[("EUAppropriateRegulation", -1.0), ("VoteIntent", 0.6)],
    },
];

fn node(name: &str) -> &'static Node {
    NODES.iter().find(|n| n.name == name).expect("generator node")
}

/// Variable names of the generator, in node order.
pub fn variable_names() -> Vec<&'static str> {
    NODES.iter().map(|n| n.name).collect()
}

/// Arcs of the generator network as `(from, to)` names.
pub fn true_arcs() -> Vec<(&'static str, &'static str)> {
    NODES
        .iter()
        .flat_map(|n| n.parents.iter().map(move |(p, _)| (*p, n.name)))
        .collect()
}

fn table(n: &Node) -> Vec<f64> {
    let parents: Vec<&Node> = n.parents.iter().map(|(p, _)| node(p)).collect();
    let cards: Vec<usize> = parents.iter().map(|p| p.levels.len()).collect();
    let configs: usize = cards.iter().product();
    let mut values = Vec::with_capacity(configs * n.levels.len());
    for j in 0..configs {
        let levels = beliefnet::model::config_levels(&cards, j);
        let tilt: f64 = parents
            .iter()
            .zip(n.parents)
            .zip(&levels)
            .map(|((p, (_, w)), &l)| w * p.scores[l])
            .sum();
        let row: Vec<f64> = n.base.iter().zip(n.scores).map(|(b, u)| b * (tilt * u).exp()).collect();
        let z: f64 = row.iter().sum();
        values.extend(row.iter().map(|x| x / z));
    }
    values
}

/// The generator network.
pub fn generator() -> Result<FittedNetwork> {
    let names: Vec<String> = variable_names().iter().map(|s| s.to_string()).collect();
    let arcs: Vec<(String, String)> = true_arcs()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let dag = Dag::from_arcs(&names, &arcs)?;
    let mut variables = Vec::with_capacity(NODES.len());
    let mut cpts = Vec::with_capacity(NODES.len());
    for n in NODES {
        variables.push(CategoricalVariable::new(n.name, n.levels.iter().copied())?.ordinal(n.ordinal));
        let parents: Vec<String> = n.parents.iter().map(|(p, _)| p.to_string()).collect();
        let cards = n.parents.iter().map(|(p, _)| node(p).levels.len()).collect();
        cpts.push(Cpt::new(n.name, parents, cards, n.levels.len(), table(n))?);
    }
    FittedNetwork::new(variables, dag, cpts, Default::default())
}

/// Theme name, member column prefix and count, and the respondent answer
/// that drives it.
pub struct ThemeDef {
    pub name: &'static str,
    pub prefix: &'static str,
    pub first: usize,
    pub members: usize,
    pub driver: &'static str,
    /// Mention propensity rises with the driver's score times this weight.
    pub weight: f64,
}

pub const OPPORTUNITY_THEMES: [ThemeDef; 5] = [
    ThemeDef {
        name: "PosWork",
        prefix: "pos",
        first: 1,
        members: 5,
        driver: "AIReduceShortageWorkers",
        weight: 1.2,
    },
    ThemeDef {
        name: "PosHealth",
        prefix: "pos",
        first: 6,
        members: 5,
        driver: "AIHealtcareBenefit",
        weight: 1.5,
    },
    ThemeDef {
        name: "PosLife",
        prefix: "pos",
        first: 11,
        members: 5,
        driver: "AIEasierLife",
        weight: 1.2,
    },
    ThemeDef {
        name: "PosTech",
        prefix: "pos",
        first: 16,
        members: 5,
        driver: "InterestAI",
        weight: 1.0,
    },
    ThemeDef {
        name: "PosGeneral",
        prefix: "pos",
        first: 21,
        members: 4,
        driver: "AIFieldBenefit",
        weight: 0.5,
    },
];

pub const RISK_THEMES: [ThemeDef; 5] = [
    ThemeDef {
        name: "RiskJobs",
        prefix: "risk",
        first: 1,
        members: 4,
        driver: "AIvsHuman",
        weight: 1.0,
    },
    ThemeDef {
        name: "RiskLossOfControl",
        prefix: "risk",
        first: 5,
        members: 4,
        driver: "AIUncontrollable",
        weight: 1.5,
    },
    ThemeDef {
        name: "RiskMisuseRegulation",
        prefix: "risk",
        first: 9,
        members: 4,
        driver: "EUAppropriateRegulation",
        weight: -1.0,
    },
    ThemeDef {
        name: "RiskData",
        prefix: "risk",
        first: 13,
        members: 3,
        driver: "AIFalseInfo",
        weight: 1.3,
    },
    ThemeDef {
        name: "RiskSociety",
        prefix: "risk",
        first: 16,
        members: 3,
        driver: "Age",
        weight: -0.5,
    },
];

impl ThemeDef {
    pub fn columns(&self) -> Vec<String> {
        (self.first..self.first + self.members)
            .map(|i| format!("{}{i:02}", self.prefix))
            .collect()
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Raw answer code of `level` for each rendered question.
fn code(var: &str, level: usize) -> &'static str {
    const AGREE_CODES: [&str; 5] = ["4", "3", "2", "1", "8"];
    match var {
        "Sex" => ["2", "1"][level],
        "Age" | "Education" => ["1", "2", "3", "4"][level],
        "Income" => ["1", "2", "3", "8"][level],
        "Municipality" => ["1", "2", "3", "4", "5"][level],
        "InterestAI" | "InformedAI" => ["4", "3", "2", "1"][level],
        "MediaAI" | "FriendsAI" | "SearchAI" | "HeardEURegulation" | "AIRegulations" => ["1", "2"][level],
        "EUAppropriateRegulation" => ["3", "1", "2", "4"][level],
        "DevelopAI" => ["2", "1", "3", "9"][level],
        _ => AGREE_CODES[level],
    }
}

/// Raw column of each rendered question.
pub const COLUMNS: [(&str, &str); 22] = [
    ("Sex", "sex"),
    ("Age", "agegrp"),
    ("Education", "educ"),
    ("Income", "income"),
    ("Municipality", "gemgr"),
    ("VoteIntent", "party"),
    ("InterestAI", "q1_interest"),
    ("InformedAI", "q2_informed"),
    ("MediaAI", "q3_media"),
    ("FriendsAI", "q4_friends"),
    ("SearchAI", "q5_search"),
    ("AIEasierLife", "p1_easier"),
    ("AIFieldBenefit", "p2_fields"),
    ("AIReduceShortageWorkers", "p3_shortage"),
    ("AIHealtcareBenefit", "p4_health"),
    ("AIvsHuman", "p5_human"),
    ("AIFalseInfo", "p6_falseinfo"),
    ("DevelopAI", "develop"),
    ("HeardEURegulation", "heard_eu"),
    ("EUAppropriateRegulation", "eu_view"),
    ("AIUncontrollable", "p7_uncontrol"),
    ("AIRegulations", "ai_law"),
];

/// Raw survey export with `rows` respondents.
///
/// Beyond the generator draw: 1% of education, interest and information
/// answers become code 9 (no answer), 2% of party answers become 99
/// (refused), party codes are spread over parties within each camp, and
/// theme indicators are filled only for respondents routed to the open
/// question (risk items for Risk/Both, opportunity items for
/// Opportunity/Both).
pub fn survey_csv(rows: usize, seed: u64) -> Result<Vec<u8>> {
    let net = generator()?;
    let data = sample(&net, rows, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let col = |name: &str| data.index_of(name).expect("generator column");
    let score = |name: &str, r: usize| node(name).scores[data.value(r, col(name)).expect("complete sample")];

    let mut header = vec!["id".to_string(), "weight".to_string()];
    header.extend(COLUMNS.iter().map(|(_, c)| c.to_string()));
    for t in OPPORTUNITY_THEMES.iter().chain(&RISK_THEMES) {
        header.extend(t.columns());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| beliefnet::Error::Csv(e);
    w.write_record(&header).map_err(csv_err)?;

    for r in 0..rows {
        let mut rec = vec![(r + 1).to_string(), format!("{:.3}", rng.random_range(0.4..2.2))];
        for (var, _) in COLUMNS {
            let level = data.value(r, col(var)).expect("complete sample");
            let cell = match var {
                "VoteIntent" if rng.random_bool(0.02) => "99",
                "VoteIntent" => {
                    let camp: &[&str] = match level {
                        0 => &["1", "2", "3"],
                        1 => &["4", "5", "6"],
                        _ => &["7", "8"],
                    };
                    camp[rng.random_range(0..camp.len())]
                }
                "Education" | "InterestAI" | "InformedAI" if rng.random_bool(0.01) => "9",
                _ => code(var, level),
            };
            rec.push(cell.to_string());
        }
        let framing = data.value(r, col("DevelopAI")).expect("complete sample");
        let asked_opportunity = matches!(framing, 1 | 2);
        let asked_risk = matches!(framing, 0 | 2);
        for (themes, asked) in [(&OPPORTUNITY_THEMES, asked_opportunity), (&RISK_THEMES, asked_risk)] {
            for t in themes.iter() {
                let p = logistic(-1.0 + t.weight * score(t.driver, r));
                let active = asked && rng.random_bool(p);
                let mut cells = vec![if asked { "0" } else { "" }; t.members];
                if active {
                    let first = rng.random_range(0..t.members);
                    for (i, c) in cells.iter_mut().enumerate() {
                        if i == first || rng.random_bool(0.3) {
                            *c = "1";
                        }
                    }
                }
                rec.extend(cells.into_iter().map(String::from));
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| beliefnet::Error::InvalidConfig(e.to_string()))
}
