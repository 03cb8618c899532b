//! Scenario files: what to run, on which instance, with which seeds.

use std::collections::BTreeMap;
use std::path::Path;

use dynideal::Instance;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// An instance as written in scenario files: `{"instance":"FiniteSym","N":8,"k":4}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub instance: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, usize>,
}

impl InstanceSpec {
    pub fn of(inst: &Instance) -> Self {
        let params = match inst {
            Instance::FiniteSym { n, k } => [("N".to_string(), *n), ("k".to_string(), *k)].into(),
            Instance::AbelianGrid { m, modulus } => [("m".to_string(), *m), ("j".to_string(), modulus / 2)].into(),
            _ => BTreeMap::new(),
        };
        InstanceSpec { instance: inst.name().to_string(), params }
    }

    pub fn build(&self) -> Result<Instance, CliError> {
        let allowed: &[&str] = match self.instance.as_str() {
            "FiniteSym" => &["N", "k"],
            "AbelianGrid" => &["m", "j"],
            _ => &[],
        };
        if let Some(k) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Invalid(format!("{} takes no parameter {k:?}", self.instance)));
        }
        let p: Vec<(String, usize)> = self.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        Ok(Instance::from_name(&self.instance, &p)?)
    }

    /// `BoundedQ` or `FiniteSym:N=8,k=4`.
    pub fn parse_short(s: &str) -> Result<Self, CliError> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Invalid(format!("expected key=value, got {kv:?}")))?;
            let v: usize = v.trim().parse().map_err(|_| CliError::Invalid(format!("bad value in {kv:?}")))?;
            params.insert(k.trim().to_string(), v);
        }
        let spec = InstanceSpec { instance: name.trim().to_string(), params };
        spec.build()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Witnesses,
    Game,
    Hfa,
    Fraisse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Cover,
    Sigma,
    Rank,
    Simplicity,
    Factorization,
    Play,
    Support,
    Abelian,
    Amalgamation,
}

impl Task {
    pub fn suite(self) -> Suite {
        match self {
            Task::Cover | Task::Sigma | Task::Rank | Task::Simplicity | Task::Factorization => Suite::Witnesses,
            Task::Play => Suite::Game,
            Task::Support | Task::Abelian => Suite::Hfa,
            Task::Amalgamation => Suite::Fraisse,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strategies {
    pub one: String,
    pub two: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    pub suite: Suite,
    pub task: Task,
    pub seed: u64,
    /// Game length, or the number of sets in a sigma family.
    #[serde(default)]
    pub horizon: usize,
    /// Search budget for supports and orbits.
    #[serde(default)]
    pub budget: usize,
    /// Sampled cases; 0 asks for exhaustive checking where that exists.
    #[serde(default)]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Strategies>,
    /// Structure sizes `[|A|, |B|]` for amalgamation positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub budget: Option<usize>,
}

impl Scenario {
    pub fn instance(&self) -> Result<Instance, CliError> {
        self.instance
            .as_ref()
            .ok_or_else(|| CliError::Invalid(format!("task {:?} needs an instance", self.task)))?
            .build()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.task.suite() != self.suite {
            return Err(CliError::Invalid(format!("task {:?} is not part of suite {:?}", self.task, self.suite)));
        }
        if self.task != Task::Amalgamation {
            self.instance()?;
        }
        if self.task == Task::Play && self.strategies.is_none() {
            return Err(CliError::Invalid("games need strategies".into()));
        }
        Ok(())
    }

    pub fn with_overrides(mut self, o: Overrides) -> Self {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(h) = o.horizon {
            self.horizon = h;
        }
        if let Some(b) = o.budget {
            self.budget = b;
        }
        self
    }

    pub fn from_json(text: &str, source_name: &str) -> Result<Scenario, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::config(source_name, &e))?;
        s.validate()?;
        Ok(s)
    }
}

fn spec(inst: Instance) -> Option<InstanceSpec> {
    Some(InstanceSpec::of(&inst))
}

fn strategies(one: &str, two: &str) -> Option<Strategies> {
    Some(Strategies { one: one.into(), two: two.into() })
}

fn base(name: &str, description: &str, task: Task, instance: Option<InstanceSpec>, seed: u64) -> Scenario {
    Scenario {
        name: name.into(),
        description: description.into(),
        instance,
        suite: task.suite(),
        task,
        seed,
        horizon: 0,
        budget: 0,
        trials: 0,
        strategies: None,
        sizes: None,
    }
}

/// Built-in scenarios, one per worked example.
pub fn catalog() -> Vec<Scenario> {
    let sym = |n, k| Instance::FiniteSym { n, k };
    vec![
        Scenario {
            trials: 200,
            ..base("bounded-cofinal-default", "cover witnesses and certificate transport on bounded sets", Task::Cover, spec(Instance::BoundedQ), 1)
        },
        base("finite-sym-cofinal", "exhaustive cover witnesses for Sym(7), sets of size < 3", Task::Cover, spec(sym(7, 3)), 2),
        Scenario {
            horizon: 20,
            trials: 10,
            strategies: strategies("random-I", "cofinal-II"),
            ..base("bounded-game", "cofinal player II against random play on bounded sets", Task::Play, spec(Instance::BoundedQ), 3)
        },
        Scenario {
            horizon: 20,
            trials: 5,
            strategies: strategies("random-I", "cofinal-II"),
            ..base("finite-sym-game", "cofinal player II against random play in Sym(20), k = 4", Task::Play, spec(sym(20, 4)), 4)
        },
        Scenario {
            horizon: 5,
            trials: 10,
            strategies: strategies("stratified-I:1,2,4,8,16", "random-II"),
            ..base("stratified-game", "stratified player I forcing large finite sets", Task::Play, spec(sym(40, 41)), 5)
        },
        Scenario {
            horizon: 12,
            trials: 3,
            strategies: strategies("interleave-I", "random-II"),
            ..base("interleave-game", "interleaving player I on closed countable sets", Task::Play, spec(Instance::CountableClosedQ), 6)
        },
        Scenario {
            horizon: 3,
            trials: 50,
            ..base("well-ordered-sigma", "countable families of well-ordered sets moved under a fixed set", Task::Sigma, spec(Instance::WellOrderedQ), 7)
        },
        Scenario {
            horizon: 3,
            trials: 50,
            ..base("bounded-below-sigma", "the same with sets bounded below every rational", Task::Sigma, spec(Instance::WellOrderedBoundedBelowQ), 8)
        },
        Scenario {
            trials: 20,
            ..base("countable-closed-rank", "rank obstruction to cofinal orbits of closed countable sets", Task::Rank, spec(Instance::CountableClosedQ), 9)
        },
        base("simplicity-sym", "normal closures of stabilizers in Sym(5)", Task::Simplicity, spec(sym(5, 6)), 10),
        Scenario {
            trials: 100,
            ..base("factorization-sym", "two-factor conjugate factorizations in Sym(12)", Task::Factorization, spec(sym(12, 13)), 11)
        },
        Scenario {
            trials: 20,
            budget: 10_000,
            ..base("support-calculus", "supports, definable closure and choice selectors in Sym(8), k = 3", Task::Support, spec(sym(8, 3)), 12)
        },
        Scenario {
            trials: 20,
            budget: 1_000,
            ..base("abelian-grid", "orbits and selector refutations on the abelian grid", Task::Abelian, spec(Instance::AbelianGrid { m: 3, modulus: 4 }), 13)
        },
        Scenario {
            trials: 3,
            sizes: Some([2, 2]),
            ..base("fraisse-laws", "canonical amalgamation laws and conjugation witnesses", Task::Amalgamation, None, 14)
        },
    ]
}

pub fn scenario_list() -> Vec<String> {
    catalog().into_iter().map(|s| s.name).collect()
}

/// A catalog name, or a path to a scenario file.
pub fn load(name_or_path: &str) -> Result<Scenario, CliError> {
    if let Some(s) = catalog().into_iter().find(|s| s.name == name_or_path) {
        return Ok(s);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(CliError::UnknownScenario(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Scenario::from_json(&text, name_or_path)
}
