use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stable public names of the search strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmId {
    #[serde(rename = "GA")]
    Ga,
    #[serde(rename = "DE")]
    De,
    #[serde(rename = "MA")]
    Ma,
    #[serde(rename = "PSO")]
    Pso,
    #[serde(rename = "ES")]
    Es,
    #[serde(rename = "ABC")]
    Abc,
    #[serde(rename = "LEVY_ES")]
    LevyEs,
    #[serde(rename = "SADE")]
    Sade,
    #[serde(rename = "SAP_DE")]
    SapDe,
    #[serde(rename = "JADE")]
    Jade,
    #[serde(rename = "CPSO")]
    Cpso,
    #[serde(rename = "CLPSO")]
    Clpso,
    #[serde(rename = "HPSO")]
    Hpso,
    #[serde(rename = "PPSO")]
    Ppso,
    #[serde(rename = "HS")]
    Hs,
    #[serde(rename = "GWO")]
    Gwo,
    #[serde(rename = "WOA")]
    Woa,
    #[serde(rename = "SCA")]
    Sca,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 18] = [
        Self::Ga,
        Self::De,
        Self::Ma,
        Self::Pso,
        Self::Es,
        Self::Abc,
        Self::LevyEs,
        Self::Sade,
        Self::SapDe,
        Self::Jade,
        Self::Cpso,
        Self::Clpso,
        Self::Hpso,
        Self::Ppso,
        Self::Hs,
        Self::Gwo,
        Self::Woa,
        Self::Sca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ga => "GA",
            Self::De => "DE",
            Self::Ma => "MA",
            Self::Pso => "PSO",
            Self::Es => "ES",
            Self::Abc => "ABC",
            Self::LevyEs => "LEVY_ES",
            Self::Sade => "SADE",
            Self::SapDe => "SAP_DE",
            Self::Jade => "JADE",
            Self::Cpso => "CPSO",
            Self::Clpso => "CLPSO",
            Self::Hpso => "HPSO",
            Self::Ppso => "PPSO",
            Self::Hs => "HS",
            Self::Gwo => "GWO",
            Self::Woa => "WOA",
            Self::Sca => "SCA",
        }
    }

    /// Tunable parameters with defaults and accepted ranges.
    pub fn params(self) -> &'static [ParamSpec] {
        use AlgorithmId::*;
        match self {
            Ga => GA_PARAMS,
            Ma => MA_PARAMS,
            De => DE_PARAMS,
            Sade => SADE_PARAMS,
            SapDe => SAPDE_PARAMS,
            Jade => JADE_PARAMS,
            Pso | Ppso => PSO_PARAMS,
            Cpso => CPSO_PARAMS,
            Clpso => CLPSO_PARAMS,
            Hpso => HPSO_PARAMS,
            Es | LevyEs => ES_PARAMS,
            Abc => ABC_PARAMS,
            Hs => HS_PARAMS,
            Gwo | Woa | Sca => SWARM_PARAMS,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    /// Case-insensitive; `-` is accepted for `_` (`sap-de`, `levy-es`).
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        let norm = match norm.as_str() {
            "LEVYES" => "LEVY_ES",
            "SAPDE" => "SAP_DE",
            other => other,
        };
        Self::ALL
            .iter()
            .copied()
            .find(|a| a.name() == norm)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    pub max: f64,
}

const fn p(name: &'static str, default: f64, min: f64, max: f64) -> ParamSpec {
    ParamSpec { name, default, min, max }
}

const GA_PARAMS: &[ParamSpec] = &[
    p("pc", 0.95, 0.0, 1.0),
    p("pm", 0.05, 0.0, 1.0),
    p("tournament", 2.0, 1.0, 64.0),
    p("crossover_points", 2.0, 1.0, 128.0),
];
const MA_PARAMS: &[ParamSpec] = &[
    p("pc", 0.85, 0.0, 1.0),
    p("pm", 0.15, 0.0, 1.0),
    p("tournament", 2.0, 1.0, 64.0),
    p("crossover_points", 2.0, 1.0, 128.0),
    p("local_search", 0.5, 0.0, 1.0),
];
/// `strategy`: 0 = current-to-rand/1/bin, 1 = rand/1/bin.
const DE_PARAMS: &[ParamSpec] = &[p("f", 0.8, 0.0, 2.0), p("cr", 0.9, 0.0, 1.0), p("strategy", 0.0, 0.0, 1.0)];
const SADE_PARAMS: &[ParamSpec] = &[
    p("f_mean", 0.5, 0.0, 2.0),
    p("f_sd", 0.3, 0.0, 2.0),
    p("cr_mean", 0.5, 0.0, 1.0),
    p("learning_period", 5.0, 1.0, 1000.0),
];
const SAPDE_PARAMS: &[ParamSpec] = &[p("max_growth", 10.0, 1.0, 100.0)];
const JADE_PARAMS: &[ParamSpec] = &[
    p("mu_f", 0.5, 0.0, 1.0),
    p("mu_cr", 0.5, 0.0, 1.0),
    p("p", 0.1, 0.0, 1.0),
    p("c", 0.1, 0.0, 1.0),
    p("archive", 1.0, 0.0, 1.0),
];
const PSO_PARAMS: &[ParamSpec] = &[
    p("c1", 2.05, 0.0, 10.0),
    p("c2", 2.05, 0.0, 10.0),
    p("w_min", 0.4, 0.0, 2.0),
    p("w_max", 0.9, 0.0, 2.0),
    p("vmax", 0.2, 0.0, 1.0),
];
const CPSO_PARAMS: &[ParamSpec] = &[
    p("c1", 2.05, 0.0, 10.0),
    p("c2", 2.05, 0.0, 10.0),
    p("w_min", 0.4, 0.0, 2.0),
    p("w_max", 0.9, 0.0, 2.0),
    p("vmax", 0.2, 0.0, 1.0),
    p("cls_steps", 2.0, 0.0, 100.0),
    p("cls_radius", 0.1, 0.0, 1.0),
];
const CLPSO_PARAMS: &[ParamSpec] = &[
    p("c", 1.2, 0.0, 10.0),
    p("w_min", 0.4, 0.0, 2.0),
    p("w_max", 0.9, 0.0, 2.0),
    p("vmax", 0.2, 0.0, 1.0),
    p("gap", 7.0, 1.0, 1000.0),
];
const HPSO_PARAMS: &[ParamSpec] = &[p("ci", 0.5, 0.0, 10.0), p("cf", 0.0, 0.0, 10.0), p("vmax", 0.2, 0.0, 1.0)];
const ES_PARAMS: &[ParamSpec] = &[p("lambda", 0.75, 0.0, 10.0), p("sigma", 0.1, 0.0, 1.0)];
const ABC_PARAMS: &[ParamSpec] = &[p("limit_factor", 1.0, 0.0, 100.0)];
const HS_PARAMS: &[ParamSpec] = &[p("hmcr", 0.15, 0.0, 1.0), p("par", 0.5, 0.0, 1.0), p("bandwidth", 1.0, 0.0, 255.0)];
const SWARM_PARAMS: &[ParamSpec] = &[];

pub const DEFAULT_POPULATION: usize = 20;
pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub algorithm: AlgorithmId,
    #[serde(default = "default_np")]
    pub population_size: usize,
    #[serde(default = "default_budget")]
    pub eval_budget: usize,
    #[serde(default)]
    pub seed: u64,
    /// Overrides of the algorithm's parameter defaults.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Keep every iteration's positions in the result (large).
    #[serde(default)]
    pub record_snapshots: bool,
}

fn default_np() -> usize {
    DEFAULT_POPULATION
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

impl OptimizerConfig {
    pub fn new(algorithm: AlgorithmId, seed: u64) -> Self {
        Self {
            algorithm,
            population_size: DEFAULT_POPULATION,
            eval_budget: DEFAULT_BUDGET,
            seed,
            params: BTreeMap::new(),
            record_snapshots: false,
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::InvalidConfig(format!("population size {} < 4", self.population_size)));
        }
        if self.eval_budget < self.population_size {
            return Err(Error::InvalidConfig(format!(
                "budget {} smaller than population size {}",
                self.eval_budget, self.population_size
            )));
        }
        let specs = self.algorithm.params();
        for (k, &v) in &self.params {
            let spec = specs
                .iter()
                .find(|s| s.name == k)
                .ok_or_else(|| Error::InvalidConfig(format!("{} has no parameter `{k}`", self.algorithm)))?;
            if !(spec.min..=spec.max).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "{}.{k} = {v} outside [{}, {}]",
                    self.algorithm, spec.min, spec.max
                )));
            }
        }
        Ok(())
    }

    /// Parameter value, falling back to the default.
    pub fn param(&self, name: &str) -> f64 {
        if let Some(&v) = self.params.get(name) {
            return v;
        }
        self.algorithm
            .params()
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.default)
            .unwrap_or_else(|| panic!("{} has no parameter `{name}`", self.algorithm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.name().parse::<AlgorithmId>().unwrap(), a);
        }
        assert_eq!("sap-de".parse::<AlgorithmId>().unwrap(), AlgorithmId::SapDe);
        assert_eq!("LevyES".parse::<AlgorithmId>().unwrap(), AlgorithmId::LevyEs);
        assert!("ALO".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn defaults() {
        let c = OptimizerConfig::new(AlgorithmId::Ga, 0);
        assert_eq!((c.population_size, c.eval_budget), (20, 1000));
        assert_eq!(c.param("pc"), 0.95);
        assert_eq!(c.param("pm"), 0.05);
        let c = OptimizerConfig::new(AlgorithmId::Ma, 0);
        assert_eq!((c.param("pc"), c.param("pm"), c.param("local_search")), (0.85, 0.15, 0.5));
    }

    #[test]
    fn validation() {
        let mut c = OptimizerConfig::new(AlgorithmId::De, 0);
        c.eval_budget = 10;
        assert!(c.validate().is_err());
        let c = OptimizerConfig::new(AlgorithmId::De, 0).with_param("cr", 1.5);
        assert!(c.validate().is_err());
        let c = OptimizerConfig::new(AlgorithmId::De, 0).with_param("pm", 0.1);
        assert!(c.validate().is_err());
        let mut c = OptimizerConfig::new(AlgorithmId::De, 0);
        c.population_size = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn serde_names() {
        let s = serde_json::to_string(&AlgorithmId::LevyEs).unwrap();
        assert_eq!(s, "\"LEVY_ES\"");
    }
}
