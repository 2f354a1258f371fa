//! Scenario files: the JSON surface of the simulator.
//!
//! A scenario bundles an environment, the colour rules, the initial
//! population, optional named bodies, and a horizon. Rationals are written as
//! strings (`"p/q"` or `"p"`) or plain integers; directions and colours are
//! referenced by name. See the guide for a commented example.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::automata::{
    validate_colour_set, Clause, Colour, GuardAtom, OutputRule, DEFAULT_CAP,
};
use crate::bodies::Body;
use crate::engine::{Model, PlacementSpec, World};
use crate::environment::{DirectionSet, Environment, GraphArc, LatticeCoord, Topology};
use crate::ratio::{parse_rat, Rat};
use crate::{Error, Result};

/// Default horizon when the scenario does not name one.
pub const DEFAULT_HORIZON: u64 = 4096;

/// A rational in a scenario file: `"p/q"`, `"p"`, or a bare integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatSpec {
    Int(i64),
    Text(String),
}

impl RatSpec {
    fn to_rat(&self, field: &str) -> Result<Rat> {
        match self {
            RatSpec::Int(i) => Ok(Rat::from_integer((*i).into())),
            RatSpec::Text(s) => {
                parse_rat(s).map_err(|_| Error::scenario(field, format!("bad rational '{s}'")))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Infinite,
    Torus { basis: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionSpec {
    pub name: String,
    pub vector: Vec<RatSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub dimension: usize,
    pub topology: TopologySpec,
    /// Custom direction set; the standard one for the dimension when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<DirectionSpec>>,
    /// Custom Euclidean embedding (unit vectors summing to zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Vec<f64>>>,
}

/// One atomic guard condition in a rule clause.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub dir: String,
    pub colour: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_least: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equals: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseSpec {
    pub when: Vec<AtomSpec>,
    pub then: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    #[serde(default)]
    pub clauses: Vec<ClauseSpec>,
    pub default: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColourSpec {
    pub name: String,
    pub rule: RuleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementEntry {
    pub id: u32,
    pub colour: String,
    /// Head vertex of the initial arc, in the spatial chart (n integers).
    pub head: Vec<i64>,
    pub dir: String,
}

/// A full scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub environment: EnvironmentSpec,
    #[serde(default = "default_cap")]
    pub saturation_cap: u32,
    pub colours: Vec<ColourSpec>,
    pub population: Vec<PlacementEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bodies: BTreeMap<String, Vec<u32>>,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
}

fn default_cap() -> u32 {
    DEFAULT_CAP
}

fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}

/// A compiled scenario: validated model, initial world, named bodies.
#[derive(Debug, Clone)]
pub struct CompiledScenario {
    pub model: Model,
    pub world: World,
    pub bodies: Vec<Body>,
    pub horizon: u64,
}

impl CompiledScenario {
    pub fn body(&self, name: &str) -> Option<&Body> {
        self.bodies.iter().find(|b| b.name == name)
    }
}

impl Scenario {
    pub fn from_str(text: &str) -> Result<Scenario> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_str(&text)
    }

    /// Resolves names, checks every invariant, and builds the runnable model.
    pub fn compile(&self) -> Result<CompiledScenario> {
        let env = self.compile_environment()?;
        if self.saturation_cap == 0 {
            return Err(Error::scenario("saturation_cap", "cap must be ≥ 1"));
        }
        if self.horizon == 0 {
            return Err(Error::scenario("horizon", "horizon must be ≥ 1"));
        }
        let colours = self.compile_colours(&env)?;
        let report = validate_colour_set(&colours, env.dirset(), self.saturation_cap);
        if !report.is_ok() {
            return Err(Error::scenario("colours", report.to_string()));
        }
        let model = Model { env, colours, cap: self.saturation_cap };
        let specs = self.compile_population(&model)?;
        let world = World::new(&model, specs)?;
        let mut bodies = Vec::new();
        for (name, members) in &self.bodies {
            if members.is_empty() {
                return Err(Error::scenario(
                    format!("bodies.{name}"),
                    "a body needs at least one member",
                ));
            }
            for id in members {
                if !self.population.iter().any(|p| p.id == *id) {
                    return Err(Error::scenario(
                        format!("bodies.{name}"),
                        format!("member {id} is not in the population"),
                    ));
                }
            }
            bodies.push(Body::new(name.clone(), members.clone()));
        }
        Ok(CompiledScenario { model, world, bodies, horizon: self.horizon })
    }

    fn compile_environment(&self) -> Result<Environment> {
        let n = self.environment.dimension;
        if n == 0 {
            return Err(Error::scenario("environment.dimension", "dimension must be ≥ 1"));
        }
        let topology = match &self.environment.topology {
            TopologySpec::Infinite => Topology::Infinite,
            TopologySpec::Torus { basis } => Topology::torus(basis.clone())?,
        };
        let dirset = match &self.environment.directions {
            None => DirectionSet::standard(n),
            Some(specs) => {
                let mut named = Vec::with_capacity(specs.len());
                for d in specs {
                    let field = format!("environment.directions.{}", d.name);
                    let vector: Vec<Rat> = d
                        .vector
                        .iter()
                        .map(|r| r.to_rat(&field))
                        .collect::<Result<_>>()?;
                    named.push((d.name.clone(), vector));
                }
                DirectionSet::new(n, named)?
            }
        };
        Environment::with_directions(dirset, topology, self.environment.embedding.clone())
    }

    fn compile_colours(&self, env: &Environment) -> Result<Vec<Colour>> {
        let dir = |name: &str, field: &str| {
            env.dirset()
                .by_name(name)
                .ok_or_else(|| Error::scenario(field, format!("unknown direction '{name}'")))
        };
        let colour_id = |name: &str, field: &str| {
            self.colours
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| Error::scenario(field, format!("unknown colour '{name}'")))
        };
        let mut colours = Vec::with_capacity(self.colours.len());
        for spec in &self.colours {
            let field = format!("colours.{}", spec.name);
            let mut clauses = Vec::with_capacity(spec.rule.clauses.len());
            for (ci, clause) in spec.rule.clauses.iter().enumerate() {
                let cfield = format!("{field}.clauses[{ci}]");
                let mut guard = Vec::with_capacity(clause.when.len());
                for atom in &clause.when {
                    let d = dir(&atom.dir, &cfield)?;
                    let c = colour_id(&atom.colour, &cfield)?;
                    let parsed = match (atom.at_least, atom.equals) {
                        (Some(min), None) => {
                            if min == 0 {
                                return Err(Error::scenario(
                                    &cfield,
                                    "at_least 0 is vacuous; use equals: 0 to test emptiness",
                                ));
                            }
                            GuardAtom::AtLeast { dir: d, colour: c, min }
                        }
                        (None, Some(0)) => GuardAtom::IsZero { dir: d, colour: c },
                        (None, Some(k)) => {
                            return Err(Error::scenario(
                                &cfield,
                                format!("equals supports only 0, got {k}"),
                            ));
                        }
                        _ => {
                            return Err(Error::scenario(
                                &cfield,
                                "exactly one of at_least / equals is required",
                            ));
                        }
                    };
                    guard.push(parsed);
                }
                clauses.push(Clause { guard, then: dir(&clause.then, &cfield)? });
            }
            let default = dir(&spec.rule.default, &format!("{field}.default"))?;
            colours.push(Colour {
                name: spec.name.clone(),
                rule: OutputRule { clauses, default },
            });
        }
        Ok(colours)
    }

    fn compile_population(&self, model: &Model) -> Result<Vec<PlacementSpec>> {
        let n = model.env.dim();
        let mut specs = Vec::with_capacity(self.population.len());
        for p in &self.population {
            let field = format!("population[id={}]", p.id);
            let colour = self
                .colours
                .iter()
                .position(|c| c.name == p.colour)
                .ok_or_else(|| {
                    Error::scenario(&field, format!("unknown colour '{}'", p.colour))
                })?;
            let dir = model
                .env
                .dirset()
                .by_name(&p.dir)
                .ok_or_else(|| Error::scenario(&field, format!("unknown direction '{}'", p.dir)))?;
            if p.head.len() != n {
                return Err(Error::scenario(
                    &field,
                    format!("head has {} coordinates, expected {n}", p.head.len()),
                ));
            }
            specs.push(PlacementSpec {
                elem: p.id,
                colour,
                arc: GraphArc { head: LatticeCoord::from_spatial(&p.head), dir },
            });
        }
        Ok(specs)
    }
}
