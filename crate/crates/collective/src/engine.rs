//! Synchronous discrete dynamics.
//!
//! All bodies read the same time-t world and move simultaneously: for each
//! placement the neighbourhood of its head vertex is computed against the
//! frozen state, the vacuum override or the colour's rule picks the next
//! direction, and the whole batch of moves is applied at once. Neighbourhood
//! evaluation within one step may run in parallel; the observable result is
//! identical to the sequential one.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

use crate::automata::{evaluate, Colour, ColourId, NeighbourhoodState};
use crate::environment::{DirId, Environment, GraphArc, LatticeCoord};
use crate::ratio::Rat;
use crate::{Error, Result};

/// Identifier of an elementary body within a scenario.
pub type ElemId = u32;

/// Immutable model data shared by every step: environment, colours, cap.
#[derive(Debug, Clone)]
pub struct Model {
    pub env: Environment,
    pub colours: Vec<Colour>,
    pub cap: u32,
}

/// How to evaluate neighbourhoods within one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Sequential,
    Parallel,
}

/// Initial placement of one elementary body, before canonicalization.
#[derive(Debug, Clone)]
pub struct PlacementSpec {
    pub elem: ElemId,
    pub colour: ColourId,
    pub arc: GraphArc,
}

/// A body located on an arc, with its unwrapped tail counts (the winding
/// vector tracked under torus topology).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub elem: ElemId,
    pub colour: ColourId,
    /// Quotient-reduced arc used for neighbourhood lookups.
    pub arc: GraphArc,
    /// Unwrapped per-direction step counts of the arc's tail vertex.
    pub tail_counts: Vec<i64>,
}

/// The world at one integral moment of absolute time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub t: u64,
    pub placements: Vec<Placement>,
}

impl World {
    /// Builds the time-0 world. Placements are sorted by elementary id; ids
    /// must be unique, colours and directions must exist in the model. The
    /// given head vertex (before quotient reduction) fixes the unwrapped lift.
    pub fn new(model: &Model, specs: Vec<PlacementSpec>) -> Result<World> {
        let m = model.env.dirset().len();
        let mut placements = Vec::with_capacity(specs.len());
        let mut seen = std::collections::HashSet::new();
        for spec in specs {
            if !seen.insert(spec.elem) {
                return Err(Error::scenario(
                    "population",
                    format!("duplicate elementary id {}", spec.elem),
                ));
            }
            if spec.colour >= model.colours.len() {
                return Err(Error::scenario(
                    "population",
                    format!("elementary {} references unknown colour", spec.elem),
                ));
            }
            if spec.arc.dir >= m {
                return Err(Error::scenario(
                    "population",
                    format!("elementary {} references unknown direction", spec.elem),
                ));
            }
            let mut tail = spec.arc.head.counts().to_vec();
            tail[spec.arc.dir] -= 1;
            let tail = LatticeCoord::from_counts(&tail);
            placements.push(Placement {
                elem: spec.elem,
                colour: spec.colour,
                arc: GraphArc { head: model.env.reduce(&spec.arc.head), dir: spec.arc.dir },
                tail_counts: tail.counts().to_vec(),
            });
        }
        placements.sort_by_key(|p| p.elem);
        Ok(World { t: 0, placements })
    }
}

/// The saturated occupancy matrix of the arcs ending at `vertex`.
pub fn neighbourhood(model: &Model, world: &World, vertex: &LatticeCoord) -> NeighbourhoodState {
    let mut nb =
        NeighbourhoodState::empty(model.env.dirset().len(), model.colours.len(), model.cap);
    let vertex = model.env.reduce(vertex);
    for p in &world.placements {
        if p.arc.head == vertex {
            nb.add(p.arc.dir, p.colour);
        }
    }
    nb
}

fn vertex_table(model: &Model, world: &World) -> HashMap<LatticeCoord, NeighbourhoodState> {
    let mut table: HashMap<LatticeCoord, NeighbourhoodState> = HashMap::new();
    let dirs = model.env.dirset().len();
    let colours = model.colours.len();
    for p in &world.placements {
        table
            .entry(p.arc.head.clone())
            .or_insert_with(|| NeighbourhoodState::empty(dirs, colours, model.cap))
            .add(p.arc.dir, p.colour);
    }
    table
}

fn next_direction(
    model: &Model,
    table: &HashMap<LatticeCoord, NeighbourhoodState>,
    p: &Placement,
) -> Result<DirId> {
    let nb = table.get(&p.arc.head).expect("own vertex is always populated");
    if nb.is_vacuum(p.arc.dir) {
        Ok(p.arc.dir)
    } else {
        evaluate(&model.colours[p.colour].rule, nb)
    }
}

/// One synchronous update of every placement.
pub fn step(model: &Model, world: &World, mode: ExecMode) -> Result<World> {
    let table = vertex_table(model, world);
    let next_dirs: Vec<DirId> = match mode {
        ExecMode::Sequential => world
            .placements
            .iter()
            .map(|p| next_direction(model, &table, p))
            .collect::<Result<_>>()?,
        ExecMode::Parallel => world
            .placements
            .par_iter()
            .map(|p| next_direction(model, &table, p))
            .collect::<Result<_>>()?,
    };
    let placements = world
        .placements
        .iter()
        .zip(next_dirs)
        .map(|(p, d)| {
            let mut tail = p.tail_counts.clone();
            // The body slides along its current arc during [t, t+1].
            tail[p.arc.dir] += 1;
            Placement {
                elem: p.elem,
                colour: p.colour,
                arc: GraphArc { head: model.env.step_vertex(&p.arc.head, d), dir: d },
                tail_counts: tail,
            }
        })
        .collect();
    Ok(World { t: world.t + 1, placements })
}

/// Recorded history of one elementary body over a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemTrace {
    pub elem: ElemId,
    pub colour: ColourId,
    /// Reduced arcs at t = 0..=T.
    pub arcs: Vec<GraphArc>,
    /// Unwrapped tail counts at t = 0..=T.
    pub tails: Vec<Vec<i64>>,
}

impl ElemTrace {
    pub fn dir(&self, t: u64) -> DirId {
        self.arcs[t as usize].dir
    }

    /// Turn flag at `t`: the direction at `t+1` differs from the one at `t`.
    pub fn turned(&self, t: u64) -> bool {
        self.arcs[t as usize + 1].dir != self.arcs[t as usize].dir
    }
}

/// A full run: model, horizon, and per-elementary histories (sorted by id).
#[derive(Debug, Clone)]
pub struct Trace {
    pub model: Model,
    pub horizon: u64,
    pub elems: Vec<ElemTrace>,
}

impl Trace {
    pub fn elem_index(&self, id: ElemId) -> Option<usize> {
        self.elems.binary_search_by_key(&id, |e| e.elem).ok()
    }

    /// Unwrapped position at a rational time `0 ≤ t ≤ T`, as a rational count
    /// vector: `tail(b(t)) + μ·indicator(dir(b(t)))` for `t_real = t + μ`.
    pub fn interpolate_counts(&self, idx: usize, t_real: &Rat) -> Result<Vec<Rat>> {
        let e = &self.elems[idx];
        let horizon = Rat::from_integer(BigInt::from(self.horizon));
        if t_real < &Rat::zero() || t_real > &horizon {
            return Err(Error::OutOfHorizon(crate::ratio::format_rat(t_real)));
        }
        let t = t_real.floor().to_integer().to_u64().expect("in range");
        let mu = t_real - Rat::from_integer(BigInt::from(t));
        let (t, mu) = if t == self.horizon && mu.is_zero() {
            (self.horizon, Rat::zero())
        } else {
            (t, mu)
        };
        let mut counts: Vec<Rat> = e.tails[t as usize]
            .iter()
            .map(|&c| Rat::from_integer(BigInt::from(c)))
            .collect();
        if !mu.is_zero() {
            counts[e.dir(t)] += mu;
        }
        Ok(counts)
    }

    /// Exact spatial position (lattice coordinates) at a rational time.
    pub fn interpolate(&self, idx: usize, t_real: &Rat) -> Result<Vec<Rat>> {
        Ok(self.model.env.project(&self.interpolate_counts(idx, t_real)?))
    }

    /// Unwrapped integer tail counts at integral time `t`.
    pub fn tail_counts(&self, idx: usize, t: u64) -> &[i64] {
        &self.elems[idx].tails[t as usize]
    }

    /// Exact spatial position at integral time `t`.
    pub fn position(&self, idx: usize, t: u64) -> Vec<Rat> {
        let counts: Vec<Rat> = self.elems[idx].tails[t as usize]
            .iter()
            .map(|&c| Rat::from_integer(BigInt::from(c)))
            .collect();
        self.model.env.project(&counts)
    }

    /// The recorded world at integral time `t`.
    pub fn world_at(&self, t: u64) -> World {
        let placements = self
            .elems
            .iter()
            .map(|e| Placement {
                elem: e.elem,
                colour: e.colour,
                arc: e.arcs[t as usize].clone(),
                tail_counts: e.tails[t as usize].clone(),
            })
            .collect();
        World { t, placements }
    }

    /// Re-runs the dynamics from the initial placement and compares the
    /// reconstruction with the recorded history.
    pub fn replay_matches(&self) -> Result<bool> {
        let replayed = run(&self.model, self.world_at(0), self.horizon, ExecMode::Sequential)?;
        Ok(replayed
            .elems
            .iter()
            .zip(&self.elems)
            .all(|(a, b)| a.arcs == b.arcs && a.tails == b.tails))
    }
}

/// Runs `steps` synchronous updates and records the full trace.
pub fn run(model: &Model, world: World, steps: u64, mode: ExecMode) -> Result<Trace> {
    let mut elems: Vec<ElemTrace> = world
        .placements
        .iter()
        .map(|p| ElemTrace {
            elem: p.elem,
            colour: p.colour,
            arcs: Vec::with_capacity(steps as usize + 1),
            tails: Vec::with_capacity(steps as usize + 1),
        })
        .collect();
    let mut current = world;
    record(&mut elems, &current);
    for _ in 0..steps {
        current = step(model, &current, mode)?;
        record(&mut elems, &current);
    }
    Ok(Trace { model: model.clone(), horizon: steps, elems })
}

fn record(elems: &mut [ElemTrace], world: &World) {
    for (e, p) in elems.iter_mut().zip(&world.placements) {
        e.arcs.push(p.arc.clone());
        e.tails.push(p.tail_counts.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{reflect_pair, OutputRule};
    use crate::environment::{Environment, Topology};
    use crate::ratio::{rat, rint};

    const R: DirId = 0;
    const L: DirId = 1;

    fn ring6_model() -> Model {
        Model {
            env: Environment::standard(1, Topology::ring(6).unwrap()).unwrap(),
            colours: reflect_pair(),
            cap: 3,
        }
    }

    /// The two-colour ring-6 clock: colour a entering vertex 1 from the left,
    /// colour b entering vertex 1 from the right.
    fn ring6_world(model: &Model) -> World {
        World::new(
            model,
            vec![
                PlacementSpec {
                    elem: 1,
                    colour: 0,
                    arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: R },
                },
                PlacementSpec {
                    elem: 2,
                    colour: 1,
                    arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: L },
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn neighbourhood_ring6_at_vertex_1() {
        let model = ring6_model();
        let world = ring6_world(&model);
        let nb = neighbourhood(&model, &world, &LatticeCoord::from_spatial(&[1]));
        assert_eq!(nb.get(R, 0), 1);
        assert_eq!(nb.get(L, 1), 1);
        assert_eq!(nb.get(R, 1), 0);
        assert_eq!(nb.get(L, 0), 0);
        // Empty vertex → all-zero matrix.
        let nb = neighbourhood(&model, &world, &LatticeCoord::from_spatial(&[3]));
        for d in 0..2 {
            for c in 0..2 {
                assert_eq!(nb.get(d, c), 0);
            }
        }
    }

    #[test]
    fn neighbourhood_saturates() {
        let model = ring6_model();
        let specs: Vec<PlacementSpec> = (0..5)
            .map(|i| PlacementSpec {
                elem: i,
                colour: 0,
                arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: R },
            })
            .collect();
        let world = World::new(&model, specs).unwrap();
        let nb = neighbourhood(&model, &world, &LatticeCoord::from_spatial(&[1]));
        assert_eq!(nb.get(R, 0), 3, "five bodies on one arc cap at K=3");
    }

    /// Full hand enumeration of the ring-6 clock. Reflections happen at the
    /// meetings (vertex 1 at t=0, vertex 4 at t=3); the state at t=6 equals
    /// the state at t=0.
    #[test]
    fn ring6_enumerated_trace() {
        let model = ring6_model();
        let trace =
            run(&model, ring6_world(&model), 6, ExecMode::Sequential).unwrap();

        let heads_a = [1, 0, 5, 4, 5, 0, 1];
        let dirs_a = [R, L, L, L, R, R, R];
        let heads_b = [1, 2, 3, 4, 3, 2, 1];
        let dirs_b = [L, R, R, R, L, L, L];
        let tails_a = [0, 1, 0, -1, -2, -1, 0];
        let tails_b = [2, 1, 2, 3, 4, 3, 2];

        for t in 0..=6u64 {
            let a = &trace.elems[0];
            let b = &trace.elems[1];
            assert_eq!(a.arcs[t as usize].head, LatticeCoord::from_spatial(&[heads_a[t as usize]]), "a head at t={t}");
            assert_eq!(a.arcs[t as usize].dir, dirs_a[t as usize], "a dir at t={t}");
            assert_eq!(b.arcs[t as usize].head, LatticeCoord::from_spatial(&[heads_b[t as usize]]), "b head at t={t}");
            assert_eq!(b.arcs[t as usize].dir, dirs_b[t as usize], "b dir at t={t}");
            assert_eq!(trace.position(0, t), vec![rint(tails_a[t as usize])]);
            assert_eq!(trace.position(1, t), vec![rint(tails_b[t as usize])]);
        }
        // Turn flags: both members turn exactly at t=0 and t=3.
        for t in 0..6u64 {
            let expect = t == 0 || t == 3;
            assert_eq!(trace.elems[0].turned(t), expect, "a turn at t={t}");
            assert_eq!(trace.elems[1].turned(t), expect, "b turn at t={t}");
        }
        // State at t=6 equals the state at t=0.
        let w0 = trace.world_at(0);
        let w6 = trace.world_at(6);
        for (p0, p6) in w0.placements.iter().zip(&w6.placements) {
            assert_eq!(p0.arc, p6.arc);
        }
    }

    #[test]
    fn single_body_moves_straight() {
        // A single body is always in vacuum, whatever its rule says.
        let hostile = OutputRule {
            clauses: Vec::new(),
            default: L, // would turn it around if it were ever consulted
        };
        let model = Model {
            env: Environment::standard(1, Topology::Infinite).unwrap(),
            colours: vec![Colour { name: "a".into(), rule: hostile }],
            cap: 3,
        };
        let world = World::new(
            &model,
            vec![PlacementSpec {
                elem: 7,
                colour: 0,
                arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: R },
            }],
        )
        .unwrap();
        let trace = run(&model, world, 10, ExecMode::Sequential).unwrap();
        for t in 0..=10u64 {
            assert_eq!(trace.elems[0].dir(t), R);
            assert_eq!(trace.position(0, t), vec![rint(t as i64)]);
        }
        for t in 0..10u64 {
            assert!(!trace.elems[0].turned(t));
        }
    }

    #[test]
    fn same_colour_head_on_merge() {
        // Identical neighbourhoods force identical outputs: both bodies output
        // colour a's default (R) and land on the same arc.
        let model = Model {
            env: Environment::standard(1, Topology::Infinite).unwrap(),
            colours: reflect_pair(),
            cap: 3,
        };
        let world = World::new(
            &model,
            vec![
                PlacementSpec {
                    elem: 1,
                    colour: 0,
                    arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: R },
                },
                PlacementSpec {
                    elem: 2,
                    colour: 0,
                    arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: L },
                },
            ],
        )
        .unwrap();
        let next = step(&model, &world, ExecMode::Sequential).unwrap();
        assert_eq!(next.placements[0].arc, next.placements[1].arc);
        assert_eq!(next.placements[0].arc.dir, R);
    }

    #[test]
    fn empty_population_run() {
        let model = ring6_model();
        let world = World::new(&model, Vec::new()).unwrap();
        let trace = run(&model, world, 5, ExecMode::Sequential).unwrap();
        assert_eq!(trace.horizon, 5);
        assert!(trace.elems.is_empty());
    }

    #[test]
    fn interpolate_examples() {
        let model = ring6_model();
        let trace = run(&model, ring6_world(&model), 6, ExecMode::Sequential).unwrap();
        // Body on arc (0→1, R) at t=0: x(1/2) = 1/2.
        assert_eq!(trace.interpolate(0, &rat(1, 2)).unwrap(), vec![rat(1, 2)]);
        // Integer time → tail vertex exactly.
        assert_eq!(trace.interpolate(0, &rint(2)).unwrap(), vec![rint(0)]);
        // Elementary a at t=3/2 is half-way along the L arc (1→0): x = 1/2.
        assert_eq!(trace.interpolate(0, &rat(3, 2)).unwrap(), vec![rat(1, 2)]);
        // Out-of-range times are rejected.
        assert!(trace.interpolate(0, &rat(-1, 2)).is_err());
        assert!(trace.interpolate(0, &rat(13, 2)).is_err());
        // Right endpoint is included.
        assert_eq!(trace.interpolate(0, &rint(6)).unwrap(), vec![rint(0)]);
    }

    #[test]
    fn population_is_conserved() {
        let model = ring6_model();
        let world = ring6_world(&model);
        let mut ids: Vec<(ElemId, ColourId)> =
            world.placements.iter().map(|p| (p.elem, p.colour)).collect();
        ids.sort_unstable();
        let trace = run(&model, world, 24, ExecMode::Sequential).unwrap();
        for t in 0..=24u64 {
            let mut now: Vec<(ElemId, ColourId)> = trace
                .world_at(t)
                .placements
                .iter()
                .map(|p| (p.elem, p.colour))
                .collect();
            now.sort_unstable();
            assert_eq!(now, ids);
        }
    }

    #[test]
    fn parallel_equals_sequential() {
        let model = ring6_model();
        let seq = run(&model, ring6_world(&model), 12, ExecMode::Sequential).unwrap();
        let par = run(&model, ring6_world(&model), 12, ExecMode::Parallel).unwrap();
        for (a, b) in seq.elems.iter().zip(&par.elems) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn replay_reproduces_trace() {
        let model = ring6_model();
        let trace = run(&model, ring6_world(&model), 12, ExecMode::Sequential).unwrap();
        assert!(trace.replay_matches().unwrap());
    }
}
