//! Shared fixtures for unit tests.

use crate::automata::{reflect_pair, Colour, OutputRule};
use crate::engine::{run, ExecMode, Model, PlacementSpec, Trace, World};
use crate::environment::{Environment, GraphArc, LatticeCoord, Topology};

pub const R: usize = 0;
pub const L: usize = 1;

pub fn ring6_model() -> Model {
    Model {
        env: Environment::standard(1, Topology::ring(6).unwrap()).unwrap(),
        colours: reflect_pair(),
        cap: 3,
    }
}

/// The two-colour ring-6 clock trace over `steps` steps.
pub fn ring6_trace(steps: u64) -> Trace {
    let model = ring6_model();
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
                colour: 1,
                arc: GraphArc { head: LatticeCoord::from_spatial(&[1]), dir: L },
            },
        ],
    )
    .unwrap();
    run(&model, world, steps, ExecMode::Sequential).unwrap()
}

/// A single colour-0 body moving right from `x0` on the infinite line.
pub fn straight_mover_trace(x0: i64, steps: u64) -> Trace {
    let model = Model {
        env: Environment::standard(1, Topology::Infinite).unwrap(),
        colours: vec![Colour { name: "a".into(), rule: OutputRule::constant(R) }],
        cap: 3,
    };
    let world = World::new(
        &model,
        vec![PlacementSpec {
            elem: 1,
            colour: 0,
            arc: GraphArc { head: LatticeCoord::from_spatial(&[x0 + 1]), dir: R },
        }],
    )
    .unwrap();
    run(&model, world, steps, ExecMode::Sequential).unwrap()
}
