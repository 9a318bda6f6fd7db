//! Ready-made example networks: a two-generator system with a single
//! network bus, and a four-generator ring used throughout the tests and
//! bundled CLI examples.

use crate::network::{Branch, Bus, BusKind, GeneratorParams, PowerNetwork, DEFAULT_OMEGA0};

/// Damping-to-inertia ratio shared by the example generator fleets.
pub const EXAMPLE_DAMPING_RATIO: f64 = 0.125;
/// Droop-to-inertia ratio shared by the example generator fleets.
pub const EXAMPLE_DROOP_RATIO: f64 = 1.5;
/// Turbine time constant shared by the example generator fleets (s).
pub const EXAMPLE_TURBINE_TIME: f64 = 7.0;

/// Homogeneous generator with the example fleet's D/J and K/J ratios.
pub fn homogeneous_generator(inertia: f64) -> GeneratorParams {
    GeneratorParams {
        inertia,
        damping: EXAMPLE_DAMPING_RATIO * inertia,
        droop: EXAMPLE_DROOP_RATIO * inertia,
        turbine_time: EXAMPLE_TURBINE_TIME,
    }
}

fn gen_bus(id: &str, g: GeneratorParams) -> Bus {
    Bus { id: id.to_string(), kind: BusKind::Generator, generator: Some(g), load_power: None }
}

fn load_bus(id: &str, p: f64) -> Bus {
    Bus { id: id.to_string(), kind: BusKind::Load, generator: None, load_power: Some(p) }
}

fn branch(from: &str, to: &str, x: f64) -> Branch {
    Branch { from: from.to_string(), to: to.to_string(), x }
}

/// Two generators (buses "1", "2") joined through a single network bus "3":
/// bus 1 -- X1 -- bus 3 -- X2 -- bus 2.
pub fn two_generator(j1: f64, j2: f64, x1: f64, x2: f64) -> PowerNetwork {
    PowerNetwork {
        omega0: DEFAULT_OMEGA0,
        buses: vec![
            gen_bus("1", homogeneous_generator(j1)),
            gen_bus("2", homogeneous_generator(j2)),
            load_bus("3", 0.5),
        ],
        branches: vec![branch("1", "3", x1), branch("2", "3", x2)],
    }
}

/// The four-generator example fleet: J = 12, 8, 8, 4 with D = 0.125 J,
/// K = 1.5 J and T = 7 s.
pub fn four_generator_params() -> [GeneratorParams; 4] {
    [
        homogeneous_generator(12.0),
        homogeneous_generator(8.0),
        homogeneous_generator(8.0),
        homogeneous_generator(4.0),
    ]
}

/// Four-generator ring: generator i (bus i) attaches to network bus 4+i
/// through `gen_x[i]`; the network buses form the cycle
/// 5 -(0.2)- 6 -(0.6)- 8 -(0.4)- 7 -(0.4)- 5.
pub fn four_generator_ring(gens: [GeneratorParams; 4], gen_x: [f64; 4]) -> PowerNetwork {
    PowerNetwork {
        omega0: DEFAULT_OMEGA0,
        buses: vec![
            gen_bus("1", gens[0]),
            gen_bus("2", gens[1]),
            gen_bus("3", gens[2]),
            gen_bus("4", gens[3]),
            load_bus("5", 0.4),
            load_bus("6", 0.3),
            load_bus("7", 0.3),
            load_bus("8", 0.2),
        ],
        branches: vec![
            branch("1", "5", gen_x[0]),
            branch("2", "6", gen_x[1]),
            branch("3", "7", gen_x[2]),
            branch("4", "8", gen_x[3]),
            branch("5", "6", 0.2),
            branch("5", "7", 0.4),
            branch("7", "8", 0.4),
            branch("6", "8", 0.6),
        ],
    }
}

/// Four-generator chain: generator i attaches to network bus 4+i through
/// `gen_x[i]`; the network buses form the open ladder 5 - 6 - 7 - 8.
pub fn four_generator_chain(gens: [GeneratorParams; 4], gen_x: [f64; 4]) -> PowerNetwork {
    let mut net = four_generator_ring(gens, gen_x);
    net.branches.truncate(4);
    net.branches.push(branch("5", "6", 0.2));
    net.branches.push(branch("6", "7", 0.4));
    net.branches.push(branch("7", "8", 0.4));
    net
}
