//! Shared fixtures for the integration suites: randomized connected
//! networks with homogeneous generator fleets.

use nodalfreq_core::{
    Branch, Bus, BusKind, GeneratorParams, PowerNetwork, DEFAULT_OMEGA0,
};
use rand::prelude::*;

/// Homogeneous fleet in the example family: D/J = 0.125, K/J = 1.5, T = 7.
pub fn homogeneous(inertia: f64) -> GeneratorParams {
    GeneratorParams {
        inertia,
        damping: 0.125 * inertia,
        droop: 1.5 * inertia,
        turbine_time: 7.0,
    }
}

/// Random connected network: `n_gens` generators (J uniform in [4, 12],
/// homogeneous ratios) and `n_net` load buses, joined by a random spanning
/// tree plus extra branches, reactances uniform in [0.05, 1.0].
pub fn random_homogeneous_network(
    rng: &mut impl Rng,
    n_gens: usize,
    n_net: usize,
) -> PowerNetwork {
    let gens: Vec<GeneratorParams> =
        (0..n_gens).map(|_| homogeneous(rng.random_range(4.0..=12.0))).collect();
    random_network_with(rng, &gens, n_net)
}

/// Random connected topology over a fixed generator fleet.
pub fn random_network_with(
    rng: &mut impl Rng,
    gens: &[GeneratorParams],
    n_net: usize,
) -> PowerNetwork {
    let n_gens = gens.len();
    let total = n_gens + n_net;
    let mut buses = Vec::with_capacity(total);
    for (i, g) in gens.iter().enumerate() {
        buses.push(Bus {
            id: format!("g{}", i + 1),
            kind: BusKind::Generator,
            generator: Some(*g),
            load_power: None,
        });
    }
    for i in 0..n_net {
        buses.push(Bus {
            id: format!("b{}", i + 1),
            kind: BusKind::Load,
            generator: None,
            load_power: Some(0.1),
        });
    }

    // Spanning tree over a random attachment order, then a few extra edges.
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    let mut edges = std::collections::BTreeSet::new();
    for w in 1..total {
        let prev = order[rng.random_range(0..w)];
        let (a, b) = (order[w].min(prev), order[w].max(prev));
        edges.insert((a, b));
    }
    let extra = rng.random_range(0..=total / 2);
    for _ in 0..extra {
        let a = rng.random_range(0..total);
        let b = rng.random_range(0..total);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }

    let branches = edges
        .into_iter()
        .map(|(a, b)| Branch {
            from: buses[a].id.clone(),
            to: buses[b].id.clone(),
            x: rng.random_range(0.05..=1.0),
        })
        .collect();

    PowerNetwork { omega0: DEFAULT_OMEGA0, buses, branches }
}
