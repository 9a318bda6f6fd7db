//! Regenerate the bundled example network files under `networks/`.
//!
//! Usage: cargo run -p nodalfreq-core --example dump_networks [DIR]

use nodalfreq_core::presets;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "networks".to_string());
    let dir = std::path::Path::new(&dir);
    std::fs::create_dir_all(dir.join("four_gen"))?;

    let fleet = presets::four_generator_params();
    let swapped = [fleet[0], fleet[3], fleet[2], fleet[1]];
    let files = [
        ("two_gen.json".to_string(), presets::two_generator(20.0, 10.0, 0.5, 0.5)),
        ("four_gen/ring.json".to_string(), presets::four_generator_ring(fleet, [0.1; 4])),
        ("four_gen/chain.json".to_string(), presets::four_generator_chain(fleet, [0.1; 4])),
        ("four_gen/ring_swapped.json".to_string(), presets::four_generator_ring(swapped, [0.1; 4])),
        (
            "four_gen/ring_x4_0.3.json".to_string(),
            presets::four_generator_ring(fleet, [0.1, 0.1, 0.1, 0.3]),
        ),
    ];
    for (name, net) in files {
        let path = dir.join(&name);
        std::fs::write(&path, net.to_json() + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
