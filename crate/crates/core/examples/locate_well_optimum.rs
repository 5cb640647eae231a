//! Searches the well proxy for its best local optimum and prints fixture lines.
//!
//! Every assignment of the three movable wells to sweet-spot centers is
//! scored with mid-range controls; the best assignments are then polished
//! with compass search over all 90 variables.
//!
//! ```text
//! cargo run --release -p ms2pso-core --example locate_well_optimum [fixture]
//! ```

use ms2pso_core::objectives::{compass_search, CompassOptions};
use ms2pso_core::{well_proxy_eval, WellProxyModel};

fn main() {
    let model = match std::env::args().nth(1) {
        Some(path) => WellProxyModel::from_fixture_path(path.as_ref()).expect("fixture"),
        None => WellProxyModel::default_fixture(),
    };
    let space = model.space();
    let neg = |x: &[f64]| -well_proxy_eval(x, &model).expect("valid length");
    let centers: Vec<[f64; 3]> = model.sweet_spots.iter().map(|s| s.center).collect();
    let n = centers.len();

    let mut grid = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut x = vec![0.5; 90];
                for (w, spot) in [a, b, c].into_iter().enumerate() {
                    x[6 * w..6 * w + 3].copy_from_slice(&centers[spot]);
                    x[6 * w + 3..6 * w + 6].copy_from_slice(&centers[spot]);
                }
                grid.push((neg(&x), x));
            }
        }
    }
    grid.sort_by(|p, q| p.0.total_cmp(&q.0));
    eprintln!("grid points: {}, best grid wcf {}", grid.len(), -grid[0].0);

    let opts = CompassOptions {
        min_step: 1e-8,
        max_evals: 2_000_000,
        ..CompassOptions::default()
    };
    let best = grid
        .iter()
        .take(12)
        .map(|(_, x)| compass_search(neg, x, &space, &opts))
        .min_by(|p, q| p.value.total_cmp(&q.value))
        .expect("non-empty grid");
    // one more polish from the winner
    let best = compass_search(neg, &best.position, &space, &opts);
    let wcf = well_proxy_eval(&best.position, &model).unwrap();

    let input: Vec<String> = best.position.iter().map(|v| format!("{v:?}")).collect();
    println!("reference_wcf = {wcf:?}");
    println!("reference_input = {}", input.join(" "));
}
