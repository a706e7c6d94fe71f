//! Sweeps the resonance region at three collision ratios and renders the
//! modulus family as one log-scale chart.
//!
//! ```sh
//! cargo run --release --example resonance_family
//! ```

use std::path::Path;

use plasmaskin::io::write_csv;
use plasmaskin::svg::{render_svg, Quantity};
use plasmaskin::sweep::{find_peak, run_sweep};
use plasmaskin::SweepSpec;

fn main() {
    let mut family = Vec::new();
    for epsilon in [1e-4, 1e-3, 1e-2] {
        let spec = SweepSpec::new((0.5, 1.2), 141, epsilon, 1e-3).expect("valid spec");
        let records = run_sweep(&spec);
        match find_peak(&records) {
            Ok(peak) => println!(
                "epsilon = {epsilon:>6.0e}: peak |Z0| = {:>10.3e} at gamma = {:.4}",
                peak.peak_value, peak.gamma_star
            ),
            Err(e) => println!("epsilon = {epsilon:>6.0e}: {e}"),
        }
        family.extend(records);
    }

    write_csv(&family, Path::new("resonance_family.csv")).expect("write csv");
    render_svg(
        &family,
        Quantity::Abs,
        true,
        Path::new("resonance_family.svg"),
    )
    .expect("render svg");
    println!("wrote resonance_family.csv and resonance_family.svg");
}
