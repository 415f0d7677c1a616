//! Prints a mean / std / p-value table for every preset process at desk scale
//! (50 runs of one year). Usage: `desk_table [preset ...]`.

use timerev::harness::{run_ensemble, EnsembleOptions, StatRequest};
use timerev::process::{ProcessSpec, SimConfig, PRESET_NAMES};
use timerev::series::TICKS_PER_YEAR;

fn main() -> timerev::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<&str> = if args.is_empty() {
        PRESET_NAMES.to_vec()
    } else {
        args.iter().map(String::as_str).collect()
    };
    let runs = std::env::var("RUNS").ok().and_then(|v| v.parse().ok()).unwrap_or(50);
    let seed = std::env::var("SEED").ok().and_then(|v| v.parse().ok()).unwrap_or(2024);
    let req = StatRequest::all();
    for name in names {
        let spec = ProcessSpec::preset(name)?;
        let t0 = std::time::Instant::now();
        let s = run_ensemble::<f64>(
            &spec,
            &SimConfig::new(TICKS_PER_YEAR as usize, seed),
            &req,
            runs,
            &EnsembleOptions::default(),
        )?;
        println!("{name}  ({:.1}s)", t0.elapsed().as_secs_f64());
        for st in &s.stats {
            println!(
                "  {:<12} mean {:>9.5}  std {:>8.5}  p {:.2}",
                st.name.name(),
                st.mean,
                st.std_dev,
                st.p_value
            );
        }
    }
    Ok(())
}
