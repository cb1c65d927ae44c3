//! Runs the desk-scale benchmark (sine, sawtooth, uniform noise; N = 10000)
//! with all four nonlinearities and prints a Table-style summary.

use sinica::{harness, NonlinearityKind};

fn main() -> sinica::Result<()> {
    let sources = harness::gen_sources(&harness::reference_source_specs(), 10_000)?;
    let a = harness::reference_mixing_matrix();
    let report = harness::benchmark(&sources, &a, &NonlinearityKind::ALL, 10, 0)?;
    println!(
        "{:<8} {:>8} {:>12} {:>10} {:>6}",
        "kind", "C-ave", "T-ave(s)", "iters", "conv"
    );
    for r in &report.rows {
        println!(
            "{:<8} {:>8.4} {:>12.6} {:>10.1} {:>6.2}",
            r.nonlinearity.to_string(),
            r.c_ave,
            r.t_ave_seconds,
            r.mean_iterations,
            r.convergence_rate
        );
    }
    Ok(())
}
