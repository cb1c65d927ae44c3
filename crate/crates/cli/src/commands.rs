use std::path::Path;

use anyhow::{ensure, Context, Result};
use serde::Serialize;
use sinica::{fastica, harness, io, metrics, FastIcaConfig, MatchReport, NonlinearityKind};

use crate::cli::{BenchmarkArgs, Cli, Command, GenArgs, MixArgs, SeparateArgs};
use crate::load::{load_signals, write_signals};

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Mix(args) => mix(args),
        Command::Separate(args) => separate(args),
        Command::Benchmark(args) => benchmark(args),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let sources = harness::gen_sources(&args.specs, args.samples)?;
    io::write_csv_matrix(&args.out, &sources)?;
    println!(
        "wrote {} sources x {} samples to {}",
        sources.channels(),
        sources.samples(),
        args.out.display()
    );
    Ok(())
}

fn mix(args: MixArgs) -> Result<()> {
    let loaded = load_signals(&args.sources)?;
    let m = loaded.signal.channels();
    let a = match (&args.matrix, args.seed) {
        (Some(path), _) => io::read_mixing_matrix(path)?,
        (None, Some(seed)) => harness::random_mixing_matrix(m, seed)?,
        (None, None) => unreachable!("clap requires --matrix or --seed"),
    };
    let mixed = harness::mix(&loaded.signal, &a)?;
    write_signals(&args.out, &mixed, loaded.sample_rate)?;
    if let Some(path) = &args.save_matrix {
        io::write_csv_rows(path, &a.rows())?;
    }
    println!("mixed {m} channels into {}", args.out.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct SeparateReport<'a> {
    input: &'a Path,
    nonlinearity: NonlinearityKind,
    components: usize,
    seed: u64,
    epsilon: f64,
    max_iterations: usize,
    iterations: &'a [usize],
    converged: &'a [bool],
    elapsed_seconds: f64,
    separation_matrix: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matching: Option<MatchReport>,
}

fn separate(args: SeparateArgs) -> Result<()> {
    let loaded = load_signals(std::slice::from_ref(&args.input))?;
    let config = FastIcaConfig {
        nonlinearity: args.nonlinearity,
        epsilon: args.epsilon,
        max_iterations: args.max_iter,
        components: args.components,
        seed: args.seed,
    };
    let result = fastica::run(&loaded.signal, &config)?;
    write_signals(&args.out, &result.estimates, loaded.sample_rate)?;

    let matching = match &args.sources {
        Some(paths) => {
            let truth = load_signals(paths).context("loading reference sources")?;
            Some(metrics::match_sources(&truth.signal, &result.estimates)?)
        }
        None => None,
    };

    let converged = result.converged.iter().filter(|&&c| c).count();
    print!(
        "{}: {converged}/{} components converged, {} iterations, {:.6} s",
        config.nonlinearity,
        config.components,
        result.total_iterations(),
        result.elapsed_seconds
    );
    match &matching {
        Some(m) => println!(", C-ave {:.4}", m.c_ave),
        None => println!(),
    }

    if let Some(path) = &args.report {
        let report = SeparateReport {
            input: &args.input,
            nonlinearity: config.nonlinearity,
            components: config.components,
            seed: config.seed,
            epsilon: config.epsilon,
            max_iterations: config.max_iterations,
            iterations: &result.iterations,
            converged: &result.converged,
            elapsed_seconds: result.elapsed_seconds,
            separation_matrix: result
                .w
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            matching,
        };
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn benchmark(args: BenchmarkArgs) -> Result<()> {
    ensure!(args.repeats >= 1, "--repeats must be at least 1");
    let loaded = load_signals(&args.sources)?;
    let a = io::read_mixing_matrix(&args.matrix)?;
    let template = FastIcaConfig::new(loaded.signal.channels(), NonlinearityKind::Sin)
        .with_epsilon(args.epsilon)
        .with_max_iterations(args.max_iter);
    let mut report = harness::benchmark_with_config(
        &loaded.signal,
        &a,
        &args.nonlinearities,
        args.repeats,
        args.seed,
        &template,
    )?;
    if let Some(label) = args.label {
        report.experiment_label = label;
    }
    io::write_report(&args.out, &report)?;

    println!("{} ({} repeats)", report.experiment_label, report.repeats);
    println!(
        "{:<14}{:>8}{:>12}{:>10}{:>8}",
        "nonlinearity", "C-ave", "T-ave(s)", "iters", "conv"
    );
    for r in &report.rows {
        println!(
            "{:<14}{:>8.4}{:>12.6}{:>10.1}{:>8.2}",
            format!("'{}'", r.nonlinearity),
            r.c_ave,
            r.t_ave_seconds,
            r.mean_iterations,
            r.convergence_rate
        );
    }
    Ok(())
}
