use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use mmpm_core::bootstrap::keygen;
use mmpm_core::noise::{check_decryptable_bound, choose_r, var_bootstrap_output, var_rotation_input, NoiseBudget};
use mmpm_core::serialize::{write_bsk, write_ksk};
use mmpmboot::experiment::{compare_schemes, run_experiment, FunctionSpec, RunReport};
use mmpmboot::explore::mmpm_explore;
use mmpmboot::keysize::{format_binary, key_size_report, KeySizeReport};
use mmpmboot::presets::{all_presets, apply_overrides, preset, ParameterPreset, Scheme};
use mmpmboot::{BenchError, Result};

#[derive(Parser)]
#[command(name = "mmpmboot", version, about = "Functional bootstrapping with polynomial-vector look-up tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameter derivation, predicted noise and decryptability margin.
    Plan(Common),
    /// Bootstrapping and key-switching key sizes.
    Keys {
        #[command(flatten)]
        common: Common,
        /// Generate the keys and measure their serialized size on disk.
        #[arg(long)]
        materialize: bool,
        /// Directory for materialized keys (a temporary one by default).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt random messages, bootstrap, and check decryptions.
    Run(RunArgs),
    /// Run the MMPM preset and its single-ring TFHE counterpart side by side.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// The TFHE preset; defaults to the ring of dimension N·r.
        #[arg(long)]
        against: Option<String>,
    },
    /// Normal form, order, orbit count and transitivity of a matrix given as
    /// `r N; p0 … p(r-1); u0 … u(r-1)` or `phi:c:r:N`.
    Explore {
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// List the shipped presets.
    Presets {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    /// A shipped preset.
    #[arg(long, default_value = "desk-small")]
    preset: String,
    /// Overrides as `k=v,…` applied on top of the preset.
    #[arg(long)]
    params: Option<String>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn resolve(&self) -> Result<ParameterPreset> {
        let base = preset(&self.preset)?;
        match &self.params {
            Some(spec) => apply_overrides(base, spec),
            None => Ok(base),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `identity`, `sign` or `table:<file>`.
    #[arg(long, default_value = "identity")]
    function: String,
    /// Also write the report rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Leave wall-clock times out, so reports are bit-exact across runs.
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every correctness check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Plan(common) => plan(&common),
        Command::Keys { common, materialize, out } => keys(&common, materialize, out.as_deref()),
        Command::Run(args) => {
            let p = args.common.resolve()?;
            let f = FunctionSpec::parse(&args.function, p.params.t, p.params.t_prime)?;
            let report = run_experiment(&p, &f, args.trials, args.seed, !args.no_timing)?;
            if let Some(path) = &args.csv {
                write_csv(path, std::slice::from_ref(&report))?;
            }
            if args.common.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_reports(std::slice::from_ref(&report));
            }
            Ok(report.failures == 0)
        }
        Command::Compare { run: args, against } => {
            let p = args.common.resolve()?;
            let tfhe = match against {
                Some(name) => preset(&name)?,
                None => p.tfhe_counterpart(format!("{}/tfhe", p.name)),
            };
            let f = FunctionSpec::parse(&args.function, p.params.t, p.params.t_prime)?;
            let cmp = compare_schemes(&p, &tfhe, &f, args.trials, args.seed, !args.no_timing)?;
            if let Some(path) = &args.csv {
                write_csv(path, &[cmp.mmpm.clone(), cmp.tfhe.clone()])?;
            }
            if args.common.json {
                println!("{}", serde_json::to_string_pretty(&cmp)?);
            } else {
                print_reports(&[cmp.mmpm.clone(), cmp.tfhe.clone()]);
                println!();
                println!("agreeing outputs      {}/{}", cmp.agreeing, cmp.mmpm.trials);
                println!("boot-key size ratio   {}", cmp.boot_key_ratio);
                if let Some(t) = cmp.time_ratio {
                    println!("time ratio tfhe/mmpm  {t:.3}");
                }
            }
            Ok(cmp.failures() == 0)
        }
        Command::Explore { spec, json } => {
            let r = mmpm_explore(&spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!("matrix        {}", r.matrix);
                println!("normal form   {}", r.normal_form);
                println!("order         {}", r.order);
                println!("orbits        {}", r.orbit_count);
                println!("transitive    {}", r.transitive);
            }
            Ok(true)
        }
        Command::Presets { json } => {
            let rows: Vec<PresetRow> = all_presets().iter().map(PresetRow::from).collect();
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!(
                    "{:<18} {:>6} {:>5} {:>8} {:>7} {:>7} {:>5} {:>18} {:>6} {:>4}",
                    "name", "scheme", "n", "q", "t", "N", "r", "Q", "B", "B_KS"
                );
                for r in rows {
                    println!(
                        "{:<18} {:>6} {:>5} {:>8} {:>7} {:>7} {:>5} {:>18} {:>6} {:>4}",
                        r.name, r.scheme, r.n, r.q, r.t, r.ring_degree, r.r, r.big_q, r.gadget_base, r.ks_base
                    );
                }
            }
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct PresetRow {
    name: String,
    scheme: Scheme,
    n: usize,
    q: u64,
    t: u64,
    ring_degree: usize,
    r: usize,
    big_q: u64,
    gadget_base: u64,
    ks_base: u64,
}

impl From<&ParameterPreset> for PresetRow {
    fn from(p: &ParameterPreset) -> Self {
        let k = &p.params;
        Self {
            name: p.name.clone(),
            scheme: p.scheme,
            n: k.n,
            q: k.q,
            t: k.t,
            ring_degree: k.ring_degree,
            r: k.r,
            big_q: k.big_q,
            gadget_base: k.gadget_base,
            ks_base: k.ks_base,
        }
    }
}

#[derive(Serialize)]
struct Plan {
    preset: String,
    scheme: Scheme,
    l_b: usize,
    l_ks: usize,
    minimal_r: u64,
    q_prime: u64,
    /// At the worst-case `‖s‖² = n`.
    output_proxy: f64,
    output_margin_bits: f64,
    rotation_input_proxy: f64,
    rotation_margin_bits: f64,
    bound_holds: bool,
    bound_diagnostic: String,
    warnings: Vec<String>,
}

fn plan(common: &Common) -> Result<bool> {
    let preset = common.resolve()?;
    let warnings = preset.validate()?;
    let p = &preset.params;
    let s_norm2 = p.n as u64;
    let beta2 = p.sigma_enc * p.sigma_enc;
    let (minimal_r, _) = choose_r(p.q, p.ring_degree as u64);
    let output = NoiseBudget {
        proxy: var_bootstrap_output(p, s_norm2),
        modulus: p.q,
        plaintext_modulus: p.t_prime,
        h: p.h,
    };
    let input = NoiseBudget {
        proxy: var_rotation_input(p, beta2, s_norm2),
        modulus: p.q_prime(),
        plaintext_modulus: p.t,
        h: p.h,
    };
    let bound = check_decryptable_bound(p, beta2, s_norm2);
    let plan = Plan {
        preset: preset.name.clone(),
        scheme: preset.scheme,
        l_b: p.l_b(),
        l_ks: p.l_ks(),
        minimal_r,
        q_prime: p.q_prime(),
        output_proxy: output.proxy,
        output_margin_bits: output.margin_bits(),
        rotation_input_proxy: input.proxy,
        rotation_margin_bits: input.margin_bits(),
        bound_holds: bound.holds,
        bound_diagnostic: bound.diagnostic,
        warnings,
    };
    if common.json {
        println!("{}", serde_json::to_string_pretty(&plan)?);
    } else {
        println!("preset               {} ({})", plan.preset, plan.scheme);
        println!("n, q, t, t'          {}, {}, {}, {}", p.n, p.q, p.t, p.t_prime);
        println!("N, r, q' = 2Nr       {}, {}, {}", p.ring_degree, p.r, plan.q_prime);
        println!("minimal r            {}", plan.minimal_r);
        println!("Q, B, l_B            {}, {}, {}", p.big_q, p.gadget_base, plan.l_b);
        println!("B_KS, l_KS           {}, {}", p.ks_base, plan.l_ks);
        println!("output proxy         {:.4} (margin {:.2} bits)", plan.output_proxy, plan.output_margin_bits);
        println!(
            "rotation input proxy {:.4} (margin {:.2} bits)",
            plan.rotation_input_proxy, plan.rotation_margin_bits
        );
        println!("decryptable bound    {} — {}", plan.bound_holds, plan.bound_diagnostic);
        for w in &plan.warnings {
            println!("warning: {w}");
        }
    }
    Ok(plan.bound_holds)
}

#[derive(Serialize)]
struct KeysOutput {
    preset: String,
    sizes: KeySizeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    on_disk: Option<(u64, u64)>,
}

fn keys(common: &Common, materialize: bool, out: Option<&Path>) -> Result<bool> {
    let preset = common.resolve()?;
    preset.validate()?;
    let sizes = key_size_report(&preset.params);
    let on_disk = if materialize {
        let tmp;
        let dir = match out {
            Some(d) => {
                std::fs::create_dir_all(d)?;
                d
            }
            None => {
                tmp = std::env::temp_dir().join(format!("mmpmboot-{}", std::process::id()));
                std::fs::create_dir_all(&tmp)?;
                tmp.as_path()
            }
        };
        let (_, keys) = keygen(&preset.params, &mut ChaCha20Rng::seed_from_u64(0))?;
        let bsk_path = dir.join(format!("{}.bsk", preset.name));
        let ksk_path = dir.join(format!("{}.ksk", preset.name));
        write_bsk(&mut BufWriter::new(File::create(&bsk_path)?), &keys.bsk)?;
        write_ksk(&mut BufWriter::new(File::create(&ksk_path)?), &keys.ksk)?;
        Some((std::fs::metadata(&bsk_path)?.len(), std::fs::metadata(&ksk_path)?.len()))
    } else {
        None
    };
    if common.json {
        let o = KeysOutput {
            preset: preset.name,
            sizes,
            on_disk,
        };
        println!("{}", serde_json::to_string_pretty(&o)?);
    } else {
        println!("preset                {}", preset.name);
        println!("64-bit words          {}", sizes.summary());
        println!("  bootstrapping keys  {} words, {} B", sizes.boot_words, sizes.boot_bytes);
        println!("  key-switching keys  {} words, {} B", sizes.ksk_words, sizes.ksk_bytes);
        println!("{:<2}-bit packing        {}", sizes.log_q, sizes.packed_summary());
        if let Some((b, k)) = on_disk {
            println!("on disk               {} + {} ({b} B + {k} B)", format_binary(b), format_binary(k));
        }
    }
    Ok(true)
}

fn print_reports(reports: &[RunReport]) {
    println!(
        "{:<20} {:>6} {:>9} {:>7} {:>8} {:>6} {:>10} {:>9} {:>12} {:>10} {:>24}",
        "preset", "scheme", "function", "trials", "failures", "rounds", "mean|e|", "max|e|", "proxy", "ring mults", "keys"
    );
    for r in reports {
        println!(
            "{:<20} {:>6} {:>9} {:>7} {:>8} {:>6} {:>10.3} {:>9} {:>12.4} {:>10} {:>24}",
            r.preset,
            r.scheme,
            r.function,
            r.trials,
            r.failures,
            r.rounds,
            r.mean_abs_error,
            r.max_abs_error,
            r.predicted_proxy,
            r.ring_mults,
            r.key_sizes.summary()
        );
        if let Some(s) = r.seconds_per_bootstrap {
            println!("  {:.4} s per bootstrap", s);
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    preset: &'a str,
    scheme: Scheme,
    function: &'a str,
    seed: u64,
    trials: u64,
    failures: u64,
    rounds: u64,
    mean_abs_error: f64,
    max_abs_error: u64,
    predicted_proxy: f64,
    ring_mults: u64,
    boot_key_bytes: u64,
    ksk_bytes: u64,
    seconds_per_bootstrap: Option<f64>,
}

fn write_csv(path: &Path, reports: &[RunReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in reports {
        w.serialize(CsvRow {
            preset: &r.preset,
            scheme: r.scheme,
            function: &r.function,
            seed: r.seed,
            trials: r.trials,
            failures: r.failures,
            rounds: r.rounds,
            mean_abs_error: r.mean_abs_error,
            max_abs_error: r.max_abs_error,
            predicted_proxy: r.predicted_proxy,
            ring_mults: r.ring_mults,
            boot_key_bytes: r.key_sizes.boot_bytes,
            ksk_bytes: r.key_sizes.ksk_bytes,
            seconds_per_bootstrap: r.seconds_per_bootstrap,
        })?;
    }
    w.flush().map_err(BenchError::from)
}
