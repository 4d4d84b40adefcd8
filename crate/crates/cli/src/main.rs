//! `cmx`: command-line access to cell multicomplex analysis.
//!
//! Exit status: 0 success, 2 invalid complex, 64 bad flags, 65 selector or
//! signal indexing mismatch, 66 missing or unparseable input file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmx_core::{
    align_signal, betti_monolayer, cross_betti, cross_boundary, cross_laplacian, eigendecompose,
    generate_description, harmonic_hubs, monolayer_laplacian, nmse, nmse_squared, nmse_sweep,
    nmse_sweep_generated, reconstruct, signal_from_csv, signal_to_csv, snr_grid,
    synth_ground_truth, CellClass, CellMultiComplex, Cochain, ComponentWeights, CrossEdgeOperators,
    CrossEdges, Error, HodgeComponents, LaplacianMatrix, LayerPair, SweepConfig, SynthConfig, View,
    DEFAULT_TOLERANCE,
};
use serde_json::{json, Value};

const EXIT_INVALID: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_SELECTOR: u8 = 65;
const EXIT_INPUT: u8 = 66;

#[derive(Parser)]
#[command(
    name = "cmx",
    version,
    about = "Cell multicomplex topology and cross-edge signal filtering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate a complex description.
    Validate {
        complex: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Cell counts, Betti numbers and cross-Betti vectors.
    Info {
        complex: PathBuf,
        #[command(flatten)]
        sel: Selectors,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Signed incidence matrix of a class as `row_id,col_id,sign` triplets.
    Boundary {
        complex: PathBuf,
        #[command(flatten)]
        sel: Selectors,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of a Laplacian, optionally with eigenvectors.
    Spectrum {
        complex: PathBuf,
        #[command(flatten)]
        sel: Selectors,
        /// Monolayer Laplacian order (0 or 1), used when no --pair is given.
        #[arg(long)]
        order: Option<u8>,
        /// Also write eigenvectors as `cell_id,u0,u1,…` to this file.
        #[arg(long)]
        vectors: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Orthogonal Hodge decomposition of a cross-edge signal.
    Decompose(SignalArgs),
    /// Closed-form least-squares estimates of the three components.
    Filter(SignalArgs),
    /// Ranked harmonic cross-hubs of an observed cross-edge signal.
    Hubs {
        complex: PathBuf,
        #[command(flatten)]
        sel: Selectors,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Generate a synthetic two-layer complex and a planted signal.
    Synth {
        #[command(flatten)]
        gen: GenArgs,
        /// Seed of the planted signal.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        weights: WeightArgs,
        /// Where to write the complex description.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the planted cross-edge signal.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Also write a noisy observation at this SNR (dB) to --signal.
        #[arg(long, requires = "signal", allow_hyphen_values = true)]
        snr: Option<f64>,
        #[arg(long)]
        signal: Option<PathBuf>,
    },
    /// Mean NMSE of the filtered estimate over an SNR grid.
    Sweep {
        /// Complex to sweep on; a generated one when omitted.
        complex: Option<PathBuf>,
        #[command(flatten)]
        sel: Selectors,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Grid `start:step:stop` in dB.
        #[arg(long, default_value = "0:10:20", allow_hyphen_values = true)]
        snr: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Report squared norm ratios.
        #[arg(long)]
        squared: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Selectors {
    /// Layer pair `l,m`.
    #[arg(long)]
    pair: Option<String>,
    /// Cell class `k,n`.
    #[arg(long, allow_hyphen_values = true)]
    class: Option<String>,
    /// Layer of the pair the view is taken on.
    #[arg(long)]
    view: Option<u32>,
    /// Relative rank tolerance; defaults to $CMX_TOL or 1e-8.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SignalArgs {
    complex: PathBuf,
    #[command(flatten)]
    sel: Selectors,
    /// `cell_id,value` CSV on the cross-edges of the pair.
    #[arg(long)]
    signal: PathBuf,
    /// Clean reference signal for NMSE reporting.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Directory receiving one CSV per component.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    squared: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    /// Seed of the generated complex.
    #[arg(long = "cfg-seed", default_value_t = 7)]
    cfg_seed: u64,
    /// Node counts `n1,n2`.
    #[arg(long, default_value = "12,8")]
    nodes: String,
    #[arg(long = "edge-prob", default_value_t = 0.3)]
    edge_prob: f64,
    #[arg(long = "cross-edges", default_value_t = 20)]
    cross_edges: usize,
    #[arg(long, default_value_t = 0.5)]
    fill: f64,
    #[arg(long = "square-fill", default_value_t = 0.0)]
    square_fill: f64,
    #[arg(long = "intra-fill", default_value_t = 0.0)]
    intra_fill: f64,
}

#[derive(Args)]
struct WeightArgs {
    /// Component weights `gradient,curl,harmonic`.
    #[arg(long, default_value = "1,1,1")]
    weights: String,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            report: None,
        }
    }
}

/// Exit status of a library error raised while computing on a valid complex.
fn compute_failure(e: Error) -> Failure {
    let code = match &e {
        Error::UnknownPair { .. }
        | Error::UnknownLayer(_)
        | Error::UnsupportedClass { .. }
        | Error::IndexMismatch(_)
        | Error::NonCanonicalPair { .. } => EXIT_SELECTOR,
        Error::InvalidConfig(_) => EXIT_USAGE,
        _ => 1,
    };
    Failure::new(code, e.to_string())
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match f.report {
                Some(report) => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
                None => eprintln!("cmx: {}", f.message),
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Validate { complex, format } => validate(&complex, format),
        Command::Info {
            complex,
            sel,
            format,
        } => info(&load(&complex)?, &sel, format),
        Command::Boundary { complex, sel, out } => {
            let x = load(&complex)?;
            let (pair, view) = pair_and_view(&x, &sel)?;
            let class = class_of(&sel)?.unwrap_or(CellClass::CROSS_EDGE);
            let b = cross_boundary(&x, pair, view, class).map_err(compute_failure)?;
            emit(out.as_deref(), &b.to_triplet_csv())
        }
        Command::Spectrum {
            complex,
            sel,
            order,
            vectors,
            out,
            format,
        } => spectrum(
            &load(&complex)?,
            &sel,
            order,
            vectors.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::Decompose(args) => filter(args, false),
        Command::Filter(args) => filter(args, true),
        Command::Hubs {
            complex,
            sel,
            signal,
            out,
            format,
        } => hubs(&load(&complex)?, &sel, &signal, out.as_deref(), format),
        Command::Synth {
            gen,
            seed,
            weights,
            out,
            truth,
            snr,
            signal,
        } => synth(
            &gen,
            seed,
            &weights,
            &out,
            truth.as_deref(),
            snr,
            signal.as_deref(),
        ),
        Command::Sweep {
            complex,
            sel,
            gen,
            weights,
            snr,
            trials,
            seed,
            squared,
            out,
            format,
        } => {
            let (a, step, b) = parse_grid(&snr)?;
            let cfg = SweepConfig {
                snr_db: snr_grid(a, step, b)
                    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?,
                trials,
                seed,
                weights: parse_weights(&weights)?,
                squared,
                tolerance: tolerance(&sel)?,
            };
            let result = match complex {
                Some(path) => {
                    let x = load(&path)?;
                    let (pair, view) = pair_and_view(&x, &sel)?;
                    nmse_sweep(&x, pair, view, &cfg)
                }
                None => nmse_sweep_generated(&synth_config(&gen)?, &cfg),
            }
            .map_err(compute_failure)?;
            let text = match format {
                Format::Csv => result.to_csv(),
                Format::Json => serde_json::to_string_pretty(&result).unwrap() + "\n",
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn validation_report(path: &Path, e: &Error) -> Value {
    json!({
        "status": "invalid",
        "file": path.display().to_string(),
        "error": e.kind(),
        "cell": e.cell_id(),
        "message": e.to_string(),
    })
}

fn load(path: &Path) -> Outcome<CellMultiComplex> {
    let text = read(path)?;
    CellMultiComplex::from_json(&text).map_err(|e| {
        if e.is_validation() {
            Failure {
                code: EXIT_INVALID,
                message: e.to_string(),
                report: Some(validation_report(path, &e)),
            }
        } else {
            Failure::new(EXIT_INPUT, format!("{}: {e}", path.display()))
        }
    })
}

fn load_signal(path: &Path, ops: &CrossEdgeOperators) -> Outcome<Cochain> {
    let s = signal_from_csv(&read(path)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    align_signal(&s, &ops.edges)
        .map_err(|e| Failure::new(EXIT_SELECTOR, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str, len: usize) -> Outcome<Vec<T>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let values: Option<Vec<T>> = parts.iter().map(|p| p.parse().ok()).collect();
    match values {
        Some(v) if v.len() == len => Ok(v),
        _ => Err(Failure::new(
            EXIT_USAGE,
            format!("malformed {what} `{text}`"),
        )),
    }
}

fn parse_grid(text: &str) -> Outcome<(f64, f64, f64)> {
    let parts: Option<Vec<f64>> = text.split(':').map(|p| p.trim().parse().ok()).collect();
    match parts.as_deref() {
        Some(&[a, step, b]) => Ok((a, step, b)),
        Some(&[a]) => Ok((a, 1.0, a)),
        _ => Err(Failure::new(
            EXIT_USAGE,
            format!("malformed SNR grid `{text}`, expected a:step:b"),
        )),
    }
}

fn parse_weights(w: &WeightArgs) -> Outcome<ComponentWeights> {
    let v: Vec<f64> = parse_list(&w.weights, "weights", 3)?;
    Ok(ComponentWeights {
        gradient: v[0],
        curl: v[1],
        harmonic: v[2],
    })
}

fn synth_config(gen: &GenArgs) -> Outcome<SynthConfig> {
    let nodes: Vec<usize> = parse_list(&gen.nodes, "node counts", 2)?;
    Ok(SynthConfig {
        nodes: [nodes[0], nodes[1]],
        edge_probability: gen.edge_prob,
        cross_edges: CrossEdges::Count(gen.cross_edges),
        fill_fraction: gen.fill,
        square_fraction: gen.square_fill,
        intra_fill_fraction: gen.intra_fill,
        seed: gen.cfg_seed,
    })
}

fn tolerance(sel: &Selectors) -> Outcome<f64> {
    let tol = match (sel.tol, std::env::var("CMX_TOL")) {
        (Some(t), _) => t,
        (None, Ok(env)) => env
            .trim()
            .parse()
            .map_err(|_| Failure::new(EXIT_USAGE, format!("CMX_TOL=`{env}` is not a number")))?,
        (None, Err(_)) => DEFAULT_TOLERANCE,
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("tolerance {tol} must be a non-negative number"),
        ));
    }
    Ok(tol)
}

fn class_of(sel: &Selectors) -> Outcome<Option<CellClass>> {
    sel.class
        .as_deref()
        .map(|c| parse_list::<i8>(c, "class", 2).map(|v| CellClass::new(v[0], v[1])))
        .transpose()
}

fn pair_of(x: &CellMultiComplex, sel: &Selectors) -> Outcome<Option<LayerPair>> {
    let Some(text) = sel.pair.as_deref() else {
        return Ok(None);
    };
    let v: Vec<u32> = parse_list(text, "pair", 2)?;
    let pair = LayerPair::new(v[0], v[1]).map_err(compute_failure)?;
    x.check_pair(pair).map_err(compute_failure)?;
    Ok(Some(pair))
}

/// The selected pair (the only one when the complex has a single pair) and view.
fn pair_and_view(x: &CellMultiComplex, sel: &Selectors) -> Outcome<(LayerPair, View)> {
    let pair = match pair_of(x, sel)? {
        Some(p) => p,
        None => match x.cross_complexes() {
            [only] => only.pair(),
            _ => {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--pair is required for this complex",
                ))
            }
        },
    };
    let view = match sel.view {
        None => View::Lower,
        Some(layer) => View::of_layer(pair, layer).ok_or_else(|| {
            Failure::new(
                EXIT_SELECTOR,
                format!("--view {layer} is not a layer of pair {pair}"),
            )
        })?,
    };
    Ok((pair, view))
}

fn validate(path: &Path, format: Format) -> Outcome<()> {
    let x = load(path)?;
    let counts: Vec<Value> = x
        .class_counts()
        .iter()
        .map(|((pair, class), n)| json!({"pair": pair.to_string(), "class": class.to_string(), "count": n}))
        .collect();
    let flat = x.flatten();
    match format {
        Format::Json => {
            let report = json!({
                "status": "ok",
                "file": path.display().to_string(),
                "layers": x.layer_count(),
                "nodes": flat.nodes.len(),
                "edges": flat.edges.len(),
                "cells2": flat.cells2.len(),
                "cross_classes": counts,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        Format::Csv => println!("status=ok"),
    }
    Ok(())
}

fn info(x: &CellMultiComplex, sel: &Selectors, format: Format) -> Outcome<()> {
    let tol = tolerance(sel)?;
    let flat = x.flatten();
    let (b0, b1) = betti_monolayer(x, tol).map_err(compute_failure)?;
    let pairs: Vec<LayerPair> = match pair_of(x, sel)? {
        Some(p) => vec![p],
        None => x.cross_complexes().iter().map(|c| c.pair()).collect(),
    };
    let classes: Vec<CellClass> = match class_of(sel)? {
        Some(c) => vec![c],
        None => [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(k, n)| CellClass::new(k, n))
            .collect(),
    };
    let mut cross = Vec::new();
    for &pair in &pairs {
        for &class in &classes {
            let beta = cross_betti(x, pair, class, tol).map_err(compute_failure)?;
            cross.push((pair, class, x.class_count(pair, class), beta.values));
        }
    }
    match format {
        Format::Csv => {
            println!("layers={}", x.layer_count());
            println!("N={}", flat.nodes.len());
            println!("E={}", flat.edges.len());
            println!("C={}", flat.cells2.len());
            println!("beta_0={b0}");
            println!("beta_1={b1}");
            for (pair, class, n, [a, b]) in &cross {
                println!("N[{pair}]({class})={n}");
                println!("beta[{pair}]({class})=[{a}, {b}]");
            }
        }
        Format::Json => {
            let entries: Vec<Value> = cross
                .iter()
                .map(|(pair, class, n, beta)| {
                    json!({"pair": pair.to_string(), "class": class.to_string(), "count": n, "beta": beta})
                })
                .collect();
            let report = json!({
                "layers": x.layer_count(),
                "nodes": flat.nodes.len(),
                "edges": flat.edges.len(),
                "cells2": flat.cells2.len(),
                "beta_0": b0,
                "beta_1": b1,
                "cross": entries,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    Ok(())
}

fn spectrum(
    x: &CellMultiComplex,
    sel: &Selectors,
    order: Option<u8>,
    vectors: Option<&Path>,
    out: Option<&Path>,
    format: Format,
) -> Outcome<()> {
    let tol = tolerance(sel)?;
    let lap: LaplacianMatrix =
        if sel.pair.is_some() || order.is_none() && !x.cross_complexes().is_empty() {
            let (pair, view) = pair_and_view(x, sel)?;
            let class = class_of(sel)?.unwrap_or(CellClass::CROSS_EDGE);
            cross_laplacian(x, pair, view, class)
        } else {
            monolayer_laplacian(x, order.unwrap_or(0))
        }
        .map_err(compute_failure)?;
    let s = eigendecompose(&lap, tol).map_err(compute_failure)?;
    let text = match format {
        Format::Csv => {
            let mut t = String::from("index,eigenvalue,kernel\n");
            for (i, l) in s.eigenvalues.iter().enumerate() {
                t.push_str(&format!("{i},{},{}\n", num(*l), i < s.kernel_dim()));
            }
            t
        }
        Format::Json => {
            let report = json!({
                "dimension": s.dim(),
                "kernel_dimension": s.kernel_dim(),
                "tolerance": tol,
                "eigenvalues": s.eigenvalues,
            });
            serde_json::to_string_pretty(&report).unwrap() + "\n"
        }
    };
    if let Some(path) = vectors {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["cell_id".to_string()];
        header.extend((0..s.dim()).map(|j| format!("u{j}")));
        w.write_record(&header).unwrap();
        for (i, id) in s.index.iter().enumerate() {
            let mut row = vec![id.to_string()];
            row.extend((0..s.dim()).map(|j| num(s.eigenvectors[(i, j)])));
            w.write_record(&row).unwrap();
        }
        let bytes = w.into_inner().unwrap();
        emit(Some(path), &String::from_utf8(bytes).unwrap())?;
    }
    emit(out, &text)
}

fn component_table(c: &HodgeComponents, estimate: &Cochain) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cell_id", "gradient", "curl", "harmonic", "reconstruction"])
        .unwrap();
    for (i, id) in c.gradient.ids().iter().enumerate() {
        w.write_record([
            id.to_string(),
            num(c.gradient.values()[i]),
            num(c.curl.values()[i]),
            num(c.harmonic.values()[i]),
            num(estimate.values()[i]),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn filter(args: SignalArgs, estimate: bool) -> Outcome<()> {
    let x = load(&args.complex)?;
    let (pair, view) = pair_and_view(&x, &args.sel)?;
    let tol = tolerance(&args.sel)?;
    let ops = CrossEdgeOperators::new(&x, pair, view, tol).map_err(compute_failure)?;
    let y = load_signal(&args.signal, &ops)?;
    let c = if estimate {
        ops.estimate(&y)
    } else {
        ops.decompose(&x, &y)
    }
    .map_err(compute_failure)?;
    let recon = reconstruct(&c).map_err(compute_failure)?;
    let div = ops.divergence(&y).map_err(compute_failure)?;
    let curl = ops.curl(&y).map_err(compute_failure)?;

    let mut summary = vec![
        ("pair", json!(pair.to_string())),
        ("view", json!(view.layer(pair))),
        ("cross_edges", json!(y.len())),
        ("signal_norm", json!(y.norm())),
        ("gradient_norm", json!(c.gradient.norm())),
        ("curl_norm", json!(c.curl.norm())),
        ("harmonic_norm", json!(c.harmonic.norm())),
    ];
    if let Some(path) = &args.truth {
        let truth = load_signal(path, &ops)?;
        let metric = if args.squared { nmse_squared } else { nmse };
        let e = metric(&recon, &truth).map_err(compute_failure)?;
        let observed = metric(&y, &truth).map_err(compute_failure)?;
        summary.push(("nmse", json!(e)));
        summary.push(("nmse_observed", json!(observed)));
    }

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", dir.display())))?;
        let files = [
            ("gradient.csv", &c.gradient),
            ("curl.csv", &c.curl),
            ("harmonic.csv", &c.harmonic),
            ("vertex_potential.csv", &c.vertex_potential),
            ("cone_potential.csv", &c.cone_potential),
            ("reconstruction.csv", &recon),
            ("divergence.csv", &div),
            ("circulation.csv", &curl),
        ];
        for (name, s) in files {
            emit(Some(&dir.join(name)), &signal_to_csv(s))?;
        }
        let report: serde_json::Map<String, Value> = summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        emit(
            Some(&dir.join("summary.json")),
            &(serde_json::to_string_pretty(&report).unwrap() + "\n"),
        )?;
    }
    match args.format {
        Format::Csv => {
            let mut t = String::new();
            for (k, v) in &summary {
                let shown = v
                    .as_f64()
                    .filter(|_| !v.is_u64())
                    .map_or_else(|| v.to_string().trim_matches('"').to_string(), num);
                t.push_str(&format!("{k}={shown}\n"));
            }
            if args.out.is_none() {
                t.push_str(&component_table(&c, &recon));
            }
            print!("{t}");
        }
        Format::Json => {
            let report: serde_json::Map<String, Value> = summary
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    Ok(())
}

fn hubs(
    x: &CellMultiComplex,
    sel: &Selectors,
    signal: &Path,
    out: Option<&Path>,
    format: Format,
) -> Outcome<()> {
    let (pair, view) = pair_and_view(x, sel)?;
    let tol = tolerance(sel)?;
    let ops = CrossEdgeOperators::new(x, pair, view, tol).map_err(compute_failure)?;
    let y = load_signal(signal, &ops)?;
    let est = ops.estimate(&y).map_err(compute_failure)?;
    let div = ops.divergence(&est.gradient).map_err(compute_failure)?;
    let ranked = harmonic_hubs(x, pair, view, &est.harmonic, &div).map_err(compute_failure)?;
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "rank",
                "node_id",
                "label",
                "harmonic_energy",
                "divergence",
                "cone_count",
                "closed",
                "open",
                "independent_cones",
                "disconnects",
            ])
            .unwrap();
            for (i, h) in ranked.iter().enumerate() {
                w.write_record([
                    (i + 1).to_string(),
                    h.node.to_string(),
                    h.label.to_string(),
                    num(h.harmonic_energy),
                    num(h.divergence_value),
                    h.cone_count.to_string(),
                    h.closed.to_string(),
                    h.open.to_string(),
                    h.independent_cones.to_string(),
                    h.disconnects.to_string(),
                ])
                .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Json => {
            let rows: Vec<Value> = ranked
                .iter()
                .map(|h| {
                    json!({
                        "node_id": h.node.to_string(),
                        "label": h.label,
                        "harmonic_energy": h.harmonic_energy,
                        "divergence": h.divergence_value,
                        "cone_count": h.cone_count,
                        "closed": h.closed,
                        "open": h.open,
                        "independent_cones": h.independent_cones,
                        "disconnects": h.disconnects,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).unwrap() + "\n"
        }
    };
    emit(out, &text)
}

fn synth(
    gen: &GenArgs,
    seed: u64,
    weights: &WeightArgs,
    out: &Path,
    truth: Option<&Path>,
    snr: Option<f64>,
    signal: Option<&Path>,
) -> Outcome<()> {
    let cfg = synth_config(gen)?;
    let desc = generate_description(&cfg).map_err(compute_failure)?;
    let x = cmx_core::description::build_complex(&desc).map_err(compute_failure)?;
    emit(Some(out), &(desc.to_json() + "\n"))?;
    let pair = LayerPair::new(1, 2).map_err(compute_failure)?;
    if truth.is_some() || snr.is_some() {
        let g = synth_ground_truth(&x, pair, View::Lower, seed, parse_weights(weights)?)
            .map_err(compute_failure)?;
        if let Some(path) = truth {
            emit(Some(path), &signal_to_csv(&g.signal))?;
        }
        if let (Some(db), Some(path)) = (snr, signal) {
            let noise_seed = cmx_core::split_seed(seed, 1, 0);
            let (y, model) =
                cmx_core::add_noise(&g.signal, db, noise_seed).map_err(compute_failure)?;
            emit(Some(path), &signal_to_csv(&y))?;
            println!("noise_variance={}", num(model.noise_variance));
            println!("signal_variance={}", num(model.signal_variance));
        }
    }
    let flat = x.flatten();
    println!("nodes={}", flat.nodes.len());
    println!("edges={}", flat.edges.len());
    println!("cells2={}", flat.cells2.len());
    Ok(())
}
