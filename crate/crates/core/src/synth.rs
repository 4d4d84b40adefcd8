//! Seeded synthetic two-layer complexes, planted cross-edge signals, white
//! Gaussian noise at a prescribed SNR, and Monte-Carlo NMSE sweeps.

use nalgebra::DVector;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::View;
use crate::cochain::Cochain;
use crate::complex::{CellClass, CellMultiComplex, LayerPair};
use crate::description::{
    build_complex, ComplexDescription, CrossCellDescription, CrossDescription, LayerDescription,
};
use crate::error::{Error, Result};
use crate::hodge::{nmse, reconstruct, CrossEdgeOperators};
use crate::spectral::{cross_laplacian, eigendecompose, DEFAULT_TOLERANCE};

/// How cross-edges are drawn between the two layers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossEdges {
    /// Exactly this many distinct node pairs.
    Count(usize),
    /// Each node pair independently with this probability.
    Probability(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Node counts of layers 1 and 2.
    pub nodes: [usize; 2],
    pub edge_probability: f64,
    pub cross_edges: CrossEdges,
    /// Fraction of candidate triangular cones filled with a cross 2-cell.
    pub fill_fraction: f64,
    /// Fraction of candidate squares (two cross-edges and one intra edge per
    /// layer) filled with a `(1,1)` cell.
    pub square_fraction: f64,
    /// Fraction of intra triangles filled with a 2-cell.
    pub intra_fill_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            nodes: [12, 8],
            edge_probability: 0.3,
            cross_edges: CrossEdges::Count(20),
            fill_fraction: 0.5,
            square_fraction: 0.0,
            intra_fill_fraction: 0.0,
            seed: 7,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.nodes.contains(&0) {
            return Err(Error::InvalidConfig(
                "every layer needs at least one node".into(),
            ));
        }
        let probs = [
            ("edge_probability", self.edge_probability),
            ("fill_fraction", self.fill_fraction),
            ("square_fraction", self.square_fraction),
            ("intra_fill_fraction", self.intra_fill_fraction),
        ];
        for (name, p) in probs.into_iter().chain(match self.cross_edges {
            CrossEdges::Probability(p) => Some(("cross-edge probability", p)),
            CrossEdges::Count(_) => None,
        }) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {p} is outside [0, 1]"
                )));
            }
        }
        if let CrossEdges::Count(c) = self.cross_edges {
            let max = self.nodes[0] * self.nodes[1];
            if c > max {
                return Err(Error::InvalidConfig(format!(
                    "{c} cross-edges requested but only {max} node pairs exist"
                )));
            }
        }
        Ok(())
    }
}

/// A 64-bit seed for stream `(a, b)` of a master seed, so that every trial
/// draws from its own generator regardless of execution order.
pub fn split_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut z = master;
    for word in [a, b] {
        z = splitmix64(z ^ splitmix64(word.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    z
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn edge_id(layer: u32, index: usize, sign: i8) -> String {
    let s = if sign < 0 { "-" } else { "" };
    format!("{s}L{layer}/k1/{index}")
}

fn cross_id(index: usize, sign: i8) -> String {
    let s = if sign < 0 { "-" } else { "" };
    format!("{s}X1-2/c0,0/{index}")
}

/// Picks `round(fraction · len)` of `candidates`, keeping their order.
fn choose<T>(rng: &mut ChaCha8Rng, candidates: Vec<T>, fraction: f64) -> Vec<T> {
    let k = (fraction * candidates.len() as f64).round() as usize;
    let mut picked = sample(rng, candidates.len(), k.min(candidates.len())).into_vec();
    picked.sort_unstable();
    let mut slots: Vec<Option<T>> = candidates.into_iter().map(Some).collect();
    picked.into_iter().filter_map(|i| slots[i].take()).collect()
}

/// Intra edges of an Erdős–Rényi graph as index pairs `i < j`, followed by
/// its filled triangles.
fn random_layer(
    rng: &mut ChaCha8Rng,
    id: u32,
    n: usize,
    p: f64,
    fill: f64,
) -> (LayerDescription, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    let find = |a: usize, b: usize| edges.iter().position(|&e| e == (a, b));
    let mut triangles = Vec::new();
    for (ij, &(i, j)) in edges.iter().enumerate() {
        for k in j + 1..n {
            if let (Some(jk), Some(ik)) = (find(j, k), find(i, k)) {
                triangles.push(vec![
                    edge_id(id, ij, 1),
                    edge_id(id, jk, 1),
                    edge_id(id, ik, -1),
                ]);
            }
        }
    }
    let cells2 = choose(rng, triangles, fill);
    let desc = LayerDescription {
        id,
        nodes: (1..=n as u64).collect(),
        edges: edges
            .iter()
            .map(|&(i, j)| [i as u64 + 1, j as u64 + 1])
            .collect(),
        cells2,
    };
    (desc, edges)
}

/// A two-layer complex with layer ids 1 and 2 and node labels `1..=n`.
pub fn generate_cmc(cfg: &SynthConfig) -> Result<CellMultiComplex> {
    build_complex(&generate_description(cfg)?)
}

pub fn generate_description(cfg: &SynthConfig) -> Result<ComplexDescription> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let [n1, n2] = cfg.nodes;
    let p = cfg.edge_probability;
    let (lower, e1) = random_layer(&mut rng, 1, n1, p, cfg.intra_fill_fraction);
    let (upper, e2) = random_layer(&mut rng, 2, n2, p, cfg.intra_fill_fraction);

    let mut cross: Vec<(usize, usize)> = match cfg.cross_edges {
        CrossEdges::Count(c) => sample(&mut rng, n1 * n2, c)
            .into_iter()
            .map(|i| (i / n2, i % n2))
            .collect(),
        CrossEdges::Probability(q) => (0..n1 * n2)
            .filter(|_| rng.random_bool(q))
            .map(|i| (i / n2, i % n2))
            .collect(),
    };
    cross.sort_unstable();
    let x = |a: usize, v: usize| cross.binary_search(&(a, v)).ok();

    let mut from_lower = Vec::new();
    for (ei, &(a, b)) in e1.iter().enumerate() {
        for v in 0..n2 {
            if let (Some(xa), Some(xb)) = (x(a, v), x(b, v)) {
                from_lower.push(vec![edge_id(1, ei, 1), cross_id(xb, 1), cross_id(xa, -1)]);
            }
        }
    }
    let mut from_upper = Vec::new();
    for (fi, &(t, h)) in e2.iter().enumerate() {
        for a in 0..n1 {
            if let (Some(xt), Some(xh)) = (x(a, t), x(a, h)) {
                from_upper.push(vec![edge_id(2, fi, 1), cross_id(xh, -1), cross_id(xt, 1)]);
            }
        }
    }
    let mut squares = Vec::new();
    for (ei, &(a, b)) in e1.iter().enumerate() {
        for (fi, &(c, d)) in e2.iter().enumerate() {
            // a→b→d→c→a and a→b→c→d→a
            if let (Some(xac), Some(xbd)) = (x(a, c), x(b, d)) {
                squares.push(vec![
                    edge_id(1, ei, 1),
                    cross_id(xbd, 1),
                    edge_id(2, fi, -1),
                    cross_id(xac, -1),
                ]);
            }
            if let (Some(xad), Some(xbc)) = (x(a, d), x(b, c)) {
                squares.push(vec![
                    edge_id(1, ei, 1),
                    cross_id(xbc, 1),
                    edge_id(2, fi, 1),
                    cross_id(xad, -1),
                ]);
            }
        }
    }
    let classed = |class: [i8; 2], cells: Vec<Vec<String>>| {
        cells
            .into_iter()
            .map(move |faces| CrossCellDescription { class, faces })
    };
    let mut cells2: Vec<CrossCellDescription> = Vec::new();
    cells2.extend(classed(
        [1, 0],
        choose(&mut rng, from_lower, cfg.fill_fraction),
    ));
    cells2.extend(classed(
        [0, 1],
        choose(&mut rng, from_upper, cfg.fill_fraction),
    ));
    cells2.extend(classed(
        [1, 1],
        choose(&mut rng, squares, cfg.square_fraction),
    ));

    Ok(ComplexDescription {
        layers: vec![lower, upper],
        cross: vec![CrossDescription {
            pair: [1, 2],
            edges: cross
                .iter()
                .map(|&(a, v)| [a as u64 + 1, v as u64 + 1])
                .collect(),
            cells2,
            cells3: Vec::new(),
        }],
    })
}

/// Relative weights of the gradient, curl and harmonic parts of a planted signal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentWeights {
    pub gradient: f64,
    pub curl: f64,
    pub harmonic: f64,
}

impl Default for ComponentWeights {
    fn default() -> Self {
        ComponentWeights {
            gradient: 1.0,
            curl: 1.0,
            harmonic: 1.0,
        }
    }
}

/// A planted cross-edge signal and its three parts.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub signal: Cochain,
    pub gradient: Cochain,
    pub curl: Cochain,
    pub harmonic: Cochain,
}

fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)))
}

/// `w_0 Dᵀs_0 + w_2 C s_2 + w_H K z` with standard normal `s_0`, `s_2`, `z`
/// and `K` an orthonormal kernel basis of the cross-Laplacian.
pub fn synth_ground_truth(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    seed: u64,
    weights: ComponentWeights,
) -> Result<GroundTruth> {
    let ops = CrossEdgeOperators::new(complex, pair, view, DEFAULT_TOLERANCE)?;
    if ops.edges.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "pair {pair} has no cross-edges"
        )));
    }
    let lap = cross_laplacian(complex, pair, view, CellClass::CROSS_EDGE)?;
    let kernel = eigendecompose(&lap, DEFAULT_TOLERANCE)?.kernel_basis();
    planted(&ops, &kernel, seed, weights)
}

fn planted(
    ops: &CrossEdgeOperators,
    kernel: &nalgebra::DMatrix<f64>,
    seed: u64,
    weights: ComponentWeights,
) -> Result<GroundTruth> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s0 = normal_vector(&mut rng, ops.vertices.len());
    let s2 = normal_vector(&mut rng, ops.cones.len());
    let z = normal_vector(&mut rng, kernel.ncols());
    let grad = ops.d.transpose() * s0 * weights.gradient;
    let curl = &ops.c * s2 * weights.curl;
    let harm = kernel * z * weights.harmonic;
    let total = &grad + &curl + &harm;
    let wrap = |v: &DVector<f64>| Cochain::new(ops.edges.clone(), v.iter().copied().collect());
    Ok(GroundTruth {
        signal: wrap(&total)?,
        gradient: wrap(&grad)?,
        curl: wrap(&curl)?,
        harmonic: wrap(&harm)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub noise_variance: f64,
    /// Empirical (population) variance of the clean signal.
    pub signal_variance: f64,
    pub snr_db: f64,
}

impl NoiseModel {
    /// Linear `σ_1² / σ_n²`.
    pub fn snr(&self) -> f64 {
        self.signal_variance / self.noise_variance
    }
}

/// Mean and population variance.
fn moments(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / n;
    (mean, var)
}

/// Neumaier summation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `y = s + n` with i.i.d. `n ~ N(0, σ_1² / 10^(snr_db/10))`.
pub fn add_noise(s: &Cochain, snr_db: f64, seed: u64) -> Result<(Cochain, NoiseModel)> {
    if s.norm() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let (_, signal_variance) = moments(s.values());
    if signal_variance <= 0.0 {
        return Err(Error::DegenerateSignal);
    }
    let noise_variance = signal_variance / 10f64.powf(snr_db / 10.0);
    let normal = Normal::new(0.0, noise_variance.sqrt())
        .map_err(|e| Error::InvalidConfig(format!("noise level: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = s
        .values()
        .iter()
        .map(|v| v + normal.sample(&mut rng))
        .collect();
    let model = NoiseModel {
        noise_variance,
        signal_variance,
        snr_db,
    };
    Ok((Cochain::new(s.ids().to_vec(), values)?, model))
}

/// `a, a + step, …` up to `b` inclusive.
pub fn snr_grid(start: f64, step: f64, stop: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidConfig(format!(
            "SNR grid {start}:{step}:{stop} is empty"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub weights: ComponentWeights,
    /// Report `‖ŝ − s‖² / ‖s‖²` instead of the ratio of norms.
    pub squared: bool,
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            snr_db: vec![0.0, 10.0, 20.0],
            trials: 100,
            seed: 7,
            weights: ComponentWeights::default(),
            squared: false,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub mean_nmse: f64,
    /// Sample standard deviation over trials, 0 for a single trial.
    pub std_nmse: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub seed: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,mean_nmse,std_nmse,trials\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{}\n",
                p.snr_db, p.mean_nmse, p.std_nmse, p.trials
            ));
        }
        out
    }
}

/// Mean NMSE of `reconstruct(estimate_components(y))` against the planted
/// signal at each SNR. Trial `t` plants one signal shared by every grid
/// point; the noise of each `(point, trial)` has its own stream.
pub fn nmse_sweep(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    if cfg.snr_db.is_empty() || cfg.trials == 0 {
        return Err(Error::InvalidConfig(
            "sweep needs at least one SNR point and one trial".into(),
        ));
    }
    let ops = CrossEdgeOperators::new(complex, pair, view, cfg.tolerance)?;
    if ops.edges.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "pair {pair} has no cross-edges"
        )));
    }
    let lap = cross_laplacian(complex, pair, view, CellClass::CROSS_EDGE)?;
    let kernel = eigendecompose(&lap, cfg.tolerance)?.kernel_basis();

    let truths: Vec<GroundTruth> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| planted(&ops, &kernel, split_seed(cfg.seed, 0, t), cfg.weights))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.snr_db.len())
        .flat_map(|p| (0..cfg.trials).map(move |t| (p, t)))
        .collect();
    let errors: Vec<f64> = jobs
        .par_iter()
        .map(|&(p, t)| {
            let truth = &truths[t].signal;
            let noise_seed = split_seed(cfg.seed, 1 + p as u64, t as u64);
            let (y, _) = add_noise(truth, cfg.snr_db[p], noise_seed)?;
            let estimate = reconstruct(&ops.estimate(&y)?)?;
            let e = nmse(&estimate, truth)?;
            Ok(if cfg.squared { e * e } else { e })
        })
        .collect::<Result<_>>()?;

    let points = cfg
        .snr_db
        .iter()
        .zip(errors.chunks(cfg.trials))
        .map(|(&snr_db, errs)| {
            let (mean, pop_var) = moments(errs);
            let n = errs.len() as f64;
            let std = if errs.len() > 1 {
                (pop_var * n / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            SweepPoint {
                snr_db,
                mean_nmse: mean,
                std_nmse: std,
                trials: errs.len(),
            }
        })
        .collect();
    Ok(SweepResult {
        seed: cfg.seed,
        points,
    })
}

/// [`nmse_sweep`] on a freshly generated complex, pair `1-2`, lower view.
pub fn nmse_sweep_generated(synth: &SynthConfig, cfg: &SweepConfig) -> Result<SweepResult> {
    let complex = generate_cmc(synth)?;
    nmse_sweep(&complex, LayerPair::new(1, 2)?, View::Lower, cfg)
}
