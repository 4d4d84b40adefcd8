#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use cmx_core::boundary::SignedIncidence;
use cmx_core::{generate_cmc, CellMultiComplex, CrossEdges, LayerPair, SynthConfig};
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> CellMultiComplex {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
    CellMultiComplex::from_json(&text).expect("fixture builds")
}

pub fn pair() -> LayerPair {
    LayerPair::new(1, 2).unwrap()
}

/// A spread of small seeded configurations.
pub fn synth_config(seed: u64) -> SynthConfig {
    let n1 = 4 + (seed % 7) as usize;
    let n2 = 3 + (seed % 5) as usize;
    let max = n1 * n2;
    SynthConfig {
        nodes: [n1, n2],
        edge_probability: 0.25 + 0.05 * (seed % 6) as f64,
        cross_edges: CrossEdges::Count((6 + (seed % 9) as usize).min(max)),
        fill_fraction: [0.0, 0.3, 0.5, 1.0][(seed % 4) as usize],
        square_fraction: [0.0, 0.5][(seed % 2) as usize],
        intra_fill_fraction: [0.0, 0.5, 1.0][(seed % 3) as usize],
        seed,
    }
}

pub fn synth(seed: u64) -> CellMultiComplex {
    generate_cmc(&synth_config(seed)).expect("generated complex builds")
}

/// Every fixture plus a batch of generated complexes.
pub fn test_complexes() -> Vec<(String, CellMultiComplex)> {
    let mut all: Vec<(String, CellMultiComplex)> = [
        "fixture_a.json",
        "fixture_a_filled.json",
        "fixture_c.json",
        "fixture_d.json",
        "fig1.json",
    ]
    .iter()
    .map(|n| (n.to_string(), fixture(n)))
    .collect();
    all.extend((0..20).map(|s| (format!("synth seed {s}"), synth(s))));
    all
}

pub fn dense_i64(b: &SignedIncidence) -> Vec<Vec<i64>> {
    let (r, c) = b.dims();
    (0..r)
        .map(|i| (0..c).map(|j| b.get(i, j) as i64).collect())
        .collect()
}

/// Dense integer product by the schoolbook loop.
pub fn int_product(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Rank over the rationals by Gauss-Jordan elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Ratio::from_integer(v as i128)).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let zero = Ratio::from_integer(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != zero) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c];
        let prow: Vec<_> = m[rank].iter().map(|v| v / pivot).collect();
        m[rank] = prow.clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != zero {
                let f = row[c];
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Connected components of an undirected graph by breadth-first search.
pub fn bfs_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Orthonormal basis of the null space of `m` from its full SVD.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    // pad to square so that the SVD returns a full right basis
    let mut padded = DMatrix::zeros(m.nrows().max(cols), cols);
    padded.view_mut((0, 0), m.shape()).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol * smax.max(1.0))
        .collect();
    let mut basis = DMatrix::zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &vt.row(i).transpose());
    }
    basis
}

/// Minimum-norm least-squares solution of `a x ≈ y` by SVD.
pub fn least_squares(a: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let eps = 1e-10 * svd.singular_values.max().max(1.0);
    svd.solve(y, eps).expect("svd solve")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Spearman rank correlation, averaging ranks of ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn seeded_vector(seed: u64, n: usize) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}
