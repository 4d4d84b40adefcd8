//! Dense linear algebra helpers: sorted symmetric eigendecomposition,
//! truncated SVD and Moore-Penrose pseudo-inverse. Matrices are nalgebra
//! types; the factorizations run in faer.

use faer::{Mat, MatRef, Side};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Rejects factorizations whose reconstruction error exceeds this relative size.
const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenpairs of a symmetric matrix with eigenvalues ascending. Each
/// eigenvector is signed so that its largest-magnitude entry is positive.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let eig = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?} on a {n}x{n} matrix")))?;
    let raw: Vec<f64> = eig.S().column_vector().iter().copied().collect();
    let u = from_faer(eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = u.column(src).into_owned();
        let pivot = col
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, v)| {
                if v.abs() > best.1 {
                    (i, v.abs())
                } else {
                    best
                }
            })
            .0;
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    let lambda = DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
    let residual = (m * &vectors - &vectors * lambda).amax();
    if residual > RESIDUAL_TOL * m.amax().max(1.0) {
        return Err(Error::Eigen(format!(
            "eigenpairs of a {n}x{n} matrix have residual {residual:e}"
        )));
    }
    Ok((values, vectors))
}

/// `m ≈ U diag(σ) Vᵀ` keeping only singular values above `tol · σ_max`.
#[derive(Clone, Debug)]
pub struct TruncatedSvd {
    /// Orthonormal basis of the column space (`rows × rank`).
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    /// Orthonormal basis of the row space (`cols × rank`).
    pub v: DMatrix<f64>,
}

impl TruncatedSvd {
    pub fn new(m: &DMatrix<f64>, tol: f64) -> Result<Self> {
        let (r, c) = m.shape();
        if r == 0 || c == 0 {
            return Ok(TruncatedSvd {
                u: DMatrix::zeros(r, 0),
                sigma: Vec::new(),
                v: DMatrix::zeros(c, 0),
            });
        }
        let svd = to_faer(m)
            .thin_svd()
            .map_err(|e| Error::Eigen(format!("SVD failed on a {r}x{c} matrix: {e:?}")))?;
        let u = from_faer(svd.U());
        let v = from_faer(svd.V());
        let sv: Vec<f64> = svd.S().column_vector().iter().copied().collect();
        let recomposed =
            &u * DMatrix::from_diagonal(&DVector::from_column_slice(&sv)) * v.transpose();
        let residual = (recomposed - m).amax();
        if residual > RESIDUAL_TOL * m.amax().max(1.0) {
            return Err(Error::Eigen(format!(
                "SVD of a {r}x{c} matrix has residual {residual:e}"
            )));
        }
        let s_max = sv.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..sv.len())
            .filter(|&i| s_max > 0.0 && sv[i] > tol * s_max)
            .collect();
        let mut uk = DMatrix::zeros(r, keep.len());
        let mut vk = DMatrix::zeros(c, keep.len());
        for (dst, &i) in keep.iter().enumerate() {
            uk.set_column(dst, &u.column(i));
            vk.set_column(dst, &v.column(i));
        }
        Ok(TruncatedSvd {
            u: uk,
            sigma: keep.iter().map(|&i| sv[i]).collect(),
            v: vk,
        })
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// `V diag(1/σ) Uᵀ`.
    pub fn pseudo_inverse(&self) -> DMatrix<f64> {
        let mut scaled = self.v.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / s);
        }
        scaled * self.u.transpose()
    }
}

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff `tol`.
pub fn pseudo_inverse(m: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    Ok(TruncatedSvd::new(m, tol)?.pseudo_inverse())
}

/// Largest absolute entry of `QᵀQ - I`.
pub fn orthonormality_error(q: &DMatrix<f64>) -> f64 {
    let g = q.transpose() * q;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Exact rank of an integer matrix given as rows, by fraction-free
/// elimination with gcd reduction of each row.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &pv) in row.iter_mut().zip(&pivot) {
                *x = *x * pivot[col] - f * pv;
            }
            let g = row.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_of_dependent_cone_columns() {
        // three filled triangles around one apex make the columns dependent
        let mut c = DMatrix::zeros(11, 6);
        for (r, col, v) in [
            (0, 0, -1.0),
            (2, 1, -1.0),
            (3, 2, -1.0),
            (6, 0, 1.0),
            (6, 2, 1.0),
            (6, 3, -1.0),
            (6, 4, -1.0),
            (7, 3, 1.0),
            (7, 5, -1.0),
            (8, 1, 1.0),
            (9, 4, 1.0),
            (9, 5, 1.0),
        ] {
            c[(r, col)] = v;
        }
        let svd = TruncatedSvd::new(&c, 1e-8).unwrap();
        assert_eq!(svd.rank(), 5);
        let expect = [5f64.sqrt(), 3f64.sqrt(), 2f64.sqrt(), 1.0, 1.0];
        for (s, e) in svd.sigma.iter().zip(expect) {
            assert!((s - e).abs() < 1e-12);
        }
        assert!(orthonormality_error(&svd.u) < 1e-12);
    }

    #[test]
    fn exact_ranks() {
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(
            integer_rank(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]),
            2
        );
        assert_eq!(integer_rank(&[vec![2, 4], vec![3, 7]]), 2);
        assert_eq!(integer_rank(&[vec![0, 1], vec![0, 3], vec![0, -2]]), 1);
    }

    #[test]
    fn eigen_sorted_and_signed() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let (vals, vecs) = symmetric_eigen(&m).unwrap();
        assert!(vals[0].abs() < 1e-14 && (vals[1] - 2.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // kernel vector ∝ (1, -1), largest entry signed positive
        assert!((vecs[(0, 0)].abs() - h).abs() < 1e-14);
        assert!((vecs[(0, 0)] + vecs[(1, 0)]).abs() < 1e-14);
        assert!(vecs.column(0).iter().cloned().fold(f64::MIN, f64::max) > 0.0);
        assert!(orthonormality_error(&vecs) < 1e-14);
    }

    #[test]
    fn empty_inputs() {
        let (vals, vecs) = symmetric_eigen(&DMatrix::zeros(0, 0)).unwrap();
        assert!(vals.is_empty() && vecs.is_empty());
        let svd = TruncatedSvd::new(&DMatrix::zeros(0, 3), 1e-8).unwrap();
        assert_eq!(svd.rank(), 0);
        assert_eq!(svd.pseudo_inverse().shape(), (3, 0));
    }

    #[test]
    fn pseudo_inverse_of_rank_deficient() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = pseudo_inverse(&m, 1e-8).unwrap();
        // (J)† = J / 4
        for v in p.iter() {
            assert!((v - 0.25).abs() < 1e-14);
        }
        let z = pseudo_inverse(&DMatrix::zeros(2, 2), 1e-8).unwrap();
        assert!(z.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn penrose_conditions() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, -1.0, 0.0, 0.0, 1.0, -1.0]);
        let p = pseudo_inverse(&m, 1e-8).unwrap();
        assert!((&m * &p * &m - &m).amax() < 1e-13);
        assert!((&p * &m * &p - &p).amax() < 1e-13);
    }
}
