//! Laplacians of the flattened complex and cross-Laplacians of a layer
//! pair, their spectra, (cross-)Betti numbers and the Fourier transform on
//! the eigenbasis.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::boundary::{class_supported, cross_boundary, monolayer_incidence, View};
use crate::cochain::Cochain;
use crate::complex::{CellClass, CellMultiComplex, CellRef, LayerPair};
use crate::error::{Error, Result};
use crate::linalg::{orthonormality_error, symmetric_eigen};

/// Default relative rank tolerance for kernel detection and pseudo-inverses.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `L_0` or `L_1` of the flattened complex.
    Monolayer { order: u8 },
    /// `L_{k,n}` of a pair in the given view.
    Cross {
        pair: LayerPair,
        view: View,
        class: CellClass,
    },
}

/// A dense symmetric Laplacian indexed by an ordered list of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianMatrix {
    pub matrix: DMatrix<f64>,
    pub index: Vec<CellRef>,
    pub provenance: Provenance,
}

impl LaplacianMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }
}

/// `L_0 = B_1 B_1ᵀ` or `L_1 = B_1ᵀ B_1 + B_2 B_2ᵀ` of the flattened complex.
pub fn monolayer_laplacian(complex: &CellMultiComplex, k: u8) -> Result<LaplacianMatrix> {
    let b1 = monolayer_incidence(complex, 1)?;
    let (matrix, index) = match k {
        0 => (b1.upper_gram(), b1.rows().to_vec()),
        1 => {
            let b2 = monolayer_incidence(complex, 2)?;
            (b1.lower_gram() + b2.upper_gram(), b1.cols().to_vec())
        }
        _ => return Err(Error::UnsupportedClass { k: k as i8, n: -1 }),
    };
    Ok(LaplacianMatrix {
        matrix,
        index,
        provenance: Provenance::Monolayer { order: k },
    })
}

/// Cross-Laplacian `L_{k,n} = B_{k,n}ᵀ B_{k,n} + B' B'ᵀ` where `B'` is the
/// boundary of the next class up in the view. Order-3 cross cells take no
/// part in assembly, so an order-3 upper class contributes nothing.
pub fn cross_laplacian(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    class: CellClass,
) -> Result<LaplacianMatrix> {
    let lower = cross_boundary(complex, pair, view, class)?;
    let mut matrix = lower.lower_gram();
    let next = view.coface_class(class);
    if class_supported(next) {
        matrix += cross_boundary(complex, pair, view, next)?.upper_gram();
    }
    Ok(LaplacianMatrix {
        matrix,
        index: lower.cols().to_vec(),
        provenance: Provenance::Cross { pair, view, class },
    })
}

/// `L_{k,n}^{(ℓ),m}`.
pub fn cross_laplacian_from(
    complex: &CellMultiComplex,
    pair: LayerPair,
    k: i8,
    n: i8,
) -> Result<LaplacianMatrix> {
    cross_laplacian(complex, pair, View::Lower, CellClass::new(k, n))
}

/// `L_{k,n}^{ℓ,(m)}`.
pub fn cross_laplacian_toward(
    complex: &CellMultiComplex,
    pair: LayerPair,
    k: i8,
    n: i8,
) -> Result<LaplacianMatrix> {
    cross_laplacian(complex, pair, View::Upper, CellClass::new(k, n))
}

/// Eigendecomposition `L = U Λ Uᵀ` with the kernel flagged.
///
/// Eigenvalues ascend, so the kernel is the prefix of eigenvalues at or
/// below `tol · max(1, λ_max)`. Inside a repeated eigenvalue only the
/// spanned subspace is meaningful, not the individual vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub index: Vec<CellRef>,
    pub tolerance: f64,
    kernel_dim: usize,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn kernel_indices(&self) -> Range<usize> {
        0..self.kernel_dim
    }

    /// Orthonormal basis of the kernel, one column per harmonic direction.
    pub fn kernel_basis(&self) -> DMatrix<f64> {
        self.eigenvectors.columns(0, self.kernel_dim).into_owned()
    }

    /// Largest deviation of `UᵀU` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        orthonormality_error(&self.eigenvectors)
    }
}

pub fn eigendecompose(laplacian: &LaplacianMatrix, tol: f64) -> Result<Spectrum> {
    let (eigenvalues, eigenvectors) = symmetric_eigen(&laplacian.matrix)?;
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = tol * lambda_max.max(1.0);
    let kernel_dim = eigenvalues.iter().take_while(|&&l| l <= cutoff).count();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        index: laplacian.index.clone(),
        tolerance: tol,
        kernel_dim,
    })
}

/// `(β_0, β_1)` of the flattened complex.
pub fn betti_monolayer(complex: &CellMultiComplex, tol: f64) -> Result<(usize, usize)> {
    let b0 = eigendecompose(&monolayer_laplacian(complex, 0)?, tol)?.kernel_dim();
    let b1 = eigendecompose(&monolayer_laplacian(complex, 1)?, tol)?.kernel_dim();
    Ok((b0, b1))
}

/// `[β_{k,n}^{(ℓ)}, β_{k,n}^{(m)}]` of one class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossBettiVector {
    pub pair: LayerPair,
    pub class: CellClass,
    pub values: [usize; 2],
}

pub fn cross_betti(
    complex: &CellMultiComplex,
    pair: LayerPair,
    class: CellClass,
    tol: f64,
) -> Result<CrossBettiVector> {
    let from = eigendecompose(&cross_laplacian(complex, pair, View::Lower, class)?, tol)?;
    let toward = eigendecompose(&cross_laplacian(complex, pair, View::Upper, class)?, tol)?;
    Ok(CrossBettiVector {
        pair,
        class,
        values: [from.kernel_dim(), toward.kernel_dim()],
    })
}

/// Coefficients `Uᵀ s` of a signal on the eigenbasis.
pub fn gft(signal: &Cochain, spectrum: &Spectrum) -> Result<Vec<f64>> {
    signal.check_index(&spectrum.index)?;
    let coeffs = spectrum.eigenvectors.transpose() * signal.to_vector();
    Ok(coeffs.iter().copied().collect())
}

/// Signal `U ŝ` synthesized from eigenbasis coefficients.
pub fn igft(coefficients: &[f64], spectrum: &Spectrum) -> Result<Cochain> {
    if coefficients.len() != spectrum.dim() {
        return Err(Error::IndexMismatch(format!(
            "{} coefficients for a spectrum of dimension {}",
            coefficients.len(),
            spectrum.dim()
        )));
    }
    let s = &spectrum.eigenvectors * DVector::from_column_slice(coefficients);
    Ok(Cochain::from_vector(spectrum.index.clone(), &s))
}
