//! Hodge decomposition of cross-edge signals, divergence and curl, and the
//! closed-form least-squares estimators of the three components.

use nalgebra::{DMatrix, DVector};

use crate::boundary::{cross_boundary, View};
use crate::cochain::Cochain;
use crate::complex::{CellClass, CellMultiComplex, CellRef, LayerPair};
use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse, TruncatedSvd};
use crate::spectral::{cross_laplacian, eigendecompose};

/// The dense operators acting on the `(0,0)` class of a pair in one view.
///
/// `d` is `B_{0,0}` (vertices of the view's opposite layer × cross-edges)
/// and `c` is the boundary of the next class up (cross-edges × filled cones).
#[derive(Clone, Debug)]
pub struct CrossEdgeOperators {
    pub pair: LayerPair,
    pub view: View,
    pub tolerance: f64,
    pub edges: Vec<CellRef>,
    pub vertices: Vec<CellRef>,
    pub cones: Vec<CellRef>,
    pub d: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl CrossEdgeOperators {
    pub fn new(complex: &CellMultiComplex, pair: LayerPair, view: View, tol: f64) -> Result<Self> {
        let b00 = cross_boundary(complex, pair, view, CellClass::CROSS_EDGE)?;
        let next = cross_boundary(
            complex,
            pair,
            view,
            view.coface_class(CellClass::CROSS_EDGE),
        )?;
        Ok(CrossEdgeOperators {
            pair,
            view,
            tolerance: tol,
            edges: b00.cols().to_vec(),
            vertices: b00.rows().to_vec(),
            cones: next.cols().to_vec(),
            d: b00.to_dense(),
            c: next.to_dense(),
        })
    }

    fn input(&self, s: &Cochain) -> Result<DVector<f64>> {
        s.check_index(&self.edges)?;
        Ok(s.to_vector())
    }

    pub fn divergence(&self, s: &Cochain) -> Result<Cochain> {
        let v = &self.d * self.input(s)?;
        Ok(Cochain::from_vector(self.vertices.clone(), &v))
    }

    pub fn curl(&self, s: &Cochain) -> Result<Cochain> {
        let v = self.c.transpose() * self.input(s)?;
        Ok(Cochain::from_vector(self.cones.clone(), &v))
    }

    /// Orthogonal projections of `s` onto `img Dᵀ`, `img C` and the kernel
    /// of the cross-Laplacian, each computed from its own orthonormal basis.
    pub fn decompose(&self, complex: &CellMultiComplex, s: &Cochain) -> Result<HodgeComponents> {
        let y = self.input(s)?;
        let tol = self.tolerance;
        let gd = TruncatedSvd::new(&self.d, tol)?;
        let gc = TruncatedSvd::new(&self.c, tol)?;
        // img Dᵀ is spanned by the right singular vectors of D
        let grad = &gd.v * (gd.v.transpose() * &y);
        let curl = &gc.u * (gc.u.transpose() * &y);
        let lap = cross_laplacian(complex, self.pair, self.view, CellClass::CROSS_EDGE)?;
        let k = eigendecompose(&lap, tol)?.kernel_basis();
        let harm = &k * (k.transpose() * &y);
        let s0 = gd.u.clone() * scaled_coords(&gd.v, &gd.sigma, &y);
        let s2 = gc.v.clone() * scaled_coords(&gc.u, &gc.sigma, &y);
        Ok(self.components(grad, curl, harm, s0, s2))
    }

    /// `ŝ_0 = (DDᵀ)† D y`, `ŝ_2 = (CᵀC)† Cᵀ y`, `ŝ_H = y − Dᵀŝ_0 − Cŝ_2`.
    pub fn estimate(&self, y: &Cochain) -> Result<HodgeComponents> {
        let y = self.input(y)?;
        let dt = self.d.transpose();
        let ct = self.c.transpose();
        let s0 = pseudo_inverse(&(&self.d * &dt), self.tolerance)? * (&self.d * &y);
        let s2 = pseudo_inverse(&(&ct * &self.c), self.tolerance)? * (&ct * &y);
        let grad = &dt * &s0;
        let curl = &self.c * &s2;
        let harm = &y - &grad - &curl;
        Ok(self.components(grad, curl, harm, s0, s2))
    }

    fn components(
        &self,
        grad: DVector<f64>,
        curl: DVector<f64>,
        harm: DVector<f64>,
        s0: DVector<f64>,
        s2: DVector<f64>,
    ) -> HodgeComponents {
        HodgeComponents {
            gradient: Cochain::from_vector(self.edges.clone(), &grad),
            curl: Cochain::from_vector(self.edges.clone(), &curl),
            harmonic: Cochain::from_vector(self.edges.clone(), &harm),
            vertex_potential: Cochain::from_vector(self.vertices.clone(), &s0),
            cone_potential: Cochain::from_vector(self.cones.clone(), &s2),
        }
    }
}

/// `diag(1/σ) Qᵀ y`, coordinates of the minimum-norm potential.
fn scaled_coords(q: &DMatrix<f64>, sigma: &[f64], y: &DVector<f64>) -> DVector<f64> {
    let mut coords = q.transpose() * y;
    for (c, s) in coords.iter_mut().zip(sigma) {
        *c /= s;
    }
    coords
}

/// Gradient, curl and harmonic parts of a cross-edge signal, with the
/// minimum-norm potentials generating the first two.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeComponents {
    pub gradient: Cochain,
    pub curl: Cochain,
    pub harmonic: Cochain,
    /// `ŝ_0` on the vertices of the view's opposite layer.
    pub vertex_potential: Cochain,
    /// `ŝ_2` on the filled cones.
    pub cone_potential: Cochain,
}

/// `B_{0,0} s`, indexed by the vertices of the view's opposite layer.
pub fn divergence(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    s: &Cochain,
) -> Result<Cochain> {
    CrossEdgeOperators::new(complex, pair, view, 0.0)?.divergence(s)
}

/// `Bᵀ s` for the boundary of the filled cones, indexed by those cones.
pub fn curl(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    s: &Cochain,
) -> Result<Cochain> {
    CrossEdgeOperators::new(complex, pair, view, 0.0)?.curl(s)
}

pub fn hodge_decompose(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    s: &Cochain,
    tol: f64,
) -> Result<HodgeComponents> {
    CrossEdgeOperators::new(complex, pair, view, tol)?.decompose(complex, s)
}

pub fn estimate_components(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    y: &Cochain,
    tol: f64,
) -> Result<HodgeComponents> {
    CrossEdgeOperators::new(complex, pair, view, tol)?.estimate(y)
}

pub fn reconstruct(c: &HodgeComponents) -> Result<Cochain> {
    c.gradient.add(&c.curl)?.add(&c.harmonic)
}

/// `‖ŝ − s‖ / ‖s‖`.
pub fn nmse(estimate: &Cochain, truth: &Cochain) -> Result<f64> {
    let err = estimate.sub(truth)?;
    let norm = truth.norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(err.norm() / norm)
}

/// `‖ŝ − s‖² / ‖s‖²`.
pub fn nmse_squared(estimate: &Cochain, truth: &Cochain) -> Result<f64> {
    nmse(estimate, truth).map(|e| e * e)
}
