//! Cell multicomplexes: layered cell complexes joined by cross-cells, their
//! boundary operators and cross-Laplacians, Hodge filtering of cross-edge
//! signals, and topological hub detection.

pub mod boundary;
pub mod cochain;
pub mod complex;
pub mod description;
pub mod error;
pub mod hodge;
pub mod linalg;
pub mod signal_io;
pub mod spectral;
pub mod synth;
pub mod topology;

pub use boundary::{
    cross_boundary, cross_boundary_from, cross_boundary_toward, monolayer_incidence, verify_chain,
    SignedIncidence, View,
};
pub use cochain::Cochain;
pub use complex::{CellClass, CellMultiComplex, CellRef, LayerId, LayerPair};
pub use error::{Error, Result};
pub use hodge::{
    curl, divergence, estimate_components, hodge_decompose, nmse, nmse_squared, reconstruct,
    CrossEdgeOperators, HodgeComponents,
};
pub use signal_io::{align_signal, signal_from_csv, signal_to_csv};
pub use spectral::{
    betti_monolayer, cross_betti, cross_laplacian, cross_laplacian_from, cross_laplacian_toward,
    eigendecompose, gft, igft, monolayer_laplacian, CrossBettiVector, LaplacianMatrix, Spectrum,
    DEFAULT_TOLERANCE,
};
pub use synth::{
    add_noise, generate_cmc, generate_description, nmse_sweep, nmse_sweep_generated, snr_grid,
    split_seed, synth_ground_truth, ComponentWeights, CrossEdges, GroundTruth, NoiseModel,
    SweepConfig, SweepPoint, SweepResult, SynthConfig,
};
pub use topology::{
    enumerate_cones, harmonic_hubs, ApexSummary, Cone, ConeInventory, ConeKind, HubScore,
};
