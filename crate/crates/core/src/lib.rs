//! Kuramoto phase oscillators on multilayer networks.
//!
//! A multilayer network whose inter-layer blocks are row-regular behaves, on
//! layer-constant states, exactly like a small reduced network with one
//! oscillator per layer. This crate builds both systems, integrates them,
//! broadcasts reduced states and equilibria onto the full network, and decides
//! linear stability of broadcast equilibria from the layer Laplacian spectra
//! and the reduced Jacobian.

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod network;
pub mod phase;
pub mod reduction;
pub mod scenario;
pub mod stability;

pub use dynamics::{
    integrate_rk4, kuramoto_rhs, order_parameter, perturb, random_phases, rescale_time, twisted_state, Coupling,
    PhaseState, SimulationParams, Trajectory,
};
pub use eigen::eig_symmetric;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use network::{
    complete_coupling, laplacian, make_complete, make_random_connected, make_ring_circulant, ring_coupling,
    validate_row_regular, LayerGraph, MultilayerNetwork,
};
pub use reduction::{broadcast, is_broadcast_state, reduce, reduce_adjacency, BroadcastCheck, ReducedNetwork};
pub use stability::{
    classify_stability, jacobian_fd, jacobian_full, jacobian_reduced, spectrum_reduced, spectrum_via_join,
    FullJacobian, ReducedJacobian, SpectrumReport, Verdict,
};
