//! C ABI over `multilayer-kuramoto`.
//!
//! Objects cross the boundary as opaque handles (`MlkNetwork`, `MlkTrajectory`,
//! `MlkSpectrum`) that the caller releases with the matching `*_free`.
//! Every fallible call returns an [`MlkStatus`]; on failure a message is kept
//! per thread and can be read with [`mlk_last_error_message`].
//! Output arrays are caller-allocated and passed with their length; a wrong
//! length yields `MLK_STATUS_BUFFER_SIZE` and the expected size in the message.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multilayer_kuramoto::network::{complete_coupling, make_ring_circulant, ring_coupling, LayerGraph};
use multilayer_kuramoto::scenario::parse_config;
use multilayer_kuramoto::{
    broadcast, integrate_rk4, order_parameter, reduce, spectrum_via_join, twisted_state, Error, Matrix,
    MultilayerNetwork, SimulationParams, SpectrumReport, Trajectory, Verdict,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlkStatus {
    Ok = 0,
    NullPointer = 1,
    BufferSize = 2,
    InvalidArgument = 3,
    Dimension = 4,
    InvalidGraph = 5,
    Generation = 6,
    Regularity = 7,
    NotEquilibrium = 8,
    Assumption = 9,
    Connectivity = 10,
    Asymmetric = 11,
    NoConvergence = 12,
    Divergence = 13,
    Config = 14,
    Io = 15,
    Panic = 16,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlkVerdict {
    Stable = 0,
    Unstable = 1,
    Marginal = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlkInterKind {
    /// Every pair of layers coupled with the same epsilon.
    Complete = 0,
    /// Layer l coupled to l - 1 and l + 1 (cyclically).
    Ring = 1,
}

pub struct MlkNetwork(MultilayerNetwork);
pub struct MlkTrajectory(Trajectory);
pub struct MlkSpectrum(SpectrumReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(MlkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parameter(_) => MlkStatus::InvalidArgument,
            Error::Dimension { .. } => MlkStatus::Dimension,
            Error::InvalidGraph(_) => MlkStatus::InvalidGraph,
            Error::Generation { .. } => MlkStatus::Generation,
            Error::Regularity { .. } => MlkStatus::Regularity,
            Error::NotEquilibrium { .. } => MlkStatus::NotEquilibrium,
            Error::Assumption(_) => MlkStatus::Assumption,
            Error::Connectivity { .. } => MlkStatus::Connectivity,
            Error::Asymmetric { .. } => MlkStatus::Asymmetric,
            Error::NoConvergence { .. } => MlkStatus::NoConvergence,
            Error::Divergence { .. } => MlkStatus::Divergence,
            Error::Config { .. } => MlkStatus::Config,
            Error::Io(_) => MlkStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(body: impl FnOnce() -> FfiResult<()>) -> MlkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MlkStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("panic: {message}"));
            MlkStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MlkStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> FfiResult<&'a [f64]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, expected: usize, what: &str) -> FfiResult<&'a mut [T]> {
    if len != expected {
        return Err(Failure(
            MlkStatus::BufferSize,
            format!("`{what}` has length {len}, expected {expected}"),
        ));
    }
    if expected == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn store<T>(out: *mut *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message describing the last failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mlk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mlk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `m` identical ring layers of `n` nodes, each linked to its `k` nearest
/// neighbours on either side with weight `w`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_new_rings(
    m: usize,
    n: usize,
    k: usize,
    w: f64,
    inter: MlkInterKind,
    epsilon: f64,
    omega: f64,
    out: *mut *mut MlkNetwork,
) -> MlkStatus {
    guard(|| {
        let layer = make_ring_circulant(n, k, w)?;
        let inter = match inter {
            MlkInterKind::Complete => complete_coupling(m, epsilon),
            MlkInterKind::Ring => ring_coupling(m, epsilon),
        };
        let net = MultilayerNetwork::new(vec![layer; m], inter, omega)?;
        store(out, MlkNetwork(net), "out")
    })
}

/// Network from explicit matrices. `adjacency` holds the `m` layer matrices
/// one after another, each row-major with side `sizes[l]`; `inter` is the
/// row-major `m x m` coupling matrix.
///
/// # Safety
/// `sizes` must point to `m` values, `adjacency` to `sum(sizes[l]^2)` values,
/// `inter` to `m * m` values, and `out` to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_from_matrices(
    m: usize,
    sizes: *const usize,
    adjacency: *const f64,
    inter: *const f64,
    omega: f64,
    out: *mut *mut MlkNetwork,
) -> MlkStatus {
    guard(|| {
        if m == 0 {
            return Err(Failure(MlkStatus::InvalidArgument, "need at least one layer".into()));
        }
        if sizes.is_null() {
            return Err(null("sizes"));
        }
        let sizes = std::slice::from_raw_parts(sizes, m);
        let total: usize = sizes.iter().map(|n| n * n).sum();
        let data = input(adjacency, total, "adjacency")?;
        let mut layers = Vec::with_capacity(m);
        let mut offset = 0;
        for (l, &n) in sizes.iter().enumerate() {
            let a = Matrix::from_row_major(n, n, data[offset..offset + n * n].to_vec())?;
            layers.push(LayerGraph::new(format!("layer{l}"), a)?);
            offset += n * n;
        }
        let inter = Matrix::from_row_major(m, m, input(inter, m * m, "inter")?.to_vec())?;
        let net = MultilayerNetwork::new(layers, inter, omega)?;
        store(out, MlkNetwork(net), "out")
    })
}

/// Network described by a TOML scenario document (same schema as the CLI).
///
/// # Safety
/// `toml` must be a nul-terminated string and `out` storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_from_config(toml: *const c_char, out: *mut *mut MlkNetwork) -> MlkStatus {
    guard(|| {
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|e| Failure(MlkStatus::Config, format!("document is not UTF-8: {e}")))?;
        let net = parse_config(text)?.build_network()?;
        store(out, MlkNetwork(net), "out")
    })
}

/// # Safety
/// `net` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_free(net: *mut MlkNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of layers, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_layer_count(net: *const MlkNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.layer_count())
}

/// Total number of oscillators, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_total_size(net: *const MlkNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.total_size())
}

/// # Safety
/// `net` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_layer_sizes(net: *const MlkNetwork, out: *mut usize, len: usize) -> MlkStatus {
    guard(|| {
        let net = &handle(net, "net")?.0;
        let sizes = net.layer_sizes();
        output(out, len, sizes.len(), "out")?.copy_from_slice(&sizes);
        Ok(())
    })
}

/// Row-major full adjacency; `len` must be `total_size^2`.
///
/// # Safety
/// `net` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_full_adjacency(net: *const MlkNetwork, out: *mut f64, len: usize) -> MlkStatus {
    guard(|| {
        let full = handle(net, "net")?.0.assemble_full();
        output(out, len, full.as_slice().len(), "out")?.copy_from_slice(full.as_slice());
        Ok(())
    })
}

/// Row-major reduced coupling matrix; `len` must be `layer_count^2`.
///
/// # Safety
/// `net` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_network_reduced_matrix(net: *const MlkNetwork, out: *mut f64, len: usize) -> MlkStatus {
    guard(|| {
        let red = reduce(&handle(net, "net")?.0);
        output(out, len, red.rbar().as_slice().len(), "out")?.copy_from_slice(red.rbar().as_slice());
        Ok(())
    })
}

/// Repeats each reduced phase over its layer.
///
/// # Safety
/// `theta_bar` must hold `m` values and `out` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_broadcast(
    net: *const MlkNetwork,
    theta_bar: *const f64,
    m: usize,
    out: *mut f64,
    n: usize,
) -> MlkStatus {
    guard(|| {
        let net = &handle(net, "net")?.0;
        let full = broadcast(input(theta_bar, m, "theta_bar")?, &net.layer_sizes())?;
        output(out, n, full.len(), "out")?.copy_from_slice(&full);
        Ok(())
    })
}

/// Phases of the `p`-th twisted state on `m` oscillators.
///
/// # Safety
/// `out` must hold `m` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_twisted_state(m: usize, p: i64, out: *mut f64) -> MlkStatus {
    guard(|| {
        output(out, m, m, "out")?.copy_from_slice(&twisted_state(m, p));
        Ok(())
    })
}

/// # Safety
/// `theta` must hold `n` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlk_order_parameter(theta: *const f64, n: usize, out: *mut f64) -> MlkStatus {
    guard(|| {
        let theta = input(theta, n, "theta")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = order_parameter(theta);
        Ok(())
    })
}

fn params(net: &MultilayerNetwork, dt: f64, t_max: f64, record_every: usize) -> SimulationParams {
    SimulationParams {
        dt,
        t_max,
        omega: net.omega(),
        record_every,
    }
}

/// Integrates the full network from `theta0` (length `total_size`).
///
/// # Safety
/// `net` must be a live handle, `theta0` must hold `n` values and `out`
/// must be storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_simulate_full(
    net: *const MlkNetwork,
    theta0: *const f64,
    n: usize,
    dt: f64,
    t_max: f64,
    record_every: usize,
    out: *mut *mut MlkTrajectory,
) -> MlkStatus {
    guard(|| {
        let net = &handle(net, "net")?.0;
        let traj = integrate_rk4(net, input(theta0, n, "theta0")?, &params(net, dt, t_max, record_every))?;
        store(out, MlkTrajectory(traj), "out")
    })
}

/// Integrates the reduced system from `theta_bar0` (length `layer_count`).
///
/// # Safety
/// As for [`mlk_simulate_full`] with `m` values in `theta_bar0`.
#[no_mangle]
pub unsafe extern "C" fn mlk_simulate_reduced(
    net: *const MlkNetwork,
    theta_bar0: *const f64,
    m: usize,
    dt: f64,
    t_max: f64,
    record_every: usize,
    out: *mut *mut MlkTrajectory,
) -> MlkStatus {
    guard(|| {
        let net = &handle(net, "net")?.0;
        let red = reduce(net);
        let traj = integrate_rk4(
            &red,
            input(theta_bar0, m, "theta_bar0")?,
            &params(net, dt, t_max, record_every),
        )?;
        store(out, MlkTrajectory(traj), "out")
    })
}

/// # Safety
/// `traj` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_free(traj: *mut MlkTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of recorded samples, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_len(traj: *const MlkTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.len())
}

/// Phases per sample, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_dim(traj: *const MlkTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.dim())
}

/// Sample times; `len` must equal the trajectory length.
///
/// # Safety
/// `traj` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_times(traj: *const MlkTrajectory, out: *mut f64, len: usize) -> MlkStatus {
    guard(|| {
        let times = handle(traj, "traj")?.0.times();
        output(out, len, times.len(), "out")?.copy_from_slice(&times);
        Ok(())
    })
}

/// Order parameter at every sample; `len` must equal the trajectory length.
///
/// # Safety
/// `traj` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_order_parameters(
    traj: *const MlkTrajectory,
    out: *mut f64,
    len: usize,
) -> MlkStatus {
    guard(|| {
        let r = handle(traj, "traj")?.0.order_parameters();
        output(out, len, r.len(), "out")?.copy_from_slice(&r);
        Ok(())
    })
}

/// Phases of sample `index`; `len` must equal the trajectory dimension.
///
/// # Safety
/// `traj` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_trajectory_state(
    traj: *const MlkTrajectory,
    index: usize,
    out: *mut f64,
    len: usize,
) -> MlkStatus {
    guard(|| {
        let traj = &handle(traj, "traj")?.0;
        let state = traj.states.get(index).ok_or_else(|| {
            Failure(
                MlkStatus::InvalidArgument,
                format!("sample {index} out of range ({} samples)", traj.len()),
            )
        })?;
        output(out, len, state.theta.len(), "out")?.copy_from_slice(&state.theta);
        Ok(())
    })
}

/// Full Jacobian spectrum at the broadcast of the reduced equilibrium
/// `theta_bar_star`, assembled from the layer Laplacians and the reduced Jacobian.
///
/// # Safety
/// `net` must be a live handle, `theta_bar_star` must hold `m` values and
/// `out` must be storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_stability_analyze(
    net: *const MlkNetwork,
    theta_bar_star: *const f64,
    m: usize,
    out: *mut *mut MlkSpectrum,
) -> MlkStatus {
    guard(|| {
        let net = &handle(net, "net")?.0;
        let report = spectrum_via_join(net, input(theta_bar_star, m, "theta_bar_star")?)?;
        store(out, MlkSpectrum(report), "out")
    })
}

/// # Safety
/// `spectrum` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mlk_spectrum_free(spectrum: *mut MlkSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of eigenvalues, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_spectrum_len(spectrum: *const MlkSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.eigenvalues.len())
}

/// Eigenvalues in ascending order.
///
/// # Safety
/// `spectrum` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn mlk_spectrum_eigenvalues(
    spectrum: *const MlkSpectrum,
    out: *mut f64,
    len: usize,
) -> MlkStatus {
    guard(|| {
        let s = &handle(spectrum, "spectrum")?.0;
        output(out, len, s.eigenvalues.len(), "out")?.copy_from_slice(&s.eigenvalues);
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlk_spectrum_verdict(spectrum: *const MlkSpectrum, out: *mut MlkVerdict) -> MlkStatus {
    guard(|| {
        let s = &handle(spectrum, "spectrum")?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match s.verdict {
            Verdict::Stable => MlkVerdict::Stable,
            Verdict::Unstable => MlkVerdict::Unstable,
            Verdict::Marginal => MlkVerdict::Marginal,
        };
        Ok(())
    })
}

/// JSON rendering of the report (eigenvalues, provenance, verdict, tolerance).
/// Release with [`mlk_string_free`]. Returns null for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlk_spectrum_to_json(spectrum: *const MlkSpectrum) -> *mut c_char {
    match spectrum.as_ref() {
        Some(s) => CString::new(s.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}
