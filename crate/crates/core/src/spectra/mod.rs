//! Hermitian eigensolving, ground-state extraction, truncation control.
//!
//! Dense matrices go through LAPACK's Hermitian solvers; the sector blocks
//! of the scans stay small because block decomposition, not sparse algebra,
//! is the scaling strategy. The QPT scans additionally use the banded
//! real-symmetric representation in [`band`], which brings the large
//! fictitious-qubit/spin-1 chains down to O(dim²) work.
//!
//! BLAS threading is pinned to one thread (once, process-wide) so results
//! are bit-identical regardless of how many scan workers run concurrently.

pub mod band;

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, EigValsh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::ops::{QMatrix, StateVector, Truncation};
use crate::symmetry;

/// Default acceptable eigenpair residual relative to ‖H‖.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// Relative threshold below which a gap is reported as exactly zero.
pub const DEGENERACY_TOL: f64 = 1e-10;

extern "C" {
    fn openblas_set_num_threads(n: i32);
}

static BLAS_SINGLE_THREAD: std::sync::Once = std::sync::Once::new();

/// Pin OpenBLAS to one thread. Called by every solver entry point; scans
/// parallelize over grid points instead, which keeps output deterministic
/// for any worker count.
pub fn pin_blas_single_thread() {
    BLAS_SINGLE_THREAD.call_once(|| unsafe {
        openblas_set_num_threads(1);
    });
}

/// Full eigensystem of a Hermitian matrix, ascending.
#[derive(Debug, Clone)]
pub struct EigenSet {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
    pub residuals: Vec<f64>,
}

impl EigenSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn require_hermitian(h: &QMatrix) -> Result<()> {
    if !h.hermitian_hint {
        return Err(Error::NotHermitian(
            "eigh requires a matrix constructed with the Hermitian hint".into(),
        ));
    }
    Ok(())
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &QMatrix) -> Result<Vec<f64>> {
    require_hermitian(h)?;
    pin_blas_single_thread();
    let vals = h
        .data
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::ConvergenceFailure(format!("eigvalsh: {e}")))?;
    Ok(vals.to_vec())
}

/// Eigendecomposition with eigenvectors guaranteed in the columns.
///
/// The LAPACK wrapper's eigenvector convention depends on the memory
/// layout of the input (a row-major matrix comes back with conjugated
/// vectors), so the input is forced to standard layout and the vectors
/// conjugated once. Callers still verify residuals.
pub(crate) fn eigh_vectors(data: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    pin_blas_single_thread();
    let a: Array2<C64> = if data.is_standard_layout() {
        data.to_owned()
    } else {
        data.as_standard_layout().into_owned()
    };
    let (vals, vecs) = a
        .eigh(UPLO::Lower)
        .map_err(|e| Error::ConvergenceFailure(format!("eigh: {e}")))?;
    Ok((vals.to_vec(), vecs.mapv(|z| z.conj())))
}

/// Full spectrum with canonical-phase eigenvectors and residual norms.
pub fn eigh(h: &QMatrix) -> Result<EigenSet> {
    require_hermitian(h)?;
    let (vals, vecs) = eigh_vectors(&h.data)?;

    // residuals from one product: R = H V - V diag(vals)
    let hv = h.data.dot(&vecs);
    let n = h.dim();
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let hnorm = h.frobenius().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let col = vecs.column(k);
        let mut res = 0.0f64;
        for i in 0..n {
            res += (hv[(i, k)] - col[i] * vals[k]).norm_sqr();
        }
        let res = res.sqrt();
        if res > DEFAULT_RESIDUAL_TOL * hnorm {
            return Err(Error::ConvergenceFailure(format!(
                "eigenpair {k} residual {res:.3e} exceeds {:.1e}*|H|",
                DEFAULT_RESIDUAL_TOL
            )));
        }
        residuals.push(res);
        let mut v = StateVector::raw(col.to_owned());
        v.canonicalize_phase();
        vectors.push(v);
    }
    Ok(EigenSet { values: vals.to_vec(), vectors, residuals })
}

/// Lowest eigenpair plus the gap to the first excitation.
///
/// The gap is reported as 0 when E₁ − E₀ falls below 1e-10·‖H‖.
pub fn ground(h: &QMatrix) -> Result<(f64, StateVector, f64)> {
    let es = eigh(h)?;
    if es.len() < 2 {
        return Err(Error::DimMismatch("ground: need dim >= 2".into()));
    }
    let scale = es.values[0].abs().max(es.values[es.len() - 1].abs());
    let raw_gap = es.values[1] - es.values[0];
    let gap = if raw_gap < DEGENERACY_TOL * scale.max(1.0) { 0.0 } else { raw_gap };
    Ok((es.values[0], es.vectors[0].clone(), gap))
}

/// Ground energy of the full model at truncation `t`, computed blockwise:
/// m-sector blocks when γₓ=γᵧ, K blocks otherwise.
pub fn full_ground_energy(p: &ModelParams, t: Truncation) -> Result<f64> {
    let h = crate::model::build_full(p, t)?;
    let bases = if p.symmetric_xy() {
        symmetry::m_sector_bases(t)
    } else {
        vec![
            symmetry::sector_basis(symmetry::SectorLabel::K(-1), t)?,
            symmetry::sector_basis(symmetry::SectorLabel::K(1), t)?,
        ]
    };
    let mut e0 = f64::INFINITY;
    for s in bases {
        let block = symmetry::project(&h, &s)?;
        let vals = eigvalsh(&block)?;
        e0 = e0.min(vals[0]);
    }
    Ok(e0)
}

/// Truncation-convergence control: the smallest n in `n_seq` whose ground
/// energy agrees with the next entry's within `tol`.
pub fn converge_ground(p: &ModelParams, n_seq: &[usize], tol: f64) -> Result<(usize, f64)> {
    if n_seq.len() < 2 {
        return Err(Error::InvalidParam("n_seq needs at least two entries".into()));
    }
    if !n_seq.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParam("n_seq must be strictly increasing".into()));
    }
    let mut energies = Vec::with_capacity(n_seq.len());
    for &n in n_seq {
        energies.push(full_ground_energy(p, Truncation::new(n)?)?);
    }
    let mut last_delta = f64::INFINITY;
    for k in 0..energies.len() - 1 {
        last_delta = (energies[k] - energies[k + 1]).abs();
        if last_delta <= tol {
            return Ok((n_seq[k], energies[k]));
        }
    }
    Err(Error::NotConverged { last_delta })
}

/// Residual norm ‖Hv − Ev‖₂ of a trial eigenpair.
pub fn eigen_residual(h: &QMatrix, v: &StateVector, e: f64) -> Result<f64> {
    let hv = h.apply(v)?;
    let mut res = 0.0f64;
    for i in 0..v.dim() {
        res += (hv.data[i] - v.data[i] * e).norm_sqr();
    }
    Ok(res.sqrt())
}

/// Convenience: dense Hermitian wrap of raw data for tests and small tools.
pub fn hermitian_from_rows(rows: Vec<Vec<C64>>) -> Result<QMatrix> {
    let n = rows.len();
    let mut m = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        for (j, &z) in row.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    QMatrix::hermitian(m)
}

/// Expand a boson-factor column into a full-space state at a given qutrit
/// pair amplitude layout. Used by the analytic state constructors.
pub(crate) fn assemble_product_state(
    pair_amplitudes: &[(usize, C64)],
    boson: &Array1<C64>,
    t: Truncation,
) -> StateVector {
    let nb = t.dim();
    let mut data = Array1::zeros(9 * nb);
    for &(p, amp) in pair_amplitudes {
        for n in 0..nb {
            data[p * nb + n] = amp * boson[n];
        }
    }
    StateVector::raw(data)
}
