//! Grid scans: the level-crossing phase diagram and the superradiant QPT
//! sweep, plus critical-point estimation and deterministic CSV output.
//!
//! Grid points are independent; results land in fixed slots indexed by
//! grid position, so the output is byte-identical for any worker count.
//! BLAS runs single-threaded (see [`crate::spectra`]) and all parallelism
//! lives in the per-point rayon pool.
//!
//! The QPT blocks are solved in their banded real-symmetric form: in the
//! σˣ eigenbasis the fictitious-qubit chain H′₋ (bandwidth 3 with the
//! symmetry-breaking bias) and the spin-1 chain H₃′ (bandwidth 4) couple
//! only neighbouring Fock levels, which keeps the ω/γ = 10⁻³ regime at
//! millisecond cost per point instead of dense O(n³).

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{self, QptParams};
use crate::observables::{self, GroundRecord, StateSpace};
use crate::ops::{StateVector, Truncation};
use crate::spectra::{self, band::BandedSym};
use crate::symmetry::{self, SectorLabel};

/// Relative tail mass (top Fock levels) above which a computed ground
/// state counts as truncated.
pub const TAIL_TOL: f64 = 1e-8;
const TAIL_LEVELS: usize = 8;

/// One scan axis.
#[derive(Debug, Clone, Serialize)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParam(format!("axis {name}: count must be >= 2")));
        }
        // negated form also rejects NaN endpoints
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(min < max) {
            return Err(Error::InvalidParam(format!("axis {name}: need min < max")));
        }
        Ok(Self { name: name.into(), min, max, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }
}

/// How the Fock cutoff is chosen per scan point.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum TruncationPolicy {
    Fixed(usize),
    /// n_max = clamp(ceil(9·(g²−g⁻²)/4·γ/ω), floor, cap): nine times the
    /// superradiant photon-number estimate, floored for the normal phase.
    /// Points whose computed ground state still carries tail mass at the
    /// cap are marked failed rather than silently truncated.
    QptAdaptive { floor: usize, cap: usize },
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::QptAdaptive { floor: 64, cap: 4096 }
    }
}

impl TruncationPolicy {
    pub fn n_max(&self, g: f64, gamma_over_omega: f64) -> usize {
        match *self {
            TruncationPolicy::Fixed(n) => n,
            TruncationPolicy::QptAdaptive { floor, cap } => {
                let estimate = if g > 0.0 {
                    9.0 * (g * g - 1.0 / (g * g)) / 4.0 * gamma_over_omega
                } else {
                    0.0
                };
                if !estimate.is_finite() || estimate <= floor as f64 {
                    floor
                } else {
                    (estimate.ceil() as usize).min(cap)
                }
            }
        }
    }
}

/// Grid metadata serialized into the JSON sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub axis1: GridAxis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<GridAxis>,
    pub fixed: BTreeMap<String, f64>,
    pub policy: TruncationPolicy,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub code_version: String,
    pub unit: String,
    pub tolerances: BTreeMap<String, f64>,
    pub wall_time_s: f64,
    pub workers: usize,
}

fn tolerance_map() -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("residual_tol".into(), spectra::DEFAULT_RESIDUAL_TOL);
    m.insert("hermitian_tol".into(), crate::ops::HERMITIAN_TOL);
    m.insert("degeneracy_tol".into(), spectra::DEGENERACY_TOL);
    m.insert("tail_tol".into(), TAIL_TOL);
    m
}

/// Format one float with 12 significant digits (CSV contract).
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    /// The H₃′ side of the comparison is truncated at this n_max; the H₋
    /// observables are converged.
    H3Trunc,
    Failed(String),
}

impl std::fmt::Display for PointStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointStatus::Ok => write!(f, "ok"),
            PointStatus::H3Trunc => write!(f, "h3trunc"),
            PointStatus::Failed(why) => write!(f, "failed:{why}"),
        }
    }
}

impl PointStatus {
    pub fn is_failed(&self) -> bool {
        matches!(self, PointStatus::Failed(_))
    }
}

// ---------------------------------------------------------------------
// phase diagram scan
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub omega_over_gamma: f64,
    pub x: f64,
    pub record: Option<GroundRecord>,
    /// Ground-sector m label (rounded phase label).
    pub m_label: Option<i8>,
    /// Ground energy of each m sector, ascending in m (−2..=+2); used for
    /// level-crossing and tri-critical localization.
    pub sector_grounds: Option<[f64; 5]>,
    pub status: PointStatus,
}

#[derive(Debug)]
pub struct PhaseScan {
    pub grid: GridSpec,
    pub points: Vec<PhasePoint>,
    pub provenance: Provenance,
}

pub const PHASE_CSV_HEADER: &str =
    "omega_over_gamma,x,energy,m_total,m_half,m_stag,mean_photon,negativity,gap,sector,status";

impl PhaseScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.points.len() * 160);
        out.push_str(PHASE_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let (rec, sector) = match &p.record {
                Some(r) => (
                    [
                        r.energy,
                        r.m_total,
                        r.m_half,
                        r.m_stag,
                        r.mean_photon,
                        r.negativity,
                        r.gap,
                    ],
                    r.sector.clone(),
                ),
                None => ([f64::NAN; 7], "-".into()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_g12(p.omega_over_gamma),
                fmt_g12(p.x),
                fmt_g12(rec[0]),
                fmt_g12(rec[1]),
                fmt_g12(rec[2]),
                fmt_g12(rec[3]),
                fmt_g12(rec[4]),
                fmt_g12(rec[5]),
                fmt_g12(rec[6]),
                sector,
                p.status
            ));
        }
        out
    }

    pub fn failed_fraction(&self) -> f64 {
        let failed = self.points.iter().filter(|p| p.status.is_failed()).count();
        failed as f64 / self.points.len() as f64
    }

    pub fn write_output(&self, path: &std::path::Path) -> Result<()> {
        write_atomic(path, &self.to_csv())?;
        let sidecar = Sidecar { grid: &self.grid, provenance: &self.provenance };
        write_atomic(&sidecar_path(path), &sidecar.to_json())?;
        Ok(())
    }
}

fn phase_point(
    w: f64,
    x: f64,
    omega_over_gamma: f64,
    t: Truncation,
) -> Result<(GroundRecord, i8, [f64; 5])> {
    // gamma = 1 fixes the unit; lambda from x = lambda^2 / (gamma omega)
    let omega_mode = omega_over_gamma;
    let lambda = (x * omega_mode).sqrt();
    let p = model::preset_level_crossing(w, 1.0, lambda, omega_mode)?;
    let h = model::build_full(&p, t)?;

    let mut ground: Option<(f64, SectorLabel, crate::ops::QMatrix)> = None;
    let mut sector_grounds = [0.0f64; 5];
    let mut all_values: Vec<f64> = Vec::with_capacity(h.dim());
    for (k, s) in symmetry::m_sector_bases(t).into_iter().enumerate() {
        let block = symmetry::project(&h, &s)?;
        let vals = spectra::eigvalsh(&block)?;
        let e0 = vals[0];
        sector_grounds[k] = e0;
        all_values.extend(vals);
        match &ground {
            Some((best, _, _)) if *best <= e0 => {}
            _ => ground = Some((e0, s.label, block)),
        }
    }
    let (e0, label, block) = ground.expect("five sectors");
    all_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = all_values[0].abs().max(all_values[all_values.len() - 1].abs()).max(1.0);
    let raw_gap = all_values[1] - all_values[0];
    let gap = if raw_gap < spectra::DEGENERACY_TOL * scale { 0.0 } else { raw_gap };

    let m = match label {
        SectorLabel::M(m) => m,
        SectorLabel::K(_) => unreachable!("phase scan walks m sectors"),
    };
    let basis = symmetry::sector_basis(label, t)?;
    let es = spectra::eigh(&block)?;
    let v0 = &es.vectors[0];
    let space = StateSpace::Sector(&basis);
    let (m_total, m_half, m_stag) = observables::magnetizations(v0, space)?;
    let nphot = observables::mean_photon(v0, space)?;
    let rho = observables::reduce_to_qutrits(v0, space)?;
    let neg = observables::negativity(&rho)?;
    let (var_x, _) = observables::quad_variances(v0, space)?;

    Ok((
        GroundRecord {
            energy: e0,
            gap,
            m_total,
            m_half,
            m_stag,
            mean_photon: nphot,
            n_rescaled: nphot * omega_over_gamma,
            negativity: neg,
            quad_var_x: var_x,
            sector: label.to_string(),
        },
        m,
        sector_grounds,
    ))
}

/// Ground-state scan over (Ω/γ, x = λ²/γω) with the level-crossing preset,
/// diagonalized per m sector.
pub fn scan_phase_diagram(
    w_axis: &GridAxis,
    x_axis: &GridAxis,
    omega_over_gamma: f64,
    t: Truncation,
    workers: usize,
) -> Result<PhaseScan> {
    if omega_over_gamma <= 0.0 {
        return Err(Error::InvalidParam("omega_over_gamma must be > 0".into()));
    }
    if x_axis.min < 0.0 {
        return Err(Error::InvalidParam("x must be >= 0".into()));
    }
    spectra::pin_blas_single_thread();
    let start = Instant::now();
    let ws = w_axis.values();
    let xs = x_axis.values();
    let cells: Vec<(f64, f64)> = ws
        .iter()
        .flat_map(|&w| xs.iter().map(move |&x| (w, x)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParam(format!("worker pool: {e}")))?;
    let points: Vec<PhasePoint> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(w, x)| match phase_point(w, x, omega_over_gamma, t) {
                Ok((record, m, sector_grounds)) => PhasePoint {
                    omega_over_gamma: w,
                    x,
                    record: Some(record),
                    m_label: Some(m),
                    sector_grounds: Some(sector_grounds),
                    status: PointStatus::Ok,
                },
                Err(e) => PhasePoint {
                    omega_over_gamma: w,
                    x,
                    record: None,
                    m_label: None,
                    sector_grounds: None,
                    status: PointStatus::Failed(slugify(&e)),
                },
            })
            .collect()
    });

    let mut fixed = BTreeMap::new();
    fixed.insert("omega_over_gamma".into(), omega_over_gamma);
    fixed.insert("gamma".into(), 1.0);
    Ok(PhaseScan {
        grid: GridSpec {
            axis1: w_axis.clone(),
            axis2: Some(x_axis.clone()),
            fixed,
            policy: TruncationPolicy::Fixed(t.n_max),
        },
        points,
        provenance: Provenance {
            code_version: env!("CARGO_PKG_VERSION").into(),
            unit: "energies in units of gamma".into(),
            tolerances: tolerance_map(),
            wall_time_s: start.elapsed().as_secs_f64(),
            workers,
        },
    })
}

// ---------------------------------------------------------------------
// QPT scan
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostBlock {
    HMinus,
    HM0,
}

impl std::fmt::Display for HostBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HostBlock::HMinus => write!(f, "hminus"),
            HostBlock::HM0 => write!(f, "hm0"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QptPoint {
    pub g: f64,
    pub n_max_used: usize,
    /// Ground energy of the lower-branch fictitious-qubit block H′₋.
    pub energy: f64,
    pub energy_rescaled: f64,
    /// Ground energy of the m=0 block H₃′ at the same truncation.
    pub energy_hm0: f64,
    pub hm0_converged: bool,
    pub gap: f64,
    pub n_mean: f64,
    pub n_rescaled: f64,
    pub negativity: f64,
    pub m_stag: f64,
    /// Fictitious-qubit polarization ⟨σᵦᶻ⟩ = 2·m_stag on this subspace.
    pub sigma_bz: f64,
    pub host_block: HostBlock,
    pub status: PointStatus,
}

#[derive(Debug)]
pub struct QptScan {
    pub grid: GridSpec,
    pub points: Vec<QptPoint>,
    pub provenance: Provenance,
}

pub const QPT_CSV_HEADER: &str =
    "g,omega_over_gamma,energy,energy_rescaled,n_mean,n_rescaled,negativity,m_stag,gap,host_block,status";

impl QptScan {
    pub fn to_csv(&self) -> String {
        let omega_over_gamma = self.grid.fixed["omega_over_gamma"];
        let mut out = String::with_capacity(self.points.len() * 160);
        out.push_str(QPT_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_g12(p.g),
                fmt_g12(omega_over_gamma),
                fmt_g12(p.energy),
                fmt_g12(p.energy_rescaled),
                fmt_g12(p.n_mean),
                fmt_g12(p.n_rescaled),
                fmt_g12(p.negativity),
                fmt_g12(p.m_stag),
                fmt_g12(p.gap),
                p.host_block,
                p.status
            ));
        }
        out
    }

    pub fn failed_fraction(&self) -> f64 {
        let failed = self.points.iter().filter(|p| p.status.is_failed()).count();
        failed as f64 / self.points.len() as f64
    }

    /// (g, n_rescaled) over non-failed points, for kink estimation.
    pub fn n_rescaled_curve(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| !p.status.is_failed())
            .map(|p| (p.g, p.n_rescaled))
            .collect()
    }

    pub fn write_output(&self, path: &std::path::Path) -> Result<()> {
        write_atomic(path, &self.to_csv())?;
        let sidecar = Sidecar { grid: &self.grid, provenance: &self.provenance };
        write_atomic(&sidecar_path(path), &sidecar.to_json())?;
        Ok(())
    }
}

/// H′₋ (lower σₐᶻ branch, with bias δ·σᵦᶻ) in its banded σˣ-chain form.
///
/// Basis: index 2n + c with c = 0 ↦ |σˣ=+1⟩, c = 1 ↦ |σˣ=−1⟩.
pub fn hminus_band(q: &QptParams, bias: f64, n_max: usize) -> BandedSym {
    let nb = n_max + 1;
    let mut b = BandedSym::new(2 * nb, 3);
    let cx = q.gamma / 2.0;
    let cz = q.lambda / 2.0;
    for n in 0..nb {
        let base = q.omega_mode * n as f64 - q.omega_q;
        b.add(2 * n, 2 * n, base + cx);
        b.add(2 * n + 1, 2 * n + 1, base - cx);
        // sigma^z flips the sigma^x chains
        b.add(2 * n, 2 * n + 1, bias);
        if n + 1 < nb {
            let amp = cz * ((n + 1) as f64).sqrt();
            b.add(2 * n, 2 * (n + 1) + 1, amp);
            b.add(2 * n + 1, 2 * (n + 1), amp);
        }
    }
    b
}

/// H₃′ (m=0 block) in its banded Σˣ-chain form.
///
/// Basis: index 3n + j with j = 0, 1, 2 ↦ Σˣ eigenvalues +1, 0, −1.
pub fn hm0_band(q: &QptParams, n_max: usize) -> BandedSym {
    let nb = n_max + 1;
    let mut b = BandedSym::new(3 * nb, 4);
    let p = q.model_params();
    let gbar = std::f64::consts::SQRT_2 * p.gamma_x; // sqrt(2) * common gamma_xy
    let coupling = p.lambda1 - p.lambda2;
    let s = std::f64::consts::FRAC_1_SQRT_2; // Sigma^z elements in the x basis
    for n in 0..nb {
        let base = q.omega_mode * n as f64;
        b.add(3 * n, 3 * n, base + gbar);
        b.add(3 * n + 1, 3 * n + 1, base);
        b.add(3 * n + 2, 3 * n + 2, base - gbar);
        if n + 1 < nb {
            let amp = coupling * s * ((n + 1) as f64).sqrt();
            b.add(3 * n, 3 * (n + 1) + 1, amp);
            b.add(3 * n + 1, 3 * (n + 1), amp);
            b.add(3 * n + 1, 3 * (n + 1) + 2, amp);
            b.add(3 * n + 2, 3 * (n + 1) + 1, amp);
        }
    }
    b
}

/// Relative amplitude mass in the top Fock levels of a chain vector.
fn tail_mass(v: &[f64], chains: usize, nb: usize) -> f64 {
    let lowest = nb.saturating_sub(TAIL_LEVELS);
    let mut tail = 0.0;
    let mut total = 0.0;
    for n in 0..nb {
        for c in 0..chains {
            let a = v[chains * n + c];
            total += a * a;
            if n >= lowest {
                tail += a * a;
            }
        }
    }
    tail / total.max(1e-300)
}

/// σˣ-chain vector → K=−1 sector state (amplitudes on |0−1⟩, |−10⟩).
fn hminus_chain_to_sector_state(v: &[f64], nb: usize) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = ndarray::Array1::zeros(4 * nb);
    for n in 0..nb {
        let plus = v[2 * n];
        let minus = v[2 * n + 1];
        // |sigma^z = +1> = |0-1> (group 2), |sigma^z = -1> = |-10> (group 3)
        data[2 * nb + n] = num_complex::Complex64::new(s * (plus + minus), 0.0);
        data[3 * nb + n] = num_complex::Complex64::new(s * (plus - minus), 0.0);
    }
    StateVector::raw(data)
}

fn qpt_point(
    g: f64,
    omega_over_gamma: f64,
    omega_q_over_gamma: f64,
    policy: TruncationPolicy,
    bias: f64,
) -> Result<QptPoint> {
    let q = QptParams::from_ratios(g, omega_over_gamma, omega_q_over_gamma)?;
    let n_max = policy.n_max(g, q.gamma / q.omega_mode);
    let nb = n_max + 1;

    let hm = hminus_band(&q, bias, n_max);
    let evals = hm.lowest_values(2)?;
    let (e0, e1) = (evals[0], evals[1]);
    let v0 = hm.eigenvector(e0, 1e-9)?;
    let hminus_tail = tail_mass(&v0, 2, nb);

    let h3 = hm0_band(&q, n_max);
    let e3 = h3.lowest_values(1)?[0];
    let v3 = h3.eigenvector(e3, 1e-9)?;
    let hm0_tail = tail_mass(&v3, 3, nb);

    let scale = e0.abs().max(hm.norm_inf()).max(1.0);
    let raw_gap = e1 - e0;
    let gap = if raw_gap < spectra::DEGENERACY_TOL * scale { 0.0 } else { raw_gap };

    let t = Truncation::new(n_max)?;
    let sector = symmetry::sector_basis(SectorLabel::K(-1), t)?;
    let state = hminus_chain_to_sector_state(&v0, nb);
    let space = StateSpace::Sector(&sector);
    let (_, _, m_stag) = observables::magnetizations(&state, space)?;
    let n_mean = observables::mean_photon(&state, space)?;
    let rho = observables::reduce_to_qutrits(&state, space)?;
    let neg = observables::negativity(&rho)?;

    let ratio = q.omega_mode / q.gamma;
    let hminus_ok = hminus_tail <= TAIL_TOL;
    let hm0_ok = hm0_tail <= TAIL_TOL;
    let status = if !hminus_ok {
        PointStatus::Failed("truncation".into())
    } else if !hm0_ok {
        PointStatus::H3Trunc
    } else {
        PointStatus::Ok
    };

    Ok(QptPoint {
        g,
        n_max_used: n_max,
        energy: e0,
        energy_rescaled: e0 * ratio,
        energy_hm0: e3,
        hm0_converged: hm0_ok,
        gap,
        n_mean,
        n_rescaled: n_mean * ratio,
        negativity: neg,
        m_stag,
        sigma_bz: 2.0 * m_stag,
        host_block: if e3 < e0 { HostBlock::HM0 } else { HostBlock::HMinus },
        status,
    })
}

/// Sweep the control parameter g: per point, ground of the biased H′₋
/// block and of the m=0 block at the policy's truncation, with the
/// order parameters of the H′₋ ground state.
pub fn scan_qpt(
    g_axis: &GridAxis,
    omega_over_gamma: f64,
    omega_q_over_gamma: f64,
    policy: TruncationPolicy,
    bias: f64,
    workers: usize,
) -> Result<QptScan> {
    if omega_over_gamma <= 0.0 {
        return Err(Error::InvalidParam("omega_over_gamma must be > 0".into()));
    }
    if g_axis.min < 0.0 {
        return Err(Error::InvalidParam("g must be >= 0".into()));
    }
    spectra::pin_blas_single_thread();
    let start = Instant::now();
    let gs = g_axis.values();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParam(format!("worker pool: {e}")))?;
    let points: Vec<QptPoint> = pool.install(|| {
        gs.par_iter()
            .map(
                |&g| match qpt_point(g, omega_over_gamma, omega_q_over_gamma, policy, bias) {
                    Ok(p) => p,
                    Err(e) => QptPoint {
                        g,
                        n_max_used: 0,
                        energy: f64::NAN,
                        energy_rescaled: f64::NAN,
                        energy_hm0: f64::NAN,
                        hm0_converged: false,
                        gap: f64::NAN,
                        n_mean: f64::NAN,
                        n_rescaled: f64::NAN,
                        negativity: f64::NAN,
                        m_stag: f64::NAN,
                        sigma_bz: f64::NAN,
                        host_block: HostBlock::HMinus,
                        status: PointStatus::Failed(slugify(&e)),
                    },
                },
            )
            .collect()
    });

    let mut fixed = BTreeMap::new();
    fixed.insert("omega_over_gamma".into(), omega_over_gamma);
    fixed.insert("Omega_over_gamma".into(), omega_q_over_gamma);
    fixed.insert("bias".into(), bias);
    fixed.insert("gamma".into(), 1.0);
    Ok(QptScan {
        grid: GridSpec { axis1: g_axis.clone(), axis2: None, fixed, policy },
        points,
        provenance: Provenance {
            code_version: env!("CARGO_PKG_VERSION").into(),
            unit: "energies in units of gamma".into(),
            tolerances: tolerance_map(),
            wall_time_s: start.elapsed().as_secs_f64(),
            workers,
        },
    })
}

// ---------------------------------------------------------------------
// critical-point estimation
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CriticalEstimate {
    pub g_star: f64,
    pub max_abs_d2: f64,
    /// (g, value, second difference) at each interior stencil point.
    pub stencil: Vec<(f64, f64, f64)>,
}

/// Kink locator: g at the maximum |second finite difference| of the curve
/// (three-point stencil on a uniform grid).
pub fn estimate_critical_point(curve: &[(f64, f64)]) -> Result<CriticalEstimate> {
    if curve.len() < 7 {
        return Err(Error::TooFewPoints { needed: 7, got: curve.len() });
    }
    let h = curve[1].0 - curve[0].0;
    let span = curve[curve.len() - 1].0 - curve[0].0;
    for w in curve.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * span.abs().max(1.0) {
            return Err(Error::InvalidParam("grid must be uniformly spaced".into()));
        }
    }
    let mut stencil = Vec::with_capacity(curve.len() - 2);
    let mut best = (curve[1].0, 0.0f64);
    let value_scale = curve.iter().fold(0.0f64, |a, &(_, y)| a.max(y.abs()));
    for i in 1..curve.len() - 1 {
        let d2 = curve[i + 1].1 - 2.0 * curve[i].1 + curve[i - 1].1;
        stencil.push((curve[i].0, curve[i].1, d2));
        if d2.abs() > best.1 {
            best = (curve[i].0, d2.abs());
        }
    }
    if best.1 <= 1e-12 * value_scale.max(1.0) {
        return Err(Error::TooFewFeatures(
            "second differences are flat; no kink to locate".into(),
        ));
    }
    Ok(CriticalEstimate { g_star: best.0, max_abs_d2: best.1, stencil })
}

// ---------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct Sidecar<'a> {
    grid: &'a GridSpec,
    provenance: &'a Provenance,
}

impl Sidecar<'_> {
    fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serialization")
    }
}

/// The sidecar lives next to the CSV with the extension swapped to .json.
pub fn sidecar_path(csv: &std::path::Path) -> std::path::PathBuf {
    let mut p = csv.to_path_buf();
    p.set_extension("json");
    p
}

/// Write-to-temp-then-rename so failed runs leave no partial file.
pub fn write_atomic(path: &std::path::Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn slugify(e: &Error) -> String {
    // keep status strings byte-deterministic
    match e {
        Error::TruncationTooSmall(_) => "truncation".into(),
        Error::ConvergenceFailure(_) => "solver".into(),
        _ => "error".into(),
    }
}
