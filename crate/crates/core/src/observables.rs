//! Reduced density matrices and order parameters.
//!
//! All quantities act on states over the full product basis or over a
//! sector basis; the sector's (m₁, m₂) metadata is enough to embed its
//! qutrit content back into the 9-dimensional two-qutrit space before
//! tracing out the boson.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ops::StateVector;
use crate::symmetry::SectorBasis;

/// Where a state's amplitudes live.
#[derive(Debug, Clone, Copy)]
pub enum StateSpace<'a> {
    /// Full qutrit ⊗ qutrit ⊗ boson basis with the given n_max.
    Full { n_max: usize },
    /// One invariant sector.
    Sector(&'a SectorBasis),
}

impl<'a> StateSpace<'a> {
    fn boson_dim(&self) -> usize {
        match self {
            StateSpace::Full { n_max } => n_max + 1,
            StateSpace::Sector(s) => s.n_max + 1,
        }
    }

    fn expected_dim(&self) -> usize {
        match self {
            StateSpace::Full { .. } => 9 * self.boson_dim(),
            StateSpace::Sector(s) => s.dim(),
        }
    }

    /// The 9-basis qutrit-pair index of each per-level group.
    fn pair_indices(&self) -> Vec<usize> {
        match self {
            StateSpace::Full { .. } => (0..9).collect(),
            StateSpace::Sector(s) => s
                .qutrit_states
                .iter()
                .map(|&(m1, m2)| {
                    let i1 = (1 - m1) as usize;
                    let i2 = (1 - m2) as usize;
                    i1 * 3 + i2
                })
                .collect(),
        }
    }
}

fn check_dim(v: &StateVector, space: &StateSpace) -> Result<()> {
    if v.dim() != space.expected_dim() {
        return Err(Error::DimMismatch(format!(
            "state dim {} does not match basis dim {}",
            v.dim(),
            space.expected_dim()
        )));
    }
    Ok(())
}

/// Partial trace over the boson factor: the 9×9 two-qutrit density matrix.
pub fn reduce_to_qutrits(v: &StateVector, space: StateSpace) -> Result<Array2<C64>> {
    check_dim(v, &space)?;
    let nb = space.boson_dim();
    let pairs = space.pair_indices();
    let mut rho = Array2::zeros((9, 9));
    for (a, &pa) in pairs.iter().enumerate() {
        for (b, &pb) in pairs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..nb {
                acc += v.data[a * nb + n] * v.data[b * nb + n].conj();
            }
            rho[(pa, pb)] = acc;
        }
    }
    Ok(rho)
}

/// Negativity of a two-qutrit density matrix: the absolute sum of the
/// negative eigenvalues of the partial transpose over qutrit 2.
pub fn negativity(rho: &Array2<C64>) -> Result<f64> {
    if rho.nrows() != 9 || rho.ncols() != 9 {
        return Err(Error::DimMismatch(format!(
            "negativity expects a 9x9 density matrix, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let trace: C64 = rho.diag().iter().sum();
    if (trace.re - 1.0).abs() > 1e-8 || trace.im.abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "trace = {trace} is not 1 within 1e-8"
        )));
    }
    let mut pt = Array2::zeros((9, 9));
    for i1 in 0..3 {
        for i2 in 0..3 {
            for j1 in 0..3 {
                for j2 in 0..3 {
                    // (i1,i2),(j1,j2) <- (i1,j2),(j1,i2)
                    pt[(i1 * 3 + i2, j1 * 3 + j2)] = rho[(i1 * 3 + j2, j1 * 3 + i2)];
                }
            }
        }
    }
    let m = crate::ops::QMatrix::hermitian(pt)
        .map_err(|_| Error::InvalidState("partial transpose not Hermitian".into()))?;
    let vals = crate::spectra::eigvalsh(&m)?;
    Ok(vals.iter().filter(|&&w| w < 0.0).map(|w| -w).sum())
}

/// (⟨Σ₁ᶻ+Σ₂ᶻ⟩, half of it, ⟨(Σ₁ᶻ−Σ₂ᶻ)/2⟩).
pub fn magnetizations(v: &StateVector, space: StateSpace) -> Result<(f64, f64, f64)> {
    check_dim(v, &space)?;
    let nb = space.boson_dim();
    let pairs = space.pair_indices();
    let mut m_total = 0.0;
    let mut m_stag = 0.0;
    for (a, &pa) in pairs.iter().enumerate() {
        let m1 = 1.0 - (pa / 3) as f64;
        let m2 = 1.0 - (pa % 3) as f64;
        let pop: f64 = (0..nb).map(|n| v.data[a * nb + n].norm_sqr()).sum();
        m_total += (m1 + m2) * pop;
        m_stag += 0.5 * (m1 - m2) * pop;
    }
    Ok((m_total, 0.5 * m_total, m_stag))
}

/// ⟨a†a⟩.
pub fn mean_photon(v: &StateVector, space: StateSpace) -> Result<f64> {
    check_dim(v, &space)?;
    let nb = space.boson_dim();
    let groups = v.dim() / nb;
    let mut acc = 0.0;
    for a in 0..groups {
        for n in 0..nb {
            acc += n as f64 * v.data[a * nb + n].norm_sqr();
        }
    }
    Ok(acc)
}

/// Variances of x = (a+a†)/√2 and p = i(a†−a)/√2.
pub fn quad_variances(v: &StateVector, space: StateSpace) -> Result<(f64, f64)> {
    check_dim(v, &space)?;
    let nb = space.boson_dim();
    let groups = v.dim() / nb;

    // ⟨a⟩, ⟨a²⟩, ⟨a†a⟩ accumulated per qutrit group
    let mut exp_a = C64::new(0.0, 0.0);
    let mut exp_aa = C64::new(0.0, 0.0);
    let mut exp_n = 0.0f64;
    for g in 0..groups {
        let sl = &v.data.as_slice().expect("contiguous")[g * nb..(g + 1) * nb];
        for n in 1..nb {
            exp_a += sl[n - 1].conj() * sl[n] * (n as f64).sqrt();
        }
        for n in 2..nb {
            exp_aa += sl[n - 2].conj() * sl[n] * ((n * (n - 1)) as f64).sqrt();
        }
        for (n, z) in sl.iter().enumerate() {
            exp_n += n as f64 * z.norm_sqr();
        }
    }
    let norm2: f64 = v.data.iter().map(|z| z.norm_sqr()).sum();
    exp_a /= norm2;
    exp_aa /= norm2;
    exp_n /= norm2;

    // x² = (a² + a†² + 2a†a + 1)/2, p² = -(a² + a†² - 2a†a - 1)/2
    let x_mean = (exp_a + exp_a.conj()).re / std::f64::consts::SQRT_2;
    let p_mean = (C64::new(0.0, 1.0) * (exp_a.conj() - exp_a)).re / std::f64::consts::SQRT_2;
    let x2 = (exp_aa.re * 2.0 + 2.0 * exp_n + 1.0) / 2.0;
    let p2 = (-exp_aa.re * 2.0 + 2.0 * exp_n + 1.0) / 2.0;
    Ok((x2 - x_mean * x_mean, p2 - p_mean * p_mean))
}

/// Everything recorded about one numerical ground state.
#[derive(Debug, Clone)]
pub struct GroundRecord {
    pub energy: f64,
    pub gap: f64,
    pub m_total: f64,
    pub m_half: f64,
    pub m_stag: f64,
    pub mean_photon: f64,
    pub n_rescaled: f64,
    pub negativity: f64,
    pub quad_var_x: f64,
    pub sector: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{self, Truncation};
    use crate::symmetry::{sector_basis, SectorLabel};
    use ndarray::Array1;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// |pair p> ⊗ boson, full basis.
    fn product_state(p: usize, boson: &Array1<C64>, t: Truncation) -> StateVector {
        crate::spectra::assemble_product_state(&[(p, c(1.0, 0.0))], boson, t)
    }

    #[test]
    fn product_state_reduces_to_projector() {
        let t = Truncation::new(20).unwrap();
        let d = ops::displacement(0.4, t).unwrap();
        let boson = d.data.column(0).to_owned();
        let v = StateVector::normalized(product_state(1, &boson, t).data).unwrap();
        let rho = reduce_to_qutrits(&v, StateSpace::Full { n_max: 20 }).unwrap();
        assert!((rho[(1, 1)].re - 1.0).abs() < 1e-12);
        let tr: C64 = rho.diag().iter().sum();
        assert!((tr.re - 1.0).abs() < 1e-12);
        assert!(negativity(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn bell_pair_negativity_is_half() {
        let t = Truncation::new(4).unwrap();
        let nb = t.dim();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (|10> - |01>)/sqrt(2) x |0>
        let mut data = Array1::zeros(9 * nb);
        data[nb] = c(s, 0.0);
        data[3 * nb] = c(-s, 0.0);
        let v = StateVector::raw(data);
        let rho = reduce_to_qutrits(&v, StateSpace::Full { n_max: 4 }).unwrap();
        let n = negativity(&rho).unwrap();
        assert!((n - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phi_minus_negativity() {
        let p = crate::model::preset_level_crossing(0.0, 1.0, 0.0, 1.0).unwrap();
        let t = Truncation::new(6).unwrap();
        let (v, _) = crate::analytic::phi_state(0, crate::analytic::PhiBranch::Minus, &p, t).unwrap();
        let rho = reduce_to_qutrits(&v, StateSpace::Full { n_max: 6 }).unwrap();
        let n = negativity(&rho).unwrap();
        assert!((n - crate::analytic::NEG_PHI).abs() < 1e-12, "got {n}");
    }

    #[test]
    fn magnetizations_and_photons_of_analytic_states() {
        let p = crate::model::preset_level_crossing(1.0, 0.7, 0.6, 1.0).unwrap();
        let t = Truncation::new(40).unwrap();
        let space = StateSpace::Full { n_max: 40 };
        let alpha: f64 = 0.6;

        let (v, _) = crate::analytic::theta_state(0, crate::analytic::Sign::Minus, &p, t).unwrap();
        let (mt, mh, _) = magnetizations(&v, space).unwrap();
        assert!((mt + 2.0).abs() < 1e-12);
        assert!((mh + 1.0).abs() < 1e-12);
        let nphot = mean_photon(&v, space).unwrap();
        assert!((nphot - 4.0 * alpha * alpha).abs() < 1e-8, "got {nphot}");

        let (v, _) =
            crate::analytic::psi_state(0, crate::analytic::Sign::Minus, crate::analytic::Sign::Minus, &p, t)
                .unwrap();
        let (mt, _, ms) = magnetizations(&v, space).unwrap();
        assert!((mt + 1.0).abs() < 1e-12);
        assert!(ms.abs() < 1e-12);
        let nphot = mean_photon(&v, space).unwrap();
        assert!((nphot - alpha * alpha).abs() < 1e-8);
    }

    #[test]
    fn sector_basis_observables_match_full() {
        let t = Truncation::new(12).unwrap();
        let s = sector_basis(SectorLabel::K(-1), t).unwrap();
        let nb = t.dim();
        // amplitude on |0-1> x |1> inside the sector (group 2) and |10> x |0>
        let mut data = Array1::zeros(s.dim());
        data[0] = c(0.6, 0.0); // |10> x |0>
        data[2 * nb + 1] = c(0.0, 0.8); // |0-1> x |1>
        let v = StateVector::raw(data);
        let vf = crate::symmetry::embed_state(&v, &s).unwrap();

        let (mt_s, _, ms_s) = magnetizations(&v, StateSpace::Sector(&s)).unwrap();
        let (mt_f, _, ms_f) = magnetizations(&vf, StateSpace::Full { n_max: 12 }).unwrap();
        assert!((mt_s - mt_f).abs() < 1e-14);
        assert!((ms_s - ms_f).abs() < 1e-14);

        let n_s = mean_photon(&v, StateSpace::Sector(&s)).unwrap();
        let n_f = mean_photon(&vf, StateSpace::Full { n_max: 12 }).unwrap();
        assert!((n_s - n_f).abs() < 1e-14);

        let rho_s = reduce_to_qutrits(&v, StateSpace::Sector(&s)).unwrap();
        let rho_f = reduce_to_qutrits(&vf, StateSpace::Full { n_max: 12 }).unwrap();
        let dev = (&rho_s - &rho_f).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(dev < 1e-14);
    }

    #[test]
    fn squeezed_vacuum_variances() {
        let t = Truncation::new(40).unwrap();
        let r = 0.3;
        let s = ops::squeeze(r, t).unwrap();
        let mut data = Array1::zeros(9 * t.dim());
        for n in 0..t.dim() {
            data[n] = s.data[(n, 0)]; // pair 0 x S(r)|0>
        }
        let v = StateVector::normalized(data).unwrap();
        let (vx, vp) = quad_variances(&v, StateSpace::Full { n_max: 40 }).unwrap();
        // with S(r) = exp{(r/2)(a†² − a²)}: var_x = e^{2r}/2, var_p = e^{-2r}/2
        assert!((vx - (2.0 * r).exp() / 2.0).abs() < 1e-6, "var_x {vx}");
        assert!((vp - (-2.0 * r).exp() / 2.0).abs() < 1e-6, "var_p {vp}");
        assert!((vx * vp - 0.25).abs() < 1e-6);
    }

    #[test]
    fn displaced_fock_photon_number() {
        let t = Truncation::new(40).unwrap();
        let alpha = 0.8;
        let d = ops::displacement(alpha, t).unwrap();
        for n in 0..3usize {
            let boson = d.data.column(n).to_owned();
            let v = StateVector::normalized(product_state(4, &boson, t).data).unwrap();
            let nphot = mean_photon(&v, StateSpace::Full { n_max: 40 }).unwrap();
            assert!(
                (nphot - (n as f64 + alpha * alpha)).abs() < 1e-8,
                "n={n} got {nphot}"
            );
        }
    }

    #[test]
    fn negativity_rejects_bad_trace() {
        let mut rho = Array2::zeros((9, 9));
        rho[(0, 0)] = c(0.7, 0.0);
        assert!(matches!(negativity(&rho), Err(Error::InvalidState(_))));
    }
}
