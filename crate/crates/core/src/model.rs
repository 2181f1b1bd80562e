//! Hamiltonian parameters and builders.
//!
//! The full model describes two interacting qutrits coupled to one boson
//! mode:
//!
//! ```text
//! H = Ω₁Σ₁ᶻ + Ω₂Σ₂ᶻ + γₓΣ₁ˣΣ₂ˣ + γᵧΣ₁ʸΣ₂ʸ + γzΣ₁ᶻΣ₂ᶻ
//!     + ω a†a + (λ₁Σ₁ᶻ + λ₂Σ₂ᶻ)(a† + a)
//! ```
//!
//! with ħ = 1 and all energies in one common arbitrary unit. Besides the
//! full builder the module provides the effective builders for the K=−1
//! block (two fictitious qubits sharing the mode), the Σᵗᵒᵗᶻ=0 block
//! (an effective spin-1 coupled to the mode), and the normal/superradiant
//! quadratic boson Hamiltonians that govern the low-energy sector in the
//! γ/ω → ∞ limit.

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ops::{self, QMatrix, Truncation};

/// Raw coefficients of the full Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega1: f64,
    pub omega2: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub gamma_z: f64,
    /// Boson frequency ω, must be positive.
    pub omega_mode: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ModelParams {
    pub fn new(
        omega1: f64,
        omega2: f64,
        gamma_x: f64,
        gamma_y: f64,
        gamma_z: f64,
        omega_mode: f64,
        lambda1: f64,
        lambda2: f64,
    ) -> Result<Self> {
        let p = Self { omega1, omega2, gamma_x, gamma_y, gamma_z, omega_mode, lambda1, lambda2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.omega1, self.omega2, self.gamma_x, self.gamma_y, self.gamma_z,
            self.omega_mode, self.lambda1, self.lambda2,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("all parameters must be finite".into()));
        }
        if self.omega_mode <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "omega_mode must be > 0, got {}",
                self.omega_mode
            )));
        }
        Ok(())
    }

    /// Ω₊ = (Ω₁+Ω₂)/2.
    pub fn omega_plus(&self) -> f64 {
        0.5 * (self.omega1 + self.omega2)
    }

    /// Ω₋ = (Ω₁−Ω₂)/2.
    pub fn omega_minus(&self) -> f64 {
        0.5 * (self.omega1 - self.omega2)
    }

    /// γ₊ = γₓ+γᵧ.
    pub fn gamma_plus(&self) -> f64 {
        self.gamma_x + self.gamma_y
    }

    /// γ₋ = γₓ−γᵧ.
    pub fn gamma_minus(&self) -> f64 {
        self.gamma_x - self.gamma_y
    }

    /// λ₊ = (λ₁+λ₂)/2.
    pub fn lambda_plus(&self) -> f64 {
        0.5 * (self.lambda1 + self.lambda2)
    }

    /// λ₋ = (λ₁−λ₂)/2.
    pub fn lambda_minus(&self) -> f64 {
        0.5 * (self.lambda1 - self.lambda2)
    }

    /// α_k = λ_k/ω.
    pub fn alpha(&self, k: usize) -> f64 {
        match k {
            1 => self.lambda1 / self.omega_mode,
            2 => self.lambda2 / self.omega_mode,
            _ => panic!("alpha index must be 1 or 2"),
        }
    }

    /// Whether γₓ = γᵧ to machine accuracy, which is what makes Σᵗᵒᵗᶻ a
    /// constant of motion and the m-sector decomposition exact.
    pub fn symmetric_xy(&self) -> bool {
        (self.gamma_x - self.gamma_y).abs()
            <= 1e-14 * self.gamma_x.abs().max(self.gamma_y.abs()).max(1.0)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    /// Whether the closed-form (level-crossing) conditions hold:
    /// Ω₁=Ω₂, γₓ=γᵧ, λ₁=λ₂.
    pub fn is_level_crossing_form(&self) -> bool {
        Self::close(self.omega1, self.omega2)
            && Self::close(self.gamma_x, self.gamma_y)
            && Self::close(self.lambda1, self.lambda2)
    }

    /// Whether the QPT conditions hold: Ω₁=Ω₂, γₓ=γᵧ, λ₁=−λ₂.
    pub fn is_qpt_form(&self) -> bool {
        Self::close(self.omega1, self.omega2)
            && Self::close(self.gamma_x, self.gamma_y)
            && Self::close(self.lambda1, -self.lambda2)
    }
}

/// Parameters of the superradiant-QPT scenario (opposite qutrit-mode
/// couplings). The dimensionless control parameter is
/// g = λ/√(ω·γ), with criticality at g = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QptParams {
    pub omega_q: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub omega_mode: f64,
}

impl QptParams {
    pub fn new(omega_q: f64, gamma: f64, lambda: f64, omega_mode: f64) -> Result<Self> {
        if !(omega_q.is_finite() && gamma.is_finite() && lambda.is_finite() && omega_mode.is_finite()) {
            return Err(Error::InvalidParam("QPT parameters must be finite".into()));
        }
        if omega_mode <= 0.0 {
            return Err(Error::InvalidParam("omega_mode must be > 0".into()));
        }
        if gamma <= 0.0 {
            return Err(Error::InvalidParam("gamma must be > 0".into()));
        }
        Ok(Self { omega_q, gamma, lambda, omega_mode })
    }

    /// Build from the dimensionless scan coordinates (γ = 1 unit).
    pub fn from_ratios(g: f64, omega_over_gamma: f64, omega_q_over_gamma: f64) -> Result<Self> {
        let gamma = 1.0;
        let omega_mode = omega_over_gamma * gamma;
        let lambda = g * (omega_mode * gamma).sqrt();
        Self::new(omega_q_over_gamma * gamma, gamma, lambda, omega_mode)
    }

    /// Control parameter g = λ/√(ωγ) = 2λ_c/√(ω Ω_q) of the effective
    /// single-qubit Rabi model, with λ_c = λ/2 and Ω_q = γ.
    pub fn g(&self) -> f64 {
        self.lambda / (self.omega_mode * self.gamma).sqrt()
    }

    /// The corresponding full-model parameters (opposite-coupling preset).
    pub fn model_params(&self) -> ModelParams {
        preset_qpt(self.omega_q, self.gamma, self.lambda, self.omega_mode)
            .expect("validated at construction")
    }
}

/// Level-crossing preset: Ω₁=Ω₂=Ω, γₓ=γᵧ=γ, γz=0, λ₁=λ₂=λ.
pub fn preset_level_crossing(omega: f64, gamma: f64, lambda: f64, omega_mode: f64) -> Result<ModelParams> {
    ModelParams::new(omega, omega, gamma, gamma, 0.0, omega_mode, lambda, lambda)
}

/// QPT preset: Ω₁=Ω₂=Ω, γₓ=γᵧ=γ/2, γz=0, λ₁=λ/2, λ₂=−λ/2.
pub fn preset_qpt(omega: f64, gamma: f64, lambda: f64, omega_mode: f64) -> Result<ModelParams> {
    if gamma <= 0.0 {
        return Err(Error::InvalidParam("preset_qpt requires gamma > 0".into()));
    }
    ModelParams::new(
        omega,
        omega,
        gamma / 2.0,
        gamma / 2.0,
        0.0,
        omega_mode,
        lambda / 2.0,
        -lambda / 2.0,
    )
}

/// Full Hamiltonian on the qutrit-1 ⊗ qutrit-2 ⊗ boson basis,
/// dimension 9·(n_max+1).
pub fn build_full(p: &ModelParams, t: Truncation) -> Result<QMatrix> {
    p.validate()?;
    let (sx, sy, sz) = ops::spin1_ops();
    let i3 = QMatrix::identity(3);
    let ib = QMatrix::identity(t.dim());
    let nop = ops::number_op(t);
    let x = ops::position_like(t);

    let term = |a: &QMatrix, b: &QMatrix, c: &QMatrix, w: f64| {
        ops::kron3(a, b, c).data.mapv(|z| z * w)
    };

    let mut h = term(&sz, &i3, &ib, p.omega1);
    h = h + term(&i3, &sz, &ib, p.omega2);
    h = h + term(&sx, &sx, &ib, p.gamma_x);
    h = h + term(&sy, &sy, &ib, p.gamma_y);
    h = h + term(&sz, &sz, &ib, p.gamma_z);
    h = h + term(&i3, &i3, &nop, p.omega_mode);
    h = h + term(&sz, &i3, &x, p.lambda1);
    h = h + term(&i3, &sz, &x, p.lambda2);

    QMatrix::hermitian(h)
}

/// Effective Hamiltonian of the K=−1 block as two fictitious qubits
/// sharing the mode, dimension 4·(n_max+1):
///
/// ```text
/// H₀ = Ω₊σₐᶻ + (γ₋/2)σₐˣ + λ₊(a†+a)σₐᶻ
///    + Ω₋σᵦᶻ + (γ₊/2)σᵦˣ + λ₋(a†+a)σᵦᶻ + ω a†a
/// ```
///
/// The basis order (|++⟩,|+−⟩,|−+⟩,|−−⟩) ⊗ Fock matches the K=−1 sector
/// order (|10⟩,|01⟩,|0−1⟩,|−10⟩) ⊗ Fock, so this equals the sector
/// projection of [`build_full`] entrywise. Note the γ±/2 coefficients:
/// direct projection produces the halved couplings.
pub fn build_h0_effective(p: &ModelParams, t: Truncation) -> Result<QMatrix> {
    p.validate()?;
    let (px, _, pz) = ops::pauli_ops();
    let i2 = QMatrix::identity(2);
    let ib = QMatrix::identity(t.dim());
    let nop = ops::number_op(t);
    let x = ops::position_like(t);

    let term = |a: &QMatrix, b: &QMatrix, c: &QMatrix, w: f64| {
        ops::kron3(a, b, c).data.mapv(|z| z * w)
    };

    let mut h = term(&pz, &i2, &ib, p.omega_plus());
    h = h + term(&px, &i2, &ib, 0.5 * p.gamma_minus());
    h = h + term(&pz, &i2, &x, p.lambda_plus());
    h = h + term(&i2, &pz, &ib, p.omega_minus());
    h = h + term(&i2, &px, &ib, 0.5 * p.gamma_plus());
    h = h + term(&i2, &pz, &x, p.lambda_minus());
    h = h + term(&i2, &i2, &nop, p.omega_mode);

    QMatrix::hermitian(h)
}

/// Effective Hamiltonian of the Σᵗᵒᵗᶻ=0 block on the basis
/// (|1−1⟩, |00⟩, |−11⟩) ⊗ Fock, dimension 3·(n_max+1):
///
/// ```text
/// H₃ = 2Ω₋Σᶻ + √2·γ̄·Σˣ + ω a†a + (λ₁−λ₂)(a†+a)Σᶻ
/// ```
///
/// where γ̄ is the common γₓ=γᵧ value. Requires γz = 0 and γₓ = γᵧ; with
/// λ₁=λ₂ the coupling term vanishes, with λ₁=−λ₂=λ/2 it becomes
/// λ(a†+a)Σᶻ. Equal qutrit frequencies remove the Σᶻ offset term.
pub fn build_h3(p: &ModelParams, t: Truncation) -> Result<QMatrix> {
    p.validate()?;
    if p.gamma_z != 0.0 {
        return Err(Error::InvalidParam(format!(
            "build_h3 requires gamma_z = 0, got {}",
            p.gamma_z
        )));
    }
    if !p.symmetric_xy() {
        return Err(Error::InvalidParam(format!(
            "build_h3 requires gamma_x = gamma_y, got {} vs {}",
            p.gamma_x, p.gamma_y
        )));
    }
    let (sx, _, sz) = ops::spin1_ops();
    let i3 = QMatrix::identity(3);
    let nop = ops::number_op(t);
    let x = ops::position_like(t);

    let gbar = p.gamma_x;
    let coupling = p.lambda1 - p.lambda2;
    let ib = QMatrix::identity(t.dim());

    let mut h = ops::kron2(&sx, &ib)
        .data
        .mapv(|z| z * (std::f64::consts::SQRT_2 * gbar));
    h = h + ops::kron2(&sz, &ib).data.mapv(|z| z * (2.0 * p.omega_minus()));
    h = h + ops::kron2(&i3, &nop).data.mapv(|z| z * p.omega_mode);
    h = h + ops::kron2(&sz, &x).data.mapv(|z| z * coupling);

    QMatrix::hermitian(h)
}

/// Which side of the superradiant transition an effective Hamiltonian or
/// closed-form ground state refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// g < 1.
    Normal,
    /// g > 1.
    Superradiant,
}

impl Phase {
    pub fn check_g(self, g: f64) -> Result<()> {
        match self {
            Phase::Normal if g < 1.0 => Ok(()),
            Phase::Superradiant if g > 1.0 => Ok(()),
            Phase::Normal => Err(Error::PhaseMismatch(format!(
                "normal-phase form requires g < 1, got g = {g}"
            ))),
            Phase::Superradiant => Err(Error::PhaseMismatch(format!(
                "superradiant-phase form requires g > 1, got g = {g}"
            ))),
        }
    }
}

/// Boson-only effective Hamiltonian of the low-energy (σₐᶻ=−1) sector in
/// the γ/ω → ∞ limit: ω a†a − c·(a†+a)² + const, with
/// c = ωg²/4 and const = −γ/2 − Ω in the normal phase, and
/// c = ω/(4g⁴) and const = −γ(g²+g⁻²)/4 − Ω in the superradiant phase.
pub fn build_np_sp_effective(q: &QptParams, t: Truncation, phase: Phase) -> Result<QMatrix> {
    let g = q.g();
    phase.check_g(g)?;
    let (c, shift) = match phase {
        Phase::Normal => (
            q.omega_mode * g * g / 4.0,
            -q.gamma / 2.0 - q.omega_q,
        ),
        Phase::Superradiant => (
            q.omega_mode / (4.0 * g.powi(4)),
            -q.gamma * (g * g + 1.0 / (g * g)) / 4.0 - q.omega_q,
        ),
    };
    let nop = ops::number_op(t);
    let x = ops::position_like(t);
    let x2 = x.data.dot(&x.data);
    let mut h = nop.data.mapv(|z| z * q.omega_mode);
    h = h - x2.mapv(|z| z * c);
    let d = t.dim();
    for i in 0..d {
        h[(i, i)] += C64::new(shift, 0.0);
    }
    QMatrix::hermitian(h)
}

/// On-disk parameter file: the eight raw coefficients plus the truncation.
/// Unknown keys are rejected.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    omega1: f64,
    omega2: f64,
    gamma_x: f64,
    gamma_y: f64,
    gamma_z: f64,
    omega_mode: f64,
    lambda1: f64,
    lambda2: f64,
    n_max: usize,
}

/// Load a JSON parameter file (see module docs for the schema).
pub fn load_params_file(path: &std::path::Path) -> Result<(ModelParams, Truncation)> {
    let text = std::fs::read_to_string(path)?;
    parse_params_json(&text)
}

/// Parse the JSON parameter document from a string.
pub fn parse_params_json(text: &str) -> Result<(ModelParams, Truncation)> {
    let f: ParamsFile =
        serde_json::from_str(text).map_err(|e| Error::ParamFile(e.to_string()))?;
    let p = ModelParams::new(
        f.omega1, f.omega2, f.gamma_x, f.gamma_y, f.gamma_z, f.omega_mode, f.lambda1, f.lambda2,
    )?;
    let t = Truncation::new(f.n_max)?;
    Ok((p, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra;

    #[test]
    fn preset_level_crossing_combinations() {
        let p = preset_level_crossing(1.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(p.lambda_plus(), 0.5);
        assert_eq!(p.lambda_minus(), 0.0);
        assert_eq!(p.gamma_plus(), 2.0);
        assert_eq!(p.gamma_minus(), 0.0);
        assert_eq!(p.gamma_z, 0.0);
        assert!(p.is_level_crossing_form());

        // free limit still validates
        let free = preset_level_crossing(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(free.is_level_crossing_form());

        assert!(preset_level_crossing(1.0, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn preset_qpt_combinations() {
        let p = preset_qpt(1.0, 1.0, 0.2, 0.001).unwrap();
        assert!((p.lambda_plus() - 0.0).abs() < 1e-15);
        assert!((p.lambda_minus() - 0.1).abs() < 1e-15);
        assert!((p.gamma_plus() - 1.0).abs() < 1e-15);
        assert!(p.is_qpt_form());

        let q = QptParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(q.g(), 0.0);

        // reconciled definition g = lambda / sqrt(omega * gamma)
        let q = QptParams::new(1.0, 1.0, 0.3, 0.25).unwrap();
        assert!((q.g() - 0.3 / (0.25f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn build_full_decoupled_spectrum() {
        // gamma = lambda = 0, Omega1 = Omega2 = omega = 1: ladder m1+m2+n
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let t = Truncation::new(3).unwrap();
        let h = build_full(&p, t).unwrap();
        assert_eq!(h.dim(), 36);
        let es = spectra::eigh(&h).unwrap();
        let mut want: Vec<f64> = Vec::new();
        for m1 in [-1i32, 0, 1] {
            for m2 in [-1i32, 0, 1] {
                for n in 0..=3 {
                    want.push((m1 + m2 + n) as f64);
                }
            }
        }
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in es.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((es.values[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn build_full_dim() {
        let p = preset_level_crossing(1.0, 1.0, 0.1, 1.0).unwrap();
        let t = Truncation::new(48).unwrap();
        assert_eq!(build_full(&p, t).unwrap().dim(), 441);
    }

    #[test]
    fn full_hamiltonian_linearity() {
        let t = Truncation::new(4).unwrap();
        let p1 = ModelParams::new(0.3, -0.7, 0.2, 0.9, -0.4, 1.1, 0.5, -0.2).unwrap();
        let p2 = ModelParams::new(-1.1, 0.4, -0.6, 0.3, 0.8, 1.7, -0.9, 0.6).unwrap();
        // p2 - p1 keeps omega_mode positive, so H(p1) + H(p2-p1) = H(p2)
        let pd = ModelParams::new(
            p2.omega1 - p1.omega1,
            p2.omega2 - p1.omega2,
            p2.gamma_x - p1.gamma_x,
            p2.gamma_y - p1.gamma_y,
            p2.gamma_z - p1.gamma_z,
            p2.omega_mode - p1.omega_mode,
            p2.lambda1 - p1.lambda1,
            p2.lambda2 - p1.lambda2,
        )
        .unwrap();
        let h1 = build_full(&p1, t).unwrap();
        let h2 = build_full(&p2, t).unwrap();
        let hd = build_full(&pd, t).unwrap();
        let sum = &h1.data + &hd.data;
        let dev = (&sum - &h2.data).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(dev < 1e-12, "linearity deviation {dev}");
    }

    #[test]
    fn np_sp_effective_limits() {
        let t = Truncation::new(200).unwrap();
        // g = 0: free oscillator shifted by -gamma/2 - Omega
        let q = QptParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let h = build_np_sp_effective(&q, t, Phase::Normal).unwrap();
        let es = spectra::eigh(&h).unwrap();
        for k in 0..5 {
            assert!((es.values[k] - (k as f64 - 1.5)).abs() < 1e-10);
        }

        // normal-phase ground energy, squeezed-vacuum form
        let q = QptParams::from_ratios(0.6, 1.0, 1.0).unwrap();
        let h = build_np_sp_effective(&q, t, Phase::Normal).unwrap();
        let e0 = spectra::eigh(&h).unwrap().values[0];
        let want = 1.0 * ((1.0f64 - 0.36).sqrt() - 1.0) / 2.0 - 0.5 - 1.0;
        assert!((e0 - want).abs() < 1e-6, "got {e0}, want {want}");

        // superradiant ground energy, squeezed-vacuum form
        let q = QptParams::from_ratios(1.5, 1.0, 1.0).unwrap();
        let h = build_np_sp_effective(&q, t, Phase::Superradiant).unwrap();
        let e0 = spectra::eigh(&h).unwrap().values[0];
        let g: f64 = 1.5;
        let want = 1.0 * ((1.0 - g.powi(-4)).sqrt() - 1.0) / 2.0
            - (g * g + 1.0 / (g * g)) / 4.0
            - 1.0;
        assert!((e0 - want).abs() < 1e-6, "got {e0}, want {want}");

        // phase guard
        assert!(matches!(
            build_np_sp_effective(&q, t, Phase::Normal),
            Err(Error::PhaseMismatch(_))
        ));
    }

    #[test]
    fn params_json_roundtrip_and_rejection() {
        let good = r#"{
            "omega1": 1.0, "omega2": 1.0,
            "gamma_x": 0.7, "gamma_y": 0.7, "gamma_z": 0.0,
            "omega_mode": 1.0, "lambda1": 0.6, "lambda2": 0.6,
            "n_max": 40
        }"#;
        let (p, t) = parse_params_json(good).unwrap();
        assert_eq!(p.gamma_x, 0.7);
        assert_eq!(t.n_max, 40);

        let unknown = r#"{"omega1":1,"omega2":1,"gamma_x":0,"gamma_y":0,"gamma_z":0,
            "omega_mode":1,"lambda1":0,"lambda2":0,"n_max":4,"surprise":1}"#;
        assert!(parse_params_json(unknown).is_err());

        let bad_mode = r#"{"omega1":1,"omega2":1,"gamma_x":0,"gamma_y":0,"gamma_z":0,
            "omega_mode":-1,"lambda1":0,"lambda2":0,"n_max":4}"#;
        assert!(parse_params_json(bad_mode).is_err());
    }
}
