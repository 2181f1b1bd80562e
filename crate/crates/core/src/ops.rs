//! Elementary operators and tensor-product scaffolding.
//!
//! Everything downstream is assembled from the matrices built here: spin-1
//! operators in the (|1⟩, |0⟩, |−1⟩) basis, Pauli matrices in the (|+⟩, |−⟩)
//! basis, truncated boson operators on Fock space, the displacement and
//! squeezing unitaries, and the fixed-order Kronecker product
//! qutrit-1 ⊗ qutrit-2 ⊗ boson.
//!
//! Basis-index convention (fixed globally): the product state with qutrit
//! indices (i₁, i₂) and Fock level n sits at `(i₁·3 + i₂)·(n_max+1) + n`,
//! where index 0 ↦ m=+1, 1 ↦ m=0, 2 ↦ m=−1.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance used when verifying a `hermitian_hint` claim.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Fock-space truncation: levels 0..=n_max are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub n_max: usize,
    /// Acceptable eigenpair residual, relative to ‖H‖.
    pub residual_tol: f64,
}

impl Truncation {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParam("n_max must be >= 1".into()));
        }
        Ok(Self { n_max, residual_tol: 1e-8 })
    }

    /// Boson matrix dimension, n_max + 1.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Guard for a displacement by `alpha`: the displaced vacuum must fit
    /// the kept levels with tail mass below ~1e-10 (n_max ≥ 9|α|²).
    pub fn check_displacement(&self, alpha: f64) -> Result<()> {
        if alpha * alpha * 9.0 > self.n_max as f64 {
            return Err(Error::TruncationTooSmall(format!(
                "displacement alpha={alpha}: need n_max >= 9*alpha^2 = {:.1}, have {}",
                9.0 * alpha * alpha,
                self.n_max
            )));
        }
        Ok(())
    }

    /// Guard for a squeeze by `r`: requires 4·e^{2|r|} ≤ n_max.
    pub fn check_squeeze(&self, r: f64) -> Result<()> {
        if 4.0 * (2.0 * r.abs()).exp() > self.n_max as f64 {
            return Err(Error::TruncationTooSmall(format!(
                "squeeze r={r}: need n_max >= 4*exp(2|r|) = {:.1}, have {}",
                4.0 * (2.0 * r.abs()).exp(),
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Dense complex matrix with dimension metadata and a Hermiticity flag.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub data: Array2<C64>,
    pub hermitian_hint: bool,
}

impl QMatrix {
    /// Wrap a matrix without any Hermiticity claim.
    pub fn general(data: Array2<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::DimMismatch(format!(
                "QMatrix must be square and non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { data, hermitian_hint: false })
    }

    /// Wrap a matrix claimed Hermitian; the claim is verified to
    /// max|A − A†| ≤ 1e-12·max|A|.
    pub fn hermitian(data: Array2<C64>) -> Result<Self> {
        let mut m = Self::general(data)?;
        let dev = m.hermitian_deviation();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(format!(
                "max|A - A^dag| = {dev:.3e} exceeds {:.1e} * max|A|",
                HERMITIAN_TOL
            )));
        }
        m.hermitian_hint = true;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        Self { data: Array2::eye(dim), hermitian_hint: true }
    }

    pub fn dagger(&self) -> Self {
        let data = self.data.t().mapv(|z| z.conj());
        Self { data, hermitian_hint: self.hermitian_hint }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max over entries of |A − A†|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "matmul: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        QMatrix::general(self.data.dot(&other.data))
    }

    /// A·v for a state vector of matching dimension.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim() != v.dim() {
            return Err(Error::DimMismatch(format!(
                "apply: matrix dim {} vs state dim {}",
                self.dim(),
                v.dim()
            )));
        }
        Ok(StateVector::raw(self.data.dot(&v.data)))
    }
}

/// Dense complex state vector over one of the product bases.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub data: Array1<C64>,
}

impl StateVector {
    /// Wrap amplitudes as-is (no normalization, no phase convention).
    pub fn raw(data: Array1<C64>) -> Self {
        Self { data }
    }

    /// Normalize and apply the canonical global phase: the largest-magnitude
    /// amplitude is made real and non-negative (ties: lowest index).
    pub fn normalized(data: Array1<C64>) -> Result<Self> {
        let mut v = Self::raw(data);
        let n = v.norm();
        if n < 1e-300 {
            return Err(Error::InvalidParam("cannot normalize a zero vector".into()));
        }
        v.data.mapv_inplace(|z| z / n);
        v.canonicalize_phase();
        Ok(v)
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut data = Array1::zeros(dim);
        data[index] = C64::new(1.0, 0.0);
        Self::raw(data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn dot(&self, other: &StateVector) -> C64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rotate the global phase so the largest-magnitude amplitude is real
    /// and non-negative (tie-break: lowest index).
    pub fn canonicalize_phase(&mut self) {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for (i, z) in self.data.iter().enumerate() {
            let m = z.norm();
            if m > best_mag + 1e-300 && m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        let z = self.data[best];
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            self.data.mapv_inplace(|a| a * phase);
            // scrub the residual imaginary part on the anchor entry
            self.data[best] = C64::new(self.data[best].re.abs(), 0.0);
        }
    }

    /// Tensor product self ⊗ other.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut data = Array1::zeros(self.dim() * other.dim());
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                data[i * other.dim() + j] = a * b;
            }
        }
        StateVector::raw(data)
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Spin-1 operators (Sx, Sy, Sz) in the basis (|1⟩, |0⟩, |−1⟩); Sz is
/// diag(1, 0, −1) and Sx, Sy carry off-diagonal 1/√2.
pub fn spin1_ops() -> (QMatrix, QMatrix, QMatrix) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let sx = ndarray::array![
        [c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)],
        [c(s, 0.0), c(0.0, 0.0), c(s, 0.0)],
        [c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)]
    ];
    let sy = ndarray::array![
        [c(0.0, 0.0), c(0.0, -s), c(0.0, 0.0)],
        [c(0.0, s), c(0.0, 0.0), c(0.0, -s)],
        [c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]
    ];
    let sz = ndarray::array![
        [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]
    ];
    (
        QMatrix { data: sx, hermitian_hint: true },
        QMatrix { data: sy, hermitian_hint: true },
        QMatrix { data: sz, hermitian_hint: true },
    )
}

/// Pauli matrices (σx, σy, σz) in the (|+⟩, |−⟩) ordering.
pub fn pauli_ops() -> (QMatrix, QMatrix, QMatrix) {
    let sx = ndarray::array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let sy = ndarray::array![[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
    let sz = ndarray::array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
    (
        QMatrix { data: sx, hermitian_hint: true },
        QMatrix { data: sy, hermitian_hint: true },
        QMatrix { data: sz, hermitian_hint: true },
    )
}

/// Truncated annihilation operator, a|n⟩ = √n |n−1⟩.
///
/// The truncated commutator [a, a†] equals the identity except at entry
/// (n_max, n_max), where it is −n_max.
pub fn annihilation(t: Truncation) -> QMatrix {
    let d = t.dim();
    let mut a = Array2::zeros((d, d));
    for n in 1..d {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    QMatrix { data: a, hermitian_hint: false }
}

/// Number operator a†a (diagonal 0..=n_max).
pub fn number_op(t: Truncation) -> QMatrix {
    let d = t.dim();
    let mut n = Array2::zeros((d, d));
    for i in 0..d {
        n[(i, i)] = c(i as f64, 0.0);
    }
    QMatrix { data: n, hermitian_hint: true }
}

/// a† + a.
pub fn position_like(t: Truncation) -> QMatrix {
    let a = annihilation(t);
    let x = &a.data + &a.dagger().data;
    QMatrix { data: x, hermitian_hint: true }
}

/// exp(G) for anti-Hermitian G, via eigendecomposition of iG.
///
/// Unitary up to round-off by construction; one code path serves both the
/// displacement and squeeze operators.
fn exp_antihermitian(g: &Array2<C64>) -> Result<Array2<C64>> {
    let h = g.mapv(|z| z * C64::new(0.0, 1.0)); // iG is Hermitian
    let (vals, vecs) = crate::spectra::eigh_vectors(&h)?;
    // exp(G) = V diag(e^{-i w}) V^dag
    let d = g.nrows();
    let mut phases = Array2::zeros((d, d));
    for k in 0..d {
        let w = vals[k];
        phases[(k, k)] = C64::new(w.cos(), -w.sin());
    }
    let vd = vecs.t().mapv(|z| z.conj());
    Ok(vecs.dot(&phases).dot(&vd))
}

/// Displacement operator D(α) = exp{α(a† − a)} for real α.
pub fn displacement(alpha: f64, t: Truncation) -> Result<QMatrix> {
    t.check_displacement(alpha)?;
    let a = annihilation(t);
    let g = a.dagger().data.mapv(|z| z * alpha) - a.data.mapv(|z| z * alpha);
    let u = exp_antihermitian(&g)?;
    QMatrix::general(u)
}

/// Squeeze operator S(r) = exp{(r/2)(a†² − a²)} for real r.
pub fn squeeze(r: f64, t: Truncation) -> Result<QMatrix> {
    t.check_squeeze(r)?;
    let a = annihilation(t);
    let ad = a.dagger();
    let ad2 = ad.data.dot(&ad.data);
    let a2 = a.data.dot(&a.data);
    let g = (ad2 - a2).mapv(|z| z * (r / 2.0));
    let u = exp_antihermitian(&g)?;
    QMatrix::general(u)
}

/// Kronecker product of two dense matrices.
pub fn kron2(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let data = ndarray::linalg::kron(&a.data, &b.data);
    QMatrix { data, hermitian_hint: a.hermitian_hint && b.hermitian_hint }
}

/// Fixed-order tensor product qutrit-1 ⊗ qutrit-2 ⊗ boson.
///
/// Product index: i = (i₁·dim(B) + i₂)·dim(C) + n for A ⊗ B ⊗ C.
pub fn kron3(a: &QMatrix, b: &QMatrix, c: &QMatrix) -> QMatrix {
    kron2(&kron2(a, b), c)
}
