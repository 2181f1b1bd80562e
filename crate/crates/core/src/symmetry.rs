//! Conserved quantities and invariant-sector bookkeeping.
//!
//! K = cos(πΣᵗᵒᵗᶻ) commutes with the full Hamiltonian for any parameters
//! and splits the Hilbert space into the K=−1 block (4 qutrit-pair states
//! per Fock level) and the K=+1 block (5 per level). When γₓ=γᵧ the finer
//! Σᵗᵒᵗᶻ eigenvalue m ∈ {−2,…,+2} is conserved as well, with per-level
//! multiplicities 1, 2, 3, 2, 1.
//!
//! Sectors are computed from the exact integer diagonal of Σᵗᵒᵗᶻ, never
//! from a numerical eigendecomposition.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::ops::{self, QMatrix, Truncation};

/// Label of an invariant sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorLabel {
    /// Eigenvalue of K: −1 or +1.
    K(i8),
    /// Eigenvalue of Σᵗᵒᵗᶻ: −2..=+2 (requires γₓ=γᵧ).
    M(i8),
}

impl std::fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectorLabel::K(k) => write!(f, "K={k:+}"),
            SectorLabel::M(0) => write!(f, "m=0"),
            SectorLabel::M(m) => write!(f, "m={m:+}"),
        }
    }
}

impl std::str::FromStr for SectorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim();
        let parse_i8 = |v: &str| v.parse::<i8>().map_err(|_| Error::UnknownLabel(norm.into()));
        if let Some(v) = norm.strip_prefix("K=") {
            let k = parse_i8(v)?;
            if k == 1 || k == -1 {
                return Ok(SectorLabel::K(k));
            }
        } else if let Some(v) = norm.strip_prefix("m=") {
            let m = parse_i8(v)?;
            if (-2..=2).contains(&m) {
                return Ok(SectorLabel::M(m));
            }
        }
        Err(Error::UnknownLabel(norm.into()))
    }
}

/// Ordered index list spanning one invariant sector.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub label: SectorLabel,
    pub n_max: usize,
    /// Product-basis indices, ordered by (qutrit pair index, Fock level).
    pub indices: Vec<usize>,
    /// The (m₁, m₂) qutrit pair carried by each group of Fock levels.
    pub qutrit_states: Vec<(i8, i8)>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Number of qutrit-pair states per Fock level.
    pub fn pairs_per_level(&self) -> usize {
        self.qutrit_states.len()
    }
}

const M_OF_INDEX: [i8; 3] = [1, 0, -1];

/// Σᵗᵒᵗᶻ eigenvalue of qutrit pair index p = i₁·3 + i₂.
fn m_total_of_pair(p: usize) -> i8 {
    M_OF_INDEX[p / 3] + M_OF_INDEX[p % 3]
}

/// Σᵗᵒᵗᶻ = Σ₁ᶻ ⊗ I ⊗ I + I ⊗ Σ₂ᶻ ⊗ I on the full basis.
pub fn sigma_tot_z(t: Truncation) -> QMatrix {
    let (_, _, sz) = ops::spin1_ops();
    let i3 = QMatrix::identity(3);
    let ib = QMatrix::identity(t.dim());
    let m = ops::kron3(&sz, &i3, &ib).data + ops::kron3(&i3, &sz, &ib).data;
    QMatrix { data: m, hermitian_hint: true }
}

/// K = cos(πΣᵗᵒᵗᶻ): diagonal with exact entries ±1.
pub fn k_operator(t: Truncation) -> QMatrix {
    let nb = t.dim();
    let dim = 9 * nb;
    let mut k = Array2::zeros((dim, dim));
    for p in 0..9 {
        let m = m_total_of_pair(p);
        let val = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        for n in 0..nb {
            let i = p * nb + n;
            k[(i, i)] = C64::new(val, 0.0);
        }
    }
    QMatrix { data: k, hermitian_hint: true }
}

/// Deterministic basis of the requested sector.
pub fn sector_basis(label: SectorLabel, t: Truncation) -> Result<SectorBasis> {
    let keep: Vec<usize> = match label {
        SectorLabel::K(k) if k == 1 || k == -1 => (0..9)
            .filter(|&p| {
                let m = m_total_of_pair(p);
                let kv = if m.rem_euclid(2) == 0 { 1 } else { -1 };
                kv == k
            })
            .collect(),
        SectorLabel::M(m) if (-2..=2).contains(&m) => {
            (0..9).filter(|&p| m_total_of_pair(p) == m).collect()
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    let nb = t.dim();
    let mut indices = Vec::with_capacity(keep.len() * nb);
    let mut qutrit_states = Vec::with_capacity(keep.len());
    for &p in &keep {
        qutrit_states.push((M_OF_INDEX[p / 3], M_OF_INDEX[p % 3]));
        for n in 0..nb {
            indices.push(p * nb + n);
        }
    }
    Ok(SectorBasis { label, n_max: t.n_max, indices, qutrit_states })
}

/// All five m-sectors in ascending m order.
pub fn m_sector_bases(t: Truncation) -> Vec<SectorBasis> {
    (-2..=2)
        .map(|m| sector_basis(SectorLabel::M(m), t).expect("static labels"))
        .collect()
}

/// The m-partition is exposed only when γₓ=γᵧ holds to machine accuracy.
pub fn require_m_partition(p: &ModelParams) -> Result<()> {
    if p.symmetric_xy() {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!(
            "m-sector requests need gamma_x = gamma_y (within 1e-14); got {} vs {}",
            p.gamma_x, p.gamma_y
        )))
    }
}

/// Sub-matrix of `h` on the sector's rows and columns.
pub fn project(h: &QMatrix, s: &SectorBasis) -> Result<QMatrix> {
    let full = 9 * (s.n_max + 1);
    if h.dim() != full {
        return Err(Error::DimMismatch(format!(
            "project: expected full dim {full}, got {}",
            h.dim()
        )));
    }
    let d = s.dim();
    let mut block = Array2::zeros((d, d));
    for (r, &i) in s.indices.iter().enumerate() {
        for (c, &j) in s.indices.iter().enumerate() {
            block[(r, c)] = h.data[(i, j)];
        }
    }
    Ok(QMatrix { data: block, hermitian_hint: h.hermitian_hint })
}

/// Scatter a sector block back into a zero full-dimension matrix.
pub fn embed(block: &QMatrix, s: &SectorBasis) -> Result<QMatrix> {
    if block.dim() != s.dim() {
        return Err(Error::DimMismatch(format!(
            "embed: block dim {} vs sector dim {}",
            block.dim(),
            s.dim()
        )));
    }
    let full = 9 * (s.n_max + 1);
    let mut out = Array2::zeros((full, full));
    for (r, &i) in s.indices.iter().enumerate() {
        for (c, &j) in s.indices.iter().enumerate() {
            out[(i, j)] = block.data[(r, c)];
        }
    }
    Ok(QMatrix { data: out, hermitian_hint: block.hermitian_hint })
}

/// Embed a sector-basis state into the full basis.
pub fn embed_state(v: &ops::StateVector, s: &SectorBasis) -> Result<ops::StateVector> {
    if v.dim() != s.dim() {
        return Err(Error::DimMismatch(format!(
            "embed_state: state dim {} vs sector dim {}",
            v.dim(),
            s.dim()
        )));
    }
    let full = 9 * (s.n_max + 1);
    let mut data = ndarray::Array1::zeros(full);
    for (r, &i) in s.indices.iter().enumerate() {
        data[i] = v.data[r];
    }
    Ok(ops::StateVector::raw(data))
}

/// Scale-normalized commutator norm ‖AB − BA‖_F / (‖A‖_F·‖B‖_F).
pub fn commutator_norm(a: &QMatrix, b: &QMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "commutator_norm: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let comm = a.data.dot(&b.data) - b.data.dot(&a.data);
    let norm = comm.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = a.frobenius() * b.frobenius();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(norm / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_full, preset_level_crossing, ModelParams};

    #[test]
    fn k_eigenvalues_on_pair_states() {
        let t = Truncation::new(2).unwrap();
        let k = k_operator(t);
        let nb = t.dim();
        // |10> -> pair (0,1) -> p = 1: K = -1 for any n
        for n in 0..nb {
            assert_eq!(k.data[(nb + n, nb + n)].re, -1.0);
        }
        // |00> -> pair (1,1) -> p = 4: K = +1
        for n in 0..nb {
            assert_eq!(k.data[(4 * nb + n, 4 * nb + n)].re, 1.0);
        }
        // trace per Fock level: 5 - 4 = +1
        let tr: f64 = k.data.diag().iter().map(|z| z.re).sum();
        assert_eq!(tr, nb as f64);
    }

    #[test]
    fn sector_sizes_and_order() {
        let t = Truncation::new(3).unwrap();
        let km = sector_basis(SectorLabel::K(-1), t).unwrap();
        let kp = sector_basis(SectorLabel::K(1), t).unwrap();
        assert_eq!(km.dim(), 4 * 4);
        assert_eq!(kp.dim(), 5 * 4);

        let m_minus1 = sector_basis(SectorLabel::M(-1), t).unwrap();
        assert_eq!(m_minus1.qutrit_states, vec![(0, -1), (-1, 0)]);

        let m0 = sector_basis(SectorLabel::M(0), t).unwrap();
        assert_eq!(m0.qutrit_states, vec![(1, -1), (0, 0), (-1, 1)]);

        let total: usize = m_sector_bases(t).iter().map(|s| s.pairs_per_level()).sum();
        assert_eq!(total, 9);

        // disjoint and complete
        let mut all: Vec<usize> = m_sector_bases(t)
            .iter()
            .flat_map(|s| s.indices.iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..36).collect::<Vec<_>>());

        assert!("m=-1".parse::<SectorLabel>().is_ok());
        assert!("m=5".parse::<SectorLabel>().is_err());
        assert!("K=0".parse::<SectorLabel>().is_err());
    }

    #[test]
    fn k_always_conserved_m_conditionally() {
        let t = Truncation::new(5).unwrap();
        let k = k_operator(t);
        let sz = sigma_tot_z(t);

        // asymmetric couplings: K conserved, Sigma_tot^z not
        let p = ModelParams::new(0.9, -0.4, 1.3, 0.8, 0.2, 1.0, 0.7, -0.3).unwrap();
        let h = build_full(&p, t).unwrap();
        assert!(commutator_norm(&h, &k).unwrap() < 1e-12);
        assert!(commutator_norm(&h, &sz).unwrap() > 1e-3);

        // symmetric x/y couplings: both conserved
        let p = ModelParams::new(0.9, -0.4, 1.1, 1.1, 0.2, 1.0, 0.7, -0.3).unwrap();
        let h = build_full(&p, t).unwrap();
        assert!(commutator_norm(&h, &k).unwrap() < 1e-12);
        assert!(commutator_norm(&h, &sz).unwrap() < 1e-12);
    }

    #[test]
    fn off_block_norm_vanishes_for_k_partition() {
        let t = Truncation::new(4).unwrap();
        let p = ModelParams::new(0.3, 1.4, -0.8, 0.6, 0.5, 1.2, -0.4, 0.9).unwrap();
        let h = build_full(&p, t).unwrap();
        let km = sector_basis(SectorLabel::K(-1), t).unwrap();
        let kp = sector_basis(SectorLabel::K(1), t).unwrap();
        let mut off: f64 = 0.0;
        for &i in &kp.indices {
            for &j in &km.indices {
                off = off.max(h.data[(i, j)].norm());
            }
        }
        assert!(off < 1e-12 * h.frobenius());
    }

    #[test]
    fn block_embedding_reconstructs_full() {
        let t = Truncation::new(3).unwrap();
        let p = preset_level_crossing(0.7, 1.0, 0.3, 1.0).unwrap();
        let h = build_full(&p, t).unwrap();
        let mut sum = Array2::<C64>::zeros((h.dim(), h.dim()));
        for s in m_sector_bases(t) {
            let block = project(&h, &s).unwrap();
            sum = sum + embed(&block, &s).unwrap().data;
        }
        let dev = (&sum - &h.data).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(dev < 1e-14, "re-embedding deviation {dev}");
    }

    #[test]
    fn spectra_union_matches_full() {
        let t = Truncation::new(3).unwrap();
        let p = preset_level_crossing(0.4, 0.9, 0.25, 1.3).unwrap();
        let h = build_full(&p, t).unwrap();
        let full = crate::spectra::eigh(&h).unwrap().values;
        let mut union: Vec<f64> = Vec::new();
        for s in m_sector_bases(t) {
            let block = project(&h, &s).unwrap();
            union.extend(crate::spectra::eigh(&block).unwrap().values);
        }
        union.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(union.len(), full.len());
        for (a, b) in union.iter().zip(full.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn m_partition_gate() {
        let sym = preset_level_crossing(1.0, 1.0, 0.2, 1.0).unwrap();
        assert!(require_m_partition(&sym).is_ok());
        let asym = ModelParams::new(1.0, 1.0, 1.0, 0.5, 0.0, 1.0, 0.2, 0.2).unwrap();
        assert!(require_m_partition(&asym).is_err());
    }
}
