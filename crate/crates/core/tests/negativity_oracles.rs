//! Independent oracles for the entanglement measure: the Schmidt-coefficient
//! identity for pure states and invariance under local unitaries.

use ndarray::{Array1, Array2};
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qutrit_rabi::observables::{negativity, reduce_to_qutrits, StateSpace};
use qutrit_rabi::ops::{StateVector, Truncation};

fn random_two_qutrit_state(rng: &mut ChaCha8Rng) -> Array1<C64> {
    let mut amps = Array1::zeros(9);
    for a in amps.iter_mut() {
        *a = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.mapv(|z| z / norm)
}

/// Schmidt coefficients via SVD of the 3x3 amplitude matrix.
fn schmidt_coefficients(amps: &Array1<C64>) -> Vec<f64> {
    let mut m = Array2::zeros((3, 3));
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = amps[i * 3 + j];
        }
    }
    let (_, s, _) = m.svd(false, false).expect("svd");
    s.to_vec()
}

fn rho_from_pure(amps: &Array1<C64>) -> Array2<C64> {
    let mut rho = Array2::zeros((9, 9));
    for i in 0..9 {
        for j in 0..9 {
            rho[(i, j)] = amps[i] * amps[j].conj();
        }
    }
    rho
}

/// Random 3x3 unitary from the QR decomposition of a Ginibre matrix
/// (Householder QR is unitary to round-off; phases are irrelevant here).
fn random_unitary(rng: &mut ChaCha8Rng) -> Array2<C64> {
    use ndarray_linalg::QR;
    let mut m = Array2::zeros((3, 3));
    for a in m.iter_mut() {
        *a = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let (q, _) = m.qr().expect("qr");
    q
}

#[test]
fn pure_state_negativity_matches_schmidt_identity() {
    // N = ((sum s_i)^2 - 1) / 2 for pure bipartite states
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let amps = random_two_qutrit_state(&mut rng);
        let s = schmidt_coefficients(&amps);
        let want = (s.iter().sum::<f64>().powi(2) - 1.0) / 2.0;
        let got = negativity(&rho_from_pure(&amps)).unwrap();
        worst = worst.max((got - want).abs());
    }
    assert!(worst < 1e-10, "worst deviation {worst:.2e}");
}

#[test]
fn negativity_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    for _ in 0..20 {
        let amps = random_two_qutrit_state(&mut rng);
        let rho = rho_from_pure(&amps);
        let n0 = negativity(&rho).unwrap();

        let u1 = random_unitary(&mut rng);
        let u2 = random_unitary(&mut rng);
        let u = ndarray::linalg::kron(&u1, &u2);
        let ud = u.t().mapv(|z| z.conj());
        let rho_u = u.dot(&rho).dot(&ud);
        let n1 = negativity(&rho_u).unwrap();
        assert!((n0 - n1).abs() < 1e-10, "{n0} vs {n1}");
    }
}

#[test]
fn partial_transpose_side_does_not_matter() {
    // transposing qutrit 1 instead of qutrit 2 gives the same measure;
    // swap the qutrits and compare
    let mut rng = ChaCha8Rng::seed_from_u64(0x1234);
    for _ in 0..20 {
        let amps = random_two_qutrit_state(&mut rng);
        let mut swapped = Array1::zeros(9);
        for i in 0..3 {
            for j in 0..3 {
                swapped[j * 3 + i] = amps[i * 3 + j];
            }
        }
        let n1 = negativity(&rho_from_pure(&amps)).unwrap();
        let n2 = negativity(&rho_from_pure(&swapped)).unwrap();
        assert!((n1 - n2).abs() < 1e-10);
    }
}

#[test]
fn reduction_of_entangled_qutrit_boson_state_is_mixed() {
    // an entangled qutrit-boson state loses purity after the boson trace
    // and the reduced qutrit pair carries no entanglement of its own
    let t = Truncation::new(6).unwrap();
    let nb = t.dim();
    let mut data = Array1::zeros(9 * nb);
    // (|10>|0> + |01>|1>)/sqrt(2): qutrit pair entangled with the boson
    data[nb] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    data[3 * nb + 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let v = StateVector::raw(data);
    let rho = reduce_to_qutrits(&v, StateSpace::Full { n_max: 6 }).unwrap();
    let purity: f64 = rho.dot(&rho).diag().iter().map(|z| z.re).sum();
    assert!((purity - 0.5).abs() < 1e-12);
    let n = negativity(&rho).unwrap();
    assert!(n < 1e-12, "boson decoheres the pair: negativity {n}");
}
