//! Real-symmetric banded eigensolver for the QPT chain Hamiltonians.
//!
//! In the σˣ (Σˣ) eigenbasis the effective qubit-mode and spin-1-mode
//! Hamiltonians of the QPT scenario are real symmetric with bandwidth ≤ 4,
//! because the (a†+a)σᶻ coupling only connects neighbouring Fock levels of
//! adjacent chains. Eigenvalues come from `dsbevx` (values only, O(n²·kd));
//! the ground vector comes from inverse iteration on a banded LU, which
//! avoids the O(n³) accumulation of the reduction transform.

use crate::error::{Error, Result};

extern "C" {
    fn dsbevx_(
        jobz: *const u8,
        range: *const u8,
        uplo: *const u8,
        n: *const i32,
        kd: *const i32,
        ab: *mut f64,
        ldab: *const i32,
        q: *mut f64,
        ldq: *const i32,
        vl: *const f64,
        vu: *const f64,
        il: *const i32,
        iu: *const i32,
        abstol: *const f64,
        m: *mut i32,
        w: *mut f64,
        z: *mut f64,
        ldz: *const i32,
        work: *mut f64,
        iwork: *mut i32,
        ifail: *mut i32,
        info: *mut i32,
    );
    fn dgbtrf_(
        m: *const i32,
        n: *const i32,
        kl: *const i32,
        ku: *const i32,
        ab: *mut f64,
        ldab: *const i32,
        ipiv: *mut i32,
        info: *mut i32,
    );
    fn dgbtrs_(
        trans: *const u8,
        n: *const i32,
        kl: *const i32,
        ku: *const i32,
        nrhs: *const i32,
        ab: *const f64,
        ldab: *const i32,
        ipiv: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
}

/// Symmetric banded matrix, lower storage, column-major:
/// entry (i, j) with j ≤ i ≤ j+kd lives at `ab[(i-j) + j*(kd+1)]`.
#[derive(Debug, Clone)]
pub struct BandedSym {
    pub dim: usize,
    pub kd: usize,
    ab: Vec<f64>,
}

impl BandedSym {
    pub fn new(dim: usize, kd: usize) -> Self {
        Self { dim, kd, ab: vec![0.0; dim * (kd + 1)] }
    }

    /// Add `v` to the (i, j) = (j, i) entry. Panics if |i−j| > kd.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        assert!(hi - lo <= self.kd, "entry ({i},{j}) outside bandwidth {}", self.kd);
        self.ab[(hi - lo) + lo * (self.kd + 1)] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.kd {
            0.0
        } else {
            self.ab[(hi - lo) + lo * (self.kd + 1)]
        }
    }

    /// y = A·x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for j in 0..self.dim {
            y[j] += self.get(j, j) * x[j];
            let top = (j + self.kd).min(self.dim - 1);
            for i in j + 1..=top {
                let v = self.ab[(i - j) + j * (self.kd + 1)];
                if v != 0.0 {
                    y[i] += v * x[j];
                    y[j] += v * x[i];
                }
            }
        }
        y
    }

    /// Infinity-norm estimate used for tolerance scaling.
    pub fn norm_inf(&self) -> f64 {
        let mut rowsum = vec![0.0f64; self.dim];
        for j in 0..self.dim {
            rowsum[j] += self.get(j, j).abs();
            let top = (j + self.kd).min(self.dim - 1);
            for i in j + 1..=top {
                let v = self.ab[(i - j) + j * (self.kd + 1)].abs();
                rowsum[i] += v;
                rowsum[j] += v;
            }
        }
        rowsum.into_iter().fold(0.0, f64::max)
    }

    /// The `count` lowest eigenvalues (ascending) by bisection.
    pub fn lowest_values(&self, count: usize) -> Result<Vec<f64>> {
        assert!(count >= 1 && count <= self.dim);
        crate::spectra::pin_blas_single_thread();
        let n = self.dim as i32;
        let kd = self.kd as i32;
        let ldab = kd + 1;
        let mut ab = self.ab.clone(); // dsbevx destroys the band
        let (jobz, range, uplo) = (b'N', b'I', b'L');
        let (vl, vu) = (0.0f64, 0.0f64);
        let (il, iu) = (1i32, count as i32);
        let abstol = 2.0 * f64::MIN_POSITIVE; // most-accurate setting
        let mut m = 0i32;
        let mut w = vec![0.0f64; self.dim];
        let mut z = [0.0f64; 1];
        let mut q = [0.0f64; 1];
        let one = 1i32;
        let mut work = vec![0.0f64; 7 * self.dim];
        let mut iwork = vec![0i32; 5 * self.dim];
        let mut ifail = vec![0i32; self.dim];
        let mut info = 0i32;
        unsafe {
            dsbevx_(
                &jobz, &range, &uplo, &n, &kd, ab.as_mut_ptr(), &ldab,
                q.as_mut_ptr(), &one, &vl, &vu, &il, &iu, &abstol, &mut m,
                w.as_mut_ptr(), z.as_mut_ptr(), &one,
                work.as_mut_ptr(), iwork.as_mut_ptr(), ifail.as_mut_ptr(), &mut info,
            );
        }
        if info != 0 {
            return Err(Error::ConvergenceFailure(format!("dsbevx info = {info}")));
        }
        if m < count as i32 {
            return Err(Error::ConvergenceFailure(format!(
                "dsbevx located {m} of {count} requested eigenvalues"
            )));
        }
        w.truncate(count);
        Ok(w)
    }

    /// Eigenvector for an isolated eigenvalue `e`, by inverse iteration on
    /// the shifted banded LU. Deterministic start vector; returns a unit
    /// vector whose residual is verified against `tol_rel`·‖A‖.
    pub fn eigenvector(&self, e: f64, tol_rel: f64) -> Result<Vec<f64>> {
        crate::spectra::pin_blas_single_thread();
        let scale = self.norm_inf().max(1e-300);
        let mut shift_off = 1e-13 * scale;
        for _attempt in 0..3 {
            match self.try_inverse_iteration(e - shift_off, e, tol_rel * scale) {
                Ok(v) => return Ok(v),
                Err(_) => shift_off *= 64.0,
            }
        }
        Err(Error::ConvergenceFailure(format!(
            "inverse iteration failed at e = {e}"
        )))
    }

    fn try_inverse_iteration(&self, sigma: f64, e: f64, tol_abs: f64) -> Result<Vec<f64>> {
        let n = self.dim as i32;
        let kl = self.kd as i32;
        let ku = self.kd as i32;
        let ldab = 2 * kl + ku + 1;
        // general band layout for dgbtrf: A(i,j) at row kl+ku+i-j (0-based)
        let mut ablu = vec![0.0f64; (ldab as usize) * self.dim];
        for j in 0..self.dim {
            let lo = j.saturating_sub(self.kd);
            let hi = (j + self.kd).min(self.dim - 1);
            for i in lo..=hi {
                let mut v = self.get(i, j);
                if i == j {
                    v -= sigma;
                }
                let row = (kl + ku) as usize + i - j;
                ablu[row + j * ldab as usize] = v;
            }
        }
        let mut ipiv = vec![0i32; self.dim];
        let mut info = 0i32;
        unsafe {
            dgbtrf_(&n, &n, &kl, &ku, ablu.as_mut_ptr(), &ldab, ipiv.as_mut_ptr(), &mut info);
        }
        if info < 0 {
            return Err(Error::ConvergenceFailure(format!("dgbtrf info = {info}")));
        }
        if info > 0 {
            // exactly singular shift; caller nudges sigma and retries
            return Err(Error::ConvergenceFailure("singular shift".into()));
        }

        // fixed pseudo-random start avoids symmetry-orthogonal starts
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut v: Vec<f64> = (0..self.dim)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
            })
            .collect();
        normalize(&mut v);

        let nrhs = 1i32;
        let trans = b'N';
        for _ in 0..4 {
            unsafe {
                dgbtrs_(
                    &trans, &n, &kl, &ku, &nrhs, ablu.as_ptr(), &ldab, ipiv.as_ptr(),
                    v.as_mut_ptr(), &n, &mut info,
                );
            }
            if info != 0 {
                return Err(Error::ConvergenceFailure(format!("dgbtrs info = {info}")));
            }
            normalize(&mut v);
        }

        let av = self.matvec(&v);
        let mut res = 0.0f64;
        for i in 0..self.dim {
            let d = av[i] - e * v[i];
            res += d * d;
        }
        let res = res.sqrt();
        if res > tol_abs {
            return Err(Error::ConvergenceFailure(format!(
                "inverse-iteration residual {res:.3e} > {tol_abs:.3e}"
            )));
        }
        // deterministic sign: largest-|entry| component positive
        let mut best = 0usize;
        let mut mag = -1.0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > mag {
                mag = x.abs();
                best = i;
            }
        }
        if v[best] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}
