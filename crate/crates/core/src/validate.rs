//! The acceptance suite: eleven numbered checks covering symmetry
//! conservation, block equivalence, closed-form eigenpairs, phase
//! observables, both headline scans, critical-point convergence, the
//! normal-phase gap law and byte determinism.
//!
//! Every check returns a [`CriterionReport`] with one measured-vs-expected
//! line per sub-assertion, so both the CLI `validate` subcommand and the
//! `acceptance` integration test print the same table. The two expensive
//! scans are computed once and shared.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{self, GroundFamily};
use crate::error::Result;
use crate::model::{self, ModelParams};
use crate::observables::{self, StateSpace};
use crate::ops::Truncation;
use crate::scan::{
    self, estimate_critical_point, GridAxis, HostBlock, PhaseScan, QptScan, TruncationPolicy,
};
use crate::spectra;
use crate::symmetry::{self, SectorLabel};

#[derive(Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub wall_time_s: f64,
}

impl CriterionReport {
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<28} ({:7.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.wall_time_s
        )
    }
}

struct Check {
    id: usize,
    name: &'static str,
    passed: bool,
    details: Vec<String>,
    start: Instant,
}

impl Check {
    fn new(id: usize, name: &'static str) -> Self {
        Self { id, name, passed: true, details: Vec::new(), start: Instant::now() }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    fn assert(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        if ok {
            self.details.push(format!("  ok   {line}"));
        } else {
            self.passed = false;
            self.details.push(format!("  FAIL {line}"));
        }
    }

    fn runtime_budget(mut self, budget_s: f64) -> CriterionReport {
        let elapsed = self.start.elapsed().as_secs_f64();
        let ok = elapsed <= budget_s;
        if !ok {
            self.passed = false;
        }
        self.details.push(format!(
            "  {}  runtime {elapsed:.1} s (budget {budget_s:.0} s)",
            if ok { "ok " } else { "FAIL" }
        ));
        self.finish_at(elapsed)
    }

    fn finish(self) -> CriterionReport {
        let elapsed = self.start.elapsed().as_secs_f64();
        self.finish_at(elapsed)
    }

    fn finish_at(self, elapsed: f64) -> CriterionReport {
        CriterionReport {
            id: self.id,
            name: self.name,
            passed: self.passed,
            details: self.details,
            wall_time_s: elapsed,
        }
    }

    fn error(mut self, e: crate::error::Error) -> CriterionReport {
        self.passed = false;
        self.details.push(format!("  FAIL aborted: {e}"));
        self.finish()
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams::new(
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(0.5..=2.0),
        rng.random_range(-2.0..=2.0),
        rng.random_range(-2.0..=2.0),
    )
    .expect("ranges are valid")
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool")
}

// ---------------------------------------------------------------------
// 1. symmetry conservation
// ---------------------------------------------------------------------

pub fn criterion_1(workers: usize) -> CriterionReport {
    let mut c = Check::new(1, "symmetry-conservation");
    let t = match Truncation::new(16) {
        Ok(t) => t,
        Err(e) => return c.error(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x51d1);
    let draws: Vec<ModelParams> = (0..50).map(|_| random_params(&mut rng)).collect();

    let k = symmetry::k_operator(t);
    let sz = symmetry::sigma_tot_z(t);

    // asymmetric variants: exchange couplings drawn uniformly with a
    // separation of at least 0.5 (the scale at which the normalized
    // commutator sits clear of the 1e-3 threshold for every draw)
    let asym_draws: Vec<ModelParams> = draws
        .iter()
        .map(|p| {
            let mut a = *p;
            loop {
                let gx: f64 = rng.random_range(-2.0..=2.0);
                let gy: f64 = rng.random_range(-2.0..=2.0);
                if (gx - gy).abs() >= 0.5 {
                    a.gamma_x = gx;
                    a.gamma_y = gy;
                    break a;
                }
            }
        })
        .collect();

    let results: Vec<Result<(f64, f64, f64)>> = pool(workers).install(|| {
        draws
            .par_iter()
            .zip(asym_draws.par_iter())
            .map(|(p, asym)| {
                let h = model::build_full(p, t)?;
                let ck = symmetry::commutator_norm(&h, &k)?;

                let mut sym = *p;
                sym.gamma_y = sym.gamma_x;
                let hs = model::build_full(&sym, t)?;
                let cs = symmetry::commutator_norm(&hs, &sz)?;

                let ha = model::build_full(asym, t)?;
                let ca = symmetry::commutator_norm(&ha, &sz)?;
                Ok((ck, cs, ca))
            })
            .collect()
    });

    let mut worst_k = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut worst_asym = f64::INFINITY;
    for r in results {
        match r {
            Ok((ck, cs, ca)) => {
                worst_k = worst_k.max(ck);
                worst_sym = worst_sym.max(cs);
                worst_asym = worst_asym.min(ca);
            }
            Err(e) => return c.error(e),
        }
    }
    c.assert(
        worst_k <= 1e-12,
        format!("K conserved for 50 random draws: max commutator norm {worst_k:.2e} <= 1e-12"),
    );
    c.assert(
        worst_sym <= 1e-12,
        format!("total Sz conserved when gamma_x = gamma_y: max norm {worst_sym:.2e} <= 1e-12"),
    );
    c.assert(
        worst_asym > 1e-3,
        format!("total Sz broken for asymmetric couplings (|gamma_x - gamma_y| >= 0.5): min norm {worst_asym:.2e} > 1e-3"),
    );
    c.runtime_budget(10.0)
}

// ---------------------------------------------------------------------
// 2. block equivalence
// ---------------------------------------------------------------------

pub fn criterion_2(_workers: usize) -> CriterionReport {
    let mut c = Check::new(2, "block-equivalence");
    let t = Truncation::new(12).expect("n_max ok");
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);

    let mut worst_h0 = 0.0f64;
    let mut worst_h3 = 0.0f64;
    for _ in 0..20 {
        // K=-1 projection vs the two-fictitious-qubit builder; any params
        let p = random_params(&mut rng);
        let run = (|| -> Result<()> {
            let h = model::build_full(&p, t)?;
            let s = symmetry::sector_basis(SectorLabel::K(-1), t)?;
            let block = symmetry::project(&h, &s)?;
            let eff = model::build_h0_effective(&p, t)?;
            let dev = (&block.data - &eff.data)
                .iter()
                .fold(0.0f64, |a, z| a.max(z.norm()));
            worst_h0 = worst_h0.max(dev);

            // m=0 projection vs the spin-1 chain builder; needs the
            // symmetric couplings that make the m sectors exact
            let mut q = p;
            q.gamma_y = q.gamma_x;
            q.gamma_z = 0.0;
            let h = model::build_full(&q, t)?;
            let s0 = symmetry::sector_basis(SectorLabel::M(0), t)?;
            let block0 = symmetry::project(&h, &s0)?;
            let h3 = model::build_h3(&q, t)?;
            let dev3 = (&block0.data - &h3.data)
                .iter()
                .fold(0.0f64, |a, z| a.max(z.norm()));
            worst_h3 = worst_h3.max(dev3);
            Ok(())
        })();
        if let Err(e) = run {
            return c.error(e);
        }
    }
    c.assert(
        worst_h0 <= 1e-12,
        format!("K=-1 block == effective two-qubit form (halved exchange couplings): max |dev| {worst_h0:.2e} <= 1e-12 over 20 draws"),
    );
    c.assert(
        worst_h3 <= 1e-12,
        format!("m=0 block == effective spin-1 form: max |dev| {worst_h3:.2e} <= 1e-12 over 20 draws"),
    );
    c.runtime_budget(10.0)
}

// ---------------------------------------------------------------------
// 3. closed-form eigenpairs
// ---------------------------------------------------------------------

pub fn criterion_3(_workers: usize) -> CriterionReport {
    let mut c = Check::new(3, "closed-form-eigenpairs");
    let run = || -> Result<(f64, f64, usize)> {
        let p = model::preset_level_crossing(1.0, 0.7, 0.6, 1.0)?;
        let t = Truncation::new(40)?;
        let h = model::build_full(&p, t)?;
        let hnorm = h.frobenius();
        let dense = spectra::eigvalsh(&h)?;

        let mut pairs: Vec<(crate::ops::StateVector, f64)> = Vec::new();
        for n in 0..=3usize {
            for sector in [analytic::Sign::Plus, analytic::Sign::Minus] {
                for parity in [analytic::Sign::Plus, analytic::Sign::Minus] {
                    pairs.push(analytic::psi_state(n, sector, parity, &p, t)?);
                }
                pairs.push(analytic::theta_state(n, sector, &p, t)?);
            }
            for b in [
                analytic::PhiBranch::Plus,
                analytic::PhiBranch::Minus,
                analytic::PhiBranch::Zero,
            ] {
                pairs.push(analytic::phi_state(n, b, &p, t)?);
            }
        }
        let mut worst_res = 0.0f64;
        let mut worst_ediff = 0.0f64;
        for (v, e) in &pairs {
            let res = spectra::eigen_residual(&h, v, *e)? / hnorm;
            worst_res = worst_res.max(res);
            // nearest dense eigenvalue
            let nearest = dense
                .iter()
                .fold(f64::INFINITY, |acc, &w| acc.min((w - e).abs()));
            worst_ediff = worst_ediff.max(nearest);
        }
        Ok((worst_res, worst_ediff, pairs.len()))
    };
    match run() {
        Ok((res, ediff, count)) => {
            c.assert(
                res <= 1e-8,
                format!("{count} closed-form states, n <= 3: max relative residual {res:.2e} <= 1e-8"),
            );
            c.assert(
                ediff <= 1e-10,
                format!("closed-form energies match dense spectrum: max |dE| {ediff:.2e} <= 1e-10"),
            );
            c.runtime_budget(30.0)
        }
        Err(e) => c.error(e),
    }
}

// ---------------------------------------------------------------------
// 4. phase-observable constants
// ---------------------------------------------------------------------

pub fn criterion_4(_workers: usize) -> CriterionReport {
    let mut c = Check::new(4, "phase-observable-constants");
    let run = |c: &mut Check| -> Result<()> {
        // analytic states at alpha^2 = 0.36
        let p = model::preset_level_crossing(1.0, 0.7, 0.6, 1.0)?;
        let t = Truncation::new(40)?;
        let alpha = p.lambda1 / p.omega_mode;
        let space = StateSpace::Full { n_max: t.n_max };
        let mut worst_neg = 0.0f64;
        let mut worst_phot = 0.0f64;
        for fam in analytic::GROUND_FAMILIES {
            let (v, _) = fam.state(&p, t)?;
            let rho = observables::reduce_to_qutrits(&v, space)?;
            let neg = observables::negativity(&rho)?;
            worst_neg = worst_neg.max((neg - fam.negativity()).abs());
            let nb = observables::mean_photon(&v, space)?;
            worst_phot = worst_phot.max((nb - fam.mean_photon(alpha)).abs());
        }
        c.assert(
            worst_neg <= 1e-10,
            format!("analytic-state negativities {{0, 1/2, (1+2sqrt2)/4}}: max |dev| {worst_neg:.2e} <= 1e-10"),
        );
        c.assert(
            worst_phot <= 1e-6,
            format!("analytic-state photon numbers {{4a^2, a^2, 0}}: max |dev| {worst_phot:.2e} <= 1e-6"),
        );

        // numerical ground states at interior points of each phase,
        // omega/gamma = 1 so x = alpha^2
        let t = Truncation::new(48)?;
        let interior = [
            (1.0, 0.05, GroundFamily::ThetaMinus),
            (0.7, 0.05, GroundFamily::PsiMinusMinus),
            (0.0, 0.05, GroundFamily::PhiMinus),
            (-0.7, 0.05, GroundFamily::PsiPlusMinus),
            (-1.0, 0.05, GroundFamily::ThetaPlus),
        ];
        let mut worst_nneg = 0.0f64;
        let mut worst_nphot = 0.0f64;
        for (w, x, fam) in interior {
            let lam = (x * 1.0f64).sqrt();
            let p = model::preset_level_crossing(w, 1.0, lam, 1.0)?;
            let h = model::build_full(&p, t)?;
            let s = symmetry::sector_basis(SectorLabel::M(fam.m_total()), t)?;
            let block = symmetry::project(&h, &s)?;
            let es = spectra::eigh(&block)?;
            let space = StateSpace::Sector(&s);
            let rho = observables::reduce_to_qutrits(&es.vectors[0], space)?;
            let neg = observables::negativity(&rho)?;
            worst_nneg = worst_nneg.max((neg - fam.negativity()).abs());
            let nb = observables::mean_photon(&es.vectors[0], space)?;
            worst_nphot = worst_nphot.max((nb - fam.mean_photon(lam)).abs());
        }
        c.assert(
            worst_nneg <= 1e-6,
            format!("numerical interior-point negativities: max |dev| {worst_nneg:.2e} <= 1e-6"),
        );
        c.assert(
            worst_nphot <= 1e-6,
            format!("numerical interior-point photon numbers: max |dev| {worst_nphot:.2e} <= 1e-6"),
        );
        Ok(())
    };
    if let Err(e) = run(&mut c) {
        return c.error(e);
    }
    c.finish()
}

// ---------------------------------------------------------------------
// 5 + 6. phase diagram scan and triple points
// ---------------------------------------------------------------------

/// The desk-scale phase-diagram grid: 61x61 over
/// Omega/gamma in [-1.2, 1.2], x in [0.001, 0.5], omega/gamma = 1.
pub fn default_phase_scan(workers: usize) -> Result<PhaseScan> {
    let w_axis = GridAxis::new("omega_over_gamma", -1.2, 1.2, 61)?;
    let x_axis = GridAxis::new("x", 0.001, 0.5, 61)?;
    scan::scan_phase_diagram(&w_axis, &x_axis, 1.0, Truncation::new(48)?, workers)
}

pub fn criterion_5(scan: &PhaseScan) -> CriterionReport {
    let mut c = Check::new(5, "phase-diagram-labels");
    let wn = scan.grid.axis1.count;
    let xn = scan.grid.axis2.as_ref().expect("2d grid").count;

    // analytic label grid and boundary-adjacency mask
    let labels: Vec<i8> = scan
        .points
        .iter()
        .map(|p| analytic::argmin_family(p.omega_over_gamma, p.x).m_total())
        .collect();
    let adjacent = |i: usize, j: usize| -> bool {
        let me = labels[i * xn + j];
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= wn as i64 || nj >= xn as i64 {
                    continue;
                }
                if labels[ni as usize * xn + nj as usize] != me {
                    return true;
                }
            }
        }
        false
    };

    let mut interior = 0usize;
    let mut matches = 0usize;
    let mut seen = std::collections::BTreeSet::new();
    for (idx, p) in scan.points.iter().enumerate() {
        let Some(m) = p.m_label else {
            c.assert(false, format!("point ({}, {}) failed: {}", p.omega_over_gamma, p.x, p.status));
            continue;
        };
        seen.insert(m);
        let (i, j) = (idx / xn, idx % xn);
        if !adjacent(i, j) {
            interior += 1;
            if m == labels[idx] {
                matches += 1;
            }
        }
    }
    let frac = matches as f64 / interior.max(1) as f64;
    c.assert(
        frac >= 0.99,
        format!(
            "numerical ground-sector labels match the analytic argmin at {matches}/{interior} = {:.4} of interior points (>= 0.99)",
            frac
        ),
    );
    c.assert(
        seen.len() == 5,
        format!("exactly five magnetization labels occur: {seen:?}"),
    );
    let scan_time = scan.provenance.wall_time_s;
    c.assert(
        scan_time <= 600.0,
        format!("scan wall time {scan_time:.1} s <= 600 s"),
    );
    c.finish()
}

pub fn criterion_6(scan: &PhaseScan) -> CriterionReport {
    let mut c = Check::new(6, "triple-points");
    let wn = scan.grid.axis1.count;
    let xn = scan.grid.axis2.as_ref().expect("2d grid").count;
    let w_step = scan.grid.axis1.step();
    let x_step = scan.grid.axis2.as_ref().unwrap().step();

    // tri-critical localization: grid-local minima of the spread between
    // the three lowest sector ground energies (zero exactly where three
    // sectors are degenerate)
    let spread3 = |idx: usize| -> f64 {
        let Some(es) = scan.points[idx].sector_grounds else {
            return f64::INFINITY;
        };
        let mut s = es;
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s[2] - s[0]
    };
    // pairwise level-crossing valleys alias into dotted chains of shallow
    // grid minima that all drain into the pinches, so: keep only deep
    // minima and, of any two within 5 cells, only the deeper one
    const SPREAD_CUT: f64 = 0.06;
    const PRUNE_RADIUS: i64 = 5;
    let mut minima: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..wn {
        for j in 0..xn {
            let here = spread3(i * xn + j);
            if here > SPREAD_CUT {
                continue;
            }
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= wn as i64 || nj >= xn as i64 {
                        continue;
                    }
                    let other = spread3(ni as usize * xn + nj as usize);
                    // strict on one side so plateau ties keep a single point
                    if other < here || (other == here && (di, dj) < (0, 0)) {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                minima.push((i, j, here));
            }
        }
    }
    let pruned: Vec<&(usize, usize, f64)> = minima
        .iter()
        .filter(|&&(i, j, s)| {
            !minima.iter().any(|&(oi, oj, os)| {
                (oi, oj) != (i, j)
                    && (oi as i64 - i as i64).abs() <= PRUNE_RADIUS
                    && (oj as i64 - j as i64).abs() <= PRUNE_RADIUS
                    && (os < s || (os == s && (oi, oj) < (i, j)))
            })
        })
        .collect();
    let centers: Vec<(f64, f64)> = pruned
        .iter()
        .map(|&&(i, j, _)| {
            (
                scan.grid.axis1.min + i as f64 * w_step,
                scan.grid.axis2.as_ref().unwrap().min + j as f64 * x_step,
            )
        })
        .collect();

    c.assert(
        centers.len() == 3,
        format!(
            "numerical scan shows exactly 3 three-fold degeneracy minima (found {}: {:?})",
            centers.len(),
            centers
                .iter()
                .map(|&(w, x)| format!("({w:+.3}, {x:.3})"))
                .collect::<Vec<_>>()
        ),
    );
    for tp in analytic::triple_points() {
        let nearest = centers
            .iter()
            .map(|&(cw, cx)| ((cw - tp.omega_over_gamma).abs(), (cx - tp.x).abs()))
            .min_by(|a, b| (a.0 + a.1).partial_cmp(&(b.0 + b.1)).unwrap());
        match nearest {
            Some((dw, dx)) => c.assert(
                dw <= w_step + 1e-12 && dx <= x_step + 1e-12,
                format!(
                    "closed-form point ({:+.5}, {:.5}) localized within one cell: |dW| {:.4} <= {:.4}, |dx| {:.5} <= {:.5}",
                    tp.omega_over_gamma, tp.x, dw, w_step, dx, x_step
                ),
            ),
            None => c.assert(false, "no degeneracy minima found".to_string()),
        }
    }
    // report (not assert) the deviation from the figure-quoted coordinates
    for (qw, qx) in analytic::QUOTED_TRIPLE_POINTS {
        let (dw, dx) = analytic::triple_points()
            .iter()
            .map(|tp| ((tp.omega_over_gamma - qw).abs(), (tp.x - qx).abs()))
            .min_by(|a, b| (a.0 + a.1).partial_cmp(&(b.0 + b.1)).unwrap())
            .unwrap();
        c.note(format!(
            "  note quoted figure point ({qw:+.2}, {qx:.2}) deviates from the closed-form location by (|dW|, |dx|) = ({dw:.4}, {dx:.4}) — documented discrepancy, not asserted"
        ));
    }
    c.finish()
}

// ---------------------------------------------------------------------
// 7 + 8 + 10. QPT scan criteria
// ---------------------------------------------------------------------

/// The desk-scale QPT sweep: Omega/gamma = 1, omega/gamma = 1e-3,
/// g in [0.1, 2.0] step 0.05, adaptive truncation, bias 1e-8 gamma.
pub fn default_qpt_scan(workers: usize) -> Result<QptScan> {
    let g_axis = GridAxis::new("g", 0.1, 2.0, 39)?;
    scan::scan_qpt(&g_axis, 1e-3, 1.0, TruncationPolicy::default(), 1e-8, workers)
}

/// Coherent-state upper bound on the m=0 block ground energy, in gamma
/// units: max displaced-branch energy −(g² + g⁻²/8), valid for g⁴ > 1/8,
/// else the undisplaced bound −1/√2.
fn hm0_variational_bound(g: f64) -> f64 {
    if g.powi(4) > 0.125 {
        -(g * g + 1.0 / (8.0 * g * g))
    } else {
        -std::f64::consts::FRAC_1_SQRT_2
    }
}

pub fn criterion_7(scan: &QptScan) -> CriterionReport {
    let mut c = Check::new(7, "qpt-energy-curve");
    let omega_over_gamma = scan.grid.fixed["omega_over_gamma"];
    let omega_q_over_gamma = scan.grid.fixed["Omega_over_gamma"];

    // (a) the fictitious-qubit block is claimed to host the global ground
    //     at every g; compare block energies where both are converged
    let mut host_violations: Vec<&crate::scan::QptPoint> = Vec::new();
    for p in &scan.points {
        if p.status == crate::scan::PointStatus::Ok && p.host_block == HostBlock::HM0 {
            host_violations.push(p);
        }
    }
    c.assert(
        host_violations.is_empty(),
        format!(
            "qubit-block ground below the m=0-block ground at every converged g ({} violations)",
            host_violations.len()
        ),
    );
    for p in &host_violations {
        c.note(format!(
            "       g={:.2}: E_qubit-block = {:+.6}, E_m0-block = {:+.6} (coherent-state bound {:+.6}) — the m=0 sector wins beyond g ~ 1.20 at Omega/gamma = 1",
            p.g,
            p.energy,
            p.energy_hm0,
            hm0_variational_bound(p.g)
        ));
    }

    // (b) scale-free rescaled-energy ratio against the closed-form curve
    if scan.points[0].status.is_failed() {
        c.assert(false, "baseline point failed; ratio check impossible".to_string());
        return c.finish();
    }
    let baseline_g = scan.points[0].g;
    let e_base = scan.points[0].energy_rescaled;
    let want_base = analytic::qpt_rescaled_energy(baseline_g, omega_over_gamma, omega_q_over_gamma)
        .map(|d| d.derived);
    let want_base = match want_base {
        Ok(v) => v,
        Err(e) => return c.error(e),
    };
    let mut worst: (f64, f64) = (0.0, 0.0); // (relative error, g)
    let mut checked = 0usize;
    for p in &scan.points {
        if p.status.is_failed() || !(p.g <= 0.8 || p.g >= 1.2) {
            continue;
        }
        let want = match analytic::qpt_rescaled_energy(p.g, omega_over_gamma, omega_q_over_gamma) {
            Ok(d) => d.derived / want_base,
            Err(e) => return c.error(e),
        };
        let got = p.energy_rescaled / e_base;
        let rel = ((got - want) / want).abs();
        if rel > worst.0 {
            worst = (rel, p.g);
        }
        checked += 1;
    }
    c.assert(
        checked >= 20 && worst.0 <= 0.02,
        format!(
            "rescaled-energy ratio E(g)/E({baseline_g}) matches the closed-form curve within 2% for g <= 0.8 and g >= 1.2: worst {:.3}% at g = {:.2} ({checked} points)",
            100.0 * worst.0,
            worst.1
        ),
    );
    let scan_time = scan.provenance.wall_time_s;
    c.assert(
        scan_time <= 900.0,
        format!("scan wall time {scan_time:.1} s <= 900 s"),
    );
    c.finish()
}

pub fn criterion_8(scan: &QptScan) -> CriterionReport {
    let mut c = Check::new(8, "qpt-order-parameters");
    let omega_over_gamma = scan.grid.fixed["omega_over_gamma"];

    let mut worst_np_n = 0.0f64;
    let mut worst_np_neg = 0.0f64;
    let mut worst_sp_n = 0.0f64;
    let mut worst_sp_neg = 0.0f64;
    let mut worst_sp_stag = 0.0f64;
    let mut worst_printed_neg_dev = 0.0f64;
    let mut np_pts = 0usize;
    let mut sp_pts = 0usize;
    for p in &scan.points {
        if p.status.is_failed() {
            continue;
        }
        if p.g <= 0.8 {
            np_pts += 1;
            worst_np_n = worst_np_n.max(p.n_rescaled);
            worst_np_neg = worst_np_neg.max((p.negativity - 0.5).abs() / 0.5);
        } else if (1.2..=1.8).contains(&p.g) {
            sp_pts += 1;
            let o = match analytic::qpt_observables(p.g, model::Phase::Superradiant) {
                Ok(o) => o,
                Err(e) => return c.error(e),
            };
            worst_sp_n = worst_sp_n.max((p.n_rescaled - o.n_rescaled).abs() / o.n_rescaled);
            worst_sp_neg =
                worst_sp_neg.max((p.negativity - o.negativity.derived).abs() / o.negativity.derived);
            worst_printed_neg_dev = worst_printed_neg_dev
                .max((p.negativity - o.negativity.printed).abs() / o.negativity.printed);
            worst_sp_stag =
                worst_sp_stag.max((p.sigma_bz.abs() - o.stag.derived).abs() / o.stag.derived);
        }
    }
    c.assert(
        worst_np_n <= 2.0 * omega_over_gamma,
        format!(
            "normal phase (g <= 0.8, {np_pts} pts): rescaled photon number {worst_np_n:.2e} <= 2*omega/gamma = {:.1e}",
            2.0 * omega_over_gamma
        ),
    );
    c.assert(
        worst_np_neg <= 0.02,
        format!("normal phase: negativity = 1/2 within 2% (worst {:.3}%)", 100.0 * worst_np_neg),
    );
    c.assert(
        worst_sp_n <= 0.05,
        format!(
            "superradiant g in [1.2, 1.8] ({sp_pts} pts): rescaled photon number matches (g^2-g^-2)/4 within 5% (worst {:.3}%)",
            100.0 * worst_sp_n
        ),
    );
    c.assert(
        worst_sp_neg <= 0.05,
        format!(
            "superradiant negativity matches the ground-state-derived 1/(2g^2) within 5% (worst {:.3}%)",
            100.0 * worst_sp_neg
        ),
    );
    c.note(format!(
        "  note deviation from the printed summary form 1/(2g^4): up to {:.1}% — the derived variant is what the numerics reproduce",
        100.0 * worst_printed_neg_dev
    ));
    c.assert(
        worst_sp_stag <= 0.05,
        format!(
            "superradiant qubit polarization |<s_b^z>| matches sqrt(1-g^-4) within 5% (worst {:.3}%)",
            100.0 * worst_sp_stag
        ),
    );
    c.finish()
}

pub fn criterion_10(scan: &QptScan) -> CriterionReport {
    let mut c = Check::new(10, "normal-phase-gap");
    let omega_over_gamma = scan.grid.fixed["omega_over_gamma"];
    let mut worst = (0.0f64, 0.0f64);
    let mut count = 0usize;
    for p in &scan.points {
        if p.status.is_failed() || !(0.1..=0.8).contains(&p.g) {
            continue;
        }
        let want = omega_over_gamma * (1.0 - p.g * p.g).sqrt();
        let rel = (p.gap - want).abs() / want;
        if rel > worst.0 {
            worst = (rel, p.g);
        }
        count += 1;
    }
    c.assert(
        worst.0 <= 0.05,
        format!(
            "first-excitation gap matches omega*sqrt(1-g^2) within 5% for g in [0.1, 0.8] ({count} pts; worst {:.3}% at g = {})",
            100.0 * worst.0,
            worst.1
        ),
    );
    c.finish()
}

// ---------------------------------------------------------------------
// 9. critical-point convergence
// ---------------------------------------------------------------------

pub const CRITICAL_SCAN_RATIOS: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

pub fn criterion_9(workers: usize) -> CriterionReport {
    let mut c = Check::new(9, "critical-point-convergence");
    let run = |c: &mut Check| -> Result<()> {
        let g_axis = GridAxis::new("g", 0.5, 1.5, 51)?;
        let mut estimates = Vec::new();
        for ratio in CRITICAL_SCAN_RATIOS {
            let s = scan::scan_qpt(
                &g_axis,
                ratio,
                1.0,
                TruncationPolicy::default(),
                1e-8,
                workers,
            )?;
            let est = estimate_critical_point(&s.n_rescaled_curve())?;
            c.note(format!(
                "  note omega/gamma = {ratio:.0e}: g* = {:.3} (|g*-1| = {:.3})",
                est.g_star,
                (est.g_star - 1.0).abs()
            ));
            estimates.push((ratio, est.g_star));
        }
        let devs: Vec<f64> = estimates.iter().map(|&(_, g)| (g - 1.0).abs()).collect();
        let monotone = devs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        c.assert(
            monotone,
            format!("|g* - 1| non-increasing toward smaller omega/gamma: {devs:?}"),
        );
        let last = *devs.last().unwrap();
        c.assert(
            last <= 0.05,
            format!("|g* - 1| = {last:.3} <= 0.05 at omega/gamma = 1e-3"),
        );
        Ok(())
    };
    if let Err(e) = run(&mut c) {
        return c.error(e);
    }
    c.finish()
}

// ---------------------------------------------------------------------
// 11. determinism
// ---------------------------------------------------------------------

pub fn criterion_11() -> CriterionReport {
    let mut c = Check::new(11, "determinism");
    let run = |c: &mut Check| -> Result<()> {
        let w_axis = GridAxis::new("omega_over_gamma", -1.2, 1.2, 61)?;
        let x_axis = GridAxis::new("x", 0.001, 0.5, 61)?;
        let t = Truncation::new(48)?;
        let p1 = scan::scan_phase_diagram(&w_axis, &x_axis, 1.0, t, 1)?.to_csv();
        let p8 = scan::scan_phase_diagram(&w_axis, &x_axis, 1.0, t, 8)?.to_csv();
        c.assert(
            p1 == p8,
            format!("phase-diagram CSV byte-identical with 1 and 8 workers ({} bytes)", p1.len()),
        );
        let g_axis = GridAxis::new("g", 0.1, 2.0, 39)?;
        let q1 = scan::scan_qpt(&g_axis, 1e-3, 1.0, TruncationPolicy::default(), 1e-8, 1)?.to_csv();
        let q8 = scan::scan_qpt(&g_axis, 1e-3, 1.0, TruncationPolicy::default(), 1e-8, 8)?.to_csv();
        c.assert(
            q1 == q8,
            format!("QPT CSV byte-identical with 1 and 8 workers ({} bytes)", q1.len()),
        );
        Ok(())
    };
    if let Err(e) = run(&mut c) {
        return c.error(e);
    }
    c.finish()
}

// ---------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------

/// Run all eleven criteria, sharing the two expensive scans.
pub fn run_all(workers: usize) -> Result<Vec<CriterionReport>> {
    let mut reports = vec![
        criterion_1(workers),
        criterion_2(workers),
        criterion_3(workers),
        criterion_4(workers),
    ];

    let phase = default_phase_scan(workers)?;
    reports.push(criterion_5(&phase));
    reports.push(criterion_6(&phase));

    let qpt = default_qpt_scan(workers)?;
    reports.push(criterion_7(&qpt));
    reports.push(criterion_8(&qpt));
    reports.push(criterion_9(workers));
    reports.push(criterion_10(&qpt));
    reports.push(criterion_11());
    reports.sort_by_key(|r| r.id);
    Ok(reports)
}
