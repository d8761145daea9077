//! Verification mode: oracle-backed suites covering the compression
//! equivalence, inertia additivity, factorization accuracy, derivative
//! consistency, the fused assembly kernel, and the solve-loop discipline
//! (strict interiority, filter acceptance replay, inertia of accepted
//! factorizations).

use mdsipm::ipm::{
    compress, recover_sparse_step, IterationObserver, IteratePoint, SolveStatus, Solver,
    SolverOptions, StepRecord,
};
use mdsipm::ldl::bk_factorize;
use mdsipm::nlp::{random_problem, synthetic_problem, Dims, MdsProblem};
use mdsipm::rng::SplitMix64;
use mdsipm::{is_finite_bound, DenseMatrix, Kernels};
use mdsipm_oracles::dense::{lu_solve, random_symmetric};
use mdsipm_oracles::eig::{eigenvalues_bounded_away, sign_counts};
use mdsipm_oracles::gen::random_kkt4;
use mdsipm_oracles::{check_derivatives, check_kkt};

/// Pass/fail tally of one verification suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub messages: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            messages: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.messages.len() < 20 {
                self.messages.push(msg());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Knobs of the verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Number of random instances per suite. Zero yields empty reports.
    pub seeds: usize,
    pub base_seed: u64,
    /// Upper bounds on random KKT instance dimensions.
    pub caps: Dims,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seeds: 100,
            base_seed: 1,
            caps: Dims {
                n_d: 20,
                n_s: 20,
                m_e: 3,
                m_i: 10,
            },
        }
    }
}

fn inf_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (&x, &y)| m.max((x - y).abs()))
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
}

/// Compressed-path directions versus a dense full-system elimination, at
/// relative tolerance `1e-8`.
pub fn compression_suite(kernels: &dyn Kernels, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("compression-equivalence");
    let mut rng = SplitMix64::new(cfg.base_seed ^ 0xce);
    let mut done = 0;
    let mut draws = 0;
    while done < cfg.seeds && draws < cfg.seeds * 20 {
        draws += 1;
        let inst = random_kkt4(&mut rng, cfg.caps);
        let k4 = inst.system();
        let full = k4.to_dense();
        let rhs = k4.rhs_full();
        let Some(oracle) = lu_solve(&full, &rhs) else {
            continue;
        };
        done += 1;

        let outcome = (|| -> Result<f64, String> {
            let compressed = compress(&k4, kernels).map_err(|e| e.to_string())?;
            let factors = bk_factorize(&compressed.m).map_err(|e| e.to_string())?;
            let u = factors.solve(&compressed.rhs).map_err(|e| e.to_string())?;
            let (nd, me) = (compressed.n_d, compressed.m_e);
            let dxs = recover_sparse_step(&k4, &u[nd..nd + me], &u[nd + me..], kernels)
                .map_err(|e| e.to_string())?;
            let mut direction = dxs;
            direction.extend_from_slice(&u);
            Ok(inf_diff(&direction, &oracle) / inf_norm(&oracle).max(1e-30))
        })();
        match outcome {
            Ok(rel) => report.check(rel <= 1e-8, || {
                format!("instance {done}: relative direction error {rel:.3e} (dims {:?})", inst.dims)
            }),
            Err(e) => report.check(false, || format!("instance {done}: {e}")),
        }
    }
    report
}

/// Inertia of the full 4x4-block matrix versus `(n_s, 0, 0)` plus the
/// inertia of the compressed matrix, against the eigenvalue oracle.
pub fn haynsworth_suite(kernels: &dyn Kernels, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("haynsworth-additivity");
    let mut rng = SplitMix64::new(cfg.base_seed ^ 0x4a);
    let mut done = 0;
    let mut draws = 0;
    while done < cfg.seeds && draws < cfg.seeds * 50 {
        draws += 1;
        let inst = random_kkt4(&mut rng, cfg.caps);
        let k4 = inst.system();
        let full = k4.to_dense();
        let margin = 1e-8 * full.inf_norm().max(1.0);
        if !eigenvalues_bounded_away(&full, margin) {
            continue;
        }
        done += 1;
        let counts = sign_counts(&full, margin);
        let outcome = compress(&k4, kernels)
            .map_err(|e| e.to_string())
            .and_then(|c| bk_factorize(&c.m).map_err(|e| e.to_string()));
        match outcome {
            Ok(f) => {
                let mi = f.inertia();
                let want = (inst.dims.n_s + mi.pos, mi.zero, mi.neg);
                report.check((counts.pos, counts.zero, counts.neg) == want, || {
                    format!(
                        "instance {done}: oracle ({},{},{}) vs sum rule ({},{},{})",
                        counts.pos, counts.zero, counts.neg, want.0, want.1, want.2
                    )
                });
            }
            Err(e) => report.check(false, || format!("instance {done}: {e}")),
        }
    }
    report
}

/// Factorization reconstruction residuals and inertia against the
/// eigenvalue oracle on random symmetric matrices.
pub fn ldl_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("ldl-reconstruction");
    let mut rng = SplitMix64::new(cfg.base_seed ^ 0x1d);
    for trial in 0..cfg.seeds {
        let n = 1 + rng.below(60);
        let a = random_symmetric(&mut rng, n);
        let f = match bk_factorize(&a) {
            Ok(f) => f,
            Err(e) => {
                report.check(false, || format!("trial {trial}: {e}"));
                continue;
            }
        };
        let r = f.reconstruct();
        let mut err = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                err = err.max((r.get(i, j) - a.get(i, j)).abs());
            }
        }
        let bound = 100.0 * n as f64 * f64::EPSILON * a.inf_norm();
        report.check(err <= bound, || {
            format!("trial {trial}: reconstruction error {err:.3e} > {bound:.3e} at n={n}")
        });

        if eigenvalues_bounded_away(&a, 1e-6 * a.inf_norm().max(1.0)) {
            let counts = sign_counts(&a, f.zero_tol());
            let got = f.inertia();
            report.check(
                (got.pos, got.zero, got.neg) == (counts.pos, counts.zero, counts.neg),
                || format!("trial {trial}: inertia mismatch at n={n}"),
            );
        }
    }
    report
}

/// Finite-difference derivative checks over the built-in problems.
pub fn finite_difference_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("finite-difference");
    let points = 20;
    let tol = 1e-5;
    let mut problems: Vec<(String, Box<dyn MdsProblem>)> = vec![
        ("synthetic:2".into(), Box::new(synthetic_problem(2))),
        ("synthetic:9".into(), Box::new(synthetic_problem(9))),
    ];
    let mut rng = SplitMix64::new(cfg.base_seed ^ 0xfd);
    let n_random = (cfg.seeds / 20).clamp(usize::from(cfg.seeds > 0), 8);
    for i in 0..n_random {
        let seed = cfg.base_seed.wrapping_add(i as u64);
        let n_d = 1 + rng.below(cfg.caps.n_d);
        let n_s = 1 + rng.below(cfg.caps.n_s);
        let m_e = rng.below(cfg.caps.m_e + 1);
        let m_i = 1 + rng.below(cfg.caps.m_i);
        problems.push((
            format!("random:{seed}:{n_d}:{n_s}:{m_e}:{m_i}"),
            Box::new(random_problem(seed, n_d, n_s, m_e, m_i)),
        ));
    }
    if cfg.seeds == 0 {
        problems.clear();
    }
    for (name, p) in &problems {
        let rep = check_derivatives(p.as_ref(), cfg.base_seed, points, tol);
        report.check(rep.passed(), || {
            format!(
                "{name}: {} of {} checks failed, first: {}",
                rep.failures.len(),
                rep.checks,
                rep.failures.first().cloned().unwrap_or_default()
            )
        });
    }
    report
}

/// Fused `M += A diag(d) Bᵀ` versus an explicit dense materialization at
/// relative tolerance `1e-13`.
pub fn fused_kernel_suite(kernels: &dyn Kernels, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("fused-kernel");
    let mut rng = SplitMix64::new(cfg.base_seed ^ 0xf5);
    for trial in 0..cfg.seeds {
        let p = 1 + rng.below(50);
        let q = 1 + rng.below(50);
        let r = 1 + rng.below(50);
        let triplet = |rows: usize, rng: &mut SplitMix64| {
            let mut t = mdsipm::TripletMatrix::new(rows, q);
            let density = (4.0 / q as f64).min(1.0);
            for i in 0..rows {
                for j in 0..q {
                    if rng.chance(density) {
                        t.push(i, j, rng.uniform(-2.0, 2.0));
                        if rng.chance(0.2) {
                            t.push(i, j, rng.uniform(-2.0, 2.0)); // duplicate
                        }
                    }
                }
            }
            t
        };
        let a = triplet(p, &mut rng);
        let b = triplet(r, &mut rng);
        let d: Vec<f64> = (0..q).map(|_| rng.uniform(-3.0, 3.0)).collect();
        let sign = if rng.chance(0.5) { 1.0 } else { -1.0 };

        let mut m = DenseMatrix::zeros(p, r);
        if let Err(e) = kernels.fused_add_sdst(&mut m, &a, &d, &b, sign) {
            report.check(false, || format!("trial {trial}: {e}"));
            continue;
        }

        let ad = a.to_dense().unwrap();
        let bd = b.to_dense().unwrap();
        let mut err = 0.0_f64;
        let mut scale = 1.0_f64;
        for i in 0..p {
            for j in 0..r {
                let mut s = 0.0;
                for t in 0..q {
                    s += ad.get(i, t) * d[t] * bd.get(j, t);
                }
                let want = sign * s;
                scale = scale.max(want.abs());
                err = err.max((m.get(i, j) - want).abs());
            }
        }
        report.check(err <= 1e-13 * scale, || {
            format!("trial {trial}: fused kernel error {err:.3e} at scale {scale:.3e}")
        });
    }
    report
}

#[derive(Default)]
struct DisciplineRecorder {
    steps: Vec<StepRecord>,
    points: Vec<IteratePoint>,
}

impl IterationObserver for DisciplineRecorder {
    fn on_step(&mut self, rec: &StepRecord) {
        self.steps.push(rec.clone());
    }

    fn on_iterate(&mut self, _iter: usize, point: &IteratePoint) {
        self.points.push(point.clone());
    }
}

fn strict_interior(p: &dyn MdsProblem, pt: &IteratePoint) -> bool {
    let b = p.bounds();
    let ok = |x: &[f64], lo: &[f64], up: &[f64]| {
        x.iter().enumerate().all(|(i, &xi)| {
            (!is_finite_bound(lo[i]) || xi > lo[i]) && (!is_finite_bound(up[i]) || xi < up[i])
        })
    };
    ok(&pt.xd, &b.xd_lo, &b.xd_up) && ok(&pt.xs, &b.xs_lo, &b.xs_up) && ok(&pt.s, &b.h_lo, &b.h_up)
}

fn acceptance_replays(rec: &StepRecord, opts: &SolverOptions) -> Result<(), String> {
    for &(tj, pj) in &rec.filter_before {
        if !(rec.theta_new < (1.0 - opts.gamma_theta) * tj
            || rec.phi_new < pj - opts.gamma_phi * tj)
        {
            return Err(format!(
                "iter {}: accepted point dominated by filter entry ({tj:.3e}, {pj:.3e})",
                rec.iter
            ));
        }
    }
    let switching = rec.dphi < 0.0
        && rec.alpha_primal * (-rec.dphi).powf(opts.s_phi) > rec.theta_old.powf(opts.s_theta);
    if switching != rec.armijo {
        return Err(format!(
            "iter {}: acceptance branch does not replay (switching {switching})",
            rec.iter
        ));
    }
    if switching {
        if rec.phi_new > rec.phi_old + opts.eta_phi * rec.alpha_primal * rec.dphi {
            return Err(format!("iter {}: Armijo inequality does not replay", rec.iter));
        }
    } else {
        let ok = rec.theta_new < (1.0 - opts.gamma_theta) * rec.theta_old
            || rec.phi_new < rec.phi_old - opts.gamma_phi * rec.theta_old;
        if !ok {
            return Err(format!(
                "iter {}: sufficient-decrease inequality does not replay",
                rec.iter
            ));
        }
        if !rec.filter_augmented {
            return Err(format!(
                "iter {}: filter not augmented on a non-Armijo acceptance",
                rec.iter
            ));
        }
    }
    Ok(())
}

/// Runs full solves and audits the loop discipline: every exposed iterate
/// strictly interior, every acceptance decision replayable from the step
/// record, every accepted factorization carrying the target inertia, and
/// the independent KKT check passing at the solution.
pub fn solve_discipline_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("solve-discipline");
    let opts = SolverOptions::default();
    let n_problems = (cfg.seeds / 10).clamp(usize::from(cfg.seeds > 0), 10);
    let mut problems: Vec<(String, Box<dyn MdsProblem>)> = Vec::new();
    if cfg.seeds > 0 {
        problems.push(("synthetic:6".into(), Box::new(synthetic_problem(6))));
        problems.push(("synthetic:25".into(), Box::new(synthetic_problem(25))));
    }
    for i in 0..n_problems {
        let seed = cfg.base_seed.wrapping_add(1000 + i as u64);
        problems.push((
            format!("random:{seed}:8:9:2:5"),
            Box::new(random_problem(seed, 8, 9, 2, 5)),
        ));
    }
    for (name, p) in &problems {
        let mut rec = DisciplineRecorder::default();
        let res = match Solver::new(p.as_ref(), opts.clone())
            .with_observer(&mut rec)
            .run()
        {
            Ok(r) => r,
            Err(e) => {
                report.check(false, || format!("{name}: solver error {e}"));
                continue;
            }
        };
        report.check(res.status == SolveStatus::Optimal, || {
            format!("{name}: status {:?}", res.status)
        });
        report.check(
            rec.points.iter().all(|pt| strict_interior(p.as_ref(), pt)),
            || format!("{name}: an exposed iterate left the strict interior"),
        );
        let replay: Result<(), String> = rec
            .steps
            .iter()
            .try_for_each(|s| acceptance_replays(s, &opts));
        report.check(replay.is_ok(), || {
            format!("{name}: {}", replay.clone().unwrap_err())
        });
        let d = p.dims();
        report.check(
            res.log
                .iter()
                .all(|l| (l.inertia.pos, l.inertia.zero, l.inertia.neg) == (d.n_d, 0, d.m())),
            || format!("{name}: an accepted factorization missed the target inertia"),
        );
        let kkt = check_kkt(p.as_ref(), &res.point);
        report.check(
            kkt.stationarity <= 1e-4 && kkt.primal <= 1e-5 && kkt.dual_sign >= 0.0,
            || format!("{name}: independent KKT residuals {kkt:?}"),
        );
    }
    report
}

/// Runs every suite with the given kernel implementation.
pub fn run_all_suites(kernels: &dyn Kernels, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        compression_suite(kernels, cfg),
        haynsworth_suite(kernels, cfg),
        ldl_suite(cfg),
        finite_difference_suite(cfg),
        fused_kernel_suite(kernels, cfg),
        solve_discipline_suite(cfg),
    ]
}
