//! Benchmark harness: solves the built-in problem over a size sweep and
//! reports average per-iteration wall-clock time split by kernel class.

use serde::{Deserialize, Serialize};

use mdsipm::clock::StdClock;
use mdsipm::ipm::{SolveStatus, Solver, SolverOptions};
use mdsipm::linalg::BackendSelector;
use mdsipm::nlp::synthetic_problem;
use mdsipm::make_linear_algebra;

/// Averaged per-iteration timing of one benchmark solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub k: usize,
    /// Dimension of the compressed factorized matrix, `2k + 3`.
    pub kkt_dim: usize,
    pub iterations: usize,
    pub avg_iter_time: f64,
    #[serde(rename = "avg_t_K1")]
    pub avg_t_k1: f64,
    #[serde(rename = "avg_t_K2")]
    pub avg_t_k2: f64,
    #[serde(rename = "avg_t_K3")]
    pub avg_t_k3: f64,
    #[serde(rename = "avg_t_K4")]
    pub avg_t_k4: f64,
    /// Fraction of per-iteration time spent in the dense factorization
    /// class, `avg_t_K4 / avg_iter_time`, in `[0, 1]`.
    pub k4_fraction: f64,
}

/// Solves `synthetic_problem(k)` for each size with wall-clock timing and
/// averages the kernel-class seconds per iteration. Sizes whose solve does
/// not reach `Optimal` are reported in the error list and the sweep
/// continues.
pub fn bench_sweep(
    sizes: &[usize],
    opts: &SolverOptions,
    backend: BackendSelector,
) -> (Vec<BenchRecord>, Vec<(usize, String)>) {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for &k in sizes {
        let problem = synthetic_problem(k);
        let clock = StdClock::new();
        let kernels = match make_linear_algebra(backend) {
            Ok(k) => k,
            Err(e) => {
                errors.push((k, e.to_string()));
                continue;
            }
        };
        let result = Solver::new(&problem, opts.clone())
            .with_kernels(kernels)
            .with_clock(&clock)
            .run();
        match result {
            Ok(res) if res.status == SolveStatus::Optimal && !res.log.is_empty() => {
                let n = res.log.len() as f64;
                let sum = |f: fn(&mdsipm::ipm::IterationLog) -> f64| -> f64 {
                    res.log.iter().map(f).sum::<f64>()
                };
                let total = sum(|l| l.t_total);
                let t4 = sum(|l| l.t_k4);
                records.push(BenchRecord {
                    k,
                    kkt_dim: res.kkt_dim,
                    iterations: res.iterations,
                    avg_iter_time: total / n,
                    avg_t_k1: sum(|l| l.t_k1) / n,
                    avg_t_k2: sum(|l| l.t_k2) / n,
                    avg_t_k3: sum(|l| l.t_k3) / n,
                    avg_t_k4: t4 / n,
                    k4_fraction: if total > 0.0 { t4 / total } else { 0.0 },
                });
            }
            Ok(res) => errors.push((k, format!("solver finished with status {:?}", res.status))),
            Err(e) => errors.push((k, e.to_string())),
        }
    }
    (records, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_produces_one_record_per_size() {
        let (records, errors) = bench_sweep(
            &[10],
            &SolverOptions::default(),
            BackendSelector::default(),
        );
        assert!(errors.is_empty(), "{errors:?}");
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.k, 10);
        assert_eq!(r.kkt_dim, 23);
        assert!(r.iterations >= 1);
        assert!((0.0..=1.0).contains(&r.k4_fraction));
    }
}
