//! Seeded battery covering every stage of the synthesizer.
//!
//! Each suite draws its own per-trial seeds from the master seed, so a
//! report depends only on `(trials, seed, tol)` and never on thread count.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, RngCore};

use crate::batch::{map, Execution};
use crate::circuit::{counts, simulate};
use crate::library::{named_gate, THREE_QUBIT_GATES};
use crate::numkit::{csd, distance_up_to_phase, haar_unitary, rng_from_seed};
use crate::synth2q::{kak, synth_u4};
use crate::synth3q::{
    m_circuit, m_core, n_circuit, n_core, synthesize_with, template, template_oracle, trimmed_m,
    trimmed_n, SynthOptions, TemplateName, MAX_CNOT, MAX_ONE_QUBIT,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    pub trials: usize,
    pub seed: u64,
    /// End-to-end distance tolerance.
    pub tol: f64,
    pub execution: Execution,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 7,
            tol: 1e-8,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest residual seen, in the suite's own error measure.
    pub max_error: f64,
    /// Error budget each case was held to.
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
    /// Over all three-qubit syntheses (Haar and named gates).
    pub max_distance: f64,
    pub max_cnot: usize,
    pub max_one_qubit: usize,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{:<10} {} cases={} failures={} max_error={:.3e} tol={:.0e}",
                s.name,
                if s.passed() { "PASS" } else { "FAIL" },
                s.cases,
                s.failures,
                s.max_error,
                s.tolerance,
            )?;
        }
        writeln!(f, "max distance  {:.3e}", self.max_distance)?;
        writeln!(f, "max cnot      {} (bound {MAX_CNOT})", self.max_cnot)?;
        writeln!(
            f,
            "max one-qubit {} (bound {MAX_ONE_QUBIT})",
            self.max_one_qubit
        )?;
        write!(
            f,
            "overall       {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

// One case: its error and whether it passed every check.
type Case = (f64, bool);

fn summarize(name: &'static str, tolerance: f64, cases: &[Case]) -> SuiteResult {
    SuiteResult {
        name,
        cases: cases.len(),
        failures: cases.iter().filter(|c| !c.1).count(),
        max_error: cases.iter().map(|c| c.0).fold(0.0, f64::max),
        tolerance,
    }
}

fn seeds(master: u64, salt: u64, n: usize) -> Vec<u64> {
    let mut rng = rng_from_seed(master ^ salt);
    (0..n).map(|_| rng.next_u64()).collect()
}

fn params(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| rng.random_range(-PI..PI)).collect()
}

fn template_case(seed: u64) -> Case {
    let p = params(seed, 4);
    let mut worst = distance_up_to_phase(
        &simulate(&n_circuit(p[0], p[1], p[2])),
        &n_core(p[0], p[1], p[2]),
    )
    .expect("same size");
    let dm = distance_up_to_phase(
        &simulate(&m_circuit(p[0], p[1], p[2], p[3])),
        &m_core(p[0], p[1], p[2], p[3]),
    )
    .expect("same size");
    worst = worst.max(dm);
    for name in TemplateName::ALL {
        let q = &p[..name.arity()];
        let c = template(name, q).expect("arity matches");
        let d = distance_up_to_phase(
            &simulate(&c),
            &template_oracle(name, q).expect("arity matches"),
        )
        .expect("same size");
        worst = worst.max(d);
    }
    (worst, worst <= 1e-10)
}

fn trimming_case(seed: u64) -> Case {
    let p = params(seed, 4);
    let tn = trimmed_n(p[0], p[1], p[2]);
    let tm = trimmed_m(p[0], p[1], p[2], p[3]);
    let en = tn
        .unitary()
        .sub(&simulate(&n_circuit(p[0], p[1], p[2])))
        .frobenius_norm();
    let em = tm
        .unitary()
        .sub(&simulate(&m_circuit(p[0], p[1], p[2], p[3])))
        .frobenius_norm();
    let (cn, cm) = (counts(&tn.circuit), counts(&tm.circuit));
    let shape = (cn.one_qubit, cn.cnot) == (5, 9) && (cm.one_qubit, cm.cnot) == (6, 10);
    let e = en.max(em);
    (e, shape && e <= 1e-12)
}

fn csd_case(seed: u64) -> Case {
    let u = haar_unitary(8, seed);
    match csd(&u, 4) {
        Ok(r) => {
            let e = r.reconstruct().sub(&u).frobenius_norm();
            (e, e <= 1e-10)
        }
        Err(_) => (f64::INFINITY, false),
    }
}

fn kak_case(seed: u64) -> Case {
    let u = haar_unitary(4, seed);
    let (Ok(f), Ok(c)) = (kak(&u), synth_u4(&u, (1, 2), 2)) else {
        return (f64::INFINITY, false);
    };
    let e_kak = f.reconstruct().sub(&u).frobenius_norm();
    let e_circ = distance_up_to_phase(&simulate(&c), &u).expect("same size");
    let tol = 1e-12;
    let chamber =
        std::f64::consts::FRAC_PI_4 + tol >= f.a && f.a + tol >= f.b && f.b + tol >= f.c.abs();
    let n = counts(&c);
    let e = e_kak.max(e_circ);
    (e, e <= 1e-9 && chamber && n.cnot == 3 && n.one_qubit <= 15)
}

// Distance, CNOTs, one-qubit gates; `None` if synthesis errored.
type Synth = Option<(f64, usize, usize)>;

fn synth_case(u: &crate::numkit::ComplexMatrix, tol: f64) -> Synth {
    let s = synthesize_with(
        u,
        &SynthOptions {
            tol,
            ..Default::default()
        },
    )
    .ok()?;
    let n = counts(&s.circuit);
    Some((s.distance, n.cnot, n.one_qubit))
}

fn synth_summary(name: &'static str, tol: f64, runs: &[Synth]) -> SuiteResult {
    let cases: Vec<Case> = runs
        .iter()
        .map(|r| match *r {
            Some((d, c, o)) => (d, d <= tol && c <= MAX_CNOT && o <= MAX_ONE_QUBIT),
            None => (f64::INFINITY, false),
        })
        .collect();
    summarize(name, tol, &cases)
}

/// Runs every suite with `trials` cases each (named gates run once).
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let n = cfg.trials.max(1);
    let exec = cfg.execution;
    let mut suites = Vec::new();

    let s = seeds(cfg.seed, 0x01, n);
    suites.push(summarize(
        "templates",
        1e-10,
        &map(&s, exec, |&k| template_case(k)),
    ));
    let s = seeds(cfg.seed, 0x02, n);
    suites.push(summarize(
        "trimming",
        1e-12,
        &map(&s, exec, |&k| trimming_case(k)),
    ));
    let s = seeds(cfg.seed, 0x03, n);
    suites.push(summarize("csd", 1e-10, &map(&s, exec, |&k| csd_case(k))));
    let s = seeds(cfg.seed, 0x04, n);
    suites.push(summarize("kak", 1e-9, &map(&s, exec, |&k| kak_case(k))));

    let s = seeds(cfg.seed, 0x05, n);
    let haar: Vec<Synth> = map(&s, exec, |&k| synth_case(&haar_unitary(8, k), cfg.tol));
    suites.push(synth_summary("synthesis", cfg.tol, &haar));
    let named: Vec<Synth> = map(&THREE_QUBIT_GATES, exec, |name| {
        synth_case(&named_gate(name, 3).expect("builtin"), cfg.tol)
    });
    suites.push(synth_summary("named", cfg.tol, &named));

    let all: Vec<(f64, usize, usize)> = haar.iter().chain(&named).flatten().copied().collect();
    SelftestReport {
        suites,
        max_distance: all.iter().map(|r| r.0).fold(0.0, f64::max),
        max_cnot: all.iter().map(|r| r.1).max().unwrap_or(0),
        max_one_qubit: all.iter().map(|r| r.2).max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes_and_is_reproducible() {
        let cfg = SelftestConfig {
            trials: 3,
            seed: 11,
            ..Default::default()
        };
        let a = run_selftest(&cfg);
        assert!(a.passed(), "{a}");
        let b = run_selftest(&SelftestConfig {
            execution: Execution::Sequential,
            ..cfg
        });
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.max_cnot <= MAX_CNOT);
    }
}
