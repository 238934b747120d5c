//! The `verify` subcommand: seeded property suites over random states.
//!
//! Each suite runs `trials` independent trials; trial k derives its seed
//! as `seed + k`, so reports are reproducible and any violation comes
//! with a minimal reproduction (property, seed, trial index).

use std::time::Instant;

use serde_json::{json, Map, Value};

use qvenn::entropy::{
    bipartite_diagram, conditional_mutual_entropy, verify_chain_rules, von_neumann_entropy,
};
use qvenn::kholevo::{
    classical_vs_quantum_mutual, measure_ensemble, off_diagonal_mass, PreparationEnsemble,
};
use qvenn::measurement::{
    born_distribution, collapse_oracle_joint_distribution, joint_pointer_distribution,
    sequential_measurement, Observable,
};
use qvenn::separability::random_separable_survey;
use qvenn::states::{random_density, random_pure, random_unitary};
use qvenn::{C64, DensityOperator, SubsystemLayout};

use crate::report::{meta_tree, RunResult};
use crate::CliError;

/// One property's tally within a suite.
struct Tally {
    property: &'static str,
    trials: usize,
    violations: usize,
    first_violation: Option<(u64, usize, String)>,
}

impl Tally {
    fn new(property: &'static str) -> Self {
        Self {
            property,
            trials: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, seed: u64, trial: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some((seed, trial, detail()));
            }
        }
    }
}

fn simplex_from_seed(seed: u64, n: usize) -> Vec<f64> {
    qvenn::states::random_simplex(n, seed)
}

fn suite_inequalities(seed: u64, trials: usize) -> Result<Vec<Tally>, CliError> {
    let mut ssa = Tally::new("strong-subadditivity");
    let mut araki_lieb = Tally::new("araki-lieb");
    let mut mutual_bound = Tally::new("mutual-entropy-upper-bound");
    let mut classical_bound = Tally::new("classical-mutual-bound");
    let mut lu_invariance = Tally::new("local-unitary-invariance");

    let tri = SubsystemLayout::qubits(3)?;
    let bi = SubsystemLayout::qubits(2)?;
    for k in 0..trials {
        let s = seed + k as u64;

        let rho = random_density(&tri, 1 + k % 8, s)?;
        let cmi = conditional_mutual_entropy(&rho, &["A"], &["B"], &["C"])?;
        ssa.record(seed, k, cmi >= -1e-9, || format!("S(A:B|C) = {cmi}"));

        let rho = random_density(&bi, 1 + k % 4, s + 1_000_000)?;
        let d = bipartite_diagram(&rho, (&["A"], &["B"]))?;
        araki_lieb.record(seed, k, d.s_ab >= (d.s_a - d.s_b).abs() - 1e-9, || {
            format!("S(AB) = {}, |S(A)-S(B)| = {}", d.s_ab, (d.s_a - d.s_b).abs())
        });
        mutual_bound.record(
            seed,
            k,
            d.s_mutual <= 2.0 * d.s_a.min(d.s_b) + 1e-9 && d.s_mutual >= -1e-9,
            || format!("S(A:B) = {}", d.s_mutual),
        );

        let p = simplex_from_seed(s + 2_000_000, 4);
        let m = qvenn::nalgebra::DMatrix::from_diagonal(&qvenn::nalgebra::DVector::from_iterator(
            4,
            p.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let diag = DensityOperator::from_matrix(bi.clone(), m)?;
        let d = bipartite_diagram(&diag, (&["A"], &["B"]))?;
        classical_bound.record(seed, k, d.s_mutual <= d.s_a.min(d.s_b) + 1e-9, || {
            format!("classical S(A:B) = {}", d.s_mutual)
        });

        let rho = random_density(&bi, 1 + k % 4, s + 3_000_000)?;
        let before = bipartite_diagram(&rho, (&["A"], &["B"]))?;
        let u = random_unitary(2, s + 4_000_000).kronecker(&random_unitary(2, s + 5_000_000));
        let rotated =
            DensityOperator::from_matrix(bi.clone(), &u * rho.entries() * u.adjoint())?;
        let after = bipartite_diagram(&rotated, (&["A"], &["B"]))?;
        let max_shift = [
            (before.s_a - after.s_a).abs(),
            (before.s_b - after.s_b).abs(),
            (before.s_ab - after.s_ab).abs(),
            (before.s_mutual - after.s_mutual).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        lu_invariance.record(seed, k, max_shift < 1e-9, || format!("shift {max_shift}"));
    }
    Ok(vec![ssa, araki_lieb, mutual_bound, classical_bound, lu_invariance])
}

fn suite_chain_rules(seed: u64, trials: usize) -> Result<Vec<Tally>, CliError> {
    let mut entropy_chain = Tally::new("entropy-chain-rule");
    let mut mutual_chain = Tally::new("mutual-chain-rule");
    let tri = SubsystemLayout::qubits(3)?;
    for k in 0..trials {
        let s = seed + k as u64;
        let rho = random_density(&tri, 1 + k % 8, s)?;
        let report = verify_chain_rules(&rho, &[&["A"], &["B"], &["C"]])?;
        entropy_chain.record(seed, k, report.entropy_residual < 1e-9, || {
            format!("residual {}", report.entropy_residual)
        });
        mutual_chain.record(seed, k, report.mutual_residual < 1e-9, || {
            format!("residual {}", report.mutual_residual)
        });
    }
    Ok(vec![entropy_chain, mutual_chain])
}

fn suite_separability(seed: u64, trials: usize, dims: (usize, usize)) -> Result<Vec<Tally>, CliError> {
    let survey = random_separable_survey(trials, dims, seed)?;
    let mut classicality = Tally::new("separable-classicality");
    classicality.trials = trials;
    classicality.violations = survey.classicality_violations;
    if let Some((trial, value)) = survey.violation_log.first() {
        classicality.first_violation = Some((seed, *trial, format!("max eigenvalue {value}")));
    }
    let mut nonneg = Tally::new("separable-conditional-entropy");
    nonneg.trials = trials;
    nonneg.violations = survey.negative_conditional_entropies;
    Ok(vec![classicality, nonneg])
}

fn suite_measurement(seed: u64, trials: usize) -> Result<Vec<Tally>, CliError> {
    let mut born = Tally::new("born-statistics");
    let mut oracle = Tally::new("collapse-oracle-equivalence");
    let mut unitarity = Tally::new("pure-state-unitarity");
    let q_layout = SubsystemLayout::new([("Q", 2)])?;
    let z = Observable::pauli_z();
    for k in 0..trials {
        let s = seed + k as u64;
        let psi = random_pure(&q_layout, s);
        let chain = sequential_measurement(&psi, &z, &z)?;

        let predicted = born_distribution(&psi, &z);
        let stats = qvenn::measurement::ancilla_statistics(&chain)?;
        let max_dev = predicted
            .probabilities()
            .iter()
            .zip(&stats.outcome_distribution)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        born.record(seed, k, max_dev < 1e-10, || format!("deviation {max_dev}"));

        let expect = collapse_oracle_joint_distribution(&psi, &z);
        let joint = joint_pointer_distribution(&chain)?;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((expect[i][j] - joint[i][j]).abs());
            }
        }
        oracle.record(seed, k, dev < 1e-10, || format!("deviation {dev}"));

        let total = von_neumann_entropy(chain.state());
        unitarity.record(seed, k, total.abs() < 1e-8, || format!("S = {total}"));
    }
    Ok(vec![born, oracle, unitarity])
}

fn suite_kholevo(seed: u64, trials: usize) -> Result<Vec<Tally>, CliError> {
    let mut bound = Tally::new("kholevo-bound-chain");
    let mut decomposition = Tally::new("kholevo-decomposition");
    let mut conservation = Tally::new("mutual-entropy-conservation");
    let mut diagonality = Tally::new("post-measurement-diagonality");
    let mut classical_quantum = Tally::new("classical-vs-quantum-mutual");
    for k in 0..trials {
        let s = seed + k as u64;
        let n_signals = 2 + k % 3;
        let dq = 2 + k % 2;
        let layout = SubsystemLayout::new([("Q", dq)])?;
        let priors =
            qvenn::entropy::ClassicalDistribution::new(simplex_from_seed(s, n_signals))?;
        let signals: Result<Vec<DensityOperator>, _> = (0..n_signals)
            .map(|i| random_density(&layout, 1 + (k + i) % dq, s + 100 + i as u64))
            .collect();
        let ens = PreparationEnsemble::new(priors, signals?)?;
        let obs = Observable::new("random", random_unitary(dq, s + 200))?;
        let (rho_xa, report) =
            measure_ensemble(&ens, &qvenn::measurement::MeasurementModel::minimal(obs))?;

        let h_p = ens.preparer_entropy();
        bound.record(
            seed,
            k,
            report.accessible_info >= -1e-9
                && report.accessible_info <= report.chi + 1e-9
                && report.chi <= h_p + 1e-9,
            || format!("I = {}, chi = {}, H[p] = {h_p}", report.accessible_info, report.chi),
        );
        decomposition.record(
            seed,
            k,
            (report.chi - report.accessible_info - report.deficit).abs() < 1e-9,
            || format!("residual {}", (report.chi - report.accessible_info - report.deficit).abs()),
        );
        conservation.record(seed, k, report.conservation_residual < 1e-9, || {
            format!("residual {}", report.conservation_residual)
        });
        diagonality.record(seed, k, off_diagonal_mass(&rho_xa) < 1e-10, || {
            format!("mass {}", off_diagonal_mass(&rho_xa))
        });

        let bi = SubsystemLayout::qubits(2)?;
        let rho = random_density(&bi, 1 + k % 4, s + 300)?;
        let (h, sq) = classical_vs_quantum_mutual(
            &rho,
            &random_unitary(2, s + 400),
            &random_unitary(2, s + 500),
        )?;
        classical_quantum.record(seed, k, h <= sq + 1e-9, || format!("H = {h} > S = {sq}"));
    }
    Ok(vec![bound, decomposition, conservation, diagonality, classical_quantum])
}

/// Run a named suite (or all of them) and assemble the run result.
pub fn cmd_verify(
    command_echo: &str,
    suite: &str,
    seed: u64,
    trials: usize,
    dims: (usize, usize),
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let mut tallies = Vec::new();
    let known = ["inequalities", "chain-rules", "separability-survey", "measurement", "kholevo"];
    match suite {
        "inequalities" => tallies.extend(suite_inequalities(seed, trials)?),
        "chain-rules" => tallies.extend(suite_chain_rules(seed, trials)?),
        "separability-survey" => tallies.extend(suite_separability(seed, trials, dims)?),
        "measurement" => tallies.extend(suite_measurement(seed, trials)?),
        "kholevo" => tallies.extend(suite_kholevo(seed, trials)?),
        "all" => {
            tallies.extend(suite_inequalities(seed, trials)?);
            tallies.extend(suite_chain_rules(seed, trials)?);
            tallies.extend(suite_separability(seed, trials, dims)?);
            tallies.extend(suite_measurement(seed, trials)?);
            tallies.extend(suite_kholevo(seed, trials)?);
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown suite `{other}` (use {known:?} or all)"
            )))
        }
    }

    let mut text = format!("suite: {suite}   seed: {seed}   trials: {trials}\n\n");
    let mut failed = false;
    let mut properties = Vec::new();
    for tally in &tallies {
        let status = if tally.violations == 0 { "ok" } else { "FAIL" };
        text.push_str(&format!(
            "  {:<34} {:>5} trials, {:>3} violations  [{status}]\n",
            tally.property, tally.trials, tally.violations
        ));
        if let Some((seed, trial, detail)) = &tally.first_violation {
            text.push_str(&format!(
                "    reproduce with: --seed {seed} (trial {trial}): {detail}\n"
            ));
            failed = true;
        }
        let mut entry = Map::new();
        entry.insert("property".into(), json!(tally.property));
        entry.insert("trials".into(), json!(tally.trials));
        entry.insert("violations".into(), json!(tally.violations));
        if let Some((seed, trial, detail)) = &tally.first_violation {
            entry.insert(
                "first_violation".into(),
                json!({ "seed": seed, "trial": trial, "detail": detail }),
            );
        }
        properties.push(Value::Object(entry));
    }
    text.push_str(&format!(
        "\n{}\n",
        if failed { "RESULT: FAIL" } else { "RESULT: PASS" }
    ));

    let tree = json!({
        "meta": meta_tree(command_echo, &[("seed", json!(seed)), ("trials", json!(trials))]),
        "inputs": { "suite": suite, "dims": format!("{}x{}", dims.0, dims.1) },
        "results": { "properties": properties },
        "verdicts": { "all_passed": !failed },
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed,
    })
}
