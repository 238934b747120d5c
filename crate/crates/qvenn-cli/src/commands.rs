//! Implementations of the CLI subcommands, each producing a [`RunResult`]
//! with both a text rendering and the structured document.

use std::time::Instant;

use serde_json::{json, Map, Value};

use qvenn::entropy::{
    bipartite_diagram, conditional_amplitude_operator, ternary_diagram, BipartiteDiagram,
    TernaryDiagram,
};
use qvenn::kholevo::{measure_ensemble, measurement_angle_sweep, outcome_table};
use qvenn::measurement::{
    ancilla_statistics, attach_ancilla, entropic_uncertainty_check, epr_experiment,
    sequential_measurement, AncillaDiagram, ChainState, MeasurementModel,
};
use qvenn::separability::conditional_spectrum_test;

use crate::report::{bits, meta_tree, state_digest, RunResult};
use crate::spec::{parse_basis, parse_ensemble, parse_named_pure, parse_split, parse_state};
use crate::{render, CliError};

fn diagram_tree(d: &BipartiteDiagram) -> Value {
    json!({
        "s_a": d.s_a,
        "s_b": d.s_b,
        "s_ab": d.s_ab,
        "s_a_given_b": d.s_a_given_b,
        "s_b_given_a": d.s_b_given_a,
        "s_mutual": d.s_mutual,
    })
}

fn ternary_tree(d: &TernaryDiagram) -> Value {
    json!({
        "s_a": d.s_a, "s_b": d.s_b, "s_c": d.s_c,
        "s_ab": d.s_ab, "s_ac": d.s_ac, "s_bc": d.s_bc,
        "s_abc": d.s_abc,
        "s_a_given_bc": d.s_a_given_bc,
        "s_b_given_ac": d.s_b_given_ac,
        "s_c_given_ab": d.s_c_given_ab,
        "s_a_b_given_c": d.s_a_b_given_c,
        "s_a_c_given_b": d.s_a_c_given_b,
        "s_b_c_given_a": d.s_b_c_given_a,
        "s_ternary": d.s_ternary,
    })
}

fn group_refs(groups: &[Vec<String>]) -> Vec<Vec<&str>> {
    groups
        .iter()
        .map(|g| g.iter().map(String::as_str).collect())
        .collect()
}

pub fn cmd_diagram(
    command_echo: &str,
    state_spec: &str,
    trace_out: Option<&str>,
    split: &str,
    epsilon: f64,
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let mut rho = parse_state(state_spec)?;
    if let Some(labels) = trace_out {
        let drop: Vec<&str> = labels.split(',').map(str::trim).collect();
        let all: Vec<String> = rho.layout().labels().iter().map(|l| l.to_string()).collect();
        for d in &drop {
            if !all.iter().any(|l| l == d) {
                return Err(CliError::Parse(format!("cannot trace out unknown label `{d}`")));
            }
        }
        let keep: Vec<&str> = all
            .iter()
            .filter(|l| !drop.contains(&l.as_str()))
            .map(String::as_str)
            .collect();
        rho = rho.partial_trace(&keep)?;
    }
    let groups = parse_split(split, rho.layout())?;
    let refs = group_refs(&groups);
    let digest = state_digest(&rho);

    let (results, text) = match refs.len() {
        2 => {
            let d = bipartite_diagram(&rho, (&refs[0], &refs[1]))?;
            let op = conditional_amplitude_operator(&rho, &refs[1], epsilon)?;
            let spectrum = op.spectral_decompose()?;
            let mut text = format!("state: {state_spec}   split: {split}\n\n");
            text.push_str(&render::bipartite(&d, &groups[0].join(""), &groups[1].join("")));
            text.push_str(&format!(
                "\n  conditional amplitude spectrum (given {}): [{}]\n",
                groups[1].join(""),
                spectrum
                    .eigenvalues
                    .iter()
                    .map(|l| format!("{l:.6}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            let results = json!({
                "diagram": diagram_tree(&d),
                "conditional_spectrum": spectrum.eigenvalues,
            });
            (results, text)
        }
        3 => {
            let d = ternary_diagram(&rho, &refs[0], &refs[1], &refs[2])?;
            let mut text = format!("state: {state_spec}   split: {split}\n\n");
            text.push_str(&render::ternary(
                &d,
                &groups[0].join(""),
                &groups[1].join(""),
                &groups[2].join(""),
            ));
            (json!({ "diagram": ternary_tree(&d) }), text)
        }
        n => {
            return Err(CliError::Parse(format!(
                "diagram supports 2 or 3 parts, got {n}"
            )))
        }
    };

    let tree = json!({
        "meta": meta_tree(command_echo, &[("epsilon", json!(epsilon))]),
        "inputs": { "state": state_spec, "split": split, "digest": digest },
        "results": results,
        "verdicts": {},
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}

pub fn cmd_separability(
    command_echo: &str,
    state_spec: &str,
    split: Option<&str>,
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let rho = parse_state(state_spec)?;
    let layout = rho.layout().clone();
    let groups = match split {
        Some(s) => parse_split(s, &layout)?,
        None => {
            // default: first part vs. the rest
            let labels = layout.labels();
            if labels.len() < 2 {
                return Err(CliError::Parse(
                    "separability needs a bipartite state".into(),
                ));
            }
            vec![
                vec![labels[0].to_string()],
                labels[1..].iter().map(|s| s.to_string()).collect(),
            ]
        }
    };
    if groups.len() != 2 {
        return Err(CliError::Parse("separability needs a two-part split".into()));
    }
    let refs = group_refs(&groups);
    let report = conditional_spectrum_test(&rho, (&refs[0], &refs[1]))?;

    let verdict = |pass: bool| if pass { "pass" } else { "fail" };
    let text = format!(
        "state: {state_spec}\n\n\
         max eigenvalue of rho_A|B : {:.6}\n\
         max eigenvalue of rho_B|A : {:.6}\n\
         S(A|B) = {}   S(B|A) = {}\n\
         partial-transpose min eigenvalue: {:.6}\n\n\
         classicality (all eigenvalues <= 1) : {}\n\
         conditional entropies non-negative  : {}\n\
         positive partial transpose          : {}\n\n\
         entanglement detected: {}\n",
        report.max_conditional_eigenvalue_ab,
        report.max_conditional_eigenvalue_ba,
        bits(report.s_a_given_b),
        bits(report.s_b_given_a),
        report.ppt_min_eigenvalue,
        verdict(report.classicality_passed),
        verdict(report.conditional_entropy_nonnegative),
        verdict(report.ppt_passed),
        report.entanglement_detected(),
    );

    let tree = json!({
        "meta": meta_tree(command_echo, &[]),
        "inputs": { "state": state_spec, "digest": state_digest(&rho) },
        "results": {
            "max_conditional_eigenvalue_ab": report.max_conditional_eigenvalue_ab,
            "max_conditional_eigenvalue_ba": report.max_conditional_eigenvalue_ba,
            "s_a_given_b": report.s_a_given_b,
            "s_b_given_a": report.s_b_given_a,
            "ppt_min_eigenvalue": report.ppt_min_eigenvalue,
            "spectrum_stability": report.spectrum_stability,
        },
        "verdicts": {
            "classicality": report.classicality_passed,
            "conditional_entropy_nonnegative": report.conditional_entropy_nonnegative,
            "ppt": report.ppt_passed,
            "entanglement_detected": report.entanglement_detected(),
        },
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}

pub fn cmd_measure_chain(
    command_echo: &str,
    state_spec: &str,
    obs_name: &str,
    ancillae: usize,
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let q = parse_named_pure(state_spec, "Q")
        .ok_or_else(|| CliError::Parse(format!("chain needs a named pure state, got `{state_spec}`")))?;
    let obs = parse_basis(obs_name)?;
    let model = MeasurementModel::minimal(obs);
    let mut chain = ChainState::new(&q);
    let mut text = format!("scenario: chain   state: {state_spec}   observable: {obs_name}\n");
    let mut steps = Vec::new();
    for step in 1..=ancillae {
        chain = attach_ancilla(&chain, &model)?;
        let ancilla_group: Vec<&str> = chain.ancilla_labels();
        let d = bipartite_diagram(chain.state(), (&["Q"], &ancilla_group))?;
        text.push_str(&format!("\nafter attachment {step} (Q vs. ancillae):\n"));
        text.push_str(&render::bipartite(&d, "Q", &ancilla_group.join("")));
        steps.push(diagram_tree(&d));
    }
    let stats = ancilla_statistics(&chain)?;
    text.push_str("\noutcome distribution: [");
    text.push_str(
        &stats
            .outcome_distribution
            .iter()
            .map(|p| format!("{p:.6}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    text.push_str("]\n");
    if let AncillaDiagram::Bipartite(d) = &stats.diagram {
        text.push_str("\nancilla pair diagram:\n");
        text.push_str(&render::bipartite(d, "A1", "A2"));
    }

    let tree = json!({
        "meta": meta_tree(command_echo, &[]),
        "inputs": { "state": state_spec, "observable": obs_name, "ancillae": ancillae },
        "results": {
            "steps": steps,
            "outcome_distribution": stats.outcome_distribution,
            "ancilla_entropy": qvenn::entropy::von_neumann_entropy(&stats.ancilla_state),
            "global_entropy": qvenn::entropy::von_neumann_entropy(chain.state()),
        },
        "verdicts": {},
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}

pub fn cmd_measure_sequential(
    command_echo: &str,
    state_spec: &str,
    obs_pair: &str,
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let q = parse_named_pure(state_spec, "Q")
        .ok_or_else(|| CliError::Parse(format!("sequential needs a named pure state, got `{state_spec}`")))?;
    let (first_name, second_name) = obs_pair
        .split_once(',')
        .ok_or_else(|| CliError::Parse("`--obs` needs two bases, e.g. z,x".into()))?;
    let first = parse_basis(first_name.trim())?;
    let second = parse_basis(second_name.trim())?;

    let chain = sequential_measurement(&q, &first, &second)?;
    let ancillae = chain.state().partial_trace(&["A1", "A2"])?;
    let d = bipartite_diagram(&ancillae, (&["A1"], &["A2"]))?;
    let check = entropic_uncertainty_check(&q, &first, &second)?;

    let mut text = format!(
        "scenario: sequential   state: {state_spec}   observables: {obs_pair}\n\n\
         pointer registers after both measurements:\n"
    );
    text.push_str(&render::bipartite(&d, "A1", "A2"));
    text.push_str(&format!(
        "\n  S(A2|A1) = {}\n  uncertainty check: S(A)+S(B) = {} >= min-row-entropy = {}\n",
        bits(d.s_b_given_a),
        bits(check.lhs),
        bits(check.rhs),
    ));

    let tree = json!({
        "meta": meta_tree(command_echo, &[]),
        "inputs": { "state": state_spec, "observables": obs_pair },
        "results": {
            "ancilla_diagram": diagram_tree(&d),
            "uncertainty_lhs": check.lhs,
            "uncertainty_rhs": check.rhs,
        },
        "verdicts": { "uncertainty_bound_holds": check.lhs >= check.rhs - 1e-9 },
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}

pub fn cmd_measure_epr(command_echo: &str, axes: &str) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let (first_name, second_name) = axes
        .split_once(',')
        .ok_or_else(|| CliError::Parse("`--axes` needs two bases, e.g. z,z".into()))?;
    let first = parse_basis(first_name.trim())?;
    let second = parse_basis(second_name.trim())?;
    let report = epr_experiment(&first, &second)?;

    let mut text = format!("scenario: epr   axes: {axes}\n\npair before measurement:\n");
    text.push_str(&render::bipartite(&report.pre_measurement_diagram, "Q1", "Q2"));
    text.push_str("\nancillae after measurement:\n");
    text.push_str(&render::bipartite(&report.ancilla_diagram, "A1", "A2"));
    text.push_str(&format!(
        "\n  S(Q1Q2|A1A2) = {}   S(Q1Q2:A1A2) = {}   S(total) = {}\n",
        bits(report.s_q_given_ancillae),
        bits(report.s_q_ancillae_mutual),
        bits(report.s_total),
    ));

    let tree = json!({
        "meta": meta_tree(command_echo, &[]),
        "inputs": { "axes": axes },
        "results": {
            "pre_measurement_diagram": diagram_tree(&report.pre_measurement_diagram),
            "ancilla_diagram": diagram_tree(&report.ancilla_diagram),
            "s_q_given_ancillae": report.s_q_given_ancillae,
            "s_q_ancillae_mutual": report.s_q_ancillae_mutual,
            "s_total": report.s_total,
        },
        "verdicts": {},
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}

pub fn cmd_kholevo(
    command_echo: &str,
    ensemble_path: &str,
    basis: &str,
    sweep: Option<f64>,
) -> Result<RunResult, CliError> {
    let started = Instant::now();
    let ens = parse_ensemble(ensemble_path)?;
    let obs = parse_basis(basis)?;
    let model = MeasurementModel::minimal(obs);
    let (rho_xa, report) = measure_ensemble(&ens, &model)?;
    let table = outcome_table(&ens, &model)?;

    let mut text = format!(
        "ensemble: {ensemble_path}   basis: {basis}\n\n\
         Kholevo bound  chi = {}\n\
         S(X:Q)             = {}\n\
         accessible info  I = {}\n\
         deficit S(X:Q|A)   = {}\n\
         decomposition: chi = I + deficit  (residual {:.3e})\n\
         conservation residual: {:.3e}\n",
        bits(report.chi),
        bits(report.s_xq_mutual),
        bits(report.accessible_info),
        bits(report.deficit),
        (report.chi - report.accessible_info - report.deficit).abs(),
        report.conservation_residual,
    );
    text.push_str("\noutcome table p(alpha|i):\n");
    for (i, row) in table.iter().enumerate() {
        text.push_str(&format!(
            "  signal {i}: [{}]\n",
            row.iter()
                .map(|p| format!("{p:.6}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    let mut results = Map::new();
    results.insert("chi".into(), json!(report.chi));
    results.insert("s_xq_mutual".into(), json!(report.s_xq_mutual));
    results.insert("accessible_info".into(), json!(report.accessible_info));
    results.insert("deficit".into(), json!(report.deficit));
    results.insert(
        "conservation_residual".into(),
        json!(report.conservation_residual),
    );
    results.insert("outcome_table".into(), json!(table));
    results.insert(
        "rho_xa_off_diagonal_mass".into(),
        json!(qvenn::kholevo::off_diagonal_mass(&rho_xa)),
    );

    if let Some(step) = sweep {
        let curve = measurement_angle_sweep(&ens, step)?;
        let best = curve
            .iter()
            .copied()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        text.push_str(&format!(
            "\nangle sweep (step {step} deg): best I = {} at {:.1} deg\n",
            bits(best.1),
            best.0
        ));
        results.insert(
            "sweep".into(),
            json!(curve
                .iter()
                .map(|(deg, info)| json!({ "degrees": deg, "info": info }))
                .collect::<Vec<_>>()),
        );
    }

    let tree = json!({
        "meta": meta_tree(command_echo, &[]),
        "inputs": { "ensemble": ensemble_path, "basis": basis },
        "results": Value::Object(results),
        "verdicts": {
            "info_within_bound": report.accessible_info <= report.chi + 1e-9,
            "decomposition_holds":
                (report.chi - report.accessible_info - report.deficit).abs() < 1e-9,
            "conservation_holds": report.conservation_residual < 1e-9,
        },
    });
    Ok(RunResult {
        tree,
        text,
        wall_time: started.elapsed(),
        failed: false,
    })
}
