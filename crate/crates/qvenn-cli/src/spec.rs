//! State and ensemble specification parsing.
//!
//! Inline grammar (`name:param,param`):
//!
//! * `bell:phi+` `bell:phi-` `bell:psi+` `bell:psi-`
//! * `ghz:N` — N-party GHZ state
//! * `werner:X` — singlet weight X in [0, 1]
//! * `mixed:DxD[xD…]` — maximally mixed state on those dimensions
//! * `random:DxD,RANK,SEED` — seeded random mixed state
//! * `zero` `one` `plus` `minus` `iplus` `iminus` — single-qubit pure states
//!
//! Anything containing a `/` or ending in `.json` is read as a JSON file:
//!
//! ```json
//! {"layout": [["A", 2], ["B", 2]],
//!  "matrix": [[[0.5, 0.0], [0.0, 0.0]], …]}           // dense entries
//! {"layout": [["A", 2]], "pure": [[1.0, 0.0], [0.0, 0.0]]}
//! {"separable": {"weights": [0.5, 0.5],
//!                "factors": [["zero", "zero"], ["one", "one"]]}}
//! ```
//!
//! Matrix entries and amplitudes are `[re, im]` pairs.

use qvenn::nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use qvenn::states::{
    bell_state, ghz_state, qubit_pure, random_density, separable_mixture, werner_state,
    BellState, PureState, QubitBasisState, SeparableSpec,
};
use qvenn::{C64, DensityOperator, SubsystemLayout};

/// A located parse or validation failure.
#[derive(Debug)]
pub struct SpecError {
    pub what: String,
    pub spec: String,
    /// True when the input was well-formed but the math rejected it
    /// (state invariants); maps to the numeric-failure exit code.
    pub numeric: bool,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "in state spec `{}`: {}", self.spec, self.what)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(spec: &str, what: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError {
        what: what.into(),
        spec: spec.to_string(),
        numeric: false,
    })
}

fn numeric_err<T>(spec: &str, what: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError {
        what: what.into(),
        spec: spec.to_string(),
        numeric: true,
    })
}

/// Parse a state specification into a density operator.
pub fn parse_state(spec: &str) -> Result<DensityOperator, SpecError> {
    if let Some(pure) = parse_named_pure(spec, "Q") {
        return Ok(pure.to_density());
    }
    if spec.contains('/') || spec.ends_with(".json") {
        return parse_state_file(spec);
    }
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, a),
        None => return err(spec, "unknown state name (try `--help` for the grammar)"),
    };
    match name {
        "bell" => {
            let which = match args {
                "phi+" => BellState::PhiPlus,
                "phi-" => BellState::PhiMinus,
                "psi+" => BellState::PsiPlus,
                "psi-" => BellState::PsiMinus,
                other => return err(spec, format!("unknown Bell state `{other}`")),
            };
            Ok(bell_state(which).to_density())
        }
        "ghz" => {
            let n: usize = match args.parse() {
                Ok(n) => n,
                Err(_) => return err(spec, "ghz needs an integer party count"),
            };
            match ghz_state(n) {
                Ok(psi) => Ok(psi.to_density()),
                Err(e) => err(spec, e.to_string()),
            }
        }
        "werner" => {
            let x: f64 = match args.parse() {
                Ok(x) => x,
                Err(_) => return err(spec, "werner needs a real weight"),
            };
            werner_state(x).or_else(|e| err(spec, e.to_string()))
        }
        "mixed" => {
            let layout = parse_dims_layout(spec, args)?;
            Ok(DensityOperator::maximally_mixed(layout))
        }
        "random" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 3 {
                return err(spec, "random needs DIMS,RANK,SEED (e.g. random:2x2,4,7)");
            }
            let layout = parse_dims_layout(spec, parts[0])?;
            let rank: usize = match parts[1].trim().parse() {
                Ok(r) => r,
                Err(_) => return err(spec, "rank must be an integer"),
            };
            let seed: u64 = match parts[2].trim().parse() {
                Ok(s) => s,
                Err(_) => return err(spec, "seed must be an integer"),
            };
            random_density(&layout, rank, seed).or_else(|e| err(spec, e.to_string()))
        }
        other => err(spec, format!("unknown state name `{other}`")),
    }
}

/// Parse a named single-qubit pure state with the given label.
pub fn parse_named_pure(spec: &str, label: &str) -> Option<PureState> {
    let which = match spec {
        "zero" => QubitBasisState::Zero,
        "one" => QubitBasisState::One,
        "plus" => QubitBasisState::Plus,
        "minus" => QubitBasisState::Minus,
        "iplus" => QubitBasisState::PlusI,
        "iminus" => QubitBasisState::MinusI,
        _ => return None,
    };
    Some(qubit_pure(label, which))
}

/// Parse `2x2` or `2x3x2` into a layout labeled `A`, `B`, `C`, …
fn parse_dims_layout(spec: &str, dims: &str) -> Result<SubsystemLayout, SpecError> {
    let parsed: Result<Vec<usize>, _> = dims.trim().split('x').map(str::parse).collect();
    let dims: Vec<usize> = match parsed {
        Ok(d) if !d.is_empty() && d.len() <= 26 => d,
        _ => return err(spec, format!("bad dimension list `{dims}`")),
    };
    SubsystemLayout::new(
        dims.iter()
            .enumerate()
            .map(|(i, &d)| (((b'A' + i as u8) as char).to_string(), d)),
    )
    .or_else(|e| err(spec, e.to_string()))
}

#[derive(Deserialize)]
struct StateFile {
    layout: Option<Vec<(String, usize)>>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    pure: Option<Vec<[f64; 2]>>,
    separable: Option<SeparableFile>,
}

#[derive(Deserialize)]
struct SeparableFile {
    weights: Vec<f64>,
    factors: Vec<(serde_json::Value, serde_json::Value)>,
}

fn parse_state_file(path: &str) -> Result<DensityOperator, SpecError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return err(path, format!("cannot read file: {e}")),
    };
    let file: StateFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return err(path, format!("malformed JSON: {e}")),
    };
    state_from_file(path, &file)
}

fn state_from_file(path: &str, file: &StateFile) -> Result<DensityOperator, SpecError> {
    if let Some(sep) = &file.separable {
        let factors: Result<Vec<(DensityOperator, DensityOperator)>, SpecError> = sep
            .factors
            .iter()
            .map(|(a, b)| {
                Ok((
                    factor_state(path, a, "A")?,
                    factor_state(path, b, "B")?,
                ))
            })
            .collect();
        let spec = SeparableSpec::new(sep.weights.clone(), factors?)
            .or_else(|e| numeric_err(path, e.to_string()))?;
        return separable_mixture(&spec).or_else(|e| numeric_err(path, e.to_string()));
    }
    let layout = match &file.layout {
        Some(parts) => SubsystemLayout::new(parts.iter().map(|(l, d)| (l.clone(), *d)))
            .or_else(|e| err(path, e.to_string()))?,
        None => return err(path, "file needs a `layout` (or a `separable` block)"),
    };
    if let Some(rows) = &file.matrix {
        let d = layout.total_dim();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return err(path, format!("matrix must be {d}x{d}"));
        }
        let m = DMatrix::from_fn(d, d, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
        return DensityOperator::from_matrix(layout, m)
            .or_else(|e| numeric_err(path, e.to_string()));
    }
    if let Some(amps) = &file.pure {
        let v = DVector::from_iterator(amps.len(), amps.iter().map(|a| C64::new(a[0], a[1])));
        let psi = PureState::new(layout, v).or_else(|e| numeric_err(path, e.to_string()))?;
        return Ok(psi.to_density());
    }
    err(path, "file needs one of `matrix`, `pure`, or `separable`")
}

/// A separable factor: either a named pure state (string) or an inline
/// state object with its own layout.
fn factor_state(
    path: &str,
    value: &serde_json::Value,
    default_label: &str,
) -> Result<DensityOperator, SpecError> {
    match value {
        serde_json::Value::String(name) => match parse_named_pure(name, default_label) {
            Some(psi) => Ok(psi.to_density()),
            None => err(path, format!("unknown named factor `{name}`")),
        },
        obj @ serde_json::Value::Object(_) => {
            let file: StateFile = serde_json::from_value(obj.clone())
                .map_err(|e| SpecError {
                    what: format!("malformed factor: {e}"),
                    spec: path.to_string(),
                    numeric: false,
                })?;
            state_from_file(path, &file)
        }
        _ => err(path, "factors must be names or state objects"),
    }
}

/// Parse a partition argument like `A/B`, `AB/C`, or `A,B/C` into label
/// groups, validated against the layout.
pub fn parse_split(split: &str, layout: &SubsystemLayout) -> Result<Vec<Vec<String>>, SpecError> {
    let labels = layout.labels();
    let mut groups = Vec::new();
    for chunk in split.split('/') {
        if chunk.is_empty() {
            return err(split, "empty part in split");
        }
        let group: Vec<String> = if chunk.contains(',') {
            chunk.split(',').map(|s| s.trim().to_string()).collect()
        } else if labels.contains(&chunk) {
            vec![chunk.to_string()]
        } else if chunk.chars().all(|c| labels.contains(&c.to_string().as_str())) {
            // single-letter convenience: "AB" means labels A and B
            chunk.chars().map(|c| c.to_string()).collect()
        } else {
            return err(split, format!("unknown label group `{chunk}`"));
        };
        groups.push(group);
    }
    if groups.len() < 2 {
        return err(split, "split needs at least two parts (e.g. A/B)");
    }
    Ok(groups)
}

/// Ensemble file: priors plus signal states (named strings or inline
/// state objects sharing one layout).
#[derive(Deserialize)]
pub struct EnsembleFile {
    pub priors: Vec<f64>,
    pub signals: Vec<serde_json::Value>,
}

pub fn parse_ensemble(path: &str) -> Result<qvenn::kholevo::PreparationEnsemble, SpecError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return err(path, format!("cannot read file: {e}")),
    };
    let file: EnsembleFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return err(path, format!("malformed JSON: {e}")),
    };
    let signals: Result<Vec<DensityOperator>, SpecError> = file
        .signals
        .iter()
        .map(|v| factor_state(path, v, "Q"))
        .collect();
    let priors = qvenn::entropy::ClassicalDistribution::new(file.priors)
        .or_else(|e| err(path, e.to_string()))?;
    qvenn::kholevo::PreparationEnsemble::new(priors, signals?)
        .or_else(|e| err(path, e.to_string()))
}

/// Parse a measurement basis name: `z`, `x`, `y`, or `deg:ANGLE`.
pub fn parse_basis(name: &str) -> Result<qvenn::measurement::Observable, SpecError> {
    use qvenn::measurement::Observable;
    match name {
        "z" => Ok(Observable::pauli_z()),
        "x" => Ok(Observable::pauli_x()),
        "y" => Ok(Observable::pauli_y()),
        other => {
            if let Some(deg) = other.strip_prefix("deg:") {
                match deg.parse::<f64>() {
                    Ok(d) => Ok(Observable::rotated(d.to_radians())),
                    Err(_) => err(name, "deg: needs a real angle in degrees"),
                }
            } else {
                err(name, "unknown basis (use z, x, y, or deg:ANGLE)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states_parse() {
        assert!(parse_state("bell:phi+").is_ok());
        assert!(parse_state("ghz:4").is_ok());
        assert!(parse_state("werner:0.5").is_ok());
        assert!(parse_state("random:2x3,4,9").is_ok());
        assert!(parse_state("mixed:2x2").is_ok());
        assert!(parse_state("plus").is_ok());
    }

    #[test]
    fn bad_specs_are_rejected_with_location() {
        for bad in ["bell:phi", "ghz:1", "werner:2.0", "random:2x2,9,1", "nope"] {
            let e = parse_state(bad).unwrap_err();
            assert_eq!(e.spec, bad);
        }
    }

    #[test]
    fn split_parsing() {
        let layout = SubsystemLayout::qubits(3).unwrap();
        let groups = parse_split("AB/C", &layout).unwrap();
        assert_eq!(groups, vec![vec!["A".to_string(), "B".into()], vec!["C".into()]]);
        let groups = parse_split("A/B/C", &layout).unwrap();
        assert_eq!(groups.len(), 3);
        assert!(parse_split("A", &layout).is_err());
        assert!(parse_split("A/Z", &layout).is_err());
    }
}
