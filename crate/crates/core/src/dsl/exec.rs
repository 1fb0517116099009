use std::fmt;

use serde::Serialize;

use crate::circuit::{Circuit, EvalError, Outcomes};

use super::analyze::{Item, Model};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointEntry {
    pub outcomes: Vec<usize>,
    pub probability: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormEntry {
    pub outcomes: Vec<usize>,
    pub event: String,
}

/// Result of one `eval` statement. `tests` are the test labels in the
/// positional order used by outcome lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvalOutput {
    /// Closed circuit with an outcome list; `_` entries summed over.
    Probability {
        circuit: String,
        tests: Vec<String>,
        outcomes: Vec<Option<usize>>,
        probability: u64,
    },
    /// Closed circuit without outcomes.
    Joint {
        circuit: String,
        tests: Vec<String>,
        entries: Vec<JointEntry>,
        total: u64,
    },
    /// Open circuit with an outcome list: its normal form.
    NormalForm {
        circuit: String,
        tests: Vec<String>,
        outcomes: Vec<Option<usize>>,
        event: String,
    },
    /// Open circuit without outcomes: one normal form per outcome tuple.
    NormalForms {
        circuit: String,
        tests: Vec<String>,
        forms: Vec<FormEntry>,
    },
}

fn tuple<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn outcome_list(outcomes: &[Option<usize>]) -> String {
    let parts: Vec<String> = outcomes
        .iter()
        .map(|o| o.map_or("_".into(), |v| v.to_string()))
        .collect();
    parts.join(", ")
}

impl fmt::Display for EvalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutput::Probability {
                circuit,
                outcomes,
                probability,
                ..
            } => write!(
                f,
                "P({circuit} @ {}) = {probability}",
                outcome_list(outcomes)
            ),
            EvalOutput::Joint {
                circuit,
                tests,
                entries,
                ..
            } => {
                write!(f, "{circuit}: joint distribution over {}", tuple(tests))?;
                for e in entries {
                    write!(f, "\n  {} -> {}", tuple(&e.outcomes), e.probability)?;
                }
                Ok(())
            }
            EvalOutput::NormalForm {
                circuit,
                outcomes,
                event,
                ..
            } => write!(f, "{circuit} @ {} = {event}", outcome_list(outcomes)),
            EvalOutput::NormalForms {
                circuit,
                tests,
                forms,
            } => {
                write!(f, "{circuit}: normal forms over {}", tuple(tests))?;
                for e in forms {
                    write!(f, "\n  {} -> {}", tuple(&e.outcomes), e.event)?;
                }
                Ok(())
            }
        }
    }
}

/// Runs every `eval` statement in order.
pub fn execute(model: &Model) -> Result<Vec<EvalOutput>, EvalError> {
    let mut out = Vec::new();
    for item in &model.items {
        if let Item::Eval { name, outcomes } = item {
            let circuit = model
                .circuit_for(name)
                .expect("eval targets were resolved during analysis");
            out.push(evaluate(name, &circuit, outcomes.as_deref())?);
        }
    }
    Ok(out)
}

/// Evaluates one circuit as an `eval` statement would.
pub fn evaluate(
    name: &str,
    circuit: &Circuit,
    outcomes: Option<&[Option<usize>]>,
) -> Result<EvalOutput, EvalError> {
    let ids = circuit.test_nodes();
    let tests: Vec<String> = ids
        .iter()
        .map(|&id| circuit.node(id).expect("listed node").label.clone())
        .collect();
    let circuit_name = name.to_string();
    match outcomes {
        Some(list) => {
            let fixed: Outcomes = ids
                .iter()
                .zip(list)
                .filter_map(|(&id, o)| o.map(|o| (id, o)))
                .collect();
            if circuit.is_closed() {
                Ok(EvalOutput::Probability {
                    circuit: circuit_name,
                    tests,
                    outcomes: list.to_vec(),
                    probability: circuit.marginal_probability(&fixed)?,
                })
            } else {
                Ok(EvalOutput::NormalForm {
                    circuit: circuit_name,
                    tests,
                    outcomes: list.to_vec(),
                    event: circuit.evaluate_open_marginal(&fixed)?.to_string(),
                })
            }
        }
        None if circuit.is_closed() => {
            let dist = circuit.joint_distribution()?;
            Ok(EvalOutput::Joint {
                circuit: circuit_name,
                tests,
                total: dist.total(),
                entries: dist
                    .entries
                    .iter()
                    .map(|(k, &p)| JointEntry {
                        outcomes: k.clone(),
                        probability: p,
                    })
                    .collect(),
            })
        }
        None => {
            let mut forms = Vec::new();
            let mut tuples = vec![Vec::new()];
            for &id in &ids {
                let count = circuit
                    .node(id)
                    .expect("listed node")
                    .payload
                    .outcome_count()
                    .expect("test node");
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<usize>| {
                        (0..count).map(move |o| {
                            let mut t = t.clone();
                            t.push(o);
                            t
                        })
                    })
                    .collect();
            }
            for t in tuples {
                let fixed: Outcomes = ids.iter().copied().zip(t.iter().copied()).collect();
                forms.push(FormEntry {
                    event: circuit.evaluate_open_default(&fixed)?.to_string(),
                    outcomes: t,
                });
            }
            Ok(EvalOutput::NormalForms {
                circuit: circuit_name,
                tests,
                forms,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::load;
    use super::*;

    #[test]
    fn closed_and_open_evaluation() {
        let src = "system A = 2 |> 2\nstate r0 : A = {0 -> 1}\nstate r1 : A = {1 -> 1}\n\
                   test P : prep = {r0, r1}\n\
                   effect x : A = [v = 0; E = {0}]\neffect y : A = [v = 0; E = {1}]\n\
                   test D : obs = {x, y}\ncircuit C = P ; D\ncircuit O = P ; A\n\
                   eval C\neval C @ 0, _\neval C @ 1, 1\neval O @ 0\neval O\n";
        let out = execute(&load(src).unwrap()).unwrap();
        assert_eq!(out.len(), 5);
        assert_eq!(
            out[0].to_string(),
            "C: joint distribution over (P, D)\n  (0, 0) -> 0\n  (0, 1) -> 1\n  (1, 0) -> 0\n  (1, 1) -> 0"
        );
        assert_eq!(out[1].to_string(), "P(C @ 0, _) = 1");
        assert_eq!(out[2].to_string(), "P(C @ 1, 1) = 0");
        assert_eq!(out[3].to_string(), "O @ 0 = state on 2|>2: {0 -> 1}");
        assert_eq!(
            out[4].to_string(),
            "O: normal forms over (P)\n  (0) -> state on 2|>2: {0 -> 1}\n  (1) -> state on 2|>2: {1 -> 1}"
        );
    }
}
