//! The two narrated examples: Alice's non-causal circuit and signaling
//! without interaction. Both are driven by the shipped `.opt` files.

use crate::circuit::{Circuit, NodeId, Outcomes};
use crate::dsl::{self, EvalOutput, Model};
use crate::oracles::{signaling_demo, OracleError};

pub const ALICE_OPT: &str = include_str!("../demos/alice.opt");
pub const SIGNALING_OPT: &str = include_str!("../demos/signaling.opt");

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("demo file does not load: {0}")]
    Load(String),
    #[error(transparent)]
    Eval(#[from] crate::circuit::EvalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub fn load_demo(src: &str) -> Result<Model, DemoError> {
    dsl::load(src).map_err(|ds| {
        DemoError::Load(
            ds.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        )
    })
}

fn circuit<'m>(model: &'m Model, name: &str) -> Result<&'m Circuit, DemoError> {
    model
        .circuit(name)
        .ok_or_else(|| DemoError::Load(format!("missing circuit {name}")))
}

/// `P(preparation outcome i | observation test D_v)` read off the demo file,
/// indexed `[i][v]`.
pub fn alice_table(model: &Model) -> Result<[[u64; 2]; 2], DemoError> {
    let mut table = [[0; 2]; 2];
    for v in 0..2 {
        let c = circuit(model, &format!("alice{v}"))?;
        let prep = c.test_nodes()[0];
        for (i, row) in table.iter_mut().enumerate() {
            row[v] = c.marginal_probability(&Outcomes::from([(prep, i)]))?;
        }
    }
    Ok(table)
}

fn eval_lines(model: &Model) -> Result<Vec<String>, DemoError> {
    let outputs: Vec<EvalOutput> = dsl::execute(model)?;
    Ok(outputs
        .iter()
        .flat_map(|o| {
            o.to_string()
                .lines()
                .map(|l| format!("  {l}"))
                .collect::<Vec<_>>()
        })
        .collect())
}

pub fn alice_transcript() -> Result<Vec<String>, DemoError> {
    let model = load_demo(ALICE_OPT)?;
    let mut lines = vec!["Alice's circuits (demos/alice.opt):".to_string()];
    for name in ["P", "D0", "D1"] {
        let t = model
            .test(name)
            .ok_or_else(|| DemoError::Load(format!("missing test {name}")))?;
        let events: Vec<String> = t.events().iter().map(ToString::to_string).collect();
        lines.push(format!("  {name} = {{{}}}", events.join(", ")));
    }
    lines.push("eval statements:".into());
    lines.extend(eval_lines(&model)?);
    let table = alice_table(&model)?;
    for (i, row) in table.iter().enumerate() {
        for (v, p) in row.iter().enumerate() {
            lines.push(format!("P(r{i} | D{v}) = {p}"));
        }
    }
    lines.push(
        "The probability of Alice's preparation outcome depends on which observation she performs later: the theory is not causal."
            .into(),
    );
    Ok(lines)
}

/// Probability of Alice's `D0` outcome `o` in circuit `bob{v}` of the signaling file.
pub fn signaling_table(model: &Model) -> Result<[[u64; 2]; 2], DemoError> {
    let mut table = [[0; 2]; 2];
    for (v, row) in table.iter_mut().enumerate() {
        let c = circuit(model, &format!("bob{v}"))?;
        let alice: NodeId = c
            .test_nodes()
            .into_iter()
            .find(|&id| c.node(id).map(|n| n.label == "DA0").unwrap_or(false))
            .ok_or_else(|| DemoError::Load("bob circuits must contain DA0".into()))?;
        for (o, p) in row.iter_mut().enumerate() {
            *p = c.marginal_probability(&Outcomes::from([(alice, o)]))?;
        }
    }
    Ok(table)
}

pub fn signaling_transcript() -> Result<Vec<String>, DemoError> {
    let model = load_demo(SIGNALING_OPT)?;
    let mut lines = vec!["eval statements of demos/signaling.opt:".to_string()];
    lines.extend(eval_lines(&model)?);
    lines.extend(signaling_demo()?.lines);
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alice_numbers() {
        let model = load_demo(ALICE_OPT).unwrap();
        assert_eq!(alice_table(&model).unwrap(), [[1, 0], [0, 1]]);
        assert!(alice_transcript()
            .unwrap()
            .iter()
            .any(|l| l == "P(r0 | D1) = 0"));
    }

    #[test]
    fn signaling_numbers() {
        let model = load_demo(SIGNALING_OPT).unwrap();
        assert_eq!(signaling_table(&model).unwrap(), [[1, 0], [0, 1]]);
        let lines = signaling_transcript().unwrap();
        assert!(lines
            .iter()
            .any(|l| l == "  view0 @ _, _ = state on 2|>2: {0 -> 0, 1 -> 0}"));
        assert!(lines
            .iter()
            .any(|l| l == "  view1 @ _, _ = state on 2|>2: {0 -> 1, 1 -> 1}"));
        assert!(lines.last().unwrap().contains("D0"));
    }
}
