use std::fmt::Write;

use super::analyze::{CircuitExpr, Item, Model, SystemDef};

/// Canonical source text: one statement per line, LF endings, atoms in
/// pointer order and cells in `(s', t)` order.
pub fn print(model: &Model) -> String {
    let mut out = String::new();
    for item in &model.items {
        print_item(&mut out, item);
        out.push('\n');
    }
    out
}

pub fn print_item(out: &mut String, item: &Item) {
    let _ = match item {
        Item::System { name, def, .. } => match def {
            SystemDef::Literal { n, m } => write!(out, "system {name} = {n} |> {m}"),
            SystemDef::Product { left, right } => write!(out, "system {name} = {left} * {right}"),
        },
        Item::State {
            name,
            system,
            event,
        } => write!(out, "state {name} : {system} = {event}"),
        Item::Effect {
            name,
            system,
            event,
        } => write!(out, "effect {name} : {system} = {event}"),
        Item::Transform {
            name,
            input,
            output,
            event,
        } => write!(out, "transform {name} : {input} -> {output} = {event}"),
        Item::Test {
            name,
            members,
            test,
        } => write!(
            out,
            "test {name} : {} = {{{}}}",
            test.kind(),
            members.join(", ")
        ),
        Item::Circuit { name, expr, .. } => write!(out, "circuit {name} = {}", expression(expr)),
        Item::Eval { name, outcomes } => match outcomes {
            None => write!(out, "eval {name}"),
            Some(list) => {
                let parts: Vec<String> = list
                    .iter()
                    .map(|o| o.map_or("_".to_string(), |v| v.to_string()))
                    .collect();
                write!(out, "eval {name} @ {}", parts.join(", "))
            }
        },
    };
}

/// Prints with the fewest parentheses: `*` binds tighter than `;`.
pub fn expression(expr: &CircuitExpr) -> String {
    match expr {
        CircuitExpr::Name(n) => n.clone(),
        CircuitExpr::Seq(parts) => parts.iter().map(expression).collect::<Vec<_>>().join(" ; "),
        CircuitExpr::Par(parts) => parts
            .iter()
            .map(|p| match p {
                CircuitExpr::Seq(_) => format!("({})", expression(p)),
                _ => expression(p),
            })
            .collect::<Vec<_>>()
            .join(" * "),
    }
}
