//! Name resolution, kernel validation and circuit construction.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, PortRef, Test, TestError, TestKind};
use crate::kernel::{Cell, EffectEvent, EventKind, StateEvent, TransformationEvent};
use crate::system::SystemType;

use super::ast::{Expr, Ident, Nat, SourceUnit, Stmt, StmtKind};
use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemDef {
    Literal { n: usize, m: usize },
    Product { left: String, right: String },
}

/// A circuit expression with associativity flattened and names resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitExpr {
    Name(String),
    Seq(Vec<CircuitExpr>),
    Par(Vec<CircuitExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    System {
        name: String,
        def: SystemDef,
        system: SystemType,
    },
    State {
        name: String,
        system: String,
        event: StateEvent,
    },
    Effect {
        name: String,
        system: String,
        event: EffectEvent,
    },
    Transform {
        name: String,
        input: String,
        output: String,
        event: TransformationEvent,
    },
    Test {
        name: String,
        members: Vec<String>,
        test: Test,
    },
    Circuit {
        name: String,
        expr: CircuitExpr,
        circuit: Circuit,
    },
    /// `None` entries are summed over.
    Eval {
        name: String,
        outcomes: Option<Vec<Option<usize>>>,
    },
}

impl Item {
    /// Declared name; for `eval` the circuit it refers to.
    pub fn name(&self) -> &str {
        match self {
            Item::System { name, .. }
            | Item::State { name, .. }
            | Item::Effect { name, .. }
            | Item::Transform { name, .. }
            | Item::Test { name, .. }
            | Item::Circuit { name, .. }
            | Item::Eval { name, .. } => name,
        }
    }

    fn what(&self) -> &'static str {
        match self {
            Item::System { .. } => "system",
            Item::State { .. } => "state",
            Item::Effect { .. } => "effect",
            Item::Transform { .. } => "transform",
            Item::Test { .. } => "test",
            Item::Circuit { .. } => "circuit",
            Item::Eval { .. } => "eval",
        }
    }
}

/// The analyzed program: declarations in source order, all validated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub items: Vec<Item>,
}

impl Model {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items
            .iter()
            .find(|i| !matches!(i, Item::Eval { .. }) && i.name() == name)
    }

    pub fn system(&self, name: &str) -> Option<&SystemType> {
        match self.get(name)? {
            Item::System { system, .. } => Some(system),
            _ => None,
        }
    }

    pub fn event(&self, name: &str) -> Option<EventKind> {
        match self.get(name)? {
            Item::State { event, .. } => Some(event.clone().into()),
            Item::Effect { event, .. } => Some(event.clone().into()),
            Item::Transform { event, .. } => Some(EventKind::from_transformation(event.clone())),
            _ => None,
        }
    }

    pub fn test(&self, name: &str) -> Option<&Test> {
        match self.get(name)? {
            Item::Test { test, .. } => Some(test),
            _ => None,
        }
    }

    pub fn circuit(&self, name: &str) -> Option<&Circuit> {
        match self.get(name)? {
            Item::Circuit { circuit, .. } => Some(circuit),
            _ => None,
        }
    }

    pub fn tests(&self) -> impl Iterator<Item = &Test> {
        self.items.iter().filter_map(|i| match i {
            Item::Test { test, .. } => Some(test),
            _ => None,
        })
    }

    /// Builds the circuit denoted by a single name, as `eval` does.
    pub fn circuit_for(&self, name: &str) -> Option<Circuit> {
        let mut circuit = Circuit::new();
        let expr = Expr::Name(Ident {
            name: name.to_string(),
            span: Span::default(),
        });
        Builder { model: self }.build(&expr, &mut circuit).ok()?;
        Some(circuit)
    }
}

/// Bound on `n` and `m` of any declared system, so that a typo cannot ask
/// for an astronomically large event table.
pub const MAX_SIZE: usize = 1024;

/// Validates a parsed file. Analysis stops at the first failing statement,
/// since later statements usually depend on it.
pub fn analyze(unit: &SourceUnit) -> Result<Model, Vec<Diagnostic>> {
    let mut model = Model::default();
    for stmt in &unit.stmts {
        let item = analyze_stmt(&model, stmt).map_err(|d| vec![d])?;
        model.items.push(item);
    }
    Ok(model)
}

fn declare(model: &Model, name: &Ident) -> Result<String, Diagnostic> {
    if let Some(prev) = model.get(&name.name) {
        return Err(Diagnostic::new(
            name.span,
            format!("`{}` is already declared as a {}", name.name, prev.what()),
        ));
    }
    Ok(name.name.clone())
}

fn lookup<'m>(model: &'m Model, name: &Ident) -> Result<&'m Item, Diagnostic> {
    model
        .get(&name.name)
        .ok_or_else(|| Diagnostic::new(name.span, format!("unknown name `{}`", name.name)))
}

fn system_ref(model: &Model, name: &Ident) -> Result<SystemType, Diagnostic> {
    match lookup(model, name)? {
        Item::System { system, .. } => Ok(system.clone()),
        other => Err(Diagnostic::new(
            name.span,
            format!("`{}` is a {}, expected a system", name.name, other.what()),
        )),
    }
}

fn bounded(nat: &Nat, what: &str, bound: usize, sys: &SystemType) -> Result<usize, Diagnostic> {
    if nat.value < bound {
        Ok(nat.value)
    } else {
        Err(Diagnostic::new(
            nat.span,
            format!(
                "{what} {} out of range for {sys} (must be < {bound})",
                nat.value
            ),
        ))
    }
}

fn analyze_stmt(model: &Model, stmt: &Stmt) -> Result<Item, Diagnostic> {
    let kernel = |e: crate::kernel::KernelError| Diagnostic::new(stmt.span, e.to_string());
    Ok(match &stmt.kind {
        StmtKind::SystemLit { name, n, m } => {
            let name = declare(model, name)?;
            for nat in [n, m] {
                if nat.value == 0 || nat.value > MAX_SIZE {
                    return Err(Diagnostic::new(
                        nat.span,
                        format!("system sizes must lie in 1..={MAX_SIZE}"),
                    ));
                }
            }
            Item::System {
                name,
                def: SystemDef::Literal {
                    n: n.value,
                    m: m.value,
                },
                system: SystemType::new(n.value, m.value),
            }
        }
        StmtKind::SystemProduct { name, left, right } => {
            let name = declare(model, name)?;
            let a = system_ref(model, left)?;
            let b = system_ref(model, right)?;
            if a.n() * b.n() > MAX_SIZE || a.m() * b.m() > MAX_SIZE {
                return Err(Diagnostic::new(
                    right.span,
                    format!("composite {}{} exceeds {MAX_SIZE} pointers or values", a, b),
                ));
            }
            Item::System {
                name,
                def: SystemDef::Product {
                    left: left.name.clone(),
                    right: right.name.clone(),
                },
                system: a.compose(&b),
            }
        }
        StmtKind::State {
            name,
            system,
            pairs,
        } => {
            let name = declare(model, name)?;
            let sys = system_ref(model, system)?;
            let mut seen = BTreeMap::new();
            let mut checked = Vec::new();
            for (i, v) in pairs {
                let p = bounded(i, "pointer", sys.n(), &sys)?;
                let x = bounded(v, "value", sys.m(), &sys)?;
                if let Some(prev) = seen.insert(p, x) {
                    return Err(Diagnostic::new(
                        i.span,
                        format!("pointer {p} assigned both {prev} and {x}"),
                    ));
                }
                checked.push((p, x));
            }
            let event = StateEvent::new(sys, checked).map_err(kernel)?;
            Item::State {
                name,
                system: system.name.clone(),
                event,
            }
        }
        StmtKind::Effect {
            name,
            system,
            pointer,
            values,
        } => {
            let name = declare(model, name)?;
            let sys = system_ref(model, system)?;
            let v = bounded(pointer, "pointer", sys.n(), &sys)?;
            let mut set = Vec::new();
            for x in values {
                let x_val = bounded(x, "value", sys.m(), &sys)?;
                if set.contains(&x_val) {
                    return Err(Diagnostic::new(
                        x.span,
                        format!("value {x_val} listed twice"),
                    ));
                }
                set.push(x_val);
            }
            let event = EffectEvent::new(sys, v, set).map_err(kernel)?;
            Item::Effect {
                name,
                system: system.name.clone(),
                event,
            }
        }
        StmtKind::Transform {
            name,
            input,
            output,
            cells,
        } => {
            let name = declare(model, name)?;
            let a = system_ref(model, input)?;
            let b = system_ref(model, output)?;
            let mut event = TransformationEvent::zero(a.clone(), b.clone());
            for c in cells {
                let cell = Cell {
                    input_value: bounded(&c.input_value, "input value", a.m(), &a)?,
                    output_pointer: bounded(&c.output_pointer, "output pointer", b.n(), &b)?,
                    anchor: bounded(&c.anchor, "anchor", a.n(), &a)?,
                    output_value: bounded(&c.output_value, "output value", b.m(), &b)?,
                };
                event
                    .insert_cell(cell)
                    .map_err(|e| Diagnostic::new(c.input_value.span, e.to_string()))?;
            }
            Item::Transform {
                name,
                input: input.name.clone(),
                output: output.name.clone(),
                event,
            }
        }
        StmtKind::Test { name, kind, events } => {
            let label = declare(model, name)?;
            let mut resolved = Vec::new();
            for id in events {
                let item = lookup(model, id)?;
                let event = model.event(&id.name).ok_or_else(|| {
                    Diagnostic::new(
                        id.span,
                        format!("`{}` is a {}, expected an event", id.name, item.what()),
                    )
                })?;
                resolved.push(event);
            }
            let test = Test::with_kind(label.clone(), *kind, resolved).map_err(|e| {
                let span = match &e {
                    TestError::KindMismatch { index, .. }
                    | TestError::SystemMismatch { index, .. } => events[*index].span,
                    _ => name.span,
                };
                Diagnostic::new(span, test_message(&e, *kind))
            })?;
            Item::Test {
                name: label,
                members: events.iter().map(|e| e.name.clone()).collect(),
                test,
            }
        }
        StmtKind::Circuit { name, expr } => {
            let label = declare(model, name)?;
            let mut circuit = Circuit::new();
            Builder { model }.build(expr, &mut circuit)?;
            if let Err(errors) = circuit.typecheck() {
                let msg: Vec<String> = errors.iter().map(ToString::to_string).collect();
                return Err(Diagnostic::new(expr.span(), msg.join("; ")));
            }
            Item::Circuit {
                name: label,
                expr: canonical(expr),
                circuit,
            }
        }
        StmtKind::Eval { name, outcomes } => {
            lookup(model, name)?;
            let mut circuit = Circuit::new();
            let expr = Expr::Name(name.clone());
            Builder { model }.build(&expr, &mut circuit)?;
            let outcomes = match outcomes {
                None => None,
                Some(list) => {
                    let tests = circuit.test_nodes();
                    if list.len() != tests.len() {
                        return Err(Diagnostic::new(
                            name.span,
                            format!(
                                "`{}` has {} tests but {} outcomes were given",
                                name.name,
                                tests.len(),
                                list.len()
                            ),
                        ));
                    }
                    let mut resolved = Vec::new();
                    for (lit, id) in list.iter().zip(tests) {
                        let node = circuit.node(id).expect("test node exists");
                        let count = node.payload.outcome_count().expect("test node");
                        resolved.push(match lit {
                            None => None,
                            Some(nat) if nat.value < count => Some(nat.value),
                            Some(nat) => {
                                return Err(Diagnostic::new(
                                    nat.span,
                                    format!(
                                    "outcome {} out of range for test `{}` with {count} outcomes",
                                    nat.value, node.label
                                ),
                                ))
                            }
                        });
                    }
                    Some(resolved)
                }
            };
            Item::Eval {
                name: name.name.clone(),
                outcomes,
            }
        }
    })
}

fn test_message(e: &TestError, kind: TestKind) -> String {
    match e {
        TestError::KindMismatch { found, .. } => {
            format!("a {kind} test cannot contain a {found}")
        }
        other => other.to_string(),
    }
}

fn canonical(expr: &Expr) -> CircuitExpr {
    match expr {
        Expr::Name(id) => CircuitExpr::Name(id.name.clone()),
        Expr::Seq(parts) => {
            let mut out = Vec::new();
            for p in parts {
                match canonical(p) {
                    CircuitExpr::Seq(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            CircuitExpr::Seq(out)
        }
        Expr::Par(parts) => {
            let mut out = Vec::new();
            for p in parts {
                match canonical(p) {
                    CircuitExpr::Par(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            CircuitExpr::Par(out)
        }
    }
}

/// Re-attaches a span to a stored expression so it can be rebuilt.
fn with_span(expr: &CircuitExpr, span: Span) -> Expr {
    match expr {
        CircuitExpr::Name(name) => Expr::Name(Ident {
            name: name.clone(),
            span,
        }),
        CircuitExpr::Seq(parts) => Expr::Seq(parts.iter().map(|p| with_span(p, span)).collect()),
        CircuitExpr::Par(parts) => Expr::Par(parts.iter().map(|p| with_span(p, span)).collect()),
    }
}

/// Open wire ends of a sub-expression, in order.
struct Fragment {
    inputs: Vec<(PortRef, SystemType)>,
    outputs: Vec<(PortRef, SystemType)>,
}

struct Builder<'m> {
    model: &'m Model,
}

impl Builder<'_> {
    fn build(&self, expr: &Expr, circuit: &mut Circuit) -> Result<Fragment, Diagnostic> {
        match expr {
            Expr::Name(id) => self.node(id, circuit),
            Expr::Par(parts) => {
                let mut frag = Fragment {
                    inputs: Vec::new(),
                    outputs: Vec::new(),
                };
                for p in parts {
                    let f = self.build(p, circuit)?;
                    frag.inputs.extend(f.inputs);
                    frag.outputs.extend(f.outputs);
                }
                Ok(frag)
            }
            Expr::Seq(parts) => {
                let mut frag = self.build(&parts[0], circuit)?;
                for p in &parts[1..] {
                    let next = self.build(p, circuit)?;
                    if frag.outputs.len() != next.inputs.len() {
                        return Err(Diagnostic::new(
                            p.span(),
                            format!(
                                "wire arity mismatch: left side has {} output wires, right side has {} input wires",
                                frag.outputs.len(),
                                next.inputs.len()
                            ),
                        ));
                    }
                    for (k, ((from, a), (to, b))) in
                        frag.outputs.iter().zip(&next.inputs).enumerate()
                    {
                        if !a.matches(b) {
                            return Err(Diagnostic::new(
                                p.span(),
                                format!("wire type mismatch at wire {k}: {a} feeds {b}"),
                            ));
                        }
                        circuit.connect(*from, *to);
                    }
                    frag.outputs = next.outputs;
                }
                Ok(frag)
            }
        }
    }

    fn node(&self, id: &Ident, circuit: &mut Circuit) -> Result<Fragment, Diagnostic> {
        let item = lookup(self.model, id)?;
        let node = match item {
            Item::System { system, .. } => circuit.add_event(
                id.name.clone(),
                EventKind::from_transformation(TransformationEvent::identity(system.clone())),
            ),
            Item::State { .. } | Item::Effect { .. } | Item::Transform { .. } => {
                let event = self.model.event(&id.name).expect("an event item");
                circuit.add_event(id.name.clone(), event)
            }
            Item::Test { test, .. } => circuit.add_test(test.clone()),
            Item::Circuit { expr, .. } => return self.build(&with_span(expr, id.span), circuit),
            Item::Eval { .. } => unreachable!("eval items are not looked up"),
        };
        let n = circuit.node(node).expect("just added");
        Ok(Fragment {
            inputs: n
                .inputs
                .iter()
                .enumerate()
                .map(|(k, s)| (PortRef::new(node, k), s.clone()))
                .collect(),
            outputs: n
                .outputs
                .iter()
                .enumerate()
                .map(|(k, s)| (PortRef::new(node, k), s.clone()))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn load(src: &str) -> Result<Model, Diagnostic> {
        analyze(&parse(src).unwrap()).map_err(|mut d| d.remove(0))
    }

    const HEAD: &str = "system A = 2 |> 2\n";

    #[test]
    fn identity_transform_acts_as_identity() {
        let src = format!(
            "{HEAD}transform T : A -> A = {{(0,0)->(0,0),(1,0)->(0,1),(0,1)->(1,0),(1,1)->(1,1)}}\n"
        );
        let m = load(&src).unwrap();
        let t = m.event("T").unwrap();
        let t = t.as_transformation().unwrap();
        assert_eq!(*t, TransformationEvent::identity(SystemType::new(2, 2)));
    }

    #[test]
    fn semantic_errors() {
        let err = load(&format!(
            "{HEAD}state r : A = {{0 -> 1}}\ntest P : prep = {{r}}\n"
        ))
        .unwrap_err();
        assert_eq!(err.message, "events do not sum to deterministic");
        let err = load(&format!(
            "{HEAD}transform T : A -> A = {{(0,0)->(0,0),(1,0)->(1,1)}}\n"
        ))
        .unwrap_err();
        assert!(err.message.contains("anchor conflict"), "{err}");
        assert_eq!(err.span, Span { line: 2, col: 39 });
        let err = load(&format!(
            "{HEAD}state r : A = {{0 -> 1, 1 -> 0}}\nstate s : A = {{0 -> 1}}\ntest P : prep = {{r, s}}\n"
        ))
        .unwrap_err();
        assert!(err.message.contains("overlap"), "{err}");
        let err = load(&format!("{HEAD}circuit C = A ; B\n")).unwrap_err();
        assert_eq!(err.message, "unknown name `B`");
        let err = load(&format!(
            "{HEAD}state r : A = {{0 -> 1, 1 -> 0}}\ntest P : prep = {{r}}\ncircuit C = P ; A * A\n"
        ))
        .unwrap_err();
        assert!(err.message.contains("arity"), "{err}");
        let err = load(&format!(
            "{HEAD}system B = 3 |> 2\nstate r : A = {{0 -> 1, 1 -> 0}}\ntest P : prep = {{r}}\ncircuit C = P ; B\n"
        ))
        .unwrap_err();
        assert!(err.message.contains("type mismatch"), "{err}");
        let err = load(&format!("{HEAD}system A = 3 |> 3\n")).unwrap_err();
        assert!(err.message.contains("already declared"));
        let err = load(&format!("{HEAD}state r : A = {{2 -> 0}}\n")).unwrap_err();
        assert_eq!(err.span, Span { line: 2, col: 16 });
    }

    #[test]
    fn builds_sequential_and_parallel_wiring() {
        let src = format!(
            "{HEAD}system AA = A * A\nstate e : AA = {{0 -> 0, 1 -> 2, 2 -> 1, 3 -> 3}}\n\
             test S : prep = {{e}}\neffect x : A = [v = 0; E = {{0, 1}}]\ntest D : obs = {{x}}\n\
             circuit C = S ; (A ; A) * D\ncircuit C2 = C ; D\neval C2 @ 0, 0, 0\n"
        );
        let m = load(&src).unwrap();
        let c = m.circuit("C2").unwrap();
        assert_eq!(c.nodes().len(), 5);
        assert!(c.is_closed());
        assert_eq!(
            m.items.last(),
            Some(&Item::Eval {
                name: "C2".into(),
                outcomes: Some(vec![Some(0), Some(0), Some(0)])
            })
        );
        match m.get("C") {
            Some(Item::Circuit { expr, .. }) => assert_eq!(
                *expr,
                CircuitExpr::Seq(vec![
                    CircuitExpr::Name("S".into()),
                    CircuitExpr::Par(vec![
                        CircuitExpr::Seq(vec![
                            CircuitExpr::Name("A".into()),
                            CircuitExpr::Name("A".into())
                        ]),
                        CircuitExpr::Name("D".into())
                    ])
                ])
            ),
            other => panic!("{other:?}"),
        }
    }
}
