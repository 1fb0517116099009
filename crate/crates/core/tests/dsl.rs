use optlab::demo::{ALICE_OPT, SIGNALING_OPT};
use optlab::dsl::{self, EvalOutput};
use optlab::kernel::Branch;
use optlab::{EffectEvent, EventKind, StateEvent, SystemType, TransformationEvent};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = SystemType> {
    (1usize..=4, 1usize..=4).prop_map(|(n, m)| SystemType::new(n, m))
}

fn state() -> impl Strategy<Value = StateEvent> {
    system().prop_flat_map(|sys| {
        let (n, m) = (sys.n(), sys.m());
        prop::collection::vec(prop::option::of(0..m), n)
            .prop_map(move |v| StateEvent::from_values(sys.clone(), v).unwrap())
    })
}

fn effect() -> impl Strategy<Value = EffectEvent> {
    system().prop_flat_map(|sys| {
        let (n, m) = (sys.n(), sys.m());
        (0..n, prop::collection::btree_set(0..m, 0..=m))
            .prop_map(move |(v, e)| EffectEvent::new(sys.clone(), v, e).unwrap())
    })
}

fn transform() -> impl Strategy<Value = TransformationEvent> {
    (system(), system()).prop_flat_map(|(a, b)| {
        let (n, m, q) = (a.n(), a.m(), b.m());
        let branch = prop::option::of(
            (0..n, prop::collection::vec(prop::option::of(0..q), m))
                .prop_map(|(anchor, targets)| Branch { anchor, targets }),
        );
        prop::collection::vec(branch, b.n()).prop_map(move |bs| {
            TransformationEvent::from_branches(a.clone(), b.clone(), bs).unwrap()
        })
    })
}

fn header(a: &SystemType, b: &SystemType) -> String {
    format!(
        "system A = {} |> {}\nsystem B = {} |> {}\n",
        a.n(),
        a.m(),
        b.n(),
        b.m()
    )
}

fn roundtrip(src: &str, name: &str, expected: EventKind) -> Result<(), TestCaseError> {
    let model = dsl::load(src).map_err(|d| TestCaseError::fail(d[0].to_string()))?;
    prop_assert_eq!(model.event(name), Some(expected));
    let printed = dsl::print(&model);
    prop_assert_eq!(&printed, src);
    let again = dsl::load(&printed).map_err(|d| TestCaseError::fail(d[0].to_string()))?;
    prop_assert_eq!(again, model);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn states_roundtrip(x in state()) {
        let src = header(x.system(), x.system()) + &format!("state x : A = {x}\n");
        roundtrip(&src, "x", x.into())?;
    }

    #[test]
    fn effects_roundtrip(x in effect()) {
        let src = header(x.system(), x.system()) + &format!("effect x : A = {x}\n");
        roundtrip(&src, "x", x.into())?;
    }

    #[test]
    fn transforms_roundtrip(x in transform()) {
        let src = header(x.input(), x.output()) + &format!("transform x : A -> B = {x}\n");
        roundtrip(&src, "x", EventKind::from_transformation(x))?;
    }

    #[test]
    fn arbitrary_text_never_panics(src in "[a-z0-9 {}()\\[\\];:,=*@_|>#\n-]{0,80}") {
        let _ = dsl::load(&src);
    }

    #[test]
    fn mutated_demo_never_panics(cut in 0usize..ALICE_OPT.len(), junk in "[^\r]{0,4}") {
        let mut src: String = ALICE_OPT.chars().take(cut).collect();
        src.push_str(&junk);
        src.extend(ALICE_OPT.chars().skip(cut));
        if let Err(diags) = dsl::load(&src) {
            prop_assert!(!diags.is_empty());
            for d in diags {
                prop_assert!(d.span.line >= 1 && d.span.col >= 1);
            }
        }
    }
}

#[test]
fn diagnostics_read_well() {
    let err = dsl::load("system A = 2 |> 2\nstate r : A = {0 -> 1,, 1 -> 0}").unwrap_err();
    let text = err[0].to_string();
    assert!(text.starts_with("2:23: error: unexpected `,`"), "{text}");
    assert!(!err[0].expected.is_empty());

    let err = dsl::load("system A = 2 |> 2\nstate r : B = {0 -> 1}").unwrap_err();
    assert_eq!(err[0].to_string(), "2:11: error: unknown name `B`");

    // recovery reports independent statements
    let err = dsl::load("system A = 2 2\nsystem B 3 |> 3\nsystem C = 1 |> 1").unwrap_err();
    assert_eq!(err.len(), 2, "{err:?}");
    assert_eq!((err[1].span.line, err[1].span.col), (2, 10));
}

#[test]
fn wildcards_and_joint_output() {
    let model = dsl::load(ALICE_OPT).unwrap();
    let out = dsl::execute(&model).unwrap();
    let joint = out
        .iter()
        .find_map(|o| match o {
            EvalOutput::Joint { entries, total, .. } => Some((entries.len(), *total)),
            _ => None,
        })
        .unwrap();
    assert_eq!(joint, (4, 1));

    let src = "system A = 2 |> 2\nstate r : A = {0 -> 1}\nstate z : A = {1 -> 1}\n\
               test P : prep = {r, z}\ncircuit C = P\neval C @ _\neval C @ 1";
    let out = dsl::execute(&dsl::load(src).unwrap()).unwrap();
    let text: Vec<String> = out.iter().map(ToString::to_string).collect();
    assert_eq!(text[0], "C @ _ = state on 2|>2: {0 -> 1, 1 -> 1}");
    assert_eq!(text[1], "C @ 1 = state on 2|>2: {1 -> 1}");
}

#[test]
fn demo_files_print_stably() {
    for src in [ALICE_OPT, SIGNALING_OPT] {
        let model = dsl::load(src).unwrap();
        let once = dsl::print(&model);
        let twice = dsl::print(&dsl::load(&once).unwrap());
        assert_eq!(once, twice);
    }
}

#[test]
fn eval_output_serializes() {
    let model = dsl::load(SIGNALING_OPT).unwrap();
    let out = dsl::execute(&model).unwrap();
    let v = serde_json::to_value(&out).unwrap();
    let kinds: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"normal_form"));
    assert!(kinds.contains(&"joint"));
}
