//! End-to-end tests of the command-line interface: exit codes, witness
//! output, the machine-readable verdict schema, and document pipelines.

use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn vpts_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("vpts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn ioco_fails_with_witness_ending_in_chg() {
    let out = vpts_cmd(&[
        "ioco",
        "--spec",
        &model("drink_spec.json"),
        "--impl",
        &model("iut_a.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict: fails"), "{text}");
    let witness_line = text
        .lines()
        .find(|l| l.starts_with("witness:"))
        .expect("witness line");
    assert!(witness_line.trim_end().ends_with("chg"), "{witness_line}");
}

#[test]
fn ioco_conforms_on_identical_models() {
    let out = vpts_cmd(&[
        "ioco",
        "--spec",
        &model("drink_spec.json"),
        "--impl",
        &model("drink_spec.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: conforms"));
}

#[test]
fn ioco_json_schema_is_stable() {
    let out = vpts_cmd(&[
        "ioco",
        "--spec",
        &model("drink_spec.json"),
        "--impl",
        &model("iut_b.json"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["verdict"], "fails");
    let witness = value["witness"].as_array().expect("witness array");
    assert_eq!(witness.last().and_then(|v| v.as_str()), Some("dco"));
    for key in ["states", "transitions", "saturation_pairs"] {
        assert!(value["stats"][key].is_u64(), "missing stats.{key}");
    }
}

#[test]
fn empty_reports_witness_x_on_the_fault_language() {
    let out = vpts_cmd(&["empty", &model("fig8_fault_language.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("nonempty"), "{text}");
    assert!(text.contains("witness: x"), "{text}");
}

#[test]
fn conf_flags_the_faulty_implementation() {
    let out = vpts_cmd(&[
        "conf",
        "--spec",
        &model("fig2_spec.json"),
        "--impl",
        &model("fig4_impl.json"),
        "--desired",
        &model("fig10_desired.json"),
        "--forbidden",
        &model("forbidden_extra_b.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("witness: a a b b x"));

    let out = vpts_cmd(&[
        "conf",
        "--spec",
        &model("fig2_spec.json"),
        "--impl",
        &model("fig2_spec.json"),
        "--desired",
        &model("fig10_desired.json"),
        "--forbidden",
        &model("forbidden_extra_b.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn enumerate_lists_the_bounded_language() {
    let out = vpts_cmd(&["enumerate", &model("fig10_desired.json"), "--max-len", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // Words print in lexicographic order.
    assert_eq!(text.lines().collect::<Vec<_>>(), vec!["a a b b x", "a b x", "x"]);
}

#[test]
fn fault_model_output_feeds_passes() {
    let out_path = tmp("drink_fault.json");
    let out = vpts_cmd(&[
        "fault-model",
        "--spec",
        &model("drink_spec.json"),
        "-o",
        &out_path,
    ]);
    assert_eq!(out.status.code(), Some(0));

    let run = vpts_cmd(&[
        "passes",
        "--fault-model",
        &out_path,
        "--impl",
        &model("iut_c.json"),
    ]);
    assert_eq!(run.status.code(), Some(1));
    assert!(stdout(&run).contains("verdict: fails"));

    let run = vpts_cmd(&[
        "passes",
        "--fault-model",
        &out_path,
        "--impl",
        &model("iut_d.json"),
    ]);
    assert_eq!(run.status.code(), Some(0));
}

#[test]
fn closure_outputs_reload_and_compose() {
    // complement(fig10) is nonempty; intersect it back with fig10 and the
    // result is empty.
    let comp_path = tmp("fig10_comp.json");
    let out = vpts_cmd(&["complement", &model("fig10_desired.json"), "-o", &comp_path]);
    assert_eq!(out.status.code(), Some(0));
    let out = vpts_cmd(&["empty", &comp_path]);
    assert_eq!(out.status.code(), Some(1));

    let inter_path = tmp("fig10_and_comp.json");
    let out = vpts_cmd(&[
        "intersect",
        &model("fig10_desired.json"),
        &comp_path,
        "-o",
        &inter_path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = vpts_cmd(&["empty", &inter_path]);
    assert_eq!(out.status.code(), Some(0), "L ∩ comp L must be empty");
}

#[test]
fn concat_and_union_write_loadable_documents() {
    let concat_path = tmp("fig10_concat.json");
    let out = vpts_cmd(&[
        "concat",
        &model("fig10_desired.json"),
        "--suffix-set",
        "x",
        "-o",
        &concat_path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = vpts_cmd(&["enumerate", &concat_path, "--max-len", "2"]);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), vec!["x x"]);

    let union_path = tmp("fig10_or_forbidden.json");
    let out = vpts_cmd(&[
        "union",
        &model("fig10_desired.json"),
        &model("forbidden_extra_b.json"),
        "-o",
        &union_path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = vpts_cmd(&["enumerate", &union_path, "--max-len", "2"]);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), vec!["b", "x"]);
}

#[test]
fn balanced_run_on_the_two_state_system() {
    let out = vpts_cmd(&[
        "balanced",
        &model("fig1_vpts.json"),
        "--from",
        "s0",
        "--to",
        "s1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("balanced run: b c"));
}

#[test]
fn contract_preserves_the_spec_document() {
    let out_path = tmp("fig2_contracted.json");
    let out = vpts_cmd(&["contract", &model("fig2_spec.json"), "-o", &out_path]);
    assert_eq!(out.status.code(), Some(0));
    let original = std::fs::read_to_string(model("fig2_spec.json")).unwrap();
    let contracted = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(original, contracted, "the shipped spec is already contracted");
}

#[test]
fn usage_errors_exit_with_two() {
    // Missing file.
    let out = vpts_cmd(&["empty", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(2));
    // Wrong document kind for the operation.
    let out = vpts_cmd(&[
        "ioco",
        "--spec",
        &model("fig10_desired.json"),
        "--impl",
        &model("fig4_impl.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flags are a clap usage error.
    let out = vpts_cmd(&["ioco", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    // Balanced-run preconditions surface as domain errors.
    let out = vpts_cmd(&[
        "balanced",
        &model("fig1_vpts.json"),
        "--from",
        "s0",
        "--to",
        "s0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
