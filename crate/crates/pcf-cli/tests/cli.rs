use pcf_cli::{run, EXIT_EMPTY_BY_THEORY, EXIT_INVALID, EXIT_OK};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("pcf".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_reports_shift_failure() {
    let (code, out, _) = invoke(&["check", "--p", "3", "--period", "1,-1/3,3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.trim(),
        r#"{"convergent":false,"trace":"8/3","traceValuation":-1,"failedCondition":{"shift":1}}"#
    );
}

#[test]
fn check_rejects_garbage() {
    let (code, _, err) = invoke(&["check", "--p", "3", "--period", "bogus"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("bogus"));
}

#[test]
fn check_rejects_non_prime() {
    let (code, _, err) = invoke(&["check", "--p", "9", "--period", "1"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("prime"));
}

#[test]
fn limit_square_matches() {
    let (code, out, _) = invoke(&[
        "limit", "--p", "53", "--period", "13,9/53,-4", "--prec", "4", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["kind"], "padic");
    let unit: u64 = value["value"]["unitDigits"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    let modulus = 53u64.pow(4);
    assert_eq!((unit as u128 * unit as u128) % modulus as u128, 10);
}

#[test]
fn limit_of_divergent_input_is_empty_by_theory() {
    let (code, _, err) = invoke(&["limit", "--p", "3", "--period", "3"]);
    assert_eq!(code, EXIT_EMPTY_BY_THEORY);
    assert!(err.contains("does not converge"));
}

#[test]
fn member_zero_polynomial_is_empty_by_theory() {
    let (code, _, _) = invoke(&[
        "member", "--p", "3", "--period", "1", "--poly", "0,0,0",
    ]);
    assert_eq!(code, EXIT_EMPTY_BY_THEORY);
}

#[test]
fn member_and_quad_agree_on_table_rows() {
    let (code, out, _) = invoke(&[
        "member", "--p", "3", "--preperiod", "3", "--period", "1,-2/3,1", "--poly", "1,0,-10",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""member":true"#));

    let (code, out, _) = invoke(&["quad", "--p", "3", "--period", "3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.trim(),
        r#"{"quad":{"A":"1","B":"-3","C":"-1"},"zeroQuad":false,"closedForm":"match"}"#
    );
}

#[test]
fn locus_json_round_trips_byte_identical() {
    let (code, out, _) = invoke(&[
        "locus", "--type", "1,2", "--poly", "1,-12,8", "--p", "3", "--height", "20",
        "--valdepth", "0", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string(&value).unwrap(), out.trim());
    assert_eq!(value["points"].as_array().unwrap().len(), 10);
}

#[test]
fn search03_lists_the_53_adic_pair() {
    let (code, out, _) = invoke(&[
        "search03", "--d", "10", "--p", "53", "--max-index", "5", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["a1"], "13");
    assert_eq!(rows[1]["a2"], "9/53");
    assert_eq!(rows[1]["limitCheck"], "ok");
}

#[test]
fn family_subcommands() {
    let (code, out, _) = invoke(&[
        "family", "--kind", "a2plus1", "--a", "2", "--max-n", "3", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);

    let (code, out, _) = invoke(&[
        "family", "--kind", "negpell", "--d", "2", "--max-n", "2", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""p":7"#) && out.contains(r#""p":41"#));

    let (code, _, err) = invoke(&["family", "--kind", "negpell", "--d", "3", "--max-n", "2"]);
    assert_eq!(code, EXIT_EMPTY_BY_THEORY);
    assert!(err.contains("no solution"));

    let (code, out, _) = invoke(&[
        "family", "--kind", "family13", "--a", "3", "--a1", "1", "--p", "3", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""period":["1","-2/3","1"]"#));

    let (code, out, _) = invoke(&[
        "family", "--kind", "family13", "--prime", "13", "--k", "1", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""d":"17""#));

    let (code, _, _) = invoke(&["family", "--kind", "nonsense"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn pell_and_oracle() {
    let (code, out, _) = invoke(&["pell", "--d", "10", "--n", "9", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.trim(),
        r#"{"d":10,"unit":["19","6"],"negPell":["3","1"],"n":9,"fundamentals":[["3","0"],["-7","2"],["7","2"]]}"#
    );

    let (code, out, _) = invoke(&[
        "oracle", "--p", "3", "--period", "1/3", "--prec", "5", "--window", "5,20", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""consistent":true"#));

    let (code, _, _) = invoke(&["pell", "--d", "9"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn outputs_are_deterministic_across_thread_counts() {
    let run_with = |threads: &str| {
        let (code, out, _) = invoke(&[
            "--threads", threads, "locus", "--type", "1,2", "--poly", "1,0,-46", "--p", "3",
            "--height", "50", "--valdepth", "2", "--json",
        ]);
        assert_eq!(code, EXIT_OK);
        out
    };
    // rayon's global pool is fixed by whichever call wins, but results must
    // not depend on it
    assert_eq!(run_with("1"), run_with("4"));
}

#[test]
fn binary_exit_codes_match_library_run() {
    let exe = env!("CARGO_BIN_EXE_pcf");
    let ok = std::process::Command::new(exe)
        .args(["check", "--p", "3", "--period", "3,-1/3,1", "--json"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains(r#""convergent":true"#));

    let bad = std::process::Command::new(exe)
        .args(["check", "--p", "3", "--period", "1/6"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn locus_closed_form_types() {
    let (code, out, _) = invoke(&[
        "locus", "--type", "0,1", "--poly", "1,8/3,-1", "--p", "3", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""point":["-8/3"]"#) && out.contains(r#""complete":true"#));

    let (code, out, _) = invoke(&[
        "locus", "--type", "0,2", "--poly", "3,1,3", "--p", "3", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""point":["-1/3","1/3"],"convergent":true"#));

    let (code, out, _) = invoke(&[
        "locus", "--type", "2,1", "--poly", "0,10,7", "--p", "3", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""kind":"infinity""#));

    let (code, _, err) = invoke(&[
        "locus", "--type", "3,1", "--poly", "1,0,1", "--p", "3",
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("--type"));

    // the zero polynomial is structurally empty
    let (code, _, _) = invoke(&[
        "locus", "--type", "0,1", "--poly", "0,0,0", "--p", "3",
    ]);
    assert_eq!(code, EXIT_EMPTY_BY_THEORY);
}
