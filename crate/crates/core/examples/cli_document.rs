//! Drives the command-line front end in-process on a JSON document.

fn main() {
    let doc = r#"{"format": 1, "order": 2, "coeffs": [["0", "0", "1"], ["0", "1"], ["-1/9", "0", "1"]], "options": {"trunc": 8}}"#;
    let path = std::env::temp_dir().join("odeseries-example.json");
    std::fs::write(&path, doc).expect("temporary file");
    for command in ["classify", "indicial"] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = ["odeseries", command, path.to_str().expect("utf-8 path")];
        let code = odeseries::cli::run(args, &mut out, &mut err);
        println!("$ odeseries {command} (exit {code})\n{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
    }
    let _ = std::fs::remove_file(path);
}
