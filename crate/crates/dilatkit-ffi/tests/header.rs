//! The handwritten C header must stay in sync with the exported symbols and
//! compile as standalone C.

use std::path::PathBuf;
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_exported_function() {
    let header = std::fs::read_to_string(manifest_dir().join("include/dilatkit.h")).unwrap();
    let source = std::fs::read_to_string(manifest_dir().join("src/lib.rs")).unwrap();
    let mut exported = Vec::new();
    for window in source.split("#[no_mangle]").skip(1) {
        if let Some(pos) = window.find("fn ") {
            let rest = &window[pos + 3..];
            let name: String = rest
                .chars()
                .take_while(|c| c.is_alphanumeric() || *c == '_')
                .collect();
            exported.push(name);
        }
    }
    assert!(!exported.is_empty());
    for name in &exported {
        assert!(
            header.contains(name.as_str()),
            "header is missing declaration for {name}"
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let cc = ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok());
    let Some(cc) = cc else {
        eprintln!("no C compiler available; skipping");
        return;
    };
    let dir = std::env::temp_dir().join(format!("dilatkit_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        "#include \"dilatkit.h\"\nint main(void) {\n  const char *v = dilatkit_version();\n  (void)v;\n  return 0;\n}\n",
    )
    .unwrap();
    let status = Command::new(cc)
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success(), "header failed to compile as C");
}
