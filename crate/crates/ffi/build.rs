use cbindgen::{Config, EnumConfig, Language, RenameRule};
use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let output_file = PathBuf::from(&crate_dir).join("include").join("permdeg.h");

    let config = Config {
        language: Language::C,
        include_guard: Some("PERMDEG_H".into()),
        cpp_compat: true,
        sys_includes: vec!["stdint.h".into(), "stdbool.h".into()],
        no_includes: true,
        enumeration: EnumConfig { rename_variants: RenameRule::QualifiedScreamingSnakeCase, ..Default::default() },
        ..Default::default()
    };

    cbindgen::generate_with_config(&crate_dir, config).unwrap().write_to_file(output_file);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
